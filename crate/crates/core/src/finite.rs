//! The periodic N-function Riccati system
//! `dphi^i/dt = sum_j phi^j phi^{N+i-j} - eps^i`, indices mod N,
//! solved by direct RK4, by the DFT and the closed-form per-mode solution, and
//! by Vaughan stepping of the circulant matrix Riccati equation.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{circulant, matrix_exponential, right_divide};
use crate::ode::integrate_backward;
use crate::params::check_steps;
use crate::scalar::{f_closed_unchecked, polar_root};
use crate::{Error, Result, RiccatiParams, TimeGrid};

/// Largest tolerated imaginary part after inverting the DFT of a real solution.
pub const IMAGINARY_RESIDUE_THRESHOLD: f64 = 1e-10;

/// Smallest LU pivot accepted inside Vaughan stepping.
pub const PIVOT_THRESHOLD: f64 = 1e-12;

fn twiddles(n: usize, sign: f64) -> Vec<Complex64> {
    (0..n)
        .map(|r| Complex64::from_polar(1.0, sign * 2.0 * PI * r as f64 / n as f64))
        .collect()
}

fn transform(seq: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = seq.len();
    let tw = twiddles(n, sign);
    (0..n)
        .map(|k| {
            seq.iter()
                .enumerate()
                .fold(Complex64::new(0.0, 0.0), |acc, (j, v)| acc + v * tw[(j * k) % n])
        })
        .collect()
}

/// Unnormalised forward DFT, `out[k] = sum_j seq[j] e^{-2 pi i jk/n}`.
pub fn dft(seq: &[Complex64]) -> Vec<Complex64> {
    transform(seq, -1.0)
}

pub fn dft_real(seq: &[f64]) -> Vec<Complex64> {
    let c: Vec<Complex64> = seq.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    dft(&c)
}

/// Inverse DFT, `out[j] = (1/n) sum_k seq[k] e^{2 pi i jk/n}`.
pub fn idft(seq: &[Complex64]) -> Vec<Complex64> {
    let n = seq.len() as f64;
    transform(seq, 1.0).into_iter().map(|v| v / n).collect()
}

/// Cyclic self-convolution `out[i] = sum_j phi[j] phi[(n + i - j) mod n]`,
/// summed left to right in `j`.
pub fn cyclic_self_convolution(phi: &[f64], out: &mut [f64]) {
    let n = phi.len();
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for j in 0..n {
            acc += phi[j] * phi[(n + i - j) % n];
        }
        *o = acc;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Direct,
    Spectral,
    Matrix,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Direct, Method::Spectral, Method::Matrix];

    pub fn name(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Spectral => "spectral",
            Method::Matrix => "matrix",
        }
    }
}

/// `phi^i_{t_m}` for `i = 0..n` on a uniform time grid; `values[m][i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteSolution {
    pub n: usize,
    pub params: RiccatiParams,
    pub grid: TimeGrid,
    pub values: Vec<Vec<f64>>,
}

impl FiniteSolution {
    pub fn value(&self, m: usize, i: usize) -> f64 {
        self.values[m][i % self.n]
    }

    pub fn terminal_row(&self) -> &[f64] {
        &self.values[self.grid.n_steps]
    }

    /// Largest `|sum_i phi^i_{t_m}|` over the grid.
    pub fn max_row_sum(&self) -> f64 {
        self.values
            .iter()
            .map(|row| row.iter().sum::<f64>().abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &FiniteSolution) -> Result<f64> {
        if self.n != other.n || self.grid != other.grid {
            return Err(Error::DimensionMismatch(format!(
                "cannot compare N={} on {} steps with N={} on {} steps",
                self.n, self.grid.n_steps, other.n, other.grid.n_steps
            )));
        }
        Ok(self
            .values
            .iter()
            .flatten()
            .zip(other.values.iter().flatten())
            .fold(0.0f64, |a, (x, y)| a.max((x - y).abs())))
    }
}

/// DFT coefficients `hat phi^k_{t_m}`; `coeffs[m][k]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralCoefficients {
    pub n: usize,
    pub grid: TimeGrid,
    pub coeffs: Vec<Vec<Complex64>>,
}

impl SpectralCoefficients {
    /// Largest `|coeffs[m][n-k] - conj(coeffs[m][k])|`.
    pub fn conjugate_asymmetry(&self) -> f64 {
        let n = self.n;
        self.coeffs
            .iter()
            .flat_map(|row| (1..n).map(move |k| (row[n - k] - row[k].conj()).norm()))
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().flatten().fold(0.0f64, |a, v| a.max(v.norm()))
    }
}

fn check_players(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::invalid("n", n, "n >= 2"));
    }
    Ok(())
}

fn terminal_vector(params: &RiccatiParams, n: usize) -> Vec<f64> {
    (0..n).map(|i| params.terminal(i)).collect()
}

/// Direct RK4 integration of the periodic system.
pub fn solve_direct(params: &RiccatiParams, n: usize, n_steps: usize) -> Result<FiniteSolution> {
    params.validate()?;
    check_players(n)?;
    check_steps(n_steps)?;
    let grid = TimeGrid::new(params.t_final, n_steps);
    let forcing: Vec<f64> = (0..n).map(|i| params.forcing(i)).collect();
    let values = integrate_backward(&terminal_vector(params, n), grid, |y, out| {
        cyclic_self_convolution(y, out);
        for (o, f) in out.iter_mut().zip(&forcing) {
            *o -= f;
        }
    });
    Ok(FiniteSolution {
        n,
        params: *params,
        grid,
        values,
    })
}

/// Per-mode closed form `hat phi^k_t = f_t(k/n)` followed by an inverse DFT.
pub fn solve_spectral(
    params: &RiccatiParams,
    n: usize,
    n_steps: usize,
) -> Result<(FiniteSolution, SpectralCoefficients)> {
    params.validate()?;
    check_players(n)?;
    check_steps(n_steps)?;
    let grid = TimeGrid::new(params.t_final, n_steps);
    let roots = (0..n)
        .map(|k| polar_root(k as f64 / n as f64))
        .collect::<Result<Vec<_>>>()?;

    let mut coeffs = Vec::with_capacity(grid.len());
    let mut values = Vec::with_capacity(grid.len());
    for t in grid.times() {
        let row = roots
            .iter()
            .map(|root| f_closed_unchecked(params, t, root))
            .collect::<Result<Vec<_>>>()?;
        let inverse = idft(&row);
        let residue = inverse.iter().fold(0.0f64, |a, v| a.max(v.im.abs()));
        if residue > IMAGINARY_RESIDUE_THRESHOLD {
            return Err(Error::ResidueExceeded {
                residue,
                threshold: IMAGINARY_RESIDUE_THRESHOLD,
            });
        }
        values.push(inverse.iter().map(|v| v.re).collect());
        coeffs.push(row);
    }
    Ok((
        FiniteSolution {
            n,
            params: *params,
            grid,
            values,
        },
        SpectralCoefficients { n, grid, coeffs },
    ))
}

/// Circulant matrices of the matrix Riccati form `dPhi/dt = Phi Phi - E`, `Phi(T) = C`.
#[derive(Debug, Clone)]
pub struct MatrixSystem {
    pub n: usize,
    pub e: DMatrix<f64>,
    pub c: DMatrix<f64>,
    /// `[[0, I], [E, 0]]`
    pub m: DMatrix<f64>,
}

/// Blocks of `O(tau) = exp(M tau)`.
#[derive(Debug, Clone)]
pub struct Propagator {
    pub o11: DMatrix<f64>,
    pub o12: DMatrix<f64>,
    pub o21: DMatrix<f64>,
    pub o22: DMatrix<f64>,
}

impl MatrixSystem {
    pub fn new(params: &RiccatiParams, n: usize) -> Result<Self> {
        params.validate()?;
        check_players(n)?;
        let e = circulant(&(0..n).map(|i| params.forcing(i)).collect::<Vec<_>>());
        let c = circulant(&terminal_vector(params, n));
        let mut m = DMatrix::<f64>::zeros(2 * n, 2 * n);
        m.view_mut((0, n), (n, n)).fill_with_identity();
        m.view_mut((n, 0), (n, n)).copy_from(&e);
        Ok(MatrixSystem { n, e, c, m })
    }

    pub fn propagator(&self, tau: f64) -> Result<Propagator> {
        let o = matrix_exponential(&self.m, tau)?;
        let n = self.n;
        Ok(Propagator {
            o11: o.view((0, 0), (n, n)).into_owned(),
            o12: o.view((0, n), (n, n)).into_owned(),
            o21: o.view((n, 0), (n, n)).into_owned(),
            o22: o.view((n, n), (n, n)).into_owned(),
        })
    }
}

impl Propagator {
    /// `(O21 + O22 psi)(O11 + O12 psi)^{-1}`
    pub fn apply(&self, psi: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let num = &self.o21 + &self.o22 * psi;
        let den = &self.o11 + &self.o12 * psi;
        right_divide(&num, &den, PIVOT_THRESHOLD)
    }
}

fn matrix_steps(params: &RiccatiParams, d_tau: f64) -> Result<usize> {
    if !(d_tau.is_finite() && d_tau > 0.0 && d_tau <= params.t_final) {
        return Err(Error::invalid("d_tau", d_tau, "0 < d_tau <= t_final"));
    }
    let ratio = params.t_final / d_tau;
    let steps = ratio.round();
    if (ratio - steps).abs() > 1e-9 * ratio {
        return Err(Error::invalid("d_tau", d_tau, "t_final / d_tau integral"));
    }
    Ok(steps as usize)
}

/// `Psi(k dtau)` for `k = 0..=T/dtau` by Vaughan stepping from `Psi(0) = C`.
pub fn vaughan_steps(params: &RiccatiParams, n: usize, d_tau: f64) -> Result<Vec<DMatrix<f64>>> {
    let steps = matrix_steps(params, d_tau)?;
    let system = MatrixSystem::new(params, n)?;
    let grid = TimeGrid::new(params.t_final, steps);
    let prop = system.propagator(grid.step())?;
    let mut psi = Vec::with_capacity(steps + 1);
    psi.push(system.c.clone());
    for k in 0..steps {
        let next = prop.apply(&psi[k])?;
        psi.push(next);
    }
    Ok(psi)
}

/// Matrix Riccati path: the first column of `Phi(t) = Psi(T - t)`.
pub fn solve_matrix(params: &RiccatiParams, n: usize, d_tau: f64) -> Result<FiniteSolution> {
    let psi = vaughan_steps(params, n, d_tau)?;
    let steps = psi.len() - 1;
    let grid = TimeGrid::new(params.t_final, steps);
    let values = (0..=steps)
        .map(|m| psi[steps - m].column(0).iter().copied().collect())
        .collect();
    Ok(FiniteSolution {
        n,
        params: *params,
        grid,
        values,
    })
}

/// Dispatch to one of the three solvers on a grid with `n_steps` intervals.
pub fn solve(method: Method, params: &RiccatiParams, n: usize, n_steps: usize) -> Result<FiniteSolution> {
    match method {
        Method::Direct => solve_direct(params, n, n_steps),
        Method::Spectral => solve_spectral(params, n, n_steps).map(|(s, _)| s),
        Method::Matrix => {
            check_steps(n_steps)?;
            solve_matrix(params, n, params.t_final / n_steps as f64)
        }
    }
}
