//! Catalan functions `phi^j_t` of the infinite system
//! `dphi^i/dt = sum_{j<=i} phi^j phi^{i-j} - eps^i`.
//!
//! The right side for index `i` only involves indices `<= i`, so the first
//! `k_max + 1` equations form a closed system and truncating there is exact.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ode::integrate_backward_refined;
use crate::params::check_steps;
use crate::scalar::{f_closed_unchecked, polar_root, PolarRoot};
use crate::{Error, Result, RiccatiParams, TimeGrid};

/// Largest tolerated imaginary part of a quadrature Fourier coefficient.
pub const QUADRATURE_RESIDUE_THRESHOLD: f64 = 1e-9;

pub const DEFAULT_M_POINTS: usize = 256;

/// `phi^j_{t_m}` for `j = 0..=k_max`; `values[m][j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfiniteSolution {
    pub k_max: usize,
    pub params: RiccatiParams,
    pub grid: TimeGrid,
    pub values: Vec<Vec<f64>>,
}

impl InfiniteSolution {
    pub fn value(&self, m: usize, j: usize) -> f64 {
        self.values[m][j]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()))
    }
}

/// RK4 on the truncated lower-triangular system.
pub fn solve_triangular(params: &RiccatiParams, k_max: usize, n_steps: usize) -> Result<InfiniteSolution> {
    solve_triangular_refined(params, k_max, n_steps, 1)
}

/// As [`solve_triangular`], with `substeps` RK4 steps per grid interval.
pub fn solve_triangular_refined(
    params: &RiccatiParams,
    k_max: usize,
    n_steps: usize,
    substeps: usize,
) -> Result<InfiniteSolution> {
    params.validate()?;
    check_steps(n_steps)?;
    let grid = TimeGrid::new(params.t_final, n_steps);
    let terminal: Vec<f64> = (0..=k_max).map(|i| params.terminal(i)).collect();
    let forcing: Vec<f64> = (0..=k_max).map(|i| params.forcing(i)).collect();
    let values = integrate_backward_refined(&terminal, grid, substeps, |y, out| {
        for i in 0..y.len() {
            let mut acc = 0.0;
            for j in 0..=i {
                acc += y[j] * y[i - j];
            }
            out[i] = acc - forcing[i];
        }
    });
    Ok(InfiniteSolution {
        k_max,
        params: *params,
        grid,
        values,
    })
}

/// Uniform-rule approximation of `int_0^1 g(x) e^{2 pi i j x} dx` from samples
/// `g(k/m)`, `k = 0..m`.
pub fn fourier_quadrature(samples: &[Complex64], j: usize) -> Complex64 {
    let m = samples.len();
    let sum = samples.iter().enumerate().fold(Complex64::new(0.0, 0.0), |acc, (k, s)| {
        let angle = 2.0 * PI * ((j * k) % m) as f64 / m as f64;
        acc + s * Complex64::from_polar(1.0, angle)
    });
    sum / m as f64
}

fn unit_roots(m_points: usize) -> Result<Vec<PolarRoot>> {
    (0..m_points).map(|k| polar_root(k as f64 / m_points as f64)).collect()
}

/// Samples `f_t(k/m)` for `k = 0..m`.
pub fn f_samples(params: &RiccatiParams, t: f64, m_points: usize) -> Result<Vec<Complex64>> {
    params.validate()?;
    params.check_time(t)?;
    unit_roots(m_points)?
        .iter()
        .map(|root| f_closed_unchecked(params, t, root))
        .collect()
}

/// `phi^0_t..=phi^{j_max}_t` as Fourier coefficients of `f_t`.
pub fn fourier_coefficients(params: &RiccatiParams, t: f64, j_max: usize, m_points: usize) -> Result<Vec<f64>> {
    if m_points < 16 || m_points < 4 * (j_max + 1) {
        return Err(Error::invalid("m_points", m_points, "m_points >= max(16, 4 (j_max + 1))"));
    }
    let samples = f_samples(params, t, m_points)?;
    (0..=j_max)
        .map(|j| {
            let c = fourier_quadrature(&samples, j);
            if c.im.abs() > QUADRATURE_RESIDUE_THRESHOLD {
                return Err(Error::ResidueExceeded {
                    residue: c.im.abs(),
                    threshold: QUADRATURE_RESIDUE_THRESHOLD,
                });
            }
            Ok(c.re)
        })
        .collect()
}

/// Grid maximum of `|f_t(x)|` over `t_i = i T/(t_grid_size - 1)` and
/// `x_l = l/(x_grid_size - 1)`; a lower estimate of `sup |f|`.
pub fn sup_bound_ct(params: &RiccatiParams, t_grid_size: usize, x_grid_size: usize) -> Result<f64> {
    params.validate()?;
    if t_grid_size < 32 {
        return Err(Error::invalid("t_grid_size", t_grid_size, "t_grid_size >= 32"));
    }
    if x_grid_size < 32 {
        return Err(Error::invalid("x_grid_size", x_grid_size, "x_grid_size >= 32"));
    }
    let grid = TimeGrid::new(params.t_final, t_grid_size - 1);
    let roots: Vec<PolarRoot> = (0..x_grid_size)
        .map(|l| polar_root(if l + 1 == x_grid_size { 1.0 } else { l as f64 / (x_grid_size - 1) as f64 }))
        .collect::<Result<_>>()?;
    let mut best = 0.0f64;
    for t in grid.times() {
        for root in &roots {
            best = best.max(f_closed_unchecked(params, t, root)?.norm());
        }
    }
    Ok(best)
}
