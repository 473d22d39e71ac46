//! The per-mode scalar Riccati equation
//! `df/dt = f^2 - (1 - e^{-2 pi i x}) eps`, `f_T(x) = c (1 - e^{-2 pi i x})`,
//! solved in closed form, plus the generating function of the infinite system
//! and the spectrum of the block matrix `M = [[0, I], [E, 0]]`.
//!
//! All square roots are principal. The closed form is even under `w -> -w`,
//! so the branch does not change `f`; fixing it keeps evaluation deterministic.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ode::integrate_backward;
use crate::params::check_steps;
use crate::{Error, Result, RiccatiParams, TimeGrid};

/// Closed-form denominators below this magnitude are reported as blow-up.
pub const SINGULARITY_THRESHOLD: f64 = 1e-300;

/// Principal square root `w` of `1 - e^{-2 pi i x}` in polar form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarRoot {
    pub x: f64,
    pub r: f64,
    pub theta: f64,
    pub w: Complex64,
}

/// `1 - e^{-2 pi i x}`, with the real part written as `2 sin^2(pi x)` to
/// avoid cancellation near `x = 0` and `x = 1`.
pub fn symbol(x: f64) -> Complex64 {
    let s = (PI * x).sin();
    Complex64::new(2.0 * s * s, (2.0 * PI * x).sin())
}

fn check_unit(x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain {
            value: x.to_string(),
            domain: "[0, 1]",
        });
    }
    Ok(())
}

pub fn polar_root(x: f64) -> Result<PolarRoot> {
    check_unit(x)?;
    let w = symbol(x).sqrt();
    Ok(PolarRoot {
        x,
        r: w.norm(),
        theta: w.arg(),
        w,
    })
}

/// `g (a+ - a- e^{-2 g s}) / (a+ + a- e^{-2 g s})` with `s = T - t`.
///
/// This is the ratio `(a+ e+ - a- e-) / (a+ e+ + a- e-)` divided through by
/// `e+`; `Re g >= 0` keeps `e^{-2 g s}` bounded for any horizon.
fn riccati_ratio(g: Complex64, a_plus: Complex64, a_minus: Complex64, s: f64) -> Option<Complex64> {
    let decay = (-2.0 * g * s).exp();
    let den = a_plus + a_minus * decay;
    if den.norm() < SINGULARITY_THRESHOLD {
        return None;
    }
    Some(g * (a_plus - a_minus * decay) / den)
}

/// Closed-form solution `f_t(x)` of the auxiliary Riccati equation.
pub fn f_closed(params: &RiccatiParams, t: f64, x: f64) -> Result<Complex64> {
    params.validate()?;
    params.check_time(t)?;
    let root = polar_root(x)?;
    f_closed_unchecked(params, t, &root)
}

pub(crate) fn f_closed_unchecked(params: &RiccatiParams, t: f64, root: &PolarRoot) -> Result<Complex64> {
    let sqrt_eps = params.eps.sqrt();
    let g = root.w * sqrt_eps;
    let a_plus = sqrt_eps + root.w * params.c;
    let a_minus = sqrt_eps - root.w * params.c;
    riccati_ratio(g, a_plus, a_minus, params.t_final - t).ok_or_else(|| {
        let decay = (-2.0 * g * (params.t_final - t)).exp();
        Error::Singularity {
            t,
            x: root.x,
            magnitude: (a_plus + a_minus * decay).norm(),
        }
    })
}

/// `f_closed` on every point of `grid` for a fixed `x`.
pub fn f_closed_on_grid(params: &RiccatiParams, x: f64, grid: TimeGrid) -> Result<Vec<Complex64>> {
    params.validate()?;
    let root = polar_root(x)?;
    grid.times().map(|t| f_closed_unchecked(params, t, &root)).collect()
}

/// RK4 oracle for `f_t(x)` over the uniform grid with `n_steps` intervals.
pub fn f_ode_oracle(params: &RiccatiParams, x: f64, n_steps: usize) -> Result<Vec<Complex64>> {
    params.validate()?;
    check_unit(x)?;
    check_steps(n_steps)?;
    let forcing = symbol(x) * params.eps;
    let terminal = symbol(x) * params.c;
    let grid = TimeGrid::new(params.t_final, n_steps);
    let rows = integrate_backward(&[terminal], grid, |y, out| out[0] = y[0] * y[0] - forcing);
    Ok(rows.into_iter().map(|r| r[0]).collect())
}

/// Generating function `S_t(z) = sum_k z^k phi^k_t` of the infinite system, `|z| < 1`.
pub fn generating_function(params: &RiccatiParams, t: f64, z: Complex64) -> Result<Complex64> {
    params.validate()?;
    params.check_time(t)?;
    if z.norm().is_nan() || z.norm() >= 1.0 {
        return Err(Error::Domain {
            value: z.to_string(),
            domain: "|z| < 1",
        });
    }
    let one_minus_z = Complex64::new(1.0, 0.0) - z;
    let q = (one_minus_z * params.eps).sqrt();
    let a_plus = q + one_minus_z * params.c;
    let a_minus = q - one_minus_z * params.c;
    riccati_ratio(q, a_plus, a_minus, params.t_final - t).ok_or(Error::Singularity {
        t,
        x: f64::NAN,
        magnitude: 0.0,
    })
}

/// Eigenvalues `+-sqrt(eps (1 - e^{2 pi i k / n}))`, `k = 0..n`, of the
/// `2n x 2n` block matrix `M`, ordered `[+v_0, -v_0, +v_1, -v_1, ...]`.
pub fn m_eigenvalues(params: &RiccatiParams, n: usize) -> Result<Vec<Complex64>> {
    params.validate()?;
    if n < 2 {
        return Err(Error::invalid("n", n, "n >= 2"));
    }
    let mut out = Vec::with_capacity(2 * n);
    for k in 0..n {
        // 1 - e^{+i a} is the conjugate of symbol(k/n)
        let v = (symbol(k as f64 / n as f64).conj() * params.eps).sqrt();
        out.push(v);
        out.push(-v);
    }
    Ok(out)
}
