//! Fixed-step classical RK4 for terminal value problems.
//!
//! Every system here is specified at `t = T` and integrated backward. The
//! integrator works in reversed time `tau = T - t`, where `dy/dtau = -F(y)`,
//! and returns rows in ascending `t` so that row `m` is the state at
//! `t_m = m * T / n_steps`.

use std::ops::{Add, Mul};

use crate::TimeGrid;

/// Scalar types the integrator can carry (`f64` and `Complex<f64>`).
pub trait Field: Copy + Default + Add<Output = Self> + Mul<f64, Output = Self> {}

impl<T> Field for T where T: Copy + Default + Add<Output = T> + Mul<f64, Output = T> {}

/// Integrates `dy/dt = rhs(y)` backward from `terminal` at `t = T` over `grid`.
///
/// `rhs(y, out)` writes the forward-time derivative into `out`.
pub fn integrate_backward<T, F>(terminal: &[T], grid: TimeGrid, rhs: F) -> Vec<Vec<T>>
where
    T: Field,
    F: FnMut(&[T], &mut [T]),
{
    integrate_backward_refined(terminal, grid, 1, rhs)
}

/// As [`integrate_backward`], taking `substeps` RK4 steps per grid interval.
pub fn integrate_backward_refined<T, F>(
    terminal: &[T],
    grid: TimeGrid,
    substeps: usize,
    mut rhs: F,
) -> Vec<Vec<T>>
where
    T: Field,
    F: FnMut(&[T], &mut [T]),
{
    let dim = terminal.len();
    let substeps = substeps.max(1);
    let h = grid.step() / substeps as f64;

    let mut rows = vec![Vec::new(); grid.len()];
    let mut y = terminal.to_vec();
    let mut k1 = vec![T::default(); dim];
    let mut k2 = vec![T::default(); dim];
    let mut k3 = vec![T::default(); dim];
    let mut k4 = vec![T::default(); dim];
    let mut tmp = vec![T::default(); dim];

    rows[grid.n_steps] = y.clone();
    for m in (0..grid.n_steps).rev() {
        for _ in 0..substeps {
            // reversed time: dy/dtau = -rhs(y)
            rhs(&y, &mut k1);
            for i in 0..dim {
                tmp[i] = y[i] + k1[i] * (-0.5 * h);
            }
            rhs(&tmp, &mut k2);
            for i in 0..dim {
                tmp[i] = y[i] + k2[i] * (-0.5 * h);
            }
            rhs(&tmp, &mut k3);
            for i in 0..dim {
                tmp[i] = y[i] + k3[i] * (-h);
            }
            rhs(&tmp, &mut k4);
            for i in 0..dim {
                let incr = k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i];
                y[i] = y[i] + incr * (-h / 6.0);
            }
        }
        rows[m] = y.clone();
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_decay_fourth_order() {
        // dy/dt = y, y(T) = 1  =>  y(t) = exp(t - T)
        let err = |n: usize| {
            let grid = TimeGrid::new(1.0, n);
            let rows = integrate_backward(&[1.0f64], grid, |y, out| out[0] = y[0]);
            (rows[0][0] - (-1.0f64).exp()).abs()
        };
        let (e1, e2) = (err(20), err(40));
        let order = (e1 / e2).log2();
        assert!((order - 4.0).abs() < 0.1, "observed order {order}");
    }

    #[test]
    fn terminal_row_is_untouched() {
        let grid = TimeGrid::new(2.0, 10);
        let rows = integrate_backward(&[3.0f64, -1.0], grid, |y, out| {
            out[0] = y[0] * y[1];
            out[1] = -y[0];
        });
        assert_eq!(rows[10], vec![3.0, -1.0]);
        assert_eq!(rows.len(), 11);
    }

    #[test]
    fn substeps_refine() {
        let grid = TimeGrid::new(1.0, 10);
        let coarse = integrate_backward(&[1.0f64], grid, |y, out| out[0] = y[0] * y[0]);
        let fine = integrate_backward_refined(&[1.0f64], grid, 8, |y, out| out[0] = y[0] * y[0]);
        // y' = y^2, y(1) = 1  =>  y(t) = 1 / (2 - t)
        let exact = 0.5;
        assert!((fine[0][0] - exact).abs() < (coarse[0][0] - exact).abs());
    }
}
