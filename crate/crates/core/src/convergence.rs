//! Numerical evidence that the periodic N-player solution converges to the
//! Catalan functions: pointwise gaps, product and tail sums, the uniform gap
//! `D_N(T)` and its Gronwall bound `c_{N,1}(T) exp(int_0^T c_{N,2})`.
//!
//! The finite side comes from the spectral solver and the infinite side from
//! the exactly truncated triangular system, integrated with
//! [`REFERENCE_SUBSTEPS`] RK4 steps per grid interval so that its error sits
//! at round-off rather than at the `h^4` level of the finite grid.
//! All suprema are grid maxima.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::finite::{idft, solve_spectral, FiniteSolution};
use crate::infinite::{f_samples, fourier_quadrature, solve_triangular_refined, InfiniteSolution};
use crate::params::check_steps;
use crate::{Error, Result, RiccatiParams, TimeGrid};

pub const DEFAULT_N_LIST: [usize; 6] = [8, 16, 32, 64, 128, 256];
pub const DEFAULT_N_STEPS: usize = 1000;
pub const REFERENCE_SUBSTEPS: usize = 8;
/// Required agreement between the direct cyclic product sum and its Riemann-sum form.
pub const RIEMANN_IDENTITY_TOLERANCE: f64 = 1e-10;

/// `|phi^j_t(N) - phi^j_t|` on the whole grid for one `N`; `gaps[m][j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapTable {
    pub n: usize,
    pub gaps: Vec<Vec<f64>>,
}

impl GapTable {
    pub fn max(&self) -> f64 {
        self.gaps.iter().flatten().fold(0.0f64, |a, v| a.max(*v))
    }
}

/// A quantity indexed by system size, component and time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexedValue {
    pub n: usize,
    pub index: usize,
    pub t: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GronwallTriple {
    pub n: usize,
    pub c_n1: f64,
    pub integral_c_n2: f64,
    pub bound: f64,
}

/// Cyclic product sum at one `(N, i, t)` evaluated both ways, with the
/// infinite-system head sum it converges to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductSum {
    pub n: usize,
    pub cyclic: f64,
    pub riemann: Complex64,
    pub infinite: f64,
}

impl ProductSum {
    pub fn gap(&self) -> f64 {
        (self.cyclic - self.infinite).abs()
    }

    pub fn identity_error(&self) -> f64 {
        (Complex64::new(self.cyclic, 0.0) - self.riemann).norm()
    }
}

/// Tail `sum_{j=i+1}^{N-1} phi^j phi^{N+i-j}` with the head and full sums it splits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailSum {
    pub n: usize,
    pub tail: f64,
    pub head: f64,
    pub full: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub params: RiccatiParams,
    pub k: usize,
    pub n_list: Vec<usize>,
    pub grid: TimeGrid,
    pub probe_times: Vec<f64>,
    pub pointwise_gaps: Vec<GapTable>,
    pub uniform_gaps: Vec<f64>,
    pub product_gaps: Vec<IndexedValue>,
    pub tail_sums: Vec<IndexedValue>,
    pub gronwall: Vec<GronwallTriple>,
    /// Least-squares slope of `ln D_N` against `N`; informational only.
    pub decay_rate: Option<f64>,
}

fn check_n_list(n_list: &[usize], needed: usize, what: &'static str) -> Result<usize> {
    let min = *n_list
        .iter()
        .min()
        .ok_or_else(|| Error::invalid("n_list", "[]", "non-empty list of sizes >= 2"))?;
    if min < 2 {
        return Err(Error::invalid("n_list", min, "sizes >= 2"));
    }
    if needed + 1 > min {
        return Err(Error::invalid(what, needed, "index <= min(n_list) - 1 (products: - 2)"));
    }
    Ok(min)
}

fn grid_index(grid: &TimeGrid, t: f64) -> Result<usize> {
    let m = grid.nearest(t);
    if !(0.0..=grid.t_final).contains(&t) || (grid.time(m) - t).abs() > 1e-9 * grid.t_final {
        return Err(Error::Domain {
            value: t.to_string(),
            domain: "a point of the time grid in [0, T]",
        });
    }
    Ok(m)
}

/// Finite solution row at time `t` from the closed form: `idft(f_t(k/N))`.
pub fn finite_row(params: &RiccatiParams, n: usize, t: f64) -> Result<Vec<f64>> {
    let samples = f_samples(params, t, n)?;
    Ok(idft(&samples).into_iter().map(|v| v.re).collect())
}

fn reference(params: &RiccatiParams, k_max: usize, n_steps: usize) -> Result<InfiniteSolution> {
    check_steps(n_steps)?;
    solve_triangular_refined(params, k_max, n_steps, REFERENCE_SUBSTEPS)
}

fn cyclic_product(phi: &[f64], i: usize) -> f64 {
    let n = phi.len();
    (0..n).map(|j| phi[j] * phi[(n + i - j) % n]).sum()
}

fn head_product(phi: &[f64], i: usize) -> f64 {
    let n = phi.len();
    (0..=i).map(|j| phi[j] * phi[(n + i - j) % n]).sum()
}

fn tail_product(phi: &[f64], i: usize) -> f64 {
    let n = phi.len();
    (i + 1..n).map(|j| phi[j] * phi[(n + i - j) % n]).sum()
}

fn infinite_product(phi: &[f64], i: usize) -> f64 {
    (0..=i).map(|j| phi[j] * phi[i - j]).sum()
}

/// `|phi^j_t(N) - phi^j_t|` for each `N` in `n_list`; `t` must lie on the grid.
pub fn pointwise_gap(
    params: &RiccatiParams,
    j: usize,
    t: f64,
    n_list: &[usize],
    n_steps: usize,
) -> Result<Vec<f64>> {
    params.validate()?;
    check_n_list(n_list, j, "j")?;
    let reference = reference(params, j, n_steps)?;
    let m = grid_index(&reference.grid, t)?;
    let limit = reference.values[m][j];
    n_list
        .iter()
        .map(|&n| Ok((finite_row(params, n, t)?[j] - limit).abs()))
        .collect()
}

/// Cyclic product sum against the infinite head sum for each `N`.
pub fn product_sums(
    params: &RiccatiParams,
    i: usize,
    t: f64,
    n_list: &[usize],
    n_steps: usize,
) -> Result<Vec<ProductSum>> {
    params.validate()?;
    check_n_list(n_list, i + 1, "i")?;
    let reference = reference(params, i, n_steps)?;
    let m = grid_index(&reference.grid, t)?;
    let infinite = infinite_product(&reference.values[m], i);
    n_list
        .iter()
        .map(|&n| {
            let samples = f_samples(params, t, n)?;
            let squared: Vec<Complex64> = samples.iter().map(|f| f * f).collect();
            let phi: Vec<f64> = idft(&samples).into_iter().map(|v| v.re).collect();
            Ok(ProductSum {
                n,
                cyclic: cyclic_product(&phi, i),
                riemann: fourier_quadrature(&squared, i),
                infinite,
            })
        })
        .collect()
}

/// Absolute product-sum gaps; fails if the Riemann-sum form disagrees with
/// the direct cyclic sum by more than [`RIEMANN_IDENTITY_TOLERANCE`].
pub fn product_sum_gap(
    params: &RiccatiParams,
    i: usize,
    t: f64,
    n_list: &[usize],
    n_steps: usize,
) -> Result<Vec<f64>> {
    product_sums(params, i, t, n_list, n_steps)?
        .iter()
        .map(|p| {
            let err = p.identity_error();
            if err > RIEMANN_IDENTITY_TOLERANCE {
                return Err(Error::ResidueExceeded {
                    residue: err,
                    threshold: RIEMANN_IDENTITY_TOLERANCE,
                });
            }
            Ok(p.gap())
        })
        .collect()
}

pub fn tail_sums(params: &RiccatiParams, i: usize, t: f64, n_list: &[usize]) -> Result<Vec<TailSum>> {
    params.validate()?;
    params.check_time(t)?;
    check_n_list(n_list, i + 1, "i")?;
    n_list
        .iter()
        .map(|&n| {
            let phi = finite_row(params, n, t)?;
            Ok(TailSum {
                n,
                tail: tail_product(&phi, i),
                head: head_product(&phi, i),
                full: cyclic_product(&phi, i),
            })
        })
        .collect()
}

/// `|sum_{j=i+1}^{N-1} phi^j_t phi^{N+i-j}_t|` for each `N`.
pub fn tail_sum(params: &RiccatiParams, i: usize, t: f64, n_list: &[usize]) -> Result<Vec<f64>> {
    Ok(tail_sums(params, i, t, n_list)?.iter().map(|s| s.tail.abs()).collect())
}

struct SizeResult {
    gaps: GapTable,
    gronwall: GronwallTriple,
}

fn trapezoid(values: &[f64], h: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        len => h * (values[1..len - 1].iter().sum::<f64>() + 0.5 * (values[0] + values[len - 1])),
    }
}

fn analyse_size(finite: &FiniteSolution, infinite: &InfiniteSolution, k: usize) -> SizeResult {
    let grid = finite.grid;
    let gaps: Vec<Vec<f64>> = finite
        .values
        .iter()
        .zip(&infinite.values)
        .map(|(f, inf)| (0..=k).map(|j| (f[j] - inf[j]).abs()).collect())
        .collect();

    let max_tail = finite
        .values
        .iter()
        .flat_map(|row| (0..=k).map(move |i| tail_product(row, i).abs()))
        .fold(0.0f64, f64::max);
    let c_n1 = grid.t_final * max_tail;

    // c_{N,2}(t_m) = K sup_{i <= K, u in [T - t_m, T]} max(|phi^i_u|, |varphi^i_u|)
    let mut running = 0.0f64;
    let mut suffix_max = vec![0.0; grid.len()];
    for m in (0..grid.len()).rev() {
        for i in 0..=k {
            running = running.max(finite.values[m][i].abs()).max(infinite.values[m][i].abs());
        }
        suffix_max[m] = running;
    }
    let c_n2: Vec<f64> = (0..grid.len())
        .map(|m| k as f64 * suffix_max[grid.n_steps - m])
        .collect();
    let integral_c_n2 = trapezoid(&c_n2, grid.step());

    SizeResult {
        gaps: GapTable { n: finite.n, gaps },
        gronwall: GronwallTriple {
            n: finite.n,
            c_n1,
            integral_c_n2,
            bound: c_n1 * integral_c_n2.exp(),
        },
    }
}

fn size_result(params: &RiccatiParams, k: usize, n: usize, infinite: &InfiniteSolution) -> Result<SizeResult> {
    let (finite, _) = solve_spectral(params, n, infinite.grid.n_steps)?;
    Ok(analyse_size(&finite, infinite, k))
}

/// `(c_{N,1}(T), int_0^T c_{N,2}, bound)` for one `N`.
pub fn gronwall_bound(params: &RiccatiParams, k: usize, n: usize, n_steps: usize) -> Result<GronwallTriple> {
    params.validate()?;
    check_n_list(&[n], k, "K")?;
    let infinite = reference(params, k, n_steps)?;
    Ok(size_result(params, k, n, &infinite)?.gronwall)
}

/// Least-squares slope of `ln y` against `x` over positive `y`.
pub fn log_linear_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(_, y)| **y > 0.0)
        .map(|(x, y)| (*x, y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

impl ConvergenceReport {
    /// Uniform gaps and Gronwall triples for every `N`, plus product and tail
    /// sums at each probe time. Sizes are processed in parallel and gathered
    /// in `n_list` order.
    pub fn sweep(
        params: &RiccatiParams,
        k: usize,
        n_list: &[usize],
        n_steps: usize,
        probe_times: &[f64],
    ) -> Result<Self> {
        params.validate()?;
        check_n_list(n_list, k, "K")?;
        let infinite = reference(params, k, n_steps)?;
        let grid = infinite.grid;
        for &t in probe_times {
            grid_index(&grid, t)?;
        }

        let per_size = n_list
            .par_iter()
            .map(|&n| size_result(params, k, n, &infinite))
            .collect::<Result<Vec<_>>>()?;

        let min_n = *n_list.iter().min().unwrap_or(&2);
        let max_product_index = k.min(min_n.saturating_sub(2));
        let mut product_gaps = Vec::new();
        let mut tails = Vec::new();
        for &t in probe_times {
            let m = grid_index(&grid, t)?;
            for &n in n_list {
                let phi = finite_row(params, n, t)?;
                for i in 0..=max_product_index {
                    let infinite_sum = infinite_product(&infinite.values[m], i);
                    product_gaps.push(IndexedValue {
                        n,
                        index: i,
                        t,
                        value: (cyclic_product(&phi, i) - infinite_sum).abs(),
                    });
                    tails.push(IndexedValue {
                        n,
                        index: i,
                        t,
                        value: tail_product(&phi, i).abs(),
                    });
                }
            }
        }

        let uniform_gaps: Vec<f64> = per_size.iter().map(|r| r.gaps.max()).collect();
        let xs: Vec<f64> = n_list.iter().map(|&n| n as f64).collect();
        Ok(ConvergenceReport {
            params: *params,
            k,
            n_list: n_list.to_vec(),
            grid,
            probe_times: probe_times.to_vec(),
            decay_rate: log_linear_slope(&xs, &uniform_gaps),
            uniform_gaps,
            gronwall: per_size.iter().map(|r| r.gronwall).collect(),
            pointwise_gaps: per_size.into_iter().map(|r| r.gaps).collect(),
            product_gaps,
            tail_sums: tails,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Uniform gap sweep: [`ConvergenceReport::sweep`] without probe times.
pub fn uniform_gap(params: &RiccatiParams, k: usize, n_list: &[usize], n_steps: usize) -> Result<ConvergenceReport> {
    ConvergenceReport::sweep(params, k, n_list, n_steps, &[])
}
