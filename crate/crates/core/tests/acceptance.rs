//! Acceptance suite: one status line per criterion, sub-checks indented below.
//! Exits non-zero if any criterion fails.

use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use riccati_catalan::catalan::{catalan_sequence, closed_form_step, stationary_from_catalan, stationary_solution};
use riccati_catalan::convergence::{
    pointwise_gap, product_sums, tail_sum, uniform_gap, DEFAULT_N_LIST, RIEMANN_IDENTITY_TOLERANCE,
};
use riccati_catalan::finite::{self, solve_direct, solve_matrix, solve_spectral, MatrixSystem, Method};
use riccati_catalan::infinite::{fourier_coefficients, solve_triangular, sup_bound_ct};
use riccati_catalan::linalg::characteristic_determinant;
use riccati_catalan::scalar::{f_closed_on_grid, f_ode_oracle, generating_function, m_eigenvalues};
use riccati_catalan::{RiccatiParams, TimeGrid};

const EPS_SET: [f64; 3] = [0.5, 1.0, 2.0];
const C_SET: [f64; 2] = [0.0, 1.0];
const DOUBLINGS: [usize; 5] = [16, 32, 64, 128, 256];
const PROBE_TIMES: [f64; 2] = [0.0, 0.5];

struct Check {
    label: String,
    pass: bool,
    detail: String,
}

fn check(label: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
    Check {
        label: label.into(),
        pass,
        detail: detail.into(),
    }
}

fn params(eps: f64, c: f64) -> RiccatiParams {
    RiccatiParams::new(eps, c, 1.0).unwrap()
}

fn parameter_sweep() -> impl Iterator<Item = RiccatiParams> {
    EPS_SET.into_iter().flat_map(|e| C_SET.into_iter().map(move |c| params(e, c)))
}

/// First place where `values` fails to decrease strictly, if any.
fn first_non_decrease(values: &[f64], sizes: &[usize]) -> Option<String> {
    values.windows(2).zip(sizes.windows(2)).find(|(v, _)| v[1] >= v[0]).map(|(v, n)| {
        format!("N={}: {:.3e} -> N={}: {:.3e}", n[0], v[0], n[1], v[1])
    })
}

/// Strict-decrease sub-check over a family of sequences.
fn decrease_check(label: &str, series: &[(String, Vec<f64>)]) -> Check {
    let violations: Vec<String> = series
        .iter()
        .filter_map(|(name, v)| first_non_decrease(v, &DOUBLINGS).map(|w| format!("{name}: {w}")))
        .collect();
    let detail = if violations.is_empty() {
        format!("{} sequences strictly decreasing", series.len())
    } else {
        format!(
            "{}/{} sequences stall; first: {}",
            violations.len(),
            series.len(),
            violations[0]
        )
    };
    check(label, violations.is_empty(), detail)
}

fn fmt_series(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>().join(" ")
}

fn c1_catalan() -> Vec<Check> {
    let seq = catalan_sequence(30).unwrap();
    let exact = seq.values.iter().enumerate().skip(1).all(|(n, &v)| closed_form_step(seq.values[n - 1], n) == Some(v));
    vec![
        check("recurrence equals closed formula, n <= 30", exact, format!("C_30 = {}", seq.values[30])),
        check("first values 1, 1, 2", seq.values[..3] == [1, 1, 2], format!("{:?}", &seq.values[..3])),
    ]
}

fn c2_stationary() -> Vec<Check> {
    let s = stationary_solution(20);
    let worst = (1..=20)
        .map(|i| (s.values[i] - stationary_from_catalan(i).unwrap()).abs() / s.values[i].abs())
        .fold(0.0f64, f64::max);
    vec![check("relative identity error <= 1e-12, 1 <= i <= 20", worst <= 1e-12, format!("max {worst:.2e}"))]
}

fn c3_closed_form() -> Vec<Check> {
    let n_steps = 10_000;
    let mut worst = 0.0f64;
    for p in parameter_sweep() {
        for x in [0.05, 0.25, 0.5, 0.75, 0.95] {
            let ode = f_ode_oracle(&p, x, n_steps).unwrap();
            let closed = f_closed_on_grid(&p, x, TimeGrid::new(1.0, n_steps)).unwrap();
            for (a, b) in ode.iter().zip(&closed) {
                worst = worst.max((a - b).norm());
            }
        }
    }
    vec![check("RK4 (1e4 steps) vs closed form <= 1e-8", worst <= 1e-8, format!("max {worst:.2e}"))]
}

fn c4_three_way() -> Vec<Check> {
    let mut worst = 0.0f64;
    for p in parameter_sweep() {
        for n in [4, 8, 16] {
            let sols: Vec<_> = Method::ALL.iter().map(|&m| finite::solve(m, &p, n, 1000).unwrap()).collect();
            for a in 0..3 {
                for b in a + 1..3 {
                    worst = worst.max(sols[a].max_abs_diff(&sols[b]).unwrap());
                }
            }
        }
    }
    vec![check("pairwise max-abs difference <= 1e-5", worst <= 1e-5, format!("max {worst:.2e}"))]
}

fn c5_conservation() -> Vec<Check> {
    let (mut row_sum, mut asym, mut finite_excess, mut infinite_excess) = (0.0f64, 0.0f64, f64::MIN, f64::MIN);
    for p in parameter_sweep() {
        // Grid sizes chosen so the estimate samples every (t_m, k/N) used below.
        let c_t = sup_bound_ct(&p, 1001, 1025).unwrap();
        for n in [4, 8, 16] {
            let (spectral, coeffs) = solve_spectral(&p, n, 1000).unwrap();
            let direct = solve_direct(&p, n, 1000).unwrap();
            let matrix = solve_matrix(&p, n, 1e-3).unwrap();
            for s in [&direct, &spectral, &matrix] {
                row_sum = row_sum.max(s.max_row_sum());
            }
            asym = asym.max(coeffs.conjugate_asymmetry());
            let vmax = direct.max_abs().max(spectral.max_abs()).max(matrix.max_abs());
            finite_excess = finite_excess.max((vmax - coeffs.max_abs()).max(coeffs.max_abs() - c_t));
        }
        let inf = solve_triangular(&p, 16, 1000).unwrap();
        infinite_excess = infinite_excess.max(inf.max_abs() - c_t);
    }
    vec![
        check("row sums <= 1e-10", row_sum <= 1e-10, format!("max {row_sum:.2e}")),
        check("spectral conjugate symmetry <= 1e-12", asym <= 1e-12, format!("max {asym:.2e}")),
        check(
            "finite values <= max coefficient <= c_T (+1e-8)",
            finite_excess <= 1e-8,
            format!("max excess {finite_excess:.2e}"),
        ),
        check(
            "infinite values <= c_T (+1e-8)",
            infinite_excess <= 1e-8,
            format!("max excess {infinite_excess:.2e}"),
        ),
    ]
}

fn c6_pointwise() -> Vec<Check> {
    let p = params(1.0, 1.0);
    let mut series = Vec::new();
    let mut worst_final = 0.0f64;
    for t in PROBE_TIMES {
        for j in 0..=4 {
            let gaps = pointwise_gap(&p, j, t, &DOUBLINGS, 1000).unwrap();
            worst_final = worst_final.max(gaps[gaps.len() - 1]);
            println!("      j={j} t={t}: {}", fmt_series(&gaps));
            series.push((format!("j={j} t={t}"), gaps));
        }
    }
    vec![
        decrease_check("gaps decrease at every doubling 16 -> 256", &series),
        check("gap(N=256) <= 1e-6", worst_final <= 1e-6, format!("max {worst_final:.2e}")),
    ]
}

fn c7_products() -> Vec<Check> {
    let p = params(1.0, 1.0);
    let (mut gaps, mut tails) = (Vec::new(), Vec::new());
    let mut identity = 0.0f64;
    for t in PROBE_TIMES {
        for i in 0..=4 {
            let sums = product_sums(&p, i, t, &DOUBLINGS, 1000).unwrap();
            identity = sums.iter().map(|s| s.identity_error()).fold(identity, f64::max);
            let g: Vec<f64> = sums.iter().map(|s| s.gap()).collect();
            let tl = tail_sum(&p, i, t, &DOUBLINGS).unwrap();
            println!("      i={i} t={t}: gap {} | tail {}", fmt_series(&g), fmt_series(&tl));
            gaps.push((format!("gap i={i} t={t}"), g));
            tails.push((format!("tail i={i} t={t}"), tl));
        }
    }
    vec![
        decrease_check("product-sum gaps decrease at every doubling", &gaps),
        decrease_check("tail sums decrease at every doubling", &tails),
        check(
            "Riemann-sum form matches cyclic sum <= 1e-10",
            identity <= RIEMANN_IDENTITY_TOLERANCE,
            format!("max {identity:.2e}"),
        ),
    ]
}

fn c8_uniform() -> Vec<Check> {
    let p = params(1.0, 1.0);
    let report = uniform_gap(&p, 4, &DEFAULT_N_LIST, 1000).unwrap();
    let d = &report.uniform_gaps;
    for g in &report.gronwall {
        let dn = d[report.n_list.iter().position(|&n| n == g.n).unwrap()];
        println!("      N={:>3}: D_N {:.3e}  bound {:.3e}", g.n, dn, g.bound);
    }
    let decrease = first_non_decrease(d, &report.n_list);
    let violated: Vec<usize> = report
        .gronwall
        .iter()
        .zip(d)
        .filter(|(g, dn)| **dn > g.bound)
        .map(|(g, _)| g.n)
        .collect();
    let last = d[d.len() - 1];
    vec![
        check(
            "D_N decreases at every doubling",
            decrease.is_none(),
            decrease.unwrap_or_else(|| fmt_series(d)),
        ),
        check("D_256 <= 1e-6", last <= 1e-6, format!("{last:.2e}")),
        check(
            "D_N <= c_N1 exp(int c_N2) for every N",
            violated.is_empty(),
            if violated.is_empty() { "all sizes".to_string() } else { format!("violated at N = {violated:?}") },
        ),
    ]
}

fn c9_spectrum() -> Vec<Check> {
    let (mut ratio, mut modulus_excess) = (0.0f64, f64::MIN);
    for eps in EPS_SET {
        let p = params(eps, 1.0);
        for n in [4, 8] {
            let m = MatrixSystem::new(&p, n).unwrap().m;
            for lambda in m_eigenvalues(&p, n).unwrap() {
                let at = characteristic_determinant(&m, lambda).unwrap().norm();
                let off = characteristic_determinant(&m, lambda + 0.1).unwrap().norm();
                ratio = ratio.max(at / off);
                modulus_excess = modulus_excess.max(lambda.norm() - (2.0 * eps).sqrt());
            }
        }
    }

    let mut set_error = 0.0f64;
    for eps in EPS_SET {
        let i = Complex64::i();
        let r = |z: Complex64| (z * eps).sqrt();
        let mut expected = vec![Complex64::new(0.0, 0.0); 2];
        for v in [r(1.0 + i), r(1.0 - i), r(Complex64::new(2.0, 0.0))] {
            expected.push(v);
            expected.push(-v);
        }
        let mut got = m_eigenvalues(&params(eps, 1.0), 4).unwrap();
        for e in expected {
            let (k, d) = got
                .iter()
                .enumerate()
                .map(|(k, g)| (k, (g - e).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            set_error = set_error.max(d);
            got.remove(k);
        }
    }
    vec![
        check("|det| at roots <= 1e-8 x |det| at root + 0.1", ratio <= 1e-8, format!("max ratio {ratio:.2e}")),
        check("moduli <= sqrt(2 eps)", modulus_excess <= 0.0, format!("max excess {modulus_excess:.2e}")),
        check("N = 4 set matches closed list <= 1e-12", set_error <= 1e-12, format!("max {set_error:.2e}")),
    ]
}

fn c10_generating_function() -> Vec<Check> {
    let (rho, m_points, j_max) = (0.5, 64, 8);
    let mut worst = 0.0f64;
    for p in parameter_sweep() {
        let sol = solve_triangular(&p, j_max, 1000).unwrap();
        for (t, m) in [(0.0, 0), (0.5, 500), (1.0, 1000)] {
            let samples: Vec<Complex64> = (0..m_points)
                .map(|k| {
                    let z = Complex64::from_polar(rho, 2.0 * std::f64::consts::PI * k as f64 / m_points as f64);
                    generating_function(&p, t, z).unwrap()
                })
                .collect();
            for j in 0..=j_max {
                let sum: Complex64 = samples
                    .iter()
                    .enumerate()
                    .map(|(k, s)| s * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * (j * k) as f64 / m_points as f64))
                    .sum();
                let coefficient = sum / (m_points as f64 * rho.powi(j as i32));
                worst = worst.max((coefficient - sol.values[m][j]).norm());
            }
        }
    }
    vec![check("circle-sampled Taylor coefficients vs triangular <= 1e-8", worst <= 1e-8, format!("max {worst:.2e}"))]
}

fn c11_representation() -> Vec<Check> {
    let mut worst = 0.0f64;
    for p in parameter_sweep() {
        let sol = solve_triangular(&p, 8, 1000).unwrap();
        for m in (0..=1000).step_by(100) {
            let q = fourier_coefficients(&p, sol.grid.time(m), 8, 256).unwrap();
            for j in 0..=8 {
                worst = worst.max((q[j] - sol.values[m][j]).abs());
            }
        }
    }
    vec![check("Fourier quadrature (256 points) vs triangular <= 1e-8", worst <= 1e-8, format!("max {worst:.2e}"))]
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_riccati-catalan"))
        .args(args)
        .env_remove("RCL_THREADS")
        .output()
        .expect("spawn cli")
}

fn c12_cli() -> Vec<Check> {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 8] = [
        &["catalan", "--n-max", "30"],
        &["stationary", "--i-max", "20"],
        &["finite", "--n-players", "8", "--n-steps", "200", "--method", "all"],
        &["infinite", "--k-max", "8", "--n-steps", "200"],
        &["converge", "--n-list", "8,16,32", "--k-max", "4", "--n-steps", "200"],
        &["spectrum", "--n-players", "8"],
        &["genfun", "--m-points", "16", "--t-points", "5"],
        &["finite", "--n-players", "4", "--method", "matrix", "--eps", "2", "--c", "0"],
    ];
    let mut mismatched = Vec::new();
    for (k, args) in runs.iter().enumerate() {
        for format in ["csv", "json"] {
            let path = dir.path().join(format!("{k}.{format}"));
            let files: Vec<Vec<u8>> = (0..2)
                .map(|_| {
                    let mut full = args.to_vec();
                    full.extend(["--format", format, "--output", path.to_str().unwrap()]);
                    let out = cli(&full);
                    assert!(out.status.success(), "{full:?}: {}", String::from_utf8_lossy(&out.stderr));
                    fs::read(&path).unwrap()
                })
                .collect();
            if files[0] != files[1] {
                mismatched.push(format!("{} {format}", args.join(" ")));
            }
        }
    }

    let missing = dir.path().join("absent").join("out.csv");
    let failures: [(&[&str], i32, &str); 5] = [
        (&["finite", "--eps", "-1"], 2, "eps"),
        (&["converge", "--n-list", "4,8", "--k-max", "4"], 2, "k_max"),
        (&["genfun", "--radius", "1.5"], 2, "radius"),
        (&["catalan", "--n-max", "40"], 3, "overflow"),
        (&["catalan", "--output", missing.to_str().unwrap()], 4, "No such file"),
    ];
    let mut wrong_codes = Vec::new();
    for (args, code, needle) in failures {
        let out = cli(args);
        let stderr = String::from_utf8_lossy(&out.stderr);
        if out.status.code() != Some(code) || !stderr.contains(needle) {
            wrong_codes.push(format!("{args:?} -> {:?} ({})", out.status.code(), stderr.trim()));
        }
    }
    let usage = cli(&["nonsense"]).status.code();
    let leftovers = fs::read_dir(dir.path()).unwrap().count() != 2 * runs.len() || Path::new(&missing).exists();

    vec![
        check(
            "identical flags give byte-identical CSV and JSON",
            mismatched.is_empty(),
            if mismatched.is_empty() { format!("{} commands x 2 formats", runs.len()) } else { mismatched.join("; ") },
        ),
        check(
            "exit codes 2 / 3 / 4 with field named",
            wrong_codes.is_empty() && usage == Some(2),
            if wrong_codes.is_empty() { format!("usage error -> {usage:?}") } else { wrong_codes.join("; ") },
        ),
        check("no stray output after failures", !leftovers, ""),
    ]
}

type Criterion = (u32, &'static str, Duration, fn() -> Vec<Check>);

fn main() {
    let s = Duration::from_secs_f64;
    let criteria: [Criterion; 12] = [
        (1, "Catalan exactness", s(0.1), c1_catalan),
        (2, "stationary identity", s(0.1), c2_stationary),
        (3, "closed form vs ODE oracle", s(1.0), c3_closed_form),
        (4, "three-way finite agreement", s(30.0), c4_three_way),
        (5, "conservation, symmetry and bounds", s(30.0), c5_conservation),
        (6, "pointwise convergence", s(10.0), c6_pointwise),
        (7, "product and tail sums", s(10.0), c7_products),
        (8, "uniform convergence and Gronwall bound", s(20.0), c8_uniform),
        (9, "spectrum", s(1.0), c9_spectrum),
        (10, "generating-function coefficients", s(1.0), c10_generating_function),
        (11, "Fourier representation", s(2.0), c11_representation),
        (12, "CLI determinism and exit codes", s(5.0), c12_cli),
    ];

    let mut failed = Vec::new();
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let mut checks = run();
        let elapsed = start.elapsed();
        checks.push(check(
            format!("runtime <= {:.1} s", budget.as_secs_f64()),
            elapsed <= budget,
            format!("{:.3} s", elapsed.as_secs_f64()),
        ));
        let pass = checks.iter().all(|c| c.pass);
        println!("criterion {id:>2}  {}  {name}", if pass { "PASS" } else { "FAIL" });
        for c in &checks {
            println!("    [{}] {}  {}", if c.pass { "ok" } else { "FAIL" }, c.label, c.detail);
        }
        if !pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 12 criteria pass");
    } else {
        println!("acceptance: {} of 12 criteria fail: {failed:?}", failed.len());
        std::process::exit(1);
    }
}
