//! Command-line front end: `riccati-catalan <command> [flags]`.
//!
//! Exit status: 0 success, 2 invalid configuration, 3 solver failure, 4 I/O failure.

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::catalan::{catalan_sequence, stationary_solution};
use crate::convergence::{uniform_gap, DEFAULT_N_LIST};
use crate::finite::{self, Method};
use crate::infinite::solve_triangular;
use crate::scalar::{generating_function, m_eigenvalues};
use crate::table::{emit_table, Format, Table};
use crate::{Error, RiccatiParams, TimeGrid};

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Catalan,
    Stationary,
    Finite,
    Infinite,
    Converge,
    Spectrum,
    Genfun,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MethodChoice {
    Direct,
    Spectral,
    Matrix,
    All,
}

impl MethodChoice {
    fn methods(self) -> Vec<Method> {
        match self {
            MethodChoice::Direct => vec![Method::Direct],
            MethodChoice::Spectral => vec![Method::Spectral],
            MethodChoice::Matrix => vec![Method::Matrix],
            MethodChoice::All => Method::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Parser)]
#[command(name = "riccati-catalan", version, about = "Finite and infinite Riccati systems and Catalan functions")]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub eps: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub t_final: f64,
    /// Number of players N for `finite` and `spectrum`.
    #[arg(long, default_value_t = 4)]
    pub n_players: usize,
    /// Highest index for `infinite`, and the cap K for `converge`.
    #[arg(long, default_value_t = 4)]
    pub k_max: usize,
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
    #[arg(long, default_value_t = 10)]
    pub i_max: usize,
    #[arg(long, default_value_t = 1000)]
    pub n_steps: usize,
    /// Points on the circle for `genfun`.
    #[arg(long, default_value_t = 256)]
    pub m_points: usize,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_N_LIST)]
    pub n_list: Vec<usize>,
    #[arg(long, value_enum, default_value_t = MethodChoice::All)]
    pub method: MethodChoice,
    /// Circle radius for `genfun`.
    #[arg(long, default_value_t = 0.5)]
    pub radius: f64,
    /// Number of evenly spaced times for `genfun`.
    #[arg(long, default_value_t = 11)]
    pub t_points: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

/// A failure with its exit status and one-line diagnostic.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl CliError {
    fn config(e: Error) -> Self {
        CliError {
            code: EXIT_CONFIG,
            message: e.to_string(),
        }
    }

    fn solver(e: Error) -> Self {
        CliError {
            code: EXIT_SOLVER,
            message: e.to_string(),
        }
    }

    fn output(e: Error) -> Self {
        let code = match e {
            Error::Table(_) => EXIT_CONFIG,
            _ => EXIT_IO,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn thread_cap() -> Result<Option<usize>, Error> {
    match std::env::var("RCL_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::invalid("RCL_THREADS", v, "positive integer")),
        },
    }
}

impl RunConfig {
    pub fn params(&self) -> Result<RiccatiParams, Error> {
        RiccatiParams::new(self.eps, self.c, self.t_final)
    }

    /// Checks every field the selected command consumes.
    pub fn validate(&self) -> Result<(), Error> {
        self.params()?;
        if self.n_steps < 10 {
            return Err(Error::invalid("n_steps", self.n_steps, "n_steps >= 10"));
        }
        match self.command {
            Command::Finite | Command::Spectrum if self.n_players < 2 => {
                return Err(Error::invalid("n_players", self.n_players, "n_players >= 2"));
            }
            Command::Converge => {
                let min = self.n_list.iter().copied().min().unwrap_or(0);
                if self.n_list.is_empty() || min < 2 {
                    return Err(Error::invalid("n_list", format!("{:?}", self.n_list), "non-empty, every N >= 2"));
                }
                if self.k_max + 1 > min {
                    return Err(Error::invalid("k_max", self.k_max, "k_max <= min(n_list) - 1"));
                }
            }
            Command::Genfun => {
                if !(self.radius > 0.0 && self.radius < 1.0) {
                    return Err(Error::invalid("radius", self.radius, "0 < radius < 1"));
                }
                if self.m_points < 1 {
                    return Err(Error::invalid("m_points", self.m_points, "m_points >= 1"));
                }
                if self.t_points < 2 {
                    return Err(Error::invalid("t_points", self.t_points, "t_points >= 2"));
                }
            }
            _ => {}
        }
        thread_cap()?;
        Ok(())
    }

    fn meta(&self) -> serde_json::Value {
        serde_json::json!({
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "config": self,
        })
    }
}

fn finite_table(config: &RunConfig, params: &RiccatiParams) -> Result<Table, Error> {
    let methods = config.method.methods();
    let labelled = methods.len() > 1;
    let solutions = methods
        .iter()
        .map(|&m| finite::solve(m, params, config.n_players, config.n_steps))
        .collect::<Result<Vec<_>, _>>()?;

    if labelled {
        for a in 0..solutions.len() {
            for b in a + 1..solutions.len() {
                eprintln!(
                    "max |{} - {}| = {:.3e}",
                    methods[a].name(),
                    methods[b].name(),
                    solutions[a].max_abs_diff(&solutions[b])?
                );
            }
        }
    }

    let mut table = if labelled {
        Table::new(["t", "index", "value", "method"])
    } else {
        Table::new(["t", "index", "value"])
    };
    for (method, sol) in methods.iter().zip(&solutions) {
        for (m, row) in sol.values.iter().enumerate() {
            let t = sol.grid.time(m);
            for (i, v) in row.iter().enumerate() {
                let mut cells = vec![t.into(), i.into(), (*v).into()];
                if labelled {
                    cells.push(method.name().into());
                }
                table.push(cells);
            }
        }
    }
    Ok(table)
}

fn compute(config: &RunConfig) -> Result<Table, Error> {
    let params = config.params()?;
    let table = match config.command {
        Command::Catalan => {
            let seq = catalan_sequence(config.n_max)?;
            let mut t = Table::new(["n", "C_n"]);
            for (n, v) in seq.values.iter().enumerate() {
                t.push(vec![n.into(), (*v).into()]);
            }
            t
        }
        Command::Stationary => {
            let s = stationary_solution(config.i_max);
            let mut t = Table::new(["i", "phi_i"]);
            for (i, v) in s.values.iter().enumerate() {
                t.push(vec![i.into(), (*v).into()]);
            }
            t
        }
        Command::Finite => finite_table(config, &params)?,
        Command::Infinite => {
            let s = solve_triangular(&params, config.k_max, config.n_steps)?;
            let mut t = Table::new(["t", "index", "value"]);
            for (m, row) in s.values.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    t.push(vec![s.grid.time(m).into(), j.into(), (*v).into()]);
                }
            }
            t
        }
        Command::Converge => {
            let sweep = || uniform_gap(&params, config.k_max, &config.n_list, config.n_steps);
            let report = match thread_cap()? {
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::invalid("RCL_THREADS", e, "a buildable thread count"))?
                    .install(sweep)?,
                None => sweep()?,
            };
            let mut t = Table::new(["N", "D_N", "c_N1", "int_c_N2", "bound"]);
            for ((n, d), g) in report.n_list.iter().zip(&report.uniform_gaps).zip(&report.gronwall) {
                t.push(vec![
                    (*n).into(),
                    (*d).into(),
                    g.c_n1.into(),
                    g.integral_c_n2.into(),
                    g.bound.into(),
                ]);
            }
            t
        }
        Command::Spectrum => {
            let ev = m_eigenvalues(&params, config.n_players)?;
            let mut t = Table::new(["k", "re_lambda", "im_lambda", "modulus"]);
            for (k, v) in ev.iter().enumerate() {
                t.push(vec![k.into(), v.re.into(), v.im.into(), v.norm().into()]);
            }
            t
        }
        Command::Genfun => {
            let grid = TimeGrid::new(params.t_final, config.t_points - 1);
            let mut t = Table::new(["t", "re_z", "im_z", "re_S", "im_S"]);
            for time in grid.times() {
                for m in 0..config.m_points {
                    let angle = 2.0 * std::f64::consts::PI * m as f64 / config.m_points as f64;
                    let z = Complex64::from_polar(config.radius, angle);
                    let s = generating_function(&params, time, z)?;
                    t.push(vec![time.into(), z.re.into(), z.im.into(), s.re.into(), s.im.into()]);
                }
            }
            t
        }
    };
    Ok(table)
}

/// Validates, computes and writes the output of one command.
pub fn run(config: &RunConfig) -> Result<(), CliError> {
    config.validate().map_err(CliError::config)?;
    let table = compute(config).map_err(CliError::solver)?;
    emit_table(&table, config.format, config.meta(), config.output.as_deref()).map_err(CliError::output)
}

/// Entry point shared by the binary: parses `args` and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&config) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::Cell;

    fn parse(args: &[&str]) -> RunConfig {
        RunConfig::try_parse_from(std::iter::once("riccati-catalan").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn defaults() {
        let c = parse(&["finite"]);
        assert_eq!((c.eps, c.c, c.t_final), (1.0, 1.0, 1.0));
        assert_eq!(c.n_steps, 1000);
        assert_eq!(c.m_points, 256);
        assert_eq!(c.n_list, vec![8, 16, 32, 64, 128, 256]);
        assert_eq!(c.format, Format::Csv);
        assert_eq!(c.method, MethodChoice::All);
    }

    #[test]
    fn list_and_enums() {
        let c = parse(&["converge", "--n-list", "4,8", "--format", "json", "--method", "matrix"]);
        assert_eq!(c.n_list, vec![4, 8]);
        assert_eq!(c.format, Format::Json);
        assert_eq!(c.method, MethodChoice::Matrix);
    }

    #[test]
    fn validation_names_field() {
        let err = parse(&["finite", "--eps", "-1"]).validate().unwrap_err().to_string();
        assert!(err.contains("eps") && err.contains("> 0"), "{err}");
        let err = parse(&["converge", "--n-list", "4", "--k-max", "4"]).validate().unwrap_err().to_string();
        assert!(err.contains("k_max"), "{err}");
        assert!(parse(&["genfun", "--radius", "1.0"]).validate().is_err());
        assert!(parse(&["spectrum", "--n-players", "1"]).validate().is_err());
    }

    #[test]
    fn stationary_table() {
        let t = compute(&parse(&["stationary", "--i-max", "1"])).unwrap();
        assert_eq!(t.rows, vec![vec![Cell::UInt(0), Cell::Real(1.0)], vec![Cell::UInt(1), Cell::Real(-0.5)]]);
    }

    #[test]
    fn overflow_is_solver_error() {
        let err = run(&parse(&["catalan", "--n-max", "40"])).unwrap_err();
        assert_eq!(err.code, EXIT_SOLVER);
    }
}
