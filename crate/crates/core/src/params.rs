use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Problem constants: forcing strength `eps`, terminal weight `c`, horizon `t_final`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiccatiParams {
    pub eps: f64,
    pub c: f64,
    pub t_final: f64,
}

impl RiccatiParams {
    pub fn new(eps: f64, c: f64, t_final: f64) -> Result<Self> {
        let params = RiccatiParams { eps, c, t_final };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps.is_finite() && self.eps > 0.0) {
            return Err(Error::invalid("eps", self.eps, "finite eps > 0"));
        }
        if !(self.c.is_finite() && self.c >= 0.0) {
            return Err(Error::invalid("c", self.c, "finite c >= 0"));
        }
        if !(self.t_final.is_finite() && self.t_final > 0.0) {
            return Err(Error::invalid("t_final", self.t_final, "finite t_final > 0"));
        }
        Ok(())
    }

    /// Forcing sequence `eps^i`: `eps`, `-eps`, then zeros.
    pub fn forcing(&self, i: usize) -> f64 {
        match i {
            0 => self.eps,
            1 => -self.eps,
            _ => 0.0,
        }
    }

    /// Terminal data `phi^i_T`: `c`, `-c`, then zeros.
    pub fn terminal(&self, i: usize) -> f64 {
        match i {
            0 => self.c,
            1 => -self.c,
            _ => 0.0,
        }
    }

    pub(crate) fn check_time(&self, t: f64) -> Result<()> {
        if !(0.0..=self.t_final).contains(&t) {
            return Err(Error::Domain {
                value: t.to_string(),
                domain: "[0, t_final]",
            });
        }
        Ok(())
    }
}

impl Default for RiccatiParams {
    fn default() -> Self {
        RiccatiParams {
            eps: 1.0,
            c: 1.0,
            t_final: 1.0,
        }
    }
}

/// Uniform grid `t_m = m * t_final / n_steps`, `m = 0..=n_steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_final: f64,
    pub n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_final: f64, n_steps: usize) -> Self {
        TimeGrid { t_final, n_steps }
    }

    pub fn step(&self) -> f64 {
        self.t_final / self.n_steps as f64
    }

    pub fn time(&self, m: usize) -> f64 {
        if m == self.n_steps {
            self.t_final
        } else {
            m as f64 * self.t_final / self.n_steps as f64
        }
    }

    pub fn len(&self) -> usize {
        self.n_steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |m| self.time(m))
    }

    /// Index of the grid point closest to `t`.
    pub fn nearest(&self, t: f64) -> usize {
        let m = (t / self.t_final * self.n_steps as f64).round();
        (m.max(0.0) as usize).min(self.n_steps)
    }
}

pub(crate) fn check_steps(n_steps: usize) -> Result<()> {
    if n_steps < 10 {
        return Err(Error::invalid("n_steps", n_steps, "n_steps >= 10"));
    }
    Ok(())
}
