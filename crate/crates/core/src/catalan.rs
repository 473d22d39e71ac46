//! Exact Catalan numbers and the stationary solution of the infinite system.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest index for which [`catalan_sequence`] is guaranteed to succeed.
pub const GUARANTEED_N_MAX: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalanSequence {
    pub n_max: usize,
    pub values: Vec<u64>,
}

impl CatalanSequence {
    pub fn get(&self, n: usize) -> Option<u64> {
        self.values.get(n).copied()
    }
}

/// `C_0..=C_{n_max}` from the self-convolution recurrence, cross-checked
/// against the closed formula through the ratio `C_n = C_{n-1} 2(2n-1)/(n+1)`.
pub fn catalan_sequence(n_max: usize) -> Result<CatalanSequence> {
    let mut values: Vec<u64> = Vec::with_capacity(n_max + 1);
    values.push(1);
    for n in 1..=n_max {
        let mut sum: u64 = 0;
        for j in 1..=n {
            sum = values[j - 1]
                .checked_mul(values[n - j])
                .and_then(|p| sum.checked_add(p))
                .ok_or(Error::Overflow { n })?;
        }
        let closed = closed_form_step(values[n - 1], n).ok_or(Error::Overflow { n })?;
        assert_eq!(sum, closed, "recurrence and closed form disagree at C_{n}");
        values.push(sum);
    }
    Ok(CatalanSequence { n_max, values })
}

/// `C_{n-1} * 2(2n-1) / (n+1)`; `None` on overflow or inexact division.
pub fn closed_form_step(prev: u64, n: usize) -> Option<u64> {
    let num = u128::from(prev) * (2 * (2 * n as u128 - 1));
    let den = n as u128 + 1;
    if !num.is_multiple_of(den) {
        return None;
    }
    u64::try_from(num / den).ok()
}

/// `C_n / (4^n n^{-3/2} / sqrt(pi))`, which tends to 1 from below.
pub fn catalan_asymptotic_ratio(n: usize) -> Result<f64> {
    if !(1..=GUARANTEED_N_MAX).contains(&n) {
        return Err(Error::invalid("n", n, "1 <= n <= 30"));
    }
    let c_n = catalan_sequence(n)?.values[n] as f64;
    let nf = n as f64;
    let growth = 4f64.powi(n as i32) * nf.powf(-1.5) / std::f64::consts::PI.sqrt();
    Ok(c_n / growth)
}

/// Stationary solution of the infinite system at `eps = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationarySolution {
    pub i_max: usize,
    pub values: Vec<f64>,
}

pub fn stationary_solution(i_max: usize) -> StationarySolution {
    let mut values = Vec::with_capacity(i_max + 1);
    values.push(1.0);
    if i_max >= 1 {
        values.push(-0.5);
    }
    for i in 2..=i_max {
        let conv: f64 = (1..i).map(|j| values[j] * values[i - j]).sum();
        values.push(-0.5 * conv);
    }
    StationarySolution { i_max, values }
}

/// `-2 C_{i-1} / 4^i`, the Catalan form of the stationary value for `i >= 1`.
pub fn stationary_from_catalan(i: usize) -> Result<f64> {
    if i == 0 {
        return Err(Error::invalid("i", i, "i >= 1"));
    }
    let c = catalan_sequence(i - 1)?.values[i - 1] as f64;
    Ok(-2.0 * c / 4f64.powi(i as i32))
}
