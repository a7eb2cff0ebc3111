//! Bernoulli numbers modulo `p`, normalized by `x / (1 - e^{-x})`.
//!
//! Under this normalization `B_1 = +1/2`; every other value agrees with the
//! more common `x / (e^x - 1)` convention.

use crate::error::{Error, Result};
use crate::modarith::{ModContext, Prime, Residue};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernoulliTable {
    p: Prime,
    values: Vec<Residue>,
}

impl BernoulliTable {
    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn m_max(&self) -> u32 {
        self.values.len() as u32 - 1
    }

    pub fn values(&self) -> &[Residue] {
        &self.values
    }

    pub fn get(&self, m: u32) -> Option<Residue> {
        self.values.get(m as usize).copied()
    }

    /// `B_{p-k} mod p`, read from the table.
    pub fn b_p_minus_k(&self, k: u32) -> Result<Residue> {
        let p = self.p.get();
        check_k(k, p)?;
        self.get(p - k).ok_or(Error::BernoulliOutOfRange {
            m: (p - k) as u64,
            p,
        })
    }

    /// Keeps `B_0..=B_m_max`.
    pub fn truncated(mut self, m_max: u32) -> Self {
        self.values.truncate(m_max as usize + 1);
        self
    }

    /// Rebuilds a table from canonical residues, e.g. a cache record.
    /// Returns `None` when the values cannot be a table for `p`.
    pub fn from_values(p: Prime, values: &[u32]) -> Option<Self> {
        if values.is_empty()
            || values.len() as u64 > (p.get() as u64).saturating_sub(1).max(1)
            || values.iter().any(|&v| v >= p.get())
            || values[0] != 1 % p.get()
        {
            return None;
        }
        Some(BernoulliTable {
            p,
            values: values.iter().map(|&v| Residue::new(v as i64, p)).collect(),
        })
    }
}

fn check_k(k: u32, p: u32) -> Result<()> {
    // B_{p-1} has p in its denominator, so k = 1 is excluded as well.
    if k < 2 || k >= p {
        return Err(Error::BernoulliOutOfRange {
            m: (p as u64).saturating_sub(k as u64),
            p,
        });
    }
    Ok(())
}

/// `B_0..=B_m_max mod p` from
/// `(m + 1) B_m = sum_{i=2}^{m+1} (-1)^i C(m+1, i) B_{m+1-i}`, which is
/// coefficient matching in `(1 - e^{-x}) * sum_j B_j x^j / j! = x`.
///
/// Requires `m_max <= p - 2`: the step for `m` divides by `m + 1`.
pub fn bernoulli_table(p: Prime, m_max: u32) -> Result<BernoulliTable> {
    let ctx = ModContext::new(p);
    bernoulli_table_with(&ctx, m_max)
}

pub fn bernoulli_table_with(ctx: &ModContext, m_max: u32) -> Result<BernoulliTable> {
    let p = ctx.prime();
    if m_max as u64 + 2 > p.get() as u64 && m_max > 0 {
        return Err(Error::BernoulliOutOfRange {
            m: m_max as u64,
            p: p.get(),
        });
    }
    let mut values = Vec::with_capacity(m_max as usize + 1);
    values.push(Residue::one(p));
    for m in 1..=m_max as i64 {
        let mut acc = Residue::zero(p);
        for i in 2..=m + 1 {
            let term = ctx.binomial(m + 1, i)? * values[(m + 1 - i) as usize];
            if i % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let inv = ctx
            .inverse(m + 1)
            .expect("m + 1 < p is invertible");
        values.push(acc * inv);
    }
    Ok(BernoulliTable { p, values })
}

/// `B_{p-k} mod p` for `2 <= k <= p - 1`. The division by `k` in the closed
/// forms is left to callers.
pub fn b_p_minus_k(p: Prime, k: u32) -> Result<Residue> {
    check_k(k, p.get())?;
    bernoulli_table(p, p.get() - k)?.b_p_minus_k(k)
}
