//! Truncated multiple harmonic sums modulo `p`.
//!
//! For an index `(k_1, ..., k_n)` the non-star value is
//! `sum_{p > m_1 > ... > m_n >= 1} m_1^{-k_1} ... m_n^{-k_n}` and the star
//! value relaxes every `>` between the `m_j` to `>=`.

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::modarith::{ModContext, Prime, PrimeWindow, Residue};
use crate::words::{Index, SignedCombo};

/// Per-prime evaluation state: the inverse table and rows of `m^{-e}` for
/// `1 <= e <= max_part`, shared by every word evaluated at this prime.
#[derive(Debug)]
pub struct Evaluator {
    ctx: ModContext,
    inverse_powers: Vec<Vec<u32>>,
}

impl Evaluator {
    pub fn new(p: Prime, max_part: u32) -> Self {
        Self::with_context(ModContext::new(p), max_part)
    }

    pub fn with_context(ctx: ModContext, max_part: u32) -> Self {
        let mut inverse_powers: Vec<Vec<u32>> = Vec::with_capacity(max_part as usize);
        for e in 1..=max_part {
            let row = if e == 1 {
                ctx.inverses().to_vec()
            } else {
                multiply_rows(&inverse_powers[e as usize - 2], ctx.inverses(), ctx.prime())
            };
            inverse_powers.push(row);
        }
        Evaluator {
            ctx,
            inverse_powers,
        }
    }

    pub fn context(&self) -> &ModContext {
        &self.ctx
    }

    pub fn prime(&self) -> Prime {
        self.ctx.prime()
    }

    /// `m^{-e} mod p` for `m in 0..p` (index 0 holds 0).
    fn row(&self, e: u32) -> Cow<'_, [u32]> {
        match self.inverse_powers.get(e as usize - 1) {
            Some(row) => Cow::Borrowed(row),
            None => {
                let p = self.prime();
                let inv = self.ctx.inverses();
                let row = (0..inv.len())
                    .map(|m| Residue::new(inv[m] as i64, p).pow(e as u64).value())
                    .collect();
                Cow::Owned(row)
            }
        }
    }

    /// The truncated sum of `w` at this prime.
    ///
    /// Runs the recursion `f_n(m) = m^{-k_n}`,
    /// `f_j(m) = m^{-k_j} * sum_{m' < m} f_{j+1}(m')` (`<=` for star) in a
    /// single buffer, innermost part first; the answer is `sum_m f_1(m)`.
    pub fn eval(&self, w: &Index, star: bool) -> Residue {
        let p = self.prime();
        let modulus = p.get() as u64;
        let parts = w.parts();
        let (&last, outer) = parts.split_last().expect("indices are nonempty");

        let mut f: Vec<u64> = self.row(last).iter().map(|&v| v as u64).collect();
        for &k in outer.iter().rev() {
            let row = self.row(k);
            let mut prefix = 0u64;
            for m in 1..f.len() {
                let cur = f[m];
                if star {
                    prefix += cur;
                    if prefix >= modulus {
                        prefix -= modulus;
                    }
                    f[m] = row[m] as u64 * prefix % modulus;
                } else {
                    f[m] = row[m] as u64 * prefix % modulus;
                    prefix += cur;
                    if prefix >= modulus {
                        prefix -= modulus;
                    }
                }
            }
        }
        let total = f.iter().fold(0u64, |acc, &v| (acc + v) % modulus);
        Residue::new(total as i64, p)
    }

    pub fn eval_combo(&self, c: &SignedCombo, star: bool) -> Residue {
        let p = self.prime();
        c.iter().fold(Residue::zero(p), |acc, (w, coefficient)| {
            acc + Residue::new(coefficient, p) * self.eval(w, star)
        })
    }
}

fn multiply_rows(a: &[u32], b: &[u32], p: Prime) -> Vec<u32> {
    let p = p.get() as u64;
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x as u64 * y as u64 % p) as u32)
        .collect()
}

/// One-off evaluation of a single word.
pub fn eval_fmzv(w: &Index, p: Prime, star: bool) -> Residue {
    Evaluator::new(p, w.max_part()).eval(w, star)
}

pub fn eval_combo(c: &SignedCombo, p: Prime, star: bool) -> Residue {
    Evaluator::new(p, c.max_part()).eval_combo(c, star)
}

/// Literal nested loops over all tuples `p > m_1 > ... > m_n >= 1` (or the
/// `>=` chain), with inverses from Fermat's little theorem.
pub fn naive_oracle(w: &Index, p: Prime, star: bool) -> Result<Residue> {
    if w.depth() > 6 || p.get() > 101 {
        return Err(Error::OracleCostGuard {
            depth: w.depth(),
            p: p.get(),
        });
    }
    let term = |m: u32, k: u32| {
        Residue::new(m as i64, p)
            .inverse()
            .expect("1 <= m < p")
            .pow(k as u64)
    };

    fn descend(
        parts: &[u32],
        upper: u32,
        star: bool,
        term: &dyn Fn(u32, u32) -> Residue,
        p: Prime,
    ) -> Residue {
        let Some((&k, rest)) = parts.split_first() else {
            return Residue::one(p);
        };
        let mut acc = Residue::zero(p);
        for m in 1..upper {
            let next = if star { m + 1 } else { m };
            acc += term(m, k) * descend(rest, next, star, term, p);
        }
        acc
    }

    Ok(descend(w.parts(), p.get(), star, &term, p))
}

/// Something that can be evaluated at each prime of a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Quantity {
    Word(Index),
    Combo(SignedCombo),
}

impl Quantity {
    fn max_part(&self) -> u32 {
        match self {
            Quantity::Word(w) => w.max_part(),
            Quantity::Combo(c) => c.max_part(),
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Word(w) => write!(f, "{w}"),
            Quantity::Combo(c) => write!(f, "{c}"),
        }
    }
}

/// Residues of one quantity over all primes of a window, ascending by prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdelicSample {
    pub description: String,
    pub star: bool,
    pub window: PrimeWindow,
    pub residues: BTreeMap<Prime, Residue>,
}

/// Runs `f` on every prime with `workers` threads and returns the results in
/// the order of `primes`.
pub(crate) fn map_primes<T, F>(primes: &[Prime], workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(Prime) -> Result<T> + Sync,
{
    if workers == 0 {
        return Err(Error::NoWorkers);
    }
    let run = |p: Prime| f(p).map_err(|e| e.at_prime(p.get()));
    if workers == 1 {
        return primes.iter().map(|&p| run(p)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    pool.install(|| primes.par_iter().map(|&p| run(p)).collect())
}

pub fn eval_over_primes(
    quantity: &Quantity,
    star: bool,
    window: PrimeWindow,
    workers: usize,
) -> Result<AdelicSample> {
    let primes = window.primes()?;
    let max_part = quantity.max_part();
    let values = map_primes(&primes, workers, |p| {
        let ev = Evaluator::new(p, max_part);
        Ok(match quantity {
            Quantity::Word(w) => ev.eval(w, star),
            Quantity::Combo(c) => ev.eval_combo(c, star),
        })
    })?;
    Ok(AdelicSample {
        description: quantity.to_string(),
        star,
        window,
        residues: primes.into_iter().zip(values).collect(),
    })
}
