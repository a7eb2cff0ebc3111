//! Sums of finite multiple zeta(-star) values over index sets, their
//! Bernoulli closed forms, and the residuals of the relations between them.
//!
//! Write `S(k,n,i)` for the sum of the non-star values over the index set
//! `I(k,n,i)` (compositions of `k` into `n` parts with part `i` at least 2)
//! and `S*(k,n,i)` for the star analogue. Left-hand sides are always computed
//! by brute-force summation of truncated sums; right-hand sides come only
//! from binomials and `B_{p-k}`.

mod harness;

pub use harness::{
    verify_suite, CheckParams, IdentityCheck, IdentitySummary, Suite, SuiteConfig,
    VerificationReport, REPORT_SCHEMA,
};

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bernoulli::{bernoulli_table_with, BernoulliTable};
use crate::error::{Error, Result};
use crate::evaluator::Evaluator;
use crate::modarith::{ModContext, Prime, Residue};
use crate::words::{enumerate_index_set, Index};

/// Everything needed to evaluate both sides of an identity at one prime.
/// The Bernoulli table (up to `B_{p-2}`) is built on first use unless one
/// is supplied.
#[derive(Debug)]
pub struct PrimeData {
    evaluator: Evaluator,
    bernoulli: OnceLock<BernoulliTable>,
}

impl PrimeData {
    pub fn new(p: Prime, max_part: u32) -> Self {
        PrimeData {
            evaluator: Evaluator::new(p, max_part),
            bernoulli: OnceLock::new(),
        }
    }

    /// Uses a precomputed table, e.g. from the on-disk cache. Tables shorter
    /// than `p - 1` entries are extended by recomputation on demand.
    pub fn with_bernoulli(p: Prime, max_part: u32, table: BernoulliTable) -> Self {
        let data = PrimeData::new(p, max_part);
        if table.prime() == p && table.m_max() + 2 >= p.get() {
            let _ = data.bernoulli.set(table);
        }
        data
    }

    pub fn prime(&self) -> Prime {
        self.evaluator.prime()
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.evaluator
    }

    pub fn context(&self) -> &ModContext {
        self.evaluator.context()
    }

    pub fn bernoulli(&self) -> &BernoulliTable {
        self.bernoulli.get_or_init(|| {
            let m_max = self.prime().get().saturating_sub(2);
            bernoulli_table_with(self.context(), m_max).expect("m_max = p - 2 is supported")
        })
    }

    fn binomial(&self, a: i64, b: i64) -> Result<Residue> {
        self.context().binomial(a, b)
    }

    /// `B_{p-k} / k mod p`, the common factor of every closed form.
    pub fn bernoulli_over_k(&self, k: u32) -> Result<Residue> {
        let p = self.prime().get();
        if k as u64 + 2 > p as u64 {
            return Err(Error::WeightTooLarge {
                k,
                p,
                bound: "k <= p - 2",
            });
        }
        let inv_k = self.context().inverse(k as i64).expect("0 < k < p");
        Ok(self.bernoulli().b_p_minus_k(k)? * inv_k)
    }
}

fn check_kni(k: u32, n: u32, i: u32) -> Result<()> {
    if 1 <= i && i <= n && n < k {
        Ok(())
    } else {
        Err(Error::InvalidParameters {
            k,
            n,
            i,
            rule: "1 <= i <= n <= k - 1",
        })
    }
}

/// Depth-two closed form `(-1)^{k1} C(k1+k2, k1) B_{p-k1-k2} / (k1+k2)`.
/// At large enough primes both the star and the non-star value of `(k1,k2)`
/// equal it.
pub fn two_index_closed_form(data: &PrimeData, k1: u32, k2: u32) -> Result<Residue> {
    if k1 == 0 || k2 == 0 {
        return Err(Error::InvalidParameters {
            k: k1 + k2,
            n: 2,
            i: 1,
            rule: "k1, k2 >= 1",
        });
    }
    let k = k1 + k2;
    let b = data.bernoulli_over_k(k)?;
    let c = data.binomial(k as i64, k1 as i64)?;
    Ok(Residue::sign(k1, data.prime()) * c * b)
}

/// `S(k,n,i)` or `S*(k,n,i)` by summing truncated sums over `I(k,n,i)`.
pub fn sum_lhs(data: &PrimeData, k: u32, n: u32, i: u32, star: bool) -> Result<Residue> {
    let words = enumerate_index_set(k, n, i)?;
    let ev = data.evaluator();
    Ok(words
        .iter()
        .fold(Residue::zero(data.prime()), |acc, w| acc + ev.eval(w, star)))
}

/// Closed form of `S(k,n,i)`:
/// `(-1)^{i-1} (C(k-1,i-1) + (-1)^n C(k-1,n-i)) B_{p-k}/k`, and of
/// `S*(k,n,i)`: `(-1)^{i-1} ((-1)^n C(k-1,i-1) + C(k-1,n-i)) B_{p-k}/k`.
pub fn sum_rhs(data: &PrimeData, k: u32, n: u32, i: u32, star: bool) -> Result<Residue> {
    check_kni(k, n, i)?;
    let p = data.prime();
    let b = data.bernoulli_over_k(k)?;
    let first = data.binomial(k as i64 - 1, i as i64 - 1)?;
    let second = data.binomial(k as i64 - 1, (n - i) as i64)?;
    let inner = if star {
        Residue::sign(n, p) * first + second
    } else {
        first + Residue::sign(n, p) * second
    };
    Ok(Residue::sign(i - 1, p) * inner * b)
}

/// The `i = 1` sums in the form first conjectured:
/// `(1 + (-1)^n C(k-1,n-1)) B_{p-k}/k` and
/// `((-1)^n + C(k-1,n-1)) B_{p-k}/k`.
pub fn kaneko_rhs(data: &PrimeData, k: u32, n: u32, star: bool) -> Result<Residue> {
    check_kni(k, n, 1)?;
    let p = data.prime();
    let b = data.bernoulli_over_k(k)?;
    let c = data.binomial(k as i64 - 1, n as i64 - 1)?;
    let inner = if star {
        Residue::sign(n, p) + c
    } else {
        Residue::one(p) + Residue::sign(n, p) * c
    };
    Ok(inner * b)
}

fn check_recurrence(k: u32, n: u32, i: u32) -> Result<()> {
    if 1 <= i && i < n && n < k {
        Ok(())
    } else {
        Err(Error::InvalidParameters {
            k,
            n,
            i,
            rule: "2 <= i + 1 <= n <= k - 1",
        })
    }
}

/// `(n-i) S(k,n,i) + i S(k,n,i+1) + (k-n) S(k,n-1,i)`, with `-(k-n)` on the
/// last term for the star sums, for any provider of `S`.
pub fn recurrence_combination<F>(
    p: Prime,
    k: u32,
    n: u32,
    i: u32,
    star: bool,
    mut sum: F,
) -> Result<Residue>
where
    F: FnMut(u32, u32, u32) -> Result<Residue>,
{
    check_recurrence(k, n, i)?;
    let r = |v: u32| Residue::new(v as i64, p);
    let last = r(k - n) * sum(k, n - 1, i)?;
    let head = r(n - i) * sum(k, n, i)? + r(i) * sum(k, n, i + 1)?;
    Ok(if star { head - last } else { head + last })
}

/// The recurrence evaluated on brute-force sums; zero for `p >= k + 3`.
pub fn recurrence_residual(data: &PrimeData, k: u32, n: u32, i: u32, star: bool) -> Result<Residue> {
    recurrence_combination(data.prime(), k, n, i, star, |k, n, i| {
        sum_lhs(data, k, n, i, star)
    })
}

/// The recurrence evaluated on the closed forms; zero whenever defined.
pub fn recurrence_residual_closed_form(
    data: &PrimeData,
    k: u32,
    n: u32,
    i: u32,
    star: bool,
) -> Result<Residue> {
    recurrence_combination(data.prime(), k, n, i, star, |k, n, i| {
        sum_rhs(data, k, n, i, star)
    })
}

/// `S*(k,k-1,i) = (-1)^{i-1} C(k,i) B_{p-k}/k`.
pub fn star_initial_value(data: &PrimeData, k: u32, i: u32) -> Result<Residue> {
    check_kni(k, k.saturating_sub(1), i)?;
    let b = data.bernoulli_over_k(k)?;
    let c = data.binomial(k as i64, i as i64)?;
    Ok(Residue::sign(i - 1, data.prime()) * c * b)
}

/// `(1^{i-1}, 2, 1^{k-i-1})`, the single word of `I(k,k-1,i)`.
pub fn lone_two_word(k: u32, i: u32) -> Result<Index> {
    check_kni(k, k.saturating_sub(1), i)?;
    let mut parts = vec![1u32; (k - 1) as usize];
    parts[(i - 1) as usize] = 2;
    Index::new(parts)
}

/// `ζ*(1^{i-1}, 2, 1^{k-i-1}) + ζ*(i, k-i)`; zero for `p >= k + 3`.
pub fn duality_instance_residual(data: &PrimeData, k: u32, i: u32) -> Result<Residue> {
    let left = lone_two_word(k, i)?;
    let right = Index::new(vec![i, k - i])?;
    let ev = data.evaluator();
    Ok(ev.eval(&left, true) + ev.eval(&right, true))
}

/// `S(k,n,1) - sum_{j=0}^{n-1} (-1)^j C(k-n+j-1, j) S*(k,n-j,1)`.
///
/// Both sides are truncated sums, so the residual vanishes at every prime
/// `p > k` with no Bernoulli input.
pub fn star_nonstar_sum_residual(data: &PrimeData, k: u32, n: u32) -> Result<Residue> {
    check_kni(k, n, 1)?;
    let p = data.prime().get();
    if k >= p {
        return Err(Error::WeightTooLarge {
            k,
            p,
            bound: "k < p",
        });
    }
    let mut rhs = Residue::zero(data.prime());
    for j in 0..n {
        let c = data.binomial((k - n + j) as i64 - 1, j as i64)?;
        let term = c * sum_lhs(data, k, n - j, 1, true)?;
        if j % 2 == 0 {
            rhs += term;
        } else {
            rhs -= term;
        }
    }
    Ok(sum_lhs(data, k, n, 1, false)? - rhs)
}

/// Exact binomial coefficient; zero outside `0 <= b <= a`.
pub fn binomial_exact(a: i64, b: i64) -> BigInt {
    if a < 0 || b < 0 || b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for j in 0..b {
        acc = acc * BigInt::from(a - j) / BigInt::from(j + 1);
    }
    acc
}

/// The two coefficient sums
/// `sum_{j<n} C(k-n+j-1, j)` and `sum_{j<n} (-1)^j C(k-n+j-1, j) C(k-1, n-j-1)`,
/// which equal `C(k-1, n-1)` and `1` for `1 <= n <= k-1`.
pub fn binomial_convolutions(k: u32, n: u32) -> (BigInt, BigInt) {
    let (k, n) = (k as i64, n as i64);
    let mut plain = BigInt::zero();
    let mut alternating = BigInt::zero();
    for j in 0..n {
        let c = binomial_exact(k - n + j - 1, j);
        let twisted = &c * binomial_exact(k - 1, n - j - 1);
        plain += c;
        if j % 2 == 0 {
            alternating += twisted;
        } else {
            alternating -= twisted;
        }
    }
    (plain, alternating)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluator::eval_fmzv;
    use crate::modarith::sieve_primes;

    fn prime(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    fn data(p: u64) -> PrimeData {
        PrimeData::new(prime(p), 10)
    }

    #[test]
    fn depth_two_examples() {
        let d7 = data(7);
        // B_4 = 3 mod 7, and C(3,1) / 3 = 1.
        assert_eq!(two_index_closed_form(&d7, 1, 2).unwrap().value(), 4);
        assert_eq!(two_index_closed_form(&d7, 2, 1).unwrap().value(), 3);
        assert_eq!(two_index_closed_form(&data(5), 1, 1).unwrap().value(), 0);
        assert!(matches!(
            two_index_closed_form(&d7, 3, 3),
            Err(Error::WeightTooLarge { .. })
        ));
    }

    #[test]
    fn sum_examples() {
        let d7 = data(7);
        assert_eq!(sum_lhs(&d7, 3, 2, 1, false).unwrap().value(), 3);
        assert_eq!(sum_lhs(&d7, 3, 2, 1, true).unwrap().value(), 3);
        assert_eq!(sum_rhs(&d7, 3, 2, 1, false).unwrap().value(), 3);
        for (p, k) in [(11, 5), (13, 7), (17, 6)] {
            let d = data(p);
            let w = Index::letter(k).unwrap();
            for star in [false, true] {
                assert_eq!(
                    sum_lhs(&d, k, 1, 1, star).unwrap(),
                    eval_fmzv(&w, prime(p), star)
                );
            }
        }
        assert!(sum_lhs(&d7, 3, 3, 1, false).is_err());
        assert!(sum_rhs(&d7, 6, 2, 1, false).is_err());
    }

    #[test]
    fn even_weight_closed_forms_vanish() {
        for p in sieve_primes(7, 199).unwrap() {
            let d = PrimeData::new(p, 10);
            for k in (2..=10u32).step_by(2).filter(|k| k + 3 <= p.get()) {
                for n in 1..k {
                    for i in 1..=n {
                        assert!(sum_rhs(&d, k, n, i, false).unwrap().is_zero());
                        assert!(sum_rhs(&d, k, n, i, true).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn kaneko_is_the_first_column() {
        for p in [13u64, 29, 61] {
            let d = data(p);
            for k in 2..=10 {
                for n in 1..k {
                    for star in [false, true] {
                        assert_eq!(
                            kaneko_rhs(&d, k, n, star).unwrap(),
                            sum_rhs(&d, k, n, 1, star).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn recurrence_examples() {
        let d = data(11);
        assert!(recurrence_residual(&d, 4, 3, 1, false).unwrap().is_zero());
        assert!(recurrence_residual(&d, 4, 3, 1, true).unwrap().is_zero());
        assert!(recurrence_residual_closed_form(&d, 4, 3, 1, false).unwrap().is_zero());
        assert!(recurrence_residual_closed_form(&d, 7, 4, 2, true).unwrap().is_zero());
        assert!(matches!(
            recurrence_residual(&d, 4, 3, 3, false),
            Err(Error::InvalidParameters { .. })
        ));
    }

    #[test]
    fn initial_values() {
        let d7 = data(7);
        assert_eq!(star_initial_value(&d7, 3, 1).unwrap().value(), 3);
        assert_eq!(star_initial_value(&d7, 3, 2).unwrap().value(), 4);
        assert_eq!(
            eval_fmzv(&Index::new(vec![1, 2]).unwrap(), prime(7), true).value(),
            4
        );
        for p in [11u64, 13, 17] {
            let d = data(p);
            for k in (2..=p as u32 - 3).step_by(2) {
                for i in 1..k {
                    assert!(star_initial_value(&d, k, i).unwrap().is_zero());
                }
            }
        }
        assert_eq!(lone_two_word(5, 2).unwrap().parts(), [1, 2, 1, 1]);
        assert_eq!(lone_two_word(2, 1).unwrap().parts(), [2]);
    }

    #[test]
    fn duality_examples() {
        assert!(duality_instance_residual(&data(11), 3, 1).unwrap().is_zero());
        assert!(duality_instance_residual(&data(13), 5, 2).unwrap().is_zero());
        assert!(duality_instance_residual(&data(7), 2, 1).unwrap().is_zero());
        assert!(duality_instance_residual(&data(7), 2, 2).is_err());
    }

    #[test]
    fn star_nonstar_examples() {
        assert!(star_nonstar_sum_residual(&data(11), 4, 2).unwrap().is_zero());
        assert!(star_nonstar_sum_residual(&data(13), 5, 3).unwrap().is_zero());
        let d = data(11);
        for k in 2..=10 {
            assert_eq!(
                sum_lhs(&d, k, 1, 1, false).unwrap(),
                sum_lhs(&d, k, 1, 1, true).unwrap()
            );
            assert!(star_nonstar_sum_residual(&d, k, 1).unwrap().is_zero());
        }
        assert!(matches!(
            star_nonstar_sum_residual(&data(7), 7, 2),
            Err(Error::WeightTooLarge { .. })
        ));
    }

    #[test]
    fn convolution_examples() {
        let pair = |a: i64, b: i64| (BigInt::from(a), BigInt::from(b));
        assert_eq!(binomial_convolutions(4, 2), pair(3, 1));
        assert_eq!(binomial_convolutions(7, 1), pair(1, 1));
        assert_eq!(binomial_convolutions(6, 3), pair(10, 1));
        assert_eq!(binomial_exact(29, 14), BigInt::from(77_558_760));
        assert_eq!(binomial_exact(3, 5), BigInt::zero());
        assert_eq!(binomial_exact(-1, 0), BigInt::zero());
    }

    #[test]
    fn preset_bernoulli_table_is_used() {
        let p = prime(13);
        let t = crate::bernoulli::bernoulli_table(p, 11).unwrap();
        let d = PrimeData::with_bernoulli(p, 4, t.clone());
        assert_eq!(d.bernoulli(), &t);
        // Too short to serve every k: ignored and rebuilt.
        let d = PrimeData::with_bernoulli(p, 4, t.clone().truncated(3));
        assert_eq!(d.bernoulli(), &t);
    }
}
