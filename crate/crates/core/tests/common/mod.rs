//! Reference computations that share no code path with the library.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fmzv::Index;

/// Exact `B_0..=B_m_max` by inverting the power series
/// `(1 - e^{-x}) / x = sum_j (-1)^j x^j / (j+1)!`, so that
/// `sum_m B_m x^m / m! = x / (1 - e^{-x})`.
pub fn bernoulli_rationals(m_max: usize) -> Vec<BigRational> {
    let mut fact = vec![BigInt::one()];
    for j in 1..=m_max + 1 {
        let next = &fact[j - 1] * BigInt::from(j);
        fact.push(next);
    }
    let coeff: Vec<BigRational> = (0..=m_max)
        .map(|j| {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            BigRational::new(BigInt::from(sign), fact[j + 1].clone())
        })
        .collect();
    let mut inverse: Vec<BigRational> = vec![BigRational::one()];
    for m in 1..=m_max {
        let mut acc = BigRational::zero();
        for j in 1..=m {
            acc += &coeff[j] * &inverse[m - j];
        }
        inverse.push(-acc);
    }
    inverse
        .into_iter()
        .enumerate()
        .map(|(m, a)| a * BigRational::from_integer(fact[m].clone()))
        .collect()
}

/// `q mod p`, or `None` when `p` divides the denominator.
pub fn reduce_rational(q: &BigRational, p: u32) -> Option<u32> {
    let p = BigInt::from(p);
    let den = q.denom().mod_floor_positive(&p);
    if den.is_zero() {
        return None;
    }
    let num = q.numer().mod_floor_positive(&p);
    let inv = den.modpow(&(&p - BigInt::from(2)), &p);
    let r = (num * inv) % &p;
    Some(r.to_string().parse().unwrap())
}

trait ModFloor {
    fn mod_floor_positive(&self, p: &BigInt) -> BigInt;
}

impl ModFloor for BigInt {
    fn mod_floor_positive(&self, p: &BigInt) -> BigInt {
        let r = self % p;
        if r.is_negative() {
            r + p
        } else {
            r
        }
    }
}

pub fn primes_upto(hi: u32) -> Vec<u32> {
    (2..=hi)
        .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
        .collect()
}

/// Every composition of every weight `1..=weight_max`.
pub fn all_words(weight_max: u32) -> Vec<Index> {
    fn extend(rest: u32, parts: &mut Vec<u32>, out: &mut Vec<Index>) {
        if rest == 0 {
            out.push(Index::new(parts.clone()).unwrap());
            return;
        }
        for first in 1..=rest {
            parts.push(first);
            extend(rest - first, parts, out);
            parts.pop();
        }
    }
    let mut out = Vec::new();
    for w in 1..=weight_max {
        extend(w, &mut Vec::new(), &mut out);
    }
    out
}

/// A random word of weight exactly `weight` and depth at most `max_depth`.
pub fn random_word(rng: &mut ChaCha8Rng, weight: u32, max_depth: usize) -> Index {
    loop {
        let mut parts = Vec::new();
        let mut rest = weight;
        while rest > 0 {
            let part = rng.gen_range(1..=rest);
            parts.push(part);
            rest -= part;
        }
        if parts.len() <= max_depth {
            return Index::new(parts).unwrap();
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn binomial(a: u64, b: u64) -> u64 {
    if b > a {
        return 0;
    }
    (0..b).fold(1, |acc, j| acc * (a - j) / (j + 1))
}
