//! Arithmetic in `Z/pZ` for primes `p < 2^31`.
//!
//! Residues are kept canonical in `[0, p)`. Products of two residues are
//! below `2^62`, so every reduction goes through a plain `u64` intermediate.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported prime, `2^31 - 1`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u32")]
pub struct Prime(u32);

impl Prime {
    pub fn new(value: u64) -> Result<Self> {
        if value > MAX_PRIME {
            return Err(Error::PrimeTooLarge(value));
        }
        if !is_prime(value) {
            return Err(Error::NotPrime(value));
        }
        Ok(Prime(value as u32))
    }

    pub(crate) fn new_unchecked(value: u32) -> Self {
        debug_assert!(is_prime(value as u64));
        Prime(value)
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;

    fn try_from(value: u64) -> Result<Self> {
        Prime::new(value)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An element of `Z/pZ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u32,
    modulus: Prime,
}

impl Residue {
    /// Reduces an arbitrary signed integer modulo `p`.
    pub fn new(value: i64, p: Prime) -> Self {
        let m = p.0 as i64;
        Residue {
            value: value.rem_euclid(m) as u32,
            modulus: p,
        }
    }

    #[inline]
    pub(crate) fn from_canonical(value: u32, p: Prime) -> Self {
        debug_assert!(value < p.0);
        Residue { value, modulus: p }
    }

    pub fn zero(p: Prime) -> Self {
        Residue { value: 0, modulus: p }
    }

    pub fn one(p: Prime) -> Self {
        Residue::new(1, p)
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> Prime {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, exp: u64) -> Self {
        mod_pow(self, exp)
    }

    /// Multiplicative inverse by Fermat's little theorem; `None` for zero.
    pub fn inverse(self) -> Option<Self> {
        if self.value == 0 {
            None
        } else {
            Some(self.pow(self.modulus.0 as u64 - 2))
        }
    }

    /// `(-1)^e` in `Z/pZ`.
    pub fn sign(e: u32, p: Prime) -> Self {
        if e.is_multiple_of(2) {
            Residue::one(p)
        } else {
            -Residue::one(p)
        }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let p = self.modulus.0 as u64;
        let s = self.value as u64 + rhs.value as u64;
        Residue::from_canonical(if s >= p { s - p } else { s } as u32, self.modulus)
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self + (-rhs)
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        if self.value == 0 {
            self
        } else {
            Residue::from_canonical(self.modulus.0 - self.value, self.modulus)
        }
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let p = self.modulus.0 as u64;
        Residue::from_canonical(
            (self.value as u64 * rhs.value as u64 % p) as u32,
            self.modulus,
        )
    }
}

impl AddAssign for Residue {
    fn add_assign(&mut self, rhs: Residue) {
        *self = *self + rhs;
    }
}

impl SubAssign for Residue {
    fn sub_assign(&mut self, rhs: Residue) {
        *self = *self - rhs;
    }
}

impl MulAssign for Residue {
    fn mul_assign(&mut self, rhs: Residue) {
        *self = *self * rhs;
    }
}

/// Square-and-multiply exponentiation.
pub fn mod_pow(base: Residue, mut exp: u64) -> Residue {
    let p = base.modulus.0 as u64;
    let mut acc = 1 % p;
    let mut b = base.value as u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        exp >>= 1;
    }
    Residue::from_canonical(acc as u32, base.modulus)
}

/// Inverses of `1..p` in `O(p)` via `inv[i] = -(p / i) * inv[p mod i]`.
///
/// Index 0 holds 0 and is never a valid inverse.
pub fn batch_inverses(p: Prime) -> Vec<u32> {
    let p64 = p.0 as u64;
    let mut inv = vec![0u32; p.0 as usize];
    if p.0 > 1 {
        inv[1] = 1;
    }
    for i in 2..p64 {
        let q = p64 / i;
        let r = (p64 % i) as usize;
        inv[i as usize] = ((p64 - q) * inv[r] as u64 % p64) as u32;
    }
    inv
}

/// Primes in `[lo, hi]`, ascending, by a segmented sieve.
pub fn sieve_primes(lo: u64, hi: u64) -> Result<Vec<Prime>> {
    if lo < 2 || lo > hi {
        return Err(Error::InvalidWindow { lo, hi });
    }
    if hi > MAX_PRIME {
        return Err(Error::PrimeTooLarge(hi));
    }

    let root = isqrt(hi);
    let mut small = vec![true; root as usize + 1];
    let mut base = Vec::new();
    for d in 2..=root as usize {
        if small[d] {
            base.push(d as u64);
            let mut m = d * d;
            while m <= root as usize {
                small[m] = false;
                m += d;
            }
        }
    }

    let mut segment = vec![true; (hi - lo + 1) as usize];
    for &q in &base {
        let start = (q * q).max(lo.div_ceil(q) * q);
        let mut m = start;
        while m <= hi {
            segment[(m - lo) as usize] = false;
            m += q;
        }
    }

    Ok(segment
        .iter()
        .enumerate()
        .filter(|&(_, &is_p)| is_p)
        .map(|(off, _)| Prime::new_unchecked((lo + off as u64) as u32))
        .collect())
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// An inclusive range of integers whose primes are sampled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeWindow {
    pub lo: u64,
    pub hi: u64,
}

impl PrimeWindow {
    pub fn new(lo: u64, hi: u64) -> Result<Self> {
        if lo == 0 || lo > hi {
            return Err(Error::InvalidWindow { lo, hi });
        }
        if hi > MAX_PRIME {
            return Err(Error::PrimeTooLarge(hi));
        }
        Ok(PrimeWindow { lo, hi })
    }

    pub fn single(p: Prime) -> Self {
        PrimeWindow {
            lo: p.0 as u64,
            hi: p.0 as u64,
        }
    }

    pub fn primes(&self) -> Result<Vec<Prime>> {
        if self.hi < 2 {
            return Ok(Vec::new());
        }
        sieve_primes(self.lo.max(2), self.hi)
    }
}

impl fmt::Display for PrimeWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

impl FromStr for PrimeWindow {
    type Err = String;

    /// Accepts `LO..HI` or a single bound `P`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|e| format!("bad bound {t:?}: {e}"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b)?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        PrimeWindow::new(lo, hi).map_err(|e| e.to_string())
    }
}

/// Per-prime tables: inverses eagerly, factorials on first use.
#[derive(Debug)]
pub struct ModContext {
    p: Prime,
    inverses: Vec<u32>,
    factorials: OnceLock<FactorialTables>,
}

#[derive(Debug)]
struct FactorialTables {
    fact: Vec<u32>,
    inv_fact: Vec<u32>,
}

impl ModContext {
    pub fn new(p: Prime) -> Self {
        ModContext {
            p,
            inverses: batch_inverses(p),
            factorials: OnceLock::new(),
        }
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    /// Raw inverse table, `inverses()[m] * m ≡ 1` for `1 <= m < p`.
    #[inline]
    pub fn inverses(&self) -> &[u32] {
        &self.inverses
    }

    pub fn residue(&self, value: i64) -> Residue {
        Residue::new(value, self.p)
    }

    /// Inverse of `m mod p`; `None` when `p | m`.
    pub fn inverse(&self, m: i64) -> Option<Residue> {
        let r = self.residue(m);
        match r.value {
            0 => None,
            v => Some(Residue::from_canonical(self.inverses[v as usize], self.p)),
        }
    }

    fn factorial_tables(&self) -> &FactorialTables {
        self.factorials.get_or_init(|| {
            let p = self.p.0 as u64;
            let len = self.p.0 as usize;
            let mut fact = vec![1u32; len];
            let mut inv_fact = vec![1u32; len];
            for i in 1..len {
                fact[i] = (fact[i - 1] as u64 * i as u64 % p) as u32;
                inv_fact[i] = (inv_fact[i - 1] as u64 * self.inverses[i] as u64 % p) as u32;
            }
            FactorialTables { fact, inv_fact }
        })
    }

    /// `a! mod p` for `0 <= a < p`.
    pub fn factorial(&self, a: u32) -> Residue {
        Residue::from_canonical(self.factorial_tables().fact[a as usize], self.p)
    }

    pub fn binomial(&self, a: i64, b: i64) -> Result<Residue> {
        binomial_mod(a, b, self)
    }
}

/// `C(a, b) mod p` for `0 <= a < p`; zero when `b < 0` or `b > a`.
pub fn binomial_mod(a: i64, b: i64, ctx: &ModContext) -> Result<Residue> {
    let p = ctx.p;
    if a < 0 || a >= p.0 as i64 {
        return Err(Error::BinomialOutOfRange { a, b, p: p.0 });
    }
    if b < 0 || b > a {
        return Ok(Residue::zero(p));
    }
    let t = ctx.factorial_tables();
    let pm = p.0 as u64;
    let v = t.fact[a as usize] as u64 * t.inv_fact[b as usize] as u64 % pm
        * t.inv_fact[(a - b) as usize] as u64
        % pm;
    Ok(Residue::from_canonical(v as u32, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn prime(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    fn values(ps: &[Prime]) -> Vec<u32> {
        ps.iter().map(|p| p.get()).collect()
    }

    #[test]
    fn sieve_small_windows() {
        assert_eq!(
            values(&sieve_primes(2, 20).unwrap()),
            [2, 3, 5, 7, 11, 13, 17, 19]
        );
        assert_eq!(values(&sieve_primes(90, 100).unwrap()), [97]);
        assert_eq!(values(&sieve_primes(5, 5).unwrap()), [5]);
        assert!(sieve_primes(24, 28).unwrap().is_empty());
    }

    #[test]
    fn sieve_matches_trial_division() {
        let sieved = values(&sieve_primes(2, 5000).unwrap());
        let trial: Vec<u32> = (2..=5000u32).filter(|&n| is_prime(n as u64)).collect();
        assert_eq!(sieved, trial);
        let upper = values(&sieve_primes(4000, 5000).unwrap());
        assert_eq!(upper, trial.iter().copied().filter(|&p| p >= 4000).collect::<Vec<_>>());
    }

    #[test]
    fn sieve_rejects_bad_windows() {
        assert!(matches!(sieve_primes(2, MAX_PRIME + 1), Err(Error::PrimeTooLarge(_))));
        assert!(matches!(sieve_primes(1, 10), Err(Error::InvalidWindow { .. })));
        assert!(matches!(sieve_primes(10, 9), Err(Error::InvalidWindow { .. })));
        // The top of the supported range is itself prime.
        assert_eq!(
            values(&sieve_primes(MAX_PRIME - 20, MAX_PRIME).unwrap()),
            [2_147_483_629, MAX_PRIME as u32]
        );
    }

    #[test]
    fn prime_validation() {
        assert!(Prime::new(MAX_PRIME).is_ok());
        assert!(matches!(Prime::new(MAX_PRIME + 2), Err(Error::PrimeTooLarge(_))));
        assert!(matches!(Prime::new(1), Err(Error::NotPrime(1))));
        assert!(matches!(Prime::new(91), Err(Error::NotPrime(91))));
    }

    #[test]
    fn inverse_tables() {
        assert_eq!(&batch_inverses(prime(5))[1..], [1, 3, 2, 4]);
        assert_eq!(&batch_inverses(prime(2))[1..], [1]);
        assert_eq!(batch_inverses(prime(7))[3], 5);
    }

    #[test]
    fn inverses_for_all_primes_below_ten_thousand() {
        for p in sieve_primes(2, 10_000).unwrap() {
            let inv = batch_inverses(p);
            let m = p.get() as u64;
            for i in 1..m {
                assert_eq!(i * inv[i as usize] as u64 % m, 1, "p = {m}, i = {i}");
            }
        }
    }

    /// Pascal's triangle in exact integers, independent of the factorial tables.
    fn pascal(rows: usize) -> Vec<Vec<u64>> {
        let mut t: Vec<Vec<u64>> = vec![vec![1]];
        for a in 1..rows {
            let prev = &t[a - 1];
            let mut row = vec![1u64; a + 1];
            for b in 1..a {
                row[b] = prev[b - 1] + prev[b];
            }
            t.push(row);
        }
        t
    }

    #[test]
    fn binomial_examples() {
        let c5 = ModContext::new(prime(5));
        let c7 = ModContext::new(prime(7));
        assert_eq!(binomial_mod(4, 2, &c5).unwrap().value(), 1);
        let t = pascal(8);
        assert_eq!(t[6][3], 20);
        assert_eq!(binomial_mod(6, 3, &c7).unwrap().value(), (t[6][3] % 7) as u32);
        assert_eq!(binomial_mod(3, 5, &c7).unwrap().value(), 0);
        assert_eq!(binomial_mod(3, -1, &c7).unwrap().value(), 0);
        assert!(matches!(binomial_mod(7, 2, &c7), Err(Error::BinomialOutOfRange { .. })));
        assert!(matches!(binomial_mod(-1, 0, &c7), Err(Error::BinomialOutOfRange { .. })));
    }

    #[test]
    fn binomial_matches_pascal() {
        let t = pascal(60);
        for p in [61u64, 67, 97] {
            let ctx = ModContext::new(prime(p));
            for a in 0..60 {
                for b in 0..=a {
                    assert_eq!(ctx.binomial(a as i64, b as i64).unwrap().value() as u64, t[a][b] % p);
                }
            }
        }
    }

    #[test]
    fn pow_examples() {
        let r = |v, p| Residue::new(v, prime(p));
        assert_eq!(mod_pow(r(2, 7), 3).value(), 1);
        assert_eq!(mod_pow(r(0, 7), 0).value(), 1);
        assert_eq!(mod_pow(r(5, 11), 0).value(), 1);
        assert_eq!(mod_pow(r(3, 5), 4).value(), 1);
        assert_eq!(mod_pow(r(1, 2), 10).value(), 1);
    }

    #[test]
    fn residue_ops() {
        let p = prime(7);
        let a = Residue::new(-1, p);
        assert_eq!(a.value(), 6);
        assert_eq!((a + Residue::new(3, p)).value(), 2);
        assert_eq!((Residue::new(2, p) - Residue::new(5, p)).value(), 4);
        assert_eq!((-Residue::zero(p)).value(), 0);
        assert_eq!(Residue::new(3, p).inverse().unwrap().value(), 5);
        assert!(Residue::zero(p).inverse().is_none());
        assert_eq!(Residue::sign(3, p).value(), 6);
    }

    #[test]
    fn window_parsing() {
        assert_eq!("7..7".parse::<PrimeWindow>().unwrap(), PrimeWindow { lo: 7, hi: 7 });
        assert_eq!("11".parse::<PrimeWindow>().unwrap(), PrimeWindow { lo: 11, hi: 11 });
        assert!("9..3".parse::<PrimeWindow>().is_err());
        assert!("0..3".parse::<PrimeWindow>().is_err());
        assert!("a..3".parse::<PrimeWindow>().is_err());
        assert!(PrimeWindow::new(1, 1).unwrap().primes().unwrap().is_empty());
        assert_eq!(values(&PrimeWindow::new(1, 10).unwrap().primes().unwrap()), [2, 3, 5, 7]);
    }

    fn small_prime() -> impl Strategy<Value = Prime> {
        prop::sample::select(sieve_primes(3, 2000).unwrap())
    }

    proptest! {
        #[test]
        fn pascal_rule(p in small_prime(), a_seed in 1u32..2000, b_seed in 0u32..2000) {
            let ctx = ModContext::new(p);
            let a = 1 + a_seed % (p.get() - 1);
            let b = 1 + b_seed % a;
            let lhs = ctx.binomial(a as i64, b as i64).unwrap();
            let rhs = ctx.binomial(a as i64 - 1, b as i64 - 1).unwrap()
                + ctx.binomial(a as i64 - 1, b as i64).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn fermat(p in small_prime(), x in 1i64..1_000_000) {
            let r = Residue::new(x, p);
            prop_assume!(!r.is_zero());
            prop_assert_eq!(mod_pow(r, p.get() as u64 - 1).value(), 1);
        }

        #[test]
        fn inverse_agrees_with_fermat(p in small_prime(), x in 1i64..1_000_000) {
            let ctx = ModContext::new(p);
            if let Some(inv) = ctx.inverse(x) {
                prop_assert_eq!(inv, Residue::new(x, p).inverse().unwrap());
            }
        }
    }
}
