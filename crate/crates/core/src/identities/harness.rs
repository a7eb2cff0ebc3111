//! Sweeps identity checks over a prime window and assembles a report.
//!
//! Each check compares two independently computed values. A check at prime
//! `p` counts only when `p` meets the identity's threshold (usually
//! `p >= k + 3`); primes below it are skipped, not failed.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    binomial_convolutions, binomial_exact, duality_instance_residual, kaneko_rhs,
    recurrence_combination, star_initial_value, star_nonstar_sum_residual, sum_lhs, sum_rhs,
    two_index_closed_form, PrimeData,
};
use crate::cache::BernoulliCache;
use crate::error::Result;
use crate::evaluator::map_primes;
use crate::modarith::{Prime, PrimeWindow, Residue};
use crate::words::{
    insert_merge_expansion, nonstar_expansion, star_expansion, stuffle, Index, SignedCombo,
};

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    DepthOne,
    DepthTwo,
    MainTheorem,
    Kaneko,
    InsertMerge,
    Recurrence,
    StarInitial,
    Duality,
    StarNonstar,
    Binomial,
    Stuffle,
    Conversion,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::DepthOne,
        Suite::DepthTwo,
        Suite::MainTheorem,
        Suite::Kaneko,
        Suite::InsertMerge,
        Suite::Recurrence,
        Suite::StarInitial,
        Suite::Duality,
        Suite::StarNonstar,
        Suite::Binomial,
        Suite::Stuffle,
        Suite::Conversion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::DepthOne => "depth-one",
            Suite::DepthTwo => "depth-two",
            Suite::MainTheorem => "main-theorem",
            Suite::Kaneko => "kaneko",
            Suite::InsertMerge => "insert-merge",
            Suite::Recurrence => "recurrence",
            Suite::StarInitial => "star-initial",
            Suite::Duality => "duality",
            Suite::StarNonstar => "star-nonstar",
            Suite::Binomial => "binomial",
            Suite::Stuffle => "stuffle",
            Suite::Conversion => "conversion",
        }
    }

    /// Parses a comma-separated list; `all` selects every suite.
    pub fn parse_list(s: &str) -> std::result::Result<Vec<Suite>, String> {
        let mut out = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if tok == "all" {
                out.extend(Suite::ALL);
            } else {
                out.push(tok.parse()?);
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    fn needs_bernoulli(self) -> bool {
        matches!(
            self,
            Suite::DepthTwo
                | Suite::MainTheorem
                | Suite::Kaneko
                | Suite::Recurrence
                | Suite::StarInitial
        )
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
                format!("unknown suite {s:?} (expected all or one of {})", names.join(", "))
            })
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub suites: Vec<Suite>,
    pub weight_max: u32,
    pub window: PrimeWindow,
    pub workers: usize,
    /// Random (word, letter) and (word, word) pairs per sampled suite.
    pub samples: usize,
    pub seed: u64,
    pub cache_dir: Option<PathBuf>,
}

impl SuiteConfig {
    pub fn new(suites: Vec<Suite>, weight_max: u32, window: PrimeWindow) -> Self {
        SuiteConfig {
            suites,
            weight_max,
            window,
            workers: 1,
            samples: 200,
            seed: 0x5eed,
            cache_dir: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub words: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub letter: Option<u32>,
}

impl CheckParams {
    fn kni(k: u32, n: u32, i: u32, star: bool) -> Self {
        CheckParams {
            k: Some(k),
            n: Some(n),
            i: Some(i),
            star: Some(star),
            ..Default::default()
        }
    }
}

/// One evaluated instance of an identity. Values are canonical decimal
/// strings: residues in `[0, p)`, or exact integers when `prime` is absent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub params: CheckParams,
    #[serde(default)]
    pub prime: Option<u32>,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentitySummary {
    pub threshold: String,
    pub checked: u64,
    pub passed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub suites: Vec<String>,
    pub window: PrimeWindow,
    pub weight_max: u32,
    pub samples: usize,
    pub seed: u64,
    pub identities: BTreeMap<String, IdentitySummary>,
    pub failures: Vec<IdentityCheck>,
}

impl VerificationReport {
    pub fn checked(&self) -> u64 {
        self.identities.values().map(|s| s.checked).sum()
    }

    pub fn passed(&self) -> u64 {
        self.identities.values().map(|s| s.passed).sum()
    }

    pub fn all_passed(&self) -> bool {
        self.failures.is_empty() && self.checked() == self.passed()
    }
}

// Identity names and the primes at which they are checked.
const THRESHOLD_K3: &str = "p >= k+3";
const THRESHOLD_K1: &str = "p > k";
const THRESHOLD_ALL: &str = "all primes";
const THRESHOLD_EXACT: &str = "exact integers";

fn threshold_of(identity: &str) -> &'static str {
    match identity {
        "star-nonstar" => THRESHOLD_K1,
        "stuffle" | "conversion-star" | "conversion-nonstar" => THRESHOLD_ALL,
        "binomial-plain" | "binomial-alternating" | "conversion-round-trip" => THRESHOLD_EXACT,
        _ => THRESHOLD_K3,
    }
}

fn identities_of(suite: Suite) -> &'static [&'static str] {
    match suite {
        Suite::DepthOne => &["depth-one"],
        Suite::DepthTwo => &["depth-two"],
        Suite::MainTheorem => &["main-theorem", "main-theorem-symmetry", "even-weight"],
        Suite::Kaneko => &["kaneko", "kaneko-specialization"],
        Suite::InsertMerge => &["insert-merge"],
        Suite::Recurrence => &["recurrence", "recurrence-closed-form"],
        Suite::StarInitial => &["star-initial"],
        Suite::Duality => &["duality"],
        Suite::StarNonstar => &["star-nonstar"],
        Suite::Binomial => &["binomial-plain", "binomial-alternating"],
        Suite::Stuffle => &["stuffle"],
        Suite::Conversion => &["conversion-star", "conversion-nonstar", "conversion-round-trip"],
    }
}

/// Prime-independent inputs shared by every per-prime worker.
struct Plan {
    suites: Vec<Suite>,
    weight_max: u32,
    insert_merge: Vec<(Index, u32)>,
    stuffle_pairs: Vec<(Index, Index)>,
    all_words: Vec<Index>,
}

impl Plan {
    fn new(config: &SuiteConfig) -> Self {
        let has = |s| config.suites.contains(&s);
        let w = config.weight_max;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let insert_merge = if has(Suite::InsertMerge) && w >= 2 {
            (0..config.samples)
                .map(|_| {
                    let t = rng.gen_range(1..w);
                    let word = random_composition(&mut rng, t, t as usize);
                    (word, rng.gen_range(1..=w - t))
                })
                .collect()
        } else {
            Vec::new()
        };
        let stuffle_pairs = if has(Suite::Stuffle) && w >= 1 {
            (0..config.samples)
                .map(|_| {
                    let wa = rng.gen_range(1..=w);
                    let a = random_composition(&mut rng, wa, 3);
                    let wb = rng.gen_range(1..=w);
                    let b = random_composition(&mut rng, wb, 3);
                    (a, b)
                })
                .collect()
        } else {
            Vec::new()
        };
        let all_words = if has(Suite::Conversion) {
            (1..=w)
                .flat_map(|t| {
                    Index::from_parts_unchecked(vec![1; t as usize])
                        .coarsenings()
                        .into_iter()
                        .map(|(c, _)| c)
                })
                .collect()
        } else {
            Vec::new()
        };
        Plan {
            suites: config.suites.clone(),
            weight_max: w,
            insert_merge,
            stuffle_pairs,
            all_words,
        }
    }
}

/// A composition of `weight` with a uniformly chosen depth
/// `1..=min(weight, max_depth)` and uniformly chosen cut points.
fn random_composition(rng: &mut ChaCha8Rng, weight: u32, max_depth: usize) -> Index {
    let depth = rng.gen_range(1..=max_depth.min(weight as usize));
    let mut cuts = sample(rng, weight as usize - 1, depth - 1).into_vec();
    cuts.sort_unstable();
    let mut parts = Vec::with_capacity(depth);
    let mut prev = 0u32;
    for c in cuts {
        parts.push(c as u32 + 1 - prev);
        prev = c as u32 + 1;
    }
    parts.push(weight - prev);
    Index::from_parts_unchecked(parts)
}

#[derive(Default)]
struct Tally {
    counts: BTreeMap<&'static str, (u64, u64)>,
    failures: Vec<IdentityCheck>,
}

impl Tally {
    fn record(
        &mut self,
        identity: &'static str,
        params: CheckParams,
        prime: Option<Prime>,
        lhs: String,
        rhs: String,
    ) {
        let pass = lhs == rhs;
        let slot = self.counts.entry(identity).or_default();
        slot.0 += 1;
        if pass {
            slot.1 += 1;
        } else {
            self.failures.push(IdentityCheck {
                identity: identity.to_string(),
                params,
                prime: prime.map(Prime::get),
                lhs,
                rhs,
                pass,
            });
        }
    }

    fn residues(&mut self, identity: &'static str, params: CheckParams, p: Prime, lhs: Residue, rhs: Residue) {
        self.record(identity, params, Some(p), lhs.to_string(), rhs.to_string());
    }

    fn merge(&mut self, other: Tally) {
        for (name, (c, ok)) in other.counts {
            let slot = self.counts.entry(name).or_default();
            slot.0 += c;
            slot.1 += ok;
        }
        self.failures.extend(other.failures);
    }
}

/// Brute-force index-set sums, memoized per prime.
struct Sums<'a> {
    data: &'a PrimeData,
    memo: HashMap<(u32, u32, u32, bool), Residue>,
}

impl<'a> Sums<'a> {
    fn get(&mut self, k: u32, n: u32, i: u32, star: bool) -> Result<Residue> {
        if let Some(&r) = self.memo.get(&(k, n, i, star)) {
            return Ok(r);
        }
        let r = sum_lhs(self.data, k, n, i, star)?;
        self.memo.insert((k, n, i, star), r);
        Ok(r)
    }
}

fn run_prime(plan: &Plan, data: &PrimeData) -> Result<Tally> {
    let p = data.prime();
    let pv = p.get();
    let above = |k: u32| k + 3 <= pv;
    let mut t = Tally::default();
    let mut sums = Sums {
        data,
        memo: HashMap::new(),
    };
    let ev = data.evaluator();
    let zero = Residue::zero(p);
    let wmax = plan.weight_max;
    let flags = [false, true];

    for &suite in &plan.suites {
        match suite {
            Suite::DepthOne => {
                for k in (1..=wmax).filter(|&k| above(k)) {
                    let w = Index::from_parts_unchecked(vec![k]);
                    for star in flags {
                        let params = CheckParams {
                            k: Some(k),
                            star: Some(star),
                            words: vec![w.to_string()],
                            ..Default::default()
                        };
                        t.residues("depth-one", params, p, ev.eval(&w, star), zero);
                    }
                }
            }
            Suite::DepthTwo => {
                for k in (2..=wmax).filter(|&k| above(k)) {
                    for k1 in 1..k {
                        let w = Index::from_parts_unchecked(vec![k1, k - k1]);
                        let rhs = two_index_closed_form(data, k1, k - k1)?;
                        for star in flags {
                            let params = CheckParams {
                                k: Some(k),
                                star: Some(star),
                                words: vec![w.to_string()],
                                ..Default::default()
                            };
                            t.residues("depth-two", params, p, ev.eval(&w, star), rhs);
                        }
                    }
                }
            }
            Suite::MainTheorem => {
                for k in (2..=wmax).filter(|&k| above(k)) {
                    for n in 1..k {
                        for i in 1..=n {
                            for star in flags {
                                let lhs = sums.get(k, n, i, star)?;
                                let rhs = sum_rhs(data, k, n, i, star)?;
                                t.residues("main-theorem", CheckParams::kni(k, n, i, star), p, lhs, rhs);
                                if k % 2 == 0 {
                                    t.residues("even-weight", CheckParams::kni(k, n, i, star), p, lhs, zero);
                                }
                            }
                            let mirrored = Residue::sign(n - 1, p) * sum_rhs(data, k, n, n + 1 - i, false)?;
                            t.residues(
                                "main-theorem-symmetry",
                                CheckParams::kni(k, n, i, true),
                                p,
                                sum_rhs(data, k, n, i, true)?,
                                mirrored,
                            );
                        }
                    }
                }
            }
            Suite::Kaneko => {
                for k in (2..=wmax).filter(|&k| above(k)) {
                    for n in 1..k {
                        for star in flags {
                            let display = kaneko_rhs(data, k, n, star)?;
                            let params = CheckParams::kni(k, n, 1, star);
                            t.residues("kaneko", params.clone(), p, sums.get(k, n, 1, star)?, display);
                            t.residues("kaneko-specialization", params, p, sum_rhs(data, k, n, 1, star)?, display);
                        }
                    }
                }
            }
            Suite::InsertMerge => {
                for (w, l) in &plan.insert_merge {
                    if !above(w.weight() + l) {
                        continue;
                    }
                    for star in flags {
                        let params = CheckParams {
                            k: Some(w.weight() + l),
                            star: Some(star),
                            words: vec![w.to_string()],
                            letter: Some(*l),
                            ..Default::default()
                        };
                        let lhs = ev.eval_combo(&insert_merge_expansion(w, *l, star), star);
                        t.residues("insert-merge", params, p, lhs, zero);
                    }
                }
            }
            Suite::Recurrence => {
                for k in (3..=wmax).filter(|&k| above(k)) {
                    for n in 2..k {
                        for i in 1..n {
                            for star in flags {
                                let params = CheckParams::kni(k, n, i, star);
                                let lhs = recurrence_combination(p, k, n, i, star, |k, n, i| sums.get(k, n, i, star))?;
                                t.residues("recurrence", params.clone(), p, lhs, zero);
                                let closed = recurrence_combination(p, k, n, i, star, |k, n, i| {
                                    sum_rhs(data, k, n, i, star)
                                })?;
                                t.residues("recurrence-closed-form", params, p, closed, zero);
                            }
                        }
                    }
                }
            }
            Suite::StarInitial => {
                for k in (2..=wmax).filter(|&k| above(k)) {
                    for i in 1..k {
                        let params = CheckParams::kni(k, k - 1, i, true);
                        let lhs = sums.get(k, k - 1, i, true)?;
                        t.residues("star-initial", params, p, lhs, star_initial_value(data, k, i)?);
                    }
                }
            }
            Suite::Duality => {
                for k in (2..=wmax).filter(|&k| above(k)) {
                    for i in 1..k {
                        let params = CheckParams {
                            k: Some(k),
                            i: Some(i),
                            star: Some(true),
                            ..Default::default()
                        };
                        t.residues("duality", params, p, duality_instance_residual(data, k, i)?, zero);
                    }
                }
            }
            Suite::StarNonstar => {
                for k in (2..=wmax).filter(|&k| k < pv) {
                    for n in 1..k {
                        let params = CheckParams {
                            k: Some(k),
                            n: Some(n),
                            ..Default::default()
                        };
                        t.residues("star-nonstar", params, p, star_nonstar_sum_residual(data, k, n)?, zero);
                    }
                }
            }
            Suite::Stuffle => {
                // The quasi-shuffle describes products of non-star sums.
                for (a, b) in &plan.stuffle_pairs {
                    let params = CheckParams {
                        star: Some(false),
                        words: vec![a.to_string(), b.to_string()],
                        ..Default::default()
                    };
                    let product = ev.eval(a, false) * ev.eval(b, false);
                    t.residues("stuffle", params, p, product, ev.eval_combo(&stuffle(a, b), false));
                }
            }
            Suite::Conversion => {
                for w in &plan.all_words {
                    let params = CheckParams {
                        words: vec![w.to_string()],
                        ..Default::default()
                    };
                    t.residues(
                        "conversion-star",
                        params.clone(),
                        p,
                        ev.eval_combo(&star_expansion(w), true),
                        ev.eval(w, false),
                    );
                    t.residues(
                        "conversion-nonstar",
                        params,
                        p,
                        ev.eval_combo(&nonstar_expansion(w), false),
                        ev.eval(w, true),
                    );
                }
            }
            Suite::Binomial => {}
        }
    }
    Ok(t)
}

/// Checks that do not involve a prime.
fn run_exact(plan: &Plan) -> Tally {
    let mut t = Tally::default();
    for &suite in &plan.suites {
        match suite {
            Suite::Binomial => {
                for k in 2..=plan.weight_max {
                    for n in 1..k {
                        let (plain, alternating) = binomial_convolutions(k, n);
                        let params = CheckParams {
                            k: Some(k),
                            n: Some(n),
                            ..Default::default()
                        };
                        let expected = binomial_exact(k as i64 - 1, n as i64 - 1);
                        t.record("binomial-plain", params.clone(), None, plain.to_string(), expected.to_string());
                        t.record(
                            "binomial-alternating",
                            params,
                            None,
                            alternating.to_string(),
                            BigInt::from(1).to_string(),
                        );
                    }
                }
            }
            Suite::Conversion => {
                for w in &plan.all_words {
                    let back = star_expansion(w).map_linear(nonstar_expansion);
                    let params = CheckParams {
                        words: vec![w.to_string()],
                        ..Default::default()
                    };
                    t.record(
                        "conversion-round-trip",
                        params,
                        None,
                        back.to_string(),
                        SignedCombo::singleton(w.clone()).to_string(),
                    );
                }
            }
            _ => {}
        }
    }
    t
}

/// Runs every selected suite over the window. Output is identical for any
/// worker count: per-prime results are merged in ascending prime order.
pub fn verify_suite(config: &SuiteConfig) -> Result<VerificationReport> {
    let mut suites = config.suites.clone();
    suites.sort();
    suites.dedup();
    let config = SuiteConfig {
        suites,
        ..config.clone()
    };
    let plan = Plan::new(&config);
    let needs_prime = plan
        .suites
        .iter()
        .any(|&s| s != Suite::Binomial);
    let primes = if needs_prime {
        config.window.primes()?
    } else {
        Vec::new()
    };
    let needs_bernoulli = plan.suites.iter().any(|s| s.needs_bernoulli());
    let cache = config.cache_dir.as_ref().map(BernoulliCache::new);

    let per_prime = map_primes(&primes, config.workers, |p| {
        let max_part = plan.weight_max.max(1);
        let data = match (&cache, needs_bernoulli) {
            (Some(cache), true) => {
                let table = cache.load_or_compute(p, p.get().saturating_sub(2))?;
                PrimeData::with_bernoulli(p, max_part, table)
            }
            _ => PrimeData::new(p, max_part),
        };
        run_prime(&plan, &data)
    })?;

    let mut tally = run_exact(&plan);
    for t in per_prime {
        tally.merge(t);
    }

    let mut identities = BTreeMap::new();
    for &suite in &plan.suites {
        for &name in identities_of(suite) {
            let (checked, passed) = tally.counts.get(name).copied().unwrap_or((0, 0));
            identities.insert(
                name.to_string(),
                IdentitySummary {
                    threshold: threshold_of(name).to_string(),
                    checked,
                    passed,
                },
            );
        }
    }

    Ok(VerificationReport {
        schema: REPORT_SCHEMA,
        suites: plan.suites.iter().map(|s| s.name().to_string()).collect(),
        window: config.window,
        weight_max: config.weight_max,
        samples: config.samples,
        seed: config.seed,
        identities,
        failures: tally.failures,
    })
}
