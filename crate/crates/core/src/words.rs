//! Indices (compositions) and formal integer combinations of them.
//!
//! An [`Index`] `(k_1, ..., k_n)` names the truncated sum over
//! `p > m_1 > ... > m_n >= 1` (or `>=` for the star variant). Whether a
//! combination is read as star or non-star is decided at evaluation time and
//! is never part of the word itself.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Index(Vec<u32>);

impl Index {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::ParseIndex {
                text: String::new(),
                reason: "an index needs at least one part".into(),
            });
        }
        if let Some(pos) = parts.iter().position(|&k| k == 0) {
            return Err(Error::ParseIndex {
                text: render_parts(&parts),
                reason: format!("part {} is zero", pos + 1),
            });
        }
        Ok(Index(parts))
    }

    pub(crate) fn from_parts_unchecked(parts: Vec<u32>) -> Self {
        debug_assert!(!parts.is_empty() && parts.iter().all(|&k| k >= 1));
        Index(parts)
    }

    /// `(k)`, a word of depth one.
    pub fn letter(k: u32) -> Result<Self> {
        Index::new(vec![k])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn max_part(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// All words obtained by merging runs of consecutive parts, paired with
    /// the number of merges performed. There are `2^(depth-1)` of them, all
    /// distinct.
    pub fn coarsenings(&self) -> Vec<(Index, u32)> {
        let gaps = self.depth() - 1;
        let mut out = Vec::with_capacity(1 << gaps);
        for mask in 0u64..(1u64 << gaps) {
            let mut parts = Vec::with_capacity(self.depth());
            let mut cur = self.0[0];
            for g in 0..gaps {
                if mask >> g & 1 == 1 {
                    cur += self.0[g + 1];
                } else {
                    parts.push(cur);
                    cur = self.0[g + 1];
                }
            }
            parts.push(cur);
            out.push((Index(parts), mask.count_ones()));
        }
        out
    }
}

fn render_parts(parts: &[u32]) -> String {
    parts
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_parts(&self.0))
    }
}

impl FromStr for Index {
    type Err = Error;

    /// Comma-separated parts, e.g. `"2,1,1"`. Surrounding parentheses and
    /// whitespace are tolerated.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim();
        let body = body
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .unwrap_or(body);
        let bad = |reason: String| Error::ParseIndex {
            text: s.to_string(),
            reason,
        };
        if body.trim().is_empty() {
            return Err(bad("empty index".into()));
        }
        let parts = body
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| bad(format!("part {:?}: {e}", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Index::new(parts).map_err(|e| match e {
            Error::ParseIndex { reason, .. } => bad(reason),
            other => other,
        })
    }
}

/// A finite formal sum `sum c_w * w` with integer coefficients.
///
/// Terms are kept in a sorted map and zero coefficients are never stored,
/// so two combinations are equal exactly when they are the same sum.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignedCombo {
    terms: BTreeMap<Index, i64>,
}

impl SignedCombo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(w: Index) -> Self {
        let mut c = Self::new();
        c.add_term(w, 1);
        c
    }

    pub fn add_term(&mut self, w: Index, coefficient: i64) {
        if coefficient == 0 {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(slot) => {
                slot.insert(coefficient);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coefficient;
                if *slot.get() == 0 {
                    slot.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &SignedCombo, scale: i64) {
        for (w, &c) in &other.terms {
            self.add_term(w.clone(), c * scale);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Index, i64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Index) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    /// Sum of the absolute values of the coefficients.
    pub fn mass(&self) -> u64 {
        self.terms.values().map(|c| c.unsigned_abs()).sum()
    }

    pub fn max_part(&self) -> u32 {
        self.terms.keys().map(Index::max_part).max().unwrap_or(0)
    }

    /// Extends `f` linearly: `sum c_w * w  ↦  sum c_w * f(w)`.
    pub fn map_linear(&self, mut f: impl FnMut(&Index) -> SignedCombo) -> SignedCombo {
        let mut out = SignedCombo::new();
        for (w, &c) in &self.terms {
            out.add_scaled(&f(w), c);
        }
        out
    }
}

impl FromIterator<(Index, i64)> for SignedCombo {
    fn from_iter<I: IntoIterator<Item = (Index, i64)>>(iter: I) -> Self {
        let mut c = SignedCombo::new();
        for (w, k) in iter {
            c.add_term(w, k);
        }
        c
    }
}

impl fmt::Display for SignedCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (w, c)) in self.terms.iter().enumerate() {
            let sign = if *c < 0 { "-" } else if n > 0 { "+" } else { "" };
            if n > 0 {
                f.write_str(" ")?;
            }
            match c.unsigned_abs() {
                1 => write!(f, "{sign}({w})")?,
                m => write!(f, "{sign}{m}({w})")?,
            }
        }
        Ok(())
    }
}

/// Compositions of `k` into `n` positive parts whose `i`-th part is at least
/// 2, in lexicographic order.
pub fn enumerate_index_set(k: u32, n: u32, i: u32) -> Result<Vec<Index>> {
    if !(1 <= i && i <= n && n < k) {
        return Err(Error::InvalidParameters {
            k,
            n,
            i,
            rule: "1 <= i <= n <= k - 1",
        });
    }
    let mut out = Vec::new();
    let mut parts = Vec::with_capacity(n as usize);
    fill_compositions(k, n as usize, (i - 1) as usize, &mut parts, &mut out);
    Ok(out)
}

fn fill_compositions(
    remaining: u32,
    n: usize,
    big: usize,
    parts: &mut Vec<u32>,
    out: &mut Vec<Index>,
) {
    let pos = parts.len();
    if pos + 1 == n {
        if remaining >= if pos == big { 2 } else { 1 } {
            parts.push(remaining);
            out.push(Index(parts.clone()));
            parts.pop();
        }
        return;
    }
    // Later slots need at least one each, plus one more if the big slot is
    // still ahead.
    let reserve = (n - pos - 1) as u32 + u32::from(big > pos);
    let lo = if pos == big { 2 } else { 1 };
    for part in lo..=remaining.saturating_sub(reserve) {
        parts.push(part);
        fill_compositions(remaining - part, n, big, parts, out);
        parts.pop();
    }
}

/// Quasi-shuffle (harmonic) product. Every coefficient is positive and the
/// result describes the termwise expansion of the product of the two
/// truncated sums.
pub fn stuffle(w1: &Index, w2: &Index) -> SignedCombo {
    let mut memo = BTreeMap::new();
    let words = stuffle_parts(w1.parts(), w2.parts(), &mut memo);
    let mut out = SignedCombo::new();
    for (parts, c) in words {
        out.add_term(Index(parts), c);
    }
    out
}

type StuffleMemo = BTreeMap<(usize, usize), Vec<(Vec<u32>, i64)>>;

/// Words of `a * b` with multiplicities, for suffixes `a`, `b`. The first
/// letter comes from `a`, from `b`, or is the merged letter `a_1 + b_1`.
fn stuffle_parts(a: &[u32], b: &[u32], memo: &mut StuffleMemo) -> Vec<(Vec<u32>, i64)> {
    if a.is_empty() {
        return vec![(b.to_vec(), 1)];
    }
    if b.is_empty() {
        return vec![(a.to_vec(), 1)];
    }
    let key = (a.len(), b.len());
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let mut out = Vec::new();
    let mut prefixed = |head: u32, tail: Vec<(Vec<u32>, i64)>| {
        for (w, c) in tail {
            let mut v = Vec::with_capacity(w.len() + 1);
            v.push(head);
            v.extend(w);
            out.push((v, c));
        }
    };
    prefixed(a[0], stuffle_parts(&a[1..], b, memo));
    prefixed(b[0], stuffle_parts(a, &b[1..], memo));
    prefixed(a[0] + b[0], stuffle_parts(&a[1..], &b[1..], memo));
    memo.insert(key, out.clone());
    out
}

/// The raw terms of the insertion/merge relation for `w = (k_1..k_{n-1})`
/// and a letter `l`: the `n` words with `l` inserted at each position
/// (coefficient `+1`), then the `n - 1` words with `l` added onto one part
/// (coefficient `+1`, or `-1` for the star relation). Duplicates are kept.
pub fn insert_merge_terms(w: &Index, l: u32, star: bool) -> Vec<(Index, i64)> {
    let parts = w.parts();
    let mut terms = Vec::with_capacity(2 * parts.len() + 1);
    for j in 0..=parts.len() {
        let mut v = Vec::with_capacity(parts.len() + 1);
        v.extend_from_slice(&parts[..j]);
        v.push(l);
        v.extend_from_slice(&parts[j..]);
        terms.push((Index(v), 1));
    }
    let merge_sign = if star { -1 } else { 1 };
    for j in 0..parts.len() {
        let mut v = parts.to_vec();
        v[j] += l;
        terms.push((Index(v), merge_sign));
    }
    terms
}

/// [`insert_merge_terms`] collected into a combination. It evaluates to zero
/// at every prime `p` with `p - 1` not dividing `l`, because it is the
/// expansion of a product with the vanishing depth-one value `(l)`.
pub fn insert_merge_expansion(w: &Index, l: u32, star: bool) -> SignedCombo {
    insert_merge_terms(w, l, star).into_iter().collect()
}

/// Rewrites a non-star value in terms of star values: inclusion–exclusion
/// over the coarsenings, with sign `(-1)^(number of merges)`.
pub fn star_expansion(w: &Index) -> SignedCombo {
    w.coarsenings()
        .into_iter()
        .map(|(c, merges)| (c, if merges % 2 == 0 { 1 } else { -1 }))
        .collect()
}

/// Rewrites a star value in terms of non-star values: every coarsening with
/// coefficient `+1`.
pub fn nonstar_expansion(w: &Index) -> SignedCombo {
    w.coarsenings().into_iter().map(|(c, _)| (c, 1)).collect()
}
