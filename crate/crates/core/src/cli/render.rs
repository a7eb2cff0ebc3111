//! Plain, JSON and CSV renderings. Residues are always canonical in
//! `[0, p)`; JSON carries them as decimal strings.

use std::io::Write;

use serde::Serialize;

use super::{Format, SumRow};
use crate::bernoulli::BernoulliTable;
use crate::cache::BernoulliRecord;
use crate::error::Result;
use crate::evaluator::AdelicSample;
use crate::identities::{VerificationReport, REPORT_SCHEMA};
use crate::modarith::PrimeWindow;
use crate::words::SignedCombo;

fn json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn csv_writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::Writer::from_writer(out)
}

#[derive(Serialize)]
struct SampleView<'a> {
    schema: u32,
    quantity: &'a str,
    star: bool,
    window: PrimeWindow,
    residues: Vec<PrimeValue>,
}

#[derive(Serialize)]
struct PrimeValue {
    p: u32,
    value: String,
}

pub(super) fn sample(out: &mut dyn Write, format: Format, s: &AdelicSample) -> Result<()> {
    match format {
        Format::Plain => {
            let star = if s.star { " star" } else { "" };
            writeln!(out, "# ({}){} over primes {}", s.description, star, s.window)?;
            for (p, r) in &s.residues {
                writeln!(out, "{p}: {r}")?;
            }
        }
        Format::Json => json(
            out,
            &SampleView {
                schema: REPORT_SCHEMA,
                quantity: &s.description,
                star: s.star,
                window: s.window,
                residues: s
                    .residues
                    .iter()
                    .map(|(p, r)| PrimeValue {
                        p: p.get(),
                        value: r.to_string(),
                    })
                    .collect(),
            },
        )?,
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["p", "residue"])?;
            for (p, r) in &s.residues {
                w.write_record([p.to_string(), r.to_string()])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ComboView {
    schema: u32,
    terms: Vec<TermView>,
}

#[derive(Serialize)]
struct TermView {
    word: String,
    coefficient: i64,
}

pub(super) fn combo(out: &mut dyn Write, format: Format, c: &SignedCombo) -> Result<()> {
    match format {
        Format::Plain => {
            for (w, k) in c.iter() {
                writeln!(out, "{k:+} ({w})")?;
            }
        }
        Format::Json => json(
            out,
            &ComboView {
                schema: REPORT_SCHEMA,
                terms: c
                    .iter()
                    .map(|(w, k)| TermView {
                        word: w.to_string(),
                        coefficient: k,
                    })
                    .collect(),
            },
        )?,
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["word", "coefficient"])?;
            for (word, k) in c.iter() {
                w.write_record([word.to_string(), k.to_string()])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

pub(super) fn bernoulli(out: &mut dyn Write, format: Format, t: &BernoulliTable) -> Result<()> {
    match format {
        Format::Plain => {
            writeln!(out, "# B_m mod {} for m = 0..{}", t.prime(), t.m_max())?;
            for (m, r) in t.values().iter().enumerate() {
                writeln!(out, "{m}: {r}")?;
            }
        }
        Format::Json => json(out, &BernoulliRecord::from_table(t))?,
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["m", "value"])?;
            for (m, r) in t.values().iter().enumerate() {
                w.write_record([m.to_string(), r.to_string()])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SumView<'a> {
    schema: u32,
    window: PrimeWindow,
    threshold: &'static str,
    rows: &'a [SumRow],
}

pub(super) fn sum(out: &mut dyn Write, format: Format, window: PrimeWindow, rows: &[SumRow]) -> Result<()> {
    match format {
        Format::Plain => {
            for r in rows {
                let rhs = r.rhs.as_deref().unwrap_or("-");
                let verdict = match r.pass {
                    Some(true) => "pass",
                    Some(false) => "FAIL",
                    None => "below threshold",
                };
                writeln!(
                    out,
                    "p={} k={} n={} i={} star={} lhs={} rhs={} {}",
                    r.p, r.k, r.n, r.i, r.star, r.lhs, rhs, verdict
                )?;
            }
        }
        Format::Json => json(
            out,
            &SumView {
                schema: REPORT_SCHEMA,
                window,
                threshold: "p >= k+3",
                rows,
            },
        )?,
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["p", "k", "n", "i", "star", "lhs", "rhs", "pass"])?;
            for r in rows {
                w.write_record([
                    r.p.to_string(),
                    r.k.to_string(),
                    r.n.to_string(),
                    r.i.to_string(),
                    r.star.to_string(),
                    r.lhs.clone(),
                    r.rhs.clone().unwrap_or_default(),
                    r.pass.map(|b| b.to_string()).unwrap_or_default(),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

pub(super) fn report(out: &mut dyn Write, format: Format, r: &VerificationReport) -> Result<()> {
    match format {
        Format::Plain => {
            writeln!(out, "suites: {}", r.suites.join(","))?;
            writeln!(out, "primes: {}", r.window)?;
            writeln!(out, "weight-max: {}", r.weight_max)?;
            writeln!(out, "samples: {} (seed {})", r.samples, r.seed)?;
            writeln!(
                out,
                "{:<24} {:<15} {:>9} {:>9}",
                "identity", "threshold", "checked", "passed"
            )?;
            for (name, s) in &r.identities {
                writeln!(
                    out,
                    "{:<24} {:<15} {:>9} {:>9}",
                    name, s.threshold, s.checked, s.passed
                )?;
            }
            writeln!(
                out,
                "total: {} checked, {} passed, {} failed",
                r.checked(),
                r.passed(),
                r.failures.len()
            )?;
            for f in &r.failures {
                let p = f.params.clone();
                let mut fields = Vec::new();
                for (key, v) in [("k", p.k), ("n", p.n), ("i", p.i), ("letter", p.letter)] {
                    if let Some(v) = v {
                        fields.push(format!("{key}={v}"));
                    }
                }
                if let Some(star) = p.star {
                    fields.push(format!("star={star}"));
                }
                for w in &p.words {
                    fields.push(format!("({w})"));
                }
                if let Some(prime) = f.prime {
                    fields.push(format!("p={prime}"));
                }
                writeln!(
                    out,
                    "FAIL {} {} lhs={} rhs={}",
                    f.identity,
                    fields.join(" "),
                    f.lhs,
                    f.rhs
                )?;
            }
        }
        Format::Json => json(out, r)?,
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["identity", "threshold", "checked", "passed"])?;
            for (name, s) in &r.identities {
                w.write_record([
                    name.clone(),
                    s.threshold.clone(),
                    s.checked.to_string(),
                    s.passed.to_string(),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
