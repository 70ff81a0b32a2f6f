use std::cmp::Ordering;
use std::io::Write;

use serde::Serialize;

use crate::algebraic::{compare_cross_field, FieldElement};
use crate::beta::{Cylinder, ExactInterval};
use crate::error::{Error, Result};
use crate::poly::Rat;
use crate::real::RealInterval;

pub const TRACE_SCHEMA_VERSION: u32 = 1;

/// Rational with a decimal rendering.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactValue {
    pub exact: Option<String>,
    pub lower: f64,
    pub upper: f64,
}

impl ExactValue {
    pub fn rat(r: &Rat) -> Self {
        let f = crate::real::to_f64(r);
        ExactValue { exact: Some(r.to_string()), lower: f, upper: f }
    }

    pub fn interval(i: &RealInterval) -> Self {
        let exact = (i.lo() == i.hi()).then(|| i.lo().to_string());
        ExactValue { exact, lower: crate::real::to_f64(i.lo()), upper: crate::real::to_f64(i.hi()) }
    }

    pub fn field(x: &FieldElement) -> Self {
        match x.as_rat() {
            Some(r) => ExactValue::rat(&r),
            None => {
                let i = x.enclose(64);
                ExactValue {
                    exact: Some(x.to_string()),
                    lower: crate::real::to_f64(i.lo()),
                    upper: crate::real::to_f64(i.hi()),
                }
            }
        }
    }
}

/// One interval of a t-sequence.
#[derive(Debug, Clone)]
pub struct TEntry {
    /// Label of the base, e.g. `x^2-x-1` or `3`.
    pub base: String,
    pub cylinder: Cylinder,
    /// Whether `λ(I_j) * factor >= λ(I_{j-1})` was verified exactly.
    pub ratio_ok: bool,
}

/// Nested intervals, one per base index.
#[derive(Debug, Clone, Default)]
pub struct TSequence {
    pub entries: Vec<TEntry>,
}

impl TSequence {
    /// Exact check that every entry lies in its predecessor.
    pub fn is_nested(&self) -> bool {
        self.entries.windows(2).all(|w| {
            let (a, b) = (&w[0].cylinder, &w[1].cylinder);
            compare_cross_field(&b.left, &a.left) != Ordering::Less
                && compare_cross_field(&b.right(), &a.right()) != Ordering::Greater
        })
    }

    pub fn ratios_hold(&self) -> bool {
        self.entries.iter().all(|e| e.ratio_ok)
    }

    pub fn last(&self) -> &TEntry {
        self.entries.last().expect("t-sequence is never empty")
    }

    pub fn interval_of(&self, j: usize) -> ExactInterval {
        ExactInterval::from_cylinder(&self.entries[j].cylinder)
    }

    pub fn summary(&self, max_digit: impl Fn(usize) -> u32) -> Vec<EntrySummary> {
        self.entries
            .iter()
            .enumerate()
            .map(|(j, e)| EntrySummary {
                base: e.base.clone(),
                order: e.cylinder.order(),
                word_tail: tail(&e.cylinder.word.render(max_digit(j)), 48),
                left: ExactValue::field(&e.cylinder.left).lower,
                length: e.cylinder.lebesgue.to_f64(),
                ratio_ok: e.ratio_ok,
            })
            .collect()
    }
}

fn tail(s: &str, n: usize) -> String {
    let chars: Vec<char> = s.chars().collect();
    if chars.len() <= n {
        s.to_string()
    } else {
        format!("...{}", chars[chars.len() - n..].iter().collect::<String>())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EntrySummary {
    pub base: String,
    pub order: usize,
    pub word_tail: String,
    pub left: f64,
    pub length: f64,
    pub ratio_ok: bool,
}

/// Acceptance check of one added block.
#[derive(Debug, Clone, Serialize)]
pub struct BlockCheck {
    pub position: usize,
    pub base: String,
    pub length: usize,
    pub passed: bool,
    /// Simple discrepancy for integer bases in BHS runs.
    pub discrepancy: Option<ExactValue>,
    /// Worst block and its count for (ε, k)-normality checks.
    pub worst_block: Option<String>,
    pub worst_count: Option<u64>,
}

/// Measure accounting of one step.
#[derive(Debug, Clone, Serialize)]
pub struct Ledger {
    pub lambda_i1: ExactValue,
    pub lambda_s_lower: ExactValue,
    pub lambda_n_upper: ExactValue,
    /// `λ(S) / λ(I_{i,1})` lower bound.
    pub s_factor: ExactValue,
    /// `λ(N) / λ(I_{i,1})` upper bound.
    pub n_factor: ExactValue,
    /// `analytic` or `census`.
    pub source: String,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepTrace {
    pub schema: u32,
    pub kind: String,
    pub mode: String,
    pub step: u64,
    pub t: usize,
    pub epsilon: String,
    pub k: usize,
    pub delta: ExactValue,
    pub n: Option<usize>,
    pub v: Option<usize>,
    pub bases: Vec<String>,
    /// Word of the interval `L`.
    pub l_order: usize,
    pub candidate_length: usize,
    pub candidates_examined: u64,
    pub candidate_index: String,
    pub added: Vec<String>,
    pub checks: Vec<BlockCheck>,
    pub ledger: Option<Ledger>,
    pub sequence: Vec<EntrySummary>,
    pub nested: bool,
    pub wall_ms: Option<u64>,
    pub ops: u64,
}

/// Writes one trace line per step.
pub fn write_jsonl<W: Write>(out: &mut W, trace: &[StepTrace]) -> Result<()> {
    for t in trace {
        let line = serde_json::to_string(t).map_err(|e| Error::Invariant(e.to_string()))?;
        writeln!(out, "{line}").map_err(|e| Error::Invariant(e.to_string()))?;
    }
    Ok(())
}
