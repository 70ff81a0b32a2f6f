//! The integer-base algorithm: nested dyadic, triadic, ... intervals whose
//! added digit blocks have small simple discrepancy in every active base.

use std::cmp::Ordering;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::config::FSpec;
use super::search::{BlockConstraints, LexSearch};
use super::trace::{BlockCheck, ExactValue, StepTrace, TEntry, TSequence, TRACE_SCHEMA_VERSION};
use crate::algebraic::{compare_cross_field, FieldElement, PisotNumber};
use crate::beta::{inscribed_from, BetaSystem, Cylinder, ExactInterval, Word};
use crate::error::{Error, Result};
use crate::normality::{k_bhs, simple_discrepancy};
use crate::poly::Rat;
use crate::real::{ceil_log2, factorial, is_power_of_two};

/// Per-step search limits.
#[derive(Debug, Clone, Copy)]
pub struct Budgets {
    pub candidates: u64,
    pub nodes: u64,
    pub record_timing: bool,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { candidates: 100_000, nodes: 50_000_000, record_timing: false }
    }
}

#[derive(Debug, Clone)]
pub struct BhsState {
    pub i: u64,
    pub t: usize,
    pub eps: Rat,
    pub k: u64,
    pub delta: Option<Rat>,
    /// Entries for the bases `2..=t`.
    pub sequence: TSequence,
    /// `x_{i,b}` for `b = 2..=t`.
    pub digits: Vec<Word>,
    /// Mathematical-operation tally.
    pub ops: u64,
    systems: Vec<BetaSystem>,
}

impl BhsState {
    pub fn system(&mut self, b: usize) -> Result<BetaSystem> {
        while self.systems.len() + 2 <= b {
            let next = self.systems.len() as u32 + 2;
            self.systems.push(BetaSystem::new(&PisotNumber::integer(next)?)?);
        }
        Ok(self.systems[b - 2].clone())
    }

    pub fn digits_in(&self, b: usize) -> Option<&Word> {
        self.digits.get(b.checked_sub(2)?)
    }
}

/// `t_1 = 2`, `ε_1 = 1/2`, `k_1 = 1`, `I_1 = ([0, 1))`.
pub fn bhs_init() -> BhsState {
    let two = BetaSystem::new(&PisotNumber::integer(2).expect("2 is Pisot")).expect("base 2");
    let root = two.root_cylinder();
    BhsState {
        i: 1,
        t: 2,
        eps: Rat::new(1.into(), 2.into()),
        k: 1,
        delta: None,
        sequence: TSequence { entries: vec![TEntry { base: "2".into(), cylinder: root, ratio_ok: true }] },
        digits: vec![Word::empty()],
        ops: 0,
        systems: vec![two],
    }
}

/// `(8 t 2^{t + u} t! u!)^{-1}`.
pub fn bhs_delta(t: usize, u: usize) -> Rat {
    let den = BigInt::from(8 * t as u64) * (BigInt::one() << (t + u)) * factorial(t as u64) * factorial(u as u64);
    Rat::new(BigInt::one(), den)
}

/// Declared cost of computing `k(1/(v+1), δ, v+1)`: `(v+1)² ⌈log₂(v+1)⌉²`.
pub fn k_cost(v: usize) -> u64 {
    let l = ceil_log2(&BigInt::from(v as u64 + 1));
    (v as u64 + 1).pow(2) * l * l
}

/// Declared cost of evaluating the bound `h(v+1, 1/(v+1))`: `4 (v+1) ⌈log₂(v+1)⌉`.
pub fn h_cost(v: usize) -> u64 {
    4 * (v as u64 + 1) * ceil_log2(&BigInt::from(v as u64 + 1))
}

/// Operation-count bound `h = h_* (h₁ g + h₂ + h₃ + h₄) h₀` for one step
/// run with `t` bases and block parameter `k`, where `len` is the longest
/// current digit string.
pub fn h_bound(t: usize, k: u64, len: usize) -> BigUint {
    let lt = ceil_log2(&BigInt::from(t as u64));
    let c = BigUint::from(lt) * k;
    let h1 = BigUint::from(t as u64);
    let h2 = c.clone();
    let h3 = BigUint::from(t as u64);
    let h4 = &h3 * &c * &c;
    let hstar = BigUint::one() << c.to_usize().expect("shift fits");
    let digits = BigUint::from(len as u64) + &c + BigUint::from(2 * t as u64);
    let g = &digits * &digits;
    let h0 = BigUint::from(len as u64) + &c + 1u32;
    hstar * (h1 * g + h2 + h3 + h4) * h0
}

/// Diagnostics of the t-update.
#[derive(Debug, Clone, Serialize)]
pub struct TUpdate {
    pub t: usize,
    pub eps: Rat,
    pub attempted: bool,
    pub m: Option<u64>,
    pub k_candidate: Option<u64>,
    pub h_candidate: Option<String>,
    pub cond_h: Option<bool>,
    pub cond_k: Option<bool>,
}

/// Decides `t_{i+1}` and `ε_{i+1}`.
pub fn bhs_update_t(state: &BhsState, f: &FSpec) -> Result<TUpdate> {
    let v = state.t;
    let i = state.i;
    let keep = TUpdate {
        t: v,
        eps: state.eps.clone(),
        attempted: false,
        m: None,
        k_candidate: None,
        h_candidate: None,
        cond_h: None,
        cond_k: None,
    };
    if !is_power_of_two(i + 1) {
        return Ok(keep);
    }
    let (m, fm) = f.within_budget(i)?;
    let mut out = TUpdate { attempted: true, m: Some(m), ..keep };
    if k_cost(v) > i || h_cost(v) > i {
        return Ok(out);
    }
    let delta = bhs_delta(v, v + 1);
    let w = Rat::new(1.into(), BigInt::from(v as u64 + 1));
    let k = k_bhs(&w, &delta, v as u64 + 1);
    let len = state.digits.iter().map(Word::len).max().unwrap_or(0);
    let h = h_bound(v + 1, k, len);
    let cond_h = Rat::from_integer(BigInt::from(h.clone())) < fm;
    let log_delta = ceil_log2(delta.denom());
    let num = ceil_log2(&BigInt::from(v as u64 + 1)) * k + log_delta;
    let cond_k = state
        .digits
        .iter()
        .take(v - 1)
        .all(|x| (num as u128) * (v as u128 + 1) < x.len() as u128);
    out.k_candidate = Some(k);
    out.h_candidate = Some(h.to_string());
    out.cond_h = Some(cond_h);
    out.cond_k = Some(cond_k);
    if cond_h && cond_k {
        out.t = v + 1;
        out.eps = w;
    }
    Ok(out)
}

/// Exact check `λ(child) * factor >= λ(parent)`.
pub(crate) fn ratio_holds(child: &Cylinder, parent: &Cylinder, factor: &FieldElement) -> bool {
    compare_cross_field(&(&child.lebesgue * factor), &parent.lebesgue) != Ordering::Less
}

fn extend(sys: &BetaSystem, c: &Cylinder, w: &[u32]) -> Result<Cylinder> {
    let mut c = c.clone();
    for &a in w {
        c = sys
            .child(&c, a)
            .ok_or_else(|| Error::Inadmissible(Word(w.to_vec()).to_string()))?;
    }
    Ok(c)
}

/// One step `i -> i + 1`.
pub fn bhs_step(state: &BhsState, f: &FSpec, budgets: Budgets) -> Result<(BhsState, StepTrace)> {
    let clock = Instant::now();
    let mut st = state.clone();
    let step = st.i + 1;
    let up = bhs_update_t(&st, f)?;
    let ti = st.t;
    let tn = up.t;
    let delta = bhs_delta(ti, tn);
    let k = k_bhs(&up.eps, &delta, ti as u64);
    let systems: Vec<BetaSystem> = (2..=tn).map(|b| st.system(b)).collect::<Result<_>>()?;
    let two = &systems[0];

    let last = ExactInterval::from_cylinder(&st.sequence.last().cylinder);
    let l = inscribed_from(two, &st.sequence.entries[0].cylinder, &last, 0)?;
    let mut ops = l.examined as u64;
    let l = l.cylinder;
    let c = (ceil_log2(&BigInt::from(ti as u64)) * k) as usize;
    let x2 = &st.digits[0];
    let prefix = &l.word.digits()[x2.len()..];
    let m2 = prefix.len() + c;
    let cons = BlockConstraints::simple_discrepancy(2, m2, &up.eps);
    let search = LexSearch::new(two.automaton(), &cons, c);

    let mut chosen: Option<(Vec<Cylinder>, Vec<BlockCheck>)> = None;
    let mut leaf = |ext: &[u32]| -> Result<bool> {
        let j2 = extend(two, &l, ext)?;
        let mut seq = vec![j2];
        for b in 3..=tn {
            let sys = &systems[b - 2];
            let start = if b <= ti { st.sequence.entries[b - 2].cylinder.clone() } else { sys.root_cylinder() };
            let prev = ExactInterval::from_cylinder(seq.last().unwrap());
            let r = inscribed_from(sys, &start, &prev, 0)?;
            ops += r.examined as u64;
            seq.push(r.cylinder);
        }
        let mut checks = Vec::new();
        for b in 2..=ti {
            let u = &seq[b - 2].word.digits()[st.digits[b - 2].len()..];
            let d = simple_discrepancy(u, b as u32)?;
            let passed = d <= up.eps;
            checks.push(BlockCheck {
                position: b - 1,
                base: b.to_string(),
                length: u.len(),
                passed,
                discrepancy: Some(ExactValue::rat(&d)),
                worst_block: None,
                worst_count: None,
            });
            if !passed {
                return Ok(false);
            }
        }
        chosen = Some((seq, checks));
        Ok(true)
    };
    let found = search
        .first(l.state, prefix, c, budgets.candidates, budgets.nodes, &mut leaf)
        .map_err(|e| match e {
            Error::CandidateBudgetExceeded { examined, .. } => Error::CandidateBudgetExceeded { step, examined },
            e => e,
        })?
        .ok_or(Error::NoCandidateAccepted(step))?;
    let (seq, checks) = chosen.expect("accepted candidate recorded");
    ops += found.nodes + found.examined;

    let mut entries = Vec::with_capacity(tn - 1);
    for (idx, cyl) in seq.into_iter().enumerate() {
        let b = idx + 2;
        let ratio_ok = if idx == 0 {
            true
        } else {
            let factor = FieldElement::from_int(cyl.base(), 2 * b as i64);
            ratio_holds(&cyl, &entries.last().map(|e: &TEntry| e.cylinder.clone()).unwrap(), &factor)
        };
        entries.push(TEntry { base: b.to_string(), cylinder: cyl, ratio_ok });
    }
    let sequence = TSequence { entries };
    let mut added = Vec::new();
    let mut digits = Vec::with_capacity(tn - 1);
    for (idx, e) in sequence.entries.iter().enumerate() {
        let w = e.cylinder.word.clone();
        if let Some(old) = st.digits.get(idx) {
            if !w.digits().starts_with(old.digits()) {
                return Err(Error::Invariant(format!("base {} digits lost their prefix", idx + 2)));
            }
            added.push(Word(w.digits()[old.len()..].to_vec()).render(idx as u32 + 1));
        }
        digits.push(w);
    }
    let nested = sequence.is_nested();
    if !nested || !sequence.ratios_hold() {
        return Err(Error::Invariant(format!("step {step}: t-sequence is not nested with the ratio bounds")));
    }
    let index = BigUint::from_radix_be(&found.extension.iter().map(|&d| d as u8).collect::<Vec<_>>(), 2)
        .unwrap_or_default();
    let trace = StepTrace {
        schema: TRACE_SCHEMA_VERSION,
        kind: "bhs".into(),
        mode: "faithful".into(),
        step,
        t: tn,
        epsilon: up.eps.to_string(),
        k: k as usize,
        delta: ExactValue::rat(&delta),
        n: None,
        v: None,
        bases: (2..=tn).map(|b| b.to_string()).collect(),
        l_order: l.order(),
        candidate_length: c,
        candidates_examined: found.examined,
        candidate_index: index.to_string(),
        added,
        checks,
        ledger: None,
        sequence: sequence.summary(|j| j as u32 + 1),
        nested,
        wall_ms: budgets.record_timing.then(|| clock.elapsed().as_millis() as u64),
        ops,
    };
    st.i = step;
    st.t = tn;
    st.eps = up.eps;
    st.k = k;
    st.delta = Some(delta);
    st.sequence = sequence;
    st.digits = digits;
    st.ops += ops;
    Ok((st, trace))
}
