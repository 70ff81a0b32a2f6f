//! The multi-base algorithm for a sequence of Pisot bases.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::bhs::{ratio_holds, Budgets};
use super::config::{t_of, Mode, Profile, TLog};
use super::schedule::{beta_interval, ln_beta, shrink_factor, Schedule, ScheduleBase};
use super::search::{BlockConstraints, LexSearch};
use super::trace::{BlockCheck, ExactValue, Ledger, StepTrace, TEntry, TSequence, TRACE_SCHEMA_VERSION};
use crate::algebraic::{compare_cross_field, FieldElement, PisotNumber};
use crate::beta::{inscribed_from, BetaSystem, Cylinder, ExactInterval, Word};
use crate::error::{Error, Result};
use crate::normality::{corollary_constant, eta_interval, relative_non_normal_mass, NormalityChecker};
use crate::poly::{rat, Rat};
use crate::real::{certified_floor, RealInterval};

/// Largest count table used for the exact non-normal mass.
pub const CENSUS_CAP: usize = 400_000;

#[derive(Debug, Clone)]
pub struct PisotState {
    pub i: u64,
    pub mode: Mode,
    pub raw: Vec<BetaSystem>,
    pub schedule: Schedule,
    pub t: usize,
    pub eps: Rat,
    pub k: usize,
    pub delta: Option<RealInterval>,
    pub n: Option<usize>,
    pub v: Option<usize>,
    /// `I_{i,1} ⊇ ... ⊇ I_{i,t}`.
    pub sequence: TSequence,
    /// `x_{i,j}` per position.
    pub digits: Vec<Word>,
    pub ops: u64,
    pub t_log: TLog,
    pub profile: Option<Profile>,
    sched: Vec<ScheduleBase>,
}

impl PisotState {
    /// System of the base at position `j` (1-based).
    pub fn system(&self, j: usize) -> &BetaSystem {
        &self.raw[self.schedule.list[j - 1]]
    }

    fn m(&self, j: usize) -> usize {
        self.system(j).m_zero()
    }

    pub fn label(&self, j: usize) -> String {
        self.system(j).base().to_string()
    }
}

/// `t_1 = 1`, `ε_1 = 1`, `k_1 = 1`, `I_1 = ([0, 1))`.
pub fn pisot_init(raw: &[PisotNumber], mode: Mode, profile: Option<Profile>, t_log: TLog) -> Result<PisotState> {
    if raw.is_empty() {
        return Err(Error::InvalidConfig("no bases".into()));
    }
    if mode == Mode::Scaled {
        profile
            .as_ref()
            .ok_or_else(|| Error::InvalidConfig("scaled mode needs a profile".into()))?
            .validate()?;
    }
    let raw: Vec<BetaSystem> = raw.iter().map(BetaSystem::new).collect::<Result<_>>()?;
    let sched = raw.iter().map(ScheduleBase::new).collect();
    let root = raw[0].root_cylinder();
    Ok(PisotState {
        i: 1,
        mode,
        sequence: TSequence {
            entries: vec![TEntry { base: raw[0].base().to_string(), cylinder: root, ratio_ok: true }],
        },
        raw,
        schedule: Schedule::new(),
        t: 1,
        eps: rat(1),
        k: 1,
        delta: None,
        n: None,
        v: None,
        digits: vec![Word::empty()],
        ops: 0,
        t_log,
        profile,
        sched,
    })
}

/// Parameters of step `i + 1`.
#[derive(Debug, Clone, Serialize)]
pub struct StepParams {
    pub step: u64,
    pub t: usize,
    pub eps: Rat,
    pub k: usize,
    #[serde(skip)]
    pub delta: RealInterval,
    pub n: usize,
    pub v: usize,
}

/// Advances the schedule and computes `t, ε, k, δ, n, v` for the next step.
pub fn pisot_params(state: &mut PisotState) -> Result<StepParams> {
    let step = state.i + 1;
    let (t, eps, k) = match (state.mode, &state.profile) {
        (Mode::Scaled, Some(p)) => (
            p.t_at(step).expect("validated"),
            p.eps_at(step)?.expect("validated"),
            p.k_at(step).expect("validated"),
        ),
        _ => {
            let t = t_of(step, state.t_log);
            (t, Rat::new(1.into(), BigInt::from(t)), t)
        }
    };
    if t < state.t {
        return Err(Error::InvalidConfig(format!("step {step}: t decreases from {} to {t}", state.t)));
    }
    let sched = state.sched.clone();
    state.schedule.extend_to(&sched, t, step);
    let delta = pisot_delta(state, t, 256);
    let n = match (state.mode, &state.profile) {
        (Mode::Scaled, Some(p)) => p.n_at(step).expect("validated"),
        _ => pisot_choose_n(state, t, &eps, k, &delta)?,
    };
    let v = pisot_v(state);
    Ok(StepParams { step, t, eps, k, delta, n, v })
}

/// `δ = 1/2 · 1/(2β_1^{M_1+4}) · 1/t_i · 1/(2^{t_i} Π_{j<=t_i} β_j^{M_j+4})
/// · 1/(2^{t'} Π_{j<=t'} β_j^{M_j+4})`.
pub fn pisot_delta(state: &PisotState, t_next: usize, bits: u32) -> RealInterval {
    let shrink = |j: usize| shrink_factor(state.system(j).base(), state.m(j), bits + 32);
    let mut d = RealInterval::point(Rat::new(1.into(), BigInt::from(4 * state.t as u64)))
        .mul(&shrink(1))
        .scale(&crate::real::pow2(-((state.t + t_next) as i64)));
    for j in 1..=state.t {
        d = d.mul(&shrink(j));
    }
    for j in 1..=t_next {
        d = d.mul(&shrink(j));
    }
    d.round_out(bits)
}

/// Least `n >= max_j (M_j + k)` with
/// `4 (β_j/(β_j-1))² β_j^k β_j^{-n η_j} < δ` for every active base.
pub fn pisot_choose_n(state: &PisotState, t: usize, eps: &Rat, k: usize, delta: &RealInterval) -> Result<usize> {
    let mut n = 0usize;
    for j in 1..=t {
        let sys = state.system(j);
        let base = sys.base();
        let m = sys.m_zero();
        let x = certified_floor(|bits| {
            let b = beta_interval(base, bits + 16);
            let lb = ln_beta(base, bits + 16);
            let ratio = b.div(&b.sub(&RealInterval::int(1))).ln(bits + 16);
            let num = RealInterval::int(4)
                .ln(bits + 16)
                .add(&ratio.scale(&rat(2)))
                .add(&lb.scale(&rat(k as i64)))
                .sub(&delta.ln(bits + 16));
            let eta = eta_interval(base, eps, k, m, bits + 16);
            num.div(&eta.mul(&lb)).round_out(bits)
        });
        let least = (x + BigInt::one()).to_usize().expect("n fits");
        n = n.max(least).max(m + k);
    }
    Ok(n)
}

/// `v_i = ⌈max_{j<=t_i} log β_j / log β_1⌉`, decided exactly by comparing
/// `β_j` with powers of `β_1`.
pub fn pisot_v(state: &PisotState) -> usize {
    let b1 = state.system(1).base().clone();
    let lb1 = b1.approx().ln();
    (1..=state.t)
        .map(|j| {
            let bj = state.system(j).base();
            if *bj == b1 {
                return 1;
            }
            let beta_j = FieldElement::beta(bj);
            let pow = |c: usize| FieldElement::beta(&b1).pow(c as u64);
            let mut c = ((bj.approx().ln() / lb1).ceil() as usize).max(1);
            while compare_cross_field(&beta_j, &pow(c)) == std::cmp::Ordering::Greater {
                c += 1;
            }
            while c > 1 && compare_cross_field(&beta_j, &pow(c - 1)) != std::cmp::Ordering::Greater {
                c -= 1;
            }
            c
        })
        .max()
        .unwrap_or(1)
}

fn ledger_holds(n_up: &RealInterval, s_low: &RealInterval) -> bool {
    n_up.hi() < s_low.lo()
}

/// Measure ledger: a lower bound for `λ(S)` and an upper bound for `λ(N)`,
/// both proportional to `λ(I_{i,1})`.
pub fn verify_feasibility(state: &PisotState, p: &StepParams) -> Result<Ledger> {
    let mut bits = 128;
    loop {
        let l1 = state.sequence.entries[0].cylinder.lebesgue.enclose(bits + 32);
        let shrink = |j: usize| shrink_factor(state.system(j).base(), state.m(j), bits + 32);
        let mut s = RealInterval::point(crate::real::pow2(-((state.t + p.t + 1) as i64)));
        for j in 1..=state.t {
            s = s.mul(&shrink(j));
        }
        for j in 1..=p.t {
            s = s.mul(&shrink(j));
        }
        let (n_coef, source) = match state.mode {
            Mode::Faithful => (p.delta.scale(&rat(state.t as i64)), "analytic"),
            Mode::Scaled => scaled_bad_mass(state, p, bits)?,
        };
        let holds = ledger_holds(&n_coef, &s);
        if holds || bits >= 1024 || n_coef.lo() >= s.hi() {
            let ledger = Ledger {
                lambda_i1: ExactValue::field(&state.sequence.entries[0].cylinder.lebesgue),
                lambda_s_lower: ExactValue::interval(&s.mul(&l1)),
                lambda_n_upper: ExactValue::interval(&n_coef.mul(&l1)),
                s_factor: ExactValue::interval(&s),
                n_factor: ExactValue::interval(&n_coef),
                source: source.into(),
                holds,
            };
            return Ok(ledger);
        }
        bits *= 2;
    }
}

/// `Σ_{j<=t_i} e_j` with `e_j` the relative non-normal mass of base `j`
/// at its nominal block length, from the exact census where it fits and
/// the counting bound `C |L_n|^{1-η} β^{-n} / min y` otherwise.
fn scaled_bad_mass(state: &PisotState, p: &StepParams, bits: u32) -> Result<(RealInterval, &'static str)> {
    let mut total = RealInterval::int(0);
    let mut source = "census";
    for j in 1..=state.t {
        let sys = state.system(j);
        let len = if j == 1 { p.v * p.n } else { p.n };
        match relative_non_normal_mass(sys, &p.eps, p.k, len, CENSUS_CAP)? {
            Some(e) => total = total.add(&e.enclose(bits)),
            None => {
                source = "analytic";
                let m = sys.m_zero();
                let c = corollary_constant(sys, p.k, m).enclose(bits);
                let eta = eta_interval(sys.base(), &p.eps, p.k, m, bits);
                let words = RealInterval::point(Rat::from_integer(BigInt::from(sys.count_words(len))));
                let count = RealInterval::int(1).sub(&eta).mul(&words.ln(bits)).exp(bits).mul(&c);
                let min_y = sys
                    .follower()
                    .iter()
                    .map(|y| y.enclose(bits))
                    .reduce(|a, b| a.min(&b))
                    .expect("states");
                let e = count.mul(&sys.pow(-(len as i64)).enclose(bits)).div(&min_y);
                total = total.add(&e);
            }
        }
    }
    Ok((total, source))
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
pub fn pisot_step(state: &PisotState, budgets: Budgets) -> Result<(PisotState, StepTrace)> {
    let clock = Instant::now();
    let mut st = state.clone();
    let p = pisot_params(&mut st)?;
    let step = p.step;
    let ledger = verify_feasibility(&st, &p)?;
    if !ledger.holds {
        return Err(Error::FeasibilityViolated(step));
    }
    let ti = st.t;
    let sys1 = st.system(1).clone();
    let m1 = sys1.m_zero();
    let last = st.sequence.interval_of(ti - 1);
    let l = inscribed_from(&sys1, &st.sequence.entries[0].cylinder, &last, m1)?;
    let mut ops = l.examined as u64;
    let l = l.cylinder;
    let len1 = p.v * p.n;
    let x1 = st.digits[0].len();
    let prefix = &l.word.digits()[x1..];
    let checker1 = NormalityChecker::new(&sys1, &p.eps, p.k, prefix.len() + len1)?;
    let cons = BlockConstraints::from_checker(&checker1);
    let search = LexSearch::new(sys1.automaton(), &cons, len1);

    let mut checkers: HashMap<(usize, usize), NormalityChecker> = HashMap::new();
    let mut chosen: Option<(Vec<Cylinder>, Vec<BlockCheck>)> = None;
    let st_ref = &st;
    let mut leaf = |ext: &[u32]| -> Result<bool> {
        let j1 = extend(&sys1, &l, ext)?;
        let mut seq = vec![j1];
        for j in 2..=p.t {
            let sys = st_ref.system(j);
            let start = if j <= ti { st_ref.sequence.entries[j - 1].cylinder.clone() } else { sys.root_cylinder() };
            let prev = ExactInterval::from_cylinder(seq.last().unwrap());
            let r = inscribed_from(sys, &start, &prev, sys.m_zero())?;
            ops += r.examined as u64;
            seq.push(r.cylinder);
        }
        let mut checks = Vec::with_capacity(ti);
        for j in 1..=ti {
            let u = &seq[j - 1].word.digits()[st_ref.digits[j - 1].len()..];
            let key = (st_ref.schedule.list[j - 1], u.len());
            if let std::collections::hash_map::Entry::Vacant(e) = checkers.entry(key) {
                let c = NormalityChecker::new(st_ref.system(j), &p.eps, p.k, u.len())?;
                e.insert(c);
            }
            let report = checkers[&key].report(u);
            checks.push(BlockCheck {
                position: j,
                base: st_ref.label(j),
                length: u.len(),
                passed: report.verdict,
                discrepancy: None,
                worst_block: Some(report.worst_block.render(st_ref.system(j).max_digit())),
                worst_count: Some(report.worst_count),
            });
            if !report.verdict {
                return Ok(false);
            }
        }
        chosen = Some((seq, checks));
        Ok(true)
    };
    let found = search
        .first(l.state, prefix, len1, budgets.candidates, budgets.nodes, &mut leaf)
        .map_err(|e| match e {
            Error::CandidateBudgetExceeded { examined, .. } => Error::CandidateBudgetExceeded { step, examined },
            e => e,
        })?
        .ok_or(Error::NoCandidateAccepted(step))?;
    let (seq, checks) = chosen.expect("accepted candidate recorded");
    ops += found.nodes + found.examined;
    let index = sys1.automaton().rank_from(l.state, &found.extension);

    let mut entries: Vec<TEntry> = Vec::with_capacity(p.t);
    for (idx, cyl) in seq.into_iter().enumerate() {
        let j = idx + 1;
        let ratio_ok = match entries.last() {
            None => true,
            Some(prev) => {
                let sys = st.system(j);
                let factor = sys.pow(sys.m_zero() as i64 + 4).scale(&rat(2));
                ratio_holds(&cyl, &prev.cylinder, &factor)
            }
        };
        entries.push(TEntry { base: st.label(j), cylinder: cyl, ratio_ok });
    }
    let sequence = TSequence { entries };
    let nested = sequence.is_nested();
    if !nested || !sequence.ratios_hold() {
        return Err(Error::Invariant(format!("step {step}: t-sequence is not nested with the ratio bounds")));
    }
    let mut added = Vec::new();
    let mut digits = Vec::with_capacity(p.t);
    for (idx, e) in sequence.entries.iter().enumerate() {
        let w = e.cylinder.word.clone();
        if let Some(old) = st.digits.get(idx) {
            if !w.digits().starts_with(old.digits()) {
                return Err(Error::Invariant(format!("position {} digits lost their prefix", idx + 1)));
            }
            added.push(Word(w.digits()[old.len()..].to_vec()).render(st.system(idx + 1).max_digit()));
        }
        digits.push(w);
    }
    let labels: Vec<String> = (1..=p.t).map(|j| st.label(j)).collect();
    let max_digits: Vec<u32> = (1..=p.t).map(|j| st.system(j).max_digit()).collect();
    let trace = StepTrace {
        schema: TRACE_SCHEMA_VERSION,
        kind: "pisot".into(),
        mode: match st.mode {
            Mode::Faithful => "faithful".into(),
            Mode::Scaled => "scaled".into(),
        },
        step,
        t: p.t,
        epsilon: p.eps.to_string(),
        k: p.k,
        delta: ExactValue::interval(&p.delta),
        n: Some(p.n),
        v: Some(p.v),
        bases: labels,
        l_order: l.order(),
        candidate_length: len1,
        candidates_examined: found.examined,
        candidate_index: index.to_string(),
        added,
        checks,
        ledger: Some(ledger),
        sequence: sequence.summary(|j| max_digits[j]),
        nested,
        wall_ms: budgets.record_timing.then(|| clock.elapsed().as_millis() as u64),
        ops,
    };
    st.i = step;
    st.t = p.t;
    st.eps = p.eps;
    st.k = p.k;
    st.delta = Some(p.delta);
    st.n = Some(p.n);
    st.v = Some(p.v);
    st.sequence = sequence;
    st.digits = digits;
    st.ops += ops;
    Ok((st, trace))
}
