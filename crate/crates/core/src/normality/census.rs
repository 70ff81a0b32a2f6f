use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use super::blocks::NormalityChecker;
use super::constants::{corollary_constant, eta_interval};
use crate::algebraic::FieldElement;
use crate::beta::BetaSystem;
use crate::error::{Error, Result};
use crate::poly::Rat;
use crate::real::{to_f64, RealInterval};

/// Largest `|L_n|` the census will enumerate.
pub const CENSUS_LIMIT: u64 = 10_000_000;

/// End state from every start state; determines the Parry measure of a
/// cylinder.
type Signature = Vec<Option<usize>>;

#[derive(Debug, Clone, Serialize)]
pub struct Census {
    pub base: String,
    pub n: usize,
    pub eps: Rat,
    pub k: usize,
    pub m: usize,
    pub words: BigUint,
    pub count: u64,
    #[serde(skip)]
    pub mass: FieldElement,
    pub mass_approx: f64,
    /// Enclosure of `4 |L_k| |L_n|^{-η}`.
    pub mass_bound: (f64, f64),
    /// Enclosure of `C |L_n|^{1-η}`.
    pub count_bound: (f64, f64),
    /// Whether `n >= M + k`, so that the bounds are asserted.
    pub applies: bool,
    pub mass_ok: bool,
    pub count_ok: bool,
}

impl Census {
    pub fn passes(&self) -> bool {
        !self.applies || (self.mass_ok && self.count_ok)
    }
}

struct Partial {
    count: u64,
    by_signature: BTreeMap<Signature, u64>,
}

fn walk(
    sys: &BetaSystem,
    checker: &NormalityChecker,
    n: usize,
    word: &mut Vec<u32>,
    states: &mut Vec<Signature>,
    counts: &mut Vec<u64>,
    out: &mut Partial,
) {
    let depth = word.len();
    if depth == n {
        if !checker.counts_pass(counts) {
            out.count += 1;
            *out.by_signature.entry(states[depth].clone()).or_default() += 1;
        }
        return;
    }
    let a = sys.automaton();
    let k = checker.k;
    let radix = checker.radix();
    let table = checker.slot_table();
    let from0 = states[depth][0].expect("state 0 path is live");
    for d in 0..=a.bound[from0] {
        let next: Signature = states[depth]
            .iter()
            .map(|s| s.and_then(|s| a.step(s, d)))
            .collect();
        word.push(d);
        let slot = if word.len() >= k {
            let idx = word[word.len() - k..]
                .iter()
                .fold(0usize, |acc, &x| acc * radix + x as usize);
            let s = table[idx];
            (s != usize::MAX).then_some(s)
        } else {
            None
        };
        if let Some(s) = slot {
            counts[s] += 1;
        }
        states.push(next);
        walk(sys, checker, n, word, states, counts, out);
        states.pop();
        if let Some(s) = slot {
            counts[s] -= 1;
        }
        word.pop();
    }
}

/// Exhaustive count and Parry mass of the words of `L_n` that are not
/// (ε, k)-normal, checked against the analytic bounds.
pub fn non_normal_census(sys: &BetaSystem, n: usize, eps: &Rat, k: usize, m: usize) -> Result<Census> {
    let total = sys.count_words(n);
    if total > BigUint::from(CENSUS_LIMIT) {
        return Err(Error::EnumerationBudgetExceeded { size: total.to_string(), limit: CENSUS_LIMIT });
    }
    let checker = NormalityChecker::new(sys, eps, k, n)?;
    let a = sys.automaton();
    let p = a.states();
    let start: Signature = (0..p).map(Some).collect();

    // split the tree on a short prefix and walk the subtrees in parallel
    let split = n.min(4);
    let prefixes = a.enumerate(split, CENSUS_LIMIT)?;
    let partials: Vec<Partial> = prefixes
        .par_iter()
        .map(|(w, _)| {
            let mut word = Vec::with_capacity(n);
            let mut states = vec![start.clone()];
            let mut counts = vec![0u64; checker.blocks()];
            for &d in w.digits() {
                let next: Signature = states
                    .last()
                    .unwrap()
                    .iter()
                    .map(|s| s.and_then(|s| a.step(s, d)))
                    .collect();
                word.push(d);
                if word.len() >= k {
                    if let Some(s) = checker.slot_of(&word[word.len() - k..]) {
                        counts[s] += 1;
                    }
                }
                states.push(next);
            }
            let mut out = Partial { count: 0, by_signature: BTreeMap::new() };
            walk(sys, &checker, n, &mut word, &mut states, &mut counts, &mut out);
            out
        })
        .collect();

    let mut count = 0u64;
    let mut by_signature: BTreeMap<Signature, u64> = BTreeMap::new();
    for part in partials {
        count += part.count;
        for (sig, c) in part.by_signature {
            *by_signature.entry(sig).or_default() += c;
        }
    }
    let mut mass = sys.zero();
    for (sig, c) in &by_signature {
        let mu = sys.parry().from_signature(n, sig);
        mass = &mass + &mu.scale(&Rat::from_integer(BigInt::from(*c)));
    }

    let lk = BigInt::from(sys.count_words(k));
    let ln_total = BigInt::from(total.clone());
    let cor = corollary_constant(sys, k, m);
    let applies = n >= m + k;
    let mut bits = 96;
    let (mass_ok, count_ok, mass_bound, count_bound) = loop {
        let eta = eta_interval(sys.base(), eps, k, m, bits);
        let ln_l = RealInterval::point(Rat::from_integer(ln_total.clone())).ln(bits);
        let mass_rhs = eta
            .neg()
            .mul(&ln_l)
            .exp(bits)
            .scale(&Rat::from_integer(&lk * 4));
        let count_rhs = RealInterval::int(1)
            .sub(&eta)
            .mul(&ln_l)
            .exp(bits)
            .mul(&cor.enclose(bits));
        let mi = mass.enclose(bits);
        let cnt = RealInterval::point(Rat::from_integer(BigInt::from(count)));
        let decide = |v: &RealInterval, bound: &RealInterval| {
            if v.hi() <= bound.lo() {
                Some(true)
            } else if v.lo() > bound.hi() {
                Some(false)
            } else {
                None
            }
        };
        let m_ok = decide(&mi, &mass_rhs);
        let c_ok = decide(&cnt, &count_rhs);
        let bounds = (
            (to_f64(mass_rhs.lo()), to_f64(mass_rhs.hi())),
            (to_f64(count_rhs.lo()), to_f64(count_rhs.hi())),
        );
        match (m_ok, c_ok) {
            (Some(a), Some(b)) => break (a, b, bounds.0, bounds.1),
            _ if bits > 2048 => break (false, false, bounds.0, bounds.1),
            _ => bits *= 2,
        }
    };
    Ok(Census {
        base: sys.base().to_string(),
        n,
        eps: eps.clone(),
        k,
        m,
        words: total,
        count,
        mass_approx: mass.to_f64(),
        mass,
        mass_bound,
        count_bound,
        applies,
        mass_ok,
        count_ok,
    })
}

/// Non-normal count by plain enumeration, without the bound checks.
pub fn census_count_only(sys: &BetaSystem, n: usize, eps: &Rat, k: usize) -> Result<u64> {
    let checker = NormalityChecker::new(sys, eps, k, n)?;
    let words = sys.automaton().enumerate(n, CENSUS_LIMIT)?;
    Ok(words
        .iter()
        .filter(|(w, _)| !checker.is_normal(w.digits()))
        .count()
        .to_u64()
        .unwrap_or(u64::MAX))
}

/// Largest relative Lebesgue mass, over the start states `s`, of the
/// admissible words `w` of length `n` read from `s` that are not
/// (ε, k)-normal: `max_s Σ β^{-n} y_{δ(s, w)} / y_s`. This is the share of a
/// cylinder ending in state `s` whose next `n` digits are not normal.
/// Returns `None` when the count table would exceed `cap` entries.
pub fn relative_non_normal_mass(
    sys: &BetaSystem,
    eps: &Rat,
    k: usize,
    n: usize,
    cap: usize,
) -> Result<Option<FieldElement>> {
    use std::collections::HashMap;
    let checker = NormalityChecker::new(sys, eps, k, n)?;
    let a = sys.automaton();
    let p = a.states();
    let radix = checker.radix();
    let table = checker.slot_table();
    let blocks = checker.blocks();
    let bounds: Vec<(i64, i64)> = (0..blocks).map(|i| checker.thresholds(i)).collect();
    let windows = n.saturating_sub(k - 1) as i64;
    let keep = k.saturating_sub(1);
    let r_pow = radix.pow(keep as u32);
    let mut best: Option<FieldElement> = None;
    for s0 in 0..p {
        // (state, context length, context value, counts) -> number of words
        let mut live: HashMap<(usize, usize, usize, Vec<u32>), BigUint> = HashMap::new();
        live.insert((s0, 0, 0, vec![0; blocks]), BigUint::from(1u32));
        let mut failed = vec![BigUint::from(0u32); p];
        for pos in 0..n {
            let mut next_live: HashMap<(usize, usize, usize, Vec<u32>), BigUint> = HashMap::new();
            let mut next_failed = vec![BigUint::from(0u32); p];
            for (s, f) in failed.iter().enumerate() {
                if f.bits() == 0 {
                    continue;
                }
                for d in 0..=a.bound[s].min(a.max_digit) {
                    if let Some(t) = a.step(s, d) {
                        next_failed[t] += f;
                    }
                }
            }
            for ((s, clen, cval, counts), c) in live {
                for d in 0..=a.bound[s].min(a.max_digit) {
                    let Some(t) = a.step(s, d) else { continue };
                    let mut counts = counts.clone();
                    if clen == keep {
                        let v = cval * radix + d as usize;
                        if let Some(&slot) = table.get(v) {
                            if slot != usize::MAX {
                                counts[slot] += 1;
                            }
                        }
                    }
                    let (nlen, nval) = if keep == 0 {
                        (0, 0)
                    } else if clen < keep {
                        (clen + 1, cval * radix + d as usize)
                    } else {
                        (keep, (cval * radix + d as usize) % r_pow)
                    };
                    // windows completed after this digit
                    let done = (pos + 1).saturating_sub(k - 1) as i64;
                    let left = windows - done;
                    let doomed = counts.iter().zip(&bounds).any(|(&c, &(lo, hi))| {
                        c as i64 > hi || (c as i64) + left < lo
                    });
                    if doomed {
                        next_failed[t] += &c;
                    } else {
                        *next_live.entry((t, nlen, nval, counts)).or_default() += &c;
                    }
                }
            }
            if next_live.len() > cap {
                return Ok(None);
            }
            live = next_live;
            failed = next_failed;
        }
        let mut bad = failed;
        for ((s, _, _, counts), c) in live {
            let ok = counts.iter().zip(&bounds).all(|(&c, &(lo, hi))| lo <= c as i64 && c as i64 <= hi);
            if !ok {
                bad[s] += c;
            }
        }
        let y = sys.follower();
        let mut mass = sys.zero();
        for (s, c) in bad.iter().enumerate() {
            if c.bits() > 0 {
                mass = &mass + &y[s].scale(&Rat::from_integer(BigInt::from(c.clone())));
            }
        }
        let rel = (&mass * &sys.pow(-(n as i64))) * y[s0].inverse()?;
        best = match best {
            Some(b) if b.try_cmp(&rel)? != std::cmp::Ordering::Less => Some(b),
            _ => Some(rel),
        };
    }
    Ok(best)
}
