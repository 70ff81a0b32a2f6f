use std::collections::HashMap;

use num_traits::ToPrimitive;
use serde::Serialize;

use super::word::Word;
use crate::algebraic::{FieldElement, PisotNumber};
use crate::error::{Error, Result};

/// One step of `x -> βx mod 1`, returning the digit `⌊βx⌋`.
pub fn t_beta_step(x: &FieldElement) -> Result<(u32, FieldElement)> {
    if x.signum() < 0 || x.cmp_rat(&crate::poly::rat(1)).is_ge() {
        return Err(Error::OutOfUnitInterval);
    }
    Ok(step_unchecked(x))
}

pub(crate) fn step_unchecked(x: &FieldElement) -> (u32, FieldElement) {
    let y = x * &FieldElement::beta(x.base());
    let d = y.floor();
    let digit = d.to_u32().expect("digit fits in u32");
    (digit, y.add_int(-(digit as i64)))
}

/// First `n` greedy digits of `x` in `[0, 1)`.
pub fn greedy_digits(x: &FieldElement, n: usize) -> Result<Word> {
    let (d, mut y) = t_beta_step(x)?;
    let mut out = vec![d];
    while out.len() < n {
        let (d, next) = step_unchecked(&y);
        out.push(d);
        y = next;
    }
    out.truncate(n);
    Ok(Word(out))
}

/// Value `Σ w_i β^{-i}` of a finite word.
pub fn word_value(base: &PisotNumber, w: &[u32]) -> FieldElement {
    let inv = FieldElement::beta_pow(base, -1);
    let mut acc = FieldElement::zero(base);
    for &d in w.iter().rev() {
        acc = &acc.add_int(d as i64) * &inv;
    }
    acc
}

/// The expansion of 1 and its modified form `d*`.
#[derive(Debug, Clone, Serialize)]
pub struct ExpansionOfOne {
    /// Greedy digits of 1: all of them when finite, else preperiod then one period.
    pub d1: Word,
    pub d1_finite: bool,
    /// Length of the preperiod of `d1` when it is infinite.
    pub d1_preperiod: usize,
    pub dstar_preperiod: Word,
    pub dstar_period: Word,
    #[serde(skip)]
    pub orbit: Vec<FieldElement>,
    pub m_zero: usize,
}

impl ExpansionOfOne {
    /// Digit `i` (0-based) of `d*`.
    pub fn dstar_digit(&self, i: usize) -> u32 {
        let v = self.dstar_preperiod.len();
        if i < v {
            self.dstar_preperiod.0[i]
        } else {
            let p = self.dstar_period.len();
            self.dstar_period.0[(i - v) % p]
        }
    }

    pub fn dstar_prefix(&self, n: usize) -> Word {
        Word((0..n).map(|i| self.dstar_digit(i)).collect())
    }

    /// `pre(per)^ω` text form.
    pub fn dstar_text(&self, max_digit: u32) -> String {
        format!(
            "{}({})^w",
            self.dstar_preperiod.render(max_digit),
            self.dstar_period.render(max_digit)
        )
    }

    pub fn d1_text(&self, max_digit: u32) -> String {
        if self.d1_finite {
            self.d1.render(max_digit)
        } else {
            let (a, b) = self.d1.0.split_at(self.d1_preperiod);
            format!("{}({})^w", Word(a.to_vec()).render(max_digit), Word(b.to_vec()).render(max_digit))
        }
    }
}

fn max_zero_run(w: &[u32]) -> usize {
    let mut best = 0;
    let mut run = 0;
    for &d in w {
        if d == 0 {
            run += 1;
            best = best.max(run);
        } else {
            run = 0;
        }
    }
    best
}

/// Iterates `T_β` from 1 with exact arithmetic until the orbit closes.
/// `budget` bounds the number of orbit points.
pub fn expansion_of_one_with_budget(base: &PisotNumber, budget: usize) -> Result<ExpansionOfOne> {
    let one = FieldElement::one(base);
    let mut orbit = vec![one.clone()];
    let mut digits = Vec::new();
    let mut seen: HashMap<FieldElement, usize> = HashMap::new();
    let mut x = one;
    loop {
        let (d, next) = step_unchecked(&x);
        digits.push(d);
        if next.is_zero() {
            orbit.push(next);
            if orbit.len() > budget {
                return Err(Error::OrbitBudgetExceeded(budget));
            }
            let m = digits.len();
            let mut per = digits.clone();
            per[m - 1] -= 1;
            let per = Word(per);
            let mut window = per.0.clone();
            window.extend_from_slice(&per.0);
            return Ok(ExpansionOfOne {
                d1: Word(digits),
                d1_finite: true,
                d1_preperiod: m,
                dstar_preperiod: Word::empty(),
                dstar_period: per,
                orbit,
                m_zero: max_zero_run(&window),
            });
        }
        if let Some(&j) = seen.get(&next) {
            // x_k = x_j with j >= 1
            let pre = Word(digits[..j].to_vec());
            let per = Word(digits[j..].to_vec());
            let mut window = pre.0.clone();
            window.extend_from_slice(&per.0);
            window.extend_from_slice(&per.0);
            return Ok(ExpansionOfOne {
                d1: Word(digits),
                d1_finite: false,
                d1_preperiod: j,
                m_zero: max_zero_run(&window),
                dstar_preperiod: pre,
                dstar_period: per,
                orbit,
            });
        }
        seen.insert(next.clone(), orbit.len());
        orbit.push(next.clone());
        if orbit.len() > budget {
            return Err(Error::OrbitBudgetExceeded(budget));
        }
        x = next;
    }
}

/// Expansion of 1 with the orbit budget set to the ceiling of the
/// Blichfeldt bound.
pub fn expansion_of_one(base: &PisotNumber) -> Result<ExpansionOfOne> {
    let m = crate::normality::blichfeldt_bound(base);
    let budget = crate::poly::ceil(&m).to_usize().unwrap_or(usize::MAX);
    expansion_of_one_with_budget(base, budget.max(2))
}
