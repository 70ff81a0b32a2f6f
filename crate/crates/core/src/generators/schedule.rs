//! Repetition of the raw bases so that the growth conditions on the active
//! bases hold at every step.

use std::cmp::Ordering;

use crate::algebraic::{compare_cross_field, FieldElement, PisotNumber};
use crate::beta::BetaSystem;
use crate::poly::rat;
use crate::real::{ln_rat, RealInterval};

use super::config::{t_of, TLog};

/// Enclosure of `ln β`, exact-width for integer bases up to rounding.
pub(crate) fn ln_beta(base: &PisotNumber, bits: u32) -> RealInterval {
    if base.is_integer() {
        ln_rat(&rat(base.floor() as i64), bits)
    } else {
        base.interval(bits + 8).ln(bits)
    }
}

/// Enclosure of β, a point for integer bases.
pub(crate) fn beta_interval(base: &PisotNumber, bits: u32) -> RealInterval {
    if base.is_integer() {
        RealInterval::int(base.floor() as i64)
    } else {
        base.interval(bits)
    }
}

fn ln_int(i: u64, bits: u32) -> RealInterval {
    if i == 1 {
        RealInterval::int(0)
    } else {
        ln_rat(&rat(i as i64), bits)
    }
}

/// `a <= b` for quantities given at increasing precision; overlap at the
/// finest precision is read as equality.
fn leq(f: impl Fn(u32) -> (RealInterval, RealInterval)) -> bool {
    let mut bits = 64;
    loop {
        let (a, b) = f(bits);
        if a.hi() <= b.lo() {
            return true;
        }
        if a.lo() > b.hi() {
            return false;
        }
        if bits >= 1024 {
            return true;
        }
        bits *= 2;
    }
}

/// A raw base with the data the conditions need.
#[derive(Debug, Clone)]
pub struct ScheduleBase {
    pub base: PisotNumber,
    pub m: usize,
}

impl ScheduleBase {
    pub fn new(sys: &BetaSystem) -> Self {
        ScheduleBase { base: sys.base().clone(), m: sys.m_zero() }
    }
}

/// Whether the listed bases satisfy, at index `i`,
/// `max β_j <= β_1 i`, `max M_j <= (M_1 + 1)(1 + log i)` and
/// `Σ (M_j + 4) log β_j <= (M_1 + 4) log β_1 (1 + log i)`.
pub fn conditions_hold(raw: &[ScheduleBase], list: &[usize], i: u64) -> bool {
    let first = &raw[list[0]];
    let bound = FieldElement::from_int(&first.base, i as i64) * FieldElement::beta(&first.base);
    let size_ok = list.iter().all(|&j| {
        let b = FieldElement::beta(&raw[j].base);
        compare_cross_field(&b, &bound) != Ordering::Greater
    });
    if !size_ok {
        return false;
    }
    let m_max = list.iter().map(|&j| raw[j].m).max().unwrap_or(0);
    let m_ok = leq(|bits| {
        let rhs = ln_int(i, bits).add(&RealInterval::int(1)).scale(&rat(first.m as i64 + 1));
        (RealInterval::int(m_max as i64), rhs)
    });
    if !m_ok {
        return false;
    }
    leq(|bits| {
        let lhs = list.iter().fold(RealInterval::int(0), |acc, &j| {
            acc.add(&ln_beta(&raw[j].base, bits).scale(&rat(raw[j].m as i64 + 4)))
        });
        let rhs = ln_beta(&first.base, bits)
            .scale(&rat(first.m as i64 + 4))
            .mul(&ln_int(i, bits).add(&RealInterval::int(1)));
        (lhs, rhs)
    })
}

/// Growing list of raw-base indices; once placed, a position never changes.
#[derive(Debug, Clone, Default)]
pub struct Schedule {
    pub list: Vec<usize>,
    /// Next raw base waiting for admission.
    pub next_raw: usize,
    /// Step at which each position was filled.
    pub placed_at: Vec<u64>,
}

impl Schedule {
    pub fn new() -> Self {
        Schedule { list: vec![0], next_raw: 1, placed_at: vec![1] }
    }

    /// Grows the list to `t` positions at step `i`. A new position takes the
    /// next raw base if the conditions then hold at `i`, and repeats the
    /// first base otherwise.
    pub fn extend_to(&mut self, raw: &[ScheduleBase], t: usize, i: u64) {
        while self.list.len() < t {
            let mut pick = 0;
            if self.next_raw < raw.len() {
                let mut trial = self.list.clone();
                trial.push(self.next_raw);
                if conditions_hold(raw, &trial, i) {
                    pick = self.next_raw;
                    self.next_raw += 1;
                }
            }
            self.list.push(pick);
            self.placed_at.push(i);
        }
    }
}

/// Effective base list at step `i` for the natural schedule `t_i = ⌈log i⌉`.
pub fn pisot_schedule(raw: &[ScheduleBase], i: u64, log: TLog) -> Vec<usize> {
    let mut s = Schedule::new();
    for step in 2..=i {
        s.extend_to(raw, t_of(step, log), step);
    }
    s.list
}

/// `β^{-(M+4)}` as an interval.
pub(crate) fn shrink_factor(base: &PisotNumber, m: usize, bits: u32) -> RealInterval {
    beta_interval(base, bits + 16).powi(m as u32 + 4).recip().round_out(bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sb(b: PisotNumber) -> ScheduleBase {
        ScheduleBase::new(&BetaSystem::new(&b).unwrap())
    }

    #[test]
    fn single_base() {
        let raw = vec![sb(PisotNumber::integer(2).unwrap())];
        assert_eq!(pisot_schedule(&raw, 1, TLog::Natural), vec![0]);
        assert!(conditions_hold(&raw, &[0], 1));
        assert_eq!(pisot_schedule(&raw, 30, TLog::Natural), vec![0, 0, 0, 0]);
    }

    #[test]
    fn golden_then_plastic() {
        let raw = vec![sb(PisotNumber::golden()), sb(PisotNumber::plastic())];
        assert_eq!(pisot_schedule(&raw, 1, TLog::Natural), vec![0]);
        assert_eq!(pisot_schedule(&raw, 2, TLog::Natural), vec![0]);
        assert_eq!(pisot_schedule(&raw, 3, TLog::Natural), vec![0, 1]);
        let s = pisot_schedule(&raw, 60, TLog::Natural);
        assert_eq!(&s[..2], &[0, 1]);
        for i in 3..=60u64 {
            let t = t_of(i, TLog::Natural);
            assert!(conditions_hold(&raw, &s[..t], i), "i = {i}");
        }
    }

    #[test]
    fn larger_integer_bases_wait() {
        let raw = vec![
            sb(PisotNumber::integer(2).unwrap()),
            sb(PisotNumber::integer(3).unwrap()),
            sb(PisotNumber::integer(5).unwrap()),
        ];
        let s = pisot_schedule(&raw, 2000, TLog::Natural);
        assert!(s.iter().all(|&j| j == 0));
        assert!(!conditions_hold(&raw, &[0, 1], 3));
    }
}
