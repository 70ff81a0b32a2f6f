use std::cmp::Ordering;

use super::cylinder::Cylinder;
use super::BetaSystem;
use crate::algebraic::{compare_cross_field, FieldElement};
use crate::error::{Error, Result};
use crate::poly::rat;

/// Half-open interval `[lo, hi)` with exact endpoints in a common field.
#[derive(Debug, Clone)]
pub struct ExactInterval {
    pub lo: FieldElement,
    pub hi: FieldElement,
}

impl ExactInterval {
    pub fn new(lo: FieldElement, hi: FieldElement) -> Result<Self> {
        if lo.base() != hi.base() {
            return Err(Error::MixedBases);
        }
        if lo.try_cmp(&hi)? != Ordering::Less {
            return Err(Error::EmptyInterval);
        }
        if lo.signum() < 0 || hi.cmp_rat(&rat(1)) == Ordering::Greater {
            return Err(Error::IntervalOutOfRange);
        }
        Ok(ExactInterval { lo, hi })
    }

    pub fn from_cylinder(c: &Cylinder) -> Self {
        ExactInterval { lo: c.left.clone(), hi: c.right() }
    }

    pub fn length(&self) -> FieldElement {
        &self.hi - &self.lo
    }

    fn meets(&self, c: &Cylinder) -> bool {
        compare_cross_field(&c.left, &self.hi) == Ordering::Less
            && compare_cross_field(&c.right(), &self.lo) == Ordering::Greater
    }

    fn holds(&self, c: &Cylinder) -> bool {
        compare_cross_field(&c.left, &self.lo) != Ordering::Less
            && compare_cross_field(&c.right(), &self.hi) != Ordering::Greater
    }

    /// Whether `c` lies inside this interval.
    pub fn contains_cylinder(&self, c: &Cylinder) -> bool {
        self.holds(c)
    }
}

/// Result of the inscribed-cylinder search.
#[derive(Debug, Clone)]
pub struct InscribedInterval {
    pub cylinder: Cylinder,
    /// Number of cylinders examined.
    pub examined: usize,
}

/// Leftmost cylinder of least order inside `interval`, searched below the
/// whole unit interval. `m` is the zero-run constant used for the ratio
/// bound `λ(c) >= λ(I) / (2 β^{m+4})`, or `λ(I) / (2b)` for integer bases.
pub fn inscribed_beta_adic(sys: &BetaSystem, interval: &ExactInterval, m: usize) -> Result<InscribedInterval> {
    inscribed_from(sys, &sys.root_cylinder(), interval, m)
}

/// As [`inscribed_beta_adic`], searching only below `start`.
pub fn inscribed_from(
    sys: &BetaSystem,
    start: &Cylinder,
    interval: &ExactInterval,
    m: usize,
) -> Result<InscribedInterval> {
    let mut frontier = vec![start.clone()];
    let mut examined = 0usize;
    loop {
        examined += frontier.len();
        if let Some(c) = frontier.iter().find(|c| interval.holds(c)) {
            let c = c.clone();
            check_ratio(sys, &c, interval, m)?;
            return Ok(InscribedInterval { cylinder: c, examined });
        }
        frontier = frontier
            .iter()
            .flat_map(|c| sys.children(c))
            .filter(|c| interval.meets(c))
            .collect();
        if frontier.is_empty() {
            return Err(Error::EmptyInterval);
        }
    }
}

fn check_ratio(sys: &BetaSystem, c: &Cylinder, interval: &ExactInterval, m: usize) -> Result<()> {
    let factor = if sys.base().is_integer() {
        FieldElement::from_int(sys.base(), 2 * sys.base().floor() as i64)
    } else {
        sys.pow(m as i64 + 4).scale(&rat(2))
    };
    let scaled = &c.lebesgue * &factor;
    if compare_cross_field(&scaled, &interval.length()) == Ordering::Less {
        return Err(Error::Invariant(format!(
            "inscribed cylinder {} violates the ratio bound",
            c.word
        )));
    }
    Ok(())
}
