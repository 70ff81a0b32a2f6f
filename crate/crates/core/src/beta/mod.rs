//! β-expansions: the orbit of 1, admissibility, cylinders and the Parry
//! measure.

mod automaton;
mod cylinder;
mod expansion;
mod inscribe;
mod parry;
mod word;

use std::sync::Arc;

use num_bigint::BigUint;

pub use automaton::{follower_values, solve, Automaton};
pub use cylinder::Cylinder;
pub use expansion::{
    expansion_of_one, expansion_of_one_with_budget, greedy_digits, t_beta_step, word_value,
    ExpansionOfOne,
};
pub use inscribe::{inscribed_beta_adic, inscribed_from, ExactInterval, InscribedInterval};
pub use parry::ParryMeasure;
pub use word::{count_occurrences, Word};

use crate::algebraic::{FieldElement, PisotNumber};
use crate::error::Result;

struct Inner {
    base: PisotNumber,
    expansion: ExpansionOfOne,
    automaton: Automaton,
    follower: Vec<FieldElement>,
    parry: ParryMeasure,
    beta_inv: FieldElement,
}

/// Everything derived from a certified base that the digit machinery needs.
/// Cheap to clone and safe to share between threads.
#[derive(Clone)]
pub struct BetaSystem(Arc<Inner>);

impl std::fmt::Debug for BetaSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BetaSystem({:?})", self.0.base)
    }
}

/// Largest digit `⌈β⌉ - 1`.
fn digit_bound(base: &PisotNumber) -> u32 {
    if base.is_integer() {
        base.floor() - 1
    } else {
        base.floor()
    }
}

impl BetaSystem {
    pub fn new(base: &PisotNumber) -> Result<Self> {
        let expansion = expansion_of_one(base)?;
        Self::from_expansion(base, expansion)
    }

    pub fn from_expansion(base: &PisotNumber, expansion: ExpansionOfOne) -> Result<Self> {
        let automaton = Automaton::from_expansion(&expansion, digit_bound(base));
        let follower = follower_values(base, &automaton)?;
        let parry = ParryMeasure::new(base, &expansion, &automaton, &follower)?;
        Ok(BetaSystem(Arc::new(Inner {
            base: base.clone(),
            beta_inv: FieldElement::beta_pow(base, -1),
            expansion,
            automaton,
            follower,
            parry,
        })))
    }

    pub fn base(&self) -> &PisotNumber {
        &self.0.base
    }

    pub fn expansion(&self) -> &ExpansionOfOne {
        &self.0.expansion
    }

    pub fn automaton(&self) -> &Automaton {
        &self.0.automaton
    }

    /// `y_s`: length of the follower interval `[0, y_s)` of state `s`.
    pub fn follower(&self) -> &[FieldElement] {
        &self.0.follower
    }

    pub fn parry(&self) -> &ParryMeasure {
        &self.0.parry
    }

    pub fn beta_inv(&self) -> &FieldElement {
        &self.0.beta_inv
    }

    pub fn max_digit(&self) -> u32 {
        digit_bound(&self.0.base)
    }

    /// Maximal run of zeros in `d*`.
    pub fn m_zero(&self) -> usize {
        self.0.expansion.m_zero
    }

    pub fn is_admissible(&self, w: &[u32]) -> bool {
        w.iter().all(|&d| d <= self.max_digit()) && self.0.automaton.accepts(w)
    }

    pub fn count_words(&self, n: usize) -> BigUint {
        self.0.automaton.count_words(n)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::zero(&self.0.base)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::one(&self.0.base)
    }

    /// β^k.
    pub fn pow(&self, k: i64) -> FieldElement {
        FieldElement::beta_pow(&self.0.base, k)
    }
}
