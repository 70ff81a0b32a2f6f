use std::cmp::Ordering;

use super::word::Word;
use super::BetaSystem;
use crate::algebraic::{FieldElement, PisotNumber};
use crate::error::{Error, Result};

/// Set of points of `[0, 1)` whose expansion starts with an admissible word.
#[derive(Clone, Debug)]
pub struct Cylinder {
    pub word: Word,
    /// Automaton state reached after reading the word.
    pub state: usize,
    pub left: FieldElement,
    pub lebesgue: FieldElement,
    /// β^{-n}
    pub scale: FieldElement,
}

impl Cylinder {
    pub fn order(&self) -> usize {
        self.word.len()
    }

    pub fn right(&self) -> FieldElement {
        &self.left + &self.lebesgue
    }

    pub fn base(&self) -> &PisotNumber {
        self.left.base()
    }

    /// Whether `other` lies inside this cylinder (same base).
    pub fn contains(&self, other: &Cylinder) -> bool {
        other.word.0.starts_with(&self.word.0)
    }
}

impl BetaSystem {
    pub fn root_cylinder(&self) -> Cylinder {
        Cylinder {
            word: Word::empty(),
            state: 0,
            left: self.zero(),
            lebesgue: self.one(),
            scale: self.one(),
        }
    }

    pub fn child(&self, c: &Cylinder, a: u32) -> Option<Cylinder> {
        let state = self.automaton().step(c.state, a)?;
        let scale = &c.scale * self.beta_inv();
        let left = &c.left + &scale.scale(&crate::poly::rat(a as i64));
        let lebesgue = &scale * &self.follower()[state];
        let mut word = c.word.clone();
        word.push(a);
        Some(Cylinder { word, state, left, lebesgue, scale })
    }

    pub fn children(&self, c: &Cylinder) -> Vec<Cylinder> {
        (0..=self.max_digit()).filter_map(|a| self.child(c, a)).collect()
    }

    pub fn cylinder(&self, w: &Word) -> Result<Cylinder> {
        w.check_digits(self.max_digit())?;
        let mut c = self.root_cylinder();
        for &a in w.digits() {
            c = self
                .child(&c, a)
                .ok_or_else(|| Error::Inadmissible(w.render(self.max_digit())))?;
        }
        Ok(c)
    }

    /// Checks `β^{-(m+1)} β^{-n} <= λ(c) <= β^{-n}` exactly.
    pub fn lebesgue_bounds_hold(&self, c: &Cylinder, m: usize) -> bool {
        let lower = &c.scale * &self.pow(-(m as i64 + 1));
        c.lebesgue.try_cmp(&c.scale).ok() != Some(Ordering::Greater)
            && lower.try_cmp(&c.lebesgue).ok() != Some(Ordering::Greater)
    }
}
