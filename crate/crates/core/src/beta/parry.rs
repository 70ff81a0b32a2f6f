use std::cmp::Ordering;

use super::automaton::{solve, Automaton};
use super::cylinder::Cylinder;
use super::expansion::ExpansionOfOne;
use crate::algebraic::{FieldElement, PisotNumber};
use crate::error::{Error, Result};

/// The Parry measure, stored as a piecewise constant density.
#[derive(Debug, Clone)]
pub struct ParryMeasure {
    /// Sorted distinct breakpoints, starting at 0 and ending at 1.
    pub breakpoints: Vec<FieldElement>,
    /// Density on `[breakpoints[i], breakpoints[i+1])`.
    pub densities: Vec<FieldElement>,
    pub normalizer: FieldElement,
    weights: Vec<FieldElement>,
    follower: Vec<FieldElement>,
    inv_normalizer: FieldElement,
}

impl ParryMeasure {
    pub fn new(
        base: &PisotNumber,
        e: &ExpansionOfOne,
        a: &Automaton,
        follower: &[FieldElement],
    ) -> Result<Self> {
        let v = e.dstar_preperiod.len();
        let p = e.dstar_period.len();
        let tail = FieldElement::one(base) - FieldElement::beta_pow(base, -(p as i64));
        let tail_inv = tail.inverse()?;
        let weights: Vec<FieldElement> = (0..a.states())
            .map(|s| {
                let w = FieldElement::beta_pow(base, -(s as i64));
                if s < v {
                    w
                } else {
                    &w * &tail_inv
                }
            })
            .collect();
        let normalizer = weights
            .iter()
            .zip(follower)
            .fold(FieldElement::zero(base), |acc, (w, y)| &acc + &(w * y));
        let inv_normalizer = normalizer.inverse()?;

        let mut breakpoints: Vec<FieldElement> = follower.to_vec();
        breakpoints.push(FieldElement::zero(base));
        breakpoints.sort_by(|x, y| x.try_cmp(y).unwrap());
        breakpoints.dedup();
        let densities = breakpoints
            .windows(2)
            .map(|w| {
                let upper = &w[1];
                weights
                    .iter()
                    .zip(follower)
                    .filter(|(_, y)| y.try_cmp(upper).unwrap() != Ordering::Less)
                    .fold(FieldElement::zero(base), |acc, (om, _)| &acc + om)
                    * inv_normalizer.clone()
            })
            .collect();
        Ok(ParryMeasure {
            breakpoints,
            densities,
            normalizer,
            weights,
            follower: follower.to_vec(),
            inv_normalizer,
        })
    }

    pub fn weights(&self) -> &[FieldElement] {
        &self.weights
    }

    /// μ([a, b)) for `0 <= a <= b <= 1`, by integrating the density.
    pub fn measure_interval(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let base = a.base();
        let mut acc = FieldElement::zero(base);
        for (w, y) in self.weights.iter().zip(&self.follower) {
            if a.try_cmp(y).unwrap() == Ordering::Less {
                let top = if b.try_cmp(y).unwrap() == Ordering::Less { b } else { y };
                acc = &acc + &(w * &(top - a));
            }
        }
        &acc * &self.inv_normalizer
    }

    pub fn of_cylinder(&self, c: &Cylinder) -> FieldElement {
        self.measure_interval(&c.left, &c.right())
    }

    /// μ(c(w)) from the Markov chain on automaton states: the cylinder
    /// measure is `β^{-n} Σ_s ω_s y_{δ(s,w)} / F`.
    pub fn markov(&self, a: &Automaton, w: &[u32]) -> FieldElement {
        let base = self.normalizer.base();
        let mut acc = FieldElement::zero(base);
        for (s, om) in self.weights.iter().enumerate() {
            if let Some(t) = a.run_from(s, w) {
                acc = &acc + &(om * &self.follower[t]);
            }
        }
        let scale = FieldElement::beta_pow(base, -(w.len() as i64));
        &(&acc * &scale) * &self.inv_normalizer
    }

    /// Markov measure given only the end state from each start state.
    pub fn from_signature(&self, n: usize, ends: &[Option<usize>]) -> FieldElement {
        let base = self.normalizer.base();
        let mut acc = FieldElement::zero(base);
        for (om, t) in self.weights.iter().zip(ends) {
            if let Some(t) = t {
                acc = &acc + &(om * &self.follower[*t]);
            }
        }
        let scale = FieldElement::beta_pow(base, -(n as i64));
        &(&acc * &scale) * &self.inv_normalizer
    }

    /// Left Perron eigenvector of the transfer matrix, normalised so that its
    /// first entry equals the first weight.
    pub fn left_eigenvector(&self, a: &Automaton) -> Result<Vec<FieldElement>> {
        let base = self.normalizer.base();
        let p = a.states();
        let m = a.transfer_matrix();
        let beta = FieldElement::beta(base);
        let zero = FieldElement::zero(base);
        let column = |t: usize| -> Vec<FieldElement> {
            (0..p)
                .map(|s| {
                    let e = FieldElement::from_int(base, m[s][t] as i64);
                    if s == t {
                        &e - &beta
                    } else {
                        e
                    }
                })
                .collect()
        };
        let mut rows = vec![{
            let mut r = vec![zero.clone(); p];
            r[0] = FieldElement::one(base);
            r
        }];
        let mut rhs = vec![self.weights[0].clone()];
        for t in 1..p {
            rows.push(column(t));
            rhs.push(zero.clone());
        }
        let l = solve(rows, rhs)?;
        let check = column(0)
            .iter()
            .zip(&l)
            .fold(zero, |acc, (c, x)| &acc + &(c * x));
        if !check.is_zero() {
            return Err(Error::Invariant("left eigenvector check failed".into()));
        }
        Ok(l)
    }

    /// Total mass of the density, which must be exactly 1.
    pub fn total_mass(&self) -> FieldElement {
        let base = self.normalizer.base();
        self.breakpoints
            .windows(2)
            .zip(&self.densities)
            .fold(FieldElement::zero(base), |acc, (w, h)| &acc + &(h * &(&w[1] - &w[0])))
    }

    /// Whether `1 - 1/β <= h <= β/(β-1)` on every piece.
    pub fn density_bounds_hold(&self) -> bool {
        let base = self.normalizer.base();
        let beta = FieldElement::beta(base);
        let lo = (-FieldElement::beta_pow(base, -1)).add_int(1);
        let hi = &beta * &beta.add_int(-1).inverse().expect("β > 1");
        self.densities.iter().all(|h| {
            lo.try_cmp(h).unwrap() != Ordering::Greater
                && h.try_cmp(&hi).unwrap() != Ordering::Greater
        })
    }
}

#[cfg(test)]
mod tests {
    use crate::algebraic::{FieldElement, PisotNumber};
    use crate::beta::{BetaSystem, Word};
    use crate::poly::{rat, ratio};

    #[test]
    fn golden_digit_measures() {
        let g = PisotNumber::golden();
        let s = BetaSystem::new(&g).unwrap();
        let one = s.parry().of_cylinder(&s.cylinder(&Word::from("1")).unwrap());
        let zero = s.parry().of_cylinder(&s.cylinder(&Word::from("0")).unwrap());
        // (5 - sqrt 5)/10 with sqrt 5 = 2φ - 1
        let sqrt5 = FieldElement::beta(&g).scale(&rat(2)).add_int(-1);
        let expected = (-sqrt5).add_int(5).scale(&ratio(1, 10));
        assert_eq!(one, expected);
        assert!((&one + &zero).as_rat() == Some(rat(1)));
        assert_eq!(s.parry().markov(s.automaton(), &[1]), one);
        assert!((one.to_f64() - 0.276393202250021).abs() < 1e-12);
    }

    #[test]
    fn density_properties() {
        for b in [PisotNumber::golden(), PisotNumber::plastic(), PisotNumber::integer(3).unwrap()] {
            let s = BetaSystem::new(&b).unwrap();
            assert_eq!(s.parry().total_mass(), s.one());
            assert!(s.parry().density_bounds_hold());
            let l = s.parry().left_eigenvector(s.automaton()).unwrap();
            assert_eq!(l, s.parry().weights());
        }
    }

    #[test]
    fn integer_base_is_lebesgue() {
        let s = BetaSystem::new(&PisotNumber::integer(3).unwrap()).unwrap();
        let c = s.cylinder(&Word::from("201")).unwrap();
        assert_eq!(s.parry().of_cylinder(&c).as_rat(), Some(ratio(1, 27)));
    }
}
