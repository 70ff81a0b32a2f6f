use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use super::expansion::ExpansionOfOne;
use super::word::Word;
use crate::algebraic::{FieldElement, PisotNumber};
use crate::error::{Error, Result};

/// Deterministic automaton accepting the admissible words.
///
/// State `s` means the current suffix agrees with the first `s` digits of
/// `d*`. From `s`, digits below `c_s` reset to 0, the digit `c_s` advances,
/// larger digits are rejected.
#[derive(Debug, Clone, Serialize)]
pub struct Automaton {
    pub bound: Vec<u32>,
    pub next: Vec<usize>,
    pub max_digit: u32,
}

impl Automaton {
    pub fn from_expansion(e: &ExpansionOfOne, max_digit: u32) -> Self {
        let v = e.dstar_preperiod.len();
        let p = v + e.dstar_period.len();
        let bound = (0..p).map(|s| e.dstar_digit(s)).collect();
        let next = (0..p).map(|s| if s + 1 == p { v } else { s + 1 }).collect();
        Automaton { bound, next, max_digit }
    }

    pub fn states(&self) -> usize {
        self.bound.len()
    }

    pub fn step(&self, s: usize, a: u32) -> Option<usize> {
        let c = self.bound[s];
        if a < c {
            Some(0)
        } else if a == c {
            Some(self.next[s])
        } else {
            None
        }
    }

    pub fn run_from(&self, s: usize, w: &[u32]) -> Option<usize> {
        w.iter().try_fold(s, |s, &a| self.step(s, a))
    }

    pub fn run(&self, w: &[u32]) -> Option<usize> {
        self.run_from(0, w)
    }

    pub fn accepts(&self, w: &[u32]) -> bool {
        self.run(w).is_some()
    }

    /// `A[s][t]` = number of digits leading from `s` to `t`.
    pub fn transfer_matrix(&self) -> Vec<Vec<u64>> {
        let p = self.states();
        let mut m = vec![vec![0u64; p]; p];
        for s in 0..p {
            m[s][0] += self.bound[s] as u64;
            m[s][self.next[s]] += 1;
        }
        m
    }

    /// Number of accepted words of length `n` starting from each state.
    pub fn counts_from(&self, n: usize) -> Vec<BigUint> {
        let p = self.states();
        let mut c = vec![BigUint::one(); p];
        for _ in 0..n {
            c = (0..p)
                .map(|s| &c[0] * self.bound[s] + &c[self.next[s]])
                .collect();
        }
        c
    }

    pub fn count_words(&self, n: usize) -> BigUint {
        self.counts_from(n).swap_remove(0)
    }

    /// All accepted words of length `n` in lexicographic order, paired with
    /// their end state.
    pub fn enumerate(&self, n: usize, limit: u64) -> Result<Vec<(Word, usize)>> {
        let total = self.count_words(n);
        if total > BigUint::from(limit) {
            return Err(Error::EnumerationBudgetExceeded { size: total.to_string(), limit });
        }
        let mut out = Vec::new();
        let mut stack = Vec::with_capacity(n);
        self.dfs(0, n, &mut stack, &mut |w, s| out.push((Word(w.to_vec()), s)));
        Ok(out)
    }

    /// Visits accepted words of length `n` from `state` lexicographically.
    pub fn dfs(&self, state: usize, n: usize, stack: &mut Vec<u32>, f: &mut impl FnMut(&[u32], usize)) {
        if stack.len() == n {
            f(stack, state);
            return;
        }
        for a in 0..=self.bound[state].min(self.max_digit) {
            if let Some(t) = self.step(state, a) {
                stack.push(a);
                self.dfs(t, n, stack, f);
                stack.pop();
            }
        }
    }

    /// Number of accepted words of length `n` lexicographically below `w`,
    /// which has length `n` and is accepted.
    pub fn rank(&self, w: &[u32]) -> BigUint {
        self.rank_from(0, w)
    }

    /// As [`Automaton::rank`], for words read from `state`.
    pub fn rank_from(&self, state: usize, w: &[u32]) -> BigUint {
        let n = w.len();
        let p = self.states();
        let mut table = vec![vec![BigUint::one(); p]];
        for _ in 0..n {
            let c = table.last().unwrap();
            let next = (0..p).map(|s| &c[0] * self.bound[s] + &c[self.next[s]]).collect();
            table.push(next);
        }
        let mut rank = BigUint::zero();
        let mut s = state;
        for (i, &a) in w.iter().enumerate() {
            let rest = n - i - 1;
            for b in 0..a {
                if let Some(t) = self.step(s, b) {
                    rank += &table[rest][t];
                }
            }
            s = self.step(s, a).expect("rank of an accepted word");
        }
        rank
    }
}

/// Solves `β y_s = c_s y_0 + y_{next(s)}` with `y_0 = 1` over Q(β) by Gaussian
/// elimination and checks that the redundant equation holds.
pub fn follower_values(base: &PisotNumber, a: &Automaton) -> Result<Vec<FieldElement>> {
    let p = a.states();
    let beta = FieldElement::beta(base);
    let zero = FieldElement::zero(base);
    // unknowns y_0..y_{p-1}; rows: y_0 = 1, then equations for s = 1..p-1, and s = 0 last
    let mut rows: Vec<Vec<FieldElement>> = Vec::new();
    let mut rhs: Vec<FieldElement> = Vec::new();
    let mut r0 = vec![zero.clone(); p];
    r0[0] = FieldElement::one(base);
    rows.push(r0);
    rhs.push(FieldElement::one(base));
    let equation = |s: usize| {
        let mut r = vec![zero.clone(); p];
        r[s] = &r[s] + &beta;
        r[0] = &r[0] - &FieldElement::from_int(base, a.bound[s] as i64);
        r[a.next[s]] = &r[a.next[s]] - &FieldElement::one(base);
        r
    };
    for s in 1..p {
        rows.push(equation(s));
        rhs.push(zero.clone());
    }
    let y = solve(rows, rhs)?;
    // consistency of the equation at s = 0
    let check = equation(0)
        .iter()
        .zip(&y)
        .fold(zero.clone(), |acc, (c, v)| &acc + &(c * v));
    if !check.is_zero() {
        return Err(Error::Invariant("follower system is inconsistent".into()));
    }
    Ok(y)
}

/// Gaussian elimination over Q(β) for a square nonsingular system.
pub fn solve(mut rows: Vec<Vec<FieldElement>>, mut rhs: Vec<FieldElement>) -> Result<Vec<FieldElement>> {
    let n = rows.len();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !rows[r][col].is_zero())
            .ok_or_else(|| Error::Invariant("singular linear system".into()))?;
        rows.swap(col, piv);
        rhs.swap(col, piv);
        let inv = rows[col][col].inverse()?;
        for j in col..n {
            rows[col][j] = &rows[col][j] * &inv;
        }
        rhs[col] = &rhs[col] * &inv;
        for r in 0..n {
            if r != col && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for j in col..n {
                    let t = &f * &rows[col][j];
                    rows[r][j] = &rows[r][j] - &t;
                }
                let t = &f * &rhs[col];
                rhs[r] = &rhs[r] - &t;
            }
        }
    }
    Ok(rhs)
}
