use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebraic::FieldElement;
use crate::beta::{BetaSystem, Word};
use crate::error::{Error, Result};
use crate::poly::{rat, Rat};

/// `max_d |N_d(u)/‖u‖ - 1/b|`.
pub fn simple_discrepancy(u: &[u32], b: u32) -> Result<Rat> {
    if u.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut counts = vec![0u64; b as usize];
    for &d in u {
        if d >= b {
            return Err(Error::DigitOutOfRange { digit: d, bound: b - 1 });
        }
        counts[d as usize] += 1;
    }
    Ok(discrepancy_from_counts(&counts, u.len() as u64))
}

pub fn discrepancy_from_counts(counts: &[u64], n: u64) -> Rat {
    let b = counts.len() as i64;
    counts
        .iter()
        .map(|&c| (Rat::new(BigInt::from(c), BigInt::from(n)) - Rat::new(1.into(), b.into())).abs())
        .max()
        .unwrap_or_else(Rat::zero)
}

/// Outcome of an (ε, k)-normality test.
#[derive(Debug, Clone, Serialize)]
pub struct NormalityReport {
    pub word_len: usize,
    pub epsilon: Rat,
    pub k: usize,
    pub verdict: bool,
    pub worst_block: Word,
    /// Approximate `N_d / (μ(c(d)) n)` for the worst block.
    pub worst_ratio: Rat,
    pub worst_count: u64,
}

#[derive(Debug, Clone)]
struct BlockBound {
    block: Word,
    mu: FieldElement,
    lo: i64,
    hi: i64,
}

/// Precomputed integer thresholds for testing (ε, k)-normality of words of
/// a fixed length `n`: a count `N_d` passes iff `lo_d <= N_d <= hi_d`.
#[derive(Debug, Clone)]
pub struct NormalityChecker {
    pub eps: Rat,
    pub k: usize,
    pub n: usize,
    radix: usize,
    bounds: Vec<BlockBound>,
    /// Index of each admissible block in the dense table, `usize::MAX` if absent.
    slot: Vec<usize>,
}

fn block_index(block: &[u32], radix: usize) -> usize {
    block.iter().fold(0usize, |acc, &d| acc * radix + d as usize)
}

impl NormalityChecker {
    pub fn new(sys: &BetaSystem, eps: &Rat, k: usize, n: usize) -> Result<Self> {
        let radix = sys.max_digit() as usize + 1;
        let table = radix
            .checked_pow(k as u32)
            .filter(|&t| t <= 1 << 24)
            .ok_or_else(|| Error::EnumerationBudgetExceeded {
                size: format!("{radix}^{k}"),
                limit: 1 << 24,
            })?;
        let words = sys.automaton().enumerate(k, 1 << 24)?;
        let mut slot = vec![usize::MAX; table];
        let mut bounds = Vec::with_capacity(words.len());
        let lower = (rat(1) - eps) * rat(n as i64);
        let upper = (rat(1) + eps) * rat(n as i64);
        for (w, _) in words {
            let mu = sys.parry().markov(sys.automaton(), w.digits());
            let lo = (mu.scale(&lower).floor() + BigInt::from(1)).to_i64().unwrap_or(i64::MAX);
            let hi = (-(-mu.scale(&upper)).floor() - BigInt::from(1)).to_i64().unwrap_or(i64::MAX);
            slot[block_index(w.digits(), radix)] = bounds.len();
            bounds.push(BlockBound { block: w, mu, lo, hi });
        }
        Ok(NormalityChecker { eps: eps.clone(), k, n, radix, bounds, slot })
    }

    pub fn blocks(&self) -> usize {
        self.bounds.len()
    }

    pub fn block(&self, i: usize) -> &Word {
        &self.bounds[i].block
    }

    pub fn block_measure(&self, i: usize) -> &FieldElement {
        &self.bounds[i].mu
    }

    /// `(lo_d, hi_d)` for block `i`.
    pub fn thresholds(&self, i: usize) -> (i64, i64) {
        (self.bounds[i].lo, self.bounds[i].hi)
    }

    /// Slot of a block, if admissible.
    pub fn slot_of(&self, block: &[u32]) -> Option<usize> {
        let s = self.slot[block_index(block, self.radix)];
        (s != usize::MAX).then_some(s)
    }

    pub fn radix(&self) -> usize {
        self.radix
    }

    /// Dense-table slot map, indexed by the block value in base `radix`.
    pub fn slot_table(&self) -> &[usize] {
        &self.slot
    }

    /// Overlapping counts of every admissible block in `w`.
    pub fn counts(&self, w: &[u32]) -> Vec<u64> {
        let mut c = vec![0u64; self.bounds.len()];
        if w.len() >= self.k {
            for win in w.windows(self.k) {
                let s = self.slot[block_index(win, self.radix)];
                if s != usize::MAX {
                    c[s] += 1;
                }
            }
        }
        c
    }

    pub fn counts_pass(&self, counts: &[u64]) -> bool {
        counts
            .iter()
            .zip(&self.bounds)
            .all(|(&c, b)| (c as i64) >= b.lo && (c as i64) <= b.hi)
    }

    /// Whether the word of length `n` is (ε, k)-normal.
    pub fn is_normal(&self, w: &[u32]) -> bool {
        debug_assert_eq!(w.len(), self.n);
        self.counts_pass(&self.counts(w))
    }

    pub fn report(&self, w: &[u32]) -> NormalityReport {
        let counts = self.counts(w);
        let verdict = self.counts_pass(&counts);
        // worst block: a violator if any, else the one with most extreme ratio
        let mut worst = 0usize;
        let mut worst_score = f64::NEG_INFINITY;
        for (i, b) in self.bounds.iter().enumerate() {
            let c = counts[i] as i64;
            let violated = c < b.lo || c > b.hi;
            let expected = b.mu.to_f64() * self.n as f64;
            let ratio = if expected > 0.0 { c as f64 / expected } else { f64::INFINITY };
            let score = (ratio - 1.0).abs() + if violated { 1e9 } else { 0.0 };
            if score > worst_score {
                worst_score = score;
                worst = i;
            }
        }
        let b = &self.bounds[worst];
        let expected = b.mu.approx_rat(64) * rat(self.n as i64);
        let worst_ratio = if expected.is_zero() {
            Rat::zero()
        } else {
            rat(counts[worst] as i64) / expected
        };
        NormalityReport {
            word_len: w.len(),
            epsilon: self.eps.clone(),
            k: self.k,
            verdict,
            worst_block: b.block.clone(),
            worst_ratio,
            worst_count: counts[worst],
        }
    }
}

/// Tests `μ(c(d))(1-ε)n < N_d(ω) < μ(c(d))(1+ε)n` for every `d` in `L_k`.
pub fn is_eps_k_normal(sys: &BetaSystem, w: &[u32], eps: &Rat, k: usize) -> Result<NormalityReport> {
    Ok(NormalityChecker::new(sys, eps, k, w.len())?.report(w))
}

/// `max_{d ∈ L_k} |N_d/n - μ(c(d))|` as a float, with the maximising block.
pub fn block_frequency_deviation(sys: &BetaSystem, w: &[u32], k: usize) -> Result<(Word, f64)> {
    let checker = NormalityChecker::new(sys, &rat(1), k, w.len())?;
    let counts = checker.counts(w);
    let n = w.len() as f64;
    let mut best = (Word::empty(), 0.0f64);
    for (i, c) in counts.iter().enumerate() {
        let dev = (*c as f64 / n - checker.block_measure(i).to_f64()).abs();
        if dev >= best.1 {
            best = (checker.block(i).clone(), dev);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::PisotNumber;
    use crate::poly::ratio;

    #[test]
    fn simple_discrepancy_examples() {
        assert_eq!(simple_discrepancy(&[0, 1], 2).unwrap(), rat(0));
        assert_eq!(simple_discrepancy(&[0, 0, 0], 2).unwrap(), ratio(1, 2));
        let u: Vec<u32> = (0..10).collect();
        assert_eq!(simple_discrepancy(&u, 10).unwrap(), rat(0));
        assert_eq!(simple_discrepancy(&[], 2), Err(Error::EmptyWord));
    }

    #[test]
    fn normality_examples() {
        let two = BetaSystem::new(&PisotNumber::integer(2).unwrap()).unwrap();
        assert!(is_eps_k_normal(&two, &[0, 1], &ratio(1, 2), 1).unwrap().verdict);
        let r = is_eps_k_normal(&two, &[0, 0, 0, 0], &ratio(1, 2), 1).unwrap();
        assert!(!r.verdict);
        assert!(r.worst_count == 0 || r.worst_count == 4);
    }
}
