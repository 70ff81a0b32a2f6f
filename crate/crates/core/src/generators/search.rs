//! Lexicographically first extension of a block whose overlapping k-block
//! counts land in prescribed ranges, subject to an extra leaf predicate.
//!
//! Subtrees are cut when a support function of the reachable count vectors
//! rules out the target box, so the first accepted leaf equals the one a
//! plain left-to-right scan would find.

use crate::beta::Automaton;
use crate::error::{Error, Result};
use crate::normality::NormalityChecker;

/// Per-block count ranges `lo_d <= N_d <= hi_d` over the windows of a block.
#[derive(Debug, Clone)]
pub struct BlockConstraints {
    pub k: usize,
    pub radix: usize,
    /// Dense map from block value in base `radix` to slot, `usize::MAX` if absent.
    pub slot: Vec<usize>,
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl BlockConstraints {
    pub fn from_checker(c: &NormalityChecker) -> Self {
        let (lo, hi) = (0..c.blocks()).map(|i| c.thresholds(i)).unzip();
        BlockConstraints { k: c.k, radix: c.radix(), slot: c.slot_table().to_vec(), lo, hi }
    }

    /// Digit counts of a base-`b` block of length `m` with
    /// `|N_d/m - 1/b| <= ε` for every digit.
    pub fn simple_discrepancy(b: u32, m: usize, eps: &crate::poly::Rat) -> Self {
        use crate::poly::{ceil, floor, rat};
        use num_traits::ToPrimitive;
        let mean = rat(m as i64) / rat(b as i64);
        let spread = eps * rat(m as i64);
        let lo = ceil(&(&mean - &spread)).to_i64().unwrap().max(0);
        let hi = floor(&(&mean + &spread)).to_i64().unwrap();
        BlockConstraints {
            k: 1,
            radix: b as usize,
            slot: (0..b as usize).collect(),
            lo: vec![lo; b as usize],
            hi: vec![hi; b as usize],
        }
    }

    fn blocks(&self) -> usize {
        self.lo.len()
    }

    /// Slot counts of all windows of `u`.
    pub fn counts(&self, u: &[u32]) -> Vec<i64> {
        let mut c = vec![0i64; self.blocks()];
        if u.len() >= self.k {
            for w in u.windows(self.k) {
                let v = w.iter().fold(0usize, |acc, &d| acc * self.radix + d as usize);
                if let Some(&s) = self.slot.get(v) {
                    if s != usize::MAX {
                        c[s] += 1;
                    }
                }
            }
        }
        c
    }

    pub fn satisfied(&self, counts: &[i64]) -> bool {
        counts
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&c, (&lo, &hi))| lo <= c && c <= hi)
    }
}

/// Context of the last `k - 1` digits: `len * R + value`.
#[derive(Clone, Copy)]
struct Ctx {
    len: usize,
    val: usize,
}

/// Outcome of a search.
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub extension: Vec<u32>,
    /// Leaves handed to the predicate.
    pub examined: u64,
    /// Search-tree nodes visited.
    pub nodes: u64,
}

pub struct LexSearch<'a> {
    automaton: &'a Automaton,
    cons: &'a BlockConstraints,
    weights: Vec<Vec<i64>>,
    /// `table[w][r][state * K + ctx]`: best weighted gain over `r` more digits.
    table: Vec<Vec<Vec<i32>>>,
    ctx_size: usize,
    r_pow: usize,
}

fn weight_set(blocks: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    if 3usize.checked_pow(blocks as u32).is_some_and(|n| n <= 81) {
        for code in 0..3usize.pow(blocks as u32) {
            let mut w = Vec::with_capacity(blocks);
            let mut c = code;
            for _ in 0..blocks {
                w.push(c as i64 % 3 - 1);
                c /= 3;
            }
            if w.iter().any(|&x| x != 0) {
                out.push(w);
            }
        }
    } else {
        for d in 0..blocks {
            for sd in [-1, 1] {
                let mut w = vec![0; blocks];
                w[d] = sd;
                out.push(w.clone());
                for e in d + 1..blocks {
                    for se in [-1, 1] {
                        let mut v = w.clone();
                        v[e] = se;
                        out.push(v);
                    }
                }
            }
        }
    }
    out
}

impl<'a> LexSearch<'a> {
    /// Prepares gain tables for extensions of up to `r_max` digits.
    pub fn new(automaton: &'a Automaton, cons: &'a BlockConstraints, r_max: usize) -> Self {
        let r_pow = cons.radix.pow(cons.k.saturating_sub(1) as u32);
        let ctx_size = cons.k.max(1) * r_pow;
        let weights = weight_set(cons.blocks());
        let p = automaton.states();
        let mut search = LexSearch { automaton, cons, weights, table: Vec::new(), ctx_size, r_pow };
        let mut table = Vec::with_capacity(search.weights.len());
        for w in &search.weights {
            let mut t: Vec<Vec<i32>> = vec![vec![0; p * ctx_size]];
            for r in 1..=r_max {
                let prev = &t[r - 1];
                let mut cur = vec![i32::MIN; p * ctx_size];
                for s in 0..p {
                    for code in 0..ctx_size {
                        let ctx = Ctx { len: code / r_pow, val: code % r_pow };
                        if ctx.len >= cons.k.max(1) || ctx.val >= cons.radix.pow(ctx.len as u32) {
                            continue;
                        }
                        let mut best = i32::MIN;
                        for a in 0..=automaton.bound[s].min(automaton.max_digit) {
                            let Some(t2) = automaton.step(s, a) else { continue };
                            let (gain, next) = search.advance(ctx, a, w);
                            let rest = prev[t2 * ctx_size + next.len * r_pow + next.val];
                            if rest != i32::MIN {
                                best = best.max(gain as i32 + rest);
                            }
                        }
                        cur[s * ctx_size + code] = best;
                    }
                }
                t.push(cur);
            }
            table.push(t);
        }
        search.table = table;
        search
    }

    /// Weighted gain of appending `a` after `ctx`, and the new context.
    fn advance(&self, ctx: Ctx, a: u32, w: &[i64]) -> (i64, Ctx) {
        let k = self.cons.k;
        let gain = if ctx.len + 1 >= k {
            let v = ctx.val * self.cons.radix + a as usize;
            match self.cons.slot.get(v) {
                Some(&s) if s != usize::MAX => w[s],
                _ => 0,
            }
        } else {
            0
        };
        let next = if k <= 1 {
            Ctx { len: 0, val: 0 }
        } else if ctx.len < k - 1 {
            Ctx { len: ctx.len + 1, val: ctx.val * self.cons.radix + a as usize }
        } else {
            Ctx { len: k - 1, val: (ctx.val * self.cons.radix + a as usize) % self.r_pow }
        };
        (gain, next)
    }

    fn slot_gain(&self, ctx: Ctx, a: u32) -> Option<usize> {
        if ctx.len + 1 < self.cons.k {
            return None;
        }
        let v = ctx.val * self.cons.radix + a as usize;
        self.cons.slot.get(v).copied().filter(|&s| s != usize::MAX)
    }

    fn feasible(&self, r: usize, state: usize, ctx: Ctx, counts: &[i64]) -> bool {
        let code = state * self.ctx_size + ctx.len * self.r_pow + ctx.val;
        self.weights.iter().zip(&self.table).all(|(w, t)| {
            let best = t[r][code];
            if best == i32::MIN {
                return false;
            }
            let need: i64 = w
                .iter()
                .enumerate()
                .map(|(d, &wd)| match wd.signum() {
                    1 => wd * (self.cons.lo[d] - counts[d]),
                    -1 => wd * (self.cons.hi[d] - counts[d]),
                    _ => 0,
                })
                .sum();
            best as i64 >= need
        })
    }

    /// First extension of length `r` read from `state`, in lexicographic
    /// order, such that `prefix * extension` meets the constraints and
    /// `accept` holds. `prefix` only seeds the counts and the context.
    pub fn first(
        &self,
        state: usize,
        prefix: &[u32],
        r: usize,
        leaf_budget: u64,
        node_budget: u64,
        mut accept: impl FnMut(&[u32]) -> Result<bool>,
    ) -> Result<Option<SearchResult>> {
        assert!(r < self.table[0].len(), "extension longer than the prepared tables");
        let k = self.cons.k;
        let mut counts = self.cons.counts(prefix);
        let tail = &prefix[prefix.len().saturating_sub(k.saturating_sub(1))..];
        let ctx = Ctx {
            len: tail.len(),
            val: tail.iter().fold(0usize, |acc, &d| acc * self.cons.radix + d as usize),
        };
        let mut walk = Walk { examined: 0, nodes: 0, stack: Vec::with_capacity(r), leaf_budget, node_budget };
        let found = self.dfs(state, ctx, r, &mut counts, &mut walk, &mut accept)?;
        Ok(found.then_some(SearchResult { extension: walk.stack, examined: walk.examined, nodes: walk.nodes }))
    }

    fn dfs(
        &self,
        state: usize,
        ctx: Ctx,
        r: usize,
        counts: &mut [i64],
        walk: &mut Walk,
        accept: &mut impl FnMut(&[u32]) -> Result<bool>,
    ) -> Result<bool> {
        walk.nodes += 1;
        if walk.nodes > walk.node_budget {
            return Err(Error::CandidateBudgetExceeded { step: 0, examined: walk.examined });
        }
        if !self.feasible(r, state, ctx, counts) {
            return Ok(false);
        }
        if r == 0 {
            walk.examined += 1;
            if walk.examined > walk.leaf_budget {
                return Err(Error::CandidateBudgetExceeded { step: 0, examined: walk.examined - 1 });
            }
            return accept(&walk.stack);
        }
        let zero = vec![0i64; counts.len()];
        for a in 0..=self.automaton.bound[state].min(self.automaton.max_digit) {
            let Some(next_state) = self.automaton.step(state, a) else { continue };
            let (_, next_ctx) = self.advance(ctx, a, &zero);
            let slot = self.slot_gain(ctx, a);
            if let Some(s) = slot {
                counts[s] += 1;
            }
            walk.stack.push(a);
            let hit = self.dfs(next_state, next_ctx, r - 1, counts, walk, accept)?;
            if hit {
                return Ok(true);
            }
            walk.stack.pop();
            if let Some(s) = slot {
                counts[s] -= 1;
            }
        }
        Ok(false)
    }
}

struct Walk {
    examined: u64,
    nodes: u64,
    stack: Vec<u32>,
    leaf_budget: u64,
    node_budget: u64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::PisotNumber;
    use crate::beta::BetaSystem;
    use crate::poly::ratio;

    fn naive_first(sys: &BetaSystem, cons: &BlockConstraints, prefix: &[u32], r: usize) -> Option<Vec<u32>> {
        let words = sys.automaton().enumerate(r, 1 << 20).unwrap();
        let mut full = prefix.to_vec();
        words.into_iter().map(|(w, _)| w.0).find(|w| {
            if !sys.is_admissible(&[prefix, w].concat()) {
                return false;
            }
            full.truncate(prefix.len());
            full.extend_from_slice(w);
            cons.satisfied(&cons.counts(&full))
        })
    }

    #[test]
    fn matches_plain_scan() {
        for (base, eps, k) in [
            (PisotNumber::integer(2).unwrap(), ratio(1, 3), 2),
            (PisotNumber::golden(), ratio(1, 5), 1),
            (PisotNumber::golden(), ratio(1, 2), 2),
            (PisotNumber::integer(3).unwrap(), ratio(1, 4), 1),
        ] {
            let sys = BetaSystem::new(&base).unwrap();
            for prefix in [vec![], vec![0, 0, 0], vec![1, 0]] {
                let r = if base.is_integer() && base.floor() == 3 { 11 } else { 14 };
                let n = prefix.len() + r;
                let checker = NormalityChecker::new(&sys, &eps, k, n).unwrap();
                let cons = BlockConstraints::from_checker(&checker);
                let search = LexSearch::new(sys.automaton(), &cons, r);
                let state = sys.automaton().run(&prefix).unwrap();
                let got = search
                    .first(state, &prefix, r, u64::MAX, u64::MAX, |_| Ok(true))
                    .unwrap()
                    .map(|s| s.extension);
                assert_eq!(got, naive_first(&sys, &cons, &prefix, r), "{base} {prefix:?}");
            }
        }
    }
}
