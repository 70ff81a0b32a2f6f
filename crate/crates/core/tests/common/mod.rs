//! Naive reference implementations used as oracles by the integration tests.
#![allow(dead_code)]

use std::cmp::Ordering;

use betanormal::algebraic::{FieldElement, PisotNumber};
use betanormal::poly::{rat, Rat};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

/// A test base with its modified expansion of one written out by hand:
/// `d*` is `pre` followed by `period` repeated.
pub struct KnownBase {
    pub name: &'static str,
    pub base: PisotNumber,
    pub pre: Vec<u32>,
    pub period: Vec<u32>,
}

impl KnownBase {
    pub fn dstar(&self, n: usize) -> Vec<u32> {
        (0..n)
            .map(|i| {
                if i < self.pre.len() {
                    self.pre[i]
                } else {
                    self.period[(i - self.pre.len()) % self.period.len()]
                }
            })
            .collect()
    }

    pub fn alphabet(&self) -> u32 {
        self.dstar(1)[0] + 1
    }

    /// Longest run of zeros in `d*`.
    pub fn zero_run(&self) -> usize {
        let w = self.dstar(self.pre.len() + 3 * self.period.len());
        let mut best = 0;
        let mut run = 0;
        for d in w {
            run = if d == 0 { run + 1 } else { 0 };
            best = best.max(run);
        }
        best
    }

    pub fn is_integer(&self) -> bool {
        self.base.is_integer()
    }
}

pub fn known(name: &str) -> KnownBase {
    let (base, pre, period) = match name {
        "phi" => (PisotNumber::golden(), vec![], vec![1, 0]),
        "plastic" => (PisotNumber::plastic(), vec![], vec![1, 0, 0, 0, 0]),
        "tribonacci" => (PisotNumber::tribonacci(), vec![], vec![1, 1, 0]),
        "x^4-x^3-1" => (PisotNumber::parse("x^4-x^3-1").unwrap(), vec![], vec![1, 0, 0, 0]),
        b => {
            let b: u32 = b.parse().expect("integer base");
            (PisotNumber::integer(b).unwrap(), vec![], vec![b - 1])
        }
    };
    KnownBase { name: Box::leak(name.to_string().into_boxed_str()), base, pre, period }
}

pub fn six_bases() -> Vec<KnownBase> {
    ["phi", "plastic", "tribonacci", "2", "3", "10"].iter().map(|n| known(n)).collect()
}

/// Parry's criterion: every suffix is lexicographically at most the prefix
/// of `d*` of the same length.
pub fn admissible(kb: &KnownBase, w: &[u32]) -> bool {
    let d = kb.dstar(w.len());
    (0..w.len()).all(|i| w[i..] <= d[..w.len() - i])
}

/// All admissible words of length `n`, by brute force over every string.
pub fn brute_words(kb: &KnownBase, n: usize) -> Vec<Vec<u32>> {
    let a = kb.alphabet();
    let mut out = Vec::new();
    let mut w = vec![0u32; n];
    loop {
        if admissible(kb, &w) {
            out.push(w.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            w[i] += 1;
            if w[i] < a {
                break;
            }
            w[i] = 0;
        }
    }
}

/// `T^s(1)`: `τ_0 = 1`, `τ_s = β τ_{s-1} - d*_s`.
pub fn tail(kb: &KnownBase, s: usize) -> FieldElement {
    let beta = FieldElement::beta(&kb.base);
    let d = kb.dstar(s);
    let mut t = FieldElement::one(&kb.base);
    for &x in &d {
        t = &(&t * &beta) - &FieldElement::from_int(&kb.base, x as i64);
    }
    t
}

/// Longest suffix of `w` equal to a prefix of `d*`.
pub fn dstar_suffix(kb: &KnownBase, w: &[u32]) -> usize {
    let d = kb.dstar(w.len());
    (0..=w.len()).rev().find(|&s| w[w.len() - s..] == d[..s]).unwrap()
}

/// `Σ w_i β^{-i}`.
pub fn value(kb: &KnownBase, w: &[u32]) -> FieldElement {
    let inv = FieldElement::beta(&kb.base).inverse().unwrap();
    let mut acc = FieldElement::zero(&kb.base);
    let mut p = inv.clone();
    for &x in w {
        acc = &acc + &p.scale(&rat(x as i64));
        p = &p * &inv;
    }
    acc
}

/// Lebesgue length of the cylinder of an admissible word: `β^{-n} T^s(1)`.
pub fn cylinder_length(kb: &KnownBase, w: &[u32]) -> FieldElement {
    let inv = FieldElement::beta(&kb.base).inverse().unwrap();
    &inv.pow(w.len() as u64) * &tail(kb, dstar_suffix(kb, w))
}

/// Extreme discrepancy by testing every interval whose endpoints are
/// 0, 1 or sample points, both closed and open.
pub fn discrepancy_naive(points: &[Rat]) -> Rat {
    let n = Rat::from_integer(BigInt::from(points.len()));
    let mut xs = points.to_vec();
    xs.sort();
    let mut ends = vec![Rat::zero()];
    ends.extend(xs.iter().cloned());
    ends.push(Rat::one());
    ends.dedup();
    let below = |x: &Rat| xs.partition_point(|p| p < x);
    let upto = |x: &Rat| xs.partition_point(|p| p <= x);
    let mut best = Rat::zero();
    for (i, a) in ends.iter().enumerate() {
        for b in &ends[i..] {
            let len = b - a;
            let closed = Rat::from_integer(BigInt::from(upto(b) - below(a))) / &n;
            let open = Rat::from_integer(BigInt::from(below(b).saturating_sub(upto(a)))) / &n;
            let d1 = (&closed - &len).abs();
            let d2 = (&len - &open).abs();
            if d1 > best {
                best = d1;
            }
            if d2 > best {
                best = d2;
            }
        }
    }
    best
}

/// Simple discrepancy `max_d |N_d/n - 1/b|`.
pub fn simple_discrepancy_naive(u: &[u32], b: u32) -> Rat {
    let n = u.len() as i64;
    (0..b)
        .map(|d| {
            let c = u.iter().filter(|&&x| x == d).count() as i64;
            (Rat::new(c.into(), n.into()) - Rat::new(1.into(), (b as i64).into())).abs()
        })
        .max()
        .unwrap()
}

/// `k(ε, δ, t) = max(⌈6/ε⌉, ⌈-ln(δ/(2t)) 6/ε²⌉) + 1`, evaluated in floating point.
pub fn k_naive(eps: f64, delta: f64, t: f64) -> u64 {
    let a = (6.0 / eps).ceil();
    let x = -(delta / (2.0 * t)).ln() * 6.0 / (eps * eps);
    assert!((x - x.round()).abs() > 1e-6, "k too close to an integer for f64");
    a.max(x.ceil()) as u64 + 1
}

/// The first BHS steps while only base 2 is active: each step appends the
/// lexicographically first block of `⌈log₂ t⌉ k` binary digits with simple
/// discrepancy at most ε.
pub struct NaiveBhsStep {
    pub t: usize,
    pub eps: Rat,
    pub delta: Rat,
    pub k: u64,
    pub block: Vec<u32>,
    pub index: BigUint,
}

pub fn naive_bhs(steps: usize) -> Vec<NaiveBhsStep> {
    let t = 2usize;
    let eps = Rat::new(1.into(), 2.into());
    let mut out = Vec::new();
    for _ in 0..steps {
        // δ = (8 t 2^{t + t} t! t!)^{-1} with t = 2
        let delta = Rat::new(1.into(), BigInt::from(8 * 2 * 16 * 2 * 2));
        let k = k_naive(0.5, 1.0 / 1024.0, t as f64);
        let len = k as usize;
        let mut index = BigUint::zero();
        let block = loop {
            let bits: Vec<u32> = (0..len).map(|i| index.bit((len - 1 - i) as u64) as u32).collect();
            if simple_discrepancy_naive(&bits, 2) <= eps {
                break bits;
            }
            index += 1u32;
        };
        out.push(NaiveBhsStep { t, eps: eps.clone(), delta, k, block, index });
    }
    out
}

/// A faithful step of the multi-base algorithm for the single base 2.
pub struct NaivePisotStep {
    pub t: usize,
    pub eps: Rat,
    pub k: usize,
    pub delta: Rat,
    pub n: usize,
    pub block: Vec<u32>,
    pub index: BigUint,
    /// `λ(S) / λ(I)` and `λ(N) / λ(I)`.
    pub s_factor: Rat,
    pub n_factor: Rat,
}

fn pow2(e: usize) -> BigInt {
    BigInt::one() << e
}

fn t_natural(i: u64) -> usize {
    ((i as f64).ln().ceil() as usize).max(1)
}

/// Whether the remaining `r` digits can bring the counts inside `[lo, hi]`.
fn feasible_k1(c: &[i64; 2], r: i64, lo: i64, hi: i64) -> bool {
    (0..=r).any(|x| (lo..=hi).contains(&(c[0] + x)) && (lo..=hi).contains(&(c[1] + r - x)))
}

/// Same for overlapping pairs `00, 01, 10, 11` after a last digit `b`.
fn feasible_k2(c: &[i64; 4], b: u32, r: i64, lo: i64, hi: i64) -> bool {
    let ok = |i: usize, x: i64| (lo..=hi).contains(&(c[i] + x));
    for x01 in 0..=r {
        let choices: Vec<i64> = if b == 0 { vec![x01, x01 - 1] } else { vec![x01, x01 + 1] };
        for x10 in choices {
            if x10 < 0 || x01 + x10 > r || !ok(1, x01) || !ok(2, x10) {
                continue;
            }
            let rest = r - x01 - x10;
            let zeros_reachable = b == 0 || x10 > 0;
            let ones_reachable = b == 1 || x01 > 0;
            let mut a = 0.max(lo - c[0]).max(rest - (hi - c[3]));
            let mut z = rest.min(hi - c[0]).min(rest - (lo - c[3]));
            if !zeros_reachable {
                z = z.min(0);
            }
            if !ones_reachable {
                a = a.max(rest);
            }
            if a <= z {
                return true;
            }
        }
    }
    false
}

/// Lexicographically first binary word of length `n` that is (ε, k)-normal
/// for the uniform measure, built digit by digit with exact feasibility.
pub fn first_normal_binary(n: usize, eps: &Rat, k: usize) -> Vec<u32> {
    let mu = Rat::new(1.into(), pow2(k));
    let nn = rat(n as i64);
    let lo = ((&mu * (rat(1) - eps) * &nn).floor().to_integer() + 1i32).try_into().unwrap();
    let hi = ((&mu * (rat(1) + eps) * &nn).ceil().to_integer() - 1i32).try_into().unwrap();
    let mut w: Vec<u32> = Vec::with_capacity(n);
    match k {
        1 => {
            let mut c = [0i64; 2];
            for pos in 0..n {
                let r = (n - pos - 1) as i64;
                let mut placed = false;
                for d in 0..2u32 {
                    let mut c2 = c;
                    c2[d as usize] += 1;
                    if feasible_k1(&c2, r, lo, hi) {
                        c = c2;
                        w.push(d);
                        placed = true;
                        break;
                    }
                }
                assert!(placed, "no normal word of length {n}");
            }
        }
        2 => {
            let mut c = [0i64; 4];
            for pos in 0..n {
                let r = (n - pos - 1) as i64;
                let mut placed = false;
                for d in 0..2u32 {
                    let mut c2 = c;
                    if let Some(&b) = w.last() {
                        c2[(2 * b + d) as usize] += 1;
                    }
                    if feasible_k2(&c2, d, r, lo, hi) {
                        c = c2;
                        w.push(d);
                        placed = true;
                        break;
                    }
                }
                assert!(placed, "no normal word of length {n}");
            }
        }
        _ => panic!("oracle covers k <= 2"),
    }
    w
}

/// Steps `2..=steps+1` of the single-base-2 run. With `M = 0` every factor
/// `β^{M+4}` is 16, and `L` is the whole current cylinder.
pub fn naive_pisot_base2(steps: usize) -> Vec<NaivePisotStep> {
    let mut out = Vec::new();
    let mut ti = 1usize;
    for i in 1..=steps as u64 {
        let t = t_natural(i + 1);
        let eps = Rat::new(1.into(), BigInt::from(t));
        let k = t;
        let den = BigInt::from(2 * 2 * 16 * ti) * pow2(ti) * pow2(4 * ti) * pow2(t) * pow2(4 * t);
        let delta = Rat::new(1.into(), den.clone());
        // η = ε min(ε 2^k / 16, 3/4) / (ln 2 + ln 2)
        let e = 1.0 / t as f64;
        let eta = e * (e * 2f64.powi(k as i32) / 16.0).min(0.75) / (2.0 * 2f64.ln());
        // 4 (2/(2-1))² 2^k 2^{-nη} < δ  ⇔  n η > 4 + k + log₂(1/δ)
        let d_log = den.bits() as f64 - 1.0;
        let x = (4.0 + k as f64 + d_log) / eta;
        assert!((x - x.round()).abs() > 1e-6, "n too close to an integer for f64");
        let n = (x.floor() as usize + 1).max(k);
        let block = first_normal_binary(n, &eps, k);
        let index = block.iter().fold(BigUint::zero(), |acc, &d| (acc << 1u32) + d);
        let s_factor = Rat::new(1.into(), pow2(ti + t + 1) * pow2(4 * ti) * pow2(4 * t));
        let n_factor = &delta * rat(ti as i64);
        out.push(NaivePisotStep { t, eps, k, delta, n, block, index, s_factor, n_factor });
        ti = t;
    }
    out
}

pub fn cmp(a: &FieldElement, b: &FieldElement) -> Ordering {
    a.try_cmp(b).expect("same field")
}
