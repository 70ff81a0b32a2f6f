use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{rat, Rat};

/// Extreme discrepancy of a finite point set in `[0, 1)` by the sorted
/// formula `1/N + max(i/N - x_i) - min(i/N - x_i)`.
pub fn extreme_discrepancy(points: &[Rat]) -> Rat {
    assert!(!points.is_empty(), "discrepancy of an empty point set");
    let mut xs = points.to_vec();
    xs.sort();
    let n = rat(xs.len() as i64);
    let mut hi: Option<Rat> = None;
    let mut lo: Option<Rat> = None;
    for (i, x) in xs.iter().enumerate() {
        let v = rat(i as i64 + 1) / &n - x;
        if hi.as_ref().is_none_or(|h| &v > h) {
            hi = Some(v.clone());
        }
        if lo.as_ref().is_none_or(|l| &v < l) {
            lo = Some(v);
        }
    }
    Rat::one() / n + hi.unwrap() - lo.unwrap()
}

/// Same quantity by enumerating every interval with endpoints among the
/// points, 0 and 1, in all four open/closed variants.
pub fn extreme_discrepancy_brute(points: &[Rat]) -> Rat {
    assert!(!points.is_empty(), "discrepancy of an empty point set");
    let mut xs = points.to_vec();
    xs.sort();
    let n = rat(xs.len() as i64);
    let mut ends: Vec<Rat> = xs.clone();
    ends.push(Rat::zero());
    ends.push(Rat::one());
    ends.sort();
    ends.dedup();
    // number of points < a and <= a
    let below = |a: &Rat| xs.partition_point(|x| x < a);
    let upto = |a: &Rat| xs.partition_point(|x| x <= a);
    let mut best = Rat::zero();
    for (i, a) in ends.iter().enumerate() {
        for b in &ends[i..] {
            let len = b - a;
            let variants = [
                upto(b) as i64 - below(a) as i64, // [a, b]
                below(b) as i64 - below(a) as i64, // [a, b)
                upto(b) as i64 - upto(a) as i64,  // (a, b]
                below(b) as i64 - upto(a) as i64, // (a, b)
            ];
            for (j, &c) in variants.iter().enumerate() {
                if a == b && j != 0 {
                    continue;
                }
                let d = (rat(c.max(0)) / &n - &len).abs();
                if d > best {
                    best = d;
                }
            }
        }
    }
    best
}

/// Fractional parts `{b^n x}` for `n = 1..N`, from a finite digit prefix.
#[derive(Debug, Clone, Serialize)]
pub struct OrbitPoints {
    pub points: Vec<Rat>,
    /// Upper bound for the truncation error of every point.
    pub error_bound: Rat,
    pub guard: usize,
}

/// Default guard window `2 log_b N + 32`.
pub fn default_guard(b: u32, n: usize) -> usize {
    let logn = (n.max(1) as f64).ln() / (b as f64).ln();
    (2.0 * logn).ceil() as usize + 32
}

pub fn orbit_points(digits: &[u32], b: u32, n: usize) -> Result<OrbitPoints> {
    let guard = default_guard(b, n);
    orbit_points_with_guard(digits, b, n, guard)
}

pub fn orbit_points_with_guard(digits: &[u32], b: u32, n: usize, guard: usize) -> Result<OrbitPoints> {
    let need = n + guard;
    if digits.len() < need {
        return Err(Error::InsufficientDigits { have: digits.len(), need });
    }
    if let Some(&d) = digits.iter().find(|&&d| d >= b) {
        return Err(Error::DigitOutOfRange { digit: d, bound: b - 1 });
    }
    let len = digits.len();
    let bb = BigInt::from(b);
    // suffix integer values: S_i = digits[i..] read in base b
    let mut suffix = vec![BigInt::zero(); len + 1];
    let mut pow = BigInt::one();
    for i in (0..len).rev() {
        suffix[i] = &suffix[i + 1] + &pow * digits[i];
        pow *= &bb;
    }
    let points = (1..=n)
        .map(|k| {
            let den: BigInt = Pow::pow(&bb, (len - k) as u32);
            let g = suffix[k].gcd(&den);
            Rat::new_raw(&suffix[k] / &g, den / g)
        })
        .collect();
    let error_bound = Rat::new(BigInt::one(), Pow::pow(&bb, (len - n) as u32));
    Ok(OrbitPoints { points, error_bound, guard })
}
