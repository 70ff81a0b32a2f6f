//! Certified real intervals with rational endpoints.
//!
//! Transcendental functions return enclosures that are rounded outward to
//! dyadic rationals, so every interval produced here contains the exact real
//! value it stands for.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::{floor, ceil, rat, ratio, Rat};

#[derive(Clone, PartialEq, Eq)]
pub struct RealInterval {
    lo: Rat,
    hi: Rat,
}

impl fmt::Debug for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.12e}, {:.12e}]", to_f64(&self.lo), to_f64(&self.hi))
    }
}

pub fn to_f64(x: &Rat) -> f64 {
    // Scale to keep both parts representable.
    let n = x.numer();
    let d = x.denom();
    let shift = (n.bits() as i64).max(d.bits() as i64) - 60;
    if shift > 0 {
        let s = shift as usize;
        let nf = (n >> s).to_f64().unwrap_or(f64::NAN);
        let df = (d >> s).to_f64().unwrap_or(f64::NAN);
        if df == 0.0 {
            let dd = d.bits() as i64;
            let nn = n.bits() as i64;
            return nf.signum() * 2f64.powi((nn - dd) as i32);
        }
        nf / df
    } else {
        n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN)
    }
}

pub fn pow2(e: i64) -> Rat {
    if e >= 0 {
        Rat::from_integer(BigInt::one() << (e as usize))
    } else {
        Rat::new(BigInt::one(), BigInt::one() << ((-e) as usize))
    }
}

pub fn round_down(x: &Rat, bits: u32) -> Rat {
    let scaled = x * pow2(bits as i64);
    Rat::new(floor(&scaled), BigInt::one() << bits as usize)
}

pub fn round_up(x: &Rat, bits: u32) -> Rat {
    let scaled = x * pow2(bits as i64);
    Rat::new(ceil(&scaled), BigInt::one() << bits as usize)
}

/// Largest `e` with `2^e <= x`, for `x > 0`.
fn floor_log2(x: &Rat) -> i64 {
    let mut e = x.numer().bits() as i64 - x.denom().bits() as i64;
    loop {
        let p = pow2(e);
        if &p > x {
            e -= 1;
        } else if &(p * rat(2)) <= x {
            e += 1;
        } else {
            return e;
        }
    }
}

/// Enclosure of `2 atanh(z)` for a dyadic `0 <= z <= 1/3`.
fn two_atanh(z: &Rat, bits: u32) -> (Rat, Rat) {
    let w = bits + 16;
    let z2 = z * z;
    let tol = pow2(-(bits as i64 + 4));
    let mut p_lo = z.clone();
    let mut p_hi = z.clone();
    let mut s_lo = Rat::zero();
    let mut s_hi = Rat::zero();
    let mut k: i64 = 0;
    loop {
        let den = rat(2 * k + 1);
        s_lo += round_down(&(&p_lo / &den), w);
        s_hi += round_up(&(&p_hi / &den), w);
        p_lo = round_down(&(&p_lo * &z2), w);
        p_hi = round_up(&(&p_hi * &z2), w);
        k += 1;
        if p_hi < tol {
            break;
        }
    }
    // tail <= p / ((2k+1)(1 - z^2)) and 1/(1 - z^2) <= 9/8
    let tail = &p_hi * ratio(9, 8) / rat(2 * k + 1);
    s_hi += round_up(&tail, w);
    (s_lo * rat(2), s_hi * rat(2))
}

pub fn ln2(bits: u32) -> RealInterval {
    let (lo, hi) = two_atanh(&ratio(1, 3), bits);
    RealInterval { lo, hi }
}

/// Enclosure of `ln x` for rational `x > 0`.
pub fn ln_rat(x: &Rat, bits: u32) -> RealInterval {
    assert!(x.is_positive(), "logarithm of a non-positive number");
    if x.is_one() {
        return RealInterval::point(Rat::zero());
    }
    let e = floor_log2(x);
    let r = x / pow2(e);
    let w = bits + 8;
    let z = (&r - rat(1)) / (&r + rat(1));
    let z_lo = round_down(&z, w + 4);
    let z_hi = round_up(&z, w + 4).min(ratio(1, 3));
    let (lo, _) = two_atanh(&z_lo, w);
    let (_, hi) = two_atanh(&z_hi, w);
    let frac = RealInterval { lo, hi };
    let l2 = ln2(w);
    let out = l2.mul(&RealInterval::point(rat(e))).add(&frac);
    out.round_out(bits + 4)
}

/// Enclosure of `exp x` for rational `x`.
pub fn exp_rat(x: &Rat, bits: u32) -> RealInterval {
    if x.is_negative() {
        return exp_rat(&-x, bits).recip();
    }
    if x.is_zero() {
        return RealInterval::point(Rat::one());
    }
    // halve until the argument is at most 1/2
    let mut s: u32 = 0;
    let mut y = x.clone();
    while y > ratio(1, 2) {
        y /= rat(2);
        s += 1;
    }
    let w = bits + s + 16;
    let y_lo = round_down(&y, w);
    let y_hi = round_up(&y, w);
    let taylor = |y: &Rat, up: bool| -> (Rat, Rat) {
        let mut sum = Rat::zero();
        let mut term = Rat::one();
        let mut k: i64 = 0;
        let tol = pow2(-(w as i64 - 8));
        loop {
            sum += term.clone();
            k += 1;
            term = &term * y / rat(k);
            term = if up { round_up(&term, w) } else { round_down(&term, w) };
            if term < tol {
                break;
            }
        }
        // remaining terms are dominated by a geometric series with ratio 1/2
        (sum, term * rat(2))
    };
    let (lo_sum, _) = taylor(&y_lo, false);
    let (hi_sum, tail) = taylor(&y_hi, true);
    let mut lo = lo_sum;
    let mut hi = hi_sum + tail;
    for _ in 0..s {
        lo = round_down(&(&lo * &lo), w);
        hi = round_up(&(&hi * &hi), w);
    }
    RealInterval { lo, hi }.round_out(bits + 4)
}

impl RealInterval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(crate::poly::cmp_fast(&lo, &hi) != std::cmp::Ordering::Greater, "interval endpoints out of order");
        RealInterval { lo, hi }
    }

    pub fn point(x: Rat) -> Self {
        RealInterval { lo: x.clone(), hi: x }
    }

    pub fn int(n: i64) -> Self {
        Self::point(rat(n))
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn mid_f64(&self) -> f64 {
        (to_f64(&self.lo) + to_f64(&self.hi)) / 2.0
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// `Some(true)` if certainly `self < other`, `Some(false)` if certainly
    /// `self >= other`, `None` if the enclosures overlap.
    pub fn lt(&self, other: &RealInterval) -> Option<bool> {
        if self.hi < other.lo {
            Some(true)
        } else if self.lo >= other.hi {
            Some(false)
        } else {
            None
        }
    }

    pub fn round_out(&self, bits: u32) -> Self {
        RealInterval {
            lo: round_down(&self.lo, bits),
            hi: round_up(&self.hi, bits),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        RealInterval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &Self) -> Self {
        RealInterval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn neg(&self) -> Self {
        RealInterval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().cloned().unwrap_or_default();
        let hi = c.iter().max().cloned().unwrap_or_default();
        RealInterval { lo, hi }
    }

    pub fn scale(&self, s: &Rat) -> Self {
        self.mul(&RealInterval::point(s.clone()))
    }

    pub fn recip(&self) -> Self {
        assert!(
            self.lo.is_positive() || self.hi.is_negative(),
            "reciprocal of an interval containing zero"
        );
        RealInterval { lo: self.hi.recip(), hi: self.lo.recip() }
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.recip())
    }

    pub fn min(&self, o: &Self) -> Self {
        RealInterval {
            lo: self.lo.clone().min(o.lo.clone()),
            hi: self.hi.clone().min(o.hi.clone()),
        }
    }

    pub fn max(&self, o: &Self) -> Self {
        RealInterval {
            lo: self.lo.clone().max(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
        }
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut out = RealInterval::int(1);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn ln(&self, bits: u32) -> Self {
        let lo = ln_rat(&self.lo, bits);
        let hi = ln_rat(&self.hi, bits);
        RealInterval { lo: lo.lo, hi: hi.hi }
    }

    pub fn exp(&self, bits: u32) -> Self {
        let lo = exp_rat(&self.lo, bits);
        let hi = exp_rat(&self.hi, bits);
        RealInterval { lo: lo.lo, hi: hi.hi }
    }

    /// `self^e` for a positive base, `exp(e ln self)`.
    pub fn powf(&self, e: &Self, bits: u32) -> Self {
        self.ln(bits).mul(e).round_out(bits + 8).exp(bits)
    }

    /// Ceiling, if the interval pins it down.
    pub fn ceil(&self) -> Option<BigInt> {
        let a = ceil(&self.lo);
        let b = ceil(&self.hi);
        (a == b).then_some(a)
    }

    pub fn floor(&self) -> Option<BigInt> {
        let a = floor(&self.lo);
        let b = floor(&self.hi);
        (a == b).then_some(a)
    }
}

/// Integer ceiling of a quantity computed by `f` at increasing precision.
pub fn certified_ceil(mut f: impl FnMut(u32) -> RealInterval) -> BigInt {
    let mut bits = 64;
    loop {
        if let Some(c) = f(bits).ceil() {
            return c;
        }
        bits *= 2;
        assert!(bits < 1 << 16, "certified ceiling failed to converge");
    }
}

pub fn certified_floor(mut f: impl FnMut(u32) -> RealInterval) -> BigInt {
    let mut bits = 64;
    loop {
        if let Some(c) = f(bits).floor() {
            return c;
        }
        bits *= 2;
        assert!(bits < 1 << 16, "certified floor failed to converge");
    }
}

pub fn is_power_of_two(n: u64) -> bool {
    n.is_power_of_two()
}

/// `ceil(log2 n)` for `n >= 1`.
pub fn ceil_log2(n: &BigInt) -> u64 {
    assert!(n.is_positive());
    if n.is_one() {
        0
    } else {
        (n - BigInt::one()).bits()
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn gcd_int(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn contains(iv: &RealInterval, x: f64) -> bool {
        to_f64(iv.lo()) <= x + 1e-15 && x - 1e-15 <= to_f64(iv.hi())
    }

    #[test]
    fn logarithms_enclose() {
        for &(n, d) in &[(2i64, 1i64), (3, 1), (1, 3), (600, 1), (7, 1000), (4096, 1)] {
            let iv = ln_rat(&ratio(n, d), 80);
            assert!(contains(&iv, (n as f64 / d as f64).ln()), "ln {n}/{d}: {iv:?}");
            assert!(to_f64(&iv.width()) < 1e-20);
        }
    }

    #[test]
    fn exponentials_enclose() {
        for &(n, d) in &[(1i64, 1i64), (-3, 2), (20, 1), (1, 1000), (-50, 1)] {
            let x = n as f64 / d as f64;
            let iv = exp_rat(&ratio(n, d), 80);
            let rel = to_f64(&iv.width()) / x.exp();
            assert!(contains(&iv, x.exp()), "exp {x}: {iv:?}");
            assert!(rel < 1e-18);
        }
    }

    #[test]
    fn ceiling_of_log_expression() {
        // ceil(6 ln 8) = 13
        let c = certified_ceil(|b| ln_rat(&rat(8), b).scale(&rat(6)));
        assert_eq!(c, BigInt::from(13));
        assert_eq!(ceil_log2(&BigInt::from(1024)), 10);
        assert_eq!(ceil_log2(&BigInt::from(1025)), 11);
        assert_eq!(ceil_log2(&BigInt::from(1)), 0);
    }
}
