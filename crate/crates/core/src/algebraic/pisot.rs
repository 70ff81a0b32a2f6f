use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::minpoly::{to_f64_coeffs, MinimalPolynomial};
use crate::error::{Error, Result};
use crate::poly::{self, rat, ratio, Rat, Sturm};
use crate::real::{pow2, to_f64, RealInterval};
use crate::schur;

/// Disc `|z - center| <= radius` that isolates one conjugate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugateBox {
    pub re: Rat,
    pub im: Rat,
    pub radius: Rat,
}

impl ConjugateBox {
    pub fn center_f64(&self) -> Complex<f64> {
        Complex::new(to_f64(&self.re), to_f64(&self.im))
    }

    /// Rational upper bound for the modulus of the enclosed conjugate.
    pub fn modulus_upper(&self) -> Rat {
        let n2 = &self.re * &self.re + &self.im * &self.im;
        sqrt_upper(&n2, 64) + &self.radius
    }
}

/// Rational `s >= sqrt(x)` accurate to about `bits` bits.
pub fn sqrt_upper(x: &Rat, bits: u32) -> Rat {
    let scale = BigInt::one() << (2 * bits as usize);
    let n = poly::ceil(&(x * Rat::from_integer(scale)));
    let mut r = poly::isqrt(&n);
    if &r * &r < n {
        r += 1;
    }
    Rat::new(r, BigInt::one() << bits as usize)
}

/// Rational `s <= sqrt(x)` accurate to about `bits` bits.
pub fn sqrt_lower(x: &Rat, bits: u32) -> Rat {
    if !x.is_positive() {
        return Rat::zero();
    }
    let scale = BigInt::one() << (2 * bits as usize);
    let n = poly::floor(&(x * Rat::from_integer(scale)));
    Rat::new(poly::isqrt(&n), BigInt::one() << bits as usize)
}

struct Inner {
    minpoly: MinimalPolynomial,
    poly: Vec<Rat>,
    floor: u32,
    enclosure: RwLock<(Rat, Rat)>,
    conjugates: Vec<ConjugateBox>,
    real_embeddings: usize,
    complex_pairs: usize,
    eta_conj: Rat,
    approx: f64,
}

/// A certified Pisot number: real algebraic integer above 1 whose other
/// conjugates lie in the open unit disc. Cheap to clone.
#[derive(Clone)]
pub struct PisotNumber(Arc<Inner>);

impl PartialEq for PisotNumber {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.minpoly.coeffs() == other.0.minpoly.coeffs()
    }
}

impl Eq for PisotNumber {}

impl fmt::Debug for PisotNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PisotNumber({} ~ {:.9})", self.0.minpoly, self.0.approx)
    }
}

impl fmt::Display for PisotNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.minpoly)
    }
}

fn sign(x: &Rat) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl PisotNumber {
    pub fn parse(text: &str) -> Result<Self> {
        Self::certify(MinimalPolynomial::parse(text)?)
    }

    pub fn integer(b: u32) -> Result<Self> {
        Self::certify(MinimalPolynomial::new(vec![-BigInt::from(b), BigInt::one()])?)
    }

    pub fn golden() -> Self {
        Self::parse("x^2-x-1").expect("golden ratio is Pisot")
    }

    pub fn plastic() -> Self {
        Self::parse("x^3-x-1").expect("plastic number is Pisot")
    }

    pub fn tribonacci() -> Self {
        Self::parse("x^3-x^2-x-1").expect("tribonacci constant is Pisot")
    }

    pub fn certify(minpoly: MinimalPolynomial) -> Result<Self> {
        let p = minpoly.to_rat();
        let d = minpoly.degree();
        if d == 1 {
            let b = -&p[0];
            if b <= rat(1) {
                return Err(Error::NoRealRootAboveOne);
            }
            let floor = poly::floor(&b).to_u32().ok_or_else(|| {
                Error::NotPisot("integer base too large".into())
            })?;
            return Ok(PisotNumber(Arc::new(Inner {
                approx: to_f64(&b),
                minpoly,
                poly: p,
                floor,
                enclosure: RwLock::new((b.clone(), b)),
                conjugates: Vec::new(),
                real_embeddings: 1,
                complex_pairs: 0,
                eta_conj: Rat::zero(),
            })));
        }
        let sturm = Sturm::new(&p);
        match sturm.count_above(&rat(1)) {
            0 => return Err(Error::NoRealRootAboveOne),
            1 => {}
            n => {
                return Err(Error::NotPisot(format!("{n} real roots exceed 1")));
            }
        }
        if minpoly.is_reciprocal() {
            // 1/β is then a conjugate, and the remaining conjugates pair up
            // under z -> 1/z, which puts one of each pair outside the disc
            // unless d = 2.
            if d > 2 {
                return Err(Error::NotPisot(format!(
                    "reciprocal polynomial of degree {d}: some conjugate has modulus >= 1"
                )));
            }
        }
        // isolate the dominant root
        let mut lo = rat(1);
        let mut hi = poly::root_bound(&p);
        debug_assert!(sign(&poly::eval(&p, &lo)) < 0);
        for _ in 0..72 {
            let mid = (&lo + &hi) / rat(2);
            match sign(&poly::eval(&p, &mid)) {
                0 => {
                    return Err(Error::Invariant("rational root of irreducible polynomial".into()))
                }
                s if s < 0 => lo = mid,
                _ => hi = mid,
            }
        }
        let approx = to_f64(&((&lo + &hi) / rat(2)));
        let roots = schur::aberth(&to_f64_coeffs(minpoly.coeffs()));
        let dom = roots
            .iter()
            .enumerate()
            .min_by(|a, b| {
                (a.1 - approx).norm().partial_cmp(&(b.1 - approx).norm()).unwrap()
            })
            .map(|(i, _)| i)
            .unwrap();
        let others: Vec<Complex<f64>> =
            roots.iter().enumerate().filter(|&(i, _)| i != dom).map(|(_, z)| *z).collect();
        let numeric_max = others.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        let origin = Complex::new(Rat::zero(), Rat::zero());

        let mut eta_conj = None;
        if numeric_max < 1.0 - 1e-9 {
            let gap = 1.0 - numeric_max;
            for frac in [1e-6, 1e-4, 1e-2, 0.1, 0.3, 0.5] {
                let rho = rat_above(numeric_max + gap * frac);
                if rho >= rat(1) {
                    continue;
                }
                if schur::count_in_disc(&p, &origin, &rho) == Some(d - 1) {
                    eta_conj = Some(rho);
                    break;
                }
            }
        }
        let eta_conj = match eta_conj {
            Some(r) => r,
            None => {
                let witness = others
                    .iter()
                    .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
                    .copied()
                    .unwrap_or_default();
                for k in [0i64, 40, 30, 20, 10] {
                    let rho = if k == 0 { rat(1) } else { rat(1) + pow2(-k) };
                    if let Some(c) = schur::count_in_disc(&p, &origin, &rho) {
                        if c < d - 1 {
                            return Err(Error::NotPisot(format!(
                                "conjugate {:.9}{:+.9}i has modulus {:.9} >= 1",
                                witness.re,
                                witness.im,
                                witness.norm()
                            )));
                        }
                    }
                }
                return Err(Error::NotPisot(format!(
                    "conjugate modulus {:.9} could not be certified below 1",
                    witness.norm()
                )));
            }
        };

        let conjugates = isolate_conjugates(&p, &others)?;
        let real_embeddings = sturm.count_real();
        let complex_pairs = (d - real_embeddings) / 2;
        let mut floor_ok = poly::floor(&lo) == poly::floor(&hi);
        let (mut lo, mut hi) = (lo, hi);
        while !floor_ok {
            // the root is irrational, so bisection separates it from integers
            let mid = (&lo + &hi) / rat(2);
            if sign(&poly::eval(&p, &mid)) < 0 {
                lo = mid;
            } else {
                hi = mid;
            }
            floor_ok = poly::floor(&lo) == poly::floor(&hi);
        }
        let floor = poly::floor(&lo)
            .to_u32()
            .ok_or_else(|| Error::NotPisot("base too large".into()))?;
        Ok(PisotNumber(Arc::new(Inner {
            minpoly,
            poly: p,
            floor,
            enclosure: RwLock::new((lo, hi)),
            conjugates,
            real_embeddings,
            complex_pairs,
            eta_conj,
            approx,
        })))
    }

    pub fn minpoly(&self) -> &MinimalPolynomial {
        &self.0.minpoly
    }

    pub fn degree(&self) -> usize {
        self.0.minpoly.degree()
    }

    pub(crate) fn poly(&self) -> &[Rat] {
        &self.0.poly
    }

    /// `⌊β⌋`; the largest digit for non-integer β.
    pub fn floor(&self) -> u32 {
        self.0.floor
    }

    pub fn is_integer(&self) -> bool {
        self.degree() == 1
    }

    pub fn approx(&self) -> f64 {
        self.0.approx
    }

    pub fn conjugates(&self) -> &[ConjugateBox] {
        &self.0.conjugates
    }

    pub fn real_embeddings(&self) -> usize {
        self.0.real_embeddings
    }

    pub fn complex_pairs(&self) -> usize {
        self.0.complex_pairs
    }

    pub fn eta_conj(&self) -> &Rat {
        &self.0.eta_conj
    }

    /// Isolating interval for β of width at most `2^-bits`.
    pub fn enclosure(&self, bits: u32) -> (Rat, Rat) {
        let target = pow2(-(bits as i64));
        {
            let e = self.0.enclosure.read().unwrap();
            if &e.1 - &e.0 <= target {
                return e.clone();
            }
        }
        let mut e = self.0.enclosure.write().unwrap();
        if &e.1 - &e.0 <= target {
            return e.clone();
        }
        // bisection on the grid 2^-w; the minimal polynomial is negative
        // just below β and positive above
        let w = bits as usize + 2;
        let coeffs = self.minpoly().coeffs();
        let d = coeffs.len() - 1;
        let sign_at = |m: &BigInt| {
            let mut acc = coeffs[d].clone();
            for i in (0..d).rev() {
                acc = acc * m + (&coeffs[i] << (w * (d - i)));
            }
            acc.signum()
        };
        let mut l = poly::floor(&(&e.0 * pow2(w as i64)));
        let mut h = poly::ceil(&(&e.1 * pow2(w as i64)));
        let step = BigInt::one() << (w - bits as usize);
        while &h - &l > step {
            let m: BigInt = (&l + &h) >> 1usize;
            if sign_at(&m).is_negative() {
                l = m;
            } else {
                h = m;
            }
        }
        let lo = poly::dyadic(l, w);
        let hi = poly::dyadic(h, w);
        *e = (lo.clone(), hi.clone());
        (lo, hi)
    }

    pub fn interval(&self, bits: u32) -> RealInterval {
        let (lo, hi) = self.enclosure(bits);
        RealInterval::new(lo, hi)
    }

    /// Disc isolating the dominant root.
    pub fn dominant_box(&self, bits: u32) -> ConjugateBox {
        let (lo, hi) = self.enclosure(bits);
        ConjugateBox {
            re: (&lo + &hi) / rat(2),
            im: Rat::zero(),
            radius: (&hi - &lo) / rat(2),
        }
    }
}

/// Short rational just above a positive float.
fn rat_above(x: f64) -> Rat {
    let scale = 1i64 << 40;
    Rat::new(BigInt::from((x * scale as f64).ceil() as i64 + 1), BigInt::from(scale))
}

fn rat_near(x: f64) -> Rat {
    let scale = 1i64 << 48;
    Rat::new(BigInt::from((x * scale as f64).round() as i64), BigInt::from(scale))
}

fn isolate_conjugates(p: &[Rat], roots: &[Complex<f64>]) -> Result<Vec<ConjugateBox>> {
    let mut out = Vec::new();
    for (i, z) in roots.iter().enumerate() {
        let sep = roots
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, w)| (z - w).norm())
            .fold(f64::INFINITY, f64::min)
            .min(1.0);
        let im = if z.im.abs() < 1e-12 { Rat::zero() } else { rat_near(z.im) };
        let center = Complex::new(rat_near(z.re), im);
        let mut found = None;
        for frac in [1e-6, 1e-4, 1e-2, 0.1, 0.3] {
            let radius = rat_above((sep * frac).max(1e-12));
            if schur::count_in_disc(p, &center, &radius) == Some(1) {
                found = Some(radius);
                break;
            }
        }
        let radius = found.ok_or_else(|| {
            Error::Invariant(format!("could not isolate conjugate near {z}"))
        })?;
        out.push(ConjugateBox { re: center.re, im: center.im, radius });
    }
    Ok(out)
}

/// Certified lower bound for `|∏_{i<j} (β_i - β_j)|` from isolating discs.
pub fn vandermonde_lower(boxes: &[ConjugateBox]) -> Rat {
    let mut prod = Rat::one();
    for i in 0..boxes.len() {
        for j in i + 1..boxes.len() {
            let dr = &boxes[i].re - &boxes[j].re;
            let di = &boxes[i].im - &boxes[j].im;
            let dist = sqrt_lower(&(&dr * &dr + &di * &di), 64);
            let gap = dist - &boxes[i].radius - &boxes[j].radius;
            assert!(gap.is_positive(), "isolating discs overlap");
            prod *= gap;
        }
    }
    prod
}

/// Certified upper bound for π.
pub fn pi_upper() -> Rat {
    ratio(355, 113)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certify_examples() {
        let p = PisotNumber::plastic();
        let (lo, hi) = p.enclosure(40);
        assert!(lo >= ratio(13247, 10000) && hi <= ratio(13248, 10000));
        assert_eq!(p.floor(), 1);
        assert_eq!((p.real_embeddings(), p.complex_pairs()), (1, 1));
        assert!(p.eta_conj() < &rat(1));

        let two = PisotNumber::integer(2).unwrap();
        assert_eq!(two.floor(), 2);
        assert!(two.conjugates().is_empty());

        assert!(matches!(PisotNumber::parse("x^2-2"), Err(Error::NotPisot(_))));
        assert!(matches!(PisotNumber::parse("x^2+1"), Err(Error::NoRealRootAboveOne)));
        assert!(matches!(PisotNumber::parse("x^2-3"), Err(Error::NotPisot(_))));

        let q = PisotNumber::parse("x^2-3x+1").unwrap();
        assert!(q.eta_conj() < &ratio(39, 100));
        assert_eq!(q.floor(), 2);
    }

    #[test]
    fn salem_rejected() {
        // Lehmer's polynomial is degree 10; a degree 4 Salem number instead
        let r = PisotNumber::parse("x^4-x^3-x^2-x+1");
        assert!(matches!(r, Err(Error::NotPisot(_))));
    }

    #[test]
    fn vandermonde_golden() {
        let g = PisotNumber::golden();
        let mut boxes = vec![g.dominant_box(60)];
        boxes.extend(g.conjugates().iter().cloned());
        let v = to_f64(&vandermonde_lower(&boxes));
        assert!(v <= 5f64.sqrt() && v > 5f64.sqrt() - 1e-4);
    }
}
