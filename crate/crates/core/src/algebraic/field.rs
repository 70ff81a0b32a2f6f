use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::pisot::PisotNumber;
use crate::error::{Error, Result};
use crate::poly::{self, Rat};
use crate::real::{round_down, RealInterval};

/// Exact element `(c_0 + c_1 β + … + c_{d-1} β^{d-1}) / den` of Q(β).
#[derive(Clone)]
pub struct FieldElement {
    base: PisotNumber,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.num == other.num && self.den == other.den
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (~{:.12})", self, self.to_f64())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "b".to_string(),
                _ => format!("b^{i}"),
            };
            let coef = if i > 0 && c.is_one() {
                String::new()
            } else if i > 0 && (-c).is_one() {
                "-".to_string()
            } else if c.is_integer() {
                c.to_string()
            } else {
                format!("({c})")
            };
            let sep = if i > 0 && !coef.is_empty() && coef != "-" { "*" } else { "" };
            terms.push(format!("{coef}{sep}{mono}"));
        }
        if terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = terms[0].clone();
        for t in &terms[1..] {
            if let Some(rest) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
        f.write_str(&out)
    }
}

impl FieldElement {
    fn normalize(base: PisotNumber, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        let d = base.degree();
        // reduce modulo the monic integer minimal polynomial
        let m = base.minpoly().coeffs();
        while num.len() > d {
            let top = num.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let off = num.len() - d;
            for (j, c) in m[..d].iter().enumerate() {
                num[off + j] -= &top * c;
            }
        }
        num.resize(d, BigInt::zero());
        if den.is_negative() {
            den = -den;
            num.iter_mut().for_each(|c| *c = -&*c);
        }
        let g = num.iter().fold(den.clone(), |g, c| g.gcd(c));
        if !g.is_one() && !g.is_zero() {
            num.iter_mut().for_each(|c| *c = &*c / &g);
            den /= &g;
        }
        FieldElement { base, num, den }
    }

    pub fn from_rat(base: &PisotNumber, x: &Rat) -> Self {
        let mut num = vec![BigInt::zero(); base.degree()];
        num[0] = x.numer().clone();
        Self::normalize(base.clone(), num, x.denom().clone())
    }

    pub fn from_int(base: &PisotNumber, n: i64) -> Self {
        Self::from_rat(base, &poly::rat(n))
    }

    pub fn zero(base: &PisotNumber) -> Self {
        Self::from_int(base, 0)
    }

    pub fn one(base: &PisotNumber) -> Self {
        Self::from_int(base, 1)
    }

    /// The generator β itself.
    pub fn beta(base: &PisotNumber) -> Self {
        let mut num = vec![BigInt::zero(); base.degree() + 1];
        num[1] = BigInt::one();
        Self::normalize(base.clone(), num, BigInt::one())
    }

    /// Element with the given rational coefficients in the power basis.
    pub fn from_coeffs(base: &PisotNumber, coeffs: &[Rat]) -> Self {
        let den = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::normalize(base.clone(), num, den)
    }

    pub fn base(&self) -> &PisotNumber {
        &self.base
    }

    pub fn coeffs(&self) -> Vec<Rat> {
        self.num
            .iter()
            .map(|c| Rat::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// Rational value when the element lies in Q.
    pub fn as_rat(&self) -> Option<Rat> {
        self.num[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| Rat::new(self.num[0].clone(), self.den.clone()))
    }

    /// Whether all coefficients are integers, i.e. the element lies in Z[β].
    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.base == other.base {
            Ok(())
        } else {
            Err(Error::MixedBases)
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let num = self
            .num
            .iter()
            .zip(&o.num)
            .map(|(a, b)| a * &o.den + b * &self.den)
            .collect();
        Ok(Self::normalize(self.base.clone(), num, &self.den * &o.den))
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.try_add(&-o)
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let d = self.num.len();
        let mut num = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.num.iter().enumerate() {
                num[i + j] += a * b;
            }
        }
        Ok(Self::normalize(self.base.clone(), num, &self.den * &o.den))
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let a = poly::from_ints(&self.num);
        let m = self.base.poly();
        let (g, s, _) = poly::ext_gcd(&a, m);
        if g.len() != 1 {
            return Err(Error::Invariant("minimal polynomial is not irreducible".into()));
        }
        // s a = 1 mod m, and the element is a / den
        let inv = Self::from_coeffs(&self.base, &s);
        Ok(inv.scale(&Rat::from_integer(self.den.clone())))
    }

    pub fn try_div(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        self.try_mul(&o.inverse()?)
    }

    pub fn scale(&self, s: &Rat) -> Self {
        let num = self.num.iter().map(|c| c * s.numer()).collect();
        Self::normalize(self.base.clone(), num, &self.den * s.denom())
    }

    pub fn add_int(&self, n: i64) -> Self {
        let mut num = self.num.clone();
        num[0] += &self.den * n;
        Self::normalize(self.base.clone(), num, self.den.clone())
    }

    /// β^k for any integer k.
    pub fn beta_pow(base: &PisotNumber, k: i64) -> Self {
        let b = Self::beta(base);
        let b = if k < 0 { b.inverse().expect("β is nonzero") } else { b };
        b.pow(k.unsigned_abs())
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(&self.base);
        let mut sq = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            e >>= 1;
        }
        acc
    }

    /// Enclosure of the value at the dominant root, using an isolating
    /// interval of width `2^-bits` for β.
    pub fn enclose(&self, bits: u32) -> RealInterval {
        if let Some(r) = self.as_rat() {
            return RealInterval::point(r);
        }
        // cancellation between large coordinates costs their excess size
        let top = self.num.iter().map(|c| c.bits()).max().unwrap_or(0);
        let excess = top.saturating_sub(self.den.bits()) as u32 + 2 * self.num.len() as u32;
        let bits = bits + excess;
        let (lo, hi) = self.base.enclosure(bits + 8);
        // Horner in fixed point with scale 2^w on a positive enclosure of β
        let w = bits as usize + 32;
        let l = (lo.numer() << w).div_floor(lo.denom());
        let h = -((-(hi.numer() << w)).div_floor(hi.denom()));
        let mut a = BigInt::zero();
        let mut b = BigInt::zero();
        for c in self.num.iter().rev() {
            let pa = if a.is_negative() { &a * &h } else { &a * &l };
            let pb = if b.is_negative() { &b * &l } else { &b * &h };
            let c = c << w;
            a = (pa >> w) + &c;
            b = -((-pb) >> w) + c;
        }
        let lo = poly::dyadic(a.div_floor(&self.den), w);
        let hi = poly::dyadic(-((-b).div_floor(&self.den)), w);
        RealInterval::new(lo, hi)
    }

    pub fn to_f64(&self) -> f64 {
        self.enclose(64).mid_f64()
    }

    pub fn signum(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let mut bits = 64;
        loop {
            let iv = self.enclose(bits);
            if iv.is_positive() {
                return 1;
            }
            if iv.is_negative() {
                return -1;
            }
            bits *= 2;
        }
    }

    pub fn try_cmp(&self, o: &Self) -> Result<Ordering> {
        self.check(o)?;
        Ok(self.cmp_same(o))
    }

    fn cmp_same(&self, o: &Self) -> Ordering {
        if self.num == o.num && self.den == o.den {
            return Ordering::Equal;
        }
        // cheap separation first
        let a = self.enclose(64);
        let b = o.enclose(64);
        match a.lt(&b) {
            Some(true) => return Ordering::Less,
            Some(false) if a.lo() > b.hi() => return Ordering::Greater,
            _ => {}
        }
        (self - o).signum().cmp(&0)
    }

    pub fn cmp_rat(&self, r: &Rat) -> Ordering {
        self.cmp_same(&Self::from_rat(&self.base, r))
    }

    /// Exact floor of the value.
    pub fn floor(&self) -> BigInt {
        if let Some(r) = self.as_rat() {
            return poly::floor(&r);
        }
        let mut bits = 64;
        loop {
            let iv = self.enclose(bits);
            let fl = poly::floor(iv.lo());
            let fh = poly::floor(iv.hi());
            if fl == fh {
                return fl;
            }
            if &fl + 1 == fh {
                let n = Rat::from_integer(fh.clone());
                match self.cmp_rat(&n) {
                    Ordering::Less => return fl,
                    _ => return fh,
                }
            }
            bits *= 2;
        }
    }

    /// Value rounded to a short rational, for display.
    pub fn approx_rat(&self, bits: u32) -> Rat {
        let iv = self.enclose(bits);
        let mid = (iv.lo() + iv.hi()) / poly::rat(2);
        round_down(&mid, bits)
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $try:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            /// Panics if the operands belong to different fields.
            fn $f(self, o: &FieldElement) -> FieldElement {
                self.$try(o).expect("operands belong to different fields")
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $f(self, o: FieldElement) -> FieldElement {
                (&self).$f(&o)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            base: self.base.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}
