//! Dense univariate polynomials over the rationals and the integers.
//!
//! Coefficient vectors are stored constant term first. Rational polynomials
//! are kept trimmed (no trailing zero coefficients); the zero polynomial is
//! the empty vector.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn trim(p: &mut Vec<Rat>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub fn degree(p: &[Rat]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn from_ints(p: &[BigInt]) -> Vec<Rat> {
    let mut out: Vec<Rat> = p.iter().cloned().map(Rat::from_integer).collect();
    trim(&mut out);
    out
}

pub fn add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    let mut out: Vec<Rat> = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x + y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => Rat::zero(),
        })
        .collect();
    trim(&mut out);
    out
}

pub fn neg(a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|c| -c).collect()
}

pub fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    add(a, &neg(b))
}

pub fn scale(a: &[Rat], s: &Rat) -> Vec<Rat> {
    let mut out: Vec<Rat> = a.iter().map(|c| c * s).collect();
    trim(&mut out);
    out
}

pub fn mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Euclidean division; panics on a zero divisor.
pub fn divrem(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead = b[db].clone();
    let mut r: Vec<Rat> = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![Rat::zero(); r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &lead;
        let shift = dr - db;
        for (j, bj) in b.iter().enumerate().take(db + 1) {
            let t = &c * bj;
            r[shift + j] -= t;
        }
        q[shift] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    divrem(a, b).1
}

pub fn monic(a: &[Rat]) -> Vec<Rat> {
    match a.last() {
        Some(l) => {
            let inv = l.recip();
            scale(a, &inv)
        }
        None => Vec::new(),
    }
}

/// Monic greatest common divisor.
pub fn gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

/// Returns `(g, s, t)` with `s*a + t*b = g`, `g` monic.
pub fn ext_gcd(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>, Vec<Rat>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    trim(&mut r0);
    trim(&mut r1);
    let (mut s0, mut s1) = (vec![Rat::one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![Rat::one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1);
        let s2 = sub(&s0, &mul(&q, &s1));
        let t2 = sub(&t0, &mul(&q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    match r0.last().cloned() {
        Some(l) => {
            let inv = l.recip();
            (scale(&r0, &inv), scale(&s0, &inv), scale(&t0, &inv))
        }
        None => (r0, s0, t0),
    }
}

pub fn derivative(a: &[Rat]) -> Vec<Rat> {
    let mut out: Vec<Rat> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * rat(i as i64))
        .collect();
    trim(&mut out);
    out
}

pub fn eval(a: &[Rat], x: &Rat) -> Rat {
    a.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
}

pub fn squarefree(a: &[Rat]) -> Vec<Rat> {
    let g = gcd(a, &derivative(a));
    monic(&divrem(a, &g).0)
}

/// Cauchy bound: every complex root has modulus strictly below the result.
pub fn root_bound(a: &[Rat]) -> Rat {
    let d = degree(a).expect("zero polynomial has no root bound");
    let lead = a[d].abs();
    let m = a[..d]
        .iter()
        .map(|c| c.abs() / &lead)
        .fold(Rat::zero(), |m, x| if x > m { x } else { m });
    m + Rat::one()
}

fn sign_of(x: &Rat) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Sturm chain of the square-free part of a polynomial.
#[derive(Debug, Clone)]
pub struct Sturm {
    chain: Vec<Vec<Rat>>,
}

impl Sturm {
    pub fn new(p: &[Rat]) -> Self {
        let p0 = squarefree(p);
        let p1 = derivative(&p0);
        let mut chain = vec![p0, p1];
        loop {
            let n = chain.len();
            if chain[n - 1].is_empty() {
                chain.pop();
                break;
            }
            let r = rem(&chain[n - 2], &chain[n - 1]);
            if r.is_empty() {
                break;
            }
            chain.push(neg(&r));
        }
        Sturm { chain }
    }

    pub fn polynomial(&self) -> &[Rat] {
        &self.chain[0]
    }

    fn changes(signs: impl Iterator<Item = i8>) -> usize {
        let mut last = 0;
        let mut n = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                n += 1;
            }
            last = s;
        }
        n
    }

    pub fn changes_at(&self, x: &Rat) -> usize {
        Self::changes(self.chain.iter().map(|p| sign_of(&eval(p, x))))
    }

    fn changes_at_infinity(&self, positive: bool) -> usize {
        Self::changes(self.chain.iter().map(|p| {
            let d = p.len() - 1;
            let s = sign_of(&p[d]);
            if positive || d % 2 == 0 {
                s
            } else {
                -s
            }
        }))
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_between(&self, a: &Rat, b: &Rat) -> usize {
        self.changes_at(a).saturating_sub(self.changes_at(b))
    }

    pub fn count_above(&self, a: &Rat) -> usize {
        self.changes_at(a)
            .saturating_sub(self.changes_at_infinity(true))
    }

    pub fn count_real(&self) -> usize {
        self.changes_at_infinity(false)
            .saturating_sub(self.changes_at_infinity(true))
    }
}

/// Parses `x^3-x-1`, `x - 2`, `2*x^2 + 3x` and bare integers into integer
/// coefficients, constant term first.
pub fn parse_int_poly(text: &str) -> Result<Vec<BigInt>> {
    let bad = || Error::PolynomialSyntax(text.to_string());
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(bad());
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        if (ch == '+' || ch == '-') && i > start {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    let mut coeffs: Vec<BigInt> = Vec::new();
    for term in terms {
        let (negative, body) = match term.as_bytes().first() {
            Some(b'-') => (true, &term[1..]),
            Some(b'+') => (false, &term[1..]),
            _ => (false, term),
        };
        if body.is_empty() {
            return Err(bad());
        }
        let (coef, power) = match body.find('x') {
            None => (body.parse::<BigInt>().map_err(|_| bad())?, 0usize),
            Some(pos) => {
                let c = body[..pos].trim_end_matches('*');
                let c = if c.is_empty() {
                    BigInt::one()
                } else {
                    c.parse::<BigInt>().map_err(|_| bad())?
                };
                let rest = &body[pos + 1..];
                let p = if rest.is_empty() {
                    1
                } else {
                    let e = rest.strip_prefix('^').ok_or_else(bad)?;
                    e.parse::<usize>().map_err(|_| bad())?
                };
                (c, p)
            }
        };
        if coeffs.len() <= power {
            coeffs.resize(power + 1, BigInt::zero());
        }
        coeffs[power] += if negative { -coef } else { coef };
    }
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    if coeffs.is_empty() {
        return Err(bad());
    }
    Ok(coeffs)
}

pub fn format_int_poly(c: &[BigInt]) -> String {
    let mut out = String::new();
    for (i, a) in c.iter().enumerate().rev() {
        if a.is_zero() {
            continue;
        }
        let negative = a.is_negative();
        let mag = a.abs();
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push(if negative { '-' } else { '+' });
        }
        let show_coef = i == 0 || !mag.is_one();
        if show_coef {
            out.push_str(&mag.to_string());
        }
        match i {
            0 => {}
            1 => out.push('x'),
            _ => {
                out.push_str("x^");
                out.push_str(&i.to_string());
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Integer square root floor for non-negative integers.
pub fn isqrt(n: &BigInt) -> BigInt {
    num_integer::Roots::sqrt(n)
}

/// Floor of a rational.
/// Order of two rationals by cross-multiplication.
pub fn cmp_fast(a: &Rat, b: &Rat) -> std::cmp::Ordering {
    if a.denom() == b.denom() {
        return a.numer().cmp(b.numer());
    }
    (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
}

/// `m / 2^w` without a general gcd.
pub fn dyadic(m: BigInt, w: usize) -> Rat {
    let tz = m.trailing_zeros().map_or(w, |z| (z as usize).min(w));
    Rat::new_raw(m >> tz, BigInt::one() << (w - tz))
}

pub fn floor(x: &Rat) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn ceil(x: &Rat) -> BigInt {
    -((-x).numer().div_floor(x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> Vec<Rat> {
        let mut out: Vec<Rat> = v.iter().map(|&x| rat(x)).collect();
        trim(&mut out);
        out
    }

    #[test]
    fn parse_and_format() {
        let c = parse_int_poly("x^3-x-1").unwrap();
        assert_eq!(c, vec![BigInt::from(-1), BigInt::from(-1), BigInt::from(0), BigInt::from(1)]);
        assert_eq!(format_int_poly(&c), "x^3-x-1");
        assert_eq!(format_int_poly(&parse_int_poly("x - 2").unwrap()), "x-2");
        assert_eq!(format_int_poly(&parse_int_poly("2*x^2 + 3x").unwrap()), "2x^2+3x");
        assert!(parse_int_poly("x^^2").is_err());
        assert!(parse_int_poly("").is_err());
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-1, 0, 1]); // x^2 - 1
        let b = p(&[1, 1]);
        let (q, r) = divrem(&a, &b);
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_empty());
        assert_eq!(gcd(&a, &p(&[-1, 1, 0, 0])), p(&[-1, 1]));
        let (g, s, t) = ext_gcd(&p(&[1, 1]), &p(&[-1, -1, 1]));
        assert_eq!(g, p(&[1]));
        let lhs = add(&mul(&s, &p(&[1, 1])), &mul(&t, &p(&[-1, -1, 1])));
        assert_eq!(lhs, p(&[1]));
    }

    #[test]
    fn sturm_counts() {
        // (x-1)(x-2)(x+3)
        let f = mul(&mul(&p(&[-1, 1]), &p(&[-2, 1])), &p(&[3, 1]));
        let s = Sturm::new(&f);
        assert_eq!(s.count_real(), 3);
        assert_eq!(s.count_above(&ratio(3, 2)), 1);
        assert_eq!(s.count_between(&rat(0), &rat(2)), 2);
        let g = p(&[-2, 0, 1]);
        assert_eq!(Sturm::new(&g).count_real(), 2);
        assert_eq!(Sturm::new(&p(&[1, 0, 1])).count_real(), 0);
    }
}
