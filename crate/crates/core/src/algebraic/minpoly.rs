use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{self, isqrt, Rat};

/// How irreducibility of a minimal polynomial was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IrreducibilityCertificate {
    Linear,
    NoRationalRoot,
    NoQuadraticSplit,
    Assumed,
}

/// Monic integer polynomial, irreducible over the rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MinimalPolynomial {
    coeffs: Vec<BigInt>,
    certificate: IrreducibilityCertificate,
}

impl MinimalPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        Self::with_options(coeffs, false)
    }

    /// Accepts polynomials of degree above 4 when `assume_irreducible` is set.
    pub fn with_options(mut coeffs: Vec<BigInt>, assume_irreducible: bool) -> Result<Self> {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::ZeroDegree);
        }
        let lead = coeffs.last().unwrap();
        if !lead.is_one() {
            return Err(Error::NotMonic(lead.to_string()));
        }
        let certificate = check_irreducible(&coeffs, assume_irreducible)?;
        Ok(MinimalPolynomial { coeffs, certificate })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(poly::parse_int_poly(text)?)
    }

    pub fn parse_with_options(text: &str, assume_irreducible: bool) -> Result<Self> {
        Self::with_options(poly::parse_int_poly(text)?, assume_irreducible)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn certificate(&self) -> IrreducibilityCertificate {
        self.certificate
    }

    pub fn to_rat(&self) -> Vec<Rat> {
        poly::from_ints(&self.coeffs)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        poly::eval(&self.to_rat(), x)
    }

    pub fn is_reciprocal(&self) -> bool {
        let d = self.degree();
        let plus = (0..=d).all(|i| self.coeffs[i] == self.coeffs[d - i]);
        let minus = (0..=d).all(|i| self.coeffs[i] == -&self.coeffs[d - i]);
        plus || minus
    }
}

impl fmt::Display for MinimalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&poly::format_int_poly(&self.coeffs))
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut i = BigInt::one();
    while &i * &i <= n {
        if (&n % &i).is_zero() {
            out.push(i.clone());
            let j = &n / &i;
            if j != i {
                out.push(j);
            }
        }
        i += 1;
    }
    out
}

fn eval_int(c: &[BigInt], x: &BigInt) -> BigInt {
    c.iter().rev().fold(BigInt::zero(), |acc, a| acc * x + a)
}

fn check_irreducible(c: &[BigInt], assume: bool) -> Result<IrreducibilityCertificate> {
    let d = c.len() - 1;
    if d == 1 {
        return Ok(IrreducibilityCertificate::Linear);
    }
    if d > 4 {
        return if assume {
            Ok(IrreducibilityCertificate::Assumed)
        } else {
            Err(Error::IrreducibilityUnverified(d))
        };
    }
    if c[0].is_zero() {
        return Err(Error::Reducible("x".into()));
    }
    for q in divisors(&c[0]) {
        for r in [q.clone(), -q] {
            if eval_int(c, &r).is_zero() {
                let factor = poly::format_int_poly(&[-r, BigInt::one()]);
                return Err(Error::Reducible(factor));
            }
        }
    }
    if d < 4 {
        return Ok(IrreducibilityCertificate::NoRationalRoot);
    }
    // (x^2 + a x + b)(x^2 + e x + g) with b g = c0
    let (e0, e1, e2, e3) = (&c[0], &c[1], &c[2], &c[3]);
    for q in divisors(e0) {
        for b in [q.clone(), -q] {
            let g = e0 / &b;
            // a^2 - e3 a + (e2 - b - g) = 0
            let disc = e3 * e3 - BigInt::from(4) * (e2 - &b - &g);
            if disc.is_negative() {
                continue;
            }
            let root = isqrt(&disc);
            if &root * &root != disc {
                continue;
            }
            for sq in [root.clone(), -root.clone()] {
                let twice = e3 + sq;
                if twice.is_odd() {
                    continue;
                }
                let a: BigInt = twice / 2;
                let e = e3 - &a;
                if &a * &g + &b * &e == *e1 {
                    let f1 = poly::format_int_poly(&[b.clone(), a.clone(), BigInt::one()]);
                    let f2 = poly::format_int_poly(&[g.clone(), e, BigInt::one()]);
                    return Err(Error::Reducible(format!("({f1})({f2})")));
                }
            }
        }
    }
    Ok(IrreducibilityCertificate::NoQuadraticSplit)
}

/// Small helper for tests and the CLI.
pub fn int_coeffs(c: &[i64]) -> Vec<BigInt> {
    c.iter().map(|&x| BigInt::from(x)).collect()
}

pub(crate) fn to_f64_coeffs(c: &[BigInt]) -> Vec<f64> {
    c.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
}
