use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::algebraic::{pi_upper, vandermonde_lower, FieldElement, PisotNumber};
use crate::beta::BetaSystem;
use crate::poly::{self, rat, Rat};
use crate::real::{certified_ceil, factorial, ln_rat, RealInterval};

/// Rational upper bound for `d! |det B|^{-1} 2^{r+s-1} π^s C^{r+2s-1} + d`.
pub fn blichfeldt_bound(base: &PisotNumber) -> Rat {
    let d = base.degree();
    let r = base.real_embeddings();
    let s = base.complex_pairs();
    let mut boxes = vec![base.dominant_box(64)];
    boxes.extend(base.conjugates().iter().cloned());
    let det = vandermonde_lower(&boxes);
    let c = big_c(base);
    let mut m = Rat::from_integer(factorial(d as u64)) / det;
    m *= Rat::from_integer(BigInt::one() << (r + s - 1));
    for _ in 0..s {
        m *= pi_upper();
    }
    for _ in 0..(r + 2 * s - 1) {
        m *= &c;
    }
    m + rat(d as i64)
}

/// `1 + ⌊β⌋ / (1 - η)` with η the certified bound on the conjugate moduli.
pub fn big_c(base: &PisotNumber) -> Rat {
    rat(1) + rat(base.floor() as i64) / (rat(1) - base.eta_conj())
}

/// `max(⌈6/ε⌉, ⌈-log(δ/(2t)) 6/ε²⌉) + 1` with the natural logarithm.
pub fn k_bhs(eps: &Rat, delta: &Rat, t: u64) -> u64 {
    let a = poly::ceil(&(rat(6) / eps));
    let arg = delta / rat(2 * t as i64);
    let factor = rat(6) / (eps * eps);
    let b = certified_ceil(|bits| ln_rat(&arg, bits).neg().scale(&factor));
    a.max(b).to_u64().expect("k fits in u64") + 1
}

/// Certified enclosure of
/// `η = ε min(ε/(16 β^{-k}), 3/4) / (log(β/(β-1)) + (M+1) log β)`.
pub fn eta_interval(base: &PisotNumber, eps: &Rat, k: usize, m: usize, bits: u32) -> RealInterval {
    let beta = base.interval(bits + 8);
    let eps_i = RealInterval::point(eps.clone());
    let first = eps_i.mul(&beta.powi(k as u32)).scale(&Rat::new(1.into(), 16.into()));
    let inner = first.min(&RealInterval::point(Rat::new(3.into(), 4.into())));
    let ratio = beta.div(&beta.sub(&RealInterval::int(1)));
    let denom = ratio
        .ln(bits)
        .add(&beta.ln(bits).scale(&rat(m as i64 + 1)));
    eps_i.mul(&inner).div(&denom).round_out(bits)
}

/// Certified lower bound for η.
pub fn eta_lower(base: &PisotNumber, eps: &Rat, k: usize, m: usize) -> Rat {
    eta_interval(base, eps, k, m, 96).lo().clone()
}

/// `C = 4 |L_k| β^{M+1} β/(β-1)`.
pub fn corollary_constant(sys: &BetaSystem, k: usize, m: usize) -> FieldElement {
    let lk = sys.count_words(k);
    let beta = FieldElement::beta(sys.base());
    let frac = &beta * &beta.add_int(-1).inverse().expect("β > 1");
    let scale = Rat::from_integer(BigInt::from(lk) * 4);
    (&sys.pow(m as i64 + 1) * &frac).scale(&scale)
}

/// Constants attached to a base for given ε and k.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantsBundle {
    pub base: String,
    pub m_exact: usize,
    pub m_blichfeldt: Rat,
    pub m_blichfeldt_ceil: BigInt,
    pub c_big: Rat,
    pub eps: Rat,
    pub k: usize,
    /// Value of M used in η.
    pub m_used: usize,
    pub eta_lower: Rat,
    pub eta_upper: Rat,
    #[serde(skip)]
    pub c_corollary: FieldElement,
    pub c_corollary_approx: f64,
    pub n0: usize,
    pub words_k: BigUint,
}

impl ConstantsBundle {
    pub fn new(sys: &BetaSystem, eps: &Rat, k: usize, use_blichfeldt: bool) -> Self {
        let base = sys.base();
        let mb = blichfeldt_bound(base);
        let mb_ceil = poly::ceil(&mb);
        let m_exact = sys.m_zero();
        let m_used = if use_blichfeldt { mb_ceil.to_usize().unwrap_or(usize::MAX) } else { m_exact };
        let eta = eta_interval(base, eps, k, m_used, 96);
        let c_corollary = corollary_constant(sys, k, m_used);
        ConstantsBundle {
            base: base.to_string(),
            m_exact,
            m_blichfeldt: mb,
            m_blichfeldt_ceil: mb_ceil,
            c_big: big_c(base),
            eps: eps.clone(),
            k,
            m_used,
            eta_lower: eta.lo().clone(),
            eta_upper: eta.hi().clone(),
            c_corollary_approx: c_corollary.to_f64(),
            c_corollary,
            n0: m_used + k,
            words_k: sys.count_words(k),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;
    use crate::real::to_f64;

    #[test]
    fn blichfeldt_examples() {
        assert_eq!(blichfeldt_bound(&PisotNumber::integer(2).unwrap()), rat(2));
        let g = to_f64(&blichfeldt_bound(&PisotNumber::golden()));
        assert!((g - 8.472).abs() < 0.01, "{g}");
        let p = to_f64(&blichfeldt_bound(&PisotNumber::plastic()));
        assert!(p >= 6.0 && p.is_finite());
    }

    #[test]
    fn k_examples() {
        assert_eq!(k_bhs(&rat(1), &ratio(1, 2), 2), 14);
        assert_eq!(k_bhs(&ratio(1, 3), &ratio(1, 100), 3), 347);
        assert!(k_bhs(&ratio(1, 2), &ratio(1, 200), 2) >= k_bhs(&ratio(1, 2), &ratio(1, 100), 2));
    }

    #[test]
    fn eta_examples() {
        let two = PisotNumber::integer(2).unwrap();
        let a = eta_interval(&two, &ratio(1, 2), 1, 0, 80);
        let expect = (1.0 / 32.0) / (2.0 * 2f64.ln());
        assert!(to_f64(a.lo()) <= expect && expect <= to_f64(a.hi()));
        assert!((expect - 0.02254).abs() < 1e-5);
        let b = eta_interval(&two, &rat(1), 5, 0, 80);
        assert!((b.mid_f64() - 0.5410).abs() < 1e-4);
    }
}
