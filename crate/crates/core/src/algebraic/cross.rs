use std::cmp::Ordering;

use num_traits::{One, Zero};

use super::field::FieldElement;
use crate::poly::{self, Rat, Sturm};

/// Characteristic polynomial of multiplication by `a` on Q(β), which
/// annihilates `a`. Faddeev–LeVerrier over the rationals.
pub fn annihilating_polynomial(a: &FieldElement) -> Vec<Rat> {
    let base = a.base();
    let d = base.degree();
    // column j holds the coordinates of a β^j
    let beta = FieldElement::beta(base);
    let mut col = a.clone();
    let mut m = vec![vec![Rat::zero(); d]; d];
    for j in 0..d {
        for (i, c) in col.coeffs().into_iter().enumerate() {
            m[i][j] = c;
        }
        col = &col * &beta;
    }
    let matmul = |x: &Vec<Vec<Rat>>, y: &Vec<Vec<Rat>>| -> Vec<Vec<Rat>> {
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).fold(Rat::zero(), |s, k| s + &x[i][k] * &y[k][j]))
                    .collect()
            })
            .collect()
    };
    let mut coeffs = vec![Rat::zero(); d + 1];
    coeffs[d] = Rat::one();
    let mut mk = vec![vec![Rat::zero(); d]; d];
    for k in 1..=d {
        // M_k = A M_{k-1} + c_{d-k+1} I
        let mut next = matmul(&m, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[d - k + 1];
        }
        mk = next;
        let am = matmul(&m, &mk);
        let tr = (0..d).fold(Rat::zero(), |s, i| s + &am[i][i]);
        coeffs[d - k] = -tr / poly::rat(k as i64);
    }
    coeffs
}

/// Evaluates a rational polynomial at a field element.
pub fn eval_at(p: &[Rat], a: &FieldElement) -> FieldElement {
    let mut acc = FieldElement::zero(a.base());
    for c in p.iter().rev() {
        acc = &acc * a;
        acc = &acc + &FieldElement::from_rat(a.base(), c);
    }
    acc
}

/// Exact comparison of the real values of two elements that may live in
/// different fields.
pub fn compare_cross_field(a: &FieldElement, b: &FieldElement) -> Ordering {
    if a.base() == b.base() {
        return a.try_cmp(b).expect("same base");
    }
    if let (Some(x), Some(y)) = (a.as_rat(), b.as_rat()) {
        return x.cmp(&y);
    }
    // fields of coprime degree meet only in Q, so an irrational value
    // there cannot equal the other side
    let never_equal = a.as_rat().is_some() != b.as_rat().is_some()
        || num_integer::gcd(a.base().degree(), b.base().degree()) == 1;
    let mut equal_candidate: Option<(Vec<Rat>, bool)> = None;
    let mut bits = 64;
    loop {
        let ia = a.enclose(bits);
        let ib = b.enclose(bits);
        if poly::cmp_fast(ia.hi(), ib.lo()) == Ordering::Less {
            return Ordering::Less;
        }
        if poly::cmp_fast(ia.lo(), ib.hi()) == Ordering::Greater {
            return Ordering::Greater;
        }
        if bits >= 128 && !never_equal {
            let (g, both_roots) = equal_candidate.get_or_insert_with(|| {
                let g = poly::gcd(&annihilating_polynomial(a), &annihilating_polynomial(b));
                let both = g.len() > 1 && eval_at(&g, a).is_zero() && eval_at(&g, b).is_zero();
                (poly::squarefree(&g), both)
            });
            if *both_roots {
                // a single root of g in the hull means both values coincide
                let lo = ia.lo().min(ib.lo()).clone();
                let hi = ia.hi().max(ib.hi()).clone();
                let sturm = Sturm::new(g);
                let at_lo = usize::from(poly::eval(g, &lo).is_zero());
                if sturm.count_between(&lo, &hi) + at_lo == 1 {
                    return Ordering::Equal;
                }
            }
        }
        bits *= 2;
    }
}
