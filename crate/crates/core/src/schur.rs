//! Root counting in discs (Schur–Cohn / Marden) and numeric root finding.

use num_complex::Complex;
use num_traits::{One, Signed, Zero};

use crate::poly::Rat;

pub type CRat = Complex<Rat>;

fn conj(z: &CRat) -> CRat {
    Complex::new(z.re.clone(), -z.im.clone())
}

/// Number of roots of `f` strictly inside the unit disc, if the Schur–Cohn
/// recursion is regular. `None` when some `δ_k` vanishes, which happens when
/// roots lie on the circle or come in reflected pairs.
///
/// Coefficients are listed constant term first; `f` must have nonzero
/// leading coefficient.
pub fn count_in_unit_disc(f: &[CRat]) -> Option<usize> {
    let n = f.len().checked_sub(1)?;
    if f[n].is_zero() {
        return None;
    }
    let mut g: Vec<CRat> = f.to_vec();
    let mut product_sign = 1i32;
    let mut inside = 0usize;
    for m in (1..=n).rev() {
        // g has nominal degree m
        let a0 = conj(&g[0]);
        let am = g[m].clone();
        let next: Vec<CRat> = (0..m)
            .map(|j| &a0 * &g[j] - &am * conj(&g[m - j]))
            .collect();
        let delta = next[0].re.clone();
        debug_assert!(next[0].im.is_zero());
        if delta.is_zero() {
            return None;
        }
        if delta.is_negative() {
            product_sign = -product_sign;
        }
        if product_sign < 0 {
            inside += 1;
        }
        g = next;
    }
    Some(inside)
}

/// Coefficients of `f(c + r z)`.
pub fn shift_scale(f: &[CRat], c: &CRat, r: &Rat) -> Vec<CRat> {
    // Horner-style Taylor shift
    let n = f.len();
    let mut g: Vec<CRat> = f.to_vec();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = &g[j + 1] * c;
            g[j] = &g[j] + t;
        }
    }
    let mut s = Rat::one();
    for coeff in g.iter_mut() {
        *coeff = Complex::new(&coeff.re * &s, &coeff.im * &s);
        s *= r;
    }
    g
}

/// Roots of `f` in the open disc `|z - c| < r`.
pub fn count_in_disc(f: &[Rat], c: &CRat, r: &Rat) -> Option<usize> {
    let fc: Vec<CRat> = f.iter().map(|a| Complex::new(a.clone(), Rat::zero())).collect();
    count_in_unit_disc(&shift_scale(&fc, c, r))
}

/// Numeric roots by the Aberth–Ehrlich iteration.
pub fn aberth(coeffs: &[f64]) -> Vec<Complex<f64>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let a: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let radius = 1.0 + a[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut z: Vec<Complex<f64>> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex::from_polar(radius * 0.7, th)
        })
        .collect();
    let eval = |x: Complex<f64>| {
        let mut p = Complex::new(0.0, 0.0);
        let mut dp = Complex::new(0.0, 0.0);
        for c in a.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex<f64> = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let w = ratio / (Complex::new(1.0, 0.0) - ratio * s);
            z[i] -= w;
            moved = moved.max(w.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    fn c(re: Rat, im: Rat) -> CRat {
        Complex::new(re, im)
    }

    #[test]
    fn unit_disc_counts() {
        // (z - 1/2)(z - 3) = z^2 - 7/2 z + 3/2
        let f = vec![ratio(3, 2), ratio(-7, 2), rat(1)];
        assert_eq!(count_in_disc(&f, &c(rat(0), rat(0)), &rat(1)), Some(1));
        assert_eq!(count_in_disc(&f, &c(rat(0), rat(0)), &rat(4)), Some(2));
        assert_eq!(count_in_disc(&f, &c(rat(0), rat(0)), &ratio(1, 4)), Some(0));
        assert_eq!(count_in_disc(&f, &c(rat(3), rat(0)), &ratio(1, 10)), Some(1));
        // x^2 + 1 around i
        let g = vec![rat(1), rat(0), rat(1)];
        assert_eq!(count_in_disc(&g, &c(ratio(1, 10), ratio(9, 10)), &ratio(1, 2)), Some(1));
        assert_eq!(count_in_disc(&g, &c(rat(0), rat(0)), &rat(1)), None);
    }

    #[test]
    fn aberth_plastic() {
        let z = aberth(&[-1.0, -1.0, 0.0, 1.0]);
        let real = z.iter().find(|w| w.im.abs() < 1e-9).unwrap();
        assert!((real.re - 1.324717957244746).abs() < 1e-12);
        for w in &z {
            let p = w * w * w - w - 1.0;
            assert!(p.norm() < 1e-12);
        }
    }
}
