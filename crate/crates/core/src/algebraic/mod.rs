//! Pisot numbers and exact arithmetic in Q(β).

mod cross;
mod field;
mod minpoly;
mod pisot;

pub use cross::{annihilating_polynomial, compare_cross_field, eval_at};
pub use field::FieldElement;
pub use minpoly::{int_coeffs, IrreducibilityCertificate, MinimalPolynomial};
pub use pisot::{pi_upper, sqrt_lower, sqrt_upper, vandermonde_lower, ConjugateBox, PisotNumber};
