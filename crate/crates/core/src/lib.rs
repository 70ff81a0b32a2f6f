pub mod algebraic;
pub mod beta;
pub mod error;
pub mod generators;
pub mod normality;
pub mod poly;
pub mod real;
pub mod schur;

pub use error::{Error, Result};
