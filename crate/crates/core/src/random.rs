//! Random Laurent-polynomial entries for exercising identities.

use rand::Rng;

use crate::linalg::Matrix;
use crate::scalar::{LaurentPoly, Rational, Scalar};

/// Shape of random entries: each entry is a sum of monomials `c·q^k` with
/// `k` in `min_exp..=max_exp`, integer `c` in `-max_coeff..=max_coeff`, and
/// each monomial present with probability `density`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntryShape {
    pub min_exp: i32,
    pub max_exp: i32,
    pub max_coeff: i64,
    pub density: f64,
}

impl Default for EntryShape {
    fn default() -> Self {
        EntryShape { min_exp: -1, max_exp: 1, max_coeff: 2, density: 0.5 }
    }
}

pub fn random_scalar<R: Rng + ?Sized>(rng: &mut R, shape: &EntryShape) -> Scalar {
    let mut terms = Vec::new();
    for k in shape.min_exp..=shape.max_exp {
        if rng.gen_bool(shape.density) {
            let c = rng.gen_range(-shape.max_coeff..=shape.max_coeff);
            if c != 0 {
                terms.push((k, Rational::from_integer(c.into())));
            }
        }
    }
    Scalar::from_poly(LaurentPoly::from_terms(terms))
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, shape: &EntryShape) -> Matrix {
    Matrix::from_fn(n, n, |_, _| random_scalar(rng, shape))
}
