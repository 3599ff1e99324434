//! Dense univariate polynomial helpers (lowest degree first) used for
//! reducing rational functions.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

fn trim<T: Zero>(v: &mut Vec<T>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Scales a rational polynomial to a primitive integer polynomial with
/// positive leading coefficient.
pub(crate) fn primitive_int(p: &[BigRational]) -> Vec<BigInt> {
    let l = p.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let mut v: Vec<BigInt> = p.iter().map(|c| c.numer() * (&l / c.denom())).collect();
    trim(&mut v);
    make_primitive(&mut v);
    v
}

fn make_primitive(v: &mut [BigInt]) {
    let g = content(v);
    if g.is_zero() {
        return;
    }
    let neg = v.last().is_some_and(|c| c.is_negative());
    for c in v.iter_mut() {
        *c = &*c / &g;
        if neg {
            *c = -&*c;
        }
    }
}

fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (k, bc) in b.iter().enumerate() {
            r[k + shift] -= &lr * bc;
        }
        trim(&mut r);
        if r.len() > 1 {
            // keep the remainder small between steps
            make_primitive(&mut r);
        }
    }
    r
}

/// Greatest common divisor of two polynomials over Q, returned as a
/// primitive integer polynomial with positive leading coefficient.
pub(crate) fn gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigInt> {
    let mut x = primitive_int(a);
    let mut y = primitive_int(b);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        if y.len() == 1 {
            return vec![BigInt::one()];
        }
        let mut r = pseudo_rem(&x, &y);
        make_primitive(&mut r);
        x = y;
        y = r;
    }
    x
}

/// Quotient of `a` by `b` over Q; the caller guarantees divisibility.
pub(crate) fn div_exact(a: &[BigRational], b: &[BigInt]) -> Vec<BigRational> {
    let b: Vec<BigRational> = b.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() <= db {
        return Vec::new();
    }
    let mut quot = vec![BigRational::zero(); r.len() - db];
    let lb = &b[db];
    while r.len() > db {
        let dr = r.len() - 1;
        let coef = &r[dr] / lb;
        let shift = dr - db;
        for (k, bc) in b.iter().enumerate() {
            r[k + shift] -= &coef * bc;
        }
        quot[shift] = coef;
        r.pop();
        trim(&mut r);
    }
    debug_assert!(r.is_empty(), "inexact polynomial division");
    quot
}
