//! Resultants and discriminants over the integers via fraction-free
//! (Bareiss) elimination on the Sylvester matrix.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::{Poly, PolyRing};
use super::ring::Integers;
use crate::error::{Error, Result};

pub type ZPoly = Poly<BigInt>;

/// Determinant of a square integer matrix by Bareiss elimination.
pub fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

fn sylvester(f: &ZPoly, g: &ZPoly) -> Vec<Vec<BigInt>> {
    let m = f.degree().unwrap();
    let n = g.degree().unwrap();
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    // highest degree first along each row
    for i in 0..n {
        let mut row = vec![BigInt::zero(); size];
        for (k, c) in f.coeffs().iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![BigInt::zero(); size];
        for (k, c) in g.coeffs().iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Res(f, g) for nonzero f, g; the resultant of a constant c with a
/// polynomial of degree n is c^n.
pub fn resultant(f: &ZPoly, g: &ZPoly) -> Result<BigInt> {
    let (Some(m), Some(n)) = (f.degree(), g.degree()) else {
        return Err(Error::ZeroPolynomial);
    };
    if m == 0 {
        return Ok(num_traits::pow(f.coeffs()[0].clone(), n));
    }
    if n == 0 {
        return Ok(num_traits::pow(g.coeffs()[0].clone(), m));
    }
    Ok(determinant(sylvester(f, g)))
}

/// Disc f = (-1)^{d(d-1)/2} Res(f, f') / lc(f).
pub fn discriminant(f: &ZPoly) -> Result<BigInt> {
    let d = f.degree().ok_or(Error::ZeroPolynomial)?;
    if d == 0 {
        return Err(Error::ConstantPolynomial("the discriminant needs degree at least 1"));
    }
    if d == 1 {
        return Ok(BigInt::one());
    }
    let zx = PolyRing::new(Integers);
    let res = resultant(f, &zx.derivative(f))?;
    let lc = f.lc().unwrap();
    debug_assert!((&res % lc).is_zero());
    let disc = res / lc;
    Ok(if (d * (d - 1) / 2) % 2 == 1 { -disc } else { disc })
}
