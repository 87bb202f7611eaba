//! The arboreal tower of f_t = x² + t over F_p(t) at 0: the sequence
//! cₙ = f_tⁿ(0), its primitive parts Φₙ = ∏_{d|n} c_d^{μ(n/d)}, and the
//! square tests that decide maximality of each level.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::numpoly::arith::{divisors, moebius};
use crate::numpoly::fqpoly::{self, FqPoly, FqPolyRing};
use crate::numpoly::{Fq, PolyRing, Ring};

/// cₙ has degree 2ⁿ⁻¹, so depth 20 means degree 2¹⁹.
pub const MAX_DEPTH: usize = 20;

/// Depth bound for the pairwise gcd checks.
pub const GCD_DEPTH: usize = 14;

/// Above this degree the square root is taken by Newton iteration.
const NEWTON_SQRT_DEGREE: usize = 1 << 10;

pub struct Tower {
    ring: FqPolyRing,
    /// cs[n - 1] = cₙ.
    cs: Vec<FqPoly>,
}

impl Tower {
    pub fn new(p: u64, depth: usize) -> Result<Self> {
        if depth > MAX_DEPTH {
            return Err(Error::budget(format!("depth {depth} exceeds the tower budget {MAX_DEPTH}")));
        }
        if depth == 0 {
            return Err(Error::precondition("depth must be at least 1"));
        }
        let ring = PolyRing::new(Fq::prime(p)?);
        let t = ring.x();
        let mut cs = vec![t.clone()];
        for _ in 1..depth {
            let prev = cs.last().unwrap();
            cs.push(ring.add(&ring.mul(prev, prev), &t));
        }
        Ok(Tower { ring, cs })
    }

    pub fn ring(&self) -> &FqPolyRing {
        &self.ring
    }

    pub fn depth(&self) -> usize {
        self.cs.len()
    }

    pub fn c(&self, n: usize) -> &FqPoly {
        &self.cs[n - 1]
    }

    /// Φₙ as an exact quotient of the μ = 1 factors by the μ = −1 factors.
    pub fn phi(&self, n: usize) -> Result<FqPoly> {
        let ring = &self.ring;
        let mut num = ring.one();
        let mut den = ring.one();
        for d in divisors(n as u64) {
            match moebius(n as u64 / d) {
                1 => num = ring.mul(&num, self.c(d as usize)),
                -1 => den = ring.mul(&den, self.c(d as usize)),
                _ => {}
            }
        }
        fqpoly::exact_div(ring, &num, &den)
    }
}

pub fn cn(p: u64, n: usize) -> Result<FqPoly> {
    Ok(Tower::new(p, n)?.c(n).clone())
}

pub fn phi_n(p: u64, n: usize) -> Result<FqPoly> {
    Tower::new(p, n)?.phi(n)
}

/// deg Φₙ = Σ_{d|n} μ(n/d)·2^{d−1}.
pub fn phi_degree(n: usize) -> i64 {
    divisors(n as u64)
        .into_iter()
        .map(|d| moebius(n as u64 / d) as i64 * (1i64 << (d - 1)))
        .sum()
}

/// Square test with the root extraction chosen by degree.
pub fn is_square_in_tower(ring: &FqPolyRing, f: &FqPoly) -> bool {
    match f.degree() {
        Some(d) if d >= NEWTON_SQRT_DEGREE => fqpoly::sqrt_newton(ring, f).is_some(),
        _ => fqpoly::sqrt_exact(ring, f).is_some(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Maximality {
    /// deg Φₙ is odd, which happens exactly when μ(n) ≠ 0.
    NonSquareCertified,
    /// deg Φₙ is even and square-root extraction failed.
    CertifiedMaximal,
    /// Square test not run.
    Unknown,
    /// Φₙ is a square.
    NotMaximal,
}

#[derive(Clone, Debug)]
pub struct TowerLevel {
    pub n: usize,
    pub mu: i8,
    pub cn: FqPoly,
    pub phi: FqPoly,
    pub maximal: Maximality,
    pub elapsed_ms: f64,
}

impl TowerLevel {
    pub fn phi_degree(&self) -> usize {
        self.phi.degree().unwrap()
    }
}

/// Maximality of each level n ≤ N: the parity certificate when it applies,
/// square-root extraction otherwise.
pub fn maximality_squarefree_report(p: u64, depth: usize) -> Result<Vec<TowerLevel>> {
    let tower = Tower::new(p, depth)?;
    let ring = tower.ring();
    (1..=depth)
        .map(|n| {
            let start = Instant::now();
            let phi = tower.phi(n)?;
            let maximal = if phi.degree().unwrap() % 2 == 1 {
                Maximality::NonSquareCertified
            } else if is_square_in_tower(ring, &phi) {
                Maximality::NotMaximal
            } else {
                Maximality::CertifiedMaximal
            };
            Ok(TowerLevel {
                n,
                mu: moebius(n as u64),
                cn: tower.c(n).clone(),
                phi,
                maximal,
                elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
            })
        })
        .collect()
}

fn gcd_depth(depth: usize) -> Result<()> {
    if depth > GCD_DEPTH {
        return Err(Error::budget(format!("depth {depth} exceeds the gcd budget {GCD_DEPTH}")));
    }
    Ok(())
}

/// m[i][j] is gcd(Φ_{i+1}, Φ_{j+1}) = 1; the diagonal is set.
pub fn pairwise_coprime_check(p: u64, depth: usize) -> Result<Vec<Vec<bool>>> {
    gcd_depth(depth)?;
    let tower = Tower::new(p, depth)?;
    let ring = tower.ring();
    let phis: Vec<FqPoly> = (1..=depth).map(|n| tower.phi(n)).collect::<Result<_>>()?;
    let mut m = vec![vec![true; depth]; depth];
    for i in 0..depth {
        for j in i + 1..depth {
            let coprime = fqpoly::gcd(ring, &phis[i], &phis[j]) == ring.one();
            m[i][j] = coprime;
            m[j][i] = coprime;
        }
    }
    Ok(m)
}

/// gcd(cₘ, cₙ) = c_{gcd(m,n)} for all m < n ≤ N, and ord_t cₙ = 1.
pub fn rigid_divisibility_fp_t(p: u64, depth: usize) -> Result<bool> {
    gcd_depth(depth)?;
    let tower = Tower::new(p, depth)?;
    let ring = tower.ring();
    for n in 1..=depth {
        if fqpoly::ord_x(tower.c(n)) != Some(1) {
            return Ok(false);
        }
        for m in 1..n {
            let g = num_integer::gcd(m, n);
            if fqpoly::gcd(ring, tower.c(m), tower.c(n)) != *tower.c(g) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numpoly::ntt;

    #[test]
    fn first_terms_over_f3() {
        let tower = Tower::new(3, 3).unwrap();
        let r = tower.ring();
        assert_eq!(*tower.c(1), r.from_i64s(&[0, 1]));
        assert_eq!(*tower.c(2), r.from_i64s(&[0, 1, 1]));
        assert_eq!(*tower.c(3), r.from_i64s(&[0, 1, 1, 2, 1]));
    }

    #[test]
    fn fourth_term_over_f5() {
        let c3 = cn(5, 3).unwrap();
        let c4 = cn(5, 4).unwrap();
        let r = PolyRing::new(Fq::prime(5).unwrap());
        assert_eq!(c4, r.add(&r.mul(&c3, &c3), &r.x()));
        assert_eq!(c4.degree(), Some(8));
    }

    #[test]
    fn small_primitive_parts() {
        let r = PolyRing::new(Fq::prime(3).unwrap());
        assert_eq!(phi_n(3, 1).unwrap(), r.x());
        assert_eq!(phi_n(3, 2).unwrap(), r.from_i64s(&[1, 1]));
        assert_eq!(phi_n(3, 6).unwrap().degree(), Some(27));
        assert_eq!(phi_degree(6), 27);
    }

    #[test]
    fn budget_and_characteristic() {
        assert!(matches!(Tower::new(3, 21), Err(Error::Budget(_))));
        assert_eq!(Tower::new(2, 3).err(), Some(Error::CharacteristicTwo));
        assert!(matches!(pairwise_coprime_check(3, 15), Err(Error::Budget(_))));
    }

    #[test]
    fn primitive_parts_reconstruct_the_sequence() {
        for p in [3u64, 5] {
            let tower = Tower::new(p, 12).unwrap();
            let r = tower.ring();
            for n in 1..=12 {
                let prod = divisors(n as u64)
                    .into_iter()
                    .fold(r.one(), |acc, d| r.mul(&acc, &tower.phi(d as usize).unwrap()));
                assert_eq!(prod, *tower.c(n), "p={p} n={n}");
            }
        }
    }

    #[test]
    fn primitive_part_degrees() {
        let tower = Tower::new(3, 14).unwrap();
        for n in 1..=14 {
            assert_eq!(tower.phi(n).unwrap().degree().unwrap() as i64, phi_degree(n));
        }
    }

    #[test]
    fn iterate_discriminants_are_non_squares() {
        let tower = Tower::new(3, 14).unwrap();
        for n in 1..=14 {
            assert!(!is_square_in_tower(tower.ring(), tower.c(n)));
        }
    }

    #[test]
    fn transform_and_schoolbook_agree_on_the_tower() {
        for p in [3u64, 5] {
            let tower = Tower::new(p, 10).unwrap();
            for n in 1..=10 {
                let c = tower.c(n).coeffs();
                assert_eq!(ntt::mul_ntt(c, c, p), ntt::schoolbook_mod(c, c, p));
            }
        }
    }

    #[test]
    fn square_roots_agree_on_squared_levels() {
        let tower = Tower::new(5, 12).unwrap();
        let r = tower.ring();
        for n in [3, 8, 12] {
            let sq = r.mul(tower.c(n), tower.c(n));
            let a = fqpoly::sqrt_newton(r, &sq).unwrap();
            let b = fqpoly::sqrt_exact(r, &sq).unwrap();
            assert_eq!(a, b);
            assert!(a == *tower.c(n) || r.add(&a, tower.c(n)).is_zero());
        }
    }

    #[test]
    fn squarefree_levels_are_parity_certified() {
        let report = maximality_squarefree_report(3, 12).unwrap();
        for level in &report {
            if level.mu != 0 {
                assert_eq!(level.maximal, Maximality::NonSquareCertified);
            } else {
                assert_eq!(level.phi_degree() % 2, 0);
                assert_eq!(level.maximal, Maximality::CertifiedMaximal, "n={}", level.n);
            }
        }
        assert_eq!(report[1].phi_degree(), 1);
    }

    #[test]
    fn primitive_parts_are_pairwise_coprime() {
        let r = PolyRing::new(Fq::prime(3).unwrap());
        assert_eq!(fqpoly::gcd(&r, &phi_n(3, 2).unwrap(), &phi_n(3, 3).unwrap()), r.one());
        for row in pairwise_coprime_check(3, 10).unwrap() {
            assert!(row.into_iter().all(|b| b));
        }
    }

    #[test]
    fn rigid_divisibility_over_fp_t() {
        let tower = Tower::new(3, 5).unwrap();
        let r = tower.ring();
        assert_eq!(fqpoly::gcd(r, tower.c(2), tower.c(3)), *tower.c(1));
        assert_eq!(fqpoly::gcd(r, tower.c(2), tower.c(4)), *tower.c(2));
        assert_eq!(fqpoly::ord_x(tower.c(5)), Some(1));
        assert!(rigid_divisibility_fp_t(3, 12).unwrap());
        assert!(rigid_divisibility_fp_t(5, 10).unwrap());
    }
}
