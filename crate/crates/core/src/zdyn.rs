//! Critical-orbit arithmetic for quadratic maps over ℤ: discriminant square
//! classes, rigid divisibility, iterate irreducibility, maximality
//! certificates, family classification and the Wieferich-style prime scan.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numpoly::arith::{
    bigint_mod_u64, is_square, is_square_int, is_twice_square, primes_up_to, rat_mod_u64, strip_common_primes, vp,
    vp_int, BigRat,
};
use crate::numpoly::{Integers, PolyRing, ZPoly};

/// Primes up to this bound are searched for explicit witnesses.
pub const TRIAL_BOUND: u64 = 1_000_000;

/// Primes up to this bound are tried for irreducibility modulo p.
pub const IRREDUCIBILITY_PRIME_BOUND: u64 = 1_000;

const SCAN_BLOCK: usize = 4096;

/// x ↦ ax² + bx + c with a ≠ 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticMap {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl QuadraticMap {
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::precondition("leading coefficient a must be nonzero"));
        }
        Ok(QuadraticMap { a, b, c })
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into())
    }

    /// x² + k.
    pub fn x2_plus(k: i64) -> Self {
        Self::from_i64(1, 0, k).unwrap()
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn is_monic(&self) -> bool {
        self.a.is_one()
    }

    /// γ = −b/(2a).
    pub fn critical_point(&self) -> BigRat {
        BigRat::new(-&self.b, &self.a * 2)
    }

    pub fn eval(&self, x: &BigRat) -> BigRat {
        let a = BigRat::from_integer(self.a.clone());
        let b = BigRat::from_integer(self.b.clone());
        let c = BigRat::from_integer(self.c.clone());
        (a * x + b) * x + c
    }

    /// b² − 4ac.
    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn poly(&self) -> ZPoly {
        PolyRing::new(Integers).poly(vec![self.c.clone(), self.b.clone(), self.a.clone()])
    }

    /// Coefficients reduced mod p as (a, b, c).
    pub fn reduce(&self, p: u64) -> (u64, u64, u64) {
        (bigint_mod_u64(&self.a, p), bigint_mod_u64(&self.b, p), bigint_mod_u64(&self.c, p))
    }

    /// The orbit x, φ(x), ..., φ^n(x) (n + 1 terms).
    pub fn orbit(&self, x: &BigRat, n: usize) -> Vec<BigRat> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(x.clone());
        for i in 0..n {
            let next = self.eval(&out[i]);
            out.push(next);
        }
        out
    }
}

impl fmt::Display for QuadraticMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.a, self.b, self.c)
    }
}

impl FromStr for QuadraticMap {
    type Err = Error;

    /// Parses "a,b,c".
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::precondition(format!("expected a,b,c but got {s:?}")));
        }
        let mut coeffs = Vec::with_capacity(3);
        for part in parts {
            coeffs.push(
                part.parse::<BigInt>()
                    .map_err(|_| Error::precondition(format!("not an integer: {part:?}")))?,
            );
        }
        let c = coeffs.pop().unwrap();
        let b = coeffs.pop().unwrap();
        let a = coeffs.pop().unwrap();
        Self::new(a, b, c)
    }
}

/// [φ(γ), ..., φ^N(γ)].
pub fn critical_orbit(phi: &QuadraticMap, n_max: usize) -> Vec<BigRat> {
    let mut orbit = phi.orbit(&phi.critical_point(), n_max);
    orbit.remove(0);
    orbit
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiscSquareClass {
    Square,
    NonSquare,
    /// Disc φⁿ = 0: the iterate has a repeated root. Counts as a square.
    Zero,
}

impl DiscSquareClass {
    pub fn is_square(self) -> bool {
        !matches!(self, DiscSquareClass::NonSquare)
    }
}

fn class_of(x: &BigRat) -> DiscSquareClass {
    if x.is_zero() {
        DiscSquareClass::Zero
    } else if is_square(x) {
        DiscSquareClass::Square
    } else {
        DiscSquareClass::NonSquare
    }
}

/// Square class of Disc φⁿ. Level 1 is b² − 4ac; for n ≥ 2 the recursion
/// Disc φⁿ = a^{2^{2n−1}−1} 2^{2ⁿ} (Disc φⁿ⁻¹)² φⁿ(γ) leaves the class of
/// a·φⁿ(γ), which is that of φⁿ(γ) when φ is monic.
pub fn disc_square_class(phi: &QuadraticMap, n: usize) -> Result<DiscSquareClass> {
    if n == 0 {
        return Err(Error::precondition("level must be at least 1"));
    }
    if n == 1 {
        return Ok(class_of(&BigRat::from_integer(phi.discriminant())));
    }
    let orbit = critical_orbit(phi, n);
    // a repeated root at any level persists through the (Disc φⁿ⁻¹)² factor
    if phi.discriminant().is_zero() || orbit[1..].iter().any(Zero::is_zero) {
        return Ok(DiscSquareClass::Zero);
    }
    let v = &orbit[n - 1];
    Ok(class_of(&(BigRat::from_integer(phi.a.clone()) * v)))
}

/// The right-hand side of the discriminant recursion at level n ≥ 2 given
/// Disc φⁿ⁻¹.
pub fn disc_recursion(phi: &QuadraticMap, n: usize, disc_prev: &BigInt) -> BigRat {
    assert!(n >= 2, "the recursion starts at level 2");
    let a_exp = (1u64 << (2 * n - 1)) - 1;
    let a_pow = num_traits::pow(phi.a.clone(), a_exp as usize);
    let two_pow = BigInt::one() << (1usize << n);
    let v = critical_orbit(phi, n).pop().unwrap();
    BigRat::from_integer(a_pow * two_pow * disc_prev * disc_prev) * v
}

/// Both rigid divisibility properties of cₙ = φⁿ(0) for φ = x² + k:
/// gcd(c_m, c_n) = |c_{gcd(m,n)}| and v_p(c_n) = e > 0 ⇒ v_p(c_{mn}) = e,
/// for 1 ≤ m, n ≤ N and primes below [`TRIAL_BOUND`] dividing a term.
pub fn rigid_divisibility_check(phi: &QuadraticMap, n_max: usize) -> Result<bool> {
    if !phi.is_monic() || !phi.b.is_zero() {
        return Err(Error::precondition("rigid divisibility is checked for x² + k only"));
    }
    if n_max < 2 {
        return Err(Error::precondition("need N ≥ 2"));
    }
    let c: Vec<BigInt> = critical_orbit(phi, n_max).into_iter().map(|v| v.numer().clone()).collect();
    let term = |n: usize| &c[n - 1];
    for m in 1..=n_max {
        for n in m..=n_max {
            if term(m).gcd(term(n)) != term(m.gcd(&n)).abs() {
                return Ok(false);
            }
        }
    }
    let k = phi.c.clone();
    let primes = primes_up_to(TRIAL_BOUND);
    let ok = primes.par_chunks(SCAN_BLOCK).all(|block| {
        block.iter().all(|&p| {
            let k = bigint_mod_u64(&k, p);
            let mut x = 0u64;
            let mut divides = vec![false; n_max + 1];
            for slot in divides.iter_mut().skip(1) {
                x = (x * x + k) % p;
                *slot = x == 0;
            }
            (1..=n_max).filter(|&n| divides[n]).all(|n| {
                let e = vp_int(term(n), p);
                (2..=n_max / n).all(|m| vp_int(term(m * n), p) == e)
            })
        })
    });
    Ok(ok)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IrreducibilityReason {
    /// φ irreducible and a·φᵐ(γ) a non-square for 2 ≤ m ≤ n.
    OrbitCriterion,
    /// φⁿ is irreducible modulo this prime.
    ModPrime(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Certified(IrreducibilityReason),
    Reducible,
    Unknown,
}

/// Irreducibility of φ^n modulo an odd prime p ∤ a, decided by the chain of
/// quadratic characters: −a·φ(γ) and a·φᵐ(γ) for 2 ≤ m ≤ n all non-squares
/// mod p. Over a finite field this chain is equivalent to irreducibility.
pub fn iterate_irreducible_mod_p(phi: &QuadraticMap, n: usize, p: u64) -> Option<bool> {
    let (a, _, _) = phi.reduce(p);
    if p == 2 || a == 0 {
        return None;
    }
    let orbit = critical_orbit(phi, n);
    let legendre_minus_one = |x: u64| crate::numpoly::arith::pow_mod(x, (p - 1) / 2, p) == p - 1;
    for (i, v) in orbit.iter().enumerate() {
        let v = rat_mod_u64(v, p)?;
        let t = if i == 0 { (p - a) * v % p } else { a * v % p };
        if !legendre_minus_one(t) {
            return Some(false);
        }
    }
    Some(true)
}

/// Irreducibility status of φⁿ for n = 1..=N.
pub fn iterates_irreducible(phi: &QuadraticMap, n_max: usize) -> Vec<Irreducibility> {
    let mut out = Vec::with_capacity(n_max);
    if n_max == 0 {
        return out;
    }
    if is_square_int(&phi.discriminant()) {
        out.resize(n_max, Irreducibility::Reducible);
        return out;
    }
    out.push(Irreducibility::Certified(IrreducibilityReason::OrbitCriterion));
    let a = BigRat::from_integer(phi.a.clone());
    let orbit = critical_orbit(phi, n_max);
    let mut chain_intact = true;
    for n in 2..=n_max {
        let v = &a * &orbit[n - 1];
        chain_intact &= !v.is_zero() && !is_square(&v);
        if chain_intact {
            out.push(Irreducibility::Certified(IrreducibilityReason::OrbitCriterion));
            continue;
        }
        let witness = primes_up_to(IRREDUCIBILITY_PRIME_BOUND)
            .into_iter()
            .find(|&p| iterate_irreducible_mod_p(phi, n, p) == Some(true));
        out.push(match witness {
            Some(p) => Irreducibility::Certified(IrreducibilityReason::ModPrime(p)),
            None => Irreducibility::Unknown,
        });
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaximalityStatus {
    CertifiedMaximal,
    NoCertificate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Witness {
    /// An explicit prime meeting the valuation conditions.
    Prime(u64),
    /// The stripped cofactor is neither a square nor twice a square, so some
    /// prime dividing it to an odd power meets the conditions.
    NonSquareCofactor,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalityReport {
    pub n: usize,
    pub status: MaximalityStatus,
    pub witness: Witness,
    /// Numerator of φⁿ(γ) with every prime shared with 2a or an earlier term
    /// removed.
    pub cofactor: BigInt,
}

impl MaximalityReport {
    pub fn cofactor_digits(&self) -> usize {
        if self.cofactor.is_zero() {
            1
        } else {
            self.cofactor.abs().to_str_radix(10).len()
        }
    }
}

/// For each level 1..=N, the primes (ascending, below [`TRIAL_BOUND`], not
/// in `excluded`) whose first zero of the orbit of `start` mod p is at that
/// level.
fn first_zero_levels(phi: &QuadraticMap, start: &BigRat, n_max: usize, excluded: &BigInt) -> Vec<Vec<u64>> {
    let primes = primes_up_to(TRIAL_BOUND);
    let merged = primes
        .par_chunks(SCAN_BLOCK)
        .map(|block| {
            let mut levels = vec![Vec::new(); n_max + 1];
            for &p in block {
                if bigint_mod_u64(excluded, p) == 0 {
                    continue;
                }
                let Some(mut x) = rat_mod_u64(start, p) else {
                    continue;
                };
                let (a, b, c) = phi.reduce(p);
                for level in levels.iter_mut().skip(1) {
                    x = ((a * x % p + b) % p * x + c) % p;
                    if x == 0 {
                        level.push(p);
                        break;
                    }
                }
            }
            levels
        })
        .reduce(
            || vec![Vec::new(); n_max + 1],
            |mut acc, part| {
                for (dst, src) in acc.iter_mut().zip(part) {
                    dst.extend(src);
                }
                acc
            },
        );
    merged
        .into_iter()
        .map(|mut v| {
            v.sort_unstable();
            v
        })
        .collect()
}

/// Witness search shared by maximality certificates and the Wieferich scan:
/// a prime p ∤ `excluded` with v_p(orbit[n]) odd and v_p(orbit[m]) = 0 for
/// 1 ≤ m < n, else the stripped-cofactor fallback.
fn level_witnesses(phi: &QuadraticMap, start: &BigRat, n_max: usize, excluded: &BigInt) -> Vec<(Witness, BigInt)> {
    let orbit = phi.orbit(start, n_max);
    let candidates = first_zero_levels(phi, start, n_max, excluded);
    let mut history = excluded.abs();
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let value = &orbit[n];
        let cofactor = strip_common_primes(value.numer(), &history);
        let explicit = candidates[n].iter().copied().find(|&p| vp(value, p).is_odd());
        let witness = match explicit {
            Some(p) => Witness::Prime(p),
            None if value.is_zero() => Witness::None,
            None => {
                let c = BigRat::from_integer(cofactor.clone());
                if is_square(&c) || is_twice_square(&c) {
                    Witness::None
                } else {
                    Witness::NonSquareCofactor
                }
            }
        };
        out.push((witness, cofactor));
        if !value.numer().is_zero() {
            history *= value.numer().abs();
        }
    }
    out
}

fn excluded_for_maximality(phi: &QuadraticMap) -> BigInt {
    &phi.a * 2
}

fn require_irreducible_through(phi: &QuadraticMap, n: usize) -> Result<()> {
    for (i, s) in iterates_irreducible(phi, n).into_iter().enumerate() {
        match s {
            Irreducibility::Certified(_) => {}
            Irreducibility::Reducible => return Err(Error::ReducibleIterate { level: i + 1 }),
            Irreducibility::Unknown => {
                return Err(Error::precondition(format!("irreducibility of iterate {} is not certified", i + 1)))
            }
        }
    }
    Ok(())
}

/// Maximality certificate for Hₙ, n ≥ 2: an explicit prime p ≤ [`TRIAL_BOUND`]
/// with v_p(φⁿ(γ)) odd, v_p(φᵐ(γ)) = 0 for 1 ≤ m < n and p ∤ 2a; otherwise
/// the stripped-cofactor fallback.
pub fn maximality_certificate(phi: &QuadraticMap, n: usize) -> Result<MaximalityReport> {
    Ok(maximality_profile(phi, n)?.pop().unwrap())
}

/// Reports for every level 2..=N, sharing one prime scan.
pub fn maximality_profile(phi: &QuadraticMap, n_max: usize) -> Result<Vec<MaximalityReport>> {
    if n_max < 2 {
        return Err(Error::precondition("maximality certificates start at level 2"));
    }
    require_irreducible_through(phi, n_max)?;
    let witnesses = level_witnesses(phi, &phi.critical_point(), n_max, &excluded_for_maximality(phi));
    Ok(witnesses
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(i, (witness, cofactor))| MaximalityReport {
            n: i + 1,
            status: if witness == Witness::None {
                MaximalityStatus::NoCertificate
            } else {
                MaximalityStatus::CertifiedMaximal
            },
            witness,
            cofactor,
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WieferichStatus {
    Exists(u64),
    ExistsNonconstructive,
    NotFound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WieferichLevel {
    pub n: usize,
    pub status: WieferichStatus,
    pub cofactor: BigInt,
}

/// For n = 1..=N, whether some prime p has v_p(φⁿ(b)) odd and v_p(φᵐ(b)) = 0
/// for 1 ≤ m < n. Primes dividing a denominator of the orbit are skipped.
pub fn wieferich_scan(phi: &QuadraticMap, b: &BigRat, n_max: usize) -> Result<Vec<WieferichLevel>> {
    if !(b * BigRat::from_integer(2.into())).is_integer() {
        return Err(Error::precondition("2b must be an integer"));
    }
    let orbit = phi.orbit(b, n_max);
    for to in 1..orbit.len() {
        if let Some(from) = orbit[..to].iter().position(|x| *x == orbit[to]) {
            return Err(Error::Preperiodic { from, to });
        }
    }
    let mut excluded = b.denom().clone();
    for v in &orbit {
        excluded = excluded.lcm(v.denom());
    }
    let witnesses = level_witnesses(phi, b, n_max, &excluded);
    Ok(witnesses
        .into_iter()
        .enumerate()
        .map(|(i, (w, cofactor))| WieferichLevel {
            n: i + 1,
            status: match w {
                Witness::Prime(p) => WieferichStatus::Exists(p),
                Witness::NonSquareCofactor => WieferichStatus::ExistsNonconstructive,
                Witness::None => WieferichStatus::NotFound,
            },
            cofactor,
        })
        .collect())
}

/// k in Stoll's classes: k > 0 with k ≡ 1, 2 (mod 4), or k < 0 with k ≡ 0 (mod 4).
pub fn stoll_condition(k: i64) -> bool {
    let r = k.rem_euclid(4);
    (k > 0 && (r == 1 || r == 2)) || (k < 0 && r == 0)
}

/// One of the four monic families with known zero prime-divisor density.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyMatch {
    /// 1: x² − kx + k; 2: x² + kx − 1; 3: x² + k; 4: x² − 2kx + k.
    pub family: u8,
    pub k: BigInt,
    /// k is one of the parameters the family leaves out.
    pub excluded: bool,
}

pub fn family_classify(phi: &QuadraticMap) -> Vec<FamilyMatch> {
    if !phi.is_monic() {
        return Vec::new();
    }
    let (b, c) = (&phi.b, &phi.c);
    let mut out = Vec::new();
    let in_set = |k: &BigInt, set: &[i64]| set.iter().any(|&s| *k == BigInt::from(s));
    if *c == -b {
        out.push(FamilyMatch { family: 1, k: c.clone(), excluded: false });
    }
    if *c == BigInt::from(-1) {
        out.push(FamilyMatch { family: 2, k: b.clone(), excluded: in_set(b, &[0, 2]) });
    }
    if b.is_zero() {
        out.push(FamilyMatch { family: 3, k: c.clone(), excluded: in_set(c, &[-1]) });
    }
    if *b == -(c * BigInt::from(2)) {
        out.push(FamilyMatch { family: 4, k: c.clone(), excluded: in_set(c, &[-1, 1]) });
    }
    out
}
