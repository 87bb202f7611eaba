//! Elliptic curves in long Weierstrass form: reduction mod p, point orders,
//! the density of primes at which a rational point has odd order, and the
//! ℓ-adic Haar integral that predicts it.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chebotarev::{sweep, DensityEstimate, Outcome};
use crate::error::{Error, Result};
use crate::numpoly::arith::{bigint_mod_u64, factor_u64, inv_mod, is_square_int, mul_mod, primes_up_to, rat_mod_u64};
use crate::numpoly::{discriminant, Fq, Integers, PolyRing};

/// y² + a₁xy + a₃y = x³ + a₂x² + a₄x + a₆.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassCurve {
    pub a1: BigInt,
    pub a2: BigInt,
    pub a3: BigInt,
    pub a4: BigInt,
    pub a6: BigInt,
}

impl WeierstrassCurve {
    pub fn new(a: [i64; 5]) -> Result<Self> {
        Self::from_bigints(a.map(BigInt::from))
    }

    pub fn from_bigints([a1, a2, a3, a4, a6]: [BigInt; 5]) -> Result<Self> {
        let e = WeierstrassCurve { a1, a2, a3, a4, a6 };
        if e.discriminant().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(e)
    }

    fn coeffs(&self) -> [&BigInt; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    pub fn b2(&self) -> BigInt {
        &self.a1 * &self.a1 + 4 * &self.a2
    }

    pub fn b4(&self) -> BigInt {
        2 * &self.a4 + &self.a1 * &self.a3
    }

    pub fn b6(&self) -> BigInt {
        &self.a3 * &self.a3 + 4 * &self.a6
    }

    pub fn b8(&self) -> BigInt {
        let a1sq = &self.a1 * &self.a1;
        &a1sq * &self.a6 + 4 * &self.a2 * &self.a6 - &self.a1 * &self.a3 * &self.a4 + &self.a2 * &self.a3 * &self.a3
            - &self.a4 * &self.a4
    }

    pub fn discriminant(&self) -> BigInt {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        -&b2 * &b2 * &b8 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }

    pub fn has_good_reduction(&self, p: u64) -> bool {
        p != 2 && bigint_mod_u64(&self.discriminant(), p) != 0
    }

    pub fn reduce(&self, p: u64) -> Result<CurveFp> {
        if !self.has_good_reduction(p) {
            return Err(Error::BadReduction { p });
        }
        let a = self.coeffs().map(|c| bigint_mod_u64(c, p));
        Ok(CurveFp { p, a })
    }

    pub fn contains(&self, pt: &RationalPoint) -> bool {
        match pt {
            Point::Infinity => true,
            Point::Affine(x, y) => on_curve(&Rationals, &self.coeffs().map(|c| BigRational::from(c.clone())), x, y),
        }
    }

    pub fn add(&self, p: &RationalPoint, q: &RationalPoint) -> RationalPoint {
        add_points(&Rationals, &self.coeffs().map(|c| BigRational::from(c.clone())), p, q)
    }

    pub fn neg(&self, p: &RationalPoint) -> RationalPoint {
        neg_point(&Rationals, &self.coeffs().map(|c| BigRational::from(c.clone())), p)
    }

    pub fn multiple(&self, p: &RationalPoint, k: i64) -> RationalPoint {
        let a = self.coeffs().map(|c| BigRational::from(c.clone()));
        let base = if k < 0 { neg_point(&Rationals, &a, p) } else { p.clone() };
        scalar_mul(&Rationals, &a, &base, k.unsigned_abs())
    }

    /// The 2-division cubic 4x³ + b₂x² + 2b₄x + b₆ obtained by completing
    /// the square in y.
    pub fn two_division_cubic(&self) -> [BigInt; 4] {
        [self.b6(), 2 * self.b4(), self.b2(), BigInt::from(4)]
    }
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{},{}", self.a1, self.a2, self.a3, self.a4, self.a6)
    }
}

impl FromStr for WeierstrassCurve {
    type Err = Error;

    /// "a1,a2,a3,a4,a6".
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<BigInt> = s
            .split(',')
            .map(|t| t.trim().parse::<BigInt>().map_err(|e| Error::precondition(format!("bad coefficient {t:?}: {e}"))))
            .collect::<Result<_>>()?;
        let a: [BigInt; 5] =
            parts.try_into().map_err(|_| Error::precondition("a curve needs five coefficients a1,a2,a3,a4,a6"))?;
        Self::from_bigints(a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point<E> {
    Infinity,
    Affine(E, E),
}

pub type RationalPoint = Point<BigRational>;
pub type PointFp = Point<u64>;

impl RationalPoint {
    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::Affine(BigRational::from_integer(x.into()), BigRational::from_integer(y.into()))
    }

    /// "x,y" with rational coordinates such as "1/4,-3/8", or "O".
    pub fn parse(s: &str) -> Result<Self> {
        if s.trim() == "O" {
            return Ok(Point::Infinity);
        }
        let coords: Vec<BigRational> = s
            .split(',')
            .map(|t| t.trim().parse::<BigRational>().map_err(|e| Error::precondition(format!("bad coordinate {t:?}: {e}"))))
            .collect::<Result<_>>()?;
        match <[BigRational; 2]>::try_from(coords) {
            Ok([x, y]) => Ok(Point::Affine(x, y)),
            Err(_) => Err(Error::precondition("a point needs two coordinates x,y")),
        }
    }
}

trait Field {
    type E: Clone + PartialEq;
    fn zero(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn small(&self, k: i64) -> Self::E;
}

struct Rationals;

impl Field for Rationals {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn small(&self, k: i64) -> BigRational {
        BigRational::from_integer(k.into())
    }
}

struct Fp(u64);

impl Field for Fp {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.0 as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.0 as u128 - *b as u128) % self.0 as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.0)
    }
    fn inv(&self, a: &u64) -> u64 {
        inv_mod(*a, self.0).expect("inverse of a nonzero residue")
    }
    fn small(&self, k: i64) -> u64 {
        k.rem_euclid(self.0 as i64) as u64
    }
}

fn on_curve<F: Field>(f: &F, [a1, a2, a3, a4, a6]: &[F::E; 5], x: &F::E, y: &F::E) -> bool {
    let lhs = f.mul(y, &f.add(&f.add(y, &f.mul(a1, x)), a3));
    let x2 = f.mul(x, x);
    let rhs = f.add(&f.add(&f.mul(&x2, &f.add(x, a2)), &f.mul(a4, x)), a6);
    lhs == rhs
}

fn neg_point<F: Field>(f: &F, [a1, _, a3, _, _]: &[F::E; 5], p: &Point<F::E>) -> Point<F::E> {
    match p {
        Point::Infinity => Point::Infinity,
        Point::Affine(x, y) => {
            let ny = f.sub(&f.sub(&f.zero(), y), &f.add(&f.mul(a1, x), a3));
            Point::Affine(x.clone(), ny)
        }
    }
}

fn add_points<F: Field>(f: &F, a: &[F::E; 5], p: &Point<F::E>, q: &Point<F::E>) -> Point<F::E> {
    let [a1, a2, a3, a4, _] = a;
    let (x1, y1, x2, y2) = match (p, q) {
        (Point::Infinity, _) => return q.clone(),
        (_, Point::Infinity) => return p.clone(),
        (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
    };
    if *q == neg_point(f, a, p) {
        return Point::Infinity;
    }
    let lambda = if x1 == x2 {
        // tangent: (3x² + 2a₂x + a₄ − a₁y) / (2y + a₁x + a₃)
        let num = f.sub(
            &f.add(&f.add(&f.mul(&f.small(3), &f.mul(x1, x1)), &f.mul(&f.small(2), &f.mul(a2, x1))), a4),
            &f.mul(a1, y1),
        );
        let den = f.add(&f.add(&f.mul(&f.small(2), y1), &f.mul(a1, x1)), a3);
        f.mul(&num, &f.inv(&den))
    } else {
        f.mul(&f.sub(y2, y1), &f.inv(&f.sub(x2, x1)))
    };
    let nu = f.sub(y1, &f.mul(&lambda, x1));
    let x3 = f.sub(&f.sub(&f.sub(&f.add(&f.mul(&lambda, &lambda), &f.mul(a1, &lambda)), a2), x1), x2);
    let y3 = f.sub(&f.sub(&f.zero(), &f.add(&f.mul(&f.add(&lambda, a1), &x3), &nu)), a3);
    Point::Affine(x3, y3)
}

fn scalar_mul<F: Field>(f: &F, a: &[F::E; 5], p: &Point<F::E>, mut k: u64) -> Point<F::E> {
    let mut acc = Point::Infinity;
    let mut base = p.clone();
    while k > 0 {
        if k & 1 == 1 {
            acc = add_points(f, a, &acc, &base);
        }
        k >>= 1;
        if k > 0 {
            base = add_points(f, a, &base, &base);
        }
    }
    acc
}

/// A curve with good reduction at the odd prime p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveFp {
    p: u64,
    a: [u64; 5],
}

impl CurveFp {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn contains(&self, pt: &PointFp) -> bool {
        match pt {
            Point::Infinity => true,
            Point::Affine(x, y) => on_curve(&Fp(self.p), &self.a, x, y),
        }
    }

    pub fn add(&self, p: &PointFp, q: &PointFp) -> PointFp {
        add_points(&Fp(self.p), &self.a, p, q)
    }

    pub fn neg(&self, p: &PointFp) -> PointFp {
        neg_point(&Fp(self.p), &self.a, p)
    }

    pub fn mul(&self, p: &PointFp, k: u64) -> PointFp {
        scalar_mul(&Fp(self.p), &self.a, p, k)
    }

    /// Every point, by brute force over x and y.
    pub fn points(&self) -> Vec<PointFp> {
        let mut out = vec![Point::Infinity];
        for x in 0..self.p {
            for y in 0..self.p {
                if on_curve(&Fp(self.p), &self.a, &x, &y) {
                    out.push(Point::Affine(x, y));
                }
            }
        }
        out
    }

    /// Reduction of a rational point whose coordinates are p-integral.
    pub fn reduce_point(&self, pt: &RationalPoint) -> Option<PointFp> {
        match pt {
            Point::Infinity => Some(Point::Infinity),
            Point::Affine(x, y) => Some(Point::Affine(rat_mod_u64(x, self.p)?, rat_mod_u64(y, self.p)?)),
        }
    }
}

/// Exact order by baby-step giant-step over the Hasse interval, then
/// stripping primes from the multiple found.
pub fn point_order(e: &CurveFp, pt: &PointFp) -> Result<u64> {
    if !e.contains(pt) {
        return Err(Error::NotOnCurve);
    }
    if *pt == Point::Infinity {
        return Ok(1);
    }
    let p = e.p;
    let w = 2 * (p as f64).sqrt().ceil() as u64;
    let lo = (p + 1).saturating_sub(w).max(1);
    let span = p + 1 + w - lo;
    let s = ((span + 1) as f64).sqrt().ceil() as u64;
    // mP = O with m = lo + i·s + j  ⇔  jP = −(lo·P + i·sP)
    let mut baby: HashMap<PointFp, u64> = HashMap::new();
    let mut cur = Point::Infinity;
    for j in 0..s {
        baby.entry(cur.clone()).or_insert(j);
        cur = e.add(&cur, pt);
    }
    let step = e.mul(pt, s);
    let mut giant = e.mul(pt, lo);
    let mut multiple = None;
    for i in 0..=span / s + 1 {
        if let Some(&j) = baby.get(&e.neg(&giant)) {
            multiple = Some(lo + i * s + j);
            break;
        }
        giant = e.add(&giant, &step);
    }
    let mut m = multiple.ok_or_else(|| Error::integrity(format!("no multiple of the point vanishes in the Hasse interval mod {p}")))?;
    for (l, _) in factor_u64(m) {
        while m % l == 0 && e.mul(pt, m / l) == Point::Infinity {
            m /= l;
        }
    }
    Ok(m)
}

/// Is P on a cycle of P ↦ 2P?
pub fn periodic_under_doubling(e: &CurveFp, pt: &PointFp) -> bool {
    let mut seen = HashMap::new();
    let mut cur = pt.clone();
    let mut i = 0usize;
    loop {
        if let Some(&first) = seen.get(&cur) {
            // the walk re-entered at `first`; P is periodic iff that is the start
            return first == 0;
        }
        seen.insert(cur.clone(), i);
        cur = e.add(&cur, &cur);
        i += 1;
    }
}

/// Classification of p for the odd-order experiment; 2, 3, primes of bad
/// reduction and primes dividing a denominator of α are excluded.
pub fn odd_order_outcome(e: &WeierstrassCurve, alpha: &RationalPoint, p: u64) -> Outcome {
    if p <= 3 || !e.has_good_reduction(p) {
        return Outcome::Excluded;
    }
    let curve = e.reduce(p).unwrap();
    let Some(pt) = curve.reduce_point(alpha) else {
        return Outcome::Excluded;
    };
    match point_order(&curve, &pt) {
        Ok(m) if m % 2 == 1 => Outcome::Hit,
        Ok(_) => Outcome::Miss,
        Err(_) => Outcome::Excluded,
    }
}

pub fn odd_order_density_checkpoints(
    e: &WeierstrassCurve,
    alpha: &RationalPoint,
    checkpoints: &[u64],
) -> Result<Vec<DensityEstimate>> {
    if !e.contains(alpha) {
        return Err(Error::NotOnCurve);
    }
    Ok(sweep(checkpoints, |p| odd_order_outcome(e, alpha, p)))
}

pub fn odd_order_density(e: &WeierstrassCurve, alpha: &RationalPoint, bound: u64) -> Result<DensityEstimate> {
    Ok(odd_order_density_checkpoints(e, alpha, &[bound])?[0])
}

/// (ℓ⁵ − ℓ⁴ − ℓ³ + ℓ + 1) / (ℓ⁵ − ℓ³ − ℓ² + 1) in lowest terms.
pub fn closed_form_density(l: u64) -> BigRational {
    let l = BigInt::from(l);
    let p = |k: u32| num_traits::pow(l.clone(), k as usize);
    let num = p(5) - p(4) - p(3) + &l + 1;
    let den = p(5) - p(3) - p(2) + 1;
    BigRational::new(num, den)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KummerEstimate {
    pub ell: u64,
    pub depth: u32,
    pub samples: u64,
    pub estimate: f64,
    pub stderr: f64,
    /// Fraction of samples with det(M − I) ≡ 0 mod ℓᵏ, where the integrand
    /// is truncated to ℓ^{−k}.
    pub truncated: f64,
}

fn valuation_capped(x: u64, l: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    let mut x = x;
    while x % l == 0 && v < cap {
        x /= l;
        v += 1;
    }
    v
}

fn det_mod(m: [u64; 4], modulus: u64) -> u64 {
    let ad = (m[0] as u128 * m[3] as u128 % modulus as u128) as u64;
    let bc = (m[1] as u128 * m[2] as u128 % modulus as u128) as u64;
    (ad + modulus - bc) % modulus
}

fn integrand(m: [u64; 4], l: u64, k: u32, modulus: u64) -> u32 {
    let shifted = [(m[0] + modulus - 1) % modulus, m[1], m[2], (m[3] + modulus - 1) % modulus];
    valuation_capped(det_mod(shifted, modulus), l, k)
}

const MC_CHUNK: u64 = 1 << 14;

/// Monte Carlo for ∫_{GL₂(ℤ_ℓ)} ℓ^{−ord_ℓ det(M − I)} dμ: Haar measure
/// pushes forward to the uniform measure on GL₂(ℤ/ℓᵏ), sampled by rejection.
pub fn kummer_integral_mc(l: u64, depth: u32, samples: u64, seed: u64) -> Result<KummerEstimate> {
    if !crate::numpoly::arith::is_prime_u64(l) {
        return Err(Error::precondition(format!("{l} is not prime")));
    }
    if depth == 0 || samples == 0 {
        return Err(Error::precondition("depth and sample count must be positive"));
    }
    let modulus = l
        .checked_pow(depth)
        .filter(|&m| m < 1 << 62)
        .ok_or_else(|| Error::budget(format!("{l}^{depth} does not fit in a machine word")))?;
    let chunks = samples.div_ceil(MC_CHUNK);
    let weights: Vec<f64> = (0..=depth).map(|v| (l as f64).powi(-(v as i32))).collect();
    let (sum, sumsq, trunc) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let n = MC_CHUNK.min(samples - c * MC_CHUNK);
            let (mut s, mut s2, mut t) = (0.0, 0.0, 0u64);
            let mut done = 0;
            while done < n {
                let m = [0; 4].map(|_: u64| rng.gen_range(0..modulus));
                if det_mod(m, modulus) % l == 0 {
                    continue;
                }
                let v = integrand(m, l, depth, modulus);
                let w = weights[v as usize];
                s += w;
                s2 += w * w;
                t += (v == depth) as u64;
                done += 1;
            }
            (s, s2, t)
        })
        .reduce(|| (0.0, 0.0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    let n = samples as f64;
    let mean = sum / n;
    let var = (sumsq / n - mean * mean).max(0.0);
    Ok(KummerEstimate {
        ell: l,
        depth,
        samples,
        estimate: mean,
        stderr: (var / n).sqrt(),
        truncated: trunc as f64 / n,
    })
}

/// The truncated integral by enumerating GL₂(ℤ/ℓᵏ); ℓ⁴ᵏ matrices.
pub fn kummer_integral_exact(l: u64, depth: u32) -> Result<BigRational> {
    let modulus = l.pow(depth);
    if modulus.pow(4) > 1 << 24 {
        return Err(Error::budget(format!("enumerating GL2(Z/{modulus}) is too large")));
    }
    let mut total = BigRational::zero();
    let mut count = 0u64;
    let full = BigInt::from(l).pow(depth);
    for code in 0..modulus.pow(4) {
        let m = [code % modulus, code / modulus % modulus, code / modulus.pow(2) % modulus, code / modulus.pow(3)];
        if det_mod(m, modulus) % l == 0 {
            continue;
        }
        let v = integrand(m, l, depth, modulus);
        total += BigRational::new(BigInt::from(l).pow(depth - v), full.clone());
        count += 1;
    }
    Ok(total / BigRational::from_integer(count.into()))
}

/// Rational roots of an integer cubic c₀ + c₁x + c₂x² + c₃x³ near its real
/// roots, found in floating point and confirmed exactly.
fn rational_root(c: &[BigInt; 4]) -> Option<BigRational> {
    if c[0].is_zero() {
        return Some(BigRational::zero());
    }
    let eval = |r: &BigRational| -> BigRational {
        c.iter().rev().fold(BigRational::zero(), |acc, ci| acc * r + BigRational::from(ci.clone()))
    };
    let cf: Vec<f64> = c.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
    let lead = c[3].abs();
    for root in real_cubic_roots(cf[3], cf[2], cf[1], cf[0]) {
        // a rational root n/d has d | c₃
        for d in crate::numpoly::arith::divisors(lead.to_u64()?) {
            let center = (root * d as f64).round() as i64;
            for n in center - 2..=center + 2 {
                let r = BigRational::new(n.into(), (d as i64).into());
                if eval(&r).is_zero() {
                    return Some(r);
                }
            }
        }
    }
    None
}

fn real_cubic_roots(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    // depressed cubic t³ + pt + q with x = t − b/(3a)
    let (b, c, d) = (b / a, c / a, d / a);
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    let roots = if disc > 0.0 {
        let s = disc.sqrt();
        vec![(-q / 2.0 + s).cbrt() + (-q / 2.0 - s).cbrt()]
    } else {
        let r = (-(p / 3.0).powi(3)).sqrt();
        let phi = if r == 0.0 { 0.0 } else { (-q / (2.0 * r)).clamp(-1.0, 1.0).acos() };
        let m = 2.0 * (-p / 3.0).max(0.0).sqrt();
        (0..3).map(|k| m * ((phi + 2.0 * std::f64::consts::PI * k as f64) / 3.0).cos()).collect()
    };
    roots.into_iter().map(|t| t - shift).collect()
}

/// Primes tried for a mod-p certificate that the 2-division cubic has no
/// rational root.
const ROOTLESS_PRIME_BOUND: u64 = 2000;

/// Is the mod-2 representation onto GL₂(F₂) ≅ S₃: the 2-division cubic is
/// irreducible over ℚ with non-square discriminant.
pub fn mod2_surjectivity_check(e: &WeierstrassCurve) -> Result<bool> {
    if e.discriminant().is_zero() {
        return Err(Error::SingularCurve);
    }
    let cubic = e.two_division_cubic();
    let zx = PolyRing::new(Integers);
    let disc = discriminant(&zx.poly(cubic.to_vec()))?;
    // a root mod p exists for every odd p when a rational root n/d, d | 4, does
    let rootless_somewhere = primes_up_to(ROOTLESS_PRIME_BOUND).into_iter().skip(1).any(|p| {
        let f = Fq::prime(p).unwrap();
        let ring = PolyRing::new(f);
        let g = ring.poly(cubic.iter().map(|c| bigint_mod_u64(c, p)).collect());
        !crate::numpoly::fqpoly::has_root(&ring, &g)
    });
    let irreducible = if rootless_somewhere {
        true
    } else if rational_root(&cubic).is_some() {
        false
    } else {
        return Err(Error::budget("could not decide whether the 2-division cubic has a rational root"));
    };
    Ok(irreducible && !is_square_int(&disc))
}

/// Is α outside ℓE(ℚ), given generators of E(ℚ) modulo torsion and the
/// full torsion subgroup. Coefficients are searched in a box of radius
/// [`SPAN_SEARCH_RADIUS`].
pub fn alpha_outside_ell_e(
    e: &WeierstrassCurve,
    basis: &[RationalPoint],
    torsion: &[RationalPoint],
    alpha: &RationalPoint,
    l: u64,
) -> Result<bool> {
    for pt in basis.iter().chain(torsion).chain(std::iter::once(alpha)) {
        if !e.contains(pt) {
            return Err(Error::NotOnCurve);
        }
    }
    let mut torsion: Vec<RationalPoint> = torsion.to_vec();
    if !torsion.contains(&Point::Infinity) {
        torsion.push(Point::Infinity);
    }
    let r = SPAN_SEARCH_RADIUS;
    let multiples: Vec<Vec<RationalPoint>> =
        basis.iter().map(|g| (-r..=r).map(|k| e.multiple(g, k)).collect()).collect();
    let ell_torsion: Vec<RationalPoint> = torsion.iter().map(|t| e.multiple(t, l as i64)).collect();
    let mut coeffs = vec![-r; basis.len()];
    loop {
        let combo = coeffs
            .iter()
            .zip(&multiples)
            .fold(Point::Infinity, |acc, (&k, m)| e.add(&acc, &m[(k + r) as usize]));
        // α = combo + t
        let t = e.add(alpha, &e.neg(&combo));
        if torsion.contains(&t) {
            let divisible = coeffs.iter().all(|&k| k.rem_euclid(l as i64) == 0) && ell_torsion.contains(&t);
            return Ok(!divisible);
        }
        let Some(i) = coeffs.iter().position(|&k| k < r) else {
            return Err(Error::NotInSpan);
        };
        coeffs[i] += 1;
        for k in coeffs.iter_mut().take(i) {
            *k = -r;
        }
    }
}

pub const SPAN_SEARCH_RADIUS: i64 = 12;

/// y² + y = x³ − x with the point (0, 0), which generates its Mordell–Weil
/// group (an external fact, not computed here).
pub fn flagship() -> (WeierstrassCurve, RationalPoint) {
    (WeierstrassCurve::new([0, 0, 1, -1, 0]).unwrap(), RationalPoint::from_ints(0, 0))
}

/// Group order by exhaustive count.
pub fn group_order_brute(e: &CurveFp) -> u64 {
    e.points().len() as u64
}

pub fn is_odd_order(e: &CurveFp, pt: &PointFp) -> Result<bool> {
    Ok(point_order(e, pt)?.is_odd())
}
