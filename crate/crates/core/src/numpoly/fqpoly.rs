//! Division, gcd, irreducibility, factorization and exact square roots for
//! polynomials over a finite field of odd characteristic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::arith::factor_u64;
use super::fq::Fq;
use super::poly::{Poly, PolyRing};
use super::ring::Ring;
use crate::error::{Error, Result};

pub type FqPoly = Poly<u64>;
pub type FqPolyRing = PolyRing<Fq>;

/// Quotient and remainder; panics on a zero divisor.
pub fn divrem(ring: &FqPolyRing, f: &FqPoly, g: &FqPoly) -> (FqPoly, FqPoly) {
    let field = ring.base();
    let dg = g.degree().expect("division by the zero polynomial");
    let Some(df) = f.degree() else {
        return (Poly::zero(), Poly::zero());
    };
    if df < dg {
        return (Poly::zero(), f.clone());
    }
    let inv_lc = field.inv(*g.lc().unwrap()).unwrap();
    let g_coeffs = g.coeffs();
    let mut r = f.coeffs().to_vec();
    let mut q = vec![0u64; df - dg + 1];
    let monic_divisor = inv_lc == 1;
    for i in (0..=df - dg).rev() {
        let top = r[i + dg];
        if top == 0 {
            continue;
        }
        let c = if monic_divisor { top } else { field.mul(&top, &inv_lc) };
        q[i] = c;
        let neg_c = field.neg(&c);
        for (j, gj) in g_coeffs.iter().enumerate() {
            if *gj != 0 {
                r[i + j] = field.add(&r[i + j], &field.mul(&neg_c, gj));
            }
        }
    }
    r.truncate(dg);
    (ring.poly(q), ring.poly(r))
}

pub fn rem(ring: &FqPolyRing, f: &FqPoly, g: &FqPoly) -> FqPoly {
    divrem(ring, f, g).1
}

/// `f / g` when the division is exact.
pub fn exact_div(ring: &FqPolyRing, f: &FqPoly, g: &FqPoly) -> Result<FqPoly> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (q, r) = divrem(ring, f, g);
    if !r.is_zero() {
        return Err(Error::integrity(format!(
            "division of a degree {:?} polynomial by a degree {:?} polynomial left a remainder of degree {:?}",
            f.degree(),
            g.degree(),
            r.degree()
        )));
    }
    Ok(q)
}

pub fn monic(ring: &FqPolyRing, f: &FqPoly) -> FqPoly {
    match f.lc() {
        None => Poly::zero(),
        Some(&1) => f.clone(),
        Some(&lc) => ring.scale(f, &ring.base().inv(lc).unwrap()),
    }
}

/// Monic gcd; gcd(0, 0) = 0.
pub fn gcd(ring: &FqPolyRing, f: &FqPoly, g: &FqPoly) -> FqPoly {
    let mut a = f.clone();
    let mut b = g.clone();
    while !b.is_zero() {
        let r = rem(ring, &a, &b);
        a = b;
        b = monic(ring, &r);
    }
    monic(ring, &a)
}

pub fn mulmod(ring: &FqPolyRing, a: &FqPoly, b: &FqPoly, m: &FqPoly) -> FqPoly {
    rem(ring, &ring.mul(a, b), m)
}

/// `base^e mod m`.
pub fn powmod(ring: &FqPolyRing, base: &FqPoly, mut e: u64, m: &FqPoly) -> FqPoly {
    let mut acc = rem(ring, &ring.one(), m);
    let mut b = rem(ring, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(ring, &acc, &b, m);
        }
        e >>= 1;
        if e > 0 {
            b = mulmod(ring, &b, &b, m);
        }
    }
    acc
}

/// `x^{q^k} mod m` by repeated Frobenius.
fn frobenius_power(ring: &FqPolyRing, m: &FqPoly, k: usize) -> FqPoly {
    let q = ring.base().order();
    let mut cur = rem(ring, &ring.x(), m);
    for _ in 0..k {
        cur = powmod(ring, &cur, q, m);
    }
    cur
}

/// Rabin's test.
pub fn is_irreducible(ring: &FqPolyRing, f: &FqPoly) -> bool {
    let Some(n) = f.degree() else {
        return false;
    };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let f = monic(ring, f);
    let x = ring.x();
    let q = ring.base().order();
    // x^{q^i} mod f for i = 0..=n
    let mut frob = vec![rem(ring, &x, &f)];
    for i in 0..n {
        let next = powmod(ring, &frob[i], q, &f);
        frob.push(next);
    }
    if frob[n] != frob[0] {
        return false;
    }
    for (r, _) in factor_u64(n as u64) {
        let k = n / r as usize;
        let g = gcd(ring, &ring.sub(&frob[k], &x), &f);
        if g.degree() != Some(0) {
            return false;
        }
    }
    true
}

/// True iff `f` has a root in the coefficient field.
pub fn has_root(ring: &FqPolyRing, f: &FqPoly) -> bool {
    match f.degree() {
        None => true,
        Some(0) => false,
        Some(1) => true,
        Some(_) => {
            let f = monic(ring, f);
            let xq = frobenius_power(ring, &f, 1);
            let g = gcd(ring, &ring.sub(&xq, &ring.x()), &f);
            g.degree().is_some_and(|d| d >= 1)
        }
    }
}

/// Number of distinct roots in the coefficient field.
pub fn root_count(ring: &FqPolyRing, f: &FqPoly) -> usize {
    match f.degree() {
        None | Some(0) => 0,
        Some(_) => {
            let f = monic(ring, f);
            let xq = frobenius_power(ring, &f, 1);
            gcd(ring, &ring.sub(&xq, &ring.x()), &f).degree().unwrap_or(0)
        }
    }
}

/// Irreducible factorization: leading coefficient and monic irreducible
/// factors with multiplicities, sorted by (degree, coefficients).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: u64,
    pub factors: Vec<(FqPoly, usize)>,
}

impl Factorization {
    pub fn degrees(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .factors
            .iter()
            .flat_map(|(f, m)| std::iter::repeat(f.degree().unwrap()).take(*m))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn expand(&self, ring: &FqPolyRing) -> FqPoly {
        let mut acc = ring.constant(self.unit);
        for (f, m) in &self.factors {
            acc = ring.mul(&acc, &ring.pow(f, *m as u64));
        }
        acc
    }
}

/// Factor `f` over its coefficient field. The equal-degree splitting is
/// randomized with a ChaCha stream seeded from `seed`.
pub fn factor(ring: &FqPolyRing, f: &FqPoly, seed: u64) -> Result<Factorization> {
    let unit = *f.lc().ok_or(Error::ZeroPolynomial)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors = Vec::new();
    for (g, mult) in squarefree_decomposition(ring, &monic(ring, f)) {
        for (h, d) in distinct_degree(ring, &g) {
            for irr in equal_degree(ring, &h, d, &mut rng) {
                factors.push((irr, mult));
            }
        }
    }
    factors.sort_by(|(a, _), (b, _)| a.degree().cmp(&b.degree()).then_with(|| a.coeffs().cmp(b.coeffs())));
    Ok(Factorization { unit, factors })
}

/// Factor a polynomial already known to be a product of distinct monic
/// irreducibles all of degree `d`.
pub fn split_equal_degree(ring: &FqPolyRing, f: &FqPoly, d: usize, seed: u64) -> Vec<FqPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = equal_degree(ring, &monic(ring, f), d, &mut rng);
    out.sort_by(|a, b| a.coeffs().cmp(b.coeffs()));
    out
}

/// p-th root of a polynomial whose exponents are all multiples of p.
fn pth_root(ring: &FqPolyRing, f: &FqPoly) -> FqPoly {
    let field = ring.base();
    let p = field.characteristic() as usize;
    // c^{1/p} = c^{q/p}
    let e = field.order() / field.characteristic();
    ring.poly(f.coeffs().iter().step_by(p).map(|&c| field.pow(c, e)).collect())
}

/// Monic squarefree parts g_i with f = ∏ g_i^i, omitting trivial ones.
pub fn squarefree_decomposition(ring: &FqPolyRing, f: &FqPoly) -> Vec<(FqPoly, usize)> {
    let f = monic(ring, f);
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let p = ring.base().characteristic() as usize;
    let mut out = Vec::new();
    let df = ring.derivative(&f);
    if df.is_zero() {
        for (g, m) in squarefree_decomposition(ring, &pth_root(ring, &f)) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = gcd(ring, &f, &df);
    let mut w = divrem(ring, &f, &c).0;
    let mut i = 1;
    while w.degree().unwrap_or(0) > 0 {
        let y = gcd(ring, &w, &c);
        let z = divrem(ring, &w, &y).0;
        if z.degree().unwrap_or(0) > 0 {
            out.push((monic(ring, &z), i));
        }
        i += 1;
        w = y;
        c = divrem(ring, &c, &w).0;
    }
    if c.degree().unwrap_or(0) > 0 {
        for (g, m) in squarefree_decomposition(ring, &pth_root(ring, &c)) {
            out.push((g, m * p));
        }
    }
    merge_multiplicities(ring, out)
}

fn merge_multiplicities(ring: &FqPolyRing, parts: Vec<(FqPoly, usize)>) -> Vec<(FqPoly, usize)> {
    let mut merged: Vec<(FqPoly, usize)> = Vec::new();
    for (g, m) in parts {
        if let Some(slot) = merged.iter_mut().find(|(_, k)| *k == m) {
            slot.0 = ring.mul(&slot.0, &g);
        } else {
            merged.push((g, m));
        }
    }
    merged
}

/// Split a monic squarefree `f` into products of irreducibles of equal
/// degree: returns (product, degree) pairs.
pub fn distinct_degree(ring: &FqPolyRing, f: &FqPoly) -> Vec<(FqPoly, usize)> {
    let mut out = Vec::new();
    let mut rest = monic(ring, f);
    let q = ring.base().order();
    let x = ring.x();
    let mut h = rem(ring, &x, &rest);
    let mut d = 0;
    while let Some(deg) = rest.degree() {
        if deg < 2 * (d + 1) {
            break;
        }
        d += 1;
        h = powmod(ring, &h, q, &rest);
        let g = gcd(ring, &ring.sub(&h, &x), &rest);
        if g.degree().unwrap_or(0) > 0 {
            rest = divrem(ring, &rest, &g).0;
            h = rem(ring, &h, &rest);
            out.push((g, d));
        }
    }
    if let Some(deg) = rest.degree() {
        if deg > 0 {
            out.push((rest, deg));
        }
    }
    out
}

/// Cantor-Zassenhaus splitting for odd q.
fn equal_degree(ring: &FqPolyRing, f: &FqPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<FqPoly> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    if n == d {
        return vec![f.clone()];
    }
    let field = ring.base();
    let q = field.order();
    loop {
        let a = ring.poly((0..n).map(|_| rng.gen_range(0..q)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let g = gcd(ring, &a, f);
        if g.degree().unwrap_or(0) > 0 && g.degree() != Some(n) {
            let other = divrem(ring, f, &g).0;
            let mut left = equal_degree(ring, &g, d, rng);
            left.extend(equal_degree(ring, &other, d, rng));
            return left;
        }
        // a^{(q^d - 1)/2} = (a · a^q · ... · a^{q^{d-1}})^{(q-1)/2}
        let mut norm = a.clone();
        let mut conj = a.clone();
        for _ in 1..d {
            conj = powmod(ring, &conj, q, f);
            norm = mulmod(ring, &norm, &conj, f);
        }
        let b = powmod(ring, &norm, (q - 1) / 2, f);
        let g = gcd(ring, &ring.sub(&b, &ring.one()), f);
        if let Some(dg) = g.degree() {
            if dg > 0 && dg < n {
                let other = divrem(ring, f, &g).0;
                let mut left = equal_degree(ring, &g, d, rng);
                left.extend(equal_degree(ring, &other, d, rng));
                return left;
            }
        }
    }
}

/// Exact square root by long division from the top coefficient down; `None`
/// unless `f = g²`. The returned root has a leading coefficient with the
/// smaller packed index of its two signs.
pub fn sqrt_exact(ring: &FqPolyRing, f: &FqPoly) -> Option<FqPoly> {
    let field = ring.base();
    let Some(n) = f.degree() else {
        return Some(Poly::zero());
    };
    if n % 2 == 1 {
        return None;
    }
    let m = n / 2;
    let lead = field.sqrt(*f.lc().unwrap())?;
    let inv_two_lead = field.inv(field.mul(&2, &lead)).unwrap();
    let fc = f.coeffs();
    // g_{m-k} determined by the coefficient of x^{n-k}
    let mut g = vec![0u64; m + 1];
    g[m] = lead;
    for k in 1..=m {
        let mut acc = fc[n - k];
        // subtract Σ g_{m-i} g_{m-k+i} over 1 <= i < k
        for i in 1..k {
            let t = field.mul(&g[m - i], &g[m - k + i]);
            acc = field.add(&acc, &field.neg(&t));
        }
        g[m - k] = field.mul(&acc, &inv_two_lead);
    }
    let g = ring.poly(g);
    (ring.mul(&g, &g) == *f).then_some(g)
}

/// The same square root computed by Newton iteration on the reversed
/// polynomial as a power series, using fast multiplication; returns the same
/// normalization as [`sqrt_exact`].
pub fn sqrt_newton(ring: &FqPolyRing, f: &FqPoly) -> Option<FqPoly> {
    let field = ring.base();
    let Some(n) = f.degree() else {
        return Some(Poly::zero());
    };
    if n % 2 == 1 {
        return None;
    }
    let m = n / 2;
    let lead = field.sqrt(*f.lc().unwrap())?;
    // rev(f) = f_n + f_{n-1} x + ...; its series root has constant term `lead`
    let rev: Vec<u64> = f.coeffs().iter().rev().copied().collect();
    let inv_two = field.inv(2).unwrap();
    let mut s = vec![lead];
    let mut prec = 1;
    while prec < m + 1 {
        prec = (2 * prec).min(m + 1);
        // s <- (s + rev / s) / 2 mod x^prec
        let inv_s = series_inverse(ring, &s, prec);
        let mut quot = ring.base().poly_mul(&rev[..prec.min(rev.len())], &inv_s);
        quot.truncate(prec);
        quot.resize(prec, 0);
        let mut next = vec![0u64; prec];
        for i in 0..prec {
            let si = s.get(i).copied().unwrap_or(0);
            next[i] = field.mul(&field.add(&si, &quot[i]), &inv_two);
        }
        s = next;
    }
    s.truncate(m + 1);
    s.resize(m + 1, 0);
    s.reverse();
    let g = ring.poly(s);
    (ring.mul(&g, &g) == *f).then_some(g)
}

/// Inverse of a power series with invertible constant term, mod x^prec.
fn series_inverse(ring: &FqPolyRing, s: &[u64], prec: usize) -> Vec<u64> {
    let field = ring.base();
    let mut inv = vec![field.inv(s[0]).unwrap()];
    let mut cur = 1;
    while cur < prec {
        cur = (2 * cur).min(prec);
        // inv <- inv (2 - s inv) mod x^cur
        let mut e = field.poly_mul(&s[..cur.min(s.len())], &inv);
        e.truncate(cur);
        e.resize(cur, 0);
        for c in e.iter_mut() {
            *c = field.neg(c);
        }
        e[0] = field.add(&e[0], &2);
        let mut next = field.poly_mul(&inv, &e);
        next.truncate(cur);
        next.resize(cur, 0);
        inv = next;
    }
    inv
}

pub fn is_square_poly(ring: &FqPolyRing, f: &FqPoly) -> bool {
    sqrt_exact(ring, f).is_some()
}

/// t-adic (x-adic) valuation; `None` for zero.
pub fn ord_x(f: &FqPoly) -> Option<usize> {
    f.coeffs().iter().position(|&c| c != 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{prop_assert, prop_assert_eq, prop_assume, proptest, ProptestConfig};

    fn ring(p: u64, d: u32) -> FqPolyRing {
        PolyRing::new(Fq::extension(p, d).unwrap())
    }

    /// Irreducibility by exhaustive search for monic divisors of degree
    /// at most half, independent of the Rabin test.
    fn brute_irreducible(r: &FqPolyRing, f: &FqPoly) -> bool {
        let n = f.degree().unwrap();
        let q = r.base().order();
        for d in 1..=n / 2 {
            for idx in 0..q.pow(d as u32) {
                let mut c: Vec<u64> = Vec::new();
                let mut k = idx;
                for _ in 0..d {
                    c.push(k % q);
                    k /= q;
                }
                c.push(1);
                let g = r.poly(c);
                if rem(r, f, &g).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn small_factorizations() {
        let r5 = ring(5, 1);
        let f = r5.from_i64s(&[1, 0, 1]);
        let fac = factor(&r5, &f, 0).unwrap();
        assert_eq!(fac.factors, vec![(r5.from_i64s(&[2, 1]), 1), (r5.from_i64s(&[3, 1]), 1)]);
        let r3 = ring(3, 1);
        let f = r3.from_i64s(&[1, 0, 1]);
        assert!(is_irreducible(&r3, &f));
        assert_eq!(factor(&r3, &f, 0).unwrap().factors, vec![(f.clone(), 1)]);
        let f4 = r3.from_i64s(&[2, 0, 2, 0, 1]);
        assert!(is_irreducible(&r3, &f4));
        assert!(brute_irreducible(&r3, &f4));
    }

    #[test]
    fn rabin_agrees_with_exhaustive_divisor_search() {
        for (p, d) in [(3, 1), (5, 1), (3, 2)] {
            let r = ring(p, d);
            let q = r.base().order();
            for idx in 0..q.pow(3).min(800) {
                let mut c = Vec::new();
                let mut k = idx;
                for _ in 0..3 {
                    c.push(k % q);
                    k /= q;
                }
                c.push(1);
                let f = r.poly(c);
                assert_eq!(is_irreducible(&r, &f), brute_irreducible(&r, &f), "{f:?}");
            }
        }
    }

    #[test]
    fn repeated_and_inseparable_factors() {
        let r3 = ring(3, 1);
        // (x+1)^3 (x^2+1)^2 x
        let a = r3.pow(&r3.from_i64s(&[1, 1]), 3);
        let b = r3.pow(&r3.from_i64s(&[1, 0, 1]), 2);
        let f = r3.mul(&r3.mul(&a, &b), &r3.x());
        let fac = factor(&r3, &f, 9).unwrap();
        assert_eq!(fac.expand(&r3), f);
        assert_eq!(
            fac.factors,
            vec![(r3.x(), 1), (r3.from_i64s(&[1, 1]), 3), (r3.from_i64s(&[1, 0, 1]), 2)]
        );
    }

    #[test]
    fn roots_and_gcds() {
        let r7 = ring(7, 1);
        assert!(has_root(&r7, &r7.from_i64s(&[3, 0, 1]))); // x^2 = 4
        assert!(!has_root(&r7, &r7.from_i64s(&[4, 0, 1]))); // x^2 = 3
        assert_eq!(root_count(&r7, &r7.from_i64s(&[0, 6, 0, 1])), 3); // x^3 - x
        let r3 = ring(3, 1);
        let t = r3.x();
        let t1 = r3.from_i64s(&[1, 1]);
        assert_eq!(gcd(&r3, &t, &t1), r3.one());
    }

    #[test]
    fn polynomial_square_roots() {
        let r3 = ring(3, 1);
        let f = r3.from_i64s(&[1, 2, 1]);
        assert_eq!(sqrt_exact(&r3, &f), Some(r3.from_i64s(&[1, 1])));
        assert!(!is_square_poly(&r3, &r3.x()));
        assert!(!is_square_poly(&r3, &r3.from_i64s(&[1, 0, 2]))); // non-square leading coefficient
        let r5 = ring(5, 1);
        let g = r5.from_i64s(&[3, 1, 4, 0, 2, 1]);
        let g2 = r5.mul(&g, &g);
        let root = sqrt_exact(&r5, &g2).unwrap();
        assert!(root == g || root == r5.neg(&g));
        assert_eq!(sqrt_newton(&r5, &g2), Some(root));
        assert_eq!(sqrt_newton(&r5, &r5.add(&g2, &r5.x())), None);
    }

    #[test]
    fn newton_square_root_at_large_degree() {
        let r = ring(3, 1);
        let g = r.poly((0..6000u64).map(|i| (i * i + 1) % 3).collect());
        let g2 = r.mul(&g, &g);
        assert_eq!(sqrt_newton(&r, &g2), sqrt_exact(&r, &g2));
        assert!(sqrt_newton(&r, &g2).is_some());
    }

    fn random_poly(r: &FqPolyRing, rng: &mut ChaCha8Rng, max_deg: usize) -> FqPoly {
        let q = r.base().order();
        loop {
            let deg = rng.gen_range(1..=max_deg);
            let f = r.poly((0..=deg).map(|_| rng.gen_range(0..q)).collect());
            if f.degree().unwrap_or(0) > 0 {
                return f;
            }
        }
    }

    #[test]
    fn factorizations_recombine_over_f3_f5_f9() {
        let mut rng = ChaCha8Rng::seed_from_u64(500);
        for (p, d) in [(3, 1), (5, 1), (3, 2)] {
            let r = ring(p, d);
            for trial in 0..500 {
                let f = random_poly(&r, &mut rng, 12);
                let fac = factor(&r, &f, trial).unwrap();
                assert_eq!(fac.expand(&r), f);
                for (g, _) in &fac.factors {
                    assert!(is_irreducible(&r, g));
                    assert_eq!(g.lc(), Some(&1));
                }
            }
        }
    }

    #[test]
    fn factorization_is_seed_reproducible() {
        let r = ring(5, 1);
        let f = r.iterate(&r.from_i64s(&[2, 0, 1]), 4);
        assert_eq!(factor(&r, &f, 11).unwrap(), factor(&r, &f, 11).unwrap());
        assert_eq!(factor(&r, &f, 11).unwrap(), factor(&r, &f, 12).unwrap());
    }

    #[test]
    fn zero_polynomial_is_rejected() {
        let r = ring(3, 1);
        assert_eq!(factor(&r, &Poly::zero(), 0).unwrap_err(), Error::ZeroPolynomial);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn division_identity(a in proptest::collection::vec(0u64..7, 0..20), b in proptest::collection::vec(0u64..7, 1..10)) {
            let r = ring(7, 1);
            let f = r.poly(a);
            let g = r.poly(b);
            prop_assume!(!g.is_zero());
            let (q, rr) = divrem(&r, &f, &g);
            prop_assert_eq!(r.add(&r.mul(&q, &g), &rr), f);
            prop_assert!(rr.degree() < g.degree());
        }
    }
}
