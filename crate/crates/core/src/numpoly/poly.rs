//! Dense univariate polynomials over any [`Ring`].

use super::ring::Ring;

/// Coefficients lowest degree first. The leading coefficient is nonzero,
/// so the zero polynomial has no coefficients at all.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E> Poly<E> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&E> {
        self.coeffs.get(i)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Polynomials over a base ring; itself a ring, so `PolyRing<PolyRing<R>>`
/// models `R[t][x]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing<R> {
    base: R,
}

impl<R: Ring> PolyRing<R> {
    pub fn new(base: R) -> Self {
        PolyRing { base }
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    /// Build a polynomial, trimming high zero coefficients.
    pub fn poly(&self, mut coeffs: Vec<R::Elem>) -> Poly<R::Elem> {
        while coeffs.last().is_some_and(|c| self.base.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64s(&self, coeffs: &[i64]) -> Poly<R::Elem> {
        self.poly(coeffs.iter().map(|&c| self.base.from_i64(c)).collect())
    }

    pub fn constant(&self, c: R::Elem) -> Poly<R::Elem> {
        self.poly(vec![c])
    }

    pub fn x(&self) -> Poly<R::Elem> {
        self.poly(vec![self.base.zero(), self.base.one()])
    }

    pub fn monomial(&self, c: R::Elem, deg: usize) -> Poly<R::Elem> {
        let mut v = vec![self.base.zero(); deg];
        v.push(c);
        self.poly(v)
    }

    pub fn scale(&self, f: &Poly<R::Elem>, c: &R::Elem) -> Poly<R::Elem> {
        self.poly(f.coeffs.iter().map(|x| self.base.mul(x, c)).collect())
    }

    pub fn derivative(&self, f: &Poly<R::Elem>) -> Poly<R::Elem> {
        self.poly(
            f.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| self.base.mul(c, &self.base.from_i64(i as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, f: &Poly<R::Elem>, at: &R::Elem) -> R::Elem {
        f.coeffs
            .iter()
            .rev()
            .fold(self.base.zero(), |acc, c| self.base.add(&self.base.mul(&acc, at), c))
    }

    /// `f(g(x))`.
    pub fn compose(&self, f: &Poly<R::Elem>, g: &Poly<R::Elem>) -> Poly<R::Elem> {
        let mut acc = Poly::zero();
        for c in f.coeffs.iter().rev() {
            acc = self.mul(&acc, g);
            acc = self.add(&acc, &self.constant(c.clone()));
        }
        acc
    }

    /// The `n`-fold composition of `f` with itself; `n = 0` gives `x`.
    pub fn iterate(&self, f: &Poly<R::Elem>, n: usize) -> Poly<R::Elem> {
        let mut acc = self.x();
        for _ in 0..n {
            acc = self.compose(f, &acc);
        }
        acc
    }

    pub fn pow(&self, f: &Poly<R::Elem>, mut e: u64) -> Poly<R::Elem> {
        let mut acc = self.one();
        let mut base = f.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

impl<R: Ring> Ring for PolyRing<R> {
    type Elem = Poly<R::Elem>;

    fn zero(&self) -> Self::Elem {
        Poly::zero()
    }

    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        let mut out = long.coeffs.clone();
        for (o, s) in out.iter_mut().zip(&short.coeffs) {
            *o = self.base.add(o, s);
        }
        self.poly(out)
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        Poly {
            coeffs: a.coeffs.iter().map(|c| self.base.neg(c)).collect(),
        }
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let n = a.len().max(b.len());
        let zero = self.base.zero();
        let out = (0..n)
            .map(|i| {
                let x = a.coeffs.get(i).unwrap_or(&zero);
                let y = b.coeffs.get(i).unwrap_or(&zero);
                self.base.sub(x, y)
            })
            .collect();
        self.poly(out)
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.poly(self.base.poly_mul(&a.coeffs, &b.coeffs))
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.constant(self.base.from_i64(n))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numpoly::fq::Fq;
    use crate::numpoly::ring::Integers;
    use proptest::prelude::*;

    #[test]
    fn iterate_x2_plus_1() {
        let zx = PolyRing::new(Integers);
        let f = zx.from_i64s(&[1, 0, 1]);
        assert_eq!(zx.iterate(&f, 2), zx.from_i64s(&[2, 0, 2, 0, 1]));
        assert_eq!(zx.iterate(&f, 1), f);
        assert_eq!(zx.iterate(&f, 0), zx.x());
        let g = zx.from_i64s(&[3, 0, 1]);
        assert_eq!(zx.iterate(&g, 1), g);
    }

    #[test]
    fn iterate_over_fp_t_coefficients() {
        // x^2 + t with t in F_3[t]; expand by hand: (x^2+t)^2 + t = x^4 + 2t x^2 + t^2 + t
        let f3 = Fq::prime(3).unwrap();
        let ft = PolyRing::new(f3);
        let fx = PolyRing::new(ft.clone());
        let t = ft.x();
        let f = fx.poly(vec![t.clone(), ft.zero(), ft.one()]);
        let f2 = fx.iterate(&f, 2);
        let expected = fx.poly(vec![
            ft.from_i64s(&[0, 1, 1]),
            ft.zero(),
            ft.from_i64s(&[0, 2]),
            ft.zero(),
            ft.one(),
        ]);
        assert_eq!(f2, expected);
    }

    #[test]
    fn degree_and_trimming() {
        let zx = PolyRing::new(Integers);
        assert_eq!(zx.from_i64s(&[0, 0, 0]).degree(), None);
        assert_eq!(zx.from_i64s(&[1, 2, 0]).degree(), Some(1));
        let f = zx.from_i64s(&[1, 0, 1]);
        assert_eq!(zx.iterate(&f, 5).degree(), Some(32));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn iterate_is_additive_over_fp(a in 1u64..1_000_003, b in 0u64..1_000_003, c in 0u64..1_000_003, m in 1usize..=6, n in 1usize..=6) {
            let fp = Fq::prime(1_000_003).unwrap();
            let px = PolyRing::new(fp);
            let f = px.poly(vec![c, b, a]);
            let lhs = px.iterate(&f, m + n);
            let rhs = px.compose(&px.iterate(&f, m), &px.iterate(&f, n));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn iterate_is_additive_over_z(a in -5i64..5, b in -5i64..5, c in -5i64..5, m in 1usize..=4, n in 1usize..=4) {
            let a = if a == 0 { 1 } else { a };
            let zx = PolyRing::new(Integers);
            let f = zx.from_i64s(&[c, b, a]);
            let lhs = zx.iterate(&f, m + n);
            let rhs = zx.compose(&zx.iterate(&f, m), &zx.iterate(&f, n));
            prop_assert_eq!(lhs.degree(), Some(1 << (m + n)));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
