//! Finite fields of odd characteristic.
//!
//! An element of F_{p^d} = F_p[x]/(m) is packed into a `u64` as the base-p
//! number Σ c_i p^i of its residue c_0 + c_1 x + ... + c_{d-1} x^{d-1}. The
//! prime field is the case d = 1 with elements the residues themselves.

use std::fmt;
use std::sync::Arc;

use super::arith::{factor_u64, is_prime_u64, mul_mod, pow_mod};
use super::ntt;
use super::poly::PolyRing;
use super::ring::{schoolbook_mul, Ring};
use crate::error::{Error, Result};

/// Discrete log tables are built for extension fields up to this order.
const LOG_TABLE_MAX_ORDER: u64 = 1 << 22;

#[derive(Clone)]
pub struct Fq {
    inner: Arc<FqInner>,
}

struct FqInner {
    p: u64,
    d: u32,
    q: u64,
    /// monic, lowest degree first, length d + 1
    modulus: Vec<u64>,
    /// q - 1 = 2^two_adic * odd_part
    two_adic: u32,
    odd_part: u64,
    nonresidue: u64,
    tables: Option<LogTables>,
}

struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fq(p={}, d={}, modulus={:?})", self.inner.p, self.inner.d, self.inner.modulus)
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for Fq {}

fn check_characteristic(p: u64) -> Result<()> {
    if p == 2 {
        return Err(Error::CharacteristicTwo);
    }
    if !is_prime_u64(p) {
        return Err(Error::precondition(format!("{p} is not an odd prime")));
    }
    Ok(())
}

impl Fq {
    /// The prime field F_p, p an odd prime below 2^63.
    pub fn prime(p: u64) -> Result<Self> {
        check_characteristic(p)?;
        if p >= 1 << 63 {
            return Err(Error::precondition("p must be below 2^63"));
        }
        Ok(Self::build(p, vec![0, 1], false))
    }

    /// F_{p^d} built on the first monic irreducible of degree d, scanning
    /// the lower coefficients [c_0, ..., c_{d-1}] in base-p counting order
    /// with c_0 the fastest-moving digit.
    pub fn extension(p: u64, d: u32) -> Result<Self> {
        check_characteristic(p)?;
        if d == 0 {
            return Err(Error::precondition("extension degree must be at least 1"));
        }
        if d == 1 {
            return Self::prime(p);
        }
        let q = order_checked(p, d)?;
        let fp = Self::prime(p)?;
        let ring = PolyRing::new(fp.clone());
        let count = q; // candidates for the d lower coefficients
        for idx in 0..count {
            let mut coeffs = fp.digits_of(idx, p, d);
            coeffs.push(1);
            let m = ring.poly(coeffs.clone());
            if super::fqpoly::is_irreducible(&ring, &m) {
                return Ok(Self::build(p, coeffs, true));
            }
        }
        Err(Error::integrity(format!("no irreducible of degree {d} over F_{p}")))
    }

    /// F_p[x]/(modulus) for a caller-chosen monic irreducible modulus.
    pub fn with_modulus(p: u64, modulus: &[u64]) -> Result<Self> {
        check_characteristic(p)?;
        let fp = Self::prime(p)?;
        let ring = PolyRing::new(fp);
        let m = ring.poly(modulus.iter().map(|c| c % p).collect());
        let d = m.degree().ok_or(Error::ZeroPolynomial)?;
        if d == 0 {
            return Err(Error::ConstantPolynomial("a field modulus needs degree at least 1"));
        }
        if *m.lc().unwrap() != 1 {
            return Err(Error::precondition("modulus must be monic"));
        }
        if !super::fqpoly::is_irreducible(&ring, &m) {
            return Err(Error::precondition("modulus is reducible"));
        }
        order_checked(p, d as u32)?;
        if d == 1 {
            return Self::prime(p);
        }
        Ok(Self::build(p, m.into_coeffs(), true))
    }

    fn build(p: u64, modulus: Vec<u64>, extension: bool) -> Self {
        let d = (modulus.len() - 1) as u32;
        let q = p.pow(d);
        let mut two_adic = 0;
        let mut odd_part = q - 1;
        while odd_part % 2 == 0 {
            odd_part /= 2;
            two_adic += 1;
        }
        let mut field = Fq {
            inner: Arc::new(FqInner {
                p,
                d,
                q,
                modulus,
                two_adic,
                odd_part,
                nonresidue: 0,
                tables: None,
            }),
        };
        let nonresidue = (2..q)
            .find(|&z| field.pow(z, (q - 1) / 2) == q_minus_one(&field))
            .expect("odd order field has a non-residue");
        let tables = (extension && q <= LOG_TABLE_MAX_ORDER).then(|| field.log_tables());
        let inner = Arc::get_mut(&mut field.inner).expect("unique during construction");
        inner.nonresidue = nonresidue;
        inner.tables = tables;
        field
    }

    fn log_tables(&self) -> LogTables {
        let q = self.inner.q;
        let cofactors: Vec<u64> = factor_u64(q - 1).into_iter().map(|(r, _)| (q - 1) / r).collect();
        let g = (2..q)
            .find(|&g| cofactors.iter().all(|&e| self.pow(g, e) != 1))
            .expect("multiplicative group is cyclic");
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u64;
        for i in 0..q - 1 {
            exp.push(cur as u32);
            log[cur as usize] = i as u32;
            cur = self.mul_slow(cur, g);
        }
        LogTables { exp, log }
    }

    pub fn characteristic(&self) -> u64 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.d
    }

    /// Number of elements.
    pub fn order(&self) -> u64 {
        self.inner.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.inner.d == 1
    }

    /// Every element, in packed-index order.
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.inner.q
    }

    /// Coefficients c_0..c_{d-1} of an element.
    pub fn digits(&self, a: u64) -> Vec<u64> {
        self.digits_of(a, self.inner.p, self.inner.d)
    }

    fn digits_of(&self, mut a: u64, p: u64, d: u32) -> Vec<u64> {
        (0..d)
            .map(|_| {
                let c = a % p;
                a /= p;
                c
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u64]) -> u64 {
        let p = self.inner.p;
        assert!(digits.len() <= self.inner.d as usize, "too many digits");
        digits.iter().rev().fold(0, |acc, &c| acc * p + c % p)
    }

    /// The element x of F_p[x]/(m); equals p for d > 1.
    pub fn generator(&self) -> u64 {
        if self.inner.d == 1 {
            // the prime field is generated by 1 over itself
            1
        } else {
            self.inner.p
        }
    }

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        let p = self.inner.p;
        let d = self.inner.d as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = ntt::schoolbook_mod(&da, &db, p);
        let m = &self.inner.modulus;
        for i in (d..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            // x^d = -(m_0 + ... + m_{d-1} x^{d-1})
            for j in 0..d {
                let t = mul_mod(c, m[j], p);
                prod[i - d + j] = (prod[i - d + j] + p - t) % p;
            }
            prod[i] = 0;
        }
        prod.truncate(d);
        self.from_digits(&prod)
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        if self.inner.d == 1 {
            return pow_mod(a, e, self.inner.p);
        }
        if let Some(t) = &self.inner.tables {
            if a == 0 {
                return if e == 0 { 1 } else { 0 };
            }
            let l = t.log[a as usize] as u128 * (e % (self.inner.q - 1)) as u128;
            return t.exp[(l % (self.inner.q - 1) as u128) as usize] as u64;
        }
        let mut acc = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        Some(self.pow(a, self.inner.q - 2))
    }

    pub fn div(&self, a: u64, b: u64) -> Option<u64> {
        Some(self.mul(&a, &self.inv(b)?))
    }

    pub fn is_square(&self, a: u64) -> bool {
        a == 0 || self.pow(a, (self.inner.q - 1) / 2) == 1
    }

    /// A square root by Tonelli-Shanks; of the two roots ±r the one with the
    /// smaller packed index is returned.
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return Some(0);
        }
        if !self.is_square(a) {
            return None;
        }
        let inner = &*self.inner;
        let mut m = inner.two_adic;
        let mut c = self.pow(inner.nonresidue, inner.odd_part);
        let mut t = self.pow(a, inner.odd_part);
        let mut r = self.pow(a, inner.odd_part.div_ceil(2));
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = self.mul(&t2, &t2);
                i += 1;
            }
            let mut b = c;
            for _ in 0..m - i - 1 {
                b = self.mul(&b, &b);
            }
            m = i;
            c = self.mul(&b, &b);
            t = self.mul(&t, &c);
            r = self.mul(&r, &b);
        }
        let neg = self.neg(&r);
        Some(r.min(neg))
    }

    /// a^p.
    pub fn frobenius(&self, a: u64) -> u64 {
        self.pow(a, self.inner.p)
    }

    /// Degree over F_p of the subfield generated by `a`.
    pub fn element_degree(&self, a: u64) -> u32 {
        let mut k = 1;
        let mut cur = self.frobenius(a);
        while cur != a {
            cur = self.frobenius(cur);
            k += 1;
        }
        k
    }

    /// The Galois conjugates a, a^p, a^{p^2}, ... (without repetition).
    pub fn conjugates(&self, a: u64) -> Vec<u64> {
        let mut out = vec![a];
        let mut cur = self.frobenius(a);
        while cur != a {
            out.push(cur);
            cur = self.frobenius(cur);
        }
        out
    }
}

fn q_minus_one(f: &Fq) -> u64 {
    f.neg(&1)
}

fn order_checked(p: u64, d: u32) -> Result<u64> {
    match p.checked_pow(d) {
        Some(q) if q < 1 << 63 => Ok(q),
        _ => Err(Error::precondition(format!("F_{p}^{d} does not fit a 63-bit packing"))),
    }
}

impl Ring for Fq {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        let p = self.inner.p;
        if self.inner.d == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        let (mut a, mut b) = (*a, *b);
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            let s = (a % p + b % p) % p;
            out += s * place;
            a /= p;
            b /= p;
            place = place.saturating_mul(p);
        }
        out
    }

    fn neg(&self, a: &u64) -> u64 {
        let p = self.inner.p;
        if self.inner.d == 1 {
            return if *a == 0 { 0 } else { p - a };
        }
        let mut a = *a;
        let mut out = 0;
        let mut place = 1;
        while a > 0 {
            let c = a % p;
            out += ((p - c) % p) * place;
            a /= p;
            place = place.saturating_mul(p);
        }
        out
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        if self.inner.d == 1 {
            return mul_mod(*a, *b, self.inner.p);
        }
        if *a == 0 || *b == 0 {
            return 0;
        }
        match &self.inner.tables {
            Some(t) => {
                let l = t.log[*a as usize] as u64 + t.log[*b as usize] as u64;
                let l = if l >= self.inner.q - 1 { l - (self.inner.q - 1) } else { l };
                t.exp[l as usize] as u64
            }
            None => self.mul_slow(*a, *b),
        }
    }

    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.inner.p as i64) as u64
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn poly_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if self.inner.d > 1 {
            return schoolbook_mul(self, a, b);
        }
        if ntt::should_use_ntt(a.len(), b.len()) {
            ntt::mul_ntt(a, b, self.inner.p)
        } else {
            ntt::schoolbook_mod(a, b, self.inner.p)
        }
    }
}
