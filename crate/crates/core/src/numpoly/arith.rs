//! Integer and rational helpers: sieving, valuations, square classes, Möbius.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational with reduced numerator and positive denominator.
pub type BigRat = BigRational;

/// p-adic valuation. Zero has no finite valuation, so it gets its own
/// variant instead of a magic number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Valuation::Finite(0)
    }

    pub fn is_odd(self) -> bool {
        matches!(self, Valuation::Finite(v) if v.rem_euclid(2) == 1)
    }
}

/// All primes `<= bound`, ascending. Empty below 2.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    // odd-only sieve: index i stands for 2i + 1
    let half = n / 2 + 1;
    let mut composite = vec![false; half];
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= n {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut out = vec![2];
    out.extend(
        (1..half)
            .filter(|&i| !composite[i] && 2 * i + 1 <= n)
            .map(|i| (2 * i + 1) as u64),
    );
    out
}

/// Primes in the half-open range `[lo, hi)`, for block-parallel sweeps.
pub fn primes_in_range(primes: &[u64], lo: u64, hi: u64) -> &[u64] {
    let start = primes.partition_point(|&p| p < lo);
    let end = primes.partition_point(|&p| p < hi);
    &primes[start..end]
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    // deterministic Miller-Rabin for 64-bit inputs
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a prime `p`; `None` for zero.
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

/// Reduce an integer into `[0, m)`.
pub fn bigint_mod_u64(x: &BigInt, m: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(m));
    r.to_u64().expect("residue fits")
}

/// Reduce a rational modulo `p`; `None` when `p` divides the denominator.
pub fn rat_mod_u64(x: &BigRat, p: u64) -> Option<u64> {
    let den = bigint_mod_u64(x.denom(), p);
    let inv = inv_mod(den, p)?;
    Some(mul_mod(bigint_mod_u64(x.numer(), p), inv, p))
}

/// Exponent of `p` in a nonzero integer.
pub fn vp_int(x: &BigInt, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let p_big = BigInt::from(p);
    let mut v = 0i64;
    let mut cur = x.abs();
    loop {
        let (q, r) = cur.div_rem(&p_big);
        if !r.is_zero() {
            break;
        }
        v += 1;
        cur = q;
    }
    Valuation::Finite(v)
}

/// p-adic valuation of a rational number.
pub fn vp(x: &BigRat, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let num = vp_int(x.numer(), p).finite().unwrap_or(0);
    let den = vp_int(x.denom(), p).finite().unwrap_or(0);
    Valuation::Finite(num - den)
}

pub fn is_square_int(x: &BigInt) -> bool {
    match x.sign() {
        Sign::Minus => false,
        Sign::NoSign => true,
        Sign::Plus => {
            let r = x.sqrt();
            &r * &r == *x
        }
    }
}

/// True iff `x = y²` for a rational `y`.
pub fn is_square(x: &BigRat) -> bool {
    is_square_int(x.numer()) && is_square_int(x.denom())
}

/// True iff `x = 2y²` for a rational `y`.
pub fn is_twice_square(x: &BigRat) -> bool {
    if x.is_zero() {
        return true;
    }
    is_square(&(x / BigRat::from_integer(BigInt::from(2))))
}

/// Factor a machine integer by trial division; ascending `(prime, exponent)`.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn moebius(n: u64) -> i8 {
    assert!(n >= 1, "moebius is defined for n >= 1");
    let mut sign = 1i8;
    for (_, e) in factor_u64(n) {
        if e > 1 {
            return 0;
        }
        sign = -sign;
    }
    sign
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Remove from `x` every prime factor it shares with `modulus`.
pub fn strip_common_primes(x: &BigInt, modulus: &BigInt) -> BigInt {
    let mut x = x.abs();
    if x.is_zero() {
        return x;
    }
    let mut g = x.gcd(modulus);
    while !g.is_one() && !g.is_zero() {
        x /= &g;
        g = x.gcd(&g);
    }
    x
}

pub fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_is_prime(n: u64) -> bool {
        n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn small_prime_lists() {
        assert_eq!(primes_up_to(10), vec![2, 3, 5, 7]);
        assert_eq!(primes_up_to(2), vec![2]);
        assert!(primes_up_to(1).is_empty());
        assert!(primes_up_to(0).is_empty());
        assert_eq!(primes_up_to(3), vec![2, 3]);
    }

    #[test]
    fn sieve_matches_trial_division() {
        let oracle: Vec<u64> = (0..=100).filter(|&n| trial_division_is_prime(n)).collect();
        assert_eq!(oracle.len(), 25);
        assert_eq!(primes_up_to(100), oracle);
        let oracle: Vec<u64> = (0..=5000).filter(|&n| trial_division_is_prime(n)).collect();
        assert_eq!(primes_up_to(5000), oracle);
        for n in 0..5000 {
            assert_eq!(is_prime_u64(n), trial_division_is_prime(n), "{n}");
        }
    }

    #[test]
    fn valuations() {
        assert_eq!(vp(&int(12), 2), Valuation::Finite(2));
        assert_eq!(vp(&int(147), 7), Valuation::Finite(2));
        assert_eq!(vp(&rat(3, 4), 2), Valuation::Finite(-2));
        assert_eq!(vp(&int(0), 5), Valuation::Infinite);
        assert_eq!(vp(&rat(-50, 3), 5), Valuation::Finite(2));
    }

    #[test]
    fn square_classes() {
        assert!(is_square(&int(49)));
        assert!(!is_square(&int(12)));
        assert!(is_twice_square(&int(8)));
        assert!(!is_square(&int(-4)));
        assert!(is_square(&rat(9, 4)));
        assert!(!is_square(&rat(3, 4)));
        assert!(!is_twice_square(&int(-8)));
        assert!(is_twice_square(&rat(1, 2)));
    }

    #[test]
    fn moebius_values() {
        assert_eq!(moebius(1), 1);
        assert_eq!(moebius(6), 1);
        assert_eq!(moebius(12), 0);
        assert_eq!(moebius(7), -1);
        assert_eq!(moebius(30), -1);
    }

    #[test]
    fn strip_removes_shared_primes_completely() {
        // 2^3 * 3^2 * 7, sharing 2 and 3 with 6
        let x = BigInt::from(504);
        assert_eq!(strip_common_primes(&x, &BigInt::from(6)), BigInt::from(7));
        assert_eq!(strip_common_primes(&BigInt::from(49), &BigInt::from(6)), BigInt::from(49));
    }

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(16), vec![1, 2, 4, 8, 16]);
        assert_eq!(divisors(1), vec![1]);
    }
}
