//! Number-theoretic transform multiplication for polynomials over F_p.
//!
//! Products are computed exactly over the integers modulo one, two or three
//! NTT-friendly word primes, recombined with Garner's CRT, then reduced mod p.

use super::arith::{mul_mod, pow_mod};

/// Multiplication switches from schoolbook to the transform once the larger
/// operand reaches this degree.
pub const NTT_THRESHOLD_DEGREE: usize = 1 << 12;

/// Below this many coefficients in the smaller operand the transform never
/// pays off, whatever the other degree.
const NTT_MIN_SHORT_LEN: usize = 32;

/// (prime, primitive root, 2-adic order of p - 1)
const NTT_PRIMES: [(u64, u64, u32); 3] = [
    (998_244_353, 3, 23),
    (167_772_161, 3, 25),
    (469_762_049, 3, 26),
];

pub fn should_use_ntt(a_len: usize, b_len: usize) -> bool {
    let short = a_len.min(b_len);
    let long = a_len.max(b_len);
    short >= NTT_MIN_SHORT_LEN && long > NTT_THRESHOLD_DEGREE
}

pub fn schoolbook_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    // accumulate in u128 lanes only when products could overflow u64 sums
    if (p as u128) * (p as u128) * (a.len().min(b.len()) as u128) < u64::MAX as u128 {
        let mut acc = vec![0u64; out.len()];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                acc[i + j] += x * y;
            }
        }
        for (o, v) in out.iter_mut().zip(acc) {
            *o = v % p;
        }
    } else {
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
            }
        }
    }
    out
}

fn transform(a: &mut [u64], prime: u64, root: u64, invert: bool) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j ^= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w = pow_mod(root, (prime - 1) / len as u64, prime);
        if invert {
            w = pow_mod(w, prime - 2, prime);
        }
        let half = len / 2;
        let mut twiddles = Vec::with_capacity(half);
        let mut cur = 1u64;
        for _ in 0..half {
            twiddles.push(cur);
            cur = cur * w % prime;
        }
        for chunk in a.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((u, v), &tw) in lo.iter_mut().zip(hi.iter_mut()).zip(&twiddles) {
                let x = *u;
                let y = *v * tw % prime;
                *u = if x + y >= prime { x + y - prime } else { x + y };
                *v = if x >= y { x - y } else { x + prime - y };
            }
        }
        len <<= 1;
    }
    if invert {
        let n_inv = pow_mod(n as u64, prime - 2, prime);
        for x in a.iter_mut() {
            *x = *x * n_inv % prime;
        }
    }
}

fn convolve_mod_prime(a: &[u64], b: &[u64], prime: u64, root: u64) -> Vec<u64> {
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    let mut fa = vec![0u64; size];
    for (d, &s) in fa.iter_mut().zip(a) {
        *d = s % prime;
    }
    transform(&mut fa, prime, root, false);
    let same = std::ptr::eq(a, b);
    let fb = if same {
        fa.clone()
    } else {
        let mut fb = vec![0u64; size];
        for (d, &s) in fb.iter_mut().zip(b) {
            *d = s % prime;
        }
        transform(&mut fb, prime, root, false);
        fb
    };
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = *x * y % prime;
    }
    transform(&mut fa, prime, root, true);
    fa.truncate(out_len);
    fa
}

/// Exact product of `a` and `b` reduced modulo `p`, via the transform.
/// Coefficients must already be reduced mod `p`.
pub fn mul_ntt(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    // largest exact coefficient before reduction
    let bound = (a.len().min(b.len()) as u128) * ((p - 1) as u128) * ((p - 1) as u128);
    let mut modulus = 1u128;
    let mut used = 0;
    while modulus <= bound {
        assert!(used < NTT_PRIMES.len(), "coefficient bound exceeds CRT capacity");
        modulus *= NTT_PRIMES[used].0 as u128;
        used += 1;
    }
    for &(_, _, two_adic) in &NTT_PRIMES[..used] {
        assert!(size <= 1usize << two_adic, "transform length {size} too large");
    }
    let residues: Vec<Vec<u64>> = NTT_PRIMES[..used]
        .iter()
        .map(|&(prime, root, _)| convolve_mod_prime(a, b, prime, root))
        .collect();
    if used == 1 {
        return residues[0].iter().map(|&r| r % p).collect();
    }
    // Garner: x = r0 + m0 * (t1 + m1 * t2)
    let m0 = NTT_PRIMES[0].0;
    let m1 = NTT_PRIMES[1].0;
    let inv_m0_mod_m1 = pow_mod(m0 % m1, m1 - 2, m1);
    let (m2, inv_m0m1_mod_m2) = if used == 3 {
        let m2 = NTT_PRIMES[2].0;
        let m0m1 = mul_mod(m0 % m2, m1 % m2, m2);
        (m2, pow_mod(m0m1, m2 - 2, m2))
    } else {
        (1, 0)
    };
    (0..out_len)
        .map(|i| {
            let r0 = residues[0][i];
            let r1 = residues[1][i];
            let t1 = mul_mod((r1 + m1 - r0 % m1) % m1, inv_m0_mod_m1, m1);
            let mut x = r0 as u128 + m0 as u128 * t1 as u128;
            if used == 3 {
                let r2 = residues[2][i];
                let x_mod = (x % m2 as u128) as u64;
                let t2 = mul_mod((r2 + m2 - x_mod) % m2, inv_m0m1_mod_m2, m2);
                x += (m0 as u128 * m1 as u128) * t2 as u128;
            }
            (x % p as u128) as u64
        })
        .collect()
}
