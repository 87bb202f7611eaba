//! Prime-sampling experiments over ℚ: how often a prime divides an orbit,
//! how often an iterate has a root mod p, and how often a point is periodic
//! mod p.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::numpoly::arith::{bigint_mod_u64, inv_mod, primes_up_to};
use crate::numpoly::fqpoly::gcd;
use crate::numpoly::{Fq, PolyRing, Ring};
use crate::zdyn::QuadraticMap;

const SWEEP_BLOCK: usize = 2048;

/// Hits among `total` primes up to `bound`; `excluded` primes were skipped
/// and are not part of `total`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DensityEstimate {
    pub bound: u64,
    pub hits: u64,
    pub total: u64,
    pub excluded: u64,
}

impl DensityEstimate {
    pub fn value(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.hits as f64 / self.total as f64
        }
    }

    /// √(v(1 − v)/total).
    pub fn stderr(&self) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        let v = self.value();
        (v * (1.0 - v) / self.total as f64).sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Hit,
    Miss,
    Excluded,
}

/// Classify every prime up to the largest checkpoint and report cumulative
/// counts at each checkpoint (ascending). Blocks of primes are classified in
/// parallel; the counts do not depend on the thread count.
pub fn sweep<F>(checkpoints: &[u64], classify: F) -> Vec<DensityEstimate>
where
    F: Fn(u64) -> Outcome + Sync,
{
    let max = checkpoints.iter().copied().max().unwrap_or(0);
    let primes = primes_up_to(max);
    let outcomes: Vec<Outcome> = primes
        .par_chunks(SWEEP_BLOCK)
        .flat_map_iter(|block| block.iter().map(|&p| classify(p)).collect::<Vec<_>>())
        .collect();
    let mut sorted: Vec<u64> = checkpoints.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::with_capacity(sorted.len());
    let (mut hits, mut total, mut excluded) = (0, 0, 0);
    let mut i = 0;
    for bound in sorted {
        while i < primes.len() && primes[i] <= bound {
            match outcomes[i] {
                Outcome::Hit => {
                    hits += 1;
                    total += 1;
                }
                Outcome::Miss => total += 1,
                Outcome::Excluded => excluded += 1,
            }
            i += 1;
        }
        out.push(DensityEstimate { bound, hits, total, excluded });
    }
    out
}

/// 10, 100, ..., up to and including `bound` (which is appended when it is
/// not itself a power of ten).
pub fn decade_checkpoints(bound: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut b = 10;
    while b < bound {
        out.push(b);
        b *= 10;
    }
    out.push(bound);
    out
}

/// Brent's cycle search on x ↦ (ax² + bx + c) mod p from `start`; calls
/// `visit` on every term φ(start), φ²(start), ... until the whole tail and
/// cycle have been seen, stopping early if `visit` returns true. Returns
/// (visit hit, cycle length).
fn brent_walk(coeffs: (u64, u64, u64), p: u64, start: u64, mut visit: impl FnMut(u64) -> bool) -> (bool, u64) {
    let (a, b, c) = coeffs;
    let step = |x: u64| ((a * x % p + b) % p * x + c) % p;
    let mut power = 1u64;
    let mut lam = 1u64;
    let mut tortoise = start;
    let mut hare = step(start);
    if visit(hare) {
        return (true, 0);
    }
    while tortoise != hare {
        if power == lam {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        hare = step(hare);
        lam += 1;
        if visit(hare) {
            return (true, 0);
        }
    }
    (false, lam)
}

/// Does p divide some aₙ = φⁿ(a₀) with n ≥ 1?
pub fn orbit_divisor_hit(phi: &QuadraticMap, a0: &BigInt, p: u64) -> bool {
    let start = bigint_mod_u64(a0, p);
    brent_walk(phi.reduce(p), p, start, |x| x == 0).0
}

/// Fraction of primes ≤ X dividing some aₙ, n ≥ 1.
pub fn divisor_density(phi: &QuadraticMap, a0: &BigInt, bound: u64) -> DensityEstimate {
    divisor_density_checkpoints(phi, a0, &[bound])[0]
}

pub fn divisor_density_checkpoints(phi: &QuadraticMap, a0: &BigInt, checkpoints: &[u64]) -> Vec<DensityEstimate> {
    sweep(checkpoints, |p| {
        if orbit_divisor_hit(phi, a0, p) {
            Outcome::Hit
        } else {
            Outcome::Miss
        }
    })
}

/// Is p of bad reduction for φⁿ: p | 2a or p | Disc φⁿ? By the discriminant
/// recursion, for p ∤ 2a the latter means p | b² − 4ac or p divides some
/// φᵐ(γ), 2 ≤ m ≤ n.
pub fn bad_for_iterate(phi: &QuadraticMap, n: usize, p: u64) -> bool {
    let (a, b, c) = phi.reduce(p);
    if p == 2 || a == 0 {
        return true;
    }
    if bigint_mod_u64(&phi.discriminant(), p) == 0 {
        return true;
    }
    let gamma = (p - b) % p * inv_mod(2 * a % p, p).unwrap() % p;
    let mut x = gamma;
    for m in 1..=n {
        x = ((a * x % p + b) % p * x + c) % p;
        if m >= 2 && x == 0 {
            return true;
        }
    }
    false
}

/// x^e mod f over F_p for monic f by square-and-multiply; p < 2³² keeps
/// every accumulated product in a u64.
fn x_pow_mod(f: &[u64], e: u64, p: u64) -> Vec<u64> {
    assert!(p < 1 << 32);
    let n = f.len() - 1;
    let reduce = |mut v: Vec<u64>| -> Vec<u64> {
        for i in (n..v.len()).rev() {
            let t = v[i] % p;
            if t != 0 {
                for j in 0..n {
                    v[i - n + j] = (v[i - n + j] + (p - t) * f[j]) % p;
                }
            }
            v[i] = 0;
        }
        v.truncate(n);
        v.iter_mut().for_each(|x| *x %= p);
        v
    };
    let square = |v: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; 2 * v.len().max(1) - 1];
        for (i, &x) in v.iter().enumerate() {
            if x != 0 {
                for (j, &y) in v.iter().enumerate() {
                    out[i + j] = (out[i + j] + x * y) % p;
                }
            }
        }
        out
    };
    let times_x = |v: Vec<u64>| -> Vec<u64> {
        let mut w = vec![0u64; v.len() + 1];
        w[1..].copy_from_slice(&v);
        w
    };
    let mut acc = reduce(vec![1]);
    for bit in (0..64 - e.leading_zeros()).rev() {
        acc = reduce(square(&acc));
        if (e >> bit) & 1 == 1 {
            acc = reduce(times_x(acc));
        }
    }
    acc
}

/// Does φⁿ have a root mod p? Decided by deg gcd(x^p − x, φⁿ mod p) ≥ 1.
pub fn iterate_has_root_mod_p(phi: &QuadraticMap, n: usize, p: u64) -> bool {
    let field = Fq::prime(p).expect("odd prime");
    let ring = PolyRing::new(field.clone());
    let (a, b, c) = phi.reduce(p);
    let f = ring.iterate(&ring.poly(vec![c, b, a]), n);
    let inv_lc = field.inv(*f.lc().unwrap()).unwrap();
    let monic = ring.scale(&f, &inv_lc);
    let mut xp = x_pow_mod(monic.coeffs(), p, p);
    if xp.len() < 2 {
        xp.resize(2, 0);
    }
    xp[1] = field.sub(&xp[1], &1);
    let g = gcd(&ring, &ring.poly(xp), &monic);
    g.degree().is_some_and(|d| d >= 1)
}

/// Fraction of good primes p ≤ X for which φⁿ has a root mod p. Primes
/// dividing 2a·Disc φⁿ are excluded and counted separately.
pub fn root_proportion(phi: &QuadraticMap, n: usize, bound: u64) -> DensityEstimate {
    root_proportion_checkpoints(phi, n, &[bound])[0]
}

pub fn root_proportion_checkpoints(phi: &QuadraticMap, n: usize, checkpoints: &[u64]) -> Vec<DensityEstimate> {
    assert!(n >= 1, "level must be at least 1");
    sweep(checkpoints, |p| {
        if bad_for_iterate(phi, n, p) {
            Outcome::Excluded
        } else if iterate_has_root_mod_p(phi, n, p) {
            Outcome::Hit
        } else {
            Outcome::Miss
        }
    })
}

/// Is α mod p on a cycle of φ mod p?
pub fn is_periodic_mod_p(phi: &QuadraticMap, alpha: &BigInt, p: u64) -> bool {
    let coeffs = phi.reduce(p);
    let start = bigint_mod_u64(alpha, p);
    let (_, cycle) = brent_walk(coeffs, p, start, |_| false);
    let (a, b, c) = coeffs;
    let mut x = start;
    for _ in 0..cycle {
        x = ((a * x % p + b) % p * x + c) % p;
    }
    x == start
}

/// Fraction of primes p ≤ X, p ∤ 2a, with α periodic under φ mod p.
pub fn periodicity_density(phi: &QuadraticMap, alpha: &BigInt, bound: u64) -> DensityEstimate {
    periodicity_density_checkpoints(phi, alpha, &[bound])[0]
}

pub fn periodicity_density_checkpoints(phi: &QuadraticMap, alpha: &BigInt, checkpoints: &[u64]) -> Vec<DensityEstimate> {
    let two_a = phi.a() * 2;
    sweep(checkpoints, |p| {
        if bigint_mod_u64(&two_a, p) == 0 {
            Outcome::Excluded
        } else if is_periodic_mod_p(phi, alpha, p) {
            Outcome::Hit
        } else {
            Outcome::Miss
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numpoly::arith::pow_mod;

    fn x2(k: i64) -> QuadraticMap {
        QuadraticMap::x2_plus(k)
    }

    #[test]
    fn divisor_hits_by_hand() {
        let phi = x2(1);
        let zero = BigInt::from(0);
        assert!(orbit_divisor_hit(&phi, &zero, 2));
        assert!(!orbit_divisor_hit(&phi, &zero, 3));
        assert!(!orbit_divisor_hit(&phi, &zero, 7));
        assert!(orbit_divisor_hit(&phi, &zero, 5));
        let d = divisor_density(&phi, &zero, 10);
        assert_eq!((d.hits, d.total), (2, 4));
        assert_eq!(d.value(), 0.5);
        let d = divisor_density(&phi, &zero, 2);
        assert_eq!(d.total, 1);
    }

    /// Walks the whole orbit with a visited set.
    fn naive_divisor_hit(phi: &QuadraticMap, a0: i64, p: u64) -> bool {
        let (a, b, c) = phi.reduce(p);
        let mut seen = std::collections::HashSet::new();
        let mut x = a0.rem_euclid(p as i64) as u64;
        loop {
            x = ((a * x % p + b) % p * x + c) % p;
            if x == 0 {
                return true;
            }
            if !seen.insert(x) {
                return false;
            }
        }
    }

    #[test]
    fn brent_agrees_with_visited_set() {
        for phi in [x2(1), x2(3), QuadraticMap::from_i64(2, 3, -1).unwrap()] {
            for p in primes_up_to(3000) {
                for a0 in [0i64, 2, 5] {
                    assert_eq!(orbit_divisor_hit(&phi, &a0.into(), p), naive_divisor_hit(&phi, a0, p), "{phi} p={p}");
                }
            }
        }
    }

    #[test]
    fn periodicity_by_hand() {
        let zero = BigInt::from(0);
        assert!(is_periodic_mod_p(&x2(1), &zero, 5));
        assert!(!is_periodic_mod_p(&x2(1), &zero, 3));
        let sq = x2(0);
        let d = periodicity_density(&sq, &BigInt::from(1), 1000);
        assert_eq!(d.hits, d.total);
        assert_eq!(d.excluded, 1);
    }

    /// Root of φⁿ mod p by backward search through square roots.
    fn root_by_preimages(phi: &QuadraticMap, n: usize, p: u64) -> bool {
        let f = Fq::prime(p).unwrap();
        let (a, b, c) = phi.reduce(p);
        let inv_2a = f.inv(2 * a % p).unwrap();
        let mut layer = vec![0u64];
        for _ in 0..n {
            let mut next = Vec::new();
            for &z in &layer {
                // a y² + b y + c = z  ⇔  (2ay + b)² = b² − 4a(c − z)
                let disc = (b * b % p + 4 * a % p * ((z + p - c) % p)) % p;
                if let Some(r) = f.sqrt(disc) {
                    for s in [r, (p - r) % p] {
                        next.push((s + p - b) % p * inv_2a % p);
                    }
                }
            }
            next.sort_unstable();
            next.dedup();
            layer = next;
        }
        !layer.is_empty()
    }

    #[test]
    fn gcd_root_test_matches_preimage_search() {
        for phi in [x2(1), x2(3), QuadraticMap::from_i64(3, 1, 2).unwrap()] {
            for n in 1..=4 {
                for p in primes_up_to(400).into_iter().skip(1) {
                    if bad_for_iterate(&phi, n, p) {
                        continue;
                    }
                    assert_eq!(iterate_has_root_mod_p(&phi, n, p), root_by_preimages(&phi, n, p), "{phi} n={n} p={p}");
                }
            }
        }
    }

    #[test]
    fn x2_plus_3_roots_follow_reciprocity() {
        // −3 is a square mod p > 3 iff p ≡ 1 (mod 3)
        let d = root_proportion(&x2(3), 1, 10_000);
        let oracle = primes_up_to(10_000).into_iter().filter(|&p| p > 3 && p % 3 == 1).count() as u64;
        assert_eq!(d.hits, oracle);
        assert_eq!(d.excluded, 2);
        // and x^2 + 1 via Euler's criterion
        let d = root_proportion(&x2(1), 1, 10_000);
        let oracle = primes_up_to(10_000)
            .into_iter()
            .filter(|&p| p > 2 && pow_mod(p - 1, (p - 1) / 2, p) == 1)
            .count() as u64;
        assert_eq!(d.hits, oracle);
    }

    #[test]
    fn checkpoints_are_cumulative() {
        let cps = decade_checkpoints(20_000);
        assert_eq!(cps, vec![10, 100, 1000, 10_000, 20_000]);
        let rows = divisor_density_checkpoints(&x2(3), &BigInt::from(2), &cps);
        for w in rows.windows(2) {
            assert!(w[0].hits <= w[1].hits && w[0].total <= w[1].total);
        }
        assert_eq!(rows.last().unwrap(), &divisor_density(&x2(3), &BigInt::from(2), 20_000));
    }

    #[test]
    fn parallel_and_serial_counts_agree() {
        let phi = x2(3);
        let par = root_proportion(&phi, 3, 20_000);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let serial = pool.install(|| root_proportion(&phi, 3, 20_000));
        assert_eq!(par, serial);
    }
}
