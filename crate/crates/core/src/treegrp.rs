//! Automorphisms of the rooted binary tree as portraits: composition,
//! fixed-leaf statistics, Haar sampling, the fixed-point martingale, settled
//! cycles, adding machines and Hausdorff dimension of finitely generated
//! subgroups.
//!
//! A vertex at level k is the integer whose k bits spell the path from the
//! root, first step most significant. The portrait flag at vertex u says
//! whether the two children of u are swapped, so
//! σ(x₁…xₖ) = y₁…yₖ with yᵢ = xᵢ ⊕ s(x₁…xᵢ₋₁).

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest closure enumerated by [`hausdorff_profile`].
pub const CLOSURE_BUDGET: usize = 1 << 20;

pub const HAUSDORFF_MAX_DEPTH: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreeAut {
    depth: usize,
    /// 2ⁿ − 1 flags in breadth-first order.
    bits: Vec<bool>,
}

fn node(level: usize, v: usize) -> usize {
    (1 << level) - 1 + v
}

impl TreeAut {
    pub fn identity(depth: usize) -> Self {
        TreeAut { depth, bits: vec![false; (1 << depth) - 1] }
    }

    pub fn from_bits(depth: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != (1 << depth) - 1 {
            return Err(Error::precondition(format!(
                "a depth {depth} portrait has {} flags, got {}",
                (1usize << depth) - 1,
                bits.len()
            )));
        }
        Ok(TreeAut { depth, bits })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn flag(&self, level: usize, v: usize) -> bool {
        self.bits[node(level, v)]
    }

    /// Image of the level-k vertex v.
    pub fn apply(&self, level: usize, v: usize) -> usize {
        let mut image = 0;
        for i in 0..level {
            let prefix = v >> (level - i);
            let bit = (v >> (level - i - 1)) & 1;
            image = (image << 1) | (bit ^ self.flag(i, prefix) as usize);
        }
        image
    }

    /// The action on levels ≤ m.
    pub fn truncate(&self, m: usize) -> Self {
        let m = m.min(self.depth);
        TreeAut { depth: m, bits: self.bits[..(1 << m) - 1].to_vec() }
    }

    /// σ∘τ (apply τ first).
    pub fn compose(&self, tau: &TreeAut) -> Result<Self> {
        if self.depth != tau.depth {
            return Err(Error::DepthMismatch { left: self.depth, right: tau.depth });
        }
        let mut bits = vec![false; self.bits.len()];
        for level in 0..self.depth {
            for u in 0..1 << level {
                bits[node(level, u)] = tau.flag(level, u) ^ self.flag(level, tau.apply(level, u));
            }
        }
        Ok(TreeAut { depth: self.depth, bits })
    }

    pub fn inverse(&self) -> Self {
        let mut bits = vec![false; self.bits.len()];
        for level in 0..self.depth {
            for u in 0..1 << level {
                bits[node(level, self.apply(level, u))] = self.flag(level, u);
            }
        }
        TreeAut { depth: self.depth, bits }
    }

    /// Fixed vertices on every level 0..=depth; a child of a vertex is fixed
    /// iff the vertex is fixed and unswapped.
    pub fn fixed_profile(&self) -> Vec<usize> {
        let mut fixed = vec![0usize];
        let mut out = vec![1];
        for level in 0..self.depth {
            let next: Vec<usize> = fixed
                .iter()
                .filter(|&&u| !self.flag(level, u))
                .flat_map(|&u| [2 * u, 2 * u + 1])
                .collect();
            out.push(next.len());
            fixed = next;
        }
        out
    }

    pub fn fixed_leaves(&self) -> usize {
        *self.fixed_profile().last().unwrap()
    }

    /// Cycle lengths of the action on level k, as (representative, length).
    pub fn cycles(&self, level: usize) -> Vec<(usize, usize)> {
        let n = 1usize << level;
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut v = start;
            while !seen[v] {
                seen[v] = true;
                v = self.apply(level, v);
                len += 1;
            }
            out.push((start, len));
        }
        out
    }

    fn key(&self) -> u64 {
        debug_assert!(self.bits.len() <= 64);
        self.bits.iter().enumerate().fold(0, |k, (i, &b)| k | ((b as u64) << i))
    }
}

/// Each flag an independent fair coin from a ChaCha stream seeded by `seed`.
pub fn haar_sample(depth: usize, seed: u64) -> TreeAut {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    TreeAut { depth, bits: (0..(1 << depth) - 1).map(|_| rng.gen()).collect() }
}

/// The odometer: swaps exactly at the vertices 0…0 of the leftmost spine,
/// so a(0w) = 1·a(w) and a(1w) = 0w.
pub fn adding_machine(depth: usize) -> TreeAut {
    let mut t = TreeAut::identity(depth);
    for level in 0..depth {
        t.bits[node(level, 0)] = true;
    }
    t
}

/// P(Xₙ > 0) for a Haar element of Aut(Tₙ): q₁ = 1/2 and, conditioning on
/// the root flag, qₙ₊₁ = ½(1 − (1 − qₙ)²) = qₙ − qₙ²/2.
pub fn fix_proportion_exact(n: usize) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::precondition("depth must be at least 1"));
    }
    // qₙ = a/2^e with a odd, which survives a ↦ 2^{e+1}a − a², e ↦ 2e + 1
    let mut a = BigInt::one();
    let mut e = 1usize;
    for _ in 1..n {
        a = (&a << (e + 1)) - &a * &a;
        e = 2 * e + 1;
    }
    Ok(BigRational::new_raw(a, BigInt::one() << e))
}

/// qₙ in floating point by the same recursion.
pub fn fix_proportion(n: usize) -> f64 {
    (1..n).fold(0.5, |q, _| q - q * q / 2.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelStats {
    pub n: usize,
    pub mean: f64,
    pub stderr: f64,
    pub positive: f64,
    pub positive_stderr: f64,
    /// Fraction of trajectories with X_n = X_{n+1} = … = X_{n_max}.
    pub constant_from_here: f64,
}

#[derive(Clone, Debug)]
pub struct MartingaleReport {
    pub n_max: usize,
    pub trials: usize,
    pub levels: Vec<LevelStats>,
    /// trajectories[i][n - 1] = Xₙ of trial i.
    pub trajectories: Vec<Vec<u32>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Conditional {
    pub count: usize,
    pub mean_next: f64,
    pub stderr_next: f64,
    /// P(Xₙ₊₁ = t | Xₙ = t).
    pub stay: f64,
    pub stay_stderr: f64,
}

impl MartingaleReport {
    /// Statistics of Xₙ₊₁ given Xₙ = t; `None` without samples.
    pub fn conditional(&self, n: usize, t: u32) -> Option<Conditional> {
        if n == 0 || n >= self.n_max {
            return None;
        }
        let next: Vec<f64> = self
            .trajectories
            .iter()
            .filter(|tr| tr[n - 1] == t)
            .map(|tr| tr[n] as f64)
            .collect();
        if next.is_empty() {
            return None;
        }
        let count = next.len();
        let (mean, stderr) = mean_stderr(&next);
        let stay = next.iter().filter(|&&x| x == t as f64).count() as f64 / count as f64;
        Some(Conditional {
            count,
            mean_next: mean,
            stderr_next: stderr,
            stay,
            stay_stderr: (stay * (1.0 - stay) / count as f64).sqrt(),
        })
    }
}

fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, (var / n).sqrt())
}

/// Fixed-leaf counts X₁, …, X_{n_max} of one Haar element per trial. Only
/// the flags at fixed vertices influence X, so only those are drawn.
fn fixed_trajectory(n_max: usize, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let mut fixed: u64 = 1;
    let mut out = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        let mut next = 0u64;
        for _ in 0..fixed {
            if !rng.gen::<bool>() {
                next += 2;
            }
        }
        fixed = next;
        out.push(fixed as u32);
    }
    out
}

/// Per-trial streams come from the master seed and the trial index.
pub fn martingale_sim(n_max: usize, trials: usize, seed: u64) -> Result<MartingaleReport> {
    if trials < 1000 {
        return Err(Error::precondition("need at least 1000 trials"));
    }
    if n_max == 0 || n_max > 32 {
        return Err(Error::precondition("depth must lie in 1..=32"));
    }
    let trajectories: Vec<Vec<u32>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            fixed_trajectory(n_max, &mut rng)
        })
        .collect();
    let levels = (1..=n_max)
        .map(|n| {
            let xs: Vec<f64> = trajectories.iter().map(|t| t[n - 1] as f64).collect();
            let (mean, stderr) = mean_stderr(&xs);
            let positive = xs.iter().filter(|&&x| x > 0.0).count() as f64 / trials as f64;
            let constant = trajectories.iter().filter(|t| t[n - 1..].iter().all(|&x| x == t[n - 1])).count();
            LevelStats {
                n,
                mean,
                stderr,
                positive,
                positive_stderr: (positive * (1.0 - positive) / trials as f64).sqrt(),
                constant_from_here: constant as f64 / trials as f64,
            }
        })
        .collect();
    Ok(MartingaleReport { n_max, trials, levels, trajectories })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SettledTruncation {
    pub level: usize,
    /// Lookahead depth the certification holds to.
    pub depth: usize,
    /// Lengths of the level-n cycles whose descendants form one cycle at
    /// every level up to `depth`.
    pub stable_cycles: Vec<usize>,
    pub ratio: f64,
}

/// Stable cycles of σₙ certified up to σ's depth. A 2ᵏ-cycle at level n is
/// stable to N iff its descendants at level N form a single cycle, since a
/// transitive action stays transitive on every quotient level in between.
pub fn is_settled_truncated(sigma: &TreeAut, level: usize) -> Result<SettledTruncation> {
    let depth = sigma.depth;
    if level >= depth {
        return Err(Error::precondition(format!("level {level} must be below the depth {depth}")));
    }
    let shift = depth - level;
    let mut deep_len = HashMap::new();
    for (rep, len) in sigma.cycles(depth) {
        deep_len.insert(rep, len);
    }
    // cycle length at depth of any leaf, by walking from a descendant
    let mut stable = Vec::new();
    for (rep, len) in sigma.cycles(level) {
        if !len.is_power_of_two() {
            continue;
        }
        let leaf = rep << shift;
        let mut v = sigma.apply(depth, leaf);
        let mut deep = 1;
        while v != leaf {
            v = sigma.apply(depth, v);
            deep += 1;
        }
        if deep == len << shift {
            stable.push(len);
        }
    }
    let total: usize = stable.iter().sum();
    Ok(SettledTruncation { level, depth, stable_cycles: stable, ratio: total as f64 / (1u64 << level) as f64 })
}

#[derive(Clone, Debug)]
pub struct SubgroupEstimate {
    pub generators: Vec<TreeAut>,
    /// #Gₙ = 2^{log2_orders[n - 1]}; subgroups of Aut(Tₙ) are 2-groups.
    pub log2_orders: Vec<u32>,
    /// log₂#Gₙ / (2ⁿ − 1).
    pub dim_profile: Vec<f64>,
    /// False when the closure budget stopped the computation early.
    pub complete: bool,
}

/// Exact #Gₙ for n ≤ n_max. #Gₙ = #Gₙ₋₁ · #Kₙ where the kernel Kₙ of
/// restriction to level n − 1 is elementary abelian on the level-(n−1)
/// flags; Schreier generators over an enumeration of Gₙ₋₁ span it.
pub fn hausdorff_profile(generators: &[TreeAut], n_max: usize) -> Result<SubgroupEstimate> {
    if n_max == 0 || n_max > HAUSDORFF_MAX_DEPTH {
        return Err(Error::precondition(format!("depth must lie in 1..={HAUSDORFF_MAX_DEPTH}")));
    }
    if let Some(g) = generators.iter().find(|g| g.depth < n_max) {
        return Err(Error::DepthMismatch { left: g.depth, right: n_max });
    }
    let mut log2_orders = Vec::new();
    let mut complete = true;
    let mut log2 = 0u32;
    for n in 1..=n_max {
        let gens: Vec<TreeAut> = generators.iter().map(|g| g.truncate(n)).collect();
        match kernel_rank(&gens, n) {
            Some(rank) => {
                log2 += rank;
                log2_orders.push(log2);
            }
            None => {
                complete = false;
                break;
            }
        }
    }
    let dim_profile = log2_orders
        .iter()
        .enumerate()
        .map(|(i, &e)| e as f64 / ((1u64 << (i + 1)) - 1) as f64)
        .collect();
    Ok(SubgroupEstimate { generators: generators.to_vec(), log2_orders, dim_profile, complete })
}

/// F₂-rank of the kernel of Gₙ → Gₙ₋₁, or `None` past the budget.
fn kernel_rank(gens: &[TreeAut], n: usize) -> Option<u32> {
    let identity = TreeAut::identity(n);
    // transversal: one lift per element of Gₙ₋₁, keyed by its truncation
    let mut lifts: HashMap<u64, TreeAut> = HashMap::new();
    let mut queue = VecDeque::new();
    lifts.insert(identity.truncate(n - 1).key(), identity.clone());
    queue.push_back(identity);
    let mut schreier: Vec<u64> = Vec::new();
    while let Some(h) = queue.pop_front() {
        for g in gens {
            let hg = h.compose(g).unwrap();
            let k = hg.truncate(n - 1).key();
            match lifts.get(&k) {
                Some(lift) => {
                    // hg · lift⁻¹ restricts to the identity on level n − 1
                    let s = hg.compose(&lift.inverse()).unwrap();
                    schreier.push(level_flags(&s, n - 1));
                }
                None => {
                    if lifts.len() >= CLOSURE_BUDGET {
                        return None;
                    }
                    lifts.insert(k, hg.clone());
                    queue.push_back(hg);
                }
            }
        }
    }
    Some(f2_rank(schreier))
}

fn level_flags(t: &TreeAut, level: usize) -> u64 {
    (0..1usize << level).fold(0, |acc, v| acc | ((t.flag(level, v) as u64) << v))
}

fn f2_rank(mut rows: Vec<u64>) -> u32 {
    let mut rank = 0;
    for bit in 0..64 {
        let Some(pos) = rows.iter().position(|&r| (r >> bit) & 1 == 1) else {
            continue;
        };
        let pivot = rows.swap_remove(pos);
        for r in rows.iter_mut() {
            if (*r >> bit) & 1 == 1 {
                *r ^= pivot;
            }
        }
        rank += 1;
    }
    rank
}

/// Generators of Aut(Tₙ): one flag each.
pub fn full_generators(depth: usize) -> Vec<TreeAut> {
    (0..(1 << depth) - 1)
        .map(|i| {
            let mut t = TreeAut::identity(depth);
            t.bits[i] = true;
            t
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use proptest::prelude::{prop_assert, prop_assert_eq, proptest, ProptestConfig};

    fn all_elements(depth: usize) -> Vec<TreeAut> {
        let len = (1usize << depth) - 1;
        (0..1u64 << len)
            .map(|mask| TreeAut::from_bits(depth, (0..len).map(|i| (mask >> i) & 1 == 1).collect()).unwrap())
            .collect()
    }

    #[test]
    fn fixed_leaf_basics() {
        assert_eq!(TreeAut::identity(3).fixed_leaves(), 8);
        let mut root = TreeAut::identity(3);
        root.bits[0] = true;
        assert_eq!(root.fixed_leaves(), 0);
        for n in 1..=10 {
            assert_eq!(adding_machine(n).fixed_leaves(), 0);
        }
    }

    #[test]
    fn fixed_leaves_match_the_action() {
        for seed in 0..50 {
            let s = haar_sample(6, seed);
            let direct = (0..64).filter(|&v| s.apply(6, v) == v).count();
            assert_eq!(s.fixed_leaves(), direct);
        }
    }

    #[test]
    fn depth_mismatch_is_an_error() {
        let e = TreeAut::identity(2).compose(&TreeAut::identity(3)).unwrap_err();
        assert_eq!(e, Error::DepthMismatch { left: 2, right: 3 });
    }

    #[test]
    fn composition_acts_as_composition() {
        for seed in 0..40 {
            let s = haar_sample(5, seed);
            let t = haar_sample(5, seed + 1000);
            let st = s.compose(&t).unwrap();
            for level in 0..=5 {
                for v in 0..1 << level {
                    assert_eq!(st.apply(level, v), s.apply(level, t.apply(level, v)));
                }
            }
        }
    }

    #[test]
    fn group_laws() {
        for depth in 1..=8 {
            for i in 0..1000u64 {
                let a = haar_sample(depth, 3 * i);
                let b = haar_sample(depth, 3 * i + 1);
                let c = haar_sample(depth, 3 * i + 2);
                let left = a.compose(&b).unwrap().compose(&c).unwrap();
                let right = a.compose(&b.compose(&c).unwrap()).unwrap();
                assert_eq!(left, right);
                assert_eq!(a.compose(&a.inverse()).unwrap(), TreeAut::identity(depth));
            }
        }
    }

    #[test]
    fn haar_single_bit_and_uniformity() {
        let swaps = (0..10_000u64).filter(|&s| haar_sample(1, s).bits[0]).count();
        assert!((swaps as f64 - 5000.0).abs() < 3.0 * 50.0 * 1.5);
        // chi-squared over the 8 elements of Aut(T₂), 7 degrees of freedom
        let mut counts = [0f64; 8];
        let draws = 8000u64;
        for s in 0..draws {
            counts[haar_sample(2, s + 77).key() as usize] += 1.0;
        }
        let expected = draws as f64 / 8.0;
        let chi2: f64 = counts.iter().map(|c| (c - expected).powi(2) / expected).sum();
        assert!(chi2 < 24.3, "chi2 = {chi2}");
        assert_eq!(haar_sample(7, 42), haar_sample(7, 42));
    }

    #[test]
    fn fix_proportions_by_enumeration() {
        assert_eq!(fix_proportion_exact(1).unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(fix_proportion_exact(2).unwrap(), BigRational::new(3.into(), 8.into()));
        assert_eq!(fix_proportion_exact(3).unwrap(), BigRational::new(39.into(), 128.into()));
        for depth in 1..=3 {
            let elements = all_elements(depth);
            let fixing = elements.iter().filter(|g| g.fixed_leaves() > 0).count();
            let q = BigRational::new(fixing.into(), elements.len().into());
            assert_eq!(q, fix_proportion_exact(depth).unwrap());
            // Burnside: a transitive group averages one fixed leaf
            let total: usize = elements.iter().map(|g| g.fixed_leaves()).sum();
            assert_eq!(total, elements.len());
        }
        assert!(fix_proportion(20) < 0.12);
        for n in 1..=12 {
            let q = fix_proportion_exact(n).unwrap();
            assert!((q.to_f64().unwrap() - fix_proportion(n)).abs() < 1e-12);
            assert_eq!(q, BigRational::new(q.numer().clone(), q.denom().clone()));
        }
    }

    #[test]
    fn martingale_statistics() {
        let report = martingale_sim(8, 40_000, 11).unwrap();
        for (level, q) in report.levels.iter().zip(1..) {
            assert!((level.mean - 1.0).abs() <= 3.0 * level.stderr, "n={}", level.n);
            let exact = fix_proportion(q);
            assert!((level.positive - exact).abs() <= 3.0 * level.positive_stderr.max(1e-3));
        }
        for n in 1..=6 {
            for t in [0u32, 2, 4] {
                if let Some(c) = report.conditional(n, t) {
                    if c.count > 100 {
                        assert!((c.mean_next - t as f64).abs() <= 3.0 * c.stderr_next.max(1e-9), "n={n} t={t}");
                    }
                    if t > 0 && c.count > 100 {
                        assert!(c.stay <= 0.5 + 3.0 * c.stay_stderr);
                    }
                }
            }
        }
        let one = martingale_sim(1, 10_000, 5).unwrap();
        let twos = one.trajectories.iter().filter(|t| t[0] == 2).count();
        assert!(one.trajectories.iter().all(|t| t[0] == 0 || t[0] == 2));
        assert!((twos as f64 - 5000.0).abs() < 150.0);
    }

    #[test]
    fn deep_fix_proportion_by_simulation() {
        let report = martingale_sim(20, 20_000, 99).unwrap();
        assert!((report.levels[19].positive - fix_proportion(20)).abs() < 0.01);
    }

    #[test]
    fn adding_machine_is_one_cycle_per_level() {
        assert_eq!(adding_machine(2).cycles(2), vec![(0, 4)]);
        for n in 1..=8 {
            let a = adding_machine(n);
            for m in 0..=n {
                assert_eq!(a.cycles(m).len(), 1);
            }
        }
    }

    #[test]
    fn settled_truncations() {
        let a = adding_machine(10);
        for n in 0..10 {
            let s = is_settled_truncated(&a, n).unwrap();
            assert_eq!(s.stable_cycles, vec![1 << n]);
            assert_eq!(s.ratio, 1.0);
        }
        assert_eq!(is_settled_truncated(&TreeAut::identity(8), 3).unwrap().ratio, 0.0);
        let r = is_settled_truncated(&haar_sample(12, 5), 4).unwrap();
        assert!((0.0..=1.0).contains(&r.ratio));
        assert!(is_settled_truncated(&a, 10).is_err());
    }

    #[test]
    fn hausdorff_profiles() {
        let full = hausdorff_profile(&full_generators(5), 5).unwrap();
        assert!(full.complete);
        assert!(full.dim_profile.iter().all(|&d| d == 1.0));
        let cyclic = hausdorff_profile(&[adding_machine(5)], 5).unwrap();
        assert_eq!(cyclic.log2_orders, vec![1, 2, 3, 4, 5]);
        let trivial = hausdorff_profile(&[], 4).unwrap();
        assert_eq!(trivial.log2_orders, vec![0; 4]);
    }

    #[test]
    fn closure_order_matches_enumeration() {
        // brute-force closure at depth 3 for a few generator sets
        for seeds in [[1u64, 2], [3, 4], [5, 6]] {
            let gens: Vec<TreeAut> = seeds.iter().map(|&s| haar_sample(3, s)).collect();
            let mut seen = std::collections::HashSet::new();
            let mut queue = vec![TreeAut::identity(3)];
            seen.insert(TreeAut::identity(3));
            while let Some(h) = queue.pop() {
                for g in &gens {
                    let hg = h.compose(g).unwrap();
                    if seen.insert(hg.clone()) {
                        queue.push(hg);
                    }
                }
            }
            let est = hausdorff_profile(&gens, 3).unwrap();
            assert_eq!(1usize << est.log2_orders[2], seen.len());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn truncation_respects_fixed_vertices(seed in 0u64..1_000_000, depth in 2usize..9, m in 1usize..8) {
            let s = haar_sample(depth, seed);
            let m = m.min(depth - 1);
            let t = s.truncate(m);
            for v in 0..1usize << depth {
                if s.apply(depth, v) == v {
                    prop_assert_eq!(t.apply(m, v >> (depth - m)), v >> (depth - m));
                }
            }
            prop_assert!(t.fixed_leaves() << (depth - m) >= s.fixed_leaves());
        }

        #[test]
        fn inverse_undoes_the_action(seed in 0u64..1_000_000, depth in 1usize..9) {
            let s = haar_sample(depth, seed);
            let inv = s.inverse();
            for v in 0..1usize << depth {
                prop_assert_eq!(inv.apply(depth, s.apply(depth, v)), v);
            }
        }
    }
}
