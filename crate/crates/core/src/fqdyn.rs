//! Dynamics of quadratic maps over finite fields: functional graphs and the
//! density of periodic points, settled polynomials and stable factors, and
//! the finite-field Mandelbrot approximants Iₙ.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numpoly::arith::moebius;
use crate::numpoly::fqpoly::{self, FqPoly, FqPolyRing};
use crate::numpoly::{Fq, PolyRing, Ring};

/// Largest field enumerated element by element.
pub const ELEMENT_BUDGET: u64 = 1 << 22;

/// Largest factor degree for which an explicit equal-degree split is run
/// when a factor of an iterate splits under composition.
pub const SPLIT_DEGREE_BUDGET: usize = 1 << 9;

const FACTOR_SEED: u64 = 0x5e77_1ed;

/// x ↦ ax² + bx + c over a finite field of odd characteristic, a ≠ 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqQuadratic {
    field: Fq,
    a: u64,
    b: u64,
    c: u64,
}

impl FqQuadratic {
    pub fn new(field: Fq, a: u64, b: u64, c: u64) -> Result<Self> {
        let q = field.order();
        if a >= q || b >= q || c >= q {
            return Err(Error::precondition("coefficients must be field elements"));
        }
        if a == 0 {
            return Err(Error::precondition("leading coefficient must be nonzero"));
        }
        Ok(FqQuadratic { field, a, b, c })
    }

    /// A map over F_p from integer coefficients (a, b, c).
    pub fn over_prime(p: u64, a: i64, b: i64, c: i64) -> Result<Self> {
        let field = Fq::prime(p)?;
        let (a, b, c) = (field.from_i64(a), field.from_i64(b), field.from_i64(c));
        Self::new(field, a, b, c)
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn coefficients(&self) -> (u64, u64, u64) {
        (self.a, self.b, self.c)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = &self.field;
        let ax_b = f.add(&f.mul(&self.a, &x), &self.b);
        f.add(&f.mul(&ax_b, &x), &self.c)
    }

    /// c₀ = −b/(2a).
    pub fn critical_point(&self) -> u64 {
        let f = &self.field;
        f.mul(&f.neg(&self.b), &f.inv(f.mul(&2, &self.a)).unwrap())
    }

    /// The critical orbit f(c₀), f²(c₀), ... up to its first repeat.
    pub fn critical_orbit(&self) -> Vec<u64> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut x = self.eval(self.critical_point());
        while seen.insert(x) {
            out.push(x);
            x = self.eval(x);
        }
        out
    }

    /// Index at which the critical orbit enters its cycle, within
    /// [`critical_orbit`](Self::critical_orbit).
    fn critical_cycle_start(&self) -> usize {
        let orbit = self.critical_orbit();
        let next = self.eval(*orbit.last().unwrap());
        orbit.iter().position(|&x| x == next).unwrap()
    }

    pub fn poly(&self, ring: &FqPolyRing) -> FqPoly {
        ring.poly(vec![self.c, self.b, self.a])
    }

    /// Conjugate of x² or x² − 2 by an affine change of variable. These are
    /// expected to be the only quadratics with a positive density of periodic points.
    pub fn is_degenerate(&self) -> bool {
        // monic conjugate x² + c' has c' = ac − b²/4 + b/2
        let f = &self.field;
        let inv4 = f.inv(4 % f.characteristic()).unwrap();
        let inv2 = f.inv(2).unwrap();
        let cprime = f.add(
            &f.sub(&f.mul(&self.a, &self.c), &f.mul(&f.mul(&self.b, &self.b), &inv4)),
            &f.mul(&self.b, &inv2),
        );
        cprime == 0 || cprime == f.from_i64(-2)
    }

    /// The same map with coefficients embedded in an extension of its prime
    /// field.
    pub fn embed(&self, ext: &Fq) -> Result<Self> {
        if !self.field.is_prime_field() || ext.characteristic() != self.field.characteristic() {
            return Err(Error::precondition("only maps over the prime field can be embedded"));
        }
        Self::new(ext.clone(), self.a, self.b, self.c)
    }
}

/// Successor array of a map on all of F_q with cycle flags and tail depths.
#[derive(Clone, Debug)]
pub struct FunctionalGraph {
    pub successor: Vec<u32>,
    pub on_cycle: Vec<bool>,
    /// Steps to reach a cycle; 0 on cycles.
    pub tail_depth: Vec<u32>,
}

impl FunctionalGraph {
    pub fn build(f: &FqQuadratic) -> Result<Self> {
        let q = f.field.order();
        if q > ELEMENT_BUDGET {
            return Err(Error::budget(format!("field of order {q} exceeds the element budget {ELEMENT_BUDGET}")));
        }
        let successor: Vec<u32> = (0..q).map(|x| f.eval(x) as u32).collect();
        Ok(Self::from_successors(successor))
    }

    pub fn from_successors(successor: Vec<u32>) -> Self {
        let n = successor.len();
        let mut indegree = vec![0u32; n];
        for &s in &successor {
            indegree[s as usize] += 1;
        }
        // peel nodes of in-degree zero; what remains is the union of cycles
        let mut order: Vec<u32> = (0..n as u32).filter(|&v| indegree[v as usize] == 0).collect();
        let mut head = 0;
        while head < order.len() {
            let s = successor[order[head] as usize] as usize;
            indegree[s] -= 1;
            if indegree[s] == 0 {
                order.push(s as u32);
            }
            head += 1;
        }
        let mut on_cycle = vec![true; n];
        for &v in &order {
            on_cycle[v as usize] = false;
        }
        let mut tail_depth = vec![0u32; n];
        for &v in order.iter().rev() {
            tail_depth[v as usize] = tail_depth[successor[v as usize] as usize] + 1;
        }
        FunctionalGraph { successor, on_cycle, tail_depth }
    }

    pub fn periodic_count(&self) -> usize {
        self.on_cycle.iter().filter(|&&b| b).count()
    }
}

/// One degree layer of a truncated density profile.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityLayer {
    pub d: u32,
    /// Elements of exact degree d over the base field.
    pub count: u64,
    /// Those among them in the set.
    pub members: u64,
    /// members / count.
    pub layer_fraction: f64,
    /// Σ_{e ≤ d} weighted members over Σ_{e ≤ d} weighted counts, with the
    /// weight (deg α)⁻¹ N(α)⁻¹ of an element.
    pub cumulative_density: f64,
}

fn profile_from_counts(layers: &[(u32, u64, u64)], q: u64) -> Vec<DensityLayer> {
    let mut num = 0.0;
    let mut den = 0.0;
    layers
        .iter()
        .map(|&(d, count, members)| {
            let w = 1.0 / (d as f64 * (q as f64).powi(d as i32));
            num += w * members as f64;
            den += w * count as f64;
            DensityLayer {
                d,
                count,
                members,
                layer_fraction: if count == 0 { 0.0 } else { members as f64 / count as f64 },
                cumulative_density: if den == 0.0 { 0.0 } else { num / den },
            }
        })
        .collect()
}

/// Möbius inversion over the divisor lattice: exact-degree counts from
/// counts over whole subfields.
fn exact_degree_counts(whole: &[u64], d: u32) -> u64 {
    let mut acc: i128 = 0;
    for e in 1..=d {
        if d % e == 0 {
            acc += moebius((d / e) as u64) as i128 * whole[e as usize] as i128;
        }
    }
    acc as u64
}

fn check_budget(p: u64, d_max: u32) -> Result<()> {
    match p.checked_pow(d_max) {
        Some(q) if q <= ELEMENT_BUDGET => Ok(()),
        _ => Err(Error::budget(format!(
            "F_{p}^{d_max} exceeds the element budget {ELEMENT_BUDGET}"
        ))),
    }
}

/// Truncated density of Per(f) for f over F_p: per degree d ≤ Dmax, the
/// periodic points of exact degree d and the weighted cumulative density.
pub fn per_density_profile(f: &FqQuadratic, d_max: u32) -> Result<Vec<DensityLayer>> {
    if !f.field.is_prime_field() {
        return Err(Error::precondition("the map must be defined over the prime field"));
    }
    let p = f.field.characteristic();
    check_budget(p, d_max)?;
    let whole: Vec<(u64, u64)> = (1..=d_max)
        .into_par_iter()
        .map(|d| -> Result<(u64, u64)> {
            let ext = Fq::extension(p, d)?;
            let graph = FunctionalGraph::build(&f.embed(&ext)?)?;
            Ok((ext.order(), graph.periodic_count() as u64))
        })
        .collect::<Result<_>>()?;
    let mut sizes = vec![0u64];
    let mut periodic = vec![0u64];
    for (q, per) in whole {
        sizes.push(q);
        periodic.push(per);
    }
    let layers: Vec<(u32, u64, u64)> = (1..=d_max)
        .map(|d| (d, exact_degree_counts(&sizes, d), exact_degree_counts(&periodic, d)))
        .collect();
    Ok(profile_from_counts(&layers, p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stability {
    /// Non-square on the critical orbit: stable at every depth.
    Certified,
    /// Composition with f stays irreducible through the last level examined.
    Heuristic,
    Unstable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorRecord {
    pub factor: FqPoly,
    pub multiplicity: usize,
    pub stability: Stability,
}

impl FactorRecord {
    pub fn degree(&self) -> usize {
        self.factor.degree().unwrap()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SettlednessReport {
    pub n: usize,
    /// Degrees of the irreducible factors of fⁿ with multiplicity, ascending.
    pub factor_degrees: Vec<usize>,
    pub certified_degree: usize,
    pub heuristic_degree: usize,
    /// certified_degree + heuristic_degree.
    pub stable_degree: usize,
    /// stable_degree / 2ⁿ.
    pub ratio: f64,
    pub certified_ratio: f64,
}

/// How h∘f factors for an irreducible h.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Transition {
    /// Irreducible of twice the degree.
    Inert,
    /// Two distinct irreducibles of the same degree.
    Split,
    /// The square of a linear factor (h = x − f(c₀)).
    Ramified,
}

struct Settler<'a> {
    f: &'a FqQuadratic,
    ring: FqPolyRing,
    orbit: Vec<u64>,
    /// Σ over later orbit points: orbit[1..] plus orbit[cycle_start..] again
    /// covers every f^k(c₀) with k ≥ 2.
    later_points: Vec<u64>,
}

impl<'a> Settler<'a> {
    fn new(f: &'a FqQuadratic) -> Self {
        let orbit = f.critical_orbit();
        let start = f.critical_cycle_start();
        // f^k(c₀) for k ≥ 2 ranges over orbit[1..] together with the cycle,
        // which contains orbit[0] again exactly when start == 0
        let mut later: Vec<u64> = orbit[1..].to_vec();
        if start == 0 {
            later.push(orbit[0]);
        }
        Settler { f, ring: PolyRing::new(f.field.clone()), orbit, later_points: later }
    }

    /// ±lc(h)·a^d as the unit twisting h(w) in the square test at step 1
    /// (with the sign) and at later steps (without).
    fn twist(&self, h: &FqPoly, with_sign: bool) -> u64 {
        let field = &self.f.field;
        let d = h.degree().unwrap() as u64;
        let mut u = field.mul(h.lc().unwrap(), &field.pow(self.f.a, d));
        if with_sign && d % 2 == 1 {
            u = field.neg(&u);
        }
        u
    }

    fn non_square(&self, x: u64) -> bool {
        x != 0 && !self.f.field.is_square(x)
    }

    /// How h∘f factors, for an irreducible h.
    fn transition(&self, h: &FqPoly) -> Transition {
        let v = self.ring.eval(h, &self.orbit[0]);
        if v == 0 {
            Transition::Ramified
        } else if self.non_square(self.f.field.mul(&self.twist(h, true), &v)) {
            Transition::Inert
        } else {
            Transition::Split
        }
    }

    fn certified(&self, h: &FqPoly) -> bool {
        if self.transition(h) != Transition::Inert {
            return false;
        }
        let u = self.twist(h, false);
        self.later_points
            .iter()
            .all(|w| self.non_square(self.f.field.mul(&u, &self.ring.eval(h, w))))
    }

    /// h∘f^j irreducible for every j ≤ steps.
    fn persists(&self, h: &FqPoly, steps: usize) -> bool {
        if steps == 0 {
            return true;
        }
        if self.transition(h) != Transition::Inert {
            return false;
        }
        let u = self.twist(h, false);
        let mut w = self.orbit[0];
        for _ in 2..=steps {
            w = self.f.eval(w);
            if !self.non_square(self.f.field.mul(&u, &self.ring.eval(h, &w))) {
                return false;
            }
        }
        true
    }

    fn children(&self, h: &FqPoly, mult: usize, seed: u64) -> Result<Vec<(FqPoly, usize)>> {
        let ring = &self.ring;
        let fpoly = self.f.poly(ring);
        Ok(match self.transition(h) {
            Transition::Inert => vec![(fqpoly::monic(ring, &ring.compose(h, &fpoly)), mult)],
            Transition::Ramified => {
                let c0 = self.f.critical_point();
                vec![(ring.poly(vec![self.f.field.neg(&c0), 1]), 2 * mult)]
            }
            Transition::Split => {
                let d = h.degree().unwrap();
                if d > SPLIT_DEGREE_BUDGET {
                    return Err(Error::budget(format!(
                        "splitting a degree {} composite exceeds the degree budget {SPLIT_DEGREE_BUDGET}",
                        2 * d
                    )));
                }
                let composite = ring.compose(h, &fpoly);
                fqpoly::split_equal_degree(ring, &composite, d, seed)
                    .into_iter()
                    .map(|g| (g, mult))
                    .collect()
            }
        })
    }

    /// Factor lists of f¹, ..., f^levels.
    fn levels(&self, levels: usize) -> Result<Vec<Vec<(FqPoly, usize)>>> {
        let ring = &self.ring;
        let first = fqpoly::factor(ring, &self.f.poly(ring), FACTOR_SEED)?;
        let mut out = vec![first.factors];
        for n in 1..levels {
            let prev = &out[n - 1];
            let next: Vec<Vec<(FqPoly, usize)>> = prev
                .par_iter()
                .enumerate()
                .map(|(i, (h, m))| self.children(h, *m, FACTOR_SEED ^ ((n as u64) << 32) ^ i as u64))
                .collect::<Result<_>>()?;
            out.push(next.into_iter().flatten().collect());
        }
        Ok(out)
    }
}

fn require_odd(f: &FqQuadratic) -> Result<()> {
    if f.field.characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    Ok(())
}

/// Factor records of fⁿ for n = 1..=N, each factor labelled Certified,
/// Heuristic (irreducible composition through level N) or Unstable.
pub fn stable_factors(f: &FqQuadratic, n_max: usize) -> Result<Vec<Vec<FactorRecord>>> {
    require_odd(f)?;
    if n_max == 0 {
        return Err(Error::precondition("need N ≥ 1"));
    }
    let s = Settler::new(f);
    let levels = s.levels(n_max)?;
    Ok(levels
        .into_iter()
        .enumerate()
        .map(|(i, facs)| {
            let n = i + 1;
            facs.into_iter()
                .map(|(h, m)| {
                    let stability = if s.certified(&h) {
                        Stability::Certified
                    } else if s.persists(&h, n_max - n) && n < n_max {
                        Stability::Heuristic
                    } else {
                        Stability::Unstable
                    };
                    FactorRecord { factor: h, multiplicity: m, stability }
                })
                .collect()
        })
        .collect())
}

/// Settledness statistics sₙ/2ⁿ for n = 1..=N.
pub fn settled_report(f: &FqQuadratic, n_max: usize) -> Result<Vec<SettlednessReport>> {
    Ok(stable_factors(f, n_max)?
        .into_iter()
        .enumerate()
        .map(|(i, records)| {
            let n = i + 1;
            let mut degrees: Vec<usize> = records
                .iter()
                .flat_map(|r| std::iter::repeat(r.degree()).take(r.multiplicity))
                .collect();
            degrees.sort_unstable();
            let sum_of = |s: Stability| -> usize {
                records.iter().filter(|r| r.stability == s).map(|r| r.degree() * r.multiplicity).sum()
            };
            let certified = sum_of(Stability::Certified);
            let heuristic = sum_of(Stability::Heuristic);
            let full = (1u64 << n) as f64;
            SettlednessReport {
                n,
                factor_degrees: degrees,
                certified_degree: certified,
                heuristic_degree: heuristic,
                stable_degree: certified + heuristic,
                ratio: (certified + heuristic) as f64 / full,
                certified_ratio: certified as f64 / full,
            }
        })
        .collect())
}

/// Counts of how the factors of fⁿ behave under one more composition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionRow {
    pub n: usize,
    pub degree: usize,
    pub inert: usize,
    pub split: usize,
    pub ramified: usize,
}

/// Transition counts from fⁿ to fⁿ⁺¹ for n = 1..=N, keyed by factor degree.
pub fn markov_transition_estimate(f: &FqQuadratic, n_max: usize) -> Result<Vec<TransitionRow>> {
    require_odd(f)?;
    if n_max == 0 {
        return Err(Error::precondition("need N ≥ 1"));
    }
    let s = Settler::new(f);
    let levels = s.levels(n_max)?;
    let mut rows = Vec::new();
    for (i, facs) in levels.iter().enumerate() {
        let mut by_degree: std::collections::BTreeMap<usize, TransitionRow> = Default::default();
        for (h, m) in facs {
            let d = h.degree().unwrap();
            let row = by_degree.entry(d).or_insert(TransitionRow { n: i + 1, degree: d, inert: 0, split: 0, ramified: 0 });
            match s.transition(h) {
                Transition::Inert => row.inert += m,
                Transition::Split => row.split += m,
                Transition::Ramified => row.ramified += m,
            }
        }
        rows.extend(by_degree.into_values());
    }
    Ok(rows)
}

/// Is 0 periodic under x² + c in the field containing c?
pub fn hyperbolic_membership(field: &Fq, c: u64) -> Result<bool> {
    if field.characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    let step = |x: u64| field.add(&field.mul(&x, &x), &c);
    // 0 is periodic iff it recurs within q steps
    let mut x = step(0);
    for _ in 0..field.order() {
        if x == 0 {
            return Ok(true);
        }
        x = step(x);
    }
    Ok(false)
}

/// Largest n with c ∈ Iₙ: the backward orbit of 0 under x² + c stays inside
/// the field for n levels. `None` means every level (c ∈ ∩ Iₙ).
pub fn preimage_depth(field: &Fq, c: u64) -> Option<usize> {
    let mut layer = vec![0u64];
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    seen.insert(layer.clone());
    let mut n = 0;
    loop {
        let mut next: Vec<u64> = Vec::new();
        for &z in &layer {
            if let Some(r) = field.sqrt(field.sub(&z, &c)) {
                next.push(r);
                next.push(field.neg(&r));
            }
        }
        next.sort_unstable();
        next.dedup();
        if next.is_empty() {
            return Some(n);
        }
        n += 1;
        if !seen.insert(next.clone()) {
            return None;
        }
        layer = next;
    }
}

/// c ∈ Iₙ.
pub fn in_mandelbrot_approximant(field: &Fq, c: u64, n: usize) -> bool {
    preimage_depth(field, c).map_or(true, |depth| depth >= n)
}

/// Preimage depths of every c of exact degree d over F_p, in packed order.
pub fn degree_layer_depths(p: u64, d: u32) -> Result<Vec<(u64, Option<usize>)>> {
    check_budget(p, d)?;
    let field = Fq::extension(p, d)?;
    Ok(field
        .elements()
        .collect::<Vec<_>>()
        .into_par_iter()
        .filter(|&c| field.element_degree(c) == d)
        .map(|c| (c, preimage_depth(&field, c)))
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct MandelbrotLayer {
    pub d: u32,
    pub members: Vec<u64>,
    pub layer: DensityLayer,
}

/// Iₙ restricted to degrees d ≤ D with the truncated weighted density.
pub fn mandelbrot_in(p: u64, n: usize, d_max: u32) -> Result<Vec<MandelbrotLayer>> {
    let per_degree: Vec<(u32, Vec<(u64, Option<usize>)>)> = (1..=d_max)
        .map(|d| Ok((d, degree_layer_depths(p, d)?)))
        .collect::<Result<_>>()?;
    let counts: Vec<(u32, u64, u64)> = per_degree
        .iter()
        .map(|(d, depths)| {
            let members = depths.iter().filter(|(_, k)| k.map_or(true, |k| k >= n)).count() as u64;
            (*d, depths.len() as u64, members)
        })
        .collect();
    let layers = profile_from_counts(&counts, p);
    Ok(per_degree
        .into_iter()
        .zip(layers)
        .map(|((d, depths), layer)| MandelbrotLayer {
            d,
            members: depths.into_iter().filter(|(_, k)| k.map_or(true, |k| k >= n)).map(|(c, _)| c).collect(),
            layer,
        })
        .collect())
}

/// δ(Iₙ) truncated at degree D for n = 0..=n_max.
pub fn hyperbolic_density_profile(p: u64, n_max: usize, d_max: u32) -> Result<Vec<f64>> {
    let per_degree: Vec<Vec<Option<usize>>> = (1..=d_max)
        .map(|d| Ok(degree_layer_depths(p, d)?.into_iter().map(|(_, k)| k).collect()))
        .collect::<Result<_>>()?;
    Ok((0..=n_max)
        .map(|n| {
            let counts: Vec<(u32, u64, u64)> = per_degree
                .iter()
                .enumerate()
                .map(|(i, depths)| {
                    let members = depths.iter().filter(|k| k.map_or(true, |k| k >= n)).count() as u64;
                    (i as u32 + 1, depths.len() as u64, members)
                })
                .collect();
            profile_from_counts(&counts, p).last().map_or(1.0, |l| l.cumulative_density)
        })
        .collect())
}
