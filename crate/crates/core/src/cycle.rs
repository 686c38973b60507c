//! Weighted balanced fans with rational weights and their intersection theory.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fan::{complete_refinement, fan_covers_support, quotient_by_span, stellar_subdivision, Cone, Fan};
use crate::lattice::{
    clear_denominators, fmt_vec, lattice_index, primitive, solve_in_span, to_rational, IntVector, QuotientMap,
    RationalVector,
};
use crate::polytope::{integral_length, Polytope};

/// Retry budget used when `TROP_MAX_SEED_RETRIES` is unset or unparsable.
pub const DEFAULT_MAX_SEED_RETRIES: u32 = 32;

/// Seed used by operations that do not take one explicitly.
pub const DEFAULT_SEED: u64 = 1;

const GENERIC_DENOMINATOR_BITS: u32 = 16;

/// Number of seeds tried before giving up on a generic displacement.
pub fn max_seed_retries() -> u32 {
    std::env::var("TROP_MAX_SEED_RETRIES")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&n| n > 0)
        .unwrap_or(DEFAULT_MAX_SEED_RETRIES)
}

#[derive(Clone, Debug)]
pub struct TropicalCycle {
    ambient_dim: usize,
    dim: usize,
    fan: Fan,
    weights: BTreeMap<Cone, BigRational>,
}

/// A `(k-1)`-cone where the weighted primitive normals do not cancel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalanceViolation {
    pub ridge: Cone,
    /// The nonzero sum, in coordinates of the quotient lattice.
    pub residual: RationalVector,
}

impl fmt::Display for BalanceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (residual {})", self.ridge, fmt_vec(&self.residual))
    }
}

impl TropicalCycle {
    /// Builds a cycle and verifies the balancing condition.
    pub fn new(ambient_dim: usize, dim: usize, cones: Vec<(Cone, BigRational)>) -> Result<TropicalCycle> {
        let c = TropicalCycle::unchecked(ambient_dim, dim, cones)?;
        if let Some(v) = c.balance_violation() {
            return Err(Error::Unbalanced { cone: v.to_string() });
        }
        Ok(c)
    }

    /// Builds a cycle without the balancing check. Fan axioms and cone
    /// dimensions are still verified.
    pub fn unchecked(ambient_dim: usize, dim: usize, cones: Vec<(Cone, BigRational)>) -> Result<TropicalCycle> {
        if dim > ambient_dim {
            return Err(Error::WrongConeDimension { expected: ambient_dim, found: dim });
        }
        let mut weights: BTreeMap<Cone, BigRational> = BTreeMap::new();
        for (c, w) in cones {
            if c.ambient_dim() != ambient_dim {
                return Err(Error::DimensionMismatch { expected: ambient_dim, found: c.ambient_dim() });
            }
            if c.dim() != dim {
                return Err(Error::WrongConeDimension { expected: dim, found: c.dim() });
            }
            *weights.entry(c).or_insert_with(BigRational::zero) += w;
        }
        let fan = Fan::from_cones(ambient_dim, weights.keys().cloned());
        fan.check_axioms().map_err(Error::NotAFan)?;
        Ok(TropicalCycle { ambient_dim, dim, fan, weights })
    }

    /// The cycle with empty support.
    pub fn zero(ambient_dim: usize, dim: usize) -> TropicalCycle {
        TropicalCycle { ambient_dim, dim, fan: Fan::empty(ambient_dim), weights: BTreeMap::new() }
    }

    /// The 0-cycle `w·{0}`.
    pub fn point(ambient_dim: usize, weight: BigRational) -> TropicalCycle {
        if weight.is_zero() {
            return TropicalCycle::zero(ambient_dim, 0);
        }
        TropicalCycle::unchecked(ambient_dim, 0, vec![(Cone::zero(ambient_dim), weight)]).expect("origin is a fan")
    }

    /// Builds a cycle whose cones are known to form a fan, dropping zero weights.
    fn from_parts(ambient_dim: usize, dim: usize, weights: BTreeMap<Cone, BigRational>) -> TropicalCycle {
        let weights: BTreeMap<Cone, BigRational> = weights.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        let fan = Fan::from_cones(ambient_dim, weights.keys().cloned());
        TropicalCycle { ambient_dim, dim, fan, weights }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    /// Weighted `k`-cones in canonical order, zero weights included.
    pub fn weighted_cones(&self) -> impl Iterator<Item = (&Cone, &BigRational)> {
        self.weights.iter()
    }

    pub fn weight(&self, cone: &Cone) -> BigRational {
        self.weights.get(cone).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Cones with nonzero weight.
    pub fn support(&self) -> Vec<(Cone, BigRational)> {
        self.weights.iter().filter(|(_, w)| !w.is_zero()).map(|(c, w)| (c.clone(), w.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.values().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.weights.values().all(BigRational::is_integer)
    }

    pub fn is_balanced(&self) -> bool {
        self.balance_violation().is_none()
    }

    /// First ridge, in canonical order, where balancing fails.
    pub fn balance_violation(&self) -> Option<BalanceViolation> {
        if self.dim == 0 {
            return None;
        }
        for ridge in self.fan.cones_of_dim(self.dim - 1) {
            let q = quotient_by_span(ridge).expect("ridge is not full-dimensional");
            let mut sum = vec![BigRational::zero(); q.target_dim()];
            for (sigma, w) in &self.weights {
                if w.is_zero() || !sigma.contains_cone(ridge) {
                    continue;
                }
                let u = quotient_ray(sigma, &q);
                for (s, x) in sum.iter_mut().zip(&u) {
                    *s += w * BigRational::from(x.clone());
                }
            }
            if sum.iter().any(|x| !x.is_zero()) {
                return Some(BalanceViolation { ridge: ridge.clone(), residual: sum });
            }
        }
        None
    }

    fn ensure_balanced(&self) -> Result<()> {
        match self.balance_violation() {
            Some(v) => Err(Error::Unbalanced { cone: v.to_string() }),
            None => Ok(()),
        }
    }

    pub fn scalar_multiply(&self, lambda: &BigRational) -> TropicalCycle {
        if lambda.is_zero() {
            return TropicalCycle::zero(self.ambient_dim, self.dim);
        }
        let weights = self.weights.iter().map(|(c, w)| (c.clone(), w * lambda)).collect();
        TropicalCycle { weights, ..self.clone() }
    }

    pub fn negate(&self) -> TropicalCycle {
        self.scalar_multiply(&-BigRational::one())
    }

    /// Weight of the `k`-cone containing `p`, or zero off the support.
    fn weight_at(&self, p: &[BigRational]) -> BigRational {
        self.weights
            .iter()
            .find(|(c, _)| c.contains(p))
            .map(|(_, w)| w.clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// Weights induced on the `k`-cones of a fan refining this cycle's fan.
    fn induced_weights(&self, g: &Fan) -> BTreeMap<Cone, BigRational> {
        let mut out = BTreeMap::new();
        for delta in g.cones_of_dim(self.dim) {
            let w = match delta.relative_interior_point() {
                Ok(p) => self.weight_at(&p),
                Err(_) => self.weight_at(&vec![BigRational::zero(); self.ambient_dim]),
            };
            if !w.is_zero() {
                out.insert(delta.clone(), w);
            }
        }
        out
    }

    /// The same cycle on the cones of `fan`, which must subdivide the support.
    pub fn refine(&self, fan: &Fan) -> Result<TropicalCycle> {
        if fan.ambient_dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: fan.ambient_dim() });
        }
        if !fan_covers_support(fan, &self.support()) {
            return Err(Error::NotARefinement);
        }
        let induced = self.induced_weights(fan);
        let refined = TropicalCycle::from_parts(self.ambient_dim, self.dim, induced);
        // Every piece must lie inside a single weighted cone.
        let own = self.support();
        let inside = refined.support().iter().all(|(piece, _)| own.iter().any(|(c, _)| c.contains_cone(piece)));
        if !inside || !fan_covers_support(&refined.fan, &own) {
            return Err(Error::NotARefinement);
        }
        Ok(refined)
    }

    /// Refinement by the stellar subdivision of the cycle's own fan at `v`.
    pub fn stellar_refinement(&self, v: &[BigRational]) -> Result<TropicalCycle> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: v.len() });
        }
        if v.iter().all(Zero::is_zero) {
            return Err(Error::ZeroVector);
        }
        let sub = stellar_subdivision(&self.fan, v);
        Ok(TropicalCycle::from_parts(self.ambient_dim, self.dim, self.induced_weights(&sub)))
    }

    fn check_same_space(&self, other: &TropicalCycle) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: other.ambient_dim });
        }
        if self.dim != other.dim {
            return Err(Error::WrongConeDimension { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    pub fn add(&self, other: &TropicalCycle) -> Result<TropicalCycle> {
        self.check_same_space(other)?;
        let g = complete_refinement(self.ambient_dim, &[&self.fan, &other.fan]);
        let mut weights = self.induced_weights(&g);
        for (c, w) in other.induced_weights(&g) {
            *weights.entry(c).or_insert_with(BigRational::zero) += w;
        }
        Ok(TropicalCycle::from_parts(self.ambient_dim, self.dim, weights))
    }

    /// Same dimension, same support and same induced weights on a common
    /// refinement.
    pub fn equivalent(&self, other: &TropicalCycle) -> bool {
        if self.check_same_space(other).is_err() {
            return false;
        }
        let g = complete_refinement(self.ambient_dim, &[&self.fan, &other.fan]);
        self.induced_weights(&g) == other.induced_weights(&g)
    }

    /// Weight of the origin in a 0-cycle.
    pub fn degree(&self) -> Result<BigRational> {
        if self.dim != 0 {
            return Err(Error::WrongConeDimension { expected: 0, found: self.dim });
        }
        Ok(self.weights.values().fold(BigRational::zero(), |a, w| a + w))
    }
}

impl fmt::Display for TropicalCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-cycle in R^{}", self.dim, self.ambient_dim)?;
        for (c, w) in &self.weights {
            write!(f, "\n  {w} * {c}")?;
        }
        Ok(())
    }
}

/// Primitive generator of the ray `q(σ)` for a cone one dimension above the
/// kernel of `q`.
fn quotient_ray(sigma: &Cone, q: &QuotientMap) -> IntVector {
    let p = sigma.relative_interior_point().expect("cone above a ridge is nonzero");
    primitive(&clear_denominators(&q.apply(&p)))
}

/// Codimension-1 skeleton of the normal fan, weighted by the lattice lengths
/// of the dual edges.
pub fn tropical_hypersurface(p: &Polytope) -> Result<TropicalCycle> {
    if let Some(v) = p.vertices().iter().find(|v| !v.iter().all(BigRational::is_integer)) {
        return Err(Error::NotLattice(fmt_vec(v)));
    }
    let n = p.ambient_dim();
    if n == 0 {
        return Err(Error::NotFullDimensional { dim: 0, ambient: 0 });
    }
    let nf = p.normal_fan()?;
    let mut cones = Vec::new();
    for (face, cone) in &nf.duals {
        if face.dim == 1 {
            cones.push((cone.clone(), BigRational::from(integral_length(face)?)));
        }
    }
    TropicalCycle::new(n, n - 1, cones)
}

/// One admissible pair in the intersection sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContributingPair {
    /// Index into the first cycle's weighted cones.
    pub left: usize,
    /// Index into the second cycle's weighted cones.
    pub right: usize,
    /// Lattice index of the sum of the two span lattices.
    pub lattice_index: BigInt,
    /// `lattice_index · c₁ · c₂`.
    pub product: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionResult {
    pub value: BigRational,
    pub contributing_pairs: Vec<ContributingPair>,
    /// The seed whose displacement passed the genericity check.
    pub seed: u64,
    pub displacement: RationalVector,
}

fn generic_vector(n: usize, seed: u64) -> RationalVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let den = BigInt::from(1u64 << GENERIC_DENOMINATOR_BITS);
    let bound = 1i64 << GENERIC_DENOMINATOR_BITS;
    (0..n)
        .map(|_| BigRational::new(BigInt::from(rng.gen_range(-bound..=bound)), den.clone()))
        .collect()
}

/// Sum of `C·c₁·c₂` over admissible pairs for displacement `a`; `Err` with a
/// reason when `a` is not generic.
fn displaced_pairs(
    c1: &[(&Cone, &BigRational)],
    c2: &[(&Cone, &BigRational)],
    a: &[BigRational],
) -> std::result::Result<Vec<ContributingPair>, String> {
    let n = a.len();
    let mut pairs = Vec::new();
    for (i, (sigma, w1)) in c1.iter().enumerate() {
        if w1.is_zero() {
            continue;
        }
        let bs: Vec<RationalVector> = sigma.span_basis().row_vecs().iter().map(|r| to_rational(r)).collect();
        for (j, (tau, w2)) in c2.iter().enumerate() {
            if w2.is_zero() {
                continue;
            }
            let bt: Vec<RationalVector> = tau.span_basis().row_vecs().iter().map(|r| to_rational(r)).collect();
            let mut both = bs.clone();
            both.extend(bt.iter().cloned());
            let Some(coef) = solve_in_span(&both, a) else {
                // a escapes span σ + span τ, so the translates cannot meet.
                continue;
            };
            if bs.len() + bt.len() != n || crate::lattice::rational_rank(&both) != n {
                return Err(format!("displacement lies in the deficient span of {sigma} and {tau}"));
            }
            // a = s + t with s ∈ span σ, t ∈ span τ; the meeting point is s,
            // and it must lie in σ and s - a = -t in τ.
            let mut s = vec![BigRational::zero(); n];
            for (c, b) in coef.iter().zip(&both).take(bs.len()) {
                for (si, bi) in s.iter_mut().zip(b) {
                    *si += c * bi;
                }
            }
            let minus_t: RationalVector = s.iter().zip(a).map(|(x, y)| x - y).collect();
            if !sigma.contains(&s) || !tau.contains(&minus_t) {
                continue;
            }
            if !sigma.contains_in_relative_interior(&s) || !tau.contains_in_relative_interior(&minus_t) {
                return Err(format!("intersection of {sigma} and {tau} meets a boundary"));
            }
            let index = lattice_index(&sigma.span_basis(), &tau.span_basis()).map_err(|e| e.to_string())?;
            let product = BigRational::from(index.clone()) * *w1 * *w2;
            pairs.push(ContributingPair { left: i, right: j, lattice_index: index, product });
        }
    }
    Ok(pairs)
}

/// Intersection number of a `k`-cycle and an `(n-k)`-cycle by the fan
/// displacement rule, with the displacement drawn from `seed`.
pub fn stable_intersection_number(c1: &TropicalCycle, c2: &TropicalCycle, seed: u64) -> Result<IntersectionResult> {
    stable_intersection_number_with_retries(c1, c2, seed, max_seed_retries())
}

pub fn stable_intersection_number_with_retries(
    c1: &TropicalCycle,
    c2: &TropicalCycle,
    seed: u64,
    attempts: u32,
) -> Result<IntersectionResult> {
    let n = c1.ambient_dim;
    if c2.ambient_dim != n {
        return Err(Error::DimensionMismatch { expected: n, found: c2.ambient_dim });
    }
    if c1.dim + c2.dim != n {
        return Err(Error::NotComplementaryDims { k: c1.dim, m: c2.dim, n });
    }
    c1.ensure_balanced()?;
    c2.ensure_balanced()?;
    let w1: Vec<(&Cone, &BigRational)> = c1.weighted_cones().collect();
    let w2: Vec<(&Cone, &BigRational)> = c2.weighted_cones().collect();
    let mut reason = String::from("no attempts");
    for attempt in 0..attempts.max(1) {
        let s = seed.wrapping_add(attempt as u64);
        let a = generic_vector(n, s);
        match displaced_pairs(&w1, &w2, &a) {
            Ok(pairs) => {
                let value = pairs.iter().fold(BigRational::zero(), |acc, p| acc + &p.product);
                return Ok(IntersectionResult { value, contributing_pairs: pairs, seed: s, displacement: a });
            }
            Err(r) => reason = r,
        }
    }
    Err(Error::GenericityExhausted { seed, attempts, reason })
}

/// Stable product with the default seed.
pub fn stable_product(c1: &TropicalCycle, c2: &TropicalCycle) -> Result<TropicalCycle> {
    stable_product_seeded(c1, c2, DEFAULT_SEED)
}

/// Stable product of a `k`-cycle and an `m`-cycle, a `(k+m-n)`-cycle. When
/// `k + m < n` the product is the zero 0-cycle.
pub fn stable_product_seeded(c1: &TropicalCycle, c2: &TropicalCycle, seed: u64) -> Result<TropicalCycle> {
    let n = c1.ambient_dim;
    if c2.ambient_dim != n {
        return Err(Error::DimensionMismatch { expected: n, found: c2.ambient_dim });
    }
    c1.ensure_balanced()?;
    c2.ensure_balanced()?;
    if c1.dim + c2.dim < n {
        return Ok(TropicalCycle::zero(n, 0));
    }
    let d = c1.dim + c2.dim - n;
    if d == 0 {
        let r = stable_intersection_number(c1, c2, seed)?;
        return Ok(TropicalCycle::point(n, r.value));
    }
    if c1.is_zero() || c2.is_zero() {
        return Ok(TropicalCycle::zero(n, d));
    }
    let g = complete_refinement(n, &[&c1.fan, &c2.fan]);
    let r1 = c1.induced_weights(&g);
    let r2 = c2.induced_weights(&g);
    let mut weights = BTreeMap::new();
    for delta in g.cones_of_dim(d) {
        let s1 = star_cycle(&r1, delta, c1.dim)?;
        if s1.is_zero() {
            continue;
        }
        let s2 = star_cycle(&r2, delta, c2.dim)?;
        if s2.is_zero() {
            continue;
        }
        let w = stable_intersection_number(&s1, &s2, seed)?.value;
        if !w.is_zero() {
            weights.insert(delta.clone(), w);
        }
    }
    let out = TropicalCycle::from_parts(n, d, weights);
    out.ensure_balanced()?;
    Ok(out)
}

/// Star of `delta` in a weighted fan, pushed to `R^n / span δ`.
fn star_cycle(weights: &BTreeMap<Cone, BigRational>, delta: &Cone, k: usize) -> Result<TropicalCycle> {
    let q = quotient_by_span(delta)?;
    let target = q.target_dim();
    let mut cones = Vec::new();
    for (sigma, w) in weights {
        if sigma.contains_cone(delta) {
            cones.push((sigma.image(&q), w.clone()));
        }
    }
    if cones.is_empty() {
        return Ok(TropicalCycle::zero(target, k - delta.dim()));
    }
    TropicalCycle::unchecked(target, k - delta.dim(), cones)
}

/// Degree of the iterated stable product of the tropical hypersurfaces.
pub fn intersection_number_of_hypersurfaces(polytopes: &[Polytope]) -> Result<BigRational> {
    intersection_number_of_hypersurfaces_seeded(polytopes, DEFAULT_SEED).map(|(v, _)| v)
}

/// Like [`intersection_number_of_hypersurfaces`], also returning the audit of
/// the final 0-dimensional intersection.
pub fn intersection_number_of_hypersurfaces_seeded(
    polytopes: &[Polytope],
    seed: u64,
) -> Result<(BigRational, IntersectionResult)> {
    let Some(first) = polytopes.first() else { return Err(Error::EmptyInput("no polytopes")) };
    let n = first.ambient_dim();
    if polytopes.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: polytopes.len() });
    }
    let hs: Vec<TropicalCycle> = polytopes.iter().map(tropical_hypersurface).collect::<Result<_>>()?;
    let (last, init) = hs.split_last().expect("n >= 1");
    let r = match init.split_first() {
        None => {
            let full = TropicalCycle::new(n, n, vec![(Cone::full(n), BigRational::one())])?;
            stable_intersection_number(last, &full, seed)?
        }
        Some((first, rest)) => {
            let mut acc = first.clone();
            for h in rest {
                acc = stable_product_seeded(&acc, h, seed)?;
            }
            stable_intersection_number(&acc, last, seed)?
        }
    };
    Ok((r.value.clone(), r))
}

/// Convenience for building test and example cycles from integer generators.
pub fn cone_from_i64(n: usize, rays: &[&[i64]], lineality: &[&[i64]]) -> Cone {
    let r: Vec<IntVector> = rays.iter().map(|v| crate::lattice::ints(v)).collect();
    let l: Vec<IntVector> = lineality.iter().map(|v| crate::lattice::ints(v)).collect();
    Cone::from_generators(n, &r, &l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{rat, ratio, rats};

    fn ray_cycle(n: usize, rays: &[(&[i64], i64)]) -> TropicalCycle {
        TropicalCycle::new(n, 1, rays.iter().map(|(r, w)| (cone_from_i64(n, &[r], &[]), rat(*w))).collect()).unwrap()
    }

    fn line() -> TropicalCycle {
        ray_cycle(2, &[(&[-1, 0], 1), (&[0, -1], 1), (&[1, 1], 1)])
    }

    fn axis(dir: &[i64], w: i64) -> TropicalCycle {
        TropicalCycle::new(2, 1, vec![(cone_from_i64(2, &[], &[dir]), rat(w))]).unwrap()
    }

    fn poly(pts: &[&[i64]]) -> Polytope {
        Polytope::convex_hull(&pts.iter().map(|p| rats(p)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn balance_examples() {
        assert!(line().is_balanced());
        let bad = TropicalCycle::unchecked(2, 1, vec![(cone_from_i64(2, &[&[1, 0]], &[]), rat(1)), (cone_from_i64(2, &[&[0, 1]], &[]), rat(1))]).unwrap();
        let v = bad.balance_violation().unwrap();
        assert_eq!(v.ridge, Cone::zero(2));
        assert_eq!(v.residual, rats(&[1, 1]));
        let cross = |w: [i64; 4]| {
            TropicalCycle::unchecked(
                2,
                1,
                [[1, 0], [-1, 0], [0, 1], [0, -1]]
                    .iter()
                    .zip(w)
                    .map(|(r, w)| (cone_from_i64(2, &[r], &[]), rat(w)))
                    .collect(),
            )
            .unwrap()
        };
        assert!(!cross([1, 1, 1, 2]).is_balanced());
        assert!(cross([3, 3, 5, 5]).is_balanced());
        assert!(matches!(
            TropicalCycle::new(2, 1, vec![(cone_from_i64(2, &[&[1, 0]], &[]), rat(1))]),
            Err(Error::Unbalanced { .. })
        ));
    }

    #[test]
    fn construction_errors() {
        let r = TropicalCycle::new(2, 2, vec![(cone_from_i64(2, &[&[1, 0]], &[]), rat(1))]);
        assert_eq!(r.unwrap_err(), Error::WrongConeDimension { expected: 2, found: 1 });
        let overlapping = TropicalCycle::unchecked(
            2,
            2,
            vec![
                (cone_from_i64(2, &[&[1, 0], &[0, 1]], &[]), rat(1)),
                (cone_from_i64(2, &[&[1, 0], &[1, 1]], &[]), rat(1)),
            ],
        );
        assert!(matches!(overlapping, Err(Error::NotAFan(_))));
    }

    #[test]
    fn addition() {
        let l = line();
        assert!(l.add(&l.negate()).unwrap().is_zero());
        let two = l.add(&l).unwrap();
        assert!(two.equivalent(&l.scalar_multiply(&rat(2))));
        assert!(two.support().iter().all(|(_, w)| *w == rat(2)));
        let cross = axis(&[1, 0], 1).add(&axis(&[0, 1], 1)).unwrap();
        assert_eq!(cross.support().len(), 4);
        assert!(cross.support().iter().all(|(c, w)| c.dim() == 1 && c.is_pointed() && *w == rat(1)));
        assert!(cross.is_balanced());
        assert!(matches!(l.add(&TropicalCycle::zero(2, 0)), Err(Error::WrongConeDimension { .. })));
    }

    #[test]
    fn equivalence() {
        let l = line();
        assert!(l.equivalent(&l.stellar_refinement(&rats(&[1, 1])).unwrap()));
        assert!(!l.equivalent(&l.scalar_multiply(&rat(2))));
        let mut with_zero: Vec<(Cone, BigRational)> = l.support();
        with_zero.push((cone_from_i64(2, &[&[1, -1]], &[]), rat(0)));
        let padded = TropicalCycle::new(2, 1, with_zero).unwrap();
        assert!(padded.equivalent(&l));
        let split = ray_cycle(2, &[(&[1, 0], 1), (&[-1, 0], 1)]);
        assert!(split.equivalent(&axis(&[1, 0], 1)));
    }

    #[test]
    fn scalar_multiplication() {
        let l = line();
        assert!(l.scalar_multiply(&rat(1)).equivalent(&l));
        assert!(l.scalar_multiply(&rat(0)).is_zero());
        let m = l.scalar_multiply(&rat(-2));
        assert!(m.is_balanced());
        assert_eq!(stable_intersection_number(&m, &l, 1).unwrap().value, rat(-2));
        assert!(l.scalar_multiply(&ratio(1, 2)).is_balanced());
        assert!(!l.scalar_multiply(&ratio(1, 2)).is_integral());
    }

    #[test]
    fn hypersurfaces() {
        let simplex = tropical_hypersurface(&poly(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap();
        let expected = ray_cycle(2, &[(&[-1, 0], 1), (&[0, -1], 1), (&[1, 1], 1)]);
        assert!(simplex.equivalent(&expected));
        let rect = tropical_hypersurface(&poly(&[&[0, 0], &[2, 0], &[0, 1], &[2, 1]])).unwrap();
        let expected = ray_cycle(2, &[(&[0, 1], 2), (&[0, -1], 2), (&[1, 0], 1), (&[-1, 0], 1)]);
        assert!(rect.equivalent(&expected));
        assert!(matches!(
            tropical_hypersurface(&poly(&[&[0, 0], &[3, 0]])),
            Err(Error::NotFullDimensional { .. })
        ));
        let half = Polytope::convex_hull(&[rats(&[0, 0]), vec![ratio(1, 2), rat(0)], rats(&[0, 1])]).unwrap();
        assert!(matches!(tropical_hypersurface(&half), Err(Error::NotLattice(_))));
    }

    #[test]
    fn intersection_numbers() {
        let l = line();
        let r = stable_intersection_number(&l, &l, 1).unwrap();
        assert_eq!(r.value, rat(1));
        assert_eq!(r.contributing_pairs.len(), 1);
        let r = stable_intersection_number(&axis(&[1, 0], 1), &axis(&[0, 1], 1), 1).unwrap();
        assert_eq!(r.value, rat(1));
        assert_eq!(r.contributing_pairs[0].lattice_index, BigInt::from(1));
        let l2 = l.scalar_multiply(&rat(2));
        assert_eq!(stable_intersection_number(&l2, &l2, 5).unwrap().value, rat(4));
        assert!(matches!(stable_intersection_number(&l, &TropicalCycle::zero(2, 0), 1), Err(Error::NotComplementaryDims { .. })));
        let bad = TropicalCycle::unchecked(2, 1, vec![(cone_from_i64(2, &[&[1, 0]], &[]), rat(1))]).unwrap();
        assert!(matches!(stable_intersection_number(&bad, &l, 1), Err(Error::Unbalanced { .. })));
    }

    #[test]
    fn lattice_index_enters() {
        // x-axis against the line through (1, 2): index |det[[1,0],[1,2]]| = 2.
        let r = stable_intersection_number(&axis(&[1, 0], 1), &axis(&[1, 2], 3), 1).unwrap();
        assert_eq!(r.value, rat(6));
    }

    #[test]
    fn seed_independence() {
        let l = line();
        let rect = tropical_hypersurface(&poly(&[&[0, 0], &[2, 0], &[0, 1], &[2, 1]])).unwrap();
        let values: Vec<BigRational> =
            (1..=6).map(|s| stable_intersection_number(&l, &rect, s).unwrap().value).collect();
        assert!(values.iter().all(|v| *v == rat(3)));
    }

    #[test]
    fn parallel_lines_miss_after_displacement() {
        let x = axis(&[1, 0], 1);
        let r = stable_intersection_number(&x, &x, 1).unwrap();
        assert_eq!(r.value, rat(0));
        assert!(r.contributing_pairs.is_empty());
    }

    #[test]
    fn products_in_the_plane() {
        let l = line();
        let p = stable_product(&l, &l).unwrap();
        assert_eq!(p.dim(), 0);
        assert_eq!(p.degree().unwrap(), rat(1));
        let z = stable_product(&l, &TropicalCycle::zero(2, 1)).unwrap();
        assert!(z.is_zero());
        let low = stable_product(&TropicalCycle::point(2, rat(1)), &l).unwrap();
        assert!(low.is_zero() && low.dim() == 0);
        let full = TropicalCycle::new(2, 2, vec![(Cone::full(2), rat(1))]).unwrap();
        assert!(stable_product(&l, &full).unwrap().equivalent(&l));
    }

    #[test]
    fn plane_times_plane_is_line() {
        let d3 = poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let h = tropical_hypersurface(&d3).unwrap();
        assert!(h.is_balanced());
        let l = stable_product(&h, &h).unwrap();
        assert_eq!(l.dim(), 1);
        let expected = ray_cycle(3, &[(&[-1, 0, 0], 1), (&[0, -1, 0], 1), (&[0, 0, -1], 1), (&[1, 1, 1], 1)]);
        assert!(l.equivalent(&expected), "{l}");
        assert_eq!(stable_intersection_number(&l, &h, 1).unwrap().value, rat(1));
    }

    #[test]
    fn hypersurface_degrees() {
        let d2 = poly(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(intersection_number_of_hypersurfaces(&[d2.clone(), d2.clone()]).unwrap(), rat(1));
        let a = poly(&[&[0, 0], &[2, 0], &[0, 2]]);
        let b = poly(&[&[0, 0], &[3, 0], &[0, 3]]);
        assert_eq!(intersection_number_of_hypersurfaces(&[a, b]).unwrap(), rat(6));
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(intersection_number_of_hypersurfaces(&[sq, d2]).unwrap(), rat(2));
        let seg = poly(&[&[0], &[3]]);
        assert_eq!(intersection_number_of_hypersurfaces(&[seg]).unwrap(), rat(3));
    }
}
