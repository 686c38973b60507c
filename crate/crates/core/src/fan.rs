//! Rational polyhedral cones and fans.
//!
//! A [`Cone`] keeps both descriptions: canonical generators (sorted primitive
//! rays orthogonal to a Hermite-reduced lineality basis) and canonical facet
//! inequalities / equations. Equality and ordering only look at the generator
//! side, which is unique for a given point set.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::dd::cone_generators;
use crate::error::{Error, Result};
use crate::lattice::{
    clear_denominators, dot_int, dot_mixed, fmt_vec, nullspace, primitive, project_out,
    rational_rank, saturate, solve_in_span, to_rational, IntVector, IntegerMatrix, QuotientMap, RationalVector,
};
use crate::polytope::Polytope;

#[derive(Clone, Debug)]
pub struct Cone {
    ambient_dim: usize,
    dim: usize,
    rays: Vec<IntVector>,
    lineality: Vec<IntVector>,
    /// Inward normals `a` with `a·x >= 0`, projected into the linear span.
    facets: Vec<IntVector>,
    /// Basis of the orthogonal complement of the span.
    equations: Vec<IntVector>,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Cone {}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cone {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl Hash for Cone {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rays: Vec<String> = self.rays.iter().map(|r| fmt_vec(r)).collect();
        write!(f, "cone[{}]", rays.join(" "))?;
        if !self.lineality.is_empty() {
            let lin: Vec<String> = self.lineality.iter().map(|r| fmt_vec(r)).collect();
            write!(f, "+lin[{}]", lin.join(" "))?;
        }
        Ok(())
    }
}

fn sign_normalized(v: IntVector) -> IntVector {
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => v.into_iter().map(|x| -x).collect(),
        _ => v,
    }
}

fn lattice_basis(n: usize, rows: Vec<IntVector>) -> Vec<IntVector> {
    let rows: Vec<IntVector> = rows.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    if rows.is_empty() {
        return Vec::new();
    }
    saturate(&IntegerMatrix::from_rows(n, rows)).row_vecs()
}

impl Cone {
    fn key(&self) -> (usize, usize, &Vec<IntVector>, &Vec<IntVector>) {
        (self.ambient_dim, self.dim, &self.lineality, &self.rays)
    }

    /// Cone generated by `rays` (nonnegative combinations) plus the linear
    /// span of `lineality`. Redundant generators are removed.
    pub fn from_generators(ambient_dim: usize, rays: &[IntVector], lineality: &[IntVector]) -> Cone {
        let rays: Vec<IntVector> =
            rays.iter().filter(|r| r.iter().any(|x| !x.is_zero())).map(|r| primitive(r)).collect();
        let lin_in: Vec<IntVector> =
            lineality.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
        for r in rays.iter().chain(&lin_in) {
            assert_eq!(r.len(), ambient_dim, "generator length does not match ambient dimension");
        }

        let dual = cone_generators(ambient_dim, &rays, &lin_in);
        let equations = lattice_basis(ambient_dim, dual.lineality);
        let eq_rat: Vec<RationalVector> = equations.iter().map(|e| to_rational(e)).collect();

        let mut facets: Vec<IntVector> = dual
            .rays
            .iter()
            .map(|a| primitive(&clear_denominators(&project_out(&to_rational(a), &eq_rat))))
            .filter(|a| a.iter().any(|x| !x.is_zero()))
            .collect();
        facets.sort();
        facets.dedup();

        let mut constraint_rows: Vec<RationalVector> = facets.iter().map(|a| to_rational(a)).collect();
        constraint_rows.extend(eq_rat.iter().cloned());
        let lineality = if constraint_rows.is_empty() {
            lattice_basis(ambient_dim, IntegerMatrix::identity(ambient_dim).row_vecs())
        } else {
            lattice_basis(ambient_dim, nullspace(&constraint_rows, ambient_dim))
        };
        let lin_rat: Vec<RationalVector> = lineality.iter().map(|l| to_rational(l)).collect();

        let pointed_dim = ambient_dim - equations.len() - lineality.len();
        let mut extreme: Vec<IntVector> = Vec::new();
        for r in &rays {
            let projected = primitive(&clear_denominators(&project_out(&to_rational(r), &lin_rat)));
            if projected.iter().all(Zero::is_zero) {
                continue;
            }
            let mut tight: Vec<RationalVector> =
                facets.iter().filter(|a| dot_int(a, &projected).is_zero()).map(|a| to_rational(a)).collect();
            tight.extend(eq_rat.iter().cloned());
            tight.extend(lin_rat.iter().cloned());
            if rational_rank(&tight) == ambient_dim - 1 && pointed_dim >= 1 {
                extreme.push(projected);
            }
        }
        extreme.sort();
        extreme.dedup();

        Cone {
            ambient_dim,
            dim: ambient_dim - equations.len(),
            rays: extreme,
            lineality,
            facets,
            equations,
        }
    }

    pub fn from_rational_generators(
        ambient_dim: usize,
        rays: &[RationalVector],
        lineality: &[RationalVector],
    ) -> Cone {
        let r: Vec<IntVector> = rays.iter().map(|v| clear_denominators(v)).collect();
        let l: Vec<IntVector> = lineality.iter().map(|v| clear_denominators(v)).collect();
        Cone::from_generators(ambient_dim, &r, &l)
    }

    /// `{x : a·x >= 0 for a in inequalities, e·x = 0 for e in equations}`.
    pub fn from_inequalities(ambient_dim: usize, inequalities: &[IntVector], equations: &[IntVector]) -> Cone {
        let g = cone_generators(ambient_dim, inequalities, equations);
        Cone::from_generators(ambient_dim, &g.rays, &g.lineality)
    }

    pub fn zero(ambient_dim: usize) -> Cone {
        Cone::from_generators(ambient_dim, &[], &[])
    }

    /// The whole space as a single cone.
    pub fn full(ambient_dim: usize) -> Cone {
        Cone::from_generators(ambient_dim, &[], &IntegerMatrix::identity(ambient_dim).row_vecs())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn lineality(&self) -> &[IntVector] {
        &self.lineality
    }

    pub fn facet_normals(&self) -> &[IntVector] {
        &self.facets
    }

    pub fn equations(&self) -> &[IntVector] {
        &self.equations
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays.len() + self.lineality.len() == self.dim
    }

    /// Saturated lattice basis of the linear span.
    pub fn span_basis(&self) -> IntegerMatrix {
        let mut gens = self.rays.clone();
        gens.extend(self.lineality.iter().cloned());
        let basis = lattice_basis(self.ambient_dim, gens);
        IntegerMatrix::from_rows(self.ambient_dim, basis)
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        x.len() == self.ambient_dim
            && self.equations.iter().all(|e| dot_mixed(e, x).is_zero())
            && self.facets.iter().all(|a| !dot_mixed(a, x).is_negative())
    }

    /// Whether `x` lies in the relative interior.
    pub fn contains_in_relative_interior(&self, x: &[BigRational]) -> bool {
        x.len() == self.ambient_dim
            && self.equations.iter().all(|e| dot_mixed(e, x).is_zero())
            && self.facets.iter().all(|a| dot_mixed(a, x).is_positive())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.rays.iter().all(|r| self.contains(&to_rational(r)))
            && other.lineality.iter().all(|l| {
                let l = to_rational(l);
                let neg: RationalVector = l.iter().map(|x| -x).collect();
                self.contains(&l) && self.contains(&neg)
            })
    }

    pub fn intersection(&self, other: &Cone) -> Cone {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let mut ineqs = self.facets.clone();
        ineqs.extend(other.facets.iter().cloned());
        let mut eqs = self.equations.clone();
        eqs.extend(other.equations.iter().cloned());
        Cone::from_inequalities(self.ambient_dim, &ineqs, &eqs)
    }

    /// Sum of the rays plus the sum of the lineality basis.
    pub fn relative_interior_point(&self) -> Result<RationalVector> {
        if self.dim == 0 {
            return Err(Error::ZeroCone);
        }
        let mut p = vec![BigInt::zero(); self.ambient_dim];
        for g in self.rays.iter().chain(&self.lineality) {
            for (pi, gi) in p.iter_mut().zip(g) {
                *pi += gi;
            }
        }
        Ok(to_rational(&p))
    }

    /// All faces, including the cone itself and its minimal face.
    pub fn faces(&self) -> Vec<Cone> {
        let full: BTreeSet<usize> = (0..self.rays.len()).collect();
        let facet_sets: Vec<BTreeSet<usize>> = self
            .facets
            .iter()
            .map(|a| (0..self.rays.len()).filter(|&i| dot_int(a, &self.rays[i]).is_zero()).collect())
            .collect();
        let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        let mut queue = VecDeque::from([full.clone()]);
        seen.insert(full);
        while let Some(s) = queue.pop_front() {
            for fs in &facet_sets {
                let t: BTreeSet<usize> = s.intersection(fs).copied().collect();
                if seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
        let mut out: Vec<Cone> = seen
            .into_iter()
            .map(|s| {
                let rays: Vec<IntVector> = s.into_iter().map(|i| self.rays[i].clone()).collect();
                Cone::from_generators(self.ambient_dim, &rays, &self.lineality)
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        other.contains_cone(self) && other.faces().contains(self)
    }

    pub fn image(&self, q: &QuotientMap) -> Cone {
        let rays: Vec<IntVector> = self.rays.iter().map(|r| q.apply_int(r)).collect();
        let lin: Vec<IntVector> = self.lineality.iter().map(|r| q.apply_int(r)).collect();
        Cone::from_generators(q.target_dim(), &rays, &lin)
    }
}

/// A fan: a face-closed set of cones, any two meeting in a common face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    ambient_dim: usize,
    cones: Vec<Cone>,
}

impl Fan {
    pub fn empty(ambient_dim: usize) -> Fan {
        Fan { ambient_dim, cones: Vec::new() }
    }

    /// Face closure of `cones`.
    pub fn from_cones(ambient_dim: usize, cones: impl IntoIterator<Item = Cone>) -> Fan {
        let mut all: BTreeSet<Cone> = BTreeSet::new();
        let mut tops: Vec<Cone> = cones.into_iter().collect();
        tops.sort_by(|a, b| b.dim().cmp(&a.dim()).then_with(|| a.cmp(b)));
        for c in tops {
            assert_eq!(c.ambient_dim, ambient_dim);
            if all.contains(&c) {
                continue;
            }
            for f in c.faces() {
                all.insert(f);
            }
        }
        Fan { ambient_dim, cones: all.into_iter().collect() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn contains_cone(&self, c: &Cone) -> bool {
        self.cones.binary_search(c).is_ok()
    }

    pub fn cones_of_dim(&self, k: usize) -> impl Iterator<Item = &Cone> {
        self.cones.iter().filter(move |c| c.dim() == k)
    }

    pub fn dim(&self) -> Option<usize> {
        self.cones.iter().map(Cone::dim).max()
    }

    /// Cones that are not proper faces of other cones.
    pub fn maximal_cones(&self) -> Vec<&Cone> {
        self.cones
            .iter()
            .filter(|c| !self.cones.iter().any(|d| d.dim() > c.dim() && d.contains_cone(c)))
            .collect()
    }

    pub fn is_pure(&self) -> bool {
        let dims: BTreeSet<usize> = self.maximal_cones().iter().map(|c| c.dim()).collect();
        dims.len() <= 1
    }

    /// Primitive generators of the one-dimensional pointed cones, in the fan's
    /// canonical (lexicographic) order.
    pub fn rays(&self) -> Vec<IntVector> {
        self.cones
            .iter()
            .filter(|c| c.dim() == 1 && c.is_pointed())
            .map(|c| c.rays()[0].clone())
            .collect()
    }

    /// Cones containing `delta` as a face.
    pub fn star(&self, delta: &Cone) -> Vec<&Cone> {
        self.cones.iter().filter(|c| c.dim() >= delta.dim() && c.contains_cone(delta)).collect()
    }

    /// Checks the fan axioms: face closure and that pairwise intersections are
    /// faces of both cones.
    pub fn check_axioms(&self) -> std::result::Result<(), String> {
        let set: BTreeSet<&Cone> = self.cones.iter().collect();
        for c in &self.cones {
            for f in c.faces() {
                if !set.contains(&f) {
                    return Err(format!("face {f} of {c} missing"));
                }
            }
        }
        let maximal = self.maximal_cones();
        for (i, a) in maximal.iter().enumerate() {
            for b in &maximal[i + 1..] {
                let x = a.intersection(b);
                if !a.faces().contains(&x) || !b.faces().contains(&x) {
                    return Err(format!("{a} and {b} meet in {x}, not a common face"));
                }
            }
        }
        Ok(())
    }

    /// Hyperplanes (normals, sign-normalized) supporting the facets and spans
    /// of the maximal cones.
    pub fn hyperplanes(&self) -> Vec<IntVector> {
        let mut out: BTreeSet<IntVector> = BTreeSet::new();
        for c in self.maximal_cones() {
            for a in c.facet_normals().iter().chain(c.equations()) {
                out.insert(sign_normalized(primitive(a)));
            }
        }
        out.into_iter().collect()
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(Cone::is_simplicial)
    }

    /// Every maximal cone's primitive rays form part of a lattice basis.
    pub fn is_unimodular(&self) -> bool {
        self.cones.iter().filter(|c| c.is_pointed() && c.is_simplicial() && c.dim() > 0).all(|c| {
            let m = IntegerMatrix::from_rows(self.ambient_dim, c.rays().to_vec());
            let smith = crate::lattice::smith_normal_form(&m);
            smith.diagonal().iter().all(|d| d == &BigInt::from(1))
        })
    }
}

/// Whether `x` lies in the cone.
pub fn cone_contains(cone: &Cone, x: &[BigRational]) -> bool {
    cone.contains(x)
}

pub fn cone_intersection(a: &Cone, b: &Cone) -> Cone {
    a.intersection(b)
}

pub fn relative_interior_point(cone: &Cone) -> Result<RationalVector> {
    cone.relative_interior_point()
}

/// All pairwise intersections of maximal cones; the support is `|F1| ∩ |F2|`.
pub fn common_refinement(f1: &Fan, f2: &Fan) -> Fan {
    assert_eq!(f1.ambient_dim, f2.ambient_dim);
    let m1 = f1.maximal_cones();
    let m2 = f2.maximal_cones();
    let mut cells: BTreeSet<Cone> = BTreeSet::new();
    for a in &m1 {
        for b in &m2 {
            cells.insert(a.intersection(b));
        }
    }
    Fan::from_cones(f1.ambient_dim, cells)
}

/// The fan of images `q(σ)` of all cones `σ ⊇ δ`.
pub fn star_quotient(fan: &Fan, delta: &Cone, q: &QuotientMap) -> Result<Fan> {
    if !fan.contains_cone(delta) {
        return Err(Error::ConeNotInFan(delta.to_string()));
    }
    let images: Vec<Cone> = fan.star(delta).into_iter().map(|c| c.image(q)).collect();
    Ok(Fan::from_cones(q.target_dim(), images))
}

/// Quotient map by the span of `delta`.
pub fn quotient_by_span(delta: &Cone) -> Result<QuotientMap> {
    let n = delta.ambient_dim();
    if delta.dim() == 0 {
        return Ok(QuotientMap::identity(n));
    }
    if delta.dim() == n {
        return Ok(QuotientMap::onto_point(n));
    }
    crate::lattice::quotient_coordinates(&delta.span_basis(), n)
}

/// Facet-pairing criterion: a pure, full-dimensional fan is complete when
/// every facet of a maximal cone lies in exactly two maximal cones.
pub fn is_complete(fan: &Fan) -> bool {
    let n = fan.ambient_dim;
    if fan.is_empty() || !fan.is_pure() || fan.dim() != Some(n) {
        return false;
    }
    let mut counts: BTreeMap<Cone, usize> = BTreeMap::new();
    for c in fan.maximal_cones() {
        for f in c.faces().into_iter().filter(|f| f.dim() + 1 == n) {
            *counts.entry(f).or_insert(0) += 1;
        }
    }
    counts.values().all(|&c| c == 2)
}

/// Star subdivision at `v`: each cone containing `v` is replaced by the cones
/// spanned by `v` and its faces not containing `v`.
pub fn stellar_subdivision(fan: &Fan, v: &[BigRational]) -> Fan {
    let n = fan.ambient_dim;
    let w = primitive(&clear_denominators(v));
    let mut cells: Vec<Cone> = Vec::new();
    for c in fan.maximal_cones() {
        let lin: Vec<RationalVector> = c.lineality().iter().map(|l| to_rational(l)).collect();
        let in_lineality = !lin.is_empty() && solve_in_span(&lin, v).is_some();
        if !c.contains(v) || in_lineality {
            cells.push(c.clone());
            continue;
        }
        for f in c.faces() {
            if f.contains(v) {
                continue;
            }
            let mut rays = f.rays().to_vec();
            rays.push(w.clone());
            cells.push(Cone::from_generators(n, &rays, f.lineality()));
        }
    }
    Fan::from_cones(n, cells)
}

/// Complete fan cut out by a central hyperplane arrangement: its maximal cones
/// are the full-dimensional sign cells.
pub fn arrangement_fan(ambient_dim: usize, hyperplanes: &[IntVector]) -> Fan {
    let mut cells: Vec<(Vec<IntVector>, Cone)> = vec![(Vec::new(), Cone::full(ambient_dim))];
    for h in hyperplanes {
        if h.iter().all(Zero::is_zero) {
            continue;
        }
        let neg: IntVector = h.iter().map(|x| -x).collect();
        let mut next = Vec::with_capacity(cells.len() * 2);
        for (ineqs, cell) in cells {
            let values: Vec<BigInt> = cell.rays().iter().map(|r| dot_int(h, r)).collect();
            let lin_hits = cell.lineality().iter().any(|l| !dot_int(h, l).is_zero());
            let has_pos = lin_hits || values.iter().any(|x| x.is_positive());
            let has_neg = lin_hits || values.iter().any(|x| x.is_negative());
            if has_pos && has_neg {
                for side in [h, &neg] {
                    let mut ineqs2 = ineqs.clone();
                    ineqs2.push(side.clone());
                    let c = Cone::from_inequalities(ambient_dim, &ineqs2, &[]);
                    next.push((ineqs2, c));
                }
            } else {
                next.push((ineqs, cell));
            }
        }
        cells = next;
    }
    Fan::from_cones(ambient_dim, cells.into_iter().map(|(_, c)| c))
}

/// A complete pointed fan refining every fan in `fans`.
pub fn complete_refinement(ambient_dim: usize, fans: &[&Fan]) -> Fan {
    let mut planes: BTreeSet<IntVector> = BTreeSet::new();
    for f in fans {
        planes.extend(f.hyperplanes());
    }
    for i in 0..ambient_dim {
        planes.insert((0..ambient_dim).map(|j| BigInt::from((i == j) as i64)).collect());
    }
    let planes: Vec<IntVector> = planes.into_iter().collect();
    arrangement_fan(ambient_dim, &planes)
}

/// Whether every cone of `support` with nonzero weight lies in `|fan|`.
///
/// Each such cone is cut by the cube `[-1, 1]^n`; its relative volume (in
/// lattice coordinates of its span) is compared with the total volume of the
/// equal-dimensional pieces `σ ∩ τ`, `τ ∈ fan`.
pub fn fan_covers_support(fan: &Fan, support: &[(Cone, BigRational)]) -> bool {
    support
        .iter()
        .filter(|(_, w)| !w.is_zero())
        .all(|(sigma, _)| cone_covered(fan, sigma))
}

fn cone_covered(fan: &Fan, sigma: &Cone) -> bool {
    if sigma.dim() == 0 {
        return !fan.is_empty();
    }
    let pieces: BTreeSet<Cone> = fan
        .cones()
        .iter()
        .map(|tau| sigma.intersection(tau))
        .filter(|p| p.dim() == sigma.dim())
        .collect();
    if pieces.is_empty() {
        return false;
    }
    if pieces.contains(sigma) {
        return true;
    }
    let basis: Vec<RationalVector> = sigma.span_basis().row_vecs().iter().map(|r| to_rational(r)).collect();
    let total = cross_section_volume(sigma, &basis);
    let covered = pieces
        .iter()
        .fold(BigRational::zero(), |acc, p| acc + cross_section_volume(p, &basis));
    covered == total
}

fn cross_section_volume(cone: &Cone, basis: &[RationalVector]) -> BigRational {
    let n = cone.ambient_dim();
    let mut normals: Vec<RationalVector> = Vec::new();
    let mut offsets: Vec<BigRational> = Vec::new();
    let zero = BigRational::zero();
    let one = BigRational::from(BigInt::from(1));
    for a in cone.facet_normals() {
        normals.push(to_rational(a).iter().map(|x| -x).collect());
        offsets.push(zero.clone());
    }
    for e in cone.equations() {
        normals.push(to_rational(e));
        offsets.push(zero.clone());
        normals.push(to_rational(e).iter().map(|x| -x).collect());
        offsets.push(zero.clone());
    }
    for i in 0..n {
        for s in [1i64, -1] {
            let mut e = vec![zero.clone(); n];
            e[i] = BigRational::from(BigInt::from(s));
            normals.push(e);
            offsets.push(one.clone());
        }
    }
    let section = Polytope::from_inequalities(n, &normals, &offsets).expect("cube section is bounded and nonempty");
    let coords: Vec<RationalVector> = section
        .vertices()
        .iter()
        .map(|v| solve_in_span(basis, v).expect("section lies in the span"))
        .collect();
    Polytope::convex_hull(&coords).expect("nonempty").volume()
}
