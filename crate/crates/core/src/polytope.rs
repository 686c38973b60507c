//! Rational convex polytopes.
//!
//! Hulls are computed with the double description method on the homogenized
//! point cloud: the facets of `conv(V)` are the extreme rays of the cone
//! `{(b, a) : b + a·v >= 0 for all v in V}`. Facet normals are outward and
//! primitive, with `normal·x <= offset` on the polytope.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dd::cone_generators;
use crate::error::{Error, Result};
use crate::fan::{Cone, Fan};
use crate::lattice::{
    clear_denominators, dot_mixed, primitive, project_out, rational_rank, row_reduce, to_rational,
    IntVector, IntegerMatrix, RationalVector,
};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Facet {
    pub normal: IntVector,
    pub offset: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    ambient_dim: usize,
    dim: usize,
    vertices: Vec<RationalVector>,
    facets: Vec<Facet>,
    /// Affine hull as `normal·x = offset`.
    equations: Vec<Facet>,
    /// For each facet, the sorted indices of the vertices on it.
    incidence: Vec<Vec<usize>>,
}

/// A nonempty face, recorded by the vertices of the parent polytope it contains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub dim: usize,
    pub vertex_indices: Vec<usize>,
    pub vertices: Vec<RationalVector>,
    /// Basis of the direction space of the affine span.
    pub span: Vec<RationalVector>,
}

fn sub(a: &[BigRational], b: &[BigRational]) -> RationalVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn affine_rank(points: &[&RationalVector]) -> usize {
    match points.split_first() {
        None => 0,
        Some((p0, rest)) => rational_rank(&rest.iter().map(|p| sub(p, p0)).collect::<Vec<_>>()),
    }
}

fn direction_basis(points: &[&RationalVector]) -> Vec<RationalVector> {
    let Some((p0, rest)) = points.split_first() else { return Vec::new() };
    let mut m: Vec<RationalVector> = rest.iter().map(|p| sub(p, p0)).collect();
    let r = row_reduce(&mut m).len();
    m.truncate(r);
    m
}

impl Polytope {
    pub fn convex_hull(points: &[RationalVector]) -> Result<Polytope> {
        let Some(first) = points.first() else { return Err(Error::EmptyInput("convex hull of no points")) };
        let n = first.len();
        if let Some(bad) = points.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
        }
        let pts: Vec<RationalVector> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();

        let homogenized: Vec<IntVector> = pts
            .iter()
            .map(|p| {
                let mut h = vec![BigRational::one()];
                h.extend(p.iter().cloned());
                clear_denominators(&h)
            })
            .collect();
        let dual = cone_generators(n + 1, &homogenized, &[]);

        let lin_rat: Vec<RationalVector> = dual.lineality.iter().map(|l| to_rational(l)).collect();
        let mut equations: Vec<Facet> = Vec::new();
        if !lin_rat.is_empty() {
            let mut m = lin_rat.clone();
            let r = row_reduce(&mut m).len();
            m.truncate(r);
            for row in m {
                let int = primitive(&clear_denominators(&row));
                let (b, a) = (int[0].clone(), int[1..].to_vec());
                // b + a·x = 0
                equations.push(normalize_pair(a, -b));
            }
            equations.sort();
        }

        let mut facets: Vec<Facet> = Vec::new();
        for ray in &dual.rays {
            let projected = clear_denominators(&project_out(&to_rational(ray), &lin_rat));
            let (b, a) = (projected[0].clone(), &projected[1..]);
            if a.iter().all(Zero::is_zero) {
                continue;
            }
            // b + a·x >= 0  <=>  (-a)·x <= b
            facets.push(normalize_pair(a.iter().map(|x| -x).collect(), b));
        }
        facets.sort();
        facets.dedup();

        let eq_normals: Vec<RationalVector> = equations.iter().map(|e| to_rational(&e.normal)).collect();
        let tight = |p: &RationalVector, f: &Facet| dot_mixed(&f.normal, p) == f.offset;
        let mut vertices: Vec<RationalVector> = Vec::new();
        for p in &pts {
            let mut rows: Vec<RationalVector> =
                facets.iter().filter(|f| tight(p, f)).map(|f| to_rational(&f.normal)).collect();
            rows.extend(eq_normals.iter().cloned());
            if rational_rank(&rows) == n {
                vertices.push(p.clone());
            }
        }
        // Facets that touch fewer points than their dimension demands are
        // artifacts of a degenerate (point) hull.
        let dim = n - equations.len();
        let mut kept = Vec::new();
        let mut incidence = Vec::new();
        for f in facets {
            let on: Vec<usize> = (0..vertices.len()).filter(|&i| tight(&vertices[i], &f)).collect();
            let refs: Vec<&RationalVector> = on.iter().map(|&i| &vertices[i]).collect();
            if dim >= 1 && !on.is_empty() && affine_rank(&refs) + 1 == dim {
                kept.push(f);
                incidence.push(on);
            }
        }
        Ok(Polytope { ambient_dim: n, dim, vertices, facets: kept, equations, incidence })
    }

    /// A full-dimensional polytope with known combinatorics: `incidence[f]`
    /// lists the indices of the vertices on facet `f`.
    pub(crate) fn from_incidence(vertices: Vec<RationalVector>, facets: Vec<Facet>, incidence: Vec<Vec<usize>>) -> Polytope {
        let n = vertices[0].len();
        let incidence = incidence
            .into_iter()
            .map(|mut v| {
                v.sort_unstable();
                v
            })
            .collect();
        Polytope { ambient_dim: n, dim: n, vertices, facets, equations: Vec::new(), incidence }
    }

    /// `{x : normals[i]·x <= offsets[i]}`; errors if unbounded or empty.
    pub fn from_inequalities(
        ambient_dim: usize,
        normals: &[RationalVector],
        offsets: &[BigRational],
    ) -> Result<Polytope> {
        let mut rows: Vec<IntVector> = normals
            .iter()
            .zip(offsets)
            .map(|(a, b)| {
                let mut h = vec![b.clone()];
                h.extend(a.iter().map(|x| -x));
                clear_denominators(&h)
            })
            .collect();
        let mut t = vec![BigInt::zero(); ambient_dim + 1];
        t[0] = BigInt::one();
        rows.push(t);
        let g = cone_generators(ambient_dim + 1, &rows, &[]);
        if !g.lineality.is_empty() {
            return Err(Error::Unbounded);
        }
        let mut verts = Vec::new();
        for r in &g.rays {
            if r[0].is_zero() {
                return Err(Error::Unbounded);
            }
            let t = BigRational::from(r[0].clone());
            verts.push(r[1..].iter().map(|x| BigRational::from(x.clone()) / &t).collect());
        }
        if verts.is_empty() {
            return Err(Error::EmptyInput("infeasible inequality system"));
        }
        Polytope::convex_hull(&verts)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient_dim
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[RationalVector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn affine_equations(&self) -> &[Facet] {
        &self.equations
    }

    pub fn is_lattice(&self) -> bool {
        self.vertices.iter().all(|v| v.iter().all(BigRational::is_integer))
    }

    pub fn translate(&self, t: &[BigRational]) -> Polytope {
        let pts: Vec<RationalVector> =
            self.vertices.iter().map(|v| v.iter().zip(t).map(|(a, b)| a + b).collect()).collect();
        Polytope::convex_hull(&pts).expect("nonempty")
    }

    pub fn scale(&self, factor: &BigRational) -> Polytope {
        let pts: Vec<RationalVector> = self.vertices.iter().map(|v| v.iter().map(|a| a * factor).collect()).collect();
        Polytope::convex_hull(&pts).expect("nonempty")
    }

    /// All nonempty faces, from the polytope itself down to its vertices.
    pub fn faces(&self) -> Vec<Face> {
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        seen.insert(all.clone());
        let mut queue = VecDeque::from([all]);
        while let Some(s) = queue.pop_front() {
            for inc in &self.incidence {
                let t: Vec<usize> = s.iter().filter(|i| inc.binary_search(i).is_ok()).copied().collect();
                if !t.is_empty() && seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
        // Single vertices are always faces, even when reached only implicitly.
        for i in 0..self.vertices.len() {
            seen.insert(vec![i]);
        }
        let mut faces: Vec<Face> = seen.into_iter().map(|s| self.face_from_indices(s)).collect();
        faces.sort_by(|a, b| b.dim.cmp(&a.dim).then_with(|| a.vertex_indices.cmp(&b.vertex_indices)));
        faces
    }

    fn face_from_indices(&self, idx: Vec<usize>) -> Face {
        let pts: Vec<&RationalVector> = idx.iter().map(|&i| &self.vertices[i]).collect();
        Face {
            dim: affine_rank(&pts),
            span: direction_basis(&pts),
            vertices: pts.into_iter().cloned().collect(),
            vertex_indices: idx,
        }
    }

    /// Facets (by incidence index) containing the given vertex set.
    fn facets_containing(&self, idx: &[usize]) -> Vec<usize> {
        (0..self.facets.len())
            .filter(|&f| idx.iter().all(|i| self.incidence[f].binary_search(i).is_ok()))
            .collect()
    }

    /// Exact Euclidean volume; zero for lower-dimensional polytopes.
    pub fn volume(&self) -> BigRational {
        let n = self.ambient_dim;
        if self.dim < n {
            return BigRational::zero();
        }
        if n == 0 {
            return BigRational::one();
        }
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let total = self.triangulate(&all, n).iter().fold(BigRational::zero(), |acc, s| {
            let v0 = &self.vertices[s[0]];
            let rows: Vec<RationalVector> = s[1..].iter().map(|&i| sub(&self.vertices[i], v0)).collect();
            acc + rational_det(rows).abs()
        });
        total / BigRational::from(factorial(n))
    }

    /// Pulling triangulation: cone from the lexicographically smallest vertex
    /// over the triangulated faces not containing it.
    fn triangulate(&self, face: &[usize], d: usize) -> Vec<Vec<usize>> {
        if d == 0 {
            return vec![vec![face[0]]];
        }
        let v0 = face[0];
        let mut subfaces: BTreeSet<Vec<usize>> = BTreeSet::new();
        for inc in &self.incidence {
            let g: Vec<usize> = face.iter().filter(|i| inc.binary_search(i).is_ok()).copied().collect();
            if g.is_empty() || g.contains(&v0) {
                continue;
            }
            let refs: Vec<&RationalVector> = g.iter().map(|&i| &self.vertices[i]).collect();
            if affine_rank(&refs) + 1 == d {
                subfaces.insert(g);
            }
        }
        let mut out = Vec::new();
        for g in subfaces {
            for mut s in self.triangulate(&g, d - 1) {
                s.insert(0, v0);
                out.push(s);
            }
        }
        out
    }

    pub fn support_value(&self, u: &[BigInt]) -> Result<BigRational> {
        if u.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: u.len() });
        }
        if u.iter().all(Zero::is_zero) {
            return Err(Error::ZeroVector);
        }
        Ok(self.support_value_unchecked(u))
    }

    fn support_value_unchecked(&self, u: &[BigInt]) -> BigRational {
        self.vertices.iter().map(|v| dot_mixed(u, v)).max().expect("nonempty polytope")
    }

    /// Vertices maximizing `⟨x, u⟩`.
    pub fn argmax(&self, u: &[BigInt]) -> Vec<usize> {
        let h = self.support_value_unchecked(u);
        (0..self.vertices.len()).filter(|&i| dot_mixed(u, &self.vertices[i]) == h).collect()
    }

    pub fn normal_fan(&self) -> Result<NormalFan> {
        normal_fan(self)
    }
}

fn normalize_pair(normal: IntVector, offset: BigInt) -> Facet {
    let g = normal.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let normal: IntVector = normal.iter().map(|x| x / &g).collect();
    Facet { normal, offset: BigRational::new(offset, g) }
}

fn rational_det(rows: Vec<RationalVector>) -> BigRational {
    let n = rows.len();
    let mut m = rows;
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else { return BigRational::zero() };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c].clone();
        for i in c + 1..n {
            let f = &m[i][c] / &m[c][c];
            for j in c..n {
                let v = &f * &m[c][j];
                m[i][j] -= v;
            }
        }
    }
    det
}

pub fn convex_hull(points: &[RationalVector]) -> Result<Polytope> {
    Polytope::convex_hull(points)
}

pub fn volume(p: &Polytope) -> BigRational {
    p.volume()
}

pub fn minkowski_sum(p: &Polytope, q: &Polytope) -> Result<Polytope> {
    if p.ambient_dim != q.ambient_dim {
        return Err(Error::DimensionMismatch { expected: p.ambient_dim, found: q.ambient_dim });
    }
    let mut pts = Vec::with_capacity(p.vertices.len() * q.vertices.len());
    for a in &p.vertices {
        for b in &q.vertices {
            pts.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
        }
    }
    Polytope::convex_hull(&pts)
}

/// Mixed volume normalized so that `MV(P, ..., P) = vol(P)`, by
/// inclusion–exclusion over all partial Minkowski sums.
pub fn mixed_volume(polytopes: &[Polytope]) -> Result<BigRational> {
    let n = polytopes.len();
    let Some(first) = polytopes.first() else { return Err(Error::EmptyInput("mixed volume of no polytopes")) };
    let ambient = first.ambient_dim;
    if let Some(p) = polytopes.iter().find(|p| p.ambient_dim != ambient) {
        return Err(Error::DimensionMismatch { expected: ambient, found: p.ambient_dim });
    }
    if n != ambient {
        return Err(Error::LengthMismatch { expected: ambient, found: n });
    }
    let mut sums: Vec<Option<Polytope>> = vec![None; 1 << n];
    let mut total = BigRational::zero();
    for mask in 1usize..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let sum = if rest == 0 {
            polytopes[low].clone()
        } else {
            minkowski_sum(sums[rest].as_ref().expect("computed earlier"), &polytopes[low])?
        };
        let v = sum.volume();
        if (n - mask.count_ones() as usize) % 2 == 0 {
            total += v;
        } else {
            total -= v;
        }
        sums[mask] = Some(sum);
    }
    Ok(total / BigRational::from(factorial(n)))
}

pub fn support_value(p: &Polytope, u: &[BigInt]) -> Result<BigRational> {
    p.support_value(u)
}

/// Number of primitive lattice steps along a lattice edge.
pub fn integral_length(edge: &Face) -> Result<BigInt> {
    if edge.dim != 1 || edge.vertices.len() != 2 {
        return Err(Error::NotAnEdge(edge.dim));
    }
    for v in &edge.vertices {
        if !v.iter().all(BigRational::is_integer) {
            return Err(Error::NotLattice(crate::lattice::fmt_vec(v)));
        }
    }
    let diff = sub(&edge.vertices[1], &edge.vertices[0]);
    Ok(diff.iter().fold(BigInt::zero(), |acc, x| acc.gcd(&x.to_integer())))
}

/// The normal fan with its face–cone correspondence.
#[derive(Clone, Debug)]
pub struct NormalFan {
    pub fan: Fan,
    /// `(face, dual cone)` pairs; the cone dual to an `(n-k)`-face is `k`-dimensional.
    pub duals: Vec<(Face, Cone)>,
}

impl NormalFan {
    pub fn dual_face(&self, cone: &Cone) -> Option<&Face> {
        self.duals.iter().find(|(_, c)| c == cone).map(|(f, _)| f)
    }
}

/// Normal fan under the max convention: the cone dual to a face `F` is
/// `{u : F ⊆ argmax ⟨x, u⟩}`, generated by the outward normals of the facets
/// containing `F`.
pub fn normal_fan(p: &Polytope) -> Result<NormalFan> {
    let n = p.ambient_dim;
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional { dim: p.dim, ambient: n });
    }
    let mut duals = Vec::new();
    for face in p.faces() {
        let normals: Vec<IntVector> =
            p.facets_containing(&face.vertex_indices).into_iter().map(|f| p.facets[f].normal.clone()).collect();
        duals.push((face, Cone::from_generators(n, &normals, &[])));
    }
    let fan = Fan::from_cones(n, duals.iter().filter(|(f, _)| f.dim == 0).map(|(_, c)| c.clone()));
    Ok(NormalFan { fan, duals })
}

/// Image of `p` under the integer linear map `m`.
pub fn apply_linear(p: &Polytope, m: &IntegerMatrix) -> Polytope {
    let pts: Vec<RationalVector> = p
        .vertices
        .iter()
        .map(|v| (0..m.rows()).map(|i| dot_mixed(m.row(i), v)).collect())
        .collect();
    Polytope::convex_hull(&pts).expect("nonempty")
}
