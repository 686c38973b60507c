//! Volume polynomials of complete simplicial fans and the graded rings
//! `D/Ann(P)` they define.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fan::{is_complete, stellar_subdivision, Cone, Fan};
use crate::lattice::{dot_mixed, fmt_vec, ratio, row_reduce, to_rational, IntVector, RationalVector};
use crate::polytope::{Facet, Polytope};

pub type Exponent = Vec<u32>;

/// A polynomial with rational coefficients in a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Exponent, BigRational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, BigRational)>) -> Self {
        let mut p = Polynomial::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length");
            *p.terms.entry(e).or_insert_with(BigRational::zero) += c;
        }
        p.terms.retain(|_, c| !c.is_zero());
        p
    }

    /// `(sum_i c_i h_i)^k`.
    pub fn linear_power(coeffs: &[BigRational], k: u32) -> Self {
        let n = coeffs.len();
        let lin = Polynomial::from_terms(
            n,
            coeffs.iter().enumerate().map(|(i, c)| {
                let mut e = vec![0; n];
                e[i] = 1;
                (e, c.clone())
            }),
        );
        (0..k).fold(Polynomial::constant(n, BigRational::one()), |acc, _| acc.mul(&lin))
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Polynomial::from_terms(nvars, [(vec![0; nvars], c)])
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, BigRational> {
        &self.terms
    }

    pub fn coefficient(&self, e: &[u32]) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree of a homogeneous polynomial, `None` if zero or inhomogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Polynomial::from_terms(self.nvars, self.terms.iter().map(|(e, x)| (e.clone(), x * c)))
    }

    pub fn mul(&self, other: &Polynomial) -> Self {
        let mut terms = Vec::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                terms.push((a.iter().zip(b).map(|(i, j)| i + j).collect(), x * y));
            }
        }
        Polynomial::from_terms(self.nvars, terms)
    }

    pub fn eval(&self, h: &[BigRational]) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, (e, c)| acc + c * monomial_value(e, h))
    }

    pub fn partial(&self, i: usize) -> Self {
        Polynomial::from_terms(
            self.nvars,
            self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
                let mut d = e.clone();
                d[i] -= 1;
                (d, c * BigRational::from(BigInt::from(e[i])))
            }),
        )
    }

    /// `∂^α`.
    pub fn differentiate(&self, alpha: &[u32]) -> Self {
        let mut p = self.clone();
        for (i, &k) in alpha.iter().enumerate() {
            for _ in 0..k {
                p = p.partial(i);
            }
        }
        p
    }

    /// Derivative along the constant vector field `h`.
    pub fn directional(&self, h: &[BigRational]) -> Self {
        let mut out = Polynomial::zero(self.nvars);
        for (i, hi) in h.iter().enumerate() {
            if !hi.is_zero() {
                out = out.add(&self.partial(i).scale(hi));
            }
        }
        out
    }

    pub fn add(&self, other: &Polynomial) -> Self {
        Polynomial::from_terms(self.nvars, self.terms.iter().chain(&other.terms).map(|(e, c)| (e.clone(), c.clone())))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for e in graded_lex(self.nvars, self.homogeneous_degree().unwrap_or(0)).iter().filter(|e| self.terms.contains_key(*e)).chain(
            self.terms.keys().filter(|e| Some(e.iter().sum::<u32>()) != self.homogeneous_degree()),
        ) {
            let c = &self.terms[e];
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("h{}", i + 1) } else { format!("h{}^{k}", i + 1) })
                .collect();
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if vars.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{c}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

fn monomial_value(e: &[u32], h: &[BigRational]) -> BigRational {
    e.iter().zip(h).fold(BigRational::one(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize))
}

/// Exponents of total degree `k` in `m` variables, lexicographically
/// descending (`h1^k` first).
pub fn graded_lex(m: usize, k: u32) -> Vec<Exponent> {
    fn rec(m: usize, k: u32, prefix: &mut Exponent, out: &mut Vec<Exponent>) {
        if prefix.len() + 1 == m {
            prefix.push(k);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=k).rev() {
            prefix.push(first);
            rec(m, k - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 {
        if k == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(m, k, &mut Vec::new(), &mut out);
    out
}

/// The volume of `P(h) = {x : ⟨x, u_r⟩ <= h_r}` as a polynomial in the
/// support numbers `h`, valid on the chamber of the reference vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumePolynomial {
    pub rays: Vec<IntVector>,
    pub degree: u32,
    pub polynomial: Polynomial,
    pub chamber_reference: RationalVector,
}

impl VolumePolynomial {
    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn eval(&self, h: &[BigRational]) -> BigRational {
        self.polynomial.eval(h)
    }
}

struct ChamberFan {
    n: usize,
    rays: Vec<IntVector>,
    /// Ray indices of each maximal cone.
    cones: Vec<Vec<usize>>,
}

impl ChamberFan {
    fn new(fan: &Fan) -> Result<Self> {
        let n = fan.ambient_dim();
        if !is_complete(fan) {
            return Err(Error::NotComplete);
        }
        if let Some(c) = fan.cones().iter().find(|c| !c.is_simplicial() || !c.is_pointed()) {
            return Err(Error::NotSimplicial(c.to_string()));
        }
        let rays = fan.rays();
        let cones = fan
            .cones_of_dim(n)
            .map(|c| c.rays().iter().map(|r| rays.binary_search(r).expect("ray of the fan")).collect())
            .collect();
        Ok(ChamberFan { n, rays, cones })
    }

    /// Vertex per maximal cone, if `h` lies in the open chamber.
    fn vertices(&self, h: &[BigRational]) -> Option<Vec<RationalVector>> {
        let mut out = Vec::with_capacity(self.cones.len());
        for cone in &self.cones {
            let rows: Vec<RationalVector> = cone
                .iter()
                .map(|&i| {
                    let mut r = to_rational(&self.rays[i]);
                    r.push(h[i].clone());
                    r
                })
                .collect();
            let mut m = rows;
            let pivots = row_reduce(&mut m);
            if pivots.len() != self.n || pivots.contains(&self.n) {
                return None;
            }
            let mut x = vec![BigRational::zero(); self.n];
            for (row, &p) in m.iter().zip(&pivots) {
                x[p] = row[self.n].clone();
            }
            let strict = (0..self.rays.len())
                .filter(|i| !cone.contains(i))
                .all(|i| dot_mixed(&self.rays[i], &x) < h[i]);
            if !strict {
                return None;
            }
            out.push(x);
        }
        Some(out)
    }

    fn volume(&self, h: &[BigRational]) -> Option<BigRational> {
        let v = self.vertices(h)?;
        for i in 0..v.len() {
            if v[i + 1..].contains(&v[i]) {
                return None;
            }
        }
        let facets = self.rays.iter().zip(h).map(|(u, hr)| Facet { normal: u.clone(), offset: hr.clone() }).collect();
        let incidence = (0..self.rays.len())
            .map(|r| (0..self.cones.len()).filter(|&c| self.cones[c].contains(&r)).collect())
            .collect();
        Some(Polytope::from_incidence(v, facets, incidence).volume())
    }
}

/// Fits the volume polynomial of a complete simplicial fan by exact
/// interpolation around `h0`, the support numbers of a simple polytope whose
/// normal fan is `fan`. `h0` is indexed by `fan.rays()`.
///
/// The volume is sampled on the lattice `h0 + ε·α`, `|α| <= n`, and expanded
/// in the Newton basis of forward differences, which is exact for polynomials
/// of degree at most `n`.
pub fn volume_polynomial(fan: &Fan, h0: &[BigRational]) -> Result<VolumePolynomial> {
    let cf = ChamberFan::new(fan)?;
    let m = cf.rays.len();
    let n = cf.n as u32;
    if h0.len() != m {
        return Err(Error::LengthMismatch { expected: m, found: h0.len() });
    }
    if cf.volume(h0).is_none() {
        return Err(Error::DegenerateChamber(format!(
            "{} is not strictly inside a chamber; choose another reference",
            fmt_vec(h0)
        )));
    }
    let lattice: Vec<Exponent> = (0..=n).flat_map(|k| graded_lex(m, k)).collect();
    let fresh: Vec<RationalVector> = (0..5i64)
        .map(|j| (0..m as i64).map(|i| ratio((i * 7 + j * 3) % 5 + 1, 2 * j + 3)).collect())
        .collect();

    let mut eps = BigRational::one();
    'scale: for _ in 0..64 {
        let shift = |dir: &[BigRational]| -> RationalVector {
            h0.iter().zip(dir).map(|(a, d)| a + &eps * d).collect()
        };
        let mut samples: BTreeMap<Exponent, BigRational> = BTreeMap::new();
        for alpha in &lattice {
            let dir: RationalVector = alpha.iter().map(|&a| BigRational::from(BigInt::from(a))).collect();
            match cf.volume(&shift(&dir)) {
                Some(v) => samples.insert(alpha.clone(), v),
                None => {
                    eps /= BigRational::from(BigInt::from(2));
                    continue 'scale;
                }
            };
        }
        let mut checks = Vec::with_capacity(fresh.len());
        for d in &fresh {
            let h = shift(d);
            match cf.volume(&h) {
                Some(v) => checks.push((h, v)),
                None => {
                    eps /= BigRational::from(BigInt::from(2));
                    continue 'scale;
                }
            }
        }
        let poly = newton_interpolation(m, h0, &eps, &lattice, &samples);
        if poly.homogeneous_degree() != Some(n) {
            return Err(Error::DegenerateChamber("sampled volumes are not a degree-n form".into()));
        }
        if let Some((h, _)) = checks.iter().find(|(h, v)| poly.eval(h) != *v) {
            return Err(Error::DegenerateChamber(format!(
                "fitted polynomial disagrees with the volume at {}",
                fmt_vec(h)
            )));
        }
        return Ok(VolumePolynomial {
            rays: cf.rays.clone(),
            degree: n,
            polynomial: poly,
            chamber_reference: h0.to_vec(),
        });
    }
    Err(Error::DegenerateChamber("no perturbation scale keeps the combinatorics".into()))
}

/// `f(h) = Σ_β Δ^β f(0) · Π_i binom(α_i, β_i)` with `α = (h - h0)/ε`.
fn newton_interpolation(
    m: usize,
    h0: &[BigRational],
    eps: &BigRational,
    lattice: &[Exponent],
    samples: &BTreeMap<Exponent, BigRational>,
) -> Polynomial {
    let one = BigRational::one();
    let mut out = Polynomial::zero(m);
    for beta in lattice {
        // Forward difference Δ^β f at the origin.
        let mut diff = BigRational::zero();
        for gamma in lower_set(beta) {
            let mut c = BigRational::one();
            for (&b, &g) in beta.iter().zip(&gamma) {
                c *= BigRational::from(binomial(b, g));
            }
            let sign_odd = (beta.iter().sum::<u32>() - gamma.iter().sum::<u32>()) % 2 == 1;
            let term = c * &samples[&gamma];
            if sign_odd {
                diff -= term;
            } else {
                diff += term;
            }
        }
        if diff.is_zero() {
            continue;
        }
        let mut basis = Polynomial::constant(m, diff);
        for (i, &b) in beta.iter().enumerate() {
            for j in 0..b {
                // ((h_i - h0_i)/ε - j) / (j + 1)
                let mut e = vec![0; m];
                e[i] = 1;
                let lin = Polynomial::from_terms(
                    m,
                    [(e, &one / eps), (vec![0; m], -(&h0[i] / eps) - BigRational::from(BigInt::from(j)))],
                );
                basis = basis.mul(&lin).scale(&BigRational::new(BigInt::one(), BigInt::from(j + 1)));
            }
        }
        out = out.add(&basis);
    }
    out
}

/// All `γ` with `0 <= γ <= β` componentwise.
fn lower_set(beta: &[u32]) -> Vec<Exponent> {
    let mut out = vec![Vec::with_capacity(beta.len())];
    for &b in beta {
        out = out
            .into_iter()
            .flat_map(|g: Exponent| {
                (0..=b).map(move |x| {
                    let mut g = g.clone();
                    g.push(x);
                    g
                })
            })
            .collect();
    }
    out
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `A = ⊕ A_k` with `A_k` the degree-`k` constant-coefficient differential
/// operators modulo those annihilating the polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedRing {
    pub degree: u32,
    pub nvars: usize,
    /// Monomial operators `∂^α` representing a basis of each `A_k`.
    pub bases: Vec<Vec<Exponent>>,
    /// `pairings[k][i][j] = (∂^{a_i} ∂^{b_j}) P` for `a_i ∈ A_k`, `b_j ∈ A_{n-k}`.
    pub pairings: Vec<Vec<RationalVector>>,
    /// Whether every cone of the underlying fan is unimodular, when known.
    pub smooth_fan: Option<bool>,
}

impl GradedRing {
    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    /// Every pairing matrix is square and nonsingular.
    pub fn pairing_is_perfect(&self) -> bool {
        self.pairings.iter().all(|m| {
            let rows = m.len();
            rows > 0 && m.iter().all(|r| r.len() == rows) && {
                let mut a = m.clone();
                row_reduce(&mut a).len() == rows
            }
        })
    }
}

pub fn build_ring(p: &Polynomial) -> Result<GradedRing> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let Some(n) = p.homogeneous_degree() else {
        return Err(Error::Parse("polynomial is not homogeneous".into()));
    };
    let m = p.nvars();
    let mut bases = Vec::with_capacity(n as usize + 1);
    for k in 0..=n {
        let ops = graded_lex(m, k);
        let targets = graded_lex(m, n - k);
        // Rows: coefficients of ∂^α P; columns: operators.
        let mut mat: Vec<RationalVector> =
            targets.iter().map(|_| vec![BigRational::zero(); ops.len()]).collect();
        for (j, alpha) in ops.iter().enumerate() {
            let d = p.differentiate(alpha);
            for (i, t) in targets.iter().enumerate() {
                mat[i][j] = d.coefficient(t);
            }
        }
        let pivots = row_reduce(&mut mat);
        bases.push(pivots.into_iter().map(|j| ops[j].clone()).collect::<Vec<_>>());
    }
    let pairings = (0..=n as usize)
        .map(|k| {
            bases[k]
                .iter()
                .map(|a| {
                    let da = p.differentiate(a);
                    bases[n as usize - k]
                        .iter()
                        .map(|b| da.differentiate(b).coefficient(&vec![0; m]))
                        .collect()
                })
                .collect()
        })
        .collect();
    Ok(GradedRing { degree: n, nvars: m, bases, pairings, smooth_fan: None })
}

/// `h_r = max_{x ∈ Q} ⟨x, u_r⟩` over the rays of `fan`, after checking that
/// the support function of `Q` is linear on every cone.
pub fn class_of_polytope(fan: &Fan, q: &Polytope) -> Result<RationalVector> {
    if fan.ambient_dim() != q.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: fan.ambient_dim(), found: q.ambient_dim() });
    }
    for cone in fan.maximal_cones() {
        let mut common: Vec<usize> = (0..q.vertices().len()).collect();
        for r in cone.rays() {
            let arg = q.argmax(r);
            common.retain(|i| arg.contains(i));
        }
        if common.is_empty() {
            return Err(Error::NotLinearOnCone(cone.to_string()));
        }
    }
    fan.rays().iter().map(|r| q.support_value(r)).collect()
}

/// `L_{h1} ⋯ L_{hn} V`, which is `n!·MV` for polytope classes.
pub fn top_pairing(v: &VolumePolynomial, hs: &[RationalVector]) -> Result<BigRational> {
    let n = v.degree as usize;
    if hs.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: hs.len() });
    }
    let m = v.num_rays();
    if let Some(h) = hs.iter().find(|h| h.len() != m) {
        return Err(Error::LengthMismatch { expected: m, found: h.len() });
    }
    let d = hs.iter().fold(v.polynomial.clone(), |p, h| p.directional(h));
    Ok(d.coefficient(&vec![0; m]))
}

/// The ring of `n!·V` for a complete simplicial fan.
pub fn ring_of_fan(fan: &Fan, h0: &[BigRational]) -> Result<(VolumePolynomial, GradedRing)> {
    let v = volume_polynomial(fan, h0)?;
    let fact = (1..=v.degree).fold(BigInt::one(), |a, k| a * BigInt::from(k));
    let mut ring = build_ring(&v.polynomial.scale(&BigRational::from(fact)))?;
    ring.smooth_fan = Some(fan.is_unimodular());
    Ok((v, ring))
}

/// A complete simplicial fan refining the normal fan of `r`, together with a
/// reference vector in its chamber. Non-simplicial cones are removed by
/// truncating their dual faces, one stellar subdivision at a time.
pub fn simplicial_chamber(r: &Polytope) -> Result<(Fan, RationalVector)> {
    let n = r.ambient_dim();
    let mut p = r.clone();
    let mut fan = p.normal_fan()?.fan;
    while let Some(cone) = first_non_simplicial(&fan) {
        let w: IntVector = cone.rays().iter().fold(vec![BigInt::zero(); n], |acc, r| {
            acc.iter().zip(r).map(|(a, b)| a + b).collect()
        });
        let target = stellar_subdivision(&fan, &to_rational(&w));
        let h = p.support_value(&w)?;
        let mut eps = BigRational::one();
        let truncated = loop {
            let mut normals: Vec<RationalVector> = p.facets().iter().map(|f| to_rational(&f.normal)).collect();
            let mut offsets: Vec<BigRational> = p.facets().iter().map(|f| f.offset.clone()).collect();
            normals.push(to_rational(&w));
            offsets.push(&h - &eps);
            let t = Polytope::from_inequalities(n, &normals, &offsets)?;
            if t.is_full_dimensional() && t.normal_fan()?.fan == target {
                break t;
            }
            eps /= BigRational::from(BigInt::from(2));
            if eps.denom().bits() > 256 {
                return Err(Error::DegenerateChamber(format!("cannot truncate the face dual to {cone}")));
            }
        };
        p = truncated;
        fan = target;
    }
    let h0 = fan.rays().iter().map(|u| p.support_value(u)).collect::<Result<Vec<_>>>()?;
    Ok((fan, h0))
}

fn first_non_simplicial(fan: &Fan) -> Option<Cone> {
    let mut bad: Vec<&Cone> = fan.cones().iter().filter(|c| !c.is_simplicial()).collect();
    bad.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.cmp(b)));
    bad.first().map(|c| (*c).clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::Cone;
    use crate::lattice::{ints, rat, rats};
    use crate::polytope::mixed_volume;

    fn fan_from_max(n: usize, cones: &[&[&[i64]]]) -> Fan {
        Fan::from_cones(
            n,
            cones.iter().map(|c| Cone::from_generators(n, &c.iter().map(|r| ints(r)).collect::<Vec<_>>(), &[])),
        )
    }

    /// Rays in canonical order: (-1,-1), (0,1), (1,0).
    fn p2() -> Fan {
        fan_from_max(2, &[&[&[1, 0], &[0, 1]], &[&[0, 1], &[-1, -1]], &[&[-1, -1], &[1, 0]]])
    }

    /// Rays in canonical order: (-1,0), (0,-1), (0,1), (1,0).
    fn p1p1() -> Fan {
        fan_from_max(
            2,
            &[&[&[1, 0], &[0, 1]], &[&[0, 1], &[-1, 0]], &[&[-1, 0], &[0, -1]], &[&[0, -1], &[1, 0]]],
        )
    }

    fn p1() -> Fan {
        fan_from_max(1, &[&[&[1]], &[&[-1]]])
    }

    fn poly(pts: &[&[i64]]) -> Polytope {
        Polytope::convex_hull(&pts.iter().map(|p| rats(p)).collect::<Vec<_>>()).unwrap()
    }

    fn e(v: &[u32]) -> Exponent {
        v.to_vec()
    }

    #[test]
    fn graded_lex_order() {
        assert_eq!(graded_lex(2, 2), vec![e(&[2, 0]), e(&[1, 1]), e(&[0, 2])]);
        assert_eq!(graded_lex(3, 0), vec![e(&[0, 0, 0])]);
        assert_eq!(graded_lex(3, 2).len(), 6);
    }

    #[test]
    fn p2_volume_polynomial() {
        let v = volume_polynomial(&p2(), &rats(&[1, 0, 0])).unwrap();
        let expected = Polynomial::linear_power(&rats(&[1, 1, 1]), 2).scale(&ratio(1, 2));
        assert_eq!(v.polynomial, expected);
        assert_eq!(v.eval(&rats(&[1, 0, 0])), ratio(1, 2));
    }

    #[test]
    fn polynomial_display() {
        let p = Polynomial::linear_power(&rats(&[1, 1]), 2).scale(&ratio(1, 2));
        assert_eq!(p.to_string(), "1/2*h1^2 + h1*h2 + 1/2*h2^2");
        assert_eq!(Polynomial::zero(2).to_string(), "0");
    }

    #[test]
    fn p1p1_volume_polynomial() {
        let v = volume_polynomial(&p1p1(), &rats(&[1, 1, 1, 1])).unwrap();
        // (h(-e1) + h(e1)) (h(-e2) + h(e2))
        let a = Polynomial::linear_power(&rats(&[1, 0, 0, 1]), 1);
        let b = Polynomial::linear_power(&rats(&[0, 1, 1, 0]), 1);
        assert_eq!(v.polynomial, a.mul(&b));
    }

    #[test]
    fn p1_volume_polynomial() {
        let v = volume_polynomial(&p1(), &rats(&[0, 1])).unwrap();
        assert_eq!(v.polynomial, Polynomial::linear_power(&rats(&[1, 1]), 1));
    }

    #[test]
    fn volume_polynomial_errors() {
        assert!(matches!(volume_polynomial(&p2(), &rats(&[0, 0, 0])), Err(Error::DegenerateChamber(_))));
        assert!(matches!(volume_polynomial(&p2(), &rats(&[1, 0])), Err(Error::LengthMismatch { .. })));
        let quadrant = fan_from_max(2, &[&[&[1, 0], &[0, 1]]]);
        assert_eq!(volume_polynomial(&quadrant, &rats(&[1, 1])), Err(Error::NotComplete));
        let square_cones = fan_from_max(2, &[&[&[1, 1], &[-1, 1]], &[&[-1, 1], &[-1, -1]], &[&[-1, -1], &[1, -1]], &[&[1, -1], &[1, 1]]]);
        assert!(volume_polynomial(&square_cones, &rats(&[1, 1, 1, 1])).is_ok());
        let octant_cones = crate::fan::complete_refinement(3, &[]);
        assert!(volume_polynomial(&octant_cones, &rats(&[1, 1, 1, 1, 1, 1])).is_ok());
    }

    #[test]
    fn ring_dimensions() {
        let p = Polynomial::linear_power(&rats(&[1, 1, 1]), 2);
        let r = build_ring(&p).unwrap();
        assert_eq!(r.dims(), vec![1, 1, 1]);
        assert!(r.pairing_is_perfect());

        let a = Polynomial::linear_power(&rats(&[1, 1, 0, 0]), 1);
        let b = Polynomial::linear_power(&rats(&[0, 0, 1, 1]), 1);
        let r = build_ring(&a.mul(&b).scale(&rat(2))).unwrap();
        assert_eq!(r.dims(), vec![1, 2, 1]);
        assert!(r.pairing_is_perfect());

        let h1h2 = Polynomial::from_terms(2, [(e(&[1, 1]), rat(1))]);
        let r = build_ring(&h1h2).unwrap();
        assert_eq!(r.dims(), vec![1, 2, 1]);
        assert_eq!(r.bases[1], vec![e(&[1, 0]), e(&[0, 1])]);
        assert_eq!(r.pairings[1], vec![rats(&[0, 1]), rats(&[1, 0])]);

        assert_eq!(build_ring(&Polynomial::zero(2)), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn ring_scaling_invariance() {
        let p = Polynomial::linear_power(&rats(&[1, 2, 0]), 1).mul(&Polynomial::linear_power(&rats(&[0, 1, 3]), 2));
        let r1 = build_ring(&p).unwrap();
        let r2 = build_ring(&p.scale(&ratio(-3, 7))).unwrap();
        assert_eq!(r1.dims(), r2.dims());
        assert_eq!(r1.bases, r2.bases);
        for (m1, m2) in r1.pairings.iter().zip(&r2.pairings) {
            for (a, b) in m1.iter().flatten().zip(m2.iter().flatten()) {
                assert_eq!(a * ratio(-3, 7), *b);
            }
        }
    }

    #[test]
    fn rings_of_fans() {
        let (_, r) = ring_of_fan(&p2(), &rats(&[1, 0, 0])).unwrap();
        assert_eq!(r.dims(), vec![1, 1, 1]);
        assert_eq!(r.smooth_fan, Some(true));
        let (_, r) = ring_of_fan(&p1p1(), &rats(&[1, 1, 1, 1])).unwrap();
        assert_eq!(r.dims(), vec![1, 2, 1]);
        let (_, r) = ring_of_fan(&p1(), &rats(&[1, 1])).unwrap();
        assert_eq!(r.dims(), vec![1, 1]);
        assert!(r.pairing_is_perfect());
    }

    #[test]
    fn classes() {
        let t = poly(&[&[0, 0], &[-1, 0], &[0, -1]]);
        assert_eq!(class_of_polytope(&p2(), &t).unwrap(), rats(&[1, 0, 0]));
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(class_of_polytope(&p1p1(), &sq).unwrap(), rats(&[0, 0, 1, 1]));
        let pt = poly(&[&[2, 3]]);
        assert_eq!(class_of_polytope(&p1p1(), &pt).unwrap(), rats(&[-2, -3, 3, 2]));
        // the diamond has no vertex maximizing both e1 and e2
        let diamond = poly(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]);
        assert!(matches!(class_of_polytope(&p1p1(), &diamond), Err(Error::NotLinearOnCone(_))));
    }

    #[test]
    fn top_pairings() {
        let v = volume_polynomial(&p2(), &rats(&[1, 0, 0])).unwrap();
        assert_eq!(top_pairing(&v, &[rats(&[1, 0, 0]), rats(&[1, 0, 0])]).unwrap(), rat(1));
        assert_eq!(top_pairing(&v, &[rats(&[2, 0, 0]), rats(&[2, 0, 0])]).unwrap(), rat(4));
        let w = volume_polynomial(&p1p1(), &rats(&[1, 1, 1, 1])).unwrap();
        assert_eq!(top_pairing(&w, &[rats(&[0, 0, 0, 1]), rats(&[0, 0, 1, 0])]).unwrap(), rat(1));
        assert!(matches!(top_pairing(&v, &[rats(&[1, 0, 0])]), Err(Error::LengthMismatch { .. })));
        assert!(matches!(top_pairing(&v, &[rats(&[1, 0]), rats(&[1, 0])]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn polarization_matches_mixed_volume() {
        let a = poly(&[&[0, 0], &[2, 0], &[0, 1], &[1, 2]]);
        let b = poly(&[&[0, 0], &[1, 0], &[0, 1]]);
        let sum = crate::polytope::minkowski_sum(&a, &b).unwrap();
        let (fan, h0) = simplicial_chamber(&sum).unwrap();
        let v = volume_polynomial(&fan, &h0).unwrap();
        let ha = class_of_polytope(&fan, &a).unwrap();
        let hb = class_of_polytope(&fan, &b).unwrap();
        let mv = mixed_volume(&[a.clone(), b]).unwrap() * rat(2);
        assert_eq!(top_pairing(&v, &[ha.clone(), hb]).unwrap(), mv);
        assert_eq!(top_pairing(&v, &[ha.clone(), ha]).unwrap(), a.volume() * rat(2));
    }

    #[test]
    fn octahedron_is_made_simplicial() {
        let oct = poly(&[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1], &[0, 0, -1]]);
        let (fan, h0) = simplicial_chamber(&oct).unwrap();
        assert!(fan.is_simplicial());
        assert_eq!(fan.rays().len(), 14);
        let v = volume_polynomial(&fan, &h0).unwrap();
        let h = class_of_polytope(&fan, &oct).unwrap();
        assert_eq!(v.eval(&h), oct.volume());
        let (_, ring) = ring_of_fan(&fan, &h0).unwrap();
        assert!(ring.pairing_is_perfect());
        assert_eq!(ring.dims()[0], 1);
        assert_eq!(ring.dims()[3], 1);
    }
}
