//! JSON documents for polytopes, fans and cycles.
//!
//! Numbers are read from JSON integers or from strings `"p/q"`; they are
//! always written as strings so that no precision is lost.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cycle::TropicalCycle;
use crate::error::{Error, Result};
use crate::fan::{Cone, Fan};
use crate::lattice::{to_rational, IntVector, RationalVector};
use crate::polytope::Polytope;

/// An exact rational as it appears in documents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Num(pub BigRational);

pub fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        None => Ok(BigRational::from(BigInt::from_str(s).map_err(|_| bad())?)),
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q == BigInt::from(0) {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(p, q))
        }
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Num, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Num;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a string \"p/q\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Num, E> {
                Ok(Num(BigRational::from(BigInt::from(v))))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Num, E> {
                Ok(Num(BigRational::from(BigInt::from(v))))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Num, E> {
                parse_rational(v).map(Num).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

pub fn nums(v: &[BigRational]) -> Vec<Num> {
    v.iter().cloned().map(Num).collect()
}

pub fn int_nums(v: &[BigInt]) -> Vec<Num> {
    nums(&to_rational(v))
}

fn unwrap_nums(v: Vec<Num>) -> RationalVector {
    v.into_iter().map(|n| n.0).collect()
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PolytopeDoc {
    pub dim: usize,
    pub vertices: Vec<Vec<Num>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ConeDoc {
    pub rays: Vec<Vec<Num>>,
    #[serde(default)]
    pub lineality: Vec<Vec<Num>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SupportEntry {
    pub ray: Vec<Num>,
    pub value: Num,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FanDoc {
    pub dim: usize,
    pub cones: Vec<ConeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h0: Option<Vec<SupportEntry>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct WeightedConeDoc {
    pub rays: Vec<Vec<Num>>,
    #[serde(default)]
    pub lineality: Vec<Vec<Num>>,
    pub weight: Num,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CycleDoc {
    pub dim: usize,
    pub cycle_dim: usize,
    pub cones: Vec<WeightedConeDoc>,
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn check_len(v: &[Num], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: v.len() });
    }
    Ok(())
}

fn cone_from_doc(n: usize, rays: Vec<Vec<Num>>, lineality: Vec<Vec<Num>>) -> Result<Cone> {
    for v in rays.iter().chain(&lineality) {
        check_len(v, n)?;
    }
    let rays: Vec<RationalVector> = rays.into_iter().map(unwrap_nums).collect();
    let lin: Vec<RationalVector> = lineality.into_iter().map(unwrap_nums).collect();
    Ok(Cone::from_rational_generators(n, &rays, &lin))
}

fn cone_to_doc(c: &Cone) -> ConeDoc {
    ConeDoc {
        rays: c.rays().iter().map(|r| int_nums(r)).collect(),
        lineality: c.lineality().iter().map(|r| int_nums(r)).collect(),
    }
}

pub fn polytope_from_json(text: &str) -> Result<Polytope> {
    let doc: PolytopeDoc = from_json(text)?;
    for v in &doc.vertices {
        check_len(v, doc.dim)?;
    }
    Polytope::convex_hull(&doc.vertices.into_iter().map(unwrap_nums).collect::<Vec<_>>())
}

pub fn polytope_to_doc(p: &Polytope) -> PolytopeDoc {
    PolytopeDoc { dim: p.ambient_dim(), vertices: p.vertices().iter().map(|v| nums(v)).collect() }
}

/// A fan and, if present, its reference support vector indexed by `fan.rays()`.
pub fn fan_from_json(text: &str) -> Result<(Fan, Option<RationalVector>)> {
    let doc: FanDoc = from_json(text)?;
    let n = doc.dim;
    let cones: Vec<Cone> =
        doc.cones.into_iter().map(|c| cone_from_doc(n, c.rays, c.lineality)).collect::<Result<_>>()?;
    let fan = Fan::from_cones(n, cones);
    fan.check_axioms().map_err(Error::NotAFan)?;
    let h0 = match doc.h0 {
        None => None,
        Some(entries) => {
            let rays = fan.rays();
            let mut h: Vec<Option<BigRational>> = vec![None; rays.len()];
            for e in entries {
                check_len(&e.ray, n)?;
                let ray = crate::lattice::primitive_generator(&unwrap_nums(e.ray))?;
                let i = rays
                    .binary_search(&ray)
                    .map_err(|_| Error::Parse(format!("h0 names {ray:?}, which is not a ray of the fan")))?;
                h[i] = Some(e.value.0);
            }
            let h: Option<RationalVector> = h.into_iter().collect();
            Some(h.ok_or_else(|| Error::Parse("h0 must give a value for every ray".into()))?)
        }
    };
    Ok((fan, h0))
}

/// Maximal cones of `fan`, plus `h0` keyed by ray when given.
pub fn fan_to_doc(fan: &Fan, h0: Option<&[BigRational]>) -> FanDoc {
    FanDoc {
        dim: fan.ambient_dim(),
        cones: fan.maximal_cones().into_iter().map(cone_to_doc).collect(),
        h0: h0.map(|h| {
            fan.rays()
                .iter()
                .zip(h)
                .map(|(r, v): (&IntVector, _)| SupportEntry { ray: int_nums(r), value: Num(v.clone()) })
                .collect()
        }),
    }
}

/// Loads a cycle; `checked` also verifies balancing.
pub fn cycle_from_json(text: &str, checked: bool) -> Result<TropicalCycle> {
    let doc: CycleDoc = from_json(text)?;
    let n = doc.dim;
    let cones = doc
        .cones
        .into_iter()
        .map(|c| Ok((cone_from_doc(n, c.rays, c.lineality)?, c.weight.0)))
        .collect::<Result<Vec<_>>>()?;
    if checked {
        TropicalCycle::new(n, doc.cycle_dim, cones)
    } else {
        TropicalCycle::unchecked(n, doc.cycle_dim, cones)
    }
}

/// Nonzero-weight cones of `c`.
pub fn cycle_to_doc(c: &TropicalCycle) -> CycleDoc {
    CycleDoc {
        dim: c.ambient_dim(),
        cycle_dim: c.dim(),
        cones: c
            .support()
            .iter()
            .map(|(cone, w)| {
                let d = cone_to_doc(cone);
                WeightedConeDoc { rays: d.rays, lineality: d.lineality, weight: Num(w.clone()) }
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::tropical_hypersurface;
    use crate::lattice::{rat, ratio, rats};

    #[test]
    fn rationals_round_trip() {
        for (s, x) in [("3", rat(3)), ("-1/2", ratio(-1, 2)), ("4/6", ratio(2, 3))] {
            assert_eq!(parse_rational(s).unwrap(), x);
        }
        assert_eq!(format_rational(&ratio(-1, 2)), "-1/2");
        assert_eq!(format_rational(&rat(5)), "5");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        let v: Vec<Num> = serde_json::from_str(r#"[1, "2/3", -4]"#).unwrap();
        assert_eq!(unwrap_nums(v), vec![rat(1), ratio(2, 3), rat(-4)]);
    }

    #[test]
    fn polytope_round_trip() {
        let p = polytope_from_json(r#"{"dim": 2, "vertices": [[0,0],[1,0],[0,1],["1/3","1/3"]]}"#).unwrap();
        assert_eq!(p.vertices().len(), 3);
        let text = serde_json::to_string(&polytope_to_doc(&p)).unwrap();
        assert_eq!(polytope_from_json(&text).unwrap(), p);
        assert!(matches!(
            polytope_from_json(r#"{"dim": 3, "vertices": [[0,0]]}"#),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(polytope_from_json("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn fan_round_trip_with_h0() {
        let text = r#"{"dim": 2, "cones": [
            {"rays": [[1,0],[0,1]]}, {"rays": [[0,1],[-1,-1]]}, {"rays": [[-1,-1],[1,0]]}],
            "h0": [{"ray": [1,0], "value": 0}, {"ray": [0,1], "value": 0}, {"ray": [-1,-1], "value": 1}]}"#;
        let (fan, h0) = fan_from_json(text).unwrap();
        assert_eq!(fan.cones().len(), 7);
        assert_eq!(h0.clone().unwrap(), rats(&[1, 0, 0]));
        let out = serde_json::to_string(&fan_to_doc(&fan, h0.as_deref())).unwrap();
        let (fan2, h2) = fan_from_json(&out).unwrap();
        assert_eq!(fan2, fan);
        assert_eq!(h2, h0);
        let missing = r#"{"dim": 1, "cones": [{"rays": [[1]]}, {"rays": [[-1]]}], "h0": [{"ray": [1], "value": 1}]}"#;
        assert!(matches!(fan_from_json(missing), Err(Error::Parse(_))));
    }

    #[test]
    fn cycle_round_trip() {
        let p = polytope_from_json(r#"{"dim": 2, "vertices": [[0,0],[2,0],[0,1],[2,1]]}"#).unwrap();
        let h = tropical_hypersurface(&p).unwrap();
        let text = serde_json::to_string(&cycle_to_doc(&h)).unwrap();
        let back = cycle_from_json(&text, true).unwrap();
        assert!(back.equivalent(&h));
        let bad = r#"{"dim": 2, "cycle_dim": 1, "cones": [{"rays": [[1,0]], "weight": 1}, {"rays": [[0,1]], "weight": "1"}]}"#;
        assert!(matches!(cycle_from_json(bad, true), Err(Error::Unbalanced { .. })));
        assert!(!cycle_from_json(bad, false).unwrap().is_balanced());
        let line = r#"{"dim": 2, "cycle_dim": 1, "cones": [{"rays": [], "lineality": [[1,0]], "weight": "3/2"}]}"#;
        let c = cycle_from_json(line, true).unwrap();
        assert_eq!(c.support()[0].1, ratio(3, 2));
    }
}
