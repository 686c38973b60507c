//! Double description: generators of a polyhedral cone given by homogeneous
//! inequalities and equations. Every conversion between H- and V-descriptions
//! in the crate goes through here, always in exact integer arithmetic.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::lattice::{dot_int, primitive, IntVector};

#[derive(Clone, Debug, Default)]
pub(crate) struct Generators {
    /// Extreme rays modulo the lineality space, primitive.
    pub rays: Vec<IntVector>,
    pub lineality: Vec<IntVector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(bits: usize) -> Self {
        BitSet(vec![0; bits.div_ceil(64).max(1)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn intersect(&self, other: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_subset(&self, other: &BitSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

fn combine(coef_a: &BigInt, a: &[BigInt], coef_b: &BigInt, b: &[BigInt]) -> IntVector {
    primitive(&a.iter().zip(b).map(|(x, y)| coef_a * x - coef_b * y).collect::<Vec<_>>())
}

/// Generators of `{x in R^dim : a·x >= 0 for a in ineqs, e·x = 0 for e in eqs}`.
pub(crate) fn cone_generators(dim: usize, ineqs: &[IntVector], eqs: &[IntVector]) -> Generators {
    let mut lineality: Vec<IntVector> = (0..dim)
        .map(|i| (0..dim).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();

    for e in eqs {
        if let Some(idx) = lineality.iter().position(|l| !dot_int(e, l).is_zero()) {
            let l0 = lineality.remove(idx);
            let el0 = dot_int(e, &l0);
            for l in lineality.iter_mut() {
                let el = dot_int(e, l);
                if !el.is_zero() {
                    *l = combine(&el0, l, &el, &l0);
                }
            }
        }
    }

    let m = ineqs.len();
    let mut rays: Vec<(IntVector, BitSet)> = Vec::new();
    for (k, a) in ineqs.iter().enumerate() {
        if let Some(idx) = lineality.iter().position(|l| !dot_int(a, l).is_zero()) {
            let mut l0 = lineality.remove(idx);
            let mut al0 = dot_int(a, &l0);
            if al0.is_negative() {
                l0 = l0.iter().map(|x| -x).collect();
                al0 = -al0;
            }
            for l in lineality.iter_mut() {
                let al = dot_int(a, l);
                if !al.is_zero() {
                    *l = combine(&al0, l, &al, &l0);
                }
            }
            for (r, z) in rays.iter_mut() {
                let ar = dot_int(a, r);
                if !ar.is_zero() {
                    *r = combine(&al0, r, &ar, &l0);
                }
                z.insert(k);
            }
            let mut z = BitSet::new(m);
            for i in 0..k {
                z.insert(i);
            }
            rays.push((l0, z));
            continue;
        }

        let values: Vec<BigInt> = rays.iter().map(|(r, _)| dot_int(a, r)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        if neg.is_empty() {
            for (i, (_, z)) in rays.iter_mut().enumerate() {
                if values[i].is_zero() {
                    z.insert(k);
                }
            }
            continue;
        }

        let mut new_rays: Vec<(IntVector, BitSet)> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].1.intersect(&rays[q].1);
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, (_, z))| i == p || i == q || !common.is_subset(z));
                if !adjacent {
                    continue;
                }
                let v = combine(&values[p], &rays[q].0, &values[q], &rays[p].0);
                let mut z = common;
                z.insert(k);
                new_rays.push((v, z));
            }
        }
        let mut kept: Vec<(IntVector, BitSet)> = Vec::new();
        for (i, (r, mut z)) in rays.into_iter().enumerate() {
            if values[i].is_negative() {
                continue;
            }
            if values[i].is_zero() {
                z.insert(k);
            }
            kept.push((r, z));
        }
        kept.extend(new_rays);
        rays = kept;
    }

    Generators { rays: rays.into_iter().map(|(r, _)| r).collect(), lineality }
}
