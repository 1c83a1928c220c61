//! Facet enumeration by the double description method.
//!
//! A point set `p_1..p_n` in `R^d` is homogenised to the cone
//! `{ (a, b) : <a, p_i> - b >= 0 }` in `R^(d+1)`. When the points affinely span
//! `R^d` this cone is pointed and its extreme rays are exactly the facet
//! inequalities `<a, x> >= b` of the hull. The rays are computed incrementally,
//! one constraint at a time, with the combinatorial adjacency test.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::linalg::{self, dot_int, kernel_vector, primitive};
use super::{Facet, GeometryError, LatticeVector, RationalVector};

#[derive(Clone, Debug, PartialEq, Eq)]
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn new(n: usize) -> Self {
        BitSet {
            words: vec![0; n.div_ceil(64)],
        }
    }

    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn intersection(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    fn is_superset(&self, other: &BitSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & b == *b)
    }

    fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

struct Ray {
    v: Vec<BigInt>,
    tight: BitSet,
}

/// Irredundant facets of `conv(points)`, sorted lexicographically by normal.
pub fn convex_hull_facets(points: &[RationalVector]) -> Result<Vec<Facet>, GeometryError> {
    let Some(first) = points.first() else {
        return Err(GeometryError::Empty);
    };
    let d = first.dim();
    if d == 0 {
        return Err(GeometryError::Empty);
    }
    if let Some(p) = points.iter().find(|p| p.dim() != d) {
        return Err(GeometryError::DimensionMismatch {
            expected: d,
            found: p.dim(),
        });
    }

    // Clear denominators globally; the hull of scale * P has the same normals.
    let all: Vec<BigRational> = points.iter().flat_map(|p| p.0.iter().cloned()).collect();
    let scale = linalg::denominators_lcm(&all);
    let rows: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| {
            let mut r: Vec<BigInt> = p.0.iter().map(|x| (x * &scale).to_integer()).collect();
            r.push(BigInt::from(-1));
            r
        })
        .collect();

    let dd = d + 1;
    let rank = linalg::rank_int(&rows);
    if rank < dd {
        return Err(GeometryError::NotFullDimensional {
            dim: d,
            affine_dim: rank.saturating_sub(1),
        });
    }

    // Greedy choice of dd independent rows for the initial simplicial cone.
    let mut basis: Vec<usize> = Vec::with_capacity(dd);
    for i in 0..rows.len() {
        let mut trial: Vec<Vec<BigInt>> = basis.iter().map(|&j| rows[j].clone()).collect();
        trial.push(rows[i].clone());
        if linalg::rank_int(&trial) == trial.len() {
            basis.push(i);
            if basis.len() == dd {
                break;
            }
        }
    }

    let n = rows.len();
    let mut rays: Vec<Ray> = Vec::with_capacity(dd);
    for (j, &bj) in basis.iter().enumerate() {
        let others: Vec<Vec<BigInt>> = basis
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, &bk)| rows[bk].clone())
            .collect();
        let mut v = kernel_vector(&others, dd).expect("independent rows have a 1-dim kernel");
        if dot_int(&rows[bj], &v).is_negative() {
            v.iter_mut().for_each(|x| *x = -x.clone());
        }
        let mut tight = BitSet::new(n);
        for (k, &bk) in basis.iter().enumerate() {
            if k != j {
                tight.insert(bk);
            }
        }
        rays.push(Ray { v, tight });
    }

    for i in (0..n).filter(|i| !basis.contains(i)) {
        let values: Vec<BigInt> = rays.iter().map(|r| dot_int(&rows[i], &r.v)).collect();
        let (mut pos, mut neg, mut zero) = (Vec::new(), Vec::new(), Vec::new());
        for (k, s) in values.iter().enumerate() {
            if s.is_positive() {
                pos.push(k);
            } else if s.is_negative() {
                neg.push(k);
            } else {
                zero.push(k);
            }
        }
        if neg.is_empty() {
            for &k in &zero {
                rays[k].tight.insert(i);
            }
            continue;
        }

        let mut fresh: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].tight.intersection(&rays[q].tight);
                if common.len() < dd - 2 {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == p || k == q || !r.tight.is_superset(&common));
                if !adjacent {
                    continue;
                }
                let (sp, sq) = (&values[p], &values[q]);
                let combo: Vec<BigInt> = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(xq, xp)| sp * xq - sq * xp)
                    .collect();
                let mut tight = common;
                tight.insert(i);
                fresh.push(Ray {
                    v: primitive(&combo),
                    tight,
                });
            }
        }

        let mut next: Vec<Ray> = Vec::with_capacity(pos.len() + zero.len() + fresh.len());
        let mut old: Vec<Option<Ray>> = rays.into_iter().map(Some).collect();
        for &k in &pos {
            next.push(old[k].take().unwrap());
        }
        for &k in &zero {
            let mut r = old[k].take().unwrap();
            r.tight.insert(i);
            next.push(r);
        }
        next.extend(fresh);
        rays = next;
    }

    let mut facets: Vec<Facet> = rays
        .into_iter()
        .map(|r| {
            let normal = &r.v[..d];
            let g = linalg::gcd_all(normal);
            debug_assert!(!g.is_zero());
            let normal: Vec<BigInt> = normal.iter().map(|x| x / &g).collect();
            let offset = BigRational::new(r.v[d].clone(), g * &scale);
            Facet {
                normal: LatticeVector(normal),
                offset,
            }
        })
        .collect();
    facets.sort();
    facets.dedup();
    Ok(facets)
}
