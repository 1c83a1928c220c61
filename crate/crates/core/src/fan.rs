//! Simplicial fans: construction from reflexive polytopes, the smooth /
//! complete predicates, cone location and primitive collections.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice_geometry::linalg::{self, RatMatrix};
use crate::lattice_geometry::{LatticeVector, Polytope};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("polytope is not reflexive: {0}")]
    NotReflexive(String),
    #[error("cone {0:?} is not simplicial")]
    NotSimplicial(Vec<usize>),
    #[error("cone {0:?} is not smooth")]
    NotSmooth(Vec<usize>),
    #[error("ray {0} is zero or not primitive")]
    BadRay(LatticeVector),
    #[error("ray {0} is listed twice")]
    DuplicateRay(LatticeVector),
    #[error("ray index {0} out of range")]
    BadIndex(usize),
    #[error("vector {0} is not in the support of the fan")]
    NotInSupport(LatticeVector),
    #[error("ray order does not match the fan's rays")]
    RayOrderMismatch,
    #[error("fan axiom violated: {0}")]
    Axiom(String),
}

/// A cone, as the sorted indices of its rays.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone(pub Vec<usize>);

impl Cone {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn contains_ray(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn rays(&self) -> &[usize] {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothCheck {
    pub smooth: bool,
    pub offending: Option<Cone>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<LatticeVector>,
    /// `cones[k]` lists the `k`-dimensional cones.
    cones: Vec<Vec<Cone>>,
    maximal: Vec<Cone>,
    /// Inverse of the ray matrix (rays as columns) of each full-dimensional
    /// maximal cone.
    inverses: Vec<Option<RatMatrix>>,
    smooth: bool,
    complete: bool,
}

impl Fan {
    /// Builds the fan generated by `maximal` cones together with all faces.
    pub fn from_maximal_cones(
        dim: usize,
        rays: Vec<LatticeVector>,
        maximal: Vec<Vec<usize>>,
    ) -> Result<Fan, FanError> {
        let mut seen = HashSet::new();
        for r in &rays {
            if r.dim() != dim || r.is_zero() || !r.is_primitive() {
                return Err(FanError::BadRay(r.clone()));
            }
            if !seen.insert(r.clone()) {
                return Err(FanError::DuplicateRay(r.clone()));
            }
        }
        let mut cones: Vec<Cone> = Vec::new();
        for mut c in maximal {
            c.sort_unstable();
            c.dedup();
            if let Some(&i) = c.iter().find(|&&i| i >= rays.len()) {
                return Err(FanError::BadIndex(i));
            }
            let m: Vec<Vec<BigInt>> = c.iter().map(|&i| rays[i].0.clone()).collect();
            if linalg::rank_int(&m) != c.len() {
                return Err(FanError::NotSimplicial(c));
            }
            cones.push(Cone(c));
        }
        cones.sort();
        cones.dedup();
        let maximal: Vec<Cone> = cones
            .iter()
            .filter(|c| {
                !cones
                    .iter()
                    .any(|o| o.dim() > c.dim() && c.0.iter().all(|i| o.contains_ray(*i)))
            })
            .cloned()
            .collect();

        let mut by_dim: Vec<HashSet<Cone>> = vec![HashSet::new(); dim + 1];
        for c in &maximal {
            let k = c.dim();
            for mask in 0u64..(1u64 << k) {
                let face: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| c.0[b]).collect();
                by_dim[face.len()].insert(Cone(face));
            }
        }
        if maximal.is_empty() {
            by_dim[0].insert(Cone(Vec::new()));
        }
        let cones: Vec<Vec<Cone>> = by_dim
            .into_iter()
            .map(|s| {
                let mut v: Vec<Cone> = s.into_iter().collect();
                v.sort();
                v
            })
            .collect();

        let inverses = maximal
            .iter()
            .map(|c| {
                (c.dim() == dim).then(|| {
                    let b: RatMatrix = (0..dim)
                        .map(|row| {
                            c.0.iter()
                                .map(|&j| BigRational::from_integer(rays[j].0[row].clone()))
                                .collect()
                        })
                        .collect();
                    linalg::inverse(&b).expect("simplicial full cone is invertible")
                })
            })
            .collect();

        let mut fan = Fan {
            dim,
            rays,
            cones,
            maximal,
            inverses,
            smooth: false,
            complete: false,
        };
        fan.smooth = fan.check_smooth().smooth;
        fan.complete = fan.check_complete();
        Ok(fan)
    }

    /// The fan over the proper faces of a reflexive polytope in `N_R`.
    pub fn from_reflexive(dual: &Polytope) -> Result<Fan, FanError> {
        let check = dual.is_reflexive();
        if !check.holds {
            return Err(FanError::NotReflexive(check.detail));
        }
        let d = dual.dim();
        let rays: Vec<LatticeVector> = dual
            .vertices()
            .iter()
            .map(|v| v.to_lattice().expect("reflexive polytopes are integral"))
            .collect();
        let mut maximal = Vec::new();
        for k in 0..dual.facets().len() {
            let verts = dual.facet_vertices(k).to_vec();
            if verts.len() != d {
                return Err(FanError::NotSimplicial(verts));
            }
            maximal.push(verts);
        }
        Fan::from_maximal_cones(d, rays, maximal)
    }

    /// Same fan with its rays listed in `order`.
    pub fn reorder_rays(&self, order: &[LatticeVector]) -> Result<Fan, FanError> {
        if order.len() != self.rays.len() {
            return Err(FanError::RayOrderMismatch);
        }
        let mut new_index = vec![usize::MAX; self.rays.len()];
        for (new, r) in order.iter().enumerate() {
            let old = self
                .rays
                .iter()
                .position(|x| x == r)
                .ok_or(FanError::RayOrderMismatch)?;
            if new_index[old] != usize::MAX {
                return Err(FanError::RayOrderMismatch);
            }
            new_index[old] = new;
        }
        let maximal = self
            .maximal
            .iter()
            .map(|c| c.0.iter().map(|&i| new_index[i]).collect())
            .collect();
        Fan::from_maximal_cones(self.dim, order.to_vec(), maximal)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &LatticeVector {
        &self.rays[i]
    }

    /// Cones of dimension `k`.
    pub fn cones(&self, k: usize) -> &[Cone] {
        self.cones.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        &self.maximal
    }

    /// Number of top-dimensional cones, `|Σ^d|`.
    pub fn top_cone_count(&self) -> usize {
        self.cones(self.dim).len()
    }

    pub fn contains_cone(&self, rays: &[usize]) -> bool {
        let mut c = rays.to_vec();
        c.sort_unstable();
        self.cones(c.len()).binary_search(&Cone(c)).is_ok()
    }

    pub fn is_smooth(&self) -> bool {
        self.smooth
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Stored cones are simplicial by construction.
    pub fn is_simplicial(&self) -> bool {
        true
    }

    /// Inverse of the matrix whose columns are the rays of maximal cone `k`
    /// (full-dimensional cones only).
    pub fn cone_inverse(&self, k: usize) -> Option<&RatMatrix> {
        self.inverses.get(k).and_then(Option::as_ref)
    }

    pub fn ray_matrix(&self, cone: &Cone) -> Vec<Vec<BigInt>> {
        cone.0.iter().map(|&i| self.rays[i].0.clone()).collect()
    }

    /// Every maximal cone's rays extend to a lattice basis; reports the first
    /// cone that fails.
    pub fn check_smooth(&self) -> SmoothCheck {
        for c in &self.maximal {
            if !linalg::minors_gcd(&self.ray_matrix(c)).is_one() {
                return SmoothCheck {
                    smooth: false,
                    offending: Some(c.clone()),
                };
            }
        }
        SmoothCheck {
            smooth: true,
            offending: None,
        }
    }

    fn ridge_counts(&self) -> BTreeMap<Vec<usize>, Vec<usize>> {
        let mut counts: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (k, c) in self.maximal.iter().enumerate() {
            for skip in 0..c.dim() {
                let ridge: Vec<usize> = c.0.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &r)| r).collect();
                counts.entry(ridge).or_default().push(k);
            }
        }
        counts
    }

    fn check_complete(&self) -> bool {
        if self.maximal.is_empty() || self.maximal.iter().any(|c| c.dim() != self.dim) {
            return false;
        }
        self.ridge_counts().values().all(|v| v.len() == 2)
    }

    /// Cone containing `v` in its relative interior, with the (rational)
    /// coefficients of `v` in that cone's rays. `None` outside the support.
    pub fn locate(&self, v: &LatticeVector) -> Option<(Cone, Vec<BigRational>)> {
        if v.is_zero() {
            return Some((Cone(Vec::new()), Vec::new()));
        }
        let vr: Vec<BigRational> = v.0.iter().cloned().map(BigRational::from_integer).collect();
        for (c, inv) in self.maximal.iter().zip(&self.inverses) {
            let Some(inv) = inv else { continue };
            let coeffs: Vec<BigRational> = inv
                .iter()
                .map(|row| row.iter().zip(&vr).map(|(a, b)| a * b).sum())
                .collect();
            if coeffs.iter().all(|x| !x.is_negative()) {
                let (rays, coeffs): (Vec<usize>, Vec<BigRational>) = c
                    .0
                    .iter()
                    .zip(coeffs)
                    .filter(|(_, x)| x.is_positive())
                    .map(|(&i, x)| (i, x))
                    .unzip();
                return Some((Cone(rays), coeffs));
            }
        }
        None
    }

    /// The minimal cone containing `v` and the positive integral
    /// coefficients expressing `v` in its rays.
    pub fn minimal_cone_containing(&self, v: &LatticeVector) -> Result<(Cone, Vec<BigInt>), FanError> {
        let (cone, coeffs) = self.locate(v).ok_or_else(|| FanError::NotInSupport(v.clone()))?;
        if coeffs.iter().any(|x| !x.is_integer()) {
            return Err(FanError::NotSmooth(cone.0));
        }
        Ok((cone, coeffs.into_iter().map(|x| x.to_integer()).collect()))
    }

    /// Ray sets that span no cone while each proper subset does, ordered by
    /// size and then lexicographically.
    pub fn primitive_collections(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let r = self.rays.len();
        for size in 2..=self.dim + 1 {
            for base in self.cones(size - 1) {
                let start = base.0.last().map_or(0, |&m| m + 1);
                for extra in start..r {
                    let mut cand = base.0.clone();
                    cand.push(extra);
                    if self.contains_cone(&cand) {
                        continue;
                    }
                    let all_faces = (0..size).all(|skip| {
                        let sub: Vec<usize> = cand.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &x)| x).collect();
                        self.contains_cone(&sub)
                    });
                    if all_faces {
                        out.push(cand);
                    }
                }
            }
        }
        out
    }

    /// Product fan in the direct-sum lattice.
    pub fn product(&self, other: &Fan) -> Fan {
        let (d1, d2) = (self.dim, other.dim);
        let r1 = self.rays.len();
        let rays = self
            .rays
            .iter()
            .map(|r| r.embed(0, d2))
            .chain(other.rays.iter().map(|r| r.embed(d1, 0)))
            .collect();
        let mut maximal = Vec::new();
        for a in &self.maximal {
            for b in &other.maximal {
                let mut c = a.0.clone();
                c.extend(b.0.iter().map(|i| i + r1));
                maximal.push(c);
            }
        }
        Fan::from_maximal_cones(d1 + d2, rays, maximal).expect("product of fans is a fan")
    }

    /// Exhaustive fan-axiom check. Face closure is checked for every cone.
    /// For complete fans the cones are additionally shown to meet only along
    /// common faces: adjacent maximal cones lie on opposite sides of their
    /// shared wall, and a generic vector lies in exactly one maximal cone,
    /// which together force the covering to have degree one.
    pub fn check_axioms(&self) -> Result<(), FanError> {
        for k in 1..=self.dim {
            for c in self.cones(k) {
                for skip in 0..k {
                    let sub: Vec<usize> = c.0.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &x)| x).collect();
                    if !self.contains_cone(&sub) {
                        return Err(FanError::Axiom(format!("face {sub:?} of {:?} missing", c.0)));
                    }
                }
            }
        }
        let mut bound = BigInt::zero();
        for (ridge, owners) in self.ridge_counts() {
            if ridge.len() + 1 != self.dim {
                continue;
            }
            let rows: Vec<Vec<BigInt>> = ridge.iter().map(|&i| self.rays[i].0.clone()).collect();
            let h = linalg::kernel_vector(&rows, self.dim).expect("ridge spans a hyperplane");
            for x in &h {
                if x.abs() > bound {
                    bound = x.abs();
                }
            }
            if owners.len() > 2 {
                return Err(FanError::Axiom(format!("wall {ridge:?} lies in {} maximal cones", owners.len())));
            }
            if owners.len() == 2 {
                let side = |k: usize| -> BigInt {
                    let c = &self.maximal[k];
                    let apex = c.0.iter().find(|i| !ridge.contains(i)).unwrap();
                    linalg::dot_int(&h, &self.rays[*apex].0)
                };
                let (a, b) = (side(owners[0]), side(owners[1]));
                if a.signum() * b.signum() != BigInt::from(-1) {
                    return Err(FanError::Axiom(format!(
                        "maximal cones {:?} and {:?} overlap across wall {ridge:?}",
                        self.maximal[owners[0]].0, self.maximal[owners[1]].0
                    )));
                }
            }
        }
        if self.complete {
            // v = (1, t, t^2, ...) with t beyond the root bound of every wall
            // normal, so v lies on no wall.
            let t = bound + BigInt::from(2);
            let mut coords = Vec::with_capacity(self.dim);
            let mut p = BigInt::one();
            for _ in 0..self.dim {
                coords.push(p.clone());
                p *= &t;
            }
            let v: Vec<BigRational> = coords.into_iter().map(BigRational::from_integer).collect();
            let hits = self
                .inverses
                .iter()
                .flatten()
                .filter(|inv| {
                    inv.iter()
                        .all(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum::<BigRational>().is_positive())
                })
                .count();
            if hits != 1 {
                return Err(FanError::Axiom(format!("generic vector covered {hits} times")));
            }
        }
        Ok(())
    }
}
