//! Worked examples: projective spaces, the toric del Pezzo surfaces, the
//! blow-ups `Bl_{d+1} CP^d` and the 4-fold `U_8`.

use crate::fan::{Fan, FanError};
use crate::lattice_geometry::{LatticeSide, LatticeVector, Polytope};
use crate::support_function::SupportFunction;

pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    /// Rays in the catalog's fixed order.
    pub rays: Vec<Vec<i64>>,
    /// Maximal cones, when the fan is not the face fan of `conv(rays)`.
    pub cones: Option<Vec<Vec<usize>>>,
    /// Support values, when the monotone class is not a symplectic form.
    pub support: Option<Vec<i64>>,
}

impl CatalogEntry {
    fn new(name: impl Into<String>, description: impl Into<String>, rays: Vec<Vec<i64>>) -> Self {
        CatalogEntry {
            name: name.into(),
            description: description.into(),
            rays,
            cones: None,
            support: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.rays[0].len()
    }

    /// `Delta*`, the convex hull of the rays.
    pub fn dual_polytope(&self) -> Polytope {
        let pts: Vec<LatticeVector> = self.rays.iter().map(|r| LatticeVector::from_i64(r)).collect();
        Polytope::from_lattice_points(&pts, LatticeSide::N).expect("catalog rays span")
    }

    /// The fan with rays in catalog order; by default the face fan of `Delta*`.
    pub fn fan(&self) -> Result<Fan, FanError> {
        let order: Vec<LatticeVector> = self.rays.iter().map(|r| LatticeVector::from_i64(r)).collect();
        match &self.cones {
            Some(cones) => Fan::from_maximal_cones(self.dim(), order, cones.clone()),
            None => Fan::from_reflexive(&self.dual_polytope())?.reorder_rays(&order),
        }
    }

    /// The fan with its support function, `F = -1` unless overridden.
    pub fn build(&self) -> Result<(Fan, SupportFunction), FanError> {
        let fan = self.fan()?;
        let f = match &self.support {
            Some(v) => SupportFunction::from_i64(fan.clone(), v),
            None => SupportFunction::monotone(&fan),
        }
        .map_err(|e| FanError::Axiom(e.to_string()))?;
        Ok((fan, f))
    }
}

fn unit(d: usize, i: usize, sign: i64) -> Vec<i64> {
    let mut v = vec![0; d];
    v[i] = sign;
    v
}

pub fn cp(d: usize) -> CatalogEntry {
    let mut rays: Vec<Vec<i64>> = (0..d).map(|i| unit(d, i, 1)).collect();
    rays.push(vec![-1; d]);
    CatalogEntry::new(format!("cp{d}"), format!("projective space CP^{d}"), rays)
}

pub fn cp1xcp1() -> CatalogEntry {
    CatalogEntry::new(
        "cp1xcp1",
        "product CP^1 x CP^1",
        vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]],
    )
}

/// `CP^2` blown up at `k` torus-fixed points, `1 <= k <= 3`.
pub fn bl_cp2(k: usize) -> Option<CatalogEntry> {
    let rays: Vec<Vec<i64>> = match k {
        1 => vec![vec![1, 0], vec![0, 1], vec![0, -1], vec![-1, -1]],
        2 => vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1], vec![-1, -1]],
        3 => vec![vec![1, 0], vec![1, 1], vec![0, 1], vec![-1, 0], vec![-1, -1], vec![0, -1]],
        _ => return None,
    };
    Some(CatalogEntry::new(
        format!("bl{k}_cp2"),
        format!("CP^2 blown up at {k} point{}", if k == 1 { "" } else { "s" }),
        rays,
    ))
}

/// `Bl_{d+1} CP^d`, rays `+-e_j` and `+-(1, ..., 1)`.
///
/// The fan is the star subdivision of every maximal cone of `CP^d`. For
/// `d >= 3` the anticanonical class is only nef, so the support function
/// cuts each corner of the simplex at lattice distance 1 instead.
pub fn bl_points(d: usize) -> CatalogEntry {
    let mut rays: Vec<Vec<i64>> = (0..d).map(|i| unit(d, i, 1)).collect();
    rays.extend((0..d).map(|i| unit(d, i, -1)));
    rays.push(vec![1; d]);
    rays.push(vec![-1; d]);
    // Rays of CP^d: v_0 = -(1, ..., 1), v_i = e_i. The exceptional ray over
    // the cone missing v_k is w_0 = (1, ..., 1) or w_k = -e_k.
    let v = |i: usize| if i == 0 { 2 * d + 1 } else { i - 1 };
    let w = |k: usize| if k == 0 { 2 * d } else { d + k - 1 };
    let mut cones = Vec::new();
    for k in 0..=d {
        for j in (0..=d).filter(|&j| j != k) {
            let mut c: Vec<usize> = (0..=d).filter(|&i| i != k && i != j).map(v).collect();
            c.push(w(k));
            c.sort_unstable();
            cones.push(c);
        }
    }
    let corner = -(d as i64 - 1).max(1);
    let mut support = vec![-1; 2 * d + 2];
    for k in 0..=d {
        support[w(k)] = corner;
    }
    let mut e = CatalogEntry::new(
        format!("bl_points{d}"),
        format!("CP^{d} blown up at {} points", d + 1),
        rays,
    );
    e.cones = Some(cones);
    e.support = Some(support);
    e
}

/// The toric Fano 4-fold with a degenerate critical point at `(-1, -1, -1, 1)`.
pub fn u8() -> CatalogEntry {
    let rays = [
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [-1, 0, 0, 1],
        [0, -1, 0, 1],
        [0, 1, 0, -1],
        [0, -1, 0, 0],
        [0, 0, 0, -1],
        [0, 0, -1, -1],
    ];
    CatalogEntry::new(
        "u8",
        "toric Fano 4-fold U_8 with non-semisimple quantum homology",
        rays.iter().map(|r| r.to_vec()).collect(),
    )
}

pub fn catalog() -> Vec<CatalogEntry> {
    let mut out: Vec<CatalogEntry> = (1..=6).map(cp).collect();
    out.push(cp1xcp1());
    out.extend((1..=3).filter_map(bl_cp2));
    out.extend((3..=5).map(bl_points));
    out.push(u8());
    out
}

/// Catalog names, plus `cpN` and `bl_pointsN` for any admissible `N`.
pub fn lookup(name: &str) -> Option<CatalogEntry> {
    if let Some(e) = catalog().into_iter().find(|e| e.name == name) {
        return Some(e);
    }
    if let Some(d) = name.strip_prefix("bl_points").and_then(|n| n.parse::<usize>().ok()) {
        return (d >= 2).then(|| bl_points(d));
    }
    if let Some(d) = name.strip_prefix("cp").and_then(|n| n.parse::<usize>().ok()) {
        return (d >= 1).then(|| cp(d));
    }
    None
}
