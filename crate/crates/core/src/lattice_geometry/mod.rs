//! Exact lattice-polytope geometry.
//!
//! Polytopes are stored in both representations at once: the (irredundant)
//! vertex list and the facet inequalities `<m, normal> >= offset` with
//! primitive integral inner normals. Vertices, facets and lattice points are
//! kept in lexicographic order so every derived output is deterministic.

pub mod hull;
pub mod linalg;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use hull::convex_hull_facets;
use linalg::{dot_rat_int, rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("empty point set")]
    Empty,
    #[error("point of dimension {found} in a {expected}-dimensional set")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("points span an affine subspace of dimension {affine_dim} < {dim}")]
    NotFullDimensional { dim: usize, affine_dim: usize },
    #[error("the origin is not in the interior of the polytope")]
    OriginNotInterior,
    #[error("apex lies outside the polytope")]
    ApexOutside,
}

/// Which of the two dual lattices a polytope lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LatticeSide {
    /// `M_R`, home of moment polytopes.
    M,
    /// `N_R`, home of fans and dual polytopes.
    N,
}

impl LatticeSide {
    pub fn flipped(self) -> Self {
        match self {
            LatticeSide::M => LatticeSide::N,
            LatticeSide::N => LatticeSide::M,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(pub Vec<BigInt>);

impl LatticeVector {
    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeVector(coords.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        LatticeVector(vec![BigInt::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = BigInt::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_primitive(&self) -> bool {
        linalg::gcd_all(&self.0).is_one()
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }

    pub fn to_rational(&self) -> RationalVector {
        RationalVector(self.0.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn add(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scaled(&self, k: &BigInt) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn dot(&self, other: &LatticeVector) -> BigInt {
        linalg::dot_int(&self.0, &other.0)
    }

    /// Direct sum embedding `(self, 0)` or `(0, self)`.
    pub fn embed(&self, before: usize, after: usize) -> LatticeVector {
        let mut v = vec![BigInt::zero(); before];
        v.extend(self.0.iter().cloned());
        v.extend(std::iter::repeat_n(BigInt::zero(), after));
        LatticeVector(v)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector(pub Vec<BigRational>);

impl RationalVector {
    pub fn from_i64(coords: &[i64]) -> Self {
        RationalVector(coords.iter().map(|&x| rat(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    pub fn to_lattice(&self) -> Option<LatticeVector> {
        self.is_integral()
            .then(|| LatticeVector(self.0.iter().map(|x| x.to_integer()).collect()))
    }

    pub fn pair(&self, n: &LatticeVector) -> BigRational {
        dot_rat_int(&self.0, &n.0)
    }

    pub fn sub(&self, other: &RationalVector) -> RationalVector {
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// The half-space `<m, normal> >= offset`; `normal` is primitive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Facet {
    pub normal: LatticeVector,
    pub offset: BigRational,
}

impl Facet {
    pub fn slack(&self, m: &RationalVector) -> BigRational {
        m.pair(&self.normal) - &self.offset
    }
}

/// Result of a yes/no geometric predicate with a reason when it fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub holds: bool,
    pub detail: String,
}

impl Check {
    fn pass(detail: impl Into<String>) -> Self {
        Check {
            holds: true,
            detail: detail.into(),
        }
    }

    fn fail(detail: impl Into<String>) -> Self {
        Check {
            holds: false,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<RationalVector>,
    facets: Vec<Facet>,
    side: LatticeSide,
    /// For each facet, the indices of the vertices lying on it.
    incidence: Vec<Vec<usize>>,
    dropped: usize,
}

impl Polytope {
    /// Convex hull of `points`. Duplicates and non-extreme points are dropped;
    /// the count is available through [`Polytope::dropped_points`].
    pub fn from_points(points: &[RationalVector], side: LatticeSide) -> Result<Self, GeometryError> {
        let facets = convex_hull_facets(points)?;
        let d = points[0].dim();
        let mut distinct = points.to_vec();
        distinct.sort();
        distinct.dedup();
        let vertices: Vec<RationalVector> = distinct
            .into_iter()
            .filter(|p| {
                let tight: Vec<Vec<BigRational>> = facets
                    .iter()
                    .filter(|f| f.slack(p).is_zero())
                    .map(|f| f.normal.to_rational().0)
                    .collect();
                linalg::rank(&tight) == d
            })
            .collect();
        let dropped = points.len() - vertices.len();
        let mut poly = Self::from_parts(d, vertices, facets, side);
        poly.dropped = dropped;
        Ok(poly)
    }

    pub fn from_lattice_points(points: &[LatticeVector], side: LatticeSide) -> Result<Self, GeometryError> {
        let pts: Vec<RationalVector> = points.iter().map(LatticeVector::to_rational).collect();
        Self::from_points(&pts, side)
    }

    /// Builds a polytope whose vertex and facet lists are already known to be
    /// irredundant and mutually consistent.
    pub(crate) fn from_parts(
        dim: usize,
        mut vertices: Vec<RationalVector>,
        mut facets: Vec<Facet>,
        side: LatticeSide,
    ) -> Self {
        vertices.sort();
        vertices.dedup();
        facets.sort();
        facets.dedup();
        let incidence = facets
            .iter()
            .map(|f| {
                vertices
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| f.slack(v).is_zero())
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        Polytope {
            dim,
            vertices,
            facets,
            side,
            incidence,
            dropped: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[RationalVector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn side(&self) -> LatticeSide {
        self.side
    }

    pub fn dropped_points(&self) -> usize {
        self.dropped
    }

    /// Vertex indices lying on facet `k`.
    pub fn facet_vertices(&self, k: usize) -> &[usize] {
        &self.incidence[k]
    }

    pub fn contains(&self, m: &RationalVector) -> bool {
        self.facets.iter().all(|f| !f.slack(m).is_negative())
    }

    pub fn contains_strictly(&self, m: &RationalVector) -> bool {
        self.facets.iter().all(|f| f.slack(m).is_positive())
    }

    pub fn origin_is_interior(&self) -> bool {
        self.facets.iter().all(|f| f.offset.is_negative())
    }

    pub fn is_integral(&self) -> bool {
        self.vertices.iter().all(RationalVector::is_integral)
    }

    /// The polar dual `{ n : <m, n> >= -1 for all m in P }`.
    pub fn dual(&self) -> Result<Polytope, GeometryError> {
        if !self.origin_is_interior() {
            return Err(GeometryError::OriginNotInterior);
        }
        let vertices = self
            .facets
            .iter()
            .map(|f| {
                let scale = -f.offset.recip();
                RationalVector(f.normal.0.iter().map(|x| &scale * x).collect())
            })
            .collect();
        let facets = self
            .vertices
            .iter()
            .map(|v| {
                // v = (g / l) * w with w primitive, so <v, n> >= -1 iff <w, n> >= -l / g.
                let l = linalg::denominators_lcm(&v.0);
                let ints: Vec<BigInt> = v.0.iter().map(|x| (x * &l).to_integer()).collect();
                let g = linalg::gcd_all(&ints);
                Facet {
                    normal: LatticeVector(ints.iter().map(|x| x / &g).collect()),
                    offset: -BigRational::new(l, g),
                }
            })
            .collect();
        Ok(Polytope::from_parts(self.dim, vertices, facets, self.side.flipped()))
    }

    pub fn is_reflexive(&self) -> Check {
        if !self.origin_is_interior() {
            return Check::fail("origin is not an interior point");
        }
        if let Some(v) = self.vertices.iter().find(|v| !v.is_integral()) {
            return Check::fail(format!("vertex {v} is not integral"));
        }
        // Facet offsets of P are -1 exactly when the dual vertices are integral.
        if let Some(f) = self.facets.iter().find(|f| f.offset != rat(-1)) {
            let dual_vertex: Vec<BigRational> = f
                .normal
                .0
                .iter()
                .map(|x| -BigRational::from_integer(x.clone()) / &f.offset)
                .collect();
            return Check::fail(format!(
                "dual has non-integral vertex {}",
                RationalVector(dual_vertex)
            ));
        }
        Check::pass("origin interior; polytope and dual are integral")
    }

    /// All integral points, lexicographically sorted.
    pub fn lattice_points(&self) -> Vec<LatticeVector> {
        let d = self.dim;
        let lo: Vec<BigInt> = (0..d)
            .map(|i| self.vertices.iter().map(|v| v.0[i].floor().to_integer()).min().unwrap())
            .collect();
        let hi: Vec<BigInt> = (0..d)
            .map(|i| self.vertices.iter().map(|v| v.0[i].ceil().to_integer()).max().unwrap())
            .collect();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            let p = LatticeVector(cur.clone());
            if self.contains(&p.to_rational()) {
                out.push(p);
            }
            // odometer, last coordinate fastest so output is already sorted
            let mut i = d;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    for j in i + 1..d {
                        cur[j] = lo[j].clone();
                    }
                    break;
                }
            }
        }
    }

    pub fn interior_lattice_points(&self) -> Vec<LatticeVector> {
        self.lattice_points()
            .into_iter()
            .filter(|p| self.contains_strictly(&p.to_rational()))
            .collect()
    }

    fn tight_facets(&self, v: usize) -> Vec<usize> {
        (0..self.facets.len())
            .filter(|&k| self.incidence[k].contains(&v))
            .collect()
    }

    /// Pairs of vertex indices `(i, j)`, `i < j`, spanning an edge.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let tight: Vec<Vec<usize>> = (0..self.vertices.len()).map(|v| self.tight_facets(v)).collect();
        let mut out = Vec::new();
        for i in 0..self.vertices.len() {
            for j in i + 1..self.vertices.len() {
                let common: Vec<Vec<BigRational>> = tight[i]
                    .iter()
                    .filter(|k| tight[j].contains(k))
                    .map(|&k| self.facets[k].normal.to_rational().0)
                    .collect();
                if linalg::rank(&common) + 1 == self.dim {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Simple, rational, and smooth at every vertex.
    pub fn is_delzant(&self) -> Check {
        let edges = self.edges();
        for (v, vertex) in self.vertices.iter().enumerate() {
            let dirs: Vec<Vec<BigInt>> = edges
                .iter()
                .filter_map(|&(i, j)| match (i == v, j == v) {
                    (true, _) => Some(j),
                    (_, true) => Some(i),
                    _ => None,
                })
                .map(|w| linalg::primitive_from_rational(&self.vertices[w].sub(vertex).0))
                .collect();
            if dirs.len() != self.dim {
                return Check::fail(format!(
                    "{} edges meet at vertex {vertex} (not simple)",
                    dirs.len()
                ));
            }
            let det = linalg::det_int(&dirs);
            if !det.abs().is_one() {
                return Check::fail(format!(
                    "primitive edge vectors at vertex {vertex} have determinant {det}"
                ));
            }
        }
        Check::pass("simple and smooth at every vertex")
    }

    /// `d!` times the Euclidean volume, fanned from the vertex barycenter.
    pub fn normalized_volume(&self) -> BigRational {
        let n = BigRational::from_integer(BigInt::from(self.vertices.len()));
        let mut c = vec![rat(0); self.dim];
        for v in &self.vertices {
            for (ci, x) in c.iter_mut().zip(&v.0) {
                *ci += x;
            }
        }
        let apex = RationalVector(c.into_iter().map(|x| x / &n).collect());
        self.normalized_volume_from(&apex).expect("barycenter lies in the polytope")
    }

    /// Normalized volume computed from the cone decomposition over the facets
    /// with apex `apex`, which must lie in the polytope.
    pub fn normalized_volume_from(&self, apex: &RationalVector) -> Result<BigRational, GeometryError> {
        if !self.contains(apex) {
            return Err(GeometryError::ApexOutside);
        }
        Ok(self
            .simplices_from(apex)
            .iter()
            .map(|s| simplex_volume(apex, s.iter().map(|&i| &self.vertices[i])))
            .fold(rat(0), |a, b| a + b))
    }

    /// Triangulation of the boundary (pulling each face from its smallest
    /// vertex); coning these `(d-1)`-simplices from an interior point
    /// decomposes the polytope.
    pub fn boundary_simplices(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for k in 0..self.facets.len() {
            out.extend(self.triangulate_face(self.incidence[k].clone(), self.dim - 1));
        }
        out
    }

    fn simplices_from(&self, apex: &RationalVector) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for (k, f) in self.facets.iter().enumerate() {
            if f.slack(apex).is_zero() {
                continue;
            }
            out.extend(self.triangulate_face(self.incidence[k].clone(), self.dim - 1));
        }
        out
    }

    fn triangulate_face(&self, face: Vec<usize>, face_dim: usize) -> Vec<Vec<usize>> {
        if face_dim == 0 {
            return vec![face];
        }
        let apex = face[0];
        let mut subs: Vec<Vec<usize>> = Vec::new();
        for inc in &self.incidence {
            let s: Vec<usize> = face.iter().copied().filter(|v| inc.contains(v)).collect();
            if s.len() < face.len() && !s.is_empty() {
                subs.push(s);
            }
        }
        subs.sort();
        subs.dedup();
        let maximal: Vec<Vec<usize>> = subs
            .iter()
            .filter(|s| {
                !subs
                    .iter()
                    .any(|t| t.len() > s.len() && s.iter().all(|v| t.contains(v)))
            })
            .cloned()
            .collect();
        let mut out = Vec::new();
        for s in maximal {
            if s.contains(&apex) {
                continue;
            }
            for mut simplex in self.triangulate_face(s, face_dim - 1) {
                simplex.insert(0, apex);
                out.push(simplex);
            }
        }
        out
    }

    /// Cartesian product in the direct-sum lattice.
    pub fn product(&self, other: &Polytope) -> Polytope {
        let (d1, d2) = (self.dim, other.dim);
        let mut vertices = Vec::new();
        for a in &self.vertices {
            for b in &other.vertices {
                let mut v = a.0.clone();
                v.extend(b.0.iter().cloned());
                vertices.push(RationalVector(v));
            }
        }
        let facets = self
            .facets
            .iter()
            .map(|f| Facet {
                normal: f.normal.embed(0, d2),
                offset: f.offset.clone(),
            })
            .chain(other.facets.iter().map(|f| Facet {
                normal: f.normal.embed(d1, 0),
                offset: f.offset.clone(),
            }))
            .collect();
        Polytope::from_parts(d1 + d2, vertices, facets, self.side)
    }
}

/// `|det(v_i - apex)|` for a simplex given by `d` vertices plus the apex.
pub fn simplex_volume<'a>(apex: &RationalVector, verts: impl Iterator<Item = &'a RationalVector>) -> BigRational {
    let rows: Vec<Vec<BigRational>> = verts.map(|v| v.sub(apex).0).collect();
    linalg::det(&rows).abs()
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}
