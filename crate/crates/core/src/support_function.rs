//! Piecewise linear support functions on a fan, i.e. toric symplectic classes.
//!
//! A `SupportFunction` stores one rational value `F(n_rho)` per ray. On each
//! maximal cone it agrees with a linear form `m_sigma`; the moment polytope is
//! `{ m : <m, n_rho> >= F(n_rho) for every ray }` and its vertices are the
//! `m_sigma`. The monotone class is `F = -1` on every ray, whose moment
//! polytope is the primal reflexive polytope. (The canonical-divisor
//! convention `F = +1` is the negative of this one and is not used here.)

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::fan::{Cone, Fan, FanError};
use crate::lattice_geometry::linalg::rat;
use crate::lattice_geometry::{Facet, LatticeSide, Polytope, RationalVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SupportError {
    #[error("expected {expected} support values, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("fan is not complete")]
    NotComplete,
    #[error("support function is not strictly convex: {0}")]
    NotStrictlyConvex(String),
    #[error("polytope is not Delzant: {0}")]
    NotDelzant(String),
    #[error(transparent)]
    Fan(#[from] FanError),
}

/// Outcome of the strict convexity test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convexity {
    pub strictly_convex: bool,
    /// First `(maximal cone, ray)` pair with `<m_sigma, n_rho> <= F(n_rho)`.
    pub violation: Option<(Cone, usize)>,
    /// Minimum slack `<m_sigma, n_rho> - F(n_rho)` over rays outside sigma.
    pub min_slack: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportFunction {
    fan: Fan,
    values: Vec<BigRational>,
    /// `m_sigma` for each maximal cone, in the fan's order.
    forms: Vec<RationalVector>,
}

impl SupportFunction {
    pub fn new(fan: Fan, values: Vec<BigRational>) -> Result<Self, SupportError> {
        if values.len() != fan.rays().len() {
            return Err(SupportError::LengthMismatch {
                expected: fan.rays().len(),
                found: values.len(),
            });
        }
        if !fan.is_complete() {
            return Err(SupportError::NotComplete);
        }
        let forms = (0..fan.maximal_cones().len())
            .map(|k| {
                let cone = &fan.maximal_cones()[k];
                let inv = fan.cone_inverse(k).expect("complete fans have full maximal cones");
                // rows of the ray matrix are the rays, so m = (B^{-1})^T F
                let d = fan.dim();
                RationalVector(
                    (0..d)
                        .map(|j| {
                            cone.rays()
                                .iter()
                                .enumerate()
                                .map(|(i, &r)| &inv[i][j] * &values[r])
                                .fold(rat(0), |a, b| a + b)
                        })
                        .collect(),
                )
            })
            .collect();
        Ok(SupportFunction { fan, values, forms })
    }

    pub fn from_i64(fan: Fan, values: &[i64]) -> Result<Self, SupportError> {
        Self::new(fan, values.iter().map(|&v| rat(v)).collect())
    }

    /// `F(n_rho) = -1` on every ray.
    pub fn monotone(fan: &Fan) -> Result<Self, SupportError> {
        let n = fan.rays().len();
        Self::new(fan.clone(), vec![rat(-1); n])
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    /// Linear form on maximal cone `k`.
    pub fn cone_form(&self, k: usize) -> &RationalVector {
        &self.forms[k]
    }

    pub fn convexity(&self) -> Convexity {
        let mut min_slack: Option<BigRational> = None;
        let mut violation = None;
        for (k, cone) in self.fan.maximal_cones().iter().enumerate() {
            for (r, ray) in self.fan.rays().iter().enumerate() {
                if cone.contains_ray(r) {
                    continue;
                }
                let slack = self.forms[k].pair(ray) - &self.values[r];
                if violation.is_none() && !slack.is_positive() {
                    violation = Some((cone.clone(), r));
                }
                if min_slack.as_ref().is_none_or(|m| slack < *m) {
                    min_slack = Some(slack);
                }
            }
        }
        Convexity {
            strictly_convex: violation.is_none(),
            violation,
            min_slack: min_slack.unwrap_or_else(|| rat(0)),
        }
    }

    pub fn is_strictly_convex(&self) -> bool {
        self.convexity().strictly_convex
    }

    /// A sup-norm radius within which any perturbation of the values keeps
    /// strict convexity: the minimum over (sigma, rho) of
    /// `slack / (1 + sum |c_i|)`, where `n_rho = sum c_i n_i` over the rays of
    /// sigma. Zero when `F` is not strictly convex.
    pub fn perturbation_margin(&self) -> BigRational {
        let mut margin: Option<BigRational> = None;
        for (k, cone) in self.fan.maximal_cones().iter().enumerate() {
            let inv = self.fan.cone_inverse(k).expect("complete fan");
            for (r, ray) in self.fan.rays().iter().enumerate() {
                if cone.contains_ray(r) {
                    continue;
                }
                let slack = self.forms[k].pair(ray) - &self.values[r];
                if !slack.is_positive() {
                    return rat(0);
                }
                let weight = inv.iter().fold(rat(1), |acc, row| {
                    let c: BigRational = row
                        .iter()
                        .zip(&ray.0)
                        .map(|(a, b)| a * BigRational::from_integer(b.clone()))
                        .fold(rat(0), |x, y| x + y);
                    acc + c.abs()
                });
                let m = slack / weight;
                if margin.as_ref().is_none_or(|x| m < *x) {
                    margin = Some(m);
                }
            }
        }
        margin.unwrap_or_else(|| rat(0))
    }

    /// The polytope `{ m : <m, n_rho> >= F(n_rho) }`; its vertices are the
    /// cone forms.
    pub fn moment_polytope(&self) -> Result<Polytope, SupportError> {
        let c = self.convexity();
        if let Some((cone, r)) = c.violation {
            return Err(SupportError::NotStrictlyConvex(format!(
                "ray {} against cone {:?}",
                self.fan.ray(r),
                cone.0
            )));
        }
        let facets = self
            .fan
            .rays()
            .iter()
            .zip(&self.values)
            .map(|(n, v)| Facet {
                normal: n.clone(),
                offset: v.clone(),
            })
            .collect();
        Ok(Polytope::from_parts(
            self.fan.dim(),
            self.forms.clone(),
            facets,
            LatticeSide::M,
        ))
    }

    /// Normal fan of a Delzant polytope with `F(n_k) = lambda_k`, the raw
    /// facet offsets. Rays follow the polytope's facet order.
    pub fn from_polytope(p: &Polytope) -> Result<(Fan, SupportFunction), SupportError> {
        let check = p.is_delzant();
        if !check.holds {
            return Err(SupportError::NotDelzant(check.detail));
        }
        let rays = p.facets().iter().map(|f| f.normal.clone()).collect();
        let maximal = (0..p.vertices().len())
            .map(|v| {
                (0..p.facets().len())
                    .filter(|&k| p.facet_vertices(k).contains(&v))
                    .collect()
            })
            .collect();
        let fan = Fan::from_maximal_cones(p.dim(), rays, maximal)?;
        let values = p.facets().iter().map(|f| f.offset.clone()).collect();
        let f = SupportFunction::new(fan.clone(), values)?;
        Ok((fan, f))
    }

    /// The same class on the same fan with rays listed in the order of
    /// `reordered`.
    pub fn reorder(&self, reordered: &Fan) -> Result<SupportFunction, SupportError> {
        let values = reordered
            .rays()
            .iter()
            .map(|r| {
                self.fan
                    .rays()
                    .iter()
                    .position(|x| x == r)
                    .map(|i| self.values[i].clone())
                    .ok_or(FanError::RayOrderMismatch)
            })
            .collect::<Result<Vec<_>, _>>()?;
        SupportFunction::new(reordered.clone(), values)
    }

    /// `F + m`, i.e. the same symplectic class with a translated moment map.
    pub fn shifted(&self, m: &RationalVector) -> SupportFunction {
        let values = self
            .fan
            .rays()
            .iter()
            .zip(&self.values)
            .map(|(n, v)| v + m.pair(n))
            .collect();
        SupportFunction::new(self.fan.clone(), values).expect("same fan")
    }

    /// If `other - self` is a global linear function on a common fan,
    /// returns it.
    pub fn linear_difference(&self, other: &SupportFunction) -> Option<RationalVector> {
        if self.fan.rays() != other.fan.rays() {
            return None;
        }
        let diff: Vec<BigRational> = self.values.iter().zip(&other.values).map(|(a, b)| b - a).collect();
        let probe = SupportFunction::new(self.fan.clone(), diff.clone()).ok()?;
        let m = probe.forms.first()?.clone();
        self.fan
            .rays()
            .iter()
            .zip(&diff)
            .all(|(n, v)| m.pair(n) == *v)
            .then_some(m)
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(|v| v.is_integer())
    }

    pub fn value_ints(&self) -> Option<Vec<BigInt>> {
        self.is_integral()
            .then(|| self.values.iter().map(|v| v.to_integer()).collect())
    }

    pub fn has_zero_value(&self) -> bool {
        self.values.iter().any(Zero::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_geometry::LatticeVector;

    fn fan_of(points: &[&[i64]]) -> Fan {
        let pts: Vec<LatticeVector> = points.iter().map(|p| LatticeVector::from_i64(p)).collect();
        let p = Polytope::from_lattice_points(&pts, LatticeSide::N).unwrap();
        Fan::from_reflexive(&p).unwrap().reorder_rays(&pts).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn bl1_support(alpha: BigRational, beta: BigRational) -> SupportFunction {
        let fan = fan_of(&[&[1, 0], &[0, 1], &[0, -1], &[-1, -1]]);
        SupportFunction::new(fan, vec![rat(0), rat(0), &beta - &alpha, -alpha]).unwrap()
    }

    #[test]
    fn monotone_plane() {
        let f = SupportFunction::monotone(&fan_of(&[&[1, 0], &[0, 1], &[-1, -1]])).unwrap();
        assert_eq!(f.values(), &[rat(-1), rat(-1), rat(-1)]);
        assert!(f.is_strictly_convex());
        let zero = SupportFunction::from_i64(f.fan().clone(), &[0, 0, 0]).unwrap();
        let c = zero.convexity();
        assert!(!c.strictly_convex);
        assert!(c.violation.is_some());
        assert!(zero.moment_polytope().is_err());
    }

    #[test]
    fn blowup_convexity_region() {
        for (a, b, expect) in [
            (q(2, 1), q(1, 1), true),
            (q(5, 2), q(1, 1), true),
            (q(1, 1), q(1, 1), false),
            (q(1, 1), q(2, 1), false),
            (q(1, 1), q(0, 1), false),
            (q(1, 1), q(-1, 2), false),
        ] {
            assert_eq!(bl1_support(a.clone(), b.clone()).is_strictly_convex(), expect, "alpha={a} beta={b}");
        }
    }

    #[test]
    fn blowup_trapezoid() {
        let p = bl1_support(rat(2), rat(1)).moment_polytope().unwrap();
        let expected: Vec<RationalVector> =
            [[0, 0], [0, 1], [1, 1], [2, 0]].iter().map(|v| RationalVector::from_i64(v)).collect();
        assert_eq!(p.vertices(), expected.as_slice());
        // the hull of the vertices reproduces the same H-representation
        let hull = Polytope::from_points(p.vertices(), LatticeSide::M).unwrap();
        assert_eq!(hull.facets(), p.facets());
    }

    #[test]
    fn trapezoid_round_trip() {
        let pts: Vec<RationalVector> =
            [[0, 0], [2, 0], [0, 1], [1, 1]].iter().map(|v| RationalVector::from_i64(v)).collect();
        let p = Polytope::from_points(&pts, LatticeSide::M).unwrap();
        let (fan, f) = SupportFunction::from_polytope(&p).unwrap();
        let order: Vec<LatticeVector> =
            [[1, 0], [0, 1], [0, -1], [-1, -1]].iter().map(|v| LatticeVector::from_i64(v)).collect();
        let fan = fan.reorder_rays(&order).unwrap();
        let f = f.reorder(&fan).unwrap();
        assert_eq!(f.values(), &[rat(0), rat(0), rat(-1), rat(-2)]);
        assert_eq!(f.moment_polytope().unwrap().vertices(), p.vertices());
    }

    #[test]
    fn square_support() {
        let pts: Vec<RationalVector> =
            [[-1, -1], [-1, 1], [1, -1], [1, 1]].iter().map(|v| RationalVector::from_i64(v)).collect();
        let p = Polytope::from_points(&pts, LatticeSide::M).unwrap();
        let (fan, f) = SupportFunction::from_polytope(&p).unwrap();
        assert_eq!(fan.top_cone_count(), 4);
        assert!(f.values().iter().all(|v| *v == rat(-1)));
        let mono = SupportFunction::monotone(&fan).unwrap();
        assert_eq!(mono.moment_polytope().unwrap().vertices(), p.vertices());
    }

    #[test]
    fn non_delzant_rejected() {
        let pts: Vec<RationalVector> =
            [[0, 0], [2, 0], [0, 1]].iter().map(|v| RationalVector::from_i64(v)).collect();
        let p = Polytope::from_points(&pts, LatticeSide::M).unwrap();
        assert!(matches!(SupportFunction::from_polytope(&p), Err(SupportError::NotDelzant(_))));
    }

    #[test]
    fn shift_is_linear_difference() {
        let f = bl1_support(rat(2), rat(1));
        let m = RationalVector(vec![q(1, 3), rat(-2)]);
        let g = f.shifted(&m);
        assert_eq!(f.linear_difference(&g), Some(m));
        let h = bl1_support(rat(3), rat(1));
        assert_eq!(f.linear_difference(&h), None);
    }

    #[test]
    fn margin_is_positive_for_convex() {
        let f = bl1_support(rat(2), rat(1));
        assert!(f.perturbation_margin().is_positive());
        assert!(f.perturbation_margin() <= f.convexity().min_slack);
        let g = bl1_support(rat(1), rat(1));
        assert!(f.perturbation_margin() > rat(0));
        assert_eq!(g.perturbation_margin(), rat(0));
    }

    #[test]
    fn length_mismatch() {
        let fan = fan_of(&[&[1, 0], &[0, 1], &[-1, -1]]);
        assert_eq!(
            SupportFunction::from_i64(fan, &[1, 2]),
            Err(SupportError::LengthMismatch { expected: 3, found: 2 })
        );
    }
}
