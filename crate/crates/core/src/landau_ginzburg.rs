//! The Landau–Ginzburg superpotential `W = sum_rho b_rho x^{n_rho}` of a fan,
//! with its value, log-gradient and Hessians on the complex torus.
//!
//! `s` is always specialized: the numeric coefficient of the term of ray
//! `rho` is `b_rho` (1 for the monotone evaluation), while the exponent
//! `F(n_rho)` of `s` is kept for display and symbolic checks. Points with
//! rational coordinates can be evaluated exactly.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::fan::Fan;
use crate::lattice_geometry::linalg::rat;
use crate::support_function::SupportFunction;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PotentialError {
    #[error("coefficient {value} of term {index} is not positive")]
    NonpositiveCoefficient { index: usize, value: f64 },
    #[error("expected {expected} coefficients, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("exponent {0:?} appears twice")]
    DuplicateExponent(Vec<i64>),
    #[error("term of dimension {found} in a {expected}-dimensional potential")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("exponent does not fit in 64 bits")]
    ExponentOverflow,
    #[error("torus point has a zero coordinate")]
    ZeroCoordinate,
    #[error("fan is not complete")]
    NotComplete,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub exponent: Vec<i64>,
    pub coefficient: f64,
    pub s_exponent: BigRational,
}

/// A point of `(C^*)^d`, optionally with exact rational coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint {
    coords: Vec<Complex64>,
    exact: Option<Vec<BigRational>>,
}

impl TorusPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self, PotentialError> {
        if coords.iter().any(|z| z.norm() == 0.0) {
            return Err(PotentialError::ZeroCoordinate);
        }
        Ok(TorusPoint { coords, exact: None })
    }

    pub fn from_rationals(exact: Vec<BigRational>) -> Result<Self, PotentialError> {
        if exact.iter().any(Zero::is_zero) {
            return Err(PotentialError::ZeroCoordinate);
        }
        let coords = exact
            .iter()
            .map(|q| Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0))
            .collect();
        Ok(TorusPoint {
            coords,
            exact: Some(exact),
        })
    }

    pub fn from_integers(coords: &[i64]) -> Result<Self, PotentialError> {
        Self::from_rationals(coords.iter().map(|&c| rat(c)).collect())
    }

    /// `exp(u)` coordinatewise.
    pub fn from_log(u: &[Complex64]) -> Self {
        TorusPoint {
            coords: u.iter().map(|z| z.exp()).collect(),
            exact: None,
        }
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn exact(&self) -> Option<&[BigRational]> {
        self.exact.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Replaces each coordinate by a nearby rational `p/q` (`q <= max_den`)
    /// when every coordinate is within `tol` (relative) of one.
    pub fn snapped(&self, tol: f64, max_den: i64) -> Option<TorusPoint> {
        let mut exact = Vec::with_capacity(self.coords.len());
        for z in &self.coords {
            let scale = z.norm().max(1.0);
            if z.im.abs() > tol * scale {
                return None;
            }
            let q = (1..=max_den).find_map(|den| {
                let num = (z.re * den as f64).round();
                ((z.re - num / den as f64).abs() <= tol * scale && num != 0.0)
                    .then(|| BigRational::new(BigInt::from(num as i64), BigInt::from(den)))
            })?;
            exact.push(q);
        }
        TorusPoint::from_rationals(exact).ok()
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        match &self.exact {
            Some(q) => {
                for (i, x) in q.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
            }
            None => {
                for (i, z) in self.coords.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", format_complex(*z))?;
                }
            }
        }
        write!(f, ")")
    }
}

/// Fixed-precision rendering with negative zeros folded.
pub fn format_complex(z: Complex64) -> String {
    let clean = |x: f64| if x.abs() < 5e-9 { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    if im >= 0.0 {
        format!("{re:.8}+{im:.8}i")
    } else {
        format!("{re:.8}-{:.8}i", -im)
    }
}

/// `z^n` by repeated squaring; negative powers invert once.
pub fn int_pow(z: Complex64, n: i64) -> Complex64 {
    let mut base = if n < 0 { z.inv() } else { z };
    let mut e = n.unsigned_abs();
    let mut acc = Complex64::new(1.0, 0.0);
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

pub fn rat_pow(q: &BigRational, n: i64) -> BigRational {
    let mut base = if n < 0 { q.recip() } else { q.clone() };
    let mut e = n.unsigned_abs();
    let mut acc = BigRational::one();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

/// Coefficients drawn uniformly from `[lo, hi]`, reproducible from `seed`.
pub fn perturbed_coefficients(n: usize, seed: u64, lo: f64, hi: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(lo..=hi)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Superpotential {
    dim: usize,
    terms: Vec<Term>,
}

pub type ComplexMatrix = Vec<Vec<Complex64>>;
pub type RationalMatrix = Vec<Vec<BigRational>>;

impl Superpotential {
    pub fn new(dim: usize, terms: Vec<Term>) -> Result<Self, PotentialError> {
        for (i, t) in terms.iter().enumerate() {
            if t.exponent.len() != dim {
                return Err(PotentialError::DimensionMismatch {
                    expected: dim,
                    found: t.exponent.len(),
                });
            }
            if !(t.coefficient > 0.0) || !t.coefficient.is_finite() {
                return Err(PotentialError::NonpositiveCoefficient {
                    index: i,
                    value: t.coefficient,
                });
            }
            if terms[..i].iter().any(|o| o.exponent == t.exponent) {
                return Err(PotentialError::DuplicateExponent(t.exponent.clone()));
            }
        }
        Ok(Superpotential { dim, terms })
    }

    /// `W_{F, Sigma}` with numeric coefficients `coeffs` (all 1 by default).
    pub fn from_fan(fan: &Fan, support: &SupportFunction, coeffs: Option<&[f64]>) -> Result<Self, PotentialError> {
        if !fan.is_complete() {
            return Err(PotentialError::NotComplete);
        }
        let n = fan.rays().len();
        if let Some(c) = coeffs {
            if c.len() != n {
                return Err(PotentialError::LengthMismatch {
                    expected: n,
                    found: c.len(),
                });
            }
        }
        if support.values().len() != n {
            return Err(PotentialError::LengthMismatch {
                expected: n,
                found: support.values().len(),
            });
        }
        let terms = fan
            .rays()
            .iter()
            .enumerate()
            .map(|(i, ray)| {
                Ok(Term {
                    exponent: ray.to_i64().ok_or(PotentialError::ExponentOverflow)?,
                    coefficient: coeffs.map_or(1.0, |c| c[i]),
                    s_exponent: support.values()[i].clone(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Superpotential::new(fan.dim(), terms)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// `b_rho x^{n_rho}` for every term.
    fn term_values(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.terms
            .iter()
            .map(|t| {
                t.exponent
                    .iter()
                    .zip(x)
                    .fold(Complex64::new(t.coefficient, 0.0), |acc, (&e, &xi)| acc * int_pow(xi, e))
            })
            .collect()
    }

    /// Term values at `x = exp(u)`, computed as `b exp(<n, u>)`.
    fn term_values_log(&self, u: &[Complex64]) -> Vec<Complex64> {
        self.terms
            .iter()
            .map(|t| {
                let s: Complex64 = t.exponent.iter().zip(u).map(|(&e, &ui)| ui * e as f64).sum();
                s.exp() * t.coefficient
            })
            .collect()
    }

    pub fn eval(&self, p: &TorusPoint) -> Complex64 {
        self.term_values(&p.coords).into_iter().sum()
    }

    fn gradient_from(&self, vals: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|i| {
                self.terms
                    .iter()
                    .zip(vals)
                    .map(|(t, v)| v * t.exponent[i] as f64)
                    .sum()
            })
            .collect()
    }

    fn hessian_from(&self, vals: &[Complex64]) -> ComplexMatrix {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| {
                        self.terms
                            .iter()
                            .zip(vals)
                            .map(|(t, v)| v * (t.exponent[i] * t.exponent[j]) as f64)
                            .sum()
                    })
                    .collect()
            })
            .collect()
    }

    /// `(x_i d/dx_i) W`, the derivative along the `i`-th lattice direction.
    pub fn log_gradient(&self, p: &TorusPoint) -> Vec<Complex64> {
        self.gradient_from(&self.term_values(&p.coords))
    }

    /// Hessian of `W o exp`.
    pub fn log_hessian(&self, p: &TorusPoint) -> ComplexMatrix {
        self.hessian_from(&self.term_values(&p.coords))
    }

    /// Value, log-gradient and log-Hessian at `x = exp(u)`.
    pub fn log_derivatives(&self, u: &[Complex64]) -> (Complex64, Vec<Complex64>, ComplexMatrix) {
        let vals = self.term_values_log(u);
        (vals.iter().sum(), self.gradient_from(&vals), self.hessian_from(&vals))
    }

    /// Ordinary second partials `d^2 W / dx_i dx_j`.
    pub fn hessian_affine(&self, p: &TorusPoint) -> ComplexMatrix {
        let x = &p.coords;
        let vals = self.term_values(x);
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| {
                        let denom = x[i] * x[j];
                        self.terms
                            .iter()
                            .zip(&vals)
                            .map(|(t, v)| {
                                let ni = t.exponent[i];
                                let nj = t.exponent[j] - i64::from(i == j);
                                v * (ni * nj) as f64
                            })
                            .sum::<Complex64>()
                            / denom
                    })
                    .collect()
            })
            .collect()
    }

    fn exact_coefficient(t: &Term) -> BigRational {
        BigRational::from_float(t.coefficient).expect("finite coefficient")
    }

    fn term_values_exact(&self, x: &[BigRational]) -> Vec<BigRational> {
        self.terms
            .iter()
            .map(|t| {
                t.exponent
                    .iter()
                    .zip(x)
                    .fold(Self::exact_coefficient(t), |acc, (&e, xi)| acc * rat_pow(xi, e))
            })
            .collect()
    }

    pub fn eval_exact(&self, x: &[BigRational]) -> BigRational {
        self.term_values_exact(x).into_iter().fold(rat(0), |a, b| a + b)
    }

    pub fn log_gradient_exact(&self, x: &[BigRational]) -> Vec<BigRational> {
        let vals = self.term_values_exact(x);
        (0..self.dim)
            .map(|i| {
                self.terms
                    .iter()
                    .zip(&vals)
                    .fold(rat(0), |acc, (t, v)| acc + v * rat(t.exponent[i]))
            })
            .collect()
    }

    pub fn log_hessian_exact(&self, x: &[BigRational]) -> RationalMatrix {
        let vals = self.term_values_exact(x);
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| {
                        self.terms
                            .iter()
                            .zip(&vals)
                            .fold(rat(0), |acc, (t, v)| acc + v * rat(t.exponent[i] * t.exponent[j]))
                    })
                    .collect()
            })
            .collect()
    }

    pub fn hessian_affine_exact(&self, x: &[BigRational]) -> RationalMatrix {
        let vals = self.term_values_exact(x);
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| {
                        let sum = self.terms.iter().zip(&vals).fold(rat(0), |acc, (t, v)| {
                            let nj = t.exponent[j] - i64::from(i == j);
                            acc + v * rat(t.exponent[i] * nj)
                        });
                        sum / (&x[i] * &x[j])
                    })
                    .collect()
            })
            .collect()
    }

    /// Text form, e.g. `x1 + x2 + s^{-1} x2^{-1} + s^{-2} x1^{-1} x2^{-1}`.
    /// With `show_s` false the `s` factors are omitted.
    pub fn render(&self, show_s: bool) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let mut factors = Vec::new();
                if t.coefficient != 1.0 {
                    factors.push(format!("{}", t.coefficient));
                }
                if show_s && !t.s_exponent.is_zero() {
                    if t.s_exponent.is_one() {
                        factors.push("s".to_string());
                    } else {
                        factors.push(format!("s^{{{}}}", t.s_exponent));
                    }
                }
                for (i, &e) in t.exponent.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => factors.push(format!("x{}", i + 1)),
                        _ => factors.push(format!("x{}^{{{e}}}", i + 1)),
                    }
                }
                if factors.is_empty() {
                    "1".to_string()
                } else {
                    factors.join(" ")
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for Superpotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cp2() -> Superpotential {
        let terms = [[1, 0], [0, 1], [-1, -1]]
            .iter()
            .map(|e| Term {
                exponent: e.to_vec(),
                coefficient: 1.0,
                s_exponent: rat(-1),
            })
            .collect();
        Superpotential::new(2, terms).unwrap()
    }

    fn omega() -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI / 3.0)
    }

    #[test]
    fn eval_at_one_and_roots_of_unity() {
        let w = cp2();
        assert_eq!(w.eval(&TorusPoint::from_integers(&[1, 1]).unwrap()), Complex64::new(3.0, 0.0));
        let p = TorusPoint::new(vec![omega(), omega()]).unwrap();
        assert!((w.eval(&p) - omega() * 3.0).norm() < 1e-12);
        assert!(w.log_gradient(&p).iter().all(|g| g.norm() < 1e-12));
    }

    #[test]
    fn log_hessian_at_one() {
        let h = cp2().log_hessian(&TorusPoint::from_integers(&[1, 1]).unwrap());
        assert_eq!(h[0][0], Complex64::new(2.0, 0.0));
        assert_eq!(h[0][1], Complex64::new(1.0, 0.0));
        assert_eq!(h[1][0], Complex64::new(1.0, 0.0));
        assert_eq!(h[1][1], Complex64::new(2.0, 0.0));
    }

    #[test]
    fn rejects_bad_input() {
        let t = |e: Vec<i64>, c: f64| Term {
            exponent: e,
            coefficient: c,
            s_exponent: rat(0),
        };
        assert!(matches!(
            Superpotential::new(1, vec![t(vec![1], 1.0), t(vec![-1], 0.0)]),
            Err(PotentialError::NonpositiveCoefficient { index: 1, .. })
        ));
        assert!(matches!(
            Superpotential::new(1, vec![t(vec![1], 1.0), t(vec![1], 2.0)]),
            Err(PotentialError::DuplicateExponent(_))
        ));
        assert_eq!(TorusPoint::from_integers(&[1, 0]), Err(PotentialError::ZeroCoordinate));
    }

    #[test]
    fn int_pow_matches_powi() {
        let z = Complex64::new(0.7, -1.3);
        for n in -7..=7 {
            assert!((int_pow(z, n) - z.powi(n as i32)).norm() < 1e-12);
        }
        assert_eq!(rat_pow(&BigRational::new(2.into(), 3.into()), -2), BigRational::new(9.into(), 4.into()));
    }

    #[test]
    fn snapping() {
        let p = TorusPoint::new(vec![Complex64::new(-1.0 + 3e-7, 1e-8), Complex64::new(0.5, 0.0)]).unwrap();
        let s = p.snapped(1e-6, 12).unwrap();
        assert_eq!(s.exact().unwrap(), &[rat(-1), BigRational::new(1.into(), 2.into())]);
        let irrational = TorusPoint::new(vec![Complex64::new(0.7167, 0.0)]).unwrap();
        assert!(irrational.snapped(1e-6, 12).is_none());
        let complex = TorusPoint::new(vec![Complex64::new(0.0, 1.0)]).unwrap();
        assert!(complex.snapped(1e-3, 12).is_none());
    }

    #[test]
    fn rendering() {
        assert_eq!(cp2().render(false), "x1 + x2 + x1^{-1} x2^{-1}");
        assert_eq!(cp2().render(true), "s^{-1} x1 + s^{-1} x2 + s^{-1} x1^{-1} x2^{-1}");
        let p = TorusPoint::from_integers(&[-1, 2]).unwrap();
        assert_eq!(p.to_string(), "(-1, 2)");
    }

    #[test]
    fn perturbation_is_reproducible() {
        let a = perturbed_coefficients(10, 7, 0.9, 1.1);
        assert_eq!(a, perturbed_coefficients(10, 7, 0.9, 1.1));
        assert!(a.iter().all(|c| (0.9..=1.1).contains(c)));
        assert_ne!(a, perturbed_coefficients(10, 8, 0.9, 1.1));
    }
}
