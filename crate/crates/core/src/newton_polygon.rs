//! Newton polygons of univariate polynomials over a valued field and the
//! root valuations they predict.
//!
//! Valuations are orders of vanishing in `s`: `val(s^l) = l`, so the norm is
//! `|a| = 10^{-val(a)}`.

use std::fmt::Write as _;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewtonError {
    #[error("a Newton polygon needs at least two terms")]
    TooFewTerms,
    #[error("degree {0} appears twice")]
    DuplicateDegree(usize),
    #[error("need alpha > beta > 0, got alpha = {alpha}, beta = {beta}")]
    InvalidRegime { alpha: BigRational, beta: BigRational },
    #[error("expected {expected} units, got {found}")]
    UnitCount { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValuedTerm {
    pub degree: usize,
    pub valuation: BigRational,
    /// Leading coefficient of the term, used only when specializing `s`.
    pub unit: f64,
}

/// Terms sorted by degree; missing degrees have zero coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct ValuedPoly {
    terms: Vec<ValuedTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub slope: BigRational,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationMultiset {
    /// `(valuation, count)`, by increasing valuation.
    pub entries: Vec<(BigRational, usize)>,
}

impl ValuationMultiset {
    pub fn total(&self) -> usize {
        self.entries.iter().map(|(_, k)| k).sum()
    }

    pub fn classes(&self) -> usize {
        self.entries.len()
    }

    /// Every valuation repeated by its count, largest first.
    pub fn expanded(&self) -> Vec<BigRational> {
        let mut out: Vec<BigRational> = self
            .entries
            .iter()
            .flat_map(|(v, k)| std::iter::repeat_n(v.clone(), *k))
            .collect();
        out.reverse();
        out
    }
}

impl ValuedPoly {
    pub fn new(terms: Vec<(usize, BigRational)>) -> Result<Self, NewtonError> {
        Self::with_units(terms.into_iter().map(|(d, v)| (d, v, 1.0)).collect())
    }

    pub fn with_units(terms: Vec<(usize, BigRational, f64)>) -> Result<Self, NewtonError> {
        if terms.len() < 2 {
            return Err(NewtonError::TooFewTerms);
        }
        let mut terms: Vec<ValuedTerm> = terms
            .into_iter()
            .map(|(degree, valuation, unit)| ValuedTerm { degree, valuation, unit })
            .collect();
        terms.sort_by_key(|t| t.degree);
        if let Some(w) = terms.windows(2).find(|w| w[0].degree == w[1].degree) {
            return Err(NewtonError::DuplicateDegree(w[0].degree));
        }
        Ok(ValuedPoly { terms })
    }

    pub fn terms(&self) -> &[ValuedTerm] {
        &self.terms
    }

    pub fn degree_span(&self) -> usize {
        self.terms.last().unwrap().degree - self.terms[0].degree
    }

    /// Roots of `sum unit * eps^val * x^deg`.
    pub fn specialize(&self, eps: f64) -> Vec<Complex64> {
        let lo = self.terms[0].degree;
        let mut coeffs = vec![Complex64::zero(); self.degree_span() + 1];
        for t in &self.terms {
            let v = t.valuation.to_f64().unwrap_or(f64::NAN);
            coeffs[t.degree - lo] = Complex64::new(t.unit * eps.powf(v), 0.0);
        }
        polynomial_roots(&coeffs)
    }
}

fn cross(o: &(BigRational, BigRational), a: &(BigRational, BigRational), b: &(BigRational, BigRational)) -> BigRational {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

/// Faces of the lower hull of `{(degree, valuation)}`, by increasing slope.
/// Collinear points do not split a face.
pub fn lower_hull(p: &ValuedPoly) -> Vec<Face> {
    let pts: Vec<(BigRational, BigRational)> = p
        .terms
        .iter()
        .map(|t| (BigRational::from_integer(t.degree.into()), t.valuation.clone()))
        .collect();
    let mut hull: Vec<(BigRational, BigRational)> = Vec::new();
    for q in pts {
        while hull.len() >= 2 && !cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &q).is_positive() {
            hull.pop();
        }
        hull.push(q);
    }
    hull.windows(2)
        .map(|w| {
            let dx = &w[1].0 - &w[0].0;
            Face {
                slope: (&w[1].1 - &w[0].1) / &dx,
                length: dx.to_integer().to_usize().expect("degree difference fits"),
            }
        })
        .collect()
}

pub fn root_valuations(p: &ValuedPoly) -> ValuationMultiset {
    let mut entries: Vec<(BigRational, usize)> = lower_hull(p).into_iter().map(|f| (-f.slope, f.length)).collect();
    entries.reverse();
    ValuationMultiset { entries }
}

/// `x1^4 - s^alpha x1 - s^(alpha + beta)`, whose roots are the `x1`
/// coordinates of the critical points of the one-point blow-up of `CP^2`.
pub fn blowup_family(alpha: &BigRational, beta: &BigRational) -> Result<ValuedPoly, NewtonError> {
    if !(alpha > beta && beta.is_positive()) {
        return Err(NewtonError::InvalidRegime {
            alpha: alpha.clone(),
            beta: beta.clone(),
        });
    }
    ValuedPoly::with_units(vec![
        (4, BigRational::zero(), 1.0),
        (1, alpha.clone(), -1.0),
        (0, alpha + beta, -1.0),
    ])
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasimorphismReport {
    pub alpha: BigRational,
    pub beta: BigRational,
    pub valuations: ValuationMultiset,
    pub distinct: bool,
}

pub fn quasimorphism_report(alpha: &BigRational, beta: &BigRational) -> Result<QuasimorphismReport, NewtonError> {
    let valuations = root_valuations(&blowup_family(alpha, beta)?);
    Ok(QuasimorphismReport {
        alpha: alpha.clone(),
        beta: beta.clone(),
        distinct: valuations.classes() > 1,
        valuations,
    })
}

fn power_of_ten(v: &BigRational) -> String {
    if v.is_integer() {
        format!("10^{v}")
    } else {
        format!("10^({v})")
    }
}

impl QuasimorphismReport {
    pub fn ratio(&self) -> BigRational {
        &self.alpha / &self.beta
    }

    pub fn to_text(&self) -> String {
        let ratio = self.ratio();
        let three = BigRational::from_integer(3.into());
        let mut out = String::new();
        let _ = writeln!(out, "x1^4 - s^{} x1 - s^{} = 0", self.alpha, &self.alpha + &self.beta);
        for (v, k) in &self.valuations.entries {
            let _ = writeln!(
                out,
                "valuation {v} ({k} root{}): |x1| = {}, spectral norm of x^n at the idempotent, n = (-1, 0): {}",
                if *k == 1 { "" } else { "s" },
                power_of_ten(&-v),
                power_of_ten(v),
            );
        }
        if self.distinct {
            let _ = writeln!(out, "two distinct Calabi quasimorphisms (α/β = {ratio} < 3)");
        } else {
            let cmp = if ratio == three { "=" } else { ">" };
            let _ = writeln!(out, "criterion inconclusive, single valuation (α/β = {ratio} {cmp} 3)");
        }
        out
    }
}

/// All complex roots of `sum coeffs[k] x^k` by Aberth–Ehrlich iteration.
/// Zero roots from vanishing low coefficients are returned exactly.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let top = coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
    let low = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let mut roots = vec![Complex64::zero(); low];
    let c: Vec<Complex64> = coeffs[low..=top].iter().map(|x| x / coeffs[top]).collect();
    let n = c.len() - 1;
    if n == 0 {
        return roots;
    }
    // Fujiwara-type bound for the initial circle.
    let radius = (0..n)
        .map(|k| c[k].norm().powf(1.0 / (n - k) as f64))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64))
        .collect();
    let eval = |x: Complex64| {
        let mut p = Complex64::zero();
        let mut dp = Complex64::zero();
        for a in c.iter().rev() {
            dp = dp * x + p;
            p = p * x + a;
        }
        (p, dp)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            if p.is_zero() {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (Complex64::one() - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / z[i].norm().max(f64::MIN_POSITIVE));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    roots.extend(z);
    roots
}

/// Largest relative gap between root moduli at `s = eps` and `eps^v`, with
/// roots and valuations matched in order.
pub fn specialization_error(p: &ValuedPoly, eps: f64) -> f64 {
    let mut moduli: Vec<f64> = p.specialize(eps).iter().map(|z| z.norm()).collect();
    moduli.sort_by(f64::total_cmp);
    let predicted: Vec<f64> = root_valuations(p)
        .expanded()
        .iter()
        .map(|v| eps.powf(v.to_f64().unwrap_or(f64::NAN)))
        .collect();
    moduli
        .iter()
        .zip(&predicted)
        .map(|(m, e)| (m - e).abs() / e)
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn r(n: i64) -> BigRational {
        q(n, 1)
    }

    fn faces(p: &ValuedPoly) -> Vec<(BigRational, usize)> {
        lower_hull(p).into_iter().map(|f| (f.slope, f.length)).collect()
    }

    #[test]
    fn hull_examples() {
        let two = blowup_family(&r(2), &r(1)).unwrap();
        assert_eq!(faces(&two), [(r(-1), 1), (q(-2, 3), 3)]);
        let boundary = blowup_family(&r(3), &r(1)).unwrap();
        assert_eq!(faces(&boundary), [(r(-1), 4)]);
        let flat = ValuedPoly::new(vec![(0, r(0)), (2, r(0))]).unwrap();
        assert_eq!(faces(&flat), [(r(0), 2)]);
    }

    #[test]
    fn valuations() {
        let v = root_valuations(&blowup_family(&r(2), &r(1)).unwrap());
        assert_eq!(v.entries, [(q(2, 3), 3), (r(1), 1)]);
        let v = root_valuations(&blowup_family(&r(4), &r(1)).unwrap());
        assert_eq!(v.entries, [(q(5, 4), 4)]);
        let v = root_valuations(&ValuedPoly::new(vec![(0, r(0)), (2, r(0))]).unwrap());
        assert_eq!(v.entries, [(r(0), 2)]);
    }

    #[test]
    fn family_terms() {
        let p = blowup_family(&r(3), &r(2)).unwrap();
        let t: Vec<(usize, BigRational)> = p.terms().iter().map(|t| (t.degree, t.valuation.clone())).collect();
        assert_eq!(t, [(0, r(5)), (1, r(3)), (4, r(0))]);
        assert!(blowup_family(&r(1), &r(1)).is_err());
        assert!(blowup_family(&r(1), &r(0)).is_err());
    }

    #[test]
    fn bad_polys() {
        assert_eq!(ValuedPoly::new(vec![(1, r(0))]), Err(NewtonError::TooFewTerms));
        assert_eq!(
            ValuedPoly::new(vec![(1, r(0)), (1, r(2))]),
            Err(NewtonError::DuplicateDegree(1))
        );
    }

    #[test]
    fn report_text() {
        let rep = quasimorphism_report(&r(2), &r(1)).unwrap();
        assert!(rep.distinct);
        assert!(rep.to_text().contains("two distinct Calabi quasimorphisms (α/β = 2 < 3)"));
        assert!(rep.to_text().contains("|x1| = 10^(-2/3)"));
        let rep = quasimorphism_report(&r(3), &r(1)).unwrap();
        assert!(!rep.distinct);
        assert!(rep.to_text().contains("single valuation (α/β = 3 = 3)"));
    }

    #[test]
    fn roots_of_quadratic_and_zero_roots() {
        let c = |x: f64| Complex64::new(x, 0.0);
        let mut rts = polynomial_roots(&[c(-1.0), c(0.0), c(1.0)]);
        rts.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((rts[0] + 1.0).norm() < 1e-14 && (rts[1] - 1.0).norm() < 1e-14);
        let rts = polynomial_roots(&[c(0.0), c(0.0), c(-2.0), c(1.0)]);
        assert_eq!(rts.len(), 3);
        assert!(rts.iter().filter(|z| z.is_zero()).count() == 2);
    }

    #[test]
    fn specialization_close_at_small_eps() {
        let p = blowup_family(&r(2), &r(1)).unwrap();
        assert!(specialization_error(&p, 1e-3) < 0.1);
    }
}
