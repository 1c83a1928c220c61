//! Critical-value spectra: the eigenvalues of quantum multiplication by
//! `q^-1 c_1`, read off as the values of `W` at its critical points.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::critical_solver::SolveReport;
use crate::landau_ginzburg::{format_complex, Superpotential};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    pub value: Complex64,
    /// Exact for nondegenerate points; a lower bound at degenerate ones.
    pub multiplicity: usize,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Spectrum {
    pub values: Vec<SpectrumEntry>,
}

fn round6(x: f64) -> i64 {
    (x * 1e6).round() as i64
}

fn entry_cmp(a: &SpectrumEntry, b: &SpectrumEntry) -> Ordering {
    let key = |e: &SpectrumEntry| (round6(e.value.re), round6(e.value.im));
    key(a)
        .cmp(&key(b))
        .then(a.value.re.total_cmp(&b.value.re))
        .then(a.value.im.total_cmp(&b.value.im))
}

impl Spectrum {
    pub fn new(mut values: Vec<SpectrumEntry>) -> Self {
        values.sort_by(entry_cmp);
        Spectrum { values }
    }

    pub fn from_values(values: impl IntoIterator<Item = Complex64>) -> Self {
        Spectrum::new(
            values
                .into_iter()
                .map(|value| SpectrumEntry {
                    value,
                    multiplicity: 1,
                    degenerate: false,
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sum of the (lower-bound) multiplicities.
    pub fn total_multiplicity(&self) -> usize {
        self.values.iter().map(|e| e.multiplicity).sum()
    }

    /// Multiset equality of values up to `tol`, ignoring flags.
    pub fn matches(&self, other: &Spectrum, tol: f64) -> bool {
        if self.total_multiplicity() != other.total_multiplicity() {
            return false;
        }
        let expand = |s: &Spectrum| -> Vec<Complex64> {
            s.values
                .iter()
                .flat_map(|e| std::iter::repeat_n(e.value, e.multiplicity))
                .collect()
        };
        let mut rest = expand(other);
        for v in expand(self) {
            match rest.iter().position(|w| (v - w).norm() <= tol * v.norm().max(1.0)) {
                Some(i) => {
                    rest.swap_remove(i);
                }
                None => return false,
            }
        }
        true
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc {
            values: Vec<(f64, f64, usize, bool)>,
        }
        let doc = Doc {
            values: self
                .values
                .iter()
                .map(|e| (e.value.re, e.value.im, e.multiplicity, e.degenerate))
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("spectrum serializes")
    }

    pub fn to_text(&self) -> String {
        self.values
            .iter()
            .map(|e| {
                let mut line = format_complex(e.value);
                if e.degenerate {
                    line += &format!("  degenerate, multiplicity >= {}", e.multiplicity);
                }
                line + "\n"
            })
            .collect()
    }
}

/// `W(p)` at every reported point, flagged when `p` is degenerate.
pub fn critical_values(w: &Superpotential, report: &SolveReport) -> Spectrum {
    Spectrum::new(
        report
            .points
            .iter()
            .map(|p| SpectrumEntry {
                value: w.eval(&p.coords),
                multiplicity: 1,
                degenerate: !p.nondegenerate,
            })
            .collect(),
    )
}

/// `{(d+1) zeta : zeta^{d+1} = 1}`, the spectrum of `CP^d`.
pub fn cp_closed_form(d: usize) -> Spectrum {
    let n = (d + 1) as f64;
    Spectrum::from_values((0..=d).map(|k| Complex64::from_polar(n, 2.0 * PI * k as f64 / n)))
}

/// Spectrum of a product: all sums `a + b`, multiplicities multiplied.
pub fn minkowski_sum(a: &Spectrum, b: &Spectrum) -> Spectrum {
    Spectrum::new(
        a.values
            .iter()
            .flat_map(|x| {
                b.values.iter().map(move |y| SpectrumEntry {
                    value: x.value + y.value,
                    multiplicity: x.multiplicity * y.multiplicity,
                    degenerate: x.degenerate || y.degenerate,
                })
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn closed_form_small_cases() {
        assert!(cp_closed_form(1).matches(&Spectrum::from_values([c(2.0, 0.0), c(-2.0, 0.0)]), 1e-12));
        let h = 3.0 * 3f64.sqrt() / 2.0;
        assert!(cp_closed_form(2).matches(&Spectrum::from_values([c(3.0, 0.0), c(-1.5, h), c(-1.5, -h)]), 1e-12));
        let s4 = cp_closed_form(4);
        assert_eq!(s4.len(), 5);
        assert!(s4.values.iter().all(|e| (e.value.norm() - 5.0).abs() < 1e-12));
    }

    #[test]
    fn sorted_lexicographically() {
        let s = cp_closed_form(2);
        let re: Vec<i64> = s.values.iter().map(|e| (2.0 * e.value.re).round() as i64).collect();
        assert_eq!(re, [-3, -3, 6]);
        assert!(s.values[0].value.im < 0.0);
    }

    #[test]
    fn product_of_lines() {
        let p = minkowski_sum(&cp_closed_form(1), &cp_closed_form(1));
        let expect = Spectrum::from_values([c(4.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-4.0, 0.0)]);
        assert!(p.matches(&expect, 1e-12));
        assert!(!p.matches(&cp_closed_form(3), 1e-12));
    }

    #[test]
    fn json_shape() {
        let s = Spectrum::new(vec![SpectrumEntry {
            value: c(-6.0, 0.0),
            multiplicity: 1,
            degenerate: true,
        }]);
        let v: serde_json::Value = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(v["values"][0], serde_json::json!([-6.0, 0.0, 1, true]));
    }
}
