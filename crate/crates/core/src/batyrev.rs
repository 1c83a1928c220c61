//! Batyrev's presentation `Lambda[z_rho] / (P + QSR)` of the quantum
//! cohomology of a smooth projective toric variety.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fan::{Fan, FanError};
use crate::lattice_geometry::LatticeVector;
use crate::support_function::SupportFunction;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BatyrevError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error("fan is not complete")]
    NotComplete,
    #[error("fan is not smooth")]
    NotSmooth,
    #[error("support function is not strictly convex")]
    NotStrictlyConvex,
    #[error("coordinate does not fit in 64 bits")]
    Overflow,
    #[error("relation for collection {0:?} failed verification: {1}")]
    Inconsistent(Vec<usize>, String),
}

/// `sum_rho <m, n_rho> z_rho` for a basis vector `m` of `M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearRelation {
    pub m: Vec<i64>,
    pub coeffs: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantumRelation {
    #[serde(rename = "C")]
    pub collection: Vec<usize>,
    #[serde(rename = "sigmaC")]
    pub sigma_c: Vec<usize>,
    pub a: BTreeMap<usize, i64>,
    /// `F(n_rho)` for the rays of `C`, then for the rays of `sigma_C`.
    #[serde(rename = "sF", with = "rational_strings")]
    pub s_values: Vec<BigRational>,
}

impl QuantumRelation {
    /// Exponent of `q^-1` in the left and right monomials.
    pub fn q_exponents(&self) -> (i64, i64) {
        (self.collection.len() as i64, self.a.values().sum())
    }

    fn f_collection(&self) -> &[BigRational] {
        &self.s_values[..self.collection.len()]
    }

    fn f_sigma(&self) -> &[BigRational] {
        &self.s_values[self.collection.len()..]
    }

    /// Exponents of `s` in the left and right monomials.
    pub fn s_exponents(&self) -> (BigRational, BigRational) {
        let left = self.f_collection().iter().fold(BigRational::zero(), |acc, f| acc - f);
        let right = self
            .sigma_c
            .iter()
            .zip(self.f_sigma())
            .fold(BigRational::zero(), |acc, (i, f)| acc - f * BigInt::from(self.a[i]));
        (left, right)
    }

    pub fn render(&self) -> String {
        let (ql, qr) = self.q_exponents();
        let (sl, sr) = self.s_exponents();
        let left = monomial(ql, &sl, self.collection.iter().map(|&i| (i, 1)));
        let right = monomial(qr, &sr, self.sigma_c.iter().map(|i| (*i, self.a[i])));
        format!("{left} - {right}")
    }
}

fn monomial(q: i64, s: &BigRational, z: impl Iterator<Item = (usize, i64)>) -> String {
    let mut parts = Vec::new();
    if q != 0 {
        parts.push(format!("q^-{q}"));
    }
    if !s.is_zero() {
        parts.push(if s.is_one() {
            "s".to_string()
        } else if s.is_integer() {
            format!("s^{s}")
        } else {
            format!("s^({s})")
        });
    }
    for (i, a) in z {
        parts.push(if a == 1 { format!("z{}", i + 1) } else { format!("z{}^{a}", i + 1) });
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join(" ")
    }
}

impl LinearRelation {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, &c) in self.coeffs.iter().enumerate().filter(|(_, c)| **c != 0) {
            let sign = if c < 0 { "-" } else { "+" };
            if out.is_empty() {
                if c < 0 {
                    out.push('-');
                }
            } else {
                let _ = write!(out, " {sign} ");
            }
            if c.abs() != 1 {
                let _ = write!(out, "{} ", c.abs());
            }
            let _ = write!(out, "z{}", i + 1);
        }
        if out.is_empty() {
            out.push('0');
        }
        out.push_str(" = 0");
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub rays: Vec<Vec<i64>>,
    pub linear: Vec<LinearRelation>,
    pub quantum: Vec<QuantumRelation>,
    pub c1: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

fn rays_i64(fan: &Fan) -> Result<Vec<Vec<i64>>, BatyrevError> {
    fan.rays().iter().map(|r| r.to_i64().ok_or(BatyrevError::Overflow)).collect()
}

/// One relation per standard basis vector of `M`.
pub fn linear_ideal(fan: &Fan) -> Result<Vec<LinearRelation>, BatyrevError> {
    let rays = rays_i64(fan)?;
    Ok((0..fan.dim())
        .map(|i| {
            let mut m = vec![0; fan.dim()];
            m[i] = 1;
            LinearRelation {
                m,
                coeffs: rays.iter().map(|r| r[i]).collect(),
            }
        })
        .collect())
}

/// Quantized Stanley–Reisner generators, one per primitive collection.
pub fn quantum_sr_generators(fan: &Fan, support: &SupportFunction) -> Result<Vec<QuantumRelation>, BatyrevError> {
    if !fan.is_complete() {
        return Err(BatyrevError::NotComplete);
    }
    if !fan.is_smooth() {
        return Err(BatyrevError::NotSmooth);
    }
    if !support.is_strictly_convex() {
        return Err(BatyrevError::NotStrictlyConvex);
    }
    let f = support.values();
    fan.primitive_collections()
        .into_iter()
        .map(|c| {
            let sum = c
                .iter()
                .fold(LatticeVector::zero(fan.dim()), |acc, &i| acc.add(fan.ray(i)));
            let (cone, coeffs) = fan.minimal_cone_containing(&sum)?;
            let mut a = BTreeMap::new();
            for (&i, k) in cone.0.iter().zip(&coeffs) {
                a.insert(i, k.to_i64().ok_or(BatyrevError::Overflow)?);
            }
            let s_values = c.iter().chain(&cone.0).map(|&i| f[i].clone()).collect();
            let rel = QuantumRelation {
                collection: c,
                sigma_c: cone.0,
                a,
                s_values,
            };
            verify_relation(fan, &rel)?;
            Ok(rel)
        })
        .collect()
}

/// Re-checks `sum_C n_rho = sum a_rho n_rho` and that `C` misses `sigma_C`.
pub fn verify_relation(fan: &Fan, rel: &QuantumRelation) -> Result<(), BatyrevError> {
    let fail = |why: &str| Err(BatyrevError::Inconsistent(rel.collection.clone(), why.to_string()));
    if rel.collection.iter().any(|i| rel.sigma_c.contains(i)) {
        return fail("collection meets sigma_C");
    }
    if rel.a.values().any(|&k| k <= 0) {
        return fail("non-positive multiplicity");
    }
    let mut diff = LatticeVector::zero(fan.dim());
    for &i in &rel.collection {
        diff = diff.add(fan.ray(i));
    }
    for (&i, &k) in &rel.a {
        diff = diff.add(&fan.ray(i).scaled(&BigInt::from(-k)));
    }
    if !diff.is_zero() {
        return fail("expansion does not sum to zero");
    }
    Ok(())
}

impl Presentation {
    pub fn new(fan: &Fan, support: &SupportFunction) -> Result<Self, BatyrevError> {
        let quantum = quantum_sr_generators(fan, support)?;
        let c1 = (1..=fan.rays().len())
            .map(|i| format!("z{i}"))
            .collect::<Vec<_>>()
            .join(" + ");
        Ok(Presentation {
            rays: rays_i64(fan)?,
            linear: linear_ideal(fan)?,
            quantum,
            c1,
        })
    }

    pub fn variables(&self) -> Vec<String> {
        (1..=self.rays.len()).map(|i| format!("z{i}")).collect()
    }

    pub fn to_text(&self) -> String {
        assert!(!self.quantum.is_empty(), "a complete fan has a primitive collection");
        let mut out = String::new();
        let _ = writeln!(out, "variables: {}", self.variables().join(" "));
        let _ = writeln!(out, "linear:");
        for l in &self.linear {
            let _ = writeln!(out, "  {}", l.render());
        }
        let _ = writeln!(out, "quantum:");
        for q in &self.quantum {
            let _ = writeln!(out, "  {}", q.render());
        }
        let _ = writeln!(out, "c1: {}", self.c1);
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("presentation serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => self.to_json() + "\n",
        }
    }
}

/// A Laurent monomial `q^k s^e x^n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial {
    pub q: i64,
    pub s: BigRational,
    pub x: Vec<BigInt>,
}

impl Monomial {
    fn one(dim: usize) -> Self {
        Monomial {
            q: 0,
            s: BigRational::zero(),
            x: vec![BigInt::zero(); dim],
        }
    }

    fn mul(&self, other: &Monomial, power: i64) -> Monomial {
        let p = BigInt::from(power);
        Monomial {
            q: self.q + other.q * power,
            s: &self.s + &other.s * &p,
            x: self.x.iter().zip(&other.x).map(|(a, b)| a + b * &p).collect(),
        }
    }
}

/// Integer combination of Laurent monomials.
pub type LaurentSum = BTreeMap<Monomial, BigInt>;

fn add_term(sum: &mut LaurentSum, m: Monomial, c: BigInt) {
    let entry = sum.entry(m.clone()).or_insert_with(BigInt::zero);
    *entry += c;
    if entry.is_zero() {
        sum.remove(&m);
    }
}

/// `psi(z_rho) = q s^{F(n_rho)} x^{n_rho}`.
fn psi(fan: &Fan, support: &SupportFunction, i: usize) -> Monomial {
    Monomial {
        q: 1,
        s: support.values()[i].clone(),
        x: fan.ray(i).0.clone(),
    }
}

fn q_inv_s(support: &SupportFunction, i: usize) -> Monomial {
    Monomial {
        q: -1,
        s: -support.values()[i].clone(),
        x: Vec::new(),
    }
}

/// Image of a quantum relation under `psi`, as a Laurent sum.
pub fn substitute_quantum(fan: &Fan, support: &SupportFunction, rel: &QuantumRelation) -> LaurentSum {
    let d = fan.dim();
    let factor = |i: usize| {
        let scalar = q_inv_s(support, i);
        let mut m = psi(fan, support, i);
        m.q += scalar.q;
        m.s += scalar.s;
        m
    };
    let left = rel.collection.iter().fold(Monomial::one(d), |acc, &i| acc.mul(&factor(i), 1));
    let right = rel.a.iter().fold(Monomial::one(d), |acc, (&i, &k)| acc.mul(&factor(i), k));
    let mut sum = LaurentSum::new();
    add_term(&mut sum, left, BigInt::one());
    add_term(&mut sum, right, -BigInt::one());
    sum
}

/// Image of a linear relation under `psi`.
pub fn substitute_linear(fan: &Fan, support: &SupportFunction, rel: &LinearRelation) -> LaurentSum {
    let mut sum = LaurentSum::new();
    for (i, &c) in rel.coeffs.iter().enumerate() {
        add_term(&mut sum, psi(fan, support, i), BigInt::from(c));
    }
    sum
}

/// `q` times the derivative of `W = sum s^F x^n` along `m`.
pub fn q_times_log_derivative(fan: &Fan, support: &SupportFunction, m: &[i64]) -> LaurentSum {
    let mut sum = LaurentSum::new();
    let m = LatticeVector::from_i64(m);
    for i in 0..fan.rays().len() {
        let term = Monomial {
            q: 1,
            s: support.values()[i].clone(),
            x: fan.ray(i).0.clone(),
        };
        add_term(&mut sum, term, m.dot(fan.ray(i)));
    }
    sum
}

/// Checks that `psi` kills every quantum relation and maps every linear
/// relation to `q` times the matching log-derivative of `W`.
pub fn verify_substitution(fan: &Fan, support: &SupportFunction, p: &Presentation) -> Result<(), String> {
    for rel in &p.quantum {
        let image = substitute_quantum(fan, support, rel);
        if !image.is_empty() {
            return Err(format!("psi({}) has {} surviving terms", rel.render(), image.len()));
        }
    }
    for rel in &p.linear {
        if substitute_linear(fan, support, rel) != q_times_log_derivative(fan, support, &rel.m) {
            return Err(format!("psi({}) differs from q dW", rel.render()));
        }
    }
    Ok(())
}

mod rational_strings {
    use std::str::FromStr;

    use num_rational::BigRational;
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|x| BigRational::from_str(x).map_err(D::Error::custom))
            .collect()
    }
}
