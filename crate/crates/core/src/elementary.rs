//! Elementary modules El(c*u^p, phi, R) and their algebra.

use std::collections::BTreeMap;
use std::fmt;

use num::integer::Integer;
use num::{BigRational, Zero};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::jordan::{jordan_items, parse_jordan, parse_jordan_items, split_top, JordanData, JordanError};
use crate::scalars::{parse_scalar, Eigenvalue, Monomial, Poly, Scalar, ScalarError, Sym};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElementaryError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Jordan(#[from] JordanError),
    #[error("malformed elementary module: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// Polar part of a Laurent series: exponent (< 0) -> nonzero coefficient.
/// Ordered from the deepest pole.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LaurentTail(BTreeMap<i64, Scalar>);

impl LaurentTail {
    pub fn zero() -> Self {
        LaurentTail(BTreeMap::new())
    }

    /// a * u^k
    pub fn monomial(a: Scalar, k: i64) -> Self {
        Self::from_terms([(k, a)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Scalar)>) -> Self {
        let mut t = LaurentTail::zero();
        for (k, a) in terms {
            t.add_term(k, a);
        }
        t
    }

    pub fn add_term(&mut self, k: i64, a: Scalar) {
        if k >= 0 || a.is_zero() {
            return;
        }
        let s = match self.0.get(&k) {
            Some(b) => b.add(&a),
            None => a,
        };
        if s.is_zero() {
            self.0.remove(&k);
        } else {
            self.0.insert(k, s);
        }
    }

    pub fn terms(&self) -> &BTreeMap<i64, Scalar> {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Pole order q.
    pub fn pole_order(&self) -> u32 {
        self.0.keys().next().map_or(0, |k| (-k) as u32)
    }

    pub fn coeff(&self, k: i64) -> Scalar {
        self.0.get(&k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn leading(&self) -> Option<(i64, &Scalar)> {
        self.0.iter().next().map(|(k, a)| (*k, a))
    }

    pub fn neg(&self) -> Self {
        LaurentTail(self.0.iter().map(|(k, a)| (*k, a.neg())).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut t = self.clone();
        for (k, a) in &other.0 {
            t.add_term(*k, a.clone());
        }
        t
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self::from_terms(self.0.iter().map(|(k, a)| (*k, a.mul(s))))
    }

    /// phi(z*u): coefficient of u^k multiplied by z^k.
    pub fn rescale(&self, z: &Scalar) -> Result<Self, ScalarError> {
        let mut out = LaurentTail::zero();
        for (k, a) in &self.0 {
            out.add_term(*k, a.mul(&z.pow(*k)?));
        }
        Ok(out)
    }

    /// phi(u^m)
    pub fn compose_power(&self, m: u32) -> Self {
        LaurentTail(self.0.iter().map(|(k, a)| (k * m as i64, a.clone())).collect())
    }

    /// gcd of all exponents (0 when empty).
    pub fn exponent_gcd(&self) -> u32 {
        self.0.keys().fold(0u64, |g, k| g.gcd(&k.unsigned_abs())) as u32
    }

    /// Divide all exponents by m (must divide).
    pub fn divide_exponents(&self, m: u32) -> Self {
        LaurentTail(self.0.iter().map(|(k, a)| (k / m as i64, a.clone())).collect())
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (k, a) in &self.0 {
            m.insert(k.to_string(), Value::String(a.to_string()));
        }
        Value::Object(m)
    }

    pub fn from_json(v: &Value) -> Result<Self, ElementaryError> {
        let obj = v.as_object().ok_or_else(|| ElementaryError::Parse("phi must be an object".into()))?;
        let mut t = LaurentTail::zero();
        for (k, a) in obj {
            let k: i64 = k.parse().map_err(|_| ElementaryError::Parse(format!("bad exponent '{}'", k)))?;
            if k >= 0 {
                return Err(ElementaryError::Parse(format!("tail exponent {} is not a pole", k)));
            }
            let s = a.as_str().ok_or_else(|| ElementaryError::Parse("phi coefficients must be strings".into()))?;
            t.add_term(k, parse_scalar(s)?);
        }
        Ok(t)
    }

    /// Read the polar part of an expression in the variable `var`.
    pub fn parse(s: &str, var: &str) -> Result<Self, ElementaryError> {
        let x = parse_scalar(s)?;
        Self::extract(&x, var)
    }

    pub fn extract(x: &Scalar, var: &str) -> Result<Self, ElementaryError> {
        let key = Sym::Named(var.to_string());
        for (f, _) in x.denominator_factors() {
            if f.terms().keys().any(|m| !m.exp_of(&key).is_zero()) {
                return Err(ElementaryError::Parse(format!("'{}' appears in a denominator", var)));
            }
        }
        let mut den = Scalar::one();
        for (f, k) in x.denominator_factors() {
            den = den.mul(&Scalar::from_poly(f.clone()).pow(*k as i64)?);
        }
        let mut by_exp: BTreeMap<i64, Poly> = BTreeMap::new();
        for (m, c) in x.numerator().terms() {
            let e = m.exp_of(&key);
            if !e.is_integer() {
                return Err(ElementaryError::Parse(format!("non-integer power of '{}'", var)));
            }
            let k: i64 = num::ToPrimitive::to_i64(e.numer()).unwrap_or(0);
            let mut rest = m.exps().clone();
            rest.remove(&key);
            let (carry, rest) = Monomial::from_raw(rest);
            let slot = by_exp.entry(k).or_insert_with(Poly::zero);
            *slot = slot.add(&Poly::term(c.scale(&carry), rest));
        }
        let mut t = LaurentTail::zero();
        for (k, p) in by_exp {
            if k < 0 {
                t.add_term(k, Scalar::from_poly(p).div(&den)?);
            }
        }
        Ok(t)
    }

    pub fn render(&self, var: &str) -> String {
        if self.0.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (k, a)) in self.0.iter().enumerate() {
            let u = if *k == -1 { var.to_string() } else { format!("{}^{}", var, -k) };
            let text = a.to_string();
            let simple = !text.contains(' ') && !text.contains('/');
            let body = if simple { text.clone() } else { format!("({})", text) };
            let (neg, body) = match body.strip_prefix('-') {
                Some(b) if simple => (true, b.to_string()),
                _ => (false, body),
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&format!("{}/{}", body, u));
        }
        out
    }
}

impl fmt::Debug for LaurentTail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("u"))
    }
}

/// El(c*u^p, phi, R). A zero tail with p = 1 encodes a regular connection R.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementaryModule {
    pub p: u32,
    pub c: Scalar,
    pub phi: LaurentTail,
    pub r: JordanData,
}

/// Determinant of an elementary module: an exponential part in the base
/// coordinate and a rank-one regular part.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DetData {
    pub tail: LaurentTail,
    pub eigenvalue: Eigenvalue,
}

impl DetData {
    pub fn trivial() -> Self {
        DetData { tail: LaurentTail::zero(), eigenvalue: Eigenvalue::one() }
    }

    pub fn mul(&self, other: &DetData) -> DetData {
        DetData { tail: self.tail.add(&other.tail), eigenvalue: self.eigenvalue.mul(&other.eigenvalue) }
    }

    pub fn dual(&self) -> DetData {
        DetData { tail: self.tail.neg(), eigenvalue: self.eigenvalue.inv() }
    }

    pub fn is_trivial(&self) -> bool {
        self.tail.is_zero() && self.eigenvalue.is_one()
    }
}

impl ElementaryModule {
    /// El(u^p, phi, R) already in normal form.
    pub fn new(p: u32, phi: LaurentTail, r: JordanData) -> Result<Self, ElementaryError> {
        ElementaryModule { p, c: Scalar::one(), phi, r }.normalize()
    }

    /// El(u^p, a/u, R)
    pub fn simple(p: u32, a: Scalar, r: JordanData) -> Result<Self, ElementaryError> {
        Self::new(p, LaurentTail::monomial(a, -1), r)
    }

    pub fn regular(r: JordanData) -> Self {
        ElementaryModule { p: 1, c: Scalar::one(), phi: LaurentTail::zero(), r }
    }

    pub fn is_regular(&self) -> bool {
        self.phi.is_zero()
    }

    pub fn q(&self) -> u32 {
        self.phi.pole_order()
    }

    pub fn rank(&self) -> usize {
        self.p as usize * self.r.rank()
    }

    pub fn slope(&self) -> BigRational {
        BigRational::new((self.q() as i64).into(), (self.p as i64).into())
    }

    pub fn irregularity(&self) -> usize {
        self.r.rank() * self.q() as usize
    }

    /// Canonical representative: coefficient 1, minimal ramification, and the
    /// smallest tail in its zeta_p orbit.
    pub fn normalize(&self) -> Result<Self, ElementaryError> {
        if self.c.is_zero() {
            return Err(ElementaryError::Parse("zero ramification coefficient".into()));
        }
        let mut phi = self.phi.clone();
        if !self.c.is_one() {
            // u = c^{-1/p} v turns c u^p into v^p and a_k u^k into a_k c^{-k/p} v^k
            let root = self.c.root(self.p)?;
            phi = phi.rescale(&root.inv()?)?;
        }
        let reduced = ElementaryModule { p: self.p, c: Scalar::one(), phi, r: self.r.clone() }.reduce();
        reduced.orbit_minimum()
    }

    fn orbit_minimum(self) -> Result<Self, ElementaryError> {
        if self.p == 1 || self.phi.is_zero() {
            return Ok(self);
        }
        let mut best = self.phi.clone();
        for j in 1..self.p {
            let z = Scalar::zeta(self.p, j as i64);
            let cand = self.phi.rescale(&z)?;
            if cand < best {
                best = cand;
            }
        }
        Ok(ElementaryModule { phi: best, ..self })
    }

    /// Minimality: strip inner ramification factors u -> u^m with phi = phi1(u^m).
    pub fn reduce(&self) -> Self {
        if self.phi.is_zero() {
            return ElementaryModule::regular(self.r.push(self.p));
        }
        let m = (self.phi.exponent_gcd()).gcd(&self.p);
        if m <= 1 {
            return self.clone();
        }
        ElementaryModule {
            p: self.p / m,
            c: self.c.clone(),
            phi: self.phi.divide_exponents(m),
            r: self.r.push(m),
        }
    }

    pub fn dual(&self) -> Result<Self, ElementaryError> {
        ElementaryModule { p: self.p, c: self.c.clone(), phi: self.phi.neg(), r: self.r.dual() }.normalize()
    }

    /// Exponential part r*Tr(phi) (in t = u^p) and eigenvalue det(R)*(-1)^{(p-1)r}.
    pub fn det(&self) -> DetData {
        let rank = self.r.rank() as i64;
        let mut tail = LaurentTail::zero();
        for (k, a) in self.phi.terms() {
            if k % self.p as i64 == 0 {
                tail.add_term(k / self.p as i64, a.scale(&crate::scalars::Cyclotomic::from_int(rank * self.p as i64)));
            }
        }
        let sign = Eigenvalue::minus_one().powi((self.p as i64 - 1) * rank);
        DetData { tail, eigenvalue: self.r.det().mul(&sign) }
    }

    pub fn iso_eq(&self, other: &Self) -> Result<bool, ElementaryError> {
        Ok(self.normalize()? == other.normalize()?)
    }

    /// Tensor with the rank-one module E^{psi} (psi in the base coordinate t).
    pub fn tensor_exponential(&self, psi: &LaurentTail) -> Result<Self, ElementaryError> {
        ElementaryModule { phi: self.phi.add(&psi.compose_power(self.p)), ..self.clone() }.normalize()
    }

    /// Multiply the regular part by a rank-one regular object with eigenvalue l
    /// (downstairs), i.e. R -> R * l^p upstairs.
    pub fn twist(&self, l: &Eigenvalue) -> Self {
        ElementaryModule { r: self.r.twist(&l.powi(self.p as i64)), ..self.clone() }
    }

    /// Hom(E1, E2) as a list of elementary modules in normal form; regular
    /// summands come back as El(1, 0, R).
    pub fn hom(e1: &Self, e2: &Self) -> Result<Vec<Self>, ElementaryError> {
        let (p1, p2) = (e1.p, e2.p);
        let d = p1.gcd(&p2);
        let big_p = p1 * p2 / d;
        let (pp1, pp2) = (p1 / d, p2 / d);
        let r = e1.r.dual().pull(pp2).tensor(&e2.r.pull(pp1));
        let phi2 = e2.phi.compose_power(pp1);
        let mut out = Vec::new();
        for k in 0..d {
            let tail = phi2.sub(&conjugate_power(&e1.phi, big_p, k, pp2));
            out.push(ElementaryModule { p: big_p, c: Scalar::one(), phi: tail, r: r.clone() }.normalize()?);
        }
        Ok(out)
    }

    /// Pullback along u -> u^k as a list of elementary modules.
    pub fn pullback(&self, k: u32) -> Result<Vec<Self>, ElementaryError> {
        let g = self.p.gcd(&k);
        let pp = self.p / g;
        let kk = k / g;
        let mut out = Vec::new();
        for j in 0..g {
            let z = Scalar::zeta(self.p, j as i64);
            let phi = self.phi.rescale(&z)?.compose_power(kk);
            let e = ElementaryModule { p: pp, c: Scalar::one(), phi, r: self.r.pull(kk) };
            out.push(e.normalize()?);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "c": self.c.to_string(),
            "phi": self.phi.to_json(),
            "R": jordan_items(&self.r),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, ElementaryError> {
        let bad = |m: &str| ElementaryError::Parse(m.to_string());
        let p = v.get("p").and_then(Value::as_u64).ok_or_else(|| bad("missing p"))? as u32;
        if p == 0 {
            return Err(bad("p must be positive"));
        }
        let c = match v.get("c") {
            Some(Value::String(s)) => parse_scalar(s)?,
            None => Scalar::one(),
            _ => return Err(bad("c must be a string")),
        };
        let phi = LaurentTail::from_json(v.get("phi").ok_or_else(|| bad("missing phi"))?)?;
        let items: Vec<String> = v
            .get("R")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing R"))?
            .iter()
            .map(|x| x.as_str().map(str::to_string).ok_or_else(|| bad("R items must be strings")))
            .collect::<Result<_, _>>()?;
        let r = parse_jordan_items(&items)?;
        ElementaryModule { p, c, phi, r }.normalize()
    }

    /// `El(2, a1/u, (l, l^-1))`; the first argument may also be `c*u^p`.
    pub fn parse(s: &str) -> Result<Self, ElementaryError> {
        let t = s.trim();
        let inner = t
            .strip_prefix("El(")
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| ElementaryError::Parse(format!("expected El(...): {}", t)))?;
        let parts = split_top(inner);
        if parts.len() != 3 {
            return Err(ElementaryError::Parse(format!("El needs three arguments: {}", t)));
        }
        let (p, c) = parse_ramification(parts[0].trim())?;
        let phi = LaurentTail::parse(parts[1].trim(), "u")?;
        let r = parse_jordan(parts[2].trim())?;
        ElementaryModule { p, c, phi, r }.normalize()
    }
}

/// phi((zeta_P^k w)^{p'2}) = sum_j a_j zeta_P^{k j p'2} w^{j p'2}
fn conjugate_power(phi: &LaurentTail, big_p: u32, k: u32, pp2: u32) -> LaurentTail {
    let mut out = LaurentTail::zero();
    for (j, a) in phi.terms() {
        let z = Scalar::zeta(big_p, k as i64 * *j * pp2 as i64);
        out.add_term(j * pp2 as i64, a.mul(&z));
    }
    out
}

fn parse_ramification(s: &str) -> Result<(u32, Scalar), ElementaryError> {
    if let Ok(p) = s.parse::<u32>() {
        if p == 0 {
            return Err(ElementaryError::Parse("p must be positive".into()));
        }
        return Ok((p, Scalar::one()));
    }
    let x = parse_scalar(s)?;
    let (c, m) = x
        .as_term()
        .ok_or_else(|| ElementaryError::Parse(format!("ramification must be c*u^p: {}", s)))?;
    let key = Sym::Named("u".into());
    let e = m.exp_of(&key);
    if !e.is_integer() || e <= BigRational::zero() {
        return Err(ElementaryError::Parse(format!("ramification degree must be a positive integer: {}", s)));
    }
    let p: u32 = num::ToPrimitive::to_u32(e.numer()).unwrap_or(0);
    let mut rest = m.exps().clone();
    rest.remove(&key);
    let (carry, rest) = Monomial::from_raw(rest);
    Ok((p, Scalar::from_poly(Poly::term(c.scale(&carry), rest))))
}

impl fmt::Display for ElementaryModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ram = if self.c.is_one() { self.p.to_string() } else { format!("({})*u^{}", self.c, self.p) };
        write!(f, "El({}, {}, {})", ram, self.phi.render("u"), self.r)
    }
}

impl fmt::Debug for ElementaryModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
