use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use super::cyclotomic::{fmt_rational, Cyclotomic};

/// A multiplicative generator: a named formal parameter, or the positive real
/// radical base of a prime (exponent kept in (0, 1)).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Sym {
    Named(String),
    Radical(u64),
}

/// Monomial with rational exponents. Ordered lexicographically (larger exponent of
/// the first differing symbol is larger), which is a group order on monomials.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(BTreeMap<Sym, BigRational>);

fn frac_floor(q: &BigRational) -> BigInt {
    q.floor().to_integer()
}

fn pow_rational_int(base: u64, e: &BigInt) -> BigRational {
    let b = BigRational::from_integer(BigInt::from(base));
    let n = e.to_i64().expect("radical carry exponent too large");
    if n >= 0 {
        num::pow(b, n as usize)
    } else {
        num::pow(b.recip(), (-n) as usize)
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(name: &str) -> Self {
        let mut m = BTreeMap::new();
        m.insert(Sym::Named(name.to_string()), BigRational::one());
        Monomial(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exps(&self) -> &BTreeMap<Sym, BigRational> {
        &self.0
    }

    pub fn exp_of(&self, s: &Sym) -> BigRational {
        self.0.get(s).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn has_radicals(&self) -> bool {
        self.0.keys().any(|s| matches!(s, Sym::Radical(_)))
    }

    /// Build from raw exponents, folding integer parts of radical exponents into a
    /// rational factor.
    pub fn from_raw(raw: BTreeMap<Sym, BigRational>) -> (BigRational, Monomial) {
        let mut carry = BigRational::one();
        let mut out = BTreeMap::new();
        for (s, e) in raw {
            if e.is_zero() {
                continue;
            }
            match s {
                Sym::Radical(p) => {
                    let k = frac_floor(&e);
                    let rest = &e - BigRational::from_integer(k.clone());
                    if !k.is_zero() {
                        carry *= pow_rational_int(p, &k);
                    }
                    if !rest.is_zero() {
                        out.insert(Sym::Radical(p), rest);
                    }
                }
                named => {
                    out.insert(named, e);
                }
            }
        }
        (carry, Monomial(out))
    }

    pub fn mul(&self, other: &Monomial) -> (BigRational, Monomial) {
        let mut raw = self.0.clone();
        for (s, e) in &other.0 {
            *raw.entry(s.clone()).or_insert_with(BigRational::zero) += e;
        }
        Self::from_raw(raw)
    }

    pub fn pow(&self, r: &BigRational) -> (BigRational, Monomial) {
        Self::from_raw(self.0.iter().map(|(s, e)| (s.clone(), e * r)).collect())
    }

    pub fn inv(&self) -> (BigRational, Monomial) {
        self.pow(&-BigRational::one())
    }

    /// Exponent-wise division; the quotient of two monomials.
    pub fn div(&self, other: &Monomial) -> (BigRational, Monomial) {
        let (c, oi) = other.inv();
        let (c2, m) = self.mul(&oi);
        (c * c2, m)
    }

    /// Lex comparison ignoring radical carries (used for bounds only).
    fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let mut keys: Vec<&Sym> = self.0.keys().chain(other.0.keys()).collect();
        keys.sort();
        keys.dedup();
        for k in keys {
            let a = self.exp_of(k);
            let b = other.exp_of(k);
            match a.cmp(&b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lex_cmp(other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn fmt_exp(e: &BigRational) -> String {
    if e.is_integer() {
        e.numer().to_string()
    } else {
        format!("({})", fmt_rational(e))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(s, e)| {
                let base = match s {
                    Sym::Named(n) => n.clone(),
                    Sym::Radical(p) => p.to_string(),
                };
                if e.is_one() {
                    base
                } else {
                    format!("{}^{}", base, fmt_exp(e))
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Sparse Laurent-Puiseux polynomial with cyclotomic coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Cyclotomic>,
}

pub(crate) const DIV_ITER_CAP: usize = 4096;

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Cyclotomic::one())
    }

    pub fn constant(c: Cyclotomic) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn term(c: Cyclotomic, m: Monomial) -> Self {
        let mut p = Poly::zero();
        p.add_term(c, m);
        p
    }

    pub fn var(name: &str) -> Self {
        Self::term(Cyclotomic::one(), Monomial::var(name))
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Cyclotomic> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().next().map_or(false, |(m, c)| m.is_one() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Cyclotomic> {
        if self.is_zero() {
            return Some(Cyclotomic::zero());
        }
        match self.single_term() {
            Some((c, m)) if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn single_term(&self) -> Option<(&Cyclotomic, &Monomial)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (c, m))
        } else {
            None
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &Cyclotomic)> {
        self.terms.iter().next_back()
    }

    pub fn trailing(&self) -> Option<(&Monomial, &Cyclotomic)> {
        self.terms.iter().next()
    }

    pub fn add_term(&mut self, c: Cyclotomic, m: Monomial) {
        if c.is_zero() {
            return;
        }
        // radical carries make the stored monomial differ from the input one
        let (carry, m) = Monomial::from_raw(m.0);
        let c = c.scale(&carry);
        match self.terms.get(&m) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(c.clone(), m.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Cyclotomic) -> Poly {
        let mut out = Poly::zero();
        for (m, x) in &self.terms {
            out.add_term(x.mul(c), m.clone());
        }
        out
    }

    pub fn mul_term(&self, c: &Cyclotomic, m: &Monomial) -> Poly {
        let mut out = Poly::zero();
        for (m2, x) in &self.terms {
            let (carry, mm) = m2.mul(m);
            out.add_term(x.mul(c).scale(&carry), mm);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &other.terms {
            out = out.add(&self.mul_term(c, m));
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    /// Exact division; None when `d` does not divide `self` (or the search gives up).
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let (ld_m, ld_c) = d.leading()?;
        let ld_inv = ld_c.inv()?;
        let (tm, _) = self.trailing()?;
        let (td, _) = d.trailing()?;
        let bound = tm.div(td).1;
        let mut rem = self.clone();
        let mut q = Poly::zero();
        for _ in 0..DIV_ITER_CAP {
            let Some((lm, lc)) = rem.leading() else {
                return Some(q);
            };
            let (carry, qm) = lm.div(ld_m);
            if qm < bound {
                return None;
            }
            let qc = lc.mul(&ld_inv).scale(&carry);
            let step = d.mul_term(&qc, &qm);
            q.add_term(qc, qm);
            let next = rem.sub(&step);
            if next.leading().map(|(m, _)| m >= lm).unwrap_or(false) {
                return None;
            }
            rem = next;
        }
        None
    }

    /// Multiply by the monomial that clears negative named exponents; returns it too.
    pub fn clear_negative(&self) -> (Poly, Monomial) {
        let mut mins: BTreeMap<Sym, BigRational> = BTreeMap::new();
        for m in self.terms.keys() {
            for (s, e) in &m.0 {
                if let Sym::Named(_) = s {
                    let cur = mins.entry(s.clone()).or_insert_with(BigRational::zero);
                    if e < cur {
                        *cur = e.clone();
                    }
                }
            }
        }
        let shift = Monomial(mins.into_iter().filter(|(_, e)| e.is_negative()).map(|(s, e)| (s, -e)).collect());
        (self.mul_term(&Cyclotomic::one(), &shift), shift)
    }

    pub fn symbols(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .terms
            .keys()
            .flat_map(|m| m.0.keys())
            .filter_map(|s| match s {
                Sym::Named(n) => Some(n.clone()),
                Sym::Radical(_) => None,
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Substitute sym -> value (a single term), used for renaming and specialization.
    pub fn substitute(&self, name: &str, value: &Poly) -> Option<Poly> {
        let key = Sym::Named(name.to_string());
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp_of(&key);
            let mut rest = m.0.clone();
            rest.remove(&key);
            let rest = Poly::term(c.clone(), Monomial(rest));
            if e.is_zero() {
                out = out.add(&rest);
                continue;
            }
            let factor = if e.is_integer() && e.is_positive() {
                value.pow(e.to_integer().to_u32()?)
            } else {
                let (vc, vm) = value.single_term()?;
                let ec = if e.is_integer() { vc.pow(e.to_integer().to_i64()?)? } else { return None };
                let (carry, mm) = vm.pow(&e);
                Poly::term(ec.scale(&carry), mm)
            };
            out = out.add(&rest.mul(&factor));
        }
        Some(out)
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        let a = self.terms.iter().rev();
        let b = other.terms.iter().rev();
        for (x, y) in a.zip(b) {
            match x.0.cmp(y.0).then_with(|| cyclo_cmp(x.1, y.1)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn rat_key(q: &BigRational) -> (bool, BigRational) {
    (q.is_negative(), q.abs())
}

/// Presentation order on cyclotomics: smaller order first, then positive before
/// negative coordinates.
pub fn cyclo_cmp(a: &Cyclotomic, b: &Cyclotomic) -> Ordering {
    a.order().cmp(&b.order()).then_with(|| {
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            match rat_key(x).cmp(&rat_key(y)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    })
}

fn fmt_coeff_times(c: &Cyclotomic, m: &Monomial) -> String {
    if m.is_one() {
        return c.to_string();
    }
    if c.is_one() {
        return m.to_string();
    }
    if *c == Cyclotomic::from_int(-1) {
        return format!("-{}", m);
    }
    format!("{}*{}", c, m)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let s = fmt_coeff_times(c, m);
            if i == 0 {
                out.push_str(&s);
            } else if let Some(rest) = s.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&s);
            }
        }
        write!(f, "{}", out)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Trial-division factorization of a positive integer into (prime, exponent).
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// The positive real n-th root of a positive rational as (rational, radical monomial).
pub fn rational_root(q: &BigRational, n: u32) -> Option<(BigRational, Monomial)> {
    if !q.is_positive() {
        return None;
    }
    let num = q.numer().to_u64()?;
    let den = q.denom().to_u64()?;
    let mut raw: BTreeMap<Sym, BigRational> = BTreeMap::new();
    for (p, e) in factor_u64(num) {
        *raw.entry(Sym::Radical(p)).or_insert_with(BigRational::zero) += BigRational::new(e.into(), n.into());
    }
    for (p, e) in factor_u64(den) {
        *raw.entry(Sym::Radical(p)).or_insert_with(BigRational::zero) -= BigRational::new(e.into(), n.into());
    }
    Some(Monomial::from_raw(raw))
}

/// Canonical n-th root of a single cyclotomic coefficient of the form q*zeta.
pub fn coeff_root(c: &Cyclotomic, n: u32) -> Option<(Cyclotomic, Monomial)> {
    let (q, k, m) = c.as_scaled_root_of_unity()?;
    let (r, rad) = rational_root(&q, n)?;
    let z = Cyclotomic::zeta(m * n, k);
    Some((z.scale(&r), rad))
}

/// n-th root of a polynomial: canonical root of the leading term, then Newton-style
/// coefficient recursion from the top.
pub fn poly_root(p: &Poly, n: u32) -> Option<Poly> {
    if n == 1 || p.is_zero() {
        return Some(p.clone());
    }
    let (lm, lc) = p.leading()?;
    let (rc, rad) = coeff_root(lc, n)?;
    let (carry, rm) = lm.pow(&BigRational::new(1.into(), n.into()));
    let (c2, rm) = rm.mul(&rad);
    let lead = Poly::term(rc.scale(&(carry * c2)), rm);
    if p.len() == 1 {
        return Some(lead);
    }
    let (tm, _) = p.trailing()?;
    let bound = tm.pow(&BigRational::new(1.into(), n.into())).1;
    let denom = lead.pow(n - 1).scale(&Cyclotomic::from_int(n as i64));
    let (dm, dc) = denom.leading().map(|(m, c)| (m.clone(), c.clone()))?;
    let dc_inv = dc.inv()?;
    let mut r = lead;
    for _ in 0..(4 * p.len() + 8) {
        let diff = p.sub(&r.pow(n));
        let Some((em, ec)) = diff.leading() else {
            return Some(r);
        };
        let (carry, qm) = em.div(&dm);
        if qm < bound {
            return None;
        }
        let qc = ec.mul(&dc_inv).scale(&carry);
        r.add_term(qc, qm);
    }
    None
}
