use std::cmp::Ordering;
use std::fmt;

use num::integer::Integer;
use num::BigRational;

use super::cyclotomic::Cyclotomic;
use super::poly::{coeff_root, poly_root, Monomial, Poly};
use super::ScalarError;

/// Element of the coefficient field: a Laurent-Puiseux polynomial numerator over a
/// product of monic (leading term exactly 1) multi-term denominator factors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: Poly,
    den: Vec<(Poly, u32)>,
}

const POWER_PROBES: [u32; 4] = [6, 4, 3, 2];

/// Split p = unit * monic where the unit is the leading term.
fn monic_split(p: &Poly) -> Option<(Cyclotomic, Monomial, Poly)> {
    let (m, c) = p.leading()?;
    let (carry, mi) = m.inv();
    let ci = c.inv()?.scale(&carry);
    let monic = p.mul_term(&ci, &mi);
    Some((c.clone(), m.clone(), monic))
}

/// Detect f = g^k for monic f.
fn as_power(f: &Poly) -> (Poly, u32) {
    for k in POWER_PROBES {
        if let Some(g) = poly_root(f, k) {
            if g.len() > 1 {
                let (g2, k2) = as_power(&g);
                return (g2, k * k2);
            }
        }
    }
    (f.clone(), 1)
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { num: Poly::zero(), den: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_cyclotomic(Cyclotomic::from_int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_cyclotomic(Cyclotomic::rational(BigRational::new(n.into(), d.into())))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::from_cyclotomic(Cyclotomic::rational(q))
    }

    pub fn from_cyclotomic(c: Cyclotomic) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zeta(n: u32, k: i64) -> Self {
        Self::from_cyclotomic(Cyclotomic::zeta(n, k))
    }

    pub fn var(name: &str) -> Self {
        Self::from_poly(Poly::var(name))
    }

    pub fn from_poly(p: Poly) -> Self {
        Scalar { num: p, den: Vec::new() }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator_factors(&self) -> &[(Poly, u32)] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_cyclotomic(&self) -> Option<Cyclotomic> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.as_cyclotomic().and_then(|c| c.as_rational().cloned())
    }

    /// A single term c*m with no denominator.
    pub fn as_term(&self) -> Option<(Cyclotomic, Monomial)> {
        if !self.den.is_empty() {
            return None;
        }
        self.num.single_term().map(|(c, m)| (c.clone(), m.clone()))
    }

    pub fn symbols(&self) -> Vec<String> {
        let mut out = self.num.symbols();
        for (f, _) in &self.den {
            out.extend(f.symbols());
        }
        out.sort();
        out.dedup();
        out
    }

    fn canonical(mut self) -> Self {
        if self.num.is_zero() {
            return Scalar::zero();
        }
        // merge equal factors and split perfect powers
        let mut merged: Vec<(Poly, u32)> = Vec::new();
        for (f, k) in self.den.drain(..) {
            let (g, e) = as_power(&f);
            match merged.iter_mut().find(|(h, _)| *h == g) {
                Some(slot) => slot.1 += k * e,
                None => merged.push((g, k * e)),
            }
        }
        // cancel against the numerator
        for slot in merged.iter_mut() {
            while slot.1 > 0 {
                match self.num.exact_div(&slot.0) {
                    Some(q) => {
                        self.num = q;
                        slot.1 -= 1;
                    }
                    None => break,
                }
            }
        }
        merged.retain(|(_, k)| *k > 0);
        merged.sort_by(|a, b| a.0.cmp(&b.0));
        Scalar { num: self.num, den: merged }
    }

    fn den_poly(factors: &[(Poly, u32)]) -> Poly {
        factors.iter().fold(Poly::one(), |acc, (f, k)| acc.mul(&f.pow(*k)))
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        if self.den == other.den {
            return Scalar { num: self.num.add(&other.num), den: self.den.clone() }.canonical();
        }
        let mut common = self.den.clone();
        for (f, k) in &other.den {
            match common.iter_mut().find(|(g, _)| g == f) {
                Some(slot) => slot.1 = slot.1.max(*k),
                None => common.push((f.clone(), *k)),
            }
        }
        let cofactor = |mine: &[(Poly, u32)]| {
            let rest: Vec<(Poly, u32)> = common
                .iter()
                .map(|(f, k)| {
                    let have = mine.iter().find(|(g, _)| g == f).map_or(0, |(_, j)| *j);
                    (f.clone(), k - have)
                })
                .collect();
            Self::den_poly(&rest)
        };
        let num = self.num.mul(&cofactor(&self.den)).add(&other.num.mul(&cofactor(&other.den)));
        Scalar { num, den: common }.canonical()
    }

    pub fn neg(&self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        let mut den = self.den.clone();
        den.extend(other.den.iter().cloned());
        Scalar { num: self.num.mul(&other.num), den }.canonical()
    }

    pub fn scale(&self, c: &Cyclotomic) -> Scalar {
        Scalar { num: self.num.scale(c), den: self.den.clone() }.canonical()
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let (c, m, monic) = monic_split(&self.num).ok_or(ScalarError::DivisionByZero)?;
        let (carry, mi) = m.inv();
        let ci = c.inv().ok_or(ScalarError::DivisionByZero)?.scale(&carry);
        let num = Self::den_poly(&self.den).mul_term(&ci, &mi);
        let den = if monic.is_one() { Vec::new() } else { vec![(monic, 1)] };
        Ok(Scalar { num, den }.canonical())
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Scalar, ScalarError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        let num = base.num.pow(k);
        let den = base.den.iter().map(|(f, j)| (f.clone(), j * k)).collect();
        Ok(Scalar { num, den }.canonical())
    }

    /// Canonical p-th root: positive radical for positive rationals, minimal-argument
    /// root of unity, leading-term-driven recursion for polynomials.
    pub fn root(&self, p: u32) -> Result<Scalar, ScalarError> {
        if p == 0 {
            return Err(ScalarError::IrrationalRoot { radicand: self.to_string(), degree: p });
        }
        if p == 1 || self.is_zero() {
            return Ok(self.clone());
        }
        let fail = || ScalarError::IrrationalRoot { radicand: self.to_string(), degree: p };
        let num = if let Some((c, m)) = self.num.single_term() {
            let (rc, rad) = coeff_root(c, p).ok_or_else(fail)?;
            let (c1, mm) = m.pow(&BigRational::new(1.into(), p.into()));
            let (c2, mm) = mm.mul(&rad);
            Poly::term(rc.scale(&(c1 * c2)), mm)
        } else {
            poly_root(&self.num, p).ok_or_else(fail)?
        };
        let mut den = Vec::new();
        for (f, k) in &self.den {
            let g = (*k).gcd(&p);
            let root = p / g;
            let base = if root == 1 { f.clone() } else { poly_root(f, root).ok_or_else(fail)? };
            den.push((base, k / g));
        }
        let r = Scalar { num, den }.canonical();
        debug_assert!(r.pow(p as i64).map(|x| x == *self).unwrap_or(false));
        Ok(r)
    }

    /// Rational-exponent power m/n via root then integer power.
    pub fn pow_rational(&self, e: &BigRational) -> Result<Scalar, ScalarError> {
        let n: u32 = num::ToPrimitive::to_u32(e.denom()).ok_or(ScalarError::DivisionByZero)?;
        let m: i64 = num::ToPrimitive::to_i64(e.numer()).ok_or(ScalarError::DivisionByZero)?;
        self.root(n)?.pow(m)
    }

    /// Substitute a symbol by a scalar (used for specialization sweeps).
    pub fn substitute(&self, name: &str, value: &Scalar) -> Result<Scalar, ScalarError> {
        let sub_poly = |p: &Poly| -> Result<Scalar, ScalarError> {
            let mut acc = Scalar::zero();
            for (m, c) in p.terms() {
                let e = m.exp_of(&super::poly::Sym::Named(name.to_string()));
                let mut rest = m.exps().clone();
                rest.remove(&super::poly::Sym::Named(name.to_string()));
                let (carry, rest) = Monomial::from_raw(rest);
                let t = Scalar::from_poly(Poly::term(c.scale(&carry), rest));
                let f = if e.is_integer() {
                    value.pow(num::ToPrimitive::to_i64(e.numer()).unwrap_or(0))?
                } else {
                    value.pow_rational(&e)?
                };
                acc = acc.add(&t.mul(&f));
            }
            Ok(acc)
        };
        let mut out = sub_poly(&self.num)?;
        for (f, k) in &self.den {
            out = out.div(&sub_poly(f)?.pow(*k as i64)?)?;
        }
        Ok(out)
    }

    /// Numerator and denominator with negative exponents cleared, for rendering.
    fn presentable(&self) -> (Poly, Vec<(Poly, u32)>) {
        let mut num = self.num.clone();
        let mut den = Vec::new();
        for (f, k) in &self.den {
            let (g, shift) = f.clear_negative();
            let (c, sk) = shift.pow(&BigRational::from_integer((*k).into()));
            num = num.mul_term(&Cyclotomic::rational(c), &sk);
            den.push((g, *k));
        }
        (num, den)
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.num.cmp(&other.num).then_with(|| self.den.cmp(&other.den))
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        let (num, den) = self.presentable();
        let n = if num.len() > 1 { format!("({})", num) } else { num.to_string() };
        let parts: Vec<String> = den
            .iter()
            .map(|(g, k)| if *k == 1 { format!("({})", g) } else { format!("({})^{}", g, k) })
            .collect();
        write!(f, "{}/{}", n, parts.join("/"))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}
