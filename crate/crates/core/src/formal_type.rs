//! Formal types at a point: a regular part plus a multiset of elementary modules.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigRational, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::elementary::{DetData, ElementaryError, ElementaryModule, LaurentTail};
use crate::jordan::{jordan_items, parse_jordan, parse_jordan_items, JordanData};
use crate::scalars::{solve_columns, Cyclotomic, Eigenvalue, Monomial, Scalar};

/// Regular part plus irregular elementary summands (each with q >= 1, normalized,
/// kept sorted so that equality is multiset equality).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FormalType {
    pub regular: JordanData,
    pub irregular: Vec<ElementaryModule>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub rank: usize,
    /// slope -> number of dimensions carrying it (slope 0 included when present)
    pub slopes: BTreeMap<BigRational, usize>,
    pub irregularity: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Checks {
    pub self_dual: bool,
    pub det_trivial: bool,
}

impl FormalType {
    pub fn new(regular: JordanData, irregular: Vec<ElementaryModule>) -> Result<Self, ElementaryError> {
        let mut ft = FormalType { regular, irregular: Vec::new() };
        for e in irregular {
            ft.push_piece(e.normalize()?);
        }
        ft.irregular.sort();
        Ok(ft)
    }

    pub fn regular_only(regular: JordanData) -> Self {
        FormalType { regular, irregular: Vec::new() }
    }

    pub fn zero() -> Self {
        FormalType::default()
    }

    /// Add a normalized piece; regular pieces merge into the regular part.
    fn push_piece(&mut self, e: ElementaryModule) {
        if e.is_regular() {
            self.regular = self.regular.sum(&e.r.push(e.p));
        } else if !e.r.is_zero() {
            self.irregular.push(e);
        }
    }

    pub fn from_pieces(pieces: Vec<ElementaryModule>) -> Result<Self, ElementaryError> {
        Self::new(JordanData::zero(), pieces)
    }

    /// All summands, the regular part first as El(1, 0, R).
    pub fn pieces(&self) -> Vec<ElementaryModule> {
        let mut v = Vec::new();
        if !self.regular.is_zero() {
            v.push(ElementaryModule::regular(self.regular.clone()));
        }
        v.extend(self.irregular.iter().cloned());
        v
    }

    pub fn sum(&self, other: &FormalType) -> FormalType {
        let mut irregular = self.irregular.clone();
        irregular.extend(other.irregular.iter().cloned());
        irregular.sort();
        FormalType { regular: self.regular.sum(&other.regular), irregular }
    }

    pub fn rank(&self) -> usize {
        self.regular.rank() + self.irregular.iter().map(|e| e.rank()).sum::<usize>()
    }

    pub fn irregular_rank(&self) -> usize {
        self.irregular.iter().map(|e| e.rank()).sum()
    }

    pub fn is_regular(&self) -> bool {
        self.irregular.is_empty()
    }

    pub fn irregularity(&self) -> usize {
        self.irregular.iter().map(|e| e.irregularity()).sum()
    }

    pub fn invariants(&self) -> Invariants {
        let mut slopes = BTreeMap::new();
        if !self.regular.is_zero() {
            slopes.insert(BigRational::zero(), self.regular.rank());
        }
        for e in &self.irregular {
            *slopes.entry(e.slope()).or_insert(0) += e.rank();
        }
        Invariants { rank: self.rank(), slopes, irregularity: self.irregularity() }
    }

    /// Hom(F, G) assembled from pairwise Hom of summands.
    pub fn hom(f: &FormalType, g: &FormalType) -> Result<FormalType, ElementaryError> {
        let mut out = FormalType::zero();
        for a in f.pieces() {
            for b in g.pieces() {
                for e in ElementaryModule::hom(&a, &b)? {
                    out.push_piece(e);
                }
            }
        }
        out.irregular.sort();
        Ok(out)
    }

    pub fn end(&self) -> Result<FormalType, ElementaryError> {
        Self::hom(self, self)
    }

    pub fn tensor(f: &FormalType, g: &FormalType) -> Result<FormalType, ElementaryError> {
        Self::hom(&f.dual()?, g)
    }

    /// Horizontal sections: eigenvalue-1 blocks of the regular part.
    pub fn soln_dim(&self) -> usize {
        self.regular.invariants_dim()
    }

    pub fn dual(&self) -> Result<FormalType, ElementaryError> {
        let irregular = self.irregular.iter().map(|e| e.dual()).collect::<Result<Vec<_>, _>>()?;
        FormalType::new(self.regular.dual(), irregular)
    }

    pub fn det(&self) -> DetData {
        let base = DetData { tail: LaurentTail::zero(), eigenvalue: self.regular.det() };
        self.irregular.iter().fold(base, |acc, e| acc.mul(&e.det()))
    }

    pub fn checks(&self) -> Result<Checks, ElementaryError> {
        Ok(Checks { self_dual: self.dual()? == *self, det_trivial: self.det().is_trivial() })
    }

    /// Formal monodromy: push(R, p) of every summand together with the regular part.
    pub fn formal_monodromy(&self) -> JordanData {
        let mut m = self.regular.clone();
        for e in &self.irregular {
            m = m.sum(&e.r.push(e.p));
        }
        m
    }

    /// Rank of the lattice spanned by the Galois conjugates of the exponential tails.
    pub fn exponential_torus_dim(&self) -> Result<usize, ElementaryError> {
        let mut vectors: Vec<Vec<(i64, u32, Scalar)>> = Vec::new();
        for e in &self.irregular {
            for j in 0..e.p {
                let conj = e.phi.rescale(&Scalar::zeta(e.p, j as i64))?;
                vectors.push(conj.terms().iter().map(|(k, a)| (*k, e.p, a.clone())).collect());
            }
        }
        Ok(rational_rank(&vectors))
    }

    /// Third exterior power, for summands of rank at most 3 (multi-block
    /// semisimple regular parts of elementary summands are split first).
    pub fn exterior_cube(&self) -> Result<FormalType, ElementaryError> {
        let mut pieces: Vec<ElementaryModule> = Vec::new();
        if !self.regular.is_zero() {
            pieces.push(ElementaryModule::regular(self.regular.clone()));
        }
        for e in &self.irregular {
            if e.rank() <= 3 {
                pieces.push(e.clone());
                continue;
            }
            if e.r.blocks().len() > 1 {
                for (l, b) in e.r.blocks() {
                    let part = ElementaryModule { r: JordanData::block(l.clone(), *b), ..e.clone() };
                    if part.rank() > 3 {
                        return Err(ElementaryError::Unsupported(format!("exterior cube of {}", part)));
                    }
                    pieces.push(part);
                }
            } else {
                return Err(ElementaryError::Unsupported(format!("exterior cube of {}", e)));
            }
        }
        let mut out = FormalType::zero();
        let mut degrees = vec![0usize; pieces.len()];
        distribute(3, 0, &mut degrees, &pieces, &mut |deg| -> Result<(), ElementaryError> {
            let mut acc = FormalType::regular_only(JordanData::identity(1));
            for (piece, a) in pieces.iter().zip(deg) {
                if *a == 0 {
                    continue;
                }
                let ext = exterior_piece(piece, *a)?;
                acc = FormalType::tensor(&acc, &ext)?;
            }
            out = out.sum(&acc);
            Ok(())
        })?;
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "regular": jordan_items(&self.regular),
            "irregular": self.irregular.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, ElementaryError> {
        let bad = |m: &str| ElementaryError::Parse(m.to_string());
        let items: Vec<String> = match v.get("regular") {
            Some(Value::Array(a)) => a
                .iter()
                .map(|x| x.as_str().map(str::to_string).ok_or_else(|| bad("regular items must be strings")))
                .collect::<Result<_, _>>()?,
            Some(Value::String(s)) => vec![s.clone()],
            None => Vec::new(),
            _ => return Err(bad("regular must be a list")),
        };
        let regular = if items.len() == 1 && items[0].trim_start().starts_with('(') {
            parse_jordan(&items[0])?
        } else {
            parse_jordan_items(&items)?
        };
        let irregular = match v.get("irregular") {
            Some(Value::Array(a)) => a.iter().map(ElementaryModule::from_json).collect::<Result<Vec<_>, _>>()?,
            None => Vec::new(),
            _ => return Err(bad("irregular must be a list")),
        };
        FormalType::new(regular, irregular)
    }

    /// `El(2, a1/u, (l, l^-1)) + El(2, 2*a1/u, (1)) + (-1)`
    pub fn parse(s: &str) -> Result<Self, ElementaryError> {
        let mut regular = JordanData::zero();
        let mut irregular = Vec::new();
        for part in split_plus(s) {
            let t = part.trim();
            if t.is_empty() {
                continue;
            }
            if t.starts_with("El(") {
                irregular.push(ElementaryModule::parse(t)?);
            } else {
                regular = regular.sum(&parse_jordan(t)?);
            }
        }
        FormalType::new(regular, irregular)
    }
}

fn split_plus(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn distribute<F>(
    left: usize,
    at: usize,
    deg: &mut Vec<usize>,
    pieces: &[ElementaryModule],
    f: &mut F,
) -> Result<(), ElementaryError>
where
    F: FnMut(&[usize]) -> Result<(), ElementaryError>,
{
    if at == pieces.len() {
        return if left == 0 { f(deg) } else { Ok(()) };
    }
    let cap = left.min(pieces[at].rank());
    for a in 0..=cap {
        deg[at] = a;
        distribute(left - a, at + 1, deg, pieces, f)?;
    }
    deg[at] = 0;
    Ok(())
}

fn det_module(d: &DetData) -> Result<ElementaryModule, ElementaryError> {
    ElementaryModule::new(1, d.tail.clone(), JordanData::block(d.eigenvalue.clone(), 1))
}

/// Λ^a of a single summand.
fn exterior_piece(e: &ElementaryModule, a: usize) -> Result<FormalType, ElementaryError> {
    let n = e.rank();
    if e.is_regular() {
        return Ok(FormalType::regular_only(e.r.push(e.p).exterior(a)?));
    }
    let single = FormalType::from_pieces(vec![e.clone()])?;
    if a == 1 {
        return Ok(single);
    }
    let det = FormalType::from_pieces(vec![det_module(&e.det())?])?;
    if a == n {
        return Ok(det);
    }
    if a + 1 == n {
        return FormalType::tensor(&single.dual()?, &det);
    }
    Err(ElementaryError::Unsupported(format!("exterior power {} of {}", a, e)))
}

/// Q-rank of tail vectors whose coordinates are (exponent k/p, monomial,
/// cyclotomic basis index).
fn rational_rank(vectors: &[Vec<(i64, u32, Scalar)>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    // common denominator for all coefficients
    let mut den = Scalar::one();
    let mut seen: Vec<(crate::scalars::Poly, u32)> = Vec::new();
    for v in vectors {
        for (_, _, a) in v {
            for (f, k) in a.denominator_factors() {
                match seen.iter_mut().find(|(g, _)| g == f) {
                    Some(slot) => slot.1 = slot.1.max(*k),
                    None => seen.push((f.clone(), *k)),
                }
            }
        }
    }
    for (f, k) in &seen {
        den = den.mul(&Scalar::from_poly(f.pow(*k)));
    }
    let mut order = 1u32;
    let mut rows: Vec<BTreeMap<(BigRational, Monomial), Cyclotomic>> = Vec::new();
    for v in vectors {
        let mut row = BTreeMap::new();
        for (k, p, a) in v {
            let x = a.mul(&den);
            let exp = BigRational::new((*k).into(), (*p as i64).into());
            for (m, c) in x.numerator().terms() {
                order = num::integer::lcm(order, c.order());
                let key = (exp.clone(), m.clone());
                let entry: &mut Cyclotomic = row.entry(key).or_insert_with(Cyclotomic::zero);
                *entry = entry.add(c);
            }
        }
        rows.push(row);
    }
    let mut keys: Vec<(BigRational, Monomial)> = rows.iter().flat_map(|r| r.keys().cloned()).collect();
    keys.sort();
    keys.dedup();
    let dim = crate::scalars::euler_phi(order);
    let cols: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            let mut v = Vec::with_capacity(keys.len() * dim);
            for k in &keys {
                let c = r.get(k).cloned().unwrap_or_else(Cyclotomic::zero);
                v.extend(c.coords_in(order));
            }
            v
        })
        .collect();
    matrix_rank(&cols)
}

/// Rank of a set of rational vectors.
pub(crate) fn matrix_rank(vectors: &[Vec<BigRational>]) -> usize {
    let mut basis: Vec<Vec<BigRational>> = Vec::new();
    for v in vectors {
        if v.iter().all(|x| x.is_zero()) {
            continue;
        }
        if basis.is_empty() || solve_columns(&basis, v).is_none() {
            basis.push(v.clone());
        }
    }
    basis.len()
}

/// Nearby/vanishing cycle counts keyed by (tail, eigenvalue, level).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalData {
    pub finite: bool,
    pub rank: usize,
    /// (ramification, tail, eigenvalue, level) -> count
    pub counts: BTreeMap<(u32, LaurentTail, Eigenvalue, u32), usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointKind {
    Finite,
    Infinite,
}

/// Vanishing-cycle data of the regular part at a finite point:
/// blocks (l, b) with l != 1 stay, unipotent blocks shrink by one.
pub fn vanishing_regular(monodromy: &JordanData) -> JordanData {
    JordanData::new(
        monodromy
            .blocks()
            .iter()
            .map(|(l, b)| if l.is_one() { (l.clone(), b - 1) } else { (l.clone(), *b) })
            .collect(),
    )
}

/// Inverse of [`vanishing_regular`]: grow unipotent blocks by one and pad with
/// trivial blocks up to `rank`. Returns None when the data does not fit.
pub fn monodromy_from_vanishing(vanishing: &JordanData, rank: usize) -> Option<JordanData> {
    let grown = JordanData::new(
        vanishing
            .blocks()
            .iter()
            .map(|(l, b)| if l.is_one() { (l.clone(), b + 1) } else { (l.clone(), *b) })
            .collect(),
    );
    let filler = rank.checked_sub(grown.rank())?;
    Some(grown.sum(&JordanData::identity(filler as u32)))
}

impl LocalData {
    pub fn from_formal_type(f: &FormalType, kind: PointKind) -> Self {
        let regular = match kind {
            PointKind::Finite => vanishing_regular(&f.regular),
            PointKind::Infinite => f.regular.clone(),
        };
        let mut counts = BTreeMap::new();
        for (l, b) in regular.blocks() {
            *counts.entry((1, LaurentTail::zero(), l.clone(), b - 1)).or_insert(0) += 1;
        }
        for e in &f.irregular {
            for (l, b) in e.r.blocks() {
                *counts.entry((e.p, e.phi.clone(), l.clone(), b - 1)).or_insert(0) += e.p as usize;
            }
        }
        LocalData { finite: kind == PointKind::Finite, rank: f.rank(), counts }
    }

    pub fn to_formal_type(&self) -> Result<FormalType, ElementaryError> {
        let mut regular = Vec::new();
        let mut pieces: BTreeMap<(u32, LaurentTail), Vec<(Eigenvalue, u32)>> = BTreeMap::new();
        for ((p, phi, l, level), n) in &self.counts {
            if phi.is_zero() {
                regular.extend((0..*n).map(|_| (l.clone(), level + 1)));
            } else {
                if n % *p as usize != 0 {
                    return Err(ElementaryError::Parse("nearby count not divisible by ramification".into()));
                }
                pieces.entry((*p, phi.clone())).or_default().extend((0..n / *p as usize).map(|_| (l.clone(), level + 1)));
            }
        }
        let mut regular = JordanData::new(regular);
        let irregular: Vec<ElementaryModule> = pieces
            .into_iter()
            .map(|((p, phi), blocks)| ElementaryModule { p, c: Scalar::one(), phi, r: JordanData::new(blocks) })
            .collect();
        if self.finite {
            let irr_rank: usize = irregular.iter().map(|e| e.rank()).sum();
            let room = self.rank.checked_sub(irr_rank);
            regular = room
                .and_then(|r| monodromy_from_vanishing(&regular, r))
                .ok_or_else(|| ElementaryError::Parse("negative filler after level shift".into()))?;
        }
        FormalType::new(regular, irregular)
    }
}

fn fmt_list(f: &FormalType) -> String {
    let mut parts: Vec<String> = f.irregular.iter().map(|e| e.to_string()).collect();
    if !f.regular.is_zero() || parts.is_empty() {
        parts.push(f.regular.to_string());
    }
    parts.join(" + ")
}

impl fmt::Display for FormalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_list(self))
    }
}

impl fmt::Debug for FormalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Convert a rational slope to (q, p).
pub fn slope_parts(s: &BigRational) -> (u32, u32) {
    (s.numer().to_u32().unwrap_or(0), s.denom().to_u32().unwrap_or(1))
}

/// Convenience for tests and tables: eigenvalue multiset of the formal monodromy.
pub fn monodromy_eigenvalues(f: &FormalType) -> Vec<Eigenvalue> {
    f.formal_monodromy().eigenvalues()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ft(s: &str) -> FormalType {
        FormalType::parse(s).unwrap()
    }

    #[test]
    fn invariants_of_sextic_type() {
        let f = ft("El(6, a1/u, (1)) + (-1)");
        let inv = f.invariants();
        assert_eq!(inv.rank, 7);
        assert_eq!(inv.irregularity, 1);
        assert_eq!(inv.slopes[&BigRational::new(1.into(), 6.into())], 6);
        let f = ft("El(2, a1/u, (l, l^-1)) + El(2, 2*a1/u, (1)) + (-1)");
        assert_eq!((f.rank(), f.irregularity()), (7, 3));
    }

    #[test]
    fn end_values() {
        let e4 = ft("El(6, a1/u, (1)) + (-1)");
        let end = e4.end().unwrap();
        assert_eq!(end.rank(), 49);
        assert_eq!((end.irregularity(), end.soln_dim()), (7, 2));
        let e1 = ft("El(2, a1/u, (l, l^-1)) + El(2, 2*a1/u, (1)) + (-1)");
        let end = e1.end().unwrap();
        assert_eq!((end.irregularity(), end.soln_dim()), (19, 4));
        let e2 = ft("El(2, a1/u, (1)) + El(2, a2/u, (1)) + El(2, (a1 + a2)/u, (1)) + (-1)");
        let end = e2.end().unwrap();
        assert_eq!((end.irregularity(), end.soln_dim()), (21, 4));
        let reg = ft("(J(3), J(3), 1)");
        assert_eq!(reg.end().unwrap().soln_dim(), 17);
        assert_eq!(ft("(l)").end().unwrap(), ft("(1)"));
    }

    #[test]
    fn checks() {
        let e1 = ft("El(2, a1/u, (l, l^-1)) + El(2, 2*a1/u, (1)) + (-1)");
        assert_eq!(e1.checks().unwrap(), Checks { self_dual: true, det_trivial: true });
        let lone = ft("El(1, a/u, (m))");
        assert_eq!(lone.checks().unwrap(), Checks { self_dual: false, det_trivial: false });
        assert_eq!(ft("(xE2, x^-1E2, E3)").checks().unwrap(), Checks { self_dual: true, det_trivial: true });
    }

    #[test]
    fn formal_monodromy_patterns() {
        let f = ft("El(2, a/u, (E2)) + (J(2), 1)");
        assert_eq!(f.formal_monodromy(), parse_jordan("(E2, -E2, J(2), 1)").unwrap());
        let f = ft("El(2, a/u, (-E2)) + (J(2), 1)");
        assert_eq!(f.formal_monodromy(), parse_jordan("(iE2, -iE2, J(2), 1)").unwrap());
    }

    #[test]
    fn torus_dimensions() {
        assert_eq!(ft("El(6, a3/u^3 + a1/u, (1))").exponential_torus_dim().unwrap(), 3);
        assert_eq!(ft("El(1, a/u, (1))").exponential_torus_dim().unwrap(), 1);
        assert_eq!(ft("El(3, a3/u^3 + a2/u^2 + a1/u, (1))").exponential_torus_dim().unwrap(), 3);
        let e1 = ft("El(2, a1/u, (l, l^-1)) + El(2, 2*a1/u, (1)) + (-1)");
        assert_eq!(e1.exponential_torus_dim().unwrap(), 1);
        let e2 = ft("El(2, a1/u, (1)) + El(2, a2/u, (1)) + El(2, (a1 + a2)/u, (1)) + (-1)");
        assert_eq!(e2.exponential_torus_dim().unwrap(), 2);
    }

    #[test]
    fn exterior_cubes() {
        let e2 = ft("El(2, a1/u, (1)) + El(2, a2/u, (1)) + El(2, (a1 + a2)/u, (1)) + (-1)");
        let l3 = e2.exterior_cube().unwrap();
        assert_eq!(l3.rank(), 35);
        assert_eq!((l3.irregularity(), l3.soln_dim()), (15, 4));
        let e1 = ft("El(2, a1/u, (l, l^-1)) + El(2, 2*a1/u, (1)) + (-1)");
        let l3 = e1.exterior_cube().unwrap();
        assert_eq!(l3.rank(), 35);
        // 7 of the 35 exponent triples from {±a, ±a, ±2a, 0} sum to zero: irr = 28/2
        assert_eq!(l3.irregularity(), 14);
        assert!(l3.soln_dim() >= 1);
        assert_eq!(ft("(x, y, z)").exterior_cube().unwrap(), ft("(x*y*z)"));
    }

    #[test]
    fn local_data_round_trip() {
        for s in ["(J(2), J(2), E3)", "(-E4, E3)", "El(2, a/u, (l)) + (J(3), 1)"] {
            let f = ft(s);
            for kind in [PointKind::Finite, PointKind::Infinite] {
                let ld = LocalData::from_formal_type(&f, kind);
                assert_eq!(ld.to_formal_type().unwrap(), f, "{} {:?}", s, kind);
            }
        }
        let ld = LocalData::from_formal_type(&ft("(-E4, E3)"), PointKind::Finite);
        let minus: usize = ld.counts.iter().filter(|(k, _)| k.2 == Eigenvalue::minus_one() && k.3 == 0).map(|(_, n)| n).sum();
        assert_eq!(minus, 4);
        assert_eq!(vanishing_regular(&parse_jordan("(J(2), J(2), E3)").unwrap()), parse_jordan("(E2)").unwrap());
    }

    #[test]
    fn text_and_json() {
        let f = ft("El(2, a1/u, (l, l^-1)) + El(2, 2*a1/u, (1)) + (-1)");
        assert_eq!(FormalType::from_json(&f.to_json()).unwrap(), f);
        assert_eq!(FormalType::parse(&f.to_string()).unwrap(), f);
    }
}
