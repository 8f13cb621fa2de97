//! Jordan data of regular formal connections: multisets of (eigenvalue, block size).

use std::collections::BTreeMap;
use std::fmt;

use num::BigRational;
use thiserror::Error;

use crate::scalars::{parse_eigenvalue, Eigenvalue, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JordanError {
    #[error("exterior power {k} exceeds rank {rank}")]
    ExteriorTooLarge { k: usize, rank: usize },
    #[error("character of eigenvalue {0} does not decompose into Jordan blocks")]
    NegativeMultiplicity(String),
    #[error("malformed Jordan item '{item}': {msg}")]
    Parse { item: String, msg: String },
}

impl From<ScalarError> for JordanError {
    fn from(e: ScalarError) -> Self {
        JordanError::Parse { item: String::new(), msg: e.to_string() }
    }
}

/// Multiset of Jordan blocks, kept sorted by eigenvalue then size descending.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct JordanData {
    blocks: Vec<(Eigenvalue, u32)>,
}

impl JordanData {
    pub fn new(mut blocks: Vec<(Eigenvalue, u32)>) -> Self {
        blocks.retain(|(_, b)| *b > 0);
        blocks.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        JordanData { blocks }
    }

    pub fn zero() -> Self {
        JordanData { blocks: Vec::new() }
    }

    /// One block of size `b` with eigenvalue `l`.
    pub fn block(l: Eigenvalue, b: u32) -> Self {
        Self::new(vec![(l, b)])
    }

    /// `l` times the identity of size n.
    pub fn scalar(l: Eigenvalue, n: u32) -> Self {
        Self::new((0..n).map(|_| (l.clone(), 1)).collect())
    }

    pub fn identity(n: u32) -> Self {
        Self::scalar(Eigenvalue::one(), n)
    }

    pub fn semisimple(eigs: impl IntoIterator<Item = Eigenvalue>) -> Self {
        Self::new(eigs.into_iter().map(|e| (e, 1)).collect())
    }

    pub fn blocks(&self) -> &[(Eigenvalue, u32)] {
        &self.blocks
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.blocks.iter().map(|(_, b)| *b as usize).sum()
    }

    pub fn is_semisimple(&self) -> bool {
        self.blocks.iter().all(|(_, b)| *b == 1)
    }

    /// Eigenvalues with algebraic multiplicity.
    pub fn eigenvalues(&self) -> Vec<Eigenvalue> {
        self.blocks.iter().flat_map(|(l, b)| std::iter::repeat(l.clone()).take(*b as usize)).collect()
    }

    pub fn sum(&self, other: &JordanData) -> JordanData {
        let mut v = self.blocks.clone();
        v.extend(other.blocks.iter().cloned());
        Self::new(v)
    }

    pub fn sum_all<'a>(parts: impl IntoIterator<Item = &'a JordanData>) -> JordanData {
        parts.into_iter().fold(JordanData::zero(), |acc, j| acc.sum(j))
    }

    /// Multiply every eigenvalue by `l`.
    pub fn twist(&self, l: &Eigenvalue) -> JordanData {
        Self::new(self.blocks.iter().map(|(e, b)| (e.mul(l), *b)).collect())
    }

    pub fn map_eigenvalues(&self, f: impl Fn(&Eigenvalue) -> Eigenvalue) -> JordanData {
        Self::new(self.blocks.iter().map(|(e, b)| (f(e), *b)).collect())
    }

    /// Σ over ordered pairs of blocks with equal eigenvalue of min(size).
    pub fn centralizer_dim(&self) -> usize {
        let mut total = 0;
        for (l1, b1) in &self.blocks {
            for (l2, b2) in &self.blocks {
                if l1 == l2 {
                    total += (*b1).min(*b2) as usize;
                }
            }
        }
        total
    }

    pub fn invariants_dim(&self) -> usize {
        self.blocks.iter().filter(|(l, _)| l.is_one()).count()
    }

    pub fn dual(&self) -> JordanData {
        Self::new(self.blocks.iter().map(|(l, b)| (l.inv(), *b)).collect())
    }

    pub fn det(&self) -> Eigenvalue {
        self.blocks.iter().fold(Eigenvalue::one(), |acc, (l, b)| acc.mul(&l.powi(*b as i64)))
    }

    /// Clebsch-Gordan: J_a ⊗ J_b = ⊕_{k<min(a,b)} J_{a+b-1-2k}.
    pub fn tensor(&self, other: &JordanData) -> JordanData {
        let mut out = Vec::new();
        for (l1, a) in &self.blocks {
            for (l2, b) in &other.blocks {
                let l = l1.mul(l2);
                for k in 0..(*a).min(*b) {
                    out.push((l.clone(), a + b - 1 - 2 * k));
                }
            }
        }
        Self::new(out)
    }

    /// Monodromy along the degree-p loop: T -> T^p.
    pub fn pull(&self, p: u32) -> JordanData {
        Self::new(self.blocks.iter().map(|(l, b)| (l.powi(p as i64), *b)).collect())
    }

    /// Monodromy of the pushforward: T^{1/p} ⊗ P_p.
    pub fn push(&self, p: u32) -> JordanData {
        let r = BigRational::new(1.into(), (p as i64).into());
        let mut out = Vec::new();
        for (l, b) in &self.blocks {
            let root = l.pow(&r);
            for j in 0..p {
                out.push((root.mul(&Eigenvalue::root_of_unity(j as i64, p as i64)), *b));
            }
        }
        Self::new(out)
    }

    /// Graded character: eigenvalue -> (q-degree -> multiplicity).
    fn character(&self) -> Vec<(Eigenvalue, i64)> {
        let mut letters = Vec::new();
        for (l, b) in &self.blocks {
            for j in 0..*b {
                letters.push((l.clone(), *b as i64 - 1 - 2 * j as i64));
            }
        }
        letters
    }

    /// k-th exterior power via elementary symmetric functions of the graded letters.
    pub fn exterior(&self, k: usize) -> Result<JordanData, JordanError> {
        let rank = self.rank();
        if k > rank {
            return Err(JordanError::ExteriorTooLarge { k, rank });
        }
        let letters = self.character();
        // layers[j]: (eigenvalue, degree) -> multiplicity of e_j terms
        let mut layers: Vec<BTreeMap<(Eigenvalue, i64), i64>> = vec![BTreeMap::new(); k + 1];
        layers[0].insert((Eigenvalue::one(), 0), 1);
        for (l, d) in &letters {
            for j in (1..=k).rev() {
                let prev: Vec<((Eigenvalue, i64), i64)> =
                    layers[j - 1].iter().map(|(key, m)| (key.clone(), *m)).collect();
                for ((e, deg), m) in prev {
                    *layers[j].entry((e.mul(l), deg + d)).or_insert(0) += m;
                }
            }
        }
        decompose_character(std::mem::take(&mut layers[k]))
    }
}

/// Greedy decomposition of an eigenvalue-graded sl2 character into Jordan blocks.
pub(crate) fn decompose_character(mut chr: BTreeMap<(Eigenvalue, i64), i64>) -> Result<JordanData, JordanError> {
    let mut out = Vec::new();
    loop {
        chr.retain(|_, m| *m != 0);
        if let Some(((l, _), m)) = chr.iter().find(|(_, m)| **m < 0) {
            let _ = m;
            return Err(JordanError::NegativeMultiplicity(l.to_string()));
        }
        // highest degree overall
        let Some(((l, d), m)) = chr.iter().max_by_key(|((_, d), _)| *d).map(|(k, m)| (k.clone(), *m)) else {
            break;
        };
        if d < 0 {
            return Err(JordanError::NegativeMultiplicity(l.to_string()));
        }
        for j in 0..=d {
            let key = (l.clone(), d - 2 * j);
            *chr.entry(key).or_insert(0) -= m;
        }
        for _ in 0..m {
            out.push((l.clone(), (d + 1) as u32));
        }
    }
    Ok(JordanData::new(out))
}

fn fmt_prefix(l: &Eigenvalue) -> String {
    if l.is_one() {
        String::new()
    } else if *l == Eigenvalue::minus_one() {
        "-".into()
    } else {
        l.to_string()
    }
}

impl JordanData {
    /// Rendered items; runs of equal size-1 blocks merge into `lEn`.
    fn items(&self) -> Vec<String> {
        let mut items = Vec::new();
        let mut i = 0;
        while i < self.blocks.len() {
            let (l, b) = &self.blocks[i];
            if *b == 1 {
                let mut n = 0;
                while i + n < self.blocks.len() && self.blocks[i + n] == (l.clone(), 1) {
                    n += 1;
                }
                items.push(if n == 1 { l.to_string() } else { format!("{}E{}", fmt_prefix(l), n) });
                i += n;
            } else {
                items.push(format!("{}J({})", fmt_prefix(l), b));
                i += 1;
            }
        }
        items
    }
}

impl fmt::Display for JordanData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items = self.items();
        if items.len() == 1 {
            return write!(f, "{}", items[0]);
        }
        write!(f, "({})", items.join(", "))
    }
}

impl fmt::Debug for JordanData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Parse one item: `xJ(2)`, `-E2`, `J(3)`, `l^-1`, `1`.
pub fn parse_jordan_item(item: &str) -> Result<JordanData, JordanError> {
    let s = item.trim();
    let bad = |msg: &str| JordanError::Parse { item: s.to_string(), msg: msg.to_string() };
    let eig = |prefix: &str| -> Result<Eigenvalue, JordanError> {
        let p = prefix.trim();
        if p.is_empty() {
            Ok(Eigenvalue::one())
        } else {
            parse_eigenvalue(p).map_err(|e| JordanError::Parse { item: s.to_string(), msg: e.to_string() })
        }
    };
    if let Some(rest) = s.strip_suffix(')') {
        if let Some(at) = rest.rfind("J(") {
            let n: u32 = rest[at + 2..].trim().parse().map_err(|_| bad("block size"))?;
            if n == 0 {
                return Err(bad("block size 0"));
            }
            return Ok(JordanData::block(eig(&s[..at])?, n));
        }
    }
    if let Some(at) = s.rfind('E') {
        let digits = &s[at + 1..];
        if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) {
            let n: u32 = digits.parse().map_err(|_| bad("identity size"))?;
            return Ok(JordanData::scalar(eig(&s[..at])?, n));
        }
    }
    if s.is_empty() {
        return Err(bad("empty item"));
    }
    Ok(JordanData::block(eig(s)?, 1))
}

/// Split on commas outside parentheses.
pub fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Parse `(xJ(2), x^-1J(2), J(3))` or a bare item list.
pub fn parse_jordan(s: &str) -> Result<JordanData, JordanError> {
    let t = s.trim();
    let inner = if t.starts_with('(') && t.ends_with(')') && balanced(&t[1..t.len() - 1]) {
        &t[1..t.len() - 1]
    } else {
        t
    };
    if inner.trim().is_empty() {
        return Ok(JordanData::zero());
    }
    let mut acc = JordanData::zero();
    for item in split_top(inner) {
        acc = acc.sum(&parse_jordan_item(item)?);
    }
    Ok(acc)
}

fn balanced(s: &str) -> bool {
    let mut d = 0i32;
    for c in s.chars() {
        match c {
            '(' => d += 1,
            ')' => {
                d -= 1;
                if d < 0 {
                    return false;
                }
            }
            _ => {}
        }
    }
    d == 0
}

/// Items for JSON: one string per rendered item.
pub fn jordan_items(j: &JordanData) -> Vec<String> {
    j.items()
}

pub fn parse_jordan_items(items: &[String]) -> Result<JordanData, JordanError> {
    let mut acc = JordanData::zero();
    for it in items {
        acc = acc.sum(&parse_jordan_item(it)?);
    }
    Ok(acc)
}
