//! Enumeration and verification drivers for the rank-7 G2 classification:
//! slope profiles, local End invariants per profile, rigidity tuples, and
//! checks on the final list of formal types.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::BigRational;

use crate::elementary::{ElementaryError, ElementaryModule, LaurentTail};
use crate::engine::{
    euler_char_middle, exterior_cube_family, rigidity_index, ConnectionDescriptor, EngineError, EulerTerms, Location,
};
use crate::formal_type::FormalType;
use crate::jordan::JordanData;
use crate::scalars::{Eigenvalue, Scalar};

/// Rank of the standard representation.
pub const RANK: usize = 7;

/// Ramification degrees allowed for irregular summands.
pub const RAMIFICATIONS: [u32; 5] = [1, 2, 3, 4, 6];

/// dim Z(g) in GL7 for the nontrivial classes g of G2 (conjugacy class
/// table of the regular case); these are the admissible dim Soln(End) at a
/// finite regular singular point.
pub const REGULAR_SOLN: [usize; 8] = [7, 9, 11, 13, 17, 19, 25, 29];

/// Invariants of the adjoint representation at the regular point, for the
/// excluded type and for the E2 family it shares its infinity with.
pub const ADJOINT_INVARIANTS_EXCLUDED: usize = 8;
pub const ADJOINT_INVARIANTS_E2: usize = 6;

/// Irregular part of a formal type: slope 1/p on `dim` dimensions, for each
/// part. Parts are sorted by increasing slope.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SlopeProfile {
    pub parts: Vec<(u32, usize)>,
}

impl SlopeProfile {
    fn new(mut parts: Vec<(u32, usize)>) -> Self {
        parts.sort_by(|a, b| b.0.cmp(&a.0));
        SlopeProfile { parts }
    }

    pub fn irregular_dim(&self) -> usize {
        self.parts.iter().map(|(_, d)| d).sum()
    }

    pub fn regular_dim(&self) -> usize {
        RANK - self.irregular_dim()
    }

    pub fn slopes(&self) -> Vec<BigRational> {
        self.parts.iter().map(|(p, _)| BigRational::new(1.into(), (*p as i64).into())).collect()
    }
}

impl fmt::Display for SlopeProfile {
    /// `1/2,1;2,4`: slopes, then dimensions.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.slopes().iter().map(|s| s.to_string()).collect();
        let d: Vec<String> = self.parts.iter().map(|(_, d)| d.to_string()).collect();
        write!(f, "{};{}", s.join(","), d.join(","))
    }
}

/// Slope profiles of an irregular rank-7 G2 formal type with slopes at most one.
///
/// Slopes are 1/p. A self-dual part of odd ramification p comes in dual
/// pairs, so its dimension is a multiple of 2p; for even p a multiple of p.
/// The regular part has dimension 1, 3 or 7, so the irregular part fills 4
/// or 6 dimensions. When the highest slope 1/b carries exactly b dimensions,
/// b must be 6.
pub fn enumerate_slope_profiles() -> Vec<SlopeProfile> {
    fn dims(p: u32) -> Vec<usize> {
        let step = if p % 2 == 1 { 2 * p } else { p } as usize;
        (0..=6).step_by(step).collect()
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; RAMIFICATIONS.len()];
    fn rec(i: usize, choice: &mut Vec<usize>, out: &mut Vec<SlopeProfile>) {
        if i == RAMIFICATIONS.len() {
            let parts: Vec<(u32, usize)> =
                RAMIFICATIONS.iter().zip(choice.iter()).filter(|(_, d)| **d > 0).map(|(p, d)| (*p, *d)).collect();
            let total: usize = parts.iter().map(|(_, d)| d).sum();
            if total != 4 && total != 6 {
                return;
            }
            let (b, mult) = *parts.iter().min_by_key(|(p, _)| *p).unwrap();
            if mult == b as usize && b != 6 {
                return;
            }
            out.push(SlopeProfile::new(parts));
            return;
        }
        for d in dims(RAMIFICATIONS[i]) {
            choice[i] = d;
            rec(i + 1, choice, out);
        }
        choice[i] = 0;
    }
    rec(0, &mut choice, &mut out);
    out.sort();
    out
}

/// Candidate local formal type at an irregular point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateShape {
    /// (p, q, rank R) per elementary summand
    pub summands: Vec<(u32, u32, usize)>,
    pub regular_rank: usize,
    pub formal_type: FormalType,
}

impl CandidateShape {
    fn from_type(ft: FormalType) -> Self {
        let summands = ft.irregular.iter().map(|e| (e.p, e.q(), e.r.rank())).collect();
        CandidateShape { summands, regular_rank: ft.regular.rank(), formal_type: ft }
    }

    pub fn profile(&self) -> SlopeProfile {
        let mut parts: BTreeMap<u32, usize> = BTreeMap::new();
        for (p, q, r) in &self.summands {
            // slope q/p with q | p or q = p: stored as 1/(p/q)
            *parts.entry(p / q).or_default() += (*p as usize) * r;
        }
        SlopeProfile::new(parts.into_iter().collect())
    }
}

/// Eigenvalues used to instantiate regular parts: three independent symbols
/// with inverses and the torsion values of order at most 4.
pub fn eigenvalue_pool() -> Vec<Eigenvalue> {
    let mut pool = vec![Eigenvalue::one(), Eigenvalue::minus_one()];
    for s in ["x", "y", "z"] {
        let e = Eigenvalue::symbol(s);
        pool.push(e.inv());
        pool.push(e);
    }
    pool.push(Eigenvalue::root_of_unity(1, 4));
    pool.push(Eigenvalue::root_of_unity(3, 4));
    pool
}

/// All Jordan data of rank n with eigenvalues from `pool`.
fn jordan_types(n: usize, pool: &[Eigenvalue]) -> Vec<JordanData> {
    fn rec(rem: usize, start: usize, pool: &[Eigenvalue], cur: &mut Vec<(Eigenvalue, u32)>, out: &mut BTreeSet<JordanData>) {
        if rem == 0 {
            out.insert(JordanData::new(cur.clone()));
            return;
        }
        for i in start..pool.len() {
            for b in 1..=rem {
                cur.push((pool[i].clone(), b as u32));
                rec(rem - b, i, pool, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    rec(n, 0, pool, &mut Vec::new(), &mut out);
    out.into_iter().collect()
}

fn self_dual_types(n: usize, pool: &[Eigenvalue]) -> Vec<JordanData> {
    jordan_types(n, pool).into_iter().filter(|j| j.dual() == *j).collect()
}

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for k in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - k, k) {
            rest.insert(0, k);
            out.push(rest);
        }
    }
    out
}

/// Choices of one option per slot, where equal slots take nondecreasing
/// option indices so permuted duplicates are skipped.
fn slot_choices(slots: &[usize], options: &BTreeMap<usize, Vec<JordanData>>) -> Vec<Vec<JordanData>> {
    let mut out = Vec::new();
    fn rec(
        i: usize,
        slots: &[usize],
        options: &BTreeMap<usize, Vec<JordanData>>,
        idx: &mut Vec<usize>,
        out: &mut Vec<Vec<JordanData>>,
    ) {
        if i == slots.len() {
            out.push(idx.iter().zip(slots).map(|(j, k)| options[k][*j].clone()).collect());
            return;
        }
        let start = if i > 0 && slots[i - 1] == slots[i] { idx[i - 1] } else { 0 };
        for j in start..options[&slots[i]].len() {
            idx.push(j);
            rec(i + 1, slots, options, idx, out);
            idx.pop();
        }
    }
    rec(0, slots, options, &mut Vec::new(), &mut out);
    out
}

fn simple(p: u32, a: Scalar, r: JordanData) -> Result<ElementaryModule, ElementaryError> {
    ElementaryModule::simple(p, a, r)
}

/// Options for the summands of ramification p on `dim` dimensions, with q = 1
/// and a fresh tail symbol per class of conjugate tails.
fn part_options(p: u32, dim: usize, counter: &mut usize, pool: &[Eigenvalue]) -> Result<Vec<Vec<ElementaryModule>>, ElementaryError> {
    let n = dim / p as usize;
    let odd = p % 2 == 1;
    let classes = if odd { n / 2 } else { n };
    let mut out = Vec::new();
    for part in partitions(classes, classes) {
        let options: BTreeMap<usize, Vec<JordanData>> = part
            .iter()
            .map(|k| (*k, if odd { jordan_types(*k, pool) } else { self_dual_types(*k, pool) }))
            .collect();
        let names: Vec<Scalar> = (0..part.len())
            .map(|i| Scalar::var(&format!("a{}", *counter + i + 1)))
            .collect();
        for choice in slot_choices(&part, &options) {
            let mut pieces = Vec::new();
            for (a, r) in names.iter().zip(choice) {
                if odd {
                    pieces.push(simple(p, a.neg(), r.dual())?);
                }
                pieces.push(simple(p, a.clone(), r)?);
            }
            out.push(pieces);
        }
    }
    *counter += classes;
    Ok(out)
}

/// Shapes with a q = 2 tail a2/u^2 + a1/u over the quadratic cover; they
/// carry slope 1 on four dimensions.
fn quadratic_shapes(pool: &[Eigenvalue]) -> Result<Vec<FormalType>, ElementaryError> {
    let phi = LaurentTail::from_terms([(-2, Scalar::var("b2")), (-1, Scalar::var("b1"))]);
    let mut out = Vec::new();
    let signs = self_dual_types(1, pool);
    for r in jordan_types(1, pool) {
        let pair = vec![
            ElementaryModule::new(2, phi.clone(), r.clone())?,
            ElementaryModule::new(2, phi.neg(), r.dual())?,
        ];
        for reg in self_dual_types(3, pool) {
            out.push(FormalType::new(reg, pair.clone())?);
        }
        for s in &signs {
            for reg in &signs {
                let mut pieces = pair.clone();
                pieces.push(simple(2, Scalar::var("c1"), s.clone())?);
                out.push(FormalType::new(reg.clone(), pieces)?);
            }
        }
    }
    Ok(out)
}

/// Self-dual formal types with trivial determinant realizing `profile`.
pub fn candidate_shapes(profile: &SlopeProfile) -> Result<Vec<CandidateShape>, ElementaryError> {
    let pool = eigenvalue_pool();
    let mut counter = 0;
    let mut per_part = Vec::new();
    for (p, d) in &profile.parts {
        per_part.push(part_options(*p, *d, &mut counter, &pool)?);
    }
    let regs = self_dual_types(profile.regular_dim(), &pool);
    let mut types = Vec::new();
    let mut acc: Vec<Vec<ElementaryModule>> = vec![vec![]];
    for opts in &per_part {
        acc = acc
            .iter()
            .flat_map(|a| opts.iter().map(move |o| a.iter().chain(o).cloned().collect()))
            .collect();
    }
    for pieces in &acc {
        for reg in &regs {
            types.push(FormalType::new(reg.clone(), pieces.clone())?);
        }
    }
    types.extend(quadratic_shapes(&pool)?.into_iter().filter(|ft| CandidateShape::from_type(ft.clone()).profile() == *profile));
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for ft in types {
        let c = ft.checks()?;
        if c.self_dual && c.det_trivial && seen.insert(ft.clone()) {
            out.push(CandidateShape::from_type(ft));
        }
    }
    Ok(out)
}

/// Possible (irr, dim Soln) of End at an irregular point of one profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalInvariantRow {
    pub profile: SlopeProfile,
    pub shapes: usize,
    /// (irr, dim Soln) realized by a single shape
    pub pairs: BTreeSet<(usize, usize)>,
}

impl LocalInvariantRow {
    pub fn soln(&self) -> BTreeSet<usize> {
        self.pairs.iter().map(|(_, s)| *s).collect()
    }

    pub fn irr(&self) -> BTreeSet<usize> {
        self.pairs.iter().map(|(i, _)| *i).collect()
    }
}

pub fn local_invariants(profile: &SlopeProfile) -> Result<LocalInvariantRow, ElementaryError> {
    let shapes = candidate_shapes(profile)?;
    let pairs = shapes
        .iter()
        .map(|s| s.formal_type.end().map(|end| (end.irregularity(), end.soln_dim())))
        .collect::<Result<BTreeSet<_>, _>>()?;
    Ok(LocalInvariantRow { profile: profile.clone(), shapes: shapes.len(), pairs })
}

pub fn enumerate_local_invariants() -> Result<Vec<LocalInvariantRow>, ElementaryError> {
    enumerate_slope_profiles().iter().map(local_invariants).collect()
}

/// R(E) = (s_1, ..., s_r, z_1, ..., z_r), points sorted by (s, z).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RigidityTuple {
    pub s: Vec<usize>,
    pub z: Vec<usize>,
}

impl RigidityTuple {
    pub fn new(mut points: Vec<(usize, usize)>) -> Self {
        points.sort();
        RigidityTuple { s: points.iter().map(|p| p.0).collect(), z: points.iter().map(|p| p.1).collect() }
    }

    pub fn r(&self) -> usize {
        self.s.len()
    }

    /// (2 - r) 49 - sum s + sum z
    pub fn rigidity(&self) -> i64 {
        let h2 = (RANK * RANK) as i64;
        (2 - self.r() as i64) * h2 - self.s.iter().sum::<usize>() as i64 + self.z.iter().sum::<usize>() as i64
    }

    pub fn values(&self) -> Vec<usize> {
        self.s.iter().chain(&self.z).copied().collect()
    }
}

impl fmt::Display for RigidityTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.values().iter().map(|x| x.to_string()).collect();
        write!(f, "({})", v.join(", "))
    }
}

/// How (irr, Soln) values at an irregular point are combined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TupleRule {
    /// any irr with any Soln of the same profile row
    Product,
    /// only pairs realized by a single candidate shape
    Joint,
}

/// Admissible (s, z) per point: regular points (0, z) for z in `regular`,
/// irregular points from the profile rows under `rule`.
pub fn point_options(tables: &[LocalInvariantRow], regular: &[usize], rule: TupleRule) -> Vec<(usize, usize)> {
    let mut opts: BTreeSet<(usize, usize)> = regular.iter().map(|z| (0, *z)).collect();
    for row in tables {
        match rule {
            TupleRule::Joint => opts.extend(row.pairs.iter().copied()),
            TupleRule::Product => {
                for s in row.irr() {
                    for z in row.soln() {
                        opts.insert((s, z));
                    }
                }
            }
        }
    }
    opts.into_iter().collect()
}

/// All tuples with r points, at least one irregular, and rig = 2.
pub fn solve_rigidity_tuples(
    r: usize,
    tables: &[LocalInvariantRow],
    regular: &[usize],
    rule: TupleRule,
) -> Vec<RigidityTuple> {
    let opts = point_options(tables, regular, rule);
    let target = 2 - (2 - r as i64) * (RANK * RANK) as i64;
    let best = opts.iter().map(|(s, z)| *z as i64 - *s as i64).max().unwrap_or(0);
    let mut out = BTreeSet::new();
    fn rec(
        start: usize,
        left: usize,
        sum: i64,
        best: i64,
        target: i64,
        opts: &[(usize, usize)],
        cur: &mut Vec<(usize, usize)>,
        out: &mut BTreeSet<RigidityTuple>,
    ) {
        if left == 0 {
            if sum == target && cur.iter().any(|(s, _)| *s > 0) {
                out.insert(RigidityTuple::new(cur.clone()));
            }
            return;
        }
        if sum + best * (left as i64) < target {
            return;
        }
        for i in start..opts.len() {
            let (s, z) = opts[i];
            cur.push((s, z));
            rec(i, left - 1, sum + z as i64 - s as i64, best, target, opts, cur, out);
            cur.pop();
        }
    }
    rec(0, r, 0, best, target, &opts, &mut Vec::new(), &mut out);
    out.into_iter().collect()
}

/// Is the multiset of size 7 of the form {1, a, b, ab, a^-1, b^-1, (ab)^-1}?
pub fn g2_pattern_check(eigs: &[Eigenvalue]) -> bool {
    if eigs.len() != RANK {
        return false;
    }
    let mut want: Vec<Eigenvalue> = eigs.to_vec();
    want.sort();
    for a in eigs {
        for b in eigs {
            let ab = a.mul(b);
            let mut got = vec![Eigenvalue::one(), a.clone(), b.clone(), ab.inv(), a.inv(), b.inv(), ab];
            got.sort();
            if got == want {
                return true;
            }
        }
    }
    false
}

/// Eigenvalues of the (formal) monodromy with multiplicity.
pub fn monodromy_multiset(ft: &FormalType) -> Vec<Eigenvalue> {
    let m = ft.formal_monodromy();
    m.blocks().iter().flat_map(|(l, b)| std::iter::repeat(l.clone()).take(*b as usize)).collect()
}

#[derive(Clone, Debug)]
pub struct RowReport {
    pub name: String,
    pub rig: i64,
    pub self_dual: bool,
    pub det_trivial: bool,
    pub torus_dim: usize,
    pub pattern: bool,
    pub exterior_cube: Option<EulerTerms>,
    pub failures: Vec<String>,
}

impl RowReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub rows: Vec<RowReport>,
    pub excluded: RowReport,
}

/// Check one theorem row; `cube` asks for the exterior-cube Euler
/// characteristic as well.
pub fn verify_row(name: &str, c: &ConnectionDescriptor, cube: bool) -> Result<RowReport, EngineError> {
    let rig = rigidity_index(c)?;
    let mut self_dual = true;
    let mut det_trivial = true;
    let mut torus_dim = 0;
    let mut pattern = true;
    for (_, ft) in c.singular_points() {
        let ch = ft.checks()?;
        self_dual &= ch.self_dual;
        det_trivial &= ch.det_trivial;
        torus_dim = torus_dim.max(ft.exponential_torus_dim()?);
        pattern &= g2_pattern_check(&monodromy_multiset(ft));
    }
    let exterior_cube = if cube { Some(euler_char_middle(&exterior_cube_family(c)?)?) } else { None };
    let mut failures = Vec::new();
    if rig != 2 {
        failures.push(format!("rig = {}", rig));
    }
    if !self_dual {
        failures.push("not self-dual".into());
    }
    if !det_trivial {
        failures.push("determinant not trivial".into());
    }
    if torus_dim > 2 {
        failures.push(format!("exponential torus of dimension {}", torus_dim));
    }
    if !pattern {
        failures.push("monodromy eigenvalues do not fit the G2 pattern".into());
    }
    if let Some(t) = &exterior_cube {
        if t.value() < 1 {
            failures.push(format!("exterior cube Euler characteristic {}", t.value()));
        }
    }
    Ok(RowReport {
        name: name.to_string(),
        rig,
        self_dual,
        det_trivial,
        torus_dim,
        pattern,
        exterior_cube,
        failures,
    })
}

/// Verify the theorem rows (the flag marks rows whose exterior cube is
/// checked) and report the excluded candidate.
pub fn verify_classification(
    rows: &[(String, ConnectionDescriptor, bool)],
    excluded: &(String, ConnectionDescriptor),
) -> Result<ClassificationReport, EngineError> {
    let rows = rows.iter().map(|(n, c, cube)| verify_row(n, c, *cube)).collect::<Result<Vec<_>, _>>()?;
    let mut ex = verify_row(&excluded.0, &excluded.1, false)?;
    if ADJOINT_INVARIANTS_EXCLUDED != ADJOINT_INVARIANTS_E2 {
        ex.failures.push(format!(
            "adjoint invariants at 0: {} != {} required by the shared infinity type",
            ADJOINT_INVARIANTS_EXCLUDED, ADJOINT_INVARIANTS_E2
        ));
    }
    Ok(ClassificationReport { rows, excluded: ex })
}

/// Substitute values for eigenvalue symbols everywhere in a descriptor.
pub fn specialize(c: &ConnectionDescriptor, values: &[(&str, Eigenvalue)]) -> Result<ConnectionDescriptor, EngineError> {
    let sub = |j: &JordanData| j.map_eigenvalues(|l| values.iter().fold(l.clone(), |acc, (n, v)| acc.substitute(n, v)));
    let pts = c.map_types(|_, ft| {
        let irr = ft.irregular.iter().map(|e| ElementaryModule { r: sub(&e.r), ..e.clone() }).collect();
        Ok(FormalType::new(sub(&ft.regular), irr)?)
    })?;
    ConnectionDescriptor::new(c.rank(), pts)
}

/// Local formal type after base change along u -> u^k.
pub fn pullback_type(ft: &FormalType, k: u32) -> Result<FormalType, ElementaryError> {
    let mut pieces = vec![ElementaryModule::regular(ft.regular.pull(k))];
    for e in &ft.irregular {
        pieces.extend(e.pullback(k)?);
    }
    FormalType::from_pieces(pieces)
}

/// Base change along z -> z^k of a connection on the punctured line.
pub fn kummer_pullback(c: &ConnectionDescriptor, k: u32) -> Result<ConnectionDescriptor, EngineError> {
    let pts = c.map_types(|loc, ft| match loc {
        Location::Finite(s) if !s.is_zero() => {
            Err(EngineError::Precondition(format!("Kummer pullback needs singularities in {{0, inf}}, found {}", loc)))
        }
        _ => Ok(pullback_type(ft, k)?),
    })?;
    ConnectionDescriptor::new(c.rank(), pts)
}

#[derive(Clone, Debug)]
pub struct PullbackCheck {
    pub name: String,
    pub expected: ConnectionDescriptor,
    pub got: ConnectionDescriptor,
}

impl PullbackCheck {
    pub fn holds(&self) -> bool {
        self.expected == self.got
    }
}

/// [2]* of the fifth E4 row at x = zeta_8, y = zeta_8^2 against the E3 row,
/// and [3]* of the fourth E4 row at x = zeta_3 against the E2 member with
/// alpha_1 = -a, alpha_2 = zeta_6^5 a.
pub fn pullback_identities(
    e4_5: &ConnectionDescriptor,
    e3: &ConnectionDescriptor,
    e4_4: &ConnectionDescriptor,
    e2: &ConnectionDescriptor,
) -> Result<Vec<PullbackCheck>, EngineError> {
    let z8 = Eigenvalue::root_of_unity(1, 8);
    let first = kummer_pullback(&specialize(e4_5, &[("x", z8.clone()), ("y", z8.powi(2))])?, 2)?;
    let second = kummer_pullback(&specialize(e4_4, &[("x", Eigenvalue::root_of_unity(1, 3))])?, 3)?;
    let a = Scalar::var("a1");
    let member = substitute_tails(e2, &[("a1", a.neg()), ("a2", Scalar::zeta(6, 5).mul(&a))])?;
    Ok(vec![
        PullbackCheck { name: "[2]* E4^5 = E3".into(), expected: e3.clone(), got: first },
        PullbackCheck { name: "[3]* E4^4 = E2 member".into(), expected: member, got: second },
    ])
}

/// Substitute scalars for tail symbols.
pub fn substitute_tails(c: &ConnectionDescriptor, values: &[(&str, Scalar)]) -> Result<ConnectionDescriptor, EngineError> {
    let pts = c.map_types(|_, ft| {
        let mut irr = Vec::new();
        for e in &ft.irregular {
            let mut terms = Vec::new();
            for (k, a) in e.phi.terms() {
                let mut a = a.clone();
                for (n, v) in values {
                    a = a.substitute(n, v).map_err(|e| EngineError::Elementary(e.into()))?;
                }
                terms.push((*k, a));
            }
            irr.push(ElementaryModule { phi: LaurentTail::from_terms(terms), ..e.clone() });
        }
        Ok(FormalType::new(ft.regular.clone(), irr)?)
    })?;
    ConnectionDescriptor::new(c.rank(), pts)
}

/// Rank-7 connection singular only at infinity, of type El(6, a u^-(k+6), 1) + (1).
pub fn hypergeometric_example(k: u32) -> Result<ConnectionDescriptor, EngineError> {
    let e = ElementaryModule::new(6, LaurentTail::monomial(Scalar::var("a"), -((k + 6) as i64)), JordanData::identity(1))?;
    let ft = FormalType::new(JordanData::identity(1), vec![e])?;
    ConnectionDescriptor::new(RANK, [(Location::Infinity, ft)])
}
