//! Global connection descriptors, the Katz-Arinkin operations on them, and
//! script replay.

mod descriptor;
mod ops;
mod script;

use std::fmt;

use thiserror::Error;

pub use descriptor::{ConnectionDescriptor, Location};
pub use ops::{op_fourier, op_middle_convolution, op_moebius, op_twist, op_twist_at, Moebius};
pub use script::{parse_script, render_trace, run_script, ScriptFailure, Step};

use crate::elementary::ElementaryError;
use crate::formal_type::FormalType;
use crate::fourier::FourierError;
use crate::jordan::JordanData;

/// A state the local data forces that no connection can have.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contradiction {
    pub location: Location,
    /// Rank of the connection produced by the operation.
    pub rank: usize,
    /// Rank the local data at `location` would need.
    pub required: usize,
    /// Vanishing cycle data that could not be accommodated.
    pub vanishing: JordanData,
}

impl fmt::Display for Contradiction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rank == 1 {
            write!(
                f,
                "rank 1 but the local data at {} needs rank {} (vanishing cycles {})",
                self.location, self.required, self.vanishing
            )
        } else {
            write!(
                f,
                "rank mismatch at {}: the connection has rank {} but the formal type there needs rank {}",
                self.location, self.rank, self.required
            )
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Fourier(#[from] FourierError),
    #[error(transparent)]
    Elementary(#[from] ElementaryError),
    #[error("contradiction: {0}")]
    Contradiction(Contradiction),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("bad descriptor: {0}")]
    Descriptor(String),
    #[error("bad script line {line}: {msg}")]
    Script { line: usize, msg: String },
}

impl EngineError {
    pub fn is_out_of_scope(&self) -> bool {
        matches!(self, EngineError::Fourier(FourierError::OutOfScope(_)))
    }
}

/// Terms of the index of rigidity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigidityTerms {
    pub points: usize,
    pub rank: usize,
    pub irr: Vec<usize>,
    pub soln: Vec<usize>,
}

impl RigidityTerms {
    pub fn value(&self) -> i64 {
        let h = self.rank as i64;
        (2 - self.points as i64) * h * h - self.irr.iter().sum::<usize>() as i64 + self.soln.iter().sum::<usize>() as i64
    }
}

pub fn rigidity_terms(c: &ConnectionDescriptor) -> Result<RigidityTerms, EngineError> {
    let mut irr = Vec::new();
    let mut soln = Vec::new();
    for (_, ft) in c.singular_points() {
        let end = ft.end()?;
        irr.push(end.irregularity());
        soln.push(end.soln_dim());
    }
    Ok(RigidityTerms { points: irr.len(), rank: c.rank(), irr, soln })
}

/// (2 - r) h^2 - sum irr(End) + sum dim Soln(End) over the r singular points.
pub fn rigidity_index(c: &ConnectionDescriptor) -> Result<i64, EngineError> {
    Ok(rigidity_terms(c)?.value())
}

/// Terms of the Euler characteristic of a middle extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerTerms {
    pub points: usize,
    pub rank: usize,
    pub invariants: Vec<usize>,
    pub irr: Vec<usize>,
}

impl EulerTerms {
    pub fn value(&self) -> i64 {
        (2 - self.points as i64) * self.rank as i64 - self.irr.iter().sum::<usize>() as i64
            + self.invariants.iter().sum::<usize>() as i64
    }
}

/// Euler characteristic of the middle extension of a family of formal types,
/// one per singular point.
pub fn euler_char_middle(family: &[FormalType]) -> Result<EulerTerms, EngineError> {
    let rank = family.first().map(FormalType::rank).unwrap_or(0);
    if family.iter().any(|v| v.rank() != rank) {
        return Err(EngineError::Descriptor("family members of different rank".into()));
    }
    Ok(EulerTerms {
        points: family.len(),
        rank,
        invariants: family.iter().map(FormalType::soln_dim).collect(),
        irr: family.iter().map(FormalType::irregularity).collect(),
    })
}

/// Third exterior power of every local formal type of `c`, in point order.
pub fn exterior_cube_family(c: &ConnectionDescriptor) -> Result<Vec<FormalType>, EngineError> {
    c.singular_points().into_iter().map(|(_, ft)| Ok(ft.exterior_cube()?)).collect()
}
