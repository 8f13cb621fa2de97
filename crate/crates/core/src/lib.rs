//! Exact formal-type calculus for irregular connections on the punctured
//! projective line: elementary modules, local Fourier transforms, the
//! Katz-Arinkin operations, and the G2 classification drivers built on them.

pub mod scalars;
pub mod jordan;
pub mod elementary;
pub mod formal_type;
pub mod fourier;
pub mod engine;
pub mod classify;
