//! Local Fourier transforms of elementary modules and stationary phase.
//!
//! Conventions: a finite point carries its monodromy; the transforms use the
//! vanishing cycles of the regular part. At infinity the regular part is the
//! nearby cycle data.

use num::{BigRational, One};
use thiserror::Error;

use crate::elementary::{ElementaryError, ElementaryModule, LaurentTail};
use crate::engine::{ConnectionDescriptor, Location};
use crate::formal_type::{vanishing_regular, FormalType};
use crate::jordan::JordanData;
use crate::scalars::{Eigenvalue, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FourierError {
    #[error("wrong entry point: {0}")]
    WrongEntry(String),
    #[error("out of scope: {0}")]
    OutOfScope(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Elementary(#[from] ElementaryError),
}

impl From<ScalarError> for FourierError {
    fn from(e: ScalarError) -> Self {
        FourierError::Elementary(e.into())
    }
}

/// What sits at a finite point on the source side of a slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    /// Vanishing cycle data of the regular part.
    Regular(JordanData),
    Irregular(ElementaryModule),
}

impl Payload {
    pub fn rank(&self) -> usize {
        match self {
            Payload::Regular(v) => v.rank(),
            Payload::Irregular(e) => e.rank(),
        }
    }
}

/// One summand of the stationary phase decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierSlot {
    pub source: Location,
    pub payload: FormalType,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn single_term(phi: &LaurentTail) -> Result<(i64, Scalar), FourierError> {
    let terms = phi.terms();
    if terms.len() != 1 {
        return Err(FourierError::Unsupported(format!("multi-term tail {}", phi.render("u"))));
    }
    let (k, a) = terms.iter().next().unwrap();
    Ok((*k, a.clone()))
}

fn sign_q(q: u32) -> Eigenvalue {
    Eigenvalue::minus_one().powi(q as i64)
}

/// F^(0,inf) of an irregular elementary module El(u^p, a u^-q, R).
pub fn lft_zero_to_inf(e: &ElementaryModule) -> Result<ElementaryModule, FourierError> {
    if e.is_regular() {
        return Err(FourierError::WrongEntry("regular input goes through vanishing cycles".into()));
    }
    let e = e.normalize()?;
    let (k, a) = single_term(&e.phi)?;
    let (p, q) = (e.p as i64, -k);
    // rho^ = (p/(q a)) u^(p+q), phi^ = ((p+q)/p) a u^-q
    let c = Scalar::from_ratio(p, q).div(&a)?;
    let b = a.mul(&Scalar::from_ratio(p + q, p));
    let out = ElementaryModule {
        p: (p + q) as u32,
        c,
        phi: LaurentTail::monomial(b, -q),
        r: e.r.twist(&sign_q(q as u32)),
    };
    Ok(out.normalize()?)
}

/// F^(0,inf) of a regular module given by its monodromy: the vanishing cycles.
pub fn lft_regular_to_inf(monodromy: &JordanData) -> JordanData {
    vanishing_regular(monodromy)
}

/// F^(s,inf) of a payload at the finite point s.
pub fn lft_shifted(payload: &Payload, s: &Scalar) -> Result<ElementaryModule, FourierError> {
    match payload {
        Payload::Regular(v) => {
            if s.is_zero() {
                Ok(ElementaryModule::regular(v.clone()))
            } else {
                Ok(ElementaryModule::simple(1, s.clone(), v.clone())?)
            }
        }
        Payload::Irregular(e) => {
            let t = lft_zero_to_inf(e)?;
            if s.is_zero() {
                return Ok(t);
            }
            // in normalized coordinates s/rho^ is s v^-P
            let phi = t.phi.add(&LaurentTail::monomial(s.clone(), -(t.p as i64)));
            Ok(ElementaryModule::new(t.p, phi, t.r)?)
        }
    }
}

/// Inverse of `lft_shifted`: recover the finite location and the payload
/// from a piece at infinity of slope at most one.
pub fn lft_inf_to_s(e: &ElementaryModule) -> Result<(Scalar, Payload), FourierError> {
    let e = e.normalize()?;
    if e.is_regular() {
        return Ok((Scalar::zero(), Payload::Regular(e.r)));
    }
    let big_p = e.p as i64;
    if e.q() as i64 > big_p {
        return Err(FourierError::OutOfScope(format!("slope {} > 1 at infinity", e.slope())));
    }
    let s = e.phi.coeff(-big_p);
    let rest = e.phi.sub(&LaurentTail::monomial(s.clone(), -big_p));
    if rest.is_zero() {
        if e.p != 1 {
            return Err(FourierError::Unsupported(format!("non-reduced piece {}", e)));
        }
        return Ok((s, Payload::Regular(e.r)));
    }
    let (k, b) = single_term(&rest)?;
    let q = -k;
    let p = big_p - q;
    // a = (b p/P)^(P/p) (q/p)^(q/p)
    let a = b
        .mul(&Scalar::from_ratio(p, big_p))
        .pow_rational(&rat(big_p, p))?
        .mul(&Scalar::from_ratio(q, p).pow_rational(&rat(q, p))?);
    let src = ElementaryModule::new(p as u32, LaurentTail::monomial(a, -q), e.r.twist(&sign_q(q as u32)))?;
    Ok((s, Payload::Irregular(src)))
}

/// Slots of the stationary phase decomposition, one per finite point with
/// nonzero vanishing content.
pub fn slots(c: &ConnectionDescriptor) -> Result<Vec<FourierSlot>, FourierError> {
    check_infinity(c)?;
    let mut out = Vec::new();
    for (loc, ft) in c.points() {
        let s = match loc {
            Location::Finite(s) => s,
            Location::Infinity => continue,
        };
        let mut pieces = Vec::new();
        let v = lft_regular_to_inf(&ft.regular);
        if !v.is_zero() {
            pieces.push(lft_shifted(&Payload::Regular(v), s)?);
        }
        for e in &ft.irregular {
            pieces.push(lft_shifted(&Payload::Irregular(e.clone()), s)?);
        }
        if !pieces.is_empty() {
            out.push(FourierSlot { source: loc.clone(), payload: FormalType::from_pieces(pieces)? });
        }
    }
    Ok(out)
}

fn check_infinity(c: &ConnectionDescriptor) -> Result<(), FourierError> {
    let inf = c.at_infinity();
    for e in &inf.irregular {
        if e.slope() > BigRational::one() {
            return Err(FourierError::OutOfScope(format!("slope {} > 1 at infinity", e.slope())));
        }
    }
    Ok(())
}

/// Formal type at infinity of the Fourier transform.
pub fn stationary_phase(c: &ConnectionDescriptor) -> Result<FormalType, FourierError> {
    let mut out = FormalType::zero();
    for slot in slots(c)? {
        out = out.sum(&slot.payload);
    }
    Ok(out)
}

/// Generic rank of the transform from the local data alone:
/// sum over finite points of (p^/p) times the vanishing multiplicities.
pub fn fourier_rank(c: &ConnectionDescriptor) -> usize {
    let mut h = 0;
    for (loc, ft) in c.points() {
        if let Location::Finite(_) = loc {
            h += vanishing_regular(&ft.regular).rank();
            for e in &ft.irregular {
                let p_hat = (e.p + e.q()) as usize;
                h += p_hat * e.r.rank();
            }
        }
    }
    h
}

/// Location and payload at the finite points of the transform contributed by
/// the piece `e` at infinity: the inverse slot followed by z -> -z.
pub fn inverse_slots(inf: &FormalType) -> Result<Vec<(Scalar, Payload)>, FourierError> {
    let mut out = Vec::new();
    for e in inf.pieces() {
        if e.slope() > BigRational::one() {
            return Err(FourierError::OutOfScope(format!("slope {} > 1 at infinity", e.slope())));
        }
        let (s, pl) = lft_inf_to_s(&e)?;
        let pl = match pl {
            Payload::Regular(v) => Payload::Regular(v),
            Payload::Irregular(x) => Payload::Irregular(scale_base(&x, &Scalar::from_int(-1))?),
        };
        out.push((s.neg(), pl));
    }
    Ok(out)
}

/// Transport a local module at a finite point along t -> a t.
pub fn scale_base(e: &ElementaryModule, a: &Scalar) -> Result<ElementaryModule, ElementaryError> {
    if e.is_regular() {
        return Ok(e.clone());
    }
    ElementaryModule { c: e.c.mul(a), ..e.clone() }.normalize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::parse_jordan;
    use crate::scalars::parse_scalar;

    fn el(s: &str) -> ElementaryModule {
        ElementaryModule::parse(s).unwrap()
    }

    #[test]
    fn zero_to_inf_e1_rows() {
        let a = el("El(1, (a1^2/4)/u, (-l, -l^-1))");
        let t = lft_zero_to_inf(&a).unwrap();
        assert_eq!(t, el("El(2, a1/u, (l, l^-1))"));
        assert!(t.iso_eq(&el("El((4/a1^2)*u^2, (a1^2/2)/u, (l, l^-1))")).unwrap());
        let b = el("El(1, a1^2/u, -1)");
        assert_eq!(lft_zero_to_inf(&b).unwrap(), el("El(2, 2*a1/u, 1)"));
    }

    #[test]
    fn zero_to_inf_degrees() {
        let e = el("El(1, a/u, 1)");
        let t = lft_zero_to_inf(&e).unwrap();
        assert_eq!((t.p, t.q()), (2, 1));
        let t2 = lft_zero_to_inf(&t).unwrap();
        assert_eq!((t2.p, t2.q()), (3, 1));
        assert!(lft_zero_to_inf(&ElementaryModule::regular(JordanData::identity(1))).is_err());
    }

    #[test]
    fn regular_transform() {
        let j = parse_jordan("(J(2), J(2))").unwrap();
        assert_eq!(lft_regular_to_inf(&j), JordanData::identity(2));
        let j = parse_jordan("(-E4, E3)").unwrap();
        assert_eq!(lft_regular_to_inf(&j), parse_jordan("-E4").unwrap());
        assert!(lft_regular_to_inf(&JordanData::identity(5)).is_zero());
    }

    #[test]
    fn shifted_round_trip() {
        let s = parse_scalar("a1^2/4").unwrap();
        let v = parse_jordan("(-l, -l^-1)").unwrap();
        let e = lft_shifted(&Payload::Regular(v.clone()), &s).unwrap();
        assert_eq!(e, el("El(1, (a1^2/4)/u, (-l, -l^-1))"));
        assert_eq!(lft_inf_to_s(&e).unwrap(), (s.clone(), Payload::Regular(v)));

        let src = el("El(2, a/u, (l, l^-1))");
        for s in [Scalar::zero(), parse_scalar("b").unwrap()] {
            let t = lft_shifted(&Payload::Irregular(src.clone()), &s).unwrap();
            assert_eq!((t.p, t.q()), (3, if s.is_zero() { 1 } else { 3 }));
            assert_eq!(lft_inf_to_s(&t).unwrap(), (s, Payload::Irregular(src.clone())));
        }
    }

    #[test]
    fn inf_to_s_slope_half() {
        let e = el("El(2, a/u, E2)");
        let (s, pl) = lft_inf_to_s(&e).unwrap();
        assert!(s.is_zero());
        match pl {
            Payload::Irregular(x) => {
                assert_eq!((x.p, x.q()), (1, 1));
                assert_eq!(x.r, parse_jordan("-E2").unwrap());
                assert_eq!(lft_zero_to_inf(&x).unwrap(), e);
            }
            _ => panic!("expected irregular payload"),
        }
        assert!(matches!(lft_inf_to_s(&el("El(1, a/u^2, 1)")), Err(FourierError::OutOfScope(_))));
    }
}
