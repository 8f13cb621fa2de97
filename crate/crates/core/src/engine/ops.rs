use std::collections::BTreeMap;

use super::{ConnectionDescriptor, Contradiction, EngineError, Location};
use crate::elementary::ElementaryModule;
use crate::formal_type::{monodromy_from_vanishing, vanishing_regular, FormalType};
use crate::fourier::{fourier_rank, inverse_slots, scale_base, stationary_phase, Payload};
use crate::jordan::JordanData;
use crate::scalars::{Eigenvalue, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Moebius {
    /// z -> 1/z
    Inversion,
    /// z -> a z + b
    Affine(Scalar, Scalar),
}

fn twist_type(ft: &FormalType, l: &Eigenvalue) -> Result<FormalType, EngineError> {
    let irr = ft.irregular.iter().map(|e| e.twist(l)).collect();
    Ok(FormalType::new(ft.regular.twist(l), irr)?)
}

/// Tensor with the rank-one system whose monodromy at each listed point is
/// given. Unlisted singular points get 1; new points may be listed.
pub fn op_twist_at(c: &ConnectionDescriptor, twists: &[(Location, Eigenvalue)]) -> Result<ConnectionDescriptor, EngineError> {
    let mut prod = Eigenvalue::one();
    let mut by_loc = BTreeMap::new();
    for (loc, l) in twists {
        prod = prod.mul(l);
        if by_loc.insert(loc.clone(), l.clone()).is_some() {
            return Err(EngineError::Precondition(format!("point {} twisted twice", loc)));
        }
    }
    if !prod.is_one() {
        return Err(EngineError::Precondition(format!("twist monodromies multiply to {}, not 1", prod)));
    }
    let identity = FormalType::regular_only(JordanData::identity(c.rank() as u32));
    let mut pts = Vec::new();
    for loc in c.locations().into_iter().chain(by_loc.keys().cloned()) {
        if pts.iter().any(|(l, _)| *l == loc) {
            continue;
        }
        let ft = c.at(&loc).unwrap_or(&identity);
        let out = match by_loc.get(&loc) {
            Some(l) => twist_type(ft, l)?,
            None => ft.clone(),
        };
        pts.push((loc, out));
    }
    ConnectionDescriptor::new(c.rank(), pts)
}

/// Twist by monodromies listed in column order: finite singular points in
/// order, then infinity.
pub fn op_twist(c: &ConnectionDescriptor, lambdas: &[Eigenvalue]) -> Result<ConnectionDescriptor, EngineError> {
    let locs = c.locations();
    if locs.len() != lambdas.len() {
        return Err(EngineError::Precondition(format!(
            "twist needs {} monodromies (one per column), got {}",
            locs.len(),
            lambdas.len()
        )));
    }
    let pairs: Vec<_> = locs.into_iter().zip(lambdas.iter().cloned()).collect();
    op_twist_at(c, &pairs)
}

fn scale_type(ft: &FormalType, a: &Scalar) -> Result<FormalType, EngineError> {
    let irr = ft.irregular.iter().map(|e| scale_base(e, a)).collect::<Result<Vec<_>, _>>()?;
    Ok(FormalType::new(ft.regular.clone(), irr)?)
}

pub fn op_moebius(c: &ConnectionDescriptor, m: &Moebius) -> Result<ConnectionDescriptor, EngineError> {
    let mut pts = Vec::new();
    match m {
        Moebius::Affine(a, b) => {
            if a.is_zero() {
                return Err(EngineError::Precondition("affine map with a = 0".into()));
            }
            for (loc, ft) in c.points() {
                match loc {
                    Location::Finite(s) => pts.push((Location::Finite(a.mul(s).add(b)), scale_type(ft, a)?)),
                    // the local coordinate 1/z is rescaled by 1/a; b only moves
                    // terms of positive order when all slopes are at most one
                    Location::Infinity => {
                        if !b.is_zero() && ft.irregular.iter().any(|e| e.q() > e.p) {
                            return Err(EngineError::Precondition(
                                "translation of slope > 1 content at infinity".into(),
                            ));
                        }
                        pts.push((Location::Infinity, scale_type(ft, &a.inv().map_err(|e| EngineError::Elementary(e.into()))?)?));
                    }
                }
            }
        }
        Moebius::Inversion => {
            for (loc, ft) in c.points() {
                match loc {
                    Location::Infinity => pts.push((Location::zero(), ft.clone())),
                    Location::Finite(s) if s.is_zero() => pts.push((Location::Infinity, ft.clone())),
                    Location::Finite(s) => {
                        let inv = s.inv().map_err(|e| EngineError::Elementary(e.into()))?;
                        // 1/z - 1/s = -(z - s)/s^2 to first order
                        let a = inv.mul(&inv).neg();
                        pts.push((Location::Finite(inv), scale_type(ft, &a)?));
                    }
                }
            }
        }
    }
    ConnectionDescriptor::new(c.rank(), pts)
}

/// Rebuild local formal types at finite points from vanishing cycles and
/// irregular pieces, for a connection of rank `rank`.
fn assemble_finite(
    rank: usize,
    data: BTreeMap<Location, (JordanData, Vec<ElementaryModule>)>,
) -> Result<Vec<(Location, FormalType)>, EngineError> {
    let mut pts = Vec::new();
    for (loc, (v, irr)) in data {
        let irr_rank: usize = irr.iter().map(ElementaryModule::rank).sum();
        let need = irr_rank + v.rank() + v.blocks().iter().filter(|(l, _)| l.is_one()).count();
        let mono = if irr_rank <= rank { monodromy_from_vanishing(&v, rank - irr_rank) } else { None };
        let mono = mono.ok_or_else(|| {
            EngineError::Contradiction(Contradiction { location: loc.clone(), rank, required: need, vanishing: v.clone() })
        })?;
        pts.push((loc, FormalType::new(mono, irr)?));
    }
    Ok(pts)
}

/// Global Fourier transform.
pub fn op_fourier(c: &ConnectionDescriptor) -> Result<ConnectionDescriptor, EngineError> {
    let inf = stationary_phase(c)?;
    let h = inf.rank();
    debug_assert_eq!(h, fourier_rank(c));
    if h == 0 {
        return Err(EngineError::Precondition("the Fourier transform is zero".into()));
    }
    let mut data: BTreeMap<Location, (JordanData, Vec<ElementaryModule>)> = BTreeMap::new();
    for (s, pl) in inverse_slots(c.at_infinity())? {
        let entry = data.entry(Location::Finite(s)).or_insert_with(|| (JordanData::zero(), Vec::new()));
        match pl {
            Payload::Regular(v) => entry.0 = entry.0.sum(&v),
            Payload::Irregular(e) => entry.1.push(e),
        }
    }
    let mut pts = assemble_finite(h, data)?;
    pts.push((Location::Infinity, inf));
    ConnectionDescriptor::new(h, pts)
}

/// Middle convolution with the Kummer system of monodromy `chi`; requires
/// scalar monodromy chi at infinity.
pub fn op_middle_convolution(c: &ConnectionDescriptor, chi: &Eigenvalue) -> Result<ConnectionDescriptor, EngineError> {
    if chi.is_one() {
        return Err(EngineError::Precondition("middle convolution needs chi != 1".into()));
    }
    let h = c.rank();
    let inf = c.at_infinity();
    if !inf.is_regular() || inf.regular != JordanData::scalar(chi.clone(), h as u32) {
        return Err(EngineError::Precondition(format!(
            "MC_{} needs monodromy {}*id at infinity, found {}; twist first",
            chi, chi, inf
        )));
    }
    let h_f = fourier_rank(c);
    if h_f <= h {
        return Err(EngineError::Precondition(format!("middle convolution has rank {} - {} <= 0", h_f, h)));
    }
    let new_h = h_f - h;
    let mut data = BTreeMap::new();
    for (loc, ft) in c.points() {
        if *loc == Location::Infinity {
            continue;
        }
        let v = vanishing_regular(&ft.regular).twist(chi);
        let irr = ft
            .irregular
            .iter()
            .map(|e| ElementaryModule { r: e.r.twist(&chi.powi((e.p + e.q()) as i64)), ..e.clone() })
            .collect();
        data.insert(loc.clone(), (v, irr));
    }
    let mut pts = assemble_finite(new_h, data)?;
    pts.push((Location::Infinity, FormalType::regular_only(JordanData::scalar(chi.inv(), new_h as u32))));
    ConnectionDescriptor::new(new_h, pts)
}
