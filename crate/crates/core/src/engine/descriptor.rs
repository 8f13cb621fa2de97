use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use super::EngineError;
use crate::formal_type::FormalType;
use crate::jordan::JordanData;
use crate::scalars::{parse_scalar, Scalar};

/// A point of the projective line. Finite points sort before infinity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Location {
    Finite(Scalar),
    Infinity,
}

impl Location {
    pub fn zero() -> Self {
        Location::Finite(Scalar::zero())
    }

    pub fn parse(s: &str) -> Result<Self, EngineError> {
        match s.trim() {
            "inf" | "oo" | "infinity" | "\u{221e}" => Ok(Location::Infinity),
            t => Ok(Location::Finite(parse_scalar(t).map_err(|e| EngineError::Descriptor(e.to_string()))?)),
        }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Finite(s) => write!(f, "{}", s),
            Location::Infinity => write!(f, "inf"),
        }
    }
}

/// A connection on an open subset of P^1, recorded by its rank and the formal
/// type at each singular point. Finite points carry minimal-extension
/// semantics; infinity is always present (the identity when not singular).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConnectionDescriptor {
    rank: usize,
    points: BTreeMap<Location, FormalType>,
}

impl ConnectionDescriptor {
    pub fn new(rank: usize, points: impl IntoIterator<Item = (Location, FormalType)>) -> Result<Self, EngineError> {
        if rank == 0 {
            return Err(EngineError::Descriptor("rank must be positive".into()));
        }
        let mut map = BTreeMap::new();
        for (loc, ft) in points {
            if ft.rank() != rank {
                return Err(EngineError::Descriptor(format!(
                    "formal type at {} has rank {} but the connection has rank {}",
                    loc,
                    ft.rank(),
                    rank
                )));
            }
            if map.insert(loc.clone(), ft).is_some() {
                return Err(EngineError::Descriptor(format!("duplicate point {}", loc)));
            }
        }
        map.entry(Location::Infinity).or_insert_with(|| FormalType::regular_only(JordanData::identity(rank as u32)));
        map.retain(|loc, ft| *loc == Location::Infinity || !is_trivial(ft));
        Ok(ConnectionDescriptor { rank, points: map })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// All stored points: the finite singular ones in order, then infinity.
    pub fn points(&self) -> impl Iterator<Item = (&Location, &FormalType)> {
        self.points.iter()
    }

    pub fn locations(&self) -> Vec<Location> {
        self.points.keys().cloned().collect()
    }

    pub fn at(&self, loc: &Location) -> Option<&FormalType> {
        self.points.get(loc)
    }

    pub fn at_infinity(&self) -> &FormalType {
        &self.points[&Location::Infinity]
    }

    pub fn is_singular(&self, loc: &Location) -> bool {
        self.points.get(loc).map(|ft| !is_trivial(ft)).unwrap_or(false)
    }

    pub fn singular_points(&self) -> Vec<(&Location, &FormalType)> {
        self.points.iter().filter(|(_, ft)| !is_trivial(ft)).collect()
    }

    /// Apply a map to every stored formal type.
    pub fn map_types<F>(&self, f: F) -> Result<Vec<(Location, FormalType)>, EngineError>
    where
        F: Fn(&Location, &FormalType) -> Result<FormalType, EngineError>,
    {
        self.points.iter().map(|(l, ft)| Ok((l.clone(), f(l, ft)?))).collect()
    }

    pub fn to_json(&self) -> Value {
        let pts: Vec<Value> =
            self.points.iter().map(|(l, ft)| json!({"at": l.to_string(), "type": ft.to_json()})).collect();
        json!({"rank": self.rank, "points": pts})
    }

    /// `{"rank": 7, "points": [{"at": "0", "type": "(J(3), J(3), 1)"}, ...]}`;
    /// a type may also be given as formal-type JSON.
    pub fn from_json(v: &Value) -> Result<Self, EngineError> {
        let bad = |m: String| EngineError::Descriptor(m);
        let pts = v
            .get("points")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing points array".into()))?;
        if pts.is_empty() {
            return Err(bad("no points".into()));
        }
        let mut parsed = Vec::new();
        for p in pts {
            let at = p.get("at").and_then(Value::as_str).ok_or_else(|| bad("point without \"at\"".into()))?;
            let loc = Location::parse(at)?;
            let ft = match p.get("type") {
                Some(Value::String(s)) => FormalType::parse(s),
                Some(t @ Value::Object(_)) => FormalType::from_json(t),
                _ => return Err(bad(format!("point {} without a type", at))),
            }
            .map_err(|e| bad(format!("point {}: {}", at, e)))?;
            parsed.push((loc, ft));
        }
        let rank = match v.get("rank") {
            Some(r) => r.as_u64().ok_or_else(|| bad("rank must be a positive integer".into()))? as usize,
            None => parsed.iter().map(|(_, ft)| ft.rank()).max().unwrap_or(0),
        };
        ConnectionDescriptor::new(rank, parsed)
    }

    pub fn parse_json(text: &str) -> Result<Self, EngineError> {
        let v: Value = serde_json::from_str(text).map_err(|e| {
            EngineError::Descriptor(format!("invalid JSON at line {} column {}: {}", e.line(), e.column(), e))
        })?;
        Self::from_json(&v)
    }
}

fn is_trivial(ft: &FormalType) -> bool {
    ft.is_regular() && ft.regular.is_semisimple() && ft.regular.eigenvalues().iter().all(|l| l.is_one())
}

impl fmt::Display for ConnectionDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rank {}", self.rank)?;
        for (l, ft) in &self.points {
            writeln!(f, "  {}: {}", l, ft)?;
        }
        Ok(())
    }
}
