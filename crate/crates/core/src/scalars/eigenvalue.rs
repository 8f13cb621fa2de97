use std::collections::BTreeMap;
use std::fmt;

use num::{BigRational, One, ToPrimitive, Zero};

use super::cyclotomic::{fmt_rational, Cyclotomic};

/// exp(2 pi i * torsion) times a word in formal multiplicative symbols.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Eigenvalue {
    torsion: BigRational,
    word: BTreeMap<String, BigRational>,
}

fn mod_one(q: BigRational) -> BigRational {
    let f = q.floor();
    q - f
}

impl Eigenvalue {
    pub fn one() -> Self {
        Eigenvalue { torsion: BigRational::zero(), word: BTreeMap::new() }
    }

    pub fn minus_one() -> Self {
        Self::root_of_unity(1, 2)
    }

    /// exp(2 pi i k / n)
    pub fn root_of_unity(k: i64, n: i64) -> Self {
        Eigenvalue { torsion: mod_one(BigRational::new(k.into(), n.into())), word: BTreeMap::new() }
    }

    pub fn from_torsion(t: BigRational) -> Self {
        Eigenvalue { torsion: mod_one(t), word: BTreeMap::new() }
    }

    pub fn symbol(name: &str) -> Self {
        let mut word = BTreeMap::new();
        word.insert(name.to_string(), BigRational::one());
        Eigenvalue { torsion: BigRational::zero(), word }
    }

    pub fn new(torsion: BigRational, word: BTreeMap<String, BigRational>) -> Self {
        let word = word.into_iter().filter(|(_, e)| !e.is_zero()).collect();
        Eigenvalue { torsion: mod_one(torsion), word }
    }

    pub fn torsion(&self) -> &BigRational {
        &self.torsion
    }

    pub fn word(&self) -> &BTreeMap<String, BigRational> {
        &self.word
    }

    pub fn is_one(&self) -> bool {
        self.torsion.is_zero() && self.word.is_empty()
    }

    pub fn is_torsion(&self) -> bool {
        self.word.is_empty()
    }

    /// Order of a pure root of unity.
    pub fn torsion_order(&self) -> Option<u64> {
        if self.word.is_empty() {
            self.torsion.denom().to_u64()
        } else {
            None
        }
    }

    pub fn mul(&self, other: &Eigenvalue) -> Eigenvalue {
        let mut word = self.word.clone();
        for (s, e) in &other.word {
            *word.entry(s.clone()).or_insert_with(BigRational::zero) += e;
        }
        Eigenvalue::new(&self.torsion + &other.torsion, word)
    }

    pub fn inv(&self) -> Eigenvalue {
        Eigenvalue::new(-&self.torsion, self.word.iter().map(|(s, e)| (s.clone(), -e)).collect())
    }

    pub fn div(&self, other: &Eigenvalue) -> Eigenvalue {
        self.mul(&other.inv())
    }

    /// Canonical r-th power: torsion scaled mod 1, exponents scaled.
    pub fn pow(&self, r: &BigRational) -> Eigenvalue {
        Eigenvalue::new(&self.torsion * r, self.word.iter().map(|(s, e)| (s.clone(), e * r)).collect())
    }

    pub fn powi(&self, k: i64) -> Eigenvalue {
        self.pow(&BigRational::from_integer(k.into()))
    }

    /// The torsion part as a cyclotomic number.
    pub fn torsion_cyclotomic(&self) -> Cyclotomic {
        let n = self.torsion.denom().to_u32().expect("torsion order too large");
        let k = self.torsion.numer().to_i64().expect("torsion numerator too large");
        Cyclotomic::zeta(n, k)
    }

    /// Replace a symbol by another eigenvalue.
    pub fn substitute(&self, name: &str, value: &Eigenvalue) -> Eigenvalue {
        let Some(e) = self.word.get(name) else {
            return self.clone();
        };
        let mut rest = self.clone();
        rest.word.remove(name);
        rest.mul(&value.pow(e))
    }
}

fn fmt_word(word: &BTreeMap<String, BigRational>) -> String {
    word.iter()
        .map(|(s, e)| {
            if e.is_one() {
                s.clone()
            } else if e.is_integer() {
                format!("{}^{}", s, e.numer())
            } else {
                format!("{}^({})", s, fmt_rational(e))
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = fmt_word(&self.word);
        let t = &self.torsion;
        let half = BigRational::new(1.into(), 2.into());
        let quarter = BigRational::new(1.into(), 4.into());
        let three_q = BigRational::new(3.into(), 4.into());
        let (prefix, sep): (String, &str) = if t.is_zero() {
            (String::new(), "")
        } else if *t == half {
            ("-".into(), "")
        } else if *t == quarter {
            ("i".into(), "*")
        } else if *t == three_q {
            ("-i".into(), "*")
        } else {
            let n = t.denom();
            let k = t.numer();
            let z = if k.is_one() { format!("zeta({})", n) } else { format!("zeta({})^{}", n, k) };
            (z, "*")
        };
        if w.is_empty() {
            return match prefix.as_str() {
                "" => write!(f, "1"),
                "-" => write!(f, "-1"),
                p => write!(f, "{}", p),
            };
        }
        write!(f, "{}{}{}", prefix, if prefix == "-" { "" } else { sep }, w)
    }
}

impl fmt::Debug for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
