use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient rings supported by the exact engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    Integer,
    Rational,
    Prime(u64),
}

/// The field subset of [`Ring`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Ring {
    pub fn prime(p: u64) -> Result<Ring> {
        if is_prime(p) {
            Ok(Ring::Prime(p))
        } else {
            Err(Error::Config(format!("{p} is not prime")))
        }
    }

    pub fn as_field(self) -> Result<Field> {
        match self {
            Ring::Rational => Ok(Field::Rational),
            Ring::Prime(p) => Ok(Field::Prime(p)),
            Ring::Integer => Err(Error::UnsupportedRing("ℤ is not a field".into())),
        }
    }
}

impl From<Field> for Ring {
    fn from(f: Field) -> Ring {
        match f {
            Field::Rational => Ring::Rational,
            Field::Prime(p) => Ring::Prime(p),
        }
    }
}

impl FromStr for Ring {
    type Err = Error;
    fn from_str(s: &str) -> Result<Ring> {
        match s.trim().to_ascii_lowercase().as_str() {
            "q" => Ok(Ring::Rational),
            "z" => Ok(Ring::Integer),
            other => {
                let p = other
                    .strip_prefix("fp:")
                    .ok_or_else(|| Error::Config(format!("unknown coefficient ring {s:?}; expected q, z or fp:<prime>")))?;
                let p: u64 = p.parse().map_err(|e| Error::Config(format!("bad prime {p:?}: {e}")))?;
                Ring::prime(p)
            }
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integer => write!(f, "z"),
            Ring::Rational => write!(f, "q"),
            Ring::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Ring::from(*self).fmt(f)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rings() {
        assert_eq!("q".parse::<Ring>().unwrap(), Ring::Rational);
        assert_eq!("Z".parse::<Ring>().unwrap(), Ring::Integer);
        assert_eq!("fp:7".parse::<Ring>().unwrap(), Ring::Prime(7));
        assert!("fp:8".parse::<Ring>().is_err());
        assert!("r".parse::<Ring>().is_err());
        assert_eq!(Ring::Prime(3).to_string(), "fp:3");
    }
}
