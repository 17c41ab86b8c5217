use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dehn filling coefficient in the stored peripheral basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Slope {
    /// Leave the cusp open.
    Unfilled,
    /// Fill along p·meridian + q·longitude; always normalized.
    Curve { p: i64, q: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SlopeError {
    #[error("slope {p}/{q} is not primitive")]
    NotPrimitive { p: i64, q: i64 },
    #[error("cannot read slope from {0:?}")]
    Syntax(String),
}

impl Slope {
    /// Normalizes (p, q): gcd 1, then p > 0, or p = 0 and q = 1.
    pub fn new(p: i64, q: i64) -> Result<Slope, SlopeError> {
        if p.gcd(&q) != 1 {
            return Err(SlopeError::NotPrimitive { p, q });
        }
        let s = if p < 0 || (p == 0 && q < 0) { -1 } else { 1 };
        Ok(Slope::Curve { p: s * p, q: s * q })
    }

    pub fn is_filled(self) -> bool {
        matches!(self, Slope::Curve { .. })
    }

    pub fn coefficients(self) -> Option<(i64, i64)> {
        match self {
            Slope::Unfilled => None,
            Slope::Curve { p, q } => Some((p, q)),
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Unfilled => f.write_str("inf"),
            Slope::Curve { p, q } => write!(f, "{p}/{q}"),
        }
    }
}

impl FromStr for Slope {
    type Err = SlopeError;

    /// Accepts `inf`, `∞`, `p/q`, `(p,q)` and `p,q`.
    fn from_str(s: &str) -> Result<Slope, SlopeError> {
        let t = s.trim();
        if t == "inf" || t == "∞" || t == "-" {
            return Ok(Slope::Unfilled);
        }
        let inner = t.trim_start_matches('(').trim_end_matches(')');
        let (a, b) = inner
            .split_once('/')
            .or_else(|| inner.split_once(','))
            .ok_or_else(|| SlopeError::Syntax(s.to_string()))?;
        let p = a.trim().parse().map_err(|_| SlopeError::Syntax(s.to_string()))?;
        let q = b.trim().parse().map_err(|_| SlopeError::Syntax(s.to_string()))?;
        Slope::new(p, q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalization() {
        assert_eq!(Slope::new(-1, 3).unwrap(), Slope::Curve { p: 1, q: -3 });
        assert_eq!(Slope::new(0, -1).unwrap(), Slope::Curve { p: 0, q: 1 });
        assert!(Slope::new(2, 4).is_err());
        assert!(Slope::new(0, 0).is_err());
        assert_eq!("1/-5".parse::<Slope>().unwrap(), Slope::Curve { p: 1, q: -5 });
        assert_eq!("∞".parse::<Slope>().unwrap(), Slope::Unfilled);
        assert_eq!("(-2,1)".parse::<Slope>().unwrap(), Slope::Curve { p: 2, q: -1 });
    }

    proptest! {
        #[test]
        fn sign_flip_and_idempotence(p in -50i64..50, q in -50i64..50) {
            prop_assume!(p.gcd(&q) == 1);
            let s = Slope::new(p, q).unwrap();
            prop_assert_eq!(s, Slope::new(-p, -q).unwrap());
            let (a, b) = s.coefficients().unwrap();
            prop_assert_eq!(Slope::new(a, b).unwrap(), s);
            prop_assert!(a > 0 || (a == 0 && b == 1));
        }
    }
}
