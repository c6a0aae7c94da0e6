use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Ratio of the best candidate's score to the runner-up's.
///
/// `Unbounded` means the runner-up had a p-value of one (or there was no
/// runner-up); it sorts above every finite value and absorbs products.
#[derive(Clone, Copy, Debug)]
pub enum Confidence {
    Finite(f64),
    Unbounded,
}

impl Confidence {
    pub fn ratio(best: f64, second: f64) -> Confidence {
        if second > 0.0 {
            Confidence::Finite(best / second)
        } else {
            Confidence::Unbounded
        }
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            Confidence::Finite(v) => Some(*v),
            Confidence::Unbounded => None,
        }
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, Confidence::Unbounded)
    }

    /// `+inf` for `Unbounded`; handy for order statistics.
    pub fn as_f64(&self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    pub fn from_f64(v: f64) -> Confidence {
        if v == f64::INFINITY {
            Confidence::Unbounded
        } else {
            Confidence::Finite(v)
        }
    }
}

impl Mul for Confidence {
    type Output = Confidence;

    fn mul(self, rhs: Confidence) -> Confidence {
        match (self, rhs) {
            (Confidence::Finite(a), Confidence::Finite(b)) => Confidence::Finite(a * b),
            _ => Confidence::Unbounded,
        }
    }
}

impl Ord for Confidence {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Confidence::Finite(a), Confidence::Finite(b)) => a.total_cmp(b),
            (Confidence::Finite(_), Confidence::Unbounded) => Ordering::Less,
            (Confidence::Unbounded, Confidence::Finite(_)) => Ordering::Greater,
            (Confidence::Unbounded, Confidence::Unbounded) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Confidence {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Confidence {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Confidence {}

impl fmt::Display for Confidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Confidence::Finite(v) => write!(f, "{v}"),
            Confidence::Unbounded => f.write_str("unbounded"),
        }
    }
}

impl Serialize for Confidence {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Confidence::Finite(v) => serializer.serialize_f64(*v),
            Confidence::Unbounded => serializer.serialize_str("unbounded"),
        }
    }
}

struct ConfidenceVisitor;

impl<'de> Visitor<'de> for ConfidenceVisitor {
    type Value = Confidence;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a number or the string \"unbounded\"")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Confidence, E> {
        Ok(Confidence::Finite(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Confidence, E> {
        Ok(Confidence::Finite(v as f64))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Confidence, E> {
        Ok(Confidence::Finite(v as f64))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Confidence, E> {
        match v {
            "unbounded" => Ok(Confidence::Unbounded),
            _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
        }
    }
}

impl<'de> Deserialize<'de> for Confidence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(ConfidenceVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unbounded_sorts_last_and_absorbs() {
        let mut v = [
            Confidence::Unbounded,
            Confidence::Finite(3.0),
            Confidence::Finite(1e300),
        ];
        v.sort();
        assert_eq!(v[2], Confidence::Unbounded);
        assert_eq!(
            Confidence::Finite(2.0) * Confidence::Unbounded,
            Confidence::Unbounded
        );
        assert_eq!(
            Confidence::Finite(1.3) * Confidence::Finite(2.0),
            Confidence::Finite(1.3 * 2.0)
        );
    }

    #[test]
    fn json_form() {
        assert_eq!(
            serde_json::to_string(&Confidence::Unbounded).unwrap(),
            "\"unbounded\""
        );
        assert_eq!(
            serde_json::to_string(&Confidence::Finite(1.5)).unwrap(),
            "1.5"
        );
        let c: Confidence = serde_json::from_str("2").unwrap();
        assert_eq!(c, Confidence::Finite(2.0));
        let c: Confidence = serde_json::from_str("\"unbounded\"").unwrap();
        assert!(c.is_unbounded());
        assert!(serde_json::from_str::<Confidence>("\"huge\"").is_err());
    }
}
