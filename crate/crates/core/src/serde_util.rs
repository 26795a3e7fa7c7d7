//! Serde adapters for exact rationals, written as `"p/q"` (or `"p"` for
//! integers).

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{de, Deserialize, Deserializer, Serializer};

use crate::Rational;

pub fn rational_to_string(x: &Rational) -> String {
    x.to_string()
}

pub fn rational_from_str(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.trim().parse().ok()?;
            if q == BigInt::from(0) {
                return None;
            }
            Some(Rational::new(p.trim().parse().ok()?, q))
        }
        None => Some(Rational::from_integer(text.parse().ok()?)),
    }
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational_to_string(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        rational_from_str(&text)
            .ok_or_else(|| de::Error::custom(format!("not a rational: {text:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_forms() {
        let half = rational_from_str("75/2").unwrap();
        assert_eq!(rational_to_string(&half), "75/2");
        assert_eq!(rational_to_f64(&half), 37.5);
        assert_eq!(rational_to_string(&rational_from_str("-4").unwrap()), "-4");
        assert_eq!(rational_from_str("6/4").unwrap(), rational_from_str("3/2").unwrap());
        assert!(rational_from_str("1/0").is_none());
        assert!(rational_from_str("x").is_none());
    }
}
