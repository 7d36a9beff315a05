//! Canonical JSON encoding helpers.
//!
//! Objects are emitted with sorted keys, integers as exact JSON numbers and
//! rationals as lowest-terms strings, so that parsing emitted output and
//! serializing it again reproduces the same bytes.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{Number, Value};

use crate::series::Rational;

/// Version tag carried by every top-level CLI object.
pub const SCHEMA: &str = "kmhomotopy/1";

pub fn big_to_json(x: &BigInt) -> Value {
    Value::Number(Number::from_str(&x.to_string()).expect("integer literal is a JSON number"))
}

pub fn rational_to_json(x: &Rational) -> Value {
    Value::String(x.to_string())
}

pub fn to_canonical_string(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("serializing a Value cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_numbers_stay_exact() {
        let x = BigInt::from_str("-98765432109876543210987654321").unwrap();
        let text = big_to_json(&x).to_string();
        assert_eq!(text, "-98765432109876543210987654321");
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_string(), text);
    }

    #[test]
    fn canonical_round_trip() {
        let v = serde_json::json!({"z": 1, "a": [big_to_json(&BigInt::from(7))], "m": "1/3"});
        let text = to_canonical_string(&v);
        let again = to_canonical_string(&serde_json::from_str(&text).unwrap());
        assert_eq!(text, again);
        assert!(text.find("\"a\"").unwrap() < text.find("\"m\"").unwrap());
    }
}
