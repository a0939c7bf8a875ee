//! `{"conductor": n, "coeffs": {"e": [num, den], ..}}`, written in the
//! minimal conductor with zero coordinates omitted.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use super::{CycNum, Rat};

fn int_to_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(x) => Value::from(x),
        None => Value::String(v.to_string()),
    }
}

fn json_to_int(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

impl CycNum {
    pub fn to_json(&self) -> Value {
        let m = self.minimize();
        let coeffs: serde_json::Map<String, Value> = m
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| {
                (
                    e.to_string(),
                    Value::Array(vec![int_to_json(c.numer()), int_to_json(c.denom())]),
                )
            })
            .collect();
        serde_json::json!({ "conductor": m.conductor(), "coeffs": coeffs })
    }

    /// Accepts exponents in `0..n`; they need not lie in the power basis.
    pub fn from_json(v: &Value) -> Option<CycNum> {
        let n = v.get("conductor")?.as_u64()? as u32;
        if n == 0 {
            return None;
        }
        let coeffs = v.get("coeffs")?.as_object()?;
        let mut terms = BTreeMap::new();
        for (k, pair) in coeffs {
            let e: u32 = k.parse().ok()?;
            if e >= n {
                return None;
            }
            let arr = pair.as_array()?;
            if arr.len() != 2 {
                return None;
            }
            let num = json_to_int(&arr[0])?;
            let den = json_to_int(&arr[1])?;
            if den.is_zero() {
                return None;
            }
            terms.insert(e as i64, Rat::new(num, den));
        }
        Some(CycNum::from_exponent_coeffs(n, terms))
    }
}

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        CycNum::from_json(&v).ok_or_else(|| D::Error::custom("malformed cyclotomic number"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let a = &CycNum::root_of_unity(12, 1) + &CycNum::from_int(3);
        let text = serde_json::to_string(&a).unwrap();
        let b: CycNum = serde_json::from_str(&text).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            serde_json::to_string(&CycNum::from_int(-2)).unwrap(),
            r#"{"coeffs":{"0":[-2,1]},"conductor":1}"#
        );
    }
}
