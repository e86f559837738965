//! Decimal-string serialization for arbitrary-precision integers.

use num_bigint::BigInt;
use serde::ser::SerializeSeq;
use serde::Serializer;

pub fn int<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn opt_int<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_some(&x.to_string()),
        None => s.serialize_none(),
    }
}

pub fn opt_vec<S: Serializer>(v: &Option<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(xs) => {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                seq.serialize_element(&x.to_string())?;
            }
            seq.end()
        }
        None => s.serialize_none(),
    }
}
