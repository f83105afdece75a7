//! Serde helpers that write integers as decimal strings. JSON numbers are
//! only exact up to 2^53 in most readers; lattice moduli, census counters,
//! and planner values are emitted as strings so nothing silently rounds.
//! Deserialization accepts either form.

use serde::{de, Deserialize, Deserializer, Serializer};
use std::fmt::Display;
use std::str::FromStr;

#[derive(Deserialize)]
#[serde(untagged)]
enum StringOrNumber<N> {
    Str(String),
    Num(N),
}

fn parse_flexible<'de, D, N>(deserializer: D) -> Result<N, D::Error>
where
    D: Deserializer<'de>,
    N: FromStr + Deserialize<'de>,
    N::Err: Display,
{
    match StringOrNumber::<N>::deserialize(deserializer)? {
        StringOrNumber::Str(s) => s.trim().parse::<N>().map_err(de::Error::custom),
        StringOrNumber::Num(n) => Ok(n),
    }
}

macro_rules! string_number_mod {
    ($name:ident, $ty:ty) => {
        pub mod $name {
            use super::*;

            pub fn serialize<S: Serializer>(v: &$ty, s: S) -> Result<S::Ok, S::Error> {
                s.collect_str(v)
            }

            pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<$ty, D::Error> {
                parse_flexible(d)
            }
        }
    };
}

string_number_mod!(u64_string, u64);
string_number_mod!(i64_string, i64);

pub mod biguint_string {
    use super::*;
    use num_bigint::BigUint;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.trim().parse::<BigUint>().map_err(de::Error::custom)
    }
}

pub mod opt_u64_string {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<u64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.collect_str(x),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u64>, D::Error> {
        let opt: Option<StringOrNumber<u64>> = Option::deserialize(d)?;
        match opt {
            None => Ok(None),
            Some(StringOrNumber::Num(n)) => Ok(Some(n)),
            Some(StringOrNumber::Str(st)) => {
                st.trim().parse::<u64>().map(Some).map_err(de::Error::custom)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use num_bigint::BigUint;
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Probe {
        #[serde(with = "super::u64_string")]
        a: u64,
        #[serde(with = "super::biguint_string")]
        b: BigUint,
        #[serde(with = "super::opt_u64_string")]
        c: Option<u64>,
    }

    #[test]
    fn round_trips_and_accepts_numbers() {
        let p = Probe {
            a: u64::MAX,
            b: BigUint::parse_bytes(b"123456789012345678901234567890", 10).unwrap(),
            c: Some(7),
        };
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"18446744073709551615\""));
        let back: Probe = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        let lenient: Probe =
            serde_json::from_str(r#"{"a": 12, "b": "99", "c": null}"#).unwrap();
        assert_eq!(lenient.a, 12);
        assert_eq!(lenient.c, None);
    }
}
