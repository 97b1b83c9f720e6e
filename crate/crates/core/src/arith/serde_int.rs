//! Serde adapters writing big integers as decimal strings.

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub fn serialize<S: Serializer>(m: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    m.to_string().serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    let s = String::deserialize(d)?;
    s.parse().map_err(|_| D::Error::custom(format!("bad integer {s:?}")))
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|m| m.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(|_| D::Error::custom(format!("bad integer {s:?}"))))
            .collect()
    }
}

pub mod opt {
    use super::*;

    pub fn serialize<S: Serializer>(m: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        m.as_ref().map(|m| m.to_string()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| s.parse().map_err(|_| D::Error::custom(format!("bad integer {s:?}"))))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Holder {
        #[serde(with = "super")]
        m: BigInt,
        #[serde(with = "super::vec")]
        ms: Vec<BigInt>,
        #[serde(with = "super::opt")]
        o: Option<BigInt>,
    }

    #[test]
    fn round_trip() {
        let h = Holder {
            m: BigInt::from(-3840040359958819i64),
            ms: vec![BigInt::from(61), BigInt::from(0)],
            o: None,
        };
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, r#"{"m":"-3840040359958819","ms":["61","0"],"o":null}"#);
        assert_eq!(serde_json::from_str::<Holder>(&s).unwrap(), h);
        assert!(serde_json::from_str::<Holder>(r#"{"m":"1x","ms":[],"o":null}"#).is_err());
    }
}
