//! Serde adapters writing rationals as `["num", "den"]` decimal strings.
//!
//! Use with `#[serde(with = "crate::arith::serde_rat")]`; the submodules
//! cover the container shapes used in certificates.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Rational;

pub fn to_pair(q: &Rational) -> [String; 2] {
    [q.numer().to_string(), q.denom().to_string()]
}

pub fn from_pair(pair: &[String; 2]) -> Result<Rational, String> {
    let num: BigInt = pair[0].parse().map_err(|_| format!("bad numerator {:?}", pair[0]))?;
    let den: BigInt = pair[1].parse().map_err(|_| format!("bad denominator {:?}", pair[1]))?;
    if den.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(Rational::new(num, den))
}

pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    to_pair(q).serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
    let pair = <[String; 2]>::deserialize(d)?;
    from_pair(&pair).map_err(D::Error::custom)
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(to_pair).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<[String; 2]>::deserialize(d)?
            .iter()
            .map(|p| from_pair(p).map_err(D::Error::custom))
            .collect()
    }
}

pub mod opt {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        q.as_ref().map(to_pair).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<[String; 2]>::deserialize(d)?
            .map(|p| from_pair(&p).map_err(D::Error::custom))
            .transpose()
    }
}

/// `Vec<(usize, Rational)>` as a list of `[i, ["num", "den"]]`.
pub mod indexed {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[(usize, Rational)], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|(i, q)| (*i, to_pair(q)))
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Vec<(usize, Rational)>, D::Error> {
        Vec::<(usize, [String; 2])>::deserialize(d)?
            .iter()
            .map(|(i, p)| from_pair(p).map(|q| (*i, q)).map_err(D::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Holder {
        #[serde(with = "super")]
        q: Rational,
        #[serde(with = "super::vec")]
        qs: Vec<Rational>,
    }

    #[test]
    fn round_trip() {
        let h = Holder {
            q: rat(-52, 7),
            qs: vec![rat(5, 2), rat(0, 1)],
        };
        let s = serde_json::to_string(&h).unwrap();
        assert_eq!(s, r#"{"q":["-52","7"],"qs":[["5","2"],["0","1"]]}"#);
        assert_eq!(serde_json::from_str::<Holder>(&s).unwrap(), h);
        assert!(serde_json::from_str::<Holder>(r#"{"q":["1","0"],"qs":[]}"#).is_err());
    }
}
