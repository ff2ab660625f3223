//! Text encoding `{"N": n, "coeffs": [[num, den], …]}` meaning Σ c_k ζ_N^k.
//!
//! Integers are written as JSON numbers when they fit in `i64` and as decimal
//! strings otherwise; both forms are accepted on input. Input is canonicalized.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Cyclotomic, CycloError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntLit {
    Int(i64),
    Str(String),
}

impl IntLit {
    fn from_big(v: &BigInt) -> Self {
        match v.to_i64() {
            Some(x) => IntLit::Int(x),
            None => IntLit::Str(v.to_string()),
        }
    }

    fn to_big(&self) -> Result<BigInt, CycloError> {
        match self {
            IntLit::Int(x) => Ok(BigInt::from(*x)),
            IntLit::Str(s) => s
                .trim()
                .parse()
                .map_err(|_| CycloError::Malformed(format!("not an integer: {s:?}"))),
        }
    }
}

/// Serialized form of a [`Cyclotomic`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloText {
    #[serde(rename = "N")]
    pub n: u32,
    pub coeffs: Vec<[IntLit; 2]>,
}

impl From<&Cyclotomic> for CycloText {
    fn from(x: &Cyclotomic) -> Self {
        let n = x.conductor();
        let mut coeffs: Vec<[IntLit; 2]> = x
            .coeffs()
            .iter()
            .map(|(p, q)| [IntLit::from_big(p), IntLit::from_big(q)])
            .collect();
        coeffs.resize(n as usize, [IntLit::Int(0), IntLit::Int(1)]);
        CycloText { n, coeffs }
    }
}

impl TryFrom<&CycloText> for Cyclotomic {
    type Error = CycloError;

    fn try_from(t: &CycloText) -> Result<Self, CycloError> {
        if t.coeffs.len() > t.n as usize {
            return Err(CycloError::Malformed(format!(
                "{} coefficients for conductor {}",
                t.coeffs.len(),
                t.n
            )));
        }
        let pairs = t
            .coeffs
            .iter()
            .map(|[a, b]| {
                let den = b.to_big()?;
                if den.is_zero() {
                    return Err(CycloError::ZeroDenominator);
                }
                Ok((a.to_big()?, den))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Cyclotomic::from_exponent_coeffs(t.n, &pairs)
    }
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CycloText::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let t = CycloText::deserialize(d)?;
        Cyclotomic::try_from(&t).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_canonical_input_is_canonicalized() {
        // 1 + ζ_3 + ζ_3^2 = 0
        let json = r#"{"N":3,"coeffs":[[1,1],[1,1],[1,1]]}"#;
        let x: Cyclotomic = serde_json::from_str(json).unwrap();
        assert!(x.is_zero());
        let json = r#"{"N":4,"coeffs":[[0,1],[0,1],["2","4"]]}"#;
        let y: Cyclotomic = serde_json::from_str(json).unwrap();
        assert_eq!(y, Cyclotomic::rational(-1, 2).unwrap());
    }

    #[test]
    fn writes_full_length_list() {
        let x = Cyclotomic::root_of_unity(1, 3);
        let v = serde_json::to_value(&x).unwrap();
        assert_eq!(v, serde_json::json!({"N":3,"coeffs":[[0,1],[1,1],[0,1]]}));
    }

    #[test]
    fn rejects_zero_denominator() {
        let json = r#"{"N":1,"coeffs":[[1,0]]}"#;
        assert!(serde_json::from_str::<Cyclotomic>(json).is_err());
    }
}
