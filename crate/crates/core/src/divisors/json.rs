use std::collections::HashSet;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{Ambient, CurveFunctional, DivisorClass};
use crate::combinat::{BasisVector, FCurve};
use crate::error::{Error, Result};
use crate::exactlin::io::parse_rational;

pub const BASIS_TAG: &str = "sl2-level1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordJson {
    pub bits: String,
    pub value: String,
}

/// `{"n": 5, "basis": "sl2-level1", "coords": [{"bits": "11110", "value": "-1/2"}, …]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassJson {
    pub n: usize,
    pub basis: String,
    pub coords: Vec<CoordJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueJson {
    pub curve: String,
    pub value: String,
}

/// `{"n": 5, "values": [{"curve": "1|2,3|4|5", "value": "1"}, …]}`; curves
/// not listed take the value 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalJson {
    pub n: usize,
    pub values: Vec<ValueJson>,
}

impl Ambient {
    /// Every coordinate, in basis order.
    pub fn class_to_json(&self, x: &DivisorClass) -> Result<ClassJson> {
        self.check_class(x)?;
        Ok(ClassJson {
            n: x.n,
            basis: BASIS_TAG.to_string(),
            coords: self
                .basis()
                .iter()
                .zip(&x.coords)
                .map(|(a, c)| CoordJson {
                    bits: a.to_string(),
                    value: c.to_string(),
                })
                .collect(),
        })
    }

    /// Coordinates not listed are 0; repeated entries are rejected.
    pub fn class_from_json(&self, j: &ClassJson) -> Result<DivisorClass> {
        if j.n != self.n() {
            return Err(Error::AmbientMismatch {
                expected: self.n(),
                found: j.n,
            });
        }
        if j.basis != BASIS_TAG {
            return Err(Error::Parse(format!("unknown basis tag {:?}", j.basis)));
        }
        let mut x = self.zero_class();
        let mut seen = HashSet::new();
        for c in &j.coords {
            let a = BasisVector::parse(&c.bits)?;
            if a.n() != self.n() {
                return Err(Error::AmbientMismatch {
                    expected: self.n(),
                    found: a.n(),
                });
            }
            if !seen.insert(a.bits()) {
                return Err(Error::Parse(format!("coordinate {} listed twice", c.bits)));
            }
            let k = self.pairing().basis_position(a.bits()).expect("parsed vectors lie in A_n");
            x.coords[k] = parse_rational(&c.value)?;
        }
        Ok(x)
    }

    /// Nonzero values only.
    pub fn functional_to_json(&self, v: &CurveFunctional) -> FunctionalJson {
        FunctionalJson {
            n: v.n,
            values: self
                .curves()
                .iter()
                .zip(&v.values)
                .filter(|(_, x)| !x.is_zero())
                .map(|(c, x)| ValueJson {
                    curve: c.encode(),
                    value: x.to_string(),
                })
                .collect(),
        }
    }

    pub fn functional_from_json(&self, j: &FunctionalJson) -> Result<CurveFunctional> {
        if j.n != self.n() {
            return Err(Error::AmbientMismatch {
                expected: self.n(),
                found: j.n,
            });
        }
        let mut values = vec![BigRational::zero(); self.curves().len()];
        let mut seen = HashSet::new();
        for v in &j.values {
            let c = FCurve::parse(&v.curve, self.n())?;
            if !seen.insert(c) {
                return Err(Error::Parse(format!("curve {} listed twice", v.curve)));
            }
            let k = self.pairing().curve_position(&c).expect("parsed curves are enumerated");
            values[k] = parse_rational(&v.value)?;
        }
        Ok(CurveFunctional {
            n: self.n(),
            values,
            realizable: false,
        })
    }
}
