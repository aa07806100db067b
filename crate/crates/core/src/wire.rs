//! JSON wire formats. Rationals travel as `"p/q"` strings so nothing is
//! lost to floating point.

use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeffring::{ExpMonomial, ExpPoly, GaussianRational, Rational};
use crate::liestruct::{CartanData, Subalgebra, DEFAULT_SEED};
use crate::realize::{Audit, Realization};
use crate::roots::SimpleType;
use crate::vfield::{FieldError, VectorField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WireError {
    #[error("bad rational literal `{0}`")]
    Rational(String),
    #[error("term has {found} exponents or frequencies, expected {expected}")]
    Length { expected: usize, found: usize },
    #[error("field lists {found} coefficients but has dimension {expected}")]
    Coefficients { expected: usize, found: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireTerm {
    pub re: String,
    pub im: String,
    pub pow: Vec<u32>,
    pub freq: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireCoeff {
    pub terms: Vec<WireTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireField {
    pub dim: usize,
    pub coeffs: Vec<WireCoeff>,
}

/// `p/q` with an explicit denominator, so the format is uniform.
pub fn rational_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational, WireError> {
    let s = s.trim();
    let bad = || WireError::Rational(s.to_string());
    let q = Rational::from_str(s).map_err(|_| bad())?;
    Ok(q)
}

impl From<&VectorField> for WireField {
    fn from(v: &VectorField) -> Self {
        let coeffs = v
            .coeffs()
            .iter()
            .map(|p| WireCoeff {
                terms: p
                    .terms()
                    .map(|(m, c)| WireTerm {
                        re: rational_string(c.re()),
                        im: rational_string(c.im()),
                        pow: m.pow().to_vec(),
                        freq: m.freq().iter().map(rational_string).collect(),
                    })
                    .collect(),
            })
            .collect();
        WireField { dim: v.dim(), coeffs }
    }
}

impl TryFrom<&WireField> for VectorField {
    type Error = WireError;
    fn try_from(w: &WireField) -> Result<Self, WireError> {
        if w.coeffs.len() != w.dim {
            return Err(WireError::Coefficients { expected: w.dim, found: w.coeffs.len() });
        }
        let coeffs = w
            .coeffs
            .iter()
            .map(|c| {
                let terms = c
                    .terms
                    .iter()
                    .map(|t| {
                        for len in [t.pow.len(), t.freq.len()] {
                            if len != w.dim {
                                return Err(WireError::Length { expected: w.dim, found: len });
                            }
                        }
                        let freq = t.freq.iter().map(|q| parse_rational(q)).collect::<Result<Vec<_>, _>>()?;
                        let c = GaussianRational::new(parse_rational(&t.re)?, parse_rational(&t.im)?);
                        Ok((ExpMonomial::new(t.pow.clone(), freq), c))
                    })
                    .collect::<Result<Vec<_>, WireError>>()?;
                Ok(ExpPoly::from_terms(w.dim, terms))
            })
            .collect::<Result<Vec<_>, WireError>>()?;
        Ok(VectorField::new(coeffs)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireStructureConstant {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WireRootSpace {
    pub root: Vec<String>,
    pub vectors: Vec<WireField>,
}

/// Summary of a [`Subalgebra`]: basis, structure constants as sparse
/// triplets `[e_a, e_b] = sum c * e_c` (0-based, `a < b`), Killing data,
/// rank and, when a Cartan family is given, roots and type.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubalgebraReport {
    pub ambient_dim: usize,
    pub dim: usize,
    pub basis: Vec<WireField>,
    pub basis_text: Vec<String>,
    pub structure_constants: Vec<WireStructureConstant>,
    pub killing_determinant: String,
    pub semisimple: bool,
    pub generic_rank: usize,
    pub cartan: Option<Vec<usize>>,
    pub roots: Option<Vec<WireRootSpace>>,
    pub types: Option<Vec<SimpleType>>,
    pub type_error: Option<String>,
}

impl SubalgebraReport {
    pub fn new(s: &Subalgebra, cartan: Option<(&[usize], Result<&CartanData, String>)>, seed: Option<u64>) -> Self {
        let det = s.killing_determinant();
        let structure_constants = s
            .structure_triplets()
            .into_iter()
            .map(|(a, b, c, v)| WireStructureConstant {
                a,
                b,
                c,
                re: rational_string(v.re()),
                im: rational_string(v.im()),
            })
            .collect();
        let (cartan_idx, roots, types, type_error) = match cartan {
            None => (None, None, None, None),
            Some((idx, Err(e))) => (Some(idx.to_vec()), None, None, Some(e)),
            Some((idx, Ok(cd))) => {
                let roots = cd
                    .root_spaces()
                    .iter()
                    .map(|(r, vs)| WireRootSpace {
                        root: r.iter().map(rational_string).collect(),
                        vectors: vs.iter().map(|c| WireField::from(&s.element(c))).collect(),
                    })
                    .collect();
                match cd.identify_type() {
                    Ok(t) => (Some(idx.to_vec()), Some(roots), Some(t), None),
                    Err(e) => (Some(idx.to_vec()), Some(roots), None, Some(e.to_string())),
                }
            }
        };
        Self {
            ambient_dim: s.ambient_dim(),
            dim: s.dim(),
            basis: s.basis().iter().map(WireField::from).collect(),
            basis_text: s.basis().iter().map(ToString::to_string).collect(),
            structure_constants,
            killing_determinant: det.to_string(),
            semisimple: !num_traits::Zero::is_zero(&det),
            generic_rank: s.generic_rank(seed.unwrap_or(DEFAULT_SEED)),
            cartan: cartan_idx,
            roots,
            types,
            type_error,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WireGenerator {
    pub name: String,
    pub text: String,
    pub field: WireField,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RealizationReport {
    pub ambient_dim: usize,
    pub declared_type: Vec<SimpleType>,
    pub generators: Vec<WireGenerator>,
    pub audit: Option<Audit>,
}

impl RealizationReport {
    pub fn new(r: &Realization, audit: Option<Audit>) -> Self {
        Self {
            ambient_dim: r.ambient_dim(),
            declared_type: r.declared_type().to_vec(),
            generators: r
                .generators()
                .into_iter()
                .map(|(name, f)| WireGenerator { name, text: f.to_string(), field: WireField::from(&f) })
                .collect(),
            audit,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::{int, rat};

    #[test]
    fn field_round_trip() {
        let f = VectorField::exp_scaled(vec![int(1), rat(-1, 2)], vec![GaussianRational::from_ratio(2, 3), GaussianRational::i()]);
        let w = WireField::from(&f);
        let json = serde_json::to_string(&w).unwrap();
        assert!(json.starts_with("{\"dim\":2,\"coeffs\":[{\"terms\":[{\"re\":\"2/3\",\"im\":\"0/1\""));
        let back: WireField = serde_json::from_str(&json).unwrap();
        assert_eq!(VectorField::try_from(&back).unwrap(), f);
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse_rational("1.5").is_err());
        let w = WireField { dim: 2, coeffs: vec![] };
        assert!(VectorField::try_from(&w).is_err());
    }
}
