//! JSON file format for Laurent and polynomial matrices.
//!
//! ```json
//! {"m": 1, "N": 1, "kind": "laurent",
//!  "coeffs": {"-1": [[[-0.5, 0.0]]], "0": [[[1.25, 0.0]]], "1": [[[-0.5, 0.0]]]}}
//! ```
//!
//! Each coefficient is a list of rows of `[re, im]` pairs. Indices run over
//! `-N..=N` for `"laurent"` and `0..=N` for `"poly"` and are written in
//! numeric order, so parsing and re-serializing canonical output is
//! byte-identical.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{CMat, LaurentMatrix, PolyMatrix};
use crate::poly::Poly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Laurent,
    Poly,
}

type Block = Vec<Vec<[f64; 2]>>;

/// Coefficient blocks keyed by power of `z`, kept in numeric order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Coefficients(pub BTreeMap<i64, Block>);

impl Serialize for Coefficients {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(&k.to_string(), v)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Coefficients {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct CoeffVisitor;

        impl<'de> Visitor<'de> for CoeffVisitor {
            type Value = Coefficients;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from integer strings to coefficient blocks")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> std::result::Result<Coefficients, A::Error> {
                let mut out = BTreeMap::new();
                while let Some((key, block)) = access.next_entry::<String, Block>()? {
                    let index: i64 = key
                        .parse()
                        .map_err(|_| de::Error::custom(format!("coefficient index {key:?} is not an integer")))?;
                    if out.insert(index, block).is_some() {
                        return Err(de::Error::custom(format!("duplicate coefficient index {index}")));
                    }
                }
                Ok(Coefficients(out))
            }
        }

        deserializer.deserialize_map(CoeffVisitor)
    }
}

/// On-disk form of a matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub kind: Kind,
    pub coeffs: Coefficients,
}

/// A parsed and validated matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixData {
    Laurent(LaurentMatrix),
    Poly(PolyMatrix),
}

fn block_to_json(b: &CMat) -> Block {
    (0..b.nrows())
        .map(|i| (0..b.ncols()).map(|j| [b[(i, j)].re, b[(i, j)].im]).collect())
        .collect()
}

impl From<&LaurentMatrix> for MatrixFile {
    fn from(s: &LaurentMatrix) -> Self {
        let n = s.degree() as i64;
        MatrixFile {
            m: s.dim(),
            n: s.degree(),
            kind: Kind::Laurent,
            coeffs: Coefficients((-n..=n).map(|k| (k, block_to_json(s.coeff(k)))).collect()),
        }
    }
}

impl From<&PolyMatrix> for MatrixFile {
    fn from(p: &PolyMatrix) -> Self {
        MatrixFile {
            m: p.dim(),
            n: p.degree(),
            kind: Kind::Poly,
            coeffs: Coefficients(
                p.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(k, b)| (k as i64, block_to_json(b)))
                    .collect(),
            ),
        }
    }
}

impl From<&Poly> for MatrixFile {
    fn from(p: &Poly) -> Self {
        let coeffs = if p.coeffs().is_empty() {
            vec![Complex64::new(0.0, 0.0)]
        } else {
            p.coeffs().to_vec()
        };
        MatrixFile {
            m: 1,
            n: coeffs.len() - 1,
            kind: Kind::Poly,
            coeffs: Coefficients(
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, c)| (k as i64, vec![vec![[c.re, c.im]]]))
                    .collect(),
            ),
        }
    }
}

impl MatrixFile {
    fn blocks(&self) -> Result<Vec<CMat>> {
        if self.m == 0 {
            return Err(Error::InvalidInput("\"m\" must be at least 1".into()));
        }
        let n = self.n as i64;
        let low = match self.kind {
            Kind::Laurent => -n,
            Kind::Poly => 0,
        };
        let expected: Vec<i64> = (low..=n).collect();
        let found: Vec<i64> = self.coeffs.0.keys().copied().collect();
        if found != expected {
            return Err(Error::InvalidInput(format!(
                "coefficient indices must be exactly {low}..={n}, found {found:?}"
            )));
        }
        self.coeffs
            .0
            .iter()
            .map(|(k, rows)| {
                if rows.len() != self.m || rows.iter().any(|r| r.len() != self.m) {
                    return Err(Error::InvalidInput(format!(
                        "coefficient {k} is not {m}x{m}",
                        m = self.m
                    )));
                }
                Ok(CMat::from_fn(self.m, self.m, |i, j| {
                    let [re, im] = rows[i][j];
                    Complex64::new(re, im)
                }))
            })
            .collect()
    }

    pub fn into_data(self) -> Result<MatrixData> {
        let blocks = self.blocks()?;
        Ok(match self.kind {
            Kind::Laurent => MatrixData::Laurent(LaurentMatrix::new(blocks)?),
            Kind::Poly => MatrixData::Poly(PolyMatrix::new(blocks)?),
        })
    }
}

fn from_str(text: &str) -> Result<MatrixFile> {
    Ok(serde_json::from_str(text)?)
}

pub fn parse_matrix(text: &str) -> Result<MatrixData> {
    from_str(text)?.into_data()
}

pub fn parse_laurent(text: &str) -> Result<LaurentMatrix> {
    match parse_matrix(text)? {
        MatrixData::Laurent(s) => Ok(s),
        MatrixData::Poly(_) => Err(Error::InvalidInput("expected \"kind\": \"laurent\"".into())),
    }
}

pub fn parse_poly_matrix(text: &str) -> Result<PolyMatrix> {
    match parse_matrix(text)? {
        MatrixData::Poly(p) => Ok(p),
        MatrixData::Laurent(_) => Err(Error::InvalidInput("expected \"kind\": \"poly\"".into())),
    }
}

/// A scalar polynomial stored as a `1x1` polynomial matrix.
pub fn parse_scalar_poly(text: &str) -> Result<Poly> {
    let p = parse_poly_matrix(text)?;
    if p.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: p.dim(),
        });
    }
    Ok(p.entry(0, 0))
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn laurent_to_json(s: &LaurentMatrix) -> String {
    pretty(&MatrixFile::from(s))
}

pub fn poly_matrix_to_json(p: &PolyMatrix) -> String {
    pretty(&MatrixFile::from(p))
}

pub fn scalar_poly_to_json(p: &Poly) -> String {
    pretty(&MatrixFile::from(p))
}
