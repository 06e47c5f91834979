//! The interaction matrix G and its JSON wire format.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Rational;

/// Largest supported register; partitioning enumerates all 2^K basis states.
pub const MAX_REGISTER: usize = 24;

/// K×N matrix of coupling strengths `g_ij` between register spin `i` and
/// environment spin `j`, in dimensionless energy units (ħ = 1).
///
/// Every structural property of the model derives from this matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteractionMatrix {
    rows: Vec<Vec<Rational>>,
}

impl InteractionMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let k = rows.len();
        if k == 0 || k > MAX_REGISTER {
            return Err(Error::RegisterSize(k));
        }
        let n = rows[0].len();
        if n == 0 {
            return Err(Error::DimensionMismatch(
                "environment size N must be at least 1".into(),
            ));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "row {} has {} entries, expected N = {}",
                    i + 1,
                    row.len(),
                    n
                )));
            }
        }
        Ok(InteractionMatrix { rows })
    }

    /// Convenience constructor from integer couplings.
    pub fn from_integers(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v)).collect())
                .collect(),
        )
    }

    /// Number of register spins K.
    pub fn register_size(&self) -> usize {
        self.rows.len()
    }

    /// Number of environment spins N.
    pub fn env_size(&self) -> usize {
        self.rows[0].len()
    }

    /// Row `i` (1-based), the couplings of register spin `i`.
    pub fn row(&self, i: usize) -> Result<&[Rational]> {
        if i == 0 || i > self.rows.len() {
            return Err(Error::PositionOutOfRange {
                position: i,
                limit: self.rows.len(),
            });
        }
        Ok(&self.rows[i - 1])
    }

    /// Entry `g_ij` with 1-based row and column.
    pub fn entry(&self, i: usize, j: usize) -> Result<&Rational> {
        let row = self.row(i)?;
        if j == 0 || j > row.len() {
            return Err(Error::PositionOutOfRange {
                position: j,
                limit: row.len(),
            });
        }
        Ok(&row[j - 1])
    }

    pub(crate) fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Parse the JSON document `{"K": .., "N": .., "g": [[rational]]}` where a
    /// rational is either a `["num","den"]` pair of integer strings or a
    /// decimal string converted exactly.
    pub fn parse(text: &str) -> Result<Self> {
        let doc: MatrixDoc =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        if doc.g.len() != doc.k {
            return Err(Error::DimensionMismatch(format!(
                "g has {} rows, declared K = {}",
                doc.g.len(),
                doc.k
            )));
        }
        let mut rows = Vec::with_capacity(doc.k);
        for row in &doc.g {
            if row.len() != doc.n {
                return Err(Error::DimensionMismatch(format!(
                    "row has {} entries, declared N = {}",
                    row.len(),
                    doc.n
                )));
            }
            rows.push(
                row.iter()
                    .map(RationalRepr::to_rational)
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        Self::new(rows)
    }

    /// Serialize back to the wire format, entries always as `["num","den"]`.
    pub fn to_json(&self) -> String {
        let doc = MatrixDoc {
            k: self.register_size(),
            n: self.env_size(),
            g: self
                .rows
                .iter()
                .map(|row| row.iter().map(RationalRepr::of).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("matrix document serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixDoc {
    #[serde(rename = "K")]
    k: usize,
    #[serde(rename = "N")]
    n: usize,
    g: Vec<Vec<RationalRepr>>,
}

/// Wire form of a rational entry.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum RationalRepr {
    Pair([String; 2]),
    Decimal(String),
}

impl RationalRepr {
    pub(crate) fn of(r: &Rational) -> Self {
        RationalRepr::Pair([r.numer().to_string(), r.denom().to_string()])
    }

    pub(crate) fn to_rational(&self) -> Result<Rational> {
        match self {
            RationalRepr::Pair([num, den]) => {
                let parse = |s: &str| {
                    s.parse().map_err(|_| {
                        Error::NonFiniteEntry(format!("cannot parse {s:?} as an integer"))
                    })
                };
                Rational::from_big(parse(num)?, parse(den)?)
            }
            RationalRepr::Decimal(text) => Rational::parse_decimal(text),
        }
    }
}
