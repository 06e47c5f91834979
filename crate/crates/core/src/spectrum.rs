//! Spectrum of the dephasing Hamiltonian: eigenvalues, environment-weighted
//! row sums, and the per-register-state signature vectors.
//!
//! The matrix S with entries `S_kn = Σ_i (-1)^{k_i} Σ_j (-1)^{n_j} g_ij` is
//! never materialized (it would be 2^K × 2^N). A register state `k` is fully
//! described by its length-N [`Signature`] `s_k[j] = Σ_i (-1)^{k_i} g_ij`,
//! since `S_kn = Σ_j (-1)^{n_j} s_k[j]`. Two rows of S agree for every `n`
//! exactly when the signatures are equal, which reduces the all-environments
//! quantifier to one exact vector comparison.

use crate::error::{Error, Result};
use crate::model::{BasisIndex, InteractionMatrix, Rational};

/// Upper bound on N for the exhaustive environment enumeration oracle.
pub const ORACLE_MAX_ENV: usize = 20;

/// Length-N exact vector `s_k[j] = Σ_i (-1)^{k_i} g_ij` attached to a
/// register basis state. Equality of signatures decides coherence
/// preservation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    values: Vec<Rational>,
}

impl Signature {
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn negated(&self) -> Signature {
        Signature {
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    /// Componentwise difference, the vector cᵀG for c = row sign difference.
    pub fn diff(&self, other: &Signature) -> Vec<Rational> {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect()
    }

    pub(crate) fn from_values(values: Vec<Rational>) -> Self {
        Signature { values }
    }
}

fn check_register(g: &InteractionMatrix, k: BasisIndex) -> Result<()> {
    if k.width() != g.register_size() {
        return Err(Error::WidthMismatch {
            expected: g.register_size(),
            found: k.width(),
        });
    }
    Ok(())
}

fn check_env(g: &InteractionMatrix, n: BasisIndex) -> Result<()> {
    if n.width() != g.env_size() {
        return Err(Error::WidthMismatch {
            expected: g.env_size(),
            found: n.width(),
        });
    }
    Ok(())
}

/// Environment-weighted sum over row `i` (1-based):
/// `h_i^(n) = Σ_j (-1)^{n_j} g_ij`.
pub fn h_vector(g: &InteractionMatrix, i: usize, n: BasisIndex) -> Result<Rational> {
    check_env(g, n)?;
    let row = g.row(i)?;
    let mut sum = Rational::zero();
    for (j, entry) in row.iter().enumerate() {
        if n.bit_at(j + 1) == 0 {
            sum = sum + entry;
        } else {
            sum = sum - entry;
        }
    }
    Ok(sum)
}

/// Eigenvalue of the interaction Hamiltonian on the product state `|k>|n>`:
/// `E_kn = (1/2) Σ_i (-1)^{k_i} h_i^(n)`, exact.
pub fn energy(g: &InteractionMatrix, k: BasisIndex, n: BasisIndex) -> Result<Rational> {
    check_register(g, k)?;
    check_env(g, n)?;
    let mut sum = Rational::zero();
    for i in 1..=g.register_size() {
        let h = h_vector(g, i, n)?;
        if k.bit_at(i) == 0 {
            sum = sum + h;
        } else {
            sum = sum - h;
        }
    }
    Ok(sum.halved())
}

/// Signature vector of register state `k`: `s_k[j] = Σ_i (-1)^{k_i} g_ij`.
pub fn signature(g: &InteractionMatrix, k: BasisIndex) -> Result<Signature> {
    check_register(g, k)?;
    let n = g.env_size();
    let mut values = vec![Rational::zero(); n];
    for (i, row) in g.rows().iter().enumerate() {
        let negative = k.bit_at(i + 1) == 1;
        for (j, entry) in row.iter().enumerate() {
            if negative {
                values[j] = &values[j] - entry;
            } else {
                values[j] = &values[j] + entry;
            }
        }
    }
    Ok(Signature::from_values(values))
}

/// Entry of S = AGB recovered from the signature:
/// `S_kn = Σ_j (-1)^{n_j} s_k[j]`. Equals `2 E_kn` by a different route.
pub fn s_entry(g: &InteractionMatrix, k: BasisIndex, n: BasisIndex) -> Result<Rational> {
    check_env(g, n)?;
    let sig = signature(g, k)?;
    let mut sum = Rational::zero();
    for (j, value) in sig.values().iter().enumerate() {
        if n.bit_at(j + 1) == 0 {
            sum = sum + value;
        } else {
            sum = sum - value;
        }
    }
    Ok(sum)
}

/// Exhaustive test that `Σ_j (-1)^{n_j} x_j = 0` for every one of the 2^N
/// sign patterns. Deliberately exponential; used as an oracle in tests and
/// in the verification command, never on production paths.
pub fn forall_env_zero(x: &[Rational]) -> Result<bool> {
    if x.len() > ORACLE_MAX_ENV {
        return Err(Error::EnvTooLarge(x.len()));
    }
    let width = x.len();
    for n in 0u64..(1u64 << width) {
        let mut sum = Rational::zero();
        for (j, xj) in x.iter().enumerate() {
            // MSB-first digit j+1 of n
            if (n >> (width - 1 - j)) & 1 == 0 {
                sum = sum + xj;
            } else {
                sum = sum - xj;
            }
        }
        if !sum.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
