//! Environment and register state containers.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::BasisIndex;

/// Absolute tolerance for unit-norm and trace checks.
pub const NORM_TOL: f64 = 1e-12;

/// Hermiticity tolerance for externally supplied density matrices.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Largest register for which a full 2^K × 2^K density matrix is built.
pub const MAX_DENSITY_REGISTER: usize = 12;

/// Sparse normalized environment state: amplitudes `b_n` on distinct basis
/// indices, all of the same width N. Only nonzero amplitudes are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct EnvState {
    width: usize,
    terms: Vec<(BasisIndex, C64)>,
}

impl EnvState {
    pub fn new(width: usize, terms: Vec<(BasisIndex, C64)>) -> Result<Self> {
        if width == 0 || width > BasisIndex::MAX_WIDTH {
            return Err(Error::InvalidWidth(width));
        }
        let mut kept: Vec<(BasisIndex, C64)> = Vec::with_capacity(terms.len());
        for (n, b) in terms {
            if n.width() != width {
                return Err(Error::WidthMismatch {
                    expected: width,
                    found: n.width(),
                });
            }
            if !b.re.is_finite() || !b.im.is_finite() {
                return Err(Error::NonFiniteValue(format!(
                    "amplitude on basis index {}",
                    n.value()
                )));
            }
            if b != C64::new(0.0, 0.0) {
                kept.push((n, b));
            }
        }
        if kept.is_empty() {
            return Err(Error::EmptyState);
        }
        kept.sort_by_key(|(n, _)| n.value());
        for pair in kept.windows(2) {
            if pair[0].0.value() == pair[1].0.value() {
                return Err(Error::DuplicateTerm(pair[0].0.value()));
            }
        }
        let norm_sqr: f64 = kept.iter().map(|(_, b)| b.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(EnvState { width, terms: kept })
    }

    /// Uniform superposition over all 2^width basis states.
    pub fn uniform(width: usize) -> Result<Self> {
        if width == 0 || width > 26 {
            return Err(Error::InvalidWidth(width));
        }
        let amp = C64::new((0.5f64).powi(width as i32).sqrt(), 0.0);
        let terms = (0..1u64 << width)
            .map(|n| Ok((BasisIndex::new(n, width)?, amp)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(width, terms)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Terms sorted by basis-index value.
    pub fn terms(&self) -> &[(BasisIndex, C64)] {
        &self.terms
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.iter().map(|(_, b)| b.norm_sqr()).sum()
    }

    /// Parse `{"N": .., "terms": [{"n": .., "re": .., "im": ..}]}`.
    pub fn parse(text: &str) -> Result<Self> {
        let doc: EnvDoc =
            serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        let terms = doc
            .terms
            .into_iter()
            .map(|t| Ok((BasisIndex::new(t.n, doc.n)?, C64::new(t.re, t.im))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(doc.n, terms)
    }
}

#[derive(Deserialize)]
struct EnvDoc {
    #[serde(rename = "N")]
    n: usize,
    terms: Vec<EnvTerm>,
}

#[derive(Deserialize)]
struct EnvTerm {
    n: u64,
    re: f64,
    im: f64,
}

/// Reduced density matrix of the K-spin register: 2^K × 2^K, Hermitian,
/// unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct RegisterDensity {
    width: usize,
    mat: DMatrix<C64>,
}

impl RegisterDensity {
    /// Validate and wrap a full matrix. Hermiticity and trace are checked
    /// here; positive semidefiniteness is exposed through
    /// [`min_eigenvalue`](Self::min_eigenvalue) and checked where it matters.
    pub fn new(width: usize, mat: DMatrix<C64>) -> Result<Self> {
        if width == 0 || width > MAX_DENSITY_REGISTER {
            return Err(Error::DensityTooLarge(width));
        }
        let dim = 1usize << width;
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::InvalidDensity(format!(
                "expected {dim}x{dim}, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        for i in 0..dim {
            for j in i..dim {
                let a = mat[(i, j)];
                let b = mat[(j, i)];
                if !a.re.is_finite() || !a.im.is_finite() {
                    return Err(Error::InvalidDensity(format!(
                        "non-finite entry at ({i},{j})"
                    )));
                }
                if (a - b.conj()).norm() > HERMITICITY_TOL {
                    return Err(Error::InvalidDensity(format!("not Hermitian at ({i},{j})")));
                }
            }
        }
        let trace: C64 = (0..dim).map(|i| mat[(i, i)]).sum();
        if (trace - C64::new(1.0, 0.0)).norm() > NORM_TOL {
            return Err(Error::InvalidDensity(format!(
                "trace = {trace}, expected 1"
            )));
        }
        Ok(RegisterDensity { width, mat })
    }

    /// Density of the pure state with the given 2^K amplitudes `a_k`:
    /// entries `a_k * conj(a_k')`.
    pub fn from_pure(width: usize, amplitudes: &[C64]) -> Result<Self> {
        if width == 0 || width > MAX_DENSITY_REGISTER {
            return Err(Error::DensityTooLarge(width));
        }
        let dim = 1usize << width;
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {dim} amplitudes, got {}",
                amplitudes.len()
            )));
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm_sqr));
        }
        let mat = DMatrix::from_fn(dim, dim, |i, j| amplitudes[i] * amplitudes[j].conj());
        Ok(RegisterDensity { width, mat })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dim(&self) -> usize {
        1usize << self.width
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn entry(&self, k: usize, k2: usize) -> C64 {
        self.mat[(k, k2)]
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.mat[(i, i)]).sum()
    }

    /// Smallest eigenvalue; the PSD invariant asks this to be >= -1e-9.
    pub fn min_eigenvalue(&self) -> f64 {
        self.mat
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .fold(f64::INFINITY, |m, &e| m.min(e))
    }

    // Build from parts already known to be Hermitian with unit trace.
    pub(crate) fn from_validated(width: usize, mat: DMatrix<C64>) -> Self {
        RegisterDensity { width, mat }
    }
}
