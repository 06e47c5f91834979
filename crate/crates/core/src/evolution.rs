//! Exact time evolution in the quantum-measurement limit.
//!
//! The Hamiltonian is diagonal in the product basis, so evolution is closed
//! form at any time: no integrator appears anywhere. Energy differences are
//! carried as exact rationals and only the final phase `exp(-i Δ t)` is
//! evaluated in floating point, which keeps the no-decoherence case exact
//! instead of blurred by cancellation.
//!
//! An environment state with a single basis term gives `|r| = 1` for every
//! pair (a pure global phase); that is a degenerate input, not an error.

use std::io::{self, Write};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{BasisIndex, EnvState, InteractionMatrix, RegisterDensity};
use crate::spectrum::{energy, signature, Signature};

/// Sampled decoherence rate r_kk'(t) for one register pair.
#[derive(Clone, Debug, PartialEq)]
pub struct RateSeries {
    k: BasisIndex,
    k2: BasisIndex,
    samples: Vec<(f64, C64)>,
}

impl RateSeries {
    pub fn pair(&self) -> (BasisIndex, BasisIndex) {
        (self.k, self.k2)
    }

    pub fn samples(&self) -> &[(f64, C64)] {
        &self.samples
    }

    pub fn min_abs(&self) -> f64 {
        self.samples
            .iter()
            .fold(f64::INFINITY, |m, (_, r)| m.min(r.norm()))
    }

    /// Emit `t,re_r,im_r,abs_r` rows, floats in shortest round-trip form.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,re_r,im_r,abs_r")?;
        for (t, r) in &self.samples {
            writeln!(out, "{},{},{},{}", t, r.re, r.im, r.norm())?;
        }
        Ok(())
    }
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() {
        return Err(Error::NonFiniteValue(format!("time t = {t}")));
    }
    Ok(())
}

fn check_env_width(g: &InteractionMatrix, env: &EnvState) -> Result<()> {
    if env.width() != g.env_size() {
        return Err(Error::WidthMismatch {
            expected: g.env_size(),
            found: env.width(),
        });
    }
    Ok(())
}

/// Environment branch state entangled with register state `k` at time `t`:
/// amplitude `exp(-i E_kn t) b_n` on each `n` in the support of `env0`.
pub fn branch_state(
    g: &InteractionMatrix,
    k: BasisIndex,
    env0: &EnvState,
    t: f64,
) -> Result<EnvState> {
    check_time(t)?;
    check_env_width(g, env0)?;
    let mut terms = Vec::with_capacity(env0.terms().len());
    for &(n, b) in env0.terms() {
        let e = energy(g, k, n)?.to_f64();
        terms.push((n, b * C64::from_polar(1.0, -e * t)));
    }
    EnvState::new(env0.width(), terms)
}

/// Exact energy differences `E_kn - E_k'n` over the support of `env0`,
/// converted to f64 only after the rational subtraction.
fn support_deltas(
    g: &InteractionMatrix,
    k: BasisIndex,
    k2: BasisIndex,
    env0: &EnvState,
) -> Result<Vec<f64>> {
    check_env_width(g, env0)?;
    if k.width() != k2.width() {
        return Err(Error::WidthMismatch {
            expected: k.width(),
            found: k2.width(),
        });
    }
    let d = signature(g, k)?.diff(&signature(g, k2)?);
    if d.iter().all(|x| x.is_zero()) {
        return Ok(vec![0.0; env0.terms().len()]);
    }
    let mut deltas = Vec::with_capacity(env0.terms().len());
    for &(n, _) in env0.terms() {
        let mut sum = crate::model::Rational::zero();
        for (j, dj) in d.iter().enumerate() {
            if n.bit_at(j + 1) == 0 {
                sum = sum + dj;
            } else {
                sum = sum - dj;
            }
        }
        deltas.push(sum.halved().to_f64());
    }
    Ok(deltas)
}

fn rate_from_deltas(env0: &EnvState, deltas: &[f64], t: f64) -> C64 {
    env0.terms()
        .iter()
        .zip(deltas)
        .map(|(&(_, b), &delta)| C64::from_polar(1.0, -delta * t) * b.norm_sqr())
        .sum()
}

/// Decoherence rate `r_kk'(t) = Σ_n exp(-i (E_kn - E_k'n) t) |b_n|^2`.
pub fn decoherence_rate(
    g: &InteractionMatrix,
    k: BasisIndex,
    k2: BasisIndex,
    env0: &EnvState,
    t: f64,
) -> Result<C64> {
    check_time(t)?;
    let deltas = support_deltas(g, k, k2, env0)?;
    Ok(rate_from_deltas(env0, &deltas, t))
}

/// Batched decoherence rate over a time grid, samples in grid order.
pub fn rate_series(
    g: &InteractionMatrix,
    k: BasisIndex,
    k2: BasisIndex,
    env0: &EnvState,
    t_grid: &[f64],
) -> Result<RateSeries> {
    for &t in t_grid {
        check_time(t)?;
    }
    let deltas = support_deltas(g, k, k2, env0)?;
    let samples = t_grid
        .iter()
        .map(|&t| (t, rate_from_deltas(env0, &deltas, t)))
        .collect();
    Ok(RateSeries { k, k2, samples })
}

/// Pure-dephasing propagation of the reduced density matrix:
/// `ρ_kk'(t) = ρ_kk'(0) r_kk'(t)`.
///
/// Populations are left untouched (`r_kk = 1` identically) and the lower
/// triangle is the conjugate of the upper one, so the output is Hermitian by
/// construction with the trace of the input.
pub fn evolve_density(
    g: &InteractionMatrix,
    rho0: &RegisterDensity,
    env0: &EnvState,
    t: f64,
) -> Result<RegisterDensity> {
    check_time(t)?;
    check_env_width(g, env0)?;
    let width = g.register_size();
    if rho0.width() != width {
        // RegisterDensity construction already caps the width at 12, so this
        // also rejects any larger register.
        return Err(Error::WidthMismatch {
            expected: width,
            found: rho0.width(),
        });
    }
    let dim = 1usize << width;
    let sigs: Vec<Signature> = (0..dim as u64)
        .map(|k| signature(g, BasisIndex::new(k, width)?))
        .collect::<Result<_>>()?;

    let mut mat = rho0.matrix().clone();
    for k in 0..dim {
        for k2 in k + 1..dim {
            let r = if sigs[k] == sigs[k2] {
                // Same signature: every phase is exactly 1.
                C64::new(env0.norm_sqr(), 0.0)
            } else {
                let ki = BasisIndex::new(k as u64, width)?;
                let ki2 = BasisIndex::new(k2 as u64, width)?;
                let deltas = support_deltas(g, ki, ki2, env0)?;
                rate_from_deltas(env0, &deltas, t)
            };
            let upper = mat[(k, k2)] * r;
            mat[(k, k2)] = upper;
            mat[(k2, k)] = upper.conj();
        }
    }
    Ok(RegisterDensity::from_validated(width, mat))
}
