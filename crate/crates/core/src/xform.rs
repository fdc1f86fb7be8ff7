//! Spectral changes of variables `w_n = v_n exp(psi |n|)` and the scalar
//! equations that fix `psi`.
//!
//! For the norm-feedback transforms, `psi` solves `psi * Gamma(psi)^eps = beta`
//! where `Gamma(psi)` is the selected norm of `v` with Gevrey weight
//! `exp(psi |n|)`. The left-hand side increases monotonically from 0, so the
//! root is unique; it is found by safeguarded Newton iteration on
//! `ln psi + eps ln Gamma(psi) - ln beta` inside a bracket `[0, beta / Gamma(0)^eps]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::SpectralField;
use crate::norms::{
    gevrey_norm, ln_weighted_norm, sobolev_norm, triple_norm, weighted_norm, GevreyIndex,
    ModalField, NormKind, TripleNormParams,
};

/// Acceptance bound on `|psi Gamma^eps - beta| / beta`.
pub const PSI_TOLERANCE: f64 = 1e-12;

const MAX_NEWTON: usize = 200;

/// Iteration cap and damping for the critical-shift fixed point.
pub const CRITICAL_MAX_ITER: usize = 200;
pub const CRITICAL_DAMPING: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TransformSpec {
    /// `v_n = w_n exp(-beta |n| ||w||_{s+3/2}^{-eps})`
    FixedSobolev { beta: f64, epsilon: f64, s: f64 },
    /// `v_n = w_n exp(-beta |n| |||w|||^{-eps})`
    VoigtTriple {
        beta: f64,
        epsilon: f64,
        alpha: f64,
        s: f64,
    },
    /// `v_n = w_n exp(-beta |n| (1 + |||w|||)^{-2})`, triple norm with `s = 1/2`
    CriticalShift { beta: f64, alpha: f64 },
    /// `v_n = w_n exp(-beta t |n|)`
    LinearInTime { beta: f64 },
}

impl TransformSpec {
    pub fn beta(&self) -> f64 {
        match *self {
            TransformSpec::FixedSobolev { beta, .. }
            | TransformSpec::VoigtTriple { beta, .. }
            | TransformSpec::CriticalShift { beta, .. }
            | TransformSpec::LinearInTime { beta } => beta,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let beta = self.beta();
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::Parameter(format!("beta must be positive, got {beta}")));
        }
        let check_eps = |eps: f64| {
            if eps > 0.0 && eps < 2.0 {
                Ok(())
            } else {
                Err(Error::Parameter(format!("epsilon must lie in (0, 2), got {eps}")))
            }
        };
        match *self {
            TransformSpec::FixedSobolev { epsilon, s, .. } => {
                check_eps(epsilon)?;
                if !(s > 0.0 && s <= 0.5) {
                    return Err(Error::Parameter(format!("s must lie in (0, 1/2], got {s}")));
                }
            }
            TransformSpec::VoigtTriple { epsilon, alpha, s, .. } => {
                check_eps(epsilon)?;
                TripleNormParams::new(alpha, s)?;
            }
            TransformSpec::CriticalShift { alpha, .. } => {
                TripleNormParams::new(alpha, 0.5)?;
            }
            TransformSpec::LinearInTime { .. } => {}
        }
        Ok(())
    }

    /// Norm whose Gevrey-weighted version appears in the psi equation.
    pub fn feedback_norm(&self) -> Option<NormKind> {
        match *self {
            TransformSpec::FixedSobolev { s, .. } => Some(NormKind::Sobolev { q: s + 1.5 }),
            TransformSpec::VoigtTriple { alpha, s, .. } => Some(NormKind::Triple { alpha, s }),
            TransformSpec::CriticalShift { alpha, .. } => Some(NormKind::Triple { alpha, s: 0.5 }),
            TransformSpec::LinearInTime { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiSolution {
    pub psi: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// `v_to_w` output: the transformed field and the strip width that produced it.
#[derive(Debug, Clone)]
pub struct Transformed {
    pub w: SpectralField,
    pub psi: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// `ln Gamma(psi)` and its derivative in `psi` (the Gevrey-weighted mean of `|n|`).
fn ln_norm_and_slope(v: &SpectralField, psi: f64, kind: NormKind) -> (f64, f64) {
    let lattice = ModalField::lattice(v);
    let mut exps = Vec::with_capacity(lattice.len());
    let mut radii = Vec::with_capacity(lattice.len());
    for i in 0..lattice.len() {
        let mass = v.scaled_mass(i, 1.0);
        if mass > 0.0 {
            let r = lattice.magnitude(i);
            exps.push(2.0 * psi * r + mass.ln() + kind.weight(r).ln());
            radii.push(r);
        }
    }
    let peak = exps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut total = 0.0;
    let mut first = 0.0;
    for (e, r) in exps.iter().zip(&radii) {
        let x = (e - peak).exp();
        total += x;
        first += x * r;
    }
    (0.5 * (peak + total.ln()), first / total)
}

/// Safeguarded Newton on an increasing `g` with `g(lo) < 0 <= g(hi)`.
/// `eval` returns `(g, g')`.
fn safeguarded_root(
    mut lo: f64,
    mut hi: f64,
    mut eval: impl FnMut(f64) -> (f64, f64),
) -> (f64, usize) {
    let mut x = hi;
    let (mut g, mut dg) = eval(x);
    for iteration in 1..=MAX_NEWTON {
        if g == 0.0 {
            return (x, iteration);
        }
        if g > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let newton = x - g / dg;
        let next = if dg > 0.0 && newton > lo && newton < hi {
            newton
        } else if lo > 0.0 {
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - x).abs();
        x = next;
        (g, dg) = eval(x);
        if step <= 2.0 * f64::EPSILON * x || hi - lo <= 2.0 * f64::EPSILON * hi {
            return (x, iteration);
        }
    }
    (x, MAX_NEWTON)
}

fn psi_residual(v: &SpectralField, psi: f64, beta: f64, epsilon: f64, kind: NormKind) -> f64 {
    psi * weighted_norm(v, psi, kind).powf(epsilon) - beta
}

/// Solves `psi * Gamma(psi)^eps = beta` for the Gevrey-weighted norm `kind`.
pub fn solve_psi(v: &SpectralField, beta: f64, epsilon: f64, kind: NormKind) -> Result<PsiSolution> {
    if v.is_zero() {
        return Err(Error::NoSolution);
    }
    let gamma0 = ln_weighted_norm(v, 0.0, kind);
    let hi = (beta.ln() - epsilon * gamma0).exp();
    solve_psi_in(v, beta, epsilon, kind, (0.0, hi))
}

/// As [`solve_psi`] with a caller-supplied bracket.
pub fn solve_psi_in(
    v: &SpectralField,
    beta: f64,
    epsilon: f64,
    kind: NormKind,
    bracket: (f64, f64),
) -> Result<PsiSolution> {
    if !(beta > 0.0) || !(epsilon > 0.0) {
        return Err(Error::Parameter(format!(
            "psi equation needs beta > 0 and epsilon > 0, got beta = {beta}, epsilon = {epsilon}"
        )));
    }
    if v.is_zero() {
        return Err(Error::NoSolution);
    }
    let ln_beta = beta.ln();
    let eval = |psi: f64| {
        let (ln_gamma, slope) = ln_norm_and_slope(v, psi, kind);
        (psi.ln() + epsilon * ln_gamma - ln_beta, 1.0 / psi + epsilon * slope)
    };
    let (lo, hi) = bracket;
    if !(lo >= 0.0 && hi > lo) || (lo > 0.0 && eval(lo).0 >= 0.0) || eval(hi).0 < 0.0 {
        return Err(Error::Parameter(format!(
            "[{lo}, {hi}] does not bracket the psi root"
        )));
    }
    let (psi, iterations) = safeguarded_root(lo, hi, eval);
    let residual = psi_residual(v, psi, beta, epsilon, kind);
    if !(residual.abs() <= PSI_TOLERANCE * beta) {
        return Err(Error::TransformNonConvergence {
            iterations,
            residual,
        });
    }
    Ok(PsiSolution {
        psi,
        residual,
        iterations,
    })
}

fn scale_by_strip(v: &SpectralField, psi: f64) -> SpectralField {
    let lattice = std::sync::Arc::clone(v.lattice());
    v.scale_modes(|i| (psi * lattice.magnitude(i)).exp())
}

fn critical_shift(v: &SpectralField, beta: f64, alpha: f64) -> Result<PsiSolution> {
    let kind = NormKind::Triple { alpha, s: 0.5 };
    if v.is_zero() {
        return Ok(PsiSolution {
            psi: beta,
            residual: 0.0,
            iterations: 0,
        });
    }
    let target = |psi: f64| beta / (1.0 + weighted_norm(v, psi, kind)).powi(2);
    let residual_at = |psi: f64| psi * (1.0 + weighted_norm(v, psi, kind)).powi(2) - beta;

    let mut psi = target(0.0);
    for iteration in 1..=CRITICAL_MAX_ITER {
        let next = (1.0 - CRITICAL_DAMPING) * psi + CRITICAL_DAMPING * target(psi);
        let step = (next - psi).abs();
        psi = next;
        if step <= 4.0 * f64::EPSILON * psi {
            let residual = residual_at(psi);
            if residual.abs() <= PSI_TOLERANCE * beta {
                return Ok(PsiSolution {
                    psi,
                    residual,
                    iterations: iteration,
                });
            }
            break;
        }
    }

    // psi (1 + Gamma(psi))^2 is increasing, so the root is bracketed by
    // [0, beta / (1 + Gamma(0))^2] and unique
    let ln_beta = beta.ln();
    let eval = |psi: f64| {
        let (ln_gamma, slope) = ln_norm_and_slope(v, psi, kind);
        let gamma = ln_gamma.exp();
        (
            psi.ln() + 2.0 * (1.0 + gamma).ln() - ln_beta,
            1.0 / psi + 2.0 * gamma * slope / (1.0 + gamma),
        )
    };
    let (psi, iterations) = safeguarded_root(0.0, target(0.0), eval);
    let residual = residual_at(psi);
    if residual.abs() <= PSI_TOLERANCE * beta {
        Ok(PsiSolution {
            psi,
            residual,
            iterations: CRITICAL_MAX_ITER + iterations,
        })
    } else {
        Err(Error::TransformNonConvergence {
            iterations: CRITICAL_MAX_ITER + iterations,
            residual,
        })
    }
}

/// Maps the physical-variable field `v` to the transformed field `w`.
pub fn v_to_w(v: &SpectralField, spec: &TransformSpec, t: f64) -> Result<Transformed> {
    spec.validate()?;
    let solution = match *spec {
        TransformSpec::FixedSobolev { beta, epsilon, .. }
        | TransformSpec::VoigtTriple { beta, epsilon, .. } => {
            if v.is_zero() {
                // convention: a vanishing field has zero strip width
                PsiSolution {
                    psi: 0.0,
                    residual: 0.0,
                    iterations: 0,
                }
            } else {
                let kind = spec.feedback_norm().expect("feedback transform");
                solve_psi(v, beta, epsilon, kind)?
            }
        }
        TransformSpec::CriticalShift { beta, alpha } => critical_shift(v, beta, alpha)?,
        TransformSpec::LinearInTime { beta } => {
            if !(t >= 0.0) {
                return Err(Error::Parameter(format!("time must be >= 0, got {t}")));
            }
            PsiSolution {
                psi: beta * t,
                residual: 0.0,
                iterations: 0,
            }
        }
    };
    Ok(Transformed {
        w: scale_by_strip(v, solution.psi),
        psi: solution.psi,
        residual: solution.residual,
        iterations: solution.iterations,
    })
}

/// Applies the forward damping `v_n = w_n exp(-rate |n|)` of each transform.
pub fn w_to_v(w: &SpectralField, spec: &TransformSpec, t: f64) -> Result<SpectralField> {
    spec.validate()?;
    let rate = match *spec {
        TransformSpec::FixedSobolev { beta, epsilon, s } => {
            let norm = sobolev_norm(w, s + 1.5);
            if norm == 0.0 {
                return Err(Error::UndefinedExponent);
            }
            beta * norm.powf(-epsilon)
        }
        TransformSpec::VoigtTriple {
            beta,
            epsilon,
            alpha,
            s,
        } => {
            let norm = triple_norm(w, TripleNormParams { alpha, s });
            if norm == 0.0 {
                return Err(Error::UndefinedExponent);
            }
            beta * norm.powf(-epsilon)
        }
        TransformSpec::CriticalShift { beta, alpha } => {
            let norm = triple_norm(w, TripleNormParams { alpha, s: 0.5 });
            beta / (1.0 + norm).powi(2)
        }
        TransformSpec::LinearInTime { beta } => {
            if !(t >= 0.0) {
                return Err(Error::Parameter(format!("time must be >= 0, got {t}")));
            }
            beta * t
        }
    };
    Ok(scale_by_strip(w, -rate))
}

/// Right-hand side of the strict admissibility inequality `beta < threshold`
/// for an initial condition with finite Gevrey norm at strip width `sigma`.
pub fn beta_threshold(v_in: &SpectralField, spec: &TransformSpec, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::Parameter(format!("sigma must be positive, got {sigma}")));
    }
    let g = |q: f64| gevrey_norm(v_in, GevreyIndex { sigma, q });
    Ok(match *spec {
        TransformSpec::FixedSobolev { epsilon, s, .. } => sigma * g(s + 1.5).powf(epsilon),
        TransformSpec::VoigtTriple {
            epsilon, alpha, s, ..
        } => sigma * (g(0.5).powi(2) + alpha * alpha * g(s + 0.5).powi(2)).powf(epsilon / 2.0),
        TransformSpec::CriticalShift { alpha, .. } => {
            sigma * (1.0 + (g(0.5).powi(2) + alpha * alpha * g(1.0).powi(2)).sqrt()).powi(2)
        }
        TransformSpec::LinearInTime { .. } => f64::INFINITY,
    })
}

pub fn beta_admissible(v_in: &SpectralField, spec: &TransformSpec, sigma: f64) -> Result<bool> {
    Ok(spec.beta() < beta_threshold(v_in, spec, sigma)?)
}
