//! Sobolev, Gevrey–Sobolev and Voigt energy ("triple") norms over the
//! retained modes, modulus spectra, and an analyticity-strip estimate.
//!
//! All norms sum per-mode contributions with pairwise summation. The Gevrey
//! weight `exp(sigma |n|)` is applied to the coefficient before squaring, so
//! `gevrey_norm(v, {sigma, q})` is bit-identical to `sobolev_norm(w, q)` when
//! `w_n = v_n * exp(sigma |n|)` is formed with the same product.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{vec_norm_sqr, Lattice, ScalarSpectralField, SpectralField};

/// Switch to log-sum-exp evaluation past this value of `max sigma |n|`.
pub const LOG_SPACE_THRESHOLD: f64 = 300.0;

/// Shells whose peak amplitude falls below this are ignored by the radius fit.
pub const FIT_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GevreyIndex {
    pub sigma: f64,
    pub q: f64,
}

impl GevreyIndex {
    pub fn new(sigma: f64, q: f64) -> Result<Self> {
        if !(sigma >= 0.0) || !q.is_finite() {
            return Err(Error::Parameter(format!(
                "Gevrey index needs sigma >= 0 and finite q, got sigma = {sigma}, q = {q}"
            )));
        }
        Ok(Self { sigma, q })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TripleNormParams {
    pub alpha: f64,
    pub s: f64,
}

impl TripleNormParams {
    pub fn new(alpha: f64, s: f64) -> Result<Self> {
        if !(alpha > 0.0 && s > 0.0) {
            return Err(Error::Parameter(format!(
                "triple norm needs alpha > 0 and s > 0, got alpha = {alpha}, s = {s}"
            )));
        }
        Ok(Self { alpha, s })
    }
}

/// Which polynomial weight multiplies `|f_n|^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NormKind {
    /// `|n|^{2q}`
    Sobolev { q: f64 },
    /// `(1 + alpha^2 |n|^{2s}) |n|`
    Triple { alpha: f64, s: f64 },
}

impl NormKind {
    pub fn weight(&self, magnitude: f64) -> f64 {
        match *self {
            NormKind::Sobolev { q } => magnitude.powf(2.0 * q),
            NormKind::Triple { alpha, s } => {
                (1.0 + alpha * alpha * magnitude.powf(2.0 * s)) * magnitude
            }
        }
    }

    fn ln_weight(&self, magnitude: f64) -> f64 {
        match *self {
            NormKind::Sobolev { q } => 2.0 * q * magnitude.ln(),
            NormKind::Triple { .. } => self.weight(magnitude).ln(),
        }
    }
}

impl From<TripleNormParams> for NormKind {
    fn from(p: TripleNormParams) -> Self {
        NormKind::Triple {
            alpha: p.alpha,
            s: p.s,
        }
    }
}

/// Anything with one amplitude per retained mode.
pub trait ModalField {
    fn lattice(&self) -> &Lattice;
    /// `|scale * f_n|^2` for the mode at position `i`.
    fn scaled_mass(&self, i: usize, scale: f64) -> f64;
}

impl ModalField for SpectralField {
    fn lattice(&self) -> &Lattice {
        SpectralField::lattice(self)
    }

    fn scaled_mass(&self, i: usize, scale: f64) -> f64 {
        let v = &self.coeffs()[i];
        vec_norm_sqr(&[v[0] * scale, v[1] * scale, v[2] * scale])
    }
}

impl ModalField for ScalarSpectralField {
    fn lattice(&self) -> &Lattice {
        ScalarSpectralField::lattice(self)
    }

    fn scaled_mass(&self, i: usize, scale: f64) -> f64 {
        (self.coeffs()[i] * scale).norm_sqr()
    }
}

/// Pairwise summation; error grows like `log n` rather than `n`.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        values.iter().sum()
    } else {
        let (a, b) = values.split_at(values.len() / 2);
        pairwise_sum(a) + pairwise_sum(b)
    }
}

/// `sum_n |f_n|^2 exp(2 sigma |n|) weight(n)`, direct evaluation.
fn direct_norm_sq<F: ModalField + ?Sized>(f: &F, sigma: f64, kind: NormKind) -> f64 {
    let lattice = f.lattice();
    let terms: Vec<f64> = (0..lattice.len())
        .map(|i| {
            let r = lattice.magnitude(i);
            f.scaled_mass(i, (sigma * r).exp()) * kind.weight(r)
        })
        .collect();
    pairwise_sum(&terms)
}

/// Natural log of the weighted Gevrey norm, evaluated with log-sum-exp.
/// Returns `-inf` for the zero field.
pub fn ln_weighted_norm<F: ModalField + ?Sized>(f: &F, sigma: f64, kind: NormKind) -> f64 {
    let lattice = f.lattice();
    let exponents: Vec<f64> = (0..lattice.len())
        .filter_map(|i| {
            let mass = f.scaled_mass(i, 1.0);
            (mass > 0.0).then(|| {
                let r = lattice.magnitude(i);
                2.0 * sigma * r + mass.ln() + kind.ln_weight(r)
            })
        })
        .collect();
    let peak = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if peak == f64::NEG_INFINITY {
        return peak;
    }
    let shifted: Vec<f64> = exponents.iter().map(|e| (e - peak).exp()).collect();
    0.5 * (peak + pairwise_sum(&shifted).ln())
}

/// Weighted Gevrey norm `sqrt(sum_n |f_n|^2 e^{2 sigma |n|} weight(n))`.
pub fn weighted_norm<F: ModalField + ?Sized>(f: &F, sigma: f64, kind: NormKind) -> f64 {
    let lattice = f.lattice();
    let reach = lattice.magnitudes().iter().copied().fold(0.0, f64::max) * sigma;
    if reach > LOG_SPACE_THRESHOLD {
        ln_weighted_norm(f, sigma, kind).exp()
    } else {
        direct_norm_sq(f, sigma, kind).sqrt()
    }
}

/// `||f||_q = sqrt(sum |f_n|^2 |n|^{2q})`.
pub fn sobolev_norm<F: ModalField + ?Sized>(f: &F, q: f64) -> f64 {
    weighted_norm(f, 0.0, NormKind::Sobolev { q })
}

/// `|||f|||_{sigma,q} = sqrt(sum |f_n|^2 e^{2 sigma |n|} |n|^{2q})`.
pub fn gevrey_norm<F: ModalField + ?Sized>(f: &F, idx: GevreyIndex) -> f64 {
    weighted_norm(f, idx.sigma, NormKind::Sobolev { q: idx.q })
}

/// `sqrt(sum (1 + alpha^2 |n|^{2s}) |n| |f_n|^2)`.
pub fn triple_norm<F: ModalField + ?Sized>(f: &F, p: TripleNormParams) -> f64 {
    weighted_norm(f, 0.0, p.into())
}

/// Scalar field with coefficients `|f_n| |n|^q`.
pub fn modulus_spectrum(f: &SpectralField, q: f64) -> ScalarSpectralField {
    let lattice = f.lattice();
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, v)| Complex64::new(vec_norm_sqr(v).sqrt() * lattice.magnitude(i).powf(q), 0.0))
        .collect();
    ScalarSpectralField::from_coeffs(std::sync::Arc::clone(lattice), coeffs)
        .expect("coefficient count matches lattice")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusFit {
    pub sigma_hat: f64,
    pub r2: f64,
    pub shells: usize,
}

/// Least-squares decay rate of the shell-peak amplitudes.
///
/// Modes are binned by `round(|n|)`; each usable bin contributes the point
/// `(|n*|, ln |f_{n*}|)` where `n*` is the mode of largest amplitude in that
/// bin. `sigma_hat` is minus the fitted slope.
pub fn fit_analyticity_radius(f: &SpectralField) -> Result<RadiusFit> {
    let lattice = f.lattice();
    let bins = lattice
        .magnitudes()
        .iter()
        .map(|r| r.round() as usize)
        .max()
        .unwrap_or(0);
    let mut peaks: Vec<Option<(f64, f64)>> = vec![None; bins + 1];
    for (i, v) in f.coeffs().iter().enumerate() {
        let amp = vec_norm_sqr(v).sqrt();
        let r = lattice.magnitude(i);
        let slot = &mut peaks[r.round() as usize];
        match slot {
            Some((_, best)) if *best >= amp => {}
            _ => *slot = Some((r, amp)),
        }
    }
    let points: Vec<(f64, f64)> = peaks
        .into_iter()
        .flatten()
        .filter(|&(_, amp)| amp > FIT_FLOOR)
        .map(|(r, amp)| (r, amp.ln()))
        .collect();
    if points.len() < 3 {
        return Err(Error::DiagnosticUnavailable {
            shells: points.len(),
        });
    }
    let m = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let slope = sxy / sxx;
    let ss_res: f64 = points
        .iter()
        .map(|p| (p.1 - mean_y - slope * (p.0 - mean_x)).powi(2))
        .sum();
    let r2 = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    Ok(RadiusFit {
        sigma_hat: -slope,
        r2,
        shells: points.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Lattice, Vec3c, ZERO3};
    use std::sync::Arc;

    fn shell_x(lattice: &Arc<Lattice>, k: i32, amp: f64) -> SpectralField {
        SpectralField::from_fn(Arc::clone(lattice), |m| {
            if m == [k, 0, 0] || m == [-k, 0, 0] {
                [Complex64::new(0.0, 0.0), Complex64::new(amp, 0.0), Complex64::new(0.0, 0.0)]
            } else {
                ZERO3
            }
        })
    }

    #[test]
    fn sobolev_examples() {
        let lattice = Lattice::new(2).unwrap();
        let zero = SpectralField::zeros(Arc::clone(&lattice));
        assert_eq!(sobolev_norm(&zero, 1.3), 0.0);
        let unit = shell_x(&lattice, 1, 1.0);
        for q in [-1.0, 0.0, 0.5, 2.0] {
            assert!((sobolev_norm(&unit, q) - 2f64.sqrt()).abs() < 1e-15);
        }
        let two = shell_x(&lattice, 2, 1.0);
        assert!((sobolev_norm(&two, 1.0) - 2.0 * 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn gevrey_examples() {
        let lattice = Lattice::new(2).unwrap();
        let unit = shell_x(&lattice, 1, 1.0);
        let g = gevrey_norm(&unit, GevreyIndex::new(1.0, 0.0).unwrap());
        assert!((g - 2f64.sqrt() * std::f64::consts::E).abs() < 1e-14);
        assert!((g - 3.84423).abs() < 1e-5);
        let f = shell_x(&lattice, 2, 0.3);
        assert_eq!(
            gevrey_norm(&f, GevreyIndex::new(0.0, 0.7).unwrap()),
            sobolev_norm(&f, 0.7)
        );
        assert!(GevreyIndex::new(-0.1, 0.0).is_err());
    }

    #[test]
    fn log_space_matches_direct_where_both_work() {
        let lattice = Lattice::new(3).unwrap();
        let f = SpectralField::from_fn(Arc::clone(&lattice), |m| {
            let t = (m[0] + 2 * m[1] + 3 * m[2]) as f64;
            [Complex64::new(t.cos(), 0.0), Complex64::new(0.2, t.sin()), ZERO3[0]]
        });
        for sigma in [0.0, 0.5, 5.0] {
            let kind = NormKind::Sobolev { q: 1.5 };
            let direct = direct_norm_sq(&f, sigma, kind).sqrt();
            let logged = ln_weighted_norm(&f, sigma, kind).exp();
            assert!((direct - logged).abs() <= 1e-13 * direct);
        }
        // huge sigma overflows the direct route but not the log route
        let huge = ln_weighted_norm(&f, 400.0, NormKind::Sobolev { q: 0.0 });
        assert!(huge.is_finite() && huge > 400.0);
    }

    #[test]
    fn triple_norm_examples() {
        let lattice = Lattice::new(2).unwrap();
        let p = TripleNormParams::new(1.0, 1.0).unwrap();
        assert_eq!(triple_norm(&SpectralField::zeros(Arc::clone(&lattice)), p), 0.0);
        let unit = shell_x(&lattice, 1, 1.0);
        assert!((triple_norm(&unit, p) - 2.0).abs() < 1e-15);
        assert!(TripleNormParams::new(0.0, 1.0).is_err());
    }

    #[test]
    fn modulus_spectrum_examples() {
        let lattice = Lattice::new(2).unwrap();
        let f = SpectralField::from_fn(Arc::clone(&lattice), |m| {
            let t = (m[0] - m[1] + m[2]) as f64;
            [Complex64::from_polar(0.6, t), Complex64::from_polar(0.8, -t), ZERO3[0]]
        });
        let ones = modulus_spectrum(&f, 0.0);
        assert!(ones.coeffs().iter().all(|c| (c.re - 1.0).abs() < 1e-15 && c.im == 0.0));
        assert!((sobolev_norm(&ones, 0.0) - sobolev_norm(&f, 0.0)).abs() < 1e-13);
        let two = shell_x(&lattice, 2, 1.0);
        let spec = modulus_spectrum(&two, 1.0);
        assert_eq!(spec.coeff([2, 0, 0]).unwrap().re, 2.0);
        assert_eq!(spec.coeff([-2, 0, 0]).unwrap().re, 2.0);
    }

    #[test]
    fn radius_fit_needs_three_shells() {
        let lattice = Lattice::new(3).unwrap();
        let f = shell_x(&lattice, 1, 1.0);
        assert!(matches!(
            fit_analyticity_radius(&f),
            Err(Error::DiagnosticUnavailable { shells: 1 })
        ));
    }

    #[test]
    fn radius_fit_constant_spectrum() {
        let lattice = Lattice::new(6).unwrap();
        let f = SpectralField::from_fn(Arc::clone(&lattice), |_| -> Vec3c {
            [Complex64::new(0.3, 0.0), ZERO3[0], ZERO3[0]]
        });
        let fit = fit_analyticity_radius(&f).unwrap();
        assert!(fit.sigma_hat.abs() < 1e-10);
    }
}
