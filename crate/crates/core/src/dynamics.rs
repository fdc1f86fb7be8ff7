//! Fourier–Galerkin right-hand sides for the Euler, inviscid Burgers,
//! Euler–Voigt and Navier–Stokes–Voigt systems, a fixed-step RK4 integrator,
//! and the invariant monitors used to check the energy balance laws.
//!
//! For a time step `dt` the usual advective guidance is
//! `dt <= c / (N max|v|)` with `c` of order one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{enforce_hermitian, nonlinear_term, project_solenoidal, SpectralField};
use crate::norms::{fit_analyticity_radius, gevrey_norm, sobolev_norm, GevreyIndex};

/// Integration halts once `||v||_0` exceeds this value.
pub const BLOW_UP_NORM: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EquationSpec {
    Euler,
    /// Inviscid Burgers. `projected` applies the Leray projection to the
    /// advection term; it exists only for energy-neutrality checks.
    Burgers {
        #[serde(default)]
        projected: bool,
    },
    EulerVoigt { alpha: f64, s: f64 },
    NsVoigt { alpha: f64, s: f64, nu: f64 },
}

impl EquationSpec {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::Parameter(format!("{name} must be positive, got {x}")))
            }
        };
        match *self {
            EquationSpec::Euler | EquationSpec::Burgers { .. } => Ok(()),
            EquationSpec::EulerVoigt { alpha, s } => {
                positive("alpha", alpha)?;
                positive("s", s)
            }
            EquationSpec::NsVoigt { alpha, s, nu } => {
                positive("alpha", alpha)?;
                positive("s", s)?;
                positive("nu", nu)
            }
        }
    }

    /// Whether states must be divergence-free.
    pub fn requires_solenoidal(&self) -> bool {
        !matches!(self, EquationSpec::Burgers { .. })
    }

    fn projects_advection(&self) -> bool {
        !matches!(self, EquationSpec::Burgers { projected: false })
    }

    /// `(alpha, s)` of the Voigt term, if any.
    pub fn voigt(&self) -> Option<(f64, f64)> {
        match *self {
            EquationSpec::EulerVoigt { alpha, s } | EquationSpec::NsVoigt { alpha, s, .. } => {
                Some((alpha, s))
            }
            _ => None,
        }
    }

    pub fn viscosity(&self) -> f64 {
        match *self {
            EquationSpec::NsVoigt { nu, .. } => nu,
            _ => 0.0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EquationSpec::Euler => "euler",
            EquationSpec::Burgers { .. } => "burgers",
            EquationSpec::EulerVoigt { .. } => "euler-voigt",
            EquationSpec::NsVoigt { .. } => "ns-voigt",
        }
    }
}

fn check_state(v: &SpectralField, eq: &EquationSpec) -> Result<()> {
    if eq.requires_solenoidal() && !v.is_solenoidal() {
        return Err(Error::NonSolenoidal {
            defect: v.scaled_divergence(),
        });
    }
    Ok(())
}

/// `dv_n/dt = (N_n(v) - nu |n|^2 v_n) / (1 + alpha^2 |n|^{2s})`, where `N` is
/// the (projected, except for plain Burgers) Galerkin advection tendency.
pub fn rhs(v: &SpectralField, eq: &EquationSpec) -> Result<SpectralField> {
    check_state(v, eq)?;
    let advection = nonlinear_term(v, eq.projects_advection());
    let lattice = std::sync::Arc::clone(v.lattice());
    let nu = eq.viscosity();
    let voigt = eq.voigt();
    let coeffs = advection
        .coeffs()
        .iter()
        .zip(v.coeffs())
        .enumerate()
        .map(|(i, (a, x))| {
            let damping = nu * lattice.magnitude_sq(i);
            let divisor = match voigt {
                Some((alpha, s)) => 1.0 + alpha * alpha * lattice.magnitude(i).powf(2.0 * s),
                None => 1.0,
            };
            let scale = 1.0 / divisor;
            [
                (a[0] - x[0] * damping) * scale,
                (a[1] - x[1] * damping) * scale,
                (a[2] - x[2] * damping) * scale,
            ]
        })
        .collect();
    SpectralField::from_coeffs(lattice, coeffs)
}

/// One classical RK4 step. Hermitian symmetry is re-imposed and solenoidal
/// systems are re-projected. A non-finite or oversized result is reported as
/// [`Error::BlowUp`] with `time = 0`, i.e. relative to the input state.
pub fn step(v: &SpectralField, eq: &EquationSpec, dt: f64) -> Result<SpectralField> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Config(format!("dt must be positive, got {dt}")));
    }
    // stage states are re-projected so rounding in large tendencies cannot
    // trip the solenoidal check
    let settle = |state: SpectralField| {
        let state = enforce_hermitian(&state);
        if eq.requires_solenoidal() {
            project_solenoidal(&state)
        } else {
            state
        }
    };
    let k1 = rhs(v, eq)?;
    let k2 = rhs(&settle(v.axpy(0.5 * dt, &k1)?), eq)?;
    let k3 = rhs(&settle(v.axpy(0.5 * dt, &k2)?), eq)?;
    let k4 = rhs(&settle(v.axpy(dt, &k3)?), eq)?;
    let update = k1.axpy(2.0, &k2)?.axpy(2.0, &k3)?.axpy(1.0, &k4)?;
    let next = settle(v.axpy(dt / 6.0, &update)?);
    let size = sobolev_norm(&next, 0.0);
    if !size.is_finite() || size > BLOW_UP_NORM {
        return Err(Error::BlowUp { time: 0.0 });
    }
    Ok(next)
}

/// `||v||_0^2` for Euler/Burgers, `||v||_0^2 + alpha^2 ||v||_s^2` for the
/// Voigt systems (conserved for Euler–Voigt, dissipated for NS–Voigt).
pub fn conserved_quantity(v: &SpectralField, eq: &EquationSpec) -> f64 {
    let energy = sobolev_norm(v, 0.0).powi(2);
    match eq.voigt() {
        Some((alpha, s)) => energy + alpha * alpha * sobolev_norm(v, s).powi(2),
        None => energy,
    }
}

/// One row of a run series. Entries that do not apply are NaN.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    /// `||v||_0^2`
    pub energy: f64,
    /// `||v||_q` for each configured index, same order as
    /// [`RunSeries::sobolev_indices`].
    pub sobolev: Vec<f64>,
    pub gevrey: f64,
    pub psi: f64,
    pub xi: f64,
    pub envelope: f64,
    pub margin: f64,
    /// Fitted analyticity strip width, when requested and available.
    pub sigma_fit: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum RunStatus {
    Completed,
    BlowUp { last_valid_time: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSeries {
    pub sobolev_indices: Vec<f64>,
    pub samples: Vec<Sample>,
    pub status: RunStatus,
}

impl RunSeries {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    /// Column of `||v||_q`, if `q` is among the configured indices.
    pub fn sobolev_column(&self, q: f64) -> Option<Vec<f64>> {
        let k = self
            .sobolev_indices
            .iter()
            .position(|&x| (x - q).abs() <= 1e-12)?;
        Some(self.samples.iter().map(|s| s.sobolev[k]).collect())
    }

    pub fn is_complete(&self) -> bool {
        self.status == RunStatus::Completed
    }
}

/// Computes one [`Sample`] from the state at time `t`.
pub trait Observer {
    fn sobolev_indices(&self) -> &[f64];
    fn observe(&mut self, t: f64, v: &SpectralField) -> Result<Sample>;
}

/// Energy, Sobolev norms, an optional fixed-index Gevrey norm and the
/// analyticity-strip fit.
#[derive(Debug, Clone, Default)]
pub struct StandardObserver {
    pub sobolev_indices: Vec<f64>,
    pub gevrey: Option<GevreyIndex>,
    pub fit_radius: bool,
}

impl StandardObserver {
    pub fn sample(&self, t: f64, v: &SpectralField) -> Sample {
        Sample {
            t,
            energy: sobolev_norm(v, 0.0).powi(2),
            sobolev: self.sobolev_indices.iter().map(|&q| sobolev_norm(v, q)).collect(),
            gevrey: self.gevrey.map_or(f64::NAN, |idx| gevrey_norm(v, idx)),
            psi: f64::NAN,
            xi: f64::NAN,
            envelope: f64::NAN,
            margin: f64::NAN,
            sigma_fit: if self.fit_radius {
                fit_analyticity_radius(v).ok().map(|fit| fit.sigma_hat)
            } else {
                None
            },
        }
    }
}

impl Observer for StandardObserver {
    fn sobolev_indices(&self) -> &[f64] {
        &self.sobolev_indices
    }

    fn observe(&mut self, t: f64, v: &SpectralField) -> Result<Sample> {
        Ok(self.sample(t, v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrationConfig {
    pub dt: f64,
    pub t_end: f64,
    /// Sample every this many steps; the final state is always sampled.
    pub sample_every: usize,
}

impl IntegrationConfig {
    /// Number of steps; `t_end` must be an integer multiple of `dt`.
    pub fn steps(&self) -> Result<usize> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::Config(format!("t_end must be >= 0, got {}", self.t_end)));
        }
        if self.sample_every == 0 {
            return Err(Error::Config("sample_every must be at least 1".into()));
        }
        let steps = (self.t_end / self.dt).round();
        if (steps * self.dt - self.t_end).abs() > 1e-9 * self.t_end.max(self.dt) {
            return Err(Error::Config(format!(
                "t_end = {} is not a multiple of dt = {}",
                self.t_end, self.dt
            )));
        }
        Ok(steps as usize)
    }
}

/// Fixed-step march from `v0`, returning the series and the last valid state.
/// On blow-up the series is truncated and flagged.
pub fn integrate_to(
    v0: &SpectralField,
    eq: &EquationSpec,
    config: &IntegrationConfig,
    observer: &mut dyn Observer,
) -> Result<(RunSeries, SpectralField)> {
    eq.validate()?;
    check_state(v0, eq)?;
    let steps = config.steps()?;
    let mut series = RunSeries {
        sobolev_indices: observer.sobolev_indices().to_vec(),
        samples: vec![observer.observe(0.0, v0)?],
        status: RunStatus::Completed,
    };
    let mut v = v0.clone();
    for k in 1..=steps {
        match step(&v, eq, config.dt) {
            Ok(next) => v = next,
            Err(Error::BlowUp { .. }) => {
                series.status = RunStatus::BlowUp {
                    last_valid_time: (k - 1) as f64 * config.dt,
                };
                return Ok((series, v));
            }
            Err(e) => return Err(e),
        }
        if k % config.sample_every == 0 || k == steps {
            series.samples.push(observer.observe(k as f64 * config.dt, &v)?);
        }
    }
    Ok((series, v))
}

pub fn integrate(
    v0: &SpectralField,
    eq: &EquationSpec,
    config: &IntegrationConfig,
    observer: &mut dyn Observer,
) -> Result<RunSeries> {
    integrate_to(v0, eq, config, observer).map(|(series, _)| series)
}

/// Residual of the NS–Voigt energy law
/// `d/dt (||v||_0^2 + alpha^2 ||v||_s^2) + 2 nu ||v||_1^2 = 0`,
/// using centred differences on uniformly spaced samples. Returns
/// `max_i |residual_i| / max(1, max_i 2 nu ||v||_1^2)`.
pub fn dissipation_check(series: &RunSeries, eq: &EquationSpec) -> Result<f64> {
    let EquationSpec::NsVoigt { alpha, s, nu } = *eq else {
        return Err(Error::Config("dissipation check applies to NS-Voigt only".into()));
    };
    let samples = &series.samples;
    if samples.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "need at least 3 samples, got {}",
            samples.len()
        )));
    }
    let norm_s = series
        .sobolev_column(s)
        .ok_or_else(|| Error::InsufficientData(format!("series lacks ||v||_{s}")))?;
    let norm_1 = series
        .sobolev_column(1.0)
        .ok_or_else(|| Error::InsufficientData("series lacks ||v||_1".into()))?;
    let h = samples[1].t - samples[0].t;
    if samples
        .windows(2)
        .any(|w| ((w[1].t - w[0].t) - h).abs() > 1e-9 * h)
    {
        return Err(Error::InsufficientData("samples are not uniformly spaced".into()));
    }
    let quantity: Vec<f64> = samples
        .iter()
        .zip(&norm_s)
        .map(|(sample, ns)| sample.energy + alpha * alpha * ns * ns)
        .collect();
    let dissipation: Vec<f64> = norm_1.iter().map(|n1| 2.0 * nu * n1 * n1).collect();
    let worst = (1..samples.len() - 1)
        .map(|i| ((quantity[i + 1] - quantity[i - 1]) / (2.0 * h) + dissipation[i]).abs())
        .fold(0.0, f64::max);
    let scale = dissipation.iter().copied().fold(1.0, f64::max);
    Ok(worst / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Lattice, ZERO3};
    use num_complex::Complex64;
    use std::sync::Arc;

    fn single_mode(lattice: &Arc<Lattice>) -> SpectralField {
        SpectralField::from_fn(Arc::clone(lattice), |m| {
            if m == [1, 0, 0] || m == [-1, 0, 0] {
                [ZERO3[0], Complex64::new(1.0, 0.0), ZERO3[0]]
            } else {
                ZERO3
            }
        })
    }

    #[test]
    fn shear_mode_is_steady_for_euler() {
        let lattice = Lattice::new(2).unwrap();
        let v = single_mode(&lattice);
        assert!(rhs(&v, &EquationSpec::Euler).unwrap().max_modulus() < 1e-15);
    }

    #[test]
    fn single_mode_ns_voigt_decay_rate() {
        let lattice = Lattice::new(2).unwrap();
        let v = single_mode(&lattice);
        let eq = EquationSpec::NsVoigt { alpha: 0.7, s: 0.8, nu: 0.3 };
        let r = rhs(&v, &eq).unwrap();
        let expected = -0.3 / (1.0 + 0.49);
        assert!((r.coeff([1, 0, 0]).unwrap()[1].re - expected).abs() < 1e-15);
    }

    #[test]
    fn single_mode_ns_voigt_closed_form_in_time() {
        let lattice = Lattice::new(2).unwrap();
        let eq = EquationSpec::NsVoigt { alpha: 1.0, s: 0.5, nu: 0.5 };
        let mut v = single_mode(&lattice);
        let dt = 0.05;
        for _ in 0..20 {
            v = step(&v, &eq, dt).unwrap();
        }
        let exact = (-0.5 * 1.0 / 2.0f64).exp();
        let got = v.coeff([1, 0, 0]).unwrap()[1].re;
        // RK4 local error ~ (rate dt)^5 / 120 per step
        assert!((got - exact).abs() < 1e-8, "{got} vs {exact}");
    }

    #[test]
    fn zero_field_stays_zero() {
        let lattice = Lattice::new(2).unwrap();
        let zero = SpectralField::zeros(lattice);
        let next = step(&zero, &EquationSpec::Euler, 0.1).unwrap();
        assert!(next.is_zero());
        assert_eq!(conserved_quantity(&zero, &EquationSpec::EulerVoigt { alpha: 1.0, s: 1.0 }), 0.0);
    }

    #[test]
    fn conserved_quantity_single_mode() {
        let lattice = Lattice::new(2).unwrap();
        let v = single_mode(&lattice);
        let q = conserved_quantity(&v, &EquationSpec::EulerVoigt { alpha: 1.0, s: 1.0 });
        assert!((q - 4.0).abs() < 1e-14);
    }

    #[test]
    fn non_solenoidal_state_rejected() {
        let lattice = Lattice::new(1).unwrap();
        let v = SpectralField::from_fn(lattice, |m| {
            if m == [1, 0, 0] || m == [-1, 0, 0] {
                [Complex64::new(1.0, 0.0), ZERO3[0], ZERO3[0]]
            } else {
                ZERO3
            }
        });
        assert!(matches!(rhs(&v, &EquationSpec::Euler), Err(Error::NonSolenoidal { .. })));
        assert!(rhs(&v, &EquationSpec::Burgers { projected: false }).is_ok());
    }

    #[test]
    fn integration_config_checks() {
        let ok = IntegrationConfig { dt: 0.1, t_end: 1.0, sample_every: 1 };
        assert_eq!(ok.steps().unwrap(), 10);
        assert!(IntegrationConfig { dt: 0.3, t_end: 1.0, sample_every: 1 }.steps().is_err());
        assert!(IntegrationConfig { dt: 0.1, t_end: 1.0, sample_every: 0 }.steps().is_err());
    }

    #[test]
    fn dissipation_check_needs_three_samples() {
        let series = RunSeries {
            sobolev_indices: vec![0.5, 1.0],
            samples: vec![],
            status: RunStatus::Completed,
        };
        let eq = EquationSpec::NsVoigt { alpha: 1.0, s: 0.5, nu: 0.1 };
        assert!(matches!(dissipation_check(&series, &eq), Err(Error::InsufficientData(_))));
    }
}
