use std::path::Path;

use crate::bounds::{certify, BoundReport, Theorem, Verdict};
use crate::dynamics::{integrate_to, Observer, RunSeries, Sample, StandardObserver};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, SpectralField};
use crate::norms::{gevrey_norm, GevreyIndex};
use crate::xform::{v_to_w, TransformSpec};

use super::config::RunConfig;
use super::ic::make_ic;
use super::io::{export_series, read_series, write_field, SeriesHeader};

/// Adds the transform and certificate columns to the standard diagnostics.
///
/// With a theorem, `psi` and `xi` come from the theorem's transform, `gevrey`
/// is the norm named in the theorem's conclusion and `envelope`/`margin`
/// compare it with the bound. `xi0` is taken from the first observation, which
/// must be the initial state.
#[derive(Debug, Clone)]
pub struct TheoremObserver {
    base: StandardObserver,
    transform: Option<TransformSpec>,
    theorem: Option<Theorem>,
    xi0: Option<f64>,
}

impl TheoremObserver {
    pub fn new(base: StandardObserver, theorem: Theorem) -> Self {
        Self {
            base,
            transform: Some(theorem.transform()),
            theorem: Some(theorem),
            xi0: None,
        }
    }

    /// Diagnostics without a certificate; `transform` only fills `psi`.
    pub fn diagnostics_only(base: StandardObserver, transform: Option<TransformSpec>) -> Self {
        Self {
            base,
            transform,
            theorem: None,
            xi0: None,
        }
    }
}

impl Observer for TheoremObserver {
    fn sobolev_indices(&self) -> &[f64] {
        &self.base.sobolev_indices
    }

    fn observe(&mut self, t: f64, v: &SpectralField) -> Result<Sample> {
        let mut sample = self.base.sample(t, v);
        let Some(spec) = &self.transform else {
            return Ok(sample);
        };
        let transformed = v_to_w(v, spec, t)?;
        sample.psi = transformed.psi;
        let Some(theorem) = &self.theorem else {
            return Ok(sample);
        };
        sample.xi = theorem.xi(&transformed.w);
        let xi0 = *self.xi0.get_or_insert(sample.xi);
        match theorem.envelope(xi0, t) {
            Ok(env) => {
                sample.gevrey = if v.is_zero() {
                    0.0
                } else {
                    gevrey_norm(v, GevreyIndex::new(env.sigma_index, env.q)?)
                };
                sample.envelope = env.bound;
                sample.margin = env.bound - sample.gevrey;
            }
            Err(Error::Horizon { .. }) => sample.gevrey = f64::NAN,
            Err(e) => return Err(e),
        }
        Ok(sample)
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub series: RunSeries,
    pub report: Option<BoundReport>,
    pub final_field: SpectralField,
    pub exit_code: i32,
}

/// `0` certified, horizon exceeded or no theorem; `2` envelope violated;
/// `3` integration failed.
pub fn exit_code(series: &RunSeries, report: Option<&BoundReport>) -> i32 {
    match report.map(|r| r.verdict) {
        Some(Verdict::EnvelopeViolated) => 2,
        Some(Verdict::IntegrationFailed) => 3,
        _ if !series.is_complete() => 3,
        _ => 0,
    }
}

fn series_header(config: &RunConfig) -> SeriesHeader {
    let mut header = SeriesHeader::default()
        .with("equation", config.equation.name())
        .with("truncation", config.truncation)
        .with("dt", config.integration.dt)
        .with("t_end", config.integration.t_end);
    if let Some(t) = &config.theorem {
        header = header.with("theorem", t.id);
    }
    if let Some(seed) = config.seed {
        header = header.with("seed", seed);
    }
    header
}

/// Runs the configured integration in memory.
pub fn execute(config: &RunConfig) -> Result<RunOutcome> {
    config.validate()?;
    let lattice = Lattice::new(config.truncation)?;
    let v0 = make_ic(&config.initial, lattice, config.seed)?;
    if config.equation.requires_solenoidal() && !v0.is_solenoidal() {
        return Err(Error::NonSolenoidal {
            defect: v0.scaled_divergence(),
        });
    }
    let base = StandardObserver {
        sobolev_indices: config.diagnostics.sobolev.clone(),
        gevrey: config.diagnostics.gevrey,
        fit_radius: config.diagnostics.fit_radius,
    };
    let theorem = config.build_theorem()?;
    let mut observer = match &theorem {
        Some(theorem) => {
            // a vanishing field stays zero and satisfies every bound
            if let Some(sigma) = config.theorem.as_ref().and_then(|t| t.sigma).filter(|_| !v0.is_zero()) {
                theorem.check_admissible(&v0, sigma)?;
            }
            TheoremObserver::new(base, theorem.clone())
        }
        None => TheoremObserver::diagnostics_only(base, config.transform),
    };
    let (series, final_field) = integrate_to(&v0, &config.equation, &config.integration, &mut observer)?;
    let report = theorem.as_ref().map(|t| certify(&series, t)).transpose()?;
    let exit_code = exit_code(&series, report.as_ref());
    Ok(RunOutcome {
        series,
        report,
        final_field,
        exit_code,
    })
}

/// Runs the configuration and writes the config echo, series, final field and
/// (with a theorem) the report into `out_dir`.
pub fn run(config: &RunConfig, out_dir: &Path) -> Result<RunOutcome> {
    let outcome = execute(config)?;
    std::fs::create_dir_all(out_dir)?;
    std::fs::write(out_dir.join("config.toml"), config.to_toml())?;
    export_series(&outcome.series, &series_header(config), &out_dir.join(&config.output.series))?;
    write_field(&outcome.final_field, &out_dir.join(&config.output.field))?;
    if let Some(report) = &outcome.report {
        std::fs::write(out_dir.join(&config.output.report), report.to_json())?;
    }
    Ok(outcome)
}

/// Re-certifies a stored series against the theorem of `config`.
pub fn verify_command(config: &RunConfig, series_path: &Path) -> Result<BoundReport> {
    let theorem = config
        .build_theorem()?
        .ok_or_else(|| Error::Config("configuration has no [theorem] section".into()))?;
    let (series, _) = read_series(series_path)?;
    certify(&series, &theorem)
}
