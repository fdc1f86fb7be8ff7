use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bounds::{
    BoundConstants, EmbeddingOverride, Theorem, Thm1Params, Thm2Params, Thm3Params, Thm4Params,
    Thm5Params, CS_TAIL_TOL,
};
use crate::dynamics::{EquationSpec, IntegrationConfig};
use crate::error::{Error, Result};
use crate::norms::GevreyIndex;
use crate::xform::TransformSpec;

use super::ic::IcSpec;

pub const CONFIG_SCHEMA: &str = "gevrey-config/1";

/// Everything needed to reproduce one run.
///
/// ```toml
/// schema = "gevrey-config/1"
/// truncation = 8
/// seed = 7
///
/// [equation]
/// kind = "euler"
///
/// [integration]
/// dt = 0.001
/// t_end = 0.5
/// sample_every = 50
///
/// [initial]
/// kind = "taylor-green"
/// amplitude = 0.01
///
/// [theorem]
/// id = 1
/// s = 0.5
/// beta = 0.5
/// epsilon = 1.0
/// sigma = 1.0
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: String,
    pub truncation: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub equation: EquationSpec,
    pub integration: IntegrationConfig,
    pub initial: IcSpec,
    #[serde(default)]
    pub diagnostics: DiagnosticsConfig,
    /// Transform used for the `psi` column when no theorem is configured.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transform: Option<TransformSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<TheoremConfig>,
    #[serde(default)]
    pub constants: ConstantsConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsConfig {
    /// Indices `q` of the `||v||_q` columns.
    #[serde(default = "default_sobolev")]
    pub sobolev: Vec<f64>,
    /// Fixed Gevrey index for the `gevrey` column when no theorem is set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gevrey: Option<GevreyIndex>,
    #[serde(default)]
    pub fit_radius: bool,
}

fn default_sobolev() -> Vec<f64> {
    vec![0.5, 1.0]
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self {
            sobolev: default_sobolev(),
            gevrey: None,
            fit_radius: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsConfig {
    #[serde(default = "default_tail_tol")]
    pub cs_tail_tol: f64,
    #[serde(default)]
    pub embedding: Vec<EmbeddingOverride>,
}

fn default_tail_tol() -> f64 {
    CS_TAIL_TOL
}

impl Default for ConstantsConfig {
    fn default() -> Self {
        Self {
            cs_tail_tol: CS_TAIL_TOL,
            embedding: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default = "default_series")]
    pub series: String,
    #[serde(default = "default_report")]
    pub report: String,
    #[serde(default = "default_field")]
    pub field: String,
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}
fn default_series() -> String {
    "series.csv".into()
}
fn default_report() -> String {
    "report.json".into()
}
fn default_field() -> String {
    "final_field.txt".into()
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: default_dir(),
            series: default_series(),
            report: default_report(),
            field: default_field(),
        }
    }
}

/// Theorem selection. `alpha`, `s` and `nu` come from the equation; the
/// remaining fields are read according to `id`:
///
/// | id | equation | fields |
/// |----|----------|--------|
/// | 1 | euler, burgers | `s`, `beta`, `epsilon`, `sigma` |
/// | 2 | euler-voigt | `zeta`, `beta`, `sigma` |
/// | 3 | ns-voigt | `epsilon`, `beta`, `sigma` |
/// | 4 | ns-voigt with s = 1/2 | `beta`, `sigma` |
/// | 5 | ns-voigt | `gamma`, `beta`, `eta` |
///
/// `sigma` is a strip width at which the initial condition's Gevrey norms are
/// evaluated to check the admissibility of `beta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoremConfig {
    pub id: u8,
    pub beta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
}

fn field<T: Copy>(value: Option<T>, id: u8, name: &str) -> Result<T> {
    value.ok_or_else(|| Error::Config(format!("theorem {id} needs `{name}`")))
}

impl TheoremConfig {
    /// Builds the theorem for `equation`, checking every hypothesis that does
    /// not involve the initial condition.
    pub fn build(&self, equation: &EquationSpec, constants: &BoundConstants) -> Result<Theorem> {
        let id = self.id;
        let wrong = || {
            Error::Config(format!(
                "theorem {id} does not apply to the {} equation",
                equation.name()
            ))
        };
        match (id, *equation) {
            (1, EquationSpec::Euler | EquationSpec::Burgers { .. }) => Ok(Theorem::One(
                Thm1Params::new(
                    field(self.s, id, "s")?,
                    self.beta,
                    field(self.epsilon, id, "epsilon")?,
                    constants,
                )?,
            )),
            (2, EquationSpec::EulerVoigt { alpha, s }) => Ok(Theorem::Two(Thm2Params::new(
                field(self.zeta, id, "zeta")?,
                s,
                alpha,
                self.beta,
                constants,
            )?)),
            (3, EquationSpec::NsVoigt { alpha, s, nu }) => Ok(Theorem::Three(Thm3Params::new(
                s,
                field(self.epsilon, id, "epsilon")?,
                alpha,
                self.beta,
                nu,
                constants,
            )?)),
            (4, EquationSpec::NsVoigt { alpha, s, nu }) => {
                if (s - 0.5).abs() > 1e-12 {
                    return Err(Error::Config(format!("theorem 4 needs s = 1/2, got {s}")));
                }
                Ok(Theorem::Four(Thm4Params::new(alpha, nu, self.beta, constants)?))
            }
            (5, EquationSpec::NsVoigt { alpha, s, nu }) => Ok(Theorem::Five(Thm5Params::new(
                s,
                field(self.gamma, id, "gamma")?,
                alpha,
                nu,
                self.beta,
                field(self.eta, id, "eta")?,
                constants,
            )?)),
            (1..=5, _) => Err(wrong()),
            _ => Err(Error::Config(format!("unknown theorem id {id}"))),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if config.schema != CONFIG_SCHEMA {
            return Err(Error::SchemaMismatch(format!(
                "config schema `{}`, expected `{CONFIG_SCHEMA}`",
                config.schema
            )));
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut config = Self::from_toml(&text)?;
        // relative IC file paths are resolved against the config location
        if let Some(dir) = path.parent() {
            config.initial.resolve_relative(dir);
        }
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    pub fn bound_constants(&self) -> Result<BoundConstants> {
        let mut constants =
            BoundConstants::for_truncation(self.truncation)?.with_cs_tail_tol(self.constants.cs_tail_tol)?;
        for o in &self.constants.embedding {
            constants = constants.with_override(o.q, o.value, o.provenance.clone())?;
        }
        Ok(constants)
    }

    pub fn build_theorem(&self) -> Result<Option<Theorem>> {
        match &self.theorem {
            None => Ok(None),
            Some(t) => t.build(&self.equation, &self.bound_constants()?).map(Some),
        }
    }

    /// Checks every range that can be checked without generating the IC.
    pub fn validate(&self) -> Result<()> {
        if self.truncation == 0 {
            return Err(Error::Config("truncation must be at least 1".into()));
        }
        self.equation.validate()?;
        self.integration.steps()?;
        self.initial.validate(self.seed)?;
        if let Some(spec) = &self.transform {
            spec.validate()?;
        }
        for &q in &self.diagnostics.sobolev {
            if !q.is_finite() {
                return Err(Error::Config(format!("Sobolev index {q} is not finite")));
            }
        }
        if let Some(t) = &self.theorem {
            if t.id != 5 && t.sigma.is_none() {
                return Err(Error::Config(format!(
                    "theorem {} needs `sigma` to check admissibility of beta",
                    t.id
                )));
            }
        }
        self.build_theorem()?;
        Ok(())
    }
}
