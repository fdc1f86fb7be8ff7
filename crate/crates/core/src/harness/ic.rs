use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{enforce_hermitian, project_mode, vec_norm_sqr, Lattice, SpectralField, Vec3c, ZERO3};

use super::io::read_field;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum IcVariant {
    /// `(sin x cos y cos z, -cos x sin y cos z, 0)`
    TaylorGreen,
    /// `(A sin z + C cos y, B sin x + A cos z, C sin y + B cos x)`
    Abc { a: f64, b: f64, c: f64 },
    /// Solenoidal field with `|v_n| = e^{-sigma0 |n|} |n|^{-q0}` and random
    /// phases. The seed falls back to the run seed.
    GevreyRandom {
        sigma0: f64,
        #[serde(default)]
        q0: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    FromFile { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IcSpec {
    #[serde(flatten)]
    pub variant: IcVariant,
    #[serde(default = "unit")]
    pub amplitude: f64,
}

fn unit() -> f64 {
    1.0
}

impl IcSpec {
    pub fn new(variant: IcVariant) -> Self {
        Self { variant, amplitude: 1.0 }
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn validate(&self, run_seed: Option<u64>) -> Result<()> {
        if !self.amplitude.is_finite() {
            return Err(Error::Config(format!("amplitude {} is not finite", self.amplitude)));
        }
        match &self.variant {
            IcVariant::GevreyRandom { sigma0, q0, seed } => {
                if !(*sigma0 >= 0.0 && sigma0.is_finite() && q0.is_finite()) {
                    return Err(Error::Config(format!(
                        "gevrey-random needs sigma0 >= 0 and finite q0, got {sigma0}, {q0}"
                    )));
                }
                if seed.or(run_seed).is_none() {
                    return Err(Error::Config("gevrey-random needs a seed".into()));
                }
                Ok(())
            }
            IcVariant::Abc { a, b, c } if !(a.is_finite() && b.is_finite() && c.is_finite()) => {
                Err(Error::Config("ABC coefficients must be finite".into()))
            }
            _ => Ok(()),
        }
    }

    pub(crate) fn resolve_relative(&mut self, base: &Path) {
        if let IcVariant::FromFile { path } = &mut self.variant {
            if path.is_relative() {
                *path = base.join(&*path);
            }
        }
    }
}

fn i(x: f64) -> Complex64 {
    Complex64::new(0.0, x)
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn taylor_green(lattice: Arc<Lattice>) -> SpectralField {
    SpectralField::from_fn(lattice, |[n1, n2, n3]| {
        if n1.abs() == 1 && n2.abs() == 1 && n3.abs() == 1 {
            [i(-n1 as f64 / 8.0), i(n2 as f64 / 8.0), re(0.0)]
        } else {
            ZERO3
        }
    })
}

fn abc(lattice: Arc<Lattice>, a: f64, b: f64, c: f64) -> SpectralField {
    // sin(k x) -> -i/2 at +k, +i/2 at -k; cos(k x) -> 1/2 at both
    SpectralField::from_fn(lattice, |n| {
        let sign = |k: i32| k as f64;
        match n {
            [k, 0, 0] if k.abs() == 1 => [re(0.0), i(-sign(k) * b / 2.0), re(b / 2.0)],
            [0, k, 0] if k.abs() == 1 => [re(c / 2.0), re(0.0), i(-sign(k) * c / 2.0)],
            [0, 0, k] if k.abs() == 1 => [i(-sign(k) * a / 2.0), re(a / 2.0), re(0.0)],
            _ => ZERO3,
        }
    })
}

fn gevrey_random(lattice: Arc<Lattice>, sigma0: f64, q0: f64, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs = vec![ZERO3; lattice.len()];
    for idx in 0..lattice.len() {
        let partner = lattice.mirror(idx);
        if idx > partner {
            continue;
        }
        let mode = lattice.mode(idx);
        let r = lattice.magnitude(idx);
        let direction = loop {
            let raw: Vec3c = std::array::from_fn(|_| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let projected = project_mode(&raw, &mode, lattice.magnitude_sq(idx));
            let len = vec_norm_sqr(&projected).sqrt();
            if len > 1e-3 {
                break projected.map(|c| c / len);
            }
        };
        let modulus = (-sigma0 * r).exp() * r.powf(-q0);
        coeffs[idx] = direction.map(|c| c * modulus);
        coeffs[partner] = coeffs[idx].map(|c| c.conj());
    }
    SpectralField::from_coeffs(lattice, coeffs).expect("coefficient count matches lattice")
}

/// Generates the initial condition on `lattice`, scaled by the amplitude.
pub fn make_ic(spec: &IcSpec, lattice: Arc<Lattice>, run_seed: Option<u64>) -> Result<SpectralField> {
    spec.validate(run_seed)?;
    let field = match &spec.variant {
        IcVariant::TaylorGreen => taylor_green(lattice),
        IcVariant::Abc { a, b, c } => abc(lattice, *a, *b, *c),
        IcVariant::GevreyRandom { sigma0, q0, seed } => {
            let seed = seed.or(run_seed).expect("validated");
            gevrey_random(lattice, *sigma0, *q0, seed)
        }
        IcVariant::FromFile { path } => {
            let field = read_field(path)?;
            if field.lattice().truncation() != lattice.truncation() {
                return Err(Error::LatticeMismatch {
                    expected: lattice.truncation(),
                    found: field.lattice().truncation(),
                });
            }
            SpectralField::from_coeffs(lattice, field.into_coeffs())?
        }
    };
    Ok(enforce_hermitian(&field.scale(spec.amplitude)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::fit_analyticity_radius;

    #[test]
    fn taylor_green_is_real_and_solenoidal() {
        let lattice = Lattice::new(4).unwrap();
        let v = make_ic(&IcSpec::new(IcVariant::TaylorGreen), lattice, None).unwrap();
        assert!(v.is_hermitian());
        assert!(v.divergence_defect() <= 1e-15);
        assert_eq!(v.coeffs().iter().filter(|c| vec_norm_sqr(c) > 0.0).count(), 8);
    }

    #[test]
    fn abc_is_a_curl_eigenfield() {
        let lattice = Lattice::new(2).unwrap();
        let v = make_ic(
            &IcSpec::new(IcVariant::Abc { a: 1.0, b: 0.7, c: -0.4 }),
            Arc::clone(&lattice),
            None,
        )
        .unwrap();
        for (idx, c) in v.coeffs().iter().enumerate() {
            let [n1, n2, n3] = lattice.mode(idx).map(|k| k as f64);
            let curl = [
                i(1.0) * (n2 * c[2] - n3 * c[1]),
                i(1.0) * (n3 * c[0] - n1 * c[2]),
                i(1.0) * (n1 * c[1] - n2 * c[0]),
            ];
            for k in 0..3 {
                assert!((curl[k] - c[k]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn random_ic_needs_seed_and_is_reproducible() {
        let lattice = Lattice::new(4).unwrap();
        let spec = IcSpec::new(IcVariant::GevreyRandom { sigma0: 0.5, q0: 0.0, seed: None });
        assert!(make_ic(&spec, Arc::clone(&lattice), None).is_err());
        let a = make_ic(&spec, Arc::clone(&lattice), Some(3)).unwrap();
        let b = make_ic(&spec, Arc::clone(&lattice), Some(3)).unwrap();
        assert_eq!(a.coeffs(), b.coeffs());
        assert!(a.is_hermitian() && a.is_solenoidal());
        let fit = fit_analyticity_radius(&a).unwrap();
        assert!((fit.sigma_hat - 0.5).abs() < 0.025);
    }
}
