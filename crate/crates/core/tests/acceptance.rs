//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with a
//! non-zero status if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use gevrey::bounds::{
    amplitude_a, d_s, kappa, lattice_sum_cs, q1, q2, rate_q, theta, thm1_horizon_from, thm5_horizon_from,
    BoundConstants, Thm1Params, Verdict,
};
use gevrey::dynamics::{
    conserved_quantity, dissipation_check, integrate, integrate_to, step, EquationSpec, IntegrationConfig,
    StandardObserver,
};
use gevrey::harness::{execute, make_ic, IcSpec, IcVariant, RunConfig};
use gevrey::lattice::{nonlinear_term, Lattice};
use gevrey::norms::{fit_analyticity_radius, gevrey_norm, sobolev_norm, GevreyIndex};
use gevrey::xform::{v_to_w, w_to_v, TransformSpec};

type Outcome = Result<String, String>;

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn conservation() -> Outcome {
    let lattice = Lattice::new(8).map_err(|e| e.to_string())?;
    let v0 = make_ic(&IcSpec::new(IcVariant::TaylorGreen), lattice, None).map_err(|e| e.to_string())?;
    let mut details = Vec::new();
    for eq in [EquationSpec::Euler, EquationSpec::EulerVoigt { alpha: 1.0, s: 5.0 / 6.0 }] {
        let clock = Instant::now();
        let start = conserved_quantity(&v0, &eq);
        let mut v = v0.clone();
        for _ in 0..1000 {
            v = step(&v, &eq, 1e-3).map_err(|e| e.to_string())?;
        }
        let drift = (conserved_quantity(&v, &eq) - start).abs() / start;
        let secs = clock.elapsed().as_secs_f64();
        ensure(drift <= 1e-9, || format!("{}: drift {drift:.2e}", eq.name()))?;
        ensure(secs <= 60.0, || format!("{}: took {secs:.1} s", eq.name()))?;
        details.push(format!("{} drift {drift:.1e} in {secs:.1} s", eq.name()));
    }
    Ok(details.join(", "))
}

fn energy_law() -> Outcome {
    let lattice = Lattice::new(8).map_err(|e| e.to_string())?;
    let v0 = make_ic(&IcSpec::new(IcVariant::TaylorGreen), lattice, None).map_err(|e| e.to_string())?;
    let eq = EquationSpec::NsVoigt { alpha: 1.0, s: 0.5, nu: 0.1 };
    let residual = |dt: f64| -> Result<f64, String> {
        let config = IntegrationConfig { dt, t_end: 0.1, sample_every: 1 };
        let mut observer = StandardObserver { sobolev_indices: vec![0.5, 1.0], ..Default::default() };
        let series = integrate(&v0, &eq, &config, &mut observer).map_err(|e| e.to_string())?;
        dissipation_check(&series, &eq).map_err(|e| e.to_string())
    };
    let coarse = residual(1e-3)?;
    let fine = residual(5e-4)?;
    let ratio = coarse / fine;
    ensure(coarse <= 1e-6, || format!("residual {coarse:.2e} at dt 1e-3"))?;
    ensure((3.5..4.5).contains(&ratio), || format!("halving ratio {ratio:.3}"))?;
    Ok(format!("residual {coarse:.2e}, ratio {ratio:.3}"))
}

fn steady_abc() -> Outcome {
    let lattice = Lattice::new(4).map_err(|e| e.to_string())?;
    let spec = IcSpec::new(IcVariant::Abc { a: 1.0, b: 0.8, c: 0.6 });
    let v0 = make_ic(&spec, lattice, None).map_err(|e| e.to_string())?;
    let mut v = v0.clone();
    for _ in 0..100 {
        v = step(&v, &EquationSpec::Euler, 0.01).map_err(|e| e.to_string())?;
    }
    let change = v.max_difference(&v0).map_err(|e| e.to_string())?;
    ensure(change <= 1e-11, || format!("mode change {change:.2e} over unit time"))?;
    Ok(format!("max mode change {change:.1e} over t = 1"))
}

fn convolution_oracle() -> Outcome {
    let mut rng = common::rng(4);
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let n = 2 + k % 5;
        let lattice = Lattice::new(n).map_err(|e| e.to_string())?;
        let projected = k % 2 == 0;
        let f = common::random_field(&lattice, &mut rng, 0.3, projected);
        let fast = nonlinear_term(&f, projected);
        let slow = common::brute_force_advection(&f, projected);
        let rel = common::max_abs_diff(fast.coeffs(), &slow) / common::max_abs(&slow);
        worst = worst.max(rel);
    }
    ensure(worst <= 1e-12, || format!("worst relative error {worst:.2e}"))?;
    Ok(format!("worst relative error {worst:.1e}"))
}

fn psi_solver() -> Outcome {
    let specs = [
        TransformSpec::FixedSobolev { beta: 0.3, epsilon: 1.0, s: 0.5 },
        TransformSpec::VoigtTriple { beta: 0.2, epsilon: 1.5, alpha: 0.8, s: 0.75 },
        TransformSpec::CriticalShift { beta: 0.1, alpha: 1.0 },
        TransformSpec::LinearInTime { beta: 0.4 },
    ];
    let mut rng = common::rng(5);
    let (mut worst_residual, mut worst_trip): (f64, f64) = (0.0, 0.0);
    for k in 0..50 {
        let lattice = Lattice::new(2 + k % 3).map_err(|e| e.to_string())?;
        let amplitude = 10f64.powf(-2.0 + 4.0 * k as f64 / 49.0);
        let v = common::random_field(&lattice, &mut rng, 0.4, true).scale(amplitude);
        for spec in &specs {
            let t = 0.5;
            let out = v_to_w(&v, spec, t).map_err(|e| e.to_string())?;
            worst_residual = worst_residual.max(out.residual.abs() / spec.beta());
            let back = w_to_v(&out.w, spec, t).map_err(|e| e.to_string())?;
            let err = back.max_difference(&v).map_err(|e| e.to_string())? / v.max_modulus();
            worst_trip = worst_trip.max(err);
        }
    }
    ensure(worst_residual <= 1e-12, || format!("residual {worst_residual:.2e} beta"))?;
    ensure(worst_trip <= 1e-12, || format!("round trip {worst_trip:.2e}"))?;
    Ok(format!("residual {worst_residual:.1e} beta, round trip {worst_trip:.1e}"))
}

fn transform_identity() -> Outcome {
    let lattice = Lattice::new(5).map_err(|e| e.to_string())?;
    let mut rng = common::rng(6);
    let mut worst: f64 = 0.0;
    for k in 0..10 {
        let v = common::random_field(&lattice, &mut rng, 0.5, true);
        let (beta, t, q) = (0.3, 0.1 * k as f64, 0.25 * k as f64);
        let w = v_to_w(&v, &TransformSpec::LinearInTime { beta }, t).map_err(|e| e.to_string())?.w;
        let lhs = gevrey_norm(&v, GevreyIndex::new(beta * t, q).map_err(|e| e.to_string())?);
        let rhs = sobolev_norm(&w, q);
        ensure(lhs.to_bits() == rhs.to_bits(), || format!("linear-in-time {lhs:e} != {rhs:e}"))?;

        let (beta, epsilon, s) = (0.2, 0.5 + 0.1 * k as f64, 0.5);
        let spec = TransformSpec::FixedSobolev { beta, epsilon, s };
        let w = v_to_w(&v, &spec, 0.0).map_err(|e| e.to_string())?.w;
        let w_norm = sobolev_norm(&w, s + 1.5);
        let index = GevreyIndex::new(beta * w_norm.powf(-epsilon), s + 1.5).map_err(|e| e.to_string())?;
        worst = worst.max((gevrey_norm(&v, index) - w_norm).abs() / w_norm);
    }
    ensure(worst <= 1e-12, || format!("fixed-Sobolev mismatch {worst:.2e}"))?;
    Ok(format!("linear-in-time bit-equal, fixed-Sobolev {worst:.1e}"))
}

fn closed_forms() -> Outcome {
    let cube = 4.0 * (2.0 * PI).powi(3);
    // (quantity, computed, hand value)
    let table: [(&str, f64, f64); 20] = [
        ("A(0.5, 1)", amplitude_a(0.5, 1.0), 1.0),
        ("theta(1)", theta(1.0), 2.0),
        ("A(0.75, 0.5)", amplitude_a(0.75, 0.5), 0.5),
        ("theta(0.5)", theta(0.5), 1.0),
        ("kappa(3/4, 1.6)", kappa(0.75, 1.6), 0.5),
        ("kappa(0.9, 1.25)", kappa(0.9, 1.25), 1.0),
        ("D(2pi^3, pi, pi^2)", d_s(2.0 * PI.powi(3), PI, PI * PI), 0.75),
        ("D(0, 2, 2pi^3)", d_s(0.0, 2.0, 2.0 * PI.powi(3)), 1.0),
        ("Q1(0.5, 1, 0.25, 0.25)", q1(0.5, 1.0, 0.25, 0.25), 8.0 / 27.0),
        ("Q1 below threshold", q1(0.2, 1.0, 0.25, 0.25), 0.0),
        ("Q2(gamma 1, eta3 3)", q2(1.0, 3.0, cube, 1.0, 1.0), 2.0),
        ("Q2(gamma 3/4, eta3 3.5)", q2(0.75, 3.5, cube, 0.5, 1.0), 1.0 / 256.0),
        ("q(1, 0.25, 0.5)", rate_q(1.0, 0.25, 0.5), 2.0),
        ("q(0.5, 0.5, 0.5)", rate_q(0.5, 0.5, 0.5), 1.0),
        ("t*(D 1, eps 1, A 1, xi0 1)", thm1_horizon_from(1.0, 1.0, 1.0, 1.0), 0.5),
        ("t*(D 0.5, eps 1, A 1, xi0 2)", thm1_horizon_from(0.5, 1.0, 1.0, 2.0), 0.25),
        ("t*(D 1, eps 0.5, A 4, xi0 1)", thm1_horizon_from(1.0, 0.5, 4.0, 1.0), 16.0),
        ("t*(gamma 1, q 1, Q2 1, xi0 1)", thm5_horizon_from(1.0, 1.0, 1.0, 1.0), 0.5 * 2f64.ln()),
        ("t*(gamma 1, q 0, Q2 2, xi0 1)", thm5_horizon_from(1.0, 0.0, 2.0, 1.0), 0.25),
        ("t*(gamma 1, q 2, Q2 1, xi0 1)", thm5_horizon_from(1.0, 2.0, 1.0, 1.0), 0.25 * 3f64.ln()),
    ];
    let mut worst: f64 = 0.0;
    for (name, got, want) in table {
        let err = if want == 0.0 { got.abs() } else { (got - want).abs() / want.abs() };
        ensure(err <= 1e-14, || format!("{name}: {got:.17e} vs {want:.17e}"))?;
        worst = worst.max(err);
    }
    Ok(format!("{} entries, worst relative error {worst:.1e}", table.len()))
}

fn configs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn certification() -> Outcome {
    let clock = Instant::now();
    let mut details = Vec::new();
    for name in [
        "thm1_euler",
        "thm2_euler_voigt",
        "thm3_ns_voigt",
        "thm4_ns_voigt",
        "thm5_ns_voigt",
    ] {
        let path = configs_dir().join(format!("{name}.toml"));
        let mut config = RunConfig::load(&path).map_err(|e| format!("{name}: {e}"))?;
        let mut outcome = execute(&config).map_err(|e| format!("{name}: {e}"))?;
        let t_star = outcome.report.as_ref().and_then(|r| r.t_star);
        if let Some(t_star) = t_star.filter(|&t| config.integration.t_end > 0.9 * t) {
            let dt = config.integration.dt;
            config.integration.t_end = (0.9 * t_star / dt).floor() * dt;
            outcome = execute(&config).map_err(|e| format!("{name}: {e}"))?;
        }
        let report = outcome.report.ok_or_else(|| format!("{name}: no report"))?;
        ensure(report.verdict == Verdict::CertifiedWithinEnvelope, || {
            format!("{name}: {:?}, min margin {:?}", report.verdict, report.min_margin)
        })?;
        details.push(format!("thm{} to t={}", report.theorem, config.integration.t_end));
    }
    let secs = clock.elapsed().as_secs_f64();
    ensure(secs <= 600.0, || format!("took {secs:.0} s"))?;
    Ok(format!("{} in {secs:.1} s", details.join(", ")))
}

fn thm1_identity() -> Outcome {
    let constants = BoundConstants::for_truncation(8).map_err(|e| e.to_string())?;
    let sets = [
        (0.5, 0.5, 1.0, 0.3),
        (0.25, 0.1, 0.5, 1.0),
        (0.1, 1.0, 1.5, 0.05),
        (0.4, 0.05, 0.2, 2.0),
        (0.5, 2.0, 1.9, 10.0),
    ];
    let mut worst: f64 = 0.0;
    for (s, beta, eps, xi0) in sets {
        let p = Thm1Params::new(s, beta, eps, &constants).map_err(|e| e.to_string())?;
        let t_star = p.horizon(xi0);
        for k in 0..100 {
            let t = 0.99 * t_star * k as f64 / 99.0;
            let phi = p.envelope(xi0, t).map_err(|e| e.to_string())?.phi;
            let xi = p.xi_bound(xi0, t).map_err(|e| e.to_string())?;
            worst = worst.max(((xi / p.a).powf(1.0 / (2.0 - eps)) - phi).abs() / phi);
        }
    }
    ensure(worst <= 1e-10, || format!("worst relative mismatch {worst:.2e}"))?;
    Ok(format!("worst relative mismatch {worst:.1e}"))
}

fn radius_tracking() -> Outcome {
    let mut details = Vec::new();
    for sigma0 in [0.3, 0.5, 1.0] {
        let lattice = Lattice::new(16).map_err(|e| e.to_string())?;
        let spec = IcSpec::new(IcVariant::GevreyRandom { sigma0, q0: 0.0, seed: Some(10) }).with_amplitude(0.05);
        let v0 = make_ic(&spec, lattice, None).map_err(|e| e.to_string())?;
        let fit = fit_analyticity_radius(&v0).map_err(|e| e.to_string())?;
        let rel = (fit.sigma_hat - sigma0).abs() / sigma0;
        ensure(rel <= 0.05, || format!("sigma0 {sigma0}: fitted {:.4}", fit.sigma_hat))?;

        let config = IntegrationConfig { dt: 1e-3, t_end: 3e-3, sample_every: 1 };
        let mut observer = StandardObserver { fit_radius: true, ..Default::default() };
        let (series, _) =
            integrate_to(&v0, &EquationSpec::Euler, &config, &mut observer).map_err(|e| e.to_string())?;
        ensure(series.samples.len() == 4, || format!("{} samples", series.samples.len()))?;
        for sample in &series.samples {
            let fitted = sample.sigma_fit.filter(|x| x.is_finite());
            ensure(fitted.is_some(), || format!("sigma0 {sigma0}: no fit at t={}", sample.t))?;
        }
        details.push(format!("{sigma0} -> {:.4}", fit.sigma_hat));
    }
    Ok(details.join(", "))
}

fn lattice_sum_stability() -> Outcome {
    let mut details = Vec::new();
    for s in [0.5, 1.0] {
        let loose = lattice_sum_cs(s, 1e-6).map_err(|e| e.to_string())?;
        let tight = lattice_sum_cs(s, 1e-8).map_err(|e| e.to_string())?;
        let rel = (loose - tight).abs() / tight;
        ensure(rel <= 1e-6, || format!("s={s}: {loose} vs {tight}"))?;
        details.push(format!("c_{s} = {tight:.10} ({rel:.1e})"));
    }
    Ok(details.join(", "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("Galerkin conservation", conservation),
        ("NS-Voigt energy law", energy_law),
        ("ABC steady state", steady_abc),
        ("convolution oracle", convolution_oracle),
        ("psi solver", psi_solver),
        ("transform identity", transform_identity),
        ("closed-form arithmetic", closed_forms),
        ("envelope certification", certification),
        ("Theorem 1 identity", thm1_identity),
        ("analyticity radius tracking", radius_tracking),
        ("lattice sum stability", lattice_sum_stability),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
