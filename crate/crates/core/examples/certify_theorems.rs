//! Evaluates every theorem's envelope for a small Taylor-Green field and
//! certifies short runs against it.

use std::path::PathBuf;

use gevrey::harness::{execute, RunConfig};

fn main() -> gevrey::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for name in ["thm1_euler", "thm2_euler_voigt", "thm3_ns_voigt", "thm4_ns_voigt", "thm5_ns_voigt"] {
        let mut config = RunConfig::load(&dir.join(format!("{name}.toml")))?;
        // keep the demonstration short
        config.integration.t_end = 20.0 * config.integration.dt;
        config.integration.sample_every = 5;
        let outcome = execute(&config)?;
        let report = outcome.report.expect("theorem configured");
        println!(
            "{name:<18} xi0 {:.4e}  t* {:<12}  min margin {:.4e}  {:?}",
            report.xi0,
            report.t_star.map_or("none".into(), |t| format!("{t:.4}")),
            report.min_margin.unwrap_or(f64::NAN),
            report.verdict
        );
    }
    Ok(())
}
