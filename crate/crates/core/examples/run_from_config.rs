//! Runs a configuration file end to end, writing the series, final field and
//! report into a directory.
//!
//! ```text
//! cargo run --example run_from_config -- configs/thm4_ns_voigt.toml out/thm4
//! ```

use std::path::PathBuf;

use gevrey::harness::{run, RunConfig};

fn main() -> gevrey::Result<()> {
    let mut args = std::env::args().skip(1);
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..");
    let config_path = args.next().map_or_else(|| root.join("configs/thm4_ns_voigt.toml"), PathBuf::from);
    let out = args.next().map_or_else(|| std::env::temp_dir().join("gevrey-run"), PathBuf::from);

    let config = RunConfig::load(&config_path)?;
    let outcome = run(&config, &out)?;
    println!("wrote {} samples to {}", outcome.series.samples.len(), out.display());
    if let Some(report) = outcome.report {
        println!("verdict {:?}, exit code {}", report.verdict, outcome.exit_code);
    }
    Ok(())
}
