use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gevrey::bounds::{lattice_sum_cs_detailed, CS_TAIL_TOL};
use gevrey::harness::{read_field, run, verify_command, RunConfig};
use gevrey::norms::{gevrey_norm, sobolev_norm, GevreyIndex};
use gevrey::xform::v_to_w;

#[derive(Parser)]
#[command(name = "gevrey", version, about = "Spectral Euler/Voigt runs with Gevrey-norm certificates")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Run configuration (TOML)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides the configured one
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Random seed; overrides the configured one
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate, write the series and certify against the configured theorem
    Run,
    /// Re-certify a stored series
    Verify {
        #[arg(long)]
        series: PathBuf,
    },
    /// Solve for the strip width of a stored field
    Psi {
        #[arg(long)]
        field: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        t: f64,
    },
    /// Print Sobolev and Gevrey norms of a stored field
    Norms {
        #[arg(long)]
        field: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.5, 1.0, 1.5, 2.0])]
        q: Vec<f64>,
        #[arg(long)]
        sigma: Option<f64>,
    },
    /// Print the lattice sum c_s
    Cs {
        #[arg(long)]
        s: f64,
        #[arg(long, default_value_t = CS_TAIL_TOL)]
        tol: f64,
    },
}

fn load_config(global: &Global) -> Result<RunConfig, String> {
    let path = global.config.as_deref().ok_or("--config is required")?;
    let mut config = RunConfig::load(path).map_err(|e| e.to_string())?;
    if global.seed.is_some() {
        config.seed = global.seed;
    }
    Ok(config)
}

fn out_dir(global: &Global, config: &RunConfig) -> PathBuf {
    global.out.clone().unwrap_or_else(|| config.output.dir.clone())
}

fn dispatch(cli: &Cli) -> Result<u8, String> {
    let g = &cli.global;
    let say = |line: String| {
        if !g.quiet {
            println!("{line}");
        }
    };
    match &cli.command {
        Command::Run => {
            let config = load_config(g)?;
            let dir = out_dir(g, &config);
            let outcome = run(&config, &dir).map_err(|e| e.to_string())?;
            say(format!(
                "{} samples, status {:?}, written to {}",
                outcome.series.samples.len(),
                outcome.series.status,
                dir.display()
            ));
            if let Some(report) = &outcome.report {
                say(format!(
                    "theorem {}: {:?}, min margin {:?}",
                    report.theorem, report.verdict, report.min_margin
                ));
            }
            Ok(outcome.exit_code as u8)
        }
        Command::Verify { series } => {
            let config = load_config(g)?;
            let report = verify_command(&config, series).map_err(|e| e.to_string())?;
            let json = report.to_json();
            match &g.out {
                Some(dir) => {
                    std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
                    let path = dir.join(&config.output.report);
                    std::fs::write(&path, &json).map_err(|e| e.to_string())?;
                    say(format!("{:?}; report written to {}", report.verdict, path.display()));
                }
                None => say(json.trim_end().to_string()),
            }
            let code = match report.verdict {
                gevrey::bounds::Verdict::EnvelopeViolated => 2,
                gevrey::bounds::Verdict::IntegrationFailed => 3,
                _ => 0,
            };
            Ok(code)
        }
        Command::Psi { field, t } => {
            let config = load_config(g)?;
            let spec = match config.build_theorem().map_err(|e| e.to_string())? {
                Some(theorem) => theorem.transform(),
                None => config.transform.ok_or("configuration has neither [theorem] nor [transform]")?,
            };
            let v = read(field)?;
            let solved = v_to_w(&v, &spec, *t).map_err(|e| e.to_string())?;
            println!("psi        {:.16e}", solved.psi);
            println!("residual   {:.3e}", solved.residual);
            println!("iterations {}", solved.iterations);
            Ok(0)
        }
        Command::Norms { field, q, sigma } => {
            let v = read(field)?;
            println!("{:>8}  {:>24}  {:>24}", "q", "sobolev", "gevrey");
            for &q in q {
                let gevrey = match sigma {
                    Some(sigma) => {
                        let idx = GevreyIndex::new(*sigma, q).map_err(|e| e.to_string())?;
                        format!("{:.16e}", gevrey_norm(&v, idx))
                    }
                    None => "-".into(),
                };
                println!("{q:>8}  {:>24.16e}  {gevrey:>24}", sobolev_norm(&v, q));
            }
            Ok(0)
        }
        Command::Cs { s, tol } => {
            let sum = lattice_sum_cs_detailed(*s, *tol).map_err(|e| e.to_string())?;
            if g.quiet {
                println!("{:.16e}", sum.value);
            } else {
                println!("c_s        {:.16e}", sum.value);
                println!("cutoff     {}", sum.cutoff);
                println!("tail       {:.6e}", sum.tail);
                println!("remainder  {:.3e}", sum.remainder);
            }
            Ok(0)
        }
    }
}

fn read(path: &Path) -> Result<gevrey::SpectralField, String> {
    read_field(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
