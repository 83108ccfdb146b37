use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hbvm::harness::{
    render_csv, render_scan_csv, reproduce_table, run_experiment, spectral_scan, ExperimentConfig, Problem,
};
use hbvm::{build_tableau, Error, Result};

/// Energy-conserving HBVM integrators for Hamiltonian PDEs.
#[derive(Parser)]
#[command(name = "hbvm", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print nodes, weights, X_s and ρ_s of the HBVM(k,s) tableau.
    Tableau {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        s: usize,
    },
    /// E₀ and ΔH₀ versus N for one benchmark problem.
    SpectralScan {
        #[arg(long, default_value = "sine-gordon")]
        problem: String,
        #[arg(long, default_value_t = 20)]
        from: usize,
        #[arg(long, default_value_t = 300)]
        to: usize,
        #[arg(long, default_value_t = 10)]
        step: usize,
        /// Spacing of the truncations compared by ΔH₀.
        #[arg(long, default_value_t = 10)]
        scan_step: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one experiment from a configuration file plus `key=value` overrides.
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        overrides: Vec<String>,
    },
    /// Reproduce all method blocks of a benchmark table.
    Reproduce {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        table: u8,
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(path, text)?;
        }
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn tableau(k: usize, s: usize) -> Result<String> {
    let t = build_tableau(k, s)?;
    let mut out = String::from("i,c,b\n");
    for (i, (c, b)) in t.nodes().iter().zip(t.weights()).enumerate() {
        out.push_str(&format!("{i},{c:.16e},{b:.16e}\n"));
    }
    out.push_str(&format!("rho,{:.16e}\n", t.rho()));
    out.push_str("X_s\n");
    let x = t.x_s();
    for r in 0..s {
        let row: Vec<String> = (0..s).map(|c| format!("{:.16e}", x[(r, c)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Tableau { k, s } => emit(&tableau(k, s)?, None),
        Command::SpectralScan {
            problem,
            from,
            to,
            step,
            scan_step,
            out,
        } => {
            let problem: Problem = problem.parse()?;
            if step == 0 || from > to {
                return Err(Error::Config("need from <= to and step > 0".into()));
            }
            let cfg = ExperimentConfig::defaults(problem);
            let modes: Vec<usize> = (from..=to).step_by(step).collect();
            let rows = spectral_scan(&cfg, &modes, scan_step)?;
            emit(&render_scan_csv(&rows), out.as_deref())
        }
        Command::Run { config, out, overrides } => {
            let mut cfg = match config {
                Some(path) => ExperimentConfig::parse(&fs::read_to_string(path)?)?,
                None => {
                    // a bare `problem=` override selects that problem's defaults
                    let pairs: Vec<(String, String)> = overrides
                        .iter()
                        .filter_map(|o| o.split_once('='))
                        .filter(|(k, _)| k.trim() == "problem")
                        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                        .collect();
                    ExperimentConfig::from_pairs(&pairs)?
                }
            };
            cfg.apply_overrides(&overrides)?;
            cfg.validate()?;
            let records = run_experiment(&cfg)?;
            for r in &records {
                eprintln!("n = {}: {:.2} s", r.n, r.wall_time_seconds);
            }
            let target = out.or_else(|| cfg.output.clone());
            emit(&render_csv(&records), target.as_deref())
        }
        Command::Reproduce { table, out } => {
            for path in reproduce_table(table, &out)? {
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            // wrapped errors already embed their cause in the message
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
