//! `spintunnel`: exact spectra, angle Hamiltonians and their comparison.

mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use spintunnel::analysis::relative_error_curve;
use spintunnel::angle::{for_params, for_preset, AngleHamiltonian, HamiltonianForm};
use spintunnel::exact::{spectrum_exact, spectrum_gamma, GammaVariant};
use spintunnel::kernels::kernel_grid;
use spintunnel::output::{self, Table};
use spintunnel::semiclassical::surface_curve;
use spintunnel::spectral::solve;
use spintunnel::validation;

use crate::config::{ConfigError, Format, ModelSpec, RunArgs, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "spintunnel",
    version,
    about = "Angle-variable Hamiltonians for spin tunneling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectrum of the |j m> matrix (or the Gamma representation).
    Exact {
        #[command(flatten)]
        run: RunArgs,
        /// Diagonalize the Gamma-function representation instead.
        #[arg(long)]
        gamma: bool,
    },
    /// Coherent-state energy surface along alpha at the minimizing phase.
    Surface(RunArgs),
    /// GCM energy and overlap kernels on a (theta, phi_bar) grid.
    Kernels(RunArgs),
    /// Potential V, inertia I and kinetic coefficient K on [-pi, pi].
    Angle(RunArgs),
    /// Spectrum of the angle Hamiltonian.
    Solve {
        #[command(flatten)]
        run: RunArgs,
        /// Write the lowest N eigenfunctions instead of eigenvalues.
        #[arg(long, value_name = "N")]
        psi: Option<usize>,
    },
    /// Exact and angle energies side by side.
    Compare(RunArgs),
    /// Ground-state errors over a parameter range (closed forms).
    Sweep(RunArgs),
    /// Run the acceptance checks.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Also write the report to this file.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

/// Failures split by exit code.
enum Failure {
    Config(String),
    Compute(anyhow::Error),
    Checks,
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Compute(e)
    }
}

impl From<spintunnel::Error> for Failure {
    fn from(e: spintunnel::Error) -> Self {
        Failure::Compute(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Checks) => ExitCode::from(1),
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Exact { run, gamma } => {
            let cfg = RunConfig::resolve(&run, "exact")?;
            let p = cfg.model.params()?;
            let mut s = if gamma {
                spectrum_gamma(&p, GammaVariant::Corrected)?
            } else {
                spectrum_exact(&p)?
            };
            if let Some(n) = cfg.count {
                s.values.truncate(n);
            }
            emit(&output::spectrum_table(&s), &cfg)
        }
        Command::Surface(run) => {
            let cfg = RunConfig::resolve(&run, "surface")?;
            let p = cfg.model.params()?;
            let points = surface_curve(&p, cfg.grid.unwrap_or(181));
            emit(&output::surface_table(&points, p.unit), &cfg)
        }
        Command::Kernels(run) => {
            let cfg = RunConfig::resolve(&run, "kernels")?;
            let p = cfg.model.params()?;
            let n = cfg.grid.unwrap_or(65);
            let xi = spintunnel::semiclassical::minimize_xi(&p);
            emit(
                &output::kernel_table(&kernel_grid(&p, xi, n, n), p.unit),
                &cfg,
            )
        }
        Command::Angle(run) => {
            let cfg = RunConfig::resolve(&run, "angle")?;
            let h = angle_hamiltonian(&cfg)?;
            emit(&output::angle_table(&h, cfg.grid.unwrap_or(361)), &cfg)
        }
        Command::Solve { run, psi } => {
            let mut cfg = RunConfig::resolve(&run, "solve")?;
            cfg.solver.eig_count = Some(cfg.count.unwrap_or(10).max(psi.unwrap_or(0)));
            let h = angle_hamiltonian(&cfg)?;
            let s = solve(&h, &cfg.solver)?;
            warn_unconverged(s.converged, s.drift);
            let table = match psi {
                Some(n) => output::eigenfunction_table(&s, n, cfg.grid.unwrap_or(512)),
                None => output::angle_spectrum_table(&s, h.form.tag()),
            };
            emit(&table, &cfg)
        }
        Command::Compare(run) => {
            let mut cfg = RunConfig::resolve(&run, "compare")?;
            let exact = spectrum_exact(&cfg.model.params()?)?;
            cfg.solver.eig_count = Some(cfg.count.unwrap_or(10).min(exact.values.len()));
            let h = angle_hamiltonian(&cfg)?;
            let s = solve(&h, &cfg.solver)?;
            warn_unconverged(s.converged, s.drift);
            let table = output::compare_table(&exact, &s, h.form.tag());
            let ge = exact.ground();
            eprintln!(
                "ground_exact={} ground_angle={} rel_error={}%",
                output::format_number(ge),
                output::format_number(s.ground()),
                output::format_number(100.0 * spintunnel::analysis::relative_error(s.ground(), ge)),
            );
            emit(&table, &cfg)
        }
        Command::Sweep(run) => {
            let cfg = RunConfig::resolve(&run, "sweep")?;
            if cfg.form != HamiltonianForm::LargeNClosed {
                return Err(Failure::Config(
                    "sweep uses the closed forms; drop --form or use --form closed".into(),
                ));
            }
            let Some((name, values)) = cfg.model.range()? else {
                return Err(Failure::Config(
                    "sweep needs one parameter given as start:end:step, e.g. --Ns 4:40:2".into(),
                ));
            };
            // Surface config errors before the parallel run.
            for &v in &values {
                cfg.model.preset_with(Some((name, v)))?;
            }
            let model = cfg.model.clone();
            let result = relative_error_curve(
                name,
                &values,
                |v| {
                    model
                        .preset_with(Some((name, v)))
                        .map_err(|e| spintunnel::Error::InvalidPreset(e.0))
                },
                &cfg.solver,
            )?;
            if result.failed_rows() > 0 {
                eprintln!(
                    "note: {} of {} rows have no angle solution; see the status column",
                    result.failed_rows(),
                    result.rows.len()
                );
            }
            emit(&output::sweep_table(&result), &cfg)
        }
        Command::Validate(args) => {
            let reports = validation::run_all();
            for r in &reports {
                println!("{}", r.line());
            }
            let passed = reports.iter().filter(|r| r.passed).count();
            println!("{passed}/{} checks passed", reports.len());
            if let Some(path) = &args.out {
                let mut t = Table::new(
                    "validation",
                    spintunnel::Unit::Kelvin,
                    &["id", "title", "passed", "detail"],
                );
                for r in &reports {
                    t.push(vec![
                        r.id.as_str().into(),
                        r.title.as_str().into(),
                        r.passed.into(),
                        r.detail.as_str().into(),
                    ]);
                }
                write_table(&t, args.format.unwrap_or(Format::Csv), Some(path))?;
            }
            if passed == reports.len() {
                Ok(())
            } else {
                Err(Failure::Checks)
            }
        }
    }
}

fn angle_hamiltonian(cfg: &RunConfig) -> Result<AngleHamiltonian, Failure> {
    Ok(match &cfg.model {
        ModelSpec::Raw(p) => for_params(p, cfg.form)?,
        ModelSpec::Preset { .. } => for_preset(&cfg.model.preset_with(None)?, cfg.form)?,
    })
}

fn warn_unconverged(converged: bool, drift: f64) {
    if !converged {
        eprintln!(
            "warning: eigenvalues moved by {drift:e} when the cutoff was doubled; raise --nmax"
        );
    }
}

fn emit(table: &Table, cfg: &RunConfig) -> Result<(), Failure> {
    write_table(table, cfg.format, cfg.out.as_deref())
}

fn write_table(table: &Table, format: Format, out: Option<&Path>) -> Result<(), Failure> {
    let render = |w: &mut dyn Write| -> spintunnel::Result<()> {
        match format {
            Format::Csv => table.write_csv(w),
            Format::Json => table.write_json(w),
        }
    };
    match out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            render(&mut w)?;
            w.flush()
                .with_context(|| format!("writing {}", path.display()))?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            render(&mut w)?;
        }
    }
    Ok(())
}
