//! `cubedirac`: verification suites and convergence experiments for the cubical
//! Hodge-Dirac operator.

mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use cubedirac::continuum_limit::theorem_rate;
use cubedirac::sampling::{random_real_vector, seeded};
use cubedirac::symbols::spectral_sweep_rows;
use cubedirac::torus_lab::{assemble, closed_form_spectrum, to_triplets};
use cubedirac::verify::{run_verify, Fault, VerifyOptions};
use cubedirac::GridSpec;
use serde_json::json;

use config::{default_meshes, Defaults, ExperimentConfig, FileConfig, Overrides};

/// Largest matrix handed to a dense eigen-solver.
const DENSE_CAP: usize = 4096;

#[derive(Parser, Debug)]
#[command(name = "cubedirac", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Ambient dimension.
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Torus period.
    #[arg(long = "N", global = true)]
    period: Option<usize>,

    /// Comma-separated, strictly decreasing mesh sizes.
    #[arg(
        long = "h-list",
        global = true,
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    h_list: Option<Vec<f64>>,

    #[arg(long = "z-re", global = true, allow_negative_numbers = true)]
    z_re: Option<f64>,

    #[arg(long = "z-im", global = true, allow_negative_numbers = true)]
    z_im: Option<f64>,

    /// Grid points per axis.
    #[arg(long, global = true)]
    grid: Option<usize>,

    /// Output file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    /// JSON file with any of the above; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the seeded invariant suites.
    Verify {
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
    /// Fiber-sup bounds over the mesh list, written as CSV and JSON.
    Convergence,
    /// Stream `|H_h(ξ)|` over the frequency grid as CSV.
    Spectrum,
    /// Harmonic dimensions, spectrum and Hodge splitting on the periodic lattice.
    Torus,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FaultArg {
    InsertionSign,
}

enum Failure {
    Usage(anyhow::Error),
    Checks(usize),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.into())
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let outcome = configure_threads()
        .map_err(Failure::Usage)
        .and_then(|_| run(cli, &mut out))
        .and_then(|_| out.flush().map_err(|e| Failure::Usage(e.into())));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(Failure::Checks(k)) => {
            eprintln!("{k} check(s) failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<io::Error>()
            .is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
    })
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("DEC_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .with_context(|| format!("DEC_THREADS must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("configuring the worker pool")
}

fn resolve(cli: &Cli, defaults: Defaults) -> Result<ExperimentConfig> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let flags = Overrides {
        n: cli.n,
        period: cli.period,
        h_list: cli.h_list.clone(),
        z_re: cli.z_re,
        z_im: cli.z_im,
        grid: cli.grid,
        out: cli.out.clone(),
        seed: cli.seed,
    };
    ExperimentConfig::resolve(flags, file, defaults)
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match &cli.command {
        Command::Verify {
            trials,
            inject_fault,
        } => {
            let cfg = resolve(
                &cli,
                Defaults {
                    n: 3,
                    grid: 64,
                    h_list: default_meshes(),
                },
            )?;
            cmd_verify(
                out,
                &cfg,
                *trials,
                inject_fault.map(|FaultArg::InsertionSign| Fault::InsertionSign),
            )
        }
        Command::Convergence => {
            let cfg = resolve(
                &cli,
                Defaults {
                    n: 1,
                    grid: 64,
                    h_list: default_meshes(),
                },
            )?;
            cmd_convergence(out, &cfg).map_err(Failure::Usage)
        }
        Command::Spectrum => {
            let cfg = resolve(
                &cli,
                Defaults {
                    n: 2,
                    grid: 64,
                    h_list: vec![1.0],
                },
            )?;
            cmd_spectrum(out, &cfg).map_err(Failure::Usage)
        }
        Command::Torus => {
            let cfg = resolve(
                &cli,
                Defaults {
                    n: 2,
                    grid: 64,
                    h_list: vec![1.0],
                },
            )?;
            cmd_torus(out, &cfg).map_err(Failure::Usage)
        }
    }
}

fn cmd_verify(
    out: &mut dyn Write,
    cfg: &ExperimentConfig,
    trials: usize,
    fault: Option<Fault>,
) -> Result<(), Failure> {
    if cfg.n > 6 {
        return Err(Failure::Usage(anyhow::anyhow!(
            "verify supports n <= 6 (got {})",
            cfg.n
        )));
    }
    let opts = VerifyOptions {
        n: cfg.n,
        seed: cfg.seed,
        trials,
        fault,
    };
    writeln!(
        out,
        "# cubedirac verify n={} seed={} trials={}",
        cfg.n, cfg.seed, trials
    )?;
    let start = Instant::now();
    let results = run_verify(&opts);
    let mut failed = 0;
    for r in &results {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        writeln!(out, "{tag} {:<38} {} ({:.2}s)", r.name, r.detail, r.seconds)?;
        if !r.passed {
            failed += 1;
        }
    }
    writeln!(
        out,
        "{} of {} checks passed in {:.2}s",
        results.len() - failed,
        results.len(),
        start.elapsed().as_secs_f64()
    )?;
    if failed > 0 {
        let names: Vec<&str> = results
            .iter()
            .filter(|r| !r.passed)
            .map(|r| r.name)
            .collect();
        writeln!(out, "failing: {}", names.join(", "))?;
        return Err(Failure::Checks(failed));
    }
    Ok(())
}

fn cmd_convergence(out: &mut dyn Write, cfg: &ExperimentConfig) -> Result<()> {
    let grid = GridSpec::uniform(cfg.grid);
    let start = Instant::now();
    let report = theorem_rate(&cfg.h_list, cfg.z, cfg.n, &cfg.window, &grid)?;
    let secs = start.elapsed().as_secs_f64();
    let csv_path = cfg
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("convergence.csv"));
    let json_path = csv_path.with_extension("json");
    std::fs::write(&csv_path, report.to_csv())
        .with_context(|| format!("writing {}", csv_path.display()))?;
    let mut value = report.to_json_value();
    value["seed"] = json!(cfg.seed);
    value["command"] = json!("convergence");
    let text = serde_json::to_string_pretty(&value)?;
    std::fs::write(&json_path, text + "\n")
        .with_context(|| format!("writing {}", json_path.display()))?;
    writeln!(
        out,
        "# cubedirac convergence n={} z={} grid={} delta={} seed={}",
        cfg.n,
        cfg.z,
        cfg.grid,
        cfg.window.delta(),
        cfg.seed
    )?;
    for row in &report.rows {
        writeln!(
            out,
            "h={:<12.6e} le0={:.6e} le1={:.6e} total={:.6e}",
            row.h, row.bound_le0, row.bound_le1, row.total
        )?;
    }
    writeln!(
        out,
        "slope {:.6} (intercept {:.6}) in {secs:.2}s",
        report.slope, report.intercept
    )?;
    writeln!(
        out,
        "wrote {} and {}",
        csv_path.display(),
        json_path.display()
    )?;
    Ok(())
}

fn cmd_spectrum(out: &mut dyn Write, cfg: &ExperimentConfig) -> Result<()> {
    let h = cfg.h_list[0];
    let write_rows = |sink: &mut dyn Write| -> Result<f64> {
        let header: Vec<String> = (1..=cfg.n).map(|l| format!("xi_{l}")).collect();
        writeln!(sink, "{},modulus", header.join(","))?;
        let mut top = 0.0f64;
        let mut io_error = None;
        let swept = spectral_sweep_rows(cfg.n, h, cfg.grid, |xi, v| {
            top = top.max(v);
            let row = xi
                .iter()
                .try_for_each(|x| write!(sink, "{x:.16e},"))
                .and_then(|_| writeln!(sink, "{v:.16e}"));
            row.map_err(|e| {
                let kind = e.kind();
                io_error = Some(e);
                io::Error::from(kind)
            })
        });
        if let Some(e) = io_error {
            return Err(e.into());
        }
        swept?;
        Ok(top)
    };
    let top = match &cfg.out {
        Some(path) => {
            let mut w = BufWriter::new(create(path)?);
            let top = write_rows(&mut w)?;
            w.flush()?;
            top
        }
        None => write_rows(out)?,
    };
    eprintln!(
        "# n={} h={h} grid={}: max modulus {top:.12} vs sqrt(4n)/h = {:.12}",
        cfg.n,
        cfg.grid,
        (4.0 * cfg.n as f64).sqrt() / h
    );
    Ok(())
}

fn create(path: &Path) -> Result<File> {
    File::create(path).with_context(|| format!("creating {}", path.display()))
}

fn cmd_torus(out: &mut dyn Write, cfg: &ExperimentConfig) -> Result<()> {
    let h = cfg.h_list[0];
    let tc = assemble(cfg.n, cfg.period, h)?;
    let widest = (0..=cfg.n).map(|j| tc.dim(j)).max().unwrap_or(0);
    if widest > DENSE_CAP {
        bail!(
            "degree spaces of dimension {widest} exceed the dense limit {DENSE_CAP}; \
             reduce --n or --N"
        );
    }
    writeln!(
        out,
        "# cubedirac torus n={} N={} h={h} seed={}",
        cfg.n, cfg.period, cfg.seed
    )?;
    let dims = tc.harmonic_dimensions()?;
    let dims_text: Vec<String> = dims.iter().map(ToString::to_string).collect();
    writeln!(out, "harmonic dimensions: ({})", dims_text.join(", "))?;

    let spectrum = tc.dirac_spectrum()?;
    let closed = closed_form_spectrum(cfg.n, cfg.period, h);
    let deviation = spectrum
        .iter()
        .zip(&closed)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let min = spectrum.first().copied().unwrap_or(0.0);
    let max = spectrum.last().copied().unwrap_or(0.0);
    writeln!(
        out,
        "spectrum: min {min:.12} max {max:.12} ({} eigenvalues)",
        spectrum.len()
    )?;
    writeln!(
        out,
        "closed form: max deviation {deviation:.3e}; band edge sqrt(4n)/h = {:.12}",
        (4.0 * cfg.n as f64).sqrt() / h
    )?;

    let mut rng = seeded(cfg.seed);
    for j in 0..=cfg.n {
        let f = random_real_vector(&mut rng, tc.dim(j));
        let s = tc.hodge_split(&f, j)?;
        let reconstruction = (&s.exact + &s.harmonic + &s.coexact - &f).amax();
        let cross = [
            s.exact.dot(&s.harmonic),
            s.exact.dot(&s.coexact),
            s.harmonic.dot(&s.coexact),
        ]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
        writeln!(
            out,
            "hodge split degree {j}: |exact|={:.6} |harmonic|={:.6} |coexact|={:.6} \
             reconstruction {reconstruction:.2e} orthogonality {cross:.2e}",
            s.exact.norm(),
            s.harmonic.norm(),
            s.coexact.norm()
        )?;
    }

    if let Some(path) = &cfg.out {
        std::fs::write(path, to_triplets(&tc.dirac_matrix()))
            .with_context(|| format!("writing {}", path.display()))?;
        writeln!(out, "wrote Dirac matrix triplets to {}", path.display())?;
    }
    Ok(())
}
