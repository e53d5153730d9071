//! Command-line runner.
//!
//! ```text
//! kickedtop <sos|classical|quantum|compare|sweep|smatrix-check> --config FILE
//!           [--kicks N] [--seed S] [--outdir DIR] [--workers W]
//! ```
//!
//! Every command writes its CSV files, the resolved configuration and a JSON
//! summary to the run directory, then prints one summary line. Exit codes:
//! 0 success, 1 I/O failure while writing, 2 configuration error, 3 numerical
//! failure.

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::classical_map::{fibonacci_seeds, surface_of_section};
use crate::config::{parse_config, ConfigError, RunSpec};
use crate::ensemble::{
    estimate_transition_matrix, markov_evolve, mutual_information, total_variation,
};
use crate::error::Error;
use crate::output::{self, RunDir};
use crate::params::rescale;
use crate::quantum::{build_torsion_smatrix, quantum_run};
use crate::semiclassics::{
    classical_run, compare_h_m, hbar_sweep, ordering_violations, smatrix_vs_classical,
    ClassicalOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Kick after which the ordering of entropy curves is checked.
const ORDERING_FROM: usize = 5;

#[derive(Debug, Parser)]
#[command(
    name = "kickedtop",
    version,
    about = "Quantum/classical kicked-top experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Surface of section of the classical map.
    Sos(Common),
    /// Classical ring ensemble: channel distributions and M(q).
    Classical(Common),
    /// Quantum evolution: channel probabilities and H(q).
    Quantum(Common),
    /// H(q) against M(q) for matching initial conditions.
    Compare(Common),
    /// Entropy curves over the configured action scales.
    Sweep(Common),
    /// |S|² against the classical transition matrix, per scale.
    #[command(name = "smatrix-check")]
    SmatrixCheck(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// Configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Override `run.kicks`.
    #[arg(long)]
    kicks: Option<usize>,
    /// Override `run.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Override `run.outdir`.
    #[arg(long)]
    outdir: Option<String>,
    /// Override `run.workers`.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Numerical(String),
    Io(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "config error: {m}"),
            Failure::Numerical(m) => write!(f, "numerical failure: {m}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Config(_) => EXIT_CONFIG,
            Failure::Numerical(_) => EXIT_NUMERICAL,
            Failure::Io(_) => EXIT_IO,
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParam { .. } | Error::IncompatibleScale { .. } => {
                Failure::Config(e.to_string())
            }
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(line) => {
            println!("{line}");
            EXIT_OK
        }
        Err(f) => {
            eprintln!("kickedtop: {f}");
            f.code()
        }
    }
}

fn load(common: &Common) -> Result<RunSpec, Failure> {
    let text = std::fs::read_to_string(&common.config)
        .map_err(|e| Failure::Config(format!("cannot read {}: {e}", common.config.display())))?;
    let mut spec = parse_config(&text)?;
    if let Some(k) = common.kicks {
        spec.run.kicks = k;
    }
    if let Some(s) = common.seed {
        spec.run.seed = s;
    }
    if let Some(o) = &common.outdir {
        spec.run.outdir = o.clone();
    }
    if let Some(w) = common.workers {
        spec.run.workers = w;
    }
    spec.check_run()?;
    Ok(spec)
}

fn execute(command: Command) -> Result<String, Failure> {
    let (name, common, body): (&str, &Common, Pipeline) = match &command {
        Command::Sos(c) => ("sos", c, sos),
        Command::Classical(c) => ("classical", c, classical),
        Command::Quantum(c) => ("quantum", c, quantum),
        Command::Compare(c) => ("compare", c, compare),
        Command::Sweep(c) => ("sweep", c, sweep),
        Command::SmatrixCheck(c) => ("smatrix-check", c, smatrix_check),
    };
    let spec = load(common)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.run.workers)
        .build()
        .map_err(|e| Failure::Io(e.to_string()))?;
    let dir = RunDir::create(&spec.run.outdir, &spec.run.name)?;
    let outcome = pool.install(|| body(&spec, &dir))?;

    dir.write_text("config", "cfg", &spec.emit())?;
    let summary = json!({
        "command": name,
        "name": spec.run.name,
        "params": spec.system,
        "kicks": spec.run.kicks,
        "seed": spec.run.seed,
        "metrics": outcome.metrics,
        "files": outcome.files,
    });
    dir.write_json("summary", &summary)?;
    Ok(format!(
        "{name} {}: J={} k={} N0={} kicks={} {} -> {}",
        spec.run.name,
        spec.system.j,
        spec.system.k,
        spec.system.n0,
        spec.run.kicks,
        outcome.headline,
        dir.dir.display()
    ))
}

type Pipeline = fn(&RunSpec, &RunDir) -> Result<Outcome, Failure>;

struct Outcome {
    headline: String,
    metrics: Value,
    files: Vec<String>,
}

fn file_name(p: PathBuf) -> String {
    p.file_name()
        .map(|f| f.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn classical_options(spec: &RunSpec) -> ClassicalOptions {
    ClassicalOptions {
        samples: spec.classical.samples,
        seed: spec.run.seed,
        ring: spec.classical.ring,
    }
}

fn sos(spec: &RunSpec, dir: &RunDir) -> Result<Outcome, Failure> {
    let seeds = fibonacci_seeds(spec.run.sos_seeds);
    let points = surface_of_section(&seeds, spec.run.kicks, &spec.system);
    let f = dir.write_csv("sos", &output::sos_csv(&points))?;
    Ok(Outcome {
        headline: format!("{} points", points.len()),
        metrics: json!({ "seeds": seeds.len(), "points": points.len() }),
        files: vec![file_name(f)],
    })
}

fn classical(spec: &RunSpec, dir: &RunDir) -> Result<Outcome, Failure> {
    let p = &spec.system;
    let run = classical_run(
        p,
        spec.run.kicks,
        &classical_options(spec),
        &spec.run.snapshots,
    )?;
    let mut files = vec![
        dir.write_csv("P_cl", &output::distributions_csv(&run.distributions, p))?,
        dir.write_csv("M", &output::curve_csv("M", &run.mutual_information))?,
    ];
    if !run.snapshots.is_empty() {
        files.push(dir.write_csv("snapshots", &output::snapshot_csv(&run.snapshots))?);
    }
    let mut metrics = json!({
        "final_M": run.mutual_information.last(),
        "max_M": run.mutual_information.iter().copied().fold(0.0, f64::max),
        "samples": spec.classical.samples,
    });
    let mut headline = output::describe_curve("M", &run.mutual_information);
    if spec.classical.markov {
        let tm = estimate_transition_matrix(p, spec.classical.samples, spec.run.seed)?;
        let p0 = crate::ensemble::ChannelDistribution::delta(p, p.n0)?;
        let chain = markov_evolve(&p0, &tm, spec.run.kicks)?;
        let m: Vec<f64> = chain
            .iter()
            .map(mutual_information)
            .collect::<Result<_, _>>()?;
        let tv = total_variation(
            &chain.last().unwrap().p,
            &run.distributions.last().unwrap().p,
        );
        files.push(dir.write_csv("TM", &output::transition_matrix_csv(&tm, p))?);
        files.push(dir.write_csv("markov_P", &output::distributions_csv(&chain, p))?);
        files.push(dir.write_csv("markov_M", &output::curve_csv("M", &m))?);
        metrics["markov_final_tv"] = json!(tv);
        headline.push_str(&format!(", markov TV {tv:.4}"));
    }
    Ok(Outcome {
        headline,
        metrics,
        files: files.into_iter().map(file_name).collect(),
    })
}

fn quantum(spec: &RunSpec, dir: &RunDir) -> Result<Outcome, Failure> {
    let p = &spec.system;
    let run = quantum_run(p, spec.run.kicks, &spec.quantum.overlap)?;
    let mut files = vec![
        dir.write_csv("P", &output::distributions_csv(&run.probabilities, p))?,
        dir.write_csv("H", &output::curve_csv("H", &run.entropy))?,
    ];
    if spec.quantum.dump_smatrix {
        let s = build_torsion_smatrix(p)?;
        files.push(dir.write_csv("S", &output::smatrix_csv(&s.s, p))?);
    }
    Ok(Outcome {
        headline: output::describe_curve("H", &run.entropy),
        metrics: json!({
            "final_H": run.entropy.last(),
            "max_H": run.entropy.iter().copied().fold(0.0, f64::max),
            "overlap": spec.quantum.overlap,
        }),
        files: files.into_iter().map(file_name).collect(),
    })
}

fn compare(spec: &RunSpec, dir: &RunDir) -> Result<Outcome, Failure> {
    let p = &spec.system;
    let cmp = compare_h_m(
        p,
        p,
        spec.run.kicks,
        &spec.quantum.overlap,
        &classical_options(spec),
    )?;
    let h: Vec<f64> = cmp.rows.iter().map(|r| r.h).collect();
    let m: Vec<f64> = cmp.rows.iter().map(|r| r.m).collect();
    let files = vec![
        dir.write_csv("H", &output::curve_csv("H", &h))?,
        dir.write_csv("M", &output::curve_csv("M", &m))?,
        dir.write_csv("compare", &output::compare_csv(&cmp.rows))?,
        dir.write_csv("P", &output::distributions_csv(&cmp.quantum, p))?,
        dir.write_csv("P_cl", &output::distributions_csv(&cmp.classical, p))?,
    ];
    Ok(Outcome {
        headline: format!("sup|H-M| = {:.4}", cmp.sup_deviation),
        metrics: json!({
            "sup_abs_H_minus_M": cmp.sup_deviation,
            "sup_trace_distance_rho_cc": cmp.sup_trace_distance,
            "samples": spec.classical.samples,
        }),
        files: files.into_iter().map(file_name).collect(),
    })
}

fn sweep(spec: &RunSpec, dir: &RunDir) -> Result<Outcome, Failure> {
    let r = &spec.run;
    let sw = hbar_sweep(
        &spec.system,
        &r.scales,
        r.kicks,
        r.window,
        &spec.quantum.overlap,
    )?;
    let mut csv = output::Csv::new(&["q", "J", "H"]);
    for c in &sw.curves {
        for (i, h) in c.entropy.iter().enumerate() {
            csv.row([
                (i + 1).to_string(),
                c.params.j.to_string(),
                output::fmt_f64(*h),
            ]);
        }
    }
    let f = dir.write_csv("sweep_H", &csv)?;
    let violations = ordering_violations(&sw.curves, ORDERING_FROM);
    let worst = sw
        .residuals
        .iter()
        .map(|s| s.max_relative_residual)
        .fold(0.0, f64::max);
    Ok(Outcome {
        headline: format!(
            "{} curves, {} ordering violations, max scaling residual {worst:.4}",
            sw.curves.len(),
            violations.len()
        ),
        metrics: json!({
            "J": sw.curves.iter().map(|c| c.params.j).collect::<Vec<_>>(),
            "ordering_violations": violations,
            "scaling_residuals": sw.residuals.iter().map(|s| json!({
                "from_J": s.from_j,
                "to_J": s.to_j,
                "max_relative_residual": s.max_relative_residual,
            })).collect::<Vec<_>>(),
        }),
        files: vec![file_name(f)],
    })
}

fn smatrix_check(spec: &RunSpec, dir: &RunDir) -> Result<Outcome, Failure> {
    let mut csv = output::Csv::new(&["J", "N", "m", "tv", "interior"]);
    let mut reports = Vec::new();
    let mut files = Vec::new();
    for &s in &spec.run.scales {
        let p = rescale(&spec.system, s)?;
        let sm = build_torsion_smatrix(&p)?;
        let rep = smatrix_vs_classical(
            &p,
            spec.classical.samples,
            spec.run.seed,
            spec.run.edge_cutoff,
        )?;
        for c in &rep.columns {
            csv.row([
                p.j.to_string(),
                c.source.to_string(),
                c.m.to_string(),
                output::fmt_f64(c.tv),
                (c.interior as u8).to_string(),
            ]);
        }
        if spec.quantum.dump_smatrix {
            files.push(dir.write_csv(&format!("J{}_S", p.j), &output::smatrix_csv(&sm.s, &p))?);
        }
        reports.push(json!({
            "J": p.j,
            "unitarity_error": sm.unitarity_error(),
            "symmetry_error": sm.symmetry_error(),
            "stochasticity_error": sm.stochasticity_error(),
            "max_interior_tv": rep.max_interior,
            "mean_interior_tv": rep.mean_interior,
        }));
    }
    files.insert(0, dir.write_csv("smatrix_check", &csv)?);
    let headline = reports
        .iter()
        .map(|r| {
            format!(
                "J={} mean TV {:.4}",
                r["J"],
                r["mean_interior_tv"].as_f64().unwrap_or(f64::NAN)
            )
        })
        .collect::<Vec<_>>()
        .join(", ");
    Ok(Outcome {
        headline,
        metrics: json!({ "scales": reports, "samples_per_ring": spec.classical.samples }),
        files: files.into_iter().map(file_name).collect(),
    })
}
