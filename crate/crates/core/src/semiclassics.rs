//! Quantum/classical comparison harness.
//!
//! Three comparisons are provided: one-kick transition probabilities `|S|²`
//! against the Monte-Carlo classical transition matrix, the entropy curve
//! `H(q)` against the classical mutual information `M(q)`, and a family of
//! entropy curves over effective Planck constants together with the purity
//! scaling law between them.

use rayon::prelude::*;
use serde::Serialize;

use crate::classical_map::SpinVector;
use crate::ensemble::{
    estimate_transition_matrix, evolve_ensemble_recording, init_ring_with, mutual_information,
    total_variation, ChannelDistribution, RingConfig,
};
use crate::error::{Error, Result};
use crate::params::{rescale, SystemParams};
use crate::quantum::{
    build_rho_cc, build_torsion_smatrix, quantum_run, OverlapModel, ReducedDensity,
};

/// Default fraction of `J` inside which a transition column counts as
/// interior (away from the torsion caustics at the poles).
pub const DEFAULT_EDGE_CUTOFF: f64 = 0.8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnDistance {
    /// Source channel `N′`.
    pub source: i64,
    pub m: i64,
    pub tv: f64,
    pub interior: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmatrixReport {
    pub j: i64,
    pub k: f64,
    pub samples_per_ring: usize,
    pub edge_cutoff: f64,
    pub columns: Vec<ColumnDistance>,
    pub max_interior: f64,
    pub mean_interior: f64,
}

/// Total-variation distance between each column of `|S|²` and of the
/// classical transition matrix.
pub fn smatrix_vs_classical(
    params: &SystemParams,
    samples_per_ring: usize,
    seed: u64,
    edge_cutoff: f64,
) -> Result<SmatrixReport> {
    let quantum = build_torsion_smatrix(params)?.transition_probabilities();
    let classical = estimate_transition_matrix(params, samples_per_ring, seed)?;
    let columns: Vec<ColumnDistance> = (0..params.n())
        .map(|i| {
            let source = params.channel_at(i);
            let m = params.t - source;
            let a: Vec<f64> = quantum.column(i).iter().copied().collect();
            let b: Vec<f64> = classical.p.column(i).iter().copied().collect();
            ColumnDistance {
                source,
                m,
                tv: total_variation(&a, &b),
                interior: (m.abs() as f64) <= edge_cutoff * params.j as f64,
            }
        })
        .collect();
    let interior: Vec<f64> = columns
        .iter()
        .filter(|c| c.interior)
        .map(|c| c.tv)
        .collect();
    Ok(SmatrixReport {
        j: params.j,
        k: params.k,
        samples_per_ring,
        edge_cutoff,
        max_interior: interior.iter().copied().fold(0.0, f64::max),
        mean_interior: interior.iter().sum::<f64>() / interior.len().max(1) as f64,
        columns,
    })
}

/// Classical side of a comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalOptions {
    pub samples: usize,
    pub seed: u64,
    pub ring: RingConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalRun {
    pub distributions: Vec<ChannelDistribution>,
    pub mutual_information: Vec<f64>,
    pub snapshots: Vec<(usize, Vec<SpinVector>)>,
}

/// Ring at `N0`, evolved directly for `q` kicks.
pub fn classical_run(
    params: &SystemParams,
    q: usize,
    opts: &ClassicalOptions,
    record: &[usize],
) -> Result<ClassicalRun> {
    let ring = init_ring_with(params.n0, opts.samples, params, opts.seed, &opts.ring)?;
    let run = evolve_ensemble_recording(&ring, q, params, record)?;
    Ok(ClassicalRun {
        mutual_information: run
            .distributions
            .iter()
            .map(mutual_information)
            .collect::<Result<_>>()?,
        distributions: run.distributions,
        snapshots: run.snapshots,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompareRow {
    pub q: usize,
    pub h: f64,
    pub m: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub rows: Vec<CompareRow>,
    /// `sup_q |H(q) − M(q)|`.
    pub sup_deviation: f64,
    /// `sup_q ½‖ρ_N(q) − ρ^cc(q)‖₁`.
    pub sup_trace_distance: f64,
    pub quantum: Vec<ChannelDistribution>,
    pub classical: Vec<ChannelDistribution>,
}

fn check_consistent(a: &SystemParams, b: &SystemParams) -> Result<()> {
    let checks: [(&'static str, bool); 6] = [
        ("k", a.k == b.k),
        ("J", a.j == b.j),
        ("T", a.t == b.t),
        ("N0", a.n0 == b.n0),
        ("I", a.inertia == b.inertia),
        ("tau_eps", a.tau_eps == b.tau_eps),
    ];
    match checks.iter().find(|(_, ok)| !ok) {
        Some((name, _)) => Err(Error::Inconsistent(name)),
        None => Ok(()),
    }
}

/// Runs the quantum model and the classical ensemble from matching initial
/// conditions and pairs `H(q)` with `M(q)` for `q = 1..=q_max`.
pub fn compare_h_m(
    quantum_params: &SystemParams,
    classical_params: &SystemParams,
    q_max: usize,
    overlap: &OverlapModel,
    classical: &ClassicalOptions,
) -> Result<Comparison> {
    check_consistent(quantum_params, classical_params)?;
    let qrun = quantum_run(quantum_params, q_max, overlap)?;
    let crun = classical_run(classical_params, q_max, classical, &[])?;
    let rows: Vec<CompareRow> = qrun
        .entropy
        .iter()
        .zip(&crun.mutual_information)
        .enumerate()
        .map(|(i, (&h, &m))| CompareRow {
            q: i + 1,
            h,
            m,
            deviation: (h - m).abs(),
        })
        .collect();
    let sup_trace_distance = qrun
        .densities
        .iter()
        .zip(&crun.distributions)
        .map(|(rho, p)| reduced_trace_distance(rho, &build_rho_cc(p)))
        .fold(0.0, f64::max);
    Ok(Comparison {
        sup_deviation: rows.iter().map(|r| r.deviation).fold(0.0, f64::max),
        sup_trace_distance,
        rows,
        quantum: qrun.probabilities,
        classical: crun.distributions,
    })
}

fn reduced_trace_distance(a: &ReducedDensity, b: &ReducedDensity) -> f64 {
    // both diagonal in orthogonal mode; avoid an eigen-decomposition then
    let off_diagonal = a
        .rho
        .iter()
        .enumerate()
        .any(|(i, z)| i % (a.dim() + 1) != 0 && z.norm() > 0.0);
    if off_diagonal {
        a.trace_distance(b)
    } else {
        total_variation(&a.diagonal(), &b.diagonal())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyCurve {
    pub scale: f64,
    pub params: SystemParams,
    pub entropy: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingResidual {
    /// `J` of the curve the prediction is made from.
    pub from_j: i64,
    /// `J` of the curve being predicted.
    pub to_j: i64,
    /// Kick numbers of the saturated window.
    pub kicks: Vec<usize>,
    pub predicted: Vec<f64>,
    pub actual: Vec<f64>,
    /// `max |(1 − H_pred) − (1 − H)| / (1 − H)` over the window.
    pub max_relative_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HbarSweep {
    /// Sorted by increasing `J` (decreasing `ħ_eff`).
    pub curves: Vec<EntropyCurve>,
    pub residuals: Vec<ScalingResidual>,
}

/// Entropy curves over a family of rescaled parameter sets, plus the purity
/// scaling prediction between every pair over the last `window` kicks.
pub fn hbar_sweep(
    base: &SystemParams,
    scales: &[f64],
    q_max: usize,
    window: usize,
    overlap: &OverlapModel,
) -> Result<HbarSweep> {
    let family = scales
        .iter()
        .map(|&s| rescale(base, s).map(|p| (s, p)))
        .collect::<Result<Vec<_>>>()?;
    let mut curves = family
        .par_iter()
        .map(|&(scale, params)| {
            Ok(EntropyCurve {
                scale,
                params,
                entropy: quantum_run(&params, q_max, overlap)?.entropy,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    curves.sort_by_key(|c| c.params.j);

    let start = q_max.saturating_sub(window);
    let mut residuals = Vec::new();
    for (i, lo) in curves.iter().enumerate() {
        for hi in &curves[i + 1..] {
            let kicks: Vec<usize> = (start + 1..=q_max).collect();
            let predicted: Vec<f64> = lo.entropy[start..]
                .iter()
                .map(|&h| 1.0 - hi.params.hbar_eff / lo.params.hbar_eff * (1.0 - h))
                .collect();
            let actual = hi.entropy[start..].to_vec();
            let max_relative_residual = predicted
                .iter()
                .zip(&actual)
                .map(|(p, a)| ((1.0 - p) - (1.0 - a)).abs() / (1.0 - a))
                .fold(0.0, f64::max);
            residuals.push(ScalingResidual {
                from_j: lo.params.j,
                to_j: hi.params.j,
                kicks,
                predicted,
                actual,
                max_relative_residual,
            });
        }
    }
    Ok(HbarSweep { curves, residuals })
}

/// Kicks `q ≥ from_q` at which some curve with larger `J` lies below one with
/// smaller `J`. Returns `(q, smaller_j, larger_j)` triples.
pub fn ordering_violations(curves: &[EntropyCurve], from_q: usize) -> Vec<(usize, i64, i64)> {
    let mut out = Vec::new();
    for pair in curves.windows(2) {
        let (lo, hi) = (&pair[0], &pair[1]);
        for (i, (a, b)) in lo.entropy.iter().zip(&hi.entropy).enumerate() {
            let q = i + 1;
            if q >= from_q && b < a {
                out.push((q, lo.params.j, hi.params.j));
            }
        }
    }
    out
}
