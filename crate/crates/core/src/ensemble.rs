//! Classical ring ensembles, channel binning, Monte-Carlo kick transition
//! matrices and the two classical evolution routes (direct ensemble and
//! Markov recursion), plus the linearized mutual information.
//!
//! Randomness is addressed per sample: member `i` of a ring drawn for stream
//! `s` uses its own fixed window of a ChaCha8 stream, so every result is a
//! pure function of the seed regardless of how rayon schedules the work.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::classical_map::{kick, precess_with_period, SpinVector};
use crate::error::{Error, Result};
use crate::params::SystemParams;

/// Samples evolved together by one rayon task. Fixed so that floating-point
/// accumulation order never depends on the thread count.
const CHUNK: usize = 2048;

/// ChaCha words reserved for each sample (one 64-byte block).
const WORDS_PER_SAMPLE: u128 = 16;

/// Stream offset separating transition-matrix rings from initial rings.
const TRANSITION_STREAMS: u64 = 1 << 32;

pub(crate) fn sample_rng(seed: u64, stream: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(index as u128 * WORDS_PER_SAMPLE);
    rng
}

/// Height of the initial ring in units of the channel spacing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingWidth {
    /// The full channel slice `[N0 − ½, N0 + ½]`.
    #[default]
    Slice,
    /// A ring of height `1/n` channels, `N0 ± 1/(2n)`.
    Thin,
}

impl RingWidth {
    pub fn channels(self, n: usize) -> f64 {
        match self {
            RingWidth::Slice => 1.0,
            RingWidth::Thin => 1.0 / n as f64,
        }
    }
}

/// How an initial ring is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RingConfig {
    pub width: RingWidth,
    /// Relative standard deviation of each member's orbital period.
    /// Zero gives every member the nominal `τ_ε`.
    pub energy_jitter: f64,
}

/// Weighted sample of spin directions on one channel ring.
#[derive(Debug, Clone, PartialEq)]
pub struct RingEnsemble {
    pub samples: Vec<SpinVector>,
    pub weights: Vec<f64>,
    /// Orbital period carried by each member.
    pub periods: Vec<f64>,
    pub rng_seed: u64,
}

impl RingEnsemble {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Probability vector over channels in ascending-N order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelDistribution {
    pub p: Vec<f64>,
}

impl ChannelDistribution {
    /// Wraps `p` after checking it is a probability vector.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(Error::Numerical(
                "negative or non-finite probability".into(),
            ));
        }
        let s: f64 = p.iter().sum();
        if (s - 1.0).abs() > 1e-10 {
            return Err(Error::Numerical(format!("probabilities sum to {s}")));
        }
        Ok(ChannelDistribution { p })
    }

    pub fn delta(params: &SystemParams, n: i64) -> Result<Self> {
        let mut p = vec![0.0; params.n()];
        p[params.index_of(n)?] = 1.0;
        Ok(ChannelDistribution { p })
    }

    pub fn uniform(n: usize) -> Self {
        ChannelDistribution {
            p: vec![1.0 / n as f64; n],
        }
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.p.iter().sum()
    }
}

/// `P[(N, N′)] = P^cl(Δ_N′ → Δ_N)`, column-stochastic.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    pub p: DMatrix<f64>,
    pub sample_count: usize,
    /// Column sums before renormalization.
    pub raw_column_sums: Vec<f64>,
}

impl TransitionMatrix {
    /// Wraps a matrix, renormalizing every column to sum to one.
    pub fn from_matrix(mut p: DMatrix<f64>, sample_count: usize) -> Result<Self> {
        if p.nrows() != p.ncols() {
            return Err(Error::Shape {
                expected: p.nrows(),
                got: p.ncols(),
            });
        }
        let mut raw = Vec::with_capacity(p.ncols());
        for mut col in p.column_iter_mut() {
            let s = col.sum();
            if !(s > 0.0) {
                return Err(Error::Numerical("empty transition column".into()));
            }
            col /= s;
            raw.push(s);
        }
        Ok(TransitionMatrix {
            p,
            sample_count,
            raw_column_sums: raw,
        })
    }

    pub fn n(&self) -> usize {
        self.p.nrows()
    }
}

/// Channel whose unit-width slice `[N − ½, N + ½)` contains `T − J u_z`.
pub fn bin_channel(u: SpinVector, params: &SystemParams) -> i64 {
    let n = (params.t as f64 - params.j as f64 * u.z() + 0.5).floor() as i64;
    n.clamp(params.n_min(), params.n_max())
}

/// Draws a uniform-azimuth ring on channel `n0` occupying the full slice.
pub fn init_ring(
    n0: i64,
    samples: usize,
    params: &SystemParams,
    seed: u64,
) -> Result<RingEnsemble> {
    init_ring_with(n0, samples, params, seed, &RingConfig::default())
}

/// Draws a ring on channel `n0`: azimuth uniform in `[0, 2π)`, `u_z` uniform
/// in the ring's height band (clipped to the sphere).
pub fn init_ring_with(
    n0: i64,
    samples: usize,
    params: &SystemParams,
    seed: u64,
    cfg: &RingConfig,
) -> Result<RingEnsemble> {
    let idx = params.index_of(n0)?;
    ring_for_stream(idx as u64, n0, samples, params, seed, cfg)
}

fn ring_for_stream(
    stream: u64,
    n0: i64,
    samples: usize,
    params: &SystemParams,
    seed: u64,
    cfg: &RingConfig,
) -> Result<RingEnsemble> {
    if samples == 0 {
        return Err(Error::InvalidParam {
            name: "samples",
            reason: "must be at least 1".into(),
        });
    }
    if !(cfg.energy_jitter >= 0.0) {
        return Err(Error::InvalidParam {
            name: "energy_jitter",
            reason: format!("must be non-negative, got {}", cfg.energy_jitter),
        });
    }
    let j = params.j as f64;
    let m0 = (params.t - n0) as f64;
    let half = 0.5 * cfg.width.channels(params.n());
    let lo = ((m0 - half) / j).max(-1.0);
    let hi = ((m0 + half) / j).min(1.0);
    if !(hi > lo) {
        return Err(Error::ChannelRange {
            n: n0,
            lo: params.n_min(),
            hi: params.n_max(),
        });
    }
    let draws: Vec<(SpinVector, f64)> = (0..samples)
        .into_par_iter()
        .with_min_len(CHUNK)
        .map(|i| {
            let mut rng = sample_rng(seed, stream, i);
            let r: f64 = rng.random();
            let phi = TAU * rng.random::<f64>();
            // z ∈ (lo, hi] keeps every member inside bin n0
            let u = SpinVector::from_height_azimuth(hi - (hi - lo) * r, phi);
            let tau = if cfg.energy_jitter > 0.0 {
                let g: f64 = rng.sample(StandardNormal);
                (params.tau_eps * (1.0 + cfg.energy_jitter * g)).max(0.0)
            } else {
                params.tau_eps
            };
            (u, tau)
        })
        .collect();
    let (samples_v, periods): (Vec<_>, Vec<_>) = draws.into_iter().unzip();
    Ok(RingEnsemble {
        weights: vec![1.0 / samples as f64; samples_v.len()],
        samples: samples_v,
        periods,
        rng_seed: seed,
    })
}

/// Monte-Carlo estimate of the one-kick slice-to-slice transition matrix.
///
/// Only the torsion enters: the precession is a rotation about `ẑ` and never
/// changes a member's channel.
pub fn estimate_transition_matrix(
    params: &SystemParams,
    samples_per_ring: usize,
    seed: u64,
) -> Result<TransitionMatrix> {
    let n = params.n();
    let cfg = RingConfig::default();
    let columns: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|src| {
            let ring = ring_for_stream(
                TRANSITION_STREAMS + src as u64,
                params.channel_at(src),
                samples_per_ring,
                params,
                seed,
                &cfg,
            )?;
            let mut col = vec![0.0; n];
            for (u, w) in ring.samples.iter().zip(&ring.weights) {
                let dst = bin_channel(kick(*u, params.k), params);
                col[(dst - params.n_min()) as usize] += w;
            }
            Ok(col)
        })
        .collect::<Result<_>>()?;
    let flat: Vec<f64> = columns.into_iter().flatten().collect();
    TransitionMatrix::from_matrix(DMatrix::from_vec(n, n, flat), samples_per_ring)
}

/// Result of a direct ensemble run.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleRun {
    /// Channel distribution after kicks `1..=q`.
    pub distributions: Vec<ChannelDistribution>,
    /// Member positions at the requested kick counts (0 is the initial ring).
    pub snapshots: Vec<(usize, Vec<SpinVector>)>,
}

/// Iterates the period map on every member and bins after each kick.
pub fn evolve_ensemble(
    ring: &RingEnsemble,
    q: usize,
    params: &SystemParams,
) -> Result<Vec<ChannelDistribution>> {
    Ok(evolve_ensemble_recording(ring, q, params, &[])?.distributions)
}

/// [`evolve_ensemble`] that also records member positions at kicks listed in
/// `record`.
pub fn evolve_ensemble_recording(
    ring: &RingEnsemble,
    q: usize,
    params: &SystemParams,
    record: &[usize],
) -> Result<EnsembleRun> {
    if q == 0 {
        return Err(Error::InvalidParam {
            name: "kicks",
            reason: "must be at least 1".into(),
        });
    }
    let n = params.n();
    let nmin = params.n_min();
    let total_weight: f64 = ring.weights.iter().sum();
    let mut record: Vec<usize> = record.iter().copied().filter(|&r| r <= q).collect();
    record.sort_unstable();
    record.dedup();

    struct Tally {
        hist: Vec<f64>,
        snaps: Vec<Vec<SpinVector>>,
    }

    let tallies: Vec<Tally> = ring
        .samples
        .par_chunks(CHUNK)
        .zip(ring.weights.par_chunks(CHUNK))
        .zip(ring.periods.par_chunks(CHUNK))
        .map(|((us, ws), taus)| {
            let mut hist = vec![0.0; q * n];
            let mut snaps = vec![Vec::new(); record.len()];
            for ((&u0, &w), &tau) in us.iter().zip(ws).zip(taus) {
                let mut u = u0;
                if let Some(slot) = record.iter().position(|&r| r == 0) {
                    snaps[slot].push(u);
                }
                for step in 1..=q {
                    u = precess_with_period(kick(u, params.k), params, tau);
                    let b = (bin_channel(u, params) - nmin) as usize;
                    hist[(step - 1) * n + b] += w;
                    if let Some(slot) = record.iter().position(|&r| r == step) {
                        snaps[slot].push(u);
                    }
                }
            }
            Tally { hist, snaps }
        })
        .collect();

    let mut hist = vec![0.0; q * n];
    let mut snaps = vec![Vec::new(); record.len()];
    for t in tallies {
        for (a, b) in hist.iter_mut().zip(&t.hist) {
            *a += b;
        }
        for (dst, src) in snaps.iter_mut().zip(t.snaps) {
            dst.extend(src);
        }
    }
    let distributions = hist
        .chunks(n)
        .map(|row| ChannelDistribution {
            p: row.iter().map(|x| x / total_weight).collect(),
        })
        .collect();
    Ok(EnsembleRun {
        distributions,
        snapshots: record.into_iter().zip(snaps).collect(),
    })
}

/// Markov recursion `p(q) = P p(q − 1)` for `q` steps.
pub fn markov_evolve(
    p0: &ChannelDistribution,
    transition: &TransitionMatrix,
    q: usize,
) -> Result<Vec<ChannelDistribution>> {
    if p0.len() != transition.n() {
        return Err(Error::Shape {
            expected: transition.n(),
            got: p0.len(),
        });
    }
    let mut p = DVector::from_column_slice(&p0.p);
    Ok((0..q)
        .map(|_| {
            p = &transition.p * &p;
            ChannelDistribution {
                p: p.iter().copied().collect(),
            }
        })
        .collect())
}

/// Linearized classical mutual information `n/(n−1) (1 − Σ p_N²)`.
pub fn mutual_information(p: &ChannelDistribution) -> Result<f64> {
    let n = p.len();
    if n < 2 {
        return Err(Error::Degenerate(n));
    }
    let s2: f64 = p.p.iter().map(|x| x * x).sum();
    Ok(n as f64 / (n as f64 - 1.0) * (1.0 - s2))
}

/// Half the L1 distance between two distributions.
pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}
