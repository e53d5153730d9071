//! System parameters, channel indexing and the action-scaling transformation.
//!
//! Channels are the allowed values of the top's angular momentum,
//! `N ∈ [T − J, T + J]`. They are labelled either by `N` itself or by the
//! spin projection `m = T − N ∈ [−J, J]`, which makes the channel basis the
//! `J_z` eigenbasis of a spin of length `J`. Vectors over channels are stored
//! in ascending `N` order, so index `i` holds `N = T − J + i`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical and dimensionless parameters of one run (atomic units, ħ = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Kick (torsion) strength.
    pub k: f64,
    /// Light-particle angular momentum.
    pub j: i64,
    /// Total angular momentum.
    pub t: i64,
    /// Initial top channel.
    pub n0: i64,
    /// Moment of inertia of the top.
    pub inertia: f64,
    /// Period of the mean-energy orbit of the light particle.
    pub tau_eps: f64,
    /// Effective Planck constant label. Physics always uses ħ = 1.
    pub hbar_eff: f64,
}

/// A channel labelled both ways.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChannelIndex {
    pub m: i64,
    pub n: i64,
}

impl SystemParams {
    /// Builds and validates a parameter set. `hbar_eff` defaults to `1/J`.
    pub fn new(k: f64, j: i64, t: i64, n0: i64, inertia: f64, tau_eps: f64) -> Result<Self> {
        let p = SystemParams {
            k,
            j,
            t,
            n0,
            inertia,
            tau_eps,
            hbar_eff: 1.0 / j.max(1) as f64,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_hbar_eff(mut self, hbar_eff: f64) -> Result<Self> {
        self.hbar_eff = hbar_eff;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name, reason: String| Err(Error::InvalidParam { name, reason });
        if !self.k.is_finite() {
            return bad("k", format!("must be finite, got {}", self.k));
        }
        if self.j < 1 {
            return bad("J", format!("must be >= 1, got {}", self.j));
        }
        if self.t <= self.j {
            return bad("T", format!("must exceed J={}, got {}", self.j, self.t));
        }
        if !(self.inertia > 0.0) || !self.inertia.is_finite() {
            return bad("I", format!("must be positive, got {}", self.inertia));
        }
        if !(self.tau_eps > 0.0) || !self.tau_eps.is_finite() {
            return bad("tau_eps", format!("must be positive, got {}", self.tau_eps));
        }
        if !(self.hbar_eff > 0.0) {
            return bad(
                "hbar_eff",
                format!("must be positive, got {}", self.hbar_eff),
            );
        }
        if self.n0 < self.n_min() || self.n0 > self.n_max() {
            return bad(
                "N0",
                format!(
                    "must lie in [{}, {}], got {}",
                    self.n_min(),
                    self.n_max(),
                    self.n0
                ),
            );
        }
        Ok(())
    }

    /// Number of channels, `2J + 1`.
    pub fn n(&self) -> usize {
        (2 * self.j + 1) as usize
    }

    pub fn n_min(&self) -> i64 {
        self.t - self.j
    }

    pub fn n_max(&self) -> i64 {
        self.t + self.j
    }

    /// Vector index of channel `N` (ascending-N storage).
    pub fn index_of(&self, n: i64) -> Result<usize> {
        if n < self.n_min() || n > self.n_max() {
            return Err(Error::ChannelRange {
                n,
                lo: self.n_min(),
                hi: self.n_max(),
            });
        }
        Ok((n - self.n_min()) as usize)
    }

    /// Channel `N` stored at vector index `i`.
    pub fn channel_at(&self, i: usize) -> i64 {
        self.n_min() + i as i64
    }

    /// Iterator over all channels in storage order.
    pub fn channels(&self) -> impl Iterator<Item = i64> {
        self.n_min()..=self.n_max()
    }

    /// Rotational energy `N(N+1)/2I` of the top.
    pub fn rotor_energy(&self, n: i64) -> f64 {
        let n = n as f64;
        n * (n + 1.0) / (2.0 * self.inertia)
    }

    /// Classical precession angle `τ_ε N / I` accumulated during one orbit.
    pub fn precession_angle(&self, n: f64) -> f64 {
        self.tau_eps * n / self.inertia
    }
}

/// Maps channel `N` to its spin projection `m = T − N`.
pub fn channel_of(n: i64, params: &SystemParams) -> Result<ChannelIndex> {
    params.index_of(n)?;
    Ok(ChannelIndex { m: params.t - n, n })
}

fn integral(x: f64) -> Option<i64> {
    let r = x.round();
    ((x - r).abs() < 1e-9 * x.abs().max(1.0)).then_some(r as i64)
}

/// Multiplies every action (`J`, `T`, `N0`) and the moment of inertia by `s`,
/// dividing `ħ_eff` by `s`. The classical map is unchanged: the precession
/// angle at corresponding channels, `τ_ε (sN)/(sI)`, does not depend on `s`.
pub fn rescale(params: &SystemParams, s: f64) -> Result<SystemParams> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::InvalidParam {
            name: "scale",
            reason: format!("must be positive, got {s}"),
        });
    }
    let incompatible = || Error::IncompatibleScale {
        scale: s,
        j: params.j,
        t: params.t,
    };
    let j = integral(s * params.j as f64).ok_or_else(incompatible)?;
    let t = integral(s * params.t as f64).ok_or_else(incompatible)?;
    if j < 1 {
        return Err(incompatible());
    }
    let n0 = (s * params.n0 as f64).round() as i64;
    let out = SystemParams {
        k: params.k,
        j,
        t,
        n0: n0.clamp(t - j, t + j),
        inertia: s * params.inertia,
        tau_eps: params.tau_eps,
        hbar_eff: params.hbar_eff / s,
    };
    out.validate()?;
    Ok(out)
}
