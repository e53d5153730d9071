//! Classical stroboscopic map of the light particle's angular momentum
//! direction on the unit sphere.
//!
//! One period is a torsion kick about the fixed `x̂` axis followed by a
//! precession about `ẑ` whose angle depends on the top's angular momentum
//! `N = T − J u_z`.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::params::SystemParams;

/// Direction of the light particle's angular momentum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinVector(pub [f64; 3]);

impl SpinVector {
    /// Normalizes `(x, y, z)`. Panics on the zero vector.
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        let r = (x * x + y * y + z * z).sqrt();
        assert!(r > 0.0, "zero vector has no direction");
        SpinVector([x / r, y / r, z / r])
    }

    /// Point at polar height `z` and azimuth `phi`.
    pub fn from_height_azimuth(z: f64, phi: f64) -> Self {
        let z = z.clamp(-1.0, 1.0);
        let r = (1.0 - z * z).max(0.0).sqrt();
        SpinVector([r * phi.cos(), r * phi.sin(), z])
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }
    pub fn y(&self) -> f64 {
        self.0[1]
    }
    pub fn z(&self) -> f64 {
        self.0[2]
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn renormalized(self) -> Self {
        let r = self.norm();
        SpinVector(self.0.map(|c| c / r))
    }

    pub fn rotate_x(self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let [x, y, z] = self.0;
        SpinVector([x, c * y - s * z, s * y + c * z])
    }

    pub fn rotate_z(self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let [x, y, z] = self.0;
        SpinVector([c * x - s * y, s * x + c * y, z])
    }
}

/// Torsion kick: rotation about `x̂` by `k u_x`.
pub fn kick(u: SpinVector, k: f64) -> SpinVector {
    u.rotate_x(k * u.x())
}

/// Top angular momentum `N = T − J u_z` seen by a spin direction.
pub fn top_momentum(u: SpinVector, params: &SystemParams) -> f64 {
    params.t as f64 - params.j as f64 * u.z()
}

/// Precession about `ẑ` by `τ_ε N / I`.
pub fn precess(u: SpinVector, params: &SystemParams) -> SpinVector {
    precess_with_period(u, params, params.tau_eps)
}

/// Precession with an explicit orbital period (used by the energy-jitter
/// ensemble, where each member carries its own period).
pub fn precess_with_period(u: SpinVector, params: &SystemParams, tau: f64) -> SpinVector {
    let beta = tau * top_momentum(u, params) / params.inertia;
    u.rotate_z(beta.rem_euclid(TAU))
}

/// One stroboscopic period: kick, then precession.
pub fn period_map(u: SpinVector, params: &SystemParams) -> SpinVector {
    precess(kick(u, params.k), params)
}

/// Exact inverse of [`period_map`].
pub fn inverse_period_map(u: SpinVector, params: &SystemParams) -> SpinVector {
    // u_z survives the precession, u_x survives the kick
    let beta = params.precession_angle(top_momentum(u, params));
    let pre = u.rotate_z(-beta.rem_euclid(TAU));
    pre.rotate_x(-params.k * pre.x())
}

/// One point of a surface of section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionPoint {
    pub seed: usize,
    pub q: usize,
    pub u: SpinVector,
}

/// Orbits of every seed, recorded after each of `q_max` periods. Seed order
/// and kick order are preserved in the output.
pub fn surface_of_section(
    seeds: &[SpinVector],
    q_max: usize,
    params: &SystemParams,
) -> Vec<SectionPoint> {
    seeds
        .par_iter()
        .enumerate()
        .map(|(seed, &start)| {
            let mut u = start;
            (1..=q_max)
                .map(|q| {
                    u = period_map(u, params);
                    SectionPoint { seed, q, u }
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Quasi-uniform seed points on the sphere (Fibonacci lattice).
pub fn fibonacci_seeds(count: usize) -> Vec<SpinVector> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
            SpinVector::from_height_azimuth(z, golden * i as f64)
        })
        .collect()
}
