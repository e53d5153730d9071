//! Quantum and classical co-simulation of a two-particle kicked top.
//!
//! A light particle with angular momentum `J` repeatedly scatters off a
//! symmetric top. Each collision is a torsion kick that redistributes the
//! top's angular momentum `N` over the channels `T − J ..= T + J`; between
//! collisions the top precesses. The crate evolves the quantum state on those
//! channels and, side by side, a classical ensemble of spin directions on the
//! sphere, so the entanglement of the quantum state can be compared with the
//! mixing of the classical probabilities.
//!
//! | module | contents |
//! |---|---|
//! | [`params`] | parameters, channel labels, action scaling |
//! | [`classical_map`] | kick/precession map and surfaces of section |
//! | [`ensemble`] | ring ensembles, transition matrices, mutual information |
//! | [`quantum`] | torsion S-matrix, Floquet evolution, reduced density, entropy |
//! | [`semiclassics`] | quantum/classical comparison harness |
//! | [`config`], [`output`], [`cli`] | experiment runner |

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical_map;
pub mod cli;
pub mod config;
pub mod ensemble;
pub mod error;
pub mod output;
pub mod params;
pub mod quantum;
pub mod semiclassics;

pub use classical_map::{kick, period_map, precess, surface_of_section, SpinVector};
pub use config::{parse_config, ConfigError, RunSpec};
pub use ensemble::{
    bin_channel, estimate_transition_matrix, evolve_ensemble, init_ring, markov_evolve,
    mutual_information, ChannelDistribution, RingEnsemble, TransitionMatrix,
};
pub use error::{Error, Result};
pub use params::{channel_of, rescale, ChannelIndex, SystemParams};
pub use quantum::{
    build_rho_cc, build_torsion_smatrix, channel_probabilities, evolve, linear_entropy,
    purity_scaling, quantum_discord, reduced_density, ChannelState, OverlapModel, ReducedDensity,
    SMatrix,
};
