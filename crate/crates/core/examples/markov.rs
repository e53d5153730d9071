//! Coarse-grained Markov chain against the full classical ensemble.

use std::f64::consts::PI;

use kickedtop::ensemble::total_variation;
use kickedtop::{
    estimate_transition_matrix, evolve_ensemble, init_ring, markov_evolve, ChannelDistribution,
    SystemParams,
};

fn main() -> kickedtop::Result<()> {
    for k in [0.25, 10.0] {
        let p = SystemParams::new(k, 100, 500, 460, 1000.0 / PI, 1.0)?;
        let tm = estimate_transition_matrix(&p, 20_000, 3)?;
        let chain = markov_evolve(&ChannelDistribution::delta(&p, p.n0)?, &tm, 25)?;
        let direct = evolve_ensemble(&init_ring(p.n0, 100_000, &p, 3)?, 25, &p)?;
        let tv = total_variation(&chain[24].p, &direct[24].p);
        println!("k = {k:>5}: TV(markov, ensemble) at q = 25 is {tv:.4}");
    }
    Ok(())
}
