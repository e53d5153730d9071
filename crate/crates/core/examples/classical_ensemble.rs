//! A ring of spin directions spreading over the top's channels.

use std::f64::consts::PI;

use kickedtop::ensemble::{init_ring_with, RingConfig, RingWidth};
use kickedtop::{evolve_ensemble, mutual_information, SystemParams};

fn main() -> kickedtop::Result<()> {
    let p = SystemParams::new(1.0, 100, 500, 430, 1000.0 / PI, 1.0)?;
    let cfg = RingConfig {
        width: RingWidth::Thin,
        energy_jitter: 0.0,
    };
    let ring = init_ring_with(p.n0, 50_000, &p, 7, &cfg)?;
    let dists = evolve_ensemble(&ring, 25, &p)?;

    for (i, d) in dists.iter().enumerate().step_by(4) {
        let occupied = d.p.iter().filter(|&&x| x > 1e-3).count();
        println!(
            "q = {:>2}  M = {:.4}  occupied channels = {occupied}",
            i + 1,
            mutual_information(d)?
        );
    }
    Ok(())
}
