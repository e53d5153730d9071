//! Quantum entropy H(q) next to classical mixing M(q) for the four
//! J = 100 configurations.

use std::f64::consts::PI;

use kickedtop::ensemble::{RingConfig, RingWidth};
use kickedtop::semiclassics::{compare_h_m, ClassicalOptions};
use kickedtop::{OverlapModel, SystemParams};

fn main() -> kickedtop::Result<()> {
    let opts = ClassicalOptions {
        samples: 100_000,
        seed: 0,
        ring: RingConfig {
            width: RingWidth::Thin,
            energy_jitter: 0.0,
        },
    };
    for (k, n0) in [(1.0, 402), (1.0, 430), (0.01, 498), (10.0, 460)] {
        let p = SystemParams::new(k, 100, 500, n0, 1000.0 / PI, 1.0)?;
        let c = compare_h_m(&p, &p, 25, &OverlapModel::orthogonal(), &opts)?;
        let last = c.rows.last().unwrap();
        println!(
            "k = {k:<5} N0 = {n0}: sup|H-M| = {:.4}  H(25) = {:.4}  M(25) = {:.4}",
            c.sup_deviation, last.h, last.m
        );
    }
    Ok(())
}
