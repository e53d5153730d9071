//! Entropy curves for one classical system at several values of the
//! effective Planck constant, and the purity scaling prediction between them.

use std::f64::consts::PI;

use kickedtop::semiclassics::{hbar_sweep, ordering_violations};
use kickedtop::{OverlapModel, SystemParams};

fn main() -> kickedtop::Result<()> {
    let base = SystemParams::new(0.25, 10, 50, 50, 100.0 / PI, 1.0)?;
    let sweep = hbar_sweep(
        &base,
        &[0.2, 0.4, 1.0, 10.0],
        50,
        10,
        &OverlapModel::orthogonal(),
    )?;

    for c in &sweep.curves {
        let tail = &c.entropy[40..];
        let mean = tail.iter().sum::<f64>() / tail.len() as f64;
        println!(
            "J = {:>3}  hbar_eff = {:.3}  mean H over q = 41..50: {mean:.4}",
            c.params.j, c.params.hbar_eff
        );
    }
    for r in &sweep.residuals {
        println!(
            "J = {:>3} -> {:>3}: max relative residual on 1 - H = {:.3}",
            r.from_j, r.to_j, r.max_relative_residual
        );
    }
    println!(
        "ordering violations from q = 5: {}",
        ordering_violations(&sweep.curves, 5).len()
    );
    Ok(())
}
