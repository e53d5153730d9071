//! Entanglement growth of the quantum state, with orthogonal and with
//! overlapping wavepackets.

use std::f64::consts::PI;

use kickedtop::quantum::quantum_run;
use kickedtop::{OverlapModel, SystemParams};

fn main() -> kickedtop::Result<()> {
    let p = SystemParams::new(0.25, 10, 50, 50, 100.0 / PI, 1.0)?;
    let sharp = quantum_run(&p, 20, &OverlapModel::orthogonal())?;
    let broad = quantum_run(&p, 20, &OverlapModel::gaussian(0.5)?)?;

    println!(" q   H(orthogonal)  H(gaussian 0.5)");
    for q in (0..20).step_by(2) {
        println!(
            "{:>2}   {:.6}       {:.6}",
            q + 1,
            sharp.entropy[q],
            broad.entropy[q]
        );
    }
    Ok(())
}
