//! Structure of the torsion S-matrix and its distance from the classical
//! transition matrix.

use std::f64::consts::PI;

use kickedtop::semiclassics::smatrix_vs_classical;
use kickedtop::{build_torsion_smatrix, SystemParams};

fn main() -> kickedtop::Result<()> {
    for j in [10, 50, 100] {
        let p = SystemParams::new(0.25, j, 5 * j, 5 * j, 10.0 * j as f64 / PI, 1.0)?;
        let s = build_torsion_smatrix(&p)?;
        let report = smatrix_vs_classical(&p, 20_000, 1, 0.8)?;
        println!(
            "J = {j:>3}: |S'S - 1| = {:.1e}  |S - S^T| = {:.1e}  mean interior TV = {:.4}",
            s.unitarity_error(),
            s.symmetry_error(),
            report.mean_interior
        );
    }
    Ok(())
}
