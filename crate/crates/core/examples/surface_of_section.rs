//! Surfaces of section in the regular, mixed and chaotic regimes.
//!
//! Prints, for each kick strength, how much of the sphere's height range a
//! single orbit visits.

use std::f64::consts::PI;

use kickedtop::classical_map::{surface_of_section, SpinVector};
use kickedtop::SystemParams;

fn main() -> kickedtop::Result<()> {
    for k in [0.01, 1.0, 10.0] {
        let p = SystemParams::new(k, 100, 500, 500, 1000.0 / PI, 1.0)?;
        let seed = SpinVector::from_height_azimuth(0.1, 0.3);
        let pts = surface_of_section(&[seed], 2000, &p);

        let mut hist = [0usize; 20];
        for s in &pts {
            hist[(((s.u.z() + 1.0) * 10.0) as usize).min(19)] += 1;
        }
        let visited = hist.iter().filter(|&&c| c > 0).count();
        println!("k = {k:>5}: orbit visits {visited:>2}/20 height bins");
    }
    Ok(())
}
