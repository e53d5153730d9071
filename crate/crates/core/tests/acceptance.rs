//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kickedtop::classical_map::{kick, precess, SpinVector};
use kickedtop::ensemble::{total_variation, RingConfig, RingWidth};
use kickedtop::quantum::TorsionBasis;
use kickedtop::semiclassics::{
    compare_h_m, hbar_sweep, ordering_violations, smatrix_vs_classical, ClassicalOptions,
};
use kickedtop::{
    build_rho_cc, estimate_transition_matrix, evolve_ensemble, init_ring, linear_entropy,
    markov_evolve, mutual_information, period_map, rescale, ChannelDistribution, OverlapModel,
    SystemParams,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// Geometry shared by every run: a quarter-turn precession at `N = T`.
fn quarter_turn(k: f64, j: i64, n0_offset: i64) -> SystemParams {
    let t = 5 * j;
    SystemParams::new(k, j, t, t + n0_offset, 2.0 * t as f64 / PI, 1.0).unwrap()
}

/// `J_x` in the `J_z` basis from the ladder-operator matrix elements.
fn jx_oracle(j: i64) -> DMatrix<f64> {
    let n = (2 * j + 1) as usize;
    let jf = j as f64;
    DMatrix::from_fn(n, n, |a, b| {
        let m = jf - b as f64;
        if a + 1 == b || b + 1 == a {
            let mp = jf - a as f64;
            let lo = m.min(mp);
            0.5 * (jf * (jf + 1.0) - lo * (lo + 1.0)).sqrt()
        } else {
            0.0
        }
    })
}

/// Rotation matrix about a unit axis.
fn rotation(axis: [f64; 3], angle: f64) -> [[f64; 3]; 3] {
    let (s, c) = angle.sin_cos();
    let [x, y, z] = axis;
    let t = 1.0 - c;
    [
        [c + x * x * t, x * y * t - z * s, x * z * t + y * s],
        [y * x * t + z * s, c + y * y * t, y * z * t - x * s],
        [z * x * t - y * s, z * y * t + x * s, c + z * z * t],
    ]
}

fn apply(r: [[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [0, 1, 2].map(|i| (0..3).map(|j| r[i][j] * v[j]).sum())
}

fn unitarity_and_structure() -> Outcome {
    let mut worst = [0.0f64; 3];
    for j in [10, 100, 500] {
        let basis = TorsionBasis::new(j).unwrap();
        for k in [0.01, 0.25, 1.0, 10.0] {
            let s = basis.smatrix(k);
            let p = s.transition_probabilities();
            let n = p.nrows();
            let sums = (0..n)
                .flat_map(|i| [p.row(i).sum(), p.column(i).sum()])
                .map(|x| (x - 1.0).abs())
                .fold(0.0, f64::max);
            for (w, e) in worst
                .iter_mut()
                .zip([s.unitarity_error(), sums, s.symmetry_error()])
            {
                *w = w.max(e);
            }
        }
    }
    outcome(
        worst.iter().all(|&e| e < 1e-10),
        format!(
            "max |S'S - 1| = {:.1e}, row/col sums {:.1e}, |S - S^T| = {:.1e} (tol 1e-10)",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn matrix_exponential_oracle() -> Outcome {
    let mut worst = 0.0f64;
    for j in 1..=10 {
        let basis = TorsionBasis::new(j).unwrap();
        let jx = jx_oracle(j);
        let jx2 = &jx * &jx;
        for k in [0.01, 0.25, 1.0, 10.0] {
            let gen = jx2.map(|x| Complex64::new(0.0, k * x / (2.0 * j as f64)));
            let want = gen.exp();
            let got = basis.smatrix(k).s;
            worst = worst.max((got - want).iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
    }
    outcome(
        worst < 1e-8,
        format!("max elementwise |S - exp(i k Jx^2 / 2J)| = {worst:.1e} for n <= 21 (tol 1e-8)"),
    )
}

fn classical_map_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..100_000 {
        let u = SpinVector::from_height_azimuth(
            rng.random_range(-1.0..1.0),
            rng.random_range(0.0..2.0 * PI),
        );
        let k = rng.random_range(0.0..12.0);
        let p = SystemParams::new(k, 100, 500, 500, rng.random_range(50.0..1000.0), 1.0).unwrap();

        let want = apply(rotation([1.0, 0.0, 0.0], k * u.x()), u.0);
        let got = kick(u, k);
        let n = 500.0 - 100.0 * u.z();
        let want_p = apply(rotation([0.0, 0.0, 1.0], n / p.inertia), u.0);
        let got_p = precess(u, &p);
        for i in 0..3 {
            worst = worst
                .max((got.0[i] - want[i]).abs())
                .max((got_p.0[i] - want_p[i]).abs());
        }
    }
    let mut drift = 0.0f64;
    for (i, k) in [0.25, 1.0, 10.0].into_iter().enumerate() {
        let p = quarter_turn(k, 100, 0);
        let mut u = SpinVector::from_height_azimuth(0.1 + 0.2 * i as f64, 0.4);
        for _ in 0..10_000 {
            u = period_map(u, &p);
            drift = drift.max((u.norm() - 1.0).abs());
        }
    }
    outcome(
        worst < 1e-12 && drift < 1e-12,
        format!(
            "max deviation from axis-angle rotation {worst:.1e} on 1e5 points, norm drift {drift:.1e} over 1e4 kicks (tol 1e-12)"
        ),
    )
}

fn semiclassical_amplitude_law() -> Outcome {
    let tv: Vec<f64> = [10, 50, 100]
        .iter()
        .map(|&j| {
            smatrix_vs_classical(&quarter_turn(0.25, j, 0), 100_000, 0, 0.8)
                .unwrap()
                .mean_interior
        })
        .collect();
    let decreasing = tv.windows(2).all(|w| w[1] < w[0]);
    outcome(
        decreasing && tv[2] < 0.05,
        format!(
            "interior TV(|S|^2, P_cl) at J = 10, 50, 100: {:.4}, {:.4}, {:.4} (need strictly decreasing, last < 0.05)",
            tv[0], tv[1], tv[2]
        ),
    )
}

fn h_versus_m() -> Outcome {
    let opts = ClassicalOptions {
        samples: 100_000,
        seed: 0,
        ring: RingConfig {
            width: RingWidth::Thin,
            energy_jitter: 0.0,
        },
    };
    let sup = |p: &SystemParams| {
        compare_h_m(p, p, 25, &OverlapModel::orthogonal(), &opts)
            .unwrap()
            .sup_deviation
    };
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, n0) in [(1.0, 402), (1.0, 430), (0.01, 498), (10.0, 460)] {
        let big = quarter_turn(k, 100, n0 - 500);
        let small = rescale(&big, 0.1).unwrap();
        let (d100, d10) = (sup(&big), sup(&small));
        let ok = d100 < 0.15 && d100 < d10;
        pass &= ok;
        parts.push(format!(
            "(k={k}, N0={n0}) J=100 {d100:.3} J=10 {d10:.3}{}",
            if ok { "" } else { " x" }
        ));
    }
    outcome(
        pass,
        format!(
            "sup|H - M| (need < 0.15 and below J=10): {}",
            parts.join("; ")
        ),
    )
}

fn fig1_family(q_max: usize, window: usize) -> kickedtop::semiclassics::HbarSweep {
    hbar_sweep(
        &quarter_turn(0.25, 10, 0),
        &[0.2, 0.4, 1.0, 10.0],
        q_max,
        window,
        &OverlapModel::orthogonal(),
    )
    .unwrap()
}

fn hbar_ordering() -> Outcome {
    let sweep = fig1_family(50, 10);
    let v = ordering_violations(&sweep.curves, 5);
    let shown: Vec<String> = v
        .iter()
        .take(4)
        .map(|(q, lo, hi)| format!("q={q} J={lo}>J={hi}"))
        .collect();
    outcome(
        v.is_empty(),
        format!(
            "J = 2, 4, 10, 100 over q = 5..50: {} ordering violations{}{}",
            v.len(),
            if v.is_empty() { "" } else { ", e.g. " },
            shown.join(", ")
        ),
    )
}

fn purity_scaling() -> Outcome {
    let sweep = fig1_family(50, 10);
    let js: Vec<i64> = sweep.curves.iter().map(|c| c.params.j).collect();
    let consecutive: Vec<_> = sweep
        .residuals
        .iter()
        .filter(|r| js.windows(2).any(|w| w[0] == r.from_j && w[1] == r.to_j))
        .collect();
    let worst = consecutive
        .iter()
        .map(|r| r.max_relative_residual)
        .fold(0.0, f64::max);
    let parts: Vec<String> = consecutive
        .iter()
        .map(|r| format!("{}->{} {:.3}", r.from_j, r.to_j, r.max_relative_residual))
        .collect();
    outcome(
        worst < 0.2,
        format!(
            "relative residual on 1 - H over q = 41..50: {} (tol 0.2)",
            parts.join(", ")
        ),
    )
}

fn markov_closure() -> Outcome {
    let p = quarter_turn(10.0, 100, -40);
    let tm = estimate_transition_matrix(&p, 100_000, 0).unwrap();
    let chain = markov_evolve(&ChannelDistribution::delta(&p, p.n0).unwrap(), &tm, 25).unwrap();
    let direct = evolve_ensemble(&init_ring(p.n0, 100_000, &p, 1).unwrap(), 25, &p).unwrap();
    let tv = total_variation(&chain[24].p, &direct[24].p);
    outcome(
        tv < 0.05,
        format!("k = 10, J = 100, N0 = 460: TV(markov, ensemble) at q = 25 is {tv:.4} (tol 0.05)"),
    )
}

fn entropy_arithmetic() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for n in [3usize, 21, 201] {
        for _ in 0..20 {
            let raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>().powi(3)).collect();
            let s: f64 = raw.iter().sum();
            let p = ChannelDistribution::new(raw.iter().map(|x| x / s).collect()).unwrap();
            let h = linear_entropy(&build_rho_cc(&p)).unwrap();
            worst = worst.max((h - mutual_information(&p).unwrap()).abs());
        }
    }
    let p = quarter_turn(0.0, 10, 0);
    let delta = ChannelDistribution::delta(&p, 47).unwrap();
    let uniform = ChannelDistribution::uniform(21);
    let ends = [
        linear_entropy(&build_rho_cc(&delta)).unwrap(),
        mutual_information(&delta).unwrap(),
        linear_entropy(&build_rho_cc(&uniform)).unwrap() - 1.0,
        mutual_information(&uniform).unwrap() - 1.0,
    ]
    .iter()
    .map(|x| x.abs())
    .fold(0.0, f64::max);
    outcome(
        worst < 1e-12 && ends < 1e-12,
        format!("max |H - M| on diagonal inputs {worst:.1e}, delta/uniform endpoints {ends:.1e} (tol 1e-12)"),
    )
}

const DETERMINISM_CONFIG: &str = "\
[system]
k = 1
J = 30
T = 150
N0 = 140
I = 95.49296585513721
tau_eps = 1

[classical]
samples = 20000
ring = thin
markov = true

[run]
kicks = 12
seed = 5
scales = 0.5, 1
window = 4
sos_seeds = 20
snapshots = 0, 6
name = det
";

fn csv_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .collect();
    v.sort();
    v
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("det.cfg");
    fs::write(&cfg, DETERMINISM_CONFIG).unwrap();
    let mut mismatched = Vec::new();
    let mut files = 0;
    for cmd in [
        "sos",
        "classical",
        "quantum",
        "compare",
        "sweep",
        "smatrix-check",
    ] {
        let runs: Vec<_> = ["1", "3", "8", "8"]
            .iter()
            .enumerate()
            .map(|(i, workers)| {
                let out = tmp.path().join(format!("{cmd}-{i}"));
                let status = Command::new(env!("CARGO_BIN_EXE_kickedtop"))
                    .args([cmd, "--config"])
                    .arg(&cfg)
                    .arg("--outdir")
                    .arg(&out)
                    .args(["--workers", workers])
                    .output()
                    .unwrap()
                    .status;
                assert!(status.success(), "{cmd} failed");
                csv_bytes(&out)
            })
            .collect();
        files += runs[0].len();
        if runs[0].is_empty() || runs.iter().any(|r| r != &runs[0]) {
            mismatched.push(cmd);
        }
    }
    outcome(
        mismatched.is_empty(),
        format!(
            "{files} CSV files from 6 subcommands, 1/3/8 workers and a repeat: {}",
            if mismatched.is_empty() {
                "byte-identical".to_string()
            } else {
                format!("differ for {}", mismatched.join(", "))
            }
        ),
    )
}

type Check = fn() -> Outcome;

fn main() {
    let criteria: [(&str, Check); 10] = [
        ("unitarity and structure", unitarity_and_structure),
        ("matrix exponential oracle", matrix_exponential_oracle),
        ("classical map oracle", classical_map_oracle),
        ("semiclassical amplitude law", semiclassical_amplitude_law),
        ("H versus M", h_versus_m),
        ("hbar_eff ordering", hbar_ordering),
        ("purity scaling", purity_scaling),
        ("markov closure", markov_closure),
        ("entropy arithmetic", entropy_arithmetic),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let o = check();
        failed += usize::from(!o.pass);
        println!(
            "{} {name}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
