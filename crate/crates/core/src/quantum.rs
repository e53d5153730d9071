//! Exact quantum evolution on the `n = 2J + 1` channels.
//!
//! Each period applies the rotor phases `exp(−i τ_ε E_N)` and then the
//! torsion S-matrix `exp(i k J_x² / 2J)`, built from the eigenvectors of the
//! spin-`J` x-operator. The reduced state of the top is read off at kick
//! times, optionally with the light particle's channel wavepackets given a
//! finite energy overlap.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ensemble::ChannelDistribution;
use crate::error::{Error, Result};
use crate::params::SystemParams;

/// Amplitudes over channels in ascending-N order.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelState {
    pub c: Vec<Complex64>,
}

impl ChannelState {
    pub fn new(c: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = c.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Numerical(format!("state norm² = {norm}")));
        }
        Ok(ChannelState { c })
    }

    /// The top prepared in channel `n`.
    pub fn delta(params: &SystemParams, n: i64) -> Result<Self> {
        let mut c = vec![Complex64::new(0.0, 0.0); params.n()];
        c[params.index_of(n)?] = Complex64::new(1.0, 0.0);
        Ok(ChannelState { c })
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Spin-`J` x-operator in the `J_z` basis, rows ordered by ascending
/// `N = T − m` (so row 0 is `m = J`).
pub fn spin_x_matrix(j: i64) -> DMatrix<f64> {
    let n = (2 * j + 1) as usize;
    let jf = j as f64;
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n - 1 {
        let m = (j - i as i64 - 1) as f64;
        let v = 0.5 * (jf * (jf + 1.0) - m * (m + 1.0)).sqrt();
        a[(i, i + 1)] = v;
        a[(i + 1, i)] = v;
    }
    a
}

/// Torsion S-matrix of one kick.
#[derive(Debug, Clone)]
pub struct SMatrix {
    pub s: DMatrix<Complex64>,
    pub k: f64,
    /// `J_x` eigenvalues `m′`, ascending.
    pub spectrum: Vec<f64>,
    /// Eigenphases `k m′² / 2J` in the same order.
    pub eigenphases: Vec<f64>,
}

/// Eigenbasis of `J_x`, reusable across kick strengths.
#[derive(Debug, Clone)]
pub struct TorsionBasis {
    pub j: i64,
    /// Columns are eigenvectors (real, orthonormal).
    pub vectors: DMatrix<f64>,
    /// Exact integer eigenvalues `−J..=J`.
    pub spectrum: Vec<f64>,
}

impl TorsionBasis {
    pub fn new(j: i64) -> Result<Self> {
        if j < 1 {
            return Err(Error::Degenerate((2 * j + 1).max(0) as usize));
        }
        let eig = SymmetricEigen::try_new(spin_x_matrix(j), 1e-15, 0).ok_or_else(|| {
            Error::Numerical(format!(
                "J_x eigen-decomposition did not converge for J = {j}"
            ))
        })?;
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let n = order.len();
        let mut vectors = DMatrix::zeros(n, n);
        let mut spectrum = Vec::with_capacity(n);
        for (dst, &src) in order.iter().enumerate() {
            let exact = dst as f64 - j as f64;
            let got = eig.eigenvalues[src];
            if (got - exact).abs() > 1e-6 {
                return Err(Error::Numerical(format!(
                    "J_x eigenvalue {dst} is {got}, expected {exact} (J = {j})"
                )));
            }
            vectors.set_column(dst, &eig.eigenvectors.column(src));
            spectrum.push(exact);
        }
        Ok(TorsionBasis {
            j,
            vectors,
            spectrum,
        })
    }

    /// `V diag(exp(i k m′²/2J)) Vᵀ`, assembled from two real products.
    pub fn smatrix(&self, k: f64) -> SMatrix {
        let jf = self.j as f64;
        let eigenphases: Vec<f64> = self
            .spectrum
            .iter()
            .map(|m| k * m * m / (2.0 * jf))
            .collect();
        let (sin, cos): (Vec<f64>, Vec<f64>) = eigenphases.iter().map(|d| d.sin_cos()).unzip();
        let vt = self.vectors.transpose();
        let scaled = |w: &[f64]| {
            let mut a = self.vectors.clone();
            for (mut col, &x) in a.column_iter_mut().zip(w) {
                col *= x;
            }
            a * &vt
        };
        let re = scaled(&cos);
        let im = scaled(&sin);
        let s = DMatrix::from_fn(re.nrows(), re.ncols(), |i, j| {
            Complex64::new(re[(i, j)], im[(i, j)])
        });
        SMatrix {
            s,
            k,
            spectrum: self.spectrum.clone(),
            eigenphases,
        }
    }
}

/// Builds the torsion S-matrix for `params.k`.
pub fn build_torsion_smatrix(params: &SystemParams) -> Result<SMatrix> {
    Ok(TorsionBasis::new(params.j)?.smatrix(params.k))
}

fn split(m: &DMatrix<Complex64>) -> (DMatrix<f64>, DMatrix<f64>) {
    (m.map(|z| z.re), m.map(|z| z.im))
}

impl SMatrix {
    pub fn n(&self) -> usize {
        self.s.nrows()
    }

    /// `max |S†S − 1|` elementwise.
    pub fn unitarity_error(&self) -> f64 {
        let (a, b) = split(&self.s);
        let (at, bt) = (a.transpose(), b.transpose());
        let re = &at * &a + &bt * &b;
        let im = &at * &b - &bt * &a;
        let n = self.n();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let d = Complex64::new(re[(i, j)] - if i == j { 1.0 } else { 0.0 }, im[(i, j)]);
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// `max |S − Sᵀ|`.
    pub fn symmetry_error(&self) -> f64 {
        let n = self.n();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                worst = worst.max((self.s[(i, j)] - self.s[(j, i)]).norm());
            }
        }
        worst
    }

    /// `|S_{NN′}|²` as a real matrix.
    pub fn transition_probabilities(&self) -> DMatrix<f64> {
        self.s.map(|z| z.norm_sqr())
    }

    /// Largest deviation of a row or column sum of `|S|²` from one.
    pub fn stochasticity_error(&self) -> f64 {
        let p = self.transition_probabilities();
        let rows = p.row_iter().map(|r| (r.sum() - 1.0).abs());
        let cols = p.column_iter().map(|c| (c.sum() - 1.0).abs());
        rows.chain(cols).fold(0.0, f64::max)
    }
}

/// Rotor phase factors `exp(−i τ_ε N(N+1)/2I)` in channel order.
pub fn build_rotor_phases(params: &SystemParams) -> Vec<Complex64> {
    params
        .channels()
        .map(|n| {
            let phase = (params.tau_eps * params.rotor_energy(n)).rem_euclid(std::f64::consts::TAU);
            Complex64::from_polar(1.0, -phase)
        })
        .collect()
}

/// Stroboscopic evolution `c(q) = S R c(q−1)`; returns the states after
/// kicks `1..=q`.
pub fn evolve(
    c0: &ChannelState,
    q: usize,
    params: &SystemParams,
    smatrix: &SMatrix,
) -> Result<Vec<ChannelState>> {
    if c0.len() != params.n() {
        return Err(Error::Shape {
            expected: params.n(),
            got: c0.len(),
        });
    }
    if smatrix.n() != params.n() {
        return Err(Error::Shape {
            expected: params.n(),
            got: smatrix.n(),
        });
    }
    let rotor = build_rotor_phases(params);
    let mut c = DVector::from_column_slice(&c0.c);
    Ok((0..q)
        .map(|_| {
            c.iter_mut().zip(&rotor).for_each(|(a, r)| *a *= r);
            c = &smatrix.s * &c;
            ChannelState {
                c: c.iter().copied().collect(),
            }
        })
        .collect())
}

/// `p_N = |c_N|²`.
pub fn channel_probabilities(c: &ChannelState) -> ChannelDistribution {
    ChannelDistribution {
        p: c.c.iter().map(|z| z.norm_sqr()).collect(),
    }
}

/// Overlap of the light particle's wavepackets in different channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OverlapMode {
    /// Distinct channels carry orthogonal wavepackets.
    #[default]
    Orthogonal,
    /// Gaussian energy packets of width `sigma_eps`.
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct OverlapModel {
    pub mode: OverlapMode,
    pub sigma_eps: f64,
}

impl OverlapModel {
    pub fn orthogonal() -> Self {
        OverlapModel::default()
    }

    pub fn gaussian(sigma_eps: f64) -> Result<Self> {
        if !(sigma_eps > 0.0) {
            return Err(Error::InvalidParam {
                name: "sigma_eps",
                reason: format!("must be positive, got {sigma_eps}"),
            });
        }
        Ok(OverlapModel {
            mode: OverlapMode::Gaussian,
            sigma_eps,
        })
    }

    /// `O_{NN′} = exp(−(E_N − E_N′)² / 8σ²)`, or the identity when orthogonal.
    pub fn kernel(&self, params: &SystemParams) -> DMatrix<f64> {
        let n = params.n();
        match self.mode {
            OverlapMode::Orthogonal => DMatrix::identity(n, n),
            OverlapMode::Gaussian => {
                let e: Vec<f64> = params.channels().map(|c| params.rotor_energy(c)).collect();
                let w = 8.0 * self.sigma_eps * self.sigma_eps;
                DMatrix::from_fn(n, n, |i, j| {
                    if i == j {
                        1.0
                    } else {
                        (-(e[i] - e[j]).powi(2) / w).exp()
                    }
                })
            }
        }
    }
}

/// Overlap kernel checked once for positive semidefiniteness.
#[derive(Debug, Clone)]
pub struct OverlapKernel {
    pub model: OverlapModel,
    kernel: DMatrix<f64>,
}

impl OverlapKernel {
    pub fn new(model: OverlapModel, params: &SystemParams) -> Result<Self> {
        let kernel = model.kernel(params);
        if model.mode == OverlapMode::Gaussian {
            let min = SymmetricEigen::new(kernel.clone()).eigenvalues.min();
            if min < -1e-10 {
                return Err(Error::Numerical(format!(
                    "overlap kernel not PSD (λ_min = {min})"
                )));
            }
        }
        Ok(OverlapKernel { model, kernel })
    }

    /// `ρ_{NN′} = c_N c*_N′ O_{NN′}`.
    pub fn reduce(&self, c: &ChannelState) -> Result<ReducedDensity> {
        let n = self.kernel.nrows();
        if c.len() != n {
            return Err(Error::Shape {
                expected: n,
                got: c.len(),
            });
        }
        let rho = match self.model.mode {
            OverlapMode::Orthogonal => DMatrix::from_diagonal(&DVector::from_iterator(
                n,
                c.c.iter().map(|z| Complex64::new(z.norm_sqr(), 0.0)),
            )),
            OverlapMode::Gaussian => DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    Complex64::new(c.c[i].norm_sqr(), 0.0)
                } else {
                    c.c[i] * c.c[j].conj() * self.kernel[(i, j)]
                }
            }),
        };
        Ok(ReducedDensity { rho })
    }
}

/// Reduced density matrix of the top.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensity {
    pub rho: DMatrix<Complex64>,
}

impl ReducedDensity {
    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.rho.trace()
    }

    /// `Tr ρ² = Σ |ρ_{NN′}|²` (ρ Hermitian).
    pub fn purity(&self) -> f64 {
        self.rho.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.rho[(i, j)] - self.rho[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.rho.clone()).eigenvalues.min()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.rho.diagonal().iter().map(|z| z.re).collect()
    }

    /// `½ ‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &ReducedDensity) -> f64 {
        let d = &self.rho - &other.rho;
        0.5 * SymmetricEigen::new(d)
            .eigenvalues
            .iter()
            .map(|x| x.abs())
            .sum::<f64>()
    }
}

/// Reduced density of the top for a channel state under an overlap model.
pub fn reduced_density(
    c: &ChannelState,
    overlap: &OverlapModel,
    params: &SystemParams,
) -> Result<ReducedDensity> {
    OverlapKernel::new(*overlap, params)?.reduce(c)
}

/// Linear entropy `n/(n−1) (1 − Tr ρ²)`; 0 for pure, 1 for maximally mixed.
pub fn linear_entropy(rho: &ReducedDensity) -> Result<f64> {
    let n = rho.dim();
    if n < 2 {
        return Err(Error::Degenerate(n));
    }
    Ok(n as f64 / (n as f64 - 1.0) * (1.0 - rho.purity()))
}

/// Discord of the bipartite pure state. In this model the measured light
/// particle energy fixes the top's channel, so the discord equals the linear
/// entropy of the reduced state; this is not a general discord optimizer.
pub fn quantum_discord(rho: &ReducedDensity) -> Result<f64> {
    linear_entropy(rho)
}

/// Entropy mapped between two effective Planck constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledEntropy {
    pub value: f64,
    /// The raw mapping left `[0, 1]` and was clamped.
    pub clamped: bool,
}

/// `H′ = 1 − (ħ′/ħ)(1 − H)`: purity scales with the number of channels
/// covered when the distribution is saturated.
pub fn purity_scaling(h: f64, hbar_from: f64, hbar_to: f64) -> Result<ScaledEntropy> {
    for x in [hbar_from, hbar_to] {
        if !(x > 0.0) {
            return Err(Error::Domain(x));
        }
    }
    let raw = 1.0 - hbar_to / hbar_from * (1.0 - h);
    let value = raw.clamp(0.0, 1.0);
    Ok(ScaledEntropy {
        value,
        clamped: value != raw,
    })
}

/// Top-side reduced matrix of the classically correlated state
/// `Σ p_N |N⟩⟨N| ⊗ |F_N⟩⟨F_N|`.
pub fn build_rho_cc(p_cl: &ChannelDistribution) -> ReducedDensity {
    let n = p_cl.len();
    ReducedDensity {
        rho: DMatrix::from_diagonal(&DVector::from_iterator(
            n,
            p_cl.p.iter().map(|&x| Complex64::new(x, 0.0)),
        )),
    }
}

/// Probabilities and entropy after each kick of a run started in `N0`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumRun {
    pub probabilities: Vec<ChannelDistribution>,
    pub entropy: Vec<f64>,
    pub densities: Vec<ReducedDensity>,
}

/// Evolves `|N0⟩` for `q` kicks and reads off the reduced state each time.
pub fn quantum_run(params: &SystemParams, q: usize, overlap: &OverlapModel) -> Result<QuantumRun> {
    let smatrix = build_torsion_smatrix(params)?;
    let kernel = OverlapKernel::new(*overlap, params)?;
    let states = evolve(
        &ChannelState::delta(params, params.n0)?,
        q,
        params,
        &smatrix,
    )?;
    let densities = states
        .iter()
        .map(|c| kernel.reduce(c))
        .collect::<Result<Vec<_>>>()?;
    Ok(QuantumRun {
        probabilities: states.iter().map(channel_probabilities).collect(),
        entropy: densities
            .iter()
            .map(linear_entropy)
            .collect::<Result<_>>()?,
        densities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn params(k: f64, j: i64) -> SystemParams {
        SystemParams::new(k, j, 5 * j, 5 * j, 10.0 * j as f64 / PI, 1.0).unwrap()
    }

    fn random_state(n: usize, salt: u64) -> ChannelState {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(salt);
        let c: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        ChannelState::new(c.into_iter().map(|z| z / norm).collect()).unwrap()
    }

    #[test]
    fn spin_x_has_integer_spectrum() {
        let basis = TorsionBasis::new(3).unwrap();
        assert_eq!(basis.spectrum, vec![-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
        let a = spin_x_matrix(1);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((a[(0, 1)] - h).abs() < 1e-15 && (a[(1, 2)] - h).abs() < 1e-15);
    }

    #[test]
    fn zero_kick_is_identity() {
        let s = build_torsion_smatrix(&params(0.0, 5)).unwrap();
        let id = DMatrix::<Complex64>::identity(11, 11);
        assert!((s.s - id).iter().all(|z| z.norm() < 1e-13));
    }

    #[test]
    fn smatrix_structure() {
        for k in [0.25, 3.0] {
            let s = build_torsion_smatrix(&params(k, 20)).unwrap();
            assert!(s.unitarity_error() < 1e-12);
            assert!(s.symmetry_error() < 1e-12);
            assert!(s.stochasticity_error() < 1e-12);
        }
    }

    #[test]
    fn smatrix_conserves_m_parity() {
        // J_x² only couples m to m ± 2
        let s = build_torsion_smatrix(&params(1.3, 6)).unwrap();
        for i in 0..13 {
            for j in 0..13 {
                if (i + j) % 2 == 1 {
                    assert!(s.s[(i, j)].norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn rotor_phase_examples() {
        let mut p = params(0.0, 10);
        p.tau_eps = 1e-300;
        assert!(build_rotor_phases(&p)
            .iter()
            .all(|z| (z - 1.0).norm() < 1e-12));
        p.tau_eps = 1.0;
        p.inertia = 1e300;
        assert!(build_rotor_phases(&p)
            .iter()
            .all(|z| (z - 1.0).norm() < 1e-12));

        // τ/I = π/100 with T = 50: phases −π N(N+1)/200 mod 2π
        let p = params(0.0, 10);
        let r = build_rotor_phases(&p);
        for (n, want) in [(40, -8.2 * PI), (50, -12.75 * PI), (60, -18.3 * PI)] {
            let z = r[p.index_of(n).unwrap()];
            let w = Complex64::from_polar(1.0, want);
            assert!((z - w).norm() < 1e-12, "N = {n}");
        }
    }

    #[test]
    fn evolution_examples() {
        let p = params(0.0, 8);
        let s = build_torsion_smatrix(&p).unwrap();
        let c0 = ChannelState::delta(&p, 37).unwrap();
        for c in evolve(&c0, 10, &p, &s).unwrap() {
            let d = channel_probabilities(&c);
            assert!((d.p[p.index_of(37).unwrap()] - 1.0).abs() < 1e-12);
        }

        let p = params(1.7, 8);
        let s = build_torsion_smatrix(&p).unwrap();
        let c0 = ChannelState::delta(&p, 37).unwrap();
        let first = channel_probabilities(&evolve(&c0, 1, &p, &s).unwrap()[0]);
        let col = p.index_of(37).unwrap();
        for i in 0..p.n() {
            assert!((first.p[i] - s.s[(i, col)].norm_sqr()).abs() < 1e-15);
        }

        let states = evolve(&c0, 1000, &p, &s).unwrap();
        assert!(states.iter().all(|c| (c.norm_sqr() - 1.0).abs() < 1e-10));

        let wrong = ChannelState::delta(&params(0.0, 3), 15).unwrap();
        assert!(matches!(
            evolve(&wrong, 1, &p, &s),
            Err(Error::Shape { .. })
        ));
    }

    #[test]
    fn probability_examples() {
        let p = params(0.0, 4);
        let d = channel_probabilities(&ChannelState::delta(&p, 20).unwrap());
        assert_eq!(d, ChannelDistribution::delta(&p, 20).unwrap());
        let flat = ChannelState::new(
            (0..9)
                .map(|i| Complex64::from_polar(1.0 / 3.0, i as f64))
                .collect(),
        )
        .unwrap();
        assert!(channel_probabilities(&flat)
            .p
            .iter()
            .all(|x| (x - 1.0 / 9.0).abs() < 1e-15));
        assert!((channel_probabilities(&random_state(9, 1)).total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reduced_density_limits() {
        let p = params(0.0, 4);
        let c = random_state(9, 7);
        let orth = reduced_density(&c, &OverlapModel::orthogonal(), &p).unwrap();
        let probs = channel_probabilities(&c);
        assert_eq!(orth.diagonal(), probs.p);
        assert!(orth
            .rho
            .iter()
            .enumerate()
            .all(|(i, z)| i % 10 == 0 || *z == Complex64::new(0.0, 0.0)));

        let wide = reduced_density(&c, &OverlapModel::gaussian(1e12).unwrap(), &p).unwrap();
        assert!(linear_entropy(&wide).unwrap().abs() < 1e-12);

        let narrow = reduced_density(&c, &OverlapModel::gaussian(1e-6).unwrap(), &p).unwrap();
        assert!((&narrow.rho - &orth.rho).iter().all(|z| z.norm() < 1e-14));

        for rho in [&orth, &wide, &narrow] {
            assert!(rho.hermiticity_error() < 1e-12);
            assert!((rho.trace().re - 1.0).abs() < 1e-10);
            assert!(rho.min_eigenvalue() > -1e-10);
        }
        assert!(OverlapModel::gaussian(0.0).is_err());
    }

    #[test]
    fn gaussian_overlap_purifies_monotonically() {
        let p = params(0.0, 6);
        let spread = p.rotor_energy(p.n_max()) - p.rotor_energy(p.n_min());
        for salt in 0..5 {
            let c = random_state(p.n(), salt);
            let hs: Vec<f64> = [0.01, 0.05, 0.2, 1.0, 5.0]
                .iter()
                .map(|f| {
                    let rho = reduced_density(&c, &OverlapModel::gaussian(f * spread).unwrap(), &p)
                        .unwrap();
                    linear_entropy(&rho).unwrap()
                })
                .collect();
            assert!(hs.windows(2).all(|w| w[1] < w[0]), "{hs:?}");
        }
    }

    #[test]
    fn entropy_examples() {
        let p = params(0.0, 10);
        let pure = reduced_density(
            &random_state(21, 3),
            &OverlapModel::gaussian(1e15).unwrap(),
            &p,
        )
        .unwrap();
        assert!(linear_entropy(&pure).unwrap().abs() < 1e-12);
        let mixed = build_rho_cc(&ChannelDistribution::uniform(21));
        assert!((linear_entropy(&mixed).unwrap() - 1.0).abs() < 1e-14);
        let mut half = vec![0.0; 21];
        half[3] = 0.5;
        half[4] = 0.5;
        let h = linear_entropy(&build_rho_cc(&ChannelDistribution::new(half).unwrap())).unwrap();
        assert!((h - 0.525).abs() < 1e-15);
        let one = ReducedDensity {
            rho: DMatrix::identity(1, 1),
        };
        assert!(matches!(linear_entropy(&one), Err(Error::Degenerate(1))));
    }

    #[test]
    fn purity_scaling_examples() {
        assert_eq!(purity_scaling(1.0, 0.1, 0.01).unwrap().value, 1.0);
        assert_eq!(purity_scaling(0.37, 0.2, 0.2).unwrap().value, 0.37);
        let s = purity_scaling(0.9, 0.25, 0.1).unwrap();
        assert!((s.value - 0.96).abs() < 1e-15 && !s.clamped);
        let s = purity_scaling(0.2, 0.1, 0.5).unwrap();
        assert!(s.clamped && s.value == 0.0);
        assert!(matches!(
            purity_scaling(0.5, 0.0, 0.1),
            Err(Error::Domain(_))
        ));
        assert!(purity_scaling(0.5, 0.1, -1.0).is_err());
    }

    #[test]
    fn discord_is_linear_entropy() {
        let p = params(0.0, 4);
        let product = reduced_density(
            &ChannelState::delta(&p, 20).unwrap(),
            &OverlapModel::orthogonal(),
            &p,
        )
        .unwrap();
        assert_eq!(quantum_discord(&product).unwrap(), 0.0);
        let mixed = build_rho_cc(&ChannelDistribution::uniform(9));
        assert!((quantum_discord(&mixed).unwrap() - 1.0).abs() < 1e-14);
        let rho = reduced_density(
            &random_state(9, 11),
            &OverlapModel::gaussian(3.0).unwrap(),
            &p,
        )
        .unwrap();
        assert_eq!(
            quantum_discord(&rho).unwrap(),
            linear_entropy(&rho).unwrap()
        );
    }

    #[test]
    fn rho_cc_examples() {
        let p = params(0.0, 4);
        let d = build_rho_cc(&ChannelDistribution::delta(&p, 18).unwrap());
        assert_eq!(d.purity(), 1.0);
        assert!((d.trace().re - 1.0).abs() < 1e-15);
        let u = build_rho_cc(&ChannelDistribution::uniform(9));
        assert!((u.trace().re - 1.0).abs() < 1e-15);
        assert_eq!(u.rho[(2, 2)].re, 1.0 / 9.0);
    }

    #[test]
    fn orthogonal_entropy_matches_probability_route() {
        let p = params(0.9, 12);
        let s = build_torsion_smatrix(&p).unwrap();
        let kernel = OverlapKernel::new(OverlapModel::orthogonal(), &p).unwrap();
        for c in evolve(&ChannelState::delta(&p, 62).unwrap(), 20, &p, &s).unwrap() {
            let h = linear_entropy(&kernel.reduce(&c).unwrap()).unwrap();
            let m = crate::ensemble::mutual_information(&channel_probabilities(&c)).unwrap();
            assert!((h - m).abs() < 1e-12);
        }
    }
}
