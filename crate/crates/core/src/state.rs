//! Pure states, density matrices, measurement probabilities, and shot sampling.

use ndarray::Array1;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, CMatrix};

/// A normalized pure state on d levels.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: Array1<C64>,
}

impl PureState {
    /// Validates normalization to 1e-12.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let amps = Array1::from(amps);
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm2: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { dev: (norm2 - 1.0).abs() });
        }
        Ok(Self { amps })
    }

    /// |k⟩ in dimension d.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut amps = Array1::zeros(dim);
        amps[k] = C64::new(1.0, 0.0);
        Self { amps }
    }

    /// Normalizes the given amplitudes (errors on the zero vector).
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        let norm2: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if norm2 <= 0.0 || !norm2.is_finite() {
            return Err(Error::NotNormalized { dev: f64::INFINITY });
        }
        let s = norm2.sqrt();
        Self::new(amps.into_iter().map(|z| z / s).collect())
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &Array1<C64> {
        &self.amps
    }

    pub fn amp(&self, k: usize) -> C64 {
        self.amps[k]
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &PureState) -> C64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Computational-basis probabilities ⟨k|ψ⟩⟨ψ|k⟩.
    pub fn measure_probs(&self) -> Vec<f64> {
        self.amps.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Applies a unitary, checking dimensions and norm preservation.
    pub fn evolve(&self, u: &CMatrix) -> Result<PureState> {
        if u.dim() != self.dim() {
            return Err(Error::DimMismatch { expected: self.dim(), got: u.dim() });
        }
        let amps = u.dot_vec(&self.amps);
        let norm2: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > 1e-10 {
            return Err(Error::NotUnitary { max_dev: (norm2 - 1.0).abs() });
        }
        Ok(PureState { amps })
    }

    /// Distance to `other` minimized over a global phase.
    pub fn phase_dist(&self, other: &PureState) -> f64 {
        let ov = other.inner(self);
        let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { C64::new(1.0, 0.0) };
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b * phase).norm())
            .fold(0.0, f64::max)
    }
}

/// A density matrix on d levels: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity and trace to 1e-12 and eigenvalues ≥ −1e-10.
    pub fn new(mat: CMatrix) -> Result<Self> {
        let herm_dev = mat.max_abs_diff(&mat.dagger());
        if herm_dev > 1e-12 {
            return Err(Error::NotHermitian { max_dev: herm_dev });
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
            return Err(Error::NotNormalized { dev: (tr - C64::new(1.0, 0.0)).norm() });
        }
        let (eigs, _) = hermitian_eig(&mat);
        if eigs[0] < -1e-10 {
            return Err(Error::NotPositive { min_eig: eigs[0] });
        }
        Ok(Self { mat })
    }

    /// Skips validation; for reconstruction intermediates that may be
    /// slightly non-physical.
    pub fn from_matrix_unchecked(mat: CMatrix) -> Self {
        Self { mat }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let d = psi.dim();
        let mat = CMatrix::from_fn(d, |i, j| psi.amp(i) * psi.amp(j).conj());
        Self { mat }
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        Self::from_pure(&PureState::basis(dim, k))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let p = 1.0 / dim as f64;
        Self { mat: CMatrix::from_fn(dim, |i, j| if i == j { C64::new(p, 0.0) } else { C64::new(0.0, 0.0) }) }
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    /// Diagonal populations ⟨k|ρ|k⟩.
    pub fn measure_probs(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.mat.get(k, k).re).collect()
    }

    /// ρ → U ρ U†.
    pub fn evolve(&self, u: &CMatrix) -> Result<DensityMatrix> {
        if u.dim() != self.dim() {
            return Err(Error::DimMismatch { expected: self.dim(), got: u.dim() });
        }
        Ok(DensityMatrix { mat: u.dot(&self.mat).dot(&u.dagger()) })
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eig(&self.mat).0
    }

    /// Projects onto the physical set: Hermitize, clip negative eigenvalues,
    /// renormalize the trace.
    pub fn project_physical(&self) -> DensityMatrix {
        let h = self.mat.add(&self.mat.dagger()).scale(C64::new(0.5, 0.0));
        let (w, v) = hermitian_eig(&h);
        let d = h.dim();
        let clipped: Vec<f64> = w.iter().map(|&x| x.max(0.0)).collect();
        let total: f64 = clipped.iter().sum();
        let mut diag = CMatrix::zeros(d);
        for k in 0..d {
            diag.set(k, k, C64::new(clipped[k] / total.max(1e-300), 0.0));
        }
        DensityMatrix { mat: v.dot(&diag).dot(&v.dagger()) }
    }
}

/// F = ⟨ψ|ρ|ψ⟩ for a pure target. 1 iff ρ = |ψ⟩⟨ψ|.
pub fn state_fidelity(rho: &DensityMatrix, psi: &PureState) -> Result<f64> {
    if rho.dim() != psi.dim() {
        return Err(Error::DimMismatch { expected: psi.dim(), got: rho.dim() });
    }
    let v = rho.matrix().dot_vec(psi.amps());
    let f: C64 = psi
        .amps()
        .iter()
        .zip(v.iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(f.re)
}

fn validate_probs(probs: &[f64]) -> Result<()> {
    if probs.iter().any(|p| !p.is_finite()) {
        return Err(Error::NonFinite);
    }
    if probs.iter().any(|&p| p < -1e-12) {
        return Err(Error::InvalidProbabilities("negative entry".into()));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidProbabilities(format!("sum {total} != 1")));
    }
    Ok(())
}

/// Multinomial shot counts for `probs`, deterministic in `seed`.
pub fn sample_shots(probs: &[f64], n: u64, seed: u64) -> Result<Vec<u64>> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    sample_shots_with_rng(probs, n, &mut rng)
}

/// Multinomial sampling by sequential binomial splitting, O(d) draws.
pub fn sample_shots_with_rng<R: Rng + ?Sized>(probs: &[f64], n: u64, rng: &mut R) -> Result<Vec<u64>> {
    validate_probs(probs)?;
    let d = probs.len();
    let mut counts = vec![0u64; d];
    let mut remaining = n;
    let mut mass_left = 1.0f64;
    for k in 0..d {
        if remaining == 0 {
            break;
        }
        if k == d - 1 {
            counts[k] = remaining;
            break;
        }
        let p = (probs[k].max(0.0) / mass_left.max(1e-300)).clamp(0.0, 1.0);
        let draw = Binomial::new(remaining, p)
            .map_err(|e| Error::InvalidProbabilities(e.to_string()))?
            .sample(rng);
        counts[k] = draw;
        remaining -= draw;
        mass_left -= probs[k].max(0.0);
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn basis_state_probs() {
        let psi = PureState::basis(4, 2);
        assert_eq!(psi.measure_probs(), vec![0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn superposition_probs() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = PureState::new(vec![c(s, 0.0), c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let p = psi.measure_probs();
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn qst_demo_state_probs() {
        // (1-i)|0>/sqrt(8) + |1>/sqrt(2) - (1+i)|2>/sqrt(8)
        let r8 = 8.0f64.sqrt();
        let psi = PureState::new(vec![
            c(1.0 / r8, -1.0 / r8),
            c(1.0 / 2.0f64.sqrt(), 0.0),
            c(-1.0 / r8, -1.0 / r8),
            c(0.0, 0.0),
        ])
        .unwrap();
        let p = psi.measure_probs();
        assert!((p[0] - 0.25).abs() < 1e-12);
        assert!((p[1] - 0.50).abs() < 1e-12);
        assert!((p[2] - 0.25).abs() < 1e-12);
        assert!(p[3].abs() < 1e-12);
    }

    #[test]
    fn probs_invariant_under_global_phase() {
        let psi = PureState::new(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let phase = C64::from_polar(1.0, 0.923);
        let psi2 = PureState::new(psi.amps().iter().map(|z| z * phase).collect()).unwrap();
        for (a, b) in psi.measure_probs().iter().zip(psi2.measure_probs()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn fidelity_examples() {
        let rho = DensityMatrix::basis(2, 0);
        let psi = PureState::basis(2, 0);
        assert!((state_fidelity(&rho, &psi).unwrap() - 1.0).abs() < 1e-15);

        let mixed = DensityMatrix::maximally_mixed(4);
        let any = PureState::basis(4, 3);
        assert!((state_fidelity(&mixed, &any).unwrap() - 0.25).abs() < 1e-15);

        // |+> on {0,1} of d=3 against |0>.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = PureState::new(vec![c(s, 0.0), c(s, 0.0), c(0.0, 0.0)]).unwrap();
        let rho = DensityMatrix::from_pure(&plus);
        let zero = PureState::basis(3, 0);
        assert!((state_fidelity(&rho, &zero).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn fidelity_matches_trace_form() {
        // state_fidelity(rho, psi) == Tr(rho |psi><psi|) computed independently.
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(21);
        for _ in 0..20 {
            let u = crate::linalg::haar_random_unitary(4, &mut rng);
            let rho = DensityMatrix::basis(4, 0).evolve(&u).unwrap();
            let psi = PureState::basis(4, 1).evolve(&u).unwrap();
            let proj = DensityMatrix::from_pure(&psi);
            let tr = rho.matrix().dot(proj.matrix()).trace();
            let f = state_fidelity(&rho, &psi).unwrap();
            assert!((f - tr.re).abs() < 1e-12);
        }
    }

    #[test]
    fn shots_deterministic_and_exact() {
        let counts = sample_shots(&[1.0, 0.0, 0.0, 0.0], 100, 1).unwrap();
        assert_eq!(counts, vec![100, 0, 0, 0]);

        let a = sample_shots(&[0.3, 0.2, 0.5], 10_000, 42).unwrap();
        let b = sample_shots(&[0.3, 0.2, 0.5], 10_000, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.iter().sum::<u64>(), 10_000);
    }

    #[test]
    fn shots_match_binomial_bound() {
        // (0.5, 0.5) with n = 1e6: each count within 5 sigma of n/2.
        let n = 1_000_000u64;
        let sigma = (n as f64 * 0.25).sqrt();
        for seed in [0u64, 7, 123] {
            let counts = sample_shots(&[0.5, 0.5], n, seed).unwrap();
            for &cnt in &counts {
                assert!((cnt as f64 - 5e5).abs() < 5.0 * sigma);
            }
        }
    }

    #[test]
    fn negative_probs_rejected() {
        assert!(sample_shots(&[1.2, -0.2], 10, 0).is_err());
    }

    #[test]
    fn density_matrix_validation() {
        let ok = CMatrix::from_fn(2, |i, j| if i == j { c(0.5, 0.0) } else { c(0.25, 0.0) });
        assert!(DensityMatrix::new(ok).is_ok());
        let neg = CMatrix::from_fn(2, |i, j| if i == j { c(0.5, 0.0) } else { c(0.7, 0.0) });
        assert!(matches!(DensityMatrix::new(neg), Err(Error::NotPositive { .. })));
    }
}
