//! Dense complex linear algebra for small dimensions.
//!
//! Everything here targets d ≤ 16: dense storage, Jacobi eigensolver,
//! Householder least squares. No attempt is made at large-matrix performance.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Default tolerance for matrix comparisons (max-absolute-entry norm).
pub const DEFAULT_TOL: f64 = 1e-10;

/// A square matrix of complex amplitudes.
///
/// Invariants: square, all entries finite.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    data: Array2<C64>,
}

impl CMatrix {
    pub fn new(data: Array2<C64>) -> Result<Self> {
        let (rows, cols) = data.dim();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { data })
    }

    /// Build from row-major nested slices of (re, im) pairs.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let d = rows.len();
        let mut data = Array2::zeros((d, d));
        for (i, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(Error::NotSquare { rows: d, cols: row.len() });
            }
            for (j, z) in row.iter().enumerate() {
                data[(i, j)] = *z;
            }
        }
        Self::new(data)
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        Self { data: Array2::from_shape_fn((dim, dim), |(i, j)| f(i, j)) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { data: Array2::eye(dim) }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { data: Array2::zeros((dim, dim)) }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn array(&self) -> &Array2<C64> {
        &self.data
    }

    pub fn into_array(self) -> Array2<C64> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        self.data[(i, j)] = z;
    }

    /// Matrix product `self * rhs`.
    pub fn dot(&self, rhs: &CMatrix) -> CMatrix {
        CMatrix { data: self.data.dot(&rhs.data) }
    }

    pub fn dot_vec(&self, v: &Array1<C64>) -> Array1<C64> {
        self.data.dot(v)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> CMatrix {
        CMatrix { data: self.data.t().mapv(|z| z.conj()) }
    }

    pub fn scale(&self, z: C64) -> CMatrix {
        CMatrix { data: self.data.mapv(|w| w * z) }
    }

    pub fn add(&self, rhs: &CMatrix) -> CMatrix {
        CMatrix { data: &self.data + &rhs.data }
    }

    pub fn sub(&self, rhs: &CMatrix) -> CMatrix {
        CMatrix { data: &self.data - &rhs.data }
    }

    pub fn trace(&self) -> C64 {
        self.data.diag().sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-absolute-entry norm of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &CMatrix) -> f64 {
        self.sub(rhs).max_abs()
    }

    /// True iff `‖self† self − I‖_max ≤ tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let gram = self.dagger().dot(self);
        gram.max_abs_diff(&CMatrix::identity(self.dim())) <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.dagger()) <= tol
    }

    /// Distance to `rhs` minimized over a global phase: `min_α ‖self − e^{iα} rhs‖_max`
    /// with the optimal α = arg Tr(rhs† self).
    pub fn phase_dist(&self, rhs: &CMatrix) -> f64 {
        let t = rhs.dagger().dot(self).trace();
        let alpha = if t.norm() > 0.0 { t / t.norm() } else { C64::new(1.0, 0.0) };
        self.max_abs_diff(&rhs.scale(alpha))
    }

    /// Frobenius inner product Tr(self† rhs).
    pub fn inner(&self, rhs: &CMatrix) -> C64 {
        self.data
            .iter()
            .zip(rhs.data.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Checks `‖M† M − I‖_max ≤ tol`; guards inputs to the decomposition routines.
pub fn is_unitary(m: &CMatrix, tol: f64) -> bool {
    m.is_unitary(tol)
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Returns eigenvalues in ascending order and the matching unitary of column
/// eigenvectors, so `A = V diag(w) V†`.
pub fn hermitian_eig(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = a.dim();
    // Work on the Hermitized copy so tiny asymmetries cannot stall the sweep.
    let mut m = a.add(&a.dagger()).scale(C64::new(0.5, 0.0)).into_array();
    let mut v = Array2::<C64>::eye(n);
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let tol = 1e-15 * scale;

    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(m[(p, q)].norm());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.norm() <= tol * 1e-2 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let phase = apq / apq.norm();
                // Real Jacobi rotation on the phase-aligned 2x2 block.
                let tau = (aqq - app) / (2.0 * apq.norm());
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G[p,p]=c, G[p,q]=s, G[q,p]=-conj(phase)*s, G[q,q]=conj(phase)*c
                let gpp = C64::new(c, 0.0);
                let gpq = C64::new(s, 0.0);
                let gqp = -phase.conj() * s;
                let gqq = phase.conj() * c;
                // m <- G† m G, applied as column then row updates.
                for i in 0..n {
                    let mip = m[(i, p)];
                    let miq = m[(i, q)];
                    m[(i, p)] = mip * gpp + miq * gqp;
                    m[(i, q)] = mip * gpq + miq * gqq;
                }
                for j in 0..n {
                    let mpj = m[(p, j)];
                    let mqj = m[(q, j)];
                    m[(p, j)] = gpp.conj() * mpj + gqp.conj() * mqj;
                    m[(q, j)] = gpq.conj() * mpj + gqq.conj() * mqj;
                }
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * gpp + viq * gqp;
                    v[(i, q)] = vip * gpq + viq * gqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let eigs: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| eigs[i].partial_cmp(&eigs[j]).unwrap());
    let sorted: Vec<f64> = order.iter().map(|&i| eigs[i]).collect();
    let mut vecs = Array2::<C64>::zeros((n, n));
    for (col, &i) in order.iter().enumerate() {
        for r in 0..n {
            vecs[(r, col)] = v[(r, i)];
        }
    }
    (sorted, CMatrix { data: vecs })
}

/// `exp(i A)` for Hermitian `A`, via eigendecomposition.
pub fn expm_i_hermitian(a: &CMatrix) -> CMatrix {
    let (w, v) = hermitian_eig(a);
    let n = a.dim();
    let mut d = CMatrix::zeros(n);
    for k in 0..n {
        d.set(k, k, C64::from_polar(1.0, w[k]));
    }
    v.dot(&d).dot(&v.dagger())
}

/// Least-squares solution of `A x = b` for complex rectangular `A` (rows ≥ cols)
/// by Householder QR. Errors out when a diagonal pivot falls below `rank_tol`
/// relative to the largest one.
pub fn lstsq(a: &Array2<C64>, b: &Array1<C64>, rank_tol: f64) -> Result<Array1<C64>> {
    let (m, n) = a.dim();
    assert!(m >= n, "lstsq needs at least as many rows as columns");
    assert_eq!(b.len(), m);
    let mut r = a.clone();
    let mut y = b.clone();

    for k in 0..n {
        // Householder vector for column k below the diagonal.
        let norm_x: f64 = (k..m).map(|i| r[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let rkk = r[(k, k)];
        let alpha = if rkk.norm() > 0.0 { -(rkk / rkk.norm()) * norm_x } else { C64::new(-norm_x, 0.0) };
        let mut vnorm2 = 0.0;
        let mut v = vec![C64::new(0.0, 0.0); m - k];
        for i in k..m {
            v[i - k] = r[(i, k)];
        }
        v[0] -= alpha;
        for z in &v {
            vnorm2 += z.norm_sqr();
        }
        if vnorm2 == 0.0 {
            continue;
        }
        // Apply the reflector to the remaining columns and to the rhs.
        for j in k..n {
            let mut dot = C64::new(0.0, 0.0);
            for i in k..m {
                dot += v[i - k].conj() * r[(i, j)];
            }
            let f = dot * (2.0 / vnorm2);
            for i in k..m {
                let vv = v[i - k];
                r[(i, j)] -= vv * f;
            }
        }
        let mut dot = C64::new(0.0, 0.0);
        for i in k..m {
            dot += v[i - k].conj() * y[i];
        }
        let f = dot * (2.0 / vnorm2);
        for i in k..m {
            y[i] -= v[i - k] * f;
        }
    }

    let max_pivot = (0..n).map(|k| r[(k, k)].norm()).fold(0.0, f64::max).max(1e-300);
    let mut x = Array1::<C64>::zeros(n);
    for k in (0..n).rev() {
        let pivot = r[(k, k)];
        if pivot.norm() < rank_tol * max_pivot {
            return Err(Error::RankDeficient { pivot: pivot.norm() });
        }
        let mut acc = y[k];
        for j in (k + 1)..n {
            acc -= r[(k, j)] * x[j];
        }
        x[k] = acc / pivot;
    }
    Ok(x)
}

/// Real-valued least squares via the complex path.
pub fn lstsq_real(a: &Array2<f64>, b: &Array1<f64>, rank_tol: f64) -> Result<Array1<f64>> {
    let ac = a.mapv(|x| C64::new(x, 0.0));
    let bc = b.mapv(|x| C64::new(x, 0.0));
    let x = lstsq(&ac, &bc, rank_tol)?;
    Ok(x.mapv(|z| z.re))
}

/// A Haar-random unitary: QR of a complex Gaussian matrix with the R diagonal
/// phases folded back into Q.
pub fn haar_random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g = Array2::from_shape_fn((dim, dim), |_| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    // Modified Gram-Schmidt with a second orthogonalization pass.
    let mut q = g.clone();
    let mut diag_phase = vec![C64::new(1.0, 0.0); dim];
    for j in 0..dim {
        for _pass in 0..2 {
            for k in 0..j {
                let mut dot = C64::new(0.0, 0.0);
                for i in 0..dim {
                    dot += q[(i, k)].conj() * q[(i, j)];
                }
                for i in 0..dim {
                    let qk = q[(i, k)];
                    q[(i, j)] -= qk * dot;
                }
            }
        }
        // r_jj is the projection of the original column onto the new direction.
        let norm: f64 = (0..dim).map(|i| q[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..dim {
            q[(i, j)] /= norm;
        }
        let mut rjj = C64::new(0.0, 0.0);
        for i in 0..dim {
            rjj += q[(i, j)].conj() * g[(i, j)];
        }
        if rjj.norm() > 0.0 {
            diag_phase[j] = rjj / rjj.norm();
        }
    }
    for j in 0..dim {
        for i in 0..dim {
            q[(i, j)] *= diag_phase[j];
        }
    }
    CMatrix { data: q }
}
