//! Gate primitives: two-level rotations, generalized phase gates, virtual
//! phase commutation, non-adjacent expansion, and effective SU(2) factors.
//!
//! Rotations act on a pair of levels {m, n} of a d-level system:
//!
//!   R_{m,n}(θ, φ) = exp[-i(θ/2)(cos φ σx^{m,n} + sin φ σy^{m,n})]
//!
//! and the generalized phase gate P(Φ) = Σ_k e^{iφ_k}|k⟩⟨k| is purely
//! virtual: it commutes through rotations by re-phasing them and costs no
//! pulse time.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

const TWO_PI: f64 = 2.0 * PI;

/// Wraps θ into the canonical range (−2π, 2π] (rotations are 4π-periodic).
pub fn canonical_theta(theta: f64) -> f64 {
    let r = theta.rem_euclid(2.0 * TWO_PI);
    if r > TWO_PI {
        r - 2.0 * TWO_PI
    } else {
        r
    }
}

/// Wraps φ into the canonical range (−π, π].
pub fn canonical_phi(phi: f64) -> f64 {
    let r = phi.rem_euclid(TWO_PI);
    if r > PI {
        r - TWO_PI
    } else {
        r
    }
}

/// True iff a ≡ b (mod `period`) within `tol`.
pub fn angles_close(a: f64, b: f64, period: f64, tol: f64) -> bool {
    let d = (a - b).rem_euclid(period);
    d <= tol || period - d <= tol
}

/// A physical two-level rotation pulse R_{m,n}(θ, φ) with m < n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseOp {
    pub m: usize,
    pub n: usize,
    pub theta: f64,
    pub phi: f64,
}

impl PulseOp {
    /// Canonicalizes the angles; requires m < n and finite angles.
    pub fn new(m: usize, n: usize, theta: f64, phi: f64) -> Result<Self> {
        if m >= n {
            return Err(Error::BadLevels { m, n, dim: 0 });
        }
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self { m, n, theta: canonical_theta(theta), phi: canonical_phi(phi) })
    }

    pub fn is_adjacent(&self) -> bool {
        self.n == self.m + 1
    }

    /// R(θ,φ)⁻¹ = R(−θ,φ).
    pub fn inverse(&self) -> PulseOp {
        PulseOp { theta: canonical_theta(-self.theta), ..*self }
    }

    /// Identity on all levels outside {m, n}; the 2×2 block is
    /// exp[−i(θ/2)(cosφ σx + sinφ σy)].
    pub fn matrix(&self, d: usize) -> Result<CMatrix> {
        if self.n >= d {
            return Err(Error::BadLevels { m: self.m, n: self.n, dim: d });
        }
        let c = C64::new((self.theta / 2.0).cos(), 0.0);
        let s = (self.theta / 2.0).sin();
        let off_mn = C64::new(0.0, -s) * C64::from_polar(1.0, -self.phi);
        let off_nm = C64::new(0.0, -s) * C64::from_polar(1.0, self.phi);
        let mut u = CMatrix::identity(d);
        u.set(self.m, self.m, c);
        u.set(self.n, self.n, c);
        u.set(self.m, self.n, off_mn);
        u.set(self.n, self.m, off_nm);
        Ok(u)
    }
}

/// Per-level virtual phases φ_k; equivalent modulo 2π per entry and modulo a
/// global constant.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseOp {
    pub phases: Vec<f64>,
}

impl PhaseOp {
    pub fn new(phases: Vec<f64>) -> Result<Self> {
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { phases })
    }

    pub fn zeros(d: usize) -> Self {
        Self { phases: vec![0.0; d] }
    }

    pub fn dim(&self) -> usize {
        self.phases.len()
    }

    /// Diagonal unitary with entries e^{iφ_k}.
    pub fn matrix(&self) -> CMatrix {
        CMatrix::from_fn(self.dim(), |i, j| {
            if i == j {
                C64::from_polar(1.0, self.phases[i])
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// Entrywise sum (composition of the two diagonal gates).
    pub fn merge(&self, other: &PhaseOp) -> PhaseOp {
        PhaseOp {
            phases: self
                .phases
                .iter()
                .zip(&other.phases)
                .map(|(a, b)| canonical_phi(a + b))
                .collect(),
        }
    }

    pub fn negated(&self) -> PhaseOp {
        PhaseOp { phases: self.phases.iter().map(|p| canonical_phi(-p)).collect() }
    }

    /// True iff all entries agree modulo 2π up to a global constant.
    pub fn is_identity(&self, tol: f64) -> bool {
        self.phases
            .iter()
            .all(|&p| angles_close(p, self.phases[0], TWO_PI, tol))
    }
}

/// Parameters for the effective SU(2) element of Eq.-(4) form:
/// P(Φ1) R_{m,n}(θ, π/2) P(Φ2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2Params {
    pub m: usize,
    pub n: usize,
    pub theta: f64,
    pub phi: f64,
    pub lambda: f64,
    pub delta: f64,
}

/// Swap a phase gate from before a rotation to after it:
/// `rotation_matrix(op) · phase_matrix(p) = phase_matrix(p) · rotation_matrix(op')`
/// with op'.phi = op.phi + φ_m − φ_n. Exact identity.
pub fn commute_phase_left(op: &PulseOp, p: &PhaseOp) -> (PhaseOp, PulseOp) {
    let shifted = PulseOp {
        phi: canonical_phi(op.phi + p.phases[op.m] - p.phases[op.n]),
        ..*op
    };
    (p.clone(), shifted)
}

/// Expands a non-adjacent rotation into adjacent pulses, in execution order.
///
/// One level of the recursion rewrites R_{m,n}(θ,φ) as
/// [R_{m,n-1}(π, π/2), R_{n-1,n}(θ, φ), R_{m,n-1}(−π, π/2)], and the swap
/// pulses recurse until everything is adjacent. The product equals the
/// original rotation exactly, with no global phase.
pub fn expand_nonadjacent(op: &PulseOp) -> Result<Vec<PulseOp>> {
    if op.is_adjacent() {
        return Err(Error::InvalidInput(
            "pulse is already adjacent; nothing to expand".into(),
        ));
    }
    let swap_up = PulseOp::new(op.m, op.n - 1, PI, PI / 2.0)?;
    let rot = PulseOp::new(op.n - 1, op.n, op.theta, op.phi)?;
    let swap_down = swap_up.inverse();
    let mut seq = Vec::new();
    if swap_up.is_adjacent() {
        seq.push(swap_up);
    } else {
        seq.extend(expand_nonadjacent(&swap_up)?);
    }
    seq.push(rot);
    if swap_down.is_adjacent() {
        seq.push(swap_down);
    } else {
        seq.extend(expand_nonadjacent(&swap_down)?);
    }
    Ok(seq)
}

/// The effective SU(2) element P(Φ1) R_{m,n}(θ, π/2) P(Φ2) on a d-level
/// system, returned as (pre-phase, pulse, post-phase) in matrix order; in
/// execution order the post-phase applies first.
pub fn su2_effective(p: &Su2Params, d: usize) -> Result<(PhaseOp, PulseOp, PhaseOp)> {
    if p.m >= p.n || p.n >= d {
        return Err(Error::BadLevels { m: p.m, n: p.n, dim: d });
    }
    let mut phi1 = vec![0.0; d];
    phi1[p.m] = -p.lambda / 2.0;
    phi1[p.n] = p.lambda / 2.0;
    let mut phi2 = vec![0.0; d];
    phi2[p.m] = p.delta - p.phi / 2.0;
    phi2[p.n] = p.delta + p.phi / 2.0;
    let pulse = PulseOp::new(p.m, p.n, p.theta, PI / 2.0)?;
    Ok((PhaseOp::new(phi1)?, pulse, PhaseOp::new(phi2)?))
}

/// Dense matrix of the effective SU(2) element.
pub fn su2_matrix(p: &Su2Params, d: usize) -> Result<CMatrix> {
    let (p1, pulse, p2) = su2_effective(p, d)?;
    Ok(p1.matrix().dot(&pulse.matrix(d)?).dot(&p2.matrix()))
}

/// A gate in a mixed pulse/phase sequence.
#[derive(Debug, Clone, PartialEq)]
pub enum GateOp {
    Pulse(PulseOp),
    Phase(PhaseOp),
}

/// Sweeps every phase gate to the end of the sequence (the leading position
/// of the matrix product) via the exact commutation rule, merges them into
/// one, and cancels adjacent inverse pulse pairs. The total unitary,
/// including the returned leading phase, is preserved exactly; the physical
/// pulse count never increases.
///
/// Input and output pulse lists are in execution order.
pub fn simplify_sequence(seq: &[GateOp], d: usize) -> Result<(Vec<PulseOp>, PhaseOp)> {
    let mut pending = PhaseOp::zeros(d);
    let mut pulses: Vec<PulseOp> = Vec::new();
    for op in seq {
        match op {
            GateOp::Phase(p) => {
                if p.dim() != d {
                    return Err(Error::DimMismatch { expected: d, got: p.dim() });
                }
                pending = pending.merge(p);
            }
            GateOp::Pulse(r) => {
                if r.n >= d {
                    return Err(Error::BadLevels { m: r.m, n: r.n, dim: d });
                }
                // The pending phase sits before this pulse in time; commuting
                // it past shifts the drive phase by φ_m − φ_n.
                let (_, shifted) = commute_phase_left(r, &pending);
                pulses.push(shifted);
            }
        }
    }
    cancel_inverse_pairs(&mut pulses);
    Ok((pulses, pending))
}

const ANGLE_TOL: f64 = 1e-10;

fn is_identity_pulse(p: &PulseOp) -> bool {
    angles_close(p.theta, 0.0, 2.0 * TWO_PI, ANGLE_TOL)
}

fn cancels(a: &PulseOp, b: &PulseOp) -> bool {
    a.m == b.m
        && a.n == b.n
        && angles_close(a.phi, b.phi, TWO_PI, ANGLE_TOL)
        && angles_close(a.theta + b.theta, 0.0, 2.0 * TWO_PI, ANGLE_TOL)
}

fn cancel_inverse_pairs(pulses: &mut Vec<PulseOp>) {
    pulses.retain(|p| !is_identity_pulse(p));
    loop {
        let mut removed = false;
        let mut i = 0;
        while i + 1 < pulses.len() {
            if cancels(&pulses[i], &pulses[i + 1]) {
                pulses.drain(i..=i + 1);
                removed = true;
                i = i.saturating_sub(1);
            } else {
                i += 1;
            }
        }
        if !removed {
            break;
        }
    }
}
