//! Inverse engineering of single-qubit Hamiltonians through the SU(2) frame
//! `R(θ, φ)`.
//!
//! A path `(θ(t), φ(t))` on the parameter sphere fixes the frame. Requiring the
//! off-diagonal parts of `R†H₀R` and `i(∂ₜR†)R` to cancel (parallel
//! transport) and the diagonal parts to satisfy `f_z = η g_z` determines the
//! drive `h(t)` uniquely. The frame Hamiltonian is then `(1 + η) g_z σ_z`, so
//! the evolution accumulates the phase `γ(t) = (1 + η) γ_g(t)` with
//!
//! ```text
//! γ_g(t) = ½ ∫ (1 − cos θ) φ̇ dt
//! ```
//!
//! and a closed path implements `U₀(τ) = exp(−i γ n₀·σ)`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::algebra::{expm_su2, ComplexMatrix, PauliVector};
use crate::error::{Error, Result};
use crate::paths::{closure_check, ClosedPath, PathSegment, SegmentKind};

/// Minimum composite-quadrature nodes per segment for the phase integral.
pub const MIN_QUAD_NODES: usize = 100;

/// A point on the parameter sphere together with its instantaneous rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathPoint {
    pub theta: f64,
    pub phi: f64,
    pub theta_dot: f64,
    pub phi_dot: f64,
}

impl PathPoint {
    pub const fn new(theta: f64, phi: f64, theta_dot: f64, phi_dot: f64) -> Self {
        Self { theta, phi, theta_dot, phi_dot }
    }

    pub const fn at_rest(theta: f64, phi: f64) -> Self {
        Self::new(theta, phi, 0.0, 0.0)
    }
}

/// Frame transformation
///
/// ```text
/// R(θ, φ) = [[cos θ/2, −e^{−iφ} sin θ/2],
///            [e^{iφ} sin θ/2,  cos θ/2  ]]
/// ```
pub fn rotation_matrix(theta: f64, phi: f64) -> ComplexMatrix {
    let (s, c) = (0.5 * theta).sin_cos();
    let e = C64::from_polar(1.0, phi);
    ComplexMatrix::from_rows2([[C64::new(c, 0.0), -e.conj() * s], [e * s, C64::new(c, 0.0)]])
}

/// Pauli coefficients of `R†H₀R` (`f`) and `i(∂ₜR†)R` (`g`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameCoefficients {
    pub fx: f64,
    pub fy: f64,
    pub fz: f64,
    pub gx: f64,
    pub gy: f64,
    pub gz: f64,
}

impl FrameCoefficients {
    /// Traceless Pauli vector of the full frame Hamiltonian `f + g`.
    pub fn frame_hamiltonian(&self) -> PauliVector {
        PauliVector::traceless(self.fx + self.gx, self.fy + self.gy, self.fz + self.gz)
    }
}

pub fn frame_coefficients(h: &PauliVector, p: &PathPoint) -> FrameCoefficients {
    let (st, ct) = p.theta.sin_cos();
    let (sp, cp) = p.phi.sin_cos();
    let s2p = (2.0 * p.phi).sin();
    let sh2 = (0.5 * p.theta).sin().powi(2);
    let (hx, hy, hz) = (h.cx, h.cy, h.cz);
    FrameCoefficients {
        fx: (ct * cp * cp + sp * sp) * hx - sh2 * s2p * hy - st * cp * hz,
        fy: -sh2 * s2p * hx + (ct * sp * sp + cp * cp) * hy - st * sp * hz,
        fz: st * cp * hx + st * sp * hy + ct * hz,
        gx: 0.5 * p.theta_dot * sp + 0.5 * p.phi_dot * st * cp,
        gy: -0.5 * p.theta_dot * cp + 0.5 * p.phi_dot * st * sp,
        gz: 0.5 * p.phi_dot * (1.0 - ct),
    }
}

/// Drive `h = (h_x, h_y, h_z)` that keeps the frame diagonal with `f_z = η g_z`.
pub fn design_hamiltonian(p: &PathPoint, eta: f64) -> PauliVector {
    let (st, ct) = p.theta.sin_cos();
    let (sp, cp) = p.phi.sin_cos();
    let lever = eta - (1.0 + eta) * ct;
    let sh2 = (0.5 * p.theta).sin().powi(2);
    PauliVector::traceless(
        0.5 * p.phi_dot * lever * st * cp - 0.5 * p.theta_dot * sp,
        0.5 * p.phi_dot * lever * st * sp + 0.5 * p.theta_dot * cp,
        0.5 * p.phi_dot * (st * st + 2.0 * eta * ct * sh2),
    )
}

/// Drive in the two-level form `½[[Δ, Ω e^{−iφ}], [Ω e^{iφ}, −Δ]]`.
///
/// `omega_r` is kept non-negative. The signed pulse amplitude used for pulse
/// areas is `signed_direction * omega_r`; the same physical drive with
/// `(−Ω, φ)` is stored as `(Ω, φ ± π)` with the direction flipped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlPoint {
    pub omega_r: f64,
    pub phi_pulse: f64,
    pub delta: f64,
    pub signed_direction: i8,
}

impl ControlPoint {
    pub fn signed_omega(&self) -> f64 {
        f64::from(self.signed_direction) * self.omega_r
    }

    /// `(Ω, φ) -> (Ω, φ ± π)` with the direction flipped. Assembling the result
    /// negates the off-diagonal drive.
    pub fn flipped(&self) -> Self {
        Self { phi_pulse: wrap_phase(self.phi_pulse + PI), signed_direction: -self.signed_direction, ..*self }
    }

    /// Traceless Pauli vector of the two-level Hamiltonian.
    pub fn pauli_vector(&self) -> PauliVector {
        let (s, c) = self.phi_pulse.sin_cos();
        PauliVector::traceless(0.5 * self.omega_r * c, 0.5 * self.omega_r * s, 0.5 * self.delta)
    }
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_phase(phi: f64) -> f64 {
    let mut w = phi.rem_euclid(2.0 * PI);
    if w > PI {
        w -= 2.0 * PI;
    }
    w
}

/// Bookkeeping sign of the pulse amplitude: the sign of `θ̇`, or of `φ̇` when
/// the polar angle is stationary.
fn progress_direction(p: &PathPoint) -> i8 {
    let lead = if p.theta_dot != 0.0 { p.theta_dot } else { p.phi_dot };
    if lead < 0.0 {
        -1
    } else {
        1
    }
}

pub fn synthesize_controls(p: &PathPoint, eta: f64) -> ControlPoint {
    let h = design_hamiltonian(p, eta);
    // Off-diagonal element h_x − i h_y = (Ω/2) e^{−iφ}.
    let omega_r = 2.0 * h.cx.hypot(h.cy);
    let phi_pulse = if omega_r == 0.0 { 0.0 } else { wrap_phase(h.cy.atan2(h.cx)) };
    ControlPoint { omega_r, phi_pulse, delta: 2.0 * h.cz, signed_direction: progress_direction(p) }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportResiduals {
    pub offdiag_residual: f64,
    pub proportionality_residual: f64,
}

/// Residuals of `f_x = −g_x`, `f_y = −g_y` and `f_z = η g_z` for an arbitrary drive.
pub fn transport_residuals(h: &PauliVector, p: &PathPoint, eta: f64) -> TransportResiduals {
    let fc = frame_coefficients(h, p);
    TransportResiduals {
        offdiag_residual: (fc.fx + fc.gx).abs().max((fc.fy + fc.gy).abs()),
        proportionality_residual: (fc.fz - eta * fc.gz).abs(),
    }
}

/// Residuals for the drive produced by [`synthesize_controls`].
pub fn verify_parallel_transport(p: &PathPoint, eta: f64) -> TransportResiduals {
    let h = synthesize_controls(p, eta).pauli_vector();
    transport_residuals(&h, p, eta)
}

/// Geometric phase `½ ∫ (1 − cos θ) dφ` over the first `fraction` of a segment.
///
/// Segments of constant θ use the closed form; others use composite Simpson
/// with at least `n_quad` intervals.
pub fn segment_geometric_phase(seg: &PathSegment, fraction: f64, n_quad: usize) -> f64 {
    let dphi = seg.phi_end - seg.phi_start;
    match seg.kind {
        SegmentKind::Meridian => 0.0,
        SegmentKind::Arc => 0.5 * (1.0 - seg.theta_start.cos()) * dphi * fraction,
        SegmentKind::Parametric => {
            if dphi == 0.0 || fraction == 0.0 {
                return 0.0;
            }
            let n = n_quad.max(2).next_multiple_of(2);
            let dtheta = seg.theta_end - seg.theta_start;
            let integrand = |s: f64| 1.0 - (seg.theta_start + s * dtheta).cos();
            0.5 * dphi * simpson(integrand, 0.0, fraction, n)
        }
    }
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n)
        .map(|k| {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            w * f(a + k as f64 * h)
        })
        .sum();
    (f(a) + f(b) + inner) * h / 3.0
}

/// `γ_g = ½ ∮ (1 − cos θ) dφ` around a closed path, including the free phase
/// jumps at south-pole junctions.
pub fn geometric_phase(path: &ClosedPath, n_quad: usize) -> Result<f64> {
    if n_quad < MIN_QUAD_NODES {
        return Err(Error::InvalidArgument(format!("n_quad = {n_quad} is below the minimum of {MIN_QUAD_NODES}")));
    }
    if !closure_check(path) {
        return Err(Error::PathNotClosed("segments do not chain into a loop returning to the start".into()));
    }
    let segments: f64 = path.segments.iter().map(|s| segment_geometric_phase(s, 1.0, n_quad)).sum();
    let junctions: f64 = path.junctions().iter().map(|j| j.geometric_phase()).sum();
    Ok(segments + junctions)
}

pub fn total_phase(gamma_g: f64, eta: f64) -> Result<f64> {
    if eta == -1.0 {
        return Err(Error::TrivialEta);
    }
    Ok((1.0 + eta) * gamma_g)
}

/// `exp(−i γ n₀·σ)` with `n₀ = (sin θ₀ cos φ₀, sin θ₀ sin φ₀, cos θ₀)`.
pub fn target_unitary(theta0: f64, phi0: f64, gamma: f64) -> ComplexMatrix {
    let (st, ct) = theta0.sin_cos();
    let (sp, cp) = phi0.sin_cos();
    expm_su2(&PauliVector::traceless(gamma * st * cp, gamma * st * sp, gamma * ct))
}

/// Gate realized by a closed path: rotation axis from the start point, phase
/// `(1 + η) γ_g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateSpec {
    pub eta: f64,
    pub theta0: f64,
    pub phi0: f64,
    pub gamma_g: f64,
    pub gamma_total: f64,
}

impl GateSpec {
    pub fn new(eta: f64, theta0: f64, phi0: f64, gamma_g: f64) -> Result<Self> {
        Ok(Self { eta, theta0, phi0, gamma_g, gamma_total: total_phase(gamma_g, eta)? })
    }

    pub fn for_path(path: &ClosedPath, n_quad: usize) -> Result<Self> {
        let gamma_g = geometric_phase(path, n_quad)?;
        let start = path.start_point().ok_or_else(|| Error::PathNotClosed("empty path".into()))?;
        Self::new(path.eta, start.theta, start.phi, gamma_g)
    }

    pub fn target_unitary(&self) -> ComplexMatrix {
        target_unitary(self.theta0, self.phi0, self.gamma_total)
    }
}
