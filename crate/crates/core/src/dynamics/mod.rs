//! Closed- and open-system propagation of pulse schedules.
//!
//! Matrices use the basis `(|1⟩, |0⟩)`: index 0 is `|1⟩`, so that
//! `σ_z = |1⟩⟨1| − |0⟩⟨0| = diag(1, −1)` and `σ⁺ = |1⟩⟨0|` is the usual
//! upper-triangular raising matrix.

mod lindblad;
mod two_qubit;
mod unitary;

pub use lindblad::{lindblad_evolve, lindblad_rhs, LindbladPoint, LindbladTrajectory};
pub use two_qubit::{controlled_gate, two_qubit_propagate, TwoQubitControls, TwoQubitPropagation};
pub use unitary::{
    designed_unitary, oracle_designed_evolution, propagate_unitary, propagate_until, UnitaryPropagation,
};

use num_complex::Complex64 as C64;

use crate::algebra::{check_density, ComplexMatrix, DensityDiagnostics};
use crate::error::{Error, Result};
use crate::paths::PulseSchedule;
use crate::su2_design::ControlPoint;

/// Tolerance on trace, hermiticity and positivity of accepted density matrices.
pub const DENSITY_TOL: f64 = 1e-9;
const NORM_TOL: f64 = 1e-10;

/// `½[[Δ, Ω e^{−iφ}], [Ω e^{iφ}, −Δ]]`
pub fn hamiltonian_at(c: &ControlPoint) -> ComplexMatrix {
    c.pauli_vector().assemble()
}

/// Normalized single-qubit state vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    amplitudes: [C64; 2],
}

impl QubitState {
    pub fn new(amplitudes: [C64; 2]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("state norm {norm} is not 1")));
        }
        Ok(Self { amplitudes })
    }

    /// `|1⟩`, basis index 0.
    pub fn one() -> Self {
        Self { amplitudes: [C64::new(1.0, 0.0), C64::new(0.0, 0.0)] }
    }

    /// `|0⟩`, basis index 1.
    pub fn zero() -> Self {
        Self { amplitudes: [C64::new(0.0, 0.0), C64::new(1.0, 0.0)] }
    }

    /// `(|0⟩ + |1⟩)/√2`
    pub fn plus() -> Self {
        let a = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self { amplitudes: [a, a] }
    }

    pub fn amplitudes(&self) -> [C64; 2] {
        self.amplitudes
    }

    pub fn apply(&self, u: &ComplexMatrix) -> Self {
        let [a, b] = self.amplitudes;
        Self { amplitudes: [u[(0, 0)] * a + u[(0, 1)] * b, u[(1, 0)] * a + u[(1, 1)] * b] }
    }

    pub fn projector(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                m[(i, j)] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        m
    }
}

/// Density matrix of dimension 2 or 4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let d = check_density(&matrix);
        if !d.is_valid(DENSITY_TOL) {
            return Err(Error::InvalidState(format!(
                "trace error {:.2e}, hermiticity error {:.2e}, min eigenvalue {:.2e}",
                d.trace_error, d.hermiticity_error, d.min_eigenvalue
            )));
        }
        Ok(Self(matrix))
    }

    pub fn from_pure(state: &QubitState) -> Self {
        Self(state.projector())
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    pub(crate) fn unchecked(matrix: ComplexMatrix) -> Self {
        Self(matrix)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn diagnostics(&self) -> DensityDiagnostics {
        check_density(&self.0)
    }

    /// Population of `|0⟩` (basis index 1).
    pub fn population_zero(&self) -> f64 {
        self.0[(1, 1)].re
    }

    /// Population of `|1⟩` (basis index 0).
    pub fn population_one(&self) -> f64 {
        self.0[(0, 0)].re
    }
}

/// `F = ⟨ψ|ρ|ψ⟩`, clipped to `[0, 1]`.
pub fn state_fidelity(rho: &DensityMatrix, target: &QubitState) -> f64 {
    let m = rho.matrix();
    let psi = target.amplitudes();
    let mut f = C64::new(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            f += psi[i].conj() * m[(i, j)] * psi[j];
        }
    }
    f.re.clamp(0.0, 1.0)
}

/// `1 − |tr(u†v)| / dim`; zero exactly when `u = e^{iα} v`.
pub fn gate_distance_global_phase(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch { left: u.dim(), right: v.dim() });
    }
    let overlap = (u.adjoint() * *v).trace().norm() / u.dim() as f64;
    Ok((1.0 - overlap).max(0.0))
}

/// Integration step within one segment.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Step {
    pub segment: usize,
    pub local_start: f64,
    pub h: f64,
    pub t_end: f64,
}

/// Fixed steps of at most `dt` aligned to segment boundaries, up to `t_stop`.
pub(crate) fn step_grid(schedule: &PulseSchedule, dt: f64, t_stop: f64) -> Result<Vec<Step>> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidArgument(format!("time step {dt} must be positive")));
    }
    let mut steps = Vec::new();
    for (i, seg) in schedule.path.segments.iter().enumerate() {
        let t0 = schedule.segment_boundaries[i];
        let span = (t_stop - t0).min(seg.duration);
        if span <= 0.0 {
            break;
        }
        let n = ((span / dt) - 1e-9).ceil().max(1.0) as usize;
        let h = span / n as f64;
        steps.extend((0..n).map(|k| Step {
            segment: i,
            local_start: k as f64 * h,
            h,
            t_end: if k + 1 == n { t0 + span } else { t0 + (k + 1) as f64 * h },
        }));
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{sigma_x, sigma_y, sigma_z};
    use std::f64::consts::FRAC_PI_2;

    fn control(omega_r: f64, phi_pulse: f64, delta: f64) -> ControlPoint {
        ControlPoint { omega_r, phi_pulse, delta, signed_direction: 1 }
    }

    #[test]
    fn hamiltonian_examples() {
        assert!((hamiltonian_at(&control(0.0, 0.0, 2.0)) - sigma_z()).max_abs() < 1e-15);
        assert!((hamiltonian_at(&control(2.0, 0.0, 0.0)) - sigma_x()).max_abs() < 1e-15);
        assert!((hamiltonian_at(&control(2.0, FRAC_PI_2, 0.0)) - sigma_y()).max_abs() < 1e-15);
        let h = hamiltonian_at(&control(0.7, 1.3, -0.4));
        assert!(h.hermiticity_error() < 1e-16 && h.trace().norm() < 1e-16);
    }

    #[test]
    fn fidelity_examples() {
        let plus = QubitState::plus();
        assert!((state_fidelity(&DensityMatrix::from_pure(&plus), &plus) - 1.0).abs() < 1e-15);
        let one = DensityMatrix::from_pure(&QubitState::one());
        assert_eq!(state_fidelity(&one, &QubitState::zero()), 0.0);
        assert!((state_fidelity(&DensityMatrix::maximally_mixed(2), &plus) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn distance_examples() {
        let u = crate::expm_su2(&crate::PauliVector::traceless(0.3, -0.2, 0.9));
        assert!(gate_distance_global_phase(&u, &u).unwrap() < 1e-15);
        let shifted = u.scale(C64::from_polar(1.0, 0.77));
        assert!(gate_distance_global_phase(&u, &shifted).unwrap() < 1e-15);
        assert!(gate_distance_global_phase(&shifted, &u).unwrap() < 1e-15);
        let id = ComplexMatrix::identity(2);
        assert!((gate_distance_global_phase(&id, &sigma_x()).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            gate_distance_global_phase(&id, &ComplexMatrix::identity(4)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn state_validation() {
        assert!(QubitState::new([C64::new(1.0, 0.0), C64::new(1.0, 0.0)]).is_err());
        let bad = ComplexMatrix::diagonal(&[C64::new(1.1, 0.0), C64::new(-0.1, 0.0)]).unwrap();
        assert!(matches!(DensityMatrix::new(bad), Err(Error::InvalidState(_))));
        assert!(DensityMatrix::new(QubitState::plus().projector()).is_ok());
    }

    #[test]
    fn populations_follow_basis_order() {
        let rho = DensityMatrix::from_pure(&QubitState::zero());
        assert_eq!((rho.population_zero(), rho.population_one()), (1.0, 0.0));
    }
}
