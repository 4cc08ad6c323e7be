use super::step_grid;
use crate::algebra::{expm_su2, ComplexMatrix, PauliVector};
use crate::error::{Error, Result};
use crate::paths::PulseSchedule;
use crate::su2_design::rotation_matrix;
use crate::DEFAULT_QUAD_NODES;

#[derive(Debug, Clone)]
pub struct UnitaryPropagation {
    pub final_unitary: ComplexMatrix,
    /// `(t, U(t))` after every step, starting with `(0, I)`.
    pub trajectory: Vec<(f64, ComplexMatrix)>,
    /// Set when the schedule had no segments and the identity was returned.
    pub empty_schedule: bool,
}

/// Time-ordered product of closed-form SU(2) steps using the midpoint
/// Hamiltonian of each step.
pub fn propagate_unitary(schedule: &PulseSchedule, dt: f64) -> Result<UnitaryPropagation> {
    propagate_until(schedule, schedule.total_time, dt)
}

/// As [`propagate_unitary`], stopping at `t`.
pub fn propagate_until(schedule: &PulseSchedule, t: f64, dt: f64) -> Result<UnitaryPropagation> {
    let identity = ComplexMatrix::identity(2);
    if schedule.is_empty() {
        return Ok(UnitaryPropagation {
            final_unitary: identity,
            trajectory: vec![(0.0, identity)],
            empty_schedule: true,
        });
    }
    if !(0.0..=schedule.total_time).contains(&t) {
        return Err(Error::TimeOutOfRange { t, total: schedule.total_time });
    }
    let steps = step_grid(schedule, dt, t)?;
    let mut u = identity;
    let mut trajectory = Vec::with_capacity(steps.len() + 1);
    trajectory.push((0.0, u));
    for s in &steps {
        let c = schedule.control_in_segment(s.segment, s.local_start + 0.5 * s.h);
        u = expm_su2(&c.pauli_vector().scaled(s.h)) * u;
        trajectory.push((s.t_end, u));
    }
    Ok(UnitaryPropagation { final_unitary: u, trajectory, empty_schedule: false })
}

/// Closed-form evolution `R(θ_t, φ_t) e^{−iγ(t)σ_z} R†(θ₀, φ₀)` with
/// `γ(t) = (1 + η) γ_g(t)`.
pub fn designed_unitary(schedule: &PulseSchedule, t: f64) -> Result<ComplexMatrix> {
    let p = schedule.point_at(t)?;
    let start = schedule.path.start_point().expect("non-empty schedule");
    let gamma = (1.0 + schedule.eta()) * schedule.geometric_phase_until(t, DEFAULT_QUAD_NODES)?;
    let frame = expm_su2(&PauliVector::traceless(0.0, 0.0, gamma));
    Ok(rotation_matrix(p.theta, p.phi) * frame * rotation_matrix(start.theta, start.phi).adjoint())
}

/// Frobenius distance between the propagated `U₀(t)` and [`designed_unitary`].
pub fn oracle_designed_evolution(schedule: &PulseSchedule, t: f64, dt: f64) -> Result<f64> {
    schedule.locate(t)?;
    let propagated = propagate_until(schedule, t, dt)?.final_unitary;
    Ok((propagated - designed_unitary(schedule, t)?).frobenius_norm())
}
