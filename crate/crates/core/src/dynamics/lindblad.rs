use num_complex::Complex64 as C64;

use super::{step_grid, DensityMatrix};
use crate::algebra::{sigma_plus, sigma_z, ComplexMatrix};
use crate::error::{Error, Result};
use crate::paths::{DeviceLimits, PulseSchedule};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LindbladPoint {
    pub t: f64,
    pub rho: DensityMatrix,
}

#[derive(Debug, Clone)]
pub struct LindbladTrajectory {
    /// State after every step, starting with the initial state at `t = 0`.
    pub points: Vec<LindbladPoint>,
}

impl LindbladTrajectory {
    pub fn final_state(&self) -> &DensityMatrix {
        &self.points.last().expect("trajectory holds the initial state").rho
    }
}

/// `L(A)ρ = 2AρA† − A†Aρ − ρA†A`
fn dissipator(a: &ComplexMatrix, a_dag: &ComplexMatrix, a_dag_a: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    (*a * *rho * *a_dag).scale_real(2.0) - *a_dag_a * *rho - *rho * *a_dag_a
}

/// Right-hand side `ρ̇ = i[ρ, H] + ½[γ₁ L(σ⁺) + γ₂ L(σ_z)]`.
pub fn lindblad_rhs(rho: &ComplexMatrix, h: &ComplexMatrix, gamma1: f64, gamma2: f64) -> ComplexMatrix {
    let sp = sigma_plus();
    let sm = sp.adjoint();
    let sz = sigma_z();
    let unitary = rho.commutator(h).scale(C64::new(0.0, 1.0));
    let decay = dissipator(&sp, &sm, &(sm * sp), rho).scale_real(gamma1);
    let dephasing = dissipator(&sz, &sz, &ComplexMatrix::identity(2), rho).scale_real(gamma2);
    unitary + (decay + dephasing).scale_real(0.5)
}

/// Fixed-step RK4 integration of the master equation along a schedule, with
/// `γ₁`, `γ₂` taken from `limits` in units of `Ω₀`.
pub fn lindblad_evolve(
    schedule: &PulseSchedule,
    rho0: &DensityMatrix,
    limits: &DeviceLimits,
    dt: f64,
) -> Result<LindbladTrajectory> {
    limits.validate()?;
    let start = *rho0.matrix();
    if start.dim() != 2 {
        return Err(Error::InvalidState(format!("expected a single-qubit state, got dimension {}", start.dim())));
    }
    DensityMatrix::new(start)?;

    let (g1, g2) = (limits.gamma1, limits.gamma2);
    let hamiltonian =
        |segment: usize, local: f64| schedule.control_in_segment(segment, local).pauli_vector().assemble();

    let steps = step_grid(schedule, dt, schedule.total_time)?;
    let mut rho = start;
    let mut points = Vec::with_capacity(steps.len() + 1);
    points.push(LindbladPoint { t: 0.0, rho: DensityMatrix::unchecked(rho) });
    for s in &steps {
        let h0 = hamiltonian(s.segment, s.local_start);
        let hm = hamiltonian(s.segment, s.local_start + 0.5 * s.h);
        let h1 = hamiltonian(s.segment, s.local_start + s.h);
        let k1 = lindblad_rhs(&rho, &h0, g1, g2);
        let k2 = lindblad_rhs(&(rho + k1.scale_real(0.5 * s.h)), &hm, g1, g2);
        let k3 = lindblad_rhs(&(rho + k2.scale_real(0.5 * s.h)), &hm, g1, g2);
        let k4 = lindblad_rhs(&(rho + k3.scale_real(s.h)), &h1, g1, g2);
        rho += (k1 + k2.scale_real(2.0) + k3.scale_real(2.0) + k4).scale_real(s.h / 6.0);
        points.push(LindbladPoint { t: s.t_end, rho: DensityMatrix::unchecked(rho) });
    }
    Ok(LindbladTrajectory { points })
}
