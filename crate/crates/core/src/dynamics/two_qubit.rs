//! Conditional gate on a target qubit whose transition is split by a control
//! spin. In the basis `{|1↑⟩, |0↑⟩, |1↓⟩, |0↓⟩}` the Hamiltonian is
//! `H↑ ⊕ H↓`: both blocks share the drive `(Ω, φ)` and differ in detuning by
//! `δω = Δ↑ − Δ↓`.

use super::{gate_distance_global_phase, step_grid};
use crate::algebra::{expm_su2, ComplexMatrix, PauliVector};
use crate::error::Result;
use crate::paths::PulseSchedule;

#[derive(Debug, Clone)]
pub struct TwoQubitControls {
    /// Designed single-qubit schedule; drives the spin-up block on resonance.
    pub shared: PulseSchedule,
    /// Splitting `δω` between the two blocks, in units of `Ω₀`.
    pub delta_omega: f64,
    /// Fraction of the shared drive amplitude seen by the spin-down block
    /// (1 for a common field, 0 for an undriven block).
    pub down_drive_scale: f64,
}

impl TwoQubitControls {
    pub fn new(shared: PulseSchedule, delta_omega: f64) -> Self {
        Self { shared, delta_omega, down_drive_scale: 1.0 }
    }

    fn up_vector(&self, segment: usize, local_t: f64) -> PauliVector {
        self.shared.control_in_segment(segment, local_t).pauli_vector()
    }

    fn down_vector(&self, segment: usize, local_t: f64) -> PauliVector {
        let up = self.up_vector(segment, local_t);
        PauliVector::traceless(
            self.down_drive_scale * up.cx,
            self.down_drive_scale * up.cy,
            0.5 * self.delta_down(2.0 * up.cz),
        )
    }

    /// Spin-down detuning for a given spin-up detuning.
    pub fn delta_down(&self, delta_up: f64) -> f64 {
        delta_up - self.delta_omega
    }

    /// `(Δ↑, Δ↓)` at time `t`.
    pub fn detunings_at(&self, t: f64) -> Result<(f64, f64)> {
        let up = self.shared.control_at(t)?.delta;
        Ok((up, self.delta_down(up)))
    }
}

#[derive(Debug, Clone)]
pub struct TwoQubitPropagation {
    pub propagator: ComplexMatrix,
    pub up_block: ComplexMatrix,
    pub down_block: ComplexMatrix,
    /// Phase-invariant distance of the spin-down block from the identity.
    pub leakage: f64,
}

/// Propagates each 2×2 block with midpoint SU(2) steps and returns their direct sum.
pub fn two_qubit_propagate(ctrl: &TwoQubitControls, dt: f64) -> Result<TwoQubitPropagation> {
    let schedule = &ctrl.shared;
    let mut up = ComplexMatrix::identity(2);
    let mut down = ComplexMatrix::identity(2);
    for s in step_grid(schedule, dt, schedule.total_time)? {
        let mid = s.local_start + 0.5 * s.h;
        up = expm_su2(&ctrl.up_vector(s.segment, mid).scaled(s.h)) * up;
        down = expm_su2(&ctrl.down_vector(s.segment, mid).scaled(s.h)) * down;
    }
    Ok(TwoQubitPropagation {
        propagator: ComplexMatrix::direct_sum(&up, &down)?,
        leakage: gate_distance_global_phase(&down, &ComplexMatrix::identity(2))?,
        up_block: up,
        down_block: down,
    })
}

/// `|↑⟩⟨↑| ⊗ U + |↓⟩⟨↓| ⊗ I`
pub fn controlled_gate(u: &ComplexMatrix) -> Result<ComplexMatrix> {
    ComplexMatrix::direct_sum(u, &ComplexMatrix::identity(2))
}
