//! Geometric single-qubit gates by inverse engineering through SU(2) frames.
//!
//! A closed loop `(θ(t), φ(t))` on the parameter sphere and a constant `η`
//! determine a two-level drive `(Ω_R, φ, Δ)` whose evolution is the rotation
//! `exp(−i (1 + η) γ_g n₀·σ)`. [`paths`] builds loops and square-wave
//! schedules, [`su2_design`] holds the frame algebra, and [`dynamics`]
//! propagates schedules in closed and open systems.

pub mod algebra;
pub mod dynamics;
pub mod error;
pub mod paths;
pub mod su2_design;

pub use algebra::{check_density, expm_su2, pauli_decompose, ComplexMatrix, DensityDiagnostics, PauliVector};
pub use dynamics::{
    controlled_gate, gate_distance_global_phase, hamiltonian_at, lindblad_evolve, oracle_designed_evolution,
    propagate_unitary, state_fidelity, two_qubit_propagate, DensityMatrix, LindbladTrajectory, QubitState,
    TwoQubitControls, TwoQubitPropagation, UnitaryPropagation,
};
pub use error::{Error, Result};
pub use paths::{
    closure_check, conventional_triangle_path, optimize_conventional_triangle, orange_slice_path, schedule_square_wave,
    unconventional_triangle_path, ClosedPath, DeviceLimits, NamedPath, PathSegment, PulseSample, PulseSchedule,
    SegmentKind, TriangleOptimum, DEFAULT_SAMPLES_PER_SEGMENT,
};
pub use su2_design::{
    frame_coefficients, geometric_phase, rotation_matrix, synthesize_controls, target_unitary, total_phase,
    verify_parallel_transport, ControlPoint, FrameCoefficients, GateSpec, PathPoint, TransportResiduals,
};

/// Quadrature nodes per segment used by the convenience entry points.
pub const DEFAULT_QUAD_NODES: usize = 200;

/// Default integration steps per `τ₀`.
pub const DEFAULT_STEPS_PER_TAU0: usize = 10_000;
