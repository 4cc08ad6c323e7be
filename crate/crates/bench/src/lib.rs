//! Shared fixtures for the benchmarks.

use geogate_core::{schedule_square_wave, DeviceLimits, NamedPath, PulseSchedule, DEFAULT_SAMPLES_PER_SEGMENT};

/// Square-wave schedule of a named path on the reference device.
pub fn schedule(path: NamedPath) -> PulseSchedule {
    schedule_square_wave(&path.build(0.0), &DeviceLimits::nv_center(), DEFAULT_SAMPLES_PER_SEGMENT)
        .expect("named paths are feasible on the reference device")
}

/// Integration step for `steps_per_tau0` steps per `τ₀`.
pub fn step(steps_per_tau0: usize) -> f64 {
    DeviceLimits::nv_center().tau0() / steps_per_tau0 as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_consistent() {
        assert_eq!(schedule(NamedPath::OrangeSlice).total_time_tau0(), 2.0);
        assert!((step(10_000) - std::f64::consts::PI / 1e4).abs() < 1e-18);
    }
}
