//! Loops on the parameter sphere, square-wave scheduling under device limits,
//! and the apex-angle search over the conventional triangle family.
//!
//! Time is measured in units of `1/Ω₀` and frequencies in units of `Ω₀`, so
//! the π-pulse time is `τ₀ = π / omega_max`. The `*_tau0` accessors report
//! times in units of `τ₀`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::su2_design::{segment_geometric_phase, synthesize_controls, ControlPoint, PathPoint};

/// Samples per segment of an exported schedule.
pub const DEFAULT_SAMPLES_PER_SEGMENT: usize = 1000;

const ANGLE_TOL: f64 = 1e-12;
const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentKind {
    /// Constant φ.
    Meridian,
    /// Constant θ.
    Arc,
    /// θ and φ both linear in time.
    Parametric,
}

fn unit_duration() -> f64 {
    1.0
}

/// A piece of the loop traversed at constant `(θ̇, φ̇)`.
///
/// `duration` is a nominal timing; [`schedule_square_wave`] retimes every
/// segment to the fastest rate the device allows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathSegment {
    pub kind: SegmentKind,
    pub theta_start: f64,
    pub theta_end: f64,
    pub phi_start: f64,
    pub phi_end: f64,
    #[serde(default = "unit_duration")]
    pub duration: f64,
}

impl PathSegment {
    pub fn meridian(phi: f64, theta_start: f64, theta_end: f64) -> Result<Self> {
        Self::checked(SegmentKind::Meridian, theta_start, theta_end, phi, phi)
    }

    pub fn arc(theta: f64, phi_start: f64, phi_end: f64) -> Result<Self> {
        Self::checked(SegmentKind::Arc, theta, theta, phi_start, phi_end)
    }

    pub fn parametric(theta_start: f64, theta_end: f64, phi_start: f64, phi_end: f64) -> Result<Self> {
        Self::checked(SegmentKind::Parametric, theta_start, theta_end, phi_start, phi_end)
    }

    fn checked(kind: SegmentKind, theta_start: f64, theta_end: f64, phi_start: f64, phi_end: f64) -> Result<Self> {
        let seg = Self { kind, theta_start, theta_end, phi_start, phi_end, duration: 1.0 };
        seg.validate()?;
        Ok(seg)
    }

    pub fn with_duration(self, duration: f64) -> Result<Self> {
        let seg = Self { duration, ..self };
        seg.validate()?;
        Ok(seg)
    }

    pub fn validate(&self) -> Result<()> {
        let angles = [self.theta_start, self.theta_end, self.phi_start, self.phi_end];
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidSegment("non-finite angle".into()));
        }
        for theta in [self.theta_start, self.theta_end] {
            if !(-ANGLE_TOL..=PI + ANGLE_TOL).contains(&theta) {
                return Err(Error::InvalidSegment(format!("theta = {theta} outside [0, pi]")));
            }
        }
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return Err(Error::InvalidSegment(format!("duration {} must be positive", self.duration)));
        }
        match self.kind {
            SegmentKind::Meridian if self.phi_start != self.phi_end => {
                return Err(Error::InvalidSegment("meridian with varying phi".into()))
            }
            SegmentKind::Arc if self.theta_start != self.theta_end => {
                return Err(Error::InvalidSegment("arc with varying theta".into()))
            }
            _ => {}
        }
        if self.theta_start == self.theta_end && self.phi_start == self.phi_end {
            return Err(Error::InvalidSegment("zero-length segment".into()));
        }
        Ok(())
    }

    pub fn theta_rate(&self) -> f64 {
        (self.theta_end - self.theta_start) / self.duration
    }

    pub fn phi_rate(&self) -> f64 {
        (self.phi_end - self.phi_start) / self.duration
    }

    /// Path point `local_t` into the segment (clamped to `[0, duration]`).
    pub fn point_at(&self, local_t: f64) -> PathPoint {
        let s = (local_t / self.duration).clamp(0.0, 1.0);
        PathPoint::new(
            self.theta_start + s * (self.theta_end - self.theta_start),
            self.phi_start + s * (self.phi_end - self.phi_start),
            self.theta_rate(),
            self.phi_rate(),
        )
    }

    /// Same geometry traversed in unit time.
    fn unit_point(&self, s: f64) -> PathPoint {
        PathPoint::new(
            self.theta_start + s * (self.theta_end - self.theta_start),
            self.phi_start + s * (self.phi_end - self.phi_start),
            self.theta_end - self.theta_start,
            self.phi_end - self.phi_start,
        )
    }

    fn has_constant_controls(&self) -> bool {
        self.kind != SegmentKind::Parametric || self.theta_start == self.theta_end
    }
}

/// Where one segment hands over to the next (the last junction closes the loop).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Junction {
    pub after_segment: usize,
    pub theta_from: f64,
    pub theta_to: f64,
    pub phi_from: f64,
    pub phi_to: f64,
}

impl Junction {
    fn at_north_pole(&self) -> bool {
        self.theta_from.abs() < ANGLE_TOL && self.theta_to.abs() < ANGLE_TOL
    }

    fn at_south_pole(&self) -> bool {
        (self.theta_from - PI).abs() < ANGLE_TOL && (self.theta_to - PI).abs() < ANGLE_TOL
    }

    fn same_frame(&self) -> bool {
        let dphi = (self.phi_to - self.phi_from).rem_euclid(2.0 * PI);
        (self.theta_to - self.theta_from).abs() < ANGLE_TOL && (dphi < ANGLE_TOL || 2.0 * PI - dphi < ANGLE_TOL)
    }

    /// A φ jump at the south pole is an instantaneous, drive-free turn of the
    /// frame for η = 0; it contributes `½(1 − cos π) Δφ = Δφ` to the phase.
    pub fn geometric_phase(&self) -> f64 {
        if self.at_south_pole() && !self.same_frame() {
            self.phi_to - self.phi_from
        } else {
            0.0
        }
    }

    fn admissible(&self, eta: f64) -> bool {
        self.at_north_pole() || self.same_frame() || (self.at_south_pole() && eta == 0.0)
    }
}

/// An ordered chain of segments with the proportionality constant `η`.
///
/// Whether the chain actually closes is checked by [`closure_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedPath {
    pub eta: f64,
    pub segments: Vec<PathSegment>,
}

impl ClosedPath {
    pub fn new(segments: Vec<PathSegment>, eta: f64) -> Result<Self> {
        let path = Self { eta, segments };
        path.validate()?;
        Ok(path)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.eta.is_finite() {
            return Err(Error::InvalidArgument(format!("eta = {}", self.eta)));
        }
        self.segments.iter().try_for_each(PathSegment::validate)
    }

    pub fn start_point(&self) -> Option<PathPoint> {
        self.segments.first().map(|s| PathPoint::at_rest(s.theta_start, s.phi_start))
    }

    pub fn junctions(&self) -> Vec<Junction> {
        let n = self.segments.len();
        (0..n)
            .map(|i| {
                let (a, b) = (&self.segments[i], &self.segments[(i + 1) % n]);
                Junction {
                    after_segment: i,
                    theta_from: a.theta_end,
                    theta_to: b.theta_start,
                    phi_from: a.phi_end,
                    phi_to: b.phi_start,
                }
            })
            .collect()
    }
}

/// True when consecutive segments chain and the loop returns to its start
/// with `R(τ) = R(0)`. Any φ matches at the north pole, where `R = I`; at the
/// south pole a φ jump is accepted for `η = 0` only.
pub fn closure_check(path: &ClosedPath) -> bool {
    !path.segments.is_empty() && path.validate().is_ok() && path.junctions().iter().all(|j| j.admissible(path.eta))
}

/// One of the three loops that realize `U_Z = exp(−iπσ_z/2)` from the north pole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NamedPath {
    OrangeSlice,
    ConventionalTriangle,
    UnconventionalTriangle,
}

impl NamedPath {
    pub const ALL: [NamedPath; 3] =
        [NamedPath::OrangeSlice, NamedPath::ConventionalTriangle, NamedPath::UnconventionalTriangle];

    pub fn build(self, phi0: f64) -> ClosedPath {
        match self {
            NamedPath::OrangeSlice => orange_slice_path(phi0),
            NamedPath::ConventionalTriangle => conventional_triangle_path(phi0),
            NamedPath::UnconventionalTriangle => unconventional_triangle_path(phi0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NamedPath::OrangeSlice => "orange-slice",
            NamedPath::ConventionalTriangle => "conventional-triangle",
            NamedPath::UnconventionalTriangle => "unconventional-triangle",
        }
    }
}

impl fmt::Display for NamedPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedPath {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        NamedPath::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown path name '{s}'")))
    }
}

fn fixed(segments: Result<Vec<PathSegment>>, eta: f64) -> ClosedPath {
    ClosedPath::new(segments.expect("named path segments are valid"), eta).expect("named path is valid")
}

/// Pole to pole along `φ₀`, back along `φ₀ + π/2` (η = 0).
pub fn orange_slice_path(phi0: f64) -> ClosedPath {
    fixed(
        (|| Ok(vec![PathSegment::meridian(phi0, 0.0, PI)?, PathSegment::meridian(phi0 + FRAC_PI_2, PI, 0.0)?]))(),
        0.0,
    )
}

/// Pole → `(2π/3, φ₀)` → arc to `φ₀ + 2π/3` → pole (η = 0).
pub fn conventional_triangle_path(phi0: f64) -> ClosedPath {
    triangle(2.0 * PI / 3.0, phi0, 2.0 * PI / 3.0, 0.0)
}

/// Pole → equator → quarter turn along the equator → pole (η = 1).
pub fn unconventional_triangle_path(phi0: f64) -> ClosedPath {
    triangle(FRAC_PI_2, phi0, FRAC_PI_2, 1.0)
}

fn triangle(theta_c: f64, phi0: f64, span: f64, eta: f64) -> ClosedPath {
    fixed(
        (|| {
            Ok(vec![
                PathSegment::meridian(phi0, 0.0, theta_c)?,
                PathSegment::arc(theta_c, phi0, phi0 + span)?,
                PathSegment::meridian(phi0 + span, theta_c, 0.0)?,
            ])
        })(),
        eta,
    )
}

/// Conventional triangle with apex latitude `theta_c` whose arc spans
/// `Δφ = 2γ / (1 − cos θ_c)`, so that the geometric phase is `gamma_target`.
pub fn triangle_family_path(theta_c: f64, gamma_target: f64, phi0: f64) -> Result<ClosedPath> {
    if !(theta_c > 0.0 && theta_c < PI) {
        return Err(Error::InvalidArgument(format!("apex angle {theta_c} outside (0, pi)")));
    }
    let span = 2.0 * gamma_target / (1.0 - theta_c.cos());
    ClosedPath::new(
        vec![
            PathSegment::meridian(phi0, 0.0, theta_c)?,
            PathSegment::arc(theta_c, phi0, phi0 + span)?,
            PathSegment::meridian(phi0 + span, theta_c, 0.0)?,
        ],
        0.0,
    )
}

/// Drive limits, normalized so that `omega_max` is the frequency unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviceLimits {
    pub omega_max: f64,
    pub delta_max: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

impl DeviceLimits {
    pub fn new(omega_max: f64, delta_max: f64, gamma1: f64, gamma2: f64) -> Result<Self> {
        let limits = Self { omega_max, delta_max, gamma1, gamma2 };
        limits.validate()?;
        Ok(limits)
    }

    /// Ω₀ = Δ₀ = 20 MHz and γ₁ = γ₂ = 4×10⁴ Hz, i.e. γ/Ω₀ = 2×10⁻³.
    pub fn nv_center() -> Self {
        Self::from_physical(20e6, 20e6, 4e4, 4e4).expect("reference limits are valid")
    }

    /// Closed-system limits with `Ω₀ = Δ₀`.
    pub fn noiseless() -> Self {
        Self { omega_max: 1.0, delta_max: 1.0, gamma1: 0.0, gamma2: 0.0 }
    }

    /// Converts rates given in one consistent unit (all ordinary or all
    /// angular frequencies) into multiples of `omega0`.
    pub fn from_physical(omega0: f64, delta0: f64, gamma1: f64, gamma2: f64) -> Result<Self> {
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::InvalidArgument(format!("maximal Rabi frequency {omega0} must be positive")));
        }
        Self::new(1.0, delta0 / omega0, gamma1 / omega0, gamma2 / omega0)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| Err(Error::InvalidArgument(format!("{what} = {v}")));
        if !(self.omega_max.is_finite() && self.omega_max > 0.0) {
            return bad("omega_max", self.omega_max);
        }
        if self.delta_max.is_nan() || self.delta_max < 0.0 {
            return bad("delta_max", self.delta_max);
        }
        for (what, g) in [("gamma1", self.gamma1), ("gamma2", self.gamma2)] {
            if !(g.is_finite() && g >= 0.0) {
                return bad(what, g);
            }
        }
        Ok(())
    }

    /// π-pulse time `π / Ω₀`.
    pub fn tau0(&self) -> f64 {
        PI / self.omega_max
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseSample {
    pub t: f64,
    pub segment: usize,
    pub control: ControlPoint,
}

/// Square-wave drive for a closed path.
///
/// `path` holds the retimed segments. Times are in units of `1/Ω₀`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSchedule {
    pub path: ClosedPath,
    pub tau0: f64,
    pub segment_boundaries: Vec<f64>,
    pub total_time: f64,
    pub signed_areas: Vec<f64>,
    pub samples: Vec<PulseSample>,
}

impl PulseSchedule {
    pub fn eta(&self) -> f64 {
        self.path.eta
    }

    pub fn is_empty(&self) -> bool {
        self.path.segments.is_empty()
    }

    pub fn total_time_tau0(&self) -> f64 {
        self.total_time / self.tau0
    }

    /// Segment index and local time of `t`; a boundary belongs to the later segment.
    pub fn locate(&self, t: f64) -> Result<(usize, f64)> {
        if self.is_empty() || !(0.0..=self.total_time).contains(&t) {
            return Err(Error::TimeOutOfRange { t, total: self.total_time });
        }
        let n = self.path.segments.len();
        let idx = self.segment_boundaries[1..n].partition_point(|&b| b <= t);
        Ok((idx, t - self.segment_boundaries[idx]))
    }

    pub fn point_in_segment(&self, segment: usize, local_t: f64) -> PathPoint {
        self.path.segments[segment].point_at(local_t)
    }

    pub fn control_in_segment(&self, segment: usize, local_t: f64) -> ControlPoint {
        synthesize_controls(&self.point_in_segment(segment, local_t), self.eta())
    }

    pub fn point_at(&self, t: f64) -> Result<PathPoint> {
        let (i, local) = self.locate(t)?;
        Ok(self.point_in_segment(i, local))
    }

    pub fn control_at(&self, t: f64) -> Result<ControlPoint> {
        let (i, local) = self.locate(t)?;
        Ok(self.control_in_segment(i, local))
    }

    /// Running geometric phase `γ_g(t)`, including junction jumps passed so far.
    pub fn geometric_phase_until(&self, t: f64, n_quad: usize) -> Result<f64> {
        let (idx, local) = self.locate(t)?;
        let segs = &self.path.segments;
        let junctions = self.path.junctions();
        let mut phase: f64 = segs[..idx].iter().map(|s| segment_geometric_phase(s, 1.0, n_quad)).sum();
        phase += junctions[..idx].iter().map(Junction::geometric_phase).sum::<f64>();
        phase += segment_geometric_phase(&segs[idx], local / segs[idx].duration, n_quad);
        Ok(phase)
    }
}

/// Shortest duration for which `Ω_R ≤ Ω₀` and `|Δ| ≤ Δ₀` hold along the segment.
fn min_duration(seg: &PathSegment, index: usize, eta: f64, limits: &DeviceLimits, probes: usize) -> Result<f64> {
    // Controls scale as 1/duration; probe the geometry at unit duration.
    let nodes = if seg.has_constant_controls() { 1 } else { probes.max(2) };
    let (mut omega_peak, mut delta_peak) = (0.0f64, 0.0f64);
    for k in 0..=nodes {
        let c = synthesize_controls(&seg.unit_point(k as f64 / nodes as f64), eta);
        omega_peak = omega_peak.max(c.omega_r);
        delta_peak = delta_peak.max(c.delta.abs());
    }
    let by_omega = omega_peak / limits.omega_max;
    let by_delta = if delta_peak == 0.0 {
        0.0
    } else if limits.delta_max == 0.0 {
        return Err(Error::InfeasibleSegment {
            index,
            reason: "segment needs detuning but the detuning limit is zero".into(),
        });
    } else {
        delta_peak / limits.delta_max
    };
    let duration = by_omega.max(by_delta);
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(Error::InfeasibleSegment {
            index,
            reason: format!("no finite positive duration (Rabi peak {omega_peak:.3e}, detuning peak {delta_peak:.3e})"),
        });
    }
    Ok(duration)
}

fn signed_area(seg: &PathSegment, eta: f64, n: usize) -> f64 {
    let sign = f64::from(synthesize_controls(&seg.unit_point(0.0), eta).signed_direction);
    // ∫Ω dt is independent of the traversal time.
    let omega = |s: f64| synthesize_controls(&seg.unit_point(s), eta).omega_r;
    if seg.has_constant_controls() {
        return sign * omega(0.0);
    }
    let n = n.max(2).next_multiple_of(2);
    let h = 1.0 / n as f64;
    let inner: f64 = (1..n).map(|k| if k % 2 == 1 { 4.0 } else { 2.0 } * omega(k as f64 * h)).sum();
    sign * (omega(0.0) + omega(1.0) + inner) * h / 3.0
}

/// Segment durations at the binding drive limit.
pub fn square_wave_durations(path: &ClosedPath, limits: &DeviceLimits, probes: usize) -> Result<Vec<f64>> {
    limits.validate()?;
    if !closure_check(path) {
        return Err(Error::PathNotClosed("segments do not form a closed loop".into()));
    }
    path.segments.iter().enumerate().map(|(i, s)| min_duration(s, i, path.eta, limits, probes)).collect()
}

/// Runs every segment at the largest constant rate allowed by the Rabi and
/// detuning limits, whichever binds first.
pub fn schedule_square_wave(
    path: &ClosedPath,
    limits: &DeviceLimits,
    n_samples_per_segment: usize,
) -> Result<PulseSchedule> {
    if n_samples_per_segment == 0 {
        return Err(Error::InvalidArgument("at least one sample per segment is required".into()));
    }
    let durations = square_wave_durations(path, limits, n_samples_per_segment)?;
    let segments =
        path.segments.iter().zip(&durations).map(|(s, &d)| s.with_duration(d)).collect::<Result<Vec<_>>>()?;
    let retimed = ClosedPath { eta: path.eta, segments };

    let mut boundaries = Vec::with_capacity(durations.len() + 1);
    let mut t = 0.0;
    boundaries.push(t);
    for d in &durations {
        t += d;
        boundaries.push(t);
    }
    let total_time = t;

    let mut schedule = PulseSchedule {
        signed_areas: retimed.segments.iter().map(|s| signed_area(s, path.eta, n_samples_per_segment)).collect(),
        path: retimed,
        tau0: limits.tau0(),
        segment_boundaries: boundaries,
        total_time,
        samples: Vec::with_capacity(durations.len() * n_samples_per_segment + 1),
    };
    for (i, d) in durations.iter().enumerate() {
        let t0 = schedule.segment_boundaries[i];
        for k in 0..n_samples_per_segment {
            let local = d * k as f64 / n_samples_per_segment as f64;
            let control = schedule.control_in_segment(i, local);
            schedule.samples.push(PulseSample { t: t0 + local, segment: i, control });
        }
    }
    let last = durations.len() - 1;
    let control = schedule.control_in_segment(last, durations[last]);
    schedule.samples.push(PulseSample { t: total_time, segment: last, control });
    Ok(schedule)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub theta_c: f64,
    pub total_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangleOptimum {
    pub theta_c: f64,
    /// In units of `1/Ω₀`.
    pub total_time: f64,
    pub tau0: f64,
    /// Feasible grid points of the coarse scan.
    pub scan: Vec<ScanPoint>,
}

impl TriangleOptimum {
    pub fn total_time_tau0(&self) -> f64 {
        self.total_time / self.tau0
    }
}

const SCAN_POINTS: usize = 4096;
const SCAN_EDGE: f64 = 1e-4;

fn family_time(theta_c: f64, gamma_target: f64, limits: &DeviceLimits) -> Option<f64> {
    let path = triangle_family_path(theta_c, gamma_target, 0.0).ok()?;
    square_wave_durations(&path, limits, 1).ok().map(|d| d.iter().sum())
}

/// Searches the apex angle of the conventional triangle family for the
/// shortest square-wave gate with geometric phase `gamma_target`.
///
/// A uniform scan over `θ_c ∈ (0, π)` is refined by golden-section search
/// around the best grid point. Ties within 1e-9 go to the smaller angle.
pub fn optimize_conventional_triangle(limits: &DeviceLimits, gamma_target: f64) -> Result<TriangleOptimum> {
    limits.validate()?;
    if !(gamma_target > 0.0 && gamma_target < 2.0 * PI) {
        return Err(Error::InvalidArgument(format!("target phase {gamma_target} outside (0, 2pi)")));
    }
    let step = (PI - 2.0 * SCAN_EDGE) / (SCAN_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..SCAN_POINTS).map(|k| SCAN_EDGE + k as f64 * step).collect();
    let scan: Vec<ScanPoint> = grid
        .iter()
        .filter_map(|&theta_c| {
            family_time(theta_c, gamma_target, limits).map(|total_time| ScanPoint { theta_c, total_time })
        })
        .collect();

    let mut best: Option<ScanPoint> = None;
    for p in &scan {
        if best.is_none_or(|b| p.total_time < b.total_time - TIE_TOL) {
            best = Some(*p);
        }
    }
    let Some(coarse) = best else {
        return Err(Error::InfeasibleTarget(format!(
            "no apex angle gives a feasible schedule for gamma = {gamma_target}"
        )));
    };

    let lo = (coarse.theta_c - step).max(SCAN_EDGE);
    let hi = (coarse.theta_c + step).min(PI - SCAN_EDGE);
    let objective = |x: f64| family_time(x, gamma_target, limits).unwrap_or(f64::INFINITY);
    let x = golden_section(objective, lo, hi, 1e-12);
    let refined = ScanPoint { theta_c: x, total_time: objective(x) };
    let optimum = if refined.total_time < coarse.total_time - TIE_TOL { refined } else { coarse };

    Ok(TriangleOptimum { theta_c: optimum.theta_c, total_time: optimum.total_time, tau0: limits.tau0(), scan })
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su2_design::geometric_phase;
    use proptest::prelude::*;

    const LIMITS: DeviceLimits = DeviceLimits { omega_max: 1.0, delta_max: 1.0, gamma1: 0.0, gamma2: 0.0 };

    #[test]
    fn orange_slice_layout() {
        let p = orange_slice_path(0.0);
        assert_eq!(p.segments.len(), 2);
        assert_eq!((p.segments[0].theta_start, p.segments[0].theta_end, p.segments[0].phi_start), (0.0, PI, 0.0));
        assert_eq!((p.segments[1].theta_start, p.segments[1].theta_end, p.segments[1].phi_start), (PI, 0.0, FRAC_PI_2));
        assert!(closure_check(&p));
        assert!((geometric_phase(&p, 200).unwrap() - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn orange_slice_phase_independent_of_axis_offset() {
        for phi0 in [0.0, 0.3, -2.0, 5.5] {
            let g = geometric_phase(&orange_slice_path(phi0), 200).unwrap();
            assert!((g - FRAC_PI_2).abs() < 1e-14);
        }
    }

    #[test]
    fn orange_slice_is_resonant() {
        let s = schedule_square_wave(&orange_slice_path(0.0), &LIMITS, 50).unwrap();
        assert!(s.samples.iter().all(|p| p.control.delta == 0.0));
    }

    #[test]
    fn closure_examples() {
        let open = ClosedPath::new(vec![PathSegment::meridian(0.0, 0.0, FRAC_PI_2).unwrap()], 0.0).unwrap();
        assert!(!closure_check(&open));
        let mismatched = ClosedPath::new(
            vec![
                PathSegment::meridian(0.0, 0.0, 1.0).unwrap(),
                PathSegment::arc(1.0, 0.0, 1.0).unwrap(),
                PathSegment::meridian(1.2, 1.0, 0.0).unwrap(),
            ],
            0.0,
        )
        .unwrap();
        assert!(!closure_check(&mismatched));
        assert!(!closure_check(&ClosedPath { eta: 0.0, segments: vec![] }));
        assert!(matches!(geometric_phase(&mismatched, 200), Err(Error::PathNotClosed(_))));
    }

    #[test]
    fn south_pole_jump_requires_conventional_eta() {
        let mut p = orange_slice_path(0.0);
        p.eta = 1.0;
        assert!(!closure_check(&p));
    }

    #[test]
    fn segment_validation() {
        assert!(PathSegment::meridian(0.0, 0.0, 4.0).is_err());
        assert!(PathSegment::arc(1.0, 0.5, 0.5).is_err());
        assert!(PathSegment::arc(1.0, 0.0, 1.0).unwrap().with_duration(0.0).is_err());
        let bad = PathSegment {
            kind: SegmentKind::Meridian,
            theta_start: 0.0,
            theta_end: 1.0,
            phi_start: 0.0,
            phi_end: 0.1,
            duration: 1.0,
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn square_wave_timings() {
        let t = |p: ClosedPath| schedule_square_wave(&p, &LIMITS, 10).unwrap().total_time_tau0();
        assert_eq!(t(orange_slice_path(0.0)), 2.0);
        assert!((t(conventional_triangle_path(0.0)) - 11.0 / 6.0).abs() < 1e-14);
        assert!((t(unconventional_triangle_path(0.0)) - 1.5).abs() < 1e-14);
    }

    #[test]
    fn triangle_arc_is_detuning_bound() {
        let s = schedule_square_wave(&conventional_triangle_path(0.0), &LIMITS, 10).unwrap();
        let arc = s.control_in_segment(1, 0.0);
        assert!((arc.delta - 1.0).abs() < 1e-14);
        assert!(arc.omega_r < 0.6);
        assert!((s.path.segments[1].phi_rate() - 4.0 / 3.0).abs() < 1e-14);
        let m = s.control_in_segment(0, 0.1);
        assert_eq!(m.delta, 0.0);
        assert!((m.omega_r - 1.0).abs() < 1e-15);
    }

    #[test]
    fn signed_areas_of_named_paths() {
        let areas = |p: ClosedPath| schedule_square_wave(&p, &LIMITS, 10).unwrap().signed_areas;
        let want = [
            vec![PI, -PI],
            vec![2.0 * PI / 3.0, 3f64.sqrt() * PI / 6.0, -2.0 * PI / 3.0],
            vec![FRAC_PI_2, FRAC_PI_2, -FRAC_PI_2],
        ];
        for (named, w) in NamedPath::ALL.into_iter().zip(want) {
            let got = areas(named.build(0.0));
            assert_eq!(got.len(), w.len());
            for (g, w) in got.iter().zip(&w) {
                assert!((g - w).abs() < 1e-9, "{named}: {g} vs {w}");
            }
        }
    }

    #[test]
    fn zero_detuning_limit_is_infeasible_for_arcs() {
        let limits = DeviceLimits { delta_max: 0.0, ..LIMITS };
        let err = schedule_square_wave(&conventional_triangle_path(0.0), &limits, 10).unwrap_err();
        assert!(matches!(err, Error::InfeasibleSegment { index: 1, .. }));
        // meridians alone need no detuning
        assert!(schedule_square_wave(&orange_slice_path(0.0), &limits, 10).is_ok());
        assert!(matches!(optimize_conventional_triangle(&limits, FRAC_PI_2), Err(Error::InfeasibleTarget(_))));
    }

    #[test]
    fn schedule_sampling_layout() {
        let s = schedule_square_wave(&unconventional_triangle_path(0.0), &LIMITS, 100).unwrap();
        assert_eq!(s.samples.len(), 301);
        assert!(s.samples.windows(2).all(|w| w[1].t > w[0].t));
        assert_eq!(s.samples.last().unwrap().t, s.total_time);
        let sum: f64 = s.path.segments.iter().map(|x| x.duration).sum();
        assert!((sum - s.total_time).abs() < 1e-15);
        assert_eq!(s.locate(s.segment_boundaries[1]).unwrap().0, 1);
        assert_eq!(s.locate(s.total_time).unwrap().0, 2);
        assert!(s.locate(s.total_time + 1e-9).is_err());
    }

    #[test]
    fn running_phase_reaches_loop_value() {
        let s = schedule_square_wave(&orange_slice_path(0.0), &LIMITS, 10).unwrap();
        let before = s.geometric_phase_until(s.segment_boundaries[1] - 1e-12, 200).unwrap();
        let after = s.geometric_phase_until(s.segment_boundaries[1], 200).unwrap();
        assert_eq!(before, 0.0);
        assert!((after - FRAC_PI_2).abs() < 1e-15);
        let end = s.geometric_phase_until(s.total_time, 200).unwrap();
        assert!((end - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn parametric_segments_are_scheduled_within_limits() {
        let path = ClosedPath::new(
            vec![
                PathSegment::meridian(0.0, 0.0, 1.0).unwrap(),
                PathSegment::parametric(1.0, 2.0, 0.0, 1.5).unwrap(),
                PathSegment::meridian(1.5, 2.0, 0.0).unwrap(),
            ],
            0.4,
        )
        .unwrap();
        let s = schedule_square_wave(&path, &LIMITS, 400).unwrap();
        for p in &s.samples {
            assert!(p.control.omega_r <= 1.0 + 1e-12);
            assert!(p.control.delta.abs() <= 1.0 + 1e-12);
        }
        assert!(geometric_phase(&path, 200).unwrap() > 0.0);
    }

    /// Closed-form family time for η = 0 with Ω₀ = 1.
    fn family_oracle(theta: f64, gamma: f64, delta_max: f64) -> f64 {
        let span = 2.0 * gamma / (1.0 - theta.cos());
        let (s, c) = theta.sin_cos();
        2.0 * theta + span * (s * c.abs()).max(s * s / delta_max)
    }

    #[test]
    fn optimizer_matches_brute_force_scan() {
        let opt = optimize_conventional_triangle(&LIMITS, FRAC_PI_2).unwrap();
        let (mut best_t, mut best_theta) = (f64::INFINITY, 0.0);
        for k in 0..10_000 {
            let theta = PI * (0.01 + 0.98 * k as f64 / 9_999.0);
            let t = family_oracle(theta, FRAC_PI_2, 1.0);
            if t < best_t {
                (best_t, best_theta) = (t, theta);
            }
        }
        assert!((best_theta - 0.75 * PI).abs() < 1e-3);
        assert!((opt.theta_c - 0.75 * PI).abs() < 1e-6, "theta_c = {}", opt.theta_c);
        assert!(opt.total_time <= best_t + 1e-12);
        assert!((opt.total_time - best_t).abs() < 1e-3);
        assert!((opt.total_time_tau0() - 1.7929).abs() < 1e-3);
    }

    #[test]
    fn optimizer_without_detuning_limit_is_finite() {
        let limits = DeviceLimits { delta_max: f64::INFINITY, ..LIMITS };
        let opt = optimize_conventional_triangle(&limits, FRAC_PI_2).unwrap();
        assert!(opt.theta_c.is_finite() && opt.total_time.is_finite());
        assert!(opt.total_time_tau0() < 1.7928);
    }

    #[test]
    fn optimizer_vanishing_loop() {
        let small = optimize_conventional_triangle(&LIMITS, 1e-6).unwrap();
        assert!(small.total_time_tau0() < 0.01);
        let larger = optimize_conventional_triangle(&LIMITS, PI).unwrap();
        assert!(larger.total_time > optimize_conventional_triangle(&LIMITS, FRAC_PI_2).unwrap().total_time);
        assert!(optimize_conventional_triangle(&LIMITS, 0.0).is_err());
    }

    #[test]
    fn named_path_names_round_trip() {
        for p in NamedPath::ALL {
            assert_eq!(p.name().parse::<NamedPath>().unwrap(), p);
        }
        assert!("square".parse::<NamedPath>().is_err());
    }

    #[test]
    fn physical_and_normalized_limits_agree() {
        let a = DeviceLimits::from_physical(20e6, 20e6, 4e4, 4e4).unwrap();
        let b = DeviceLimits::new(1.0, 1.0, 2e-3, 2e-3).unwrap();
        assert_eq!(a, b);
        assert_eq!(DeviceLimits::nv_center(), b);
        assert!(DeviceLimits::new(1.0, -1.0, 0.0, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn phase_is_reparametrization_invariant(
            theta_c in 0.2..3.0f64,
            span in 0.1..3.0f64,
            scales in proptest::array::uniform3(0.1..10.0f64),
        ) {
            let base = ClosedPath::new(vec![
                PathSegment::meridian(0.0, 0.0, theta_c).unwrap(),
                PathSegment::parametric(theta_c, theta_c * 0.5, 0.0, span).unwrap(),
                PathSegment::meridian(span, theta_c * 0.5, 0.0).unwrap(),
            ], 0.0).unwrap();
            let mut stretched = base.clone();
            for (s, k) in stretched.segments.iter_mut().zip(scales) {
                s.duration *= k;
            }
            let a = geometric_phase(&base, 200).unwrap();
            let b = geometric_phase(&stretched, 200).unwrap();
            prop_assert!((a - b).abs() < 1e-10);
        }

        #[test]
        fn cap_loop_obeys_solid_angle_law(theta_c in 0.05..3.1f64, span in 0.05..6.2f64, eta in -0.9..2.0f64) {
            let path = ClosedPath::new(vec![
                PathSegment::meridian(0.0, 0.0, theta_c).unwrap(),
                PathSegment::arc(theta_c, 0.0, span).unwrap(),
                PathSegment::meridian(span, theta_c, 0.0).unwrap(),
            ], eta).unwrap();
            let g = geometric_phase(&path, 100).unwrap();
            prop_assert!((g - 0.5 * (1.0 - theta_c.cos()) * span).abs() < 1e-10);
        }

        #[test]
        fn schedules_respect_limits(theta_c in 0.1..3.0f64, gamma in 0.1..3.0f64, delta_max in 0.2..3.0f64) {
            let limits = DeviceLimits { delta_max, ..LIMITS };
            let s = schedule_square_wave(&triangle_family_path(theta_c, gamma, 0.0).unwrap(), &limits, 20).unwrap();
            for p in &s.samples {
                prop_assert!(p.control.omega_r <= limits.omega_max * (1.0 + 1e-12));
                prop_assert!(p.control.delta.abs() <= limits.delta_max * (1.0 + 1e-12));
            }
        }

        #[test]
        fn optimum_never_slower_than_reference(delta_max in 0.3..3.0f64) {
            let limits = DeviceLimits { delta_max, ..LIMITS };
            let reference = schedule_square_wave(&conventional_triangle_path(0.0), &limits, 2).unwrap();
            let opt = optimize_conventional_triangle(&limits, FRAC_PI_2).unwrap();
            prop_assert!(opt.total_time <= reference.total_time + 1e-12);
        }
    }
}
