//! Dense complex matrices for one and two qubits.
//!
//! Everything in this crate lives in a Hilbert space of dimension 2 or 4, so
//! [`ComplexMatrix`] keeps its entries inline (row-major, at most 16) and is
//! `Copy`. Only the handful of operations the solvers need are provided.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::Matrix4;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Absolute entrywise tolerance for hermiticity of analytically Hermitian input.
pub const HERMITICITY_TOL: f64 = 1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [C64; 16],
}

impl ComplexMatrix {
    /// Panics if `dim` is not 2 or 4.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim == 2 || dim == 4, "unsupported matrix dimension {dim}");
        Self { dim, data: [ZERO; 16] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m[(k, k)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be 4 or 16.
    pub fn from_row_major(entries: &[C64]) -> Result<Self> {
        let dim = match entries.len() {
            4 => 2,
            16 => 4,
            n => return Err(Error::UnsupportedDimension { found: (n as f64).sqrt() as usize }),
        };
        let mut m = Self::zeros(dim);
        m.data[..entries.len()].copy_from_slice(entries);
        Ok(m)
    }

    pub fn from_rows2(rows: [[C64; 2]; 2]) -> Self {
        let mut m = Self::zeros(2);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        m
    }

    pub fn diagonal(values: &[C64]) -> Result<Self> {
        let dim = values.len();
        if dim != 2 && dim != 4 {
            return Err(Error::UnsupportedDimension { found: dim });
        }
        let mut m = Self::zeros(dim);
        for (k, v) in values.iter().enumerate() {
            m[(k, k)] = *v;
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.data[..self.dim * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|k| self[(k, k)]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = *self;
        out.data.iter_mut().for_each(|v| *v *= s);
        out
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// `self * other - other * self`
    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries().iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |m - m^dagger|` over entries.
    pub fn hermiticity_error(&self) -> f64 {
        (*self - self.adjoint()).max_abs()
    }

    /// `max |U^dagger U - I|` over entries.
    pub fn unitarity_error(&self) -> f64 {
        (self.adjoint() * *self - Self::identity(self.dim)).max_abs()
    }

    /// Determinant of a 2x2 matrix.
    pub fn det2(&self) -> C64 {
        assert_eq!(self.dim, 2, "det2 on a {}x{} matrix", self.dim, self.dim);
        self[(0, 0)] * self[(1, 1)] - self[(0, 1)] * self[(1, 0)]
    }

    /// Block-diagonal `a ⊕ b` of two 2x2 matrices.
    pub fn direct_sum(a: &Self, b: &Self) -> Result<Self> {
        if a.dim != 2 || b.dim != 2 {
            return Err(Error::DimensionMismatch { left: a.dim, right: b.dim });
        }
        let mut out = Self::zeros(4);
        for i in 0..2 {
            for j in 0..2 {
                out[(i, j)] = a[(i, j)];
                out[(i + 2, j + 2)] = b[(i, j)];
            }
        }
        Ok(out)
    }

    /// Extracts the 2x2 diagonal block `k` (0 or 1) of a 4x4 matrix.
    pub fn diagonal_block(&self, k: usize) -> Result<Self> {
        if self.dim != 4 || k > 1 {
            return Err(Error::InvalidArgument(format!("block {k} of a {}x{} matrix", self.dim, self.dim)));
        }
        let o = 2 * k;
        let mut out = Self::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                out[(i, j)] = self[(i + o, j + o)];
            }
        }
        Ok(out)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.dim && j < self.dim);
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.dim && j < self.dim);
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for ComplexMatrix {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for ComplexMatrix {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for ComplexMatrix {
    fn add_assign(&mut self, rhs: Self) {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        self.data.iter_mut().zip(rhs.data.iter()).for_each(|(a, b)| *a += b);
    }
}

impl Sub for ComplexMatrix {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        self.data.iter_mut().zip(rhs.data.iter()).for_each(|(a, b)| *a -= b);
        self
    }
}

impl Neg for ComplexMatrix {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale_real(-1.0)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let v = self[(i, j)];
                write!(f, "{:>+.6}{:+.6}i  ", v.re, v.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_rows2([[ZERO, ONE], [ONE, ZERO]])
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_rows2([[ZERO, -I], [I, ZERO]])
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_rows2([[ONE, ZERO], [ZERO, -ONE]])
}

/// Raising operator `|1><0|`. Basis index 0 is `|1>` and index 1 is `|0>`,
/// so that `sigma_z = |1><1| - |0><0|` is `diag(1, -1)`.
pub fn sigma_plus() -> ComplexMatrix {
    ComplexMatrix::from_rows2([[ZERO, ONE], [ZERO, ZERO]])
}

/// Real coefficients of `c0 I + cx σx + cy σy + cz σz`.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct PauliVector {
    pub c0: f64,
    pub cx: f64,
    pub cy: f64,
    pub cz: f64,
}

impl PauliVector {
    pub const fn new(c0: f64, cx: f64, cy: f64, cz: f64) -> Self {
        Self { c0, cx, cy, cz }
    }

    /// Traceless vector `(0, cx, cy, cz)`.
    pub const fn traceless(cx: f64, cy: f64, cz: f64) -> Self {
        Self { c0: 0.0, cx, cy, cz }
    }

    pub fn assemble(&self) -> ComplexMatrix {
        let (c0, cx, cy, cz) = (self.c0, self.cx, self.cy, self.cz);
        ComplexMatrix::from_rows2([
            [C64::new(c0 + cz, 0.0), C64::new(cx, -cy)],
            [C64::new(cx, cy), C64::new(c0 - cz, 0.0)],
        ])
    }

    /// Euclidean norm of the `(cx, cy, cz)` part.
    pub fn axis_norm(&self) -> f64 {
        (self.cx * self.cx + self.cy * self.cy + self.cz * self.cz).sqrt()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.c0 * s, self.cx * s, self.cy * s, self.cz * s)
    }
}

impl Neg for PauliVector {
    type Output = Self;
    fn neg(self) -> Self {
        self.scaled(-1.0)
    }
}

/// Decomposes a Hermitian 2x2 matrix into identity and Pauli coefficients.
pub fn pauli_decompose(m: &ComplexMatrix) -> Result<PauliVector> {
    if m.dim() != 2 {
        return Err(Error::DimensionMismatch { left: m.dim(), right: 2 });
    }
    let deviation = m.hermiticity_error();
    if deviation > HERMITICITY_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let half = |p: ComplexMatrix| 0.5 * (p * *m).trace().re;
    Ok(PauliVector { c0: 0.5 * m.trace().re, cx: half(sigma_x()), cy: half(sigma_y()), cz: half(sigma_z()) })
}

/// `exp(-i (c0 I + a·σ)) = e^{-i c0} [cos|a| I - i sin|a| (â·σ)]`.
///
/// For the traceless vectors used throughout the crate (`c0 = 0`) the result
/// lies in SU(2).
pub fn expm_su2(a: &PauliVector) -> ComplexMatrix {
    let norm = a.axis_norm();
    let (cos, sinc) = if norm == 0.0 {
        (1.0, 1.0)
    } else if norm < 1e-8 {
        // series avoids 0/0 in sin(x)/x
        let n2 = norm * norm;
        (1.0 - 0.5 * n2, 1.0 - n2 / 6.0)
    } else {
        (norm.cos(), norm.sin() / norm)
    };
    let (x, y, z) = (a.cx * sinc, a.cy * sinc, a.cz * sinc);
    let u = ComplexMatrix::from_rows2([[C64::new(cos, -z), C64::new(-y, -x)], [C64::new(y, -x), C64::new(cos, z)]]);
    if a.c0 == 0.0 {
        u
    } else {
        u.scale(C64::from_polar(1.0, -a.c0))
    }
}

/// Validity diagnostics of a candidate density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityDiagnostics {
    pub trace_error: f64,
    pub hermiticity_error: f64,
    pub min_eigenvalue: f64,
}

impl DensityDiagnostics {
    pub fn is_valid(&self, tol: f64) -> bool {
        self.trace_error <= tol && self.hermiticity_error <= tol && self.min_eigenvalue >= -tol
    }
}

pub fn check_density(rho: &ComplexMatrix) -> DensityDiagnostics {
    let herm = (*rho + rho.adjoint()).scale_real(0.5);
    DensityDiagnostics {
        trace_error: (rho.trace() - ONE).norm(),
        hermiticity_error: rho.hermiticity_error(),
        min_eigenvalue: min_eigenvalue_hermitian(&herm),
    }
}

/// Smallest eigenvalue of a Hermitian matrix (closed form for 2x2, symmetric
/// eigensolver for 4x4).
pub fn min_eigenvalue_hermitian(h: &ComplexMatrix) -> f64 {
    match h.dim() {
        2 => {
            let a = h[(0, 0)].re;
            let d = h[(1, 1)].re;
            let b = h[(0, 1)].norm();
            let mean = 0.5 * (a + d);
            let half_gap = (0.25 * (a - d) * (a - d) + b * b).sqrt();
            mean - half_gap
        }
        _ => {
            let m = Matrix4::from_fn(|i, j| h[(i, j)]);
            m.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
        }
    }
}
