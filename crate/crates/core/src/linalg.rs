//! Small dense complex linear algebra: bordered solves, operator norms,
//! kernels and random unitary matrices.
//!
//! Factorizations and SVDs come from `nalgebra`; this module adds the
//! singularity policy and the constructions the tracker needs on top.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::poly::ProjectivePoint;
use crate::sampling::{gaussian_matrix, random_phase};

/// Reciprocal condition below which a bordered matrix counts as singular.
pub const SINGULAR_RCOND: f64 = 1e-14;

/// The square matrix `(Dh(z); z*)` obtained by appending the conjugate
/// transpose of `z` below the Jacobian.
#[derive(Debug, Clone)]
pub struct BorderedMatrix {
    matrix: DMatrix<Complex64>,
}

impl BorderedMatrix {
    pub fn new(jac: &DMatrix<Complex64>, z: &DVector<Complex64>) -> Result<Self> {
        let n = jac.nrows();
        if jac.ncols() != n + 1 || z.len() != n + 1 {
            return Err(Error::DimensionMismatch { expected: n + 1, found: z.len().min(jac.ncols()) });
        }
        let mut matrix = jac.clone().insert_row(n, Complex64::new(0.0, 0.0));
        for (j, zj) in z.iter().enumerate() {
            matrix[(n, j)] = zj.conj();
        }
        Ok(BorderedMatrix { matrix })
    }

    /// Wraps an arbitrary square matrix; used by tests and by callers that
    /// build the border themselves.
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        Ok(BorderedMatrix { matrix })
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// LU factorization with the singularity check applied.
    pub fn factor(&self) -> Result<BorderedFactor> {
        let lu = self.matrix.clone().lu();
        let u = lu.u();
        let pivots = u.diagonal().map(|p| p.norm());
        let max_pivot = pivots.max();
        let min_pivot = pivots.min();
        if !(max_pivot > 0.0) || !(min_pivot / max_pivot >= SINGULAR_RCOND) {
            return Err(Error::SingularLinearSolve {
                rcond: if max_pivot > 0.0 { min_pivot / max_pivot } else { 0.0 },
            });
        }
        let inverse = lu.try_inverse().ok_or(Error::SingularLinearSolve { rcond: 0.0 })?;
        let rcond = 1.0 / (one_norm(&self.matrix) * one_norm(&inverse));
        if !(rcond >= SINGULAR_RCOND) {
            return Err(Error::SingularLinearSolve { rcond });
        }
        Ok(BorderedFactor { lu, inverse, rcond })
    }
}

/// A factored bordered matrix together with its explicit inverse.
#[derive(Debug, Clone)]
pub struct BorderedFactor {
    lu: nalgebra::linalg::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>,
    inverse: DMatrix<Complex64>,
    rcond: f64,
}

impl BorderedFactor {
    pub fn solve(&self, rhs: &DVector<Complex64>) -> DVector<Complex64> {
        self.lu.solve(rhs).expect("factor is nonsingular")
    }

    pub fn inverse(&self) -> &DMatrix<Complex64> {
        &self.inverse
    }

    /// Reciprocal 1-norm condition number.
    pub fn rcond(&self) -> f64 {
        self.rcond
    }
}

fn one_norm(m: &DMatrix<Complex64>) -> f64 {
    m.column_iter().map(|c| c.iter().map(|x| x.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// Solves `B x = rhs` with partial pivoting, refusing numerically singular `B`.
pub fn bordered_solve(b: &BorderedMatrix, rhs: &DVector<Complex64>) -> Result<DVector<Complex64>> {
    if rhs.len() != b.dim() {
        return Err(Error::DimensionMismatch { expected: b.dim(), found: rhs.len() });
    }
    Ok(b.factor()?.solve(rhs))
}

/// Largest singular value.
pub fn spectral_norm(a: &DMatrix<Complex64>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.singular_values().max()
}

/// Unit vector spanning the kernel of an `n x (n + 1)` matrix of rank `n`,
/// multiplied by a uniformly random phase.
pub fn kernel_vector<R: Rng + ?Sized>(m: &DMatrix<Complex64>, rng: &mut R) -> Result<ProjectivePoint> {
    let n = m.nrows();
    if m.ncols() != n + 1 {
        return Err(Error::DimensionMismatch { expected: n + 1, found: m.ncols() });
    }
    // Pad to square so the SVD returns a full set of right singular vectors.
    let padded = m.clone().insert_row(n, Complex64::new(0.0, 0.0));
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.as_ref().expect("requested V^*");
    let mut order: Vec<usize> = (0..=n).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let largest = svd.singular_values[order[n]];
    if n >= 1 && !(svd.singular_values[order[1]] > 1e-10 * largest) {
        return Err(Error::RankDeficient);
    }
    let k = order[0];
    let v = DVector::from_iterator(n + 1, v_t.row(k).iter().map(|x| x.conj()));
    Ok(ProjectivePoint::new(v)?.with_phase(random_phase(rng)))
}

/// Haar-distributed unitary matrix: QR of a complex Ginibre matrix with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(size: usize, rng: &mut R) -> DMatrix<Complex64> {
    assert!(size >= 1, "unitary matrices need a positive size");
    let qr = gaussian_matrix(size, size, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..size {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..size {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Unitary `V` with `V e_0 = zeta`, so `V* zeta = e_0`.
///
/// A Householder reflection maps `e_0` onto `zeta` up to the phase of
/// `zeta_0`; the orthogonal complement of `e_0` is then rotated by a Haar
/// unitary so the remaining columns carry no preferred direction.
pub fn unitary_mapping_to_e0<R: Rng + ?Sized>(zeta: &ProjectivePoint, rng: &mut R) -> DMatrix<Complex64> {
    let dim = zeta.dim();
    let z = zeta.coords();
    let phase = if z[0].norm() > 0.0 { z[0] / z[0].norm() } else { Complex64::new(1.0, 0.0) };
    // target = conj(phase) zeta has a real non-negative first entry.
    let target = z.map(|c| c * phase.conj());
    let mut u = -target;
    u[0] += Complex64::new(1.0, 0.0);
    let unorm2 = u.norm_squared();
    let mut reflector = DMatrix::<Complex64>::identity(dim, dim);
    if unorm2 > 1e-300 {
        reflector -= (&u * u.adjoint()) * Complex64::new(2.0 / unorm2, 0.0);
    }
    let mut v = reflector * phase;
    if dim > 1 {
        let rot = random_unitary(dim - 1, rng);
        let tail = v.columns(1, dim - 1) * rot;
        v.columns_mut(1, dim - 1).copy_from(&tail);
    }
    v
}
