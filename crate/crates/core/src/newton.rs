//! Newton operators, the condition number and approximate-zero certificates.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{spectral_norm, BorderedFactor, BorderedMatrix};
use crate::metric::{bw_norm, riemann_distance};
use crate::poly::{AffineSystem, PolySystem, ProjectivePoint};

/// Radius constant of the projective approximate-zero criterion.
pub const U0: f64 = 0.17586;

/// `|z_0|` below which a refined point is reported as a root at infinity.
pub const INFINITY_TOLERANCE: f64 = 1e-10;

/// Confidence parameter of [`default_norm_bound`].
pub const DEFAULT_NORM_CONFIDENCE: f64 = 0.01;

/// One affine Newton step `x - Df(x)^{-1} f(x)`.
pub fn newton_affine(f: &AffineSystem, x: &[Complex64]) -> Result<Vec<Complex64>> {
    let value = f.evaluate(x)?;
    let jac = f.jacobian(x)?;
    let step = BorderedMatrix::from_matrix(jac)?.factor()?.solve(&value);
    Ok(x.iter().zip(step.iter()).map(|(a, b)| a - b).collect())
}

/// Bordered matrix `(Dh(z); z*)` and its factorization, plus `h(z)`.
pub(crate) fn bordered_at(h: &PolySystem, z: &DVector<Complex64>) -> Result<(DVector<Complex64>, BorderedFactor)> {
    let (value, jac) = h.evaluate_with_jacobian(z)?;
    let factor = BorderedMatrix::new(&jac, z)?.factor()?;
    Ok((value, factor))
}

/// The unnormalized projective Newton update and the norm of its correction.
pub(crate) fn newton_update(h: &PolySystem, z: &DVector<Complex64>) -> Result<(DVector<Complex64>, f64)> {
    let (value, factor) = bordered_at(h, z)?;
    let rhs = value.push(Complex64::new(0.0, 0.0));
    let delta = factor.solve(&rhs);
    let size = delta.norm();
    Ok((z - delta, size))
}

/// One projective Newton step, renormalized to a unit representative.
pub fn newton_projective(h: &PolySystem, z: &ProjectivePoint) -> Result<ProjectivePoint> {
    let (next, _) = newton_update(h, z.coords())?;
    ProjectivePoint::new(next)
}

/// `mu(h, z) = |h| |(Dh(z)|_{z-perp})^{-1} Diag(|z|^(d_i - 1) sqrt(d_i))|`,
/// or `+inf` when the restricted Jacobian is numerically singular.
pub fn condition_mu(h: &PolySystem, z: &ProjectivePoint) -> f64 {
    condition_mu_raw(h, z.coords())
}

pub(crate) fn condition_mu_raw(h: &PolySystem, z: &DVector<Complex64>) -> f64 {
    let factor = match bordered_at(h, z) {
        Ok((_, factor)) => factor,
        Err(_) => return f64::INFINITY,
    };
    condition_mu_with(h, z, &factor)
}

pub(crate) fn condition_mu_with(h: &PolySystem, z: &DVector<Complex64>, factor: &BorderedFactor) -> f64 {
    let n = h.n();
    let znorm = z.norm();
    let scales: Vec<f64> =
        h.degrees().degrees().iter().map(|&d| znorm.powi(d as i32 - 1) * f64::from(d).sqrt()).collect();
    // Solutions of (Dh; z*) w_j = (sqrt(d_j) e_j; 0) lie in z-perp.
    let mut w: DMatrix<Complex64> = factor.inverse().columns(0, n).into_owned();
    for (j, s) in scales.iter().enumerate() {
        w.column_mut(j).scale_mut(*s);
    }
    bw_norm(h) * spectral_norm(&w)
}

/// Certified ball around a zero: `d_R <= u0 / (d^{3/2} mu)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CertifiedZero {
    pub point: ProjectivePoint,
    pub mu: f64,
    pub radius: f64,
}

impl CertifiedZero {
    pub fn new(h: &PolySystem, zeta: &ProjectivePoint) -> Self {
        let mu = condition_mu(h, zeta);
        let d = f64::from(h.degrees().max_degree());
        let radius = if mu.is_finite() { U0 / (d.powf(1.5) * mu) } else { 0.0 };
        CertifiedZero { point: zeta.clone(), mu, radius }
    }
}

/// Outcome of checking a point against a reference zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub holds: bool,
    pub distance: f64,
    /// Radius the distance was compared against.
    pub bound: f64,
    pub zero: CertifiedZero,
}

/// `z` is an approximate zero of `h` with associated zero `zeta` when
/// `d_R(z, zeta) <= u0 / (d^{3/2} mu(h, zeta))`.
pub fn certify_projective(h: &PolySystem, z: &ProjectivePoint, zeta: &ProjectivePoint) -> Certificate {
    certify_with_factor(h, z, zeta, 1.0)
}

/// The stricter start condition with half the radius, required of the
/// initial point of a tracked path.
pub fn certify_start(h: &PolySystem, z: &ProjectivePoint, zeta: &ProjectivePoint) -> Certificate {
    certify_with_factor(h, z, zeta, 0.5)
}

fn certify_with_factor(h: &PolySystem, z: &ProjectivePoint, zeta: &ProjectivePoint, factor: f64) -> Certificate {
    let zero = CertifiedZero::new(h, zeta);
    let distance = riemann_distance(z, zeta);
    let bound = factor * zero.radius;
    Certificate { holds: zero.mu.is_finite() && distance <= bound, distance, bound, zero }
}

/// Probabilistic bound `D sqrt(pi n) / delta` on the norm of an affine root,
/// valid with probability at least `1 - delta` for a random system.
pub fn default_norm_bound(h: &PolySystem, delta: f64) -> f64 {
    let bezout = h.degrees().degrees().iter().map(|&d| f64::from(d)).product::<f64>();
    bezout * (std::f64::consts::PI * h.n() as f64).sqrt() / delta
}

/// Number of projective Newton steps needed before dehomogenizing, given a
/// bound on the norm of the affine root.
pub fn affine_refinement_steps(norm_bound: f64) -> u32 {
    let inner = (4.0 * (1.0 + norm_bound * norm_bound)).log2().log2();
    inner.ceil().max(0.0) as u32
}

/// Refines a certified projective approximate zero and returns its affine
/// coordinates `(z_1 / z_0, ..., z_n / z_0)`.
pub fn projective_to_affine(h: &PolySystem, z: &ProjectivePoint, norm_bound: f64) -> Result<Vec<Complex64>> {
    let mut current = z.clone();
    for _ in 0..affine_refinement_steps(norm_bound) {
        current = newton_projective(h, &current)?;
    }
    let z0 = current.coords()[0].norm();
    if z0 < INFINITY_TOLERANCE {
        return Err(Error::AffineRootAtInfinity { z0 });
    }
    Ok(current.to_affine().expect("z0 checked nonzero"))
}

/// Newton's method iterated to working precision; the reference zero used
/// when checking certificates.
///
/// Stops once successive iterates are closer than `1e-14`, or once the
/// corrections have reached the rounding floor (below `1e-10` and no longer
/// shrinking), which happens first for moderately conditioned roots.
pub fn refine(h: &PolySystem, z: &ProjectivePoint, max_iters: usize) -> Result<ProjectivePoint> {
    let mut current = z.clone();
    let mut previous_step = f64::INFINITY;
    for _ in 0..max_iters {
        let next = newton_projective(h, &current)?;
        let step = riemann_distance(&next, &current);
        current = next;
        if step < 1e-14 || (step < 1e-10 && step >= 0.5 * previous_step) {
            return Ok(current);
        }
        previous_step = step;
    }
    Err(Error::NonConvergence { iters: max_iters })
}
