//! Bombieri-Weyl geometry on systems and the Riemannian distance on
//! projective space.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::{dense, AffineSystem, PolySystem, ProjectivePoint};

/// Tolerance on `U* U = I` accepted by [`unitary_compose`].
pub const UNITARY_TOLERANCE: f64 = 1e-10;

/// Bombieri-Weyl Hermitian product, linear in the first argument.
///
/// Each monomial coefficient pair is weighted by the inverse multinomial
/// coefficient of its exponent tuple; equations contribute additively.
pub fn bw_inner(h: &PolySystem, other: &PolySystem) -> Result<Complex64> {
    h.check_same_degrees(other)?;
    let degrees = h.degrees();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..h.n() {
        let weights = degrees.basis(i).multinomials();
        for ((a, b), w) in h.equation(i).iter().zip(other.equation(i)).zip(weights) {
            acc += a * b.conj() / w;
        }
    }
    Ok(acc)
}

pub fn bw_norm(h: &PolySystem) -> f64 {
    let degrees = h.degrees();
    (0..h.n())
        .map(|i| h.equation(i).iter().zip(degrees.basis(i).multinomials()).map(|(a, w)| a.norm_sqr() / w).sum::<f64>())
        .sum::<f64>()
        .sqrt()
}

/// Norm of an affine system, defined through its homogenization.
pub fn bw_norm_affine(f: &AffineSystem) -> f64 {
    bw_norm(&f.homogenize())
}

/// A system on the unit sphere of the Bombieri-Weyl norm.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereSystem {
    system: PolySystem,
}

impl SphereSystem {
    pub fn system(&self) -> &PolySystem {
        &self.system
    }

    pub fn into_system(self) -> PolySystem {
        self.system
    }
}

impl std::ops::Deref for SphereSystem {
    type Target = PolySystem;

    fn deref(&self) -> &PolySystem {
        &self.system
    }
}

pub fn normalize_to_sphere(h: &PolySystem) -> Result<SphereSystem> {
    let norm = bw_norm(h);
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::ZeroSystem);
    }
    Ok(SphereSystem { system: h.scale(Complex64::new(1.0 / norm, 0.0)) })
}

/// `d_R(z, w) = arccos(|<z, w>| / (|z| |w|))`, in `[0, pi/2]`.
pub fn riemann_distance(z: &ProjectivePoint, w: &ProjectivePoint) -> f64 {
    riemann_distance_raw(z.coords(), w.coords())
}

/// Riemannian distance between arbitrary nonzero representatives.
pub fn riemann_distance_raw(z: &DVector<Complex64>, w: &DVector<Complex64>) -> f64 {
    let denom = z.norm() * w.norm();
    if denom == 0.0 {
        return FRAC_PI_2;
    }
    let cos = (w.dotc(z).norm() / denom).clamp(0.0, 1.0);
    // arccos loses half the digits near 1; use the sine of the angle there.
    if cos > 0.9 {
        let zn = z.unscale(z.norm());
        let wn = w.unscale(w.norm());
        let proj = wn.dotc(&zn);
        let residual = (&zn - wn * proj).norm().min(1.0);
        residual.asin()
    } else {
        cos.acos()
    }
}

/// The system `z -> h(U z)`, re-expanded in the monomial basis.
pub fn unitary_compose(h: &PolySystem, u: &DMatrix<Complex64>) -> Result<PolySystem> {
    let nvars = h.nvars();
    if u.nrows() != nvars || u.ncols() != nvars {
        return Err(Error::DimensionMismatch { expected: nvars, found: u.nrows() });
    }
    let deviation = (u.adjoint() * u - DMatrix::<Complex64>::identity(nvars, nvars)).norm();
    if deviation > UNITARY_TOLERANCE * nvars as f64 {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(linear_compose(h, u))
}

/// `z -> h(A z)` for any square `A`; callers check unitarity when needed.
pub(crate) fn linear_compose(h: &PolySystem, a: &DMatrix<Complex64>) -> PolySystem {
    let degrees = h.degrees().clone();
    let max = degrees.max_degree();
    // (A z)_j is the linear form with coefficients given by row j of A.
    let powers: Vec<_> = (0..h.nvars())
        .map(|j| {
            let row: Vec<Complex64> = a.row(j).iter().copied().collect();
            dense::linear_form_powers(&row, max)
        })
        .collect();
    let mut out = PolySystem::zeros(&degrees);
    for i in 0..h.n() {
        let basis = degrees.basis(i);
        let target = out.coeffs_mut()[i].as_mut_slice();
        for (&c, exps) in h.equation(i).iter().zip(basis.iter()) {
            if c.norm_sqr() == 0.0 {
                continue;
            }
            let mut acc_basis = powers[0][0].0.clone();
            let mut acc = vec![c];
            for (j, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let (pb, pc) = &powers[j][e as usize];
                let next_basis = crate::poly::MonomialBasis::new(h.nvars(), acc_basis.degree() + e);
                acc = dense::multiply(&acc, &acc_basis, pc, pb, &next_basis);
                acc_basis = next_basis;
            }
            for (t, v) in target.iter_mut().zip(acc) {
                *t += v;
            }
        }
    }
    out
}
