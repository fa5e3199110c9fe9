//! Dense homogeneous polynomial systems over the complex numbers.
//!
//! A system `h = (h_1, ..., h_n)` lives in `n + 1` homogeneous variables
//! `X_0, ..., X_n`; equation `i` has degree `d_i` and stores one coefficient
//! per monomial of that degree. Monomials are ordered descending
//! lexicographically on the exponent tuple `(a_0, ..., a_n)`, so `X_0^d`
//! always comes first and `X_n^d` last.
//!
//! Affine systems in `x_1, ..., x_n` reuse the same basis through the
//! homogenization correspondence: the affine monomial `x^b` with `|b| <= d`
//! sits at the index of `X_0^(d - |b|) X^b`. Homogenizing and
//! dehomogenizing therefore never reorder coefficients.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Number of `m`-tuples of non-negative integers summing to `s`.
fn compositions(s: u32, m: usize) -> usize {
    if m == 0 {
        return usize::from(s == 0);
    }
    binomial(s as usize + m - 1, m - 1)
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

fn checked_binomial(n: usize, k: usize) -> Option<usize> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i + 1) as u128;
    }
    usize::try_from(acc).ok()
}

/// Multinomial coefficient `d! / (a_0! ... a_n!)` as a float.
///
/// Exact integer arithmetic is used while the intermediate binomials fit
/// in `u128`, which covers every degree up to 20 and far beyond.
pub fn multinomial(exponents: &[u32]) -> f64 {
    let mut total: u128 = 0;
    let mut acc: u128 = 1;
    let mut exact = true;
    for &a in exponents {
        for i in 1..=u128::from(a) {
            total += 1;
            match acc.checked_mul(total) {
                Some(v) => acc = v / i,
                None => {
                    exact = false;
                    break;
                }
            }
        }
        if !exact {
            break;
        }
    }
    if exact {
        return acc as f64;
    }
    let ln_fact = |k: u32| (1..=k).map(|j| f64::from(j).ln()).sum::<f64>();
    let d: u32 = exponents.iter().sum();
    (ln_fact(d) - exponents.iter().map(|&a| ln_fact(a)).sum::<f64>()).exp()
}

/// All exponent tuples of a fixed total degree in a fixed number of variables.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialBasis {
    nvars: usize,
    degree: u32,
    exponents: Vec<u32>,
    multinomials: Vec<f64>,
}

impl MonomialBasis {
    pub fn new(nvars: usize, degree: u32) -> Self {
        assert!(nvars >= 1, "a monomial basis needs at least one variable");
        let len = compositions(degree, nvars);
        let mut exponents = Vec::with_capacity(len * nvars);
        let mut current = vec![0u32; nvars];
        fill(&mut current, 0, degree, &mut exponents);
        let multinomials = exponents.chunks(nvars).map(multinomial).collect();
        MonomialBasis { nvars, degree, exponents, multinomials }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.multinomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multinomials.is_empty()
    }

    pub fn exponent(&self, index: usize) -> &[u32] {
        &self.exponents[index * self.nvars..(index + 1) * self.nvars]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.exponents.chunks(self.nvars)
    }

    /// `d! / a!` for the monomial at `index`.
    pub fn multinomial(&self, index: usize) -> f64 {
        self.multinomials[index]
    }

    pub fn multinomials(&self) -> &[f64] {
        &self.multinomials
    }

    /// Position of an exponent tuple, computed combinatorially.
    pub fn index_of(&self, exponents: &[u32]) -> Option<usize> {
        if exponents.len() != self.nvars || exponents.iter().sum::<u32>() != self.degree {
            return None;
        }
        let mut rank = 0;
        let mut rem = self.degree;
        for (j, &a) in exponents.iter().enumerate().take(self.nvars - 1) {
            let tail = self.nvars - j - 1;
            for v in a + 1..=rem {
                rank += compositions(rem - v, tail);
            }
            rem -= a;
        }
        Some(rank)
    }
}

fn fill(current: &mut [u32], pos: usize, rem: u32, out: &mut Vec<u32>) {
    if pos + 1 == current.len() {
        current[pos] = rem;
        out.extend_from_slice(current);
        return;
    }
    for a in (0..=rem).rev() {
        current[pos] = a;
        fill(current, pos + 1, rem - a, out);
    }
}

#[derive(Debug)]
struct Layout {
    degrees: Vec<u32>,
    bases: Vec<Arc<MonomialBasis>>,
}

/// Degrees `(d_1, ..., d_n)` of a square system together with the cached
/// monomial bases of every equation.
#[derive(Clone)]
pub struct DegreeVector {
    layout: Arc<Layout>,
}

impl DegreeVector {
    pub fn new(degrees: Vec<u32>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::InvalidDegrees("at least one equation is required".into()));
        }
        if degrees.contains(&0) {
            return Err(Error::InvalidDegrees("every degree must be positive".into()));
        }
        let nvars = degrees.len() + 1;
        let mut bases: Vec<Arc<MonomialBasis>> = Vec::with_capacity(degrees.len());
        for &d in &degrees {
            let shared = bases.iter().find(|b| b.degree() == d).cloned();
            bases.push(shared.unwrap_or_else(|| Arc::new(MonomialBasis::new(nvars, d))));
        }
        Ok(DegreeVector { layout: Arc::new(Layout { degrees, bases }) })
    }

    /// All `n` equations of degree `d`.
    pub fn uniform(n: usize, d: u32) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn degrees(&self) -> &[u32] {
        &self.layout.degrees
    }

    /// Number of equations `n`.
    pub fn n(&self) -> usize {
        self.layout.degrees.len()
    }

    /// Number of homogeneous variables, `n + 1`.
    pub fn nvars(&self) -> usize {
        self.n() + 1
    }

    pub fn max_degree(&self) -> u32 {
        *self.layout.degrees.iter().max().expect("non-empty")
    }

    /// Bezout number `D = d_1 ... d_n`.
    pub fn bezout_number(&self) -> Result<usize> {
        self.layout
            .degrees
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d as usize))
            .ok_or(Error::Overflow("Bezout number"))
    }

    /// Complex dimension `N + 1` of the space of systems with these degrees.
    pub fn space_dimension(&self) -> Result<usize> {
        space_dimension(self.degrees())
    }

    pub fn basis(&self, equation: usize) -> &MonomialBasis {
        &self.layout.bases[equation]
    }
}

impl PartialEq for DegreeVector {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.layout, &other.layout) || self.degrees() == other.degrees()
    }
}

impl fmt::Debug for DegreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("DegreeVector").field(&self.layout.degrees).finish()
    }
}

/// `N + 1 = sum_i C(n + d_i, d_i)` in exact integer arithmetic.
pub fn space_dimension(degrees: &[u32]) -> Result<usize> {
    let n = degrees.len();
    degrees.iter().try_fold(0usize, |acc, &d| {
        checked_binomial(n + d as usize, d as usize)
            .and_then(|c| acc.checked_add(c))
            .ok_or(Error::Overflow("space dimension"))
    })
}

/// Unit-norm representative of a point of complex projective space.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectivePoint {
    coords: DVector<Complex64>,
}

impl ProjectivePoint {
    /// Normalizes `coords` to unit Euclidean norm.
    pub fn new(coords: DVector<Complex64>) -> Result<Self> {
        let norm = coords.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::ZeroPoint);
        }
        Ok(ProjectivePoint { coords: coords.unscale(norm) })
    }

    pub fn from_slice(coords: &[Complex64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(coords))
    }

    /// The point `(1, x_1, ..., x_n)`, normalized.
    pub fn from_affine(x: &[Complex64]) -> Self {
        let mut coords = DVector::from_element(x.len() + 1, Complex64::new(1.0, 0.0));
        coords.rows_mut(1, x.len()).copy_from_slice(x);
        Self::new(coords).expect("first coordinate is one")
    }

    /// The coordinate vector `e_i` in `dim` homogeneous coordinates.
    pub fn basis_vector(dim: usize, i: usize) -> Self {
        let mut coords = DVector::zeros(dim);
        coords[i] = Complex64::new(1.0, 0.0);
        ProjectivePoint { coords }
    }

    pub fn coords(&self) -> &DVector<Complex64> {
        &self.coords
    }

    pub fn into_coords(self) -> DVector<Complex64> {
        self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Multiplies the representative by a unit complex number.
    pub fn with_phase(&self, phase: Complex64) -> Self {
        let unit = phase / phase.norm();
        ProjectivePoint { coords: self.coords.map(|c| c * unit) }
    }

    /// `(z_1 / z_0, ..., z_n / z_0)`, or `None` when `z_0` vanishes.
    pub fn to_affine(&self) -> Option<Vec<Complex64>> {
        let z0 = self.coords[0];
        if z0.norm() == 0.0 {
            return None;
        }
        Some(self.coords.iter().skip(1).map(|c| c / z0).collect())
    }
}

/// Per-variable power tables `z_j^k` for `k <= max_degree`.
struct PowerTable {
    stride: usize,
    values: Vec<Complex64>,
}

impl PowerTable {
    fn new(z: &[Complex64], max_degree: u32) -> Self {
        let stride = max_degree as usize + 1;
        let mut values = Vec::with_capacity(z.len() * stride);
        for &zj in z {
            let mut p = Complex64::new(1.0, 0.0);
            values.push(p);
            for _ in 0..max_degree {
                p *= zj;
                values.push(p);
            }
        }
        PowerTable { stride, values }
    }

    #[inline]
    fn get(&self, var: usize, power: u32) -> Complex64 {
        self.values[var * self.stride + power as usize]
    }
}

/// A square homogeneous system `h in H_(d)` stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySystem {
    degrees: DegreeVector,
    coeffs: Vec<Vec<Complex64>>,
}

impl PolySystem {
    pub fn new(degrees: DegreeVector, coeffs: Vec<Vec<Complex64>>) -> Result<Self> {
        if coeffs.len() != degrees.n() {
            return Err(Error::DimensionMismatch { expected: degrees.n(), found: coeffs.len() });
        }
        for (i, c) in coeffs.iter().enumerate() {
            let expected = degrees.basis(i).len();
            if c.len() != expected {
                return Err(Error::DimensionMismatch { expected, found: c.len() });
            }
        }
        Ok(PolySystem { degrees, coeffs })
    }

    pub fn zeros(degrees: &DegreeVector) -> Self {
        let coeffs = (0..degrees.n()).map(|i| vec![Complex64::new(0.0, 0.0); degrees.basis(i).len()]).collect();
        PolySystem { degrees: degrees.clone(), coeffs }
    }

    /// Builds a system from sparse `(exponents, coefficient)` terms.
    /// Repeated monomials are summed.
    pub fn from_terms(degrees: &DegreeVector, terms: &[Vec<(Vec<u32>, Complex64)>]) -> Result<Self> {
        if terms.len() != degrees.n() {
            return Err(Error::DimensionMismatch { expected: degrees.n(), found: terms.len() });
        }
        let mut sys = Self::zeros(degrees);
        for (i, eq) in terms.iter().enumerate() {
            let basis = degrees.basis(i);
            for (exps, c) in eq {
                let idx = basis.index_of(exps).ok_or_else(|| {
                    Error::Parse(format!(
                        "exponents {exps:?} are not a monomial of degree {} in {} variables",
                        basis.degree(),
                        basis.nvars()
                    ))
                })?;
                sys.coeffs[i][idx] += c;
            }
        }
        Ok(sys)
    }

    pub fn degrees(&self) -> &DegreeVector {
        &self.degrees
    }

    pub fn n(&self) -> usize {
        self.degrees.n()
    }

    pub fn nvars(&self) -> usize {
        self.degrees.nvars()
    }

    pub fn coeffs(&self) -> &[Vec<Complex64>] {
        &self.coeffs
    }

    pub fn equation(&self, i: usize) -> &[Complex64] {
        &self.coeffs[i]
    }

    pub fn coeffs_mut(&mut self) -> &mut [Vec<Complex64>] {
        &mut self.coeffs
    }

    /// Coefficient of a monomial given by its exponent tuple.
    pub fn coeff(&self, equation: usize, exponents: &[u32]) -> Option<Complex64> {
        let idx = self.degrees.basis(equation).index_of(exponents)?;
        Some(self.coeffs[equation][idx])
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        self.map_coeffs(|c| c * factor)
    }

    pub fn map_coeffs(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        PolySystem {
            degrees: self.degrees.clone(),
            coeffs: self.coeffs.iter().map(|eq| eq.iter().map(|&c| f(c)).collect()).collect(),
        }
    }

    /// `a * self + b * other`.
    pub fn linear_combination(&self, a: Complex64, other: &PolySystem, b: Complex64) -> Result<Self> {
        self.check_same_degrees(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x.iter().zip(y).map(|(&p, &q)| a * p + b * q).collect())
            .collect();
        Ok(PolySystem { degrees: self.degrees.clone(), coeffs })
    }

    pub(crate) fn check_same_degrees(&self, other: &PolySystem) -> Result<()> {
        if self.degrees != other.degrees {
            return Err(Error::DegreeMismatch {
                left: self.degrees.degrees().to_vec(),
                right: other.degrees.degrees().to_vec(),
            });
        }
        Ok(())
    }

    fn check_point(&self, z: &DVector<Complex64>) -> Result<()> {
        if z.len() != self.nvars() {
            return Err(Error::DimensionMismatch { expected: self.nvars(), found: z.len() });
        }
        Ok(())
    }

    /// `(h_1(z), ..., h_n(z))`.
    pub fn evaluate(&self, z: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        self.check_point(z)?;
        let powers = PowerTable::new(z.as_slice(), self.degrees.max_degree());
        let values = self.coeffs.iter().enumerate().map(|(i, eq)| {
            let basis = self.degrees.basis(i);
            eq.iter()
                .zip(basis.iter())
                .filter(|(c, _)| c.re != 0.0 || c.im != 0.0)
                .map(|(&c, exps)| c * monomial_value(&powers, exps))
                .sum::<Complex64>()
        });
        Ok(DVector::from_iterator(self.n(), values))
    }

    /// The `n x (n + 1)` Jacobian `dh_i / dX_j` at `z`.
    pub fn jacobian(&self, z: &DVector<Complex64>) -> Result<DMatrix<Complex64>> {
        Ok(self.evaluate_with_jacobian(z)?.1)
    }

    /// Values and Jacobian in a single pass over the coefficients.
    pub fn evaluate_with_jacobian(&self, z: &DVector<Complex64>) -> Result<(DVector<Complex64>, DMatrix<Complex64>)> {
        self.check_point(z)?;
        let nvars = self.nvars();
        let powers = PowerTable::new(z.as_slice(), self.degrees.max_degree());
        let mut values = DVector::zeros(self.n());
        let mut jac = DMatrix::zeros(self.n(), nvars);
        for (i, eq) in self.coeffs.iter().enumerate() {
            let basis = self.degrees.basis(i);
            for (&c, exps) in eq.iter().zip(basis.iter()) {
                if c.re == 0.0 && c.im == 0.0 {
                    continue;
                }
                values[i] += c * monomial_value(&powers, exps);
                for j in 0..nvars {
                    if exps[j] == 0 {
                        continue;
                    }
                    let mut term = c * f64::from(exps[j]) * powers.get(j, exps[j] - 1);
                    for (k, &a) in exps.iter().enumerate() {
                        if k != j {
                            term *= powers.get(k, a);
                        }
                    }
                    jac[(i, j)] += term;
                }
            }
        }
        Ok((values, jac))
    }

    /// The system with `X_0 = 1` substituted.
    pub fn dehomogenize(&self) -> AffineSystem {
        AffineSystem { degrees: self.degrees.clone(), coeffs: self.coeffs.clone() }
    }
}

#[inline]
fn monomial_value(powers: &PowerTable, exps: &[u32]) -> Complex64 {
    exps.iter().enumerate().fold(Complex64::new(1.0, 0.0), |acc, (j, &a)| acc * powers.get(j, a))
}

/// A square affine system `f in P_(d)` in `x_1, ..., x_n`.
///
/// Coefficients share the layout of the homogenized system: the affine
/// monomial `x^b` is stored where `X_0^(d_i - |b|) X^b` would be.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSystem {
    degrees: DegreeVector,
    coeffs: Vec<Vec<Complex64>>,
}

impl AffineSystem {
    pub fn new(degrees: DegreeVector, coeffs: Vec<Vec<Complex64>>) -> Result<Self> {
        let h = PolySystem::new(degrees, coeffs)?;
        Ok(h.dehomogenize())
    }

    /// Builds a system from `(affine exponents, coefficient)` terms; each
    /// exponent tuple has `n` entries and total degree at most `d_i`.
    pub fn from_terms(degrees: &DegreeVector, terms: &[Vec<(Vec<u32>, Complex64)>]) -> Result<Self> {
        let mut lifted = Vec::with_capacity(terms.len());
        for (i, eq) in terms.iter().enumerate() {
            let d = degrees.degrees().get(i).copied().unwrap_or(0);
            let mut out = Vec::with_capacity(eq.len());
            for (exps, c) in eq {
                if exps.len() != degrees.n() {
                    return Err(Error::DimensionMismatch { expected: degrees.n(), found: exps.len() });
                }
                let total: u32 = exps.iter().sum();
                if total > d {
                    return Err(Error::Parse(format!("monomial {exps:?} exceeds degree {d} of equation {i}")));
                }
                let mut full = Vec::with_capacity(exps.len() + 1);
                full.push(d - total);
                full.extend_from_slice(exps);
                out.push((full, *c));
            }
            lifted.push(out);
        }
        Ok(PolySystem::from_terms(degrees, &lifted)?.dehomogenize())
    }

    pub fn degrees(&self) -> &DegreeVector {
        &self.degrees
    }

    pub fn n(&self) -> usize {
        self.degrees.n()
    }

    pub fn coeffs(&self) -> &[Vec<Complex64>] {
        &self.coeffs
    }

    /// Coefficient of `x^b` in equation `i`.
    pub fn coeff(&self, equation: usize, exponents: &[u32]) -> Option<Complex64> {
        let d = self.degrees.degrees()[equation];
        let total: u32 = exponents.iter().sum();
        if total > d {
            return None;
        }
        let mut full = vec![d - total];
        full.extend_from_slice(exponents);
        let idx = self.degrees.basis(equation).index_of(&full)?;
        Some(self.coeffs[equation][idx])
    }

    /// Largest total degree carrying a nonzero coefficient, per equation.
    pub fn actual_degrees(&self) -> Vec<u32> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, eq)| {
                let basis = self.degrees.basis(i);
                eq.iter()
                    .zip(basis.iter())
                    .filter(|(c, _)| c.norm() != 0.0)
                    .map(|(_, exps)| basis.degree() - exps[0])
                    .max()
                    .unwrap_or(0)
            })
            .collect()
    }

    /// `X_0^(d_i - |b|) X^b` for every affine monomial `x^b`.
    pub fn homogenize(&self) -> PolySystem {
        PolySystem { degrees: self.degrees.clone(), coeffs: self.coeffs.clone() }
    }

    fn lift(&self, x: &[Complex64]) -> Result<DVector<Complex64>> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: x.len() });
        }
        let mut z = DVector::from_element(x.len() + 1, Complex64::new(1.0, 0.0));
        z.rows_mut(1, x.len()).copy_from_slice(x);
        Ok(z)
    }

    pub fn evaluate(&self, x: &[Complex64]) -> Result<DVector<Complex64>> {
        self.homogenize().evaluate(&self.lift(x)?)
    }

    /// The square `n x n` Jacobian `df_i / dx_j`.
    pub fn jacobian(&self, x: &[Complex64]) -> Result<DMatrix<Complex64>> {
        let full = self.homogenize().jacobian(&self.lift(x)?)?;
        Ok(full.columns(1, self.n()).into_owned())
    }
}

/// Dense products of homogeneous polynomials, used to expand compositions
/// with linear maps back into the monomial basis.
pub(crate) mod dense {
    use super::*;

    /// Product of two homogeneous polynomials given in their own bases.
    pub fn multiply(
        a: &[Complex64],
        basis_a: &MonomialBasis,
        b: &[Complex64],
        basis_b: &MonomialBasis,
        out_basis: &MonomialBasis,
    ) -> Vec<Complex64> {
        debug_assert_eq!(out_basis.degree(), basis_a.degree() + basis_b.degree());
        let mut out = vec![Complex64::new(0.0, 0.0); out_basis.len()];
        let mut exps = vec![0u32; out_basis.nvars()];
        for (&ca, ea) in a.iter().zip(basis_a.iter()) {
            if ca.norm_sqr() == 0.0 {
                continue;
            }
            for (&cb, eb) in b.iter().zip(basis_b.iter()) {
                if cb.norm_sqr() == 0.0 {
                    continue;
                }
                for (e, (&x, &y)) in exps.iter_mut().zip(ea.iter().zip(eb)) {
                    *e = x + y;
                }
                let idx = out_basis.index_of(&exps).expect("degrees add up");
                out[idx] += ca * cb;
            }
        }
        out
    }

    /// Powers `L^0, ..., L^max` of a linear form `L(z) = sum_j l_j z_j`.
    /// The degree-one basis lists `X_0, ..., X_n` in order, so `linear`
    /// doubles as the coefficient vector of `L`.
    pub fn linear_form_powers(linear: &[Complex64], max: u32) -> Vec<(MonomialBasis, Vec<Complex64>)> {
        let nvars = linear.len();
        let one = MonomialBasis::new(nvars, 1);
        let mut out = vec![(MonomialBasis::new(nvars, 0), vec![Complex64::new(1.0, 0.0)])];
        for k in 1..=max {
            let next_basis = MonomialBasis::new(nvars, k);
            let (prev_basis, prev) = out.last().expect("non-empty");
            let next = multiply(prev, prev_basis, linear, &one, &next_basis);
            out.push((next_basis, next));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn sys(degrees: &[u32], terms: &[&[(&[u32], f64)]]) -> PolySystem {
        let dv = DegreeVector::new(degrees.to_vec()).unwrap();
        let terms: Vec<Vec<(Vec<u32>, Complex64)>> =
            terms.iter().map(|eq| eq.iter().map(|(e, v)| (e.to_vec(), c(*v))).collect()).collect();
        PolySystem::from_terms(&dv, &terms).unwrap()
    }

    fn point(v: &[f64]) -> DVector<Complex64> {
        DVector::from_iterator(v.len(), v.iter().map(|&x| c(x)))
    }

    #[test]
    fn basis_order_is_descending_lex() {
        let b = MonomialBasis::new(3, 2);
        let all: Vec<Vec<u32>> = b.iter().map(|e| e.to_vec()).collect();
        assert_eq!(all, vec![vec![2, 0, 0], vec![1, 1, 0], vec![1, 0, 1], vec![0, 2, 0], vec![0, 1, 1], vec![0, 0, 2]]);
    }

    #[test]
    fn index_round_trip_small_bases() {
        for nvars in 1..=7 {
            for d in 0..=6 {
                let b = MonomialBasis::new(nvars, d);
                assert_eq!(b.len(), binomial(nvars - 1 + d as usize, d as usize));
                for (i, e) in b.iter().enumerate() {
                    assert_eq!(b.index_of(e), Some(i));
                }
            }
        }
        let b = MonomialBasis::new(3, 2);
        assert_eq!(b.index_of(&[1, 1, 1]), None);
        assert_eq!(b.index_of(&[1, 1]), None);
    }

    #[test]
    fn multinomials() {
        assert_eq!(multinomial(&[1, 1]), 2.0);
        assert_eq!(multinomial(&[2, 0]), 1.0);
        assert_eq!(multinomial(&[2, 1, 1]), 12.0);
        assert_eq!(multinomial(&[10, 10]), 184756.0);
        let big = multinomial(&[20, 20, 20]);
        assert!((big / 5.778_312_144_784_758e26 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn space_dimension_examples() {
        assert_eq!(space_dimension(&[2, 2]).unwrap(), 12);
        assert_eq!(space_dimension(&[1]).unwrap(), 2);
        assert_eq!(space_dimension(&[2, 2, 2]).unwrap(), 30);
        assert_eq!(space_dimension(&[2, 2, 2, 2]).unwrap(), 60);
        assert!(matches!(space_dimension(&[u32::MAX; 40]), Err(Error::Overflow(_))));
    }

    #[test]
    fn degree_vector_validation() {
        assert!(DegreeVector::new(vec![]).is_err());
        assert!(DegreeVector::new(vec![2, 0]).is_err());
        let dv = DegreeVector::new(vec![2, 3]).unwrap();
        assert_eq!(dv.max_degree(), 3);
        assert_eq!(dv.bezout_number().unwrap(), 6);
        assert_eq!(dv.nvars(), 3);
    }

    #[test]
    fn evaluate_examples() {
        let s = 0.5f64.sqrt();
        let h = sys(&[2], &[&[(&[0, 2], 1.0), (&[2, 0], -1.0)]]);
        assert!(h.evaluate(&point(&[s, s])).unwrap()[0].norm() < 1e-15);

        let h = sys(&[2], &[&[(&[2, 0], 1.0)]]);
        assert_eq!(h.evaluate(&point(&[0.0, 1.0])).unwrap()[0], c(0.0));

        let r5 = 5f64.sqrt();
        let h = sys(&[2], &[&[(&[1, 1], 1.0), (&[0, 2], 1.0)]]);
        let v = h.evaluate(&point(&[1.0 / r5, 2.0 / r5])).unwrap()[0];
        assert!((v - c(6.0 / 5.0)).norm() < 1e-15);

        assert!(matches!(h.evaluate(&point(&[1.0, 2.0, 3.0])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn jacobian_examples() {
        let h = sys(&[2], &[&[(&[0, 2], 1.0), (&[2, 0], -1.0)]]);
        let j = h.jacobian(&point(&[0.3, -0.7])).unwrap();
        assert!((j[(0, 0)] - c(-0.6)).norm() < 1e-15);
        assert!((j[(0, 1)] - c(-1.4)).norm() < 1e-15);

        let h = sys(&[2], &[&[(&[1, 1], 1.0)]]);
        let j = h.jacobian(&point(&[1.0, 0.0])).unwrap();
        assert_eq!(j[(0, 0)], c(0.0));
        assert_eq!(j[(0, 1)], c(1.0));
    }

    #[test]
    fn homogenize_examples() {
        let dv = DegreeVector::new(vec![2]).unwrap();
        let f = AffineSystem::from_terms(&dv, &[vec![(vec![2], c(1.0)), (vec![0], c(-1.0))]]).unwrap();
        let h = f.homogenize();
        assert_eq!(h, sys(&[2], &[&[(&[0, 2], 1.0), (&[2, 0], -1.0)]]));
        assert_eq!(h.dehomogenize(), f);
        assert_eq!(f.coeff(0, &[0]), Some(c(-1.0)));

        let dv = DegreeVector::new(vec![1]).unwrap();
        let f = AffineSystem::from_terms(&dv, &[vec![(vec![1], c(1.0)), (vec![0], c(2.0))]]).unwrap();
        assert_eq!(f.homogenize(), sys(&[1], &[&[(&[0, 1], 1.0), (&[1, 0], 2.0)]]));

        // A zero of f lifts to a zero of the homogenization.
        let h = f.homogenize();
        assert!(h.evaluate(&point(&[1.0, -2.0])).unwrap()[0].norm() < 1e-15);
    }

    #[test]
    fn dehomogenize_examples() {
        let h = sys(&[3], &[&[(&[3, 0], 1.0)]]);
        let f = h.dehomogenize();
        assert_eq!(f.actual_degrees(), vec![0]);
        assert_eq!(f.evaluate(&[c(7.0)]).unwrap()[0], c(1.0));

        let h = sys(&[2, 3], &[&[(&[0, 1, 1], 1.0)], &[(&[1, 1, 1], 2.0)]]);
        let f = h.dehomogenize();
        let actual = f.actual_degrees();
        assert!(actual.iter().zip(f.degrees().degrees()).all(|(a, d)| a <= d));
        assert_eq!(actual, vec![2, 2]);
    }

    #[test]
    fn affine_jacobian_drops_homogenizing_column() {
        let dv = DegreeVector::new(vec![2, 1]).unwrap();
        let f = AffineSystem::from_terms(
            &dv,
            &[vec![(vec![1, 1], c(1.0)), (vec![0, 0], c(-1.0))], vec![(vec![1, 0], c(1.0)), (vec![0, 1], c(-3.0))]],
        )
        .unwrap();
        let j = f.jacobian(&[c(2.0), c(5.0)]).unwrap();
        assert_eq!(j.shape(), (2, 2));
        assert_eq!(j[(0, 0)], c(5.0));
        assert_eq!(j[(0, 1)], c(2.0));
        assert_eq!(j[(1, 1)], c(-3.0));
    }

    #[test]
    fn projective_point_normalizes() {
        let p = ProjectivePoint::new(point(&[3.0, 4.0])).unwrap();
        assert!((p.coords().norm() - 1.0).abs() < 1e-15);
        assert!(ProjectivePoint::new(point(&[0.0, 0.0])).is_err());
        let q = ProjectivePoint::from_affine(&[c(2.0)]);
        let x = q.to_affine().unwrap();
        assert!((x[0] - c(2.0)).norm() < 1e-15);
        assert!(ProjectivePoint::basis_vector(3, 1).to_affine().is_none());
    }

    #[test]
    fn dense_multiply_matches_evaluation() {
        let b1 = MonomialBasis::new(3, 1);
        let b2 = MonomialBasis::new(3, 2);
        let b3 = MonomialBasis::new(3, 3);
        let p = vec![c(1.0), c(-2.0), c(0.5)];
        let q: Vec<Complex64> = (0..b2.len()).map(|i| Complex64::new(i as f64, 1.0)).collect();
        let prod = dense::multiply(&p, &b1, &q, &b2, &b3);
        let z = [Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.5), c(0.9)];
        let eval = |coeffs: &[Complex64], b: &MonomialBasis| -> Complex64 {
            coeffs
                .iter()
                .zip(b.iter())
                .map(|(cf, e)| cf * e.iter().zip(&z).map(|(&a, zj)| zj.powu(a)).product::<Complex64>())
                .sum()
        };
        let lhs = eval(&prod, &b3);
        let rhs = eval(&p, &b1) * eval(&q, &b2);
        assert!((lhs - rhs).norm() < 1e-13);
    }
}
