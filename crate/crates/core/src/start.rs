//! Start systems, initial pairs and the solvers built on them.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{kernel_vector, random_unitary, unitary_mapping_to_e0};
use crate::metric::{linear_compose, normalize_to_sphere, riemann_distance, unitary_compose, SphereSystem};
use crate::newton::{certify_projective, refine, Certificate};
use crate::poly::{dense, AffineSystem, DegreeVector, PolySystem, ProjectivePoint};
use crate::sampling::{gaussian_vector, random_phase, uniform_ball};
use crate::tracker::{track_pair, TrackResult, TrackerOptions};

/// Newton iterations allowed when refining endpoints against their zeros.
const REFINE_ITERS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairKind {
    TotalDegree,
    GoodPair,
    Random,
    RandomUnitary,
}

impl PairKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            PairKind::TotalDegree => "total",
            PairKind::GoodPair => "good",
            PairKind::Random => "random",
            PairKind::RandomUnitary => "unitary",
        }
    }
}

/// A start system on the sphere together with one of its exact zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialPair {
    pub g: SphereSystem,
    pub zeta0: ProjectivePoint,
    pub kind: PairKind,
}

/// A start system with all of its zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct StartSet {
    pub g: SphereSystem,
    pub roots: Vec<ProjectivePoint>,
}

impl StartSet {
    pub fn pair(&self, index: usize) -> InitialPair {
        InitialPair { g: self.g.clone(), zeta0: self.roots[index].clone(), kind: PairKind::TotalDegree }
    }
}

/// `gamma (X_1^{d_1} - X_0^{d_1}, ..., X_n^{d_n} - X_0^{d_n})` on the sphere,
/// with a uniformly random phase `gamma`.
pub fn total_degree_start<R: Rng + ?Sized>(degrees: &DegreeVector, rng: &mut R) -> Result<StartSet> {
    total_degree_start_with_phase(degrees, random_phase(rng))
}

/// Roots are listed in lexicographic order of the exponents `k_i` of
/// `omega_i = exp(2 pi i k_i / d_i)`.
pub fn total_degree_start_with_phase(degrees: &DegreeVector, gamma: Complex64) -> Result<StartSet> {
    let n = degrees.n();
    let terms: Vec<Vec<(Vec<u32>, Complex64)>> = degrees
        .degrees()
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let mut xi = vec![0; n + 1];
            xi[i + 1] = d;
            let mut x0 = vec![0; n + 1];
            x0[0] = d;
            vec![(xi, gamma), (x0, -gamma)]
        })
        .collect();
    let g = normalize_to_sphere(&PolySystem::from_terms(degrees, &terms)?)?;

    let count = degrees.bezout_number()?;
    let mut roots = Vec::with_capacity(count);
    let mut k = vec![0u32; n];
    for _ in 0..count {
        let mut coords = Vec::with_capacity(n + 1);
        coords.push(Complex64::new(1.0, 0.0));
        for (&ki, &d) in k.iter().zip(degrees.degrees()) {
            let angle = 2.0 * std::f64::consts::PI * f64::from(ki) / f64::from(d);
            coords.push(Complex64::from_polar(1.0, angle));
        }
        roots.push(ProjectivePoint::from_slice(&coords)?);
        for (ki, &d) in k.iter_mut().zip(degrees.degrees()).rev() {
            *ki += 1;
            if *ki < d {
                break;
            }
            *ki = 0;
        }
    }
    Ok(StartSet { g, roots })
}

/// The unnormalized good system `(d_i^{1/2} X_0^{d_i - 1} X_i)_i`, of norm `sqrt(n)`.
pub fn good_system(degrees: &DegreeVector) -> PolySystem {
    let n = degrees.n();
    let terms: Vec<Vec<(Vec<u32>, Complex64)>> = degrees
        .degrees()
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let mut e = vec![0; n + 1];
            e[0] = d - 1;
            e[i + 1] += 1;
            vec![(e, Complex64::new(f64::from(d).sqrt(), 0.0))]
        })
        .collect();
    PolySystem::from_terms(degrees, &terms).expect("exponents sum to the degree")
}

/// The good system on the sphere with its zero `e_0`.
pub fn good_initial_pair(degrees: &DegreeVector) -> InitialPair {
    InitialPair {
        g: normalize_to_sphere(&good_system(degrees)).expect("nonzero system"),
        zeta0: ProjectivePoint::basis_vector(degrees.nvars(), 0),
        kind: PairKind::GoodPair,
    }
}

/// Standard complex Gaussian coordinates in the Bombieri-Weyl orthonormal
/// basis; the normalized result is uniform on the sphere.
pub fn random_system_on_sphere<R: Rng + ?Sized>(degrees: &DegreeVector, rng: &mut R) -> SphereSystem {
    let coeffs = (0..degrees.n())
        .map(|i| {
            let basis = degrees.basis(i);
            gaussian_vector(basis.len(), rng).iter().zip(basis.multinomials()).map(|(g, m)| g * m.sqrt()).collect()
        })
        .collect();
    let h = PolySystem::new(degrees.clone(), coeffs).expect("lengths match the bases");
    normalize_to_sphere(&h).expect("a Gaussian system is nonzero almost surely")
}

/// The `n x (n + 1)` block `M` of a point drawn uniformly from the unit ball
/// of `C^{N+1}`; the remaining coordinates are discarded.
pub fn ball_matrix<R: Rng + ?Sized>(degrees: &DegreeVector, rng: &mut R) -> Result<DMatrix<Complex64>> {
    let n = degrees.n();
    let sample = uniform_ball(degrees.space_dimension()?, rng);
    Ok(DMatrix::from_row_slice(n, n + 1, &sample.as_slice()[..n * (n + 1)]))
}

/// Uniform sample from the unit ball of the systems vanishing to second
/// order at `e_0`: every coefficient on `X_0^{d_i}` or `X_0^{d_i - 1} X_j` is zero.
pub fn random_in_r_e0<R: Rng + ?Sized>(degrees: &DegreeVector, rng: &mut R) -> PolySystem {
    let slots: Vec<Vec<usize>> = (0..degrees.n())
        .map(|i| {
            let d = degrees.degrees()[i];
            let basis = degrees.basis(i);
            (0..basis.len()).filter(|&k| d >= 2 && basis.exponent(k)[0] <= d - 2).collect()
        })
        .collect();
    let total: usize = slots.iter().map(Vec::len).sum();
    let mut h = PolySystem::zeros(degrees);
    if total == 0 {
        return h;
    }
    let sample = uniform_ball(total, rng);
    let mut next = sample.iter();
    for (i, eq_slots) in slots.iter().enumerate() {
        let basis = degrees.basis(i);
        let eq = &mut h.coeffs_mut()[i];
        for &k in eq_slots {
            eq[k] = next.next().expect("one draw per slot") * basis.multinomial(k).sqrt();
        }
    }
    h
}

/// `Diag(<z, zeta>^{d_i - 1} sqrt(d_i)) M z` in the dense basis.
fn kernel_term(degrees: &DegreeVector, m: &DMatrix<Complex64>, zeta: &ProjectivePoint) -> PolySystem {
    let nvars = degrees.nvars();
    let conj: Vec<Complex64> = zeta.coords().iter().map(|c| c.conj()).collect();
    let powers = dense::linear_form_powers(&conj, degrees.max_degree().saturating_sub(1));
    let linear_basis = crate::poly::MonomialBasis::new(nvars, 1);
    let mut out = PolySystem::zeros(degrees);
    for (i, &d) in degrees.degrees().iter().enumerate() {
        let row: Vec<Complex64> = m.row(i).iter().map(|c| c * f64::from(d).sqrt()).collect();
        let (pb, pc) = &powers[(d - 1) as usize];
        out.coeffs_mut()[i] = dense::multiply(pc, pb, &row, &linear_basis, degrees.basis(i));
    }
    out
}

/// Random initial pair whose zero is uniformly distributed and whose system
/// is uniform on the sphere given the zero.
///
/// A rank-deficient `M` is redrawn once before giving up.
pub fn random_initial_pair<R: Rng + ?Sized>(degrees: &DegreeVector, rng: &mut R) -> Result<InitialPair> {
    let (pair, _) = random_initial_pair_with_matrix(degrees, rng)?;
    Ok(pair)
}

/// [`random_initial_pair`], also returning the matrix `M`.
pub fn random_initial_pair_with_matrix<R: Rng + ?Sized>(
    degrees: &DegreeVector,
    rng: &mut R,
) -> Result<(InitialPair, DMatrix<Complex64>)> {
    let mut attempt = 0;
    let (m, zeta0) = loop {
        let m = ball_matrix(degrees, rng)?;
        match kernel_vector(&m, rng) {
            Ok(zeta) => break (m, zeta),
            Err(Error::RankDeficient) if attempt == 0 => attempt += 1,
            Err(e) => return Err(e),
        }
    };
    let v = unitary_mapping_to_e0(&zeta0, rng);
    let h = linear_compose(&random_in_r_e0(degrees, rng), &v.adjoint());
    let frob2 = m.norm_squared();
    let weight = (1.0 - frob2).max(0.0).sqrt();
    let ghat =
        h.linear_combination(Complex64::new(weight, 0.0), &kernel_term(degrees, &m, &zeta0), Complex64::new(1.0, 0.0))?;
    let pair = InitialPair { g: normalize_to_sphere(&ghat)?, zeta0, kind: PairKind::Random };
    Ok((pair, m))
}

/// The good pair moved by a Haar-random unitary: `(g o U*, U e_0)`.
pub fn random_initial_pair_unitary<R: Rng + ?Sized>(degrees: &DegreeVector, rng: &mut R) -> Result<InitialPair> {
    let u = random_unitary(degrees.nvars(), rng);
    unitary_good_pair(degrees, &u)
}

pub fn unitary_good_pair(degrees: &DegreeVector, u: &DMatrix<Complex64>) -> Result<InitialPair> {
    let good = good_initial_pair(degrees);
    let moved = unitary_compose(&good.g, &u.adjoint())?;
    let zeta0 = ProjectivePoint::new(DVector::from_column_slice(u.column(0).as_slice()))?;
    Ok(InitialPair { g: normalize_to_sphere(&moved)?, zeta0, kind: PairKind::RandomUnitary })
}

/// Homogenizes and normalizes an affine target.
pub fn sphere_target(f: &AffineSystem) -> Result<SphereSystem> {
    normalize_to_sphere(&f.homogenize())
}

/// Tracks one path from a random initial pair to `f`.
pub fn solve_one<R: Rng + ?Sized>(f: &SphereSystem, rng: &mut R, opts: &TrackerOptions) -> Result<TrackResult> {
    let pair = random_initial_pair(f.degrees(), rng)?;
    track_from(&pair, f, opts)
}

pub fn track_from(pair: &InitialPair, f: &SphereSystem, opts: &TrackerOptions) -> Result<TrackResult> {
    track_pair(&pair.g, f, &pair.zeta0, opts)
}

/// One tracked path of a total-degree run.
#[derive(Debug, Clone, PartialEq)]
pub struct PathOutcome {
    pub index: usize,
    pub start: ProjectivePoint,
    pub result: TrackResult,
    /// Endpoint checked against its Newton-refined zero, when refinement converged.
    pub certificate: Option<Certificate>,
}

impl PathOutcome {
    pub fn refined(&self) -> Option<&ProjectivePoint> {
        self.certificate.as_ref().map(|c| &c.zero.point)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveAllReport {
    pub start: StartSet,
    pub paths: Vec<PathOutcome>,
    /// Pairs of paths whose refined endpoints are not separated by more than
    /// twice the largest certified radius.
    pub suspected_crossings: Vec<(usize, usize)>,
}

impl SolveAllReport {
    pub fn successes(&self) -> usize {
        self.paths.iter().filter(|p| p.result.is_success()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.successes() == self.start.roots.len() && self.suspected_crossings.is_empty()
    }

    /// Refined zeros of the successful paths, in path order.
    pub fn solutions(&self) -> Vec<ProjectivePoint> {
        self.paths.iter().filter(|p| p.result.is_success()).filter_map(|p| p.refined().cloned()).collect()
    }
}

/// Tracks every total-degree path to `f`, in parallel, keeping start-root order.
pub fn solve_all_total_degree<R: Rng + ?Sized>(
    f: &SphereSystem,
    rng: &mut R,
    opts: &TrackerOptions,
) -> Result<SolveAllReport> {
    let start = total_degree_start(f.degrees(), rng)?;
    solve_all_from(f, start, opts)
}

pub fn solve_all_from(f: &SphereSystem, start: StartSet, opts: &TrackerOptions) -> Result<SolveAllReport> {
    let paths: Vec<PathOutcome> = start
        .roots
        .par_iter()
        .enumerate()
        .map(|(index, root)| {
            let result = track_pair(&start.g, f, root, opts)?;
            let certificate = if result.is_success() {
                refine(f, &result.endpoint, REFINE_ITERS)
                    .ok()
                    .map(|zeta| certify_projective(f, &result.endpoint, &zeta))
            } else {
                None
            };
            Ok(PathOutcome { index, start: root.clone(), result, certificate })
        })
        .collect::<Result<_>>()?;

    let max_radius = paths.iter().filter_map(|p| p.certificate.as_ref().map(|c| c.zero.radius)).fold(0.0, f64::max);
    let mut suspected_crossings = Vec::new();
    for (a, pa) in paths.iter().enumerate() {
        for pb in &paths[a + 1..] {
            if let (Some(za), Some(zb)) = (pa.refined(), pb.refined()) {
                if riemann_distance(za, zb) <= 2.0 * max_radius {
                    suspected_crossings.push((pa.index, pb.index));
                }
            }
        }
    }
    Ok(SolveAllReport { start, paths, suspected_crossings })
}
