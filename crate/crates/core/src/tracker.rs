//! Certified path tracking on the unit sphere of systems.
//!
//! Every step evaluates `phi = chi_1 * chi_2` at the current point and moves
//! the homotopy parameter by an amount inside
//! `[k / (2 d^{3/2} phi), k / (d^{3/2} phi)]`, where `k = c / P` depends only
//! on the curvature bound of the path. One projective Newton step then
//! corrects the point. As long as the start point satisfies the halved
//! approximate-zero condition, every iterate stays an approximate zero of
//! the current system and the tracked zero never switches paths.

use std::f64::consts::SQRT_2;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::spectral_norm;
use crate::metric::{bw_inner, bw_norm, SphereSystem};
use crate::newton::{bordered_at, condition_mu_with, newton_update, refine, U0};
use crate::poly::{PolySystem, ProjectivePoint};

/// `c / P` for the arc-length parametrized linear homotopy.
pub const LINEAR_STEP_CONSTANT: f64 = 0.04804448;

/// Multiplier of `d^{3/2} C_0` in the step-count bound of linear tracking.
pub const LINEAR_COMPLEXITY_CONSTANT: f64 = 71.0;

/// Curvature bound under which the general formulas reproduce
/// [`LINEAR_STEP_CONSTANT`].
pub const LINEAR_CURVATURE: f64 = 0.353_553_390_593_273_8; // 2^{-3/2}

/// The constants `c`, `P` and `C` attached to a curvature bound `H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepConstants {
    pub c: f64,
    pub p: f64,
    /// Multiplier in `k <= ceil(C d^{3/2} C_0)`.
    pub complexity: f64,
}

impl StepConstants {
    pub fn from_curvature(h: f64, u0: f64) -> Self {
        let p = SQRT_2 + (4.0 + 5.0 * h * h).sqrt();
        let a = 1.0 - SQRT_2 * u0 / 2.0;
        let b = 1.0 + SQRT_2 * u0 / 2.0;
        let c = a.powf(SQRT_2) / b * (1.0 - (1.0 - u0 / (SQRT_2 + 2.0 * u0)).powf(p / SQRT_2));
        let complexity = 2.0 * p / a.powf(1.0 + SQRT_2) * (1.0 / c + b / a.powf(SQRT_2));
        StepConstants { c, p, complexity }
    }

    pub fn ratio(&self) -> f64 {
        self.c / self.p
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackerOptions {
    /// `c / P`; only used by linear tracking.
    pub c_over_p: f64,
    pub u0: f64,
    /// Failure threshold on the step length.
    pub t_step_min: f64,
    /// Position inside the admissible step interval, in `[1/2, 1]`.
    pub step_fraction: f64,
    pub max_steps: usize,
    /// Keep every intermediate point in [`TrackResult::points`].
    pub record_points: bool,
}

impl Default for TrackerOptions {
    fn default() -> Self {
        TrackerOptions {
            c_over_p: LINEAR_STEP_CONSTANT,
            u0: U0,
            t_step_min: 1e-6,
            step_fraction: 1.0,
            max_steps: 1_000_000,
            record_points: false,
        }
    }
}

impl TrackerOptions {
    fn validate(&self) -> Result<()> {
        if !(0.5..=1.0).contains(&self.step_fraction) {
            return Err(Error::InvalidArgument(format!("step_fraction {} outside [1/2, 1]", self.step_fraction)));
        }
        if !(self.c_over_p > 0.0) {
            return Err(Error::InvalidArgument("c/P must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TrackStatus {
    Success,
    MinStepReached,
    SingularLinearSolve,
    MaxSteps,
}

impl TrackStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            TrackStatus::Success => "success",
            TrackStatus::MinStepReached => "min_step",
            TrackStatus::SingularLinearSolve => "singular",
            TrackStatus::MaxSteps => "max_steps",
        }
    }
}

/// One attempted step. `s` is the parameter at which the step starts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub s: f64,
    pub t: f64,
    pub phi: f64,
    pub chi1: f64,
    pub chi2: f64,
    /// Always true for certified steps; the heuristic tracker records
    /// rejected attempts as well.
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackResult {
    pub endpoint: ProjectivePoint,
    pub status: TrackStatus,
    /// Accepted steps.
    pub num_steps: usize,
    /// Homotopy parameter reached.
    pub s_final: f64,
    pub trace: Vec<StepRecord>,
    /// `z_1, ..., z_k` when requested through the options.
    pub points: Vec<ProjectivePoint>,
}

impl TrackResult {
    pub fn is_success(&self) -> bool {
        self.status == TrackStatus::Success
    }
}

/// A `C^1` curve of systems on the sphere with a known curvature bound `H`,
/// i.e. `|h''| <= d^{3/2} H |h'|^2` almost everywhere.
pub trait GeneralHomotopy {
    fn length(&self) -> f64;
    fn value_at(&self, t: f64) -> PolySystem;
    fn derivative_at(&self, t: f64) -> PolySystem;
    fn curvature_bound(&self) -> f64;
}

/// The great-circle path `h_s = g cos s + f_perp sin s` from `g` to `f`.
#[derive(Debug, Clone)]
pub struct LinearHomotopy {
    start: SphereSystem,
    target: SphereSystem,
    r: f64,
    length: f64,
    fperp: PolySystem,
}

impl LinearHomotopy {
    pub fn new(g: &SphereSystem, f: &SphereSystem) -> Result<Self> {
        let r = bw_inner(f, g)?.re;
        if r.abs() >= 1.0 - 1e-12 {
            return Err(Error::DegenerateHomotopy);
        }
        let scale = 1.0 / (1.0 - r * r).sqrt();
        let fperp = f.linear_combination(Complex64::new(scale, 0.0), g, Complex64::new(-r * scale, 0.0))?;
        Ok(LinearHomotopy { start: g.clone(), target: f.clone(), r, length: r.clamp(-1.0, 1.0).acos(), fperp })
    }

    pub fn start(&self) -> &SphereSystem {
        &self.start
    }

    pub fn target(&self) -> &SphereSystem {
        &self.target
    }

    /// `Re <f, g>`.
    pub fn cosine(&self) -> f64 {
        self.r
    }

    /// Arc length `T = arccos Re <f, g>`.
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn fperp(&self) -> &PolySystem {
        &self.fperp
    }

    pub fn value_at(&self, s: f64) -> PolySystem {
        if s == self.length {
            return self.target.system().clone();
        }
        let (sin, cos) = s.sin_cos();
        self.start
            .linear_combination(Complex64::new(cos, 0.0), &self.fperp, Complex64::new(sin, 0.0))
            .expect("same degrees")
    }

    /// Unit tangent `-g sin s + f_perp cos s`.
    pub fn tangent_at(&self, s: f64) -> PolySystem {
        let (sin, cos) = s.sin_cos();
        self.start
            .linear_combination(Complex64::new(-sin, 0.0), &self.fperp, Complex64::new(cos, 0.0))
            .expect("same degrees")
    }

    fn max_degree(&self) -> u32 {
        self.start.degrees().max_degree()
    }
}

impl GeneralHomotopy for LinearHomotopy {
    fn length(&self) -> f64 {
        self.length
    }

    fn value_at(&self, t: f64) -> PolySystem {
        LinearHomotopy::value_at(self, t)
    }

    fn derivative_at(&self, t: f64) -> PolySystem {
        self.tangent_at(t)
    }

    fn curvature_bound(&self) -> f64 {
        // |h''| = |h'| = 1 along a great circle.
        LINEAR_CURVATURE.max(f64::from(self.max_degree()).powf(-1.5))
    }
}

/// Sub-arc `[from, to]` of another homotopy, reparametrized to start at 0.
#[derive(Debug, Clone)]
pub struct Segment<'a, H> {
    pub path: &'a H,
    pub from: f64,
    pub to: f64,
}

impl<H: GeneralHomotopy> GeneralHomotopy for Segment<'_, H> {
    fn length(&self) -> f64 {
        self.to - self.from
    }

    fn value_at(&self, t: f64) -> PolySystem {
        if t == self.length() {
            return self.path.value_at(self.to);
        }
        self.path.value_at(self.from + t)
    }

    fn derivative_at(&self, t: f64) -> PolySystem {
        self.path.derivative_at(self.from + t)
    }

    fn curvature_bound(&self) -> f64 {
        self.path.curvature_bound()
    }
}

fn sqrt_degree_diagonal(g: &PolySystem) -> DVector<f64> {
    let mut diag: Vec<f64> = g.degrees().degrees().iter().map(|&d| f64::from(d).sqrt()).collect();
    diag.push(1.0);
    DVector::from_vec(diag)
}

/// `chi_1` and `chi_2` from a single factorization of `(Dg(z); z*)`.
fn chis(g: &PolySystem, gdot: &PolySystem, z: &DVector<Complex64>) -> Result<(f64, f64)> {
    let (_, factor) = bordered_at(g, z)?;
    let mut scaled: DMatrix<Complex64> = factor.inverse().clone();
    for (j, s) in sqrt_degree_diagonal(g).iter().enumerate() {
        scaled.column_mut(j).scale_mut(*s);
    }
    let chi1 = spectral_norm(&scaled);
    let rhs = gdot.evaluate(z)?.push(Complex64::new(0.0, 0.0));
    let moved = factor.solve(&rhs);
    let chi2 = (bw_norm(gdot).powi(2) + moved.norm_squared()).sqrt();
    Ok((chi1, chi2))
}

/// `|(Dg(z); z*)^{-1} Diag(sqrt(d_1), ..., sqrt(d_n), 1)|`.
pub fn chi1(g: &PolySystem, z: &ProjectivePoint) -> Result<f64> {
    let (_, factor) = bordered_at(g, z.coords())?;
    let mut scaled: DMatrix<Complex64> = factor.inverse().clone();
    for (j, s) in sqrt_degree_diagonal(g).iter().enumerate() {
        scaled.column_mut(j).scale_mut(*s);
    }
    Ok(spectral_norm(&scaled))
}

/// `(|g'|^2 + |(Dg(z); z*)^{-1} (g'(z); 0)|^2)^{1/2}`.
pub fn chi2(g: &PolySystem, gdot: &PolySystem, z: &ProjectivePoint) -> Result<f64> {
    let (_, factor) = bordered_at(g, z.coords())?;
    let rhs = gdot.evaluate(z.coords())?.push(Complex64::new(0.0, 0.0));
    let moved = factor.solve(&rhs);
    Ok((bw_norm(gdot).powi(2) + moved.norm_squared()).sqrt())
}

/// Step length chosen by [`certified_step`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepChoice {
    pub t: f64,
    pub phi: f64,
    pub chi1: f64,
    pub chi2: f64,
}

impl StepChoice {
    /// Admissible interval `[k / (2 d^{3/2} phi), k / (d^{3/2} phi)]`.
    pub fn interval(step_constant: f64, max_degree: u32, phi: f64) -> (f64, f64) {
        let upper = step_constant / (f64::from(max_degree).powf(1.5) * phi);
        (upper / 2.0, upper)
    }
}

fn choose_step(
    g: &PolySystem,
    gdot: &PolySystem,
    z: &DVector<Complex64>,
    step_constant: f64,
    step_fraction: f64,
) -> Result<StepChoice> {
    let (chi1, chi2) = chis(g, gdot, z)?;
    let phi = chi1 * chi2;
    let (_, upper) = StepChoice::interval(step_constant, g.degrees().max_degree(), phi);
    Ok(StepChoice { t: step_fraction * upper, phi, chi1, chi2 })
}

/// Certified step length for linear tracking at `(g, g', z)`.
///
/// Returns [`Error::MinStepReached`] when the step falls below
/// `opts.t_step_min`.
pub fn certified_step(
    g: &PolySystem,
    gdot: &PolySystem,
    z: &ProjectivePoint,
    opts: &TrackerOptions,
) -> Result<StepChoice> {
    opts.validate()?;
    let choice = choose_step(g, gdot, z.coords(), opts.c_over_p, opts.step_fraction)?;
    if choice.t < opts.t_step_min {
        return Err(Error::MinStepReached { t: choice.t });
    }
    Ok(choice)
}

fn run<V, D>(
    length: f64,
    value_at: V,
    derivative_at: D,
    z0: &ProjectivePoint,
    step_constant: f64,
    opts: &TrackerOptions,
) -> TrackResult
where
    V: Fn(f64) -> PolySystem,
    D: Fn(f64) -> PolySystem,
{
    let mut z = z0.coords().clone();
    let mut s = 0.0;
    let mut trace = Vec::new();
    let mut points = Vec::new();
    let finish = |z: DVector<Complex64>, status, s, trace: Vec<StepRecord>, points| {
        let num_steps = trace.len();
        TrackResult {
            endpoint: ProjectivePoint::new(z).expect("iterates are normalized"),
            status,
            num_steps,
            s_final: s,
            trace,
            points,
        }
    };
    while s != length {
        if trace.len() >= opts.max_steps {
            return finish(z, TrackStatus::MaxSteps, s, trace, points);
        }
        let g = value_at(s);
        let gdot = derivative_at(s);
        let choice = match choose_step(&g, &gdot, &z, step_constant, opts.step_fraction) {
            Ok(choice) => choice,
            Err(_) => return finish(z, TrackStatus::SingularLinearSolve, s, trace, points),
        };
        let remaining = length - s;
        let (t, next_s) = if choice.t >= remaining {
            (remaining, length)
        } else if choice.t < opts.t_step_min {
            return finish(z, TrackStatus::MinStepReached, s, trace, points);
        } else {
            (choice.t, s + choice.t)
        };
        let next_g = value_at(next_s);
        let next = match newton_update(&next_g, &z) {
            Ok((next, _)) => next,
            Err(_) => return finish(z, TrackStatus::SingularLinearSolve, s, trace, points),
        };
        z = next.unscale(next.norm());
        trace.push(StepRecord { s, t, phi: choice.phi, chi1: choice.chi1, chi2: choice.chi2, accepted: true });
        if opts.record_points {
            points.push(ProjectivePoint::new(z.clone()).expect("normalized"));
        }
        s = next_s;
    }
    finish(z, TrackStatus::Success, s, trace, points)
}

/// Tracks the zero `z0` of `g` along the linear homotopy to `f`.
///
/// `z0` must satisfy the halved approximate-zero condition for the zero it
/// approximates; exact start zeros always do.
pub fn track_linear(homotopy: &LinearHomotopy, z0: &ProjectivePoint, opts: &TrackerOptions) -> Result<TrackResult> {
    opts.validate()?;
    check_start(homotopy.start(), z0)?;
    Ok(run(homotopy.length(), |s| homotopy.value_at(s), |s| homotopy.tangent_at(s), z0, opts.c_over_p, opts))
}

/// Tracks from `g` to `f`, returning immediately when they coincide.
pub fn track_pair(
    g: &SphereSystem,
    f: &SphereSystem,
    z0: &ProjectivePoint,
    opts: &TrackerOptions,
) -> Result<TrackResult> {
    if g == f {
        check_start(g, z0)?;
        return Ok(TrackResult {
            endpoint: z0.clone(),
            status: TrackStatus::Success,
            num_steps: 0,
            s_final: 0.0,
            trace: Vec::new(),
            points: Vec::new(),
        });
    }
    track_linear(&LinearHomotopy::new(g, f)?, z0, opts)
}

/// Tracks an arbitrary homotopy, with `c` and `P` derived from its
/// curvature bound.
pub fn track_general<H: GeneralHomotopy + ?Sized>(
    homotopy: &H,
    z0: &ProjectivePoint,
    opts: &TrackerOptions,
) -> Result<TrackResult> {
    opts.validate()?;
    let constants = StepConstants::from_curvature(homotopy.curvature_bound(), opts.u0);
    let start = homotopy.value_at(0.0);
    if z0.dim() != start.nvars() {
        return Err(Error::DimensionMismatch { expected: start.nvars(), found: z0.dim() });
    }
    Ok(run(homotopy.length(), |t| homotopy.value_at(t), |t| homotopy.derivative_at(t), z0, constants.ratio(), opts))
}

fn check_start(g: &PolySystem, z0: &ProjectivePoint) -> Result<()> {
    if z0.dim() != g.nvars() {
        return Err(Error::DimensionMismatch { expected: g.nvars(), found: z0.dim() });
    }
    Ok(())
}

/// Numerical condition length `C_0 = int_0^T mu(h_t, zeta_t) |(h'_t, zeta'_t)| dt`
/// of the lifted path through `z0`, by the trapezoid rule on `resolution`
/// equal pieces.
///
/// The zero is continued node to node by a tangent predictor followed by
/// Newton refinement; `zeta'_t` solves the bordered system with right-hand
/// side `-(h'_t(zeta_t); 0)`.
pub fn condition_length(homotopy: &LinearHomotopy, z0: &ProjectivePoint, resolution: usize) -> Result<f64> {
    if resolution == 0 {
        return Err(Error::InvalidArgument("resolution must be positive".into()));
    }
    let length = homotopy.length();
    let dt = length / resolution as f64;
    let mut zeta = refine(&homotopy.value_at(0.0), z0, 50)?;
    let mut total = 0.0;
    let mut previous = 0.0;
    for j in 0..=resolution {
        let t = if j == resolution { length } else { j as f64 * dt };
        let h = homotopy.value_at(t);
        let hdot = homotopy.tangent_at(t);
        if j > 0 {
            let corrected = refine(&h, &zeta, 50)?;
            zeta = corrected;
        }
        let z = zeta.coords();
        let (_, factor) = bordered_at(&h, z)?;
        let mu = condition_mu_with(&h, z, &factor);
        let rhs = hdot.evaluate(z)?.push(Complex64::new(0.0, 0.0));
        let velocity = -factor.solve(&rhs);
        let speed = (bw_norm(&hdot).powi(2) + velocity.norm_squared()).sqrt();
        let integrand = mu * speed;
        if j > 0 {
            total += 0.5 * dt * (previous + integrand);
        }
        previous = integrand;
        if j < resolution {
            let guess = z + velocity * Complex64::new(dt, 0.0);
            zeta = ProjectivePoint::new(guess)?;
        }
    }
    Ok(total)
}

/// `ceil(71 d^{3/2} C_0)`, the step-count bound of linear tracking.
pub fn linear_step_bound(max_degree: u32, condition_length: f64) -> f64 {
    (LINEAR_COMPLEXITY_CONSTANT * f64::from(max_degree).powf(1.5) * condition_length).ceil()
}
