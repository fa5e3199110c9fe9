//! Uncertified predictor-corrector tracking with adaptive step size.
//!
//! The predictor integrates `z' = -(Dh_t(z); z*)^{-1} (h'_t(z); 0)`, the
//! corrector runs a few projective Newton steps, and the step grows or
//! shrinks depending on whether the corrector settled.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::newton::{bordered_at, newton_update};
use crate::poly::{PolySystem, ProjectivePoint};
use crate::tracker::{GeneralHomotopy, StepRecord, TrackResult, TrackStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Predictor {
    Euler,
    RungeKutta4,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicOptions {
    pub predictor: Predictor,
    pub corrector_iters: usize,
    pub corrector_tol: f64,
    pub step_init: f64,
    pub step_max: f64,
    pub step_decrease: f64,
    pub step_increase: f64,
    /// Consecutive accepted steps before the step grows.
    pub increase_after: usize,
    pub t_step_min: f64,
    /// Cap on attempted steps, accepted or not.
    pub max_attempts: usize,
    /// Keep the point reached by every accepted step.
    pub record_points: bool,
}

impl Default for HeuristicOptions {
    fn default() -> Self {
        HeuristicOptions {
            predictor: Predictor::RungeKutta4,
            corrector_iters: 3,
            corrector_tol: 1e-6,
            step_init: 0.05,
            step_max: 0.1,
            step_decrease: 0.5,
            step_increase: 2.0,
            increase_after: 3,
            t_step_min: 1e-6,
            max_attempts: 100_000,
            record_points: false,
        }
    }
}

impl HeuristicOptions {
    fn validate(&self) -> Result<()> {
        if !(0.0 < self.step_decrease && self.step_decrease < 1.0 && self.step_increase > 1.0) {
            return Err(Error::InvalidArgument("step factors must satisfy 0 < decrease < 1 < increase".into()));
        }
        if !(self.step_init > 0.0 && self.step_max >= self.step_init) {
            return Err(Error::InvalidArgument("need 0 < step_init <= step_max".into()));
        }
        Ok(())
    }
}

/// `-(Dh(z); z*)^{-1} (h'(z); 0)`.
fn velocity(h: &PolySystem, hdot: &PolySystem, z: &DVector<Complex64>) -> Result<DVector<Complex64>> {
    let (_, factor) = bordered_at(h, z)?;
    let rhs = hdot.evaluate(z)?.push(Complex64::new(0.0, 0.0));
    Ok(-factor.solve(&rhs))
}

/// One predictor step of length `dt` from `(s, x)`, renormalized.
pub fn predict<H: GeneralHomotopy + ?Sized>(
    path: &H,
    s: f64,
    x: &ProjectivePoint,
    dt: f64,
    predictor: Predictor,
) -> Result<ProjectivePoint> {
    let z = x.coords();
    let field = |t: f64, z: &DVector<Complex64>| velocity(&path.value_at(t), &path.derivative_at(t), z);
    let scale = |v: &DVector<Complex64>, a: f64| v * Complex64::new(a, 0.0);
    let next = match predictor {
        Predictor::Euler => z + scale(&field(s, z)?, dt),
        Predictor::RungeKutta4 => {
            let k1 = field(s, z)?;
            let k2 = field(s + dt / 2.0, &(z + scale(&k1, dt / 2.0)))?;
            let k3 = field(s + dt / 2.0, &(z + scale(&k2, dt / 2.0)))?;
            let k4 = field(s + dt, &(z + scale(&k3, dt)))?;
            z + scale(&(k1 + scale(&k2, 2.0) + scale(&k3, 2.0) + k4), dt / 6.0)
        }
    };
    ProjectivePoint::new(next)
}

/// At most `iters` projective Newton steps, stopping once a correction is
/// smaller than `tol`. Returns the point and the size of the last correction.
pub fn correct(h: &PolySystem, x: &ProjectivePoint, iters: usize, tol: f64) -> Result<(ProjectivePoint, f64)> {
    let mut z = x.clone();
    let mut last = f64::INFINITY;
    for _ in 0..iters {
        let (next, size) = newton_update(h, z.coords())?;
        z = ProjectivePoint::new(next)?;
        last = size;
        if size < tol {
            break;
        }
    }
    Ok((z, last))
}

/// Adaptive predictor-corrector tracking from `z0` along `path`.
///
/// `num_steps` counts accepted steps only; the trace also records the
/// rejected attempts, with `phi`, `chi1` and `chi2` set to NaN. Recorded
/// points belong to the accepted steps only.
pub fn track_heuristic<H: GeneralHomotopy + ?Sized>(
    path: &H,
    z0: &ProjectivePoint,
    opts: &HeuristicOptions,
) -> Result<TrackResult> {
    opts.validate()?;
    let length = path.length();
    let mut z = z0.clone();
    let mut s = 0.0;
    let mut dt = opts.step_init;
    let mut streak = 0;
    let mut accepted = 0;
    let mut trace = Vec::new();
    let mut points = Vec::new();
    let status = loop {
        if s == length {
            break TrackStatus::Success;
        }
        if trace.len() >= opts.max_attempts {
            break TrackStatus::MaxSteps;
        }
        let remaining = length - s;
        let (t, next_s) = if dt >= remaining { (remaining, length) } else { (dt, s + dt) };
        let attempt = predict(path, s, &z, t, opts.predictor)
            .and_then(|p| correct(&path.value_at(next_s), &p, opts.corrector_iters, opts.corrector_tol));
        let ok = matches!(&attempt, Ok((_, err)) if *err < opts.corrector_tol);
        trace.push(StepRecord { s, t, phi: f64::NAN, chi1: f64::NAN, chi2: f64::NAN, accepted: ok });
        if ok {
            z = attempt.expect("checked above").0;
            if opts.record_points {
                points.push(z.clone());
            }
            s = next_s;
            accepted += 1;
            streak += 1;
            if streak >= opts.increase_after {
                dt = (dt * opts.step_increase).min(opts.step_max);
                streak = 0;
            }
        } else {
            streak = 0;
            dt *= opts.step_decrease;
            if dt < opts.t_step_min {
                break TrackStatus::MinStepReached;
            }
        }
    };
    Ok(TrackResult { endpoint: z, status, num_steps: accepted, s_final: s, trace, points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::riemann_distance;
    use crate::newton::refine;
    use crate::poly::DegreeVector;
    use crate::sampling::stream_rng;
    use crate::start::{random_system_on_sphere, total_degree_start};
    use crate::tracker::{track_linear, LinearHomotopy, TrackerOptions};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    /// `X_1^d - (a + b t) X_0^d`, whose root path is `(1, (a + b t)^{1/d})`.
    struct PowerPath {
        degree: u32,
        offset: f64,
        slope: f64,
    }

    impl PowerPath {
        fn root(&self, t: f64) -> ProjectivePoint {
            ProjectivePoint::from_slice(&[c(1.0), c((self.offset + self.slope * t).powf(1.0 / f64::from(self.degree)))])
                .unwrap()
        }

        fn system(&self, x0: f64, x1: f64) -> PolySystem {
            let dv = DegreeVector::new(vec![self.degree]).unwrap();
            PolySystem::from_terms(&dv, &[vec![(vec![0, self.degree], c(x1)), (vec![self.degree, 0], c(x0))]]).unwrap()
        }
    }

    impl GeneralHomotopy for PowerPath {
        fn length(&self) -> f64 {
            1.0
        }

        fn value_at(&self, t: f64) -> PolySystem {
            self.system(-(self.offset + self.slope * t), 1.0)
        }

        fn derivative_at(&self, _t: f64) -> PolySystem {
            self.system(-self.slope, 0.0)
        }

        fn curvature_bound(&self) -> f64 {
            0.0
        }
    }

    #[test]
    fn zero_step_predicts_nothing() {
        let path = PowerPath { degree: 2, offset: 1.0, slope: 1.0 };
        let x = path.root(0.3);
        for p in [Predictor::Euler, Predictor::RungeKutta4] {
            let y = predict(&path, 0.3, &x, 0.0, p).unwrap();
            assert!(riemann_distance(&x, &y) < 1e-15);
        }
    }

    #[test]
    fn euler_follows_linear_root_path() {
        // X_1 - t X_0 at t = 0: the tangent is orthogonal to e_0, so the
        // projective Euler step lands exactly on (1, dt).
        let path = PowerPath { degree: 1, offset: 0.0, slope: 1.0 };
        let x = ProjectivePoint::basis_vector(2, 0);
        for dt in [1e-3, 0.1, 0.5] {
            let y = predict(&path, 0.0, &x, dt, Predictor::Euler).unwrap();
            let exact = ProjectivePoint::from_slice(&[c(1.0), c(dt)]).unwrap();
            assert!(riemann_distance(&y, &exact) < 1e-15, "{dt}");
        }
    }

    #[test]
    fn rk4_local_error_is_fifth_order() {
        let path = PowerPath { degree: 2, offset: 1.0, slope: 1.0 };
        let s = 0.2;
        let x = path.root(s);
        let err = |dt: f64| {
            let y = predict(&path, s, &x, dt, Predictor::RungeKutta4).unwrap();
            riemann_distance(&y, &path.root(s + dt))
        };
        let ratio = err(0.2) / err(0.1);
        assert!((20.0..45.0).contains(&ratio), "{ratio}");
        let euler = |dt: f64| {
            let y = predict(&path, s, &x, dt, Predictor::Euler).unwrap();
            riemann_distance(&y, &path.root(s + dt))
        };
        let ratio = euler(0.02) / euler(0.01);
        assert!((3.0..5.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn corrector_examples() {
        let path = PowerPath { degree: 2, offset: 1.0, slope: 1.0 };
        let h = path.value_at(0.5);
        let root = path.root(0.5);
        let (_, err) = correct(&h, &root, 3, 1e-6).unwrap();
        assert!(err < 1e-15);

        let near = ProjectivePoint::from_slice(&[c(1.0), c(1.5f64.sqrt() + 1e-3)]).unwrap();
        let (z, err) = correct(&h, &near, 3, 1e-14).unwrap();
        assert!(err < 1e-10);
        assert!(riemann_distance(&z, &root) < 1e-12);

        let far = ProjectivePoint::from_slice(&[c(1.0), c(-0.2)]).unwrap();
        let (_, err) = correct(&h, &far, 1, 1e-6).unwrap();
        assert!(err > 1e-6);
    }

    #[test]
    fn options_are_validated() {
        let path = PowerPath { degree: 2, offset: 1.0, slope: 1.0 };
        let bad = HeuristicOptions { step_decrease: 1.5, ..HeuristicOptions::default() };
        assert!(track_heuristic(&path, &path.root(0.0), &bad).is_err());
    }

    #[test]
    fn tracks_power_path_to_the_end() {
        let path = PowerPath { degree: 3, offset: 1.0, slope: 2.0 };
        let r = track_heuristic(&path, &path.root(0.0), &HeuristicOptions::default()).unwrap();
        assert!(r.is_success());
        assert_eq!(r.s_final, 1.0);
        assert_eq!(r.num_steps, r.trace.iter().filter(|s| s.accepted).count());
        assert!(riemann_distance(&r.endpoint, &path.root(1.0)) < 1e-8);
    }

    #[test]
    fn agrees_with_certified_tracker() {
        let dv = DegreeVector::uniform(2, 2).unwrap();
        let mut rng = stream_rng(51, 0);
        for _ in 0..3 {
            let f = random_system_on_sphere(&dv, &mut rng);
            let start = total_degree_start(&dv, &mut rng).unwrap();
            let h = LinearHomotopy::new(&start.g, &f).unwrap();
            for root in &start.roots {
                let cert = track_linear(&h, root, &TrackerOptions::default()).unwrap();
                let heur = track_heuristic(&h, root, &HeuristicOptions::default()).unwrap();
                assert!(cert.is_success() && heur.is_success());
                assert!(heur.num_steps < cert.num_steps);
                let a = refine(&f, &cert.endpoint, 50).unwrap();
                let b = refine(&f, &heur.endpoint, 50).unwrap();
                assert!(riemann_distance(&a, &b) < 1e-6);
            }
        }
    }
}
