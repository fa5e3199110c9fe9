//! Seeded experiment drivers: step-count benchmarks, the start-pair
//! comparison and the root equidistribution experiment.
//!
//! Every trial draws from its own stream of the master seed, so results do
//! not depend on the number of worker threads.

use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::heuristic::{track_heuristic, HeuristicOptions};
use crate::metric::{normalize_to_sphere, riemann_distance, SphereSystem};
use crate::newton::refine;
use crate::poly::{AffineSystem, DegreeVector, ProjectivePoint};
use crate::sampling::{random_phase, stream_rng};
use crate::start::{
    good_initial_pair, good_system, random_initial_pair, random_initial_pair_unitary, random_system_on_sphere,
    solve_all_from, total_degree_start, total_degree_start_with_phase, track_from, InitialPair, PairKind,
};
use crate::tracker::{condition_length, linear_step_bound, track_linear, LinearHomotopy, TrackStatus, TrackerOptions};

/// Largest distance at which an endpoint is matched to a reference root.
pub const MATCH_TOLERANCE: f64 = 1e-4;

/// Newton iterations used to refine endpoints before matching.
const REFINE_ITERS: usize = 50;

/// `-sum p_i log2 p_i` of the normalized histogram; empty buckets add 0.
pub fn shannon_entropy(hits: &[usize]) -> Result<f64> {
    let total: usize = hits.iter().sum();
    if total == 0 {
        return Err(Error::EmptyHistogram);
    }
    let total = total as f64;
    Ok(hits
        .iter()
        .filter(|&&h| h > 0)
        .map(|&h| {
            let p = h as f64 / total;
            -p * p.log2()
        })
        .sum::<f64>()
        .max(0.0))
}

/// Nearest reference root of each endpoint under `d_R`, or `None` when the
/// nearest one is farther than [`MATCH_TOLERANCE`].
///
/// An endpoint at the same distance from two references is an error.
pub fn match_roots(endpoints: &[ProjectivePoint], references: &[ProjectivePoint]) -> Result<Vec<Option<usize>>> {
    endpoints
        .iter()
        .map(|z| {
            let mut best = (f64::INFINITY, usize::MAX);
            let mut second = f64::INFINITY;
            for (k, r) in references.iter().enumerate() {
                let d = riemann_distance(z, r);
                if d < best.0 {
                    second = best.0;
                    best = (d, k);
                } else if d < second {
                    second = d;
                }
            }
            if best.1 == usize::MAX {
                return Ok(None);
            }
            if second - best.0 <= 1e-12 {
                return Err(Error::AmbiguousMatch);
            }
            Ok((best.0 <= MATCH_TOLERANCE).then_some(best.1))
        })
        .collect()
}

/// The Katsura benchmark with `n` variables `u_0, ..., u_{n-1}`: one linear
/// equation followed by `n - 1` quadratic convolution equations, with
/// `2^{n-1}` solutions.
///
/// With `u_{-k} = u_k` and `u_k = 0` for `k >= n`, the equations are
/// `u_0 + 2 sum_{k>0} u_k - 1` and `sum_k u_k u_{l-k} - u_l` for `l < n - 1`.
pub fn katsura(n: usize) -> Result<AffineSystem> {
    if n == 0 {
        return Err(Error::InvalidArgument("katsura needs at least one variable".into()));
    }
    let mut degrees = vec![1u32];
    degrees.extend(std::iter::repeat_n(2, n - 1));
    let degrees = DegreeVector::new(degrees)?;
    let m = n as i64 - 1;
    let unit = |k: usize, e: u32| {
        let mut v = vec![0u32; n];
        v[k] += e;
        v
    };
    let c = |x: f64| Complex64::new(x, 0.0);

    let mut linear = vec![(vec![0u32; n], c(-1.0)), (unit(0, 1), c(1.0))];
    linear.extend((1..n).map(|k| (unit(k, 1), c(2.0))));
    let mut equations = vec![linear];
    for l in 0..m {
        let mut terms: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for k in -m..=m {
            let (a, b) = (k.unsigned_abs() as usize, (l - k).unsigned_abs() as usize);
            if b > m as usize {
                continue;
            }
            let mut e = unit(a, 1);
            e[b] += 1;
            *terms.entry(e).or_default() += 1.0;
        }
        *terms.entry(unit(l as usize, 1)).or_default() -= 1.0;
        equations.push(terms.into_iter().map(|(e, v)| (e, c(v))).collect());
    }
    AffineSystem::from_terms(&degrees, &equations)
}

/// `B(n, d, N) = 71 pi d^{3/2} n N / sqrt(2)`, the average-case step bound
/// for random initial pairs.
pub fn average_step_bound(degrees: &DegreeVector) -> Result<f64> {
    let big_n = degrees.space_dimension()? as f64 - 1.0;
    let d = f64::from(degrees.max_degree());
    Ok(71.0 * PI * d.powf(1.5) * degrees.n() as f64 * big_n / SQRT_2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrackerKind {
    Certified,
    Heuristic,
}

impl TrackerKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            TrackerKind::Certified => "certified",
            TrackerKind::Heuristic => "heuristic",
        }
    }
}

/// One tracked path of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct PathRecord {
    pub trial: usize,
    pub path: usize,
    pub label: &'static str,
    pub steps: usize,
    pub status: TrackStatus,
    /// `ceil(71 d^{3/2} C_0)` and whether the step count respected it,
    /// when bound verification was requested.
    pub bound: Option<(f64, bool)>,
}

/// Step statistics over successful paths; failures are only counted.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub label: String,
    pub per_path: Vec<PathRecord>,
    pub mean_steps: f64,
    /// Unbiased sample variance.
    pub variance_steps: f64,
    pub failures: usize,
    pub wall_time_s: f64,
}

impl ExperimentReport {
    pub fn from_paths(label: impl Into<String>, per_path: Vec<PathRecord>, wall_time_s: f64) -> Self {
        let steps: Vec<f64> =
            per_path.iter().filter(|p| p.status == TrackStatus::Success).map(|p| p.steps as f64).collect();
        let count = steps.len() as f64;
        let mean = if steps.is_empty() { f64::NAN } else { steps.iter().sum::<f64>() / count };
        let variance = if steps.len() < 2 {
            f64::NAN
        } else {
            steps.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (count - 1.0)
        };
        ExperimentReport {
            label: label.into(),
            failures: per_path.len() - steps.len(),
            per_path,
            mean_steps: mean,
            variance_steps: variance,
            wall_time_s,
        }
    }

    pub fn successes(&self) -> usize {
        self.per_path.len() - self.failures
    }

    pub fn bound_violations(&self) -> usize {
        self.per_path.iter().filter(|p| matches!(p.bound, Some((_, false)))).count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// Uniformly random systems on the sphere with the given degrees.
    Random(DegreeVector),
    /// The Katsura system with this many variables.
    Katsura(usize),
}

impl Family {
    pub fn label(&self) -> String {
        match self {
            Family::Random(dv) => {
                let ds: Vec<String> = dv.degrees().iter().map(u32::to_string).collect();
                format!("random({})", ds.join(","))
            }
            Family::Katsura(n) => format!("katsura{n}"),
        }
    }

    pub fn degrees(&self) -> Result<DegreeVector> {
        match self {
            Family::Random(dv) => Ok(dv.clone()),
            Family::Katsura(n) => Ok(katsura(*n)?.degrees().clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub family: Family,
    pub trials: usize,
    pub trackers: Vec<TrackerKind>,
    pub seed: u64,
    pub certified: TrackerOptions,
    pub heuristic: HeuristicOptions,
    /// Resolution of the condition-length quadrature; `None` skips the check.
    pub verify_bound: Option<usize>,
}

impl BenchConfig {
    pub fn new(family: Family, trials: usize, seed: u64) -> Self {
        BenchConfig {
            family,
            trials,
            trackers: vec![TrackerKind::Certified, TrackerKind::Heuristic],
            seed,
            certified: TrackerOptions::default(),
            heuristic: HeuristicOptions::default(),
            verify_bound: None,
        }
    }
}

fn bound_check(
    homotopy: &LinearHomotopy,
    start: &ProjectivePoint,
    steps: usize,
    resolution: Option<usize>,
) -> Option<(f64, bool)> {
    let resolution = resolution?;
    let d = homotopy.start().degrees().max_degree();
    match condition_length(homotopy, start, resolution) {
        Ok(c0) => {
            let bound = linear_step_bound(d, c0);
            Some((bound, steps as f64 <= bound))
        }
        Err(_) => Some((f64::NAN, false)),
    }
}

/// Total-degree tracking of every path of `trials` targets from the family,
/// one report per tracker.
pub fn run_bench(config: &BenchConfig) -> Result<Vec<ExperimentReport>> {
    let degrees = config.family.degrees()?;
    let fixed = match &config.family {
        Family::Katsura(n) => Some(normalize_to_sphere(&katsura(*n)?.homogenize())?),
        Family::Random(_) => None,
    };
    let started = Instant::now();
    let per_trial: Vec<Vec<(TrackerKind, PathRecord)>> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream_rng(config.seed, trial as u64);
            let f = match &fixed {
                Some(f) => f.clone(),
                None => random_system_on_sphere(&degrees, &mut rng),
            };
            let start = total_degree_start(&degrees, &mut rng)?;
            let homotopy = LinearHomotopy::new(&start.g, &f)?;
            let mut out = Vec::new();
            for (path, root) in start.roots.iter().enumerate() {
                for &kind in &config.trackers {
                    let result = match kind {
                        TrackerKind::Certified => track_linear(&homotopy, root, &config.certified)?,
                        TrackerKind::Heuristic => track_heuristic(&homotopy, root, &config.heuristic)?,
                    };
                    let bound = match kind {
                        TrackerKind::Certified => bound_check(&homotopy, root, result.num_steps, config.verify_bound),
                        TrackerKind::Heuristic => None,
                    };
                    out.push((
                        kind,
                        PathRecord {
                            trial,
                            path,
                            label: kind.as_str(),
                            steps: result.num_steps,
                            status: result.status,
                            bound,
                        },
                    ));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let wall = started.elapsed().as_secs_f64();
    let family = config.family.label();
    Ok(config
        .trackers
        .iter()
        .map(|&kind| {
            let paths = per_trial.iter().flatten().filter(|(k, _)| *k == kind).map(|(_, p)| p.clone()).collect();
            ExperimentReport::from_paths(format!("{family}/{}", kind.as_str()), paths, wall)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureConfig {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub options: TrackerOptions,
    pub verify_bound: Option<usize>,
}

impl ConjectureConfig {
    pub fn new(n: usize, trials: usize, seed: u64) -> Self {
        ConjectureConfig { n, trials, seed, options: TrackerOptions::default(), verify_bound: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureReport {
    pub n: usize,
    /// `B(n, 2, N)`.
    pub bound: f64,
    pub good: ExperimentReport,
    pub total: ExperimentReport,
    pub random: ExperimentReport,
}

impl ConjectureReport {
    pub fn reports(&self) -> [&ExperimentReport; 3] {
        [&self.good, &self.total, &self.random]
    }
}

/// Tracks random quadratic targets from the good pair, the total-degree pair
/// rooted at `(1, ..., 1)` and a random initial pair.
pub fn run_conjecture(config: &ConjectureConfig) -> Result<ConjectureReport> {
    let degrees = DegreeVector::uniform(config.n, 2)?;
    let started = Instant::now();
    let kinds = [PairKind::GoodPair, PairKind::TotalDegree, PairKind::Random];
    let rows: Vec<[PathRecord; 3]> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let base = 4 * trial as u64;
            let f = random_system_on_sphere(&degrees, &mut stream_rng(config.seed, base));
            let pairs = [
                good_initial_pair(&degrees),
                total_degree_start_with_phase(&degrees, random_phase(&mut stream_rng(config.seed, base + 1)))?.pair(0),
                random_initial_pair(&degrees, &mut stream_rng(config.seed, base + 2))?,
            ];
            let records = pairs
                .iter()
                .zip(kinds)
                .map(|(pair, kind)| conjecture_path(trial, kind, pair, &f, config))
                .collect::<Result<Vec<_>>>()?;
            Ok(records.try_into().expect("three pair kinds"))
        })
        .collect::<Result<_>>()?;
    let wall = started.elapsed().as_secs_f64();
    let column = |k: usize| {
        let paths = rows.iter().map(|r| r[k].clone()).collect();
        ExperimentReport::from_paths(kinds[k].as_str(), paths, wall)
    };
    Ok(ConjectureReport {
        n: config.n,
        bound: average_step_bound(&degrees)?,
        good: column(0),
        total: column(1),
        random: column(2),
    })
}

fn conjecture_path(
    trial: usize,
    kind: PairKind,
    pair: &InitialPair,
    f: &SphereSystem,
    config: &ConjectureConfig,
) -> Result<PathRecord> {
    let homotopy = LinearHomotopy::new(&pair.g, f)?;
    let result = track_linear(&homotopy, &pair.zeta0, &config.options)?;
    Ok(PathRecord {
        trial,
        path: 0,
        label: kind.as_str(),
        steps: result.num_steps,
        status: result.status,
        bound: bound_check(&homotopy, &pair.zeta0, result.num_steps, config.verify_bound),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntropyVariant {
    /// Random initial pair drawn through the unit ball.
    Ball,
    /// Good pair moved by a Haar unitary.
    Unitary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyConfig {
    pub degrees: DegreeVector,
    pub epsilon: f64,
    pub runs: usize,
    pub variant: EntropyVariant,
    pub seed: u64,
    pub options: TrackerOptions,
}

impl EntropyConfig {
    pub fn new(degrees: DegreeVector, runs: usize, variant: EntropyVariant, seed: u64) -> Self {
        EntropyConfig { degrees, epsilon: 0.1, runs, variant, seed, options: TrackerOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport {
    pub references: Vec<ProjectivePoint>,
    pub root_hits: Vec<usize>,
    pub runs: usize,
    /// Runs that failed to track or matched no reference root.
    pub failures: usize,
    pub entropy_bits: f64,
    pub mean_steps: f64,
    pub wall_time_s: f64,
}

impl EntropyReport {
    pub fn all_roots_hit(&self) -> bool {
        self.root_hits.iter().all(|&h| h > 0)
    }

    pub fn max_entropy(&self) -> f64 {
        (self.root_hits.len() as f64).log2()
    }
}

/// The target `f = (g + eps h) / |g + eps h|` with `g` the unnormalized good
/// system and `h` uniform on the sphere.
pub fn entropy_target(degrees: &DegreeVector, epsilon: f64, seed: u64) -> Result<SphereSystem> {
    let h = random_system_on_sphere(degrees, &mut stream_rng(seed, u64::MAX));
    let g = good_system(degrees);
    normalize_to_sphere(&g.linear_combination(Complex64::new(1.0, 0.0), &h, Complex64::new(epsilon, 0.0))?)
}

/// Tracks `runs` random initial pairs to a fixed target and histograms the
/// reference roots the endpoints land on.
pub fn run_entropy(config: &EntropyConfig) -> Result<EntropyReport> {
    let started = Instant::now();
    let f = entropy_target(&config.degrees, config.epsilon, config.seed)?;
    let start = total_degree_start(&config.degrees, &mut stream_rng(config.seed, u64::MAX - 1))?;
    let all = solve_all_from(&f, start, &config.options)?;
    if !all.is_complete() {
        return Err(Error::InvalidArgument(format!(
            "reference solve found {} of {} distinct roots",
            all.solutions().len(),
            all.start.roots.len()
        )));
    }
    let references = all.solutions();

    let outcomes: Vec<Option<(ProjectivePoint, usize)>> = (0..config.runs)
        .into_par_iter()
        .map(|run| {
            let mut rng = stream_rng(config.seed, run as u64);
            let pair = match config.variant {
                EntropyVariant::Ball => random_initial_pair(&config.degrees, &mut rng)?,
                EntropyVariant::Unitary => random_initial_pair_unitary(&config.degrees, &mut rng)?,
            };
            let result = track_from(&pair, &f, &config.options)?;
            if !result.is_success() {
                return Ok(None);
            }
            Ok(refine(&f, &result.endpoint, REFINE_ITERS).ok().map(|z| (z, result.num_steps)))
        })
        .collect::<Result<_>>()?;

    let mut root_hits = vec![0; references.len()];
    let mut failures = 0;
    let mut steps = 0usize;
    let mut tracked = 0usize;
    for outcome in &outcomes {
        match outcome {
            Some((z, s)) => {
                steps += s;
                tracked += 1;
                match match_roots(std::slice::from_ref(z), &references)?[0] {
                    Some(k) => root_hits[k] += 1,
                    None => failures += 1,
                }
            }
            None => failures += 1,
        }
    }
    let entropy_bits = shannon_entropy(&root_hits)?;
    Ok(EntropyReport {
        references,
        root_hits,
        runs: config.runs,
        failures,
        entropy_bits,
        mean_steps: if tracked == 0 { f64::NAN } else { steps as f64 / tracked as f64 },
        wall_time_s: started.elapsed().as_secs_f64(),
    })
}
