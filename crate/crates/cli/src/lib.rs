//! Command-line front end: solving systems from files, exporting step
//! traces, and the benchmark, start-pair and equidistribution experiments.

pub mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use certhom::experiments::{
    run_bench, run_conjecture, run_entropy, BenchConfig, ConjectureConfig, EntropyConfig, EntropyVariant, Family,
    TrackerKind,
};
use certhom::heuristic::{track_heuristic, HeuristicOptions};
use certhom::io::{read_system, SystemFile};
use certhom::newton::{certify_projective, refine};
use certhom::sampling::stream_rng;
use certhom::start::{
    good_initial_pair, random_initial_pair, solve_all_from, total_degree_start, track_from, InitialPair,
};
use certhom::tracker::{condition_length, linear_step_bound, track_linear};
use certhom::{DegreeVector, LinearHomotopy, SphereSystem, TrackResult, TrackerOptions};

use report::{PathRow, TraceWriter};

#[derive(Debug, Parser)]
#[command(name = "certhom", version, about = "Certified homotopy continuation for square polynomial systems")]
pub struct Cli {
    /// Master seed; each trial draws from its own stream of it.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Write the main CSV here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Check each certified path against ceil(71 d^{3/2} C_0) (slow).
    #[arg(long, global = true)]
    pub verify_bound: bool,
    /// Quadrature pieces for the condition length used by --verify-bound.
    #[arg(long, global = true, default_value_t = 1000)]
    pub bound_resolution: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a system file; one CSV row per tracked path.
    ///
    /// Columns: path, start, status, steps, certified, distance, radius, mu,
    /// bound, bound_ok, then the endpoint as z<k>_re, z<k>_im (homogeneous,
    /// X_0 first) and, for affine input, x<k>_re, x<k>_im (empty at infinity).
    Solve(SolveArgs),
    /// Track one path and export its step trace.
    ///
    /// Columns: step, s, t, phi, chi1, chi2, accepted, then the point reached
    /// by the step as z<k>_re, z<k>_im (empty for rejected heuristic steps).
    Track(TrackArgs),
    /// Average steps per path of total-degree tracking on a benchmark family.
    ///
    /// Columns: label, paths, successes, failures, mean_steps, variance_steps,
    /// bound_violations. --detail adds one row per path.
    Bench(BenchArgs),
    /// Steps from the good, total-degree and random initial pairs on random
    /// quadratic targets.
    ///
    /// Columns: n, kind, paths, failures, mean_steps, variance_steps,
    /// bound_violations, average_bound. --detail adds one row per path.
    Conjecture(ConjectureArgs),
    /// Histogram of reached roots for random initial pairs and a fixed target.
    ///
    /// Columns: variant, runs, failures, roots, roots_hit, entropy_bits,
    /// max_entropy_bits, mean_steps. --detail writes root, hits, probability
    /// and the root coordinates.
    Entropy(EntropyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StartChoice {
    /// All total-degree paths.
    Total,
    /// One path from the good pair.
    Good,
    /// One path from a random initial pair.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TrackerChoice {
    Certified,
    Heuristic,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyChoice {
    Random,
    Katsura,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantChoice {
    Ball,
    Unitary,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// JSON system file.
    pub system: PathBuf,
    #[arg(long, value_enum, default_value_t = StartChoice::Total)]
    pub start: StartChoice,
    /// Position inside the certified step interval, in [0.5, 1].
    #[arg(long, default_value_t = 1.0)]
    pub step_fraction: f64,
}

#[derive(Debug, Args)]
pub struct TrackArgs {
    /// JSON system file.
    pub system: PathBuf,
    #[arg(long, value_enum, default_value_t = StartChoice::Total)]
    pub start: StartChoice,
    /// Start root index for the total-degree start.
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    #[arg(long, value_enum, default_value_t = TrackerChoice::Certified)]
    pub tracker: TrackerChoice,
    #[arg(long, default_value_t = 1.0)]
    pub step_fraction: f64,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value_t = FamilyChoice::Random)]
    pub family: FamilyChoice,
    /// Degrees of the random family, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2,2")]
    pub degrees: Vec<u32>,
    /// Variables of the Katsura family.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = TrackerChoice::Both)]
    pub tracker: TrackerChoice,
    /// Per-path CSV.
    #[arg(long)]
    pub detail: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConjectureArgs {
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// Random targets; the published sweep used 1000.
    #[arg(long, default_value_t = 30)]
    pub trials: usize,
    /// Per-path CSV.
    #[arg(long)]
    pub detail: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[arg(long, value_delimiter = ',', default_value = "2,2,2")]
    pub degrees: Vec<u32>,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// Random initial pairs; the published experiment used 8000.
    #[arg(long, default_value_t = 800)]
    pub runs: usize,
    #[arg(long, value_enum, default_value_t = VariantChoice::Ball)]
    pub variant: VariantChoice,
    /// Per-root histogram CSV.
    #[arg(long)]
    pub detail: Option<PathBuf>,
}

/// Runs a parsed command line. Returns `false` when every path failed.
pub fn run(cli: &Cli) -> Result<bool> {
    if let Some(threads) = cli.threads {
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let mut out = open_output(cli.out.as_deref())?;
    let ok = match &cli.command {
        Command::Solve(args) => solve(cli, args, &mut out)?,
        Command::Track(args) => track(cli, args, &mut out)?,
        Command::Bench(args) => bench(cli, args, &mut out)?,
        Command::Conjecture(args) => conjecture(cli, args, &mut out)?,
        Command::Entropy(args) => entropy(cli, args, &mut out)?,
    };
    out.flush()?;
    Ok(ok)
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn open_file(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

fn tracker_options(step_fraction: f64) -> TrackerOptions {
    TrackerOptions { step_fraction, ..TrackerOptions::default() }
}

fn load(path: &Path) -> Result<(SystemFile, SphereSystem)> {
    let file = read_system(path).with_context(|| format!("reading {}", path.display()))?;
    let f = file.to_sphere()?;
    Ok((file, f))
}

fn single_pair(cli: &Cli, start: StartChoice, degrees: &DegreeVector, root: usize) -> Result<InitialPair> {
    let mut rng = stream_rng(cli.seed, 0);
    Ok(match start {
        StartChoice::Good => good_initial_pair(degrees),
        StartChoice::Random => random_initial_pair(degrees, &mut rng)?,
        StartChoice::Total => {
            let set = total_degree_start(degrees, &mut rng)?;
            if root >= set.roots.len() {
                bail!("root index {root} out of range: {} start roots", set.roots.len());
            }
            set.pair(root)
        }
    })
}

fn bound_for(cli: &Cli, pair: &InitialPair, f: &SphereSystem, result: &TrackResult) -> Result<Option<(f64, bool)>> {
    if !cli.verify_bound || result.num_steps == 0 {
        return Ok(None);
    }
    let h = LinearHomotopy::new(&pair.g, f)?;
    let c0 = condition_length(&h, &pair.zeta0, cli.bound_resolution)?;
    let bound = linear_step_bound(f.degrees().max_degree(), c0);
    Ok(Some((bound, result.num_steps as f64 <= bound)))
}

fn solve(cli: &Cli, args: &SolveArgs, out: &mut dyn Write) -> Result<bool> {
    let (file, f) = load(&args.system)?;
    let opts = tracker_options(args.step_fraction);
    let degrees = f.degrees().clone();
    let mut rows = Vec::new();
    match args.start {
        StartChoice::Total => {
            let start = total_degree_start(&degrees, &mut stream_rng(cli.seed, 0))?;
            let report = solve_all_from(&f, start, &opts)?;
            for path in &report.paths {
                let pair = report.start.pair(path.index);
                rows.push(PathRow {
                    path: path.index,
                    start: "total",
                    bound: bound_for(cli, &pair, &f, &path.result)?,
                    result: path.result.clone(),
                    certificate: path.certificate.clone(),
                });
            }
            if !report.suspected_crossings.is_empty() {
                eprintln!("warning: suspected path crossings {:?}", report.suspected_crossings);
            }
        }
        choice => {
            let pair = single_pair(cli, choice, &degrees, 0)?;
            let result = track_from(&pair, &f, &opts)?;
            let certificate = if result.is_success() {
                refine(&f, &result.endpoint, 50).ok().map(|zeta| certify_projective(&f, &result.endpoint, &zeta))
            } else {
                None
            };
            rows.push(PathRow {
                path: 0,
                start: pair.kind.as_str(),
                bound: bound_for(cli, &pair, &f, &result)?,
                result,
                certificate,
            });
        }
    }
    report::write_solutions(out, &rows, f.system(), file.is_affine())?;
    let successes = rows.iter().filter(|r| r.result.is_success()).count();
    eprintln!("{successes} of {} paths succeeded", rows.len());
    Ok(successes > 0)
}

fn track(cli: &Cli, args: &TrackArgs, out: &mut dyn Write) -> Result<bool> {
    let (_, f) = load(&args.system)?;
    let pair = single_pair(cli, args.start, f.degrees(), args.root)?;
    let homotopy = LinearHomotopy::new(&pair.g, &f)?;
    let result = match args.tracker {
        TrackerChoice::Certified => {
            let opts = TrackerOptions { record_points: true, ..tracker_options(args.step_fraction) };
            track_linear(&homotopy, &pair.zeta0, &opts)?
        }
        TrackerChoice::Heuristic => {
            let opts = HeuristicOptions { record_points: true, ..HeuristicOptions::default() };
            track_heuristic(&homotopy, &pair.zeta0, &opts)?
        }
        TrackerChoice::Both => bail!("track follows one path with one tracker"),
    };
    TraceWriter::new(f.nvars()).write(out, &result)?;
    eprintln!(
        "{}: {} steps, s = {} of T = {}",
        result.status.as_str(),
        result.num_steps,
        result.s_final,
        homotopy.length()
    );
    Ok(result.is_success())
}

fn trackers(choice: TrackerChoice) -> Vec<TrackerKind> {
    match choice {
        TrackerChoice::Certified => vec![TrackerKind::Certified],
        TrackerChoice::Heuristic => vec![TrackerKind::Heuristic],
        TrackerChoice::Both => vec![TrackerKind::Certified, TrackerKind::Heuristic],
    }
}

fn bench(cli: &Cli, args: &BenchArgs, out: &mut dyn Write) -> Result<bool> {
    let family = match args.family {
        FamilyChoice::Random => Family::Random(DegreeVector::new(args.degrees.clone())?),
        FamilyChoice::Katsura => Family::Katsura(args.n),
    };
    let mut config = BenchConfig::new(family, args.trials, cli.seed);
    config.trackers = trackers(args.tracker);
    config.verify_bound = cli.verify_bound.then_some(cli.bound_resolution);
    let reports = run_bench(&config)?;
    report::write_summaries(out, &reports)?;
    if let Some(path) = &args.detail {
        report::write_path_records(&mut open_file(path)?, &reports)?;
    }
    for r in &reports {
        eprintln!(
            "{}: mean {:.2} steps/path over {} paths, {} failures, {:.2}s",
            r.label,
            r.mean_steps,
            r.successes(),
            r.failures,
            r.wall_time_s
        );
    }
    Ok(reports.iter().any(|r| r.successes() > 0))
}

fn conjecture(cli: &Cli, args: &ConjectureArgs, out: &mut dyn Write) -> Result<bool> {
    let mut config = ConjectureConfig::new(args.n, args.trials, cli.seed);
    config.verify_bound = cli.verify_bound.then_some(cli.bound_resolution);
    let report = run_conjecture(&config)?;
    report::write_conjecture(out, &report)?;
    if let Some(path) = &args.detail {
        let reports: Vec<_> = report.reports().into_iter().cloned().collect();
        report::write_path_records(&mut open_file(path)?, &reports)?;
    }
    for r in report.reports() {
        eprintln!("E_{}: {:.2} (variance {:.2}), {} failures", r.label, r.mean_steps, r.variance_steps, r.failures);
    }
    eprintln!("B(n, 2, N) = {:.4e}, {:.2}s", report.bound, report.good.wall_time_s);
    Ok(report.reports().iter().any(|r| r.successes() > 0))
}

fn entropy(cli: &Cli, args: &EntropyArgs, out: &mut dyn Write) -> Result<bool> {
    let variant = match args.variant {
        VariantChoice::Ball => EntropyVariant::Ball,
        VariantChoice::Unitary => EntropyVariant::Unitary,
    };
    let mut config = EntropyConfig::new(DegreeVector::new(args.degrees.clone())?, args.runs, variant, cli.seed);
    config.epsilon = args.epsilon;
    let report = run_entropy(&config)?;
    let name = match args.variant {
        VariantChoice::Ball => "ball",
        VariantChoice::Unitary => "unitary",
    };
    report::write_entropy(out, name, &report)?;
    if let Some(path) = &args.detail {
        report::write_histogram(&mut open_file(path)?, &report)?;
    }
    eprintln!(
        "entropy {:.4} of {:.4} bits, hits {:?}, {} failures, {:.2}s",
        report.entropy_bits,
        report.max_entropy(),
        report.root_hits,
        report.failures,
        report.wall_time_s
    );
    Ok(report.runs > report.failures)
}
