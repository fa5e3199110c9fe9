//! CSV writers. Floats are written with 17 significant digits so that a
//! rerun with the same seed reproduces the files byte for byte; timing only
//! goes to standard error.

use std::io::Write;

use anyhow::Result;
use csv::Writer;

use certhom::experiments::{ConjectureReport, EntropyReport, ExperimentReport};
use certhom::newton::{default_norm_bound, projective_to_affine, Certificate, DEFAULT_NORM_CONFIDENCE};
use certhom::{Complex64, PolySystem, ProjectivePoint, TrackResult};

pub fn float(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

fn coordinate_headers(prefix: &str, range: std::ops::Range<usize>) -> Vec<String> {
    range.flat_map(|k| [format!("{prefix}{k}_re"), format!("{prefix}{k}_im")]).collect()
}

fn push_coords(row: &mut Vec<String>, coords: &[Complex64]) {
    for c in coords {
        row.push(float(c.re));
        row.push(float(c.im));
    }
}

fn push_empty(row: &mut Vec<String>, count: usize) {
    row.extend(std::iter::repeat_n(String::new(), 2 * count));
}

/// One path of a `solve` run.
#[derive(Debug, Clone)]
pub struct PathRow {
    pub path: usize,
    pub start: &'static str,
    pub result: TrackResult,
    pub certificate: Option<Certificate>,
    pub bound: Option<(f64, bool)>,
}

pub fn write_solutions(out: &mut dyn Write, rows: &[PathRow], target: &PolySystem, affine: bool) -> Result<()> {
    let nvars = target.nvars();
    let mut w = Writer::from_writer(out);
    let mut header: Vec<String> =
        ["path", "start", "status", "steps", "certified", "distance", "radius", "mu", "bound", "bound_ok"]
            .iter()
            .map(|s| s.to_string())
            .collect();
    header.extend(coordinate_headers("z", 0..nvars));
    if affine {
        header.extend(coordinate_headers("x", 1..nvars));
    }
    w.write_record(&header)?;
    let norm_bound = default_norm_bound(target, DEFAULT_NORM_CONFIDENCE);
    for r in rows {
        let mut row = vec![
            r.path.to_string(),
            r.start.to_string(),
            r.result.status.as_str().to_string(),
            r.result.num_steps.to_string(),
        ];
        match &r.certificate {
            Some(c) => row.extend([c.holds.to_string(), float(c.distance), float(c.zero.radius), float(c.zero.mu)]),
            None => row.extend(["false".to_string(), String::new(), String::new(), String::new()]),
        }
        match r.bound {
            Some((b, ok)) => row.extend([float(b), ok.to_string()]),
            None => row.extend([String::new(), String::new()]),
        }
        push_coords(&mut row, r.result.endpoint.coords().as_slice());
        if affine {
            let x = match &r.certificate {
                Some(c) if c.holds => projective_to_affine(target, &r.result.endpoint, norm_bound).ok(),
                _ => None,
            };
            match x {
                Some(x) => push_coords(&mut row, &x),
                None => push_empty(&mut row, nvars - 1),
            }
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Step trace of one path.
pub struct TraceWriter {
    nvars: usize,
}

impl TraceWriter {
    pub fn new(nvars: usize) -> Self {
        TraceWriter { nvars }
    }

    pub fn write(&self, out: &mut dyn Write, result: &TrackResult) -> Result<()> {
        let mut w = Writer::from_writer(out);
        let mut header: Vec<String> =
            ["step", "s", "t", "phi", "chi1", "chi2", "accepted"].iter().map(|s| s.to_string()).collect();
        header.extend(coordinate_headers("z", 0..self.nvars));
        w.write_record(&header)?;
        let mut points = result.points.iter();
        for (k, step) in result.trace.iter().enumerate() {
            let mut row = vec![
                k.to_string(),
                float(step.s),
                float(step.t),
                float(step.phi),
                float(step.chi1),
                float(step.chi2),
                step.accepted.to_string(),
            ];
            match step.accepted.then(|| points.next()).flatten() {
                Some(p) => push_coords(&mut row, p.coords().as_slice()),
                None => push_empty(&mut row, self.nvars),
            }
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

const SUMMARY_HEADER: [&str; 7] =
    ["label", "paths", "successes", "failures", "mean_steps", "variance_steps", "bound_violations"];

fn summary_row(r: &ExperimentReport) -> Vec<String> {
    vec![
        r.label.clone(),
        r.per_path.len().to_string(),
        r.successes().to_string(),
        r.failures.to_string(),
        float(r.mean_steps),
        float(r.variance_steps),
        r.bound_violations().to_string(),
    ]
}

pub fn write_summaries(out: &mut dyn Write, reports: &[ExperimentReport]) -> Result<()> {
    let mut w = Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER)?;
    for r in reports {
        w.write_record(summary_row(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_path_records(out: &mut dyn Write, reports: &[ExperimentReport]) -> Result<()> {
    let mut w = Writer::from_writer(out);
    w.write_record(["label", "trial", "path", "kind", "status", "steps", "bound", "bound_ok"])?;
    for r in reports {
        for p in &r.per_path {
            let (bound, ok) = match p.bound {
                Some((b, ok)) => (float(b), ok.to_string()),
                None => (String::new(), String::new()),
            };
            w.write_record([
                r.label.clone(),
                p.trial.to_string(),
                p.path.to_string(),
                p.label.to_string(),
                p.status.as_str().to_string(),
                p.steps.to_string(),
                bound,
                ok,
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_conjecture(out: &mut dyn Write, report: &ConjectureReport) -> Result<()> {
    let mut w = Writer::from_writer(out);
    let mut header: Vec<&str> = vec!["n"];
    header.extend(SUMMARY_HEADER);
    header.push("average_bound");
    w.write_record(&header)?;
    for r in report.reports() {
        let mut row = vec![report.n.to_string()];
        row.extend(summary_row(r));
        row.push(float(report.bound));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_entropy(out: &mut dyn Write, variant: &str, report: &EntropyReport) -> Result<()> {
    let mut w = Writer::from_writer(out);
    w.write_record([
        "variant",
        "runs",
        "failures",
        "roots",
        "roots_hit",
        "entropy_bits",
        "max_entropy_bits",
        "mean_steps",
    ])?;
    w.write_record([
        variant.to_string(),
        report.runs.to_string(),
        report.failures.to_string(),
        report.references.len().to_string(),
        report.root_hits.iter().filter(|&&h| h > 0).count().to_string(),
        float(report.entropy_bits),
        float(report.max_entropy()),
        float(report.mean_steps),
    ])?;
    w.flush()?;
    Ok(())
}

pub fn write_histogram(out: &mut dyn Write, report: &EntropyReport) -> Result<()> {
    let nvars = report.references.first().map_or(0, ProjectivePoint::dim);
    let mut w = Writer::from_writer(out);
    let mut header: Vec<String> = ["root", "hits", "probability"].iter().map(|s| s.to_string()).collect();
    header.extend(coordinate_headers("z", 0..nvars));
    w.write_record(&header)?;
    let matched: usize = report.root_hits.iter().sum();
    for (k, (root, &hits)) in report.references.iter().zip(&report.root_hits).enumerate() {
        let mut row = vec![k.to_string(), hits.to_string(), float(hits as f64 / matched.max(1) as f64)];
        push_coords(&mut row, root.coords().as_slice());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, -1.0 / 3.0, 1e-300, 12345.678, 0.0] {
            let s = float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(float(f64::NAN), "NaN");
        assert_eq!(float(2.5), "2.5000000000000000e0");
    }
}
