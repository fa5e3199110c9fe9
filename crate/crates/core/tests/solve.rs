use certhom::experiments::katsura;
use certhom::newton::{default_norm_bound, projective_to_affine, DEFAULT_NORM_CONFIDENCE};
use certhom::sampling::stream_rng;
use certhom::start::{solve_all_total_degree, sphere_target};
use certhom::TrackerOptions;

#[test]
fn katsura3_has_four_certified_real_solutions() {
    let system = katsura(3).unwrap();
    let f = sphere_target(&system).unwrap();
    let report = solve_all_total_degree(&f, &mut stream_rng(5, 0), &TrackerOptions::default()).unwrap();
    assert!(report.is_complete(), "{} of {}", report.successes(), report.paths.len());
    assert!(report.suspected_crossings.is_empty());
    let bound = default_norm_bound(&f, DEFAULT_NORM_CONFIDENCE);
    let mut roots: Vec<Vec<f64>> = report
        .solutions()
        .iter()
        .map(|z| {
            let x = projective_to_affine(&f, z, bound).unwrap();
            let residual = system.evaluate(&x).unwrap().norm();
            assert!(residual < 1e-8, "residual {residual}");
            assert!(x.iter().all(|c| c.im.abs() < 1e-8));
            x.iter().map(|c| (c.re * 1e6).round() / 1e6).collect()
        })
        .collect();
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup();
    assert_eq!(roots.len(), 4);
    assert!(roots.contains(&vec![1.0, 0.0, 0.0]));
}
