//! Fixed inputs shared by the benchmarks.

use certhom::sampling::stream_rng;
use certhom::start::{random_system_on_sphere, total_degree_start, InitialPair};
use certhom::{DegreeVector, ProjectivePoint, SphereSystem};

pub const SEED: u64 = 2024;

pub fn degrees(d: &[u32]) -> DegreeVector {
    DegreeVector::new(d.to_vec()).expect("valid degrees")
}

/// A random target and the first total-degree start pair for it.
pub fn path_fixture(d: &[u32]) -> (InitialPair, SphereSystem) {
    let dv = degrees(d);
    let f = random_system_on_sphere(&dv, &mut stream_rng(SEED, 0));
    let start = total_degree_start(&dv, &mut stream_rng(SEED, 1)).expect("start system");
    (start.pair(0), f)
}

pub fn random_point(nvars: usize, stream: u64) -> ProjectivePoint {
    let v = certhom::sampling::gaussian_vector(nvars, &mut stream_rng(SEED, stream));
    ProjectivePoint::new(v).expect("nonzero")
}
