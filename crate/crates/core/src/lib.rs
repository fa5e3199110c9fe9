//! Certified homotopy continuation for square polynomial systems.
//!
//! Systems are dense and homogeneous, normalized to the unit sphere of the
//! Bombieri-Weyl norm, and tracked along linear homotopies with a step size
//! that keeps every iterate an approximate zero of the current system.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod heuristic;
pub mod io;
pub mod linalg;
pub mod metric;
pub mod newton;
pub mod poly;
pub mod sampling;
pub mod start;
pub mod tracker;

pub use error::{Error, Result};
pub use metric::{bw_inner, bw_norm, normalize_to_sphere, riemann_distance, unitary_compose, SphereSystem};
pub use poly::{space_dimension, AffineSystem, DegreeVector, MonomialBasis, PolySystem, ProjectivePoint};
pub use start::{InitialPair, PairKind, StartSet};
pub use tracker::{LinearHomotopy, TrackResult, TrackStatus, TrackerOptions};

pub use num_complex::Complex64;
