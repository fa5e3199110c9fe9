//! Random draws used by the start-system constructions and experiments.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Generator type used throughout the crate.
pub type SeededRng = ChaCha8Rng;

/// Generator for `(master seed, stream)`; streams never overlap, so trial
/// `i` draws the same numbers regardless of scheduling.
pub fn stream_rng(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Standard complex Gaussian: independent real and imaginary parts with
/// variance 1/2 each, so `E|z|^2 = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

pub fn gaussian_vector<R: Rng + ?Sized>(len: usize, rng: &mut R) -> DVector<Complex64> {
    DVector::from_fn(len, |_, _| complex_gaussian(rng))
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Uniform point on the unit circle.
pub fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.random::<f64>() * TAU)
}

/// Uniform point of the unit ball of `C^dim`: Gaussian direction times a
/// radius `U^(1 / (2 dim))`, the radial law of a ball of real dimension
/// `2 dim`.
pub fn uniform_ball<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DVector<Complex64> {
    let mut v = gaussian_vector(dim, rng);
    let mut norm = v.norm();
    while norm == 0.0 {
        v = gaussian_vector(dim, rng);
        norm = v.norm();
    }
    let radius = rng.random::<f64>().powf(1.0 / (2.0 * dim as f64));
    v * Complex64::new(radius / norm, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_has_unit_second_moment() {
        let mut rng = stream_rng(1, 0);
        let n = 20_000;
        let mean_sq: f64 = (0..n).map(|_| complex_gaussian(&mut rng).norm_sqr()).sum::<f64>() / n as f64;
        // Var |z|^2 = 1 for a standard complex Gaussian.
        assert!((mean_sq - 1.0).abs() < 3.0 / (n as f64).sqrt(), "{mean_sq}");
    }

    #[test]
    fn ball_radius_law() {
        // |r|^2 has a Beta(m, 1) law with mean m / (m + 1).
        let mut rng = stream_rng(2, 0);
        let m = 5;
        let n = 20_000;
        let samples: Vec<f64> = (0..n).map(|_| uniform_ball(m, &mut rng).norm_squared()).collect();
        assert!(samples.iter().all(|&s| s <= 1.0));
        let mean = samples.iter().sum::<f64>() / n as f64;
        let expect = m as f64 / (m as f64 + 1.0);
        let var = m as f64 / ((m as f64 + 1.0).powi(2) * (m as f64 + 2.0));
        assert!((mean - expect).abs() < 3.0 * (var / n as f64).sqrt(), "{mean}");
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| stream_rng(7, 3).random()).collect();
        let b: Vec<u64> = (0..4).map(|_| stream_rng(7, 3).random()).collect();
        assert_eq!(a, b);
        let x: u64 = stream_rng(7, 3).random();
        let y: u64 = stream_rng(7, 4).random();
        assert_ne!(x, y);
    }
}
