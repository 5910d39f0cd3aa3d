#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use surprisal::{DiscretePrior, JointMatrix, Matrix, NoiseModel, StateVector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Probability vector bounded away from the simplex boundary.
pub fn simplex<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..d).map(|_| 0.05 + rng.random::<f64>()).collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / sum).collect()
}

pub fn state<R: Rng>(rng: &mut R, d: usize) -> StateVector {
    StateVector::new(simplex(rng, d)).unwrap()
}

/// Discrete prior on `d + 1 ..= d + 3` random states; its joint matrix is
/// almost surely positive definite.
pub fn prior<R: Rng>(rng: &mut R, d: usize) -> DiscretePrior {
    let k = d + rng.random_range(1..=3);
    let weights = simplex(rng, k);
    DiscretePrior::new(weights.into_iter().map(|p| (state(rng, d), p)).collect()).unwrap()
}

pub fn joint<R: Rng>(rng: &mut R, d: usize) -> JointMatrix {
    prior(rng, d).joint_matrix()
}

pub fn noise<R: Rng>(rng: &mut R, d: usize, max_lambda: f64) -> NoiseModel {
    NoiseModel::new(rng.random::<f64>() * max_lambda, simplex(rng, d)).unwrap()
}

/// Row-stochastic matrix `(1 − t)I + tR` with random rows `R`, rejected
/// until `|det| ≥ 1e-3`.
pub fn general_noise<R: Rng>(rng: &mut R, d: usize) -> Matrix {
    loop {
        let t = rng.random::<f64>() * 0.9;
        let rows: Vec<Vec<f64>> = (0..d)
            .map(|i| {
                let mut r: Vec<f64> = simplex(rng, d).iter().map(|x| t * x).collect();
                r[i] += 1.0 - t;
                r
            })
            .collect();
        let m = Matrix::from_rows(&rows).unwrap();
        if m.determinant().abs() >= 1e-3 {
            return m;
        }
    }
}

/// Relative closeness with a small absolute floor.
pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-6)
}
