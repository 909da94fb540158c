//! Random states, ensembles and measurements for property tests and benchmarks.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::ensemble::{make_classical, ClassicalEnsemble, DensityOperator, Ensemble, Member};
use crate::linalg::{HermitianOperator, C64};

fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Haar-random unit vector.
pub fn haar_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DVector<C64> {
    let v = DVector::from_fn(dim, |_, _| gaussian_c64(rng));
    let norm = v.norm();
    v.map(|z| z / norm)
}

/// Haar-random unitary: Gram-Schmidt on a complex Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DMatrix<C64> {
    let mut u = DMatrix::from_fn(dim, dim, |_, _| gaussian_c64(rng));
    for j in 0..dim {
        for k in 0..j {
            let proj = u.column(k).dotc(&u.column(j));
            let ck = u.column(k).into_owned();
            u.column_mut(j).axpy(-proj, &ck, C64::new(1.0, 0.0));
        }
        let norm = u.column(j).norm();
        u.column_mut(j).unscale_mut(norm);
    }
    u
}

/// Random probability vector, uniform on the simplex.
pub fn simplex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n)
        .map(|_| -rng.random::<f64>().max(1e-300).ln())
        .collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// Random mixed state: a random convex mixture of `rank` Haar-random pure states.
pub fn random_mixed<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> DensityOperator {
    let weights = simplex(rng, rank);
    let mut op = HermitianOperator::zeros(dim);
    for w in weights {
        op = op.add(&HermitianOperator::outer(&haar_vector(rng, dim)).scale(w));
    }
    let trace = op.trace();
    DensityOperator::new(op.scale(1.0 / trace))
        .expect("mixture of pure states is a density operator")
}

pub fn random_pure_ensemble<R: Rng + ?Sized>(rng: &mut R, dim: usize, n: usize) -> Ensemble {
    let probs = simplex(rng, n);
    let states = probs
        .into_iter()
        .map(|p| (p, haar_vector(rng, dim)))
        .collect();
    Ensemble::from_pure("random_pure", states).expect("valid random ensemble")
}

pub fn random_mixed_ensemble<R: Rng + ?Sized>(rng: &mut R, dim: usize, n: usize) -> Ensemble {
    let probs = simplex(rng, n);
    let members = probs
        .into_iter()
        .map(|p| {
            let rank = rng.random_range(1..=dim.max(1));
            Member::mixed(p, random_mixed(rng, dim, rank))
        })
        .collect();
    Ensemble::new("random_mixed", members).expect("valid random ensemble")
}

/// Dimension in `2..=max_dim`, size in `2..=max_n`, pure or mixed with equal odds.
pub fn random_ensemble<R: Rng + ?Sized>(rng: &mut R, max_dim: usize, max_n: usize) -> Ensemble {
    let dim = rng.random_range(2..=max_dim);
    let n = rng.random_range(2..=max_n);
    if rng.random_bool(0.5) {
        random_pure_ensemble(rng, dim, n)
    } else {
        random_mixed_ensemble(rng, dim, n)
    }
}

/// Random joint distribution with `1..=max_n` labels and `1..=max_k` outcomes.
pub fn random_classical<R: Rng + ?Sized>(
    rng: &mut R,
    max_n: usize,
    max_k: usize,
) -> ClassicalEnsemble {
    let n = rng.random_range(1..=max_n);
    let k = rng.random_range(1..=max_k);
    let flat = simplex(rng, n * k);
    let joint = flat.chunks(k).map(<[f64]>::to_vec).collect();
    make_classical(joint).expect("simplex sample is normalized")
}
