use num_bigint::BigInt;
use rand::Rng;

use crate::lattice::{affine_dimension, IntMatrix};
use crate::scalar::vector;

pub fn pts(points: &[&[i64]]) -> Vec<Vec<BigInt>> {
    points.iter().map(|p| vector(p)).collect()
}

/// A random matrix in GL_d(Z) built from elementary operations.
pub fn random_unimodular<R: Rng>(rng: &mut R, d: usize) -> IntMatrix<BigInt> {
    let mut rows: Vec<Vec<i64>> = (0..d)
        .map(|i| (0..d).map(|j| i64::from(i == j)).collect())
        .collect();
    for _ in 0..3 * d {
        let i = rng.gen_range(0..d);
        let j = rng.gen_range(0..d);
        match rng.gen_range(0..3) {
            0 if i != j => {
                let k = rng.gen_range(-2..=2);
                for c in 0..d {
                    rows[i][c] += k * rows[j][c];
                }
            }
            1 => rows.swap(i, j),
            _ => rows[i].iter_mut().for_each(|x| *x = -*x),
        }
    }
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    IntMatrix::from_i64_rows(&refs)
}

/// Random points in `[0, range]^dim`, retried until full-dimensional.
pub fn random_full_dim_points<R: Rng>(rng: &mut R, dim: usize, count: usize, range: i64) -> Vec<Vec<BigInt>> {
    loop {
        let raw: Vec<Vec<BigInt>> = (0..count.max(dim + 1))
            .map(|_| (0..dim).map(|_| BigInt::from(rng.gen_range(0..=range))).collect())
            .collect();
        if affine_dimension(&raw) == dim {
            return raw;
        }
    }
}
