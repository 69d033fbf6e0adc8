//! Seeded generators of random exact test data.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::connection::{EStructure, GaugeSeries};
use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar};
use crate::series::MatrixSeries;

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_int(rng: &mut impl Rng, bound: i64) -> Scalar {
    Scalar::int(rng.gen_range(-bound..=bound))
}

pub fn small_fraction(rng: &mut impl Rng, bound: i64) -> Scalar {
    Scalar::frac(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound.max(1)))
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> Matrix {
    let data = (0..rows)
        .map(|_| (0..cols).map(|_| small_int(rng, bound)).collect())
        .collect();
    Matrix::from_rows(data).expect("rectangular")
}

/// Integer matrix with integer inverse, built from a few elementary row operations and a shuffle.
pub fn unimodular(rng: &mut impl Rng, n: usize, steps: usize) -> Matrix {
    let mut m = Matrix::identity(n);
    if n < 2 {
        return m;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let f = Scalar::int(rng.gen_range(-2..=2));
        let mut e = Matrix::identity(n);
        e[(i, j)] = f;
        m = &e * &m;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut p = Matrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        p[(i, j)] = Scalar::int(1);
    }
    &p * &m
}

/// Block-diagonal Jordan-type matrix: each eigenvalue block is `w·Id` plus a random subset of the
/// superdiagonal.
pub fn jordan_type(rng: &mut impl Rng, spectrum: &[(i64, usize)]) -> Matrix {
    let blocks: Vec<Matrix> = spectrum
        .iter()
        .map(|&(w, mult)| {
            let mut b = Matrix::scalar(mult, Scalar::int(w));
            for k in 1..mult {
                if rng.gen_bool(0.5) {
                    b[(k - 1, k)] = Scalar::int(1);
                }
            }
            b
        })
        .collect();
    Matrix::block_diag(&blocks)
}

/// Random spectrum of the given rank: distinct integers in `[-bound, bound]` with multiplicities.
pub fn random_spectrum(rng: &mut impl Rng, rank: usize, distinct: usize, bound: i64) -> Vec<(i64, usize)> {
    let distinct = distinct.clamp(1, rank);
    let mut pool: Vec<i64> = (-bound..=bound).collect();
    pool.shuffle(rng);
    let mut values: Vec<i64> = pool.into_iter().take(distinct).collect();
    values.sort_unstable();
    let mut mults = vec![1usize; distinct];
    for _ in distinct..rank {
        let k = rng.gen_range(0..distinct);
        mults[k] += 1;
    }
    values.into_iter().zip(mults).collect()
}

/// Random E-structure whose residue has the given integer spectrum (hidden by a unimodular
/// change of basis) and random integer higher coefficients.
pub fn random_estructure(
    rng: &mut impl Rng,
    spectrum: &[(i64, usize)],
    order: usize,
    bound: i64,
) -> EStructure {
    let rank: usize = spectrum.iter().map(|(_, m)| m).sum();
    let u = unimodular(rng, rank, 2 * rank);
    let u_inv = u.inverse().expect("unimodular");
    let a0 = &(&u * &jordan_type(rng, spectrum)) * &u_inv;
    let coeffs = std::iter::once(a0)
        .chain((1..=order).map(|_| random_matrix(rng, rank, rank, bound)))
        .collect();
    EStructure::from_coeffs(Field::Rational, coeffs).expect("square")
}

/// Random gauge with unimodular constant term.
pub fn random_gauge(rng: &mut impl Rng, rank: usize, order: usize, bound: i64) -> GaugeSeries {
    let mut coeffs = vec![unimodular(rng, rank, rank + 1)];
    coeffs.extend((1..=order).map(|_| random_matrix(rng, rank, rank, bound)));
    GaugeSeries::new(MatrixSeries::new(coeffs).expect("nonempty")).expect("unit constant term")
}

/// Random R-matrix `Id + Σ uⁱR_i`.
pub fn random_rmatrix(rng: &mut impl Rng, rank: usize, order: usize, bound: i64) -> GaugeSeries {
    let mut coeffs = vec![Matrix::identity(rank)];
    coeffs.extend((1..=order).map(|_| random_matrix(rng, rank, rank, bound)));
    GaugeSeries::r_matrix(MatrixSeries::new(coeffs).expect("nonempty")).expect("identity constant term")
}
