//! Quantum E-structures `∇ = d/du + μ/u + c₁⋆/u²` and the shipped examples.

use num_traits::Zero;

use crate::connection::{EStructure, Extension, GaugeSeries, GradingData, Polarization, Splitting};
use crate::error::{Error, Result};
use crate::levelt::{system_top, BlockLayout};
use crate::matrix::Matrix;
use crate::normalform::{graded_recursion, semisimple_eigenframe, RecursionConvention};
use crate::scalar::{Field, Scalar};
use crate::series::MatrixSeries;
use crate::sparse::{projected_rank, SparseSystem};

pub const PRESET_NAMES: [&str; 2] = ["s2", "quadric-intersection-cp5"];

/// Small quantum cohomology data with the Novikov parameter set to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumData {
    pub name: String,
    pub labels: Vec<String>,
    /// Real cohomological degrees `p` of the basis classes.
    pub degrees: Vec<i64>,
    /// Complex dimension `n`.
    pub dimension: i64,
    pub c1: Matrix,
    pub mu: Matrix,
    pub pairing: Matrix,
}

impl QuantumData {
    /// Validates sizes, `μ = diag((p − n)/2)`, and nondegeneracy of the pairing.
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        degrees: Vec<i64>,
        dimension: i64,
        c1: Matrix,
        pairing: Matrix,
    ) -> Result<Self> {
        let r = degrees.len();
        if labels.len() != r
            || c1.rows() != r
            || !c1.is_square()
            || pairing.rows() != r
            || !pairing.is_square()
        {
            return Err(Error::DimensionMismatch("quantum data sizes disagree".into()));
        }
        if pairing.det().is_zero() {
            return Err(Error::Invalid("Poincaré pairing is degenerate".into()));
        }
        let mu = Self::mu_from_degrees(&degrees, dimension);
        Ok(QuantumData {
            name: name.into(),
            labels,
            degrees,
            dimension,
            c1,
            mu,
            pairing,
        })
    }

    pub fn mu_from_degrees(degrees: &[i64], dimension: i64) -> Matrix {
        Matrix::diag(
            &degrees
                .iter()
                .map(|&p| Scalar::frac(p - dimension, 2))
                .collect::<Vec<_>>(),
        )
    }

    /// Replace `μ` by an explicit matrix, checking it against the degrees.
    pub fn with_mu(mut self, mu: Matrix) -> Result<Self> {
        if mu != Self::mu_from_degrees(&self.degrees, self.dimension) {
            return Err(Error::BadGrading("μ differs from diag((p − n)/2)".into()));
        }
        self.mu = mu;
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    /// `c₁⋆` is self-adjoint for the pairing: `c₁ᵀG = G c₁`.
    pub fn is_frobenius(&self) -> bool {
        &self.c1.transpose() * &self.pairing == &self.pairing * &self.c1
    }
}

/// The E-structure of a [`QuantumData`] with its provenance.
#[derive(Debug, Clone)]
pub struct QuantumEStructure {
    pub data: QuantumData,
    pub estructure: EStructure,
}

/// `A₀ = c₁⋆`, `A₁ = μ`, `A_i = 0` for `i ≥ 2`, with the Poincaré pairing attached.
pub fn build_quantum(data: &QuantumData, order: usize) -> Result<QuantumEStructure> {
    if data.mu != QuantumData::mu_from_degrees(&data.degrees, data.dimension) {
        return Err(Error::BadGrading("μ differs from diag((p − n)/2)".into()));
    }
    let r = data.rank();
    let mut series = MatrixSeries::zeros(r, r, order);
    *series.coeff_mut(0) = data.c1.clone();
    if order >= 1 {
        *series.coeff_mut(1) = data.mu.clone();
    }
    let field = if data.c1.is_real() {
        Field::Rational
    } else {
        Field::Gaussian
    };
    let estructure = EStructure::new(field, series)?
        .with_polarization(Polarization::new(data.pairing.clone(), Extension::Sesquilinear))?
        .with_grading(GradingData { mu: data.mu.clone() })?;
    Ok(QuantumEStructure {
        data: data.clone(),
        estructure,
    })
}

pub fn preset(name: &str) -> Result<QuantumData> {
    match name {
        "s2" => QuantumData::new(
            "s2",
            vec!["1".into(), "H".into()],
            vec![0, 2],
            1,
            Matrix::from_ints(&[&[0, 2], &[2, 0]]),
            Matrix::from_ints(&[&[0, 1], &[1, 0]]),
        ),
        "quadric-intersection-cp5" => QuantumData::new(
            "quadric-intersection-cp5",
            vec!["1".into(), "H".into(), "H^2".into(), "H^3".into()],
            vec![0, 2, 4, 6],
            3,
            Matrix::from_ints(&[&[0, 8, 0, 32], &[2, 0, 16, 0], &[0, 2, 0, 8], &[0, 0, 2, 0]]),
            Matrix::from_ints(&[&[0, 0, 0, 4], &[0, 0, 4, 0], &[0, 4, 0, 0], &[4, 0, 0, 0]]),
        ),
        other => Err(Error::UnknownPreset(other.to_string())),
    }
}

/// Frame of generalized eigenvectors of `c₁⋆` for the quadric intersection, as columns.
pub fn quadric_eigenframe() -> Matrix {
    Matrix::from_fracs(&[
        &[(1, 1), (0, 1), (1, 1), (1, 1)],
        &[(-3, 4), (2, 3), (0, 1), (3, 4)],
        &[(1, 4), (0, 1), (-1, 12), (1, 4)],
        &[(-1, 16), (-1, 6), (0, 1), (1, 16)],
    ])
}

/// `c₁⋆` in [`quadric_eigenframe`].
pub fn quadric_jordan_residue() -> Matrix {
    Matrix::from_ints(&[&[-8, 0, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 0], &[0, 0, 0, 8]])
}

/// `μ` in [`quadric_eigenframe`].
pub fn quadric_frame_grading() -> Matrix {
    Matrix::from_fracs(&[
        &[(0, 1), (2, 3), (-1, 4), (0, 1)],
        &[(9, 16), (1, 1), (0, 1), (-9, 16)],
        &[(-3, 2), (0, 1), (-1, 1), (-3, 2)],
        &[(0, 1), (-2, 3), (-1, 4), (0, 1)],
    ])
}

/// Grading term of the decomposed model `𝓔 ⊕ (genus-two curve) ⊕ 𝓔` sharing the residue.
pub fn quadric_model_grading() -> Matrix {
    Matrix::diag(&[
        Scalar::zero(),
        Scalar::frac(1, 2),
        Scalar::frac(-1, 2),
        Scalar::zero(),
    ])
}

/// `(model, quantum-in-eigenframe)`: the connections `J + uN` and `J + uM` to the given order.
pub fn quadric_isomorphism_pair(order: usize) -> Result<(EStructure, EStructure)> {
    let make = |sub: Matrix| -> Result<EStructure> {
        let mut series = MatrixSeries::zeros(4, 4, order);
        *series.coeff_mut(0) = quadric_jordan_residue();
        if order >= 1 {
            *series.coeff_mut(1) = sub;
        }
        EStructure::new(Field::Rational, series)
    };
    Ok((make(quadric_model_grading())?, make(quadric_frame_grading())?))
}

/// R-matrix of a semisimple quantum structure in the eigenframe of `c₁⋆`.
#[derive(Debug, Clone)]
pub struct TelemanRMatrix {
    /// Columns are eigenvectors of `c₁⋆` in the working frame.
    pub eigenframe: Matrix,
    pub eigenvalues: Vec<Scalar>,
    /// Solves `[ξ, R_{i+1}] + (μ' + i)R_i = 0`, `R₀ = Id`, with `ξ` diagonal and `μ'` the grading in the eigenframe.
    pub r: GaugeSeries,
}

impl TelemanRMatrix {
    /// Flat frame `C·R(u)` in the working frame; column `j` satisfies `u²∇v = w_j v`.
    pub fn flat_frame(&self) -> MatrixSeries {
        self.r.series().left_mul(&self.eigenframe)
    }

    /// Semisimple splitting `C R C⁻¹`.
    pub fn splitting(&self) -> Result<Splitting> {
        let c_inv = self.eigenframe.inverse()?;
        Splitting::new(self.flat_frame().right_mul(&c_inv))
    }
}

fn eigen_data(q: &QuantumEStructure) -> Result<(Matrix, BlockLayout, Matrix, Matrix)> {
    let (c, layout) = semisimple_eigenframe(&q.data.c1, q.estructure.field())?;
    let c_inv = c.inverse()?;
    let xi = &(&c_inv * &q.data.c1) * &c;
    let mu = &(&c_inv * &q.data.mu) * &c;
    Ok((c, layout, xi, mu))
}

/// Whether `μ` has vanishing diagonal blocks in an eigenframe of `c₁⋆`.
pub fn mu_property(q: &QuantumEStructure) -> Result<bool> {
    let (_, layout, _, mu) = eigen_data(q)?;
    Ok(layout.diagonal(&mu).is_zero())
}

pub fn teleman_rmatrix(q: &QuantumEStructure, order: usize) -> Result<TelemanRMatrix> {
    let (c, layout, xi, mu) = eigen_data(q)?;
    let r = graded_recursion(&xi, &mu, &layout, order, RecursionConvention::Quantum)?;
    let eigenvalues = (0..xi.rows()).map(|i| xi[(i, i)].clone()).collect();
    Ok(TelemanRMatrix {
        eigenframe: c,
        eigenvalues,
        r: GaugeSeries::r_matrix(r)?,
    })
}

/// Section `v = Σ v_n uⁿ` with `v₀ = seed` and `u²∇v = w·v`, solved as one linear system up to
/// [`system_top`]`(order, lookahead)` and required to be unique on orders `≤ order`.
pub fn flat_sections_ode(
    e: &EStructure,
    w: &Scalar,
    seed: &[Scalar],
    order: usize,
    lookahead: usize,
) -> Result<MatrixSeries> {
    let r = e.rank();
    if seed.len() != r {
        return Err(Error::DimensionMismatch("seed length differs from rank".into()));
    }
    let top = system_top(order, lookahead);
    if e.order() < top {
        return Err(Error::OrderTooLow {
            needed: top,
            available: e.order(),
        });
    }
    let shifted = e.residue() - &Matrix::scalar(r, w.clone());
    if !shifted.mul_vec(seed).iter().all(Zero::is_zero) {
        return Err(Error::Obstructed { order: 0 });
    }
    // unknowns v_1 … v_top; equation at order n: (n−1)v_{n−1} + Σ_{a+b=n} A_b v_a − w v_n = 0
    let var = |k: usize, i: usize| (k - 1) * r + i;
    let mut system = SparseSystem::new(top * r);
    for n in 1..=top {
        for i in 0..r {
            let mut row: Vec<(usize, Scalar)> = Vec::new();
            let mut rhs = Scalar::zero();
            if n >= 2 {
                row.push((var(n - 1, i), Scalar::int(n as i64 - 1)));
            }
            row.push((var(n, i), -w));
            for a in 0..=n {
                let ab = e.coeff(n - a);
                for k in 0..r {
                    if ab[(i, k)].is_zero() {
                        continue;
                    }
                    if a == 0 {
                        rhs -= &(&ab[(i, k)] * &seed[k]);
                    } else {
                        row.push((var(a, k), ab[(i, k)].clone()));
                    }
                }
            }
            system.push(row, rhs);
            if system.is_inconsistent() {
                return Err(Error::Obstructed { order: n });
            }
        }
    }
    let solution = system.solve();
    let particular = solution.particular.ok_or(Error::Obstructed { order: top })?;
    let dimension = projected_rank(&solution.kernel, 0..order * r);
    if dimension > 0 {
        return Err(Error::NonUnique { dimension });
    }
    let mut coeffs = vec![Matrix::column(seed.to_vec())];
    coeffs.extend(
        particular[..order * r]
            .chunks(r)
            .map(|c| Matrix::column(c.to_vec())),
    );
    MatrixSeries::new(coeffs)
}

/// `α ↦ α` in the constant frame.
pub fn gw_splitting(q: &QuantumEStructure) -> Splitting {
    Splitting::constant(q.data.rank(), q.estructure.order())
}
