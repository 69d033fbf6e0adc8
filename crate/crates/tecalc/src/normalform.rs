//! Semisimple normal forms: flattening scalar blocks, R-matrices from grading operators, the
//! global isomorphism solver, and splitting classification.

use num_traits::Zero;
use serde::Serialize;

use crate::connection::{frame_change, EStructure, Extension, GaugeSeries, Splitting};
use crate::error::{Error, Result};
use crate::levelt::{
    block_diagonalize, generalized_eigenblocks, sylvester_offdiag_solve, system_top, BlockLayout,
};
use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar};
use crate::series::MatrixSeries;
use crate::sparse::SparseSystem;

/// Frame `Q` with `frame_change(Q, E_w)` equal to the constant connection `w·Id`.
#[derive(Debug, Clone)]
pub struct FlatteningCertificate {
    pub eigenvalue: Scalar,
    pub gauge: GaugeSeries,
    /// Re-check of the output by a fresh frame change.
    pub verified: bool,
}

fn scalar_value(m: &Matrix) -> Option<Scalar> {
    let w = m.entries().next()?.clone();
    (*m == Matrix::scalar(m.rows(), w.clone())).then_some(w)
}

/// Flatten a block with scalar residue `w·Id` and vanishing `A₁` to `w/u²·Id`.
///
/// The step at order `k ≥ 2` uses `Id + u^{k−1}T` with `T = −Ã_k/(k−1)`: its derivative term
/// `(k−1)T uᵏ` cancels `Ã_k`, and conjugation cannot help since `w·Id` is central.
pub fn flatten_scalar_block(e: &EStructure, order: usize) -> Result<FlatteningCertificate> {
    let order = order.min(e.order());
    let e = e.truncate(order);
    let w = scalar_value(e.residue()).ok_or(Error::ResidueNotScalar)?;
    if order >= 1 && !e.coeff(1).is_zero() {
        return Err(Error::NonzeroSubleading);
    }
    let n = e.rank();
    let mut current = e.clone();
    let mut gauge = MatrixSeries::identity(n, order);
    for k in 2..=order {
        let t = current.coeff(k).scale(&Scalar::frac(-1, k as i64 - 1));
        if t.is_zero() {
            continue;
        }
        let step = GaugeSeries::new(MatrixSeries::identity_plus(&t, k - 1, order))?;
        current = frame_change(&step, &current)?;
        gauge = &gauge * step.series();
    }
    let gauge = GaugeSeries::new(gauge)?;
    let target = MatrixSeries::constant(Matrix::scalar(n, w.clone()), order);
    let verified = *frame_change(&gauge, &e)?.series() == target;
    Ok(FlatteningCertificate {
        eigenvalue: w,
        gauge,
        verified,
    })
}

/// Isomorphism `⊕ 𝓔^{−w/u} → E`: the columns of `gauge` form a flat frame with `u²∇v_i = w_i v_i`.
#[derive(Debug, Clone)]
pub struct Semisimplification {
    pub eigenvalues: Vec<Scalar>,
    pub gauge: GaugeSeries,
    pub verified: bool,
}

impl Semisimplification {
    pub fn normal_form(&self) -> Matrix {
        Matrix::diag(&self.eigenvalues)
    }
}

/// Block-decompose, then flatten every block.
pub fn semisimplify(e: &EStructure, order: usize) -> Result<Semisimplification> {
    let order = order.min(e.order());
    let dec = block_diagonalize(e, order)?;
    let mut eigenvalues = Vec::with_capacity(e.rank());
    let mut flatteners = Vec::with_capacity(dec.eigen.blocks.len());
    for (k, block) in dec.eigen.blocks.iter().enumerate() {
        let sub = dec.block(k);
        let flat = flatten_scalar_block(&sub, order).map_err(|err| match err {
            Error::ResidueNotScalar => Error::NotSemisimple(format!(
                "residue is not diagonalizable on the generalized eigenspace of {}",
                block.eigenvalue
            )),
            other => other,
        })?;
        eigenvalues.extend(std::iter::repeat_n(block.eigenvalue.clone(), block.multiplicity));
        flatteners.push(flat.gauge.into_series());
    }
    let block_gauge = block_diag_series(&flatteners, order);
    let gauge = GaugeSeries::new(dec.gauge.series() * &block_gauge)?;
    let target = MatrixSeries::constant(Matrix::diag(&eigenvalues), order);
    let verified = *frame_change(&gauge, &e.truncate(order))?.series() == target;
    Ok(Semisimplification {
        eigenvalues,
        gauge,
        verified,
    })
}

fn block_diag_series(parts: &[MatrixSeries], order: usize) -> MatrixSeries {
    let coeffs = (0..=order)
        .map(|k| Matrix::block_diag(&parts.iter().map(|p| p.coeff(k).clone()).collect::<Vec<_>>()))
        .collect();
    MatrixSeries::new(coeffs).expect("nonempty")
}

/// The splitting whose frame is the flat frame of [`semisimplify`], normalized to `S₀ = Id`.
pub fn semisimple_splitting(e: &EStructure, order: usize) -> Result<Splitting> {
    let ss = semisimplify(e, order)?;
    let c_inv = ss.gauge.series().coeff(0).inverse()?;
    Splitting::new(ss.gauge.series().right_mul(&c_inv))
}

/// Which of the two R-matrix recursions to solve, for block-scalar `ξ` and grading `μ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecursionConvention {
    /// `[ξ, R_{k+1}] = R_k(μ − k)`: relates `ξ` to `ξ + uμ`.
    Grading,
    /// `[ξ, R_{k+1}] + (μ + k)R_k = 0`: relates `ξ + uμ` to `ξ`.
    Quantum,
}

/// Solve the chosen recursion with `R₀ = Id` in a frame where `xi` is diagonal.
///
/// Off-diagonal blocks of `R_{k+1}` come from the Sylvester equation at order `k+1`; the diagonal
/// blocks of `R_k` are pinned by solvability at order `k+1`, which requires
/// `k·D_k = diag(O_k μ)` (grading) or `k·D_k = −diag(μ O_k)` (quantum).
pub(crate) fn graded_recursion(
    xi: &Matrix,
    mu: &Matrix,
    layout: &BlockLayout,
    order: usize,
    convention: RecursionConvention,
) -> Result<MatrixSeries> {
    let n = xi.rows();
    if !layout.diagonal(mu).is_zero() {
        return Err(Error::MuPropertyFailed);
    }
    let mut coeffs = vec![Matrix::identity(n)];
    for k in 0..order {
        let r_k = &coeffs[k];
        let rhs = match convention {
            RecursionConvention::Grading => &(r_k * mu) - &r_k.scale(&Scalar::int(k as i64)),
            RecursionConvention::Quantum => -&(&(mu * r_k) + &r_k.scale(&Scalar::int(k as i64))),
        };
        if !layout.diagonal(&rhs).is_zero() {
            return Err(Error::Inconsistent(format!(
                "diagonal-block solvability fails at order {}",
                k + 1
            )));
        }
        let off = sylvester_offdiag_solve(xi, &rhs, layout)?;
        let kk = Scalar::int(k as i64 + 1);
        let pinned = match convention {
            RecursionConvention::Grading => layout.diagonal(&(&off * mu)),
            RecursionConvention::Quantum => -&layout.diagonal(&(mu * &off)),
        };
        coeffs.push(&off + &pinned.scale(&kk.inv()?));
    }
    MatrixSeries::new(coeffs)
}

/// Eigenframe of a semisimple `ξ`: `C` and the layout, with `C⁻¹ξC` diagonal.
pub(crate) fn semisimple_eigenframe(xi: &Matrix, field: Field) -> Result<(Matrix, BlockLayout)> {
    let data = generalized_eigenblocks(xi, field)?;
    let c = data.change.clone();
    let diag = &(&c.inverse()? * xi) * &c;
    let expected = Matrix::diag(
        &data
            .blocks
            .iter()
            .flat_map(|b| std::iter::repeat_n(b.eigenvalue.clone(), b.multiplicity))
            .collect::<Vec<_>>(),
    );
    if diag != expected {
        return Err(Error::NotSemisimple("ξ is not diagonalizable".into()));
    }
    Ok((c, data.layout()))
}

/// R-matrix of the grading operator `μ` relative to the semisimple `ξ`, returned in the frame
/// of the inputs: `splitting_change(R, ξ) = ξ + uμ`, with `R₀ = Id`.
pub fn rmatrix_from_grading(xi: &Matrix, mu: &Matrix, order: usize, field: Field) -> Result<GaugeSeries> {
    if !xi.is_square() || xi.rows() != mu.rows() || !mu.is_square() {
        return Err(Error::DimensionMismatch(
            "ξ and μ must be square of equal size".into(),
        ));
    }
    let (c, layout) = semisimple_eigenframe(xi, field)?;
    let c_inv = c.inverse()?;
    let xi_e = &(&c_inv * xi) * &c;
    let mu_e = &(&c_inv * mu) * &c;
    let r =
        graded_recursion(&xi_e, &mu_e, &layout, order, RecursionConvention::Grading).map_err(
            |err| match err {
                Error::MuPropertyFailed => Error::Inconsistent("μ is not ξ-compatible".into()),
                other => other,
            },
        )?;
    GaugeSeries::r_matrix(r.map(|m| &(&c * m) * &c_inv))
}

/// Unique `R` (with `R₀ = Id`) such that `splitting_change(R, E₁) = E₂` to `order`.
#[derive(Debug, Clone)]
pub struct Isomorphism {
    pub order: usize,
    pub lookahead: usize,
    pub r: GaugeSeries,
}

/// Solve `u² dR/du = R·A² − A¹·R` with `R₀ = Id` as one sparse system up to
/// [`system_top`]`(order, lookahead)`, then require the solution to be unique on orders `≤ order`.
pub fn isomorphism_solver(
    e1: &EStructure,
    e2: &EStructure,
    order: usize,
    lookahead: usize,
) -> Result<Isomorphism> {
    if e1.rank() != e2.rank() {
        return Err(Error::DimensionMismatch(
            "isomorphic structures must have equal rank".into(),
        ));
    }
    if e1.field() != e2.field() {
        return Err(Error::FieldViolation(
            "structures are over different fields".into(),
        ));
    }
    let top = system_top(order, lookahead);
    for e in [e1, e2] {
        if e.order() < top {
            return Err(Error::OrderTooLow {
                needed: top,
                available: e.order(),
            });
        }
    }
    let r = e1.rank();
    let block = r * r;
    // unknowns: R_1 … R_top
    let var = |k: usize, i: usize, j: usize| (k - 1) * block + i * r + j;
    let mut system = SparseSystem::new(top * block);
    for n in 0..=top {
        for i in 0..r {
            for j in 0..r {
                // (n−1)R_{n−1} − Σ_{a+b=n} (R_a A²_b − A¹_b R_a) = 0, R_0 = Id moved to the right
                let mut row: Vec<(usize, Scalar)> = Vec::new();
                let mut rhs = Scalar::zero();
                if n >= 2 {
                    row.push((var(n - 1, i, j), Scalar::int(n as i64 - 1)));
                }
                for a in 0..=n {
                    let b = n - a;
                    let (a1, a2) = (e1.coeff(b), e2.coeff(b));
                    if a == 0 {
                        // −(A²_b − A¹_b)[i][j] on the left, moved right with the opposite sign
                        rhs += &(&a2[(i, j)] - &a1[(i, j)]);
                        continue;
                    }
                    for k in 0..r {
                        if !a2[(k, j)].is_zero() {
                            row.push((var(a, i, k), -&a2[(k, j)]));
                        }
                        if !a1[(i, k)].is_zero() {
                            row.push((var(a, k, j), a1[(i, k)].clone()));
                        }
                    }
                }
                system.push(row, rhs);
            }
        }
    }
    let solution = system.solve();
    let particular = solution
        .particular
        .ok_or_else(|| Error::NoSolution("the intertwining equation is inconsistent".into()))?;
    let kept = order * block;
    let dimension = crate::sparse::projected_rank(&solution.kernel, 0..kept);
    if dimension > 0 {
        return Err(Error::NonUnique { dimension });
    }
    let mut coeffs = vec![Matrix::identity(r)];
    coeffs.extend(
        particular[..kept]
            .chunks(block)
            .map(|c| Matrix::from_rows(c.chunks(r).map(<[Scalar]>::to_vec).collect()).expect("rectangular")),
    );
    Ok(Isomorphism {
        order,
        lookahead,
        r: GaugeSeries::r_matrix(MatrixSeries::new(coeffs)?)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplittingKind {
    /// The connection in the splitting's frame has `A_i = 0` for `i ≥ 2`.
    pub homogeneous: bool,
    /// `S(u)ᵀ G S(−u) = G` (sesquilinear) or `S(u)ᵀ G S(u) = G` (u-linear); `None` without a pairing.
    pub p_compatible: Option<bool>,
    /// `A₁ω ∈ Kω` and `A_i ω = 0` for `i ≥ 2` in the splitting's frame; `None` without `ω`.
    pub omega_compatible: Option<bool>,
    /// The splitting maps each generalized eigenspace of the residue into its Levelt block.
    pub block_preserving: bool,
}

pub fn check_splitting_kind(
    s: &Splitting,
    e: &EStructure,
    omega: Option<&[Scalar]>,
) -> Result<SplittingKind> {
    let order = e.order().min(s.series().order());
    let e = e.truncate(order);
    let framed = s.connection(&e)?;
    let homogeneous = (2..=order).all(|i| framed.coeff(i).is_zero());

    let p_compatible = e.polarization().map(|pol| {
        let right = match pol.extension {
            Extension::Sesquilinear => s.series().reflect(),
            Extension::ULinear => s.series().clone(),
        };
        let g = &s.series().transpose().right_mul(&pol.matrix) * &right;
        g == MatrixSeries::constant(pol.matrix.clone(), g.order())
    });

    let omega_compatible = omega.map(|w| {
        let col = Matrix::column(w.to_vec());
        let image = framed.coeff(1.min(order)) * &col;
        let eigen = Matrix::hstack(&[col.clone(), image])
            .map(|m| m.rank() <= 1)
            .unwrap_or(false);
        let higher = (2..=order).all(|i| (framed.coeff(i) * &col).is_zero());
        (order == 0 || eigen) && higher
    });

    let dec = block_diagonalize(&e, order)?;
    let layout = dec.layout();
    let relative = &dec.gauge.series().invert()? * &s.series().right_mul(&dec.eigen.change);
    let block_preserving = layout.is_block_diagonal_series(&relative);

    Ok(SplittingKind {
        homogeneous,
        p_compatible,
        omega_compatible,
        block_preserving,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grading_rmatrix_on_two_by_two() {
        let xi = Matrix::diag(&[Scalar::int(-2), Scalar::int(2)]);
        let mu = Matrix::from_fracs(&[&[(0, 1), (1, 2)], &[(1, 2), (0, 1)]]);
        let r = rmatrix_from_grading(&xi, &mu, 2, Field::Rational).unwrap();
        assert_eq!(
            *r.series().coeff(1),
            Matrix::from_fracs(&[&[(-1, 16), (-1, 8)], &[(1, 8), (1, 16)]])
        );
    }

    #[test]
    fn zero_grading_gives_identity() {
        let xi = Matrix::diag(&[Scalar::int(1), Scalar::int(5)]);
        let r = rmatrix_from_grading(&xi, &Matrix::zeros(2, 2), 4, Field::Rational).unwrap();
        assert_eq!(*r.series(), MatrixSeries::identity(2, 4));
    }

    #[test]
    fn incompatible_grading_is_inconsistent() {
        let xi = Matrix::diag(&[Scalar::int(1), Scalar::int(5)]);
        let err = rmatrix_from_grading(&xi, &Matrix::identity(2), 2, Field::Rational).unwrap_err();
        assert_eq!(err.kind(), "Inconsistent");
    }

    #[test]
    fn rank_one_flattening() {
        // A = w/u² + c
        let e = EStructure::from_coeffs(
            Field::Rational,
            vec![
                Matrix::scalar(1, Scalar::int(3)),
                Matrix::zeros(1, 1),
                Matrix::scalar(1, Scalar::int(5)),
                Matrix::zeros(1, 1),
            ],
        )
        .unwrap();
        let cert = flatten_scalar_block(&e, 3).unwrap();
        assert!(cert.verified);
        assert_eq!(cert.gauge.series().coeff(1)[(0, 0)], Scalar::int(-5));
    }

    #[test]
    fn exponential_isomorphic_to_itself() {
        let e = EStructure::exponential(Scalar::int(2), 8);
        let iso = isomorphism_solver(&e, &e, 4, 2).unwrap();
        assert_eq!(*iso.r.series(), MatrixSeries::identity(1, 4));
    }
}
