//! Eigenvalue block decomposition of an E-structure and the intertwiner solver behind its
//! uniqueness.

use std::ops::Range;

use num_traits::Zero;
use serde::Serialize;

use crate::connection::{apply_connection, frame_change, EStructure, GaugeSeries};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::par::{map_trials, Execution};
use crate::random;
use crate::scalar::{Field, Scalar};
use crate::series::MatrixSeries;
use crate::sparse::SparseSystem;

/// Contiguous index ranges of a block-diagonal frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockLayout {
    ranges: Vec<Range<usize>>,
}

impl BlockLayout {
    pub fn from_sizes(sizes: impl IntoIterator<Item = usize>) -> Self {
        let mut start = 0;
        let ranges = sizes
            .into_iter()
            .map(|s| {
                let r = start..start + s;
                start += s;
                r
            })
            .collect();
        BlockLayout { ranges }
    }

    pub fn ranges(&self) -> &[Range<usize>] {
        &self.ranges
    }

    pub fn len(&self) -> usize {
        self.ranges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.ranges.last().map_or(0, |r| r.end)
    }

    pub fn block_of(&self, index: usize) -> usize {
        self.ranges
            .iter()
            .position(|r| r.contains(&index))
            .expect("index inside layout")
    }

    fn same_block(&self, i: usize, j: usize) -> bool {
        self.block_of(i) == self.block_of(j)
    }

    /// Entries outside the diagonal blocks.
    pub fn off_diagonal(&self, m: &Matrix) -> Matrix {
        let mut out = m.clone();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if self.same_block(i, j) {
                    out[(i, j)] = Scalar::zero();
                }
            }
        }
        out
    }

    /// Entries inside the diagonal blocks.
    pub fn diagonal(&self, m: &Matrix) -> Matrix {
        m - &self.off_diagonal(m)
    }

    pub fn is_block_diagonal(&self, m: &Matrix) -> bool {
        self.off_diagonal(m).is_zero()
    }

    pub fn is_block_diagonal_series(&self, s: &MatrixSeries) -> bool {
        s.coeffs().iter().all(|m| self.is_block_diagonal(m))
    }

    pub fn block(&self, m: &Matrix, k: usize) -> Matrix {
        m.submatrix(self.ranges[k].clone(), self.ranges[k].clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenBlock {
    pub eigenvalue: Scalar,
    pub multiplicity: usize,
    pub range: Range<usize>,
}

/// Generalized eigenspaces of a residue and the constant frame `C` grouping them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenBlockData {
    pub blocks: Vec<EigenBlock>,
    pub change: Matrix,
}

impl EigenBlockData {
    pub fn layout(&self) -> BlockLayout {
        BlockLayout {
            ranges: self.blocks.iter().map(|b| b.range.clone()).collect(),
        }
    }

    pub fn eigenvalues(&self) -> Vec<Scalar> {
        self.blocks.iter().map(|b| b.eigenvalue.clone()).collect()
    }
}

/// Generalized eigenspaces `ker (A₀ − w)^m` for each root `w` of the characteristic polynomial,
/// in increasing eigenvalue order.
pub fn generalized_eigenblocks(a0: &Matrix, field: Field) -> Result<EigenBlockData> {
    if !a0.is_square() {
        return Err(Error::DimensionMismatch("residue must be square".into()));
    }
    let n = a0.rows();
    let roots = a0.charpoly().roots(field)?;
    let mut columns: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    let mut blocks = Vec::with_capacity(roots.len());
    for (w, mult) in roots {
        let shifted = a0 - &Matrix::scalar(n, w.clone());
        let kernel = shifted.pow(mult as u32).kernel();
        if kernel.len() != mult {
            return Err(Error::InternalSingular(format!(
                "generalized eigenspace of {w} has dimension {} but multiplicity {mult}",
                kernel.len()
            )));
        }
        let start = columns.len();
        columns.extend(kernel);
        blocks.push(EigenBlock {
            eigenvalue: w,
            multiplicity: mult,
            range: start..start + mult,
        });
    }
    let change = Matrix::hstack(&columns.into_iter().map(Matrix::column).collect::<Vec<_>>())?;
    Ok(EigenBlockData { blocks, change })
}

/// Solve `[A₀, T] = rhs` on every off-diagonal block, with `T` vanishing on the diagonal blocks.
///
/// `a0_blocked` must be block-diagonal for `layout` with disjoint block spectra; `rhs` must vanish
/// on the diagonal blocks.
pub fn sylvester_offdiag_solve(a0_blocked: &Matrix, rhs: &Matrix, layout: &BlockLayout) -> Result<Matrix> {
    let n = layout.dim();
    if a0_blocked.rows() != n || rhs.rows() != n || rhs.cols() != n {
        return Err(Error::DimensionMismatch(
            "Sylvester data does not match the block layout".into(),
        ));
    }
    if !layout.diagonal(rhs).is_zero() {
        return Err(Error::Invalid(
            "right-hand side has nonzero diagonal blocks".into(),
        ));
    }
    let mut t = Matrix::zeros(n, n);
    for (a, ra) in layout.ranges().iter().enumerate() {
        for (b, rb) in layout.ranges().iter().enumerate() {
            if a == b {
                continue;
            }
            let aa = layout.block(a0_blocked, a);
            let ab = layout.block(a0_blocked, b);
            let target = rhs.submatrix(ra.clone(), rb.clone());
            if target.is_zero() {
                continue;
            }
            t.set_block(ra.start, rb.start, &solve_sylvester_block(&aa, &ab, &target)?);
        }
    }
    Ok(t)
}

/// `X` with `A X − X B = C`, via the Kronecker linear system.
fn solve_sylvester_block(a: &Matrix, b: &Matrix, c: &Matrix) -> Result<Matrix> {
    let (p, q) = (a.rows(), b.rows());
    let idx = |r: usize, s: usize| r * q + s;
    let mut system = Matrix::zeros(p * q, p * q);
    for r in 0..p {
        for s in 0..q {
            for k in 0..p {
                system[(idx(r, s), idx(k, s))] += &a[(r, k)];
            }
            for k in 0..q {
                system[(idx(r, s), idx(r, k))] -= &b[(k, s)];
            }
        }
    }
    if system.rank() < p * q {
        return Err(Error::InternalSingular("block spectra are not disjoint".into()));
    }
    let rhs: Vec<Scalar> = (0..p)
        .flat_map(|r| (0..q).map(move |s| (r, s)))
        .map(|(r, s)| c[(r, s)].clone())
        .collect();
    let x = system
        .solve(&rhs)
        .ok_or_else(|| Error::InternalSingular("Sylvester system inconsistent".into()))?;
    let rows = x.chunks(q).map(<[Scalar]>::to_vec).collect();
    Matrix::from_rows(rows)
}

/// Output of [`block_diagonalize`]: the frame `P = C·Π(Id + uᵐT_m)` and the connection in it.
#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    pub eigen: EigenBlockData,
    pub gauge: GaugeSeries,
    pub steps: Vec<Matrix>,
    pub transformed: EStructure,
}

impl BlockDecomposition {
    pub fn layout(&self) -> BlockLayout {
        self.eigen.layout()
    }

    /// The sub-E-structure on block `k`.
    pub fn block(&self, k: usize) -> EStructure {
        let range = self.eigen.blocks[k].range.clone();
        let series = self
            .transformed
            .series()
            .map(|m| m.submatrix(range.clone(), range.clone()));
        EStructure::new(self.transformed.field(), series).expect("square block")
    }

    pub fn blocks(&self) -> Vec<(Scalar, EStructure)> {
        (0..self.eigen.blocks.len())
            .map(|k| (self.eigen.blocks[k].eigenvalue.clone(), self.block(k)))
            .collect()
    }
}

/// Frame in which every connection coefficient is block-diagonal by residue eigenvalue, to `order`.
///
/// Each step applies `Id + uᵐT_m` with `T_m` off-diagonal and `[A₀, T_m] = −offdiag(Ã_m)`, which
/// clears the off-diagonal part of `Ã_m` and leaves all lower coefficients unchanged.
pub fn block_diagonalize(e: &EStructure, order: usize) -> Result<BlockDecomposition> {
    let order = order.min(e.order());
    let e = e.truncate(order);
    let eigen = generalized_eigenblocks(e.residue(), e.field())?;
    let layout = eigen.layout();
    let n = e.rank();
    let c = GaugeSeries::new(MatrixSeries::constant(eigen.change.clone(), order))?;
    let mut current = frame_change(&c, &e)?;
    let mut gauge = c.into_series();
    let a0 = current.residue().clone();
    let mut steps = Vec::with_capacity(order);
    for m in 1..=order {
        let off = layout.off_diagonal(current.coeff(m));
        let t = sylvester_offdiag_solve(&a0, &-&off, &layout)?;
        if !t.is_zero() {
            let step = GaugeSeries::new(MatrixSeries::identity_plus(&t, m, order))?;
            current = frame_change(&step, &current)?;
            gauge = &gauge * step.series();
        }
        steps.push(t);
    }
    debug_assert!(layout.is_block_diagonal_series(current.series()));
    debug_assert_eq!(gauge.rows(), n);
    Ok(BlockDecomposition {
        eigen,
        gauge: GaugeSeries::new(gauge)?,
        steps,
        transformed: current,
    })
}

/// Basis of the solutions `F` (an `r₂×r₁` matrix series) of `u² dF/du = F·A¹ − A²·F`, i.e. of the
/// morphisms `E₁ → E₂`, to `order`.
#[derive(Debug, Clone)]
pub struct HomSpace {
    pub order: usize,
    pub lookahead: usize,
    pub basis: Vec<MatrixSeries>,
}

impl HomSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Whether `f` lies in the span of the basis (on orders up to `self.order`).
    pub fn contains(&self, f: &MatrixSeries) -> bool {
        let flat = |s: &MatrixSeries| -> Vec<Scalar> {
            (0..=self.order)
                .flat_map(|k| s.coeff(k).entries().cloned().collect::<Vec<_>>())
                .collect()
        };
        let mut rows: Vec<Vec<Scalar>> = self.basis.iter().map(flat).collect();
        let before = Matrix::from_rows(rows.clone()).map_or(0, |m| m.rank());
        rows.push(flat(f));
        Matrix::from_rows(rows).is_ok_and(|m| m.rank() == before)
    }
}

/// Highest power of `u`, and highest unknown coefficient, in a global intertwiner system.
///
/// The lookahead counts recursion steps past `order`; step `i` links coefficients `i` and `i + 1`,
/// so steps `0..=order + lookahead` reach `u^{order + lookahead + 1}`.
pub fn system_top(order: usize, lookahead: usize) -> usize {
    order + lookahead + 1
}

/// Solve the intertwining equation as one global sparse system up to
/// [`system_top`]`(order, lookahead)` and project the solution space to orders `≤ order`.
pub fn hom_solver(e1: &EStructure, e2: &EStructure, order: usize, lookahead: usize) -> Result<HomSpace> {
    let top = system_top(order, lookahead);
    for e in [e1, e2] {
        if e.order() < top {
            return Err(Error::OrderTooLow {
                needed: top,
                available: e.order(),
            });
        }
    }
    let (r1, r2) = (e1.rank(), e2.rank());
    let block = r1 * r2;
    let var = |k: usize, i: usize, j: usize| k * block + i * r1 + j;
    let mut system = SparseSystem::new((top + 1) * block);
    for n in 0..=top {
        for i in 0..r2 {
            for j in 0..r1 {
                // (n−1)F_{n−1} − Σ_{a+b=n} (F_a A¹_b − A²_b F_a) = 0
                let mut row: Vec<(usize, Scalar)> = Vec::new();
                if n >= 2 {
                    row.push((var(n - 1, i, j), Scalar::int(n as i64 - 1)));
                }
                for a in 0..=n {
                    let b = n - a;
                    let (a1, a2) = (e1.coeff(b), e2.coeff(b));
                    for k in 0..r1 {
                        if !a1[(k, j)].is_zero() {
                            row.push((var(a, i, k), -&a1[(k, j)]));
                        }
                    }
                    for k in 0..r2 {
                        if !a2[(i, k)].is_zero() {
                            row.push((var(a, k, j), a2[(i, k)].clone()));
                        }
                    }
                }
                system.push(row, Scalar::zero());
            }
        }
    }
    let solution = system.solve();
    let kept = (order + 1) * block;
    let projected: Vec<Vec<Scalar>> = solution.kernel.iter().map(|v| v[..kept].to_vec()).collect();
    let basis = independent_rows(projected)
        .into_iter()
        .map(|v| {
            let coeffs = v
                .chunks(block)
                .map(|c| {
                    Matrix::from_rows(c.chunks(r1).map(<[Scalar]>::to_vec).collect()).expect("rectangular")
                })
                .collect();
            MatrixSeries::new(coeffs).expect("nonempty")
        })
        .collect();
    Ok(HomSpace {
        order,
        lookahead,
        basis,
    })
}

/// Reduced basis of the row span.
pub(crate) fn independent_rows(rows: Vec<Vec<Scalar>>) -> Vec<Vec<Scalar>> {
    if rows.is_empty() {
        return rows;
    }
    let m = Matrix::from_rows(rows).expect("rectangular");
    let (r, pivots) = m.rref();
    (0..pivots.len())
        .map(|i| (0..r.cols()).map(|j| r[(i, j)].clone()).collect())
        .collect()
}

/// Outcome of the four exact decomposition checks on one random E-structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeveltCheck {
    pub seed: u64,
    pub rank: usize,
    pub blocks: usize,
    /// `u²∇` maps each block's sections into the same block.
    pub invariant: bool,
    /// Constant terms of the block frames span the generalized eigenspaces.
    pub residue_blocks: bool,
    /// Diagonal blocks of `Ã₁` equal those of `A₁` in the eigenframe.
    pub a1_preserved: bool,
    /// A second decomposition, of a randomly regauged copy, differs by a block-diagonal gauge.
    pub unique: bool,
}

impl LeveltCheck {
    pub fn passed(&self) -> bool {
        self.invariant && self.residue_blocks && self.a1_preserved && self.unique
    }
}

/// Decompose one random E-structure and run every exact check on it.
pub fn levelt_trial(seed: u64, max_rank: usize, order: usize) -> Result<LeveltCheck> {
    let mut rng = random::rng_for(seed);
    let rank = 1 + (seed as usize % max_rank.max(1));
    let distinct = 1 + (seed as usize / max_rank.max(1)) % rank;
    let spectrum = random::random_spectrum(&mut rng, rank, distinct, 3);
    let e = random::random_estructure(&mut rng, &spectrum, order, 2);
    let dec = block_diagonalize(&e, order)?;
    let layout = dec.layout();
    let p = dec.gauge.series();
    let p_inv = p.invert()?;

    let mut invariant = true;
    for range in layout.ranges() {
        let columns = p.map(|m| m.submatrix(0..rank, range.clone()));
        let image = apply_connection(&e, &columns)?;
        let in_frame = &p_inv * &image;
        invariant &= in_frame.coeffs().iter().all(|m| {
            (0..rank)
                .filter(|i| !range.contains(i))
                .all(|i| (0..m.cols()).all(|j| m[(i, j)].is_zero()))
        });
    }

    let residue_blocks = dec.eigen.blocks.iter().all(|b| {
        let shifted = e.residue() - &Matrix::scalar(rank, b.eigenvalue.clone());
        let cols = p.coeff(0).submatrix(0..rank, b.range.clone());
        (&shifted.pow(b.multiplicity as u32) * &cols).is_zero() && cols.rank() == b.multiplicity
    });

    let c = &dec.eigen.change;
    let a1_eigen = &(&c.inverse()? * e.coeff(1.min(order))) * c;
    let a1_preserved = order == 0 || layout.diagonal(dec.transformed.coeff(1)) == layout.diagonal(&a1_eigen);

    let q = random::random_gauge(&mut rng, rank, order, 2);
    let e2 = frame_change(&q, &e)?;
    let dec2 = block_diagonalize(&e2, order)?;
    let relative = &p_inv * &(q.series() * dec2.gauge.series());
    let unique = dec2.eigen.eigenvalues() == dec.eigen.eigenvalues()
        && dec2.layout() == layout
        && layout.is_block_diagonal_series(&relative);

    Ok(LeveltCheck {
        seed,
        rank,
        blocks: layout.len(),
        invariant,
        residue_blocks,
        a1_preserved,
        unique,
    })
}

/// Run [`levelt_trial`] on seeds `base..base + trials`.
pub fn levelt_sweep(
    trials: u64,
    base: u64,
    max_rank: usize,
    order: usize,
    exec: Execution,
) -> Vec<Result<LeveltCheck>> {
    map_trials(trials, exec, |k| levelt_trial(base + k, max_rank, order))
}

/// Dimension of the hom space between two random E-structures with disjoint residue spectra.
pub fn rigidity_trial(seed: u64, max_rank: usize, order: usize, lookahead: usize) -> Result<usize> {
    let mut rng = random::rng_for(seed);
    let r1 = 1 + (seed as usize % max_rank.max(1));
    let r2 = 1 + ((seed as usize / 7) % max_rank.max(1));
    let values = random::random_spectrum(&mut rng, r1 + r2, r1 + r2, 6);
    let (s1, s2) = values.split_at(r1);
    let e1 = random::random_estructure(&mut rng, s1, system_top(order, lookahead), 2);
    let e2 = random::random_estructure(&mut rng, s2, system_top(order, lookahead), 2);
    Ok(hom_solver(&e1, &e2, order, lookahead)?.dimension())
}

pub fn rigidity_sweep(
    trials: u64,
    base: u64,
    max_rank: usize,
    order: usize,
    exec: Execution,
) -> Vec<Result<usize>> {
    map_trials(trials, exec, |k| rigidity_trial(base + k, max_rank, order, 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sylvester_two_by_two() {
        let a0 = Matrix::diag(&[Scalar::int(-2), Scalar::int(2)]);
        let c = Matrix::from_ints(&[&[0, 1], &[1, 0]]);
        let layout = BlockLayout::from_sizes([1, 1]);
        let t = sylvester_offdiag_solve(&a0, &c, &layout).unwrap();
        assert_eq!(t, Matrix::from_fracs(&[&[(0, 1), (-1, 4)], &[(1, 4), (0, 1)]]));
    }

    #[test]
    fn diagonal_residue_gives_identity_frame() {
        let a0 = Matrix::diag(&[Scalar::int(1), Scalar::int(3), Scalar::int(5)]);
        let data = generalized_eigenblocks(&a0, Field::Rational).unwrap();
        assert_eq!(data.change, Matrix::identity(3));
    }

    #[test]
    fn jordan_block_is_one_block() {
        let a0 = Matrix::from_ints(&[&[4, 1], &[0, 4]]);
        let data = generalized_eigenblocks(&a0, Field::Rational).unwrap();
        assert_eq!(data.blocks.len(), 1);
        assert_eq!(data.blocks[0].multiplicity, 2);
    }

    #[test]
    fn small_sweep_passes() {
        for check in levelt_sweep(6, 0, 4, 4, Execution::Sequential) {
            assert!(check.unwrap().passed());
        }
    }
}
