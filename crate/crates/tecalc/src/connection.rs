//! E-structures: connections `∇ = d/du + u⁻² Σ A_i uⁱ` on a free rank-`r` module over `K[[u]]`.
//!
//! Sections are column vectors of series. Two transformation laws are provided:
//!
//! * [`gauge_transform`] applies `Ã = P⁻¹AP − P⁻¹ dP/du` literally;
//! * [`frame_change`] (and its R-matrix form [`splitting_change`]) applies `Ã = P⁻¹AP + P⁻¹ dP/du`,
//!   the law under which [`apply_connection`] is equivariant: if `v` solves the new system
//!   then `P·v` solves the old one.
//!
//! The two agree after negating the connection: `gauge_transform(P, E) = −frame_change(P, −E)`.
//! All normal-form algorithms in this crate return frames for [`frame_change`].

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar};
use crate::series::MatrixSeries;

/// How a constant fiber pairing is extended to `K[[u]]`-valued sections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Extension {
    /// `(f a, b) = f(u)(a,b)` and `(a, f b) = f(−u)(a,b)`.
    #[default]
    #[serde(rename = "sesquilinear")]
    Sesquilinear,
    /// `(f a, b) = (a, f b) = f(u)(a,b)`.
    #[serde(rename = "u-linear")]
    ULinear,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polarization {
    pub matrix: Matrix,
    pub extension: Extension,
}

impl Polarization {
    pub fn new(matrix: Matrix, extension: Extension) -> Self {
        Polarization { matrix, extension }
    }

    pub fn is_symmetric(&self) -> bool {
        self.matrix == self.matrix.transpose()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.matrix.is_square() && !self.matrix.det().is_zero()
    }

    /// Pairing of two column-vector series, as a `1×1` series.
    pub fn pair(&self, a: &MatrixSeries, b: &MatrixSeries) -> MatrixSeries {
        let b = match self.extension {
            Extension::Sesquilinear => b.reflect(),
            Extension::ULinear => b.clone(),
        };
        &a.transpose().right_mul(&self.matrix) * &b
    }
}

/// Grading operator on the fiber (the μ-matrix of a quantum E-structure, say).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradingData {
    pub mu: Matrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EStructure {
    field: Field,
    series: MatrixSeries,
    polarization: Option<Polarization>,
    grading: Option<GradingData>,
}

impl EStructure {
    /// Connection with coefficient series `Σ A_i uⁱ` (the connection matrix times `u²`).
    pub fn new(field: Field, series: MatrixSeries) -> Result<Self> {
        if series.rows() != series.cols() {
            return Err(Error::DimensionMismatch(
                "connection matrices must be square".into(),
            ));
        }
        if field == Field::Rational && !series.coeffs().iter().all(Matrix::is_real) {
            return Err(Error::FieldViolation(
                "Gaussian entries in a rational connection".into(),
            ));
        }
        Ok(EStructure {
            field,
            series,
            polarization: None,
            grading: None,
        })
    }

    pub fn from_coeffs(field: Field, coeffs: Vec<Matrix>) -> Result<Self> {
        Self::new(field, MatrixSeries::new(coeffs)?)
    }

    /// `d/du` on a free module of the given rank.
    pub fn trivial(rank: usize, order: usize) -> Self {
        Self::new(Field::Rational, MatrixSeries::zeros(rank, rank, order)).expect("square")
    }

    /// The rank-one structure `d/du + w/u²` with pairing `(1,1) = 1`.
    pub fn exponential(w: Scalar, order: usize) -> Self {
        let field = if w.is_real() {
            Field::Rational
        } else {
            Field::Gaussian
        };
        let series = MatrixSeries::constant(Matrix::scalar(1, w), order);
        Self::new(field, series)
            .expect("rank one")
            .with_polarization(Polarization::new(Matrix::identity(1), Extension::Sesquilinear))
            .expect("rank one pairing")
    }

    pub fn with_polarization(mut self, p: Polarization) -> Result<Self> {
        if p.matrix.rows() != self.rank() || p.matrix.cols() != self.rank() {
            return Err(Error::DimensionMismatch("pairing size differs from rank".into()));
        }
        self.polarization = Some(p);
        Ok(self)
    }

    pub fn with_grading(mut self, g: GradingData) -> Result<Self> {
        if g.mu.rows() != self.rank() || g.mu.cols() != self.rank() {
            return Err(Error::DimensionMismatch("grading size differs from rank".into()));
        }
        self.grading = Some(g);
        Ok(self)
    }

    pub fn without_extras(&self) -> Self {
        EStructure {
            field: self.field,
            series: self.series.clone(),
            polarization: None,
            grading: None,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.series.rows()
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn series(&self) -> &MatrixSeries {
        &self.series
    }

    pub fn coeff(&self, i: usize) -> &Matrix {
        self.series.coeff(i)
    }

    pub fn residue(&self) -> &Matrix {
        self.series.coeff(0)
    }

    pub fn polarization(&self) -> Option<&Polarization> {
        self.polarization.as_ref()
    }

    pub fn grading(&self) -> Option<&GradingData> {
        self.grading.as_ref()
    }

    pub fn truncate(&self, order: usize) -> Self {
        EStructure {
            series: self.series.truncate(order),
            ..self.clone()
        }
    }

    /// Same connection with every coefficient negated; relates the two transformation laws.
    pub fn negated(&self) -> Self {
        EStructure {
            series: -&self.series,
            ..self.without_extras()
        }
    }

    /// Same data over another working field; fails if a coefficient leaves it.
    pub fn with_field(&self, field: Field) -> Result<Self> {
        if field == Field::Rational && !self.series.coeffs().iter().all(Matrix::is_real) {
            return Err(Error::FieldViolation(
                "Gaussian entries in a rational connection".into(),
            ));
        }
        Ok(EStructure {
            field,
            ..self.clone()
        })
    }

    /// Pointwise equality of coefficients on the shared orders.
    pub fn agrees_with(&self, other: &EStructure) -> bool {
        self.series.agrees_with(&other.series)
    }
}

/// Invertible matrix series relating two frames; an R-matrix additionally has `P₀ = Id`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugeSeries(MatrixSeries);

impl GaugeSeries {
    pub fn new(series: MatrixSeries) -> Result<Self> {
        if series.rows() != series.cols() {
            return Err(Error::DimensionMismatch("gauge must be square".into()));
        }
        series.coeff(0).inverse().map_err(|_| Error::NotAUnit)?;
        Ok(GaugeSeries(series))
    }

    pub fn r_matrix(series: MatrixSeries) -> Result<Self> {
        if *series.coeff(0) != Matrix::identity(series.rows()) {
            return Err(Error::Invalid("R-matrix must have identity constant term".into()));
        }
        Self::new(series)
    }

    pub fn identity(rank: usize, order: usize) -> Self {
        GaugeSeries(MatrixSeries::identity(rank, order))
    }

    pub fn series(&self) -> &MatrixSeries {
        &self.0
    }

    pub fn into_series(self) -> MatrixSeries {
        self.0
    }

    pub fn is_r_matrix(&self) -> bool {
        *self.0.coeff(0) == Matrix::identity(self.0.rows())
    }

    pub fn order(&self) -> usize {
        self.0.order()
    }

    pub fn inverse(&self) -> GaugeSeries {
        GaugeSeries(self.0.invert().expect("invertible constant term"))
    }

    pub fn compose(&self, other: &GaugeSeries) -> GaugeSeries {
        GaugeSeries(&self.0 * &other.0)
    }
}

fn check_rank(p: &MatrixSeries, e: &EStructure) -> Result<()> {
    if p.rows() != e.rank() || p.cols() != e.rank() {
        return Err(Error::DimensionMismatch(format!(
            "gauge is {}x{}, connection has rank {}",
            p.rows(),
            p.cols(),
            e.rank()
        )));
    }
    Ok(())
}

/// Pairing matrix seen in the new frame, kept only when it stays constant.
fn transported_pairing(p: &MatrixSeries, pol: &Polarization) -> Option<Polarization> {
    let right = match pol.extension {
        Extension::Sesquilinear => p.reflect(),
        Extension::ULinear => p.clone(),
    };
    let g = &p.transpose().right_mul(&pol.matrix) * &right;
    g.coeffs()[1..]
        .iter()
        .all(Matrix::is_zero)
        .then(|| Polarization::new(g.coeff(0).clone(), pol.extension))
}

fn transported_grading(p: &MatrixSeries, g: &GradingData) -> Option<GradingData> {
    let p0 = p.coeff(0);
    let constant = p.coeffs()[1..].iter().all(Matrix::is_zero);
    constant.then(|| GradingData {
        mu: &(&p0.inverse().expect("unit") * &g.mu) * p0,
    })
}

fn transform(p: &GaugeSeries, e: &EStructure, derivative_sign: i64) -> Result<EStructure> {
    let p = p.series();
    check_rank(p, e)?;
    let p_inv = p.invert()?;
    let conj = &(&p_inv * e.series()) * p;
    let drift = (&p_inv * &p.u2_derivative()).scale(&Scalar::int(derivative_sign));
    let series = &conj + &drift;
    let mut out = EStructure::new(e.field, series)?;
    out.polarization = e
        .polarization
        .as_ref()
        .and_then(|pol| transported_pairing(p, pol));
    out.grading = e.grading.as_ref().and_then(|g| transported_grading(p, g));
    Ok(out)
}

/// `Ã = P⁻¹AP − P⁻¹ dP/du`, applied literally to the coefficient series.
pub fn gauge_transform(p: &GaugeSeries, e: &EStructure) -> Result<EStructure> {
    transform(p, e, -1)
}

/// Connection in the frame whose vectors are the columns of `P`: `Ã = P⁻¹AP + P⁻¹ dP/du`.
pub fn frame_change(p: &GaugeSeries, e: &EStructure) -> Result<EStructure> {
    transform(p, e, 1)
}

/// `A^{s₂} = R⁻¹A^{s₁}R + R⁻¹ dR/du` for an R-matrix relating two splittings.
pub fn splitting_change(r: &GaugeSeries, e: &EStructure) -> Result<EStructure> {
    if !r.is_r_matrix() {
        return Err(Error::Invalid("splitting change needs R₀ = Id".into()));
    }
    frame_change(r, e)
}

/// `u²∇v = u² dv/du + (Σ A_i uⁱ) v` for a column (or block of columns) of series.
pub fn apply_connection(e: &EStructure, v: &MatrixSeries) -> Result<MatrixSeries> {
    if v.rows() != e.rank() {
        return Err(Error::DimensionMismatch("section size differs from rank".into()));
    }
    Ok(&v.u2_derivative() + &(e.series() * v))
}

/// Tensor with the rank-one structure `d/du + w/u²`: `A₀ ↦ A₀ + w·Id`.
pub fn twist(e: &EStructure, w: &Scalar) -> EStructure {
    let mut series = e.series.clone();
    let shifted = series.coeff(0) + &Matrix::scalar(e.rank(), w.clone());
    *series.coeff_mut(0) = shifted;
    let field = if w.is_real() { e.field } else { Field::Gaussian };
    EStructure {
        field,
        series,
        ..e.clone()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolarizationReport {
    pub extension: Extension,
    pub symmetric: bool,
    pub nondegenerate: bool,
    pub checked_to_order: usize,
    /// First order at which covariant constancy fails.
    pub first_failure: Option<usize>,
}

impl PolarizationReport {
    pub fn passed(&self) -> bool {
        self.symmetric && self.nondegenerate && self.first_failure.is_none()
    }
}

/// Order-by-order test of `(∇_{u∂u}a, b) + (a, ∇_{u∂u}b) = u∂u(a, b)` for a constant pairing `G`.
///
/// With the sesquilinear extension the `u∂u` terms cancel and the identity reads
/// `A_iᵀG = (−1)ⁱ G A_i`; with the u-linear extension it reads `A_iᵀG + G A_i = 0`.
pub fn check_polarization(e: &EStructure) -> Result<PolarizationReport> {
    let pol = e.polarization().ok_or(Error::MissingPolarization)?;
    let g = &pol.matrix;
    let first_failure = (0..=e.order()).find(|&i| {
        let a = e.coeff(i);
        let lhs = &a.transpose() * g;
        let rhs = g * a;
        match pol.extension {
            Extension::Sesquilinear if i % 2 == 0 => lhs != rhs,
            Extension::Sesquilinear => !(&lhs + &rhs).is_zero(),
            Extension::ULinear => !(&lhs + &rhs).is_zero(),
        }
    });
    Ok(PolarizationReport {
        extension: pol.extension,
        symmetric: pol.is_symmetric(),
        nondegenerate: pol.is_nondegenerate(),
        checked_to_order: e.order(),
        first_failure,
    })
}

/// The E-structure `∇_{∂u} = Gr/2u − ∇_E/u` over a point, where `Gr` is the fiber part of the
/// grading and `∇_E` acts on the fiber as `−u⁻¹·euler_action`. Result: `A₀ = euler_action`,
/// `A₁ = Gr/2`.
pub fn euler_te_extension(gr: &Matrix, euler_action: &Matrix, order: usize) -> Result<EStructure> {
    if gr.rows() != euler_action.rows() || !gr.is_square() || !euler_action.is_square() {
        return Err(Error::DimensionMismatch(
            "grading and Euler action must be square of equal size".into(),
        ));
    }
    let n = gr.rows();
    let mut series = MatrixSeries::zeros(n, n, order);
    *series.coeff_mut(0) = euler_action.clone();
    if order >= 1 {
        *series.coeff_mut(1) = gr.scale(&Scalar::frac(1, 2));
    }
    let field = if gr.is_real() && euler_action.is_real() {
        Field::Rational
    } else {
        Field::Gaussian
    };
    EStructure::new(field, series)
}

/// A splitting `s: Ẽ → E` written as the matrix series of its image frame; `S₀ = Id`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Splitting(MatrixSeries);

impl Splitting {
    pub fn new(series: MatrixSeries) -> Result<Self> {
        if *series.coeff(0) != Matrix::identity(series.rows()) {
            return Err(Error::Invalid(
                "a splitting must reduce to the identity at u = 0".into(),
            ));
        }
        Ok(Splitting(series))
    }

    /// The splitting `α ↦ α` of the constant frame.
    pub fn constant(rank: usize, order: usize) -> Self {
        Splitting(MatrixSeries::identity(rank, order))
    }

    pub fn series(&self) -> &MatrixSeries {
        &self.0
    }

    pub fn as_gauge(&self) -> GaugeSeries {
        GaugeSeries(self.0.clone())
    }

    /// Connection written in the frame `Φ_s`.
    pub fn connection(&self, e: &EStructure) -> Result<EStructure> {
        splitting_change(&self.as_gauge(), e)
    }
}

/// `R = Φ_{s₁}⁻¹ ∘ Φ_{s₂}`, so that `s₂(·) = Σ uⁱ s₁(R_i ·)`.
pub fn rmatrix_between_splittings(s1: &Splitting, s2: &Splitting, e: &EStructure) -> Result<GaugeSeries> {
    check_rank(s1.series(), e)?;
    check_rank(s2.series(), e)?;
    let r = &s1.series().invert()? * s2.series();
    GaugeSeries::r_matrix(r)
}

/// Whether `one` is the multiplicative identity on the shared orders.
pub fn is_identity_series(s: &MatrixSeries) -> bool {
    s.coeffs().iter().enumerate().all(|(k, m)| {
        if k == 0 {
            *m == Matrix::identity(m.rows())
        } else {
            m.is_zero()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank_one(a: Scalar, order: usize) -> EStructure {
        EStructure::new(
            Field::Rational,
            MatrixSeries::constant(Matrix::scalar(1, a), order),
        )
        .unwrap()
    }

    #[test]
    fn identity_and_scalar_gauges_do_nothing() {
        let e = EStructure::from_coeffs(
            Field::Rational,
            vec![
                Matrix::from_ints(&[&[1, 2], &[3, 4]]),
                Matrix::from_ints(&[&[0, 1], &[1, 0]]),
                Matrix::zeros(2, 2),
            ],
        )
        .unwrap();
        let id = GaugeSeries::identity(2, 2);
        assert!(gauge_transform(&id, &e).unwrap().agrees_with(&e));
        let c = GaugeSeries::new(MatrixSeries::constant(Matrix::scalar(2, Scalar::int(5)), 2)).unwrap();
        assert!(gauge_transform(&c, &e).unwrap().agrees_with(&e));
    }

    #[test]
    fn rank_one_gauge_expansion() {
        // A = a/u², P = 1 + uT: Ã = a/u² − T + uT² − u²T³ + …
        let (a, t) = (Scalar::int(3), Scalar::int(2));
        let e = rank_one(a.clone(), 5);
        let p = GaugeSeries::new(MatrixSeries::identity_plus(&Matrix::scalar(1, t.clone()), 1, 5)).unwrap();
        let out = gauge_transform(&p, &e).unwrap();
        assert_eq!(out.coeff(0)[(0, 0)], a);
        assert!(out.coeff(1).is_zero());
        for k in 2..=5 {
            // coefficient of u^{k-2} in the connection matrix is (−1)^{k+1} T^{k-1}
            let sign = if k % 2 == 0 { -1 } else { 1 };
            assert_eq!(out.coeff(k)[(0, 0)], t.pow(k as u32 - 1) * Scalar::int(sign));
        }
    }

    #[test]
    fn twist_round_trip_and_exponential() {
        let w = Scalar::frac(3, 7);
        let e = twist(&EStructure::trivial(1, 4), &w);
        assert!(e.agrees_with(&EStructure::exponential(w.clone(), 4)));
        assert!(twist(&e, &-&w).agrees_with(&EStructure::trivial(1, 4)));
    }

    #[test]
    fn apply_connection_on_exponential() {
        let w = Scalar::int(-4);
        let e = EStructure::exponential(w.clone(), 3);
        let one = MatrixSeries::constant(Matrix::identity(1), 3);
        let out = apply_connection(&e, &one).unwrap();
        assert_eq!(out, MatrixSeries::constant(Matrix::scalar(1, w), 3));
        let zero = EStructure::trivial(2, 3);
        let v = MatrixSeries::constant(Matrix::column(vec![Scalar::int(1), Scalar::int(2)]), 3);
        assert!(apply_connection(&zero, &v).unwrap().is_zero());
    }

    #[test]
    fn polarization_of_exponential_passes_and_u_linear_fails() {
        let e = EStructure::exponential(Scalar::int(2), 8);
        assert!(check_polarization(&e).unwrap().passed());
        let lin = e
            .clone()
            .with_polarization(Polarization::new(Matrix::identity(1), Extension::ULinear))
            .unwrap();
        assert_eq!(check_polarization(&lin).unwrap().first_failure, Some(0));
    }

    #[test]
    fn splittings_compose() {
        let s1 = Splitting::constant(2, 3);
        let e = EStructure::trivial(2, 3);
        let r = rmatrix_between_splittings(&s1, &s1, &e).unwrap();
        assert!(is_identity_series(r.series()));
    }
}
