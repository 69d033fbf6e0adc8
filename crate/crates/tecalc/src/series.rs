//! Truncated power series in one even variable `u`, scalar and matrix valued.
//!
//! Invariants:
//! - a series of order `N` stores exactly `N + 1` coefficients `c₀ … c_N`;
//! - binary operations return the minimum of the operand orders and never pad;
//! - the derivative of an order-`N` series has order `N − 1`.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Scalar>,
}

impl TruncatedSeries {
    /// Coefficients `c₀ … c_N`; the order is `coeffs.len() − 1`.
    pub fn new(coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Invalid("a series needs at least one coefficient".into()));
        }
        Ok(TruncatedSeries { coeffs })
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        Self::new(xs.iter().map(|&x| Scalar::int(x)).collect()).expect("nonempty literal")
    }

    pub fn constant(c: Scalar, order: usize) -> Self {
        let mut coeffs = vec![Scalar::zero(); order + 1];
        coeffs[0] = c;
        TruncatedSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Scalar {
        &self.coeffs[k]
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "truncate cannot raise precision");
        TruncatedSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn invert(&self) -> Result<Self> {
        let inv0 = self.coeffs[0].inv().map_err(|_| Error::NotAUnit)?;
        let n = self.order();
        let mut out: Vec<Scalar> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let s: Scalar = (1..=k).map(|j| &self.coeffs[j] * &out[k - j]).sum();
            out.push(-(&s * &inv0));
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// Termwise derivative; fails on an order-0 series whose derivative carries no information.
    pub fn derivative(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::OrderTooLow {
                needed: 1,
                available: 0,
            });
        }
        Ok(TruncatedSeries {
            coeffs: (1..=self.order())
                .map(|k| &self.coeffs[k] * &Scalar::int(k as i64))
                .collect(),
        })
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        TruncatedSeries {
            coeffs: (0..=n).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect(),
        }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        TruncatedSeries {
            coeffs: (0..=n).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect(),
        }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|x| -x).collect(),
        }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        TruncatedSeries {
            coeffs: (0..=n)
                .map(|k| (0..=k).map(|j| &self.coeffs[j] * &rhs.coeffs[k - j]).sum())
                .collect(),
        }
    }
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coeffs = Vec::<Scalar>::deserialize(deserializer)?;
        TruncatedSeries::new(coeffs).map_err(serde::de::Error::custom)
    }
}

/// Matrix-valued truncated series `M₀ + M₁u + … + M_N u^N`. Column vectors are `r×1` series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixSeries {
    rows: usize,
    cols: usize,
    coeffs: Vec<Matrix>,
}

impl MatrixSeries {
    pub fn new(coeffs: Vec<Matrix>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::Invalid("a series needs at least one coefficient".into()))?;
        let (rows, cols) = (first.rows(), first.cols());
        if coeffs.iter().any(|m| m.rows() != rows || m.cols() != cols) {
            return Err(Error::DimensionMismatch(
                "series coefficients differ in shape".into(),
            ));
        }
        Ok(MatrixSeries { rows, cols, coeffs })
    }

    pub fn zeros(rows: usize, cols: usize, order: usize) -> Self {
        MatrixSeries {
            rows,
            cols,
            coeffs: vec![Matrix::zeros(rows, cols); order + 1],
        }
    }

    pub fn identity(n: usize, order: usize) -> Self {
        Self::constant(Matrix::identity(n), order)
    }

    /// Constant series known to the given order.
    pub fn constant(m: Matrix, order: usize) -> Self {
        let mut s = Self::zeros(m.rows(), m.cols(), order);
        s.coeffs[0] = m;
        s
    }

    /// `Id + u^k T`, known to the given order.
    pub fn identity_plus(t: &Matrix, k: usize, order: usize) -> Self {
        let mut s = Self::identity(t.rows(), order);
        if k <= order {
            s.coeffs[k] = &s.coeffs[k] + t;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn coeffs(&self) -> &[Matrix] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Matrix {
        &self.coeffs[k]
    }

    pub fn coeff_mut(&mut self, k: usize) -> &mut Matrix {
        &mut self.coeffs[k]
    }

    pub fn into_coeffs(self) -> Vec<Matrix> {
        self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "truncate cannot raise precision");
        MatrixSeries {
            rows: self.rows,
            cols: self.cols,
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|m| m[(i, j)].clone()).collect(),
        }
    }

    pub fn column(&self, j: usize) -> MatrixSeries {
        MatrixSeries {
            rows: self.rows,
            cols: 1,
            coeffs: self
                .coeffs
                .iter()
                .map(|m| m.submatrix(0..m.rows(), j..j + 1))
                .collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&Matrix) -> Matrix) -> Self {
        MatrixSeries::new(self.coeffs.iter().map(f).collect()).expect("shape-preserving map")
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.map(|m| m.scale(c))
    }

    pub fn transpose(&self) -> Self {
        self.map(Matrix::transpose)
    }

    /// `u ↦ −u`.
    pub fn reflect(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, m)| if k % 2 == 1 { -m } else { m.clone() })
            .collect();
        MatrixSeries {
            rows: self.rows,
            cols: self.cols,
            coeffs,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Matrix::is_zero)
    }

    pub fn invert(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse of a non-square series".into()));
        }
        let inv0 = self.coeffs[0].inverse().map_err(|_| Error::NotAUnit)?;
        let mut out = vec![inv0.clone()];
        for k in 1..=self.order() {
            let mut s = Matrix::zeros(self.rows, self.cols);
            for j in 1..=k {
                s = &s + &(&self.coeffs[j] * &out[k - j]);
            }
            out.push(-&(&inv0 * &s));
        }
        Ok(MatrixSeries {
            rows: self.rows,
            cols: self.cols,
            coeffs: out,
        })
    }

    pub fn derivative(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::OrderTooLow {
                needed: 1,
                available: 0,
            });
        }
        let coeffs = (1..=self.order())
            .map(|k| self.coeffs[k].scale(&Scalar::int(k as i64)))
            .collect();
        Ok(MatrixSeries {
            rows: self.rows,
            cols: self.cols,
            coeffs,
        })
    }

    /// `u² · d/du` of an order-`N` series, which is known to order `N + 1`.
    pub fn u2_derivative(&self) -> Self {
        let n = self.order();
        let coeffs = (0..=n + 1)
            .map(|k| {
                if k < 2 {
                    Matrix::zeros(self.rows, self.cols)
                } else {
                    self.coeffs[k - 1].scale(&Scalar::int(k as i64 - 1))
                }
            })
            .collect();
        MatrixSeries {
            rows: self.rows,
            cols: self.cols,
            coeffs,
        }
    }

    /// `u · d/du`, same order.
    pub fn euler_derivative(&self) -> Self {
        self.map_indexed(|k, m| m.scale(&Scalar::int(k as i64)))
    }

    fn map_indexed(&self, f: impl Fn(usize, &Matrix) -> Matrix) -> Self {
        let coeffs = self.coeffs.iter().enumerate().map(|(k, m)| f(k, m)).collect();
        MatrixSeries {
            rows: self.rows,
            cols: self.cols,
            coeffs,
        }
    }

    /// Multiply by `u^k`; the order rises by `k` since the low coefficients are exact zeros.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![Matrix::zeros(self.rows, self.cols); k];
        coeffs.extend(self.coeffs.iter().cloned());
        MatrixSeries {
            rows: self.rows,
            cols: self.cols,
            coeffs,
        }
    }

    pub fn left_mul(&self, m: &Matrix) -> Self {
        MatrixSeries::new(self.coeffs.iter().map(|c| m * c).collect()).expect("consistent shapes")
    }

    pub fn right_mul(&self, m: &Matrix) -> Self {
        MatrixSeries::new(self.coeffs.iter().map(|c| c * m).collect()).expect("consistent shapes")
    }

    /// Equality on the shared orders.
    pub fn agrees_with(&self, other: &MatrixSeries) -> bool {
        let n = self.order().min(other.order());
        (0..=n).all(|k| self.coeffs[k] == other.coeffs[k])
    }
}

impl Add for &MatrixSeries {
    type Output = MatrixSeries;
    fn add(self, rhs: &MatrixSeries) -> MatrixSeries {
        let n = self.order().min(rhs.order());
        MatrixSeries::new((0..=n).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect()).expect("shape")
    }
}

impl Sub for &MatrixSeries {
    type Output = MatrixSeries;
    fn sub(self, rhs: &MatrixSeries) -> MatrixSeries {
        let n = self.order().min(rhs.order());
        MatrixSeries::new((0..=n).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect()).expect("shape")
    }
}

impl Neg for &MatrixSeries {
    type Output = MatrixSeries;
    fn neg(self) -> MatrixSeries {
        self.map(|m| -m)
    }
}

impl Mul for &MatrixSeries {
    type Output = MatrixSeries;
    fn mul(self, rhs: &MatrixSeries) -> MatrixSeries {
        assert_eq!(self.cols, rhs.rows, "series mul shape");
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n)
            .map(|k| {
                let mut acc = Matrix::zeros(self.rows, rhs.cols);
                for j in 0..=k {
                    if self.coeffs[j].is_zero() || rhs.coeffs[k - j].is_zero() {
                        continue;
                    }
                    acc = &acc + &(&self.coeffs[j] * &rhs.coeffs[k - j]);
                }
                acc
            })
            .collect();
        MatrixSeries {
            rows: self.rows,
            cols: rhs.cols,
            coeffs,
        }
    }
}

impl Serialize for MatrixSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MatrixSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coeffs = Vec::<Matrix>::deserialize(deserializer)?;
        MatrixSeries::new(coeffs).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_of_one_plus_and_minus_u() {
        let a = TruncatedSeries::from_ints(&[1, 1, 0, 0]);
        let b = TruncatedSeries::from_ints(&[1, -1, 0, 0]);
        assert_eq!(&a * &b, TruncatedSeries::from_ints(&[1, 0, -1, 0]));
    }

    #[test]
    fn geometric_inverse() {
        let a = TruncatedSeries::from_ints(&[1, -1, 0, 0]);
        assert_eq!(a.invert().unwrap(), TruncatedSeries::from_ints(&[1, 1, 1, 1]));
        let two = TruncatedSeries::from_ints(&[2]);
        assert_eq!(two.invert().unwrap().coeff(0), &Scalar::frac(1, 2));
        assert_eq!(
            TruncatedSeries::from_ints(&[0, 1]).invert().unwrap_err(),
            Error::NotAUnit
        );
    }

    #[test]
    fn derivative_lowers_order() {
        let u2 = TruncatedSeries::from_ints(&[0, 0, 1]);
        assert_eq!(u2.derivative().unwrap(), TruncatedSeries::from_ints(&[0, 2]));
        let c = TruncatedSeries::from_ints(&[5, 0, 0]);
        assert_eq!(c.derivative().unwrap(), TruncatedSeries::from_ints(&[0, 0]));
    }

    #[test]
    fn mixed_orders_truncate_to_minimum() {
        let a = TruncatedSeries::from_ints(&[1, 2, 3, 4]);
        let b = TruncatedSeries::from_ints(&[1, 1]);
        assert_eq!((&a * &b).order(), 1);
        assert_eq!((&a + &b).order(), 1);
    }

    #[test]
    fn matrix_series_inverse() {
        let t = Matrix::from_ints(&[&[0, 1], &[0, 0]]);
        let p = MatrixSeries::identity_plus(&t, 1, 4);
        let q = p.invert().unwrap();
        assert_eq!(&p * &q, MatrixSeries::identity(2, 4));
        assert_eq!(&q * &p, MatrixSeries::identity(2, 4));
    }
}
