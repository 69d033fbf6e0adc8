//! Univariate polynomials over exact scalars with rational and Gaussian-rational root search.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Largest Gaussian-integer radius scanned before the search gives up.
const GAUSSIAN_SEARCH_RADIUS: i64 = 4096;

/// Coefficients in ascending order, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| &(&acc * x) + c)
    }

    /// Quotient by `(x − r)`; the remainder is discarded, callers check `eval(r) == 0` first.
    pub fn deflate(&self, r: &Scalar) -> Poly {
        let n = self.coeffs.len();
        if n <= 1 {
            return Poly::new(vec![]);
        }
        let mut q = vec![Scalar::zero(); n - 1];
        let mut carry = Scalar::zero();
        for k in (1..n).rev() {
            carry = &self.coeffs[k] + &(&carry * r);
            q[k - 1] = carry.clone();
        }
        Poly::new(q)
    }

    /// All roots in `field` with multiplicities, sorted; errors if the polynomial does not split.
    pub fn roots(&self, field: Field) -> Result<Vec<(Scalar, usize)>> {
        let mut rest = self.clone();
        let mut found: Vec<Scalar> = Vec::new();
        while rest.degree().is_some_and(|d| d > 0) && rest.coeffs[0].is_zero() {
            found.push(Scalar::zero());
            rest = Poly::new(rest.coeffs[1..].to_vec());
        }
        if rest.coeffs.iter().all(Scalar::is_real) {
            for r in rational_candidates(&rest) {
                while rest.degree().is_some_and(|d| d > 0) && rest.eval(&r).is_zero() {
                    rest = rest.deflate(&r);
                    found.push(r.clone());
                }
            }
        }
        if field == Field::Gaussian && rest.degree().is_some_and(|d| d > 0) {
            for r in gaussian_candidates(&rest)? {
                while rest.degree().is_some_and(|d| d > 0) && rest.eval(&r).is_zero() {
                    rest = rest.deflate(&r);
                    found.push(r.clone());
                }
            }
        }
        if rest.degree().is_some_and(|d| d > 0) {
            return Err(Error::IrrationalSpectrum {
                field: field.name().to_string(),
                detail: format!("unsplit factor of degree {}", rest.degree().unwrap_or(0)),
            });
        }
        if let Some(bad) = found.iter().find(|r| !field.contains(r)) {
            return Err(Error::FieldViolation(format!(
                "root {bad} outside {}",
                field.name()
            )));
        }
        found.sort();
        let mut grouped: Vec<(Scalar, usize)> = Vec::new();
        for r in found {
            match grouped.last_mut() {
                Some((last, m)) if *last == r => *m += 1,
                _ => grouped.push((r, 1)),
            }
        }
        Ok(grouped)
    }
}

fn lcm_of_denominators<'a>(xs: impl Iterator<Item = &'a BigRational>) -> BigInt {
    xs.fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Rational root theorem candidates for a real polynomial with nonzero constant term.
fn rational_candidates(p: &Poly) -> Vec<Scalar> {
    let Some(deg) = p.degree() else { return vec![] };
    if deg == 0 {
        return vec![];
    }
    let scale = lcm_of_denominators(p.coeffs.iter().map(Scalar::re));
    let ints: Vec<BigInt> = p
        .coeffs
        .iter()
        .map(|c| (c.re() * BigRational::from_integer(scale.clone())).to_integer())
        .collect();
    let mut out = Vec::new();
    for num in positive_divisors(&ints[0]) {
        for den in positive_divisors(&ints[deg]) {
            let r = BigRational::new(num.clone(), den.clone());
            out.push(Scalar::real(r.clone()));
            out.push(Scalar::real(-r));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Gaussian-integer scan after the substitution `y = lead·x`, which makes the polynomial monic
/// with Gaussian-integer coefficients, so every root in ℚ(i) becomes a Gaussian integer.
fn gaussian_candidates(p: &Poly) -> Result<Vec<Scalar>> {
    let deg = p.degree().unwrap_or(0);
    let scale = lcm_of_denominators(p.coeffs.iter().flat_map(|c| [c.re(), c.im()]));
    let scale = Scalar::real(BigRational::from_integer(scale));
    let c: Vec<Scalar> = p.coeffs.iter().map(|x| x * &scale).collect();
    let lead = c[deg].clone();
    // monic coefficients b_k = c_k · lead^(deg−1−k)
    let b: Vec<Scalar> = (0..deg)
        .map(|k| &c[k] * &lead.pow((deg - 1 - k) as u32))
        .collect();
    let bound = b
        .iter()
        .map(|x| x.norm_sq().to_integer().sqrt() + BigInt::one())
        .max()
        .unwrap_or_else(BigInt::one)
        + BigInt::one();
    let radius = bound
        .to_i64()
        .filter(|&r| r <= GAUSSIAN_SEARCH_RADIUS)
        .ok_or_else(|| Error::IrrationalSpectrum {
            field: Field::Gaussian.name().into(),
            detail: "Gaussian root search radius exceeded".into(),
        })?;
    let const_norm = b[0].norm_sq().to_integer();
    let monic = Poly::new(b.into_iter().chain(std::iter::once(Scalar::one())).collect());
    let lead_inv = lead.inv()?;
    let mut out = Vec::new();
    for re in -radius..=radius {
        for im in -radius..=radius {
            let n = re * re + im * im;
            if n > radius * radius || im == 0 {
                continue;
            }
            if !const_norm.is_zero() && !(&const_norm % BigInt::from(n)).is_zero() {
                continue;
            }
            let z = Scalar::gaussian(Scalar::int(re), Scalar::int(im));
            if monic.eval(&z).is_zero() {
                out.push(&z * &lead_inv);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(xs: &[i64]) -> Poly {
        Poly::new(xs.iter().map(|&x| Scalar::int(x)).collect())
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        // (x-2)^2 (x+1/2) x = x^4 - 7/2 x^3 + 2 x^2 + 2 x, scaled by 2
        let p = poly(&[0, 4, 4, -7, 2]);
        let roots = p.roots(Field::Rational).unwrap();
        assert_eq!(
            roots,
            vec![(Scalar::frac(-1, 2), 1), (Scalar::zero(), 1), (Scalar::int(2), 2)]
        );
    }

    #[test]
    fn irrational_is_rejected() {
        let err = poly(&[-2, 0, 1]).roots(Field::Gaussian).unwrap_err();
        assert_eq!(err.kind(), "IrrationalSpectrum");
    }

    #[test]
    fn gaussian_roots_only_in_gaussian_field() {
        let p = poly(&[1, 0, 4]); // roots ±i/2
        assert_eq!(p.roots(Field::Rational).unwrap_err().kind(), "IrrationalSpectrum");
        let roots = p.roots(Field::Gaussian).unwrap();
        assert_eq!(roots.len(), 2);
        for (r, m) in roots {
            assert_eq!(m, 1);
            assert!(p.eval(&r).is_zero());
        }
    }
}
