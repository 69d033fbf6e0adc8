use proptest::prelude::*;
use tecalc::{Matrix, MatrixSeries, Scalar, TruncatedSeries};

fn rational() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=5).prop_map(|(p, q)| Scalar::frac(p, q))
}

fn gaussian() -> impl Strategy<Value = Scalar> {
    (rational(), rational()).prop_map(|(re, im)| Scalar::gaussian(re, im))
}

fn series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec(gaussian(), order + 1).prop_map(|c| TruncatedSeries::new(c).unwrap())
}

fn unit_series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
    (
        gaussian().prop_filter("unit", |c| *c != Scalar::int(0)),
        series(order),
    )
        .prop_map(|(c0, s)| {
            let mut coeffs = s.coeffs().to_vec();
            coeffs[0] = c0;
            TruncatedSeries::new(coeffs).unwrap()
        })
}

fn matrix(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(prop::collection::vec(rational(), n), n)
        .prop_map(|rows| Matrix::from_rows(rows).unwrap())
}

fn matrix_series(n: usize, order: usize) -> impl Strategy<Value = MatrixSeries> {
    prop::collection::vec(matrix(n), order + 1).prop_map(|c| MatrixSeries::new(c).unwrap())
}

/// Schoolbook convolution, written independently of the library product.
fn convolve(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let n = a.len().min(b.len());
    (0..n)
        .map(|k| (0..=k).fold(Scalar::int(0), |acc, i| &acc + &(&a[i] * &b[k - i])))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_truncated_convolution(a in series(5), b in series(3)) {
        let p = &a * &b;
        prop_assert_eq!(p.order(), 3);
        let expected = convolve(a.coeffs(), b.coeffs());
        prop_assert_eq!(p.coeffs(), expected.as_slice());
    }

    #[test]
    fn ring_axioms(a in series(4), b in series(4), c in series(4)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).coeffs().iter().all(|x| *x == Scalar::int(0)));
    }

    #[test]
    fn inverse_is_two_sided(a in unit_series(5)) {
        let inv = a.invert().unwrap();
        let one = TruncatedSeries::constant(Scalar::int(1), 5);
        prop_assert_eq!(&a * &inv, one.clone());
        prop_assert_eq!(&inv * &a, one);
    }

    #[test]
    fn derivative_is_a_derivation(a in series(5), b in series(5)) {
        let lhs = (&a * &b).derivative().unwrap();
        let rhs = &(&a.derivative().unwrap() * &b) + &(&a * &b.derivative().unwrap());
        prop_assert_eq!(lhs.order(), 4);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn matrix_series_ring_and_inverse(a in matrix_series(3, 3), b in matrix_series(3, 3), c in matrix_series(3, 3)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        if let Ok(inv) = a.invert() {
            prop_assert_eq!(&a * &inv, MatrixSeries::identity(3, 3));
            prop_assert_eq!(&inv * &a, MatrixSeries::identity(3, 3));
        } else {
            prop_assert_eq!(a.coeff(0).det(), Scalar::int(0));
        }
    }

    #[test]
    fn matrix_series_derivation(a in matrix_series(2, 4), b in matrix_series(2, 4)) {
        let lhs = (&a * &b).derivative().unwrap();
        let rhs = &(&a.derivative().unwrap() * &b) + &(&a * &b.derivative().unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn nilpotent_perturbation_inverts(t in matrix(3)) {
        // strictly upper triangular part of a random matrix
        let mut n = Matrix::zeros(3, 3);
        for i in 0..3 {
            for j in i + 1..3 {
                n[(i, j)] = t[(i, j)].clone();
            }
        }
        let p = MatrixSeries::identity_plus(&n, 1, 6);
        prop_assert_eq!(&p.invert().unwrap() * &p, MatrixSeries::identity(3, 6));
    }

    #[test]
    fn scalar_text_round_trip(x in gaussian()) {
        let text = x.to_string();
        prop_assert_eq!(text.parse::<Scalar>().unwrap(), x.clone());
        let json = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<Scalar>(&json).unwrap(), x);
    }

    #[test]
    fn field_operations_are_exact(x in gaussian(), y in gaussian()) {
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        if y != Scalar::int(0) {
            prop_assert_eq!(&(&x * &y) / &y, x);
        }
    }
}

#[test]
fn trivial_series_examples() {
    let p = &TruncatedSeries::from_ints(&[1, 1, 0, 0]) * &TruncatedSeries::from_ints(&[1, -1, 0, 0]);
    assert_eq!(p, TruncatedSeries::from_ints(&[1, 0, -1, 0]));
    let geo = TruncatedSeries::from_ints(&[1, -1, 0, 0]).invert().unwrap();
    assert_eq!(geo, TruncatedSeries::from_ints(&[1, 1, 1, 1]));
    assert_eq!(
        TruncatedSeries::from_ints(&[2]).invert().unwrap().coeff(0),
        &Scalar::frac(1, 2)
    );
    assert_eq!(
        TruncatedSeries::from_ints(&[0, 0, 1]).derivative().unwrap(),
        TruncatedSeries::from_ints(&[0, 2])
    );
    assert!(TruncatedSeries::from_ints(&[0, 1]).invert().is_err());
}

#[test]
fn scalar_canonical_forms() {
    assert_eq!("2/4".parse::<Scalar>().unwrap().to_string(), "1/2");
    assert_eq!(
        "-3/-6".parse::<Scalar>().map(|s| s.to_string()).ok(),
        Some("1/2".into())
    );
    let z = "3/2+1/4*i".parse::<Scalar>().unwrap();
    assert_eq!(z.to_string(), "3/2+1/4*i");
    assert_eq!(z, Scalar::gaussian(Scalar::frac(3, 2), Scalar::frac(1, 4)));
    assert_eq!(&Scalar::i() * &Scalar::i(), Scalar::int(-1));
    assert_eq!("1/0".parse::<Scalar>().unwrap_err().kind(), "ParseError");
}
