//! Exact coefficient arithmetic: rational functions in `q`, quantum integers,
//! extended weights and numeric specialization.

mod field;
mod numeric;
mod poly;
mod qscalar;
mod weight;

pub use field::Field;
pub use numeric::{NumericScalar, DEFAULT_TOLERANCE};
pub use poly::QPoly;
pub use qscalar::{q_minus_qinv, QScalar, POLE_TOLERANCE};
pub use weight::ExtendedWeight;


use crate::error::{Error, Result};

/// The quantum integer `[n]_q = (q^n - q^-n) / (q - q^-1)`.
pub fn q_int(n: i64) -> QScalar {
    let num = &QScalar::q_pow(n) - &QScalar::q_pow(-n);
    &num / &q_minus_qinv()
}

/// `[n]_{q,lam} = (q^n lam^-1 - q^-n lam) / (q - q^-1)`.
pub fn q_int_lambda(n: i64, lam: &QScalar) -> Result<QScalar> {
    let inv = lam.inv().ok_or_else(|| Error::Domain("lambda must be nonzero".into()))?;
    let num = &(&QScalar::q_pow(n) * &inv) - &(&QScalar::q_pow(-n) * lam);
    Ok(&num / &q_minus_qinv())
}

/// Same as [`q_int_lambda`] but over any field, given a concrete `q`.
pub fn q_int_lambda_in<C: Field>(n: i64, lam: &C, q: &C) -> Result<C> {
    let lam_inv = lam.inverse().ok_or_else(|| Error::Domain("lambda must be nonzero".into()))?;
    let qn = q.powi(n).ok_or_else(|| Error::Domain("q must be nonzero".into()))?;
    let qmn = q.powi(-n).ok_or_else(|| Error::Domain("q must be nonzero".into()))?;
    let denom = q.minus(&q.inverse().expect("q nonzero"));
    let num = qn.times(&lam_inv).minus(&qmn.times(lam));
    num.divide(&denom).ok_or_else(|| Error::Domain("q^2 = 1 is excluded".into()))
}

/// `[n]_q` over any field, given a concrete `q`.
pub fn q_int_in<C: Field>(n: i64, q: &C) -> Result<C> {
    q_int_lambda_in(n, &C::one(), q)
}

/// Evaluates a symbolic scalar at a numeric `q`.
pub fn specialize(x: &QScalar, qval: NumericScalar) -> Result<NumericScalar> {
    x.specialize(qval)
}

/// Rejects `q` values outside the standing assumption `q != 0`, `q^2 != 1`.
pub fn check_q_admissible(qval: NumericScalar, tol: f64) -> Result<()> {
    let z = qval.value();
    if z.norm() <= tol || (z * z - 1.0).norm() <= tol {
        return Err(Error::Domain(format!("q = {qval} violates q != 0, q^2 != 1")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use num_rational::BigRational;
    use num_traits::One;
    use proptest::prelude::*;

    use super::*;

    fn laurent(terms: &[(i64, i64)]) -> QScalar {
        let map: BTreeMap<i64, BigRational> =
            terms.iter().map(|&(j, c)| (j, BigRational::from_integer(c.into()))).collect();
        QScalar::from_laurent(&map)
    }

    #[test]
    fn q_int_examples() {
        assert_eq!(q_int(1), QScalar::integer(1));
        assert_eq!(q_int(2), laurent(&[(1, 1), (-1, 1)]));
        // [-3]_q = -(q^2 + 1 + q^-2) by direct substitution into the fraction
        assert_eq!(q_int(-3), laurent(&[(2, -1), (0, -1), (-2, -1)]));
        assert_eq!(q_int(0), QScalar::integer(0));
    }

    #[test]
    fn q_int_lambda_examples() {
        let q2 = QScalar::q_pow(2);
        assert!(q_int_lambda(2, &q2).unwrap().is_zero());
        assert_eq!(q_int_lambda(1, &QScalar::integer(1)).unwrap(), QScalar::integer(1));
        let oracle = &(&QScalar::q_pow(-2) - &QScalar::q_pow(2)) / &q_minus_qinv();
        assert_eq!(q_int_lambda(1, &QScalar::q_pow(3)).unwrap(), oracle);
        assert!(matches!(q_int_lambda(1, &QScalar::integer(0)), Err(Error::Domain(_))));
    }

    #[test]
    fn specialize_examples() {
        let v = specialize(&q_int(2), NumericScalar::real(2.0)).unwrap();
        assert!((v.value().re - 2.5).abs() < 1e-15 && v.value().im == 0.0);
        let one = specialize(&QScalar::integer(1), NumericScalar::new(0.3, 7.0)).unwrap();
        assert_eq!(one, NumericScalar::real(1.0));
        let pole = q_minus_qinv().inv().unwrap();
        assert!(matches!(specialize(&pole, NumericScalar::real(1.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn canonical_form_is_monic_and_reduced() {
        // (2q^2 - 2) / (4q - 4) = (q + 1)/2
        let x = QScalar::new(QPoly::from_i64s(&[-2, 0, 2]), QPoly::from_i64s(&[-4, 4]));
        assert_eq!(x.denom(), &QPoly::one());
        assert_eq!(x.numer(), &QPoly::from_coeffs(vec![BigRational::new(1.into(), 2.into()); 2]));
        assert!(x.denom().leading().unwrap().is_one());
    }

    #[test]
    fn display_parse_roundtrip() {
        let x = &q_int(3) / &(&QScalar::q() - &QScalar::integer(2));
        let s = x.to_string();
        assert_eq!(s.parse::<QScalar>().unwrap(), x);
    }

    fn small_poly() -> impl Strategy<Value = QPoly> {
        prop::collection::vec(-5i64..=5, 1..=7).prop_map(|cs| QPoly::from_i64s(&cs))
    }

    fn small_scalar() -> impl Strategy<Value = QScalar> {
        (small_poly(), small_poly()).prop_filter_map("nonzero denominator", |(n, d)| {
            if d.is_zero() {
                None
            } else {
                Some(QScalar::new(n, d))
            }
        })
    }

    proptest! {
        #[test]
        fn q_int_is_odd(n in -40i64..40) {
            prop_assert_eq!(q_int(-n), -q_int(n));
        }

        #[test]
        fn q_int_matches_laurent_sum(n in 1i64..30) {
            let terms: Vec<(i64, i64)> = (0..n).map(|i| (n - 1 - 2 * i, 1)).collect();
            prop_assert_eq!(q_int(n), laurent(&terms));
        }

        #[test]
        fn equality_agrees_with_cross_multiplication(a in small_scalar(), b in small_scalar()) {
            let cross = &(a.numer() * b.denom()) - &(b.numer() * a.denom());
            prop_assert_eq!(a == b, cross.is_zero());
        }

        #[test]
        fn specialize_is_multiplicative(a in small_scalar(), b in small_scalar(),
                                        re in 0.3f64..2.0, im in -1.5f64..1.5) {
            let z = NumericScalar::new(re, im);
            let (Ok(x), Ok(y), Ok(xy)) = (a.specialize(z), b.specialize(z), (&a * &b).specialize(z)) else {
                return Ok(());
            };
            let expect = x.value() * y.value();
            let err = (xy.value() - expect).norm();
            prop_assert!(err <= 1e-10 * expect.norm().max(1e-300) || err < 1e-13, "err {}", err);
        }

        #[test]
        fn weight_exp_is_a_homomorphism(u1 in -6i64..6, v1 in -6i64..6, u2 in -6i64..6, v2 in -6i64..6) {
            let a = ExtendedWeight::integers(u1, v1);
            let b = ExtendedWeight::integers(u2, v2);
            let lhs = (&a + &b).exp_hbar().unwrap();
            let rhs = &a.exp_hbar().unwrap() * &b.exp_hbar().unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
