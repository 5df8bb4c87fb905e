use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::pbw::Uq;
use crate::scalars::q_int;

fn q(n: i64) -> QScalar {
    QScalar::q_pow(n)
}

fn lq(n: u32, eps: i8) -> RepLabelQ {
    RepLabelQ::new(n, eps).unwrap()
}

fn lh(n: u32, k: i64, eps: i8) -> RepLabelHbar {
    RepLabelHbar::new(n, k, eps).unwrap()
}

fn rat(n: i64, d: i64) -> num_rational::BigRational {
    num_rational::BigRational::new(n.into(), d.into())
}

fn qdiag(xs: &[QScalar]) -> Matrix<QScalar> {
    Matrix::diagonal(xs)
}

#[test]
fn labels_reject_bad_eps() {
    assert!(RepLabelQ::new(1, 0).is_err());
    assert!(RepLabelHbar::new(1, 0, 2).is_err());
}

#[test]
fn trivial_module() {
    let r = build_rep_q(lq(0, 1)).unwrap();
    assert!(r.e.is_zero() && r.f.is_zero());
    assert_eq!(r.k, Matrix::identity(1));
}

#[test]
fn two_dimensional_module() {
    let r = build_rep_q(lq(1, 1)).unwrap();
    assert_eq!(r.k, qdiag(&[q(1), q(-1)]));
    assert_eq!(r.e.get(0, 1), &QScalar::one());
    assert_eq!(r.f.get(1, 0), &QScalar::one());
}

#[test]
fn negative_sign_module() {
    let r = build_rep_q(lq(2, -1)).unwrap();
    assert_eq!(r.k, qdiag(&[-&q(2), QScalar::integer(-1), -&q(-2)]));
    assert!(check_relations(&r, 0.0).unwrap().all_passed());
}

#[test]
fn relations_hold_for_small_modules() {
    for n in 0..=6 {
        for eps in [1, -1] {
            let r = build_rep_q(lq(n, eps)).unwrap();
            let rep = check_relations(&r, 0.0).unwrap();
            assert_eq!(rep.checks.len(), 3);
            assert!(rep.all_passed(), "n={n} eps={eps}");
        }
    }
}

#[test]
fn zeroed_e_breaks_the_bracket() {
    let mut r = build_rep_q(lq(1, 1)).unwrap();
    r.e = Matrix::zeros(2, 2);
    let rep = check_relations(&r, 0.0).unwrap();
    assert!(rep.checks[0].passed && rep.checks[1].passed);
    let c = &rep.checks[2];
    assert!(!c.passed);
    let kinv = r.k.inverse().unwrap();
    let expected = r.k.sub(&kinv).scale(&q_minus_qinv().inv().unwrap());
    assert_eq!(c.residual, MatrixJson::from(&expected));
    assert_eq!(expected, qdiag(&[QScalar::one(), QScalar::integer(-1)]));
}

#[test]
fn hbar_builders() {
    let r = build_rep_hbar(lh(0, 0, 1)).unwrap();
    assert_eq!(r.h.as_ref().unwrap().weights().unwrap(), vec![ExtendedWeight::zero()]);
    let r = build_rep_hbar(lh(1, 0, 1)).unwrap();
    assert_eq!(r.h.as_ref().unwrap().weights().unwrap(), vec![ExtendedWeight::integers(1, 0), ExtendedWeight::integers(-1, 0)]);
    let h = embed_matrix(&r.h.as_ref().unwrap().u, &QScalar::q()).unwrap();
    assert_eq!(h.commutator(&r.e), r.e.scale(&QScalar::integer(2)));

    let r = build_rep_hbar(lh(1, 1, -1)).unwrap();
    assert_eq!(r.h.as_ref().unwrap().weights().unwrap(), vec![ExtendedWeight::integers(1, 3), ExtendedWeight::integers(-1, 3)]);
    assert_eq!(r.exp_h().unwrap(), qdiag(&[-&q(1), -&q(-1)]));
}

#[test]
fn exp_h_matches_q_modules() {
    assert_eq!(build_rep_hbar(lh(1, 0, 1)).unwrap().exp_h().unwrap(), build_rep_q(lq(1, 1)).unwrap().k);
    for k in -3..=3 {
        assert_eq!(build_rep_hbar(lh(0, k, 1)).unwrap().exp_h().unwrap(), Matrix::identity(1));
    }
    assert_eq!(build_rep_hbar(lh(2, 0, -1)).unwrap().exp_h().unwrap(), build_rep_q(lq(2, -1)).unwrap().k);
    for n in 0..=5 {
        for k in -2..=2 {
            for eps in [1, -1] {
                let h = build_rep_hbar(lh(n, k, eps)).unwrap();
                let r = build_rep_q(lq(n, eps)).unwrap();
                assert_eq!(h.exp_h().unwrap(), r.k);
                assert_eq!((&h.e, &h.f), (&r.e, &r.f));
            }
        }
    }
}

#[test]
fn exp_h_rejects_fractional_and_offdiagonal() {
    let mut r = build_rep_hbar(lh(0, 0, 1)).unwrap();
    r.h = Some(HPart::diagonal(&[ExtendedWeight::new(rat(0, 1), rat(1, 2))]));
    assert!(matches!(r.exp_h(), Err(Error::NonIntegerWeight(_))));
    let r = build_rep_hbar(lh(1, 0, 1)).unwrap();
    let p = Matrix::from_rows(vec![vec![QScalar::one(), QScalar::one()], vec![QScalar::zero(), QScalar::one()]]);
    assert!(r.conjugate(&p).unwrap().exp_h().is_err());
}

#[test]
fn hbar_relations() {
    for (n, k, eps) in [(2, -1, 1), (3, 2, -1), (0, 5, -1), (4, 0, 1)] {
        let r = build_rep_hbar(lh(n, k, eps)).unwrap();
        let rep = check_relations(&r, 0.0).unwrap();
        assert!(rep.all_passed(), "{:?}", rep);
        assert_eq!(rep.checks.len(), 4);
    }
}

#[test]
fn hbar_relations_after_conjugation_and_numerically() {
    let r = build_rep_hbar(lh(2, -1, 1)).unwrap();
    let p = Matrix::from_rows(vec![
        vec![QScalar::integer(1), QScalar::integer(2), QScalar::zero()],
        vec![QScalar::zero(), QScalar::integer(1), QScalar::integer(-1)],
        vec![QScalar::integer(1), QScalar::zero(), QScalar::integer(1)],
    ]);
    let c = r.conjugate(&p).unwrap();
    assert!(check_relations(&c, 0.0).unwrap().all_passed());
    let num = r.specialize(NumericScalar::real(1.3)).unwrap();
    assert!(check_relations(&num, 1e-10).unwrap().all_passed());
}

#[test]
fn numeric_relations() {
    let r = build_rep_q_in(lq(4, -1), &NumericScalar::new(0.8, 0.3)).unwrap();
    assert!(check_relations(&r, 1e-10).unwrap().all_passed());
}

#[test]
fn commutant_of_simple_modules_is_one_dimensional() {
    for n in 0..=6 {
        for eps in [1, -1] {
            let r = build_rep_q(lq(n, eps)).unwrap();
            assert_eq!(commutant_dim(&r, 0.0).unwrap(), 1, "n={n} eps={eps}");
        }
    }
}

#[test]
fn commutant_of_sums() {
    let a = build_rep_q(lq(1, 1)).unwrap();
    let b = build_rep_q(lq(2, 1)).unwrap();
    assert_eq!(commutant_dim(&ModuleRep::direct_sum(&[&a, &a]).unwrap(), 0.0).unwrap(), 4);
    assert_eq!(commutant_dim(&ModuleRep::direct_sum(&[&a, &b]).unwrap(), 0.0).unwrap(), 2);
}

#[test]
fn casimir_values() {
    let t0 = build_rep_q(lq(0, 1)).unwrap();
    let expected = &(&q(1) + &q(-1)) / &q_minus_qinv().pow(2).unwrap();
    assert_eq!(casimir_action(&t0, 0.0).unwrap(), expected);
    for n in 0..=6 {
        for eps in [1, -1] {
            let label = lq(n, eps);
            let r = build_rep_q(label).unwrap();
            let m = schur::casimir_matrix(&r).unwrap();
            assert_eq!(casimir_action(&r, 0.0).unwrap(), m.get(0, 0).clone());
            assert_eq!(casimir_action(&r, 0.0).unwrap(), casimir_on_label(label));
        }
    }
}

#[test]
fn casimir_rejects_reducible() {
    let a = build_rep_q(lq(1, 1)).unwrap();
    let b = build_rep_q(lq(2, 1)).unwrap();
    let s = ModuleRep::direct_sum(&[&a, &b]).unwrap();
    assert!(matches!(casimir_action(&s, 0.0), Err(Error::NotIrreducible(_))));
    assert!(matches!(casimir_value(&s, 0.0), Err(Error::NotIrreducible(_))));
}

#[test]
fn decompose_round_trip() {
    assert_eq!(decompose(&build_rep_hbar(lh(3, 2, -1)).unwrap()).unwrap(), vec![lh(3, 2, -1)]);
    for n in 0..=5 {
        for k in -2..=2 {
            for eps in [1, -1] {
                let l = lh(n, k, eps);
                assert_eq!(decompose(&build_rep_hbar(l).unwrap()).unwrap(), vec![l]);
            }
        }
    }
}

#[test]
fn decompose_conjugated_sum() {
    let a = build_rep_hbar(lh(1, 0, 1)).unwrap();
    let b = build_rep_hbar(lh(2, -1, -1)).unwrap();
    let s = ModuleRep::direct_sum(&[&a, &b]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..3 {
        let p = random_invertible(5, &mut rng);
        let c = s.conjugate(&p).unwrap();
        assert!(!c.h.as_ref().unwrap().is_diagonal() || p.is_diagonal());
        let mut got = decompose(&c).unwrap();
        got.sort();
        assert_eq!(got, vec![lh(1, 0, 1), lh(2, -1, -1)]);
    }
}

#[test]
fn decompose_repeated_summands() {
    let a = build_rep_hbar(lh(1, 0, 1)).unwrap();
    let s = ModuleRep::direct_sum(&[&a, &a, &a]).unwrap();
    let p = random_invertible(6, &mut ChaCha8Rng::seed_from_u64(1));
    assert_eq!(decompose(&s.conjugate(&p).unwrap()).unwrap(), vec![lh(1, 0, 1); 3]);
}

#[test]
fn decompose_rejects_fractional_weight() {
    let mut r = build_rep_hbar(lh(0, 0, 1)).unwrap();
    r.h = Some(HPart::diagonal(&[ExtendedWeight::new(rat(1, 2), rat(0, 1))]));
    let err = decompose(&r).unwrap_err();
    assert!(matches!(err, Error::Decomposition(ref s) if s.contains("not of the form")), "{err}");
}

#[test]
fn decompose_rejects_non_split_module() {
    // a Jordan block in H is not diagonalizable
    let z = QScalar::zero;
    let r = ModuleRep {
        q: QScalar::q(),
        e: Matrix::zeros(2, 2),
        f: Matrix::zeros(2, 2),
        k: Matrix::identity(2),
        h: Some(HPart {
            u: Matrix::from_rows(vec![vec![z(), QScalar::one()], vec![z(), z()]]),
            v: Matrix::zeros(2, 2),
        }),
    };
    assert!(matches!(decompose(&r), Err(Error::Decomposition(_))));
}

#[test]
fn inequivalent_labels_have_no_intertwiners() {
    let labels: Vec<_> = (0..=3).flat_map(|n| (-1..=1).flat_map(move |k| [lh(n, k, 1), lh(n, k, -1)])).collect();
    let reps: Vec<_> = labels.iter().map(|&l| build_rep_hbar(l).unwrap()).collect();
    for (i, a) in reps.iter().enumerate() {
        for (j, b) in reps.iter().enumerate() {
            let d = intertwiner_dim(a, b, 0.0).unwrap();
            assert_eq!(d, usize::from(i == j), "{} vs {}", labels[i], labels[j]);
        }
    }
}

#[test]
fn raw_orbit_vectors_differ_from_quantum_integer_scaling() {
    // F^p applied to the top vector of T_(n,1) gives [p]! times the p-th
    // basis vector, so scaling by [p] alone does not reproduce the basis.
    let n = 3;
    let r = build_rep_q(lq(n, 1)).unwrap();
    let mut v = vec![QScalar::zero(); n as usize + 1];
    v[0] = QScalar::one();
    let mut fact = QScalar::one();
    for p in 1..=n as usize {
        v = r.f.mul_vec(&v);
        fact = &fact * &q_int(p as i64);
        let mut basis = vec![QScalar::zero(); n as usize + 1];
        basis[p] = fact.clone();
        assert_eq!(v, basis);
        if p >= 3 {
            assert_ne!(q_int(p as i64), fact);
        }
    }
}

#[test]
fn envelope_examples() {
    let uq = Uq::<QScalar>::symbolic();
    let blocks = envelope_eval(&uq.one(), 3).unwrap();
    let sizes: Vec<usize> = blocks.iter().map(|b| b.matrix.rows()).collect();
    assert_eq!(sizes, vec![1, 1, 2, 2, 3, 3, 4, 4]);
    assert!(blocks.iter().all(|b| b.matrix == Matrix::identity(b.matrix.rows())));

    for b in envelope_eval(&uq.k(), 3).unwrap() {
        assert_eq!(b.matrix, build_rep_q(b.label).unwrap().k);
    }
    let e4 = uq.e().pow(4).unwrap();
    assert!(envelope_eval(&e4, 3).unwrap().iter().all(|b| b.matrix.is_zero()));
}

fn small_element(uq: &Uq<QScalar>, terms: &[(u32, i64, u32, i64)]) -> crate::pbw::PbwElement<QScalar> {
    let mut acc = uq.zero();
    for &(f, k, e, c) in terms {
        acc = acc.add(&uq.mono(f, k, e).scale(&QScalar::integer(c))).unwrap();
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn envelope_is_multiplicative(
        x in proptest::collection::vec((0u32..3, -2i64..3, 0u32..3, -3i64..4), 1..3),
        y in proptest::collection::vec((0u32..3, -2i64..3, 0u32..3, -3i64..4), 1..3),
    ) {
        let uq = Uq::<QScalar>::symbolic();
        let a = small_element(&uq, &x);
        let b = small_element(&uq, &y);
        let ab = envelope_eval(&a.mul(&b).unwrap(), 3).unwrap();
        let ea = envelope_eval(&a, 3).unwrap();
        let eb = envelope_eval(&b, 3).unwrap();
        for ((p, l), r) in ab.iter().zip(&ea).zip(&eb) {
            prop_assert_eq!(&p.matrix, &l.matrix.mul(&r.matrix));
        }
    }

    #[test]
    fn decompose_invariant_under_conjugation(seed in 0u64..1000) {
        let a = build_rep_hbar(lh(0, 1, -1)).unwrap();
        let b = build_rep_hbar(lh(2, 0, 1)).unwrap();
        let s = ModuleRep::direct_sum(&[&a, &b]).unwrap();
        let p = random_invertible(4, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(decompose(&s.conjugate(&p).unwrap()).unwrap(), decompose(&s).unwrap());
    }
}

#[test]
fn separation_small_cases() {
    let r = separation_rank(0, 0).unwrap();
    assert_eq!((r.rank, r.monomials), (1, 1));
    let r1 = separation_rank(1, 2).unwrap();
    assert!(r1.rank <= r1.monomials);
    assert!(separation_rank(4, 1).is_err());
    assert!(separation_rank(1, 9).is_err());
}

#[test]
fn separation_profile_is_monotone() {
    let p = separation_profile(1, 4).unwrap();
    assert!(p.ranks.windows(2).all(|w| w[0] <= w[1]));
    assert!(p.confirmed);
}

#[test]
fn monomial_count() {
    assert_eq!(envelope::monomials_up_to(0).len(), 1);
    // r + s + |j| <= 1: 1, F, E, K, K^-1
    assert_eq!(envelope::monomials_up_to(1).len(), 5);
}
