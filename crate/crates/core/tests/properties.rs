use fliessnet::selftest::{random_lie_polynomial, random_polynomial};
use fliessnet::series::shuffle_words;
use fliessnet::{
    build_cascade, compose_single, exp_truncated, is_group_like, is_primitive_ree, lie_derivative,
    log_truncated, Alphabet, Coefficient, FieldTerm, FormalRepresentation, GroupElement,
    NetworkKind, NetworkSpec, Series, StateField, TensorFunctional, TensorTerm, WeightMatrix, Word,
};
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CAP: usize = 6;

fn ab(m: usize) -> Alphabet {
    Alphabet::new(m).unwrap()
}

fn q(n: i64, d: i64) -> Coefficient {
    Coefficient::new(n.into(), d.into())
}

fn word(max_letter: u8, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..=max_letter, 0..=max_len).prop_map(Word::new)
}

fn series(m: usize, max_len: usize) -> impl Strategy<Value = Series> {
    prop::collection::vec((word(m as u8, max_len), -5i64..=5, 1i64..=3), 0..6).prop_map(
        move |terms| {
            Series::from_terms(ab(m), CAP, terms.into_iter().map(|(w, n, d)| (w, q(n, d)))).unwrap()
        },
    )
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn binomial(n: u64, k: u64) -> u64 {
    (1..=k).fold(1, |acc, i| acc * (n - k + i) / i)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn shuffle_is_commutative_and_associative(a in series(2, 2), b in series(2, 2), c in series(2, 2)) {
        prop_assert_eq!(a.shuffle(&b).unwrap(), b.shuffle(&a).unwrap());
        let left = a.shuffle(&b).unwrap().shuffle(&c).unwrap();
        let right = a.shuffle(&b.shuffle(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn shuffle_mass_is_binomial(u in word(2, 4), v in word(2, 4)) {
        let mass: u64 = shuffle_words(&u, &v).iter().map(|(_, k)| k).sum();
        prop_assert_eq!(mass, binomial((u.len() + v.len()) as u64, u.len() as u64));
    }

    #[test]
    fn letter_shift_is_a_shuffle_derivation(a in series(2, 3), b in series(2, 3), i in 0usize..=2) {
        let lhs = a.shuffle(&b).unwrap().left_shift_letter(i).unwrap();
        let rhs = a.left_shift_letter(i).unwrap().shuffle(&b).unwrap()
            .add(&a.shuffle(&b.left_shift_letter(i).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn shift_is_adjoint_to_concatenation(c in series(2, 4), d in series(2, 4), i in 0usize..=2) {
        let x = Series::letter(ab(2), CAP, i).unwrap();
        let lhs = c.left_shift_letter(i).unwrap().scalar_product(&d).unwrap();
        let rhs = c.scalar_product(&x.concat(&d).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn concatenation_is_associative(a in series(1, 2), b in series(1, 2), c in series(1, 2)) {
        let left = a.concat(&b).unwrap().concat(&c).unwrap();
        let right = a.concat(&b.concat(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn exp_and_log_are_inverse(seed in any::<u64>()) {
        let p = random_lie_polynomial(&mut rng(seed), ab(2), 3, 5);
        let z = exp_truncated(&p, 5).unwrap();
        prop_assert!(is_group_like(z.series(), 5));
        prop_assert_eq!(log_truncated(z.series(), 5).unwrap(), p.truncate(5));
    }

    #[test]
    fn brackets_are_primitive(seed in any::<u64>()) {
        prop_assert!(is_primitive_ree(&random_lie_polynomial(&mut rng(seed), ab(2), 4, 5), 5));
    }

    #[test]
    fn products_of_exponentials_are_group_like(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = exp_truncated(&random_lie_polynomial(&mut r, ab(1), 3, 5), 5).unwrap();
        let h = exp_truncated(&random_lie_polynomial(&mut r, ab(1), 3, 5), 5).unwrap();
        prop_assert!(is_group_like(g.mul(&h).unwrap().series(), 5));
    }

    #[test]
    fn functionals_are_characters_at_group_like_points(seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = ab(1);
        let functional = |r: &mut ChaCha8Rng| {
            let slots = (0..2).map(|_| random_polynomial(r, x, &[0, 1], 2, 4)).collect();
            TensorFunctional::from_terms(x, 2, vec![TensorTerm::new(slots, q(1, 1))]).unwrap()
        };
        let a = functional(&mut r);
        let b = functional(&mut r);
        let z: Vec<GroupElement> = (0..2)
            .map(|_| exp_truncated(&random_lie_polynomial(&mut r, x, 2, 4), 4).unwrap())
            .collect();
        let product = a.shuffle(&b).unwrap().evaluate_grouplike(&z).unwrap();
        prop_assert_eq!(product, a.evaluate_grouplike(&z).unwrap() * b.evaluate_grouplike(&z).unwrap());
    }

    #[test]
    fn lie_derivative_is_a_derivation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = ab(1);
        let slot = |r: &mut ChaCha8Rng| -> Vec<FieldTerm> {
            let shift = random_lie_polynomial(r, x, 2, 5);
            let coeff = TensorFunctional::constant(x, 2, 5, Coefficient::from_integer(3.into()));
            FieldTerm::new(shift, coeff).into_iter().collect()
        };
        let field = StateField::new(vec![slot(&mut r), slot(&mut r)]).unwrap();
        let functional = |r: &mut ChaCha8Rng| {
            let slots = (0..2).map(|_| random_polynomial(r, x, &[0, 1], 2, 5)).collect();
            TensorFunctional::from_terms(x, 2, vec![TensorTerm::new(slots, q(1, 1))]).unwrap()
        };
        let c = functional(&mut r);
        let d = functional(&mut r);
        let z: Vec<GroupElement> = (0..2)
            .map(|_| exp_truncated(&random_lie_polynomial(&mut r, x, 2, 5), 5).unwrap())
            .collect();
        let at = |f: &TensorFunctional| f.evaluate_grouplike(&z).unwrap();
        let l = |f: &TensorFunctional| lie_derivative(&field, f, usize::MAX).unwrap();
        prop_assert_eq!(at(&l(&c.shuffle(&d).unwrap())), at(&l(&c)) * at(&d) + at(&c) * at(&l(&d)));
    }

    #[test]
    fn pruning_never_changes_coefficients(seed in any::<u64>(), w in word(2, 3)) {
        let mut r = rng(seed);
        let x = ab(2);
        let nodes = vec![
            random_polynomial(&mut r, x, &[0, 1], 2, 3),
            random_polynomial(&mut r, x, &[0, 2], 2, 3),
        ];
        let weights = WeightMatrix::new(vec![vec![q(1, 2), q(-1, 1)], vec![q(2, 1), q(0, 1)]]).unwrap();
        let rep = NetworkSpec::new(NetworkKind::Additive, nodes, weights, 3).unwrap().build().unwrap();
        for k in 1..=2 {
            prop_assert_eq!(rep.coefficient(k, &w).unwrap(), rep.coefficient_with(k, &w, |_| 3).unwrap());
        }
    }

    #[test]
    fn trivial_representation_is_linear(a in series(2, 3), b in series(2, 3), s in -4i64..=4) {
        let scale = Coefficient::from_integer(s.into());
        let sum = a.add(&b.scale(&scale)).unwrap();
        let rep = |c: &Series| FormalRepresentation::trivial(c).unwrap().generating_series(1, 3).unwrap();
        prop_assert_eq!(rep(&sum), rep(&a).add(&rep(&b).scale(&scale)).unwrap());
    }

    #[test]
    fn zero_weights_leave_the_nodes_alone(seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = ab(2);
        let nodes = vec![
            random_polynomial(&mut r, x, &[0, 1], 3, 3),
            random_polynomial(&mut r, x, &[0, 2], 3, 3),
        ];
        let spec = NetworkSpec::new(NetworkKind::Additive, nodes.clone(), WeightMatrix::zeros(2), 3).unwrap();
        let rep = spec.build().unwrap();
        for (k, c) in nodes.iter().enumerate() {
            prop_assert_eq!(&rep.generating_series(k + 1, 3).unwrap(), c);
        }
    }

    #[test]
    fn compose_is_linear_in_the_outer_series(a in series(1, 3), b in series(1, 3), d in series(1, 2)) {
        let lhs = compose_single(&a.add(&b).unwrap(), &d, 5).unwrap();
        let rhs = compose_single(&a, &d, 5).unwrap().add(&compose_single(&b, &d, 5).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn compose_drift_words_are_fixed(c in series(1, 3), d in series(1, 2)) {
        let drift: Vec<_> = c.iter().filter(|(w, _)| w.uses_only(&[0])).map(|(w, v)| (w.clone(), v.clone())).collect();
        let drift = Series::from_terms(ab(1), CAP, drift).unwrap();
        prop_assert_eq!(compose_single(&drift, &d, 5).unwrap(), drift.truncate(5));
    }

    #[test]
    fn cascade_with_zero_inner_keeps_drift_words(c in series(1, 3)) {
        let zero = Series::zero(ab(1), CAP);
        let d = build_cascade(&c, &zero).unwrap().generating_series(1, 4).unwrap();
        let drift: Vec<_> = c.iter().filter(|(w, _)| w.uses_only(&[0])).map(|(w, v)| (w.clone(), v.clone())).collect();
        prop_assert_eq!(d, Series::from_terms(ab(1), CAP, drift).unwrap().truncate(4));
    }

    #[test]
    fn cascade_agrees_with_composition(c in series(1, 3), d in series(1, 2)) {
        let engine = build_cascade(&c, &d).unwrap().generating_series(1, 4).unwrap();
        prop_assert_eq!(engine, compose_single(&c, &d, 4).unwrap());
    }
}

#[test]
fn multiplicative_loop_with_constant_node_is_constant() {
    let x = ab(1);
    let one = Series::one(x, 4);
    let weights = WeightMatrix::from_integers(&[&[3]]).unwrap();
    let rep = NetworkSpec::new(NetworkKind::Multiplicative, vec![one.clone()], weights, 4)
        .unwrap()
        .build()
        .unwrap();
    assert_eq!(rep.generating_series(1, 4).unwrap(), one);
}

#[test]
fn multiplicative_without_feedback_keeps_only_drift() {
    let x = ab(1);
    let c = Series::from_terms(
        x,
        3,
        [
            (Word::new([0]), q(2, 1)),
            (Word::new([1]), q(1, 1)),
            (Word::empty(), q(5, 1)),
        ],
    )
    .unwrap();
    let rep = NetworkSpec::new(
        NetworkKind::Multiplicative,
        vec![c],
        WeightMatrix::zeros(1),
        3,
    )
    .unwrap()
    .build()
    .unwrap();
    let d = rep.generating_series(1, 3).unwrap();
    assert_eq!(d.coefficient(&Word::new([0])), q(2, 1));
    assert!(d.coefficient(&Word::new([1])).is_zero());
}
