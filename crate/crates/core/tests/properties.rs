mod common;

use common::*;
use hermsig::algebra::{self, AlgebraWithInvolution, DElement};
use hermsig::hermitian::HermForm;
use hermsig::matrix::Matrix;
use hermsig::quadform::QuadForm;
use hermsig::signature::{
    abs_signature, find_reference_tuple, h_signature, involution_signature, is_nil, lambda,
    m_signature, nil_orderings, trace_form_signature, DEFAULT_POOL_BUDGET,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Algebras whose only ordering is nil.
fn nil_fixtures() -> Vec<(&'static str, AlgebraWithInvolution)> {
    let t = q();
    let d = quat(&t, -1, -1);
    vec![
        (
            "(-1,-1) Int(i)conj",
            AlgebraWithInvolution::new(d.clone(), Matrix::from_rows(vec![vec![d.unit(1)]]), -1)
                .unwrap(),
        ),
        ("(-1,3) conj", quaternion_conj(&t, -1, 3)),
        ("Q(r2) conj", unitary(&t, 2)),
    ]
}

/// `T^σ B T` computed block by block, for `T` with `m × m` blocks.
fn congruent_gram(
    a: &AlgebraWithInvolution,
    b: &Matrix<DElement>,
    t: &Matrix<DElement>,
) -> Matrix<DElement> {
    let m = a.m();
    let k = b.rows() / m;
    let zero = a.division().zero();
    let block = |x: &Matrix<DElement>, i: usize, j: usize| x.submatrix(i * m, j * m, m, m);
    let mut out = Matrix::zeros(k * m, k * m, &zero);
    for i in 0..k {
        for j in 0..k {
            let mut acc = Matrix::zeros(m, m, &zero);
            for l in 0..k {
                let left = a.apply(&block(t, l, i)).unwrap();
                for r in 0..k {
                    acc = acc.add(&left.mul(&block(b, l, r)).mul(&block(t, r, j)));
                }
            }
            out.set_block(i * m, j * m, &acc);
        }
    }
    out
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn nil_orderings_give_zero(seed in any::<u64>(), which in 0usize..3, k in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, a) = &nil_fixtures()[which];
        let p = p0();
        prop_assert!(is_nil(a, &p).unwrap());
        let h = random_form(a, k, &mut rng);
        prop_assert_eq!(m_signature(&h, &p).unwrap(), 0);
        prop_assert_eq!(abs_signature(&h, &p).unwrap(), 0);
    }

    #[test]
    fn unit_form_reads_phi(entries in prop::collection::vec(prop_oneof![-3i64..=-1, 1i64..=3], 1..=4)) {
        let t = q();
        let a = split_algebra(&t, &entries);
        let inv: Vec<_> = entries.iter().map(|&e| hermsig::numfield::FieldElement::from_ratio(&t, 1, e)).collect();
        let oracle = QuadForm::diagonal(&inv).unwrap().signature(&p0()).unwrap();
        prop_assert_eq!(m_signature(&HermForm::unit(&a, 1), &p0()).unwrap(), oracle);

        let d = quat(&t, -1, -1);
        let phi = ddiag(&d, &entries);
        let a = AlgebraWithInvolution::new(d, phi, 1).unwrap();
        prop_assert_eq!(m_signature(&HermForm::unit(&a, 1), &p0()).unwrap(), oracle);
    }

    #[test]
    fn isometric_forms_agree(seed in any::<u64>(), which in 0usize..4, k in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, a) = &fixtures(&q())[which];
        let h = random_form(a, k, &mut rng);
        let n = k * a.m();
        let t = loop {
            let t = Matrix::from_fn(n, n, |_, _| random_element(a.division(), &mut rng));
            if algebra::invert(&t).is_some() {
                break t;
            }
        };
        let g = HermForm::new(a, congruent_gram(a, h.gram(), &t)).unwrap();
        for p in a.orderings().unwrap() {
            prop_assert_eq!(m_signature(&g, &p).unwrap(), m_signature(&h, &p).unwrap());
        }
    }

    #[test]
    fn signature_bounded_by_rank(seed in any::<u64>(), which in 0usize..11, k in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, a) = &wide_fixtures()[which];
        let h = random_form(a, k, &mut rng);
        for p in a.orderings().unwrap() {
            let m = m_signature(&h, &p).unwrap();
            if is_nil(a, &p).unwrap() {
                prop_assert_eq!(m, 0);
                continue;
            }
            let cap = (k * a.degree(1)) as i64 / lambda(a, &p).unwrap() as i64;
            prop_assert!(m.abs() <= cap);
            prop_assert_eq!((m - cap).rem_euclid(2), 0);
        }
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn adjoint_trace_form_is_square(seed in any::<u64>(), which in 0usize..11) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, a) = &wide_fixtures()[which];
        let h = random_form(a, rng.gen_range(1..=2), &mut rng);
        let ad = h.adjoint_involution().unwrap();
        for p in a.orderings().unwrap() {
            let s = trace_form_signature(&ad, &p).unwrap();
            let r = involution_signature(&ad, &p).unwrap() as i64;
            prop_assert_eq!(r * r, s);
            let l = lambda(a, &p).unwrap() as i64;
            prop_assert_eq!(r, l * m_signature(&h, &p).unwrap().abs());
        }
    }

    #[test]
    fn h_signature_is_additive(seed in any::<u64>(), which in 0usize..11) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, a) = &wide_fixtures()[which];
        let refs = find_reference_tuple(a, DEFAULT_POOL_BUDGET).unwrap();
        let h1 = random_form(a, 1, &mut rng);
        let h2 = random_unit_form(a, &mut rng);
        let sum = h1.perp(&h2).unwrap();
        for p in a.orderings().unwrap() {
            let s1 = h_signature(&h1, &refs, &p).unwrap().value;
            let s2 = h_signature(&h2, &refs, &p).unwrap().value;
            prop_assert_eq!(h_signature(&sum, &refs, &p).unwrap().value, s1 + s2);
        }
    }

    #[test]
    fn doubling_doubles_h_signature(seed in any::<u64>(), which in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, a) = &fixtures(&q())[which];
        let refs = find_reference_tuple(a, DEFAULT_POOL_BUDGET).unwrap();
        let h = random_form(a, rng.gen_range(1..=2), &mut rng);
        let ps = a.orderings().unwrap();
        let before: Vec<i64> = ps.iter().map(|p| h_signature(&h, &refs, p).unwrap().value).collect();
        let doubled = h.perp(&h).unwrap();
        for (p, v) in ps.iter().zip(&before) {
            prop_assert_eq!(h_signature(&doubled, &refs, p).unwrap().value, 2 * v);
        }
    }
}

#[test]
fn nil_fixture_sets() {
    for (label, a) in nil_fixtures() {
        assert_eq!(nil_orderings(&a).unwrap().len(), 1, "{label}");
    }
    for (label, a) in fixtures(&q()) {
        assert!(nil_orderings(&a).unwrap().is_empty(), "{label}");
    }
}
