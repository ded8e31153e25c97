#![allow(dead_code)]

use hermsig::algebra::{AlgebraWithInvolution, DElement, DivisionData};
use hermsig::hermitian::HermForm;
use hermsig::matrix::Matrix;
use hermsig::numfield::{FieldElement, FieldTower, Ordering};
use rand::Rng;

pub fn q() -> FieldTower {
    FieldTower::rationals()
}

pub fn int(t: &FieldTower, n: i64) -> FieldElement {
    FieldElement::from_integer(t, n)
}

pub fn p0() -> Ordering {
    q().orderings().unwrap().remove(0)
}

pub fn quat(t: &FieldTower, a: i64, b: i64) -> DivisionData {
    DivisionData::quaternion(int(t, a), int(t, b)).unwrap()
}

pub fn dmat(d: &DivisionData, rows: &[&[i64]]) -> Matrix<DElement> {
    Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&x| d.integer(x)).collect())
            .collect(),
    )
}

pub fn ddiag(d: &DivisionData, xs: &[i64]) -> Matrix<DElement> {
    Matrix::diagonal(&xs.iter().map(|&x| d.integer(x)).collect::<Vec<_>>())
}

/// `(M_m(F), ad_<phi>)` for a diagonal `phi` with integer entries.
pub fn split_algebra(t: &FieldTower, phi: &[i64]) -> AlgebraWithInvolution {
    let d = DivisionData::base_field(t);
    AlgebraWithInvolution::new(d.clone(), ddiag(&d, phi), 1).unwrap()
}

/// The four-by-four example algebra and the forms `h`, `h1`, `h2` on it.
pub fn m4_example() -> (AlgebraWithInvolution, HermForm, HermForm, HermForm) {
    let a = split_algebra(&q(), &[1, -1, 1, -1]);
    let d = a.division().clone();
    let h = HermForm::diagonal(&a, &[ddiag(&d, &[1, 1, -1, 1])]).unwrap();
    let h1 = HermForm::unit(&a, 1);
    let h2 = HermForm::diagonal(&a, &[ddiag(&d, &[1, -1, 1, -1])]).unwrap();
    (a, h, h1, h2)
}

pub fn quaternion_conj(t: &FieldTower, a: i64, b: i64) -> AlgebraWithInvolution {
    AlgebraWithInvolution::canonical(quat(t, a, b)).unwrap()
}

/// `((2,-3), Int(j) ∘ conj)`: `Φ₀ = [j]`, skew for conjugation.
pub fn int_j_conj(t: &FieldTower) -> AlgebraWithInvolution {
    let d = quat(t, 2, -3);
    AlgebraWithInvolution::new(d.clone(), Matrix::from_rows(vec![vec![d.unit(2)]]), -1).unwrap()
}

pub fn unitary(t: &FieldTower, d: i64) -> AlgebraWithInvolution {
    AlgebraWithInvolution::canonical(DivisionData::quadratic(int(t, d)).unwrap()).unwrap()
}

/// The fixture algebras over `t`, with labels.
pub fn fixtures(t: &FieldTower) -> Vec<(&'static str, AlgebraWithInvolution)> {
    vec![
        ("M2 ad<1,-1>", split_algebra(t, &[1, -1])),
        ("(-1,-1) conj", quaternion_conj(t, -1, -1)),
        ("(2,-3) Int(j)conj", int_j_conj(t)),
        ("Q(sqrt-1) conj", unitary(t, -1)),
    ]
}

/// Fixtures over the rationals plus a few with several orderings.
pub fn wide_fixtures() -> Vec<(&'static str, AlgebraWithInvolution)> {
    let mut out = fixtures(&q());
    let q2 = FieldTower::from_rational_radicands(&[2]).unwrap();
    let q23 = FieldTower::from_rational_radicands(&[2, 3]).unwrap();
    out.push(("M4 ad<1,-1,1,-1>", split_algebra(&q(), &[1, -1, 1, -1])));
    out.push(("(-1,-1) conj over Q(r2)", quaternion_conj(&q2, -1, -1)));
    out.push(("(-1,3) conj", quaternion_conj(&q(), -1, 3)));
    out.push((
        "(2,-3) Int(j)conj over Q(r2,r3)",
        int_j_conj(&q()).extend_scalars(&q23).unwrap(),
    ));
    let r2 = q2.generator(0);
    let d = DivisionData::quaternion(r2.clone(), int(&q2, -1)).unwrap();
    out.push((
        "(r2,-1) conj over Q(r2)",
        AlgebraWithInvolution::canonical(d).unwrap(),
    ));
    let k = DivisionData::quadratic(r2).unwrap();
    out.push((
        "Q(r2)(sqrt r2) conj",
        AlgebraWithInvolution::canonical(k).unwrap(),
    ));
    out.push((
        "M2(Q(r2)) transpose",
        AlgebraWithInvolution::transpose(&q2, 2),
    ));
    out
}

/// A random σ-symmetric element of `A` with small integer coordinates on a symmetric basis.
pub fn random_symmetric(a: &AlgebraWithInvolution, rng: &mut impl Rng) -> Matrix<DElement> {
    let basis = a.sym_basis(1).unwrap();
    let mut acc = Matrix::zeros(a.m(), a.m(), &a.division().zero());
    for b in &basis {
        let c: i64 = rng.gen_range(-2..=2);
        if c != 0 {
            acc = acc.add(&b.map(|x| x.scale(&int(a.field(), c))));
        }
    }
    acc
}

/// A random element of `D` with small integer coordinates.
pub fn random_element(d: &DivisionData, rng: &mut impl Rng) -> DElement {
    let coords = (0..d.dim())
        .map(|_| int(d.field(), rng.gen_range(-2..=2)))
        .collect();
    d.element(coords).unwrap()
}

/// A random nonsingular form of rank `k`: symmetric diagonal blocks and
/// random off-diagonal blocks mirrored by `σ`.
pub fn random_form(a: &AlgebraWithInvolution, k: usize, rng: &mut impl Rng) -> HermForm {
    let m = a.m();
    let d = a.division();
    loop {
        let mut gram = Matrix::zeros(k * m, k * m, &d.zero());
        for i in 0..k {
            gram.set_block(i * m, i * m, &random_symmetric(a, rng));
            for j in i + 1..k {
                let x = Matrix::from_fn(m, m, |_, _| random_element(d, rng));
                let sx = a.apply(&x).unwrap();
                gram.set_block(i * m, j * m, &x);
                gram.set_block(j * m, i * m, &sx);
            }
        }
        if let Ok(h) = HermForm::new(a, gram) {
            return h;
        }
    }
}

/// A random nonsingular rank-one diagonal form `<u>`.
pub fn random_unit_form(a: &AlgebraWithInvolution, rng: &mut impl Rng) -> HermForm {
    loop {
        if let Ok(h) = HermForm::diagonal(a, &[random_symmetric(a, rng)]) {
            return h;
        }
    }
}
