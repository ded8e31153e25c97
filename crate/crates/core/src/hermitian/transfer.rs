use crate::algebra::{AlgebraWithInvolution, DElement, DivisionData};
use crate::matrix::{Matrix, Ring};
use crate::numfield::FieldElement;

use super::{HermForm, HermitianError};

/// The trace transfer `Tr_{L/F}(h)` of a form over `A ⊗_F L` down to `A`,
/// one square-root step at a time.
///
/// At each step `L = L'(sqrt a)` the module `M^k` over `A ⊗ L` becomes `M^{2k}`
/// over `A ⊗ L'` on the basis `e_i ω_α`, `ω = (1, sqrt a)`, with Gram entries
/// `Tr(ω_α ω_β B_ij)` taken on `D`-coordinates.
pub fn transfer_hermitian(
    h: &HermForm,
    base: &AlgebraWithInvolution,
) -> Result<HermForm, HermitianError> {
    let field = h.field();
    if !field.is_extension_of(base.field()) {
        return Err(HermitianError::NotAnExtension);
    }
    let expected = base.extend_scalars(field)?;
    let here = h.algebra();
    if expected.division() != here.division()
        || expected.phi0() != here.phi0()
        || expected.epsilon0() != here.epsilon0()
    {
        return Err(HermitianError::NotAnExtension);
    }
    let mut current = h.clone();
    while current.field().depth() > base.field().depth() {
        let parent = current.field().parent().expect("positive depth").clone();
        let target = if &parent == base.field() {
            base.clone()
        } else {
            base.extend_scalars(&parent)?
        };
        current = transfer_step(&current, &target)?;
    }
    Ok(current)
}

fn transfer_step(h: &HermForm, target: &AlgebraWithInvolution) -> Result<HermForm, HermitianError> {
    let a = h
        .field()
        .top_radicand()
        .ok_or(HermitianError::NotAnExtension)?;
    let td = target.division();
    let (block, gram) = if h.is_collapsed_only() {
        (1, h.collapsed_gram())
    } else {
        (target.m(), h.gram().clone())
    };
    let k = gram.rows() / block;
    let n = 2 * gram.rows();
    let zero = td.zero();
    let mut out = Matrix::zeros(n, n, &zero);
    for i in 0..k {
        for j in 0..k {
            for p in 0..block {
                for q in 0..block {
                    let x = gram.get(i * block + p, j * block + q);
                    if x.is_zero() {
                        continue;
                    }
                    let traces = step_traces(x, &a, td)?;
                    for (alpha, beta, t) in traces {
                        out.set((2 * i + alpha) * block + p, (2 * j + beta) * block + q, t);
                    }
                }
            }
        }
    }
    if h.is_collapsed_only() {
        HermForm::collapsed(target, out)
    } else {
        HermForm::new(target, out)
    }
}

/// `Tr(ω_α ω_β x)` for `α, β ∈ {0, 1}`: writing `x = u + v sqrt a` coordinatewise,
/// these are `2u`, `2av`, `2av`, `2au`.
fn step_traces(
    x: &DElement,
    a: &FieldElement,
    td: &DivisionData,
) -> Result<Vec<(usize, usize, DElement)>, HermitianError> {
    let mut us = Vec::with_capacity(x.coords().len());
    let mut vs = Vec::with_capacity(x.coords().len());
    for c in x.coords() {
        let (u, v) = c.split_step().map_err(|_| HermitianError::NotAnExtension)?;
        us.push(u.scale_int(2));
        vs.push(v.scale_int(2).mul(a));
    }
    let au: Vec<FieldElement> = us.iter().map(|u| u.mul(a)).collect();
    let el = |coords: Vec<FieldElement>| td.element(coords).map_err(HermitianError::from);
    let t00 = el(us)?;
    let t01 = el(vs)?;
    let t11 = el(au)?;
    Ok(vec![
        (0, 0, t00),
        (0, 1, t01.clone()),
        (1, 0, t01),
        (1, 1, t11),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DivisionData;
    use crate::numfield::FieldTower;
    use crate::quadform::QuadForm;

    #[test]
    fn transfer_of_unit_form_over_field_matches_quadratic_transfer() {
        let q = FieldTower::rationals();
        let l = q.extend(&FieldElement::from_integer(&q, 2)).unwrap();
        let base = AlgebraWithInvolution::transpose(&q, 1);
        let al = base.extend_scalars(&l).unwrap();
        let s = l.generator(0);
        let x = FieldElement::from_integer(&l, 1).add(&s);
        let d = al.division().clone();
        let h =
            HermForm::new(&al, Matrix::diagonal(&[d.scalar(x.clone()), d.integer(-3)])).unwrap();
        let t = transfer_hermitian(&h, &base).unwrap();
        let qf = QuadForm::diagonal(&[x, FieldElement::from_integer(&l, -3)])
            .unwrap()
            .transfer()
            .unwrap();
        let expect = qf
            .gram()
            .map(|c| DivisionData::base_field(&q).scalar(c.clone()));
        assert_eq!(t.gram(), &expect);
    }
}
