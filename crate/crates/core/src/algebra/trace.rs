use crate::matrix::{Matrix, Ring};
use crate::numfield::FieldElement;
use crate::quadform::{HermKForm, QuadForm};

use super::{AlgebraError, AlgebraWithInvolution, DElement, DivisionData};

/// An involution on `M_n(D)`, given as a black-box map.
pub trait Involution {
    fn division(&self) -> &DivisionData;

    /// The matrix size `n`.
    fn size(&self) -> usize;

    fn apply(&self, x: &Matrix<DElement>) -> Matrix<DElement>;

    /// Image of the elementary matrix `E_rs · e`; implementors may override with a direct formula.
    fn apply_unit(&self, r: usize, s: usize, e: &DElement) -> Matrix<DElement> {
        let n = self.size();
        let mut x = Matrix::zeros(n, n, &self.division().zero());
        x.set(r, s, e.clone());
        self.apply(&x)
    }
}

impl Involution for AlgebraWithInvolution {
    fn division(&self) -> &DivisionData {
        AlgebraWithInvolution::division(self)
    }

    fn size(&self) -> usize {
        self.m()
    }

    fn apply(&self, x: &Matrix<DElement>) -> Matrix<DElement> {
        AlgebraWithInvolution::apply(self, x).expect("matrix of the algebra's size")
    }
}

/// The involution trace form `(x, y) -> Trd(τ(x) y)`.
#[derive(Debug, Clone)]
pub enum TraceForm {
    /// First kind: a symmetric bilinear form over `F` of dimension `n^2 · dim_F D`.
    First(QuadForm),
    /// Second kind: a hermitian form over `(K, -)` of dimension `n^2`.
    Second(HermKForm),
}

impl TraceForm {
    pub fn dim(&self) -> usize {
        match self {
            TraceForm::First(q) => q.dim(),
            TraceForm::Second(h) => h.dim(),
        }
    }
}

const FULL_CHECK_LIMIT: usize = 64;
const SAMPLED_CHECKS: usize = 16;

/// Gram matrix of the trace form of `tau` on the basis `E_rs · e_t`.
///
/// With `Z = τ(E_rs e)`, the entry against `E_r's' e'` is `Trd_D(Z_{s'r'} e')`.
/// The map is checked to square to the identity on basis elements (all of them
/// for small algebras, an evenly spaced sample otherwise).
pub fn trace_form(tau: &dyn Involution) -> Result<TraceForm, AlgebraError> {
    let d = tau.division();
    let n = tau.size();
    let second_kind = d.is_quadratic();
    let basis: Vec<DElement> = if second_kind {
        vec![d.one()]
    } else {
        d.basis()
    };
    let dim_d = basis.len();
    let big_n = n * n * dim_d;

    let stride = if big_n <= FULL_CHECK_LIMIT {
        1
    } else {
        big_n.div_ceil(SAMPLED_CHECKS)
    };
    for idx in (0..big_n).step_by(stride) {
        let (r, s, t) = (idx / (n * dim_d), (idx / dim_d) % n, idx % dim_d);
        let z = tau.apply_unit(r, s, &basis[t]);
        let back = tau.apply(&z);
        let mut expect = Matrix::zeros(n, n, &d.zero());
        expect.set(r, s, basis[t].clone());
        if back != expect {
            return Err(AlgebraError::NotInvolution);
        }
    }

    let images: Vec<Matrix<DElement>> = (0..big_n)
        .map(|idx| tau.apply_unit(idx / (n * dim_d), (idx / dim_d) % n, &basis[idx % dim_d]))
        .collect();

    if second_kind {
        let gram = Matrix::from_fn(big_n, big_n, |row, col| {
            let (r2, s2) = (col / n, col % n);
            images[row].get(s2, r2).clone()
        });
        if gram.conj_transpose() != gram {
            return Err(AlgebraError::NotInvolution);
        }
        let form = HermKForm::new(d.clone(), gram).map_err(|_| AlgebraError::NotInvolution)?;
        return Ok(TraceForm::Second(form));
    }

    let zero = FieldElement::zero(d.field());
    let factors = d.trace_pairing_factors().expect("first kind");
    let mut gram = Matrix::zeros(big_n, big_n, &zero);
    for (row, image) in images.iter().enumerate() {
        for col in row..big_n {
            let (r2, s2, t2) = (col / (n * dim_d), (col / dim_d) % n, col % dim_d);
            let zt = &image.get(s2, r2).coords()[t2];
            let v = if zt.is_zero() {
                zero.clone()
            } else {
                zt.mul(&factors[t2])
            };
            gram.set(row, col, v.clone());
            gram.set(col, row, v);
        }
    }
    // the mirrored half must agree with a direct evaluation
    for row in (0..big_n).step_by(stride) {
        for col in (0..row).step_by(stride) {
            let (r2, s2, t2) = (col / (n * dim_d), (col / dim_d) % n, col % dim_d);
            let direct = images[row].get(s2, r2).mul(&basis[t2]).reduced_trace();
            if direct.scalar_part() != gram.get(row, col) {
                return Err(AlgebraError::NotInvolution);
            }
        }
    }
    Ok(TraceForm::First(
        QuadForm::new(gram).expect("symmetric by construction"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::FieldTower;

    #[test]
    fn transpose_trace_form_is_positive() {
        let q = FieldTower::rationals();
        let p = &q.orderings().unwrap()[0];
        for n in 1..=3 {
            let a = AlgebraWithInvolution::transpose(&q, n);
            let TraceForm::First(t) = trace_form(&a).unwrap() else {
                panic!("first kind")
            };
            assert_eq!(t.dim(), n * n);
            assert_eq!(t.signature(p).unwrap(), (n * n) as i64);
        }
    }

    #[test]
    fn quaternion_conjugation_trace_form() {
        let q = FieldTower::rationals();
        let p = &q.orderings().unwrap()[0];
        let h = DivisionData::quaternion(
            FieldElement::from_integer(&q, -1),
            FieldElement::from_integer(&q, -1),
        )
        .unwrap();
        let a = AlgebraWithInvolution::canonical(h).unwrap();
        let TraceForm::First(t) = trace_form(&a).unwrap() else {
            panic!("first kind")
        };
        assert_eq!(t.signature(p).unwrap(), 4);
    }

    struct NotAnInvolution(AlgebraWithInvolution);

    impl Involution for NotAnInvolution {
        fn division(&self) -> &DivisionData {
            self.0.division()
        }
        fn size(&self) -> usize {
            self.0.m()
        }
        fn apply(&self, x: &Matrix<DElement>) -> Matrix<DElement> {
            x.map(|e| e.add(e))
        }
    }

    #[test]
    fn self_check_rejects_non_involutions() {
        let a = AlgebraWithInvolution::transpose(&FieldTower::rationals(), 2);
        assert!(matches!(
            trace_form(&NotAnInvolution(a)),
            Err(AlgebraError::NotInvolution)
        ));
    }
}
