use crate::algebra::{DElement, DivisionData, DivisionKind};
use crate::congruence::{self, Diagonalization};
use crate::matrix::{InvolutiveRing, Matrix, Ring};

use super::HermitianError;

/// An ε-hermitian form over `(D, ϑ)`: `ϑ(C)^t = ε C`.
#[derive(Debug, Clone, PartialEq)]
pub struct CollapsedForm {
    division: DivisionData,
    epsilon: i32,
    gram: Matrix<DElement>,
}

impl CollapsedForm {
    pub fn new(
        division: DivisionData,
        epsilon: i32,
        gram: Matrix<DElement>,
    ) -> Result<Self, HermitianError> {
        if epsilon != 1 && epsilon != -1 {
            return Err(HermitianError::NotHermitian);
        }
        if !gram.is_square() || gram.rows() == 0 {
            return Err(HermitianError::DimensionMismatch);
        }
        if gram.entries().iter().any(|x| x.owner() != &division) {
            return Err(HermitianError::MismatchedAlgebra);
        }
        let ct = gram.conj_transpose();
        let ok = if epsilon == 1 {
            ct == gram
        } else {
            ct == gram.neg()
        };
        if !ok {
            return Err(HermitianError::NotHermitian);
        }
        Ok(CollapsedForm {
            division,
            epsilon,
            gram,
        })
    }

    pub fn division(&self) -> &DivisionData {
        &self.division
    }

    pub fn epsilon(&self) -> i32 {
        self.epsilon
    }

    pub fn gram(&self) -> &Matrix<DElement> {
        &self.gram
    }

    pub fn into_gram(self) -> Matrix<DElement> {
        self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    /// Congruence diagonalization `ϑ(T)^t C T = diag(entries)`. Skew forms over
    /// a commutative field with trivial involution are rejected.
    pub fn diagonalize(&self) -> Result<Diagonalization<DElement>, HermitianError> {
        if self.epsilon == -1 && matches!(self.division.kind(), DivisionKind::BaseField) {
            return Err(HermitianError::SkewSymmetricOverField);
        }
        congruence::diagonalize(&self.gram, &self.division.basis(), true)
            .map_err(|_| HermitianError::Singular)
    }

    /// `u C` for a central `u` with `ϑ(u) = ±u`; the sign of ε follows.
    pub fn scale_central(&self, u: &DElement) -> Result<Self, HermitianError> {
        if u.owner() != &self.division {
            return Err(HermitianError::MismatchedAlgebra);
        }
        if u.is_zero() {
            return Err(HermitianError::ZeroScale);
        }
        let basis = self.division.basis();
        if basis.iter().any(|e| e.mul(u) != u.mul(e)) {
            return Err(HermitianError::NotSemiSymmetric);
        }
        let cu = u.conj();
        let eps = if &cu == u {
            self.epsilon
        } else if cu == u.neg() {
            -self.epsilon
        } else {
            return Err(HermitianError::NotSemiSymmetric);
        };
        let gram = self.gram.map(|x| u.mul(x));
        CollapsedForm::new(self.division.clone(), eps, gram)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::{FieldElement, FieldTower};

    fn int(n: i64) -> FieldElement {
        FieldElement::from_integer(&FieldTower::rationals(), n)
    }

    #[test]
    fn diagonalization_is_a_congruence() {
        let h = DivisionData::quaternion(int(-1), int(-1)).unwrap();
        let (i, j) = (h.unit(1), h.unit(2));
        let c = Matrix::from_rows(vec![
            vec![h.zero(), i.add(&h.integer(2)), j.clone()],
            vec![i.neg().add(&h.integer(2)), h.zero(), h.unit(3)],
            vec![j.neg(), h.unit(3).neg(), h.integer(1)],
        ]);
        let f = CollapsedForm::new(h.clone(), 1, c.clone()).unwrap();
        let d = f.diagonalize().unwrap();
        let t = &d.transform;
        let lhs = t.conj_transpose().mul(&c).mul(t);
        assert_eq!(lhs, Matrix::diagonal(&d.entries));
        assert!(d.entries.iter().all(|e| e.is_scalar() && !e.is_zero()));
    }

    #[test]
    fn central_scaling_flips_epsilon() {
        let k = DivisionData::quadratic(int(-5)).unwrap();
        let s = k.unit(1);
        let f = CollapsedForm::new(
            k.clone(),
            1,
            Matrix::diagonal(&[k.integer(1), k.integer(-2)]),
        )
        .unwrap();
        let g = f.scale_central(&s).unwrap();
        assert_eq!(g.epsilon(), -1);
        assert_eq!(
            g.scale_central(&s).unwrap().gram(),
            &f.gram().map(|x| x.scale(&int(-5)))
        );
        let skew = CollapsedForm::new(DivisionData::base_field(&FieldTower::rationals()), -1, {
            let d = DivisionData::base_field(&FieldTower::rationals());
            Matrix::from_rows(vec![vec![d.zero(), d.one()], vec![d.integer(-1), d.zero()]])
        })
        .unwrap();
        assert!(matches!(
            skew.diagonalize(),
            Err(HermitianError::SkewSymmetricOverField)
        ));
    }
}
