use crate::algebra::{DElement, DivisionData, DivisionKind};
use crate::congruence;
use crate::matrix::Matrix;
use crate::numfield::{FieldElement, FieldTower, Ordering};

use super::{signature_of_entries, QuadFormError};

/// A hermitian form over `(K, -)` with `K = F(sqrt d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermKForm {
    k: DivisionData,
    gram: Matrix<DElement>,
}

impl HermKForm {
    /// `k` must be a quadratic presentation; `gram` must equal its conjugate transpose.
    pub fn new(k: DivisionData, gram: Matrix<DElement>) -> Result<Self, QuadFormError> {
        if !k.is_quadratic() {
            return Err(QuadFormError::MismatchedTower);
        }
        if !gram.is_square() || gram.rows() == 0 {
            return Err(QuadFormError::BadShape);
        }
        if gram.entries().iter().any(|x| x.owner() != &k) {
            return Err(QuadFormError::MismatchedTower);
        }
        if gram.conj_transpose() != gram {
            return Err(QuadFormError::NotHermitian);
        }
        Ok(HermKForm { k, gram })
    }

    pub fn base(&self) -> &FieldTower {
        self.k.field()
    }

    pub fn d(&self) -> &FieldElement {
        match self.k.kind() {
            DivisionKind::Quadratic { d } => d,
            _ => unreachable!("validated as quadratic"),
        }
    }

    pub fn gram(&self) -> &Matrix<DElement> {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    /// Diagonal entries (in `F`) of a hermitian diagonalization.
    pub fn diagonal_entries(&self) -> Result<Vec<FieldElement>, QuadFormError> {
        let diag = congruence::diagonalize(&self.gram, &self.k.basis(), false)
            .map_err(|_| QuadFormError::SingularForm)?;
        Ok(diag
            .entries
            .iter()
            .map(|e| e.scalar_part().clone())
            .collect())
    }

    /// Zero where `d >_P 0`, otherwise the sign count of the diagonal entries.
    pub fn signature(&self, p: &Ordering) -> Result<i64, QuadFormError> {
        let entries = self.diagonal_entries()?;
        let total = signature_of_entries(&entries, p)?;
        Ok(if p.sign_of(self.d())? > 0 { 0 } else { total })
    }

    pub fn perp(&self, other: &Self) -> Result<Self, QuadFormError> {
        if self.k != other.k {
            return Err(QuadFormError::MismatchedTower);
        }
        Ok(HermKForm {
            k: self.k.clone(),
            gram: Matrix::block_diag(&[self.gram.clone(), other.gram.clone()]),
        })
    }
}
