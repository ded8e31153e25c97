//! Symmetric bilinear forms over a tower field and hermitian forms over a
//! quadratic extension with its conjugation.

mod hermk;

pub use hermk::HermKForm;

use thiserror::Error;

use crate::congruence::{self, sign_count};
use crate::matrix::Matrix;
use crate::numfield::{FieldElement, FieldTower, NumFieldError, Ordering, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadFormError {
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("Gram matrix is not hermitian")]
    NotHermitian,
    #[error("Gram matrix must be square and nonempty")]
    BadShape,
    #[error("form is singular")]
    SingularForm,
    #[error("Pfister slot is zero")]
    ZeroSlot,
    #[error("scale factor is zero")]
    ZeroScale,
    #[error("forms live over different towers")]
    MismatchedTower,
    #[error(transparent)]
    Field(#[from] NumFieldError),
}

/// A symmetric bilinear form given by its Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadForm {
    field: FieldTower,
    gram: Matrix<FieldElement>,
}

impl QuadForm {
    pub fn new(gram: Matrix<FieldElement>) -> Result<Self, QuadFormError> {
        if !gram.is_square() || gram.rows() == 0 {
            return Err(QuadFormError::BadShape);
        }
        let field = gram.get(0, 0).tower().clone();
        if gram.entries().iter().any(|x| x.tower() != &field) {
            return Err(QuadFormError::MismatchedTower);
        }
        if gram.transpose() != gram {
            return Err(QuadFormError::NotSymmetric);
        }
        Ok(QuadForm { field, gram })
    }

    /// The diagonal form `<a_1, ..., a_n>`.
    pub fn diagonal(entries: &[FieldElement]) -> Result<Self, QuadFormError> {
        if entries.is_empty() {
            return Err(QuadFormError::BadShape);
        }
        Self::new(Matrix::diagonal(entries))
    }

    pub fn field(&self) -> &FieldTower {
        &self.field
    }

    pub fn gram(&self) -> &Matrix<FieldElement> {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    /// Diagonal entries and a transform `C` with `C^t G C` diagonal.
    pub fn diagonalize(&self) -> (Vec<FieldElement>, Matrix<FieldElement>) {
        let one = FieldElement::one(&self.field);
        let d = congruence::diagonalize(&self.gram, &[one], true)
            .expect("symmetric forms always diagonalize");
        (d.entries, d.transform)
    }

    /// Diagonal entries only, using the rational fast path over the base field.
    pub fn diagonal_entries(&self) -> Vec<FieldElement> {
        if self.field.depth() == 0 {
            let rows: Vec<Vec<Rational>> = self
                .gram
                .to_rows()
                .iter()
                .map(|r| r.iter().map(|x| x.coeffs()[0].clone()).collect())
                .collect();
            return congruence::symmetric_rational_diagonal(&rows)
                .into_iter()
                .map(|q| FieldElement::from_rational(&self.field, q))
                .collect();
        }
        let one = FieldElement::one(&self.field);
        congruence::diagonalize(&self.gram, &[one], false)
            .expect("symmetric forms always diagonalize")
            .entries
    }

    /// Sylvester signature at `p`.
    pub fn signature(&self, p: &Ordering) -> Result<i64, QuadFormError> {
        signature_of_entries(&self.diagonal_entries(), p)
    }

    /// Signatures at several orderings from a single diagonalization.
    pub fn signatures(&self, orderings: &[Ordering]) -> Result<Vec<i64>, QuadFormError> {
        let entries = self.diagonal_entries();
        orderings
            .iter()
            .map(|p| signature_of_entries(&entries, p))
            .collect()
    }

    pub fn perp(&self, other: &Self) -> Result<Self, QuadFormError> {
        self.same_field(other)?;
        Ok(QuadForm {
            field: self.field.clone(),
            gram: Matrix::block_diag(&[self.gram.clone(), other.gram.clone()]),
        })
    }

    pub fn tensor(&self, other: &Self) -> Result<Self, QuadFormError> {
        self.same_field(other)?;
        Ok(QuadForm {
            field: self.field.clone(),
            gram: self.gram.kron_with(&other.gram, |a, b| a.mul(b)),
        })
    }

    pub fn scale(&self, c: &FieldElement) -> Result<Self, QuadFormError> {
        if c.tower() != &self.field {
            return Err(QuadFormError::MismatchedTower);
        }
        if c.is_zero() {
            return Err(QuadFormError::ZeroScale);
        }
        Ok(QuadForm {
            field: self.field.clone(),
            gram: self.gram.map(|x| x.mul(c)),
        })
    }

    /// `<<a_2, ..., a_r>> = <1, a_2> ⊗ ... ⊗ <1, a_r>`.
    pub fn pfister(slots: &[FieldElement]) -> Result<Self, QuadFormError> {
        let Some(first) = slots.first() else {
            return Err(QuadFormError::BadShape);
        };
        let one = FieldElement::one(first.tower());
        let mut form = QuadForm::diagonal(std::slice::from_ref(&one))?;
        for a in slots {
            if a.is_zero() {
                return Err(QuadFormError::ZeroSlot);
            }
            form = form.tensor(&QuadForm::diagonal(&[one.clone(), a.clone()])?)?;
        }
        Ok(form)
    }

    /// The transfer along the top step `F(sqrt a)/F`: `(x, y) -> Tr(b(x, y))` on
    /// the restriction, with basis `{1, sqrt a}` per slot.
    pub fn transfer(&self) -> Result<Self, QuadFormError> {
        let parent = self.field.parent().ok_or(NumFieldError::BaseTower)?.clone();
        let r = self.field.generator(self.field.depth() - 1);
        let omega = [FieldElement::one(&self.field), r];
        let n = self.dim();
        let gram = Matrix::from_fn(2 * n, 2 * n, |p, q| {
            let (i, a) = (p / 2, p % 2);
            let (j, b) = (q / 2, q % 2);
            omega[a]
                .mul(&omega[b])
                .mul(self.gram.get(i, j))
                .trace_step()
                .expect("depth >= 1")
        });
        Ok(QuadForm {
            field: parent,
            gram,
        })
    }

    /// Re-reads the form over an extension tower.
    pub fn extend_scalars(&self, ext: &FieldTower) -> Result<Self, QuadFormError> {
        let mut entries = Vec::with_capacity(self.dim() * self.dim());
        for x in self.gram.entries() {
            entries.push(x.embed(ext)?);
        }
        let n = self.dim();
        let gram = Matrix::from_fn(n, n, |i, j| entries[i * n + j].clone());
        Ok(QuadForm {
            field: ext.clone(),
            gram,
        })
    }

    fn same_field(&self, other: &Self) -> Result<(), QuadFormError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(QuadFormError::MismatchedTower)
        }
    }
}

pub(crate) fn signature_of_entries(
    entries: &[FieldElement],
    p: &Ordering,
) -> Result<i64, QuadFormError> {
    let mut signs = Vec::with_capacity(entries.len());
    for e in entries {
        signs.push(p.sign_of(e)?);
    }
    sign_count(signs).ok_or(QuadFormError::SingularForm)
}
