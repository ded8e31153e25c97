//! Nil-orderings, involution signatures, the canonical M-signature pipeline,
//! H-signatures against reference tuples, and the trace formula check.

mod reference;
mod search;
mod trace_formula;

pub use reference::{
    h_signature, h_signature_with, total_h_signature, total_h_signature_with, ReferenceTuple,
    RouteCheck, SignatureReport,
};
pub use search::{find_reference_tuple, DEFAULT_POOL_BUDGET};
pub use trace_formula::{verify_trace_formula, verify_trace_formula_total, TraceFormulaRecord};

use thiserror::Error;

use crate::algebra::{
    split_quaternion, trace_form, AlgebraError, AlgebraWithInvolution, DElement, DivisionKind,
    Involution, InvolutionType, LocalType, SplitRadicand, TraceForm,
};
use crate::hermitian::{HermForm, HermitianError};
use crate::matrix::Matrix;
use crate::numfield::{FieldElement, NumFieldError, Ordering};
use crate::quadform::{signature_of_entries, HermKForm, QuadForm, QuadFormError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("trace form signature {0} is not a perfect square")]
    NotPerfectSquare(i64),
    #[error("involution signature {value} is not divisible by lambda = {lambda}")]
    NonIntegerQuotient { value: u64, lambda: u8 },
    #[error("no reference form has nonzero signature at ordering P#{0}")]
    ExhaustedReferences(usize),
    #[error("signature routes disagree at P#{ordering}: pipeline {pipeline}, trace-form route {relative}")]
    RouteDisagreement {
        ordering: usize,
        pipeline: i64,
        relative: String,
    },
    #[error("candidate pool exhausted; uncovered orderings {0:?}")]
    PoolExhausted(Vec<usize>),
    #[error("ordering does not belong to the field of the algebra")]
    ForeignOrdering,
    #[error("reference forms live over different algebras")]
    MismatchedAlgebra,
    #[error("form is not defined over an extension of the base algebra")]
    NotAnExtension,
    #[error(transparent)]
    Hermitian(#[from] HermitianError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    QuadForm(#[from] QuadFormError),
    #[error(transparent)]
    Field(#[from] NumFieldError),
}

fn check_ordering(a: &AlgebraWithInvolution, p: &Ordering) -> Result<(), SignatureError> {
    if p.tower() == a.field() {
        Ok(())
    } else {
        Err(SignatureError::ForeignOrdering)
    }
}

/// Position of `p` in the enumeration of orderings of its tower.
pub fn ordering_index(p: &Ordering) -> Result<usize, SignatureError> {
    let all = p.tower().orderings()?;
    all.iter()
        .position(|q| q == p)
        .ok_or(SignatureError::ForeignOrdering)
}

/// True if every hermitian form over `(A, σ)` has signature zero at `p`.
pub fn is_nil(a: &AlgebraWithInvolution, p: &Ordering) -> Result<bool, SignatureError> {
    check_ordering(a, p)?;
    Ok(matches!(
        (a.involution_type(), a.local_type(p)?),
        (InvolutionType::Orthogonal, LocalType::Hamilton)
            | (InvolutionType::Symplectic, LocalType::Split)
            | (InvolutionType::Unitary, LocalType::Exchange)
    ))
}

pub fn nil_orderings(a: &AlgebraWithInvolution) -> Result<Vec<Ordering>, SignatureError> {
    let mut out = Vec::new();
    for p in a.orderings()? {
        if is_nil(a, &p)? {
            out.push(p);
        }
    }
    Ok(out)
}

/// 2 for a symplectic involution on a quaternion algebra ramified at `p`, else 1.
pub fn lambda(a: &AlgebraWithInvolution, p: &Ordering) -> Result<u8, SignatureError> {
    check_ordering(a, p)?;
    let two = a.involution_type() == InvolutionType::Symplectic
        && a.local_type(p)? == LocalType::Hamilton;
    Ok(if two { 2 } else { 1 })
}

/// A diagonalized trace form, evaluated at any number of orderings.
struct TraceDiagonal {
    entries: Vec<FieldElement>,
    nonreal_d: Option<FieldElement>,
}

impl TraceDiagonal {
    fn new(tau: &dyn Involution) -> Result<Self, SignatureError> {
        Ok(match trace_form(tau)? {
            TraceForm::First(q) => TraceDiagonal {
                entries: q.diagonal_entries(),
                nonreal_d: None,
            },
            TraceForm::Second(h) => TraceDiagonal {
                entries: h.diagonal_entries()?,
                nonreal_d: Some(h.d().clone()),
            },
        })
    }

    fn signature(&self, p: &Ordering) -> Result<i64, SignatureError> {
        if let Some(d) = &self.nonreal_d {
            if p.sign_of(d)? > 0 {
                return Ok(0);
            }
        }
        Ok(signature_of_entries(&self.entries, p)?)
    }

    fn root(&self, p: &Ordering) -> Result<u64, SignatureError> {
        let s = self.signature(p)?;
        exact_sqrt(s).ok_or(SignatureError::NotPerfectSquare(s))
    }
}

fn exact_sqrt(s: i64) -> Option<u64> {
    if s < 0 {
        return None;
    }
    let r = num_integer::Roots::sqrt(&(s as u64));
    (r * r == s as u64).then_some(r)
}

/// Signature of the trace form of `tau` at `p`; must be a perfect square.
pub fn trace_form_signature(tau: &dyn Involution, p: &Ordering) -> Result<i64, SignatureError> {
    TraceDiagonal::new(tau)?.signature(p)
}

/// `sqrt(sign_P T_τ)`.
pub fn involution_signature(tau: &dyn Involution, p: &Ordering) -> Result<u64, SignatureError> {
    TraceDiagonal::new(tau)?.root(p)
}

/// Involution signatures at several orderings from one trace-form diagonalization.
pub fn involution_signatures(
    tau: &dyn Involution,
    orderings: &[Ordering],
) -> Result<Vec<u64>, SignatureError> {
    let diag = TraceDiagonal::new(tau)?;
    orderings.iter().map(|p| diag.root(p)).collect()
}

/// `|sign h|` at `p` from the adjoint involution: `sign_P ad_h / λ_P`.
pub fn abs_signature(h: &HermForm, p: &Ordering) -> Result<u64, SignatureError> {
    Ok(abs_signatures(h, std::slice::from_ref(p))?[0])
}

pub fn abs_signatures(h: &HermForm, orderings: &[Ordering]) -> Result<Vec<u64>, SignatureError> {
    let a = h.algebra();
    for p in orderings {
        check_ordering(a, p)?;
    }
    let ad = h.adjoint_involution()?;
    let roots = involution_signatures(&ad, orderings)?;
    roots
        .into_iter()
        .zip(orderings)
        .map(|(v, p)| {
            let l = lambda(a, p)?;
            if v % l as u64 != 0 {
                return Err(SignatureError::NonIntegerQuotient {
                    value: v,
                    lambda: l,
                });
            }
            Ok(v / l as u64)
        })
        .collect()
}

/// The M-signature of `h` at `p` along the canonical pipeline: collapse with the
/// stored `Φ₀`, then read the classical signature of the resulting form.
pub fn m_signature(h: &HermForm, p: &Ordering) -> Result<i64, SignatureError> {
    let a = h.algebra();
    check_ordering(a, p)?;
    let c = h.collapse();
    let d = a.division();
    match (a.involution_type(), a.local_type(p)?) {
        (InvolutionType::Orthogonal, LocalType::Split)
            if matches!(d.kind(), DivisionKind::BaseField) =>
        {
            let q = QuadForm::new(c.gram().map(|x| x.scalar_part().clone()))?;
            Ok(q.signature(p)?)
        }
        (InvolutionType::Orthogonal, LocalType::Split) => split_quaternion_signature(c.gram(), p),
        (InvolutionType::Symplectic, LocalType::Hamilton) => {
            let diag = c.diagonalize()?;
            let entries: Vec<FieldElement> = diag
                .entries
                .iter()
                .map(|e| e.scalar_part().clone())
                .collect();
            Ok(signature_of_entries(&entries, p)?)
        }
        (InvolutionType::Unitary, LocalType::Complex) => {
            let c = if c.epsilon() == -1 {
                c.scale_central(&d.unit(1))?
            } else {
                c
            };
            Ok(HermKForm::new(d.clone(), c.into_gram())?.signature(p)?)
        }
        _ => Ok(0),
    }
}

/// Orthogonal involution on a quaternion algebra split at `p`: `C` is
/// skew-hermitian over `(D, conj)`; `(I ⊗ J⁻¹) φ(C)` is symmetric over `F(sqrt r)`.
fn split_quaternion_signature(c: &Matrix<DElement>, p: &Ordering) -> Result<i64, SignatureError> {
    let d = c.entries()[0].owner();
    let DivisionKind::Quaternion { a, .. } = d.kind() else {
        unreachable!("quaternion case")
    };
    let radicand = if p.sign_of(a)? > 0 {
        SplitRadicand::A
    } else {
        SplitRadicand::B
    };
    let split = split_quaternion(d, radicand)?;
    let (split, q) = split.positive_at(p)?;
    let phi_c = split.map_matrix(c);
    let j_inv = split.j_inverse().repeat_diag(c.rows());
    let s = j_inv.mul(&phi_c);
    let form = QuadForm::new(s)?;
    Ok(form.signature(&q)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DivisionData;
    use crate::numfield::FieldTower;

    fn q() -> FieldTower {
        FieldTower::rationals()
    }

    fn int(t: &FieldTower, n: i64) -> FieldElement {
        FieldElement::from_integer(t, n)
    }

    fn p0() -> Ordering {
        q().orderings().unwrap().remove(0)
    }

    fn quat(a: i64, b: i64) -> DivisionData {
        DivisionData::quaternion(int(&q(), a), int(&q(), b)).unwrap()
    }

    fn int_j_conj() -> AlgebraWithInvolution {
        let h = quat(2, -3);
        AlgebraWithInvolution::new(h.clone(), Matrix::from_rows(vec![vec![h.unit(2)]]), -1).unwrap()
    }

    #[test]
    fn nil_sets() {
        let h = AlgebraWithInvolution::canonical(quat(-1, -1)).unwrap();
        assert!(nil_orderings(&h).unwrap().is_empty());
        let k = AlgebraWithInvolution::canonical(DivisionData::quadratic(int(&q(), 2)).unwrap())
            .unwrap();
        assert_eq!(nil_orderings(&k).unwrap().len(), 1);
        assert_eq!(lambda(&h, &p0()).unwrap(), 2);
    }

    #[test]
    fn involution_signature_examples() {
        let t = AlgebraWithInvolution::transpose(&q(), 3);
        assert_eq!(involution_signature(&t, &p0()).unwrap(), 3);
        let h = AlgebraWithInvolution::canonical(quat(-1, -1)).unwrap();
        assert_eq!(involution_signature(&h, &p0()).unwrap(), 2);
        assert_eq!(involution_signature(&int_j_conj(), &p0()).unwrap(), 2);
    }

    #[test]
    fn split_orthogonal_case() {
        let a = int_j_conj();
        let d = a.division().clone();
        let one = HermForm::unit(&a, 1);
        assert_eq!(m_signature(&one, &p0()).unwrap(), -2);
        let minus3 =
            HermForm::diagonal(&a, &[Matrix::from_rows(vec![vec![d.integer(-3)]])]).unwrap();
        assert_eq!(m_signature(&minus3, &p0()).unwrap(), 2);
        // the collapsed form [j] is the same as <-3> since Φ₀⁻¹ · (-3) = j
        let cj = HermForm::collapsed(&a, Matrix::from_rows(vec![vec![d.unit(2)]])).unwrap();
        assert_eq!(m_signature(&cj, &p0()).unwrap(), 2);
        assert_eq!(abs_signature(&minus3, &p0()).unwrap(), 2);
    }

    #[test]
    fn unitary_case_scales_skew_forms() {
        let k = DivisionData::quadratic(int(&q(), -1)).unwrap();
        let s = k.unit(1);
        let skew =
            AlgebraWithInvolution::new(k.clone(), Matrix::from_rows(vec![vec![s.clone()]]), -1)
                .unwrap();
        let h = HermForm::unit(&skew, 1);
        // collapsed Gram s⁻¹ = -s, scaled by s: -s·s = 1
        assert_eq!(m_signature(&h, &p0()).unwrap(), 1);
        assert_eq!(abs_signature(&h, &p0()).unwrap(), 1);
    }
}
