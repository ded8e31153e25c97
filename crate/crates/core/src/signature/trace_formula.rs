use crate::algebra::AlgebraWithInvolution;
use crate::hermitian::{transfer_hermitian, HermForm, HermitianError};
use crate::numfield::Ordering;

use super::reference::signatures_at;
use super::{ordering_index, ReferenceTuple, RouteCheck, SignatureError};

/// Both sides of the trace formula at one ordering `P` of the base field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceFormulaRecord {
    pub ordering_index: usize,
    pub signs: String,
    /// H-signature of the transferred form at `P`.
    pub lhs: i64,
    /// Sum of the `H ⊗ L`-signatures of the form over the orderings extending `P`.
    pub rhs: i64,
    /// `(index, signs, value)` for each ordering of `L` extending `P`.
    pub extensions: Vec<(usize, String, i64)>,
}

impl TraceFormulaRecord {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Evaluates both sides at `p` for a form `h` over `A ⊗ L`.
pub fn verify_trace_formula(
    h: &HermForm,
    base: &AlgebraWithInvolution,
    refs: &ReferenceTuple,
    p: &Ordering,
) -> Result<TraceFormulaRecord, SignatureError> {
    let idx = ordering_index(p)?;
    Ok(evaluate(h, base, refs, &[(idx, p.clone())], RouteCheck::Full)?.remove(0))
}

/// Both sides at every ordering of the base field.
pub fn verify_trace_formula_total(
    h: &HermForm,
    base: &AlgebraWithInvolution,
    refs: &ReferenceTuple,
    check: RouteCheck,
) -> Result<Vec<TraceFormulaRecord>, SignatureError> {
    let all: Vec<(usize, Ordering)> = base.orderings()?.into_iter().enumerate().collect();
    evaluate(h, base, refs, &all, check)
}

fn evaluate(
    h: &HermForm,
    base: &AlgebraWithInvolution,
    refs: &ReferenceTuple,
    orderings: &[(usize, Ordering)],
    check: RouteCheck,
) -> Result<Vec<TraceFormulaRecord>, SignatureError> {
    let transferred = transfer_hermitian(h, base).map_err(|e| match e {
        HermitianError::NotAnExtension => SignatureError::NotAnExtension,
        other => other.into(),
    })?;
    let lhs = signatures_at(&transferred, refs, orderings, check)?;

    let ext = h.field();
    let refs_l = refs.extend_scalars(ext)?;
    let ext_orderings: Vec<(usize, Ordering)> = ext.orderings()?.into_iter().enumerate().collect();
    let mut wanted = Vec::new();
    for (qi, q) in &ext_orderings {
        if orderings.iter().any(|(_, p)| q.extends(p)) {
            wanted.push((*qi, q.clone()));
        }
    }
    let rhs = signatures_at(h, &refs_l, &wanted, check)?;

    let mut records = Vec::with_capacity(orderings.len());
    for ((idx, p), left) in orderings.iter().zip(lhs) {
        let extensions: Vec<(usize, String, i64)> = wanted
            .iter()
            .zip(&rhs)
            .filter(|((_, q), _)| q.extends(p))
            .map(|((qi, q), r)| (*qi, q.signs_label(), r.value))
            .collect();
        records.push(TraceFormulaRecord {
            ordering_index: *idx,
            signs: p.signs_label(),
            lhs: left.value,
            rhs: extensions.iter().map(|e| e.2).sum(),
            extensions,
        });
    }
    Ok(records)
}
