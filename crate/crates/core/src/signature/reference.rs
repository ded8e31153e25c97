use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::AlgebraWithInvolution;
use crate::hermitian::HermForm;
use crate::numfield::{FieldTower, Ordering};

use super::{abs_signatures, is_nil, lambda, m_signature, ordering_index, SignatureError};

/// An ordered tuple `(h_1, ..., h_s)` of forms over a common `(A, σ)` used to fix signs.
#[derive(Debug, Clone)]
pub struct ReferenceTuple {
    algebra: AlgebraWithInvolution,
    forms: Vec<HermForm>,
}

fn same_algebra(a: &AlgebraWithInvolution, b: &AlgebraWithInvolution) -> bool {
    a.division() == b.division() && a.phi0() == b.phi0() && a.epsilon0() == b.epsilon0()
}

impl ReferenceTuple {
    /// Checks that every non-nil ordering has a member with nonzero signature,
    /// using the trace-form route.
    pub fn new(
        algebra: &AlgebraWithInvolution,
        forms: Vec<HermForm>,
    ) -> Result<Self, SignatureError> {
        let tuple = Self::unchecked(algebra, forms)?;
        let orderings = algebra.orderings()?;
        let mut covered = vec![false; orderings.len()];
        for (idx, p) in orderings.iter().enumerate() {
            covered[idx] = is_nil(algebra, p)?;
        }
        for h in &tuple.forms {
            let pending: Vec<usize> = (0..orderings.len()).filter(|&i| !covered[i]).collect();
            if pending.is_empty() {
                break;
            }
            let ps: Vec<Ordering> = pending.iter().map(|&i| orderings[i].clone()).collect();
            for (&i, v) in pending.iter().zip(abs_signatures(h, &ps)?) {
                covered[i] = v != 0;
            }
        }
        match covered.iter().position(|c| !c) {
            Some(i) => Err(SignatureError::ExhaustedReferences(i)),
            None => Ok(tuple),
        }
    }

    /// Only checks that the forms share the algebra; coverage failures surface
    /// later as `ExhaustedReferences`.
    pub fn unchecked(
        algebra: &AlgebraWithInvolution,
        forms: Vec<HermForm>,
    ) -> Result<Self, SignatureError> {
        if forms.iter().any(|h| !same_algebra(h.algebra(), algebra)) {
            return Err(SignatureError::MismatchedAlgebra);
        }
        Ok(ReferenceTuple {
            algebra: algebra.clone(),
            forms,
        })
    }

    pub fn algebra(&self) -> &AlgebraWithInvolution {
        &self.algebra
    }

    pub fn forms(&self) -> &[HermForm] {
        &self.forms
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    /// `H ⊗ L`: every member extended by scalars.
    pub fn extend_scalars(&self, ext: &FieldTower) -> Result<Self, SignatureError> {
        let algebra = self.algebra.extend_scalars(ext)?;
        let forms = self
            .forms
            .iter()
            .map(|h| h.extend_scalars(ext))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ReferenceTuple { algebra, forms })
    }

    /// The tuple re-read over another presentation of the algebra (same Gram matrices).
    pub fn over(&self, algebra: &AlgebraWithInvolution) -> Result<Self, SignatureError> {
        let forms = self
            .forms
            .iter()
            .map(|h| h.over(algebra))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ReferenceTuple {
            algebra: algebra.clone(),
            forms,
        })
    }
}

/// Whether `h_signature` also runs the trace-form route and compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RouteCheck {
    #[default]
    Full,
    PipelineOnly,
}

/// The H-signature of a form at one ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureReport {
    pub ordering_index: usize,
    pub signs: String,
    pub nil: bool,
    pub lambda: u8,
    /// 1-based position of the reference form that fixed the sign.
    pub reference: Option<usize>,
    pub value: i64,
}

impl fmt::Display for SignatureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self
            .reference
            .map_or_else(|| "-".to_string(), |i| i.to_string());
        write!(
            f,
            "P#{} signs={} nil={} lambda={} ref={} value={}",
            self.ordering_index, self.signs, self.nil, self.lambda, r, self.value
        )
    }
}

pub fn h_signature(
    h: &HermForm,
    refs: &ReferenceTuple,
    p: &Ordering,
) -> Result<SignatureReport, SignatureError> {
    h_signature_with(h, refs, p, RouteCheck::Full)
}

pub fn h_signature_with(
    h: &HermForm,
    refs: &ReferenceTuple,
    p: &Ordering,
    check: RouteCheck,
) -> Result<SignatureReport, SignatureError> {
    let idx = ordering_index(p)?;
    Ok(signatures_at(h, refs, &[(idx, p.clone())], check)?.remove(0))
}

/// One report per ordering of the base field, in enumeration order.
pub fn total_h_signature(
    h: &HermForm,
    refs: &ReferenceTuple,
) -> Result<Vec<SignatureReport>, SignatureError> {
    total_h_signature_with(h, refs, RouteCheck::Full)
}

pub fn total_h_signature_with(
    h: &HermForm,
    refs: &ReferenceTuple,
    check: RouteCheck,
) -> Result<Vec<SignatureReport>, SignatureError> {
    let all: Vec<(usize, Ordering)> = h.algebra().orderings()?.into_iter().enumerate().collect();
    signatures_at(h, refs, &all, check)
}

pub(super) fn signatures_at(
    h: &HermForm,
    refs: &ReferenceTuple,
    orderings: &[(usize, Ordering)],
    check: RouteCheck,
) -> Result<Vec<SignatureReport>, SignatureError> {
    let a = h.algebra();
    if !same_algebra(a, refs.algebra()) {
        return Err(SignatureError::MismatchedAlgebra);
    }
    let mut reports = Vec::with_capacity(orderings.len());
    // reference position -> (report slot, pipeline value of h, of the reference)
    let mut by_ref: BTreeMap<usize, Vec<(usize, i64, i64)>> = BTreeMap::new();
    for (slot, (idx, p)) in orderings.iter().enumerate() {
        let nil = is_nil(a, p)?;
        let mut report = SignatureReport {
            ordering_index: *idx,
            signs: p.signs_label(),
            nil,
            lambda: lambda(a, p)?,
            reference: None,
            value: 0,
        };
        if !nil {
            let mut found = None;
            for (i, hi) in refs.forms().iter().enumerate() {
                let mi = m_signature(hi, p)?;
                if mi != 0 {
                    found = Some((i, mi));
                    break;
                }
            }
            let (i, mi) = found.ok_or(SignatureError::ExhaustedReferences(*idx))?;
            let ms = m_signature(h, p)?;
            report.reference = Some(i + 1);
            report.value = mi.signum() * ms;
            by_ref.entry(i).or_default().push((slot, ms, mi));
        }
        reports.push(report);
    }
    if check == RouteCheck::Full {
        for (i, entries) in by_ref {
            let ps: Vec<Ordering> = entries
                .iter()
                .map(|&(slot, _, _)| orderings[slot].1.clone())
                .collect();
            let hi = &refs.forms()[i];
            let abs_h = abs_signatures(h, &ps)?;
            let abs_hi = abs_signatures(hi, &ps)?;
            let abs_sum = abs_signatures(&h.perp(hi)?, &ps)?;
            for (k, &(slot, _, _)) in entries.iter().enumerate() {
                let relative = relative_value(abs_h[k], abs_hi[k], abs_sum[k]);
                let report = &reports[slot];
                if relative != Some(report.value) {
                    return Err(SignatureError::RouteDisagreement {
                        ordering: report.ordering_index,
                        pipeline: report.value,
                        relative: relative.map_or_else(
                            || {
                                format!(
                                    "inconsistent |h|={} |h_i|={} |h+h_i|={}",
                                    abs_h[k], abs_hi[k], abs_sum[k]
                                )
                            },
                            |v| v.to_string(),
                        ),
                    });
                }
            }
        }
    }
    Ok(reports)
}

/// The sign of `x` relative to `y` from `|x|`, `|y|` and `|x + y|`, with `y ≠ 0`.
fn relative_value(abs_x: u64, abs_y: u64, abs_sum: u64) -> Option<i64> {
    if abs_y == 0 {
        return None;
    }
    let x = abs_x as i64;
    if abs_x == 0 {
        return (abs_sum == abs_y).then_some(0);
    }
    if abs_sum == abs_x + abs_y {
        Some(x)
    } else if abs_sum == abs_x.abs_diff(abs_y) {
        Some(-x)
    } else {
        None
    }
}
