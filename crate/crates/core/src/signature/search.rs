use std::ops::ControlFlow;

use crate::algebra::{self, AlgebraWithInvolution, DElement};
use crate::hermitian::HermForm;
use crate::matrix::Matrix;
use crate::numfield::{FieldElement, Ordering};

use super::{abs_signatures, is_nil, lambda, ReferenceTuple, SignatureError};

/// Number of candidate elements examined before giving up.
pub const DEFAULT_POOL_BUDGET: usize = 20_000;

const LOOKAHEAD: usize = 2_000;

/// Greedy search for a tuple of rank-one forms `<u>_σ` covering every non-nil ordering.
///
/// `<1>_σ` is always the first member unless every ordering is nil. Further
/// candidates are integer combinations of a basis of symmetric elements with
/// growing coefficient bound. For each bound the candidate covering the most
/// pending orderings (then the largest total `|sign|`) is kept, and the bound
/// is rescanned until it stops helping.
pub fn find_reference_tuple(
    a: &AlgebraWithInvolution,
    budget: usize,
) -> Result<ReferenceTuple, SignatureError> {
    let orderings = a.orderings()?;
    let mut pending: Vec<usize> = Vec::new();
    let mut caps = Vec::with_capacity(orderings.len());
    for (i, p) in orderings.iter().enumerate() {
        if !is_nil(a, p)? {
            pending.push(i);
        }
        caps.push((a.degree(1) / lambda(a, p)? as usize) as u64);
    }
    let mut forms = Vec::new();
    let mut search = Search {
        a,
        orderings: &orderings,
        caps: &caps,
        budget,
        evaluated: 0,
    };

    if !pending.is_empty() {
        let one = HermForm::unit(a, 1);
        search.tick(&pending)?;
        let score = search.score(&one, &pending)?;
        search.accept(&mut pending, &score);
        forms.push(one);
    }

    let basis = a.sym_basis(1)?;
    let mut bound = 1i64;
    while !pending.is_empty() {
        match search.scan_bound(&basis, bound, &pending)? {
            Some((form, score)) if score.covered > 0 => {
                search.accept(&mut pending, &score);
                forms.push(form);
            }
            _ => bound += 1,
        }
    }
    ReferenceTuple::unchecked(a, forms)
}

struct Search<'a> {
    a: &'a AlgebraWithInvolution,
    orderings: &'a [Ordering],
    caps: &'a [u64],
    budget: usize,
    evaluated: usize,
}

#[derive(Debug, Clone)]
struct Score {
    covered: usize,
    total: u64,
    at_cap: bool,
    values: Vec<u64>,
}

impl Score {
    fn beats(&self, other: &Score) -> bool {
        (self.covered, self.total) > (other.covered, other.total)
    }
}

impl Search<'_> {
    /// Counts one candidate against the budget.
    fn tick(&mut self, pending: &[usize]) -> Result<(), SignatureError> {
        if self.evaluated >= self.budget {
            return Err(SignatureError::PoolExhausted(pending.to_vec()));
        }
        self.evaluated += 1;
        Ok(())
    }

    fn score(&mut self, h: &HermForm, pending: &[usize]) -> Result<Score, SignatureError> {
        let ps: Vec<Ordering> = pending.iter().map(|&i| self.orderings[i].clone()).collect();
        let values = abs_signatures(h, &ps)?;
        let covered = values.iter().filter(|&&v| v != 0).count();
        let at_cap = pending
            .iter()
            .zip(&values)
            .all(|(&i, &v)| v == self.caps[i]);
        Ok(Score {
            covered,
            total: values.iter().sum(),
            at_cap,
            values,
        })
    }

    fn accept(&self, pending: &mut Vec<usize>, score: &Score) {
        let mut keep = Vec::new();
        for (&i, &v) in pending.iter().zip(&score.values) {
            if v == 0 {
                keep.push(i);
            }
        }
        *pending = keep;
    }

    /// Best candidate with the given coefficient bound, by increasing support
    /// size. Once something useful is found, larger supports are only
    /// examined for `LOOKAHEAD` more candidates.
    fn scan_bound(
        &mut self,
        basis: &[Matrix<DElement>],
        bound: i64,
        pending: &[usize],
    ) -> Result<Option<(HermForm, Score)>, SignatureError> {
        let mut best: Option<(HermForm, Score)> = None;
        let mut found_at = None;
        for weight in 1..=basis.len() {
            if let Some(start) = found_at {
                if self.evaluated - start >= LOOKAHEAD {
                    break;
                }
            }
            let level = match self.scan_level(basis, bound, weight, pending) {
                Err(SignatureError::PoolExhausted(_))
                    if best.as_ref().is_some_and(|(_, s)| s.covered > 0) =>
                {
                    break;
                }
                other => other?,
            };
            if let Some((h, score)) = level {
                if best.as_ref().is_none_or(|(_, b)| score.beats(b)) {
                    best = Some((h, score));
                }
            }
            if let Some((_, b)) = &best {
                if b.at_cap {
                    break;
                }
                if b.covered > 0 && found_at.is_none() {
                    found_at = Some(self.evaluated);
                }
            }
        }
        Ok(best)
    }

    fn scan_level(
        &mut self,
        basis: &[Matrix<DElement>],
        bound: i64,
        weight: usize,
        pending: &[usize],
    ) -> Result<Option<(HermForm, Score)>, SignatureError> {
        let mut best: Option<(HermForm, Score)> = None;
        let mut failure = None;
        for_each_combination(basis.len(), bound, weight, |coeffs| {
            if let Err(e) = self.tick(pending) {
                failure = Some(e);
                return ControlFlow::Break(());
            }
            let u = combine(self.a, basis, coeffs);
            if algebra::invert(&u).is_none() {
                return ControlFlow::Continue(());
            }
            let h = match HermForm::diagonal(self.a, &[u]) {
                Ok(h) => h,
                Err(_) => return ControlFlow::Continue(()),
            };
            match self.score(&h, pending) {
                Ok(score) => {
                    let stop = score.at_cap;
                    if best.as_ref().is_none_or(|(_, b)| score.beats(b)) {
                        best = Some((h, score));
                    }
                    if stop {
                        ControlFlow::Break(())
                    } else {
                        ControlFlow::Continue(())
                    }
                }
                Err(e) => {
                    failure = Some(e);
                    ControlFlow::Break(())
                }
            }
        });
        match failure {
            // a budget overrun after a useful candidate still reports the candidate
            Some(SignatureError::PoolExhausted(_))
                if best.as_ref().is_some_and(|(_, s)| s.covered > 0) =>
            {
                Ok(best)
            }
            Some(e) => Err(e),
            None => Ok(best),
        }
    }
}

fn combine(
    a: &AlgebraWithInvolution,
    basis: &[Matrix<DElement>],
    coeffs: &[(usize, i64)],
) -> Matrix<DElement> {
    let field = a.field();
    let mut acc = Matrix::zeros(a.m(), a.m(), &a.division().zero());
    for &(i, c) in coeffs {
        let c = FieldElement::from_integer(field, c);
        acc = acc.add(&basis[i].map(|x| x.scale(&c)));
    }
    acc
}

/// Visits coefficient vectors on `t` basis elements with exactly `weight`
/// nonzero entries, all in `[-bound, bound]`, at least one of absolute value `bound`.
fn for_each_combination(
    t: usize,
    bound: i64,
    weight: usize,
    mut visit: impl FnMut(&[(usize, i64)]) -> ControlFlow<()>,
) {
    if weight == 0 || weight > t {
        return;
    }
    // values in the order 1, -1, 2, -2, ...
    let values: Vec<i64> = (1..=bound).flat_map(|v| [v, -v]).collect();
    let mut support: Vec<usize> = (0..weight).collect();
    loop {
        let mut digits = vec![0usize; weight];
        'assign: loop {
            if digits.iter().any(|&d| values[d].abs() == bound) {
                let coeffs: Vec<(usize, i64)> = support
                    .iter()
                    .zip(&digits)
                    .map(|(&i, &d)| (i, values[d]))
                    .collect();
                if visit(&coeffs).is_break() {
                    return;
                }
            }
            let mut pos = weight;
            loop {
                if pos == 0 {
                    break 'assign;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < values.len() {
                    continue 'assign;
                }
                digits[pos] = 0;
            }
        }
        // next support subset in lexicographic order
        let mut i = weight;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if support[i] < t - weight + i {
                support[i] += 1;
                for j in i + 1..weight {
                    support[j] = support[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn collect(t: usize, bound: i64, weight: usize) -> Vec<Vec<(usize, i64)>> {
        let mut out = Vec::new();
        for_each_combination(t, bound, weight, |c| {
            out.push(c.to_vec());
            ControlFlow::Continue(())
        });
        out
    }

    #[test]
    fn combination_counts() {
        assert_eq!(collect(3, 1, 1).len(), 6);
        assert_eq!(collect(3, 1, 2).len(), 12);
        assert_eq!(collect(3, 1, 3).len(), 8);
        // bound 2, weight 1: ±2 on each of 3 slots
        assert_eq!(collect(3, 2, 1).len(), 6);
        // bound 2, weight 2: 4*4 - 2*2 assignments per support pair
        assert_eq!(collect(3, 2, 2).len(), 3 * 12);
        assert_eq!(collect(3, 1, 1)[0], vec![(0, 1)]);
        assert_eq!(collect(3, 1, 1)[1], vec![(0, -1)]);
    }
}
