//! Exact arithmetic in towers of square-root extensions of the rationals.
//!
//! A [`FieldTower`] of depth `n` is `Q(r1, ..., rn)` where each generator
//! satisfies `r_i^2 = a_i` for a radicand `a_i` living in the depth-`(i-1)`
//! subtower. Elements are stored on the power-product basis, so an element of
//! depth `n` carries `2^n` rational coefficients. Bit `i` of a coefficient
//! index selects generator `r_{i+1}`; the elements of a subtower are exactly
//! the vectors whose upper coefficients vanish.
//!
//! Real embeddings are described by [`Ordering`]: one sign per generator plus
//! rational interval enclosures of the embedded generators. Signs of elements
//! are decided exactly by a symbolic zero test followed by interval refinement.

mod element;
mod interval;
mod ordering;
mod tower;

pub use element::FieldElement;
pub use interval::Interval;
pub use ordering::{Ordering, RootSign};
pub use tower::FieldTower;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// Arbitrary precision rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumFieldError {
    #[error("radicand is zero")]
    ZeroRadicand,
    #[error("radicand {0} is already a square in the tower")]
    SquareRadicand(String),
    #[error("radicand {0} is negative at every ordering; the tower would not be formally real")]
    NotPositiveAnywhere(String),
    #[error("operands live in different towers")]
    MismatchedTower,
    #[error("division by zero")]
    DivisionByZero,
    #[error("the base field has no extension step to trace down")]
    BaseTower,
    #[error("tower is not formally real and has no orderings")]
    NoOrderings,
    #[error("element does not lie in the requested subtower")]
    NotInSubtower,
}

/// Exact square root of a rational, if it is a perfect square.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    if q.is_zero() {
        return Some(Rational::zero());
    }
    let n = exact_isqrt(q.numer())?;
    let d = exact_isqrt(q.denom())?;
    Some(Rational::new(n, d))
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Formats a rational as `p` or `p/q` in lowest terms.
pub fn format_rational(q: &Rational) -> String {
    if q.denom() == &BigInt::from(1) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
