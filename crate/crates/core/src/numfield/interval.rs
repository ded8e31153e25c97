use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::Rational;

/// A closed rational interval `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn point(q: Rational) -> Self {
        Interval {
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn add(&self, other: &Self) -> Self {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn neg(&self) -> Self {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().expect("nonempty").clone();
        let hi = products.iter().max().expect("nonempty").clone();
        Interval { lo, hi }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_negative() {
            Interval {
                lo: &self.hi * q,
                hi: &self.lo * q,
            }
        } else {
            Interval {
                lo: &self.lo * q,
                hi: &self.hi * q,
            }
        }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// `Some(sign)` if the interval excludes zero.
    pub fn sign(&self) -> Option<i32> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else {
            None
        }
    }

    /// Dyadic enclosure of the square roots of the points of `self`, at `bits` bits.
    ///
    /// Negative parts are clamped to zero.
    pub fn sqrt(&self, bits: u32) -> Self {
        let scale = BigInt::from(1) << (2 * bits as usize);
        let denom = BigInt::from(1) << bits as usize;
        let lo_scaled = if self.lo.is_positive() {
            (&self.lo * &scale).floor().to_integer()
        } else {
            BigInt::zero()
        };
        let hi_scaled = if self.hi.is_positive() {
            (&self.hi * &scale).ceil().to_integer()
        } else {
            BigInt::zero()
        };
        let lo = Rational::new(lo_scaled.sqrt(), denom.clone());
        let hi = Rational::new(hi_scaled.sqrt() + 1, denom);
        Interval { lo, hi }
    }

    /// Widens outward to dyadic endpoints with denominator `2^bits`.
    pub fn round_out(&self, bits: u32) -> Self {
        let denom = BigInt::from(1) << bits as usize;
        let d = Rational::from_integer(denom.clone());
        let lo = Rational::new((&self.lo * &d).floor().to_integer(), denom.clone());
        let hi = Rational::new((&self.hi * &d).ceil().to_integer(), denom);
        Interval { lo, hi }
    }
}
