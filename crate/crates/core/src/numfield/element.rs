use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{format_rational, rational_sqrt, FieldTower, NumFieldError, Rational};

pub(crate) fn zero_coeff() -> Rational {
    Rational::zero()
}

pub(crate) fn one_coeff() -> Rational {
    Rational::one()
}

/// An element of a [`FieldTower`] on the power-product basis.
#[derive(Clone)]
pub struct FieldElement {
    tower: FieldTower,
    coeffs: Vec<Rational>,
}

impl FieldElement {
    pub fn from_coeffs(tower: &FieldTower, coeffs: Vec<Rational>) -> Result<Self, NumFieldError> {
        if coeffs.len() != tower.degree() {
            return Err(NumFieldError::MismatchedTower);
        }
        Ok(FieldElement {
            tower: tower.clone(),
            coeffs,
        })
    }

    pub fn zero(tower: &FieldTower) -> Self {
        FieldElement {
            tower: tower.clone(),
            coeffs: vec![Rational::zero(); tower.degree()],
        }
    }

    pub fn one(tower: &FieldTower) -> Self {
        Self::from_rational(tower, Rational::one())
    }

    pub fn from_rational(tower: &FieldTower, q: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); tower.degree()];
        coeffs[0] = q;
        FieldElement {
            tower: tower.clone(),
            coeffs,
        }
    }

    pub fn from_integer(tower: &FieldTower, n: i64) -> Self {
        Self::from_rational(tower, Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(tower: &FieldTower, p: i64, q: i64) -> Self {
        Self::from_rational(tower, Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value if the element lies in the base field.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coeffs[0])
    }

    /// Smallest subtower depth containing this element.
    pub fn level(&self) -> usize {
        match self.coeffs.iter().rposition(|c| !c.is_zero()) {
            None | Some(0) => 0,
            Some(i) => usize::BITS as usize - i.leading_zeros() as usize,
        }
    }

    /// Embeds into an extension tower (zero-padding the coefficients).
    pub fn embed(&self, ext: &FieldTower) -> Result<Self, NumFieldError> {
        if !ext.is_extension_of(&self.tower) {
            return Err(NumFieldError::MismatchedTower);
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(ext.degree(), Rational::zero());
        Ok(FieldElement {
            tower: ext.clone(),
            coeffs,
        })
    }

    /// Views the element inside a subtower, if it lies there.
    pub fn restrict(&self, sub: &FieldTower) -> Result<Self, NumFieldError> {
        if !self.tower.is_extension_of(sub) {
            return Err(NumFieldError::MismatchedTower);
        }
        if self.coeffs[sub.degree()..].iter().any(|c| !c.is_zero()) {
            return Err(NumFieldError::NotInSubtower);
        }
        Ok(FieldElement {
            tower: sub.clone(),
            coeffs: self.coeffs[..sub.degree()].to_vec(),
        })
    }

    fn check(&self, other: &Self) -> Result<(), NumFieldError> {
        if self.tower == other.tower {
            Ok(())
        } else {
            Err(NumFieldError::MismatchedTower)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, NumFieldError> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(FieldElement {
            tower: self.tower.clone(),
            coeffs,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, NumFieldError> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(FieldElement {
            tower: self.tower.clone(),
            coeffs,
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, NumFieldError> {
        self.check(other)?;
        let coeffs = mul_slices(&self.coeffs, &other.coeffs, self.tower.radicand_slices());
        Ok(FieldElement {
            tower: self.tower.clone(),
            coeffs,
        })
    }

    pub fn try_inv(&self) -> Result<Self, NumFieldError> {
        if self.is_zero() {
            return Err(NumFieldError::DivisionByZero);
        }
        let coeffs = inv_slice(&self.coeffs, self.tower.radicand_slices());
        Ok(FieldElement {
            tower: self.tower.clone(),
            coeffs,
        })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, NumFieldError> {
        self.try_mul(&other.try_inv()?)
    }

    /// Panicking addition; operands must share a tower.
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other)
            .expect("field elements from different towers")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.try_sub(other)
            .expect("field elements from different towers")
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other)
            .expect("field elements from different towers")
    }

    pub fn neg(&self) -> Self {
        FieldElement {
            tower: self.tower.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        FieldElement {
            tower: self.tower.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&Rational::from_integer(BigInt::from(n)))
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// An exact square root inside the same tower, if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        let coeffs = sqrt_slice(&self.coeffs, self.tower.radicand_slices())?;
        Some(FieldElement {
            tower: self.tower.clone(),
            coeffs,
        })
    }

    /// `Tr_{F(r)/F}` for the topmost step `F(r)/F`: twice the part free of `r`.
    pub fn trace_step(&self) -> Result<Self, NumFieldError> {
        let parent = self.tower.parent().ok_or(NumFieldError::BaseTower)?;
        let half = parent.degree();
        let coeffs = self.coeffs[..half].iter().map(|c| c + c).collect();
        Ok(FieldElement {
            tower: parent.clone(),
            coeffs,
        })
    }

    /// Conjugation of the topmost step, `u + v r -> u - v r`.
    pub fn conjugate_step(&self) -> Result<Self, NumFieldError> {
        let depth = self.tower.depth();
        if depth == 0 {
            return Err(NumFieldError::BaseTower);
        }
        let half = self.coeffs.len() / 2;
        let mut coeffs = self.coeffs.clone();
        for c in &mut coeffs[half..] {
            *c = -&*c;
        }
        Ok(FieldElement {
            tower: self.tower.clone(),
            coeffs,
        })
    }

    /// Splits `x = u + v r` over the topmost step into `(u, v)` in the parent tower.
    pub fn split_step(&self) -> Result<(Self, Self), NumFieldError> {
        let parent = self.tower.parent().ok_or(NumFieldError::BaseTower)?;
        let half = parent.degree();
        Ok((
            FieldElement {
                tower: parent.clone(),
                coeffs: self.coeffs[..half].to_vec(),
            },
            FieldElement {
                tower: parent.clone(),
                coeffs: self.coeffs[half..].to_vec(),
            },
        ))
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.tower == other.tower && self.coeffs == other.coeffs
    }
}

impl Eq for FieldElement {}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Renders e.g. `3 + 1/2*r1 - r1*r2`; `0` for zero.
impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.tower.generator_names();
        let mut first = true;
        for (idx, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let monomial: Vec<&str> = (0..names.len())
                .filter(|b| idx & (1 << b) != 0)
                .map(|b| names[b].as_str())
                .collect();
            let negative = c < &Rational::zero();
            let abs = if negative { -c } else { c.clone() };
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            if monomial.is_empty() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", monomial.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), monomial.join("*"))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn all_zero(x: &[Rational]) -> bool {
    x.iter().all(Zero::is_zero)
}

fn add_into(acc: &mut [Rational], x: &[Rational]) {
    for (a, b) in acc.iter_mut().zip(x) {
        if !b.is_zero() {
            *a += b;
        }
    }
}

/// Product in the tower whose radicands are `rads`; `x.len() == y.len() == 2^rads.len()`.
pub(crate) fn mul_slices(x: &[Rational], y: &[Rational], rads: &[Vec<Rational>]) -> Vec<Rational> {
    let depth = rads.len();
    if depth == 0 {
        return vec![&x[0] * &y[0]];
    }
    let half = x.len() / 2;
    if all_zero(x) || all_zero(y) {
        return vec![Rational::zero(); x.len()];
    }
    let (u1, v1) = x.split_at(half);
    let (u2, v2) = y.split_at(half);
    let sub = &rads[..depth - 1];
    let v1_zero = all_zero(v1);
    let v2_zero = all_zero(v2);
    let mut low = mul_slices(u1, u2, sub);
    if !v1_zero && !v2_zero {
        let vv = mul_slices(v1, v2, sub);
        add_into(&mut low, &mul_slices(&rads[depth - 1], &vv, sub));
    }
    let mut high = vec![Rational::zero(); half];
    if !v2_zero {
        add_into(&mut high, &mul_slices(u1, v2, sub));
    }
    if !v1_zero {
        add_into(&mut high, &mul_slices(v1, u2, sub));
    }
    low.extend(high);
    low
}

/// Inverse via the conjugate: `1/(u + v r) = (u - v r)/(u^2 - a v^2)`.
pub(crate) fn inv_slice(x: &[Rational], rads: &[Vec<Rational>]) -> Vec<Rational> {
    let depth = rads.len();
    if depth == 0 {
        return vec![x[0].recip()];
    }
    let half = x.len() / 2;
    let (u, v) = x.split_at(half);
    let sub = &rads[..depth - 1];
    if all_zero(v) {
        let mut out = inv_slice(u, sub);
        out.resize(x.len(), Rational::zero());
        return out;
    }
    let uu = mul_slices(u, u, sub);
    let vv = mul_slices(v, v, sub);
    let avv = mul_slices(&rads[depth - 1], &vv, sub);
    let norm: Vec<Rational> = uu.iter().zip(&avv).map(|(p, q)| p - q).collect();
    let norm_inv = inv_slice(&norm, sub);
    let mut out = mul_slices(u, &norm_inv, sub);
    let neg_v: Vec<Rational> = v.iter().map(|c| -c).collect();
    out.extend(mul_slices(&neg_v, &norm_inv, sub));
    out
}

/// Exact square root in the tower, if one exists.
///
/// With `x = u + v r` and a candidate root `p + q r`, the conditions are
/// `p^2 + a q^2 = u` and `2 p q = v`. For `v != 0` this forces
/// `q^2 = (u +- sqrt(u^2 - a v^2)) / (2a)`, so the search recurses into the parent.
pub(crate) fn sqrt_slice(x: &[Rational], rads: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let depth = rads.len();
    if depth == 0 {
        return rational_sqrt(&x[0]).map(|r| vec![r]);
    }
    if all_zero(x) {
        return Some(vec![Rational::zero(); x.len()]);
    }
    let half = x.len() / 2;
    let (u, v) = x.split_at(half);
    let sub = &rads[..depth - 1];
    let a = &rads[depth - 1];
    if all_zero(v) {
        if let Some(p) = sqrt_slice(u, sub) {
            let mut out = p;
            out.resize(x.len(), Rational::zero());
            return Some(out);
        }
        let u_over_a = mul_slices(u, &inv_slice(a, sub), sub);
        let q = sqrt_slice(&u_over_a, sub)?;
        let mut out = vec![Rational::zero(); half];
        out.extend(q);
        return Some(out);
    }
    let uu = mul_slices(u, u, sub);
    let vv = mul_slices(v, v, sub);
    let avv = mul_slices(a, &vv, sub);
    let disc: Vec<Rational> = uu.iter().zip(&avv).map(|(p, q)| p - q).collect();
    let t = sqrt_slice(&disc, sub)?;
    let two_a: Vec<Rational> = a.iter().map(|c| c + c).collect();
    let two_a_inv = inv_slice(&two_a, sub);
    for sign in [1, -1] {
        let num: Vec<Rational> = u
            .iter()
            .zip(&t)
            .map(|(p, q)| if sign > 0 { p + q } else { p - q })
            .collect();
        if all_zero(&num) {
            continue;
        }
        let q_sq = mul_slices(&num, &two_a_inv, sub);
        let Some(q) = sqrt_slice(&q_sq, sub) else {
            continue;
        };
        // p = v / (2 q)
        let two_q: Vec<Rational> = q.iter().map(|c| c + c).collect();
        let p = mul_slices(v, &inv_slice(&two_q, sub), sub);
        let mut cand = p;
        cand.extend(q);
        if mul_slices(&cand, &cand, rads) == x {
            return Some(cand);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q2() -> FieldTower {
        FieldTower::from_rational_radicands(&[2]).unwrap()
    }

    #[test]
    fn basic_arithmetic() {
        let q = FieldTower::rationals();
        let a = FieldElement::from_ratio(&q, 1, 2);
        let b = FieldElement::from_ratio(&q, 1, 3);
        assert_eq!(a.add(&b), FieldElement::from_ratio(&q, 5, 6));

        let t = q2();
        let r = t.generator(0);
        assert_eq!(r.mul(&r), FieldElement::from_integer(&t, 2));
        let half_r = r.scale(&Rational::new(1.into(), 2.into()));
        assert_eq!(r.try_inv().unwrap(), half_r);
    }

    #[test]
    fn inverse_in_depth_two() {
        let t = FieldTower::from_rational_radicands(&[2, 3]).unwrap();
        let x = FieldElement::from_integer(&t, 1)
            .add(&t.generator(0))
            .add(&t.generator(1).scale_int(2))
            .add(&t.generator(0).mul(&t.generator(1)));
        let inv = x.try_inv().unwrap();
        assert!(x.mul(&inv).is_one());
    }

    #[test]
    fn division_by_zero() {
        let t = q2();
        assert_eq!(
            FieldElement::zero(&t).try_inv(),
            Err(NumFieldError::DivisionByZero)
        );
    }

    #[test]
    fn mismatched_towers() {
        let a = FieldElement::one(&q2());
        let b = FieldElement::one(&FieldTower::from_rational_radicands(&[3]).unwrap());
        assert_eq!(a.try_add(&b), Err(NumFieldError::MismatchedTower));
    }

    #[test]
    fn trace_step_values() {
        let t = q2();
        let r = t.generator(0);
        let x = FieldElement::from_integer(&t, 3).add(&r.scale_int(4));
        assert_eq!(
            x.trace_step().unwrap().as_rational().unwrap(),
            &Rational::from_integer(6.into())
        );
        assert!(r.trace_step().unwrap().is_zero());
        let one = FieldElement::one(&t);
        let y = one.add(&r).mul(&one.sub(&r));
        assert_eq!(
            y.trace_step().unwrap().as_rational().unwrap(),
            &Rational::from_integer((-2).into())
        );
        assert_eq!(
            FieldElement::one(&FieldTower::rationals()).trace_step(),
            Err(NumFieldError::BaseTower)
        );
    }

    #[test]
    fn square_roots() {
        let t = FieldTower::from_rational_radicands(&[2, 3]).unwrap();
        let x = FieldElement::from_integer(&t, 1)
            .add(&t.generator(0))
            .add(&t.generator(1));
        let sq = x.square();
        let r = sq.sqrt().unwrap();
        assert!(r == x || r == x.neg());
        // 6 = (sqrt2 sqrt3)^2
        let six = FieldElement::from_integer(&t, 6);
        let s = six.sqrt().unwrap();
        assert_eq!(s.square(), six);
        assert!(FieldElement::from_integer(&t, 5).sqrt().is_none());
        assert!(FieldElement::from_integer(&t, -1).sqrt().is_none());
    }

    #[test]
    fn display_is_readable() {
        let t = FieldTower::from_rational_radicands(&[2, 3]).unwrap();
        let x = FieldElement::from_ratio(&t, -1, 2)
            .add(&t.generator(0))
            .sub(&t.generator(0).mul(&t.generator(1)));
        assert_eq!(x.to_string(), "-1/2 + r1 - r1*r2");
        assert_eq!(FieldElement::zero(&t).to_string(), "0");
    }

    #[test]
    fn level_of_elements() {
        let t = FieldTower::from_rational_radicands(&[2, 3]).unwrap();
        assert_eq!(FieldElement::one(&t).level(), 0);
        assert_eq!(t.generator(0).level(), 1);
        assert_eq!(t.generator(1).level(), 2);
    }
}
