use std::fmt;
use std::sync::Arc;

use super::element::{self, FieldElement};
use super::{NumFieldError, Ordering, Rational};

struct TowerData {
    parent: Option<FieldTower>,
    /// `radicands[i]` squares to generator `i`; it has `2^i` coefficients.
    radicands: Vec<Vec<Rational>>,
    names: Vec<String>,
    formally_real: bool,
}

/// A tower `Q(r1)(r2)...(rn)` of quadratic extensions, each `r_i = sqrt(a_i)`.
///
/// Cloning is cheap; towers are shared immutable values.
#[derive(Clone)]
pub struct FieldTower(Arc<TowerData>);

impl FieldTower {
    /// The rational numbers, a tower of depth zero.
    pub fn rationals() -> Self {
        FieldTower(Arc::new(TowerData {
            parent: None,
            radicands: Vec::new(),
            names: Vec::new(),
            formally_real: true,
        }))
    }

    /// Builds `Q(sqrt(a1))(sqrt(a2))...` from rational radicands, validating every step.
    pub fn from_rational_radicands(radicands: &[i64]) -> Result<Self, NumFieldError> {
        let mut tower = Self::rationals();
        for &a in radicands {
            let a = FieldElement::from_integer(&tower, a);
            tower = tower.extend(&a)?;
        }
        Ok(tower)
    }

    pub fn depth(&self) -> usize {
        self.0.radicands.len()
    }

    /// Dimension over the rationals, `2^depth`.
    pub fn degree(&self) -> usize {
        1 << self.depth()
    }

    pub fn is_formally_real(&self) -> bool {
        self.0.formally_real
    }

    pub(crate) fn radicand_slices(&self) -> &[Vec<Rational>] {
        &self.0.radicands
    }

    /// The radicand of generator `level` (0-based), as an element of the level-`level` subtower.
    pub fn radicand(&self, level: usize) -> FieldElement {
        let sub = self.subtower(level);
        FieldElement::from_coeffs(&sub, self.0.radicands[level].clone())
            .expect("radicand has subtower length")
    }

    /// The top radicand, living in the parent tower.
    pub fn top_radicand(&self) -> Option<FieldElement> {
        let depth = self.depth();
        (depth > 0).then(|| self.radicand(depth - 1))
    }

    /// Generator `level` (0-based) as an element of this tower.
    pub fn generator(&self, level: usize) -> FieldElement {
        assert!(level < self.depth(), "generator index out of range");
        let mut coeffs = vec![element::zero_coeff(); self.degree()];
        coeffs[1 << level] = element::one_coeff();
        FieldElement::from_coeffs(self, coeffs).expect("length matches")
    }

    pub fn generator_name(&self, level: usize) -> &str {
        &self.0.names[level]
    }

    pub fn generator_names(&self) -> &[String] {
        &self.0.names
    }

    pub fn parent(&self) -> Option<&FieldTower> {
        self.0.parent.as_ref()
    }

    /// The prefix of this tower with the given depth.
    pub fn subtower(&self, depth: usize) -> FieldTower {
        assert!(depth <= self.depth(), "subtower deeper than tower");
        let mut t = self;
        while t.depth() > depth {
            t = t.parent().expect("nonzero depth has a parent");
        }
        t.clone()
    }

    /// True if `base` is a prefix of this tower (including equality).
    pub fn is_extension_of(&self, base: &FieldTower) -> bool {
        self.depth() >= base.depth() && &self.subtower(base.depth()) == base
    }

    /// Adjoins `sqrt(a)`, named `r<depth+1>`.
    pub fn extend(&self, a: &FieldElement) -> Result<FieldTower, NumFieldError> {
        let name = format!("r{}", self.depth() + 1);
        self.extend_named(a, &name)
    }

    pub fn extend_named(&self, a: &FieldElement, name: &str) -> Result<FieldTower, NumFieldError> {
        self.check_radicand(a)?;
        if !self.is_formally_real() {
            return Err(NumFieldError::NotPositiveAnywhere(a.to_string()));
        }
        let positive_somewhere = self
            .orderings()?
            .iter()
            .any(|p| p.sign_of(a).map(|s| s > 0).unwrap_or(false));
        if !positive_somewhere {
            return Err(NumFieldError::NotPositiveAnywhere(a.to_string()));
        }
        Ok(self.push(a, name, true))
    }

    /// Adjoins `sqrt(a)` without requiring the result to be formally real.
    ///
    /// The resulting tower supports arithmetic only; [`FieldTower::orderings`] fails on it.
    pub fn extend_nonreal(&self, a: &FieldElement) -> Result<FieldTower, NumFieldError> {
        self.check_radicand(a)?;
        let name = format!("r{}", self.depth() + 1);
        let real = self.is_formally_real()
            && self
                .orderings()?
                .iter()
                .any(|p| p.sign_of(a).map(|s| s > 0).unwrap_or(false));
        Ok(self.push(a, &name, real))
    }

    fn check_radicand(&self, a: &FieldElement) -> Result<(), NumFieldError> {
        if a.tower() != self {
            return Err(NumFieldError::MismatchedTower);
        }
        if a.is_zero() {
            return Err(NumFieldError::ZeroRadicand);
        }
        if a.sqrt().is_some() {
            return Err(NumFieldError::SquareRadicand(a.to_string()));
        }
        Ok(())
    }

    fn push(&self, a: &FieldElement, name: &str, formally_real: bool) -> FieldTower {
        let mut radicands = self.0.radicands.clone();
        radicands.push(a.coeffs().to_vec());
        let mut names = self.0.names.clone();
        names.push(name.to_string());
        FieldTower(Arc::new(TowerData {
            parent: Some(self.clone()),
            radicands,
            names,
            formally_real,
        }))
    }

    /// All orderings (real embeddings), grouped by the ordering of the parent they extend.
    ///
    /// Within a group the positive choice of the new root comes first.
    pub fn orderings(&self) -> Result<Vec<Ordering>, NumFieldError> {
        if !self.is_formally_real() {
            return Err(NumFieldError::NoOrderings);
        }
        let Some(parent) = self.parent() else {
            return Ok(vec![Ordering::rational(self)]);
        };
        let radicand = self.top_radicand().expect("depth > 0");
        let mut out = Vec::new();
        for p in parent.orderings()? {
            if p.sign_of(&radicand)? > 0 {
                out.push(p.lift(self, super::RootSign::Positive)?);
                out.push(p.lift(self, super::RootSign::Negative)?);
            }
        }
        Ok(out)
    }

    /// Orderings of this tower restricting to `base_ordering` on a subtower.
    pub fn orderings_extending(
        &self,
        base_ordering: &Ordering,
    ) -> Result<Vec<Ordering>, NumFieldError> {
        if !self.is_extension_of(base_ordering.tower()) {
            return Err(NumFieldError::MismatchedTower);
        }
        Ok(self
            .orderings()?
            .into_iter()
            .filter(|q| q.extends(base_ordering))
            .collect())
    }
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.formally_real == other.0.formally_real
                && self.0.radicands == other.0.radicands)
    }
}

impl Eq for FieldTower {}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q")?;
        for level in 0..self.depth() {
            write!(
                f,
                "({}=sqrt({}))",
                self.0.names[level],
                self.radicand(level)
            )?;
        }
        Ok(())
    }
}

impl fmt::Display for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_extension_of_rationals() {
        let t = FieldTower::from_rational_radicands(&[2]).unwrap();
        assert_eq!(t.depth(), 1);
        assert_eq!(t.degree(), 2);
        let r = t.generator(0);
        assert_eq!(r.mul(&r), FieldElement::from_integer(&t, 2));
    }

    #[test]
    fn square_radicand_rejected() {
        let q = FieldTower::rationals();
        let four = FieldElement::from_integer(&q, 4);
        assert!(matches!(
            q.extend(&four),
            Err(NumFieldError::SquareRadicand(_))
        ));
        let quarter = FieldElement::from_ratio(&q, 9, 4);
        assert!(matches!(
            q.extend(&quarter),
            Err(NumFieldError::SquareRadicand(_))
        ));
    }

    #[test]
    fn zero_and_negative_radicands() {
        let q = FieldTower::rationals();
        assert_eq!(
            q.extend(&FieldElement::zero(&q)),
            Err(NumFieldError::ZeroRadicand)
        );
        let minus_one = FieldElement::from_integer(&q, -1);
        assert!(matches!(
            q.extend(&minus_one),
            Err(NumFieldError::NotPositiveAnywhere(_))
        ));
        let k = q.extend_nonreal(&minus_one).unwrap();
        assert!(!k.is_formally_real());
        assert_eq!(k.orderings().unwrap_err(), NumFieldError::NoOrderings);
    }

    #[test]
    fn nested_radicand_square_detected() {
        // 3 + 2*sqrt(2) = (1 + sqrt(2))^2
        let t = FieldTower::from_rational_radicands(&[2]).unwrap();
        let a = FieldElement::from_integer(&t, 3).add(&t.generator(0).scale_int(2));
        assert!(matches!(
            t.extend(&a),
            Err(NumFieldError::SquareRadicand(_))
        ));
        // 2 is a square in Q(sqrt 2), 6 is not a square in Q(sqrt 2) but 6 / 3 is
        let six = FieldElement::from_integer(&t, 6);
        assert!(t.extend(&six).is_ok());
        let eight = FieldElement::from_integer(&t, 8);
        assert!(matches!(
            t.extend(&eight),
            Err(NumFieldError::SquareRadicand(_))
        ));
    }

    #[test]
    fn ordering_counts() {
        assert_eq!(FieldTower::rationals().orderings().unwrap().len(), 1);
        for p in [2, 3, 5] {
            let t = FieldTower::from_rational_radicands(&[p]).unwrap();
            assert_eq!(t.orderings().unwrap().len(), 2, "Q(sqrt {p})");
        }
        let t = FieldTower::from_rational_radicands(&[2, 3]).unwrap();
        assert_eq!(t.orderings().unwrap().len(), 4);
    }

    #[test]
    fn nested_tower_has_two_orderings() {
        let t = FieldTower::from_rational_radicands(&[2]).unwrap();
        let a = t.generator(0).sub(&FieldElement::one(&t));
        let t2 = t.extend(&a).unwrap();
        assert_eq!(t2.depth(), 2);
        let ords = t2.orderings().unwrap();
        assert_eq!(ords.len(), 2);
        for p in &ords {
            assert_eq!(p.root_signs()[0], crate::numfield::RootSign::Positive);
        }
    }

    #[test]
    fn subtower_prefix_relation() {
        let t = FieldTower::from_rational_radicands(&[2, 3]).unwrap();
        let q = FieldTower::rationals();
        assert!(t.is_extension_of(&q));
        assert!(t.is_extension_of(&t.subtower(1)));
        let other = FieldTower::from_rational_radicands(&[3]).unwrap();
        assert!(!t.is_extension_of(&other));
    }
}
