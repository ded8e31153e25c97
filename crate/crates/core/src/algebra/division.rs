use std::fmt;
use std::sync::Arc;

use crate::matrix::{DivisionRing, InvolutiveRing, Ring};
use crate::numfield::{FieldElement, FieldTower, NumFieldError, Ordering};

use super::AlgebraError;

/// Which division algebra `D` underlies the algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DivisionKind {
    BaseField,
    /// `(a, b)_F` with `i^2 = a`, `j^2 = b`, `ij = -ji = k`.
    Quaternion {
        a: FieldElement,
        b: FieldElement,
    },
    /// `K = F(s)` with `s^2 = d`.
    Quadratic {
        d: FieldElement,
    },
}

struct DivisionInner {
    field: FieldTower,
    kind: DivisionKind,
}

/// A division algebra presentation over a tower field, with its canonical
/// involution `ϑ` (identity, quaternion conjugation, or `s -> -s`).
#[derive(Clone)]
pub struct DivisionData(Arc<DivisionInner>);

impl DivisionData {
    pub fn base_field(field: &FieldTower) -> Self {
        DivisionData(Arc::new(DivisionInner {
            field: field.clone(),
            kind: DivisionKind::BaseField,
        }))
    }

    /// The quaternion presentation `(a, b)_F`; splitting is checked by the algebra builder.
    pub fn quaternion(a: FieldElement, b: FieldElement) -> Result<Self, AlgebraError> {
        if a.tower() != b.tower() {
            return Err(NumFieldError::MismatchedTower.into());
        }
        if a.is_zero() || b.is_zero() {
            return Err(AlgebraError::ZeroParameter);
        }
        let field = a.tower().clone();
        Ok(DivisionData(Arc::new(DivisionInner {
            field,
            kind: DivisionKind::Quaternion { a, b },
        })))
    }

    /// `K = F(sqrt d)`; `d` must not be a square in `F`.
    pub fn quadratic(d: FieldElement) -> Result<Self, AlgebraError> {
        if d.is_zero() {
            return Err(AlgebraError::ZeroParameter);
        }
        if d.sqrt().is_some() {
            return Err(AlgebraError::SquareD(d.to_string()));
        }
        let field = d.tower().clone();
        Ok(DivisionData(Arc::new(DivisionInner {
            field,
            kind: DivisionKind::Quadratic { d },
        })))
    }

    pub fn field(&self) -> &FieldTower {
        &self.0.field
    }

    pub fn kind(&self) -> &DivisionKind {
        &self.0.kind
    }

    /// Dimension over `F`.
    pub fn dim(&self) -> usize {
        match self.0.kind {
            DivisionKind::BaseField => 1,
            DivisionKind::Quadratic { .. } => 2,
            DivisionKind::Quaternion { .. } => 4,
        }
    }

    pub fn is_quaternion(&self) -> bool {
        matches!(self.0.kind, DivisionKind::Quaternion { .. })
    }

    pub fn is_quadratic(&self) -> bool {
        matches!(self.0.kind, DivisionKind::Quadratic { .. })
    }

    pub fn element(&self, coords: Vec<FieldElement>) -> Result<DElement, AlgebraError> {
        if coords.len() != self.dim() {
            return Err(AlgebraError::DimensionMismatch);
        }
        if coords.iter().any(|c| c.tower() != self.field()) {
            return Err(NumFieldError::MismatchedTower.into());
        }
        Ok(DElement {
            owner: self.clone(),
            coords,
        })
    }

    pub fn zero(&self) -> DElement {
        DElement {
            owner: self.clone(),
            coords: vec![FieldElement::zero(self.field()); self.dim()],
        }
    }

    pub fn one(&self) -> DElement {
        self.scalar(FieldElement::one(self.field()))
    }

    pub fn scalar(&self, x: FieldElement) -> DElement {
        let mut coords = vec![FieldElement::zero(self.field()); self.dim()];
        coords[0] = x;
        DElement {
            owner: self.clone(),
            coords,
        }
    }

    pub fn integer(&self, n: i64) -> DElement {
        self.scalar(FieldElement::from_integer(self.field(), n))
    }

    /// The `F`-basis `{1}`, `{1, s}` or `{1, i, j, k}`.
    pub fn basis(&self) -> Vec<DElement> {
        (0..self.dim())
            .map(|t| {
                let mut coords = vec![FieldElement::zero(self.field()); self.dim()];
                coords[t] = FieldElement::one(self.field());
                DElement {
                    owner: self.clone(),
                    coords,
                }
            })
            .collect()
    }

    /// Basis element `t` (0 = 1, then `i, j, k` or `s`).
    pub fn unit(&self, t: usize) -> DElement {
        self.basis().swap_remove(t)
    }

    /// The same presentation over an extension tower.
    pub fn extend_scalars(&self, ext: &FieldTower) -> Result<Self, AlgebraError> {
        if !ext.is_extension_of(self.field()) {
            return Err(AlgebraError::NotAnExtension);
        }
        let kind = match &self.0.kind {
            DivisionKind::BaseField => DivisionKind::BaseField,
            DivisionKind::Quaternion { a, b } => DivisionKind::Quaternion {
                a: a.embed(ext)?,
                b: b.embed(ext)?,
            },
            DivisionKind::Quadratic { d } => DivisionKind::Quadratic { d: d.embed(ext)? },
        };
        Ok(DivisionData(Arc::new(DivisionInner {
            field: ext.clone(),
            kind,
        })))
    }

    /// Quaternion algebra ramified at `p`: both parameters negative.
    pub fn is_ramified_at(&self, p: &Ordering) -> Result<bool, AlgebraError> {
        match &self.0.kind {
            DivisionKind::Quaternion { a, b } => Ok(p.sign_of(a)? < 0 && p.sign_of(b)? < 0),
            _ => Ok(false),
        }
    }

    /// Embeds an element of this algebra into its scalar extension.
    pub fn embed_element(
        &self,
        x: &DElement,
        ext: &DivisionData,
    ) -> Result<DElement, AlgebraError> {
        let coords = x
            .coords
            .iter()
            .map(|c| c.embed(ext.field()))
            .collect::<Result<Vec<_>, _>>()?;
        ext.element(coords)
    }

    /// Factors `f_t` with `Trd(x e_t) = f_t x_t`: `[1]` for a field,
    /// `[2, 2a, 2b, -2ab]` for `(a, b)`. The quadratic case is second kind and has none.
    pub fn trace_pairing_factors(&self) -> Option<Vec<FieldElement>> {
        match self.kind() {
            DivisionKind::BaseField => Some(vec![FieldElement::one(self.field())]),
            DivisionKind::Quaternion { a, b } => {
                let two = FieldElement::from_integer(self.field(), 2);
                Some(vec![
                    two.clone(),
                    a.scale_int(2),
                    b.scale_int(2),
                    a.mul(b).scale_int(-2),
                ])
            }
            DivisionKind::Quadratic { .. } => None,
        }
    }

    /// Symbol used for basis element `t` in printed elements.
    pub fn unit_name(&self, t: usize) -> &'static str {
        match (&self.0.kind, t) {
            (_, 0) => "",
            (DivisionKind::Quadratic { .. }, 1) => "s",
            (DivisionKind::Quaternion { .. }, 1) => "i",
            (DivisionKind::Quaternion { .. }, 2) => "j",
            (DivisionKind::Quaternion { .. }, 3) => "k",
            _ => unreachable!("basis index out of range"),
        }
    }
}

impl PartialEq for DivisionData {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.field == other.0.field && self.0.kind == other.0.kind)
    }
}

impl Eq for DivisionData {}

impl fmt::Debug for DivisionData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            DivisionKind::BaseField => write!(f, "{}", self.0.field),
            DivisionKind::Quaternion { a, b } => write!(f, "({}, {})_{}", a, b, self.0.field),
            DivisionKind::Quadratic { d } => write!(f, "{}(s=sqrt({}))", self.0.field, d),
        }
    }
}

/// An element of `D`, stored by coordinates on [`DivisionData::basis`].
#[derive(Clone, PartialEq)]
pub struct DElement {
    owner: DivisionData,
    coords: Vec<FieldElement>,
}

impl DElement {
    pub fn owner(&self) -> &DivisionData {
        &self.owner
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn scalar_part(&self) -> &FieldElement {
        &self.coords[0]
    }

    pub fn is_scalar(&self) -> bool {
        self.coords[1..].iter().all(FieldElement::is_zero)
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        DElement {
            owner: self.owner.clone(),
            coords: self.coords.iter().map(|x| x.mul(c)).collect(),
        }
    }

    /// Reduced norm; for the quadratic case the field norm `K -> F`.
    pub fn norm(&self) -> FieldElement {
        let x = &self.coords;
        match self.owner.kind() {
            DivisionKind::BaseField => x[0].clone(),
            DivisionKind::Quadratic { d } => x[0].square().sub(&d.mul(&x[1].square())),
            DivisionKind::Quaternion { a, b } => x[0]
                .square()
                .sub(&a.mul(&x[1].square()))
                .sub(&b.mul(&x[2].square()))
                .add(&a.mul(b).mul(&x[3].square())),
        }
    }

    /// Reduced trace, as an element of the center of `D`.
    pub fn reduced_trace(&self) -> Self {
        match self.owner.kind() {
            DivisionKind::BaseField | DivisionKind::Quadratic { .. } => self.clone(),
            DivisionKind::Quaternion { .. } => self.owner.scalar(self.coords[0].scale_int(2)),
        }
    }
}

impl Ring for DElement {
    fn zero_like(&self) -> Self {
        self.owner.zero()
    }

    fn one_like(&self) -> Self {
        self.owner.one()
    }

    fn is_zero(&self) -> bool {
        self.coords.iter().all(FieldElement::is_zero)
    }

    fn add(&self, other: &Self) -> Self {
        debug_assert!(self.owner == other.owner);
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.add(b))
            .collect();
        DElement {
            owner: self.owner.clone(),
            coords,
        }
    }

    fn sub(&self, other: &Self) -> Self {
        debug_assert!(self.owner == other.owner);
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.sub(b))
            .collect();
        DElement {
            owner: self.owner.clone(),
            coords,
        }
    }

    fn mul(&self, other: &Self) -> Self {
        debug_assert!(self.owner == other.owner);
        let x = &self.coords;
        let y = &other.coords;
        let coords = match self.owner.kind() {
            DivisionKind::BaseField => vec![x[0].mul(&y[0])],
            DivisionKind::Quadratic { d } => {
                vec![
                    x[0].mul(&y[0]).add(&d.mul(&x[1].mul(&y[1]))),
                    x[0].mul(&y[1]).add(&x[1].mul(&y[0])),
                ]
            }
            DivisionKind::Quaternion { a, b } => {
                let ab = a.mul(b);
                let z0 = x[0]
                    .mul(&y[0])
                    .add(&a.mul(&x[1].mul(&y[1])))
                    .add(&b.mul(&x[2].mul(&y[2])))
                    .sub(&ab.mul(&x[3].mul(&y[3])));
                let z1 = x[0]
                    .mul(&y[1])
                    .add(&x[1].mul(&y[0]))
                    .sub(&b.mul(&x[2].mul(&y[3])))
                    .add(&b.mul(&x[3].mul(&y[2])));
                let z2 = x[0]
                    .mul(&y[2])
                    .add(&x[2].mul(&y[0]))
                    .add(&a.mul(&x[1].mul(&y[3])))
                    .sub(&a.mul(&x[3].mul(&y[1])));
                let z3 = x[0]
                    .mul(&y[3])
                    .add(&x[3].mul(&y[0]))
                    .add(&x[1].mul(&y[2]))
                    .sub(&x[2].mul(&y[1]));
                vec![z0, z1, z2, z3]
            }
        };
        DElement {
            owner: self.owner.clone(),
            coords,
        }
    }

    fn neg(&self) -> Self {
        DElement {
            owner: self.owner.clone(),
            coords: self.coords.iter().map(FieldElement::neg).collect(),
        }
    }
}

impl DivisionRing for DElement {
    /// `conj(x) / N(x)`; `None` when the norm vanishes (zero or a zero divisor).
    fn try_inv(&self) -> Option<Self> {
        if matches!(self.owner.kind(), DivisionKind::BaseField) {
            let inv = self.coords[0].try_inv().ok()?;
            return Some(DElement {
                owner: self.owner.clone(),
                coords: vec![inv],
            });
        }
        let n = self.norm();
        let n_inv = n.try_inv().ok()?;
        Some(self.conj().scale(&n_inv))
    }
}

impl InvolutiveRing for DElement {
    fn conj(&self) -> Self {
        let coords = match self.owner.kind() {
            DivisionKind::BaseField => self.coords.clone(),
            _ => {
                let mut c = self.coords.clone();
                for x in &mut c[1..] {
                    *x = x.neg();
                }
                c
            }
        };
        DElement {
            owner: self.owner.clone(),
            coords,
        }
    }
}

impl fmt::Debug for DElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Renders `c0 + c1*i + c2*j + c3*k` (or `c0 + c1*s`), parenthesizing compound coefficients.
impl fmt::Display for DElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (t, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let text = c.to_string();
            let compound = text.trim_start_matches('-').contains([' ']);
            let unit = self.owner.unit_name(t);
            let (negative, body) = if !compound && text.starts_with('-') {
                (true, text[1..].to_string())
            } else {
                (false, text.clone())
            };
            let body = if compound && !unit.is_empty() {
                format!("({body})")
            } else {
                body
            };
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            if unit.is_empty() {
                write!(f, "{body}")?;
            } else if body == "1" {
                write!(f, "{unit}")?;
            } else {
                write!(f, "{body}*{unit}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
