//! Algebras with involution `(M_m(D), σ)` with `σ(X) = Φ₀ ϑ(X)^t Φ₀⁻¹` for a
//! division algebra `D` that is the base field, a quaternion algebra, or a
//! quadratic extension.

mod division;
mod split;
mod trace;

pub use division::{DElement, DivisionData, DivisionKind};
pub use split::{split_quaternion, QuaternionSplitting, SplitRadicand};
pub use trace::{trace_form, Involution, TraceForm};

use thiserror::Error;

use crate::matrix::{self, Matrix, Ring};
use crate::numfield::{FieldElement, FieldTower, NumFieldError, Ordering};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("Φ₀ is not ε₀-hermitian: ϑ(Φ₀)^t differs from ε₀·Φ₀")]
    NotEpsilonHermitian,
    #[error("Φ₀ is singular")]
    SingularPhi0,
    #[error("quaternion algebra ({0}) is split")]
    SplitQuaternion(String),
    #[error("{0} is a square in the base field")]
    SquareD(String),
    #[error("algebra parameter is zero")]
    ZeroParameter,
    #[error("epsilon0 must be 1 or -1")]
    BadEpsilon,
    #[error("matrix dimensions do not match the algebra")]
    DimensionMismatch,
    #[error("tower is not an extension of the algebra's field")]
    NotAnExtension,
    #[error("map failed the involution self-check")]
    NotInvolution,
    #[error("splitting radicand must be a or b and positive somewhere")]
    InvalidRadicand,
    #[error(transparent)]
    Field(#[from] NumFieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InvolutionType {
    Orthogonal,
    Symplectic,
    Unitary,
}

impl InvolutionType {
    pub fn is_first_kind(self) -> bool {
        self != InvolutionType::Unitary
    }
}

/// How `D ⊗ F_P` looks at an ordering `P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocalType {
    /// `D_P` is `F_P` or `M_2(F_P)`.
    Split,
    /// `D_P` is the real quaternions.
    Hamilton,
    /// `D = F(sqrt d)` with `d <_P 0`.
    Complex,
    /// `D = F(sqrt d)` with `d >_P 0`, so `D_P = F_P × F_P`.
    Exchange,
}

/// Whether the stored `D` is known to be a division algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DivisionStatus {
    Verified,
    /// Neither a splitting witness nor a negative-definite norm form was found.
    Unverified,
    /// The presentation became split after extending scalars.
    Split,
}

/// `(M_m(D), ad_{φ₀})` with `ϑ(Φ₀)^t = ε₀ Φ₀`.
#[derive(Debug, Clone)]
pub struct AlgebraWithInvolution {
    division: DivisionData,
    m: usize,
    phi0: Matrix<DElement>,
    phi0_inv: Matrix<DElement>,
    epsilon0: i32,
    status: DivisionStatus,
}

const SPLIT_SEARCH_HEIGHT: i64 = 12;

impl AlgebraWithInvolution {
    pub fn new(
        division: DivisionData,
        phi0: Matrix<DElement>,
        epsilon0: i32,
    ) -> Result<Self, AlgebraError> {
        let status = division_status(&division)?;
        if status == DivisionStatus::Split {
            return Err(AlgebraError::SplitQuaternion(format!("{division:?}")));
        }
        Self::with_status(division, phi0, epsilon0, status)
    }

    fn with_status(
        division: DivisionData,
        phi0: Matrix<DElement>,
        epsilon0: i32,
        status: DivisionStatus,
    ) -> Result<Self, AlgebraError> {
        if epsilon0 != 1 && epsilon0 != -1 {
            return Err(AlgebraError::BadEpsilon);
        }
        if !phi0.is_square()
            || phi0.rows() == 0
            || phi0.entries().iter().any(|x| x.owner() != &division)
        {
            return Err(AlgebraError::DimensionMismatch);
        }
        let expected = if epsilon0 == 1 {
            phi0.clone()
        } else {
            phi0.neg()
        };
        if phi0.conj_transpose() != expected {
            return Err(AlgebraError::NotEpsilonHermitian);
        }
        let phi0_inv = invert(&phi0).ok_or(AlgebraError::SingularPhi0)?;
        let m = phi0.rows();
        Ok(AlgebraWithInvolution {
            division,
            m,
            phi0,
            phi0_inv,
            epsilon0,
            status,
        })
    }

    /// `(M_n(F), transpose)`.
    pub fn transpose(field: &FieldTower, n: usize) -> Self {
        let d = DivisionData::base_field(field);
        Self::new(d.clone(), Matrix::identity(n, &d.one()), 1).expect("identity is symmetric")
    }

    /// `(D, ϑ)` itself, with `Φ₀ = [1]`.
    pub fn canonical(division: DivisionData) -> Result<Self, AlgebraError> {
        let one = division.one();
        Self::new(division, Matrix::identity(1, &one), 1)
    }

    pub fn field(&self) -> &FieldTower {
        self.division.field()
    }

    pub fn division(&self) -> &DivisionData {
        &self.division
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn phi0(&self) -> &Matrix<DElement> {
        &self.phi0
    }

    pub fn phi0_inv(&self) -> &Matrix<DElement> {
        &self.phi0_inv
    }

    pub fn epsilon0(&self) -> i32 {
        self.epsilon0
    }

    pub fn status(&self) -> DivisionStatus {
        self.status
    }

    pub fn involution_type(&self) -> InvolutionType {
        match (self.division.kind(), self.epsilon0) {
            (DivisionKind::Quadratic { .. }, _) => InvolutionType::Unitary,
            (DivisionKind::BaseField, 1) | (DivisionKind::Quaternion { .. }, -1) => {
                InvolutionType::Orthogonal
            }
            _ => InvolutionType::Symplectic,
        }
    }

    pub fn local_type(&self, p: &Ordering) -> Result<LocalType, AlgebraError> {
        Ok(match self.division.kind() {
            DivisionKind::BaseField => LocalType::Split,
            DivisionKind::Quaternion { .. } => {
                if self.division.is_ramified_at(p)? {
                    LocalType::Hamilton
                } else {
                    LocalType::Split
                }
            }
            DivisionKind::Quadratic { d } => {
                if p.sign_of(d)? < 0 {
                    LocalType::Complex
                } else {
                    LocalType::Exchange
                }
            }
        })
    }

    /// Orderings of the base field (empty for non-real towers).
    pub fn orderings(&self) -> Result<Vec<Ordering>, AlgebraError> {
        Ok(self.field().orderings()?)
    }

    /// Degree of `M_k(A)` over its center: `k · m · deg D`.
    pub fn degree(&self, k: usize) -> usize {
        let deg_d = if self.division.is_quaternion() { 2 } else { 1 };
        k * self.m * deg_d
    }

    /// `I_k ⊗ Φ₀`.
    pub fn phi_k(&self, k: usize) -> Matrix<DElement> {
        self.phi0.repeat_diag(k)
    }

    pub fn phi_k_inv(&self, k: usize) -> Matrix<DElement> {
        self.phi0_inv.repeat_diag(k)
    }

    fn module_rank(&self, x: &Matrix<DElement>) -> Result<usize, AlgebraError> {
        if !x.is_square() || x.rows() == 0 || !x.rows().is_multiple_of(self.m) {
            return Err(AlgebraError::DimensionMismatch);
        }
        Ok(x.rows() / self.m)
    }

    /// `σ` extended blockwise to `M_k(A)`: `X -> (I_k ⊗ Φ₀) ϑ(X)^t (I_k ⊗ Φ₀)⁻¹`.
    pub fn apply(&self, x: &Matrix<DElement>) -> Result<Matrix<DElement>, AlgebraError> {
        let k = self.module_rank(x)?;
        Ok(self
            .phi_k(k)
            .mul(&x.conj_transpose())
            .mul(&self.phi_k_inv(k)))
    }

    /// Reduced trace of a square matrix over `D`, as a central element of `D`.
    pub fn reduced_trace(&self, x: &Matrix<DElement>) -> Result<DElement, AlgebraError> {
        if !x.is_square() {
            return Err(AlgebraError::DimensionMismatch);
        }
        let mut acc = self.division.zero();
        for i in 0..x.rows() {
            acc = acc.add(&x.get(i, i).reduced_trace());
        }
        Ok(acc)
    }

    /// The same data over an extension tower; a quaternion that splits there is flagged.
    pub fn extend_scalars(&self, ext: &FieldTower) -> Result<Self, AlgebraError> {
        let division = self.division.extend_scalars(ext)?;
        let phi0 = self.embed_matrix(&self.phi0, &division)?;
        let status = match self.status {
            DivisionStatus::Split => DivisionStatus::Split,
            _ => division_status(&division)?,
        };
        Self::with_status(division, phi0, self.epsilon0, status)
    }

    pub fn embed_matrix(
        &self,
        x: &Matrix<DElement>,
        target: &DivisionData,
    ) -> Result<Matrix<DElement>, AlgebraError> {
        let entries = x
            .entries()
            .iter()
            .map(|e| self.division.embed_element(e, target))
            .collect::<Result<Vec<_>, _>>()?;
        let cols = x.cols();
        Ok(Matrix::from_fn(x.rows(), cols, |i, j| {
            entries[i * cols + j].clone()
        }))
    }

    /// The algebra with `Φ₀` replaced by `λ Φ₀` for `λ ∈ F^×`.
    pub fn rescale_phi0(&self, lambda: &FieldElement) -> Result<Self, AlgebraError> {
        if lambda.is_zero() {
            return Err(AlgebraError::ZeroParameter);
        }
        let phi0 = self.phi0.map(|x| x.scale(lambda));
        Self::with_status(self.division.clone(), phi0, self.epsilon0, self.status)
    }

    /// `(A, Int(u) ∘ σ)` presented with `Φ₀' = u Φ₀` for `u ∈ A^×` with `σ(u) = ±u`.
    pub fn twisted(&self, u: &Matrix<DElement>) -> Result<Self, AlgebraError> {
        if u.rows() != self.m || !u.is_square() {
            return Err(AlgebraError::DimensionMismatch);
        }
        let phi0 = u.mul(&self.phi0);
        let sigma_u = self.apply(u)?;
        let eps = if &sigma_u == u {
            self.epsilon0
        } else if sigma_u == u.neg() {
            -self.epsilon0
        } else {
            return Err(AlgebraError::NotEpsilonHermitian);
        };
        Self::with_status(self.division.clone(), phi0, eps, self.status)
    }

    /// An `F`-basis of the `σ`-symmetric elements of `M_k(A)`.
    pub fn sym_basis(&self, k: usize) -> Result<Vec<Matrix<DElement>>, AlgebraError> {
        let n = k * self.m;
        let basis = self.division.basis();
        let dim_d = basis.len();
        let big_n = n * n * dim_d;
        let zero = self.division.zero();
        let mut rows = Vec::with_capacity(big_n);
        for r in 0..n {
            for s in 0..n {
                for e in &basis {
                    let mut x = Matrix::zeros(n, n, &zero);
                    x.set(r, s, e.clone());
                    let sym = x.add(&self.apply(&x)?);
                    rows.push(matrix_coords(&sym));
                }
            }
        }
        let mut coords = Matrix::from_rows(rows);
        let pivots = matrix::row_reduce(&mut coords);
        let out: Vec<Matrix<DElement>> = (0..pivots.len())
            .map(|i| coords_to_matrix(coords.row(i), n, &self.division))
            .collect();
        let deg = self.degree(k);
        let expected = match self.involution_type() {
            InvolutionType::Orthogonal => deg * (deg + 1) / 2,
            InvolutionType::Symplectic => deg * (deg - 1) / 2,
            InvolutionType::Unitary => deg * deg,
        };
        assert_eq!(
            out.len(),
            expected,
            "symmetric space has the wrong dimension"
        );
        Ok(out)
    }
}

/// Coordinates of a matrix over `D` on the `F`-basis `E_rs · e_t`.
pub fn matrix_coords(x: &Matrix<DElement>) -> Vec<FieldElement> {
    x.entries()
        .iter()
        .flat_map(|e| e.coords().iter().cloned())
        .collect()
}

fn coords_to_matrix(coords: &[FieldElement], n: usize, d: &DivisionData) -> Matrix<DElement> {
    let dim = d.dim();
    Matrix::from_fn(n, n, |i, j| {
        let base = (i * n + j) * dim;
        d.element(coords[base..base + dim].to_vec())
            .expect("coordinate slice has D's dimension")
    })
}

/// Decides what can be decided about `D` being a division algebra.
fn division_status(d: &DivisionData) -> Result<DivisionStatus, AlgebraError> {
    match d.kind() {
        DivisionKind::BaseField => Ok(DivisionStatus::Verified),
        DivisionKind::Quadratic { d: radicand } => Ok(if radicand.sqrt().is_some() {
            DivisionStatus::Split
        } else {
            DivisionStatus::Verified
        }),
        DivisionKind::Quaternion { a, b } => {
            if d.field().is_formally_real() {
                for p in d.field().orderings()? {
                    if p.sign_of(a)? < 0 && p.sign_of(b)? < 0 {
                        return Ok(DivisionStatus::Verified);
                    }
                }
            }
            if quaternion_split_witness(a, b) {
                Ok(DivisionStatus::Split)
            } else {
                Ok(DivisionStatus::Unverified)
            }
        }
    }
}

/// Looks for `a x^2 + b y^2 = 1` with `x` of small height, which splits `(a, b)`.
fn quaternion_split_witness(a: &FieldElement, b: &FieldElement) -> bool {
    if a.sqrt().is_some() || b.sqrt().is_some() || a.mul(b).neg().sqrt().is_some() {
        return true;
    }
    let field = a.tower();
    let b_inv = b.try_inv().expect("nonzero parameter");
    let one = FieldElement::one(field);
    for q in 1..=SPLIT_SEARCH_HEIGHT {
        for p in 0..=SPLIT_SEARCH_HEIGHT {
            let x = FieldElement::from_ratio(field, p, q);
            if one.sub(&a.mul(&x.square())).mul(&b_inv).sqrt().is_some() {
                return true;
            }
        }
    }
    false
}

/// Inverse of a square matrix over `D`: elimination first, then the `F`-linear
/// left-regular representation when `D` has zero divisors.
pub fn invert(x: &Matrix<DElement>) -> Option<Matrix<DElement>> {
    if let Some(inv) = x.inverse() {
        return Some(inv);
    }
    let d = x.entries().first()?.owner().clone();
    if !(d.is_quaternion() || d.is_quadratic()) {
        return None;
    }
    invert_linear(x, &d)
}

fn invert_linear(x: &Matrix<DElement>, d: &DivisionData) -> Option<Matrix<DElement>> {
    let n = x.rows();
    let basis = d.basis();
    let dim = basis.len();
    let size = n * dim;
    let zero = FieldElement::zero(d.field());
    // column (j, t) is the coordinate vector of X · (e_t in slot j)
    let mut lrep = Matrix::zeros(size, size, &zero);
    for j in 0..n {
        for (t, e) in basis.iter().enumerate() {
            for i in 0..n {
                let v = x.get(i, j).mul(e);
                for (u, c) in v.coords().iter().enumerate() {
                    lrep.set(i * dim + u, j * dim + t, c.clone());
                }
            }
        }
    }
    let inv = lrep.inverse()?;
    Some(Matrix::from_fn(n, n, |i, j| {
        let coords = (0..dim)
            .map(|u| inv.get(i * dim + u, j * dim).clone())
            .collect();
        d.element(coords).expect("dimension matches")
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldTower {
        FieldTower::rationals()
    }

    fn int(n: i64) -> FieldElement {
        FieldElement::from_integer(&q(), n)
    }

    fn diag_base(entries: &[i64]) -> Matrix<DElement> {
        let d = DivisionData::base_field(&q());
        Matrix::diagonal(&entries.iter().map(|&x| d.integer(x)).collect::<Vec<_>>())
    }

    #[test]
    fn build_examples() {
        let d = DivisionData::base_field(&q());
        let a = AlgebraWithInvolution::new(d.clone(), diag_base(&[1, -1, 1, -1]), 1).unwrap();
        assert_eq!(a.involution_type(), InvolutionType::Orthogonal);
        assert_eq!(a.m(), 4);

        let h = DivisionData::quaternion(int(-1), int(-1)).unwrap();
        let conj = AlgebraWithInvolution::canonical(h).unwrap();
        assert_eq!(conj.involution_type(), InvolutionType::Symplectic);
        assert_eq!(conj.status(), DivisionStatus::Verified);

        let hyp = Matrix::from_rows(vec![vec![d.zero(), d.one()], vec![d.one(), d.zero()]]);
        assert_eq!(
            AlgebraWithInvolution::new(d.clone(), hyp, -1).unwrap_err(),
            AlgebraError::NotEpsilonHermitian
        );
        let singular = Matrix::from_rows(vec![vec![d.one(), d.one()], vec![d.one(), d.one()]]);
        assert_eq!(
            AlgebraWithInvolution::new(d, singular, 1).unwrap_err(),
            AlgebraError::SingularPhi0
        );
    }

    #[test]
    fn split_quaternion_rejected() {
        let d = DivisionData::quaternion(int(1), int(-1)).unwrap();
        assert!(matches!(
            AlgebraWithInvolution::canonical(d),
            Err(AlgebraError::SplitQuaternion(_))
        ));
        // -1·1² + 2·1² = 1
        let d = DivisionData::quaternion(int(-1), int(2)).unwrap();
        assert!(matches!(
            AlgebraWithInvolution::canonical(d),
            Err(AlgebraError::SplitQuaternion(_))
        ));
        let d = DivisionData::quaternion(int(2), int(-3)).unwrap();
        assert_eq!(
            AlgebraWithInvolution::canonical(d).unwrap().status(),
            DivisionStatus::Unverified
        );
    }

    #[test]
    fn extension_flags_splitting() {
        let t = FieldTower::from_rational_radicands(&[2]).unwrap();
        let d = DivisionData::quaternion(int(2), int(-3)).unwrap();
        let a = AlgebraWithInvolution::canonical(d)
            .unwrap()
            .extend_scalars(&t)
            .unwrap();
        assert_eq!(a.status(), DivisionStatus::Split);
        let h = DivisionData::quaternion(int(-1), int(-1)).unwrap();
        let b = AlgebraWithInvolution::canonical(h)
            .unwrap()
            .extend_scalars(&t)
            .unwrap();
        assert_eq!(b.status(), DivisionStatus::Verified);
    }

    #[test]
    fn involution_types() {
        let h = DivisionData::quaternion(int(2), int(-3)).unwrap();
        let j = h.unit(2);
        let int_j =
            AlgebraWithInvolution::new(h.clone(), Matrix::from_rows(vec![vec![j]]), -1).unwrap();
        assert_eq!(int_j.involution_type(), InvolutionType::Orthogonal);
        let k = DivisionData::quadratic(int(-1)).unwrap();
        assert_eq!(
            AlgebraWithInvolution::canonical(k)
                .unwrap()
                .involution_type(),
            InvolutionType::Unitary
        );
    }

    #[test]
    fn apply_examples() {
        let a = AlgebraWithInvolution::new(
            DivisionData::base_field(&q()),
            diag_base(&[1, -1, 1, -1]),
            1,
        )
        .unwrap();
        let x = diag_base(&[1, 1, -1, 1]);
        assert_eq!(a.apply(&x).unwrap(), x);
        let id = diag_base(&[1, 1, 1, 1]);
        assert_eq!(a.apply(&id).unwrap(), id);
        let h = DivisionData::quaternion(int(-1), int(-1)).unwrap();
        let conj = AlgebraWithInvolution::canonical(h.clone()).unwrap();
        let i = Matrix::from_rows(vec![vec![h.unit(1)]]);
        assert_eq!(conj.apply(&i).unwrap(), i.neg());
        assert_eq!(
            a.apply(&diag_base(&[1, 1])),
            Err(AlgebraError::DimensionMismatch)
        );
    }

    #[test]
    fn reduced_traces() {
        let a = AlgebraWithInvolution::transpose(&q(), 4);
        let id = Matrix::identity(4, &a.division().one());
        assert_eq!(a.reduced_trace(&id).unwrap(), a.division().integer(4));
        let h = DivisionData::quaternion(int(-1), int(-1)).unwrap();
        let conj = AlgebraWithInvolution::canonical(h.clone()).unwrap();
        let x = h.integer(3).add(&h.unit(1).scale(&int(4)));
        assert_eq!(
            conj.reduced_trace(&Matrix::from_rows(vec![vec![x]]))
                .unwrap(),
            h.integer(6)
        );
    }

    #[test]
    fn sym_basis_dimensions() {
        assert_eq!(
            AlgebraWithInvolution::transpose(&q(), 2)
                .sym_basis(1)
                .unwrap()
                .len(),
            3
        );
        let h = DivisionData::quaternion(int(-1), int(-1)).unwrap();
        let conj = AlgebraWithInvolution::canonical(h).unwrap();
        assert_eq!(conj.sym_basis(1).unwrap().len(), 1);
        assert_eq!(conj.sym_basis(2).unwrap().len(), 6);
        let k =
            AlgebraWithInvolution::canonical(DivisionData::quadratic(int(-1)).unwrap()).unwrap();
        assert_eq!(k.sym_basis(1).unwrap().len(), 1);
    }

    #[test]
    fn inversion_over_split_quaternions() {
        let t = FieldTower::from_rational_radicands(&[2]).unwrap();
        let d = DivisionData::quaternion(int(2), int(-3))
            .unwrap()
            .extend_scalars(&t)
            .unwrap();
        let r = t.generator(0);
        let one = FieldElement::one(&t);
        let zero = FieldElement::zero(&t);
        // x = sqrt2 + i has norm zero
        let x = d
            .element(vec![r.clone(), one.clone(), zero.clone(), zero.clone()])
            .unwrap();
        let m = Matrix::from_rows(vec![vec![x.clone(), d.one()], vec![d.one(), d.zero()]]);
        let inv = invert_linear(&m, &d).unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2, &d.one()));
        assert_eq!(inv, m.inverse().unwrap());
        let singular = Matrix::from_rows(vec![vec![x]]);
        assert!(invert(&singular).is_none());
    }
}
