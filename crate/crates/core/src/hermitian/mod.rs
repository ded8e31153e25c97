//! Hermitian forms over `(M_m(D), σ)` on free modules, their Morita collapse
//! to ε-hermitian forms over `(D, ϑ)`, adjoint involutions and transfers.
//!
//! A form of rank `k` is stored by its Gram matrix `B` of size `km × km` over
//! `D`; `h(x, y) = Σ σ(x_i) B_ij y_j`. Forms given directly at the collapsed
//! level (any size over `D`) carry the `collapsed_only` flag.

mod collapse;
mod transfer;

pub use collapse::CollapsedForm;
pub use transfer::transfer_hermitian;

use thiserror::Error;

use crate::algebra::{self, AlgebraError, AlgebraWithInvolution, DElement, Involution};
use crate::matrix::{InvolutiveRing, Matrix, Ring};
use crate::numfield::{FieldElement, FieldTower};
use crate::quadform::{QuadForm, QuadFormError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HermitianError {
    #[error("Gram matrix is not hermitian for the involution")]
    NotHermitian,
    #[error("form is singular")]
    Singular,
    #[error("diagonal entry {0} is not σ-symmetric")]
    NotSymmetricUnit(String),
    #[error("diagonal entry {0} is not invertible")]
    SingularUnit(String),
    #[error("forms live over different algebras with involution")]
    MismatchedAlgebra,
    #[error("scale factor is zero")]
    ZeroScale,
    #[error("scaling element is not invertible")]
    NotUnit,
    #[error("scaling element u satisfies neither σ(u) = u nor σ(u) = -u")]
    NotSemiSymmetric,
    #[error("σ(u) = -u turns a hermitian form into a skew-hermitian one")]
    SkewResult,
    #[error("matrix dimensions do not match the algebra")]
    DimensionMismatch,
    #[error("skew-symmetric form over a field has no diagonalization")]
    SkewSymmetricOverField,
    #[error("form is not defined over an extension of the target algebra")]
    NotAnExtension,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    QuadForm(#[from] QuadFormError),
}

/// A nonsingular hermitian form over `(A, σ)`.
#[derive(Debug, Clone)]
pub struct HermForm {
    algebra: AlgebraWithInvolution,
    k: usize,
    gram: Matrix<DElement>,
    collapsed_only: bool,
}

impl HermForm {
    /// A form on `A^k` from its `km × km` Gram matrix; requires `σ^t(B) = B` and `B` invertible.
    pub fn new(
        algebra: &AlgebraWithInvolution,
        gram: Matrix<DElement>,
    ) -> Result<Self, HermitianError> {
        let m = algebra.m();
        if !gram.is_square() || gram.rows() == 0 || !gram.rows().is_multiple_of(m) {
            return Err(HermitianError::DimensionMismatch);
        }
        if gram
            .entries()
            .iter()
            .any(|x| x.owner() != algebra.division())
        {
            return Err(HermitianError::MismatchedAlgebra);
        }
        if algebra.apply(&gram)? != gram {
            return Err(HermitianError::NotHermitian);
        }
        if algebra::invert(&gram).is_none() {
            return Err(HermitianError::Singular);
        }
        Ok(HermForm {
            algebra: algebra.clone(),
            k: gram.rows() / m,
            gram,
            collapsed_only: false,
        })
    }

    /// A form given by its collapsed Gram `C` over `D`, with `ϑ(C)^t = ε₀ C`.
    pub fn collapsed(
        algebra: &AlgebraWithInvolution,
        c: Matrix<DElement>,
    ) -> Result<Self, HermitianError> {
        let form = CollapsedForm::new(algebra.division().clone(), algebra.epsilon0(), c)?;
        if algebra::invert(form.gram()).is_none() {
            return Err(HermitianError::Singular);
        }
        let n = form.gram().rows();
        Ok(HermForm {
            algebra: algebra.clone(),
            k: n,
            gram: form.into_gram(),
            collapsed_only: true,
        })
    }

    /// `<u_1, ..., u_r>_σ` for σ-symmetric units `u_i ∈ A`.
    pub fn diagonal(
        algebra: &AlgebraWithInvolution,
        units: &[Matrix<DElement>],
    ) -> Result<Self, HermitianError> {
        if units.is_empty() {
            return Err(HermitianError::DimensionMismatch);
        }
        for u in units {
            if u.rows() != algebra.m() || !u.is_square() {
                return Err(HermitianError::DimensionMismatch);
            }
            if &algebra.apply(u)? != u {
                return Err(HermitianError::NotSymmetricUnit(format!("{u:?}")));
            }
            if algebra::invert(u).is_none() {
                return Err(HermitianError::SingularUnit(format!("{u:?}")));
            }
        }
        Self::new(algebra, Matrix::block_diag(units))
    }

    /// `<1, ..., 1>_σ` of rank `k`.
    pub fn unit(algebra: &AlgebraWithInvolution, k: usize) -> Self {
        let one = algebra.division().one();
        Self::new(algebra, Matrix::identity(k * algebra.m(), &one))
            .expect("identity Gram is hermitian")
    }

    /// The hyperbolic form of rank `2k`, Gram `[[0, I], [I, 0]]`.
    pub fn hyperbolic(algebra: &AlgebraWithInvolution, k: usize) -> Self {
        let one = algebra.division().one();
        let n = k * algebra.m();
        let mut gram = Matrix::zeros(2 * n, 2 * n, &one);
        let id = Matrix::identity(n, &one);
        gram.set_block(0, n, &id);
        gram.set_block(n, 0, &id);
        Self::new(algebra, gram).expect("hyperbolic Gram is hermitian")
    }

    pub fn algebra(&self) -> &AlgebraWithInvolution {
        &self.algebra
    }

    pub fn field(&self) -> &FieldTower {
        self.algebra.field()
    }

    /// Rank over `A` (over `D` for collapsed-only forms).
    pub fn rank(&self) -> usize {
        self.k
    }

    pub fn gram(&self) -> &Matrix<DElement> {
        &self.gram
    }

    pub fn is_collapsed_only(&self) -> bool {
        self.collapsed_only
    }

    /// `(I_k ⊗ Φ₀⁻¹) B`.
    pub fn collapsed_gram(&self) -> Matrix<DElement> {
        if self.collapsed_only {
            self.gram.clone()
        } else {
            self.algebra.phi_k_inv(self.k).mul(&self.gram)
        }
    }

    /// The Morita image: an ε₀-hermitian form over `(D, ϑ)`.
    pub fn collapse(&self) -> CollapsedForm {
        CollapsedForm::new(
            self.algebra.division().clone(),
            self.algebra.epsilon0(),
            self.collapsed_gram(),
        )
        .expect("collapse of a hermitian form is ε₀-hermitian")
    }

    fn check_same_algebra(&self, other: &Self) -> Result<(), HermitianError> {
        let a = &self.algebra;
        let b = &other.algebra;
        if a.division() == b.division() && a.phi0() == b.phi0() && a.epsilon0() == b.epsilon0() {
            Ok(())
        } else {
            Err(HermitianError::MismatchedAlgebra)
        }
    }

    fn rebuild(&self, gram: Matrix<DElement>, collapsed_only: bool) -> Self {
        let k = if collapsed_only {
            gram.rows()
        } else {
            gram.rows() / self.algebra.m()
        };
        HermForm {
            algebra: self.algebra.clone(),
            k,
            gram,
            collapsed_only,
        }
    }

    /// Orthogonal sum; mixing with a collapsed-only form yields a collapsed-only form.
    pub fn perp(&self, other: &Self) -> Result<Self, HermitianError> {
        self.check_same_algebra(other)?;
        if self.collapsed_only || other.collapsed_only {
            let g = Matrix::block_diag(&[self.collapsed_gram(), other.collapsed_gram()]);
            return Ok(self.rebuild(g, true));
        }
        Ok(self.rebuild(
            Matrix::block_diag(&[self.gram.clone(), other.gram.clone()]),
            false,
        ))
    }

    /// `λ h` for `λ ∈ F^×`.
    pub fn scale_field(&self, lambda: &FieldElement) -> Result<Self, HermitianError> {
        if lambda.tower() != self.field() {
            return Err(HermitianError::MismatchedAlgebra);
        }
        if lambda.is_zero() {
            return Err(HermitianError::ZeroScale);
        }
        Ok(self.rebuild(self.gram.map(|x| x.scale(lambda)), self.collapsed_only))
    }

    /// `q ⊗ h` for a symmetric bilinear form `q` over `F`.
    pub fn tensor_quad(&self, q: &QuadForm) -> Result<Self, HermitianError> {
        if q.field() != self.field() {
            return Err(HermitianError::MismatchedAlgebra);
        }
        let gram = q.gram().kron_with(&self.gram, |a, b| b.scale(a));
        Ok(self.rebuild(gram, self.collapsed_only))
    }

    /// `u h` over `(A, Int(u) ∘ σ)` for a unit `u` with `σ(u) = u`; the new
    /// algebra is presented with `Φ₀' = u Φ₀`.
    pub fn scale_by_unit(&self, u: &Matrix<DElement>) -> Result<Self, HermitianError> {
        if u.rows() != self.algebra.m() || !u.is_square() {
            return Err(HermitianError::DimensionMismatch);
        }
        if algebra::invert(u).is_none() {
            return Err(HermitianError::NotUnit);
        }
        let sigma_u = self.algebra.apply(u)?;
        if sigma_u == u.neg() {
            return Err(HermitianError::SkewResult);
        }
        if &sigma_u != u {
            return Err(HermitianError::NotSemiSymmetric);
        }
        if self.collapsed_only {
            return Err(HermitianError::DimensionMismatch);
        }
        let twisted = self.algebra.twisted(u)?;
        let gram = u.repeat_diag(self.k).mul(&self.gram);
        HermForm::new(&twisted, gram)
    }

    /// The same Gram matrix read over another presentation of the algebra
    /// (same `D` and `m`, e.g. after rescaling `Φ₀`); hermitian-ness is rechecked.
    /// Collapsed-only forms keep their collapsed Gram.
    pub fn over(&self, algebra: &AlgebraWithInvolution) -> Result<Self, HermitianError> {
        if algebra.division() != self.algebra.division() || algebra.m() != self.algebra.m() {
            return Err(HermitianError::MismatchedAlgebra);
        }
        if self.collapsed_only {
            return HermForm::collapsed(algebra, self.gram.clone());
        }
        HermForm::new(algebra, self.gram.clone())
    }

    /// The same form over `A ⊗_F L`.
    pub fn extend_scalars(&self, ext: &FieldTower) -> Result<Self, HermitianError> {
        let algebra = self.algebra.extend_scalars(ext)?;
        let gram = self.algebra.embed_matrix(&self.gram, algebra.division())?;
        Ok(HermForm {
            algebra,
            k: self.k,
            gram,
            collapsed_only: self.collapsed_only,
        })
    }

    /// `ad_h(X) = B⁻¹ σ^t(X) B`, which equals `C⁻¹ ϑ(X)^t C` for the collapsed Gram `C`.
    pub fn adjoint_involution(&self) -> Result<AdjointInvolution, HermitianError> {
        let c = self.collapsed_gram();
        let c_inv = algebra::invert(&c).ok_or(HermitianError::Singular)?;
        Ok(AdjointInvolution {
            algebra: self.algebra.clone(),
            u: c_inv,
            w: c,
        })
    }
}

/// The adjoint involution of a form, as a map on `M_n(D)` with `n = km`.
#[derive(Debug, Clone)]
pub struct AdjointInvolution {
    algebra: AlgebraWithInvolution,
    u: Matrix<DElement>,
    w: Matrix<DElement>,
}

impl Involution for AdjointInvolution {
    fn division(&self) -> &algebra::DivisionData {
        self.algebra.division()
    }

    fn size(&self) -> usize {
        self.u.rows()
    }

    fn apply(&self, x: &Matrix<DElement>) -> Matrix<DElement> {
        self.u.mul(&x.conj_transpose()).mul(&self.w)
    }

    /// `(U E_sr ϑ(e) W)_{pq} = U_ps ϑ(e) W_rq`.
    fn apply_unit(&self, r: usize, s: usize, e: &DElement) -> Matrix<DElement> {
        let n = self.size();
        let ce = e.conj();
        let left: Vec<DElement> = (0..n).map(|p| self.u.get(p, s).mul(&ce)).collect();
        Matrix::from_fn(n, n, |p, q| {
            let a = &left[p];
            let b = self.w.get(r, q);
            if a.is_zero() || b.is_zero() {
                a.zero_like()
            } else {
                a.mul(b)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DivisionData;

    fn q() -> FieldTower {
        FieldTower::rationals()
    }

    fn int(n: i64) -> FieldElement {
        FieldElement::from_integer(&q(), n)
    }

    fn m4() -> AlgebraWithInvolution {
        let d = DivisionData::base_field(&q());
        let phi = Matrix::diagonal(&[d.integer(1), d.integer(-1), d.integer(1), d.integer(-1)]);
        AlgebraWithInvolution::new(d, phi, 1).unwrap()
    }

    fn base_diag(a: &AlgebraWithInvolution, xs: &[i64]) -> Matrix<DElement> {
        let d = a.division();
        Matrix::diagonal(&xs.iter().map(|&x| d.integer(x)).collect::<Vec<_>>())
    }

    #[test]
    fn collapse_examples() {
        let a = m4();
        let h = HermForm::diagonal(&a, &[base_diag(&a, &[1, 1, -1, 1])]).unwrap();
        assert_eq!(h.collapsed_gram(), base_diag(&a, &[1, -1, -1, -1]));
        let h1 = HermForm::unit(&a, 1);
        assert_eq!(h1.collapsed_gram(), base_diag(&a, &[1, -1, 1, -1]));
        let h2 = HermForm::diagonal(&a, &[base_diag(&a, &[1, -1, 1, -1])]).unwrap();
        assert_eq!(h2.collapsed_gram(), base_diag(&a, &[1, 1, 1, 1]));
        // round trip
        assert_eq!(a.phi_k(1).mul(&h.collapsed_gram()), *h.gram());
    }

    #[test]
    fn build_rejects_bad_grams() {
        let t = AlgebraWithInvolution::transpose(&q(), 2);
        let d = t.division();
        let skew = Matrix::from_rows(vec![vec![d.zero(), d.one()], vec![d.integer(-1), d.zero()]]);
        assert!(matches!(
            HermForm::new(&t, skew),
            Err(HermitianError::NotHermitian)
        ));
        let singular = Matrix::from_rows(vec![vec![d.one(), d.one()], vec![d.one(), d.one()]]);
        assert!(matches!(
            HermForm::new(&t, singular),
            Err(HermitianError::Singular)
        ));
    }

    #[test]
    fn pure_quaternion_is_not_symmetric() {
        let h = DivisionData::quaternion(int(-1), int(-1)).unwrap();
        let a = AlgebraWithInvolution::canonical(h.clone()).unwrap();
        let i = Matrix::from_rows(vec![vec![h.unit(1)]]);
        assert!(matches!(
            HermForm::diagonal(&a, &[i]),
            Err(HermitianError::NotSymmetricUnit(_))
        ));
    }

    #[test]
    fn int_j_conj_symmetric_elements() {
        // σ = Int(j)∘conj on (2,-3): σ(x) = j conj(x) j⁻¹ fixes 1, i, k and negates j
        let h = DivisionData::quaternion(int(2), int(-3)).unwrap();
        let a = AlgebraWithInvolution::new(h.clone(), Matrix::from_rows(vec![vec![h.unit(2)]]), -1)
            .unwrap();
        for (t, fixed) in [(0, true), (1, true), (2, false), (3, true)] {
            let u = Matrix::from_rows(vec![vec![h.unit(t)]]);
            let res = HermForm::diagonal(&a, &[u]);
            assert_eq!(res.is_ok(), fixed, "basis element {t}");
        }
    }

    #[test]
    fn scale_by_unit_round_trip() {
        let a = m4();
        let h = HermForm::diagonal(&a, &[base_diag(&a, &[1, 1, -1, 1])]).unwrap();
        let u = base_diag(&a, &[2, -1, 3, 1]);
        let scaled = h.scale_by_unit(&u).unwrap();
        let u_inv = algebra::invert(&u).unwrap();
        let back = scaled.scale_by_unit(&u_inv).unwrap();
        assert_eq!(back.gram(), h.gram());
        assert_eq!(back.algebra().phi0(), a.phi0());
        assert_eq!(
            h.scale_by_unit(&base_diag(&a, &[1, 1, 1, 1]))
                .unwrap()
                .gram(),
            h.gram()
        );
    }

    #[test]
    fn adjoint_of_unit_form_is_sigma() {
        let h = DivisionData::quaternion(int(2), int(-3)).unwrap();
        let a = AlgebraWithInvolution::new(h.clone(), Matrix::from_rows(vec![vec![h.unit(2)]]), -1)
            .unwrap();
        let ad = HermForm::unit(&a, 2).adjoint_involution().unwrap();
        let x = Matrix::from_rows(vec![
            vec![h.unit(1), h.unit(2)],
            vec![h.integer(3), h.unit(3)],
        ]);
        assert_eq!(ad.apply(&x), a.apply(&x).unwrap());
        for r in 0..2 {
            for s in 0..2 {
                for e in h.basis() {
                    let mut unit = Matrix::zeros(2, 2, &h.zero());
                    unit.set(r, s, e.clone());
                    assert_eq!(ad.apply_unit(r, s, &e), ad.apply(&unit));
                }
            }
        }
    }
}
