use crate::matrix::Matrix;
use crate::numfield::{FieldElement, FieldTower, Ordering, RootSign};

use super::{AlgebraError, DElement, DivisionData, DivisionKind};

/// Which quaternion parameter is adjoined as a square root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitRadicand {
    A,
    B,
}

/// An explicit isomorphism `(a, b)_F ⊗ F(s) ≅ M_2(F(s))` with `s^2 = r`.
#[derive(Debug, Clone)]
pub struct QuaternionSplitting {
    radicand: SplitRadicand,
    base: DivisionData,
    tower: FieldTower,
    s: FieldElement,
    images: [Matrix<FieldElement>; 4],
}

/// Splits `(a, b)` over `F(sqrt r)`, `r ∈ {a, b}`. When `r` is already a square
/// in `F` the tower is not extended and `s` is its square root.
pub fn split_quaternion(
    d: &DivisionData,
    radicand: SplitRadicand,
) -> Result<QuaternionSplitting, AlgebraError> {
    let DivisionKind::Quaternion { a, b } = d.kind() else {
        return Err(AlgebraError::InvalidRadicand);
    };
    let r = match radicand {
        SplitRadicand::A => a,
        SplitRadicand::B => b,
    };
    let (tower, s) = match r.sqrt() {
        Some(s) => (d.field().clone(), s),
        None => {
            let t = d
                .field()
                .extend(r)
                .map_err(|_| AlgebraError::InvalidRadicand)?;
            let s = t.generator(t.depth() - 1);
            (t, s)
        }
    };
    Ok(QuaternionSplitting::build(radicand, d.clone(), tower, s))
}

impl QuaternionSplitting {
    fn build(
        radicand: SplitRadicand,
        base: DivisionData,
        tower: FieldTower,
        s: FieldElement,
    ) -> Self {
        let DivisionKind::Quaternion { a, b } = base.kind() else {
            unreachable!("quaternion checked")
        };
        let a = a.embed(&tower).expect("tower extends the base");
        let b = b.embed(&tower).expect("tower extends the base");
        let zero = FieldElement::zero(&tower);
        let one = FieldElement::one(&tower);
        let m = |rows: [[&FieldElement; 2]; 2]| {
            Matrix::from_rows(
                rows.iter()
                    .map(|r| r.iter().map(|x| (*x).clone()).collect())
                    .collect(),
            )
        };
        let diag_s = m([[&s, &zero], [&zero, &s.neg()]]);
        let (img_i, img_j) = match radicand {
            SplitRadicand::A => (diag_s, m([[&zero, &one], [&b, &zero]])),
            SplitRadicand::B => (m([[&zero, &one], [&a, &zero]]), diag_s),
        };
        let img_k = img_i.mul(&img_j);
        let images = [Matrix::identity(2, &one), img_i, img_j, img_k];
        QuaternionSplitting {
            radicand,
            base,
            tower,
            s,
            images,
        }
    }

    pub fn radicand(&self) -> SplitRadicand {
        self.radicand
    }

    /// The tower `F(s)` (equal to `F` when `r` was already a square).
    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn root(&self) -> &FieldElement {
        &self.s
    }

    /// True if `F` had to be extended.
    pub fn extended(&self) -> bool {
        self.tower.depth() > self.base.field().depth()
    }

    /// The same splitting with `s` replaced by `-s`.
    pub fn negated(&self) -> Self {
        Self::build(
            self.radicand,
            self.base.clone(),
            self.tower.clone(),
            self.s.neg(),
        )
    }

    /// The ordering of `F(s)` extending `p` at which `s > 0`, adjusting the sign of `s` if needed.
    pub fn positive_at(&self, p: &Ordering) -> Result<(Self, Ordering), AlgebraError> {
        if self.extended() {
            let q = p.lift(&self.tower, RootSign::Positive)?;
            let split = if q.sign_of(&self.s)? > 0 {
                self.clone()
            } else {
                self.negated()
            };
            Ok((split, q))
        } else if p.sign_of(&self.s)? > 0 {
            Ok((self.clone(), p.clone()))
        } else {
            Ok((self.negated(), p.clone()))
        }
    }

    /// `φ(x)` as a 2×2 matrix over `F(s)`.
    pub fn map(&self, x: &DElement) -> Matrix<FieldElement> {
        let zero = FieldElement::zero(&self.tower);
        let mut acc = Matrix::zeros(2, 2, &zero);
        for (c, img) in x.coords().iter().zip(&self.images) {
            if c.is_zero() {
                continue;
            }
            let c = c.embed(&self.tower).expect("tower extends the base");
            acc = acc.add(&img.map(|e| e.mul(&c)));
        }
        acc
    }

    /// Entrywise `φ` on an `n×n` matrix over `D`, giving a `2n×2n` matrix over `F(s)`.
    pub fn map_matrix(&self, x: &Matrix<DElement>) -> Matrix<FieldElement> {
        let n = x.rows();
        let zero = FieldElement::zero(&self.tower);
        let mut out = Matrix::zeros(2 * n, 2 * x.cols(), &zero);
        for i in 0..n {
            for j in 0..x.cols() {
                out.set_block(2 * i, 2 * j, &self.map(x.get(i, j)));
            }
        }
        out
    }

    /// `J = [[0, 1], [-1, 0]]`, which transports conjugation to `X -> J X^t J⁻¹`.
    pub fn j_matrix(&self) -> Matrix<FieldElement> {
        let zero = FieldElement::zero(&self.tower);
        let one = FieldElement::one(&self.tower);
        Matrix::from_rows(vec![vec![zero.clone(), one.clone()], vec![one.neg(), zero]])
    }

    /// `J⁻¹ = [[0, -1], [1, 0]]`.
    pub fn j_inverse(&self) -> Matrix<FieldElement> {
        self.j_matrix().neg()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{InvolutiveRing, Ring};

    fn quat(a: i64, b: i64) -> DivisionData {
        let q = FieldTower::rationals();
        DivisionData::quaternion(
            FieldElement::from_integer(&q, a),
            FieldElement::from_integer(&q, b),
        )
        .unwrap()
    }

    fn check_homomorphism(d: &DivisionData, r: SplitRadicand) {
        let sp = split_quaternion(d, r).unwrap();
        let j = sp.j_matrix();
        let j_inv = sp.j_inverse();
        assert_eq!(
            j.mul(&j_inv),
            Matrix::identity(2, &FieldElement::one(sp.tower()))
        );
        let basis = d.basis();
        for x in &basis {
            for y in &basis {
                assert_eq!(sp.map(&x.mul(y)), sp.map(x).mul(&sp.map(y)), "{x} * {y}");
            }
            assert_eq!(
                sp.map(&x.conj()),
                j.mul(&sp.map(x).transpose()).mul(&j_inv),
                "conj {x}"
            );
        }
    }

    #[test]
    fn entry_map_is_multiplicative() {
        for (a, b) in [(2, 3), (2, -3), (-1, 3), (5, 7)] {
            let d = quat(a, b);
            if a > 0 {
                check_homomorphism(&d, SplitRadicand::A);
            }
            if b > 0 {
                check_homomorphism(&d, SplitRadicand::B);
            }
        }
    }

    #[test]
    fn spec_examples() {
        let d = quat(2, 3);
        let sp = split_quaternion(&d, SplitRadicand::A).unwrap();
        let s = sp.root().clone();
        let i = sp.map(&d.unit(1));
        assert_eq!(i, Matrix::diagonal(&[s.clone(), s.neg()]));
        assert_eq!(
            i.mul(&i),
            Matrix::identity(2, &FieldElement::one(sp.tower())).map(|x| x.scale_int(2))
        );
        let j = split_quaternion(&quat(2, -3), SplitRadicand::A).unwrap();
        let t = j.tower().clone();
        let img = j.map(&quat(2, -3).unit(2));
        let expect = Matrix::from_rows(vec![
            vec![FieldElement::zero(&t), FieldElement::one(&t)],
            vec![FieldElement::from_integer(&t, -3), FieldElement::zero(&t)],
        ]);
        assert_eq!(img, expect);
        assert!(split_quaternion(&quat(-1, -1), SplitRadicand::A).is_err());
    }
}
