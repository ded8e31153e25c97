//! Congruence diagonalization of ε-hermitian matrices over rings with involution.
//!
//! For a Gram matrix `G` with `conj(G)^t = ε G` the routines return a transform
//! `C` and a diagonal `Δ` with `conj(C)^t · G · C = Δ`. Column operations
//! `col_j -= col_i · c` are mirrored by row operations `row_j -= conj(c) · row_i`.

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::matrix::{DivisionRing, InvolutiveRing, Matrix, Ring};
use crate::numfield::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CongruenceError {
    /// Every substitution `x_i += x_j c` leaves the pivot non-invertible; over
    /// a field with trivial involution and ε = −1 this is the alternating case.
    #[error("no substitution produces an invertible pivot at position {0}")]
    NoPivot(usize),
}

#[derive(Debug, Clone)]
pub struct Diagonalization<T> {
    pub entries: Vec<T>,
    pub transform: Matrix<T>,
}

impl Ring for Rational {
    fn zero_like(&self) -> Self {
        <Rational as Zero>::zero()
    }
    fn one_like(&self) -> Self {
        Rational::from_integer(1.into())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl DivisionRing for Rational {
    fn try_inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

impl InvolutiveRing for Rational {
    fn conj(&self) -> Self {
        self.clone()
    }
}

struct State<T> {
    m: Matrix<T>,
    c: Option<Matrix<T>>,
}

impl<T: DivisionRing + InvolutiveRing> State<T> {
    /// `x_j -> x_j + x_i · c`: `col_j += col_i c`, `row_j += conj(c) row_i`.
    fn add_multiple(&mut self, i: usize, j: usize, c: &T) {
        let n = self.m.rows();
        for r in 0..n {
            let v = self.m.get(r, i);
            if !v.is_zero() {
                let x = self.m.get(r, j).add(&v.mul(c));
                self.m.set(r, j, x);
            }
        }
        let cc = c.conj();
        for s in 0..n {
            let v = self.m.get(i, s);
            if !v.is_zero() {
                let x = self.m.get(j, s).add(&cc.mul(v));
                self.m.set(j, s, x);
            }
        }
        if let Some(t) = self.c.as_mut() {
            for r in 0..n {
                let v = t.get(r, i);
                if !v.is_zero() {
                    let x = t.get(r, j).add(&v.mul(c));
                    t.set(r, j, x);
                }
            }
        }
    }

    fn swap(&mut self, i: usize, j: usize) {
        self.m.swap_rows(i, j);
        self.m.swap_cols(i, j);
        if let Some(t) = self.c.as_mut() {
            t.swap_cols(i, j);
        }
    }
}

/// Diagonalizes an ε-hermitian matrix by congruence.
///
/// `units` are the candidates tried when a zero pivot forces a substitution;
/// passing a basis of the ring over its center suffices for division rings.
/// Rows that vanish entirely produce zero diagonal entries.
pub fn diagonalize<T: DivisionRing + InvolutiveRing>(
    gram: &Matrix<T>,
    units: &[T],
    track_transform: bool,
) -> Result<Diagonalization<T>, CongruenceError> {
    assert!(gram.is_square(), "Gram matrix must be square");
    let n = gram.rows();
    let template = gram
        .entries()
        .first()
        .expect("nonempty Gram matrix")
        .clone();
    let mut st = State {
        m: gram.clone(),
        c: track_transform.then(|| Matrix::identity(n, &template)),
    };
    for i in 0..n {
        let mut pivot_inv = st.m.get(i, i).try_inv();
        if pivot_inv.is_none() {
            if let Some(j) = (i + 1..n).find(|&j| st.m.get(j, j).try_inv().is_some()) {
                st.swap(i, j);
                pivot_inv = st.m.get(i, i).try_inv();
            }
        }
        if pivot_inv.is_none() {
            let Some(j) = (i + 1..n).find(|&j| !st.m.get(i, j).is_zero()) else {
                if st.m.get(i, i).is_zero() {
                    continue;
                }
                return Err(CongruenceError::NoPivot(i));
            };
            pivot_inv = substitute(&mut st, i, j, units);
            if pivot_inv.is_none() {
                return Err(CongruenceError::NoPivot(i));
            }
        }
        let p_inv = pivot_inv.expect("pivot found");
        for j in i + 1..n {
            let mij = st.m.get(i, j);
            if mij.is_zero() {
                continue;
            }
            let c = p_inv.mul(mij).neg();
            st.add_multiple(i, j, &c);
        }
    }
    let entries = st.m.diagonal_entries();
    debug_assert!(st.m.is_diagonal());
    let transform = st.c.unwrap_or_else(|| Matrix::identity(n, &template));
    Ok(Diagonalization { entries, transform })
}

/// Makes `m[i][i]` invertible via `x_i += x_j c` for some candidate `c`.
fn substitute<T: DivisionRing + InvolutiveRing>(
    st: &mut State<T>,
    i: usize,
    j: usize,
    units: &[T],
) -> Option<T> {
    let mij = st.m.get(i, j).clone();
    let mij_inv = mij.try_inv();
    let mut candidates: Vec<T> = Vec::new();
    for e in units {
        if let Some(inv) = &mij_inv {
            candidates.push(inv.mul(e));
        }
        candidates.push(e.clone());
    }
    for c in candidates {
        // New pivot: m_ii + m_ij c + conj(c) m_ji + conj(c) m_jj c.
        let cc = c.conj();
        let new =
            st.m.get(i, i)
                .add(&mij.mul(&c))
                .add(&cc.mul(st.m.get(j, i)))
                .add(&cc.mul(st.m.get(j, j)).mul(&c));
        if let Some(inv) = new.try_inv() {
            st.add_multiple(j, i, &c);
            debug_assert_eq!(st.m.get(i, i), &new);
            return Some(inv);
        }
    }
    None
}

/// Diagonal of a symmetric rational matrix after congruence; the fast path for
/// large trace forms. Zero entries mark a singular form.
///
/// Runs on checked `i128` fractions first and redoes the work on big rationals
/// if anything overflows.
pub fn symmetric_rational_diagonal(gram: &[Vec<Rational>]) -> Vec<Rational> {
    let small: Option<Vec<Vec<Small>>> = gram
        .iter()
        .enumerate()
        .map(|(i, row)| row[..=i].iter().map(Small::from_big).collect())
        .collect();
    if let Some(out) = small.and_then(lower_diagonal) {
        return out.into_iter().map(Small::to_big).collect();
    }
    let lower = gram
        .iter()
        .enumerate()
        .map(|(i, row)| row[..=i].to_vec())
        .collect();
    lower_diagonal(lower).expect("big rationals do not overflow")
}

/// Exact field operations that may fail (on overflow).
trait Scalar: Clone {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Option<Self>;
    fn sub(&self, other: &Self) -> Option<Self>;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn recip(&self) -> Option<Self>;
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn recip(&self) -> Option<Self> {
        Some(Rational::recip(self))
    }
}

/// A reduced fraction `n/d` with `d > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Small {
    n: i128,
    d: i128,
}

impl Small {
    fn from_big(q: &Rational) -> Option<Small> {
        Some(Small {
            n: q.numer().to_i128()?,
            d: q.denom().to_i128()?,
        })
    }

    fn to_big(self) -> Rational {
        Rational::new(self.n.into(), self.d.into())
    }

    fn reduced(n: i128, d: i128) -> Option<Small> {
        if n == 0 {
            return Some(Small { n: 0, d: 1 });
        }
        let g = n.gcd(&d);
        let (n, d) = (n / g, d / g);
        if d < 0 {
            Some(Small {
                n: n.checked_neg()?,
                d: d.checked_neg()?,
            })
        } else {
            Some(Small { n, d })
        }
    }
}

impl Scalar for Small {
    fn zero() -> Self {
        Small { n: 0, d: 1 }
    }
    fn is_zero(&self) -> bool {
        self.n == 0
    }
    fn add(&self, o: &Self) -> Option<Self> {
        if self.d == o.d {
            return Small::reduced(self.n.checked_add(o.n)?, self.d);
        }
        let g = self.d.gcd(&o.d);
        let (sd, od) = (self.d / g, o.d / g);
        let n = self.n.checked_mul(od)?.checked_add(o.n.checked_mul(sd)?)?;
        Small::reduced(n, self.d.checked_mul(od)?)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.add(&Small {
            n: o.n.checked_neg()?,
            d: o.d,
        })
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        if self.n == 0 || o.n == 0 {
            return Some(Self::zero());
        }
        let g1 = self.n.gcd(&o.d);
        let g2 = o.n.gcd(&self.d);
        let n = (self.n / g1).checked_mul(o.n / g2)?;
        let d = (self.d / g2).checked_mul(o.d / g1)?;
        Some(Small { n, d })
    }
    fn recip(&self) -> Option<Self> {
        Small::reduced(self.d, self.n)
    }
}

/// Symmetric elimination on a lower triangle `a[i][j]`, `j <= i`.
fn lower_diagonal<T: Scalar>(mut a: Vec<Vec<T>>) -> Option<Vec<T>> {
    let n = a.len();
    let mut out = Vec::with_capacity(n);
    let get = |a: &Vec<Vec<T>>, i: usize, j: usize| -> T {
        if j <= i {
            a[i][j].clone()
        } else {
            a[j][i].clone()
        }
    };
    let mut k = 0;
    while k < n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                sym_swap(&mut a, k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !get(&a, j, k).is_zero()) {
                // x_k += x_j: new a_kk = 2 a_jk since both diagonals vanish
                for s in 0..n {
                    if s == k {
                        continue;
                    }
                    let v = get(&a, j, s);
                    if v.is_zero() {
                        continue;
                    }
                    if s < k {
                        a[k][s] = a[k][s].add(&v)?;
                    } else {
                        a[s][k] = a[s][k].add(&v)?;
                    }
                }
                let ajk = get(&a, j, k);
                a[k][k] = ajk.add(&ajk)?;
            } else {
                out.push(T::zero());
                k += 1;
                continue;
            }
        }
        let p = a[k][k].clone();
        let p_inv = p.recip()?;
        let col: Vec<(usize, T)> = (k + 1..n)
            .filter(|&r| !a[r][k].is_zero())
            .map(|r| (r, a[r][k].clone()))
            .collect();
        for (idx, (r, ar)) in col.iter().enumerate() {
            let f = ar.mul(&p_inv)?;
            for (s, as_) in &col[..=idx] {
                a[*r][*s] = a[*r][*s].sub(&f.mul(as_)?)?;
            }
        }
        out.push(p);
        k += 1;
    }
    Some(out)
}

fn sym_swap<T: Clone>(a: &mut [Vec<T>], i: usize, j: usize) {
    let n = a.len();
    let perm = |x: usize| {
        if x == i {
            j
        } else if x == j {
            i
        } else {
            x
        }
    };
    let full = |r: usize, s: usize| {
        if s <= r {
            a[r][s].clone()
        } else {
            a[s][r].clone()
        }
    };
    let swapped: Vec<Vec<T>> = (0..n)
        .map(|r| (0..=r).map(|s| full(perm(r), perm(s))).collect())
        .collect();
    a.clone_from_slice(&swapped);
}

/// Count of positive minus negative entries; `None` if any entry is zero.
pub fn sign_count(signs: impl IntoIterator<Item = i32>) -> Option<i64> {
    let mut total = 0i64;
    for s in signs {
        if s == 0 {
            return None;
        }
        total += i64::from(s);
    }
    Some(total)
}

/// Sign of a rational as −1, 0, or 1.
pub fn rational_sign(q: &Rational) -> i32 {
    if Zero::is_zero(q) {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}
