//! Signatures of hermitian forms over algebras with involution, computed exactly
//! over towers of real square-root extensions of the rationals.
//!
//! ```
//! use hermsig::algebra::{AlgebraWithInvolution, DivisionData};
//! use hermsig::hermitian::HermForm;
//! use hermsig::numfield::{FieldElement, FieldTower};
//! use hermsig::signature::{find_reference_tuple, total_h_signature, DEFAULT_POOL_BUDGET};
//!
//! let f = FieldTower::from_rational_radicands(&[2]).unwrap();
//! let minus_one = FieldElement::from_integer(&f, -1);
//! let d = DivisionData::quaternion(minus_one.clone(), minus_one).unwrap();
//! let a = AlgebraWithInvolution::canonical(d).unwrap();
//! let refs = find_reference_tuple(&a, DEFAULT_POOL_BUDGET).unwrap();
//! let lines: Vec<String> = total_h_signature(&HermForm::unit(&a, 1), &refs)
//!     .unwrap()
//!     .iter()
//!     .map(|r| r.to_string())
//!     .collect();
//! assert_eq!(lines, [
//!     "P#0 signs=[+] nil=false lambda=2 ref=1 value=1",
//!     "P#1 signs=[-] nil=false lambda=2 ref=1 value=1",
//! ]);
//! ```

pub mod algebra;
pub mod congruence;
pub mod hermitian;
pub mod matrix;
pub mod numfield;
pub mod quadform;
pub mod signature;
