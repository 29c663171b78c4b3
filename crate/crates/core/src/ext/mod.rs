//! Canonical representatives of Ext¹ classes and the t-module structures
//! they carry.
//!
//! Every reducer works over an arbitrary [`Coefficient`] type. Fed with
//! symbolic coefficients (linear forms in an indeterminate `b ∈ K`), the
//! same code computes how t acts on a basis vector `b·e_i`, which is how the
//! presentations Π(t) and Ξ(t) are obtained.
//!
//! [`Coefficient`]: crate::skew::Coefficient

mod bidual;
mod dual;
mod lie;
mod splitting;
mod tensor;

pub use bidual::{bidual_tmodule, normalize_leading, reduce_dual_c, ExtClassDualC};
pub use dual::{dual_morphism, dual_tmodule, reduce_vs_carlitz, DualTModule, ExtClassEC};
pub use lie::{ext0_projection, lie_inner_solve, lie_inner_value};
pub use splitting::{default_bound, find_splitting};
pub use tensor::{carlitz_ext_structure, reduce_carlitz, ExtClassCtens};

use crate::biderivation::Biderivation;
use crate::skew::SkewMatrix;

/// The outcome of a reduction: `input - reduced = inner(witness)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Reduction<T> {
    pub class: T,
    pub input: Biderivation,
    pub reduced: Biderivation,
    pub witness: SkewMatrix,
}

/// An auditable record of a reduction, with the identity recomputed.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub input: Biderivation,
    pub reduced: Biderivation,
    pub witness: SkewMatrix,
    pub check: bool,
}

impl<T> Reduction<T> {
    pub fn certificate(&self) -> Certificate {
        let check = Biderivation::inner(&self.witness, self.input.source(), self.input.target())
            .and_then(|inner| Ok(self.input.sub(&self.reduced)? == inner))
            .unwrap_or(false);
        Certificate {
            input: self.input.clone(),
            reduced: self.reduced.clone(),
            witness: self.witness.clone(),
            check,
        }
    }
}
