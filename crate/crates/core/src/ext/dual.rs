//! Ext¹(E, C) for a Drinfeld module E of rank r >= 2.

use super::Reduction;
use crate::biderivation::Biderivation;
use crate::error::{Error, Result};
use crate::field::KElement;
use crate::skew::{Coefficient, SkewMatrix, SkewPoly, SymbolicPoly, TwistedPoly};
use crate::tmodule::{DrinfeldModule, TModule, TModuleMorphism};

/// A class in Ext¹(E, C), given by its reduced representative
/// `b_0 + b_1 τ + ... + b_{r-1} τ^{r-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtClassEC {
    pub context: DrinfeldModule,
    pub coords: Vec<KElement>,
}

impl ExtClassEC {
    pub fn value(&self) -> SkewPoly {
        SkewPoly::from_coeffs(self.context.field(), self.coords.clone())
    }
}

pub(crate) fn require_rank_two(e: &DrinfeldModule) -> Result<()> {
    if e.rank() < 2 {
        return Err(Error::Unsupported(
            "rank >= 2 required; reducing Ext^1(C, C) needs roots of Artin-Schreier equations c - c^q = a".into(),
        ));
    }
    Ok(())
}

/// Lowers the τ-degree below r by subtracting the inner values of `c τ^m`,
/// `m = n - r, ..., 0`. Returns the reduced value and the witness.
pub(crate) fn reduce_ec<C: Coefficient>(e: &DrinfeldModule, value: &TwistedPoly<C>) -> (TwistedPoly<C>, TwistedPoly<C>) {
    let fq = e.field();
    let r = e.rank();
    let phi = e.phi_t();
    let carlitz = DrinfeldModule::carlitz(fq);
    let inv_ar = e.a(r).inv().expect("a_r is nonzero");
    let mut v = value.clone();
    let mut witness = TwistedPoly::zero(fq);
    while let Some(n) = v.degree().filter(|&n| n >= r) {
        let m = n - r;
        let c = v.leading().scaled(&inv_ar.frobenius(m as u32));
        let u = TwistedPoly::monomial(fq, c, m);
        let inner = u.right_mul(phi).sub(&u.left_mul(carlitz.phi_t()));
        v = v.sub(&inner);
        witness = witness.add(&u);
        debug_assert!(v.degree() < Some(n));
    }
    (v, witness)
}

fn check_pair(e: &DrinfeldModule, delta: &Biderivation) -> Result<()> {
    let carlitz = DrinfeldModule::carlitz(e.field());
    if delta.source() != e.as_tmodule() || delta.target() != carlitz.as_tmodule() {
        return Err(Error::ModuleMismatch("expected a biderivation from E to the Carlitz module".into()));
    }
    Ok(())
}

/// The reduced representative of δ ∈ Der(Φ, C), of τ-degree at most r - 1.
pub fn reduce_vs_carlitz(e: &DrinfeldModule, delta: &Biderivation) -> Result<Reduction<ExtClassEC>> {
    require_rank_two(e)?;
    check_pair(e, delta)?;
    let fq = e.field();
    let (v, w) = reduce_ec(e, delta.value().get(0, 0));
    let coords = (0..e.rank()).map(|i| v.coeff(i)).collect();
    let one = |p: SkewPoly| SkewMatrix::from_rows(fq, vec![vec![p]]).expect("1x1");
    Ok(Reduction {
        class: ExtClassEC { context: e.clone(), coords },
        input: delta.clone(),
        reduced: delta.with_value(one(v))?,
        witness: one(w),
    })
}

/// The t-module Ext¹(E, C) and its Der₀ part E^∨.
#[derive(Clone, Debug, PartialEq)]
pub struct DualTModule {
    /// Π(t), acting on the coordinates `b_0, ..., b_{r-1}`.
    pub pi: TModule,
    /// The lower-right block of Π(t), acting on `b_1, ..., b_{r-1}`.
    pub dual: TModule,
}

/// Computes Π(t) column by column: column i holds the reduced coordinates of
/// `t * (b τ^i) = (θ + τ) b τ^i` as linear forms in b.
pub fn dual_tmodule(e: &DrinfeldModule) -> Result<DualTModule> {
    require_rank_two(e)?;
    let fq = e.field();
    let r = e.rank();
    let carlitz = DrinfeldModule::carlitz(fq);
    let mut pi = SkewMatrix::zeros(fq, r, r);
    for i in 0..r {
        let basis: SymbolicPoly = TwistedPoly::monomial(fq, SkewPoly::one(fq), i);
        let (v, _) = reduce_ec(e, &basis.left_mul(carlitz.phi_t()));
        for j in 0..r {
            pi.set(j, i, v.coeff(j));
        }
    }
    let dual = pi.block(1..r, 1..r);
    Ok(DualTModule { pi: TModule::new(pi)?, dual: TModule::new(dual)? })
}

/// The matrix of `β^∨: Ext¹(F, C) -> Ext¹(E, C)`, `δ ↦ δ β`, for a morphism
/// `β: E -> F` of Drinfeld modules of equal rank. Column i holds the reduced
/// coordinates of `(b τ^i) β` as linear forms in b.
pub fn dual_morphism(beta: &TModuleMorphism) -> Result<SkewMatrix> {
    let (Some(e), Some(f)) = (beta.source().as_drinfeld(), beta.target().as_drinfeld()) else {
        return Err(Error::Input("dual morphisms are defined between Drinfeld modules".into()));
    };
    if e.rank() != f.rank() {
        return Err(Error::ModuleMismatch("Drinfeld modules of different ranks have no nonzero morphisms".into()));
    }
    require_rank_two(&e)?;
    let fq = e.field();
    let r = e.rank();
    let b = beta.beta().get(0, 0);
    let mut m = SkewMatrix::zeros(fq, r, r);
    for i in 0..r {
        let basis: SymbolicPoly = TwistedPoly::monomial(fq, SkewPoly::one(fq), i);
        let (v, _) = reduce_ec(&e, &basis.right_mul(b));
        for j in 0..r {
            m.set(j, i, v.coeff(j));
        }
    }
    Ok(m)
}
