//! Ext¹(C^{⊗m}, C^{⊗n}) for n > m.
//!
//! Write `T(x) = xθ - C^{⊗n}(t) x` for a column x. Column j of the inner
//! value of U is `T(u_j) + u_{j-1}` for j >= 2 and `T(u_1) + u_m τ` for
//! j = 1. Choosing `u_m = X` and `u_{j-1} = v_j - T(u_j)` clears columns
//! `2..m` of `V - inner(U)` and leaves in column 1
//!
//! ```text
//! v' - R(X),   v' = Σ_j (-1)^{j-1} T^{j-1}(v_j),   R(X) = Xτ - (-1)^m T^m(X).
//! ```
//!
//! T only raises τ-degrees when it carries row 1 into row n, so the top
//! τ-coefficient of `R(L τ^{D-1} e_i)` is L in row i plus terms in rows
//! below i. Sweeping rows top to bottom therefore kills degree D; repeating
//! down to D = 0 leaves a constant first column.

use super::Reduction;
use crate::biderivation::{inner_value, Biderivation};
use crate::error::{Error, Result};
use crate::field::{Fq, KElement};
use crate::skew::{Coefficient, SkewMatrix, SkewPoly, TwistedMatrix, TwistedPoly};
use crate::tmodule::{carlitz_tensor, TModule};

/// A class in Ext¹(C^{⊗m}, C^{⊗n}), reduced to a constant matrix supported
/// on the first column; `coords` is that column.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtClassCtens {
    pub m: usize,
    pub n: usize,
    pub coords: Vec<KElement>,
}

impl ExtClassCtens {
    pub fn value(&self, fq: &Fq) -> SkewMatrix {
        let mut v = SkewMatrix::zeros(fq, self.n, self.m);
        for (i, c) in self.coords.iter().enumerate() {
            v.set(i, 0, SkewPoly::from_k(c.clone()));
        }
        v
    }
}

fn require_n_above_m(m: usize, n: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::Input("tensor powers start at 1".into()));
    }
    if n <= m {
        return Err(Error::Unsupported(format!(
            "Ext^1(C^⊗{m}, C^⊗{n}) with n <= m is not a t-module in general: its t-action involves τ^(-1) (adjoint structure)"
        )));
    }
    Ok(())
}

type Column<C> = Vec<TwistedPoly<C>>;

fn t_map<C: Coefficient>(fq: &Fq, x: &Column<C>) -> Column<C> {
    let n = x.len();
    let theta = KElement::theta(fq);
    let theta_poly = SkewPoly::from_k(theta.clone());
    (0..n)
        .map(|i| {
            let own = x[i].right_mul(&theta_poly).sub(&x[i].scale(&theta));
            if i + 1 < n {
                own.sub(&x[i + 1])
            } else {
                own.sub(&x[0].twist(1))
            }
        })
        .collect()
}

fn sub_col<C: Coefficient>(a: &Column<C>, b: &Column<C>) -> Column<C> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

fn add_col<C: Coefficient>(a: &Column<C>, b: &Column<C>) -> Column<C> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

fn r_map<C: Coefficient>(fq: &Fq, m: usize, x: &Column<C>) -> Column<C> {
    let mut t = x.clone();
    for _ in 0..m {
        t = t_map(fq, &t);
    }
    let shifted: Column<C> = x.iter().map(|p| p.shift(1)).collect();
    if m.is_multiple_of(2) {
        sub_col(&shifted, &t)
    } else {
        add_col(&shifted, &t)
    }
}

/// Returns the reduced value (constants in column 1, zeros elsewhere) and
/// the witness.
pub(crate) fn reduce_tensor<C: Coefficient>(
    source: &TModule,
    target: &TModule,
    value: &TwistedMatrix<C>,
) -> (TwistedMatrix<C>, TwistedMatrix<C>) {
    let fq = source.field();
    let (m, n) = (source.dim(), target.dim());
    let col = |j: usize| -> Column<C> { (0..n).map(|i| value.get(i, j).clone()).collect() };

    let mut folded: Column<C> = vec![TwistedPoly::zero(fq); n];
    for j in 0..m {
        let mut t = col(j);
        for _ in 0..j {
            t = t_map(fq, &t);
        }
        folded = if j % 2 == 0 { add_col(&folded, &t) } else { sub_col(&folded, &t) };
    }

    let mut x: Column<C> = vec![TwistedPoly::zero(fq); n];
    let mut w = folded;
    while let Some(top) = w.iter().filter_map(TwistedPoly::degree).max().filter(|&d| d >= 1) {
        for i in 0..n {
            let lead = w[i].coeff(top);
            if lead.is_zero() {
                continue;
            }
            let mut step: Column<C> = vec![TwistedPoly::zero(fq); n];
            step[i] = TwistedPoly::monomial(fq, lead, top - 1);
            w = sub_col(&w, &r_map(fq, m, &step));
            x = add_col(&x, &step);
        }
        debug_assert!(w.iter().all(|p| p.degree().is_none_or(|d| d < top)));
    }

    let mut u = TwistedMatrix::zeros(fq, n, m);
    let mut cur = x;
    for j in (0..m).rev() {
        for (i, p) in cur.iter().enumerate() {
            u.set(i, j, p.clone());
        }
        if j > 0 {
            cur = sub_col(&col(j), &t_map(fq, &cur));
        }
    }
    let reduced = value.sub(&inner_value(&u, source, target).expect("shapes agree")).expect("shapes agree");
    debug_assert!((0..n).all(|i| (1..m).all(|j| reduced.get(i, j).is_zero())));
    debug_assert!((0..n).all(|i| reduced.get(i, 0).degree().unwrap_or(0) == 0));
    (reduced, u)
}

/// Reduces δ ∈ Der(C^{⊗m}, C^{⊗n}) to a constant first column.
pub fn reduce_carlitz(m: usize, n: usize, delta: &Biderivation) -> Result<Reduction<ExtClassCtens>> {
    require_n_above_m(m, n)?;
    let fq = delta.source().field();
    let source = carlitz_tensor(fq, m)?;
    let target = carlitz_tensor(fq, n)?;
    if delta.source() != &source || delta.target() != &target {
        return Err(Error::ModuleMismatch(format!("expected a biderivation from C^⊗{m} to C^⊗{n}")));
    }
    let (v, u) = reduce_tensor(&source, &target, delta.value());
    let coords = (0..n).map(|i| v.get(i, 0).constant_term()).collect();
    Ok(Reduction {
        class: ExtClassCtens { m, n, coords },
        input: delta.clone(),
        reduced: delta.with_value(v)?,
        witness: u,
    })
}

/// Π(t) on Ext¹(C^{⊗m}, C^{⊗n}): column i holds the reduced coordinates of
/// `C^{⊗n}(t) (b e_i)` with `e_i = Q_{i1}`.
pub fn carlitz_ext_structure(fq: &Fq, m: usize, n: usize) -> Result<TModule> {
    require_n_above_m(m, n)?;
    let source = carlitz_tensor(fq, m)?;
    let target = carlitz_tensor(fq, n)?;
    let mut pi = SkewMatrix::zeros(fq, n, n);
    for i in 0..n {
        let mut basis: TwistedMatrix<SkewPoly> = TwistedMatrix::zeros(fq, n, m);
        basis.set(i, 0, TwistedPoly::constant(fq, SkewPoly::one(fq)));
        let acted = basis.left_mul(target.phi_t())?;
        let (v, _) = reduce_tensor(&source, &target, &acted);
        for j in 0..n {
            pi.set(j, i, v.get(j, 0).constant_term());
        }
    }
    TModule::new(pi)
}
