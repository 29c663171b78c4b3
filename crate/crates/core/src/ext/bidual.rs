//! Ext¹(E^∨, C) for a Drinfeld module E with `a_r = 1`.

use super::dual::{dual_tmodule, require_rank_two};
use super::Reduction;
use crate::biderivation::{inner_value, Biderivation};
use crate::error::{Error, Result};
use crate::field::KElement;
use crate::skew::{Coefficient, SkewMatrix, SkewPoly, TwistedMatrix, TwistedPoly};
use crate::tmodule::{DrinfeldModule, TModule};

/// A class in Ext¹(E^∨, C), reduced to `(u_1, ..., u_{r-2}, c + dτ)` with
/// all `u_i ∈ K`. Coordinates are `(u_1, ..., u_{r-2}, c, d)`, i.e. with
/// respect to the basis `e_1, ..., e_r`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtClassDualC {
    pub context: DrinfeldModule,
    pub coords: Vec<KElement>,
}

impl ExtClassDualC {
    pub fn value(&self) -> SkewMatrix {
        let fq = self.context.field();
        let r = self.context.rank();
        let mut row: Vec<SkewPoly> = self.coords[..r - 1].iter().cloned().map(SkewPoly::from_k).collect();
        row[r - 2] = SkewPoly::from_coeffs(fq, vec![self.coords[r - 2].clone(), self.coords[r - 1].clone()]);
        SkewMatrix::row(fq, row)
    }
}

fn require_monic(e: &DrinfeldModule) -> Result<()> {
    require_rank_two(e)?;
    if !e.a(e.rank()).is_one() {
        return Err(Error::Normalization(
            "the bidual construction needs a_r = 1; normalize the module first".into(),
        ));
    }
    Ok(())
}

/// Subtracts basic inner biderivations `v(s, c, m)` (the inner value of
/// `c τ^m` placed in coordinate s) until every coordinate but the last is
/// constant and the last has τ-degree at most 1:
/// * for `i = 1, ..., r-2`, while `deg u_i >= 1` use `v(i+1, lead u_i, deg u_i - 1)`,
///   whose coordinate i is `c τ^{m+1}`;
/// * then if `deg u_{r-1} >= 2` use `v(1, lead u_{r-1}, deg u_{r-1} - 2)`,
///   whose last coordinate is `c τ^{m+2} + (lower terms)`, and repeat.
///
/// The second step raises the degree of `u_1` to at most `n - 1`, so the
/// maximal degree drops on every round.
pub(crate) fn reduce_dual<C: Coefficient>(
    psi: &TModule,
    carlitz: &TModule,
    value: &TwistedMatrix<C>,
) -> (TwistedMatrix<C>, TwistedMatrix<C>) {
    let fq = psi.field();
    let k = psi.dim();
    let mut v = value.clone();
    let mut witness = TwistedMatrix::zeros(fq, 1, k);
    let mut subtract = |v: &mut TwistedMatrix<C>, s: usize, c: C, m: usize| {
        let mut u = TwistedMatrix::zeros(fq, 1, k);
        u.set(0, s, TwistedPoly::monomial(fq, c, m));
        *v = v.sub(&inner_value(&u, psi, carlitz).expect("shapes agree")).expect("shapes agree");
        witness = witness.add(&u).expect("shapes agree");
    };
    loop {
        for i in 0..k - 1 {
            while let Some(d) = v.get(0, i).degree().filter(|&d| d >= 1) {
                let c = v.get(0, i).leading();
                subtract(&mut v, i + 1, c, d - 1);
                debug_assert!(v.get(0, i).degree() < Some(d));
            }
        }
        match v.get(0, k - 1).degree() {
            Some(d) if d >= 2 => {
                let c = v.get(0, k - 1).leading();
                subtract(&mut v, 0, c, d - 2);
            }
            _ => break,
        }
    }
    (v, witness)
}

/// Reduces δ ∈ Der(Ψ, C), where Ψ presents E^∨.
pub fn reduce_dual_c(e: &DrinfeldModule, delta: &Biderivation) -> Result<Reduction<ExtClassDualC>> {
    require_monic(e)?;
    let fq = e.field();
    let psi = dual_tmodule(e)?.dual;
    let carlitz = DrinfeldModule::carlitz(fq).as_tmodule().clone();
    if delta.source() != &psi || delta.target() != &carlitz {
        return Err(Error::ModuleMismatch("expected a biderivation from E^∨ to the Carlitz module".into()));
    }
    let (v, w) = reduce_dual(&psi, &carlitz, delta.value());
    let r = e.rank();
    let mut coords: Vec<KElement> = (0..r - 1).map(|i| v.get(0, i).constant_term()).collect();
    coords.push(v.get(0, r - 2).coeff(1));
    Ok(Reduction {
        class: ExtClassDualC { context: e.clone(), coords },
        input: delta.clone(),
        reduced: delta.with_value(v)?,
        witness: w,
    })
}

/// Ξ(t): column i holds the reduced coordinates of `(θ + τ)(b e_i)` as
/// linear forms in b. The bottom-right entry must reproduce Φ(t).
pub fn bidual_tmodule(e: &DrinfeldModule) -> Result<TModule> {
    require_monic(e)?;
    let fq = e.field();
    let r = e.rank();
    let psi = dual_tmodule(e)?.dual;
    let carlitz = DrinfeldModule::carlitz(fq).as_tmodule().clone();
    let mut xi = SkewMatrix::zeros(fq, r, r);
    for i in 0..r {
        let mut basis: TwistedMatrix<SkewPoly> = TwistedMatrix::zeros(fq, 1, r - 1);
        let (pos, deg) = if i < r - 1 { (i, 0) } else { (r - 2, 1) };
        basis.set(0, pos, TwistedPoly::monomial(fq, SkewPoly::one(fq), deg));
        let acted = basis.left_mul(carlitz.phi_t())?;
        let (v, _) = reduce_dual(&psi, &carlitz, &acted);
        for j in 0..r - 1 {
            xi.set(j, i, v.get(0, j).constant_term());
        }
        xi.set(r - 1, i, v.get(0, r - 2).coeff(1));
    }
    if xi.get(r - 1, r - 1) != e.phi_t() {
        return Err(Error::Input("internal: bidual presentation does not reproduce Φ(t)".into()));
    }
    TModule::new(xi)
}

/// An isomorphic module with `a_r = 1`: conjugating by `c ∈ K^×` sends
/// `a_i` to `c a_i c^{-q^i}`, so a root of `c^{q^r - 1} = a_r` is needed.
/// Returns the new module and c.
pub fn normalize_leading(e: &DrinfeldModule) -> Result<(DrinfeldModule, KElement)> {
    let r = e.rank() as u32;
    let q = e.field().q();
    let k = q.checked_pow(r).map(|x| x - 1).ok_or_else(|| Error::Normalization("q^r overflows".into()))?;
    let a_r = e.a(r as usize);
    let c = a_r.kth_root(k).ok_or_else(|| {
        Error::Normalization(format!("a_r = {a_r} has no (q^r - 1)-th root in K, so E cannot be rescaled to a_r = 1"))
    })?;
    let coeffs = (1..=r)
        .map(|i| Ok(&(&c * &e.a(i as usize)) * &c.frobenius(i).inv()?))
        .collect::<Result<Vec<_>>>()?;
    Ok((DrinfeldModule::new(coeffs)?, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;
    use crate::parse::{parse_k_element, parse_matrix, parse_skew};

    fn drinfeld(fq: &Fq, coeffs: &[&str]) -> DrinfeldModule {
        DrinfeldModule::new(coeffs.iter().map(|s| parse_k_element(fq, s).unwrap()).collect()).unwrap()
    }

    #[test]
    fn rank_two_bidual() {
        let fq = Fq::prime(2).unwrap();
        let e = drinfeld(&fq, &["T", "1"]);
        let xi = bidual_tmodule(&e).unwrap();
        assert_eq!(xi.phi_t(), &parse_matrix(&fq, &[vec!["T", "0"], vec!["tau", "T + T*tau + tau^2"]]).unwrap());
    }

    #[test]
    fn rank_three_bidual_last_row() {
        let fq = Fq::prime(3).unwrap();
        let e = drinfeld(&fq, &["T", "T^2+1", "1"]);
        let xi = bidual_tmodule(&e).unwrap();
        // α_1 = τ^2 + a_2 τ, α_2 = τ, α_3 = Φ(t), coefficients on the left
        let expected = parse_matrix(
            &fq,
            &[
                vec!["T", "0", "0"],
                vec!["0", "T", "0"],
                vec!["(T^2+1)*tau + tau^2", "tau", "T + T*tau + (T^2+1)*tau^2 + tau^3"],
            ],
        )
        .unwrap();
        assert_eq!(xi.phi_t(), &expected);
    }

    #[test]
    fn reduce_dual_rank_two() {
        let fq = Fq::prime(2).unwrap();
        let e = drinfeld(&fq, &["T+1", "1"]);
        let psi = dual_tmodule(&e).unwrap().dual;
        let c = DrinfeldModule::carlitz(&fq).as_tmodule().clone();
        let v = SkewMatrix::row(&fq, vec![parse_skew(&fq, "tau^2").unwrap()]);
        let red = reduce_dual_c(&e, &Biderivation::new(psi, c, v).unwrap()).unwrap();
        // subtracting the inner value (-a_1 - 1)τ + τ^2 of u = 1 leaves (a_1 + 1)τ
        assert_eq!(red.class.coords, vec![KElement::zero(&fq), parse_k_element(&fq, "T").unwrap()]);
        assert!(red.certificate().check);
    }

    #[test]
    fn requires_monic_leading_coefficient() {
        let fq = Fq::prime(3).unwrap();
        let e = drinfeld(&fq, &["1", "2"]);
        assert!(matches!(bidual_tmodule(&e), Err(Error::Normalization(_))));
    }

    #[test]
    fn normalization_by_root() {
        let fq = Fq::prime(2).unwrap();
        // a_2 = θ^3 = θ^{q^2 - 1}, so c = θ
        let e = drinfeld(&fq, &["1", "T^3"]);
        let (n, c) = normalize_leading(&e).unwrap();
        assert_eq!(c, KElement::theta(&fq));
        assert!(n.a(2).is_one());
        assert_eq!(n.a(1), parse_k_element(&fq, "(1)/(T)").unwrap());
        let bad = drinfeld(&fq, &["1", "T"]);
        assert!(matches!(normalize_leading(&bad), Err(Error::Normalization(_))));
    }
}
