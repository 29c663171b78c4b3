//! An independent check for "δ is inner": a direct search for U with
//! `U Φ(t) - Ψ(t) U = δ(t)`, sharing no code with the reducers.
//!
//! Write `U = Σ_k U_k τ^k`. The τ^g-coefficient of `U Φ(t)` is K-linear in
//! the `U_k`, while that of `Ψ(t) U` involves the twists `U_k^{q^h}`. Treating
//! each twist `y_{b,h} = u_b^{q^h}` as its own unknown gives a K-linear
//! system whose solutions contain all genuine ones. It is solved by
//! propagation: an equation with a single unknown fixes it (a fixed twist
//! fixes its base unknown through a q^h-th root, which must exist in K), and
//! when propagation stalls a Gaussian elimination looks for further forced
//! unknowns. Every step only uses necessary conditions, so an inconsistency
//! proves that no witness of degree at most the bound exists.

use std::collections::BTreeMap;

use crate::biderivation::Biderivation;
use crate::error::{Error, Result};
use crate::field::KElement;
use crate::skew::{KMatrix, SkewMatrix, SkewPoly};

/// Default search bound: `max(deg δ(t), r) + 3`, with r the largest τ-degree
/// in the two presentations.
pub fn default_bound(delta: &Biderivation) -> usize {
    let r = delta.source().phi_t().degree().unwrap_or(0).max(delta.target().phi_t().degree().unwrap_or(0));
    delta.value().degree().unwrap_or(0).max(r) + 3
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Var {
    base: usize,
    twist: usize,
}

struct Equation {
    terms: BTreeMap<Var, KElement>,
    rhs: KElement,
}

enum Outcome {
    Progress,
    Stalled,
    Inconsistent,
}

struct System {
    equations: Vec<Equation>,
    known: Vec<Option<KElement>>,
}

impl System {
    fn value_of(&self, v: Var) -> Option<KElement> {
        self.known[v.base].as_ref().map(|x| x.frobenius(v.twist as u32))
    }

    /// Equations with known unknowns substituted; `None` on a violated one.
    fn residual(&self) -> Option<Vec<Equation>> {
        let mut out = Vec::new();
        for eq in &self.equations {
            let mut rhs = eq.rhs.clone();
            let mut terms = BTreeMap::new();
            for (&v, c) in &eq.terms {
                match self.value_of(v) {
                    Some(x) => rhs = rhs - c * &x,
                    None => {
                        terms.insert(v, c.clone());
                    }
                }
            }
            if terms.is_empty() {
                if !rhs.is_zero() {
                    return None;
                }
            } else {
                out.push(Equation { terms, rhs });
            }
        }
        Some(out)
    }

    /// Records `y_v = x`; false if x has no q^h-th root in K.
    fn assign(&mut self, v: Var, x: KElement) -> bool {
        match x.frobenius_root(v.twist as u32) {
            Some(root) => {
                self.known[v.base] = Some(root);
                true
            }
            None => false,
        }
    }

    fn propagate(&mut self) -> Outcome {
        let Some(eqs) = self.residual() else { return Outcome::Inconsistent };
        let mut progress = false;
        for eq in &eqs {
            if eq.terms.len() != 1 {
                continue;
            }
            let (&v, c) = eq.terms.iter().next().unwrap();
            if self.known[v.base].is_some() {
                continue;
            }
            let x = eq.rhs.div(c).expect("nonzero coefficient");
            if !self.assign(v, x) {
                return Outcome::Inconsistent;
            }
            progress = true;
        }
        if progress {
            Outcome::Progress
        } else {
            Outcome::Stalled
        }
    }

    fn eliminate(&mut self) -> Outcome {
        let Some(eqs) = self.residual() else { return Outcome::Inconsistent };
        if eqs.is_empty() {
            return Outcome::Stalled;
        }
        let vars: Vec<Var> = {
            let mut all: Vec<Var> = eqs.iter().flat_map(|e| e.terms.keys().copied()).collect();
            all.sort();
            all.dedup();
            all
        };
        let index: BTreeMap<Var, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let fq = eqs[0].rhs.field().clone();
        let mut a = KMatrix::zeros(&fq, eqs.len(), vars.len() + 1);
        for (r, eq) in eqs.iter().enumerate() {
            for (v, c) in &eq.terms {
                a.set(r, index[v], c.clone());
            }
            a.set(r, vars.len(), eq.rhs.clone());
        }
        let (red, pivots) = a.rref();
        if pivots.last() == Some(&vars.len()) {
            return Outcome::Inconsistent;
        }
        let mut progress = false;
        for (r, &p) in pivots.iter().enumerate() {
            let alone = (p + 1..vars.len()).all(|j| red.get(r, j).is_zero());
            if alone && self.known[vars[p].base].is_none() {
                if !self.assign(vars[p], red.get(r, vars.len()).clone()) {
                    return Outcome::Inconsistent;
                }
                progress = true;
            }
        }
        if progress {
            Outcome::Progress
        } else {
            Outcome::Stalled
        }
    }
}

/// Searches for U of τ-degree at most `bound` with `inner(U) = δ`.
///
/// `Ok(None)` means no such U exists. `Err(Undetermined)` is returned in the
/// rare case where the relaxed system leaves unknowns free and the zero
/// completion does not verify, so neither answer is certain.
pub fn find_splitting(delta: &Biderivation, bound: usize) -> Result<Option<SkewMatrix>> {
    let fq = delta.source().field().clone();
    let phi = delta.source().phi_t();
    let psi = delta.target().phi_t();
    let (e, d) = delta.value().shape();
    let slots = bound + 1;
    let base = |i: usize, j: usize, k: usize| (i * d + j) * slots + k;
    let top = delta
        .value()
        .degree()
        .unwrap_or(0)
        .max(bound + phi.degree().unwrap_or(0).max(psi.degree().unwrap_or(0)));

    let mut equations = Vec::new();
    for i in 0..e {
        for j in 0..d {
            let mut by_grade: Vec<BTreeMap<Var, KElement>> = vec![BTreeMap::new(); top + 1];
            let mut add = |g: usize, v: Var, c: KElement| {
                let slot = by_grade[g].entry(v).or_insert_with(|| KElement::zero(&fq));
                *slot = &*slot + &c;
            };
            for l in 0..d {
                for (s, a) in phi.get(l, j).coeffs().iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for k in 0..slots {
                        add(k + s, Var { base: base(i, l, k), twist: 0 }, a.frobenius(k as u32));
                    }
                }
            }
            for l in 0..e {
                for (h, a) in psi.get(i, l).coeffs().iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for k in 0..slots {
                        add(k + h, Var { base: base(l, j, k), twist: h }, -a);
                    }
                }
            }
            let target = delta.value().get(i, j);
            for (g, mut terms) in by_grade.into_iter().enumerate() {
                terms.retain(|_, c| !c.is_zero());
                let rhs = target.coeff(g);
                if terms.is_empty() && rhs.is_zero() {
                    continue;
                }
                equations.push(Equation { terms, rhs });
            }
        }
    }

    let mut system = System { equations, known: vec![None; e * d * slots] };
    loop {
        match system.propagate() {
            Outcome::Inconsistent => return Ok(None),
            Outcome::Progress => continue,
            Outcome::Stalled => {}
        }
        match system.eliminate() {
            Outcome::Inconsistent => return Ok(None),
            Outcome::Progress => continue,
            Outcome::Stalled => break,
        }
    }

    let determined = system.known.iter().all(Option::is_some);
    let mut u = SkewMatrix::zeros(&fq, e, d);
    for i in 0..e {
        for j in 0..d {
            let coeffs =
                (0..slots).map(|k| system.known[base(i, j, k)].clone().unwrap_or_else(|| KElement::zero(&fq))).collect();
            u.set(i, j, SkewPoly::from_coeffs(&fq, coeffs));
        }
    }
    let verified = Biderivation::inner(&u, delta.source(), delta.target())?.value() == delta.value();
    match (verified, determined) {
        (true, _) => Ok(Some(u)),
        (false, true) => Ok(None),
        (false, false) => Err(Error::Undetermined(format!(
            "the graded system leaves {} unknowns free up to degree {bound}",
            system.known.iter().filter(|k| k.is_none()).count()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;
    use crate::parse::{parse_k_element, parse_matrix, parse_skew};
    use crate::tmodule::{carlitz_tensor, DrinfeldModule, TModule};

    fn one(fq: &Fq, s: &str) -> SkewMatrix {
        SkewMatrix::from_rows(fq, vec![vec![parse_skew(fq, s).unwrap()]]).unwrap()
    }

    fn rank_two(fq: &Fq) -> TModule {
        DrinfeldModule::new(vec![KElement::theta(fq), parse_k_element(fq, "T+1").unwrap()])
            .unwrap()
            .as_tmodule()
            .clone()
    }

    #[test]
    fn zero_splits_with_zero_witness() {
        let fq = Fq::prime(3).unwrap();
        let c = DrinfeldModule::carlitz(&fq).as_tmodule().clone();
        let d = Biderivation::zero(rank_two(&fq), c);
        assert!(find_splitting(&d, 4).unwrap().unwrap().is_zero());
    }

    #[test]
    fn inner_values_split() {
        let fq = Fq::prime(3).unwrap();
        let e = rank_two(&fq);
        let c = DrinfeldModule::carlitz(&fq).as_tmodule().clone();
        let u = one(&fq, "(1)/(T) + T^2*tau");
        let d = Biderivation::inner(&u, &e, &c).unwrap();
        let w = find_splitting(&d, 3).unwrap().unwrap();
        assert_eq!(Biderivation::inner(&w, &e, &c).unwrap(), d);
    }

    #[test]
    fn reduced_class_does_not_split() {
        let fq = Fq::prime(2).unwrap();
        let e = rank_two(&fq);
        let c = DrinfeldModule::carlitz(&fq).as_tmodule().clone();
        let d = Biderivation::new(e, c, one(&fq, "tau")).unwrap();
        assert_eq!(find_splitting(&d, 5).unwrap(), None);
    }

    #[test]
    fn tensor_power_witnesses() {
        let fq = Fq::prime(2).unwrap();
        let c1 = carlitz_tensor(&fq, 1).unwrap();
        let c2 = carlitz_tensor(&fq, 2).unwrap();
        let u = parse_matrix(&fq, &[vec!["T*tau"], vec!["1 + tau^2"]]).unwrap();
        let d = Biderivation::inner(&u, &c1, &c2).unwrap();
        let w = find_splitting(&d, 3).unwrap().unwrap();
        assert_eq!(Biderivation::inner(&w, &c1, &c2).unwrap(), d);
        let reduced = Biderivation::new(c1, c2, parse_matrix(&fq, &[vec!["1"], vec!["0"]]).unwrap()).unwrap();
        assert_eq!(find_splitting(&reduced, 4).unwrap(), None);
    }
}
