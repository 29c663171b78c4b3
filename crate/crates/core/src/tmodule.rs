//! t-modules `E = (G_a^d, Φ)` presented by the single matrix Φ(t).
//!
//! Elements of A = F_q[t] are passed around as [`FqPoly`], read as
//! polynomials in t.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fq, FqPoly, KElement};
use crate::skew::{KMatrix, SkewMatrix, SkewPoly};

/// Known families, remembered so that the weight can be reported.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Family {
    Drinfeld { rank: usize },
    CarlitzTensor { n: usize },
    General,
}

/// A t-module presentation `(d, Φ(t))` with `dΦ(t) = θ I_d + N`, N nilpotent.
#[derive(Clone)]
pub struct TModule {
    phi_t: SkewMatrix,
    family: Family,
}

impl PartialEq for TModule {
    fn eq(&self, other: &Self) -> bool {
        self.phi_t == other.phi_t
    }
}

impl fmt::Debug for TModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TModule({})", self.phi_t)
    }
}

/// wt(E) = d/r, for the families where the rank is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weight {
    Exact { num: u64, den: u64 },
    Unknown,
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Exact { num, den: 1 } => write!(f, "{num}"),
            Weight::Exact { num, den } => write!(f, "{num}/{den}"),
            Weight::Unknown => write!(f, "unknown"),
        }
    }
}

impl TModule {
    /// Validates that `phi_t` is square with constant term θI + nilpotent.
    pub fn new(phi_t: SkewMatrix) -> Result<Self> {
        Self::with_family(phi_t, Family::General)
    }

    fn with_family(phi_t: SkewMatrix, family: Family) -> Result<Self> {
        let d = phi_t.rows();
        if d == 0 || phi_t.cols() != d {
            return Err(Error::NotTModule(format!("Φ(t) must be square and nonempty, got {}x{}", d, phi_t.cols())));
        }
        let fq = phi_t.field().clone();
        let n = phi_t.constant_part().sub(&KMatrix::identity(&fq, d).scale(&KElement::theta(&fq)))?;
        if !n.pow(d as u32)?.is_zero() {
            return Err(Error::NotTModule("dΦ(t) - θI is not nilpotent".into()));
        }
        Ok(TModule { phi_t, family })
    }

    pub fn field(&self) -> &Fq {
        self.phi_t.field()
    }

    pub fn dim(&self) -> usize {
        self.phi_t.rows()
    }

    pub fn phi_t(&self) -> &SkewMatrix {
        &self.phi_t
    }

    /// Φ(a) for `a ∈ F_q[t]`, by Horner evaluation.
    pub fn phi_eval(&self, a: &FqPoly) -> SkewMatrix {
        let fq = self.field();
        let id = SkewMatrix::identity(fq, self.dim());
        let mut acc = SkewMatrix::zeros(fq, self.dim(), self.dim());
        for &c in a.0.iter().rev() {
            acc = acc.mul(&self.phi_t).expect("square");
            if !c.is_zero() {
                acc = acc.add(&id.scale(&KElement::from_fq(fq, c))).expect("square");
            }
        }
        acc
    }

    /// The tangent action dΦ(t) = θI + N on Lie(E).
    pub fn lie(&self) -> KMatrix {
        self.phi_t.constant_part()
    }

    /// The nilpotent part N of dΦ(t).
    pub fn lie_nilpotent(&self) -> KMatrix {
        let fq = self.field();
        self.lie().sub(&KMatrix::identity(fq, self.dim()).scale(&KElement::theta(fq))).expect("square")
    }

    pub fn weight(&self) -> Weight {
        match self.family {
            Family::Drinfeld { rank } => Weight::Exact { num: 1, den: rank as u64 },
            Family::CarlitzTensor { n } => Weight::Exact { num: n as u64, den: 1 },
            Family::General => Weight::Unknown,
        }
    }

    /// Reads a one-dimensional presentation `θ + a_1 τ + ...` back as a
    /// Drinfeld module.
    pub fn as_drinfeld(&self) -> Option<DrinfeldModule> {
        if self.dim() != 1 {
            return None;
        }
        let p = self.phi_t.get(0, 0);
        let r = p.degree()?;
        if r == 0 || p.constant_term() != KElement::theta(self.field()) {
            return None;
        }
        DrinfeldModule::new(p.coeffs()[1..].to_vec()).ok()
    }
}

/// `C^{⊗n}(t) = θI_n + N_n + E_n τ`.
pub fn carlitz_tensor(fq: &Fq, n: usize) -> Result<TModule> {
    if n == 0 {
        return Err(Error::Input("tensor power must be at least 1".into()));
    }
    let mut m = SkewMatrix::zeros(fq, n, n);
    for i in 0..n {
        m.set(i, i, SkewPoly::from_k(KElement::theta(fq)));
        if i + 1 < n {
            m.set(i, i + 1, SkewPoly::one(fq));
        }
    }
    let corner = m.get(n - 1, 0).add(&SkewPoly::tau(fq));
    m.set(n - 1, 0, corner);
    TModule::with_family(m, Family::CarlitzTensor { n })
}

/// A Drinfeld module `Φ(t) = θ + a_1 τ + ... + a_r τ^r` with `a_r ≠ 0`.
#[derive(Clone, PartialEq)]
pub struct DrinfeldModule {
    coeffs: Vec<KElement>,
    module: TModule,
}

impl fmt::Debug for DrinfeldModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DrinfeldModule({})", self.module.phi_t.get(0, 0))
    }
}

impl DrinfeldModule {
    /// Builds the module from `a_1, ..., a_r`.
    pub fn new(coeffs: Vec<KElement>) -> Result<Self> {
        let Some(last) = coeffs.last() else {
            return Err(Error::NotDrinfeld("no coefficients given".into()));
        };
        if last.is_zero() {
            return Err(Error::NotDrinfeld("leading coefficient a_r is zero".into()));
        }
        let fq = last.field().clone();
        let mut all = vec![KElement::theta(&fq)];
        all.extend(coeffs.iter().cloned());
        let phi = SkewMatrix::from_rows(&fq, vec![vec![SkewPoly::from_coeffs(&fq, all)]])?;
        let module = TModule::with_family(phi, Family::Drinfeld { rank: coeffs.len() })?;
        Ok(DrinfeldModule { coeffs, module })
    }

    /// The Carlitz module `θ + τ`.
    pub fn carlitz(fq: &Fq) -> Self {
        Self::new(vec![KElement::one(fq)]).expect("valid")
    }

    pub fn field(&self) -> &Fq {
        self.module.field()
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    /// `a_i` for `1 <= i <= r`; `a_0` is θ.
    pub fn a(&self, i: usize) -> KElement {
        if i == 0 {
            KElement::theta(self.field())
        } else {
            self.coeffs[i - 1].clone()
        }
    }

    pub fn coeffs(&self) -> &[KElement] {
        &self.coeffs
    }

    pub fn phi_t(&self) -> &SkewPoly {
        self.module.phi_t.get(0, 0)
    }

    pub fn as_tmodule(&self) -> &TModule {
        &self.module
    }
}

/// Checks `β Φ_E(t) = Φ_F(t) β`; checking at t suffices since t generates.
pub fn is_morphism(beta: &SkewMatrix, source: &TModule, target: &TModule) -> Result<bool> {
    if beta.shape() != (target.dim(), source.dim()) {
        return Err(Error::DimensionMismatch(format!(
            "morphism {}x{} between modules of dimensions {} and {}",
            beta.rows(),
            beta.cols(),
            source.dim(),
            target.dim()
        )));
    }
    Ok(beta.mul(source.phi_t())? == target.phi_t().mul(beta)?)
}

/// A morphism `β: E -> F`, validated on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct TModuleMorphism {
    source: TModule,
    target: TModule,
    beta: SkewMatrix,
}

impl TModuleMorphism {
    pub fn new(beta: SkewMatrix, source: TModule, target: TModule) -> Result<Self> {
        if !is_morphism(&beta, &source, &target)? {
            return Err(Error::NotMorphism("β Φ_E(t) ≠ Φ_F(t) β".into()));
        }
        Ok(TModuleMorphism { source, target, beta })
    }

    pub fn source(&self) -> &TModule {
        &self.source
    }

    pub fn target(&self) -> &TModule {
        &self.target
    }

    pub fn beta(&self) -> &SkewMatrix {
        &self.beta
    }

    /// `self ∘ other`, i.e. first `other`, then `self`.
    pub fn compose(&self, other: &TModuleMorphism) -> Result<TModuleMorphism> {
        if other.target != self.source {
            return Err(Error::ModuleMismatch("composition of non-composable morphisms".into()));
        }
        Ok(TModuleMorphism {
            source: other.source.clone(),
            target: self.target.clone(),
            beta: self.beta.mul(&other.beta)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_k_element, parse_skew};

    fn t_poly(fq: &Fq, c: &[i64]) -> FqPoly {
        FqPoly::from_coeffs(c.iter().map(|&x| fq.from_int(x)).collect())
    }

    #[test]
    fn make_drinfeld_examples() {
        let fq = Fq::prime(3).unwrap();
        let c = DrinfeldModule::carlitz(&fq);
        assert_eq!(c.phi_t(), &parse_skew(&fq, "T + tau").unwrap());
        let e = DrinfeldModule::new(vec![KElement::theta(&fq), KElement::one(&fq)]).unwrap();
        assert_eq!(e.phi_t(), &parse_skew(&fq, "T + T*tau + tau^2").unwrap());
        assert_eq!(e.rank(), 2);
        let bad = DrinfeldModule::new(vec![KElement::one(&fq), KElement::zero(&fq)]);
        assert!(matches!(bad, Err(Error::NotDrinfeld(_))));
        assert!(matches!(DrinfeldModule::new(vec![]), Err(Error::NotDrinfeld(_))));
    }

    #[test]
    fn carlitz_tensor_shapes() {
        let fq = Fq::prime(2).unwrap();
        assert_eq!(carlitz_tensor(&fq, 1).unwrap(), DrinfeldModule::carlitz(&fq).as_tmodule().clone());
        let c3 = carlitz_tensor(&fq, 3).unwrap();
        let expected = crate::parse::parse_matrix(
            &fq,
            &[vec!["T", "1", "0"], vec!["0", "T", "1"], vec!["tau", "0", "T"]],
        )
        .unwrap();
        assert_eq!(c3.phi_t(), &expected);
        assert_eq!(c3.weight(), Weight::Exact { num: 3, den: 1 });
        assert!(carlitz_tensor(&fq, 0).is_err());
    }

    #[test]
    fn phi_eval_of_t_squared() {
        let fq = Fq::prime(2).unwrap();
        let c = DrinfeldModule::carlitz(&fq);
        let sq = c.as_tmodule().phi_eval(&t_poly(&fq, &[0, 0, 1]));
        assert_eq!(sq.get(0, 0), &parse_skew(&fq, "T^2 + (T+T^2)*tau + tau^2").unwrap());
        assert_eq!(c.as_tmodule().phi_eval(&t_poly(&fq, &[1])), SkewMatrix::identity(&fq, 1));
    }

    #[test]
    fn morphism_checks() {
        let fq = Fq::prime(3).unwrap();
        let e = DrinfeldModule::new(vec![KElement::theta(&fq), KElement::one(&fq)]).unwrap();
        let c = DrinfeldModule::carlitz(&fq);
        let id = SkewMatrix::identity(&fq, 1);
        assert!(is_morphism(&id, e.as_tmodule(), e.as_tmodule()).unwrap());
        assert!(is_morphism(e.as_tmodule().phi_t(), e.as_tmodule(), e.as_tmodule()).unwrap());
        assert!(!is_morphism(&id, c.as_tmodule(), e.as_tmodule()).unwrap());
    }

    #[test]
    fn nilpotency_enforced() {
        let fq = Fq::prime(3).unwrap();
        let ok = crate::parse::parse_matrix(&fq, &[vec!["T", "1"], vec!["0", "T+tau"]]).unwrap();
        assert!(TModule::new(ok).is_ok());
        let bad = crate::parse::parse_matrix(&fq, &[vec!["T", "1"], vec!["1", "T"]]).unwrap();
        assert!(matches!(TModule::new(bad), Err(Error::NotTModule(_))));
        let x = parse_k_element(&fq, "T+1").unwrap();
        let not_theta = SkewMatrix::from_rows(&fq, vec![vec![SkewPoly::from_k(x)]]).unwrap();
        assert!(TModule::new(not_theta).is_err());
    }

    #[test]
    fn weights() {
        let fq = Fq::prime(2).unwrap();
        assert_eq!(DrinfeldModule::carlitz(&fq).as_tmodule().weight().to_string(), "1");
        let e = DrinfeldModule::new(vec![KElement::one(&fq); 3]).unwrap();
        assert_eq!(e.as_tmodule().weight().to_string(), "1/3");
        assert_eq!(carlitz_tensor(&fq, 4).unwrap().weight().to_string(), "4");
        let general = TModule::new(carlitz_tensor(&fq, 2).unwrap().phi_t().clone()).unwrap();
        assert_eq!(general.weight(), Weight::Unknown);
    }
}
