//! Biderivations `δ: F_q[t] -> Mat_{e×d}(K{τ})` with
//! `δ(ab) = Ψ(a)δ(b) + δ(a)Φ(b)`, stored through their value at t.

use crate::error::{Error, Result};
use crate::field::{FqElement, FqPoly, KElement};
use crate::skew::{Coefficient, SkewMatrix, TwistedMatrix};
use crate::tmodule::TModule;

/// An element of Der(Φ, Ψ) for `E = (G_a^d, Φ)` and `F = (G_a^e, Ψ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Biderivation {
    source: TModule,
    target: TModule,
    value: SkewMatrix,
}

/// `U Φ(t) - Ψ(t) U`, for plain or symbolic U.
pub fn inner_value<C: Coefficient>(u: &TwistedMatrix<C>, source: &TModule, target: &TModule) -> Result<TwistedMatrix<C>> {
    if u.shape() != (target.dim(), source.dim()) {
        return Err(Error::DimensionMismatch(format!(
            "witness is {}x{}, expected {}x{}",
            u.rows(),
            u.cols(),
            target.dim(),
            source.dim()
        )));
    }
    u.right_mul(source.phi_t())?.sub(&u.left_mul(target.phi_t())?)
}

fn block2(a: &SkewMatrix, b: &SkewMatrix, c: &SkewMatrix, d: &SkewMatrix) -> SkewMatrix {
    let fq = a.field();
    let (r1, c1) = a.shape();
    let (r2, c2) = d.shape();
    let mut m = SkewMatrix::zeros(fq, r1 + r2, c1 + c2);
    for i in 0..r1 + r2 {
        for j in 0..c1 + c2 {
            let v = match (i < r1, j < c1) {
                (true, true) => a.get(i, j),
                (true, false) => b.get(i, j - c1),
                (false, true) => c.get(i - r1, j),
                (false, false) => d.get(i - r1, j - c1),
            };
            m.set(i, j, v.clone());
        }
    }
    m
}

impl Biderivation {
    pub fn new(source: TModule, target: TModule, value: SkewMatrix) -> Result<Self> {
        if value.shape() != (target.dim(), source.dim()) {
            return Err(Error::DimensionMismatch(format!(
                "δ(t) is {}x{}, expected {}x{}",
                value.rows(),
                value.cols(),
                target.dim(),
                source.dim()
            )));
        }
        if source.field() != target.field() || value.field() != source.field() {
            return Err(Error::ModuleMismatch("modules over different fields".into()));
        }
        Ok(Biderivation { source, target, value })
    }

    pub fn zero(source: TModule, target: TModule) -> Self {
        let value = SkewMatrix::zeros(source.field(), target.dim(), source.dim());
        Biderivation { source, target, value }
    }

    /// The inner biderivation `δ^{(U)}(t) = U Φ(t) - Ψ(t) U`.
    pub fn inner(u: &SkewMatrix, source: &TModule, target: &TModule) -> Result<Self> {
        let value = inner_value(u, source, target)?;
        Ok(Biderivation { source: source.clone(), target: target.clone(), value })
    }

    pub fn source(&self) -> &TModule {
        &self.source
    }

    pub fn target(&self) -> &TModule {
        &self.target
    }

    /// δ(t).
    pub fn value(&self) -> &SkewMatrix {
        &self.value
    }

    /// Same modules, new value at t.
    pub fn with_value(&self, value: SkewMatrix) -> Result<Self> {
        Biderivation::new(self.source.clone(), self.target.clone(), value)
    }

    /// δ(a), from `δ(t^n) = Ψ(t) δ(t^{n-1}) + δ(t) Φ(t)^{n-1}` extended
    /// F_q-linearly.
    pub fn eval(&self, a: &FqPoly) -> SkewMatrix {
        let fq = self.source.field();
        let mut acc = SkewMatrix::zeros(fq, self.target.dim(), self.source.dim());
        let mut power = SkewMatrix::identity(fq, self.source.dim());
        let mut cur = SkewMatrix::zeros(fq, self.target.dim(), self.source.dim());
        for (n, &c) in a.0.iter().enumerate() {
            if n > 0 {
                cur = self.target.phi_t().mul(&cur).unwrap().add(&self.value.mul(&power).unwrap()).unwrap();
                power = power.mul(self.source.phi_t()).unwrap();
            }
            if !c.is_zero() {
                acc = acc.add(&cur.scale(&KElement::from_fq(fq, c))).unwrap();
            }
        }
        acc
    }

    fn check_pair(&self, other: &Biderivation) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::ModuleMismatch("biderivations between different module pairs".into()));
        }
        Ok(())
    }

    /// The Baer sum, i.e. addition of values.
    pub fn baer_sum(&self, other: &Biderivation) -> Result<Biderivation> {
        self.check_pair(other)?;
        self.with_value(self.value.add(&other.value)?)
    }

    pub fn sub(&self, other: &Biderivation) -> Result<Biderivation> {
        self.check_pair(other)?;
        self.with_value(self.value.sub(&other.value)?)
    }

    pub fn neg(&self) -> Biderivation {
        Biderivation { value: self.value.neg(), ..self.clone() }
    }

    pub fn scale_fq(&self, c: FqElement) -> Biderivation {
        let c = KElement::from_fq(self.source.field(), c);
        Biderivation { value: self.value.scale(&c), ..self.clone() }
    }

    /// `(δ·b)(t) = δ(t) Φ(b)`.
    pub fn t_action_right(&self, b: &FqPoly) -> Biderivation {
        let value = self.value.mul(&self.source.phi_eval(b)).unwrap();
        Biderivation { value, ..self.clone() }
    }

    /// `(b·δ)(t) = Ψ(b) δ(t)`.
    pub fn t_action_left(&self, b: &FqPoly) -> Biderivation {
        let value = self.target.phi_eval(b).mul(&self.value).unwrap();
        Biderivation { value, ..self.clone() }
    }

    /// Membership in Der₀: `dδ(t) = 0`.
    pub fn is_der0(&self) -> bool {
        self.value.constant_part().is_zero()
    }

    /// The extension with `Υ(t) = [[Φ(t), 0], [δ(t), Ψ(t)]]`.
    pub fn extension_matrix(&self) -> Result<TModule> {
        let zero = SkewMatrix::zeros(self.source.field(), self.source.dim(), self.target.dim());
        let upsilon = block2(self.source.phi_t(), &zero, &self.value, self.target.phi_t());
        TModule::new(upsilon).map_err(|_| Error::NotTModule("extension is not a t-module presentation".into()))
    }

    /// Whether `Θ = [[I, 0], [U, I]]` conjugates Υ(t) to the block diagonal
    /// `[[Φ(t), 0], [0, Ψ(t)]]`.
    pub fn split_check(&self, u: &SkewMatrix) -> Result<bool> {
        let fq = self.source.field();
        let (d, e) = (self.source.dim(), self.target.dim());
        if u.shape() != (e, d) {
            return Err(Error::DimensionMismatch(format!("witness is {}x{}, expected {}x{}", u.rows(), u.cols(), e, d)));
        }
        let zero_de = SkewMatrix::zeros(fq, d, e);
        let zero_ed = SkewMatrix::zeros(fq, e, d);
        let id_d = SkewMatrix::identity(fq, d);
        let id_e = SkewMatrix::identity(fq, e);
        let upsilon = block2(self.source.phi_t(), &zero_de, &self.value, self.target.phi_t());
        let theta = block2(&id_d, &zero_de, u, &id_e);
        let theta_inv = block2(&id_d, &zero_de, &u.neg(), &id_e);
        let conj = theta_inv.mul(&upsilon)?.mul(&theta)?;
        let diag = block2(self.source.phi_t(), &zero_de, &zero_ed, self.target.phi_t());
        Ok(conj == diag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;
    use crate::parse::{parse_matrix, parse_skew};
    use crate::skew::SkewPoly;
    use crate::tmodule::{carlitz_tensor, DrinfeldModule};

    fn one_by_one(fq: &Fq, s: &str) -> SkewMatrix {
        SkewMatrix::from_rows(fq, vec![vec![parse_skew(fq, s).unwrap()]]).unwrap()
    }

    fn t_poly(fq: &Fq, c: &[i64]) -> FqPoly {
        FqPoly::from_coeffs(c.iter().map(|&x| fq.from_int(x)).collect())
    }

    #[test]
    fn eval_examples() {
        let fq = Fq::prime(3).unwrap();
        let c = DrinfeldModule::carlitz(&fq).as_tmodule().clone();
        let d = Biderivation::new(c.clone(), c.clone(), one_by_one(&fq, "tau")).unwrap();
        assert_eq!(d.eval(&t_poly(&fq, &[0, 1])), *d.value());
        assert!(d.eval(&t_poly(&fq, &[1])).is_zero());
        // (θ+τ)τ + τ(θ+τ) = (θ + θ^3)τ + 2τ^2 over F_3
        assert_eq!(d.eval(&t_poly(&fq, &[0, 0, 1])), one_by_one(&fq, "(T+T^3)*tau + 2*tau^2"));
    }

    #[test]
    fn inner_examples() {
        let fq = Fq::prime(2).unwrap();
        let c = DrinfeldModule::carlitz(&fq).as_tmodule().clone();
        let d = Biderivation::inner(&one_by_one(&fq, "T"), &c, &c).unwrap();
        assert_eq!(d.value(), &one_by_one(&fq, "(T+T^2)*tau"));
        assert!(d.split_check(&one_by_one(&fq, "T")).unwrap());
        assert!(!d.split_check(&one_by_one(&fq, "0")).unwrap());
        assert!(Biderivation::inner(&one_by_one(&fq, "0"), &c, &c).unwrap().value().is_zero());
    }

    #[test]
    fn sums_and_der0() {
        let fq = Fq::prime(2).unwrap();
        let c = DrinfeldModule::carlitz(&fq).as_tmodule().clone();
        let a = Biderivation::new(c.clone(), c.clone(), one_by_one(&fq, "tau")).unwrap();
        let b = Biderivation::new(c.clone(), c.clone(), one_by_one(&fq, "T*tau")).unwrap();
        assert_eq!(a.baer_sum(&b).unwrap().value(), &one_by_one(&fq, "(1+T)*tau"));
        assert!(a.baer_sum(&a.neg()).unwrap().value().is_zero());
        assert!(a.is_der0());
        assert!(!a.with_value(one_by_one(&fq, "1")).unwrap().is_der0());
        let e = DrinfeldModule::new(vec![KElement::one(&fq), KElement::one(&fq)]).unwrap();
        let other = Biderivation::zero(e.as_tmodule().clone(), c.clone());
        assert!(matches!(a.baer_sum(&other), Err(Error::ModuleMismatch(_))));
    }

    #[test]
    fn t_actions_differ_by_inner() {
        let fq = Fq::prime(3).unwrap();
        let e = DrinfeldModule::new(vec![KElement::theta(&fq), KElement::one(&fq)]).unwrap();
        let c = DrinfeldModule::carlitz(&fq).as_tmodule().clone();
        let d = Biderivation::new(e.as_tmodule().clone(), c.clone(), one_by_one(&fq, "tau")).unwrap();
        let t = t_poly(&fq, &[0, 1]);
        let diff = d.t_action_right(&t).sub(&d.t_action_left(&t)).unwrap();
        assert_eq!(diff, Biderivation::inner(d.value(), e.as_tmodule(), &c).unwrap());
        let one = t_poly(&fq, &[1]);
        assert_eq!(d.t_action_right(&one), d);
        assert_eq!(d.t_action_left(&one), d);
    }

    #[test]
    fn extension_matrices() {
        let fq = Fq::prime(2).unwrap();
        let c = DrinfeldModule::carlitz(&fq).as_tmodule().clone();
        let split = Biderivation::zero(c.clone(), c.clone()).extension_matrix().unwrap();
        assert_eq!(split.phi_t(), &parse_matrix(&fq, &[vec!["T+tau", "0"], vec!["0", "T+tau"]]).unwrap());
        let d = Biderivation::new(c.clone(), c.clone(), one_by_one(&fq, "tau")).unwrap();
        assert_eq!(
            d.extension_matrix().unwrap().phi_t(),
            &parse_matrix(&fq, &[vec!["T+tau", "0"], vec!["tau", "T+tau"]]).unwrap()
        );
        let e = DrinfeldModule::new(vec![KElement::one(&fq), KElement::one(&fq)]).unwrap();
        let d1 = Biderivation::new(e.as_tmodule().clone(), c.clone(), one_by_one(&fq, "1")).unwrap();
        let ext = d1.extension_matrix().unwrap();
        assert_eq!(ext.dim(), 2);
        assert_eq!(ext.phi_t().get(1, 0), &SkewPoly::one(&fq));
        let n = ext.lie_nilpotent();
        assert!(!n.is_zero());
        assert!(n.mul(&n).unwrap().is_zero());
        let c2 = carlitz_tensor(&fq, 2).unwrap();
        let v = parse_matrix(&fq, &[vec!["1", "T"]]).unwrap();
        let mixed = Biderivation::new(c2, c.clone(), v).unwrap();
        assert_eq!(mixed.extension_matrix().unwrap().dim(), 3);
    }
}
