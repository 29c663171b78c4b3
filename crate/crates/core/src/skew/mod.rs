//! The twisted polynomial ring K{τ} with τx = x^q τ, and matrices over it.
//!
//! Polynomials are generic over their coefficient type. Plain twisted
//! polynomials use [`KElement`] coefficients. Using [`SkewPoly`] itself as a
//! coefficient type gives polynomials whose coefficients are F_q-linear forms
//! `b -> sum l_j b^{q^j}` in an indeterminate `b ∈ K`; the reduction
//! algorithms run unchanged on such symbolic inputs, which is how the matrices
//! describing t-actions on Ext groups are extracted.

mod matrix;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::field::{Fq, KElement};

pub use matrix::{KMatrix, SkewMatrix, TwistedMatrix};

/// Coefficient types for twisted polynomials: an F_q-vector space with a
/// K-scaling and the q^k-power twist.
pub trait Coefficient: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero(fq: &Fq) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    /// `x · self` for `x ∈ K`.
    fn scaled(&self, x: &KElement) -> Self;
    /// `self^{q^k}`.
    fn twisted(&self, k: u32) -> Self;
}

impl Coefficient for KElement {
    fn zero(fq: &Fq) -> Self {
        KElement::zero(fq)
    }
    fn is_zero(&self) -> bool {
        KElement::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, x: &KElement) -> Self {
        x * self
    }
    fn twisted(&self, k: u32) -> Self {
        self.frobenius(k)
    }
}

/// A linear form `L(b) = sum l_j b^{q^j}` is the twisted polynomial
/// `sum l_j τ^j`; scaling is left multiplication by a constant and twisting by
/// `q^k` is left multiplication by `τ^k`.
impl<C: Coefficient> Coefficient for TwistedPoly<C> {
    fn zero(fq: &Fq) -> Self {
        TwistedPoly::zero(fq)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn scaled(&self, x: &KElement) -> Self {
        self.scale(x)
    }
    fn twisted(&self, k: u32) -> Self {
        self.twist(k)
    }
}

/// `sum c_i τ^i` with trailing zero coefficients stripped; the zero
/// polynomial has no coefficients and degree `None` (standing for −∞).
#[derive(Clone, PartialEq)]
pub struct TwistedPoly<C> {
    fq: Fq,
    coeffs: Vec<C>,
}

/// An element of K{τ}.
pub type SkewPoly = TwistedPoly<KElement>;

/// A twisted polynomial whose coefficients are linear forms in an
/// indeterminate of K.
pub type SymbolicPoly = TwistedPoly<SkewPoly>;

impl<C: Coefficient> TwistedPoly<C> {
    pub fn zero(fq: &Fq) -> Self {
        TwistedPoly { fq: fq.clone(), coeffs: Vec::new() }
    }

    pub fn from_coeffs(fq: &Fq, coeffs: Vec<C>) -> Self {
        let mut p = TwistedPoly { fq: fq.clone(), coeffs };
        p.trim();
        p
    }

    /// `c τ^k`
    pub fn monomial(fq: &Fq, c: C, k: usize) -> Self {
        if c.is_zero() {
            return TwistedPoly::zero(fq);
        }
        let mut coeffs = vec![C::zero(fq); k + 1];
        coeffs[k] = c;
        TwistedPoly { fq: fq.clone(), coeffs }
    }

    pub fn constant(fq: &Fq, c: C) -> Self {
        Self::monomial(fq, c, 0)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> &Fq {
        &self.fq
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(|| C::zero(&self.fq))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// τ-degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> C {
        self.coeffs.last().cloned().unwrap_or_else(|| C::zero(&self.fq))
    }

    pub fn constant_term(&self) -> C {
        self.coeff(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a.plus(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::from_coeffs(&self.fq, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a.minus(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.negated(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::from_coeffs(&self.fq, coeffs)
    }

    pub fn neg(&self) -> Self {
        TwistedPoly { fq: self.fq.clone(), coeffs: self.coeffs.iter().map(C::negated).collect() }
    }

    /// Left multiplication by a constant: `x · self`.
    pub fn scale(&self, x: &KElement) -> Self {
        if x.is_zero() {
            return Self::zero(&self.fq);
        }
        TwistedPoly { fq: self.fq.clone(), coeffs: self.coeffs.iter().map(|c| c.scaled(x)).collect() }
    }

    /// `τ^k · self`.
    pub fn twist(&self, k: u32) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![C::zero(&self.fq); k as usize];
        coeffs.extend(self.coeffs.iter().map(|c| c.twisted(k)));
        TwistedPoly { fq: self.fq.clone(), coeffs }
    }

    /// `self · τ^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![C::zero(&self.fq); k];
        coeffs.extend(self.coeffs.iter().cloned());
        TwistedPoly { fq: self.fq.clone(), coeffs }
    }

    /// `a · self` for `a ∈ K{τ}`:
    /// `(sum a_i τ^i)(sum c_j τ^j) = sum a_i c_j^{q^i} τ^{i+j}`.
    pub fn left_mul(&self, a: &SkewPoly) -> Self {
        if self.is_zero() || a.is_zero() {
            return Self::zero(&self.fq);
        }
        let n = a.coeffs.len() + self.coeffs.len() - 1;
        let mut out = vec![C::zero(&self.fq); n];
        for (i, ai) in a.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, c) in self.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].plus(&c.twisted(i as u32).scaled(ai));
            }
        }
        Self::from_coeffs(&self.fq, out)
    }

    /// `self · a` for `a ∈ K{τ}`:
    /// `(sum c_j τ^j)(sum a_i τ^i) = sum c_j a_i^{q^j} τ^{i+j}`.
    pub fn right_mul(&self, a: &SkewPoly) -> Self {
        if self.is_zero() || a.is_zero() {
            return Self::zero(&self.fq);
        }
        let n = a.coeffs.len() + self.coeffs.len() - 1;
        let mut out = vec![C::zero(&self.fq); n];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, ai) in a.coeffs.iter().enumerate() {
                if ai.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].plus(&c.scaled(&ai.frobenius(j as u32)));
            }
        }
        Self::from_coeffs(&self.fq, out)
    }

    /// Keeps only the coefficients of τ^i for i in `range`.
    pub fn graded_part(&self, range: std::ops::Range<usize>) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if range.contains(&i) { c.clone() } else { C::zero(&self.fq) })
            .collect();
        Self::from_coeffs(&self.fq, coeffs)
    }
}

impl SkewPoly {
    pub fn one(fq: &Fq) -> Self {
        Self::constant(fq, KElement::one(fq))
    }

    /// The variable τ.
    pub fn tau(fq: &Fq) -> Self {
        Self::monomial(fq, KElement::one(fq), 1)
    }

    pub fn from_k(x: KElement) -> Self {
        let fq = x.field().clone();
        Self::constant(&fq, x)
    }

    /// Evaluates the F_q-linear map `x -> sum c_i x^{q^i}`.
    pub fn apply(&self, x: &KElement) -> KElement {
        self.coeffs
            .iter()
            .enumerate()
            .fold(KElement::zero(&self.fq), |acc, (i, c)| acc + c * &x.frobenius(i as u32))
    }

    pub fn mul(&self, other: &SkewPoly) -> SkewPoly {
        self.right_mul(other)
    }

    pub fn pow(&self, e: u32) -> SkewPoly {
        (0..e).fold(SkewPoly::one(&self.fq), |acc, _| acc.mul(self))
    }

    /// Largest θ-degree among the coefficients.
    pub fn theta_degree(&self) -> usize {
        self.coeffs.iter().map(KElement::theta_degree).max().unwrap_or(0)
    }

    /// The linear form `b -> c·b` for `c ∈ K`, as a symbolic coefficient.
    pub fn linear_form(c: KElement) -> SkewPoly {
        SkewPoly::from_k(c)
    }
}

impl<C: Coefficient> fmt::Debug for TwistedPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

impl fmt::Display for SkewPoly {
    /// Ascending τ-degree; compound coefficients are parenthesized.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let nonzero: Vec<(usize, &KElement)> =
            self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        if nonzero.len() == 1 && nonzero[0].0 == 0 {
            return write!(f, "{}", nonzero[0].1);
        }
        let terms: Vec<String> = nonzero
            .into_iter()
            .map(|(i, c)| {
                let cs = if c.is_atomic() { c.to_string() } else { format!("({c})") };
                let mono = match i {
                    0 => return cs,
                    1 => "tau".to_string(),
                    _ => format!("tau^{i}"),
                };
                if c.is_one() {
                    mono
                } else {
                    format!("{cs}*{mono}")
                }
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Add for &SkewPoly {
    type Output = SkewPoly;
    fn add(self, rhs: &SkewPoly) -> SkewPoly {
        TwistedPoly::add(self, rhs)
    }
}

impl Sub for &SkewPoly {
    type Output = SkewPoly;
    fn sub(self, rhs: &SkewPoly) -> SkewPoly {
        TwistedPoly::sub(self, rhs)
    }
}

impl Mul for &SkewPoly {
    type Output = SkewPoly;
    fn mul(self, rhs: &SkewPoly) -> SkewPoly {
        self.right_mul(rhs)
    }
}

impl Neg for &SkewPoly {
    type Output = SkewPoly;
    fn neg(self) -> SkewPoly {
        TwistedPoly::neg(self)
    }
}
