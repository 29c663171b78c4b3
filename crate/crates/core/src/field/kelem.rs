use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::fq::{Fq, FqElement};
use super::poly::FqPoly;
use crate::error::{Error, Result};

/// An element of K = F_q(θ) in canonical form: coprime numerator and monic
/// denominator. Canonical forms make equality a coefficient comparison.
#[derive(Clone)]
pub struct KElement {
    fq: Fq,
    num: FqPoly,
    den: FqPoly,
}

impl PartialEq for KElement {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den && self.fq == other.fq
    }
}

impl Eq for KElement {}

impl fmt::Debug for KElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl KElement {
    pub fn zero(fq: &Fq) -> Self {
        KElement { fq: fq.clone(), num: FqPoly::zero(), den: FqPoly::one() }
    }

    pub fn one(fq: &Fq) -> Self {
        KElement { fq: fq.clone(), num: FqPoly::one(), den: FqPoly::one() }
    }

    pub fn theta(fq: &Fq) -> Self {
        KElement::from_poly(fq, FqPoly::monomial(FqElement::ONE, 1))
    }

    pub fn from_fq(fq: &Fq, c: FqElement) -> Self {
        KElement::from_poly(fq, FqPoly::constant(c))
    }

    pub fn from_int(fq: &Fq, n: i64) -> Self {
        KElement::from_fq(fq, fq.from_int(n))
    }

    pub fn from_poly(fq: &Fq, num: FqPoly) -> Self {
        KElement { fq: fq.clone(), num, den: FqPoly::one() }
    }

    /// Builds `num/den` in canonical form.
    pub fn normalize(fq: &Fq, num: FqPoly, den: FqPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(fq, num, den))
    }

    fn reduce(fq: &Fq, num: FqPoly, den: FqPoly) -> Self {
        if num.is_zero() {
            return KElement::zero(fq);
        }
        let (num, den) = if den.degree() == Some(0) {
            (num, den)
        } else {
            let g = num.gcd(&den, fq);
            if g.is_one() {
                (num, den)
            } else {
                (num.divrem(&g, fq).0, den.divrem(&g, fq).0)
            }
        };
        let lead = den.leading();
        if lead == FqElement::ONE {
            KElement { fq: fq.clone(), num, den }
        } else {
            let inv = fq.inv(lead).unwrap();
            KElement { fq: fq.clone(), num: num.scale(inv, fq), den: den.scale(inv, fq) }
        }
    }

    pub fn field(&self) -> &Fq {
        &self.fq
    }

    pub fn numerator(&self) -> &FqPoly {
        &self.num
    }

    pub fn denominator(&self) -> &FqPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The constant in F_q if this element lies in the image of F_q.
    pub fn as_fq(&self) -> Option<FqElement> {
        (self.den.is_one() && self.num.degree().unwrap_or(0) == 0).then(|| self.num.coeff(0))
    }

    /// max(deg num, deg den), used by the runaway-growth guard.
    pub fn theta_degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(&self.fq, self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &KElement) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// x^{q^k}
    pub fn frobenius(&self, k: u32) -> Self {
        if k == 0 || self.as_fq().is_some() {
            return self.clone();
        }
        // Frobenius is an injective ring map fixing F_q: coprimality and a
        // monic denominator are preserved, so no renormalization is needed.
        KElement {
            fq: self.fq.clone(),
            num: self.num.frobenius(k, &self.fq),
            den: self.den.frobenius(k, &self.fq),
        }
    }

    /// The y with y^{q^k} = self, if it exists in K.
    pub fn frobenius_root(&self, k: u32) -> Option<Self> {
        Some(KElement {
            fq: self.fq.clone(),
            num: self.num.frobenius_root(k, &self.fq)?,
            den: self.den.frobenius_root(k, &self.fq)?,
        })
    }

    /// Some y with y^k = self, for k prime to p. With canonical forms it
    /// suffices to take roots of numerator and denominator separately.
    pub fn kth_root(&self, k: u64) -> Option<Self> {
        let num = self.num.kth_root(k, &self.fq)?;
        let den = self.den.kth_root(k, &self.fq)?;
        Self::normalize(&self.fq, num, den).ok()
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs();
        Ok(KElement {
            fq: self.fq.clone(),
            num: base.num.pow(e, &self.fq),
            den: base.den.pow(e, &self.fq),
        })
    }

    pub fn scale_fq(&self, c: FqElement) -> Self {
        if c.is_zero() {
            return KElement::zero(&self.fq);
        }
        KElement { fq: self.fq.clone(), num: self.num.scale(c, &self.fq), den: self.den.clone() }
    }

    fn assert_same_field(&self, other: &KElement) {
        debug_assert!(self.fq == other.fq, "mixing elements of {:?} and {:?}", self.fq, other.fq);
    }

    fn add_impl(&self, other: &KElement, negate: bool) -> KElement {
        self.assert_same_field(other);
        let f = &self.fq;
        let other_num = if negate { other.num.neg(f) } else { other.num.clone() };
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return KElement { fq: f.clone(), num: other_num, den: other.den.clone() };
        }
        if self.den == other.den {
            let num = self.num.add(&other_num, f);
            if self.den.is_one() {
                return KElement { fq: f.clone(), num, den: FqPoly::one() };
            }
            return Self::reduce(f, num, self.den.clone());
        }
        // Henrici: only the common factor g of the denominators can cancel.
        let g = self.den.gcd(&other.den, f);
        if g.is_one() {
            let num = self.num.mul(&other.den, f).add(&other_num.mul(&self.den, f), f);
            if num.is_zero() {
                return KElement::zero(f);
            }
            return KElement { fq: f.clone(), num, den: self.den.mul(&other.den, f) };
        }
        let b = self.den.divrem(&g, f).0;
        let d = other.den.divrem(&g, f).0;
        let num = self.num.mul(&d, f).add(&other_num.mul(&b, f), f);
        let den = b.mul(&other.den, f);
        Self::reduce(f, num, den)
    }

    fn mul_impl(&self, other: &KElement) -> KElement {
        self.assert_same_field(other);
        let f = &self.fq;
        if self.is_zero() || other.is_zero() {
            return KElement::zero(f);
        }
        if self.den.is_one() && other.den.is_one() {
            return KElement { fq: f.clone(), num: self.num.mul(&other.num, f), den: FqPoly::one() };
        }
        let cancel = |n: &FqPoly, d: &FqPoly| -> (FqPoly, FqPoly) {
            if d.is_one() || n.degree() == Some(0) {
                return (n.clone(), d.clone());
            }
            let g = n.gcd(d, f);
            if g.is_one() {
                (n.clone(), d.clone())
            } else {
                (n.divrem(&g, f).0, d.divrem(&g, f).0)
            }
        };
        let (a, d) = cancel(&self.num, &other.den);
        let (c, b) = cancel(&other.num, &self.den);
        let num = a.mul(&c, f);
        let den = b.mul(&d, f);
        let lead = den.leading();
        if lead == FqElement::ONE {
            KElement { fq: f.clone(), num, den }
        } else {
            let inv = f.inv(lead).unwrap();
            KElement { fq: f.clone(), num: num.scale(inv, f), den: den.scale(inv, f) }
        }
    }
}

fn format_poly(fq: &Fq, p: &FqPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut terms = Vec::new();
    for (i, &c) in p.0.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let cs = fq.format_element(c);
        let cs = if fq.is_atomic(c) { cs } else { format!("({cs})") };
        let term = match i {
            0 => fq.format_element(c),
            _ => {
                let mono = if i == 1 { "T".to_string() } else { format!("T^{i}") };
                if c == FqElement::ONE {
                    mono
                } else {
                    format!("{cs}*{mono}")
                }
            }
        };
        terms.push(term);
    }
    terms.join("+")
}

impl fmt::Display for KElement {
    /// Ascending powers of θ (written `T`); fractions as `(num)/(den)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = format_poly(&self.fq, &self.num);
        if self.den.is_one() {
            write!(f, "{num}")
        } else {
            write!(f, "({num})/({})", format_poly(&self.fq, &self.den))
        }
    }
}

impl KElement {
    /// True when the printed form needs parentheses to act as a factor.
    pub fn is_atomic(&self) -> bool {
        let s = self.to_string();
        !s.contains('+') && !s.contains('/')
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&KElement> for &KElement {
            type Output = KElement;
            fn $method(self, rhs: &KElement) -> KElement {
                $body(self, rhs)
            }
        }
        impl $trait<KElement> for KElement {
            type Output = KElement;
            fn $method(self, rhs: KElement) -> KElement {
                $body(&self, &rhs)
            }
        }
        impl $trait<&KElement> for KElement {
            type Output = KElement;
            fn $method(self, rhs: &KElement) -> KElement {
                $body(&self, rhs)
            }
        }
        impl $trait<KElement> for &KElement {
            type Output = KElement;
            fn $method(self, rhs: KElement) -> KElement {
                $body(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a: &KElement, b: &KElement| a.add_impl(b, false));
binop!(Sub, sub, |a: &KElement, b: &KElement| a.add_impl(b, true));
binop!(Mul, mul, |a: &KElement, b: &KElement| a.mul_impl(b));

impl Neg for &KElement {
    type Output = KElement;
    fn neg(self) -> KElement {
        KElement { fq: self.fq.clone(), num: self.num.neg(&self.fq), den: self.den.clone() }
    }
}

impl Neg for KElement {
    type Output = KElement;
    fn neg(self) -> KElement {
        -&self
    }
}
