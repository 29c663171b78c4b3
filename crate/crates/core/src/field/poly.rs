//! Dense polynomials in θ over F_q.

use super::fq::{Fq, FqElement};

/// Modulus for the lazy-reduction paths: residues below 2^16 have products
/// below 2^32, so a u64 slot absorbs 2^32 of them before overflowing.
fn small_prime(f: &Fq) -> Option<u64> {
    (f.m() == 1 && f.p() < (1 << 16)).then_some(f.p() as u64)
}

/// Divides `rem` (unreduced residues) by `divisor` in place, leaving the
/// reduced remainder in `rem[..deg divisor]` (truncated) and returning the
/// quotient.
fn reduce_small(rem: &mut Vec<u64>, divisor: &[FqElement], lead_inv: FqElement, p: u64) -> Vec<u64> {
    let db = divisor.len() - 1;
    let neg: Vec<u64> = divisor[..db].iter().map(|c| (p - c.0 as u64) % p).collect();
    let inv = lead_inv.0 as u64;
    let mut quot = vec![0u64; rem.len().saturating_sub(db)];
    for k in (db..rem.len()).rev() {
        let c = (rem[k] % p) * inv % p;
        if c == 0 {
            continue;
        }
        quot[k - db] = c;
        for (slot, &d) in rem[k - db..k].iter_mut().zip(&neg) {
            *slot += c * d;
        }
    }
    rem.truncate(db);
    for x in rem.iter_mut() {
        *x %= p;
    }
    quot
}

fn from_small(v: Vec<u64>) -> FqPoly {
    FqPoly::from_coeffs(v.into_iter().map(|x| FqElement(x as u32)).collect())
}

/// Low-to-high coefficients; trailing zeros are always stripped, so the zero
/// polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct FqPoly(pub Vec<FqElement>);

impl FqPoly {
    pub fn zero() -> Self {
        FqPoly(Vec::new())
    }

    pub fn one() -> Self {
        FqPoly(vec![FqElement::ONE])
    }

    pub fn constant(c: FqElement) -> Self {
        let mut p = FqPoly(vec![c]);
        p.trim();
        p
    }

    /// c·θ^k
    pub fn monomial(c: FqElement, k: usize) -> Self {
        if c.is_zero() {
            return FqPoly::zero();
        }
        let mut v = vec![FqElement::ZERO; k + 1];
        v[k] = c;
        FqPoly(v)
    }

    pub fn from_coeffs(coeffs: Vec<FqElement>) -> Self {
        let mut p = FqPoly(coeffs);
        p.trim();
        p
    }

    pub fn trim(&mut self) {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0] == FqElement::ONE
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> FqElement {
        self.0.last().copied().unwrap_or(FqElement::ZERO)
    }

    pub fn coeff(&self, i: usize) -> FqElement {
        self.0.get(i).copied().unwrap_or(FqElement::ZERO)
    }

    pub fn add(&self, other: &FqPoly, f: &Fq) -> FqPoly {
        let (long, short) = if self.0.len() >= other.0.len() { (self, other) } else { (other, self) };
        let mut out = long.0.clone();
        for (o, &s) in out.iter_mut().zip(short.0.iter()) {
            *o = f.add(*o, s);
        }
        FqPoly::from_coeffs(out)
    }

    pub fn neg(&self, f: &Fq) -> FqPoly {
        FqPoly(self.0.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn sub(&self, other: &FqPoly, f: &Fq) -> FqPoly {
        let n = self.0.len().max(other.0.len());
        let out = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        FqPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: FqElement, f: &Fq) -> FqPoly {
        if c.is_zero() {
            return FqPoly::zero();
        }
        FqPoly(self.0.iter().map(|&x| f.mul(x, c)).collect())
    }

    pub fn mul(&self, other: &FqPoly, f: &Fq) -> FqPoly {
        if self.is_zero() || other.is_zero() {
            return FqPoly::zero();
        }
        if self.0.len() == 1 {
            return other.scale(self.0[0], f);
        }
        if other.0.len() == 1 {
            return self.scale(other.0[0], f);
        }
        let n = self.0.len() + other.0.len() - 1;
        f.check_degree(n - 1);
        if f.m() == 1 && f.p() < (1 << 16) {
            // Products fit in 32 bits, so a u64 accumulator never overflows
            // for any realistic length.
            let p = f.p() as u64;
            let mut acc = vec![0u64; n];
            for (i, &a) in self.0.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let a = a.0 as u64;
                for (slot, &b) in acc[i..].iter_mut().zip(other.0.iter()) {
                    *slot += a * b.0 as u64;
                }
            }
            return FqPoly::from_coeffs(acc.into_iter().map(|x| FqElement((x % p) as u32)).collect());
        }
        let mut out = vec![FqElement::ZERO; n];
        for (i, &a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        FqPoly::from_coeffs(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, divisor: &FqPoly, f: &Fq) -> (FqPoly, FqPoly) {
        let db = divisor.degree().expect("polynomial division by zero");
        if self.0.len() <= db {
            return (FqPoly::zero(), self.clone());
        }
        let inv = f.inv(divisor.leading()).unwrap();
        if let Some(p) = small_prime(f) {
            let mut rem: Vec<u64> = self.0.iter().map(|c| c.0 as u64).collect();
            let quot = reduce_small(&mut rem, &divisor.0, inv, p);
            return (from_small(quot), from_small(rem));
        }
        let mut rem = self.0.clone();
        let mut quot = vec![FqElement::ZERO; self.0.len() - db];
        for k in (db..rem.len()).rev() {
            let c = f.mul(rem[k], inv);
            if c.is_zero() {
                continue;
            }
            quot[k - db] = c;
            let nc = f.neg(c);
            for (i, &d) in divisor.0.iter().enumerate() {
                let idx = k - db + i;
                rem[idx] = f.add(rem[idx], f.mul(nc, d));
            }
        }
        rem.truncate(db);
        (FqPoly::from_coeffs(quot), FqPoly::from_coeffs(rem))
    }

    pub fn rem(&self, divisor: &FqPoly, f: &Fq) -> FqPoly {
        self.divrem(divisor, f).1
    }

    pub fn monic(&self, f: &Fq) -> FqPoly {
        match f.inv(self.leading()) {
            Some(inv) if !self.is_one() => self.scale(inv, f),
            _ => self.clone(),
        }
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &FqPoly, f: &Fq) -> FqPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        if let Some(p) = small_prime(f) {
            let mut x: Vec<u64> = a.0.iter().map(|c| c.0 as u64).collect();
            let mut y: Vec<u64> = b.0.iter().map(|c| c.0 as u64).collect();
            while !y.is_empty() {
                let lead = FqElement(*y.last().unwrap() as u32);
                let divisor: Vec<FqElement> = y.iter().map(|&c| FqElement(c as u32)).collect();
                if x.len() >= y.len() {
                    reduce_small(&mut x, &divisor, f.inv(lead).unwrap(), p);
                }
                while x.last() == Some(&0) {
                    x.pop();
                }
                std::mem::swap(&mut x, &mut y);
            }
            return from_small(x).monic(f);
        }
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// f(θ)^{q^k} = sum c_i θ^{i q^k}, since the coefficients are fixed by
    /// the q-power map.
    pub fn frobenius(&self, k: u32, f: &Fq) -> FqPoly {
        if k == 0 || self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let step = (f.q() as usize).checked_pow(k).expect("Frobenius exponent overflow");
        let deg = self.degree().unwrap();
        let new_deg = deg.checked_mul(step).expect("θ-degree overflow");
        f.check_degree(new_deg);
        let mut out = vec![FqElement::ZERO; new_deg + 1];
        for (i, &c) in self.0.iter().enumerate() {
            out[i * step] = c;
        }
        FqPoly(out)
    }

    /// The g with g^{q^k} = self, if it exists.
    pub fn frobenius_root(&self, k: u32, f: &Fq) -> Option<FqPoly> {
        let step = (f.q() as usize).checked_pow(k)?;
        if self.0.iter().enumerate().any(|(i, c)| !c.is_zero() && i % step != 0) {
            return None;
        }
        Some(FqPoly(self.0.iter().step_by(step).copied().collect()))
    }

    /// Some g with g^k = self, for k prime to p. The coefficients of g are
    /// fixed from the top down: the θ^{D-j} coefficient of g^k is
    /// `k·lead^{k-1}·g_{d-j}` plus terms in higher coefficients of g.
    pub fn kth_root(&self, k: u64, f: &Fq) -> Option<FqPoly> {
        if self.is_zero() || k == 1 {
            return Some(self.clone());
        }
        if k.is_multiple_of(f.p() as u64) {
            return None;
        }
        let total = self.degree().unwrap();
        if !(total as u64).is_multiple_of(k) {
            return None;
        }
        let d = (total as u64 / k) as usize;
        let lead = f.elements().find(|&x| f.pow(x, k) == self.leading())?;
        let scale = f.inv(f.mul(f.from_int((k % f.p() as u64) as i64), f.pow(lead, k - 1)))?;
        let mut g = FqPoly::monomial(lead, d);
        for j in 1..=d {
            let h = g.pow(k, f);
            let diff = f.sub(self.coeff(total - j), h.coeff(total - j));
            if !diff.is_zero() {
                g = g.add(&FqPoly::monomial(f.mul(diff, scale), d - j), f);
            }
        }
        (g.pow(k, f) == *self).then_some(g)
    }

    pub fn pow(&self, mut e: u64, f: &Fq) -> FqPoly {
        let mut base = self.clone();
        let mut acc = FqPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, f);
            }
        }
        acc
    }

    pub fn eval(&self, x: FqElement, f: &Fq) -> FqElement {
        self.0.iter().rev().fold(FqElement::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }
}
