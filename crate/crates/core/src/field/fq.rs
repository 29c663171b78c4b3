use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of F_q, encoded as the integer `sum d_i p^i` where `d_i` is the
/// coefficient of `g^i` in the residue modulo the defining polynomial.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct FqElement(pub u32);

impl FqElement {
    pub const ZERO: FqElement = FqElement(0);
    pub const ONE: FqElement = FqElement(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Parameters of the constant field F_q, q = p^m.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FqConfig {
    pub p: u64,
    pub m: u32,
    /// Degree-`m` monic irreducible polynomial over F_p in the variable `g`,
    /// present iff `m > 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<String>,
}

impl FqConfig {
    pub fn prime(p: u64) -> Self {
        FqConfig { p, m: 1, modulus: None }
    }

    /// Resolves a field size `q` to a configuration, using the built-in
    /// modulus table for q in {4, 8, 9} when no modulus is supplied.
    pub fn for_order(q: u64, modulus: Option<&str>) -> Result<Self> {
        let (p, m) = prime_power(q)
            .ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        if m == 1 {
            if modulus.is_some() {
                return Err(Error::InvalidField("a modulus is only meaningful for m > 1".into()));
            }
            return Ok(FqConfig::prime(p));
        }
        let modulus = match modulus {
            Some(s) => s.to_string(),
            None => builtin_modulus(q)
                .ok_or_else(|| {
                    Error::InvalidField(format!("q = {q} needs an explicit --modulus (built-in: 4, 8, 9)"))
                })?
                .to_string(),
        };
        Ok(FqConfig { p, m, modulus: Some(modulus) })
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.m)
    }
}

fn builtin_modulus(q: u64) -> Option<&'static str> {
    match q {
        4 => Some("g^2+g+1"),
        8 => Some("g^3+g+1"),
        9 => Some("g^2+1"),
        _ => None,
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let (mut r, mut m) = (q, 0);
    while r % p == 0 {
        r /= p;
        m += 1;
    }
    (r == 1).then_some((p, m))
}

enum Arith {
    Prime,
    Extension {
        add: Vec<u32>,
        neg: Vec<u32>,
        exp: Vec<u32>,
        log: Vec<u32>,
    },
}

struct Tables {
    config: FqConfig,
    p: u32,
    q: u32,
    arith: Arith,
}

/// Handle to a constant field F_q. Cheap to clone; all elements built from
/// the same configuration are interchangeable.
#[derive(Clone)]
pub struct Fq {
    tables: Arc<Tables>,
    degree_limit: usize,
}

/// Panic payload raised when a θ-degree exceeds the configured limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeLimitExceeded {
    pub degree: usize,
    pub limit: usize,
}

impl fmt::Display for DegreeLimitExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "computation aborted: θ-degree {} exceeds limit {}", self.degree, self.limit)
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.tables, &other.tables) || self.tables.config == other.tables.config
    }
}

impl Eq for Fq {}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.tables.q)
    }
}

impl Fq {
    pub fn new(config: FqConfig) -> Result<Self> {
        let p = config.p;
        if !is_prime(p) || p >= (1 << 31) {
            return Err(Error::InvalidField(format!("characteristic {p} must be a prime below 2^31")));
        }
        if config.m == 0 {
            return Err(Error::InvalidField("extension degree must be at least 1".into()));
        }
        let tables = if config.m == 1 {
            if config.modulus.is_some() {
                return Err(Error::InvalidField("a modulus is only meaningful for m > 1".into()));
            }
            Tables { p: p as u32, q: p as u32, arith: Arith::Prime, config }
        } else {
            let q = p
                .checked_pow(config.m)
                .filter(|&q| q <= 1 << 20)
                .ok_or_else(|| Error::InvalidField("extension fields are limited to q <= 2^20".into()))?;
            let text = config
                .modulus
                .as_deref()
                .ok_or_else(|| Error::InvalidField("m > 1 requires a modulus".into()))?;
            let modulus = parse_modulus(text, p)?;
            if modulus.len() != config.m as usize + 1 || *modulus.last().unwrap() != 1 {
                return Err(Error::InvalidField(format!(
                    "modulus {text} must be monic of degree {}",
                    config.m
                )));
            }
            if !prime_poly_irreducible(&modulus, p) {
                return Err(Error::InvalidField(format!("modulus {text} is reducible over F_{p}")));
            }
            let arith = extension_tables(p as u32, q as u32, &modulus);
            Tables { p: p as u32, q: q as u32, arith, config }
        };
        Ok(Fq { tables: Arc::new(tables), degree_limit: usize::MAX })
    }

    pub fn prime(p: u64) -> Result<Self> {
        Fq::new(FqConfig::prime(p))
    }

    pub fn of_order(q: u64) -> Result<Self> {
        Fq::new(FqConfig::for_order(q, None)?)
    }

    /// Returns a handle whose arithmetic aborts (by panicking with a
    /// [`DegreeLimitExceeded`] payload) once a θ-degree exceeds `limit`.
    pub fn with_degree_limit(&self, limit: usize) -> Self {
        Fq { tables: self.tables.clone(), degree_limit: limit }
    }

    pub fn degree_limit(&self) -> usize {
        self.degree_limit
    }

    pub(crate) fn check_degree(&self, degree: usize) {
        if degree > self.degree_limit {
            std::panic::panic_any(DegreeLimitExceeded { degree, limit: self.degree_limit });
        }
    }

    pub fn config(&self) -> &FqConfig {
        &self.tables.config
    }

    pub fn p(&self) -> u32 {
        self.tables.p
    }

    pub fn m(&self) -> u32 {
        self.tables.config.m
    }

    pub fn q(&self) -> u64 {
        self.tables.q as u64
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElement> {
        (0..self.tables.q).map(FqElement)
    }

    /// The image of an integer under Z -> F_p -> F_q.
    pub fn from_int(&self, n: i64) -> FqElement {
        FqElement(n.rem_euclid(self.tables.p as i64) as u32)
    }

    /// The generator `g` of F_q over F_p (equal to 0 when m = 1, which is never
    /// requested by the parser).
    pub fn generator(&self) -> FqElement {
        if self.m() == 1 {
            FqElement::ZERO
        } else {
            FqElement(self.tables.p)
        }
    }

    #[inline]
    pub fn add(&self, a: FqElement, b: FqElement) -> FqElement {
        let t = &*self.tables;
        match &t.arith {
            Arith::Prime => {
                let s = a.0 + b.0;
                FqElement(if s >= t.p { s - t.p } else { s })
            }
            Arith::Extension { add, .. } => {
                if add.is_empty() {
                    FqElement(digitwise(a.0, b.0, t.p, |x, y| x + y))
                } else {
                    FqElement(add[(a.0 * t.q + b.0) as usize])
                }
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: FqElement) -> FqElement {
        let t = &*self.tables;
        match &t.arith {
            Arith::Prime => FqElement(if a.0 == 0 { 0 } else { t.p - a.0 }),
            Arith::Extension { neg, .. } => FqElement(neg[a.0 as usize]),
        }
    }

    #[inline]
    pub fn sub(&self, a: FqElement, b: FqElement) -> FqElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElement, b: FqElement) -> FqElement {
        let t = &*self.tables;
        match &t.arith {
            Arith::Prime => FqElement(((a.0 as u64 * b.0 as u64) % t.p as u64) as u32),
            Arith::Extension { exp, log, .. } => {
                if a.0 == 0 || b.0 == 0 {
                    FqElement::ZERO
                } else {
                    let e = (log[a.0 as usize] + log[b.0 as usize]) % (t.q - 1);
                    FqElement(exp[e as usize])
                }
            }
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FqElement) -> Option<FqElement> {
        if a.is_zero() {
            return None;
        }
        let t = &*self.tables;
        Some(match &t.arith {
            Arith::Prime => FqElement(pow_mod(a.0 as u64, t.p as u64 - 2, t.p as u64) as u32),
            Arith::Extension { exp, log, .. } => {
                let e = (t.q - 1 - log[a.0 as usize]) % (t.q - 1);
                FqElement(exp[e as usize])
            }
        })
    }

    pub fn pow(&self, a: FqElement, mut e: u64) -> FqElement {
        let mut base = a;
        let mut acc = FqElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Renders an element as an F_p integer (m = 1) or a polynomial in `g`.
    pub fn format_element(&self, a: FqElement) -> String {
        let t = &*self.tables;
        if t.config.m == 1 {
            return a.0.to_string();
        }
        let digits = to_digits(a.0, t.p, t.config.m as usize);
        let mut terms = Vec::new();
        for (i, &d) in digits.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let term = match (i, d) {
                (0, d) => d.to_string(),
                (1, 1) => "g".to_string(),
                (1, d) => format!("{d}*g"),
                (i, 1) => format!("g^{i}"),
                (i, d) => format!("{d}*g^{i}"),
            };
            terms.push(term);
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    /// True when the rendering from [`Fq::format_element`] is a single atom
    /// that needs no parentheses as a coefficient.
    pub fn is_atomic(&self, a: FqElement) -> bool {
        self.m() == 1 || a.0 < self.tables.p
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn to_digits(mut a: u32, p: u32, m: usize) -> Vec<u32> {
    let mut d = vec![0; m];
    for slot in d.iter_mut() {
        *slot = a % p;
        a /= p;
    }
    d
}

fn from_digits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

fn digitwise(a: u32, b: u32, p: u32, f: impl Fn(u32, u32) -> u32) -> u32 {
    let (mut a, mut b) = (a, b);
    let (mut out, mut scale) = (0, 1);
    while a > 0 || b > 0 {
        out += (f(a % p, b % p) % p) * scale;
        a /= p;
        b /= p;
        scale *= p;
    }
    out
}

/// Multiplies two residues modulo the monic modulus over F_p.
fn mul_mod_poly(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let m = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * m];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for k in (m..2 * m).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (i, &mc) in modulus[..m].iter().enumerate() {
            let idx = k - m + i;
            prod[idx] = (prod[idx] + (p as u64 - c) * mc as u64) % p as u64;
        }
    }
    prod[..m].iter().map(|&x| x as u32).collect()
}

fn extension_tables(p: u32, q: u32, modulus: &[u32]) -> Arith {
    let m = modulus.len() - 1;
    let add = if q <= 512 {
        let mut t = vec![0; (q * q) as usize];
        for a in 0..q {
            for b in 0..q {
                t[(a * q + b) as usize] = digitwise(a, b, p, |x, y| x + y);
            }
        }
        t
    } else {
        Vec::new()
    };
    let neg = (0..q).map(|a| digitwise(a, 0, p, |x, _| p - x)).collect();
    // Search for a primitive element; one exists because the modulus is
    // irreducible.
    for cand in 2..q {
        let c = to_digits(cand, p, m);
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut cur = to_digits(1, p, m);
        let mut ok = true;
        for k in 0..q - 1 {
            let enc = from_digits(&cur, p);
            if k > 0 && enc == 1 {
                ok = false;
                break;
            }
            exp.push(enc);
            cur = mul_mod_poly(&cur, &c, modulus, p);
        }
        if ok && from_digits(&cur, p) == 1 {
            let mut log = vec![0; q as usize];
            for (k, &e) in exp.iter().enumerate() {
                log[e as usize] = k as u32;
            }
            return Arith::Extension { add, neg, exp, log };
        }
    }
    unreachable!("irreducible modulus always has a primitive element")
}

// Polynomial helpers over F_p with u64 coefficients, low-to-high, used only
// for validating the modulus.
fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn prem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let inv = pow_mod(b[db], p - 2, p);
    while r.len() > db {
        let k = r.len() - 1;
        let c = r[k] * inv % p;
        for i in 0..=db {
            let idx = k - db + i;
            r[idx] = (r[idx] + (p - c) * b[i] % p) % p;
        }
        trim(&mut r);
    }
    r
}

fn pmulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    prem(&prod, f, p)
}

fn pgcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = prem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or irreducibility test: f is irreducible iff gcd(x^{p^i} - x, f) = 1
/// for 1 <= i <= deg(f)/2.
fn prime_poly_irreducible(f: &[u32], p: u64) -> bool {
    let f: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let n = f.len() - 1;
    let x = vec![0, 1];
    let mut xp = x.clone();
    for _ in 0..n / 2 {
        // xp <- xp^p mod f
        let mut acc = vec![1u64];
        let mut base = xp.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = pmulmod(&acc, &base, &f, p);
            }
            base = pmulmod(&base, &base, &f, p);
            e >>= 1;
        }
        xp = acc;
        let mut diff = xp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = pgcd(&f, &diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Parses a polynomial in `g` over F_p, e.g. `g^2+g+1` or `2*g^3+1`.
fn parse_modulus(text: &str, p: u64) -> Result<Vec<u32>> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Error::syntax(0, "empty modulus"));
    }
    let mut coeffs: Vec<u64> = Vec::new();
    let mut pos = 0;
    let bytes = cleaned.as_bytes();
    while pos < bytes.len() {
        let mut sign = 1i64;
        if bytes[pos] == b'+' || bytes[pos] == b'-' {
            if bytes[pos] == b'-' {
                sign = -1;
            }
            pos += 1;
        } else if pos > 0 {
            return Err(Error::syntax(pos, "expected '+' or '-'"));
        }
        let start = pos;
        while pos < bytes.len() && bytes[pos] != b'+' && bytes[pos] != b'-' {
            pos += 1;
        }
        let term = &cleaned[start..pos];
        let (coef, rest) = match term.find('g') {
            None => (term, ""),
            Some(i) => (term[..i].trim_end_matches('*'), &term[i + 1..]),
        };
        let c: u64 = if coef.is_empty() {
            if term.contains('g') {
                1
            } else {
                return Err(Error::syntax(start, "empty term"));
            }
        } else {
            coef.parse().map_err(|_| Error::syntax(start, format!("bad coefficient '{coef}'")))?
        };
        if c >= p {
            return Err(Error::CoefficientOutOfRange { value: c, p });
        }
        let e: usize = if !term.contains('g') {
            0
        } else if rest.is_empty() {
            1
        } else if let Some(e) = rest.strip_prefix('^') {
            e.parse().map_err(|_| Error::syntax(start, format!("bad exponent in '{term}'")))?
        } else {
            return Err(Error::syntax(start, format!("unexpected '{rest}'")));
        };
        if coeffs.len() <= e {
            coeffs.resize(e + 1, 0);
        }
        let c = if sign < 0 { (p - c) % p } else { c };
        coeffs[e] = (coeffs[e] + c) % p;
    }
    trim(&mut coeffs);
    Ok(coeffs.into_iter().map(|c| c as u32).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_fields() -> Vec<Fq> {
        [2, 3, 4, 5, 8, 9].iter().map(|&q| Fq::of_order(q).unwrap()).collect()
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in all_fields() {
            let q = f.q();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), FqElement::ZERO);
                assert_eq!(f.pow(a, q), a, "x^q = x in {f:?}");
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FqElement::ONE);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements().step_by(3) {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn builtin_orders() {
        assert_eq!(Fq::of_order(4).unwrap().p(), 2);
        assert_eq!(Fq::of_order(9).unwrap().m(), 2);
        assert!(Fq::of_order(6).is_err());
        assert!(Fq::of_order(16).is_err());
        let f16 = Fq::new(FqConfig::for_order(16, Some("g^4+g+1")).unwrap()).unwrap();
        assert_eq!(f16.q(), 16);
    }

    #[test]
    fn reducible_modulus_rejected() {
        let cfg = FqConfig { p: 2, m: 2, modulus: Some("g^2+1".into()) };
        assert!(matches!(Fq::new(cfg), Err(Error::InvalidField(_))));
        let cfg = FqConfig { p: 3, m: 2, modulus: Some("g^2+2".into()) };
        assert!(Fq::new(cfg).is_err());
    }

    #[test]
    fn generator_satisfies_modulus() {
        let f = Fq::of_order(8).unwrap();
        let g = f.generator();
        // g^3 + g + 1 = 0
        let v = f.add(f.add(f.pow(g, 3), g), FqElement::ONE);
        assert!(v.is_zero());
        assert_eq!(f.format_element(f.add(g, FqElement::ONE)), "1+g");
    }
}
