//! Parser for the ASCII element grammar.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ['^' INT]
//! atom   := INT | 'T' | 'g' | 'tau' | '(' expr ')' | '-' factor
//! ```
//!
//! Every expression is evaluated in K{τ} with the true noncommutative
//! product; a K element is an expression of τ-degree at most zero. Division
//! is only defined between elements of K. Integer literals denote elements
//! of F_p and must lie in `0..p`.

use crate::error::{Error, Result};
use crate::field::{Fq, FqElement, FqPoly, KElement};
use crate::skew::{SkewMatrix, SkewPoly};

/// Parses a twisted polynomial such as `T + (T+1)*tau + tau^2`.
pub fn parse_skew(fq: &Fq, text: &str) -> Result<SkewPoly> {
    let mut p = Parser { fq, src: text.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.at_end() {
        return Err(Error::syntax(0, "empty expression"));
    }
    let v = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(Error::syntax(p.pos, format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(v)
}

/// Parses an element of K such as `(T+2)/(T)`.
pub fn parse_k_element(fq: &Fq, text: &str) -> Result<KElement> {
    let v = parse_skew(fq, text)?;
    if v.degree().unwrap_or(0) > 0 {
        return Err(Error::syntax(0, "expected an element of K, found a τ-term"));
    }
    Ok(v.constant_term())
}

/// Parses an element of F_q[t], written with `T` standing for t.
pub fn parse_t_poly(fq: &Fq, text: &str) -> Result<FqPoly> {
    let k = parse_k_element(fq, text)?;
    if !k.denominator().is_one() {
        return Err(Error::syntax(0, "expected a polynomial in t, found a fraction"));
    }
    Ok(k.numerator().clone())
}

/// Parses a matrix given as rows of twisted-polynomial strings.
pub fn parse_matrix<S: AsRef<str>>(fq: &Fq, rows: &[Vec<S>]) -> Result<SkewMatrix> {
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|s| parse_skew(fq, s.as_ref())).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    if parsed.is_empty() || parsed[0].is_empty() {
        return Err(Error::DimensionMismatch("empty matrix".into()));
    }
    SkewMatrix::from_rows(fq, parsed)
}

/// Renders a matrix as rows of twisted-polynomial strings.
pub fn format_matrix(m: &SkewMatrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

struct Parser<'a> {
    fq: &'a Fq,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<SkewPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<SkewPoly> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.factor()?;
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let den = self.factor()?;
                if acc.degree().unwrap_or(0) > 0 || den.degree().unwrap_or(0) > 0 {
                    return Err(Error::syntax(at, "division is only defined in K"));
                }
                let q = acc.constant_term().div(&den.constant_term())?;
                acc = SkewPoly::from_k(q);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<SkewPoly> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let at = self.pos;
            let e = self.integer()?;
            let e = u32::try_from(e).map_err(|_| Error::syntax(at, "exponent too large"))?;
            if base.degree().unwrap_or(0) == 0 {
                let k = base.constant_term();
                return Ok(SkewPoly::from_k(k.pow(e as i64)?));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::syntax(start, "expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::syntax(start, "integer too large"))
    }

    fn atom(&mut self) -> Result<SkewPoly> {
        let fq = self.fq;
        let Some(c) = self.peek() else {
            return Err(Error::syntax(self.pos, "unexpected end of input"));
        };
        match c {
            b'0'..=b'9' => {
                let v = self.integer()?;
                if v >= fq.p() as u64 {
                    return Err(Error::CoefficientOutOfRange { value: v, p: fq.p() as u64 });
                }
                Ok(SkewPoly::from_k(KElement::from_fq(fq, FqElement(v as u32))))
            }
            b'(' => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(Error::syntax(self.pos, "expected ')'"));
                }
                Ok(v)
            }
            b'-' => {
                self.pos += 1;
                Ok(-&self.factor()?)
            }
            b'T' => {
                self.pos += 1;
                Ok(SkewPoly::from_k(KElement::theta(fq)))
            }
            b'g' => {
                if fq.m() == 1 {
                    return Err(Error::syntax(self.pos, "'g' is only available when m > 1"));
                }
                self.pos += 1;
                Ok(SkewPoly::from_k(KElement::from_poly(fq, FqPoly::constant(fq.generator()))))
            }
            b't' if self.src[self.pos..].starts_with(b"tau") => {
                self.pos += 3;
                Ok(SkewPoly::tau(fq))
            }
            other => Err(Error::syntax(self.pos, format!("unexpected '{}'", other as char))),
        }
    }
}
