use std::fmt;

use super::{Coefficient, SkewPoly, TwistedPoly};
use crate::error::{Error, Result};
use crate::field::{Fq, KElement};

/// A dense `rows × cols` matrix of twisted polynomials, stored row-major.
#[derive(Clone, PartialEq)]
pub struct TwistedMatrix<C> {
    fq: Fq,
    rows: usize,
    cols: usize,
    entries: Vec<TwistedPoly<C>>,
}

pub type SkewMatrix = TwistedMatrix<KElement>;

fn mismatch(what: &str, a: (usize, usize), b: (usize, usize)) -> Error {
    Error::DimensionMismatch(format!("{what}: {}x{} vs {}x{}", a.0, a.1, b.0, b.1))
}

impl<C: Coefficient> TwistedMatrix<C> {
    pub fn zeros(fq: &Fq, rows: usize, cols: usize) -> Self {
        TwistedMatrix { fq: fq.clone(), rows, cols, entries: vec![TwistedPoly::zero(fq); rows * cols] }
    }

    pub fn from_rows(fq: &Fq, rows: Vec<Vec<TwistedPoly<C>>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(TwistedMatrix { fq: fq.clone(), rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    pub fn column(fq: &Fq, entries: Vec<TwistedPoly<C>>) -> Self {
        TwistedMatrix { fq: fq.clone(), rows: entries.len(), cols: 1, entries }
    }

    pub fn row(fq: &Fq, entries: Vec<TwistedPoly<C>>) -> Self {
        TwistedMatrix { fq: fq.clone(), rows: 1, cols: entries.len(), entries }
    }

    pub fn field(&self) -> &Fq {
        &self.fq
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &TwistedPoly<C> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: TwistedPoly<C>) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[TwistedPoly<C>] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<TwistedPoly<C>>> {
        self.entries.chunks(self.cols.max(1)).take(self.rows).map(<[_]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(TwistedPoly::is_zero)
    }

    /// Largest τ-degree of an entry, `None` for the zero matrix.
    pub fn degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(TwistedPoly::degree).max()
    }

    fn zip_with(&self, other: &Self, what: &str, f: impl Fn(&TwistedPoly<C>, &TwistedPoly<C>) -> TwistedPoly<C>) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(mismatch(what, self.shape(), other.shape()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect();
        Ok(TwistedMatrix { fq: self.fq.clone(), rows: self.rows, cols: self.cols, entries })
    }

    fn map(&self, f: impl Fn(&TwistedPoly<C>) -> TwistedPoly<C>) -> Self {
        TwistedMatrix {
            fq: self.fq.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "matrix addition", TwistedPoly::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "matrix subtraction", TwistedPoly::sub)
    }

    pub fn neg(&self) -> Self {
        self.map(TwistedPoly::neg)
    }

    /// Entrywise left scaling by a constant.
    pub fn scale(&self, x: &KElement) -> Self {
        self.map(|p| p.scale(x))
    }

    /// Entrywise `τ^k · entry`.
    pub fn twist(&self, k: u32) -> Self {
        self.map(|p| p.twist(k))
    }

    /// Entrywise `entry · τ^k`.
    pub fn shift(&self, k: usize) -> Self {
        self.map(|p| p.shift(k))
    }

    /// `a · self`.
    pub fn left_mul(&self, a: &SkewMatrix) -> Result<Self> {
        if a.cols != self.rows {
            return Err(mismatch("matrix product", a.shape(), self.shape()));
        }
        let mut out = Self::zeros(&self.fq, a.rows, self.cols);
        for i in 0..a.rows {
            for j in 0..self.cols {
                let mut acc = TwistedPoly::zero(&self.fq);
                for k in 0..a.cols {
                    let l = a.get(i, k);
                    if !l.is_zero() {
                        acc = acc.add(&self.get(k, j).left_mul(l));
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// `self · a`.
    pub fn right_mul(&self, a: &SkewMatrix) -> Result<Self> {
        if self.cols != a.rows {
            return Err(mismatch("matrix product", self.shape(), a.shape()));
        }
        let mut out = Self::zeros(&self.fq, self.rows, a.cols);
        for i in 0..self.rows {
            for j in 0..a.cols {
                let mut acc = TwistedPoly::zero(&self.fq);
                for k in 0..self.cols {
                    let r = a.get(k, j);
                    if !r.is_zero() {
                        acc = acc.add(&self.get(i, k).right_mul(r));
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Submatrix of the given row and column ranges.
    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let entries = rows
            .clone()
            .flat_map(|i| cols.clone().map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        TwistedMatrix { fq: self.fq.clone(), rows: rows.len(), cols: cols.len(), entries }
    }
}

impl SkewMatrix {
    pub fn identity(fq: &Fq, n: usize) -> Self {
        let mut m = Self::zeros(fq, n, n);
        for i in 0..n {
            m.set(i, i, SkewPoly::one(fq));
        }
        m
    }

    /// A constant matrix viewed in K{τ}.
    pub fn from_k(m: &KMatrix) -> Self {
        TwistedMatrix {
            fq: m.fq.clone(),
            rows: m.rows,
            cols: m.cols,
            entries: m.entries.iter().cloned().map(SkewPoly::from_k).collect(),
        }
    }

    pub fn mul(&self, other: &SkewMatrix) -> Result<SkewMatrix> {
        self.right_mul(other)
    }

    pub fn pow(&self, e: u32) -> Result<SkewMatrix> {
        if self.rows != self.cols {
            return Err(mismatch("matrix power", self.shape(), self.shape()));
        }
        (0..e).try_fold(Self::identity(&self.fq, self.rows), |acc, _| acc.mul(self))
    }

    /// The matrix of τ^k-coefficients.
    pub fn coefficient(&self, k: usize) -> KMatrix {
        KMatrix {
            fq: self.fq.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|p| p.coeff(k)).collect(),
        }
    }

    /// The derivative `dM`: the matrix of constant terms.
    pub fn constant_part(&self) -> KMatrix {
        self.coefficient(0)
    }

    pub fn theta_degree(&self) -> usize {
        self.entries.iter().map(SkewPoly::theta_degree).max().unwrap_or(0)
    }
}

impl<C: Coefficient> fmt::Debug for TwistedMatrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl fmt::Display for SkewMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .to_rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// A dense matrix over K.
#[derive(Clone, PartialEq)]
pub struct KMatrix {
    fq: Fq,
    rows: usize,
    cols: usize,
    entries: Vec<KElement>,
}

impl KMatrix {
    pub fn zeros(fq: &Fq, rows: usize, cols: usize) -> Self {
        KMatrix { fq: fq.clone(), rows, cols, entries: vec![KElement::zero(fq); rows * cols] }
    }

    pub fn identity(fq: &Fq, n: usize) -> Self {
        let mut m = Self::zeros(fq, n, n);
        for i in 0..n {
            m.set(i, i, KElement::one(fq));
        }
        m
    }

    pub fn from_rows(fq: &Fq, rows: Vec<Vec<KElement>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(KMatrix { fq: fq.clone(), rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    pub fn field(&self) -> &Fq {
        &self.fq
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &KElement {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: KElement) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<KElement>> {
        self.entries.chunks(self.cols.max(1)).take(self.rows).map(<[_]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(KElement::is_zero)
    }

    fn map(&self, f: impl Fn(&KElement) -> KElement) -> Self {
        KMatrix { fq: self.fq.clone(), rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn add(&self, other: &KMatrix) -> Result<KMatrix> {
        if self.shape() != other.shape() {
            return Err(mismatch("matrix addition", self.shape(), other.shape()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(KMatrix { fq: self.fq.clone(), rows: self.rows, cols: self.cols, entries })
    }

    pub fn sub(&self, other: &KMatrix) -> Result<KMatrix> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> KMatrix {
        self.map(|x| -x)
    }

    pub fn scale(&self, c: &KElement) -> KMatrix {
        self.map(|x| c * x)
    }

    pub fn frobenius(&self, k: u32) -> KMatrix {
        self.map(|x| x.frobenius(k))
    }

    pub fn mul(&self, other: &KMatrix) -> Result<KMatrix> {
        if self.cols != other.rows {
            return Err(mismatch("matrix product", self.shape(), other.shape()));
        }
        let mut out = KMatrix::zeros(&self.fq, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = KElement::zero(&self.fq);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if !a.is_zero() {
                        acc = acc + a * other.get(k, j);
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<KMatrix> {
        (0..e).try_fold(KMatrix::identity(&self.fq, self.rows), |acc, _| acc.mul(self))
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (KMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            for j in 0..m.cols {
                m.entries.swap(r * m.cols + j, p * m.cols + j);
            }
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = &inv * m.get(r, j);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Some solution `x` of `self · x = b`, with free variables set to zero.
    pub fn solve(&self, b: &[KElement]) -> Result<Option<Vec<KElement>>> {
        if b.len() != self.rows {
            return Err(mismatch("linear system", self.shape(), (b.len(), 1)));
        }
        let mut aug = KMatrix::zeros(&self.fq, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![KElement::zero(&self.fq); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = red.get(r, self.cols).clone();
        }
        Ok(Some(x))
    }
}

impl fmt::Debug for KMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl fmt::Display for KMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .to_rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}
