//! Exact derived-equivalence obstructions from Cartan matrices.
//!
//! Derived equivalent algebras have Cartan matrices congruent over `GL_n(ℤ)`,
//! so the size, the absolute determinant and the inertia triple (counts of
//! positive, negative and zero eigenvalues) must agree. Everything here is
//! computed with arbitrary-precision integers or rationals; no eigenvalue is
//! ever approximated.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix is not square ({rows} rows, row {row} has {len} entries)")]
    NotSquare { rows: usize, row: usize, len: usize },
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("cannot parse matrix: {0}")]
    Parse(String),
}

/// Square matrix of arbitrary-precision integers, optionally labelled by
/// the edges of a Brauer graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub labels: Vec<String>,
    pub rows: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(MatrixError::NotSquare { rows: n, row, len: r.len() });
        }
        Ok(IntMatrix { labels: Vec::new(), rows })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self, MatrixError> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.labels = labels;
        self
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        IntMatrix { labels: Vec::new(), rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn check_symmetric(&self) -> Result<(), MatrixError> {
        let n = self.size();
        for i in 0..n {
            for j in i + 1..n {
                if self.rows[i][j] != self.rows[j][i] {
                    return Err(MatrixError::NotSymmetric(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn is_symmetric(&self) -> bool {
        self.check_symmetric().is_ok()
    }

    pub fn transpose(&self) -> IntMatrix {
        let n = self.size();
        let rows = (0..n).map(|i| (0..n).map(|j| self.rows[j][i].clone()).collect()).collect();
        IntMatrix { labels: self.labels.clone(), rows }
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.size();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| &self.rows[i][k] * &other.rows[k][j]).sum())
                    .collect()
            })
            .collect();
        IntMatrix { labels: Vec::new(), rows }
    }

    /// `P · self · Pᵀ`.
    pub fn congruent(&self, p: &IntMatrix) -> IntMatrix {
        p.mul(self).mul(&p.transpose())
    }

    /// Same matrix with rows and columns reordered so that labels follow `order`.
    pub fn reindexed(&self, order: &[String]) -> Option<IntMatrix> {
        let pos: Vec<usize> = order
            .iter()
            .map(|l| self.labels.iter().position(|x| x == l))
            .collect::<Option<_>>()?;
        let rows = pos.iter().map(|&i| pos.iter().map(|&j| self.rows[i][j].clone()).collect()).collect();
        Some(IntMatrix { labels: order.to_vec(), rows })
    }

    /// Accepts a JSON array of integer rows (numbers or decimal strings), or an
    /// object with a `matrix` field and optional `labels`, or whitespace
    /// separated text with one row per line.
    pub fn parse(text: &str) -> Result<IntMatrix, MatrixError> {
        let trimmed = text.trim_start();
        if trimmed.starts_with('[') || trimmed.starts_with('{') {
            let file: MatrixFile = serde_json::from_str(text).map_err(|e| MatrixError::Parse(e.to_string()))?;
            let (labels, rows) = match file {
                MatrixFile::Bare(rows) => (Vec::new(), rows),
                MatrixFile::Tagged { labels, matrix } => (labels, matrix),
            };
            let rows = rows
                .into_iter()
                .map(|r| r.into_iter().map(|e| e.into_bigint()).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            let m = IntMatrix::new(rows)?;
            if !labels.is_empty() && labels.len() != m.size() {
                return Err(MatrixError::Parse("label count does not match matrix size".into()));
            }
            Ok(m.with_labels(labels))
        } else {
            let rows = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(|l| {
                    l.split_whitespace()
                        .map(|t| t.parse::<BigInt>().map_err(|e| MatrixError::Parse(format!("{t}: {e}"))))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            IntMatrix::new(rows)
        }
    }

    /// JSON with entries as decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<String>> =
            self.rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        if self.labels.is_empty() {
            serde_json::json!(rows)
        } else {
            serde_json::json!({ "labels": self.labels, "matrix": rows })
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixFile {
    Bare(Vec<Vec<Entry>>),
    Tagged {
        #[serde(default)]
        labels: Vec<String>,
        matrix: Vec<Vec<Entry>>,
    },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Int(i64),
    Text(String),
}

impl Entry {
    fn into_bigint(self) -> Result<BigInt, MatrixError> {
        match self {
            Entry::Int(x) => Ok(BigInt::from(x)),
            Entry::Text(s) => s.trim().parse().map_err(|e| MatrixError::Parse(format!("{s}: {e}"))),
        }
    }
}

/// Dense integer polynomial, coefficients from the constant term upwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    pub coefficients: Vec<BigInt>,
}

impl IntPoly {
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn coefficient(&self, power: usize) -> BigInt {
        self.coefficients.get(power).cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coefficients.last().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coefficients.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (power, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_mag = !mag.is_one() || power == 0;
            match (show_mag, power) {
                (true, 0) => write!(f, "{mag}")?,
                (true, 1) => write!(f, "{mag}x")?,
                (true, _) => write!(f, "{mag}x^{power}")?,
                (false, 1) => write!(f, "x")?,
                (false, _) => write!(f, "x^{power}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Characteristic polynomial `det(xI − M)` by the division-free Berkowitz
/// recursion.
pub fn char_poly(m: &IntMatrix) -> IntPoly {
    let n = m.size();
    if n == 0 {
        return IntPoly { coefficients: vec![BigInt::one()] };
    }
    // `p` holds coefficients from the leading term down, for the trailing
    // principal submatrix starting at row `k`.
    let mut p = vec![BigInt::one(), -m.rows[n - 1][n - 1].clone()];
    for k in (0..n.saturating_sub(1)).rev() {
        let size = n - k;
        let a = &m.rows[k][k];
        let row: Vec<&BigInt> = (k + 1..n).map(|j| &m.rows[k][j]).collect();
        let mut col: Vec<BigInt> = (k + 1..n).map(|i| m.rows[i][k].clone()).collect();
        let mut toeplitz = Vec::with_capacity(size + 1);
        toeplitz.push(BigInt::one());
        toeplitz.push(-a.clone());
        for _ in 2..=size {
            let dot: BigInt = row.iter().zip(&col).map(|(r, c)| *r * c).sum();
            toeplitz.push(-dot);
            col = (k + 1..n)
                .map(|i| (k + 1..n).zip(&col).map(|(j, c)| &m.rows[i][j] * c).sum())
                .collect();
        }
        let next: Vec<BigInt> = (0..=size)
            .map(|i| (0..=i.min(size - 1)).map(|j| &toeplitz[i - j] * &p[j]).sum())
            .collect();
        p = next;
    }
    p.reverse();
    IntPoly { coefficients: p }
}

/// Determinant by fraction-free Bareiss elimination.
pub fn det_exact(m: &IntMatrix) -> BigInt {
    let n = m.size();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.rows.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InertiaTriple {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

/// Sylvester inertia by symmetric Gaussian elimination over the rationals.
/// A zero diagonal with a nonzero off-diagonal entry `a_ij` is repaired by the
/// congruence adding row/column `j` to row/column `i`.
pub fn inertia(m: &IntMatrix) -> Result<InertiaTriple, MatrixError> {
    m.check_symmetric()?;
    let n = m.size();
    let mut a: Vec<Vec<BigRational>> =
        m.rows.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut t = InertiaTriple { n_plus: 0, n_minus: 0, n_zero: 0 };
    while !active.is_empty() {
        let pivot = match active.iter().copied().find(|&i| !a[i][i].is_zero()) {
            Some(i) => i,
            None => {
                let pair = active
                    .iter()
                    .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !a[i][j].is_zero());
                match pair {
                    Some((i, j)) => {
                        for c in 0..n {
                            let v = a[j][c].clone();
                            a[i][c] += v;
                        }
                        for r in 0..n {
                            let v = a[r][j].clone();
                            a[r][i] += v;
                        }
                        i
                    }
                    None => {
                        t.n_zero += active.len();
                        break;
                    }
                }
            }
        };
        let p = a[pivot][pivot].clone();
        if p.is_positive() {
            t.n_plus += 1;
        } else {
            t.n_minus += 1;
        }
        active.retain(|&i| i != pivot);
        for &r in &active {
            if a[r][pivot].is_zero() {
                continue;
            }
            let f = &a[r][pivot] / &p;
            for c in 0..n {
                let v = &f * &a[pivot][c];
                a[r][c] -= v;
            }
            for rr in 0..n {
                let v = &f * &a[rr][pivot];
                a[rr][r] -= v;
            }
        }
    }
    Ok(t)
}

/// The invariant that separates two Cartan matrices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "invariant", rename_all = "snake_case")]
pub enum Witness {
    Size { left: usize, right: usize },
    AbsDeterminant { left: String, right: String },
    NZero { left: usize, right: usize },
    NPlus { left: usize, right: usize },
    NMinus { left: usize, right: usize },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Size { left, right } => write!(f, "size {left} ≠ {right}"),
            Witness::AbsDeterminant { left, right } => write!(f, "|det| {left} ≠ {right}"),
            Witness::NZero { left, right } => write!(f, "n_zero {left} ≠ {right}"),
            Witness::NPlus { left, right } => write!(f, "n_plus {left} ≠ {right}"),
            Witness::NMinus { left, right } => write!(f, "n_minus {left} ≠ {right}"),
        }
    }
}

/// Two-valued on purpose: matching invariants never prove a derived equivalence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    NotDerivedEquivalent { witness: Witness },
    Inconclusive,
}

pub fn derived_obstruction(a: &IntMatrix, b: &IntMatrix) -> Result<Verdict, MatrixError> {
    a.check_symmetric()?;
    b.check_symmetric()?;
    let witness = |w| Ok(Verdict::NotDerivedEquivalent { witness: w });
    if a.size() != b.size() {
        return witness(Witness::Size { left: a.size(), right: b.size() });
    }
    let (da, db) = (det_exact(a).abs(), det_exact(b).abs());
    if da != db {
        return witness(Witness::AbsDeterminant { left: da.to_string(), right: db.to_string() });
    }
    let (ia, ib) = (inertia(a)?, inertia(b)?);
    if ia.n_zero != ib.n_zero {
        return witness(Witness::NZero { left: ia.n_zero, right: ib.n_zero });
    }
    if ia.n_plus != ib.n_plus {
        return witness(Witness::NPlus { left: ia.n_plus, right: ib.n_plus });
    }
    if ia.n_minus != ib.n_minus {
        return witness(Witness::NMinus { left: ia.n_minus, right: ib.n_minus });
    }
    Ok(Verdict::Inconclusive)
}
