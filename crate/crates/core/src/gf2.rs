//! Dense vectors, matrices and polynomials over GF(2).
//!
//! Vectors are column vectors. A matrix `G` of shape `n × w` multiplies a
//! length-`w` vector to give a length-`n` vector, so `G0 · p` has one entry per
//! memory cell. All indices are 0-based: coordinate 0 is the first cell and the
//! leftmost character of a bit string.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A fixed-length bit-packed vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; words_for(len)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for w in v.words.iter_mut() {
            *w = u64::MAX;
        }
        v.clear_tail();
        v
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector whose bit `i` is bit `i` of `value`; bits at or above `len` are dropped.
    pub fn from_u64(value: u64, len: usize) -> Self {
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = value;
            v.clear_tail();
        }
        v
    }

    pub fn from_support(len: usize, support: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in support {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if bit {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Indices of the nonzero entries, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD + b)
            })
        })
    }

    pub fn complement(&self) -> Self {
        let mut v = self.clone();
        for w in v.words.iter_mut() {
            *w = !*w;
        }
        v.clear_tail();
        v
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "dot product of unequal lengths");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// Hamming distance.
    pub fn distance(&self, other: &Self) -> usize {
        assert_eq!(self.len, other.len, "distance of unequal lengths");
        self.words.iter().zip(&other.words).map(|(a, b)| (a ^ b).count_ones() as usize).sum()
    }

    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "sum of unequal lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Lexicographic comparison with coordinate 0 most significant and `0 < 1`.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        assert_eq!(self.len, other.len, "comparison of unequal lengths");
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff != 0 {
                let first = diff.trailing_zeros();
                return if (a >> first) & 1 == 0 { Ordering::Less } else { Ordering::Greater };
            }
        }
        Ordering::Equal
    }

    /// Picks the entries at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Self {
        let mut v = Self::zeros(indices.len());
        for (j, &i) in indices.iter().enumerate() {
            if self.get(i) {
                v.set(j, true);
            }
        }
        v
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl Add for &BitVector {
    type Output = BitVector;

    fn add(self, rhs: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(rhs);
        out
    }
}

impl AddAssign<&BitVector> for BitVector {
    fn add_assign(&mut self, rhs: &BitVector) {
        self.xor_assign(rhs);
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("unexpected character {other:?} in bit string {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bits(&bits))
    }
}

impl Serialize for BitVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVector>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub matrix: BitMatrix,
    pub pivots: Vec<usize>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BitVector::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from 0/1 rows. Every row must have `cols` entries.
    pub fn from_rows_u8(rows: &[Vec<u8>], cols: usize) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::dim(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            for (j, &b) in row.iter().enumerate() {
                match b {
                    0 => {}
                    1 => m.set(i, j, true),
                    other => return Err(Error::Parse(format!("matrix entry {other} at ({i},{j}) is not 0 or 1"))),
                }
            }
        }
        Ok(m)
    }

    pub fn from_row_vectors(rows: Vec<BitVector>, cols: usize) -> Result<Self> {
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::dim(format!("row {i} has length {}, expected {cols}", r.len())));
        }
        Ok(Self { rows: rows.len(), cols, data: rows })
    }

    /// Builds an `n × columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[BitVector], n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != n {
                return Err(Error::dim(format!("column {j} has length {}, expected {n}", c.len())));
            }
            for i in c.support() {
                m.set(i, j, true);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, bit: bool) {
        self.data[i].set(j, bit);
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.data[i]
    }

    pub fn column(&self, j: usize) -> BitVector {
        let mut v = BitVector::zeros(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn columns(&self) -> Vec<BitVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows_u8(&self) -> Vec<Vec<u8>> {
        self.data.iter().map(|r| r.iter().map(u8::from).collect()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for j in row.support() {
                t.set(j, i, true);
            }
        }
        t
    }

    /// Matrix-vector product `self · x`.
    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return Err(Error::dim(format!(
                "cannot multiply {}x{} matrix by vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        let mut out = BitVector::zeros(self.rows);
        for (i, row) in self.data.iter().enumerate() {
            if row.dot(x) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::dim(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for (i, row) in self.data.iter().enumerate() {
            for k in row.support() {
                out.data[i].xor_assign(&other.data[k]);
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVector::is_zero)
    }

    /// The submatrix made of the rows at `indices`, in that order.
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        Self { rows: indices.len(), cols: self.cols, data: indices.iter().map(|&i| self.data[i].clone()).collect() }
    }

    /// Gauss–Jordan elimination restricted to the first `limit` columns.
    fn reduce_prefix(&mut self, limit: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit.min(self.cols) {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.data[i].get(c)) else {
                continue;
            };
            self.data.swap(r, p);
            let pivot_row = self.data[r].clone();
            for i in 0..self.rows {
                if i != r && self.data[i].get(c) {
                    self.data[i].xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Reduced row echelon form.
    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let pivots = m.reduce_prefix(self.cols);
        Echelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Option<BitMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(n)).ok()?;
        let mut aug = aug;
        let pivots = aug.reduce_prefix(n);
        if pivots.len() != n {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if aug.get(i, n + j) {
                    inv.set(i, j, true);
                }
            }
        }
        Some(inv)
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != other.rows {
            return Err(Error::dim(format!("hstack of {} and {} rows", self.rows, other.rows)));
        }
        let cols = self.cols + other.cols;
        let mut out = Self::zeros(self.rows, cols);
        for i in 0..self.rows {
            for j in self.data[i].support() {
                out.set(i, j, true);
            }
            for j in other.data[i].support() {
                out.set(i, self.cols + j, true);
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for row in &self.data {
            writeln!(f, "  {row}")?;
        }
        write!(f, "]")
    }
}

/// Outcome of [`solve`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Solvable { particular: BitVector, nullbasis: Vec<BitVector> },
    /// `certificate` marks a set of equations whose left-hand sides cancel
    /// while their right-hand sides sum to 1.
    Inconsistent { certificate: BitVector },
}

/// Solves `a · x = b`, returning one particular solution and a null-space basis.
///
/// Free variables of the particular solution are zero; the null-space basis
/// has one vector per free column, in increasing column order.
pub fn solve(a: &BitMatrix, b: &BitVector) -> Result<Solution> {
    if a.rows() != b.len() {
        return Err(Error::dim(format!("system has {} equations but right-hand side has length {}", a.rows(), b.len())));
    }
    let (m, w) = (a.rows(), a.cols());
    // [A | b | I_m]; the identity part tracks which equations were combined.
    let mut aug = BitMatrix::zeros(m, w + 1 + m);
    for i in 0..m {
        for j in a.row(i).support() {
            aug.set(i, j, true);
        }
        if b.get(i) {
            aug.set(i, w, true);
        }
        aug.set(i, w + 1 + i, true);
    }
    let pivots = aug.reduce_prefix(w);
    let rank = pivots.len();

    if let Some(bad) = (rank..m).find(|&i| aug.get(i, w)) {
        let mut certificate = BitVector::zeros(m);
        for i in 0..m {
            if aug.get(bad, w + 1 + i) {
                certificate.set(i, true);
            }
        }
        return Ok(Solution::Inconsistent { certificate });
    }

    let mut particular = BitVector::zeros(w);
    for (r, &c) in pivots.iter().enumerate() {
        if aug.get(r, w) {
            particular.set(c, true);
        }
    }

    let mut is_pivot = vec![false; w];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let nullbasis = (0..w)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = BitVector::unit(w, f);
            for (r, &c) in pivots.iter().enumerate() {
                if aug.get(r, f) {
                    v.set(c, true);
                }
            }
            v
        })
        .collect();

    Ok(Solution::Solvable { particular, nullbasis })
}

/// Basis of `{x : a · x = 0}`; its size is `cols − rank(a)`.
pub fn nullspace(a: &BitMatrix) -> Vec<BitVector> {
    match solve(a, &BitVector::zeros(a.rows())) {
        Ok(Solution::Solvable { nullbasis, .. }) => nullbasis,
        _ => unreachable!("homogeneous systems are always consistent"),
    }
}

/// A polynomial over GF(2); coefficient of `x^i` at index `i`.
#[derive(Clone, PartialEq, Eq)]
pub struct BinPolynomial {
    coeffs: Vec<bool>,
}

impl BinPolynomial {
    /// Builds a polynomial from low-to-high coefficients, trimming leading zeros.
    pub fn from_coeffs(coeffs: &[bool]) -> Self {
        let mut coeffs = coeffs.to_vec();
        while coeffs.last() == Some(&false) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Builds a polynomial from the exponents of its nonzero terms.
    pub fn from_exponents(exps: &[usize]) -> Self {
        let deg = exps.iter().copied().max().map_or(0, |d| d + 1);
        let mut coeffs = vec![false; deg];
        for &e in exps {
            coeffs[e] ^= true;
        }
        Self::from_coeffs(&coeffs)
    }

    /// `x^n + 1`, which equals `x^n − 1` over GF(2).
    pub fn x_pow_n_minus_1(n: usize) -> Self {
        Self::from_exponents(&[0, n])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.coeffs.get(i).copied().unwrap_or(false)
    }

    pub fn coeffs(&self) -> &[bool] {
        &self.coeffs
    }

    /// Coefficient vector of length `n` (degree must be below `n`).
    pub fn to_vector(&self, n: usize) -> BitVector {
        assert!(self.coeffs.len() <= n, "polynomial does not fit in length {n}");
        let mut v = BitVector::zeros(n);
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c {
                v.set(i, true);
            }
        }
        v
    }

    /// `x^d · f(1/x)` where `d = deg f`.
    pub fn reciprocal(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::from_coeffs(&c)
    }

    /// Long division: returns `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let Some(dd) = divisor.degree() else {
            return Err(Error::Usage("division by the zero polynomial".into()));
        };
        let mut rem = self.coeffs.clone();
        let mut quot = vec![false; rem.len().saturating_sub(dd).max(1)];
        while let Some(top) = rem.iter().rposition(|&c| c) {
            if top < dd {
                break;
            }
            let shift = top - dd;
            quot[shift] = true;
            for (i, &c) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] ^= c;
            }
        }
        Ok((Self::from_coeffs(&quot), Self::from_coeffs(&rem)))
    }
}

impl fmt::Display for BinPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = (0..self.coeffs.len())
            .rev()
            .filter(|&i| self.coeffs[i])
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        f.write_str(&terms.join("+"))
    }
}

impl fmt::Debug for BinPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinPolynomial({self})")
    }
}

/// True iff `g` divides `x^n − 1` over GF(2).
pub fn polymod_divides(g: &BinPolynomial, n: usize) -> Result<bool> {
    if g.is_zero() {
        return Err(Error::Usage("generator polynomial is zero".into()));
    }
    let (_, rem) = BinPolynomial::x_pow_n_minus_1(n).div_rem(g)?;
    Ok(rem.is_zero())
}
