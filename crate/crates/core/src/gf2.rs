//! Bit-packed vectors and matrices over GF(2).
//!
//! Bit `i` of a vector is coordinate `i`; coordinate 0 is the leftmost
//! character of the textual form, so matrices print exactly as they are
//! written out by hand.

use std::fmt;
use std::ops::BitXorAssign;
use std::str::FromStr;

use crate::error::{CodeError, Result};

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut v = Self::zeros(0);
        for b in bits {
            v.push(b);
        }
        v
    }

    /// Builds a vector from the low `len` bits of `value` (bit `i` of the
    /// integer becomes coordinate `i`).
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= WORD);
        let mut v = Self::zeros(len);
        if len > 0 {
            let mask = if len == WORD {
                u64::MAX
            } else {
                (1u64 << len) - 1
            };
            v.words[0] = value & mask;
        }
        v
    }

    /// Packs the vector into an integer, coordinate `i` at bit `i`.
    pub fn to_u64(&self) -> Option<u64> {
        match self.len {
            0 => Some(0),
            l if l <= WORD => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(WORD) {
            self.words.push(0);
        }
        self.len += 1;
        self.put(self.len - 1, bit);
    }

    pub fn get(&self, i: usize) -> Result<bool> {
        if i >= self.len {
            return Err(CodeError::IndexOutOfRange {
                index: i,
                len: self.len,
            });
        }
        Ok(self.bit(i))
    }

    pub fn set(&mut self, i: usize, value: bool) -> Result<()> {
        if i >= self.len {
            return Err(CodeError::IndexOutOfRange {
                index: i,
                len: self.len,
            });
        }
        self.put(i, value);
        Ok(())
    }

    /// Unchecked-in-release accessor for internal hot loops.
    #[inline]
    pub(crate) fn bit(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub(crate) fn put(&mut self, i: usize, value: bool) {
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub(crate) fn flip(&mut self, i: usize) {
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor(&self, other: &BitVector) -> Result<BitVector> {
        if self.len != other.len {
            return Err(CodeError::Dimension(format!(
                "xor of vectors of length {} and {}",
                self.len, other.len
            )));
        }
        let mut out = self.clone();
        out ^= other;
        Ok(out)
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVector) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.bit(i))
    }

    /// Positions of the set coordinates, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.bit(i)).collect()
    }

    /// Coordinates `range` as a new vector.
    pub fn slice(&self, start: usize, end: usize) -> Result<BitVector> {
        if start > end || end > self.len {
            return Err(CodeError::Dimension(format!(
                "slice {start}..{end} of vector of length {}",
                self.len
            )));
        }
        Ok(BitVector::from_bools((start..end).map(|i| self.bit(i))))
    }

    pub fn concat(&self, other: &BitVector) -> BitVector {
        BitVector::from_bools(self.iter().chain(other.iter()))
    }
}

impl BitXorAssign<&BitVector> for BitVector {
    fn bitxor_assign(&mut self, rhs: &BitVector) {
        assert_eq!(self.len, rhs.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
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
    type Err = CodeError;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(CodeError::Input(format!(
                    "invalid bit {other:?} at position {i}"
                ))),
            })
            .collect::<Result<Vec<bool>>>()
            .map(BitVector::from_bools)
    }
}

/// A dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].put(i, true);
        }
        m
    }

    /// All-ones matrix.
    pub fn ones(rows: usize, cols: usize) -> Self {
        let row = BitVector::from_bools(std::iter::repeat_n(true, cols));
        Self {
            rows,
            cols,
            data: vec![row; rows],
        }
    }

    /// Builds a matrix from its rows. `cols` fixes the width when there are
    /// no rows.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(CodeError::Dimension(format!(
                "row of length {} in matrix with {cols} columns",
                bad.len()
            )));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    /// Builds a matrix from 0/1 strings, one per row.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.parse::<BitVector>())
            .collect::<Result<Vec<_>>>()?;
        let cols = parsed.first().map_or(0, BitVector::len);
        Self::from_rows(cols, parsed)
    }

    pub fn from_columns(rows: usize, columns: &[BitVector]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(CodeError::Dimension(format!(
                    "column of length {} in matrix with {rows} rows",
                    c.len()
                )));
            }
            for i in c.support() {
                m.data[i].put(j, true);
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

    pub fn row(&self, i: usize) -> &BitVector {
        &self.data[i]
    }

    pub fn row_vectors(&self) -> &[BitVector] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Result<bool> {
        if r >= self.rows {
            return Err(CodeError::IndexOutOfRange {
                index: r,
                len: self.rows,
            });
        }
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) -> Result<()> {
        if r >= self.rows {
            return Err(CodeError::IndexOutOfRange {
                index: r,
                len: self.rows,
            });
        }
        self.data[r].set(c, value)
    }

    #[inline]
    pub(crate) fn bit(&self, r: usize, c: usize) -> bool {
        self.data[r].bit(c)
    }

    pub fn column(&self, c: usize) -> BitVector {
        BitVector::from_bools((0..self.rows).map(|r| self.bit(r, c)))
    }

    pub fn columns(&self) -> Vec<BitVector> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for c in row.support() {
                t.data[c].put(r, true);
            }
        }
        t
    }

    pub fn mul(&self, rhs: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != rhs.rows {
            return Err(CodeError::Dimension(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let rows = self.data.iter().map(|row| rhs.combine_rows(row)).collect();
        Ok(BitMatrix {
            rows: self.rows,
            cols: rhs.cols,
            data: rows,
        })
    }

    /// Row vector times matrix: the XOR of the rows selected by `coeffs`.
    pub fn vec_mul(&self, coeffs: &BitVector) -> Result<BitVector> {
        if coeffs.len() != self.rows {
            return Err(CodeError::Dimension(format!(
                "vector of length {} times {}x{} matrix",
                coeffs.len(),
                self.rows,
                self.cols
            )));
        }
        Ok(self.combine_rows(coeffs))
    }

    fn combine_rows(&self, coeffs: &BitVector) -> BitVector {
        let mut acc = BitVector::zeros(self.cols);
        for i in coeffs.support() {
            acc ^= &self.data[i];
        }
        acc
    }

    /// Matrix times column vector, i.e. the syndrome `M v^T`.
    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.cols {
            return Err(CodeError::Dimension(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok(BitVector::from_bools(self.data.iter().map(|r| r.dot(v))))
    }

    pub fn add(&self, rhs: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(CodeError::Dimension(format!(
                "sum of {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a ^= b;
        }
        Ok(out)
    }

    /// Horizontal concatenation `(A | B | ...)`.
    pub fn hstack(blocks: &[&BitMatrix]) -> Result<BitMatrix> {
        let rows = blocks.first().map_or(0, |b| b.rows);
        if blocks.iter().any(|b| b.rows != rows) {
            return Err(CodeError::Dimension(
                "hstack of blocks with different row counts".into(),
            ));
        }
        let cols = blocks.iter().map(|b| b.cols).sum();
        let data = (0..rows)
            .map(|r| BitVector::from_bools(blocks.iter().flat_map(|b| b.data[r].iter())))
            .collect();
        Ok(BitMatrix { rows, cols, data })
    }

    /// Vertical concatenation.
    pub fn vstack(blocks: &[&BitMatrix]) -> Result<BitMatrix> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        if blocks.iter().any(|b| b.cols != cols) {
            return Err(CodeError::Dimension(
                "vstack of blocks with different column counts".into(),
            ));
        }
        let data: Vec<BitVector> = blocks.iter().flat_map(|b| b.data.iter().cloned()).collect();
        Ok(BitMatrix {
            rows: data.len(),
            cols,
            data,
        })
    }

    /// Submatrix of the given columns, in the given order.
    pub fn select_columns(&self, indices: &[usize]) -> Result<BitMatrix> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.cols) {
            return Err(CodeError::IndexOutOfRange {
                index: bad,
                len: self.cols,
            });
        }
        let data = self
            .data
            .iter()
            .map(|row| BitVector::from_bools(indices.iter().map(|&c| row.bit(c))))
            .collect();
        Ok(BitMatrix {
            rows: self.rows,
            cols: indices.len(),
            data,
        })
    }

    pub fn column_range(&self, start: usize, end: usize) -> Result<BitMatrix> {
        self.select_columns(&(start..end).collect::<Vec<_>>())
    }

    pub fn row_range(&self, start: usize, end: usize) -> Result<BitMatrix> {
        if start > end || end > self.rows {
            return Err(CodeError::Dimension(format!(
                "rows {start}..{end} of a matrix with {} rows",
                self.rows
            )));
        }
        Ok(BitMatrix {
            rows: end - start,
            cols: self.cols,
            data: self.data[start..end].to_vec(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVector::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self
                .data
                .iter()
                .enumerate()
                .all(|(i, r)| r.weight() == 1 && r.bit(i))
    }

    /// Reduced row echelon form. Pivots are taken at the lowest available
    /// column index; zero rows are dropped from the bottom but kept in the
    /// returned matrix so its shape is unchanged.
    pub fn row_reduce(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| m.bit(i, c)) else {
                continue;
            };
            m.data.swap(r, p);
            let pivot = m.data[r].clone();
            for i in 0..self.rows {
                if i != r && m.bit(i, c) {
                    m.data[i] ^= &pivot;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Dimension of the row space, by forward elimination.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<BitVector> = self.data.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&i| rows[i].bit(c)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for row in rows.iter_mut().skip(rank + 1) {
                if row.bit(c) {
                    *row ^= &pivot;
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    /// True if `v` lies in the row space.
    pub fn spans(&self, v: &BitVector) -> bool {
        let mut ext = self.data.clone();
        ext.push(v.clone());
        let with = BitMatrix {
            rows: self.rows + 1,
            cols: self.cols,
            data: ext,
        };
        with.rank() == self.rank()
    }

    /// True if both matrices have the same row space.
    pub fn same_row_space(&self, other: &BitMatrix) -> bool {
        self.cols == other.cols
            && other.data.iter().all(|r| self.spans(r))
            && self.data.iter().all(|r| other.spans(r))
    }

    /// True iff the selected columns are linearly independent.
    pub fn columns_independent(&self, indices: &[usize]) -> Result<bool> {
        check_indices(indices, self.cols)?;
        Ok(self.select_columns(indices)?.rank() == indices.len())
    }

    /// Smallest set of at most `limit` columns that sums to zero, searched by
    /// increasing size and colexicographic order within a size. The returned
    /// set is a minimal dependent set.
    pub fn find_dependent_columns(&self, limit: usize) -> Option<Vec<usize>> {
        let packed = PackedColumns::new(self);
        packed.first_zero_sum(limit.min(self.cols))
    }

    /// Smallest `w <= limit` such that some `w` columns are dependent.
    /// `None` means every set of at most `limit` columns is independent.
    pub fn min_dependent_columns(&self, limit: usize) -> Option<usize> {
        self.find_dependent_columns(limit).map(|w| w.len())
    }

    /// Systematic form `(I | Q)` reached by row operations and column
    /// interchanges. Returns the matrix and the column order used:
    /// `perm[new] = old`.
    pub fn systematic_form(&self) -> Result<(BitMatrix, Vec<usize>)> {
        let (reduced, pivots) = self.row_reduce();
        if pivots.len() < self.rows {
            return Err(CodeError::RankDeficient {
                rank: pivots.len(),
                rows: self.rows,
            });
        }
        let mut perm = pivots.clone();
        perm.extend((0..self.cols).filter(|c| !pivots.contains(c)));
        Ok((reduced.select_columns(&perm)?, perm))
    }

    /// Gauss-Jordan on the given columns: the returned matrix has the same
    /// row space and its submatrix on `cols` (in that order) is the identity.
    pub fn reduce_on_columns(&self, cols: &[usize]) -> Result<BitMatrix> {
        if cols.len() != self.rows {
            return Err(CodeError::Dimension(format!(
                "{} pivot columns for {} rows",
                cols.len(),
                self.rows
            )));
        }
        check_indices(cols, self.cols)?;
        let mut m = self.clone();
        for (i, &c) in cols.iter().enumerate() {
            let Some(p) = (i..self.rows).find(|&r| m.bit(r, c)) else {
                return Err(CodeError::RankDeficient {
                    rank: i,
                    rows: self.rows,
                });
            };
            m.data.swap(i, p);
            let pivot = m.data[i].clone();
            for r in 0..self.rows {
                if r != i && m.bit(r, c) {
                    m.data[r] ^= &pivot;
                }
            }
        }
        Ok(m)
    }

    /// Reads a matrix in the text format: a `"<rows> <cols>"` line followed
    /// by `rows` lines of exactly `cols` characters from `{0,1}`.
    pub fn read_text<'a, I>(lines: &mut I) -> Result<BitMatrix>
    where
        I: Iterator<Item = (usize, &'a str)>,
    {
        let (ln, header) = lines.next().ok_or(CodeError::Parse {
            line: 0,
            msg: "missing matrix header".into(),
        })?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        let parse_dim = |s: &str| {
            s.parse::<usize>().map_err(|_| CodeError::Parse {
                line: ln,
                msg: format!("bad dimension {s:?}"),
            })
        };
        if dims.len() != 2 {
            return Err(CodeError::Parse {
                line: ln,
                msg: format!("expected \"<rows> <cols>\", got {header:?}"),
            });
        }
        let (rows, cols) = (parse_dim(dims[0])?, parse_dim(dims[1])?);
        let mut data = Vec::with_capacity(rows);
        for _ in 0..rows {
            let (ln, text) = lines.next().ok_or(CodeError::Parse {
                line: ln,
                msg: format!("expected {rows} matrix rows"),
            })?;
            if text.len() != cols {
                return Err(CodeError::Parse {
                    line: ln,
                    msg: format!("row has {} characters, expected {cols}", text.len()),
                });
            }
            data.push(text.parse::<BitVector>().map_err(|e| CodeError::Parse {
                line: ln,
                msg: e.to_string(),
            })?);
        }
        BitMatrix::from_rows(cols, data)
    }

    pub fn parse_text(text: &str) -> Result<BitMatrix> {
        let mut lines = numbered_lines(text);
        let m = Self::read_text(&mut lines)?;
        if let Some((ln, _)) = lines.next() {
            return Err(CodeError::Parse {
                line: ln,
                msg: "trailing content after matrix".into(),
            });
        }
        Ok(m)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

/// Lines of `text`, 1-based numbered, with trailing whitespace removed and
/// blank trailing lines skipped.
pub(crate) fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let last = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .last()
        .map_or(0, |(p, _)| p + 1);
    text.lines()
        .take(last)
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for r in &self.data {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for (i, r) in self.data.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str("]")
    }
}

pub(crate) fn check_indices(indices: &[usize], len: usize) -> Result<()> {
    let mut seen = vec![false; len];
    for &i in indices {
        if i >= len {
            return Err(CodeError::IndexOutOfRange { index: i, len });
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(CodeError::DuplicateIndex(i));
        }
    }
    Ok(())
}

/// Columns packed into contiguous words, for subset sweeps.
pub(crate) struct PackedColumns {
    words: usize,
    cols: usize,
    data: Vec<u64>,
}

impl PackedColumns {
    pub(crate) fn new(m: &BitMatrix) -> Self {
        let words = words_for(m.rows()).max(1);
        let mut data = vec![0u64; words * m.cols()];
        for (r, row) in m.row_vectors().iter().enumerate() {
            for c in row.support() {
                data[c * words + r / WORD] |= 1u64 << (r % WORD);
            }
        }
        Self {
            words,
            cols: m.cols(),
            data,
        }
    }

    pub(crate) fn column(&self, c: usize) -> &[u64] {
        &self.data[c * self.words..(c + 1) * self.words]
    }

    fn first_zero_sum(&self, limit: usize) -> Option<Vec<usize>> {
        let mut chosen = Vec::with_capacity(limit);
        let mut acc = vec![0u64; self.words * (limit + 1)];
        (1..=limit).find_map(|size| {
            chosen.clear();
            acc[..self.words].fill(0);
            if self.colex_search(size, self.cols, &mut chosen, &mut acc) {
                chosen.reverse();
                Some(chosen.clone())
            } else {
                None
            }
        })
    }

    /// Picks `remaining` more columns below `bound`, largest first, so that
    /// subsets are visited in colexicographic order.
    fn colex_search(
        &self,
        remaining: usize,
        bound: usize,
        chosen: &mut Vec<usize>,
        acc: &mut [u64],
    ) -> bool {
        let depth = chosen.len();
        let w = self.words;
        if remaining == 0 {
            return acc[depth * w..(depth + 1) * w].iter().all(|&x| x == 0);
        }
        for c in (remaining - 1)..bound {
            let (head, tail) = acc.split_at_mut((depth + 1) * w);
            let cur = &head[depth * w..];
            let next = &mut tail[..w];
            for ((n, a), b) in next.iter_mut().zip(cur).zip(self.column(c)) {
                *n = a ^ b;
            }
            chosen.push(c);
            if self.colex_search(remaining - 1, c, chosen, acc) {
                return true;
            }
            chosen.pop();
        }
        false
    }
}

/// Degree of a coefficient vector (`None` for the zero polynomial).
pub fn poly_degree(p: &BitVector) -> Option<usize> {
    (0..p.len()).rev().find(|&i| p.bit(i))
}

/// Remainder of `x^n + 1` modulo `g` over GF(2).
fn xn_plus_one_rem(g: &BitVector, n: usize) -> Result<Vec<bool>> {
    let deg = poly_degree(g).ok_or_else(|| CodeError::Input("zero generator polynomial".into()))?;
    let mut r = vec![false; n.max(deg) + 1];
    r[0] = true;
    r[n] ^= true;
    for i in (deg..r.len()).rev() {
        if r[i] {
            for j in 0..=deg {
                if g.bit(j) {
                    r[i - deg + j] ^= true;
                }
            }
        }
    }
    r.truncate(deg);
    Ok(r)
}

/// True if `g` divides `x^n - 1` over GF(2).
pub fn poly_divides_xn_minus_1(g: &BitVector, n: usize) -> Result<bool> {
    Ok(xn_plus_one_rem(g, n)?.iter().all(|&b| !b))
}

/// Generator matrix of the length-`n` cyclic code generated by `genpoly`
/// (coordinate `i` of `genpoly` is the coefficient of `x^i`). Row `r` holds
/// the coefficients shifted right by `r`.
pub fn cyclic_code_matrix(genpoly: &BitVector, n: usize) -> Result<BitMatrix> {
    let deg =
        poly_degree(genpoly).ok_or_else(|| CodeError::Input("zero generator polynomial".into()))?;
    if deg > n {
        return Err(CodeError::Input(format!(
            "generator of degree {deg} longer than code length {n}"
        )));
    }
    if !poly_divides_xn_minus_1(genpoly, n)? {
        return Err(CodeError::Input(format!(
            "generator polynomial {genpoly} does not divide x^{n} - 1"
        )));
    }
    let k = n - deg;
    let mut m = BitMatrix::zeros(k, n);
    for r in 0..k {
        for i in 0..=deg {
            if genpoly.bit(i) {
                m.data[r].put(r + i, true);
            }
        }
    }
    Ok(m)
}

/// Coefficient vector from a list of exponents, e.g. `&[8, 5, 4, 3, 0]`.
pub fn poly_from_exponents(exponents: &[usize]) -> BitVector {
    let len = exponents.iter().max().map_or(0, |&d| d + 1);
    let mut p = BitVector::zeros(len);
    for &e in exponents {
        p.flip(e);
    }
    p
}
