//! Named code families, the table of maximum OPS code lengths, and the
//! Gilbert-Varshamov existence test.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{CodeError, Result};
use crate::gf2::{cyclic_code_matrix, poly_from_exponents, BitMatrix, BitVector};

/// Generator polynomial of the [17,9,5] quadratic residue code.
pub const QR17_GENERATOR: [usize; 5] = [8, 5, 4, 3, 0];

/// Generator polynomial of the [23,12,7] Golay code.
pub const GOLAY23_GENERATOR: [usize; 7] = [11, 10, 6, 5, 4, 2, 0];

/// Largest mask count / order covered by the table.
pub const TABLE_MAX: usize = 12;

/// A code family together with the parameters that pin down one member.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeFamily {
    /// One mask per data bit, `P = (I_k | I_k)`.
    Vernam { k: usize },
    /// One mask for `k` data bits, `P = (1_k | 1)`.
    SingleParity { k: usize },
    /// One data bit spread over `q + 1` shares, `P = (1_q^T | I_q)`.
    Repetition { q: usize },
    /// (Shortened) Hamming parity check with `s` rows and `n` columns.
    Hamming { s: usize, n: usize },
    /// (Shortened) Hsiao parity check with `s` rows and `n` columns.
    Hsiao { s: usize, n: usize },
    /// [17,9,5] quadratic residue code.
    Qr17,
    /// [23,12,7] Golay code.
    Golay23,
    /// [24,12,8] extended Golay code.
    Golay24,
}

impl CodeFamily {
    pub fn name(&self) -> &'static str {
        match self {
            CodeFamily::Vernam { .. } => "vernam",
            CodeFamily::SingleParity { .. } => "single_parity",
            CodeFamily::Repetition { .. } => "repetition",
            CodeFamily::Hamming { .. } => "hamming",
            CodeFamily::Hsiao { .. } => "hsiao",
            CodeFamily::Qr17 => "qr17",
            CodeFamily::Golay23 => "golay23",
            CodeFamily::Golay24 => "golay24",
        }
    }

    /// Probing order the family is built for.
    pub fn advertised_order(&self) -> usize {
        match *self {
            CodeFamily::Vernam { .. } | CodeFamily::SingleParity { .. } => 1,
            CodeFamily::Repetition { q } => q,
            CodeFamily::Hamming { .. } => 2,
            CodeFamily::Hsiao { .. } => 3,
            CodeFamily::Qr17 => 4,
            CodeFamily::Golay23 => 6,
            CodeFamily::Golay24 => 7,
        }
    }
}

impl fmt::Display for CodeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CodeFamily::Vernam { k } | CodeFamily::SingleParity { k } => {
                write!(f, "{}(k={k})", self.name())
            }
            CodeFamily::Repetition { q } => write!(f, "repetition(q={q})"),
            CodeFamily::Hamming { s, n } | CodeFamily::Hsiao { s, n } => {
                write!(f, "{}(s={s},n={n})", self.name())
            }
            _ => f.write_str(self.name()),
        }
    }
}

/// Canonical probing matrix `(Q | I_s)` of a family member.
pub fn make_probing_matrix(family: CodeFamily) -> Result<BitMatrix> {
    match family {
        CodeFamily::Vernam { k } => {
            require(k >= 1, "vernam needs k >= 1")?;
            let i = BitMatrix::identity(k);
            BitMatrix::hstack(&[&i, &i])
        }
        CodeFamily::SingleParity { k } => {
            require(k >= 1, "single_parity needs k >= 1")?;
            Ok(BitMatrix::ones(1, k + 1))
        }
        CodeFamily::Repetition { q } => {
            require(q >= 1, "repetition needs q >= 1")?;
            BitMatrix::hstack(&[&BitMatrix::ones(q, 1), &BitMatrix::identity(q)])
        }
        CodeFamily::Hamming { s, n } => {
            require((2..=16).contains(&s), "hamming needs 2 <= s <= 16")?;
            let max = (1usize << s) - 1;
            if n > max || n <= s {
                return Err(CodeError::Infeasible(format!(
                    "hamming with s={s} needs {} <= n <= {max} \
                     (maximum OPS length for s={s}, q=2 is 2^s-1 = {max})",
                    s + 1
                )));
            }
            probing_from_data_columns(s, data_columns(s, n - s, |w| w >= 2))
        }
        CodeFamily::Hsiao { s, n } => {
            require((3..=16).contains(&s), "hsiao needs 3 <= s <= 16")?;
            let max = 1usize << (s - 1);
            if n > max || n <= s {
                return Err(CodeError::Infeasible(format!(
                    "hsiao with s={s} needs {} <= n <= {max} \
                     (maximum OPS length for s={s}, q=3 is 2^(s-1) = {max})",
                    s + 1
                )));
            }
            probing_from_data_columns(s, data_columns(s, n - s, |w| w >= 3 && w % 2 == 1))
        }
        CodeFamily::Qr17 => {
            let gen = cyclic_code_matrix(&poly_from_exponents(&QR17_GENERATOR), 17)?;
            probing_from_generator(&gen)
        }
        CodeFamily::Golay23 => {
            let gen = cyclic_code_matrix(&poly_from_exponents(&GOLAY23_GENERATOR), 23)?;
            probing_from_generator(&gen)
        }
        CodeFamily::Golay24 => {
            let gen = cyclic_code_matrix(&poly_from_exponents(&GOLAY23_GENERATOR), 23)?;
            let parity: Vec<bool> = gen
                .row_vectors()
                .iter()
                .map(|r| r.weight() % 2 == 1)
                .collect();
            let extended = BitMatrix::hstack(&[
                &gen,
                &BitMatrix::from_columns(gen.rows(), &[BitVector::from_bools(parity)])?,
            ])?;
            probing_from_generator(&extended)
        }
    }
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(CodeError::Input(msg.into()))
    }
}

/// The first `count` length-`s` columns whose weight passes `keep`, by
/// ascending weight and then lexicographic order of their support.
fn data_columns(s: usize, count: usize, keep: impl Fn(usize) -> bool) -> Vec<BitVector> {
    (1..=s)
        .filter(|&w| keep(w))
        .flat_map(|w| (0..s).combinations(w))
        .take(count)
        .map(|support| {
            let mut c = BitVector::zeros(s);
            for i in support {
                c.put(i, true);
            }
            c
        })
        .collect()
}

fn probing_from_data_columns(s: usize, columns: Vec<BitVector>) -> Result<BitMatrix> {
    let q = BitMatrix::from_columns(s, &columns)?;
    BitMatrix::hstack(&[&q, &BitMatrix::identity(s)])
}

/// Probing matrix `(A^T | I)` of the code whose generator has systematic
/// form `(I | A)`, i.e. the systematic parity-check matrix.
pub fn probing_from_generator(generator: &BitMatrix) -> Result<BitMatrix> {
    let (sys, _perm) = generator.systematic_form()?;
    let k = generator.rows();
    let a = sys.column_range(k, sys.cols())?;
    BitMatrix::hstack(&[&a.transpose(), &BitMatrix::identity(sys.cols() - k)])
}

/// Parity-check matrix `(A | I_r)` with `n` columns in which any `f` columns
/// are independent, from the deterministic families: all-ones data columns
/// for `f = 1`, shortened Hamming for `f = 2`, shortened Hsiao for `f = 3`.
/// `None` when no family covers the parameters.
pub fn detecting_parity_check(f: usize, r: usize, n: usize) -> Option<BitMatrix> {
    if n <= r {
        return None;
    }
    match f {
        1 => BitMatrix::hstack(&[&BitMatrix::ones(r, n - r), &BitMatrix::identity(r)]).ok(),
        2 if r >= 2 => make_probing_matrix(CodeFamily::Hamming { s: r, n }).ok(),
        3 if r >= 3 => make_probing_matrix(CodeFamily::Hsiao { s: r, n }).ok(),
        _ => None,
    }
}

/// All data columns a family could use (`f = 1`: none listed, any nonzero
/// column works; `f = 2`: weight >= 2; `f = 3`: odd weight >= 3).
pub(crate) fn family_data_columns(f: usize, r: usize) -> Option<Vec<BitVector>> {
    match f {
        2 if (2..=16).contains(&r) => Some(data_columns(r, usize::MAX, |w| w >= 2)),
        3 if (3..=16).contains(&r) => Some(data_columns(r, usize::MAX, |w| w >= 3 && w % 2 == 1)),
        _ => None,
    }
}

/// Value of one populated table cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TableValue {
    Unbounded,
    Exact(usize),
    /// Only bounds on the maximum length are known.
    Range(usize, usize),
}

impl fmt::Display for TableValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableValue::Unbounded => f.write_str("inf"),
            TableValue::Exact(n) => write!(f, "{n}"),
            TableValue::Range(lo, hi) => write!(f, "{lo}-{hi}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    pub s: usize,
    pub q: usize,
    pub value: TableValue,
}

impl TableEntry {
    /// Whether a code of length `n` certainly exists for this cell.
    pub fn admits(&self, n: usize) -> Admits {
        match self.value {
            TableValue::Unbounded => Admits::Yes,
            TableValue::Exact(max) => {
                if n <= max {
                    Admits::Yes
                } else {
                    Admits::No
                }
            }
            TableValue::Range(lo, hi) => {
                if n <= lo {
                    Admits::Yes
                } else if n > hi {
                    Admits::No
                } else {
                    Admits::Unknown
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Admits {
    Yes,
    No,
    Unknown,
}

use TableValue::{Exact as E, Range as R, Unbounded as U};

/// Maximum lengths n of OPS(n,k;q) codes, row `s-1`, column `q-1`.
static MAX_LENGTHS: [&[TableValue]; TABLE_MAX] = [
    &[U],
    &[U, E(3)],
    &[U, E(7), E(4)],
    &[U, E(15), E(8), E(5)],
    &[U, E(31), E(16), E(6), E(6)],
    &[U, E(63), E(32), E(8), E(7), E(7)],
    &[U, E(127), E(64), E(11), E(9), E(8), E(8)],
    &[U, E(255), E(128), E(17), E(12), E(9), E(9), E(9)],
    &[U, E(511), E(256), E(23), E(18), E(11), E(10), E(10), E(10)],
    &[
        U,
        E(1023),
        E(512),
        R(34, 37),
        E(24),
        E(15),
        E(12),
        E(11),
        E(11),
        E(11),
    ],
    &[
        U,
        E(2047),
        E(1024),
        R(48, 60),
        R(35, 37),
        E(23),
        E(16),
        E(12),
        E(12),
        E(12),
        E(12),
    ],
    &[
        U,
        E(4095),
        E(2048),
        R(66, 88),
        R(49, 61),
        E(24),
        E(24),
        E(14),
        E(13),
        E(13),
        E(13),
        E(13),
    ],
];

/// Looks up the maximum OPS length for `s` masks at probing order `q`.
pub fn table_lookup(s: usize, q: usize) -> Result<TableEntry> {
    MAX_LENGTHS
        .get(s.wrapping_sub(1))
        .and_then(|row| row.get(q.wrapping_sub(1)))
        .map(|&value| TableEntry { s, q, value })
        .ok_or_else(|| CodeError::NotAvailable(format!("no table entry for s={s}, q={q}")))
}

/// Every populated cell, row by row.
pub fn table_entries() -> impl Iterator<Item = TableEntry> {
    MAX_LENGTHS.iter().enumerate().flat_map(|(si, row)| {
        row.iter().enumerate().map(move |(qi, &value)| TableEntry {
            s: si + 1,
            q: qi + 1,
            value,
        })
    })
}

/// The table as CSV: header `s,1,...,12`, one row per `s`, empty cells for
/// unpopulated entries.
pub fn table_csv() -> String {
    let mut out = String::from("s");
    for q in 1..=TABLE_MAX {
        out.push_str(&format!(",{q}"));
    }
    out.push('\n');
    for (si, row) in MAX_LENGTHS.iter().enumerate() {
        out.push_str(&(si + 1).to_string());
        for q in 0..TABLE_MAX {
            out.push(',');
            if let Some(v) = row.get(q) {
                out.push_str(&v.to_string());
            }
        }
        out.push('\n');
    }
    out
}

pub(crate) fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1))
}

/// Left-hand side of the Gilbert-Varshamov inequality,
/// `sum_{i=0}^{l-1} C(n-1, i)`.
pub fn gv_sum(l: usize, n: usize) -> BigUint {
    (0..l).map(|i| binomial(n.saturating_sub(1), i)).sum()
}

/// `sum_{i<l} C(n-1,i) < 2^m`, evaluated without preconditions.
pub(crate) fn gv_holds(l: usize, m: usize, n: usize) -> bool {
    gv_sum(l, n) < (BigUint::from(1u32) << m)
}

/// Gilbert-Varshamov: an `m x n` matrix with any `l` columns independent
/// exists if `sum_{i=0}^{l-1} C(n-1, i) < 2^m`.
pub fn gilbert_varshamov_feasible(l: usize, m: usize, n: usize) -> Result<bool> {
    if !(l <= m && m <= n) {
        return Err(CodeError::Input(format!(
            "Gilbert-Varshamov test needs l <= m <= n, got l={l}, m={m}, n={n}"
        )));
    }
    Ok(gv_holds(l, m, n))
}

/// Minimum number of masks, either pinned down or bracketed by cells whose
/// maximum length is only known within bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MaskRequirement {
    Exact(usize),
    Range(usize, usize),
}

impl fmt::Display for MaskRequirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaskRequirement::Exact(s) => write!(f, "{s}"),
            MaskRequirement::Range(lo, hi) => write!(f, "{lo}-{hi}"),
        }
    }
}

/// Smallest number of masks `s` such that an OPS(k+s, k; q) code exists
/// according to the table.
pub fn ops_mask_requirement(k: usize, q: usize) -> Result<MaskRequirement> {
    if k == 0 || q == 0 {
        return Err(CodeError::Input("k and q must be at least 1".into()));
    }
    if q == 1 {
        return Ok(MaskRequirement::Exact(1));
    }
    let mut first_unknown = None;
    for s in q..=TABLE_MAX {
        match table_lookup(s, q)?.admits(k + s) {
            Admits::Yes => {
                return Ok(match first_unknown {
                    Some(lo) => MaskRequirement::Range(lo, s),
                    None => MaskRequirement::Exact(s),
                })
            }
            Admits::Unknown => {
                first_unknown.get_or_insert(s);
            }
            Admits::No => {}
        }
    }
    Err(CodeError::NotAvailable(format!(
        "mask requirement for k={k}, q={q} lies beyond the table (s > {TABLE_MAX})"
    )))
}

/// Fewest rows `m` for an `m x n` matrix with any `order` columns
/// independent: the table when it certifies existence, otherwise the
/// Gilbert-Varshamov bound.
pub fn min_rows_for(order: usize, n: usize) -> usize {
    if order == 0 {
        return 0;
    }
    for m in order..=TABLE_MAX {
        if let Ok(e) = table_lookup(m, order) {
            if e.admits(n) == Admits::Yes {
                return m;
            }
        }
    }
    let start = if order <= TABLE_MAX {
        TABLE_MAX + 1
    } else {
        order
    };
    (start..)
        .find(|&m| gv_holds(order, m, n))
        .expect("2^m eventually exceeds the Gilbert-Varshamov sum")
}
