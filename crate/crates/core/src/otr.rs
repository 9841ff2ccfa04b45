//! Codes that mask `j` data bits with `s` random bits and add `r` check bits,
//! so that probing any `q` wires reveals nothing and forcing any `f` wires
//! is always detected.
//!
//! With component blocks `Q` (`s x j`), `S` (`j x r`) and `R` (`s x r`):
//!
//! ```text
//!     G = ( I_j | O   | S )      P = ( Q | I_s | R )
//!         ( Q   | I_s | R )
//!
//!     H = ( S^T | R^T + S^T Q^T | I_r )
//! ```
//!
//! The code resists probing of order `q` iff any `q` columns of `P` are
//! independent, and detects forcing of order `f` iff any `f` columns of `H`
//! are independent.

use itertools::Itertools;
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::codebook::{binomial, family_data_columns, gv_holds, min_rows_for};
use crate::error::{CodeError, Result};
use crate::gf2::{numbered_lines, BitMatrix, BitVector};
use crate::masker::parse_header;

/// Most error vectors [`forcing_sweep`] will enumerate.
pub const SWEEP_LIMIT: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OtrCode {
    n: usize,
    k: usize,
    j: usize,
    s: usize,
    r: usize,
    f_claimed: usize,
    q_claimed: usize,
    q_block: BitMatrix,
    s_block: BitMatrix,
    r_block: BitMatrix,
    generator: BitMatrix,
    parity_check: BitMatrix,
    probing: BitMatrix,
}

impl OtrCode {
    /// Builds `G`, `P` and `H` from the components without checking either
    /// security condition.
    pub fn assemble(
        q_block: BitMatrix,
        s_block: BitMatrix,
        r_block: BitMatrix,
        f: usize,
        q: usize,
    ) -> Result<Self> {
        let (s, j) = (q_block.rows(), q_block.cols());
        let r = s_block.cols();
        if s_block.rows() != j || r_block.rows() != s || r_block.cols() != r {
            return Err(CodeError::Input(format!(
                "component shapes Q {}x{}, S {}x{}, R {}x{} do not fit Q s x j, S j x r, R s x r",
                q_block.rows(),
                q_block.cols(),
                s_block.rows(),
                s_block.cols(),
                r_block.rows(),
                r_block.cols()
            )));
        }
        let (k, n) = (j + s, j + s + r);
        let top = BitMatrix::hstack(&[&BitMatrix::identity(j), &BitMatrix::zeros(j, s), &s_block])?;
        let probing = BitMatrix::hstack(&[&q_block, &BitMatrix::identity(s), &r_block])?;
        let generator = BitMatrix::vstack(&[&top, &probing])?;
        let st = s_block.transpose();
        let mid = r_block.transpose().add(&st.mul(&q_block.transpose())?)?;
        let parity_check = BitMatrix::hstack(&[&st, &mid, &BitMatrix::identity(r)])?;
        Ok(Self {
            n,
            k,
            j,
            s,
            r,
            f_claimed: f,
            q_claimed: q,
            q_block,
            s_block,
            r_block,
            generator,
            parity_check,
            probing,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn f_claimed(&self) -> usize {
        self.f_claimed
    }

    pub fn q_claimed(&self) -> usize {
        self.q_claimed
    }

    pub fn q_block(&self) -> &BitMatrix {
        &self.q_block
    }

    pub fn s_block(&self) -> &BitMatrix {
        &self.s_block
    }

    pub fn r_block(&self) -> &BitMatrix {
        &self.r_block
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.parity_check
    }

    pub fn probing(&self) -> &BitMatrix {
        &self.probing
    }

    /// A dependent set of at most `q` columns of `P`, if any.
    pub fn probing_witness(&self, q: usize) -> Option<Vec<usize>> {
        self.probing.find_dependent_columns(q)
    }

    /// A dependent set of at most `f` columns of `H`, if any.
    pub fn forcing_witness(&self, f: usize) -> Option<Vec<usize>> {
        self.parity_check.find_dependent_columns(f)
    }

    /// Checks both conditions at the given orders.
    pub fn verify(&self, f: usize, q: usize) -> Result<()> {
        if let Some(witness) = self.probing_witness(q) {
            return Err(CodeError::ProbingInsecure { order: q, witness });
        }
        if let Some(witness) = self.forcing_witness(f) {
            return Err(CodeError::ForcingInsecure { order: f, witness });
        }
        Ok(())
    }

    /// Splits a generator in the block layout back into its components.
    pub fn components_from_generator(
        generator: &BitMatrix,
        j: usize,
        r: usize,
    ) -> Result<(BitMatrix, BitMatrix, BitMatrix)> {
        let (k, n) = (generator.rows(), generator.cols());
        if j > k || k + r != n {
            return Err(CodeError::Input(format!(
                "a {k}x{n} generator cannot have j={j}, r={r}"
            )));
        }
        let top = generator.row_range(0, j)?;
        let bottom = generator.row_range(j, k)?;
        if !top.column_range(0, j)?.is_identity()
            || !top.column_range(j, k)?.is_zero()
            || !bottom.column_range(j, k)?.is_identity()
        {
            return Err(CodeError::Input(
                "generator is not in the (I O S / Q I R) block layout".into(),
            ));
        }
        Ok((
            bottom.column_range(0, j)?,
            top.column_range(k, n)?,
            bottom.column_range(k, n)?,
        ))
    }

    /// Code file: `OTR n k j f q` followed by `Q`, `S` and `R`.
    pub fn to_text(&self) -> String {
        format!(
            "OTR {} {} {} {} {}\n{}{}{}",
            self.n,
            self.k,
            self.j,
            self.f_claimed,
            self.q_claimed,
            self.q_block,
            self.s_block,
            self.r_block
        )
    }

    /// Reads a code file without checking the claimed orders.
    pub fn parse_text_unverified(text: &str) -> Result<Self> {
        let mut lines = numbered_lines(text);
        let (ln, header) = lines.next().ok_or(CodeError::Parse {
            line: 1,
            msg: "empty code file".into(),
        })?;
        let fields = parse_header(ln, header, "OTR", 5)?;
        let (n, k, j, f, q) = (fields[0], fields[1], fields[2], fields[3], fields[4]);
        let q_block = BitMatrix::read_text(&mut lines)?;
        let s_block = BitMatrix::read_text(&mut lines)?;
        let r_block = BitMatrix::read_text(&mut lines)?;
        if let Some((ln, _)) = lines.next() {
            return Err(CodeError::Parse {
                line: ln,
                msg: "trailing content after R".into(),
            });
        }
        let code =
            Self::assemble(q_block, s_block, r_block, f, q).map_err(|e| CodeError::Parse {
                line: ln,
                msg: e.to_string(),
            })?;
        if (code.n, code.k, code.j) != (n, k, j) {
            return Err(CodeError::Parse {
                line: ln,
                msg: format!(
                    "header says n={n} k={k} j={j} but blocks give n={} k={} j={}",
                    code.n, code.k, code.j
                ),
            });
        }
        Ok(code)
    }

    /// Reads a code file and re-verifies its claimed orders.
    pub fn parse_text(text: &str) -> Result<Self> {
        let code = Self::parse_text_unverified(text)?;
        code.verify(code.f_claimed, code.q_claimed)?;
        Ok(code)
    }
}

/// Assembles the code and checks both conditions: any `q` columns of `P`
/// and any `f` columns of `H` independent.
pub fn build_otr(
    q_block: BitMatrix,
    s_block: BitMatrix,
    r_block: BitMatrix,
    f: usize,
    q: usize,
) -> Result<OtrCode> {
    let code = OtrCode::assemble(q_block, s_block, r_block, f, q)?;
    code.verify(f, q)?;
    Ok(code)
}

/// `y = (x, m) G`.
pub fn encode_otr(code: &OtrCode, x: &BitVector, m: &BitVector) -> Result<BitVector> {
    if x.len() != code.j || m.len() != code.s {
        return Err(CodeError::Dimension(format!(
            "expected {} data bits and {} masks, got {} and {}",
            code.j,
            code.s,
            x.len(),
            m.len()
        )));
    }
    code.generator.vec_mul(&x.concat(m))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decoded {
    Message { x: BitVector, m: BitVector },
    TamperAlarm { syndrome: BitVector },
}

/// Syndrome check followed by unmasking. No correction is attempted.
pub fn check_and_decode(code: &OtrCode, y: &BitVector) -> Result<Decoded> {
    if y.len() != code.n {
        return Err(CodeError::Dimension(format!(
            "expected a word of length {}, got {}",
            code.n,
            y.len()
        )));
    }
    let syndrome = code.parity_check.mul_vec(y)?;
    if !syndrome.is_zero() {
        return Ok(Decoded::TamperAlarm { syndrome });
    }
    let m = y.slice(code.j, code.k)?;
    let mut x = y.slice(0, code.j)?;
    x ^= &code.q_block.vec_mul(&m)?;
    Ok(Decoded::Message { x, m })
}

/// One injected error and whether the syndrome caught it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForcingOutcome {
    pub error_vector: String,
    pub detected: bool,
}

pub fn forcing_outcome(code: &OtrCode, error: &BitVector) -> Result<ForcingOutcome> {
    Ok(ForcingOutcome {
        error_vector: error.to_string(),
        detected: !code.parity_check.mul_vec(error)?.is_zero(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForcingReport {
    pub all_detected: bool,
    pub miss_witness: Option<BitVector>,
    pub errors_checked: u64,
}

/// Injects every nonzero error of weight at most `f` into the code.
pub fn forcing_sweep(code: &OtrCode, f: usize) -> Result<ForcingReport> {
    detection_sweep(&code.parity_check, f)
}

/// Checks that the parity-check matrix `h` gives a nonzero syndrome for
/// every nonzero error of weight at most `f`. Each such error is the
/// indicator of its own support, so sweeping supports visits every error
/// exactly once.
pub fn detection_sweep(h: &BitMatrix, f: usize) -> Result<ForcingReport> {
    let n = h.cols();
    let total: BigUint = (1..=f.min(n)).map(|i| binomial(n, i)).sum();
    if total > BigUint::from(SWEEP_LIMIT) {
        return Err(CodeError::Capacity(format!(
            "{total} error vectors of weight <= {f} exceed the sweep limit of {SWEEP_LIMIT}"
        )));
    }
    let columns = h.columns();
    let mut checked = 0u64;
    for w in 1..=f.min(n) {
        for support in (0..n).combinations(w) {
            checked += 1;
            let mut syndrome = BitVector::zeros(h.rows());
            for &c in &support {
                syndrome ^= &columns[c];
            }
            if syndrome.is_zero() {
                let mut e = BitVector::zeros(n);
                for &c in &support {
                    e.put(c, true);
                }
                return Ok(ForcingReport {
                    all_detected: false,
                    miss_witness: Some(e),
                    errors_checked: checked,
                });
            }
        }
    }
    Ok(ForcingReport {
        all_detected: true,
        miss_witness: None,
        errors_checked: checked,
    })
}

/// Gilbert-Varshamov inequalities for `n = j + s + r`, `k = j + s`:
/// `(sum_{i<q} C(n-1,i) < 2^s, sum_{i<f} C(n-1,i) < 2^r)`.
pub fn gv_pair_check(j: usize, f: usize, q: usize, s: usize, r: usize) -> (bool, bool) {
    let n = j + s + r;
    (gv_holds(q, s, n), gv_holds(f, r, n))
}

/// Smallest `(s, r)` consistent with the table (or the Gilbert-Varshamov
/// fallback) at the length they imply.
pub fn initial_sizes(j: usize, f: usize, q: usize) -> (usize, usize) {
    let (mut s, mut r) = (q, f);
    loop {
        let n = j + s + r;
        let next = (min_rows_for(q, n).max(s), min_rows_for(f, n).max(r));
        if next == (s, r) {
            return (s, r);
        }
        (s, r) = next;
    }
}

/// Nodes one DFS attempt may visit before giving up on the candidate.
const NODE_CAP: usize = 20_000;
/// Mask counts up to this size try every value for each column of `Q`.
const FULL_ENUMERATION_ROWS: usize = 10;
/// Values tried per column of `Q` otherwise.
const SAMPLED_VALUES: usize = 256;

/// Randomized search for an OTR code with the given orders. The budget is
/// split in thirds: sizes `(s, r)`, then `(s + 1, r)`, then `(s + 1, r + 1)`.
/// Each iteration draws one parity-check candidate `(A | I_r)` (the first
/// of each phase from the deterministic family) and searches for a `Q`
/// that makes `P` satisfy the probing condition. Returned codes have been
/// through [`build_otr`].
pub fn search_otr(j: usize, f: usize, q: usize, budget: usize, rng_seed: u64) -> Option<OtrCode> {
    if j == 0 || f == 0 || q == 0 || budget == 0 {
        return None;
    }
    let (s0, r0) = initial_sizes(j, f, q);
    let phases = [(s0, r0), (s0 + 1, r0), (s0 + 1, r0 + 1)];
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut phase = usize::MAX;
    let mut pool: Option<Vec<BitVector>> = None;
    for it in 0..budget {
        let p = (it * 3 / budget).min(2);
        let (s, r) = phases[p];
        if s > 64 || r > 64 {
            return None;
        }
        let k = j + s;
        let fresh = p != phase;
        if fresh {
            phase = p;
            pool = family_data_columns(f, r).filter(|cols| cols.len() >= k);
        }
        let Some(a) = candidate_columns(f, r, k, fresh, pool.as_deref(), &mut rng) else {
            continue;
        };
        if let Some(code) = complete_candidate(j, s, r, f, q, &a, &mut rng) {
            return Some(code);
        }
    }
    None
}

/// Columns of `A` for `H = (A | I_r)`, or `None` if the draw does not
/// detect `f` errors.
fn candidate_columns(
    f: usize,
    r: usize,
    k: usize,
    deterministic: bool,
    pool: Option<&[BitVector]>,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<BitVector>> {
    let cols: Vec<BitVector> = match (pool, deterministic) {
        (_, true) if f == 1 => vec![BitVector::from_bools(std::iter::repeat_n(true, r)); k],
        (Some(pool), true) => pool[..k].to_vec(),
        (Some(pool), false) => pool.choose_multiple(rng, k).cloned().collect(),
        (None, _) => (0..k)
            .map(|_| loop {
                let v = BitVector::from_u64(rng.gen::<u64>(), r.min(64));
                if !v.is_zero() {
                    break v;
                }
            })
            .collect(),
    };
    let h = BitMatrix::hstack(&[
        &BitMatrix::from_columns(r, &cols).ok()?,
        &BitMatrix::identity(r),
    ])
    .ok()?;
    h.find_dependent_columns(f).is_none().then_some(cols)
}

/// Derives `S` and `R` from `A` and searches for `Q`.
fn complete_candidate(
    j: usize,
    s: usize,
    r: usize,
    f: usize,
    q: usize,
    a: &[BitVector],
    rng: &mut ChaCha8Rng,
) -> Option<OtrCode> {
    // H = (S^T | R^T + S^T Q^T | I_r) = (A | I_r), so S^T = A_0 and
    // R = A_1^T + Q S. Column c of R is then A_1^T[:, c] plus the sum of
    // Q's columns i with S[i][c] = 1.
    let s_block = BitMatrix::from_columns(r, &a[..j]).ok()?.transpose();
    let r_base = BitMatrix::from_columns(r, &a[j..]).ok()?.transpose();
    let r_base_cols: Vec<u64> = r_base
        .columns()
        .iter()
        .map(|c| c.to_u64().unwrap_or(0))
        .collect();
    let s_rows: Vec<BitVector> = s_block.row_vectors().to_vec();
    // R column c becomes known once Q's last contributing column is set.
    let mut ready: Vec<Vec<usize>> = vec![Vec::new(); j + 1];
    for c in 0..r {
        let last = (0..j).rev().find(|&i| s_rows[i].bit(c));
        ready[last.map_or(0, |i| i + 1)].push(c);
    }

    let mut search = QSearch {
        j,
        s,
        q,
        s_rows: &s_rows,
        r_base: &r_base_cols,
        ready: &ready,
        placed: (0..s).map(|i| 1u64 << i).collect(),
        q_cols: Vec::with_capacity(j),
        nodes: 0,
    };
    for &c in &ready[0] {
        let col = search.r_column(c);
        if !search.place(col) {
            return None;
        }
    }
    if !search.dfs(rng) {
        return None;
    }
    let q_cols: Vec<BitVector> = search
        .q_cols
        .iter()
        .map(|&v| BitVector::from_u64(v, s))
        .collect();
    let q_block = BitMatrix::from_columns(s, &q_cols).ok()?;
    let r_block = r_base.add(&q_block.mul(&s_block).ok()?).ok()?;
    build_otr(q_block, s_block, r_block, f, q).ok()
}

struct QSearch<'a> {
    j: usize,
    s: usize,
    q: usize,
    s_rows: &'a [BitVector],
    r_base: &'a [u64],
    ready: &'a [Vec<usize>],
    placed: Vec<u64>,
    q_cols: Vec<u64>,
    nodes: usize,
}

impl QSearch<'_> {
    fn r_column(&self, c: usize) -> u64 {
        self.q_cols
            .iter()
            .enumerate()
            .filter(|(i, _)| self.s_rows[*i].bit(c))
            .fold(self.r_base[c], |acc, (_, v)| acc ^ v)
    }

    /// True iff `v` is zero or the sum of at most `q - 1` placed columns.
    fn dependent(&self, v: u64) -> bool {
        fn rec(cols: &[u64], target: u64, left: usize) -> bool {
            if target == 0 {
                return true;
            }
            if left == 0 {
                return false;
            }
            cols.iter()
                .enumerate()
                .any(|(i, &c)| rec(&cols[i + 1..], target ^ c, left - 1))
        }
        rec(&self.placed, v, self.q.saturating_sub(1))
    }

    fn place(&mut self, v: u64) -> bool {
        if self.dependent(v) {
            return false;
        }
        self.placed.push(v);
        true
    }

    fn dfs(&mut self, rng: &mut ChaCha8Rng) -> bool {
        let i = self.q_cols.len();
        if i == self.j {
            return true;
        }
        let values: Vec<u64> = if self.s <= FULL_ENUMERATION_ROWS {
            let mut all: Vec<u64> = (1..1u64 << self.s).collect();
            all.shuffle(rng);
            all
        } else {
            let mask = if self.s == 64 {
                u64::MAX
            } else {
                (1u64 << self.s) - 1
            };
            (0..SAMPLED_VALUES)
                .map(|_| rng.gen::<u64>() & mask)
                .collect()
        };
        for v in values {
            self.nodes += 1;
            if self.nodes > NODE_CAP {
                return false;
            }
            let mark = self.placed.len();
            if !self.place(v) {
                continue;
            }
            self.q_cols.push(v);
            let ok = self.ready[i + 1].iter().all(|&c| {
                let col = self.r_column(c);
                self.place(col)
            });
            if ok && self.dfs(rng) {
                return true;
            }
            self.q_cols.pop();
            self.placed.truncate(mark);
        }
        false
    }
}
