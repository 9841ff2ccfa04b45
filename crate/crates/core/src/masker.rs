//! OPS masking schemes.
//!
//! A scheme with `k` data bits and `s` masks is given by its canonical
//! probing matrix `P = (Q | I_s)` (`s x n`, `n = k + s`). The generator is
//!
//! ```text
//!     G = ( I_k | O )
//!         (    P    )
//! ```
//!
//! and a message `x` with masks `m` is encoded as `y = (x, m) G`. The scheme
//! resists probing of any `q` wires iff any `q` columns of `P` are linearly
//! independent; [`is_probing_secure_oracle`] checks the same property from
//! first principles by enumerating every input.

use std::fmt;

use itertools::Itertools;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::codebook::{make_probing_matrix, CodeFamily};
use crate::error::{CodeError, Result};
use crate::gf2::{check_indices, numbered_lines, BitMatrix, BitVector};

/// Largest codeword length for which the `2^n` enumeration is allowed.
pub const ENUMERATION_LIMIT: usize = 24;

/// Sorted, distinct wire positions observed by the adversary.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct ProbeSet(Vec<usize>);

impl ProbeSet {
    pub fn new(mut indices: Vec<usize>, n: usize) -> Result<Self> {
        check_indices(&indices, n)?;
        indices.sort_unstable();
        Ok(Self(indices))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Every wire of a length-`n` codeword.
    pub fn all(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for ProbeSet {
    /// Dash-separated indices, empty for the empty set.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("-")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// A linear masking scheme in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpsScheme {
    n: usize,
    k: usize,
    s: usize,
    q_claimed: usize,
    probing: BitMatrix,
    generator: BitMatrix,
}

impl OpsScheme {
    /// Wraps a canonical probing matrix `(Q | I_s)`. The claimed order is
    /// recorded but never trusted by the verification routines.
    pub fn new(probing: BitMatrix, q_claimed: usize) -> Result<Self> {
        let (s, n) = (probing.rows(), probing.cols());
        if s > n {
            return Err(CodeError::Dimension(format!(
                "probing matrix with {s} rows and only {n} columns"
            )));
        }
        let k = n - s;
        if !probing.column_range(k, n)?.is_identity() {
            return Err(CodeError::Input(
                "probing matrix is not canonical: rightmost block must be the identity".into(),
            ));
        }
        let top = BitMatrix::hstack(&[&BitMatrix::identity(k), &BitMatrix::zeros(k, s)])?;
        let generator = BitMatrix::vstack(&[&top, &probing])?;
        Ok(Self {
            n,
            k,
            s,
            q_claimed,
            probing,
            generator,
        })
    }

    pub fn from_family(family: CodeFamily) -> Result<Self> {
        Self::new(make_probing_matrix(family)?, family.advertised_order())
    }

    /// Identity encoding of `k` bits with no masks.
    pub fn unmasked(k: usize) -> Self {
        Self::new(BitMatrix::zeros(0, k), 0).expect("empty probing matrix is canonical")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn q_claimed(&self) -> usize {
        self.q_claimed
    }

    pub fn probing(&self) -> &BitMatrix {
        &self.probing
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    /// Largest `q` such that any `q` columns of the probing matrix are
    /// independent (recomputed, never taken from the claim).
    pub fn probing_order(&self) -> usize {
        if self.k == 0 {
            return self.n;
        }
        match self.probing.find_dependent_columns(self.s + 1) {
            Some(w) => w.len() - 1,
            None => self.s,
        }
    }

    /// `y = (x, m) G`.
    pub fn encode(&self, x: &BitVector, m: &BitVector) -> Result<BitVector> {
        if x.len() != self.k || m.len() != self.s {
            return Err(CodeError::Dimension(format!(
                "expected {} data bits and {} masks, got {} and {}",
                self.k,
                self.s,
                x.len(),
                m.len()
            )));
        }
        self.generator.vec_mul(&x.concat(m))
    }

    /// Inverse of [`encode`](Self::encode): the masks are the last `s`
    /// coordinates and the data is recovered by removing their contribution.
    pub fn decode(&self, y: &BitVector) -> Result<(BitVector, BitVector)> {
        if y.len() != self.n {
            return Err(CodeError::Dimension(format!(
                "expected a codeword of length {}, got {}",
                self.n,
                y.len()
            )));
        }
        let m = y.slice(self.k, self.n)?;
        let mut x = y.slice(0, self.k)?;
        let mix = self.probing.column_range(0, self.k)?.vec_mul(&m)?;
        x ^= &mix;
        Ok((x, m))
    }

    /// Scheme file: `OPS n k s q` followed by the probing matrix.
    pub fn to_text(&self) -> String {
        format!(
            "OPS {} {} {} {}\n{}",
            self.n, self.k, self.s, self.q_claimed, self.probing
        )
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = numbered_lines(text);
        let (ln, header) = lines.next().ok_or(CodeError::Parse {
            line: 1,
            msg: "empty scheme file".into(),
        })?;
        let fields = parse_header(ln, header, "OPS", 4)?;
        let (n, k, s, q) = (fields[0], fields[1], fields[2], fields[3]);
        let probing = BitMatrix::read_text(&mut lines)?;
        if let Some((ln, _)) = lines.next() {
            return Err(CodeError::Parse {
                line: ln,
                msg: "trailing content after probing matrix".into(),
            });
        }
        if k + s != n || probing.rows() != s || probing.cols() != n {
            return Err(CodeError::Parse {
                line: ln,
                msg: format!(
                    "header says n={n} k={k} s={s} but matrix is {}x{}",
                    probing.rows(),
                    probing.cols()
                ),
            });
        }
        Self::new(probing, q)
    }
}

/// Parses `<tag> a b c ...` with exactly `count` unsigned fields.
pub(crate) fn parse_header(
    line: usize,
    header: &str,
    tag: &str,
    count: usize,
) -> Result<Vec<usize>> {
    let mut parts = header.split_whitespace();
    if parts.next() != Some(tag) {
        return Err(CodeError::Parse {
            line,
            msg: format!("expected header starting with {tag:?}, got {header:?}"),
        });
    }
    let fields = parts
        .map(|p| {
            p.parse::<usize>().map_err(|_| CodeError::Parse {
                line,
                msg: format!("bad header field {p:?}"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if fields.len() != count {
        return Err(CodeError::Parse {
            line,
            msg: format!("{tag} header needs {count} fields, got {}", fields.len()),
        });
    }
    Ok(fields)
}

/// Seeded source of uniform, independent mask bits.
#[derive(Debug, Clone)]
pub struct MaskSource {
    rng: ChaCha8Rng,
}

impl MaskSource {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn draw(&mut self, len: usize) -> BitVector {
        let mut v = BitVector::zeros(len);
        let mut word = 0u64;
        for i in 0..len {
            if i % 64 == 0 {
                word = self.rng.next_u64();
            }
            v.put(i, (word >> (i % 64)) & 1 == 1);
        }
        v
    }
}

/// One fresh mask vector for `scheme`, determined by `seed`.
pub fn fresh_masks(scheme: &OpsScheme, seed: u64) -> BitVector {
    MaskSource::new(seed).draw(scheme.s())
}

/// Rank criterion: true iff any `q` columns of the probing matrix are
/// linearly independent.
pub fn is_probing_secure_rank(scheme: &OpsScheme, q: usize) -> Result<bool> {
    Ok(probing_witness(scheme, q)?.is_none())
}

/// A smallest dependent set of at most `q` probing-matrix columns, if any.
/// Summing the probed wires of such a set cancels every mask.
pub fn probing_witness(scheme: &OpsScheme, q: usize) -> Result<Option<Vec<usize>>> {
    if q > scheme.n() {
        return Err(CodeError::Input(format!(
            "order {q} exceeds codeword length {}",
            scheme.n()
        )));
    }
    Ok(scheme.probing().find_dependent_columns(q))
}

fn check_enumerable(generator: &BitMatrix) -> Result<()> {
    if generator.rows() > ENUMERATION_LIMIT {
        return Err(CodeError::Capacity(format!(
            "exhaustive enumeration needs at most {ENUMERATION_LIMIT} input bits, got {}",
            generator.rows()
        )));
    }
    Ok(())
}

/// Generator columns at the probed positions, each packed as a mask over
/// the input `u = (x, m)`.
fn probe_masks(generator: &BitMatrix, probes: &[usize]) -> Result<Vec<u64>> {
    check_enumerable(generator)?;
    check_indices(probes, generator.cols())?;
    Ok(probes
        .iter()
        .map(|&i| {
            generator
                .column(i)
                .to_u64()
                .expect("at most 64 rows after the enumeration check")
        })
        .collect())
}

#[inline]
fn observe(u: u64, masks: &[u64]) -> usize {
    masks.iter().enumerate().fold(0usize, |z, (b, &c)| {
        z | ((((u & c).count_ones() & 1) as usize) << b)
    })
}

/// Exact `I(X; Y_S)` in bits for the encoding `y = u G`, where the first
/// `data_bits` coordinates of `u` are the message and the rest are masks.
/// Enumerates all `2^rows` inputs with uniform probability and evaluates
/// `sum p(x,z) log2 p(x,z) / (p(x) p(z))` from integer counts.
pub fn mutual_information(
    generator: &BitMatrix,
    data_bits: usize,
    probes: &[usize],
) -> Result<f64> {
    let masks = probe_masks(generator, probes)?;
    if data_bits > generator.rows() {
        return Err(CodeError::Dimension(format!(
            "{data_bits} data bits in a {}-row generator",
            generator.rows()
        )));
    }
    let (k, s) = (data_bits, generator.rows() - data_bits);
    let total = 1u64 << generator.rows();
    let zs = 1usize << masks.len();

    let mut z_count = vec![0u64; zs];
    for u in 0..total {
        z_count[observe(u, &masks)] += 1;
    }

    let mut joint = vec![0u64; zs];
    let mut touched = Vec::with_capacity(zs);
    let mut info = 0.0f64;
    let n_total = total as f64;
    for x in 0..(1u64 << k) {
        let mut x_count = 0u64;
        for m in 0..(1u64 << s) {
            let z = observe(x | (m << k), &masks);
            if joint[z] == 0 {
                touched.push(z);
            }
            joint[z] += 1;
            x_count += 1;
        }
        for &z in &touched {
            let c = joint[z] as f64;
            let ratio = c * n_total / (x_count as f64 * z_count[z] as f64);
            info += c / n_total * ratio.log2();
            joint[z] = 0;
        }
        touched.clear();
    }
    // Rounding noise can make an exact zero slightly negative.
    Ok(if info.abs() < 1e-12 { 0.0 } else { info })
}

/// [`mutual_information`] for a scheme: zero iff the probes learn nothing.
pub fn is_probing_secure_oracle(scheme: &OpsScheme, probes: &ProbeSet) -> Result<f64> {
    mutual_information(scheme.generator(), scheme.k(), probes.indices())
}

/// First `q`-subset (in lexicographic order) on which the enumeration
/// oracle measures leakage, with the leaked bits.
pub fn oracle_leaking_subset(
    generator: &BitMatrix,
    data_bits: usize,
    q: usize,
) -> Result<Option<(Vec<usize>, f64)>> {
    check_enumerable(generator)?;
    for subset in (0..generator.cols()).combinations(q) {
        let mi = mutual_information(generator, data_bits, &subset)?;
        if mi > 1e-9 {
            return Ok(Some((subset, mi)));
        }
    }
    Ok(None)
}

/// Number of all-zero rows of the `2^n x (k + q)` table whose rows are
/// `(x, y_S)` for every input `u = (x, m)`.
pub fn zero_row_count(scheme: &OpsScheme, probes: &ProbeSet) -> Result<u64> {
    let masks = probe_masks(scheme.generator(), probes.indices())?;
    let x_mask = (1u64 << scheme.k()) - 1;
    Ok((0..1u64 << scheme.n())
        .filter(|&u| u & x_mask == 0 && observe(u, &masks) == 0)
        .count() as u64)
}

/// Result of bringing an arbitrary full-rank matrix into canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonical {
    pub scheme: OpsScheme,
    /// `permutation[new] = old` column index.
    pub permutation: Vec<usize>,
}

/// Converts a full-row-rank `s x n` matrix into an equivalent canonical
/// scheme `(Q | I_s)` using row operations and column interchanges. Mask
/// positions are picked from the right so already-canonical input is a
/// fixed point. The claimed order of the result is its verified order.
pub fn canonicalize(raw: &BitMatrix) -> Result<Canonical> {
    let (s, n) = (raw.rows(), raw.cols());
    let mut pivots: Vec<usize> = Vec::with_capacity(s);
    for c in (0..n).rev() {
        if pivots.len() == s {
            break;
        }
        let mut trial = pivots.clone();
        trial.push(c);
        if raw.select_columns(&trial)?.rank() == trial.len() {
            pivots = trial;
        }
    }
    if pivots.len() < s {
        return Err(CodeError::RankDeficient {
            rank: pivots.len(),
            rows: s,
        });
    }
    pivots.sort_unstable();
    let mut permutation: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    permutation.extend(&pivots);
    let reordered = raw.select_columns(&permutation)?;
    let probing = reordered.reduce_on_columns(&((n - s)..n).collect::<Vec<_>>())?;
    let mut scheme = OpsScheme::new(probing, 0)?;
    scheme.q_claimed = scheme.probing_order();
    Ok(Canonical {
        scheme,
        permutation,
    })
}
