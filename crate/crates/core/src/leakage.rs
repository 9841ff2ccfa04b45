//! Information leakage of masking schemes as a function of probe count.

use std::collections::HashMap;
use std::fmt::Write as _;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{CodeError, Result};
use crate::gf2::{check_indices, BitMatrix, BitVector};
use crate::masker::{MaskSource, OpsScheme, ProbeSet, ENUMERATION_LIMIT};

/// `I(X; Y_S) = rank(G_S) - rank(P_S)` in bits.
pub fn exact_leakage(scheme: &OpsScheme, probes: &ProbeSet) -> Result<usize> {
    check_indices(probes.indices(), scheme.n())?;
    let g = scheme.generator().select_columns(probes.indices())?;
    let p = scheme.probing().select_columns(probes.indices())?;
    Ok(g.rank() - p.rank())
}

/// Rank of a set of columns packed into `u64`s.
fn packed_rank(cols: &[u64]) -> usize {
    let mut basis = [0u64; 64];
    let mut rank = 0;
    for &c in cols {
        let mut v = c;
        while v != 0 {
            let top = 63 - v.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = v;
                rank += 1;
                break;
            }
            v ^= basis[top];
        }
    }
    rank
}

fn packed_columns(m: &BitMatrix) -> Vec<u64> {
    m.columns()
        .iter()
        .map(|c| c.to_u64().unwrap_or(0))
        .collect()
}

/// Worst case over all `probe_count`-subsets, with the lexicographically
/// smallest maximizing subset.
pub fn max_leakage(scheme: &OpsScheme, probe_count: usize) -> Result<(usize, ProbeSet)> {
    let n = scheme.n();
    if n > ENUMERATION_LIMIT {
        return Err(CodeError::Capacity(format!(
            "subset sweep needs n <= {ENUMERATION_LIMIT}, scheme has n = {n}; use sampled probe sets instead"
        )));
    }
    if probe_count > n {
        return Err(CodeError::Input(format!(
            "{probe_count} probes on a codeword of length {n}"
        )));
    }
    let g = packed_columns(scheme.generator());
    let p = packed_columns(scheme.probing());
    let ceiling = probe_count.min(scheme.k());
    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut gs = Vec::with_capacity(probe_count);
    let mut ps = Vec::with_capacity(probe_count);
    for subset in (0..n).combinations(probe_count) {
        gs.clear();
        ps.clear();
        gs.extend(subset.iter().map(|&i| g[i]));
        ps.extend(subset.iter().map(|&i| p[i]));
        let bits = packed_rank(&gs) - packed_rank(&ps);
        if best.as_ref().is_none_or(|(b, _)| bits > *b) {
            best = Some((bits, subset));
            if bits == ceiling {
                break;
            }
        }
    }
    let (bits, witness) = best.expect("at least one subset");
    Ok((bits, ProbeSet::new(witness, n)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeakagePoint {
    pub probes: usize,
    pub max_leakage_bits: usize,
    pub witness: ProbeSet,
}

/// Worst-case leakage curve of one scheme.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeakageProfile {
    pub scheme_id: String,
    pub points: Vec<LeakagePoint>,
}

impl LeakageProfile {
    pub fn bits(&self, probes: usize) -> Option<usize> {
        self.points
            .iter()
            .find(|pt| pt.probes == probes)
            .map(|pt| pt.max_leakage_bits)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("probes,max_leakage_bits,witness\n");
        for pt in &self.points {
            let _ = writeln!(out, "{},{},{}", pt.probes, pt.max_leakage_bits, pt.witness);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("profile serializes")
    }

    /// Smallest `p >= 1` with `leakage(p) / p >= rate`.
    pub fn first_rate_at_least(&self, rate: f64) -> Option<usize> {
        self.points
            .iter()
            .find(|pt| pt.probes > 0 && pt.max_leakage_bits as f64 >= rate * pt.probes as f64)
            .map(|pt| pt.probes)
    }

    /// Smallest `p` at which the curve leaks and has caught up with the
    /// Vernam curve `floor(p / 2)`.
    pub fn vernam_crossing(&self) -> Option<usize> {
        self.points
            .iter()
            .find(|pt| pt.max_leakage_bits > 0 && pt.max_leakage_bits >= pt.probes / 2)
            .map(|pt| pt.probes)
    }
}

/// Curve for probe counts `0..=max_probes`.
pub fn leakage_profile_up_to(
    scheme: &OpsScheme,
    scheme_id: &str,
    max_probes: usize,
) -> Result<LeakageProfile> {
    let points = (0..=max_probes.min(scheme.n()))
        .map(|p| {
            max_leakage(scheme, p).map(|(bits, witness)| LeakagePoint {
                probes: p,
                max_leakage_bits: bits,
                witness,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LeakageProfile {
        scheme_id: scheme_id.to_string(),
        points,
    })
}

/// Full curve for probe counts `0..=n`.
pub fn leakage_profile(scheme: &OpsScheme, scheme_id: &str) -> Result<LeakageProfile> {
    leakage_profile_up_to(scheme, scheme_id, scheme.n())
}

/// Plug-in estimate of `I(X; Y_S)` from `trials` simulated cycles, each with
/// a uniform message and fresh masks.
pub fn empirical_leakage(
    scheme: &OpsScheme,
    probes: &ProbeSet,
    trials: usize,
    rng_seed: u64,
) -> Result<f64> {
    check_indices(probes.indices(), scheme.n())?;
    if trials == 0 {
        return Err(CodeError::Input("at least one trial is required".into()));
    }
    let mut rng = MaskSource::new(rng_seed);
    let mut joint: HashMap<(BitVector, BitVector), u64> = HashMap::new();
    let mut x_count: HashMap<BitVector, u64> = HashMap::new();
    let mut z_count: HashMap<BitVector, u64> = HashMap::new();
    for _ in 0..trials {
        let x = rng.draw(scheme.k());
        let m = rng.draw(scheme.s());
        let y = scheme.encode(&x, &m)?;
        let z = BitVector::from_bools(probes.indices().iter().map(|&i| y.bit(i)));
        *x_count.entry(x.clone()).or_default() += 1;
        *z_count.entry(z.clone()).or_default() += 1;
        *joint.entry((x, z)).or_default() += 1;
    }
    let t = trials as f64;
    let info: f64 = joint
        .iter()
        .map(|((x, z), &c)| {
            let c = c as f64;
            c / t * (c * t / (x_count[x] as f64 * z_count[z] as f64)).log2()
        })
        .sum();
    Ok(info.max(0.0))
}
