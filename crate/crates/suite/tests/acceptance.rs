//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use itertools::Itertools;
use maskcode::codebook::{make_probing_matrix, table_lookup, CodeFamily, TableValue};
use maskcode::leakage::{empirical_leakage, exact_leakage, leakage_profile};
use maskcode::masker::{is_probing_secure_oracle, zero_row_count, OpsScheme, ProbeSet};
use maskcode::otr::{
    build_otr, detection_sweep, forcing_sweep, gv_pair_check, search_otr, OtrCode,
};
use maskcode::reference as a;
use maskcode::BitMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = (&'static str, Duration, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn data_file(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name]
        .iter()
        .collect();
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn ops(rows: &[&str], q: usize) -> OpsScheme {
    OpsScheme::new(a::matrix(rows), q).unwrap()
}

fn dashed(v: &[usize]) -> String {
    v.iter().join("-")
}

fn reference_golden() -> Verdict {
    let mut notes = Vec::new();
    let mut pass = true;
    for (file, rows, q) in [
        ("ops_7_4_2.ops", &a::OPS_7_4_2[..], 2),
        ("ops_16_11_3.ops", &a::OPS_16_11_3[..], 3),
        ("ops_17_9_4.ops", &a::OPS_17_9_4[..], 4),
    ] {
        let sch = OpsScheme::parse_text(&data_file(file)).unwrap();
        let exact = sch.probing() == &a::matrix(rows);
        let holds = sch.probing().find_dependent_columns(q).is_none();
        let witness = sch.probing().find_dependent_columns(q + 1);
        pass &= exact && holds && witness.is_some();
        notes.push(format!(
            "{file}: PS({q}) {holds}, PS({}) witness {}",
            q + 1,
            witness.as_deref().map(dashed).unwrap_or_default()
        ));
    }
    for (file, rows, j, r, f) in [
        ("otr_7_4_1_2_2.otr", &a::OTR_7_4_1_2_2[..], 1, 3, 2),
        ("otr_16_11_6_3_3.otr", &a::OTR_16_11_6_3_3[..], 6, 5, 3),
    ] {
        let code = OtrCode::parse_text(&data_file(file)).unwrap();
        let exact = code.generator() == &a::matrix(rows);
        let (qb, sb, rb) = OtrCode::components_from_generator(&a::matrix(rows), j, r).unwrap();
        let rebuilt = build_otr(qb, sb, rb, f, f).is_ok();
        let holds = forcing_sweep(&code, f).unwrap().all_detected;
        let miss = forcing_sweep(&code, f + 1).unwrap().miss_witness;
        let probe_witness = code.probing_witness(f + 1);
        pass &= exact && rebuilt && holds && miss.is_some() && probe_witness.is_some();
        notes.push(format!(
            "{file}: FRS({f}) {holds}, FRS({}) missed error {}, PS({}) witness {}",
            f + 1,
            miss.map(|e| e.to_string()).unwrap_or_default(),
            f + 1,
            probe_witness.as_deref().map(dashed).unwrap_or_default()
        ));
    }
    verdict(pass, notes.join("; "))
}

fn random_canonical(rng: &mut ChaCha8Rng) -> OpsScheme {
    let n = rng.gen_range(2..=12);
    let s = rng.gen_range(1..n);
    let k = n - s;
    let mut q = BitMatrix::zeros(s, k);
    for r in 0..s {
        for c in 0..k {
            q.set(r, c, rng.gen()).unwrap();
        }
    }
    let p = BitMatrix::hstack(&[&q, &BitMatrix::identity(s)]).unwrap();
    OpsScheme::new(p, 0).unwrap()
}

fn oracle_equivalence() -> Verdict {
    let mut schemes = vec![ops(&a::OPS_7_4_2, 2)];
    schemes.extend((1..=4).map(|k| OpsScheme::from_family(CodeFamily::Vernam { k }).unwrap()));
    schemes.extend((1..=3).map(|q| OpsScheme::from_family(CodeFamily::Repetition { q }).unwrap()));
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    schemes.extend((0..50).map(|_| random_canonical(&mut rng)));

    let (mut subsets, mut disagreements) = (0usize, Vec::new());
    for (idx, sch) in schemes.iter().enumerate() {
        for size in 0..=4.min(sch.n()) {
            for s in (0..sch.n()).combinations(size) {
                subsets += 1;
                let ps = ProbeSet::new(s.clone(), sch.n()).unwrap();
                let mi = is_probing_secure_oracle(sch, &ps).unwrap();
                let independent = sch.probing().columns_independent(&s).unwrap();
                let integral = (mi - mi.round()).abs() < 1e-9;
                let formula = (mi - exact_leakage(sch, &ps).unwrap() as f64).abs() < 1e-9;
                if (mi.abs() < 1e-9) != independent || !integral || !formula {
                    disagreements.push(format!("scheme {idx} probes {ps}"));
                }
            }
        }
    }
    verdict(
        disagreements.is_empty(),
        format!(
            "{} schemes, {subsets} probe sets, {} disagreements{}",
            schemes.len(),
            disagreements.len(),
            disagreements
                .first()
                .map(|d| format!(" (first: {d})"))
                .unwrap_or_default()
        ),
    )
}

fn zero_rows() -> Verdict {
    let mut notes = Vec::new();
    let mut pass = true;
    for (name, sch, q) in [
        ("OPS(7,4;2)", ops(&a::OPS_7_4_2, 2), 2),
        ("OPS(16,11;3)", ops(&a::OPS_16_11_3, 3), 3),
    ] {
        let expected = 1u64 << (sch.s() - q);
        let (mut checked, mut bad) = (0, 0);
        for s in (0..sch.n()).combinations(q) {
            if !sch.probing().columns_independent(&s).unwrap() {
                continue;
            }
            checked += 1;
            let ps = ProbeSet::new(s, sch.n()).unwrap();
            if zero_row_count(&sch, &ps).unwrap() != expected {
                bad += 1;
            }
        }
        pass &= bad == 0 && checked > 0;
        notes.push(format!(
            "{name}: {checked} subsets, expected {expected} zero rows, {bad} mismatches"
        ));
    }
    verdict(pass, notes.join("; "))
}

fn leakage_anchors() -> Verdict {
    let b = leakage_profile(&ops(&a::OPS_16_11_3, 3), "ops-16-11-3").unwrap();
    let c = leakage_profile(&ops(&a::OPS_17_9_4, 4), "ops-17-9-4").unwrap();
    let zero_b = (0..=3).all(|p| b.bits(p) == Some(0));
    let zero_c = (0..=4).all(|p| c.bits(p) == Some(0));
    let rate_b = b.first_rate_at_least(0.5);
    let rate_c = c.first_rate_at_least(0.5);
    let plain_k = 8;
    let plain = leakage_profile(&OpsScheme::unmasked(plain_k), "plain").unwrap();
    let plain_ok = (0..=plain_k).all(|p| plain.bits(p) == Some(p));
    let vernam = leakage_profile(
        &OpsScheme::from_family(CodeFamily::Vernam { k: 4 }).unwrap(),
        "vernam",
    )
    .unwrap();
    let vernam_ok = (0..=8).all(|p| vernam.bits(p) == Some(p / 2));
    let pass = zero_b && zero_c && rate_b == Some(7) && rate_c == Some(15) && plain_ok && vernam_ok;
    let curve = |p: &maskcode::leakage::LeakageProfile| {
        p.points.iter().map(|x| x.max_leakage_bits).join(",")
    };
    verdict(
        pass,
        format!(
            "zero region {zero_b}/{zero_c}; leakage/p >= 0.5 first at {rate_b:?} (want 7) and {rate_c:?} (want 15); \
             curve meets floor(p/2) at {:?} and {:?}; unmasked {plain_ok}; vernam {vernam_ok}; \
             OPS(16,11;3) curve [{}]; OPS(17,9;4) curve [{}]",
            b.vernam_crossing(),
            c.vernam_crossing(),
            curve(&b),
            curve(&c)
        ),
    )
}

/// True iff some `s x n` matrix has every `q` columns independent.
fn any_matrix_has_order(s: usize, n: usize, q: usize) -> bool {
    (0u64..1 << (s * n)).any(|bits| {
        let mut m = BitMatrix::zeros(s, n);
        for i in 0..s * n {
            m.set(i / n, i % n, bits >> i & 1 == 1).unwrap();
        }
        m.find_dependent_columns(q).is_none()
    })
}

fn table_spot_checks() -> Verdict {
    let mut cases = vec![
        ((3, 2, 7), CodeFamily::Hamming { s: 3, n: 7 }),
        ((5, 3, 16), CodeFamily::Hsiao { s: 5, n: 16 }),
        ((8, 4, 17), CodeFamily::Qr17),
        ((11, 6, 23), CodeFamily::Golay23),
        ((12, 7, 24), CodeFamily::Golay24),
    ];
    cases.extend((1..=5).map(|q| ((q, q, q + 1), CodeFamily::Repetition { q })));
    let mut bad = Vec::new();
    for ((s, q, n), family) in &cases {
        let p = make_probing_matrix(*family).unwrap();
        let shape = (p.rows(), p.cols()) == (*s, *n);
        let order = p.find_dependent_columns(*q).is_none();
        let cell = table_lookup(*s, *q).map(|e| e.value);
        let listed = matches!(cell, Ok(TableValue::Exact(m)) if m == *n) || *q == 1;
        if !(shape && order && listed) {
            bad.push(format!("({s},{q},{n})"));
        }
    }
    let max_2_2 = !any_matrix_has_order(2, 4, 2) && any_matrix_has_order(2, 3, 2);
    let max_3_3 = !any_matrix_has_order(3, 5, 3) && any_matrix_has_order(3, 4, 3);
    verdict(
        bad.is_empty() && max_2_2 && max_3_3,
        format!(
            "{} constructions verified, failures [{}]; n_max(2,2)=3 {max_2_2}; n_max(3,3)=4 {max_3_3}",
            cases.len() - bad.len(),
            bad.join(" ")
        ),
    )
}

fn duality() -> Verdict {
    let mut shipped: Vec<(String, BitMatrix, usize)> = vec![
        ("ops-7-4-2".into(), a::matrix(&a::OPS_7_4_2), 2),
        ("ops-16-11-3".into(), a::matrix(&a::OPS_16_11_3), 3),
        ("ops-17-9-4".into(), a::matrix(&a::OPS_17_9_4), 4),
    ];
    for family in [
        CodeFamily::Vernam { k: 4 },
        CodeFamily::SingleParity { k: 4 },
        CodeFamily::Repetition { q: 3 },
        CodeFamily::Hamming { s: 4, n: 15 },
        CodeFamily::Hsiao { s: 4, n: 8 },
        CodeFamily::Qr17,
        CodeFamily::Golay23,
        CodeFamily::Golay24,
    ] {
        shipped.push((
            family.to_string(),
            make_probing_matrix(family).unwrap(),
            family.advertised_order(),
        ));
    }
    let failures: Vec<String> = shipped
        .iter()
        .filter(|(_, p, q)| !detection_sweep(p, *q).unwrap().all_detected)
        .map(|(name, _, _)| name.clone())
        .collect();
    verdict(
        failures.is_empty(),
        format!(
            "{} matrices, failures [{}]",
            shipped.len(),
            failures.join(" ")
        ),
    )
}

fn gv_direct(l: usize, m: usize, n: usize) -> bool {
    let binom = |n: u128, k: u128| (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1));
    (0..l as u128)
        .map(|i| binom(n as u128 - 1, i))
        .sum::<u128>()
        < 1u128 << m
}

fn otr_search() -> Verdict {
    let mut notes = Vec::new();
    let mut pass = true;
    for (j, f, q, max_n) in [(1, 2, 2, 7), (6, 3, 3, 16)] {
        match search_otr(j, f, q, 10_000, 1) {
            Some(code) => {
                let verified = build_otr(
                    code.q_block().clone(),
                    code.s_block().clone(),
                    code.r_block().clone(),
                    f,
                    q,
                )
                .is_ok();
                let (s, r, n) = (code.s(), code.r(), code.n());
                let gv = gv_pair_check(j, f, q, s, r);
                let gv_ok = gv == (gv_direct(q, s, n), gv_direct(f, r, n));
                pass &= verified && n <= max_n && gv_ok;
                notes.push(format!(
                    "(j={j},f={f},q={q}) -> n={n} s={s} r={r} verified {verified}, GV (probing,forcing)={gv:?} consistent {gv_ok}"
                ));
            }
            None => {
                pass = false;
                notes.push(format!("(j={j},f={f},q={q}) -> nothing found"));
            }
        }
    }
    verdict(pass, notes.join("; "))
}

fn empirical_convergence() -> Verdict {
    let schemes = [
        ("OPS(7,4;2)", ops(&a::OPS_7_4_2, 2)),
        (
            "Vernam k=2",
            OpsScheme::from_family(CodeFamily::Vernam { k: 2 }).unwrap(),
        ),
    ];
    let mut worst = 0.0f64;
    let mut runs = 0;
    for (_, sch) in &schemes {
        for size in 0..=3 {
            for s in (0..sch.n()).combinations(size) {
                let ps = ProbeSet::new(s, sch.n()).unwrap();
                let exact = exact_leakage(sch, &ps).unwrap() as f64;
                for seed in [11, 22, 33] {
                    runs += 1;
                    let est = empirical_leakage(sch, &ps, 100_000, seed).unwrap();
                    worst = worst.max((est - exact).abs());
                }
            }
        }
    }
    verdict(
        worst <= 0.05,
        format!("{runs} estimates, worst absolute error {worst:.5} bits"),
    )
}

fn main() -> ExitCode {
    let criteria: [Check; 8] = [
        (
            "reference golden suite",
            Duration::from_secs(10),
            reference_golden,
        ),
        (
            "rank criterion vs enumeration oracle",
            Duration::from_secs(120),
            oracle_equivalence,
        ),
        ("zero-row counting", Duration::from_secs(60), zero_rows),
        (
            "leakage curve anchors",
            Duration::from_secs(300),
            leakage_anchors,
        ),
        (
            "table spot checks and maximality",
            Duration::from_secs(120),
            table_spot_checks,
        ),
        ("duality regression", Duration::from_secs(60), duality),
        ("OTR search", Duration::from_secs(300), otr_search),
        (
            "empirical convergence",
            Duration::from_secs(60),
            empirical_convergence,
        ),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check();
        let elapsed = start.elapsed();
        let pass = v.pass && elapsed <= *limit;
        failed += usize::from(!pass);
        println!(
            "criterion {}: {} {name} [{:.2}s, limit {}s] {}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs(),
            v.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
