use itertools::Itertools;
use maskcode::leakage::exact_leakage;
use maskcode::masker::{canonicalize, is_probing_secure_oracle, OpsScheme, ProbeSet};
use maskcode::reference as a;
use maskcode::{BitMatrix, BitVector};
use proptest::prelude::*;

fn bitvec(len: usize) -> impl Strategy<Value = BitVector> {
    prop::collection::vec(any::<bool>(), len).prop_map(BitVector::from_bools)
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = BitMatrix> {
    prop::collection::vec(bitvec(cols), rows)
        .prop_map(move |r| BitMatrix::from_rows(cols, r).unwrap())
}

fn hsiao() -> OpsScheme {
    OpsScheme::new(a::matrix(&a::OPS_16_11_3), 3).unwrap()
}

proptest! {
    #[test]
    fn encoding_is_linear(x1 in bitvec(11), x2 in bitvec(11), m1 in bitvec(5), m2 in bitvec(5)) {
        let sch = hsiao();
        let mut lhs = sch.encode(&x1, &m1).unwrap();
        lhs ^= &sch.encode(&x2, &m2).unwrap();
        let rhs = sch.encode(&x1.xor(&x2).unwrap(), &m1.xor(&m2).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn decode_inverts_encode(q in matrix(4, 6), x in bitvec(6), m in bitvec(4)) {
        let p = BitMatrix::hstack(&[&q, &BitMatrix::identity(4)]).unwrap();
        let sch = OpsScheme::new(p, 0).unwrap();
        let y = sch.encode(&x, &m).unwrap();
        prop_assert_eq!(sch.decode(&y).unwrap(), (x, m));
    }

    #[test]
    fn canonical_form_keeps_row_space_and_order(raw in matrix(4, 9)) {
        prop_assume!(raw.rank() == 4);
        let c = canonicalize(&raw).unwrap();
        let p = c.scheme.probing();
        prop_assert!(p.column_range(5, 9).unwrap().is_identity());
        prop_assert!(p.same_row_space(&raw.select_columns(&c.permutation).unwrap()));
        let mut sorted = c.permutation.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..9).collect::<Vec<_>>());
        let raw_order = raw.find_dependent_columns(5).map_or(4, |w| w.len() - 1);
        prop_assert_eq!(c.scheme.probing_order(), raw_order);
    }

    #[test]
    fn leakage_is_monotone_and_bounded(
        small in prop::collection::btree_set(0usize..17, 0..8),
        extra in prop::collection::btree_set(0usize..17, 0..8),
    ) {
        let sch = OpsScheme::new(a::matrix(&a::OPS_17_9_4), 4).unwrap();
        let s = ProbeSet::new(small.iter().copied().collect(), 17).unwrap();
        let big = ProbeSet::new(small.union(&extra).copied().collect(), 17).unwrap();
        let (l1, l2) = (exact_leakage(&sch, &s).unwrap(), exact_leakage(&sch, &big).unwrap());
        prop_assert!(l1 <= l2);
        prop_assert!(l2 <= big.len().min(9));
    }
}

#[test]
fn oracle_matches_rank_formula_on_small_random_schemes() {
    let q = BitMatrix::from_strs(&["101", "011", "111"]).unwrap();
    let p = BitMatrix::hstack(&[&q, &BitMatrix::identity(3)]).unwrap();
    let sch = OpsScheme::new(p, 0).unwrap();
    for size in 0..=6 {
        for s in (0..6).combinations(size) {
            let ps = ProbeSet::new(s, 6).unwrap();
            let mi = is_probing_secure_oracle(&sch, &ps).unwrap();
            assert!((mi - exact_leakage(&sch, &ps).unwrap() as f64).abs() < 1e-9);
        }
    }
}

#[test]
fn shipped_files_parse_bit_exactly() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data");
    let read = |name: &str| std::fs::read_to_string(format!("{dir}/{name}")).unwrap();
    for (name, rows) in [
        ("ops_7_4_2.ops", &a::OPS_7_4_2[..]),
        ("ops_16_11_3.ops", &a::OPS_16_11_3[..]),
        ("ops_17_9_4.ops", &a::OPS_17_9_4[..]),
    ] {
        let text = read(name);
        let sch = OpsScheme::parse_text(&text).unwrap();
        assert_eq!(sch.probing(), &a::matrix(rows), "{name}");
        assert_eq!(sch.to_text(), text, "{name}");
    }
}
