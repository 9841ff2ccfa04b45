use itertools::Itertools;
use maskcode::masker::mutual_information;
use maskcode::otr::{
    build_otr, check_and_decode, encode_otr, forcing_sweep, search_otr, Decoded, OtrCode,
};
use maskcode::reference as a;
use maskcode::BitVector;

fn load(name: &str) -> OtrCode {
    let path = format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"));
    OtrCode::parse_text(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn searched() -> Vec<OtrCode> {
    let mut codes = Vec::new();
    for (j, f, q) in [
        (1, 1, 1),
        (1, 2, 2),
        (2, 2, 2),
        (3, 2, 1),
        (2, 1, 2),
        (6, 3, 3),
        (4, 3, 2),
    ] {
        for seed in 1..=3 {
            codes.push(
                search_otr(j, f, q, 3000, seed)
                    .unwrap_or_else(|| panic!("({j},{f},{q}) seed {seed}")),
            );
        }
    }
    codes
}

#[test]
fn files_match_reference_generators() {
    assert_eq!(
        load("otr_7_4_1_2_2.otr").generator(),
        &a::matrix(&a::OTR_7_4_1_2_2)
    );
    assert_eq!(
        load("otr_16_11_6_3_3.otr").generator(),
        &a::matrix(&a::OTR_16_11_6_3_3)
    );
}

#[test]
fn decode_inverts_encode_on_every_input() {
    for code in [load("otr_7_4_1_2_2.otr"), load("otr_16_11_6_3_3.otr")] {
        for u in 0u64..1 << code.k() {
            let x = BitVector::from_u64(u & ((1 << code.j()) - 1), code.j());
            let m = BitVector::from_u64(u >> code.j(), code.s());
            let y = encode_otr(&code, &x, &m).unwrap();
            assert_eq!(
                check_and_decode(&code, &y).unwrap(),
                Decoded::Message { x, m }
            );
        }
    }
}

#[test]
fn searched_codes_satisfy_every_invariant() {
    for code in searched() {
        let (f, q) = (code.f_claimed(), code.q_claimed());
        let rebuilt = build_otr(
            code.q_block().clone(),
            code.s_block().clone(),
            code.r_block().clone(),
            f,
            q,
        );
        assert_eq!(rebuilt.as_ref(), Ok(&code));
        assert!(code
            .generator()
            .mul(&code.parity_check().transpose())
            .unwrap()
            .is_zero());
        for order in 1..=f + 1 {
            assert_eq!(
                forcing_sweep(&code, order).unwrap().all_detected,
                code.parity_check().min_dependent_columns(order).is_none()
            );
        }
        assert!(forcing_sweep(&code, f).unwrap().all_detected);
    }
}

#[test]
fn embedded_scheme_oracle_agrees_with_rank_criterion() {
    for code in searched().into_iter().filter(|c| c.n() <= 16) {
        let q = code.q_claimed();
        for size in 1..=q + 1 {
            for s in (0..code.n()).combinations(size) {
                let mi = mutual_information(code.generator(), code.j(), &s).unwrap();
                let independent = code.probing().columns_independent(&s).unwrap();
                assert_eq!(mi.abs() < 1e-9, independent, "probes {s:?}");
            }
        }
    }
}

#[test]
fn search_is_deterministic_per_seed() {
    assert_eq!(
        search_otr(6, 3, 3, 10_000, 1),
        search_otr(6, 3, 3, 10_000, 1)
    );
}
