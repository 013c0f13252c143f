//! The verification checks must accept the weighted core-EP inverse and
//! reject close relatives of it.

use wcep_core::bench::{run_bench, BenchConfig, OutputFormat};
use wcep_core::gen::{gen_random_pair, RandomPairBuilder};
use wcep_core::genin::{wcep_def, weighted_drazin};
use wcep_core::reps::{wcep_gas, wcep_qr, QrVariant};
use wcep_core::verify::{
    check_bc_inverse, check_direct_sum, check_projectors, check_range_null, check_wcep_axioms, residuals,
};
use wcep_core::{Method, Tolerance};

fn tol() -> Tolerance {
    Tolerance::default()
}

#[test]
fn weighted_drazin_is_not_accepted() {
    let t = tol();
    for seed in 0..5 {
        let p = gen_random_pair(7, 5, 2, seed).unwrap();
        let x = wcep_def(&p, &t).unwrap();
        let xd = weighted_drazin(&p, &t).unwrap();
        assert!(xd.max_abs_diff(&x) > 1e-6, "instances should separate the two inverses");
        assert!(check_wcep_axioms(&p, &x, &t));
        assert!(!check_wcep_axioms(&p, &xd, &t));
        assert!(!check_range_null(&p, &xd, &t).unwrap());
        assert!(!check_projectors(&p, &xd, &t).unwrap());
        // Same range, so the direct-sum property alone cannot tell them apart.
        assert!(check_direct_sum(&p, &xd, &t).unwrap());
    }
}

#[test]
fn bc_inverse_holds_on_complex_pairs() {
    let t = tol();
    let inst = RandomPairBuilder::new(8, 6, 3, 21).complex(true).build(&t).unwrap();
    assert!(check_bc_inverse(&inst.pair, &t).unwrap());
}

#[test]
fn block_and_qr_forms_match_the_definition() {
    let t = tol();
    for seed in 0..6 {
        let inst = RandomPairBuilder::new(9, 7, 1 + seed as usize % 3, seed).build(&t).unwrap();
        let x = wcep_def(&inst.pair, &t).unwrap();
        let scale = 1e-8 * (1.0 + x.max_abs());
        let gas = wcep_gas(&inst.pair, &inst.gas, &t).unwrap();
        let qr = wcep_qr(&inst.pair, QrVariant::Projected, &t).unwrap();
        assert!(gas.max_abs_diff(&x) <= scale);
        assert!(qr.max_abs_diff(&x) <= scale);
    }
}

#[test]
fn larger_exponents_give_the_same_inverse() {
    let t = tol();
    let p = gen_random_pair(10, 14, 3, 4).unwrap();
    let x = wcep_def(&p, &t).unwrap();
    for m in [Method::TwoPinv, Method::AwPinv, Method::WaPinv] {
        for l in [3, 4, 8] {
            let y = m.compute(&p, Some(l), &t).unwrap();
            let r = residuals(&p, &y, &t).unwrap();
            assert!(r.pass, "{m} at l = {l}: {r:?}");
            assert!(y.max_abs_diff(&x) <= 1e-8 * (1.0 + x.max_abs()), "{m} at l = {l}");
        }
    }
}

#[test]
fn bench_rows_for_every_method_pass() {
    let cfg = BenchConfig {
        sizes: vec![(20, 30)],
        l_offsets: vec![0],
        target_index: 3,
        seed: 1,
        repetitions: 1,
        methods: Method::ALL.to_vec(),
        format: OutputFormat::Csv,
    };
    let rows = run_bench(&cfg, &tol()).unwrap();
    assert_eq!(rows.len(), 7);
    for r in rows {
        let rep = r.outcome.unwrap_or_else(|e| panic!("{}: {e}", r.method));
        assert!(rep.pass, "{}: {rep:?}", r.method);
    }
}
