use std::sync::OnceLock;

use mfunctor::basic_data::{load_str, to_json_string};
use mfunctor::curve_operators::{
    c_matrix, c_routes_agree, check_dehn, check_integrality, check_multiplicativity, CofVariant,
};
use mfunctor::generators::BUILT_IN;
use mfunctor::genus_zero_relations::run_all;
use mfunctor::linalg::{c, max_diff, CMat};
use mfunctor::s_reconstruction::{reconstruct_s0, s_from_twist_sandwich, s_lambda_main, MainForm};
use mfunctor::suite::{full_suite, SuiteOptions};
use mfunctor::{generate, BasicData};

fn theories() -> &'static [(String, BasicData)] {
    static T: OnceLock<Vec<(String, BasicData)>> = OnceLock::new();
    T.get_or_init(|| {
        BUILT_IN
            .iter()
            .map(|n| (n.to_string(), generate(n).unwrap()))
            .collect()
    })
}

fn fib() -> &'static BasicData {
    &theories().iter().find(|(n, _)| n == "fibonacci").unwrap().1
}

fn failing(bd: &BasicData) -> Vec<String> {
    run_all(bd)
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.to_string())
        .collect()
}

#[test]
fn builtins_pass_relations() {
    for (name, bd) in theories() {
        assert!(failing(bd).is_empty(), "{name}: {:?}", failing(bd));
        for r in check_integrality(bd, CofVariant::Statement) {
            assert!(r.pass, "{name}: {r}");
        }
        let c = c_matrix(bd).unwrap();
        assert!(check_multiplicativity(bd, &c).pass, "{name}");
        assert!(c_routes_agree(bd).unwrap() < 1e-9, "{name}");
    }
}

#[test]
fn dehn_solve_and_quotient_form() {
    for (name, bd) in theories() {
        for r in check_dehn(bd).unwrap() {
            if r.relation != "dehn-closed-printed" {
                assert!(r.pass, "{name}: {r}");
            }
        }
    }
}

#[test]
fn main_and_sandwich_agree_everywhere() {
    for (name, bd) in theories() {
        for lam in bd.labels.labels() {
            if bd.torus_summands(lam).is_empty() {
                continue;
            }
            let m = s_lambda_main(bd, lam, None, MainForm::Theorem, CofVariant::Statement).unwrap();
            let s = s_from_twist_sandwich(bd, lam, CofVariant::Statement).unwrap();
            let d = max_diff(&m.m, &s.m);
            assert!(d < 1e-9, "{name} λ={lam}: {d:e}");
        }
        let m0 = s_lambda_main(bd, 0, None, MainForm::Theorem, CofVariant::Statement).unwrap();
        assert!(m0.residual.unwrap() < 1e-9, "{name}");
    }
}

#[test]
fn json_round_trip_is_exact() {
    for (name, bd) in theories() {
        let back = load_str(&to_json_string(bd)).unwrap();
        assert!(&back == bd, "{name} changed on round trip");
    }
}

#[test]
fn fibonacci_block_matches_golden_ratio() {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let bd = fib();
    let get = |nu, nt| bd.f_block(1, 1, 1, 1, nu, nt).m[(0, 0)];
    assert!((get(0, 0) - c(1.0 / phi, 0.0)).norm() < 1e-12);
    assert!((get(1, 1) + c(1.0 / phi, 0.0)).norm() < 1e-12);
    assert!((get(0, 1) - c(phi.powf(-0.5), 0.0)).norm() < 1e-12);
    assert!((get(1, 0) - c(phi.powf(-0.5), 0.0)).norm() < 1e-12);
}

fn perturbed(base: &BasicData, key: [usize; 6], e: usize) -> BasicData {
    let mut bd = base.clone();
    bd.f.get_mut(&key).unwrap().m[e] += c(1e-3, 0.0);
    bd
}

/// Largest residual among reports that sit below 1e-4 on the base document.
fn rise(base: &[mfunctor::RelationReport], moved: &[mfunctor::RelationReport]) -> f64 {
    assert_eq!(base.len(), moved.len());
    base.iter()
        .zip(moved)
        .filter(|(b, _)| b.residual < 1e-4)
        .map(|(_, m)| m.residual)
        .fold(0.0, f64::max)
}

#[test]
fn any_f_perturbation_is_caught_by_full_suite() {
    let base = fib();
    let reps = full_suite(base, SuiteOptions::consistent());
    for (&key, blk) in &base.f {
        for e in 0..blk.m.len() {
            let w = rise(
                &reps,
                &full_suite(&perturbed(base, key, e), SuiteOptions::consistent()),
            );
            assert!(w >= 1e-4, "key {key:?} entry {e}: worst {w:e}");
        }
    }
}

// Genus-zero relations never contract a block whose channels are both
// non-unit; only the genus-one checks see F[t t;t t]_{t,t}.
#[test]
fn genus_zero_blind_spot_is_exactly_the_non_unit_channel() {
    let base = fib();
    let reps = run_all(base);
    let mut blind = Vec::new();
    for (&key, blk) in &base.f {
        for e in 0..blk.m.len() {
            if rise(&reps, &run_all(&perturbed(base, key, e))) < 1e-4 {
                blind.push(key);
            }
        }
    }
    assert_eq!(blind, vec![[1, 1, 1, 1, 1, 1]]);
}

#[test]
fn gauge_change_keeps_relations_and_s() {
    let bd = fib();
    let g = CMat::from_element(1, 1, c(0.3, -1.7));
    let moved = bd.change_basis([1, 1, 1], &g).unwrap();
    assert!(failing(&moved).is_empty(), "{:?}", failing(&moved));
    for lam in [0, 1] {
        let a = s_lambda_main(bd, lam, None, MainForm::Theorem, CofVariant::Statement).unwrap();
        let b = s_lambda_main(&moved, lam, None, MainForm::Theorem, CofVariant::Statement).unwrap();
        assert!(max_diff(&a.m, &b.m) < 1e-9);
    }
}

#[test]
fn reconstruction_without_s_recovers_generator() {
    for (name, bd) in theories() {
        if name == "trivial" {
            continue;
        }
        let bare = bd.clone().with_s(None);
        let rec = reconstruct_s0(&bare).unwrap();
        assert_eq!(rec.candidates, 1, "{name}");
        let d = max_diff(&rec.s, bd.s.as_ref().unwrap());
        assert!(d < 1e-8, "{name}: {d:e}");
    }
}

#[test]
fn proof_forms_agree_with_theorem_form() {
    for (name, bd) in theories() {
        let a = s_lambda_main(bd, 0, None, MainForm::Theorem, CofVariant::Statement).unwrap();
        let b = s_lambda_main(bd, 0, None, MainForm::Proof, CofVariant::Statement).unwrap();
        assert!(max_diff(&a.m, &b.m) < 1e-9, "{name}");
    }
}
