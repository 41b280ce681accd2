use std::sync::OnceLock;

use proptest::prelude::*;

use mfunctor::basic_data::{load_str, to_json_string};
use mfunctor::curve_operators::CofVariant;
use mfunctor::genus_zero_relations::run_all;
use mfunctor::label_algebra::verlinde_dim_with;
use mfunctor::linalg::{max_diff, CMat, C64};
use mfunctor::s_reconstruction::{
    apply, compose_framed, mat_mul, reconstruct_s0, s_from_twist_sandwich, s_lambda_main,
    wall_sigma, FramedMapClass, MainForm,
};
use mfunctor::{generate, BasicData, PantsTree};

const NAMES: [&str; 4] = ["fibonacci", "abelian-3", "abelian-4", "abelian-5"];

fn theory(i: usize) -> &'static BasicData {
    static T: OnceLock<Vec<BasicData>> = OnceLock::new();
    &T.get_or_init(|| NAMES.iter().map(|n| generate(n).unwrap()).collect())[i]
}

const GENS: [[[i64; 2]; 2]; 4] = [
    [[0, -1], [1, 0]],
    [[1, 1], [0, 1]],
    [[0, 1], [-1, 0]],
    [[1, -1], [0, 1]],
];

fn sl2() -> impl Strategy<Value = [[i64; 2]; 2]> {
    prop::collection::vec(0usize..4, 0..6).prop_map(|w| {
        w.into_iter()
            .fold([[1, 0], [0, 1]], |m, g| mat_mul(m, GENS[g]))
    })
}

fn line() -> impl Strategy<Value = [i64; 2]> {
    sl2().prop_map(|m| apply(m, [1, 0]))
}

/// Three composable classes L₁ → L₂ → L₃ → L₄.
fn chain() -> impl Strategy<Value = [FramedMapClass; 3]> {
    (
        prop::array::uniform4(line()),
        prop::array::uniform3((sl2(), -5i64..5)),
    )
        .prop_map(|(l, fs)| {
            [0, 1, 2].map(|i| FramedMapClass::new(fs[i].0, fs[i].1, l[i], l[i + 1]).unwrap())
        })
}

/// Spaces with a unit label carry the canonical vectors of the unit axioms,
/// so only the others have a free basis.
fn non_unit_triples(bd: &BasicData) -> Vec<[usize; 3]> {
    bd.r.keys()
        .copied()
        .filter(|t| !t.contains(&bd.labels.unit()))
        .collect()
}

fn gauge() -> impl Strategy<Value = C64> {
    (0.5f64..2.0, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| C64::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn framed_composition_is_associative([a, b, c] in chain()) {
        let left = compose_framed(&compose_framed(&c, &b).unwrap(), &a).unwrap();
        let right = compose_framed(&c, &compose_framed(&b, &a).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn sigma_is_sl2_invariant(g in sl2(), a in line(), b in line(), c in line()) {
        let s = wall_sigma(a, b, c).unwrap();
        prop_assert_eq!(wall_sigma(apply(g, a), apply(g, b), apply(g, c)).unwrap(), s);
        prop_assert_eq!(wall_sigma(b, a, c).unwrap(), -s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dimension_is_tree_independent(t in 0usize..4, genus in 0usize..4, raw in prop::collection::vec(0usize..5, 0..3)) {
        let bd = theory(t);
        let n = bd.labels.len();
        let boundary: Vec<usize> = raw.into_iter().map(|x| x % n).collect();
        let a = verlinde_dim_with(&bd.labels, &bd.dims, genus, &boundary, PantsTree::Caterpillar);
        let b = verlinde_dim_with(&bd.labels, &bd.dims, genus, &boundary, PantsTree::Pendant);
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn relations_survive_basis_change(t in 0usize..4, pick in 0usize..64, g in gauge()) {
        let bd = theory(t);
        let triples = non_unit_triples(bd);
        let tri = triples[pick % triples.len()];
        let moved = bd.change_basis(tri, &CMat::from_element(1, 1, g)).unwrap();
        let bad: Vec<String> = run_all(&moved).iter().filter(|r| !r.pass).map(|r| r.to_string()).collect();
        prop_assert!(bad.is_empty(), "{:?} at {:?}: {:?}", NAMES[t], tri, bad);
        let a = s_lambda_main(bd, 0, None, MainForm::Theorem, CofVariant::Statement).unwrap();
        let b = s_lambda_main(&moved, 0, None, MainForm::Theorem, CofVariant::Statement).unwrap();
        let w = s_from_twist_sandwich(&moved, 0, CofVariant::Statement).unwrap();
        prop_assert!(max_diff(&a.m, &b.m) < 1e-9);
        prop_assert!(max_diff(&b.m, &w.m) < 1e-9);
    }

    #[test]
    fn reconstruction_is_gauge_independent(t in 0usize..4, pick in 0usize..64, g in gauge()) {
        let bd = theory(t);
        let triples = non_unit_triples(bd);
        let tri = triples[pick % triples.len()];
        let bare = bd.change_basis(tri, &CMat::from_element(1, 1, g)).unwrap().with_s(None);
        let rec = reconstruct_s0(&bare).unwrap();
        prop_assert!(max_diff(&rec.s, bd.s.as_ref().unwrap()) < 1e-8);
    }

    #[test]
    fn gauged_documents_round_trip(t in 0usize..4, pick in 0usize..64, g in gauge()) {
        let bd = theory(t);
        let triples = non_unit_triples(bd);
        let moved = bd.change_basis(triples[pick % triples.len()], &CMat::from_element(1, 1, g)).unwrap();
        prop_assert!(load_str(&to_json_string(&moved)).unwrap() == moved);
    }
}
