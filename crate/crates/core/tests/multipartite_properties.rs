use std::f64::consts::LN_2;

use jordan_info::bregman::BregmanGenerator;
use jordan_info::entropy::spectral_entropy;
use jordan_info::multipartite::{
    bell_state, check_additivity, classical_cmi, conditional_mutual_information,
    conditional_mutual_information_of, data_processing_gap, mutual_information, separoid_sample,
    PartitionedState,
};
use jordan_info::state_space::random::{self, random_channel, random_state, random_state_with};
use jordan_info::state_space::CompositeLayout;
use jordan_info::Algebra;
use proptest::prelude::*;

const NEG: BregmanGenerator = BregmanGenerator::NegEntropy;

fn table(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.001..1.0f64, n).prop_map(|v| {
        let s: f64 = v.iter().sum();
        v.into_iter().map(|x| x / s).collect()
    })
}

/// `Σ p(abc) ln[p(abc) p(c) / (p(ac) p(bc))]` for a 2×3×2 table indexed `[a][b][c]`.
fn reference_cmi(p: &[f64]) -> f64 {
    let at = |a: usize, b: usize, c: usize| p[a * 6 + b * 2 + c];
    let pc = |c: usize| (0..2).flat_map(|a| (0..3).map(move |b| (a, b))).map(|(a, b)| at(a, b, c)).sum::<f64>();
    let pac = |a: usize, c: usize| (0..3).map(|b| at(a, b, c)).sum::<f64>();
    let pbc = |b: usize, c: usize| (0..2).map(|a| at(a, b, c)).sum::<f64>();
    let mut total = 0.0;
    for a in 0..2 {
        for b in 0..3 {
            for c in 0..2 {
                let x = at(a, b, c);
                total += x * (x * pc(c) / (pac(a, c) * pbc(b, c))).ln();
            }
        }
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn classical_cmi_matches_reference(p in table(12)) {
        let s = PartitionedState::classical(&[2, 3, 2], &p).unwrap();
        let expected = reference_cmi(&p);
        let via_divergence = conditional_mutual_information(&NEG, &s, "A", "B", "C").unwrap().value.unwrap();
        prop_assert!((via_divergence - expected).abs() < 1e-10);
        prop_assert!((classical_cmi(&s, &[0], &[1], &[2]).unwrap() - expected).abs() < 1e-10);
        let q = s.classical_as_quantum().unwrap();
        let via_quantum = conditional_mutual_information(&NEG, &q, "A", "B", "C").unwrap().value.unwrap();
        prop_assert!((via_quantum - expected).abs() < 1e-10);
    }

    /// `I(A;B) = S(A) + S(B) − S(AB)` for negative entropy.
    #[test]
    fn mutual_information_is_entropy_difference(seed: u64, cap in prop::option::of(1usize..4)) {
        let layout: CompositeLayout = "C2x3".parse().unwrap();
        let st = random_state(&layout.composite_algebra(), cap, seed);
        let s = PartitionedState::with_default_labels(layout.clone(), st.clone()).unwrap();
        let i = mutual_information(&NEG, &s, "A", "B").unwrap();
        let h = |k: usize| spectral_entropy(&layout.marginal(&st, &[k]).unwrap()).unwrap();
        let expected = h(0) + h(1) - spectral_entropy(&st).unwrap();
        prop_assert!((i - expected).abs() < 1e-9);
        prop_assert!(i >= -1e-10);
    }

    #[test]
    fn cmi_value_is_component_difference(seed: u64) {
        let layout: CompositeLayout = "C2x2x2".parse().unwrap();
        let st = random_state(&layout.composite_algebra(), None, seed);
        let s = PartitionedState::with_default_labels(layout, st).unwrap();
        let r = conditional_mutual_information_of(&NEG, &s, &[0], &[1], &[2]).unwrap();
        let v = r.value.unwrap();
        prop_assert!((v - (r.components[0] - r.components[1] - r.components[2])).abs() < 1e-10);
        prop_assert!(v >= -1e-9);
    }

    #[test]
    fn classical_separoid_axioms(p in table(16), shuffle in Just([0usize, 1, 2, 3]).prop_shuffle()) {
        let s = PartitionedState::classical(&[2, 2, 2, 2], &p).unwrap();
        let r = separoid_sample(&NEG, &s, shuffle.to_vec()).unwrap();
        prop_assert!(r.cmi.unwrap() >= -1e-12);
        prop_assert!(r.symmetry.unwrap() < 1e-12);
        prop_assert!(r.chain.unwrap().abs() < 1e-10);
    }

    #[test]
    fn local_channels_do_not_increase_mutual_information(seed: u64, env in 1usize..4, bell: bool) {
        let layout: CompositeLayout = "C2x2".parse().unwrap();
        let s = if bell {
            bell_state()
        } else {
            PartitionedState::with_default_labels(layout.clone(), random_state(&layout.composite_algebra(), None, seed)).unwrap()
        };
        let phi = random_channel(&Algebra::complex(2), env, seed ^ 9).unwrap();
        prop_assert!(data_processing_gap(&NEG, &s, 1, &phi).unwrap() <= 1e-9);
    }

    #[test]
    fn additivity_on_products(seed: u64, layout in prop::sample::select(&["C2x2", "C2x3", "P2x3", "R2x2"][..])) {
        let layout: CompositeLayout = layout.parse().unwrap();
        let mut rng = random::rng(seed);
        let (fa, fb) = (&layout.factors()[0], &layout.factors()[1]);
        let ra = random_state_with(fa, None, &mut rng);
        let rb = random_state_with(fb, None, &mut rng);
        let sa = random_state_with(fa, None, &mut rng);
        let sb = random_state_with(fb, None, &mut rng);
        prop_assert!(check_additivity(&NEG, &ra, &rb, &sa, &sb, &layout).unwrap() < 1e-9);
        // a non-entropic generator is not additive in general
        let r = check_additivity(&BregmanGenerator::TracePower { p: 2 }, &ra, &rb, &sa, &sb, &layout).unwrap();
        prop_assert!(r.is_finite());
    }
}

#[test]
fn bell_state_landmarks() {
    let s = bell_state();
    assert!((mutual_information(&NEG, &s, "A", "B").unwrap() - 2.0 * LN_2).abs() < 1e-10);
    let m = s.marginal(&[0]).unwrap();
    assert!((spectral_entropy(&m).unwrap() - LN_2).abs() < 1e-12);
}

#[test]
fn cmi_with_empty_condition_is_mutual_information() {
    let layout: CompositeLayout = "C2x2".parse().unwrap();
    let s = PartitionedState::with_default_labels(layout.clone(), random_state(&layout.composite_algebra(), None, 3)).unwrap();
    let i = mutual_information(&NEG, &s, "A", "B").unwrap();
    let c = conditional_mutual_information(&NEG, &s, "A", "B", "").unwrap().value.unwrap();
    assert!((i - c).abs() < 1e-12);
}

#[test]
fn overlapping_subsystems_are_rejected() {
    let s = PartitionedState::classical(&[2, 2, 2], &[0.125; 8]).unwrap();
    assert!(conditional_mutual_information(&NEG, &s, "A", "AB", "C").is_err());
    // the Shannon form accepts overlaps: I(A;A|C) = H(A|C)
    let h = classical_cmi(&s, &[0], &[0], &[2]).unwrap();
    assert!((h - LN_2).abs() < 1e-12);
}
