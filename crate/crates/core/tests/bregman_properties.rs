use jordan_info::bregman::{
    bregman_divergence, check_locality_theorem, check_monotonicity, free_energy, information_divergence,
    monotonicity_trial, neg_entropy, regret, Action, BregmanGenerator, Generator,
};
use jordan_info::jordan::{Domain, C64};
use jordan_info::state_space::random::{self, random_channel, random_element, random_state, random_state_with};
use jordan_info::state_space::State;
use jordan_info::verdict::SuiteConfig;
use jordan_info::{Algebra, JordanElement};
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;

fn generators() -> Vec<BregmanGenerator> {
    vec![
        BregmanGenerator::NegEntropy,
        BregmanGenerator::TracePower { p: 2 },
        BregmanGenerator::TracePower { p: 3 },
        BregmanGenerator::TracePower { p: 5 },
        BregmanGenerator::AffinePlusEntropy { c: 0.7, affine_seed: 3 },
        BregmanGenerator::Family { entropy: 0.4, square: 1.1, cube: 0.3, affine_seed: Some(8) },
    ]
}

fn generator() -> impl Strategy<Value = BregmanGenerator> {
    prop::sample::select(generators())
}

fn algebra() -> impl Strategy<Value = Algebra> {
    prop::sample::select(&["C2", "C3", "R3", "H2", "S3", "P3", "C2+P2"][..]).prop_map(|s| s.parse::<Algebra>().unwrap())
}

/// `tr ρ(ln ρ − ln σ)` through nalgebra's Hermitian eigensolver.
fn reference_relative_entropy(rho: &State, sigma: &State) -> f64 {
    let ln = |m: DMatrix<C64>| {
        let e = SymmetricEigen::new(m);
        let d = DMatrix::from_diagonal(&e.eigenvalues.map(|l| C64::new(l.ln(), 0.0)));
        &e.eigenvectors * d * e.eigenvectors.adjoint()
    };
    let r = rho.element().to_matrix().unwrap();
    let diff = ln(r.clone()) - ln(sigma.element().to_matrix().unwrap());
    (r * diff).trace().re
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn divergences_are_nonnegative(g in generator(), alg in algebra(), seed: u64) {
        let mut rng = random::rng(seed);
        let rho = random_state_with(&alg, Some(1 + (seed % 3) as usize), &mut rng);
        let sigma = random_state_with(&alg, None, &mut rng);
        let d = bregman_divergence(&g, &rho, &sigma).unwrap();
        prop_assert!(d >= -1e-10, "{g}: {d}");
        prop_assert!(bregman_divergence(&g, &sigma, &sigma).unwrap().abs() < 1e-10);
    }

    #[test]
    fn generators_are_convex(g in generator(), alg in algebra(), seed: u64, t in 0.0..1.0f64) {
        let mut rng = random::rng(seed);
        let a = random_state_with(&alg, None, &mut rng);
        let b = random_state_with(&alg, Some(1), &mut rng);
        let mix = State::mixture(&[(t, &a), (1.0 - t, &b)]).unwrap();
        let lhs = g.value(mix.element()).unwrap();
        let rhs = t * g.value(a.element()).unwrap() + (1.0 - t) * g.value(b.element()).unwrap();
        prop_assert!(lhs <= rhs + 1e-9);
    }

    /// Directional derivatives by central differences, step 1e-5.
    #[test]
    fn gradients_match_finite_differences(g in generator(), alg in algebra(), seed: u64) {
        let mut rng = random::rng(seed);
        let x = random_state_with(&alg, None, &mut rng).into_element()
            .checked_add(&JordanElement::unit(&alg).scaled(0.05)).unwrap();
        let dir = random_element(&alg, &mut rng);
        let h = 1e-5;
        let fd = (g.value(&x.checked_add(&dir.scaled(h)).unwrap()).unwrap()
            - g.value(&x.checked_sub(&dir.scaled(h)).unwrap()).unwrap()) / (2.0 * h);
        let exact = g.gradient(&x).unwrap().inner_product(&dir).unwrap();
        prop_assert!((fd - exact).abs() <= 1e-5 * exact.abs().max(1.0), "{g}: {fd} vs {exact}");
    }

    /// `d/dt tr f(A + tB)` at zero equals `⟨f′(A), B⟩`.
    #[test]
    fn trace_derivative_lemma(alg in algebra(), seed: u64) {
        let mut rng = random::rng(seed);
        let a = random_state_with(&alg, None, &mut rng).into_element()
            .checked_add(&JordanElement::unit(&alg).scaled(0.1)).unwrap();
        let b = random_element(&alg, &mut rng);
        let h = 1e-5;
        for (f, df) in [
            (Box::new(|x: f64| x * x.ln()) as Box<dyn Fn(f64) -> f64>, Box::new(|x: f64| x.ln() + 1.0) as Box<dyn Fn(f64) -> f64>),
            (Box::new(f64::exp), Box::new(f64::exp)),
            (Box::new(|x: f64| x.powi(3)), Box::new(|x: f64| 3.0 * x * x)),
        ] {
            let tr = |t: f64| a.checked_add(&b.scaled(t)).unwrap().apply_function(&f, Domain::POSITIVE).unwrap().trace();
            let fd = (tr(h) - tr(-h)) / (2.0 * h);
            let exact = a.apply_function(&df, Domain::POSITIVE).unwrap().inner_product(&b).unwrap();
            prop_assert!((fd - exact).abs() < 1e-6);
        }
    }

    #[test]
    fn information_divergence_matches_reference(n in 2usize..4, seed: u64) {
        let alg = Algebra::complex(n);
        let rho = random_state(&alg, None, seed);
        let sigma = random_state(&alg, None, seed ^ 0xabc);
        let d = information_divergence(rho.element(), sigma.element()).unwrap();
        prop_assert!((d - reference_relative_entropy(&rho, &sigma)).abs() < 1e-9);
        let via_bregman = bregman_divergence(&BregmanGenerator::NegEntropy, &rho, &sigma).unwrap();
        prop_assert!((d - via_bregman).abs() < 1e-12);
    }

    #[test]
    fn classical_divergence_is_kullback_leibler(p in prop::collection::vec(0.01..1.0f64, 4), q in prop::collection::vec(0.01..1.0f64, 4)) {
        let norm = |v: Vec<f64>| { let s: f64 = v.iter().sum(); v.into_iter().map(|x| x / s).collect::<Vec<_>>() };
        let (p, q) = (norm(p), norm(q));
        let alg = Algebra::classical(4);
        let d = information_divergence(
            State::diagonal(&alg, &p).unwrap().element(),
            State::diagonal(&alg, &q).unwrap().element(),
        ).unwrap();
        let kl: f64 = p.iter().zip(&q).map(|(a, b)| a * (a / b).ln()).sum();
        prop_assert!((d - kl).abs() < 1e-12);
    }

    /// The gradient of negative entropy is `ln σ + 1`, and the Bregman formula
    /// gives `⟨ρ, ln ρ − ln σ⟩` on states.
    #[test]
    fn neg_entropy_gradient(alg in algebra(), seed: u64) {
        let mut rng = random::rng(seed);
        let sigma = random_state_with(&alg, None, &mut rng);
        let rho = random_state_with(&alg, None, &mut rng);
        let ln = sigma.element().apply_function(f64::ln, Domain::POSITIVE).unwrap();
        let grad = BregmanGenerator::NegEntropy.gradient(sigma.element()).unwrap();
        prop_assert!(grad.distance(&ln.checked_add(&JordanElement::unit(&alg)).unwrap()) < 1e-10);
        let rho_ln = rho.element().apply_function(f64::ln, Domain::POSITIVE).unwrap();
        let formula = rho.element().inner_product(&rho_ln.checked_sub(&ln).unwrap()).unwrap();
        let d = information_divergence(rho.element(), sigma.element()).unwrap();
        prop_assert!((d - formula).abs() < 1e-9);
    }

    /// The regret of the tangent action at `σ` is the divergence from `σ`.
    #[test]
    fn regret_of_tangent_action_is_divergence(g in generator(), alg in algebra(), seed: u64) {
        let mut rng = random::rng(seed);
        let sigma = random_state_with(&alg, None, &mut rng);
        let rho = random_state_with(&alg, None, &mut rng);
        let a = Action::tangent(&g, &sigma).unwrap();
        let r = regret(&g, &rho, &a, 0.0).unwrap();
        prop_assert!((r - bregman_divergence(&g, &rho, &sigma).unwrap()).abs() < 1e-9);
        // tangent actions sit below the generator
        let others: Vec<Action> = (0..4).map(|_| Action::tangent(&g, &random_state_with(&alg, None, &mut rng)).unwrap()).collect();
        prop_assert!(free_energy(&others, &rho).unwrap() <= g.value(rho.element()).unwrap() + 1e-9);
    }

    #[test]
    fn neg_entropy_is_monotone_under_channels(n in 2usize..4, env in 1usize..4, seed: u64) {
        let alg = Algebra::complex(n);
        let phi = random_channel(&alg, env, seed).unwrap();
        let mut rng = random::rng(seed ^ 1);
        let rho = random_state_with(&alg, None, &mut rng);
        let sigma = random_state_with(&alg, None, &mut rng);
        let before = information_divergence(rho.element(), sigma.element()).unwrap();
        let after = information_divergence(&phi.apply(rho.element()).unwrap(), &phi.apply(sigma.element()).unwrap()).unwrap();
        prop_assert!(after <= before + 1e-10);
    }
}

#[test]
fn support_mismatch_is_infinite() {
    let alg = Algebra::classical(2);
    let rho = State::diagonal(&alg, &[0.5, 0.5]).unwrap();
    let sigma = State::diagonal(&alg, &[1.0, 0.0]).unwrap();
    assert_eq!(information_divergence(rho.element(), sigma.element()).unwrap(), f64::INFINITY);
    assert!(information_divergence(sigma.element(), rho.element()).unwrap().is_finite());
    assert!(neg_entropy(&JordanElement::diagonal(&alg, &[1.0, -0.5]).unwrap()).is_err());
}

/// Failed trials replay from their stored seed.
#[test]
fn witnesses_replay() {
    let g = BregmanGenerator::TracePower { p: 2 };
    let alg = Algebra::complex(3);
    let v = check_monotonicity(&g, &alg, &SuiteConfig::new(60, 21)).unwrap();
    assert!(!v.witnesses.is_empty());
    for w in &v.witnesses {
        let again = monotonicity_trial(&g, &alg, w.seed).unwrap();
        assert_eq!(again.violation, w.violation);
        assert_eq!(again.detail, w.detail);
    }
}

/// `tr σ²` gives the squared Hilbert–Schmidt distance, which a stochastic
/// map can increase once there are three outcomes.
#[test]
fn trace_square_counterexample_on_three_points() {
    let alg = Algebra::classical(3);
    let g = BregmanGenerator::TracePower { p: 2 };
    let p = State::diagonal(&alg, &[0.5, 0.5, 0.0]).unwrap();
    let q = State::diagonal(&alg, &[0.0, 0.0, 1.0]).unwrap();
    // e₂ ↦ e₁, e₁ and e₃ fixed
    let m = DMatrix::from_row_slice(3, 3, &[1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
    let phi = jordan_info::state_space::Affinity::new(alg.clone(), alg, m).unwrap();
    let before = bregman_divergence(&g, &p, &q).unwrap();
    let after = bregman_divergence(&g, &phi.apply_state(&p).unwrap(), &phi.apply_state(&q).unwrap()).unwrap();
    assert!((before - 1.5).abs() < 1e-12);
    assert!((after - 2.0).abs() < 1e-12);
}

/// On two outcomes every difference of states is `s·(1, −1)`, and stochastic
/// maps shrink `|s|`, so the same generator is monotone there.
#[test]
fn trace_square_is_monotone_on_qubits() {
    let v = check_monotonicity(&BregmanGenerator::TracePower { p: 2 }, &Algebra::complex(2), &SuiteConfig::new(300, 4)).unwrap();
    assert!(v.pass, "{:e}", v.worst_violation);
}

#[test]
fn locality_fit_recovers_weight() {
    let g = BregmanGenerator::AffinePlusEntropy { c: 1.9, affine_seed: 5 };
    let fit = check_locality_theorem(&g, &Algebra::real(3), 40, 2).unwrap();
    assert!((fit.c - 1.9).abs() < 1e-8 && fit.residual < 1e-8);
}

#[test]
fn generator_names_round_trip() {
    for g in generators() {
        let back: BregmanGenerator = g.to_string().parse().unwrap();
        assert_eq!(back, g);
    }
}
