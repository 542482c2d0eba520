//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::f64::consts::SQRT_2;
use std::time::{Duration, Instant};

use jordan_info::audit::audit_real_embedding;
use jordan_info::bregman::{
    check_bregman_identity_suite, check_monotonicity, check_statistical_locality, check_sufficiency,
    explore_additivity_conjecture, locality_configuration, BregmanGenerator, Generator,
};
use jordan_info::multipartite::{
    check_additivity_suite, check_data_processing, check_marginal_identity_suite, check_separoid,
};
use jordan_info::nonlocality::{
    chsh_value, max_deterministic_chsh, maximize_quantum_chsh, pr_box, StrategyFamily,
};
use jordan_info::entropy::fine_grained_entropy_bound;
use jordan_info::state_space::random::{random_state, trial_seed};
use jordan_info::state_space::{CompositeLayout, State};
use jordan_info::verdict::SuiteConfig;
use jordan_info::Algebra;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed <= Duration::from_secs(limit_secs)
}

fn entropy_equality() -> Outcome {
    let start = Instant::now();
    let algebras = [
        Algebra::complex(2),
        Algebra::complex(3),
        Algebra::complex(4),
        Algebra::real(3),
        Algebra::quaternion(2),
        Algebra::spin(3),
    ];
    let mut worst_gap: f64 = 0.0;
    let mut worst_margin = f64::INFINITY;
    let mut violations = 0;
    for (k, alg) in algebras.iter().enumerate() {
        for i in 0..100u64 {
            let seed = trial_seed(1000 + k as u64, i);
            // a quarter of the states are rank deficient
            let cap = (i % 4 == 0).then(|| 1 + (i as usize / 4) % alg.rank());
            let s = random_state(alg, cap, seed);
            let r = match fine_grained_entropy_bound(&s, 200, seed ^ 0x5eed) {
                Ok(r) => r,
                Err(e) => return outcome(false, format!("{alg}: {e}")),
            };
            worst_gap = worst_gap
                .max((r.spectral - r.decomposition).abs())
                .max((r.spectral - r.spectral_measurement).abs())
                .max((r.spectral - r.fine_grained_upper).abs());
            worst_margin = worst_margin.min(r.worst_sampled_margin);
            violations += r.lower_bound_violations;
        }
    }
    let t = start.elapsed();
    outcome(
        worst_gap <= 1e-9 && worst_margin >= -1e-9 && violations == 0 && within(t, 30),
        format!("max gap {worst_gap:.2e}, min sampled margin {worst_margin:.2e}, {violations} violations, {t:.2?}"),
    )
}

fn locality_value() -> Outcome {
    let algebras = [
        Algebra::complex(3),
        Algebra::complex(4),
        Algebra::real(3),
        Algebra::quaternion(2),
        Algebra::spin(3),
        Algebra::classical(4),
    ];
    let ts: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
    let mut worst: f64 = 0.0;
    for alg in &algebras {
        for i in 0..50u64 {
            let conf = match locality_configuration(alg, trial_seed(2000, i)) {
                Ok(c) => c,
                Err(e) => return outcome(false, format!("{alg}: {e}")),
            };
            for &t in &ts {
                for sigma in [&conf.sigma1, &conf.sigma2] {
                    let mix = State::mixture(&[(1.0 - t, &conf.rho), (t, sigma)]).unwrap();
                    let d = BregmanGenerator::NegEntropy
                        .divergence(conf.rho.element(), mix.element())
                        .unwrap();
                    worst = worst.max((d + (1.0 - t).ln()).abs());
                }
            }
        }
    }
    outcome(worst <= 1e-8, format!("max |D + ln(1-t)| = {worst:.2e} over 6 algebras x 50 triples x 9 values of t"))
}

fn builtin_generators() -> Vec<BregmanGenerator> {
    vec![
        BregmanGenerator::NegEntropy,
        BregmanGenerator::TracePower { p: 2 },
        BregmanGenerator::TracePower { p: 3 },
        BregmanGenerator::TracePower { p: 4 },
        BregmanGenerator::AffinePlusEntropy { c: 1.7, affine_seed: 11 },
        BregmanGenerator::Family { entropy: 0.5, square: 0.3, cube: 0.2, affine_seed: Some(4) },
    ]
}

fn bregman_identity() -> Outcome {
    let cfg = SuiteConfig::new(500, 3000).with_tol(1e-9);
    let mut worst: f64 = 0.0;
    let mut failed = Vec::new();
    for alg in [Algebra::complex(3), Algebra::spin(3), Algebra::quaternion(2)] {
        for g in builtin_generators() {
            match check_bregman_identity_suite(&g, &alg, &cfg) {
                Ok(v) => {
                    worst = worst.max(v.worst_violation);
                    if !v.pass {
                        failed.push(format!("{g} on {alg}"));
                    }
                }
                Err(e) => failed.push(format!("{g} on {alg}: {e}")),
            }
        }
    }
    outcome(failed.is_empty(), format!("max residual {worst:.2e}; failing: {failed:?}"))
}

fn monotonicity() -> Outcome {
    let cfg = SuiteConfig::new(1000, 4000);
    let mut detail = Vec::new();
    let mut entropy_ok = true;
    let mut tp2_witnesses = 0;
    for alg in [Algebra::complex(2), Algebra::complex(3)] {
        let neg = check_monotonicity(&BregmanGenerator::NegEntropy, &alg, &cfg).unwrap();
        entropy_ok &= neg.pass;
        let tp2 = check_monotonicity(&BregmanGenerator::TracePower { p: 2 }, &alg, &cfg).unwrap();
        tp2_witnesses += tp2.witnesses.len();
        detail.push(format!(
            "{alg}: neg-entropy max increase {:.2e}, trace-power:2 {} violations",
            neg.worst_violation, tp2.failures
        ));
    }
    outcome(entropy_ok && tp2_witnesses > 0, detail.join("; "))
}

fn additivity() -> Outcome {
    let cfg = SuiteConfig::new(500, 5000);
    let gens = [
        BregmanGenerator::NegEntropy,
        BregmanGenerator::AffinePlusEntropy { c: 2.0, affine_seed: 9 },
    ];
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut failed = Vec::new();
    for layout in ["C2x2", "C2x3", "R2x2"] {
        let layout: CompositeLayout = layout.parse().unwrap();
        for g in &gens {
            let add = check_additivity_suite(g, &layout, &cfg).unwrap();
            worst = worst.max(add.worst_violation);
            if !add.pass {
                failed.push(format!("additivity {g} on {layout}"));
            }
        }
        if layout.to_string() != "R2x2" {
            let m = check_marginal_identity_suite(&BregmanGenerator::NegEntropy, &layout, &cfg).unwrap();
            worst = worst.max(m.worst_violation);
            if !m.pass {
                failed.push(format!("marginal identity on {layout}"));
            }
        }
    }
    outcome(failed.is_empty(), format!("max residual {worst:.2e}; failing: {failed:?}"))
}

fn separoid() -> Outcome {
    let start = Instant::now();
    let quantum: CompositeLayout = "C2x2x2x2".parse().unwrap();
    let q = check_separoid(&BregmanGenerator::NegEntropy, &quantum, &SuiteConfig::new(200, 6000)).unwrap();
    let classical: CompositeLayout = "P2x2x2x2".parse().unwrap();
    let c = check_separoid(
        &BregmanGenerator::NegEntropy,
        &classical,
        &SuiteConfig::new(200, 6001).with_tol(1e-10),
    )
    .unwrap();
    let t = start.elapsed();
    outcome(
        q.pass() && c.chain_rule.pass && within(t, 120),
        format!(
            "4 qubits: min I(A;B|C) {:.2e}, symmetry {:.2e}, chain {:.2e}; classical chain {:.2e}; {} undefined; {t:.2?}",
            -q.positivity.worst_violation,
            q.symmetry.worst_violation,
            q.chain_rule.worst_violation,
            c.chain_rule.worst_violation,
            q.undefined + c.undefined,
        ),
    )
}

fn data_processing() -> Outcome {
    let layout: CompositeLayout = "C2x2".parse().unwrap();
    let v = check_data_processing(&BregmanGenerator::NegEntropy, &layout, None, &SuiteConfig::new(1000, 7000)).unwrap();
    outcome(v.pass, format!("max increase of I(A;B) {:.2e}", v.worst_violation))
}

fn hierarchy() -> Outcome {
    let mut gens = builtin_generators();
    gens.push(BregmanGenerator::Family { entropy: 1.0, square: 0.0, cube: 0.0, affine_seed: Some(2) });
    gens.push(BregmanGenerator::Family { entropy: 0.2, square: 1.0, cube: 0.0, affine_seed: None });
    gens.push(BregmanGenerator::Family { entropy: 1.0, square: 0.0, cube: 0.01, affine_seed: None });
    let mut inversions = Vec::new();
    let mut table = Vec::new();
    for alg in [Algebra::complex(2), Algebra::complex(3), Algebra::classical(3), Algebra::spin(3)] {
        let cfg = SuiteConfig::new(200, 8000);
        for g in &gens {
            let m = check_monotonicity(g, &alg, &cfg).unwrap().pass;
            let s = check_sufficiency(g, &alg, &cfg).unwrap().pass;
            let l = check_statistical_locality(g, &alg, &cfg).unwrap().pass;
            if (m && !s) || (s && !l) {
                inversions.push(format!("{g} on {alg}: mono={m} suff={s} local={l}"));
            }
            table.push(u8::from(m) + u8::from(s) + u8::from(l));
        }
    }
    let full = table.iter().filter(|x| **x == 3).count();
    outcome(
        inversions.is_empty(),
        format!("{} generator/algebra pairs, {full} pass all three; inversions: {inversions:?}", table.len()),
    )
}

fn chsh() -> Outcome {
    let start = Instant::now();
    let det = max_deterministic_chsh();
    let pr = chsh_value(&pr_box());
    let q = maximize_quantum_chsh(9000, 10, StrategyFamily::MaximallyEntangled).unwrap().value;
    let t = start.elapsed();
    let tsirelson = 2.0 * SQRT_2;
    outcome(
        det == 2.0 && pr == 4.0 && (q - 2.828427).abs() <= 1e-6 && q <= tsirelson + 1e-7 && within(t, 5),
        format!("deterministic {det}, quantum {q:.9}, PR {pr}, {t:.2?}"),
    )
}

fn dimension_audit() -> Outcome {
    let a = audit_real_embedding(40, 10_000).unwrap();
    outcome(
        a.ambient_state_dim == 9 && a.product_slice_dim == 8,
        format!("ambient {} product slice {}", a.ambient_state_dim, a.product_slice_dim),
    )
}

fn explorer() -> Outcome {
    let layout: CompositeLayout = "C2x2".parse().unwrap();
    let r = match explore_additivity_conjecture(50, &layout, &SuiteConfig::new(30, 11_000)) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("explorer failed: {e}")),
    };
    let entropy_members: Vec<_> = r.generators.iter().filter(|g| g.entropy_affine).collect();
    let classified = entropy_members
        .iter()
        .all(|g| g.monotonicity.pass && g.additivity.pass);
    let json_ok = serde_json::to_string(&r).is_ok();
    let c = r.contingency;
    outcome(
        r.generators.len() == 50 && !entropy_members.is_empty() && classified && json_ok,
        format!(
            "{} entropy-affine members all monotone+additive: {classified}; table [m+a {}, m-a {}, -m+a {}, -m-a {}], {} potential counterexamples",
            entropy_members.len(),
            c.monotone_additive,
            c.monotone_not_additive,
            c.not_monotone_additive,
            c.not_monotone_not_additive,
            r.counterexamples.len()
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("entropy equality", entropy_equality),
        ("statistical locality value", locality_value),
        ("bregman identity", bregman_identity),
        ("monotonicity", monotonicity),
        ("additivity and marginal identity", additivity),
        ("separoid", separoid),
        ("data processing", data_processing),
        ("hierarchy ordering", hierarchy),
        ("chsh landmarks", chsh),
        ("real embedding dimension audit", dimension_audit),
        ("conjecture explorer", explorer),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!("{} {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
