use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{check_monotonicity, BregmanGenerator};
use crate::error::Result;
use crate::multipartite::check_additivity_suite;
use crate::state_space::random::{self, dirichlet};
use crate::state_space::CompositeLayout;
use crate::verdict::{PropertyVerdict, SuiteConfig};

/// Monotonicity and additivity verdicts of one sampled generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorVerdict {
    pub generator: BregmanGenerator,
    pub entropy_affine: bool,
    pub monotonicity: PropertyVerdict,
    pub additivity: PropertyVerdict,
    /// Monotone on the sample but not additive.
    pub potential_counterexample: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplorerReport {
    pub layout: String,
    pub config: SuiteConfig,
    /// Counts indexed `[monotone][additive]`, `true` meaning pass.
    pub contingency: Contingency,
    pub generators: Vec<GeneratorVerdict>,
    pub counterexamples: Vec<GeneratorVerdict>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contingency {
    pub monotone_additive: usize,
    pub monotone_not_additive: usize,
    pub not_monotone_additive: usize,
    pub not_monotone_not_additive: usize,
}

/// The first members are fixed landmarks; the rest mix negative entropy,
/// `tr σ²` and `tr σ³` with simplex weights, and half carry an affine term.
fn family<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Vec<BregmanGenerator> {
    let mut out = vec![
        BregmanGenerator::NegEntropy,
        BregmanGenerator::AffinePlusEntropy { c: 2.5, affine_seed: 1 },
        BregmanGenerator::TracePower { p: 2 },
        BregmanGenerator::TracePower { p: 3 },
    ];
    out.truncate(count);
    while out.len() < count {
        let w = dirichlet(3, rng);
        // pin a coordinate to zero now and then so the faces of the simplex are visited
        let mut w = [w[0], w[1], w[2]];
        match rng.gen_range(0..6) {
            0 => w = [1.0, 0.0, 0.0],
            1 => w[1] = 0.0,
            2 => w[2] = 0.0,
            _ => {}
        }
        let total: f64 = w.iter().sum();
        let scale = rng.gen_range(0.5..3.0) / total;
        out.push(BregmanGenerator::Family {
            entropy: w[0] * scale,
            square: w[1] * scale,
            cube: w[2] * scale,
            affine_seed: rng.gen_bool(0.5).then(|| rng.gen()),
        });
    }
    out
}

/// Samples `n_generators` generators and tests monotonicity on the composite
/// algebra of `layout` and additivity on `layout`. A generator that passes
/// monotonicity but fails additivity would contradict the conjecture that
/// monotone Bregman divergences are additive.
pub fn explore_additivity_conjecture(
    n_generators: usize,
    layout: &CompositeLayout,
    config: &SuiteConfig,
) -> Result<ExplorerReport> {
    let mut rng = random::rng(config.seed);
    let generators = family(n_generators, &mut rng);
    let algebra = layout.composite_algebra();
    let mut verdicts = Vec::with_capacity(generators.len());
    let mut table = Contingency::default();
    for (i, g) in generators.into_iter().enumerate() {
        let cfg = SuiteConfig {
            seed: config.trial_seed(i),
            ..*config
        };
        let mono = check_monotonicity(&g, &algebra, &cfg)?;
        let add = check_additivity_suite(&g, layout, &cfg)?;
        match (mono.pass, add.pass) {
            (true, true) => table.monotone_additive += 1,
            (true, false) => table.monotone_not_additive += 1,
            (false, true) => table.not_monotone_additive += 1,
            (false, false) => table.not_monotone_not_additive += 1,
        }
        verdicts.push(GeneratorVerdict {
            entropy_affine: g.is_entropy_affine(),
            potential_counterexample: mono.pass && !add.pass,
            generator: g,
            monotonicity: mono,
            additivity: add,
        });
    }
    let counterexamples = verdicts
        .iter()
        .filter(|v| v.potential_counterexample)
        .cloned()
        .collect();
    Ok(ExplorerReport {
        layout: layout.to_string(),
        config: *config,
        contingency: table,
        generators: verdicts,
        counterexamples,
    })
}
