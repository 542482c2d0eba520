//! Randomised checks of monotonicity, sufficiency, statistical locality and
//! the Bregman identity.
//!
//! Every suite draws trial `i` from the seed `trial_seed(master, i)`. The
//! three hierarchy suites share one [`LocalityConfiguration`] per trial seed:
//! the locality suite compares `D(ρ, (1−t)ρ + tσ₁)` with `D(ρ, (1−t)ρ + tσ₂)`,
//! and the sufficiency and monotonicity suites include the measure-and-prepare
//! maps that swap `σ₁` and `σ₂` while fixing `ρ`. A trial that breaks locality
//! therefore breaks the other two properties on the same seed.

use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::json;

use super::{check_bregman_identity, Generator};
use crate::entropy::random_fine_grained;
use crate::error::{Error, Result};
use crate::jordan::{Algebra, JordanElement, SimpleType};
use crate::json;
use crate::state_space::random::{self, dirichlet, random_element, random_state_with, trial_seed};
use crate::state_space::{channel_catalog, random_state_in_face, Affinity, State};
use crate::verdict::{run_trials, Property, PropertyVerdict, SuiteConfig, TrialOutcome};

/// Recovery maps must restore their states to this accuracy.
const RECOVERY_TOL: f64 = 1e-9;

/// `ρ` supported on a face `P`, two states `σ₁, σ₂` on the complementary
/// face `u − P`, and a mixing weight `t`.
#[derive(Debug, Clone)]
pub struct LocalityConfiguration {
    pub face: JordanElement,
    pub rho: State,
    pub sigma1: State,
    pub sigma2: State,
    pub t: f64,
}

impl LocalityConfiguration {
    /// `(1−t)ρ + tσ`.
    pub fn mix(&self, sigma: &State) -> Result<State> {
        State::mixture(&[(1.0 - self.t, &self.rho), (self.t, sigma)])
    }

    /// `π ↦ ⟨P, π⟩ρ + ⟨u − P, π⟩·target`: fixes `ρ` and sends the other mixture
    /// component to `target`.
    pub fn swap_map(&self, target: &State) -> Result<Affinity> {
        let unit = JordanElement::unit(self.face.algebra());
        let rest = unit.checked_sub(&self.face)?;
        Affinity::measure_prepare(&[self.face.clone(), rest], &[&self.rho, target])
    }
}

/// Draws the locality configuration of one trial seed. Needs rank at least 2.
pub fn locality_configuration(algebra: &Algebra, seed: u64) -> Result<LocalityConfiguration> {
    let rank = algebra.rank();
    if rank < 2 {
        return Err(Error::Unsupported(format!("{algebra} has no singular pairs of states")));
    }
    let mut rng = random::rng(seed);
    let mut frame: Vec<JordanElement> = random_element(algebra, &mut rng)
        .primitive_decomposition()?
        .into_iter()
        .map(|(_, p)| p)
        .collect();
    frame.shuffle(&mut rng);
    let k = rng.gen_range(1..rank);
    let mut face = JordanElement::zero(algebra);
    for p in &frame[..k] {
        face.axpy(1.0, p);
    }
    let rest = JordanElement::unit(algebra).checked_sub(&face)?;
    let cap = |rng: &mut random::TrialRng| if rng.gen_bool(0.5) { Some(1) } else { None };
    let c = cap(&mut rng);
    let rho = random_state_in_face(&face, c, &mut rng)?;
    let c = cap(&mut rng);
    let sigma1 = random_state_in_face(&rest, c, &mut rng)?;
    let c = cap(&mut rng);
    let sigma2 = random_state_in_face(&rest, c, &mut rng)?;
    let t = rng.gen_range(0.05..0.95);
    Ok(LocalityConfiguration {
        face,
        rho,
        sigma1,
        sigma2,
        t,
    })
}

/// `after − before`, with `∞ ≤ ∞` counted as no violation.
fn increase(before: f64, after: f64) -> f64 {
    if before == f64::INFINITY {
        f64::NEG_INFINITY
    } else {
        after - before
    }
}

/// `|a − b|`, zero when both are infinite.
fn gap(a: f64, b: f64) -> f64 {
    if a == f64::INFINITY && b == f64::INFINITY {
        0.0
    } else {
        (a - b).abs()
    }
}

fn divergence_of_images(f: &dyn Generator, phi: &Affinity, rho: &State, sigma: &State) -> Result<f64> {
    f.divergence(&phi.apply(rho.element())?, &phi.apply(sigma.element())?)
}

fn has_random_channels(algebra: &Algebra) -> bool {
    matches!(
        algebra.as_simple(),
        Some(SimpleType::ComplexHermitian(_)) | Some(SimpleType::Classical(_))
    )
}

fn restriction_note(algebra: &Algebra) -> Option<String> {
    (!has_random_channels(algebra)).then(|| {
        format!(
            "{algebra}: channels restricted to the explicit catalog, measure-and-prepare maps and swap maps"
        )
    })
}

/// Random measure-and-prepare channel on `algebra`.
fn random_measure_prepare(algebra: &Algebra, rng: &mut random::TrialRng) -> Result<Affinity> {
    let m = random_fine_grained(algebra, rng.gen_bool(0.5), rng)?;
    let outputs: Vec<State> = (0..m.len())
        .map(|_| {
            let cap = if rng.gen_bool(0.5) { Some(1) } else { None };
            random_state_with(algebra, cap, rng)
        })
        .collect();
    let effects: Vec<JordanElement> = m.outcomes().iter().map(|(_, t)| t.element().clone()).collect();
    Affinity::measure_prepare(&effects, &outputs.iter().collect::<Vec<_>>())
}

/// A pair of states on `algebra`: `ρ` of random rank, `σ` of full rank.
fn random_pair(algebra: &Algebra, rng: &mut random::TrialRng) -> (State, State) {
    let cap = if rng.gen_bool(0.5) {
        Some(rng.gen_range(1..=algebra.rank()))
    } else {
        None
    };
    (random_state_with(algebra, cap, rng), random_state_with(algebra, None, rng))
}

/// One monotonicity trial: the largest `D(Φρ, Φσ) − D(ρ, σ)` over the swap
/// maps of the trial's locality configuration, a random channel (complex and
/// classical algebras), a random measure-and-prepare channel and a random
/// catalog map.
pub fn monotonicity_trial(f: &dyn Generator, algebra: &Algebra, seed: u64) -> Result<TrialOutcome> {
    let mut parts = Vec::new();

    let conf = locality_configuration(algebra, seed)?;
    let m1 = conf.mix(&conf.sigma1)?;
    let m2 = conf.mix(&conf.sigma2)?;
    let d1 = f.divergence(conf.rho.element(), m1.element())?;
    let d2 = f.divergence(conf.rho.element(), m2.element())?;
    let to2 = conf.swap_map(&conf.sigma2)?;
    let to1 = conf.swap_map(&conf.sigma1)?;
    parts.push(("swap-forward".to_string(), increase(d1, divergence_of_images(f, &to2, &conf.rho, &m1)?)));
    parts.push(("swap-backward".to_string(), increase(d2, divergence_of_images(f, &to1, &conf.rho, &m2)?)));

    let mut rng = random::rng(trial_seed(seed, 1));
    let mut channels: Vec<(String, Affinity)> = Vec::new();
    if has_random_channels(algebra) {
        let env = rng.gen_range(1..=4);
        channels.push((
            format!("random-channel(env={env})"),
            random::random_channel_with(algebra, env, &mut rng)?,
        ));
    }
    channels.push(("measure-prepare".into(), random_measure_prepare(algebra, &mut rng)?));
    let catalog = channel_catalog(algebra, rng.gen())?;
    let entry = catalog.choose(&mut rng).expect("catalog is never empty");
    let (name, map) = match (&entry.recovery, rng.gen_bool(0.5)) {
        (Some(r), true) => (format!("{}-recovery", entry.name), r.clone()),
        _ => (entry.name.clone(), entry.forward.clone()),
    };
    channels.push((name, map));

    for (name, phi) in channels {
        let (rho, sigma) = random_pair(phi.source(), &mut rng);
        let before = f.divergence(rho.element(), sigma.element())?;
        let after = divergence_of_images(f, &phi, &rho, &sigma)?;
        parts.push((name, increase(before, after)));
    }

    let violation = parts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let detail = json!({
        "generator": f.describe(),
        "algebra": algebra.to_string(),
        "channels": parts.iter().map(|(n, v)| json!({"channel": n, "increase": json::value(*v)})).collect::<Vec<_>>(),
    });
    Ok(TrialOutcome::new(violation, detail))
}

/// One sufficiency trial: `|D(Φρ, Φσ) − D(ρ, σ)|` maximised over the swap
/// pair of the locality configuration and every catalog map with a recovery,
/// on states fixed by `Ψ ∘ Φ`.
pub fn sufficiency_trial(f: &dyn Generator, algebra: &Algebra, seed: u64) -> Result<TrialOutcome> {
    let mut parts = Vec::new();
    let conf = locality_configuration(algebra, seed)?;
    let m1 = conf.mix(&conf.sigma1)?;
    let phi = conf.swap_map(&conf.sigma2)?;
    let psi = conf.swap_map(&conf.sigma1)?;
    parts.push(("swap".to_string(), sufficient_gap(f, &phi, &psi, &conf.rho, &m1)?));

    let mut rng = random::rng(trial_seed(seed, 1));
    for entry in channel_catalog(algebra, rng.gen())? {
        let Some(recovery) = entry.recovery else { continue };
        let round = entry.forward.then(&recovery)?;
        let (r0, s0) = random_pair(entry.forward.source(), &mut rng);
        let rho = State::new(round.apply(r0.element())?)?;
        let sigma = State::new(round.apply(s0.element())?)?;
        parts.push((entry.name, sufficient_gap(f, &entry.forward, &recovery, &rho, &sigma)?));
    }

    let violation = parts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let detail = json!({
        "generator": f.describe(),
        "algebra": algebra.to_string(),
        "maps": parts.iter().map(|(n, v)| json!({"map": n, "gap": json::value(*v)})).collect::<Vec<_>>(),
    });
    Ok(TrialOutcome::new(violation, detail))
}

fn sufficient_gap(f: &dyn Generator, phi: &Affinity, psi: &Affinity, rho: &State, sigma: &State) -> Result<f64> {
    let round = phi.then(psi)?;
    for s in [rho, sigma] {
        let back = round.apply(s.element())?;
        if back.distance(s.element()) > RECOVERY_TOL {
            return Err(Error::InvalidInput(format!(
                "recovery map misses by {}",
                back.distance(s.element())
            )));
        }
    }
    let before = f.divergence(rho.element(), sigma.element())?;
    let after = divergence_of_images(f, phi, rho, sigma)?;
    Ok(gap(before, after))
}

/// One statistical-locality trial: `|D(ρ, (1−t)ρ+tσ₁) − D(ρ, (1−t)ρ+tσ₂)|`.
/// For entropy-affine generators `c·⟨σ, ln σ⟩ + affine` the distance of both
/// values from `−c·ln(1−t)` is included as well.
pub fn statistical_locality_trial(f: &dyn Generator, algebra: &Algebra, seed: u64) -> Result<TrialOutcome> {
    let conf = locality_configuration(algebra, seed)?;
    let d1 = f.divergence(conf.rho.element(), conf.mix(&conf.sigma1)?.element())?;
    let d2 = f.divergence(conf.rho.element(), conf.mix(&conf.sigma2)?.element())?;
    let mut violation = gap(d1, d2);
    let expected = f.locality_constant().map(|c| -c * (1.0 - conf.t).ln());
    if let Some(e) = expected {
        violation = violation.max(gap(d1, e)).max(gap(d2, e));
    }
    let detail = json!({
        "generator": f.describe(),
        "algebra": algebra.to_string(),
        "t": conf.t,
        "d1": json::value(d1),
        "d2": json::value(d2),
        "expected": expected.map(json::value),
    });
    Ok(TrialOutcome::new(violation, detail))
}

/// One identity trial: a convex combination of two or three states, or an
/// affine combination `(1+s)ρ₁ − sρ₂` that stays positive by construction.
pub fn bregman_identity_trial(f: &dyn Generator, algebra: &Algebra, seed: u64) -> Result<TrialOutcome> {
    let mut rng = random::rng(seed);
    let sigma = random_state_with(algebra, None, &mut rng);
    let (states, weights) = if rng.gen_bool(0.5) {
        let k = rng.gen_range(2..=3);
        let states: Vec<State> = (0..k).map(|_| random_state_with(algebra, None, &mut rng)).collect();
        (states, dirichlet(k, &mut rng))
    } else {
        let bar = random_state_with(algebra, None, &mut rng);
        let r2 = random_state_with(algebra, None, &mut rng);
        let s: f64 = rng.gen_range(0.05..0.5);
        let r1 = State::mixture(&[(1.0 / (1.0 + s), &bar), (s / (1.0 + s), &r2)])?;
        (vec![r1, r2], vec![1.0 + s, -s])
    };
    let residual = check_bregman_identity(f, &states, &weights, &sigma)?;
    let detail = json!({
        "generator": f.describe(),
        "algebra": algebra.to_string(),
        "weights": weights,
    });
    Ok(TrialOutcome::new(residual, detail))
}

pub fn check_monotonicity(f: &dyn Generator, algebra: &Algebra, config: &SuiteConfig) -> Result<PropertyVerdict> {
    let v = run_trials(Property::Monotonicity, config, |s| monotonicity_trial(f, algebra, s))?;
    Ok(match restriction_note(algebra) {
        Some(n) => v.with_note(n),
        None => v,
    })
}

pub fn check_sufficiency(f: &dyn Generator, algebra: &Algebra, config: &SuiteConfig) -> Result<PropertyVerdict> {
    run_trials(Property::Sufficiency, config, |s| sufficiency_trial(f, algebra, s))
}

pub fn check_statistical_locality(
    f: &dyn Generator,
    algebra: &Algebra,
    config: &SuiteConfig,
) -> Result<PropertyVerdict> {
    run_trials(Property::StatisticalLocality, config, |s| {
        statistical_locality_trial(f, algebra, s)
    })
}

pub fn check_bregman_identity_suite(
    f: &dyn Generator,
    algebra: &Algebra,
    config: &SuiteConfig,
) -> Result<PropertyVerdict> {
    run_trials(Property::BregmanIdentity, config, |s| bregman_identity_trial(f, algebra, s))
}
