//! Information quantities on composite systems: additivity, the marginal
//! identity, mutual and conditional mutual information, the separoid axioms
//! and data processing.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::bregman::Generator;
use crate::entropy::shannon_entropy;
use crate::error::{Error, Result};
use crate::jordan::{Algebra, CMat, JordanElement, SimpleType, C64};
use crate::json;
use crate::state_space::random::{self, random_state_with};
use crate::state_space::{Affinity, CompositeLayout, Embedding, State};
use crate::verdict::{run_trials, Property, PropertyVerdict, SuiteConfig, TrialOutcome};

/// A state on a composite layout with one label per factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PartitionedRepr", into = "PartitionedRepr")]
pub struct PartitionedState {
    layout: CompositeLayout,
    state: State,
    labels: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct PartitionedRepr {
    layout: String,
    labels: Vec<String>,
    state: State,
}

impl TryFrom<PartitionedRepr> for PartitionedState {
    type Error = Error;
    fn try_from(r: PartitionedRepr) -> Result<Self> {
        PartitionedState::new(r.layout.parse()?, r.state, r.labels)
    }
}

impl From<PartitionedState> for PartitionedRepr {
    fn from(p: PartitionedState) -> Self {
        PartitionedRepr {
            layout: p.layout.to_string(),
            labels: p.labels,
            state: p.state,
        }
    }
}

/// `A, B, C, …` for `n` factors.
pub fn default_labels(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                ((b'A' + i as u8) as char).to_string()
            } else {
                format!("F{i}")
            }
        })
        .collect()
}

impl PartitionedState {
    pub fn new(layout: CompositeLayout, state: State, labels: Vec<String>) -> Result<Self> {
        layout
            .composite_algebra()
            .ensure_same(state.algebra())
            .map_err(|e| Error::Layout(e.to_string()))?;
        if labels.len() != layout.len() {
            return Err(Error::Layout(format!(
                "{} labels for {} factors",
                labels.len(),
                layout.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || labels[..i].contains(l) {
                return Err(Error::Layout(format!("label {l:?} is empty or repeated")));
            }
        }
        Ok(PartitionedState {
            layout,
            state,
            labels,
        })
    }

    /// Labels `A, B, C, …`.
    pub fn with_default_labels(layout: CompositeLayout, state: State) -> Result<Self> {
        let labels = default_labels(layout.len());
        PartitionedState::new(layout, state, labels)
    }

    /// Classical joint distribution given as a flat table in layout order.
    pub fn classical(dims: &[usize], table: &[f64]) -> Result<Self> {
        let layout = CompositeLayout::classical(dims)?;
        let state = State::diagonal(&layout.composite_algebra(), table)?;
        PartitionedState::with_default_labels(layout, state)
    }

    /// The same joint distribution as a diagonal state of a complex composite.
    pub fn classical_as_quantum(&self) -> Result<Self> {
        if self.layout.embedding() != Embedding::ClassicalTensor {
            return Err(Error::Layout("not a classical layout".into()));
        }
        let layout = CompositeLayout::complex(&self.layout.dims())?;
        let state = State::diagonal(&layout.composite_algebra(), self.state.element().coeffs())?;
        PartitionedState::new(layout, state, self.labels.clone())
    }

    pub fn layout(&self) -> &CompositeLayout {
        &self.layout
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Factor indices of a label set, sorted. Accepts `"BC"` for one-letter
    /// labels or `"B,C"`.
    pub fn resolve(&self, set: &str) -> Result<Vec<usize>> {
        let names: Vec<String> = if set.contains(',') {
            set.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
        } else if self.labels.iter().any(|l| l == set.trim()) {
            vec![set.trim().to_string()]
        } else {
            set.trim().chars().map(|c| c.to_string()).collect()
        };
        let mut idx = Vec::with_capacity(names.len());
        for n in &names {
            let i = self
                .labels
                .iter()
                .position(|l| l == n)
                .ok_or_else(|| Error::Layout(format!("unknown label {n:?}")))?;
            if idx.contains(&i) {
                return Err(Error::OverlappingSubsystems(format!("{n} repeated in {set:?}")));
            }
            idx.push(i);
        }
        idx.sort_unstable();
        Ok(idx)
    }

    pub fn marginal(&self, set: &[usize]) -> Result<State> {
        self.layout.marginal(&self.state, set)
    }

    /// `D_F(σ_{∪Gᵢ}, ⊗ σ_{Gᵢ})`; groups must be disjoint and nonempty.
    pub fn divergence_from_product(&self, f: &dyn Generator, groups: &[Vec<usize>]) -> Result<f64> {
        let groups: Vec<Vec<usize>> = groups.iter().filter(|g| !g.is_empty()).cloned().collect();
        if groups.len() < 2 {
            return Ok(0.0);
        }
        let (sub, product) = self.layout.product_of_marginals(&self.state, &groups)?;
        let mut union: Vec<usize> = groups.concat();
        union.sort_unstable();
        let joint = self.layout.marginal(&self.state, &union)?;
        sub.composite_algebra().ensure_same(joint.algebra())?;
        f.divergence(joint.element(), product.element())
    }

    /// Applies `Φ` to one factor.
    pub fn apply_local(&self, factor: usize, phi: &Affinity) -> Result<Self> {
        let map = self.layout.local_affinity(factor, phi)?;
        let state = State::new(map.apply(self.state.element())?)?;
        PartitionedState::new(self.layout.clone(), state, self.labels.clone())
    }
}

fn check_disjoint(sets: &[&[usize]]) -> Result<()> {
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[..i] {
            if a.iter().any(|x| b.contains(x)) {
                return Err(Error::OverlappingSubsystems(format!("{b:?} and {a:?}")));
            }
        }
    }
    Ok(())
}

fn union(sets: &[&[usize]]) -> Vec<usize> {
    let mut u: Vec<usize> = sets.concat();
    u.sort_unstable();
    u
}

/// `I(A;B) = D_F(σ_AB, σ_A ⊗ σ_B)` on factor index sets.
pub fn mutual_information_of(f: &dyn Generator, s: &PartitionedState, a: &[usize], b: &[usize]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidInput("mutual information needs nonempty subsystems".into()));
    }
    check_disjoint(&[a, b])?;
    s.divergence_from_product(f, &[a.to_vec(), b.to_vec()])
}

/// `I(A;B)` on label sets such as `"A"` and `"BC"`.
pub fn mutual_information(f: &dyn Generator, s: &PartitionedState, a: &str, b: &str) -> Result<f64> {
    mutual_information_of(f, s, &s.resolve(a)?, &s.resolve(b)?)
}

/// Conditional mutual information and its three divergence terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmiReport {
    /// `None` when a component is infinite.
    pub value: Option<f64>,
    /// `D(σ_ABC, σ_A⊗σ_B⊗σ_C)`, `D(σ_AC, σ_A⊗σ_C)`, `D(σ_BC, σ_B⊗σ_C)`.
    #[serde(with = "crate::json::floats")]
    pub components: Vec<f64>,
}

impl CmiReport {
    fn from_components(components: Vec<f64>) -> Self {
        let value = components
            .iter()
            .all(|c| c.is_finite())
            .then(|| components[0] - components[1] - components[2]);
        CmiReport { value, components }
    }
}

/// `I(A;B|C)` on factor index sets; `C` may be empty.
pub fn conditional_mutual_information_of(
    f: &dyn Generator,
    s: &PartitionedState,
    a: &[usize],
    b: &[usize],
    c: &[usize],
) -> Result<CmiReport> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidInput("conditional mutual information needs nonempty A and B".into()));
    }
    check_disjoint(&[a, b, c])?;
    let g = |x: &[usize]| x.to_vec();
    Ok(CmiReport::from_components(vec![
        s.divergence_from_product(f, &[g(a), g(b), g(c)])?,
        s.divergence_from_product(f, &[g(a), g(c)])?,
        s.divergence_from_product(f, &[g(b), g(c)])?,
    ]))
}

/// `I(A;B|C)` on label sets; an empty `c` conditions on nothing.
pub fn conditional_mutual_information(
    f: &dyn Generator,
    s: &PartitionedState,
    a: &str,
    b: &str,
    c: &str,
) -> Result<CmiReport> {
    let c = if c.trim().is_empty() { Vec::new() } else { s.resolve(c)? };
    conditional_mutual_information_of(f, s, &s.resolve(a)?, &s.resolve(b)?, &c)
}

/// Shannon form `H(AC) + H(BC) − H(ABC) − H(C)` for classical tables; the
/// sets may overlap.
pub fn classical_cmi(s: &PartitionedState, a: &[usize], b: &[usize], c: &[usize]) -> Result<f64> {
    if s.layout.embedding() != Embedding::ClassicalTensor {
        return Err(Error::Unsupported("overlapping sets are only defined for classical tables".into()));
    }
    let h = |set: Vec<usize>| -> Result<f64> {
        let mut set = set;
        set.sort_unstable();
        set.dedup();
        if set.is_empty() {
            return Ok(0.0);
        }
        shannon_entropy(s.marginal(&set)?.element().coeffs())
    };
    Ok(h([a, c].concat())? + h([b, c].concat())? - h([a, b, c].concat())? - h(c.to_vec())?)
}

/// `|D(ρ_A⊗ρ_B, σ_A⊗σ_B) − D(ρ_A, σ_A) − D(ρ_B, σ_B)|`; zero when both sides are infinite.
pub fn check_additivity(
    f: &dyn Generator,
    rho_a: &State,
    rho_b: &State,
    sigma_a: &State,
    sigma_b: &State,
    layout: &CompositeLayout,
) -> Result<f64> {
    if layout.len() != 2 {
        return Err(Error::Layout("additivity is checked on bipartite layouts".into()));
    }
    let joint = f.divergence(
        layout.tensor(&[rho_a, rho_b])?.element(),
        layout.tensor(&[sigma_a, sigma_b])?.element(),
    )?;
    let split = f.divergence(rho_a.element(), sigma_a.element())?
        + f.divergence(rho_b.element(), sigma_b.element())?;
    Ok(residual(joint, split))
}

fn residual(a: f64, b: f64) -> f64 {
    match (a.is_finite(), b.is_finite()) {
        (true, true) => (a - b).abs(),
        (false, false) if a == b => 0.0,
        _ => f64::INFINITY,
    }
}

/// `|D(σ_AB, ρ_A⊗ρ_B) − D(σ_AB, σ_A⊗ρ_B) − D(σ_A, ρ_A)|`.
pub fn check_marginal_identity(
    f: &dyn Generator,
    sigma_ab: &State,
    rho_a: &State,
    rho_b: &State,
    layout: &CompositeLayout,
) -> Result<f64> {
    if layout.len() != 2 {
        return Err(Error::Layout("the marginal identity is checked on bipartite layouts".into()));
    }
    let sigma_a = layout.marginal(sigma_ab, &[0])?;
    let lhs = f.divergence(sigma_ab.element(), layout.tensor(&[rho_a, rho_b])?.element())?;
    let rhs = f.divergence(sigma_ab.element(), layout.tensor(&[&sigma_a, rho_b])?.element())?
        + f.divergence(sigma_a.element(), rho_a.element())?;
    Ok(residual(lhs, rhs))
}

fn rank_cap<R: Rng + ?Sized>(algebra: &Algebra, rng: &mut R) -> Option<usize> {
    rng.gen_bool(0.5).then(|| rng.gen_range(1..=algebra.rank()))
}

/// One additivity trial on a bipartite layout. Every fifth trial uses a pure
/// `σ_A`, which usually makes both sides infinite.
pub fn additivity_trial(f: &dyn Generator, layout: &CompositeLayout, seed: u64) -> Result<TrialOutcome> {
    let mut rng = random::rng(seed);
    let (fa, fb) = (&layout.factors()[0], &layout.factors()[1]);
    let singular = rng.gen_range(0..5) == 0;
    let c = rank_cap(fa, &mut rng);
    let rho_a = random_state_with(fa, c, &mut rng);
    let c = rank_cap(fb, &mut rng);
    let rho_b = random_state_with(fb, c, &mut rng);
    let sigma_a = random_state_with(fa, singular.then_some(1), &mut rng);
    let sigma_b = random_state_with(fb, None, &mut rng);
    let r = check_additivity(f, &rho_a, &rho_b, &sigma_a, &sigma_b, layout)?;
    Ok(TrialOutcome::new(
        r,
        json!({"generator": f.describe(), "layout": layout.to_string(), "singular_reference": singular}),
    ))
}

/// One marginal-identity trial: random `σ_AB` of random rank, full-rank `ρ_A, ρ_B`.
pub fn marginal_identity_trial(f: &dyn Generator, layout: &CompositeLayout, seed: u64) -> Result<TrialOutcome> {
    let mut rng = random::rng(seed);
    let alg = layout.composite_algebra();
    let c = rank_cap(&alg, &mut rng);
    let sigma = random_state_with(&alg, c, &mut rng);
    let rho_a = random_state_with(&layout.factors()[0], None, &mut rng);
    let rho_b = random_state_with(&layout.factors()[1], None, &mut rng);
    let r = check_marginal_identity(f, &sigma, &rho_a, &rho_b, layout)?;
    Ok(TrialOutcome::new(
        r,
        json!({"generator": f.describe(), "layout": layout.to_string(), "rank_cap": c}),
    ))
}

pub fn check_additivity_suite(
    f: &dyn Generator,
    layout: &CompositeLayout,
    config: &SuiteConfig,
) -> Result<PropertyVerdict> {
    run_trials(Property::Additivity, config, |s| additivity_trial(f, layout, s))
}

pub fn check_marginal_identity_suite(
    f: &dyn Generator,
    layout: &CompositeLayout,
    config: &SuiteConfig,
) -> Result<PropertyVerdict> {
    run_trials(Property::MarginalIdentity, config, |s| marginal_identity_trial(f, layout, s))
}

/// Random state on a layout: pure, low rank or full rank with equal odds.
fn random_composite_state<R: Rng + ?Sized>(layout: &CompositeLayout, rng: &mut R) -> State {
    let alg = layout.composite_algebra();
    let cap = match rng.gen_range(0..3) {
        0 => Some(1),
        1 => Some(rng.gen_range(1..=alg.rank())),
        _ => None,
    };
    random_state_with(&alg, cap, rng)
}

/// The three separoid quantities of one trial. `roles` is a permutation of
/// the factors: the first three are `A, B, C` and the rest form `D`, which is
/// empty on three-factor layouts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparoidSample {
    pub roles: Vec<usize>,
    /// `I(A;B|C)`, `None` if undefined.
    pub cmi: Option<f64>,
    /// `|I(A;B|C) − I(B;A|C)|`.
    pub symmetry: Option<f64>,
    /// `I(A;BC|D) − I(A;B|D) − I(A;C|BD)`.
    pub chain: Option<f64>,
}

pub fn separoid_sample(f: &dyn Generator, s: &PartitionedState, roles: Vec<usize>) -> Result<SeparoidSample> {
    if roles.len() < 3 {
        return Err(Error::Layout("separoid roles need at least three factors".into()));
    }
    let (a, b, c) = (vec![roles[0]], vec![roles[1]], vec![roles[2]]);
    let d = union(&[&roles[3..]]);
    let bc = union(&[&b, &c]);
    let bd = union(&[&b, &d]);
    let abc = conditional_mutual_information_of(f, s, &a, &b, &c)?.value;
    let bac = conditional_mutual_information_of(f, s, &b, &a, &c)?.value;
    let whole = conditional_mutual_information_of(f, s, &a, &bc, &d)?.value;
    let first = conditional_mutual_information_of(f, s, &a, &b, &d)?.value;
    let second = conditional_mutual_information_of(f, s, &a, &c, &bd)?.value;
    Ok(SeparoidSample {
        roles,
        cmi: abc,
        symmetry: abc.zip(bac).map(|(x, y)| (x - y).abs()),
        chain: match (whole, first, second) {
            (Some(w), Some(x), Some(y)) => Some(w - x - y),
            _ => None,
        },
    })
}

/// Verdicts for the three separoid axioms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparoidReport {
    pub positivity: PropertyVerdict,
    pub symmetry: PropertyVerdict,
    pub chain_rule: PropertyVerdict,
    /// Trials where some quantity was undefined (infinite component).
    pub undefined: usize,
}

impl SeparoidReport {
    pub fn pass(&self) -> bool {
        self.positivity.pass && self.symmetry.pass && self.chain_rule.pass
    }
}

/// Symmetry is a purely algebraic identity and uses this tighter tolerance.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Random states on a layout of three or more factors; positivity `I(A;B|C) ≥ −tol`, symmetry within
/// [`SYMMETRY_TOL`] (or `config.tol` if tighter) and the chain rule within `tol`.
pub fn check_separoid(f: &dyn Generator, layout: &CompositeLayout, config: &SuiteConfig) -> Result<SeparoidReport> {
    if layout.len() < 3 {
        return Err(Error::Layout(format!(
            "the separoid suite needs at least three factors, {layout} has {}",
            layout.len()
        )));
    }
    use rayon::prelude::*;
    let samples = (0..config.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = random::rng(config.trial_seed(i));
            let state = random_composite_state(layout, &mut rng);
            let mut roles: Vec<usize> = (0..layout.len()).collect();
            roles.shuffle(&mut rng);
            let s = PartitionedState::with_default_labels(layout.clone(), state)?;
            separoid_sample(f, &s, roles)
        })
        .collect::<Result<Vec<_>>>()?;
    let undefined = samples
        .iter()
        .filter(|s| s.cmi.is_none() || s.symmetry.is_none() || s.chain.is_none())
        .count();
    let outcome = |s: &SeparoidSample, v: Option<f64>| {
        TrialOutcome::new(
            v.unwrap_or(f64::NEG_INFINITY),
            json!({"generator": f.describe(), "layout": layout.to_string(), "roles": s.roles,
                   "cmi": s.cmi.map(json::value), "chain": s.chain.map(json::value)}),
        )
    };
    let pos = samples.iter().map(|s| outcome(s, s.cmi.map(|x| -x))).collect();
    let sym = samples.iter().map(|s| outcome(s, s.symmetry)).collect();
    let chain = samples.iter().map(|s| outcome(s, s.chain.map(f64::abs))).collect();
    let sym_cfg = config.with_tol(config.tol.min(SYMMETRY_TOL));
    Ok(SeparoidReport {
        positivity: PropertyVerdict::from_outcomes(Property::SeparoidPositivity, config, pos),
        symmetry: PropertyVerdict::from_outcomes(Property::SeparoidSymmetry, &sym_cfg, sym),
        chain_rule: PropertyVerdict::from_outcomes(Property::ChainRule, config, chain),
        undefined,
    })
}

/// `Φ⁺ = (|00⟩ + |11⟩)/√2` on two qubits.
pub fn bell_state() -> PartitionedState {
    let layout = CompositeLayout::complex(&[2, 2]).expect("valid layout");
    let h = 0.5;
    let mut m = CMat::zeros(4, 4);
    for (r, c) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        m[(r, c)] = C64::new(h, 0.0);
    }
    let state = State::new(JordanElement::from_matrix(&layout.composite_algebra(), &m).expect("4x4"))
        .expect("pure state");
    PartitionedState::with_default_labels(layout, state).expect("two labels")
}

/// `I(A;B)` after minus before applying `Φ` to factor `b` of a bipartite state.
pub fn data_processing_gap(f: &dyn Generator, s: &PartitionedState, b: usize, phi: &Affinity) -> Result<f64> {
    if s.layout.len() != 2 || b > 1 {
        return Err(Error::Layout("data processing is checked on bipartite states".into()));
    }
    let before = mutual_information_of(f, s, &[0], &[1])?;
    let after = mutual_information_of(f, &s.apply_local(b, phi)?, &[0], &[1])?;
    Ok(if before == f64::INFINITY { f64::NEG_INFINITY } else { after - before })
}

/// Random local channel on one factor: a Stinespring channel on complex
/// factors, a stochastic matrix on classical ones.
fn random_local_channel<R: Rng + ?Sized>(factor: &Algebra, rng: &mut R) -> Result<Affinity> {
    let env = rng.gen_range(1..=4);
    random::random_channel_with(factor, env, rng)
}

/// One data-processing trial on a bipartite layout: even trials start from
/// `fixed` (the Bell state when `None` on `C2x2`), odd trials from a random
/// state; a random channel acts on factor B.
pub fn data_processing_trial(
    f: &dyn Generator,
    layout: &CompositeLayout,
    fixed: Option<&PartitionedState>,
    seed: u64,
) -> Result<TrialOutcome> {
    let mut rng = random::rng(seed);
    let use_fixed = rng.gen_bool(0.5);
    let start = match (use_fixed, fixed) {
        (true, Some(s)) => s.clone(),
        (true, None) if layout.dims() == [2, 2] && layout.embedding() == Embedding::ComplexTensor => bell_state(),
        _ => PartitionedState::with_default_labels(layout.clone(), random_composite_state(layout, &mut rng))?,
    };
    let phi = random_local_channel(&layout.factors()[1], &mut rng)?;
    let gap = data_processing_gap(f, &start, 1, &phi)?;
    Ok(TrialOutcome::new(
        gap,
        json!({"generator": f.describe(), "layout": layout.to_string(), "fixed_state": use_fixed}),
    ))
}

pub fn check_data_processing(
    f: &dyn Generator,
    layout: &CompositeLayout,
    fixed: Option<&PartitionedState>,
    config: &SuiteConfig,
) -> Result<PropertyVerdict> {
    if layout.len() != 2 {
        return Err(Error::Layout("data processing is checked on bipartite layouts".into()));
    }
    if !matches!(layout.factors()[1].as_simple(), Some(SimpleType::ComplexHermitian(_) | SimpleType::Classical(_))) {
        return Err(Error::Unsupported("random local channels need complex or classical factors".into()));
    }
    run_trials(Property::DataProcessing, config, |s| data_processing_trial(f, layout, fixed, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bregman::BregmanGenerator;
    use crate::state_space::random::random_state;

    const NEG: BregmanGenerator = BregmanGenerator::NegEntropy;

    #[test]
    fn bell_state_mutual_information() {
        let b = bell_state();
        let mi = mutual_information(&NEG, &b, "A", "B").unwrap();
        assert!((mi - 2.0 * 2f64.ln()).abs() < 1e-12);
        assert!((mi - 1.386294).abs() < 1e-6);
        let m = b.marginal(&[0]).unwrap();
        assert!(m.element().distance(State::maximally_mixed(&Algebra::complex(2)).element()) < 1e-14);
    }

    #[test]
    fn classical_correlated_bits() {
        let s = PartitionedState::classical(&[2, 2], &[0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!((mutual_information(&NEG, &s, "A", "B").unwrap() - 2f64.ln()).abs() < 1e-14);
        assert!(matches!(
            mutual_information(&NEG, &s, "AB", "B"),
            Err(Error::OverlappingSubsystems(_))
        ));
    }

    #[test]
    fn ghz_diagonal_table() {
        let mut t = vec![0.0; 8];
        t[0] = 0.5;
        t[7] = 0.5;
        let s = PartitionedState::classical(&[2, 2, 2], &t).unwrap();
        let r = conditional_mutual_information(&NEG, &s, "A", "B", "C").unwrap();
        assert!(r.value.unwrap().abs() < 1e-12);
        let direct = classical_cmi(&s, &[0], &[1], &[2]).unwrap();
        assert!(direct.abs() < 1e-12);
        let i = conditional_mutual_information(&NEG, &s, "A", "B", "").unwrap();
        assert!((i.value.unwrap() - 2f64.ln()).abs() < 1e-12);
        // overlapping sets are allowed for tables: I(A;A) = H(A)
        assert!((classical_cmi(&s, &[0], &[0], &[]).unwrap() - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn markov_chain_has_zero_cmi() {
        // A -> C -> B with P(c|a) and P(b|c) arbitrary
        let pa = [0.3, 0.7];
        let pc_a = [[0.8, 0.2], [0.1, 0.9]];
        let pb_c = [[0.6, 0.4], [0.25, 0.75]];
        let mut t = vec![0.0; 8];
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    t[a * 4 + b * 2 + c] = pa[a] * pc_a[a][c] * pb_c[c][b];
                }
            }
        }
        let s = PartitionedState::classical(&[2, 2, 2], &t).unwrap();
        let r = conditional_mutual_information(&NEG, &s, "A", "B", "C").unwrap();
        assert!(r.value.unwrap().abs() < 1e-9);
        let components = &r.components;
        assert!((r.value.unwrap() - (components[0] - components[1] - components[2])).abs() < 1e-15);
        let q = s.classical_as_quantum().unwrap();
        let rq = conditional_mutual_information(&NEG, &q, "A", "B", "C").unwrap();
        assert!((rq.value.unwrap() - r.value.unwrap()).abs() < 1e-10);
    }

    #[test]
    fn undefined_cmi_is_not_subtracted() {
        // B is perfectly correlated with A but the reference product has full support
        // except where σ_A⊗σ_B⊗σ_C vanishes; use a classical table with a zero marginal
        let mut t = vec![0.0; 8];
        t[0] = 1.0;
        let s = PartitionedState::classical(&[2, 2, 2], &t).unwrap();
        let r = conditional_mutual_information(&NEG, &s, "A", "B", "C").unwrap();
        assert_eq!(r.value, Some(0.0));
        let js = serde_json::to_string(&CmiReport::from_components(vec![f64::INFINITY, 1.0, 0.0])).unwrap();
        assert_eq!(js, r#"{"value":null,"components":["inf",1.0,0.0]}"#);
    }

    #[test]
    fn additivity_and_marginal_identity_for_neg_entropy() {
        let l = CompositeLayout::complex(&[2, 3]).unwrap();
        let cfg = SuiteConfig::new(30, 4);
        assert!(check_additivity_suite(&NEG, &l, &cfg).unwrap().pass);
        assert!(check_marginal_identity_suite(&NEG, &l, &cfg).unwrap().pass);
        assert!(check_additivity_suite(&NEG, &CompositeLayout::real_into_larger(), &cfg).unwrap().pass);
        let tp = BregmanGenerator::TracePower { p: 2 };
        assert!(!check_additivity_suite(&tp, &l, &cfg).unwrap().pass);
    }

    #[test]
    fn marginal_identity_terms_via_affine_tensor_decomposition() {
        // σ_AB = Σ tᵢ π_{A,i} ⊗ π_{B,i} with one negative weight; then
        // ⟨σ_AB, ln ρ_A ⊗ 1⟩ = Σ tᵢ ⟨π_{A,i}, ln ρ_A⟩ = ⟨σ_A, ln ρ_A⟩.
        let l = CompositeLayout::complex(&[2, 2]).unwrap();
        let q = Algebra::complex(2);
        let p: Vec<State> = (0..6).map(|i| random_state(&q, None, 40 + i)).collect();
        let terms = [(0.7, 0, 1), (0.5, 2, 3), (-0.2, 4, 5)];
        let mut sigma = JordanElement::zero(&l.composite_algebra());
        let mut sigma_a = JordanElement::zero(&q);
        for (t, a, b) in terms {
            sigma.axpy(t, l.tensor(&[&p[a], &p[b]]).unwrap().element());
            sigma_a.axpy(t, p[a].element());
        }
        let Ok(sigma) = State::new(sigma) else { return };
        let rho_a = random_state(&q, None, 50);
        let ln_a = rho_a.element().apply_function(f64::ln, crate::jordan::Domain::POSITIVE).unwrap();
        let lifted = l.tensor_elements(&[&ln_a, &JordanElement::unit(&q)]).unwrap();
        let lhs = sigma.element().inner_product(&lifted).unwrap();
        assert!((lhs - sigma_a.inner_product(&ln_a).unwrap()).abs() < 1e-12);
        assert!(l.marginal(&sigma, &[0]).unwrap().element().distance(&sigma_a) < 1e-12);
    }

    #[test]
    fn separoid_on_qubits_and_tables() {
        let cfg = SuiteConfig::new(12, 2);
        let r = check_separoid(&NEG, &CompositeLayout::complex(&[2, 2, 2, 2]).unwrap(), &cfg).unwrap();
        assert!(r.pass(), "{r:?}");
        let r = check_separoid(&NEG, &CompositeLayout::classical(&[2, 2, 2, 2]).unwrap(), &cfg.with_tol(1e-10)).unwrap();
        assert!(r.pass(), "{r:?}");
        let r = check_separoid(&NEG, &CompositeLayout::complex(&[2, 2, 2]).unwrap(), &cfg).unwrap();
        assert!(r.pass(), "{r:?}");
        assert!(check_separoid(&NEG, &CompositeLayout::complex(&[2, 2]).unwrap(), &cfg).is_err());
    }

    #[test]
    fn data_processing_on_bell_states() {
        let l = CompositeLayout::complex(&[2, 2]).unwrap();
        let v = check_data_processing(&NEG, &l, None, &SuiteConfig::new(30, 1)).unwrap();
        assert!(v.pass, "{v:?}");
        let b = bell_state();
        let id = Affinity::identity(&Algebra::complex(2));
        assert!(data_processing_gap(&NEG, &b, 1, &id).unwrap().abs() < 1e-12);
        let reset = Affinity::measure_prepare(
            &[JordanElement::unit(&Algebra::complex(2))],
            &[&random_state(&Algebra::complex(2), None, 3)],
        )
        .unwrap();
        let after = mutual_information(&NEG, &b.apply_local(1, &reset).unwrap(), "A", "B").unwrap();
        assert!(after.abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let b = bell_state();
        let js = serde_json::to_string(&b).unwrap();
        let back: PartitionedState = serde_json::from_str(&js).unwrap();
        assert_eq!(back.labels(), b.labels());
        assert!(back.state().element().distance(b.state().element()) < 1e-15);
    }
}
