//! States, tests, measurements and affinities over Jordan-algebra state spaces.

mod affinity;
pub mod catalog;
mod composite;
pub mod random;

use serde::{Deserialize, Serialize};

pub use affinity::Affinity;
pub use catalog::{channel_catalog, CatalogEntry};
pub use composite::{CompositeLayout, Embedding};
pub use random::{random_channel, random_state};

use crate::error::{Error, Result};
use crate::jordan::{Algebra, JordanElement, SimpleType, POSITIVITY_TOL};

/// Tolerance on trace and measurement normalisation.
pub const NORMALIZATION_TOL: f64 = 1e-10;
/// Eigenvalues at or below this count as outside the support.
pub const SUPPORT_TOL: f64 = 1e-12;

/// A positive element of trace one. Serialises as the element with an extra
/// `"kind": "state"`, which is optional on input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateRepr", into = "StateRepr")]
pub struct State {
    element: JordanElement,
}

impl State {
    /// Validates trace and positivity. Eigenvalues in `[−1e-10, 0)` are clipped to zero.
    pub fn new(element: JordanElement) -> Result<State> {
        let tr = element.trace();
        if (tr - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotAState(format!("trace is {tr}")));
        }
        let prims = element.primitive_decomposition()?;
        let min = prims.last().map(|p| p.0).unwrap_or(0.0);
        if min < -POSITIVITY_TOL {
            return Err(Error::NotAState(format!("eigenvalue {min} is negative")));
        }
        if min >= 0.0 {
            return Ok(State { element });
        }
        let mut clipped = JordanElement::zero(element.algebra());
        for (l, p) in &prims {
            clipped.axpy(l.max(0.0), p);
        }
        let tr = clipped.trace();
        Ok(State {
            element: clipped.scaled(1.0 / tr),
        })
    }

    /// Normalises a positive element whose positivity is known by construction.
    pub(crate) fn from_positive(element: JordanElement) -> State {
        let tr = element.trace();
        State {
            element: element.scaled(1.0 / tr),
        }
    }

    /// Normalises and validates an arbitrary element.
    pub fn normalized(element: JordanElement) -> Result<State> {
        let tr = element.trace();
        if !(tr > 0.0) {
            return Err(Error::NotAState(format!("trace is {tr}")));
        }
        State::new(element.scaled(1.0 / tr))
    }

    pub fn maximally_mixed(algebra: &Algebra) -> State {
        State::from_positive(JordanElement::unit(algebra))
    }

    /// `diag(p)` in a matrix or classical algebra.
    pub fn diagonal(algebra: &Algebra, p: &[f64]) -> Result<State> {
        State::new(JordanElement::diagonal(algebra, p)?)
    }

    /// Convex (or affine, if the result stays positive) combination of states.
    pub fn mixture(terms: &[(f64, &State)]) -> Result<State> {
        let parts: Vec<(f64, &JordanElement)> = terms.iter().map(|(w, s)| (*w, &s.element)).collect();
        State::new(JordanElement::linear_combination(&parts)?)
    }

    pub fn element(&self) -> &JordanElement {
        &self.element
    }

    pub fn into_element(self) -> JordanElement {
        self.element
    }

    pub fn algebra(&self) -> &Algebra {
        self.element.algebra()
    }

    /// Support idempotent: sum of primitives with eigenvalue above [`SUPPORT_TOL`].
    pub fn support(&self) -> Result<JordanElement> {
        let mut p = JordanElement::zero(self.algebra());
        for (l, e) in self.element.primitive_decomposition()? {
            if l > SUPPORT_TOL {
                p.axpy(1.0, &e);
            }
        }
        Ok(p)
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self
            .element
            .eigenvalues()?
            .into_iter()
            .filter(|l| *l > SUPPORT_TOL)
            .count())
    }
}

impl TryFrom<JordanElement> for State {
    type Error = Error;
    fn try_from(e: JordanElement) -> Result<Self> {
        State::new(e)
    }
}

impl From<State> for JordanElement {
    fn from(s: State) -> Self {
        s.element
    }
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    #[serde(default = "state_kind")]
    kind: String,
    algebra: Algebra,
    coeffs: Vec<f64>,
}

fn state_kind() -> String {
    "state".into()
}

impl TryFrom<StateRepr> for State {
    type Error = Error;
    fn try_from(r: StateRepr) -> Result<Self> {
        if r.kind != "state" {
            return Err(Error::InvalidInput(format!("expected kind \"state\", found \"{}\"", r.kind)));
        }
        State::new(JordanElement::new(r.algebra, r.coeffs)?)
    }
}

impl From<State> for StateRepr {
    fn from(s: State) -> Self {
        let algebra = s.element.algebra().clone();
        StateRepr {
            kind: state_kind(),
            algebra,
            coeffs: s.element.into_coeffs(),
        }
    }
}

/// An effect: `0 ≤ element ≤ unit`, acting on states through `⟨element, σ⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "JordanElement", into = "JordanElement")]
pub struct Test {
    element: JordanElement,
}

impl Test {
    pub fn new(element: JordanElement) -> Result<Test> {
        let spec = element.eigenvalues()?;
        let (max, min) = (spec[0], spec[spec.len() - 1]);
        if min < -POSITIVITY_TOL || max > 1.0 + POSITIVITY_TOL {
            return Err(Error::InvalidMeasurement(format!(
                "test spectrum [{min}, {max}] is not inside [0, 1]"
            )));
        }
        Ok(Test { element })
    }

    pub(crate) fn from_element_unchecked(element: JordanElement) -> Test {
        Test { element }
    }

    pub fn element(&self) -> &JordanElement {
        &self.element
    }

    pub fn evaluate(&self, state: &State) -> Result<f64> {
        self.element.inner_product(state.element())
    }
}

impl TryFrom<JordanElement> for Test {
    type Error = Error;
    fn try_from(e: JordanElement) -> Result<Self> {
        Test::new(e)
    }
}

impl From<Test> for JordanElement {
    fn from(t: Test) -> Self {
        t.element
    }
}

/// A test-valued measure with finitely many labelled outcomes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasurementRepr", into = "MeasurementRepr")]
pub struct Measurement {
    outcomes: Vec<(String, Test)>,
}

#[derive(Serialize, Deserialize)]
struct MeasurementRepr {
    outcomes: Vec<Outcome>,
}

#[derive(Serialize, Deserialize)]
struct Outcome {
    label: String,
    test: Test,
}

impl TryFrom<MeasurementRepr> for Measurement {
    type Error = Error;
    fn try_from(r: MeasurementRepr) -> Result<Self> {
        Measurement::new(r.outcomes.into_iter().map(|o| (o.label, o.test)).collect())
    }
}

impl From<Measurement> for MeasurementRepr {
    fn from(m: Measurement) -> Self {
        MeasurementRepr {
            outcomes: m
                .outcomes
                .into_iter()
                .map(|(label, test)| Outcome { label, test })
                .collect(),
        }
    }
}

/// A fine-grained measurement together with the outcome it refines.
#[derive(Debug, Clone)]
pub struct Refinement {
    pub measurement: Measurement,
    /// `parent[k]` is the index of the original outcome refined by outcome `k`.
    pub parent: Vec<usize>,
}

impl Refinement {
    /// Sums refined tests back onto the original outcomes.
    pub fn coarse_grain(&self, outcomes: usize) -> Vec<JordanElement> {
        let algebra = self.measurement.algebra().clone();
        let mut out = vec![JordanElement::zero(&algebra); outcomes];
        for ((_, t), &p) in self.measurement.outcomes.iter().zip(&self.parent) {
            out[p].axpy(1.0, t.element());
        }
        out
    }
}

impl Measurement {
    pub fn new(outcomes: Vec<(String, Test)>) -> Result<Measurement> {
        let first = outcomes
            .first()
            .ok_or_else(|| Error::InvalidMeasurement("no outcomes".into()))?;
        let algebra = first.1.element.algebra().clone();
        let mut total = JordanElement::zero(&algebra);
        for (_, t) in &outcomes {
            algebra.ensure_same(t.element.algebra())?;
            total.axpy(1.0, &t.element);
        }
        let defect = total.distance(&JordanElement::unit(&algebra));
        if defect > NORMALIZATION_TOL {
            return Err(Error::InvalidMeasurement(format!(
                "tests sum to the unit only within {defect}"
            )));
        }
        Ok(Measurement { outcomes })
    }

    /// Builds a measurement from elements known to form a resolution of the unit.
    pub(crate) fn from_elements(elements: Vec<JordanElement>) -> Measurement {
        Measurement {
            outcomes: elements
                .into_iter()
                .enumerate()
                .map(|(i, e)| (i.to_string(), Test::from_element_unchecked(e)))
                .collect(),
        }
    }

    /// Diagonal matrix units (the first axis for spin factors), summand by summand.
    pub fn computational(algebra: &Algebra) -> Measurement {
        let mut elements = Vec::with_capacity(algebra.rank());
        let mut offset = 0;
        for &ty in algebra.summands() {
            let mut local = Vec::new();
            match ty {
                SimpleType::SpinFactor(d) => {
                    let mut axis = vec![0.0; d];
                    axis[0] = 0.5;
                    local.push(JordanElement::spin(0.5, &axis).expect("d >= 2"));
                    axis[0] = -0.5;
                    local.push(JordanElement::spin(0.5, &axis).expect("d >= 2"));
                }
                _ => {
                    let alg = Algebra::simple(ty).expect("valid summand");
                    for i in 0..ty.rank() {
                        let mut v = vec![0.0; ty.rank()];
                        v[i] = 1.0;
                        local.push(JordanElement::diagonal(&alg, &v).expect("matrix summand"));
                    }
                }
            }
            for l in local {
                let mut coeffs = vec![0.0; algebra.dim()];
                coeffs[offset..offset + ty.dim()].copy_from_slice(l.coeffs());
                elements.push(JordanElement::new(algebra.clone(), coeffs).expect("length"));
            }
            offset += ty.dim();
        }
        Measurement::from_elements(elements)
    }

    /// Projective measurement onto a primitive frame diagonalising `element`.
    pub fn spectral(element: &JordanElement) -> Result<Measurement> {
        Ok(Measurement::from_elements(
            element
                .primitive_decomposition()?
                .into_iter()
                .map(|(_, p)| p)
                .collect(),
        ))
    }

    pub fn outcomes(&self) -> &[(String, Test)] {
        &self.outcomes
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn algebra(&self) -> &Algebra {
        self.outcomes[0].1.element.algebra()
    }

    /// Outcome probabilities `⟨testᵢ, σ⟩`.
    pub fn measure(&self, state: &State) -> Result<Vec<f64>> {
        self.outcomes
            .iter()
            .map(|(_, t)| t.evaluate(state).map(|p| p.clamp(0.0, 1.0)))
            .collect()
    }

    /// Every test is a nonnegative multiple of a primitive idempotent.
    pub fn is_fine_grained(&self) -> Result<bool> {
        for (_, t) in &self.outcomes {
            let spec = t.element.eigenvalues()?;
            let scale = spec[0].abs().max(1.0);
            if spec.iter().filter(|l| **l > 1e-10 * scale).count() > 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Splits every test into rank-one pieces through its spectral decomposition.
    pub fn fine_grain(&self) -> Result<Refinement> {
        let mut outcomes = Vec::new();
        let mut parent = Vec::new();
        for (idx, (label, t)) in self.outcomes.iter().enumerate() {
            let prims = t.element.primitive_decomposition()?;
            let kept: Vec<_> = prims.into_iter().filter(|(l, _)| *l > SUPPORT_TOL).collect();
            if kept.len() <= 1 {
                outcomes.push((label.clone(), t.clone()));
                parent.push(idx);
                continue;
            }
            for (k, (l, p)) in kept.into_iter().enumerate() {
                outcomes.push((
                    format!("{label}.{k}"),
                    Test::from_element_unchecked(p.scaled(l)),
                ));
                parent.push(idx);
            }
        }
        Ok(Refinement {
            measurement: Measurement { outcomes },
            parent,
        })
    }

    /// Joint measurement `m_A ⊗ m_B` on a composite layout.
    pub fn tensor(&self, other: &Measurement, layout: &CompositeLayout) -> Result<Measurement> {
        let mut outcomes = Vec::with_capacity(self.len() * other.len());
        for (la, ta) in &self.outcomes {
            for (lb, tb) in &other.outcomes {
                let e = layout.tensor_elements(&[ta.element(), tb.element()])?;
                outcomes.push((format!("{la}|{lb}"), Test::from_element_unchecked(e)));
            }
        }
        Ok(Measurement { outcomes })
    }
}

/// Returns the support idempotent of `sigma` when it witnesses singularity
/// (`φ(ρ) = 0`, `φ(σ) = 1`), otherwise `None`.
pub fn singularity_witness(rho: &State, sigma: &State) -> Result<Option<Test>> {
    rho.algebra().ensure_same(sigma.algebra())?;
    let support = sigma.support()?;
    if rho.element().inner_product(&support)? <= NORMALIZATION_TOL {
        Ok(Some(Test::from_element_unchecked(support)))
    } else {
        Ok(None)
    }
}

pub fn are_singular(rho: &State, sigma: &State) -> Result<bool> {
    Ok(singularity_witness(rho, sigma)?.is_some())
}

/// Random state supported inside the face `U_P(Ω)` of the idempotent `p`.
///
/// A full-rank state is compressed into the face; with a rank cap its
/// primitive frame inside the face is reweighted on the first `cap` members.
pub fn random_state_in_face<R: rand::Rng + ?Sized>(
    p: &JordanElement,
    rank_cap: Option<usize>,
    rng: &mut R,
) -> Result<State> {
    let base = random::random_state_with(p.algebra(), None, rng);
    let compressed = p.quadratic(base.element())?;
    if compressed.trace() <= 1e-12 {
        return Err(Error::InvalidInput("face is empty".into()));
    }
    let full = State::normalized(compressed)?;
    let Some(cap) = rank_cap else { return Ok(full) };
    let frame: Vec<JordanElement> = full
        .element()
        .primitive_decomposition()?
        .into_iter()
        .filter(|(l, _)| *l > SUPPORT_TOL)
        .map(|(_, e)| e)
        .collect();
    if cap >= frame.len() {
        return Ok(full);
    }
    let w = random::dirichlet(cap.max(1), rng);
    let mut acc = JordanElement::zero(p.algebra());
    for (wi, e) in w.iter().zip(&frame) {
        acc.axpy(*wi, e);
    }
    State::new(acc)
}
