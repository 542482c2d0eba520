//! Spectral, decomposition and fine-grained entropies (in nats).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jordan::{Domain, JordanElement, SimpleType, C64, GROUP_TOL};
use crate::state_space::random::{self, random_element, random_pure_state, random_unitary};
use crate::state_space::{Measurement, State};

/// Eigenvalues and probabilities at or below this are exact zeros.
pub const ZERO_TOL: f64 = 1e-12;
/// Slack for the entropy equalities and the sampled lower bound.
pub const ENTROPY_TOL: f64 = 1e-9;

/// Converts nats to bits.
pub fn to_bits(nats: f64) -> f64 {
    nats / std::f64::consts::LN_2
}

fn plogp_sum<I: IntoIterator<Item = f64>>(p: I) -> f64 {
    -p.into_iter()
        .filter(|&x| x > ZERO_TOL)
        .map(|x| x * x.ln())
        .sum::<f64>()
}

/// `−Σ pᵢ ln pᵢ`. Entries are renormalised if their sum is within 1e-8 of one.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if let Some(&bad) = p.iter().find(|&&x| x < -ZERO_TOL || !x.is_finite()) {
        return Err(Error::InvalidInput(format!("probability {bad} is negative")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidInput(format!("probabilities sum to {total}")));
    }
    Ok(plogp_sum(p.iter().map(|x| x.max(0.0) / total)))
}

/// `−⟨σ, ln σ⟩` from the primitive spectrum.
pub fn spectral_entropy(sigma: &State) -> Result<f64> {
    Ok(plogp_sum(sigma.element().eigenvalues()?))
}

/// Shannon entropy of the grouped spectral weights, each repeated `tr(Eᵢ)` times.
///
/// The spectral decomposition minimises the entropy over all pure
/// decompositions, so this is the infimum itself rather than an estimate.
pub fn decomposition_entropy(sigma: &State) -> Result<f64> {
    let spec = sigma.element().spectral_decompose(GROUP_TOL)?;
    Ok(plogp_sum(spec.weights_with_multiplicity()))
}

/// A random decomposition `σ = Σ pⱼ ωⱼ` into `terms` pure states, produced by
/// mixing the eigenvectors of `σ` with a random unitary.
///
/// Supported on real and complex matrix algebras.
pub fn random_pure_decomposition<R: Rng + ?Sized>(
    sigma: &State,
    terms: usize,
    rng: &mut R,
) -> Result<Vec<(f64, State)>> {
    let algebra = sigma.algebra();
    let real = match algebra.as_simple() {
        Some(SimpleType::RealHermitian(_)) => true,
        Some(SimpleType::ComplexHermitian(_)) => false,
        _ => {
            return Err(Error::Unsupported(format!(
                "pure decompositions are sampled on real and complex algebras, not {algebra}"
            )))
        }
    };
    let m = sigma.element().to_matrix()?;
    let vecs = crate::jordan::eigen::hermitian_eigen(&m)?;
    let kept: Vec<_> = vecs.into_iter().filter(|(l, _)| *l > ZERO_TOL).collect();
    if terms < kept.len() {
        return Err(Error::InvalidInput(format!(
            "{terms} terms cannot decompose a rank {} state",
            kept.len()
        )));
    }
    let u = if real {
        random::random_orthogonal(terms, rng).map(|x| C64::new(x, 0.0))
    } else {
        random_unitary(terms, rng)
    };
    let mut out = Vec::with_capacity(terms);
    for j in 0..terms {
        let mut psi = nalgebra::DVector::<C64>::zeros(m.nrows());
        for (i, (l, v)) in kept.iter().enumerate() {
            psi += v * (u[(j, i)] * l.sqrt());
        }
        let w = psi.norm_squared();
        if w <= ZERO_TOL {
            continue;
        }
        let proj = &psi * psi.adjoint() / C64::new(w, 0.0);
        out.push((w, State::new(JordanElement::from_matrix(algebra, &proj)?)?));
    }
    Ok(out)
}

/// Random fine-grained measurement: with `overcomplete`, `rank + extra`
/// random primitives `aⱼ` normalised to `U_{S^{-1/2}}(aⱼ)` with `S = Σ aⱼ`;
/// otherwise the primitive frame of a random element.
pub fn random_fine_grained<R: Rng + ?Sized>(
    algebra: &crate::Algebra,
    overcomplete: bool,
    rng: &mut R,
) -> Result<Measurement> {
    if overcomplete {
        let k = algebra.rank() + 1 + rng.gen_range(0..=algebra.rank());
        let atoms: Vec<JordanElement> = (0..k)
            .map(|_| random_pure_state(algebra, rng).into_element())
            .collect();
        let mut s = JordanElement::zero(algebra);
        for a in &atoms {
            s.axpy(1.0, a);
        }
        if s.min_eigenvalue()? > 1e-6 {
            let r = s.apply_function(|x| 1.0 / x.sqrt(), Domain::POSITIVE)?;
            let effects = atoms
                .iter()
                .map(|a| r.quadratic(a))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Measurement::from_elements(effects));
        }
    }
    Measurement::spectral(&random_element(algebra, rng))
}

/// The three entropies of a state together with the sampled fine-grained squeeze.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub spectral: f64,
    pub decomposition: f64,
    /// Smallest `H(m(σ))` observed, including the spectral measurement.
    pub fine_grained_upper: f64,
    /// The lower bound `−⟨σ, ln σ⟩`.
    pub fine_grained_lower: f64,
    /// `H` of the spectral measurement.
    pub spectral_measurement: f64,
    pub n_measurements_sampled: usize,
    /// `min H(m(σ)) − spectral` over the random measurements only.
    pub worst_sampled_margin: f64,
    /// Random measurements that fell below the lower bound by more than [`ENTROPY_TOL`].
    pub lower_bound_violations: usize,
}

impl EntropyReport {
    /// All three expressions agree and the sampled bound holds.
    pub fn is_consistent(&self, tol: f64) -> bool {
        (self.spectral - self.decomposition).abs() <= tol
            && (self.spectral_measurement - self.spectral).abs() <= tol
            && (self.fine_grained_upper - self.spectral).abs() <= tol
            && self.worst_sampled_margin >= -tol
    }

    pub fn in_bits(&self) -> EntropyReport {
        EntropyReport {
            spectral: to_bits(self.spectral),
            decomposition: to_bits(self.decomposition),
            fine_grained_upper: to_bits(self.fine_grained_upper),
            fine_grained_lower: to_bits(self.fine_grained_lower),
            spectral_measurement: to_bits(self.spectral_measurement),
            worst_sampled_margin: to_bits(self.worst_sampled_margin),
            ..self.clone()
        }
    }
}

/// Samples `n_samples` fine-grained measurements (alternating projective and
/// overcomplete) and compares their outcome entropies with the spectral entropy.
pub fn fine_grained_entropy_bound(sigma: &State, n_samples: usize, seed: u64) -> Result<EntropyReport> {
    let spectral = spectral_entropy(sigma)?;
    let decomposition = decomposition_entropy(sigma)?;
    let spectral_measurement =
        shannon_entropy(&Measurement::spectral(sigma.element())?.measure(sigma)?)?;
    let mut rng = random::rng(seed);
    let mut best = spectral_measurement;
    let mut worst_margin = f64::INFINITY;
    let mut violations = 0;
    for i in 0..n_samples {
        let m = random_fine_grained(sigma.algebra(), i % 2 == 1, &mut rng)?;
        let p = m.measure(sigma)?;
        let total: f64 = p.iter().sum();
        let h = shannon_entropy(&p.iter().map(|x| x / total).collect::<Vec<_>>())?;
        best = best.min(h);
        worst_margin = worst_margin.min(h - spectral);
        if h < spectral - ENTROPY_TOL {
            violations += 1;
        }
    }
    Ok(EntropyReport {
        spectral,
        decomposition,
        fine_grained_upper: best,
        fine_grained_lower: spectral,
        spectral_measurement,
        n_measurements_sampled: n_samples,
        worst_sampled_margin: if n_samples == 0 { 0.0 } else { worst_margin },
        lower_bound_violations: violations,
    })
}
