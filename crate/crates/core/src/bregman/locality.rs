use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{neg_entropy, Generator};
use crate::error::{Error, Result};
use crate::jordan::{Algebra, JordanElement};
use crate::state_space::random::{self, random_state_with};

/// Least-squares fit `F(σ) ≈ c·⟨σ, ln σ⟩ + ⟨a, σ⟩` over sampled states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalityFit {
    pub c: f64,
    /// Coefficients of `a`.
    pub affine: Vec<f64>,
    /// Largest absolute misfit over the samples.
    pub residual: f64,
    pub samples: usize,
}

/// Fits `F` against negative entropy plus an affine function on an algebra
/// of rank at least 3. The affine part absorbs constants since `tr σ = 1`.
pub fn check_locality_theorem(
    f: &dyn Generator,
    algebra: &Algebra,
    samples: usize,
    seed: u64,
) -> Result<LocalityFit> {
    if algebra.rank() < 3 {
        return Err(Error::InvalidInput(format!(
            "the fit needs rank at least 3, {algebra} has rank {}",
            algebra.rank()
        )));
    }
    let d = algebra.dim();
    if samples < 2 * (d + 1) {
        return Err(Error::InvalidInput(format!("at least {} samples needed", 2 * (d + 1))));
    }
    let mut rng = random::rng(seed);
    let mut design = DMatrix::zeros(samples, d + 1);
    let mut target = DVector::zeros(samples);
    for i in 0..samples {
        // mix full-rank and low-rank states so the entropy column is not
        // close to affine on the sample
        let cap = if i % 3 == 0 { Some(1 + i % algebra.rank()) } else { None };
        let s = random_state_with(algebra, cap, &mut rng);
        design[(i, 0)] = neg_entropy(s.element())?;
        for (k, c) in s.element().coeffs().iter().enumerate() {
            design[(i, k + 1)] = *c;
        }
        target[i] = f.value(s.element())?;
    }
    let svd = design.clone().svd(true, true);
    let x = svd
        .solve(&target, 1e-12)
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    let fitted = &design * &x;
    let residual = (fitted - &target).amax();
    let affine = x.rows(1, d).iter().copied().collect::<Vec<_>>();
    // sanity: the affine part is an element of the algebra
    JordanElement::new(algebra.clone(), affine.clone())?;
    Ok(LocalityFit {
        c: x[0],
        affine,
        residual,
        samples,
    })
}
