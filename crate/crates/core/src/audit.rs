//! Dimension count for two real qubits embedded in real symmetric 4×4 matrices.
//!
//! The ambient state space has affine dimension 9 while trace-one product
//! tensors span only an 8-dimensional affine slice, so local measurements
//! cannot separate every joint state.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jordan::Algebra;
use crate::state_space::random::{self, random_state_with};
use crate::state_space::{CompositeLayout, State};

/// Relative singular-value threshold for numeric rank.
pub const RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionAudit {
    pub ambient_state_dim: usize,
    pub product_slice_dim: usize,
}

/// Number of singular values above `RANK_TOL·σ_max`.
pub fn numeric_rank(m: &DMatrix<f64>) -> usize {
    let sv = m.singular_values();
    let top = sv.max();
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > RANK_TOL * top).count()
}

/// Affine dimension of a point set: rank of the differences from the first point.
pub fn affine_dimension(points: &[State]) -> Result<usize> {
    let Some(first) = points.first() else {
        return Err(Error::InvalidInput("no points".into()));
    };
    let d = first.algebra().dim();
    let mut m = DMatrix::zeros(points.len().saturating_sub(1).max(1), d);
    for (i, p) in points.iter().skip(1).enumerate() {
        let diff = p.element().checked_sub(first.element())?;
        for (k, c) in diff.coeffs().iter().enumerate() {
            m[(i, k)] = *c;
        }
    }
    Ok(numeric_rank(&m))
}

/// Samples `samples` random states of the ambient algebra and as many product
/// states `σ_A ⊗ σ_B`, and reports the affine dimension of each set.
pub fn audit_real_embedding(samples: usize, seed: u64) -> Result<DimensionAudit> {
    if samples < 10 {
        return Err(Error::InvalidInput("at least 10 samples are needed to span 9 dimensions".into()));
    }
    let layout = CompositeLayout::real_into_larger();
    let ambient = layout.composite_algebra();
    let local = Algebra::real(2);
    let mut rng = random::rng(seed);
    let joint: Vec<State> = (0..samples)
        .map(|_| random_state_with(&ambient, None, &mut rng))
        .collect();
    let products = (0..samples)
        .map(|_| {
            let a = random_state_with(&local, None, &mut rng);
            let b = random_state_with(&local, None, &mut rng);
            layout.tensor(&[&a, &b])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DimensionAudit {
        ambient_state_dim: affine_dimension(&joint)?,
        product_slice_dim: affine_dimension(&products)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_versus_eight() {
        let a = audit_real_embedding(40, 7).unwrap();
        assert_eq!(a, DimensionAudit { ambient_state_dim: 9, product_slice_dim: 8 });
    }

    #[test]
    fn rank_of_zero_matrix() {
        assert_eq!(numeric_rank(&DMatrix::zeros(3, 3)), 0);
    }
}
