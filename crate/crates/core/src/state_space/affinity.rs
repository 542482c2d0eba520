use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{random, State, NORMALIZATION_TOL};
use crate::error::{Error, Result};
use crate::jordan::{Algebra, CMat, JordanElement};

/// A linear map between coefficient spaces that is meant to send states to states.
///
/// `matrix` has shape `target.dim() × source.dim()` and acts on coefficient
/// vectors in the fixed orthonormal bases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AffinityRepr", into = "AffinityRepr")]
pub struct Affinity {
    source: Algebra,
    target: Algebra,
    matrix: DMatrix<f64>,
}

/// Channel file layout: descriptors plus the raw row-major matrix.
#[derive(Serialize, Deserialize)]
struct AffinityRepr {
    source: Algebra,
    target: Algebra,
    matrix: Vec<Vec<f64>>,
}

impl TryFrom<AffinityRepr> for Affinity {
    type Error = Error;
    fn try_from(r: AffinityRepr) -> Result<Self> {
        let rows = r.matrix.len();
        let cols = r.matrix.first().map(|row| row.len()).unwrap_or(0);
        if r.matrix.iter().any(|row| row.len() != cols) {
            return Err(Error::InvalidInput("ragged channel matrix".into()));
        }
        let flat: Vec<f64> = r.matrix.into_iter().flatten().collect();
        Affinity::new(r.source, r.target, DMatrix::from_row_slice(rows, cols, &flat))
    }
}

impl From<Affinity> for AffinityRepr {
    fn from(a: Affinity) -> Self {
        AffinityRepr {
            matrix: a
                .matrix
                .row_iter()
                .map(|r| r.iter().copied().collect())
                .collect(),
            source: a.source,
            target: a.target,
        }
    }
}

impl Affinity {
    pub fn new(source: Algebra, target: Algebra, matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != target.dim() || matrix.ncols() != source.dim() {
            return Err(Error::InvalidInput(format!(
                "map {source} -> {target} needs a {}x{} matrix, got {}x{}",
                target.dim(),
                source.dim(),
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Affinity {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(algebra: &Algebra) -> Self {
        let d = algebra.dim();
        Affinity {
            source: algebra.clone(),
            target: algebra.clone(),
            matrix: DMatrix::identity(d, d),
        }
    }

    /// Tabulates a linear map by evaluating it on the basis of `source`.
    pub fn from_linear_map<F>(source: &Algebra, target: &Algebra, f: F) -> Result<Self>
    where
        F: Fn(&JordanElement) -> Result<JordanElement>,
    {
        let d = source.dim();
        let mut matrix = DMatrix::zeros(target.dim(), d);
        for k in 0..d {
            let mut c = vec![0.0; d];
            c[k] = 1.0;
            let image = f(&JordanElement::new(source.clone(), c)?)?;
            target.ensure_same(image.algebra())?;
            matrix.set_column(k, &DVector::from_column_slice(image.coeffs()));
        }
        Affinity::new(source.clone(), target.clone(), matrix)
    }

    /// `X ↦ Σ K X K†` on concrete matrices (quaternionic algebras use the symplectic image).
    pub fn from_kraus(source: &Algebra, target: &Algebra, kraus: &[CMat]) -> Result<Self> {
        Affinity::from_linear_map(source, target, |x| {
            let m = x.to_matrix()?;
            let mut out = CMat::zeros(kraus[0].nrows(), kraus[0].nrows());
            for k in kraus {
                if k.ncols() != m.nrows() {
                    return Err(Error::InvalidInput("Kraus operator shape".into()));
                }
                out += k * &m * k.adjoint();
            }
            JordanElement::from_matrix(target, &out)
        })
    }

    /// Measure-and-prepare map `x ↦ Σ ⟨eᵢ, x⟩ ωᵢ`.
    pub fn measure_prepare(effects: &[JordanElement], outputs: &[&State]) -> Result<Self> {
        let source = effects
            .first()
            .ok_or_else(|| Error::InvalidInput("no effects".into()))?
            .algebra()
            .clone();
        let target = outputs
            .first()
            .ok_or_else(|| Error::InvalidInput("no outputs".into()))?
            .algebra()
            .clone();
        if effects.len() != outputs.len() {
            return Err(Error::InvalidInput("effects and outputs differ in length".into()));
        }
        let mut matrix = DMatrix::zeros(target.dim(), source.dim());
        for (e, w) in effects.iter().zip(outputs) {
            source.ensure_same(e.algebra())?;
            target.ensure_same(w.algebra())?;
            matrix += DVector::from_column_slice(w.element().coeffs())
                * DVector::from_column_slice(e.coeffs()).transpose();
        }
        Affinity::new(source, target, matrix)
    }

    pub fn source(&self) -> &Algebra {
        &self.source
    }

    pub fn target(&self) -> &Algebra {
        &self.target
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn apply(&self, x: &JordanElement) -> Result<JordanElement> {
        self.source.ensure_same(x.algebra())?;
        let v = &self.matrix * DVector::from_column_slice(x.coeffs());
        JordanElement::new(self.target.clone(), v.as_slice().to_vec())
    }

    /// Applies the map and re-validates the output as a state.
    pub fn apply_state(&self, s: &State) -> Result<State> {
        State::new(self.apply(s.element())?)
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &Affinity) -> Result<Affinity> {
        self.target.ensure_same(&then.source)?;
        Affinity::new(
            self.source.clone(),
            then.target.clone(),
            &then.matrix * &self.matrix,
        )
    }

    /// Largest `|tr Φ(x) − tr x|` over basis elements.
    pub fn trace_defect(&self) -> f64 {
        let unit_t = JordanElement::unit(&self.target);
        let unit_s = JordanElement::unit(&self.source);
        // tr Φ(x) = ⟨Φᵀ(1), x⟩, so compare Φᵀ(1) with 1.
        let pulled = self.matrix.transpose() * DVector::from_column_slice(unit_t.coeffs());
        pulled
            .iter()
            .zip(unit_s.coeffs())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.trace_defect() <= NORMALIZATION_TOL
    }

    /// Smallest output eigenvalue over extreme-point probes: primitive
    /// idempotents of random elements and of the computational frame.
    pub fn positivity_probe(&self, samples: usize, seed: u64) -> Result<f64> {
        let mut rng = random::rng(seed);
        let mut worst = f64::INFINITY;
        let mut probes: Vec<JordanElement> = super::Measurement::computational(&self.source)
            .outcomes()
            .iter()
            .map(|(_, t)| t.element().clone())
            .collect();
        for _ in 0..samples {
            let e = random::random_element(&self.source, &mut rng);
            probes.extend(e.primitive_decomposition()?.into_iter().map(|(_, p)| p));
        }
        for p in probes {
            worst = worst.min(self.apply(&p)?.min_eigenvalue()?);
        }
        Ok(worst)
    }
}
