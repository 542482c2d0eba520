//! Finite Euclidean Jordan algebras: elements, product, trace, spectral
//! decomposition and functional calculus.

mod algebra;
pub mod basis;
pub mod eigen;

use serde::{Deserialize, Serialize};

pub use algebra::{Algebra, SimpleType};
pub use basis::{CMat, C64};

use crate::error::{Error, Result};

/// Reconstruction / idempotency tolerance.
pub const RECONSTRUCTION_TOL: f64 = 1e-10;
/// Eigenvalues closer than this are merged into one idempotent.
pub const GROUP_TOL: f64 = 1e-8;
/// Smallest eigenvalue still accepted as positive.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// An element of a Euclidean Jordan algebra, stored as coordinates in the
/// fixed orthonormal basis documented in [`basis`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ElementRepr", into = "ElementRepr")]
pub struct JordanElement {
    algebra: Algebra,
    coeffs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    algebra: Algebra,
    coeffs: Vec<f64>,
}

impl TryFrom<ElementRepr> for JordanElement {
    type Error = Error;
    fn try_from(r: ElementRepr) -> Result<Self> {
        JordanElement::new(r.algebra, r.coeffs)
    }
}

impl From<JordanElement> for ElementRepr {
    fn from(e: JordanElement) -> Self {
        ElementRepr {
            algebra: e.algebra,
            coeffs: e.coeffs,
        }
    }
}

/// Where a scalar function may be evaluated.
#[derive(Debug, Clone, Copy)]
pub struct Domain {
    pub name: &'static str,
    pub contains: fn(f64) -> bool,
}

impl Domain {
    pub const REAL: Domain = Domain {
        name: "a real function",
        contains: |_| true,
    };
    pub const POSITIVE: Domain = Domain {
        name: "a function defined for λ > 0",
        contains: |x| x > 0.0,
    };
    pub const NONNEGATIVE: Domain = Domain {
        name: "a function defined for λ ≥ 0",
        contains: |x| x >= 0.0,
    };
}

/// `A = Σ λᵢ Eᵢ` with distinct eigenvalues in descending order.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub idempotents: Vec<JordanElement>,
}

impl SpectralDecomposition {
    pub fn reconstruct(&self) -> JordanElement {
        let algebra = self.idempotents[0].algebra.clone();
        let mut acc = JordanElement::zero(&algebra);
        for (l, e) in self.eigenvalues.iter().zip(&self.idempotents) {
            acc.axpy(*l, e);
        }
        acc
    }

    /// Eigenvalues repeated by the rank `tr(Eᵢ)` of their idempotent.
    pub fn weights_with_multiplicity(&self) -> Vec<f64> {
        self.eigenvalues
            .iter()
            .zip(&self.idempotents)
            .flat_map(|(l, e)| std::iter::repeat(*l).take(e.trace().round() as usize))
            .collect()
    }
}

impl JordanElement {
    pub fn new(algebra: Algebra, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != algebra.dim() {
            return Err(Error::CoeffLength {
                expected: algebra.dim(),
                got: coeffs.len(),
            });
        }
        Ok(JordanElement { algebra, coeffs })
    }

    pub fn zero(algebra: &Algebra) -> Self {
        JordanElement {
            algebra: algebra.clone(),
            coeffs: vec![0.0; algebra.dim()],
        }
    }

    pub fn unit(algebra: &Algebra) -> Self {
        let mut coeffs = vec![0.0; algebra.dim()];
        for (ty, off) in algebra.blocks() {
            basis::unit(ty, &mut coeffs[off..off + ty.dim()]);
        }
        JordanElement {
            algebra: algebra.clone(),
            coeffs,
        }
    }

    /// The diagonal element `diag(values)` of a matrix or classical algebra.
    pub fn diagonal(algebra: &Algebra, values: &[f64]) -> Result<Self> {
        let ty = algebra
            .as_simple()
            .ok_or_else(|| Error::Unsupported("diagonal of a direct sum".into()))?;
        let n = match ty {
            SimpleType::SpinFactor(_) => {
                return Err(Error::Unsupported("diagonal of a spin factor".into()))
            }
            _ => ty.rank(),
        };
        if values.len() != n {
            return Err(Error::CoeffLength {
                expected: n,
                got: values.len(),
            });
        }
        let mut e = JordanElement::zero(algebra);
        e.coeffs[..n].copy_from_slice(values);
        Ok(e)
    }

    /// Spin factor element `(t, v)`.
    pub fn spin(t: f64, v: &[f64]) -> Result<Self> {
        let algebra = Algebra::simple(SimpleType::SpinFactor(v.len()))?;
        let mut coeffs = vec![0.0; algebra.dim()];
        basis::spin_join(t, v, &mut coeffs);
        Ok(JordanElement { algebra, coeffs })
    }

    /// Element of a single matrix summand from its concrete (Hermitian) matrix.
    /// Quaternionic algebras expect the `2n × 2n` symplectic image.
    pub fn from_matrix(algebra: &Algebra, m: &CMat) -> Result<Self> {
        let ty = algebra
            .as_simple()
            .ok_or_else(|| Error::Unsupported("matrix form of a direct sum".into()))?;
        let size = ty
            .matrix_size()
            .ok_or_else(|| Error::Unsupported("matrix form of a spin factor".into()))?;
        if m.nrows() != size || m.ncols() != size {
            return Err(Error::InvalidInput(format!(
                "{ty} needs a {size}x{size} matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let mut coeffs = vec![0.0; ty.dim()];
        basis::from_matrix(ty, m, &mut coeffs);
        Ok(JordanElement {
            algebra: algebra.clone(),
            coeffs,
        })
    }

    /// Concrete matrix of a single matrix summand.
    pub fn to_matrix(&self) -> Result<CMat> {
        let ty = self
            .algebra
            .as_simple()
            .ok_or_else(|| Error::Unsupported("matrix form of a direct sum".into()))?;
        basis::to_matrix(ty, &self.coeffs)
            .ok_or_else(|| Error::Unsupported("matrix form of a spin factor".into()))
    }

    /// `(t, v)` coordinates of a spin factor element.
    pub fn spin_parts(&self) -> Result<(f64, Vec<f64>)> {
        match self.algebra.as_simple() {
            Some(SimpleType::SpinFactor(_)) => Ok(basis::spin_split(&self.coeffs)),
            _ => Err(Error::Unsupported(format!("{} is not a spin factor", self.algebra))),
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn jordan_product(&self, other: &JordanElement) -> Result<JordanElement> {
        self.algebra.ensure_same(&other.algebra)?;
        let mut coeffs = vec![0.0; self.coeffs.len()];
        for (ty, off) in self.algebra.blocks() {
            let r = off..off + ty.dim();
            basis::product(
                ty,
                &self.coeffs[r.clone()],
                &other.coeffs[r.clone()],
                &mut coeffs[r],
            );
        }
        Ok(JordanElement {
            algebra: self.algebra.clone(),
            coeffs,
        })
    }

    pub fn square(&self) -> JordanElement {
        self.jordan_product(self).expect("same algebra")
    }

    pub fn trace(&self) -> f64 {
        self.algebra
            .blocks()
            .map(|(ty, off)| basis::trace(ty, &self.coeffs[off..off + ty.dim()]))
            .sum()
    }

    /// `⟨a,b⟩ = tr(a∘b)`; the coefficient basis is orthonormal for it.
    pub fn inner_product(&self, other: &JordanElement) -> Result<f64> {
        self.algebra.ensure_same(&other.algebra)?;
        Ok(self.dot(other))
    }

    pub(crate) fn dot(&self, other: &JordanElement) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scaled(&self, s: f64) -> JordanElement {
        JordanElement {
            algebra: self.algebra.clone(),
            coeffs: self.coeffs.iter().map(|x| x * s).collect(),
        }
    }

    /// `self += s · other` (algebras must agree).
    pub fn axpy(&mut self, s: f64, other: &JordanElement) {
        debug_assert_eq!(self.algebra, other.algebra);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += s * b;
        }
    }

    pub fn checked_add(&self, other: &JordanElement) -> Result<JordanElement> {
        self.algebra.ensure_same(&other.algebra)?;
        let mut out = self.clone();
        out.axpy(1.0, other);
        Ok(out)
    }

    pub fn checked_sub(&self, other: &JordanElement) -> Result<JordanElement> {
        self.algebra.ensure_same(&other.algebra)?;
        let mut out = self.clone();
        out.axpy(-1.0, other);
        Ok(out)
    }

    /// `Σ sᵢ·aᵢ` over elements of one algebra.
    pub fn linear_combination(terms: &[(f64, &JordanElement)]) -> Result<JordanElement> {
        let (_, first) = terms
            .first()
            .ok_or_else(|| Error::InvalidInput("empty linear combination".into()))?;
        let mut acc = JordanElement::zero(&first.algebra);
        for (s, e) in terms {
            first.algebra.ensure_same(&e.algebra)?;
            acc.axpy(*s, e);
        }
        Ok(acc)
    }

    /// Quadratic representation `U_a(x) = 2a∘(a∘x) − a²∘x`; equals `a x a` for matrices.
    pub fn quadratic(&self, x: &JordanElement) -> Result<JordanElement> {
        let ax = self.jordan_product(x)?;
        let mut out = self.jordan_product(&ax)?.scaled(2.0);
        out.axpy(-1.0, &self.square().jordan_product(x)?);
        Ok(out)
    }

    /// Eigenvalues with multiplicity together with primitive idempotents,
    /// eigenvalues descending. Degenerate eigenspaces are split into an
    /// arbitrary orthogonal frame.
    pub fn primitive_decomposition(&self) -> Result<Vec<(f64, JordanElement)>> {
        let mut out = Vec::with_capacity(self.algebra.rank());
        for (ty, off) in self.algebra.blocks() {
            for (l, local) in eigen::primitives(ty, &self.coeffs[off..off + ty.dim()])? {
                let mut coeffs = vec![0.0; self.coeffs.len()];
                coeffs[off..off + ty.dim()].copy_from_slice(&local);
                out.push((
                    l,
                    JordanElement {
                        algebra: self.algebra.clone(),
                        coeffs,
                    },
                ));
            }
        }
        out.sort_by(|a, b| b.0.total_cmp(&a.0));
        Ok(out)
    }

    /// Eigenvalues with multiplicity, descending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self
            .primitive_decomposition()?
            .into_iter()
            .map(|(l, _)| l)
            .collect())
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self
            .eigenvalues()?
            .last()
            .copied()
            .expect("algebras have rank >= 1"))
    }

    pub fn is_positive(&self, tol: f64) -> Result<bool> {
        Ok(self.min_eigenvalue()? >= -tol)
    }

    /// Spectral decomposition with eigenvalues closer than `group_tol` merged.
    pub fn spectral_decompose(&self, group_tol: f64) -> Result<SpectralDecomposition> {
        let prims = self.primitive_decomposition()?;
        let mut eigenvalues: Vec<f64> = Vec::new();
        let mut idempotents: Vec<JordanElement> = Vec::new();
        let mut leader = f64::NAN;
        let mut count = 0usize;
        for (l, p) in prims {
            if !idempotents.is_empty() && leader - l <= group_tol {
                let last = idempotents.last_mut().expect("nonempty");
                last.axpy(1.0, &p);
                count += 1;
                let mean = eigenvalues.last_mut().expect("nonempty");
                *mean += (l - *mean) / count as f64;
            } else {
                leader = l;
                count = 1;
                eigenvalues.push(l);
                idempotents.push(p);
            }
        }
        Ok(SpectralDecomposition {
            eigenvalues,
            idempotents,
        })
    }

    /// `f(A) = Σ f(λᵢ) Eᵢ`.
    pub fn apply_function<F: Fn(f64) -> f64>(&self, f: F, domain: Domain) -> Result<JordanElement> {
        let mut acc = JordanElement::zero(&self.algebra);
        for (l, p) in self.primitive_decomposition()? {
            if !(domain.contains)(l) {
                return Err(Error::Domain {
                    function: domain.name,
                    value: l,
                });
            }
            acc.axpy(f(l), &p);
        }
        Ok(acc)
    }

    pub fn direct_sum(&self, other: &JordanElement) -> JordanElement {
        let mut coeffs = self.coeffs.clone();
        coeffs.extend_from_slice(&other.coeffs);
        JordanElement {
            algebra: self.algebra.direct_sum(&other.algebra),
            coeffs,
        }
    }

    /// Symplectic embedding `H(n) → C(2n)`: a unital Jordan homomorphism that
    /// doubles the trace.
    pub fn embed_quaternion(&self) -> Result<JordanElement> {
        match self.algebra.as_simple() {
            Some(SimpleType::QuaternionHermitian(n)) => {
                let m = basis::quaternion_to_complex(n, &self.coeffs);
                JordanElement::from_matrix(&Algebra::complex(2 * n), &m)
            }
            _ => Err(Error::Unsupported(format!(
                "{} is not a quaternionic algebra",
                self.algebra
            ))),
        }
    }

    pub fn distance(&self, other: &JordanElement) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}
