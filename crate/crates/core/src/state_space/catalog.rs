//! Explicitly constructed affinities with known recovery maps.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;

use super::random::{self, random_orthogonal, random_unitary};
use super::{Affinity, Measurement, State};
use crate::error::Result;
use crate::jordan::basis::{self, CMat, C64};
use crate::jordan::{Algebra, JordanElement, SimpleType};

/// A named affinity, with a recovery map when one exists.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub forward: Affinity,
    pub recovery: Option<Affinity>,
}

/// Block-diagonal coefficient matrix assembled from per-summand blocks.
fn block_diagonal(blocks: &[DMatrix<f64>]) -> DMatrix<f64> {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut m = DMatrix::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        m.view_mut((off, off), (b.nrows(), b.ncols())).copy_from(b);
        off += b.nrows();
    }
    m
}

/// Coefficient matrix of `X ↦ U X U†` on one matrix summand.
fn conjugation_block(ty: SimpleType, u: &CMat) -> DMatrix<f64> {
    let d = ty.dim();
    let mut m = DMatrix::zeros(d, d);
    for k in 0..d {
        let mut c = vec![0.0; d];
        c[k] = 1.0;
        let x = basis::to_matrix(ty, &c).expect("matrix summand");
        let mut out = vec![0.0; d];
        basis::from_matrix(ty, &(u * x * u.adjoint()), &mut out);
        m.column_mut(k).copy_from_slice(&out);
    }
    m
}

/// Symplectic image of a quaternionic unitary `D₁ O D₂` (`O` real orthogonal,
/// `Dᵢ` diagonal unit quaternions).
fn random_symplectic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let diag = |rng: &mut R| {
        let mut m = CMat::zeros(2 * n, 2 * n);
        for i in 0..n {
            let q: Vec<f64> = (0..4).map(|_| rng.sample(rand_distr::StandardNormal)).collect();
            let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
            let a = C64::new(q[0], q[1]) / norm;
            let b = C64::new(q[2], q[3]) / norm;
            m[(i, i)] = a;
            m[(i, n + i)] = b;
            m[(n + i, i)] = -b.conj();
            m[(n + i, n + i)] = a.conj();
        }
        m
    };
    let d1 = diag(rng);
    let o = random_orthogonal(n, rng);
    let d2 = diag(rng);
    let mut om = CMat::zeros(2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            om[(r, c)] = C64::new(o[(r, c)], 0.0);
            om[(n + r, n + c)] = C64::new(o[(r, c)], 0.0);
        }
    }
    d1 * om * d2
}

/// A random Jordan automorphism and its inverse, summand by summand.
pub fn random_automorphism<R: Rng + ?Sized>(algebra: &Algebra, rng: &mut R) -> (Affinity, Affinity) {
    let mut fwd = Vec::new();
    let mut inv = Vec::new();
    for &ty in algebra.summands() {
        let block = match ty {
            SimpleType::ComplexHermitian(n) => conjugation_block(ty, &random_unitary(n, rng)),
            SimpleType::RealHermitian(n) => {
                conjugation_block(ty, &random_orthogonal(n, rng).map(|x| C64::new(x, 0.0)))
            }
            SimpleType::QuaternionHermitian(n) => conjugation_block(ty, &random_symplectic(n, rng)),
            SimpleType::SpinFactor(d) => {
                let o = random_orthogonal(d, rng);
                let mut m = DMatrix::zeros(d + 1, d + 1);
                m[(0, 0)] = 1.0;
                m.view_mut((1, 1), (d, d)).copy_from(&o);
                m
            }
            SimpleType::Classical(n) => {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(rng);
                let mut m = DMatrix::zeros(n, n);
                for (from, to) in perm.into_iter().enumerate() {
                    m[(to, from)] = 1.0;
                }
                m
            }
        };
        // every block is orthogonal, so the inverse is the transpose
        inv.push(block.transpose());
        fwd.push(block);
    }
    (
        Affinity::new(algebra.clone(), algebra.clone(), block_diagonal(&fwd)).expect("square"),
        Affinity::new(algebra.clone(), algebra.clone(), block_diagonal(&inv)).expect("square"),
    )
}

/// `ρ ↦ (1−t)ρ + t·tr(ρ)·c`.
pub fn depolarizing(c: &State, t: f64) -> Affinity {
    let algebra = c.algebra();
    let unit = JordanElement::unit(algebra);
    let d = algebra.dim();
    let mut m = DMatrix::identity(d, d) * (1.0 - t);
    m += nalgebra::DVector::from_column_slice(c.element().coeffs())
        * nalgebra::DVector::from_column_slice(unit.coeffs()).transpose()
        * t;
    Affinity::new(algebra.clone(), algebra.clone(), m).expect("square")
}

/// Section `Classical(rank) → algebra` onto the computational frame and the
/// retraction reading the frame back out, with `R ∘ S = id`.
pub fn classical_section(algebra: &Algebra) -> Result<(Affinity, Affinity)> {
    let frame: Vec<JordanElement> = Measurement::computational(algebra)
        .outcomes()
        .iter()
        .map(|(_, t)| t.element().clone())
        .collect();
    let classical = Algebra::classical(frame.len());
    let section = Affinity::from_linear_map(&classical, algebra, |p| {
        let mut acc = JordanElement::zero(algebra);
        for (w, e) in p.coeffs().iter().zip(&frame) {
            acc.axpy(*w, e);
        }
        Ok(acc)
    })?;
    let retraction = Affinity::from_linear_map(algebra, &classical, |x| {
        JordanElement::new(
            classical.clone(),
            frame.iter().map(|e| e.inner_product(x)).collect::<Result<_>>()?,
        )
    })?;
    Ok((section, retraction))
}

/// Inclusion `R(n) → C(n)` and the real-part retraction `C(n) → R(n)`.
pub fn real_section(n: usize) -> Result<(Affinity, Affinity)> {
    let real = Algebra::real(n);
    let complex = Algebra::complex(n);
    let section = Affinity::from_linear_map(&real, &complex, |x| {
        JordanElement::from_matrix(&complex, &x.to_matrix()?)
    })?;
    let retraction = Affinity::from_linear_map(&complex, &real, |x| {
        JordanElement::from_matrix(&real, &x.to_matrix()?.map(|z| C64::new(z.re, 0.0)))
    })?;
    Ok((section, retraction))
}

/// Identity, a random automorphism, a depolarising map, classical
/// section/retraction pairs and, on complex algebras, the real-part pair.
pub fn channel_catalog(algebra: &Algebra, seed: u64) -> Result<Vec<CatalogEntry>> {
    let mut rng = random::rng(seed);
    let mut out = vec![CatalogEntry {
        name: "identity".into(),
        forward: Affinity::identity(algebra),
        recovery: Some(Affinity::identity(algebra)),
    }];

    let (aut, aut_inv) = random_automorphism(algebra, &mut rng);
    out.push(CatalogEntry {
        name: "automorphism".into(),
        forward: aut,
        recovery: Some(aut_inv),
    });

    let fixed = random::random_state_with(algebra, None, &mut rng);
    out.push(CatalogEntry {
        name: "depolarizing(0.3)".into(),
        forward: depolarizing(&fixed, 0.3),
        recovery: None,
    });

    let (s, r) = classical_section(algebra)?;
    out.push(CatalogEntry {
        name: "classical-section".into(),
        forward: s.clone(),
        recovery: Some(r.clone()),
    });
    out.push(CatalogEntry {
        name: "classical-retraction".into(),
        forward: r,
        recovery: Some(s),
    });

    if let Some(SimpleType::ComplexHermitian(n)) = algebra.as_simple() {
        let (s, r) = real_section(n)?;
        out.push(CatalogEntry {
            name: "real-section".into(),
            forward: s.clone(),
            recovery: Some(r.clone()),
        });
        out.push(CatalogEntry {
            name: "real-retraction".into(),
            forward: r,
            recovery: Some(s),
        });
    }
    Ok(out)
}
