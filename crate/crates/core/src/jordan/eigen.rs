//! Cyclic Jacobi eigensolver and the per-summand primitive decompositions
//! built on top of it.
//!
//! Complex Hermitian matrices `X + iY` are diagonalised through the real
//! symmetric embedding `[[X, −Y], [Y, X]]`; every eigenvalue appears twice and
//! each real eigenvector `(u; v)` yields the complex eigenvector `u + iv`.
//! Quaternionic matrices go one level further through the symplectic
//! embedding, where eigenvectors come in pairs `x, Jx`.

use nalgebra::{DMatrix, DVector};

use super::algebra::SimpleType;
use super::basis::{self, CMat, C64};
use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 64;

/// Eigenvalues (descending) and eigenvectors (columns) of a real symmetric matrix.
pub fn jacobi_eigen(mut a: DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "jacobi_eigen needs a square matrix");
    let mut v = DMatrix::<f64>::identity(n, n);
    let scale = a.norm();

    let mut converged = n < 2 || scale == 0.0;
    let mut sweep = 0;
    while !converged {
        if sweep == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps: sweep });
        }
        sweep += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                // Negligible against both diagonal entries: drop it.
                if sweep > 4 && (app.abs() + 100.0 * apq.abs() == app.abs())
                    && (aqq.abs() + 100.0 * apq.abs() == aqq.abs())
                {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        converged = off.sqrt() <= 1e-15 * scale;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok((values, vectors))
}

fn cdot(x: &DVector<C64>, y: &DVector<C64>) -> C64 {
    x.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum()
}

fn rayleigh(h: &CMat, x: &DVector<C64>) -> f64 {
    cdot(x, &(h * x)).re
}

/// Orthonormal eigenvectors of a complex Hermitian matrix, eigenvalues descending.
pub fn hermitian_eigen(h: &CMat) -> Result<Vec<(f64, DVector<C64>)>> {
    let n = h.nrows();
    if h.iter().all(|z| z.im == 0.0) {
        let (vals, vecs) = jacobi_eigen(h.map(|z| z.re))?;
        return Ok(vals
            .into_iter()
            .enumerate()
            .map(|(k, l)| (l, vecs.column(k).map(|x| C64::new(x, 0.0))))
            .collect());
    }

    let embedded = DMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let z = h[(r % n, c % n)];
        match (r < n, c < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let (_, vecs) = jacobi_eigen(embedded)?;

    let mut accepted: Vec<DVector<C64>> = Vec::with_capacity(n);
    for k in 0..2 * n {
        let col = vecs.column(k);
        let mut z = DVector::from_fn(n, |i, _| C64::new(col[i], col[n + i]));
        for q in &accepted {
            let proj = cdot(q, &z);
            z -= q * proj;
        }
        let norm = z.norm();
        if norm > 0.5 {
            accepted.push(z / C64::new(norm, 0.0));
            if accepted.len() == n {
                break;
            }
        }
    }
    if accepted.len() != n {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }
    let mut out: Vec<(f64, DVector<C64>)> =
        accepted.into_iter().map(|z| (rayleigh(h, &z), z)).collect();
    out.sort_by(|a, b| b.0.total_cmp(&a.0));
    Ok(out)
}

/// The antiunitary `J(x₁; x₂) = (−x̄₂; x̄₁)` commuting with the symplectic image.
fn quaternion_j(x: &DVector<C64>) -> DVector<C64> {
    let n = x.len() / 2;
    DVector::from_fn(2 * n, |i, _| {
        if i < n {
            -x[n + i].conj()
        } else {
            x[i - n].conj()
        }
    })
}

fn outer(x: &DVector<C64>) -> CMat {
    x * x.adjoint()
}

/// Primitive decomposition of one summand: `(λ, coefficients of a primitive idempotent)`,
/// eigenvalues descending, one entry per unit of rank.
pub(crate) fn primitives(ty: SimpleType, c: &[f64]) -> Result<Vec<(f64, Vec<f64>)>> {
    let dim = ty.dim();
    let mut out = match ty {
        SimpleType::Classical(n) => (0..n)
            .map(|i| {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                (c[i], e)
            })
            .collect::<Vec<_>>(),
        SimpleType::SpinFactor(d) => {
            let (t, v) = basis::spin_split(c);
            let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let axis: Vec<f64> = if r > 0.0 {
                v.iter().map(|x| x / r).collect()
            } else {
                let mut e = vec![0.0; d];
                e[0] = 1.0;
                e
            };
            [1.0, -1.0]
                .into_iter()
                .map(|sign| {
                    let mut e = vec![0.0; dim];
                    let half: Vec<f64> = axis.iter().map(|x| sign * x * 0.5).collect();
                    basis::spin_join(0.5, &half, &mut e);
                    (t + sign * r, e)
                })
                .collect()
        }
        SimpleType::RealHermitian(_) | SimpleType::ComplexHermitian(_) => {
            let h = basis::to_matrix(ty, c).expect("matrix summand");
            hermitian_eigen(&h)?
                .into_iter()
                .map(|(l, z)| {
                    let mut e = vec![0.0; dim];
                    basis::from_matrix(ty, &outer(&z), &mut e);
                    (l, e)
                })
                .collect()
        }
        SimpleType::QuaternionHermitian(n) => {
            let h = basis::quaternion_to_complex(n, c);
            let vecs = hermitian_eigen(&h)?;
            let mut span: Vec<DVector<C64>> = Vec::with_capacity(2 * n);
            let mut prims = Vec::with_capacity(n);
            for (_, z0) in vecs {
                let mut z = z0;
                for q in &span {
                    let proj = cdot(q, &z);
                    z -= q * proj;
                }
                let norm = z.norm();
                if norm <= 0.5 {
                    continue;
                }
                let x = z / C64::new(norm, 0.0);
                let y = quaternion_j(&x);
                let proj = outer(&x) + outer(&y);
                let l = rayleigh(&h, &x);
                span.push(x);
                span.push(y);
                let mut e = vec![0.0; dim];
                basis::complex_to_quaternion(n, &proj, &mut e);
                prims.push((l, e));
                if prims.len() == n {
                    break;
                }
            }
            if prims.len() != n {
                return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
            }
            prims
        }
    };
    out.sort_by(|a, b| b.0.total_cmp(&a.0));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_diagonal_input() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 3.0, 2.0]));
        let (vals, _) = jacobi_eigen(a).unwrap();
        assert_eq!(vals, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn jacobi_matches_nalgebra_reference() {
        let n = 7;
        let b = DMatrix::from_fn(n, n, |i, j| ((i * 7 + j * 3) % 11) as f64 - 5.0);
        let a = &b + b.transpose();
        let (vals, vecs) = jacobi_eigen(a.clone()).unwrap();
        let mut reference: Vec<f64> = a.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        reference.sort_by(|x, y| y.total_cmp(x));
        for (x, y) in vals.iter().zip(&reference) {
            assert!((x - y).abs() < 1e-11, "{x} vs {y}");
        }
        let recon = &vecs * DMatrix::from_diagonal(&DVector::from_vec(vals)) * vecs.transpose();
        assert!((recon - a).norm() < 1e-11);
        assert!((vecs.transpose() * &vecs - DMatrix::identity(n, n)).norm() < 1e-12);
    }

    #[test]
    fn hermitian_eigen_degenerate_spectrum() {
        // unit + rank-one perturbation: eigenvalue 1 with multiplicity 2
        let v = DVector::from_vec(vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8), C64::new(0.0, 0.0)]);
        let h = CMat::identity(3, 3) + outer(&v);
        let eig = hermitian_eigen(&h).unwrap();
        assert!((eig[0].0 - 2.0).abs() < 1e-13);
        assert!((eig[1].0 - 1.0).abs() < 1e-13);
        assert!((eig[2].0 - 1.0).abs() < 1e-13);
        for i in 0..3 {
            for j in 0..3 {
                let ip = cdot(&eig[i].1, &eig[j].1);
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((ip - C64::new(expected, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn quaternion_primitives_have_unit_trace() {
        let ty = SimpleType::QuaternionHermitian(2);
        let c = [0.3, -0.2, 0.1, 0.4, -0.5, 0.7];
        let prims = primitives(ty, &c).unwrap();
        assert_eq!(prims.len(), 2);
        for (_, e) in &prims {
            assert!((basis::trace(ty, e) - 1.0).abs() < 1e-12);
        }
    }
}
