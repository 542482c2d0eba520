//! Seeded sampling of elements, states, unitaries and channels.
//!
//! All generators are `ChaCha8Rng` seeded through `SeedableRng::seed_from_u64`,
//! so a `(seed, call sequence)` pair reproduces the same draws on every platform.
//!
//! * States: Hilbert–Schmidt style. A Gaussian `n × k` matrix `G` over the
//!   summand's division algebra gives `GG†/tr(GG†)`; `k` is the rank cap.
//!   Spin factors draw `(½, v)` with `v` uniform in the ball of radius ½
//!   (on the sphere when capped at rank 1). Classical summands draw a flat
//!   Dirichlet vector on `k` random coordinates. Direct sums weight their
//!   summands by a flat Dirichlet vector.
//! * Channels: Stinespring style. A Gaussian `nk × n` matrix is orthonormalised
//!   into an isometry `V`; the Kraus operators are its `k` row blocks.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use super::{Affinity, State};
use crate::error::{Error, Result};
use crate::jordan::basis::{self, CMat, C64};
use crate::jordan::{Algebra, JordanElement, SimpleType};

pub type TrialRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent per-trial seed from a base seed.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    // splitmix64 finaliser
    let mut z = seed ^ trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn gauss<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn complex_gauss<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(gauss(rng), gauss(rng)) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_complex_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| complex_gauss(rng))
}

/// Flat Dirichlet sample of length `n`.
pub fn dirichlet<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let x: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let s: f64 = x.iter().sum();
    x.into_iter().map(|v| v / s).collect()
}

/// Modified Gram–Schmidt on the columns of `m` (full column rank assumed).
pub fn orthonormalize_columns(mut m: CMat) -> CMat {
    for j in 0..m.ncols() {
        for i in 0..j {
            let qi = m.column(i).clone_owned();
            let proj: C64 = qi.dotc(&m.column(j));
            let mut cj = m.column_mut(j);
            cj -= qi * proj;
        }
        let norm = m.column(j).norm();
        m.column_mut(j).unscale_mut(norm);
    }
    m
}

pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    orthonormalize_columns(gaussian_complex_matrix(n, n, rng))
}

pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let g = CMat::from_fn(n, n, |_, _| C64::new(gauss(rng), 0.0));
    orthonormalize_columns(g).map(|z| z.re)
}

/// Gaussian element with independent standard normal coefficients.
pub fn random_element<R: Rng + ?Sized>(algebra: &Algebra, rng: &mut R) -> JordanElement {
    let coeffs = (0..algebra.dim()).map(|_| gauss(rng)).collect();
    JordanElement::new(algebra.clone(), coeffs).expect("length matches")
}

fn positive_summand<R: Rng + ?Sized>(
    ty: SimpleType,
    rank_cap: Option<usize>,
    rng: &mut R,
) -> Vec<f64> {
    let k = rank_cap.unwrap_or(ty.rank()).clamp(1, ty.rank());
    let mut out = vec![0.0; ty.dim()];
    match ty {
        SimpleType::Classical(n) => {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(rng);
            let w = dirichlet(k, rng);
            for (i, p) in idx.into_iter().zip(w) {
                out[i] = p;
            }
        }
        SimpleType::SpinFactor(d) => {
            let dir: Vec<f64> = (0..d).map(|_| gauss(rng)).collect();
            let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
            let radius = if k == 1 {
                0.5
            } else {
                0.5 * rng.gen::<f64>().powf(1.0 / d as f64)
            };
            let v: Vec<f64> = dir.iter().map(|x| x / norm * radius).collect();
            basis::spin_join(0.5, &v, &mut out);
        }
        SimpleType::RealHermitian(n) => {
            // full rank: real part of a complex GG†, i.e. n×2n real G; a square
            // real G puts too much mass near singular matrices
            let cols = if k == n { 2 * n } else { k };
            let g = CMat::from_fn(n, cols, |_, _| C64::new(gauss(rng), 0.0));
            basis::from_matrix(ty, &(&g * g.adjoint()), &mut out);
        }
        SimpleType::ComplexHermitian(n) => {
            let g = gaussian_complex_matrix(n, k, rng);
            basis::from_matrix(ty, &(&g * g.adjoint()), &mut out);
        }
        SimpleType::QuaternionHermitian(n) => {
            let a = gaussian_complex_matrix(n, k, rng);
            let b = gaussian_complex_matrix(n, k, rng);
            let mut g = CMat::zeros(2 * n, 2 * k);
            for r in 0..n {
                for c in 0..k {
                    g[(r, c)] = a[(r, c)];
                    g[(r, k + c)] = b[(r, c)];
                    g[(n + r, c)] = -b[(r, c)].conj();
                    g[(n + r, k + c)] = a[(r, c)].conj();
                }
            }
            basis::from_matrix(ty, &(&g * g.adjoint()), &mut out);
        }
    }
    let tr = basis::trace(ty, &out);
    out.iter_mut().for_each(|x| *x /= tr);
    out
}

/// Random state; `rank_cap` limits the rank of every summand.
pub fn random_state_with<R: Rng + ?Sized>(
    algebra: &Algebra,
    rank_cap: Option<usize>,
    rng: &mut R,
) -> State {
    let weights = if algebra.summands().len() == 1 {
        vec![1.0]
    } else {
        dirichlet(algebra.summands().len(), rng)
    };
    let mut coeffs = Vec::with_capacity(algebra.dim());
    for ((ty, _), w) in algebra.blocks().zip(weights) {
        coeffs.extend(positive_summand(ty, rank_cap, rng).into_iter().map(|x| x * w));
    }
    let element = JordanElement::new(algebra.clone(), coeffs).expect("length matches");
    State::from_positive(element)
}

pub fn random_state(algebra: &Algebra, rank_cap: Option<usize>, seed: u64) -> State {
    random_state_with(algebra, rank_cap, &mut rng(seed))
}

/// Random pure state (a primitive idempotent). On direct sums the summand is
/// chosen with probability proportional to its rank.
pub fn random_pure_state<R: Rng + ?Sized>(algebra: &Algebra, rng: &mut R) -> State {
    if algebra.summands().len() == 1 {
        return random_state_with(algebra, Some(1), rng);
    }
    let mut pick = rng.gen_range(0..algebra.rank());
    let mut coeffs = vec![0.0; algebra.dim()];
    for (ty, offset) in algebra.blocks() {
        if pick < ty.rank() {
            let part = positive_summand(ty, Some(1), rng);
            coeffs[offset..offset + part.len()].copy_from_slice(&part);
            break;
        }
        pick -= ty.rank();
    }
    State::from_positive(JordanElement::new(algebra.clone(), coeffs).expect("length matches"))
}

/// Kraus operators of a Stinespring-random channel on `n × n` matrices.
pub fn random_kraus<R: Rng + ?Sized>(n: usize, env_dim: usize, rng: &mut R) -> Vec<CMat> {
    let env = env_dim.max(1);
    let v = orthonormalize_columns(gaussian_complex_matrix(n * env, n, rng));
    (0..env)
        .map(|e| v.rows(e * n, n).clone_owned())
        .collect()
}

/// Random column-stochastic matrix.
pub fn random_stochastic<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(rows, cols);
    for c in 0..cols {
        m.set_column(c, &DVector::from_vec(dirichlet(rows, rng)));
    }
    m
}

/// Random positive trace-preserving map on `algebra`.
pub fn random_channel_with<R: Rng + ?Sized>(
    algebra: &Algebra,
    env_dim: usize,
    rng: &mut R,
) -> Result<Affinity> {
    match algebra.as_simple() {
        Some(SimpleType::ComplexHermitian(n)) => {
            Affinity::from_kraus(algebra, algebra, &random_kraus(n, env_dim, rng))
        }
        Some(SimpleType::Classical(n)) => {
            Affinity::new(algebra.clone(), algebra.clone(), random_stochastic(n, n, rng))
        }
        _ => Err(Error::Unsupported(format!(
            "random channels are only sampled on complex and classical algebras, not {algebra}"
        ))),
    }
}

pub fn random_channel(algebra: &Algebra, env_dim: usize, seed: u64) -> Result<Affinity> {
    random_channel_with(algebra, env_dim, &mut rng(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::Domain;

    #[test]
    fn reproducible_for_fixed_seed() {
        let alg = Algebra::complex(3);
        let a = random_state(&alg, None, 42);
        let b = random_state(&alg, None, 42);
        assert_eq!(a.element().coeffs(), b.element().coeffs());
        assert_ne!(
            a.element().coeffs(),
            random_state(&alg, None, 43).element().coeffs()
        );
    }

    #[test]
    fn states_have_unit_trace_and_nonnegative_spectrum() {
        for spec in ["C3", "R3", "H2", "S3", "P4", "C2+P2"] {
            let alg: Algebra = spec.parse().unwrap();
            for seed in 0..20 {
                let s = random_state(&alg, None, seed);
                assert!((s.element().trace() - 1.0).abs() < 1e-12, "{spec}");
                assert!(s.element().min_eigenvalue().unwrap() >= 0.0, "{spec}");
            }
        }
    }

    #[test]
    fn rank_cap_limits_support() {
        let alg = Algebra::complex(4);
        let s = random_state(&alg, Some(2), 5);
        let nonzero = s
            .element()
            .eigenvalues()
            .unwrap()
            .into_iter()
            .filter(|l| *l > 1e-12)
            .count();
        assert_eq!(nonzero, 2);
    }

    #[test]
    fn monte_carlo_mean_overlap_with_unit_and_primitive() {
        // E⟨σ, P⟩ = 1/n for a fixed rank-one P by unitary invariance.
        let n = 3;
        let alg = Algebra::complex(n);
        let unit_n = JordanElement::unit(&alg).scaled(1.0 / n as f64);
        let p = JordanElement::diagonal(&alg, &[1.0, 0.0, 0.0]).unwrap();
        let mut r = rng(11);
        let samples = 10_000;
        let (mut s_unit, mut s_p, mut s_p2) = (0.0, 0.0, 0.0);
        for _ in 0..samples {
            let s = random_state_with(&alg, None, &mut r);
            s_unit += s.element().inner_product(&unit_n).unwrap();
            let x = s.element().inner_product(&p).unwrap();
            s_p += x;
            s_p2 += x * x;
        }
        let m = samples as f64;
        assert!((s_unit / m - 1.0 / n as f64).abs() < 1e-12);
        let mean = s_p / m;
        let se = ((s_p2 / m - mean * mean) / m).sqrt();
        assert!((mean - 1.0 / n as f64).abs() < 3.0 * se, "{mean} ± {se}");
    }

    #[test]
    fn unitary_env_dim_one_is_invertible() {
        let alg = Algebra::complex(3);
        let ch = random_channel(&alg, 1, 3).unwrap();
        let s = random_state(&alg, None, 8);
        let out = ch.apply(s.element()).unwrap();
        let mut a = s.element().eigenvalues().unwrap();
        let mut b = out.eigenvalues().unwrap();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn unitality_matches_direct_evaluation() {
        let alg = Algebra::complex(3);
        let mixed = JordanElement::unit(&alg).scaled(1.0 / 3.0);
        for (env, seed) in [(1, 1), (2, 2), (4, 3)] {
            let ch = random_channel(&alg, env, seed).unwrap();
            let out = ch.apply(&mixed).unwrap();
            // Σ K K† = I exactly when the channel is unital
            let kraus = random_kraus(3, env, &mut rng(seed));
            let sum = kraus.iter().fold(CMat::zeros(3, 3), |acc, k| acc + k * k.adjoint());
            let unital = (sum - CMat::identity(3, 3)).norm() < 1e-10;
            assert_eq!(out.distance(&mixed) < 1e-10, unital, "env {env}");
        }
    }

    #[test]
    fn unsupported_channel_algebra() {
        assert!(matches!(
            random_channel(&Algebra::spin(3), 2, 0),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn random_elements_have_full_spectrum() {
        let alg = Algebra::quaternion(2);
        let e = random_element(&alg, &mut rng(1));
        assert!(e.apply_function(|x| x, Domain::REAL).unwrap().distance(&e) < 1e-12);
    }
}
