//! Fixed orthonormal bases and the concrete matrix representation of each
//! simple summand.
//!
//! Coefficient order inside a matrix summand of size `n`:
//!
//! | index range            | basis element                                   |
//! |------------------------|-------------------------------------------------|
//! | `0..n`                 | diagonal matrix units `E_ii`                    |
//! | then, per pair `i < j` | row-major over `(i, j)`; one block per pair     |
//!
//! A pair block holds `(E_ij + E_ji)/√2` for real matrices; adds `i(E_ij − E_ji)/√2`
//! for complex matrices; adds the `i`, `j`, `k` analogues for quaternionic matrices.
//! The off-diagonal entry is therefore `(c₀ + c₁i + c₂j + c₃k)/√2`.
//!
//! Spin factor `S(d)` element `(t, v)` has coefficients `(√2·t, √2·v₁, …, √2·v_d)`,
//! which makes the basis orthonormal under `⟨a,b⟩ = tr(a∘b) = 2(st + u·v)`.
//!
//! Quaternionic matrices `Q = Q₀ + Q₁i + Q₂j + Q₃k` are represented by the
//! symplectic embedding `[[A, B], [−B̄, Ā]]` with `A = Q₀ + iQ₁`, `B = Q₂ + iQ₃`.

use nalgebra::{Complex, DMatrix};

use super::algebra::SimpleType;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;

pub(crate) const SQRT2: f64 = std::f64::consts::SQRT_2;
pub(crate) const FRAC_1_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Number of real coefficients per off-diagonal pair.
fn pair_width(ty: SimpleType) -> usize {
    match ty {
        SimpleType::RealHermitian(_) => 1,
        SimpleType::ComplexHermitian(_) => 2,
        SimpleType::QuaternionHermitian(_) => 4,
        _ => 0,
    }
}

/// Iterates `(i, j, offset)` for the off-diagonal blocks of a matrix summand.
fn pairs(n: usize, width: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n)
        .flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
        .enumerate()
        .map(move |(k, (i, j))| (i, j, n + k * width))
}

/// The four real parts of a quaternionic Hermitian matrix.
pub(crate) struct QuaternionParts {
    pub q: [DMatrix<f64>; 4],
}

pub(crate) fn quaternion_parts(n: usize, c: &[f64]) -> QuaternionParts {
    let mut q = [
        DMatrix::zeros(n, n),
        DMatrix::zeros(n, n),
        DMatrix::zeros(n, n),
        DMatrix::zeros(n, n),
    ];
    for i in 0..n {
        q[0][(i, i)] = c[i];
    }
    for (i, j, off) in pairs(n, 4) {
        q[0][(i, j)] = c[off] * FRAC_1_SQRT2;
        q[0][(j, i)] = c[off] * FRAC_1_SQRT2;
        for u in 1..4 {
            q[u][(i, j)] = c[off + u] * FRAC_1_SQRT2;
            q[u][(j, i)] = -c[off + u] * FRAC_1_SQRT2;
        }
    }
    QuaternionParts { q }
}

/// Symplectic embedding of a quaternionic matrix into `2n × 2n` complex matrices.
pub(crate) fn quaternion_to_complex(n: usize, c: &[f64]) -> CMat {
    let QuaternionParts { q } = quaternion_parts(n, c);
    let mut m = CMat::zeros(2 * n, 2 * n);
    for r in 0..n {
        for s in 0..n {
            let a = C64::new(q[0][(r, s)], q[1][(r, s)]);
            let b = C64::new(q[2][(r, s)], q[3][(r, s)]);
            m[(r, s)] = a;
            m[(r, n + s)] = b;
            m[(n + r, s)] = -b.conj();
            m[(n + r, n + s)] = a.conj();
        }
    }
    m
}

/// Inverse of [`quaternion_to_complex`], projecting onto the image first.
pub(crate) fn complex_to_quaternion(n: usize, m: &CMat, out: &mut [f64]) {
    let a = |r: usize, s: usize| (m[(r, s)] + m[(n + r, n + s)].conj()) * 0.5;
    let b = |r: usize, s: usize| (m[(r, n + s)] - m[(n + r, s)].conj()) * 0.5;
    for i in 0..n {
        out[i] = a(i, i).re;
    }
    for (i, j, off) in pairs(n, 4) {
        // Hermitian part of each real component.
        let aij = a(i, j);
        let aji = a(j, i);
        let bij = b(i, j);
        let bji = b(j, i);
        out[off] = (aij.re + aji.re) * 0.5 * SQRT2;
        out[off + 1] = (aij.im - aji.im) * 0.5 * SQRT2;
        out[off + 2] = (bij.re - bji.re) * 0.5 * SQRT2;
        out[off + 3] = (bij.im - bji.im) * 0.5 * SQRT2;
    }
}

/// Concrete complex matrix of a matrix-type summand (`None` for spin factors).
pub(crate) fn to_matrix(ty: SimpleType, c: &[f64]) -> Option<CMat> {
    match ty {
        SimpleType::Classical(n) => Some(CMat::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(c[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })),
        SimpleType::RealHermitian(n) | SimpleType::ComplexHermitian(n) => {
            let w = pair_width(ty);
            let mut m = CMat::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = C64::new(c[i], 0.0);
            }
            for (i, j, off) in pairs(n, w) {
                let im = if w == 2 { c[off + 1] } else { 0.0 };
                let z = C64::new(c[off], im) * FRAC_1_SQRT2;
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
            Some(m)
        }
        SimpleType::QuaternionHermitian(n) => Some(quaternion_to_complex(n, c)),
        SimpleType::SpinFactor(_) => None,
    }
}

/// Reads the Hermitian part of `m` back into coefficients.
pub(crate) fn from_matrix(ty: SimpleType, m: &CMat, out: &mut [f64]) {
    match ty {
        SimpleType::Classical(n) => {
            for i in 0..n {
                out[i] = m[(i, i)].re;
            }
        }
        SimpleType::RealHermitian(n) | SimpleType::ComplexHermitian(n) => {
            let w = pair_width(ty);
            for i in 0..n {
                out[i] = m[(i, i)].re;
            }
            for (i, j, off) in pairs(n, w) {
                let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                out[off] = z.re * SQRT2;
                if w == 2 {
                    out[off + 1] = z.im * SQRT2;
                }
            }
        }
        SimpleType::QuaternionHermitian(n) => complex_to_quaternion(n, m, out),
        SimpleType::SpinFactor(_) => unreachable!("spin factors have no matrix form"),
    }
}

/// Spin factor coordinates `(t, v)` from coefficients.
pub(crate) fn spin_split(c: &[f64]) -> (f64, Vec<f64>) {
    (
        c[0] * FRAC_1_SQRT2,
        c[1..].iter().map(|x| x * FRAC_1_SQRT2).collect(),
    )
}

pub(crate) fn spin_join(t: f64, v: &[f64], out: &mut [f64]) {
    out[0] = t * SQRT2;
    for (o, x) in out[1..].iter_mut().zip(v) {
        *o = x * SQRT2;
    }
}

/// Coefficients of the unit of a summand.
pub(crate) fn unit(ty: SimpleType, out: &mut [f64]) {
    match ty {
        SimpleType::SpinFactor(_) => {
            out.fill(0.0);
            out[0] = SQRT2;
        }
        SimpleType::Classical(_) => out.fill(1.0),
        SimpleType::RealHermitian(n)
        | SimpleType::ComplexHermitian(n)
        | SimpleType::QuaternionHermitian(n) => {
            out.fill(0.0);
            out[..n].fill(1.0);
        }
    }
}

/// Jordan trace of a summand.
pub(crate) fn trace(ty: SimpleType, c: &[f64]) -> f64 {
    match ty {
        SimpleType::SpinFactor(_) => c[0] * SQRT2,
        SimpleType::Classical(_) => c.iter().sum(),
        SimpleType::RealHermitian(n)
        | SimpleType::ComplexHermitian(n)
        | SimpleType::QuaternionHermitian(n) => c[..n].iter().sum(),
    }
}

/// Jordan product of two summand coefficient blocks.
pub(crate) fn product(ty: SimpleType, a: &[f64], b: &[f64], out: &mut [f64]) {
    match ty {
        SimpleType::Classical(_) => {
            for ((o, x), y) in out.iter_mut().zip(a).zip(b) {
                *o = x * y;
            }
        }
        SimpleType::SpinFactor(_) => {
            let (s, u) = spin_split(a);
            let (t, v) = spin_split(b);
            let dot: f64 = u.iter().zip(&v).map(|(x, y)| x * y).sum();
            let w: Vec<f64> = u.iter().zip(&v).map(|(x, y)| s * y + t * x).collect();
            spin_join(s * t + dot, &w, out);
        }
        _ => {
            let x = to_matrix(ty, a).expect("matrix summand");
            let y = to_matrix(ty, b).expect("matrix summand");
            let p = (&x * &y + &y * &x) * C64::new(0.5, 0.0);
            from_matrix(ty, &p, out);
        }
    }
}
