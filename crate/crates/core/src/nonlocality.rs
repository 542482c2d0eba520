//! Two-party binary-input binary-output correlation boxes and CHSH values.

use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::jordan::{Algebra, CMat, JordanElement, C64};
use crate::state_space::random;
use crate::state_space::{CompositeLayout, Measurement, State, Test};

/// Tolerance for the normalisation and no-signalling checks of a box.
pub const BOX_TOL: f64 = 1e-10;

/// `p(a, b | x, y)` stored as `table[x][y][a][b]`.
///
/// In JSON this is a 2×2 grid indexed `[x][y]` of 2×2 outcome tables indexed `[a][b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Table", into = "Table")]
pub struct NoSignalingBox {
    table: Table,
}

type Table = [[[[f64; 2]; 2]; 2]; 2];

impl TryFrom<Table> for NoSignalingBox {
    type Error = Error;
    fn try_from(t: Table) -> Result<Self> {
        NoSignalingBox::new(t)
    }
}

impl From<NoSignalingBox> for Table {
    fn from(b: NoSignalingBox) -> Self {
        b.table
    }
}

fn sign(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        -1.0
    }
}

impl NoSignalingBox {
    /// Validates nonnegativity, normalisation and no-signalling within [`BOX_TOL`].
    pub fn new(table: Table) -> Result<Self> {
        let b = NoSignalingBox { table };
        if table.iter().flatten().flatten().flatten().any(|p| !(*p >= -BOX_TOL)) {
            return Err(Error::InvalidBox("negative or non-finite probability".into()));
        }
        let n = b.normalization_residual();
        if n > BOX_TOL {
            return Err(Error::InvalidBox(format!("outcome tables sum off by {n}")));
        }
        let s = b.signaling_residual();
        if s > BOX_TOL {
            return Err(Error::InvalidBox(format!("marginals signal by {s}")));
        }
        Ok(b)
    }

    fn from_fn(f: impl Fn(usize, usize, usize, usize) -> f64) -> Self {
        let mut table = [[[[0.0; 2]; 2]; 2]; 2];
        for (x, tx) in table.iter_mut().enumerate() {
            for (y, txy) in tx.iter_mut().enumerate() {
                for (a, ta) in txy.iter_mut().enumerate() {
                    for (b, p) in ta.iter_mut().enumerate() {
                        *p = f(x, y, a, b);
                    }
                }
            }
        }
        NoSignalingBox { table }
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn p(&self, a: usize, b: usize, x: usize, y: usize) -> f64 {
        self.table[x][y][a][b]
    }

    /// Largest `|Σ_{ab} p(a,b|x,y) − 1|`.
    pub fn normalization_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for tx in &self.table {
            for txy in tx {
                let s: f64 = txy.iter().flatten().sum();
                worst = worst.max((s - 1.0).abs());
            }
        }
        worst
    }

    /// Largest change of a one-party marginal under the other party's input.
    pub fn signaling_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for o in 0..2 {
            for x in 0..2 {
                let alice = |y: usize| self.table[x][y][o][0] + self.table[x][y][o][1];
                worst = worst.max((alice(0) - alice(1)).abs());
            }
            for y in 0..2 {
                let bob = |x: usize| self.table[x][y][0][o] + self.table[x][y][1][o];
                worst = worst.max((bob(0) - bob(1)).abs());
            }
        }
        worst
    }

    /// `E_{xy} = Σ (−1)^{a⊕b} p(a,b|x,y)`.
    pub fn correlator(&self, x: usize, y: usize) -> f64 {
        let t = &self.table[x][y];
        (0..2)
            .flat_map(|a| (0..2).map(move |b| (a, b)))
            .map(|(a, b)| sign(a, b) * t[a][b])
            .sum()
    }

    /// Convex mixture of boxes.
    pub fn mixture(terms: &[(f64, NoSignalingBox)]) -> Result<Self> {
        let total: f64 = terms.iter().map(|t| t.0).sum();
        if terms.iter().any(|t| t.0 < 0.0) || (total - 1.0).abs() > BOX_TOL {
            return Err(Error::InvalidBox("mixture weights must be a probability vector".into()));
        }
        Ok(NoSignalingBox::from_fn(|x, y, a, b| {
            terms.iter().map(|(w, bx)| w * bx.table[x][y][a][b]).sum()
        }))
    }
}

/// `E₀₀ + E₀₁ + E₁₀ − E₁₁`.
pub fn chsh_value(b: &NoSignalingBox) -> f64 {
    b.correlator(0, 0) + b.correlator(0, 1) + b.correlator(1, 0) - b.correlator(1, 1)
}

/// `p(a,b|x,y) = ½` when `a ⊕ b = x·y`.
pub fn pr_box() -> NoSignalingBox {
    NoSignalingBox::from_fn(|x, y, a, b| if (a ^ b) == (x & y) { 0.5 } else { 0.0 })
}

/// Every entry `¼`.
pub fn white_noise() -> NoSignalingBox {
    NoSignalingBox::from_fn(|_, _, _, _| 0.25)
}

/// Local deterministic box `a = alice[x]`, `b = bob[y]`.
pub fn deterministic_box(alice: [usize; 2], bob: [usize; 2]) -> NoSignalingBox {
    NoSignalingBox::from_fn(|x, y, a, b| if a == alice[x] && b == bob[y] { 1.0 } else { 0.0 })
}

/// All sixteen local deterministic boxes.
pub fn deterministic_boxes() -> Vec<NoSignalingBox> {
    let f = [[0, 0], [0, 1], [1, 0], [1, 1]];
    f.iter()
        .flat_map(|a| f.iter().map(move |b| deterministic_box(*a, *b)))
        .collect()
}

/// Largest CHSH value over the local deterministic boxes.
pub fn max_deterministic_chsh() -> f64 {
    deterministic_boxes()
        .iter()
        .map(chsh_value)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// A two-qubit state with ±1-valued measurements `cos θ·Z + sin θ·X` for each input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumStrategy {
    pub state: State,
    pub alice_angles: [f64; 2],
    pub bob_angles: [f64; 2],
}

fn qubit() -> Algebra {
    Algebra::complex(2)
}

fn two_qubits() -> CompositeLayout {
    CompositeLayout::complex(&[2, 2]).expect("valid layout")
}

/// Observable `cos θ·Z + sin θ·X`.
fn observable(theta: f64) -> CMat {
    let (s, c) = theta.sin_cos();
    CMat::from_row_slice(2, 2, &[C64::new(c, 0.0), C64::new(s, 0.0), C64::new(s, 0.0), C64::new(-c, 0.0)])
}

/// Projective measurement with outcome 0 for eigenvalue +1.
pub fn angle_measurement(theta: f64) -> Measurement {
    let o = observable(theta);
    let id = CMat::identity(2, 2);
    let half = C64::new(0.5, 0.0);
    let plus = JordanElement::from_matrix(&qubit(), &((&id + &o) * half)).expect("2x2");
    let minus = JordanElement::from_matrix(&qubit(), &((&id - &o) * half)).expect("2x2");
    Measurement::new(vec![
        ("+1".into(), Test::new(plus).expect("projection")),
        ("-1".into(), Test::new(minus).expect("projection")),
    ])
    .expect("sums to unit")
}

/// `|Φ⁺⟩ = (|00⟩ + |11⟩)/√2`.
pub fn maximally_entangled() -> State {
    crate::multipartite::bell_state().state().clone()
}

/// Real pure qubit state `cos(φ/2)|0⟩ + sin(φ/2)|1⟩`.
fn real_pure_qubit(phi: f64) -> State {
    let (s, c) = (phi / 2.0).sin_cos();
    let m = CMat::from_row_slice(2, 2, &[C64::new(c * c, 0.0), C64::new(c * s, 0.0), C64::new(c * s, 0.0), C64::new(s * s, 0.0)]);
    State::new(JordanElement::from_matrix(&qubit(), &m).expect("2x2")).expect("pure state")
}

/// Born-rule box of a strategy.
pub fn box_from_quantum(strategy: &QuantumStrategy) -> Result<NoSignalingBox> {
    let layout = two_qubits();
    layout.composite_algebra().ensure_same(strategy.state.algebra())?;
    let mut table = [[[[0.0; 2]; 2]; 2]; 2];
    for x in 0..2 {
        for y in 0..2 {
            let joint = angle_measurement(strategy.alice_angles[x])
                .tensor(&angle_measurement(strategy.bob_angles[y]), &layout)?;
            let p = joint.measure(&strategy.state)?;
            for a in 0..2 {
                for b in 0..2 {
                    table[x][y][a][b] = p[2 * a + b];
                }
            }
        }
    }
    NoSignalingBox::new(table)
}

/// State families searched by [`maximize_quantum_chsh`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyFamily {
    /// `Φ⁺` with four free angles.
    MaximallyEntangled,
    /// `Φ⁺` with Bob's angles tied to Alice's.
    TiedAngles,
    /// Real pure product states with four free angles (six coordinates).
    Separable,
}

/// Result of the CHSH search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChshOptimum {
    pub value: f64,
    pub strategy: QuantumStrategy,
    pub family: StrategyFamily,
    pub restarts: usize,
}

/// CHSH value of `Φ⁺`-type or product coordinates, evaluated by traces of
/// `ρ (A_x ⊗ B_y)` without building measurements.
struct Objective {
    family: StrategyFamily,
    phi_plus: CMat,
}

impl Objective {
    fn new(family: StrategyFamily) -> Self {
        Objective {
            family,
            phi_plus: maximally_entangled().element().to_matrix().expect("matrix"),
        }
    }

    fn dims(&self) -> usize {
        match self.family {
            StrategyFamily::MaximallyEntangled => 4,
            StrategyFamily::TiedAngles => 2,
            StrategyFamily::Separable => 6,
        }
    }

    fn angles(&self, c: &[f64]) -> ([f64; 2], [f64; 2]) {
        match self.family {
            StrategyFamily::TiedAngles => ([c[0], c[1]], [c[0], c[1]]),
            _ => ([c[0], c[1]], [c[2], c[3]]),
        }
    }

    fn state_matrix(&self, c: &[f64]) -> CMat {
        match self.family {
            StrategyFamily::Separable => {
                let a = real_pure_qubit(c[4]).element().to_matrix().expect("matrix");
                let b = real_pure_qubit(c[5]).element().to_matrix().expect("matrix");
                a.kronecker(&b)
            }
            _ => self.phi_plus.clone(),
        }
    }

    fn value(&self, c: &[f64]) -> f64 {
        let (al, bo) = self.angles(c);
        let rho = self.state_matrix(c);
        let e = |x: usize, y: usize| {
            (&rho * observable(al[x]).kronecker(&observable(bo[y]))).trace().re
        };
        e(0, 0) + e(0, 1) + e(1, 0) - e(1, 1)
    }

    fn strategy(&self, c: &[f64]) -> QuantumStrategy {
        let (alice_angles, bob_angles) = self.angles(c);
        let state = match self.family {
            StrategyFamily::Separable => two_qubits()
                .tensor(&[&real_pure_qubit(c[4]), &real_pure_qubit(c[5])])
                .expect("two qubits"),
            _ => maximally_entangled(),
        };
        QuantumStrategy {
            state,
            alice_angles,
            bob_angles,
        }
    }
}

const GRID: usize = 16;
const VALUE_TOL: f64 = 1e-9;
const MAX_SWEEPS: usize = 200;

/// Maximises a 2π-periodic function of one angle: a 16-point grid locates
/// the peak, then golden-section search refines within the neighbouring cells.
fn maximize_angle(f: impl Fn(f64) -> f64, start: f64) -> (f64, f64) {
    let h = 2.0 * PI / GRID as f64;
    let (mut best_t, mut best_v) = (start, f(start));
    for k in 0..GRID {
        let t = start + k as f64 * h;
        let v = f(t);
        if v > best_v {
            best_t = t;
            best_v = v;
        }
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (best_t - h, best_t + h);
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > 1e-10 {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    let t = 0.5 * (lo + hi);
    let v = f(t);
    if v >= best_v {
        (t, v)
    } else {
        (best_t, best_v)
    }
}

/// Multi-start coordinate ascent over the angles of a strategy family.
pub fn maximize_quantum_chsh(seed: u64, restarts: usize, family: StrategyFamily) -> Result<ChshOptimum> {
    if restarts == 0 {
        return Err(Error::InvalidInput("at least one restart is needed".into()));
    }
    let obj = Objective::new(family);
    let mut rng = random::rng(seed);
    let mut best: Option<(f64, Vec<f64>)> = None;
    for _ in 0..restarts {
        let mut c: Vec<f64> = (0..obj.dims()).map(|_| rng.gen_range(-PI..PI)).collect();
        let mut value = obj.value(&c);
        for _ in 0..MAX_SWEEPS {
            let before = value;
            for k in 0..c.len() {
                let (t, v) = maximize_angle(
                    |t| {
                        let mut trial = c.clone();
                        trial[k] = t;
                        obj.value(&trial)
                    },
                    c[k],
                );
                if v > value {
                    c[k] = t;
                    value = v;
                }
            }
            if value - before < VALUE_TOL * 1e-3 {
                break;
            }
        }
        if best.as_ref().map_or(true, |b| value > b.0) {
            best = Some((value, c));
        }
    }
    let (_, c) = best.expect("restarts >= 1");
    let strategy = obj.strategy(&c);
    // report the Born-rule value of the final strategy
    let value = chsh_value(&box_from_quantum(&strategy)?);
    Ok(ChshOptimum {
        value,
        strategy,
        family,
        restarts,
    })
}
