//! Three interactive views for the browser page in `www/`: the CHSH value of
//! `Φ⁺` as measurement angles move, the entropy of spin-factor states, and
//! divergence curves against a mixing weight.
//!
//! The functions below are plain Rust; the `wasm` module re-exports them to
//! JavaScript.

use jordan_info::bregman::{locality_configuration, BregmanGenerator, Generator};
use jordan_info::entropy::spectral_entropy;
use jordan_info::nonlocality::{box_from_quantum, chsh_value, maximally_entangled, QuantumStrategy};
use jordan_info::state_space::State;
use jordan_info::{Algebra, JordanElement};

/// `[S, E00, E01, E10, E11]` for `Φ⁺` with the given angles in radians.
pub fn chsh_profile(a0: f64, a1: f64, b0: f64, b1: f64) -> Result<Vec<f64>, String> {
    let s = QuantumStrategy {
        state: maximally_entangled(),
        alice_angles: [a0, a1],
        bob_angles: [b0, b1],
    };
    let bx = box_from_quantum(&s).map_err(|e| e.to_string())?;
    let mut out = vec![chsh_value(&bx)];
    for x in 0..2 {
        for y in 0..2 {
            out.push(bx.correlator(x, y));
        }
    }
    Ok(out)
}

/// `[S, λ₊, λ₋]` for the state `½(1, r·e₁)` of the spin factor of dimension
/// `d + 1`; entropy in nats.
pub fn spin_entropy(d: usize, r: f64) -> Result<Vec<f64>, String> {
    if !(0.0..=1.0).contains(&r) {
        return Err(format!("radius {r} is outside [0, 1]"));
    }
    let mut v = vec![0.0; d];
    if let Some(first) = v.first_mut() {
        *first = 0.5 * r;
    }
    let e = JordanElement::spin(0.5, &v).map_err(|e| e.to_string())?;
    let s = State::new(e).map_err(|e| e.to_string())?;
    let h = spectral_entropy(&s).map_err(|e| e.to_string())?;
    Ok(vec![h, 0.5 * (1.0 + r), 0.5 * (1.0 - r)])
}

/// Samples `D_F(ρ, (1−t)ρ + tσᵢ)` for the two complementary states of one
/// random configuration on `algebra`, at `points` weights in `(0, 1)`.
/// Returns rows `[t, D₁, D₂, −ln(1−t)]` flattened.
pub fn locality_curve(algebra: &str, generator: &str, seed: u64, points: usize) -> Result<Vec<f64>, String> {
    let alg: Algebra = algebra.parse().map_err(|e: jordan_info::Error| e.to_string())?;
    let f: BregmanGenerator = generator.parse().map_err(|e: jordan_info::Error| e.to_string())?;
    let conf = locality_configuration(&alg, seed).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(4 * points);
    for k in 1..=points {
        let t = k as f64 / (points + 1) as f64;
        let d = |sigma: &State| -> Result<f64, String> {
            let mix = State::mixture(&[(1.0 - t, &conf.rho), (t, sigma)]).map_err(|e| e.to_string())?;
            f.divergence(conf.rho.element(), mix.element()).map_err(|e| e.to_string())
        };
        out.extend([t, d(&conf.sigma1)?, d(&conf.sigma2)?, -(1.0 - t).ln()]);
    }
    Ok(out)
}

#[cfg(target_arch = "wasm32")]
mod wasm {
    use wasm_bindgen::prelude::*;

    #[wasm_bindgen]
    pub fn chsh_profile(a0: f64, a1: f64, b0: f64, b1: f64) -> Result<Vec<f64>, JsError> {
        super::chsh_profile(a0, a1, b0, b1).map_err(|e| JsError::new(&e))
    }

    #[wasm_bindgen]
    pub fn spin_entropy(d: usize, r: f64) -> Result<Vec<f64>, JsError> {
        super::spin_entropy(d, r).map_err(|e| JsError::new(&e))
    }

    #[wasm_bindgen]
    pub fn locality_curve(algebra: &str, generator: &str, seed: u32, points: usize) -> Result<Vec<f64>, JsError> {
        super::locality_curve(algebra, generator, seed as u64, points).map_err(|e| JsError::new(&e))
    }
}
