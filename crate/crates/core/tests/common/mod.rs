#![allow(dead_code)]

use std::f64::consts::TAU;

use holonomic_core::model::{Coupling, PulseParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One-period segment with Ω ∈ [0, 2], ω ∈ [1, 4], Δ ∈ [−2, 2], J ∈ [−2, 2].
pub fn random_cyclic(rng: &mut ChaCha8Rng, n: usize) -> PulseParams {
    let w = rng.random_range(1.0..4.0);
    let couplings = if n == 2 {
        vec![Coupling {
            i: 0,
            j: 1,
            value: rng.random_range(-2.0..2.0),
        }]
    } else {
        vec![]
    };
    PulseParams {
        omega_drive: (0..n).map(|_| rng.random_range(0.0..2.0)).collect(),
        omega_rot: vec![w; n],
        phase: (0..n).map(|_| rng.random_range(0.0..TAU)).collect(),
        detuning: (0..n).map(|_| rng.random_range(-2.0..2.0)).collect(),
        couplings,
        duration: TAU / w,
    }
}

/// 100 draws, alternating one and two qubits.
pub fn draws(seed: u64) -> Vec<PulseParams> {
    let mut r = rng(seed);
    (0..100).map(|k| random_cyclic(&mut r, 1 + k % 2)).collect()
}
