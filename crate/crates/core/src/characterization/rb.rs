//! Single-qubit Clifford randomized benchmarking.
//!
//! Each sequence starts in |0⟩, applies m random Cliffords (each followed by
//! the target gate in the interleaved variant), then the exact inverse of the
//! ideal product, and records the survival probability (1 + ⟨Z⟩)/2. Noise is a
//! depolarizing channel after every Clifford, the recovery and the target.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::characterization::ptm::Channel;
use crate::error::{invalid, Error, Result};
use crate::linalg::{c, identity, ComplexMatrix};
use crate::synthesis::rotation;

/// I, Rx(±π/2), Rx(π), Ry(±π/2), Ry(π).
pub fn clifford_set() -> Vec<ComplexMatrix> {
    let x = [1.0, 0.0, 0.0];
    let y = [0.0, 1.0, 0.0];
    vec![
        identity(2),
        rotation(x, FRAC_PI_2),
        rotation(x, -FRAC_PI_2),
        rotation(x, PI),
        rotation(y, FRAC_PI_2),
        rotation(y, -FRAC_PI_2),
        rotation(y, PI),
    ]
}

pub const DEFAULT_M_VALUES: [usize; 6] = [2, 4, 8, 16, 32, 64];
pub const DEFAULT_SEQUENCES: usize = 40;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RbConfig {
    pub m_values: Vec<usize>,
    pub n_sequences: usize,
    pub seed: u64,
    /// Depolarizing strength after each Clifford and the recovery.
    pub clifford_eps: f64,
    /// Depolarizing strength after each interleaved target.
    pub target_eps: f64,
}

impl Default for RbConfig {
    fn default() -> Self {
        Self {
            m_values: DEFAULT_M_VALUES.to_vec(),
            n_sequences: DEFAULT_SEQUENCES,
            seed: 0,
            clifford_eps: 0.0,
            target_eps: 0.0,
        }
    }
}

impl RbConfig {
    fn validate(&self) -> Result<()> {
        if self.m_values.is_empty() || self.n_sequences == 0 {
            return invalid("RB needs at least one m value and one sequence");
        }
        for eps in [self.clifford_eps, self.target_eps] {
            if !(0.0..=1.0).contains(&eps) {
                return invalid(format!("depolarizing strength {eps} outside [0, 1]"));
            }
        }
        Ok(())
    }
}

/// Interleaved gate: what is applied and what the recovery assumes.
#[derive(Clone, Debug)]
pub struct RbTarget {
    pub implemented: ComplexMatrix,
    pub ideal: ComplexMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RbFit {
    pub a: f64,
    pub p: f64,
    pub b: f64,
    pub a_stderr: f64,
    pub p_stderr: f64,
    pub b_stderr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RbRecord {
    pub variant: String,
    pub m_values: Vec<usize>,
    pub mean_fidelity: Vec<f64>,
    /// Standard error of the mean over sequences.
    pub stderr: Vec<f64>,
    pub n_sequences: usize,
    pub fit: Option<RbFit>,
    pub fit_error: Option<String>,
}

fn survival(rho: &ComplexMatrix) -> f64 {
    rho[(0, 0)].re
}

fn sequence_rng(seed: u64, m_index: usize, seq: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((m_index as u64) << 32) | seq as u64);
    rng
}

fn run_sequence(
    cliffords: &[ComplexMatrix],
    m: usize,
    rng: &mut ChaCha8Rng,
    cfg: &RbConfig,
    target: Option<&RbTarget>,
) -> f64 {
    let mut rho = ComplexMatrix::zeros(2, 2);
    rho[(0, 0)] = c(1.0, 0.0);
    let mut ideal = identity(2);
    let noisy = |u: &ComplexMatrix, eps: f64| Channel::Depolarized {
        unitary: u.clone(),
        eps,
    };
    for _ in 0..m {
        let g = &cliffords[rng.random_range(0..cliffords.len())];
        rho = noisy(g, cfg.clifford_eps).apply(&rho);
        ideal = g * ideal;
        if let Some(t) = target {
            rho = noisy(&t.implemented, cfg.target_eps).apply(&rho);
            ideal = &t.ideal * ideal;
        }
    }
    rho = noisy(&ideal.adjoint(), cfg.clifford_eps).apply(&rho);
    survival(&rho)
}

/// Reference RB when `target` is `None`, interleaved otherwise.
pub fn rb_run(cfg: &RbConfig, target: Option<&RbTarget>) -> Result<RbRecord> {
    cfg.validate()?;
    if let Some(t) = target {
        if t.implemented.nrows() != 2 || t.ideal.nrows() != 2 {
            return invalid("randomized benchmarking supports single-qubit targets only");
        }
    }
    let cliffords = clifford_set();
    let mut mean_fidelity = Vec::with_capacity(cfg.m_values.len());
    let mut stderr = Vec::with_capacity(cfg.m_values.len());
    for (mi, &m) in cfg.m_values.iter().enumerate() {
        let values: Vec<f64> = (0..cfg.n_sequences)
            .into_par_iter()
            .map(|s| {
                let mut rng = sequence_rng(cfg.seed, mi, s);
                run_sequence(&cliffords, m, &mut rng, cfg, target)
            })
            .collect();
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = if values.len() > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        mean_fidelity.push(mean.clamp(0.0, 1.0));
        stderr.push((var / n).sqrt());
    }
    let xs: Vec<f64> = cfg.m_values.iter().map(|&m| m as f64).collect();
    let (fit, fit_error) = match fit_exponential(&xs, &mean_fidelity, 2) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(RbRecord {
        variant: if target.is_some() { "interleaved" } else { "reference" }.into(),
        m_values: cfg.m_values.clone(),
        mean_fidelity,
        stderr,
        n_sequences: cfg.n_sequences,
        fit,
        fit_error,
    })
}

fn model(theta: &Vector3<f64>, m: f64) -> f64 {
    theta[0] * theta[1].powf(m) + theta[2]
}

/// Least-squares fit of y = A·pᵐ + B by Levenberg–Marquardt, starting from
/// A = 0.5, p = 0.99, B = 0.5.
///
/// Data that do not decay at all (spread below 1e-12) are reported as p = 1,
/// B = 1/d, where `d` is the Hilbert-space dimension.
pub fn fit_exponential(m: &[f64], y: &[f64], d: usize) -> Result<RbFit> {
    if m.len() != y.len() || m.len() < 3 {
        return Err(Error::Fit(format!("need at least 3 points, got {}", m.len())));
    }
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let spread = y.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    if spread < 1e-12 {
        let b = 1.0 / d as f64;
        return Ok(RbFit {
            a: mean - b,
            p: 1.0,
            b,
            a_stderr: 0.0,
            p_stderr: 0.0,
            b_stderr: 0.0,
        });
    }

    let cost = |t: &Vector3<f64>| -> f64 { m.iter().zip(y).map(|(&mi, &yi)| (model(t, mi) - yi).powi(2)).sum() };
    let jacobian = |t: &Vector3<f64>| -> Vec<Vector3<f64>> {
        m.iter()
            .map(|&mi| {
                let pm = t[1].powf(mi);
                let dp = if mi == 0.0 {
                    0.0
                } else {
                    t[0] * mi * t[1].powf(mi - 1.0)
                };
                Vector3::new(pm, dp, 1.0)
            })
            .collect()
    };

    let mut theta = Vector3::new(0.5, 0.99, 0.5);
    let mut lambda = 1e-3;
    let mut current = cost(&theta);
    let mut converged = false;
    for _ in 0..500 {
        let jac = jacobian(&theta);
        let mut jtj = Matrix3::zeros();
        let mut jtr = Vector3::zeros();
        for ((row, &mi), &yi) in jac.iter().zip(m).zip(y) {
            jtj += row * row.transpose();
            jtr += row * (yi - model(&theta, mi));
        }
        let mut accepted = false;
        for _ in 0..40 {
            let mut damped = jtj;
            for k in 0..3 {
                damped[(k, k)] += lambda * jtj[(k, k)].max(1e-12);
            }
            let Some(step) = damped.lu().solve(&jtr) else {
                lambda *= 10.0;
                continue;
            };
            let mut trial = theta + step;
            trial[1] = trial[1].clamp(1e-9, 1.5);
            let c_trial = cost(&trial);
            if c_trial <= current {
                let rel = (current - c_trial) / current.max(1e-300);
                let step_norm = (trial - theta).norm();
                theta = trial;
                current = c_trial;
                lambda = (lambda / 10.0).max(1e-15);
                accepted = true;
                if rel < 1e-15 || step_norm < 1e-15 || current < 1e-30 {
                    converged = true;
                }
                break;
            }
            lambda *= 10.0;
        }
        if !accepted {
            // no downhill step at any damping: a local minimum
            converged = true;
        }
        if converged {
            break;
        }
    }
    if !converged || !theta.iter().all(|v| v.is_finite()) {
        return Err(Error::Fit("Levenberg–Marquardt did not converge".into()));
    }

    let dof = m.len().saturating_sub(3);
    let jac = jacobian(&theta);
    let mut jtj = Matrix3::zeros();
    for row in &jac {
        jtj += row * row.transpose();
    }
    let sigma2 = if dof > 0 { current / dof as f64 } else { 0.0 };
    let cov = jtj.try_inverse().map(|inv| inv * sigma2);
    let se = |k: usize| cov.map(|cv| cv[(k, k)].max(0.0).sqrt()).unwrap_or(f64::INFINITY);
    Ok(RbFit {
        a: theta[0],
        p: theta[1],
        b: theta[2],
        a_stderr: se(0),
        p_stderr: se(1),
        b_stderr: se(2),
    })
}

/// F = 1 − (1 − p_gate/p_ref)(d − 1)/d, clamped to [0, 1].
pub fn gate_fidelity_from_decays(p_ref: f64, p_gate: f64, d: usize) -> Result<f64> {
    if p_ref == 0.0 || !p_ref.is_finite() {
        return invalid("reference decay p_ref must be non-zero");
    }
    let d = d as f64;
    Ok((1.0 - (1.0 - p_gate / p_ref) * (d - 1.0) / d).clamp(0.0, 1.0))
}

pub fn rb_gate_fidelity(reference: &RbRecord, interleaved: &RbRecord, n: usize) -> Result<f64> {
    let (Some(r), Some(g)) = (&reference.fit, &interleaved.fit) else {
        return Err(Error::Fit("both RB fits must have converged".into()));
    };
    gate_fidelity_from_decays(r.p, g.p, 1 << n)
}
