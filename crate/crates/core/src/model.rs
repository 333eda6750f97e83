//! Driven Zeeman + Ising Hamiltonian and its closed-form dynamical invariant.
//!
//! ```text
//! H(t) = ½ Σ_i Ω_i [cos(ω_i t + φ_i) σx_i + sin(ω_i t + φ_i) σy_i]
//!      + ½ Σ_i Δ_i σz_i + ¼ Σ_{i<j} J_ij σz_i σz_j
//! I(t) = Σ_i Ω_i [cos(ω_i t + φ_i) σx_i + sin(ω_i t + φ_i) σy_i]
//!      + Σ_i (Δ_i − ω_i) σz_i + ½ Σ_{i<j} J_ij σz_i σz_j
//! ```
//!
//! so that `I = 2H − Σ_i ω_i σz_i` holds identically.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{c, frobenius, zeros, ComplexMatrix, Pauli, PauliString};

pub const MAX_QUBITS: usize = 3;
const CYCLIC_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

/// One cyclic evolution segment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseParams {
    pub omega_drive: Vec<f64>,
    pub omega_rot: Vec<f64>,
    pub phase: Vec<f64>,
    pub detuning: Vec<f64>,
    #[serde(default, with = "coupling_map")]
    pub couplings: Vec<Coupling>,
    pub duration: f64,
}

mod coupling_map {
    use super::Coupling;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(v: &[Coupling], s: S) -> Result<S::Ok, S::Error> {
        let map: BTreeMap<String, f64> = v.iter().map(|c| (format!("{},{}", c.i, c.j), c.value)).collect();
        map.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Coupling>, D::Error> {
        let map = BTreeMap::<String, f64>::deserialize(d)?;
        map.into_iter()
            .map(|(k, value)| {
                let (a, b) = k
                    .split_once(',')
                    .ok_or_else(|| D::Error::custom(format!("coupling key '{k}' is not 'i,j'")))?;
                let i = a.trim().parse().map_err(D::Error::custom)?;
                let j = b.trim().parse().map_err(D::Error::custom)?;
                Ok(Coupling { i, j, value })
            })
            .collect()
    }
}

impl PulseParams {
    pub fn n(&self) -> usize {
        self.omega_drive.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.n()
    }

    /// Single-qubit loop on the zero-dynamical-phase branch Ω² = Δ(ω − Δ),
    /// parametrized by r = ω/Δ > 1, lasting one drive period.
    pub fn zero_phase_loop(r: f64, phase: f64, delta: f64) -> Result<Self> {
        if !(r > 1.0) || !r.is_finite() {
            return invalid(format!("ω/Δ = {r} must exceed 1"));
        }
        if !(delta > 0.0) || !delta.is_finite() {
            return invalid(format!("Δ = {delta} must be positive"));
        }
        let omega = r * delta;
        Ok(Self {
            omega_drive: vec![delta * (r - 1.0).sqrt()],
            omega_rot: vec![omega],
            phase: vec![phase],
            detuning: vec![delta],
            couplings: vec![],
            duration: TAU / omega,
        })
    }

    /// Two-qubit segment with a shared rotation frequency, one period long.
    #[allow(clippy::too_many_arguments)]
    pub fn two_qubit(omega1: f64, omega2: f64, w: f64, phi1: f64, phi2: f64, delta1: f64, delta2: f64, j: f64) -> Self {
        Self {
            omega_drive: vec![omega1, omega2],
            omega_rot: vec![w, w],
            phase: vec![phi1, phi2],
            detuning: vec![delta1, delta2],
            couplings: vec![Coupling { i: 0, j: 1, value: j }],
            duration: TAU / w,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n == 0 || n > MAX_QUBITS {
            return invalid(format!("qubit count {n} outside 1..={MAX_QUBITS}"));
        }
        for (name, v) in [
            ("omega_rot", &self.omega_rot),
            ("phase", &self.phase),
            ("detuning", &self.detuning),
        ] {
            if v.len() != n {
                return invalid(format!("{name} has {} entries, expected {n}", v.len()));
            }
        }
        let all = self
            .omega_drive
            .iter()
            .chain(&self.omega_rot)
            .chain(&self.phase)
            .chain(&self.detuning);
        if all.clone().any(|x| !x.is_finite()) {
            return invalid("non-finite pulse parameter");
        }
        if let Some(o) = self.omega_drive.iter().find(|&&o| o < 0.0) {
            return invalid(format!("drive amplitude {o} is negative"));
        }
        for cp in &self.couplings {
            if cp.i >= cp.j || cp.j >= n {
                return invalid(format!("coupling ({},{}) must satisfy i < j < {n}", cp.i, cp.j));
            }
            if !cp.value.is_finite() {
                return invalid("non-finite coupling");
            }
        }
        if !(self.duration > 0.0) || !self.duration.is_finite() {
            return invalid(format!("duration {} must be positive", self.duration));
        }
        Ok(())
    }

    /// Whether every driven qubit completes a whole number of rotations in τ.
    pub fn is_cyclic(&self) -> bool {
        self.cyclic_check().is_ok()
    }

    pub fn cyclic_check(&self) -> Result<()> {
        self.validate()?;
        for i in 0..self.n() {
            if self.omega_drive[i] == 0.0 {
                continue;
            }
            let turns = self.duration * self.omega_rot[i] / TAU;
            let k = turns.round();
            if k < 1.0 || (turns - k).abs() > CYCLIC_TOL * turns.max(1.0) {
                return Err(Error::NotCyclic(format!(
                    "qubit {i}: τ·ω/2π = {turns} is not a positive integer"
                )));
            }
        }
        Ok(())
    }

    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.couplings
            .iter()
            .filter(|c| c.i == a && c.j == b)
            .map(|c| c.value)
            .sum()
    }

    fn check_time(&self, t: f64) -> Result<()> {
        let slack = 1e-12 * self.duration.max(1.0);
        if !(t >= -slack && t <= self.duration + slack) {
            return Err(Error::TimeOutOfRange {
                t,
                duration: self.duration,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Unit {
    #[default]
    #[serde(rename = "absolute")]
    Absolute,
    /// Frequencies in units of the coupling scale J.
    J,
}

/// Ordered segments; the first segment acts first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoopSequence {
    pub n: usize,
    #[serde(default)]
    pub unit: Unit,
    pub segments: Vec<PulseParams>,
}

impl LoopSequence {
    pub fn new(segments: Vec<PulseParams>) -> Result<Self> {
        let n = segments.first().map(|s| s.n()).unwrap_or(0);
        let seq = Self {
            n,
            unit: Unit::Absolute,
            segments,
        };
        seq.validate()?;
        Ok(seq)
    }

    pub fn with_unit(mut self, unit: Unit) -> Self {
        self.unit = unit;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.segments.is_empty() {
            return invalid("loop sequence has no segments");
        }
        for (k, s) in self.segments.iter().enumerate() {
            if s.n() != self.n {
                return invalid(format!("segment {k} has {} qubits, expected {}", s.n(), self.n));
            }
            s.cyclic_check()
                .map_err(|e| Error::Invalid(format!("segment {k}: {e}")))?;
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let seq: Self = serde_json::from_str(text)?;
        seq.validate()?;
        Ok(seq)
    }
}

/// Embedded single-qubit Paulis and σz σz products for one qubit count.
struct Basis {
    x: Vec<ComplexMatrix>,
    y: Vec<ComplexMatrix>,
    z: Vec<ComplexMatrix>,
    zz: BTreeMap<(usize, usize), ComplexMatrix>,
}

impl Basis {
    fn build(n: usize) -> Self {
        let single = |p| {
            (0..n)
                .map(|k| PauliString::single(n, k, p).matrix())
                .collect::<Vec<_>>()
        };
        let mut zz = BTreeMap::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut labels = vec![Pauli::I; n];
                labels[i] = Pauli::Z;
                labels[j] = Pauli::Z;
                zz.insert((i, j), PauliString::new(labels).matrix());
            }
        }
        Self {
            x: single(Pauli::X),
            y: single(Pauli::Y),
            z: single(Pauli::Z),
            zz,
        }
    }
}

fn basis(n: usize) -> &'static Basis {
    static CACHE: [OnceLock<Basis>; MAX_QUBITS] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    CACHE[n - 1].get_or_init(|| Basis::build(n))
}

/// a·Σ drive + b·Σ Δ σz + c·Σ ω σz + j·Σ J σzσz, evaluated without range checks.
fn assemble(p: &PulseParams, t: f64, drive: f64, zeeman: f64, rot: f64, ising: f64) -> ComplexMatrix {
    let n = p.n();
    let b = basis(n);
    let mut m = zeros(1 << n);
    for i in 0..n {
        let arg = p.omega_rot[i] * t + p.phase[i];
        let a = drive * p.omega_drive[i];
        if a != 0.0 {
            m += &b.x[i] * c(a * arg.cos(), 0.0);
            m += &b.y[i] * c(a * arg.sin(), 0.0);
        }
        let zc = zeeman * p.detuning[i] + rot * p.omega_rot[i];
        if zc != 0.0 {
            m += &b.z[i] * c(zc, 0.0);
        }
    }
    for cp in &p.couplings {
        if cp.value != 0.0 {
            m += &b.zz[&(cp.i, cp.j)] * c(ising * cp.value, 0.0);
        }
    }
    m
}

pub(crate) fn hamiltonian_unchecked(p: &PulseParams, t: f64) -> ComplexMatrix {
    assemble(p, t, 0.5, 0.5, 0.0, 0.25)
}

pub(crate) fn invariant_unchecked(p: &PulseParams, t: f64) -> ComplexMatrix {
    assemble(p, t, 1.0, 1.0, -1.0, 0.5)
}

/// Σ_i ω_i σz_i, the generator of the rotating frame.
pub(crate) fn rotation_generator(p: &PulseParams) -> ComplexMatrix {
    assemble(p, 0.0, 0.0, 0.0, 1.0, 0.0)
}

pub fn hamiltonian(p: &PulseParams, t: f64) -> Result<ComplexMatrix> {
    p.validate()?;
    p.check_time(t)?;
    Ok(hamiltonian_unchecked(p, t))
}

pub fn invariant(p: &PulseParams, t: f64) -> Result<ComplexMatrix> {
    p.validate()?;
    p.check_time(t)?;
    Ok(invariant_unchecked(p, t))
}

/// ‖(I(t+dt) − I(t−dt))/(2dt) + i[H(t), I(t)]‖_F.
pub fn di_residual(p: &PulseParams, t: f64, dt: f64) -> Result<f64> {
    if !(dt > 0.0) {
        return invalid(format!("dt = {dt} must be positive"));
    }
    let forward = invariant(p, t + dt)?;
    let backward = invariant(p, t - dt)?;
    let h = hamiltonian_unchecked(p, t);
    let inv = invariant_unchecked(p, t);
    let deriv = (forward - backward) * c(0.5 / dt, 0.0);
    let comm = (&h * &inv - &inv * &h) * c(0.0, 1.0);
    Ok(frobenius(&(deriv + comm)))
}

/// ‖I(t) − (2H(t) − Σ_i ω_i σz_i)‖_F.
pub fn identity_residual(p: &PulseParams, t: f64) -> Result<f64> {
    let inv = invariant(p, t)?;
    let h = hamiltonian_unchecked(p, t);
    let rhs = h * c(2.0, 0.0) - rotation_generator(p);
    Ok(frobenius(&(inv - rhs)))
}
