//! Checks of the reference parameter sets bundled in `data/published_tables.toml`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::{identity, unitary_fidelity, ComplexMatrix};
use crate::model::{LoopSequence, PulseParams, Unit};
use crate::propagation::{eigenframe_propagator, phases};
use crate::synthesis::{entangling_analysis, gate_length, named_gate};

pub const TABLE_DATA: &str = include_str!("../data/published_tables.toml");

pub const SINGLE_FIDELITY: f64 = 0.999;
pub const SINGLE_DYNAMICAL: f64 = 1e-4;
pub const TWO_FIDELITY: f64 = 0.99;
/// Per-pulse |γ^d| bound as a fraction of J·τ.
pub const TWO_DYNAMICAL: f64 = 1e-2;
pub const LENGTH_REL_TOL: f64 = 1e-2;
pub const ENTANGLER_SCORE: f64 = 1e-2;

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, Deserialize)]
pub struct SingleTable {
    pub name: String,
    pub target: String,
    pub ratio: Vec<f64>,
    pub phase: Vec<f64>,
    pub gate_length: f64,
    #[serde(default = "yes")]
    pub check_fidelity: bool,
}

impl SingleTable {
    /// Loops in units of Δ (Δ = 1), first loop first.
    pub fn sequence(&self) -> Result<LoopSequence> {
        if self.ratio.len() != self.phase.len() {
            return invalid(format!("table {}: ratio and phase lengths differ", self.name));
        }
        let loops = self
            .ratio
            .iter()
            .zip(&self.phase)
            .map(|(&r, &phi)| PulseParams::zero_phase_loop(r, phi, 1.0))
            .collect::<Result<Vec<_>>>()?;
        LoopSequence::new(loops)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TwoKind {
    Entangler,
    Gate,
}

#[derive(Clone, Debug, Deserialize)]
pub struct TwoTable {
    pub name: String,
    pub kind: TwoKind,
    #[serde(default)]
    pub target: Option<String>,
    pub coupling: f64,
    pub pulses: Vec<[f64; 7]>,
}

impl TwoTable {
    pub fn sequence(&self) -> Result<LoopSequence> {
        let pulses = self
            .pulses
            .iter()
            .map(|r| PulseParams::two_qubit(r[0], r[1], r[2], r[3], r[4], r[5], r[6], self.coupling))
            .collect();
        Ok(LoopSequence::new(pulses)?.with_unit(Unit::J))
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct Tables {
    pub single: Vec<SingleTable>,
    pub two: Vec<TwoTable>,
}

pub fn load_tables() -> Result<Tables> {
    Ok(toml::from_str(TABLE_DATA)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    fn at_least(name: &str, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            passed: value >= threshold,
        }
    }

    fn below(name: &str, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            passed: value < threshold,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub name: String,
    pub target: Option<String>,
    pub fidelity: Option<f64>,
    /// Fidelity against the adjoint of the target, as a sign-convention diagnostic.
    pub adjoint_fidelity: Option<f64>,
    pub entangling_score: Option<f64>,
    pub max_abs_dynamical_phase: f64,
    pub gate_length: f64,
    pub published_gate_length: Option<f64>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TablesReport {
    pub tables: Vec<TableReport>,
    pub passed: bool,
}

impl TablesReport {
    pub fn failures(&self) -> Vec<String> {
        self.tables
            .iter()
            .flat_map(|t| {
                t.checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(move |c| format!("{}: {} = {:.6} (threshold {})", t.name, c.name, c.value, c.threshold))
            })
            .collect()
    }

    pub fn table(&self, name: &str) -> Option<&TableReport> {
        self.tables.iter().find(|t| t.name == name)
    }
}

fn product(seq: &LoopSequence) -> Result<ComplexMatrix> {
    let mut u = identity(1 << seq.n);
    for seg in &seq.segments {
        u = eigenframe_propagator(seg)? * u;
    }
    Ok(u)
}

/// Largest |γ^d| of each segment.
fn dynamical_phases(seq: &LoopSequence) -> Result<Vec<f64>> {
    seq.segments
        .iter()
        .map(|s| Ok(phases(s)?.gamma_d.iter().fold(0.0f64, |m, g| m.max(g.abs()))))
        .collect()
}

pub fn check_single(t: &SingleTable) -> Result<TableReport> {
    let seq = t.sequence()?;
    let target = named_gate(&t.target)?;
    let u = product(&seq)?;
    let fidelity = unitary_fidelity(&target, &u)?;
    let adjoint = unitary_fidelity(&target.adjoint(), &u)?;
    let dyn_max = dynamical_phases(&seq)?.into_iter().fold(0.0, f64::max);
    let length = gate_length(&seq);
    let mut checks = Vec::new();
    if t.check_fidelity {
        checks.push(Check::at_least("fidelity", fidelity, SINGLE_FIDELITY));
    }
    checks.push(Check::below("max |dynamical phase|", dyn_max, SINGLE_DYNAMICAL));
    checks.push(Check::below(
        "gate length relative error",
        ((length - t.gate_length) / t.gate_length).abs(),
        LENGTH_REL_TOL,
    ));
    Ok(TableReport {
        name: t.name.clone(),
        target: Some(t.target.clone()),
        fidelity: Some(fidelity),
        adjoint_fidelity: Some(adjoint),
        entangling_score: None,
        max_abs_dynamical_phase: dyn_max,
        gate_length: length,
        published_gate_length: Some(t.gate_length),
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

pub fn check_two(t: &TwoTable) -> Result<TableReport> {
    let seq = t.sequence()?;
    let u = product(&seq)?;
    let dyn_phases = dynamical_phases(&seq)?;
    let dyn_max = dyn_phases.iter().copied().fold(0.0, f64::max);
    let mut checks = Vec::new();
    let (mut fidelity, mut adjoint, mut score) = (None, None, None);
    match t.kind {
        TwoKind::Gate => {
            let name = t.target.as_deref().unwrap_or("CNOT");
            let target = named_gate(name)?;
            let f = unitary_fidelity(&target, &u)?;
            fidelity = Some(f);
            adjoint = Some(unitary_fidelity(&target.adjoint(), &u)?);
            checks.push(Check::at_least("fidelity", f, TWO_FIDELITY));
            // table unit J = 1, so the bound is 1e-2·τ per pulse
            let worst = dyn_phases
                .iter()
                .zip(&seq.segments)
                .map(|(g, s)| g / (TWO_DYNAMICAL * s.duration))
                .fold(0.0, f64::max);
            checks.push(Check::below("max |dynamical phase| / (1e-2 J tau)", worst, 1.0));
        }
        TwoKind::Entangler => {
            let a = entangling_analysis(&u)?;
            score = Some(a.score);
            checks.push(Check::below("entangling score", a.score, ENTANGLER_SCORE));
            checks.push(Check::at_least(
                "non-separability",
                a.non_separability,
                crate::synthesis::SEPARABLE_TOL,
            ));
        }
    }
    Ok(TableReport {
        name: t.name.clone(),
        target: t.target.clone(),
        fidelity,
        adjoint_fidelity: adjoint,
        entangling_score: score,
        max_abs_dynamical_phase: dyn_max,
        gate_length: gate_length(&seq),
        published_gate_length: None,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

pub fn verify_published_tables() -> Result<TablesReport> {
    let tables = load_tables()?;
    let mut reports = Vec::new();
    for t in &tables.single {
        reports.push(check_single(t)?);
    }
    for t in &tables.two {
        reports.push(check_two(t)?);
    }
    Ok(TablesReport {
        passed: reports.iter().all(|r| r.passed),
        tables: reports,
    })
}
