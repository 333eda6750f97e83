use std::fs;
use std::path::Path;

use holonomic_core::characterization::{
    pauli_transfer, process_fidelity, rb_gate_fidelity, rb_run, simulate_qpt, Channel, RbConfig, RbTarget,
};
use holonomic_core::linalg::{identity, ComplexMatrix};
use holonomic_core::model::{di_residual, identity_residual};
use holonomic_core::propagation::{eigenframe_propagator, eigenframe_propagator_with_grid, phases, phases_with_grid};
use holonomic_core::synthesis::{
    entangling_analysis, fidelity_threshold, find_entangling, gate_length, named_gate, synthesize, EntanglerSearch,
    EntanglingAnalysis, TargetSpec,
};
use holonomic_core::tables::{load_tables, verify_published_tables};
use holonomic_core::{LoopSequence, PhaseRecord, RbRecord, SynthesisProblem};
use serde::Serialize;
use serde_json::Value;

use crate::report::{csv_path, decay_csv, emit, write};
use crate::{Cli, CliError, Command, Outcome};

pub const IDENTITY_TOL: f64 = 1e-12;
pub const DI_TOL: f64 = 1e-8;
pub const DI_STEP: f64 = 1e-6;
pub const DECOMPOSITION_TOL: f64 = 1e-6;
const DEFAULT_SCAN: usize = 64;

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::VerifyDi => verify_di(cli),
        Command::Phases => cmd_phases(cli),
        Command::Synth => synth(cli),
        Command::Gate => gate(cli),
        Command::Entangle => entangle(cli),
        Command::Qpt => qpt(cli),
        Command::Rb => rb(cli),
        Command::Tables => tables(cli),
    }
}

fn outcome(passed: bool) -> Outcome {
    if passed {
        Outcome::Passed
    } else {
        Outcome::CheckFailed
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn parse_json(path: &Path) -> Result<Value, CliError> {
    serde_json::from_str(&read_text(path)?).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

/// A loop sequence, or the `sequence` field of a synthesis/entangler result.
fn read_sequence(path: &Path) -> Result<LoopSequence, CliError> {
    let mut v = parse_json(path)?;
    if let Some(inner) = v.get_mut("sequence") {
        v = inner.take();
    }
    let seq: LoopSequence =
        serde_json::from_value(v).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    seq.validate()?;
    Ok(seq)
}

fn require_input(cli: &Cli) -> Result<&Path, CliError> {
    cli.input
        .as_deref()
        .ok_or_else(|| CliError::Invalid("this command needs --input".into()))
}

fn propagate(seq: &LoopSequence, grid: Option<usize>) -> Result<ComplexMatrix, CliError> {
    let mut u = identity(1 << seq.n);
    for seg in &seq.segments {
        let us = match grid {
            Some(n) => eigenframe_propagator_with_grid(seg, n)?,
            None => eigenframe_propagator(seg)?,
        };
        u = us * u;
    }
    Ok(u)
}

#[derive(Serialize)]
struct Matrix {
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl From<&ComplexMatrix> for Matrix {
    fn from(m: &ComplexMatrix) -> Self {
        let rows = |im: bool| {
            (0..m.nrows())
                .map(|i| {
                    (0..m.ncols())
                        .map(|j| if im { m[(i, j)].im } else { m[(i, j)].re })
                        .collect()
                })
                .collect()
        };
        Matrix {
            re: rows(false),
            im: rows(true),
        }
    }
}

#[derive(Serialize)]
struct DiSegment {
    sequence: String,
    segment: usize,
    samples: usize,
    max_identity_residual: f64,
    max_di_residual: f64,
    passed: bool,
}

#[derive(Serialize)]
struct DiReport {
    identity_tol: f64,
    di_tol: f64,
    segments: Vec<DiSegment>,
    passed: bool,
}

fn verify_di(cli: &Cli) -> Result<Outcome, CliError> {
    let sequences = match &cli.input {
        Some(p) => vec![(p.display().to_string(), read_sequence(p)?)],
        None => {
            let t = load_tables()?;
            let mut v = Vec::new();
            for s in &t.single {
                v.push((s.name.clone(), s.sequence()?));
            }
            for s in &t.two {
                v.push((s.name.clone(), s.sequence()?));
            }
            v
        }
    };
    let samples = cli.grid.unwrap_or(DEFAULT_SCAN);
    if samples == 0 {
        return Err(CliError::Invalid("--grid must be positive".into()));
    }
    let mut segments = Vec::new();
    for (name, seq) in &sequences {
        for (k, seg) in seq.segments.iter().enumerate() {
            let (mut id_max, mut di_max) = (0.0f64, 0.0f64);
            for j in 0..samples {
                // interior points keep t ± dt inside the segment
                let t = seg.duration * (j as f64 + 0.5) / samples as f64;
                id_max = id_max.max(identity_residual(seg, t)?);
                di_max = di_max.max(di_residual(seg, t, DI_STEP)?);
            }
            segments.push(DiSegment {
                sequence: name.clone(),
                segment: k,
                samples,
                max_identity_residual: id_max,
                max_di_residual: di_max,
                passed: id_max < IDENTITY_TOL && di_max < DI_TOL,
            });
        }
    }
    let passed = segments.iter().all(|s| s.passed);
    for s in segments.iter().filter(|s| !s.passed) {
        eprintln!(
            "FAIL {} segment {}: identity {:.3e}, DI {:.3e}",
            s.sequence, s.segment, s.max_identity_residual, s.max_di_residual
        );
    }
    emit(
        &DiReport {
            identity_tol: IDENTITY_TOL,
            di_tol: DI_TOL,
            segments,
            passed,
        },
        cli.output.as_deref(),
    )?;
    Ok(outcome(passed))
}

#[derive(Serialize)]
struct PhaseSegment {
    segment: usize,
    #[serde(flatten)]
    record: PhaseRecord,
    decomposition_error: f64,
}

#[derive(Serialize)]
struct PhasesReport {
    segments: Vec<PhaseSegment>,
    max_abs_dynamical_phase: f64,
    passed: bool,
}

fn cmd_phases(cli: &Cli) -> Result<Outcome, CliError> {
    let seq = read_sequence(require_input(cli)?)?;
    let mut segments = Vec::new();
    for (k, seg) in seq.segments.iter().enumerate() {
        let record = match cli.grid {
            Some(n) => phases_with_grid(seg, n)?,
            None => phases(seg)?,
        };
        segments.push(PhaseSegment {
            segment: k,
            decomposition_error: record.decomposition_error(),
            record,
        });
    }
    let passed = segments.iter().all(|s| s.decomposition_error < DECOMPOSITION_TOL);
    let max_dyn = segments
        .iter()
        .map(|s| s.record.max_abs_dynamical())
        .fold(0.0, f64::max);
    emit(
        &PhasesReport {
            segments,
            max_abs_dynamical_phase: max_dyn,
            passed,
        },
        cli.output.as_deref(),
    )?;
    Ok(outcome(passed))
}

fn synthesis_problem(cli: &Cli) -> Result<SynthesisProblem, CliError> {
    let mut prob = match (&cli.input, &cli.target) {
        (Some(p), _) => SynthesisProblem::from_json(&read_text(p)?)?,
        (None, Some(t)) => SynthesisProblem::new(TargetSpec::Named(t.clone()), cli.loops.unwrap_or(2), 0),
        (None, None) => return Err(CliError::Invalid("synth needs --input or --target".into())),
    };
    if let Some(s) = cli.seed {
        prob.seed = s;
    }
    if let Some(r) = cli.restarts {
        prob.restarts = r;
    }
    if let Some(w) = cli.penalty {
        prob.penalty_weight = w;
    }
    Ok(prob)
}

fn synth(cli: &Cli) -> Result<Outcome, CliError> {
    let prob = synthesis_problem(cli)?;
    let r = synthesize(&prob)?;
    eprintln!(
        "{}: fidelity {:.6}, gate length {:.4}, {} loops, max |γd| {:.2e}",
        r.target,
        r.fidelity,
        r.gate_length,
        r.sequence.segments.len(),
        r.max_abs_dynamical_phase
    );
    if !r.converged {
        eprintln!("warning: no restart met the convergence thresholds");
    }
    emit(&r, cli.output.as_deref())?;
    Ok(Outcome::Passed)
}

#[derive(Serialize)]
struct GateReport {
    n: usize,
    segments: usize,
    unitary: Matrix,
    target: Option<String>,
    fidelity: Option<f64>,
    fidelity_threshold: Option<f64>,
    max_abs_dynamical_phase: f64,
    gate_length: f64,
    entangling: Option<EntanglingAnalysis>,
    passed: bool,
}

fn gate(cli: &Cli) -> Result<Outcome, CliError> {
    let seq = read_sequence(require_input(cli)?)?;
    let u = propagate(&seq, cli.grid)?;
    let mut max_dyn = 0.0f64;
    for seg in &seq.segments {
        let rec = match cli.grid {
            Some(n) => phases_with_grid(seg, n)?,
            None => phases(seg)?,
        };
        max_dyn = max_dyn.max(rec.max_abs_dynamical());
    }
    let target = cli.target.clone().or_else(|| cli.gate.clone());
    let (fidelity, threshold) = match &target {
        Some(name) => {
            let f = holonomic_core::linalg::unitary_fidelity(&named_gate(name)?, &u)?;
            (Some(f), Some(fidelity_threshold(seq.n)))
        }
        None => (None, None),
    };
    let passed = match (fidelity, threshold) {
        (Some(f), Some(t)) => f >= t,
        _ => true,
    };
    let entangling = if seq.n == 2 {
        Some(entangling_analysis(&u)?)
    } else {
        None
    };
    emit(
        &GateReport {
            n: seq.n,
            segments: seq.segments.len(),
            unitary: Matrix::from(&u),
            target,
            fidelity,
            fidelity_threshold: threshold,
            max_abs_dynamical_phase: max_dyn,
            gate_length: gate_length(&seq),
            entangling,
            passed,
        },
        cli.output.as_deref(),
    )?;
    Ok(outcome(passed))
}

fn entangle(cli: &Cli) -> Result<Outcome, CliError> {
    let mut search = match &cli.input {
        Some(p) => serde_json::from_str(&read_text(p)?).map_err(|e| CliError::Invalid(e.to_string()))?,
        None => EntanglerSearch::default(),
    };
    if let Some(s) = cli.seed {
        search.seed = s;
    }
    if let Some(r) = cli.restarts {
        search.restarts = r;
    }
    if let Some(w) = cli.penalty {
        search.penalty_weight = w;
    }
    let r = find_entangling(&search)?;
    eprintln!(
        "entangler: M {:.3e}, non-separability {:.4}, max |γd| {:.2e}",
        r.analysis.score, r.analysis.non_separability, r.max_abs_dynamical_phase
    );
    if !r.converged {
        eprintln!("warning: no restart met the acceptance thresholds");
    }
    emit(&r, cli.output.as_deref())?;
    Ok(Outcome::Passed)
}

/// Implemented unitary from --input or --gate, ideal from --target or --gate.
fn implemented_and_ideal(cli: &Cli) -> Result<(ComplexMatrix, Option<ComplexMatrix>), CliError> {
    let implemented = match (&cli.input, &cli.gate) {
        (Some(p), _) => propagate(&read_sequence(p)?, cli.grid)?,
        (None, Some(g)) => named_gate(g)?,
        (None, None) => return Err(CliError::Invalid("need --input or --gate".into())),
    };
    let ideal = match cli.target.as_ref().or(cli.gate.as_ref()) {
        Some(name) => Some(named_gate(name)?),
        None => None,
    };
    if let Some(i) = &ideal {
        if i.nrows() != implemented.nrows() {
            return Err(CliError::Invalid("target and gate dimensions differ".into()));
        }
    }
    Ok((implemented, ideal))
}

fn check_eps(eps: f64) -> Result<(), CliError> {
    if (0.0..=1.0).contains(&eps) {
        Ok(())
    } else {
        Err(CliError::Invalid(format!("--noise-eps {eps} outside [0, 1]")))
    }
}

#[derive(Serialize)]
struct QptOutput {
    settings: usize,
    noise_eps: f64,
    transfer: holonomic_core::TransferMatrix,
    ideal_transfer: Option<holonomic_core::TransferMatrix>,
    process_fidelity: Option<f64>,
}

fn qpt(cli: &Cli) -> Result<Outcome, CliError> {
    check_eps(cli.noise_eps)?;
    let (u, ideal) = implemented_and_ideal(cli)?;
    let channel = if cli.noise_eps > 0.0 {
        Channel::Depolarized {
            unitary: u,
            eps: cli.noise_eps,
        }
    } else {
        Channel::Unitary(u)
    };
    let rep = simulate_qpt(&channel)?;
    let ideal_transfer = ideal.map(|i| pauli_transfer(&Channel::Unitary(i))).transpose()?;
    let fidelity = ideal_transfer
        .as_ref()
        .map(|i| process_fidelity(&rep.transfer, i))
        .transpose()?;
    if let Some(f) = fidelity {
        eprintln!("{} settings, average gate fidelity {f:.6}", rep.settings);
    }
    emit(
        &QptOutput {
            settings: rep.settings,
            noise_eps: cli.noise_eps,
            transfer: rep.transfer,
            ideal_transfer,
            process_fidelity: fidelity,
        },
        cli.output.as_deref(),
    )?;
    Ok(Outcome::Passed)
}

#[derive(Serialize)]
struct RbOutput {
    config: RbConfig,
    reference: RbRecord,
    interleaved: RbRecord,
    gate_fidelity: Option<f64>,
}

fn rb(cli: &Cli) -> Result<Outcome, CliError> {
    check_eps(cli.noise_eps)?;
    let (implemented, ideal) = implemented_and_ideal(cli)?;
    let ideal = ideal.ok_or_else(|| CliError::Invalid("rb needs --target or --gate for the ideal gate".into()))?;
    let mut cfg = RbConfig {
        seed: cli.seed.unwrap_or(0),
        clifford_eps: cli.noise_eps,
        target_eps: cli.noise_eps,
        ..Default::default()
    };
    if let Some(m) = &cli.m_values {
        cfg.m_values = m.clone();
    }
    if let Some(n) = cli.n_seq {
        cfg.n_sequences = n;
    }
    let reference = rb_run(&cfg, None)?;
    let interleaved = rb_run(&cfg, Some(&RbTarget { implemented, ideal }))?;
    for rec in [&reference, &interleaved] {
        write(&csv_path(cli.output.as_deref(), &rec.variant), &decay_csv(rec))?;
        if let Some(e) = &rec.fit_error {
            eprintln!("{} fit failed: {e}", rec.variant);
        }
    }
    let gate_fidelity = rb_gate_fidelity(&reference, &interleaved, 1).ok();
    if let (Some(r), Some(g), Some(f)) = (&reference.fit, &interleaved.fit, gate_fidelity) {
        eprintln!("p_ref {:.6}, p_gate {:.6}, F_gate {f:.6}", r.p, g.p);
    }
    let passed = gate_fidelity.is_some();
    emit(
        &RbOutput {
            config: cfg,
            reference,
            interleaved,
            gate_fidelity,
        },
        cli.output.as_deref(),
    )?;
    Ok(outcome(passed))
}

fn tables(cli: &Cli) -> Result<Outcome, CliError> {
    let rep = verify_published_tables()?;
    for f in rep.failures() {
        eprintln!("FAIL {f}");
    }
    emit(&rep, cli.output.as_deref())?;
    Ok(outcome(rep.passed))
}
