//! Evolution over one cyclic segment.
//!
//! Three independent routes to U(τ) live here:
//! - the invariant eigenframe, with phases split into a Berry (geometric)
//!   part and a dynamical part;
//! - a midpoint exponential product, used as a numerical oracle;
//! - the exact rotating-frame form `U(t) = exp(−i t G/2) · exp(−i t I(0)/2)`
//!   with `G = Σ ω_i σz_i`, which holds because `H(t) = R H(0) R†` for
//!   `R = exp(−i t G/2)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{c, exp_from_eig, herm_eig, identity, unitary_exp, zeros, ComplexMatrix, HermEig, Pauli};
use crate::model::{hamiltonian_unchecked, invariant_unchecked, rotation_generator, PulseParams};

/// Minimum samples per drive period.
pub const RESOLUTION_FLOOR: usize = 256;
/// Grid used when the caller does not choose one.
pub const DEFAULT_GRID: usize = 2048;
/// Adjacent-sample overlap below which the frame is considered broken.
const CROSSING_OVERLAP: f64 = 0.5;
const DEGENERACY_TOL: f64 = 1e-8;

pub fn wrap_phase(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

/// Eigenvectors of I(t) on a uniform grid, gauge-fixed so that successive
/// overlaps are Hermitian positive (real positive for simple eigenvalues).
#[derive(Clone, Debug)]
pub struct EigenFrame {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub vectors: Vec<ComplexMatrix>,
    /// Column ranges sharing one eigenvalue.
    pub blocks: Vec<std::ops::Range<usize>>,
}

impl EigenFrame {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.blocks.iter().any(|b| b.len() > 1)
    }

    /// Smallest gap between distinct-index eigenvalues.
    pub fn min_gap(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    pub fn overlap(&self, j: usize, k: usize) -> Complex64 {
        let a = self.vectors[j].column(k);
        let b = self.vectors[j + 1].column(k);
        a.dotc(&b)
    }

    /// Smallest real part of ⟨v_k(t_j)|v_k(t_{j+1})⟩ over the grid, and the
    /// largest imaginary part in modulus.
    pub fn continuity(&self) -> (f64, f64) {
        let mut min_re = f64::INFINITY;
        let mut max_im: f64 = 0.0;
        for j in 0..self.len() - 1 {
            for k in 0..self.dim() {
                let o = self.overlap(j, k);
                min_re = min_re.min(o.re);
                max_im = max_im.max(o.im.abs());
            }
        }
        (min_re, max_im)
    }

    /// Closed-loop Berry phase of eigenvector k using every `stride`-th sample.
    fn berry_phase_strided(&self, k: usize, stride: usize) -> f64 {
        let last = self.len() - 1;
        let mut prod = Complex64::new(1.0, 0.0);
        let mut j = 0;
        while j < last {
            let next = (j + stride).min(last);
            let o = self.vectors[j].column(k).dotc(&self.vectors[next].column(k));
            prod *= o / o.norm();
            j = next;
        }
        let close = self.vectors[last].column(k).dotc(&self.vectors[0].column(k));
        prod *= close / close.norm();
        -prod.arg()
    }

    /// Berry phase with one Richardson step over grids N and N/2, which
    /// removes the leading O(N⁻²) term of the overlap product.
    pub fn berry_phase(&self, k: usize) -> f64 {
        let fine = self.berry_phase_strided(k, 1);
        if !(self.len() - 1).is_multiple_of(2) {
            return wrap_phase(fine);
        }
        let coarse = self.berry_phase_strided(k, 2);
        wrap_phase(fine + wrap_phase(fine - coarse) / 3.0)
    }

    /// −∫ ⟨v_k|H|v_k⟩ dt by the composite trapezoid rule.
    pub fn dynamical_phase(&self, p: &PulseParams, k: usize) -> f64 {
        let energies: Vec<f64> = self
            .times
            .iter()
            .zip(&self.vectors)
            .map(|(&t, v)| {
                let h = hamiltonian_unchecked(p, t);
                let col = v.column(k);
                col.dotc(&(&h * col)).re
            })
            .collect();
        -trapezoid(&self.times, &energies)
    }
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

fn group_blocks(values: &[f64]) -> Vec<std::ops::Range<usize>> {
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut blocks = Vec::new();
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() || values[k] - values[k - 1] > DEGENERACY_TOL * scale {
            blocks.push(start..k);
            start = k;
        }
    }
    blocks
}

/// Number of drive periods spanned by the segment (at least one).
fn periods(p: &PulseParams) -> usize {
    (0..p.n())
        .filter(|&i| p.omega_drive[i] != 0.0)
        .map(|i| (p.duration * p.omega_rot[i].abs() / TAU).round() as usize)
        .max()
        .unwrap_or(1)
        .max(1)
}

pub fn required_grid(p: &PulseParams) -> usize {
    RESOLUTION_FLOOR * periods(p)
}

pub fn default_grid(p: &PulseParams) -> usize {
    DEFAULT_GRID.max(required_grid(p))
}

pub fn build_eigenframe(p: &PulseParams, n_t: usize) -> Result<EigenFrame> {
    p.validate()?;
    let required = required_grid(p);
    if n_t < required {
        return Err(Error::GridTooCoarse { given: n_t, required });
    }
    let d = p.dim();
    let times: Vec<f64> = (0..=n_t).map(|j| p.duration * j as f64 / n_t as f64).collect();

    let first = herm_eig(&invariant_unchecked(p, 0.0))?;
    let values = first.values.clone();
    let blocks = group_blocks(&values);
    let mut vectors = Vec::with_capacity(n_t + 1);
    vectors.push(first.vectors);

    for j in 1..=n_t {
        let eig = herm_eig(&invariant_unchecked(p, times[j]))?;
        let prev = &vectors[j - 1];
        let mut next = zeros(d);
        for block in &blocks {
            let m = block.len();
            let cols = eig.vectors.columns(block.start, m).into_owned();
            let overlap = prev.columns(block.start, m).adjoint() * &cols;
            let aligned = if m == 1 {
                let o = overlap[(0, 0)];
                if o.norm() < CROSSING_OVERLAP {
                    return Err(Error::EigenvalueCrossing {
                        sample: j - 1,
                        next: j,
                        overlap: o.norm(),
                    });
                }
                cols * (o.conj() / o.norm())
            } else {
                // polar alignment: rotate the new block so prev†·new is positive Hermitian
                let svd = overlap.svd(true, true);
                let smallest = svd.singular_values.iter().copied().fold(f64::INFINITY, f64::min);
                if smallest < CROSSING_OVERLAP {
                    return Err(Error::EigenvalueCrossing {
                        sample: j - 1,
                        next: j,
                        overlap: smallest,
                    });
                }
                let (u, v_t) = (svd.u.unwrap(), svd.v_t.unwrap());
                cols * (v_t.adjoint() * u.adjoint())
            };
            next.columns_mut(block.start, m).copy_from(&aligned);
        }
        vectors.push(next);
    }

    Ok(EigenFrame {
        times,
        values,
        vectors,
        blocks,
    })
}

/// Propagator over one segment in the eigenframe, on the default grid.
pub fn eigenframe_propagator(p: &PulseParams) -> Result<ComplexMatrix> {
    eigenframe_propagator_with_grid(p, default_grid(p))
}

/// U(τ) = Σ_n e^{iα_n} |φ_n(τ)⟩⟨φ_n(0)|.
///
/// For a simple eigenvalue |φ_n(τ)⟩ = |φ_n(0)⟩ and α_n = γ^g_n + γ^d_n.
/// A degenerate block is accepted only when H projected onto it is a multiple
/// of the identity along the whole loop; its holonomy is then the transported
/// frame itself.
pub fn eigenframe_propagator_with_grid(p: &PulseParams, n_t: usize) -> Result<ComplexMatrix> {
    p.cyclic_check()?;
    let frame = build_eigenframe(p, n_t)?;
    let d = frame.dim();
    let v0 = &frame.vectors[0];
    let vt = &frame.vectors[frame.len() - 1];
    let mut u = zeros(d);
    for block in &frame.blocks {
        if block.len() == 1 {
            let k = block.start;
            let alpha = frame.berry_phase(k) + frame.dynamical_phase(p, k);
            let col = v0.column(k);
            u += (col * col.adjoint()) * Complex64::from_polar(1.0, alpha);
        } else {
            let gamma_d = scalar_block_dynamical_phase(p, &frame, block)?;
            let m = block.len();
            let start = v0.columns(block.start, m);
            let end = vt.columns(block.start, m);
            u += (end * start.adjoint()) * Complex64::from_polar(1.0, gamma_d);
        }
    }
    Ok(u)
}

fn scalar_block_dynamical_phase(p: &PulseParams, frame: &EigenFrame, block: &std::ops::Range<usize>) -> Result<f64> {
    let m = block.len();
    let mut energies = Vec::with_capacity(frame.len());
    for (&t, v) in frame.times.iter().zip(&frame.vectors) {
        let h = hamiltonian_unchecked(p, t);
        let cols = v.columns(block.start, m);
        let proj = cols.adjoint() * h * cols;
        let mean = proj.trace().re / m as f64;
        let spread = (proj - identity(m) * c(mean, 0.0))
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt();
        if spread > 1e-10 * mean.abs().max(1.0) {
            return Err(Error::DegenerateSpectrum { gap: frame.min_gap() });
        }
        energies.push(mean);
    }
    Ok(-trapezoid(&frame.times, &energies))
}

/// Midpoint exponential product over [0, τ], latest step leftmost.
pub fn ode_propagator(p: &PulseParams, n_t: usize) -> Result<ComplexMatrix> {
    p.validate()?;
    ode_propagator_to(p, p.duration, n_t)
}

pub fn ode_propagator_to(p: &PulseParams, t_end: f64, n_t: usize) -> Result<ComplexMatrix> {
    p.validate()?;
    if n_t == 0 {
        return invalid("ODE step count must be positive");
    }
    if !(0.0..=p.duration * (1.0 + 1e-12)).contains(&t_end) {
        return Err(Error::TimeOutOfRange {
            t: t_end,
            duration: p.duration,
        });
    }
    let dt = t_end / n_t as f64;
    let mut u = identity(p.dim());
    for j in 0..n_t {
        let h = hamiltonian_unchecked(p, (j as f64 + 0.5) * dt);
        u = unitary_exp(&h, dt)? * u;
    }
    Ok(u)
}

/// Exact propagator from 0 to t via the rotating frame.
pub fn closed_form_propagator_at(p: &PulseParams, t: f64) -> Result<ComplexMatrix> {
    p.validate()?;
    let eig = herm_eig(&invariant_unchecked(p, 0.0))?;
    Ok(closed_form_from_eig(p, &eig, t))
}

pub fn closed_form_propagator(p: &PulseParams) -> Result<ComplexMatrix> {
    closed_form_propagator_at(p, p.duration)
}

fn closed_form_from_eig(p: &PulseParams, eig: &HermEig, t: f64) -> ComplexMatrix {
    let g = rotation_generator(p);
    let mut u = exp_from_eig(eig, 0.5 * t);
    for r in 0..p.dim() {
        let ph = Complex64::from_polar(1.0, -0.5 * t * g[(r, r)].re);
        for col in 0..p.dim() {
            u[(r, col)] *= ph;
        }
    }
    u
}

/// Exact propagator together with the dynamical phase of each eigenstate of
/// I(0), γ^d_n = −τ ⟨φ_n(0)|H(0)|φ_n(0)⟩ (the integrand is constant in t).
///
/// Errors with `DegenerateSpectrum` when the invariant has a repeated
/// eigenvalue, since per-state phases are then basis dependent.
pub fn closed_form_with_phases(p: &PulseParams) -> Result<(ComplexMatrix, Vec<f64>)> {
    p.validate()?;
    let eig = herm_eig(&invariant_unchecked(p, 0.0))?;
    let blocks = group_blocks(&eig.values);
    if blocks.iter().any(|b| b.len() > 1) {
        let gap = eig.values.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        return Err(Error::DegenerateSpectrum { gap });
    }
    let h0 = hamiltonian_unchecked(p, 0.0);
    let phases = (0..p.dim())
        .map(|k| {
            let col = eig.vectors.column(k);
            -p.duration * col.dotc(&(&h0 * col)).re
        })
        .collect();
    Ok((closed_form_from_eig(p, &eig, p.duration), phases))
}

pub fn closed_form_dynamical_phases(p: &PulseParams) -> Result<Vec<f64>> {
    closed_form_with_phases(p).map(|(_, ph)| ph)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseRecord {
    pub eigenvalues: Vec<f64>,
    pub alpha_total: Vec<f64>,
    pub gamma_g: Vec<f64>,
    pub gamma_d: Vec<f64>,
}

impl PhaseRecord {
    /// Largest |α_n − (γ^g_n + γ^d_n)| modulo 2π.
    pub fn decomposition_error(&self) -> f64 {
        (0..self.alpha_total.len())
            .map(|k| wrap_phase(self.alpha_total[k] - self.gamma_g[k] - self.gamma_d[k]).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_dynamical(&self) -> f64 {
        self.gamma_d.iter().fold(0.0, |m, g| m.max(wrap_phase(*g).abs()))
    }
}

/// Phases on the default grid, doubling it until successive γ change by
/// less than 1e-8 (at most four doublings).
pub fn phases(p: &PulseParams) -> Result<PhaseRecord> {
    let mut n_t = default_grid(p);
    let mut rec = phases_with_grid(p, n_t)?;
    for _ in 0..4 {
        n_t *= 2;
        let finer = phases_with_grid(p, n_t)?;
        let change = rec
            .gamma_g
            .iter()
            .zip(&finer.gamma_g)
            .chain(rec.gamma_d.iter().zip(&finer.gamma_d))
            .map(|(a, b)| wrap_phase(a - b).abs())
            .fold(0.0, f64::max);
        rec = finer;
        if change < 1e-8 {
            break;
        }
    }
    Ok(rec)
}

/// γ^g from the Berry-connection product, γ^d by trapezoid quadrature, and
/// α from the exact propagator as ⟨φ_n(0)|U(τ)|φ_n(0)⟩.
pub fn phases_with_grid(p: &PulseParams, n_t: usize) -> Result<PhaseRecord> {
    p.cyclic_check()?;
    let frame = build_eigenframe(p, n_t)?;
    if frame.is_degenerate() {
        return Err(Error::DegenerateSpectrum { gap: frame.min_gap() });
    }
    let u = closed_form_propagator(p)?;
    let v0 = &frame.vectors[0];
    let mut rec = PhaseRecord {
        eigenvalues: frame.values.clone(),
        alpha_total: vec![],
        gamma_g: vec![],
        gamma_d: vec![],
    };
    for k in 0..frame.dim() {
        let col = v0.column(k);
        rec.alpha_total.push(col.dotc(&(&u * col)).arg());
        rec.gamma_g.push(frame.berry_phase(k));
        rec.gamma_d.push(wrap_phase(frame.dynamical_phase(p, k)));
    }
    Ok(rec)
}

/// Cone axis n̂ = (sin θ cos φ, sin θ sin φ, cos θ).
pub fn cone_axis(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

/// Closed form of one zero-dynamical-phase loop with cone angle θ and initial
/// phase φ: `−exp(iπ cos θ n̂·σ)`.
pub fn single_qubit_loop_gate(theta: f64, phi: f64) -> Result<ComplexMatrix> {
    if !(theta > 0.0 && theta < PI) {
        return invalid(format!("cone angle {theta} must lie strictly inside (0, π)"));
    }
    let n = cone_axis(theta, phi);
    let axis = Pauli::X.matrix() * c(n[0], 0.0) + Pauli::Y.matrix() * c(n[1], 0.0) + Pauli::Z.matrix() * c(n[2], 0.0);
    Ok(unitary_exp(&axis, -PI * theta.cos())? * c(-1.0, 0.0))
}

/// Zero-dynamical-phase loop whose invariant axis has polar angle θ and
/// azimuth φ at t = 0, for detuning Δ > 0.
///
/// The branch Ω² = Δ(ω − Δ) only reaches θ ∈ (π/2, π); the closed form is
/// unchanged under (θ, φ) → (π − θ, φ + π), which covers the other half.
pub fn cone_loop_params(theta: f64, phi: f64, delta: f64) -> Result<PulseParams> {
    if !(theta > 0.0 && theta < PI) || (theta - PI / 2.0).abs() < 1e-12 {
        return invalid(format!("cone angle {theta} has no finite zero-phase loop"));
    }
    let (th, ph) = if theta < PI / 2.0 {
        (PI - theta, phi + PI)
    } else {
        (theta, phi)
    };
    let r = 1.0 / th.sin().powi(2);
    PulseParams::zero_phase_loop(r, ph.rem_euclid(TAU), delta)
}

/// Polar angle of the invariant axis, atan2(Ω, Δ − ω).
pub fn cone_angle(p: &PulseParams) -> f64 {
    p.omega_drive[0].atan2(p.detuning[0] - p.omega_rot[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius, unitarity_defect, unitary_fidelity};

    fn qubit(omega: f64, w: f64, phi: f64, delta: f64) -> PulseParams {
        PulseParams {
            omega_drive: vec![omega],
            omega_rot: vec![w],
            phase: vec![phi],
            detuning: vec![delta],
            couplings: vec![],
            duration: TAU / w,
        }
    }

    #[test]
    fn undriven_frame_is_computational_basis() {
        let p = qubit(0.0, 2.0, 0.3, 0.7);
        let f = build_eigenframe(&p, 256).unwrap();
        for v in &f.vectors {
            assert!(frobenius(&(v - &f.vectors[0])) < 1e-14);
            assert!((v[(0, 0)].norm() - 1.0).abs() < 1e-14 || (v[(1, 0)].norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn grid_floor_enforced() {
        let p = qubit(1.0, 2.0, 0.0, 1.0);
        assert!(matches!(
            build_eigenframe(&p, 128),
            Err(Error::GridTooCoarse { required: 256, .. })
        ));
        let mut two = p.clone();
        two.duration *= 2.0;
        assert!(build_eigenframe(&two, 256).is_err());
        assert!(build_eigenframe(&two, 512).is_ok());
    }

    #[test]
    fn frame_precesses_at_fixed_cone_angle() {
        let p = qubit(1.2, 2.5, 0.4, 1.0);
        let theta = cone_angle(&p);
        let f = build_eigenframe(&p, 512).unwrap();
        // upper eigenvector is the Bloch state along the invariant axis
        for (j, &t) in f.times.iter().enumerate().step_by(64) {
            let v = f.vectors[j].column(1);
            let bz = v[0].norm_sqr() - v[1].norm_sqr();
            let bxy = v[0].conj() * v[1] * c(2.0, 0.0);
            assert!((bz - theta.cos()).abs() < 1e-12);
            assert!((bxy.norm() - theta.sin()).abs() < 1e-12);
            assert!(wrap_phase(bxy.arg() - (2.5 * t + 0.4)).abs() < 1e-10);
        }
        let (min_re, max_im) = f.continuity();
        assert!(min_re > 0.99 && max_im < 1e-12);
    }

    #[test]
    fn commuting_case_is_phase_gate() {
        let p = qubit(0.0, 1.7, 0.0, 0.6);
        let u = eigenframe_propagator(&p).unwrap();
        let expect = unitary_exp(&Pauli::Z.matrix(), 0.3 * p.duration).unwrap();
        assert!(unitary_fidelity(&u, &expect).unwrap() > 1.0 - 1e-14);
    }

    #[test]
    fn constant_hamiltonian_ode_is_exact() {
        let p = PulseParams {
            omega_drive: vec![0.8],
            omega_rot: vec![0.0],
            phase: vec![0.5],
            detuning: vec![0.3],
            couplings: vec![],
            duration: 2.0,
        };
        let u = ode_propagator(&p, 7).unwrap();
        let h = hamiltonian_unchecked(&p, 0.0);
        assert!(frobenius(&(u - unitary_exp(&h, 2.0).unwrap())) < 1e-13);
    }

    #[test]
    fn ode_second_order() {
        let p = qubit(1.3, 2.0, 0.2, 0.9);
        let exact = closed_form_propagator(&p).unwrap();
        let e1 = frobenius(&(ode_propagator(&p, 64).unwrap() - &exact));
        let e2 = frobenius(&(ode_propagator(&p, 128).unwrap() - &exact));
        assert!((e1 / e2).log2() > 1.9);
    }

    #[test]
    fn closed_form_matches_ode() {
        let p = PulseParams::two_qubit(1.446, 4.131, 8.478, 3.111, 1.590, 0.268, 4.168, 2.0);
        let a = closed_form_propagator(&p).unwrap();
        let b = ode_propagator(&p, 8192).unwrap();
        assert!(frobenius(&(a - b)) < 1e-7);
    }

    #[test]
    fn eigenframe_unitary_and_exact() {
        let p = qubit(0.9, 1.6, 2.0, -0.4);
        let u = eigenframe_propagator(&p).unwrap();
        assert!(unitarity_defect(&u) < 1e-8);
        assert!(frobenius(&(u - closed_form_propagator(&p).unwrap())) < 1e-9);
    }

    #[test]
    fn undriven_has_no_geometric_phase() {
        let rec = phases(&qubit(0.0, 2.0, 0.0, 0.5)).unwrap();
        assert!(rec.gamma_g.iter().all(|g| g.abs() < 1e-12));
        assert!(rec.decomposition_error() < 1e-10);
    }

    #[test]
    fn zero_phase_branch_has_no_dynamical_phase() {
        for r in [1.2, 1.591, 2.5, 5.0] {
            let p = PulseParams::zero_phase_loop(r, 0.7, 1.0).unwrap();
            let rec = phases(&p).unwrap();
            assert!(rec.max_abs_dynamical() < 1e-6, "r = {r}");
        }
    }

    #[test]
    fn loop_gate_variants() {
        let (theta, phi) = (2.2, 1.1);
        let p = cone_loop_params(theta, phi, 1.0).unwrap();
        assert!((cone_angle(&p) - theta).abs() < 1e-12);
        let u = eigenframe_propagator(&p).unwrap();
        let g = single_qubit_loop_gate(theta, phi).unwrap();
        assert!(frobenius(&(&u - &g)) < 1e-6);
        // the σy coefficient repeating cos φ does not describe the evolution
        let typo = Pauli::X.matrix() * c(theta.sin() * phi.cos(), 0.0)
            + Pauli::Y.matrix() * c(theta.sin() * phi.cos(), 0.0)
            + Pauli::Z.matrix() * c(theta.cos(), 0.0);
        let norm = (theta.sin().powi(2) * 2.0 * phi.cos().powi(2) + theta.cos().powi(2)).sqrt();
        let typo_gate = unitary_exp(&(typo * c(1.0 / norm, 0.0)), -PI * theta.cos()).unwrap();
        assert!(unitary_fidelity(&u, &typo_gate).unwrap() < 0.99);
    }

    #[test]
    fn loop_gate_edge_cases() {
        let g = single_qubit_loop_gate(PI / 2.0, 0.8).unwrap();
        assert!(frobenius(&(g + identity(2))) < 1e-12);
        let a = single_qubit_loop_gate(1.0, 0.3).unwrap();
        let b = single_qubit_loop_gate(1.0, 0.3 + TAU).unwrap();
        assert!(frobenius(&(a - b)) < 1e-12);
        assert!(single_qubit_loop_gate(0.0, 0.0).is_err());
        assert!(single_qubit_loop_gate(PI, 0.0).is_err());
        // lower hemisphere realized through the mirrored loop
        let p = cone_loop_params(0.7, 0.3, 1.0).unwrap();
        let u = eigenframe_propagator(&p).unwrap();
        assert!(frobenius(&(u - single_qubit_loop_gate(0.7, 0.3).unwrap())) < 1e-6);
    }

    #[test]
    fn geometric_phase_is_half_solid_angle() {
        for theta in [1.7, 2.0, 2.4, 2.9] {
            let p = cone_loop_params(theta, 0.4, 1.0).unwrap();
            let rec = phases(&p).unwrap();
            let expect = PI * (1.0 - theta.cos().abs());
            for g in &rec.gamma_g {
                assert!((g.abs() - expect).abs() < 1e-4, "θ = {theta}: {g} vs {expect}");
            }
        }
    }

    #[test]
    fn degenerate_scalar_block_accepted() {
        // equal detunings, no drive, no coupling: |01⟩ and |10⟩ share an eigenvalue
        let p = PulseParams::two_qubit(0.0, 0.0, 2.0, 0.0, 0.0, 0.5, 0.5, 0.0);
        let u = eigenframe_propagator(&p).unwrap();
        assert!(frobenius(&(u - closed_form_propagator(&p).unwrap())) < 1e-10);
        assert!(matches!(phases(&p), Err(Error::DegenerateSpectrum { .. })));
        assert!(closed_form_dynamical_phases(&p).is_err());
    }

    #[test]
    fn non_cyclic_rejected() {
        let mut p = qubit(1.0, 2.0, 0.0, 1.0);
        p.duration *= 0.7;
        assert!(matches!(eigenframe_propagator(&p), Err(Error::NotCyclic(_))));
    }
}
