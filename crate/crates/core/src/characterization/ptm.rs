use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{c, identity, trace, ComplexMatrix, PauliString};

/// A completely positive map on d × d density matrices.
#[derive(Clone, Debug)]
pub enum Channel {
    Unitary(ComplexMatrix),
    /// U·ρ·U† followed by depolarization of strength `eps`.
    Depolarized {
        unitary: ComplexMatrix,
        eps: f64,
    },
    Kraus(Vec<ComplexMatrix>),
}

impl Channel {
    pub fn dim(&self) -> usize {
        match self {
            Channel::Unitary(u) | Channel::Depolarized { unitary: u, .. } => u.nrows(),
            Channel::Kraus(ops) => ops.first().map(|k| k.nrows()).unwrap_or(0),
        }
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        match self {
            Channel::Unitary(u) => u * rho * u.adjoint(),
            Channel::Depolarized { unitary, eps } => {
                let d = unitary.nrows();
                let rotated = unitary * rho * unitary.adjoint();
                rotated * c(1.0 - eps, 0.0) + identity(d) * (trace(rho) * (eps / d as f64))
            }
            Channel::Kraus(ops) => {
                let d = rho.nrows();
                ops.iter()
                    .fold(ComplexMatrix::zeros(d, d), |acc, k| acc + k * rho * k.adjoint())
            }
        }
    }
}

/// Real Pauli-basis process matrix, `entries[out][in] = tr(P_out E(P_in)) / d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferMatrix {
    pub n: usize,
    pub labels: Vec<String>,
    pub entries: Vec<Vec<f64>>,
}

impl TransferMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let k = self.dim();
        DMatrix::from_fn(k, k, |i, j| self.entries[i][j])
    }

    fn from_matrix(n: usize, m: &DMatrix<f64>) -> Self {
        Self {
            n,
            labels: PauliString::all(n).iter().map(|p| p.label()).collect(),
            entries: (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
                .collect(),
        }
    }

    /// Transfer matrix of applying `self` first and then `next`.
    pub fn then(&self, next: &TransferMatrix) -> Result<TransferMatrix> {
        if self.n != next.n {
            return Err(Error::DimensionMismatch(self.n, next.n));
        }
        Ok(Self::from_matrix(self.n, &(next.matrix() * self.matrix())))
    }

    pub fn max_abs_diff(&self, other: &TransferMatrix) -> f64 {
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn qubits_for(d: usize) -> Result<usize> {
    match d {
        2 => Ok(1),
        4 => Ok(2),
        _ => invalid(format!("channel dimension {d} is not 2 or 4")),
    }
}

pub fn pauli_transfer(channel: &Channel) -> Result<TransferMatrix> {
    let d = channel.dim();
    let n = qubits_for(d)?;
    let paulis: Vec<ComplexMatrix> = PauliString::all(n).iter().map(|p| p.matrix()).collect();
    let images: Vec<ComplexMatrix> = paulis.iter().map(|p| channel.apply(p)).collect();
    let k = paulis.len();
    let mut m = DMatrix::zeros(k, k);
    for (i, p_out) in paulis.iter().enumerate() {
        for (j, img) in images.iter().enumerate() {
            let v = trace(&(p_out * img)) / d as f64;
            if v.im.abs() > 1e-10 {
                return invalid(format!("transfer entry ({i},{j}) has imaginary part {:.3e}", v.im));
            }
            m[(i, j)] = v.re;
        }
    }
    Ok(TransferMatrix::from_matrix(n, &m))
}

/// Average gate fidelity (d·tr(Rᵢᵀ R)/d² + 1)/(d + 1).
pub fn process_fidelity(exp: &TransferMatrix, ideal: &TransferMatrix) -> Result<f64> {
    if exp.n != ideal.n || exp.dim() != ideal.dim() {
        return Err(Error::DimensionMismatch(exp.dim(), ideal.dim()));
    }
    let d = (1usize << exp.n) as f64;
    let overlap: f64 = exp
        .entries
        .iter()
        .flatten()
        .zip(ideal.entries.iter().flatten())
        .map(|(a, b)| a * b)
        .sum();
    Ok((d * overlap / (d * d) + 1.0) / (d + 1.0))
}

/// Input-state × non-identity-observable pairs: 4ⁿ(4ⁿ − 1).
pub fn qpt_settings(n: usize) -> usize {
    let k = 4usize.pow(n as u32);
    k * (k - 1)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QptReport {
    pub settings: usize,
    pub transfer: TransferMatrix,
}

/// Rebuild the transfer matrix one (input Pauli, measured Pauli) setting at a
/// time. The identity row follows from trace preservation and is not measured.
pub fn simulate_qpt(channel: &Channel) -> Result<QptReport> {
    let d = channel.dim();
    let n = qubits_for(d)?;
    let paulis: Vec<ComplexMatrix> = PauliString::all(n).iter().map(|p| p.matrix()).collect();
    let k = paulis.len();
    let mut m = DMatrix::zeros(k, k);
    let mut settings = 0;
    for (j, p_in) in paulis.iter().enumerate() {
        let out = channel.apply(p_in);
        m[(0, j)] = (trace(&out) / d as f64).re;
        for (i, p_meas) in paulis.iter().enumerate().skip(1) {
            m[(i, j)] = (trace(&(p_meas * &out)) / d as f64).re;
            settings += 1;
        }
    }
    Ok(QptReport {
        settings,
        transfer: TransferMatrix::from_matrix(n, &m),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Pauli;
    use crate::synthesis::named_gate;

    #[test]
    fn identity_channel() {
        let r = pauli_transfer(&Channel::Unitary(identity(2))).unwrap();
        assert_eq!(r.matrix(), DMatrix::identity(4, 4));
    }

    #[test]
    fn x_conjugation_signs() {
        let r = pauli_transfer(&Channel::Unitary(Pauli::X.matrix())).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| r.entries[i][i]).collect();
        assert_eq!(diag, vec![1.0, 1.0, -1.0, -1.0]);
    }

    #[test]
    fn fidelity_examples() {
        let x = pauli_transfer(&Channel::Unitary(Pauli::X.matrix())).unwrap();
        let id = pauli_transfer(&Channel::Unitary(identity(2))).unwrap();
        assert!((process_fidelity(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        assert!((process_fidelity(&id, &x).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let cnot = pauli_transfer(&Channel::Unitary(named_gate("CNOT").unwrap())).unwrap();
        assert!(process_fidelity(&x, &cnot).is_err());
    }

    #[test]
    fn depolarized_fidelity() {
        // average fidelity of a depolarizing channel is 1 − ε(d − 1)/d
        let eps = 0.03;
        let ch = Channel::Depolarized {
            unitary: identity(2),
            eps,
        };
        let r = pauli_transfer(&ch).unwrap();
        let id = pauli_transfer(&Channel::Unitary(identity(2))).unwrap();
        assert!((process_fidelity(&r, &id).unwrap() - (1.0 - eps / 2.0)).abs() < 1e-14);
        assert_eq!(r.entries[0], vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn kraus_amplitude_damping_is_not_unital() {
        let g: f64 = 0.2;
        let k0 =
            ComplexMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c((1.0 - g).sqrt(), 0.0)]);
        let k1 = ComplexMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(g.sqrt(), 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let r = pauli_transfer(&Channel::Kraus(vec![k0, k1])).unwrap();
        // trace preserving: first row is (1, 0, 0, 0); unitality broken: Z picks up g
        assert!((r.entries[0][0] - 1.0).abs() < 1e-15 && r.entries[0][3].abs() < 1e-15);
        assert!((r.entries[3][0] - g).abs() < 1e-15);
    }

    #[test]
    fn unitary_transfer_is_orthogonal() {
        let r = pauli_transfer(&Channel::Unitary(named_gate("CNOT").unwrap()))
            .unwrap()
            .matrix();
        let defect = (r.transpose() * &r - DMatrix::identity(16, 16)).norm();
        assert!(defect < 1e-12);
    }

    #[test]
    fn settings_bookkeeping() {
        assert_eq!(qpt_settings(1), 12);
        assert_eq!(qpt_settings(2), 240);
        let ch = Channel::Depolarized {
            unitary: named_gate("CNOT").unwrap(),
            eps: 0.01,
        };
        let rep = simulate_qpt(&ch).unwrap();
        assert_eq!(rep.settings, 240);
        assert!(rep.transfer.max_abs_diff(&pauli_transfer(&ch).unwrap()) < 1e-14);
    }

    #[test]
    fn rejects_three_qubits() {
        assert!(pauli_transfer(&Channel::Unitary(identity(8))).is_err());
    }
}
