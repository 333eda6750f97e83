//! Dense complex matrix kernel used by every other module.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. Qubit 0 is the most
//! significant tensor factor throughout.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

pub const HERMITIAN_TOL: f64 = 1e-12;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(d: usize) -> ComplexMatrix {
    ComplexMatrix::identity(d, d)
}

pub fn zeros(d: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(d, d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> ComplexMatrix {
        let o = c(0.0, 0.0);
        let l = c(1.0, 0.0);
        let i = c(0.0, 1.0);
        let entries = match self {
            Pauli::I => [l, o, o, l],
            Pauli::X => [o, l, l, o],
            Pauli::Y => [o, -i, i, o],
            Pauli::Z => [l, o, o, -l],
        };
        ComplexMatrix::from_row_slice(2, 2, &entries)
    }

    pub fn label(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Paulis, qubit 0 first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    pub labels: Vec<Pauli>,
}

impl PauliString {
    pub fn new(labels: Vec<Pauli>) -> Self {
        Self { labels }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// A single `p` on qubit `k`, identity elsewhere.
    pub fn single(n: usize, k: usize, p: Pauli) -> Self {
        let mut labels = vec![Pauli::I; n];
        labels[k] = p;
        Self { labels }
    }

    pub fn is_identity(&self) -> bool {
        self.labels.iter().all(|&p| p == Pauli::I)
    }

    pub fn matrix(&self) -> ComplexMatrix {
        self.labels.iter().fold(identity(1), |acc, p| kron(&acc, &p.matrix()))
    }

    /// All 4^n strings in lexicographic order I < X < Y < Z, qubit 0 most significant.
    pub fn all(n: usize) -> Vec<PauliString> {
        let count = 4usize.pow(n as u32);
        (0..count)
            .map(|mut idx| {
                let mut labels = vec![Pauli::I; n];
                for k in (0..n).rev() {
                    labels[k] = Pauli::ALL[idx % 4];
                    idx /= 4;
                }
                PauliString { labels }
            })
            .collect()
    }

    pub fn label(&self) -> String {
        self.labels.iter().map(|p| p.label()).collect()
    }
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}

pub fn trace(a: &ComplexMatrix) -> Complex64 {
    a.trace()
}

pub fn frobenius(a: &ComplexMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

fn check_square(a: &ComplexMatrix) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch(a.nrows(), a.ncols()));
    }
    Ok(a.nrows())
}

/// Relative Hermiticity defect ‖A − A†‖_F / ‖A‖_F (0 for the zero matrix).
pub fn hermitian_defect(a: &ComplexMatrix) -> f64 {
    let norm = frobenius(a);
    if norm == 0.0 {
        return 0.0;
    }
    frobenius(&(a - a.adjoint())) / norm
}

pub fn check_hermitian(a: &ComplexMatrix) -> Result<()> {
    check_square(a)?;
    let defect = hermitian_defect(a);
    if defect >= HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    Ok(())
}

/// ‖U†U − 1‖_F.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    let d = u.nrows();
    frobenius(&(u.adjoint() * u - identity(d)))
}

#[derive(Clone, Debug)]
pub struct HermEig {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column k is the eigenvector for `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermEig {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = self.values.len();
        let mut lam = zeros(d);
        for (k, &v) in self.values.iter().enumerate() {
            lam[(k, k)] = c(v, 0.0);
        }
        &self.vectors * lam * self.vectors.adjoint()
    }
}

/// Hermitian eigendecomposition with ascending eigenvalues.
///
/// Each eigenvector is given a canonical phase: its first component of
/// (near-)maximal modulus is made real and positive, so that identical input
/// gives identical output.
pub fn herm_eig(a: &ComplexMatrix) -> Result<HermEig> {
    check_hermitian(a)?;
    let d = a.nrows();
    // Symmetrize exactly so the solver sees a perfectly Hermitian matrix.
    let sym = (a + a.adjoint()) * c(0.5, 0.0);
    let eig = sym.symmetric_eigen();

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

    let mut vectors = zeros(d);
    let mut values = Vec::with_capacity(d);
    for (col, &k) in order.iter().enumerate() {
        values.push(eig.eigenvalues[k]);
        let mut v = eig.eigenvectors.column(k).into_owned();
        let v_norm = v.norm();
        v /= c(v_norm, 0.0);
        let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if let Some(pivot) = v.iter().find(|z| z.norm() >= max - 1e-9) {
            let phase = pivot.conj() / pivot.norm();
            v *= phase;
        }
        vectors.set_column(col, &v);
    }
    Ok(HermEig { values, vectors })
}

/// exp(−i·s·A) for Hermitian A.
pub fn unitary_exp(a: &ComplexMatrix, s: f64) -> Result<ComplexMatrix> {
    let eig = herm_eig(a)?;
    Ok(exp_from_eig(&eig, s))
}

pub(crate) fn exp_from_eig(eig: &HermEig, s: f64) -> ComplexMatrix {
    let d = eig.values.len();
    let mut scaled = eig.vectors.clone();
    for (k, &lam) in eig.values.iter().enumerate() {
        let ph = Complex64::from_polar(1.0, -s * lam);
        for r in 0..d {
            scaled[(r, k)] *= ph;
        }
    }
    scaled * eig.vectors.adjoint()
}

/// |tr(U†V)|/d, invariant under global phase.
pub fn unitary_fidelity(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<f64> {
    let du = check_square(u)?;
    let dv = check_square(v)?;
    if du != dv {
        return Err(Error::DimensionMismatch(du, dv));
    }
    let mut tr = c(0.0, 0.0);
    for i in 0..du {
        for j in 0..du {
            tr += u[(j, i)].conj() * v[(j, i)];
        }
    }
    Ok((tr.norm() / du as f64).min(1.0))
}

/// Singular values in descending order.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let svd = a.clone().svd(false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}
