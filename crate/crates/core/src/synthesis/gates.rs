use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{c, identity, unitarity_defect, ComplexMatrix};

pub const GATE_NAMES: [&str; 6] = ["I", "X", "H", "P", "T", "CNOT"];

pub fn named_gate(name: &str) -> Result<ComplexMatrix> {
    let o = c(0.0, 0.0);
    let l = c(1.0, 0.0);
    let s = c(FRAC_1_SQRT_2, 0.0);
    let m = match name {
        "I" => identity(2),
        "X" => ComplexMatrix::from_row_slice(2, 2, &[o, l, l, o]),
        "H" => ComplexMatrix::from_row_slice(2, 2, &[s, s, s, -s]),
        "P" | "S" => ComplexMatrix::from_row_slice(2, 2, &[l, o, o, c(0.0, 1.0)]),
        "T" => ComplexMatrix::from_row_slice(
            2,
            2,
            &[l, o, o, Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)],
        ),
        "CNOT" => {
            let mut m = identity(4);
            m[(2, 2)] = o;
            m[(3, 3)] = o;
            m[(2, 3)] = l;
            m[(3, 2)] = l;
            m
        }
        "I4" => identity(4),
        other => return invalid(format!("unknown gate '{other}'")),
    };
    Ok(m)
}

/// A target gate given by name or as explicit real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TargetSpec {
    Named(String),
    Matrix { re: Vec<Vec<f64>>, im: Vec<Vec<f64>> },
}

impl TargetSpec {
    pub fn matrix(&self) -> Result<ComplexMatrix> {
        let m = match self {
            TargetSpec::Named(name) => named_gate(name)?,
            TargetSpec::Matrix { re, im } => {
                let d = re.len();
                if d == 0 || im.len() != d || re.iter().chain(im).any(|row| row.len() != d) {
                    return invalid("target matrix must be square with matching re/im parts");
                }
                ComplexMatrix::from_fn(d, d, |i, j| c(re[i][j], im[i][j]))
            }
        };
        let d = m.nrows();
        if d != 2 && d != 4 {
            return Err(Error::Invalid(format!("target dimension {d} is not 2 or 4")));
        }
        let defect = unitarity_defect(&m);
        if defect > 1e-8 {
            return Err(Error::NotUnitary(defect));
        }
        Ok(m)
    }

    pub fn label(&self) -> String {
        match self {
            TargetSpec::Named(name) => name.clone(),
            TargetSpec::Matrix { .. } => "custom".into(),
        }
    }
}
