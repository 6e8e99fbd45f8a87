//! Heisenberg-Weyl shift/clock operators X, Z and their product Y = XZ for
//! qudit dimension d ≥ 2, with ω = exp(2iπ/d).
//!
//! X and Z powers are built from modular index/angle arithmetic so that
//! X^d = I and Z^d = I hold exactly; Y^k is the literal matrix power (XZ)^k,
//! which differs from X^k Z^k by ω-phases for d > 2.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::numerics::{C64, ComplexMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeylKind {
    X,
    Z,
    Y,
}

/// A Heisenberg-Weyl operator kind^power together with its matrix.
#[derive(Debug, Clone)]
pub struct WeylOperator {
    pub kind: WeylKind,
    pub dim: usize,
    pub power: u32,
    pub matrix: ComplexMatrix,
}

impl WeylOperator {
    pub fn new(kind: WeylKind, dim: usize, power: u32) -> Result<Self> {
        Ok(Self {
            kind,
            dim,
            power,
            matrix: weyl_operator(kind, dim, power)?,
        })
    }
}

/// ω = exp(2iπ/d).
pub fn omega(d: usize) -> Result<C64> {
    check_dim(d)?;
    Ok(unit_phase(1, d))
}

/// Matrix of kind^power in the computational basis.
pub fn weyl_operator(kind: WeylKind, d: usize, power: u32) -> Result<ComplexMatrix> {
    check_dim(d)?;
    let p = (power as usize) % d;
    match kind {
        WeylKind::X => {
            let mut m = ComplexMatrix::zeros(d);
            for i in 0..d {
                m.set(i, (i + p) % d, C64::new(1.0, 0.0));
            }
            Ok(m)
        }
        WeylKind::Z => {
            let entries: Vec<C64> = (0..d).map(|i| unit_phase(i * p, d)).collect();
            Ok(ComplexMatrix::diagonal(&entries))
        }
        WeylKind::Y => {
            let y = weyl_operator(WeylKind::X, d, 1)?.mul(&weyl_operator(WeylKind::Z, d, 1)?);
            Ok(matrix_power(&y, power))
        }
    }
}

/// exp(2iπ·k/d) with the angle reduced modulo d before evaluation.
fn unit_phase(k: usize, d: usize) -> C64 {
    let r = k % d;
    if r == 0 {
        return C64::new(1.0, 0.0);
    }
    C64::new(0.0, TAU * r as f64 / d as f64).exp()
}

fn matrix_power(m: &ComplexMatrix, power: u32) -> ComplexMatrix {
    let mut result = ComplexMatrix::identity(m.dim());
    let mut base = m.clone();
    let mut e = power;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base);
        }
    }
    result
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::UnsupportedDim {
            d,
            context: "Heisenberg-Weyl operators need d >= 2",
        });
    }
    Ok(())
}
