//! Symmetric d-mode multiports generated by polynomials in the shift
//! operator X, the balanced-transition check, and the Jordan-Schwinger
//! decomposition of generator Hamiltonians into pairwise mode couplings.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hw::{weyl_operator, WeylKind};
use crate::numerics::{matrix_exponential, C64, ComplexMatrix};

/// Tolerance below which a multiport must look balanced (all |entry|² = 1/d).
pub const SYMMETRY_TOL: f64 = 1e-9;

/// One term c·X^power of a multiport generator, with the real coefficient
/// kept in exact form: c = numerator/denominator · π · (√5 if sqrt5).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorCoefficient {
    pub power: u32,
    pub numerator: i64,
    pub denominator: i64,
    pub sqrt5: bool,
}

impl GeneratorCoefficient {
    fn value(&self) -> f64 {
        let mut c = self.numerator as f64 / self.denominator as f64 * PI;
        if self.sqrt5 {
            c *= 5f64.sqrt();
        }
        c
    }

    /// Coefficient without the π factor (the Hamiltonian-side value).
    fn hamiltonian_value(&self) -> f64 {
        self.value() / PI
    }
}

/// Generator description of a symmetric multiport S_d = exp(i Σ c_k X^k).
#[derive(Debug, Clone)]
pub struct MultiportSpec {
    pub dim: usize,
    pub coefficients: Vec<GeneratorCoefficient>,
}

impl MultiportSpec {
    pub fn for_dim(d: usize) -> Result<Self> {
        let gc = |power: u32, numerator: i64, denominator: i64, sqrt5: bool| GeneratorCoefficient {
            power,
            numerator,
            denominator,
            sqrt5,
        };
        let coefficients = match d {
            2 => vec![gc(1, 1, 4, false)],
            3 => vec![gc(1, 2, 9, false), gc(2, 2, 9, false)],
            4 => vec![gc(1, 1, 4, false), gc(2, 1, 4, false), gc(3, 1, 4, false)],
            5 => vec![
                gc(1, 4, 25, true),
                gc(2, -4, 25, true),
                gc(3, -4, 25, true),
                gc(4, 4, 25, true),
            ],
            6 => vec![
                gc(1, 1, 3, false),
                gc(2, 1, 9, false),
                gc(3, 1, 12, false),
                gc(4, 1, 9, false),
                gc(5, 1, 3, false),
            ],
            _ => {
                return Err(Error::UnsupportedDim {
                    d,
                    context: "symmetric multiports are defined for d in 2..=6",
                })
            }
        };
        Ok(Self {
            dim: d,
            coefficients,
        })
    }

    /// The skew-Hermitian exponent i·Σ c_k X^k.
    pub fn generator(&self) -> Result<ComplexMatrix> {
        let mut g = ComplexMatrix::zeros(self.dim);
        for term in &self.coefficients {
            let xk = weyl_operator(WeylKind::X, self.dim, term.power)?;
            g = g.add(&xk.scale(C64::new(0.0, term.value())));
        }
        Ok(g)
    }

    pub fn unitary(&self) -> Result<ComplexMatrix> {
        matrix_exponential(&self.generator()?)
    }

    /// The Hermitian X-polynomial the couplings are read from. The common
    /// scalar prefactor is stripped when every coefficient has the same
    /// magnitude (d ≤ 5); the d=6 generator keeps its distinct weights.
    pub fn coupling_hamiltonian(&self) -> Result<ComplexMatrix> {
        let mags: Vec<f64> = self
            .coefficients
            .iter()
            .map(|t| t.hamiltonian_value().abs())
            .collect();
        let uniform = mags.iter().all(|&m| (m - mags[0]).abs() < 1e-15);
        let mut h = ComplexMatrix::zeros(self.dim);
        for term in &self.coefficients {
            let xk = weyl_operator(WeylKind::X, self.dim, term.power)?;
            let c = if uniform {
                (term.hamiltonian_value() / mags[0]).round()
            } else {
                term.hamiltonian_value()
            };
            h = h.add(&xk.scale(C64::new(c, 0.0)));
        }
        Ok(h)
    }
}

/// S_d with the balanced-splitter property |S_jk|² = 1/d.
pub fn symmetric_multiport(d: usize) -> Result<ComplexMatrix> {
    MultiportSpec::for_dim(d)?.unitary()
}

/// max over entries of | |U_jk|² − 1/d |.
pub fn symmetry_residual(u: &ComplexMatrix) -> Result<f64> {
    let dev = u.unitarity_deviation();
    if dev > SYMMETRY_TOL {
        return Err(Error::NotUnitary(dev));
    }
    let d = u.dim();
    let target = 1.0 / d as f64;
    let mut worst = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            worst = worst.max((u.get(i, j).norm_sqr() - target).abs());
        }
    }
    Ok(worst)
}

/// Pairwise mode couplings of a Hermitian matrix under the Jordan-Schwinger
/// map: entry (i,j), i<j, is the coefficient of a_i†a_j (the conjugate rides
/// on a_j†a_i), and the real diagonal collects the a_i†a_i terms. Exact
/// zeros are omitted so the table is a lossless sparse view.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingTable {
    pub dim: usize,
    pub couplings: Vec<(usize, usize, C64)>,
    pub diagonal: Vec<(usize, f64)>,
}

pub fn pair_couplings(h: &ComplexMatrix) -> Result<CouplingTable> {
    let dev = h.hermiticity_deviation();
    if dev > 1e-10 {
        return Err(Error::NotHermitian(dev));
    }
    let d = h.dim();
    let mut couplings = Vec::new();
    let mut diagonal = Vec::new();
    for i in 0..d {
        let di = h.get(i, i).re;
        if di != 0.0 {
            diagonal.push((i, di));
        }
        for j in (i + 1)..d {
            let c = h.get(i, j);
            if c != C64::new(0.0, 0.0) {
                couplings.push((i, j, c));
            }
        }
    }
    Ok(CouplingTable {
        dim: d,
        couplings,
        diagonal,
    })
}

impl CouplingTable {
    /// Rebuild the Hermitian matrix the table was read from.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut h = ComplexMatrix::zeros(self.dim);
        for &(i, j, c) in &self.couplings {
            h.set(i, j, c);
            h.set(j, i, c.conj());
        }
        for &(i, v) in &self.diagonal {
            h.set(i, i, C64::new(v, 0.0));
        }
        h
    }
}

/// Whether a coupling table is of the symmetric form Σ e^{iφ_ij}(a_i†a_j + a_j†a_i):
/// every off-diagonal coupling of unit modulus and no diagonal terms.
#[derive(Debug, Clone, PartialEq)]
pub enum SymmetricFormReport {
    /// Unit-modulus couplings; φ_ij = arg(c_ij) reported in [0, 2π) with 2π ≡ 0.
    Symmetric { phases: Vec<(usize, usize, f64)> },
    /// At least one non-unit coupling (or a diagonal term); moduli reported.
    Asymmetric { amplitudes: Vec<(usize, usize, f64)> },
}

impl SymmetricFormReport {
    pub fn is_symmetric_form(&self) -> bool {
        matches!(self, SymmetricFormReport::Symmetric { .. })
    }
}

pub fn symmetric_form_check(table: &CouplingTable) -> SymmetricFormReport {
    let unit = table
        .couplings
        .iter()
        .all(|&(_, _, c)| (c.norm() - 1.0).abs() <= 1e-10)
        && table.diagonal.iter().all(|&(_, v)| v.abs() <= 1e-10);
    if unit {
        let phases = table
            .couplings
            .iter()
            .map(|&(i, j, c)| {
                let mut phi = c.arg();
                if phi < 0.0 {
                    phi += 2.0 * PI;
                }
                // arg lands in (-π, π], so a +1 coupling (the "2π" phase)
                // reports as 0 by construction.
                (i, j, phi)
            })
            .collect();
        SymmetricFormReport::Symmetric { phases }
    } else {
        let amplitudes = table
            .couplings
            .iter()
            .map(|&(i, j, c)| (i, j, c.norm()))
            .collect();
        SymmetricFormReport::Asymmetric { amplitudes }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::unitary_distance;

    #[test]
    fn multiports_are_balanced_and_unitary() {
        for d in 2..=6 {
            let s = symmetric_multiport(d).unwrap();
            assert!(s.unitarity_deviation() <= 1e-10, "d={d} not unitary");
            let r = symmetry_residual(&s).unwrap();
            let tol = if d == 5 { 1e-9 } else { 1e-10 };
            assert!(r <= tol, "d={d} symmetry residual {r:.3e}");
        }
    }

    #[test]
    fn two_port_matches_closed_form() {
        // (1/√2)[[1, i],[i, 1]] up to global phase.
        let s2 = symmetric_multiport(2).unwrap();
        let r = 0.5f64.sqrt();
        let reference = ComplexMatrix::from_rows(&[
            vec![C64::new(r, 0.0), C64::new(0.0, r)],
            vec![C64::new(0.0, r), C64::new(r, 0.0)],
        ])
        .unwrap();
        assert!(unitary_distance(&s2, &reference).unwrap() < 1e-12);
    }

    #[test]
    fn residual_of_identity_and_hadamard() {
        let r = symmetry_residual(&ComplexMatrix::identity(3)).unwrap();
        assert!((r - 2.0 / 3.0).abs() < 1e-15);
        let h = 0.5f64.sqrt();
        let had = ComplexMatrix::from_rows(&[
            vec![C64::new(h, 0.0), C64::new(h, 0.0)],
            vec![C64::new(h, 0.0), C64::new(-h, 0.0)],
        ])
        .unwrap();
        assert!(symmetry_residual(&had).unwrap() < 1e-15);
    }

    #[test]
    fn residual_rejects_non_unitary() {
        let m = ComplexMatrix::identity(2).scale(C64::new(2.0, 0.0));
        assert!(matches!(symmetry_residual(&m), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn five_mode_couplings_are_unit_with_ring_pattern() {
        let h5 = MultiportSpec::for_dim(5)
            .unwrap()
            .coupling_hamiltonian()
            .unwrap();
        let table = pair_couplings(&h5).unwrap();
        assert!(table.diagonal.is_empty());
        assert_eq!(table.couplings.len(), 10);
        for &(i, j, c) in &table.couplings {
            let ring = (j - i).min(5 - (j - i));
            let expected = if ring == 1 { 1.0 } else { -1.0 };
            assert!((c - C64::new(expected, 0.0)).norm() < 1e-12, "({i},{j})");
        }
        let report = symmetric_form_check(&table);
        assert!(report.is_symmetric_form());
        if let SymmetricFormReport::Symmetric { phases } = report {
            for (i, j, phi) in phases {
                let ring = (j - i).min(5 - (j - i));
                let expected = if ring == 1 { 0.0 } else { PI };
                assert!((phi - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn six_mode_couplings_have_three_amplitudes() {
        let h6 = MultiportSpec::for_dim(6)
            .unwrap()
            .coupling_hamiltonian()
            .unwrap();
        let table = pair_couplings(&h6).unwrap();
        let report = symmetric_form_check(&table);
        assert!(!report.is_symmetric_form());
        if let SymmetricFormReport::Asymmetric { amplitudes } = report {
            for (i, j, a) in amplitudes {
                let ring = (j - i).min(6 - (j - i));
                let expected = match ring {
                    1 => 1.0 / 3.0,
                    2 => 1.0 / 9.0,
                    3 => 1.0 / 12.0,
                    _ => unreachable!(),
                };
                assert!((a - expected).abs() < 1e-12, "({i},{j})");
            }
        }
    }

    #[test]
    fn diagonal_matrix_has_empty_couplings() {
        let m = ComplexMatrix::diagonal(&[C64::new(1.0, 0.0), C64::new(2.0, 0.0)]);
        let table = pair_couplings(&m).unwrap();
        assert!(table.couplings.is_empty());
        assert_eq!(table.diagonal, vec![(0, 1.0), (1, 2.0)]);
        // Vacuously symmetric only if the diagonal were empty too.
        assert!(!symmetric_form_check(&table).is_symmetric_form());
        let empty = pair_couplings(&ComplexMatrix::zeros(3)).unwrap();
        assert!(symmetric_form_check(&empty).is_symmetric_form());
    }

    #[test]
    fn couplings_reject_non_hermitian() {
        let mut m = ComplexMatrix::zeros(2);
        m.set(0, 1, C64::new(1.0, 0.0));
        assert!(matches!(pair_couplings(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn reconstruction_is_exact() {
        for d in 2..=6 {
            let h = MultiportSpec::for_dim(d)
                .unwrap()
                .coupling_hamiltonian()
                .unwrap();
            let table = pair_couplings(&h).unwrap();
            assert_eq!(table.reconstruct(), h);
        }
    }
}
