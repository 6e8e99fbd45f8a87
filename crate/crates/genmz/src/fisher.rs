//! Classical Fisher information over the outcome distributions, interest
//! submatrices with a fixed known reference phase, the nuisance-block
//! variant (which is singular here by construction), and the pure-state
//! quantum Fisher information of the optimal probe evaluated on GHZ
//! components.

use std::f64::consts::PI;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::distribution::{enumerate_counts, multinomial, probability_closed, CountVector};
use crate::error::{Error, Result};
use crate::interferometer::{generator_lambda_table, PhaseVector};
use crate::numerics::{hermitian_eigensystem, C64, ComplexMatrix};

/// Probabilities at or below this level count as zero support.
const SUPPORT_EPS: f64 = 1e-15;
/// Gradient magnitude above which a zero-probability outcome is fatal.
const GRAD_EPS: f64 = 1e-12;
/// Condition number at which submatrix inversion is refused.
const COND_LIMIT: f64 = 1e12;

/// One Fisher analysis: which (d−1)-element phase subset is estimated,
/// which mode serves as the fixed, known reference, and at what phases.
#[derive(Debug, Clone)]
pub struct EstimationScenario {
    pub dim: usize,
    pub photons: usize,
    /// 0-based indices of the estimated phases, ascending, size d−1.
    pub interest: Vec<usize>,
    /// 0-based index of the reference phase.
    pub reference: usize,
    pub phases: PhaseVector,
}

impl EstimationScenario {
    pub fn new(d: usize, photons: usize, reference: usize, phases: PhaseVector) -> Result<Self> {
        if d != 3 && d != 4 {
            return Err(Error::UnsupportedDim {
                d,
                context: "estimation scenarios exist for d in {3,4}",
            });
        }
        if phases.dim() != d {
            return Err(Error::DimensionMismatch(phases.dim(), d));
        }
        if reference >= d {
            return Err(Error::InvalidParameter(format!(
                "reference index {reference} out of range for d={d}"
            )));
        }
        if photons == 0 {
            return Err(Error::InvalidParameter(
                "estimation needs at least one photon".into(),
            ));
        }
        Ok(Self {
            dim: d,
            photons,
            interest: (0..d).filter(|&i| i != reference).collect(),
            reference,
            phases,
        })
    }
}

/// Analytic gradient (∂p/∂α₁, …, ∂p/∂α_d) of the closed-form per-sequence
/// probability. Components sum to zero exactly in structure (only phase
/// differences appear).
pub fn probability_gradient(counts: &CountVector, alpha: &PhaseVector) -> Result<Vec<f64>> {
    let d = counts.dim();
    if d != alpha.dim() {
        return Err(Error::DimensionMismatch(d, alpha.dim()));
    }
    let n = counts.total() as f64;
    match d {
        3 => {
            let (a1, a2, a3) = (alpha.get(0), alpha.get(1), alpha.get(2));
            let dj = counts.get(2) as f64 - counts.get(1) as f64;
            let t1 = (2.0 * PI / 3.0) * dj + n * (a1 - a2);
            let t2 = -(2.0 * PI / 3.0) * dj + n * (a1 - a3);
            let t3 = -(4.0 * PI / 3.0) * dj + n * (a2 - a3);
            let f = 2.0 * n / 3f64.powi(counts.total() as i32 + 1);
            Ok(vec![
                -f * (t1.sin() + t2.sin()),
                f * (t1.sin() - t3.sin()),
                f * (t2.sin() + t3.sin()),
            ])
        }
        4 => {
            let (z, j, dd) = (
                counts.get(0) as f64,
                counts.get(1) as f64,
                counts.get(2) as f64,
            );
            let (a1, a2, a3, a4) = (alpha.get(0), alpha.get(1), alpha.get(2), alpha.get(3));
            let s = [
                ((dd + j) * PI + n * (a2 - a1)).sin(),
                ((dd - z) * PI + n * (a3 - a1)).sin(),
                ((j - z) * PI + n * (a4 - a1)).sin(),
                ((j + z) * PI + n * (a2 - a3)).sin(),
                ((dd + z) * PI + n * (a2 - a4)).sin(),
                ((dd - j) * PI + n * (a3 - a4)).sin(),
            ];
            let f = 2.0 * n / 4f64.powi(counts.total() as i32 + 1);
            Ok(vec![
                f * (s[0] + s[1] + s[2]),
                -f * (s[0] + s[3] + s[4]),
                f * (-s[1] + s[3] - s[5]),
                f * (-s[2] + s[4] + s[5]),
            ])
        }
        _ => Err(Error::UnsupportedDim {
            d,
            context: "gradients exist for d in {3,4}",
        }),
    }
}

/// Full d×d classical Fisher information matrix at the given phases:
/// 𝓕_ij = Σ_counts multinomial·(∂_i p)(∂_j p)/p.
///
/// Outcomes with p ≤ 1e−15 and all derivatives ≤ 1e−12 are removable zeros
/// and contribute nothing; a vanishing probability with a live derivative
/// means the information diverges at this phase point and raises
/// `SingularSupport` instead of being patched.
pub fn fim_full(d: usize, n: usize, alpha: &PhaseVector) -> Result<Vec<Vec<f64>>> {
    let mut f = vec![vec![0.0; d]; d];
    for counts in enumerate_counts(d, n) {
        let p = probability_closed(&counts, alpha)?;
        let grad = probability_gradient(&counts, alpha)?;
        if p <= SUPPORT_EPS {
            let gmax = grad.iter().fold(0.0f64, |m, g| m.max(g.abs()));
            if gmax > GRAD_EPS {
                return Err(Error::SingularSupport { p, grad: gmax });
            }
            continue;
        }
        let weight = multinomial(n, &counts)?
            .to_f64()
            .ok_or_else(|| Error::InvalidParameter("multinomial exceeds f64".into()))?
            / p;
        for i in 0..d {
            for j in i..d {
                let v = weight * grad[i] * grad[j];
                f[i][j] += v;
                if i != j {
                    f[j][i] += v;
                }
            }
        }
    }
    Ok(f)
}

fn real_to_complex(m: &[Vec<f64>]) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.len(), |i, j| C64::new(m[i][j], 0.0))
}

/// Eigenvalues (ascending) and eigenvectors of a real symmetric matrix.
fn symmetric_eigensystem(m: &[Vec<f64>]) -> Result<(Vec<f64>, ComplexMatrix)> {
    hermitian_eigensystem(&real_to_complex(m))
}

fn condition_number(evals: &[f64]) -> f64 {
    let max = evals.iter().fold(0.0f64, |m, &l| m.max(l.abs()));
    let min = evals.iter().fold(f64::INFINITY, |m, &l| m.min(l.abs()));
    if min <= 0.0 || max == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Inverse of a 2×2 or 3×3 symmetric matrix by explicit adjugate.
fn adjugate_inverse(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    match m.len() {
        2 => {
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            if det == 0.0 {
                return None;
            }
            Some(vec![
                vec![m[1][1] / det, -m[0][1] / det],
                vec![-m[1][0] / det, m[0][0] / det],
            ])
        }
        3 => {
            let c = |i: usize, j: usize| m[i][j];
            let cof = |a: usize, b: usize, x: usize, y: usize, p: usize, q: usize, r: usize, s: usize| {
                c(a, b) * c(x, y) - c(p, q) * c(r, s)
            };
            let a00 = cof(1, 1, 2, 2, 1, 2, 2, 1);
            let a01 = -cof(1, 0, 2, 2, 1, 2, 2, 0);
            let a02 = cof(1, 0, 2, 1, 1, 1, 2, 0);
            let det = c(0, 0) * a00 + c(0, 1) * a01 + c(0, 2) * a02;
            if det == 0.0 {
                return None;
            }
            let a10 = -cof(0, 1, 2, 2, 0, 2, 2, 1);
            let a11 = cof(0, 0, 2, 2, 0, 2, 2, 0);
            let a12 = -cof(0, 0, 2, 1, 0, 1, 2, 0);
            let a20 = cof(0, 1, 1, 2, 0, 2, 1, 1);
            let a21 = -cof(0, 0, 1, 2, 0, 2, 1, 0);
            let a22 = cof(0, 0, 1, 1, 0, 1, 1, 0);
            Some(vec![
                vec![a00 / det, a10 / det, a20 / det],
                vec![a01 / det, a11 / det, a21 / det],
                vec![a02 / det, a12 / det, a22 / det],
            ])
        }
        _ => None,
    }
}

/// Fisher analysis of an interest subset against a fixed known reference.
/// Indices in the serialized form are 1-based to match the α₁…α_d naming.
#[derive(Debug, Clone, Serialize)]
pub struct FisherReport {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub phases: Vec<f64>,
    /// 1-based indices of the estimated phases.
    pub interest: Vec<usize>,
    /// 1-based index of the fixed reference phase.
    pub reference: usize,
    pub fim: Vec<Vec<f64>>,
    pub fim_interest: Vec<Vec<f64>>,
    pub inverse: Option<Vec<Vec<f64>>>,
    pub trace_inverse: Option<f64>,
    pub condition: f64,
    pub singular: bool,
    /// Repetition count ν; bounds are reported per repetition.
    pub repetitions: u32,
}

impl FisherReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }
}

/// 𝓕_{𝓘,𝓘} extracted from the full FIM, inverted when the condition number
/// stays below 1e12; singularity is a reported state, not an error.
pub fn fim_interest(scenario: &EstimationScenario) -> Result<FisherReport> {
    let d = scenario.dim;
    let full = fim_full(d, scenario.photons, &scenario.phases)?;
    let k = scenario.interest.len();
    let mut sub = vec![vec![0.0; k]; k];
    for (a, &i) in scenario.interest.iter().enumerate() {
        for (b, &j) in scenario.interest.iter().enumerate() {
            sub[a][b] = full[i][j];
        }
    }
    let (evals, _) = symmetric_eigensystem(&sub)?;
    let condition = condition_number(&evals);
    let invertible = evals.iter().all(|&l| l > 0.0) && condition < COND_LIMIT;
    let inverse = if invertible {
        adjugate_inverse(&sub)
    } else {
        None
    };
    let trace_inverse = inverse
        .as_ref()
        .map(|m| (0..k).map(|i| m[i][i]).sum::<f64>());
    Ok(FisherReport {
        d,
        n: scenario.photons,
        phases: scenario.phases.as_slice().to_vec(),
        interest: scenario.interest.iter().map(|&i| i + 1).collect(),
        reference: scenario.reference + 1,
        fim: full,
        fim_interest: sub,
        inverse,
        trace_inverse,
        condition,
        singular: !invertible,
        repetitions: 1,
    })
}

/// Outcome of attempting the nuisance-parameter bound 𝓖_{𝓘,𝓘} (the block
/// of the inverse of the full FIM). For this interferometer the full FIM
/// has the uniform-offset null vector 𝟙/√d, so the singular report is the
/// expected result: all d phases can never be estimated simultaneously.
#[derive(Debug, Clone, Serialize)]
pub struct NuisanceReport {
    pub singular: bool,
    pub condition: f64,
    /// Unit null direction of the full FIM when singular.
    pub null_direction: Option<Vec<f64>>,
    /// 𝓖_{𝓘,𝓘} when the full FIM is invertible.
    pub block: Option<Vec<Vec<f64>>>,
}

pub fn fim_nuisance_block(scenario: &EstimationScenario) -> Result<NuisanceReport> {
    let d = scenario.dim;
    let full = fim_full(d, scenario.photons, &scenario.phases)?;
    let (evals, vectors) = symmetric_eigensystem(&full)?;
    let condition = condition_number(&evals);
    if condition >= COND_LIMIT {
        // Eigenvalue of smallest magnitude is first after ascending sort of
        // a PSD spectrum; normalize the sign so the first component is ≥ 0.
        let mut null: Vec<f64> = (0..d).map(|i| vectors.get(i, 0).re).collect();
        if null[0] < 0.0 {
            for v in null.iter_mut() {
                *v = -*v;
            }
        }
        return Ok(NuisanceReport {
            singular: true,
            condition,
            null_direction: Some(null),
            block: None,
        });
    }
    // Invert through the eigensystem and take the interest block.
    let mut inv = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in 0..d {
            let mut s = 0.0;
            for k in 0..d {
                s += vectors.get(i, k).re * vectors.get(j, k).re / evals[k];
            }
            inv[i][j] = s;
        }
    }
    let k = scenario.interest.len();
    let mut block = vec![vec![0.0; k]; k];
    for (a, &i) in scenario.interest.iter().enumerate() {
        for (b, &j) in scenario.interest.iter().enumerate() {
            block[a][b] = inv[i][j];
        }
    }
    Ok(NuisanceReport {
        singular: false,
        condition,
        null_direction: None,
        block: Some(block),
    })
}

/// Pure-state quantum Fisher information matrix of the optimal probe:
/// 𝓕^Q_ij = 4(⟨H_iH_j⟩ − ⟨H_i⟩⟨H_j⟩), evaluated from the collective
/// eigenvalues on the d GHZ components — no d^N-dimensional objects.
pub fn qfim_optimal_state(d: usize, n: usize) -> Result<Vec<Vec<f64>>> {
    let table = generator_lambda_table(d)?;
    let nn = n as f64;
    let means: Vec<f64> = table
        .iter()
        .map(|row| nn * row.iter().sum::<f64>() / d as f64)
        .collect();
    let mut q = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in 0..d {
            let second: f64 = (0..d)
                .map(|m| nn * table[i][m] * nn * table[j][m])
                .sum::<f64>()
                / d as f64;
            q[i][j] = 4.0 * (second - means[i] * means[j]);
        }
    }
    Ok(q)
}

/// Checks (1/d)·tr 𝓕^Q ≤ (4/d)·Σ_i ⟨H_i²⟩ on the optimal probe and
/// returns both sides.
pub fn mean_qfi_bound_check(d: usize, n: usize) -> Result<(f64, f64, bool)> {
    let q = qfim_optimal_state(d, n)?;
    let lhs = (0..d).map(|i| q[i][i]).sum::<f64>() / d as f64;
    let table = generator_lambda_table(d)?;
    let nn = n as f64;
    let rhs = 4.0 / d as f64
        * table
            .iter()
            .map(|row| row.iter().map(|&l| (nn * l) * (nn * l)).sum::<f64>() / d as f64)
            .sum::<f64>();
    Ok((lhs, rhs, lhs <= rhs + 1e-12))
}

/// Verifies that every GHZ component carries the same Σ_i (Nλ_{i,j})²
/// value, i.e. the probe is an eigenstate of Σ_i H_i².
pub fn optimal_state_eigencheck(d: usize, n: usize) -> Result<(bool, f64)> {
    let table = generator_lambda_table(d)?;
    let nn = n as f64;
    let per_component: Vec<f64> = (0..d)
        .map(|j| {
            (0..d)
                .map(|i| (nn * table[i][j]) * (nn * table[i][j]))
                .sum()
        })
        .collect();
    let mean = per_component.iter().sum::<f64>() / d as f64;
    let spread = per_component
        .iter()
        .fold(0.0f64, |m, &v| m.max((v - mean).abs()));
    Ok((spread <= 1e-10 * mean.max(1.0), mean))
}
