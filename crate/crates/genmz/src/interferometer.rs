//! The generalized Mach-Zehnder interferometer: phase layer, full unitary
//! S_d·F·S_d†, generator Hamiltonians h_i for d = 2,3,4, the preparation
//! unitaries U₃/U₄, per-station matrices, and collective-Hamiltonian
//! eigenvalues evaluated on the d GHZ components (never as d^N operators).

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::hw::{omega, weyl_operator, WeylKind};
use crate::multiport::symmetric_multiport;
use crate::numerics::{matrix_exponential, unitary_distance, C64, ComplexMatrix};

/// The d phase angles of the interferometer arms, wrapped to [0, 2π).
/// All downstream probabilities are 2π-periodic per phase, so wrapping is
/// observationally neutral.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector {
    angles: Vec<f64>,
}

impl PhaseVector {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.len() < 2 {
            return Err(Error::UnsupportedDim {
                d: angles.len(),
                context: "a phase vector needs at least two modes",
            });
        }
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter("non-finite phase angle".into()));
        }
        Ok(Self {
            angles: angles.iter().map(|a| a.rem_euclid(TAU)).collect(),
        })
    }

    pub fn zero(d: usize) -> Result<Self> {
        Self::new(vec![0.0; d])
    }

    /// All angles equal to c.
    pub fn uniform(d: usize, c: f64) -> Result<Self> {
        Self::new(vec![c; d])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.angles.len()
    }

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        self.angles[i]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.angles
    }

    /// This vector with c added to every angle.
    pub fn offset(&self, c: f64) -> Self {
        Self::new(self.angles.iter().map(|a| a + c).collect()).expect("finite offset")
    }
}

/// Mode carrying phase parameter k (0-based) in the phase layer of the
/// d-mode device. For d = 4 the discrete-Fourier pairing of phase
/// parameters with clock-operator powers puts parameter k on mode
/// (4 − k) mod 4; every other dimension pairs parameters with modes
/// directly. The assignment is an involution.
pub fn mode_assignment(d: usize) -> Vec<usize> {
    if d == 4 {
        vec![0, 3, 2, 1]
    } else {
        (0..d).collect()
    }
}

/// The canonical diagonal phase layer diag(e^{iα₁}, …, e^{iα_d}).
pub fn phase_layer(alpha: &PhaseVector) -> ComplexMatrix {
    let entries: Vec<C64> = alpha
        .as_slice()
        .iter()
        .map(|&a| C64::new(0.0, a).exp())
        .collect();
    ComplexMatrix::diagonal(&entries)
}

/// Phase layer with parameter k routed to its assigned mode.
fn assigned_phase_layer(alpha: &PhaseVector) -> ComplexMatrix {
    let d = alpha.dim();
    let assign = mode_assignment(d);
    let mut entries = vec![C64::new(1.0, 0.0); d];
    for (k, &mode) in assign.iter().enumerate() {
        entries[mode] = C64::new(0.0, alpha.get(k)).exp();
    }
    ComplexMatrix::diagonal(&entries)
}

/// The full interferometer 𝒰_d(α⃗) = S_d · F_d(α⃗) · S_d†.
pub fn mz_unitary(alpha: &PhaseVector) -> Result<ComplexMatrix> {
    let d = alpha.dim();
    let s = symmetric_multiport(d)?;
    Ok(s.mul(&assigned_phase_layer(alpha)).mul(&s.adjoint()))
}

/// Which construction produced a generator set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorSource {
    /// The closed-form Y-polynomial expressions validated against the device.
    PaperForm,
    /// h_i = S_d (P_i − I/d) S_d† built from mode projectors.
    Constructive,
}

/// The d Hermitian generators h_i with exp(i Σ α_i h_i) equal to 𝒰_d(α⃗)
/// up to a global phase.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub dim: usize,
    pub hamiltonians: Vec<ComplexMatrix>,
    pub source: GeneratorSource,
}

impl GeneratorSet {
    /// exp(i Σ α_k h_k).
    pub fn exponential(&self, alpha: &PhaseVector) -> Result<ComplexMatrix> {
        if alpha.dim() != self.dim {
            return Err(Error::DimensionMismatch(alpha.dim(), self.dim));
        }
        let mut g = ComplexMatrix::zeros(self.dim);
        for (k, h) in self.hamiltonians.iter().enumerate() {
            g = g.add(&h.scale(C64::new(0.0, alpha.get(k))));
        }
        matrix_exponential(&g)
    }
}

/// Deterministic set of phase vectors used to validate a generator set.
fn consistency_probes(d: usize) -> Vec<PhaseVector> {
    let mut state = 0x5deece66du64;
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64 * TAU
    };
    (0..8)
        .map(|_| PhaseVector::new((0..d).map(|_| next()).collect()).unwrap())
        .collect()
}

fn generators_consistent(set: &GeneratorSet) -> bool {
    for h in &set.hamiltonians {
        if h.hermiticity_deviation() > 1e-10 {
            return false;
        }
    }
    for alpha in consistency_probes(set.dim) {
        let direct = match mz_unitary(&alpha) {
            Ok(u) => u,
            Err(_) => return false,
        };
        let from_generators = match set.exponential(&alpha) {
            Ok(u) => u,
            Err(_) => return false,
        };
        match unitary_distance(&direct, &from_generators) {
            Ok(dist) if dist <= 1e-9 => {}
            _ => return false,
        }
    }
    true
}

/// h_i = S_d (P_{σ(i)} − I/d) S_d†, σ the phase-to-mode assignment. The
/// traceless shift keeps the spectra at {1−1/d, −1/d, …} and changes the
/// exponential only by a global phase.
fn constructive_generators(d: usize) -> Result<Vec<ComplexMatrix>> {
    let s = symmetric_multiport(d)?;
    let sh = s.adjoint();
    let assign = mode_assignment(d);
    let shift = 1.0 / d as f64;
    (0..d)
        .map(|k| {
            let mut p = ComplexMatrix::zeros(d);
            p.set(assign[k], assign[k], C64::new(1.0, 0.0));
            for i in 0..d {
                let v = p.get(i, i) - C64::new(shift, 0.0);
                p.set(i, i, v);
            }
            Ok(s.mul(&p).mul(&sh))
        })
        .collect()
}

/// Literal transcriptions of the closed-form generator expressions.
fn paper_form_generators(d: usize) -> Result<Vec<ComplexMatrix>> {
    match d {
        2 => {
            // h₁ = (I + Y)/2 and h₂ = (I − Y)/2 with the Hermitian Pauli
            // reading Y = i·XZ (the only reading that is Hermitian).
            let xz = weyl_operator(WeylKind::Y, 2, 1)?;
            let sigma_y = xz.scale(C64::new(0.0, 1.0));
            let id = ComplexMatrix::identity(2);
            let half = C64::new(0.5, 0.0);
            Ok(vec![
                id.add(&sigma_y).scale(half),
                id.sub(&sigma_y).scale(half),
            ])
        }
        3 => {
            let w = omega(3)?;
            let y = weyl_operator(WeylKind::Y, 3, 1)?;
            let y2 = weyl_operator(WeylKind::Y, 3, 2)?;
            let third = C64::new(1.0 / 3.0, 0.0);
            Ok(vec![
                y.scale(w).add(&y2.scale(w * w)).scale(third),
                y.add(&y2).scale(third),
                y.scale(w * w).add(&y2.scale(w)).scale(third),
            ])
        }
        4 => {
            // Literal reading of the printed four-mode generator formulas,
            // with Re A = (A + A†)/2 and principal-branch square roots:
            // η = √(2/ω), θ = √(2ω), μ = 2ω(1 − i/√(2ω)), ν = 2ω(1 − 1/√(2ω)).
            let w = omega(4)?;
            let y = weyl_operator(WeylKind::Y, 4, 1)?;
            let y2 = weyl_operator(WeylKind::Y, 4, 2)?;
            let y3 = weyl_operator(WeylKind::Y, 4, 3)?;
            let re_y = y.hermitian_part();
            let re_y3 = y3.hermitian_part();
            let eta = (C64::new(2.0, 0.0) / w).sqrt();
            let theta = (C64::new(2.0, 0.0) * w).sqrt();
            let mu = C64::new(2.0, 0.0) * w * (C64::new(1.0, 0.0) - C64::new(0.0, 1.0) / theta);
            let nu = C64::new(2.0, 0.0) * w * (C64::new(1.0, 0.0) - C64::new(1.0, 0.0) / theta);
            let q = w * C64::new(0.25, 0.0);
            let h1 = y
                .sub(&y2)
                .add(&y3)
                .sub(&re_y.scale(eta))
                .sub(&re_y3.scale(theta))
                .scale(q);
            let h2 = y2
                .sub(&y)
                .sub(&y3)
                .add(&re_y.scale(eta))
                .add(&re_y3.scale(eta))
                .scale(q);
            let h3 = y
                .adjoint()
                .add(&y3.conjugate())
                .sub(&y2)
                .sub(&re_y.scale(mu))
                .add(&re_y3.scale(nu))
                .scale(q);
            let h4 = y
                .add(&y3)
                .sub(&y2.conjugate())
                .sub(&re_y.scale(mu))
                .add(&re_y3.scale(nu))
                .scale(q);
            Ok(vec![h1, h2, h3, h4])
        }
        _ => Err(Error::UnsupportedDim {
            d,
            context: "generator sets are defined for d in {2,3,4}",
        }),
    }
}

/// Generator Hamiltonians of the d-mode interferometer. The closed-form
/// expressions are used when they pass the Hermiticity and exp-consistency
/// checks; otherwise the constructive projector form is returned and the
/// source field records the fallback.
pub fn phase_generators(d: usize) -> Result<GeneratorSet> {
    if !(2..=4).contains(&d) {
        return Err(Error::UnsupportedDim {
            d,
            context: "generator sets are defined for d in {2,3,4}",
        });
    }
    let paper = GeneratorSet {
        dim: d,
        hamiltonians: paper_form_generators(d)?,
        source: GeneratorSource::PaperForm,
    };
    if generators_consistent(&paper) {
        return Ok(paper);
    }
    let constructive = GeneratorSet {
        dim: d,
        hamiltonians: constructive_generators(d)?,
        source: GeneratorSource::Constructive,
    };
    debug_assert!(generators_consistent(&constructive));
    Ok(constructive)
}

/// The explicit preparation multiport U₃ or U₄.
pub fn preparation_unitary(d: usize) -> Result<ComplexMatrix> {
    match d {
        3 => {
            let w = omega(3)?;
            let r = C64::new(1.0 / 3f64.sqrt(), 0.0);
            let one = C64::new(1.0, 0.0);
            ComplexMatrix::from_rows(&[
                vec![one * r, one * r, one * r],
                vec![w * w * r, one * r, w * r],
                vec![one * r, w * w * r, w * r],
            ])
        }
        4 => {
            let e = |v: f64| C64::new(v / 2.0, 0.0);
            ComplexMatrix::from_rows(&[
                vec![e(-1.0), e(-1.0), e(1.0), e(1.0)],
                vec![e(1.0), e(-1.0), e(1.0), e(-1.0)],
                vec![e(1.0), e(-1.0), e(-1.0), e(1.0)],
                vec![e(1.0), e(1.0), e(1.0), e(1.0)],
            ])
        }
        _ => Err(Error::UnsupportedDim {
            d,
            context: "preparation unitaries are defined for d in {3,4}",
        }),
    }
}

/// Per-station evolution 𝒰_d(α⃗)·U_d.
pub fn station_matrix(alpha: &PhaseVector) -> Result<ComplexMatrix> {
    let d = alpha.dim();
    if d != 3 && d != 4 {
        return Err(Error::UnsupportedDim {
            d,
            context: "station matrices are defined for d in {3,4}",
        });
    }
    Ok(mz_unitary(alpha)?.mul(&preparation_unitary(d)?))
}

/// Diagonal eigenvalue table λ_{i,j} of the generators after the
/// preparation rotation: λ_{i,j} = [U_d† h_i U_d]_{jj}. The rotation must
/// diagonalize every generator; that joint-diagonalization property is what
/// makes collective expectations tractable on GHZ components.
pub fn generator_lambda_table(d: usize) -> Result<Vec<Vec<f64>>> {
    if d != 3 && d != 4 {
        return Err(Error::UnsupportedDim {
            d,
            context: "the lambda table needs the preparation unitary (d in {3,4})",
        });
    }
    let set = phase_generators(d)?;
    let u = preparation_unitary(d)?;
    let uh = u.adjoint();
    let mut table = Vec::with_capacity(d);
    for h in &set.hamiltonians {
        let rotated = uh.mul(h).mul(&u);
        let off = rotated.max_offdiagonal();
        if off > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "preparation rotation fails to diagonalize a generator (off-diagonal {off:.3e})"
            )));
        }
        table.push((0..d).map(|j| rotated.get(j, j).re).collect());
    }
    Ok(table)
}

/// N·λ_{i,j}: the eigenvalue of the collective Hamiltonian H_i on the j-th
/// GHZ component |j…j⟩ after the preparation rotation.
pub fn collective_eigenvalue(
    d: usize,
    generator_index: usize,
    basis_label: usize,
    n: u32,
) -> Result<f64> {
    if generator_index >= d || basis_label >= d {
        return Err(Error::InvalidParameter(format!(
            "generator index {generator_index} / basis label {basis_label} out of range for d={d}"
        )));
    }
    let table = generator_lambda_table(d)?;
    Ok(n as f64 * table[generator_index][basis_label])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn phase_vector_wraps_into_principal_interval() {
        let v = PhaseVector::new(vec![-0.5, 7.0, TAU]).unwrap();
        for &a in v.as_slice() {
            assert!((0.0..TAU).contains(&a));
        }
        assert!((v.get(0) - (TAU - 0.5)).abs() < 1e-15);
        assert!(PhaseVector::new(vec![0.0]).is_err());
        assert!(PhaseVector::new(vec![f64::NAN, 0.0]).is_err());
    }

    #[test]
    fn phase_layer_examples() {
        let id3 = phase_layer(&PhaseVector::zero(3).unwrap());
        assert!(id3.sub(&ComplexMatrix::identity(3)).max_abs() < 1e-15);

        let v = PhaseVector::new(vec![0.7, 2.1]).unwrap();
        let f = phase_layer(&v);
        assert!((f.get(0, 0) - C64::new(0.0, 0.7).exp()).norm() < 1e-15);
        assert!((f.get(1, 1) - C64::new(0.0, 2.1).exp()).norm() < 1e-15);
        // Equals exp[(1/2)(I+Z)iα₁ + (1/2)(I−Z)iα₂].
        let z = weyl_operator(WeylKind::Z, 2, 1).unwrap();
        let id = ComplexMatrix::identity(2);
        let g = id
            .add(&z)
            .scale(C64::new(0.0, 0.35))
            .add(&id.sub(&z).scale(C64::new(0.0, 1.05)));
        let via_exp = matrix_exponential(&g).unwrap();
        assert!(f.sub(&via_exp).max_abs() < 1e-12);

        let v4 = PhaseVector::new(vec![PI, 0.0, 0.0, 0.0]).unwrap();
        let f4 = phase_layer(&v4);
        assert!((f4.get(0, 0) - C64::new(-1.0, 0.0)).norm() < 1e-12);
        for i in 1..4 {
            assert!((f4.get(i, i) - C64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn uniform_phases_give_global_phase_only() {
        for d in 2..=6 {
            let c = 0.83;
            let u = mz_unitary(&PhaseVector::uniform(d, c).unwrap()).unwrap();
            let expected = ComplexMatrix::identity(d).scale(C64::new(0.0, c).exp());
            assert!(u.sub(&expected).max_abs() < 1e-10, "d={d}");
        }
    }

    #[test]
    fn mz_at_zero_is_identity() {
        for d in 2..=6 {
            let u = mz_unitary(&PhaseVector::zero(d).unwrap()).unwrap();
            assert!(u.sub(&ComplexMatrix::identity(d)).max_abs() < 1e-10);
        }
    }

    #[test]
    fn generator_sources_and_spectra() {
        use crate::numerics::hermitian_eigensystem;

        let g2 = phase_generators(2).unwrap();
        assert_eq!(g2.source, GeneratorSource::PaperForm);
        let (ev, _) = hermitian_eigensystem(&g2.hamiltonians[0]).unwrap();
        assert!(ev[0].abs() < 1e-10 && (ev[1] - 1.0).abs() < 1e-10);
        // h₁ + h₂ = I for the two-mode case.
        let sum2 = g2.hamiltonians[0].add(&g2.hamiltonians[1]);
        assert!(sum2.sub(&ComplexMatrix::identity(2)).max_abs() < 1e-12);

        let g3 = phase_generators(3).unwrap();
        assert_eq!(g3.source, GeneratorSource::PaperForm);
        let mut sum3 = ComplexMatrix::zeros(3);
        for h in &g3.hamiltonians {
            sum3 = sum3.add(h);
        }
        assert!(sum3.max_abs() < 1e-12, "three-mode generators must sum to 0");
        for h in &g3.hamiltonians {
            let (ev, _) = hermitian_eigensystem(h).unwrap();
            assert!((ev[0] + 1.0 / 3.0).abs() < 1e-10);
            assert!((ev[1] + 1.0 / 3.0).abs() < 1e-10);
            assert!((ev[2] - 2.0 / 3.0).abs() < 1e-10);
        }

        // The printed four-mode expressions fail the consistency gate
        // (one of them is not even Hermitian), so the constructive path
        // must be reported.
        let g4 = phase_generators(4).unwrap();
        assert_eq!(g4.source, GeneratorSource::Constructive);
        for h in &g4.hamiltonians {
            let (ev, _) = hermitian_eigensystem(h).unwrap();
            for k in 0..3 {
                assert!((ev[k] + 0.25).abs() < 1e-10);
            }
            assert!((ev[3] - 0.75).abs() < 1e-10);
        }
    }

    #[test]
    fn printed_four_mode_forms_are_rejected_for_cause() {
        let hs = paper_form_generators(4).unwrap();
        let worst = hs
            .iter()
            .map(|h| h.hermiticity_deviation())
            .fold(0.0f64, f64::max);
        assert!(worst > 1e-3, "expected a non-Hermitian transcription, got {worst:.3e}");
    }

    #[test]
    fn exp_consistency_for_all_generator_dims() {
        for d in 2..=4 {
            let set = phase_generators(d).unwrap();
            for alpha in consistency_probes(d) {
                let dist = unitary_distance(
                    &mz_unitary(&alpha).unwrap(),
                    &set.exponential(&alpha).unwrap(),
                )
                .unwrap();
                assert!(dist <= 1e-9, "d={d} distance {dist:.3e}");
            }
        }
    }

    #[test]
    fn preparation_unitary_relations() {
        let u3 = preparation_unitary(3).unwrap();
        assert!(u3.unitarity_deviation() < 1e-12);
        let y = weyl_operator(WeylKind::Y, 3, 1).unwrap();
        let z = weyl_operator(WeylKind::Z, 3, 1).unwrap();
        let rotated = u3.adjoint().mul(&y).mul(&u3);
        assert!(rotated.sub(&z).max_abs() < 1e-12, "U₃†YU₃ = Z");
        let y2 = weyl_operator(WeylKind::Y, 3, 2).unwrap();
        let z2 = weyl_operator(WeylKind::Z, 3, 2).unwrap();
        let rotated2 = u3.adjoint().mul(&y2).mul(&u3);
        assert!(rotated2.sub(&z2).max_abs() < 1e-12, "U₃†Y²U₃ = Z²");

        let u4 = preparation_unitary(4).unwrap();
        assert!(u4.unitarity_deviation() < 1e-12);
        assert!(preparation_unitary(2).is_err());
    }

    #[test]
    fn station_matrix_at_zero_phases_is_the_preparation() {
        for d in [3usize, 4] {
            let m = station_matrix(&PhaseVector::zero(d).unwrap()).unwrap();
            let u = preparation_unitary(d).unwrap();
            assert!(m.sub(&u).max_abs() < 1e-10, "d={d}");
            assert!(m.unitarity_deviation() < 1e-10);
        }
    }

    #[test]
    fn lambda_tables_have_one_top_eigenvalue_per_component() {
        for d in [3usize, 4] {
            let table = generator_lambda_table(d).unwrap();
            let top = 1.0 - 1.0 / d as f64;
            for j in 0..d {
                let col: Vec<f64> = (0..d).map(|i| table[i][j]).collect();
                let hits = col.iter().filter(|&&v| (v - top).abs() < 1e-10).count();
                assert_eq!(hits, 1, "d={d} column {j}");
                let sum: f64 = col.iter().sum();
                assert!(sum.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn collective_eigenvalue_examples() {
        // d=3: the component with λ = 2/3 scaled by N = 5 gives 10/3.
        let table = generator_lambda_table(3).unwrap();
        let j = (0..3)
            .find(|&j| (table[0][j] - 2.0 / 3.0).abs() < 1e-10)
            .unwrap();
        let v = collective_eigenvalue(3, 0, j, 5).unwrap();
        assert!((v - 10.0 / 3.0).abs() < 1e-10);

        // d=4: Σ_j λ² over one generator = 9/16 + 3/16 = 3/4 per particle.
        let t4 = generator_lambda_table(4).unwrap();
        for i in 0..4 {
            let s: f64 = (0..4).map(|j| t4[i][j] * t4[i][j]).sum();
            assert!((s - 0.75).abs() < 1e-10);
        }

        assert_eq!(collective_eigenvalue(3, 0, 0, 0).unwrap(), 0.0);
        assert!(collective_eigenvalue(3, 3, 0, 1).is_err());
    }
}
