//! Exact N-photon outcome distributions for the three- and four-mode
//! devices: the closed trigonometric forms, an independent brute-force
//! amplitude oracle on the station matrix, outcome enumeration with exact
//! multinomial weights, and CSV-serializable tables.
//!
//! A collective outcome is a count vector (z, j, d̂[, t]): total clicks per
//! local mode across the N stations. The same tables serve the
//! single-interferometer N-photon reading, where the entries are photon
//! counts in the output modes of one device; the probabilities coincide.

use std::f64::consts::PI;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::fmt17;
use crate::interferometer::{station_matrix, PhaseVector};

/// d nonnegative per-mode counts summing to the photon number N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountVector {
    counts: Vec<usize>,
}

impl CountVector {
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        if counts.len() < 2 {
            return Err(Error::UnsupportedDim {
                d: counts.len(),
                context: "a count vector needs at least two modes",
            });
        }
        Ok(Self { counts })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    /// Total photon number N.
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    #[inline]
    pub fn get(&self, i: usize) -> usize {
        self.counts[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.counts
    }
}

/// All compositions of n into d nonnegative parts, first coordinate
/// decreasing (so (n,0,…,0) comes first and (0,…,0,n) last).
/// The count is C(n+d−1, d−1).
pub fn enumerate_counts(d: usize, n: usize) -> Vec<CountVector> {
    let mut out = Vec::new();
    let mut current = vec![0usize; d];
    fn rec(out: &mut Vec<CountVector>, current: &mut Vec<usize>, pos: usize, remaining: usize) {
        if pos == current.len() - 1 {
            current[pos] = remaining;
            out.push(CountVector {
                counts: current.clone(),
            });
            return;
        }
        for v in (0..=remaining).rev() {
            current[pos] = v;
            rec(out, current, pos + 1, remaining - v);
        }
    }
    rec(&mut out, &mut current, 0, n);
    out
}

/// Exact multinomial coefficient n! / Π counts_i!.
pub fn multinomial(n: usize, counts: &CountVector) -> Result<BigUint> {
    let total = counts.total();
    if total != n {
        return Err(Error::CountSumMismatch {
            got: total,
            expected: n,
        });
    }
    let mut result = BigUint::one();
    let mut remaining = n;
    for &c in counts.as_slice() {
        result *= binomial(remaining, c);
        remaining -= c;
    }
    Ok(result)
}

fn binomial(n: usize, k: usize) -> BigUint {
    let k = k.min(n - k);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= BigUint::from(n - i);
        den *= BigUint::from(i + 1);
    }
    num / den
}

/// Per-sequence outcome probability from the closed trigonometric form.
///
/// Values in [−1e−12, 0) are rounding of an exact zero and clamp to 0;
/// anything below −1e−12 means the cosine arguments are wrong and is a
/// hard error rather than something to paper over.
pub fn probability_closed(counts: &CountVector, alpha: &PhaseVector) -> Result<f64> {
    let d = check_pair(counts, alpha)?;
    let n = counts.total() as f64;
    let raw = match d {
        3 => {
            let (a1, a2, a3) = (alpha.get(0), alpha.get(1), alpha.get(2));
            let dj = counts.get(2) as f64 - counts.get(1) as f64;
            let t1 = (2.0 * PI / 3.0) * dj + n * (a1 - a2);
            let t2 = -(2.0 * PI / 3.0) * dj + n * (a1 - a3);
            let t3 = -(4.0 * PI / 3.0) * dj + n * (a2 - a3);
            (3.0 + 2.0 * t1.cos() + 2.0 * t2.cos() + 2.0 * t3.cos())
                / 3f64.powi(counts.total() as i32 + 1)
        }
        4 => {
            let thetas = four_mode_angles(counts, alpha);
            (4.0 + 2.0 * thetas.iter().map(|t| t.cos()).sum::<f64>())
                / 4f64.powi(counts.total() as i32 + 1)
        }
        _ => unreachable!(),
    };
    if raw < -1e-12 {
        return Err(Error::NegativeProbability(raw));
    }
    Ok(raw.clamp(0.0, 1.0))
}

/// The six cosine arguments of the four-mode closed form, ordered as
/// (2,1), (3,1), (4,1), (2,3), (2,4), (3,4) phase pairs.
fn four_mode_angles(counts: &CountVector, alpha: &PhaseVector) -> [f64; 6] {
    let n = counts.total() as f64;
    let (z, j, dd) = (
        counts.get(0) as f64,
        counts.get(1) as f64,
        counts.get(2) as f64,
    );
    let (a1, a2, a3, a4) = (alpha.get(0), alpha.get(1), alpha.get(2), alpha.get(3));
    [
        (dd + j) * PI + n * (a2 - a1),
        (dd - z) * PI + n * (a3 - a1),
        (j - z) * PI + n * (a4 - a1),
        (j + z) * PI + n * (a2 - a3),
        (dd + z) * PI + n * (a2 - a4),
        (dd - j) * PI + n * (a3 - a4),
    ]
}

/// Independent brute-force probability: (1/d)·|Σ_j Π_i M[i][j]^{n_i}|² on
/// the station matrix M. This is the oracle the closed form is checked
/// against; it shares no code with `probability_closed`.
pub fn probability_oracle(counts: &CountVector, alpha: &PhaseVector) -> Result<f64> {
    let d = check_pair(counts, alpha)?;
    let m = station_matrix(alpha)?;
    let mut total = num_complex::Complex64::new(0.0, 0.0);
    for col in 0..d {
        let mut amp = num_complex::Complex64::new(1.0, 0.0);
        for mode in 0..d {
            amp *= m.get(mode, col).powu(counts.get(mode) as u32);
        }
        total += amp;
    }
    Ok(total.norm_sqr() / d as f64)
}

fn check_pair(counts: &CountVector, alpha: &PhaseVector) -> Result<usize> {
    let d = counts.dim();
    if d != alpha.dim() {
        return Err(Error::DimensionMismatch(d, alpha.dim()));
    }
    if d != 3 && d != 4 {
        return Err(Error::UnsupportedDim {
            d,
            context: "closed-form distributions exist for d in {3,4}",
        });
    }
    Ok(d)
}

/// One row of an outcome table.
#[derive(Debug, Clone)]
pub struct OutcomeRow {
    pub counts: CountVector,
    pub multiplicity: BigUint,
    pub probability_per_sequence: f64,
    pub total_probability: f64,
}

/// The full outcome distribution for (d, N, α⃗), rows in enumeration order.
#[derive(Debug, Clone)]
pub struct OutcomeDistribution {
    pub dim: usize,
    pub photons: usize,
    pub phases: PhaseVector,
    pub rows: Vec<OutcomeRow>,
}

pub fn distribution_table(d: usize, n: usize, alpha: &PhaseVector) -> Result<OutcomeDistribution> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "distribution tables need at least one photon".into(),
        ));
    }
    let mut rows = Vec::new();
    let mut mass = 0.0;
    for counts in enumerate_counts(d, n) {
        let p = probability_closed(&counts, alpha)?;
        let multiplicity = multinomial(n, &counts)?;
        let weight = multiplicity.to_f64().ok_or_else(|| {
            Error::InvalidParameter("multinomial weight exceeds f64 range".into())
        })?;
        let total = weight * p;
        mass += total;
        rows.push(OutcomeRow {
            counts,
            multiplicity,
            probability_per_sequence: p,
            total_probability: total,
        });
    }
    if (mass - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "distribution mass {mass:.12} deviates from 1 beyond 1e-9"
        )));
    }
    Ok(OutcomeDistribution {
        dim: d,
        photons: n,
        phases: alpha.clone(),
        rows,
    })
}

impl OutcomeDistribution {
    pub fn total_mass(&self) -> f64 {
        self.rows.iter().map(|r| r.total_probability).sum()
    }

    /// CSV with columns n0..n{d-1}, multiplicity, p_sequence, p_total.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.dim {
            out.push_str(&format!("n{i},"));
        }
        out.push_str("multiplicity,p_sequence,p_total\n");
        for row in &self.rows {
            for &c in row.counts.as_slice() {
                out.push_str(&format!("{c},"));
            }
            out.push_str(&format!(
                "{},{},{}\n",
                row.multiplicity,
                fmt17(row.probability_per_sequence),
                fmt17(row.total_probability)
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cv(counts: &[usize]) -> CountVector {
        CountVector::new(counts.to_vec()).unwrap()
    }

    #[test]
    fn enumeration_matches_examples() {
        let e = enumerate_counts(3, 1);
        let expected: Vec<Vec<usize>> = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(
            e.iter().map(|c| c.as_slice().to_vec()).collect::<Vec<_>>(),
            expected
        );
        assert_eq!(enumerate_counts(3, 2).len(), 6);
        assert_eq!(enumerate_counts(4, 3).len(), 20);
    }

    #[test]
    fn enumeration_count_and_totals() {
        for (d, n) in [(3usize, 7usize), (4, 5), (5, 3)] {
            let e = enumerate_counts(d, n);
            let expected = multinomial(n + d - 1, &cv(&[n, d - 1]))
                .unwrap()
                .to_f64()
                .unwrap() as usize;
            assert_eq!(e.len(), expected);
            assert!(e.iter().all(|c| c.total() == n));
        }
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial(2, &cv(&[1, 1, 0])).unwrap(), BigUint::from(2u32));
        assert_eq!(multinomial(8, &cv(&[8, 0, 0])).unwrap(), BigUint::from(1u32));
        assert_eq!(
            multinomial(6, &cv(&[2, 2, 2])).unwrap(),
            BigUint::from(90u32)
        );
        assert!(matches!(
            multinomial(5, &cv(&[1, 1, 1])),
            Err(Error::CountSumMismatch { got: 3, expected: 5 })
        ));
    }

    #[test]
    fn multinomial_is_exact_for_large_n() {
        // 30!/(10!10!10!) = 5550996791340.
        let m = multinomial(30, &cv(&[10, 10, 10])).unwrap();
        assert_eq!(m.to_string(), "5550996791340");
    }

    #[test]
    fn single_photon_routing_at_zero_phases() {
        let a3 = PhaseVector::zero(3).unwrap();
        assert!((probability_closed(&cv(&[1, 0, 0]), &a3).unwrap() - 1.0).abs() < 1e-12);
        assert!(probability_closed(&cv(&[0, 1, 0]), &a3).unwrap() < 1e-12);
        let a4 = PhaseVector::zero(4).unwrap();
        assert!((probability_closed(&cv(&[0, 0, 0, 1]), &a4).unwrap() - 1.0).abs() < 1e-12);
        assert!(probability_closed(&cv(&[1, 0, 0, 0]), &a4).unwrap() < 1e-12);
        // Same through the oracle.
        assert!((probability_oracle(&cv(&[1, 0, 0]), &a3).unwrap() - 1.0).abs() < 1e-12);
        assert!(probability_oracle(&cv(&[0, 1, 0]), &a3).unwrap() < 1e-12);
        assert!((probability_oracle(&cv(&[0, 0, 0, 1]), &a4).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_oracle_on_random_phases() {
        let mut state = 0xabcdef12345u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            (state >> 11) as f64 / (1u64 << 53) as f64 * std::f64::consts::TAU
        };
        for d in [3usize, 4] {
            for n in 1..=4usize {
                for _ in 0..6 {
                    let alpha =
                        PhaseVector::new((0..d).map(|_| next()).collect()).unwrap();
                    for counts in enumerate_counts(d, n) {
                        let a = probability_closed(&counts, &alpha).unwrap();
                        let b = probability_oracle(&counts, &alpha).unwrap();
                        assert!((a - b).abs() <= 1e-10, "d={d} n={n} |Δ|={:.3e}", (a - b).abs());
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_is_sequence_order_blind() {
        // The per-sequence amplitude is a product over stations, so any
        // outcome sequence with the same counts has the same probability;
        // spot-check by permuting the factor order in a hand-rolled product.
        let alpha = PhaseVector::new(vec![0.31, 1.7, 4.2]).unwrap();
        let m = station_matrix(&alpha).unwrap();
        let sequences = [[0usize, 1, 2], [2, 0, 1], [1, 2, 0]];
        let mut probs = Vec::new();
        for seq in sequences {
            let mut total = num_complex::Complex64::new(0.0, 0.0);
            for col in 0..3 {
                let mut amp = num_complex::Complex64::new(1.0, 0.0);
                for &mode in &seq {
                    amp *= m.get(mode, col);
                }
                total += amp;
            }
            probs.push(total.norm_sqr() / 3.0);
        }
        for p in &probs[1..] {
            assert!((p - probs[0]).abs() < 1e-14);
        }
        let via_counts = probability_oracle(&cv(&[1, 1, 1]), &alpha).unwrap();
        assert!((via_counts - probs[0]).abs() < 1e-14);
    }

    #[test]
    fn table_normalizes_and_routes_deterministically() {
        let a3 = PhaseVector::zero(3).unwrap();
        let t = distribution_table(3, 1, &a3).unwrap();
        assert!((t.rows[0].total_probability - 1.0).abs() < 1e-12);

        let alpha = PhaseVector::new(vec![0.4, 1.9, 5.0]).unwrap();
        let t = distribution_table(3, 4, &alpha).unwrap();
        assert!((t.total_mass() - 1.0).abs() < 1e-9);

        // All N photons land in mode 3 at zero phases for d=4.
        let a4 = PhaseVector::zero(4).unwrap();
        let t = distribution_table(4, 3, &a4).unwrap();
        for row in &t.rows {
            let expected = if row.counts.as_slice() == [0, 0, 0, 3] {
                1.0
            } else {
                0.0
            };
            assert!((row.total_probability - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn uniform_offset_leaves_probabilities_unchanged() {
        let alpha = PhaseVector::new(vec![0.9, 2.2, 3.3]).unwrap();
        let shifted = alpha.offset(1.234);
        for counts in enumerate_counts(3, 5) {
            let a = probability_closed(&counts, &alpha).unwrap();
            let b = probability_closed(&counts, &shifted).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn quasi_period_is_two_pi_over_n_per_coordinate() {
        let n = 5usize;
        let alpha = PhaseVector::new(vec![0.9, 2.2, 3.3]).unwrap();
        let step = std::f64::consts::TAU / n as f64;
        for coord in 0..3 {
            let mut shifted = alpha.as_slice().to_vec();
            shifted[coord] += step;
            let shifted = PhaseVector::new(shifted).unwrap();
            for counts in enumerate_counts(3, n) {
                let a = probability_closed(&counts, &alpha).unwrap();
                let b = probability_closed(&counts, &shifted).unwrap();
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn csv_shape() {
        let a3 = PhaseVector::zero(3).unwrap();
        let csv = distribution_table(3, 2, &a3).unwrap().to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "n0,n1,n2,multiplicity,p_sequence,p_total");
        assert_eq!(csv.lines().count(), 7);
    }
}
