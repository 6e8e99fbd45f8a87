//! Minimal dense complex linear algebra for small (d ≤ 6) operator matrices.
//!
//! Everything here works on square matrices stored row-major. The exponential
//! of i×Hermitian generators goes through the Hermitian eigensystem so the
//! result is unitary to machine precision; a Padé(13) scaling-and-squaring
//! fallback covers general arguments.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default absolute entrywise tolerance for unitarity/Hermiticity checks.
pub const STRUCTURE_TOL: f64 = 1e-10;

/// Off-diagonal mass threshold (relative to the Frobenius norm) for the
/// cyclic Jacobi eigensolver.
const JACOBI_TOL: f64 = 1e-13;

const MAX_JACOBI_SWEEPS: usize = 64;

/// Dense square complex matrix; row index = output mode, column index = input mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    bad_row: i,
                    bad_len: r.len(),
                });
            }
        }
        let mut m = Self::zeros(dim);
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &v) in entries.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix product dimension mismatch");
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix sum dimension mismatch");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a += *b;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix difference dimension mismatch");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a -= *b;
        }
        out
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= c;
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i))
    }

    pub fn conjugate(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(i, j).conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Hermitian part (A + A†)/2.
    pub fn hermitian_part(&self) -> Self {
        self.add(&self.adjoint()).scale(C64::new(0.5, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Maximum column sum of absolute values (the induced 1-norm).
    pub fn one_norm(&self) -> f64 {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Max entrywise |A - A†|.
    pub fn hermiticity_deviation(&self) -> f64 {
        self.sub(&self.adjoint()).max_abs()
    }

    /// Max entrywise |A + A†| (zero for skew-Hermitian matrices).
    pub fn skew_deviation(&self) -> f64 {
        self.add(&self.adjoint()).max_abs()
    }

    /// Max entrywise |U†U - I|.
    pub fn unitarity_deviation(&self) -> f64 {
        self.adjoint()
            .mul(self)
            .sub(&Self::identity(self.dim))
            .max_abs()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let d = self.dim;
        (0..d).all(|i| (0..d).all(|j| i == j || self.get(i, j).norm() <= tol))
    }

    pub fn max_offdiagonal(&self) -> f64 {
        let d = self.dim;
        let mut m = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    m = m.max(self.get(i, j).norm());
                }
            }
        }
        m
    }
}

/// exp(A) for a square matrix.
///
/// Skew-Hermitian and Hermitian arguments (the only ones arising from the
/// interferometer generators) go through the eigensystem, which keeps
/// exp(iH) exactly unitary up to rounding. Anything else falls back to
/// scaling-and-squaring with a Padé(13) approximant.
pub fn matrix_exponential(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_finite() {
        return Err(Error::InvalidParameter(
            "matrix exponential of non-finite entries".into(),
        ));
    }
    let scale = a.max_abs().max(1.0);
    if a.skew_deviation() <= STRUCTURE_TOL * scale {
        // A = iH with H Hermitian.
        let h = a.scale(C64::new(0.0, -1.0));
        let (evals, v) = hermitian_eigensystem(&h)?;
        let phases: Vec<C64> = evals.iter().map(|&l| C64::new(0.0, l).exp()).collect();
        return Ok(v
            .mul(&ComplexMatrix::diagonal(&phases))
            .mul(&v.adjoint()));
    }
    if a.hermiticity_deviation() <= STRUCTURE_TOL * scale {
        let (evals, v) = hermitian_eigensystem(a)?;
        let exps: Vec<C64> = evals.iter().map(|&l| C64::new(l.exp(), 0.0)).collect();
        return Ok(v.mul(&ComplexMatrix::diagonal(&exps)).mul(&v.adjoint()));
    }
    Ok(expm_pade13(a))
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix via cyclic
/// Jacobi rotations. The returned V satisfies V†HV = diag(λ) with V unitary.
pub fn hermitian_eigensystem(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let dev = h.hermiticity_deviation();
    if dev > STRUCTURE_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let d = h.dim();
    let mut b = h.hermitian_part();
    let mut v = ComplexMatrix::identity(d);
    let norm = b.frobenius_norm().max(1.0);

    let off = |m: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    s += m.get(i, j).norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off(&b) > JACOBI_TOL * norm {
        sweeps += 1;
        if sweeps > MAX_JACOBI_SWEEPS {
            return Err(Error::EigenConvergence(MAX_JACOBI_SWEEPS));
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = b.get(p, q);
                let mag = apq.norm();
                if mag <= JACOBI_TOL * norm / (d * d) as f64 {
                    continue;
                }
                let app = b.get(p, p).re;
                let aqq = b.get(q, q).re;
                // Phase factor turning the (p,q) block into a real symmetric one.
                let phase = apq / mag;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let wp = phase * c; // W[p][p]
                let ws = phase * s; // W[p][q]

                // B <- W† B W with W acting in the (p,q) plane:
                // W[p][p]=phase*c, W[p][q]=phase*s, W[q][p]=-s, W[q][q]=c.
                for k in 0..d {
                    let bkp = b.get(k, p);
                    let bkq = b.get(k, q);
                    b.set(k, p, bkp * wp - bkq * s);
                    b.set(k, q, bkp * ws + bkq * c);
                }
                for k in 0..d {
                    let bpk = b.get(p, k);
                    let bqk = b.get(q, k);
                    b.set(p, k, wp.conj() * bpk - s * bqk);
                    b.set(q, k, ws.conj() * bpk + c * bqk);
                }
                for k in 0..d {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * wp - vkq * s);
                    v.set(k, q, vkp * ws + vkq * c);
                }
                // Clean the rotated pivot to an exact zero.
                b.set(p, q, C64::new(0.0, 0.0));
                b.set(q, p, C64::new(0.0, 0.0));
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    let evals_raw: Vec<f64> = (0..d).map(|i| b.get(i, i).re).collect();
    order.sort_by(|&i, &j| evals_raw[i].total_cmp(&evals_raw[j]));
    let evals: Vec<f64> = order.iter().map(|&i| evals_raw[i]).collect();
    let vectors = ComplexMatrix::from_fn(d, |i, j| v.get(i, order[j]));
    Ok((evals, vectors))
}

/// Global-phase-invariant distance min_{|c|=1} ‖U − cV‖_F, with the
/// convention that no phase alignment is applied when trace(V†U) = 0.
pub fn unitary_distance(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch(u.dim(), v.dim()));
    }
    let t = v.adjoint().mul(u).trace();
    let c = if t.norm() == 0.0 {
        C64::new(1.0, 0.0)
    } else {
        t / t.norm()
    };
    Ok(u.sub(&v.scale(c)).frobenius_norm())
}

/// Solve A X = B by Gaussian elimination with partial pivoting.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let d = a.dim();
    let mut m = a.clone();
    let mut x = b.clone();
    for col in 0..d {
        let (pivot, pmag) = (col..d)
            .map(|r| (r, m.get(r, col).norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if pmag == 0.0 {
            return Err(Error::InvalidParameter("singular linear system".into()));
        }
        if pivot != col {
            for j in 0..d {
                let (a1, a2) = (m.get(col, j), m.get(pivot, j));
                m.set(col, j, a2);
                m.set(pivot, j, a1);
                let (b1, b2) = (x.get(col, j), x.get(pivot, j));
                x.set(col, j, b2);
                x.set(pivot, j, b1);
            }
        }
        let inv = C64::new(1.0, 0.0) / m.get(col, col);
        for r in (col + 1)..d {
            let f = m.get(r, col) * inv;
            if f == C64::new(0.0, 0.0) {
                continue;
            }
            for j in col..d {
                let v = m.get(r, j) - f * m.get(col, j);
                m.set(r, j, v);
            }
            for j in 0..d {
                let v = x.get(r, j) - f * x.get(col, j);
                x.set(r, j, v);
            }
        }
    }
    for col in (0..d).rev() {
        let inv = C64::new(1.0, 0.0) / m.get(col, col);
        for j in 0..d {
            let mut s = x.get(col, j);
            for k in (col + 1)..d {
                s -= m.get(col, k) * x.get(k, j);
            }
            x.set(col, j, s * inv);
        }
    }
    Ok(x)
}

/// Padé(13,13) coefficients from the scaling-and-squaring method.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn expm_pade13(a: &ComplexMatrix) -> ComplexMatrix {
    let d = a.dim();
    let theta13 = 5.371_920_351_148_152;
    let norm = a.one_norm();
    let s = if norm > theta13 {
        (norm / theta13).log2().ceil() as u32
    } else {
        0
    };
    let a1 = a.scale(C64::new(1.0 / (2f64.powi(s as i32)), 0.0));
    let id = ComplexMatrix::identity(d);
    let a2 = a1.mul(&a1);
    let a4 = a2.mul(&a2);
    let a6 = a2.mul(&a4);
    let c = |k: usize| C64::new(PADE13[k], 0.0);

    let u_inner = a6
        .scale(c(13))
        .add(&a4.scale(c(11)))
        .add(&a2.scale(c(9)));
    let u = a1.mul(
        &a6.mul(&u_inner)
            .add(&a6.scale(c(7)))
            .add(&a4.scale(c(5)))
            .add(&a2.scale(c(3)))
            .add(&id.scale(c(1))),
    );
    let v_inner = a6
        .scale(c(12))
        .add(&a4.scale(c(10)))
        .add(&a2.scale(c(8)));
    let v = a6
        .mul(&v_inner)
        .add(&a6.scale(c(6)))
        .add(&a4.scale(c(4)))
        .add(&a2.scale(c(2)))
        .add(&id.scale(c(0)));

    let mut r = solve(&v.sub(&u), &v.add(&u)).expect("Padé denominator is nonsingular");
    for _ in 0..s {
        r = r.mul(&r);
    }
    r
}
