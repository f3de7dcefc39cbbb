//! Dense complex matrices and the numerical primitives everything else is
//! built on: Kronecker products, partial transposition, and a cyclic-Jacobi
//! Hermitian eigensolver.
//!
//! All values are immutable after construction; every operation returns a
//! fresh value, so the whole module is safe to use from concurrent contexts.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported matrix dimension.
pub const MAX_DIM: usize = 4096;
/// Entrywise tolerance below which an operator is accepted as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Default absolute tolerance for positive-semidefiniteness checks.
pub const DEFAULT_PSD_TOL: f64 = 1e-9;

const JACOBI_OFF_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Real number as a complex value.
#[inline]
pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// ω^e with ω = e^{2πi/d}; the exponent is reduced mod d before
/// evaluation so phases stay accurate for large exponents.
pub fn omega_pow(d: usize, e: i64) -> Complex64 {
    let e = e.rem_euclid(d as i64);
    Complex64::from_polar(1.0, TAU * e as f64 / d as f64)
}

/// Index convention for ℂ^d ⊗ ℂ^d: the composite index of
/// |i⟩⊗|l⟩ is i·d + l (first factor major).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipartiteIndex {
    pub d: usize,
}

impl BipartiteIndex {
    pub fn new(d: usize) -> Self {
        BipartiteIndex { d }
    }

    #[inline]
    pub fn join(&self, i: usize, l: usize) -> usize {
        i * self.d + l
    }

    #[inline]
    pub fn split(&self, idx: usize) -> (usize, usize) {
        (idx / self.d, idx % self.d)
    }
}

/// Column vector of complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct CVector {
    data: Vec<Complex64>,
}

impl CVector {
    pub fn new(data: Vec<Complex64>) -> Self {
        CVector { data }
    }

    pub fn zeros(n: usize) -> Self {
        CVector {
            data: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// Standard unit vector |i⟩.
    pub fn basis_state(n: usize, i: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); n];
        data[i] = cr(1.0);
        CVector { data }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize) -> Complex64 {
        self.data[i]
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &CVector) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> CVector {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalize the zero vector");
        CVector {
            data: self.data.iter().map(|z| z / n).collect(),
        }
    }

    pub fn conj(&self) -> CVector {
        CVector {
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, z: Complex64) -> CVector {
        CVector {
            data: self.data.iter().map(|w| w * z).collect(),
        }
    }

    pub fn add(&self, other: &CVector) -> CVector {
        assert_eq!(self.dim(), other.dim());
        CVector {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CVector) -> CVector {
        assert_eq!(self.dim(), other.dim());
        CVector {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// |self⟩ ⊗ |other⟩.
    pub fn tensor(&self, other: &CVector) -> CVector {
        let mut data = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.data {
            for b in &other.data {
                data.push(a * b);
            }
        }
        CVector { data }
    }

    /// Rank-1 projector |self⟩⟨self|.
    pub fn outer(&self) -> CMatrix {
        self.outer_with(self)
    }

    /// |self⟩⟨other|.
    pub fn outer_with(&self, other: &CVector) -> CMatrix {
        let n = self.dim();
        assert_eq!(n, other.dim());
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(self.data[i] * other.data[j].conj());
            }
        }
        CMatrix { dim: n, data }
    }
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    /// Validating constructor: square shape, finite entries, dim ≤ `MAX_DIM`.
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::DimTooLarge { dim, max: MAX_DIM });
        }
        if data.len() != dim * dim {
            return Err(Error::NotSquare {
                dim,
                len: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(CMatrix { dim, data })
    }

    pub fn zeros(dim: usize) -> Self {
        CMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = CMatrix::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = cr(1.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        CMatrix { dim, data }
    }

    /// Zero matrix with the listed entries set.
    pub fn from_entries(dim: usize, entries: &[(usize, usize, Complex64)]) -> Self {
        let mut m = CMatrix::zeros(dim);
        for &(i, j, z) in entries {
            m.data[i * dim + j] = z;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    /// Bipartite matrix element ⟨i k|M|j l⟩ for local dimension d.
    ///
    /// This is the element layout in which the universal witness entries are
    /// read off: `w_elem(i,i,j,j)` is the diagonal at composite index (i,j)
    /// and `w_elem(i,j,i,j)` is the maximally-entangled-block element
    /// connecting |ii⟩ and |jj⟩.
    #[inline]
    pub fn w_elem(&self, d: usize, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
        debug_assert_eq!(d * d, self.dim);
        self.get(i * d + k, j * d + l)
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim, "matrix addition dimension mismatch");
        CMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim, "matrix subtraction dimension mismatch");
        CMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, f: f64) -> CMatrix {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z.scale(f)).collect(),
        }
    }

    pub fn scale_complex(&self, z: Complex64) -> CMatrix {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|w| w * z).collect(),
        }
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    /// M|v⟩.
    pub fn apply(&self, v: &CVector) -> CVector {
        assert_eq!(self.dim, v.dim(), "matrix-vector dimension mismatch");
        let n = self.dim;
        let mut out = CVector::zeros(n);
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += self.data[i * n + j] * v.get(j);
            }
            out.data[i] = acc;
        }
        out
    }

    /// ⟨v|M|v⟩.
    pub fn expectation(&self, v: &CVector) -> Complex64 {
        v.inner(&self.apply(v))
    }

    pub fn transpose(&self) -> CMatrix {
        let n = self.dim;
        CMatrix::from_fn(n, |i, j| self.data[j * n + i])
    }

    pub fn conj(&self) -> CMatrix {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn adjoint(&self) -> CMatrix {
        let n = self.dim;
        CMatrix::from_fn(n, |i, j| self.data[j * n + i].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Entrywise max |self - other|.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "matrix comparison dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max entrywise |m - m†|.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let diff = (self.data[i * n + j] - self.data[j * n + i].conj()).norm();
                worst = worst.max(diff);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    /// tr(self · other) without forming the product.
    pub fn trace_product(&self, other: &CMatrix) -> Complex64 {
        assert_eq!(self.dim, other.dim, "trace product dimension mismatch");
        let n = self.dim;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += self.data[i * n + j] * other.data[j * n + i];
            }
        }
        acc
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            dim: self.dim,
            re: self.data.iter().map(|z| z.re).collect(),
            im: self.data.iter().map(|z| z.im).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        if raw.re.len() != raw.im.len() {
            return Err(D::Error::custom("matrix re/im arrays differ in length"));
        }
        let data: Vec<Complex64> = raw
            .re
            .iter()
            .zip(&raw.im)
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        CMatrix::new(raw.dim, data).map_err(D::Error::custom)
    }
}

/// Kronecker product: `(a⊗b)[(i·d_b+k),(j·d_b+l)] = a[i,j]·b[k,l]`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let (da, db) = (a.dim, b.dim);
    let dim = da.saturating_mul(db);
    if dim > MAX_DIM {
        return Err(Error::DimTooLarge { dim, max: MAX_DIM });
    }
    let mut out = CMatrix::zeros(dim);
    for i in 0..da {
        for j in 0..da {
            let aij = a.data[i * da + j];
            if aij.re == 0.0 && aij.im == 0.0 {
                continue;
            }
            for k in 0..db {
                for l in 0..db {
                    out.data[(i * db + k) * dim + (j * db + l)] = aij * b.data[k * db + l];
                }
            }
        }
    }
    Ok(out)
}

/// Transpose of the second tensor factor in the canonical basis:
/// out[(i·d+l),(j·d+k)] = m[(i·d+k),(j·d+l)]. Involution; preserves the
/// diagonal (and hence the trace) exactly.
pub fn partial_transpose(m: &CMatrix, d: usize) -> Result<CMatrix> {
    if d * d != m.dim {
        return Err(Error::NotBipartite { dim: m.dim, d });
    }
    let n = m.dim;
    let mut out = CMatrix::zeros(n);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    out.data[(i * d + l) * n + (j * d + k)] = m.data[(i * d + k) * n + (j * d + l)];
                }
            }
        }
    }
    Ok(out)
}

/// Trace out the second factor: `out[i,j] = Σ_k m[(i·d+k),(j·d+k)]`.
pub fn partial_trace_second(m: &CMatrix, d: usize) -> Result<CMatrix> {
    if d * d != m.dim {
        return Err(Error::NotBipartite { dim: m.dim, d });
    }
    let n = m.dim;
    let mut out = CMatrix::zeros(d);
    for i in 0..d {
        for j in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..d {
                acc += m.data[(i * d + k) * n + (j * d + k)];
            }
            out.data[i * d + j] = acc;
        }
    }
    Ok(out)
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenResult {
    /// Sorted ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal, paired with `eigenvalues` by index.
    pub eigenvectors: Vec<CVector>,
}

impl EigenResult {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    /// Σ λ_i |v_i⟩⟨v_i|.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.eigenvectors[0].dim();
        let mut m = CMatrix::zeros(n);
        for (lam, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            m = m.add(&v.outer().scale(*lam));
        }
        m
    }
}

fn off_diagonal_norm(h: &[Complex64], n: usize) -> f64 {
    let mut acc = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                acc += h[p * n + q].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Hermitian eigendecomposition by cyclic Jacobi with complex rotations.
///
/// Input must be Hermitian to `HERMITICITY_TOL`. Converges when the
/// off-diagonal Frobenius norm drops below 1e-13 relative to the input scale;
/// at the dimensions handled here that happens within a handful of sweeps.
pub fn eig_hermitian(m: &CMatrix) -> Result<EigenResult> {
    let asymmetry = m.hermiticity_residual();
    if asymmetry > HERMITICITY_TOL {
        return Err(Error::NotHermitian { asymmetry });
    }
    let n = m.dim;

    // Work on the exactly-Hermitian part; kills harmless 1e-13-level asymmetry.
    let mut h: Vec<Complex64> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            h.push((m.data[i * n + j] + m.data[j * n + i].conj()).scale(0.5));
        }
    }
    let mut v: Vec<Complex64> = CMatrix::identity(n).data;

    let scale = m.frobenius_norm().max(1.0);
    let mut converged = off_diagonal_norm(&h, n) <= JACOBI_OFF_TOL * scale;
    let mut sweeps = 0;
    while !converged && sweeps < JACOBI_MAX_SWEEPS {
        for p in 0..n {
            for q in (p + 1)..n {
                let g = h[p * n + q];
                let absg = g.norm();
                if absg == 0.0 {
                    continue;
                }
                let u = g / absg;
                let app = h[p * n + p].re;
                let aqq = h[q * n + q].re;
                let tau = (aqq - app) / (2.0 * absg);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cth = 1.0 / (1.0 + t * t).sqrt();
                let sth = t * cth;
                let su = u.scale(sth);

                // h <- J† h J with J[p,p]=c, J[p,q]=s·u, J[q,p]=-s·ū, J[q,q]=c
                for k in 0..n {
                    let xp = h[k * n + p];
                    let xq = h[k * n + q];
                    h[k * n + p] = xp.scale(cth) - xq * su.conj();
                    h[k * n + q] = xp * su + xq.scale(cth);
                }
                for k in 0..n {
                    let yp = h[p * n + k];
                    let yq = h[q * n + k];
                    h[p * n + k] = yp.scale(cth) - su * yq;
                    h[q * n + k] = su.conj() * yp + yq.scale(cth);
                }
                h[p * n + q] = Complex64::new(0.0, 0.0);
                h[q * n + p] = Complex64::new(0.0, 0.0);
                h[p * n + p] = cr(h[p * n + p].re);
                h[q * n + q] = cr(h[q * n + q].re);

                for k in 0..n {
                    let vp = v[k * n + p];
                    let vq = v[k * n + q];
                    v[k * n + p] = vp.scale(cth) - vq * su.conj();
                    v[k * n + q] = vp * su + vq.scale(cth);
                }
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&h, n) <= JACOBI_OFF_TOL * scale;
    }
    if !converged {
        return Err(Error::NoConvergence {
            off_norm: off_diagonal_norm(&h, n),
            sweeps,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| h[a * n + a].re.partial_cmp(&h[b * n + b].re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| h[i * n + i].re).collect();
    let eigenvectors: Vec<CVector> = order
        .iter()
        .map(|&col| CVector::new((0..n).map(|row| v[row * n + col]).collect()))
        .collect();
    Ok(EigenResult {
        eigenvalues,
        eigenvectors,
    })
}

/// PSD test: true iff the minimum eigenvalue is ≥ -tol. Always reports the
/// minimum eigenvalue alongside the verdict.
pub fn is_psd(m: &CMatrix, tol: f64) -> Result<(bool, f64)> {
    let eig = eig_hermitian(m)?;
    let min = eig.min_eigenvalue();
    Ok((min >= -tol, min))
}
