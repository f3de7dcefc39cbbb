//! The verification pipeline: witness evaluation against states, see-saw
//! certification of separable bounds, the submatrix obstruction to
//! decomposability, and constructive decompositions for the cases where one
//! exists.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, cr, eig_hermitian, partial_transpose, CMatrix, CVector, HERMITICITY_TOL};
use crate::states::{is_ppt, isotropic, rho_a, rho_b, rho_x, DensityState};
use crate::witness::{bell_witness, build_w, shift_projector, WitnessSpec};

/// Default tolerance on tr[W rho] below which a value counts as detection.
pub const DEFAULT_VERDICT_TOL: f64 = 1e-8;
/// Residual and positivity tolerances for certifying a decomposition.
pub const CERT_RESIDUAL_TOL: f64 = 1e-9;
pub const CERT_PSD_TOL: f64 = 1e-9;

/// Identifies the witness a report refers to.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessMeta {
    pub label: String,
    pub s: Option<usize>,
    pub m: Option<usize>,
}

impl WitnessMeta {
    pub fn new(label: impl Into<String>, s: usize, m: usize) -> Self {
        WitnessMeta {
            label: label.into(),
            s: Some(s),
            m: Some(m),
        }
    }

    pub fn unlabeled_file(label: impl Into<String>) -> Self {
        WitnessMeta {
            label: label.into(),
            s: None,
            m: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    DetectsBoundEntanglement,
    DetectsEntanglement,
    NoDetection,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::DetectsBoundEntanglement => "detects-bound-entanglement",
            Verdict::DetectsEntanglement => "detects-entanglement",
            Verdict::NoDetection => "no-detection",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Result of evaluating one witness against one state.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetectionReport {
    pub witness: WitnessMeta,
    pub state_family: String,
    pub state_params: BTreeMap<String, f64>,
    pub value: f64,
    pub ppt: bool,
    pub min_eig_transpose: f64,
    pub verdict: Verdict,
}

/// tr[W rho] with the verdict rules: detection below -tol, bound entanglement
/// when the state is additionally PPT.
pub fn evaluate(
    witness: &CMatrix,
    meta: &WitnessMeta,
    state: &DensityState,
    tol: f64,
) -> Result<DetectionReport> {
    if witness.dim() != state.matrix.dim() {
        return Err(Error::DimMismatch {
            left: witness.dim(),
            right: state.matrix.dim(),
        });
    }
    let tr = witness.trace_product(&state.matrix);
    if tr.im.abs() > 1e-10 {
        return Err(Error::contract(format!(
            "tr[W rho] should be real for Hermitian inputs, got imaginary part {:.3e}",
            tr.im
        )));
    }
    let value = tr.re;
    let (ppt, min_eig_transpose) = is_ppt(state)?;
    let verdict = if value < -tol {
        if ppt {
            Verdict::DetectsBoundEntanglement
        } else {
            Verdict::DetectsEntanglement
        }
    } else {
        Verdict::NoDetection
    };
    Ok(DetectionReport {
        witness: meta.clone(),
        state_family: state.family.clone(),
        state_params: state.params.clone(),
        value,
        ppt,
        min_eig_transpose,
        verdict,
    })
}

fn random_unit_vector(d: usize, rng: &mut ChaCha8Rng) -> CVector {
    let normal = StandardNormal;
    let data: Vec<_> = (0..d)
        .map(|_| c(normal.sample(rng), normal.sample(rng)))
        .collect();
    CVector::new(data).normalized()
}

/// <i (x) b| B |j (x) b> contracted over the second factor.
fn contract_second(b_op: &CMatrix, d: usize, b: &CVector) -> CMatrix {
    CMatrix::from_fn(d, |i, j| {
        let mut acc = c(0.0, 0.0);
        for k in 0..d {
            let bk = b.get(k).conj();
            for l in 0..d {
                acc += b_op.get(i * d + k, j * d + l) * bk * b.get(l);
            }
        }
        acc
    })
}

/// <a (x) k| B |a (x) l> contracted over the first factor.
fn contract_first(b_op: &CMatrix, d: usize, a: &CVector) -> CMatrix {
    CMatrix::from_fn(d, |k, l| {
        let mut acc = c(0.0, 0.0);
        for i in 0..d {
            let ai = a.get(i).conj();
            for j in 0..d {
                acc += b_op.get(i * d + k, j * d + l) * ai * a.get(j);
            }
        }
        acc
    })
}

/// Outcome of the alternating product-state maximization.
#[derive(Debug, Clone)]
pub struct SeesawOutcome {
    pub best: f64,
    pub vec_a: CVector,
    pub vec_b: CVector,
    pub restarts: usize,
    pub iterations_cap: usize,
}

/// Maximize <a b|B|a b> over product states by alternating top-eigenvector
/// steps. Fully deterministic: restart r draws its start from a counter-derived
/// stream of the given seed.
pub fn seesaw_bound(
    b_op: &CMatrix,
    d: usize,
    restarts: usize,
    iters: usize,
    seed: u64,
) -> Result<SeesawOutcome> {
    if d * d != b_op.dim() {
        return Err(Error::NotBipartite { dim: b_op.dim(), d });
    }
    let herm = b_op.hermiticity_residual();
    if herm > HERMITICITY_TOL {
        return Err(Error::NotHermitian { asymmetry: herm });
    }
    let mut best = f64::NEG_INFINITY;
    let mut best_a = CVector::basis_state(d, 0);
    let mut best_b = CVector::basis_state(d, 0);
    for r in 0..restarts {
        let mut rng =
            ChaCha8Rng::seed_from_u64(seed ^ (r as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut a = random_unit_vector(d, &mut rng);
        let mut b = random_unit_vector(d, &mut rng);
        let mut value = f64::NEG_INFINITY;
        for _ in 0..iters {
            let m_b = contract_second(b_op, d, &b);
            let eig = eig_hermitian(&m_b)?;
            a = eig.eigenvectors.last().unwrap().clone();
            let m_a = contract_first(b_op, d, &a);
            let eig = eig_hermitian(&m_a)?;
            b = eig.eigenvectors.last().unwrap().clone();
            let new_value = eig.max_eigenvalue();
            if (new_value - value).abs() < 1e-12 {
                value = new_value;
                break;
            }
            value = new_value;
        }
        if value > best {
            best = value;
            best_a = a;
            best_b = b;
        }
    }
    Ok(SeesawOutcome {
        best,
        vec_a: best_a,
        vec_b: best_b,
        restarts,
        iterations_cap: iters,
    })
}

/// Minimum of <a b|W|a b> over `samples` independent Haar-random product
/// states; used to probe the separable floor of a witness.
pub fn min_product_expectation(w: &CMatrix, d: usize, samples: usize, seed: u64) -> Result<f64> {
    if d * d != w.dim() {
        return Err(Error::NotBipartite { dim: w.dim(), d });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min = f64::INFINITY;
    for _ in 0..samples {
        let a = random_unit_vector(d, &mut rng);
        let b = random_unit_vector(d, &mut rng);
        let m_b = contract_second(w, d, &b);
        let val = m_b.expectation(&a).re;
        min = min.min(val);
    }
    Ok(min)
}

/// The submatrix obstruction report. `blocks` hold the actual witness
/// elements; the decision is carried by the 3x3 correlation block, whose
/// minimum eigenvalue dips below zero exactly when the universal off-diagonal
/// element a = -(m-1)/d passes -1/2, i.e. when m > d/2 + 1.
///
/// The third 2x2 block is diagnostic only: its corner is a shift-pattern
/// diagonal entry that vanishes exactly when d divides 3s, so unlike the
/// first two blocks it is not indefinite for every witness in the family.
/// Absence of the obstruction therefore proves nothing and is reported as
/// "inconclusive", never as "decomposable".
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub d: usize,
    pub s: usize,
    pub m: usize,
    /// Universal off-diagonal element -(m-1)/d.
    pub a: f64,
    pub block_a1: CMatrix,
    pub block_a2: CMatrix,
    pub block_a3: CMatrix,
    pub block_b3: CMatrix,
    pub blocks_indefinite: [bool; 3],
    pub min_eig_b3: f64,
    pub obstruction_found: bool,
}

impl ObstructionReport {
    pub fn verdict(&self) -> &'static str {
        if self.obstruction_found {
            "non-decomposable"
        } else {
            "inconclusive"
        }
    }
}

fn indefinite(block: &CMatrix) -> Result<bool> {
    let eig = eig_hermitian(block)?;
    Ok(eig.min_eigenvalue() < -1e-10 && eig.max_eigenvalue() > 1e-10)
}

/// Validate the universal matrix elements of a transposed MUB witness and
/// extract the obstruction blocks. Fails loudly (contract error) when the
/// input does not carry the universal pattern; requires s != 0 and 2s != d.
pub fn obstruction_test(w: &CMatrix, d: usize, s: usize, m: usize) -> Result<ObstructionReport> {
    if d * d != w.dim() {
        return Err(Error::NotBipartite { dim: w.dim(), d });
    }
    let s = s % d;
    if s == 0 {
        return Err(Error::unsupported(
            "the obstruction needs a nonzero shift (the s = 0 witness is decomposable)",
        ));
    }
    if 2 * s == d {
        return Err(Error::unsupported(format!(
            "the obstruction requires 2s != d, got d={d}, s={s}"
        )));
    }
    if m < 2 {
        return Err(Error::domain(format!(
            "a witness needs at least 2 bases, got m={m}"
        )));
    }
    let a = -((m - 1) as f64) / d as f64;
    let tol = 1e-10;
    // universal diagonal: 1 off the shift line, 0 on it
    for i in 0..d {
        for j in 0..d {
            let el = w.w_elem(d, i, i, j, j);
            let expect = if j == (i + s) % d { 0.0 } else { 1.0 };
            if (el.re - expect).abs() > tol || el.im.abs() > tol {
                return Err(Error::contract(format!(
                    "universal diagonal element at ({i},{j}) is {el}, expected {expect}; \
                     input is not a shifted MUB witness"
                )));
            }
        }
    }
    // universal entangled-block element: -(m-1)/d for i != j
    for i in 0..d {
        for j in 0..d {
            if i == j {
                continue;
            }
            let el = w.w_elem(d, i, j, i, j);
            if (el.re - a).abs() > tol || el.im.abs() > tol {
                return Err(Error::contract(format!(
                    "universal off-diagonal element at ({i},{j}) is {el}, expected {a}; \
                     input is not a shifted MUB witness"
                )));
            }
        }
    }

    let r = d - s;
    let block2 = |p: usize, q: usize| {
        CMatrix::new(
            2,
            vec![
                w.w_elem(d, p, p, q, q),
                w.w_elem(d, p, q, p, q),
                w.w_elem(d, q, p, q, p),
                w.w_elem(d, q, q, p, p),
            ],
        )
        .expect("2x2 block")
    };
    let block_a1 = block2(0, s);
    let block_a2 = block2(0, r);
    let block_a3 = block2(s, r);
    let idx = [0usize, s, r];
    let block_b3 = CMatrix::from_fn(3, |p, q| {
        if p == q {
            w.w_elem(d, idx[p], idx[p], idx[p], idx[p])
        } else {
            w.w_elem(d, idx[p], idx[q], idx[p], idx[q])
        }
    });

    let blocks_indefinite = [
        indefinite(&block_a1)?,
        indefinite(&block_a2)?,
        indefinite(&block_a3)?,
    ];
    let min_eig_b3 = eig_hermitian(&block_b3)?.min_eigenvalue();
    let obstruction_found = blocks_indefinite[0] && blocks_indefinite[1] && min_eig_b3 < -1e-10;
    Ok(ObstructionReport {
        d,
        s,
        m,
        a,
        block_a1,
        block_a2,
        block_a3,
        block_b3,
        blocks_indefinite,
        min_eig_b3,
        obstruction_found,
    })
}

/// A claimed decomposition target = A + B^G together with its certificates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Decomposition {
    pub a: CMatrix,
    pub b: CMatrix,
    pub target: CMatrix,
    /// max |A + B^G - target|.
    pub residual: f64,
    pub min_eig_a: f64,
    pub min_eig_b: f64,
}

impl Decomposition {
    pub fn certified(&self) -> bool {
        self.residual <= CERT_RESIDUAL_TOL
            && self.min_eig_a >= -CERT_PSD_TOL
            && self.min_eig_b >= -CERT_PSD_TOL
    }
}

/// Check A >= 0, B >= 0 and A + B^G = target; the local dimension is inferred
/// from the matrix size, which must be a perfect square.
pub fn verify_decomposition(target: &CMatrix, a: &CMatrix, b: &CMatrix) -> Result<Decomposition> {
    if a.dim() != target.dim() {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: target.dim(),
        });
    }
    if b.dim() != target.dim() {
        return Err(Error::DimMismatch {
            left: b.dim(),
            right: target.dim(),
        });
    }
    let d = (target.dim() as f64).sqrt().round() as usize;
    if d * d != target.dim() {
        return Err(Error::NotBipartite {
            dim: target.dim(),
            d,
        });
    }
    let reassembled = a.add(&partial_transpose(b, d)?);
    let residual = reassembled.max_abs_diff(target);
    let min_eig_a = eig_hermitian(a)?.min_eigenvalue();
    let min_eig_b = eig_hermitian(b)?.min_eigenvalue();
    Ok(Decomposition {
        a: a.clone(),
        b: b.clone(),
        target: target.clone(),
        residual,
        min_eig_a,
        min_eig_b,
    })
}

/// Constructive decomposition of W_Bell(d/2) for even d: A from the
/// (|nn> - |(n+s)(n+s)>) differences, B from the antisymmetric differences
/// that avoid the half-shift line.
pub fn half_shift_decomposition(d: usize) -> Result<Decomposition> {
    if !d.is_multiple_of(2) || d < 2 {
        return Err(Error::unsupported(format!(
            "the half-shift decomposition needs even d, got {d}"
        )));
    }
    let s = d / 2;
    let n = d * d;
    let mut a = CMatrix::zeros(n);
    for k in 0..s {
        let v =
            CVector::basis_state(n, k * d + k).sub(&CVector::basis_state(n, (k + s) * d + (k + s)));
        a = a.add(&v.outer());
    }
    let mut b = CMatrix::zeros(n);
    for i in 0..d {
        for j in (i + 1)..d {
            if j == i + s {
                continue;
            }
            let v = CVector::basis_state(n, i * d + j).sub(&CVector::basis_state(n, j * d + i));
            b = b.add(&v.outer());
        }
    }
    verify_decomposition(&bell_witness(d, s), &a, &b)
}

/// Constructive decomposition of d * W^G(M_2, 1) for the canonical-Fourier
/// pair: A(1) from its closed form, B(1) as the sum of d(d-1)/2 rank-1
/// projectors on |p, q+1> - |q, p+1| differences over pairs p < q.
pub fn fourier_pair_decomposition(d: usize, s: usize) -> Result<Decomposition> {
    if s != 1 {
        return Err(Error::unsupported(format!(
            "only the shift s = 1 decomposition is constructed, got s={s}"
        )));
    }
    if d < 2 {
        return Err(Error::domain(format!("need d >= 2, got {d}")));
    }
    let n = d * d;

    // A(1) = (d-1)(1 - Pi_1) - sum_{n != 1} sum_{i != j} |i><j| (x) |i+n><j+n|
    let mut a = CMatrix::identity(n)
        .sub(&shift_projector(d, 1))
        .scale((d - 1) as f64);
    let mut entries = Vec::new();
    for shift in 0..d {
        if shift == 1 {
            continue;
        }
        for i in 0..d {
            for j in 0..d {
                if i == j {
                    continue;
                }
                entries.push((i * d + (i + shift) % d, j * d + (j + shift) % d, cr(-1.0)));
            }
        }
    }
    a = a.add(&CMatrix::from_entries(n, &entries));

    let mut b = CMatrix::zeros(n);
    for p in 0..d {
        for q in (p + 1)..d {
            let v = CVector::basis_state(n, p * d + (q + 1) % d)
                .sub(&CVector::basis_state(n, q * d + (p + 1) % d));
            b = b.add(&v.outer());
        }
    }

    let set = crate::mubs::fourier_pair(d)?;
    let spec = WitnessSpec::new(d, set.labels(), 1, true);
    let target = build_w(&spec, &set)?.scale(d as f64);
    verify_decomposition(&target, &a, &b)
}

/// A state family swept by `scan`.
#[derive(Debug, Clone)]
pub enum StateFamily {
    RhoX { d: usize, s: usize },
    RhoA,
    RhoB,
    Isotropic { d: usize },
}

impl StateFamily {
    pub fn param_name(&self) -> &'static str {
        match self {
            StateFamily::RhoX { .. } => "x",
            StateFamily::RhoA => "a",
            StateFamily::RhoB => "b",
            StateFamily::Isotropic { .. } => "p",
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            StateFamily::RhoX { .. } => "rho_x",
            StateFamily::RhoA => "rho_a",
            StateFamily::RhoB => "rho_b",
            StateFamily::Isotropic { .. } => "isotropic",
        }
    }

    pub fn build(&self, value: f64) -> Result<DensityState> {
        match *self {
            StateFamily::RhoX { d, s } => rho_x(d, s, value),
            StateFamily::RhoA => rho_a(value),
            StateFamily::RhoB => rho_b(value),
            StateFamily::Isotropic { d } => isotropic(d, value),
        }
    }
}

/// Evaluate one witness across a parameter grid of one state family. Rows
/// come back in grid order; any failure aborts with the offending grid point
/// named.
pub fn scan(
    witness: &CMatrix,
    meta: &WitnessMeta,
    family: &StateFamily,
    grid: &[f64],
    tol: f64,
) -> Result<Vec<DetectionReport>> {
    let mut rows = Vec::with_capacity(grid.len());
    for &value in grid {
        let state = family.build(value).map_err(|e| {
            Error::domain(format!(
                "scan aborted at {} = {value}: {e}",
                family.param_name()
            ))
        })?;
        let report = evaluate(witness, meta, &state, tol).map_err(|e| {
            Error::domain(format!(
                "scan aborted at {} = {value}: {e}",
                family.param_name()
            ))
        })?;
        rows.push(report);
    }
    Ok(rows)
}

fn csv_float(v: f64) -> String {
    format!("{v:.11e}")
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// CSV rows: family,param,witness,s,m,value,ppt,verdict. Floats carry 12
/// significant digits; formatting is locale independent.
pub fn scan_csv(param_name: &str, rows: &[DetectionReport]) -> String {
    let mut out = String::from("family,param,witness,s,m,value,ppt,verdict\n");
    for row in rows {
        let param = row
            .state_params
            .get(param_name)
            .copied()
            .unwrap_or(f64::NAN);
        let s = row.witness.s.map(|v| v.to_string()).unwrap_or_default();
        let m = row.witness.m.map(|v| v.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            csv_field(&row.state_family),
            csv_float(param),
            csv_field(&row.witness.label),
            s,
            m,
            csv_float(row.value),
            row.ppt,
            row.verdict
        ));
    }
    out
}
