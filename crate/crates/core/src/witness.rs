//! Operator families built from MUBs: the correlation operators B(M_m, s),
//! the witnesses W(M_m, s) and their partial transposes, Weyl operators,
//! generalized Bell projectors, shift projectors, and the closed-form
//! identities connecting them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cr, kron, omega_pow, CMatrix, CVector};
use crate::mubs::{Basis, MubSet};

/// Π_s = Σ_i |i⟩⟨i| ⊗ |i+s⟩⟨i+s| (shift mod d).
pub fn shift_projector(d: usize, s: usize) -> CMatrix {
    let s = s % d;
    let n = d * d;
    CMatrix::from_fn(n, |r, c_| {
        let hit = r == c_ && r % d == (r / d + s) % d;
        if hit {
            cr(1.0)
        } else {
            cr(0.0)
        }
    })
}

/// Weyl operator U_{kℓ}|m⟩ = ω^{k(m-ℓ)}|m-ℓ⟩; indices are taken mod d.
pub fn weyl_op(d: usize, k: i64, l: i64) -> CMatrix {
    let l_red = l.rem_euclid(d as i64) as usize;
    CMatrix::from_fn(d, |r, m| {
        if r == (m + d - l_red) % d {
            omega_pow(d, k * (m as i64 - l))
        } else {
            cr(0.0)
        }
    })
}

/// Flip (swap) operator F = Σ_{ij} |i⟩⟨j| ⊗ |j⟩⟨i|.
pub fn flip_operator(d: usize) -> CMatrix {
    let n = d * d;
    CMatrix::from_fn(n, |r, c_| {
        let (i, j) = (r / d, r % d);
        if c_ == j * d + i {
            cr(1.0)
        } else {
            cr(0.0)
        }
    })
}

/// Projector onto the symmetric subspace, (1 + F)/2.
pub fn sym_projector(d: usize) -> CMatrix {
    CMatrix::identity(d * d).add(&flip_operator(d)).scale(0.5)
}

/// Projector onto the antisymmetric subspace, (1 - F)/2.
pub fn asym_projector(d: usize) -> CMatrix {
    CMatrix::identity(d * d).sub(&flip_operator(d)).scale(0.5)
}

/// Canonical maximally entangled state |ψ⁺⟩ = Σ_n |nn⟩/√d.
pub fn max_entangled_state(d: usize) -> CVector {
    let norm = 1.0 / (d as f64).sqrt();
    let mut v = vec![cr(0.0); d * d];
    for n in 0..d {
        v[n * d + n] = cr(norm);
    }
    CVector::new(v)
}

/// P⁺_d = |ψ⁺⟩⟨ψ⁺| = F^Γ/d.
pub fn max_entangled_projector(d: usize) -> CMatrix {
    max_entangled_state(d).outer()
}

/// The d² generalized Bell projectors P_{kℓ}, labelled so that
/// Σ_k P_{kℓ} = Π_ℓ and P_{00} = P⁺_d.
///
/// The stored vectors are |φ_{kℓ}⟩ = Σ_i ω^{ki} |i, i+ℓ⟩/√d, which agree
/// with (1 ⊗ U_{k,d-ℓ})|ψ⁺⟩ up to a global phase.
#[derive(Debug, Clone)]
pub struct BellBasis {
    d: usize,
    vectors: Vec<CVector>,
}

impl BellBasis {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn vector(&self, k: usize, l: usize) -> &CVector {
        &self.vectors[(k % self.d) * self.d + (l % self.d)]
    }

    pub fn projector(&self, k: usize, l: usize) -> CMatrix {
        self.vector(k, l).outer()
    }

    /// Σ_k P_{kℓ}.
    pub fn shift_sum(&self, l: usize) -> CMatrix {
        let mut acc = CMatrix::zeros(self.d * self.d);
        for k in 0..self.d {
            acc = acc.add(&self.projector(k, l));
        }
        acc
    }

    /// Worst deviation from trace-orthonormality and completeness.
    pub fn verify(&self) -> f64 {
        let d = self.d;
        let mut worst = 0.0f64;
        for a in 0..d * d {
            for b in 0..d * d {
                let overlap = self.vectors[a].inner(&self.vectors[b]).norm();
                let expect = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((overlap - expect).abs());
            }
        }
        let mut sum = CMatrix::zeros(d * d);
        for v in &self.vectors {
            sum = sum.add(&v.outer());
        }
        worst.max(sum.max_abs_diff(&CMatrix::identity(d * d)))
    }
}

/// Build the generalized Bell basis for local dimension d.
pub fn bell_basis(d: usize) -> BellBasis {
    let norm = 1.0 / (d as f64).sqrt();
    let mut vectors = Vec::with_capacity(d * d);
    for k in 0..d {
        for l in 0..d {
            let mut v = vec![cr(0.0); d * d];
            for i in 0..d {
                v[i * d + (i + l) % d] = omega_pow(d, (k * i) as i64).scale(norm);
            }
            vectors.push(CVector::new(v));
        }
    }
    BellBasis { d, vectors }
}

/// Recipe identifying a witness: dimension, basis selection, shift, and
/// whether the partial transpose is applied.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessSpec {
    pub d: usize,
    pub bases: Vec<String>,
    pub s: usize,
    pub gamma: bool,
}

impl WitnessSpec {
    pub fn new(d: usize, bases: Vec<String>, s: usize, gamma: bool) -> Self {
        WitnessSpec {
            d,
            bases,
            s: s % d,
            gamma,
        }
    }

    /// Number of bases in the selection.
    pub fn m(&self) -> usize {
        self.bases.len()
    }

    pub fn label(&self) -> String {
        let idx: Vec<&str> = self.bases.iter().map(|s| s.as_str()).collect();
        format!(
            "W({}),s={}{}",
            idx.join(","),
            self.s,
            if self.gamma { ",G" } else { "" }
        )
    }
}

fn resolve_selection<'a>(set: &'a MubSet, labels: &[String], s: usize) -> Result<Vec<&'a Basis>> {
    if labels.is_empty() {
        return Err(Error::WitnessSpec("no bases selected".into()));
    }
    let mut selected = Vec::with_capacity(labels.len());
    let mut canonical_count = 0;
    for label in labels {
        let idx = set
            .index_of(label)
            .ok_or_else(|| Error::WitnessSpec(format!("basis {label} is not in the set")))?;
        let basis = set.basis(idx);
        if basis.is_canonical() {
            canonical_count += 1;
        }
        selected.push(basis);
    }
    if canonical_count != 1 {
        return Err(Error::WitnessSpec(format!(
            "the canonical basis must be selected exactly once (it carries the shift s={s}), found {canonical_count}"
        )));
    }
    Ok(selected)
}

fn correlation_sum(
    set: &MubSet,
    labels: &[String],
    s: usize,
    conjugate_second: bool,
) -> Result<CMatrix> {
    let d = set.d();
    let selected = resolve_selection(set, labels, s)?;
    let mut acc = shift_projector(d, s);
    for basis in selected {
        if basis.is_canonical() {
            continue; // its contribution is the shift projector
        }
        for v in basis.vectors() {
            let first = v.outer();
            let second = if conjugate_second {
                v.conj().outer()
            } else {
                v.outer()
            };
            acc = acc.add(&kron(&first, &second)?);
        }
    }
    Ok(acc)
}

/// B(M_m, s) = Π_s + Σ_{α≥1} Σ_i |i_α⟩⟨i_α| ⊗ |i_α⟩⟨i_α|.
pub fn build_b(set: &MubSet, labels: &[String], s: usize) -> Result<CMatrix> {
    correlation_sum(set, labels, s, false)
}

/// B^Γ(M_m, s): the second factor carries the conjugated vectors. Equal to
/// `partial_transpose(build_b(..))`; both routes are exposed so convention
/// bugs surface as a loud mismatch in the tests.
pub fn build_b_gamma(set: &MubSet, labels: &[String], s: usize) -> Result<CMatrix> {
    correlation_sum(set, labels, s, true)
}

/// W = ((d+m-1)/d)·1 - B(M_m, s), partial-transposed when the spec says so.
pub fn build_w(spec: &WitnessSpec, set: &MubSet) -> Result<CMatrix> {
    if spec.d != set.d() {
        return Err(Error::DimMismatch {
            left: spec.d,
            right: set.d(),
        });
    }
    let d = set.d();
    let m = spec.bases.len();
    let b = if spec.gamma {
        build_b_gamma(set, &spec.bases, spec.s)?
    } else {
        build_b(set, &spec.bases, spec.s)?
    };
    let bound = (d + m - 1) as f64 / d as f64;
    Ok(CMatrix::identity(d * d).scale(bound).sub(&b))
}

/// W_Bell(s) = 1 + Σ_k (P_{k0} - P_{ks}) - d·P⁺_d, built from the Bell basis
/// alone, so it exists in every dimension regardless of MUB availability.
pub fn bell_witness(d: usize, s: usize) -> CMatrix {
    let bell = bell_basis(d);
    let n = d * d;
    CMatrix::identity(n)
        .add(&bell.shift_sum(0))
        .sub(&bell.shift_sum(s % d))
        .sub(&max_entangled_projector(d).scale(d as f64))
}

/// Checks W(M_{d+1}, s) + Π_s = W(M_{d+1}, 0) + Π_0 entrywise to 1e-12.
pub fn shift_identity_check(d: usize, s: usize) -> Result<bool> {
    let set = crate::mubs::complete_set(d)?;
    let labels = set.labels();
    let w_s = build_w(&WitnessSpec::new(d, labels.clone(), s, false), &set)?;
    let w_0 = build_w(&WitnessSpec::new(d, labels, 0, false), &set)?;
    let lhs = w_s.add(&shift_projector(d, s));
    let rhs = w_0.add(&shift_projector(d, 0));
    Ok(lhs.max_abs_diff(&rhs) <= 1e-12)
}
