//! Mutually unbiased bases: canonical, Fourier, Heisenberg-Weyl complete sets
//! for odd prime dimensions, the Pauli eigenbases for d = 2, and verbatim
//! basis fixtures for d = 3 and d = 4.
//!
//! Every constructed set is verified pairwise unbiased before it is returned;
//! correctness is enforced by the check, not by the construction formula.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c, cr, omega_pow, CVector};

/// Orthonormality tolerance for a single basis.
pub const ORTHONORMALITY_TOL: f64 = 1e-12;
/// Unbiasedness tolerance between distinct bases: | |<i|j>|^2 - 1/d |.
pub const UNBIASED_TOL: f64 = 1e-10;

/// An orthonormal basis of ℂ^d.
#[derive(Debug, Clone)]
pub struct Basis {
    d: usize,
    label: String,
    vectors: Vec<CVector>,
}

impl Basis {
    /// Builds a basis after checking orthonormality to `ORTHONORMALITY_TOL`.
    pub fn new(label: impl Into<String>, vectors: Vec<CVector>) -> Result<Self> {
        let label = label.into();
        let d = vectors.len();
        if d < 2 {
            return Err(Error::domain(format!(
                "basis {label}: dimension must be at least 2"
            )));
        }
        for v in &vectors {
            if v.dim() != d {
                return Err(Error::domain(format!(
                    "basis {label}: expected {d} vectors of dimension {d}"
                )));
            }
        }
        let mut worst = 0.0f64;
        for (i, vi) in vectors.iter().enumerate() {
            for (j, vj) in vectors.iter().enumerate() {
                let overlap = vi.inner(vj);
                let expect = if i == j { cr(1.0) } else { cr(0.0) };
                worst = worst.max((overlap - expect).norm());
            }
        }
        if worst > ORTHONORMALITY_TOL {
            return Err(Error::domain(format!(
                "basis {label} is not orthonormal: max deviation {worst:.3e}"
            )));
        }
        Ok(Basis { d, label, vectors })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &CVector {
        &self.vectors[i]
    }

    /// True when the vectors are exactly the standard unit vectors.
    pub fn is_canonical(&self) -> bool {
        self.vectors.iter().enumerate().all(|(i, v)| {
            v.as_slice().iter().enumerate().all(|(j, z)| {
                let expect = if i == j { cr(1.0) } else { cr(0.0) };
                (z - expect).norm() < 1e-15
            })
        })
    }
}

/// Worst pairwise-unbiasedness deviation over all pairs of distinct bases.
pub fn unbiasedness_deviation(bases: &[Basis]) -> f64 {
    let mut worst = 0.0f64;
    for (a, ba) in bases.iter().enumerate() {
        let inv_d = 1.0 / ba.d() as f64;
        for bb in bases.iter().skip(a + 1) {
            for vi in ba.vectors() {
                for vj in bb.vectors() {
                    let p = vi.inner(vj).norm_sqr();
                    worst = worst.max((p - inv_d).abs());
                }
            }
        }
    }
    worst
}

/// Result of checking a collection of bases for mutual unbiasedness.
#[derive(Debug, Clone, Copy)]
pub struct MubReport {
    pub max_deviation: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Check any collection of bases (not necessarily a valid `MubSet`).
pub fn verify_bases(bases: &[Basis], tol: f64) -> MubReport {
    let max_deviation = unbiasedness_deviation(bases);
    MubReport {
        max_deviation,
        tol,
        pass: max_deviation <= tol,
    }
}

/// An ordered collection of pairwise mutually unbiased bases. Index 0 holds
/// the canonical basis for every set constructed here.
#[derive(Debug, Clone)]
pub struct MubSet {
    d: usize,
    bases: Vec<Basis>,
}

impl MubSet {
    pub fn new(bases: Vec<Basis>) -> Result<Self> {
        let d = match bases.first() {
            Some(b) => b.d(),
            None => return Err(Error::domain("a MUB set needs at least one basis")),
        };
        if bases.iter().any(|b| b.d() != d) {
            return Err(Error::domain("all bases in a set must share one dimension"));
        }
        let report = verify_bases(&bases, UNBIASED_TOL);
        if !report.pass {
            return Err(Error::domain(format!(
                "bases are not mutually unbiased: max deviation {:.3e}",
                report.max_deviation
            )));
        }
        Ok(MubSet { d, bases })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of bases in the set.
    pub fn m(&self) -> usize {
        self.bases.len()
    }

    pub fn bases(&self) -> &[Basis] {
        &self.bases
    }

    pub fn basis(&self, i: usize) -> &Basis {
        &self.bases[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.bases.iter().position(|b| b.label() == label)
    }

    pub fn labels(&self) -> Vec<String> {
        self.bases.iter().map(|b| b.label().to_string()).collect()
    }

    pub fn verify(&self, tol: f64) -> MubReport {
        verify_bases(&self.bases, tol)
    }
}

/// Spec-named alias for checking a whole set.
pub fn verify_mub(set: &MubSet, tol: f64) -> MubReport {
    set.verify(tol)
}

/// The canonical basis {|0>, ..., |d-1>}, labelled "B0".
pub fn canonical_basis(d: usize) -> Result<Basis> {
    if d < 2 {
        return Err(Error::domain(format!(
            "dimension {d} is below the minimum 2"
        )));
    }
    let vectors = (0..d).map(|i| CVector::basis_state(d, i)).collect();
    Basis::new("B0", vectors)
}

/// Fourier basis: |k~>_j = ω^{kj}/√d.
pub fn fourier_basis(d: usize) -> Result<Basis> {
    if d < 2 {
        return Err(Error::domain(format!(
            "dimension {d} is below the minimum 2"
        )));
    }
    let norm = 1.0 / (d as f64).sqrt();
    let vectors = (0..d)
        .map(|k| {
            CVector::new(
                (0..d)
                    .map(|j| omega_pow(d, (k * j) as i64).scale(norm))
                    .collect(),
            )
        })
        .collect();
    Basis::new("B1", vectors)
}

fn is_odd_prime(d: usize) -> bool {
    if d < 3 || d.is_multiple_of(2) {
        return false;
    }
    let mut f = 3;
    while f * f <= d {
        if d.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

/// Complete set of d+1 MUBs for an odd prime d: the canonical basis, the
/// Fourier basis, and the d-1 quadratic-phase bases |i_a>_j = ω^{a j² + i j}/√d
/// for a = 1..d-1. Bases are labelled "B0".."Bd" with the Fourier basis at
/// index 1, matching the printed d = 3 ordering.
pub fn heisenberg_weyl_set(d: usize) -> Result<MubSet> {
    if !is_odd_prime(d) {
        return Err(Error::domain(format!(
            "Heisenberg-Weyl complete sets require an odd prime dimension, got {d}"
        )));
    }
    let norm = 1.0 / (d as f64).sqrt();
    let mut bases = vec![canonical_basis(d)?];
    for a in 0..d {
        let vectors = (0..d)
            .map(|i| {
                CVector::new(
                    (0..d)
                        .map(|j| omega_pow(d, (a * j * j + i * j) as i64).scale(norm))
                        .collect(),
                )
            })
            .collect();
        bases.push(Basis::new(format!("B{}", a + 1), vectors)?);
    }
    MubSet::new(bases)
}

/// The canonical basis together with its Fourier transform, labelled B0, B1.
pub fn fourier_pair(d: usize) -> Result<MubSet> {
    MubSet::new(vec![canonical_basis(d)?, fourier_basis(d)?])
}

/// Complete set for d = 2: the eigenbases of the three Pauli operators.
pub fn d2_complete() -> MubSet {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let x = Basis::new(
        "B1",
        vec![
            CVector::new(vec![cr(s), cr(s)]),
            CVector::new(vec![cr(s), cr(-s)]),
        ],
    )
    .expect("Pauli-X eigenbasis");
    let y = Basis::new(
        "B2",
        vec![
            CVector::new(vec![cr(s), c(0.0, s)]),
            CVector::new(vec![cr(s), c(0.0, -s)]),
        ],
    )
    .expect("Pauli-Y eigenbasis");
    MubSet::new(vec![canonical_basis(2).unwrap(), x, y]).expect("qubit MUB triple")
}

fn basis_from_columns(label: &str, cols: &[Vec<Complex64>]) -> Basis {
    let vectors = cols.iter().map(|col| CVector::new(col.clone())).collect();
    Basis::new(label, vectors).expect("hard-coded basis fixture")
}

/// The printed d = 3 set: canonical plus B1, B2 and B3 = B2*, stored verbatim
/// (column order and phases preserved).
pub fn d3_fixture() -> MubSet {
    let n = 1.0 / 3f64.sqrt();
    let w = omega_pow(3, 1).scale(n);
    let ws = omega_pow(3, 2).scale(n);
    let one = cr(n);
    let b1 = basis_from_columns(
        "B1",
        &[vec![one, one, one], vec![one, w, ws], vec![one, ws, w]],
    );
    let b2 = basis_from_columns(
        "B2",
        &[vec![one, one, ws], vec![one, w, w], vec![one, ws, one]],
    );
    let b3 = basis_from_columns(
        "B3",
        &[vec![one, one, w], vec![one, ws, ws], vec![one, w, one]],
    );
    MubSet::new(vec![canonical_basis(3).unwrap(), b1, b2, b3]).expect("d=3 fixture")
}

fn d4_b1() -> Basis {
    let h = 0.5;
    basis_from_columns(
        "B1",
        &[
            vec![cr(h), cr(h), cr(h), cr(h)],
            vec![cr(h), cr(h), cr(-h), cr(-h)],
            vec![cr(h), cr(-h), cr(-h), cr(h)],
            vec![cr(h), cr(-h), cr(h), cr(-h)],
        ],
    )
}

/// The two printed d = 4 triples: {B0, B1, B_ext} extends to a complete set,
/// while no basis is unbiased to all of {B0, B1, B_unext}.
pub fn d4_fixtures() -> (MubSet, MubSet) {
    let h = 0.5;
    let i = c(0.0, 0.5);
    let mi = c(0.0, -0.5);
    let ext = basis_from_columns(
        "Bext",
        &[
            vec![cr(h), i, cr(-h), i],
            vec![cr(h), mi, cr(-h), mi],
            vec![cr(h), i, cr(h), mi],
            vec![cr(h), mi, cr(h), i],
        ],
    );
    let unext = basis_from_columns(
        "Bunext",
        &[
            vec![cr(h), cr(h), cr(-h), cr(h)],
            vec![cr(h), cr(h), cr(h), cr(-h)],
            vec![cr(h), cr(-h), cr(h), cr(h)],
            vec![cr(h), cr(-h), cr(-h), cr(-h)],
        ],
    );
    let b0 = canonical_basis(4).unwrap();
    let extendible = MubSet::new(vec![b0.clone(), d4_b1(), ext]).expect("d=4 extendible triple");
    let unextendible = MubSet::new(vec![b0, d4_b1(), unext]).expect("d=4 unextendible triple");
    (extendible, unextendible)
}

/// Complete set of d+1 MUBs where one is available: d = 2 or an odd prime.
pub fn complete_set(d: usize) -> Result<MubSet> {
    if d == 2 {
        Ok(d2_complete())
    } else if is_odd_prime(d) {
        heisenberg_weyl_set(d)
    } else {
        Err(Error::unsupported(format!(
            "no complete MUB set construction for dimension {d}; available: 2 and odd primes"
        )))
    }
}

/// JSON form of a MubSet: {"d": n, "bases": [{"label", "vectors": [{re, im}]}]}.
#[derive(serde::Serialize, serde::Deserialize)]
pub struct MubSetJson {
    pub d: usize,
    pub bases: Vec<BasisJson>,
}

#[derive(serde::Serialize, serde::Deserialize)]
pub struct BasisJson {
    pub label: String,
    pub vectors: Vec<VectorJson>,
}

#[derive(serde::Serialize, serde::Deserialize)]
pub struct VectorJson {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&MubSet> for MubSetJson {
    fn from(set: &MubSet) -> Self {
        MubSetJson {
            d: set.d(),
            bases: set
                .bases()
                .iter()
                .map(|b| BasisJson {
                    label: b.label().to_string(),
                    vectors: b
                        .vectors()
                        .iter()
                        .map(|v| VectorJson {
                            re: v.as_slice().iter().map(|z| z.re).collect(),
                            im: v.as_slice().iter().map(|z| z.im).collect(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

impl MubSetJson {
    pub fn into_mub_set(self) -> Result<MubSet> {
        let mut bases = Vec::with_capacity(self.bases.len());
        for b in self.bases {
            let mut vectors = Vec::with_capacity(b.vectors.len());
            for v in b.vectors {
                if v.re.len() != v.im.len() {
                    return Err(Error::domain("vector re/im arrays differ in length"));
                }
                vectors.push(CVector::new(
                    v.re.iter().zip(&v.im).map(|(&re, &im)| c(re, im)).collect(),
                ));
            }
            bases.push(Basis::new(b.label, vectors)?);
        }
        MubSet::new(bases)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::weyl_op;

    #[test]
    fn canonical_examples() {
        let b = canonical_basis(3).unwrap();
        assert!(b.is_canonical());
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_eq!(b.vector(i).inner(b.vector(j)).re, expect);
            }
        }
        assert!(canonical_basis(1).is_err());
    }

    #[test]
    fn fourier_d2_is_hadamard() {
        let b = fourier_basis(2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((b.vector(0).get(0).re - s).abs() < 1e-15);
        assert!((b.vector(1).get(1).re + s).abs() < 1e-15);
    }

    #[test]
    fn fourier_unbiased_to_canonical() {
        for d in [2usize, 3, 4, 5, 8] {
            let f = fourier_basis(d).unwrap();
            let canon = canonical_basis(d).unwrap();
            let report = verify_bases(&[canon, f], 1e-12);
            assert!(
                report.pass,
                "d = {d}: deviation {:.3e}",
                report.max_deviation
            );
        }
    }

    #[test]
    fn fourier_d3_matches_fixture_column() {
        let f = fourier_basis(3).unwrap();
        let fixture = d3_fixture();
        let b1 = fixture.basis(1);
        for i in 0..3 {
            let diff: f64 = f
                .vector(i)
                .as_slice()
                .iter()
                .zip(b1.vector(i).as_slice())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(diff < 1e-15, "column {i} differs by {diff}");
        }
    }

    #[test]
    fn heisenberg_weyl_sets_are_unbiased() {
        for d in [3usize, 5, 7] {
            let set = heisenberg_weyl_set(d).unwrap();
            assert_eq!(set.m(), d + 1);
            let report = set.verify(if d == 3 { 1e-12 } else { 1e-10 });
            assert!(
                report.pass,
                "d = {d}: deviation {:.3e}",
                report.max_deviation
            );
        }
        assert!(heisenberg_weyl_set(4).is_err());
        assert!(heisenberg_weyl_set(9).is_err());
        assert!(heisenberg_weyl_set(2).is_err());
    }

    #[test]
    fn heisenberg_weyl_d3_spans_fixture_relations() {
        // same unbiasedness table as the printed set
        let hw = heisenberg_weyl_set(3).unwrap();
        let fx = d3_fixture();
        for a in 0..4 {
            for b in 0..4 {
                if a == b {
                    continue;
                }
                for i in 0..3 {
                    for j in 0..3 {
                        let p = hw
                            .basis(a)
                            .vector(i)
                            .inner(fx.basis(b).vector(j))
                            .norm_sqr();
                        // cross-set overlaps are 1/3 whenever labels differ
                        assert!((p - 1.0 / 3.0).abs() < 1e-10 || a == 0 && b == 0);
                    }
                }
            }
        }
    }

    #[test]
    fn hw_bases_diagonalize_a_weyl_line() {
        for d in [3usize, 5] {
            let set = heisenberg_weyl_set(d).unwrap();
            for basis in set.bases().iter().skip(1) {
                let mut found = false;
                'search: for k in 0..d {
                    for l in 0..d {
                        if k == 0 && l == 0 {
                            continue;
                        }
                        let u = weyl_op(d, k as i64, l as i64);
                        let all_eigen = basis.vectors().iter().all(|v| {
                            let uv = u.apply(v);
                            // eigenvector iff |<v|U|v>| = 1
                            (v.inner(&uv).norm() - 1.0).abs() < 1e-10
                        });
                        if all_eigen {
                            found = true;
                            break 'search;
                        }
                    }
                }
                assert!(
                    found,
                    "basis {} of d={d} diagonalizes no Weyl line",
                    basis.label()
                );
            }
        }
    }

    #[test]
    fn fixtures_pass_verification() {
        assert!(d3_fixture().verify(1e-12).pass);
        let (ext, unext) = d4_fixtures();
        assert!(ext.verify(1e-12).pass);
        assert!(unext.verify(1e-12).pass);
        assert!(d2_complete().verify(1e-12).pass);
    }

    #[test]
    fn d3_third_basis_is_conjugate_of_second() {
        let set = d3_fixture();
        for (v2, v3) in set.basis(2).vectors().iter().zip(set.basis(3).vectors()) {
            let diff: f64 = v2
                .conj()
                .as_slice()
                .iter()
                .zip(v3.as_slice())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(diff < 1e-15);
        }
    }

    #[test]
    fn d4_unextendible_is_real() {
        let (_, unext) = d4_fixtures();
        for basis in unext.bases() {
            for v in basis.vectors() {
                for z in v.as_slice() {
                    assert_eq!(z.im, 0.0);
                    assert!((z.re.abs() - 0.5).abs() < 1e-15 || z.re == 0.0 || z.re == 1.0);
                }
            }
        }
    }

    #[test]
    fn duplicate_basis_fails_verification() {
        let canon = canonical_basis(3).unwrap();
        let report = verify_bases(&[canon.clone(), canon], 1e-10);
        assert!(!report.pass);
        assert!((report.max_deviation - (1.0 - 1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn mub_set_json_round_trip() {
        let set = d3_fixture();
        let json = serde_json::to_string(&MubSetJson::from(&set)).unwrap();
        let parsed: MubSetJson = serde_json::from_str(&json).unwrap();
        let back = parsed.into_mub_set().unwrap();
        assert_eq!(back.m(), set.m());
        for (a, b) in set.bases().iter().zip(back.bases()) {
            assert_eq!(a.label(), b.label());
            for (va, vb) in a.vectors().iter().zip(b.vectors()) {
                assert_eq!(va.as_slice(), vb.as_slice());
            }
        }
    }
}
