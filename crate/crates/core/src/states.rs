//! The state families paired with the witnesses: the diagonal-deformed
//! family rho_x, the two d = 4 families rho_a and rho_b, and isotropic
//! states. Constructors normalize by the computed trace and validate the
//! density-matrix invariants before returning.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    cr, eig_hermitian, partial_transpose, CMatrix, DEFAULT_PSD_TOL, HERMITICITY_TOL,
};
use crate::witness::{max_entangled_projector, shift_projector};

/// A bipartite density matrix with its family tag and parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityState {
    pub d: usize,
    pub family: String,
    pub params: BTreeMap<String, f64>,
    pub matrix: CMatrix,
}

impl DensityState {
    /// Normalizes by the trace and checks Hermiticity, unit trace, and
    /// positivity (min eigenvalue >= -1e-9).
    pub fn from_unnormalized(
        d: usize,
        family: impl Into<String>,
        params: BTreeMap<String, f64>,
        matrix: CMatrix,
    ) -> Result<Self> {
        if matrix.dim() != d * d {
            return Err(Error::NotBipartite {
                dim: matrix.dim(),
                d,
            });
        }
        let tr = matrix.trace();
        if tr.im.abs() > 1e-10 || tr.re <= 0.0 {
            return Err(Error::domain(format!(
                "state normalization needs a positive real trace, got {tr}"
            )));
        }
        let matrix = matrix.scale(1.0 / tr.re);
        let herm = matrix.hermiticity_residual();
        if herm > HERMITICITY_TOL {
            return Err(Error::NotHermitian { asymmetry: herm });
        }
        let eig = eig_hermitian(&matrix)?;
        let min = eig.min_eigenvalue();
        if min < -DEFAULT_PSD_TOL {
            return Err(Error::domain(format!(
                "assembled state is not positive semidefinite: min eigenvalue {min:.3e}"
            )));
        }
        Ok(DensityState {
            d,
            family: family.into(),
            params,
            matrix,
        })
    }

    pub fn label(&self) -> String {
        let params: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        format!("{}({})", self.family, params.join(","))
    }

    /// Re-check the density-matrix invariants; used on states loaded from
    /// files, which bypass the constructors.
    pub fn validate(&self) -> Result<()> {
        if self.matrix.dim() != self.d * self.d {
            return Err(Error::NotBipartite {
                dim: self.matrix.dim(),
                d: self.d,
            });
        }
        let herm = self.matrix.hermiticity_residual();
        if herm > HERMITICITY_TOL {
            return Err(Error::NotHermitian { asymmetry: herm });
        }
        let tr = self.matrix.trace();
        if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
            return Err(Error::domain(format!("state trace is {tr}, expected 1")));
        }
        let min = eig_hermitian(&self.matrix)?.min_eigenvalue();
        if min < -DEFAULT_PSD_TOL {
            return Err(Error::domain(format!(
                "state is not positive semidefinite: min eigenvalue {min:.3e}"
            )));
        }
        Ok(())
    }
}

fn params_of(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// rho_x = ([1 - Pi_0 - Pi_s - Pi_{d-s}] + Pi_s/x + x Pi_{d-s} + d P_00) / N,
/// with N the trace of the assembled matrix. Requires s != 0 and 2s != d.
pub fn rho_x(d: usize, s: usize, x: f64) -> Result<DensityState> {
    if d < 3 {
        return Err(Error::domain(format!("rho_x needs d >= 3, got {d}")));
    }
    if x <= 0.0 || !x.is_finite() {
        return Err(Error::domain(format!("rho_x needs x > 0, got {x}")));
    }
    let s = s % d;
    if s == 0 {
        return Err(Error::domain("rho_x requires a nonzero shift s"));
    }
    if 2 * s == d {
        return Err(Error::domain(format!(
            "rho_x requires 2s != d (the shifted blocks must be distinct), got d={d}, s={s}"
        )));
    }
    let n = d * d;
    let r = d - s;
    let base = CMatrix::identity(n)
        .sub(&shift_projector(d, 0))
        .sub(&shift_projector(d, s))
        .sub(&shift_projector(d, r));
    let matrix = base
        .add(&shift_projector(d, s).scale(1.0 / x))
        .add(&shift_projector(d, r).scale(x))
        .add(&max_entangled_projector(d).scale(d as f64));
    DensityState::from_unnormalized(
        d,
        "rho_x",
        params_of(&[("d", d as f64), ("s", s as f64), ("x", x)]),
        matrix,
    )
}

/// An unordered pair of bipartite positions carrying a matrix element 1.
type EntryPair = ((usize, usize), (usize, usize));

const RHO_A_PAIRS: [EntryPair; 6] = [
    ((0, 1), (3, 2)),
    ((0, 2), (2, 0)),
    ((0, 3), (1, 2)),
    ((1, 0), (2, 3)),
    ((1, 3), (3, 1)),
    ((2, 1), (3, 0)),
];

const RHO_B_PAIRS: [EntryPair; 6] = [
    ((0, 1), (1, 0)),
    ((0, 2), (2, 0)),
    ((0, 3), (3, 0)),
    ((1, 2), (2, 1)),
    ((1, 3), (3, 1)),
    ((2, 3), (3, 2)),
];

fn d4_family(
    family: &str,
    param_name: &str,
    value: f64,
    pairs: &[EntryPair],
) -> Result<DensityState> {
    if value <= 0.0 || !value.is_finite() {
        return Err(Error::domain(format!(
            "{family} needs a positive parameter, got {value}"
        )));
    }
    let d = 4usize;
    let n = d * d;
    let mut m = CMatrix::zeros(n)
        .add(&max_entangled_projector(d).scale(d as f64))
        .add(&CMatrix::identity(n))
        .sub(&shift_projector(d, 0)); // diagonal 1 off the Bell line, 1 on it via P_00
    m = m
        .sub(&shift_projector(d, 1))
        .add(&shift_projector(d, 1).scale(1.0 / value))
        .sub(&shift_projector(d, 3))
        .add(&shift_projector(d, 3).scale(value));
    let mut entries = Vec::new();
    for &((i, k), (j, l)) in pairs {
        entries.push((i * d + k, j * d + l, cr(1.0)));
        entries.push((j * d + l, i * d + k, cr(1.0)));
    }
    m = m.add(&CMatrix::from_entries(n, &entries));
    DensityState::from_unnormalized(d, family, params_of(&[(param_name, value)]), m)
}

/// The d = 4 family detected by the extendible-triple witness. The diagonal
/// carries 1/a on the shift and a on the reverse shift; positivity forces
/// a > 0, which is what this constructor enforces.
pub fn rho_a(a: f64) -> Result<DensityState> {
    d4_family("rho_a", "a", a, &RHO_A_PAIRS)
}

/// The d = 4 family detected by the unextendible-triple witness; b > 0.
pub fn rho_b(b: f64) -> Result<DensityState> {
    d4_family("rho_b", "b", b, &RHO_B_PAIRS)
}

/// Isotropic state ((1-p)/d^2) 1 + p P_00 for p in [-1/(d^2-1), 1].
pub fn isotropic(d: usize, p: f64) -> Result<DensityState> {
    if d < 2 {
        return Err(Error::domain(format!("isotropic needs d >= 2, got {d}")));
    }
    let dd = (d * d) as f64;
    let lo = -1.0 / (dd - 1.0);
    if !(lo..=1.0).contains(&p) {
        return Err(Error::domain(format!(
            "isotropic parameter p = {p} outside the physical range [{lo:.6}, 1]"
        )));
    }
    let m = CMatrix::identity(d * d)
        .scale((1.0 - p) / dd)
        .add(&max_entangled_projector(d).scale(p));
    DensityState::from_unnormalized(d, "isotropic", params_of(&[("d", d as f64), ("p", p)]), m)
}

/// PPT test: true iff the minimum eigenvalue of rho^G is >= -1e-9. The
/// minimum eigenvalue is always reported.
pub fn is_ppt(state: &DensityState) -> Result<(bool, f64)> {
    let pt = partial_transpose(&state.matrix, state.d)?;
    let eig = eig_hermitian(&pt)?;
    let min = eig.min_eigenvalue();
    Ok((min >= -DEFAULT_PSD_TOL, min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn rho_x_matches_printed_matrix() {
        for x in [0.3, 0.5, 1.0, 1.7] {
            let state = rho_x(3, 1, x).unwrap();
            let diff = state.matrix.max_abs_diff(&fixtures::d3::rho_x(x));
            assert!(diff < 1e-14, "x = {x}: {diff:.3e}");
        }
    }

    #[test]
    fn rho_x_domain_errors() {
        assert!(rho_x(3, 0, 0.5).is_err());
        assert!(rho_x(4, 2, 0.5).is_err()); // 2s = d
        assert!(rho_x(3, 1, 0.0).is_err());
        assert!(rho_x(3, 1, -1.0).is_err());
        assert!(rho_x(2, 1, 0.5).is_err());
    }

    #[test]
    fn rho_x_shift_reversal_is_parameter_inversion() {
        // s -> d-s corresponds to x -> 1/x, exactly
        let x = 0.7;
        let a = rho_x(5, 2, x).unwrap();
        let b = rho_x(5, 3, 1.0 / x).unwrap();
        assert!(a.matrix.max_abs_diff(&b.matrix) < 1e-15);
    }

    #[test]
    fn rho_x_and_its_transpose_stay_positive() {
        for d in [3usize, 5] {
            for s in 1..d {
                if 2 * s == d {
                    continue;
                }
                for k in 1..=10 {
                    let x = 0.2 * k as f64;
                    let state = rho_x(d, s, x).unwrap();
                    let (ppt, min) = is_ppt(&state).unwrap();
                    assert!(ppt, "d={d} s={s} x={x}: min eig of transpose {min:.3e}");
                }
            }
        }
    }

    #[test]
    fn rho_a_matches_printed_matrix() {
        for a in [0.25, 1.0, 1.75] {
            let state = rho_a(a).unwrap();
            let diff = state.matrix.max_abs_diff(&fixtures::d4::rho_a(a));
            assert!(diff < 1e-14, "a = {a}: {diff:.3e}");
        }
    }

    #[test]
    fn rho_b_matches_printed_matrix() {
        for b in [0.25, 0.5, 1.5] {
            let state = rho_b(b).unwrap();
            let diff = state.matrix.max_abs_diff(&fixtures::d4::rho_b(b));
            assert!(diff < 1e-14, "b = {b}: {diff:.3e}");
        }
    }

    #[test]
    fn d4_families_are_ppt() {
        let (ppt, _) = is_ppt(&rho_a(0.3).unwrap()).unwrap();
        assert!(ppt);
        let (ppt, min) = is_ppt(&rho_b(0.5).unwrap()).unwrap();
        assert!(ppt, "min {min}");
        assert!(rho_a(-0.5).is_err());
        assert!(rho_b(0.0).is_err());
    }

    #[test]
    fn rho_a_and_rho_b_differ() {
        let a = rho_a(0.5).unwrap();
        let b = rho_b(0.5).unwrap();
        assert!(a.matrix.max_abs_diff(&b.matrix) > 1e-3);
    }

    #[test]
    fn isotropic_extremes() {
        let mixed = isotropic(3, 0.0).unwrap();
        assert!(
            mixed
                .matrix
                .max_abs_diff(&CMatrix::identity(9).scale(1.0 / 9.0))
                < 1e-15
        );

        let pure = isotropic(3, 1.0).unwrap();
        assert!(pure.matrix.max_abs_diff(&max_entangled_projector(3)) < 1e-15);

        assert!(isotropic(3, 1.1).is_err());
        assert!(isotropic(3, -0.2).is_err());
    }

    #[test]
    fn isotropic_detection_boundary() {
        // tr[(1 - d P+) rho_iso(p)] crosses zero at p = 1/(d+1); locate the
        // root by bisection on directly evaluated traces.
        let d = 3usize;
        let w = CMatrix::identity(9).sub(&max_entangled_projector(d).scale(d as f64));
        let value = |p: f64| w.trace_product(&isotropic(d, p).unwrap().matrix).re;
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        assert!(value(lo) > 0.0 && value(hi) < 0.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if value(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        assert!((root - 1.0 / (d as f64 + 1.0)).abs() < 1e-9, "root {root}");
    }

    #[test]
    fn ppt_examples() {
        let (ppt, _) = is_ppt(&rho_x(3, 1, 0.5).unwrap()).unwrap();
        assert!(ppt);
        let (ppt, min) = is_ppt(&isotropic(3, 1.0).unwrap()).unwrap();
        assert!(!ppt && min < -0.1); // maximally entangled state is NPT
    }

    #[test]
    fn state_json_round_trip() {
        let state = rho_x(3, 1, 0.5).unwrap();
        let json = serde_json::to_string(&state).unwrap();
        let back: DensityState = serde_json::from_str(&json).unwrap();
        assert_eq!(back.family, "rho_x");
        assert!(back.matrix.max_abs_diff(&state.matrix) == 0.0);
        assert_eq!(back.params, state.params);
    }
}
