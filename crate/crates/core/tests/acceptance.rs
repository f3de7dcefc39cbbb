//! Acceptance suite. Each test checks one numbered criterion at its stated
//! tolerance and prints a single PASS line; run with `--nocapture` to see the
//! lines for passing criteria.
//!
//! Criterion 6 is split: the entrywise reproduction passes, while the
//! detection-profile clause asserts a range the constructed witnesses do not
//! have (their trace against the deformed family is (3x-1)/N, so detection
//! stops at x = 1/3). That test fails by construction and prints the measured
//! values; see its comment for the analysis.

use std::time::Instant;

use mubwit_core::analysis::{
    fourier_pair_decomposition, half_shift_decomposition, min_product_expectation,
    obstruction_test, seesaw_bound, verify_decomposition,
};
use mubwit_core::fixtures;
use mubwit_core::linalg::{partial_transpose, CMatrix};
use mubwit_core::mubs::{complete_set, d3_fixture, d4_fixtures, fourier_pair, MubSet};
use mubwit_core::states::{is_ppt, rho_a, rho_b, rho_x, DensityState};
use mubwit_core::witness::{
    asym_projector, bell_basis, bell_witness, build_b, build_b_gamma, build_w,
    max_entangled_projector, shift_projector, weyl_op, WitnessSpec,
};

fn pass(n: &str, detail: &str) {
    println!("PASS  criterion {n}: {detail}");
}

fn x_grid() -> Vec<f64> {
    (1..=20).map(|k| 0.1 * k as f64).collect()
}

fn admissible_shifts(d: usize) -> Vec<usize> {
    (1..d).filter(|s| 2 * s != d).collect()
}

fn labels_prefix(set: &MubSet, m: usize) -> Vec<String> {
    set.labels()[..m].to_vec()
}

#[test]
fn criterion_1_two_design_collapse() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for d in [2usize, 3, 5] {
        let set = complete_set(d).unwrap();
        let w = build_w(&WitnessSpec::new(d, set.labels(), 0, false), &set).unwrap();
        worst = worst.max(w.max_abs_diff(&asym_projector(d).scale(2.0)));

        let wg = build_w(&WitnessSpec::new(d, set.labels(), 0, true), &set).unwrap();
        let reduction = CMatrix::identity(d * d).sub(&max_entangled_projector(d).scale(d as f64));
        worst = worst.max(wg.max_abs_diff(&reduction));
    }
    assert!(worst <= 1e-10, "collapse deviation {worst:.3e}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    pass(
        "1",
        &format!("s=0 collapse for d in {{2,3,5}}, max deviation {worst:.2e}, {elapsed:?}"),
    );
}

#[test]
fn criterion_2_bell_witness_trace_formula() {
    let start = Instant::now();
    let mut worst_formula = 0.0f64;
    let mut worst_eig = f64::INFINITY;
    for d in [3usize, 5, 7] {
        for s in admissible_shifts(d) {
            let w = bell_witness(d, s);
            for x in x_grid() {
                let state = rho_x(d, s, x).unwrap();
                let norm = (d * d - 2 * d) as f64 + (d as f64) / x + (d as f64) * x;
                let expect = d as f64 * (x - 1.0) / norm;
                let value = w.trace_product(&state.matrix).re;
                worst_formula = worst_formula.max((value - expect).abs());
                // constructor already enforces rho >= 0 at 1e-9
                let (ppt, min_eig) = is_ppt(&state).unwrap();
                assert!(ppt, "d={d} s={s} x={x}: transpose min eig {min_eig:.3e}");
                worst_eig = worst_eig.min(min_eig);
            }
        }
    }
    assert!(
        worst_formula <= 1e-10,
        "formula deviation {worst_formula:.3e}"
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    pass(
        "2",
        &format!(
            "tr[W_Bell(s) rho_x] = d(x-1)/N to {worst_formula:.2e}, transposes PSD (min eig {worst_eig:.2e}), {elapsed:?}"
        ),
    );
}

#[test]
fn criterion_3_half_shift_decomposition() {
    let mut worst = 0.0f64;
    for d in [2usize, 4, 6] {
        let dec = half_shift_decomposition(d).unwrap();
        assert!(dec.certified(), "d={d}: not certified");
        assert!(dec.residual < 1e-12, "d={d}: residual {:.3e}", dec.residual);
        worst = worst.max(dec.residual);
    }
    pass(
        "3",
        &format!(
            "half-shift decompositions certified for d in {{2,4,6}}, max residual {worst:.2e}"
        ),
    );
}

fn all_selections(set: &MubSet) -> Vec<Vec<String>> {
    // every subset of the non-canonical bases, plus the canonical basis
    let labels = set.labels();
    let extra = labels.len() - 1;
    let mut out = Vec::new();
    for mask in 1u32..(1 << extra) {
        let mut sel = vec![labels[0].clone()];
        for (bit, label) in labels.iter().skip(1).enumerate() {
            if mask & (1 << bit) != 0 {
                sel.push(label.clone());
            }
        }
        out.push(sel);
    }
    out
}

#[test]
fn criterion_4_universal_elements_and_obstruction() {
    let mut sets: Vec<MubSet> = vec![
        complete_set(3).unwrap(),
        complete_set(5).unwrap(),
        complete_set(7).unwrap(),
    ];
    let (ext, unext) = d4_fixtures();
    sets.push(ext);
    sets.push(unext);

    let mut worst = 0.0f64;
    let mut witnesses = 0usize;
    for set in &sets {
        let d = set.d();
        for selection in all_selections(set) {
            let m = selection.len();
            if m < 2 {
                continue;
            }
            for s in admissible_shifts(d) {
                let spec = WitnessSpec::new(d, selection.clone(), s, true);
                let w = build_w(&spec, set).unwrap();
                // universal elements at 1e-12
                let a = -((m - 1) as f64) / d as f64;
                for i in 0..d {
                    for j in 0..d {
                        let diag = w.w_elem(d, i, i, j, j);
                        let expect = if j == (i + s) % d { 0.0 } else { 1.0 };
                        let dev = (diag.re - expect).abs().max(diag.im.abs());
                        assert!(dev <= 1e-12, "d={d} m={m} s={s} diag ({i},{j}): {dev:.3e}");
                        worst = worst.max(dev);
                        if i != j {
                            let off = w.w_elem(d, i, j, i, j);
                            let dev = (off.re - a).abs().max(off.im.abs());
                            assert!(dev <= 1e-12, "d={d} m={m} s={s} off ({i},{j}): {dev:.3e}");
                            worst = worst.max(dev);
                        }
                    }
                }
                let report = obstruction_test(&w, d, s, m).unwrap();
                let should_fire = m as f64 > d as f64 / 2.0 + 1.0;
                assert_eq!(
                    report.obstruction_found, should_fire,
                    "d={d} m={m} s={s}: obstruction mismatch"
                );
                witnesses += 1;
            }
        }
    }
    pass(
        "4",
        &format!(
            "universal elements to {worst:.2e} and obstruction fires iff m > d/2 + 1 across {witnesses} witnesses"
        ),
    );
}

#[test]
fn criterion_5_fourier_pair_is_decomposable() {
    let mut worst_residual = 0.0f64;
    for d in [3usize, 4, 5, 7, 8] {
        let dec = fourier_pair_decomposition(d, 1).unwrap();
        assert!(dec.certified(), "d={d}: not certified");
        assert!(dec.residual < 1e-10, "d={d}: residual {:.3e}", dec.residual);
        worst_residual = worst_residual.max(dec.residual);
    }

    // consequence: the two-basis witness detects no PPT state in the suite
    let mut floor = f64::INFINITY;
    let mut states_checked = 0usize;
    let xs = [0.2, 0.5, 0.8, 1.0, 1.3, 1.8];
    for d in [3usize, 4, 5, 7, 8] {
        let set = fourier_pair(d).unwrap();
        let w = build_w(&WitnessSpec::new(d, set.labels(), 1, true), &set).unwrap();
        let mut suite: Vec<DensityState> = Vec::new();
        for s in admissible_shifts(d) {
            for &x in &xs {
                suite.push(rho_x(d, s, x).unwrap());
            }
        }
        if d == 4 {
            for k in 1..=7 {
                let p = 0.25 * k as f64;
                suite.push(rho_a(p).unwrap());
                suite.push(rho_b(p).unwrap());
            }
        }
        for state in &suite {
            let (ppt, _) = is_ppt(state).unwrap();
            assert!(ppt, "suite state {} is not PPT", state.label());
            let value = w.trace_product(&state.matrix).re;
            assert!(value >= -1e-8, "d={d} {}: value {value:.3e}", state.label());
            floor = floor.min(value);
        }
        states_checked += suite.len();
    }
    pass(
        "5",
        &format!(
            "Fourier-pair decompositions certified (max residual {worst_residual:.2e}); no detection over {states_checked} PPT states (floor {floor:.2e})"
        ),
    );
}

struct PrintedWitness {
    label: &'static str,
    bases: [&'static str; 3],
    fixture: CMatrix,
}

fn printed_triples() -> Vec<PrintedWitness> {
    vec![
        PrintedWitness {
            label: "W(0,1,2)",
            bases: ["B0", "B1", "B2"],
            fixture: fixtures::d3::witness_012(),
        },
        PrintedWitness {
            label: "W(0,1,3)",
            bases: ["B0", "B1", "B3"],
            fixture: fixtures::d3::witness_013(),
        },
        PrintedWitness {
            label: "W(0,2,3)",
            bases: ["B0", "B2", "B3"],
            fixture: fixtures::d3::witness_023(),
        },
    ]
}

#[test]
fn criterion_6_entrywise_reproduction() {
    let set = d3_fixture();
    let build = |bases: &[&str]| {
        let labels: Vec<String> = bases.iter().map(|s| s.to_string()).collect();
        build_w(&WitnessSpec::new(3, labels, 1, true), &set).unwrap()
    };

    let mut worst = 0.0f64;
    for printed in printed_triples() {
        let w = build(&printed.bases);
        let diff = w.max_abs_diff(&printed.fixture);
        assert!(diff <= 1e-12, "{}: {diff:.3e}", printed.label);
        worst = worst.max(diff);
    }
    // conjugation relations among the printed matrices
    worst =
        worst.max(fixtures::d3::witness_013().max_abs_diff(&fixtures::d3::witness_012().conj()));
    worst = worst.max(fixtures::d3::witness_02().max_abs_diff(&fixtures::d3::witness_03().conj()));

    for (label, bases, fixture) in [
        ("W(0,1)", ["B0", "B1"], fixtures::d3::witness_01()),
        ("W(0,3)", ["B0", "B3"], fixtures::d3::witness_03()),
        ("W(0,2)", ["B0", "B2"], fixtures::d3::witness_02()),
    ] {
        let labels: Vec<String> = bases.iter().map(|s| s.to_string()).collect();
        let w = build_w(&WitnessSpec::new(3, labels, 1, true), &set).unwrap();
        let diff = w.max_abs_diff(&fixture);
        assert!(diff <= 1e-12, "{label}: {diff:.3e}");
        worst = worst.max(diff);
    }

    for x in [0.25, 0.5, 1.0, 1.6] {
        let state = rho_x(3, 1, x).unwrap();
        let diff = state.matrix.max_abs_diff(&fixtures::d3::rho_x(x));
        assert!(diff <= 1e-12, "rho_x({x}): {diff:.3e}");
        worst = worst.max(diff);
    }

    let dec = verify_decomposition(
        &fixtures::d3::witness_01(),
        &fixtures::d3::decomposition_a(),
        &fixtures::d3::decomposition_b(),
    )
    .unwrap();
    assert!(
        dec.certified(),
        "printed decomposition of W(0,1) failed certification"
    );
    worst = worst.max(dec.residual);

    pass(
        "6",
        &format!("printed d=3 matrices reproduced entrywise, max deviation {worst:.2e}"),
    );
}

#[test]
fn criterion_6_detection_profile() {
    // As stated, the three-basis witnesses should detect the deformed state
    // for every x != 1 on the grid. Their actual trace is
    //   tr[W rho_x] = (3x - 1) / (3 + 3x + 3/x),
    // which is negative only for x < 1/3 and equals +2/N at x = 1, so the
    // claim cannot hold; the assertions below document the measured values.
    let set = d3_fixture();
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for printed in printed_triples() {
        let labels: Vec<String> = printed.bases.iter().map(|s| s.to_string()).collect();
        let w = build_w(&WitnessSpec::new(3, labels, 1, true), &set).unwrap();
        for x in x_grid() {
            let state = rho_x(3, 1, x).unwrap();
            let value = w.trace_product(&state.matrix).re;
            rows.push(format!("{} x={x:.1} value={value:+.6e}", printed.label));
            if (x - 1.0).abs() < 1e-12 {
                if value < -1e-10 {
                    violations.push(format!("{} at x=1: {value:.3e} < -1e-10", printed.label));
                }
            } else if value >= -1e-4 {
                violations.push(format!(
                    "{} at x={x:.1}: {value:.3e} >= -1e-4",
                    printed.label
                ));
            }
        }
    }
    for row in &rows {
        println!("  measured: {row}");
    }
    assert!(
        violations.is_empty(),
        "detection-profile clause fails at {} grid points (detection requires x < 1/3):\n{}",
        violations.len(),
        violations.join("\n")
    );
    pass("6", "detection profile over the x grid");
}

#[test]
fn criterion_7_d4_reproduction() {
    let (ext, unext) = d4_fixtures();
    let w_ext_built = build_w(&WitnessSpec::new(4, ext.labels(), 1, true), &ext).unwrap();
    let w_unext_built = build_w(&WitnessSpec::new(4, unext.labels(), 1, true), &unext).unwrap();
    let mut worst = 0.0f64;
    worst = worst.max(w_ext_built.max_abs_diff(&fixtures::d4::w_ext()));
    worst = worst.max(w_unext_built.max_abs_diff(&fixtures::d4::w_unext()));
    assert!(worst <= 1e-12, "witness reproduction deviation {worst:.3e}");

    // W_unext equals its own partial transpose, exactly
    let pt = partial_transpose(&fixtures::d4::w_unext(), 4).unwrap();
    assert_eq!(pt.max_abs_diff(&fixtures::d4::w_unext()), 0.0);

    let mut worst_formula = 0.0f64;
    for k in 1..=7 {
        let p = 0.25 * k as f64;
        let norm = 8.0 + 4.0 * p + 4.0 / p;
        let expect = 4.0 * (p - 1.0) / norm;

        let state_a = rho_a(p).unwrap();
        worst = worst.max(state_a.matrix.max_abs_diff(&fixtures::d4::rho_a(p)));
        let (ppt, min_eig) = is_ppt(&state_a).unwrap();
        assert!(ppt, "rho_a({p}) transpose min eig {min_eig:.3e}");
        let val = fixtures::d4::w_ext().trace_product(&state_a.matrix).re;
        worst_formula = worst_formula.max((val - expect).abs());

        let state_b = rho_b(p).unwrap();
        worst = worst.max(state_b.matrix.max_abs_diff(&fixtures::d4::rho_b(p)));
        let (ppt, min_eig) = is_ppt(&state_b).unwrap();
        assert!(ppt, "rho_b({p}) transpose min eig {min_eig:.3e}");
        let val = fixtures::d4::w_unext().trace_product(&state_b.matrix).re;
        worst_formula = worst_formula.max((val - expect).abs());
    }
    assert!(worst <= 1e-12, "state reproduction deviation {worst:.3e}");
    assert!(
        worst_formula <= 1e-10,
        "trace formula deviation {worst_formula:.3e}"
    );
    pass(
        "7",
        &format!(
            "d=4 witnesses and states reproduced (max {worst:.2e}); tr = 4(p-1)/N to {worst_formula:.2e}; transpose fixed point exact"
        ),
    );
}

#[test]
fn criterion_8_separable_bound() {
    let start = Instant::now();
    let seed = 0u64;
    let mut checked = 0usize;
    let mut floor = f64::INFINITY;
    for d in [3usize, 5] {
        let set = complete_set(d).unwrap();
        for m in 2..=(d + 1) {
            let labels = labels_prefix(&set, m);
            let bound = (d + m - 1) as f64 / d as f64;
            for s in [0usize, 1] {
                for gamma in [false, true] {
                    let b = if gamma {
                        build_b_gamma(&set, &labels, s).unwrap()
                    } else {
                        build_b(&set, &labels, s).unwrap()
                    };
                    let out = seesaw_bound(&b, d, 64, 500, seed).unwrap();
                    assert!(
                        out.best <= bound + 1e-6,
                        "d={d} m={m} s={s} gamma={gamma}: best {} above bound {bound}",
                        out.best
                    );
                    if m == d + 1 && s == 0 {
                        assert!(
                            out.best >= 2.0 - 1e-6,
                            "d={d} gamma={gamma}: complete-set see-saw reached only {}",
                            out.best
                        );
                    }
                    let spec = WitnessSpec::new(d, labels.clone(), s, gamma);
                    let w = build_w(&spec, &set).unwrap();
                    let min = min_product_expectation(&w, d, 10_000, seed).unwrap();
                    assert!(
                        min >= -1e-9,
                        "d={d} m={m} s={s} gamma={gamma}: product floor {min:.3e}"
                    );
                    floor = floor.min(min);
                    checked += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}");
    pass(
        "8",
        &format!(
            "see-saw respects (d+m-1)/d and reaches 2 on complete s=0 sets; 10^4 product states per witness, floor {floor:.2e} over {checked} witnesses, {elapsed:?}"
        ),
    );
}

#[test]
fn criterion_9_identity_suite() {
    let mut worst = 0.0f64;
    for d in [2usize, 3, 5] {
        let set = complete_set(d).unwrap();
        for s in 0..d {
            // W(M_{d+1}, s) = 2 Pi_asym + Pi_0 - Pi_s
            let w = build_w(&WitnessSpec::new(d, set.labels(), s, false), &set).unwrap();
            let expect = asym_projector(d)
                .scale(2.0)
                .add(&shift_projector(d, 0))
                .sub(&shift_projector(d, s));
            let diff = w.max_abs_diff(&expect);
            assert!(diff <= 1e-10, "shifted collapse d={d} s={s}: {diff:.3e}");
            worst = worst.max(diff);

            // W(M_{d+1}, s) + Pi_s = W(M_{d+1}, 0) + Pi_0
            assert!(
                mubwit_core::witness::shift_identity_check(d, s).unwrap(),
                "shift identity d={d} s={s}"
            );

            // Bell diagonality of the Bell witness
            let bell = bell_basis(d);
            let wb = bell_witness(d, s);
            for k in 0..d {
                for l in 0..d {
                    for p in 0..d {
                        for q in 0..d {
                            if (k, l) == (p, q) {
                                continue;
                            }
                            let amp = bell.vector(k, l).inner(&wb.apply(bell.vector(p, q))).norm();
                            assert!(amp <= 1e-10, "d={d} s={s}: <{k}{l}|W|{p}{q}> = {amp:.3e}");
                            worst = worst.max(amp);
                        }
                    }
                }
            }
        }

        // Weyl algebra: composition rule and trace orthogonality
        for k in 0..d as i64 {
            for l in 0..d as i64 {
                for p in 0..d as i64 {
                    for q in 0..d as i64 {
                        let lhs = weyl_op(d, p, q).matmul(&weyl_op(d, k, l));
                        let rhs = weyl_op(d, p + k, q + l)
                            .scale_complex(mubwit_core::linalg::omega_pow(d, q * k));
                        let diff = lhs.max_abs_diff(&rhs);
                        assert!(
                            diff <= 1e-10,
                            "composition d={d} ({p},{q})({k},{l}): {diff:.3e}"
                        );
                        worst = worst.max(diff);

                        let tr = weyl_op(d, k, l).matmul(&weyl_op(d, p, q).adjoint()).trace();
                        let expect = if k == p && l == q { d as f64 } else { 0.0 };
                        let dev = (tr.re - expect).abs().max(tr.im.abs());
                        assert!(dev <= 1e-10, "orthogonality d={d}: {dev:.3e}");
                        worst = worst.max(dev);
                    }
                }
            }
        }
    }

    pass("9", &format!("shifted collapse, shift identity, Bell diagonality and Weyl algebra to {worst:.2e} for d in {{2,3,5}}"));
}
