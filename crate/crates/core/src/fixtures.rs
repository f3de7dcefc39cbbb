//! Hard-coded reference matrices for the d = 3 and d = 4 witness and state
//! families, transcribed entry by entry. These are kept independent of the
//! constructive routines on purpose: tests compare the two representations.

/// The printed d = 3 family: six witnesses, the deformed state, and the
/// positive decomposition of the two-basis witness.
pub mod d3 {
    use num_complex::Complex64;

    use crate::linalg::{cr, omega_pow, CMatrix};

    fn omega() -> Complex64 {
        omega_pow(3, 1)
    }

    fn omega_conj() -> Complex64 {
        omega_pow(3, 2)
    }

    const DIAG_ONES: [usize; 6] = [0, 2, 3, 4, 7, 8];
    const BELL_PAIRS: [(usize, usize); 6] = [(0, 4), (4, 0), (0, 8), (8, 0), (4, 8), (8, 4)];
    // phase-carrying positions, split by which of the two conjugate values they hold
    const PHASE_W: [(usize, usize); 6] = [(1, 5), (2, 7), (3, 2), (5, 6), (6, 1), (7, 3)];
    const PHASE_WC: [(usize, usize); 6] = [(1, 6), (2, 3), (3, 7), (5, 1), (6, 5), (7, 2)];

    fn witness_pattern(bell: f64, w: Complex64, wc: Complex64) -> CMatrix {
        let mut entries: Vec<(usize, usize, Complex64)> = Vec::new();
        for &i in &DIAG_ONES {
            entries.push((i, i, cr(1.0)));
        }
        for &(i, j) in &BELL_PAIRS {
            entries.push((i, j, cr(bell)));
        }
        for &(i, j) in &PHASE_W {
            entries.push((i, j, w));
        }
        for &(i, j) in &PHASE_WC {
            entries.push((i, j, wc));
        }
        CMatrix::from_entries(9, &entries)
    }

    /// W_(0,1,2).
    pub fn witness_012() -> CMatrix {
        witness_pattern(
            -2.0 / 3.0,
            omega().scale(1.0 / 3.0),
            omega_conj().scale(1.0 / 3.0),
        )
    }

    /// W_(0,1,3), printed as the conjugate of W_(0,1,2).
    pub fn witness_013() -> CMatrix {
        witness_012().conj()
    }

    /// W_(0,2,3).
    pub fn witness_023() -> CMatrix {
        witness_pattern(-2.0 / 3.0, cr(1.0 / 3.0), cr(1.0 / 3.0))
    }

    /// W_(0,1).
    pub fn witness_01() -> CMatrix {
        witness_pattern(-1.0 / 3.0, cr(-1.0 / 3.0), cr(-1.0 / 3.0))
    }

    /// W_(0,3).
    pub fn witness_03() -> CMatrix {
        witness_pattern(
            -1.0 / 3.0,
            omega().scale(-1.0 / 3.0),
            omega_conj().scale(-1.0 / 3.0),
        )
    }

    /// W_(0,2), printed as the conjugate of W_(0,3).
    pub fn witness_02() -> CMatrix {
        witness_03().conj()
    }

    /// The positive part A of W_(0,1) = A + B^G (already carries its 1/3).
    pub fn decomposition_a() -> CMatrix {
        let mut entries: Vec<(usize, usize, Complex64)> = Vec::new();
        for &i in &DIAG_ONES {
            entries.push((i, i, cr(2.0 / 3.0)));
        }
        let neg: [(usize, usize); 12] = [
            (0, 4),
            (4, 0),
            (0, 8),
            (8, 0),
            (4, 8),
            (8, 4),
            (2, 3),
            (3, 2),
            (2, 7),
            (7, 2),
            (3, 7),
            (7, 3),
        ];
        for &(i, j) in &neg {
            entries.push((i, j, cr(-1.0 / 3.0)));
        }
        CMatrix::from_entries(9, &entries)
    }

    /// The part B with W_(0,1) = A + B^G (already carries its 1/3).
    pub fn decomposition_b() -> CMatrix {
        let mut entries: Vec<(usize, usize, Complex64)> = Vec::new();
        for &i in &DIAG_ONES {
            entries.push((i, i, cr(1.0 / 3.0)));
        }
        let neg: [(usize, usize); 6] = [(0, 7), (7, 0), (2, 4), (4, 2), (3, 8), (8, 3)];
        for &(i, j) in &neg {
            entries.push((i, j, cr(-1.0 / 3.0)));
        }
        CMatrix::from_entries(9, &entries)
    }

    /// The printed 9x9 deformed state before normalization.
    pub fn rho_x_unnormalized(x: f64) -> CMatrix {
        let diag = [1.0, 1.0 / x, x, x, 1.0, 1.0 / x, 1.0 / x, x, 1.0];
        let mut entries: Vec<(usize, usize, Complex64)> = diag
            .iter()
            .enumerate()
            .map(|(i, &v)| (i, i, cr(v)))
            .collect();
        for &(i, j) in &BELL_PAIRS {
            entries.push((i, j, cr(1.0)));
        }
        CMatrix::from_entries(9, &entries)
    }

    /// The printed state, normalized by its trace.
    pub fn rho_x(x: f64) -> CMatrix {
        let m = rho_x_unnormalized(x);
        let norm = m.trace().re;
        m.scale(1.0 / norm)
    }
}

/// The printed d = 4 family: the two three-basis witnesses and the two state
/// families they detect.
pub mod d4 {
    use num_complex::Complex64;

    use crate::linalg::{cr, CMatrix};

    const BELL_DIAG: [usize; 4] = [0, 5, 10, 15];

    fn with_bell_block(entries: &mut Vec<(usize, usize, Complex64)>, value: f64) {
        for &i in &BELL_DIAG {
            for &j in &BELL_DIAG {
                if i != j {
                    entries.push((i, j, cr(value)));
                }
            }
        }
    }

    fn witness(diag_ones: &[usize], halves: &[(usize, usize)]) -> CMatrix {
        let mut entries: Vec<(usize, usize, Complex64)> = Vec::new();
        for &i in diag_ones {
            entries.push((i, i, cr(1.0)));
        }
        with_bell_block(&mut entries, -0.5);
        for &(i, j) in halves {
            entries.push((i, j, cr(-0.5)));
            entries.push((j, i, cr(-0.5)));
        }
        CMatrix::from_entries(16, &entries)
    }

    /// The witness built on the extendible triple.
    pub fn w_ext() -> CMatrix {
        witness(
            &[0, 2, 3, 4, 5, 7, 8, 9, 10, 13, 14, 15],
            &[(1, 14), (2, 8), (3, 6), (4, 11), (7, 13), (9, 12)],
        )
    }

    /// The witness built on the unextendible (real) triple; equal to its own
    /// partial transpose.
    pub fn w_unext() -> CMatrix {
        witness(
            &[0, 2, 3, 4, 5, 7, 8, 9, 10, 13, 14, 15],
            &[(1, 4), (2, 8), (3, 12), (6, 9), (7, 13), (11, 14)],
        )
    }

    fn rho_pattern(diag: [f64; 16], ones: &[(usize, usize)]) -> CMatrix {
        let mut entries: Vec<(usize, usize, Complex64)> = diag
            .iter()
            .enumerate()
            .map(|(i, &v)| (i, i, cr(v)))
            .collect();
        with_bell_block(&mut entries, 1.0);
        for &(i, j) in ones {
            entries.push((i, j, cr(1.0)));
            entries.push((j, i, cr(1.0)));
        }
        CMatrix::from_entries(16, &entries)
    }

    pub fn rho_a_unnormalized(a: f64) -> CMatrix {
        let r = 1.0 / a;
        rho_pattern(
            [
                1.0, r, 1.0, a, a, 1.0, r, 1.0, 1.0, a, 1.0, r, r, 1.0, a, 1.0,
            ],
            &[(1, 14), (2, 8), (3, 6), (4, 11), (7, 13), (9, 12)],
        )
    }

    pub fn rho_a(a: f64) -> CMatrix {
        let m = rho_a_unnormalized(a);
        let norm = m.trace().re;
        m.scale(1.0 / norm)
    }

    pub fn rho_b_unnormalized(b: f64) -> CMatrix {
        let r = 1.0 / b;
        rho_pattern(
            [
                1.0, r, 1.0, b, b, 1.0, r, 1.0, 1.0, b, 1.0, r, r, 1.0, b, 1.0,
            ],
            &[(1, 4), (2, 8), (3, 12), (6, 9), (7, 13), (11, 14)],
        )
    }

    pub fn rho_b(b: f64) -> CMatrix {
        let m = rho_b_unnormalized(b);
        let norm = m.trace().re;
        m.scale(1.0 / norm)
    }
}
