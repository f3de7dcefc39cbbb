//! Fixed-width matrix rendering with "." for exact zeros, so a printed
//! witness can be eyeballed against a reference table directly.

use mubwit_core::linalg::CMatrix;
use num_complex::Complex64;

fn fmt_real(v: f64) -> String {
    if (v - v.round()).abs() < 5e-13 && v.abs() < 1e6 {
        format!("{}", v.round() as i64)
    } else {
        format!("{v:.3}")
    }
}

fn fmt_entry(z: Complex64) -> String {
    // constructed matrices carry ~1e-16 round-off where references have
    // exact zeros; both should render as "."
    if z.re.abs() < 1e-12 && z.im.abs() < 1e-12 {
        ".".to_string()
    } else if z.im.abs() < 1e-12 {
        fmt_real(z.re)
    } else if z.re.abs() < 1e-12 {
        format!("{}i", fmt_real(z.im))
    } else {
        let sign = if z.im < 0.0 { "-" } else { "+" };
        format!("{}{sign}{}i", fmt_real(z.re), fmt_real(z.im.abs()))
    }
}

/// Render the matrix as an aligned grid.
pub fn matrix_grid(m: &CMatrix) -> String {
    let n = m.dim();
    let cells: Vec<String> = (0..n * n)
        .map(|idx| fmt_entry(m.get(idx / n, idx % n)))
        .collect();
    let width = cells.iter().map(|c| c.len()).max().unwrap_or(1);
    let mut out = String::new();
    for i in 0..n {
        for j in 0..n {
            if j > 0 {
                out.push(' ');
            }
            out.push_str(&format!("{:>width$}", cells[i * n + j]));
        }
        out.push('\n');
    }
    out
}

/// 12-significant-digit float for stdout summaries.
pub fn fmt_value(v: f64) -> String {
    format!("{v:.11e}")
}

/// Full-precision float; eval prints these so file-based results can be
/// compared against in-memory values at the 1e-14 level.
pub fn fmt_value_full(v: f64) -> String {
    format!("{v:.16e}")
}
