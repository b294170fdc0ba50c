//! Dense matrix exponential: diagonal Pade of degree (13, 13) with scaling
//! and squaring.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Scale the input so its 1-norm falls at or below this value before the
/// Pade evaluation.
pub const SCALING_THRESHOLD: f64 = 0.5;

const PADE_DEGREE: u32 = 13;

/// Coefficients of the degree-(p, p) diagonal Pade numerator with the
/// leading coefficient normalized to one:
/// `c_{j+1} = c_j (p - j) / ((2p - j)(j + 1))`.
fn pade_coefficients(p: u32) -> Vec<f64> {
    let mut c = vec![1.0];
    for j in 0..p {
        let last = *c.last().unwrap();
        c.push(last * (p - j) as f64 / (((2 * p - j) * (j + 1)) as f64));
    }
    c
}

fn one_norm(m: &DMatrix<f64>) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(M)` for a square matrix with finite entries.
pub fn expm_pade(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::Dimension(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    for j in 0..n {
        for i in 0..n {
            if !m[(i, j)].is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }

    let norm = one_norm(m);
    let squarings = if norm > SCALING_THRESHOLD {
        (norm / SCALING_THRESHOLD).log2().ceil() as u32
    } else {
        0
    };
    let scaled = m / 2f64.powi(squarings as i32);

    let c = pade_coefficients(PADE_DEGREE);
    let eye = DMatrix::identity(n, n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;

    // Odd part U = A (A6 (c13 A6 + c11 A4 + c9 A2) + c7 A6 + c5 A4 + c3 A2 + c1 I)
    let u_inner = &a6 * (&a6 * c[13] + &a4 * c[11] + &a2 * c[9])
        + &a6 * c[7]
        + &a4 * c[5]
        + &a2 * c[3]
        + &eye * c[1];
    let u = &scaled * u_inner;
    // Even part V = A6 (c12 A6 + c10 A4 + c8 A2) + c6 A6 + c4 A4 + c2 A2 + c0 I
    let v = &a6 * (&a6 * c[12] + &a4 * c[10] + &a2 * c[8])
        + &a6 * c[6]
        + &a4 * c[4]
        + &a2 * c[2]
        + &eye * c[0];

    let numerator = &v + &u;
    let denominator = &v - &u;
    let mut result = denominator
        .lu()
        .solve(&numerator)
        .ok_or(Error::SingularSolve(0))?;

    for _ in 0..squarings {
        result = &result * &result;
    }
    Ok(result)
}

/// Closed-form exponential of the two-state generator
/// `[[-lambda, mu], [lambda, -mu]]`, used as an independent oracle in tests.
pub fn two_state_expm(lambda: f64, mu: f64, t: f64) -> DMatrix<f64> {
    let s = lambda + mu;
    let e = (-s * t).exp();
    nalgebra::dmatrix![
        (mu + lambda * e) / s, mu * (1.0 - e) / s;
        lambda * (1.0 - e) / s, (lambda + mu * e) / s
    ]
}
