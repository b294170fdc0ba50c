//! Shifted linear solves `(A - theta I) x = b` for real banded `A` and
//! complex shifts.
//!
//! Direct banded LU with partial pivoting is used up to
//! [`DIRECT_SOLVE_MAX_DIM`]; above that the solve falls back to a
//! Jacobi-preconditioned BiCGSTAB iteration.

use num_complex::Complex64;

use crate::banded::BandedMatrix;
use crate::error::{Error, Result};

/// Largest dimension handled by the direct banded factorization.
pub const DIRECT_SOLVE_MAX_DIM: usize = 5000;

const ITER_TOL: f64 = 1e-13;
const ITER_MAX: usize = 10_000;

/// LU factorization of `A - shift I` in LAPACK-style band storage with
/// `kl` extra rows for pivoting fill.
pub struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    ldab: usize,
    ab: Vec<Complex64>,
    ipiv: Vec<usize>,
}

impl BandedLu {
    pub fn factor(a: &BandedMatrix, shift: Complex64) -> Result<Self> {
        let n = a.dim();
        let kl = a.lower_bandwidth();
        let ku = a.upper_bandwidth();
        let ldab = 2 * kl + ku + 1;
        let kv = kl + ku;
        let mut ab = vec![Complex64::ZERO; ldab * n];
        let at = |r: usize, c: usize| c * ldab + r;

        for band in a.bands() {
            let d = band.offset;
            for (j, &v) in band.values.iter().enumerate() {
                let row = j as i64 + d;
                if row >= 0 && row < n as i64 && v != 0.0 {
                    ab[at((kv as i64 + d) as usize, j)] += Complex64::new(v, 0.0);
                }
            }
        }
        for j in 0..n {
            ab[at(kv, j)] -= shift;
        }

        let mut ipiv = vec![0usize; n];
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            let mut jp = 0;
            let mut best = ab[at(kv, j)].norm_sqr();
            for p in 1..=km {
                let mag = ab[at(kv + p, j)].norm_sqr();
                if mag > best {
                    best = mag;
                    jp = p;
                }
            }
            ipiv[j] = j + jp;
            let pivot = ab[at(kv + jp, j)];
            if pivot == Complex64::ZERO {
                return Err(Error::SingularSolve(j));
            }
            let ju = (j + kv).min(n - 1);
            if jp != 0 {
                for c in j..=ju {
                    let r1 = kv + j - c;
                    let r2 = r1 + jp;
                    ab.swap(at(r1, c), at(r2, c));
                }
            }
            if km > 0 {
                let inv = pivot.finv();
                for p in 1..=km {
                    let m = ab[at(kv + p, j)] * inv;
                    ab[at(kv + p, j)] = m;
                }
                for c in (j + 1)..=ju {
                    let u = ab[at(kv + j - c, c)];
                    if u != Complex64::ZERO {
                        for p in 1..=km {
                            let m = ab[at(kv + p, j)];
                            ab[at(kv + j - c + p, c)] -= m * u;
                        }
                    }
                }
            }
        }

        Ok(BandedLu {
            n,
            kl,
            ku,
            ldab,
            ab,
            ipiv,
        })
    }

    pub fn solve_in_place(&self, b: &mut [Complex64]) {
        debug_assert_eq!(b.len(), self.n);
        let kv = self.kl + self.ku;
        let at = |r: usize, c: usize| c * self.ldab + r;
        if self.kl > 0 {
            for j in 0..self.n.saturating_sub(1) {
                if self.ipiv[j] != j {
                    b.swap(j, self.ipiv[j]);
                }
                let lm = self.kl.min(self.n - 1 - j);
                let bj = b[j];
                for p in 1..=lm {
                    let m = self.ab[at(kv + p, j)];
                    b[j + p] -= m * bj;
                }
            }
        }
        for j in (0..self.n).rev() {
            b[j] /= self.ab[at(kv, j)];
            let lm = kv.min(j);
            let bj = b[j];
            for p in 1..=lm {
                b[j - p] -= self.ab[at(kv - p, j)] * bj;
            }
        }
    }
}

fn shifted_matvec(a: &BandedMatrix, shift: Complex64, x: &[Complex64], y: &mut [Complex64]) {
    y.fill(Complex64::ZERO);
    let n = a.dim() as i64;
    for band in a.bands() {
        let d = band.offset;
        for (j, &v) in band.values.iter().enumerate() {
            let row = j as i64 + d;
            if row >= 0 && row < n && v != 0.0 {
                y[row as usize] += v * x[j];
            }
        }
    }
    for j in 0..a.dim() {
        y[j] -= shift * x[j];
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Jacobi-preconditioned BiCGSTAB on `(A - shift I) x = b`.
pub fn bicgstab(a: &BandedMatrix, shift: Complex64, b: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = a.dim();
    let bnorm = norm(b);
    if bnorm == 0.0 {
        return Ok(vec![Complex64::ZERO; n]);
    }
    let diag: Vec<Complex64> = (0..n)
        .map(|j| {
            let d = Complex64::new(a.entry(j, j), 0.0) - shift;
            if d == Complex64::ZERO {
                Complex64::new(1.0, 0.0)
            } else {
                d
            }
        })
        .collect();

    let mut x = vec![Complex64::ZERO; n];
    let mut r = b.to_vec();
    let rhat = r.clone();
    let mut rho_prev = Complex64::new(1.0, 0.0);
    let mut alpha = Complex64::new(1.0, 0.0);
    let mut omega = Complex64::new(1.0, 0.0);
    let mut v = vec![Complex64::ZERO; n];
    let mut p = vec![Complex64::ZERO; n];
    let mut phat = vec![Complex64::ZERO; n];
    let mut shat = vec![Complex64::ZERO; n];
    let mut t = vec![Complex64::ZERO; n];

    for iter in 0..ITER_MAX {
        let rho = dot(&rhat, &r);
        if rho == Complex64::ZERO {
            return Err(Error::SolveDiverged {
                residual: norm(&r) / bnorm,
                iters: iter,
            });
        }
        let beta = (rho / rho_prev) * (alpha / omega);
        for j in 0..n {
            p[j] = r[j] + beta * (p[j] - omega * v[j]);
        }
        for j in 0..n {
            phat[j] = p[j] / diag[j];
        }
        shifted_matvec(a, shift, &phat, &mut v);
        alpha = rho / dot(&rhat, &v);
        let s: Vec<Complex64> = (0..n).map(|j| r[j] - alpha * v[j]).collect();
        if norm(&s) <= ITER_TOL * bnorm {
            for j in 0..n {
                x[j] += alpha * phat[j];
            }
            return Ok(x);
        }
        for j in 0..n {
            shat[j] = s[j] / diag[j];
        }
        shifted_matvec(a, shift, &shat, &mut t);
        omega = dot(&t, &s) / dot(&t, &t);
        for j in 0..n {
            x[j] += alpha * phat[j] + omega * shat[j];
            r[j] = s[j] - omega * t[j];
        }
        if norm(&r) <= ITER_TOL * bnorm {
            return Ok(x);
        }
        rho_prev = rho;
    }
    Err(Error::SolveDiverged {
        residual: norm(&r) / bnorm,
        iters: ITER_MAX,
    })
}

/// Solves `(A - shift I) x = b`, choosing direct or iterative by dimension.
pub fn shifted_solve(a: &BandedMatrix, shift: Complex64, b: &[Complex64]) -> Result<Vec<Complex64>> {
    if a.dim() <= DIRECT_SOLVE_MAX_DIM {
        let lu = BandedLu::factor(a, shift)?;
        let mut x = b.to_vec();
        lu.solve_in_place(&mut x);
        Ok(x)
    } else {
        bicgstab(a, shift, b)
    }
}
