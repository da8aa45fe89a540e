//! Cyclic Jacobi eigensolvers for small Hermitian and real-symmetric matrices,
//! plus a one-sided Jacobi singular-value routine.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

pub const MAX_EIGH_DIM: usize = 64;
pub const MAX_SWEEPS: usize = 100;
/// Off-diagonal Frobenius norm at convergence, relative to the full norm.
pub const OFF_DIAG_TOL: f64 = 1e-14;

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V diag(f(λ)) V^H`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mapped: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        ComplexMatrix::from_fn(n, n, |r, c| {
            (0..n)
                .map(|k| self.vectors[(r, k)] * self.vectors[(c, k)].conj() * mapped[k])
                .sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|x| x)
    }
}

/// 2x2 unitary `[[c, s], [-s e^{-iθ}, c e^{-iθ}]]` that zeroes the `(p, q)`
/// entry of the Hermitian block `[[app, apq], [conj(apq), aqq]]`.
fn jacobi_rotation(app: f64, aqq: f64, apq: Complex64) -> (f64, f64, Complex64) {
    let g = apq.norm();
    let phase = Complex64::from_polar(1.0, -apq.arg());
    let zeta = (aqq - app) / (2.0 * g);
    let t = if zeta >= 0.0 {
        1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
    } else {
        -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c, phase)
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
pub fn eigh_hermitian(m: &ComplexMatrix) -> Result<HermitianEigen> {
    m.check_hermitian()?;
    let n = m.rows();
    if n > MAX_EIGH_DIM {
        return Err(Error::TooLarge {
            dim: n,
            max: MAX_EIGH_DIM,
        });
    }

    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
    }
    let mut v = ComplexMatrix::identity(n);
    let total = a.frobenius_norm();

    let mut converged = total == 0.0;
    let mut sweeps = 0;
    while !converged {
        if off_diagonal_norm(&a) <= OFF_DIAG_TOL * total {
            converged = true;
            break;
        }
        if sweeps == MAX_SWEEPS {
            break;
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.norm() == 0.0 {
                    continue;
                }
                let (c, s, ph) = jacobi_rotation(a[(p, p)].re, a[(q, q)].re, apq);
                let g_pp = Complex64::new(c, 0.0);
                let g_pq = Complex64::new(s, 0.0);
                let g_qp = ph * -s;
                let g_qq = ph * c;
                // A <- A G
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * g_pp + akq * g_qp;
                    a[(k, q)] = akp * g_pq + akq * g_qq;
                }
                // A <- G^H A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * g_pp + vkq * g_qp;
                    v[(k, q)] = vkp * g_pq + vkq * g_qq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// A symmetric real 3x3 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealSym3 {
    m: [[f64; 3]; 3],
}

impl RealSym3 {
    /// Symmetrizes the input; callers pass matrices that are symmetric already.
    pub fn new(m: [[f64; 3]; 3]) -> Self {
        let mut s = m;
        for r in 0..3 {
            for c in (r + 1)..3 {
                let avg = 0.5 * (m[r][c] + m[c][r]);
                s[r][c] = avg;
                s[c][r] = avg;
            }
        }
        Self { m: s }
    }

    /// `TᵀT`.
    pub fn gram(t: &[[f64; 3]; 3]) -> Self {
        let mut m = [[0.0; 3]; 3];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, out) in row.iter_mut().enumerate() {
                *out = (0..3).map(|k| t[k][r] * t[k][c]).sum();
            }
        }
        Self::new(m)
    }

    pub fn entries(&self) -> [[f64; 3]; 3] {
        self.m
    }

    /// Eigenvalues ascending with matching eigenvector columns.
    #[allow(clippy::needless_range_loop)]
    pub fn eigen(&self) -> Result<([f64; 3], [[f64; 3]; 3])> {
        let mut a = self.m;
        let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let total = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
        let off = |a: &[[f64; 3]; 3]| (2.0 * (a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2))).sqrt();

        let mut sweeps = 0;
        while total > 0.0 && off(&a) > OFF_DIAG_TOL * total {
            if sweeps == MAX_SWEEPS {
                return Err(Error::NoConvergence(MAX_SWEEPS));
            }
            sweeps += 1;
            for (p, q) in [(0, 1), (0, 2), (1, 2)] {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let zeta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (kp, kq) = (row[p], row[q]);
                    row[p] = c * kp - s * kq;
                    row[q] = s * kp + c * kq;
                }
                for k in 0..3 {
                    let (pk, qk) = (a[p][k], a[q][k]);
                    a[p][k] = c * pk - s * qk;
                    a[q][k] = s * pk + c * qk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for row in v.iter_mut() {
                    let (kp, kq) = (row[p], row[q]);
                    row[p] = c * kp - s * kq;
                    row[q] = s * kp + c * kq;
                }
            }
        }

        let mut order = [0, 1, 2];
        order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
        let values = order.map(|i| a[i][i]);
        let mut vectors = [[0.0; 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                vectors[r][c] = v[r][order[c]];
            }
        }
        Ok((values, vectors))
    }

    pub fn eigenvalues(&self) -> Result<[f64; 3]> {
        self.eigen().map(|(vals, _)| vals)
    }
}

/// Singular values, descending, by one-sided (Hestenes) Jacobi.
///
/// Small singular values come out with absolute accuracy near machine epsilon
/// times the largest one, unlike square roots of Gram-matrix eigenvalues.
#[allow(clippy::needless_range_loop)]
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut colv: Vec<Vec<Complex64>> = (0..cols).map(|c| (0..rows).map(|r| m[(r, c)]).collect()).collect();

    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha: f64 = colv[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = colv[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = colv[p].iter().zip(&colv[q]).map(|(x, y)| x.conj() * y).sum();
                if alpha == 0.0 || beta == 0.0 || gamma.norm() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let (c, s, ph) = jacobi_rotation(alpha, beta, gamma);
                for k in 0..rows {
                    let (x, y) = (colv[p][k], colv[q][k]);
                    colv[p][k] = x * c - ph * y * s;
                    colv[q][k] = x * s + ph * y * c;
                }
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
    }

    let mut sv: Vec<f64> = colv
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv.truncate(rows.min(cols));
    Ok(sv)
}
