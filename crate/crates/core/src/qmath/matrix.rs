//! Dense complex matrices, tensor products and partial traces over qubits.
//!
//! Qubit 0 is the most significant bit of a basis index, so for three qubits
//! the index of `|q_A q_B q_C>` is `4 q_A + 2 q_B + q_C`.

use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance for Hermiticity checks, scaled by `max|A|`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Absolute tolerance on `|Tr(rho) - 1|` for density-matrix inputs.
pub const TRACE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// The projector `|v><v|`.
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), v.len(), |r, c| v[r] * v[c].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * k).collect(),
        }
    }

    /// `max|A - A^H|`; requires a square matrix.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for r in 0..self.rows {
            for c in r..self.cols {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    /// Errors unless square and Hermitian within `HERMITIAN_TOL * max|A|`.
    pub fn check_hermitian(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let deviation = self.hermitian_deviation();
        if deviation > HERMITIAN_TOL * self.max_abs() {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..rhs.cols {
                    out[(r, c)] += a * rhs[(k, c)];
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| (0..self.cols).map(|c| self[(r, c)] * v[c]).sum())
            .collect())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on shape mismatch; use [`ComplexMatrix::matmul`] for a checked product.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix shape mismatch")
    }
}

/// Tensor product `a ⊗ b`; `a` occupies the more significant index bits.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.rows * b.rows, a.cols * b.cols, |r, c| {
        a[(r / b.rows, c / b.cols)] * b[(r % b.rows, c % b.cols)]
    })
}

/// Pauli matrices `[σ1, σ2, σ3]`.
pub fn paulis() -> [ComplexMatrix; 3] {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [
        ComplexMatrix::from_row_major(2, 2, vec![z, one, one, z]).unwrap(),
        ComplexMatrix::from_row_major(2, 2, vec![z, -i, i, z]).unwrap(),
        ComplexMatrix::from_row_major(2, 2, vec![one, z, z, -one]).unwrap(),
    ]
}

/// Number of qubits for a state-space dimension, if it is a power of two.
pub fn qubit_count(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(dim));
    }
    Ok(dim.trailing_zeros() as usize)
}

pub(crate) fn validate_subset(keep: &[usize], n_qubits: usize) -> Result<()> {
    let mut seen = 0u64;
    for &q in keep {
        if q >= n_qubits {
            return Err(Error::QubitOutOfRange { index: q, n_qubits });
        }
        if seen & (1 << q) != 0 {
            return Err(Error::DuplicateQubit(q));
        }
        seen |= 1 << q;
    }
    Ok(())
}

/// Maps (kept-subsystem index, traced-subsystem index) to the full basis index.
///
/// `keep[0]` becomes the most significant bit of the kept index; traced qubits
/// keep their relative order.
pub(crate) struct SplitIndex {
    n_qubits: usize,
    keep: Vec<usize>,
    traced: Vec<usize>,
}

impl SplitIndex {
    pub(crate) fn new(n_qubits: usize, keep: &[usize]) -> Self {
        let traced = (0..n_qubits).filter(|q| !keep.contains(q)).collect();
        Self {
            n_qubits,
            keep: keep.to_vec(),
            traced,
        }
    }

    pub(crate) fn kept_dim(&self) -> usize {
        1 << self.keep.len()
    }

    pub(crate) fn traced_dim(&self) -> usize {
        1 << self.traced.len()
    }

    pub(crate) fn compose(&self, kept: usize, traced: usize) -> usize {
        let n = self.n_qubits;
        let mut full = 0;
        let k = self.keep.len();
        for (pos, &q) in self.keep.iter().enumerate() {
            let bit = (kept >> (k - 1 - pos)) & 1;
            full |= bit << (n - 1 - q);
        }
        let t = self.traced.len();
        for (pos, &q) in self.traced.iter().enumerate() {
            let bit = (traced >> (t - 1 - pos)) & 1;
            full |= bit << (n - 1 - q);
        }
        full
    }
}

/// Reduced density matrix on the qubits in `keep`, in the order given.
pub fn partial_trace(rho: &ComplexMatrix, keep: &[usize]) -> Result<ComplexMatrix> {
    if !rho.is_square() {
        return Err(Error::NotSquare {
            rows: rho.rows,
            cols: rho.cols,
        });
    }
    let n = qubit_count(rho.rows)?;
    validate_subset(keep, n)?;
    let tr = rho.trace();
    let dev = (tr - Complex64::new(1.0, 0.0)).norm();
    if dev > TRACE_TOL {
        return Err(Error::TraceNotUnit(dev));
    }

    let split = SplitIndex::new(n, keep);
    let kd = split.kept_dim();
    let mut out = ComplexMatrix::zeros(kd, kd);
    for r in 0..kd {
        for c in 0..kd {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..split.traced_dim() {
                acc += rho[(split.compose(r, t), split.compose(c, t))];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(out)
}
