//! Scalar correlation quantifiers of two-qubit marginals and qubit cuts.
//!
//! For a two-qubit state `ρ` the correlation matrix is `t[n][m] = Tr(ρ σn⊗σm)`,
//! `U = TᵀT`, and `M = μ + μ̃` is the sum of the two largest eigenvalues of `U`.
//! The largest CHSH expectation over all measurement settings is `2√M`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmath::{eigh_hermitian, kron, paulis, singular_values, ComplexMatrix, RealSym3, TRACE_TOL};
use crate::states::PureState;

/// Negative eigenvalues of `U` or `ρ` down to this value are treated as roundoff.
pub const EIGEN_CLAMP_TOL: f64 = 1e-10;
/// Largest imaginary part tolerated in `Tr(ρ σn⊗σm)`.
pub const IMAG_TOL: f64 = 1e-10;
/// Eigenvalues of `ρ` below this are dropped before the spin-flip factorization.
pub const RANK_CUTOFF: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationMatrix {
    pub t: [[f64; 3]; 3],
}

impl CorrelationMatrix {
    pub fn u(&self) -> RealSym3 {
        RealSym3::gram(&self.t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorodeckiData {
    pub mu: f64,
    pub mu_tilde: f64,
    pub s3: f64,
    pub m: f64,
}

impl HorodeckiData {
    /// Largest CHSH expectation value, `2√M`.
    pub fn chsh(&self) -> f64 {
        2.0 * self.m.sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WoottersData {
    /// Square roots of the eigenvalues of `ρρ̃`, descending.
    pub lambda: [f64; 4],
    pub concurrence: f64,
    /// `Tr(ρρ̃) = Σ λ_i²`.
    pub trace_rho_tilde: f64,
}

impl WoottersData {
    /// `Tr(ρρ̃) - 2λ1λ2`, which equals `C²` when `ρ` has rank at most two.
    pub fn rank_two_concurrence_sq(&self) -> f64 {
        self.trace_rho_tilde - 2.0 * self.lambda[0] * self.lambda[1]
    }
}

fn check_two_qubit_density(rho: &ComplexMatrix) -> Result<()> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "expected a 4x4 two-qubit matrix, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    rho.check_hermitian()?;
    let dev = (rho.trace() - Complex64::new(1.0, 0.0)).norm();
    if dev > TRACE_TOL {
        return Err(Error::TraceNotUnit(dev));
    }
    Ok(())
}

pub fn correlation_matrix(rho: &ComplexMatrix) -> Result<CorrelationMatrix> {
    check_two_qubit_density(rho)?;
    let p = paulis();
    let mut t = [[0.0; 3]; 3];
    for (n, sn) in p.iter().enumerate() {
        for (m, sm) in p.iter().enumerate() {
            let obs = kron(sn, sm);
            let tr: Complex64 = (0..4)
                .flat_map(|r| (0..4).map(move |c| (r, c)))
                .map(|(r, c)| rho[(r, c)] * obs[(c, r)])
                .sum();
            if tr.im.abs() > IMAG_TOL {
                return Err(Error::Numerical(format!(
                    "Tr(rho s{}s{}) has imaginary part {:e}",
                    n + 1,
                    m + 1,
                    tr.im
                )));
            }
            t[n][m] = tr.re;
        }
    }
    Ok(CorrelationMatrix { t })
}

fn clamp_nonnegative(x: f64) -> Result<f64> {
    if x < -EIGEN_CLAMP_TOL {
        return Err(Error::NegativeEigenvalue(x));
    }
    Ok(x.max(0.0))
}

/// Descending eigenvalues `(μ, μ̃, s3)` of `U`, clamped at zero.
fn u_spectrum(corr: &CorrelationMatrix) -> Result<[f64; 3]> {
    let [lo, mid, hi] = corr.u().eigenvalues()?;
    Ok([clamp_nonnegative(hi)?, clamp_nonnegative(mid)?, clamp_nonnegative(lo)?])
}

pub fn horodecki(rho: &ComplexMatrix) -> Result<HorodeckiData> {
    let [mu, mu_tilde, s3] = u_spectrum(&correlation_matrix(rho)?)?;
    Ok(HorodeckiData {
        mu,
        mu_tilde,
        s3,
        m: mu + mu_tilde,
    })
}

fn check_qubit(s: &PureState, q: usize) -> Result<()> {
    if q >= s.n_qubits() {
        return Err(Error::QubitOutOfRange {
            index: q,
            n_qubits: s.n_qubits(),
        });
    }
    Ok(())
}

pub(crate) fn require_qubits(s: &PureState, min: usize, max: usize) -> Result<()> {
    let n = s.n_qubits();
    if n < min || n > max {
        return Err(Error::QubitCount { n, min, max });
    }
    Ok(())
}

/// The qubits other than `pivot`, ascending.
pub fn partners(n_qubits: usize, pivot: usize) -> Vec<usize> {
    (0..n_qubits).filter(|&q| q != pivot).collect()
}

/// `M` of the `pivot | rest` cut of a pure state, `2 - |a|²` with `a` the
/// pivot's Bloch vector.
pub fn m_bipartition(s: &PureState, pivot: usize) -> Result<f64> {
    check_qubit(s, pivot)?;
    require_qubits(s, 2, crate::qmath::MAX_QUBITS)?;
    let a = s.bloch_vector(pivot)?;
    Ok(2.0 - crate::states::norm_sq(&a))
}

/// Pure-state concurrence `√(2(1 - Tr ρ_side²))` across `side | rest`.
pub fn concurrence_pure_cut(s: &PureState, side: &[usize]) -> Result<f64> {
    Ok(concurrence_pure_cut_sq(s, side)?.sqrt())
}

/// Squared pure-state concurrence across `side | rest`.
pub fn concurrence_pure_cut_sq(s: &PureState, side: &[usize]) -> Result<f64> {
    if side.is_empty() || side.len() >= s.n_qubits() {
        return Err(Error::InvalidSubset(format!(
            "{side:?} is not a nonempty proper subset of {} qubits",
            s.n_qubits()
        )));
    }
    let rho = s.reduced(side)?;
    let purity: f64 = rho.as_slice().iter().map(|z| z.norm_sqr()).sum();
    Ok((2.0 * (1.0 - purity)).max(0.0))
}

/// Two-qubit concurrence `max(0, λ1 - λ2 - λ3 - λ4)`.
///
/// With `ρ = WW†` (columns of `W` are `√p_k |v_k>` for the eigenpairs of `ρ`
/// above [`RANK_CUTOFF`]), the nonzero eigenvalues of `ρρ̃` are the squared
/// singular values of the complex-symmetric `K = Wᵀ(σ2⊗σ2)W`. Taking the
/// singular values of `K` directly keeps vanishing `λ_i` at roundoff level.
pub fn concurrence_wootters(rho: &ComplexMatrix) -> Result<WoottersData> {
    check_two_qubit_density(rho)?;
    let eig = eigh_hermitian(rho)?;
    if let Some(&low) = eig.values.first() {
        clamp_nonnegative(low)?;
    }
    let kept: Vec<usize> = (0..4).filter(|&k| eig.values[k] > RANK_CUTOFF).collect();
    let w = ComplexMatrix::from_fn(4, kept.len(), |r, c| {
        let k = kept[c];
        eig.vectors[(r, k)] * eig.values[k].sqrt()
    });
    let sy = &paulis()[1];
    let yy = kron(sy, sy);
    let wt = ComplexMatrix::from_fn(kept.len(), 4, |r, c| w[(c, r)]);
    let k_mat = &(&wt * &yy) * &w;
    let sv = singular_values(&k_mat)?;

    let mut lambda = [0.0; 4];
    for (dst, src) in lambda.iter_mut().zip(sv) {
        *dst = src;
    }
    let trace_rho_tilde = lambda.iter().map(|x| x * x).sum();
    let concurrence = (lambda[0] - lambda[1] - lambda[2] - lambda[3]).max(0.0);
    Ok(WoottersData {
        lambda,
        concurrence,
        trace_rho_tilde,
    })
}

/// Spin-flipped state `(σ2⊗σ2) ρ* (σ2⊗σ2)`.
pub fn spin_flip(rho: &ComplexMatrix) -> ComplexMatrix {
    let sy = &paulis()[1];
    let yy = kron(sy, sy);
    &(&yy * &rho.conj()) * &yy
}

/// CKW tangle `C²_{pivot|rest} - C²_{pivot,x} - C²_{pivot,y}` of a three-qubit
/// pure state, clamped into `[0, 1]` after a `≥ -1e-9` sanity check.
pub fn tangle(s: &PureState, pivot: usize) -> Result<f64> {
    require_qubits(s, 3, 3)?;
    check_qubit(s, pivot)?;
    let cut = concurrence_pure_cut_sq(s, &[pivot])?;
    let mut pairs = 0.0;
    for q in partners(3, pivot) {
        pairs += concurrence_wootters(&s.reduced(&[pivot, q])?)?.concurrence.powi(2);
    }
    clamp_tangle(cut - pairs)
}

pub(crate) fn clamp_tangle(tau: f64) -> Result<f64> {
    if tau < -1e-9 {
        return Err(Error::Numerical(format!("tangle {tau:e} is negative")));
    }
    Ok(tau.clamp(0.0, 1.0))
}

/// Residual nonlocality `M_{pivot|rest} - M_{pivot,x} M_{pivot,y}`.
pub fn residual_nonlocality(s: &PureState, pivot: usize) -> Result<f64> {
    require_qubits(s, 3, 3)?;
    check_qubit(s, pivot)?;
    let cut = m_bipartition(s, pivot)?;
    let mut product = 1.0;
    for q in partners(3, pivot) {
        product *= horodecki(&s.reduced(&[pivot, q])?)?.m;
    }
    Ok(cut - product)
}

/// `2√(ξ1ζ1 + ξ2ζ2)` where `ξ`, `ζ` are the two largest eigenvalues of the
/// `U` matrices of the two pairs.
pub fn biloc_value(rho_ab: &ComplexMatrix, rho_ac: &ComplexMatrix) -> Result<f64> {
    let xi = horodecki(rho_ab)?;
    let zeta = horodecki(rho_ac)?;
    Ok(biloc_from(&xi, &zeta))
}

pub(crate) fn biloc_from(xi: &HorodeckiData, zeta: &HorodeckiData) -> f64 {
    2.0 * (xi.mu * zeta.mu + xi.mu_tilde * zeta.mu_tilde).sqrt()
}
