//! Pure states: construction, sampling, Schmidt data and marginal Bloch vectors.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{eigh_hermitian, qubit_count, validate_subset, ComplexMatrix, SeededRng, SplitIndex, MAX_QUBITS};

/// Tolerance on `|Σ|ψ_i|² - 1|` for states built in code.
pub const NORM_TOL: f64 = 1e-12;
/// Largest norm deviation a state file may carry; smaller ones are renormalized.
pub const FILE_NORM_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Wraps amplitudes that are already normalized to within [`NORM_TOL`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::with_tolerance(amplitudes, NORM_TOL, false)
    }

    /// Accepts norm deviations up to [`FILE_NORM_TOL`] and renormalizes.
    pub fn new_renormalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::with_tolerance(amplitudes, FILE_NORM_TOL, true)
    }

    fn with_tolerance(mut amplitudes: Vec<Complex64>, tol: f64, renormalize: bool) -> Result<Self> {
        let n_qubits = qubit_count(amplitudes.len())?;
        if !(1..=MAX_QUBITS).contains(&n_qubits) {
            return Err(Error::QubitCount {
                n: n_qubits,
                min: 1,
                max: MAX_QUBITS,
            });
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite amplitude".into()));
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        let dev = (norm_sq - 1.0).abs();
        if dev > tol {
            return Err(Error::Unnormalized(dev));
        }
        if renormalize {
            let norm = norm_sq.sqrt();
            for z in &mut amplitudes {
                *z /= norm;
            }
        }
        Ok(Self { n_qubits, amplitudes })
    }

    /// Computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let mut v = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        *v.get_mut(index)
            .ok_or_else(|| Error::InvalidParameter(format!("basis index {index} out of range")))? =
            Complex64::new(1.0, 0.0);
        Self::new(v)
    }

    /// `(|0…0> + |1…1>)/√2` on `n_qubits` qubits.
    pub fn ghz(n_qubits: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        v[dim - 1] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self::new(v)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn density(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes)
    }

    /// Reduced density matrix on `keep`, straight from the amplitudes.
    pub fn reduced(&self, keep: &[usize]) -> Result<ComplexMatrix> {
        validate_subset(keep, self.n_qubits)?;
        let split = SplitIndex::new(self.n_qubits, keep);
        let kd = split.kept_dim();
        let psi = &self.amplitudes;
        let mut out = ComplexMatrix::zeros(kd, kd);
        for t in 0..split.traced_dim() {
            for r in 0..kd {
                let a = psi[split.compose(r, t)];
                for c in 0..kd {
                    out[(r, c)] += a * psi[split.compose(c, t)].conj();
                }
            }
        }
        Ok(out)
    }

    /// Bloch vector `(⟨σ1⟩, ⟨σ2⟩, ⟨σ3⟩)` of one qubit's marginal.
    pub fn bloch_vector(&self, qubit: usize) -> Result<[f64; 3]> {
        let r = self.reduced(&[qubit])?;
        Ok([2.0 * r[(0, 1)].re, -2.0 * r[(0, 1)].im, r[(0, 0)].re - r[(1, 1)].re])
    }

    /// Largest entrywise amplitude difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Canonical five-term parametrization of a three-qubit pure state:
/// `l0|000> + l1 e^{iφ}|100> + l2|101> + l3|110> + l4|111>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcinParams {
    pub l: [f64; 5],
    pub phi: f64,
}

impl AcinParams {
    /// Validates `l_j ≥ 0`, `Σ l_j² = 1` and reduces `phi` into `[0, 2π)`.
    pub fn new(l: [f64; 5], phi: f64) -> Result<Self> {
        if l.iter().any(|x| !x.is_finite() || *x < 0.0) || !phi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "coefficients must be finite and non-negative: {l:?}, phi = {phi}"
            )));
        }
        let norm_sq: f64 = l.iter().map(|x| x * x).sum();
        let dev = (norm_sq - 1.0).abs();
        if dev > NORM_TOL {
            return Err(Error::Unnormalized(dev));
        }
        Ok(Self {
            l,
            phi: phi.rem_euclid(TAU),
        })
    }

    /// Maps six unconstrained reals onto the chart: `l = |x[..5]| / ‖x[..5]‖`,
    /// `phi = x[5] mod 2π`. The zero vector maps to `|000>`.
    pub fn from_unconstrained(x: &[f64; 6]) -> Self {
        let norm = x[..5].iter().map(|v| v * v).sum::<f64>().sqrt();
        let l = if norm > 0.0 && norm.is_finite() {
            [0, 1, 2, 3, 4].map(|i| x[i].abs() / norm)
        } else {
            [1.0, 0.0, 0.0, 0.0, 0.0]
        };
        let phi = if x[5].is_finite() { x[5].rem_euclid(TAU) } else { 0.0 };
        Self { l, phi }
    }
}

pub fn from_acin(p: &AcinParams) -> Result<PureState> {
    let p = AcinParams::new(p.l, p.phi)?;
    let [l0, l1, l2, l3, l4] = p.l;
    let mut v = vec![Complex64::new(0.0, 0.0); 8];
    v[0] = Complex64::new(l0, 0.0);
    v[4] = Complex64::from_polar(l1, p.phi);
    v[5] = Complex64::new(l2, 0.0);
    v[6] = Complex64::new(l3, 0.0);
    v[7] = Complex64::new(l4, 0.0);
    PureState::new(v)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NamedState {
    Zero,
    Ghz,
    W,
    /// `α|000> + √(1-α²)|111>` with `0 ≤ α ≤ 1`.
    GhzAlpha(f64),
}

impl fmt::Display for NamedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedState::Zero => write!(f, "zero"),
            NamedState::Ghz => write!(f, "ghz"),
            NamedState::W => write!(f, "w"),
            NamedState::GhzAlpha(a) => write!(f, "ghz_alpha:{a}"),
        }
    }
}

impl FromStr for NamedState {
    type Err = Error;

    /// Accepts `zero`, `ghz`, `w` and `ghz_alpha:<α>` (or `ghz_alpha(<α>)`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "zero" | "000" => return Ok(NamedState::Zero),
            "ghz" => return Ok(NamedState::Ghz),
            "w" => return Ok(NamedState::W),
            _ => {}
        }
        let arg = s
            .strip_prefix("ghz_alpha:")
            .or_else(|| s.strip_prefix("ghz_alpha(").and_then(|r| r.strip_suffix(')')))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown named state `{s}`")))?;
        let alpha: f64 = arg
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("cannot parse alpha `{arg}`")))?;
        Ok(NamedState::GhzAlpha(alpha))
    }
}

pub fn named_state(name: NamedState) -> Result<PureState> {
    let mut v = vec![Complex64::new(0.0, 0.0); 8];
    match name {
        NamedState::Zero => v[0] = Complex64::new(1.0, 0.0),
        NamedState::Ghz => return PureState::ghz(3),
        NamedState::W => {
            let s = 1.0 / 3f64.sqrt();
            for i in [1, 2, 4] {
                v[i] = Complex64::new(s, 0.0);
            }
        }
        NamedState::GhzAlpha(alpha) => {
            if !(0.0..=1.0).contains(&alpha) {
                return Err(Error::InvalidParameter(format!("alpha = {alpha} outside [0, 1]")));
            }
            v[0] = Complex64::new(alpha, 0.0);
            v[7] = Complex64::new((1.0 - alpha * alpha).max(0.0).sqrt(), 0.0);
        }
    }
    PureState::new(v)
}

/// Uniform on the positive orthant of the unit 4-sphere, `phi` uniform on `[0, 2π)`.
pub fn sample_acin(rng: &mut SeededRng) -> AcinParams {
    loop {
        let g = [0; 5].map(|_| rng.standard_normal().abs());
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        let phi = TAU * rng.uniform();
        if norm > 0.0 {
            return AcinParams {
                l: g.map(|x| x / norm),
                phi,
            };
        }
    }
}

/// Schmidt coefficients of a one-qubit-versus-rest cut, `c1 ≥ c2 ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchmidtData {
    pub c1: f64,
    pub c2: f64,
}

/// Schmidt coefficients across `qubit | rest`.
pub fn schmidt_cut(s: &PureState, qubit: usize) -> Result<SchmidtData> {
    if s.n_qubits() < 2 {
        return Err(Error::QubitCount {
            n: s.n_qubits(),
            min: 2,
            max: MAX_QUBITS,
        });
    }
    let eig = eigh_hermitian(&s.reduced(&[qubit])?)?;
    Ok(SchmidtData {
        c1: eig.values[1].max(0.0).sqrt(),
        c2: eig.values[0].max(0.0).sqrt(),
    })
}

pub fn schmidt_a_rest(s: &PureState) -> Result<SchmidtData> {
    schmidt_cut(s, 0)
}

/// Marginal Bloch vectors of qubits A, B and C for a canonical-form state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalVectors {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub c: [f64; 3],
}

pub fn norm_sq(v: &[f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// Closed-form Bloch vectors of the three single-qubit marginals.
///
/// The first component of `c` pairs `l1 l2 cos φ` with `l3 l4`: the two
/// C-flip amplitude pairs are (`|100>`, `|101>`) and (`|110>`, `|111>`).
pub fn local_vectors(p: &AcinParams) -> LocalVectors {
    let [l0, l1, l2, l3, l4] = p.l;
    let (sin, cos) = p.phi.sin_cos();
    LocalVectors {
        a: [2.0 * l0 * l1 * cos, 2.0 * l0 * l1 * sin, 2.0 * l0 * l0 - 1.0],
        b: [
            2.0 * l1 * l3 * cos + 2.0 * l2 * l4,
            -2.0 * l1 * l3 * sin,
            1.0 - 2.0 * l3 * l3 - 2.0 * l4 * l4,
        ],
        c: [
            2.0 * l1 * l2 * cos + 2.0 * l3 * l4,
            -2.0 * l1 * l2 * sin,
            1.0 - 2.0 * l2 * l2 - 2.0 * l4 * l4,
        ],
    }
}

/// On-disk state document. Extra fields are ignored when reading.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub n_qubits: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state(s: &PureState) -> Self {
        Self {
            n_qubits: s.n_qubits(),
            amplitudes: s.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn into_state(self) -> Result<PureState> {
        let expected = 1usize
            .checked_shl(self.n_qubits as u32)
            .filter(|_| (1..=MAX_QUBITS).contains(&self.n_qubits))
            .ok_or_else(|| Error::StateFile(format!("n_qubits = {} outside 1..={MAX_QUBITS}", self.n_qubits)))?;
        if self.amplitudes.len() != expected {
            return Err(Error::StateFile(format!(
                "expected {expected} amplitudes for {} qubits, found {}",
                self.n_qubits,
                self.amplitudes.len()
            )));
        }
        let amps = self.amplitudes.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        PureState::new_renormalized(amps).map_err(|e| Error::StateFile(e.to_string()))
    }
}

/// Parses the JSON state document.
pub fn parse_state_file(text: &str) -> Result<PureState> {
    let doc: StateFile = serde_json::from_str(text)
        .map_err(|e| Error::StateFile(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    doc.into_state()
}
