//! Registry of monogamy inequalities, each evaluated to an [`InequalityReport`].
//!
//! All quantities for one pivot qubit are gathered once in a [`PivotProfile`];
//! every evaluator is then a cheap function of that profile.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::correlations::{
    biloc_from, clamp_tangle, concurrence_pure_cut_sq, concurrence_wootters, horodecki, m_bipartition, partners,
    require_qubits, HorodeckiData, WoottersData,
};
use crate::error::{Error, Result};
use crate::qmath::MAX_QUBITS;
use crate::states::{from_acin, local_vectors, norm_sq, AcinParams, PureState};

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InequalityId {
    /// `⟨B_AB⟩² + ⟨B_AC⟩² ≤ 8`.
    Eq4,
    /// `√(M_AB M_AC) ≤ 1`.
    Eq6,
    /// `√(M_AB M_AC) ≤ M_{A|BC}`.
    Eq7,
    /// `M_AB M_AC ≤ M_{A|BC} / (1 + C²_{A|BC})`.
    Thm8,
    /// `Σ_i M_{A B_i} ≤ n - 1`.
    Eq12,
    /// `(Π_i M_{A B_i})^{1/(n-1)} ≤ 1`.
    Eq13,
    /// `(Π_i M_{A B_i})^{1/(n-1)} ≤ M_{A|rest}`.
    Eq14,
    /// `2√(C²_AB C²_AC + τ²/4) ≤ C²_{A|BC}`.
    Eq15,
    /// `(Π_i C_{A B_i})^{1/(n-1)} ≤ C_{A|rest} / √(n-1)`.
    Eq16,
    /// `C²_AB + C²_AC ≤ C²_{A|BC}`.
    Ckw,
    /// `max(M_AB, M_AC, M_BC) + τ ≤ 2`.
    Compl,
    /// `S_biloc ≤ 2√(M_AB M_AC)`.
    BilocBound,
}

impl InequalityId {
    pub const ALL: [InequalityId; 12] = [
        InequalityId::Eq4,
        InequalityId::Eq6,
        InequalityId::Eq7,
        InequalityId::Thm8,
        InequalityId::Eq12,
        InequalityId::Eq13,
        InequalityId::Eq14,
        InequalityId::Eq15,
        InequalityId::Eq16,
        InequalityId::Ckw,
        InequalityId::Compl,
        InequalityId::BilocBound,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InequalityId::Eq4 => "eq4",
            InequalityId::Eq6 => "eq6",
            InequalityId::Eq7 => "eq7",
            InequalityId::Thm8 => "thm8",
            InequalityId::Eq12 => "eq12",
            InequalityId::Eq13 => "eq13",
            InequalityId::Eq14 => "eq14",
            InequalityId::Eq15 => "eq15",
            InequalityId::Eq16 => "eq16",
            InequalityId::Ckw => "ckw",
            InequalityId::Compl => "compl",
            InequalityId::BilocBound => "biloc_bound",
        }
    }

    /// True for the relations that only make sense for three qubits.
    pub fn three_qubit_only(self) -> bool {
        !matches!(
            self,
            InequalityId::Eq12 | InequalityId::Eq13 | InequalityId::Eq14 | InequalityId::Eq16
        )
    }

    pub fn supports(self, n_qubits: usize) -> bool {
        if self.three_qubit_only() {
            n_qubits == 3
        } else {
            (3..=MAX_QUBITS).contains(&n_qubits)
        }
    }

    /// Every registered id valid for `n_qubits`.
    pub fn all_for(n_qubits: usize) -> Vec<InequalityId> {
        Self::ALL.into_iter().filter(|id| id.supports(n_qubits)).collect()
    }

    /// Parses a comma-separated list, or `all` for every id valid at `n_qubits`.
    pub fn parse_list(s: &str, n_qubits: usize) -> Result<Vec<InequalityId>> {
        if s.trim().eq_ignore_ascii_case("all") {
            return Ok(Self::all_for(n_qubits));
        }
        let mut ids = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let id: InequalityId = part.parse()?;
            if !ids.contains(&id) {
                ids.push(id);
            }
        }
        if ids.is_empty() {
            return Err(Error::InvalidConfig("empty inequality list".into()));
        }
        Ok(ids)
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InequalityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownInequality(s.to_string()))
    }
}

impl Serialize for InequalityId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// Upper-case letter for a qubit index (`0 -> 'A'`).
pub fn qubit_label(q: usize) -> char {
    (b'A' + q as u8) as char
}

/// Parses `A`/`b`/`2`-style qubit names.
pub fn parse_qubit(s: &str, n_qubits: usize) -> Result<usize> {
    let s = s.trim();
    let q = if let Ok(i) = s.parse::<usize>() {
        i
    } else {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) if c.is_ascii_alphabetic() => (c.to_ascii_uppercase() as u8 - b'A') as usize,
            _ => return Err(Error::InvalidParameter(format!("cannot parse qubit `{s}`"))),
        }
    };
    if q >= n_qubits {
        return Err(Error::QubitOutOfRange { index: q, n_qubits });
    }
    Ok(q)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub name: InequalityId,
    pub pivot: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub holds: bool,
}

impl InequalityReport {
    /// `margin = rhs - lhs`, `holds = margin ≥ -tol`.
    pub fn new(name: InequalityId, pivot: usize, lhs: f64, rhs: f64, tol: f64) -> Self {
        let margin = rhs - lhs;
        Self {
            name,
            pivot,
            lhs,
            rhs,
            margin,
            holds: margin >= -tol,
        }
    }
}

/// Every quantity the registry needs for one pivot qubit.
#[derive(Debug, Clone)]
pub struct PivotProfile {
    pub n_qubits: usize,
    pub pivot: usize,
    pub partners: Vec<usize>,
    pub pair_horodecki: Vec<HorodeckiData>,
    pub pair_wootters: Vec<WoottersData>,
    /// `M` of the `pivot | rest` cut.
    pub m_cut: f64,
    /// `C²` of the `pivot | rest` cut.
    pub concurrence_cut_sq: f64,
    /// Three qubits only: `M` of the pair that excludes the pivot.
    pub m_opposite: Option<f64>,
}

impl PivotProfile {
    pub fn new(s: &PureState, pivot: usize) -> Result<Self> {
        require_qubits(s, 3, MAX_QUBITS)?;
        let n = s.n_qubits();
        if pivot >= n {
            return Err(Error::QubitOutOfRange {
                index: pivot,
                n_qubits: n,
            });
        }
        let partners = partners(n, pivot);
        let mut pair_horodecki = Vec::with_capacity(partners.len());
        let mut pair_wootters = Vec::with_capacity(partners.len());
        for &q in &partners {
            let rho = s.reduced(&[pivot, q])?;
            pair_horodecki.push(horodecki(&rho)?);
            pair_wootters.push(concurrence_wootters(&rho)?);
        }
        let m_opposite = if n == 3 {
            Some(horodecki(&s.reduced(&partners)?)?.m)
        } else {
            None
        };
        Ok(Self {
            n_qubits: n,
            pivot,
            m_cut: m_bipartition(s, pivot)?,
            concurrence_cut_sq: concurrence_pure_cut_sq(s, &[pivot])?,
            partners,
            pair_horodecki,
            pair_wootters,
            m_opposite,
        })
    }

    pub fn pair_m(&self) -> impl Iterator<Item = f64> + '_ {
        self.pair_horodecki.iter().map(|h| h.m)
    }

    pub fn pair_concurrence(&self) -> impl Iterator<Item = f64> + '_ {
        self.pair_wootters.iter().map(|w| w.concurrence)
    }

    fn product_m(&self) -> f64 {
        self.pair_m().product()
    }

    fn geometric_mean(values: impl Iterator<Item = f64>, count: usize) -> f64 {
        values.product::<f64>().powf(1.0 / count as f64)
    }

    fn require_three(&self, id: InequalityId) -> Result<()> {
        if self.n_qubits != 3 {
            return Err(Error::InvalidConfig(format!(
                "{id} is defined for three qubits, state has {}",
                self.n_qubits
            )));
        }
        Ok(())
    }

    /// CKW tangle for three qubits.
    pub fn tangle(&self) -> Result<f64> {
        self.require_three(InequalityId::Compl)?;
        let pairs: f64 = self.pair_concurrence().map(|c| c * c).sum();
        clamp_tangle(self.concurrence_cut_sq - pairs)
    }

    pub fn residual_nonlocality(&self) -> Result<f64> {
        self.require_three(InequalityId::Eq7)?;
        Ok(self.m_cut - self.product_m())
    }

    pub fn biloc(&self) -> Result<f64> {
        self.require_three(InequalityId::BilocBound)?;
        Ok(biloc_from(&self.pair_horodecki[0], &self.pair_horodecki[1]))
    }

    pub fn evaluate(&self, id: InequalityId, tol: f64) -> Result<InequalityReport> {
        if !id.supports(self.n_qubits) {
            return Err(Error::InvalidConfig(format!(
                "{id} is not defined for {} qubits",
                self.n_qubits
            )));
        }
        let n = self.n_qubits;
        let k = n - 1;
        let (lhs, rhs) = match id {
            InequalityId::Eq4 => (4.0 * self.pair_m().sum::<f64>(), 8.0),
            InequalityId::Eq6 => (self.product_m().sqrt(), 1.0),
            InequalityId::Eq7 => (self.product_m().sqrt(), self.m_cut),
            InequalityId::Thm8 => (self.product_m(), self.m_cut / (1.0 + self.concurrence_cut_sq)),
            InequalityId::Eq12 => (self.pair_m().sum(), k as f64),
            InequalityId::Eq13 => (Self::geometric_mean(self.pair_m(), k), 1.0),
            InequalityId::Eq14 => (Self::geometric_mean(self.pair_m(), k), self.m_cut),
            InequalityId::Eq15 => {
                let c2: Vec<f64> = self.pair_concurrence().map(|c| c * c).collect();
                let tau = self.tangle()?;
                (2.0 * (c2[0] * c2[1] + tau * tau / 4.0).sqrt(), self.concurrence_cut_sq)
            }
            InequalityId::Eq16 => (
                Self::geometric_mean(self.pair_concurrence(), k),
                self.concurrence_cut_sq.sqrt() / (k as f64).sqrt(),
            ),
            InequalityId::Ckw => (self.pair_concurrence().map(|c| c * c).sum(), self.concurrence_cut_sq),
            InequalityId::Compl => {
                let max_m = self.pair_m().chain(self.m_opposite).fold(f64::NEG_INFINITY, f64::max);
                (max_m + self.tangle()?, 2.0)
            }
            InequalityId::BilocBound => (self.biloc()?, 2.0 * self.product_m().sqrt()),
        };
        Ok(InequalityReport::new(id, self.pivot, lhs, rhs, tol))
    }
}

/// Evaluates one registered inequality at `pivot` with tolerance `tol`.
pub fn evaluate(id: InequalityId, s: &PureState, pivot: usize, tol: f64) -> Result<InequalityReport> {
    PivotProfile::new(s, pivot)?.evaluate(id, tol)
}

fn eval_three(id: InequalityId, s: &PureState, pivot: usize) -> Result<InequalityReport> {
    require_qubits(s, 3, 3)?;
    evaluate(id, s, pivot, DEFAULT_TOL)
}

fn eval_n(id: InequalityId, s: &PureState, pivot: usize) -> Result<InequalityReport> {
    require_qubits(s, 3, MAX_QUBITS)?;
    evaluate(id, s, pivot, DEFAULT_TOL)
}

pub fn eq4_chsh_sum(s: &PureState, pivot: usize) -> Result<InequalityReport> {
    eval_three(InequalityId::Eq4, s, pivot)
}

pub fn eq6_product(s: &PureState, pivot: usize) -> Result<InequalityReport> {
    eval_three(InequalityId::Eq6, s, pivot)
}

pub fn eq7_product_vs_cut(s: &PureState, pivot: usize) -> Result<InequalityReport> {
    eval_three(InequalityId::Eq7, s, pivot)
}

pub fn thm8_tightened(s: &PureState, pivot: usize) -> Result<InequalityReport> {
    eval_three(InequalityId::Thm8, s, pivot)
}

pub fn eq12_nqubit_sum(s: &PureState, pivot: usize) -> Result<InequalityReport> {
    eval_n(InequalityId::Eq12, s, pivot)
}

/// The AM-GM bound and the cut bound on the geometric mean of pair `M` values.
pub fn eq13_eq14_nqubit_product(s: &PureState, pivot: usize) -> Result<(InequalityReport, InequalityReport)> {
    require_qubits(s, 3, MAX_QUBITS)?;
    let profile = PivotProfile::new(s, pivot)?;
    Ok((
        profile.evaluate(InequalityId::Eq13, DEFAULT_TOL)?,
        profile.evaluate(InequalityId::Eq14, DEFAULT_TOL)?,
    ))
}

pub fn eq15_concurrence_product(s: &PureState, pivot: usize) -> Result<InequalityReport> {
    eval_three(InequalityId::Eq15, s, pivot)
}

pub fn eq16_generic_product(s: &PureState, pivot: usize) -> Result<InequalityReport> {
    eval_n(InequalityId::Eq16, s, pivot)
}

pub fn ckw(s: &PureState, pivot: usize) -> Result<InequalityReport> {
    eval_three(InequalityId::Ckw, s, pivot)
}

/// Complementarity of pairwise nonlocality and tangle, evaluated at pivot A.
pub fn complementarity(s: &PureState) -> Result<InequalityReport> {
    eval_three(InequalityId::Compl, s, 0)
}

pub fn biloc_bound(s: &PureState, pivot: usize) -> Result<InequalityReport> {
    eval_three(InequalityId::BilocBound, s, pivot)
}

/// `(⟨B_AB⟩^α + ⟨B_AC⟩^α, ⟨B_{A|BC}⟩^α)` for the summation form of CHSH
/// monogamy.
///
/// Not a valid monogamy relation (`|000>` gives `8 > 4` at `α = 2`), so it is
/// kept outside the registry.
pub fn chsh_power_sum(s: &PureState, pivot: usize, alpha: f64) -> Result<(f64, f64)> {
    require_qubits(s, 3, 3)?;
    let profile = PivotProfile::new(s, pivot)?;
    let lhs = profile.pair_horodecki.iter().map(|h| h.chsh().powf(alpha)).sum();
    let rhs = (2.0 * profile.m_cut.sqrt()).powf(alpha);
    Ok((lhs, rhs))
}

/// Absolute deviations of the three identities behind the tightened
/// product bound, each side from an independent computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProofIdentities {
    /// `|M_AB - (1 + s3_AB - s3_AC - s3_BC)|`.
    pub m_ab: f64,
    /// `|M_AB M_AC - ((1 - s3_BC)² - (s3_AB - s3_AC)²)|`.
    pub product: f64,
    /// `|(s3_AB - s3_AC) - (|c|² - |b|²)|`, with `b`, `c` in closed form.
    pub s3_difference: f64,
}

impl ProofIdentities {
    pub fn max(&self) -> f64 {
        self.m_ab.max(self.product).max(self.s3_difference)
    }
}

pub fn thm8_proof_identities(p: &AcinParams) -> Result<ProofIdentities> {
    let s = from_acin(p)?;
    let ab = horodecki(&s.reduced(&[0, 1])?)?;
    let ac = horodecki(&s.reduced(&[0, 2])?)?;
    let bc = horodecki(&s.reduced(&[1, 2])?)?;
    let v = local_vectors(p);
    Ok(ProofIdentities {
        m_ab: (ab.m - (1.0 + ab.s3 - ac.s3 - bc.s3)).abs(),
        product: (ab.m * ac.m - ((1.0 - bc.s3).powi(2) - (ab.s3 - ac.s3).powi(2))).abs(),
        s3_difference: ((ab.s3 - ac.s3) - (norm_sq(&v.c) - norm_sq(&v.b))).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{named_state, NamedState};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn st(n: NamedState) -> PureState {
        named_state(n).unwrap()
    }

    fn close(r: &InequalityReport, lhs: f64, rhs: f64) {
        assert!((r.lhs - lhs).abs() < 1e-12, "{r:?} lhs want {lhs}");
        assert!((r.rhs - rhs).abs() < 1e-12, "{r:?} rhs want {rhs}");
        assert!(r.holds);
    }

    #[test]
    fn ids_round_trip_through_strings() {
        for id in InequalityId::ALL {
            assert_eq!(id.as_str().parse::<InequalityId>().unwrap(), id);
        }
        assert!(matches!(
            "bogus".parse::<InequalityId>(),
            Err(Error::UnknownInequality(_))
        ));
        assert_eq!(InequalityId::parse_list("all", 3).unwrap().len(), 12);
        assert_eq!(
            InequalityId::parse_list("all", 4).unwrap(),
            vec![
                InequalityId::Eq12,
                InequalityId::Eq13,
                InequalityId::Eq14,
                InequalityId::Eq16
            ]
        );
        assert_eq!(
            InequalityId::parse_list("eq6, thm8", 3).unwrap(),
            vec![InequalityId::Eq6, InequalityId::Thm8]
        );
    }

    #[test]
    fn qubit_names() {
        assert_eq!(parse_qubit("A", 3).unwrap(), 0);
        assert_eq!(parse_qubit("c", 3).unwrap(), 2);
        assert_eq!(parse_qubit("1", 3).unwrap(), 1);
        assert!(parse_qubit("D", 3).is_err());
        assert!(parse_qubit("AB", 3).is_err());
        assert_eq!(qubit_label(2), 'C');
    }

    #[test]
    fn eq4_named() {
        let r = eq4_chsh_sum(&st(NamedState::Zero), 0).unwrap();
        close(&r, 8.0, 8.0);
        assert_eq!(r.margin, 0.0);
        close(&eq4_chsh_sum(&st(NamedState::Ghz), 0).unwrap(), 8.0, 8.0);
        let w = eq4_chsh_sum(&st(NamedState::W), 0).unwrap();
        close(&w, 64.0 / 9.0, 8.0);
        assert!((w.margin - 8.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn eq6_eq7_named() {
        close(&eq6_product(&st(NamedState::Ghz), 0).unwrap(), 1.0, 1.0);
        close(&eq6_product(&st(NamedState::W), 0).unwrap(), 8.0 / 9.0, 1.0);
        close(&eq6_product(&st(NamedState::Zero), 0).unwrap(), 1.0, 1.0);
        close(&eq7_product_vs_cut(&st(NamedState::Ghz), 0).unwrap(), 1.0, 2.0);
        close(&eq7_product_vs_cut(&st(NamedState::Zero), 0).unwrap(), 1.0, 1.0);
        let w = eq7_product_vs_cut(&st(NamedState::W), 0).unwrap();
        close(&w, 8.0 / 9.0, 17.0 / 9.0);
        assert!((w.margin - 1.0).abs() < 1e-12);
    }

    #[test]
    fn thm8_named() {
        close(&thm8_tightened(&st(NamedState::Ghz), 0).unwrap(), 1.0, 1.0);
        close(&thm8_tightened(&st(NamedState::Zero), 0).unwrap(), 1.0, 1.0);
        let w = thm8_tightened(&st(NamedState::W), 0).unwrap();
        close(&w, 64.0 / 81.0, 1.0);
        assert!((w.margin - 17.0 / 81.0).abs() < 1e-12);
    }

    #[test]
    fn proof_identities_named() {
        let h = FRAC_1_SQRT_2;
        for l in [[h, 0.0, 0.0, 0.0, h], [1.0, 0.0, 0.0, 0.0, 0.0]] {
            let d = thm8_proof_identities(&AcinParams::new(l, 0.0).unwrap()).unwrap();
            assert!(d.max() < 1e-10, "{d:?}");
        }
    }

    #[test]
    fn n_qubit_named() {
        close(&eq12_nqubit_sum(&st(NamedState::Ghz), 0).unwrap(), 2.0, 2.0);
        let ghz4 = PureState::ghz(4).unwrap();
        close(&eq12_nqubit_sum(&ghz4, 0).unwrap(), 3.0, 3.0);
        let zero4 = PureState::basis(4, 0).unwrap();
        close(&eq12_nqubit_sum(&zero4, 0).unwrap(), 3.0, 3.0);
        let (r13, r14) = eq13_eq14_nqubit_product(&ghz4, 0).unwrap();
        close(&r13, 1.0, 1.0);
        close(&r14, 1.0, 2.0);
        let (z13, z14) = eq13_eq14_nqubit_product(&zero4, 0).unwrap();
        close(&z13, 1.0, 1.0);
        close(&z14, 1.0, 1.0);
        assert!(eq12_nqubit_sum(&PureState::basis(2, 0).unwrap(), 0).is_err());
        assert!(eq4_chsh_sum(&ghz4, 0).is_err());
    }

    #[test]
    fn concurrence_relations_named() {
        close(&eq15_concurrence_product(&st(NamedState::Ghz), 0).unwrap(), 1.0, 1.0);
        close(
            &eq15_concurrence_product(&st(NamedState::W), 0).unwrap(),
            8.0 / 9.0,
            8.0 / 9.0,
        );
        close(&eq15_concurrence_product(&st(NamedState::Zero), 0).unwrap(), 0.0, 0.0);

        close(
            &eq16_generic_product(&st(NamedState::W), 0).unwrap(),
            2.0 / 3.0,
            2.0 / 3.0,
        );
        close(
            &eq16_generic_product(&st(NamedState::Ghz), 0).unwrap(),
            0.0,
            FRAC_1_SQRT_2,
        );
        close(&eq16_generic_product(&st(NamedState::Zero), 0).unwrap(), 0.0, 0.0);

        close(&ckw(&st(NamedState::Ghz), 0).unwrap(), 0.0, 1.0);
        close(&ckw(&st(NamedState::W), 0).unwrap(), 8.0 / 9.0, 8.0 / 9.0);
        close(&ckw(&st(NamedState::Zero), 0).unwrap(), 0.0, 0.0);
    }

    #[test]
    fn complementarity_named() {
        close(&complementarity(&st(NamedState::Ghz)).unwrap(), 2.0, 2.0);
        let w = complementarity(&st(NamedState::W)).unwrap();
        close(&w, 8.0 / 9.0, 2.0);
        assert!((w.margin - 10.0 / 9.0).abs() < 1e-12);
        close(&complementarity(&st(NamedState::Zero)).unwrap(), 1.0, 2.0);
    }

    #[test]
    fn biloc_bound_named() {
        close(&biloc_bound(&st(NamedState::Ghz), 0).unwrap(), 2.0, 2.0);
        close(
            &biloc_bound(&st(NamedState::W), 0).unwrap(),
            8.0 * 2f64.sqrt() / 9.0,
            16.0 / 9.0,
        );
    }

    #[test]
    fn chsh_summation_fails_at_product_state() {
        let (lhs, rhs) = chsh_power_sum(&st(NamedState::Zero), 0, 2.0).unwrap();
        assert!((lhs - 8.0).abs() < 1e-14 && (rhs - 4.0).abs() < 1e-14);
    }

    #[test]
    fn report_margin_and_tolerance() {
        let r = InequalityReport::new(InequalityId::Eq6, 0, 1.0 + 5e-10, 1.0, DEFAULT_TOL);
        assert!(r.holds);
        let r = InequalityReport::new(InequalityId::Eq6, 0, 1.0 + 5e-9, 1.0, DEFAULT_TOL);
        assert!(!r.holds);
    }
}
