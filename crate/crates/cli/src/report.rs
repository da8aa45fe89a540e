use std::fmt::Write as _;

use serde::Serialize;

use monogamy::campaign::format_sig17;
use monogamy::correlations::{concurrence_pure_cut, concurrence_wootters, horodecki, m_bipartition};
use monogamy::inequalities::{qubit_label, InequalityId, InequalityReport, PivotProfile, DEFAULT_TOL};
use monogamy::states::{schmidt_cut, PureState, StateFile};
use monogamy::Result;

#[derive(Debug, Clone, Serialize)]
pub struct PairQuantities {
    pub qubits: String,
    pub mu: f64,
    pub mu_tilde: f64,
    pub s3: f64,
    pub m: f64,
    pub chsh: f64,
    pub concurrence: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CutQuantities {
    pub qubit: char,
    pub m: f64,
    pub chsh: f64,
    pub concurrence: f64,
    pub schmidt: [f64; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct PivotQuantities {
    pub pivot: char,
    pub residual_nonlocality: f64,
    pub biloc: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComputeReport {
    pub n_qubits: usize,
    pub pivot: char,
    pub pairs: Vec<PairQuantities>,
    pub cuts: Vec<CutQuantities>,
    /// Three qubits only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tangle: Option<f64>,
    /// Three qubits only, one entry per pivot.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pivots: Vec<PivotQuantities>,
    pub inequalities: Vec<InequalityReport>,
    pub state: StateFile,
}

impl ComputeReport {
    pub fn pair(&self, a: usize, b: usize) -> Option<&PairQuantities> {
        let label: String = [qubit_label(a.min(b)), qubit_label(a.max(b))].iter().collect();
        self.pairs.iter().find(|p| p.qubits == label)
    }

    pub fn inequality(&self, id: InequalityId) -> Option<&InequalityReport> {
        self.inequalities.iter().find(|r| r.name == id)
    }

    pub fn residual(&self, pivot: usize) -> Option<f64> {
        self.pivots.get(pivot).map(|p| p.residual_nonlocality)
    }
}

/// Requires 3 to 6 qubits; relations without an n-qubit form are skipped
/// above three.
pub fn compute_report(s: &PureState, pivot: usize) -> Result<ComputeReport> {
    let n = s.n_qubits();
    let profile = PivotProfile::new(s, pivot)?;

    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let rho = s.reduced(&[a, b])?;
            let h = horodecki(&rho)?;
            pairs.push(PairQuantities {
                qubits: [qubit_label(a), qubit_label(b)].iter().collect(),
                mu: h.mu,
                mu_tilde: h.mu_tilde,
                s3: h.s3,
                m: h.m,
                chsh: h.chsh(),
                concurrence: concurrence_wootters(&rho)?.concurrence,
            });
        }
    }

    let cuts = (0..n)
        .map(|q| {
            let m = m_bipartition(s, q)?;
            let d = schmidt_cut(s, q)?;
            Ok(CutQuantities {
                qubit: qubit_label(q),
                m,
                chsh: 2.0 * m.sqrt(),
                concurrence: concurrence_pure_cut(s, &[q])?,
                schmidt: [d.c1, d.c2],
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let (tangle, pivots) = if n == 3 {
        let pivots = (0..3)
            .map(|q| {
                let p = PivotProfile::new(s, q)?;
                Ok(PivotQuantities {
                    pivot: qubit_label(q),
                    residual_nonlocality: p.residual_nonlocality()?,
                    biloc: p.biloc()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        (Some(profile.tangle()?), pivots)
    } else {
        (None, Vec::new())
    };

    let inequalities = InequalityId::all_for(n)
        .into_iter()
        .map(|id| profile.evaluate(id, DEFAULT_TOL))
        .collect::<Result<Vec<_>>>()?;

    Ok(ComputeReport {
        n_qubits: n,
        pivot: qubit_label(pivot),
        pairs,
        cuts,
        tangle,
        pivots,
        inequalities,
        state: StateFile::from_state(s),
    })
}

pub fn render_text(r: &ComputeReport) -> String {
    let f = format_sig17;
    let mut out = String::new();
    let _ = writeln!(out, "qubits: {}  pivot: {}", r.n_qubits, r.pivot);
    let _ = writeln!(out, "\npairs");
    for p in &r.pairs {
        let _ = writeln!(
            out,
            "  {}  M {}  CHSH {}  C {}  mu {}  mu~ {}  s3 {}",
            p.qubits,
            f(p.m),
            f(p.chsh),
            f(p.concurrence),
            f(p.mu),
            f(p.mu_tilde),
            f(p.s3)
        );
    }
    let _ = writeln!(out, "\ncuts (qubit | rest)");
    for c in &r.cuts {
        let _ = writeln!(
            out,
            "  {}  M {}  CHSH {}  C {}  schmidt {} {}",
            c.qubit,
            f(c.m),
            f(c.chsh),
            f(c.concurrence),
            f(c.schmidt[0]),
            f(c.schmidt[1])
        );
    }
    if let Some(t) = r.tangle {
        let _ = writeln!(out, "\ntangle {}", f(t));
        for p in &r.pivots {
            let _ = writeln!(
                out,
                "  pivot {}  residual {}  biloc {}",
                p.pivot,
                f(p.residual_nonlocality),
                f(p.biloc)
            );
        }
    }
    let _ = writeln!(out, "\ninequalities (pivot {})", r.pivot);
    for i in &r.inequalities {
        let _ = writeln!(
            out,
            "  {:<12} lhs {}  rhs {}  margin {}  {}",
            i.name.as_str(),
            f(i.lhs),
            f(i.rhs),
            f(i.margin),
            if i.holds { "holds" } else { "VIOLATED" }
        );
    }
    out
}
