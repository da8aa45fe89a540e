//! Seeded verification campaigns and extremal-state search.
//!
//! Sample `i` always draws from stream `i` of the campaign seed, and results
//! are merged by sample index, so output does not depend on thread count.

mod nelder_mead;
mod search;

use std::io::{self, Write};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

pub use nelder_mead::{minimize, Minimum, NelderMeadOptions};
pub use search::{search, Objective, SearchConfig, SearchResult, SearchStatus};

use crate::error::{Error, Result};
use crate::inequalities::{qubit_label, InequalityId, InequalityReport, PivotProfile, DEFAULT_TOL};
use crate::qmath::{haar_random_pure, SeededRng, MAX_QUBITS};
use crate::states::{from_acin, named_state, sample_acin, NamedState, PureState, StateFile};

#[derive(Debug, Clone, PartialEq)]
pub enum Sampler {
    Haar,
    Acin,
    /// Fixed list of three-qubit states; the sample count is the list length.
    Named(Vec<NamedState>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotPolicy {
    Fixed(usize),
    All,
}

#[derive(Debug, Clone)]
pub struct CampaignConfig {
    pub sampler: Sampler,
    pub n_samples: usize,
    pub n_qubits: usize,
    pub seed: u64,
    pub inequalities: Vec<InequalityId>,
    pub tolerance: f64,
    pub pivots: PivotPolicy,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl CampaignConfig {
    pub fn new(sampler: Sampler, n_samples: usize, seed: u64) -> Self {
        Self {
            sampler,
            n_samples,
            n_qubits: 3,
            seed,
            inequalities: InequalityId::all_for(3),
            tolerance: DEFAULT_TOL,
            pivots: PivotPolicy::Fixed(0),
            workers: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(3..=MAX_QUBITS).contains(&self.n_qubits) {
            return Err(Error::QubitCount {
                n: self.n_qubits,
                min: 3,
                max: MAX_QUBITS,
            });
        }
        match &self.sampler {
            Sampler::Haar | Sampler::Acin if self.n_samples == 0 => {
                return Err(Error::InvalidConfig("n_samples must be at least 1".into()))
            }
            Sampler::Acin | Sampler::Named(_) if self.n_qubits != 3 => {
                return Err(Error::InvalidConfig(format!(
                    "this sampler produces three-qubit states, n_qubits = {}",
                    self.n_qubits
                )))
            }
            Sampler::Named(list) if list.is_empty() => {
                return Err(Error::InvalidConfig("named-state list is empty".into()))
            }
            _ => {}
        }
        if self.inequalities.is_empty() {
            return Err(Error::InvalidConfig("no inequalities selected".into()));
        }
        if let Some(id) = self.inequalities.iter().find(|id| !id.supports(self.n_qubits)) {
            return Err(Error::InvalidConfig(format!(
                "{id} is not defined for {} qubits",
                self.n_qubits
            )));
        }
        if self.tolerance.is_nan() || self.tolerance < 0.0 {
            return Err(Error::InvalidConfig("tolerance must be non-negative".into()));
        }
        if let PivotPolicy::Fixed(p) = self.pivots {
            if p >= self.n_qubits {
                return Err(Error::QubitOutOfRange {
                    index: p,
                    n_qubits: self.n_qubits,
                });
            }
        }
        if self.workers == Some(0) {
            return Err(Error::InvalidConfig("workers must be at least 1".into()));
        }
        Ok(())
    }

    pub fn sample_count(&self) -> usize {
        match &self.sampler {
            Sampler::Named(list) => list.len(),
            _ => self.n_samples,
        }
    }

    fn pivot_list(&self) -> Vec<usize> {
        match self.pivots {
            PivotPolicy::Fixed(p) => vec![p],
            PivotPolicy::All => (0..self.n_qubits).collect(),
        }
    }

    /// The state for sample `index`.
    pub fn sample(&self, index: usize) -> Result<PureState> {
        let mut rng = SeededRng::new(self.seed, index as u64);
        match &self.sampler {
            Sampler::Haar => PureState::new_renormalized(haar_random_pure(self.n_qubits, &mut rng)?),
            Sampler::Acin => from_acin(&sample_acin(&mut rng)),
            Sampler::Named(list) => named_state(list[index]),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SampleRecord {
    pub index: usize,
    pub state: PureState,
    pub reports: Vec<InequalityReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InequalitySummary {
    pub inequality: InequalityId,
    pub count: usize,
    pub violations: usize,
    pub min_margin: f64,
    pub mean_margin: f64,
    pub argmin_sample: usize,
    pub argmin_pivot: char,
    pub argmin_state: StateFile,
}

#[derive(Debug, Clone, Serialize)]
pub struct CampaignSummary {
    pub samples: usize,
    pub tolerance: f64,
    pub total_violations: usize,
    pub inequalities: Vec<InequalitySummary>,
    pub wall_time_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct CampaignOutcome {
    pub summary: CampaignSummary,
    pub records: Vec<SampleRecord>,
}

fn evaluate_sample(cfg: &CampaignConfig, pivots: &[usize], index: usize) -> Result<SampleRecord> {
    let state = cfg.sample(index)?;
    let mut reports = Vec::with_capacity(cfg.inequalities.len() * pivots.len());
    for &pivot in pivots {
        let profile = PivotProfile::new(&state, pivot)?;
        for &id in &cfg.inequalities {
            reports.push(profile.evaluate(id, cfg.tolerance)?);
        }
    }
    Ok(SampleRecord { index, state, reports })
}

pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignOutcome> {
    cfg.validate()?;
    let start = Instant::now();
    let pivots = cfg.pivot_list();
    let n = cfg.sample_count();

    let run = || -> Result<Vec<SampleRecord>> {
        (0..n)
            .into_par_iter()
            .map(|i| evaluate_sample(cfg, &pivots, i))
            .collect()
    };
    let records = match cfg.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };

    let summary = summarize(cfg, &records, start.elapsed().as_secs_f64());
    Ok(CampaignOutcome { summary, records })
}

fn summarize(cfg: &CampaignConfig, records: &[SampleRecord], wall_time_seconds: f64) -> CampaignSummary {
    let inequalities: Vec<InequalitySummary> = cfg
        .inequalities
        .iter()
        .map(|&id| {
            let mut count = 0;
            let mut violations = 0;
            let mut sum = 0.0;
            let mut best: Option<(f64, &SampleRecord, usize)> = None;
            for rec in records {
                for r in rec.reports.iter().filter(|r| r.name == id) {
                    count += 1;
                    sum += r.margin;
                    if r.margin < -cfg.tolerance {
                        violations += 1;
                    }
                    if best.is_none_or(|(m, _, _)| r.margin < m) {
                        best = Some((r.margin, rec, r.pivot));
                    }
                }
            }
            let (min_margin, rec, pivot) = best.expect("validated campaigns have samples");
            InequalitySummary {
                inequality: id,
                count,
                violations,
                min_margin,
                mean_margin: sum / count as f64,
                argmin_sample: rec.index,
                argmin_pivot: qubit_label(pivot),
                argmin_state: StateFile::from_state(&rec.state),
            }
        })
        .collect();
    CampaignSummary {
        samples: records.len(),
        tolerance: cfg.tolerance,
        total_violations: inequalities.iter().map(|s| s.violations).sum(),
        inequalities,
        wall_time_seconds,
    }
}

/// Decimal scientific notation with 17 significant digits.
pub fn format_sig17(x: f64) -> String {
    format!("{x:.16e}")
}

pub const CSV_HEADER: &str = "sample_index,inequality_id,pivot,lhs,rhs,margin,holds";

/// One row per sample per report, in sample order.
pub fn write_csv<W: Write>(records: &[SampleRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for rec in records {
        for r in &rec.reports {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                rec.index,
                r.name,
                qubit_label(r.pivot),
                format_sig17(r.lhs),
                format_sig17(r.rhs),
                format_sig17(r.margin),
                r.holds
            )?;
        }
    }
    out.flush()
}
