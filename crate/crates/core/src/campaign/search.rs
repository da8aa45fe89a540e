//! Multi-restart simplex search over the canonical three-qubit chart.
//!
//! A point is six unconstrained reals: `|x[..5]|` normalized gives the
//! amplitudes `l`, `x[5] mod 2π` gives the phase.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::nelder_mead::{minimize, NelderMeadOptions};
use crate::correlations::residual_nonlocality;
use crate::error::{Error, Result};
use crate::inequalities::{evaluate, InequalityId, DEFAULT_TOL};
use crate::qmath::SeededRng;
use crate::states::{from_acin, AcinParams, PureState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Objective {
    /// Minimize the margin of one inequality at the configured pivot.
    MinMargin(InequalityId),
    /// Maximize the residual nonlocality at the configured pivot.
    MaxResidual,
    /// Maximize `|residual(A) - residual(B)|`.
    MaxResidualAsymmetry,
}

impl Objective {
    /// `+1` for minimization targets, `-1` for maximization targets.
    fn sign(self) -> f64 {
        match self {
            Objective::MinMargin(_) => 1.0,
            _ => -1.0,
        }
    }

    /// Objective value in its natural orientation (margin or residual).
    pub fn value(self, s: &PureState, pivot: usize) -> Result<f64> {
        match self {
            Objective::MinMargin(id) => Ok(evaluate(id, s, pivot, DEFAULT_TOL)?.margin),
            Objective::MaxResidual => residual_nonlocality(s, pivot),
            Objective::MaxResidualAsymmetry => Ok((residual_nonlocality(s, 0)? - residual_nonlocality(s, 1)?).abs()),
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Objective::MinMargin(id) => write!(f, "min-margin:{id}"),
            Objective::MaxResidual => write!(f, "max-residual"),
            Objective::MaxResidualAsymmetry => write!(f, "max-residual-asymmetry"),
        }
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "max-residual" => Ok(Objective::MaxResidual),
            "max-residual-asymmetry" => Ok(Objective::MaxResidualAsymmetry),
            _ => {
                let id = s
                    .strip_prefix("min-margin:")
                    .ok_or_else(|| Error::InvalidConfig(format!("unknown objective `{s}`")))?;
                let id: InequalityId = id.parse()?;
                if !id.supports(3) {
                    return Err(Error::InvalidConfig(format!(
                        "{id} cannot be searched over three qubits"
                    )));
                }
                Ok(Objective::MinMargin(id))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub objective: Objective,
    pub max_iterations: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Simplex spread at which a restart counts as converged.
    pub threshold: f64,
    pub pivot: usize,
}

impl SearchConfig {
    pub fn new(objective: Objective, seed: u64) -> Self {
        Self {
            objective,
            max_iterations: 2000,
            restarts: 8,
            seed,
            threshold: 1e-10,
            pivot: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if self.threshold.is_nan() || self.threshold <= 0.0 {
            return Err(Error::InvalidConfig("threshold must be positive".into()));
        }
        if self.pivot >= 3 {
            return Err(Error::QubitOutOfRange {
                index: self.pivot,
                n_qubits: 3,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    Converged,
    IterationLimit,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub params: AcinParams,
    pub state: PureState,
    /// Best objective in its natural orientation.
    pub objective: f64,
    pub status: SearchStatus,
    pub restart: usize,
    pub iterations: usize,
    /// Best-so-far minimized value per iteration of the winning restart
    /// (the negated objective for maximization targets).
    pub trace: Vec<f64>,
    /// Final natural objective value of every restart, in restart order.
    pub restart_values: Vec<f64>,
}

fn initial_point(rng: &mut SeededRng) -> [f64; 6] {
    let mut x = [0.0; 6];
    for v in x.iter_mut().take(5) {
        *v = rng.standard_normal();
    }
    x[5] = TAU * rng.uniform();
    x
}

fn chart(x: &[f64]) -> AcinParams {
    let arr: [f64; 6] = x.try_into().expect("six chart coordinates");
    AcinParams::from_unconstrained(&arr)
}

/// Runs every restart (concurrently) and keeps the best, ties going to the
/// lowest restart index.
pub fn search(cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let sign = cfg.objective.sign();
    let opts = NelderMeadOptions {
        max_iterations: cfg.max_iterations,
        tolerance: cfg.threshold,
        initial_step: 0.5,
    };

    let runs: Vec<_> = (0..cfg.restarts)
        .into_par_iter()
        .map(|restart| {
            let mut rng = SeededRng::new(cfg.seed, restart as u64);
            let x0 = initial_point(&mut rng);
            minimize(
                |x| {
                    let s = from_acin(&chart(x))?;
                    Ok(sign * cfg.objective.value(&s, cfg.pivot)?)
                },
                &x0,
                &opts,
            )
        })
        .collect::<Result<Vec<_>>>()?;

    let (restart, best) = runs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.value.total_cmp(&b.1.value).then(a.0.cmp(&b.0)))
        .expect("at least one restart");
    let params = chart(&best.x);
    let state = from_acin(&params)?;
    Ok(SearchResult {
        objective: cfg.objective.value(&state, cfg.pivot)?,
        params,
        state,
        status: if best.converged {
            SearchStatus::Converged
        } else {
            SearchStatus::IterationLimit
        },
        restart,
        iterations: best.iterations,
        trace: best.trace.clone(),
        restart_values: runs.iter().map(|m| sign * m.value).collect(),
    })
}
