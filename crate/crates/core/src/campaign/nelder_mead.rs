//! Nelder–Mead downhill simplex.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    pub max_iterations: usize,
    /// Stop once `f(worst) - f(best) < tolerance`.
    pub tolerance: f64,
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_iterations: 2000,
            tolerance: 1e-10,
            initial_step: 0.5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Best value after each iteration; entry 0 is the initial simplex.
    pub trace: Vec<f64>,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

pub fn minimize<F>(mut f: F, x0: &[f64], opts: &NelderMeadOptions) -> Result<Minimum>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    let dim = x0.len();
    let mut eval = |x: &[f64]| -> Result<f64> {
        let v = f(x)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteObjective)
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((x0.to_vec(), eval(x0)?));
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += opts.initial_step;
        let v = eval(&x)?;
        simplex.push((x, v));
    }

    let sort = |s: &mut Vec<(Vec<f64>, f64)>| s.sort_by(|a, b| a.1.total_cmp(&b.1));
    sort(&mut simplex);
    let mut trace = vec![simplex[0].1];
    let mut iterations = 0;
    let mut converged = false;

    while iterations < opts.max_iterations {
        if simplex[dim].1 - simplex[0].1 < opts.tolerance {
            converged = true;
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..dim)
            .map(|j| simplex[..dim].iter().map(|(x, _)| x[j]).sum::<f64>() / dim as f64)
            .collect();
        let toward = |from: &[f64], coef: f64| -> Vec<f64> {
            centroid.iter().zip(from).map(|(c, x)| c + coef * (x - c)).collect()
        };

        let worst = simplex[dim].0.clone();
        let reflected = toward(&worst, -REFLECT);
        let f_r = eval(&reflected)?;

        if f_r < simplex[0].1 {
            let expanded = toward(&reflected, EXPAND);
            let f_e = eval(&expanded)?;
            simplex[dim] = if f_e < f_r { (expanded, f_e) } else { (reflected, f_r) };
        } else if f_r < simplex[dim - 1].1 {
            simplex[dim] = (reflected, f_r);
        } else {
            let (candidate, bound) = if f_r < simplex[dim].1 {
                (toward(&reflected, CONTRACT), f_r)
            } else {
                (toward(&worst, CONTRACT), simplex[dim].1)
            };
            let f_c = eval(&candidate)?;
            if f_c < bound {
                simplex[dim] = (candidate, f_c);
            } else {
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = best.iter().zip(&vertex.0).map(|(b, x)| b + SHRINK * (x - b)).collect();
                    let v = eval(&x)?;
                    *vertex = (x, v);
                }
            }
        }
        sort(&mut simplex);
        trace.push(simplex[0].1);
    }
    if !converged && simplex[dim].1 - simplex[0].1 < opts.tolerance {
        converged = true;
    }

    let (x, value) = simplex.swap_remove(0);
    Ok(Minimum {
        x,
        value,
        iterations,
        converged,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let m = minimize(
            |x| Ok((x[0] - 1.0).powi(2) + 2.0 * (x[1] + 0.5).powi(2)),
            &[0.0, 0.0],
            &NelderMeadOptions {
                tolerance: 1e-14,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-5 && (m.x[1] + 0.5).abs() < 1e-5);
        assert!(m.trace.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn rosenbrock() {
        let m = minimize(
            |x| Ok((1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)),
            &[-1.2, 1.0],
            &NelderMeadOptions {
                max_iterations: 5000,
                tolerance: 1e-16,
                initial_step: 0.1,
            },
        )
        .unwrap();
        assert!(m.value < 1e-8, "{}", m.value);
    }

    #[test]
    fn iteration_limit_reported() {
        let m = minimize(
            |x| Ok(x[0].powi(2)),
            &[10.0],
            &NelderMeadOptions {
                max_iterations: 3,
                tolerance: 1e-30,
                initial_step: 1.0,
            },
        )
        .unwrap();
        assert_eq!(m.iterations, 3);
        assert!(!m.converged);
        assert_eq!(m.trace.len(), 4);
    }

    #[test]
    fn non_finite_objective_is_an_error() {
        let r = minimize(|_| Ok(f64::NAN), &[0.0], &NelderMeadOptions::default());
        assert!(matches!(r, Err(Error::NonFiniteObjective)));
    }
}
