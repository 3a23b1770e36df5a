//! Derivative-free minimisation by linear approximation on a simplex
//! (COBYLA without constraints).
//!
//! The objective is modelled by the linear interpolant through `n + 1`
//! vertices. Each iteration either steps to the model minimiser inside the
//! trust radius `ρ`, or repairs the simplex geometry when it has become too
//! flat or too stretched. `ρ` halves whenever the model stops predicting
//! progress on a well-shaped simplex, until it reaches `final_trust_radius`.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimConfig {
    /// Cap on objective evaluations, including the initial simplex.
    pub max_iterations: usize,
    pub initial_trust_radius: f64,
    pub final_trust_radius: f64,
}

impl Default for OptimConfig {
    fn default() -> Self {
        Self {
            max_iterations: 100,
            initial_trust_radius: 0.5,
            final_trust_radius: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimResult {
    pub best_params: Vec<f64>,
    pub best_value: f64,
    /// Objective value of every evaluation in call order.
    pub value_history: Vec<f64>,
    /// Wall time per evaluation, measured between completions.
    pub iteration_durations_ms: Vec<f64>,
}

impl OptimResult {
    pub fn iterations(&self) -> usize {
        self.value_history.len()
    }

    /// Best value seen after each evaluation.
    pub fn envelope(&self) -> Vec<f64> {
        self.value_history
            .iter()
            .scan(f64::INFINITY, |best, &v| {
                *best = best.min(v);
                Some(*best)
            })
            .collect()
    }
}

struct Tracker<F> {
    objective: F,
    value_history: Vec<f64>,
    iteration_durations_ms: Vec<f64>,
    last: Instant,
    max_evals: usize,
}

impl<F: FnMut(&[f64]) -> Result<f64>> Tracker<F> {
    fn exhausted(&self) -> bool {
        self.value_history.len() >= self.max_evals
    }

    fn eval(&mut self, x: &[f64]) -> Result<f64> {
        let value = (self.objective)(x)?;
        if !value.is_finite() {
            return Err(Error::NonFiniteObjective {
                value,
                point: x.to_vec(),
            });
        }
        let now = Instant::now();
        self.iteration_durations_ms
            .push(now.duration_since(self.last).as_secs_f64() * 1e3);
        self.last = now;
        self.value_history.push(value);
        Ok(value)
    }
}

fn norm(v: &DVector<f64>) -> f64 {
    v.norm()
}

/// Minimise `objective` from `x0`.
pub fn minimize<F>(objective: F, x0: &[f64], config: &OptimConfig) -> Result<OptimResult>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    if x0.is_empty() {
        return Err(Error::Config(
            "optimizer needs at least one parameter".into(),
        ));
    }
    if config.max_iterations == 0
        || !(config.initial_trust_radius >= config.final_trust_radius
            && config.final_trust_radius > 0.0)
    {
        return Err(Error::Config(format!(
            "invalid optimizer settings: max_iterations {}, rho {} -> {}",
            config.max_iterations, config.initial_trust_radius, config.final_trust_radius
        )));
    }
    let n = x0.len();
    let mut t = Tracker {
        objective,
        value_history: Vec::new(),
        iteration_durations_ms: Vec::new(),
        last: Instant::now(),
        max_evals: config.max_iterations,
    };
    let mut rho = config.initial_trust_radius;

    let mut verts: Vec<DVector<f64>> = Vec::with_capacity(n + 1);
    let mut vals: Vec<f64> = Vec::with_capacity(n + 1);
    let base = DVector::from_column_slice(x0);
    for i in 0..=n {
        if t.exhausted() {
            break;
        }
        let mut v = base.clone();
        if i > 0 {
            v[i - 1] += rho;
        }
        vals.push(t.eval(v.as_slice())?);
        verts.push(v);
    }

    while verts.len() == n + 1 && !t.exhausted() {
        let best = argmin(&vals);
        let xb = verts[best].clone();
        let others: Vec<usize> = (0..=n).filter(|&i| i != best).collect();

        // Rows of `d` are vertex displacements from the best vertex.
        let mut d = DMatrix::<f64>::zeros(n, n);
        let mut df = DVector::<f64>::zeros(n);
        for (r, &i) in others.iter().enumerate() {
            d.set_row(r, &(&verts[i] - &xb).transpose());
            df[r] = vals[i] - vals[best];
        }
        let Some(inv) = d.clone().try_inverse() else {
            // Degenerate simplex: rebuild it around the best point.
            for (k, &i) in others.iter().enumerate() {
                if t.exhausted() {
                    break;
                }
                let mut v = xb.clone();
                v[k] += rho;
                vals[i] = t.eval(v.as_slice())?;
                verts[i] = v;
            }
            continue;
        };
        let g = &inv * &df;

        // Columns of `inv` are normals to the faces opposite each vertex.
        let sigma: Vec<f64> = (0..n).map(|r| 1.0 / inv.column(r).norm()).collect();
        let eta: Vec<f64> = others.iter().map(|&i| norm(&(&verts[i] - &xb))).collect();
        let acceptable =
            sigma.iter().all(|&s| s >= 0.25 * rho) && eta.iter().all(|&e| e <= 2.1 * rho);

        let gnorm = g.norm();
        let mut ratio = 0.0;
        if gnorm > 0.0 {
            let step = &g * (-rho / gnorm);
            let x_new = &xb + &step;
            let f_new = t.eval(x_new.as_slice())?;
            let predicted = rho * gnorm;
            ratio = (vals[best] - f_new) / predicted;
            // Barycentric weight of the step against each non-best vertex.
            let lambda = inv.transpose() * &step;
            let (slot, score) = others
                .iter()
                .enumerate()
                .map(|(r, &i)| {
                    let dist = norm(&(&verts[i] - &x_new)) / rho;
                    (r, lambda[r].abs() * dist.max(1.0))
                })
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("n >= 1");
            let i = others[slot];
            if f_new < vals[best] || f_new < vals[i] || score > 1.0 {
                verts[i] = x_new;
                vals[i] = f_new;
            }
        }

        if ratio < 0.1 && !t.exhausted() {
            if acceptable {
                if rho <= config.final_trust_radius {
                    break;
                }
                rho = (0.5 * rho).max(config.final_trust_radius);
            } else {
                // Replace the worst-shaped vertex by a step along its face normal.
                let (slot, _) = eta
                    .iter()
                    .enumerate()
                    .map(|(r, &e)| (r, e / (2.1 * rho)))
                    .chain(sigma.iter().enumerate().map(|(r, &s)| (r, 0.25 * rho / s)))
                    .max_by(|a, b| a.1.total_cmp(&b.1))
                    .expect("n >= 1");
                let mut dir: DVector<f64> = inv.column(slot).into_owned();
                dir /= dir.norm();
                if g.dot(&dir) > 0.0 {
                    dir = -dir;
                }
                let x_new = &xb + dir * (0.5 * rho);
                let f_new = t.eval(x_new.as_slice())?;
                let i = others[slot];
                verts[i] = x_new;
                vals[i] = f_new;
            }
        }
    }

    let best = argmin(&vals);
    Ok(OptimResult {
        best_params: verts[best].as_slice().to_vec(),
        best_value: vals[best],
        value_history: t.value_history,
        iteration_durations_ms: t.iteration_durations_ms,
    })
}

fn argmin(vals: &[f64]) -> usize {
    vals.iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("non-empty simplex")
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn ok<F: Fn(&[f64]) -> f64>(f: F) -> impl FnMut(&[f64]) -> Result<f64> {
        move |x| Ok(f(x))
    }

    #[test]
    fn one_dimensional_quadratic() {
        let r = minimize(
            ok(|x| (x[0] - 1.0).powi(2)),
            &[0.0],
            &OptimConfig::default(),
        )
        .unwrap();
        assert!((r.best_params[0] - 1.0).abs() < 1e-3, "{:?}", r.best_params);
        assert!(r.best_value < 1e-6);
        assert!(r.iterations() <= 100);
    }

    #[test]
    fn constant_objective_terminates() {
        let r = minimize(ok(|_| 7.0), &[0.3, 0.1], &OptimConfig::default()).unwrap();
        assert_eq!(r.best_value, 7.0);
        assert!(r.iterations() < 100);
        assert_eq!(r.value_history.len(), r.iteration_durations_ms.len());
    }

    #[test]
    fn respects_evaluation_cap() {
        let cfg = OptimConfig {
            max_iterations: 7,
            ..OptimConfig::default()
        };
        let r = minimize(ok(|x| x.iter().map(|v| v.sin()).sum()), &[0.0; 4], &cfg).unwrap();
        assert_eq!(r.iterations(), 7);
        let short = OptimConfig {
            max_iterations: 2,
            ..OptimConfig::default()
        };
        let r = minimize(ok(|x| x[0] + x[1] + x[2]), &[0.0; 3], &short).unwrap();
        assert_eq!(r.iterations(), 2);
    }

    #[test]
    fn envelope_is_monotone_and_matches_result() {
        let r = minimize(
            ok(|x| (x[0] - 0.3).powi(2) + 3.0 * (x[1] + 2.0).powi(2) + x[0].sin()),
            &[1.0, 1.0],
            &OptimConfig::default(),
        )
        .unwrap();
        let env = r.envelope();
        assert!(env.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(*env.last().unwrap(), r.best_value);
    }

    #[test]
    fn non_finite_values_abort_with_the_point() {
        let err = minimize(
            ok(|x| if x[0] > 0.2 { f64::NAN } else { x[0] }),
            &[0.0],
            &OptimConfig::default(),
        )
        .unwrap_err();
        match err {
            Error::NonFiniteObjective { value, point } => {
                assert!(value.is_nan());
                assert!(point[0] > 0.2);
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn rejects_bad_settings() {
        let bad = OptimConfig {
            initial_trust_radius: 1e-6,
            ..OptimConfig::default()
        };
        assert!(minimize(ok(|x| x[0]), &[0.0], &bad).is_err());
        assert!(minimize(ok(|_| 0.0), &[], &OptimConfig::default()).is_err());
    }

    #[test]
    fn random_convex_quadratics() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let cfg = OptimConfig {
            max_iterations: 400,
            ..OptimConfig::default()
        };
        for case in 0..20 {
            let n = rng.gen_range(1..=4);
            let centre: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let scale: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..3.0)).collect();
            let (c, s) = (centre.clone(), scale.clone());
            let f = move |x: &[f64]| -> f64 {
                x.iter()
                    .zip(&c)
                    .zip(&s)
                    .map(|((x, c), s)| s * (x - c).powi(2))
                    .sum()
            };
            let r = minimize(ok(f), &vec![0.0; n], &cfg).unwrap();
            let dist: f64 = r
                .best_params
                .iter()
                .zip(&centre)
                .map(|(x, c)| (x - c).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(
                dist < 1e-2,
                "case {case}: n={n} dist {dist} after {} evals",
                r.iterations()
            );
        }
    }

    #[test]
    fn planar_quadratics_within_default_cap() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for case in 0..20 {
            let c = [rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)];
            let s = [rng.gen_range(0.5..3.0), rng.gen_range(0.5..3.0)];
            let x0 = [rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)];
            let f = move |x: &[f64]| s[0] * (x[0] - c[0]).powi(2) + s[1] * (x[1] - c[1]).powi(2);
            let r = minimize(ok(f), &x0, &OptimConfig::default()).unwrap();
            let dist =
                ((r.best_params[0] - c[0]).powi(2) + (r.best_params[1] - c[1]).powi(2)).sqrt();
            assert!(r.iterations() <= 100);
            assert!(
                dist < 1e-3,
                "case {case}: dist {dist} after {} evals",
                r.iterations()
            );
        }
    }
}
