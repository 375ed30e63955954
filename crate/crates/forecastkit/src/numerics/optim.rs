//! Derivative-free minimization with the Nelder-Mead simplex method.

use crate::error::{ForecastError, Result};

/// Tuning knobs for [`nelder_mead`].
#[derive(Debug, Clone)]
pub struct NelderMeadConfig {
    /// Offset added to each coordinate of the start point to form the
    /// initial simplex.
    pub initial_step: f64,
    /// Convergence threshold on the spread of objective values across the
    /// simplex; the simplex must also shrink below `tol.sqrt()` in every
    /// coordinate before the run counts as converged.
    pub tol: f64,
    /// Iteration cap; defaults to `200·dim` when `None`.
    pub max_iter: Option<usize>,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        NelderMeadConfig {
            initial_step: 0.1,
            tol: 1e-8,
            max_iter: None,
        }
    }
}

/// Outcome of a Nelder-Mead run.
#[derive(Debug, Clone)]
pub struct NelderMeadResult {
    /// Best point found.
    pub x: Vec<f64>,
    /// Objective value at `x`.
    pub fx: f64,
    /// Iterations performed.
    pub iterations: usize,
    /// True when the simplex collapsed below the tolerance before the
    /// iteration cap.
    pub converged: bool,
}

/// Minimize `f` starting from `x0` with the standard Nelder-Mead
/// coefficients (reflection 1, expansion 2, contraction 0.5, shrink 0.5).
/// Deterministic given the start point. Non-finite objective values away
/// from the start are treated as +∞ so penalized regions are simply avoided.
pub fn nelder_mead<F>(
    mut f: F,
    x0: &[f64],
    config: &NelderMeadConfig,
) -> Result<NelderMeadResult>
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = x0.len();
    if dim == 0 {
        return Err(ForecastError::InvalidInput(
            "cannot optimize a zero-dimensional objective".into(),
        ));
    }
    let start_value = f(x0);
    if !start_value.is_finite() {
        return Err(ForecastError::InvalidInput(format!(
            "objective is not finite at the start point ({start_value})"
        )));
    }
    let mut eval = |x: &[f64]| -> f64 {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let max_iter = config.max_iter.unwrap_or(200 * dim);

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    let mut values = vec![start_value];
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += config.initial_step;
        values.push(eval(&v));
        simplex.push(v);
    }

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        // Order the simplex: best first, worst last.
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        // Converge only when the simplex has collapsed both in value and in
        // space: a wide simplex can straddle a symmetric minimum with a
        // near-zero value spread.
        if values[dim] - values[0] < config.tol {
            let mut extent = 0.0f64;
            for v in simplex.iter().skip(1) {
                for (vi, bi) in v.iter().zip(&simplex[0]) {
                    extent = extent.max((vi - bi).abs());
                }
            }
            if extent < config.tol.sqrt() {
                converged = true;
                break;
            }
        }

        // Centroid of all but the worst vertex.
        let mut centroid = vec![0.0; dim];
        for v in simplex.iter().take(dim) {
            for (c, vi) in centroid.iter_mut().zip(v) {
                *c += vi / dim as f64;
            }
        }

        let reflect: Vec<f64> = centroid
            .iter()
            .zip(&simplex[dim])
            .map(|(c, w)| c + (c - w))
            .collect();
        let fr = eval(&reflect);

        if fr < values[0] {
            // Try expanding past the reflection point.
            let expand: Vec<f64> = centroid
                .iter()
                .zip(&simplex[dim])
                .map(|(c, w)| c + 2.0 * (c - w))
                .collect();
            let fe = eval(&expand);
            if fe < fr {
                simplex[dim] = expand;
                values[dim] = fe;
            } else {
                simplex[dim] = reflect;
                values[dim] = fr;
            }
        } else if fr < values[dim - 1] {
            simplex[dim] = reflect;
            values[dim] = fr;
        } else {
            // Contract toward the centroid, from whichever of the worst
            // vertex and its reflection is better.
            let (base, fb) = if fr < values[dim] {
                (&reflect, fr)
            } else {
                (&simplex[dim], values[dim])
            };
            let contract: Vec<f64> = centroid
                .iter()
                .zip(base)
                .map(|(c, w)| c + 0.5 * (w - c))
                .collect();
            let fc = eval(&contract);
            if fc < fb {
                simplex[dim] = contract;
                values[dim] = fc;
            } else {
                // Shrink every vertex toward the best one.
                let best = simplex[0].clone();
                for (v, val) in simplex.iter_mut().zip(values.iter_mut()).skip(1) {
                    for (vi, bi) in v.iter_mut().zip(&best) {
                        *vi = bi + 0.5 * (*vi - bi);
                    }
                    *val = eval(v);
                }
            }
        }
    }

    let mut best = 0;
    for i in 1..=dim {
        if values[i] < values[best] {
            best = i;
        }
    }
    Ok(NelderMeadResult {
        x: simplex[best].clone(),
        fx: values[best],
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(step: f64, max_iter: usize, tol: f64) -> NelderMeadConfig {
        NelderMeadConfig {
            initial_step: step,
            tol,
            max_iter: Some(max_iter),
        }
    }

    #[test]
    fn minimizes_shifted_quadratic_from_zero() {
        let res = nelder_mead(|x| (x[0] - 3.0).powi(2), &[0.0], &Default::default()).unwrap();
        assert!(res.converged, "stopped after {} iterations", res.iterations);
        assert!(
            (res.x[0] - 3.0).abs() < 1e-4,
            "x = {}, fx = {}, iterations = {}",
            res.x[0],
            res.fx,
            res.iterations
        );
    }

    #[test]
    fn minimizes_five_dimensional_quadratic() {
        let target = [1.0, -2.0, 3.0, -4.0, 5.0];
        let res = nelder_mead(
            |x| {
                x.iter()
                    .zip(&target)
                    .map(|(xi, ti)| (xi - ti).powi(2))
                    .sum()
            },
            &[0.0; 5],
            &cfg(0.5, 5000, 1e-14),
        )
        .unwrap();
        assert!(res.converged);
        for (xi, ti) in res.x.iter().zip(&target) {
            assert!((xi - ti).abs() < 1e-5, "{xi} vs {ti}");
        }
    }

    #[test]
    fn minimizes_rosenbrock() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let res = nelder_mead(rosen, &[-1.0, 1.0], &cfg(0.5, 10_000, 1e-14)).unwrap();
        assert!(res.converged);
        assert!((res.x[0] - 1.0).abs() < 1e-3);
        assert!((res.x[1] - 1.0).abs() < 1e-3);
        assert!(res.fx < 1e-7);
    }

    #[test]
    fn respects_iteration_cap() {
        let res = nelder_mead(|x| x[0] * x[0], &[100.0], &cfg(0.1, 3, 1e-30)).unwrap();
        assert_eq!(res.iterations, 3);
        assert!(!res.converged);
    }

    #[test]
    fn rejects_non_finite_start() {
        assert!(nelder_mead(|_| f64::NAN, &[0.0], &Default::default()).is_err());
        assert!(nelder_mead(|_| f64::INFINITY, &[0.0], &Default::default()).is_err());
    }

    #[test]
    fn walks_away_from_penalized_regions() {
        // Objective is +∞ for x < 0 but smooth elsewhere; the simplex must
        // still find the minimum at 2.
        let res = nelder_mead(
            |x| {
                if x[0] < 0.0 {
                    f64::INFINITY
                } else {
                    (x[0] - 2.0).powi(2)
                }
            },
            &[0.5],
            &cfg(0.1, 2000, 1e-14),
        )
        .unwrap();
        assert!((res.x[0] - 2.0).abs() < 1e-5);
    }
}
