//! Derivative-free minimization via the Nelder-Mead simplex.

use crate::error::{Error, Result};

/// Outcome of a simplex minimization.
#[derive(Debug, Clone)]
pub struct NelderMeadResult {
    /// Best point found.
    pub x: Vec<f64>,
    /// Objective value at `x`.
    pub fx: f64,
    pub iterations: usize,
    /// True when the simplex collapsed below tolerance; false when the
    /// iteration budget ran out first (best-so-far is still returned).
    pub converged: bool,
}

/// Minimize `f` from `x0` with the classic Nelder-Mead moves
/// (reflection 1, expansion 2, contraction 0.5, shrink 0.5).
///
/// Terminates when the spread of simplex function values falls below `tol`
/// or after `max_iter` iterations. The returned point never evaluates worse
/// than `x0`.
pub fn nelder_mead<F>(f: F, x0: &[f64], tol: f64, max_iter: usize) -> Result<NelderMeadResult>
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    if n == 0 {
        return Err(Error::invalid("nelder_mead needs at least one dimension"));
    }
    let f0 = f(x0);
    if !f0.is_finite() {
        return Err(Error::invalid("objective is not finite at the start point"));
    }

    // Initial simplex: x0 plus a 5% perturbation per coordinate
    // (0.00025 absolute when the coordinate is zero).
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        if v[i] != 0.0 {
            v[i] *= 1.05;
        } else {
            v[i] = 0.00025;
        }
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| protected(&f, v)).collect();

    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iter {
        iterations += 1;

        // Order vertices by objective value.
        let mut idx: Vec<usize> = (0..=n).collect();
        idx.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
        let reorder_simplex: Vec<Vec<f64>> = idx.iter().map(|&i| simplex[i].clone()).collect();
        let reorder_values: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
        simplex = reorder_simplex;
        values = reorder_values;

        // Value spread alone is not enough: vertices symmetric around a
        // minimum have near-equal values while still far from it, so the
        // simplex diameter must collapse too.
        let diameter = simplex[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if (values[n] - values[0]).abs() < tol && diameter < tol.max(1e-12) {
            converged = true;
            break;
        }

        // Centroid of all but the worst vertex.
        let mut centroid = vec![0.0; n];
        for v in simplex.iter().take(n) {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }

        let worst = simplex[n].clone();
        let reflect: Vec<f64> = centroid
            .iter()
            .zip(&worst)
            .map(|(c, w)| c + (c - w))
            .collect();
        let f_reflect = protected(&f, &reflect);

        if f_reflect < values[0] {
            // Try expanding past the reflection.
            let expand: Vec<f64> = centroid
                .iter()
                .zip(&worst)
                .map(|(c, w)| c + 2.0 * (c - w))
                .collect();
            let f_expand = protected(&f, &expand);
            if f_expand < f_reflect {
                simplex[n] = expand;
                values[n] = f_expand;
            } else {
                simplex[n] = reflect;
                values[n] = f_reflect;
            }
        } else if f_reflect < values[n - 1] {
            simplex[n] = reflect;
            values[n] = f_reflect;
        } else {
            // Contract toward the better of worst/reflection.
            let (toward, f_toward) = if f_reflect < values[n] {
                (&reflect, f_reflect)
            } else {
                (&worst, values[n])
            };
            let contract: Vec<f64> = centroid
                .iter()
                .zip(toward)
                .map(|(c, t)| c + 0.5 * (t - c))
                .collect();
            let f_contract = protected(&f, &contract);
            if f_contract < f_toward {
                simplex[n] = contract;
                values[n] = f_contract;
            } else {
                // Shrink everything toward the best vertex.
                let best = simplex[0].clone();
                for i in 1..=n {
                    for (x, b) in simplex[i].iter_mut().zip(&best) {
                        *x = b + 0.5 * (*x - b);
                    }
                    values[i] = protected(&f, &simplex[i]);
                }
            }
        }
    }

    let mut best = 0;
    for i in 1..=n {
        if values[i] < values[best] {
            best = i;
        }
    }
    // The start point is a simplex vertex, so fx <= f(x0) always holds.
    Ok(NelderMeadResult {
        x: simplex[best].clone(),
        fx: values[best],
        iterations,
        converged,
    })
}

/// Non-finite objective values are treated as +inf so the simplex backs away.
fn protected<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64]) -> f64 {
    let v = f(x);
    if v.is_finite() {
        v
    } else {
        f64::INFINITY
    }
}
