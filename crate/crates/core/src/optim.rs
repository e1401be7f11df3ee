//! Derivative-free simplex minimization (Nelder-Mead).
//!
//! The objectives in this crate are cheap, low-dimensional, and non-smooth
//! where tomogram entries vanish, which is exactly the regime where a plain
//! simplex search is the right tool.

/// Stopping rules for one simplex descent.
#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    pub max_iters: usize,
    /// Stop when the best-to-worst spread of simplex values drops below this.
    pub value_tol: f64,
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            max_iters: 2000,
            value_tol: 1e-10,
            initial_step: 0.25,
        }
    }
}

/// Result of one simplex descent.
#[derive(Debug, Clone)]
pub struct SimplexOutcome {
    pub best_point: Vec<f64>,
    pub best_value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimize `f` from `start` with the standard reflect / expand / contract /
/// shrink moves. Fully deterministic: ties resolve by index order.
pub fn nelder_mead(
    f: impl Fn(&[f64]) -> f64,
    start: &[f64],
    options: &SimplexOptions,
) -> SimplexOutcome {
    let n = start.len();
    assert!(n > 0, "need at least one parameter");

    let mut evaluations = 0;
    let eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        f(x)
    };

    // Initial simplex: start plus one step along each axis.
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    points.push(start.to_vec());
    for i in 0..n {
        let mut p = start.to_vec();
        p[i] += options.initial_step;
        points.push(p);
    }
    let mut values: Vec<f64> = points.iter().map(|p| eval(p, &mut evaluations)).collect();

    let mut iterations = 0;
    let mut converged = false;
    while iterations < options.max_iters {
        iterations += 1;

        // Stable sort keeps tie handling deterministic.
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite values"));
        points = order.iter().map(|&i| points[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        if values[n] - values[0] < options.value_tol {
            converged = true;
            break;
        }

        // Centroid of all but the worst point.
        let mut centroid = vec![0.0; n];
        for p in points.iter().take(n) {
            for (c, x) in centroid.iter_mut().zip(p) {
                *c += x;
            }
        }
        for c in centroid.iter_mut() {
            *c /= n as f64;
        }

        let blend = |from: &[f64], coeff: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(from)
                .map(|(&c, &w)| c + coeff * (c - w))
                .collect()
        };

        let reflected = blend(&points[n], REFLECT);
        let fr = eval(&reflected, &mut evaluations);

        if fr < values[0] {
            let expanded = blend(&points[n], EXPAND);
            let fe = eval(&expanded, &mut evaluations);
            if fe < fr {
                points[n] = expanded;
                values[n] = fe;
            } else {
                points[n] = reflected;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            points[n] = reflected;
            values[n] = fr;
        } else {
            // Contract toward the better of worst/reflected.
            let worst = points[n].clone();
            let (anchor, f_anchor) = if fr < values[n] {
                (&reflected, fr)
            } else {
                (&worst, values[n])
            };
            let contracted: Vec<f64> = centroid
                .iter()
                .zip(anchor.iter())
                .map(|(&c, &w)| c + CONTRACT * (w - c))
                .collect();
            let fc = eval(&contracted, &mut evaluations);
            if fc < f_anchor {
                points[n] = contracted;
                values[n] = fc;
            } else {
                // Shrink everything toward the best point.
                let best = points[0].clone();
                for i in 1..=n {
                    for (x, b) in points[i].iter_mut().zip(&best) {
                        *x = b + SHRINK * (*x - b);
                    }
                    values[i] = eval(&points[i], &mut evaluations);
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
    SimplexOutcome {
        best_point: points[best].clone(),
        best_value: values[best],
        iterations,
        evaluations,
        converged,
    }
}
