//! Derivative-free simplex minimizer used by the brute-force oracles.
//!
//! Standard Nelder–Mead with the dimension-adaptive coefficients of Gao and
//! Han, which behave much better than the classic constants on the
//! 32-parameter isometry search. Fully deterministic: ordering ties are
//! broken by vertex index and no randomness is used.

/// Options for one simplex run.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SimplexOptions {
    /// Hard cap on iterations (one reflect/expand/contract/shrink cycle each).
    pub max_iters: usize,
    /// Stop once every vertex is within this ∞-distance of the best vertex.
    pub size_tol: f64,
    /// Initial displacement of each non-base vertex along its axis.
    pub step: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct SimplexOutcome {
    pub point: Vec<f64>,
    pub value: f64,
    pub converged: bool,
}

pub(crate) fn minimize<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    start: &[f64],
    opts: &SimplexOptions,
) -> SimplexOutcome {
    let dim = start.len();
    assert!(dim >= 1);
    let n = dim as f64;

    // Gao–Han adaptive coefficients.
    let reflect = 1.0;
    let expand = 1.0 + 2.0 / n;
    let contract = (0.75 - 1.0 / (2.0 * n)).max(0.1);
    let shrink = 1.0 - 1.0 / n;

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(start.to_vec());
    for i in 0..dim {
        let mut vertex = start.to_vec();
        vertex[i] += opts.step;
        simplex.push(vertex);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();

    let mut order: Vec<usize> = (0..=dim).collect();
    let mut converged = false;

    for _ in 0..opts.max_iters {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
        let best = order[0];
        let worst = order[dim];
        let second_worst = order[dim - 1];

        let size = simplex
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&simplex[best])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if size <= opts.size_tol {
            converged = true;
            break;
        }

        // Centroid of all vertices but the worst.
        let mut centroid = vec![0.0; dim];
        for &idx in order.iter().take(dim) {
            for (c, x) in centroid.iter_mut().zip(&simplex[idx]) {
                *c += x;
            }
        }
        for c in centroid.iter_mut() {
            *c /= n;
        }

        let blend = |from: &[f64], towards: &[f64], factor: f64| -> Vec<f64> {
            from.iter()
                .zip(towards)
                .map(|(c, w)| c + factor * (c - w))
                .collect()
        };

        let reflected = blend(&centroid, &simplex[worst], reflect);
        let f_reflected = f(&reflected);

        if f_reflected < values[best] {
            let expanded = blend(&centroid, &simplex[worst], expand);
            let f_expanded = f(&expanded);
            if f_expanded < f_reflected {
                simplex[worst] = expanded;
                values[worst] = f_expanded;
            } else {
                simplex[worst] = reflected;
                values[worst] = f_reflected;
            }
            continue;
        }
        if f_reflected < values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = f_reflected;
            continue;
        }

        if f_reflected < values[worst] {
            // Outside contraction.
            let contracted = blend(&centroid, &simplex[worst], contract);
            let f_contracted = f(&contracted);
            if f_contracted <= f_reflected {
                simplex[worst] = contracted;
                values[worst] = f_contracted;
                continue;
            }
        } else {
            // Inside contraction.
            let contracted = blend(&centroid, &simplex[worst], -contract);
            let f_contracted = f(&contracted);
            if f_contracted < values[worst] {
                simplex[worst] = contracted;
                values[worst] = f_contracted;
                continue;
            }
        }

        // Shrink towards the best vertex.
        let anchor = simplex[best].clone();
        for &idx in order.iter().skip(1) {
            let vertex: Vec<f64> = anchor
                .iter()
                .zip(&simplex[idx])
                .map(|(a, x)| a + shrink * (x - a))
                .collect();
            values[idx] = f(&vertex);
            simplex[idx] = vertex;
        }
    }

    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let best = order[0];
    SimplexOutcome {
        point: simplex[best].clone(),
        value: values[best],
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_shifted_quadratic() {
        let outcome = minimize(
            |x| (x[0] - 1.5).powi(2) + 3.0 * (x[1] + 0.5).powi(2),
            &[0.0, 0.0],
            &SimplexOptions {
                max_iters: 500,
                size_tol: 1e-12,
                step: 0.5,
            },
        );
        assert!(outcome.converged);
        assert!((outcome.point[0] - 1.5).abs() <= 1e-8);
        assert!((outcome.point[1] + 0.5).abs() <= 1e-8);
        assert!(outcome.value <= 1e-15);
    }

    #[test]
    fn minimizes_rosenbrock_reasonably() {
        let rosenbrock =
            |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let outcome = minimize(
            rosenbrock,
            &[-1.2, 1.0],
            &SimplexOptions {
                max_iters: 2000,
                size_tol: 1e-12,
                step: 0.5,
            },
        );
        assert!(outcome.value <= 1e-10);
    }

    #[test]
    fn deterministic_across_runs() {
        let run = || {
            minimize(
                |x| x.iter().enumerate().map(|(i, v)| (v - i as f64).powi(2)).sum(),
                &[0.3; 5],
                &SimplexOptions {
                    max_iters: 800,
                    size_tol: 1e-12,
                    step: 0.7,
                },
            )
        };
        let a = run();
        let b = run();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        for (x, y) in a.point.iter().zip(&b.point) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }
}
