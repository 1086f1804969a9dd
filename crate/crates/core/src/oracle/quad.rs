//! One-dimensional quadrature used by the verification oracles.
//!
//! The belt average is checked against direct numerical integration of the
//! pointwise fidelity with weight `sin θ`. Adaptive Simpson is the default
//! (the integrands are smooth trigonometric polynomials, so it converges in
//! a handful of splits); a fixed-panel composite rule is available for
//! comparison runs.

use crate::belt::Belt;
use crate::error::{Error, Result};
use crate::qsim::{pointwise_fidelity, CloneAngles};

/// Integration scheme selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadMethod {
    /// Recursive Simpson with Richardson acceptance (`15·tol` rule).
    AdaptiveSimpson,
    /// Composite Simpson over `2^max_depth` equal panels (`abs_tol` unused).
    FixedPanel,
}

/// Quadrature configuration. The default is adaptive Simpson with an
/// absolute tolerance of `1e-12` and at most 40 recursive splits.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub method: QuadMethod,
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            method: QuadMethod::AdaptiveSimpson,
            abs_tol: 1e-12,
            max_depth: 40,
        }
    }
}

/// Integrates `f` over `[a, b]` with the given scheme.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> f64 {
    assert!(spec.abs_tol > 0.0, "abs_tol must be positive");
    assert!(spec.max_depth >= 1, "max_depth must be at least 1");
    if a == b {
        return 0.0;
    }
    match spec.method {
        QuadMethod::AdaptiveSimpson => {
            let fa = f(a);
            let fb = f(b);
            let (m, fm, whole) = simpson_step(f, a, fa, b, fb);
            adaptive(f, a, fa, m, fm, b, fb, whole, spec.abs_tol, spec.max_depth)
        }
        QuadMethod::FixedPanel => {
            let panels = 1usize << spec.max_depth.min(20);
            composite_simpson(f, a, b, panels)
        }
    }
}

/// Simpson estimate over `[a, b]`; returns the midpoint, its function value
/// and the panel integral.
fn simpson_step<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
}

#[allow(clippy::too_many_arguments)]
fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    m: f64,
    fm: f64,
    b: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth_left: u32,
) -> f64 {
    let (ml, fml, left) = simpson_step(f, a, fa, m, fm);
    let (mr, fmr, right) = simpson_step(f, m, fm, b, fb);
    let delta = left + right - whole;
    if depth_left == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        let half_tol = 0.5 * tol;
        adaptive(f, a, fa, ml, fml, m, fm, left, half_tol, depth_left - 1)
            + adaptive(f, m, fm, mr, fmr, b, fb, right, half_tol, depth_left - 1)
    }
}

fn composite_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    // Each panel contributes two subintervals of the 1-4-2-...-4-1 pattern.
    let n = 2 * panels;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += weight * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// Numerically averages the pointwise fidelity over the belt with weight
/// `sin θ`: the independent check of the closed-form mean fidelity.
///
/// `abs_tol` applies to the returned average (the integrand tolerance is
/// rescaled by the belt's weight mass). Degenerate belts are rejected.
pub fn quad_mean_fidelity(belt: &Belt, angles: CloneAngles, spec: &QuadratureSpec) -> Result<f64> {
    if belt.is_degenerate() {
        return Err(Error::DegenerateBelt {
            theta: belt.theta1(),
        });
    }
    // Denominator ∫ sin θ dθ in closed form.
    let mass = belt.theta1().cos() - belt.theta2().cos();
    let scaled = QuadratureSpec {
        abs_tol: (spec.abs_tol * mass).max(f64::MIN_POSITIVE),
        ..*spec
    };
    let integrand = |theta: f64| pointwise_fidelity(angles, theta) * theta.sin();
    let numerator = integrate(&integrand, belt.theta1(), belt.theta2(), &scaled);
    Ok(numerator / mass)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// computed by Newton iteration on the Legendre recurrence. Used internally
/// where many integrals of smooth integrands are needed per second.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Chebyshev-based initial guess for the i-th positive root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() <= 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = next;
    }
    let derivative = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, derivative)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn adaptive_simpson_on_polynomial_and_sine() {
        let spec = QuadratureSpec::default();
        let q = integrate(&|x: f64| x * x, 0.0, 1.0, &spec);
        assert!((q - 1.0 / 3.0).abs() <= 1e-14);

        let q = integrate(&|x: f64| x.sin(), 0.0, PI, &spec);
        assert!((q - 2.0).abs() <= 1e-13);
    }

    #[test]
    fn fixed_panel_agrees_with_adaptive() {
        let fixed = QuadratureSpec {
            method: QuadMethod::FixedPanel,
            abs_tol: 1e-12,
            max_depth: 10,
        };
        let q = integrate(&|x: f64| (3.0 * x).cos(), 0.0, 2.0, &fixed);
        assert!((q - (6.0_f64).sin() / 3.0).abs() <= 1e-10);
    }

    #[test]
    fn mean_fidelity_universal_machine() {
        let belt = Belt::new(0.0, PI).unwrap();
        let spec = QuadratureSpec::default();
        let f = quad_mean_fidelity(&belt, CloneAngles::universal(), &spec).unwrap();
        assert!((f - 5.0 / 6.0).abs() <= 1e-10);

        let f = quad_mean_fidelity(&belt, CloneAngles::new(0.0, 0.0), &spec).unwrap();
        assert!((f - 2.0 / 3.0).abs() <= 1e-10);
    }

    #[test]
    fn mean_fidelity_rejects_degenerate_belt() {
        let belt = Belt::new(1.3, 1.3).unwrap();
        assert!(quad_mean_fidelity(&belt, CloneAngles::universal(), &QuadratureSpec::default())
            .is_err());
    }

    #[test]
    fn gauss_legendre_integrates_high_degree_exactly() {
        let (nodes, weights) = gauss_legendre(8);
        // Degree-15 polynomial: x^14 integrates to 2/15 on [-1, 1].
        let q: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(x, w)| w * x.powi(14))
            .sum();
        assert!((q - 2.0 / 15.0).abs() <= 1e-14);
        let total: f64 = weights.iter().sum();
        assert!((total - 2.0).abs() <= 1e-14);
    }
}
