//! Closed-form analytics for state families on a latitude belt.
//!
//! For inputs distributed uniformly (surface measure, weight `sin θ`) between
//! polar angles `θ₁ ≤ θ ≤ θ₂`, the belt-averaged clone fidelity of the
//! machine with angles `(α, β)` collapses to
//!
//! ```text
//! F̄(α, β) = 1/2 + K/6 − P sin(α+β) − Q sin²α − R sin²β
//! ```
//!
//! with constants depending only on `c₁ = cos θ₁` and `c₂ = cos θ₂`:
//!
//! ```text
//! K = c₁² + c₁c₂ + c₂²            (three times the mean of cos²θ)
//! P = (√2/12) K − √2/4            (≤ 0; coefficient of sin(α+β))
//! Q = K/12 + (c₁+c₂)/8            (coefficient of sin²α)
//! R = K/12 − (c₁+c₂)/8            (coefficient of sin²β)
//! ```
//!
//! [`solve_optimal`] maximizes this expression exactly. The stationarity
//! system `P cos(α+β) + Q sin 2α = 0`, `P cos(α+β) + R sin 2β = 0` has the
//! interior solution
//!
//! ```text
//! 2α = arcsin[P(Q+R)/S] + arcsin[T],   2β = arcsin[P(Q+R)/S] − arcsin[T]
//! T  = P(Q−R)/(2QR),                   S = −√(4QRP² + 4Q²R²)
//! ```
//!
//! valid when `|T| ≤ 1` and the radicand is positive; otherwise the maximum
//! sits on the corner `(0, π/2)` or `(π/2, 0)` of the angle square. Rather
//! than trusting that case analysis alone, the solver evaluates every
//! candidate point and keeps the best, so correctness never hinges on the
//! branch derivation; the branch is reported as metadata.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

use crate::error::{Error, Result};
use crate::qsim::CloneAngles;

/// A latitude belt `θ₁ ≤ θ ≤ θ₂` on the Bloch sphere.
///
/// `θ₁ = θ₂` is allowed and describes a single latitude circle; the belt
/// average is degenerate there and handled by the pointwise fidelity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Belt {
    theta1: f64,
    theta2: f64,
}

impl Belt {
    pub fn new(theta1: f64, theta2: f64) -> Result<Self> {
        if !(theta1.is_finite() && theta2.is_finite())
            || theta1 < 0.0
            || theta2 > PI
            || theta1 > theta2
        {
            return Err(Error::InvalidBelt { theta1, theta2 });
        }
        Ok(Self { theta1, theta2 })
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    pub fn theta2(&self) -> f64 {
        self.theta2
    }

    /// True when the belt is a single latitude circle.
    pub fn is_degenerate(&self) -> bool {
        self.theta1 == self.theta2
    }

    /// The belt obtained by mirroring through the equator; optimal machines
    /// for the two belts are related by swapping `α ↔ β`.
    pub fn reflected(&self) -> Belt {
        Belt {
            theta1: PI - self.theta2,
            theta2: PI - self.theta1,
        }
    }
}

/// `cos θ`, with the equator pinned to exactly zero so that the constants of
/// symmetric and equatorial belts come out exact rather than O(1e-17) noise.
fn cos_lat(theta: f64) -> f64 {
    if theta == FRAC_PI_2 {
        0.0
    } else {
        theta.cos()
    }
}

/// The derived constants of a belt's averaged-fidelity expression.
///
/// `t` and `s` are the quantities steering the interior solution; each is
/// `None` where its defining expression is singular (`t` needs `QR ≠ 0`,
/// `s` needs a non-negative radicand).
#[derive(Debug, Clone, Copy)]
pub struct BeltConstants {
    pub k: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub t: Option<f64>,
    pub s: Option<f64>,
}

impl BeltConstants {
    /// The belt-averaged fidelity form evaluated at machine angles. For the
    /// constants of a degenerate belt this is exactly the pointwise fidelity
    /// at that latitude (the continuous limit of the average).
    pub fn fidelity(&self, angles: CloneAngles) -> f64 {
        0.5 + self.k / 6.0
            - self.p * (angles.alpha + angles.beta).sin()
            - self.q * angles.alpha.sin().powi(2)
            - self.r * angles.beta.sin().powi(2)
    }

    /// The interior stationary point of the fidelity form, when all parts of
    /// its closed form are defined and it lands inside the angle square
    /// `[0, π/2]²` (tiny numerical spill is clamped back in).
    pub fn interior_candidate(&self) -> Option<CloneAngles> {
        const SLACK: f64 = 1e-12;
        let t = self.t?;
        if t.is_nan() || t.abs() > 1.0 {
            return None;
        }
        let s = self.s?;
        if s == 0.0 {
            return None;
        }
        let sum_arg = self.p * (self.q + self.r) / s;
        if !sum_arg.is_finite() || sum_arg.abs() > 1.0 + SLACK {
            return None;
        }
        let sum = sum_arg.clamp(-1.0, 1.0).asin();
        let diff = t.asin();
        let alpha = 0.5 * (sum + diff);
        let beta = 0.5 * (sum - diff);
        if alpha < -SLACK || beta < -SLACK || alpha > FRAC_PI_2 + SLACK || beta > FRAC_PI_2 + SLACK
        {
            return None;
        }
        Some(CloneAngles::new(
            alpha.clamp(0.0, FRAC_PI_2),
            beta.clamp(0.0, FRAC_PI_2),
        ))
    }
}

/// Computes the averaged-fidelity constants of a belt.
pub fn belt_constants(belt: &Belt) -> BeltConstants {
    let c1 = cos_lat(belt.theta1);
    let c2 = cos_lat(belt.theta2);

    let k = c1 * c1 + c1 * c2 + c2 * c2;
    let p = SQRT_2 / 12.0 * k - SQRT_2 / 4.0;
    let half_sum = (c1 + c2) / 8.0;
    let q = k / 12.0 + half_sum;
    let r = k / 12.0 - half_sum;

    let qr = q * r;
    let t = if qr != 0.0 {
        Some(p * (q - r) / (2.0 * qr))
    } else {
        None
    };
    let radicand = 4.0 * qr * p * p + 4.0 * qr * qr;
    let s = if radicand >= 0.0 {
        Some(-radicand.sqrt())
    } else {
        None
    };

    BeltConstants { k, p, q, r, t, s }
}

/// Belt-averaged fidelity of the machine `(α, β)` over a non-degenerate belt.
///
/// For `θ₁ = θ₂` the defining average is 0/0; callers must use
/// [`crate::qsim::pointwise_fidelity`] at that latitude instead.
pub fn mean_fidelity(belt: &Belt, angles: CloneAngles) -> Result<f64> {
    if belt.is_degenerate() {
        return Err(Error::DegenerateBelt { theta: belt.theta1 });
    }
    Ok(belt_constants(belt).fidelity(angles))
}

/// Residuals of the two stationarity conditions at the given angles:
/// `r₁ = P cos(α+β) + Q sin 2α` and `r₂ = P cos(α+β) + R sin 2β`.
/// Both vanish at interior optima.
pub fn stationarity_residual(consts: &BeltConstants, angles: CloneAngles) -> (f64, f64) {
    let cross = consts.p * (angles.alpha + angles.beta).cos();
    (
        cross + consts.q * (2.0 * angles.alpha).sin(),
        cross + consts.r * (2.0 * angles.beta).sin(),
    )
}

/// Which part of the piecewise optimum produced a solver result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Interior stationary point of the averaged fidelity.
    Interior,
    /// Corner optimum `α = 0, β = π/2`.
    BoundaryAlpha0,
    /// Corner optimum `α = π/2, β = 0`.
    BoundaryBeta0,
    /// Single-latitude belt, maximized pointwise at that latitude.
    DegeneratePointBelt,
    /// A safety-net candidate won; not expected for any valid belt.
    DegenerateFallback,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Interior => "interior",
            Branch::BoundaryAlpha0 => "boundary_alpha0",
            Branch::BoundaryBeta0 => "boundary_beta0",
            Branch::DegeneratePointBelt => "degenerate_point_belt",
            Branch::DegenerateFallback => "degenerate_fallback",
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The optimal machine for a belt.
#[derive(Debug, Clone)]
pub struct OptimalCloneResult {
    pub angles: CloneAngles,
    /// Maximal mean fidelity (pointwise fidelity for a degenerate belt).
    pub fbar: f64,
    pub branch: Branch,
    /// Stationarity residuals at the reported angles.
    pub stationarity_residuals: (f64, f64),
}

/// Candidates equal within this are treated as ties and resolved by the
/// candidate preference order.
const TIE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Candidate {
    Interior,
    Alpha0,
    Beta0,
    Extra,
}

/// Finds the machine angles maximizing the belt-averaged fidelity.
///
/// The interior stationary point (when defined), both boundary corners, and
/// a few safety-net points are all evaluated; ties within `1e-12` go to the
/// earlier candidate, ordered interior first and then the corner favored by
/// `|θ₁ − π/2| ≥ |θ₂ − π/2|`. A degenerate belt maximizes the pointwise
/// fidelity at its single latitude (same algebraic form, limit constants)
/// and prefers the symmetric point `α = β = π/4` on ties, which picks the
/// canonical equatorial machine at `θ = π/2`.
pub fn solve_optimal(belt: &Belt) -> OptimalCloneResult {
    let consts = belt_constants(belt);
    let degenerate = belt.is_degenerate();

    let alpha0 = (CloneAngles::new(0.0, FRAC_PI_2), Candidate::Alpha0);
    let beta0 = (CloneAngles::new(FRAC_PI_2, 0.0), Candidate::Beta0);
    let prefer_alpha0 =
        (belt.theta1 - FRAC_PI_2).abs() >= (belt.theta2 - FRAC_PI_2).abs();

    let mut candidates: Vec<(CloneAngles, Candidate)> = Vec::with_capacity(6);
    if degenerate {
        candidates.push((CloneAngles::new(FRAC_PI_4, FRAC_PI_4), Candidate::Extra));
    } else if let Some(angles) = consts.interior_candidate() {
        candidates.push((angles, Candidate::Interior));
    }
    if prefer_alpha0 {
        candidates.push(alpha0);
        candidates.push(beta0);
    } else {
        candidates.push(beta0);
        candidates.push(alpha0);
    }
    candidates.push((CloneAngles::new(0.0, 0.0), Candidate::Extra));
    candidates.push((CloneAngles::new(FRAC_PI_2, FRAC_PI_2), Candidate::Extra));
    if !degenerate {
        candidates.push((CloneAngles::new(FRAC_PI_4, FRAC_PI_4), Candidate::Extra));
    }

    let (mut best_angles, mut best_kind) = candidates[0];
    let mut best_value = consts.fidelity(best_angles);
    for &(angles, kind) in &candidates[1..] {
        let value = consts.fidelity(angles);
        if value > best_value + TIE_TOL {
            best_angles = angles;
            best_kind = kind;
            best_value = value;
        }
    }

    let branch = if degenerate {
        Branch::DegeneratePointBelt
    } else {
        match best_kind {
            Candidate::Interior => Branch::Interior,
            Candidate::Alpha0 => Branch::BoundaryAlpha0,
            Candidate::Beta0 => Branch::BoundaryBeta0,
            Candidate::Extra => Branch::DegenerateFallback,
        }
    };

    OptimalCloneResult {
        angles: best_angles,
        fbar: best_value,
        branch,
        stationarity_residuals: stationarity_residual(&consts, best_angles),
    }
}

/// The `i`-th of `n+1` evenly spaced latitudes covering `[0, π]`, with the
/// last one pinned to exactly `π`.
pub fn grid_angle(index: usize, steps: usize) -> f64 {
    if index == steps {
        PI
    } else {
        index as f64 * PI / steps as f64
    }
}

/// Solves every belt on the triangular grid `0 ≤ θ₁ ≤ θ₂ ≤ π` with
/// `resolution` steps per axis, row-major in `θ₁` then `θ₂`. The diagonal
/// (single-latitude belts) is included. Yields
/// `(resolution+1)(resolution+2)/2` entries.
pub fn optimal_fidelity_surface(resolution: usize) -> Vec<(Belt, OptimalCloneResult)> {
    assert!(resolution >= 2, "surface grid needs at least 2 steps");
    let mut out = Vec::with_capacity((resolution + 1) * (resolution + 2) / 2);
    for i in 0..=resolution {
        let theta1 = grid_angle(i, resolution);
        for j in i..=resolution {
            let theta2 = grid_angle(j, resolution);
            let belt = Belt::new(theta1, theta2).expect("grid angles are valid");
            let result = solve_optimal(&belt);
            out.push((belt, result));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn belt_validation() {
        assert!(Belt::new(0.0, PI).is_ok());
        assert!(Belt::new(1.0, 1.0).is_ok());
        assert!(Belt::new(-0.1, 1.0).is_err());
        assert!(Belt::new(0.5, 0.4).is_err());
        assert!(Belt::new(0.0, PI + 0.1).is_err());
        assert!(Belt::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn constants_full_sphere() {
        let c = belt_constants(&Belt::new(0.0, PI).unwrap());
        assert_eq!(c.k, 1.0);
        assert!(close(c.p, -SQRT_2 / 6.0, 1e-16));
        assert!(close(c.q, 1.0 / 12.0, 1e-16));
        assert!(close(c.r, 1.0 / 12.0, 1e-16));
        assert!(close(c.t.unwrap(), 0.0, 1e-15));
    }

    #[test]
    fn constants_equator_point() {
        let c = belt_constants(&Belt::new(FRAC_PI_2, FRAC_PI_2).unwrap());
        assert_eq!(c.k, 0.0);
        assert!(close(c.p, -SQRT_2 / 4.0, 1e-16));
        assert_eq!(c.q, 0.0);
        assert_eq!(c.r, 0.0);
        assert!(c.t.is_none());
    }

    #[test]
    fn constants_symmetric_belt() {
        let c = belt_constants(&Belt::new(FRAC_PI_4, 3.0 * FRAC_PI_4).unwrap());
        assert!(close(c.k, 0.5, 1e-15));
        assert!(close(c.p, -5.0 * SQRT_2 / 24.0, 1e-15));
        assert!(close(c.q, 1.0 / 24.0, 1e-15));
        assert!(close(c.r, 1.0 / 24.0, 1e-15));
        assert!(close(c.t.unwrap(), 0.0, 1e-12));
    }

    #[test]
    fn mean_fidelity_known_values() {
        let sphere = Belt::new(0.0, PI).unwrap();
        assert!(close(
            mean_fidelity(&sphere, CloneAngles::universal()).unwrap(),
            5.0 / 6.0,
            1e-14
        ));
        assert!(close(
            mean_fidelity(&sphere, CloneAngles::new(0.0, 0.0)).unwrap(),
            2.0 / 3.0,
            1e-15
        ));

        let symmetric = Belt::new(FRAC_PI_4, 3.0 * FRAC_PI_4).unwrap();
        assert!(close(
            mean_fidelity(&symmetric, CloneAngles::new(0.0, 0.0)).unwrap(),
            7.0 / 12.0,
            1e-15
        ));
    }

    #[test]
    fn mean_fidelity_rejects_degenerate_belt() {
        let circle = Belt::new(1.0, 1.0).unwrap();
        assert!(matches!(
            mean_fidelity(&circle, CloneAngles::universal()),
            Err(Error::DegenerateBelt { .. })
        ));
    }

    #[test]
    fn stationarity_examples() {
        let sphere = belt_constants(&Belt::new(0.0, PI).unwrap());
        let (r1, r2) = stationarity_residual(&sphere, CloneAngles::universal());
        assert!(r1.abs() <= 1e-14);
        assert!(r2.abs() <= 1e-14);

        let (r1, r2) =
            stationarity_residual(&sphere, CloneAngles::new(FRAC_PI_2, FRAC_PI_2));
        assert!(close(r1, -sphere.p, 1e-16));
        assert!(close(r2, -sphere.p, 1e-16));

        let equator = belt_constants(&Belt::new(FRAC_PI_2, FRAC_PI_2).unwrap());
        let (r1, r2) = stationarity_residual(&equator, CloneAngles::equatorial());
        assert!(r1.abs() <= 1e-16);
        assert!(r2.abs() <= 1e-16);
    }

    #[test]
    fn solve_full_sphere_recovers_universal_machine() {
        let result = solve_optimal(&Belt::new(0.0, PI).unwrap());
        assert_eq!(result.branch, Branch::Interior);
        assert!(close(result.fbar, 5.0 / 6.0, 1e-13));
        let expected = (2.0_f64 / 3.0).sqrt();
        assert!(close(result.angles.alpha.cos(), expected, 1e-12));
        assert!(close(result.angles.beta.cos(), expected, 1e-12));
        assert!(result.stationarity_residuals.0.abs() <= 1e-10);
        assert!(result.stationarity_residuals.1.abs() <= 1e-10);
    }

    #[test]
    fn solve_equator_point_recovers_equatorial_machine() {
        let result = solve_optimal(&Belt::new(FRAC_PI_2, FRAC_PI_2).unwrap());
        assert_eq!(result.branch, Branch::DegeneratePointBelt);
        assert!(close(result.fbar, 0.5 * (1.0 + FRAC_1_SQRT_2), 1e-13));
        assert!(close(result.angles.alpha, FRAC_PI_4, 1e-15));
        assert!(close(result.angles.beta, FRAC_PI_4, 1e-15));
    }

    #[test]
    fn solve_symmetric_belt_interior_value() {
        // Stationarity with Q = R forces α = β and tan 2α = −P/Q, giving
        // F̄* = 1/2 + K/6 − Q + √(P² + Q²) = (13 + √51)/24 for this belt.
        let result = solve_optimal(&Belt::new(FRAC_PI_4, 3.0 * FRAC_PI_4).unwrap());
        assert_eq!(result.branch, Branch::Interior);
        let expected = (13.0 + 51.0_f64.sqrt()) / 24.0;
        assert!(close(result.fbar, expected, 1e-13));
        assert!(close(result.angles.alpha, result.angles.beta, 1e-12));
    }

    #[test]
    fn solve_north_half_hits_boundary() {
        let belt = Belt::new(0.0, FRAC_PI_2).unwrap();
        let consts = belt_constants(&belt);
        // |T| > 1 here, so the interior formula is out of play.
        assert!(consts.t.is_none_or(|t| t.abs() > 1.0));
        assert!((belt.theta1() - FRAC_PI_2).abs() >= (belt.theta2() - FRAC_PI_2).abs());

        let result = solve_optimal(&belt);
        assert_eq!(result.branch, Branch::BoundaryAlpha0);
        assert_eq!(result.angles.alpha, 0.0);
        assert_eq!(result.angles.beta, FRAC_PI_2);
        // 1/2 + K/6 − P − R with K = 1, P = −√2/6, R = −1/24.
        let expected = 17.0 / 24.0 + SQRT_2 / 6.0;
        assert!(close(result.fbar, expected, 1e-14));
    }

    #[test]
    fn surface_smallest_grid() {
        let cells = optimal_fidelity_surface(2);
        assert_eq!(cells.len(), 6);

        let full = cells
            .iter()
            .find(|(b, _)| b.theta1() == 0.0 && b.theta2() == PI)
            .unwrap();
        assert!(close(full.1.fbar, 5.0 / 6.0, 1e-13));

        let equator = cells
            .iter()
            .find(|(b, _)| b.theta1() == FRAC_PI_2 && b.theta2() == FRAC_PI_2)
            .unwrap();
        assert!(close(equator.1.fbar, 0.5 * (1.0 + FRAC_1_SQRT_2), 1e-13));

        for (_, result) in &cells {
            assert!(result.fbar >= 5.0 / 6.0 - 1e-12);
            assert!(result.fbar <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn reflection_swaps_angles() {
        let belt = Belt::new(0.3, 1.1).unwrap();
        let mirrored = belt.reflected();
        let a = solve_optimal(&belt);
        let b = solve_optimal(&mirrored);
        assert!(close(a.fbar, b.fbar, 1e-13));
        assert!(close(a.angles.alpha, b.angles.beta, 1e-10));
        assert!(close(a.angles.beta, b.angles.alpha, 1e-10));
    }
}
