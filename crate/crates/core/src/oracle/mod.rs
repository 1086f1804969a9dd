//! Independent brute-force verification of the closed-form results.
//!
//! Three oracles, each deliberately avoiding the code path it checks:
//!
//! * [`quad::quad_mean_fidelity`] integrates the pointwise fidelity
//!   numerically and checks the averaged closed form and its constants.
//! * [`optimize_angles_numeric`] maximizes the averaged fidelity over the
//!   machine angles by coarse grid search plus simplex refinement and checks
//!   the piecewise analytic solver.
//! * [`optimize_general_isometry`] drops the two-parameter ansatz entirely
//!   and searches over all 8×2 isometries (one-qubit ancilla), maximizing
//!   the belt average of `min(F_a, F_b)`. The symmetric machine should never
//!   be beaten beyond numerical tolerance; a persistent gap would be a real
//!   finding about the ansatz and must be reported, not suppressed.
//!
//! All randomized searches draw their restarts from a seeded `ChaCha8Rng`
//! and record the seed, so every result is bit-reproducible.

pub mod quad;

mod nelder_mead;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::belt::{belt_constants, Belt};
use crate::error::{Error, Result};
use crate::qsim::{
    orthonormality_deviation, partial_trace, pointwise_fidelity, state_fidelity, CloneAngles,
    MultiQubitState, PureQubit, QUBIT_A, QUBIT_B,
};
use nelder_mead::{minimize, SimplexOptions};

/// Number of Gauss–Legendre nodes for the polar average inside the general
/// isometry search. The smooth part of the integrand is a low-degree
/// trigonometric polynomial, so this is already far past convergence.
const THETA_NODES: usize = 24;
/// Number of uniform azimuth nodes; the azimuth average of each clone's
/// fidelity is exact for any periodic rule with five or more points.
const PHI_NODES: usize = 64;

const ISOMETRY_TOL: f64 = 1e-12;

/// An arbitrary cloning machine: any 8×2 matrix with orthonormal columns,
/// column `k` holding the image of input `|k⟩` with blank and ancilla
/// attached. No symmetry between the clones is assumed.
#[derive(Debug, Clone)]
pub struct GeneralMachine {
    cols: [[Complex64; 8]; 2],
}

impl GeneralMachine {
    /// Validates orthonormality of the columns to `1e-12`.
    pub fn new(cols: [[Complex64; 8]; 2]) -> Result<Self> {
        let deviation = orthonormality_deviation(&cols);
        if deviation > ISOMETRY_TOL {
            return Err(Error::NotIsometric { deviation });
        }
        Ok(Self { cols })
    }

    /// Builds a machine from 32 unconstrained reals (two complex 8-vectors)
    /// by normalizing the first vector and Gram–Schmidt-orthonormalizing the
    /// second against it. `None` when either column degenerates.
    pub fn from_params(params: &[f64]) -> Option<Self> {
        assert_eq!(params.len(), 32, "expected 32 parameters");
        let mut v0 = [Complex64::ZERO; 8];
        let mut v1 = [Complex64::ZERO; 8];
        for i in 0..8 {
            v0[i] = Complex64::new(params[2 * i], params[2 * i + 1]);
            v1[i] = Complex64::new(params[16 + 2 * i], params[16 + 2 * i + 1]);
        }

        let n0 = v0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n0 < 1e-8 {
            return None;
        }
        for z in v0.iter_mut() {
            *z /= n0;
        }

        let overlap: Complex64 = v0.iter().zip(&v1).map(|(a, b)| a.conj() * b).sum();
        for (w, a) in v1.iter_mut().zip(&v0) {
            *w -= overlap * a;
        }
        let n1 = v1.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n1 < 1e-8 {
            return None;
        }
        for z in v1.iter_mut() {
            *z /= n1;
        }

        Some(Self { cols: [v0, v1] })
    }

    /// The symmetric machine with the given angles, as a general machine.
    pub fn from_clone_angles(angles: CloneAngles) -> Self {
        let iso = crate::qsim::build_clone_isometry(angles);
        Self {
            cols: [*iso.column(0), *iso.column(1)],
        }
    }

    pub fn column(&self, k: usize) -> &[Complex64; 8] {
        &self.cols[k]
    }

    pub fn orthonormality_deviation(&self) -> f64 {
        orthonormality_deviation(&self.cols)
    }

    fn output_amplitudes(&self, a0: Complex64, a1: Complex64) -> [Complex64; 8] {
        let mut out = [Complex64::ZERO; 8];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = a0 * self.cols[0][i] + a1 * self.cols[1][i];
        }
        out
    }

    /// Applies the machine to a qubit, producing the joint `(a, b, x)` state.
    pub fn apply(&self, input: &PureQubit) -> MultiQubitState {
        let [a0, a1] = input.amplitudes();
        MultiQubitState::new(self.output_amplitudes(a0, a1).to_vec())
            .expect("isometry output is normalized")
    }
}

/// The maximizer found by an oracle search.
#[derive(Debug, Clone)]
pub enum OracleBest {
    Angles(CloneAngles),
    Isometry(Box<GeneralMachine>),
}

/// Outcome of a brute-force maximization, with enough metadata to reproduce
/// it exactly.
#[derive(Debug, Clone)]
pub struct OracleResult {
    pub best: OracleBest,
    pub fbar: f64,
    pub n_restarts: u32,
    pub seed: u64,
    pub converged: bool,
}

impl OracleResult {
    pub fn best_angles(&self) -> Option<CloneAngles> {
        match &self.best {
            OracleBest::Angles(angles) => Some(*angles),
            OracleBest::Isometry(_) => None,
        }
    }

    pub fn best_isometry(&self) -> Option<&GeneralMachine> {
        match &self.best {
            OracleBest::Isometry(machine) => Some(machine),
            OracleBest::Angles(_) => None,
        }
    }
}

/// Maximizes the belt-averaged fidelity over the machine angles without any
/// case analysis: dense grid over `[0, π]²` followed by simplex refinement
/// from the best few cells. Deterministic for fixed inputs.
///
/// For a degenerate belt the objective is the pointwise fidelity at its
/// latitude, evaluated through the closed-form route that the simulation
/// suite independently validates.
pub fn optimize_angles_numeric(
    belt: &Belt,
    grid_steps: usize,
    refine_iters: usize,
) -> OracleResult {
    assert!(grid_steps >= 8, "angle grid needs at least 8 steps");

    let objective: Box<dyn Fn(CloneAngles) -> f64> = if belt.is_degenerate() {
        let theta = belt.theta1();
        Box::new(move |angles| pointwise_fidelity(angles, theta))
    } else {
        let consts = belt_constants(belt);
        Box::new(move |angles| consts.fidelity(angles))
    };

    // Coarse pass: keep the three best grid cells as refinement seeds.
    let mut top: Vec<(f64, CloneAngles)> = Vec::with_capacity(4);
    for i in 0..=grid_steps {
        let alpha = i as f64 * PI / grid_steps as f64;
        for j in 0..=grid_steps {
            let beta = j as f64 * PI / grid_steps as f64;
            let angles = CloneAngles::new(alpha, beta);
            let value = objective(angles);
            if top.len() < 3 {
                top.push((value, angles));
                top.sort_by(|a, b| b.0.total_cmp(&a.0));
            } else if value > top[2].0 {
                top[2] = (value, angles);
                top.sort_by(|a, b| b.0.total_cmp(&a.0));
            }
        }
    }

    let step = PI / grid_steps as f64;
    let mut best_value = f64::NEG_INFINITY;
    let mut best_angles = top[0].1;
    let mut best_converged = false;
    for &(_, seed_angles) in &top {
        let outcome = minimize(
            |x| -objective(CloneAngles::new(x[0], x[1])),
            &[seed_angles.alpha, seed_angles.beta],
            &SimplexOptions {
                max_iters: refine_iters,
                size_tol: 1e-12,
                step: 0.5 * step,
            },
        );
        if -outcome.value > best_value {
            best_value = -outcome.value;
            best_angles = CloneAngles::new(outcome.point[0], outcome.point[1]);
            best_converged = outcome.converged;
        }
    }

    OracleResult {
        best: OracleBest::Angles(best_angles),
        fbar: best_value,
        n_restarts: top.len() as u32,
        seed: 0,
        converged: best_converged,
    }
}

/// Precomputed quadrature nodes for the belt average of a pointwise quantity
/// that depends on the input state. Weights are positive and sum to one.
struct BeltNodes {
    /// `(a0, a1, weight)` per node: input amplitudes and combined weight.
    entries: Vec<(Complex64, Complex64, f64)>,
}

impl BeltNodes {
    fn for_belt(belt: &Belt) -> Self {
        let thetas: Vec<(f64, f64)> = if belt.is_degenerate() {
            vec![(belt.theta1(), 1.0)]
        } else {
            let (nodes, weights) = quad::gauss_legendre(THETA_NODES);
            let mid = 0.5 * (belt.theta1() + belt.theta2());
            let half = 0.5 * (belt.theta2() - belt.theta1());
            let raw: Vec<(f64, f64)> = nodes
                .iter()
                .zip(&weights)
                .map(|(x, w)| {
                    let theta = mid + half * x;
                    (theta, w * theta.sin())
                })
                .collect();
            let mass: f64 = raw.iter().map(|(_, w)| w).sum();
            raw.into_iter().map(|(t, w)| (t, w / mass)).collect()
        };

        let mut entries = Vec::with_capacity(thetas.len() * PHI_NODES);
        for &(theta, w_theta) in &thetas {
            let a0 = Complex64::new((0.5 * theta).cos(), 0.0);
            let sin_half = (0.5 * theta).sin();
            for l in 0..PHI_NODES {
                let phi = 2.0 * PI * l as f64 / PHI_NODES as f64;
                let a1 = Complex64::from_polar(sin_half, phi);
                entries.push((a0, a1, w_theta / PHI_NODES as f64));
            }
        }
        Self { entries }
    }

    /// Belt average of `min(F_a, F_b)` for an arbitrary machine.
    fn average_min_fidelity(&self, machine: &GeneralMachine) -> f64 {
        let mut acc = 0.0;
        for &(a0, a1, weight) in &self.entries {
            let out = machine.output_amplitudes(a0, a1);

            // Reduced matrices of clones a (MSB) and b (middle bit) written
            // out by index groups; cheaper than going through DensityMatrix.
            let mut a00 = 0.0;
            let mut a11 = 0.0;
            let mut a01 = Complex64::ZERO;
            for rest in 0..4 {
                let u = out[rest];
                let v = out[4 + rest];
                a00 += u.norm_sqr();
                a11 += v.norm_sqr();
                a01 += u * v.conj();
            }

            let mut b00 = 0.0;
            let mut b11 = 0.0;
            let mut b01 = Complex64::ZERO;
            for &(lo, hi) in &[(0usize, 2usize), (1, 3), (4, 6), (5, 7)] {
                let u = out[lo];
                let v = out[hi];
                b00 += u.norm_sqr();
                b11 += v.norm_sqr();
                b01 += u * v.conj();
            }

            // F = |ψ₀|²ρ₀₀ + |ψ₁|²ρ₁₁ + 2 Re[ψ₀* ψ₁ ρ₀₁].
            let cross = a0.conj() * a1;
            let f_a = a0.norm_sqr() * a00 + a1.norm_sqr() * a11 + 2.0 * (cross * a01).re;
            let f_b = a0.norm_sqr() * b00 + a1.norm_sqr() * b11 + 2.0 * (cross * b01).re;
            acc += weight * f_a.min(f_b);
        }
        acc
    }
}

/// Maximizes the belt-averaged worst-clone fidelity `⟨min(F_a, F_b)⟩` over
/// all 8×2 isometries with a one-qubit ancilla.
///
/// Each restart draws a 32-parameter start from the seeded generator and
/// runs a capped simplex search; the incumbent best is then polished by a
/// few more capped runs with shrinking initial simplices. Identical
/// `(belt, restarts, seed)` always produce the identical result, and ties
/// between restarts go to the earliest one.
pub fn optimize_general_isometry(belt: &Belt, restarts: u32, seed: u64) -> OracleResult {
    assert!(restarts >= 1, "need at least one restart");
    let nodes = BeltNodes::for_belt(belt);
    let objective = |params: &[f64]| -> f64 {
        match GeneralMachine::from_params(params) {
            Some(machine) => -nodes.average_min_fidelity(&machine),
            // Degenerate parametrization: worse than any valid machine.
            None => 1.0,
        }
    };

    // All restart locations come from one seeded stream, drawn up front so
    // the search loop itself could run in any order.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<Vec<f64>> = (0..restarts)
        .map(|_| (0..32).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();

    let mut best_value = f64::INFINITY;
    let mut best_point: Vec<f64> = Vec::new();
    for start in &starts {
        let outcome = minimize(
            objective,
            start,
            &SimplexOptions {
                max_iters: 2000,
                size_tol: 1e-12,
                step: 0.25,
            },
        );
        if outcome.value < best_value {
            best_value = outcome.value;
            best_point = outcome.point;
        }
    }

    // Deterministic polish of the incumbent: restart the simplex at the best
    // point with progressively smaller spread. The search counts as converged
    // once the final polish round stops paying (improvement below 1e-9); a
    // 32-dimensional simplex essentially never collapses to the size stop
    // within the iteration cap, so simplex size alone is the wrong signal.
    let mut last_gain = f64::INFINITY;
    for &step in &[0.05, 0.01, 0.002, 0.0005, 0.0001] {
        let outcome = minimize(
            objective,
            &best_point,
            &SimplexOptions {
                max_iters: 2000,
                size_tol: 1e-12,
                step,
            },
        );
        last_gain = best_value - outcome.value;
        if outcome.value < best_value {
            best_value = outcome.value;
            best_point = outcome.point;
        }
    }

    let machine = GeneralMachine::from_params(&best_point)
        .expect("polished optimum is a valid isometry");
    OracleResult {
        best: OracleBest::Isometry(Box::new(machine)),
        fbar: -best_value,
        n_restarts: restarts,
        seed,
        converged: last_gain.abs() < 1e-9,
    }
}

/// Worst-clone and symmetrized fidelities of an arbitrary machine on one
/// input: `F_min = min(F_a, F_b)` and `F_sym = ⟨ψ|(ρ_a+ρ_b)/2|ψ⟩`.
///
/// `F_sym` is computed as the midpoint of the two clone fidelities, which is
/// the same number by linearity and makes `F_sym ≥ F_min` hold exactly in
/// floating point. Randomizing over the machine and its clone-swapped twin
/// therefore never loses worst-clone fidelity.
pub fn symmetrized_fidelity(machine: &GeneralMachine, input: &PureQubit) -> (f64, f64) {
    let state = machine.apply(input);
    let rho_a = partial_trace(&state, QUBIT_A).expect("three-qubit state");
    let rho_b = partial_trace(&state, QUBIT_B).expect("three-qubit state");
    let f_a = state_fidelity(input, &rho_a);
    let f_b = state_fidelity(input, &rho_b);
    (f_a.min(f_b), 0.5 * (f_a + f_b))
}

/// Belt average of `min(F_a, F_b)` for an arbitrary machine, on the same
/// quadrature grid the general-isometry search optimizes. Exposed so tests
/// can score hand-built machines against search results.
pub fn belt_min_fidelity(belt: &Belt, machine: &GeneralMachine) -> f64 {
    BeltNodes::for_belt(belt).average_min_fidelity(machine)
}
