//! Optimal symmetric 1→2 cloning of qubit states drawn from a latitude belt
//! of the Bloch sphere.
//!
//! The input family is `cos(θ/2)|0⟩ + sin(θ/2)e^{iφ}|1⟩` with `θ₁ ≤ θ ≤ θ₂`
//! and uniform azimuth. A two-parameter symmetric machine covers the whole
//! range of belts: bringing the latitudes to the poles reproduces the
//! universal copier (fidelity 5/6), collapsing them onto the equator
//! reproduces the optimal equatorial copier (fidelity `(1 + 1/√2)/2`), and
//! everything in between has a closed-form optimum that this crate computes
//! and cross-checks.
//!
//! The crate is organized around three layers:
//!
//! * [`qsim`] — exact dense three-qubit state algebra: build input kets,
//!   apply the cloning isometry, reduce clones by partial trace, and score
//!   fidelities both by simulation and by the closed pointwise formula.
//! * [`belt`] — the analytic layer: belt constants, the averaged fidelity,
//!   stationarity residuals, and the piecewise optimal solution over belts.
//! * [`oracle`] — independent brute force: adaptive quadrature for the
//!   average, derivative-free maximization over the machine angles, and an
//!   unconstrained search over all 8×2 isometries that probes whether any
//!   asymmetric machine can beat the symmetric optimum.
//!
//! Everything is pure and deterministic; randomized searches take explicit
//! seeds and record them in their results.

pub mod belt;
pub mod error;
pub mod oracle;
pub mod qsim;

pub use belt::{
    belt_constants, grid_angle, mean_fidelity, optimal_fidelity_surface, solve_optimal,
    stationarity_residual, Belt, BeltConstants, Branch, OptimalCloneResult,
};
pub use error::{Error, Result};
pub use oracle::quad::{integrate, quad_mean_fidelity, QuadMethod, QuadratureSpec};
pub use oracle::{
    belt_min_fidelity, optimize_angles_numeric, optimize_general_isometry, symmetrized_fidelity,
    GeneralMachine, OracleBest, OracleResult,
};
pub use qsim::{
    apply_clone, build_clone_isometry, make_ket, partial_trace, pointwise_fidelity,
    simulated_fidelity, state_fidelity, CloneAngles, CloneIsometry, DensityMatrix,
    MultiQubitState, PureQubit, QUBIT_A, QUBIT_B, QUBIT_X,
};
