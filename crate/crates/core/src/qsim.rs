//! Exact state algebra for the three-qubit cloning circuit.
//!
//! Everything here works on a fixed register layout `(a, b, x)`: qubit `a`
//! carries the input state, qubit `b` starts blank in `|0⟩`, and `x` is the
//! machine ancilla. Basis states are indexed by the bitstring `abx` with `a`
//! in the most significant position, and the ancilla levels are encoded as
//! `↑ ≡ 0`, `↓ ≡ 1`, so `|a b x⟩` sits at index `4a + 2b + x`.
//!
//! The cloning machine itself is the two-parameter isometry
//!
//! ```text
//! |0⟩ ↦ cos α |000⟩ + (sin α/√2)(|011⟩ + |101⟩)
//! |1⟩ ↦ cos β |111⟩ + (sin β/√2)(|010⟩ + |100⟩)
//! ```
//!
//! whose columns are orthonormal for every real `(α, β)` because they touch
//! disjoint basis states. With three qubits at most, plain dense `Complex64`
//! arithmetic is exact enough and anything fancier would only obscure the
//! formulas.

use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

use crate::error::{Error, Result};

/// Index of the qubit that carried the input state (first clone).
pub const QUBIT_A: usize = 0;
/// Index of the blank qubit that receives the second clone.
pub const QUBIT_B: usize = 1;
/// Index of the machine ancilla.
pub const QUBIT_X: usize = 2;

const NORM_TOL: f64 = 1e-13;
const HERMITICITY_TOL: f64 = 1e-13;
const TRACE_TOL: f64 = 1e-13;

/// The two machine parameters of the cloning isometry.
///
/// The solver only ever produces angles in `[0, π/2]`, but any real pair is
/// accepted as simulation input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CloneAngles {
    pub alpha: f64,
    pub beta: f64,
}

impl CloneAngles {
    pub fn new(alpha: f64, beta: f64) -> Self {
        Self { alpha, beta }
    }

    /// Angles of the machine that copies every pure state with fidelity 5/6:
    /// `α = β = arccos √(2/3)`.
    pub fn universal() -> Self {
        let angle = (2.0_f64 / 3.0).sqrt().acos();
        Self::new(angle, angle)
    }

    /// Angles of the machine that is optimal for equatorial states:
    /// `α = β = π/4`, fidelity `(1 + 1/√2)/2`.
    pub fn equatorial() -> Self {
        Self::new(FRAC_PI_4, FRAC_PI_4)
    }
}

/// A pure qubit state `cos(θ/2)|0⟩ + sin(θ/2) e^{iφ}|1⟩` in canonical form.
///
/// The global phase is fixed by keeping the `|0⟩` amplitude real and
/// non-negative, which makes states comparable entrywise in tests.
#[derive(Debug, Clone, Copy)]
pub struct PureQubit {
    theta: f64,
    phi: f64,
    amplitudes: [Complex64; 2],
}

impl PureQubit {
    /// Polar angle in `[0, π]`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Azimuthal angle in `[0, 2π)`.
    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn amplitudes(&self) -> [Complex64; 2] {
        self.amplitudes
    }
}

/// Builds the canonical ket for Bloch angles `(θ, φ)`.
///
/// `θ` must lie in `[0, π]` and `φ` in `[0, 2π)`; anything else (including
/// non-finite values) is a domain error.
pub fn make_ket(theta: f64, phi: f64) -> Result<PureQubit> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::AngleOutOfRange {
            name: "theta",
            value: theta,
            min: 0.0,
            max: PI,
        });
    }
    let tau = 2.0 * PI;
    if !(0.0..tau).contains(&phi) {
        return Err(Error::AngleOutOfRange {
            name: "phi",
            value: phi,
            min: 0.0,
            max: tau,
        });
    }
    Ok(PureQubit {
        theta,
        phi,
        amplitudes: ket_amplitudes(theta, phi),
    })
}

fn ket_amplitudes(theta: f64, phi: f64) -> [Complex64; 2] {
    let half = 0.5 * theta;
    [
        Complex64::new(half.cos(), 0.0),
        Complex64::from_polar(half.sin(), phi),
    ]
}

/// A normalized state of one, two or three qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiQubitState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl MultiQubitState {
    /// Wraps an amplitude vector, inferring the qubit count from its length
    /// (2, 4 or 8) and checking normalization to `1e-13`.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n_qubits = match amplitudes.len() {
            2 => 1,
            4 => 2,
            8 => 3,
            len => return Err(Error::BadStateDimension { len }),
        };
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    fn from_normalized(n_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_qubits);
        Self {
            n_qubits,
            amplitudes,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn squared_norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// A Hermitian, unit-trace matrix stored dense in row-major order.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    /// Wraps a row-major entry vector after checking Hermiticity and unit
    /// trace to `1e-13`. Positivity is not enforced here; callers that care
    /// check [`DensityMatrix::min_eigenvalue`].
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        assert_eq!(entries.len(), dim * dim, "entry count must be dim^2");
        let candidate = Self { dim, entries };
        let deviation = candidate.hermiticity_deviation();
        if deviation > HERMITICITY_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = candidate.trace();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotOne { trace });
        }
        Ok(candidate)
    }

    fn new_unchecked(dim: usize, entries: Vec<Complex64>) -> Self {
        debug_assert_eq!(entries.len(), dim * dim);
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    /// Real part of the trace; the imaginary part is zero for any matrix
    /// assembled from `ψψ*` sums.
    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.entry(i, i).re).sum()
    }

    /// Largest entrywise deviation from `ρ = ρ†`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let d = (self.entry(i, j) - self.entry(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Smallest eigenvalue of a 2×2 Hermitian matrix by the closed form
    /// `m ± √(d² + |ρ01|²)`; avoids pulling in a general eigensolver.
    pub fn min_eigenvalue(&self) -> f64 {
        assert_eq!(self.dim, 2, "closed-form eigenvalues are for 2x2 only");
        let a = self.entry(0, 0).re;
        let b = self.entry(1, 1).re;
        let mid = 0.5 * (a + b);
        let half_gap = 0.5 * (a - b);
        mid - (half_gap * half_gap + self.entry(0, 1).norm_sqr()).sqrt()
    }

    /// Largest entrywise distance to another matrix of the same dimension.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

/// The cloning map restricted to its physical input subspace: an 8×2 matrix
/// whose column `k` is the image of the computational input `|k⟩` tensored
/// with the fixed blank-and-ancilla state `|0⟩_b |↑⟩_x`.
#[derive(Debug, Clone)]
pub struct CloneIsometry {
    cols: [[Complex64; 8]; 2],
}

impl CloneIsometry {
    pub fn column(&self, k: usize) -> &[Complex64; 8] {
        &self.cols[k]
    }

    /// Largest deviation of `V†V` from the 2×2 identity.
    pub fn orthonormality_deviation(&self) -> f64 {
        orthonormality_deviation(&self.cols)
    }

    /// Applies the isometry to a single-qubit input, producing the joint
    /// three-qubit output state.
    pub fn apply(&self, input: &PureQubit) -> MultiQubitState {
        let [a0, a1] = input.amplitudes();
        let mut out = vec![Complex64::ZERO; 8];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = a0 * self.cols[0][i] + a1 * self.cols[1][i];
        }
        MultiQubitState::from_normalized(3, out)
    }
}

pub(crate) fn orthonormality_deviation(cols: &[[Complex64; 8]; 2]) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..2 {
        for j in 0..2 {
            let dot: Complex64 = (0..8).map(|k| cols[i][k].conj() * cols[j][k]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot - target).norm());
        }
    }
    worst
}

/// Materializes the cloning isometry for the given machine angles.
pub fn build_clone_isometry(angles: CloneAngles) -> CloneIsometry {
    let (sin_a, cos_a) = angles.alpha.sin_cos();
    let (sin_b, cos_b) = angles.beta.sin_cos();
    let w = FRAC_1_SQRT_2;

    let mut cols = [[Complex64::ZERO; 8]; 2];
    // Image of |0⟩: cos α |000⟩ + (sin α/√2)(|011⟩ + |101⟩).
    cols[0][0b000] = Complex64::new(cos_a, 0.0);
    cols[0][0b011] = Complex64::new(sin_a * w, 0.0);
    cols[0][0b101] = Complex64::new(sin_a * w, 0.0);
    // Image of |1⟩: cos β |111⟩ + (sin β/√2)(|010⟩ + |100⟩).
    cols[1][0b111] = Complex64::new(cos_b, 0.0);
    cols[1][0b010] = Complex64::new(sin_b * w, 0.0);
    cols[1][0b100] = Complex64::new(sin_b * w, 0.0);

    CloneIsometry { cols }
}

pub(crate) fn clone_output_amplitudes(
    angles: CloneAngles,
    a0: Complex64,
    a1: Complex64,
) -> [Complex64; 8] {
    let (sin_a, cos_a) = angles.alpha.sin_cos();
    let (sin_b, cos_b) = angles.beta.sin_cos();
    let w = FRAC_1_SQRT_2;

    let mut out = [Complex64::ZERO; 8];
    out[0b000] = a0 * cos_a;
    out[0b011] = a0 * (sin_a * w);
    out[0b101] = a0 * (sin_a * w);
    out[0b111] = a1 * cos_b;
    out[0b010] = a1 * (sin_b * w);
    out[0b100] = a1 * (sin_b * w);
    out
}

/// Runs the cloning map on a qubit, returning the joint `(a, b, x)` state.
pub fn apply_clone(angles: CloneAngles, input: &PureQubit) -> MultiQubitState {
    let [a0, a1] = input.amplitudes();
    MultiQubitState::from_normalized(3, clone_output_amplitudes(angles, a0, a1).to_vec())
}

/// Reduces a joint state to the 2×2 density matrix of the qubit at `keep`,
/// summing over the computational basis of every other qubit.
pub fn partial_trace(state: &MultiQubitState, keep: usize) -> Result<DensityMatrix> {
    let n = state.n_qubits();
    if keep >= n {
        return Err(Error::QubitIndexOutOfRange {
            index: keep,
            n_qubits: n,
        });
    }
    // Bit position of `keep` inside the basis index (qubit 0 is the MSB).
    let shift = n - 1 - keep;
    let insert = |rest: usize, bit: usize| -> usize {
        let low = rest & ((1 << shift) - 1);
        let high = rest >> shift;
        (high << (shift + 1)) | (bit << shift) | low
    };

    let mut rho = [Complex64::ZERO; 4];
    for rest in 0..(1usize << (n - 1)) {
        for i in 0..2 {
            for j in 0..2 {
                let u = state.amplitude(insert(rest, i));
                let v = state.amplitude(insert(rest, j));
                rho[i * 2 + j] += u * v.conj();
            }
        }
    }
    Ok(DensityMatrix::new_unchecked(2, rho.to_vec()))
}

/// Overlap `⟨ψ|ρ|ψ⟩` between a pure state and a single-qubit density matrix.
pub fn state_fidelity(psi: &PureQubit, rho: &DensityMatrix) -> f64 {
    assert_eq!(rho.dim(), 2, "state_fidelity expects a single-qubit matrix");
    fidelity_from_amplitudes(psi.amplitudes(), rho)
}

pub(crate) fn fidelity_from_amplitudes(amps: [Complex64; 2], rho: &DensityMatrix) -> f64 {
    let [a0, a1] = amps;
    let row0 = rho.entry(0, 0) * a0 + rho.entry(0, 1) * a1;
    let row1 = rho.entry(1, 0) * a0 + rho.entry(1, 1) * a1;
    (a0.conj() * row0 + a1.conj() * row1).re
}

/// Closed-form fidelity of either clone for an input at polar angle `θ`:
///
/// ```text
/// F = cos⁴(θ/2)(1 + cos²α)/2 + sin⁴(θ/2)(1 + cos²β)/2
///   + sin²θ (sin²α + sin²β)/8 + (√2/4) sin²θ sin(α+β)
/// ```
///
/// The value does not depend on the azimuth `φ`.
pub fn pointwise_fidelity(angles: CloneAngles, theta: f64) -> f64 {
    let half = 0.5 * theta;
    let c4 = half.cos().powi(4);
    let s4 = half.sin().powi(4);
    let sin_theta_sq = theta.sin().powi(2);

    let sin_a_sq = angles.alpha.sin().powi(2);
    let sin_b_sq = angles.beta.sin().powi(2);

    c4 * (0.5 + 0.5 * (1.0 - sin_a_sq))
        + s4 * (0.5 + 0.5 * (1.0 - sin_b_sq))
        + 0.125 * sin_theta_sq * (sin_a_sq + sin_b_sq)
        + (std::f64::consts::SQRT_2 / 4.0) * sin_theta_sq * (angles.alpha + angles.beta).sin()
}

/// Fidelities of both clones obtained by full simulation: run the cloning
/// map, trace out everything but one clone, and overlap with the input.
///
/// Accepts any real `(θ, φ)`; the implied input amplitudes
/// `(cos(θ/2), sin(θ/2) e^{iφ})` are always normalized.
pub fn simulated_fidelity(angles: CloneAngles, theta: f64, phi: f64) -> (f64, f64) {
    let amps = ket_amplitudes(theta, phi);
    let state = MultiQubitState::from_normalized(
        3,
        clone_output_amplitudes(angles, amps[0], amps[1]).to_vec(),
    );
    let rho_a = partial_trace(&state, QUBIT_A).expect("qubit a exists");
    let rho_b = partial_trace(&state, QUBIT_B).expect("qubit b exists");
    (
        fidelity_from_amplitudes(amps, &rho_a),
        fidelity_from_amplitudes(amps, &rho_b),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn make_ket_poles_and_equator() {
        let north = make_ket(0.0, 0.0).unwrap();
        assert_eq!(north.amplitudes()[0], Complex64::new(1.0, 0.0));
        assert_eq!(north.amplitudes()[1], Complex64::new(0.0, 0.0));

        let south = make_ket(PI, 0.0).unwrap();
        assert!(south.amplitudes()[0].norm() < 1e-15);
        assert!(close(south.amplitudes()[1].re, 1.0, 1e-15));

        let plus = make_ket(FRAC_PI_2, 0.0).unwrap();
        assert!(close(plus.amplitudes()[0].re, FRAC_1_SQRT_2, 1e-15));
        assert!(close(plus.amplitudes()[1].re, FRAC_1_SQRT_2, 1e-15));
    }

    #[test]
    fn make_ket_normalization_and_phase_convention() {
        let ket = make_ket(1.234, 5.678).unwrap();
        let [a0, a1] = ket.amplitudes();
        assert!(close(a0.norm_sqr() + a1.norm_sqr(), 1.0, 1e-14));
        assert_eq!(a0.im, 0.0);
        assert!(a0.re >= 0.0);
    }

    #[test]
    fn make_ket_rejects_out_of_range() {
        assert!(make_ket(-0.1, 0.0).is_err());
        assert!(make_ket(PI + 0.1, 0.0).is_err());
        assert!(make_ket(1.0, -0.1).is_err());
        assert!(make_ket(1.0, 2.0 * PI).is_err());
        assert!(make_ket(f64::NAN, 0.0).is_err());
        assert!(make_ket(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn isometry_universal_matches_known_coefficients() {
        let iso = build_clone_isometry(CloneAngles::universal());
        let two_thirds = (2.0_f64 / 3.0).sqrt();
        let one_sixth = (1.0_f64 / 6.0).sqrt();

        assert!(close(iso.column(0)[0b000].re, two_thirds, 1e-15));
        assert!(close(iso.column(0)[0b011].re, one_sixth, 1e-15));
        assert!(close(iso.column(0)[0b101].re, one_sixth, 1e-15));
        assert!(close(iso.column(1)[0b111].re, two_thirds, 1e-15));
        assert!(close(iso.column(1)[0b010].re, one_sixth, 1e-15));
        assert!(close(iso.column(1)[0b100].re, one_sixth, 1e-15));
    }

    #[test]
    fn isometry_degenerate_angles() {
        let iso = build_clone_isometry(CloneAngles::new(0.0, 0.0));
        assert_eq!(iso.column(0)[0b000].re, 1.0);
        assert_eq!(iso.column(1)[0b111].re, 1.0);
        assert_eq!(iso.column(0)[0b011].re, 0.0);

        let iso = build_clone_isometry(CloneAngles::new(0.0, FRAC_PI_2));
        assert_eq!(iso.column(0)[0b000].re, 1.0);
        assert!(close(iso.column(1)[0b010].re, FRAC_1_SQRT_2, 1e-15));
        assert!(close(iso.column(1)[0b100].re, FRAC_1_SQRT_2, 1e-15));
        assert!(iso.column(1)[0b111].norm() < 1e-16);
    }

    #[test]
    fn isometry_orthonormal_for_arbitrary_angles() {
        for &(a, b) in &[(0.3, 1.2), (-2.0, 5.0), (17.0, -33.3), (0.0, 0.0)] {
            let iso = build_clone_isometry(CloneAngles::new(a, b));
            assert!(iso.orthonormality_deviation() <= 1e-14);
        }
    }

    #[test]
    fn apply_clone_selects_column_for_basis_input() {
        let angles = CloneAngles::new(0.9, 0.4);
        let north = make_ket(0.0, 0.0).unwrap();
        let out = apply_clone(angles, &north);
        let iso = build_clone_isometry(angles);
        for i in 0..8 {
            assert!((out.amplitude(i) - iso.column(0)[i]).norm() < 1e-15);
        }
    }

    #[test]
    fn apply_clone_equator_mixes_columns_equally() {
        let angles = CloneAngles::universal();
        let plus = make_ket(FRAC_PI_2, 0.0).unwrap();
        let out = apply_clone(angles, &plus);
        let iso = build_clone_isometry(angles);
        for i in 0..8 {
            let expected = (iso.column(0)[i] + iso.column(1)[i]) * FRAC_1_SQRT_2;
            assert!((out.amplitude(i) - expected).norm() < 1e-15);
        }
    }

    #[test]
    fn apply_clone_preserves_norm() {
        let angles = CloneAngles::new(1.1, -0.7);
        let ket = make_ket(2.2, 4.4).unwrap();
        let out = apply_clone(angles, &ket);
        assert!(close(out.squared_norm(), 1.0, 1e-13));
    }

    #[test]
    fn partial_trace_bell_pair_is_maximally_mixed() {
        let w = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let xi_plus =
            MultiQubitState::new(vec![Complex64::ZERO, w, w, Complex64::ZERO]).unwrap();
        let rho = partial_trace(&xi_plus, 0).unwrap();
        assert!(close(rho.entry(0, 0).re, 0.5, 1e-15));
        assert!(close(rho.entry(1, 1).re, 0.5, 1e-15));
        assert!(rho.entry(0, 1).norm() < 1e-15);
    }

    #[test]
    fn partial_trace_product_state() {
        // |0⟩ ⊗ |1⟩, keep the first qubit.
        let state = MultiQubitState::new(vec![
            Complex64::ZERO,
            Complex64::new(1.0, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
        ])
        .unwrap();
        let rho = partial_trace(&state, 0).unwrap();
        assert!(close(rho.entry(0, 0).re, 1.0, 1e-15));
        assert!(rho.entry(1, 1).norm() < 1e-15);
    }

    #[test]
    fn partial_trace_clone_output_at_north_pole() {
        // For a |0⟩ input the reduced clone is diagonal with populations
        // cos²α + sin²α/2 and sin²α/2; derived by summing |amplitude|² over
        // the traced qubits of the output state.
        let alpha = 0.83;
        let angles = CloneAngles::new(alpha, 0.31);
        let out = apply_clone(angles, &make_ket(0.0, 0.0).unwrap());
        let rho = partial_trace(&out, QUBIT_A).unwrap();
        let expected_00 = alpha.cos().powi(2) + 0.5 * alpha.sin().powi(2);
        let expected_11 = 0.5 * alpha.sin().powi(2);
        assert!(close(rho.entry(0, 0).re, expected_00, 1e-14));
        assert!(close(rho.entry(1, 1).re, expected_11, 1e-14));
        assert!(rho.entry(0, 1).norm() < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_index() {
        let state = MultiQubitState::new(vec![
            Complex64::new(1.0, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ZERO,
        ])
        .unwrap();
        assert!(matches!(
            partial_trace(&state, 2),
            Err(Error::QubitIndexOutOfRange { .. })
        ));
    }

    #[test]
    fn state_fidelity_basic_overlaps() {
        let zero = make_ket(0.0, 0.0).unwrap();

        let pure_zero = DensityMatrix::from_entries(
            2,
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::ZERO,
                Complex64::ZERO,
                Complex64::ZERO,
            ],
        )
        .unwrap();
        assert!(close(state_fidelity(&zero, &pure_zero), 1.0, 1e-15));

        let mixed = DensityMatrix::from_entries(
            2,
            vec![
                Complex64::new(0.5, 0.0),
                Complex64::ZERO,
                Complex64::ZERO,
                Complex64::new(0.5, 0.0),
            ],
        )
        .unwrap();
        assert!(close(state_fidelity(&zero, &mixed), 0.5, 1e-15));

        let pure_one = DensityMatrix::from_entries(
            2,
            vec![
                Complex64::ZERO,
                Complex64::ZERO,
                Complex64::ZERO,
                Complex64::new(1.0, 0.0),
            ],
        )
        .unwrap();
        assert!(close(state_fidelity(&zero, &pure_one), 0.0, 1e-15));
    }

    #[test]
    fn pointwise_universal_machine_is_state_independent() {
        let angles = CloneAngles::universal();
        for &theta in &[0.3, 1.1, 2.7] {
            assert!(close(pointwise_fidelity(angles, theta), 5.0 / 6.0, 1e-12));
        }
    }

    #[test]
    fn pointwise_equatorial_machine_on_equator() {
        let f = pointwise_fidelity(CloneAngles::equatorial(), FRAC_PI_2);
        assert!(close(f, 0.5 + std::f64::consts::SQRT_2 / 4.0, 1e-12));
    }

    #[test]
    fn pointwise_identity_branch_copies_north_pole() {
        assert!(close(
            pointwise_fidelity(CloneAngles::new(0.0, 0.0), 0.0),
            1.0,
            1e-15
        ));
    }

    #[test]
    fn simulated_fidelity_matches_known_values() {
        let (fa, fb) = simulated_fidelity(CloneAngles::universal(), 1.0, 2.0);
        assert!(close(fa, 5.0 / 6.0, 1e-13));
        assert!(close(fb, 5.0 / 6.0, 1e-13));

        let (fa, fb) = simulated_fidelity(CloneAngles::new(0.0, 0.0), 0.0, 0.0);
        assert!(close(fa, 1.0, 1e-15));
        assert!(close(fb, 1.0, 1e-15));
    }

    #[test]
    fn density_matrix_validation_catches_defects() {
        let not_hermitian = DensityMatrix::from_entries(
            2,
            vec![
                Complex64::new(0.5, 0.0),
                Complex64::new(0.1, 0.0),
                Complex64::new(0.3, 0.0),
                Complex64::new(0.5, 0.0),
            ],
        );
        assert!(matches!(not_hermitian, Err(Error::NotHermitian { .. })));

        let wrong_trace = DensityMatrix::from_entries(
            2,
            vec![
                Complex64::new(0.9, 0.0),
                Complex64::ZERO,
                Complex64::ZERO,
                Complex64::new(0.3, 0.0),
            ],
        );
        assert!(matches!(wrong_trace, Err(Error::TraceNotOne { .. })));
    }

    #[test]
    fn multi_qubit_state_validation() {
        assert!(matches!(
            MultiQubitState::new(vec![Complex64::new(1.0, 0.0); 3]),
            Err(Error::BadStateDimension { .. })
        ));
        assert!(matches!(
            MultiQubitState::new(vec![Complex64::new(1.0, 0.0); 2]),
            Err(Error::NotNormalized { .. })
        ));
    }
}
