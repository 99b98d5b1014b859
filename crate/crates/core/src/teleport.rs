//! Two-qubit states as teleportation channels.
//!
//! Alice holds the unknown input qubit and the first half of the channel
//! `ρ`, Bob holds the second half. The three qubits are ordered
//! (input, Alice's half, Bob's half). Alice measures in the Bell basis
//!
//! | outcome k | state |
//! |-----------|-------|
//! | 1 | `Φ+ = (|00⟩ + |11⟩)/√2` |
//! | 2 | `Φ− = (|00⟩ − |11⟩)/√2` |
//! | 3 | `Ψ+ = (|01⟩ + |10⟩)/√2` |
//! | 4 | `Ψ− = (|01⟩ − |10⟩)/√2` |
//!
//! and Bob applies the correction `U_k`. Arrays of corrections are indexed
//! from 0, so `corrections[0]` answers outcome 1.
//!
//! The average fidelity over Haar-random inputs is computed two ways: exactly,
//! by averaging over the six axis states `±x, ±y, ±z` (the integrand is a
//! quadratic polynomial in the Bloch vector, which this set integrates
//! exactly), and by Monte Carlo with sampled measurement outcomes.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::entanglement::{concurrence_general, concurrence_x};
use crate::error::{Error, Result, TheoremHypothesis};
use crate::exec::{map_indexed, Parallelism};
use crate::qmath::{pauli, singular_values_3x3, ComplexMatrix, HERMITIAN_TOL};
use crate::simplex::{minimize, NelderMeadOptions};
use crate::states::{
    as_x_state, fano_decompose, sample_haar_qubit, DensityMatrix, XState, X_STATE_TOL,
};

/// Monte Carlo samples per independently seeded RNG stream.
pub const SHARD_SIZE: usize = 4096;

/// Default evaluation budget of [`optimize_corrections`].
pub const DEFAULT_OPTIMIZER_BUDGET: usize = 10_000;

/// Required gap between the optimized exact fidelity and `F_max`.
pub const OPTIMIZER_TOLERANCE: f64 = 1e-6;

/// Margin below 1/4 required of `ρ22` by [`theorem_report`].
pub const QUARTER_MARGIN: f64 = 1e-12;

pub const BELL_LABELS: [&str; 4] = ["phi+", "phi-", "psi+", "psi-"];

type Mat2 = [[Complex64; 2]; 2];
type Ket = [Complex64; 2];

const C0: Complex64 = Complex64::new(0.0, 0.0);

/// `N(ρ) = Tr√(TᵀT)`, the sum of the singular values of the correlation matrix.
pub fn n_function(rho: &DensityMatrix) -> f64 {
    singular_values_3x3(&fano_decompose(rho).t).iter().sum()
}

/// `4|ρ14| + |1 − 2ρ22 − 2ρ33|`, valid for X states with `ρ23 = 0`.
pub fn n_function_x(x: &XState) -> f64 {
    4.0 * x.rho14.norm() + (1.0 - 2.0 * x.rho22 - 2.0 * x.rho33).abs()
}

pub fn f_max_from_n(n: f64) -> f64 {
    0.5 * (1.0 + n / 3.0)
}

/// Largest average fidelity reachable with the standard protocol, `½(1 + N/3)`.
pub fn f_max(rho: &DensityMatrix) -> f64 {
    f_max_from_n(n_function(rho))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelReport {
    pub n_value: f64,
    pub f_max: f64,
    /// `N > 1`, i.e. `F_max` beats the classical 2/3.
    pub useful: bool,
    pub theorem_applicable: bool,
    pub concurrence: f64,
}

fn check_theorem_hypotheses(x: &XState) -> Result<()> {
    if x.rho23.norm() > X_STATE_TOL {
        return Err(Error::TheoremHypothesesViolated(
            TheoremHypothesis::Rho23NonZero,
        ));
    }
    if (x.rho22 - x.rho33).abs() > X_STATE_TOL {
        return Err(Error::TheoremHypothesesViolated(
            TheoremHypothesis::Rho22NotEqualRho33,
        ));
    }
    if x.rho22 >= 0.25 - QUARTER_MARGIN {
        return Err(Error::TheoremHypothesesViolated(
            TheoremHypothesis::Rho22NotBelowQuarter,
        ));
    }
    Ok(())
}

/// Channel report for an X state with `ρ23 = 0`, `ρ22 = ρ33 < 1/4` and
/// nonzero concurrence, in which case `F_max = 2/3 + C/3`.
pub fn theorem_report(x: &XState) -> Result<ChannelReport> {
    check_theorem_hypotheses(x)?;
    let concurrence = concurrence_x(x).value;
    if concurrence <= 0.0 {
        return Err(Error::SeparableChannel);
    }
    let n_value = n_function(&x.to_density()?);
    Ok(ChannelReport {
        n_value,
        f_max: f_max_from_n(n_value),
        useful: n_value > 1.0,
        theorem_applicable: true,
        concurrence,
    })
}

/// Report for an arbitrary two-qubit state.
pub fn channel_report(rho: &DensityMatrix) -> Result<ChannelReport> {
    let n_value = n_function(rho);
    let theorem_applicable = as_x_state(rho).is_ok_and(|x| theorem_report(&x).is_ok());
    Ok(ChannelReport {
        n_value,
        f_max: f_max_from_n(n_value),
        useful: n_value > 1.0,
        theorem_applicable,
        concurrence: concurrence_general(rho)?.value,
    })
}

/// Bob's four correction unitaries, indexed by Bell outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct Corrections(pub [ComplexMatrix; 4]);

impl Corrections {
    /// `(I, σ3, σ1, σ2)`: undoes the Pauli frame of a `Φ+` channel.
    pub fn standard() -> Self {
        Self::from_paulis([0, 3, 1, 2])
    }

    /// `U_k = σ_{labels[k]}` with `σ_0 = I`.
    pub fn from_paulis(labels: [usize; 4]) -> Self {
        Corrections(labels.map(pauli_or_identity))
    }

    pub fn validate(&self) -> Result<()> {
        for (index, u) in self.0.iter().enumerate() {
            let deviation = if u.rows() == 2 && u.cols() == 2 {
                u.unitarity_defect()
            } else {
                f64::INFINITY
            };
            if deviation.is_nan() || deviation > HERMITIAN_TOL {
                return Err(Error::NotUnitary { index, deviation });
            }
        }
        Ok(())
    }

    /// Human-readable description, one entry per Bell outcome.
    pub fn describe(&self) -> Vec<String> {
        self.0
            .iter()
            .zip(BELL_LABELS)
            .map(|(u, label)| format!("{label}: {}", describe_unitary(u)))
            .collect()
    }

    fn as_arrays(&self) -> [Mat2; 4] {
        self.0.clone().map(|u| to_mat2(&u))
    }
}

fn pauli_or_identity(j: usize) -> ComplexMatrix {
    if j == 0 {
        ComplexMatrix::identity(2)
    } else {
        pauli(j - 1)
    }
}

/// Pauli label when `u` is a Pauli up to phase, otherwise its rotation
/// angle and axis (`u ∝ exp(−iθ n·σ/2)`).
pub fn describe_unitary(u: &ComplexMatrix) -> String {
    const NAMES: [&str; 4] = ["I", "X", "Y", "Z"];
    // u ∝ a0 I − i(a·σ) with a real unit 4-vector after fixing the global phase.
    let m = to_mat2(u);
    let traces = [
        m[0][0] + m[1][1],
        m[0][1] + m[1][0],
        Complex64::i() * (m[0][1] - m[1][0]),
        m[0][0] - m[1][1],
    ];
    for (j, name) in NAMES.iter().enumerate() {
        if (traces[j].norm() - 2.0).abs() < 1e-9 {
            return (*name).to_string();
        }
    }
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let phase = det.sqrt();
    let coeffs = traces.map(|t| t / (phase * 2.0));
    let mut a0 = coeffs[0].re;
    let mut axis = [-coeffs[1].im, -coeffs[2].im, -coeffs[3].im];
    if a0 < 0.0 {
        a0 = -a0;
        axis = axis.map(|v| -v);
    }
    let s = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let angle = 2.0 * s.atan2(a0);
    let axis = if s > 0.0 {
        axis.map(|v| v / s)
    } else {
        [0.0, 0.0, 1.0]
    };
    format!(
        "rot(angle={:.6}, axis=({:.6}, {:.6}, {:.6}))",
        angle, axis[0], axis[1], axis[2]
    )
}

fn to_mat2(u: &ComplexMatrix) -> Mat2 {
    [[u[(0, 0)], u[(0, 1)]], [u[(1, 0)], u[(1, 1)]]]
}

fn from_mat2(m: &Mat2) -> ComplexMatrix {
    ComplexMatrix::from_rows(*m)
}

fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[C0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Bell vectors over (input, Alice's half), index `2·input + alice`.
fn bell_basis() -> [[f64; 4]; 4] {
    let h = FRAC_1_SQRT_2;
    [
        [h, 0.0, 0.0, h],
        [h, 0.0, 0.0, -h],
        [0.0, h, h, 0.0],
        [0.0, h, -h, 0.0],
    ]
}

/// Bob's unnormalized post-measurement states `⟨B_k|(P_φ⊗ρ)|B_k⟩` for all four
/// outcomes; their traces are the outcome probabilities.
fn bob_branches(rho: &[[Complex64; 4]; 4], phi: &Ket) -> [Mat2; 4] {
    let bell = bell_basis();
    let mut out = [[[C0; 2]; 2]; 4];
    for (k, b) in bell.iter().enumerate() {
        // w[a] = Σ_in B_k(in, a) φ_in  (Bell coefficients are real).
        let w = [phi[0] * b[0] + phi[1] * b[2], phi[0] * b[1] + phi[1] * b[3]];
        for bob in 0..2 {
            for bob2 in 0..2 {
                let mut acc = C0;
                for a in 0..2 {
                    for a2 in 0..2 {
                        acc += w[a] * rho[2 * a + bob][2 * a2 + bob2] * w[a2].conj();
                    }
                }
                out[k][bob][bob2] = acc;
            }
        }
    }
    out
}

/// `⟨φ|U σ U†|φ⟩`.
fn branch_overlap(u: &Mat2, sigma: &Mat2, phi: &Ket) -> f64 {
    // v = U†φ
    let v = [
        u[0][0].conj() * phi[0] + u[1][0].conj() * phi[1],
        u[0][1].conj() * phi[0] + u[1][1].conj() * phi[1],
    ];
    let mut acc = C0;
    for i in 0..2 {
        for j in 0..2 {
            acc += v[i].conj() * sigma[i][j] * v[j];
        }
    }
    acc.re
}

fn rho_array(rho: &DensityMatrix) -> [[Complex64; 4]; 4] {
    let m = rho.matrix();
    let mut out = [[C0; 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = m[(i, j)];
        }
    }
    out
}

/// The six axis states `±z, ±x, ±y`.
fn axis_states() -> [Ket; 6] {
    let h = FRAC_1_SQRT_2;
    let c = |re: f64, im: f64| Complex64::new(re, im);
    [
        [c(1.0, 0.0), c(0.0, 0.0)],
        [c(0.0, 0.0), c(1.0, 0.0)],
        [c(h, 0.0), c(h, 0.0)],
        [c(h, 0.0), c(-h, 0.0)],
        [c(h, 0.0), c(0.0, h)],
        [c(h, 0.0), c(0.0, -h)],
    ]
}

/// Bob's branches for each axis input; independent of the corrections.
struct AxisBranches {
    phis: [Ket; 6],
    branches: [[Mat2; 4]; 6],
}

impl AxisBranches {
    fn new(rho: &DensityMatrix) -> Self {
        let r = rho_array(rho);
        let phis = axis_states();
        let branches = phis.map(|phi| bob_branches(&r, &phi));
        Self { phis, branches }
    }

    fn fidelity(&self, us: &[Mat2; 4]) -> f64 {
        let mut total = 0.0;
        for (phi, branches) in self.phis.iter().zip(&self.branches) {
            for (u, sigma) in us.iter().zip(branches) {
                total += branch_overlap(u, sigma, phi);
            }
        }
        total / 6.0
    }
}

/// Haar-averaged fidelity `Σ_k ∫ p_k ⟨φ|U_k ρ_k U_k†|φ⟩ dφ`, evaluated exactly.
pub fn exact_average_fidelity(rho: &DensityMatrix, corrections: &Corrections) -> Result<f64> {
    corrections.validate()?;
    Ok(AxisBranches::new(rho).fidelity(&corrections.as_arrays()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TeleportOutcome {
    pub average_fidelity: f64,
    /// Empirical standard error of the mean.
    pub std_error: f64,
    pub samples: usize,
    pub strategy: Vec<String>,
}

/// Monte Carlo teleportation: Haar-random inputs, sampled Bell outcomes and
/// Bob's correction, averaged over `samples` runs.
///
/// Samples are split into shards of [`SHARD_SIZE`]; shard `i` draws from the
/// ChaCha8 stream `i` of `seed`, so the result is identical in sequential
/// and parallel mode.
pub fn simulate_teleportation(
    rho: &DensityMatrix,
    corrections: &Corrections,
    samples: usize,
    seed: u64,
    mode: Parallelism,
) -> Result<TeleportOutcome> {
    corrections.validate()?;
    if samples == 0 {
        return Err(Error::InvalidArgs("samples must be at least 1".into()));
    }
    let r = rho_array(rho);
    let us = corrections.as_arrays();
    let shards = samples.div_ceil(SHARD_SIZE);

    let partials = map_indexed(shards, mode, |shard| {
        let count = SHARD_SIZE.min(samples - shard * SHARD_SIZE);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(shard as u64);
        let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
        for _ in 0..count {
            let f = one_run(&r, &us, &mut rng);
            sum += f;
            sum_sq += f * f;
        }
        (sum, sum_sq)
    });

    let (sum, sum_sq) = partials
        .iter()
        .fold((0.0, 0.0), |(a, b), (s, q)| (a + s, b + q));
    let n = samples as f64;
    let mean = sum / n;
    let variance = if samples > 1 {
        ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(TeleportOutcome {
        average_fidelity: mean.clamp(0.0, 1.0),
        std_error: (variance / n).sqrt(),
        samples,
        strategy: corrections.describe(),
    })
}

fn one_run<R: Rng>(rho: &[[Complex64; 4]; 4], us: &[Mat2; 4], rng: &mut R) -> f64 {
    let phi = sample_haar_qubit(rng);
    let branches = bob_branches(rho, &phi);
    let probs = branches.map(|s| (s[0][0] + s[1][1]).re.max(0.0));
    let total: f64 = probs.iter().sum();
    let mut u = rng.random::<f64>() * total;
    let mut k = 3;
    for (i, &p) in probs.iter().enumerate() {
        if u < p {
            k = i;
            break;
        }
        u -= p;
    }
    branch_overlap(&us[k], &branches[k], &phi) / probs[k]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeOptions {
    pub max_evals: usize,
    pub tolerance: f64,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            max_evals: DEFAULT_OPTIMIZER_BUDGET,
            tolerance: OPTIMIZER_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizedCorrections {
    pub corrections: Corrections,
    /// Exact average fidelity of `corrections`.
    pub fidelity: f64,
    pub f_max: f64,
    pub evaluations: usize,
    /// Pauli assignment (0 = I, 1..3 = σ1..σ3) the search started from.
    pub seed_paulis: [usize; 4],
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let v = [a, b, c, d];
                    if (0..4).all(|x| v.contains(&x)) {
                        out.push(v);
                    }
                }
            }
        }
    }
    out
}

/// `exp(−i θ·σ/2)`.
fn rotation(theta: &[f64]) -> Mat2 {
    let norm = (theta[0] * theta[0] + theta[1] * theta[1] + theta[2] * theta[2]).sqrt();
    let (c, s) = ((norm / 2.0).cos(), (norm / 2.0).sin());
    let n = if norm > 0.0 {
        [theta[0] / norm, theta[1] / norm, theta[2] / norm]
    } else {
        [0.0; 3]
    };
    // c I − i s (n·σ)
    [
        [
            Complex64::new(c, -s * n[2]),
            Complex64::new(-s * n[1], -s * n[0]),
        ],
        [
            Complex64::new(s * n[1], -s * n[0]),
            Complex64::new(c, s * n[2]),
        ],
    ]
}

fn corrections_from_angles(seed: &[Mat2; 4], angles: &[f64]) -> [Mat2; 4] {
    std::array::from_fn(|k| mat2_mul(&seed[k], &rotation(&angles[3 * k..3 * k + 3])))
}

/// Corrections whose exact average fidelity reaches `F_max` within
/// `opts.tolerance`.
///
/// Starts from the best of the 24 assignments of `{I, σ1, σ2, σ3}` to the
/// outcomes, then refines `U_k = σ_k · exp(−iθ_k·σ/2)` over the twelve
/// angles by Nelder–Mead, restarting from the incumbent until the budget is
/// spent. `F_max` is reachable by local corrections only when `det T ≤ 0`;
/// otherwise this returns `optimizer-stalled`.
pub fn optimize_corrections(
    rho: &DensityMatrix,
    opts: &OptimizeOptions,
) -> Result<OptimizedCorrections> {
    let target = f_max(rho);
    let axes = AxisBranches::new(rho);

    let mut evaluations = 0usize;
    let (mut seed_paulis, mut best) = ([0usize; 4], f64::NEG_INFINITY);
    for perm in permutations4() {
        let f = axes.fidelity(&Corrections::from_paulis(perm).as_arrays());
        evaluations += 1;
        if f > best {
            best = f;
            seed_paulis = perm;
        }
    }
    let seed = Corrections::from_paulis(seed_paulis).as_arrays();
    let mut angles = vec![0.0; 12];
    let good_enough = target - opts.tolerance;
    let stop_at = target - 1e-3 * opts.tolerance;

    let mut step = 0.4;
    while best < stop_at && evaluations < opts.max_evals {
        let nm = NelderMeadOptions {
            initial_step: step,
            max_evals: opts.max_evals - evaluations,
            f_tol: 1e-16,
            target: -stop_at,
        };
        let start = angles.clone();
        let result = minimize(
            |x| -axes.fidelity(&corrections_from_angles(&seed, x)),
            &start,
            &nm,
        );
        evaluations += result.evaluations;
        if -result.value > best {
            best = -result.value;
            angles = result.x;
        }
        step = if step > 1e-3 { step * 0.5 } else { 0.4 };
    }

    if best < good_enough {
        return Err(Error::OptimizerStalled {
            best,
            target,
            evaluations,
        });
    }
    let corrections = Corrections(corrections_from_angles(&seed, &angles).map(|m| from_mat2(&m)));
    Ok(OptimizedCorrections {
        fidelity: axes.fidelity(&corrections.as_arrays()),
        corrections,
        f_max: target,
        evaluations,
        seed_paulis,
    })
}
