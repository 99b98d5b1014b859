//! Broadcasting of `α|00⟩ + β|11⟩` with optimal universal asymmetric cloners.
//!
//! Two scenarios are covered:
//!
//! - **local**: Alice and Bob each apply the 1→2 qubit cloner `U(p)` to their
//!   half, on a six-qubit register ordered `(a1, a2, a3, b1, b2, b3)` where
//!   `a1`/`b1` carry the input, `a2`/`b2` receive the second clones and
//!   `a3`/`b3` are the machine ancillas. Within each cloner the qubit order is
//!   (first clone, second clone, ancilla).
//! - **nonlocal**: a single d = 4 cloner copies the pair at once, producing
//!   two clones that are `|ψ⟩⟨ψ|` mixed with white noise.
//!
//! Both scenarios yield X states for the pairs `a1b1` and `a2b2`. The signed
//! concurrence used throughout is the quantity inside `max{0, ·}`, so that
//! `C = max(0, signed)` and region boundaries are its sign changes.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{bisect, golden_section_max};
use crate::qmath::{kron, partial_trace, ComplexMatrix, StateVector, ZERO};
use crate::states::{validate_density, DensityMatrix, PureTwoQubit, XState};

/// Register positions in the six-qubit local-broadcast state.
pub mod qubit {
    pub const A1: usize = 0;
    pub const A2: usize = 1;
    pub const A3: usize = 2;
    pub const B1: usize = 3;
    pub const B2: usize = 4;
    pub const B3: usize = 5;
}

/// Cloner asymmetry `p ∈ [0, 1]`; `q = 1 − p` is always derived.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CloneParams {
    p: f64,
}

impl CloneParams {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::POutOfRange(p));
        }
        Ok(Self { p })
    }

    pub fn symmetric() -> Self {
        Self { p: 0.5 }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        1.0 - self.p
    }

    /// Same machine with the roles of the two clones exchanged.
    pub fn mirrored(&self) -> Self {
        Self { p: 1.0 - self.p }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Local,
    Nonlocal,
}

impl Scenario {
    pub const ALL: [Scenario; 2] = [Scenario::Local, Scenario::Nonlocal];

    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::Local => "local",
            Scenario::Nonlocal => "nonlocal",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "local" => Ok(Scenario::Local),
            "nonlocal" => Ok(Scenario::Nonlocal),
            _ => Err(Error::InvalidArgs(format!("unknown scenario '{s}'"))),
        }
    }
}

/// The two Alice–Bob pairs produced by broadcasting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Pair {
    A1B1,
    A2B2,
}

impl Pair {
    pub const ALL: [Pair; 2] = [Pair::A1B1, Pair::A2B2];

    pub fn as_str(self) -> &'static str {
        match self {
            Pair::A1B1 => "a1b1",
            Pair::A2B2 => "a2b2",
        }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Pair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a1b1" => Ok(Pair::A1B1),
            "a2b2" => Ok(Pair::A2B2),
            _ => Err(Error::InvalidArgs(format!("unknown pair '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BroadcastOutputs {
    pub scenario: Scenario,
    pub rho_a1b1: DensityMatrix,
    pub rho_a2b2: DensityMatrix,
    /// `ρ^{a1a2} = ρ^{b1b2}`, present for the local scenario only.
    pub rho_local_pair: Option<DensityMatrix>,
}

impl BroadcastOutputs {
    pub fn pair(&self, pair: Pair) -> &DensityMatrix {
        match pair {
            Pair::A1B1 => &self.rho_a1b1,
            Pair::A2B2 => &self.rho_a2b2,
        }
    }
}

fn cloner_norm(cp: CloneParams) -> f64 {
    1.0 + cp.p() * cp.p() + cp.q() * cp.q()
}

/// The 8×8 asymmetric cloner on (input, clone-2 blank, ancilla).
///
/// Columns `|000⟩` and `|100⟩` are
///
/// ```text
/// U|0⟩|00⟩ = (|000⟩ + p|011⟩ + q|101⟩) / √(1+p²+q²)
/// U|1⟩|00⟩ = (|111⟩ + p|100⟩ + q|010⟩) / √(1+p²+q²)
/// ```
///
/// and the remaining six columns are filled by Gram–Schmidt over the
/// computational basis, in index order.
pub fn cloner_unitary(cp: CloneParams) -> ComplexMatrix {
    let (p, q) = (cp.p(), cp.q());
    let n = cloner_norm(cp).sqrt();
    let mut zero_col = [0.0; 8];
    zero_col[0b000] = 1.0 / n;
    zero_col[0b011] = p / n;
    zero_col[0b101] = q / n;
    let mut one_col = [0.0; 8];
    one_col[0b111] = 1.0 / n;
    one_col[0b100] = p / n;
    one_col[0b010] = q / n;

    let mut basis: Vec<[f64; 8]> = vec![zero_col, one_col];
    for k in 0..8 {
        if basis.len() == 8 {
            break;
        }
        let mut v = [0.0; 8];
        v[k] = 1.0;
        for b in &basis {
            let overlap: f64 = (0..8).map(|i| b[i] * v[i]).sum();
            for i in 0..8 {
                v[i] -= overlap * b[i];
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            basis.push(v.map(|x| x / norm));
        }
    }

    let free_columns = [1usize, 2, 3, 5, 6, 7];
    let mut u = ComplexMatrix::zeros(8, 8);
    for i in 0..8 {
        u[(i, 0)] = Complex64::new(basis[0][i], 0.0);
        u[(i, 4)] = Complex64::new(basis[1][i], 0.0);
        for (slot, &col) in free_columns.iter().enumerate() {
            u[(i, col)] = Complex64::new(basis[2 + slot][i], 0.0);
        }
    }
    u
}

/// Single-qubit fidelities `(⟨0|ρ₁|0⟩, ⟨0|ρ₂|0⟩)` of the two clones of `|0⟩`.
pub fn clone_fidelities(cp: CloneParams) -> (f64, f64) {
    let u = cloner_unitary(cp);
    let out = StateVector::new(u.column(0)).expect("cloner columns are normalized");
    let rho = out.projector();
    let first = partial_trace(&rho, &[2, 2, 2], &[0]).expect("valid partition");
    let second = partial_trace(&rho, &[2, 2, 2], &[1]).expect("valid partition");
    (first[(0, 0)].re, second[(0, 0)].re)
}

/// `U(p)⊗U(p) |ψ⟩_{a1b1}|00⟩_{a2a3}|00⟩_{b2b3}` over `(a1, a2, a3, b1, b2, b3)`.
pub fn local_broadcast_full_state(psi: &PureTwoQubit, cp: CloneParams) -> StateVector {
    let u = cloner_unitary(cp);
    let uu = kron(&u, &u);
    let mut input = vec![ZERO; 64];
    // a1 = b1 = 0 → index 0; a1 = b1 = 1 → 0b100_100.
    input[0] = psi.alpha();
    input[0b100_100] = psi.beta();
    StateVector::new(uu.apply(&input)).expect("unitary image of a unit vector")
}

/// Reduced two-qubit state of `state` on qubits `first < second`.
pub fn reduced_pair(state: &StateVector, first: usize, second: usize) -> Result<DensityMatrix> {
    let dims = vec![2; state.num_qubits()];
    let reduced = partial_trace(&state.projector(), &dims, &[first, second])?;
    validate_density(&reduced)
}

/// Local outputs by brute force: build the 64-dim state and trace out.
pub fn local_outputs_brute_force(psi: &PureTwoQubit, cp: CloneParams) -> Result<BroadcastOutputs> {
    let phi = local_broadcast_full_state(psi, cp);
    Ok(BroadcastOutputs {
        scenario: Scenario::Local,
        rho_a1b1: reduced_pair(&phi, qubit::A1, qubit::B1)?,
        rho_a2b2: reduced_pair(&phi, qubit::A2, qubit::B2)?,
        rho_local_pair: Some(reduced_pair(&phi, qubit::A1, qubit::A2)?),
    })
}

/// Closed-form X-state parameters of the local outputs.
pub fn local_x_states(psi: &PureTwoQubit, cp: CloneParams) -> (XState, XState, XState) {
    let (p, q) = (cp.p(), cp.q());
    let a2 = psi.alpha().norm_sqr();
    let b2 = psi.beta().norm_sqr();
    let n = cloner_norm(cp);
    let n2 = n * n;
    let coherence = psi.alpha() * psi.beta().conj();

    let clone = |keep: f64, lose: f64| XState {
        rho11: (a2 * (1.0 + keep * keep).powi(2) + b2 * lose.powi(4)) / n2,
        rho22: lose * lose * (1.0 + keep * keep) / n2,
        rho33: lose * lose * (1.0 + keep * keep) / n2,
        rho44: (b2 * (1.0 + keep * keep).powi(2) + a2 * lose.powi(4)) / n2,
        rho14: coherence * (4.0 * keep * keep / n2),
        rho23: ZERO,
    };
    let a1b1 = clone(p, q);
    let a2b2 = clone(q, p);

    let (p2, q2) = (p * p, q * q);
    let local_pair = XState {
        rho11: a2 * n / n2,
        rho22: (p2 * q2 + b2 * q2 * q2 + b2 * q2 + a2 * p2 * p2 + a2 * p2) / n2,
        rho33: (p2 * q2 + b2 * p2 * p2 + b2 * p2 + a2 * q2 * q2 + a2 * q2) / n2,
        rho44: b2 * n / n2,
        rho14: ZERO,
        rho23: Complex64::new((p * q + p2 * p * q + p * q2 * q) / n2, 0.0),
    };
    (a1b1, a2b2, local_pair)
}

/// Local outputs `ρ^{a1b1}`, `ρ^{a2b2}` and `ρ^{a1a2} = ρ^{b1b2}` in closed form.
pub fn local_outputs(psi: &PureTwoQubit, cp: CloneParams) -> Result<BroadcastOutputs> {
    let (a1b1, a2b2, pair) = local_x_states(psi, cp);
    Ok(BroadcastOutputs {
        scenario: Scenario::Local,
        rho_a1b1: a1b1.to_density()?,
        rho_a2b2: a2b2.to_density()?,
        rho_local_pair: Some(pair.to_density()?),
    })
}

/// Closed-form X-state parameters of the two nonlocal clones.
pub fn nonlocal_x_states(psi: &PureTwoQubit, cp: CloneParams) -> (XState, XState) {
    let (p, q) = (cp.p(), cp.q());
    let d = 1.0 + 3.0 * (p * p + q * q);
    let a2 = psi.alpha().norm_sqr();
    let b2 = psi.beta().norm_sqr();
    let coherence = psi.alpha() * psi.beta().conj();
    // [w |ψ⟩⟨ψ| + noise I] / d
    let clone = |w: f64, noise: f64| XState {
        rho11: (w * a2 + noise) / d,
        rho22: noise / d,
        rho33: noise / d,
        rho44: (w * b2 + noise) / d,
        rho14: coherence * (w / d),
        rho23: ZERO,
    };
    (
        clone(1.0 - q * q + 3.0 * p * p, q * q),
        clone(1.0 - p * p + 3.0 * q * q, p * p),
    )
}

pub fn nonlocal_outputs(psi: &PureTwoQubit, cp: CloneParams) -> Result<BroadcastOutputs> {
    let (a1b1, a2b2) = nonlocal_x_states(psi, cp);
    Ok(BroadcastOutputs {
        scenario: Scenario::Nonlocal,
        rho_a1b1: a1b1.to_density()?,
        rho_a2b2: a2b2.to_density()?,
        rho_local_pair: None,
    })
}

pub fn outputs(
    scenario: Scenario,
    psi: &PureTwoQubit,
    cp: CloneParams,
) -> Result<BroadcastOutputs> {
    match scenario {
        Scenario::Local => local_outputs(psi, cp),
        Scenario::Nonlocal => nonlocal_outputs(psi, cp),
    }
}

pub fn x_state(scenario: Scenario, pair: Pair, psi: &PureTwoQubit, cp: CloneParams) -> XState {
    match (scenario, pair) {
        (Scenario::Local, Pair::A1B1) => local_x_states(psi, cp).0,
        (Scenario::Local, Pair::A2B2) => local_x_states(psi, cp).1,
        (Scenario::Nonlocal, Pair::A1B1) => nonlocal_x_states(psi, cp).0,
        (Scenario::Nonlocal, Pair::A2B2) => nonlocal_x_states(psi, cp).1,
    }
}

fn abs_alpha_beta(psi: &PureTwoQubit) -> f64 {
    psi.alpha().norm() * psi.beta().norm()
}

/// Concurrence before clamping at zero, as a function of `|α||β|` and `p`.
pub fn signed_concurrence_ab(scenario: Scenario, pair: Pair, ab: f64, cp: CloneParams) -> f64 {
    let (p, q) = match pair {
        Pair::A1B1 => (cp.p(), cp.q()),
        Pair::A2B2 => (cp.q(), cp.p()),
    };
    match scenario {
        Scenario::Local => {
            let n = cloner_norm(cp);
            2.0 * (4.0 * p * p * ab - q * q * (1.0 + p * p)) / (n * n)
        }
        Scenario::Nonlocal => {
            let d = 1.0 + 3.0 * (p * p + q * q);
            2.0 * ((1.0 - q * q + 3.0 * p * p) * ab - q * q) / d
        }
    }
}

pub fn signed_concurrence(
    scenario: Scenario,
    pair: Pair,
    psi: &PureTwoQubit,
    cp: CloneParams,
) -> f64 {
    signed_concurrence_ab(scenario, pair, abs_alpha_beta(psi), cp)
}

/// Signed concurrence of `ρ^{a1a2} = ρ^{b1b2}`: `2(pq − |α||β|)/(1+p²+q²)`.
pub fn signed_local_pair_concurrence(psi: &PureTwoQubit, cp: CloneParams) -> f64 {
    2.0 * (cp.p() * cp.q() - abs_alpha_beta(psi)) / cloner_norm(cp)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalConcurrences {
    pub a1b1: f64,
    pub a2b2: f64,
    pub local_pair: f64,
}

pub fn local_concurrences(psi: &PureTwoQubit, cp: CloneParams) -> LocalConcurrences {
    LocalConcurrences {
        a1b1: signed_concurrence(Scenario::Local, Pair::A1B1, psi, cp).max(0.0),
        a2b2: signed_concurrence(Scenario::Local, Pair::A2B2, psi, cp).max(0.0),
        local_pair: signed_local_pair_concurrence(psi, cp).max(0.0),
    }
}

/// `(C(ρ^{a1b1}), C(ρ^{a2b2}))` for the nonlocal clones.
pub fn nonlocal_concurrences(psi: &PureTwoQubit, cp: CloneParams) -> (f64, f64) {
    (
        signed_concurrence(Scenario::Nonlocal, Pair::A1B1, psi, cp).max(0.0),
        signed_concurrence(Scenario::Nonlocal, Pair::A2B2, psi, cp).max(0.0),
    )
}

pub fn concurrence(scenario: Scenario, pair: Pair, psi: &PureTwoQubit, cp: CloneParams) -> f64 {
    signed_concurrence(scenario, pair, psi, cp).max(0.0)
}

/// Lower edge of the local `p`-window: root of `p⁴ − 2p³ − 2p + 1` in [0, 1].
pub fn local_p_lower_by_bisection() -> f64 {
    bisect(
        |p| p.powi(4) - 2.0 * p.powi(3) - 2.0 * p + 1.0,
        0.0,
        1.0,
        1e-15,
    )
    .expect("quartic changes sign on [0, 1]")
}

/// Upper edge of the local `p`-window: root of `p⁴ − 2p³ + 4p − 2` in [0, 1].
pub fn local_p_upper_by_bisection() -> f64 {
    bisect(
        |p| p.powi(4) - 2.0 * p.powi(3) + 4.0 * p - 2.0,
        0.0,
        1.0,
        1e-15,
    )
    .expect("quartic changes sign on [0, 1]")
}

/// `½ − 3^{1/4}/√2 + √3/2`.
pub fn local_p_lower_closed_form() -> f64 {
    0.5 - 3f64.powf(0.25) / 2f64.sqrt() + 3f64.sqrt() / 2.0
}

/// `½ + 3^{1/4}/√2 − √3/2`.
pub fn local_p_upper_closed_form() -> f64 {
    0.5 + 3f64.powf(0.25) / 2f64.sqrt() - 3f64.sqrt() / 2.0
}

/// A `p` interval with open/closed ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PWindow {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl PWindow {
    pub fn contains(&self, p: f64) -> bool {
        let above = if self.lo_closed {
            p >= self.lo
        } else {
            p > self.lo
        };
        let below = if self.hi_closed {
            p <= self.hi
        } else {
            p < self.hi
        };
        above && below
    }
}

/// Inseparability regions of one scenario in the `(|α|, p)` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionBoundaries {
    pub scenario: Scenario,
    /// Open window of `p` in which both pairs can be entangled.
    pub p_lower: f64,
    pub p_upper: f64,
}

impl RegionBoundaries {
    /// `p`-values for which the pair is entangled for some `|α|`.
    pub fn pair_window(&self, pair: Pair) -> PWindow {
        match pair {
            Pair::A1B1 => PWindow {
                lo: self.p_lower,
                hi: 1.0,
                lo_closed: false,
                hi_closed: true,
            },
            Pair::A2B2 => PWindow {
                lo: 0.0,
                hi: self.p_upper,
                lo_closed: true,
                hi_closed: false,
            },
        }
    }

    pub fn contains_p(&self, p: f64) -> bool {
        p > self.p_lower && p < self.p_upper
    }

    /// `(lower, upper)` bounds on `|α|` for the pair to be entangled at `p`
    /// (`f±`, `g±` locally; `ξ±`, `η±` nonlocally). `None` outside the pair's window.
    pub fn alpha_bounds(&self, pair: Pair, p: f64) -> Option<(f64, f64)> {
        if !self.pair_window(pair).contains(p) {
            return None;
        }
        let q = 1.0 - p;
        // Entangled iff |α|⁴ − |α|² + k < 0, i.e. |α|² ∈ ½(1 ∓ √(1 − 4k)).
        let four_k = match (self.scenario, pair) {
            (Scenario::Local, Pair::A1B1) => q.powi(4) * (1.0 + p * p).powi(2) / (4.0 * p.powi(4)),
            (Scenario::Local, Pair::A2B2) => p.powi(4) * (1.0 + q * q).powi(2) / (4.0 * q.powi(4)),
            (Scenario::Nonlocal, Pair::A1B1) => {
                4.0 * q.powi(4) / (1.0 - q * q + 3.0 * p * p).powi(2)
            }
            (Scenario::Nonlocal, Pair::A2B2) => {
                4.0 * p.powi(4) / (1.0 - p * p + 3.0 * q * q).powi(2)
            }
        };
        let disc = (1.0 - four_k).max(0.0).sqrt();
        Some((
            (0.5 * (1.0 - disc)).max(0.0).sqrt(),
            (0.5 * (1.0 + disc)).sqrt(),
        ))
    }

    /// Intersection of the two pairs' `|α|` windows at `p`.
    pub fn simultaneous_alpha_bounds(&self, p: f64) -> Option<(f64, f64)> {
        let (l1, u1) = self.alpha_bounds(Pair::A1B1, p)?;
        let (l2, u2) = self.alpha_bounds(Pair::A2B2, p)?;
        let (lo, hi) = (l1.max(l2), u1.min(u2));
        (lo < hi).then_some((lo, hi))
    }

    /// Region membership read off the boundary curves.
    pub fn contains(&self, alpha_abs: f64, p: f64) -> bool {
        self.contains_p(p)
            && self
                .simultaneous_alpha_bounds(p)
                .is_some_and(|(lo, hi)| alpha_abs > lo && alpha_abs < hi)
    }

    /// Widest `|α|` range over the `p`-window: `(min_p lower(p), max_p upper(p))`.
    ///
    /// The lower (upper) boundary of the intersection is the larger (smaller)
    /// of two monotone curves, so each extremum is unimodal in `p`.
    pub fn alpha_span(&self) -> (f64, f64) {
        let (lo, hi) = (self.p_lower, self.p_upper);
        let lower = |p: f64| {
            self.simultaneous_alpha_bounds(p)
                .map_or(f64::INFINITY, |(l, _)| l)
        };
        let upper = |p: f64| {
            self.simultaneous_alpha_bounds(p)
                .map_or(f64::NEG_INFINITY, |(_, u)| u)
        };
        let p_min = golden_section_max(|p| -lower(p), lo, hi, 1e-12);
        let p_max = golden_section_max(upper, lo, hi, 1e-12);
        (lower(p_min), upper(p_max))
    }
}

pub fn region_boundaries(scenario: Scenario) -> RegionBoundaries {
    match scenario {
        Scenario::Local => RegionBoundaries {
            scenario,
            p_lower: local_p_lower_by_bisection(),
            p_upper: local_p_upper_by_bisection(),
        },
        Scenario::Nonlocal => RegionBoundaries {
            scenario,
            p_lower: 1.0 / 3.0,
            p_upper: 2.0 / 3.0,
        },
    }
}

/// Both pairs strictly entangled (closed-form concurrences > 0).
pub fn simultaneous_inseparable(scenario: Scenario, psi: &PureTwoQubit, cp: CloneParams) -> bool {
    Pair::ALL
        .iter()
        .all(|&pair| signed_concurrence(scenario, pair, psi, cp) > 0.0)
}

/// Nonlocal minus local signed concurrence of `pair`, in factored form:
/// `p(1−p)²(1−p+p²+p³) / (2(1−p+p²)²(2−3p+3p²)) · (1 + 4|α||β|)` for `a1b1`,
/// and the same with `p → q` for `a2b2`.
pub fn concurrence_gap(pair: Pair, psi: &PureTwoQubit, cp: CloneParams) -> f64 {
    let x = match pair {
        Pair::A1B1 => cp.p(),
        Pair::A2B2 => cp.q(),
    };
    let one_minus = 1.0 - x;
    let num = x * one_minus * one_minus * (1.0 - x + x * x + x * x * x);
    let den = 2.0 * (1.0 - x + x * x).powi(2) * (2.0 - 3.0 * x + 3.0 * x * x);
    num / den * (1.0 + 4.0 * abs_alpha_beta(psi))
}

/// The same gap by direct subtraction of the signed concurrences.
pub fn concurrence_gap_direct(pair: Pair, psi: &PureTwoQubit, cp: CloneParams) -> f64 {
    signed_concurrence(Scenario::Nonlocal, pair, psi, cp)
        - signed_concurrence(Scenario::Local, pair, psi, cp)
}

/// `C(|ψ⟩) − [C(ρ^{a1b1}) + C(ρ^{a2b2})]` inside the inseparable region.
pub fn sum_deficit(scenario: Scenario, psi: &PureTwoQubit, cp: CloneParams) -> Result<f64> {
    if !simultaneous_inseparable(scenario, psi, cp) {
        return Err(Error::OutsideRegion(format!(
            "{scenario} outputs at |alpha| = {}, p = {} are not both entangled",
            psi.alpha().norm(),
            cp.p()
        )));
    }
    let initial = 2.0 * abs_alpha_beta(psi);
    Ok(initial
        - concurrence(scenario, Pair::A1B1, psi, cp)
        - concurrence(scenario, Pair::A2B2, psi, cp))
}

/// Nonlocal sum deficit in closed form, `[1 − 2(1 + |α||β|)p(1−p)] / (2 − 3p + 3p²)`.
pub fn nonlocal_sum_deficit_closed_form(psi: &PureTwoQubit, cp: CloneParams) -> f64 {
    let p = cp.p();
    (1.0 - 2.0 * (1.0 + abs_alpha_beta(psi)) * p * (1.0 - p)) / (2.0 - 3.0 * p + 3.0 * p * p)
}

/// `|α|` maximizing the pair's concurrence at fixed `p`, by golden-section search.
pub fn argmax_alpha_concurrence(scenario: Scenario, pair: Pair, cp: CloneParams) -> Result<f64> {
    let window = region_boundaries(scenario).pair_window(pair);
    if !window.contains(cp.p()) {
        return Err(Error::OutsideRegion(format!(
            "p = {} is outside the {scenario} {pair} window",
            cp.p()
        )));
    }
    // The signed concurrence is smooth and unimodal in |α| even where C clamps to 0.
    let objective = |a: f64| {
        let ab = a * (1.0 - a * a).max(0.0).sqrt();
        signed_concurrence_ab(scenario, pair, ab, cp)
    };
    Ok(golden_section_max(objective, 0.0, 1.0, 1e-10))
}

/// Convenience: `|α|`, real `β`.
pub fn real_input(alpha: f64) -> Result<PureTwoQubit> {
    PureTwoQubit::from_alpha(Complex64::new(alpha, 0.0))
}
