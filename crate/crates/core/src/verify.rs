//! End-to-end verification suite: every quantitative claim about the
//! broadcast channels, checked numerically with its measured residual.

use std::f64::consts::FRAC_1_SQRT_2;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::broadcast::{
    argmax_alpha_concurrence, concurrence, concurrence_gap, concurrence_gap_direct, local_outputs,
    local_outputs_brute_force, local_p_lower_by_bisection, local_p_lower_closed_form,
    local_p_upper_by_bisection, local_p_upper_closed_form, nonlocal_outputs,
    nonlocal_sum_deficit_closed_form, outputs, real_input, region_boundaries, signed_concurrence,
    signed_concurrence_ab, signed_local_pair_concurrence, simultaneous_inseparable, sum_deficit,
    x_state, CloneParams, Pair, Scenario,
};
use crate::entanglement::{concurrence_general, concurrence_x, partial_transpose_min_eigenvalue};
use crate::exec::{map_indexed, Parallelism};
use crate::format::num;
use crate::numeric::{bisect, golden_section_max, linspace};
use crate::qmath::ComplexMatrix;
use crate::states::{
    as_x_state, sample_haar_qubit, sample_x_state, DensityMatrix, PureTwoQubit, XState,
};
use crate::teleport::{
    exact_average_fidelity, f_max, f_max_from_n, n_function, optimize_corrections,
    simulate_teleportation, theorem_report, Corrections, OptimizeOptions,
};

/// Deliberate defects used to check that the suite catches them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Adds instead of subtracts the square-root terms in the X-state concurrence.
    ConcurrenceXSign,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Monte Carlo samples per teleportation channel.
    pub samples: usize,
    pub fault: Option<Fault>,
    pub mode: Parallelism,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 2019,
            samples: 100_000,
            fault: None,
            mode: Parallelism::Parallel,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimResult {
    pub name: &'static str,
    pub passed: bool,
    /// Largest measured deviation (or smallest margin, see `detail`).
    pub residual: f64,
    pub tolerance: f64,
    pub detail: String,
    pub millis: u128,
}

impl ClaimResult {
    pub fn line(&self) -> String {
        format!(
            "{} {:<24} residual={} tol={} ({}) [{} ms]",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            num(self.residual),
            num(self.tolerance),
            self.detail,
            self.millis
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub seed: u64,
    pub samples: usize,
    pub claims: Vec<ClaimResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.claims
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.claims {
            s += &c.line();
            s.push('\n');
        }
        let failed = self.failed();
        if failed.is_empty() {
            s += &format!("all {} claims passed\n", self.claims.len());
        } else {
            s += &format!(
                "{} of {} claims failed: {}\n",
                failed.len(),
                self.claims.len(),
                failed.join(", ")
            );
        }
        s
    }
}

/// Edge count of the `(|α|, p)` grids.
pub const GRID: usize = 21;
pub const RANDOM_X_STATES: usize = 1000;
pub const TELEPORT_CHANNELS: usize = 50;
pub const ARGMAX_POINTS: usize = 5;

struct Outcome {
    passed: bool,
    residual: f64,
    tolerance: f64,
    detail: String,
}

fn timed(name: &'static str, f: impl FnOnce() -> Outcome) -> ClaimResult {
    let start = Instant::now();
    let o = f();
    ClaimResult {
        name,
        passed: o.passed,
        residual: o.residual,
        tolerance: o.tolerance,
        detail: o.detail,
        millis: start.elapsed().as_millis(),
    }
}

fn grid_points() -> Vec<(f64, f64)> {
    let axis = linspace(0.0, 1.0, GRID);
    axis.iter()
        .flat_map(|&a| axis.iter().map(move |&p| (a, p)))
        .collect()
}

fn point(alpha: f64, p: f64) -> (PureTwoQubit, CloneParams) {
    (
        real_input(alpha).expect("grid alpha in [0, 1]"),
        CloneParams::new(p).expect("grid p in [0, 1]"),
    )
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

/// Runs every claim and collects the results in a fixed order.
pub fn run_verify(opts: &VerifyOptions) -> VerifyReport {
    let claims = vec![
        timed("region-roots", region_roots),
        timed("alpha-spans", alpha_spans),
        timed("nonlocal-window", nonlocal_window),
        timed("oracle-equivalence", || oracle_equivalence(opts.mode)),
        timed("x-vs-wootters", || x_vs_wootters(opts)),
        timed("ppt-vs-concurrence", || ppt_vs_concurrence(opts.mode)),
        timed("mirror-symmetry", mirror_symmetry),
        timed("theorem-hypotheses", theorem_hypotheses),
        timed("theorem-consistency", theorem_consistency),
        timed("dominance", dominance),
        timed("gap-formula", gap_formula),
        timed("symmetric-point", symmetric_point),
        timed("boundary-consistency", boundary_consistency),
        timed("region-membership", region_membership),
        timed("argmax-alpha", argmax_alpha),
        timed("sum-deficit", sum_deficit_claim),
        timed("fidelity-upper-bound", || fidelity_upper_bound(opts)),
        timed("teleport-attainment", || teleport_attainment(opts)),
    ];
    VerifyReport {
        schema: crate::sweep::JSON_SCHEMA,
        seed: opts.seed,
        samples: opts.samples,
        claims,
    }
}

/// Quoted three-decimal values are compared with an absolute tolerance of
/// one unit in the third decimal.
const QUOTED_TOL: f64 = 1e-3;

fn region_roots() -> Outcome {
    let (lo, hi) = (local_p_lower_by_bisection(), local_p_upper_by_bisection());
    let radical = max_of([
        (lo - local_p_lower_closed_form()).abs(),
        (hi - local_p_upper_closed_form()).abs(),
    ]);
    let quoted = max_of([(lo - 0.435).abs(), (hi - 0.565).abs()]);
    Outcome {
        passed: radical <= 1e-12 && quoted < QUOTED_TOL,
        residual: radical,
        tolerance: 1e-12,
        detail: format!(
            "p1={} p2={}, |quoted diff| max {}",
            num(lo),
            num(hi),
            num(quoted)
        ),
    }
}

fn alpha_spans() -> Outcome {
    let (l_lo, l_hi) = region_boundaries(Scenario::Local).alpha_span();
    let (n_lo, n_hi) = region_boundaries(Scenario::Nonlocal).alpha_span();
    let residual = max_of([
        (l_lo - 0.331).abs(),
        (l_hi - 0.943).abs(),
        (n_lo - 0.169).abs(),
        (n_hi - 0.985).abs(),
    ]);
    Outcome {
        passed: residual < QUOTED_TOL,
        residual,
        tolerance: QUOTED_TOL,
        detail: format!(
            "local ({}, {}), nonlocal ({}, {})",
            num(l_lo),
            num(l_hi),
            num(n_lo),
            num(n_hi)
        ),
    }
}

/// The nonlocal `p`-window edges are where the best case `|α||β| = ½` of
/// each pair's inequality changes sign.
fn nonlocal_window() -> Outcome {
    let edge = |pair| {
        bisect(
            |p| signed_concurrence_ab(Scenario::Nonlocal, pair, 0.5, CloneParams::new(p).unwrap()),
            0.0,
            1.0,
            1e-15,
        )
        .unwrap_or(f64::NAN)
    };
    let (lo, hi) = (edge(Pair::A1B1), edge(Pair::A2B2));
    let rb = region_boundaries(Scenario::Nonlocal);
    let residual = max_of([
        (lo - 1.0 / 3.0).abs(),
        (hi - 2.0 / 3.0).abs(),
        (rb.p_lower - 1.0 / 3.0).abs(),
        (rb.p_upper - 2.0 / 3.0).abs(),
    ]);
    Outcome {
        passed: residual <= 1e-12,
        residual,
        tolerance: 1e-12,
        detail: format!("sign changes at p={} and p={}", num(lo), num(hi)),
    }
}

fn oracle_equivalence(mode: Parallelism) -> Outcome {
    let pts = grid_points();
    let residuals = map_indexed(pts.len(), mode, |i| {
        let (psi, cp) = point(pts[i].0, pts[i].1);
        let (a, b) = match (local_outputs(&psi, cp), local_outputs_brute_force(&psi, cp)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return f64::INFINITY,
        };
        let pair_diff = match (&a.rho_local_pair, &b.rho_local_pair) {
            (Some(x), Some(y)) => x.matrix().max_abs_diff(y.matrix()),
            _ => f64::INFINITY,
        };
        max_of([
            a.rho_a1b1.matrix().max_abs_diff(b.rho_a1b1.matrix()),
            a.rho_a2b2.matrix().max_abs_diff(b.rho_a2b2.matrix()),
            pair_diff,
        ])
    });
    let residual = max_of(residuals);
    Outcome {
        passed: residual <= 1e-12,
        residual,
        tolerance: 1e-12,
        detail: format!("{GRID}x{GRID} grid, 3 reduced states per point"),
    }
}

fn x_concurrence(x: &XState, fault: Option<Fault>) -> f64 {
    match fault {
        None => concurrence_x(x).value,
        Some(Fault::ConcurrenceXSign) => {
            let anti = x.rho23.norm() + (x.rho11 * x.rho44).sqrt();
            let diag = x.rho14.norm() + (x.rho22 * x.rho33).sqrt();
            2.0 * anti.max(diag).max(0.0)
        }
    }
}

/// Every broadcast output on the grid (four families plus the local pair).
fn grid_outputs(alpha: f64, p: f64) -> Vec<DensityMatrix> {
    let (psi, cp) = point(alpha, p);
    let mut v = Vec::with_capacity(5);
    if let Ok(l) = local_outputs(&psi, cp) {
        v.push(l.rho_a1b1);
        v.push(l.rho_a2b2);
        v.extend(l.rho_local_pair);
    }
    if let Ok(n) = nonlocal_outputs(&psi, cp) {
        v.push(n.rho_a1b1);
        v.push(n.rho_a2b2);
    }
    v
}

fn x_vs_wootters(opts: &VerifyOptions) -> Outcome {
    let pts = grid_points();
    let fault = opts.fault;
    let check = |rho: &DensityMatrix| -> f64 {
        match (as_x_state(rho), concurrence_general(rho)) {
            (Ok(x), Ok(w)) => (x_concurrence(&x, fault) - w.value).abs(),
            _ => f64::INFINITY,
        }
    };
    let grid = map_indexed(pts.len(), opts.mode, |i| {
        let (alpha, p) = pts[i];
        let (psi, cp) = point(alpha, p);
        let outs = grid_outputs(alpha, p);
        let mut worst = max_of(outs.iter().map(check));
        // The closed-form concurrence formulas against Wootters as well.
        if outs.len() == 5 {
            let closed = [
                concurrence(Scenario::Local, Pair::A1B1, &psi, cp),
                concurrence(Scenario::Local, Pair::A2B2, &psi, cp),
                signed_local_pair_concurrence(&psi, cp).max(0.0),
                concurrence(Scenario::Nonlocal, Pair::A1B1, &psi, cp),
                concurrence(Scenario::Nonlocal, Pair::A2B2, &psi, cp),
            ];
            for (c, rho) in closed.iter().zip(&outs) {
                let w = concurrence_general(rho).map_or(f64::INFINITY, |r| r.value);
                worst = worst.max((c - w).abs());
            }
        } else {
            worst = f64::INFINITY;
        }
        worst
    });
    let random = map_indexed(RANDOM_X_STATES, opts.mode, |i| {
        let mut rng = rng_for(opts.seed, 1_000 + i as u64);
        let x = sample_x_state(&mut rng);
        x.to_density().map_or(f64::INFINITY, |rho| check(&rho))
    });
    let residual = max_of(grid.into_iter().chain(random));
    Outcome {
        passed: residual <= 1e-10,
        residual,
        tolerance: 1e-10,
        detail: format!("{GRID}x{GRID} grid outputs and {RANDOM_X_STATES} random X states"),
    }
}

fn ppt_vs_concurrence(mode: Parallelism) -> Outcome {
    let pts = grid_points();
    let counts = map_indexed(pts.len(), mode, |i| {
        let (alpha, p) = pts[i];
        let mut bad = 0usize;
        for rho in grid_outputs(alpha, p) {
            let c = concurrence_general(&rho).map_or(f64::NAN, |r| r.value);
            let min_eig = partial_transpose_min_eigenvalue(&rho);
            let entangled_by_c = c > 1e-9;
            let entangled_by_ppt = min_eig < -1e-9;
            let ambiguous = (c > 0.0 && c <= 1e-9) || (-1e-9..0.0).contains(&min_eig);
            if !ambiguous && entangled_by_c != entangled_by_ppt {
                bad += 1;
            }
        }
        bad
    });
    let bad: usize = counts.iter().sum();
    Outcome {
        passed: bad == 0,
        residual: bad as f64,
        tolerance: 0.0,
        detail: "disagreements between C > 0 and a negative partial transpose".into(),
    }
}

fn mirror_symmetry() -> Outcome {
    let mut residual = 0.0f64;
    for (alpha, p) in grid_points() {
        let (psi, cp) = point(alpha, p);
        let m = cp.mirrored();
        let n = (nonlocal_outputs(&psi, cp), nonlocal_outputs(&psi, m));
        let l = (local_outputs(&psi, cp), local_outputs(&psi, m));
        match (n, l) {
            ((Ok(a), Ok(b)), (Ok(c), Ok(d))) => {
                residual = residual
                    .max(a.rho_a1b1.matrix().max_abs_diff(b.rho_a2b2.matrix()))
                    .max(a.rho_a2b2.matrix().max_abs_diff(b.rho_a1b1.matrix()))
                    .max(c.rho_a1b1.matrix().max_abs_diff(d.rho_a2b2.matrix()));
            }
            _ => residual = f64::INFINITY,
        }
    }
    Outcome {
        passed: residual <= 1e-15,
        residual,
        tolerance: 1e-15,
        detail: "p <-> 1-p swaps the two clones".into(),
    }
}

/// `ρ22 − ¼` of each output family, derived by direct evaluation of the clone formulas.
fn rho22_gap(scenario: Scenario, pair: Pair, p: f64) -> f64 {
    let x = match pair {
        Pair::A1B1 => p,
        Pair::A2B2 => 1.0 - p,
    };
    match scenario {
        Scenario::Local => -x * x / (4.0 * (1.0 - x + x * x).powi(2)),
        Scenario::Nonlocal => -x * (x + 1.0) / (4.0 * (3.0 * x * x - 3.0 * x + 2.0)),
    }
}

fn theorem_hypotheses() -> Outcome {
    let mut residual = 0.0f64;
    let mut violations = 0usize;
    for (alpha, p) in grid_points() {
        let (psi, cp) = point(alpha, p);
        for scenario in Scenario::ALL {
            for pair in Pair::ALL {
                let x = x_state(scenario, pair, &psi, cp);
                let gap = x.rho22 - 0.25;
                residual = residual
                    .max(x.rho23.norm())
                    .max((x.rho22 - x.rho33).abs())
                    .max((gap - rho22_gap(scenario, pair, p)).abs());
                // At p ∈ {0, 1} one clone is I/4 and ρ22 = 1/4 exactly.
                let interior = p > 0.0 && p < 1.0;
                if (interior && gap >= 0.0) || gap > 1e-15 {
                    violations += 1;
                }
            }
        }
    }
    Outcome {
        passed: residual <= 1e-12 && violations == 0,
        residual,
        tolerance: 1e-12,
        detail: format!(
            "rho23 = 0, rho22 = rho33, rho22 < 1/4 for p in (0,1); {violations} violations"
        ),
    }
}

fn theorem_consistency() -> Outcome {
    let mut residual = 0.0f64;
    let (mut checked, mut failures) = (0usize, 0usize);
    for (alpha, p) in grid_points() {
        let (psi, cp) = point(alpha, p);
        for scenario in Scenario::ALL {
            for pair in Pair::ALL {
                if concurrence(scenario, pair, &psi, cp) <= 0.0 {
                    continue;
                }
                checked += 1;
                let x = x_state(scenario, pair, &psi, cp);
                match (theorem_report(&x), x.to_density()) {
                    (Ok(r), Ok(rho)) => {
                        let n = n_function(&rho);
                        residual =
                            residual.max((2.0 / 3.0 + r.concurrence / 3.0 - f_max_from_n(n)).abs());
                        if n <= 1.0 {
                            failures += 1;
                        }
                    }
                    _ => failures += 1,
                }
            }
        }
    }
    Outcome {
        passed: residual <= 1e-10 && failures == 0 && checked > 0,
        residual,
        tolerance: 1e-10,
        detail: format!("{checked} inseparable outputs, {failures} not useful or rejected"),
    }
}

fn dominance() -> Outcome {
    let mut min_margin = f64::INFINITY;
    let mut violations = 0usize;
    for (alpha, p) in grid_points() {
        if p <= 0.0 || p >= 1.0 {
            continue;
        }
        let (psi, cp) = point(alpha, p);
        for pair in Pair::ALL {
            let margin = signed_concurrence(Scenario::Nonlocal, pair, &psi, cp)
                - signed_concurrence(Scenario::Local, pair, &psi, cp);
            min_margin = min_margin.min(margin);
            if margin <= 0.0 {
                violations += 1;
            }
            let local_c = concurrence(Scenario::Local, pair, &psi, cp);
            if local_c > 0.0 {
                let nonlocal_c = concurrence(Scenario::Nonlocal, pair, &psi, cp);
                let fl = theorem_report(&x_state(Scenario::Local, pair, &psi, cp));
                let fn_ = theorem_report(&x_state(Scenario::Nonlocal, pair, &psi, cp));
                match (fl, fn_) {
                    (Ok(l), Ok(n)) if nonlocal_c > local_c && n.f_max > l.f_max => {}
                    _ => violations += 1,
                }
            }
        }
    }
    Outcome {
        passed: violations == 0,
        residual: violations as f64,
        tolerance: 0.0,
        detail: format!(
            "violations of nonlocal > local (arguments, clamped C, F_max); smallest argument margin {}",
            num(min_margin)
        ),
    }
}

fn gap_formula() -> Outcome {
    let mut residual = 0.0f64;
    let mut non_positive = 0usize;
    for (alpha, p) in grid_points() {
        let (psi, cp) = point(alpha, p);
        for pair in Pair::ALL {
            let g = concurrence_gap(pair, &psi, cp);
            residual = residual.max((g - concurrence_gap_direct(pair, &psi, cp)).abs());
            if p > 0.0 && p < 1.0 && g <= 0.0 {
                non_positive += 1;
            }
        }
    }
    Outcome {
        passed: residual <= 1e-12 && non_positive == 0,
        residual,
        tolerance: 1e-12,
        detail: format!("factored vs direct gap; {non_positive} non-positive gaps for p in (0,1)"),
    }
}

fn symmetric_point() -> Outcome {
    let psi = real_input(FRAC_1_SQRT_2).expect("valid amplitude");
    let cp = CloneParams::symmetric();
    let mut residual = 0.0f64;
    for (scenario, c_expected, f_expected) in [
        (Scenario::Local, 1.0 / 6.0, 13.0 / 18.0),
        (Scenario::Nonlocal, 0.4, 0.8),
    ] {
        let out = match outputs(scenario, &psi, cp) {
            Ok(o) => o,
            Err(_) => return failed_outcome("could not build outputs"),
        };
        for pair in Pair::ALL {
            let rho = out.pair(pair);
            let c_closed = concurrence(scenario, pair, &psi, cp);
            let c_wootters = concurrence_general(rho).map_or(f64::NAN, |r| r.value);
            let f_svd = f_max(rho);
            let f_thm = 2.0 / 3.0 + c_closed / 3.0;
            for v in [
                (c_closed - c_expected).abs(),
                (c_wootters - c_expected).abs(),
                (f_svd - f_expected).abs(),
                (f_thm - f_expected).abs(),
            ] {
                residual = if v.is_nan() {
                    f64::INFINITY
                } else {
                    residual.max(v)
                };
            }
        }
    }
    Outcome {
        passed: residual <= 1e-10,
        residual,
        tolerance: 1e-10,
        detail: "C = 1/6, 0.4 and F_max = 13/18, 0.8 by two routes each".into(),
    }
}

fn failed_outcome(detail: &str) -> Outcome {
    Outcome {
        passed: false,
        residual: f64::INFINITY,
        tolerance: 0.0,
        detail: detail.into(),
    }
}

/// Each boundary curve sits where the closed-form concurrence changes sign.
fn boundary_consistency() -> Outcome {
    let mut residual = 0.0f64;
    for scenario in Scenario::ALL {
        let rb = region_boundaries(scenario);
        for pair in Pair::ALL {
            let w = rb.pair_window(pair);
            for p in linspace(w.lo, w.hi, 23).into_iter().skip(1).take(21) {
                let cp = CloneParams::new(p).expect("p in window");
                let Some((lower, upper)) = rb.alpha_bounds(pair, p) else {
                    return failed_outcome("missing boundary inside window");
                };
                let f = |a: f64| {
                    signed_concurrence_ab(scenario, pair, a * (1.0 - a * a).max(0.0).sqrt(), cp)
                };
                let mid = FRAC_1_SQRT_2;
                let lo_root = bisect(f, 0.0, mid, 1e-15);
                let hi_root = bisect(f, mid, 1.0, 1e-15);
                match (lo_root, hi_root) {
                    (Some(l), Some(u)) => {
                        residual = residual.max((l - lower).abs()).max((u - upper).abs());
                    }
                    _ => residual = f64::INFINITY,
                }
            }
        }
    }
    Outcome {
        passed: residual <= 1e-9,
        residual,
        tolerance: 1e-9,
        detail: "sign changes of C vs f/g/xi/eta boundaries".into(),
    }
}

fn region_membership() -> Outcome {
    let axis = linspace(0.0, 1.0, 101);
    let mut mismatches = 0usize;
    let mut compared = 0usize;
    for scenario in Scenario::ALL {
        let rb = region_boundaries(scenario);
        for &a in &axis {
            for &p in &axis {
                let (psi, cp) = point(a, p);
                let near_boundary = Pair::ALL.iter().any(|&pair| {
                    rb.alpha_bounds(pair, p)
                        .is_some_and(|(l, u)| (a - l).abs() < 1e-12 || (a - u).abs() < 1e-12)
                }) || (p - rb.p_lower).abs() < 1e-12
                    || (p - rb.p_upper).abs() < 1e-12;
                if near_boundary {
                    continue;
                }
                compared += 1;
                if simultaneous_inseparable(scenario, &psi, cp) != rb.contains(a, p) {
                    mismatches += 1;
                }
            }
        }
    }
    Outcome {
        passed: mismatches == 0,
        residual: mismatches as f64,
        tolerance: 0.0,
        detail: format!("{compared} points, closed-form C > 0 vs boundary windows"),
    }
}

fn argmax_alpha() -> Outcome {
    let mut residual = 0.0f64;
    for scenario in Scenario::ALL {
        let rb = region_boundaries(scenario);
        for pair in Pair::ALL {
            let w = rb.pair_window(pair);
            for k in 0..ARGMAX_POINTS {
                let p = w.lo + (w.hi - w.lo) * (k as f64 + 0.5) / ARGMAX_POINTS as f64;
                let a = CloneParams::new(p)
                    .and_then(|cp| argmax_alpha_concurrence(scenario, pair, cp))
                    .unwrap_or(f64::NAN);
                residual = if a.is_nan() {
                    f64::INFINITY
                } else {
                    residual.max((a - FRAC_1_SQRT_2).abs())
                };
            }
        }
    }
    Outcome {
        passed: residual <= 1e-6,
        residual,
        tolerance: 1e-6,
        detail: format!("{ARGMAX_POINTS} in-window p per scenario and pair"),
    }
}

fn sum_deficit_claim() -> Outcome {
    let axis = linspace(0.0, 1.0, 101);
    let mut min_deficit = f64::INFINITY;
    let mut closed_residual = 0.0f64;
    let mut inside = 0usize;
    for scenario in Scenario::ALL {
        for &a in &axis {
            for &p in &axis {
                let (psi, cp) = point(a, p);
                if let Ok(d) = sum_deficit(scenario, &psi, cp) {
                    inside += 1;
                    min_deficit = min_deficit.min(d);
                    if scenario == Scenario::Nonlocal {
                        closed_residual = closed_residual
                            .max((d - nonlocal_sum_deficit_closed_form(&psi, cp)).abs());
                    }
                }
            }
        }
    }
    // Nonlocal deficit at fixed p is smallest at |α| = 1/√2.
    let cp = CloneParams::symmetric();
    let (lo, hi) = region_boundaries(Scenario::Nonlocal)
        .simultaneous_alpha_bounds(0.5)
        .unwrap_or((0.0, 1.0));
    let argmin = golden_section_max(
        |a| {
            real_input(a)
                .ok()
                .and_then(|psi| sum_deficit(Scenario::Nonlocal, &psi, cp).ok())
                .map_or(f64::NEG_INFINITY, |d| -d)
        },
        lo,
        hi,
        1e-10,
    );
    let argmin_err = (argmin - FRAC_1_SQRT_2).abs();
    Outcome {
        passed: min_deficit > 0.0 && inside > 0 && closed_residual <= 1e-12 && argmin_err <= 1e-6,
        residual: closed_residual,
        tolerance: 1e-12,
        detail: format!(
            "{inside} inseparable points, smallest deficit {}, nonlocal argmin |alpha| = {}",
            num(min_deficit),
            num(argmin)
        ),
    }
}

fn random_broadcast_channel<R: Rng>(rng: &mut R) -> DensityMatrix {
    loop {
        let modulus = rng.random::<f64>();
        let phase = std::f64::consts::TAU * rng.random::<f64>();
        let scenario = if rng.random::<bool>() {
            Scenario::Local
        } else {
            Scenario::Nonlocal
        };
        let pair = if rng.random::<bool>() {
            Pair::A1B1
        } else {
            Pair::A2B2
        };
        let p = rng.random::<f64>();
        let built =
            PureTwoQubit::from_alpha(Complex64::from_polar(modulus, phase)).and_then(|psi| {
                let cp = CloneParams::new(p)?;
                Ok(outputs(scenario, &psi, cp)?.pair(pair).clone())
            });
        if let Ok(rho) = built {
            return rho;
        }
    }
}

fn random_unitary<R: Rng>(rng: &mut R) -> ComplexMatrix {
    let [a, b] = sample_haar_qubit(rng);
    ComplexMatrix::from_rows([[a, -b.conj()], [b, a.conj()]])
}

/// No choice of corrections beats `F_max`.
fn fidelity_upper_bound(opts: &VerifyOptions) -> Outcome {
    let excess = map_indexed(200, opts.mode, |i| {
        let mut rng = rng_for(opts.seed, 5_000 + i as u64);
        let rho = if i % 2 == 0 {
            random_broadcast_channel(&mut rng)
        } else {
            match sample_x_state(&mut rng).to_density() {
                Ok(r) => r,
                Err(_) => return f64::INFINITY,
            }
        };
        let corr = Corrections(std::array::from_fn(|_| random_unitary(&mut rng)));
        exact_average_fidelity(&rho, &corr).map_or(f64::INFINITY, |f| f - f_max(&rho))
    });
    let worst = excess.into_iter().fold(f64::NEG_INFINITY, f64::max);
    Outcome {
        passed: worst <= 1e-9,
        residual: worst.max(0.0),
        tolerance: 1e-9,
        detail: format!(
            "200 random channels and corrections, max F - F_max = {}",
            num(worst)
        ),
    }
}

fn teleport_attainment(opts: &VerifyOptions) -> Outcome {
    let samples = opts.samples.max(1);
    let results = map_indexed(TELEPORT_CHANNELS, opts.mode, |i| {
        let mut rng = rng_for(opts.seed, 10_000 + i as u64);
        let rho = random_broadcast_channel(&mut rng);
        let optimized = optimize_corrections(&rho, &OptimizeOptions::default())?;
        let mc = simulate_teleportation(
            &rho,
            &optimized.corrections,
            samples,
            opts.seed.wrapping_add(i as u64),
            Parallelism::Sequential,
        )?;
        let gap = optimized.f_max - optimized.fidelity;
        let z_excess = (mc.average_fidelity - optimized.fidelity).abs() - 4.0 * mc.std_error;
        let z = if mc.std_error > 0.0 {
            (mc.average_fidelity - optimized.fidelity).abs() / mc.std_error
        } else {
            0.0
        };
        Ok::<_, crate::Error>((gap, z_excess, z, mc.std_error))
    });
    let mut worst_gap = 0.0f64;
    let mut worst_z = 0.0f64;
    let mut widest = 0.0f64;
    let mut failures = Vec::new();
    let mut first_error: Option<String> = None;
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok((gap, z_excess, z, se)) => {
                worst_gap = worst_gap.max(gap);
                worst_z = worst_z.max(z);
                widest = widest.max(se);
                if !(-1e-9..=1e-6).contains(&gap) || z_excess > 1e-12 {
                    failures.push(i);
                }
            }
            Err(e) => {
                worst_gap = f64::INFINITY;
                failures.push(i);
                first_error.get_or_insert_with(|| e.to_string());
            }
        }
    }
    Outcome {
        passed: failures.is_empty(),
        residual: worst_gap,
        tolerance: 1e-6,
        detail: format!(
            "{TELEPORT_CHANNELS} channels, {samples} MC samples each, max |MC - exact| = {} sigma (4 allowed, widest sigma {}), failing channels {:?}{}",
            num(worst_z),
            num(widest),
            failures,
            first_error.map(|e| format!(", first error: {e}")).unwrap_or_default()
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> VerifyOptions {
        VerifyOptions {
            samples: 2_000,
            ..Default::default()
        }
    }

    #[test]
    fn fault_is_detected_by_name() {
        let mut opts = quick();
        opts.fault = Some(Fault::ConcurrenceXSign);
        let r = x_vs_wootters(&opts);
        assert!(!r.passed);
        let r = x_vs_wootters(&quick());
        assert!(r.passed, "{}", r.detail);
    }

    #[test]
    fn cheap_claims_pass() {
        for (name, o) in [
            ("roots", region_roots()),
            ("spans", alpha_spans()),
            ("window", nonlocal_window()),
            ("mirror", mirror_symmetry()),
            ("hyp", theorem_hypotheses()),
            ("thm", theorem_consistency()),
            ("dom", dominance()),
            ("gap", gap_formula()),
            ("sym", symmetric_point()),
            ("bnd", boundary_consistency()),
            ("argmax", argmax_alpha()),
        ] {
            assert!(o.passed, "{name}: {} residual {}", o.detail, o.residual);
        }
    }

    #[test]
    fn report_lines() {
        let c = ClaimResult {
            name: "x",
            passed: false,
            residual: 0.5,
            tolerance: 1e-10,
            detail: "d".into(),
            millis: 3,
        };
        assert!(c.line().starts_with("FAIL x "));
        let r = VerifyReport {
            schema: 1,
            seed: 0,
            samples: 1,
            claims: vec![c],
        };
        assert!(!r.all_passed());
        assert_eq!(r.failed(), vec!["x"]);
        assert!(r.to_text().contains("1 of 1 claims failed: x"));
    }
}
