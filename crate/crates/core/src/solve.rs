//! Root scanning and spectrum assembly on top of the coefficient recursion.
//!
//! The termination determinant `Δ_N(E)` at fixed expansion point and depth is
//! a smooth function of energy whose sign changes bracket the eigenvalues, so
//! the solver is a classic scan-and-bisect loop with two twists:
//!
//! * **Depth laddering.** A full-depth determinant evaluation costs roughly
//!   `N³` coefficient operations, but sign *patterns* stabilize at much
//!   shallower depth. The window is scanned and coarsely bisected at a proxy
//!   depth, and only the final refinement pays full price. Every reported
//!   root is re-bracketed and bisected on the full-depth determinant, so the
//!   shortcut affects cost, never the answer.
//! * **Built-in stability check.** One recursion run to depth `N` yields the
//!   determinant at *every* depth up to `N`, so each full-depth evaluation
//!   also hands us the depth `N−1` values for free. The root of the
//!   depth-`N−1` determinant is refined from those shared evaluations and a
//!   root is flagged converged only when the two agree within the tolerance —
//!   the standard "stable under one more iteration" criterion.
//!
//! Sign work uses the normalized determinant (the raw one overflows any fixed
//! exponent range long before depth 120); see [`crate::aim`].

use alloc::string::String;
use alloc::vec::Vec;

use crate::aim::{delta_profile, AimError, SoldeProblem};
use crate::scalar::{Precision, Real};
use crate::well::{characteristic_exponents, make_well_problem, PotentialParams};
use core::fmt;

/// Proxy depth for window scanning; escalated toward `n_max` when a window
/// shows no sign change at all.
const SCAN_DEPTH: usize = 36;

/// Energy window and solver knobs for one root hunt.
#[derive(Clone, Copy, Debug)]
pub struct ScanConfig {
    /// Lower edge of the energy window.
    pub e_min: f64,
    /// Upper edge of the energy window.
    pub e_max: f64,
    /// Number of scan samples across the window (at least 2).
    pub grid_points: usize,
    /// Expansion point for the recursion.
    pub y0: f64,
    /// Recursion depth cap; the spectrum is reported at this depth.
    pub n_max: usize,
    /// Absolute bisection tolerance on the energy.
    pub tol: f64,
    /// Working precision for all recursion arithmetic.
    pub precision: Precision,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            e_min: 0.0,
            e_max: 20.0,
            grid_points: 2000,
            y0: 0.0,
            n_max: 120,
            tol: 1e-8,
            precision: Precision::new(30).expect("30 digits is above the floor"),
        }
    }
}

/// One eigenvalue as the solver sees it.
#[derive(Clone, Copy, Debug)]
pub struct EigenResult {
    /// Position in the ascending spectrum (0 = ground state of the window).
    pub index: usize,
    /// The eigenvalue estimate (midpoint of the final bracket).
    pub energy: f64,
    /// Whether the full-depth root agrees with the depth `n_max − 1` root
    /// within the tolerance.
    pub converged: bool,
    /// Recursion depth the estimate was reported at.
    pub iterations_used: usize,
    /// Normalized determinant magnitude at the reported energy.
    pub delta_residual: f64,
    /// Final sign-change bracket at full depth.
    pub bracket: (f64, f64),
}

/// Result of sweeping the expansion point across a range.
#[derive(Clone, Debug)]
pub struct StabilityReport {
    /// The expansion points sampled.
    pub y0_samples: Vec<f64>,
    /// Converged eigenvalue at each sample (`None` where the state was not
    /// found or failed to converge).
    pub energies: Vec<Option<f64>>,
    /// Widest contiguous sample range over which the eigenvalue moves less
    /// than ten tolerances. `(NaN, NaN)` if no sample produced a value.
    pub plateau_range: (f64, f64),
    /// Actual spread (max − min) across the plateau.
    pub max_spread_on_plateau: f64,
}

/// A spectrum request's outcome: the states found plus bookkeeping.
#[derive(Clone, Debug)]
pub struct SpectrumOutcome {
    /// States found, ascending, re-indexed from 0.
    pub results: Vec<EigenResult>,
    /// Whether the requested number of states was actually found before the
    /// window-extension budget ran out.
    pub complete: bool,
    /// Human-readable warnings (e.g. supercritical parameter ranges).
    pub warnings: Vec<String>,
}

/// Solver failures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveError {
    /// A configuration field violates its precondition.
    InvalidConfig(&'static str),
    /// Every determinant sample across the window sits below the noise floor
    /// of the working precision: more digits are needed to say anything.
    PrecisionExhausted,
    /// The recursion itself failed (bad expansion point, order exhaustion).
    Recursion(AimError),
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::InvalidConfig(msg) => write!(f, "invalid scan configuration: {msg}"),
            SolveError::PrecisionExhausted => write!(
                f,
                "determinant is below the precision noise floor across the whole window"
            ),
            SolveError::Recursion(e) => write!(f, "recursion failed: {e}"),
        }
    }
}

impl core::error::Error for SolveError {}

impl From<AimError> for SolveError {
    fn from(e: AimError) -> Self {
        SolveError::Recursion(e)
    }
}

fn validate(config: &ScanConfig) -> Result<(), SolveError> {
    if !(config.e_min.is_finite() && config.e_max.is_finite() && config.e_min < config.e_max) {
        return Err(SolveError::InvalidConfig(
            "energy window must be finite with e_min < e_max",
        ));
    }
    if config.grid_points < 2 {
        return Err(SolveError::InvalidConfig("grid needs at least 2 points"));
    }
    if !(config.tol > 0.0 && config.tol.is_finite()) {
        return Err(SolveError::InvalidConfig("tolerance must be positive"));
    }
    if config.n_max < 2 {
        return Err(SolveError::InvalidConfig(
            "depth cap must be at least 2 for the stability check",
        ));
    }
    if !config.y0.is_finite() {
        return Err(SolveError::InvalidConfig("expansion point must be finite"));
    }
    Ok(())
}

/// Evaluation context shared by every determinant call in a hunt.
struct Evaluator<'p> {
    problem: &'p dyn SoldeProblem,
    y0: Real,
    precision: Precision,
}

impl Evaluator<'_> {
    /// Normalized determinant at `depth` (last entry of the profile).
    fn at_depth(&self, e: f64, depth: usize) -> Result<f64, SolveError> {
        let energy = Real::from_f64(e, self.precision);
        let prof = delta_profile(self.problem, &self.y0, &energy, depth)?;
        Ok(prof[depth - 1])
    }

    /// Normalized determinant at the two deepest levels `(depth − 1, depth)`.
    fn pair_at_depth(&self, e: f64, depth: usize) -> Result<(f64, f64), SolveError> {
        let energy = Real::from_f64(e, self.precision);
        let prof = delta_profile(self.problem, &self.y0, &energy, depth)?;
        Ok((prof[depth - 2], prof[depth - 1]))
    }
}

fn sgn(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Bisect `f` (already evaluated to `(va, vb)` with a sign change) until the
/// bracket is narrower than `target`. Returns the bracket; `f` errors bubble.
fn bisect<F: FnMut(f64) -> Result<f64, SolveError>>(
    mut a: f64,
    mut b: f64,
    mut va: f64,
    mut f: F,
    target: f64,
    max_iter: usize,
) -> Result<(f64, f64), SolveError> {
    for _ in 0..max_iter {
        if (b - a).abs() <= target {
            break;
        }
        let m = 0.5 * (a + b);
        if m <= a.min(b) || m >= a.max(b) {
            break; // hit f64 resolution
        }
        let vm = f(m)?;
        if sgn(vm) == 0 || sgn(vm) == sgn(va) {
            a = m;
            va = vm;
        } else {
            b = m;
        }
    }
    Ok((a, b))
}

struct RefinedRoot {
    energy: f64,
    /// Root of the depth `n_max − 1` determinant, if it could be pinned down.
    energy_prev_depth: Option<f64>,
    delta_residual: f64,
    bracket: (f64, f64),
}

/// Try to re-establish a sign change of `f` around a candidate interval,
/// expanding geometrically up to `max_half_width`.
fn ensure_bracket<F: FnMut(f64) -> Result<f64, SolveError>>(
    center: f64,
    half_width0: f64,
    max_half_width: f64,
    mut f: F,
) -> Result<Option<(f64, f64, f64)>, SolveError> {
    let mut hw = half_width0.max(f64::EPSILON * center.abs().max(1.0));
    for _ in 0..8 {
        let (a, b) = (center - hw, center + hw);
        let va = f(a)?;
        let vb = f(b)?;
        if sgn(va) * sgn(vb) < 0 {
            return Ok(Some((a, b, va)));
        }
        if hw >= max_half_width {
            break;
        }
        hw = (hw * 2.5).min(max_half_width);
    }
    Ok(None)
}

/// Refine one grid bracket into a full-depth root with its stability partner.
fn refine_bracket(
    ev: &Evaluator<'_>,
    mut lo: f64,
    mut hi: f64,
    scan_depth: usize,
    config: &ScanConfig,
) -> Result<Option<RefinedRoot>, SolveError> {
    let n = config.n_max;
    let tol = config.tol;
    let cell = (config.e_max - config.e_min) / (config.grid_points - 1) as f64;

    // Cheap intermediate stages: double the depth and re-establish the
    // bracket. These exist to kill brackets that are noise artifacts (they do
    // not survive deepening) and to keep the bracket roughly centered — not
    // to tighten it. The root of the determinant drifts as the depth grows,
    // so over-tightening here would strand the full-depth stage outside its
    // own root's neighborhood.
    let mut depth = scan_depth;
    while depth * 2 < n {
        depth *= 2;
        let center = 0.5 * (lo + hi);
        let hw = 0.5 * (hi - lo);
        match ensure_bracket(center, hw, (8.0 * cell).max(hw), |e| ev.at_depth(e, depth))? {
            Some((a, b, va)) => {
                let target = (0.25 * cell).max(tol * 256.0);
                let (a, b) = bisect(a, b, va, |e| ev.at_depth(e, depth), target, 64)?;
                lo = a;
                hi = b;
            }
            None => return Ok(None), // not stable under deepening: spurious
        }
    }

    // Full-depth stage. Each evaluation also yields the depth n−1 value;
    // remember every sample so the stability partner can reuse them.
    let mut samples: Vec<(f64, f64, f64)> = Vec::new(); // (E, Δ̂_{n−1}, Δ̂_n)
    let full = |e: f64, samples: &mut Vec<(f64, f64, f64)>| -> Result<f64, SolveError> {
        let (prev, last) = ev.pair_at_depth(e, n)?;
        samples.push((e, prev, last));
        Ok(last)
    };

    let center = 0.5 * (lo + hi);
    let hw = 0.5 * (hi - lo);
    let est = ensure_bracket(center, hw, (4.0 * cell).max(hw), |e| full(e, &mut samples))?;
    let (a, b, va) = match est {
        Some(t) => t,
        None => return Ok(None),
    };
    let (a, b) = bisect(
        a,
        b,
        va,
        |e| full(e, &mut samples),
        tol * 0.5,
        200,
    )?;
    let energy = 0.5 * (a + b);
    let delta_residual = full(energy, &mut samples)?.abs();

    // Stability partner: find the depth n−1 sign change among the shared
    // samples, then finish it by bisection (still at full depth, since one
    // run hands back both levels).
    samples.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("energies are finite"));
    samples.dedup_by(|x, y| x.0 == y.0);
    let mut prev_bracket = None;
    for w in samples.windows(2) {
        if sgn(w[0].1) * sgn(w[1].1) < 0 {
            // Prefer the crossing nearest the full-depth root.
            let dist = (0.5 * (w[0].0 + w[1].0) - energy).abs();
            if prev_bracket
                .map(|(_, _, _, best)| dist < best)
                .unwrap_or(true)
            {
                prev_bracket = Some((w[0].0, w[1].0, w[0].1, dist));
            }
        }
    }
    // Not among the shared samples: look in a small neighborhood.
    if prev_bracket.is_none() {
        let probe = ensure_bracket(energy, 4.0 * tol, (64.0 * tol).max(cell), |e| {
            let (prev, _) = ev.pair_at_depth(e, n)?;
            Ok(prev)
        })?;
        if let Some((pa, pb, pva)) = probe {
            prev_bracket = Some((pa, pb, pva, 0.0));
        }
    }
    let energy_prev_depth = match prev_bracket {
        Some((pa, pb, pva, _)) => {
            let (pa, pb) = bisect(
                pa,
                pb,
                pva,
                |e| {
                    let (prev, _) = ev.pair_at_depth(e, n)?;
                    Ok(prev)
                },
                tol * 0.5,
                200,
            )?;
            Some(0.5 * (pa + pb))
        }
        None => None,
    };

    Ok(Some(RefinedRoot {
        energy,
        energy_prev_depth,
        delta_residual,
        bracket: (a, b),
    }))
}

/// Hunt every determinant root inside the window.
///
/// Scans a uniform grid at a proxy depth (escalating if the window shows no
/// sign structure at all), then refines each sign change on the full-depth
/// determinant. Results come back sorted ascending and indexed from 0; each
/// carries its final bracket and the depth-stability verdict.
pub fn find_roots(
    problem: &dyn SoldeProblem,
    config: &ScanConfig,
) -> Result<Vec<EigenResult>, SolveError> {
    validate(config)?;
    let ev = Evaluator {
        problem,
        y0: Real::from_f64(config.y0, config.precision),
        precision: config.precision,
    };
    let n = config.n_max;
    let m = config.grid_points;
    let step = (config.e_max - config.e_min) / (m - 1) as f64;
    let es: Vec<f64> = (0..m).map(|i| config.e_min + step * i as f64).collect();

    // Scan, escalating depth while the window looks featureless.
    let mut scan_depth = SCAN_DEPTH.min(n);
    let (vals, brackets) = loop {
        let mut vals = Vec::with_capacity(m);
        for &e in &es {
            vals.push(ev.at_depth(e, scan_depth)?);
        }
        let mut brackets = Vec::new();
        for i in 0..m - 1 {
            let (sa, sb) = (sgn(vals[i]), sgn(vals[i + 1]));
            if sa * sb < 0 {
                brackets.push((es[i], es[i + 1]));
            } else if sa == 0 {
                // Exact zero on a grid node: bracket its neighborhood.
                let lo = if i > 0 { es[i - 1] } else { es[i] - step };
                brackets.push((lo, es[i + 1]));
            }
        }
        if !brackets.is_empty() || scan_depth >= n {
            break (vals, brackets);
        }
        scan_depth = (scan_depth * 2).min(n);
    };

    // A window where every sample drowns below the working-precision floor
    // cannot be trusted either way.
    let floor = libm::pow(10.0, -(config.precision.decimal_digits() as f64) + 4.0);
    if vals.iter().all(|v| v.abs() < floor) {
        return Err(SolveError::PrecisionExhausted);
    }

    let mut roots: Vec<RefinedRoot> = Vec::new();
    for (lo, hi) in brackets {
        if let Some(root) = refine_bracket(&ev, lo, hi, scan_depth, config)? {
            roots.push(root);
        }
    }

    roots.sort_by(|x, y| x.energy.partial_cmp(&y.energy).expect("finite energies"));

    // Merge near-duplicates (a root straddling two grid cells refines twice);
    // keep the copy most stable under the depth check.
    let mut merged: Vec<RefinedRoot> = Vec::new();
    for r in roots {
        let dup = merged
            .last()
            .map(|p| (r.energy - p.energy).abs() < 10.0 * config.tol)
            .unwrap_or(false);
        if dup {
            let stab = |x: &RefinedRoot| {
                x.energy_prev_depth
                    .map(|p| (x.energy - p).abs())
                    .unwrap_or(f64::INFINITY)
            };
            if stab(&r) < stab(merged.last().expect("nonempty")) {
                *merged.last_mut().expect("nonempty") = r;
            }
        } else {
            merged.push(r);
        }
    }

    Ok(merged
        .into_iter()
        .enumerate()
        .map(|(index, r)| EigenResult {
            index,
            energy: r.energy,
            converged: r
                .energy_prev_depth
                .map(|p| (r.energy - p).abs() < config.tol)
                .unwrap_or(false),
            iterations_used: n,
            delta_residual: r.delta_residual,
            bracket: r.bracket,
        })
        .collect())
}

/// Number of window extensions `spectrum` will try before giving up.
const MAX_EXTENSIONS: usize = 16;

/// The lowest `k` states of the well, extending the window upward as needed.
///
/// Starts from the window in `config`; whenever fewer than `k` states have-
/// been found, the window is extended upward with doubling span (with a small
/// overlap so a root on the seam is not lost) until either `k` states are in
/// hand or the extension budget runs out, in which case the outcome is marked
/// incomplete. Supercritical parameter combinations are reported as warnings
/// on the outcome: every energy below the collapse threshold is then
/// boundary-condition dependent rather than intrinsic.
pub fn spectrum(
    params: &PotentialParams,
    k: usize,
    config: &ScanConfig,
) -> Result<SpectrumOutcome, SolveError> {
    if k == 0 {
        return Err(SolveError::InvalidConfig("at least one state must be requested"));
    }
    validate(config)?;
    let problem = make_well_problem(*params)
        .map_err(|_| SolveError::InvalidConfig("box width must be positive"))?;

    let mut warnings = Vec::new();
    let exps = characteristic_exponents(params);
    if exps.supercritical_origin {
        warnings.push(String::from(
            "origin term is supercritical (B < -L^2/8): levels depend on the \
             regularization and fall without bound",
        ));
    }
    if exps.supercritical_wall {
        warnings.push(String::from(
            "wall term is supercritical (C < -L^2/2): levels depend on the \
             regularization and fall without bound",
        ));
    }

    let mut results: Vec<EigenResult> = Vec::new();
    let mut window = (config.e_min, config.e_max);
    let mut complete = false;
    for ext in 0..=MAX_EXTENSIONS {
        let cfg = ScanConfig {
            e_min: window.0,
            e_max: window.1,
            ..*config
        };
        match find_roots(&problem, &cfg) {
            Ok(found) => {
                for r in found {
                    let dup = results
                        .iter()
                        .any(|p| (p.energy - r.energy).abs() < 10.0 * config.tol);
                    if !dup {
                        results.push(r);
                    }
                }
            }
            Err(SolveError::PrecisionExhausted) if ext > 0 => {
                // An extension window with no resolvable structure: stop
                // extending rather than failing the whole request.
                warnings.push(String::from(
                    "window extension stopped at the precision noise floor",
                ));
                break;
            }
            Err(e) => return Err(e),
        }
        if results.len() >= k {
            complete = true;
            break;
        }
        // Extend upward, doubling the span, overlapping a few cells.
        let span = window.1 - window.0;
        let overlap = 3.0 * span / (config.grid_points - 1) as f64;
        window = (window.1 - overlap, window.1 + 2.0 * span);
    }

    results.sort_by(|x, y| x.energy.partial_cmp(&y.energy).expect("finite energies"));
    results.truncate(k);
    for (i, r) in results.iter_mut().enumerate() {
        r.index = i;
    }
    if results.len() < k {
        complete = false;
    }
    Ok(SpectrumOutcome {
        results,
        complete,
        warnings,
    })
}

/// Sweep the expansion point across `[y0_min, y0_max]` and watch one state.
///
/// A correct setup shows a plateau: the eigenvalue is independent of where
/// the recursion is expanded, up to solver jitter. The report records the
/// energy found at each sample and the widest contiguous run whose spread
/// stays below ten tolerances.
pub fn plateau_scan(
    problem: &dyn SoldeProblem,
    base_config: &ScanConfig,
    y0_min: f64,
    y0_max: f64,
    samples: usize,
    state_index: usize,
) -> Result<StabilityReport, SolveError> {
    validate(base_config)?;
    if samples < 2 {
        return Err(SolveError::InvalidConfig("need at least 2 sweep samples"));
    }
    if !(y0_min.is_finite() && y0_max.is_finite() && y0_min < y0_max) {
        return Err(SolveError::InvalidConfig(
            "sweep range must be finite with y0_min < y0_max",
        ));
    }

    let y0_samples: Vec<f64> = (0..samples)
        .map(|i| y0_min + (y0_max - y0_min) * i as f64 / (samples - 1) as f64)
        .collect();
    let mut energies: Vec<Option<f64>> = Vec::with_capacity(samples);
    for &y0 in &y0_samples {
        let cfg = ScanConfig { y0, ..*base_config };
        let e = match find_roots(problem, &cfg) {
            Ok(roots) => roots
                .get(state_index)
                .filter(|r| r.converged)
                .map(|r| r.energy),
            // A sample where the expansion point is unusable simply has no
            // value; the plateau logic treats it as a gap.
            Err(SolveError::Recursion(_)) | Err(SolveError::PrecisionExhausted) => None,
            Err(e) => return Err(e),
        };
        energies.push(e);
    }

    // Widest contiguous all-present run with spread below the threshold.
    let threshold = 10.0 * base_config.tol;
    let mut best: Option<(usize, usize, f64)> = None; // (i, j, spread)
    for i in 0..samples {
        if energies[i].is_none() {
            continue;
        }
        let (mut lo, mut hi) = (energies[i].unwrap(), energies[i].unwrap());
        let mut j = i;
        loop {
            let width = j - i;
            let better = best.map(|(bi, bj, _)| width > bj - bi).unwrap_or(true);
            if better {
                best = Some((i, j, hi - lo));
            }
            if j + 1 >= samples {
                break;
            }
            match energies[j + 1] {
                Some(e) => {
                    let (nlo, nhi) = (lo.min(e), hi.max(e));
                    if nhi - nlo >= threshold {
                        break;
                    }
                    lo = nlo;
                    hi = nhi;
                    j += 1;
                }
                None => break,
            }
        }
    }

    let (plateau_range, max_spread_on_plateau) = match best {
        Some((i, j, spread)) => ((y0_samples[i], y0_samples[j]), spread),
        None => ((f64::NAN, f64::NAN), f64::INFINITY),
    };
    Ok(StabilityReport {
        y0_samples,
        energies,
        plateau_range,
        max_spread_on_plateau,
    })
}
