//! Eigenfunction reconstruction from the stabilized coefficient ratio.
//!
//! At an eigenvalue the iterated coefficient pair stabilizes, and the ratio
//! `α(y) = s_n(y)/λ_n(y)` converges to the negative logarithmic derivative of
//! the bounded solution of the transformed problem. Undoing that logarithmic
//! derivative reconstructs the profile:
//!
//! ```text
//! ψ(y) = C₂ (1 − y)^a (1 + y)^b exp(−∫₀^y α(t) dt)
//! ```
//!
//! with the boundary powers matching the peeled formulation the engine solves
//! subcritical wells in: `a = γ` at the wall and `b = β/2` at the origin. The
//! two powers sit one Jacobian factor apart because `1 − y` vanishes linearly
//! in `L − x` while `1 + y` vanishes quadratically in `x`.
//!
//! # Evaluating the integrand
//!
//! `α` is evaluated pointwise: the whole recursion is re-centered at each
//! quadrature node. The individual coefficient functions carry wall poles
//! whose order grows with the iteration depth, so a single long series about
//! one center degrades toward the walls, while the pointwise ratio stays
//! smooth everywhere strictly inside the box.
//!
//! At finite depth the ratio is rational-like and carries simple poles of two
//! kinds:
//!
//! * **nodes of the eigenfunction** — residue ≈ −1, exactly where the
//!   exponential must pass through zero with a sign change;
//! * **near-cancelling zero–pole pairs** — truncation artifacts of stopping
//!   the iteration at finite depth, with residues near zero.
//!
//! Poles are located by bracketing sign changes of `λ_n`, their residues
//! measured as `s_n(t*)/λ_n′(t*)` (the derivative read off the linear Taylor
//! coefficient of the re-centered jet), and their model terms `r_k/(t − t_k)`
//! subtracted from the integrand. What remains is smooth and integrates on an
//! adaptive Simpson backbone (target 10⁻⁸). The subtracted terms integrate in
//! closed form to signed power factors `((y − t_k)/(−t_k))^{−r_k}`: node
//! factors reinstate the zero crossings; artifact factors stay within
//! roundoff of one except in a vanishing neighborhood of the artifact itself.
//! A pole whose residue is neither node-like nor negligible means the ratio
//! has not settled into this model, and reconstruction refuses with a
//! diagnostic rather than returning a silently wrong profile. The bracketing
//! scan cannot see pole pairs closer than its resolution or zeros of even
//! order; states low enough to reconstruct faithfully do not produce either.
//!
//! Past `|y| = 0.98` the profile switches to the boundary power law continued
//! from the trust edge: next to a wall the profile *is* the boundary power to
//! leading order, and freezing the smooth integral there avoids quadrature
//! against coefficient seeds evaluated ever closer to their singular points.
//!
//! The constant `C₂` is fixed by unit L² norm over the box, `∫₀^L ψ² dx = 1`
//! (backbone quadrature plus closed-form power tails past the trust edges),
//! with the sign convention that ψ is positive near the origin end.
//!
//! This reconstruction is experimental. Eigenvalues come from determinant
//! roots alone; the profile is a diagnostic companion, with pointwise
//! accuracy a few orders looser than the eigenvalue it is built from, and
//! looser still for high states whose ratio needs more depth than the
//! pointwise cap affords.

use alloc::vec::Vec;

use crate::aim::{final_point, AimError};
use crate::scalar::{Precision, Real};
use crate::solve::EigenResult;
use crate::well::{
    characteristic_exponents, make_well_problem, to_y, PotentialParams, WellError, WellProblem,
};
use core::fmt;

/// Working precision for pointwise ratio evaluation; matches the solver's
/// default so the profile is consistent with the energies it is built from.
const POINT_DIGITS: u32 = 30;

/// Depth cap for pointwise evaluation. The ratio stabilizes far shallower
/// than the determinant roots of a production solve, and the cap keeps each
/// of the thousands of quadrature evaluations at a few milliseconds.
const DEPTH_CAP: usize = 36;

/// |y| beyond which the boundary power law continues the profile.
const TRUST_EDGE: f64 = 0.98;

/// Base panel width of the quadrature backbone. Partial panels are closed
/// with a single Simpson step, so this also bounds their truncation error.
const PANEL_WIDTH: f64 = 0.0155;

/// Absolute target for the smooth part of the log-derivative integral.
const QUAD_TOL: f64 = 1e-8;

/// Grid resolution of the pole-bracketing scan.
const POLE_SCAN: usize = 257;

/// Evaluation keeps this distance from detected poles of the ratio.
const POLE_GUARD: f64 = 1e-9;

/// Half-width of the quadrature window carved out around each pole. A pole
/// position is only known to the bisection width (~1e-13), and the residue
/// subtraction amplifies that uncertainty by the inverse square of the
/// distance, so integrand values cached closer than about 1e-5 to a pole are
/// unreliable. Backbone edges therefore keep this distance, and the smooth
/// integral is interpolated across the window, whose total contribution is
/// O(width).
const POLE_INSET: f64 = 1e-4;

/// Residues within this distance of −1 classify a pole as a node.
const NODE_RESIDUE_BAND: f64 = 0.3;

/// Residues at most this large in magnitude classify a pole as a truncation
/// artifact.
const ARTIFACT_RESIDUE: f64 = 0.25;

/// Why a profile could not be built or evaluated.
#[derive(Clone, Debug, PartialEq)]
pub enum WavefunctionError {
    /// The eigen record is not marked converged; a profile hung on an
    /// unsettled determinant root has no meaning.
    NotConverged,
    /// A strength term is supercritical, so the profile would depend on a
    /// regularization the engine does not impose.
    SupercriticalStrengths,
    /// A requested sample lies outside the closed box.
    SampleOutsideBox,
    /// The ratio has a pole that is neither a node (residue ≈ −1) nor a
    /// truncation artifact (residue ≈ 0); the factored model does not apply.
    UnresolvedRatioPole {
        /// Algebraic coordinate of the offending pole.
        location: f64,
        /// Its measured residue.
        residue: f64,
    },
    /// A caller-supplied argument violates a precondition.
    InvalidArgument(&'static str),
    /// Quadrature or normalization produced a non-finite or degenerate value.
    NumericalBreakdown(&'static str),
    /// Driving the recursion failed.
    Recursion(AimError),
    /// Potential-domain validation failed.
    Well(WellError),
}

impl fmt::Display for WavefunctionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WavefunctionError::NotConverged => {
                write!(f, "state is not converged; no profile to reconstruct")
            }
            WavefunctionError::SupercriticalStrengths => write!(
                f,
                "a strength term is supercritical; the profile depends on the regularization"
            ),
            WavefunctionError::SampleOutsideBox => {
                write!(f, "requested sample lies outside the box")
            }
            WavefunctionError::UnresolvedRatioPole { location, residue } => write!(
                f,
                "unresolved pole of the stabilized ratio at y = {location} (residue {residue}); \
                 the profile is unavailable for this state"
            ),
            WavefunctionError::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            WavefunctionError::NumericalBreakdown(msg) => write!(f, "numerical breakdown: {msg}"),
            WavefunctionError::Recursion(e) => write!(f, "recursion failed: {e}"),
            WavefunctionError::Well(e) => write!(f, "invalid well: {e}"),
        }
    }
}

impl core::error::Error for WavefunctionError {}

impl From<AimError> for WavefunctionError {
    fn from(e: AimError) -> Self {
        WavefunctionError::Recursion(e)
    }
}

impl From<WellError> for WavefunctionError {
    fn from(e: WellError) -> Self {
        WavefunctionError::Well(e)
    }
}

/// One detected pole of the stabilized ratio.
#[derive(Clone, Copy, Debug)]
struct RatioPole {
    /// Algebraic position.
    t: f64,
    /// Measured residue `s_n(t)/λ_n′(t)`.
    residue: f64,
    /// Whether the pole is a node (residue ≈ −1) rather than an artifact.
    node: bool,
}

/// A reconstructed profile for one converged, fully subcritical state,
/// evaluable at arbitrary points of the box.
pub struct WavefunctionModel {
    problem: WellProblem,
    energy: Real,
    depth: usize,
    wall_power: f64,
    origin_power: f64,
    poles: Vec<RatioPole>,
    /// Quadrature backbone edges across the trust interval, ascending.
    edges: Vec<f64>,
    /// Smooth integrand values at the edges.
    f_edges: Vec<f64>,
    /// Cumulative smooth integral from the first edge to each edge.
    prefix: Vec<f64>,
    /// Smooth integral from the first edge to y = 0, the reference point of
    /// both the exponential and the closed-form pole factors.
    p_zero: f64,
    /// Normalization constant, sign convention included.
    c2: f64,
}

impl WavefunctionModel {
    /// Build the reconstruction for one state.
    ///
    /// `eigen` must be a converged result from a spectrum of the same
    /// `params`; nothing ties the two together beyond the caller's
    /// bookkeeping, and an energy that is not actually an eigenvalue shows up
    /// as unresolved ratio poles or a visibly wrong profile.
    pub fn build(
        params: &PotentialParams,
        eigen: &EigenResult,
    ) -> Result<Self, WavefunctionError> {
        if !eigen.converged {
            return Err(WavefunctionError::NotConverged);
        }
        if !eigen.energy.is_finite() {
            return Err(WavefunctionError::InvalidArgument("energy must be finite"));
        }
        let exps = characteristic_exponents(params);
        if exps.supercritical_origin || exps.supercritical_wall {
            return Err(WavefunctionError::SupercriticalStrengths);
        }
        let problem = make_well_problem(*params)?;
        let p = Precision::new(POINT_DIGITS).expect("compile-time digit count");
        let energy = Real::from_f64(eigen.energy, p);
        let depth = eigen.iterations_used.clamp(1, DEPTH_CAP);

        let mut model = Self {
            problem,
            energy,
            depth,
            wall_power: exps.gamma,
            origin_power: exps.beta / 2.0,
            poles: Vec::new(),
            edges: Vec::new(),
            f_edges: Vec::new(),
            prefix: Vec::new(),
            p_zero: 0.0,
            c2: 1.0,
        };
        model.locate_poles()?;
        model.build_prefix()?;
        model.p_zero = model.smooth_integral_to(0.0)?;
        model.c2 = model.normalize()?;
        Ok(model)
    }

    /// ψ at algebraic coordinate `y ∈ [−1, 1]`.
    pub fn eval_y(&self, y: f64) -> Result<f64, WavefunctionError> {
        Ok(self.c2 * self.profile(y)?)
    }

    /// ψ at box coordinate `x ∈ [0, L]`.
    pub fn eval_x(&self, x: f64) -> Result<f64, WavefunctionError> {
        let y = to_y(x, self.problem.params().l)
            .map_err(|_| WavefunctionError::SampleOutsideBox)?;
        self.eval_y(y)
    }

    /// Algebraic positions of the detected nodes (sign changes), ascending.
    pub fn nodes_y(&self) -> Vec<f64> {
        self.poles.iter().filter(|p| p.node).map(|p| p.t).collect()
    }

    /// The energy the profile was built at.
    pub fn energy(&self) -> f64 {
        self.energy.to_f64()
    }

    /// `(λ_n, λ_n′, s_n)` at a single point, in working precision.
    fn ratio_point(&self, t: f64) -> Result<(Real, Real, Real), WavefunctionError> {
        let p = Precision::new(POINT_DIGITS).expect("compile-time digit count");
        let y = Real::from_f64(t, p);
        final_point(&self.problem, &y, &self.energy, self.depth).map_err(WavefunctionError::from)
    }

    /// Bracket the poles of the stabilized ratio across the trust interval:
    /// sign changes of `λ_n` refined by bisection, residues measured from
    /// `s_n(t*)/λ_n′(t*)`, classified as nodes or artifacts.
    fn locate_poles(&mut self) -> Result<(), WavefunctionError> {
        let lo = -TRUST_EDGE;
        let hi = TRUST_EDGE;
        let mut prev_t = lo;
        let mut prev_sign = {
            let (lam, _, _) = self.ratio_point(lo)?;
            lam.signum_i()
        };
        for i in 1..POLE_SCAN {
            let t = lo + (hi - lo) * (i as f64) / ((POLE_SCAN - 1) as f64);
            let (lam, _, _) = self.ratio_point(t)?;
            let sign = lam.signum_i();
            if sign != 0 && prev_sign != 0 && sign != prev_sign {
                let t_star = self.bisect_lambda_zero(prev_t, t, prev_sign)?;
                let (_, slope, s_val) = self.ratio_point(t_star)?;
                let residue = if slope.is_zero() {
                    f64::INFINITY
                } else {
                    s_val.div(&slope).to_f64()
                };
                let node = (residue + 1.0).abs() <= NODE_RESIDUE_BAND;
                let artifact = residue.abs() <= ARTIFACT_RESIDUE;
                if !(node || artifact) || t_star.abs() <= 16.0 * POLE_GUARD {
                    // Either the residue fits no model, or the pole sits on
                    // the reference point that anchors every closed-form
                    // factor.
                    return Err(WavefunctionError::UnresolvedRatioPole {
                        location: t_star,
                        residue,
                    });
                }
                self.poles.push(RatioPole {
                    t: t_star,
                    residue,
                    node,
                });
            }
            if sign != 0 {
                prev_sign = sign;
                prev_t = t;
            }
        }
        Ok(())
    }

    /// Refine one bracketed sign change of `λ_n` down to roundoff width.
    fn bisect_lambda_zero(
        &self,
        mut lo: f64,
        mut hi: f64,
        lo_sign: i8,
    ) -> Result<f64, WavefunctionError> {
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo < 1e-13 {
                break;
            }
            let (lam, _, _) = self.ratio_point(mid)?;
            let sign = lam.signum_i();
            if sign == 0 {
                return Ok(mid);
            }
            if sign == lo_sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// The pole-subtracted integrand: the pointwise ratio minus every modeled
    /// pole term, smooth up to residue measurement error.
    fn smooth_alpha(&self, t: f64) -> Result<f64, WavefunctionError> {
        // Never evaluate on top of a modeled pole; the nudge is far below
        // quadrature resolution.
        let mut tt = t;
        for pole in &self.poles {
            if (tt - pole.t).abs() < POLE_GUARD {
                tt = pole.t + if tt >= pole.t { POLE_GUARD } else { -POLE_GUARD };
            }
        }
        let (lam, _, s_val) = self.ratio_point(tt)?;
        let alpha = s_val.div(&lam).to_f64();
        if !alpha.is_finite() {
            return Err(WavefunctionError::UnresolvedRatioPole {
                location: tt,
                residue: f64::NAN,
            });
        }
        let mut out = alpha;
        for pole in &self.poles {
            out -= pole.residue / (tt - pole.t);
        }
        Ok(out)
    }

    /// Lay the quadrature backbone: base panels between the trust edges,
    /// split at guarded insets around every pole, each panel integrated by
    /// adaptive Simpson, cumulative sums recorded at the panel edges.
    fn build_prefix(&mut self) -> Result<(), WavefunctionError> {
        let lo = -TRUST_EDGE;
        let hi = TRUST_EDGE;
        let mut bounds = Vec::with_capacity(2 + 2 * self.poles.len());
        bounds.push(lo);
        for pole in &self.poles {
            bounds.push(pole.t - POLE_INSET);
            bounds.push(pole.t + POLE_INSET);
        }
        bounds.push(hi);

        let mut edges = Vec::new();
        let mut f_edges = Vec::new();
        let mut prefix = Vec::new();
        let mut acc = 0.0f64;
        edges.push(lo);
        f_edges.push(self.smooth_alpha(lo)?);
        prefix.push(0.0);

        for w in bounds.windows(2) {
            let b = w[1];
            // Measure from the last recorded edge so overlapping pole
            // windows neither double-count nor break monotonicity.
            let start = *edges.last().expect("backbone starts non-empty");
            let width = b - start;
            if width <= 0.0 {
                continue;
            }
            if width <= 2.0 * POLE_INSET + 1e-12 {
                // Pole window: the smooth part crosses it with a trapezoid;
                // the pole terms themselves are closed-form.
                let fa = *f_edges.last().expect("backbone starts non-empty");
                let fb = self.smooth_alpha(b)?;
                acc += 0.5 * (fa + fb) * width;
                edges.push(b);
                f_edges.push(fb);
                prefix.push(acc);
                continue;
            }
            let panels = (libm::ceil(width / PANEL_WIDTH) as usize).max(1);
            for k in 1..=panels {
                let pa = *edges.last().expect("backbone starts non-empty");
                let pb = start + width * (k as f64) / (panels as f64);
                let fa = *f_edges.last().expect("backbone starts non-empty");
                let fb = self.smooth_alpha(pb)?;
                let tol = QUAD_TOL * (pb - pa) / (hi - lo);
                acc += self.adaptive_panel(pa, fa, pb, fb, tol)?;
                edges.push(pb);
                f_edges.push(fb);
                prefix.push(acc);
            }
        }

        self.edges = edges;
        self.f_edges = f_edges;
        self.prefix = prefix;
        Ok(())
    }

    /// Adaptive Simpson over one backbone panel.
    fn adaptive_panel(
        &self,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        tol: f64,
    ) -> Result<f64, WavefunctionError> {
        let m = 0.5 * (a + b);
        let fm = self.smooth_alpha(m)?;
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        self.refine_panel(a, fa, m, fm, b, fb, whole, tol, 12)
    }

    #[allow(clippy::too_many_arguments)]
    fn refine_panel(
        &self,
        a: f64,
        fa: f64,
        m: f64,
        fm: f64,
        b: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> Result<f64, WavefunctionError> {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = self.smooth_alpha(lm)?;
        let frm = self.smooth_alpha(rm)?;
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return Ok(left + right + delta / 15.0);
        }
        let lhs = self.refine_panel(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1)?;
        let rhs = self.refine_panel(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1)?;
        Ok(lhs + rhs)
    }

    /// Cumulative smooth integral from the lower trust edge to `y`, which is
    /// clamped to the trust interval (the power-law continuation freezes the
    /// smooth part beyond it). Off-edge points close with one Simpson step
    /// over the partial panel, whose width the backbone already bounds.
    fn smooth_integral_to(&self, y: f64) -> Result<f64, WavefunctionError> {
        let last = *self.edges.last().expect("backbone is built");
        let yc = y.clamp(self.edges[0], last);
        let idx = match self.edges.partition_point(|e| *e <= yc) {
            0 => 0,
            k => k - 1,
        };
        let e = self.edges[idx];
        if yc - e <= 1e-14 {
            return Ok(self.prefix[idx]);
        }
        if self.poles.iter().any(|p| (yc - p.t).abs() < POLE_INSET) {
            // Inside a pole window the integrand cannot be sampled reliably,
            // so interpolate the prefix across it; the window's whole
            // contribution is O(POLE_INSET).
            let next = self.edges[idx + 1];
            let frac = (yc - e) / (next - e);
            return Ok(self.prefix[idx] + frac * (self.prefix[idx + 1] - self.prefix[idx]));
        }
        let m = 0.5 * (e + yc);
        let fm = self.smooth_alpha(m)?;
        let fy = self.smooth_alpha(yc)?;
        Ok(self.prefix[idx] + (yc - e) / 6.0 * (self.f_edges[idx] + 4.0 * fm + fy))
    }

    /// The unnormalized profile at algebraic coordinate `y`.
    fn profile(&self, y: f64) -> Result<f64, WavefunctionError> {
        if !(-1.0..=1.0).contains(&y) {
            return Err(WavefunctionError::SampleOutsideBox);
        }
        if y == -1.0 || y == 1.0 {
            return Ok(0.0);
        }
        let smooth = self.smooth_integral_to(y)? - self.p_zero;
        let mut out = libm::pow(1.0 - y, self.wall_power)
            * libm::pow(1.0 + y, self.origin_power)
            * libm::exp(-smooth);
        for pole in &self.poles {
            let base = (y - pole.t) / (-pole.t);
            // The clamp keeps artifact factors bounded when a sample lands
            // inside the guard window of the artifact itself.
            let mag = libm::pow(base.abs().max(POLE_GUARD), -pole.residue);
            out *= if pole.node {
                if base < 0.0 {
                    -mag
                } else if base > 0.0 {
                    mag
                } else {
                    0.0
                }
            } else {
                mag
            };
        }
        Ok(out)
    }

    /// Unit-L²-norm constant with the origin-positive sign convention.
    fn normalize(&self) -> Result<f64, WavefunctionError> {
        let l = self.problem.params().l;
        let lo = self.edges[0];
        let hi = *self.edges.last().expect("backbone is built");
        let weight = |y: f64| l / (2.0 * libm::sqrt(2.0 * (1.0 + y)));

        // Interior: Simpson on the quadrature backbone. Edge values reuse the
        // prefix table; midpoints cost one partial-panel closure each.
        let mut total = 0.0f64;
        for i in 0..self.edges.len() - 1 {
            let (a, b) = (self.edges[i], self.edges[i + 1]);
            if b - a <= 0.0 {
                continue;
            }
            let m = 0.5 * (a + b);
            let fa = sq(self.profile(a)?) * weight(a);
            let fm = sq(self.profile(m)?) * weight(m);
            let fb = sq(self.profile(b)?) * weight(b);
            total += (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        }

        // Origin tail, in the box coordinate scaled to the unit interval:
        // x = L·w turns the measure into a constant.
        let w_lo = libm::sqrt((1.0 + lo) / 2.0);
        total += simpson_fixed(64, 0.0, w_lo, &mut |w| {
            let y = 2.0 * w * w - 1.0;
            Ok(sq(self.profile(y)?) * l)
        })?;

        // Wall tail, directly in y.
        total += simpson_fixed(64, hi, 1.0, &mut |y| Ok(sq(self.profile(y)?) * weight(y)))?;

        if !(total.is_finite() && total > 0.0) {
            return Err(WavefunctionError::NumericalBreakdown(
                "profile norm is not positive and finite",
            ));
        }
        let sign = if self.profile(-0.9)? < 0.0 { -1.0 } else { 1.0 };
        Ok(sign / libm::sqrt(total))
    }
}

/// Reconstruct ψ for one converged subcritical state at the requested
/// algebraic coordinates (experimental; see the module docs for the model and
/// its limits). Build a [`WavefunctionModel`] directly to amortize the
/// construction over many evaluations or to read node positions.
pub fn wavefunction(
    params: &PotentialParams,
    eigen: &EigenResult,
    y_samples: &[f64],
) -> Result<Vec<f64>, WavefunctionError> {
    let model = WavefunctionModel::build(params, eigen)?;
    y_samples.iter().map(|&y| model.eval_y(y)).collect()
}

fn sq(v: f64) -> f64 {
    v * v
}

/// Composite Simpson with a fixed panel count, for the norm tails where the
/// integrand is cheap and the measure is tiny.
fn simpson_fixed(
    panels: usize,
    a: f64,
    b: f64,
    f: &mut dyn FnMut(f64) -> Result<f64, WavefunctionError>,
) -> Result<f64, WavefunctionError> {
    let mut total = 0.0f64;
    for k in 0..panels {
        let pa = a + (b - a) * (k as f64) / (panels as f64);
        let pb = a + (b - a) * ((k + 1) as f64) / (panels as f64);
        let m = 0.5 * (pa + pb);
        total += (pb - pa) / 6.0 * (f(pa)? + 4.0 * f(m)? + f(pb)?);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Precision;
    use crate::solve::{spectrum, ScanConfig};

    fn p30() -> Precision {
        Precision::new(30).unwrap()
    }

    fn solve_states(
        a: f64,
        b: f64,
        c: f64,
        l: f64,
        e_max: f64,
        grid: usize,
        depth: usize,
        k: usize,
    ) -> (PotentialParams, Vec<EigenResult>) {
        let params = PotentialParams::new(a, b, c, l).unwrap();
        let cfg = ScanConfig {
            e_min: 0.0,
            e_max,
            grid_points: grid,
            y0: 0.0,
            n_max: depth,
            tol: 1e-9,
            precision: p30(),
        };
        let out = spectrum(&params, k, &cfg).unwrap();
        assert!(out.results.len() >= k, "expected at least {k} states");
        (params, out.results)
    }

    #[test]
    fn square_well_ground_state_is_a_sine() {
        let l = 2.0;
        let (params, states) = solve_states(0.0, 0.0, 0.0, l, 4.0, 160, 24, 1);
        let model = WavefunctionModel::build(&params, &states[0]).unwrap();
        // Samples across the part of the box inside the trust interval.
        let xs: alloc::vec::Vec<f64> = (4..=19).map(|i| l * (i as f64) / 20.0).collect();
        let psi: alloc::vec::Vec<f64> = xs.iter().map(|&x| model.eval_x(x).unwrap()).collect();
        let sine: alloc::vec::Vec<f64> = xs
            .iter()
            .map(|&x| libm::sin(core::f64::consts::PI * x / l))
            .collect();
        let scale = psi.iter().zip(&sine).map(|(p, s)| p * s).sum::<f64>()
            / sine.iter().map(|s| s * s).sum::<f64>();
        let peak = scale.abs();
        for ((&x, &p), &s) in xs.iter().zip(&psi).zip(&sine) {
            assert!(
                (p - scale * s).abs() <= 1e-4 * peak,
                "profile deviates from the sine at x = {x}: {p} vs {}",
                scale * s
            );
        }
    }

    #[test]
    fn square_well_profile_satisfies_the_equation() {
        let l = 2.0;
        let (params, states) = solve_states(0.0, 0.0, 0.0, l, 4.0, 160, 24, 1);
        let model = WavefunctionModel::build(&params, &states[0]).unwrap();
        let e = states[0].energy;
        // Flat bottom: the profile must satisfy −ψ″/2 = Eψ pointwise.
        let h = 0.01;
        for &x in &[0.6, 1.0, 1.4] {
            let pm = model.eval_x(x - h).unwrap();
            let p0 = model.eval_x(x).unwrap();
            let pp = model.eval_x(x + h).unwrap();
            let second = (pp - 2.0 * p0 + pm) / (h * h);
            let residual = (-0.5 * second - e * p0).abs();
            assert!(
                residual <= 1e-3 * (e * p0).abs(),
                "equation residual {residual} at x = {x} (ψ = {p0})"
            );
        }
    }

    #[test]
    fn profile_is_unit_normalized() {
        let l = 2.0;
        let (params, states) = solve_states(0.0, 0.0, 0.0, l, 4.0, 160, 24, 1);
        let model = WavefunctionModel::build(&params, &states[0]).unwrap();
        let n = 400;
        let mut sum = 0.0;
        for i in 0..=n {
            let x = l * (i as f64) / (n as f64);
            let v = model.eval_x(x).unwrap();
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            sum += w * v * v;
        }
        sum *= l / n as f64;
        assert!((sum - 1.0).abs() < 5e-3, "∫ψ²dx = {sum}");
    }

    #[test]
    fn node_counts_separate_ground_and_first_excited() {
        let l = 2.0;
        let (params, states) = solve_states(4.0, 4.0, 8.0, l, 15.0, 240, 36, 2);
        let ground = WavefunctionModel::build(&params, &states[0]).unwrap();
        let excited = WavefunctionModel::build(&params, &states[1]).unwrap();
        assert_eq!(ground.nodes_y().len(), 0, "ground state must be nodeless");
        assert_eq!(
            excited.nodes_y().len(),
            1,
            "first excited state must carry exactly one node"
        );
        for (model, want) in [(&ground, 0usize), (&excited, 1usize)] {
            let mut flips = 0;
            let mut prev = f64::NAN;
            for i in 1..24 {
                let v = model.eval_x(l * (i as f64) / 24.0).unwrap();
                if prev.is_finite() && v.signum() != prev.signum() {
                    flips += 1;
                }
                prev = v;
            }
            assert_eq!(flips, want, "sampled sign flips disagree with the nodes");
        }
    }

    #[test]
    fn origin_power_matches_the_indicial_exponent() {
        // B = 4 with L = 2 puts ψ ~ x² at the origin; read the slope off a
        // log-log pair of near-origin samples.
        let l = 2.0;
        let (params, states) = solve_states(4.0, 4.0, 8.0, l, 8.0, 160, 36, 1);
        let model = WavefunctionModel::build(&params, &states[0]).unwrap();
        let (x1, x2) = (0.02, 0.04);
        let p1 = model.eval_x(x1).unwrap();
        let p2 = model.eval_x(x2).unwrap();
        let slope = libm::log(p2 / p1) / libm::log(x2 / x1);
        assert!(
            (slope - 2.0).abs() <= 0.05,
            "log-log origin slope {slope} should be 2"
        );
    }

    #[test]
    fn reconstruction_rejects_what_it_cannot_model() {
        let params = PotentialParams::new(0.0, 0.0, 0.0, 2.0).unwrap();
        let ok = EigenResult {
            index: 0,
            energy: 1.2337005501,
            converged: true,
            iterations_used: 16,
            delta_residual: 0.0,
            bracket: (1.23, 1.24),
        };
        let unconverged = EigenResult {
            converged: false,
            ..ok
        };
        assert!(matches!(
            WavefunctionModel::build(&params, &unconverged),
            Err(WavefunctionError::NotConverged)
        ));

        // B below the origin collapse threshold for L = 2.
        let deep = PotentialParams::new(0.0, -4.0, 0.0, 2.0).unwrap();
        assert!(matches!(
            WavefunctionModel::build(&deep, &ok),
            Err(WavefunctionError::SupercriticalStrengths)
        ));

        let model = WavefunctionModel::build(&params, &ok).unwrap();
        assert!(matches!(
            model.eval_y(1.5),
            Err(WavefunctionError::SampleOutsideBox)
        ));
        assert!(matches!(
            model.eval_x(-0.1),
            Err(WavefunctionError::SampleOutsideBox)
        ));
        assert_eq!(model.eval_y(1.0).unwrap(), 0.0);
        assert_eq!(model.eval_y(-1.0).unwrap(), 0.0);
    }

    #[test]
    fn excited_state_profile_is_unit_scale() {
        // The first excited state carries one interior node, so its profile
        // exercises the pole bookkeeping that the nodeless ground state never
        // touches. The profile must stay unit-normalized — a mishandled pole
        // shows up here as an amplitude off by orders of magnitude.
        let (params, states) = solve_states(4.0, 4.0, 8.0, 2.0, 15.0, 240, 36, 2);
        let model = WavefunctionModel::build(&params, &states[1]).unwrap();
        let nodes = model.nodes_y();
        assert_eq!(nodes.len(), 1, "one interior node expected, got {nodes:?}");

        let samples = 121usize;
        let l = params.l;
        let mut xs = Vec::with_capacity(samples);
        let mut ps = Vec::with_capacity(samples);
        for i in 0..samples {
            let y = -0.96 + 1.92 * (i as f64) / ((samples - 1) as f64);
            xs.push(l * libm::sqrt(0.5 * (y + 1.0)));
            ps.push(model.eval_y(y).unwrap());
        }

        let peak = ps.iter().fold(0.0f64, |m, p| m.max(p.abs()));
        assert!(
            (0.5..=3.0).contains(&peak),
            "profile peak {peak:e} is not unit scale"
        );

        let mut norm = 0.0;
        let mut crossings = 0usize;
        for i in 1..samples {
            norm += 0.5 * (ps[i - 1] * ps[i - 1] + ps[i] * ps[i]) * (xs[i] - xs[i - 1]);
            if ps[i - 1] * ps[i] < 0.0 {
                crossings += 1;
            }
        }
        assert_eq!(crossings, 1, "profile must change sign exactly once");
        assert!(
            (norm - 1.0).abs() < 0.05,
            "interior probability {norm} strays from 1"
        );
    }
}
