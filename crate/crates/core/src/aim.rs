//! The coefficient recursion at the heart of the solver.
//!
//! For a linear second-order problem written as `f'' = λ₀(y) f' + s₀(y) f`,
//! repeated differentiation produces coefficient pairs
//!
//! ```text
//! λ_n = λ'_{n−1} + s_{n−1} + λ₀ λ_{n−1}
//! s_n = s'_{n−1} + s₀ λ_{n−1}
//! ```
//!
//! and the quantization condition is the vanishing of the termination
//! determinant `Δ_n = λ_n s_{n−1} − λ_{n−1} s_n` evaluated at the expansion
//! point. In exact arithmetic `Δ_n(E)` has roots near the lowest `n + 1`
//! eigenvalues, and at an exact eigenvalue the condition holds identically in
//! `y`, not just at the chosen point.
//!
//! Each recursion step consumes one Taylor order (the derivative), so a run
//! to depth `n_max` seeds the coefficient jets at order `n_max + 2` and ends
//! with order-2 jets; the engine refuses to iterate past the order actually
//! carried rather than padding with zeros.

use alloc::vec::Vec;

use crate::jet::{jet_differentiate, mul_truncated, Jet, JetError};
use crate::scalar::{relative_floor, Precision, Real};
use core::fmt;

/// A problem presented to the recursion: the two coefficient functions of
/// `f'' = λ₀ f' + s₀ f` as jets about a requested center, for a given energy.
///
/// Implementations must return jets centered exactly at `center` with order at
/// least `order`; the precision of `center` and `energy` tells the
/// implementation what working precision to build coefficients at.
pub trait SoldeProblem {
    /// First-derivative coefficient `λ₀` expanded about `center`.
    fn lambda0_at(&self, center: &Real, order: usize, energy: &Real) -> Result<Jet, AimError>;

    /// Zeroth-derivative coefficient `s₀` expanded about `center`.
    fn s0_at(&self, center: &Real, order: usize, energy: &Real) -> Result<Jet, AimError>;

    /// Human-readable problem label for diagnostics.
    fn description(&self) -> &str;
}

/// One step of the recursion, with everything observable about it.
#[derive(Clone, Debug)]
pub struct AimIterate {
    /// Step index, starting at 1 (`λ₀`, `s₀` are the seeds).
    pub n: usize,
    /// Coefficient jet `λ_n` (order decreases by one per step).
    pub lambda_n: Jet,
    /// Coefficient jet `s_n`.
    pub s_n: Jet,
    /// Termination determinant `λ_n s_{n−1} − λ_{n−1} s_n` at the center.
    pub delta_n: Real,
    /// Stabilized ratio `s_n/λ_n` at the center; `None` when `λ_n` vanishes
    /// there (ratio undefined, which is reportable but not fatal).
    pub alpha_n: Option<Real>,
}

/// Errors from driving the recursion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AimError {
    /// The coefficient functions cannot be expanded at the requested point
    /// (e.g. it sits on a singularity of the problem).
    InvalidEvaluationPoint,
    /// A step needed more Taylor orders than the operands carry.
    OrderExhausted { needed: usize, available: usize },
    /// A caller-supplied argument violates a precondition.
    InvalidArgument(&'static str),
    /// An underlying jet operation failed in a way not covered above.
    Jet(JetError),
}

impl fmt::Display for AimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AimError::InvalidEvaluationPoint => {
                write!(f, "coefficient functions cannot be expanded at this point")
            }
            AimError::OrderExhausted { needed, available } => write!(
                f,
                "recursion needs jets of order {needed} but only {available} is carried"
            ),
            AimError::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            AimError::Jet(e) => write!(f, "jet operation failed: {e}"),
        }
    }
}

impl core::error::Error for AimError {}

impl From<JetError> for AimError {
    fn from(e: JetError) -> Self {
        match e {
            JetError::SingularExpansionPoint => AimError::InvalidEvaluationPoint,
            other => AimError::Jet(other),
        }
    }
}

/// Fetch and validate the seed jets from a problem.
fn seeds(
    problem: &dyn SoldeProblem,
    y0: &Real,
    energy: &Real,
    order: usize,
) -> Result<(Jet, Jet), AimError> {
    let lam0 = problem.lambda0_at(y0, order, energy)?;
    let s0 = problem.s0_at(y0, order, energy)?;
    for j in [&lam0, &s0] {
        if j.center() != y0 {
            return Err(AimError::InvalidArgument(
                "problem returned a jet centered away from the requested point",
            ));
        }
        if j.order() < order {
            return Err(AimError::OrderExhausted {
                needed: order,
                available: j.order(),
            });
        }
    }
    Ok((lam0.truncated(order), s0.truncated(order)))
}

/// One recursion step: previous pair at order `p` produces the next pair at
/// order `p − 1`.
fn advance(lam0: &Jet, s0: &Jet, lam_prev: &Jet, s_prev: &Jet) -> Result<(Jet, Jet), AimError> {
    let p = lam_prev.order();
    if p < 1 {
        return Err(AimError::OrderExhausted {
            needed: 1,
            available: 0,
        });
    }
    let o = p - 1;
    let lam_d = jet_differentiate(lam_prev)?;
    let s_d = jet_differentiate(s_prev)?;
    let lam_lam = mul_truncated(lam0, lam_prev, o);
    let s_lam = mul_truncated(s0, lam_prev, o);

    let mut lam_coeffs = lam_lam.into_coeffs();
    let mut s_coeffs = s_lam.into_coeffs();
    for k in 0..=o {
        lam_coeffs[k] = lam_coeffs[k]
            .add(lam_d.coeff(k).expect("derivative carries order o"))
            .add(s_prev.coeff(k).expect("previous s carries order o"));
        s_coeffs[k] = s_coeffs[k].add(s_d.coeff(k).expect("derivative carries order o"));
    }
    Ok((
        Jet::from_parts(lam_prev.center().clone(), lam_coeffs),
        Jet::from_parts(lam_prev.center().clone(), s_coeffs),
    ))
}

/// Termination determinant at the center, from the constant terms of the two
/// consecutive coefficient pairs.
fn delta_value(lam_n: &Jet, s_n: &Jet, lam_prev: &Jet, s_prev: &Jet) -> Real {
    lam_n
        .value()
        .mul(s_prev.value())
        .sub(&lam_prev.value().mul(s_n.value()))
}

/// The determinant normalized by the larger of its two constituent products,
/// mapped to `f64`. The raw determinant grows combinatorially with `n` and
/// overflows any fixed-exponent type; this ratio lives in `[−2, 2]` and keeps
/// the sign, which is all root bracketing needs.
fn normalized_delta(delta: &Real, lam_n: &Jet, s_n: &Jet, lam_prev: &Jet, s_prev: &Jet) -> f64 {
    let p1 = lam_n.value().mul(s_prev.value()).abs();
    let p2 = lam_prev.value().mul(s_n.value()).abs();
    let norm = p1.max_abs(&p2);
    if norm.is_zero() {
        0.0
    } else {
        delta.div(&norm).to_f64()
    }
}

fn alpha_value(lam_n: &Jet, s_n: &Jet, precision: Precision) -> Option<Real> {
    let floor = relative_floor(precision, 4).mul(&lam_n.coeff_scale());
    if lam_n.value().abs() <= floor {
        None
    } else {
        Some(s_n.value().div(lam_n.value()))
    }
}

fn precision_of(r: &Real) -> Precision {
    Precision::new(r.decimal_digits().max(Precision::MIN_DIGITS))
        .expect("digit count above floor by construction")
}

/// Drive the recursion to depth `n_max`, recording every iterate.
///
/// Seeds the coefficient jets at order `n_max + 2` so the final iterate still
/// carries two orders of Taylor data. `n_max` must be at least 1.
pub fn run_recursion(
    problem: &dyn SoldeProblem,
    y0: &Real,
    energy: &Real,
    n_max: usize,
) -> Result<Vec<AimIterate>, AimError> {
    if n_max == 0 {
        return Err(AimError::InvalidArgument("n_max must be at least 1"));
    }
    let precision = precision_of(y0);
    let order0 = n_max + 2;
    let (lam0, s0) = seeds(problem, y0, energy, order0)?;

    let mut out = Vec::with_capacity(n_max);
    let mut lam_prev = lam0.clone();
    let mut s_prev = s0.clone();
    for n in 1..=n_max {
        let (lam_n, s_n) = advance(&lam0, &s0, &lam_prev, &s_prev)?;
        let delta_n = delta_value(&lam_n, &s_n, &lam_prev, &s_prev);
        let alpha_n = alpha_value(&lam_n, &s_n, precision);
        out.push(AimIterate {
            n,
            lambda_n: lam_n.clone(),
            s_n: s_n.clone(),
            delta_n,
            alpha_n,
        });
        lam_prev = lam_n;
        s_prev = s_n;
    }
    Ok(out)
}

/// The raw termination determinant `Δ_n` at depth `n` (keeps nothing else).
pub fn delta_at(
    problem: &dyn SoldeProblem,
    y0: &Real,
    energy: &Real,
    n: usize,
) -> Result<Real, AimError> {
    if n == 0 {
        return Err(AimError::InvalidArgument("depth must be at least 1"));
    }
    let order0 = n + 2;
    let (lam0, s0) = seeds(problem, y0, energy, order0)?;
    let mut lam_prev = lam0.clone();
    let mut s_prev = s0.clone();
    let mut delta = Real::zero(precision_of(y0));
    for _ in 1..=n {
        let (lam_n, s_n) = advance(&lam0, &s0, &lam_prev, &s_prev)?;
        delta = delta_value(&lam_n, &s_n, &lam_prev, &s_prev);
        lam_prev = lam_n;
        s_prev = s_n;
    }
    Ok(delta)
}

/// Run the recursion to `depth` at a single center and hand back the constant
/// and linear Taylor data of the final pair: `(λ_n(y₀), λ_n′(y₀), s_n(y₀))`.
///
/// This is the pointwise backend for wavefunction reconstruction. The
/// stabilized ratio `s_n/λ_n` is needed at many points across the interval,
/// and re-centering the whole recursion at each point stays accurate
/// arbitrarily close to the walls — the individual coefficient functions
/// carry wall poles whose order grows with depth, so a single long series
/// about one center loses them, while the pointwise ratio stays smooth. The
/// first derivative comes for free from the linear coefficient and is what
/// pole residues of the ratio are measured with.
pub(crate) fn final_point(
    problem: &dyn SoldeProblem,
    y0: &Real,
    energy: &Real,
    depth: usize,
) -> Result<(Real, Real, Real), AimError> {
    if depth == 0 {
        return Err(AimError::InvalidArgument("depth must be at least 1"));
    }
    let order0 = depth + 2;
    let (lam0, s0) = seeds(problem, y0, energy, order0)?;
    let mut lam_prev = lam0.clone();
    let mut s_prev = s0.clone();
    for _ in 1..=depth {
        let (lam_n, s_n) = advance(&lam0, &s0, &lam_prev, &s_prev)?;
        lam_prev = lam_n;
        s_prev = s_n;
    }
    let slope = lam_prev
        .coeff(1)
        .cloned()
        .unwrap_or_else(|| Real::zero(precision_of(y0)));
    Ok((lam_prev.value().clone(), slope, s_prev.value().clone()))
}

/// The stabilized ratio `s_n/λ_n` at the center for every depth `1..=n_max`.
/// Entries are `None` where `λ_n` vanishes at the center.
pub fn alpha_sequence(
    problem: &dyn SoldeProblem,
    y0: &Real,
    energy: &Real,
    n_max: usize,
) -> Result<Vec<Option<Real>>, AimError> {
    if n_max == 0 {
        return Err(AimError::InvalidArgument("n_max must be at least 1"));
    }
    let precision = precision_of(y0);
    let order0 = n_max + 2;
    let (lam0, s0) = seeds(problem, y0, energy, order0)?;
    let mut lam_prev = lam0.clone();
    let mut s_prev = s0.clone();
    let mut out = Vec::with_capacity(n_max);
    for _ in 1..=n_max {
        let (lam_n, s_n) = advance(&lam0, &s0, &lam_prev, &s_prev)?;
        out.push(alpha_value(&lam_n, &s_n, precision));
        lam_prev = lam_n;
        s_prev = s_n;
    }
    Ok(out)
}

/// Normalized determinant at every depth `1..=n_max` in one pass (index `i`
/// holds depth `i + 1`). This is the root scanner's workhorse: one run yields
/// the determinant profile at all depths up to the cap.
pub(crate) fn delta_profile(
    problem: &dyn SoldeProblem,
    y0: &Real,
    energy: &Real,
    n_max: usize,
) -> Result<Vec<f64>, AimError> {
    debug_assert!(n_max >= 1);
    let order0 = n_max + 2;
    let (lam0, s0) = seeds(problem, y0, energy, order0)?;
    let mut lam_prev = lam0.clone();
    let mut s_prev = s0.clone();
    let mut out = Vec::with_capacity(n_max);
    for _ in 1..=n_max {
        let (lam_n, s_n) = advance(&lam0, &s0, &lam_prev, &s_prev)?;
        let delta = delta_value(&lam_n, &s_n, &lam_prev, &s_prev);
        out.push(normalized_delta(&delta, &lam_n, &s_n, &lam_prev, &s_prev));
        lam_prev = lam_n;
        s_prev = s_n;
    }
    Ok(out)
}

/// Validation problem with a known closed-form spectrum: `f'' = 2y f' +
/// (1 − E) f`, whose eigenvalues are the odd integers `E_n = 2n + 1`.
///
/// This is the standard oscillator test case for the recursion: cheap, exact
/// at dyadic energies, and with determinants small enough to check by hand.
pub struct HarmonicProblem;

impl SoldeProblem for HarmonicProblem {
    fn lambda0_at(&self, center: &Real, order: usize, _energy: &Real) -> Result<Jet, AimError> {
        // λ₀(y) = 2y → [2·c, 2, 0, ...] about c.
        let p = precision_of(center);
        let mut coeffs = Vec::with_capacity(order + 1);
        coeffs.push(center.scale_i64(2));
        if order >= 1 {
            coeffs.push(Real::from_i64(2, p));
        }
        for _ in 1..order {
            coeffs.push(Real::zero(p));
        }
        Ok(Jet::new(center.clone(), coeffs))
    }

    fn s0_at(&self, center: &Real, order: usize, energy: &Real) -> Result<Jet, AimError> {
        let p = precision_of(center);
        let value = Real::one(p).sub(energy);
        Ok(Jet::constant(center.clone(), value, order))
    }

    fn description(&self) -> &str {
        "oscillator validation problem (eigenvalues 2n+1)"
    }
}
