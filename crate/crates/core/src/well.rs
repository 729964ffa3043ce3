//! The confined potential and its recursion coefficients.
//!
//! The physical problem is a particle in a box `(0, L)` with hard walls and a
//! bottom shaped by
//!
//! ```text
//! V(x) = A/(L² − x²) + B/(x² (L² − x²)) + C/(L² − x²)²
//! ```
//!
//! for `−½ ψ'' + V ψ = E ψ`. The substitution `y = 2(x/L)² − 1` maps the box
//! onto `(−1, 1)` and turns the boundary behavior algebraic: after peeling off
//! the leading power behavior the remaining function satisfies
//! `f'' = λ₀(y) f' + s₀(y) f` with *rational* coefficients
//!
//! ```text
//! λ₀(y) = −1 / (2 (1 + y))
//! s₀(y) = [−EL⁴(y³ − y² − y + 1) − 2AL²(y² − 1) − 4B(y − 1) + 4C(y + 1)]
//!         / (4L² (y² − 1)²)
//! ```
//!
//! (numerator written here before collecting powers; the code stores the
//! collected coefficients). Both are exactly representable as jets anywhere
//! inside `(−1, 1)`, which is what the recursion needs.
//!
//! Near the walls the wavefunction behaves as a power: `ψ ~ x^β` at the
//! origin and `ψ ~ (L − x)^γ` at the wall, with the exponents determined by
//! the strength of the corresponding singular term. When `B < −L²/8` or
//! `C < −L²/2` the indicial roots turn complex ("fall to the center"): the
//! spectrum loses its usual meaning and results must carry a warning.
//!
//! Whenever both boundary exponents are real the problem is handed to the
//! recursion in *peeled* form: the unknown is written as
//! `(1 − y)^γ (1 + y)^{β/2} g(y)` and the recursion runs on the equation for
//! `g`. Dividing out the boundary powers leaves `g` analytic across both
//! walls, and the termination determinant then locks onto the eigenvalues
//! within a few dozen iterations instead of creeping toward them over
//! hundreds. The peel is also a matter of correctness, not just speed: when
//! `C = 0` and `B = −AL²` the numerator of `s₀` is divisible by `(y − 1)²`,
//! every pole at `y = 1` cancels, and the raw equation carries no imprint of
//! the outer wall at all — its determinant never vanishes (for the free box
//! `A = B = C = 0` it is strictly positive at every order). The peeled form
//! reinstates regular singular points at both ends and recovers simple
//! determinant roots at the eigenvalues.
//!
//! Supercritical strengths have no real boundary power to peel, so they keep
//! the raw coefficients. Their determinant roots never settle — they slide
//! as the iteration deepens, which is the recursion's view of the same
//! pathology the flags announce — and every downstream result must carry the
//! regularization-dependent warning.


use crate::aim::{AimError, SoldeProblem};
use crate::jet::{jet_add, jet_differentiate, jet_from_rational, jet_mul, Jet, JetError};
use crate::scalar::{Precision, Real};
use core::fmt;

/// Parameters of the well: three strength coefficients and the width.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PotentialParams {
    /// Strength of the `1/(L² − x²)` term.
    pub a: f64,
    /// Strength of the `1/(x²(L² − x²))` term (controls the origin exponent).
    pub b: f64,
    /// Strength of the `1/(L² − x²)²` term (controls the wall exponent).
    pub c: f64,
    /// Box width; must be positive and finite.
    pub l: f64,
}

/// Errors from potential-domain operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WellError {
    /// The width is zero, negative, or not finite.
    InvalidWidth,
    /// A position outside the box interior (where the potential is infinite)
    /// or a mapped coordinate outside `[−1, 1]`.
    OutsideWell,
    /// The requested expansion center sits on a singular point of the
    /// coefficient functions.
    SingularCenter,
}

impl fmt::Display for WellError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WellError::InvalidWidth => write!(f, "box width must be positive and finite"),
            WellError::OutsideWell => write!(f, "coordinate lies outside the box"),
            WellError::SingularCenter => {
                write!(f, "expansion center sits on a coefficient singularity")
            }
        }
    }
}

impl core::error::Error for WellError {}

impl PotentialParams {
    pub fn new(a: f64, b: f64, c: f64, l: f64) -> Result<Self, WellError> {
        if !(l.is_finite() && l > 0.0) || !a.is_finite() || !b.is_finite() || !c.is_finite() {
            return Err(WellError::InvalidWidth);
        }
        Ok(Self { a, b, c, l })
    }
}

/// Boundary-behavior exponents of the wavefunction at the two walls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharacteristicExponents {
    /// `ψ ~ x^β` as `x → 0`. When `supercritical_origin` is set the indicial
    /// roots are complex and this holds their real part (½).
    pub beta: f64,
    /// `ψ ~ (L − x)^γ` as `x → L`; real part (½) when supercritical.
    pub gamma: f64,
    /// The origin term is attractive enough that no self-adjoint boundary
    /// condition is singled out (`B < −L²/8`).
    pub supercritical_origin: bool,
    /// Same collapse at the outer wall (`C < −L²/2`).
    pub supercritical_wall: bool,
}

/// Potential value at a point strictly inside the box.
#[must_use = "the value is the entire point of calling this"]
pub fn v_of_x(params: &PotentialParams, x: f64) -> Result<f64, WellError> {
    let l = params.l;
    if !(l.is_finite() && l > 0.0) {
        return Err(WellError::InvalidWidth);
    }
    if !(x > 0.0 && x < l) {
        return Err(WellError::OutsideWell);
    }
    let g = l * l - x * x;
    Ok(params.a / g + params.b / (x * x * g) + params.c / (g * g))
}

/// Map box coordinate `x ∈ [0, L]` to the algebraic coordinate
/// `y = 2(x/L)² − 1 ∈ [−1, 1]`.
#[must_use = "the value is the entire point of calling this"]
pub fn to_y(x: f64, l: f64) -> Result<f64, WellError> {
    if !(l.is_finite() && l > 0.0) {
        return Err(WellError::InvalidWidth);
    }
    if !(0.0..=l).contains(&x) {
        return Err(WellError::OutsideWell);
    }
    let t = x / l;
    Ok(2.0 * t * t - 1.0)
}

/// Inverse map: `x = L √((1 + y)/2)` for `y ∈ [−1, 1]`.
#[must_use = "the value is the entire point of calling this"]
pub fn to_x(y: f64, l: f64) -> Result<f64, WellError> {
    if !(l.is_finite() && l > 0.0) {
        return Err(WellError::InvalidWidth);
    }
    if !(-1.0..=1.0).contains(&y) {
        return Err(WellError::OutsideWell);
    }
    Ok(l * libm::sqrt((1.0 + y) / 2.0))
}

/// The first-derivative coefficient `λ₀(y) = −1/(2(1+y))` as a jet.
///
/// Singular only at `y = −1`; any other center, including `y = 1`, is fine.
pub fn lambda0_jet(y0: &Real, order: usize) -> Result<Jet, WellError> {
    let p = precision_of(y0);
    let num = [Real::from_i64(-1, p)];
    let den = [Real::from_i64(2, p), Real::from_i64(2, p)];
    jet_from_rational(&num, &den, y0, order).map_err(map_rational_err)
}

/// The zeroth-derivative coefficient `s₀(y)` as a jet about `y0 ∈ (−1, 1)`.
///
/// Numerator and denominator coefficients are assembled in working precision
/// from the parameters (which embed exactly from `f64`), so no double-rounding
/// enters before the expansion itself.
pub fn s0_jet(
    params: &PotentialParams,
    energy: &Real,
    y0: &Real,
    order: usize,
) -> Result<Jet, WellError> {
    if !(params.l.is_finite() && params.l > 0.0) {
        return Err(WellError::InvalidWidth);
    }
    let y0f = y0.to_f64();
    if !(y0f > -1.0 && y0f < 1.0) {
        return Err(WellError::OutsideWell);
    }
    let p = precision_of(y0);
    let l = Real::from_f64(params.l, p);
    let l2 = l.mul(&l);
    let l4 = l2.mul(&l2);
    let a = Real::from_f64(params.a, p);
    let b = Real::from_f64(params.b, p);
    let c = Real::from_f64(params.c, p);
    let el4 = energy.mul(&l4);
    let al2_2 = a.mul(&l2).scale_i64(2);

    // Numerator of s₀, ascending powers of y:
    //   [−EL⁴ + 2AL² + 4(B+C),  EL⁴ − 4(B−C),  EL⁴ − 2AL²,  −EL⁴]
    let num = [
        el4.neg().add(&al2_2).add(&b.add(&c).scale_i64(4)),
        el4.sub(&b.sub(&c).scale_i64(4)),
        el4.sub(&al2_2),
        el4.neg(),
    ];
    // Denominator 4L²(y² − 1)² = 4L² − 8L²y² + 4L²y⁴.
    let l2_4 = l2.scale_i64(4);
    let den = [
        l2_4.clone(),
        Real::zero(p),
        l2.scale_i64(-8),
        Real::zero(p),
        l2_4,
    ];
    jet_from_rational(&num, &den, y0, order).map_err(map_rational_err)
}

fn map_rational_err(e: JetError) -> WellError {
    match e {
        JetError::SingularExpansionPoint => WellError::SingularCenter,
        // Center-mismatch and order errors cannot arise from these fixed
        // polynomial inputs; singular division is the only reachable failure.
        _ => WellError::SingularCenter,
    }
}

fn precision_of(r: &Real) -> Precision {
    Precision::new(r.decimal_digits().max(Precision::MIN_DIGITS))
        .expect("digit count above floor by construction")
}

/// Boundary exponents and criticality flags for the given strengths.
#[must_use]
pub fn characteristic_exponents(params: &PotentialParams) -> CharacteristicExponents {
    let l2 = params.l * params.l;
    let disc_origin = 1.0 + 8.0 * params.b / l2;
    let disc_wall = 1.0 + 2.0 * params.c / l2;
    let (beta, supercritical_origin) = if disc_origin < 0.0 {
        (0.5, true)
    } else {
        ((1.0 + libm::sqrt(disc_origin)) / 2.0, false)
    };
    let (gamma, supercritical_wall) = if disc_wall < 0.0 {
        (0.5, true)
    } else {
        ((1.0 + libm::sqrt(disc_wall)) / 2.0, false)
    };
    CharacteristicExponents {
        beta,
        gamma,
        supercritical_origin,
        supercritical_wall,
    }
}

/// The well presented to the recursion engine.
#[derive(Clone, Copy, Debug)]
pub struct WellProblem {
    params: PotentialParams,
    /// Use the peeled form `(1−y)^γ (1+y)^{β/2} g`; set whenever both
    /// boundary exponents are real.
    peeled: bool,
}

impl WellProblem {
    #[must_use]
    pub fn params(&self) -> &PotentialParams {
        &self.params
    }

    /// Whether the boundary powers are peeled off before the recursion runs.
    #[must_use]
    pub fn uses_peeled_form(&self) -> bool {
        self.peeled
    }

    /// The logarithmic derivative `u = P'/P` of the peeled prefactor
    /// `P = (1−y)^a (1+y)^b`, i.e. `u = [(b−a) − (a+b)y] / (1 − y²)`.
    fn peel_log_derivative(&self, center: &Real, order: usize) -> Result<Jet, WellError> {
        let p = precision_of(center);
        let exps = characteristic_exponents(&self.params);
        let a = Real::from_f64(exps.gamma, p);
        let b = Real::from_f64(exps.beta / 2.0, p);
        let num = [b.sub(&a), a.add(&b).neg()];
        let den = [Real::from_i64(1, p), Real::zero(p), Real::from_i64(-1, p)];
        jet_from_rational(&num, &den, center, order).map_err(map_rational_err)
    }

    /// First-derivative coefficient of the peeled form: `λ₀ − 2u`.
    fn peeled_lambda0(&self, center: &Real, order: usize) -> Result<Jet, WellError> {
        let lam0 = lambda0_jet(center, order)?;
        let u = self.peel_log_derivative(center, order)?;
        jet_add(&lam0, &coeffwise(&u, |c| c.scale_i64(-2))).map_err(map_jet_err)
    }

    /// Zeroth-derivative coefficient of the peeled form:
    /// `s₀ + λ₀u − u² − u'`.
    fn peeled_s0(&self, center: &Real, order: usize, energy: &Real) -> Result<Jet, WellError> {
        let lam0 = lambda0_jet(center, order)?;
        let s0 = s0_jet(&self.params, energy, center, order)?;
        // `u` one order deeper so its derivative still reaches `order`.
        let u_deep = self.peel_log_derivative(center, order + 1)?;
        let u = u_deep.truncated(order);
        let du = jet_differentiate(&u_deep).map_err(map_jet_err)?;
        let mut acc = jet_add(&s0, &jet_mul(&lam0, &u).map_err(map_jet_err)?).map_err(map_jet_err)?;
        let u_sq = jet_mul(&u, &u).map_err(map_jet_err)?;
        acc = jet_add(&acc, &coeffwise(&u_sq, |c| c.neg())).map_err(map_jet_err)?;
        jet_add(&acc, &coeffwise(&du, |c| c.neg())).map_err(map_jet_err)
    }
}

/// Apply `f` to every series coefficient, keeping the center.
fn coeffwise(j: &Jet, f: impl Fn(&Real) -> Real) -> Jet {
    Jet::new(j.center().clone(), j.coeffs().iter().map(f).collect())
}

fn map_jet_err(_: JetError) -> WellError {
    // The inputs share one center and a positive order by construction, so
    // only singular division could surface — and that is a singular center.
    WellError::SingularCenter
}

/// Package validated parameters as a recursion problem.
///
/// Peels the boundary powers off whenever both exponents are real; only
/// supercritical strengths, whose exponents are complex, keep the raw
/// coefficients (with their slow, never-settling determinant roots).
pub fn make_well_problem(params: PotentialParams) -> Result<WellProblem, WellError> {
    if !(params.l.is_finite() && params.l > 0.0) || !params.a.is_finite()
        || !params.b.is_finite() || !params.c.is_finite()
    {
        return Err(WellError::InvalidWidth);
    }
    let exps = characteristic_exponents(&params);
    let peeled = !exps.supercritical_origin && !exps.supercritical_wall;
    Ok(WellProblem { params, peeled })
}

impl SoldeProblem for WellProblem {
    fn lambda0_at(&self, center: &Real, order: usize, _energy: &Real) -> Result<Jet, AimError> {
        if self.peeled {
            self.peeled_lambda0(center, order).map_err(well_to_aim)
        } else {
            lambda0_jet(center, order).map_err(well_to_aim)
        }
    }

    fn s0_at(&self, center: &Real, order: usize, energy: &Real) -> Result<Jet, AimError> {
        if self.peeled {
            self.peeled_s0(center, order, energy).map_err(well_to_aim)
        } else {
            s0_jet(&self.params, energy, center, order).map_err(well_to_aim)
        }
    }

    fn description(&self) -> &str {
        if self.peeled {
            "infinite well, boundary powers peeled off"
        } else {
            "infinite well with inverse-square-shaped bottom"
        }
    }
}

fn well_to_aim(e: WellError) -> AimError {
    match e {
        WellError::OutsideWell | WellError::SingularCenter => AimError::InvalidEvaluationPoint,
        WellError::InvalidWidth => AimError::InvalidArgument("box width must be positive"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aim::delta_at;
    use crate::scalar::Precision;

    fn p30() -> Precision {
        Precision::new(30).unwrap()
    }

    fn r(x: f64) -> Real {
        Real::from_f64(x, p30())
    }

    fn params(a: f64, b: f64, c: f64, l: f64) -> PotentialParams {
        PotentialParams::new(a, b, c, l).unwrap()
    }

    #[test]
    fn potential_value_at_box_midpoint() {
        // A=4, B=4, C=8, L=2 at x=1: 4/3 + 4/3 + 8/9 = 32/9.
        let v = v_of_x(&params(4.0, 4.0, 8.0, 2.0), 1.0).unwrap();
        assert!((v - 32.0 / 9.0).abs() < 1e-14, "V(1) = {v}");
    }

    #[test]
    fn potential_rejects_walls_and_outside() {
        let p = params(1.0, 1.0, 1.0, 2.0);
        for x in [0.0, 2.0, -0.5, 2.5] {
            assert_eq!(v_of_x(&p, x).unwrap_err(), WellError::OutsideWell);
        }
    }

    #[test]
    fn coordinate_maps_roundtrip() {
        let l = 1.7;
        for i in 0..=20 {
            let x = l * i as f64 / 20.0;
            let y = to_y(x, l).unwrap();
            assert!((-1.0..=1.0).contains(&y));
            let back = to_x(y, l).unwrap();
            assert!((back - x).abs() < 1e-14 * l, "roundtrip {x} -> {y} -> {back}");
        }
        assert_eq!(to_y(0.0, l).unwrap(), -1.0);
        assert_eq!(to_y(l, l).unwrap(), 1.0);
        assert_eq!(to_y(-0.1, l).unwrap_err(), WellError::OutsideWell);
    }

    #[test]
    fn s0_value_at_center_for_reference_strengths() {
        // A=4, B=4, C=8, L=2, E=0 at y=0:
        // numerator(0) = 2·4·4 + 4·12 = 80, denominator(0) = 4·4 = 16.
        let j = s0_jet(&params(4.0, 4.0, 8.0, 2.0), &r(0.0), &r(0.0), 3).unwrap();
        assert_eq!(j.value().to_f64(), 5.0);
    }

    #[test]
    fn s0_with_flat_bottom_reduces_to_simple_pole() {
        // With A=B=C=0 the numerator factors as −EL⁴(y−1)²(y+1) against the
        // denominator 4L²(y−1)²(y+1)², leaving −EL²/(4(1+y)).
        let e = 1.75; // dyadic, so the cancellation is exact
        let j = s0_jet(&params(0.0, 0.0, 0.0, 2.0), &r(e), &r(0.0), 6).unwrap();
        let p = p30();
        let el2_4 = Real::from_f64(-e * 4.0 / 4.0, p);
        let simple = jet_from_rational(
            &[el2_4],
            &[Real::from_i64(1, p), Real::from_i64(1, p)],
            &r(0.0),
            6,
        )
        .unwrap();
        for k in 0..=6 {
            let got = j.coeff(k).unwrap().to_f64();
            let want = simple.coeff(k).unwrap().to_f64();
            assert!(
                (got - want).abs() < 1e-25 * want.abs().max(1.0),
                "coefficient {k}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn s0_series_matches_direct_rational_evaluation() {
        // Summing the jet at a nearby point must agree with evaluating
        // the rational function directly in doubles, across a spread of
        // centers, energies, and strengths.
        let cases = [
            (4.0, 4.0, 8.0, 2.0),
            (0.0, 4.0, 8.0, 2.0),
            (4.0, 0.0, 8.0, 2.0),
            (4.0, 4.0, 0.0, 2.0),
            (-4.0, -4.0, -8.0, 2.0),
            (1.0, -2.0, 3.0, 1.3),
        ];
        let mut checked = 0;
        for &(a, b, c, l) in &cases {
            for &y0 in &[-0.8, -0.4, 0.0, 0.4, 0.8] {
                for &e in &[-5.0, 0.0, 7.3] {
                    let j = s0_jet(&params(a, b, c, l), &r(e), &r(y0), 18).unwrap();
                    let t = 0.03;
                    let mut acc = 0.0;
                    for k in (0..=j.order()).rev() {
                        acc = acc * t + j.coeff(k).unwrap().to_f64();
                    }
                    let y = y0 + t;
                    let l2 = l * l;
                    let l4 = l2 * l2;
                    let num = (-e * l4 + 2.0 * a * l2 + 4.0 * (b + c))
                        + (e * l4 - 4.0 * (b - c)) * y
                        + (e * l4 - 2.0 * a * l2) * y * y
                        + (-e * l4) * y * y * y;
                    let den = 4.0 * l2 * (y * y - 1.0) * (y * y - 1.0);
                    let direct = num / den;
                    assert!(
                        (acc - direct).abs() < 1e-9 * direct.abs().max(1.0),
                        "series {acc} vs direct {direct} at y0={y0}, E={e}, \
                         params=({a},{b},{c},{l})"
                    );
                    checked += 1;
                }
            }
        }
        assert!(checked >= 50, "spread should cover at least 50 cases");
    }

    #[test]
    fn lambda0_is_singular_only_at_lower_corner() {
        let j = lambda0_jet(&r(1.0), 2).unwrap();
        assert_eq!(j.value().to_f64(), -0.25);
        assert_eq!(lambda0_jet(&r(-1.0), 2).unwrap_err(), WellError::SingularCenter);
    }

    #[test]
    fn s0_rejects_centers_outside_open_interval() {
        let p = params(1.0, 1.0, 1.0, 2.0);
        for y0 in [-1.0, 1.0, -1.5, 1.5] {
            assert!(s0_jet(&p, &r(0.0), &r(y0), 2).is_err(), "y0 = {y0}");
        }
    }

    #[test]
    fn exponents_for_reference_strengths() {
        let e = characteristic_exponents(&params(4.0, 4.0, 8.0, 2.0));
        assert_eq!(e.beta, 2.0, "β = (1+√(1+8·4/4))/2 = 2 exactly");
        let golden = (1.0 + libm::sqrt(5.0)) / 2.0;
        assert!((e.gamma - golden).abs() < 1e-15, "γ = {}", e.gamma);
        assert!(!e.supercritical_origin && !e.supercritical_wall);
    }

    #[test]
    fn exponents_flag_overcritical_attraction() {
        let e = characteristic_exponents(&params(-4.0, -4.0, -8.0, 2.0));
        assert!(e.supercritical_origin, "B=−4 < −L²/8=−0.5 collapses the origin");
        assert!(e.supercritical_wall, "C=−8 < −L²/2=−2 collapses the wall");
        assert_eq!((e.beta, e.gamma), (0.5, 0.5));
    }

    #[test]
    fn criticality_flips_exactly_at_the_boundary() {
        let l = 2.0;
        let at = characteristic_exponents(&params(0.0, -l * l / 8.0, -l * l / 2.0, l));
        assert!(!at.supercritical_origin && !at.supercritical_wall);
        assert_eq!((at.beta, at.gamma), (0.5, 0.5));
        let below =
            characteristic_exponents(&params(0.0, -l * l / 8.0 - 1e-9, -l * l / 2.0 - 1e-9, l));
        assert!(below.supercritical_origin && below.supercritical_wall);
    }

    /// The raw coefficients, bypassing the peeled-form dispatch.
    struct RawCoefficients(PotentialParams);

    impl SoldeProblem for RawCoefficients {
        fn lambda0_at(&self, center: &Real, order: usize, _e: &Real) -> Result<Jet, AimError> {
            lambda0_jet(center, order).map_err(well_to_aim)
        }
        fn s0_at(&self, center: &Real, order: usize, e: &Real) -> Result<Jet, AimError> {
            s0_jet(&self.0, e, center, order).map_err(well_to_aim)
        }
        fn description(&self) -> &str {
            "raw coefficients"
        }
    }

    #[test]
    fn flat_bottom_first_raw_determinant_is_energy_squared() {
        // For A=B=C=0, L=2 the first determinant of the *raw* form works out
        // to E² exactly — strictly positive, which is why these strengths are
        // dispatched to the peeled form instead.
        let problem = RawCoefficients(params(0.0, 0.0, 0.0, 2.0));
        for e in [3.0, -2.0, 0.5] {
            let d = delta_at(&problem, &r(0.0), &r(e), 1).unwrap();
            assert!(
                (d.to_f64() - e * e).abs() < 1e-25,
                "Δ₁(E={e}) = {} should be E²",
                d.to_f64()
            );
        }
    }

    #[test]
    fn subcritical_strengths_dispatch_to_peeled_form() {
        // Every parameter set with real boundary exponents is peeled,
        // including the family where the raw form cannot see the outer
        // boundary at all (C=0, B=−AL²).
        for (a, b, c) in [
            (0.0, 0.0, 0.0),
            (0.1, -0.4, 0.0),
            (4.0, 4.0, 8.0),
            (4.0, 4.0, 0.0),
            (0.0, 0.0, 8.0),
        ] {
            assert!(
                make_well_problem(params(a, b, c, 2.0)).unwrap().uses_peeled_form(),
                "({a},{b},{c}) should peel"
            );
        }
        // Complex exponents leave nothing real to peel: raw form is kept.
        for (a, b, c) in [(1.0, -4.0, 0.0), (-4.0, -4.0, -8.0), (4.0, 4.0, -8.5)] {
            assert!(
                !make_well_problem(params(a, b, c, 2.0)).unwrap().uses_peeled_form(),
                "({a},{b},{c}) is supercritical and should stay raw"
            );
        }
    }

    #[test]
    fn peeled_form_recovers_free_box_levels() {
        // A=B=C=0, L=2: the exact levels are E_n = (n+1)²π²/8. The peeled
        // determinant changes sign across each of them; bisection at modest
        // depth must land on the closed form.
        let problem = make_well_problem(params(0.0, 0.0, 0.0, 2.0)).unwrap();
        let depth = 24;
        let y0 = r(0.0);
        let sign = |e: f64| delta_at(&problem, &y0, &r(e), depth).unwrap().signum_i();
        for (n, bracket) in [(0usize, (1.0, 1.5)), (1, (4.5, 5.2))] {
            let (mut lo, mut hi) = bracket;
            let s_lo = sign(lo);
            assert_ne!(s_lo, sign(hi), "no sign change over {bracket:?}");
            for _ in 0..50 {
                let mid = 0.5 * (lo + hi);
                if sign(mid) == s_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let e = 0.5 * (lo + hi);
            let exact = ((n + 1) * (n + 1)) as f64 * core::f64::consts::PI * core::f64::consts::PI
                / 8.0;
            assert!(
                (e - exact).abs() < 1e-10 * exact,
                "level {n}: {e} vs {exact}"
            );
        }
    }

    #[test]
    fn invalid_width_is_rejected_everywhere() {
        assert_eq!(
            PotentialParams::new(1.0, 1.0, 1.0, 0.0).unwrap_err(),
            WellError::InvalidWidth
        );
        assert_eq!(
            PotentialParams::new(1.0, 1.0, 1.0, -2.0).unwrap_err(),
            WellError::InvalidWidth
        );
        assert!(PotentialParams::new(1.0, f64::NAN, 1.0, 1.0).is_err());
    }
}
