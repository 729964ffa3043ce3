//! Truncated Taylor expansions ("jets") and their algebra.
//!
//! A jet represents a function near a fixed expansion center as the finite sum
//! `f(y) ≈ Σ_k c_k (y − y₀)^k`, `k = 0..=order`. The coefficient recursion in
//! [`crate::aim`] consumes one order of Taylor data per step, so every
//! operation here reports the order it can still guarantee: sums and products
//! of jets of orders `p` and `q` are exact only through `min(p, q)`, and
//! differentiation drops one order. Operations never silently pad with zeros —
//! a result's order is the order actually known.
//!
//! Division is power-series long division and is only well-posed when the
//! divisor's constant term is meaningfully nonzero; "meaningfully" is judged
//! against the divisor's own coefficient scale using the precision floor
//! `10^(−digits+4)`, below which a leading coefficient is indistinguishable
//! from accumulated roundoff.

use alloc::vec::Vec;

use crate::scalar::{dot, relative_floor, Precision, Real};
use core::fmt;

/// A truncated Taylor expansion about a fixed center.
#[derive(Clone, Debug)]
pub struct Jet {
    center: Real,
    coeffs: Vec<Real>,
}

/// Errors surfaced by jet algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JetError {
    /// Two operands were expanded about different centers.
    CenterMismatch,
    /// The divisor's constant term is below the precision floor relative to
    /// its largest coefficient, so long division would amplify noise.
    SingularDivisor,
    /// The operation needs more Taylor orders than the operand carries
    /// (differentiating an order-0 jet).
    InsufficientOrder,
    /// A rational expansion was requested where its denominator vanishes.
    SingularExpansionPoint,
}

impl fmt::Display for JetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JetError::CenterMismatch => {
                write!(f, "jet operands are expanded about different centers")
            }
            JetError::SingularDivisor => write!(
                f,
                "divisor jet has a constant term below the precision floor"
            ),
            JetError::InsufficientOrder => {
                write!(f, "jet carries too few orders for this operation")
            }
            JetError::SingularExpansionPoint => write!(
                f,
                "rational function denominator vanishes at the expansion center"
            ),
        }
    }
}

impl core::error::Error for JetError {}

impl Jet {
    /// Build a jet from its center and coefficient list (`coeffs[k]` is the
    /// coefficient of `(y − y₀)^k`). Panics if `coeffs` is empty, since an
    /// expansion of negative order has no meaning.
    #[must_use]
    pub fn new(center: Real, coeffs: Vec<Real>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least a constant term");
        Self { center, coeffs }
    }

    /// Constant function embedded at the given order (higher coefficients 0).
    #[must_use]
    pub fn constant(center: Real, value: Real, order: usize) -> Self {
        let p = prec_of(&value);
        let mut coeffs = Vec::with_capacity(order + 1);
        coeffs.push(value);
        for _ in 0..order {
            coeffs.push(Real::zero(p));
        }
        Self { center, coeffs }
    }

    /// The identity function `y`, expanded about `center`: `[center, 1, 0...]`.
    #[must_use]
    pub fn identity(center: Real, order: usize) -> Self {
        let p = prec_of(&center);
        let mut coeffs = Vec::with_capacity(order + 1);
        coeffs.push(center.clone());
        if order >= 1 {
            coeffs.push(Real::one(p));
        }
        for _ in 1..order {
            coeffs.push(Real::zero(p));
        }
        Self { center, coeffs }
    }

    #[must_use]
    pub fn center(&self) -> &Real {
        &self.center
    }

    /// Highest power of `(y − y₀)` this jet carries.
    #[must_use]
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    #[must_use]
    pub fn coeffs(&self) -> &[Real] {
        &self.coeffs
    }

    /// Coefficient of `(y − y₀)^k`, if carried.
    #[must_use]
    pub fn coeff(&self, k: usize) -> Option<&Real> {
        self.coeffs.get(k)
    }

    /// The value of the represented function at the center.
    #[must_use]
    pub fn value(&self) -> &Real {
        &self.coeffs[0]
    }

    /// Copy of this jet truncated to `order` (no-op if already at or below).
    #[must_use]
    pub fn truncated(&self, order: usize) -> Self {
        if self.order() <= order {
            self.clone()
        } else {
            Self {
                center: self.center.clone(),
                coeffs: self.coeffs[..=order].to_vec(),
            }
        }
    }

    /// Largest coefficient magnitude (scale of the jet).
    #[must_use]
    pub fn coeff_scale(&self) -> Real {
        let mut scale = self.coeffs[0].abs();
        for c in &self.coeffs[1..] {
            scale = scale.max_abs(c);
        }
        scale.abs()
    }

    pub(crate) fn from_parts(center: Real, coeffs: Vec<Real>) -> Self {
        debug_assert!(!coeffs.is_empty());
        Self { center, coeffs }
    }

    pub(crate) fn into_coeffs(self) -> Vec<Real> {
        self.coeffs
    }
}

/// Precision tag recovered from a value's bit width (used to scale floors).
fn prec_of(r: &Real) -> Precision {
    Precision::new(r.decimal_digits().max(Precision::MIN_DIGITS))
        .expect("digit count above floor by construction")
}

fn check_centers(a: &Jet, b: &Jet) -> Result<(), JetError> {
    if a.center == b.center {
        Ok(())
    } else {
        Err(JetError::CenterMismatch)
    }
}

/// Coefficient-wise sum; the result carries `min` of the operand orders.
pub fn jet_add(a: &Jet, b: &Jet) -> Result<Jet, JetError> {
    check_centers(a, b)?;
    let order = a.order().min(b.order());
    let mut coeffs = Vec::with_capacity(order + 1);
    for k in 0..=order {
        coeffs.push(a.coeffs[k].add(&b.coeffs[k]));
    }
    Ok(Jet::from_parts(a.center.clone(), coeffs))
}

/// Truncated Cauchy product `c_k = Σ_{i} a_i b_{k−i}`; result order is `min`
/// of the operand orders.
pub fn jet_mul(a: &Jet, b: &Jet) -> Result<Jet, JetError> {
    check_centers(a, b)?;
    let order = a.order().min(b.order());
    Ok(mul_truncated(a, b, order))
}

/// Cauchy product truncated at `order` (callers guarantee matching centers and
/// that both operands carry at least `order` coefficients).
pub(crate) fn mul_truncated(a: &Jet, b: &Jet, order: usize) -> Jet {
    debug_assert!(a.order() >= order && b.order() >= order);
    let mut rev = Vec::with_capacity(order + 1);
    let mut coeffs = Vec::with_capacity(order + 1);
    for k in 0..=order {
        // dot() wants b's first k+1 coefficients reversed; maintain the
        // reversed prefix incrementally instead of re-copying each step.
        rev.insert(0, b.coeffs[k].clone());
        coeffs.push(dot(&a.coeffs[..=k], &rev));
    }
    Jet::from_parts(a.center.clone(), coeffs)
}

/// Power-series long division `a / b`.
///
/// Requires the divisor's constant term to stand above the precision floor
/// relative to the divisor's coefficient scale; otherwise the leading
/// reciprocal would be dominated by roundoff and every order after it garbage.
pub fn jet_div(a: &Jet, b: &Jet) -> Result<Jet, JetError> {
    check_centers(a, b)?;
    let b0 = &b.coeffs[0];
    let floor = relative_floor(prec_of(b0), 4).mul(&b.coeff_scale());
    if b0.abs() <= floor {
        return Err(JetError::SingularDivisor);
    }
    let order = a.order().min(b.order());
    let mut q: Vec<Real> = Vec::with_capacity(order + 1);
    for k in 0..=order {
        // q_k = (a_k − Σ_{i<k} q_i b_{k−i}) / b_0
        let mut num = a.coeffs[k].clone();
        for (i, qi) in q.iter().enumerate() {
            num = num.sub(&qi.mul(&b.coeffs[k - i]));
        }
        q.push(num.div(b0));
    }
    Ok(Jet::from_parts(a.center.clone(), q))
}

/// Derivative with respect to `y`: `d_k = (k+1) c_{k+1}`. Drops one order;
/// an order-0 jet has no derivative information left.
pub fn jet_differentiate(a: &Jet) -> Result<Jet, JetError> {
    if a.order() == 0 {
        return Err(JetError::InsufficientOrder);
    }
    let mut coeffs = Vec::with_capacity(a.order());
    for k in 1..=a.order() {
        coeffs.push(a.coeffs[k].scale_i64(k as i64));
    }
    Ok(Jet::from_parts(a.center.clone(), coeffs))
}

/// Expand the rational function `num(y)/den(y)` about `center` to `order`.
///
/// Polynomial coefficients are in ascending power order (constant first).
/// Both polynomials are evaluated on the identity jet by Horner's scheme, then
/// divided; a denominator that vanishes at the center is rejected.
pub fn jet_from_rational(
    num_coeffs: &[Real],
    den_coeffs: &[Real],
    center: &Real,
    order: usize,
) -> Result<Jet, JetError> {
    assert!(
        !num_coeffs.is_empty() && !den_coeffs.is_empty(),
        "rational expansion needs nonempty coefficient lists"
    );
    let y = Jet::identity(center.clone(), order);
    let num = poly_on_jet(num_coeffs, &y);
    let den = poly_on_jet(den_coeffs, &y);
    jet_div(&num, &den).map_err(|e| match e {
        JetError::SingularDivisor => JetError::SingularExpansionPoint,
        other => other,
    })
}

/// Horner evaluation of a polynomial (ascending coefficients) on a jet.
fn poly_on_jet(poly: &[Real], y: &Jet) -> Jet {
    let order = y.order();
    let center = y.center().clone();
    let mut acc = Jet::constant(
        center.clone(),
        poly.last().expect("nonempty polynomial").clone(),
        order,
    );
    for c in poly.iter().rev().skip(1) {
        acc = mul_truncated(&acc, y, order);
        acc = Jet::from_parts(center.clone(), {
            let mut cs = acc.into_coeffs();
            cs[0] = cs[0].add(c);
            cs
        });
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Precision;

    fn p30() -> Precision {
        Precision::new(30).unwrap()
    }

    fn r(x: f64) -> Real {
        Real::from_f64(x, p30())
    }

    fn jet(center: f64, coeffs: &[f64]) -> Jet {
        Jet::new(r(center), coeffs.iter().map(|&c| r(c)).collect())
    }

    fn assert_coeffs_close(j: &Jet, want: &[f64], tol: f64) {
        assert_eq!(j.order() + 1, want.len(), "order mismatch: {j:?}");
        for (k, &w) in want.iter().enumerate() {
            let got = j.coeff(k).unwrap().to_f64();
            assert!(
                (got - w).abs() <= tol * w.abs().max(1.0),
                "coefficient {k}: got {got}, want {w}"
            );
        }
    }

    #[test]
    fn add_truncates_to_shorter_operand() {
        let a = jet(0.0, &[1.0, 2.0, 3.0]);
        let b = jet(0.0, &[0.5, -2.0]);
        let s = jet_add(&a, &b).unwrap();
        assert_coeffs_close(&s, &[1.5, 0.0], 0.0);
    }

    #[test]
    fn add_rejects_center_mismatch() {
        let a = jet(0.0, &[1.0]);
        let b = jet(0.5, &[1.0]);
        assert_eq!(jet_add(&a, &b).unwrap_err(), JetError::CenterMismatch);
    }

    #[test]
    fn mul_is_truncated_cauchy_product() {
        // (1 + y)(1 − y) = 1 − y² exactly at order 2.
        let a = jet(0.0, &[1.0, 1.0, 0.0]);
        let b = jet(0.0, &[1.0, -1.0, 0.0]);
        let prod = jet_mul(&a, &b).unwrap();
        assert_coeffs_close(&prod, &[1.0, 0.0, -1.0], 0.0);
    }

    #[test]
    fn mul_truncation_drops_unknowable_orders() {
        let a = jet(0.0, &[2.0, 1.0, 4.0, 8.0]);
        let b = jet(0.0, &[1.0, 3.0]);
        let prod = jet_mul(&a, &b).unwrap();
        assert_eq!(prod.order(), 1);
        assert_coeffs_close(&prod, &[2.0, 7.0], 0.0);
    }

    #[test]
    fn div_inverts_mul() {
        let a = jet(0.0, &[0.7, -1.3, 2.0, 0.25]);
        let b = jet(0.0, &[2.0, 0.5, -0.75, 1.0]);
        let q = jet_div(&jet_mul(&a, &b).unwrap(), &b).unwrap();
        assert_coeffs_close(&q, &[0.7, -1.3, 2.0, 0.25], 1e-28);
    }

    #[test]
    fn div_rejects_tiny_leading_coefficient() {
        // Constant term 1e-40 against coefficient scale 1: far below the
        // 10^(−30+4) floor, so division must refuse.
        let a = jet(0.0, &[1.0, 1.0]);
        let b = jet(0.0, &[1e-40, 1.0]);
        assert_eq!(jet_div(&a, &b).unwrap_err(), JetError::SingularDivisor);
    }

    #[test]
    fn geometric_series_expansion() {
        // 1/(1−y) = 1 + y + y² + ... about 0.
        let one = jet(0.0, &[1.0, 0.0, 0.0, 0.0, 0.0]);
        let den = jet(0.0, &[1.0, -1.0, 0.0, 0.0, 0.0]);
        let q = jet_div(&one, &den).unwrap();
        assert_coeffs_close(&q, &[1.0, 1.0, 1.0, 1.0, 1.0], 1e-28);
    }

    #[test]
    fn differentiate_shifts_and_scales() {
        let a = jet(0.0, &[5.0, 3.0, 2.0, 1.0]);
        let d = jet_differentiate(&a).unwrap();
        assert_coeffs_close(&d, &[3.0, 4.0, 3.0], 0.0);
        assert_eq!(d.order(), a.order() - 1);
    }

    #[test]
    fn differentiate_order_zero_fails() {
        let a = jet(0.0, &[5.0]);
        assert_eq!(
            jet_differentiate(&a).unwrap_err(),
            JetError::InsufficientOrder
        );
    }

    #[test]
    fn rational_expansion_of_simple_pole() {
        // −1/(2+2y) about 0: −(1/2)(1 − y + y² − ...).
        let num = [r(-1.0)];
        let den = [r(2.0), r(2.0)];
        let j = jet_from_rational(&num, &den, &r(0.0), 3).unwrap();
        assert_coeffs_close(&j, &[-0.5, 0.5, -0.5, 0.5], 1e-28);
    }

    #[test]
    fn rational_expansion_about_nonzero_center() {
        // −1/(2+2y) about y₀ = 1 is the constant −1/4 plus corrections
        // 1/8 (y−1) − 1/16 (y−1)² ...
        let num = [r(-1.0)];
        let den = [r(2.0), r(2.0)];
        let j = jet_from_rational(&num, &den, &r(1.0), 2).unwrap();
        assert_coeffs_close(&j, &[-0.25, 0.125, -0.0625], 1e-28);
    }

    #[test]
    fn rational_expansion_rejects_denominator_zero() {
        let num = [r(-1.0)];
        let den = [r(2.0), r(2.0)];
        assert_eq!(
            jet_from_rational(&num, &den, &r(-1.0), 2).unwrap_err(),
            JetError::SingularExpansionPoint
        );
    }

    #[test]
    fn polynomial_ratio_reproduces_horner_values() {
        // (3 − y + 2y²)/(1 + y/2) expanded about 0.3, then summed back at a
        // nearby point, must match direct evaluation.
        let num = [r(3.0), r(-1.0), r(2.0)];
        let den = [r(1.0), r(0.5)];
        let c = 0.3;
        let j = jet_from_rational(&num, &den, &r(c), 8).unwrap();
        let t: f64 = 0.05;
        let mut acc = 0.0;
        for k in (0..=j.order()).rev() {
            acc = acc * t + j.coeff(k).unwrap().to_f64();
        }
        let y = c + t;
        let direct = (3.0 - y + 2.0 * y * y) / (1.0 + 0.5 * y);
        assert!(
            (acc - direct).abs() < 1e-12,
            "summed jet {acc} vs direct {direct}"
        );
    }
}
