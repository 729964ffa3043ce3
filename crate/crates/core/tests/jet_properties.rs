//! Property tests for the jet algebra: the algebraic identities that must
//! hold for truncated Taylor arithmetic regardless of coefficient values.

use aimwell_core::{
    jet_add, jet_differentiate, jet_div, jet_from_rational, jet_mul, Jet, Precision, Real,
};
use proptest::prelude::*;

fn p30() -> Precision {
    Precision::new(30).unwrap()
}

fn r(x: f64) -> Real {
    Real::from_f64(x, p30())
}

fn to_jet(center: f64, coeffs: &[f64]) -> Jet {
    Jet::new(r(center), coeffs.iter().map(|&c| r(c)).collect())
}

/// Coefficient-wise closeness at the working-precision tolerance
/// 10^(−digits+2), relative to the larger jet's coefficient scale.
fn jets_close(a: &Jet, b: &Jet) -> Result<(), String> {
    if a.order() != b.order() {
        return Err(format!("order mismatch: {} vs {}", a.order(), b.order()));
    }
    let scale = a
        .coeff_scale()
        .max_abs(&b.coeff_scale())
        .to_f64()
        .max(1.0);
    let tol = 1e-28 * scale;
    for k in 0..=a.order() {
        let (x, y) = (a.coeff(k).unwrap().to_f64(), b.coeff(k).unwrap().to_f64());
        if (x - y).abs() > tol {
            return Err(format!("coefficient {k}: {x} vs {y} (tol {tol})"));
        }
    }
    Ok(())
}

/// Nonzero-constant-term coefficient vectors for division tests.
fn divisor_coeffs(order: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, order + 1..=order + 1).prop_map(|mut v| {
        if v[0].abs() < 0.25 {
            v[0] = if v[0] < 0.0 { -0.25 } else { 0.25 } + v[0];
            if v[0].abs() < 0.2 {
                v[0] = 0.5;
            }
        }
        v
    })
}

fn any_coeffs(order: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, order + 1..=order + 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn addition_commutes(a in any_coeffs(6), b in any_coeffs(6), c in -0.9f64..0.9) {
        let (ja, jb) = (to_jet(c, &a), to_jet(c, &b));
        let lhs = jet_add(&ja, &jb).unwrap();
        let rhs = jet_add(&jb, &ja).unwrap();
        jets_close(&lhs, &rhs).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn multiplication_commutes(a in any_coeffs(6), b in any_coeffs(6), c in -0.9f64..0.9) {
        let (ja, jb) = (to_jet(c, &a), to_jet(c, &b));
        let lhs = jet_mul(&ja, &jb).unwrap();
        let rhs = jet_mul(&jb, &ja).unwrap();
        jets_close(&lhs, &rhs).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn multiplication_associates(
        a in any_coeffs(5),
        b in any_coeffs(5),
        cc in any_coeffs(5),
        c in -0.9f64..0.9,
    ) {
        let (ja, jb, jc) = (to_jet(c, &a), to_jet(c, &b), to_jet(c, &cc));
        let lhs = jet_mul(&jet_mul(&ja, &jb).unwrap(), &jc).unwrap();
        let rhs = jet_mul(&ja, &jet_mul(&jb, &jc).unwrap()).unwrap();
        jets_close(&lhs, &rhs).map_err(TestCaseError::fail)?;
    }

    /// d(fg) = f·dg + g·df, compared at the order both sides still carry.
    #[test]
    fn differentiation_satisfies_leibniz(
        a in any_coeffs(7),
        b in any_coeffs(7),
        c in -0.9f64..0.9,
    ) {
        let (ja, jb) = (to_jet(c, &a), to_jet(c, &b));
        let lhs = jet_differentiate(&jet_mul(&ja, &jb).unwrap()).unwrap();
        let term1 = jet_mul(&ja, &jet_differentiate(&jb).unwrap()).unwrap();
        let term2 = jet_mul(&jb, &jet_differentiate(&ja).unwrap()).unwrap();
        let rhs = jet_add(&term1, &term2).unwrap();
        jets_close(&lhs.truncated(rhs.order()), &rhs).map_err(TestCaseError::fail)?;
    }

    /// (a·b)/b returns a through the shared order.
    #[test]
    fn division_inverts_multiplication(
        a in any_coeffs(6),
        b in divisor_coeffs(6),
        c in -0.9f64..0.9,
    ) {
        let (ja, jb) = (to_jet(c, &a), to_jet(c, &b));
        let q = jet_div(&jet_mul(&ja, &jb).unwrap(), &jb).unwrap();
        jets_close(&q, &ja).map_err(TestCaseError::fail)?;
    }

    /// b·(a/b) returns a through the shared order.
    #[test]
    fn multiplication_inverts_division(
        a in any_coeffs(6),
        b in divisor_coeffs(6),
        c in -0.9f64..0.9,
    ) {
        let (ja, jb) = (to_jet(c, &a), to_jet(c, &b));
        let back = jet_mul(&jet_div(&ja, &jb).unwrap(), &jb).unwrap();
        jets_close(&back, &ja).map_err(TestCaseError::fail)?;
    }

    /// Expanding a rational function at higher order refines, never changes,
    /// the lower-order coefficients.
    #[test]
    fn rational_expansion_refines_monotonically(
        num in any_coeffs(3),
        den in divisor_coeffs(2),
        c in -0.4f64..0.4,
    ) {
        let nr: Vec<Real> = num.iter().map(|&x| r(x)).collect();
        let dr: Vec<Real> = den.iter().map(|&x| r(x)).collect();
        // Skip the rare draw where the denominator, though safe at 0, passes
        // near zero at this center.
        let denom_at = den.iter().rev().fold(0.0, |acc, &d| acc * c + d);
        prop_assume!(denom_at.abs() > 0.05);
        let lo = jet_from_rational(&nr, &dr, &r(c), 4).unwrap();
        let hi = jet_from_rational(&nr, &dr, &r(c), 9).unwrap();
        jets_close(&hi.truncated(4), &lo).map_err(TestCaseError::fail)?;
    }

    /// Summing a jet's series at a nearby point reproduces direct evaluation
    /// of the rational function it expands.
    #[test]
    fn series_summation_matches_direct_evaluation(
        num in any_coeffs(3),
        den in divisor_coeffs(2),
        c in -0.4f64..0.4,
        t in -0.05f64..0.05,
    ) {
        let denom_at = |y: f64| den.iter().rev().fold(0.0, |acc, &d| acc * y + d);
        prop_assume!(denom_at(c).abs() > 0.3 && denom_at(c + t).abs() > 0.3);
        let nr: Vec<Real> = num.iter().map(|&x| r(x)).collect();
        let dr: Vec<Real> = den.iter().map(|&x| r(x)).collect();
        let j = jet_from_rational(&nr, &dr, &r(c), 24).unwrap();
        let mut acc = 0.0;
        for k in (0..=j.order()).rev() {
            acc = acc * t + j.coeff(k).unwrap().to_f64();
        }
        let y = c + t;
        let direct = num.iter().rev().fold(0.0, |a2, &n| a2 * y + n) / denom_at(y);
        prop_assert!(
            (acc - direct).abs() < 1e-10 * direct.abs().max(1.0),
            "series {} vs direct {}",
            acc,
            direct
        );
    }
}
