//! Multiple sine functions `S_r(z|ω)`.
//!
//! Two independent representations are implemented, and their agreement is
//! the computational heart of the modular identities downstream:
//!
//! - infinite products: an exponential of `±πi/r! B_rr(z|ω)` times q-shifted
//!   factorials in the period ratios, in two variants (direct arguments
//!   `x_k = e^{2πiz/ω_k}` and inverted arguments `x_k⁻¹`), valid for `r ≥ 2`
//!   with all period ratios off the real axis;
//! - indented-contour integrals of `e^{zt} / (t ∏ (e^{ω_j t}-1))` along
//!   `R ± i0`, valid for periods in the right half-plane and
//!   `0 < Re z < Re|ω|`.
//!
//! The Bernoulli exponential and the factorial product are assembled in log
//! space and exponentiated once, which keeps moderate `|Im z|` away from
//! overflow.  `S_1(z|ω_1) = 2 sin(πz/ω_1)` in closed form.
//!
//! Semantically the hierarchy descends from the Barnes multiple gamma
//! construction; that characterization is the anchor, not an evaluation
//! path — everything here is computed through the representations above.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::bernoulli::{self, PeriodVector};
use crate::cplx::{exp_2pi_i, expm1, pi_i};
use crate::identities::{sample_map, IdentityReport};
use crate::policy::{Estimate, EvalError, TruncationPolicy};
use crate::qseries;
use crate::quadrature::{integrate_contour, ContourKind, ContourSpec};

/// `S_1(z|ω_1) = 2 sin(πz/ω_1)`.
pub fn sine_s1(z: Complex64, omega1: Complex64) -> Result<Complex64, EvalError> {
    if omega1.norm() == 0.0 {
        return Err(EvalError::InvalidParameter("period must be nonzero".into()));
    }
    Ok(2.0 * (PI * z / omega1).sin())
}

/// Which of the two infinite-product representations to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductVariant {
    /// Arguments `x_k = e^{2πiz/ω_k}`, prefactor `(-1)^r πi/r! B_rr`.
    DirectArgs,
    /// Arguments `x_k⁻¹`, prefactor of the opposite sign.
    InvertedArgs,
}

fn check_ratios(omega: &PeriodVector) -> Result<(), EvalError> {
    let w = omega.entries();
    for j in 0..w.len() {
        for k in 0..w.len() {
            if j != k && (w[j] / w[k]).im == 0.0 {
                return Err(EvalError::RatioOnRealAxis(format!(
                    "Im(omega_{j}/omega_{k}) = 0"
                )));
            }
        }
    }
    Ok(())
}

fn factorial(n: usize) -> f64 {
    (2..=n).fold(1.0, |a, k| a * k as f64)
}

/// The log of the factorial part of the product representation:
/// `Σ_k log (x_k^{±1}; q_k^{±1})∞`, without the Bernoulli exponential.
/// Split out so consumers that cancel the Bernoulli terms analytically can
/// use it directly.
pub(crate) fn log_sine_factors(
    r: usize,
    z: Complex64,
    omega: &PeriodVector,
    variant: ProductVariant,
    policy: &TruncationPolicy,
) -> Result<Estimate, EvalError> {
    let w = omega.entries();
    let mut log = Complex64::new(0.0, 0.0);
    let mut bound = 0.0;
    for k in 0..r {
        let sgn = match variant {
            ProductVariant::DirectArgs => 1.0,
            ProductVariant::InvertedArgs => -1.0,
        };
        let x = exp_2pi_i(sgn * z / w[k]);
        let q: Vec<Complex64> = (0..r)
            .filter(|j| *j != k)
            .map(|j| exp_2pi_i(sgn * w[j] / w[k]))
            .collect();
        let term = qseries::log_q_shifted_factorial(x, &q, policy)?;
        log += term.value;
        bound += term.bound;
    }
    Ok(Estimate::new(log, bound))
}

/// `S_r(z|ω)` through an infinite-product representation, `r ≥ 2`, all
/// period ratios off the real axis.
pub fn multiple_sine_product(
    r: usize,
    z: Complex64,
    omega: &PeriodVector,
    variant: ProductVariant,
    policy: &TruncationPolicy,
) -> Result<Estimate, EvalError> {
    if r < 2 || omega.len() != r {
        return Err(EvalError::InvalidParameter(format!(
            "product representation needs r >= 2 with {r} periods, got {}",
            omega.len()
        )));
    }
    check_ratios(omega)?;
    let b = bernoulli::eval_multiple_bernoulli(r, r, z, omega)?;
    let parity = if r.is_multiple_of(2) { 1.0 } else { -1.0 };
    let prefactor_sign = match variant {
        ProductVariant::DirectArgs => parity,
        ProductVariant::InvertedArgs => -parity,
    };
    let log_pre = pi_i() / factorial(r) * b * prefactor_sign;
    let factors = log_sine_factors(r, z, omega, variant, policy)?;
    Ok(Estimate::exp_of_log(Estimate::new(
        log_pre + factors.value,
        factors.bound,
    )))
}

/// Which side of the real axis the origin notch passes on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndentSide {
    /// `R + i0`: notch above the origin, Bernoulli prefactor `(-1)^r πi/r!`.
    Above,
    /// `R - i0`: notch below, prefactor of the opposite sign.
    Below,
}

/// `S_r(z|ω)` through the indented-contour integral representation.
///
/// Requires every period in the open right half-plane and
/// `0 < Re z < Re|ω|`.
pub fn multiple_sine_integral(
    r: usize,
    z: Complex64,
    omega: &PeriodVector,
    side: IndentSide,
    policy: &TruncationPolicy,
) -> Result<Estimate, EvalError> {
    if r < 1 || omega.len() != r {
        return Err(EvalError::InvalidParameter(format!(
            "integral representation needs r >= 1 with {r} periods, got {}",
            omega.len()
        )));
    }
    if omega.entries().iter().any(|w| w.re <= 0.0) {
        return Err(EvalError::DomainViolation(
            "integral representation requires Re omega_j > 0".into(),
        ));
    }
    let re_sum = omega.sum().re;
    if !(z.re > 0.0 && z.re < re_sum) {
        return Err(EvalError::DomainViolation(format!(
            "need 0 < Re z < Re|omega| = {re_sum:.6}, got Re z = {:.6}",
            z.re
        )));
    }
    let w: Vec<Complex64> = omega.entries().to_vec();
    let phi = move |t: Complex64| -> Complex64 {
        let mut denom = t;
        for wj in &w {
            denom *= expm1(wj * t);
        }
        (z * t).exp() / denom
    };
    let kind = match side {
        IndentSide::Above => ContourKind::RealLineIndentAbove,
        IndentSide::Below => ContourKind::RealLineIndentBelow,
    };
    let spec = ContourSpec::from_policy(kind, policy);
    let (integral, q_err) = integrate_contour(&phi, &spec, policy)?;

    let b = bernoulli::eval_multiple_bernoulli(r, r, z, omega)?;
    let parity = if r.is_multiple_of(2) { 1.0 } else { -1.0 };
    let pre_sign = match side {
        IndentSide::Above => parity,
        IndentSide::Below => -parity,
    };
    let log = pi_i() / factorial(r) * b * pre_sign + integral * parity;
    Ok(Estimate::exp_of_log(Estimate::new(log, q_err)))
}

/// Evaluate `S_r` by the best available route: closed form at `r = 1`, the
/// direct-argument product for `r ≥ 2`.
pub(crate) fn s_eval(
    r: usize,
    z: Complex64,
    omega: &PeriodVector,
    policy: &TruncationPolicy,
) -> Result<Estimate, EvalError> {
    if r == 1 {
        Ok(Estimate::new(sine_s1(z, omega[0])?, 1e-15))
    } else {
        multiple_sine_product(r, z, omega, ProductVariant::DirectArgs, policy)
    }
}

/// Which well-known relation of `S_r` to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SineRelation {
    /// `S_r(z+ω_j|ω) = S_{r-1}(z|ω⁻(j))⁻¹ S_r(z|ω)`
    Shift { j: usize },
    /// `S_r(z|ω) S_r(|ω|-z|ω)^{(-1)^r} = 1`
    Reflection,
}

impl SineRelation {
    pub fn id(&self) -> &'static str {
        match self {
            SineRelation::Shift { .. } => "sine-shift",
            SineRelation::Reflection => "sine-reflection",
        }
    }
}

/// Check a shift or reflection relation of `S_r` at a sample point.
pub fn check_sine_relations(
    kind: SineRelation,
    r: usize,
    z: Complex64,
    omega: &PeriodVector,
    policy: &TruncationPolicy,
) -> Result<IdentityReport, EvalError> {
    if omega.len() != r {
        return Err(EvalError::InvalidParameter(format!(
            "period vector has {} entries, expected r = {r}",
            omega.len()
        )));
    }
    let (lhs, rhs) = match kind {
        SineRelation::Shift { j } => {
            if j >= r {
                return Err(EvalError::InvalidParameter(format!(
                    "period index {j} out of range for r = {r}"
                )));
            }
            let lhs = s_eval(r, z + omega[j], omega, policy)?;
            let rhs = s_eval(r - 1, z, &omega.removed(j), policy)?
                .recip()
                .mul(s_eval(r, z, omega, policy)?);
            (lhs, rhs)
        }
        SineRelation::Reflection => {
            let a = s_eval(r, z, omega, policy)?;
            let b = s_eval(r, omega.sum() - z, omega, policy)?;
            let lhs = if r.is_multiple_of(2) {
                a.mul(b)
            } else {
                a.div(b)
            };
            (lhs, Estimate::exact(Complex64::ONE))
        }
    };
    let mut sample = sample_map([("z", z.into()), ("r", (r as i64).into())]);
    for (j, wj) in omega.entries().iter().enumerate() {
        sample.insert(format!("omega{}", j + 1), (*wj).into());
    }
    Ok(IdentityReport::from_sides(
        kind.id(),
        lhs.value,
        rhs.value,
        policy.series_threshold,
        sample,
        policy,
    ))
}

// ---------------------------------------------------------------------------
// Literal explicit formulas: one-axis and two-axis products coded directly
// from the closed forms, independent of the generic evaluator.  They pin the
// index convention of the generic path.

/// Explicit `S_2(z|ω_1,ω_2)` for `Im(ω_1/ω_2) > 0`, both printed variants.
pub fn s2_explicit(
    z: Complex64,
    w1: Complex64,
    w2: Complex64,
    variant: ProductVariant,
    policy: &TruncationPolicy,
) -> Result<Complex64, EvalError> {
    if !((w1 / w2).im > 0.0) {
        return Err(EvalError::DomainViolation(
            "explicit S_2 needs Im(omega_1/omega_2) > 0".into(),
        ));
    }
    let omega = PeriodVector::new(vec![w1, w2])?;
    let b22 = bernoulli::eval_multiple_bernoulli(2, 2, z, &omega)?;
    let n_terms = product_cutoff(&[(w1 / w2).im.abs(), (w2 / w1).im.abs()], policy)?;
    let mut prod = Complex64::ONE;
    match variant {
        ProductVariant::DirectArgs => {
            for j in 0..n_terms {
                let jf = j as f64;
                let num = Complex64::ONE - exp_2pi_i(z / w2 + jf * w1 / w2);
                let den = Complex64::ONE - exp_2pi_i(z / w1 - (jf + 1.0) * w2 / w1);
                prod *= num / den;
            }
            Ok((pi_i() / 2.0 * b22).exp() * prod)
        }
        ProductVariant::InvertedArgs => {
            for j in 0..n_terms {
                let jf = j as f64;
                let num = Complex64::ONE - exp_2pi_i(-z / w1 - jf * w2 / w1);
                let den = Complex64::ONE - exp_2pi_i(-z / w2 + (jf + 1.0) * w1 / w2);
                prod *= num / den;
            }
            Ok((-pi_i() / 2.0 * b22).exp() * prod)
        }
    }
}

/// Explicit `S_3(z|ω_1,ω_2,ω_3)` for
/// `Im(ω_1/ω_2), Im(ω_1/ω_3), Im(ω_2/ω_3) > 0`, both printed variants.
pub fn s3_explicit(
    z: Complex64,
    w1: Complex64,
    w2: Complex64,
    w3: Complex64,
    variant: ProductVariant,
    policy: &TruncationPolicy,
) -> Result<Complex64, EvalError> {
    for (a, b, name) in [
        (w1, w2, "omega_1/omega_2"),
        (w1, w3, "omega_1/omega_3"),
        (w2, w3, "omega_2/omega_3"),
    ] {
        if !((a / b).im > 0.0) {
            return Err(EvalError::DomainViolation(format!(
                "explicit S_3 needs Im({name}) > 0"
            )));
        }
    }
    let omega = PeriodVector::new(vec![w1, w2, w3])?;
    let b33 = bernoulli::eval_multiple_bernoulli(3, 3, z, &omega)?;
    let rates = [
        (w2 / w1).im.abs(),
        (w3 / w1).im.abs(),
        (w1 / w3).im.abs(),
        (w2 / w3).im.abs(),
        (w1 / w2).im.abs(),
        (w3 / w2).im.abs(),
    ];
    let n_terms = product_cutoff(&rates, policy)?;
    let mut prod = Complex64::ONE;
    match variant {
        ProductVariant::DirectArgs => {
            for j in 0..n_terms {
                for k in 0..n_terms {
                    let (jf, kf) = (j as f64, k as f64);
                    let a = Complex64::ONE
                        - exp_2pi_i(z / w1 - (jf + 1.0) * w2 / w1 - (kf + 1.0) * w3 / w1);
                    let b = Complex64::ONE - exp_2pi_i(z / w3 + jf * w1 / w3 + kf * w2 / w3);
                    let den =
                        Complex64::ONE - exp_2pi_i(z / w2 + jf * w1 / w2 - (kf + 1.0) * w3 / w2);
                    prod *= a * b / den;
                }
            }
            Ok((-pi_i() / 6.0 * b33).exp() * prod)
        }
        ProductVariant::InvertedArgs => {
            for j in 0..n_terms {
                for k in 0..n_terms {
                    let (jf, kf) = (j as f64, k as f64);
                    let a = Complex64::ONE - exp_2pi_i(-z / w1 - jf * w2 / w1 - kf * w3 / w1);
                    let b = Complex64::ONE
                        - exp_2pi_i(-z / w3 + (jf + 1.0) * w1 / w3 + (kf + 1.0) * w2 / w3);
                    let den =
                        Complex64::ONE - exp_2pi_i(-z / w2 + (jf + 1.0) * w1 / w2 - kf * w3 / w2);
                    prod *= a * b / den;
                }
            }
            Ok((pi_i() / 6.0 * b33).exp() * prod)
        }
    }
}

/// Truncation depth: factors shrink like `e^{-2π rate j}` for the slowest
/// of the listed rates.
fn product_cutoff(rates: &[f64], policy: &TruncationPolicy) -> Result<usize, EvalError> {
    let slowest = rates.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(slowest > 0.0) {
        return Err(EvalError::RatioOnRealAxis(
            "a period ratio sits on the real axis".into(),
        ));
    }
    let n = (-policy.tail_tol.ln() / (2.0 * PI * slowest)).ceil() as usize + 4;
    if n.saturating_mul(n) > policy.max_terms {
        return Err(EvalError::MaxTermsExceeded(format!(
            "explicit product needs {n}^2 factors"
        )));
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pol() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    fn pv(entries: &[Complex64]) -> PeriodVector {
        PeriodVector::new(entries.to_vec()).unwrap()
    }

    #[test]
    fn s1_closed_form_values() {
        let one = c(1.0, 0.0);
        assert!((sine_s1(one / 2.0, one).unwrap() - c(2.0, 0.0)).norm() < 1e-15);
        assert!(sine_s1(c(0.0, 0.0), one).unwrap().norm() < 1e-15);
        let v = sine_s1(c(0.3, 0.0), one).unwrap();
        assert!((v.re - 2.0 * (0.3 * PI).sin()).abs() < 1e-12);
        assert!((v.re - 1.618034).abs() < 1e-6);
    }

    #[test]
    fn product_variants_agree() {
        let omega = pv(&[c(1.0, 0.0), c(0.0, 1.0)]);
        let z = c(0.4, 0.3);
        let a = multiple_sine_product(2, z, &omega, ProductVariant::DirectArgs, &pol()).unwrap();
        let b = multiple_sine_product(2, z, &omega, ProductVariant::InvertedArgs, &pol()).unwrap();
        let rel = (a.value - b.value).norm() / a.value.norm();
        assert!(rel < 1e-10, "rel = {rel:.3e}");
    }

    #[test]
    fn product_homogeneity() {
        let omega = pv(&[c(1.0, 0.0), c(0.0, 1.0)]);
        let z = c(0.4, 0.3);
        let base = multiple_sine_product(2, z, &omega, ProductVariant::DirectArgs, &pol()).unwrap();
        let ph = c(0.3f64.cos(), 0.3f64.sin());
        let scale = 2.0 * ph;
        let scaled = multiple_sine_product(
            2,
            scale * z,
            &omega.scaled(scale),
            ProductVariant::DirectArgs,
            &pol(),
        )
        .unwrap();
        let rel = (base.value - scaled.value).norm() / base.value.norm();
        assert!(rel < 1e-10, "rel = {rel:.3e}");
    }

    #[test]
    fn generic_matches_explicit_s2() {
        // pins the index convention of the generic evaluator
        let (w1, w2) = (c(0.0, 1.0), c(1.0, 0.0)); // Im(w1/w2) = 1 > 0
        let z = c(0.4, 0.3);
        let omega = pv(&[w1, w2]);
        let generic =
            multiple_sine_product(2, z, &omega, ProductVariant::DirectArgs, &pol()).unwrap();
        for variant in [ProductVariant::DirectArgs, ProductVariant::InvertedArgs] {
            let explicit = s2_explicit(z, w1, w2, variant, &pol()).unwrap();
            let rel = (generic.value - explicit).norm() / explicit.norm();
            assert!(rel < 1e-10, "{variant:?}: rel = {rel:.3e}");
        }
    }

    #[test]
    fn generic_matches_explicit_s3() {
        let w1 = c(0.9f64.cos(), 0.9f64.sin());
        let w2 = c(0.3f64.cos(), 0.3f64.sin());
        let w3 = c(0.5f64.cos(), -0.5f64.sin());
        let z = c(0.5, 0.2);
        let omega = pv(&[w1, w2, w3]);
        let generic =
            multiple_sine_product(3, z, &omega, ProductVariant::DirectArgs, &pol()).unwrap();
        for variant in [ProductVariant::DirectArgs, ProductVariant::InvertedArgs] {
            let explicit = s3_explicit(z, w1, w2, w3, variant, &pol()).unwrap();
            let rel = (generic.value - explicit).norm() / explicit.norm();
            assert!(rel < 1e-10, "{variant:?}: rel = {rel:.3e}");
        }
    }

    #[test]
    fn integral_matches_product() {
        let omega = pv(&[c(1.0, 0.0), c(1.0, 1.0)]);
        let z = c(0.8, 0.1);
        let int = multiple_sine_integral(2, z, &omega, IndentSide::Above, &pol()).unwrap();
        let prod = multiple_sine_product(2, z, &omega, ProductVariant::DirectArgs, &pol()).unwrap();
        let rel = (int.value - prod.value).norm() / prod.value.norm();
        assert!(rel < 1e-7, "rel = {rel:.3e}");
    }

    #[test]
    fn both_indentation_sides_agree() {
        let omega = pv(&[c(1.0, 0.0), c(1.0, 1.0)]);
        let z = c(0.8, 0.1);
        let a = multiple_sine_integral(2, z, &omega, IndentSide::Above, &pol()).unwrap();
        let b = multiple_sine_integral(2, z, &omega, IndentSide::Below, &pol()).unwrap();
        let rel = (a.value - b.value).norm() / a.value.norm();
        assert!(rel < 1e-7, "rel = {rel:.3e}");
    }

    #[test]
    fn integral_reproduces_closed_form_at_r1() {
        let omega = pv(&[c(1.0, 0.0)]);
        let z = c(0.4, 0.1);
        let int = multiple_sine_integral(1, z, &omega, IndentSide::Above, &pol()).unwrap();
        let closed = sine_s1(z, omega[0]).unwrap();
        assert!(
            (int.value - closed).norm() < 1e-8 * closed.norm(),
            "{} vs {closed}",
            int.value
        );
    }

    #[test]
    fn reflection_relation() {
        let omega = pv(&[c(1.0, 0.0), c(0.0, 1.0)]);
        let rep =
            check_sine_relations(SineRelation::Reflection, 2, c(0.4, 0.2), &omega, &pol()).unwrap();
        assert!(rep.pass, "residual {:.3e}", rep.rel_residual);
        assert!(rep.rel_residual < 1e-9);
    }

    #[test]
    fn shift_relation_uses_closed_form_s1() {
        let omega = pv(&[c(1.0, 0.0), c(0.0, 1.0)]);
        for j in 0..2 {
            let rep =
                check_sine_relations(SineRelation::Shift { j }, 2, c(0.4, 0.2), &omega, &pol())
                    .unwrap();
            assert!(rep.pass, "j={j} residual {:.3e}", rep.rel_residual);
            assert!(rep.rel_residual < 1e-9);
        }
    }

    #[test]
    fn reflection_fixed_point_squares_to_one() {
        let omega = pv(&[c(1.0, 0.0), c(0.0, 1.0)]);
        let mid = omega.sum() / 2.0;
        let v = multiple_sine_product(2, mid, &omega, ProductVariant::DirectArgs, &pol())
            .unwrap()
            .value;
        assert!(
            (v * v - Complex64::ONE).norm() < 1e-9,
            "S2(mid)^2 = {}",
            v * v
        );
    }

    #[test]
    fn real_ratio_is_rejected() {
        let omega = pv(&[c(0.0, 1.0), c(0.0, 2.0)]);
        assert!(matches!(
            multiple_sine_product(2, c(0.3, 0.1), &omega, ProductVariant::DirectArgs, &pol()),
            Err(EvalError::RatioOnRealAxis(_))
        ));
    }

    #[test]
    fn integral_domain_violations() {
        let omega = pv(&[c(1.0, 0.0), c(1.0, 1.0)]);
        assert!(matches!(
            multiple_sine_integral(2, c(2.5, 0.0), &omega, IndentSide::Above, &pol()),
            Err(EvalError::DomainViolation(_))
        ));
        let left = pv(&[c(-1.0, 0.5), c(1.0, 1.0)]);
        assert!(matches!(
            multiple_sine_integral(2, c(0.3, 0.0), &left, IndentSide::Above, &pol()),
            Err(EvalError::DomainViolation(_))
        ));
    }
}
