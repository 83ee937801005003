//! Multiple elliptic gamma functions `G_r(z|τ)`, with the theta function
//! `θ0(z,τ) = G_0` and the elliptic gamma `Γ(z,τ,σ) = G_1` as the lowest
//! members.
//!
//! `G_r` is a ratio of two q-shifted factorials in `x = e^{2πiz}`:
//!
//! ```text
//! G_r(z|τ) = { (x⁻¹; q⁻¹)∞ }^{(-1)^{r+1}} { (x; q)∞ }^{(-1)^r}
//! ```
//!
//! and equivalently `(x⁻¹ q_0⋯q_r; q)∞ { (x;q)∞ }^{(-1)^r}`; both routes are
//! implemented, the first as the default and the second as a cross-check.
//! Evaluation near the zero/pole lattice is refused (within the policy's
//! lattice guard) rather than returning huge or vanishing values silently;
//! identity sweeps resample instead.

use num_complex::Complex64;

use crate::cplx::exp_2pi_i;
use crate::identities::{sample_map, IdentityReport};
use crate::policy::{Estimate, EvalError, TruncationPolicy};
use crate::qseries::{self, TauVector, Window};

/// A `G_r` evaluation: value, error bound, and the inputs it belongs to.
#[derive(Clone, Debug)]
pub struct GammaEvaluation {
    pub value: Complex64,
    pub error_bound: f64,
    pub r: usize,
    pub z: Complex64,
    pub tau: TauVector,
}

/// Core evaluator on a bare modulus slice.  The empty slice is the `r = -1`
/// member `-x⁻¹` that the shift equation produces at `r = 0`; it falls out
/// of the same two-factorial formula.
pub(crate) fn g_value(
    z: Complex64,
    taus: &[Complex64],
    policy: &TruncationPolicy,
) -> Result<Estimate, EvalError> {
    let x = exp_2pi_i(z);
    let x_inv = exp_2pi_i(-z);
    let q: Vec<Complex64> = taus.iter().map(|t| exp_2pi_i(*t)).collect();
    let q_inv: Vec<Complex64> = taus.iter().map(|t| exp_2pi_i(-t)).collect();
    // exponents (-1)^{r+1} and (-1)^r with r = len - 1
    let sign_plain: i32 = if taus.len() % 2 == 1 { 1 } else { -1 };
    let sign_inv = -sign_plain;

    let a = qseries::log_q_shifted_factorial(x_inv, &q_inv, policy)
        .map_err(|e| retag_lattice(e, sign_inv))?;
    let b = qseries::log_q_shifted_factorial(x, &q, policy)
        .map_err(|e| retag_lattice(e, sign_plain))?;
    let log = Estimate::new(
        a.value * sign_inv as f64 + b.value * sign_plain as f64,
        a.bound + b.bound,
    );
    Ok(Estimate::exp_of_log(log))
}

/// Same value through the single-inversion-free route
/// `(x⁻¹ q_0⋯q_r; q)∞ {(x;q)∞}^{(-1)^r}`.
pub(crate) fn g_value_alt(
    z: Complex64,
    taus: &[Complex64],
    policy: &TruncationPolicy,
) -> Result<Estimate, EvalError> {
    let tau_sum: Complex64 = taus.iter().sum();
    let x = exp_2pi_i(z);
    let shifted = exp_2pi_i(tau_sum - z);
    let q: Vec<Complex64> = taus.iter().map(|t| exp_2pi_i(*t)).collect();
    let sign_plain: i32 = if taus.len() % 2 == 1 { 1 } else { -1 };

    let a =
        qseries::log_q_shifted_factorial(shifted, &q, policy).map_err(|e| retag_lattice(e, 1))?;
    let b = qseries::log_q_shifted_factorial(x, &q, policy)
        .map_err(|e| retag_lattice(e, sign_plain))?;
    let log = Estimate::new(a.value + b.value * sign_plain as f64, a.bound + b.bound);
    Ok(Estimate::exp_of_log(log))
}

/// A zero of a factorial raised to a negative exponent is a pole of `G_r`.
fn retag_lattice(e: EvalError, exponent: i32) -> EvalError {
    match e {
        EvalError::PoleProximity { is_zero, msg } => EvalError::PoleProximity {
            is_zero: is_zero == (exponent > 0),
            msg,
        },
        other => other,
    }
}

fn check_shape(r: usize, tau: &TauVector) -> Result<(), EvalError> {
    if tau.len() != r + 1 {
        return Err(EvalError::InvalidParameter(format!(
            "modulus vector has {} entries, expected r + 1 = {}",
            tau.len(),
            r + 1
        )));
    }
    Ok(())
}

/// Refuse evaluation within the lattice guard of a documented zero or pole.
/// The direct distance check only applies when every modulus is in the
/// upper half-plane (where the lattice shape is known in closed form); for
/// mixed signs the factor-level guard inside the q-series layer covers it.
fn lattice_guard(
    r: usize,
    z: Complex64,
    tau: &TauVector,
    policy: &TruncationPolicy,
) -> Result<(), EvalError> {
    if tau.entries().iter().any(|t| t.im <= 0.0) {
        return Ok(());
    }
    let pad = 0.6;
    let window = Window {
        re_min: z.re - pad,
        re_max: z.re + pad,
        im_min: z.im - pad,
        im_max: z.im + pad,
    };
    let points = match qseries::zero_pole_lattice(r, tau, window) {
        Ok(p) => p,
        // oversized windows can only happen for extreme inputs; the
        // factor-level guard still protects the evaluation
        Err(_) => return Ok(()),
    };
    for p in points {
        if (p.z - z).norm() < policy.lattice_guard {
            return Err(EvalError::PoleProximity {
                is_zero: p.order > 0,
                msg: format!(
                    "z = {z} within {:.1e} of the lattice point {} (order {})",
                    policy.lattice_guard, p.z, p.order
                ),
            });
        }
    }
    Ok(())
}

/// `G_r(z|τ)` through the default two-factorial route.
pub fn multiple_elliptic_gamma(
    r: usize,
    z: Complex64,
    tau: &TauVector,
    policy: &TruncationPolicy,
) -> Result<GammaEvaluation, EvalError> {
    check_shape(r, tau)?;
    lattice_guard(r, z, tau, policy)?;
    let v = g_value(z, tau.entries(), policy)?;
    Ok(GammaEvaluation {
        value: v.value,
        error_bound: v.bound,
        r,
        z,
        tau: tau.clone(),
    })
}

/// `G_r(z|τ)` through the shifted-argument route; cross-check for
/// [`multiple_elliptic_gamma`].
pub fn multiple_elliptic_gamma_alt(
    r: usize,
    z: Complex64,
    tau: &TauVector,
    policy: &TruncationPolicy,
) -> Result<GammaEvaluation, EvalError> {
    check_shape(r, tau)?;
    lattice_guard(r, z, tau, policy)?;
    let v = g_value_alt(z, tau.entries(), policy)?;
    Ok(GammaEvaluation {
        value: v.value,
        error_bound: v.bound,
        r,
        z,
        tau: tau.clone(),
    })
}

/// The theta function
/// `θ0(z,τ) = ∏_j (1-e^{2πi((j+1)τ-z)})(1-e^{2πi(jτ+z)}) = G_0(z|τ)`,
/// `Im τ > 0`.
pub fn theta0(
    z: Complex64,
    tau: Complex64,
    policy: &TruncationPolicy,
) -> Result<GammaEvaluation, EvalError> {
    if !(tau.im > 0.0) {
        return Err(EvalError::DomainViolation(
            "theta0 requires Im tau > 0".into(),
        ));
    }
    multiple_elliptic_gamma(0, z, &TauVector::new(vec![tau])?, policy)
}

/// The elliptic gamma function `Γ(z,τ,σ) = G_1(z|τ,σ)`.  Nonreal moduli of
/// either sign are accepted; the mixed-modulus reduction handles them.
pub fn elliptic_gamma(
    z: Complex64,
    tau: Complex64,
    sigma: Complex64,
    policy: &TruncationPolicy,
) -> Result<GammaEvaluation, EvalError> {
    multiple_elliptic_gamma(1, z, &TauVector::new(vec![tau, sigma])?, policy)
}

/// Which functional equation of `G_r` to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GIdentity {
    /// `G_r(z+τ_j|τ) = G_{r-1}(z|τ⁻(j)) G_r(z|τ)`
    ShiftPeriod { j: usize },
    /// `G_r(z|τ) = 1 / G_r(z-τ_j|τ[j])`
    Inversion { j: usize },
    /// `G_r(-z|-τ) = 1 / G_r(z|τ)`
    Negation,
    /// `G_r(z|τ) G_r(z|τ[j]) = 1 / G_{r-1}(z|τ⁻(j))`
    Pair { j: usize },
}

impl GIdentity {
    pub fn id(&self) -> &'static str {
        match self {
            GIdentity::ShiftPeriod { .. } => "g-shift",
            GIdentity::Inversion { .. } => "g-inversion",
            GIdentity::Negation => "g-negation",
            GIdentity::Pair { .. } => "g-pair",
        }
    }
}

/// Check one functional equation of `G_r` at a sample point, producing a
/// report.  Inadmissible samples (lattice hits, guard violations) surface
/// as errors, not failed reports.
pub fn check_g_functional_equation(
    kind: GIdentity,
    r: usize,
    z: Complex64,
    tau: &TauVector,
    policy: &TruncationPolicy,
) -> Result<IdentityReport, EvalError> {
    check_shape(r, tau)?;
    let taus = tau.entries();
    let bound_j = |j: usize| -> Result<(), EvalError> {
        if j > r {
            return Err(EvalError::InvalidParameter(format!(
                "modulus index {j} out of range for r = {r}"
            )));
        }
        Ok(())
    };
    let (lhs, rhs) = match kind {
        GIdentity::ShiftPeriod { j } => {
            bound_j(j)?;
            let lhs = g_value(z + taus[j], taus, policy)?;
            let removed: Vec<Complex64> = remove_at(taus, j);
            let rhs = g_value(z, &removed, policy)?.mul(g_value(z, taus, policy)?);
            (lhs, rhs)
        }
        GIdentity::Inversion { j } => {
            bound_j(j)?;
            let lhs = g_value(z, taus, policy)?;
            let flipped = tau.flipped(j);
            let rhs = g_value(z - taus[j], flipped.entries(), policy)?.recip();
            (lhs, rhs)
        }
        GIdentity::Negation => {
            let neg = tau.negated();
            let lhs = g_value(-z, neg.entries(), policy)?;
            let rhs = g_value(z, taus, policy)?.recip();
            (lhs, rhs)
        }
        GIdentity::Pair { j } => {
            bound_j(j)?;
            let flipped = tau.flipped(j);
            let lhs = g_value(z, taus, policy)?.mul(g_value(z, flipped.entries(), policy)?);
            let removed: Vec<Complex64> = remove_at(taus, j);
            let rhs = g_value(z, &removed, policy)?.recip();
            (lhs, rhs)
        }
    };
    let mut sample = sample_map([("z", z.into()), ("r", (r as i64).into())]);
    for (j, t) in taus.iter().enumerate() {
        sample.insert(format!("tau{j}"), (*t).into());
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

fn remove_at(taus: &[Complex64], j: usize) -> Vec<Complex64> {
    let mut v = taus.to_vec();
    v.remove(j);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cplx::two_pi_i;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pol() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    fn tv(entries: &[Complex64]) -> TauVector {
        TauVector::new(entries.to_vec()).unwrap()
    }

    /// Direct truncated product for θ0, the independent oracle.
    fn theta0_oracle(z: Complex64, tau: Complex64, terms: usize) -> Complex64 {
        let mut p = Complex64::ONE;
        for j in 0..terms {
            let jf = j as f64;
            p *= Complex64::ONE - exp_2pi_i((jf + 1.0) * tau - z);
            p *= Complex64::ONE - exp_2pi_i(jf * tau + z);
        }
        p
    }

    /// Direct truncated double product for Γ(z,τ,σ).
    fn elliptic_gamma_oracle(
        z: Complex64,
        tau: Complex64,
        sigma: Complex64,
        terms: usize,
    ) -> Complex64 {
        let mut p = Complex64::ONE;
        for j in 0..terms {
            for k in 0..terms {
                let (jf, kf) = (j as f64, k as f64);
                let num = Complex64::ONE - exp_2pi_i((jf + 1.0) * tau + (kf + 1.0) * sigma - z);
                let den = Complex64::ONE - exp_2pi_i(jf * tau + kf * sigma + z);
                p *= num / den;
            }
        }
        p
    }

    #[test]
    fn theta0_matches_truncated_product() {
        let (z, tau) = (c(0.25, 0.5), c(0.0, 1.0));
        let v = theta0(z, tau, &pol()).unwrap();
        let oracle = theta0_oracle(z, tau, 50);
        assert!((v.value - oracle).norm() < 1e-12, "{} vs {oracle}", v.value);
    }

    #[test]
    fn theta0_is_g0() {
        let (z, tau) = (c(0.2, 0.1), c(0.0, 1.0));
        let a = theta0(z, tau, &pol()).unwrap().value;
        let b = multiple_elliptic_gamma(0, z, &tv(&[tau]), &pol())
            .unwrap()
            .value;
        assert_eq!(a, b);
    }

    #[test]
    fn theta0_lattice_hit_is_flagged_zero() {
        match theta0(c(0.0, 0.0), c(0.0, 1.0), &pol()) {
            Err(EvalError::PoleProximity { is_zero, .. }) => assert!(is_zero),
            other => panic!("expected a zero-lattice flag, got {other:?}"),
        }
    }

    #[test]
    fn theta0_quasi_periodicity() {
        // θ0(z+1,τ) = θ0(z,τ) and θ0(z+τ,τ) = e^{-2πi(z-1/2)} θ0(z,τ)
        let (z, tau) = (c(0.3, 0.2), c(0.0, 1.0));
        let base = theta0(z, tau, &pol()).unwrap().value;
        let shift1 = theta0(z + 1.0, tau, &pol()).unwrap().value;
        assert!((shift1 - base).norm() < 1e-12 * base.norm());
        let shift_tau = theta0(z + tau, tau, &pol()).unwrap().value;
        let factor = (-two_pi_i() * (z - 0.5)).exp();
        assert!(
            (shift_tau - factor * base).norm() < 1e-11 * shift_tau.norm(),
            "{shift_tau} vs {}",
            factor * base
        );
    }

    #[test]
    fn gamma_symmetric_point_is_one() {
        let (tau, sigma) = (c(0.0, 1.0), c(0.3, 0.8));
        let v = elliptic_gamma((tau + sigma) / 2.0, tau, sigma, &pol()).unwrap();
        assert!((v.value - Complex64::ONE).norm() < 1e-12);
    }

    #[test]
    fn gamma_difference_equation() {
        // Γ(z+τ,τ,σ) = θ0(z,σ) Γ(z,τ,σ)
        let (z, tau, sigma) = (c(0.3, 0.4), c(0.0, 1.0), c(0.0, 2.0));
        let lhs = elliptic_gamma(z + tau, tau, sigma, &pol()).unwrap().value;
        let rhs = theta0(z, sigma, &pol()).unwrap().value
            * elliptic_gamma(z, tau, sigma, &pol()).unwrap().value;
        assert!((lhs - rhs).norm() < 1e-10 * lhs.norm(), "{lhs} vs {rhs}");
    }

    #[test]
    fn gamma_matches_double_product_oracle() {
        let (z, tau, sigma) = (c(0.3, 0.4), c(0.0, 1.0), c(0.0, 2.0));
        let v = elliptic_gamma(z, tau, sigma, &pol()).unwrap().value;
        let oracle = elliptic_gamma_oracle(z, tau, sigma, 40);
        assert!((v - oracle).norm() < 1e-10, "{v} vs {oracle}");
    }

    #[test]
    fn g_periodicity_in_z() {
        for (r, taus) in [
            (0usize, vec![c(0.0, 1.0)]),
            (1, vec![c(0.0, 1.0), c(0.3, 0.8)]),
            (2, vec![c(0.0, 1.0), c(0.3, 0.8), c(-0.2, 0.6)]),
        ] {
            let z = c(0.21, 0.37);
            let tau = tv(&taus);
            let a = multiple_elliptic_gamma(r, z, &tau, &pol()).unwrap().value;
            let b = multiple_elliptic_gamma(r, z + 1.0, &tau, &pol())
                .unwrap()
                .value;
            assert!((a - b).norm() < 1e-12 * a.norm().max(1.0), "r={r}");
        }
    }

    #[test]
    fn default_and_alt_routes_agree() {
        let cases: Vec<(usize, Vec<Complex64>)> = vec![
            (0, vec![c(0.0, 1.0)]),
            (1, vec![c(0.0, 1.0), c(0.3, 0.8)]),
            (1, vec![c(0.0, 1.0), c(0.3, -0.8)]), // mixed half-planes
            (2, vec![c(0.0, 1.0), c(0.3, 0.8), c(-0.2, 0.6)]),
        ];
        for (r, taus) in cases {
            let z = c(0.17, 0.29);
            let tau = tv(&taus);
            let a = multiple_elliptic_gamma(r, z, &tau, &pol()).unwrap().value;
            let b = multiple_elliptic_gamma_alt(r, z, &tau, &pol())
                .unwrap()
                .value;
            assert!(
                (a - b).norm() < 1e-10 * a.norm().max(1.0),
                "r={r}: {a} vs {b}"
            );
        }
    }

    #[test]
    fn no_zeros_in_the_open_strip() {
        // Im τ_j > 0 and 0 < Im z < Im|τ|: finite and nonzero
        let tau = tv(&[c(0.0, 1.0), c(0.3, 0.8)]);
        for k in 1..8 {
            let z = c(0.37, 1.8 * k as f64 / 8.0);
            let v = multiple_elliptic_gamma(1, z, &tau, &pol()).unwrap().value;
            assert!(v.is_finite());
            assert!(v.norm() > 1e-8);
        }
    }

    #[test]
    fn functional_equations_at_samples() {
        let tau = tv(&[c(0.0, 1.0), c(0.3, 0.8)]);
        let z = c(0.23, 0.31);
        for kind in [
            GIdentity::ShiftPeriod { j: 0 },
            GIdentity::ShiftPeriod { j: 1 },
            GIdentity::Inversion { j: 0 },
            GIdentity::Negation,
            GIdentity::Pair { j: 1 },
        ] {
            let rep = check_g_functional_equation(kind, 1, z, &tau, &pol()).unwrap();
            assert!(
                rep.pass,
                "{:?} failed with residual {:.3e}",
                kind, rep.rel_residual
            );
            assert!(rep.rel_residual < 1e-10);
        }
    }

    #[test]
    fn shift_equation_holds_at_r0() {
        // at r = 0 the removed-modulus factor degenerates to -x⁻¹, matching
        // the classical quasi-periodicity of θ0
        let tau = tv(&[c(0.0, 1.0)]);
        let rep = check_g_functional_equation(
            GIdentity::ShiftPeriod { j: 0 },
            0,
            c(0.3, 0.2),
            &tau,
            &pol(),
        )
        .unwrap();
        assert!(rep.pass, "residual {:.3e}", rep.rel_residual);
    }

    #[test]
    fn degenerate_sample_is_inadmissible_not_failed() {
        // z on the lattice: the check reports an error instead of pass=false
        let tau = tv(&[c(0.0, 1.0)]);
        let res = check_g_functional_equation(GIdentity::Negation, 0, c(0.0, 0.0), &tau, &pol());
        assert!(matches!(res, Err(EvalError::PoleProximity { .. })));
    }
}
