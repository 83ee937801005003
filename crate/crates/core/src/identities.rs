//! Executable identity checks: the modular theorems and corollaries, the
//! summation formulas, and the sine-product representations of `G_r`, each
//! run by computing both sides through independent representations and
//! comparing residuals.
//!
//! Checks take explicit sample points and return an [`IdentityReport`];
//! [`sweep`] draws admissible samples by seeded rejection sampling, so a
//! sweep is reproducible from its seed.  Inadmissible samples surface as
//! errors, never as failed reports.
//!
//! The modular checks accept an optional [`Tamper`] that perturbs one
//! coefficient of the Bernoulli prefactor polynomial.  The negative-control
//! suite uses it to demonstrate the checks are sensitive rather than
//! vacuous: a 1e-4 nudge on any prefactor coefficient must fail every
//! sample.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::bernoulli::{self, poly, PeriodVector};
use crate::cplx::pi_i;
use crate::gammafuncs::{self, GIdentity};
use crate::multisine::{self, ProductVariant, SineRelation};
use crate::policy::{Estimate, EvalError, TruncationPolicy};
use crate::qseries::TauVector;
use crate::quadrature;

// ---------------------------------------------------------------------------
// Reports

/// A parameter recorded in an identity report.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SampleValue {
    Complex([f64; 2]),
    Int(i64),
    Text(String),
}

impl From<Complex64> for SampleValue {
    fn from(z: Complex64) -> Self {
        SampleValue::Complex([z.re, z.im])
    }
}

impl From<i64> for SampleValue {
    fn from(n: i64) -> Self {
        SampleValue::Int(n)
    }
}

/// Outcome of a single identity check: both sides, residuals, verdict, and
/// everything needed to reproduce the evaluation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity_id: String,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub pass: bool,
    /// Threshold the relative residual was compared against.
    pub threshold: f64,
    /// The sampled parameters this check ran on.
    pub sample: BTreeMap<String, SampleValue>,
    /// Auxiliary scalars (sub-check residuals, truncation-depth decay).
    pub extras: BTreeMap<String, f64>,
    /// RNG seed when the sample was drawn by a sweep.
    pub seed: Option<u64>,
    pub policy: TruncationPolicy,
}

/// `|lhs - rhs| / max(|lhs|, |rhs|, 1)`: stable when the sides are huge
/// (exponential prefactors) or near zero.
pub fn relative_residual(lhs: Complex64, rhs: Complex64) -> f64 {
    (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1.0)
}

impl IdentityReport {
    pub fn from_sides(
        identity_id: impl Into<String>,
        lhs: Complex64,
        rhs: Complex64,
        threshold: f64,
        sample: BTreeMap<String, SampleValue>,
        policy: &TruncationPolicy,
    ) -> Self {
        let abs_residual = (lhs - rhs).norm();
        let rel_residual = relative_residual(lhs, rhs);
        IdentityReport {
            identity_id: identity_id.into(),
            lhs,
            rhs,
            abs_residual,
            rel_residual,
            pass: rel_residual < threshold,
            threshold,
            sample,
            extras: BTreeMap::new(),
            seed: None,
            policy: policy.clone(),
        }
    }

    /// Fold an additional side pair into the verdict under a label; the
    /// headline lhs/rhs stay, the worst relative residual wins.
    fn fold(&mut self, label: &str, lhs: Complex64, rhs: Complex64) {
        let rel = relative_residual(lhs, rhs);
        self.extras.insert(label.to_string(), rel);
        if rel > self.rel_residual {
            self.rel_residual = rel;
            self.abs_residual = (lhs - rhs).norm();
        }
        self.pass = self.pass && rel < self.threshold;
    }
}

/// Convenience constructor for sample maps.
pub fn sample_map<const N: usize>(
    entries: [(&str, SampleValue); N],
) -> BTreeMap<String, SampleValue> {
    entries
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}

// ---------------------------------------------------------------------------
// Tampering (negative controls)

/// A deliberate perturbation of one coefficient of an exponential-prefactor
/// polynomial.  Exists so the test suite can prove the identity checks fail
/// when the prefactor is wrong.
#[derive(Clone, Copy, Debug)]
pub struct Tamper {
    /// Ascending-degree index of the coefficient to perturb.
    pub coeff_index: usize,
    /// Absolute perturbation added to that coefficient.
    pub delta: f64,
}

fn bernoulli_exponent(
    r: usize,
    n: usize,
    z: Complex64,
    omega: &PeriodVector,
    tamper: Option<Tamper>,
) -> Result<Complex64, EvalError> {
    let mut p = bernoulli::multiple_bernoulli_poly(r, n, omega)?;
    if let Some(t) = tamper {
        if t.coeff_index >= p.coeffs.len() {
            return Err(EvalError::InvalidParameter(format!(
                "tamper index {} out of range for degree {}",
                t.coeff_index, n
            )));
        }
        p.coeffs[t.coeff_index] += t.delta;
    }
    Ok(p.eval(z))
}

fn factorial(n: usize) -> f64 {
    (2..=n).fold(1.0, |a, k| a * k as f64)
}

// ---------------------------------------------------------------------------
// The modular product identity (two sine representations compared)

/// For `r ≥ 2` and all period ratios off the real axis,
///
/// ```text
/// ∏_{k=1}^r G_{r-2}( z/ω_k | (ω_1/ω_k, …, ω̌_k/ω_k, …, ω_r/ω_k) )
///     = exp( -2πi/r! · B_rr(z|ω) ).
/// ```
pub fn check_modular_product(
    r: usize,
    z: Complex64,
    omega: &PeriodVector,
    policy: &TruncationPolicy,
    tamper: Option<Tamper>,
) -> Result<IdentityReport, EvalError> {
    if r < 2 || omega.len() != r {
        return Err(EvalError::InvalidParameter(format!(
            "modular product needs r >= 2 periods, got r = {r}, len = {}",
            omega.len()
        )));
    }
    let w = omega.entries();
    for j in 0..r {
        for k in 0..r {
            if j != k && (w[j] / w[k]).im == 0.0 {
                return Err(EvalError::RatioOnRealAxis(format!(
                    "Im(omega_{j}/omega_{k}) = 0"
                )));
            }
        }
    }
    let mut lhs = Estimate::exact(Complex64::ONE);
    for k in 0..r {
        let ratios: Vec<Complex64> = (0..r).filter(|j| *j != k).map(|j| w[j] / w[k]).collect();
        let g = gammafuncs::g_value(z / w[k], &ratios, policy)?;
        lhs = lhs.mul(g);
    }
    let b = bernoulli_exponent(r, r, z, omega, tamper)?;
    let rhs = (-2.0 * pi_i() / factorial(r) * b).exp();

    let mut sample = sample_map([("z", z.into()), ("r", (r as i64).into())]);
    for (j, wj) in w.iter().enumerate() {
        sample.insert(format!("omega{}", j + 1), (*wj).into());
    }
    Ok(IdentityReport::from_sides(
        "modular-product",
        lhs.value,
        rhs,
        policy.series_threshold,
        sample,
        policy,
    ))
}

// ---------------------------------------------------------------------------
// The modular transformation of G_r

/// Sign variant of the modular transformation: which unit gets appended to
/// the modulus vector inside the Bernoulli prefactor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TransformSign {
    MinusOne,
    PlusOne,
}

/// For nonreal moduli with nonreal pairwise ratios,
///
/// ```text
/// G_r(z|τ) = exp( +2πi/(r+2)! · B_{r+2,r+2}(z|(τ,-1)) )
///            ∏_k G_r( z/τ_k | (τ_0/τ_k, …, τ̌_k, …, τ_r/τ_k, -1/τ_k) )
/// ```
///
/// in the `MinusOne` variant, and with negated ratios, negated argument and
/// the `(τ,+1)` prefactor in the `PlusOne` variant.
pub fn check_modular_transform(
    r: usize,
    z: Complex64,
    tau: &TauVector,
    sign: TransformSign,
    policy: &TruncationPolicy,
    tamper: Option<Tamper>,
) -> Result<IdentityReport, EvalError> {
    if tau.len() != r + 1 {
        return Err(EvalError::InvalidParameter(format!(
            "modulus vector has {} entries, expected r + 1 = {}",
            tau.len(),
            r + 1
        )));
    }
    let t = tau.entries();
    for j in 0..t.len() {
        for k in 0..t.len() {
            if j != k && (t[j] / t[k]).im == 0.0 {
                return Err(EvalError::RatioOnRealAxis(format!(
                    "Im(tau_{j}/tau_{k}) = 0"
                )));
            }
        }
    }
    let lhs = gammafuncs::g_value(z, t, policy)?;
    let rhs = modular_transform_rhs(r, z, tau, sign, policy, tamper)?;

    let mut sample = sample_map([("z", z.into()), ("r", (r as i64).into())]);
    for (j, tj) in t.iter().enumerate() {
        sample.insert(format!("tau{j}"), (*tj).into());
    }
    sample.insert(
        "sign".into(),
        SampleValue::Text(
            match sign {
                TransformSign::MinusOne => "minus",
                TransformSign::PlusOne => "plus",
            }
            .into(),
        ),
    );
    Ok(IdentityReport::from_sides(
        "modular-transform",
        lhs.value,
        rhs.value,
        policy.series_threshold,
        sample,
        policy,
    ))
}

/// The transformed-side product of the modular transformation, reused by
/// the explicit `G_2` corollary consistency check.
fn modular_transform_rhs(
    r: usize,
    z: Complex64,
    tau: &TauVector,
    sign: TransformSign,
    policy: &TruncationPolicy,
    tamper: Option<Tamper>,
) -> Result<Estimate, EvalError> {
    let t = tau.entries();
    let (unit, arg_sign) = match sign {
        TransformSign::MinusOne => (Complex64::new(-1.0, 0.0), 1.0),
        TransformSign::PlusOne => (Complex64::new(1.0, 0.0), -1.0),
    };
    let mut periods = t.to_vec();
    periods.push(unit);
    let b = bernoulli_exponent(r + 2, r + 2, z, &PeriodVector::new(periods)?, tamper)?;
    let pre_sign = match sign {
        TransformSign::MinusOne => 1.0,
        TransformSign::PlusOne => -1.0,
    };
    let prefactor = (pre_sign * 2.0 * pi_i() / factorial(r + 2) * b).exp();
    let mut rhs = Estimate::exact(prefactor);
    for k in 0..t.len() {
        let mut moduli: Vec<Complex64> = (0..t.len())
            .filter(|j| *j != k)
            .map(|j| arg_sign * t[j] / t[k])
            .collect();
        moduli.push(-1.0 / t[k]);
        let g = gammafuncs::g_value(arg_sign * z / t[k], &moduli, policy)?;
        rhs = rhs.mul(g);
    }
    Ok(rhs)
}

// ---------------------------------------------------------------------------
// Jacobi's theta transformation

/// Both printed forms of the theta transformation, plus the coefficient-wise
/// match between the classical exponent polynomial and `-B_22(z|τ,-1)`:
///
/// ```text
/// θ0(z,τ) = exp( πi B_22(z|τ,-1) ) θ0(z/τ, -1/τ)
///         = exp( -πi B_22(z|τ,+1) ) θ0(-z/τ, -1/τ).
/// ```
pub fn check_jacobi(
    z: Complex64,
    tau: Complex64,
    policy: &TruncationPolicy,
    tamper: Option<Tamper>,
) -> Result<IdentityReport, EvalError> {
    if !(tau.im > 0.0) {
        return Err(EvalError::DomainViolation("need Im tau > 0".into()));
    }
    let minus_one = Complex64::new(-1.0, 0.0);
    let plus_one = Complex64::new(1.0, 0.0);

    let lhs = gammafuncs::theta0(z, tau, policy)?.value;
    let b_minus = bernoulli_exponent(2, 2, z, &PeriodVector::new(vec![tau, minus_one])?, tamper)?;
    let rhs_a =
        (pi_i() * b_minus).exp() * gammafuncs::g_value(z / tau, &[-1.0 / tau], policy)?.value;

    let mut report = IdentityReport::from_sides(
        "jacobi",
        lhs,
        rhs_a,
        policy.series_threshold,
        sample_map([("z", z.into()), ("tau", tau.into())]),
        policy,
    );

    // second printed form
    let b_plus = bernoulli_exponent(2, 2, z, &PeriodVector::new(vec![tau, plus_one])?, None)?;
    let rhs_b =
        (-pi_i() * b_plus).exp() * gammafuncs::g_value(-z / tau, &[-1.0 / tau], policy)?.value;
    report.fold("second_form", lhs, rhs_b);

    // the classical exponent polynomial equals -B_22(z|τ,-1) coefficient-wise
    let classical = [
        tau / 6.0 + 1.0 / (6.0 * tau) - 0.5,
        1.0 / tau - 1.0,
        1.0 / tau,
    ];
    let b22 = bernoulli::multiple_bernoulli_poly(2, 2, &PeriodVector::new(vec![tau, minus_one])?)?;
    let negated = poly::scaled(&b22.coeffs, Complex64::new(-1.0, 0.0));
    let dist = poly::rel_distance(&classical, &negated);
    report.extras.insert("exponent_poly_distance".into(), dist);
    report.pass = report.pass && dist < 1e-12;
    Ok(report)
}

// ---------------------------------------------------------------------------
// The Felder–Varchenko transformation of the elliptic gamma function

/// The three-term transformation
///
/// ```text
/// Γ(z/σ, τ/σ, -1/σ) = e^{πi Q(z;τ,σ)} Γ((z-σ)/τ, -σ/τ, -1/τ) Γ(z,τ,σ)
/// ```
///
/// with the cubic `Q` from [`bernoulli::q_cubic`], plus both corollary
/// rearrangements through `B_33` and the `Q = -B_33(z|τ,σ,-1)/3`
/// consistency.  Requires `Im τ, Im σ, Im(τ/σ) > 0`.
pub fn check_felder_varchenko(
    z: Complex64,
    tau: Complex64,
    sigma: Complex64,
    policy: &TruncationPolicy,
    tamper: Option<Tamper>,
) -> Result<IdentityReport, EvalError> {
    if !(tau.im > 0.0 && sigma.im > 0.0) {
        return Err(EvalError::DomainViolation(
            "need Im tau, Im sigma > 0".into(),
        ));
    }
    if !((tau / sigma).im > 0.0) {
        return Err(EvalError::DomainViolation(
            "need Im(tau/sigma) > 0 for this sign pattern".into(),
        ));
    }
    let g = |zz: Complex64, m0: Complex64, m1: Complex64| -> Result<Complex64, EvalError> {
        Ok(gammafuncs::g_value(zz, &[m0, m1], policy)?.value)
    };

    let lhs = g(z / sigma, tau / sigma, -1.0 / sigma)?;
    let mut q = bernoulli::q_cubic_coeffs(tau, sigma)?.to_vec();
    if let Some(t) = tamper {
        if t.coeff_index >= q.len() {
            return Err(EvalError::InvalidParameter(
                "tamper index out of range for the cubic".into(),
            ));
        }
        q[t.coeff_index] += t.delta;
    }
    let q_at_z = poly::eval(&q, z);
    let rhs = (pi_i() * q_at_z).exp()
        * g((z - sigma) / tau, -sigma / tau, -1.0 / tau)?
        * g(z, tau, sigma)?;

    let mut report = IdentityReport::from_sides(
        "felder-varchenko",
        lhs,
        rhs,
        policy.series_threshold,
        sample_map([
            ("z", z.into()),
            ("tau", tau.into()),
            ("sigma", sigma.into()),
        ]),
        policy,
    );

    // corollary rearrangements
    let minus_one = Complex64::new(-1.0, 0.0);
    let plus_one = Complex64::new(1.0, 0.0);
    let gamma_z = g(z, tau, sigma)?;
    let b_minus = bernoulli::eval_multiple_bernoulli(
        3,
        3,
        z,
        &PeriodVector::new(vec![tau, sigma, minus_one])?,
    )?;
    let first = (pi_i() / 3.0 * b_minus).exp() * g(z / sigma, tau / sigma, -1.0 / sigma)?
        / g((z - sigma) / tau, -sigma / tau, -1.0 / tau)?;
    report.fold("corollary_first_form", gamma_z, first);

    let b_plus = bernoulli::eval_multiple_bernoulli(
        3,
        3,
        z,
        &PeriodVector::new(vec![tau, sigma, plus_one])?,
    )?;
    let second = (-pi_i() / 3.0 * b_plus).exp() * g(-z / tau, -sigma / tau, -1.0 / tau)?
        / g((tau - z) / sigma, tau / sigma, -1.0 / sigma)?;
    report.fold("corollary_second_form", gamma_z, second);

    // Q(z;τ,σ) = -B_33(z|τ,σ,-1)/3, untampered route
    let q_clean = bernoulli::q_cubic(z, tau, sigma)?;
    report.fold("cubic_vs_bernoulli", q_clean, -b_minus / 3.0);
    Ok(report)
}

// ---------------------------------------------------------------------------
// The explicit G_2 corollary

/// The printed three-factor transformation of `G_2(z|τ_0,τ_1,τ_2)` in both
/// sign variants, with all transformed moduli in the upper half-plane.
/// Requires `Im τ_j > 0` and `Im(τ_0/τ_1), Im(τ_0/τ_2), Im(τ_1/τ_2) > 0`.
pub fn check_g2_modular(
    z: Complex64,
    tau: &TauVector,
    sign: TransformSign,
    policy: &TruncationPolicy,
    tamper: Option<Tamper>,
) -> Result<IdentityReport, EvalError> {
    if tau.len() != 3 {
        return Err(EvalError::InvalidParameter(
            "the explicit corollary is for exactly three moduli".into(),
        ));
    }
    let t = tau.entries();
    if t.iter().any(|tj| tj.im <= 0.0) {
        return Err(EvalError::DomainViolation("need Im tau_j > 0".into()));
    }
    for (a, b) in [(0usize, 1usize), (0, 2), (1, 2)] {
        if !((t[a] / t[b]).im > 0.0) {
            return Err(EvalError::DomainViolation(format!(
                "need Im(tau_{a}/tau_{b}) > 0"
            )));
        }
    }
    let (t0, t1, t2) = (t[0], t[1], t[2]);
    let g2 = |zz: Complex64, m: [Complex64; 3]| -> Result<Complex64, EvalError> {
        Ok(gammafuncs::g_value(zz, &m, policy)?.value)
    };
    let lhs = g2(z, [t0, t1, t2])?;

    let (unit, pre_sign) = match sign {
        TransformSign::MinusOne => (Complex64::new(-1.0, 0.0), 1.0),
        TransformSign::PlusOne => (Complex64::new(1.0, 0.0), -1.0),
    };
    let b44 = bernoulli_exponent(4, 4, z, &PeriodVector::new(vec![t0, t1, t2, unit])?, tamper)?;
    let prefactor = (pre_sign * pi_i() / 12.0 * b44).exp();
    let rhs = match sign {
        TransformSign::MinusOne => {
            prefactor
                * g2((z - t1 - t2) / t0, [-t1 / t0, -t2 / t0, -1.0 / t0])?
                * g2(z / t2, [t0 / t2, t1 / t2, -1.0 / t2])?
                / g2((z - t2) / t1, [t0 / t1, -t2 / t1, -1.0 / t1])?
        }
        TransformSign::PlusOne => {
            prefactor
                * g2(-z / t0, [-t1 / t0, -t2 / t0, -1.0 / t0])?
                * g2((t0 + t1 - z) / t2, [t0 / t2, t1 / t2, -1.0 / t2])?
                / g2((t0 - z) / t1, [t0 / t1, -t2 / t1, -1.0 / t1])?
        }
    };

    let mut report = IdentityReport::from_sides(
        "g2-modular",
        lhs,
        rhs,
        policy.series_threshold,
        sample_map([
            ("z", z.into()),
            ("tau0", t0.into()),
            ("tau1", t1.into()),
            ("tau2", t2.into()),
        ]),
        policy,
    );

    // the corollary is the generic transformation after half-period shifts;
    // the two right-hand sides must agree
    let generic = modular_transform_rhs(2, z, tau, sign, policy, None)?;
    report.fold("matches_generic_transform", rhs, generic.value);
    Ok(report)
}

// ---------------------------------------------------------------------------
// Summation formulas

/// Which summation formula to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SummationKind {
    /// `θ0(z,τ) = exp( -i Σ_j cos(πj(2z-τ)) / (j sin(πjτ)) )`
    Theta,
    /// `Γ(z,τ,σ) = exp( -i/2 Σ_j sin(πj(2z-τ-σ)) / (j sin(πjτ) sin(πjσ)) )`
    EllipticGamma,
}

/// Compare the product definition against the residue-series exponential.
/// The series decays like `e^{-λ j}` with
/// `λ = π·min(2 Im z, 2(Im span - Im z))`; samples too close to the strip
/// boundary are refused as [`EvalError::SlowDecay`].
pub fn check_summation_formula(
    kind: SummationKind,
    z: Complex64,
    tau: Complex64,
    sigma: Option<Complex64>,
    policy: &TruncationPolicy,
) -> Result<IdentityReport, EvalError> {
    let (span, id) = match kind {
        SummationKind::Theta => (tau, "summation-theta"),
        SummationKind::EllipticGamma => {
            let s = sigma.ok_or_else(|| {
                EvalError::InvalidParameter("summation for the elliptic gamma needs sigma".into())
            })?;
            (tau + s, "summation-gamma")
        }
    };
    if !(tau.im > 0.0) || sigma.map(|s| s.im <= 0.0).unwrap_or(false) {
        return Err(EvalError::DomainViolation(
            "need moduli in the upper half-plane".into(),
        ));
    }
    if !(z.im > 0.0 && z.im < span.im) {
        return Err(EvalError::DomainViolation(format!(
            "need 0 < Im z < {:.6}, got {:.6}",
            span.im, z.im
        )));
    }
    let lambda = PI * 2.0 * z.im.min(span.im - z.im);
    let n_needed = (-policy.tail_tol.ln() / lambda).ceil() as usize + 3;
    if n_needed > 2000 {
        return Err(EvalError::SlowDecay(format!(
            "series would need about {n_needed} terms at decay rate {lambda:.3e} per term"
        )));
    }

    let mut exponent = Complex64::new(0.0, 0.0);
    for j in 1..=n_needed {
        let jf = j as f64;
        let term = match kind {
            SummationKind::Theta => {
                (PI * jf * (2.0 * z - tau)).cos() / (jf * (PI * jf * tau).sin())
            }
            SummationKind::EllipticGamma => {
                let s = sigma.unwrap();
                (PI * jf * (2.0 * z - tau - s)).sin()
                    / (2.0 * jf * (PI * jf * tau).sin() * (PI * jf * s).sin())
            }
        };
        exponent += term;
    }
    let rhs = (Complex64::new(0.0, -1.0) * exponent).exp();
    let lhs = match kind {
        SummationKind::Theta => gammafuncs::theta0(z, tau, policy)?.value,
        SummationKind::EllipticGamma => {
            gammafuncs::elliptic_gamma(z, tau, sigma.unwrap(), policy)?.value
        }
    };
    let mut sample = sample_map([("z", z.into()), ("tau", tau.into())]);
    if let Some(s) = sigma {
        sample.insert("sigma".into(), s.into());
    }
    Ok(IdentityReport::from_sides(
        id,
        lhs,
        rhs,
        policy.series_threshold,
        sample,
        policy,
    ))
}

// ---------------------------------------------------------------------------
// G_r as an infinite product of multiple sines

/// `G_r(z|τ)` against the depth-`K` partial product of shifted
/// `S_{r+1}(·|τ)` factors with their Bernoulli normalizers, in both sign
/// variants.
///
/// The Bernoulli exponentials inside each factor cancel analytically
/// against the normalizer, so each factor reduces to the q-factorial parts
/// alone — the cancellation is done in log space before exponentiating.
/// Restricted to moduli with pairwise nonreal ratios; the equal-period case
/// is covered by [`check_gamma_equal_periods`].
pub fn check_g_from_sine_product(
    r: usize,
    z: Complex64,
    tau: &TauVector,
    depth: usize,
    policy: &TruncationPolicy,
) -> Result<IdentityReport, EvalError> {
    if tau.len() != r + 1 {
        return Err(EvalError::InvalidParameter(format!(
            "modulus vector has {} entries, expected r + 1 = {}",
            tau.len(),
            r + 1
        )));
    }
    if depth == 0 {
        return Err(EvalError::InvalidParameter(
            "depth must be at least 1".into(),
        ));
    }
    if tau.entries().iter().any(|t| t.im <= 0.0) {
        return Err(EvalError::DomainViolation("need Im tau_j > 0".into()));
    }
    let tau_sum = tau.sum();
    if !(z.im > 0.0 && z.im < tau_sum.im) {
        return Err(EvalError::DomainViolation(format!(
            "need 0 < Im z < Im|tau| = {:.6}",
            tau_sum.im
        )));
    }
    let periods = PeriodVector::new(tau.entries().to_vec())?;
    let t = tau.entries();
    for j in 0..t.len() {
        for k in 0..t.len() {
            if j != k && (t[j] / t[k]).im == 0.0 {
                return Err(EvalError::RatioOnRealAxis(
                    "sine factors need pairwise nonreal modulus ratios; \
                     use the equal-period check instead"
                        .into(),
                ));
            }
        }
    }

    let lhs = gammafuncs::g_value(z, t, policy)?;
    let sine_order = r + 1;
    let parity = if r.is_multiple_of(2) { 1.0 } else { -1.0 };

    // log of the depth-K partial product for one sign variant
    let partial = |unit: f64, k_max: usize| -> Result<Complex64, EvalError> {
        let mut log_total = Complex64::new(0.0, 0.0);
        for k in 0..k_max {
            let kf = k as f64;
            let (up, down) = if unit < 0.0 {
                (z + kf + 1.0, z - kf)
            } else {
                (z + kf, z - kf - 1.0)
            };
            let l_up = multisine::log_sine_factors(
                sine_order,
                up,
                &periods,
                ProductVariant::InvertedArgs,
                policy,
            )?;
            let l_down = multisine::log_sine_factors(
                sine_order,
                down,
                &periods,
                ProductVariant::DirectArgs,
                policy,
            )?;
            log_total += parity * (l_up.value + l_down.value);
        }
        Ok(log_total)
    };
    let rhs_at = |unit: f64, k_max: usize| -> Result<Complex64, EvalError> {
        let unit_c = Complex64::new(unit, 0.0);
        let mut periods_ext = t.to_vec();
        periods_ext.push(unit_c);
        let b =
            bernoulli::eval_multiple_bernoulli(r + 2, r + 2, z, &PeriodVector::new(periods_ext)?)?;
        let pre = -unit * 2.0 * pi_i() / factorial(r + 2) * b;
        Ok((pre + partial(unit, k_max)?).exp())
    };

    let rhs_minus = rhs_at(-1.0, depth)?;
    let mut sample = sample_map([
        ("z", z.into()),
        ("r", (r as i64).into()),
        ("depth", (depth as i64).into()),
    ]);
    for (j, tj) in t.iter().enumerate() {
        sample.insert(format!("tau{j}"), (*tj).into());
    }
    let mut report = IdentityReport::from_sides(
        "g-from-sine",
        lhs.value,
        rhs_minus,
        policy.series_threshold,
        sample,
        policy,
    );
    let rhs_plus = rhs_at(1.0, depth)?;
    report.fold("plus_variant", lhs.value, rhs_plus);
    report.fold("variants_agree", rhs_minus, rhs_plus);

    let deeper = rhs_at(-1.0, depth + 5)?;
    report.extras.insert(
        "rel_residual_depth_plus_5".into(),
        relative_residual(lhs.value, deeper),
    );
    Ok(report)
}

/// `Γ(z,τ,τ)` against the depth-`K` product of `ψ2` ratios:
///
/// ```text
/// Γ(z,τ,τ) = exp( πi/3 B_33(z|τ,τ,-1) )
///            ∏_k ψ2((z+k+1)/τ) / ψ2(2-(z-k)/τ)
/// ```
///
/// This is the route for coincident periods, where the sine-product factors
/// are unavailable (their ratios sit on the real axis).
pub fn check_gamma_equal_periods(
    z: Complex64,
    tau: Complex64,
    depth: usize,
    policy: &TruncationPolicy,
) -> Result<IdentityReport, EvalError> {
    if !(tau.im > 0.0) {
        return Err(EvalError::DomainViolation("need Im tau > 0".into()));
    }
    if depth == 0 {
        return Err(EvalError::InvalidParameter(
            "depth must be at least 1".into(),
        ));
    }
    if !(z.im > 0.0 && z.im < 2.0 * tau.im) {
        return Err(EvalError::DomainViolation(format!(
            "need 0 < Im z < 2 Im tau = {:.6}",
            2.0 * tau.im
        )));
    }
    let lhs = gammafuncs::elliptic_gamma(z, tau, tau, policy)?;

    let minus_one = Complex64::new(-1.0, 0.0);
    let b33 = bernoulli::eval_multiple_bernoulli(
        3,
        3,
        z,
        &PeriodVector::new(vec![tau, tau, minus_one])?,
    )?;
    let prefactor = (pi_i() / 3.0 * b33).exp();

    let product_to = |k_max: usize| -> Result<(Complex64, f64), EvalError> {
        let mut p = Estimate::exact(prefactor);
        for k in 0..k_max {
            let kf = k as f64;
            let num = quadrature::psi2((z + kf + 1.0) / tau, policy)?;
            let den = quadrature::psi2(Complex64::new(2.0, 0.0) - (z - kf) / tau, policy)?;
            p = p.mul(num.div(den));
        }
        Ok((p.value, p.bound))
    };

    let (rhs, bound) = product_to(depth)?;
    let mut report = IdentityReport::from_sides(
        "gamma-equal-periods",
        lhs.value,
        rhs,
        policy.quadrature_threshold,
        sample_map([
            ("z", z.into()),
            ("tau", tau.into()),
            ("depth", (depth as i64).into()),
        ]),
        policy,
    );
    report.extras.insert("rhs_error_bound".into(), bound);
    let (deeper, _) = product_to(depth + 5)?;
    report.extras.insert(
        "rel_residual_depth_plus_5".into(),
        relative_residual(lhs.value, deeper),
    );
    Ok(report)
}

// ---------------------------------------------------------------------------
// Registry, sampling, sweeps

/// Every registered identity, with the structural parameters a sweep needs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentityKind {
    ModularProduct { r: usize },
    ModularTransform { r: usize, sign: TransformSign },
    Jacobi,
    FelderVarchenko,
    G2Modular { sign: TransformSign },
    SummationTheta,
    SummationGamma,
    GFromSineProduct { r: usize, depth: usize },
    GammaEqualPeriods { depth: usize },
    GShift { r: usize, j: usize },
    GInversion { r: usize, j: usize },
    GNegation { r: usize },
    GPair { r: usize, j: usize },
    SineShift { r: usize, j: usize },
    SineReflection { r: usize },
}

impl IdentityKind {
    pub fn id(&self) -> &'static str {
        match self {
            IdentityKind::ModularProduct { .. } => "modular-product",
            IdentityKind::ModularTransform { .. } => "modular-transform",
            IdentityKind::Jacobi => "jacobi",
            IdentityKind::FelderVarchenko => "felder-varchenko",
            IdentityKind::G2Modular { .. } => "g2-modular",
            IdentityKind::SummationTheta => "summation-theta",
            IdentityKind::SummationGamma => "summation-gamma",
            IdentityKind::GFromSineProduct { .. } => "g-from-sine",
            IdentityKind::GammaEqualPeriods { .. } => "gamma-equal-periods",
            IdentityKind::GShift { .. } => "g-shift",
            IdentityKind::GInversion { .. } => "g-inversion",
            IdentityKind::GNegation { .. } => "g-negation",
            IdentityKind::GPair { .. } => "g-pair",
            IdentityKind::SineShift { .. } => "sine-shift",
            IdentityKind::SineReflection { .. } => "sine-reflection",
        }
    }
}

/// Aggregate of a seeded sweep over one identity.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepSummary {
    pub identity_id: String,
    pub count: usize,
    pub pass_count: usize,
    pub max_rel_residual: f64,
    pub seed: u64,
    pub reports: Vec<IdentityReport>,
}

fn c_in(rng: &mut ChaCha8Rng, re: (f64, f64), im: (f64, f64)) -> Complex64 {
    Complex64::new(rng.gen_range(re.0..re.1), rng.gen_range(im.0..im.1))
}

/// Periods with arguments spread apart (mod π) so all pairwise ratios stay
/// safely off the real axis; `full_plane` lets angles roam both half-planes.
fn sample_periods(rng: &mut ChaCha8Rng, r: usize, full_plane: bool) -> Vec<Complex64> {
    loop {
        let span = if full_plane { 2.6 } else { 1.4 };
        let base = if full_plane { -1.3 } else { 0.1 };
        let mut angles: Vec<f64> = (0..r).map(|_| base + rng.gen_range(0.0..span)).collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let ok = angles.windows(2).all(|w| {
            let gap = (w[1] - w[0]) % PI;
            gap > 0.15 && (PI - gap) > 0.15
        });
        if !ok {
            continue;
        }
        return angles
            .into_iter()
            .map(|th| {
                let rad = rng.gen_range(0.6..1.5);
                Complex64::new(rad * th.cos(), rad * th.sin())
            })
            .collect();
    }
}

/// Upper-half-plane moduli with pairwise ratio imaginary parts bounded away
/// from zero; `ordered` additionally forces `Im(τ_j/τ_k) > 0` for `j < k`.
fn sample_upper_moduli(rng: &mut ChaCha8Rng, n: usize, ordered: bool) -> Vec<Complex64> {
    loop {
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.25..PI - 0.25)).collect();
        angles.sort_by(|a, b| b.partial_cmp(a).unwrap());
        if !angles.windows(2).all(|w| w[0] - w[1] > 0.15) {
            continue;
        }
        if !ordered {
            // shuffle-ish: reverse half the time
            if rng.gen_bool(0.5) {
                angles.reverse();
            }
        }
        return angles
            .into_iter()
            .map(|th| {
                let rad = rng.gen_range(0.6..1.4);
                Complex64::new(rad * th.cos(), rad * th.sin())
            })
            .collect();
    }
}

fn strip_point(rng: &mut ChaCha8Rng, span_im: f64) -> Complex64 {
    Complex64::new(
        rng.gen_range(0.05..0.95),
        span_im * rng.gen_range(0.18..0.82),
    )
}

/// Draw an admissible sample for `kind` and run the check.  A tampered
/// prefactor can be injected for the negative-control suite.
pub fn run_sampled_check(
    kind: IdentityKind,
    rng: &mut ChaCha8Rng,
    policy: &TruncationPolicy,
    tamper: Option<Tamper>,
) -> Result<IdentityReport, EvalError> {
    match kind {
        IdentityKind::ModularProduct { r } => {
            let w = sample_periods(rng, r, true);
            let z = c_in(rng, (0.1, 0.9), (0.05, 0.6));
            check_modular_product(r, z, &PeriodVector::new(w)?, policy, tamper)
        }
        IdentityKind::ModularTransform { r, sign } => {
            let t = sample_upper_moduli(rng, r + 1, false);
            let span: Complex64 = t.iter().sum();
            let z = strip_point(rng, span.im);
            check_modular_transform(r, z, &TauVector::new(t)?, sign, policy, tamper)
        }
        IdentityKind::Jacobi => {
            let tau = c_in(rng, (-0.3, 0.3), (0.5, 1.5));
            let z = strip_point(rng, tau.im);
            check_jacobi(z, tau, policy, tamper)
        }
        IdentityKind::FelderVarchenko => {
            // angles 0 < φ < ψ < π give Im σ, Im τ, Im(τ/σ) > 0
            let phi: f64 = rng.gen_range(0.2..1.3);
            let psi: f64 = rng.gen_range(phi + 0.2..2.6);
            let sigma = rng.gen_range(0.6..1.3) * Complex64::new(phi.cos(), phi.sin());
            let tau = rng.gen_range(0.6..1.3) * Complex64::new(psi.cos(), psi.sin());
            let z = strip_point(rng, (tau + sigma).im);
            check_felder_varchenko(z, tau, sigma, policy, tamper)
        }
        IdentityKind::G2Modular { sign } => {
            let t = sample_upper_moduli(rng, 3, true);
            let span: Complex64 = t.iter().sum();
            let z = strip_point(rng, span.im);
            check_g2_modular(z, &TauVector::new(t)?, sign, policy, tamper)
        }
        IdentityKind::SummationTheta => {
            let tau = c_in(rng, (-0.2, 0.2), (0.7, 1.4));
            let z = Complex64::new(
                rng.gen_range(0.05..0.95),
                tau.im * rng.gen_range(0.25..0.75),
            );
            check_summation_formula(SummationKind::Theta, z, tau, None, policy)
        }
        IdentityKind::SummationGamma => {
            let tau = c_in(rng, (-0.2, 0.2), (0.6, 1.2));
            let sigma = c_in(rng, (-0.2, 0.2), (0.5, 1.0));
            let z = Complex64::new(
                rng.gen_range(0.05..0.95),
                (tau + sigma).im * rng.gen_range(0.25..0.75),
            );
            check_summation_formula(SummationKind::EllipticGamma, z, tau, Some(sigma), policy)
        }
        IdentityKind::GFromSineProduct { r, depth } => {
            let t = sample_upper_moduli(rng, r + 1, false);
            let span: Complex64 = t.iter().sum();
            let z = strip_point(rng, span.im);
            check_g_from_sine_product(r, z, &TauVector::new(t)?, depth, policy)
        }
        IdentityKind::GammaEqualPeriods { depth } => {
            let tau = c_in(rng, (-0.1, 0.1), (0.8, 1.6));
            let z = Complex64::new(
                rng.gen_range(0.2..0.8),
                2.0 * tau.im * rng.gen_range(0.2..0.8),
            );
            check_gamma_equal_periods(z, tau, depth, policy)
        }
        IdentityKind::GShift { r, j } => {
            let t = sample_upper_moduli(rng, r + 1, false);
            let z = c_in(rng, (0.1, 0.9), (0.1, 0.7));
            gammafuncs::check_g_functional_equation(
                GIdentity::ShiftPeriod { j },
                r,
                z,
                &TauVector::new(t)?,
                policy,
            )
        }
        IdentityKind::GInversion { r, j } => {
            let t = sample_upper_moduli(rng, r + 1, false);
            let z = c_in(rng, (0.1, 0.9), (0.1, 0.7));
            gammafuncs::check_g_functional_equation(
                GIdentity::Inversion { j },
                r,
                z,
                &TauVector::new(t)?,
                policy,
            )
        }
        IdentityKind::GNegation { r } => {
            let t = sample_upper_moduli(rng, r + 1, false);
            let z = c_in(rng, (0.1, 0.9), (0.1, 0.7));
            gammafuncs::check_g_functional_equation(
                GIdentity::Negation,
                r,
                z,
                &TauVector::new(t)?,
                policy,
            )
        }
        IdentityKind::GPair { r, j } => {
            let t = sample_upper_moduli(rng, r + 1, false);
            let z = c_in(rng, (0.1, 0.9), (0.1, 0.7));
            gammafuncs::check_g_functional_equation(
                GIdentity::Pair { j },
                r,
                z,
                &TauVector::new(t)?,
                policy,
            )
        }
        IdentityKind::SineShift { r, j } => {
            let w = sample_periods(rng, r, false);
            let z = c_in(rng, (0.1, 0.9), (0.05, 0.5));
            multisine::check_sine_relations(
                SineRelation::Shift { j },
                r,
                z,
                &PeriodVector::new(w)?,
                policy,
            )
        }
        IdentityKind::SineReflection { r } => {
            let w = sample_periods(rng, r, false);
            let z = c_in(rng, (0.1, 0.9), (0.05, 0.5));
            multisine::check_sine_relations(
                SineRelation::Reflection,
                r,
                z,
                &PeriodVector::new(w)?,
                policy,
            )
        }
    }
}

const SWEEP_RESAMPLE_CAP: usize = 300;

/// Run `count` seeded checks of one identity; deterministic in `seed`.
/// Inadmissible draws are rejected and resampled.
pub fn sweep(
    kind: IdentityKind,
    count: usize,
    seed: u64,
    policy: &TruncationPolicy,
    tamper: Option<Tamper>,
) -> Result<SweepSummary, EvalError> {
    if count == 0 {
        return Err(EvalError::InvalidParameter(
            "sweep count must be >= 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while reports.len() < count {
        match run_sampled_check(kind, &mut rng, policy, tamper) {
            Ok(mut rep) => {
                rep.seed = Some(seed);
                reports.push(rep);
            }
            Err(e)
                if e.is_inadmissible()
                    || matches!(
                        e,
                        EvalError::PoleOnContour(_) | EvalError::MaxTermsExceeded(_)
                    ) =>
            {
                attempts += 1;
                if attempts > SWEEP_RESAMPLE_CAP {
                    return Err(EvalError::DomainViolation(format!(
                        "could not draw {count} admissible samples for {} \
                         within {SWEEP_RESAMPLE_CAP} rejections: last error: {e}",
                        kind.id(),
                    )));
                }
            }
            Err(e) => return Err(e),
        }
    }
    let pass_count = reports.iter().filter(|r| r.pass).count();
    let max_rel_residual = reports.iter().map(|r| r.rel_residual).fold(0.0, f64::max);
    Ok(SweepSummary {
        identity_id: kind.id().to_string(),
        count,
        pass_count,
        max_rel_residual,
        seed,
        reports,
    })
}
