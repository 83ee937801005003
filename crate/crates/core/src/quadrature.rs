//! Complex contour quadrature for every integral representation in the
//! library: the indented real lines `R ± i0`, the loop `C1` around the
//! positive integers, shifted lines `R + iε`, vertical paths for `ψ2`, and
//! straight segments.
//!
//! Machinery: composite Gauss–Legendre panels on straight segments (plus a
//! parameterized arc for the origin notch), refined by adaptive bisection
//! until the panel-level discrepancy falls below the tail tolerance.
//! Infinite contours are truncated where the sampled integrand magnitude
//! drops below `tail_tol` relative to its peak, and the sampled decay rate
//! supplies a tail bound that is folded into the returned error estimate.
//! Integrands here are analytic on their contours and exponentially
//! decaying, so fixed-order panels with bisection converge fast and their
//! error is easy to bound; a pole drifting onto a contour shows up as a
//! magnitude spike against the panel median and is reported instead of
//! being silently integrated over.

use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::bernoulli::{self, PeriodVector};
use crate::cplx::{self, exp_2pi_i, exp_2pi_i_m1, two_pi_i};
use crate::policy::{Estimate, EvalError, TruncationPolicy};
use crate::qseries::TauVector;

/// Contour geometry for [`integrate_contour`].
#[derive(Clone, Debug)]
pub enum ContourKind {
    /// The real line with a semicircular notch passing above the origin.
    RealLineIndentAbove,
    /// The real line with a semicircular notch passing below the origin.
    RealLineIndentBelow,
    /// Counterclockwise loop hugging `[1, ∞)`: rays at `Im t = ±ε` joined by
    /// a vertical segment crossing the real axis at `Re t = 1/2`.
    C1AroundPositiveIntegers,
    /// Vertical path ending at `top`, coming up from `-i∞`.
    VerticalFromMinusInfinity { top: Complex64 },
    /// Straight segment.
    Segment { from: Complex64, to: Complex64 },
    /// Counterclockwise circle around the origin.
    CircleAroundOrigin { radius: f64 },
}

/// A contour plus the numeric parameters that realize it.
#[derive(Clone, Debug)]
pub struct ContourSpec {
    pub kind: ContourKind,
    /// Indentation height ε for the shifted rays.
    pub indent: f64,
    /// Notch radius ρ for the origin detour.
    pub notch: f64,
    /// Truncation of infinite rays; `None` = choose from the sampled decay.
    pub truncation: Option<f64>,
    pub panel_order: usize,
}

impl ContourSpec {
    pub fn from_policy(kind: ContourKind, policy: &TruncationPolicy) -> Self {
        ContourSpec {
            kind,
            indent: policy.quad_indent,
            notch: policy.quad_notch,
            truncation: policy.quad_truncation,
            panel_order: policy.panel_order,
        }
    }

    fn validate(&self) -> Result<(), EvalError> {
        if !(self.notch > 0.0 && self.notch < self.indent) {
            return Err(EvalError::InvalidParameter(
                "contour needs 0 < notch < indent".into(),
            ));
        }
        if let Some(t) = self.truncation {
            if !(t > 1.0) {
                return Err(EvalError::InvalidParameter(
                    "contour truncation must exceed 1".into(),
                ));
            }
        }
        if self.panel_order < 8 {
            return Err(EvalError::InvalidParameter(
                "panel_order must be at least 8".into(),
            ));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Gauss–Legendre rule

struct GlRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

fn legendre_rule(n: usize) -> Arc<GlRule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GlRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    map.entry(n)
        .or_insert_with(|| {
            let mut nodes = vec![0.0; n];
            let mut weights = vec![0.0; n];
            for i in 0..n {
                // Newton iteration from the Chebyshev-like initial guess
                let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
                for _ in 0..100 {
                    let (p, dp) = legendre_and_derivative(n, x);
                    let dx = p / dp;
                    x -= dx;
                    if dx.abs() < 1e-16 {
                        break;
                    }
                }
                let (_, dp) = legendre_and_derivative(n, x);
                nodes[i] = x;
                weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
            }
            Arc::new(GlRule { nodes, weights })
        })
        .clone()
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

// ---------------------------------------------------------------------------
// Panel machinery

const MAX_BISECTION_DEPTH: usize = 26;
const SPIKE_RATIO: f64 = 1e12;

struct Quadrature<'a> {
    f: &'a dyn Fn(Complex64) -> Complex64,
    rule: Arc<GlRule>,
    tol: f64,
    err: f64,
    evals: usize,
    max_evals: usize,
}

impl<'a> Quadrature<'a> {
    fn new(
        f: &'a dyn Fn(Complex64) -> Complex64,
        order: usize,
        tol: f64,
        max_evals: usize,
    ) -> Self {
        Quadrature {
            f,
            rule: legendre_rule(order),
            tol,
            err: 0.0,
            evals: 0,
            max_evals,
        }
    }

    /// One Gauss–Legendre application on the straight segment `[a, b]`,
    /// with non-finite and spike detection.
    fn gl_segment(&mut self, a: Complex64, b: Complex64) -> Result<Complex64, EvalError> {
        let mid = (a + b) / 2.0;
        let half = (b - a) / 2.0;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut mags: Vec<f64> = Vec::with_capacity(self.rule.nodes.len());
        for (x, w) in self.rule.nodes.iter().zip(self.rule.weights.iter()) {
            let t = mid + half * *x;
            let v = (self.f)(t);
            if !v.is_finite() {
                return Err(EvalError::PoleOnContour(format!(
                    "integrand not finite at t = {t}"
                )));
            }
            mags.push(v.norm());
            acc += v * *w;
        }
        self.evals += self.rule.nodes.len();
        if self.evals > self.max_evals {
            return Err(EvalError::QuadratureFailure(format!(
                "evaluation budget {} exhausted",
                self.max_evals
            )));
        }
        mags.sort_by(|p, q| p.partial_cmp(q).unwrap());
        let median = mags[mags.len() / 2];
        let max = mags[mags.len() - 1];
        if max > SPIKE_RATIO * (median + f64::MIN_POSITIVE) {
            return Err(EvalError::PoleOnContour(format!(
                "magnitude spike {max:.3e} against panel median {median:.3e} near {mid}"
            )));
        }
        Ok(acc * half)
    }

    fn adaptive_segment(
        &mut self,
        a: Complex64,
        b: Complex64,
        depth: usize,
    ) -> Result<Complex64, EvalError> {
        let whole = self.gl_segment(a, b)?;
        let mid = (a + b) / 2.0;
        let left = self.gl_segment(a, mid)?;
        let right = self.gl_segment(mid, b)?;
        let refined = left + right;
        let disc = (whole - refined).norm();
        if disc <= self.tol || depth >= MAX_BISECTION_DEPTH {
            if depth >= MAX_BISECTION_DEPTH && disc > self.tol {
                return Err(EvalError::QuadratureFailure(format!(
                    "no convergence on panel [{a}, {b}]: discrepancy {disc:.3e}"
                )));
            }
            self.err += disc;
            return Ok(refined);
        }
        let l = self.adaptive_segment(a, mid, depth + 1)?;
        let r = self.adaptive_segment(mid, b, depth + 1)?;
        Ok(l + r)
    }

    /// Integrate along consecutive straight panels through `points`.
    fn polyline(&mut self, points: &[Complex64]) -> Result<Complex64, EvalError> {
        let mut acc = Complex64::new(0.0, 0.0);
        for pair in points.windows(2) {
            acc += self.adaptive_segment(pair[0], pair[1], 0)?;
        }
        Ok(acc)
    }

    /// Integrate over the arc `ρ e^{iθ}`, θ from `th0` to `th1`.
    fn arc(&mut self, radius: f64, th0: f64, th1: f64) -> Result<Complex64, EvalError> {
        let f = self.f;
        let g = move |th: Complex64| -> Complex64 {
            // the parameter stays real; embed into the complex plane
            let t = radius * Complex64::new(th.re.cos(), th.re.sin());
            f(t) * Complex64::new(0.0, 1.0) * t
        };
        let mut inner = Quadrature {
            f: &g,
            rule: self.rule.clone(),
            tol: self.tol,
            err: 0.0,
            evals: 0,
            max_evals: self.max_evals,
        };
        let v = inner.adaptive_segment(Complex64::new(th0, 0.0), Complex64::new(th1, 0.0), 0)?;
        self.err += inner.err;
        self.evals += inner.evals;
        Ok(v)
    }
}

/// Geometric breakpoints from `near` out to 1, then unit steps to `far`.
fn ray_breakpoints(near: f64, far: f64) -> Vec<f64> {
    let mut pts = vec![near];
    let mut x = near;
    while x < 1.0 && x < far {
        x = (x * 2.0).min(1.0).min(far);
        pts.push(x);
    }
    while x < far {
        x = (x + 1.0).min(far);
        pts.push(x);
    }
    pts
}

fn sample_decay(
    f: &dyn Fn(Complex64) -> Complex64,
    line: impl Fn(f64) -> Complex64,
    tail_tol: f64,
    forced: Option<f64>,
) -> Result<(f64, f64), EvalError> {
    // peak over a coarse grid
    let mut peak = 0.0f64;
    for k in 1..=32 {
        let v = f(line(k as f64 / 4.0)).norm();
        if v.is_finite() {
            peak = peak.max(v);
        }
    }
    peak = peak.max(f64::MIN_POSITIVE);
    let tail_at = |t: f64| -> (f64, f64) {
        let m_end = f(line(t)).norm();
        let m_in = f(line(t - 1.0)).norm();
        let lambda = if m_end > 0.0 && m_in > m_end {
            (m_in / m_end).ln().max(0.05)
        } else {
            0.05
        };
        (m_end, m_end / lambda)
    };
    if let Some(t) = forced {
        let (_, tail) = tail_at(t);
        return Ok((t, tail));
    }
    let mut t = 8.0;
    loop {
        let m_end = f(line(t)).norm();
        let m_half = f(line(t - 0.5)).norm();
        if m_end < tail_tol * peak && m_half < tail_tol * peak {
            let (_, tail) = tail_at(t);
            return Ok((t, tail));
        }
        t *= 2.0;
        if t > 4096.0 {
            return Err(EvalError::QuadratureFailure(
                "integrand does not decay along the contour".into(),
            ));
        }
    }
}

/// Integrate `f` along the contour described by `spec`.
///
/// Returns the value and an error bound combining the panel discrepancies
/// with the truncation-tail estimate.
pub fn integrate_contour(
    f: &dyn Fn(Complex64) -> Complex64,
    spec: &ContourSpec,
    policy: &TruncationPolicy,
) -> Result<(Complex64, f64), EvalError> {
    policy.validate()?;
    spec.validate()?;
    let tol = policy.tail_tol;
    let max_evals = policy.max_terms * 8;
    let mut quad = Quadrature::new(f, spec.panel_order, tol, max_evals);
    let rho = spec.notch;

    match spec.kind {
        ContourKind::RealLineIndentAbove | ContourKind::RealLineIndentBelow => {
            let (t_pos, tail_pos) =
                sample_decay(f, |s| Complex64::new(s, 0.0), tol, spec.truncation)?;
            let (t_neg, tail_neg) =
                sample_decay(f, |s| Complex64::new(-s, 0.0), tol, spec.truncation)?;
            // negative ray
            let mut pts: Vec<Complex64> = ray_breakpoints(rho, t_neg)
                .into_iter()
                .rev()
                .map(|x| Complex64::new(-x, 0.0))
                .collect();
            let neg = quad.polyline(&pts)?;
            // notch
            let arc = match spec.kind {
                ContourKind::RealLineIndentAbove => quad.arc(rho, PI, 0.0)?,
                _ => quad.arc(rho, PI, 2.0 * PI)?,
            };
            // positive ray
            pts = ray_breakpoints(rho, t_pos)
                .into_iter()
                .map(|x| Complex64::new(x, 0.0))
                .collect();
            let pos = quad.polyline(&pts)?;
            Ok((neg + arc + pos, quad.err + tail_pos + tail_neg))
        }
        ContourKind::C1AroundPositiveIntegers => {
            let eps = spec.indent;
            let (t_end, tail) =
                sample_decay(f, |s| Complex64::new(0.5 + s, eps), tol, spec.truncation)?;
            let t_end = t_end + 0.5; // land on a half-integer, clear of the poles
            let breaks = half_integer_breaks(0.5, t_end);
            // top ray, right to left
            let top: Vec<Complex64> = breaks
                .iter()
                .rev()
                .map(|x| Complex64::new(*x, eps))
                .collect();
            let v_top = quad.polyline(&top)?;
            // vertical crossing at Re = 1/2
            let v_mid =
                quad.adaptive_segment(Complex64::new(0.5, eps), Complex64::new(0.5, -eps), 0)?;
            // bottom ray, left to right
            let bottom: Vec<Complex64> = breaks.iter().map(|x| Complex64::new(*x, -eps)).collect();
            let v_bottom = quad.polyline(&bottom)?;
            Ok((v_top + v_mid + v_bottom, quad.err + 2.0 * tail))
        }
        ContourKind::VerticalFromMinusInfinity { top } => {
            let (depth, tail) = sample_decay(
                f,
                |s| Complex64::new(top.re, top.im.min(0.0) - s),
                tol,
                spec.truncation,
            )?;
            let bottom_im = top.im.min(0.0) - depth;
            let mut pts: Vec<Complex64> = Vec::new();
            let mut y = bottom_im;
            while y < top.im {
                pts.push(Complex64::new(top.re, y));
                y += 1.0;
            }
            pts.push(top);
            let v = quad.polyline(&pts)?;
            Ok((v, quad.err + tail))
        }
        ContourKind::Segment { from, to } => {
            if (to - from).norm() == 0.0 {
                return Ok((Complex64::new(0.0, 0.0), 0.0));
            }
            let v = quad.adaptive_segment(from, to, 0)?;
            Ok((v, quad.err))
        }
        ContourKind::CircleAroundOrigin { radius } => {
            if !(radius > 0.0) {
                return Err(EvalError::InvalidParameter(
                    "circle radius must be positive".into(),
                ));
            }
            let a = quad.arc(radius, 0.0, PI)?;
            let b = quad.arc(radius, PI, 2.0 * PI)?;
            Ok((a + b, quad.err))
        }
    }
}

fn half_integer_breaks(from: f64, to: f64) -> Vec<f64> {
    let mut pts = vec![from];
    let mut x = from;
    while x + 1.0 < to {
        x += 1.0;
        pts.push(x);
    }
    if to > *pts.last().unwrap() {
        pts.push(to);
    }
    pts
}

// ---------------------------------------------------------------------------
// The specific integral representations

/// Indentation ε that keeps the nome-induced poles `m/τ_j` out of the band
/// `|Im t| ≤ ε`.
fn safe_indent(tau: &[Complex64], policy: &TruncationPolicy) -> f64 {
    let mut eps = policy.quad_indent;
    for t in tau {
        let clearance = t.im.abs() / t.norm_sqr();
        eps = eps.min(0.45 * clearance);
    }
    eps
}

/// The q-polylogarithm through its loop-contour representation,
///
/// ```text
/// Li(x;q) = -∮_{C1} e^{2πizt} / ( t (1-e^{2πit}) ∏_j (1-e^{2πiτ_j t}) ) dt,
/// ```
///
/// with `x = e^{2πiz}`, `q_j = e^{2πiτ_j}`.  The loop winds
/// counterclockwise around the positive integers.  Serves as the
/// independent oracle for the series evaluation.
pub fn q_polylog_contour(
    z: Complex64,
    tau: &[Complex64],
    policy: &TruncationPolicy,
) -> Result<Estimate, EvalError> {
    if z.im <= 0.0 {
        return Err(EvalError::DomainViolation(
            "loop representation requires Im z > 0".into(),
        ));
    }
    if tau.iter().any(|t| t.im == 0.0) {
        return Err(EvalError::DomainViolation(
            "moduli must have nonzero imaginary part".into(),
        ));
    }
    let taus = tau.to_vec();
    let f = move |t: Complex64| -> Complex64 {
        let mut denom = t * (-exp_2pi_i_m1(t));
        for tj in &taus {
            denom *= -exp_2pi_i_m1(tj * t);
        }
        exp_2pi_i(z * t) / denom
    };
    let mut spec = ContourSpec::from_policy(ContourKind::C1AroundPositiveIntegers, policy);
    spec.indent = safe_indent(tau, policy);
    spec.notch = spec.notch.min(spec.indent * 0.5);
    let (v, err) = integrate_contour(&f, &spec, policy)?;
    Ok(Estimate::new(-v, err))
}

/// Which of the three integral representations of `G_r` to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GIntegralForm {
    /// Loop around the positive integers, no Bernoulli prefactor.
    Loop,
    /// Shifted line `R + iε` with the `B_{r+2,r+2}(z|(τ,1))` prefactor.
    LineWithPlusOne,
    /// Shifted line `R + iε` with the `B_{r+2,r+2}(z|(τ,-1))` prefactor.
    LineWithMinusOne,
}

/// `G_r(z|τ)` through one of its three integral representations.
///
/// Valid for all `Im τ_j > 0` and `0 < Im z < Im |τ|`.
pub fn g_integral_rep(
    r: usize,
    z: Complex64,
    tau: &TauVector,
    form: GIntegralForm,
    policy: &TruncationPolicy,
) -> Result<Estimate, EvalError> {
    if tau.len() != r + 1 {
        return Err(EvalError::InvalidParameter(format!(
            "modulus vector has {} entries, expected r + 1 = {}",
            tau.len(),
            r + 1
        )));
    }
    if tau.entries().iter().any(|t| t.im <= 0.0) {
        return Err(EvalError::DomainViolation(
            "integral representations require Im tau_j > 0".into(),
        ));
    }
    let tau_sum = tau.sum();
    if !(z.im > 0.0 && z.im < tau_sum.im) {
        return Err(EvalError::DomainViolation(format!(
            "need 0 < Im z < Im|tau| = {:.6}, got Im z = {:.6}",
            tau_sum.im, z.im
        )));
    }
    let taus: Vec<Complex64> = tau.entries().to_vec();
    let sign = if r.is_multiple_of(2) { 1.0 } else { -1.0 };

    match form {
        GIntegralForm::Loop => {
            let f = move |t: Complex64| -> Complex64 {
                let mut denom = t * exp_2pi_i_m1(t);
                for tj in &taus {
                    denom *= exp_2pi_i_m1(tj * t);
                }
                let num = exp_2pi_i(z * t) + sign * exp_2pi_i((tau_sum + 1.0 - z) * t);
                num / denom
            };
            let mut spec = ContourSpec::from_policy(ContourKind::C1AroundPositiveIntegers, policy);
            spec.indent = safe_indent(tau.entries(), policy);
            spec.notch = spec.notch.min(spec.indent * 0.5);
            let (v, err) = integrate_contour(&f, &spec, policy)?;
            Ok(Estimate::exp_of_log(Estimate::new(v, err)))
        }
        GIntegralForm::LineWithPlusOne | GIntegralForm::LineWithMinusOne => {
            let plus_one = form == GIntegralForm::LineWithPlusOne;
            let appended = if plus_one {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(-1.0, 0.0)
            };
            let mut periods = tau.entries().to_vec();
            periods.push(appended);
            let b =
                bernoulli::eval_multiple_bernoulli(r + 2, r + 2, z, &PeriodVector::new(periods)?)?;
            let mut fact = 1.0f64;
            for k in 2..=(r + 2) {
                fact *= k as f64;
            }
            let prefactor = two_pi_i() / fact * b * if plus_one { -1.0 } else { 1.0 };

            let f = move |t: Complex64| -> Complex64 {
                let line_factor = if plus_one {
                    exp_2pi_i_m1(t)
                } else {
                    exp_2pi_i_m1(-t)
                };
                let mut denom = t * line_factor;
                for tj in &taus {
                    denom *= exp_2pi_i_m1(tj * t);
                }
                let num = if plus_one {
                    -exp_2pi_i(z * t) - sign * exp_2pi_i((tau_sum + 1.0 - z) * t)
                } else {
                    exp_2pi_i(z * t) + sign * exp_2pi_i((tau_sum - 1.0 - z) * t)
                };
                num / denom
            };
            let eps = safe_indent(tau.entries(), policy);
            let integral = shifted_line_integral(&f, eps, policy)?;
            Ok(Estimate::exp_of_log(Estimate::new(
                prefactor + integral.value,
                integral.bound,
            )))
        }
    }
}

/// Integral along the full line `Im t = ε`, with panels broken at
/// half-integer real parts so the poles at the integers stay clear of
/// panel ends.
fn shifted_line_integral(
    f: &dyn Fn(Complex64) -> Complex64,
    eps: f64,
    policy: &TruncationPolicy,
) -> Result<Estimate, EvalError> {
    let tol = policy.tail_tol;
    let (t_pos, tail_pos) =
        sample_decay(f, |s| Complex64::new(s, eps), tol, policy.quad_truncation)?;
    let (t_neg, tail_neg) =
        sample_decay(f, |s| Complex64::new(-s, eps), tol, policy.quad_truncation)?;
    let left = -(t_neg + 0.5);
    let right = t_pos + 0.5;
    let mut pts = vec![Complex64::new(left, eps)];
    let mut x = left.floor() + 0.5;
    while x < right {
        if x > left {
            pts.push(Complex64::new(x, eps));
        }
        x += 1.0;
    }
    pts.push(Complex64::new(right, eps));
    let mut quad = Quadrature::new(f, policy.panel_order, tol, policy.max_terms * 8);
    let v = quad.polyline(&pts)?;
    Ok(Estimate::new(v, quad.err + tail_pos + tail_neg))
}

/// The auxiliary function
/// `ψ2(z) = exp( 2πi ∫_{-i∞}^{z} (t-1)/(e^{2πit}-1) dt )`
/// over a vertical path ending at `z`.
///
/// The path must clear the integrand's poles at the real integers by the
/// notch radius.  `ψ2` itself is path-independent: the residues of the
/// integrand are integers, which the outer exponential annihilates.
pub fn psi2(z: Complex64, policy: &TruncationPolicy) -> Result<Estimate, EvalError> {
    policy.validate()?;
    // distance from the vertical segment to the nearest integer; t = 1 is a
    // removable point of (t-1)/(e^{2πit}-1), not a pole
    let crossing = z.im > 0.0;
    for n in (z.re.floor() as i64 - 1)..=(z.re.ceil() as i64 + 1) {
        if n == 1 {
            continue;
        }
        let dx = (z.re - n as f64).abs();
        let d = if crossing {
            dx
        } else {
            (dx * dx + z.im * z.im).sqrt()
        };
        if d < policy.quad_notch {
            return Err(EvalError::PoleOnContour(format!(
                "vertical path at Re z = {:.6} passes within {} of the pole at t = {n}",
                z.re, policy.quad_notch
            )));
        }
    }
    let f = |t: Complex64| -> Complex64 { (t - 1.0) / exp_2pi_i_m1(t) };
    let spec = ContourSpec::from_policy(ContourKind::VerticalFromMinusInfinity { top: z }, policy);
    let (v, err) = integrate_contour(&f, &spec, policy)?;
    Ok(Estimate::exp_of_log(Estimate::new(
        two_pi_i() * v,
        2.0 * PI * err,
    )))
}

/// The equal-period double sine
/// `S2(z|1,1) = exp( -∫_1^z π (t-1) cot(πt) dt )`
/// over the straight path from 1 to `z`.
///
/// The integrand's singularity at `t = 1` is removable; other integers must
/// stay a notch radius away from the path.
pub fn s2_equal_periods(z: Complex64, policy: &TruncationPolicy) -> Result<Estimate, EvalError> {
    policy.validate()?;
    let a = Complex64::new(1.0, 0.0);
    segment_clears_integers(a, z, policy.quad_notch, &[1])?;
    let f = |t: Complex64| -> Complex64 { PI * (t - 1.0) * cplx::cot_pi(t) };
    let spec = ContourSpec::from_policy(ContourKind::Segment { from: a, to: z }, policy);
    let (v, err) = integrate_contour(&f, &spec, policy)?;
    Ok(Estimate::exp_of_log(Estimate::new(-v, err)))
}

/// Distance check from the segment `[a, b]` to the real integers, with
/// exclusions for removable points.
fn segment_clears_integers(
    a: Complex64,
    b: Complex64,
    clearance: f64,
    exclude: &[i64],
) -> Result<(), EvalError> {
    let lo = a.re.min(b.re).floor() as i64 - 1;
    let hi = a.re.max(b.re).ceil() as i64 + 1;
    for n in lo..=hi {
        if exclude.contains(&n) {
            continue;
        }
        let p = Complex64::new(n as f64, 0.0);
        let ab = b - a;
        let len2 = ab.norm_sqr();
        let s = if len2 == 0.0 {
            0.0
        } else {
            (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0)
        };
        let d = (p - (a + ab * s)).norm();
        if d < clearance {
            return Err(EvalError::PoleOnContour(format!(
                "integration path passes within {clearance} of the pole at t = {n}"
            )));
        }
    }
    Ok(())
}
