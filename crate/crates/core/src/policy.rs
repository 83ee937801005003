//! Evaluation policy (truncation, guards, quadrature parameters), the
//! value-plus-bound return type, and the error vocabulary shared by all
//! modules.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Series/product cutoffs, proximity guards and quadrature parameters.
///
/// A single policy value travels with every evaluation; identity reports
/// embed a snapshot of the policy they were produced under.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    /// Relative tail tolerance for series and products.
    pub tail_tol: f64,
    /// Hard cap on summed/multiplied terms before giving up.
    pub max_terms: usize,
    /// Refuse q-series evaluation when some nome has ||q| - 1| below this.
    pub unit_circle_guard: f64,
    /// Refuse gamma/sine evaluation within this distance of the zero/pole
    /// lattice.
    pub lattice_guard: f64,
    /// Indentation height ε for shifted real-line contours.
    pub quad_indent: f64,
    /// Notch radius ρ for the semicircular detour around the origin.
    pub quad_notch: f64,
    /// Truncation |Re t| for infinite contours; `None` selects it from the
    /// sampled integrand decay.
    pub quad_truncation: Option<f64>,
    /// Gauss–Legendre nodes per panel.
    pub panel_order: usize,
    /// Pass threshold for identity checks evaluated through series/product
    /// paths only.
    pub series_threshold: f64,
    /// Pass threshold for identity checks involving quadrature.
    pub quadrature_threshold: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            tail_tol: 1e-14,
            max_terms: 1_000_000,
            unit_circle_guard: 1e-3,
            lattice_guard: 1e-8,
            quad_indent: 0.25,
            quad_notch: 0.1,
            quad_truncation: None,
            panel_order: 32,
            series_threshold: 1e-8,
            quadrature_threshold: 1e-6,
        }
    }
}

impl TruncationPolicy {
    /// Check the internal consistency constraints (ρ < ε, positive
    /// tolerances, sane panel order).
    pub fn validate(&self) -> Result<(), EvalError> {
        if !(self.tail_tol > 0.0) || !self.tail_tol.is_finite() {
            return Err(EvalError::InvalidParameter(
                "tail_tol must be positive and finite".into(),
            ));
        }
        if !(self.unit_circle_guard > 0.0) {
            return Err(EvalError::InvalidParameter(
                "unit_circle_guard must be positive".into(),
            ));
        }
        if !(self.quad_notch > 0.0 && self.quad_notch < self.quad_indent) {
            return Err(EvalError::InvalidParameter(
                "need 0 < quad_notch < quad_indent".into(),
            ));
        }
        if let Some(t) = self.quad_truncation {
            if !(t > 1.0) {
                return Err(EvalError::InvalidParameter(
                    "quad_truncation must exceed 1".into(),
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

/// A computed complex value together with an absolute error bound.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Estimate {
    pub value: Complex64,
    /// Absolute bound on |true - value| from truncation tails and rounding.
    pub bound: f64,
}

impl Estimate {
    pub fn exact(value: Complex64) -> Self {
        Estimate { value, bound: 0.0 }
    }

    pub fn new(value: Complex64, bound: f64) -> Self {
        Estimate { value, bound }
    }

    /// Product with error bounds combined in quadrature on the relative
    /// scale.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Estimate) -> Estimate {
        let value = self.value * other.value;
        let r1 = rel_of(self);
        let r2 = rel_of(other);
        Estimate::new(value, value.norm() * (r1 * r1 + r2 * r2).sqrt())
    }

    /// Quotient, same bound combination as [`Estimate::mul`].
    #[allow(clippy::should_implement_trait)]
    pub fn div(self, other: Estimate) -> Estimate {
        let value = self.value / other.value;
        let r1 = rel_of(self);
        let r2 = rel_of(other);
        Estimate::new(value, value.norm() * (r1 * r1 + r2 * r2).sqrt())
    }

    /// Reciprocal; relative error is preserved.
    pub fn recip(self) -> Estimate {
        let value = 1.0 / self.value;
        Estimate::new(value, value.norm() * rel_of(self))
    }

    /// `exp` of a logarithm estimate: the absolute error of the exponent
    /// becomes the relative error of the result.
    pub fn exp_of_log(log: Estimate) -> Estimate {
        let value = log.value.exp();
        Estimate::new(value, value.norm() * log.bound)
    }
}

fn rel_of(e: Estimate) -> f64 {
    let n = e.value.norm();
    if n > 0.0 {
        e.bound / n
    } else {
        e.bound
    }
}

/// Everything that can go wrong during an evaluation.  Preconditions map to
/// dedicated variants so callers (identity sweeps, the CLI) can tell an
/// inadmissible sample apart from a genuine numerical failure.
#[derive(Debug, Error)]
pub enum EvalError {
    #[error("divergent input: {0}")]
    DivergentInput(String),

    #[error("ill-conditioned: {0}")]
    IllConditioned(String),

    #[error("term cap exceeded: {0}")]
    MaxTermsExceeded(String),

    /// Within guard distance of the zero/pole lattice.  `is_zero` records
    /// whether the nearby lattice point is a zero (true) or a pole (false)
    /// of the evaluated function.
    #[error("{} lattice proximity: {msg}", if *.is_zero { "zero" } else { "pole" })]
    PoleProximity { is_zero: bool, msg: String },

    #[error("period ratio on the real axis: {0}")]
    RatioOnRealAxis(String),

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    #[error("pole on contour: {0}")]
    PoleOnContour(String),

    #[error("series decays too slowly near the domain boundary: {0}")]
    SlowDecay(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl EvalError {
    /// Whether this error marks an inadmissible input (precondition or
    /// guard violation) rather than an internal numerical failure.
    pub fn is_inadmissible(&self) -> bool {
        matches!(
            self,
            EvalError::DivergentInput(_)
                | EvalError::IllConditioned(_)
                | EvalError::PoleProximity { .. }
                | EvalError::RatioOnRealAxis(_)
                | EvalError::DomainViolation(_)
                | EvalError::SlowDecay(_)
                | EvalError::InvalidParameter(_)
        )
    }
}
