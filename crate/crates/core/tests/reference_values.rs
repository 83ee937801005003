//! Differential tests against externally computed reference values.
//!
//! The constants below were produced with an independent 40-digit
//! arbitrary-precision computation (mpmath): truncated products for the
//! theta and elliptic gamma functions, direct series summation for the
//! q-polylogarithm, the explicit one-axis product for the double sine, and
//! adaptive quadrature on the vertical path for `ψ2`.  They pin the
//! double-precision implementation to better than 1e-13 relative.

// constants keep their full reference digits beyond f64 precision
#![allow(clippy::excessive_precision)]

mod common;

use common::{c, rel};
use multigamma::bernoulli::{self, PeriodVector};
use multigamma::gammafuncs;
use multigamma::multisine::{self, ProductVariant};
use multigamma::qseries;
use multigamma::quadrature;
use multigamma::{Complex64, TruncationPolicy};

fn pol() -> TruncationPolicy {
    TruncationPolicy::default()
}

const TOL: f64 = 1e-13;

#[test]
fn theta0_reference() {
    let v = gammafuncs::theta0(c(0.25, 0.5), c(0.0, 1.0), &pol()).unwrap();
    let reference = c(1.001867449256304435105433, 0.0);
    assert!(rel(v.value, reference) < TOL, "{} vs {reference}", v.value);
}

#[test]
fn elliptic_gamma_reference() {
    let v = gammafuncs::elliptic_gamma(c(0.3, 0.4), c(0.0, 1.0), c(0.0, 2.0), &pol()).unwrap();
    let reference = c(0.9700443859207933905473724, 0.07304635060704573385126048);
    assert!(rel(v.value, reference) < TOL, "{} vs {reference}", v.value);
}

#[test]
fn q_polylog_and_factorial_reference() {
    let x = Complex64::new(0.3 * 0.4f64.cos(), 0.3 * 0.4f64.sin());
    let q = [c(0.4, 0.0), c(0.0, 0.6), c(0.5, -0.3)];
    let li = qseries::q_polylog(x, &q, &pol()).unwrap();
    let li_ref = c(0.7230848329739657775022675, 0.3150562907842206622015083);
    assert!(rel(li.value, li_ref) < TOL, "{} vs {li_ref}", li.value);

    let f = qseries::q_shifted_factorial(x, &q, &pol()).unwrap();
    let f_ref = c(0.4613683509970341438814966, -0.1503653493909234542348533);
    assert!(rel(f.value, f_ref) < TOL, "{} vs {f_ref}", f.value);
}

#[test]
fn double_sine_reference() {
    let omega = PeriodVector::new(vec![c(0.0, 1.0), c(1.0, 0.0)]).unwrap();
    let v = multisine::multiple_sine_product(
        2,
        c(0.4, 0.3),
        &omega,
        ProductVariant::DirectArgs,
        &pol(),
    )
    .unwrap();
    let reference = c(1.066893928418042777679014, 0.005501612640584902463729198);
    assert!(rel(v.value, reference) < TOL, "{} vs {reference}", v.value);
}

#[test]
fn psi2_reference() {
    let v = quadrature::psi2(c(0.6, 0.2), &pol()).unwrap();
    let reference = c(0.5194901879559717983802816, 0.08991783546998346035962093);
    assert!(
        rel(v.value, reference) < 1e-11,
        "{} vs {reference}",
        v.value
    );
}

#[test]
fn bernoulli_b33_reference() {
    let omega = PeriodVector::new(vec![c(1.0, 0.5), c(-0.3, 1.2), c(2.0, -0.4)]).unwrap();
    let v = bernoulli::eval_multiple_bernoulli(3, 3, c(0.4, -0.2), &omega).unwrap();
    let reference = c(-0.7963235294117647058823529, -0.4686274509803921568627451);
    assert!(rel(v, reference) < 1e-14, "{v} vs {reference}");
}
