//! `selftest`: the acceptance suites at reduced sample counts.  One line
//! (or one JSON record) per suite; nonzero exit if any suite fails.

use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use multigamma::bernoulli::{self, poly, PeriodVector};
use multigamma::gammafuncs;
use multigamma::identities::{self, IdentityKind, Tamper, TransformSign};
use multigamma::multisine::{self, IndentSide, ProductVariant};
use multigamma::qseries::{self, TauVector};
use multigamma::quadrature::{self, GIntegralForm};
use multigamma::{EvalError, TruncationPolicy};

use crate::output::{Sink, SCHEMA_VERSION};
use crate::Failure;

use rand::Rng;

type SuiteResult = Result<(bool, String), EvalError>;
type Suite = (&'static str, Box<dyn FnOnce() -> SuiteResult>);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

fn random_periods(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| {
            let rad: f64 = rng.gen_range(0.5..1.5);
            let th: f64 = rng.gen_range(-3.1..3.1);
            c(rad * th.cos(), rad * th.sin())
        })
        .collect()
}

fn bernoulli_relations() -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for r in 1..=3usize {
        for _ in 0..5 {
            let w = PeriodVector::new(random_periods(&mut rng, r))?;
            for n in 1..=5usize {
                let b = bernoulli::multiple_bernoulli_poly(r, n, &w)?;
                let reflected =
                    poly::shift_arg(&poly::scale_arg(&b.coeffs, -Complex64::ONE), -w.sum());
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                worst = worst.max(poly::rel_distance(
                    &reflected,
                    &poly::scaled(&b.coeffs, c(sign, 0.0)),
                ));
                let j = n % r;
                let shifted = poly::shift_arg(&b.coeffs, w[j]);
                let small = bernoulli::multiple_bernoulli_poly(r - 1, n - 1, &w.removed(j))?;
                let diff = poly::sub(&shifted, &b.coeffs);
                worst = worst.max(poly::rel_distance(
                    &diff,
                    &poly::scaled(&small.coeffs, c(n as f64, 0.0)),
                ));
            }
        }
    }
    Ok((
        worst < 1e-12,
        format!("worst coefficient residual {worst:.2e}"),
    ))
}

fn modular_cubic() -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let w = random_periods(&mut rng, 2);
        let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let q = bernoulli::q_cubic(z, w[0], w[1])?;
        let b = bernoulli::eval_multiple_bernoulli(
            3,
            3,
            z,
            &PeriodVector::new(vec![w[0], w[1], c(-1.0, 0.0)])?,
        )?;
        worst = worst.max(rel(q, -b / 3.0));
    }
    Ok((worst < 1e-12, format!("worst residual {worst:.2e}")))
}

fn q_series_relations(samples: usize, policy: &TruncationPolicy) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut worst = 0.0f64;
    for i in 0..samples.max(8) {
        let n_moduli = 1 + i % 3;
        let q: Vec<Complex64> = (0..n_moduli)
            .map(|_| {
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                let t = c(rng.gen_range(-0.4..0.4), sign * rng.gen_range(0.15..0.8));
                (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * t).exp()
            })
            .collect();
        let max_q = q.iter().map(|x| x.norm()).fold(0.0, f64::max);
        let x = c(rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4)) * max_q.min(1.0) * 0.9;
        let a = qseries::q_shifted_factorial(x, &q, policy)?;
        let j = i % n_moduli;
        let mut qf = q.clone();
        qf[j] = 1.0 / qf[j];
        let b = qseries::q_shifted_factorial(x / q[j], &qf, policy)?;
        worst = worst.max(rel(a.value * b.value, Complex64::ONE));
        let raw = qseries::q_shifted_factorial_product(x, &q, policy)?;
        worst = worst.max(rel(a.value, raw.value));
    }
    Ok((worst < 1e-9, format!("worst residual {worst:.2e}")))
}

fn sine_product_variants(samples: usize, policy: &TruncationPolicy) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut worst = 0.0f64;
    let mut done = 0usize;
    while done < samples.max(6) {
        let r = 2 + done % 2;
        let angles: Vec<f64> = (0..r)
            .map(|k| -0.9 + 0.7 * k as f64 + rng.gen_range(0.0f64..0.3))
            .collect();
        let w: Vec<Complex64> = angles
            .iter()
            .map(|th| rng.gen_range(0.7..1.3) * c(th.cos(), th.sin()))
            .collect();
        let omega = PeriodVector::new(w)?;
        let z = c(rng.gen_range(0.1..0.9), rng.gen_range(0.05..0.5));
        let a = match multisine::multiple_sine_product(
            r,
            z,
            &omega,
            ProductVariant::DirectArgs,
            policy,
        ) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let b =
            multisine::multiple_sine_product(r, z, &omega, ProductVariant::InvertedArgs, policy)?;
        worst = worst.max(rel(a.value, b.value));
        done += 1;
    }
    Ok((worst < 1e-9, format!("worst residual {worst:.2e}")))
}

fn sine_integral_vs_product(policy: &TruncationPolicy) -> SuiteResult {
    let mut worst = 0.0f64;
    for (r, z) in [(1usize, c(0.4, 0.1)), (2, c(0.8, 0.1)), (3, c(1.0, 0.05))] {
        let w: Vec<Complex64> = (0..r)
            .map(|k| {
                let th = -0.5 + 0.45 * k as f64;
                1.1 * c(th.cos(), th.sin())
            })
            .collect();
        let omega = PeriodVector::new(w)?;
        let int = multisine::multiple_sine_integral(r, z, &omega, IndentSide::Above, policy)?;
        let reference = if r == 1 {
            multisine::sine_s1(z, omega[0])?
        } else {
            multisine::multiple_sine_product(r, z, &omega, ProductVariant::DirectArgs, policy)?
                .value
        };
        worst = worst.max(rel(int.value, reference));
    }
    Ok((worst < 1e-6, format!("worst residual {worst:.2e}")))
}

fn sweep_suite(
    kind: IdentityKind,
    samples: usize,
    seed: u64,
    policy: &TruncationPolicy,
    max_allowed: f64,
) -> SuiteResult {
    let s = identities::sweep(kind, samples, seed, policy, None)?;
    let ok = s.pass_count == s.count && s.max_rel_residual < max_allowed;
    Ok((
        ok,
        format!(
            "{}/{} passed, max residual {:.2e}",
            s.pass_count, s.count, s.max_rel_residual
        ),
    ))
}

fn integral_representations(policy: &TruncationPolicy) -> SuiteResult {
    let mut worst = 0.0f64;
    for (r, taus, z) in [
        (0usize, vec![c(0.0, 1.0)], c(0.2, 0.3)),
        (1, vec![c(0.0, 1.0), c(0.1, 0.8)], c(0.3, 0.7)),
    ] {
        let tau = TauVector::new(taus)?;
        let reference = gammafuncs::multiple_elliptic_gamma(r, z, &tau, policy)?.value;
        for form in [
            GIntegralForm::Loop,
            GIntegralForm::LineWithPlusOne,
            GIntegralForm::LineWithMinusOne,
        ] {
            let v = quadrature::g_integral_rep(r, z, &tau, form, policy)?;
            worst = worst.max(rel(v.value, reference));
        }
    }
    Ok((worst < 1e-6, format!("worst residual {worst:.2e}")))
}

fn psi2_layer(policy: &TruncationPolicy) -> SuiteResult {
    let psi_one = quadrature::psi2(c(1.0, 0.0), policy)?;
    let expect = c(0.0, std::f64::consts::PI / 12.0).exp();
    let mut worst = (psi_one.value - expect).norm();

    for z in [c(0.6, 0.15), c(0.45, -0.2)] {
        let s2 = quadrature::s2_equal_periods(z, policy)?.value;
        let ones = PeriodVector::new(vec![c(1.0, 0.0), c(1.0, 0.0)])?;
        let b22 = bernoulli::eval_multiple_bernoulli(2, 2, z, &ones)?;
        let half = c(0.0, std::f64::consts::PI / 2.0) * b22;
        let first = 1.0 / quadrature::psi2(z, policy)?.value * (-half).exp();
        worst = worst.max(rel(s2, first));
    }

    let rep = identities::check_gamma_equal_periods(c(0.3, 0.8), c(0.0, 1.0), 10, policy)?;
    worst = worst.max(rep.rel_residual);
    Ok((worst < 1e-6, format!("worst residual {worst:.2e}")))
}

fn negative_controls(samples: usize, policy: &TruncationPolicy) -> SuiteResult {
    let s = identities::sweep(
        IdentityKind::ModularProduct { r: 2 },
        samples,
        21,
        policy,
        Some(Tamper {
            coeff_index: 0,
            delta: 1e-4,
        }),
    )?;
    if s.pass_count != 0 {
        return Ok((
            false,
            format!(
                "tampered prefactor still passed {}/{}",
                s.pass_count, s.count
            ),
        ));
    }
    // a destroyed tail tolerance must degrade the summation formula
    let mut loose = policy.clone();
    loose.tail_tol = 1e-2;
    let s2 = identities::sweep(IdentityKind::SummationTheta, samples, 22, &loose, None)?;
    let ok = s2.pass_count < s2.count;
    Ok((
        ok,
        format!(
            "tampered prefactor 0/{}; loose tail_tol passed {}/{}",
            samples, s2.pass_count, s2.count
        ),
    ))
}

pub fn run(json: bool, samples: usize, sink: &mut Sink) -> Result<u8, Failure> {
    if samples == 0 {
        return Err(Failure::usage("--samples must be at least 1"));
    }
    let policy = TruncationPolicy::default();
    let suites: Vec<Suite> = vec![
        ("bernoulli-relations", Box::new(bernoulli_relations)),
        ("modular-cubic", Box::new(modular_cubic)),
        ("q-series-relations", {
            let p = policy.clone();
            Box::new(move || q_series_relations(samples, &p))
        }),
        ("sine-product-variants", {
            let p = policy.clone();
            Box::new(move || sine_product_variants(samples, &p))
        }),
        ("sine-integral-vs-product", {
            let p = policy.clone();
            Box::new(move || sine_integral_vs_product(&p))
        }),
        ("modular-product-r2", {
            let p = policy.clone();
            Box::new(move || {
                sweep_suite(IdentityKind::ModularProduct { r: 2 }, samples, 31, &p, 1e-8)
            })
        }),
        ("modular-product-r3", {
            let p = policy.clone();
            Box::new(move || {
                sweep_suite(IdentityKind::ModularProduct { r: 3 }, samples, 32, &p, 1e-8)
            })
        }),
        ("modular-transform-r0", {
            let p = policy.clone();
            Box::new(move || {
                sweep_suite(
                    IdentityKind::ModularTransform {
                        r: 0,
                        sign: TransformSign::MinusOne,
                    },
                    samples,
                    33,
                    &p,
                    1e-8,
                )
            })
        }),
        ("modular-transform-r1", {
            let p = policy.clone();
            Box::new(move || {
                sweep_suite(
                    IdentityKind::ModularTransform {
                        r: 1,
                        sign: TransformSign::PlusOne,
                    },
                    samples,
                    34,
                    &p,
                    1e-8,
                )
            })
        }),
        ("modular-transform-r2", {
            let p = policy.clone();
            Box::new(move || {
                sweep_suite(
                    IdentityKind::ModularTransform {
                        r: 2,
                        sign: TransformSign::MinusOne,
                    },
                    samples,
                    35,
                    &p,
                    1e-8,
                )
            })
        }),
        ("jacobi", {
            let p = policy.clone();
            Box::new(move || sweep_suite(IdentityKind::Jacobi, samples, 36, &p, 1e-8))
        }),
        ("felder-varchenko", {
            let p = policy.clone();
            Box::new(move || sweep_suite(IdentityKind::FelderVarchenko, samples, 37, &p, 1e-8))
        }),
        ("g2-modular", {
            let p = policy.clone();
            Box::new(move || {
                sweep_suite(
                    IdentityKind::G2Modular {
                        sign: TransformSign::MinusOne,
                    },
                    samples,
                    38,
                    &p,
                    1e-8,
                )
            })
        }),
        ("summation-theta", {
            let p = policy.clone();
            Box::new(move || sweep_suite(IdentityKind::SummationTheta, samples, 39, &p, 1e-9))
        }),
        ("summation-gamma", {
            let p = policy.clone();
            Box::new(move || sweep_suite(IdentityKind::SummationGamma, samples, 40, &p, 1e-9))
        }),
        ("g-from-sine", {
            let p = policy.clone();
            Box::new(move || {
                sweep_suite(
                    IdentityKind::GFromSineProduct { r: 1, depth: 15 },
                    samples.min(6),
                    41,
                    &p,
                    1e-8,
                )
            })
        }),
        ("integral-representations", {
            let p = policy.clone();
            Box::new(move || integral_representations(&p))
        }),
        ("psi2-layer", {
            let p = policy.clone();
            Box::new(move || psi2_layer(&p))
        }),
        ("negative-controls", {
            let p = policy.clone();
            Box::new(move || negative_controls(samples, &p))
        }),
    ];

    let mut all_pass = true;
    for (name, suite) in suites {
        let (pass, detail) = match suite() {
            Ok((pass, detail)) => (pass, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        all_pass &= pass;
        if json {
            sink.line(
                json!({
                    "schema": SCHEMA_VERSION,
                    "suite": name,
                    "pass": pass,
                    "detail": detail,
                })
                .to_string(),
            );
        } else {
            sink.line(format!(
                "{} {name}: {detail}",
                if pass { "PASS" } else { "FAIL" }
            ));
        }
    }
    if !json {
        sink.line(if all_pass {
            "selftest: all suites passed".to_string()
        } else {
            "selftest: FAILURES detected".to_string()
        });
    }
    Ok(if all_pass { 0 } else { 1 })
}
