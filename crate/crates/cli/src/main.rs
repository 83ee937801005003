//! Command-line front end: point evaluation, single identity checks, seeded
//! identity sweeps, and a self-test that runs the acceptance suites at
//! reduced sample counts.
//!
//! Exit codes: 0 pass, 1 identity failure, 2 usage/parse error,
//! 3 inadmissible domain.

mod literal;
mod output;
mod selftest;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use std::path::PathBuf;
use std::process::ExitCode;

use multigamma::bernoulli::{self, PeriodVector};
use multigamma::gammafuncs::{self, GIdentity};
use multigamma::identities::{self, IdentityKind, SummationKind, TransformSign};
use multigamma::multisine::{self, IndentSide, ProductVariant, SineRelation};
use multigamma::qseries::{self, TauVector};
use multigamma::quadrature;
use multigamma::{EvalError, TruncationPolicy};

use literal::{parse_complex, parse_complex_list};
use output::{Format, Sink};

/// Newtype so clap treats a comma-separated vector as one value.
#[derive(Clone)]
struct ComplexList(Vec<Complex64>);

fn parse_list(s: &str) -> Result<ComplexList, String> {
    parse_complex_list(s).map(ComplexList)
}

#[derive(Parser)]
#[command(
    name = "multigamma",
    about = "Multiple elliptic gamma / multiple sine special functions with verified identities",
    version
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "human")]
    format: Format,

    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate one function at a point.
    ///
    /// Targets: bernoulli, q-factorial, q-polylog, theta0, elliptic-gamma,
    /// g, s-product, s-integral, psi2.
    Eval {
        target: String,
        #[command(flatten)]
        params: Params,
    },
    /// Check one identity at an explicit sample point.
    ///
    /// Identities: modular-product (thm4.1), modular-transform (thm4.2),
    /// jacobi, felder-varchenko (fv), g2-modular (g2), summation-theta,
    /// summation-gamma, g-from-sine (thm5.6), gamma-equal-periods
    /// (gamma-tau-tau), g-shift, g-inversion, g-negation, g-pair,
    /// sine-shift, sine-reflection.
    Check {
        identity: String,
        #[command(flatten)]
        params: Params,
    },
    /// Run a seeded sweep of random admissible samples of one identity.
    Sweep {
        identity: String,
        /// Number of samples.
        #[arg(long)]
        count: usize,
        /// RNG seed; the sweep is reproducible from it.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        params: Params,
    },
    /// Run the acceptance suites at reduced sample counts.
    Selftest {
        /// Emit one JSON record per suite.
        #[arg(long)]
        json: bool,
        /// Samples per sweep-style suite.
        #[arg(long, default_value_t = 12)]
        samples: usize,
    },
}

#[derive(clap::Args)]
struct Params {
    /// Evaluation point, e.g. 0.25+0.5i.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    z: Option<Complex64>,

    /// Series argument for the q-series functions.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    x: Option<Complex64>,

    /// Moduli, comma-separated.
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    tau: Option<ComplexList>,

    /// Second modulus of the elliptic gamma function.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    sigma: Option<Complex64>,

    /// Quasi-periods, comma-separated.
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    omega: Option<ComplexList>,

    /// Nomes, comma-separated.
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    q: Option<ComplexList>,

    /// Hierarchy rank.
    #[arg(long)]
    r: Option<usize>,

    /// Polynomial order for the Bernoulli evaluator.
    #[arg(long)]
    n: Option<usize>,

    /// Modulus/period index for the indexed functional equations.
    #[arg(long, default_value_t = 0)]
    j: usize,

    /// Sign variant of the modular transformations.
    #[arg(long, value_enum, default_value = "minus")]
    sign: SignArg,

    /// Product representation variant.
    #[arg(long, value_enum, default_value = "direct")]
    variant: VariantArg,

    /// Indentation side for the sine integral.
    #[arg(long, value_enum, default_value = "above")]
    side: SideArg,

    /// Truncation depth for the infinite-product identities.
    #[arg(long, alias = "k", default_value_t = 15)]
    depth: usize,

    // policy overrides
    #[arg(long)]
    tail_tol: Option<f64>,
    #[arg(long)]
    max_terms: Option<usize>,
    #[arg(long)]
    panel_order: Option<usize>,
    #[arg(long)]
    quad_indent: Option<f64>,
    #[arg(long)]
    quad_notch: Option<f64>,
    #[arg(long)]
    quad_truncation: Option<f64>,
    #[arg(long)]
    series_threshold: Option<f64>,
    #[arg(long)]
    quadrature_threshold: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Minus,
    Plus,
}

impl From<SignArg> for TransformSign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Minus => TransformSign::MinusOne,
            SignArg::Plus => TransformSign::PlusOne,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Direct,
    Inverted,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Above,
    Below,
}

/// An error carrying the process exit code.
pub struct Failure {
    pub code: u8,
    pub msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: 2,
            msg: msg.into(),
        }
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        Failure {
            code: 3,
            msg: e.to_string(),
        }
    }
}

impl Params {
    fn policy(&self) -> Result<TruncationPolicy, Failure> {
        let mut p = TruncationPolicy::default();
        if let Some(v) = self.tail_tol {
            p.tail_tol = v;
        }
        if let Some(v) = self.max_terms {
            p.max_terms = v;
        }
        if let Some(v) = self.panel_order {
            p.panel_order = v;
        }
        if let Some(v) = self.quad_indent {
            p.quad_indent = v;
        }
        if let Some(v) = self.quad_notch {
            p.quad_notch = v;
        }
        if let Some(v) = self.quad_truncation {
            p.quad_truncation = Some(v);
        }
        if let Some(v) = self.series_threshold {
            p.series_threshold = v;
        }
        if let Some(v) = self.quadrature_threshold {
            p.quadrature_threshold = v;
        }
        p.validate().map_err(|e| Failure::usage(e.to_string()))?;
        Ok(p)
    }

    fn need_z(&self) -> Result<Complex64, Failure> {
        self.z.ok_or_else(|| Failure::usage("missing --z"))
    }

    fn need_x(&self) -> Result<Complex64, Failure> {
        self.x.ok_or_else(|| Failure::usage("missing --x"))
    }

    fn need_r(&self) -> Result<usize, Failure> {
        self.r.ok_or_else(|| Failure::usage("missing --r"))
    }

    fn need_q(&self) -> Result<&[Complex64], Failure> {
        self.q
            .as_ref()
            .map(|l| l.0.as_slice())
            .ok_or_else(|| Failure::usage("missing --q"))
    }

    fn need_omega(&self) -> Result<PeriodVector, Failure> {
        let w = self
            .omega
            .as_ref()
            .ok_or_else(|| Failure::usage("missing --omega"))?;
        Ok(PeriodVector::new(w.0.clone())?)
    }

    fn need_tau_list(&self) -> Result<TauVector, Failure> {
        let t = self
            .tau
            .as_ref()
            .ok_or_else(|| Failure::usage("missing --tau"))?;
        Ok(TauVector::new(t.0.clone())?)
    }

    fn need_tau_scalar(&self) -> Result<Complex64, Failure> {
        let t = self
            .tau
            .as_ref()
            .ok_or_else(|| Failure::usage("missing --tau"))?;
        if t.0.len() != 1 {
            return Err(Failure::usage("this target takes a single --tau value"));
        }
        Ok(t.0[0])
    }

    fn need_sigma(&self) -> Result<Complex64, Failure> {
        self.sigma.ok_or_else(|| Failure::usage("missing --sigma"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut sink = match Sink::new(cli.format, cli.out.as_deref()) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let code = match run(cli.cmd, &mut sink) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            f.code
        }
    };
    if let Err(e) = sink.finish() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}

fn run(cmd: Cmd, sink: &mut Sink) -> Result<u8, Failure> {
    match cmd {
        Cmd::Eval { target, params } => run_eval(&target, &params, sink),
        Cmd::Check { identity, params } => run_check(&identity, &params, sink),
        Cmd::Sweep {
            identity,
            count,
            seed,
            params,
        } => run_sweep(&identity, count, seed, &params, sink),
        Cmd::Selftest { json, samples } => selftest::run(json, samples, sink),
    }
}

// ---------------------------------------------------------------------------

fn run_eval(target: &str, p: &Params, sink: &mut Sink) -> Result<u8, Failure> {
    let policy = p.policy()?;
    let target = target.to_ascii_lowercase();
    let target = target.as_str();
    let (value, bound, representation, flags): (Complex64, f64, &str, Vec<String>) = match target {
        "bernoulli" => {
            let r = p.need_r()?;
            let n = p.n.ok_or_else(|| Failure::usage("missing --n"))?;
            let v = bernoulli::eval_multiple_bernoulli(r, n, p.need_z()?, &p.need_omega()?)?;
            (v, 0.0, "exact-coefficient polynomial", vec![])
        }
        "q-factorial" | "q_factorial" => {
            let v = qseries::q_shifted_factorial(p.need_x()?, p.need_q()?, &policy)?;
            (
                v.value,
                v.bound,
                "inversion-reduced q-shifted factorial",
                vec![],
            )
        }
        "q-polylog" | "q_polylog" => {
            let v = qseries::q_polylog(p.need_x()?, p.need_q()?, &policy)?;
            (v.value, v.bound, "tail-bounded series", vec![])
        }
        "theta0" => {
            return eval_gamma_like(sink, &policy, p, 0, "theta0");
        }
        "elliptic-gamma" | "elliptic_gamma" => {
            let tau = p.need_tau_scalar()?;
            let sigma = p.need_sigma()?;
            let z = p.need_z()?;
            match gammafuncs::elliptic_gamma(z, tau, sigma, &policy) {
                Ok(v) => (v.value, v.error_bound, "two-factorial ratio", vec![]),
                Err(EvalError::PoleProximity { is_zero: true, msg }) => (
                    Complex64::new(0.0, 0.0),
                    0.0,
                    "two-factorial ratio",
                    vec![format!("on zero lattice: {msg}")],
                ),
                Err(e) => return Err(e.into()),
            }
        }
        "g" | "g_r" => {
            let r = p.need_r()?;
            let tau = p.need_tau_list()?;
            let z = p.need_z()?;
            match gammafuncs::multiple_elliptic_gamma(r, z, &tau, &policy) {
                Ok(v) => (v.value, v.error_bound, "two-factorial ratio", vec![]),
                Err(EvalError::PoleProximity { is_zero: true, msg }) => (
                    Complex64::new(0.0, 0.0),
                    0.0,
                    "two-factorial ratio",
                    vec![format!("on zero lattice: {msg}")],
                ),
                Err(e) => return Err(e.into()),
            }
        }
        "s-product" | "s_r_product" => {
            let r = p.need_r()?;
            let omega = p.need_omega()?;
            let z = p.need_z()?;
            if r == 1 {
                let v = multisine::sine_s1(z, omega.entries()[0])?;
                (v, 0.0, "closed form 2 sin(pi z / omega)", vec![])
            } else {
                let variant = match p.variant {
                    VariantArg::Direct => ProductVariant::DirectArgs,
                    VariantArg::Inverted => ProductVariant::InvertedArgs,
                };
                let v = multisine::multiple_sine_product(r, z, &omega, variant, &policy)?;
                let rep = match p.variant {
                    VariantArg::Direct => "q-factorial product, direct arguments",
                    VariantArg::Inverted => "q-factorial product, inverted arguments",
                };
                (v.value, v.bound, rep, vec![])
            }
        }
        "s-integral" | "s_r_integral" => {
            let r = p.need_r()?;
            let side = match p.side {
                SideArg::Above => IndentSide::Above,
                SideArg::Below => IndentSide::Below,
            };
            let v =
                multisine::multiple_sine_integral(r, p.need_z()?, &p.need_omega()?, side, &policy)?;
            let rep = match p.side {
                SideArg::Above => "indented-contour integral, notch above",
                SideArg::Below => "indented-contour integral, notch below",
            };
            (v.value, v.bound, rep, vec![])
        }
        "psi2" => {
            let v = quadrature::psi2(p.need_z()?, &policy)?;
            (v.value, v.bound, "vertical-path quadrature", vec![])
        }
        other => {
            return Err(Failure::usage(format!(
                "unknown eval target {other:?}; see --help for the list"
            )))
        }
    };
    sink.eval_result(target, value, bound, representation, &flags);
    Ok(0)
}

/// theta0 with the zero-lattice flag path.
fn eval_gamma_like(
    sink: &mut Sink,
    policy: &TruncationPolicy,
    p: &Params,
    r: usize,
    target: &str,
) -> Result<u8, Failure> {
    let tau = p.need_tau_scalar()?;
    let z = p.need_z()?;
    debug_assert_eq!(r, 0);
    match gammafuncs::theta0(z, tau, policy) {
        Ok(v) => {
            sink.eval_result(target, v.value, v.error_bound, "two-factorial ratio", &[]);
            Ok(0)
        }
        Err(EvalError::PoleProximity { is_zero: true, msg }) => {
            sink.eval_result(
                target,
                Complex64::new(0.0, 0.0),
                0.0,
                "two-factorial ratio",
                &[format!("on zero lattice: {msg}")],
            );
            Ok(0)
        }
        Err(e) => Err(e.into()),
    }
}

// ---------------------------------------------------------------------------

fn run_check(identity: &str, p: &Params, sink: &mut Sink) -> Result<u8, Failure> {
    let policy = p.policy()?;
    let report = match canonical_identity(identity)? {
        "modular-product" => identities::check_modular_product(
            p.need_r()?,
            p.need_z()?,
            &p.need_omega()?,
            &policy,
            None,
        )?,
        "modular-transform" => identities::check_modular_transform(
            p.need_r()?,
            p.need_z()?,
            &p.need_tau_list()?,
            p.sign.into(),
            &policy,
            None,
        )?,
        "jacobi" => identities::check_jacobi(p.need_z()?, p.need_tau_scalar()?, &policy, None)?,
        "felder-varchenko" => identities::check_felder_varchenko(
            p.need_z()?,
            p.need_tau_scalar()?,
            p.need_sigma()?,
            &policy,
            None,
        )?,
        "g2-modular" => identities::check_g2_modular(
            p.need_z()?,
            &p.need_tau_list()?,
            p.sign.into(),
            &policy,
            None,
        )?,
        "summation-theta" => identities::check_summation_formula(
            SummationKind::Theta,
            p.need_z()?,
            p.need_tau_scalar()?,
            None,
            &policy,
        )?,
        "summation-gamma" => identities::check_summation_formula(
            SummationKind::EllipticGamma,
            p.need_z()?,
            p.need_tau_scalar()?,
            Some(p.need_sigma()?),
            &policy,
        )?,
        "g-from-sine" => identities::check_g_from_sine_product(
            p.need_r()?,
            p.need_z()?,
            &p.need_tau_list()?,
            p.depth,
            &policy,
        )?,
        "gamma-equal-periods" => identities::check_gamma_equal_periods(
            p.need_z()?,
            p.need_tau_scalar()?,
            p.depth,
            &policy,
        )?,
        "g-shift" => gammafuncs::check_g_functional_equation(
            GIdentity::ShiftPeriod { j: p.j },
            p.need_r()?,
            p.need_z()?,
            &p.need_tau_list()?,
            &policy,
        )?,
        "g-inversion" => gammafuncs::check_g_functional_equation(
            GIdentity::Inversion { j: p.j },
            p.need_r()?,
            p.need_z()?,
            &p.need_tau_list()?,
            &policy,
        )?,
        "g-negation" => gammafuncs::check_g_functional_equation(
            GIdentity::Negation,
            p.need_r()?,
            p.need_z()?,
            &p.need_tau_list()?,
            &policy,
        )?,
        "g-pair" => gammafuncs::check_g_functional_equation(
            GIdentity::Pair { j: p.j },
            p.need_r()?,
            p.need_z()?,
            &p.need_tau_list()?,
            &policy,
        )?,
        "sine-shift" => multisine::check_sine_relations(
            SineRelation::Shift { j: p.j },
            p.need_r()?,
            p.need_z()?,
            &p.need_omega()?,
            &policy,
        )?,
        "sine-reflection" => multisine::check_sine_relations(
            SineRelation::Reflection,
            p.need_r()?,
            p.need_z()?,
            &p.need_omega()?,
            &policy,
        )?,
        other => unreachable!("canonical_identity returned {other}"),
    };
    let pass = report.pass;
    sink.check_report(&report);
    Ok(if pass { 0 } else { 1 })
}

fn canonical_identity(name: &str) -> Result<&'static str, Failure> {
    Ok(match name.to_ascii_lowercase().as_str() {
        "modular-product" | "thm4.1" => "modular-product",
        "modular-transform" | "thm4.2" => "modular-transform",
        "jacobi" => "jacobi",
        "felder-varchenko" | "fv" => "felder-varchenko",
        "g2-modular" | "g2" => "g2-modular",
        "summation-theta" => "summation-theta",
        "summation-gamma" => "summation-gamma",
        "g-from-sine" | "thm5.6" => "g-from-sine",
        "gamma-equal-periods" | "gamma-tau-tau" => "gamma-equal-periods",
        "g-shift" => "g-shift",
        "g-inversion" => "g-inversion",
        "g-negation" => "g-negation",
        "g-pair" => "g-pair",
        "sine-shift" => "sine-shift",
        "sine-reflection" => "sine-reflection",
        other => {
            return Err(Failure::usage(format!(
                "unknown identity {other:?}; see --help for the list"
            )))
        }
    })
}

// ---------------------------------------------------------------------------

fn run_sweep(
    identity: &str,
    count: usize,
    seed: u64,
    p: &Params,
    sink: &mut Sink,
) -> Result<u8, Failure> {
    if count == 0 {
        return Err(Failure::usage("--count must be at least 1"));
    }
    let policy = p.policy()?;
    let sign: TransformSign = p.sign.into();
    let kind = match canonical_identity(identity)? {
        "modular-product" => IdentityKind::ModularProduct { r: p.need_r()? },
        "modular-transform" => IdentityKind::ModularTransform {
            r: p.need_r()?,
            sign,
        },
        "jacobi" => IdentityKind::Jacobi,
        "felder-varchenko" => IdentityKind::FelderVarchenko,
        "g2-modular" => IdentityKind::G2Modular { sign },
        "summation-theta" => IdentityKind::SummationTheta,
        "summation-gamma" => IdentityKind::SummationGamma,
        "g-from-sine" => IdentityKind::GFromSineProduct {
            r: p.need_r()?,
            depth: p.depth,
        },
        "gamma-equal-periods" => IdentityKind::GammaEqualPeriods { depth: p.depth },
        "g-shift" => IdentityKind::GShift {
            r: p.need_r()?,
            j: p.j,
        },
        "g-inversion" => IdentityKind::GInversion {
            r: p.need_r()?,
            j: p.j,
        },
        "g-negation" => IdentityKind::GNegation { r: p.need_r()? },
        "g-pair" => IdentityKind::GPair {
            r: p.need_r()?,
            j: p.j,
        },
        "sine-shift" => IdentityKind::SineShift {
            r: p.need_r()?,
            j: p.j,
        },
        "sine-reflection" => IdentityKind::SineReflection { r: p.need_r()? },
        other => unreachable!("canonical_identity returned {other}"),
    };
    let summary = identities::sweep(kind, count, seed, &policy, None)?;
    let all_pass = summary.pass_count == summary.count;
    sink.sweep_summary(&summary);
    Ok(if all_pass { 0 } else { 1 })
}
