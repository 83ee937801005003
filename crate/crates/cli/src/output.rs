//! Output shaping: human, JSON (schema 1), and CSV, buffered so `--out`
//! can redirect everything written to stdout into a file.

use clap::ValueEnum;
use num_complex::Complex64;
use serde_json::json;
use std::io::Write;
use std::path::{Path, PathBuf};

use multigamma::identities::{IdentityReport, SampleValue, SweepSummary};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

pub struct Sink {
    pub format: Format,
    out: Option<PathBuf>,
    buf: String,
}

fn fmt_c(z: Complex64) -> String {
    if z.im >= 0.0 || z.im.is_nan() {
        format!("{}+{}i", z.re, z.im)
    } else {
        format!("{}-{}i", z.re, -z.im)
    }
}

fn fmt_sample(sample: &std::collections::BTreeMap<String, SampleValue>) -> String {
    sample
        .iter()
        .map(|(k, v)| {
            let val = match v {
                SampleValue::Complex([re, im]) => fmt_c(Complex64::new(*re, *im)),
                SampleValue::Int(n) => n.to_string(),
                SampleValue::Text(t) => t.clone(),
            };
            format!("{k}={val}")
        })
        .collect::<Vec<_>>()
        .join(";")
}

impl Sink {
    pub fn new(format: Format, out: Option<&Path>) -> Result<Self, String> {
        Ok(Sink {
            format,
            out: out.map(|p| p.to_path_buf()),
            buf: String::new(),
        })
    }

    pub fn line(&mut self, s: impl AsRef<str>) {
        self.buf.push_str(s.as_ref());
        self.buf.push('\n');
    }

    pub fn eval_result(
        &mut self,
        target: &str,
        value: Complex64,
        bound: f64,
        representation: &str,
        flags: &[String],
    ) {
        match self.format {
            Format::Human => {
                self.line(format!("value = {}", fmt_c(value)));
                self.line(format!("error_bound = {bound:e}"));
                self.line(format!("representation = {representation}"));
                for f in flags {
                    self.line(format!("flag: {f}"));
                }
            }
            Format::Json => {
                let doc = json!({
                    "schema": SCHEMA_VERSION,
                    "command": "eval",
                    "target": target,
                    "value": [value.re, value.im],
                    "error_bound": bound,
                    "representation": representation,
                    "flags": flags,
                });
                self.line(doc.to_string());
            }
            Format::Csv => {
                self.line("target,value_re,value_im,error_bound,representation,flags");
                self.line(format!(
                    "{target},{},{},{bound:e},{representation},{}",
                    value.re,
                    value.im,
                    flags.join("|")
                ));
            }
        }
    }

    pub fn check_report(&mut self, report: &IdentityReport) {
        match self.format {
            Format::Human => {
                self.line(format!("identity = {}", report.identity_id));
                self.line(format!("pass = {}", report.pass));
                self.line(format!("lhs = {}", fmt_c(report.lhs)));
                self.line(format!("rhs = {}", fmt_c(report.rhs)));
                self.line(format!("rel_residual = {:e}", report.rel_residual));
                self.line(format!("abs_residual = {:e}", report.abs_residual));
                self.line(format!("threshold = {:e}", report.threshold));
                self.line(format!("sample: {}", fmt_sample(&report.sample)));
                for (k, v) in &report.extras {
                    self.line(format!("extra {k} = {v:e}"));
                }
            }
            Format::Json => {
                let doc = json!({
                    "schema": SCHEMA_VERSION,
                    "command": "check",
                    "report": report,
                });
                self.line(doc.to_string());
            }
            Format::Csv => {
                self.line(Self::report_csv_header());
                self.line(Self::report_csv_row(0, report));
            }
        }
    }

    fn report_csv_header() -> &'static str {
        "index,identity,pass,rel_residual,abs_residual,lhs_re,lhs_im,rhs_re,rhs_im,threshold,seed,sample"
    }

    fn report_csv_row(index: usize, r: &IdentityReport) -> String {
        format!(
            "{index},{},{},{:e},{:e},{},{},{},{},{:e},{},{}",
            r.identity_id,
            r.pass,
            r.rel_residual,
            r.abs_residual,
            r.lhs.re,
            r.lhs.im,
            r.rhs.re,
            r.rhs.im,
            r.threshold,
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
            fmt_sample(&r.sample)
        )
    }

    pub fn sweep_summary(&mut self, summary: &SweepSummary) {
        match self.format {
            Format::Human => {
                for (i, r) in summary.reports.iter().enumerate() {
                    self.line(format!(
                        "[{i}] {} rel_residual = {:e} ({})",
                        if r.pass { "pass" } else { "FAIL" },
                        r.rel_residual,
                        fmt_sample(&r.sample)
                    ));
                }
                self.line(format!(
                    "summary: identity = {}, pass_count = {}/{}, max_residual = {:e}, seed = {}",
                    summary.identity_id,
                    summary.pass_count,
                    summary.count,
                    summary.max_rel_residual,
                    summary.seed
                ));
            }
            Format::Json => {
                let doc = json!({
                    "schema": SCHEMA_VERSION,
                    "command": "sweep",
                    "summary": {
                        "identity_id": summary.identity_id,
                        "count": summary.count,
                        "pass_count": summary.pass_count,
                        "max_rel_residual": summary.max_rel_residual,
                        "seed": summary.seed,
                    },
                    "reports": summary.reports,
                });
                self.line(doc.to_string());
            }
            Format::Csv => {
                self.line(Self::report_csv_header());
                for (i, r) in summary.reports.iter().enumerate() {
                    self.line(Self::report_csv_row(i, r));
                }
                self.line(format!(
                    "# summary identity={} pass_count={} count={} max_residual={:e} seed={}",
                    summary.identity_id,
                    summary.pass_count,
                    summary.count,
                    summary.max_rel_residual,
                    summary.seed
                ));
            }
        }
    }

    pub fn finish(&mut self) -> Result<(), String> {
        match &self.out {
            Some(path) => std::fs::write(path, &self.buf)
                .map_err(|e| format!("cannot write {}: {e}", path.display())),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(self.buf.as_bytes())
                    .and_then(|_| stdout.flush())
                    .map_err(|e| format!("cannot write to stdout: {e}"))
            }
        }
    }
}
