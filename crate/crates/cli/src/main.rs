use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use fourier_multipliers::continuous::assemble_norm_report;
use fourier_multipliers::discrete::{assemble_sequence_report, SeriesConfig};
use fourier_multipliers::function::{Family, FunctionDescriptor, SampledFunction, SampledTail};
use fourier_multipliers::harness::{
    continuous_corpus, discrete_corpus, full_corpus, quasiconvexity_corpus, run_counterexample,
    run_embedding_report, run_quasiconvexity_check,
};
use fourier_multipliers::periodic::{
    multiplier_apply_periodic, series_decomposition_trace, theorem_b_remainder_norm, write_series_decomposition_csv,
    PeriodicFunction, SeriesOptions,
};
use fourier_multipliers::quadrature::{Finiteness, QuadratureConfig};
use fourier_multipliers::report::{Certificate, SCHEMA_VERSION};
use fourier_multipliers::sequence::{SequenceDescriptor, SequenceTail};
use fourier_multipliers::transform::{
    decomposition_trace, multiplier_apply, MultiplierGrid, theorem_a_remainder_norm, write_decomposition_csv,
};
use fourier_multipliers::Error;

#[derive(Parser)]
#[command(name = "fmult", version, about = "Certify and apply Fourier multipliers on L¹(ℝ) and L¹(𝕋)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Norms of a function in ℋ, ℬ and ℬ_p.
    Norms {
        #[command(flatten)]
        source: FunctionSource,
        #[command(flatten)]
        exponents: Exponents,
        #[command(flatten)]
        common: Common,
    },
    /// Norms of a sequence in h, bv and bv_p.
    SeqNorms {
        #[command(flatten)]
        source: SequenceSource,
        #[command(flatten)]
        exponents: Exponents,
        #[command(flatten)]
        common: Common,
    },
    /// Membership certificates; exits with 1 unless the candidate is certified in ℋ (or h).
    Certify {
        #[command(flatten)]
        source: FunctionSource,
        /// A sequence CSV (`k, re, im`) instead of a function.
        #[arg(long, conflicts_with_all = ["family", "function"])]
        sequence: Option<PathBuf>,
        #[command(flatten)]
        exponents: Exponents,
        #[command(flatten)]
        common: Common,
    },
    /// Apply the multiplier λ (given by the function flags) to an integrable f.
    Apply {
        #[command(flatten)]
        source: FunctionSource,
        #[command(flatten)]
        input: InputSource,
        #[command(flatten)]
        common: Common,
        /// Write the output function g as CSV (`x, re, im`).
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Apply a sequence multiplier to a periodic function.
    ApplyPeriodic {
        #[command(flatten)]
        source: SequenceSource,
        #[command(flatten)]
        input: InputSource,
        /// Grid size when f is given by a family (a power of two ≥ 64).
        #[arg(long, default_value_t = 1024)]
        points: usize,
        #[command(flatten)]
        common: Common,
        /// Write g as CSV (`x, re, im`).
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Remainder of the transform after its main term, against ‖λ'‖_L + S_{λ'}.
    VerifyThma {
        #[command(flatten)]
        source: FunctionSource,
        #[command(flatten)]
        common: Common,
        /// Write the decomposition on a frequency grid as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Remainder of the series after its main term, against ‖Δλ‖₁ + s_λ.
    VerifyThmb {
        #[command(flatten)]
        source: SequenceSource,
        #[command(flatten)]
        common: Common,
        /// Write the decomposition on a grid of y as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Norms of the built-in corpus and the embedding implication tables.
    EmbedReport {
        /// `continuous`, `discrete` or `all`.
        #[arg(long, default_value = "all")]
        corpus: String,
        #[command(flatten)]
        exponents: Exponents,
        #[command(flatten)]
        common: Common,
    },
    /// S_{λ'} ≤ ln 3 · ∫ t|dλ'(t)| over the built-in entries with second derivatives.
    Quasiconvexity {
        #[command(flatten)]
        common: Common,
    },
    /// λ = 1/(1+x²): finite 𝒜_q λ but a non-integrable Hilbert transform.
    Counterexample {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// `key = value` quadrature configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Exponents {
    /// Exponent p of ℬ_p / bv_p; repeatable.
    #[arg(long = "p", value_name = "P")]
    p: Vec<f64>,
}

#[derive(Args)]
struct FunctionSource {
    /// Closed-form family name.
    #[arg(long, conflicts_with = "function")]
    family: Option<String>,
    /// Family parameter `key=value`; repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Sampled function CSV (`x, re, im`), zero beyond the grid.
    #[arg(long)]
    function: Option<PathBuf>,
}

#[derive(Args)]
struct SequenceSource {
    /// Sequence family name.
    #[arg(long, conflicts_with = "sequence")]
    family: Option<String>,
    /// Family parameter `key=value`; repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Sequence CSV (`k, re, im`), zero beyond the window.
    #[arg(long)]
    sequence: Option<PathBuf>,
}

#[derive(Args)]
struct InputSource {
    /// Input function CSV (`x, re, im`).
    #[arg(long, conflicts_with = "input_family")]
    input: Option<PathBuf>,
    /// Closed-form family for the input function.
    #[arg(long)]
    input_family: Option<String>,
    /// Input family parameter `key=value`; repeatable.
    #[arg(long = "input-param", value_name = "KEY=VALUE")]
    input_params: Vec<String>,
}

enum Failure {
    Usage(String),
    Assertion(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn parse_params(raw: &[String]) -> Result<BTreeMap<String, f64>, Failure> {
    let mut out = BTreeMap::new();
    for item in raw {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("parameter `{item}` is not of the form key=value")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("parameter `{item}` has a non-numeric value")))?;
        if out.insert(k.trim().to_string(), v).is_some() {
            return Err(Failure::Usage(format!("parameter `{}` given twice", k.trim())));
        }
    }
    Ok(out)
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure::Usage(format!("cannot open {}: {e}", path.display())))
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Usage(format!("cannot create {}: {e}", path.display())))
}

fn family_function(name: &str, params: &[String]) -> Result<FunctionDescriptor, Failure> {
    Ok(Family::from_name(name, &parse_params(params)?)?.into())
}

impl FunctionSource {
    fn load(&self) -> Result<FunctionDescriptor, Failure> {
        match (&self.family, &self.function) {
            (Some(name), None) => family_function(name, &self.params),
            (None, Some(path)) => {
                if !self.params.is_empty() {
                    return Err(Failure::Usage("--param needs --family".into()));
                }
                Ok(FunctionDescriptor::Sampled(SampledFunction::read_csv(open(path)?, SampledTail::Zero)?))
            }
            _ => Err(Failure::Usage("give exactly one of --family or --function".into())),
        }
    }
}

impl SequenceSource {
    fn load(&self) -> Result<SequenceDescriptor, Failure> {
        match (&self.family, &self.sequence) {
            (Some(name), None) => Ok(SequenceDescriptor::from_name(name, &parse_params(&self.params)?)?),
            (None, Some(path)) => {
                if !self.params.is_empty() {
                    return Err(Failure::Usage("--param needs --family".into()));
                }
                Ok(SequenceDescriptor::read_csv(open(path)?, SequenceTail::Zero)?)
            }
            _ => Err(Failure::Usage("give exactly one of --family or --sequence".into())),
        }
    }
}

impl Common {
    fn config(&self) -> Result<QuadratureConfig, Failure> {
        let cfg = match &self.config {
            Some(path) => QuadratureConfig::from_file(path)?,
            None => QuadratureConfig::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn emit(&self, report: &impl Serialize) -> Outcome {
        let mut text = serde_json::to_string_pretty(report).map_err(|e| Failure::Usage(e.to_string()))?;
        text.push('\n');
        let written = match &self.out {
            Some(path) => create(path)?.write_all(text.as_bytes()),
            None => std::io::stdout().lock().write_all(text.as_bytes()),
        };
        written.map_err(|e| Failure::Usage(format!("cannot write the report: {e}")))
    }
}

impl Exponents {
    fn or(&self, default: &[f64]) -> Vec<f64> {
        if self.p.is_empty() {
            default.to_vec()
        } else {
            self.p.clone()
        }
    }
}

#[derive(Serialize)]
struct CertifyReport {
    schema_version: u32,
    kind: &'static str,
    certified: bool,
    certificates: BTreeMap<String, Certificate>,
    finiteness_flags: BTreeMap<String, Finiteness>,
}

#[derive(Serialize)]
struct Verification<R: Serialize> {
    passed: bool,
    #[serde(flatten)]
    report: R,
}

/// The application report without the sampled output, which goes to `--trace`.
#[derive(Serialize)]
struct ApplySummary {
    schema_version: u32,
    limit_l: Complex64,
    identity_error: f64,
    identity_threshold: f64,
    lambda1_tail_mass: f64,
    input_l1: f64,
    input_l1_grid: f64,
    output_l1_grid: f64,
}

#[derive(Serialize)]
struct PeriodicSummary {
    schema_version: u32,
    points: usize,
    identity_error: f64,
    input_l1: f64,
    output_l1: f64,
}

fn frequency_grid() -> Vec<f64> {
    let positive: Vec<f64> = (0..128).map(|i| 0.25 * 256f64.powf(i as f64 / 127.0)).collect();
    positive.iter().rev().map(|x| -x).chain(positive.iter().copied()).collect()
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Norms { source, exponents, common } => {
            let cfg = common.config()?;
            common.emit(&assemble_norm_report(&source.load()?, &exponents.or(&[2.0]), &cfg)?)
        }
        Command::SeqNorms { source, exponents, common } => {
            let cfg = SeriesConfig::from(&common.config()?);
            common.emit(&assemble_sequence_report(&source.load()?, &exponents.or(&[2.0]), &cfg)?)
        }
        Command::Certify { source, sequence, exponents, common } => {
            let cfg = common.config()?;
            let p = exponents.or(&[2.0]);
            let report = match sequence {
                Some(path) => {
                    let lambda = SequenceDescriptor::read_csv(open(&path)?, SequenceTail::Zero)?;
                    let r = assemble_sequence_report(&lambda, &p, &SeriesConfig::from(&cfg))?;
                    let mut certificates: BTreeMap<String, Certificate> =
                        r.bvp_certificates.iter().map(|(k, c)| (format!("bvp_{k}"), *c)).collect();
                    certificates.insert("h".into(), r.h_certificate);
                    certificates.insert("bv".into(), r.bv_certificate);
                    CertifyReport {
                        schema_version: SCHEMA_VERSION,
                        kind: "sequence",
                        certified: r.h_certificate == Certificate::Member,
                        certificates,
                        finiteness_flags: r.finiteness_flags,
                    }
                }
                None => {
                    let r = assemble_norm_report(&source.load()?, &p, &cfg)?;
                    let mut certificates: BTreeMap<String, Certificate> =
                        r.bp_certificates.iter().map(|(k, c)| (format!("bp_{k}"), *c)).collect();
                    certificates.insert("h".into(), r.h_certificate);
                    certificates.insert("cb".into(), r.cb_certificate);
                    CertifyReport {
                        schema_version: SCHEMA_VERSION,
                        kind: "function",
                        certified: r.h_certificate == Certificate::Member,
                        certificates,
                        finiteness_flags: r.finiteness_flags,
                    }
                }
            };
            common.emit(&report)?;
            if report.certified {
                Ok(())
            } else {
                Err(Failure::Assertion("the candidate is not certified as a multiplier".into()))
            }
        }
        Command::Apply { source, input, common, trace } => {
            let cfg = common.config()?;
            let lambda = source.load()?;
            let f = match (&input.input, &input.input_family) {
                (Some(path), None) => {
                    FunctionDescriptor::Sampled(SampledFunction::read_csv(open(path)?, SampledTail::Zero)?)
                }
                (None, Some(name)) => family_function(name, &input.input_params)?,
                _ => return Err(Failure::Usage("give exactly one of --input or --input-family".into())),
            };
            let app = multiplier_apply(&lambda, &f, &cfg)?;
            if let Some(path) = trace {
                let g = &app.g;
                SampledFunction::from_fn(MultiplierGrid::default().nodes(), SampledTail::Zero, |x| g.value(x))?
                    .write_csv(create(&path)?)?;
            }
            let passed = app.identity_error <= app.identity_threshold;
            let summary = ApplySummary {
                schema_version: app.schema_version,
                limit_l: app.limit_l,
                identity_error: app.identity_error,
                identity_threshold: app.identity_threshold,
                lambda1_tail_mass: app.lambda1_tail_mass,
                input_l1: app.input_l1,
                input_l1_grid: app.input_l1_grid,
                output_l1_grid: app.output_l1_grid,
            };
            common.emit(&Verification { passed, report: summary })?;
            if passed {
                Ok(())
            } else {
                Err(Failure::Assertion(format!(
                    "identity error {:e} exceeds {:e}",
                    app.identity_error, app.identity_threshold
                )))
            }
        }
        Command::ApplyPeriodic { source, input, points, common, trace } => {
            let lambda = source.load()?;
            let f = match (&input.input, &input.input_family) {
                (Some(path), None) => PeriodicFunction::read_csv(open(path)?)?,
                (None, Some(name)) => {
                    let g = family_function(name, &input.input_params)?;
                    PeriodicFunction::from_fn(points, |x| g.value(x))?
                }
                _ => return Err(Failure::Usage("give exactly one of --input or --input-family".into())),
            };
            let app = multiplier_apply_periodic(&lambda, &f)?;
            if let Some(path) = trace {
                app.g.write_csv(create(&path)?)?;
            }
            common.emit(&PeriodicSummary {
                schema_version: app.schema_version,
                points: app.g.len(),
                identity_error: app.identity_error,
                input_l1: f.l1_norm(),
                output_l1: app.g.l1_norm(),
            })
        }
        Command::VerifyThma { source, common, trace } => {
            let cfg = common.config()?;
            let lambda = source.load()?;
            let norm = theorem_a_remainder_norm(&lambda, &cfg)?;
            if let Some(path) = trace {
                write_decomposition_csv(&decomposition_trace(&lambda, &frequency_grid(), &cfg)?, create(&path)?)?;
            }
            let passed = norm.finiteness == Finiteness::Finite && norm.theta_hat.is_finite();
            common.emit(&Verification { passed, report: &norm })?;
            if passed {
                Ok(())
            } else {
                Err(Failure::Assertion(format!("the remainder is not certified integrable ({})", norm.finiteness.as_str())))
            }
        }
        Command::VerifyThmb { source, common, trace } => {
            common.config()?;
            let lambda = source.load()?;
            let opts = SeriesOptions::default();
            let norm = theorem_b_remainder_norm(&lambda, &opts)?;
            if let Some(path) = trace {
                let ys: Vec<f64> = (1..=512).map(|j| std::f64::consts::PI * j as f64 / 512.0).collect();
                write_series_decomposition_csv(&series_decomposition_trace(&lambda, &ys, &opts)?, create(&path)?)?;
            }
            let passed = norm.finiteness == Finiteness::Finite && norm.theta_hat.is_finite();
            common.emit(&Verification { passed, report: &norm })?;
            if passed {
                Ok(())
            } else {
                Err(Failure::Assertion(format!("the remainder is not certified integrable ({})", norm.finiteness.as_str())))
            }
        }
        Command::EmbedReport { corpus, exponents, common } => {
            let cfg = common.config()?;
            let entries = match corpus.as_str() {
                "continuous" => continuous_corpus(),
                "discrete" => discrete_corpus(),
                "all" => full_corpus(),
                other => return Err(Failure::Usage(format!("unknown corpus `{other}`"))),
            };
            let report = run_embedding_report(&entries, &exponents.or(&[1.0, 2.0, 4.0]), &cfg)?;
            common.emit(&report)?;
            let mut problems: Vec<String> = report
                .violations
                .iter()
                .map(|v| format!("{}: finite in {} but diverged in {}", v.entry, v.smaller, v.larger))
                .collect();
            for e in &report.entries {
                for (flag, want, got) in &e.expected_mismatches {
                    problems.push(format!("{}: {flag} expected {} but computed {}", e.name, want.as_str(), got.as_str()));
                }
            }
            if problems.is_empty() {
                Ok(())
            } else {
                Err(Failure::Assertion(problems.join("\n")))
            }
        }
        Command::Quasiconvexity { common } => {
            let cfg = common.config()?;
            let report = run_quasiconvexity_check(&quasiconvexity_corpus(), &cfg)?;
            common.emit(&report)?;
            let problems: Vec<String> = report
                .rows
                .iter()
                .filter(|r| !r.holds)
                .map(|r| {
                    format!(
                        "{}: S = {} (± {:e}) exceeds ln 3 · Q = {} (Q ± {:e})",
                        r.name, r.s_value, r.s_error, r.ln3_bound, r.quasiconvexity_error
                    )
                })
                .collect();
            if problems.is_empty() {
                Ok(())
            } else {
                Err(Failure::Assertion(problems.join("\n")))
            }
        }
        Command::Counterexample { common } => {
            let cfg = common.config()?;
            let report = run_counterexample(&cfg)?;
            common.emit(&report)?;
            let mut problems = Vec::new();
            for a in report.aq.iter().filter(|a| !a.finiteness.is_finite()) {
                problems.push(format!("𝒜_{} λ = {} is {}", a.q, a.value, a.finiteness.as_str()));
            }
            if !report.hilbert.holds {
                problems.push(format!(
                    "Hilbert transform error {:e} at x = {} exceeds {:e}",
                    report.hilbert.max_error, report.hilbert.worst_x, report.hilbert.tolerance
                ));
            }
            for g in report.growth.iter().filter(|g| !g.holds) {
                problems.push(format!(
                    "increment over [{}, {}] is {} ({:.2}% from 2 ln 10)",
                    g.from,
                    g.to,
                    g.increment,
                    100.0 * g.deviation
                ));
            }
            if problems.is_empty() {
                Ok(())
            } else {
                Err(Failure::Assertion(problems.join("\n")))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Assertion(msg)) => {
            eprintln!("assertion failed:\n{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nRun `fmult --help` for usage.");
            ExitCode::from(2)
        }
    }
}
