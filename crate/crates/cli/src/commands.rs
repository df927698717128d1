//! Command-line surface and dispatch.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use hcf_core::algebra::random::{center_hermitian, seeded_rng, two_step};
use hcf_core::curvature::trace_checks;
use hcf_core::flow::{Diagnostics, FlowTrace};
use hcf_core::linalg::{frobenius_norm, identity};
use hcf_core::soliton::{functional_f, moment_defect, TransformKind};
use hcf_core::{
    catalog, integrate_bracket_flow, integrate_metric_flow, integrate_normalized_flow, k_from_bracket, k_from_metric,
    soliton_solve, uniqueness_probe, validate, Config, Descriptor, Matrix, Termination, C64,
};

use crate::algebra_file::{parse_algebra, to_file, write_algebra, AlgebraFile};
use crate::emit::{plots_from_csv, trace_csv};
use crate::error::{CliError, Result};
use crate::report::{
    matrix_rows, InputEcho, Payload, ProbeLimitPayload, RunReport, Settings, SolitonPayload, TraceRow, TraceSummary,
};

#[derive(Debug, Parser)]
#[command(name = "hcf", version, about = "Hermitian curvature flow on complex 2-step nilpotent Lie algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate an algebra; reports center, derivations, 2-step flag.
    Validate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Curvature operator K, its spectrum, and K(h) when the file has a metric.
    Curvature {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Unnormalized bracket flow.
    Flow {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        integration: IntegrationArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Norm-normalized bracket flow, stopped at a fixed point.
    NormalizedFlow {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        integration: IntegrationArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Metric flow h' = -K(h) on the fixed bracket, from the file's metric or the identity.
    MetricFlow {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        integration: IntegrationArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Solve K = c Id + D with D a derivation and classify.
    Soliton {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check <K, E> = 1/2 <pi(E) mu, mu> on random brackets and center-supported E.
    MomentTest {
        #[arg(long, default_value_t = 6)]
        dim: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Normalized flows from exp(E)-transformed starts; compares the limits.
    ProbeUniqueness {
        #[command(flatten)]
        input: InputArgs,
        /// Number of starting points.
        #[arg(long, default_value_t = 10)]
        samples: usize,
        /// Seed of the first starting point; the others use consecutive seeds.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Transform::Center)]
        transform: Transform,
        /// Size of the random generator E.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        /// Fingerprint tolerance for declaring the limits equal.
        #[arg(long, default_value_t = 1e-8)]
        match_tol: f64,
        #[arg(long, default_value_t = 1e3)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-9)]
        rel_tol: f64,
        #[arg(long, default_value_t = 1e-12)]
        fixed_point_tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Build a catalog algebra and emit it as an algebra file.
    Catalog {
        /// heisenberg3, weighted_h5, heisenberg, free_two_step, abelian or direct_sum.
        #[arg(long)]
        name: String,
        #[command(flatten)]
        params: CatalogParams,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Transform {
    Center,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Plot {
    None,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Algebra file (JSON).
    #[arg(long, conflicts_with = "catalog")]
    pub input: Option<PathBuf>,
    /// Catalog algebra, configured with the catalog parameters.
    #[arg(long)]
    pub catalog: Option<String>,
    #[command(flatten)]
    pub params: CatalogParams,
}

#[derive(Debug, Clone, Args)]
pub struct CatalogParams {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub s: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub s_im: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a_im: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub b_im: f64,
    /// heisenberg: dimension 2m+1. free_two_step: number of generators.
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Dimension of abelian.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// First summand file of direct_sum.
    #[arg(long)]
    pub first: Option<PathBuf>,
    /// Second summand file of direct_sum.
    #[arg(long)]
    pub second: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct IntegrationArgs {
    #[arg(long, default_value_t = 10.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub rel_tol: f64,
    /// Residual at which the normalized flow stops.
    #[arg(long, default_value_t = 1e-12)]
    pub fixed_point_tol: f64,
    /// Record this many sample times instead of every accepted step.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Spacing of the sample times: uniform on (0, t_end], or geometric on
    /// [t_end/1000, t_end].
    #[arg(long, value_enum, default_value_t = Spacing::Linear)]
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output directory; without it the result goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Stdout format. With --out, report.json and trace.csv are always written
    /// and `json` also embeds the full trace in the report.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// SVG plots of trace commands, written to --out.
    #[arg(long, value_enum, default_value_t = Plot::None)]
    pub plot: Plot,
}

pub const CATALOG_NAMES: &[&str] = &["heisenberg3", "weighted_h5", "heisenberg", "free_two_step", "abelian", "direct_sum"];

/// A catalog algebra and the name recorded for it.
pub fn catalog_algebra(name: &str, p: &CatalogParams) -> Result<(Descriptor, String)> {
    let s = C64::new(p.s, p.s_im);
    let a = C64::new(p.a, p.a_im);
    let b = C64::new(p.b, p.b_im);
    let d = match name {
        "heisenberg3" => (catalog::heisenberg3(s)?, format!("heisenberg3(s={s})")),
        "weighted_h5" => (catalog::weighted_h5(a, b)?, format!("weighted_h5(a={a}, b={b})")),
        "heisenberg" => (catalog::heisenberg(p.m)?, format!("heisenberg({})", 2 * p.m + 1)),
        "free_two_step" => (catalog::free_two_step(p.m)?, format!("free_two_step({})", p.m)),
        "abelian" => (catalog::abelian(p.n)?, format!("abelian({})", p.n)),
        "direct_sum" => {
            let (Some(f1), Some(f2)) = (&p.first, &p.second) else {
                return Err(CliError::Usage("direct_sum needs --first and --second".into()));
            };
            let (a1, a2) = (parse_algebra(f1)?, parse_algebra(f2)?);
            let d = catalog::direct_sum(&a1.descriptor.bracket, &a2.descriptor.bracket)?;
            let label = |f: &AlgebraFile, path: &Path| f.name.clone().unwrap_or_else(|| path.display().to_string());
            let name = format!("{} + {}", label(&a1.file, f1), label(&a2.file, f2));
            (d, name)
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown catalog algebra `{other}`; available: {}",
                CATALOG_NAMES.join(", ")
            )))
        }
    };
    Ok(d)
}

/// The selected algebra, its optional metric and the echo for the report.
fn load_input(args: &InputArgs) -> Result<(Descriptor, Option<Matrix>, InputEcho)> {
    match (&args.input, &args.catalog) {
        (Some(path), None) => {
            let parsed = parse_algebra(path)?;
            let echo = InputEcho {
                source: format!("file:{}", path.display()),
                algebra: parsed.file,
            };
            Ok((parsed.descriptor, parsed.metric, echo))
        }
        (None, Some(name)) => {
            let (desc, label) = catalog_algebra(name, &args.params)?;
            let echo = InputEcho {
                source: format!("catalog:{name}"),
                algebra: to_file(&desc.bracket, Some(&label), None),
            };
            Ok((desc, None, echo))
        }
        _ => Err(CliError::Usage("give exactly one of --input or --catalog".into())),
    }
}

fn integrator_config(args: &IntegrationArgs) -> Result<Config> {
    let mut cfg = Config::default()
        .with_t_end(args.t_end)
        .with_tolerances(args.rel_tol, args.rel_tol * 1e-3)
        .with_fixed_point_tol(args.fixed_point_tol);
    if let Some(n) = args.samples {
        if n == 0 {
            return Err(CliError::Usage("--samples must be positive".into()));
        }
        let times = match args.spacing {
            Spacing::Linear => (1..=n).map(|i| args.t_end * i as f64 / n as f64).collect(),
            Spacing::Log if n == 1 => vec![args.t_end],
            Spacing::Log => (0..n)
                .map(|i| args.t_end * 10f64.powf(-3.0 * (1.0 - i as f64 / (n - 1) as f64)))
                .collect(),
        };
        cfg = cfg.with_sample_times(times);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn settings(cfg: &Config) -> Settings {
    Settings {
        t_end: cfg.t_end,
        rel_tol: cfg.rel_tol,
        abs_tol: cfg.abs_tol,
        fixed_point_tol: cfg.fixed_point_tol,
        sample_times: cfg.sample_times.as_ref().map(Vec::len),
    }
}

/// What a command produced before emission.
pub struct Outcome {
    pub report: RunReport,
    /// `(dim, rows)` for trace commands.
    pub trace: Option<(usize, Vec<TraceRow>)>,
    /// Algebra file written by `catalog`.
    pub algebra: Option<AlgebraFile>,
}

impl Outcome {
    fn report(report: RunReport) -> Self {
        Outcome {
            report,
            trace: None,
            algebra: None,
        }
    }
}

fn flow_rows(trace: &FlowTrace<f64>) -> Vec<TraceRow> {
    trace.samples.iter().map(|s| TraceRow::new(s.t, &s.diag)).collect()
}

fn summary(dim: usize, rows: &[TraceRow], accepted_steps: usize, embed: bool) -> TraceSummary {
    TraceSummary {
        dim,
        samples: rows.len(),
        accepted_steps,
        last: rows.last().cloned(),
        rows: embed.then(|| rows.to_vec()),
    }
}

#[allow(clippy::too_many_arguments)]
fn flow_outcome(
    command: &str,
    input: InputEcho,
    cfg: &Config,
    termination: Termination,
    rows: Vec<TraceRow>,
    dim: usize,
    accepted_steps: usize,
    extra: (Option<SolitonPayload>, Option<Matrix>),
    embed: bool,
) -> Outcome {
    let mut report = RunReport::new(
        command,
        Payload::Flow {
            trace: summary(dim, &rows, accepted_steps, embed),
            limit: extra.0,
            metric: extra.1.as_ref().map(matrix_rows),
        },
    );
    report.input = Some(input);
    report.settings = Some(settings(cfg));
    report.termination = termination.as_str().to_string();
    Outcome {
        report,
        trace: Some((dim, rows)),
        algebra: None,
    }
}

/// Runs one command. Wall time is filled in here; everything else in the
/// outcome depends only on the arguments.
pub fn run(cmd: &Command) -> Result<Outcome> {
    let start = Instant::now();
    let mut outcome = dispatch(cmd)?;
    outcome.report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(outcome)
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Validate { input, .. } => {
            let (d, _, echo) = load_input(input)?;
            let mut report = RunReport::new(
                "validate",
                Payload::Validate {
                    dim: d.dim(),
                    two_step: d.is_two_step,
                    abelian: d.is_abelian(),
                    center_dim: d.center_dim(),
                    derivation_dim: d.derivation_basis().len(),
                    jacobi_residual: d.jacobi_residual,
                    norm_sq: d.bracket.norm_sq(),
                },
            );
            report.input = Some(echo);
            Ok(Outcome::report(report))
        }
        Command::Curvature { input, .. } => {
            let (d, metric, echo) = load_input(input)?;
            d.require_two_step()?;
            let k = k_from_bracket(&d.bracket);
            let checks = trace_checks(&d.bracket);
            let f_value = if d.is_abelian() { None } else { Some(functional_f(&d.bracket)?) };
            let (metric_tensor, metric_spectrum) = match &metric {
                Some(h) => {
                    let mk = k_from_metric(&d.bracket, h)?;
                    (Some(matrix_rows(&mk.tensor)), Some(mk.operator_spectrum()))
                }
                None => (None, None),
            };
            let mut report = RunReport::new(
                "curvature",
                Payload::Curvature {
                    k: matrix_rows(&k.matrix),
                    spectrum: k.spectrum(),
                    tr_k: checks.tr_k,
                    half_norm_sq: checks.half_norm_sq,
                    static_residual: checks.static_residual,
                    f_value,
                    metric_tensor,
                    metric_spectrum,
                },
            );
            report.input = Some(echo);
            Ok(Outcome::report(report))
        }
        Command::Flow {
            input,
            integration,
            output,
        } => {
            let (d, _, echo) = load_input(input)?;
            let cfg = integrator_config(integration)?;
            let trace = integrate_bracket_flow(&d, &cfg)?;
            let rows = flow_rows(&trace);
            let embed = output.format == Format::Json;
            Ok(flow_outcome("flow", echo, &cfg, trace.termination, rows, d.dim(), trace.accepted_steps, (None, None), embed))
        }
        Command::NormalizedFlow {
            input,
            integration,
            output,
        } => {
            let (d, _, echo) = load_input(input)?;
            let cfg = integrator_config(integration)?;
            let trace = integrate_normalized_flow(&d, &cfg)?;
            let limit = match trace.termination {
                Termination::FixedPoint => Some(SolitonPayload::from(&soliton_solve(&trace.last().bracket)?)),
                _ => None,
            };
            let rows = flow_rows(&trace);
            let embed = output.format == Format::Json;
            Ok(flow_outcome(
                "normalized-flow",
                echo,
                &cfg,
                trace.termination,
                rows,
                d.dim(),
                trace.accepted_steps,
                (limit, None),
                embed,
            ))
        }
        Command::MetricFlow {
            input,
            integration,
            output,
        } => {
            let (d, metric, echo) = load_input(input)?;
            d.require_two_step()?;
            let cfg = integrator_config(integration)?;
            let h0 = metric.unwrap_or_else(|| identity(d.dim()));
            let trace = integrate_metric_flow(&d, &h0, &cfg)?;
            // Diagnostics of the bracket written in an h-unitary frame.
            let rows = trace
                .samples
                .iter()
                .map(|s| Ok(TraceRow::new(s.t, &Diagnostics::compute(&k_from_metric(&d.bracket, &s.h)?.unitary_bracket, None))))
                .collect::<Result<Vec<_>>>()?;
            let last_h = trace.last().h.clone();
            let embed = output.format == Format::Json;
            let steps = rows.len().saturating_sub(1);
            Ok(flow_outcome("metric-flow", echo, &cfg, trace.termination, rows, d.dim(), steps, (None, Some(last_h)), embed))
        }
        Command::Soliton { input, .. } => {
            let (d, _, echo) = load_input(input)?;
            d.require_two_step()?;
            let rep = soliton_solve(&d.bracket)?;
            let mut report = RunReport::new("soliton", Payload::Soliton(SolitonPayload::from(&rep)));
            report.input = Some(echo);
            Ok(Outcome::report(report))
        }
        Command::MomentTest { dim, samples, seed, .. } => {
            if *samples == 0 {
                return Err(CliError::Usage("--samples must be positive".into()));
            }
            let n = *dim;
            let defects = (0..*samples as u64)
                .into_par_iter()
                .map(|i| {
                    let mut rng = seeded_rng(seed.wrapping_add(i));
                    let d = validate(two_step::<f64, _>(n, &mut rng)?)?;
                    let e = center_hermitian(&d, &mut rng);
                    let defect = moment_defect(&d, &e)?.abs();
                    let scale = d.bracket.norm_sq() * frobenius_norm(&e);
                    Ok((defect, if scale > 0.0 { defect / scale } else { defect }))
                })
                .collect::<std::result::Result<Vec<_>, hcf_core::Error>>()?;
            let (max_abs_defect, max_rel_defect) = defects.iter().fold((0.0f64, 0.0f64), |(a, r), (d, q)| (a.max(*d), r.max(*q)));
            let mut report = RunReport::new(
                "moment-test",
                Payload::MomentTest {
                    dim: n,
                    samples: *samples,
                    max_abs_defect,
                    max_rel_defect,
                },
            );
            report.seed = Some(*seed);
            Ok(Outcome::report(report))
        }
        Command::ProbeUniqueness {
            input,
            samples,
            seed,
            transform,
            scale,
            match_tol,
            t_end,
            rel_tol,
            fixed_point_tol,
            ..
        } => {
            let (d, _, echo) = load_input(input)?;
            let cfg = integrator_config(&IntegrationArgs {
                t_end: *t_end,
                rel_tol: *rel_tol,
                fixed_point_tol: *fixed_point_tol,
                samples: None,
                spacing: Spacing::Linear,
            })?;
            if *samples == 0 {
                return Err(CliError::Usage("--samples must be positive".into()));
            }
            let seeds: Vec<u64> = (0..*samples as u64).map(|i| seed.wrapping_add(i)).collect();
            let kind = match transform {
                Transform::Center => TransformKind::Center,
                Transform::Full => TransformKind::Full,
            };
            let rep = uniqueness_probe(&d, &seeds, kind, *scale, &cfg)?;
            let limits = rep
                .limits
                .iter()
                .map(|l| ProbeLimitPayload {
                    seed: l.seed,
                    termination: l.termination.as_str().to_string(),
                    residual: l.residual,
                    f_value: l.fingerprint.f_value,
                    spectrum: l.fingerprint.spectrum.clone(),
                    classification: l.soliton.classification.as_str().to_string(),
                })
                .collect();
            let all_fixed = rep.limits.iter().all(|l| l.termination == Termination::FixedPoint);
            let mut report = RunReport::new(
                "probe-uniqueness",
                Payload::Probe {
                    transform: format!("{transform:?}").to_lowercase(),
                    scale: *scale,
                    tolerance: *match_tol,
                    limits,
                    max_deviation: rep.max_deviation,
                    dims_agree: rep.dims_agree,
                    unique: rep.unique_within(*match_tol),
                },
            );
            report.input = Some(echo);
            report.seed = Some(*seed);
            report.settings = Some(settings(&cfg));
            report.termination = if all_fixed { "fixed_point" } else { "t_end" }.to_string();
            Ok(Outcome::report(report))
        }
        Command::Catalog { name, params, .. } => {
            let (d, label) = catalog_algebra(name, params)?;
            let algebra = to_file(&d.bracket, Some(&label), None);
            let report = RunReport::new("catalog", Payload::Catalog { algebra: algebra.clone() });
            Ok(Outcome {
                report,
                trace: None,
                algebra: Some(algebra),
            })
        }
    }
}

pub fn output_args(cmd: &Command) -> &OutputArgs {
    match cmd {
        Command::Validate { output, .. }
        | Command::Curvature { output, .. }
        | Command::Flow { output, .. }
        | Command::NormalizedFlow { output, .. }
        | Command::MetricFlow { output, .. }
        | Command::Soliton { output, .. }
        | Command::MomentTest { output, .. }
        | Command::ProbeUniqueness { output, .. }
        | Command::Catalog { output, .. } => output,
    }
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// Writes the outcome to `--out` or returns the text destined for stdout.
pub fn emit(outcome: &Outcome, out: &OutputArgs) -> Result<Option<String>> {
    let csv = match &outcome.trace {
        Some((dim, rows)) => Some(trace_csv(rows, *dim)?),
        None => None,
    };
    let report = serde_json::to_string_pretty(&outcome.report)? + "\n";
    let Some(dir) = &out.out else {
        if out.plot == Plot::Svg {
            return Err(CliError::Usage("--plot svg needs --out".into()));
        }
        return Ok(Some(match (out.format, csv) {
            (Format::Csv, Some(bytes)) => String::from_utf8(bytes).map_err(|e| CliError::Emit(e.to_string()))?,
            _ => report,
        }));
    };
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    write(&dir.join("report.json"), report.as_bytes())?;
    if let Some(bytes) = &csv {
        write(&dir.join("trace.csv"), bytes)?;
        if out.plot == Plot::Svg {
            for (name, svg) in plots_from_csv(bytes)? {
                write(&dir.join(name), svg.as_bytes())?;
            }
        }
    }
    if let Some(file) = &outcome.algebra {
        write_algebra(&dir.join("algebra.json"), file)?;
    }
    Ok(None)
}
