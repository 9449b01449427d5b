//! Command-line front end: every pipeline as a subcommand with CSV or
//! JSON output. Runs are fully determined by flags and seed; CSV floats
//! carry 17 significant digits so downstream plotting is lossless.

use std::fs;
use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lipwidth::approximation::{
    l2_error, project, EstimationMethod, OperatorSpec, PcExpansionConfig,
};
use lipwidth::error::Error;
use lipwidth::index_sets::enumerate_rearrangement;
use lipwidth::spectrum::{BWeights, SpectralFamily, Spectrum, SpectrumConfig};
use lipwidth::widths::{verify_bounds, width_curve, BoundKind};
use lipwidth::MultiIndex;

const SCHEMA: &str = "lipwidth/1";

#[derive(Parser)]
#[command(
    name = "lipwidth",
    version,
    about = "Sobolev weights, optimal index sets, and adaptive m-widths for operators under Gaussian measures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Grid {
    Geometric,
    Linear,
}

#[derive(Args, Clone)]
struct SpectrumArgs {
    /// Eigenvalue family: alg:alpha=A | exp:alpha=A,beta=B | dexp:alpha=A
    /// | file:PATH (spectrum JSON or a bare array of eigenvalues)
    #[arg(long, default_value = "alg:alpha=2")]
    family: String,

    /// Weight sequence: ones | sqrt-lambda | file:PATH (JSON array)
    #[arg(long)]
    b: Option<String>,

    /// Largest materialized coordinate index
    #[arg(long)]
    dim_cap: Option<usize>,
}

#[derive(Args, Clone)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,

    /// Write to a file instead of stdout
    #[arg(long)]
    output: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a spectrum and print its weighted eigenvalues
    Spectrum {
        #[command(flatten)]
        spectrum: SpectrumArgs,
        /// Demand square-summable weights (infinite-dimensional codomain)
        #[arg(long)]
        codomain_infinite: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Enumerate the head of the nonincreasing weight rearrangement
    Enumerate {
        #[command(flatten)]
        spectrum: SpectrumArgs,
        /// Number of indices to list
        #[arg(long)]
        count: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sample the adaptive m-width curve
    WidthCurve {
        #[command(flatten)]
        spectrum: SpectrumArgs,
        #[arg(long)]
        m_max: usize,
        #[arg(long, value_enum, default_value = "geometric")]
        grid: Grid,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Verify a decay bound against the enumerated widths
    Verify {
        #[command(flatten)]
        spectrum: SpectrumArgs,
        /// Which bound: 4.3 | 4.4a | 4.4b | 4.4c | sharp-exp
        #[arg(long)]
        theorem: String,
        /// Power for the impossibility bound (4.3)
        #[arg(long, default_value_t = 1)]
        p: u32,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        /// Prefactor for 4.4a / 4.4c (4.4a auto-tunes when omitted)
        #[arg(long)]
        eta: Option<f64>,
        /// Prefactor for the sharp exponential lower bound
        #[arg(long, default_value_t = 1.0)]
        prefactor: f64,
        #[arg(long)]
        k_max: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Kolmogorov width of a weighted p-ball in the q-norm
    Stesin {
        /// File with one positive weight per line
        #[arg(long)]
        weights: String,
        /// Outer exponent, "inf" allowed
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        /// Subspace dimension
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Project an operator on the optimal index head and report the error
    Approximate {
        #[command(flatten)]
        spectrum: SpectrumArgs,
        /// finite-pc:FILE | norm | capped:FILE
        #[arg(long)]
        operator: String,
        /// Head size (number of retained indices)
        #[arg(long)]
        s: usize,
        /// Monte Carlo samples for the error estimate
        #[arg(long, default_value_t = 2000)]
        mc: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tensor-quadrature nodes per dimension for the projection
        /// (finite expansions only; omitted means Monte Carlo projection)
        #[arg(long)]
        quad_nodes: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

/// 17-significant-digit float formatting shared by all CSV output.
fn f17(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_kv(text: &str, key: &str) -> Result<f64, Error> {
    for part in text.split(',') {
        if let Some((k, v)) = part.split_once('=') {
            if k.trim() == key {
                return v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad numeric value `{v}` for {key}")));
            }
        }
    }
    Err(Error::Parse(format!("missing `{key}` in `{text}`")))
}

fn build_spectrum(args: &SpectrumArgs) -> Result<Spectrum, Error> {
    let default_cap = 32;
    if let Some(path) = args.family.strip_prefix("file:") {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?;
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
        if value.is_array() {
            let lambda: Vec<f64> = value
                .as_array()
                .unwrap()
                .iter()
                .map(|x| {
                    x.as_f64()
                        .ok_or_else(|| Error::Parse("non-numeric eigenvalue".into()))
                })
                .collect::<Result<_, _>>()?;
            let cap = args.dim_cap.unwrap_or(lambda.len()).min(lambda.len());
            return Spectrum::new(SpectralFamily::Explicit(lambda), parse_b(args, cap)?, cap);
        }
        let mut cfg: SpectrumConfig =
            serde_json::from_value(value).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
        if let Some(cap) = args.dim_cap {
            cfg.dim_cap = cap;
        }
        if args.b.is_some() {
            let tmp = cfg.build()?;
            return Spectrum::new(
                tmp.family().clone(),
                parse_b(args, cfg.dim_cap)?,
                cfg.dim_cap,
            );
        }
        return cfg.build();
    }
    let (kind, params) = args
        .family
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("bad family `{}`", args.family)))?;
    let family = match kind {
        "alg" => SpectralFamily::Algebraic {
            alpha: parse_kv(params, "alpha")?,
        },
        "exp" => SpectralFamily::Exponential {
            alpha: parse_kv(params, "alpha")?,
            beta: parse_kv(params, "beta")?,
        },
        "dexp" => SpectralFamily::DoubleExponential {
            alpha: parse_kv(params, "alpha")?,
        },
        other => {
            return Err(Error::Parse(format!(
                "unknown family `{other}` (expected alg, exp, dexp, or file:PATH)"
            )))
        }
    };
    let cap = args.dim_cap.unwrap_or(default_cap);
    Spectrum::new(family, parse_b(args, cap)?, cap)
}

fn parse_b(args: &SpectrumArgs, _cap: usize) -> Result<BWeights, Error> {
    match args.b.as_deref() {
        None | Some("ones") => Ok(BWeights::Ones),
        Some("sqrt-lambda") => Ok(BWeights::SqrtLambda),
        Some(other) => {
            if let Some(path) = other.strip_prefix("file:") {
                let text = fs::read_to_string(path)
                    .map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?;
                let values: Vec<f64> = serde_json::from_str(&text)
                    .map_err(|e| Error::Parse(format!("{path}: {e}")))?;
                Ok(BWeights::Explicit(values))
            } else {
                Err(Error::Parse(format!(
                    "unknown b choice `{other}` (expected ones, sqrt-lambda, or file:PATH)"
                )))
            }
        }
    }
}

fn emit(out: &OutputArgs, text: &str) -> Result<(), Error> {
    match &out.output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Error::Parse(format!("cannot write {path}: {e}")))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Error::Parse(format!("stdout: {e}")))
        }
    }
}

fn cmd_spectrum(
    args: &SpectrumArgs,
    codomain_infinite: bool,
    out: &OutputArgs,
) -> Result<i32, Error> {
    let s = build_spectrum(args)?;
    let report = s.validate_assumption(codomain_infinite);
    let mut rows = Vec::with_capacity(s.dim_cap());
    for i in 1..=s.dim_cap() {
        rows.push((
            i,
            s.eigenvalue(i)?,
            s.b_weight(i)?,
            s.weighted_eigenvalue(i)?,
        ));
    }
    match out.format {
        Format::Csv => {
            let mut text = String::from("i,lambda,b,lambda_b\n");
            for (i, l, b, lb) in &rows {
                text.push_str(&format!("{i},{},{},{}\n", f17(*l), f17(*b), f17(*lb)));
            }
            emit(out, &text)?;
            for msg in &report.messages {
                eprintln!("note: {msg}");
            }
        }
        Format::Json => {
            let doc = serde_json::json!({
                "schema": SCHEMA,
                "config": SpectrumConfig::from_spectrum(&s),
                "report": report,
                "rows": rows.iter().map(|(i, l, b, lb)| serde_json::json!({
                    "i": i, "lambda": l, "b": b, "lambda_b": lb,
                })).collect::<Vec<_>>(),
            });
            emit(
                out,
                &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()),
            )?;
        }
    }
    if report.all_ok() {
        Ok(0)
    } else {
        eprintln!("validation failed: {:?}", report);
        Ok(2)
    }
}

fn cmd_enumerate(args: &SpectrumArgs, count: usize, out: &OutputArgs) -> Result<i32, Error> {
    let s = build_spectrum(args)?;
    let list = enumerate_rearrangement(&s, count)?;
    match out.format {
        Format::Csv => {
            emit(out, &list.to_csv())?;
            if !list.certified {
                eprintln!(
                    "note: enumeration not certified beyond coordinate window {}",
                    list.dim_used
                );
            }
        }
        Format::Json => {
            let doc = serde_json::json!({
                "schema": SCHEMA,
                "certified": list.certified,
                "dim_used": list.dim_used,
                "items": list.items.iter().enumerate().map(|(rank, item)| serde_json::json!({
                    "rank": rank + 1,
                    "cost": item.cost,
                    "weight": item.weight,
                    "index": item.index.to_sparse_string(),
                })).collect::<Vec<_>>(),
            });
            emit(
                out,
                &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()),
            )?;
        }
    }
    Ok(0)
}

fn m_grid(m_max: usize, grid: Grid) -> Vec<usize> {
    match grid {
        Grid::Linear => (1..=m_max).collect(),
        Grid::Geometric => {
            let mut ms = Vec::new();
            let mut m = 1usize;
            while m <= m_max {
                ms.push(m);
                m *= 2;
            }
            ms
        }
    }
}

fn cmd_width_curve(
    args: &SpectrumArgs,
    m_max: usize,
    grid: Grid,
    out: &OutputArgs,
) -> Result<i32, Error> {
    let s = build_spectrum(args)?;
    let ms = m_grid(m_max, grid);
    let curve = width_curve(&s, &ms)?;
    match out.format {
        Format::Csv => emit(out, &curve.to_csv())?,
        Format::Json => {
            let doc = serde_json::json!({
                "schema": SCHEMA,
                "certified": curve.certified,
                "points": curve.m_values.iter().zip(curve.theta.iter()).map(|(m, t)| {
                    serde_json::json!({"m": m, "theta": t})
                }).collect::<Vec<_>>(),
            });
            emit(
                out,
                &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()),
            )?;
        }
    }
    Ok(0)
}

/// Pull decay parameters from the family for the matching bound kind.
fn family_params(s: &Spectrum) -> (Option<f64>, Option<f64>) {
    match s.family() {
        SpectralFamily::Algebraic { alpha } => (Some(*alpha), None),
        SpectralFamily::Exponential { alpha, beta } => (Some(*alpha), Some(*beta)),
        SpectralFamily::DoubleExponential { alpha } => (Some(*alpha), None),
        SpectralFamily::Explicit(_) => (None, None),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    args: &SpectrumArgs,
    theorem: &str,
    p: u32,
    delta: f64,
    eta: Option<f64>,
    prefactor: f64,
    k_max: usize,
    out: &OutputArgs,
) -> Result<i32, Error> {
    let s = build_spectrum(args)?;
    let (alpha, beta) = family_params(&s);
    let need_alpha =
        || alpha.ok_or_else(|| Error::BadParams("this bound needs a closed-form family".into()));
    let kind = match theorem {
        "4.3" => BoundKind::ImpossibilityLower {
            p,
            constant: lipwidth::widths::lower_bound_constant(&s, p)?,
        },
        "4.4a" => {
            let alpha = need_alpha()?;
            let eta = match eta {
                Some(v) => v,
                None => {
                    // Tune the prefactor on the enumerated widths over the
                    // upper decade of the range.
                    let list = enumerate_rearrangement(&s, k_max + 1)?;
                    let lo = (k_max / 100).max(2);
                    let exponent = 1.0 / (2.0 * (1.0 / alpha + delta));
                    let mut tuned = 0.0f64;
                    for sv in lo..=k_max {
                        let u = list.items[sv].weight;
                        tuned = tuned.max(u * (sv as f64).ln().powf(exponent));
                    }
                    tuned
                }
            };
            BoundKind::UpperAlgebraic { alpha, delta, eta }
        }
        "4.4b" => BoundKind::UpperExponential {
            alpha: need_alpha()?,
            beta: beta.ok_or_else(|| {
                Error::BadParams("the exponential bound needs an exp family".into())
            })?,
            delta,
        },
        "4.4c" => BoundKind::UpperDoubleExponential {
            alpha: need_alpha()?,
            delta,
            eta: eta.unwrap_or(0.5),
        },
        "sharp-exp" => BoundKind::SharpExponentialLower {
            alpha: need_alpha()?,
            beta: beta.ok_or_else(|| {
                Error::BadParams("the sharp exponential bound needs an exp family".into())
            })?,
            delta,
            prefactor,
        },
        other => {
            return Err(Error::Parse(format!(
                "unknown bound `{other}` (expected 4.3, 4.4a, 4.4b, 4.4c, sharp-exp)"
            )))
        }
    };
    let report = verify_bounds(&s, &[kind], k_max)?;
    let entry = &report.entries[0];
    let doc = serde_json::json!({
        "schema": SCHEMA,
        "theorem": theorem,
        "kind": entry.kind,
        "k_max": k_max,
        "certified": report.certified,
        "holds_from": entry.holds_from,
        "fails": entry.holds_from.is_none(),
        "max_violation": entry.max_violation,
    });
    emit(
        out,
        &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()),
    )?;
    Ok(0)
}

fn cmd_stesin(weights: &str, p: &str, q: f64, m: usize, out: &OutputArgs) -> Result<i32, Error> {
    let text = fs::read_to_string(weights)
        .map_err(|e| Error::Parse(format!("cannot read {weights}: {e}")))?;
    let w: Vec<f64> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.parse()
                .map_err(|_| Error::Parse(format!("bad weight `{l}`")))
        })
        .collect::<Result<_, _>>()?;
    let p: f64 = if p == "inf" {
        f64::INFINITY
    } else {
        p.parse()
            .map_err(|_| Error::Parse(format!("bad exponent p `{p}`")))?
    };
    let value = lipwidth::widths::stesin_width(&w, p, q, m)?;
    match out.format {
        Format::Csv => emit(out, &format!("{}\n", f17(value)))?,
        Format::Json => {
            let doc = serde_json::json!({
                "schema": SCHEMA,
                "value": value,
                "n": w.len(),
                "p": if p.is_infinite() { serde_json::json!("inf") } else { serde_json::json!(p) },
                "q": q,
                "m": m,
            });
            emit(
                out,
                &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()),
            )?;
        }
    }
    Ok(0)
}

#[derive(serde::Deserialize)]
struct CappedComboFile {
    terms: Vec<CappedTermFile>,
    cap: f64,
    direction: usize,
    codomain_dim: usize,
}

#[derive(serde::Deserialize)]
struct CappedTermFile {
    index: MultiIndex,
    coeff: f64,
}

#[allow(clippy::too_many_arguments)]
fn cmd_approximate(
    args: &SpectrumArgs,
    operator: &str,
    s_count: usize,
    mc: usize,
    seed: u64,
    quad_nodes: Option<usize>,
    out: &OutputArgs,
) -> Result<i32, Error> {
    let (f, spectrum): (OperatorSpec, Arc<Spectrum>) =
        if let Some(path) = operator.strip_prefix("finite-pc:") {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?;
            let cfg: PcExpansionConfig =
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
            let expansion = cfg.build()?;
            let spectrum = expansion.spectrum().clone();
            (OperatorSpec::finite_pc(expansion), spectrum)
        } else if operator == "norm" {
            let s = Arc::new(build_spectrum(args)?);
            (OperatorSpec::norm_functional(s.dim_cap()), s)
        } else if let Some(path) = operator.strip_prefix("capped:") {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?;
            let cfg: CappedComboFile =
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
            let s = Arc::new(build_spectrum(args)?);
            let terms = cfg.terms.into_iter().map(|t| (t.index, t.coeff)).collect();
            (
                OperatorSpec::capped_hermite_combo(
                    s.clone(),
                    terms,
                    cfg.cap,
                    cfg.direction,
                    cfg.codomain_dim,
                )?,
                s,
            )
        } else {
            return Err(Error::Parse(format!(
                "unknown operator `{operator}` (expected finite-pc:FILE, norm, capped:FILE)"
            )));
        };

    // Head of the rearrangement, its projection, and the width bound.
    // Indices touching coordinates beyond the operator's active dimension
    // carry zero coefficients, so dropping them leaves the projection
    // unchanged while keeping estimators inside the declared domain.
    let bound_list = enumerate_rearrangement(&spectrum, s_count + 1)?;
    let u_bound = bound_list.weight(s_count + 1);
    let head: Vec<MultiIndex> = bound_list.items[..s_count]
        .iter()
        .map(|it| it.index.clone())
        .filter(|g| g.max_support() <= f.active_dim)
        .collect();
    let method = match quad_nodes {
        Some(n) => EstimationMethod::TensorQuadrature { nodes_per_dim: n },
        None => EstimationMethod::MonteCarlo {
            samples: mc,
            seed: seed ^ 0x9e3779b97f4a7c15,
        },
    };
    let g = project(&f, &head, &spectrum, &method)?;
    let report = l2_error(&f, &g, &spectrum, mc, seed)?;

    let mean_square = report
        .exact_mean_square
        .unwrap_or(report.estimate.mean_square);
    let hw = report.estimate.half_width_95;
    let ci = [
        (report.estimate.mean_square - hw).max(0.0).sqrt(),
        (report.estimate.mean_square + hw).sqrt(),
    ];
    let doc = serde_json::json!({
        "schema": SCHEMA,
        "s": s_count,
        "error": mean_square.sqrt(),
        "ci": ci,
        "u_bound": u_bound,
        "certified": bound_list.certified,
        "mc_mean_square": report.estimate.mean_square,
        "mc_half_width_95": hw,
        "exact_mean_square": report.exact_mean_square,
        "samples": report.estimate.samples_used,
        "seed": seed,
    });
    emit(
        out,
        &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()),
    )?;
    Ok(0)
}

fn run() -> Result<i32, Error> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Spectrum {
            spectrum,
            codomain_infinite,
            out,
        } => cmd_spectrum(spectrum, *codomain_infinite, out),
        Command::Enumerate {
            spectrum,
            count,
            out,
        } => cmd_enumerate(spectrum, *count, out),
        Command::WidthCurve {
            spectrum,
            m_max,
            grid,
            out,
        } => cmd_width_curve(spectrum, *m_max, *grid, out),
        Command::Verify {
            spectrum,
            theorem,
            p,
            delta,
            eta,
            prefactor,
            k_max,
            out,
        } => cmd_verify(spectrum, theorem, *p, *delta, *eta, *prefactor, *k_max, out),
        Command::Stesin {
            weights,
            p,
            q,
            m,
            out,
        } => cmd_stesin(weights, p, *q, *m, out),
        Command::Approximate {
            spectrum,
            operator,
            s,
            mc,
            seed,
            quad_nodes,
            out,
        } => cmd_approximate(spectrum, operator, *s, *mc, *seed, *quad_nodes, out),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
