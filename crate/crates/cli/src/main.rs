//! Command-line front end: parse monodromies and move sequences, run the
//! generators and the verifier, read and write plan and chart files, export
//! DOT graphs.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hakenplan::cobordism::{
    lantern_assembly, plan_cobordism, plan_surface_bundle, plan_torus_bundle, sequence_from_toml,
    verify, Plan, VerifyStatus,
};
use hakenplan::mcg::{builtin_chart, chart_from_toml, SurfaceChart, TwistWord};
use hakenplan::sl2z::{factor, Chirality, Mat2, TorusTwistWord};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "hakenplan",
    version,
    about = "Assembly plans for 4-manifolds bounding surface bundles and split-and-reglue cobordisms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Factor a determinant-1 integer matrix ("a b c d") into twist generators
    Factor {
        /// Four whitespace-separated integers, row-major
        matrix: String,
    },
    /// Rewrite a twist word over a chart
    Reduce {
        /// Word in the form f_alpha.f_2^-1
        word: String,
        /// Chart: a reserved name (lantern3, std2, ...) or a TOML file path
        #[arg(long, default_value = "lantern3")]
        chart: String,
    },
    /// Generate the seven-piece single-twist assembly directly
    PlanLantern {
        /// Twist handedness: 1 or -1
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        chirality: i8,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        /// Treat necessary-condition-only witnesses as failures
        #[arg(long)]
        strict: bool,
    },
    /// Plan a 4-manifold bounding the torus bundle of a word or matrix
    PlanTorus {
        /// Twist word ("L.R^-1") or matrix ("a b c d"; factored first)
        monodromy: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        #[arg(long)]
        strict: bool,
    },
    /// Plan a 4-manifold bounding a surface bundle over a chart
    PlanSurface {
        /// Twist word over the chart's curves
        word: String,
        #[arg(long, default_value = "std2")]
        chart: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        #[arg(long)]
        strict: bool,
    },
    /// Plan a cobordism from one or two move-sequence files
    PlanCobordism {
        sequence: PathBuf,
        sequence2: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        #[arg(long)]
        strict: bool,
    },
    /// Verify a plan file and print the full report
    Verify {
        plan: PathBuf,
        #[arg(long)]
        strict: bool,
    },
    /// Render a plan file as a Graphviz graph
    ExportDot { plan: PathBuf, out: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

/// Writes to stdout, ignoring broken pipes (e.g. when piped into `head`).
fn say(text: impl std::fmt::Display) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Factor { matrix } => {
            let m = Mat2::parse_text(&matrix)?;
            let word = factor(&m);
            let round_trip = word.evaluate() == m;
            if word.is_empty() {
                say("word: (empty)");
            } else {
                say(format_args!("word: {word}"));
            }
            say(format_args!(
                "roundtrip: {}",
                if round_trip { "ok" } else { "FAILED" }
            ));
            if !round_trip {
                bail!("factorization did not round-trip");
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Reduce { word, chart } => {
            let (_, chart) = resolve_chart(&chart)?;
            let word = TwistWord::parse_text(&word)?;
            let reduced = chart.reduce(&word)?;
            if reduced.is_empty() {
                say("(empty)");
            } else {
                say(format_args!("{reduced}"));
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::PlanLantern {
            chirality,
            out,
            format,
            strict,
        } => {
            let chirality = match chirality {
                1 => Chirality::Plus,
                -1 => Chirality::Minus,
                other => bail!("chirality must be 1 or -1, got {other}"),
            };
            emit_plan(lantern_assembly(chirality), out, format, strict)
        }

        Command::PlanTorus {
            monodromy,
            out,
            format,
            strict,
        } => {
            let word = parse_torus_monodromy(&monodromy)?;
            let plan = plan_torus_bundle(&word)?;
            emit_plan(plan, out, format, strict)
        }

        Command::PlanSurface {
            word,
            chart,
            out,
            format,
            strict,
        } => {
            let (name, chart) = resolve_chart(&chart)?;
            let word = TwistWord::parse_text(&word)?;
            let plan = plan_surface_bundle(&name, &chart, &word)?;
            emit_plan(plan, out, format, strict)
        }

        Command::PlanCobordism {
            sequence,
            sequence2,
            out,
            format,
            strict,
        } => {
            let seq_m = load_sequence(&sequence)?;
            let seq_n = sequence2.map(|p| load_sequence(&p)).transpose()?;
            let plan = plan_cobordism(&seq_m, seq_n.as_ref())?;
            emit_plan(plan, out, format, strict)
        }

        Command::Verify { plan, strict } => {
            let plan = Plan::load(&plan)?;
            let report = verify(&plan);
            say(report.to_string().trim_end());
            if passed(report.status, strict) {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("verification failed");
                Ok(ExitCode::FAILURE)
            }
        }

        Command::ExportDot { plan, out } => {
            let plan = Plan::load(&plan)?;
            std::fs::write(&out, plan.to_dot())
                .with_context(|| format!("writing {}", out.display()))?;
            say(format_args!("wrote {}", out.display()));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn passed(status: VerifyStatus, strict: bool) -> bool {
    if strict {
        status == VerifyStatus::Pass
    } else {
        status.is_pass()
    }
}

/// Writes the plan (JSON or DOT) and prints the one-line summary; exit status
/// reflects the verification verdict.
fn emit_plan(
    plan: Plan,
    out: Option<PathBuf>,
    format: OutputFormat,
    strict: bool,
) -> Result<ExitCode> {
    let report = verify(&plan);
    if let Some(path) = &out {
        let contents = match format {
            OutputFormat::Json => plan.to_json_string(),
            OutputFormat::Dot => plan.to_dot(),
        };
        std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))?;
    }
    let residual = plan
        .target
        .iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let ok = passed(report.status, strict);
    say(format_args!(
        "blocks={} gluings={} residual={} verify={}",
        plan.blocks.len(),
        plan.gluings.len(),
        residual,
        if ok { "pass" } else { "fail" }
    ));
    if report.necessary_only > 0 {
        say(format_args!(
            "necessary-only witnesses: {}",
            report.necessary_only
        ));
    }
    if !ok {
        eprint!("{report}");
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

/// A monodromy argument is a twist word when it mentions a generator letter,
/// otherwise four integers to factor.
fn parse_torus_monodromy(text: &str) -> Result<TorusTwistWord> {
    if text.contains(['L', 'R']) {
        Ok(TorusTwistWord::parse_text(text)?)
    } else {
        let matrix = Mat2::parse_text(text)?;
        Ok(factor(&matrix))
    }
}

/// Reserved chart names resolve to built-ins; anything else is read as a
/// TOML chart file named after its stem.
fn resolve_chart(spec: &str) -> Result<(String, SurfaceChart)> {
    if let Some(chart) = builtin_chart(spec) {
        return Ok((spec.to_string(), chart));
    }
    let path = Path::new(spec);
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("{spec:?} is not a reserved chart name or a readable file"))?;
    let chart = chart_from_toml(&text)?;
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| anyhow!("cannot derive a chart name from {spec:?}"))?
        .to_string();
    Ok((name, chart))
}

fn load_sequence(path: &Path) -> Result<hakenplan::cobordism::MoveSequence> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(sequence_from_toml(&text)?)
}
