//! Command-line surface of `cfk`.

use std::path::{Path, PathBuf};

use cfk_core::{cobordism_shift, intersection_form_w1n, Convention, Symmetries};
use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use crate::document::{format_rational, parse_document, parse_map_document, ComplexDocument, Loaded, MapDocument};
use crate::pipeline::{self, Options, PipelineError};
use crate::report::{Format, Report, Step, Verdict};

#[derive(Debug, Parser)]
#[command(name = "cfk", version, about = "Knot Floer complexes with involutions: doubling, surgery and obstructions")]
pub struct Cli {
    #[arg(long, value_enum, global = true, default_value = "text")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Whether ς is applied in the doubled ι (thm31) or the doubled τ (remark32).
    #[arg(long, global = true, default_value = "thm31", value_parser = parse_convention)]
    pub convention: Convention,
    /// Worker threads for commands given several input files.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Print certificate details and any produced document.
    #[arg(long, global = true)]
    pub verbose: bool,
    /// Also write the resulting complex as a `.cfk` document.
    #[arg(long, global = true)]
    pub document: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_convention(s: &str) -> Result<Convention, String> {
    s.parse::<Convention>().map_err(|e| e.to_string())
}

fn parse_symmetries(s: &str) -> Result<Symmetries, String> {
    s.parse::<Symmetries>().map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse documents and check the relations their maps must satisfy.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Double an ι-complex into an (ι, τ)-complex.
    Double {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// The large-surgery complex of a knot's double.
    A0 {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Homology over F2[U] of the surgery complex.
    Homology {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Action of ι and τ on homology, one row per class.
    Table {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Look for an invariant nontorsion class in grading 0.
    Obstruct {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Which symmetries a witness must be fixed by: iota+tau, iota, tau or tau-iota.
        #[arg(long, default_value = "iota+tau", value_parser = parse_symmetries)]
        symmetries: Symmetries,
    },
    /// Search for a local map to the trivial complex and dualize it.
    LocalToTrivial {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Dual complex, with dual maps.
    Dual {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Tensor product; the connected sum for surgery complexes.
    Tensor { left: PathBuf, right: PathBuf },
    /// Intersection form and grading shift of the surgery cobordism.
    Cobordism { n: i64 },
    /// Multi-stage pipelines.
    Pipeline {
        #[command(subcommand)]
        which: PipelineCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum PipelineCommand {
    /// Figure-eight double: obstruction, local map and dual-and-tensor chain.
    #[command(name = "theorem-1.1")]
    Theorem,
    /// The same pipeline on a knot locally equivalent to the figure eight.
    ThinKnot {
        file: PathBuf,
        /// Local map from the knot to the figure eight; identity by default.
        #[arg(long)]
        to_fig8: Option<PathBuf>,
        /// Local map from the figure eight to the knot; identity by default.
        #[arg(long)]
        from_fig8: Option<PathBuf>,
    },
    /// Explicit operations, e.g. `double(unknot) obstruct`.
    Custom { ops: Vec<String> },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Input { path: String, source: PipelineError },
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

pub fn read_document(path: &Path) -> Result<ComplexDocument, CliError> {
    let text = read(path)?;
    parse_document(&text).map_err(|e| CliError::Input { path: path.display().to_string(), source: e.into() })
}

fn read_map(path: &Path) -> Result<MapDocument, CliError> {
    let text = read(path)?;
    parse_map_document(&text).map_err(|e| CliError::Input { path: path.display().to_string(), source: e.into() })
}

fn label(path: &Path) -> String {
    path.display().to_string()
}

fn stem(doc: &ComplexDocument, path: &Path) -> String {
    if doc.name.is_empty() {
        path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
    } else {
        doc.name.clone()
    }
}

fn certificates_verdict(report: &Report, summary: &str) -> Verdict {
    Verdict::Property { holds: report.all_certificates_pass(), summary: summary.to_string() }
}

/// One report per input file for the single-file commands.
fn file_report(command: &Command, path: &Path, opts: Options) -> Result<Report, CliError> {
    let doc = read_document(path)?;
    let name = stem(&doc, path);
    let (cmd, _) = command_name(command);
    let mut r = Report::new(cmd, &[label(path)]);
    let loaded = pipeline::load_stage(&mut r, &label(path), &doc)?;
    match command {
        Command::Validate { .. } => {
            r.verdict = Some(certificates_verdict(&r, "document parses and its maps satisfy their relations"));
        }
        Command::Double { .. } => {
            let Loaded::Knot(k) = loaded else {
                return Err(PipelineError::Stage {
                    stage: "double".into(),
                    message: format!("doubling needs an ι-complex over F2[U,V], found a {}", loaded.kind()),
                }
                .into());
            };
            let d = pipeline::double_stage(&mut r, &k, opts)?;
            let out = Loaded::KnotWithTau(d);
            r.document = Some(ComplexDocument::from_loaded(&format!("{name}-double"), &out).serialize());
            r.verdict = Some(certificates_verdict(&r, "the double satisfies the (ι, τ) relations"));
        }
        Command::A0 { .. } => {
            let s = pipeline::lift_to_surgery(&mut r, loaded, opts)?;
            r.document = Some(ComplexDocument::from_loaded(&format!("{name}-a0"), &Loaded::Surgery(s)).serialize());
            r.verdict = Some(certificates_verdict(&r, "the surgery complex is valid"));
        }
        Command::Homology { .. } | Command::Table { .. } => {
            let s = pipeline::lift_to_surgery(&mut r, loaded, opts)?;
            let h = pipeline::homology_stage(&mut r, &s)?;
            if matches!(command, Command::Table { .. }) {
                pipeline::table_stage(&mut r, &h)?;
            }
            r.verdict = Some(certificates_verdict(&r, "homology certificates"));
        }
        Command::Obstruct { symmetries, .. } => {
            let s = pipeline::lift_to_surgery(&mut r, loaded, opts)?;
            let h = pipeline::homology_stage(&mut r, &s)?;
            let v = pipeline::obstruct_stage(&mut r, &h, s.shift(), *symmetries)?;
            r.verdict = Some(Verdict::from_obstruction(&v));
        }
        Command::LocalToTrivial { .. } => {
            let s = pipeline::lift_to_surgery(&mut r, loaded, opts)?;
            let h = pipeline::homology_stage(&mut r, &s)?;
            let model = pipeline::model_stage(&mut r, &h, &s)?;
            let found = pipeline::local_stage(&mut r, &s, Some(&model))?;
            if let Some(f) = &found {
                pipeline::dual_stage(&mut r, &s, f)?;
            }
            let summary = if found.is_some() {
                "a local map to the trivial complex exists"
            } else {
                "no local map to the trivial complex"
            };
            r.verdict = Some(Verdict::Property {
                holds: found.is_some() && r.all_certificates_pass(),
                summary: summary.into(),
            });
        }
        Command::Dual { .. } => {
            let d = pipeline::dual_loaded(&loaded)?;
            let mut step = Step::new("dual", [name.as_str()]);
            step.output("kind", d.kind())
                .output("generators", d.complex().len())
                .output("shift", format_rational(d.complex().shift()));
            step.certify("complex-valid", cfk_core::validate_complex(d.complex()).is_valid());
            r.steps.push(step);
            r.document = Some(ComplexDocument::from_loaded(&format!("{name}-dual"), &d).serialize());
            r.verdict = Some(certificates_verdict(&r, "the dual complex is valid"));
        }
        _ => unreachable!("not a single-file command"),
    }
    Ok(r)
}

fn command_name(command: &Command) -> (&'static str, Option<&[PathBuf]>) {
    match command {
        Command::Validate { files } => ("validate", Some(files)),
        Command::Double { files } => ("double", Some(files)),
        Command::A0 { files } => ("a0", Some(files)),
        Command::Homology { files } => ("homology", Some(files)),
        Command::Table { files } => ("table", Some(files)),
        Command::Obstruct { files, .. } => ("obstruct", Some(files)),
        Command::LocalToTrivial { files } => ("local-to-trivial", Some(files)),
        Command::Dual { files } => ("dual", Some(files)),
        Command::Tensor { .. } => ("tensor", None),
        Command::Cobordism { .. } => ("cobordism", None),
        Command::Pipeline { .. } => ("pipeline", None),
    }
}

pub fn cobordism_report(n: i64) -> Result<Report, CliError> {
    let mut r = Report::new("cobordism", &[n.to_string()]);
    let stage = |e: cfk_core::Error| PipelineError::Stage { stage: "cobordism".into(), message: e.to_string() };
    let data = intersection_form_w1n(n).map_err(stage)?;
    let shift = cobordism_shift(n).map_err(stage)?;
    let mut step = Step::new("intersection-form", [format!("n = {n}")]);
    step.output(
        "matrix",
        data.intersection_matrix
            .iter()
            .map(|row| row.iter().map(|x| format!("{x:>2}")).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>(),
    )
    .output("leading_minors", data.leading_minors.iter().map(|m| m.to_string()).collect::<Vec<_>>())
    .output("determinant", data.determinant.to_string())
    .output("signature", data.signature)
    .output("euler_characteristic", data.euler_characteristic);
    step.certify("negative-definite", data.definite).certify("even", data.spin_even);
    r.steps.push(step);
    let mut step = Step::new("grading-shift", [format!("n = {n}")]);
    step.output("shift", format_rational(shift.shift))
        .output("warning", shift.warning.clone().map_or(serde_json::Value::Null, Into::into));
    step.certify("shift-from-form", data.shift == shift.shift);
    r.steps.push(step);
    let summary = format!("negative definite even form; shift {}", format_rational(shift.shift));
    r.verdict = Some(Verdict::Property { holds: r.all_certificates_pass(), summary });
    Ok(r)
}

fn tensor_report(left: &Path, right: &Path) -> Result<Report, CliError> {
    let mut r = Report::new("tensor", &[label(left), label(right)]);
    let (dl, dr) = (read_document(left)?, read_document(right)?);
    let a = pipeline::load_stage(&mut r, &label(left), &dl)?;
    let b = pipeline::load_stage(&mut r, &label(right), &dr)?;
    let (t, connected) = pipeline::tensor_loaded(&a, &b)?;
    let mut step = Step::new(if connected { "connected-sum" } else { "tensor" }, [stem(&dl, left), stem(&dr, right)]);
    step.output("kind", t.kind())
        .output("generators", t.complex().len())
        .output("shift", format_rational(t.complex().shift()));
    step.certify("complex-valid", cfk_core::validate_complex(t.complex()).is_valid());
    if let Loaded::Surgery(s) = &t {
        step.certify("surgery-complex-valid", s.check().is_ok());
    }
    r.steps.push(step);
    r.document =
        Some(ComplexDocument::from_loaded(&format!("{}-{}", stem(&dl, left), stem(&dr, right)), &t).serialize());
    r.verdict = Some(certificates_verdict(&r, "the product is a valid complex"));
    Ok(r)
}

fn resolve_path(src: &str) -> pipeline::Result<(String, ComplexDocument)> {
    let text = std::fs::read_to_string(src)
        .map_err(|e| PipelineError::Stage { stage: "load".into(), message: format!("{src}: {e}") })?;
    Ok((src.to_string(), parse_document(&text)?))
}

fn pipeline_report(which: &PipelineCommand, opts: Options) -> Result<Report, CliError> {
    Ok(match which {
        PipelineCommand::Theorem => pipeline::theorem_pipeline(opts)?,
        PipelineCommand::ThinKnot { file, to_fig8, from_fig8 } => {
            let doc = read_document(file)?;
            let to = to_fig8.as_deref().map(read_map).transpose()?;
            let from = from_fig8.as_deref().map(read_map).transpose()?;
            let mut args = vec!["thin-knot".to_string(), label(file)];
            args.extend(to_fig8.iter().map(|p| format!("--to-fig8={}", p.display())));
            args.extend(from_fig8.iter().map(|p| format!("--from-fig8={}", p.display())));
            pipeline::thin_knot_pipeline(&args, &doc, to.as_ref(), from.as_ref(), opts)?
        }
        PipelineCommand::Custom { ops } => {
            let mut args = vec!["custom".to_string()];
            args.extend(ops.iter().cloned());
            pipeline::custom_pipeline(&args, ops, &resolve_path, opts)?
        }
    })
}

/// Every report the invocation produces, in input order.
pub fn reports(cli: &Cli) -> Result<Vec<Report>, CliError> {
    let opts = Options { convention: cli.convention };
    match &cli.command {
        Command::Tensor { left, right } => Ok(vec![tensor_report(left, right)?]),
        Command::Cobordism { n } => Ok(vec![cobordism_report(*n)?]),
        Command::Pipeline { which } => Ok(vec![pipeline_report(which, opts)?]),
        command => {
            let files = command_name(command).1.expect("file command");
            let run = || files.par_iter().map(|p| file_report(command, p, opts)).collect::<Result<Vec<_>, _>>();
            if cli.jobs <= 1 {
                files.iter().map(|p| file_report(command, p, opts)).collect()
            } else {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(cli.jobs)
                    .build()
                    .map_err(|e| PipelineError::Stage { stage: "jobs".into(), message: e.to_string() })?;
                pool.install(run)
            }
        }
    }
}

/// The rendered output: one report, or a JSON array / blank-line separated
/// text when several files were given.
pub fn render(reports: &[Report], format: Format, verbose: bool) -> String {
    match (format, reports) {
        (Format::Machine, [one]) => one.to_machine(),
        (Format::Machine, many) => {
            let mut s = serde_json::to_string_pretty(&json!(many)).expect("reports serialize");
            s.push('\n');
            s
        }
        (Format::Text, many) => many.iter().map(|r| r.to_text(verbose)).collect::<Vec<_>>().join("\n"),
    }
}

/// Runs a parsed invocation, writing the report and any document.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let reports = reports(cli)?;
    let out = render(&reports, cli.format, cli.verbose);
    match &cli.output {
        Some(path) => std::fs::write(path, out).map_err(|source| CliError::Io { path: label(path), source })?,
        None => print!("{out}"),
    }
    if let Some(path) = &cli.document {
        let docs: Vec<&str> = reports.iter().filter_map(|r| r.document.as_deref()).collect();
        std::fs::write(path, docs.join("\n")).map_err(|source| CliError::Io { path: label(path), source })?;
    }
    Ok(())
}
