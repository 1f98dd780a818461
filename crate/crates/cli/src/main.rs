//! `qhp`: build, analyze and verify hypergraph-product complexes from the command line.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qhp::codes::{extract_css, generate_matrix, parameters, CssCode, Ensemble, EnsembleSpec};
use qhp::distance::DEFAULT_MAX_KERNEL_DIM;
use qhp::io::{read_alist_file, write_alist_file, ComplexBundle};
use qhp::report::{analyze, bundle_bounds, distances, Provenance, Report};
use qhp::verify::{verify_bundle, VerifyOptions};
use qhp::{BinMatrix, ChainComplex, Error};

const EXIT_VALIDATION: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(
    name = "qhp",
    version,
    about = "Higher-dimensional hypergraph-product codes over GF(2)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    /// One pretty JSON document.
    #[default]
    Report,
    /// A header line, then one JSON object per level or check.
    JsonLines,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Report)]
    format: Format,
}

#[derive(Args)]
struct Search {
    /// Largest kernel dimension searched exhaustively.
    #[arg(long, default_value_t = DEFAULT_MAX_KERNEL_DIM)]
    cap: usize,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Args)]
struct Source {
    /// alist file; repeat to give A_1, A_2, ... in order.
    #[arg(long)]
    matrix: Vec<PathBuf>,
    /// gallager:U,W,C | rep:L | reppath:L | id:N | file:PATH
    #[arg(long, conflicts_with = "matrix")]
    ensemble: Option<Ensemble>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Bundle boundary matrices, or the 1-complex of a generated seed matrix.
    Build {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Tensor product of two bundles.
    Product {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// `K(P)^a x K(P^T)^b` for a seed matrix `P`.
    Power {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Dimensions, homology ranks and sparsity of every level.
    Analyze {
        bundle: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Exact distances at the given levels (all levels if none given).
    Distance {
        bundle: PathBuf,
        #[arg(long)]
        level: Vec<usize>,
        #[command(flatten)]
        search: Search,
        #[command(flatten)]
        output: Output,
    },
    /// Check a bundle against the predictions of its construction.
    Verify {
        bundle: PathBuf,
        #[command(flatten)]
        search: Search,
        #[command(flatten)]
        output: Output,
    },
    /// Write `G_X` and `G_Z` of one level as `GX.alist` and `GZ.alist`.
    ExportCss {
        bundle: PathBuf,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Parameters of a CSS code given by two alist files.
    Params {
        #[arg(long)]
        gx: PathBuf,
        #[arg(long)]
        gz: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_KERNEL_DIM)]
        cap: usize,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::KernelTooLarge { .. } => EXIT_CAP,
        Error::Parse { .. }
        | Error::InconsistentWeights(_)
        | Error::Bundle(_)
        | Error::Io(_)
        | Error::Json(_) => EXIT_IO,
        _ => EXIT_VALIDATION,
    }
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn print_report(report: &Report, output: &Output) {
    match output.format {
        Format::Report => print!("{}", report.to_pretty()),
        Format::JsonLines => print!("{}", report.to_json_lines()),
    }
}

fn seed_matrix(
    source: &Source,
    prov: &mut Provenance,
) -> qhp::Result<(BinMatrix, String, Option<u64>)> {
    match (&source.ensemble, source.matrix.as_slice()) {
        (Some(kind), _) => {
            *prov = std::mem::take(prov)
                .arg("ensemble", kind.to_string())
                .arg("seed", source.seed);
            let m = generate_matrix(&EnsembleSpec::new(kind.clone(), source.seed))?;
            Ok((m, kind.to_string(), Some(source.seed)))
        }
        (None, [path]) => {
            *prov = std::mem::take(prov).arg("matrix", path_str(path));
            Ok((read_alist_file(path)?, path_str(path), None))
        }
        (None, _) => Err(Error::InvalidSpec(
            "give exactly one --matrix or an --ensemble".into(),
        )),
    }
}

fn save_and_report(
    bundle: &ComplexBundle,
    out: &Path,
    prov: Provenance,
    output: &Output,
) -> qhp::Result<u8> {
    bundle.save(out)?;
    let prov = prov.arg("out", path_str(out));
    print_report(
        &Report::new(prov, &bundle.complex, analyze(&bundle.complex)),
        output,
    );
    Ok(0)
}

fn run(cli: Cli) -> qhp::Result<u8> {
    match cli.command {
        Command::Build {
            source,
            out,
            output,
        } => {
            let mut prov = Provenance::new("build");
            let bundle = if source.ensemble.is_some() {
                let (p, name, seed) = seed_matrix(&source, &mut prov)?;
                ComplexBundle::from_matrices(ChainComplex::one_complex(p), name, seed)
            } else {
                if source.matrix.is_empty() {
                    return Err(Error::InvalidSpec(
                        "give --matrix files or an --ensemble".into(),
                    ));
                }
                let names: Vec<String> = source.matrix.iter().map(|p| path_str(p)).collect();
                prov = prov.arg("matrix", &names);
                let boundaries = source
                    .matrix
                    .iter()
                    .map(|p| read_alist_file(p))
                    .collect::<qhp::Result<Vec<_>>>()?;
                ComplexBundle::from_matrices(
                    ChainComplex::validate(boundaries)?,
                    names.join(","),
                    None,
                )
            };
            save_and_report(&bundle, &out, prov, &output)
        }
        Command::Product {
            left,
            right,
            out,
            output,
        } => {
            let prov = Provenance::new("product")
                .arg("left", path_str(&left))
                .arg("right", path_str(&right));
            let bundle =
                ComplexBundle::product(ComplexBundle::load(&left)?, ComplexBundle::load(&right)?);
            save_and_report(&bundle, &out, prov, &output)
        }
        Command::Power {
            source,
            a,
            b,
            out,
            output,
        } => {
            let mut prov = Provenance::new("power").arg("a", a).arg("b", b);
            let (p, _, _) = seed_matrix(&source, &mut prov)?;
            let bundle = ComplexBundle::power(p, a, b)?;
            save_and_report(&bundle, &out, prov, &output)
        }
        Command::Analyze { bundle, output } => {
            let prov = Provenance::new("analyze").arg("bundle", path_str(&bundle));
            let c = ComplexBundle::load(&bundle)?.complex;
            print_report(&Report::new(prov, &c, analyze(&c)), &output);
            Ok(0)
        }
        Command::Distance {
            bundle,
            level,
            search,
            output,
        } => {
            let loaded = ComplexBundle::load(&bundle)?;
            let c = &loaded.complex;
            let levels: Vec<usize> = if level.is_empty() {
                (0..=c.length()).collect()
            } else {
                level
            };
            let prov = Provenance::new("distance")
                .arg("bundle", path_str(&bundle))
                .arg("level", &levels)
                .arg("cap", search.cap)
                .arg("threads", search.threads);
            let opts = VerifyOptions {
                cap: search.cap,
                threads: search.threads,
            };
            let bounds = bundle_bounds(&loaded, &opts)?;
            let run = distances(c, &levels, search.cap, search.threads, &bounds)?;
            print_report(&Report::new(prov, c, run.levels), &output);
            Ok(if run.cap_exceeded { EXIT_CAP } else { 0 })
        }
        Command::Verify {
            bundle,
            search,
            output,
        } => {
            let loaded = ComplexBundle::load(&bundle)?;
            let prov = Provenance::new("verify")
                .arg("bundle", path_str(&bundle))
                .arg("cap", search.cap)
                .arg("threads", search.threads);
            let opts = VerifyOptions {
                cap: search.cap,
                threads: search.threads,
            };
            let verification = verify_bundle(&loaded, &opts)?;
            let c = &loaded.complex;
            let mut report = Report::new(prov, c, analyze(c));
            let passed = verification.passed();
            for failure in verification.failures() {
                eprintln!("FAIL {}: {}", failure.name, failure.detail);
            }
            report.checks = Some(verification.checks);
            report.passed = Some(passed);
            print_report(&report, &output);
            Ok(if passed { 0 } else { EXIT_VALIDATION })
        }
        Command::ExportCss { bundle, level, out } => {
            let c = ComplexBundle::load(&bundle)?.complex;
            let code = extract_css(&c, level)?;
            std::fs::create_dir_all(&out)?;
            let (gx, gz) = (out.join("GX.alist"), out.join("GZ.alist"));
            write_alist_file(&gx, code.g_x())?;
            write_alist_file(&gz, code.g_z())?;
            let summary = json!({
                "provenance": Provenance::new("export-css")
                    .arg("bundle", path_str(&bundle))
                    .arg("level", level)
                    .arg("out", path_str(&out)),
                "n": code.n(),
                "k": code.k(),
                "gx": path_str(&gx),
                "gz": path_str(&gz),
            });
            println!("{}", serde_json::to_string_pretty(&summary)?);
            Ok(0)
        }
        Command::Params { gx, gz, cap } => {
            let code = CssCode::new(read_alist_file(&gx)?, read_alist_file(&gz)?)?;
            let params = parameters(&code, cap);
            let summary = json!({
                "provenance": Provenance::new("params")
                    .arg("gx", path_str(&gx))
                    .arg("gz", path_str(&gz))
                    .arg("cap", cap),
                "parameters": params,
                "summary": params.to_string(),
            });
            println!("{}", serde_json::to_string_pretty(&summary)?);
            Ok(if params.d_x.exact && params.d_z.exact {
                0
            } else {
                EXIT_CAP
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
