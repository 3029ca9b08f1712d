//! Command-line front end: parse inputs, dispatch computations, render
//! tables or records, run the verification suite.
//!
//! Exit codes: 0 on success, 1 on a domain error (the module error is
//! printed verbatim), 2 on a usage error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use homalg::algebra::AlgebraModule;
use homalg::barcobar::{bar, cobar};
use homalg::coalgebra::{Comodule, DGCoalgebra};
use homalg::derived::{coext, coext_ss, cotor, ext, hyper_ext_ss, SpectralSequence};
use homalg::graded::{homology, ChainComplex, DegreeWindow};
use homalg::label::Label;
use homalg::lie::uea;
use homalg::models::{catalog_model, sphere_model, SpaceModel};
use homalg::record;
use homalg::{Error, Result};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

#[derive(Parser)]
#[command(
    name = "homalg",
    about = "Exact rational homological algebra: cobar/bar constructions, Koszul duality, Cotor/Ext/Coext and spectral sequences",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Record,
}

#[derive(Args)]
struct OutputOpts {
    /// inclusive top of the degree window [0, D]
    #[arg(long, default_value_t = 8)]
    max_degree: i64,
    /// output format: aligned tables or the record grammar
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// write output to a file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print a catalog model: Lie model, coalgebra data, Betti/Whitehead tables
    Model {
        /// model name: sphere <n> | s2 | s3 | s4 | s5 | s2xs2 | s2vs2 | cp2
        name: Vec<String>,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Homology of a complex, algebra, coalgebra or model record
    Homology {
        /// input record file
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Cobar construction of a coalgebra
    Cobar {
        /// coalgebra: catalog name, .model file or coalgebra record
        #[arg(long)]
        coalgebra: String,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Bar construction of an algebra
    Bar {
        /// algebra record file, or a catalog name for its enveloping algebra
        #[arg(long)]
        algebra: String,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Cotor of two comodules over a catalog coalgebra
    Cotor {
        #[arg(long)]
        coalgebra: String,
        /// left comodule: triv | reg | a comodule record file
        #[arg(long, default_value = "triv")]
        left: String,
        /// right comodule: triv | reg | a comodule record file
        #[arg(long, default_value = "triv")]
        right: String,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Ext over the enveloping algebra of a catalog Lie model
    Ext {
        /// catalog model name (the algebra is 𝒰Λ_X) or an algebra record
        #[arg(long)]
        algebra: String,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Coext of two comodules over a catalog coalgebra
    Coext {
        #[arg(long)]
        coalgebra: String,
        #[arg(long, default_value = "triv")]
        source: String,
        #[arg(long, default_value = "triv")]
        target: String,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Spectral sequences
    Ss {
        #[command(subcommand)]
        which: SsCommand,
    },
    /// Run the full verification suite
    Check,
}

#[derive(Subcommand)]
enum SsCommand {
    /// Hyper-Ext spectral sequence of 𝒰Λ_X acting on trivial modules
    Hyperext {
        #[arg(long)]
        algebra: String,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Coext spectral sequence over a catalog coalgebra
    Coext {
        #[arg(long)]
        coalgebra: String,
        #[arg(long, default_value = "triv")]
        source: String,
        #[arg(long, default_value = "triv")]
        target: String,
        #[command(flatten)]
        out: OutputOpts,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("HOMALG_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            homalg::set_thread_count(n);
        }
    }
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    }
}

fn emit(out: &OutputOpts, text: String) -> Result<()> {
    match &out.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn load_model_arg(name_or_path: &str, w: DegreeWindow) -> Result<SpaceModel> {
    let path = Path::new(name_or_path);
    if path.exists() {
        record::load_model(path, w)
    } else {
        catalog_model(name_or_path)
    }
}

/// Resolves a coalgebra argument: catalog name, space-model file, or a
/// coalgebra record file.
fn load_coalgebra_arg(arg: &str, w: DegreeWindow) -> Result<Arc<DGCoalgebra>> {
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path)?;
        let raw = record::scan(&text)?;
        return match raw.kind.as_str() {
            "coalgebra" => Ok(Arc::new(record::parse_coalgebra(&text)?)),
            "spacemodel" => Ok(record::parse_spacemodel(&text, w)?.homology_coalgebra()),
            other => Err(Error::Parse(format!(
                "expected a coalgebra or spacemodel record, got {other}"
            ))),
        };
    }
    Ok(catalog_model(arg)?.homology_coalgebra())
}

fn load_comodule_arg(arg: &str, c: &Arc<DGCoalgebra>) -> Result<Comodule> {
    match arg {
        "triv" => Ok(Comodule::unit(c.clone(), Label::atom("q"))),
        "reg" => Ok(Comodule::regular(c.clone())),
        path => {
            let text = std::fs::read_to_string(path)?;
            record::parse_comodule(&text, c.clone())
        }
    }
}

fn dims_table(title: &str, dims: &BTreeMap<i64, usize>, complete_note: &str) -> String {
    let mut out = format!("{title}\n");
    if dims.is_empty() {
        out.push_str("  (no complete degrees)\n");
    }
    for (n, d) in dims {
        out.push_str(&format!("  degree {n:>3}: {d}\n"));
    }
    out.push_str(&format!("  {complete_note}\n"));
    out
}

fn ss_table(title: &str, ss: &SpectralSequence) -> String {
    let mut out = format!("{title}\n");
    for page in &ss.pages {
        out.push_str(&format!(
            "  page E_{} (d_{} has bidegree ({}, {})):\n",
            page.r, page.r, page.d_bidegree.0, page.d_bidegree.1
        ));
        if page.dims.is_empty() {
            out.push_str("    (empty)\n");
        }
        for ((p, q), d) in &page.dims {
            let rank = page.d_ranks.get(&(*p, *q)).copied().unwrap_or(0);
            if rank > 0 {
                out.push_str(&format!("    E[{p},{q}] = {d}   rank d = {rank}\n"));
            } else {
                out.push_str(&format!("    E[{p},{q}] = {d}\n"));
            }
        }
    }
    out.push_str(if ss.stable {
        "  stable: differentials vanish within the window\n"
    } else {
        "  collapse undetermined beyond window\n"
    });
    out.push_str("  abutment (homology of the total complex):\n");
    for (n, d) in &ss.abutment {
        out.push_str(&format!("    degree {n:>3}: {d}   E∞ antidiagonal sum: {}\n", ss.einf_total(*n)));
    }
    for line in &ss.report {
        out.push_str(&format!("  note: {line}\n"));
    }
    out
}

fn homology_output(c: &ChainComplex, out: &OutputOpts, title: &str) -> Result<String> {
    let lo = c.window.lo.max(if c.zero_below { c.window.lo } else { c.window.lo + 1 });
    let hi = out.max_degree.min(c.window.hi);
    let h = homology(c, DegreeWindow::new(lo, hi))?;
    let trusted = h.trusted_dims();
    let untrusted: Vec<i64> = h
        .degrees
        .iter()
        .filter(|(_, s)| !s.trusted)
        .map(|(&n, _)| n)
        .collect();
    let note = if untrusted.is_empty() {
        format!("complete degrees: {lo}..{hi}")
    } else {
        format!(
            "complete degrees: {lo}..{}; untrusted edge degrees: {untrusted:?}",
            hi - 1
        )
    };
    Ok(match out.format {
        Format::Table => dims_table(title, &trusted, &note),
        Format::Record => record::serialize_dims(&trusted, Some("homology")),
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Model { name, out } => {
            let w = DegreeWindow::new(0, out.max_degree);
            let model = match name.as_slice() {
                [single] => load_model_arg(single, w)?,
                [kind, n] if kind == "sphere" => {
                    let n: i64 = n
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad sphere dimension \"{n}\"")))?;
                    sphere_model(n)?
                }
                _ => {
                    return Err(Error::Parse(
                        "expected: model <name> | model sphere <n>".into(),
                    ))
                }
            };
            match out.format {
                Format::Record => emit(&out, record::serialize_spacemodel(&model))?,
                Format::Table => {
                    let mut text = format!("model {}\n", model.name);
                    let lie = model.lie_model(w)?;
                    text.push_str("Lie model basis (Λ_X):\n");
                    for n in lie.complex.window.iter() {
                        for l in lie.complex.space.labels(n) {
                            text.push_str(&format!("  degree {n}: {l}\n"));
                        }
                    }
                    let hw = homology(&lie.complex, DegreeWindow::new(1, out.max_degree - 1))?;
                    text.push_str(&dims_table(
                        "Whitehead table H(Λ_X) (π^ℚ_{*+1}):",
                        &hw.trusted_dims(),
                        &format!("complete degrees: 1..{}", out.max_degree - 2),
                    ));
                    let ce = model.coalgebra_model(w)?;
                    let hb = homology(&ce.complex, DegreeWindow::new(0, out.max_degree - 1))?;
                    text.push_str(&dims_table(
                        "Betti table H(C_X):",
                        &hb.trusted_dims(),
                        &format!("complete degrees: 0..{}", out.max_degree - 2),
                    ));
                    let hc = model.homology_coalgebra();
                    text.push_str(&format!(
                        "finite homology coalgebra: {} basis elements through degree {}\n",
                        hc.complex.space.total_dim(),
                        hc.complex.window.hi
                    ));
                    emit(&out, text)?;
                }
            }
        }
        Command::Homology { input, out } => {
            let text = std::fs::read_to_string(&input)?;
            let raw = record::scan(&text)?;
            let complex = match raw.kind.as_str() {
                "complex" => record::parse_complex(&text)?,
                "algebra" => record::parse_algebra(&text)?.complex,
                "coalgebra" => record::parse_coalgebra(&text)?.complex,
                "spacemodel" => {
                    let w = DegreeWindow::new(0, out.max_degree + 1);
                    record::parse_spacemodel(&text, w)?.coalgebra_model(w)?.complex
                }
                other => return Err(Error::Parse(format!("cannot take homology of a {other} record"))),
            };
            let rendered = homology_output(&complex, &out, "homology")?;
            emit(&out, rendered)?;
        }
        Command::Cobar { coalgebra, out } => {
            let w = DegreeWindow::new(0, out.max_degree);
            let c = load_coalgebra_arg(&coalgebra, w)?;
            let omega = cobar(&c, w)?;
            match out.format {
                Format::Record => emit(&out, record::serialize_cobar(&omega, Some("cobar")))?,
                Format::Table => {
                    let mut text = String::from("cobar construction ΩC\nword basis (t[·] are the generators):\n");
                    for n in omega.algebra.complex.window.iter() {
                        let labels = omega.algebra.complex.space.labels(n);
                        if !labels.is_empty() {
                            text.push_str(&format!("  degree {n}: "));
                            let words: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
                            text.push_str(&words.join(" "));
                            text.push('\n');
                        }
                    }
                    text.push_str(&homology_output(&omega.algebra.complex, &out, "H(ΩC)")?);
                    emit(&out, text)?;
                }
            }
        }
        Command::Bar { algebra, out } => {
            let w = DegreeWindow::new(0, out.max_degree);
            let a = Arc::new(load_algebra_arg(&algebra, w)?);
            let ba = bar(&a, w)?;
            match out.format {
                Format::Record => emit(&out, record::serialize_coalgebra(&ba, Some("bar")))?,
                Format::Table => {
                    let mut text = String::from("bar construction BA\n");
                    text.push_str(&homology_output(&ba.complex, &out, "H(BA)")?);
                    emit(&out, text)?;
                }
            }
        }
        Command::Cotor { coalgebra, left, right, out } => {
            let w = DegreeWindow::new(0, out.max_degree + 1);
            let c = load_coalgebra_arg(&coalgebra, w)?;
            let omega = cobar(&c, w)?;
            let m = load_comodule_arg(&left, &c)?;
            let n = load_comodule_arg(&right, &c)?;
            let result = cotor(&omega, &m, &n, w)?;
            let table = match out.format {
                Format::Table => dims_table(
                    "Cotor^C(M, N)",
                    &result.dims,
                    &format!("complete degrees: 0..{}", out.max_degree),
                ),
                Format::Record => record::serialize_dims(&result.dims, Some("cotor")),
            };
            emit(&out, table)?;
        }
        Command::Ext { algebra, out } => {
            let w = DegreeWindow::new(0, out.max_degree + 1);
            let a = Arc::new(load_algebra_arg(&algebra, w)?);
            let v = AlgebraModule::trivial(a.clone(), Label::atom("v"))?;
            let wm = AlgebraModule::trivial(a.clone(), Label::atom("w"))?;
            let result = ext(&a, &v, &wm, DegreeWindow::new(-out.max_degree, 0))?;
            let mut both = String::new();
            both.push_str(&match out.format {
                Format::Table => dims_table(
                    "Ext_A(ℚ, ℚ), homological indexing H_n",
                    &result.dims,
                    "cohomological Ext^k is homological degree −k",
                ),
                Format::Record => record::serialize_dims(&result.dims, Some("ext_homological")),
            });
            both.push_str(&match out.format {
                Format::Table => dims_table(
                    "Ext_A(ℚ, ℚ), cohomological indexing Ext^k",
                    &result.cohomological_dims(),
                    "",
                ),
                Format::Record => {
                    record::serialize_dims(&result.cohomological_dims(), Some("ext_cohomological"))
                }
            });
            emit(&out, both)?;
        }
        Command::Coext { coalgebra, source, target, out } => {
            let w = DegreeWindow::new(0, out.max_degree);
            let c = load_coalgebra_arg(&coalgebra, w)?;
            let omega = cobar(&c, w)?;
            let n = load_comodule_arg(&source, &c)?;
            let m = load_comodule_arg(&target, &c)?;
            let result = coext(&omega, &n, &m, DegreeWindow::new(-out.max_degree, out.max_degree / 2))?;
            let mut text = match out.format {
                Format::Table => dims_table(
                    "Coext_C(N, M), homological indexing",
                    &result.dims,
                    "cohomological Coext^k is homological degree −k",
                ),
                Format::Record => record::serialize_dims(&result.dims, Some("coext_homological")),
            };
            text.push_str(&match out.format {
                Format::Table => dims_table(
                    "Coext_C(N, M), cohomological indexing",
                    &result.cohomological_dims(),
                    "",
                ),
                Format::Record => {
                    record::serialize_dims(&result.cohomological_dims(), Some("coext_cohomological"))
                }
            });
            emit(&out, text)?;
        }
        Command::Ss { which } => match which {
            SsCommand::Hyperext { algebra, out } => {
                let w = DegreeWindow::new(0, out.max_degree + 1);
                let a = Arc::new(load_algebra_arg(&algebra, w)?);
                let v = AlgebraModule::trivial(a.clone(), Label::atom("v"))?;
                let wm = AlgebraModule::trivial(a.clone(), Label::atom("w"))?;
                let ss = hyper_ext_ss(&a, &v, &wm, DegreeWindow::new(-out.max_degree, 0))?;
                emit(&out, ss_table("hyper-Ext spectral sequence (skeletal filtration)", &ss))?;
            }
            SsCommand::Coext { coalgebra, source, target, out } => {
                let w = DegreeWindow::new(0, out.max_degree);
                let c = load_coalgebra_arg(&coalgebra, w)?;
                let omega = cobar(&c, w)?;
                let n = load_comodule_arg(&source, &c)?;
                let m = load_comodule_arg(&target, &c)?;
                let ss = coext_ss(&omega, &n, &m, DegreeWindow::new(-out.max_degree, out.max_degree / 2))?;
                emit(&out, ss_table("Coext spectral sequence (source-degree filtration)", &ss))?;
            }
        },
        Command::Check => {
            let results = homalg::check::run_all()?;
            let mut failed = false;
            for r in &results {
                let status = if r.passed { "PASS" } else { "FAIL" };
                println!("[{status}] {}: {}", r.name, r.details);
                failed |= !r.passed;
            }
            if failed {
                return Err(Error::InvariantViolation("verification suite failed".into()));
            }
        }
    }
    Ok(())
}

/// Resolves an algebra argument: catalog model name (its enveloping
/// algebra) or an algebra record file.
fn load_algebra_arg(arg: &str, w: DegreeWindow) -> Result<homalg::algebra::DGAlgebra> {
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path)?;
        return record::parse_algebra(&text);
    }
    let model = catalog_model(arg)?;
    let lie = model.lie_model(w)?;
    uea(&lie, w)
}
