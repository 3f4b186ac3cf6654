//! The `pregroupoid` command line.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Args, Parser, Subcommand};

use crate::document::{load, load_kind, save, DocumentError, Kind, Structure};
use crate::envelope::{Envelope, EnvelopeOptions};
use crate::error::FibrationError;
use crate::fibration::{bitorsor_to_fibration_with, canonical_roundtrip_iso, fibration_to_bitorsor, FibrationOverI};
use crate::generators::{Generated, GeneratorSpec};
use crate::groupoid::{FiniteGroupoid, InclusionProperties};
use crate::pregroupoid::Pregroupoid;
use crate::report::{ValidationReport, DEFAULT_REPORT_CAP};
use crate::suite::{render, run_all, SuiteOptions};
use crate::torsor::{
    ad, ad_right, c_left, c_right, env_to_bitorsor_with, roundtrip_iso_left, roundtrip_iso_right, LeftTorsor,
    RightTorsor,
};

#[derive(Parser, Debug)]
#[command(
    name = "pregroupoid",
    version,
    about = "Finite pregroupoids, their enveloping groupoids, torsors and fibrations over I"
)]
pub struct Cli {
    /// Maximum number of violations listed per report.
    #[arg(long, global = true, default_value_t = DEFAULT_REPORT_CAP, value_name = "N")]
    pub max_report: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Strict {
    /// Check every table entry of the envelope against every representative.
    #[arg(long, default_value_t = true, action = ArgAction::Set, value_name = "BOOL")]
    pub strict: bool,
}

impl Strict {
    fn options(self) -> EnvelopeOptions {
        EnvelopeOptions { strict: self.strict }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a document: axioms, derived equations and, for
    /// pregroupoids, the envelope.
    Check {
        path: PathBuf,
        /// Reject documents of any other kind.
        #[arg(long)]
        kind: Option<Kind>,
        #[command(flatten)]
        strict: Strict,
    },
    /// Build the enveloping groupoid of a pregroupoid.
    Envelope {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        strict: Strict,
    },
    /// Summarise the two edge groupoids of a pregroupoid's envelope.
    Edges {
        path: PathBuf,
        /// Directory receiving `edge-a.json` and `edge-b.json`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        strict: Strict,
    },
    /// Conversions between torsors and pregroupoids.
    Torsor {
        #[command(subcommand)]
        op: TorsorOp,
    },
    /// Conversions between fibrations over I and bitorsors.
    Fibration {
        #[command(subcommand)]
        op: FibrationOp,
    },
    /// Run the equivalence checks and print a pass/fail matrix.
    Theorems {
        #[arg(required_unless_present = "generate", conflicts_with = "generate")]
        path: Option<PathBuf>,
        /// Generator spec, e.g. `corpus`, `bijection:3`, `pair:2,2`.
        #[arg(long, value_name = "SPEC")]
        generate: Option<GeneratorSpec>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        strict: Strict,
    },
    /// Write generated instances as documents.
    Generate {
        spec: GeneratorSpec,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file, or a directory when the spec yields several
        /// instances.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum TorsorOp {
    /// Left torsor to its pregroupoid.
    CLeft {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Right torsor to its pregroupoid.
    CRight {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Left torsor to the right torsor of the same pregroupoid, or back.
    Ad {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the isomorphism between a torsor and the one rebuilt from
    /// its pregroupoid's envelope.
    Roundtrip { path: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum FibrationOp {
    /// Fibration to the bitorsor of arrows from its `a0` fibre to its `b0`
    /// fibre.
    ToBitorsor {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bitorsor to the envelope fibration. A pregroupoid is read as its
    /// envelope bitorsor.
    FromBitorsor {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        strict: Strict,
    },
    /// Verify the isomorphism over I between a fibration and the one
    /// rebuilt from its bitorsor.
    Roundtrip { path: PathBuf },
}

/// Text destined for the two standard streams, and the exit code.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

impl Outcome {
    fn fail(mut self, message: impl AsRef<str>) -> Outcome {
        self.stdout.push_str(message.as_ref());
        if !message.as_ref().ends_with('\n') {
            self.stdout.push('\n');
        }
        self.code = 1;
        self
    }
}

/// Input, output and parse problems: exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Document { path: PathBuf, source: DocumentError },
    #[error("{0}")]
    Usage(String),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn open(path: &Path, kind: Option<Kind>) -> Result<Structure, CliError> {
    let text = read(path)?;
    let parsed = match kind {
        Some(k) => load_kind(&text, k),
        None => load(&text),
    };
    parsed.map_err(|source| CliError::Document {
        path: path.to_path_buf(),
        source,
    })
}

fn open_pregroupoid(path: &Path) -> Result<Pregroupoid, CliError> {
    match open(path, Some(Kind::Pregroupoid))? {
        Structure::Pregroupoid(p) => Ok(p),
        _ => unreachable!("kind checked on load"),
    }
}

fn wrong_kind(path: &Path, found: Kind, expected: &str) -> CliError {
    CliError::Usage(format!("{}: expected {expected}, found {found}", path.display()))
}

/// The document goes to `out` if given, with the summary on stdout;
/// otherwise the document goes to stdout and the summary to stderr.
fn emit(out: &Option<PathBuf>, s: &Structure, summary: String) -> Result<Outcome, CliError> {
    let doc = save(s);
    Ok(match out {
        Some(path) => {
            write(path, &doc)?;
            Outcome {
                stdout: summary,
                ..Outcome::default()
            }
        }
        None => Outcome {
            stdout: doc,
            stderr: summary,
            code: 0,
        },
    })
}

fn section(out: &mut String, name: &str, report: &ValidationReport) -> bool {
    if report.is_clean() {
        let _ = writeln!(out, "{name}: clean");
        return true;
    }
    let _ = writeln!(out, "{name}: {} violations", report.total());
    for line in report.to_string().lines() {
        let _ = writeln!(out, "  {line}");
    }
    false
}

fn envelope_summary(e: &Envelope) -> String {
    let c = e.counts();
    format!(
        "objects {}, arrows {} ({}+{}+{}+{})\n",
        e.groupoid().objects().len(),
        c.total(),
        c.aa,
        c.ab,
        c.ba,
        c.bb
    )
}

fn groupoid_summary(g: &FiniteGroupoid) -> String {
    format!(
        "objects {}, arrows {}, {}",
        g.objects().len(),
        g.arrow_count(),
        if g.is_abelian() { "abelian" } else { "nonabelian" }
    )
}

fn inclusion_summary(p: InclusionProperties) -> String {
    let flag = |b: bool, name: &str| if b { name.to_string() } else { format!("not {name}") };
    format!(
        "{}, {}, {}",
        flag(p.full, "full"),
        flag(p.faithful, "faithful"),
        flag(p.essentially_surjective, "essentially surjective")
    )
}

fn check(path: &Path, kind: Option<Kind>, strict: Strict, cap: usize) -> Result<Outcome, CliError> {
    let s = open(path, kind)?;
    let mut out = format!("kind: {}\n", s.kind());
    let report = |f: &dyn Fn(&mut ValidationReport)| {
        let mut r = ValidationReport::with_cap(cap);
        f(&mut r);
        r
    };
    let ok = match &s {
        Structure::Pregroupoid(p) => {
            let axioms = section(&mut out, "axioms", &report(&|r| p.check_into(r)));
            let derived = axioms && section(&mut out, "derived equations", &report(&|r| p.check_derived_into(r)));
            derived
                && match Envelope::build(p, strict.options()) {
                    Ok(e) => {
                        let _ = write!(out, "envelope: {}", envelope_summary(&e));
                        section(&mut out, "envelope groupoid", &report(&|r| e.groupoid().check_into(r)))
                    }
                    Err(e) => {
                        let _ = writeln!(out, "envelope: {e}");
                        false
                    }
                }
        }
        Structure::Groupoid(g) => section(&mut out, "axioms", &report(&|r| g.check_into(r))),
        Structure::LeftTorsor(t) => section(&mut out, "axioms", &report(&|r| t.check_into(r))),
        Structure::RightTorsor(t) => section(&mut out, "axioms", &report(&|r| t.check_into(r))),
        Structure::Bitorsor(b) => section(&mut out, "axioms", &report(&|r| b.check_into(r))),
        Structure::Fibration(f) => section(&mut out, "axioms", &report(&|r| f.check_into(r))),
    };
    out.push_str(if ok { "ok\n" } else { "FAILED\n" });
    Ok(Outcome {
        stdout: out,
        code: if ok { 0 } else { 1 },
        ..Outcome::default()
    })
}

fn envelope(path: &Path, out: &Option<PathBuf>, strict: Strict) -> Result<Outcome, CliError> {
    let p = open_pregroupoid(path)?;
    match Envelope::build(&p, strict.options()) {
        Ok(e) => emit(out, &Structure::Groupoid(e.groupoid().clone()), envelope_summary(&e)),
        Err(e) => Ok(Outcome::default().fail(e.to_string())),
    }
}

fn edges(path: &Path, out: &Option<PathBuf>, strict: Strict) -> Result<Outcome, CliError> {
    let p = open_pregroupoid(path)?;
    let e = match Envelope::build(&p, strict.options()) {
        Ok(e) => e,
        Err(e) => return Ok(Outcome::default().fail(e.to_string())),
    };
    let (a, b) = e.edge_groupoids();
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.clone(),
            source,
        })?;
        write(&dir.join("edge-a.json"), &save(&Structure::Groupoid(a.clone())))?;
        write(&dir.join("edge-b.json"), &save(&Structure::Groupoid(b.clone())))?;
    }
    Ok(Outcome {
        stdout: format!("A-edge: {}\nB-edge: {}\n", groupoid_summary(&a), groupoid_summary(&b)),
        ..Outcome::default()
    })
}

fn pregroupoid_summary(p: &Pregroupoid) -> String {
    format!(
        "pregroupoid: |X| = {}, |A| = {}, |B| = {}\n",
        p.size(),
        p.a().len(),
        p.b().len()
    )
}

fn left_summary(t: &LeftTorsor) -> String {
    format!(
        "left torsor: group arrows {}, carrier {}\n",
        t.group().arrow_count(),
        t.carrier().len()
    )
}

fn right_summary(t: &RightTorsor) -> String {
    format!(
        "right torsor: group arrows {}, carrier {}\n",
        t.group().arrow_count(),
        t.carrier().len()
    )
}

fn torsor(op: &TorsorOp) -> Result<Outcome, CliError> {
    let converted = match op {
        TorsorOp::CLeft { path, out } => match open(path, Some(Kind::LeftTorsor))? {
            Structure::LeftTorsor(t) => c_left(&t).map(|p| (out, pregroupoid_summary(&p), Structure::Pregroupoid(p))),
            _ => unreachable!("kind checked on load"),
        },
        TorsorOp::CRight { path, out } => match open(path, Some(Kind::RightTorsor))? {
            Structure::RightTorsor(t) => c_right(&t).map(|p| (out, pregroupoid_summary(&p), Structure::Pregroupoid(p))),
            _ => unreachable!("kind checked on load"),
        },
        TorsorOp::Ad { path, out } => match open(path, None)? {
            Structure::LeftTorsor(t) => ad(&t).map(|r| (out, right_summary(&r), Structure::RightTorsor(r))),
            Structure::RightTorsor(t) => ad_right(&t).map(|l| (out, left_summary(&l), Structure::LeftTorsor(l))),
            s => return Err(wrong_kind(path, s.kind(), "left_torsor or right_torsor")),
        },
        TorsorOp::Roundtrip { path } => {
            let verified = match open(path, None)? {
                Structure::LeftTorsor(t) => roundtrip_iso_left(&t).map(|_| left_summary(&t)),
                Structure::RightTorsor(t) => roundtrip_iso_right(&t).map(|_| right_summary(&t)),
                s => return Err(wrong_kind(path, s.kind(), "left_torsor or right_torsor")),
            };
            return Ok(match verified {
                Ok(summary) => Outcome {
                    stdout: format!("{summary}roundtrip isomorphism: verified\n"),
                    ..Outcome::default()
                },
                Err(e) => Outcome::default().fail(format!("roundtrip isomorphism: {e}")),
            });
        }
    };
    match converted {
        Ok((out, summary, s)) => emit(out, &s, summary),
        Err(e) => Ok(Outcome::default().fail(e.to_string())),
    }
}

fn open_fibration(path: &Path) -> Result<FibrationOverI, CliError> {
    match open(path, Some(Kind::Fibration))? {
        Structure::Fibration(f) => Ok(f),
        _ => unreachable!("kind checked on load"),
    }
}

fn fibration(op: &FibrationOp) -> Result<Outcome, CliError> {
    match op {
        FibrationOp::ToBitorsor { path, out } => match fibration_to_bitorsor(&open_fibration(path)?) {
            Ok(bi) => {
                let summary = format!("bitorsor: carrier {}\n", bi.carrier().len());
                emit(out, &Structure::Bitorsor(bi), summary)
            }
            Err(e) => Ok(Outcome::default().fail(e.to_string())),
        },
        FibrationOp::FromBitorsor { path, out, strict } => {
            let bi = match open(path, None)? {
                Structure::Bitorsor(b) => Ok(b),
                Structure::Pregroupoid(p) => env_to_bitorsor_with(&p, strict.options()),
                s => return Err(wrong_kind(path, s.kind(), "bitorsor or pregroupoid")),
            };
            match bi
                .map_err(FibrationError::from)
                .and_then(|bi| bitorsor_to_fibration_with(&bi, strict.options()))
            {
                Ok(f) => {
                    let summary = format!(
                        "fibration: objects {}, arrows {}\n",
                        f.total().objects().len(),
                        f.total().arrow_count()
                    );
                    emit(out, &Structure::Fibration(f), summary)
                }
                Err(e) => Ok(Outcome::default().fail(e.to_string())),
            }
        }
        FibrationOp::Roundtrip { path } => {
            let f = open_fibration(path)?;
            let verified = canonical_roundtrip_iso(&f).and_then(|_| f.end_inclusion_properties());
            Ok(match verified {
                Ok((a, b)) => {
                    let mut out = format!(
                        "fibration: objects {}, arrows {}\nroundtrip isomorphism over I: verified\n",
                        f.total().objects().len(),
                        f.total().arrow_count()
                    );
                    let _ = writeln!(out, "A-end inclusion: {}", inclusion_summary(a));
                    let _ = writeln!(out, "B-end inclusion: {}", inclusion_summary(b));
                    let code = if a.is_equivalence() && b.is_equivalence() { 0 } else { 1 };
                    Outcome {
                        stdout: out,
                        code,
                        ..Outcome::default()
                    }
                }
                Err(e) => Outcome::default().fail(format!("roundtrip isomorphism over I: {e}")),
            })
        }
    }
}

fn generated(items: Vec<(String, Generated)>) -> Vec<(String, Structure)> {
    items
        .into_iter()
        .map(|(n, g)| {
            let s = match g {
                Generated::Pregroupoid(p) => Structure::Pregroupoid(p),
                Generated::LeftTorsor(t) => Structure::LeftTorsor(t),
            };
            (n, s)
        })
        .collect()
}

fn build(spec: &GeneratorSpec, seed: u64) -> Result<Vec<(String, Structure)>, CliError> {
    spec.build(seed)
        .map(generated)
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn theorems(
    path: &Option<PathBuf>,
    spec: &Option<GeneratorSpec>,
    seed: u64,
    strict: Strict,
) -> Result<Outcome, CliError> {
    let items = match (path, spec) {
        (Some(path), _) => vec![(path.display().to_string(), open(path, None)?)],
        (None, Some(spec)) => build(spec, seed)?,
        (None, None) => return Err(CliError::Usage("give a document or --generate".into())),
    };
    let options = SuiteOptions {
        strict: strict.strict,
        ..SuiteOptions::default()
    };
    let rows = run_all(&items, options).map_err(CliError::Usage)?;
    Ok(Outcome {
        stdout: render(&rows),
        code: if rows.iter().all(|r| r.passed()) { 0 } else { 1 },
        ..Outcome::default()
    })
}

fn file_name(instance: &str) -> String {
    let stem: String = instance
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '-' })
        .collect();
    format!("{stem}.json")
}

fn generate(spec: &GeneratorSpec, seed: u64, out: &Option<PathBuf>) -> Result<Outcome, CliError> {
    let items = build(spec, seed)?;
    if let [(name, s)] = &items[..] {
        return emit(out, s, format!("{name}: {}\n", s.kind()));
    }
    let Some(dir) = out else {
        return Err(CliError::Usage(format!(
            "`{spec}` yields {} instances; pass --out DIR",
            items.len()
        )));
    };
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.clone(),
        source,
    })?;
    let mut summary = String::new();
    for (name, s) in &items {
        let file = file_name(name);
        write(&dir.join(&file), &save(s))?;
        let _ = writeln!(summary, "{name}: {} -> {file}", s.kind());
    }
    Ok(Outcome {
        stdout: summary,
        ..Outcome::default()
    })
}

/// Runs one command. `Err` means exit code 2.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Check { path, kind, strict } => check(path, *kind, *strict, cli.max_report),
        Command::Envelope { path, out, strict } => envelope(path, out, *strict),
        Command::Edges { path, out, strict } => edges(path, out, *strict),
        Command::Torsor { op } => torsor(op),
        Command::Fibration { op } => fibration(op),
        Command::Theorems {
            path,
            generate,
            seed,
            strict,
        } => theorems(path, generate, *seed, *strict),
        Command::Generate { spec, seed, out } => generate(spec, *seed, out),
    }
}
