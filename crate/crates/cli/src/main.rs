//! `orbiteq`: invariants, relation classification, full-group arithmetic, and
//! certificate verification for one-sided shifts of finite type, from the
//! command line.
//!
//! Exit codes: 0 on success, 1 when a verification/expectation fails, 2 on
//! invalid input (naming the violated invariant), 3 when classification
//! uncovers contradictory evidence.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use orbiteq_core::{
    classify, extract_coe_data, verify_homeomorphism, ClassifyOptions, CoeExtraction,
    HomeoCertificate, TransitionMatrix,
};

mod output;
mod suite;

use output::{
    render_classification, render_invariants, render_verification, CertificateDoc, Format,
    TableauDoc,
};

#[derive(Parser)]
#[command(name = "orbiteq", version, about = "Exact computations for one-sided shifts of finite type")]
struct Cli {
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact invariants of one transition matrix.
    Invariants {
        /// Matrix file.
        matrix: PathBuf,
    },
    /// Classify the relations between two shifts, optionally with
    /// homeomorphism certificates.
    Classify {
        matrix_a: PathBuf,
        matrix_b: PathBuf,
        /// Forward and backward transducer files for one certificate; repeat
        /// the flag for several certificates.
        #[arg(long = "cert", num_args = 2, value_names = ["FWD", "BWD"])]
        certs: Vec<PathBuf>,
        #[command(flatten)]
        opts: SearchOpts,
    },
    /// Operations in the group of prefix exchanges of one shift.
    #[command(subcommand)]
    Fullgroup(Fullgroup),
    /// Check that two transducers are mutually inverse homeomorphisms and
    /// extract their orbit data.
    VerifyCert {
        forward: PathBuf,
        backward: PathBuf,
        #[command(flatten)]
        opts: SearchOpts,
    },
    /// Reclassify every pair of the bundled example matrices and compare the
    /// verdicts against the known relation table.
    Examples {
        /// Alternate expected-relation table (defaults to the bundled one).
        #[arg(long)]
        table: Option<PathBuf>,
        #[command(flatten)]
        opts: SearchOpts,
    },
}

#[derive(Subcommand)]
enum Fullgroup {
    /// Compose two elements (the first acts after the second).
    Compose {
        matrix: PathBuf,
        outer: PathBuf,
        inner: PathBuf,
    },
    /// Invert an element.
    Invert { matrix: PathBuf, tableau: PathBuf },
    /// Print the orbit cocycle of an element.
    Cocycle { matrix: PathBuf, tableau: PathBuf },
    /// Decide eventual triviality (σ^K ∘ τ = σ^K) and print the least K.
    IsAf { matrix: PathBuf, tableau: PathBuf },
}

#[derive(Args)]
struct SearchOpts {
    /// Bound for the per-cylinder orbit-constant search.
    #[arg(long, default_value_t = 16)]
    search_bound: usize,
    /// Depth budget for coboundary decisions.
    #[arg(long, default_value_t = 8)]
    max_depth: usize,
    /// Largest lag tried for eventual conjugacy checks.
    #[arg(long, default_value_t = 16)]
    k_bound: usize,
    /// Size gate for the conjugacy witness search.
    #[arg(long, default_value_t = 4)]
    inner_dim: usize,
}

impl SearchOpts {
    fn to_options(&self) -> ClassifyOptions {
        ClassifyOptions {
            search_bound: self.search_bound,
            max_depth: self.max_depth,
            k_bound: self.k_bound,
            sse_size_max: self.inner_dim,
            ..ClassifyOptions::default()
        }
    }
}

/// Failures carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn expectation(message: impl Into<String>) -> Failure {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("cannot read {}: {e}", path.display())))
}

fn load_matrix(path: &Path) -> Result<TransitionMatrix, Failure> {
    let text = read_file(path)?;
    orbiteq_core::io::parse_matrix(&text)
        .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn load_tableau(
    path: &Path,
    m: &TransitionMatrix,
) -> Result<orbiteq_core::tableau::TableauElement, Failure> {
    let text = read_file(path)?;
    orbiteq_core::io::parse_tableau(&text, m)
        .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

/// Loads a transducer file, resolving its matrix references relative to the
/// transducer file's directory.
fn load_transducer(path: &Path) -> Result<orbiteq_core::transducer::SequentialTransducer, Failure> {
    let text = read_file(path)?;
    let header = orbiteq_core::io::parse_transducer_header(&text)
        .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let source = load_matrix(&dir.join(&header.source_path))?;
    let target = load_matrix(&dir.join(&header.target_path))?;
    orbiteq_core::io::parse_transducer(&text, &source, &target)
        .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn load_certificate(fwd: &Path, bwd: &Path) -> Result<HomeoCertificate, Failure> {
    let forward = load_transducer(fwd)?;
    let backward = load_transducer(bwd)?;
    if forward.source() != backward.target() || forward.target() != backward.source() {
        return Err(Failure::invalid(format!(
            "certificate halves disagree on their matrices: {} and {}",
            fwd.display(),
            bwd.display()
        )));
    }
    Ok(HomeoCertificate::new(forward, backward))
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Invariants { matrix } => {
            let m = load_matrix(&matrix)?;
            Ok(render_invariants(&orbiteq_core::invariant_report(&m), cli.format))
        }
        Command::Classify {
            matrix_a,
            matrix_b,
            certs,
            opts,
        } => {
            let a = load_matrix(&matrix_a)?;
            let b = load_matrix(&matrix_b)?;
            let mut loaded = Vec::new();
            for pair in certs.chunks(2) {
                loaded.push(load_certificate(&pair[0], &pair[1])?);
            }
            match classify(&a, &b, &loaded, &opts.to_options()) {
                Ok(report) => Ok(render_classification(&report, cli.format)),
                Err(conflict) => Err(Failure {
                    code: 3,
                    message: conflict.to_string(),
                }),
            }
        }
        Command::Fullgroup(op) => run_fullgroup(op, cli.format),
        Command::VerifyCert {
            forward,
            backward,
            opts,
        } => {
            let cert = load_certificate(&forward, &backward)?;
            let verification = verify_homeomorphism(&cert);
            if !verification.is_verified() {
                let doc = CertificateDoc::failed(&cert, &verification);
                return Err(Failure::expectation(render_verification(&doc, cli.format)));
            }
            let extraction = extract_coe_data(&cert, opts.search_bound);
            let doc = match extraction {
                CoeExtraction::Found(data) => CertificateDoc::verified(&cert, &data),
                CoeExtraction::Inconclusive { on_source, cylinder } => {
                    CertificateDoc::inconclusive(&cert, on_source, &cylinder, opts.search_bound)
                }
            };
            Ok(render_verification(&doc, cli.format))
        }
        Command::Examples { table, opts } => {
            let table_text = match &table {
                Some(path) => read_file(path)?,
                None => suite::BUNDLED_RELATIONS.to_string(),
            };
            match suite::run_suite(&table_text, &opts.to_options()) {
                Ok(doc) => {
                    let rendered = suite::render_suite(&doc, cli.format);
                    if doc.ok() {
                        Ok(rendered)
                    } else {
                        Err(Failure::expectation(rendered))
                    }
                }
                Err(suite::SuiteError::Invalid(message)) => Err(Failure::invalid(message)),
                Err(suite::SuiteError::Contradiction(c)) => Err(Failure {
                    code: 3,
                    message: c.to_string(),
                }),
            }
        }
    }
}

fn run_fullgroup(op: Fullgroup, format: Format) -> Result<String, Failure> {
    match op {
        Fullgroup::Compose { matrix, outer, inner } => {
            let m = load_matrix(&matrix)?;
            let t1 = load_tableau(&outer, &m)?;
            let t2 = load_tableau(&inner, &m)?;
            Ok(TableauDoc::from_element(&t1.compose(&t2)).render(format))
        }
        Fullgroup::Invert { matrix, tableau } => {
            let m = load_matrix(&matrix)?;
            let t = load_tableau(&tableau, &m)?;
            Ok(TableauDoc::from_element(&t.invert()).render(format))
        }
        Fullgroup::Cocycle { matrix, tableau } => {
            let m = load_matrix(&matrix)?;
            let t = load_tableau(&tableau, &m)?;
            Ok(output::render_cocycle(&t.cocycle(), &m, format))
        }
        Fullgroup::IsAf { matrix, tableau } => {
            let m = load_matrix(&matrix)?;
            let t = load_tableau(&tableau, &m)?;
            Ok(output::render_is_af(t.is_af(), format))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", f.message.trim_end());
            ExitCode::from(f.code)
        }
    }
}
