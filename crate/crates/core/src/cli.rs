//! Command-line driver.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::error::{Error, Result};
use crate::fixture::{bundled_text, load_fixture, parse_fixture, Fixture};
use crate::identities::{dual_cross_check, verify_all, verify_tachibana};
use crate::ladder::{composition_check, figure_data, ladder_trace};
use crate::lefschetz::{lef_matrix_harmonic, metric_independence_check, relation, verdict, Overall};
use crate::report::{
    matrix_strings, CohomologySection, ContactSection, CrossDoc, CrosscheckSection,
    IdentitiesSection, LadderSection, LefschetzSection, ReportDocument, TraceDoc, ValidateSection,
};
use crate::sasakian::adjoint_pairs_check;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;
pub const EXIT_NEGATIVE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "lefschetz-lab", version, about = "Exact Sasakian and Hard Lefschetz checks on invariant-form models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the output (JSON report, or TSV for `figure`) to this path.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Emit the JSON report instead of the text summary.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Jacobi identity, contact condition and Sasakian axioms.
    Validate { fixture: PathBuf },
    /// Betti numbers and cohomology representatives.
    Cohomology { fixture: PathBuf },
    /// Operator identity catalog and harmonic-form properties.
    Identities {
        fixture: PathBuf,
        /// Run on structures that fail the Sasakian axioms and report failures.
        #[arg(long)]
        diagnostic: bool,
    },
    /// Eigenvalue ladder for each harmonic basis form.
    Ladder {
        fixture: PathBuf,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Node and edge table of the spectral families (TSV).
    Figure { fixture: PathBuf },
    /// Lefschetz relations, bilinear forms, parity and verdict.
    Lefschetz { fixture: PathBuf },
    /// Harmonic route against the relation route, optionally for a second metric.
    Crosscheck {
        fixture: PathBuf,
        #[arg(long)]
        metric2: Option<PathBuf>,
    },
}

impl Command {
    fn fixture(&self) -> &Path {
        match self {
            Command::Validate { fixture }
            | Command::Cohomology { fixture }
            | Command::Identities { fixture, .. }
            | Command::Ladder { fixture, .. }
            | Command::Figure { fixture }
            | Command::Lefschetz { fixture }
            | Command::Crosscheck { fixture, .. } => fixture,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Cohomology { .. } => "cohomology",
            Command::Identities { .. } => "identities",
            Command::Ladder { .. } => "ladder",
            Command::Figure { .. } => "figure",
            Command::Lefschetz { .. } => "lefschetz",
            Command::Crosscheck { .. } => "crosscheck",
        }
    }
}

/// Loads a fixture file; a missing file named after a bundled fixture
/// (`heis3` or `heis3.json`) resolves to the bundled copy.
pub fn resolve_fixture(path: &Path) -> Result<Fixture> {
    if path.exists() {
        return load_fixture(path)?.load();
    }
    let stem = path
        .file_name()
        .and_then(|s| s.to_str())
        .map(|s| s.trim_end_matches(".json"))
        .unwrap_or_default();
    match bundled_text(stem) {
        Some(text) => parse_fixture(text)?.load(),
        None => Err(Error::Io(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("{} not found and not a bundled fixture name", path.display()),
        ))),
    }
}

/// Result of a command: report, optional TSV, summary text and exit code.
#[derive(Debug)]
pub struct Outcome {
    pub report: ReportDocument,
    pub tsv: Option<String>,
    pub summary: String,
    pub code: i32,
}

pub fn run(cmd: &Command) -> Result<Outcome> {
    let fixture = resolve_fixture(cmd.fixture())?;
    let mut report = ReportDocument::new(&fixture.name, cmd.name());
    let mut summary = String::new();
    let mut tsv = None;
    let code = match cmd {
        Command::Validate { .. } => validate(&fixture, &mut report, &mut summary)?,
        Command::Cohomology { .. } => {
            let c = &fixture.complex;
            let betti = c.betti_numbers();
            let representatives = (0..=c.dim())
                .map(|p| {
                    Ok(c.cohomology(p)?
                        .representatives()
                        .iter()
                        .map(|f| f.to_string())
                        .collect())
                })
                .collect::<Result<Vec<Vec<String>>>>()?;
            let _ = writeln!(summary, "{}: betti {:?}", fixture.name, betti);
            report.cohomology = Some(CohomologySection {
                betti,
                representatives,
            });
            EXIT_OK
        }
        Command::Identities { diagnostic, .. } => {
            let model = fixture.model()?;
            let results = verify_all(&model, *diagnostic)?;
            let verified = model.is_verified();
            let mut tachibana = Vec::new();
            let mut dual = None;
            if verified {
                for p in 0..=model.dim() {
                    tachibana.push(verify_tachibana(&model, p)?);
                }
                dual = Some(dual_cross_check(&model)?);
            }
            let passed = results.iter().all(|r| r.passed)
                && tachibana.iter().all(|t| t.passed())
                && dual.unwrap_or(true);
            for r in &results {
                let _ = writeln!(
                    summary,
                    "{:<14} {}  {}",
                    r.id,
                    if r.passed { "ok  " } else { "FAIL" },
                    r.formula
                );
            }
            let _ = writeln!(summary, "all identities hold: {passed}");
            report.identities = Some(IdentitiesSection {
                diagnostic: *diagnostic,
                verified,
                results,
                dual_cross_check: dual,
                tachibana,
                passed,
            });
            match (passed, verified) {
                (true, _) => EXIT_OK,
                (false, true) => EXIT_INTERNAL,
                (false, false) => EXIT_NEGATIVE,
            }
        }
        Command::Ladder { degree, .. } => {
            let model = fixture.model()?;
            model.require_verified()?;
            let degrees: Vec<usize> = match degree {
                Some(p) => vec![*p],
                None => (0..=model.n()).collect(),
            };
            let mut sections = Vec::new();
            for p in degrees {
                let traces = model
                    .hodge()
                    .harmonic_basis(p)
                    .iter()
                    .map(|w| ladder_trace(&model, w).map(|t| TraceDoc::from(&t)))
                    .collect::<Result<Vec<_>>>()?;
                let composition = composition_check(&model, p)?;
                let _ = writeln!(
                    summary,
                    "p={p}: {} traces, G_p F_p = {}·I: {}",
                    traces.len(),
                    composition.factor,
                    composition.g_after_f && composition.f_after_g
                );
                for t in &traces {
                    let chain: Vec<String> = t
                        .nodes
                        .iter()
                        .map(|n| format!("({}, {}, {})", n.degree, n.nu, n.family))
                        .collect();
                    let _ = writeln!(summary, "  {}: {}", t.seed, chain.join(" -> "));
                }
                sections.push(LadderSection {
                    degree: p,
                    traces,
                    composition,
                });
            }
            let ok = sections.iter().all(|s| {
                s.composition.g_after_f
                    && s.composition.f_after_g
                    && s.traces.iter().all(|t| t.factorizations_hold)
            });
            report.ladder = sections;
            if ok {
                EXIT_OK
            } else {
                EXIT_INTERNAL
            }
        }
        Command::Figure { .. } => {
            let model = fixture.model()?;
            let fig = figure_data(&model)?;
            let ok = fig.all_admissible();
            let text = fig.to_tsv();
            summary.push_str(&text);
            tsv = Some(text);
            report.figure = Some(fig);
            if ok {
                EXIT_OK
            } else {
                EXIT_INTERNAL
            }
        }
        Command::Lefschetz { .. } => {
            let contact = fixture.contact()?;
            let model = fixture.model()?;
            let v = verdict(&fixture.complex, &contact, Some(&model))?;
            for r in &v.relations {
                let _ = writeln!(summary, "p={}: {}", r.degree, r.class);
            }
            let _ = writeln!(summary, "betti {:?}", v.parity.betti);
            let code = match &v.overall {
                Overall::LefschetzContact => {
                    let _ = writeln!(summary, "verdict: lefschetz_contact");
                    EXIT_OK
                }
                Overall::Obstructed { reasons } => {
                    let _ = writeln!(summary, "verdict: obstructed ({})", reasons.join("; "));
                    EXIT_NEGATIVE
                }
            };
            report.lefschetz = Some(LefschetzSection::from(&v));
            code
        }
        Command::Crosscheck { metric2, .. } => {
            let model = fixture.model()?;
            model.require_verified()?;
            let second = match metric2 {
                Some(path) => {
                    let f2 = resolve_fixture(path)?;
                    let m2 = f2.model()?;
                    m2.require_verified()?;
                    Some((f2.name, m2))
                }
                None => None,
            };
            let mut degrees = Vec::new();
            for p in 0..=model.n() {
                let rel = relation(model.complex(), model.contact(), p)?;
                let harmonic = lef_matrix_harmonic(&model, p)?;
                let second_metric = second
                    .as_ref()
                    .map(|(_, m2)| metric_independence_check(&model, m2, p))
                    .transpose()?;
                degrees.push(CrossDoc {
                    degree: p,
                    relation_agrees: rel.matrix.as_ref() == Some(&harmonic),
                    relation_matrix: rel.matrix.as_ref().map(matrix_strings),
                    harmonic_matrix: matrix_strings(&harmonic),
                    second_metric,
                });
            }
            let passed = degrees.iter().all(|d| {
                d.relation_agrees && d.second_metric.as_ref().is_none_or(|m| m.passed())
            });
            for d in &degrees {
                let _ = writeln!(
                    summary,
                    "p={}: relation agrees {}{}",
                    d.degree,
                    d.relation_agrees,
                    d.second_metric
                        .as_ref()
                        .map(|m| format!(", second metric agrees {}", m.passed()))
                        .unwrap_or_default()
                );
            }
            report.crosscheck = Some(CrosscheckSection {
                second_fixture: second.map(|(n, _)| n),
                degrees,
                passed,
            });
            if passed {
                EXIT_OK
            } else {
                EXIT_INTERNAL
            }
        }
    };
    Ok(Outcome {
        report,
        tsv,
        summary,
        code,
    })
}

fn validate(fixture: &Fixture, report: &mut ReportDocument, summary: &mut String) -> Result<i32> {
    let c = &fixture.complex;
    let mut section = ValidateSection {
        dim: c.dim(),
        jacobi: c.d_squared_vanishes(),
        contact: None,
        contact_error: None,
        axioms: None,
        adjoint_pairs: None,
        sasakian: false,
    };
    let _ = writeln!(summary, "{}: dim {}, Jacobi ok", fixture.name, c.dim());
    match fixture.contact() {
        Err(e @ (Error::ContactViolation(_) | Error::Precondition(_))) => {
            let _ = writeln!(summary, "contact: {e}");
            section.contact_error = Some(e.to_string());
        }
        Err(e) => return Err(e),
        Ok(contact) => {
            let model = fixture.model()?;
            section.contact = Some(ContactSection {
                n: contact.n(),
                eta: contact.eta().to_string(),
                xi: contact.xi().coeffs().iter().map(|v| v.to_string()).collect(),
                phi_form: contact.phi_form().to_string(),
            });
            for a in &model.report().checks {
                let _ = writeln!(
                    summary,
                    "{:<18} {}{}",
                    a.axiom,
                    if a.passed { "ok" } else { "FAIL" },
                    a.witness.as_ref().map(|w| format!("  witness {w}")).unwrap_or_default()
                );
            }
            section.sasakian = model.is_verified();
            section.axioms = Some(model.report().clone());
            section.adjoint_pairs = Some(adjoint_pairs_check(&model));
        }
    }
    let _ = writeln!(summary, "sasakian: {}", section.sasakian);
    let code = if section.sasakian { EXIT_OK } else { EXIT_NEGATIVE };
    report.validate = Some(section);
    Ok(code)
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Invariant(_) => EXIT_INTERNAL,
        _ => EXIT_INPUT,
    }
}

/// Parses arguments, runs, writes output and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let outcome = match run(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    let body = match (&outcome.tsv, cli.json) {
        (Some(tsv), false) => tsv.clone(),
        (_, true) => outcome.report.to_json(),
        (None, false) => outcome.summary.clone(),
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &body),
        None => std::io::stdout().write_all(body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_INPUT;
    }
    if cli.out.is_some() && !cli.json {
        print!("{}", if outcome.tsv.is_some() { "" } else { &outcome.summary });
    }
    outcome.code
}
