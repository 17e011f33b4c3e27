//! extcoh: exact second cohomology, extension classification, and
//! co-prolongation obstructions for finite groups.
//!
//! Exit codes: 0 success, 1 verification property violation (verify only),
//! 2 invalid input. All reports are deterministic; identical inputs produce
//! byte-identical --json output.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::to_string_pretty;

use extcoh::cohomology::h2;
use extcoh::coprolong::{
    classify, construct_coprolongation_with, induced_crossed_module, kernel_splitting,
    obstruction,
};
use extcoh::extension::{crossed_product, is_central, CrossedModuleReport};
use extcoh::json::{
    self, cochain_doc, parse_workspace, ClassReport, CochainDoc, Diagnostics, Workspace,
};
use extcoh::oracle::EnumGuard;
use extcoh::sweep::{all_class_coords, run_sweep, SweepOptions};

#[derive(Parser)]
#[command(
    name = "extcoh",
    version,
    about = "Exact H^2 of finite groups, extension classification, and co-prolongation obstructions"
)]
struct Cli {
    /// Emit a machine-readable JSON report
    #[arg(long, global = true)]
    json: bool,
    /// Write the report to this file instead of stdout
    #[arg(long, global = true, value_name = "path")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Operations on group definitions
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
    /// Operations on homomorphism definitions
    Hom {
        #[command(subcommand)]
        cmd: HomCmd,
    },
    /// Compute H^2 of the module defined in a document
    H2 { file: PathBuf },
    /// Operations on extensions
    Extension {
        #[command(subcommand)]
        cmd: ExtensionCmd,
    },
    /// Co-prolongation obstruction theory
    Coprolong {
        #[command(subcommand)]
        cmd: CoprolongCmd,
    },
    /// Generate the corpus of systems within bounds and compare the lattice
    /// path against the brute-force oracle
    Verify {
        /// Largest base-group order to generate
        #[arg(long, default_value_t = 4)]
        max_order: usize,
        /// Enumeration cap for the brute-force side
        #[arg(long, value_name = "n")]
        guard: Option<u128>,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Check every group in a document: closure, identity, inverses
    Validate { file: PathBuf },
}

#[derive(Subcommand)]
enum HomCmd {
    /// Check every homomorphism in a document
    Validate { file: PathBuf },
}

#[derive(Subcommand)]
enum ExtensionCmd {
    /// Enumerate the extension classes of a module, one per H^2 class
    Classes { file: PathBuf },
}

#[derive(Subcommand)]
enum CoprolongCmd {
    /// Decide whether a co-prolongation exists and exhibit a witness
    Obstruction { file: PathBuf },
    /// Enumerate co-prolongation classes (the orbit under Ker of the induced map)
    Classify { file: PathBuf },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, code)) => {
            if let Some(path) = &cli.output {
                if let Err(e) = fs::write(path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{text}");
            }
            code
        }
        Err(Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn load(file: &Path) -> Result<Workspace, Failure> {
    let text = fs::read_to_string(file)
        .map_err(|e| Failure(format!("cannot read {}: {e}", file.display())))?;
    Ok(parse_workspace(&text)?)
}

fn run(cli: &Cli) -> Result<(String, ExitCode), Failure> {
    match &cli.cmd {
        Cmd::Group {
            cmd: GroupCmd::Validate { file },
        } => cmd_group_validate(file, cli.json),
        Cmd::Hom {
            cmd: HomCmd::Validate { file },
        } => cmd_hom_validate(file, cli.json),
        Cmd::H2 { file } => cmd_h2(file, cli.json),
        Cmd::Extension {
            cmd: ExtensionCmd::Classes { file },
        } => cmd_extension_classes(file, cli.json),
        Cmd::Coprolong {
            cmd: CoprolongCmd::Obstruction { file },
        } => cmd_obstruction(file, cli.json),
        Cmd::Coprolong {
            cmd: CoprolongCmd::Classify { file },
        } => cmd_classify(file, cli.json),
        Cmd::Verify { max_order, guard } => cmd_verify(*max_order, *guard, cli.json),
    }
}

fn ok(text: String) -> Result<(String, ExitCode), Failure> {
    Ok((text, ExitCode::SUCCESS))
}

// ---------------------------------------------------------------------------
// rendering helpers

fn render_factors(factors: &[i64]) -> String {
    if factors.is_empty() {
        return "0".into();
    }
    factors
        .iter()
        .map(|d| format!("Z/{d}"))
        .collect::<Vec<_>>()
        .join(" x ")
}

fn render_coords(coords: &[i64]) -> String {
    let inner: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
    format!("({})", inner.join(","))
}

fn render_value(v: &[i64]) -> String {
    match v {
        [single] => single.to_string(),
        many => {
            let inner: Vec<String> = many.iter().map(|c| c.to_string()).collect();
            format!("({})", inner.join(","))
        }
    }
}

fn render_cochain(doc: &CochainDoc) -> String {
    if doc.values.is_empty() {
        return "0".into();
    }
    doc.values
        .iter()
        .map(|(key, v)| format!("f({key})={}", render_value(v)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn class_line(report: &ClassReport) -> String {
    let name = match &report.extension.tag {
        Some(tag) => tag.clone(),
        None => format!("group of order {}", report.extension.order),
    };
    format!("class {}: {}", render_coords(&report.coords), name)
}

// ---------------------------------------------------------------------------
// commands

fn cmd_group_validate(file: &Path, json: bool) -> Result<(String, ExitCode), Failure> {
    let ws = load(file)?;
    if ws.groups.is_empty() {
        return Err(Failure("document defines no groups".into()));
    }
    let reports: Vec<json::GroupValidation> = ws
        .groups
        .iter()
        .map(|(name, entry)| json::group_validation(name, entry))
        .collect();
    if json {
        return ok(format!("{}\n", to_string_pretty(&reports)?));
    }
    let mut out = String::new();
    for r in &reports {
        out.push_str(&format!(
            "group {}: ok (order {}, {}{}{})\n",
            r.name,
            r.order,
            if r.abelian { "abelian" } else { "nonabelian" },
            r.tag.as_ref().map(|t| format!(", {t}")).unwrap_or_default(),
            if r.reindexed.is_some() {
                ", identity moved to index 0"
            } else {
                ""
            },
        ));
    }
    ok(out)
}

fn cmd_hom_validate(file: &Path, json: bool) -> Result<(String, ExitCode), Failure> {
    let ws = load(file)?;
    if ws.homs.is_empty() {
        return Err(Failure("document defines no homs".into()));
    }
    let reports: Vec<json::HomValidation> = ws
        .homs
        .iter()
        .map(|(name, hom)| json::hom_validation(name, hom))
        .collect();
    if json {
        return ok(format!("{}\n", to_string_pretty(&reports)?));
    }
    let mut out = String::new();
    for r in &reports {
        let mut notes = vec![format!("kernel {}", r.kernel_size)];
        if r.injective {
            notes.push("injective".into());
        }
        if r.surjective {
            notes.push("surjective".into());
        }
        out.push_str(&format!(
            "hom {}: ok ({} -> {}, {})\n",
            r.name,
            r.source_order,
            r.target_order,
            notes.join(", "),
        ));
    }
    ok(out)
}

fn cmd_h2(file: &Path, json: bool) -> Result<(String, ExitCode), Failure> {
    let ws = load(file)?;
    let (_, module) = ws.sole_module()?;
    let pres = h2(module);
    let report = json::h2_report(&pres)?;
    if json {
        return ok(format!("{}\n", to_string_pretty(&report)?));
    }
    if report.factors.is_empty() {
        return ok("H2 = 0\n".into());
    }
    let generators = report
        .generators
        .iter()
        .map(render_cochain)
        .collect::<Vec<_>>()
        .join("; ");
    ok(format!(
        "H2 = {}; generators: {generators}\n",
        render_factors(&report.factors)
    ))
}

fn cmd_extension_classes(file: &Path, json: bool) -> Result<(String, ExitCode), Failure> {
    let ws = load(file)?;
    let (_, module) = ws.sole_module()?;
    let pres = h2(module);
    let report = json::h2_report(&pres)?;
    let mut classes = Vec::new();
    for coords in all_class_coords(&pres) {
        let f = pres.cochain_from_coords(&coords);
        let (e, section) = crossed_product(module, &f)?;
        classes.push(ClassReport {
            coords: coords
                .iter()
                .map(|c| {
                    use extcoh::num_traits::ToPrimitive;
                    c.to_i64().expect("corpus coordinates fit in 64 bits")
                })
                .collect(),
            extension: json::extension_report(&e, Some(&section)),
        });
    }
    let census = json::CensusReport {
        h2_factors: report.factors.clone(),
        count: classes.len(),
        classes,
    };
    if json {
        return ok(format!("{}\n", to_string_pretty(&census)?));
    }
    let mut out = format!(
        "H2 = {}; {} extension classes\n",
        render_factors(&census.h2_factors),
        census.count
    );
    for class in &census.classes {
        out.push_str(&class_line(class));
        out.push('\n');
    }
    ok(out)
}

fn cmd_obstruction(file: &Path, json: bool) -> Result<(String, ExitCode), Failure> {
    let ws = load(file)?;
    let (_, sys) = ws.sole_system()?;
    let obs = obstruction(sys)?;
    let report = json::obstruction_report(&obs)?;
    if json {
        return ok(format!("{}\n", to_string_pretty(&report)?));
    }
    let mut out = format!("vanishes: {}\n", report.vanishes);
    out.push_str(&format!(
        "obstruction = {} in Coker = {}\n",
        render_coords(&report.coker_coords),
        render_factors(&report.coker_factors)
    ));
    if let Some(witness) = &report.witness {
        out.push_str(&format!("witness: {}\n", render_cochain(witness)));
    }
    ok(out)
}

fn cmd_classify(file: &Path, json: bool) -> Result<(String, ExitCode), Failure> {
    let ws = load(file)?;
    let (_, sys) = ws.sole_system()?;
    let list = classify(sys)?;
    let e0_central = is_central(sys.extension())?;
    // rebuild each class and push it through the morphism and crossed-module
    // checks; vacuously true when no class exists
    let mut crossed_ok = true;
    let target_pres = list.obstruction.target_h2().clone();
    for class in &list.classes {
        let (e, beta) = construct_coprolongation_with(sys, &class.cocycle, &target_pres)?;
        let split = kernel_splitting(sys.extension(), &e, &beta, sys.gamma())?;
        match induced_crossed_module(sys, &split) {
            Ok((_, CrossedModuleReport::Valid)) => {}
            _ => crossed_ok = false,
        }
    }
    let report = json::classify_report(
        &list,
        Diagnostics {
            e0_central,
            crossed_module_ok: crossed_ok,
        },
    )?;
    if json {
        return ok(format!("{}\n", to_string_pretty(&report)?));
    }
    let obs_report = json::obstruction_report(&list.obstruction)?;
    let mut out = format!("vanishes: {}\n", report.vanishes);
    out.push_str(&format!(
        "obstruction = {} in Coker = {}\n",
        render_coords(&obs_report.coker_coords),
        render_factors(&obs_report.coker_factors)
    ));
    out.push_str(&format!("classes: {}\n", report.classes.len()));
    for class in &report.classes {
        out.push_str(&class_line(class));
        out.push('\n');
    }
    out.push_str(&format!("E0 central: {}\n", report.diagnostics.e0_central));
    out.push_str(&format!(
        "crossed modules: {}\n",
        if report.diagnostics.crossed_module_ok {
            "ok"
        } else {
            "failed"
        }
    ));
    ok(out)
}

fn cmd_verify(
    max_order: usize,
    guard: Option<u128>,
    json: bool,
) -> Result<(String, ExitCode), Failure> {
    let opts = SweepOptions {
        max_order,
        guard: guard.map(EnumGuard::new).unwrap_or_default(),
    };
    let report = run_sweep(&opts);
    let code = if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    };
    if json {
        let doc = json::verify_report(max_order, &report);
        return Ok((format!("{}\n", to_string_pretty(&doc)?), code));
    }
    let verdict = if report.all_pass() { "PASS" } else { "FAIL" };
    Ok((format!("{report}verify: {verdict}\n"), code))
}
