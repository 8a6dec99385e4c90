//! Command dispatch for the `cbswb` binary.

mod report;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cbswb::algebra::{algebra_to_json, iso_search, parse_document, quotient_algebra, AlgebraDocument, IsoMode};
use cbswb::cbs::{
    cbs1_definition_check, cbs_complete_check, cbs_property_check, presheaf_check, CompleteVerdict, Fhat,
    OperatorKind, PresheafOptions,
};
use cbswb::congruence::all_congruences;
use cbswb::omega::{omega_cbs_run, omega_law_failures, quasicyclic_suite, truncate_validate, PeriodicSet};
use cbswb::structure::{bfc_check_of, center_of_lattice, church_centers, factor_congruences_of, z_con_report};
use cbswb::{corpus, Budget, Congruence, FiniteAlgebra, Sentence, Term};

pub use report::{Report, Verdict, SCHEMA};

pub const BUDGET_ENV: &str = "CBSWB_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "cbswb", version, about = "Congruence lattices, factor congruences and CBS-sequences of finite algebras")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Carrier bound for congruence enumeration and isomorphism search.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_size: Option<u64>,
    /// Term evaluations allowed per universal check.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub eval_budget: Option<u64>,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct KindArgs {
    /// con, fc, zcon or relative.
    #[arg(long, default_value = "fc")]
    pub kind: String,
    /// Axiom for `relative`, e.g. "(+ x y) = (+ y x)"; defaults to the file's axioms.
    #[arg(long = "axiom")]
    pub axioms: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List Con(A) in canonical order.
    Con { algebra: PathBuf },
    /// Factor congruences and the Boolean test for FC(A).
    Fc { algebra: PathBuf },
    /// Central elements of Con(A).
    Center { algebra: PathBuf },
    /// Z(Con(A)) and the permutability of central pairs.
    Zcon { algebra: PathBuf },
    /// Build A/θ from a block literal such as [[0,2],[1,3]].
    Quotient { algebra: PathBuf, congruence: String },
    /// Search for an isomorphism A ≅ B.
    Iso { a: PathBuf, b: PathBuf },
    /// Central elements from a Church term t(z,x,y).
    Church {
        algebra: PathBuf,
        #[arg(long)]
        term: String,
        #[arg(long, default_value = "z,x,y")]
        vars: String,
        #[arg(long)]
        zero: String,
        #[arg(long)]
        one: String,
    },
    /// Check the presheaf conditions for a congruence operator.
    PresheafCheck {
        algebra: PathBuf,
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long)]
        factor: bool,
        #[arg(long)]
        boolean: bool,
    },
    /// The CBS property for K, in both quotient and partner form.
    CbsCheck {
        algebra: PathBuf,
        #[command(flatten)]
        kind: KindArgs,
        /// Partner algebras; defaults to the bundled corpus.
        #[arg(long = "partner")]
        partners: Vec<PathBuf>,
    },
    /// Search a CBS-sequence certifying completeness.
    CbsComplete {
        algebra: PathBuf,
        #[command(flatten)]
        kind: KindArgs,
        /// Defaults to the identity congruence.
        #[arg(long)]
        theta: Option<String>,
        /// Defaults to θ.
        #[arg(long)]
        sigma: Option<String>,
    },
    /// Symbolic CBS run on the countable power of a base algebra.
    OmegaDemo {
        #[arg(long)]
        base: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        shift: u64,
        #[arg(long, default_value = "{0}")]
        zeta: String,
        /// Truncation lengths to validate.
        #[arg(long, value_delimiter = ',', default_value = "8,16")]
        m: Vec<usize>,
        #[arg(long, default_value_t = cbswb::cbs::DEFAULT_BOUND)]
        bound: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Quotients of the quasi-cyclic group at a finite truncation.
    Quasicyclic {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
    },
}

/// A failure that aborts the command with exit status 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError(pub String);

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CliError {}

impl From<cbswb::Error> for CliError {
    fn from(e: cbswb::Error) -> Self {
        CliError(e.to_string())
    }
}

type Out = Result<Report, CliError>;

impl Cli {
    /// Defaults, then `CBSWB_BUDGET`, then the flags.
    pub fn budget(&self, env: Option<&str>) -> Result<Budget, CliError> {
        let mut b = Budget::default();
        if let Some(spec) = env {
            b = b.with_overrides(spec)?;
        }
        if let Some(s) = self.max_size {
            b.max_con_size = s as usize;
            b.max_iso_size = s as usize;
        }
        if let Some(e) = self.eval_budget {
            b.max_evals = e;
        }
        Ok(b)
    }
}

/// Reads an algebra file; a missing path falls back to the bundled corpus
/// entry named by its file stem.
pub fn load(path: &Path) -> Result<AlgebraDocument, CliError> {
    match std::fs::read_to_string(path) {
        Ok(text) => parse_document(&text).map_err(|e| CliError(format!("{}: {e}", path.display()))),
        Err(err) => path
            .file_stem()
            .and_then(|s| s.to_str())
            .and_then(corpus::document)
            .ok_or_else(|| CliError(format!("{}: {err}", path.display()))),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report data serializes")
}

fn kind_of(args: &KindArgs, doc: &AlgebraDocument) -> Result<OperatorKind, CliError> {
    let kind: OperatorKind = args.kind.parse()?;
    if let OperatorKind::Relative(_) = kind {
        let axioms: Vec<Sentence> = if args.axioms.is_empty() {
            doc.axioms.clone()
        } else {
            args.axioms.iter().map(|s| s.parse()).collect::<Result<_, _>>()?
        };
        return Ok(OperatorKind::Relative(axioms));
    }
    Ok(kind)
}

fn element(alg: &FiniteAlgebra, s: &str) -> Result<usize, CliError> {
    if let Ok(i) = s.parse::<usize>() {
        alg.check_element(i)?;
        return Ok(i);
    }
    alg.constant(s)
        .ok_or_else(|| CliError(format!("`{s}` is neither an element nor a constant of {}", alg.name())))
}

fn blocks_line(label: &str, c: &Congruence) -> String {
    format!("{label} {c}")
}

fn run_con(budget: &Budget, path: &Path) -> Out {
    let alg = load(path)?.algebra;
    let con = all_congruences(&alg, budget)?;
    let mut summary = vec![format!("{}: {} congruences", alg.name(), con.len())];
    summary.extend(con.elements().iter().enumerate().map(|(i, c)| format!("{i}: {c}")));
    summary.push(format!("modular: {}, distributive: {}", con.is_modular(), con.is_distributive()));
    Ok(Report::new("con", Verdict::Pass, summary, to_value(&con)))
}

fn run_fc(budget: &Budget, path: &Path) -> Out {
    let alg = load(path)?.algebra;
    let con = all_congruences(&alg, budget)?;
    let fc = factor_congruences_of(&con);
    let bfc = bfc_check_of(&fc)?;
    let mut summary = vec![format!("{}: {} factor congruences", alg.name(), fc.len())];
    for e in &fc.entries {
        let comps: Vec<String> = e.complements.iter().map(|c| c.to_string()).collect();
        summary.push(format!("{} complements {}", e.theta, comps.join(" ")));
    }
    summary.push(format!("BFC={}", bfc.holds));
    if let Some(cx) = &bfc.counterexample {
        summary.push(format!("counterexample: {}", serde_json::to_string(cx).expect("serializes")));
    }
    Ok(Report::new(
        "fc",
        Verdict::from_bool(bfc.holds),
        summary,
        json!({ "factor_congruences": fc, "bfc": bfc }),
    ))
}

fn run_center(budget: &Budget, path: &Path) -> Out {
    let alg = load(path)?.algebra;
    let con = all_congruences(&alg, budget)?;
    let report = center_of_lattice(con.lattice());
    let central: Vec<&Congruence> = report.central.iter().map(|&i| con.get(i)).collect();
    let mut summary = vec![format!("{}: {} central congruences", alg.name(), central.len())];
    summary.extend(central.iter().map(|c| blocks_line("central", c)));
    Ok(Report::new(
        "center",
        Verdict::Pass,
        summary,
        json!({ "central": central, "lattice": report }),
    ))
}

fn run_zcon(budget: &Budget, path: &Path) -> Out {
    let alg = load(path)?.algebra;
    let r = z_con_report(&alg, budget)?;
    let mut summary = vec![format!("{}: |Z(Con)| = {}", alg.name(), r.center.len())];
    for c in &r.compose_checks {
        summary.push(format!("{} with {}: composes to nabla = {}", c.theta, c.complement, c.compose_is_nabla));
    }
    summary.push(format!("Z(Con) = FC: {}", r.equals_fc));
    Ok(Report::new("zcon", Verdict::from_bool(r.condition_holds), summary, to_value(&r)))
}

fn run_quotient(budget: &Budget, path: &Path, literal: &str) -> Out {
    let _ = budget;
    let alg = load(path)?.algebra;
    let theta = match Congruence::parse(&alg, literal) {
        Ok(t) => t,
        Err(e @ cbswb::Error::NotACongruence { .. }) => {
            return Ok(Report::new(
                "quotient",
                Verdict::Refuted,
                vec![format!("{literal} is not a congruence of {}", alg.name()), e.to_string()],
                json!({ "literal": literal, "witness": e.to_string() }),
            ))
        }
        Err(e) => return Err(e.into()),
    };
    let q = quotient_algebra(&alg, &theta)?;
    let table: Value = serde_json::from_str(&algebra_to_json(&q.algebra)).expect("algebra json parses");
    let summary = vec![
        format!("{} / {theta}: {} elements", alg.name(), q.algebra.size()),
        format!("representatives {:?}", q.reps),
        format!("projection {:?}", q.projection.map()),
    ];
    Ok(Report::new(
        "quotient",
        Verdict::Pass,
        summary,
        json!({ "congruence": theta, "reps": q.reps, "projection": q.projection.map(), "algebra": table }),
    ))
}

fn run_iso(budget: &Budget, a: &Path, b: &Path) -> Out {
    let a = load(a)?.algebra;
    let b = load(b)?.algebra;
    let found = iso_search(&a, &b, IsoMode::First, budget)?;
    Ok(match found.first() {
        Some(h) => Report::new(
            "iso",
            Verdict::Pass,
            vec![format!("{} ≅ {} via {:?}", a.name(), b.name(), h.map())],
            json!({ "map": h.map() }),
        ),
        None => Report::new(
            "iso",
            Verdict::Refuted,
            vec![format!("no isomorphism {} → {}", a.name(), b.name())],
            json!({ "map": null }),
        ),
    })
}

fn run_church(budget: &Budget, path: &Path, term: &str, vars: &str, zero: &str, one: &str) -> Out {
    let alg = load(path)?.algebra;
    let t: Term = term.parse()?;
    let names: Vec<&str> = vars.split(',').map(str::trim).collect();
    let vars: [&str; 3] = names
        .try_into()
        .map_err(|_| CliError("--vars needs exactly three names".into()))?;
    let (z, o) = (element(&alg, zero)?, element(&alg, one)?);
    let r = match church_centers(&alg, &t, vars, z, o, budget) {
        Ok(r) => r,
        Err(e @ cbswb::Error::NotChurch(_)) => {
            return Ok(Report::new(
                "church",
                Verdict::Refuted,
                vec![e.to_string()],
                json!({ "witness": e.to_string() }),
            ))
        }
        Err(e) => return Err(e.into()),
    };
    let agree = r.factor_cross_check.iter().all(|&(_, ok)| ok);
    let summary = vec![
        format!("{}: central elements {:?}", alg.name(), r.centers),
        format!("factor pairs agree: {agree}"),
    ];
    Ok(Report::new("church", Verdict::from_bool(agree), summary, to_value(&r)))
}

fn run_presheaf(budget: &Budget, path: &Path, kind: &KindArgs, factor: bool, boolean: bool) -> Out {
    let doc = load(path)?;
    let kind = kind_of(kind, &doc)?;
    let r = presheaf_check(&doc.algebra, &kind, PresheafOptions { factor, boolean }, budget)?;
    let mut summary = vec![format!("{}: K = {kind}, |K(A)| = {}", doc.algebra.name(), r.k_size)];
    for c in &r.conditions {
        summary.push(format!("{}: {} ({} checked)", c.name, if c.passed { "pass" } else { "fail" }, c.checked));
        if let Some(v) = c.violations.first() {
            summary.push(format!("  witness: {}", serde_json::to_string(v).expect("serializes")));
        }
    }
    summary.extend(r.notes.iter().map(|n| format!("note: {n}")));
    Ok(Report::new("presheaf-check", Verdict::from_bool(r.passed()), summary, to_value(&r)))
}

fn run_cbs_check(budget: &Budget, path: &Path, kind: &KindArgs, partners: &[PathBuf]) -> Out {
    let doc = load(path)?;
    let kind = kind_of(kind, &doc)?;
    let alg = &doc.algebra;
    let partners: Vec<FiniteAlgebra> = if partners.is_empty() {
        corpus::all().into_iter().map(|(_, a)| a).collect()
    } else {
        partners.iter().map(|p| load(p).map(|d| d.algebra)).collect::<Result<_, _>>()?
    };
    let prop = cbs_property_check(alg, &kind, budget)?;
    let def = cbs1_definition_check(alg, &partners, &kind, budget)?;
    let mut summary = vec![
        format!("{}: K = {kind}", alg.name()),
        format!("quotient form holds: {}, nontrivial: {}", prop.holds, prop.nontrivial),
        format!("partner form holds: {} over {} partners", def.holds, def.partners.len()),
    ];
    if let Some(f) = prop.failures.first() {
        summary.push(format!("witness: θ = {}, σ = {}", f.theta, f.sigma));
    }
    for p in def.partners.iter().filter(|p| p.a_is_quotient_of_b && p.b_is_quotient_of_a && !p.isomorphic) {
        summary.push(format!("witness partner: {}", p.partner));
    }
    Ok(Report::new(
        "cbs-check",
        Verdict::from_bool(prop.holds && def.holds),
        summary,
        json!({ "property": prop, "definition": def }),
    ))
}

fn run_cbs_complete(budget: &Budget, path: &Path, kind: &KindArgs, theta: Option<&str>, sigma: Option<&str>) -> Out {
    let doc = load(path)?;
    let kind = kind_of(kind, &doc)?;
    let alg = &doc.algebra;
    let theta = match theta {
        Some(t) => Congruence::parse(alg, t)?,
        None => Congruence::identity(alg),
    };
    let sigma = match sigma {
        Some(s) => Congruence::parse(alg, s)?,
        None => theta.clone(),
    };
    let Some(fhat) = Fhat::search(alg, &theta, budget)? else {
        return Ok(Report::new(
            "cbs-complete",
            Verdict::Inconclusive,
            vec![format!("{}: no isomorphism onto the quotient by {theta}", alg.name())],
            json!({ "theta": theta, "iso": null }),
        ));
    };
    let r = cbs_complete_check(&fhat, &sigma, &kind, budget)?;
    let certified = r.verdict == CompleteVerdict::Certified;
    let mut summary = vec![
        format!("{}: K = {kind}, θ = {theta}, σ = {sigma}", alg.name()),
        format!("K Boolean: {}, bracket size {}", r.boolean_k, r.bracket.len()),
    ];
    match &r.certificate {
        Some(c) => {
            summary.push(format!("ζ = {}", c.zeta));
            summary.push(format!("σ_ζ = {}, ¬σ_ζ = {}", c.sigma_zeta, c.neg_sigma_zeta));
            summary.push(format!("χ = {}, ¬χ = {}", c.chi, c.neg_chi));
            summary.push(format!("decomposition chain holds: {}", c.iso_chain.holds()));
        }
        None => summary.extend(r.attempts.iter().map(|a| format!("ζ = {}: {}", a.zeta, a.outcome))),
    }
    let verdict = if certified { Verdict::Pass } else { Verdict::Inconclusive };
    Ok(Report::new("cbs-complete", verdict, summary, to_value(&r)))
}

fn run_omega(budget: &Budget, base: &Path, k: usize, zeta: &str, ms: &[usize], bound: usize, seed: u64) -> Out {
    let alg = load(base)?.algebra;
    let zeta: PeriodicSet = zeta.parse()?;
    let run = omega_cbs_run(&alg, k, &zeta, bound, budget)?;
    let laws = omega_law_failures(&run);
    let truncations = ms
        .iter()
        .map(|&m| truncate_validate(&run, m, seed, budget))
        .collect::<Result<Vec<_>, _>>()?;
    let mut summary = vec![
        format!("base {} (|A| = {}), shift {k}, ζ = {}", run.base_name, run.base_size, run.zeta.describe()),
        format!("σ_ζ = {}", run.sigma_zeta.describe()),
        format!("¬σ_ζ = {}", run.neg_sigma_zeta.describe()),
        format!("χ = {}", run.chi.describe()),
        format!("¬χ = {}", run.neg_chi.describe()),
    ];
    summary.extend(run.chain.iter().map(|s| format!("{}: {}", s.name, s.holds)));
    summary.extend(laws.iter().map(|l| format!("law failure: {l}")));
    for t in &truncations {
        summary.push(format!("truncation m = {}: {}", t.m, if t.passed { "pass" } else { "fail" }));
        for c in t.checks.iter().filter(|c| !c.passed) {
            summary.push(format!("  {}: {}", c.name, c.detail));
        }
    }
    let ok = run.certified() && laws.is_empty() && truncations.iter().all(|t| t.passed);
    Ok(Report::new(
        "omega-demo",
        Verdict::from_bool(ok),
        summary,
        json!({ "run": run, "law_failures": laws, "truncations": truncations }),
    ))
}

fn run_quasicyclic(p: u64, n: u32, m: u32) -> Out {
    let r = quasicyclic_suite(p, n, m)?;
    let summary = vec![
        format!("Z({p}^{m}): congruence classes of 0 have sizes {:?}", r.chain),
        format!("chain {}, kernel {}, quotient iso {}", r.chain_ok, r.kernel_ok, r.quotient_iso),
        r.conclusion.clone(),
    ];
    Ok(Report::new("quasicyclic", Verdict::from_bool(r.passed()), summary, to_value(&r)))
}

/// Runs the parsed command; `env_budget` is the value of `CBSWB_BUDGET`.
pub fn run_command(cli: &Cli, env_budget: Option<&str>) -> Out {
    let budget = cli.budget(env_budget)?;
    let b = &budget;
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Con { algebra } => run_con(b, algebra),
        Command::Fc { algebra } => run_fc(b, algebra),
        Command::Center { algebra } => run_center(b, algebra),
        Command::Zcon { algebra } => run_zcon(b, algebra),
        Command::Quotient { algebra, congruence } => run_quotient(b, algebra, congruence),
        Command::Iso { a, b: other } => run_iso(b, a, other),
        Command::Church { algebra, term, vars, zero, one } => run_church(b, algebra, term, vars, zero, one),
        Command::PresheafCheck { algebra, kind, factor, boolean } => run_presheaf(b, algebra, kind, *factor, *boolean),
        Command::CbsCheck { algebra, kind, partners } => run_cbs_check(b, algebra, kind, partners),
        Command::CbsComplete { algebra, kind, theta, sigma } => {
            run_cbs_complete(b, algebra, kind, theta.as_deref(), sigma.as_deref())
        }
        Command::OmegaDemo { base, shift, zeta, m, bound, seed } => {
            run_omega(b, base, *shift as usize, zeta, m, *bound, *seed)
        }
        Command::Quasicyclic { p, n, m } => run_quasicyclic(*p, *n, *m),
    }?;
    if cli.timing {
        report.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json() + "\n",
    }
}

/// Parses `args`, runs the command and returns `(stdout, stderr, exit status)`.
pub fn execute<I, T>(args: I, env_budget: Option<&str>) -> (String, String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return if code == 0 { (e.to_string(), String::new(), 0) } else { (String::new(), e.to_string(), 2) };
        }
    };
    match run_command(&cli, env_budget) {
        Ok(r) => (render(&r, cli.format), String::new(), r.verdict.exit_code()),
        Err(e) => (String::new(), format!("error: {e}\n"), 2),
    }
}
