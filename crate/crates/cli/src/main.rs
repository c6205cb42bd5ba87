//! `wres`: residue densities and verification reports.
//!
//! Every flag can also be set through a `WRES_*` environment variable
//! (`WRES_OPERATOR`, `WRES_SEED`, ...); an explicit flag wins.
//!
//! Exit status: 0 success, 1 usage error, 2 verification or engine failure.

use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use wres_core::boundary::{phi_cases, phi_total, CaseId, PhiReport};
use wres_core::cosphere::{interior_report, DensityExpr, Measure};
use wres_core::geometry::GeoContext;
use wres_core::oracle::DEFAULT_SEED;
use wres_core::printed::build_square_symbol;
use wres_core::symbols::{parametrix, OperatorKind};
use wres_core::verify::{run_suites, Severity, Suite, SuiteReport, VerifyConfig};

#[derive(Parser, Debug)]
#[command(name = "wres", version, about = "Residue densities of perturbed Dirac operators in dimension four")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Emit JSON instead of text.
    #[arg(long, env = "WRES_JSON", global = true)]
    json: bool,
    /// Treat every disagreement with a stated value as a failure.
    #[arg(long, env = "WRES_STRICT_PAPER", global = true)]
    strict_paper: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Op {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

impl From<Op> for OperatorKind {
    fn from(o: Op) -> Self {
        match o {
            Op::A => OperatorKind::A,
            Op::B => OperatorKind::B,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Interior residue density of the inverse square.
    Interior {
        #[arg(long, env = "WRES_OPERATOR", value_enum)]
        operator: Op,
        #[command(flatten)]
        common: Common,
    },
    /// Boundary densities of the five cases and their sum.
    Boundary {
        #[arg(long, env = "WRES_OPERATOR", value_enum)]
        operator: Op,
        /// I, II, III, IV, V or all.
        #[arg(long = "case", env = "WRES_CASE", default_value = "all")]
        case_filter: String,
        #[command(flatten)]
        common: Common,
    },
    /// Print one order of the square (2, 1, 0) or of its parametrix (-2, -3, -4).
    DumpSymbol {
        #[arg(long, env = "WRES_OPERATOR", value_enum)]
        operator: Op,
        #[arg(long, env = "WRES_ORDER", allow_hyphen_values = true)]
        order: i32,
        #[command(flatten)]
        common: Common,
    },
    /// Run verification suites.
    Verify {
        /// clifford, moments, halfplane, parametrix, theorems or all.
        #[arg(long, env = "WRES_SUITE", default_value = "all")]
        suite: String,
        #[arg(long, env = "WRES_MC_SAMPLES", default_value_t = 1_000_000)]
        mc_samples: usize,
        #[arg(long, env = "WRES_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
}

macro_rules! emit {
    ($out:expr, $($arg:tt)*) => {{
        let _ = writeln!($out, $($arg)*);
    }};
}

enum Failure {
    Usage(String),
    Engine(String),
    Verification,
}

impl From<wres_core::Error> for Failure {
    fn from(e: wres_core::Error) -> Self {
        Failure::Engine(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut out = String::new();
    let result = run(&mut out, cli.command);
    // a closed pipe downstream is not an error worth reporting
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Engine(m)) => {
            eprintln!("engine error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Verification) => ExitCode::from(2),
    }
}

fn print_json(out: &mut String, v: &serde_json::Value) {
    emit!(out, "{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn run(out: &mut String, cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Interior { operator, common } => interior(out, operator.into(), &common),
        Command::Boundary { operator, case_filter, common } => boundary(out, operator.into(), &case_filter, &common),
        Command::DumpSymbol { operator, order, common } => dump_symbol(out, operator.into(), order, &common),
        Command::Verify { suite, mc_samples, seed, common } => verify(out, &suite, mc_samples, seed, &common),
    }
}

fn interior(out: &mut String, kind: OperatorKind, common: &Common) -> Result<(), Failure> {
    let r = interior_report(kind)?;
    if common.json {
        print_json(out, &json!(r));
    } else {
        emit!(out, "operator {kind}");
        emit!(out, "density            {}", r.density);
        emit!(out, "tabulated list     {}", r.printed_list_density);
        emit!(out, "stated             {}", r.paper_density);
        emit!(out, "matches stated     {}", r.matches_paper);
        emit!(out, "gravity residual   {}", r.gravity_residual);
        for t in &r.per_term {
            emit!(out, "  {:<4} {}", t.id, t.value);
        }
        for d in &r.discrepancies {
            emit!(out, "discrepancy {}: engine {} | stated {} ({})", d.term_id, d.engine_value, d.paper_value, d.location_quote);
        }
    }
    if common.strict_paper && !r.discrepancies.is_empty() {
        return Err(Failure::Verification);
    }
    Ok(())
}

fn boundary(out: &mut String, kind: OperatorKind, filter: &str, common: &Common) -> Result<(), Failure> {
    let report = if filter.eq_ignore_ascii_case("all") {
        phi_total(kind)?
    } else {
        let id: CaseId = filter.parse().map_err(|_| Failure::Usage(format!("unknown case `{filter}`")))?;
        let cases = phi_cases(kind, &[id])?;
        let total = cases.iter().try_fold(DensityExpr::zero(Measure::DxPrime), |acc, c| acc.plus(&c.density))?;
        PhiReport { operator: kind, vanishes: total.is_zero(), cases, total }
    };
    if common.json {
        print_json(out, &json!(report));
    } else {
        emit!(out, "operator {kind}");
        for c in &report.cases {
            let tag = if c.matches { "" } else { "  [differs from stated]" };
            emit!(out, "Phi_{:<4} {}{tag}", c.id.to_string(), c.density);
        }
        emit!(out, "total    {}", report.total);
    }
    let mismatch = report.cases.iter().any(|c| !c.matches);
    if common.strict_paper && mismatch {
        return Err(Failure::Verification);
    }
    Ok(())
}

fn dump_symbol(out: &mut String, kind: OperatorKind, order: i32, common: &Common) -> Result<(), Failure> {
    let ctx = GeoContext::interior(4)?;
    let sq = build_square_symbol(kind, &ctx)?;
    let sym = match order {
        0..=2 => sq.get(order),
        -4..=-2 => parametrix(&sq, 3, &ctx)?.get(order),
        _ => return Err(Failure::Usage(format!("order {order} is not available; use 2, 1, 0, -2, -3 or -4"))),
    };
    let source = if order >= 0 { "square" } else { "parametrix" };
    if common.json {
        print_json(out, &json!({ "operator": kind, "order": order, "source": source, "symbol": sym.to_string() }));
    } else {
        emit!(out, "{sym}");
    }
    Ok(())
}

fn verify(out: &mut String, suite: &str, mc_samples: usize, seed: u64, common: &Common) -> Result<(), Failure> {
    let suites =
        if suite == "all" { Suite::ALL.to_vec() } else { vec![suite.parse::<Suite>().map_err(|e| Failure::Usage(e.to_string()))?] };
    if mc_samples < 10_000 {
        return Err(Failure::Usage("--mc-samples must be at least 10000".into()));
    }
    let cfg = VerifyConfig { mc_samples, seed };
    let reports = run_suites(&suites, &cfg)?;
    let passed = reports.iter().all(|r| r.passed(common.strict_paper));
    if common.json {
        print_json(
            out,
            &json!({
                "passed": passed,
                "strict_paper": common.strict_paper,
                "mc_samples": mc_samples,
                "seed": seed,
                "suites": reports,
            }),
        );
    } else {
        for r in &reports {
            print_suite(out, r);
        }
        let total: usize = reports.iter().map(|r| r.checks.len()).sum();
        let failed: usize = reports.iter().flat_map(|r| &r.checks).filter(|c| !c.passed).count();
        emit!(out, "{} checks, {} not matching; overall {}", total, failed, if passed { "PASS" } else { "FAIL" });
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn print_suite(out: &mut String, r: &SuiteReport) {
    let note = if r.reduced_precision { " (reduced-precision Monte Carlo)" } else { "" };
    emit!(out, "== {}{note}", r.suite);
    for c in &r.checks {
        let status = match (c.passed, c.severity) {
            (true, _) => "PASS",
            (false, Severity::Required) => "FAIL",
            (false, Severity::PaperLiteral) => "DIFF",
        };
        if c.detail.is_empty() {
            emit!(out, "{status} {}", c.name);
        } else {
            emit!(out, "{status} {}: {}", c.name, c.detail);
        }
    }
    for d in &r.discrepancies {
        emit!(out, "discrepancy {}: engine {} | stated {} ({})", d.term_id, d.engine_value, d.paper_value, d.location_quote);
    }
}
