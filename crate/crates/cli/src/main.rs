mod spec;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mdmb_core::geometry::is_generic;
use mdmb_core::mechanism::{check_ic, construct_optimal_mdmb, sender_payoff};
use mdmb_core::model::Belief;
use mdmb_core::oracle::audit_report;
use mdmb_core::rational::{parse_rational, to_decimal_string, to_fraction_string};
use mdmb_core::solvers::{binary_priors, protocol_report, sweep, value_mdmb, verify_saddle, SaddleMode};
use mdmb_core::{Error, Execution, ProtocolReport, Rational};
use num_traits::Signed;

use spec::{GameSpecFile, Instance, SpecError};

const DECIMAL_PLACES: usize = 12;

#[derive(Parser)]
#[command(name = "mdmb", version, about = "Exact Sender values for persuasion games with transparent motives")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print CT, MD, budget-constrained, MDMB and BP values.
    Values {
        spec: PathBuf,
        /// Burning budget; repeat or separate with commas.
        #[arg(long = "budget", value_delimiter = ',', allow_hyphen_values = true)]
        budgets: Vec<String>,
    },
    /// Build a near-optimal money-burning mechanism and audit it.
    Mechanism {
        spec: PathBuf,
        #[arg(long, default_value = "1/10")]
        delta: String,
    },
    /// Protocol values across priors, as CSV.
    Sweep {
        spec: PathBuf,
        /// Number of grid steps for binary games (steps + 1 rows).
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long = "budget", value_delimiter = ',', allow_hyphen_values = true)]
        budgets: Vec<String>,
        /// Write to this file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exact fractions instead of 12-place decimals.
        #[arg(long)]
        fractions: bool,
    },
    /// Check the solvers against independent oracles and any expected values.
    Verify {
        spec: PathBuf,
        #[arg(long = "budget", value_delimiter = ',', allow_hyphen_values = true)]
        budgets: Vec<String>,
    },
}

#[derive(Debug)]
enum Failure {
    Parse(String),
    Invalid(String),
    Unsupported(String),
    Violation(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Internal(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Invalid(_) => 3,
            Failure::Unsupported(_) => 4,
            Failure::Violation(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Invalid(m) | Failure::Unsupported(m) | Failure::Violation(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        match e {
            SpecError::Parse(m) => Failure::Parse(m),
            SpecError::Invalid(m) => Failure::Invalid(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let m = e.to_string();
        match e {
            Error::DimensionMismatch(_)
            | Error::PriorNotOnSimplex(_)
            | Error::EmptyTypeOrActionSet
            | Error::AllTypesNull
            | Error::NotOnSimplex(_)
            | Error::LambdaNotNormalized(_)
            | Error::Uncovered(_)
            | Error::TooManyActions(_)
            | Error::InvalidDelta(_)
            | Error::InvalidQuery(_) => Failure::Invalid(m),
            Error::NotBinary(_) | Error::TooManyTypes(_) => Failure::Unsupported(m),
            Error::NotIncentiveCompatible(_) | Error::NotAnEquilibrium(_) | Error::OrderingViolated(_) => {
                Failure::Violation(m)
            }
            _ => Failure::Internal(m),
        }
    }
}

type Outcome = Result<String, Failure>;

fn load(path: &Path) -> Result<(GameSpecFile, Instance), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    let file = GameSpecFile::parse(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    let instance = file.instance()?;
    Ok((file, instance))
}

fn parse_budgets(raw: &[String]) -> Result<Vec<Rational>, Failure> {
    raw.iter()
        .map(|b| {
            let c = parse_rational(b).map_err(|e| Failure::Invalid(format!("budget: {e}")))?;
            if c.is_negative() {
                return Err(Failure::Invalid(format!("budget {b} is negative")));
            }
            Ok(c)
        })
        .collect()
}

fn exact_and_decimal(x: &Rational) -> String {
    format!("{} ({})", to_fraction_string(x), to_decimal_string(x, DECIMAL_PLACES))
}

fn report_lines(report: &ProtocolReport) -> Vec<(String, Rational)> {
    let mut lines = vec![("CT".to_string(), report.ct.clone()), ("MD".to_string(), report.md.clone())];
    for (c, v) in &report.budgets {
        lines.push((format!("MDMB[C={}]", to_fraction_string(c)), v.clone()));
    }
    lines.push(("MDMB".to_string(), report.mdmb.clone()));
    lines.push(("BP".to_string(), report.bp.clone()));
    lines
}

fn cmd_values(path: &Path, budgets: &[String]) -> Outcome {
    let (_, instance) = load(path)?;
    let budgets = parse_budgets(budgets)?;
    let s = instance.structure()?;
    let report = protocol_report(&s, &budgets)?;
    let mut out = String::new();
    for (label, v) in report_lines(&report) {
        let _ = writeln!(out, "{label} {}", exact_and_decimal(&v));
    }
    let (_, cert) = value_mdmb(&s)?;
    let lam: Vec<String> = cert.lambda_star.weights().iter().map(to_fraction_string).collect();
    let _ = writeln!(out, "worst-case prior ({})", lam.join(", "));
    for atom in &cert.p_star {
        let _ = writeln!(
            out,
            "posterior {} weight {} value {}",
            atom.belief,
            to_fraction_string(&atom.weight),
            to_fraction_string(&atom.value)
        );
    }
    Ok(out)
}

fn cmd_mechanism(path: &Path, delta: &str) -> Outcome {
    let delta = parse_rational(delta).map_err(|e| Failure::Invalid(format!("delta: {e}")))?;
    let (_, instance) = load(path)?;
    let s = instance.structure()?.restrict_to_support()?;
    let (_, cert) = value_mdmb(&s)?;
    let mech = construct_optimal_mdmb(&s, &cert.posterior(), &delta)?;
    let r = to_fraction_string;
    let row = |xs: &[Rational]| xs.iter().map(r).collect::<Vec<_>>().join(" ");
    let mut out = format!("delta {}\n", r(&delta));
    for (i, atom) in mech.atoms.iter().enumerate() {
        let _ = writeln!(out, "atom {i} belief {atom} value {} burn {}", r(&mech.values[i]), r(&mech.x[i]));
    }
    for (t, p) in mech.pi.iter().enumerate() {
        let _ = writeln!(out, "pi[{t}] {}", row(p));
    }
    let _ = writeln!(out, "burns {}", row(&mech.x));
    let _ = writeln!(out, "net payoffs {}", row(&mech.net_payoffs()));
    let residuals = check_ic(&s, &mech)?;
    for (t, res) in residuals.iter().enumerate() {
        let _ = writeln!(out, "ic residual[{t}] {}", row(res));
    }
    if residuals.iter().flatten().any(|x| !num_traits::Zero::is_zero(x)) {
        print!("{out}");
        return Err(Failure::Violation("incentive constraints are not tight".into()));
    }
    let pay = sender_payoff(&s, &mech)?;
    let _ = writeln!(out, "sender payoff {}", exact_and_decimal(&pay));
    Ok(out)
}

fn render_prior(prior: &Belief, fractions: bool) -> String {
    let cell = |x: &Rational| if fractions { to_fraction_string(x) } else { to_decimal_string(x, DECIMAL_PLACES) };
    if prior.dim() == 2 {
        cell(&prior.weights()[0])
    } else {
        prior.weights().iter().map(cell).collect::<Vec<_>>().join(";")
    }
}

fn cmd_sweep(path: &Path, steps: usize, budgets: &[String], out: Option<&Path>, fractions: bool) -> Outcome {
    let (file, instance) = load(path)?;
    let budgets = parse_budgets(budgets)?;
    let s = instance.structure()?;
    let priors = match file.sweep_priors()? {
        Some(list) => {
            if let Some(bad) = list.iter().find(|p| p.dim() != s.dim()) {
                return Err(Failure::Invalid(format!("sweep prior {bad} has the wrong dimension")));
            }
            list
        }
        None if s.dim() == 2 => {
            if steps == 0 {
                return Err(Failure::Invalid("steps must be at least 1".into()));
            }
            binary_priors(steps)
        }
        None => {
            return Err(Failure::Unsupported(format!(
                "sweeping a {}-type game needs an explicit sweep_priors list",
                s.dim()
            )))
        }
    };
    let rows = sweep(&s, &priors, &budgets, Execution::default())?;
    let cell = |x: &Rational| if fractions { to_fraction_string(x) } else { to_decimal_string(x, DECIMAL_PLACES) };
    let mut csv = String::from("prior,ct,md");
    for c in &budgets {
        let _ = write!(csv, ",mdmb_C{}", to_fraction_string(c));
    }
    csv.push_str(",mdmb,bp\n");
    for row in &rows {
        let r = &row.report;
        let mut cells = vec![render_prior(&row.prior, fractions), cell(&r.ct), cell(&r.md)];
        cells.extend(r.budgets.iter().map(|(_, v)| cell(v)));
        cells.push(cell(&r.mdmb));
        cells.push(cell(&r.bp));
        csv.push_str(&cells.join(","));
        csv.push('\n');
    }
    match out {
        Some(p) => {
            std::fs::write(p, &csv).map_err(|e| Failure::Internal(format!("{}: {e}", p.display())))?;
            Ok(format!("wrote {} rows to {}\n", rows.len(), p.display()))
        }
        None => Ok(csv),
    }
}

fn relation(report: &ProtocolReport) -> String {
    let chain = [("CT", &report.ct), ("MD", &report.md), ("MDMB", &report.mdmb), ("BP", &report.bp)];
    let mut out = chain[0].0.to_string();
    for w in chain.windows(2) {
        let sym = if w[0].1 == w[1].1 { " = " } else { " < " };
        out.push_str(sym);
        out.push_str(w[1].0);
    }
    out
}

fn cmd_verify(path: &Path, budgets: &[String]) -> Outcome {
    let (file, instance) = load(path)?;
    let mut budgets = parse_budgets(budgets)?;
    let expected = file.expected.clone().unwrap_or_default();
    let mut expected_budgets = Vec::new();
    for (key, v) in &expected.budgets {
        let c = parse_budgets(std::slice::from_ref(key))?.remove(0);
        if !budgets.contains(&c) {
            budgets.push(c.clone());
        }
        expected_budgets.push((c, v.0.clone()));
    }
    let s = instance.structure()?;
    let mut violations = Vec::new();
    let mut out = String::new();
    if let Some(name) = &file.name {
        let _ = writeln!(out, "game: {name}");
    }

    let report = match protocol_report(&s, &budgets) {
        Ok(r) => r,
        Err(e @ Error::OrderingViolated(_)) => return Err(Failure::Violation(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    out.push_str("oracle audit\n");
    match audit_report(&s, &budgets) {
        Ok(rows) => {
            for row in rows {
                let _ = writeln!(out, "  {row}");
                if !row.satisfied {
                    violations.push(format!("oracle bound on {}", row.protocol));
                }
            }
        }
        Err(Error::TooManyTypes(n)) => {
            let _ = writeln!(out, "  skipped: oracles cover at most 3 types, this game has {n}");
        }
        Err(e) => return Err(e.into()),
    }

    let (_, cert) = value_mdmb(&s)?;
    let verdict = verify_saddle(&s.restrict_to_support()?, &cert, &SaddleMode::Simplex)?;
    match &verdict.violation {
        None => {
            let _ = writeln!(out, "saddle certificate: verified at value {}", to_fraction_string(&cert.value));
        }
        Some(v) => {
            let _ = writeln!(out, "saddle certificate: REJECTED ({v})");
            violations.push("saddle certificate".into());
        }
    }

    match instance.game() {
        Some(game) => match is_generic(game) {
            Ok(g) if g.generic => out.push_str("genericity: generic\n"),
            Ok(g) => {
                let (support, action) = g.failure.unwrap_or_default();
                let _ = writeln!(
                    out,
                    "genericity: not generic (action {} never uniquely optimal on support {support:?})",
                    game.actions().get(action).map_or("?", String::as_str)
                );
            }
            Err(e) => {
                let _ = writeln!(out, "genericity: not checked ({e})");
            }
        },
        None => out.push_str("genericity: not applicable to abstract value structures\n"),
    }
    let _ = writeln!(out, "relation: {}", relation(&report));

    let mut checks: Vec<(String, &Rational, Rational)> = Vec::new();
    for (label, want) in [("CT", &expected.ct), ("MD", &expected.md), ("MDMB", &expected.mdmb), ("BP", &expected.bp)] {
        if let Some(want) = want {
            let got = match label {
                "CT" => &report.ct,
                "MD" => &report.md,
                "MDMB" => &report.mdmb,
                _ => &report.bp,
            };
            checks.push((label.to_string(), got, want.0.clone()));
        }
    }
    for (c, want) in expected_budgets {
        let got = report.budgets.iter().find(|(b, _)| *b == c).map(|(_, v)| v).expect("budget was solved");
        checks.push((format!("MDMB[C={}]", to_fraction_string(&c)), got, want));
    }
    for (label, got, want) in checks {
        if *got == want {
            let _ = writeln!(out, "expected {label} {}: ok", to_fraction_string(&want));
        } else {
            let _ = writeln!(
                out,
                "expected {label} {}: MISMATCH, computed {}",
                to_fraction_string(&want),
                to_fraction_string(got)
            );
            violations.push(format!("expected {label}"));
        }
    }

    if violations.is_empty() {
        out.push_str("result: all satisfied\n");
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Violation(format!("violated: {}", violations.join(", "))))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Values { spec, budgets } => cmd_values(spec, budgets),
        Command::Mechanism { spec, delta } => cmd_mechanism(spec, delta),
        Command::Sweep { spec, steps, budgets, out, fractions } => {
            cmd_sweep(spec, *steps, budgets, out.as_deref(), *fractions)
        }
        Command::Verify { spec, budgets } => cmd_verify(spec, budgets),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
