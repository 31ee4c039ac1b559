//! Command dispatch for the `specalg` binary.
//!
//! Exit codes: 0 success (refinement holds, all laws hold, compatible);
//! 1 refinement false, some law fails, or incompatible; 2 usage error;
//! 3 parse error; 4 undefined operation.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::alphabet::Alphabet;
use crate::audit::{self, AuditReport, GenConfig, Mode, Status, Universe};
use crate::error::SpecError;
use crate::fa::{self, FaTheory};
use crate::format::{parse_spec, render_spec, SpecFile, SpecValue};
use crate::ia::{self, Compat, IaTheory};
use crate::mts::{self, ComposeRule, MtsTheory};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_UNDEFINED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "specalg", version, about = "Specification theories and their algebraic laws")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Rule {
    Meet,
    Join,
}

impl From<Rule> for ComposeRule {
    fn from(r: Rule) -> Self {
        match r {
            Rule::Meet => ComposeRule::Meet,
            Rule::Join => ComposeRule::Join,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TheoryArg {
    Fa,
    Nfa,
    Mts,
    Ia,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum QuotientKind {
    Conj,
    Par,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CompatMode {
    Optimistic,
    Pessimistic,
    Component,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Random,
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, clap::Args)]
struct Pair {
    file: PathBuf,
    #[arg(long)]
    left: String,
    #[arg(long)]
    right: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether LEFT refines RIGHT.
    Refine {
        #[command(flatten)]
        pair: Pair,
    },
    /// Conjunction of two specifications.
    Conjoin {
        #[command(flatten)]
        pair: Pair,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Parallel composition (optimistic for interface automata).
    Compose {
        #[command(flatten)]
        pair: Pair,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "meet")]
        mts_rule: Rule,
    },
    /// Disjunction of two specifications.
    Disjoin {
        #[command(flatten)]
        pair: Pair,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Quotient LEFT \ RIGHT: the largest X with RIGHT op X ≤ LEFT.
    Quotient {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_enum)]
        kind: QuotientKind,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compatibility of two interface automata under a pruning mode.
    Compat {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_enum)]
        mode: CompatMode,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check every algebraic law against a theory.
    Audit {
        #[arg(long, value_enum)]
        theory: TheoryArg,
        #[arg(long, value_enum)]
        mts_rule: Option<Rule>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_states: usize,
        #[arg(long, default_value_t = 2)]
        alphabet_size: usize,
        #[arg(long, value_enum, default_value = "random")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Print every specification within small bounds.
    Enumerate {
        #[arg(long, value_enum)]
        theory: TheoryArg,
        #[arg(long, default_value_t = 1)]
        max_states: usize,
        #[arg(long, default_value_t = 1)]
        alphabet_size: usize,
    },
    /// Show that no interface automaton in a bounded family is universal.
    NoUniversal {
        #[arg(long, default_value_t = 2)]
        max_states: usize,
        #[arg(long, default_value_t = 2)]
        actions: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
}

/// Result of one command: exit code plus the text for each stream.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Outcome { code, stdout, stderr: String::new() }
    }

    fn fail(code: i32, message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome { code, stdout: String::new(), stderr }
    }
}

fn spec_error(e: SpecError) -> Outcome {
    let code = match e {
        SpecError::EnumerationBound | SpecError::Invalid(_) | SpecError::EmptyAlphabet => EXIT_USAGE,
        _ => EXIT_UNDEFINED,
    };
    Outcome::fail(code, format!("error: {e}"))
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK { Outcome::ok(code, text) } else { Outcome::fail(code, text) };
        }
    };
    match cli.command {
        Command::Refine { pair } => with_pair(&pair, refine),
        Command::Conjoin { pair, output } => with_pair(&pair, |l, r| {
            let v = binary(l, r, |a, b| fa::conjoin(a, b), |a, b| mts::conjoin(a, b), |_, _| {
                Err(SpecError::Unsupported("conjunction"))
            });
            emit(v, &format!("{}_and_{}", pair.left, pair.right), output.as_ref())
        }),
        Command::Compose { pair, output, mts_rule } => with_pair(&pair, |l, r| {
            let rule = ComposeRule::from(mts_rule);
            let v = binary(l, r, |a, b| fa::compose(a, b), |a, b| mts::compose(a, b, rule), |a, b| {
                ia::optimistic(a, b)?.into_result()
            });
            emit(v, &format!("{}_par_{}", pair.left, pair.right), output.as_ref())
        }),
        Command::Disjoin { pair, output } => with_pair(&pair, |l, r| {
            let v = binary(l, r, |a, b| fa::disjoin(a, b), |a, b| mts::disjoin(a, b), |_, _| {
                Err(SpecError::Unsupported("disjunction"))
            });
            emit(v, &format!("{}_or_{}", pair.left, pair.right), output.as_ref())
        }),
        Command::Quotient { pair, kind, output } => with_pair(&pair, |l, r| {
            let v = binary(
                l,
                r,
                |b, a| match kind {
                    QuotientKind::Conj => fa::conj_quotient(b, a),
                    QuotientKind::Par => fa::par_quotient(b, a),
                },
                |_, _| Err(SpecError::Unsupported("quotient")),
                |_, _| Err(SpecError::Unsupported("quotient")),
            );
            emit(v, &format!("{}_by_{}", pair.left, pair.right), output.as_ref())
        }),
        Command::Compat { pair, mode, output } => with_pair(&pair, |l, r| compat(l, r, mode, &pair, output.as_ref())),
        Command::Audit { theory, mts_rule, samples, seed, max_states, alphabet_size, mode, format } => {
            let mut config = GenConfig::new(match theory {
                TheoryArg::Fa | TheoryArg::Nfa => "fa",
                TheoryArg::Mts => "mts",
                TheoryArg::Ia => "ia",
            })
            .samples(samples)
            .seed(seed)
            .max_states(max_states)
            .alphabet_size(alphabet_size);
            if mode == ModeArg::Exhaustive {
                config.mode = Mode::Exhaustive;
            }
            if theory == TheoryArg::Mts {
                config = config.with_rule(mts_rule.unwrap_or(Rule::Meet).into());
            }
            run_audit(theory, mts_rule, &config, format)
        }
        Command::Enumerate { theory, max_states, alphabet_size } => enumerate(theory, max_states, alphabet_size),
        Command::NoUniversal { max_states, actions, format } => no_universal(max_states, actions, format),
    }
}

fn load(path: &PathBuf) -> Result<SpecFile, Outcome> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Outcome::fail(EXIT_USAGE, format!("error: cannot read {}: {e}", path.display())))?;
    parse_spec(&text).map_err(|e| Outcome::fail(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn with_pair(pair: &Pair, f: impl FnOnce(&SpecValue, &SpecValue) -> Outcome) -> Outcome {
    let file = match load(&pair.file) {
        Ok(file) => file,
        Err(outcome) => return outcome,
    };
    let lookup = |name: &str| {
        file.get(name)
            .ok_or_else(|| Outcome::fail(EXIT_USAGE, format!("error: no specification named `{name}`")))
    };
    match (lookup(&pair.left), lookup(&pair.right)) {
        (Ok(l), Ok(r)) => f(l, r),
        (Err(o), _) | (_, Err(o)) => o,
    }
}

fn binary(
    left: &SpecValue,
    right: &SpecValue,
    on_fa: impl FnOnce(&fa::Nfa, &fa::Nfa) -> crate::Result<fa::Nfa>,
    on_mts: impl FnOnce(&mts::Mts, &mts::Mts) -> crate::Result<mts::Mts>,
    on_ia: impl FnOnce(&ia::InterfaceAutomaton, &ia::InterfaceAutomaton) -> crate::Result<ia::InterfaceAutomaton>,
) -> crate::Result<SpecValue> {
    match (left, right) {
        (SpecValue::Nfa(a), SpecValue::Nfa(b)) => on_fa(a, b).map(SpecValue::from),
        (SpecValue::Mts(a), SpecValue::Mts(b)) => on_mts(a, b).map(SpecValue::from),
        (SpecValue::Ia(a), SpecValue::Ia(b)) => on_ia(a, b).map(SpecValue::from),
        _ => Err(SpecError::Unsupported("mixing theories")),
    }
}

fn emit(value: crate::Result<SpecValue>, name: &str, output: Option<&PathBuf>) -> Outcome {
    let value = match value {
        Ok(v) => v,
        Err(SpecError::Incompatible) => return Outcome::fail(EXIT_NEGATIVE, "incompatible"),
        Err(e) => return spec_error(e),
    };
    let text = render_spec(name, &value);
    match output {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Outcome::ok(EXIT_OK, String::new()),
            Err(e) => Outcome::fail(EXIT_USAGE, format!("error: cannot write {}: {e}", path.display())),
        },
        None => Outcome::ok(EXIT_OK, text),
    }
}

fn refine(left: &SpecValue, right: &SpecValue) -> Outcome {
    let holds = match (left, right) {
        (SpecValue::Nfa(a), SpecValue::Nfa(b)) => fa::refines(a, b),
        (SpecValue::Mts(a), SpecValue::Mts(b)) => mts::refines(a, b),
        (SpecValue::Ia(a), SpecValue::Ia(b)) => ia::refines(a, b),
        _ => Err(SpecError::Unsupported("mixing theories")),
    };
    match holds {
        Ok(true) => Outcome::ok(EXIT_OK, "refines\n".into()),
        Ok(false) => Outcome::ok(EXIT_NEGATIVE, "does not refine\n".into()),
        Err(e) => spec_error(e),
    }
}

fn compat(left: &SpecValue, right: &SpecValue, mode: CompatMode, pair: &Pair, output: Option<&PathBuf>) -> Outcome {
    let (SpecValue::Ia(a), SpecValue::Ia(b)) = (left, right) else {
        return Outcome::fail(EXIT_UNDEFINED, "error: compat needs two interface automata");
    };
    let result = match mode {
        CompatMode::Optimistic => ia::optimistic(a, b),
        CompatMode::Pessimistic => ia::pessimistic(a, b),
        CompatMode::Component => ia::product(a, b).map(|p| ia::comp_prune(&p)),
    };
    match result {
        Ok(Compat::Compatible(pruned)) => {
            emit(Ok(SpecValue::Ia(pruned)), &format!("{}_par_{}", pair.left, pair.right), output)
        }
        Ok(Compat::Incompatible) => Outcome::ok(EXIT_NEGATIVE, "incompatible\n".into()),
        Err(e) => spec_error(e),
    }
}

fn run_audit(theory: TheoryArg, rule: Option<Rule>, config: &GenConfig, format: OutputFormat) -> Outcome {
    let alphabet = match Alphabet::letters(config.alphabet_size) {
        Ok(a) => a,
        Err(e) => return spec_error(e),
    };
    let report = match theory {
        TheoryArg::Fa | TheoryArg::Nfa => audit::audit(&FaTheory::new(alphabet), config),
        TheoryArg::Mts => {
            let rule = rule.map_or(ComposeRule::Meet, ComposeRule::from);
            audit::audit(&MtsTheory::new(alphabet, rule), config)
        }
        TheoryArg::Ia => audit::audit(&IaTheory::new(config.alphabet_size), config),
    };
    let report = match report {
        Ok(r) => r,
        Err(e) => return spec_error(e),
    };
    let code = if report.any_fails() { EXIT_NEGATIVE } else { EXIT_OK };
    let text = match format {
        OutputFormat::Json => report_json(&report),
        OutputFormat::Text => report_text(&report),
    };
    Outcome::ok(code, text)
}

pub fn report_json(report: &AuditReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn report_text(report: &AuditReport) -> String {
    let c = &report.config;
    let mut out = String::new();
    let theory = match &c.mts_rule {
        Some(rule) => format!("{}/{rule}", c.theory),
        None => c.theory.clone(),
    };
    let _ = writeln!(
        out,
        "audit {theory}: mode {}, samples {}, seed {}, max-states {}, alphabet-size {}",
        if c.mode == Mode::Exhaustive { "exhaustive" } else { "random" }, c.sample_count, c.seed, c.max_states, c.alphabet_size
    );
    let _ = writeln!(out, "{:<14} {:<13} {:>9} {:>13} {:>8}", "LAW", "STATUS", "SAMPLES", "INAPPLICABLE", "PREMISE");
    for v in &report.verdicts {
        let premise = v.premise_hits.map_or("-".to_string(), |n| n.to_string());
        let _ = writeln!(
            out,
            "{:<14} {:<13} {:>9} {:>13} {:>8}",
            v.law.as_str(),
            v.status.to_string(),
            v.samples_checked,
            v.inapplicable_count,
            premise
        );
    }
    let x = &report.thm2_cross_check;
    let _ = writeln!(out, "\nunit-law cross-check: {}", x.observed);
    let _ = writeln!(out, "  ({})", x.note);
    for v in report.verdicts.iter().filter(|v| v.status == Status::Fails) {
        let _ = writeln!(out, "\ncounterexample for {}:", v.law);
        for block in v.witness.iter().flatten() {
            for line in block.lines() {
                let _ = writeln!(out, "  {line}");
            }
        }
    }
    let _ = writeln!(out, "\nduration: {} ms", report.duration_ms);
    out
}

fn enumerate(theory: TheoryArg, max_states: usize, alphabet_size: usize) -> Outcome {
    let config = GenConfig::new("enumerate").max_states(max_states).alphabet_size(alphabet_size);
    let alphabet = match Alphabet::letters(alphabet_size) {
        Ok(a) => a,
        Err(e) => return spec_error(e),
    };
    let values = match theory {
        TheoryArg::Fa | TheoryArg::Nfa => values_of(&FaTheory::new(alphabet), &config),
        TheoryArg::Mts => values_of(&MtsTheory::new(alphabet, ComposeRule::Meet), &config),
        TheoryArg::Ia => values_of(&IaTheory::new(alphabet_size), &config),
    };
    let values = match values {
        Ok(v) => v,
        Err(e) => return spec_error(e),
    };
    let mut out = format!("# {} specifications\n", values.len());
    for (i, v) in values.iter().enumerate() {
        out += &render_spec(&format!("e{i}"), v);
    }
    Outcome::ok(EXIT_OK, out)
}

fn values_of<U: Universe>(theory: &U, config: &GenConfig) -> crate::Result<Vec<SpecValue>> {
    Ok(audit::enumerate_all(theory, config)?.iter().map(|s| theory.to_value(s)).collect())
}

fn no_universal(max_states: usize, actions: usize, format: OutputFormat) -> Outcome {
    if max_states > 2 || actions > 2 {
        return spec_error(SpecError::EnumerationBound);
    }
    let pool: Vec<String> = (0..actions).map(crate::alphabet::letter).collect();
    let table = ia::no_universal_witness(&pool, max_states);
    let defeated = table.rows.len();
    let total = table.family.len();
    let code = if table.is_exhaustive() { EXIT_OK } else { EXIT_NEGATIVE };
    let out = match format {
        OutputFormat::Json => {
            let rows: Vec<_> = table
                .rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "candidate": r.candidate,
                        "defeater": r.defeater,
                        "reason": r.reason,
                        "unitDefeater": r.unit_defeater,
                    })
                })
                .collect();
            let doc = serde_json::json!({
                "familySize": total,
                "defeated": defeated,
                "exhaustive": table.is_exhaustive(),
                "rows": rows,
            });
            serde_json::to_string_pretty(&doc).expect("table serializes") + "\n"
        }
        OutputFormat::Text => {
            let mut out = format!("{:>9} {:>9} {:<19} {:>6}\n", "CANDIDATE", "DEFEATER", "REASON", "UNIT");
            for r in &table.rows {
                let reason = match r.reason {
                    ia::Defeat::RefinementFails => "refinement-fails",
                    ia::Defeat::SignatureMismatch => "signature-mismatch",
                };
                let unit = r.unit_defeater.map_or("-".to_string(), |u| u.to_string());
                let _ = writeln!(out, "{:>9} {:>9} {:<19} {:>6}", r.candidate, r.defeater, reason, unit);
            }
            let _ = writeln!(out, "{defeated}/{total} candidates defeated");
            out
        }
    };
    Outcome::ok(code, out)
}
