//! Law auditing: draw argument tuples, evaluate every law, shrink the first
//! counterexample and report an axiom-by-theory verdict table.

mod universe;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use universe::Universe;

use crate::algebra::{law_predicate, LawId, Verdict};
use crate::error::{Result, SpecError};
use crate::format::{render_spec, SpecValue};
use crate::mts::ComposeRule;

/// Implication laws need this many samples with a true premise before a
/// `holds` verdict is reported.
pub const MIN_PREMISE_HITS: usize = 50;

/// Upper bound on the number of tuples an exhaustive check may visit.
pub const MAX_EXHAUSTIVE_TUPLES: usize = 20_000_000;

const CHUNK: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Random,
    Exhaustive,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "random" => Ok(Mode::Random),
            "exhaustive" => Ok(Mode::Exhaustive),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GenConfig {
    pub theory: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mts_rule: Option<String>,
    pub max_states: usize,
    pub alphabet_size: usize,
    pub sample_count: usize,
    pub seed: u64,
    pub mode: Mode,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            theory: "fa".into(),
            mts_rule: None,
            max_states: 3,
            alphabet_size: 2,
            sample_count: 1000,
            seed: 0,
            mode: Mode::Random,
        }
    }
}

impl GenConfig {
    pub fn new(theory: impl Into<String>) -> Self {
        GenConfig { theory: theory.into(), ..GenConfig::default() }
    }

    pub fn with_rule(mut self, rule: ComposeRule) -> Self {
        self.mts_rule = Some(rule.to_string());
        self
    }

    pub fn samples(mut self, n: usize) -> Self {
        self.sample_count = n;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn max_states(mut self, n: usize) -> Self {
        self.max_states = n;
        self
    }

    pub fn alphabet_size(mut self, n: usize) -> Self {
        self.alphabet_size = n;
        self
    }

    pub fn exhaustive(mut self) -> Self {
        self.mode = Mode::Exhaustive;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.alphabet_size == 0 {
            return Err(SpecError::Invalid("alphabet size must be at least 1".into()));
        }
        match self.mode {
            Mode::Random if self.max_states == 0 => {
                Err(SpecError::Invalid("max states must be at least 1".into()))
            }
            Mode::Exhaustive if self.max_states > 2 || self.alphabet_size > 2 => Err(SpecError::EnumerationBound),
            _ => Ok(()),
        }
    }
}

/// Deterministic random specification for `(config.seed, index)`.
pub fn gen_random<U: Universe>(theory: &U, config: &GenConfig, index: u64) -> U::Spec {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index);
    theory.generate(&mut rng, config.max_states.max(1))
}

/// All specifications within the (small) exhaustive bounds.
pub fn enumerate_all<U: Universe>(theory: &U, config: &GenConfig) -> Result<Vec<U::Spec>> {
    if config.max_states > 2 || config.alphabet_size > 2 {
        return Err(SpecError::EnumerationBound);
    }
    Ok(theory.enumerate(config.max_states))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Fails,
    Inapplicable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Inapplicable => "inapplicable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LawVerdict {
    pub law: LawId,
    pub status: Status,
    pub samples_checked: usize,
    pub inapplicable_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub premise_hits: Option<usize>,
    /// Failing instantiation, one rendered specification block per argument
    /// (named `A`, `B`, `C`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

/// Names of witness blocks by argument position.
pub const WITNESS_NAMES: [&str; 3] = ["A", "B", "C"];

fn tuple_count(universe: usize, arity: usize) -> Option<usize> {
    universe.checked_pow(arity as u32)
}

/// Evaluates `law` over sampled or enumerated tuples.
pub fn check_law<U: Universe>(theory: &U, law: LawId, config: &GenConfig) -> Result<LawVerdict> {
    config.validate()?;
    let arity = law.arity();
    let results: Vec<(usize, Vec<U::Spec>, Verdict)>;
    match config.mode {
        Mode::Random => {
            let tuple = |i: usize| -> Vec<U::Spec> {
                (0..arity).map(|j| gen_random(theory, config, (i * arity + j) as u64)).collect()
            };
            results = scan(config.sample_count, tuple, |args| law_predicate(theory, law, args))?;
        }
        Mode::Exhaustive => {
            let all = enumerate_all(theory, config)?;
            let total = tuple_count(all.len(), arity)
                .filter(|n| *n <= MAX_EXHAUSTIVE_TUPLES)
                .ok_or(SpecError::EnumerationBound)?;
            let tuple = |i: usize| -> Vec<U::Spec> {
                // lexicographic: the first argument varies slowest
                let mut code = i;
                let mut idx = vec![0; arity];
                for slot in idx.iter_mut().rev() {
                    *slot = code % all.len();
                    code /= all.len();
                }
                idx.into_iter().map(|k| all[k].clone()).collect()
            };
            results = scan(total, tuple, |args| law_predicate(theory, law, args))?;
        }
    }

    let samples_checked = results.len();
    let count = |v: Verdict| results.iter().filter(|r| r.2 == v).count();
    let inapplicable_count = count(Verdict::Inapplicable);
    let decided = count(Verdict::True) + count(Verdict::False);
    let premise_hits = law.is_implication().then_some(decided);

    let failure = results.into_iter().find(|r| r.2.is_false());
    let (status, witness) = match failure {
        Some((_, args, _)) => {
            let shrunk = shrink(theory, law, args)?;
            let rendered = shrunk
                .iter()
                .zip(WITNESS_NAMES)
                .map(|(spec, name)| render_spec(name, &theory.to_value(spec)))
                .collect();
            (Status::Fails, Some(rendered))
        }
        None if decided == 0 => (Status::Inapplicable, None),
        None if law.is_implication() && decided < MIN_PREMISE_HITS => (Status::Inapplicable, None),
        None => (Status::Holds, None),
    };
    Ok(LawVerdict { law, status, samples_checked, inapplicable_count, premise_hits, witness })
}

/// Evaluates tuples `0..total` in parallel chunks, stopping after the first
/// chunk containing a failure. Results up to and including the first
/// failure are returned in index order, so the reported counterexample is
/// the one with the smallest index regardless of scheduling.
fn scan<S: Send>(
    total: usize,
    tuple: impl Fn(usize) -> S + Sync,
    eval: impl Fn(&S) -> Result<Verdict> + Sync,
) -> Result<Vec<(usize, S, Verdict)>> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < total {
        let end = (start + CHUNK).min(total);
        let chunk: Vec<(usize, S, Verdict)> = (start..end)
            .into_par_iter()
            .map(|i| {
                let args = tuple(i);
                let v = eval(&args)?;
                Ok((i, args, v))
            })
            .collect::<Result<_>>()?;
        if let Some(pos) = chunk.iter().position(|r| r.2.is_false()) {
            out.extend(chunk.into_iter().take(pos + 1));
            return Ok(out);
        }
        out.extend(chunk);
        start = end;
    }
    Ok(out)
}

/// Greedy, deterministic reduction of a failing tuple: the first single-step
/// reduction (in canonical order) that keeps the law false is taken, until
/// none applies.
pub fn shrink<U: Universe>(theory: &U, law: LawId, witness: Vec<U::Spec>) -> Result<Vec<U::Spec>> {
    let mut current = witness;
    'outer: loop {
        for pos in 0..current.len() {
            for candidate in theory.reductions(&current[pos]) {
                let mut next = current.clone();
                next[pos] = candidate;
                if law_predicate(theory, law, &next)?.is_false() {
                    current = next;
                    continue 'outer;
                }
            }
        }
        return Ok(current);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Thm2CrossCheck {
    /// How the cross-check is derived; fixed text.
    pub note: String,
    pub par_unit: Status,
    pub thm1: Status,
    /// True when PAR_UNIT failed and THM1 was applicable.
    pub applicable: bool,
    /// Whether a THM1 counterexample was found in the same run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thm1_counterexample_found: Option<bool>,
    pub observed: String,
}

const THM2_NOTE: &str = "design choice: the necessity of the unit law PAR_UNIT for THM1 is a \
statement about theories; this section reports the observed PAR_UNIT/THM1 pattern of this run \
and does not prove it";

impl Thm2CrossCheck {
    fn from_verdicts(verdicts: &[LawVerdict]) -> Self {
        let status = |law| verdicts.iter().find(|v| v.law == law).map_or(Status::Inapplicable, |v| v.status);
        let (par_unit, thm1) = (status(LawId::ParUnit), status(LawId::Thm1));
        let applicable = par_unit == Status::Fails && thm1 != Status::Inapplicable;
        let found = applicable.then_some(thm1 == Status::Fails);
        let observed = match (par_unit, thm1) {
            (Status::Fails, Status::Fails) => {
                "PAR_UNIT fails and a THM1 counterexample was found: without the unit law, \
                 composition is not always below conjunction"
            }
            (Status::Fails, Status::Holds) => {
                "PAR_UNIT fails but no THM1 counterexample was found within the budget"
            }
            (Status::Fails, Status::Inapplicable) => "PAR_UNIT fails; THM1 is inapplicable (no conjunction)",
            (Status::Holds, Status::Holds) => "PAR_UNIT holds and THM1 holds",
            (Status::Holds, Status::Fails) => {
                "PAR_UNIT holds but THM1 fails: another premise (UNIV, PRECONG, PAR_COMM, CONJ_GLB) must fail"
            }
            (Status::Holds, Status::Inapplicable) => "PAR_UNIT holds; THM1 is inapplicable",
            (Status::Inapplicable, _) => "PAR_UNIT is inapplicable (no universal specification)",
        }
        .to_string();
        Thm2CrossCheck {
            note: THM2_NOTE.into(),
            par_unit,
            thm1,
            applicable,
            thm1_counterexample_found: found,
            observed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AuditReport {
    pub config: GenConfig,
    pub verdicts: Vec<LawVerdict>,
    #[serde(rename = "thm2CrossCheck")]
    pub thm2_cross_check: Thm2CrossCheck,
    pub duration_ms: u64,
}

impl AuditReport {
    pub fn verdict(&self, law: LawId) -> &LawVerdict {
        self.verdicts.iter().find(|v| v.law == law).expect("every law is audited")
    }

    pub fn any_fails(&self) -> bool {
        self.verdicts.iter().any(|v| v.status == Status::Fails)
    }
}

/// Runs [`check_law`] for every law.
pub fn audit<U: Universe>(theory: &U, config: &GenConfig) -> Result<AuditReport> {
    let started = Instant::now();
    let verdicts = LawId::ALL
        .iter()
        .map(|&law| check_law(theory, law, config))
        .collect::<Result<Vec<_>>>()?;
    Ok(AuditReport {
        config: config.clone(),
        thm2_cross_check: Thm2CrossCheck::from_verdicts(&verdicts),
        verdicts,
        duration_ms: started.elapsed().as_millis() as u64,
    })
}

/// Parses a rendered witness back into theory values.
pub fn parse_witness<U: Universe>(theory: &U, witness: &[String]) -> Option<Vec<U::Spec>> {
    let text = witness.join("\n");
    let file = crate::format::parse_spec(&text).ok()?;
    file.blocks.into_iter().map(|(_, v): (String, SpecValue)| theory.from_value(v)).collect()
}
