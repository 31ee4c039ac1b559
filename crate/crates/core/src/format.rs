//! Line-oriented specification file format.
//!
//! ```text
//! spec NAME
//! theory nfa|mts|ia
//! alphabet a,b              # nfa, mts
//! inputs go                 # ia
//! outputs msg               # ia
//! internals tau             # ia, optional
//! states s0,s1
//! initial s0                # list for nfa/mts, single state for ia
//! accepting s1              # nfa
//! t    s0 a s1              # nfa transition
//! may  s0 a s1              # mts
//! must s0 a s1              # mts (implies may)
//! i s0 go s1                # ia input
//! o s0 msg s1               # ia output
//! h s0 tau s1               # ia internal
//! inconsistent              # mts: the bottom element, no states
//! end
//! ```

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::alphabet::Alphabet;
use crate::fa::Nfa;
use crate::ia::{InterfaceAutomaton, Signature};
use crate::mts::Mts;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoryKind {
    Nfa,
    Mts,
    Ia,
}

impl TheoryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TheoryKind::Nfa => "nfa",
            TheoryKind::Mts => "mts",
            TheoryKind::Ia => "ia",
        }
    }
}

impl fmt::Display for TheoryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A parsed specification of any theory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecValue {
    Nfa(Nfa),
    Mts(Mts),
    Ia(InterfaceAutomaton),
}

impl SpecValue {
    pub fn kind(&self) -> TheoryKind {
        match self {
            SpecValue::Nfa(_) => TheoryKind::Nfa,
            SpecValue::Mts(_) => TheoryKind::Mts,
            SpecValue::Ia(_) => TheoryKind::Ia,
        }
    }
}

impl From<Nfa> for SpecValue {
    fn from(v: Nfa) -> Self {
        SpecValue::Nfa(v)
    }
}

impl From<Mts> for SpecValue {
    fn from(v: Mts) -> Self {
        SpecValue::Mts(v)
    }
}

impl From<InterfaceAutomaton> for SpecValue {
    fn from(v: InterfaceAutomaton) -> Self {
        SpecValue::Ia(v)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpecFile {
    pub blocks: Vec<(String, SpecValue)>,
}

impl SpecFile {
    pub fn get(&self, name: &str) -> Option<&SpecValue> {
        self.blocks.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }
}

/// Everything collected between `spec` and `end`, with line numbers kept
/// for error reporting.
#[derive(Default)]
struct RawBlock {
    name: String,
    start: usize,
    theory: Option<TheoryKind>,
    alphabet: Option<(usize, Vec<String>)>,
    inputs: Vec<String>,
    outputs: Vec<String>,
    internals: Vec<String>,
    states: Option<(usize, Vec<String>)>,
    initial: Option<(usize, Vec<String>)>,
    accepting: Option<(usize, Vec<String>)>,
    inconsistent: bool,
    /// (line, keyword, source, action, target)
    edges: Vec<(usize, String, String, String, String)>,
}

fn list(tokens: &[&str]) -> Vec<String> {
    tokens
        .join(",")
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

pub fn parse_spec(text: &str) -> Result<SpecFile, ParseError> {
    let mut file = SpecFile::default();
    let mut names = BTreeSet::new();
    let mut current: Option<RawBlock> = None;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((&keyword, rest)) = tokens.split_first() else { continue };

        let Some(block) = current.as_mut() else {
            if keyword != "spec" {
                return err(line, format!("expected `spec`, found `{keyword}`"));
            }
            let [name] = rest else { return err(line, "expected `spec NAME`") };
            if !names.insert(name.to_string()) {
                return err(line, format!("duplicate specification name `{name}`"));
            }
            current = Some(RawBlock { name: name.to_string(), start: line, ..RawBlock::default() });
            continue;
        };

        if keyword != "theory" && keyword != "end" && block.theory.is_none() {
            return err(line, "`theory` must be the first line of a block");
        }
        let theory = block.theory;
        let only = |kinds: &[TheoryKind]| -> Result<(), ParseError> {
            match theory {
                Some(t) if kinds.contains(&t) => Ok(()),
                Some(t) => err(line, format!("`{keyword}` is not valid in a {t} block")),
                None => err(line, "`theory` must be the first line of a block"),
            }
        };
        let once = |slot: &Option<(usize, Vec<String>)>| -> Result<(), ParseError> {
            match slot {
                Some(_) => err(line, format!("duplicate `{keyword}` declaration")),
                None => Ok(()),
            }
        };
        match keyword {
            "spec" => return err(line, "nested `spec` (missing `end`?)"),
            "theory" => {
                if block.theory.is_some() {
                    return err(line, "duplicate `theory` declaration");
                }
                block.theory = Some(match rest {
                    ["nfa"] => TheoryKind::Nfa,
                    ["mts"] => TheoryKind::Mts,
                    ["ia"] => TheoryKind::Ia,
                    _ => return err(line, "expected `theory nfa|mts|ia`"),
                });
            }
            "alphabet" => {
                only(&[TheoryKind::Nfa, TheoryKind::Mts])?;
                once(&block.alphabet)?;
                block.alphabet = Some((line, list(rest)));
            }
            "inputs" => {
                only(&[TheoryKind::Ia])?;
                block.inputs.extend(list(rest));
            }
            "outputs" => {
                only(&[TheoryKind::Ia])?;
                block.outputs.extend(list(rest));
            }
            "internals" => {
                only(&[TheoryKind::Ia])?;
                block.internals.extend(list(rest));
            }
            "states" => {
                once(&block.states)?;
                block.states = Some((line, list(rest)));
            }
            "initial" => {
                once(&block.initial)?;
                block.initial = Some((line, list(rest)));
            }
            "accepting" => {
                only(&[TheoryKind::Nfa])?;
                once(&block.accepting)?;
                block.accepting = Some((line, list(rest)));
            }
            "inconsistent" => {
                only(&[TheoryKind::Mts])?;
                block.inconsistent = true;
            }
            "t" | "may" | "must" | "i" | "o" | "h" => {
                match keyword {
                    "t" => only(&[TheoryKind::Nfa])?,
                    "may" | "must" => only(&[TheoryKind::Mts])?,
                    _ => only(&[TheoryKind::Ia])?,
                }
                let [s, a, t] = rest else {
                    return err(line, format!("expected `{keyword} SOURCE ACTION TARGET`"));
                };
                block.edges.push((line, keyword.into(), s.to_string(), a.to_string(), t.to_string()));
            }
            "end" => {
                if !rest.is_empty() {
                    return err(line, "unexpected tokens after `end`");
                }
                let block = current.take().expect("inside a block");
                let name = block.name.clone();
                file.blocks.push((name, build(block, line)?));
            }
            other => return err(line, format!("unknown keyword `{other}`")),
        }
    }
    if let Some(block) = current {
        return err(block.start, format!("missing `end` for specification `{}`", block.name));
    }
    Ok(file)
}

fn build(block: RawBlock, end_line: usize) -> Result<SpecValue, ParseError> {
    let Some(theory) = block.theory else { return err(end_line, "missing `theory`") };

    if block.inconsistent {
        if block.states.is_some() || block.initial.is_some() || !block.edges.is_empty() {
            return err(end_line, "an inconsistent block declares no states or transitions");
        }
        let Some((line, symbols)) = &block.alphabet else { return err(end_line, "missing `alphabet`") };
        let alphabet = Alphabet::new(symbols.clone()).or_else(|e| err(*line, e.to_string()))?;
        return Ok(SpecValue::Mts(Mts::bottom(&alphabet)));
    }

    let Some((states_line, states)) = &block.states else { return err(end_line, "missing `states`") };
    let mut state_index = HashMap::new();
    for (i, s) in states.iter().enumerate() {
        if state_index.insert(s.clone(), i).is_some() {
            return err(*states_line, format!("duplicate state `{s}`"));
        }
    }
    let lookup = |line: usize, s: &str| -> Result<usize, ParseError> {
        match state_index.get(s) {
            Some(&i) => Ok(i),
            None => err(line, format!("undeclared state `{s}`")),
        }
    };
    let Some((init_line, initial)) = &block.initial else { return err(end_line, "missing `initial`") };
    let initial_set = initial.iter().map(|s| lookup(*init_line, s)).collect::<Result<BTreeSet<_>, _>>()?;
    if initial_set.is_empty() {
        return err(*init_line, "no initial state");
    }

    match theory {
        TheoryKind::Nfa | TheoryKind::Mts => {
            let Some((alpha_line, symbols)) = &block.alphabet else {
                return err(end_line, "missing `alphabet`");
            };
            let alphabet = Alphabet::new(symbols.clone()).or_else(|e| err(*alpha_line, e.to_string()))?;
            let action = |line: usize, a: &str| -> Result<usize, ParseError> {
                alphabet.index_of(a).map_or_else(|| err(line, format!("undeclared action `{a}`")), Ok)
            };
            let mut plain = BTreeSet::new();
            let mut must = BTreeSet::new();
            for (line, kw, s, a, t) in &block.edges {
                let edge = (lookup(*line, s)?, action(*line, a)?, lookup(*line, t)?);
                if kw == "must" {
                    must.insert(edge);
                }
                plain.insert(edge);
            }
            let states = states.clone();
            let value = if theory == TheoryKind::Nfa {
                let accepting = match &block.accepting {
                    Some((line, acc)) => acc.iter().map(|s| lookup(*line, s)).collect::<Result<_, _>>()?,
                    None => BTreeSet::new(),
                };
                SpecValue::Nfa(
                    Nfa::new(alphabet, states, initial_set, accepting, plain)
                        .or_else(|e| err(end_line, e.to_string()))?,
                )
            } else {
                let mts = Mts::new(alphabet, states, initial_set, plain, must)
                    .or_else(|e| err(end_line, e.to_string()))?;
                SpecValue::Mts(mts)
            };
            Ok(value)
        }
        TheoryKind::Ia => {
            if initial_set.len() != 1 {
                return err(*init_line, "an interface automaton has exactly one initial state");
            }
            let signature = Signature::new(&block.inputs, &block.outputs, &block.internals)
                .or_else(|e| err(end_line, e.to_string()))?;
            let mut transitions = Vec::new();
            for (line, kw, s, a, t) in &block.edges {
                let (declared, what) = match kw.as_str() {
                    "i" => (&signature.inputs, "input"),
                    "o" => (&signature.outputs, "output"),
                    _ => (&signature.internals, "internal"),
                };
                if !declared.contains(a) {
                    return err(*line, format!("undeclared {what} action `{a}`"));
                }
                transitions.push((lookup(*line, s)?, a.clone(), lookup(*line, t)?));
            }
            let initial = *initial_set.iter().next().expect("checked nonempty");
            InterfaceAutomaton::new(signature, states.clone(), initial, transitions)
                .map(SpecValue::Ia)
                .or_else(|e| err(end_line, e.to_string()))
        }
    }
}

fn join<'a>(items: impl IntoIterator<Item = &'a String>) -> String {
    items.into_iter().map(String::as_str).collect::<Vec<_>>().join(",")
}

/// Canonical text of one block: declarations first, transitions sorted.
pub fn render_spec(name: &str, value: &SpecValue) -> String {
    let mut out = format!("spec {name}\ntheory {}\n", value.kind());
    let mut edges: Vec<String> = Vec::new();
    match value {
        SpecValue::Nfa(nfa) => {
            let st = nfa.states();
            out += &format!("alphabet {}\n", nfa.alphabet());
            out += &format!("states {}\n", join(st));
            out += &format!("initial {}\n", join(nfa.initial().iter().map(|&s| &st[s])));
            if !nfa.accepting().is_empty() {
                out += &format!("accepting {}\n", join(nfa.accepting().iter().map(|&s| &st[s])));
            }
            for &(s, a, t) in nfa.transitions() {
                edges.push(format!("t {} {} {}", st[s], nfa.alphabet().symbol(a), st[t]));
            }
        }
        SpecValue::Mts(mts) => {
            out += &format!("alphabet {}\n", mts.alphabet());
            if mts.is_bottom() {
                out += "inconsistent\nend\n";
                return out;
            }
            let st = mts.states();
            out += &format!("states {}\n", join(st));
            out += &format!("initial {}\n", join(mts.initial().iter().map(|&s| &st[s])));
            for edge @ &(s, a, t) in mts.may() {
                let kw = if mts.must().contains(edge) { "must" } else { "may" };
                edges.push(format!("{kw} {} {} {}", st[s], mts.alphabet().symbol(a), st[t]));
            }
        }
        SpecValue::Ia(ia) => {
            let sig = ia.signature();
            let st = ia.states();
            for (kw, set) in [("inputs", &sig.inputs), ("outputs", &sig.outputs), ("internals", &sig.internals)] {
                if !set.is_empty() {
                    out += &format!("{kw} {}\n", join(set));
                }
            }
            out += &format!("states {}\n", join(st));
            out += &format!("initial {}\n", st[ia.initial()]);
            for (s, a, t) in ia.transitions() {
                let kw = match sig.kind(a) {
                    Some(crate::ia::ActionKind::Input) => "i",
                    Some(crate::ia::ActionKind::Output) => "o",
                    _ => "h",
                };
                edges.push(format!("{kw} {} {a} {}", st[s], st[t]));
            }
        }
    }
    edges.sort();
    for e in edges {
        out += &e;
        out.push('\n');
    }
    out += "end\n";
    out
}

pub fn render_file(file: &SpecFile) -> String {
    file.blocks
        .iter()
        .map(|(name, value)| render_spec(name, value))
        .collect::<Vec<_>>()
        .join("\n")
}
