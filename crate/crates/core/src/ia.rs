//! Interface automata: the two-player theory.
//!
//! Composition is partial (control conflicts), and the product of two
//! interfaces is pruned by a safety game. The environment-side pruning gives
//! optimistic composition, the component-side pruning is its dual, and
//! pessimistic composition rejects any product that can reach an error.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use crate::algebra::Theory;
use crate::alphabet::{fresh_names, letter};
use crate::error::{Result, SpecError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ActionKind {
    Input,
    Output,
    Internal,
}

/// Three pairwise disjoint action sets.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub inputs: BTreeSet<String>,
    pub outputs: BTreeSet<String>,
    pub internals: BTreeSet<String>,
}

impl Signature {
    pub fn new<S: AsRef<str>>(inputs: &[S], outputs: &[S], internals: &[S]) -> Result<Self> {
        let set = |xs: &[S]| xs.iter().map(|x| x.as_ref().to_string()).collect::<BTreeSet<_>>();
        let sig = Signature { inputs: set(inputs), outputs: set(outputs), internals: set(internals) };
        sig.validate()?;
        Ok(sig)
    }

    fn validate(&self) -> Result<()> {
        let disjoint = self.inputs.is_disjoint(&self.outputs)
            && self.inputs.is_disjoint(&self.internals)
            && self.outputs.is_disjoint(&self.internals);
        if disjoint {
            Ok(())
        } else {
            Err(SpecError::Invalid("input, output and internal actions must be disjoint".into()))
        }
    }

    pub fn kind(&self, action: &str) -> Option<ActionKind> {
        if self.inputs.contains(action) {
            Some(ActionKind::Input)
        } else if self.outputs.contains(action) {
            Some(ActionKind::Output)
        } else if self.internals.contains(action) {
            Some(ActionKind::Internal)
        } else {
            None
        }
    }

    pub fn actions(&self) -> BTreeSet<String> {
        self.inputs.iter().chain(&self.outputs).chain(&self.internals).cloned().collect()
    }

    /// Actions over which two composed interfaces communicate: an output of
    /// one side that is an input of the other.
    pub fn shared_with(&self, other: &Signature) -> BTreeSet<String> {
        self.outputs
            .intersection(&other.inputs)
            .chain(self.inputs.intersection(&other.outputs))
            .cloned()
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterfaceAutomaton {
    signature: Signature,
    states: Vec<String>,
    initial: usize,
    /// `transitions[state][action] = target`; deterministic by construction.
    transitions: Vec<BTreeMap<String, usize>>,
}

impl InterfaceAutomaton {
    pub fn new(
        signature: Signature,
        states: Vec<String>,
        initial: usize,
        transitions: impl IntoIterator<Item = (usize, String, usize)>,
    ) -> Result<Self> {
        signature.validate()?;
        let n = states.len();
        if initial >= n {
            return Err(SpecError::Invalid("undeclared initial state".into()));
        }
        let mut map = vec![BTreeMap::new(); n];
        for (s, a, t) in transitions {
            if s >= n || t >= n {
                return Err(SpecError::Invalid("transition references undeclared state".into()));
            }
            if signature.kind(&a).is_none() {
                return Err(SpecError::Invalid(format!("action `{a}` not in signature")));
            }
            if let Some(old) = map[s].insert(a.clone(), t) {
                if old != t {
                    return Err(SpecError::Invalid(format!(
                        "nondeterministic transitions on `{a}` from {}",
                        states[s]
                    )));
                }
            }
        }
        Ok(InterfaceAutomaton { signature, states, initial, transitions: map })
    }

    /// States `s0..s{n-1}`, initial `s0`.
    pub fn build(signature: Signature, states: usize, transitions: &[(usize, &str, usize)]) -> Result<Self> {
        InterfaceAutomaton::new(
            signature,
            fresh_names("s", states),
            0,
            transitions.iter().map(|&(s, a, t)| (s, a.to_string(), t)),
        )
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    /// All transitions, ordered by source state then action.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, &str, usize)> + '_ {
        self.transitions
            .iter()
            .enumerate()
            .flat_map(|(s, out)| out.iter().map(move |(a, t)| (s, a.as_str(), *t)))
    }

    pub fn successor(&self, state: usize, action: &str) -> Option<usize> {
        self.transitions[state].get(action).copied()
    }

    fn enabled(&self, state: usize) -> impl Iterator<Item = (&str, usize)> + '_ {
        self.transitions[state].iter().map(|(a, t)| (a.as_str(), *t))
    }

    /// Copy without the removed states and every transition touching them.
    fn restrict(&self, removed: &[bool]) -> InterfaceAutomaton {
        let mut renumber = vec![usize::MAX; self.states.len()];
        let mut states = Vec::new();
        for (i, name) in self.states.iter().enumerate() {
            if !removed[i] {
                renumber[i] = states.len();
                states.push(name.clone());
            }
        }
        let transitions = self
            .transitions
            .iter()
            .enumerate()
            .filter(|(s, _)| !removed[*s])
            .map(|(_, out)| {
                out.iter()
                    .filter(|(_, t)| !removed[**t])
                    .map(|(a, t)| (a.clone(), renumber[*t]))
                    .collect()
            })
            .collect();
        InterfaceAutomaton {
            signature: self.signature.clone(),
            states,
            initial: renumber[self.initial],
            transitions,
        }
    }
}

/// Raw product of two interfaces with its error states marked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductWithErrors {
    pub automaton: InterfaceAutomaton,
    pub errors: BTreeSet<usize>,
    /// Product state index → `(left state, right state)`.
    pub provenance: Vec<(usize, usize)>,
    /// Actions that became internal through synchronisation.
    pub shared: BTreeSet<String>,
}

impl ProductWithErrors {
    /// A product with no error states, wrapping an existing interface.
    pub fn error_free(automaton: InterfaceAutomaton) -> Self {
        let provenance = (0..automaton.states.len()).map(|i| (i, i)).collect();
        ProductWithErrors { automaton, errors: BTreeSet::new(), provenance, shared: BTreeSet::new() }
    }
}

/// Outcome of a pruning: either a pruned interface or no compatible context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Compat {
    Compatible(InterfaceAutomaton),
    Incompatible,
}

impl Compat {
    pub fn is_compatible(&self) -> bool {
        matches!(self, Compat::Compatible(_))
    }

    pub fn into_result(self) -> Result<InterfaceAutomaton> {
        match self {
            Compat::Compatible(ia) => Ok(ia),
            Compat::Incompatible => Err(SpecError::Incompatible),
        }
    }
}

/// Disjoint outputs, and internal actions of each side unknown to the other.
pub fn composable(a: &InterfaceAutomaton, b: &InterfaceAutomaton) -> bool {
    let (sa, sb) = (&a.signature, &b.signature);
    sa.outputs.is_disjoint(&sb.outputs)
        && sa.internals.is_disjoint(&sb.actions())
        && sb.internals.is_disjoint(&sa.actions())
}

/// Synchronises on shared actions (which become internal) and on common
/// inputs; interleaves everything else.
pub fn product(a: &InterfaceAutomaton, b: &InterfaceAutomaton) -> Result<ProductWithErrors> {
    if !composable(a, b) {
        return Err(SpecError::ControlConflict);
    }
    let (sa, sb) = (&a.signature, &b.signature);
    let shared = sa.shared_with(sb);
    let common_inputs: BTreeSet<String> = sa.inputs.intersection(&sb.inputs).cloned().collect();
    let signature = Signature {
        inputs: sa.inputs.union(&sb.inputs).filter(|x| !shared.contains(*x)).cloned().collect(),
        outputs: sa.outputs.union(&sb.outputs).filter(|x| !shared.contains(*x)).cloned().collect(),
        internals: sa.internals.union(&sb.internals).chain(&shared).cloned().collect(),
    };

    let mut index: HashMap<(usize, usize), usize> = HashMap::from([((a.initial, b.initial), 0)]);
    let mut pairs = vec![(a.initial, b.initial)];
    let mut transitions = Vec::new();
    let mut errors = BTreeSet::new();
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        let mut steps: Vec<(String, (usize, usize))> = Vec::new();
        for (x, p2) in a.enabled(p) {
            if shared.contains(x) || common_inputs.contains(x) {
                match b.successor(q, x) {
                    Some(q2) => steps.push((x.to_string(), (p2, q2))),
                    None if shared.contains(x) && sa.outputs.contains(x) => {
                        errors.insert(i);
                    }
                    None => {}
                }
            } else {
                steps.push((x.to_string(), (p2, q)));
            }
        }
        for (x, q2) in b.enabled(q) {
            if shared.contains(x) || common_inputs.contains(x) {
                if sb.outputs.contains(x) && a.successor(p, x).is_none() {
                    errors.insert(i);
                }
            } else {
                steps.push((x.to_string(), (p, q2)));
            }
        }
        for (x, target) in steps {
            let j = *index.entry(target).or_insert_with(|| {
                pairs.push(target);
                pairs.len() - 1
            });
            transitions.push((i, x, j));
        }
        i += 1;
    }
    let automaton = InterfaceAutomaton::new(signature, fresh_names("q", pairs.len()), 0, transitions)?;
    Ok(ProductWithErrors { automaton, errors, provenance: pairs, shared })
}

/// Least set containing `seed` and every state with a `controlled`
/// transition into the set.
fn attractor(ia: &InterfaceAutomaton, seed: &BTreeSet<usize>, controlled: impl Fn(ActionKind) -> bool) -> Vec<bool> {
    let mut bad = vec![false; ia.states.len()];
    for &s in seed {
        bad[s] = true;
    }
    loop {
        let mut changed = false;
        for (s, a, t) in ia.transitions() {
            if bad[t] && !bad[s] && ia.signature.kind(a).is_some_and(&controlled) {
                bad[s] = true;
                changed = true;
            }
        }
        if !changed {
            return bad;
        }
    }
}

fn prune_with(prod: &ProductWithErrors, attracted_by: fn(ActionKind) -> bool) -> Compat {
    let ia = &prod.automaton;
    let bad = attractor(ia, &prod.errors, attracted_by);
    if bad[ia.initial] {
        return Compat::Incompatible;
    }
    // Edges still leading into `bad` belong to the winning player, who
    // refuses them.
    Compat::Compatible(ia.restrict(&bad))
}

/// Optimistic pruning: the environment wins by withholding inputs that lead
/// to states from which the component can force an error.
pub fn env_prune(prod: &ProductWithErrors) -> Compat {
    prune_with(prod, |k| matches!(k, ActionKind::Output | ActionKind::Internal))
}

/// Dual pruning: the component wins by withholding outputs and internal
/// steps that lead to states from which inputs can force an error.
pub fn comp_prune(prod: &ProductWithErrors) -> Compat {
    prune_with(prod, |k| k == ActionKind::Input)
}

/// Pessimistic composition: compatible only if no error is reachable at all.
pub fn pessimistic(a: &InterfaceAutomaton, b: &InterfaceAutomaton) -> Result<Compat> {
    let prod = product(a, b)?;
    let bad = attractor(&prod.automaton, &prod.errors, |_| true);
    if bad[prod.automaton.initial] {
        return Ok(Compat::Incompatible);
    }
    Ok(Compat::Compatible(prod.automaton.restrict(&bad)))
}

/// Optimistic composition: product followed by [`env_prune`].
pub fn optimistic(a: &InterfaceAutomaton, b: &InterfaceAutomaton) -> Result<Compat> {
    Ok(env_prune(&product(a, b)?))
}

/// Alternating simulation between interfaces of identical signature: the
/// refinement accepts at least the inputs and emits at most the outputs and
/// internal steps of the abstraction.
pub fn refines(a: &InterfaceAutomaton, b: &InterfaceAutomaton) -> Result<bool> {
    if a.signature != b.signature {
        return Err(SpecError::SignatureMismatch);
    }
    let (na, nb) = (a.states.len(), b.states.len());
    let mut rel = vec![vec![true; nb]; na];
    loop {
        let mut changed = false;
        for s in 0..na {
            for t in 0..nb {
                if !rel[s][t] {
                    continue;
                }
                let inputs_ok = b
                    .enabled(t)
                    .filter(|(x, _)| a.signature.inputs.contains(*x))
                    .all(|(x, t2)| a.successor(s, x).is_some_and(|s2| rel[s2][t2]));
                let outputs_ok = inputs_ok
                    && a
                        .enabled(s)
                        .filter(|(x, _)| !a.signature.inputs.contains(*x))
                        .all(|(x, s2)| b.successor(t, x).is_some_and(|t2| rel[s2][t2]));
                if !outputs_ok {
                    rel[s][t] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(rel[a.initial][b.initial])
}

/// All signatures over `actions` (each action input, output, internal or
/// unused), in canonical order.
pub fn all_signatures(actions: &[String]) -> Vec<Signature> {
    let mut out = Vec::new();
    let total = 4usize.pow(actions.len() as u32);
    for code in 0..total {
        let mut sig = Signature::default();
        let mut c = code;
        for x in actions {
            match c % 4 {
                1 => sig.inputs.insert(x.clone()),
                2 => sig.outputs.insert(x.clone()),
                3 => sig.internals.insert(x.clone()),
                _ => false,
            };
            c /= 4;
        }
        out.push(sig);
    }
    out
}

/// Every deterministic interface with `1..=max_states` states (initial `s0`)
/// over every signature drawn from `actions`.
pub fn enumerate(actions: &[String], max_states: usize) -> Vec<InterfaceAutomaton> {
    let mut out = Vec::new();
    for sig in all_signatures(actions) {
        let acts: Vec<String> = sig.actions().into_iter().collect();
        for n in 1..=max_states {
            let slots = n * acts.len();
            // each (state, action) slot: no transition, or one of n targets
            let total = (n + 1).checked_pow(slots as u32).expect("enumeration too large");
            for code in 0..total {
                let mut c = code;
                let mut transitions = Vec::new();
                for s in 0..n {
                    for x in &acts {
                        let choice = c % (n + 1);
                        c /= n + 1;
                        if choice > 0 {
                            transitions.push((s, x.clone(), choice - 1));
                        }
                    }
                }
                out.push(
                    InterfaceAutomaton::new(sig.clone(), fresh_names("s", n), 0, transitions)
                        .expect("enumerated interface is valid"),
                );
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Defeat {
    /// A same-signature interface that does not refine the candidate.
    RefinementFails,
    /// An interface whose signature differs, so refinement is undefined.
    SignatureMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessRow {
    pub candidate: usize,
    pub defeater: usize,
    pub reason: Defeat,
    /// Some interface `A` in the family for which `A | candidate ≤ A` is not
    /// established (composition or refinement undefined, or false).
    pub unit_defeater: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoUniversalTable {
    pub family: Vec<InterfaceAutomaton>,
    pub rows: Vec<WitnessRow>,
}

impl NoUniversalTable {
    /// True when every candidate of the family has a defeater.
    pub fn is_exhaustive(&self) -> bool {
        self.rows.len() == self.family.len()
            && self.rows.iter().enumerate().all(|(i, r)| r.candidate == i)
    }
}

/// For every interface `C` with at most `max_states` states over `actions`,
/// finds an interface `A` in the same family with `A ≤ C` false or
/// undefined. Rows are ordered by candidate index.
pub fn no_universal_witness(actions: &[String], max_states: usize) -> NoUniversalTable {
    let family = enumerate(actions, max_states);
    let rows = (0..family.len())
        .into_par_iter()
        .map(|c| defeat(&family, c).expect("a family with several signatures defeats every candidate"))
        .collect();
    NoUniversalTable { family, rows }
}

fn defeat(family: &[InterfaceAutomaton], c: usize) -> Option<WitnessRow> {
    let cand = &family[c];
    let same_sig_loser = family
        .iter()
        .position(|a| a.signature == cand.signature && !refines(a, cand).unwrap_or(true));
    let (defeater, reason) = match same_sig_loser {
        Some(i) => (i, Defeat::RefinementFails),
        None => (family.iter().position(|a| a.signature != cand.signature)?, Defeat::SignatureMismatch),
    };
    let unit_defeater = family.iter().position(|a| {
        let holds = optimistic(a, cand)
            .and_then(Compat::into_result)
            .and_then(|composed| refines(&composed, a));
        !matches!(holds, Ok(true))
    });
    Some(WitnessRow { candidate: c, defeater, reason, unit_defeater })
}

/// `ia` theory: optimistic composition, no conjunction, no universal.
#[derive(Debug, Clone)]
pub struct IaTheory {
    /// Action pool used by the generators.
    pub actions: Vec<String>,
}

impl IaTheory {
    pub fn new(action_count: usize) -> Self {
        IaTheory { actions: (0..action_count).map(letter).collect() }
    }
}

impl Theory for IaTheory {
    type Spec = InterfaceAutomaton;

    fn name(&self) -> String {
        "ia".into()
    }

    fn refines(&self, a: &InterfaceAutomaton, b: &InterfaceAutomaton) -> Result<bool> {
        refines(a, b)
    }

    fn conjoin(&self, _a: &InterfaceAutomaton, _b: &InterfaceAutomaton) -> Result<InterfaceAutomaton> {
        Err(SpecError::Unsupported("conjunction"))
    }

    fn compose(&self, a: &InterfaceAutomaton, b: &InterfaceAutomaton) -> Result<InterfaceAutomaton> {
        optimistic(a, b)?.into_result()
    }

    fn composable(&self, a: &InterfaceAutomaton, b: &InterfaceAutomaton) -> bool {
        composable(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// p0 -go?-> p1 -msg!-> p2
    fn p() -> InterfaceAutomaton {
        let sig = Signature::new(&["go"], &["msg"], &[]).unwrap();
        InterfaceAutomaton::build(sig, 3, &[(0, "go", 1), (1, "msg", 2)]).unwrap()
    }

    /// q0 accepting nothing
    fn q() -> InterfaceAutomaton {
        InterfaceAutomaton::build(Signature::new(&["msg"], &[], &[]).unwrap(), 1, &[]).unwrap()
    }

    /// q0 -msg?-> q1
    fn q_prime() -> InterfaceAutomaton {
        InterfaceAutomaton::build(Signature::new(&["msg"], &[], &[]).unwrap(), 2, &[(0, "msg", 1)]).unwrap()
    }

    #[test]
    fn composability() {
        assert!(composable(&p(), &q()));
        let p2 = InterfaceAutomaton::build(Signature::new(&[], &["msg"], &[]).unwrap(), 1, &[]).unwrap();
        assert!(!composable(&p(), &p2));
        let other = InterfaceAutomaton::build(Signature::new(&["x"], &["y"], &["z"]).unwrap(), 1, &[]).unwrap();
        assert!(composable(&p(), &other));
        let hidden = InterfaceAutomaton::build(Signature::new(&[], &[], &["go"]).unwrap(), 1, &[]).unwrap();
        assert!(!composable(&p(), &hidden));
        assert_eq!(product(&p(), &p2).unwrap_err(), SpecError::ControlConflict);
    }

    #[test]
    fn product_marks_errors() {
        let prod = product(&p(), &q()).unwrap();
        assert_eq!(prod.provenance, vec![(0, 0), (1, 0)]);
        assert_eq!(prod.errors, BTreeSet::from([1]));
        let sig = prod.automaton.signature();
        assert_eq!(sig.inputs, BTreeSet::from(["go".to_string()]));
        assert!(sig.outputs.is_empty());
        assert_eq!(sig.internals, BTreeSet::from(["msg".to_string()]));

        let ok = product(&p(), &q_prime()).unwrap();
        assert!(ok.errors.is_empty());
        assert_eq!(ok.provenance, vec![(0, 0), (1, 0), (2, 1)]);
    }

    #[test]
    fn optimistic_pruning_withholds_input() {
        let pruned = env_prune(&product(&p(), &q()).unwrap());
        let Compat::Compatible(ia) = pruned else { panic!("expected compatible") };
        assert_eq!(ia.states().len(), 1);
        assert_eq!(ia.transitions().count(), 0);

        let eager = InterfaceAutomaton::build(Signature::new(&[], &["msg"], &[]).unwrap(), 2, &[(0, "msg", 1)]).unwrap();
        assert_eq!(env_prune(&product(&eager, &q()).unwrap()), Compat::Incompatible);

        let clean = product(&p(), &q_prime()).unwrap();
        assert_eq!(env_prune(&clean), Compat::Compatible(clean.automaton.clone()));
    }

    #[test]
    fn component_pruning_is_dual() {
        assert_eq!(comp_prune(&product(&p(), &q()).unwrap()), Compat::Incompatible);
        let clean = product(&p(), &q_prime()).unwrap();
        assert_eq!(comp_prune(&clean), Compat::Compatible(clean.automaton.clone()));

        // r0 -x!-> r1 (error) and r0 -y!-> r2: only the x edge and r1 go.
        let sig = Signature::new(&[], &["x", "y"], &[]).unwrap();
        let chain = InterfaceAutomaton::build(sig, 3, &[(0, "x", 1), (0, "y", 2)]).unwrap();
        let prod = ProductWithErrors { errors: BTreeSet::from([1]), ..ProductWithErrors::error_free(chain) };
        let Compat::Compatible(pruned) = comp_prune(&prod) else { panic!("expected compatible") };
        assert_eq!(pruned.states(), ["s0", "s2"]);
        assert_eq!(pruned.transitions().collect::<Vec<_>>(), vec![(0, "y", 1)]);
    }

    #[test]
    fn pessimistic_composition() {
        assert_eq!(pessimistic(&p(), &q()).unwrap(), Compat::Incompatible);
        let full = product(&p(), &q_prime()).unwrap().automaton;
        assert_eq!(pessimistic(&p(), &q_prime()).unwrap(), Compat::Compatible(full));
    }

    #[test]
    fn alternating_refinement() {
        assert!(refines(&p(), &p()).unwrap());
        let sig = Signature::new(&["go", "stop"], &["msg"], &[]).unwrap();
        let more_inputs = InterfaceAutomaton::build(sig.clone(), 2, &[(0, "go", 1), (0, "stop", 1)]).unwrap();
        let fewer_inputs = InterfaceAutomaton::build(sig.clone(), 2, &[(0, "go", 1)]).unwrap();
        assert!(refines(&more_inputs, &fewer_inputs).unwrap());
        assert!(!refines(&fewer_inputs, &more_inputs).unwrap());

        let talker = InterfaceAutomaton::build(sig.clone(), 2, &[(0, "msg", 1)]).unwrap();
        let silent = InterfaceAutomaton::build(sig, 2, &[]).unwrap();
        assert!(!refines(&talker, &silent).unwrap());
        assert!(refines(&silent, &talker).unwrap());
        assert_eq!(refines(&p(), &q()), Err(SpecError::SignatureMismatch));
    }

    #[test]
    fn invalid_interfaces_rejected() {
        assert!(Signature::new(&["a"], &["a"], &[]).is_err());
        let sig = Signature::new(&["a"], &[], &[]).unwrap();
        assert!(InterfaceAutomaton::build(sig.clone(), 1, &[(0, "b", 0)]).is_err());
        assert!(InterfaceAutomaton::build(sig.clone(), 1, &[(0, "a", 1)]).is_err());
        assert!(InterfaceAutomaton::new(
            sig,
            vec!["s0".into(), "s1".into()],
            0,
            [(0, "a".to_string(), 0), (0, "a".to_string(), 1)]
        )
        .is_err());
    }

    #[test]
    fn enumeration_counts() {
        let acts = vec!["a".to_string()];
        // signatures: {}, in, out, internal; 1 state: 1 + 3*2 = 7
        assert_eq!(enumerate(&acts, 1).len(), 7);
        // 2 states: empty signature 1, three one-action signatures 3^2 each
        assert_eq!(enumerate(&acts, 2).len() - 7, 1 + 3 * 9);
        assert!(enumerate(&acts, 0).is_empty());
    }

    #[test]
    fn no_universal_in_small_family() {
        let acts = vec!["a".to_string(), "b".to_string()];
        let table = no_universal_witness(&acts, 1);
        assert!(table.is_exhaustive());
        for row in &table.rows {
            let (a, c) = (&table.family[row.defeater], &table.family[row.candidate]);
            match row.reason {
                Defeat::RefinementFails => assert_eq!(refines(a, c), Ok(false)),
                Defeat::SignatureMismatch => assert_eq!(refines(a, c), Err(SpecError::SignatureMismatch)),
            }
        }
        assert!(no_universal_witness(&acts, 0).rows.is_empty());
    }
}
