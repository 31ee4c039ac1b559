//! Finite automata over a fixed alphabet, refined by language inclusion.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::OnceLock;

use crate::algebra::Theory;
use crate::alphabet::{fresh_names, Alphabet, StateSet};
use crate::error::{Result, SpecError};

/// Default limit on the number of subset-construction states.
pub const DEFAULT_DET_CAP: usize = 4096;

/// Environment variable overriding [`DEFAULT_DET_CAP`].
pub const DET_CAP_ENV: &str = "SPECALG_MAX_DET_STATES";

/// The determinization cap in force for this process.
pub fn det_cap() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var(DET_CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .filter(|cap| *cap > 0)
            .unwrap_or(DEFAULT_DET_CAP)
    })
}

/// A nondeterministic finite automaton with a set of initial states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Alphabet,
    states: Vec<String>,
    initial: BTreeSet<usize>,
    accepting: BTreeSet<usize>,
    /// `(source, symbol, target)`
    transitions: BTreeSet<(usize, usize, usize)>,
}

impl Nfa {
    pub fn new(
        alphabet: Alphabet,
        states: Vec<String>,
        initial: BTreeSet<usize>,
        accepting: BTreeSet<usize>,
        transitions: BTreeSet<(usize, usize, usize)>,
    ) -> Result<Self> {
        let n = states.len();
        if initial.is_empty() {
            return Err(SpecError::Invalid("no initial state".into()));
        }
        if initial.iter().chain(&accepting).any(|s| *s >= n) {
            return Err(SpecError::Invalid("undeclared state".into()));
        }
        if transitions
            .iter()
            .any(|&(s, a, t)| s >= n || t >= n || a >= alphabet.len())
        {
            return Err(SpecError::Invalid("transition references undeclared state or symbol".into()));
        }
        Ok(Nfa { alphabet, states, initial, accepting, transitions })
    }

    /// Convenience constructor with states `s0..s{n-1}` and named symbols.
    pub fn build(
        alphabet: &Alphabet,
        states: usize,
        initial: &[usize],
        accepting: &[usize],
        transitions: &[(usize, &str, usize)],
    ) -> Result<Self> {
        let transitions = transitions
            .iter()
            .map(|&(s, a, t)| {
                alphabet
                    .index_of(a)
                    .map(|a| (s, a, t))
                    .ok_or_else(|| SpecError::Invalid(format!("undeclared action `{a}`")))
            })
            .collect::<Result<_>>()?;
        Nfa::new(
            alphabet.clone(),
            fresh_names("s", states),
            initial.iter().copied().collect(),
            accepting.iter().copied().collect(),
            transitions,
        )
    }

    /// One state looping on every symbol, accepting: `Σ*`.
    pub fn universal(alphabet: &Alphabet) -> Nfa {
        Nfa {
            alphabet: alphabet.clone(),
            states: vec!["u".into()],
            initial: BTreeSet::from([0]),
            accepting: BTreeSet::from([0]),
            transitions: (0..alphabet.len()).map(|a| (0, a, 0)).collect(),
        }
    }

    /// One non-accepting state without transitions: `∅`.
    pub fn empty(alphabet: &Alphabet) -> Nfa {
        Nfa {
            alphabet: alphabet.clone(),
            states: vec!["e".into()],
            initial: BTreeSet::from([0]),
            accepting: BTreeSet::new(),
            transitions: BTreeSet::new(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> &BTreeSet<usize> {
        &self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    pub fn transitions(&self) -> &BTreeSet<(usize, usize, usize)> {
        &self.transitions
    }

    /// `delta[state][symbol]` successor lists.
    fn delta(&self) -> Vec<Vec<Vec<usize>>> {
        let mut delta = vec![vec![Vec::new(); self.alphabet.len()]; self.states.len()];
        for &(s, a, t) in &self.transitions {
            delta[s][a].push(t);
        }
        delta
    }

    /// Membership by direct simulation of the nondeterministic automaton.
    pub fn accepts(&self, word: &[usize]) -> bool {
        let delta = self.delta();
        let mut current: BTreeSet<usize> = self.initial.clone();
        for &a in word {
            current = current.iter().flat_map(|&s| delta[s][a].iter().copied()).collect();
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|s| self.accepting.contains(s))
    }

    /// All accepted words of length at most `n`, as symbol sequences,
    /// enumerated breadth-first over `Σ^{≤n}`.
    pub fn words_upto(&self, n: usize) -> BTreeSet<Vec<String>> {
        let mut words = BTreeSet::new();
        let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
        for len in 0..=n {
            for word in &layer {
                if self.accepts(word) {
                    words.insert(word.iter().map(|&a| self.alphabet.symbol(a).to_string()).collect());
                }
            }
            if len == n {
                break;
            }
            layer = layer
                .iter()
                .flat_map(|w| {
                    (0..self.alphabet.len()).map(move |a| {
                        let mut next = w.clone();
                        next.push(a);
                        next
                    })
                })
                .collect();
        }
        words
    }

    /// Complete deterministic automaton for the same language; the empty
    /// subset is kept as a rejecting sink.
    pub fn determinize(&self) -> Result<Nfa> {
        let cap = det_cap();
        let delta = self.delta();
        let start: StateSet = self.initial.iter().copied().collect();
        let mut index: HashMap<StateSet, usize> = HashMap::from([(start.clone(), 0)]);
        let mut subsets = vec![start];
        let mut transitions = BTreeSet::new();
        let mut i = 0;
        while i < subsets.len() {
            for a in 0..self.alphabet.len() {
                let next: StateSet = subsets[i]
                    .iter()
                    .flat_map(|s| delta[s][a].iter().copied())
                    .collect();
                let j = match index.get(&next) {
                    Some(&j) => j,
                    None => {
                        if subsets.len() >= cap {
                            return Err(SpecError::StateBlowUp { cap });
                        }
                        index.insert(next.clone(), subsets.len());
                        subsets.push(next);
                        subsets.len() - 1
                    }
                };
                transitions.insert((i, a, j));
            }
            i += 1;
        }
        let accepting = subsets
            .iter()
            .enumerate()
            .filter(|(_, set)| set.iter().any(|s| self.accepting.contains(&s)))
            .map(|(i, _)| i)
            .collect();
        Ok(Nfa {
            alphabet: self.alphabet.clone(),
            states: fresh_names("q", subsets.len()),
            initial: BTreeSet::from([0]),
            accepting,
            transitions,
        })
    }
}

/// `L(a) ⊆ L(b)`, decided on the fly over pairs (state of `a`, subset of `b`).
pub fn refines(a: &Nfa, b: &Nfa) -> Result<bool> {
    a.alphabet.check_same(&b.alphabet)?;
    let cap = det_cap();
    let (da, db) = (a.delta(), b.delta());
    let b_accepting: StateSet = b.accepting.iter().copied().collect();

    let mut subsets: HashMap<StateSet, usize> = HashMap::new();
    let intern = |set: StateSet, subsets: &mut HashMap<StateSet, usize>| -> Result<usize> {
        let next = subsets.len();
        if let Some(&id) = subsets.get(&set) {
            return Ok(id);
        }
        if next >= cap {
            return Err(SpecError::StateBlowUp { cap });
        }
        subsets.insert(set, next);
        Ok(next)
    };

    let start: StateSet = b.initial.iter().copied().collect();
    let start_id = intern(start.clone(), &mut subsets)?;
    let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut queue = VecDeque::new();
    for &s in &a.initial {
        if seen.insert((s, start_id)) {
            queue.push_back((s, start.clone(), start_id));
        }
    }
    while let Some((s, set, _)) = queue.pop_front() {
        if a.accepting.contains(&s) && !set.intersects(&b_accepting) {
            return Ok(false);
        }
        for sym in 0..a.alphabet.len() {
            if da[s][sym].is_empty() {
                continue;
            }
            let next: StateSet = set.iter().flat_map(|q| db[q][sym].iter().copied()).collect();
            let id = intern(next.clone(), &mut subsets)?;
            for &t in &da[s][sym] {
                if seen.insert((t, id)) {
                    queue.push_back((t, next.clone(), id));
                }
            }
        }
    }
    Ok(true)
}

/// Synchronous product over reachable state pairs: `L(a) ∩ L(b)`.
pub fn product(a: &Nfa, b: &Nfa) -> Result<Nfa> {
    a.alphabet.check_same(&b.alphabet)?;
    let (da, db) = (a.delta(), b.delta());
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pairs = Vec::new();
    let mut initial = BTreeSet::new();
    for &s in &a.initial {
        for &t in &b.initial {
            index.insert((s, t), pairs.len());
            initial.insert(pairs.len());
            pairs.push((s, t));
        }
    }
    let mut transitions = BTreeSet::new();
    let mut i = 0;
    while i < pairs.len() {
        let (s, t) = pairs[i];
        for sym in 0..a.alphabet.len() {
            for &s2 in &da[s][sym] {
                for &t2 in &db[t][sym] {
                    let j = *index.entry((s2, t2)).or_insert_with(|| {
                        pairs.push((s2, t2));
                        pairs.len() - 1
                    });
                    transitions.insert((i, sym, j));
                }
            }
        }
        i += 1;
    }
    let accepting = pairs
        .iter()
        .enumerate()
        .filter(|(_, (s, t))| a.accepting.contains(s) && b.accepting.contains(t))
        .map(|(i, _)| i)
        .collect();
    Ok(Nfa {
        alphabet: a.alphabet.clone(),
        states: fresh_names("q", pairs.len()),
        initial,
        accepting,
        transitions,
    })
}

pub fn conjoin(a: &Nfa, b: &Nfa) -> Result<Nfa> {
    product(a, b)
}

/// Same construction as [`conjoin`]: composition over one shared alphabet is
/// the synchronous product.
pub fn compose(a: &Nfa, b: &Nfa) -> Result<Nfa> {
    product(a, b)
}

/// Disjoint union, initial states of both sides kept: `L(a) ∪ L(b)`.
pub fn disjoin(a: &Nfa, b: &Nfa) -> Result<Nfa> {
    a.alphabet.check_same(&b.alphabet)?;
    let off = a.states.len();
    Ok(Nfa {
        alphabet: a.alphabet.clone(),
        states: fresh_names("q", off + b.states.len()),
        initial: a.initial.iter().copied().chain(b.initial.iter().map(|s| s + off)).collect(),
        accepting: a.accepting.iter().copied().chain(b.accepting.iter().map(|s| s + off)).collect(),
        transitions: a
            .transitions
            .iter()
            .copied()
            .chain(b.transitions.iter().map(|&(s, x, t)| (s + off, x, t + off)))
            .collect(),
    })
}

/// `Σ* \ L(a)`, as a complete deterministic automaton.
pub fn complement(a: &Nfa) -> Result<Nfa> {
    let mut dfa = a.determinize()?;
    dfa.accepting = (0..dfa.states.len()).filter(|s| !dfa.accepting.contains(s)).collect();
    Ok(dfa)
}

/// Largest `X` (by language) with `L(a) ∩ L(X) ⊆ L(b)`:
/// the complement of `L(a) \ L(b)`.
pub fn conj_quotient(b: &Nfa, a: &Nfa) -> Result<Nfa> {
    a.alphabet.check_same(&b.alphabet)?;
    complement(&product(a, &complement(b)?)?)
}

/// Composition coincides with conjunction, so does its quotient.
pub fn par_quotient(b: &Nfa, a: &Nfa) -> Result<Nfa> {
    conj_quotient(b, a)
}

/// The FA theory over one fixed alphabet.
#[derive(Debug, Clone)]
pub struct FaTheory {
    pub alphabet: Alphabet,
}

impl FaTheory {
    pub fn new(alphabet: Alphabet) -> Self {
        FaTheory { alphabet }
    }
}

impl Theory for FaTheory {
    type Spec = Nfa;

    fn name(&self) -> String {
        "fa".into()
    }

    fn refines(&self, a: &Nfa, b: &Nfa) -> Result<bool> {
        refines(a, b)
    }

    fn conjoin(&self, a: &Nfa, b: &Nfa) -> Result<Nfa> {
        conjoin(a, b)
    }

    fn compose(&self, a: &Nfa, b: &Nfa) -> Result<Nfa> {
        compose(a, b)
    }

    fn universal(&self) -> Result<Nfa> {
        Ok(Nfa::universal(&self.alphabet))
    }

    fn null_spec(&self) -> Result<Nfa> {
        Ok(Nfa::empty(&self.alphabet))
    }

    fn disjoin(&self, a: &Nfa, b: &Nfa) -> Result<Nfa> {
        disjoin(a, b)
    }

    fn conj_quotient(&self, b: &Nfa, a: &Nfa) -> Result<Nfa> {
        conj_quotient(b, a)
    }

    fn par_quotient(&self, b: &Nfa, a: &Nfa) -> Result<Nfa> {
        par_quotient(b, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma_a() -> Alphabet {
        Alphabet::new(["a"]).unwrap()
    }

    fn a_star() -> Nfa {
        Nfa::build(&sigma_a(), 1, &[0], &[0], &[(0, "a", 0)]).unwrap()
    }

    fn aa_star() -> Nfa {
        Nfa::build(&sigma_a(), 2, &[0], &[0], &[(0, "a", 1), (1, "a", 0)]).unwrap()
    }

    fn just_a() -> Nfa {
        Nfa::build(&sigma_a(), 2, &[0], &[1], &[(0, "a", 1)]).unwrap()
    }

    fn words(list: &[&str]) -> BTreeSet<Vec<String>> {
        list.iter().map(|w| w.chars().map(|c| c.to_string()).collect()).collect()
    }

    fn equiv(a: &Nfa, b: &Nfa) -> bool {
        refines(a, b).unwrap() && refines(b, a).unwrap()
    }

    #[test]
    fn words_upto_examples() {
        let sigma = sigma_a();
        assert!(Nfa::empty(&sigma).words_upto(3).is_empty());
        assert_eq!(Nfa::universal(&sigma).words_upto(2), words(&["", "a", "aa"]));
        assert_eq!(aa_star().words_upto(4), words(&["", "aa", "aaaa"]));
    }

    #[test]
    fn inclusion_examples() {
        assert!(refines(&aa_star(), &a_star()).unwrap());
        assert!(!refines(&a_star(), &aa_star()).unwrap());
        assert!(refines(&just_a(), &Nfa::universal(&sigma_a())).unwrap());
        assert!(refines(&Nfa::empty(&sigma_a()), &just_a()).unwrap());
    }

    #[test]
    fn alphabet_mismatch_is_an_error() {
        let other = Nfa::universal(&Alphabet::new(["b"]).unwrap());
        assert_eq!(refines(&a_star(), &other), Err(SpecError::AlphabetMismatch));
        assert_eq!(conjoin(&a_star(), &other), Err(SpecError::AlphabetMismatch));
        assert_eq!(disjoin(&a_star(), &other), Err(SpecError::AlphabetMismatch));
    }

    #[test]
    fn conjunction_and_composition() {
        let sigma = sigma_a();
        assert!(equiv(&conjoin(&a_star(), &aa_star()).unwrap(), &aa_star()));
        assert!(equiv(&conjoin(&just_a(), &Nfa::universal(&sigma)).unwrap(), &just_a()));
        assert!(equiv(&conjoin(&just_a(), &Nfa::empty(&sigma)).unwrap(), &Nfa::empty(&sigma)));
        assert!(equiv(&compose(&aa_star(), &Nfa::universal(&sigma)).unwrap(), &aa_star()));
        assert!(equiv(&compose(&just_a(), &just_a()).unwrap(), &just_a()));
    }

    #[test]
    fn disjunction() {
        let sigma = sigma_a();
        assert!(equiv(&disjoin(&just_a(), &Nfa::empty(&sigma)).unwrap(), &just_a()));
        let union = disjoin(&just_a(), &aa_star()).unwrap();
        assert_eq!(union.words_upto(4), words(&["", "a", "aa", "aaaa"]));
        assert!(refines(&aa_star(), &union).unwrap());
    }

    #[test]
    fn complement_examples() {
        let sigma = sigma_a();
        assert!(equiv(&complement(&Nfa::universal(&sigma)).unwrap(), &Nfa::empty(&sigma)));
        assert!(equiv(&complement(&complement(&aa_star()).unwrap()).unwrap(), &aa_star()));
        let all = disjoin(&aa_star(), &complement(&aa_star()).unwrap()).unwrap();
        assert!(equiv(&all, &Nfa::universal(&sigma)));
        assert_eq!(complement(&aa_star()).unwrap().words_upto(5), words(&["a", "aaa", "aaaaa"]));
    }

    #[test]
    fn quotient_examples() {
        let sigma = sigma_a();
        let (u, e) = (Nfa::universal(&sigma), Nfa::empty(&sigma));
        assert!(equiv(&conj_quotient(&aa_star(), &u).unwrap(), &aa_star()));
        assert!(equiv(&conj_quotient(&aa_star(), &e).unwrap(), &u));
        assert!(equiv(&par_quotient(&just_a(), &e).unwrap(), &u));
        let q = conj_quotient(&e, &just_a()).unwrap();
        assert!(equiv(&q, &complement(&just_a()).unwrap()));
        assert_eq!(q.words_upto(3), words(&["", "aa", "aaa"]));
    }

    #[test]
    fn determinization_respects_cap() {
        // (a|b)* a (a|b)^k needs 2^(k+1) subset states.
        let sigma = Alphabet::new(["a", "b"]).unwrap();
        let k = 12;
        let mut trans = vec![(0, "a", 0), (0, "b", 0), (0, "a", 1)];
        for i in 1..=k {
            trans.push((i, "a", i + 1));
            trans.push((i, "b", i + 1));
        }
        let nfa = Nfa::build(&sigma, k + 2, &[0], &[k + 1], &trans).unwrap();
        assert_eq!(nfa.determinize(), Err(SpecError::StateBlowUp { cap: DEFAULT_DET_CAP }));
        let small = Nfa::build(&sigma, 4, &[0], &[3], &trans[..7]).unwrap();
        assert_eq!(small.determinize().unwrap().states().len(), 8);
    }

    #[test]
    fn invalid_construction_rejected() {
        let sigma = sigma_a();
        assert!(Nfa::build(&sigma, 1, &[], &[], &[]).is_err());
        assert!(Nfa::build(&sigma, 1, &[0], &[1], &[]).is_err());
        assert!(Nfa::build(&sigma, 1, &[0], &[], &[(0, "b", 0)]).is_err());
        assert!(Nfa::build(&sigma, 1, &[0], &[], &[(0, "a", 3)]).is_err());
    }
}
