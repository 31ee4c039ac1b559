//! Modal transition systems under modal refinement.
//!
//! `⊥` (the inconsistent specification) is an explicit value so that
//! conjunction stays total when pruning empties a product.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::algebra::Theory;
use crate::alphabet::{fresh_names, Alphabet};
use crate::error::{Result, SpecError};

type Edge = (usize, usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mts {
    alphabet: Alphabet,
    states: Vec<String>,
    initial: BTreeSet<usize>,
    may: BTreeSet<Edge>,
    must: BTreeSet<Edge>,
    inconsistent: bool,
}

impl Mts {
    /// Validates `must ⊆ may` and index bounds. `must` edges are added to
    /// `may` if missing.
    pub fn new(
        alphabet: Alphabet,
        states: Vec<String>,
        initial: BTreeSet<usize>,
        may: BTreeSet<Edge>,
        must: BTreeSet<Edge>,
    ) -> Result<Self> {
        let n = states.len();
        if initial.is_empty() {
            return Err(SpecError::Invalid("no initial state".into()));
        }
        if initial.iter().any(|s| *s >= n) {
            return Err(SpecError::Invalid("undeclared initial state".into()));
        }
        let mut may = may;
        may.extend(must.iter().copied());
        if may.iter().any(|&(s, a, t)| s >= n || t >= n || a >= alphabet.len()) {
            return Err(SpecError::Invalid("transition references undeclared state or symbol".into()));
        }
        Ok(Mts { alphabet, states, initial, may, must, inconsistent: false })
    }

    /// States `s0..s{n-1}`; edges given as `(source, symbol, target, is_must)`.
    pub fn build(
        alphabet: &Alphabet,
        states: usize,
        initial: &[usize],
        edges: &[(usize, &str, usize, bool)],
    ) -> Result<Self> {
        let mut may = BTreeSet::new();
        let mut must = BTreeSet::new();
        for &(s, a, t, is_must) in edges {
            let a = alphabet
                .index_of(a)
                .ok_or_else(|| SpecError::Invalid(format!("undeclared action `{a}`")))?;
            may.insert((s, a, t));
            if is_must {
                must.insert((s, a, t));
            }
        }
        Mts::new(alphabet.clone(), fresh_names("s", states), initial.iter().copied().collect(), may, must)
    }

    /// Single state with a may self-loop on every action and no musts.
    pub fn universal(alphabet: &Alphabet) -> Mts {
        Mts {
            alphabet: alphabet.clone(),
            states: vec!["u".into()],
            initial: BTreeSet::from([0]),
            may: (0..alphabet.len()).map(|a| (0, a, 0)).collect(),
            must: BTreeSet::new(),
            inconsistent: false,
        }
    }

    /// The canonical inconsistent specification `⊥`.
    pub fn bottom(alphabet: &Alphabet) -> Mts {
        Mts {
            alphabet: alphabet.clone(),
            states: Vec::new(),
            initial: BTreeSet::new(),
            may: BTreeSet::new(),
            must: BTreeSet::new(),
            inconsistent: true,
        }
    }

    pub fn is_bottom(&self) -> bool {
        self.inconsistent
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

    pub fn may(&self) -> &BTreeSet<Edge> {
        &self.may
    }

    pub fn must(&self) -> &BTreeSet<Edge> {
        &self.must
    }

    /// At most one may-successor per state and action. Initial-state sets
    /// are allowed.
    pub fn is_deterministic(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.may.iter().all(|&(s, a, _)| seen.insert((s, a)))
    }

    fn may_succ(&self) -> HashMap<(usize, usize), usize> {
        self.may.iter().map(|&(s, a, t)| ((s, a), t)).collect()
    }

    fn require_deterministic(&self) -> Result<()> {
        if self.is_deterministic() {
            Ok(())
        } else {
            Err(SpecError::Nondeterministic)
        }
    }
}

/// Modal refinement: `⊥` refines everything, nothing else refines `⊥`;
/// otherwise the greatest relation where mays of the left are matched by
/// mays of the right and musts of the right by musts of the left, relating
/// every initial state of `a` to some initial state of `b`.
pub fn refines(a: &Mts, b: &Mts) -> Result<bool> {
    a.alphabet.check_same(&b.alphabet)?;
    if a.inconsistent {
        return Ok(true);
    }
    if b.inconsistent {
        return Ok(false);
    }
    let (na, nb) = (a.states.len(), b.states.len());
    let sigma = a.alphabet.len();
    let succ = |edges: &BTreeSet<Edge>, n: usize| {
        let mut out = vec![vec![Vec::new(); sigma]; n];
        for &(s, x, t) in edges {
            out[s][x].push(t);
        }
        out
    };
    let (a_may, a_must) = (succ(&a.may, na), succ(&a.must, na));
    let (b_may, b_must) = (succ(&b.may, nb), succ(&b.must, nb));

    let mut rel = vec![vec![true; nb]; na];
    loop {
        let mut changed = false;
        for s in 0..na {
            for t in 0..nb {
                if !rel[s][t] {
                    continue;
                }
                let ok = (0..sigma).all(|x| {
                    a_may[s][x]
                        .iter()
                        .all(|&s2| b_may[t][x].iter().any(|&t2| rel[s2][t2]))
                        && b_must[t][x]
                            .iter()
                            .all(|&t2| a_must[s][x].iter().any(|&s2| rel[s2][t2]))
                });
                if !ok {
                    rel[s][t] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(a.initial.iter().all(|&s| b.initial.iter().any(|&t| rel[s][t])))
}

/// Removes the least superset of `bad` closed under "has a must-transition
/// into the set", together with every may-transition into it. Returns `⊥`
/// when every initial state is removed.
pub fn prune(a: &Mts, bad: &BTreeSet<usize>) -> Mts {
    if a.inconsistent {
        return a.clone();
    }
    let mut removed = vec![false; a.states.len()];
    for &s in bad {
        removed[s] = true;
    }
    loop {
        let mut changed = false;
        for &(s, _, t) in &a.must {
            if removed[t] && !removed[s] {
                removed[s] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if a.initial.iter().all(|&s| removed[s]) {
        return Mts::bottom(&a.alphabet);
    }
    let mut renumber = vec![usize::MAX; a.states.len()];
    let mut states = Vec::new();
    for (i, name) in a.states.iter().enumerate() {
        if !removed[i] {
            renumber[i] = states.len();
            states.push(name.clone());
        }
    }
    let keep = |edges: &BTreeSet<Edge>| -> BTreeSet<Edge> {
        edges
            .iter()
            .filter(|&&(s, _, t)| !removed[s] && !removed[t])
            .map(|&(s, x, t)| (renumber[s], x, renumber[t]))
            .collect()
    };
    Mts {
        alphabet: a.alphabet.clone(),
        initial: a.initial.iter().filter(|&&s| !removed[s]).map(|&s| renumber[s]).collect(),
        may: keep(&a.may),
        must: keep(&a.must),
        states,
        inconsistent: false,
    }
}

/// Reachable pair product. `edge(must_a, must_b)` decides the modality of a
/// synchronised step (`None` drops it, `Some(is_must)` keeps it);
/// `conflict` marks pairs that are locally inconsistent.
struct Product {
    pairs: Vec<(usize, usize)>,
    initial: BTreeSet<usize>,
    may: BTreeSet<Edge>,
    must: BTreeSet<Edge>,
    locally_bad: BTreeSet<usize>,
}

fn pair_product(a: &Mts, b: &Mts, must_rule: impl Fn(bool, bool) -> bool, track_conflicts: bool) -> Product {
    let (sa, sb) = (a.may_succ(), b.may_succ());
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
    let (mut may, mut must, mut locally_bad) = (BTreeSet::new(), BTreeSet::new(), BTreeSet::new());
    let mut i = 0;
    while i < pairs.len() {
        let (s, t) = pairs[i];
        for x in 0..a.alphabet.len() {
            match (sa.get(&(s, x)), sb.get(&(t, x))) {
                (Some(&s2), Some(&t2)) => {
                    let j = *index.entry((s2, t2)).or_insert_with(|| {
                        pairs.push((s2, t2));
                        pairs.len() - 1
                    });
                    may.insert((i, x, j));
                    if must_rule(a.must.contains(&(s, x, s2)), b.must.contains(&(t, x, t2))) {
                        must.insert((i, x, j));
                    }
                }
                (Some(&s2), None) if track_conflicts && a.must.contains(&(s, x, s2)) => {
                    locally_bad.insert(i);
                }
                (None, Some(&t2)) if track_conflicts && b.must.contains(&(t, x, t2)) => {
                    locally_bad.insert(i);
                }
                _ => {}
            }
        }
        i += 1;
    }
    Product { pairs, initial, may, must, locally_bad }
}

impl Product {
    fn into_mts(self, alphabet: &Alphabet) -> Mts {
        Mts {
            alphabet: alphabet.clone(),
            states: fresh_names("q", self.pairs.len()),
            initial: self.initial,
            may: self.may,
            must: self.must,
            inconsistent: false,
        }
    }
}

/// Greatest lower bound of two deterministic modal specifications.
pub fn conjoin(a: &Mts, b: &Mts) -> Result<Mts> {
    a.alphabet.check_same(&b.alphabet)?;
    a.require_deterministic()?;
    b.require_deterministic()?;
    if a.inconsistent || b.inconsistent {
        return Ok(Mts::bottom(&a.alphabet));
    }
    let product = pair_product(a, b, |x, y| x || y, true);
    let bad = product.locally_bad.clone();
    Ok(prune(&product.into_mts(&a.alphabet), &bad))
}

/// How a synchronised step of a composition gets its `must` modality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ComposeRule {
    /// must iff both sides must
    #[default]
    Meet,
    /// must iff at least one side must (both allow the step)
    Join,
}

impl ComposeRule {
    pub fn as_str(self) -> &'static str {
        match self {
            ComposeRule::Meet => "meet",
            ComposeRule::Join => "join",
        }
    }
}

impl fmt::Display for ComposeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ComposeRule {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "meet" => Ok(ComposeRule::Meet),
            "join" => Ok(ComposeRule::Join),
            other => Err(format!("unknown composition rule `{other}`")),
        }
    }
}

/// Synchronous product without inconsistency pruning.
pub fn compose(a: &Mts, b: &Mts, rule: ComposeRule) -> Result<Mts> {
    a.alphabet.check_same(&b.alphabet)?;
    a.require_deterministic()?;
    b.require_deterministic()?;
    if a.inconsistent || b.inconsistent {
        return Ok(Mts::bottom(&a.alphabet));
    }
    let product = match rule {
        ComposeRule::Meet => pair_product(a, b, |x, y| x && y, false),
        ComposeRule::Join => pair_product(a, b, |x, y| x || y, false),
    };
    Ok(product.into_mts(&a.alphabet))
}

/// Disjoint union with both initial sets; `⊥` is neutral.
pub fn disjoin(a: &Mts, b: &Mts) -> Result<Mts> {
    a.alphabet.check_same(&b.alphabet)?;
    if a.inconsistent {
        return Ok(b.clone());
    }
    if b.inconsistent {
        return Ok(a.clone());
    }
    let off = a.states.len();
    fn shift(edges: &BTreeSet<Edge>, off: usize) -> impl Iterator<Item = Edge> + '_ {
        edges.iter().map(move |&(s, x, t)| (s + off, x, t + off))
    }
    Ok(Mts {
        alphabet: a.alphabet.clone(),
        states: fresh_names("q", off + b.states.len()),
        initial: a.initial.iter().copied().chain(b.initial.iter().map(|s| s + off)).collect(),
        may: a.may.iter().copied().chain(shift(&b.may, off)).collect(),
        must: a.must.iter().copied().chain(shift(&b.must, off)).collect(),
        inconsistent: false,
    })
}

/// The MTS theory over one alphabet with a chosen composition rule.
#[derive(Debug, Clone)]
pub struct MtsTheory {
    pub alphabet: Alphabet,
    pub rule: ComposeRule,
}

impl MtsTheory {
    pub fn new(alphabet: Alphabet, rule: ComposeRule) -> Self {
        MtsTheory { alphabet, rule }
    }
}

impl Theory for MtsTheory {
    type Spec = Mts;

    fn name(&self) -> String {
        format!("mts/{}", self.rule)
    }

    fn refines(&self, a: &Mts, b: &Mts) -> Result<bool> {
        refines(a, b)
    }

    fn conjoin(&self, a: &Mts, b: &Mts) -> Result<Mts> {
        conjoin(a, b)
    }

    fn compose(&self, a: &Mts, b: &Mts) -> Result<Mts> {
        compose(a, b, self.rule)
    }

    fn universal(&self) -> Result<Mts> {
        Ok(Mts::universal(&self.alphabet))
    }

    fn null_spec(&self) -> Result<Mts> {
        Ok(Mts::bottom(&self.alphabet))
    }

    fn disjoin(&self, a: &Mts, b: &Mts) -> Result<Mts> {
        disjoin(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma() -> Alphabet {
        Alphabet::new(["a"]).unwrap()
    }

    fn must_loop() -> Mts {
        Mts::build(&sigma(), 1, &[0], &[(0, "a", 0, true)]).unwrap()
    }

    fn may_loop() -> Mts {
        Mts::build(&sigma(), 1, &[0], &[(0, "a", 0, false)]).unwrap()
    }

    fn stuck() -> Mts {
        Mts::build(&sigma(), 1, &[0], &[]).unwrap()
    }

    fn equiv(a: &Mts, b: &Mts) -> bool {
        refines(a, b).unwrap() && refines(b, a).unwrap()
    }

    #[test]
    fn refinement_examples() {
        let u = Mts::universal(&sigma());
        let bot = Mts::bottom(&sigma());
        assert!(refines(&bot, &must_loop()).unwrap());
        assert!(refines(&must_loop(), &u).unwrap());
        assert!(!refines(&u, &must_loop()).unwrap());
        assert!(!refines(&u, &bot).unwrap());
        assert!(refines(&stuck(), &may_loop()).unwrap());
        assert!(!refines(&stuck(), &must_loop()).unwrap());
    }

    #[test]
    fn conjunction_examples() {
        let conj = conjoin(&may_loop(), &must_loop()).unwrap();
        assert!(equiv(&conj, &must_loop()));
        assert!(equiv(&conjoin(&must_loop(), &Mts::universal(&sigma())).unwrap(), &must_loop()));
        let chain = Mts::build(&sigma(), 2, &[0], &[(0, "a", 1, true)]).unwrap();
        assert!(conjoin(&chain, &stuck()).unwrap().is_bottom());
        assert!(conjoin(&must_loop(), &Mts::bottom(&sigma())).unwrap().is_bottom());
    }

    #[test]
    fn conjunction_propagates_inconsistency_backwards() {
        let sigma = Alphabet::new(["a", "b"]).unwrap();
        // s0 -must a-> s1 -must b-> s1 against t0 -may a-> t1 with no b at t1.
        let left = Mts::build(&sigma, 2, &[0], &[(0, "a", 1, true), (1, "b", 1, true)]).unwrap();
        let right = Mts::build(&sigma, 2, &[0], &[(0, "a", 1, false)]).unwrap();
        assert!(conjoin(&left, &right).unwrap().is_bottom());
        // the same conflict behind a may edge only deletes that edge
        let left = Mts::build(&sigma, 2, &[0], &[(0, "a", 1, false), (1, "b", 1, true)]).unwrap();
        let conj = conjoin(&left, &right).unwrap();
        assert_eq!(conj.states().len(), 1);
        assert!(conj.may().is_empty());
    }

    #[test]
    fn conjunction_requires_determinism() {
        let nondet = Mts::build(&sigma(), 2, &[0], &[(0, "a", 0, false), (0, "a", 1, false)]).unwrap();
        assert_eq!(conjoin(&nondet, &may_loop()), Err(SpecError::Nondeterministic));
        assert_eq!(compose(&nondet, &may_loop(), ComposeRule::Meet), Err(SpecError::Nondeterministic));
    }

    #[test]
    fn composition_rules() {
        let u = Mts::universal(&sigma());
        let meet = compose(&must_loop(), &u, ComposeRule::Meet).unwrap();
        assert!(equiv(&meet, &may_loop()));
        assert!(!refines(&meet, &must_loop()).unwrap());
        let join = compose(&must_loop(), &u, ComposeRule::Join).unwrap();
        assert!(refines(&join, &must_loop()).unwrap());
        for rule in [ComposeRule::Meet, ComposeRule::Join] {
            let c = compose(&may_loop(), &may_loop(), rule).unwrap();
            assert_eq!(c.may().len(), 1);
            assert!(c.must().is_empty());
            assert!(compose(&Mts::bottom(&sigma()), &may_loop(), rule).unwrap().is_bottom());
        }
    }

    #[test]
    fn disjunction_examples() {
        let bot = Mts::bottom(&sigma());
        assert_eq!(disjoin(&bot, &must_loop()).unwrap(), must_loop());
        let d = disjoin(&must_loop(), &stuck()).unwrap();
        assert!(refines(&must_loop(), &d).unwrap());
        assert!(refines(&stuck(), &d).unwrap());
        assert_eq!(d.initial().len(), 2);
    }

    #[test]
    fn prune_examples() {
        assert_eq!(prune(&must_loop(), &BTreeSet::new()), must_loop());
        let chain = Mts::build(&sigma(), 2, &[0], &[(0, "a", 1, true)]).unwrap();
        assert!(prune(&chain, &BTreeSet::from([1])).is_bottom());
        let may_chain = Mts::build(&sigma(), 2, &[0], &[(0, "a", 1, false)]).unwrap();
        let pruned = prune(&may_chain, &BTreeSet::from([1]));
        assert_eq!(pruned.states(), ["s0"]);
        assert!(pruned.may().is_empty());
        assert!(!pruned.is_bottom());
    }

    #[test]
    fn universal_and_bottom() {
        let u = Mts::universal(&sigma());
        assert!(refines(&must_loop(), &u).unwrap());
        assert!(conjoin(&must_loop(), &Mts::bottom(&sigma())).unwrap().is_bottom());
        assert!(Mts::new(sigma(), vec![], BTreeSet::new(), BTreeSet::new(), BTreeSet::new()).is_err());
    }
}
