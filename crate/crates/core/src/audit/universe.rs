//! Per-theory generation, enumeration and shrinking.

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::Theory;
use crate::alphabet::fresh_names;
use crate::fa::{FaTheory, Nfa};
use crate::format::SpecValue;
use crate::ia::{self, IaTheory, InterfaceAutomaton, Signature};
use crate::mts::{Mts, MtsTheory};

/// The hooks the harness needs on top of a [`Theory`].
pub trait Universe: Theory {
    /// A structurally valid random specification with at most `max_states`
    /// states (`max_states ≥ 1`).
    fn generate(&self, rng: &mut ChaCha8Rng, max_states: usize) -> Self::Spec;

    /// Every structurally valid specification with at most `max_states`
    /// states, each exactly once, in canonical order.
    fn enumerate(&self, max_states: usize) -> Vec<Self::Spec>;

    /// Single-step reductions of `spec`, in canonical order.
    fn reductions(&self, spec: &Self::Spec) -> Vec<Self::Spec>;

    fn to_value(&self, spec: &Self::Spec) -> SpecValue;

    fn from_value(&self, value: SpecValue) -> Option<Self::Spec>;
}

/// Iterates `0..base^digits` as little-endian digit vectors.
fn mixed_radix(base: usize, digits: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = base.checked_pow(digits as u32).expect("enumeration too large");
    (0..total).map(move |mut code| {
        (0..digits)
            .map(|_| {
                let d = code % base;
                code /= base;
                d
            })
            .collect()
    })
}

/// Nonempty subsets of `0..n`, by bitmask.
fn nonempty_subsets(n: usize) -> impl Iterator<Item = BTreeSet<usize>> {
    (1..1usize << n).map(move |mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
}

fn subsets(n: usize) -> impl Iterator<Item = BTreeSet<usize>> {
    std::iter::once(BTreeSet::new()).chain(nonempty_subsets(n))
}

/// Maps kept state indices after deleting state `gone`.
fn shift_down(s: usize, gone: usize) -> usize {
    if s > gone {
        s - 1
    } else {
        s
    }
}

fn random_initial(rng: &mut ChaCha8Rng, n: usize, extra: f64) -> BTreeSet<usize> {
    (0..n).filter(|&s| s == 0 || rng.gen_bool(extra)).collect()
}

impl Universe for FaTheory {
    fn generate(&self, rng: &mut ChaCha8Rng, max_states: usize) -> Nfa {
        let n = rng.gen_range(1..=max_states);
        let initial = random_initial(rng, n, 0.2);
        let accepting = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        let mut transitions = BTreeSet::new();
        for s in 0..n {
            for a in 0..self.alphabet.len() {
                for t in 0..n {
                    if rng.gen_bool(0.4) {
                        transitions.insert((s, a, t));
                    }
                }
            }
        }
        Nfa::new(self.alphabet.clone(), fresh_names("s", n), initial, accepting, transitions)
            .expect("generated automaton is valid")
    }

    fn enumerate(&self, max_states: usize) -> Vec<Nfa> {
        let k = self.alphabet.len();
        let mut out = Vec::new();
        for n in 1..=max_states {
            let triples: Vec<(usize, usize, usize)> = (0..n)
                .flat_map(|s| (0..k).flat_map(move |a| (0..n).map(move |t| (s, a, t))))
                .collect();
            for initial in nonempty_subsets(n) {
                for accepting in subsets(n) {
                    for bits in mixed_radix(2, triples.len()) {
                        let transitions =
                            triples.iter().zip(&bits).filter(|(_, b)| **b == 1).map(|(t, _)| *t).collect();
                        out.push(
                            Nfa::new(
                                self.alphabet.clone(),
                                fresh_names("s", n),
                                initial.clone(),
                                accepting.clone(),
                                transitions,
                            )
                            .expect("enumerated automaton is valid"),
                        );
                    }
                }
            }
        }
        out
    }

    fn reductions(&self, nfa: &Nfa) -> Vec<Nfa> {
        let rebuild = |initial: BTreeSet<usize>, accepting, transitions, n: usize| {
            Nfa::new(nfa.alphabet().clone(), fresh_names("s", n), initial, accepting, transitions).ok()
        };
        let n = nfa.states().len();
        let mut out = Vec::new();
        for edge in nfa.transitions() {
            let mut ts = nfa.transitions().clone();
            ts.remove(edge);
            out.extend(rebuild(nfa.initial().clone(), nfa.accepting().clone(), ts, n));
        }
        for gone in (0..n).filter(|s| !nfa.initial().contains(s)) {
            let keep = |set: &BTreeSet<usize>| -> BTreeSet<usize> {
                set.iter().filter(|&&s| s != gone).map(|&s| shift_down(s, gone)).collect()
            };
            let ts = nfa
                .transitions()
                .iter()
                .filter(|&&(s, _, t)| s != gone && t != gone)
                .map(|&(s, a, t)| (shift_down(s, gone), a, shift_down(t, gone)))
                .collect();
            out.extend(rebuild(keep(nfa.initial()), keep(nfa.accepting()), ts, n - 1));
        }
        for &(s, a, t) in nfa.transitions() {
            for lower in 0..t {
                let mut ts = nfa.transitions().clone();
                ts.remove(&(s, a, t));
                if ts.insert((s, a, lower)) {
                    out.extend(rebuild(nfa.initial().clone(), nfa.accepting().clone(), ts, n));
                }
            }
        }
        out
    }

    fn to_value(&self, spec: &Nfa) -> SpecValue {
        SpecValue::Nfa(spec.clone())
    }

    fn from_value(&self, value: SpecValue) -> Option<Nfa> {
        match value {
            SpecValue::Nfa(v) => Some(v),
            _ => None,
        }
    }
}

/// Per (state, action) slot of a deterministic MTS: nothing, or a may or
/// must edge to some target.
#[derive(Clone, Copy)]
enum Slot {
    Empty,
    May(usize),
    Must(usize),
}

fn mts_from_slots(theory: &MtsTheory, n: usize, initial: BTreeSet<usize>, slots: &[Slot]) -> Mts {
    let k = theory.alphabet.len();
    let (mut may, mut must) = (BTreeSet::new(), BTreeSet::new());
    for (i, slot) in slots.iter().enumerate() {
        let (s, a) = (i / k, i % k);
        match *slot {
            Slot::Empty => {}
            Slot::May(t) => {
                may.insert((s, a, t));
            }
            Slot::Must(t) => {
                may.insert((s, a, t));
                must.insert((s, a, t));
            }
        }
    }
    Mts::new(theory.alphabet.clone(), fresh_names("s", n), initial, may, must).expect("slots yield a valid MTS")
}

impl Universe for MtsTheory {
    fn generate(&self, rng: &mut ChaCha8Rng, max_states: usize) -> Mts {
        if rng.gen_bool(0.05) {
            return Mts::bottom(&self.alphabet);
        }
        let n = rng.gen_range(1..=max_states);
        let initial = random_initial(rng, n, 0.15);
        let slots: Vec<Slot> = (0..n * self.alphabet.len())
            .map(|_| match rng.gen_range(0..10) {
                0..=3 => Slot::Empty,
                4..=7 => Slot::May(rng.gen_range(0..n)),
                _ => Slot::Must(rng.gen_range(0..n)),
            })
            .collect();
        mts_from_slots(self, n, initial, &slots)
    }

    fn enumerate(&self, max_states: usize) -> Vec<Mts> {
        if max_states == 0 {
            return Vec::new();
        }
        let mut out = vec![Mts::bottom(&self.alphabet)];
        for n in 1..=max_states {
            let choices = 1 + 2 * n;
            for initial in nonempty_subsets(n) {
                for code in mixed_radix(choices, n * self.alphabet.len()) {
                    let slots: Vec<Slot> = code
                        .iter()
                        .map(|&c| match c {
                            0 => Slot::Empty,
                            c if c <= n => Slot::May(c - 1),
                            c => Slot::Must(c - 1 - n),
                        })
                        .collect();
                    out.push(mts_from_slots(self, n, initial.clone(), &slots));
                }
            }
        }
        out
    }

    fn reductions(&self, mts: &Mts) -> Vec<Mts> {
        if mts.is_bottom() {
            return Vec::new();
        }
        let n = mts.states().len();
        let rebuild = |initial: BTreeSet<usize>, may, must, n: usize| {
            Mts::new(mts.alphabet().clone(), fresh_names("s", n), initial, may, must).ok()
        };
        let mut out = Vec::new();
        for edge in mts.may() {
            let (mut may, mut must) = (mts.may().clone(), mts.must().clone());
            may.remove(edge);
            must.remove(edge);
            out.extend(rebuild(mts.initial().clone(), may, must, n));
        }
        for edge in mts.must() {
            let mut must = mts.must().clone();
            must.remove(edge);
            out.extend(rebuild(mts.initial().clone(), mts.may().clone(), must, n));
        }
        for gone in (0..n).filter(|s| !mts.initial().contains(s)) {
            let keep = |edges: &BTreeSet<(usize, usize, usize)>| -> BTreeSet<(usize, usize, usize)> {
                edges
                    .iter()
                    .filter(|&&(s, _, t)| s != gone && t != gone)
                    .map(|&(s, a, t)| (shift_down(s, gone), a, shift_down(t, gone)))
                    .collect()
            };
            let initial = mts.initial().iter().map(|&s| shift_down(s, gone)).collect();
            out.extend(rebuild(initial, keep(mts.may()), keep(mts.must()), n - 1));
        }
        for &(s, a, t) in mts.may() {
            let is_must = mts.must().contains(&(s, a, t));
            for lower in 0..t {
                let (mut may, mut must) = (mts.may().clone(), mts.must().clone());
                may.remove(&(s, a, t));
                must.remove(&(s, a, t));
                may.insert((s, a, lower));
                if is_must {
                    must.insert((s, a, lower));
                }
                out.extend(rebuild(mts.initial().clone(), may, must, n));
            }
        }
        out
    }

    fn to_value(&self, spec: &Mts) -> SpecValue {
        SpecValue::Mts(spec.clone())
    }

    fn from_value(&self, value: SpecValue) -> Option<Mts> {
        match value {
            SpecValue::Mts(v) => Some(v),
            _ => None,
        }
    }
}

impl IaTheory {
    fn random_signature(&self, rng: &mut ChaCha8Rng) -> Signature {
        let mut sig = Signature::default();
        // Most samples share one fixed signature (first action an
        // input, the rest outputs) so that refinement, which needs equal
        // signatures, is exercised often enough.
        let canonical = rng.gen_bool(0.6);
        for (i, x) in self.actions.iter().enumerate() {
            let kind = if canonical { u8::from(i > 0) + 1 } else { rng.gen_range(0..4) };
            match kind {
                1 => sig.inputs.insert(x.clone()),
                2 => sig.outputs.insert(x.clone()),
                3 => sig.internals.insert(x.clone()),
                _ => false,
            };
        }
        sig
    }
}

fn ia_rebuild(
    sig: Signature,
    n: usize,
    transitions: impl IntoIterator<Item = (usize, String, usize)>,
) -> Option<InterfaceAutomaton> {
    InterfaceAutomaton::new(sig, fresh_names("s", n), 0, transitions).ok()
}

impl Universe for IaTheory {
    fn generate(&self, rng: &mut ChaCha8Rng, max_states: usize) -> InterfaceAutomaton {
        let sig = self.random_signature(rng);
        let n = rng.gen_range(1..=max_states);
        let mut transitions = Vec::new();
        for s in 0..n {
            for x in sig.actions() {
                if rng.gen_bool(0.4) {
                    transitions.push((s, x, rng.gen_range(0..n)));
                }
            }
        }
        ia_rebuild(sig, n, transitions).expect("generated interface is valid")
    }

    fn enumerate(&self, max_states: usize) -> Vec<InterfaceAutomaton> {
        ia::enumerate(&self.actions, max_states)
    }

    fn reductions(&self, ia: &InterfaceAutomaton) -> Vec<InterfaceAutomaton> {
        let n = ia.states().len();
        let edges: Vec<(usize, String, usize)> = ia.transitions().map(|(s, a, t)| (s, a.to_string(), t)).collect();
        let sig = ia.signature().clone();
        let mut out = Vec::new();
        for i in 0..edges.len() {
            let rest = edges.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, e)| e.clone());
            out.extend(ia_rebuild(sig.clone(), n, rest));
        }
        for gone in (0..n).filter(|&s| s != ia.initial()) {
            let rest = edges
                .iter()
                .filter(|(s, _, t)| *s != gone && *t != gone)
                .map(|(s, a, t)| (shift_down(*s, gone), a.clone(), shift_down(*t, gone)));
            out.extend(ia_rebuild(sig.clone(), n - 1, rest));
        }
        for (i, (s, a, t)) in edges.iter().enumerate() {
            for lower in 0..*t {
                let mut next = edges.clone();
                next[i] = (*s, a.clone(), lower);
                out.extend(ia_rebuild(sig.clone(), n, next));
            }
        }
        let used: BTreeSet<&str> = edges.iter().map(|(_, a, _)| a.as_str()).collect();
        for x in sig.actions().iter().filter(|x| !used.contains(x.as_str())) {
            let mut smaller = sig.clone();
            smaller.inputs.remove(x);
            smaller.outputs.remove(x);
            smaller.internals.remove(x);
            out.extend(ia_rebuild(smaller, n, edges.clone()));
        }
        out
    }

    fn to_value(&self, spec: &InterfaceAutomaton) -> SpecValue {
        SpecValue::Ia(spec.clone())
    }

    fn from_value(&self, value: SpecValue) -> Option<InterfaceAutomaton> {
        match value {
            SpecValue::Ia(v) => Some(v),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;

    use super::*;
    use crate::alphabet::Alphabet;
    use crate::mts::ComposeRule;

    #[test]
    fn enumeration_counts() {
        let fa = FaTheory::new(Alphabet::new(["a"]).unwrap());
        assert_eq!(fa.enumerate(1).len(), 4);
        assert_eq!(fa.enumerate(2).len(), 4 + 3 * 4 * 16);
        assert!(fa.enumerate(0).is_empty());
        let fa2 = FaTheory::new(Alphabet::letters(2).unwrap());
        assert_eq!(fa2.enumerate(2).len(), 8 + 3 * 4 * 256);

        let mts = MtsTheory::new(Alphabet::new(["a"]).unwrap(), ComposeRule::Meet);
        let one = mts.enumerate(1);
        assert_eq!(one.len(), 4);
        assert!(one[0].is_bottom());
        assert_eq!(one.iter().filter(|m| !m.must().is_empty()).count(), 1);
        assert_eq!(mts.enumerate(2).len(), 4 + 3 * 25);
        assert!(mts.enumerate(0).is_empty());
    }

    #[test]
    fn generation_is_deterministic_and_valid() {
        let mts = MtsTheory::new(Alphabet::letters(2).unwrap(), ComposeRule::Join);
        for seed in 0..200u64 {
            let mut r1 = ChaCha8Rng::seed_from_u64(seed);
            let mut r2 = ChaCha8Rng::seed_from_u64(seed);
            let (x, y) = (mts.generate(&mut r1, 3), mts.generate(&mut r2, 3));
            assert_eq!(x, y);
            assert!(x.must().is_subset(x.may()));
            assert!(x.is_deterministic());
        }
    }

    #[test]
    fn reductions_shrink_something() {
        let fa = FaTheory::new(Alphabet::new(["a"]).unwrap());
        let nfa = Nfa::build(&fa.alphabet, 2, &[0], &[1], &[(0, "a", 1), (1, "a", 1)]).unwrap();
        let reds = fa.reductions(&nfa);
        // two deletions, one state deletion, retargets of both edges to s0
        assert_eq!(reds.len(), 2 + 1 + 2);
        assert!(reds.iter().all(|r| r.states().len() + r.transitions().len() < 4
            || r.transitions().iter().map(|e| e.2).sum::<usize>() < 2));
    }
}
