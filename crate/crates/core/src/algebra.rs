//! The abstract specification-theory interface and the catalogue of laws
//! every theory is audited against.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Result, SpecError};

/// One specification theory: a universe of values, a refinement preorder and
/// the operators on it.
///
/// Optional capabilities report [`SpecError::Unsupported`]; partial operators
/// report one of the other "undefined" errors on arguments outside their
/// domain (see [`SpecError::is_undefined`]).
pub trait Theory: Sync {
    type Spec: Clone + fmt::Debug + Send + Sync;

    fn name(&self) -> String;

    fn refines(&self, a: &Self::Spec, b: &Self::Spec) -> Result<bool>;

    fn conjoin(&self, a: &Self::Spec, b: &Self::Spec) -> Result<Self::Spec>;

    fn compose(&self, a: &Self::Spec, b: &Self::Spec) -> Result<Self::Spec>;

    fn composable(&self, _a: &Self::Spec, _b: &Self::Spec) -> bool {
        true
    }

    fn universal(&self) -> Result<Self::Spec> {
        Err(SpecError::Unsupported("universal"))
    }

    fn null_spec(&self) -> Result<Self::Spec> {
        Err(SpecError::Unsupported("null element"))
    }

    fn disjoin(&self, _a: &Self::Spec, _b: &Self::Spec) -> Result<Self::Spec> {
        Err(SpecError::Unsupported("disjunction"))
    }

    /// Largest `X` with `a ∧ X ≤ b`.
    fn conj_quotient(&self, _b: &Self::Spec, _a: &Self::Spec) -> Result<Self::Spec> {
        Err(SpecError::Unsupported("conjunction quotient"))
    }

    /// Largest `X` with `a | X ≤ b`.
    fn par_quotient(&self, _b: &Self::Spec, _a: &Self::Spec) -> Result<Self::Spec> {
        Err(SpecError::Unsupported("composition quotient"))
    }
}

/// Mutual refinement.
pub fn equiv<T: Theory>(theory: &T, a: &T::Spec, b: &T::Spec) -> Result<bool> {
    Ok(theory.refines(a, b)? && theory.refines(b, a)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LawId {
    Refl,
    Trans,
    Univ,
    ConjTotal,
    ConjComm,
    ConjLb,
    ConjGlb,
    ParTotal,
    ParComm,
    Precong,
    ParUnit,
    Thm1,
    ConjQuotDef,
    ParQuotDef,
    Thm3,
    ConjNull,
    DisjLub,
    DisjUb,
    Distrib,
    Thm4Max,
    Thm5Assoc,
    ParIdemp,
    Thm6Assoc,
}

impl LawId {
    pub const ALL: [LawId; 23] = [
        LawId::Refl,
        LawId::Trans,
        LawId::Univ,
        LawId::ConjTotal,
        LawId::ConjComm,
        LawId::ConjLb,
        LawId::ConjGlb,
        LawId::ParTotal,
        LawId::ParComm,
        LawId::Precong,
        LawId::ParUnit,
        LawId::Thm1,
        LawId::ConjQuotDef,
        LawId::ParQuotDef,
        LawId::Thm3,
        LawId::ConjNull,
        LawId::DisjLub,
        LawId::DisjUb,
        LawId::Distrib,
        LawId::Thm4Max,
        LawId::Thm5Assoc,
        LawId::ParIdemp,
        LawId::Thm6Assoc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LawId::Refl => "REFL",
            LawId::Trans => "TRANS",
            LawId::Univ => "UNIV",
            LawId::ConjTotal => "CONJ_TOTAL",
            LawId::ConjComm => "CONJ_COMM",
            LawId::ConjLb => "CONJ_LB",
            LawId::ConjGlb => "CONJ_GLB",
            LawId::ParTotal => "PAR_TOTAL",
            LawId::ParComm => "PAR_COMM",
            LawId::Precong => "PRECONG",
            LawId::ParUnit => "PAR_UNIT",
            LawId::Thm1 => "THM1",
            LawId::ConjQuotDef => "CONJ_QUOT_DEF",
            LawId::ParQuotDef => "PAR_QUOT_DEF",
            LawId::Thm3 => "THM3",
            LawId::ConjNull => "CONJ_NULL",
            LawId::DisjLub => "DISJ_LUB",
            LawId::DisjUb => "DISJ_UB",
            LawId::Distrib => "DISTRIB",
            LawId::Thm4Max => "THM4_MAX",
            LawId::Thm5Assoc => "THM5_ASSOC",
            LawId::ParIdemp => "PAR_IDEMP",
            LawId::Thm6Assoc => "THM6_ASSOC",
        }
    }

    /// Number of specifications the law quantifies over.
    pub fn arity(self) -> usize {
        match self {
            LawId::Refl | LawId::Univ | LawId::ParUnit | LawId::ConjNull | LawId::ParIdemp => 1,
            LawId::ConjTotal
            | LawId::ConjComm
            | LawId::ConjLb
            | LawId::ParTotal
            | LawId::ParComm
            | LawId::Thm1
            | LawId::ConjQuotDef
            | LawId::ParQuotDef
            | LawId::Thm3
            | LawId::DisjUb => 2,
            LawId::Trans
            | LawId::ConjGlb
            | LawId::Precong
            | LawId::DisjLub
            | LawId::Distrib
            | LawId::Thm4Max
            | LawId::Thm5Assoc
            | LawId::Thm6Assoc => 3,
        }
    }

    /// Laws of the form `premise ⇒ conclusion`, whose evidence is only
    /// counted when the premise holds.
    pub fn is_implication(self) -> bool {
        matches!(
            self,
            LawId::Trans | LawId::ConjGlb | LawId::Precong | LawId::DisjLub | LawId::Thm4Max
        )
    }
}

pub fn law_arity(law: LawId) -> usize {
    law.arity()
}

impl fmt::Display for LawId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LawId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        LawId::ALL
            .into_iter()
            .find(|law| law.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown law `{s}`"))
    }
}

impl Serialize for LawId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// Outcome of one law instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    /// The premise of an implication law was false.
    Vacuous,
    /// A capability is missing or an operator is undefined on the tuple.
    Inapplicable,
}

impl Verdict {
    pub fn is_false(self) -> bool {
        self == Verdict::False
    }
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }
}

/// Evaluates one instance of `law`. Undefined operations yield
/// [`Verdict::Inapplicable`]; only non-undefinedness errors (state blow-up,
/// invalid values) are returned as `Err`.
///
/// # Panics
///
/// If `args.len()` differs from the law's arity.
pub fn law_predicate<T: Theory>(theory: &T, law: LawId, args: &[T::Spec]) -> Result<Verdict> {
    assert_eq!(args.len(), law.arity(), "wrong number of arguments for {law}");
    match evaluate(theory, law, args) {
        Ok(v) => Ok(v),
        Err(e) if e.is_undefined() => Ok(Verdict::Inapplicable),
        Err(e) => Err(e),
    }
}

fn implies(premise: bool, conclusion: impl FnOnce() -> Result<bool>) -> Result<Verdict> {
    if premise {
        conclusion().map(Verdict::from)
    } else {
        Ok(Verdict::Vacuous)
    }
}

/// Totality laws: an operator that is merely partial fails the law, a missing
/// operator makes it inapplicable.
fn total<S>(outcome: Result<S>) -> Result<Verdict> {
    match outcome {
        Ok(_) => Ok(Verdict::True),
        Err(SpecError::Unsupported(what)) => Err(SpecError::Unsupported(what)),
        Err(e) if e.is_undefined() => Ok(Verdict::False),
        Err(e) => Err(e),
    }
}

fn evaluate<T: Theory>(t: &T, law: LawId, args: &[T::Spec]) -> Result<Verdict> {
    let a = &args[0];
    match law {
        LawId::Refl => t.refines(a, a).map(Verdict::from),
        LawId::Trans => {
            let (b, c) = (&args[1], &args[2]);
            implies(t.refines(a, b)? && t.refines(b, c)?, || t.refines(a, c))
        }
        LawId::Univ => t.refines(a, &t.universal()?).map(Verdict::from),
        LawId::ConjTotal => total(t.conjoin(a, &args[1])),
        LawId::ConjComm => {
            let b = &args[1];
            t.refines(&t.conjoin(a, b)?, &t.conjoin(b, a)?).map(Verdict::from)
        }
        LawId::ConjLb => {
            let b = &args[1];
            let ab = t.conjoin(a, b)?;
            Ok((t.refines(&ab, a)? && t.refines(&ab, b)?).into())
        }
        LawId::ConjGlb => {
            // args = (C, A, B): C ≤ A and C ≤ B imply C ≤ A ∧ B
            let (x, y) = (&args[1], &args[2]);
            let meet = t.conjoin(x, y)?;
            implies(t.refines(a, x)? && t.refines(a, y)?, || t.refines(a, &meet))
        }
        LawId::ParTotal => {
            if !t.composable(a, &args[1]) {
                return Ok(Verdict::False);
            }
            total(t.compose(a, &args[1]))
        }
        LawId::ParComm => {
            let b = &args[1];
            t.refines(&t.compose(a, b)?, &t.compose(b, a)?).map(Verdict::from)
        }
        LawId::Precong => {
            let (b, c) = (&args[1], &args[2]);
            if !t.refines(a, b)? {
                return Ok(Verdict::Vacuous);
            }
            t.refines(&t.compose(a, c)?, &t.compose(b, c)?).map(Verdict::from)
        }
        LawId::ParUnit => {
            let u = t.universal()?;
            t.refines(&t.compose(a, &u)?, a).map(Verdict::from)
        }
        LawId::Thm1 => {
            let b = &args[1];
            t.refines(&t.compose(a, b)?, &t.conjoin(a, b)?).map(Verdict::from)
        }
        LawId::ConjQuotDef => {
            // args = (A, B): A ∧ (B \∧ A) ≤ B
            let b = &args[1];
            let q = t.conj_quotient(b, a)?;
            t.refines(&t.conjoin(a, &q)?, b).map(Verdict::from)
        }
        LawId::ParQuotDef => {
            let b = &args[1];
            let q = t.par_quotient(b, a)?;
            t.refines(&t.compose(a, &q)?, b).map(Verdict::from)
        }
        LawId::Thm3 => {
            let b = &args[1];
            t.refines(&t.conj_quotient(b, a)?, &t.par_quotient(b, a)?).map(Verdict::from)
        }
        LawId::ConjNull => {
            let null = t.null_spec()?;
            t.refines(&t.conjoin(a, &null)?, &null).map(Verdict::from)
        }
        LawId::DisjLub => {
            let (b, c) = (&args[1], &args[2]);
            let join = t.disjoin(a, b)?;
            implies(t.refines(a, c)? && t.refines(b, c)?, || t.refines(&join, c))
        }
        LawId::DisjUb => {
            let b = &args[1];
            let join = t.disjoin(a, b)?;
            Ok((t.refines(a, &join)? && t.refines(b, &join)?).into())
        }
        LawId::Distrib => {
            // args = (A, X1, X2). The law quantifies over every B with
            // (A∧X1) ∨ (A∧X2) ≤ B; the tightest such B is the left side itself,
            // and every other instance follows from it by transitivity.
            let (x1, x2) = (&args[1], &args[2]);
            let split = t.disjoin(&t.conjoin(a, x1)?, &t.conjoin(a, x2)?)?;
            let joined = t.conjoin(a, &t.disjoin(x1, x2)?)?;
            t.refines(&joined, &split).map(Verdict::from)
        }
        LawId::Thm4Max => {
            // args = (A, B, X): A ∧ X ≤ B implies X ≤ B \∧ A
            let (b, x) = (&args[1], &args[2]);
            let q = t.conj_quotient(b, a)?;
            implies(t.refines(&t.conjoin(a, x)?, b)?, || t.refines(x, &q))
        }
        LawId::Thm5Assoc => {
            let (b, c) = (&args[1], &args[2]);
            let left = t.conjoin(&t.conjoin(a, b)?, c)?;
            let right = t.conjoin(a, &t.conjoin(b, c)?)?;
            t.refines(&left, &right).map(Verdict::from)
        }
        LawId::ParIdemp => t.refines(a, &t.compose(a, a)?).map(Verdict::from),
        LawId::Thm6Assoc => {
            let (b, c) = (&args[1], &args[2]);
            let left = t.compose(&t.compose(a, b)?, c)?;
            let right = t.compose(a, &t.compose(b, c)?)?;
            t.refines(&left, &right).map(Verdict::from)
        }
    }
}
