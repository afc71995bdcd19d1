//! Deep subtyping `A :< B` with explicit derivations, and shallow subtyping
//! `A :<: B` (reflexivity plus `int :<: rat`, never looking under a
//! constructor).

use std::fmt;

use crate::sexp::{Sexp, SexpError};
use crate::syntax::Type;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SubRule {
    ReflInt,
    ReflBool,
    ReflRat,
    IntRat,
    /// Premises: domain (contravariant), codomain.
    Arr(Box<SubDeriv>, Box<SubDeriv>),
    Prod(Box<SubDeriv>, Box<SubDeriv>),
}

/// A deep subtyping derivation together with the judgment it claims.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubDeriv {
    pub rule: SubRule,
    pub lhs: Type,
    pub rhs: Type,
}

impl SubDeriv {
    pub fn refl_int() -> SubDeriv {
        SubDeriv { rule: SubRule::ReflInt, lhs: Type::Int, rhs: Type::Int }
    }

    pub fn refl_bool() -> SubDeriv {
        SubDeriv { rule: SubRule::ReflBool, lhs: Type::Bool, rhs: Type::Bool }
    }

    pub fn refl_rat() -> SubDeriv {
        SubDeriv { rule: SubRule::ReflRat, lhs: Type::Rat, rhs: Type::Rat }
    }

    pub fn int_rat() -> SubDeriv {
        SubDeriv { rule: SubRule::IntRat, lhs: Type::Int, rhs: Type::Rat }
    }

    /// From `dom: B1 :< A1` and `cod: A2 :< B2`, concludes `A1 -> A2 :< B1 -> B2`.
    pub fn arr(dom: SubDeriv, cod: SubDeriv) -> SubDeriv {
        let lhs = Type::arr(dom.rhs.clone(), cod.lhs.clone());
        let rhs = Type::arr(dom.lhs.clone(), cod.rhs.clone());
        SubDeriv { rule: SubRule::Arr(Box::new(dom), Box::new(cod)), lhs, rhs }
    }

    pub fn prod(left: SubDeriv, right: SubDeriv) -> SubDeriv {
        let lhs = Type::prod(left.lhs.clone(), right.lhs.clone());
        let rhs = Type::prod(left.rhs.clone(), right.rhs.clone());
        SubDeriv { rule: SubRule::Prod(Box::new(left), Box::new(right)), lhs, rhs }
    }

    pub fn conclusion(&self) -> (&Type, &Type) {
        (&self.lhs, &self.rhs)
    }

    /// Number of `Arr` nodes.
    pub fn arr_count(&self) -> usize {
        match &self.rule {
            SubRule::Arr(a, b) => 1 + a.arr_count() + b.arr_count(),
            SubRule::Prod(a, b) => a.arr_count() + b.arr_count(),
            _ => 0,
        }
    }

    /// Number of `Prod` nodes.
    pub fn prod_count(&self) -> usize {
        match &self.rule {
            SubRule::Prod(a, b) => 1 + a.prod_count() + b.prod_count(),
            SubRule::Arr(a, b) => a.prod_count() + b.prod_count(),
            _ => 0,
        }
    }

    /// Whether some leaf is `IntRat`. Without one the derivation only
    /// witnesses reflexivity.
    pub fn uses_int_rat(&self) -> bool {
        match &self.rule {
            SubRule::IntRat => true,
            SubRule::Arr(a, b) | SubRule::Prod(a, b) => a.uses_int_rat() || b.uses_int_rat(),
            _ => false,
        }
    }

    pub fn is_leaf(&self) -> bool {
        !matches!(self.rule, SubRule::Arr(..) | SubRule::Prod(..))
    }

    pub fn to_sexp(&self) -> Sexp {
        match &self.rule {
            SubRule::ReflInt => Sexp::tagged("refl-int", []),
            SubRule::ReflBool => Sexp::tagged("refl-bool", []),
            SubRule::ReflRat => Sexp::tagged("refl-rat", []),
            SubRule::IntRat => Sexp::tagged("int-rat", []),
            SubRule::Arr(a, b) => Sexp::tagged("arr", [a.to_sexp(), b.to_sexp()]),
            SubRule::Prod(a, b) => Sexp::tagged("prod", [a.to_sexp(), b.to_sexp()]),
        }
    }

    /// Reads a derivation; the conclusion is recomputed from the rule tags.
    pub fn from_sexp(s: &Sexp) -> Result<SubDeriv, SexpError> {
        let bad = || SexpError::shape("subtyping derivation", s);
        let (head, args) = s.as_tagged().ok_or_else(bad)?;
        match (head, args) {
            ("refl-int", []) => Ok(SubDeriv::refl_int()),
            ("refl-bool", []) => Ok(SubDeriv::refl_bool()),
            ("refl-rat", []) => Ok(SubDeriv::refl_rat()),
            ("int-rat", []) => Ok(SubDeriv::int_rat()),
            ("arr", [a, b]) => Ok(SubDeriv::arr(SubDeriv::from_sexp(a)?, SubDeriv::from_sexp(b)?)),
            ("prod", [a, b]) => Ok(SubDeriv::prod(SubDeriv::from_sexp(a)?, SubDeriv::from_sexp(b)?)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for SubDeriv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sexp())
    }
}

/// Decides `a :< b`. The rules are syntax-directed on the pair of head
/// constructors, so the derivation, when it exists, is unique.
pub fn deep_sub(a: &Type, b: &Type) -> Option<SubDeriv> {
    match (a, b) {
        (Type::Int, Type::Int) => Some(SubDeriv::refl_int()),
        (Type::Bool, Type::Bool) => Some(SubDeriv::refl_bool()),
        (Type::Rat, Type::Rat) => Some(SubDeriv::refl_rat()),
        (Type::Int, Type::Rat) => Some(SubDeriv::int_rat()),
        (Type::Arr(a1, a2), Type::Arr(b1, b2)) => {
            Some(SubDeriv::arr(deep_sub(b1, a1)?, deep_sub(a2, b2)?))
        }
        (Type::Prod(a1, a2), Type::Prod(b1, b2)) => {
            Some(SubDeriv::prod(deep_sub(a1, b1)?, deep_sub(a2, b2)?))
        }
        _ => None,
    }
}

pub fn shallow_sub(a: &Type, b: &Type) -> bool {
    a == b || (*a == Type::Int && *b == Type::Rat)
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("at derivation node {path}: {message}")]
pub struct SubDerivError {
    pub path: String,
    pub message: String,
}

/// Validates every node of `d` and returns its conclusion `(lhs, rhs)`.
pub fn check_sub_deriv(d: &SubDeriv) -> Result<(Type, Type), SubDerivError> {
    check_at(d, &mut Vec::new())
}

fn check_at(d: &SubDeriv, path: &mut Vec<&'static str>) -> Result<(Type, Type), SubDerivError> {
    let premise = |sel: &'static str, p: &SubDeriv, path: &mut Vec<&'static str>| {
        path.push(sel);
        let r = check_at(p, path);
        path.pop();
        r
    };
    let expected = match &d.rule {
        SubRule::ReflInt => (Type::Int, Type::Int),
        SubRule::ReflBool => (Type::Bool, Type::Bool),
        SubRule::ReflRat => (Type::Rat, Type::Rat),
        SubRule::IntRat => (Type::Int, Type::Rat),
        SubRule::Arr(dom, cod) => {
            let (b1, a1) = premise("dom", dom, path)?;
            let (a2, b2) = premise("cod", cod, path)?;
            (Type::arr(a1, a2), Type::arr(b1, b2))
        }
        SubRule::Prod(left, right) => {
            let (a1, b1) = premise("left", left, path)?;
            let (a2, b2) = premise("right", right, path)?;
            (Type::prod(a1, a2), Type::prod(b1, b2))
        }
    };
    if (&expected.0, &expected.1) != (&d.lhs, &d.rhs) {
        return Err(SubDerivError {
            path: if path.is_empty() { ".".into() } else { path.join("/") },
            message: format!(
                "rule concludes {} :< {} but node claims {} :< {}",
                expected.0, expected.1, d.lhs, d.rhs
            ),
        });
    }
    Ok(expected)
}
