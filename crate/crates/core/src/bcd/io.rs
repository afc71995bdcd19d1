//! S-expression forms.
//!
//! ```text
//! type   ::= (atom a) | top | (arr type type) | (sect type type)
//! term   ::= (var x) | (lam x term) | (app term term)
//! sub    ::= (refl type) | (top-r type) | (top-arr) | (sect-r type)
//!          | (sect-l1 type type) | (sect-l2 type type) | (dist type type)
//!          | (trans sub sub) | (sect-cong sub sub) | (arr sub sub)
//! node   ::= (rule (basis (x type)...) term type [extra] node...)
//! deriv  ::= (extended node) | (modified node)
//! ```
//!
//! `extra` is a `sub` for the `sub` rule and `(steps (step path eta|beta)...)`
//! for `beta-eta`; other rules have none. The two arguments of `dist` are the
//! two arrows being intersected.

use super::sub::BcdSubDeriv;
use super::typing::{Basis, BcdDeriv, BcdNode, BcdRule, System};
use super::{BcdTerm, BcdType, BetaEtaRule, BetaEtaStep, BetaEtaTrace};
use crate::sexp::{Sexp, SexpError};
use crate::syntax::{Ident, Path};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BcdReadError {
    #[error(transparent)]
    Sexp(#[from] SexpError),
    #[error("bad identifier `{0}`")]
    Ident(String),
    #[error("basis entries must bind variables, found `{0}`; large bases are not supported")]
    LargeBasis(String),
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
}

fn shape(what: &'static str, s: &Sexp) -> BcdReadError {
    SexpError::shape(what, s).into()
}

fn ident(s: &Sexp) -> Result<Ident, BcdReadError> {
    let name = s.as_atom().ok_or_else(|| shape("identifier", s))?;
    Ident::new_or_generated(name).map_err(|_| BcdReadError::Ident(name.to_string()))
}

pub fn type_to_sexp(t: &BcdType) -> Sexp {
    match t {
        BcdType::Atom(a) => Sexp::tagged("atom", [Sexp::atom(a.as_str())]),
        BcdType::Top => Sexp::atom("top"),
        BcdType::Arr(a, b) => Sexp::tagged("arr", [type_to_sexp(a), type_to_sexp(b)]),
        BcdType::Sect(a, b) => Sexp::tagged("sect", [type_to_sexp(a), type_to_sexp(b)]),
    }
}

pub fn type_from_sexp(s: &Sexp) -> Result<BcdType, BcdReadError> {
    if s.as_atom() == Some("top") {
        return Ok(BcdType::Top);
    }
    match s.as_tagged() {
        Some(("atom", [a])) => Ok(BcdType::Atom(ident(a)?)),
        Some(("arr", [a, b])) => Ok(BcdType::arr(type_from_sexp(a)?, type_from_sexp(b)?)),
        Some(("sect", [a, b])) => Ok(BcdType::sect(type_from_sexp(a)?, type_from_sexp(b)?)),
        _ => Err(shape("type", s)),
    }
}

pub fn term_to_sexp(m: &BcdTerm) -> Sexp {
    match m {
        BcdTerm::Var(x) => Sexp::tagged("var", [Sexp::atom(x.as_str())]),
        BcdTerm::Lam(x, b) => Sexp::tagged("lam", [Sexp::atom(x.as_str()), term_to_sexp(b)]),
        BcdTerm::App(f, a) => Sexp::tagged("app", [term_to_sexp(f), term_to_sexp(a)]),
    }
}

pub fn term_from_sexp(s: &Sexp) -> Result<BcdTerm, BcdReadError> {
    match s.as_tagged() {
        Some(("var", [x])) => Ok(BcdTerm::Var(ident(x)?)),
        Some(("lam", [x, b])) => Ok(BcdTerm::lam(ident(x)?, term_from_sexp(b)?)),
        Some(("app", [f, a])) => Ok(BcdTerm::app(term_from_sexp(f)?, term_from_sexp(a)?)),
        _ => Err(shape("term", s)),
    }
}

pub fn sub_to_sexp(d: &BcdSubDeriv) -> Sexp {
    let t = type_to_sexp;
    let args: Vec<Sexp> = match d {
        BcdSubDeriv::Refl(s) | BcdSubDeriv::TopR(s) | BcdSubDeriv::SectR(s) => vec![t(s)],
        BcdSubDeriv::TopArr => vec![],
        BcdSubDeriv::SectL1(s, u) | BcdSubDeriv::SectL2(s, u) => vec![t(s), t(u)],
        BcdSubDeriv::Dist { left, right } => vec![t(left), t(right)],
        BcdSubDeriv::Trans(a, b) | BcdSubDeriv::SectCong(a, b) | BcdSubDeriv::Arr(a, b) => {
            vec![sub_to_sexp(a), sub_to_sexp(b)]
        }
    };
    Sexp::tagged(d.rule_name(), args)
}

pub fn sub_from_sexp(s: &Sexp) -> Result<BcdSubDeriv, BcdReadError> {
    let t = type_from_sexp;
    let d = |x: &Sexp| sub_from_sexp(x).map(Box::new);
    Ok(match s.as_tagged() {
        Some(("refl", [a])) => BcdSubDeriv::Refl(t(a)?),
        Some(("top-r", [a])) => BcdSubDeriv::TopR(t(a)?),
        Some(("top-arr", [])) => BcdSubDeriv::TopArr,
        Some(("sect-r", [a])) => BcdSubDeriv::SectR(t(a)?),
        Some(("sect-l1", [a, b])) => BcdSubDeriv::SectL1(t(a)?, t(b)?),
        Some(("sect-l2", [a, b])) => BcdSubDeriv::SectL2(t(a)?, t(b)?),
        Some(("dist", [a, b])) => BcdSubDeriv::Dist { left: t(a)?, right: t(b)? },
        Some(("trans", [a, b])) => BcdSubDeriv::Trans(d(a)?, d(b)?),
        Some(("sect-cong", [a, b])) => BcdSubDeriv::SectCong(d(a)?, d(b)?),
        Some(("arr", [a, b])) => BcdSubDeriv::Arr(d(a)?, d(b)?),
        _ => return Err(shape("subtyping derivation", s)),
    })
}

pub fn deriv_to_sexp(d: &BcdDeriv) -> Sexp {
    Sexp::tagged(d.system.name(), [node_to_sexp(&d.root)])
}

pub fn deriv_from_sexp(s: &Sexp) -> Result<BcdDeriv, BcdReadError> {
    let system = match s.as_tagged() {
        Some(("extended", [_])) => System::Extended,
        Some(("modified", [_])) => System::Modified,
        _ => return Err(shape("typing derivation (expected `(extended …)` or `(modified …)`)", s)),
    };
    let Some((_, [root])) = s.as_tagged() else { unreachable!() };
    Ok(BcdDeriv { system, root: node_from_sexp(root)? })
}

fn node_to_sexp(n: &BcdNode) -> Sexp {
    let basis = n
        .basis
        .iter()
        .map(|(x, t)| Sexp::List(vec![Sexp::atom(x.as_str()), type_to_sexp(t)]));
    let mut items = vec![Sexp::tagged("basis", basis), term_to_sexp(&n.subject), type_to_sexp(&n.ty)];
    match &n.rule {
        BcdRule::Sub(d) => items.push(sub_to_sexp(d)),
        BcdRule::BetaEta(t) => items.push(Sexp::tagged(
            "steps",
            t.steps
                .iter()
                .map(|s| Sexp::tagged("step", [Sexp::atom(s.at.to_string()), Sexp::atom(s.rule.name())])),
        )),
        _ => {}
    }
    items.extend(n.premises.iter().map(node_to_sexp));
    Sexp::tagged(n.rule.name(), items)
}

fn node_from_sexp(s: &Sexp) -> Result<BcdNode, BcdReadError> {
    let Some((head, [basis, subject, ty, rest @ ..])) = s.as_tagged() else {
        return Err(shape("typing node", s));
    };
    let basis = basis_from_sexp(basis)?;
    let subject = term_from_sexp(subject)?;
    let ty = type_from_sexp(ty)?;
    let (rule, premises) = match head {
        "var" => (BcdRule::Var, rest),
        "arr-intro" => (BcdRule::ArrIntro, rest),
        "arr-elim" => (BcdRule::ArrElim, rest),
        "sect-intro" => (BcdRule::SectIntro, rest),
        "sect-elim1" => (BcdRule::SectElim1, rest),
        "sect-elim2" => (BcdRule::SectElim2, rest),
        "top-intro" => (BcdRule::TopIntro, rest),
        "sub" | "beta-eta" => {
            let [extra, premises @ ..] = rest else {
                return Err(shape("typing node (missing rule argument)", s));
            };
            let rule = if head == "sub" {
                BcdRule::Sub(sub_from_sexp(extra)?)
            } else {
                BcdRule::BetaEta(steps_from_sexp(extra)?)
            };
            (rule, premises)
        }
        other => return Err(BcdReadError::UnknownRule(other.to_string())),
    };
    let premises = premises.iter().map(node_from_sexp).collect::<Result<_, _>>()?;
    Ok(BcdNode { rule, basis, subject, ty, premises })
}

fn basis_from_sexp(s: &Sexp) -> Result<Basis, BcdReadError> {
    let Some(("basis", entries)) = s.as_tagged() else {
        return Err(shape("basis", s));
    };
    entries
        .iter()
        .map(|e| match e {
            Sexp::List(pair) if pair.len() == 2 => match &pair[0] {
                Sexp::List(_) => Err(BcdReadError::LargeBasis(pair[0].to_string())),
                x => Ok((ident(x)?, type_from_sexp(&pair[1])?)),
            },
            _ => Err(shape("basis entry", e)),
        })
        .collect()
}

fn steps_from_sexp(s: &Sexp) -> Result<BetaEtaTrace, BcdReadError> {
    let Some(("steps", steps)) = s.as_tagged() else {
        return Err(shape("reduction steps", s));
    };
    let steps = steps
        .iter()
        .map(|step| {
            let bad = || shape("reduction step", step);
            let Some(("step", [path, rule])) = step.as_tagged() else {
                return Err(bad());
            };
            let at: Path = path.as_atom().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let rule = match rule.as_atom() {
                Some("eta") => BetaEtaRule::Eta,
                Some("beta") => BetaEtaRule::Beta,
                _ => return Err(bad()),
            };
            Ok(BetaEtaStep { at, rule })
        })
        .collect::<Result<_, _>>()?;
    Ok(BetaEtaTrace { steps })
}
