//! A proof kernel for intersection types with a top type.
//!
//! Types are atoms, `top`, arrows and intersections; terms are untyped
//! λ-terms. The kernel checks subtyping derivations ([`check_bcd_sub`]) and
//! typing derivations in two systems ([`check_bcd_typing`]):
//!
//! - *extended*: variable, arrow and intersection rules, `top`
//!   introduction, and subsumption;
//! - *modified*: the same without subsumption, but with a rule that types
//!   `N` at `σ` given `M : σ` and a βη-reduction from `M` to `N`.
//!
//! [`lemma42`] translates extended derivations into modified ones, replacing
//! each subsumption by η-expansions followed by η-reduction ([`core42`]).
//!
//! Everything reads and writes the s-expression forms in [`io`].

mod io;
mod sub;
mod translate;
mod typing;

use std::collections::BTreeSet;
use std::fmt;

use crate::syntax::{fresh_var, Ident, Path, Selector};

pub use io::{
    deriv_from_sexp, deriv_to_sexp, sub_from_sexp, sub_to_sexp, term_from_sexp, term_to_sexp, type_from_sexp,
    type_to_sexp, BcdReadError,
};
pub use sub::{bcd_sub_search, check_bcd_sub, BcdSubDeriv, BcdSubError};
pub use translate::{core42, lemma42, weaken, BcdError};
pub use typing::{check_bcd_typing, Basis, BcdDeriv, BcdNode, BcdRule, BcdTypingError, Judgment, System};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BcdType {
    Atom(Ident),
    Top,
    Arr(Box<BcdType>, Box<BcdType>),
    Sect(Box<BcdType>, Box<BcdType>),
}

impl BcdType {
    /// Panics if `name` is not a valid identifier.
    pub fn atom(name: &str) -> BcdType {
        BcdType::Atom(Ident::new(name).expect("valid atom name"))
    }

    pub fn arr(dom: BcdType, cod: BcdType) -> BcdType {
        BcdType::Arr(Box::new(dom), Box::new(cod))
    }

    pub fn sect(left: BcdType, right: BcdType) -> BcdType {
        BcdType::Sect(Box::new(left), Box::new(right))
    }

    /// `top -> top`
    pub fn top_arr() -> BcdType {
        BcdType::arr(BcdType::Top, BcdType::Top)
    }

    /// Atoms and `top` have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            BcdType::Atom(_) | BcdType::Top => 0,
            BcdType::Arr(a, b) | BcdType::Sect(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// The type and all its subterms.
    pub fn subterms(&self, out: &mut BTreeSet<BcdType>) {
        if out.insert(self.clone()) {
            if let BcdType::Arr(a, b) | BcdType::Sect(a, b) = self {
                a.subterms(out);
                b.subterms(out);
            }
        }
    }
}

impl fmt::Display for BcdType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", type_to_sexp(self))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BcdTerm {
    Var(Ident),
    Lam(Ident, Box<BcdTerm>),
    App(Box<BcdTerm>, Box<BcdTerm>),
}

impl BcdTerm {
    pub fn var(x: &Ident) -> BcdTerm {
        BcdTerm::Var(x.clone())
    }

    pub fn lam(x: Ident, body: BcdTerm) -> BcdTerm {
        BcdTerm::Lam(x, Box::new(body))
    }

    pub fn app(f: BcdTerm, a: BcdTerm) -> BcdTerm {
        BcdTerm::App(Box::new(f), Box::new(a))
    }

    pub fn free_vars(&self) -> BTreeSet<Ident> {
        match self {
            BcdTerm::Var(x) => [x.clone()].into_iter().collect(),
            BcdTerm::Lam(x, b) => {
                let mut fv = b.free_vars();
                fv.remove(x);
                fv
            }
            BcdTerm::App(f, a) => {
                let mut fv = f.free_vars();
                fv.extend(a.free_vars());
                fv
            }
        }
    }

    pub fn all_idents(&self, out: &mut BTreeSet<Ident>) {
        match self {
            BcdTerm::Var(x) => {
                out.insert(x.clone());
            }
            BcdTerm::Lam(x, b) => {
                out.insert(x.clone());
                b.all_idents(out);
            }
            BcdTerm::App(f, a) => {
                f.all_idents(out);
                a.all_idents(out);
            }
        }
    }

    pub fn alpha_eq(&self, other: &BcdTerm) -> bool {
        fn go<'a>(a: &'a BcdTerm, b: &'a BcdTerm, ea: &mut Vec<&'a Ident>, eb: &mut Vec<&'a Ident>) -> bool {
            match (a, b) {
                (BcdTerm::Var(x), BcdTerm::Var(y)) => {
                    match (ea.iter().rposition(|v| *v == x), eb.iter().rposition(|v| *v == y)) {
                        (Some(i), Some(j)) => i == j,
                        (None, None) => x == y,
                        _ => false,
                    }
                }
                (BcdTerm::Lam(x, b1), BcdTerm::Lam(y, b2)) => {
                    ea.push(x);
                    eb.push(y);
                    let r = go(b1, b2, ea, eb);
                    ea.pop();
                    eb.pop();
                    r
                }
                (BcdTerm::App(f1, a1), BcdTerm::App(f2, a2)) => go(f1, f2, ea, eb) && go(a1, a2, ea, eb),
                _ => false,
            }
        }
        go(self, other, &mut Vec::new(), &mut Vec::new())
    }

    /// Capture-avoiding `self[n/x]`; binders that would capture a free
    /// variable of `n` are renamed first.
    pub fn subst(&self, x: &Ident, n: &BcdTerm) -> BcdTerm {
        match self {
            BcdTerm::Var(y) if y == x => n.clone(),
            BcdTerm::Var(_) => self.clone(),
            BcdTerm::App(f, a) => BcdTerm::app(f.subst(x, n), a.subst(x, n)),
            BcdTerm::Lam(y, _) if y == x => self.clone(),
            BcdTerm::Lam(y, body) => {
                let fv_n = n.free_vars();
                if !fv_n.contains(y) || !body.free_vars().contains(x) {
                    return BcdTerm::lam(y.clone(), body.subst(x, n));
                }
                let mut avoid = fv_n;
                body.all_idents(&mut avoid);
                avoid.insert(x.clone());
                let z = fresh_var(&avoid);
                let renamed = body.subst(y, &BcdTerm::var(&z));
                BcdTerm::lam(z, renamed.subst(x, n))
            }
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            BcdTerm::Var(_) => 1,
            BcdTerm::Lam(_, b) => 1 + b.node_count(),
            BcdTerm::App(f, a) => 1 + f.node_count() + a.node_count(),
        }
    }

    pub fn at_mut(&mut self, path: &Path) -> Option<&mut BcdTerm> {
        let mut node = self;
        for sel in path.selectors() {
            node = match (node, sel) {
                (BcdTerm::Lam(_, b), Selector::LamBody) => b,
                (BcdTerm::App(f, _), Selector::AppFn) => f,
                (BcdTerm::App(_, a), Selector::AppArg) => a,
                _ => return None,
            };
        }
        Some(node)
    }
}

impl fmt::Display for BcdTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", term_to_sexp(self))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BetaEtaRule {
    Beta,
    Eta,
}

impl BetaEtaRule {
    pub fn name(self) -> &'static str {
        match self {
            BetaEtaRule::Beta => "beta",
            BetaEtaRule::Eta => "eta",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BetaEtaStep {
    pub at: Path,
    pub rule: BetaEtaRule,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BetaEtaTrace {
    pub steps: Vec<BetaEtaStep>,
}

impl BetaEtaTrace {
    /// A single η-step at the root.
    pub fn root_eta() -> BetaEtaTrace {
        BetaEtaTrace { steps: vec![BetaEtaStep { at: Path::root(), rule: BetaEtaRule::Eta }] }
    }

    pub fn beta_count(&self) -> usize {
        self.steps.iter().filter(|s| s.rule == BetaEtaRule::Beta).count()
    }

    /// Replays the steps from `m`, reporting the index of the first one that
    /// does not apply.
    pub fn replay(&self, m: &BcdTerm) -> Result<BcdTerm, (usize, String)> {
        let mut cur = m.clone();
        for (i, s) in self.steps.iter().enumerate() {
            let node = cur.at_mut(&s.at).ok_or((i, format!("path {} does not address a node", s.at)))?;
            *node = contract(node, s.rule).ok_or_else(|| (i, format!("no {} redex at {}", s.rule.name(), s.at)))?;
        }
        Ok(cur)
    }
}

fn contract(m: &BcdTerm, rule: BetaEtaRule) -> Option<BcdTerm> {
    match (rule, m) {
        (BetaEtaRule::Eta, BcdTerm::Lam(x, body)) => match &**body {
            BcdTerm::App(f, a) if matches!(&**a, BcdTerm::Var(y) if y == x) && !f.free_vars().contains(x) => {
                Some((**f).clone())
            }
            _ => None,
        },
        (BetaEtaRule::Beta, BcdTerm::App(f, n)) => match &**f {
            BcdTerm::Lam(x, body) => Some(body.subst(x, n)),
            _ => None,
        },
        _ => None,
    }
}
