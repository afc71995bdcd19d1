//! Typing derivations for the extended and modified systems.

use std::collections::BTreeSet;

use super::sub::{check_bcd_sub, BcdSubDeriv};
use super::{BcdTerm, BcdType, BetaEtaTrace};
use crate::syntax::Ident;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum System {
    /// With subsumption.
    Extended,
    /// Without subsumption, with βη-reduction of the subject.
    Modified,
}

impl System {
    pub fn name(self) -> &'static str {
        match self {
            System::Extended => "extended",
            System::Modified => "modified",
        }
    }
}

/// Typing assumptions about variables. Names are pairwise distinct.
pub type Basis = Vec<(Ident, BcdType)>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BcdRule {
    Var,
    ArrIntro,
    ArrElim,
    SectIntro,
    SectElim1,
    SectElim2,
    TopIntro,
    Sub(BcdSubDeriv),
    /// The conclusion's subject is the premise's subject reduced by the
    /// trace; the type is unchanged.
    BetaEta(BetaEtaTrace),
}

impl BcdRule {
    pub fn name(&self) -> &'static str {
        match self {
            BcdRule::Var => "var",
            BcdRule::ArrIntro => "arr-intro",
            BcdRule::ArrElim => "arr-elim",
            BcdRule::SectIntro => "sect-intro",
            BcdRule::SectElim1 => "sect-elim1",
            BcdRule::SectElim2 => "sect-elim2",
            BcdRule::TopIntro => "top-intro",
            BcdRule::Sub(_) => "sub",
            BcdRule::BetaEta(_) => "beta-eta",
        }
    }
}

/// One rule instance concluding `basis ⊢ subject : ty`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BcdNode {
    pub rule: BcdRule,
    pub basis: Basis,
    pub subject: BcdTerm,
    pub ty: BcdType,
    pub premises: Vec<BcdNode>,
}

impl BcdNode {
    pub fn new(rule: BcdRule, basis: &Basis, subject: BcdTerm, ty: BcdType, premises: Vec<BcdNode>) -> BcdNode {
        BcdNode { rule, basis: basis.clone(), subject, ty, premises }
    }

    /// Every node of the tree, preorder.
    pub fn nodes(&self) -> Vec<&BcdNode> {
        let mut out = vec![self];
        for p in &self.premises {
            out.extend(p.nodes());
        }
        out
    }

    /// Every identifier in subjects and bases.
    pub fn all_idents(&self) -> BTreeSet<Ident> {
        let mut out = BTreeSet::new();
        for n in self.nodes() {
            n.subject.all_idents(&mut out);
            out.extend(n.basis.iter().map(|(x, _)| x.clone()));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BcdDeriv {
    pub system: System,
    pub root: BcdNode,
}

/// The conclusion of a derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Judgment {
    pub basis: Basis,
    pub subject: BcdTerm,
    pub ty: BcdType,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("at typing node {path}: {message}")]
pub struct BcdTypingError {
    /// Premise indices from the root, `/`-joined; `.` for the root.
    pub path: String,
    pub message: String,
}

pub fn check_bcd_typing(d: &BcdDeriv) -> Result<Judgment, BcdTypingError> {
    check_at(d.system, &d.root, &mut Vec::new())?;
    Ok(Judgment { basis: d.root.basis.clone(), subject: d.root.subject.clone(), ty: d.root.ty.clone() })
}

fn check_at(system: System, n: &BcdNode, path: &mut Vec<usize>) -> Result<(), BcdTypingError> {
    node_ok(system, n).map_err(|message| BcdTypingError {
        path: if path.is_empty() {
            ".".into()
        } else {
            path.iter().map(usize::to_string).collect::<Vec<_>>().join("/")
        },
        message,
    })?;
    for (i, p) in n.premises.iter().enumerate() {
        path.push(i);
        check_at(system, p, path)?;
        path.pop();
    }
    Ok(())
}

fn node_ok(system: System, n: &BcdNode) -> Result<(), String> {
    let expect = |cond: bool, msg: &str| if cond { Ok(()) } else { Err(msg.to_string()) };
    let names: BTreeSet<&Ident> = n.basis.iter().map(|(x, _)| x).collect();
    expect(names.len() == n.basis.len(), "basis binds a variable twice")?;
    let arity = n.premises.len();
    let want = match n.rule {
        BcdRule::Var | BcdRule::TopIntro => 0,
        BcdRule::ArrElim | BcdRule::SectIntro => 2,
        _ => 1,
    };
    expect(arity == want, &format!("{} expects {want} premise(s), found {arity}", n.rule.name()))?;
    if n.rule != BcdRule::ArrIntro {
        expect(n.premises.iter().all(|p| p.basis == n.basis), "premise basis differs from conclusion")?;
    }
    let same_subject = |i: usize| expect(n.premises[i].subject.alpha_eq(&n.subject), "premise subject differs from conclusion");
    let p_ty = |i: usize| &n.premises[i].ty;

    match &n.rule {
        BcdRule::Var => {
            let BcdTerm::Var(x) = &n.subject else {
                return Err("var rule needs a variable subject".into());
            };
            expect(n.basis.iter().any(|(y, t)| y == x && *t == n.ty), "variable is not assigned this type by the basis")
        }
        BcdRule::ArrIntro => {
            let (BcdTerm::Lam(x, body), BcdType::Arr(s, t)) = (&n.subject, &n.ty) else {
                return Err("arrow introduction needs a λ subject and an arrow type".into());
            };
            expect(!names.contains(x), "λ binder is already bound by the basis")?;
            let mut inner = n.basis.clone();
            inner.push((x.clone(), (**s).clone()));
            let p = &n.premises[0];
            expect(p.basis == inner, "body basis is not the conclusion basis extended with the binder")?;
            expect(p.subject.alpha_eq(body), "premise subject is not the λ body")?;
            expect(p.ty == **t, "body type differs from the arrow's codomain")
        }
        BcdRule::ArrElim => {
            let BcdTerm::App(m, arg) = &n.subject else {
                return Err("arrow elimination needs an application subject".into());
            };
            let BcdType::Arr(s, t) = p_ty(0) else {
                return Err("function premise does not have an arrow type".into());
            };
            expect(n.premises[0].subject.alpha_eq(m), "first premise is not about the function")?;
            expect(n.premises[1].subject.alpha_eq(arg), "second premise is not about the argument")?;
            expect(**t == n.ty, "conclusion type differs from the function's codomain")?;
            expect(*p_ty(1) == **s, "argument type differs from the function's domain")
        }
        BcdRule::SectIntro => {
            same_subject(0)?;
            same_subject(1)?;
            expect(n.ty == BcdType::sect(p_ty(0).clone(), p_ty(1).clone()), "conclusion is not the intersection of the premise types")
        }
        BcdRule::SectElim1 | BcdRule::SectElim2 => {
            same_subject(0)?;
            let BcdType::Sect(l, r) = p_ty(0) else {
                return Err("premise does not have an intersection type".into());
            };
            let part = if n.rule == BcdRule::SectElim1 { l } else { r };
            expect(**part == n.ty, "conclusion is not the selected component")
        }
        BcdRule::TopIntro => expect(n.ty == BcdType::Top, "top introduction must conclude top"),
        BcdRule::Sub(d) => {
            expect(system == System::Extended, "subsumption is not a rule of the modified system")?;
            same_subject(0)?;
            let (s, t) = check_bcd_sub(d).map_err(|e| format!("bad subtyping derivation: {e}"))?;
            expect(s == *p_ty(0) && t == n.ty, "subtyping derivation concludes the wrong judgment")
        }
        BcdRule::BetaEta(trace) => {
            expect(system == System::Modified, "βη is not a rule of the extended system")?;
            expect(*p_ty(0) == n.ty, "βη must keep the premise's type")?;
            let reduct = trace
                .replay(&n.premises[0].subject)
                .map_err(|(i, msg)| format!("reduction step {i}: {msg}"))?;
            expect(reduct.alpha_eq(&n.subject), "reduction does not end at the conclusion's subject")
        }
    }
}
