//! Eliminating subsumption: each use of `σ ≤ τ` becomes η-expansions of the
//! subject, typed without subsumption, followed by a βη node that reduces
//! the subject back. Only η-steps are ever emitted.

use super::sub::{check_bcd_sub, BcdSubDeriv, BcdSubError};
use super::typing::{check_bcd_typing, BcdDeriv, BcdNode, BcdRule, BcdTypingError, System};
use super::{BcdTerm, BcdType, BetaEtaTrace};
use crate::syntax::{Ident, NameSupply};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BcdError {
    #[error(transparent)]
    Sub(#[from] BcdSubError),
    #[error(transparent)]
    Typing(#[from] BcdTypingError),
    #[error("{0}")]
    Precondition(String),
}

/// Adds `x : τ` to every basis of `d`, after the root basis. An inner
/// λ-binder named `x` is renamed to a fresh name first.
pub fn weaken(d: &BcdDeriv, x: &Ident, tau: &BcdType) -> Result<BcdDeriv, BcdError> {
    if d.root.basis.iter().any(|(y, _)| y == x) {
        return Err(BcdError::Precondition(format!("`{x}` is already bound by the basis")));
    }
    let mut names = NameSupply::new(d.root.all_idents());
    names.avoid([x.clone()]);
    let root = weaken_node(&d.root, x, tau, &mut names);
    Ok(BcdDeriv { system: d.system, root })
}

fn weaken_node(n: &BcdNode, x: &Ident, tau: &BcdType, names: &mut NameSupply) -> BcdNode {
    Weakening { x, tau, index: n.basis.len(), renamed: None }.node(n, false, names)
}

struct Weakening<'a> {
    x: &'a Ident,
    tau: &'a BcdType,
    index: usize,
    // the replacement for an inner binder `x`, once one is needed
    renamed: Option<Ident>,
}

impl Weakening<'_> {
    /// In an `active` subtree some enclosing λ-binder `x` has been renamed,
    /// so free occurrences of `x` refer to it and are renamed too.
    fn node(&mut self, n: &BcdNode, active: bool, names: &mut NameSupply) -> BcdNode {
        let mut subject = n.subject.clone();
        let mut basis = n.basis.clone();
        let mut premises_active = active;
        if active {
            let y = self.renamed.clone().expect("active implies renamed");
            subject = subject.subst(self.x, &BcdTerm::var(&y));
            for (name, _) in basis.iter_mut().filter(|(name, _)| name == self.x) {
                *name = y.clone();
            }
        } else if let (BcdRule::ArrIntro, BcdTerm::Lam(binder, body)) = (&n.rule, &n.subject) {
            if binder == self.x {
                let y = self.renamed.get_or_insert_with(|| names.fresh()).clone();
                subject = BcdTerm::lam(y.clone(), body.subst(self.x, &BcdTerm::var(&y)));
                premises_active = true;
            }
        }
        basis.insert(self.index, (self.x.clone(), self.tau.clone()));
        let premises = n.premises.iter().map(|p| self.node(p, premises_active, names)).collect();
        BcdNode { rule: n.rule.clone(), basis, subject, ty: n.ty.clone(), premises }
    }
}

/// From `d : σ ≤ τ` and a modified derivation of `Γ ⊢* M : σ`, builds a
/// modified derivation of `Γ ⊢* M : τ`.
pub fn core42(d: &BcdSubDeriv, dd: &BcdDeriv) -> Result<BcdDeriv, BcdError> {
    if dd.system != System::Modified {
        return Err(BcdError::Precondition("expected a derivation in the modified system".into()));
    }
    let judgment = check_bcd_typing(dd)?;
    let (sigma, _) = check_bcd_sub(d)?;
    if sigma != judgment.ty {
        return Err(BcdError::Precondition(format!(
            "subtyping starts at {sigma} but the derivation concludes {}",
            judgment.ty
        )));
    }
    let mut names = NameSupply::new(dd.root.all_idents());
    Ok(BcdDeriv { system: System::Modified, root: core(d, dd.root.clone(), &mut names) })
}

/// Translates an extended derivation into a modified one with the same
/// conclusion.
pub fn lemma42(dd: &BcdDeriv) -> Result<BcdDeriv, BcdError> {
    if dd.system != System::Extended {
        return Err(BcdError::Precondition("expected a derivation in the extended system".into()));
    }
    check_bcd_typing(dd)?;
    let mut names = NameSupply::new(dd.root.all_idents());
    Ok(BcdDeriv { system: System::Modified, root: translate(&dd.root, &mut names) })
}

fn translate(n: &BcdNode, names: &mut NameSupply) -> BcdNode {
    let premises: Vec<BcdNode> = n.premises.iter().map(|p| translate(p, names)).collect();
    match &n.rule {
        BcdRule::Sub(d) => {
            let premise = premises.into_iter().next().expect("subsumption has one premise");
            core(d, premise, names)
        }
        rule => BcdNode { rule: rule.clone(), basis: n.basis.clone(), subject: n.subject.clone(), ty: n.ty.clone(), premises },
    }
}

fn conclusion(d: &BcdSubDeriv) -> (BcdType, BcdType) {
    check_bcd_sub(d).expect("subtyping derivation was checked")
}

// `D` concludes `Γ ⊢* M : σ` where `d : σ ≤ τ`.
fn core(d: &BcdSubDeriv, dd: BcdNode, names: &mut NameSupply) -> BcdNode {
    let basis = dd.basis.clone();
    let m = dd.subject.clone();
    let node = |rule, subject, ty, premises| BcdNode::new(rule, &basis, subject, ty, premises);
    match d {
        BcdSubDeriv::Refl(_) => dd,
        BcdSubDeriv::TopR(_) => node(BcdRule::TopIntro, m, BcdType::Top, vec![]),
        BcdSubDeriv::SectR(s) => node(BcdRule::SectIntro, m, BcdType::sect(s.clone(), s.clone()), vec![dd.clone(), dd]),
        BcdSubDeriv::SectL1(s, _) => node(BcdRule::SectElim1, m, s.clone(), vec![dd]),
        BcdSubDeriv::SectL2(_, t) => node(BcdRule::SectElim2, m, t.clone(), vec![dd]),
        BcdSubDeriv::Trans(d1, d2) => {
            let mid = core(d1, dd, names);
            core(d2, mid, names)
        }
        BcdSubDeriv::SectCong(d1, d2) => {
            let (BcdType::Sect(s1, s2), tau) = (&dd.ty, conclusion(d).1) else {
                unreachable!("congruence applies to an intersection");
            };
            let left = core(d1, node(BcdRule::SectElim1, m.clone(), (**s1).clone(), vec![dd.clone()]), names);
            let right = core(d2, node(BcdRule::SectElim2, m.clone(), (**s2).clone(), vec![dd.clone()]), names);
            node(BcdRule::SectIntro, m, tau, vec![left, right])
        }
        BcdSubDeriv::TopArr => eta_close(&basis, &m, names, BcdType::Top, |x, inner, _| {
            let applied = BcdTerm::app(m.clone(), BcdTerm::var(x));
            BcdNode::new(BcdRule::TopIntro, inner, applied, BcdType::Top, vec![])
        }),
        BcdSubDeriv::Arr(d1, d2) => {
            let (t1, _) = conclusion(d1);
            eta_close(&basis, &m, names, t1.clone(), |x, inner, names| {
                let (BcdType::Arr(_, s2), (_, t2)) = (&dd.ty, conclusion(d2)) else {
                    unreachable!("arrow subtyping applies to an arrow");
                };
                let weakened = weaken_node(&dd, x, &t1, names);
                let var = BcdNode::new(BcdRule::Var, inner, BcdTerm::var(x), t1.clone(), vec![]);
                let arg = core(d1, var, names);
                let applied = BcdTerm::app(m.clone(), BcdTerm::var(x));
                let app = BcdNode::new(BcdRule::ArrElim, inner, applied, (**s2).clone(), vec![weakened, arg]);
                let out = core(d2, app, names);
                debug_assert_eq!(out.ty, t2);
                out
            })
        }
        BcdSubDeriv::Dist { left, right } => {
            let (BcdType::Arr(s, t1), BcdType::Arr(_, t2)) = (left, right) else {
                unreachable!("distributivity relates arrows");
            };
            eta_close(&basis, &m, names, (**s).clone(), |x, inner, names| {
                let applied = BcdTerm::app(m.clone(), BcdTerm::var(x));
                let half = |rule, arrow: &BcdType, cod: &BcdType, names: &mut NameSupply| {
                    let elim = BcdNode::new(rule, &basis, m.clone(), arrow.clone(), vec![dd.clone()]);
                    let weakened = weaken_node(&elim, x, s, names);
                    let var = BcdNode::new(BcdRule::Var, inner, BcdTerm::var(x), (**s).clone(), vec![]);
                    BcdNode::new(BcdRule::ArrElim, inner, applied.clone(), cod.clone(), vec![weakened, var])
                };
                let first = half(BcdRule::SectElim1, left, t1, names);
                let second = half(BcdRule::SectElim2, right, t2, names);
                let ty = BcdType::sect((**t1).clone(), (**t2).clone());
                BcdNode::new(BcdRule::SectIntro, inner, applied, ty, vec![first, second])
            })
        }
    }
}

/// With a fresh `x`, types `M x` under `Γ, x : dom` using `body`, then
/// concludes `λx. M x : dom -> ρ` and η-reduces it to `M`.
fn eta_close(
    basis: &[(Ident, BcdType)],
    m: &BcdTerm,
    names: &mut NameSupply,
    dom: BcdType,
    body: impl FnOnce(&Ident, &Vec<(Ident, BcdType)>, &mut NameSupply) -> BcdNode,
) -> BcdNode {
    let basis = basis.to_vec();
    let x = names.fresh();
    let mut inner = basis.clone();
    inner.push((x.clone(), dom.clone()));
    let typed_body = body(&x, &inner, names);
    let ty = BcdType::arr(dom, typed_body.ty.clone());
    let lam = BcdTerm::lam(x, typed_body.subject.clone());
    let intro = BcdNode::new(BcdRule::ArrIntro, &basis, lam, ty.clone(), vec![typed_body]);
    BcdNode::new(BcdRule::BetaEta(BetaEtaTrace::root_eta()), &basis, m.clone(), ty, vec![intro])
}
