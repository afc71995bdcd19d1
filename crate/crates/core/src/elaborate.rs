//! Elaborating deep subtyping into η-expansions.
//!
//! [`expand_subtype`] turns a derivation of `A :< B` into a coercion of `e`:
//! an η-expansion of `e` whose shape follows the derivation, so that the
//! result has type `B` using only shallow subtyping. [`flatten`] applies it
//! at every subsumption of a deep typing derivation.
//!
//! Both return η-traces leading from their output back to their input.
//! Fresh binders are `_eta_0`, `_eta_1`, … handed out in traversal order,
//! skipping every identifier of the program and its context, so output is
//! reproducible.

use std::collections::BTreeSet;

use crate::eta::{EtaRule, EtaStep, EtaTrace};
use crate::subtype::{SubDeriv, SubRule};
use crate::syntax::{all_idents, Ctx, Expr, Ident, NameSupply, Path, ProjIndex, Selector, Type};
use crate::typing::{typecheck, Flavor, Form, Mode, Rule, SubWitness, TypeError, TypingDeriv};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ElabOptions {
    /// Leave subsumptions whose derivation never uses `int :< rat` alone
    /// instead of expanding them.
    pub minimize: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElabResult {
    pub input: Expr,
    pub output: Expr,
    pub ty: Type,
    /// Reduces `output` to `input`.
    pub trace: EtaTrace,
    /// Shallow derivation for `output`.
    pub deriv: TypingDeriv,
    /// The deep derivation `output` was elaborated from.
    pub source_deriv: TypingDeriv,
    pub options: ElabOptions,
}

/// η-expands `e` along `d`. Fresh names avoid `avoid`, which should contain
/// the free variables of `e`.
pub fn expand_subtype(e: &Expr, d: &SubDeriv, avoid: &BTreeSet<Ident>) -> (Expr, EtaTrace) {
    expand(e, d, &mut NameSupply::new(avoid.clone()))
}

fn expand(e: &Expr, d: &SubDeriv, names: &mut NameSupply) -> (Expr, EtaTrace) {
    match &d.rule {
        SubRule::ReflInt | SubRule::ReflBool | SubRule::ReflRat | SubRule::IntRat => (e.clone(), EtaTrace::empty()),
        SubRule::Arr(d1, d2) => {
            let x = names.fresh();
            let (arg, t1) = expand(&Expr::var(&x), d1, names);
            let (body, t2) = expand(&Expr::app(e.clone(), arg), d2, names);
            (Expr::lam(x, body), arr_trace(&t1, &t2))
        }
        SubRule::Prod(d1, d2) => {
            let (first, t1) = expand(&Expr::proj(ProjIndex::First, e.clone()), d1, names);
            let (second, t2) = expand(&Expr::proj(ProjIndex::Second, e.clone()), d2, names);
            (Expr::pair(first, second), prod_trace(&t1, &t2))
        }
    }
}

// `\x. body` where `t2` reduces `body` to `e arg` and `t1` reduces `arg` to `x`
fn arr_trace(t1: &EtaTrace, t2: &EtaTrace) -> EtaTrace {
    let mut t = t2.relocated(&Path::new(vec![Selector::LamBody]));
    t.extend_under(&Path::new(vec![Selector::LamBody, Selector::AppArg]), t1);
    t.push(EtaStep::root(EtaRule::ArrEta));
    t
}

fn prod_trace(t1: &EtaTrace, t2: &EtaTrace) -> EtaTrace {
    let mut t = t1.relocated(&Path::new(vec![Selector::Pair1]));
    t.extend_under(&Path::new(vec![Selector::Pair2]), t2);
    t.push(EtaStep::root(EtaRule::ProdEta));
    t
}

/// Typechecks `e` with deep subtyping and rewrites it to use shallow
/// subtyping only, at the same type. `against` is required in check mode.
pub fn flatten(
    ctx: &Ctx,
    e: &Expr,
    mode: Mode,
    against: Option<&Type>,
    options: ElabOptions,
) -> Result<ElabResult, TypeError> {
    let source_deriv = typecheck(Flavor::Deep, ctx, e, mode, against)?;
    Ok(elaborate_deriv(source_deriv, options))
}

/// Redoes an elaboration with minimization switched on.
pub fn minimize(r: &ElabResult) -> ElabResult {
    elaborate_deriv(r.source_deriv.clone(), ElabOptions { minimize: true })
}

fn elaborate_deriv(source_deriv: TypingDeriv, options: ElabOptions) -> ElabResult {
    let mut names = NameSupply::new(all_idents(&source_deriv.expr));
    names.avoid(source_deriv.ctx.bindings().iter().map(|(x, _)| x.clone()));
    let mut elab = Elaborator { names, minimize: options.minimize };
    let (deriv, trace) = elab.node(&source_deriv);
    ElabResult {
        input: source_deriv.expr.clone(),
        output: deriv.expr.clone(),
        ty: deriv.ty.clone(),
        trace,
        deriv,
        source_deriv,
        options,
    }
}

struct Elaborator {
    names: NameSupply,
    minimize: bool,
}

impl Elaborator {
    /// Elaborates one deep node into a shallow node for the rewritten
    /// subject, plus a trace from the new subject to the old.
    fn node(&mut self, d: &TypingDeriv) -> (TypingDeriv, EtaTrace) {
        if let Rule::Sub(SubWitness::Deep(sd)) = &d.rule {
            let (premise, t_subject) = self.node(&d.premises[0]);
            let (out, mut t) = self.expand_typed(&d.ctx, premise, sd);
            t.steps.extend(t_subject.steps);
            return (out, t);
        }
        let mut expr = d.expr.clone();
        let mut premises = Vec::with_capacity(d.premises.len());
        let mut trace = EtaTrace::empty();
        for (p, &sel) in d.premises.iter().zip(premise_slots(&d.rule)) {
            let (p2, t) = self.node(p);
            expr = expr.with_child(sel, p2.expr.clone());
            trace.extend_under(&Path::new(vec![sel]), &t);
            premises.push(p2);
        }
        let rule = match &d.rule {
            Rule::Sub(SubWitness::Shallow { .. }) => unreachable!("input derivation is deep"),
            r => r.clone(),
        };
        (TypingDeriv { rule, ctx: d.ctx.clone(), expr, form: d.form, ty: d.ty.clone(), premises }, trace)
    }

    /// `de` synthesizes `A` for some subject `e`; given `sd : A :< B`,
    /// returns a shallow derivation checking the expansion of `e` against
    /// `B`, and the trace from the expansion back to `e`.
    fn expand_typed(&mut self, ctx: &Ctx, de: TypingDeriv, sd: &SubDeriv) -> (TypingDeriv, EtaTrace) {
        let e = de.expr.clone();
        if sd.is_leaf() || (self.minimize && !sd.uses_int_rat()) {
            let witness = SubWitness::Shallow { from: sd.lhs.clone(), to: sd.rhs.clone() };
            let out = node(Rule::Sub(witness), ctx, e, Form::Check, sd.rhs.clone(), vec![de]);
            return (out, EtaTrace::empty());
        }
        match &sd.rule {
            SubRule::Arr(d1, d2) => {
                let x = self.names.fresh();
                let b1 = d1.lhs.clone();
                let inner = ctx.extend(x.clone(), b1.clone());
                let de = de.weakened(ctx.len(), &x, &b1);
                let dx = node(Rule::Var, &inner, Expr::var(&x), Form::Synth, b1, vec![]);
                let (darg, t1) = self.expand_typed(&inner, dx, d1);
                let app = Expr::app(e, darg.expr.clone());
                let dapp = node(Rule::ArrElim, &inner, app, Form::Synth, d2.lhs.clone(), vec![de, darg]);
                let (dbody, t2) = self.expand_typed(&inner, dapp, d2);
                let lam = Expr::lam(x, dbody.expr.clone());
                let out = node(Rule::ArrIntro, ctx, lam, Form::Check, sd.rhs.clone(), vec![dbody]);
                (out, arr_trace(&t1, &t2))
            }
            SubRule::Prod(d1, d2) => {
                let component = |this: &mut Self, k, dk: &SubDeriv| {
                    let proj = Expr::proj(k, e.clone());
                    let dproj = node(Rule::ProdElim, ctx, proj, Form::Synth, dk.lhs.clone(), vec![de.clone()]);
                    this.expand_typed(ctx, dproj, dk)
                };
                let (dfirst, t1) = component(self, ProjIndex::First, d1);
                let (dsecond, t2) = component(self, ProjIndex::Second, d2);
                let pair = Expr::pair(dfirst.expr.clone(), dsecond.expr.clone());
                let out = node(Rule::ProdIntro, ctx, pair, Form::Check, sd.rhs.clone(), vec![dfirst, dsecond]);
                (out, prod_trace(&t1, &t2))
            }
            _ => unreachable!("leaves handled above"),
        }
    }
}

fn node(rule: Rule, ctx: &Ctx, expr: Expr, form: Form, ty: Type, premises: Vec<TypingDeriv>) -> TypingDeriv {
    TypingDeriv { rule, ctx: ctx.clone(), expr, form, ty, premises }
}

/// The subexpression slot each premise of a rule types.
fn premise_slots(rule: &Rule) -> &'static [Selector] {
    use Selector::*;
    match rule {
        Rule::Var | Rule::IntIntro | Rule::BoolIntro => &[],
        Rule::ArrIntro => &[LamBody],
        Rule::ArrElim => &[AppFn, AppArg],
        Rule::Anno => &[AnnoSubject],
        Rule::ProdIntro => &[Pair1, Pair2],
        Rule::ProdElim => &[ProjSubject],
        Rule::IntOp | Rule::RatOp => &[BinOpLeft, BinOpRight],
        Rule::BoolElim => &[IfCond, IfThen, IfElse],
        Rule::Sub(_) => unreachable!("subsumption premises share the conclusion's subject"),
    }
}
