//! Bidirectional typing with rule-tagged derivations.
//!
//! The checker is parameterized by [`Flavor`]: `Deep` discharges the
//! subsumption premise with [`deep_sub`], `Shallow` with [`shallow_sub`].
//! Bare lambdas, pairs and conditionals only check; everything else
//! synthesizes.
//!
//! `+` and `-` have two synthesis rules (integer and rational operands). The
//! checker tries the integer rule first and falls back to the rational one,
//! so synthesis is deterministic. `<` is typed by the rational rule only.

use std::fmt;

use crate::sexp::Sexp;
use crate::subtype::{check_sub_deriv, deep_sub, shallow_sub, SubDeriv};
use crate::syntax::{BinOpKind, Ctx, Expr, Ident, Path, ProjIndex, Selector, Type};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Synth,
    Check,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    Deep,
    Shallow,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Deep => "deep",
            Flavor::Shallow => "shallow",
        })
    }
}

/// Judgment form of a derivation node. `Colon` is the declarative
/// `Γ ⊢ e : A` obtained by erasing modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Form {
    Synth,
    Check,
    Colon,
}

impl From<Mode> for Form {
    fn from(mode: Mode) -> Form {
        match mode {
            Mode::Synth => Form::Synth,
            Mode::Check => Form::Check,
        }
    }
}

/// Evidence for the subtyping premise of a subsumption node.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SubWitness {
    Deep(SubDeriv),
    Shallow { from: Type, to: Type },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Var,
    ArrIntro,
    ArrElim,
    Sub(SubWitness),
    Anno,
    ProdIntro,
    ProdElim,
    IntIntro,
    IntOp,
    RatOp,
    BoolIntro,
    BoolElim,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Var => "var",
            Rule::ArrIntro => "arr-intro",
            Rule::ArrElim => "arr-elim",
            Rule::Sub(_) => "sub",
            Rule::Anno => "anno",
            Rule::ProdIntro => "prod-intro",
            Rule::ProdElim => "prod-elim",
            Rule::IntIntro => "int-intro",
            Rule::IntOp => "int-op",
            Rule::RatOp => "rat-op",
            Rule::BoolIntro => "bool-intro",
            Rule::BoolElim => "bool-elim",
        }
    }
}

/// A typing derivation: one rule instance per node, with its full
/// conclusion `ctx ⊢ expr (⇒|⇐|:) ty`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypingDeriv {
    pub rule: Rule,
    pub ctx: Ctx,
    pub expr: Expr,
    pub form: Form,
    pub ty: Type,
    pub premises: Vec<TypingDeriv>,
}

impl TypingDeriv {
    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(TypingDeriv::node_count).sum::<usize>()
    }

    /// Inserts `x : ty` at position `index` of every context in the tree.
    /// Every context in a derivation extends the root's, so `index` should
    /// not exceed the root context's length.
    pub fn weakened(&self, index: usize, x: &Ident, ty: &Type) -> TypingDeriv {
        TypingDeriv {
            rule: self.rule.clone(),
            ctx: self.ctx.insert(index, x.clone(), ty.clone()),
            expr: self.expr.clone(),
            form: self.form,
            ty: self.ty.clone(),
            premises: self.premises.iter().map(|p| p.weakened(index, x, ty)).collect(),
        }
    }

    /// Rule-tag s-expression, e.g. `(sub (int-rat) (int-intro))`.
    pub fn to_sexp(&self) -> Sexp {
        let mut args = Vec::new();
        if let Rule::Sub(w) = &self.rule {
            args.push(match w {
                SubWitness::Deep(d) => d.to_sexp(),
                SubWitness::Shallow { from, to } if from == to => Sexp::tagged("shallow-refl", []),
                SubWitness::Shallow { .. } => Sexp::tagged("shallow-int-rat", []),
            });
        }
        args.extend(self.premises.iter().map(TypingDeriv::to_sexp));
        Sexp::tagged(self.rule.name(), args)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TypeError {
    #[error("at {path}: unbound variable `{name}`")]
    Unbound { path: Path, name: Ident },
    #[error("at {path}: cannot synthesize a type for `{expr}`; add an annotation")]
    CannotSynthesize { path: Path, expr: Expr },
    #[error("at {path}: applied expression has type {found}, which is not a function type")]
    NotAFunction { path: Path, found: Type },
    #[error("at {path}: projected expression has type {found}, which is not a product type")]
    NotAProduct { path: Path, found: Type },
    #[error("at {path}: {found} is not a {flavor} subtype of {expected}")]
    Subsumption { path: Path, found: Type, expected: Type, flavor: Flavor },
}

impl TypeError {
    pub fn path(&self) -> &Path {
        match self {
            TypeError::Unbound { path, .. }
            | TypeError::CannotSynthesize { path, .. }
            | TypeError::NotAFunction { path, .. }
            | TypeError::NotAProduct { path, .. }
            | TypeError::Subsumption { path, .. } => path,
        }
    }
}

/// `ctx ⊢ e ⇒ A`: returns the synthesized type and its derivation.
pub fn synth(flavor: Flavor, ctx: &Ctx, e: &Expr) -> Result<(Type, TypingDeriv), TypeError> {
    let d = Checker::new(flavor).synth(ctx, e)?;
    Ok((d.ty.clone(), d))
}

/// `ctx ⊢ e ⇐ ty`.
pub fn check(flavor: Flavor, ctx: &Ctx, e: &Expr, ty: &Type) -> Result<TypingDeriv, TypeError> {
    Checker::new(flavor).check(ctx, e, ty)
}

/// Runs [`synth`] or [`check`] according to `mode`. `against` is required
/// in check mode and ignored in synth mode.
pub fn typecheck(
    flavor: Flavor,
    ctx: &Ctx,
    e: &Expr,
    mode: Mode,
    against: Option<&Type>,
) -> Result<TypingDeriv, TypeError> {
    match (mode, against) {
        (Mode::Check, Some(ty)) => check(flavor, ctx, e, ty),
        (Mode::Check, None) => panic!("check mode requires a type"),
        (Mode::Synth, _) => synth(flavor, ctx, e).map(|(_, d)| d),
    }
}

struct Checker {
    flavor: Flavor,
    path: Path,
}

impl Checker {
    fn new(flavor: Flavor) -> Checker {
        Checker { flavor, path: Path::root() }
    }

    fn under<T>(&mut self, sel: Selector, f: impl FnOnce(&mut Self) -> T) -> T {
        self.path.push(sel);
        let r = f(self);
        self.path.pop();
        r
    }

    fn node(rule: Rule, ctx: &Ctx, e: &Expr, form: Form, ty: Type, premises: Vec<TypingDeriv>) -> TypingDeriv {
        TypingDeriv { rule, ctx: ctx.clone(), expr: e.clone(), form, ty, premises }
    }

    fn synth(&mut self, ctx: &Ctx, e: &Expr) -> Result<TypingDeriv, TypeError> {
        use Selector::*;
        let leaf = |rule, ty| Ok(Self::node(rule, ctx, e, Form::Synth, ty, vec![]));
        match e {
            Expr::Var(x) => match ctx.lookup(x) {
                Some(ty) => leaf(Rule::Var, ty.clone()),
                None => Err(TypeError::Unbound { path: self.path.clone(), name: x.clone() }),
            },
            Expr::IntLit(_) => leaf(Rule::IntIntro, Type::Int),
            Expr::BoolLit(_) => leaf(Rule::BoolIntro, Type::Bool),
            Expr::App(f, a) => {
                let df = self.under(AppFn, |c| c.synth(ctx, f))?;
                let (dom, cod) = match &df.ty {
                    Type::Arr(dom, cod) => ((**dom).clone(), (**cod).clone()),
                    other => {
                        return Err(TypeError::NotAFunction {
                            path: self.path.child(AppFn),
                            found: other.clone(),
                        })
                    }
                };
                let da = self.under(AppArg, |c| c.check(ctx, a, &dom))?;
                Ok(Self::node(Rule::ArrElim, ctx, e, Form::Synth, cod, vec![df, da]))
            }
            Expr::Anno(subject, ty) => {
                let d = self.under(AnnoSubject, |c| c.check(ctx, subject, ty))?;
                Ok(Self::node(Rule::Anno, ctx, e, Form::Synth, ty.clone(), vec![d]))
            }
            Expr::Proj(k, subject) => {
                let d = self.under(ProjSubject, |c| c.synth(ctx, subject))?;
                let ty = match (&d.ty, k) {
                    (Type::Prod(a, _), ProjIndex::First) => (**a).clone(),
                    (Type::Prod(_, b), ProjIndex::Second) => (**b).clone(),
                    (other, _) => {
                        return Err(TypeError::NotAProduct {
                            path: self.path.child(ProjSubject),
                            found: other.clone(),
                        })
                    }
                };
                Ok(Self::node(Rule::ProdElim, ctx, e, Form::Synth, ty, vec![d]))
            }
            Expr::BinOp(op, l, r) => {
                let operands = |c: &mut Self, operand_ty: &Type| -> Result<Vec<TypingDeriv>, TypeError> {
                    let dl = c.under(BinOpLeft, |c| c.check(ctx, l, operand_ty))?;
                    let dr = c.under(BinOpRight, |c| c.check(ctx, r, operand_ty))?;
                    Ok(vec![dl, dr])
                };
                if matches!(op, BinOpKind::Add | BinOpKind::Sub) {
                    if let Ok(ps) = operands(self, &Type::Int) {
                        return Ok(Self::node(Rule::IntOp, ctx, e, Form::Synth, Type::Int, ps));
                    }
                }
                let ps = operands(self, &Type::Rat)?;
                let ty = if *op == BinOpKind::Lt { Type::Bool } else { Type::Rat };
                Ok(Self::node(Rule::RatOp, ctx, e, Form::Synth, ty, ps))
            }
            Expr::Lam(..) | Expr::Pair(..) | Expr::If(..) => {
                Err(TypeError::CannotSynthesize { path: self.path.clone(), expr: e.clone() })
            }
        }
    }

    fn check(&mut self, ctx: &Ctx, e: &Expr, expected: &Type) -> Result<TypingDeriv, TypeError> {
        use Selector::*;
        match (e, expected) {
            (Expr::Lam(x, body), Type::Arr(dom, cod)) => {
                let inner = ctx.extend(x.clone(), (**dom).clone());
                let d = self.under(LamBody, |c| c.check(&inner, body, cod))?;
                Ok(Self::node(Rule::ArrIntro, ctx, e, Form::Check, expected.clone(), vec![d]))
            }
            (Expr::Pair(a, b), Type::Prod(ta, tb)) => {
                let da = self.under(Pair1, |c| c.check(ctx, a, ta))?;
                let db = self.under(Pair2, |c| c.check(ctx, b, tb))?;
                Ok(Self::node(Rule::ProdIntro, ctx, e, Form::Check, expected.clone(), vec![da, db]))
            }
            (Expr::If(cond, t, f), _) => {
                let dc = self.under(IfCond, |c| c.check(ctx, cond, &Type::Bool))?;
                let dt = self.under(IfThen, |c| c.check(ctx, t, expected))?;
                let df = self.under(IfElse, |c| c.check(ctx, f, expected))?;
                Ok(Self::node(Rule::BoolElim, ctx, e, Form::Check, expected.clone(), vec![dc, dt, df]))
            }
            _ => {
                let d = self.synth(ctx, e)?;
                let witness = match self.flavor {
                    Flavor::Deep => deep_sub(&d.ty, expected).map(SubWitness::Deep),
                    Flavor::Shallow => shallow_sub(&d.ty, expected)
                        .then(|| SubWitness::Shallow { from: d.ty.clone(), to: expected.clone() }),
                };
                match witness {
                    Some(w) => Ok(Self::node(Rule::Sub(w), ctx, e, Form::Check, expected.clone(), vec![d])),
                    None => Err(TypeError::Subsumption {
                        path: self.path.clone(),
                        found: d.ty,
                        expected: expected.clone(),
                        flavor: self.flavor,
                    }),
                }
            }
        }
    }
}

/// Replaces every `⇒`/`⇐` with `:`, yielding a declarative derivation of
/// the same shape.
pub fn erase_to_declarative(d: &TypingDeriv) -> TypingDeriv {
    TypingDeriv {
        rule: d.rule.clone(),
        ctx: d.ctx.clone(),
        expr: d.expr.clone(),
        form: Form::Colon,
        ty: d.ty.clone(),
        premises: d.premises.iter().map(erase_to_declarative).collect(),
    }
}

/// Where and why a derivation failed to validate. `path` lists premise
/// indices from the root, `/`-joined (`.` for the root).
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("at derivation node {path}: {message}")]
pub struct DerivCheckError {
    pub path: String,
    pub message: String,
}

/// Validates that every node of `d` instantiates its rule under `flavor`.
/// Accepts bidirectional derivations and colon-erased (declarative) ones,
/// but not a mixture.
pub fn check_typing_deriv(flavor: Flavor, d: &TypingDeriv) -> Result<(), DerivCheckError> {
    let declarative = d.form == Form::Colon;
    validate(flavor, declarative, d, &mut Vec::new())
}

fn validate(flavor: Flavor, declarative: bool, d: &TypingDeriv, path: &mut Vec<usize>) -> Result<(), DerivCheckError> {
    node_ok(flavor, declarative, d).map_err(|message| DerivCheckError {
        path: if path.is_empty() {
            ".".into()
        } else {
            path.iter().map(usize::to_string).collect::<Vec<_>>().join("/")
        },
        message,
    })?;
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        validate(flavor, declarative, p, path)?;
        path.pop();
    }
    Ok(())
}

fn node_ok(flavor: Flavor, declarative: bool, d: &TypingDeriv) -> Result<(), String> {
    use Form::{Check as C, Synth as S};

    let form = |bidir: Form| if declarative { Form::Colon } else { bidir };
    let expect = |cond: bool, msg: &str| if cond { Ok(()) } else { Err(msg.to_string()) };
    let arity = |n: usize| {
        expect(d.premises.len() == n, &format!("{} expects {n} premise(s), found {}", d.rule.name(), d.premises.len()))
    };
    // premise i has the given form, subject, type and (unless ArrIntro) context
    let premise = |i: usize, f: Form, e: &Expr, ty: &Type| -> Result<(), String> {
        let p = &d.premises[i];
        expect(p.form == form(f), &format!("premise {i} has the wrong judgment form"))?;
        expect(p.expr == *e, &format!("premise {i} is about the wrong subexpression"))?;
        expect(p.ty == *ty, &format!("premise {i} has type {}, expected {ty}", p.ty))
    };
    let same_ctx = || expect(d.premises.iter().all(|p| p.ctx == d.ctx), "premise context differs from conclusion");
    let conclusion = |f: Form| expect(d.form == form(f), "conclusion has the wrong judgment form");

    match (&d.rule, &d.expr) {
        (Rule::Var, Expr::Var(x)) => {
            arity(0)?;
            conclusion(S)?;
            expect(d.ctx.lookup(x) == Some(&d.ty), "variable's type does not match its context binding")
        }
        (Rule::ArrIntro, Expr::Lam(x, body)) => {
            arity(1)?;
            conclusion(C)?;
            let Type::Arr(dom, cod) = &d.ty else {
                return Err("lambda given a non-arrow type".into());
            };
            premise(0, C, body, cod)?;
            expect(
                d.premises[0].ctx == d.ctx.extend(x.clone(), (**dom).clone()),
                "body context is not the conclusion context extended with the binder",
            )
        }
        (Rule::ArrElim, Expr::App(f, a)) => {
            arity(2)?;
            conclusion(S)?;
            same_ctx()?;
            let Type::Arr(dom, cod) = &d.premises[0].ty else {
                return Err("function premise does not have an arrow type".into());
            };
            expect(**cod == d.ty, "result type differs from the function's codomain")?;
            premise(0, S, f, &d.premises[0].ty)?;
            premise(1, C, a, dom)
        }
        (Rule::Sub(w), _) => {
            arity(1)?;
            conclusion(C)?;
            same_ctx()?;
            let from = &d.premises[0].ty;
            premise(0, S, &d.expr, from)?;
            match (flavor, w) {
                (Flavor::Deep, SubWitness::Deep(sd)) => {
                    let (l, r) = check_sub_deriv(sd).map_err(|e| format!("bad subtyping witness: {e}"))?;
                    expect(l == *from && r == d.ty, "subtyping witness concludes the wrong judgment")
                }
                (Flavor::Shallow, SubWitness::Shallow { from: wf, to: wt }) => {
                    expect(wf == from && *wt == d.ty, "subtyping witness concludes the wrong judgment")?;
                    expect(shallow_sub(wf, wt), "witness is not a shallow subtyping")
                }
                (Flavor::Deep, SubWitness::Shallow { .. }) => Err("shallow witness in a deep derivation".into()),
                (Flavor::Shallow, SubWitness::Deep(_)) => {
                    Err("deep subtyping derivation used where only shallow subtyping is allowed".into())
                }
            }
        }
        (Rule::Anno, Expr::Anno(subject, ty)) => {
            arity(1)?;
            conclusion(S)?;
            same_ctx()?;
            expect(d.ty == *ty, "annotation type differs from conclusion")?;
            premise(0, C, subject, ty)
        }
        (Rule::ProdIntro, Expr::Pair(a, b)) => {
            arity(2)?;
            conclusion(C)?;
            same_ctx()?;
            let Type::Prod(ta, tb) = &d.ty else {
                return Err("pair given a non-product type".into());
            };
            premise(0, C, a, ta)?;
            premise(1, C, b, tb)
        }
        (Rule::ProdElim, Expr::Proj(k, subject)) => {
            arity(1)?;
            conclusion(S)?;
            same_ctx()?;
            let Type::Prod(ta, tb) = &d.premises[0].ty else {
                return Err("projection subject does not have a product type".into());
            };
            let component = if *k == ProjIndex::First { ta } else { tb };
            expect(**component == d.ty, "projection type differs from the component type")?;
            premise(0, S, subject, &d.premises[0].ty)
        }
        (Rule::IntIntro, Expr::IntLit(_)) => {
            arity(0)?;
            conclusion(S)?;
            expect(d.ty == Type::Int, "integer literal must have type int")
        }
        (Rule::BoolIntro, Expr::BoolLit(_)) => {
            arity(0)?;
            conclusion(S)?;
            expect(d.ty == Type::Bool, "boolean literal must have type bool")
        }
        (Rule::IntOp, Expr::BinOp(op, l, r)) => {
            arity(2)?;
            conclusion(S)?;
            same_ctx()?;
            let result = match op {
                BinOpKind::Add | BinOpKind::Sub => Type::Int,
                // only the declarative system has an integer comparison rule
                BinOpKind::Lt if declarative => Type::Bool,
                _ => return Err(format!("`{}` has no integer typing rule here", op.symbol())),
            };
            expect(d.ty == result, "wrong result type for integer operator")?;
            premise(0, C, l, &Type::Int)?;
            premise(1, C, r, &Type::Int)
        }
        (Rule::RatOp, Expr::BinOp(op, l, r)) => {
            arity(2)?;
            conclusion(S)?;
            same_ctx()?;
            let result = if *op == BinOpKind::Lt { Type::Bool } else { Type::Rat };
            expect(d.ty == result, "wrong result type for rational operator")?;
            premise(0, C, l, &Type::Rat)?;
            premise(1, C, r, &Type::Rat)
        }
        (Rule::BoolElim, Expr::If(c, t, f)) => {
            arity(3)?;
            conclusion(C)?;
            same_ctx()?;
            premise(0, C, c, &Type::Bool)?;
            premise(1, C, t, &d.ty)?;
            premise(2, C, f, &d.ty)
        }
        (rule, e) => Err(format!("rule {} does not apply to `{e}`", rule.name())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_expr, parse_type};

    fn e(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    #[test]
    fn synth_examples() {
        let (t, d) = synth(Flavor::Deep, &Ctx::empty(), &e("3")).unwrap();
        assert_eq!(t, Type::Int);
        assert_eq!(d.rule, Rule::IntIntro);
        assert!(d.premises.is_empty());

        let (t, _) = synth(Flavor::Deep, &Ctx::empty(), &e(r"(\x. x) : bool -> bool")).unwrap();
        assert_eq!(t, ty("bool -> bool"));

        assert!(matches!(
            synth(Flavor::Deep, &Ctx::empty(), &e(r"\x. x")),
            Err(TypeError::CannotSynthesize { .. })
        ));

        let (t, d) = synth(Flavor::Deep, &Ctx::empty(), &e("1 / 2")).unwrap();
        assert_eq!((t, d.rule), (Type::Rat, Rule::RatOp));
    }

    #[test]
    fn check_examples() {
        let d = check(Flavor::Deep, &Ctx::empty(), &e("3"), &Type::Rat).unwrap();
        assert_eq!(d.rule, Rule::Sub(SubWitness::Deep(crate::subtype::SubDeriv::int_rat())));
        assert_eq!(d.premises[0].rule, Rule::IntIntro);
        assert_eq!(d.to_sexp().to_string(), "(sub (int-rat) (int-intro))");

        let id = e(r"\x. x");
        let t = ty("(int -> int) -> (int -> rat)");
        assert!(matches!(
            check(Flavor::Shallow, &Ctx::empty(), &id, &t),
            Err(TypeError::Subsumption { flavor: Flavor::Shallow, .. })
        ));
        assert!(check(Flavor::Deep, &Ctx::empty(), &id, &t).is_ok());

        let d = check(Flavor::Shallow, &Ctx::empty(), &id, &ty("int -> rat")).unwrap();
        assert_eq!(d.rule, Rule::ArrIntro);
        assert_eq!(d.premises[0].rule, Rule::Sub(SubWitness::Shallow { from: Type::Int, to: Type::Rat }));
    }

    #[test]
    fn operator_rules() {
        let ctx = Ctx::empty();
        assert_eq!(synth(Flavor::Deep, &ctx, &e("1 + 2")).unwrap().1.rule, Rule::IntOp);
        assert_eq!(synth(Flavor::Deep, &ctx, &e("1 + 1 / 2")).unwrap().0, Type::Rat);
        let (t, d) = synth(Flavor::Shallow, &ctx, &e("1 < 2")).unwrap();
        assert_eq!((t, d.rule), (Type::Bool, Rule::RatOp));
        assert!(synth(Flavor::Deep, &ctx, &e("True + 1")).is_err());
    }

    #[test]
    fn errors_carry_paths() {
        let ctx = Ctx::empty();
        let err = synth(Flavor::Deep, &ctx, &e("(1 : int) (y 2)")).unwrap_err();
        assert_eq!(err.path().to_string(), "app-fn");
        let err = synth(Flavor::Deep, &ctx, &e(r"((\x. y) : int -> int) 2")).unwrap_err();
        assert!(matches!(err, TypeError::Unbound { .. }));
        assert_eq!(err.path().to_string(), "app-fn/anno-subject/lam-body");
        let err = synth(Flavor::Deep, &ctx, &e("(3 : int).1")).unwrap_err();
        assert!(matches!(err, TypeError::NotAProduct { .. }));
    }

    #[test]
    fn derivation_checker() {
        let ctx: Ctx = [(Ident::new("f").unwrap(), ty("rat -> int"))].into_iter().collect();
        let (_, d) = synth(Flavor::Deep, &ctx, &e("f 3 + 1")).unwrap();
        assert_eq!(check_typing_deriv(Flavor::Deep, &d), Ok(()));

        // swapping the premises of an application breaks it
        let (_, mut app) = synth(Flavor::Deep, &ctx, &e("f 3")).unwrap();
        app.premises.swap(0, 1);
        assert!(check_typing_deriv(Flavor::Deep, &app).is_err());

        // a deep derivation using arrow subtyping is not a shallow one
        let d = check(Flavor::Deep, &Ctx::empty(), &e(r"(\x. x) : int -> int"), &ty("int -> rat")).unwrap();
        assert!(check_typing_deriv(Flavor::Deep, &d).is_ok());
        let err = check_typing_deriv(Flavor::Shallow, &d).unwrap_err();
        assert_eq!(err.path, ".");
    }

    #[test]
    fn erasure_preserves_shape_and_validates() {
        let ctx: Ctx = [(Ident::new("p").unwrap(), ty("int * rat"))].into_iter().collect();
        let d = check(Flavor::Deep, &ctx, &e(r"(if p.1 < 2 then (\x. x) else (\y. p.2))"), &ty("int -> rat")).unwrap();
        let erased = erase_to_declarative(&d);
        assert_eq!(erased.node_count(), d.node_count());
        assert!(erased.premises.iter().all(|p| p.form == Form::Colon));
        assert_eq!(check_typing_deriv(Flavor::Deep, &erased), Ok(()));

        let (_, leaf) = synth(Flavor::Deep, &Ctx::empty(), &e("3")).unwrap();
        let erased = erase_to_declarative(&leaf);
        assert_eq!((erased.form, &erased.ty), (Form::Colon, &Type::Int));

        // mixed forms are rejected
        let mut mixed = erased.clone();
        mixed.form = Form::Synth;
        let mut outer = erase_to_declarative(&d);
        outer.premises[0] = mixed;
        assert!(check_typing_deriv(Flavor::Deep, &outer).is_err());
    }

    #[test]
    fn weakening_threads_binding() {
        let (_, d) = synth(Flavor::Shallow, &Ctx::empty(), &e(r"((\x. x) : int -> int) 1")).unwrap();
        let z = Ident::new("z").unwrap();
        let w = d.weakened(0, &z, &Type::Bool);
        assert_eq!(check_typing_deriv(Flavor::Shallow, &w), Ok(()));
        assert_eq!(w.ctx.lookup(&z), Some(&Type::Bool));
    }
}
