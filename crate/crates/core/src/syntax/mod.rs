//! Abstract syntax of the source language: types, expressions, typing
//! contexts, and paths into expression trees.

mod parse;
mod pretty;
mod terms;

use std::fmt;
use std::str::FromStr;

pub use parse::{parse_elaborated_expr, parse_expr, parse_type, ParseError, ParseErrorKind};
pub use pretty::{pretty_expr, pretty_type};
pub use terms::{all_idents, alpha_eq, free_vars, fresh_var, NameSupply};

/// Prefix reserved for machine-generated binders.
pub const GENERATED_PREFIX: &str = "_eta_";

const RESERVED_WORDS: &[&str] = &["if", "then", "else", "True", "False", "int", "rat", "bool"];

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum IdentError {
    #[error("`{0}` is not a valid identifier")]
    Malformed(String),
    #[error("`{0}` is a reserved word")]
    Reserved(String),
    #[error("`{0}` uses the prefix reserved for generated names")]
    ReservedPrefix(String),
}

/// A variable name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ident(String);

impl Ident {
    /// Validates a user-written name.
    pub fn new(name: impl Into<String>) -> Result<Ident, IdentError> {
        let name = name.into();
        if name.starts_with(GENERATED_PREFIX) {
            return Err(IdentError::ReservedPrefix(name));
        }
        let mut chars = name.chars();
        let well_formed = chars.next().is_some_and(|c| c.is_ascii_alphabetic())
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !well_formed {
            return Err(IdentError::Malformed(name));
        }
        if RESERVED_WORDS.contains(&name.as_str()) {
            return Err(IdentError::Reserved(name));
        }
        Ok(Ident(name))
    }

    /// The `n`th machine-generated name, `_eta_<n>`.
    pub fn generated(n: usize) -> Ident {
        Ident(format!("{GENERATED_PREFIX}{n}"))
    }

    /// Accepts either a user name or a well-formed generated name.
    pub fn new_or_generated(name: impl Into<String>) -> Result<Ident, IdentError> {
        let name = name.into();
        match generated_index(&name) {
            Some(_) => Ok(Ident(name)),
            None => Ident::new(name),
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_generated(&self) -> bool {
        generated_index(&self.0).is_some()
    }
}

fn generated_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix(GENERATED_PREFIX)?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    // `_eta_01` would not round-trip through `Ident::generated`.
    if digits.len() > 1 && digits.starts_with('0') {
        return None;
    }
    digits.parse().ok()
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Type {
    Int,
    Rat,
    Bool,
    Arr(Box<Type>, Box<Type>),
    Prod(Box<Type>, Box<Type>),
}

impl Type {
    pub fn arr(dom: Type, cod: Type) -> Type {
        Type::Arr(Box::new(dom), Box::new(cod))
    }

    pub fn prod(left: Type, right: Type) -> Type {
        Type::Prod(Box::new(left), Box::new(right))
    }

    /// Height of the type tree; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Type::Int | Type::Rat | Type::Bool => 0,
            Type::Arr(a, b) | Type::Prod(a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty_type(self))
    }
}

impl FromStr for Type {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Type, ParseError> {
        parse_type(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOpKind {
    Add,
    Sub,
    Lt,
    Div,
}

impl BinOpKind {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOpKind::Add => "+",
            BinOpKind::Sub => "-",
            BinOpKind::Lt => "<",
            BinOpKind::Div => "/",
        }
    }
}

/// Projection index; only `1` and `2` exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProjIndex {
    First,
    Second,
}

impl ProjIndex {
    pub fn from_number(k: i64) -> Option<ProjIndex> {
        match k {
            1 => Some(ProjIndex::First),
            2 => Some(ProjIndex::Second),
            _ => None,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            ProjIndex::First => 1,
            ProjIndex::Second => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(Ident),
    Lam(Ident, Box<Expr>),
    App(Box<Expr>, Box<Expr>),
    Anno(Box<Expr>, Type),
    IntLit(i64),
    BinOp(BinOpKind, Box<Expr>, Box<Expr>),
    BoolLit(bool),
    If(Box<Expr>, Box<Expr>, Box<Expr>),
    Pair(Box<Expr>, Box<Expr>),
    Proj(ProjIndex, Box<Expr>),
}

impl Expr {
    pub fn var(name: &Ident) -> Expr {
        Expr::Var(name.clone())
    }

    pub fn lam(binder: Ident, body: Expr) -> Expr {
        Expr::Lam(binder, Box::new(body))
    }

    pub fn app(fun: Expr, arg: Expr) -> Expr {
        Expr::App(Box::new(fun), Box::new(arg))
    }

    pub fn anno(subject: Expr, ty: Type) -> Expr {
        Expr::Anno(Box::new(subject), ty)
    }

    pub fn binop(op: BinOpKind, left: Expr, right: Expr) -> Expr {
        Expr::BinOp(op, Box::new(left), Box::new(right))
    }

    pub fn if_(cond: Expr, then: Expr, else_: Expr) -> Expr {
        Expr::If(Box::new(cond), Box::new(then), Box::new(else_))
    }

    pub fn pair(first: Expr, second: Expr) -> Expr {
        Expr::Pair(Box::new(first), Box::new(second))
    }

    pub fn proj(index: ProjIndex, subject: Expr) -> Expr {
        Expr::Proj(index, Box::new(subject))
    }

    /// Immediate subexpressions, tagged with the slot they occupy.
    pub fn children(&self) -> Vec<(Selector, &Expr)> {
        use Selector::*;
        match self {
            Expr::Var(_) | Expr::IntLit(_) | Expr::BoolLit(_) => vec![],
            Expr::Lam(_, body) => vec![(LamBody, body)],
            Expr::App(f, a) => vec![(AppFn, f), (AppArg, a)],
            Expr::Anno(e, _) => vec![(AnnoSubject, e)],
            Expr::BinOp(_, l, r) => vec![(BinOpLeft, l), (BinOpRight, r)],
            Expr::If(c, t, e) => vec![(IfCond, c), (IfThen, t), (IfElse, e)],
            Expr::Pair(a, b) => vec![(Pair1, a), (Pair2, b)],
            Expr::Proj(_, e) => vec![(ProjSubject, e)],
        }
    }

    pub fn child(&self, sel: Selector) -> Option<&Expr> {
        use Selector::*;
        let child = match (self, sel) {
            (Expr::Lam(_, b), LamBody) => b,
            (Expr::App(f, _), AppFn) => f,
            (Expr::App(_, a), AppArg) => a,
            (Expr::Anno(e, _), AnnoSubject) => e,
            (Expr::BinOp(_, l, _), BinOpLeft) => l,
            (Expr::BinOp(_, _, r), BinOpRight) => r,
            (Expr::If(c, _, _), IfCond) => c,
            (Expr::If(_, t, _), IfThen) => t,
            (Expr::If(_, _, e), IfElse) => e,
            (Expr::Pair(a, _), Pair1) => a,
            (Expr::Pair(_, b), Pair2) => b,
            (Expr::Proj(_, e), ProjSubject) => e,
            _ => return None,
        };
        Some(child)
    }

    fn child_mut(&mut self, sel: Selector) -> Option<&mut Expr> {
        use Selector::*;
        let child = match (self, sel) {
            (Expr::Lam(_, b), LamBody) => b,
            (Expr::App(f, _), AppFn) => f,
            (Expr::App(_, a), AppArg) => a,
            (Expr::Anno(e, _), AnnoSubject) => e,
            (Expr::BinOp(_, l, _), BinOpLeft) => l,
            (Expr::BinOp(_, _, r), BinOpRight) => r,
            (Expr::If(c, _, _), IfCond) => c,
            (Expr::If(_, t, _), IfThen) => t,
            (Expr::If(_, _, e), IfElse) => e,
            (Expr::Pair(a, _), Pair1) => a,
            (Expr::Pair(_, b), Pair2) => b,
            (Expr::Proj(_, e), ProjSubject) => e,
            _ => return None,
        };
        Some(child)
    }

    /// The node addressed by `path`, if the path is valid.
    pub fn at(&self, path: &Path) -> Option<&Expr> {
        path.selectors()
            .iter()
            .try_fold(self, |node, &sel| node.child(sel))
    }

    pub fn at_mut(&mut self, path: &Path) -> Option<&mut Expr> {
        let mut node = self;
        for &sel in path.selectors() {
            node = node.child_mut(sel)?;
        }
        Some(node)
    }

    /// Copy of `self` with the child in slot `sel` replaced.
    ///
    /// Panics if `sel` is not a slot of this node.
    pub fn with_child(&self, sel: Selector, new: Expr) -> Expr {
        let mut out = self.clone();
        *out.child_mut(sel)
            .unwrap_or_else(|| panic!("{sel} is not a slot of this node")) = new;
        out
    }

    pub fn node_count(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(|(_, c)| c.node_count())
            .sum::<usize>()
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty_expr(self))
    }
}

/// Names one child slot of an expression node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Selector {
    LamBody,
    AppFn,
    AppArg,
    Pair1,
    Pair2,
    ProjSubject,
    AnnoSubject,
    IfCond,
    IfThen,
    IfElse,
    BinOpLeft,
    BinOpRight,
}

impl Selector {
    pub const ALL: [Selector; 12] = [
        Selector::LamBody,
        Selector::AppFn,
        Selector::AppArg,
        Selector::Pair1,
        Selector::Pair2,
        Selector::ProjSubject,
        Selector::AnnoSubject,
        Selector::IfCond,
        Selector::IfThen,
        Selector::IfElse,
        Selector::BinOpLeft,
        Selector::BinOpRight,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Selector::LamBody => "lam-body",
            Selector::AppFn => "app-fn",
            Selector::AppArg => "app-arg",
            Selector::Pair1 => "pair-1",
            Selector::Pair2 => "pair-2",
            Selector::ProjSubject => "proj-subject",
            Selector::AnnoSubject => "anno-subject",
            Selector::IfCond => "if-cond",
            Selector::IfThen => "if-then",
            Selector::IfElse => "if-else",
            Selector::BinOpLeft => "binop-left",
            Selector::BinOpRight => "binop-right",
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Selector {
    type Err = PathError;

    fn from_str(s: &str) -> Result<Selector, PathError> {
        Selector::ALL
            .into_iter()
            .find(|sel| sel.name() == s)
            .ok_or_else(|| PathError(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown path selector `{0}`")]
pub struct PathError(String);

/// A route from the root of an expression to one of its nodes.
///
/// Written as `/`-joined selector names, or `.` for the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Path(Vec<Selector>);

impl Path {
    pub fn root() -> Path {
        Path(Vec::new())
    }

    pub fn new(selectors: Vec<Selector>) -> Path {
        Path(selectors)
    }

    pub fn selectors(&self) -> &[Selector] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, sel: Selector) -> Path {
        let mut p = self.clone();
        p.0.push(sel);
        p
    }

    /// `prefix ++ self`.
    pub fn under(&self, prefix: &Path) -> Path {
        let mut p = prefix.0.clone();
        p.extend_from_slice(&self.0);
        Path(p)
    }

    pub fn push(&mut self, sel: Selector) {
        self.0.push(sel);
    }

    pub fn pop(&mut self) -> Option<Selector> {
        self.0.pop()
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str(".");
        }
        for (i, sel) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            f.write_str(sel.name())?;
        }
        Ok(())
    }
}

impl FromStr for Path {
    type Err = PathError;

    fn from_str(s: &str) -> Result<Path, PathError> {
        if s == "." {
            return Ok(Path::root());
        }
        s.split('/').map(str::parse).collect::<Result<_, _>>().map(Path)
    }
}

/// Typing assumptions. Lookup finds the rightmost binding for a name.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Ctx(Vec<(Ident, Type)>);

impl Ctx {
    pub fn empty() -> Ctx {
        Ctx(Vec::new())
    }

    pub fn lookup(&self, name: &Ident) -> Option<&Type> {
        self.0.iter().rev().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn extend(&self, name: Ident, ty: Type) -> Ctx {
        let mut out = self.clone();
        out.0.push((name, ty));
        out
    }

    /// Inserts a binding at `index`, keeping later bindings to its right.
    pub fn insert(&self, index: usize, name: Ident, ty: Type) -> Ctx {
        let mut out = self.clone();
        out.0.insert(index, (name, ty));
        out
    }

    pub fn bindings(&self) -> &[(Ident, Type)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<(Ident, Type)> for Ctx {
    fn from_iter<I: IntoIterator<Item = (Ident, Type)>>(iter: I) -> Ctx {
        Ctx(iter.into_iter().collect())
    }
}

impl fmt::Display for Ctx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("∅");
        }
        for (i, (x, t)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} : {t}")?;
        }
        Ok(())
    }
}
