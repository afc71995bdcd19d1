//! η-reduction: the two local rules, replayable traces, and a bounded
//! search used as an independent oracle for traces.
//!
//! ```text
//! \x. f x      →  f      (x not free in f)
//! (g.1, g'.2)  →  g      (g and g' α-equal)
//! ```
//!
//! A trace is an ordered list of steps, each naming the rule and the path of
//! the redex in the *current* term. Its file form has one `<path> <rule>`
//! per line, for example `lam-body/app-fn arr`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::syntax::{alpha_eq, free_vars, Expr, Ident, Path, ProjIndex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EtaRule {
    ArrEta,
    ProdEta,
}

impl EtaRule {
    pub fn name(self) -> &'static str {
        match self {
            EtaRule::ArrEta => "arr",
            EtaRule::ProdEta => "prod",
        }
    }
}

impl fmt::Display for EtaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EtaStep {
    pub at: Path,
    pub rule: EtaRule,
}

impl EtaStep {
    pub fn new(at: Path, rule: EtaRule) -> EtaStep {
        EtaStep { at, rule }
    }

    pub fn root(rule: EtaRule) -> EtaStep {
        EtaStep::new(Path::root(), rule)
    }
}

impl fmt::Display for EtaStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.at, self.rule)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct EtaTrace {
    pub steps: Vec<EtaStep>,
}

impl EtaTrace {
    pub fn empty() -> EtaTrace {
        EtaTrace::default()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn count(&self, rule: EtaRule) -> usize {
        self.steps.iter().filter(|s| s.rule == rule).count()
    }

    pub fn push(&mut self, step: EtaStep) {
        self.steps.push(step);
    }

    /// Appends `other`'s steps, each moved under `prefix`.
    pub fn extend_under(&mut self, prefix: &Path, other: &EtaTrace) {
        self.steps
            .extend(other.steps.iter().map(|s| EtaStep::new(s.at.under(prefix), s.rule)));
    }

    /// The same steps addressed inside the subterm at `prefix`.
    pub fn relocated(&self, prefix: &Path) -> EtaTrace {
        let mut t = EtaTrace::empty();
        t.extend_under(prefix, self);
        t
    }
}

impl FromIterator<EtaStep> for EtaTrace {
    fn from_iter<I: IntoIterator<Item = EtaStep>>(iter: I) -> EtaTrace {
        EtaTrace { steps: iter.into_iter().collect() }
    }
}

impl fmt::Display for EtaTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            writeln!(f, "{step}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("trace line {line}: {message}")]
pub struct TraceParseError {
    pub line: usize,
    pub message: String,
}

impl FromStr for EtaTrace {
    type Err = TraceParseError;

    /// Blank lines are ignored.
    fn from_str(text: &str) -> Result<EtaTrace, TraceParseError> {
        let mut steps = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let err = |message: String| TraceParseError { line: i + 1, message };
            let words: Vec<&str> = line.split_whitespace().collect();
            match words[..] {
                [] => {}
                [path, rule] => {
                    let at = path.parse().map_err(|e| err(format!("{e}")))?;
                    let rule = match rule {
                        "arr" => EtaRule::ArrEta,
                        "prod" => EtaRule::ProdEta,
                        other => return Err(err(format!("unknown rule `{other}`; expected `arr` or `prod`"))),
                    };
                    steps.push(EtaStep { at, rule });
                }
                _ => return Err(err("expected `<path> <rule>`".into())),
            }
        }
        Ok(EtaTrace { steps })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StepError {
    #[error("path {0} does not address a node")]
    InvalidPath(Path),
    #[error("the node at {at} is not a {rule} η-redex")]
    NotARedex { at: Path, rule: EtaRule },
    #[error("the node at {at} binds `{var}`, which occurs free in the function")]
    Capture { at: Path, var: Ident },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("step {index}: {error}")]
pub struct TraceError {
    pub index: usize,
    pub error: StepError,
}

/// Contracts `e` by the rule applied at its root.
fn contract(e: &Expr, rule: EtaRule, at: &Path) -> Result<Expr, StepError> {
    let not_redex = || StepError::NotARedex { at: at.clone(), rule };
    match (rule, e) {
        (EtaRule::ArrEta, Expr::Lam(x, body)) => match &**body {
            Expr::App(f, arg) if matches!(&**arg, Expr::Var(y) if y == x) => {
                if free_vars(f).contains(x) {
                    Err(StepError::Capture { at: at.clone(), var: x.clone() })
                } else {
                    Ok((**f).clone())
                }
            }
            _ => Err(not_redex()),
        },
        (EtaRule::ProdEta, Expr::Pair(a, b)) => match (&**a, &**b) {
            (Expr::Proj(ProjIndex::First, g), Expr::Proj(ProjIndex::Second, g2)) if alpha_eq(g, g2) => {
                Ok((**g).clone())
            }
            _ => Err(not_redex()),
        },
        _ => Err(not_redex()),
    }
}

pub fn step_at(e: &Expr, s: &EtaStep) -> Result<Expr, StepError> {
    let mut out = e.clone();
    let node = out.at_mut(&s.at).ok_or_else(|| StepError::InvalidPath(s.at.clone()))?;
    *node = contract(node, s.rule, &s.at)?;
    Ok(out)
}

pub fn apply_trace(e: &Expr, t: &EtaTrace) -> Result<Expr, TraceError> {
    t.steps.iter().enumerate().try_fold(e.clone(), |cur, (index, s)| {
        step_at(&cur, s).map_err(|error| TraceError { index, error })
    })
}

/// Whether replaying `t` from `source` ends at a term α-equal to `target`.
pub fn verify_trace(source: &Expr, t: &EtaTrace, target: &Expr) -> bool {
    apply_trace(source, t).is_ok_and(|out| alpha_eq(&out, target))
}

/// Every η-redex in `e`, in preorder.
pub fn redexes(e: &Expr) -> Vec<EtaStep> {
    fn go(e: &Expr, path: &mut Path, out: &mut Vec<EtaStep>) {
        for rule in [EtaRule::ArrEta, EtaRule::ProdEta] {
            if contract(e, rule, path).is_ok() {
                out.push(EtaStep::new(path.clone(), rule));
            }
        }
        for (sel, child) in e.children() {
            path.push(sel);
            go(child, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(e, &mut Path::root(), &mut out);
    out
}

/// Looks for a trace of at most `fuel` steps from `source` to a term
/// α-equal to `target`, trying every redex at every step.
///
/// Each step shrinks the term, so states smaller than `target` are
/// abandoned; states already explored with at least as much fuel are not
/// revisited. The result depends only on the inputs.
pub fn reduce_search(source: &Expr, target: &Expr, fuel: usize) -> Option<EtaTrace> {
    let mut search = Search {
        target,
        target_size: target.node_count(),
        seen: HashMap::new(),
        steps: Vec::new(),
    };
    search.run(source, fuel).then(|| search.steps.into_iter().collect())
}

struct Search<'a> {
    target: &'a Expr,
    target_size: usize,
    seen: HashMap<Expr, usize>,
    steps: Vec<EtaStep>,
}

impl Search<'_> {
    fn run(&mut self, cur: &Expr, fuel: usize) -> bool {
        let size = cur.node_count();
        if size == self.target_size && alpha_eq(cur, self.target) {
            return true;
        }
        if fuel == 0 || size <= self.target_size {
            return false;
        }
        match self.seen.get(cur) {
            Some(&explored) if explored >= fuel => return false,
            _ => {
                self.seen.insert(cur.clone(), fuel);
            }
        }
        // outermost first: contracting an outer redex discards any
        // redexes inside the copy it drops
        let mut steps = redexes(cur);
        steps.sort_by_key(|s| s.at.selectors().len());
        for step in steps {
            let next = step_at(cur, &step).expect("enumerated redex contracts");
            self.steps.push(step);
            if self.run(&next, fuel - 1) {
                return true;
            }
            self.steps.pop();
        }
        false
    }
}
