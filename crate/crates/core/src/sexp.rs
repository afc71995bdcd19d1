//! Minimal s-expressions for derivation and type files.
//!
//! Atoms are any run of characters other than whitespace and parentheses, so
//! `.` and `lam-body/app-fn` are ordinary atoms. `;` starts a comment.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SexpError {
    #[error("{line}:{column}: unexpected `)`")]
    UnexpectedClose { line: usize, column: usize },
    #[error("unclosed `(` opened at {line}:{column}")]
    Unclosed { line: usize, column: usize },
    #[error("expected exactly one s-expression, found {0}")]
    NotSingle(usize),
    #[error("malformed {what}: {found}")]
    Shape { what: &'static str, found: String },
}

impl SexpError {
    pub fn shape(what: &'static str, found: &Sexp) -> SexpError {
        SexpError::Shape { what, found: found.to_string() }
    }
}

impl Sexp {
    pub fn atom(s: impl Into<String>) -> Sexp {
        Sexp::Atom(s.into())
    }

    /// `(head args...)`
    pub fn tagged(head: &str, args: impl IntoIterator<Item = Sexp>) -> Sexp {
        let mut items = vec![Sexp::atom(head)];
        items.extend(args);
        Sexp::List(items)
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(s) => Some(s),
            Sexp::List(_) => None,
        }
    }

    /// Splits `(head args...)` into its head atom and arguments.
    pub fn as_tagged(&self) -> Option<(&str, &[Sexp])> {
        match self {
            Sexp::List(items) => match items.split_first() {
                Some((Sexp::Atom(head), rest)) => Some((head, rest)),
                _ => None,
            },
            Sexp::Atom(_) => None,
        }
    }

    /// Multi-line rendering, breaking lists that do not fit in `width`.
    pub fn pretty(&self, width: usize) -> String {
        let mut out = String::new();
        self.write_pretty(0, width, &mut out);
        out
    }

    fn write_pretty(&self, indent: usize, width: usize, out: &mut String) {
        let flat = self.to_string();
        match self {
            Sexp::List(items) if indent + flat.len() > width && items.len() > 1 => {
                out.push('(');
                out.push_str(&items[0].to_string());
                for item in &items[1..] {
                    out.push('\n');
                    out.push_str(&" ".repeat(indent + 2));
                    item.write_pretty(indent + 2, width, out);
                }
                out.push(')');
            }
            _ => out.push_str(&flat),
        }
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom(s) => f.write_str(s),
            Sexp::List(items) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

pub fn parse_all(text: &str) -> Result<Vec<Sexp>, SexpError> {
    let mut stack: Vec<(Vec<Sexp>, usize, usize)> = Vec::new();
    let mut top = Vec::new();
    let mut atom = String::new();
    let (mut line, mut column) = (1, 0);
    let mut chars = text.chars().peekable();

    fn flush(atom: &mut String, stack: &mut [(Vec<Sexp>, usize, usize)], top: &mut Vec<Sexp>) {
        if !atom.is_empty() {
            let a = Sexp::Atom(std::mem::take(atom));
            match stack.last_mut() {
                Some((items, ..)) => items.push(a),
                None => top.push(a),
            }
        }
    }

    while let Some(c) = chars.next() {
        column += 1;
        match c {
            '(' => {
                flush(&mut atom, &mut stack, &mut top);
                stack.push((Vec::new(), line, column));
            }
            ')' => {
                flush(&mut atom, &mut stack, &mut top);
                let (items, ..) = stack
                    .pop()
                    .ok_or(SexpError::UnexpectedClose { line, column })?;
                let list = Sexp::List(items);
                match stack.last_mut() {
                    Some((parent, ..)) => parent.push(list),
                    None => top.push(list),
                }
            }
            ';' => {
                flush(&mut atom, &mut stack, &mut top);
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
            }
            c if c.is_whitespace() => {
                flush(&mut atom, &mut stack, &mut top);
                if c == '\n' {
                    line += 1;
                    column = 0;
                }
            }
            c => atom.push(c),
        }
    }
    flush(&mut atom, &mut stack, &mut top);
    if let Some((_, line, column)) = stack.first() {
        return Err(SexpError::Unclosed { line: *line, column: *column });
    }
    Ok(top)
}

pub fn parse_one(text: &str) -> Result<Sexp, SexpError> {
    let mut all = parse_all(text)?;
    if all.len() != 1 {
        return Err(SexpError::NotSingle(all.len()));
    }
    Ok(all.pop().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_nested_lists_and_odd_atoms() {
        let s = parse_one("(steps (step . eta) (step lam-body/app-fn beta)) ; trailing").unwrap();
        assert_eq!(s.to_string(), "(steps (step . eta) (step lam-body/app-fn beta))");
        let (head, args) = s.as_tagged().unwrap();
        assert_eq!(head, "steps");
        assert_eq!(args.len(), 2);
    }

    #[test]
    fn reports_unbalanced_input() {
        assert!(matches!(parse_one("(a (b)"), Err(SexpError::Unclosed { line: 1, column: 1 })));
        assert!(matches!(parse_one("a)"), Err(SexpError::UnexpectedClose { .. })));
        assert!(matches!(parse_one("a b"), Err(SexpError::NotSingle(2))));
    }

    #[test]
    fn pretty_output_reparses() {
        let s = parse_one("(a (bbbbbbbb cccccccc) (dddddddd (eeeeeeee ffffffff)))").unwrap();
        let p = s.pretty(20);
        assert!(p.contains('\n'));
        assert_eq!(parse_one(&p).unwrap(), s);
    }
}
