//! Lexer and recursive-descent parser for `.lam` source text.

use std::fmt;

use super::{BinOpKind, Expr, Ident, IdentError, ProjIndex, Type, GENERATED_PREFIX};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical(String),
    Syntax(String),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Lexical(msg) => {
                write!(f, "{}:{}: lexical error: {msg}", self.line, self.column)
            }
            ParseErrorKind::Syntax(msg) => {
                write!(f, "{}:{}: syntax error: {msg}", self.line, self.column)
            }
        }
    }
}

/// Parses a user-written program. Generated `_eta_<n>` names are rejected.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    Parser::new(text, false)?.expr_to_end()
}

/// Parses elaborator output, which may bind `_eta_<n>` names.
pub fn parse_elaborated_expr(text: &str) -> Result<Expr, ParseError> {
    Parser::new(text, true)?.expr_to_end()
}

pub fn parse_type(text: &str) -> Result<Type, ParseError> {
    let mut p = Parser::new(text, false)?;
    let ty = p.ty()?;
    p.expect_end()?;
    Ok(ty)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Backslash,
    Dot,
    Colon,
    Comma,
    LParen,
    RParen,
    Arrow,
    Star,
    Plus,
    Minus,
    Lt,
    Slash,
    Int(i64),
    Ident(Ident),
    If,
    Then,
    Else,
    True,
    False,
    TyInt,
    TyRat,
    TyBool,
    Eof,
}

impl Tok {
    /// Tokens after which `-1` means subtraction rather than a literal.
    fn ends_operand(&self) -> bool {
        matches!(self, Tok::Int(_) | Tok::Ident(_) | Tok::True | Tok::False | Tok::RParen)
    }

    fn describe(&self) -> String {
        match self {
            Tok::Backslash => "`\\`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Star => "`*`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Int(n) => format!("integer `{n}`"),
            Tok::Ident(x) => format!("identifier `{x}`"),
            Tok::If => "`if`".into(),
            Tok::Then => "`then`".into(),
            Tok::Else => "`else`".into(),
            Tok::True => "`True`".into(),
            Tok::False => "`False`".into(),
            Tok::TyInt => "`int`".into(),
            Tok::TyRat => "`rat`".into(),
            Tok::TyBool => "`bool`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str, allow_generated: bool) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks: Vec<Spanned> = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);

    let lex_err = |line, column, msg: String| ParseError {
        line,
        column,
        kind: ParseErrorKind::Lexical(msg),
    };

    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, column);
        let peek = chars.get(i + 1).copied();

        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        if c == '-' && peek == Some('-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }

        let negative_literal = c == '-'
            && peek.is_some_and(|d| d.is_ascii_digit())
            && !toks.last().is_some_and(|t| t.tok.ends_operand());

        let (tok, len) = if c.is_ascii_digit() || negative_literal {
            let mut j = i + 1;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let lexeme: String = chars[i..j].iter().collect();
            let n = lexeme.parse::<i64>().map_err(|_| {
                lex_err(start_line, start_col, format!("integer literal `{lexeme}` is out of range"))
            })?;
            (Tok::Int(n), j - i)
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i + 1;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let word: String = chars[i..j].iter().collect();
            let tok = match word.as_str() {
                "if" => Tok::If,
                "then" => Tok::Then,
                "else" => Tok::Else,
                "True" => Tok::True,
                "False" => Tok::False,
                "int" => Tok::TyInt,
                "rat" => Tok::TyRat,
                "bool" => Tok::TyBool,
                _ => {
                    let ident = if allow_generated {
                        Ident::new_or_generated(word)
                    } else {
                        Ident::new(word)
                    };
                    match ident {
                        Ok(x) => Tok::Ident(x),
                        Err(IdentError::ReservedPrefix(w)) => {
                            return Err(lex_err(
                                start_line,
                                start_col,
                                format!("`{w}`: the prefix `{GENERATED_PREFIX}` is reserved for generated names"),
                            ))
                        }
                        Err(e) => return Err(lex_err(start_line, start_col, e.to_string())),
                    }
                }
            };
            (tok, j - i)
        } else {
            let (tok, len) = match (c, peek) {
                ('-', Some('>')) => (Tok::Arrow, 2),
                ('\\', _) => (Tok::Backslash, 1),
                ('.', _) => (Tok::Dot, 1),
                (':', _) => (Tok::Colon, 1),
                (',', _) => (Tok::Comma, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('*', _) => (Tok::Star, 1),
                ('+', _) => (Tok::Plus, 1),
                ('-', _) => (Tok::Minus, 1),
                ('<', _) => (Tok::Lt, 1),
                ('/', _) => (Tok::Slash, 1),
                _ => {
                    return Err(lex_err(start_line, start_col, format!("unexpected character `{c}`")))
                }
            };
            (tok, len)
        };
        toks.push(Spanned { tok, line: start_line, column: start_col });
        i += len;
        column += len;
    }
    toks.push(Spanned { tok: Tok::Eof, line, column });
    Ok(toks)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn new(text: &str, allow_generated: bool) -> Result<Parser, ParseError> {
        Ok(Parser { toks: lex(text, allow_generated)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let here = &self.toks[self.pos];
        Err(ParseError {
            line: here.line,
            column: here.column,
            kind: ParseErrorKind::Syntax(msg.into()),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", tok.describe(), self.peek().describe()))
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            t => self.error(format!("unexpected {} after complete input", t.describe())),
        }
    }

    fn expr_to_end(&mut self) -> Result<Expr, ParseError> {
        let e = self.expr()?;
        self.expect_end()?;
        Ok(e)
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Backslash => {
                self.bump();
                let binder = match self.peek().clone() {
                    Tok::Ident(x) => {
                        self.bump();
                        x
                    }
                    t => {
                        return self.error(format!(
                            "expected a variable after `\\`, found {}",
                            t.describe()
                        ))
                    }
                };
                self.expect(Tok::Dot)?;
                Ok(Expr::lam(binder, self.expr()?))
            }
            Tok::If => {
                self.bump();
                let cond = self.expr()?;
                self.expect(Tok::Then)?;
                let then = self.expr()?;
                self.expect(Tok::Else)?;
                let else_ = self.expr()?;
                Ok(Expr::if_(cond, then, else_))
            }
            _ => {
                let subject = self.cmp()?;
                if *self.peek() == Tok::Colon {
                    self.bump();
                    Ok(Expr::anno(subject, self.ty()?))
                } else {
                    Ok(subject)
                }
            }
        }
    }

    fn cmp(&mut self) -> Result<Expr, ParseError> {
        let left = self.add()?;
        if *self.peek() == Tok::Lt {
            self.bump();
            let right = self.add()?;
            return Ok(Expr::binop(BinOpKind::Lt, left, right));
        }
        Ok(left)
    }

    fn add(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.mul()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOpKind::Add,
                Tok::Minus => BinOpKind::Sub,
                _ => return Ok(left),
            };
            self.bump();
            left = Expr::binop(op, left, self.mul()?);
        }
    }

    fn mul(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.app()?;
        while *self.peek() == Tok::Slash {
            self.bump();
            left = Expr::binop(BinOpKind::Div, left, self.app()?);
        }
        Ok(left)
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Ident(_) | Tok::Int(_) | Tok::True | Tok::False | Tok::LParen
        )
    }

    fn app(&mut self) -> Result<Expr, ParseError> {
        if !self.starts_atom() {
            return self.error(format!("expected an expression, found {}", self.peek().describe()));
        }
        let mut head = self.atom()?;
        while self.starts_atom() {
            head = Expr::app(head, self.atom()?);
        }
        Ok(head)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        if !self.starts_atom() {
            return self.error(format!("expected an expression, found {}", self.peek().describe()));
        }
        let mut e = match self.bump() {
            Tok::Ident(x) => Expr::Var(x),
            Tok::Int(n) => Expr::IntLit(n),
            Tok::True => Expr::BoolLit(true),
            Tok::False => Expr::BoolLit(false),
            Tok::LParen => {
                let first = self.expr()?;
                let e = if *self.peek() == Tok::Comma {
                    self.bump();
                    Expr::pair(first, self.expr()?)
                } else {
                    first
                };
                self.expect(Tok::RParen)?;
                e
            }
            _ => unreachable!("checked by starts_atom"),
        };
        while *self.peek() == Tok::Dot {
            self.bump();
            let index = match self.peek() {
                Tok::Int(k) => ProjIndex::from_number(*k),
                _ => None,
            };
            match index {
                Some(k) => {
                    self.bump();
                    e = Expr::proj(k, e);
                }
                None => {
                    return self.error(format!(
                        "projection index must be 1 or 2, found {}",
                        self.peek().describe()
                    ))
                }
            }
        }
        Ok(e)
    }

    fn ty(&mut self) -> Result<Type, ParseError> {
        let dom = self.prod_ty()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            return Ok(Type::arr(dom, self.ty()?));
        }
        Ok(dom)
    }

    fn prod_ty(&mut self) -> Result<Type, ParseError> {
        let mut left = self.atom_ty()?;
        while *self.peek() == Tok::Star {
            self.bump();
            left = Type::prod(left, self.atom_ty()?);
        }
        Ok(left)
    }

    fn atom_ty(&mut self) -> Result<Type, ParseError> {
        if !matches!(self.peek(), Tok::TyInt | Tok::TyRat | Tok::TyBool | Tok::LParen) {
            return self.error(format!("expected a type, found {}", self.peek().describe()));
        }
        match self.bump() {
            Tok::TyInt => Ok(Type::Int),
            Tok::TyRat => Ok(Type::Rat),
            Tok::TyBool => Ok(Type::Bool),
            Tok::LParen => {
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => unreachable!("checked above"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(name: &str) -> Ident {
        Ident::new(name).unwrap()
    }

    #[test]
    fn annotated_identity() {
        let e = parse_expr(r"(\x. x) : int -> int").unwrap();
        assert_eq!(
            e,
            Expr::anno(Expr::lam(x("x"), Expr::var(&x("x"))), Type::arr(Type::Int, Type::Int))
        );
    }

    #[test]
    fn division() {
        assert_eq!(
            parse_expr("1 / 2").unwrap(),
            Expr::binop(BinOpKind::Div, Expr::IntLit(1), Expr::IntLit(2))
        );
    }

    #[test]
    fn projection_index_out_of_range() {
        let err = parse_expr("e.3").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));
        assert_eq!((err.line, err.column), (1, 3));
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_expr("f x\n  + $").unwrap_err();
        assert_eq!((err.line, err.column), (2, 5));
        assert!(matches!(err.kind, ParseErrorKind::Lexical(_)));

        let err = parse_expr("(1, 2").unwrap_err();
        assert_eq!((err.line, err.column), (1, 6));
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse_expr("a + b / c d < e - f").unwrap();
        let v = |n| Expr::var(&x(n));
        let expected = Expr::binop(
            BinOpKind::Lt,
            Expr::binop(
                BinOpKind::Add,
                v("a"),
                Expr::binop(BinOpKind::Div, v("b"), Expr::app(v("c"), v("d"))),
            ),
            Expr::binop(BinOpKind::Sub, v("e"), v("f")),
        );
        assert_eq!(e, expected);
        // comparison does not chain
        assert!(parse_expr("a < b < c").is_err());
        // annotation does not nest without parentheses
        assert!(parse_expr("x : int : rat").is_err());
    }

    #[test]
    fn types_parse_with_ml_precedence() {
        assert_eq!(
            parse_type("int * int -> rat -> bool").unwrap(),
            Type::arr(Type::prod(Type::Int, Type::Int), Type::arr(Type::Rat, Type::Bool))
        );
        assert_eq!(
            parse_type("int * bool * rat").unwrap(),
            Type::prod(Type::prod(Type::Int, Type::Bool), Type::Rat)
        );
        assert!(parse_type("int ->").is_err());
    }

    #[test]
    fn negative_literals() {
        assert_eq!(parse_expr("-1").unwrap(), Expr::IntLit(-1));
        assert_eq!(
            parse_expr("x -1").unwrap(),
            Expr::binop(BinOpKind::Sub, Expr::var(&x("x")), Expr::IntLit(1))
        );
        assert_eq!(
            parse_expr("f (-1)").unwrap(),
            Expr::app(Expr::var(&x("f")), Expr::IntLit(-1))
        );
        assert_eq!(
            parse_expr("1 - -2").unwrap(),
            Expr::binop(BinOpKind::Sub, Expr::IntLit(1), Expr::IntLit(-2))
        );
        assert!(parse_expr("99999999999999999999").is_err());
    }

    #[test]
    fn comments_and_reserved_names() {
        assert_eq!(parse_expr("-- a comment\n3 -- trailing").unwrap(), Expr::IntLit(3));
        assert!(matches!(parse_expr(r"\_eta_0. _eta_0").unwrap_err().kind, ParseErrorKind::Lexical(_)));
        assert!(parse_elaborated_expr(r"\_eta_0. _eta_0").is_ok());
        assert!(parse_elaborated_expr(r"\_x. _x").is_err());
    }

    #[test]
    fn pairs_projections_conditionals() {
        let e = parse_expr("if True then (p.1, p.2) else (1, 2)").unwrap();
        let p = Expr::var(&x("p"));
        assert_eq!(
            e,
            Expr::if_(
                Expr::BoolLit(true),
                Expr::pair(Expr::proj(ProjIndex::First, p.clone()), Expr::proj(ProjIndex::Second, p)),
                Expr::pair(Expr::IntLit(1), Expr::IntLit(2)),
            )
        );
        assert_eq!(
            parse_expr("x.1.2").unwrap(),
            Expr::proj(ProjIndex::Second, Expr::proj(ProjIndex::First, Expr::var(&x("x"))))
        );
    }
}
