//! Minimal-parenthesis printing. Output reparses to the identical tree.

use super::{BinOpKind, Expr, Type};

// Expression precedence levels, loosest first.
const TOP: u8 = 0; // lambda, if, annotation
const CMP: u8 = 1;
const ADD: u8 = 2;
const MUL: u8 = 3;
const APP: u8 = 4;
const ATOM: u8 = 5;

pub fn pretty_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(e, TOP, &mut out);
    out
}

fn level(e: &Expr) -> u8 {
    match e {
        Expr::Lam(..) | Expr::If(..) | Expr::Anno(..) => TOP,
        Expr::BinOp(BinOpKind::Lt, ..) => CMP,
        Expr::BinOp(BinOpKind::Add | BinOpKind::Sub, ..) => ADD,
        Expr::BinOp(BinOpKind::Div, ..) => MUL,
        Expr::App(..) => APP,
        // `f -1` lexes as subtraction, so negative literals sit at APP
        Expr::IntLit(n) if *n < 0 => APP,
        Expr::Var(_) | Expr::IntLit(_) | Expr::BoolLit(_) | Expr::Pair(..) | Expr::Proj(..) => ATOM,
    }
}

fn write_expr(e: &Expr, min: u8, out: &mut String) {
    let parens = level(e) < min;
    if parens {
        out.push('(');
    }
    match e {
        Expr::Var(x) => out.push_str(x.as_str()),
        Expr::IntLit(n) => out.push_str(&n.to_string()),
        Expr::BoolLit(b) => out.push_str(if *b { "True" } else { "False" }),
        Expr::Lam(x, body) => {
            out.push('\\');
            out.push_str(x.as_str());
            out.push_str(". ");
            write_expr(body, TOP, out);
        }
        Expr::App(f, a) => {
            write_expr(f, APP, out);
            out.push(' ');
            write_expr(a, ATOM, out);
        }
        Expr::Anno(subject, ty) => {
            write_expr(subject, CMP, out);
            out.push_str(" : ");
            write_type(ty, ARROW_TY, out);
        }
        Expr::BinOp(op, l, r) => {
            let (lmin, rmin) = match op {
                BinOpKind::Lt => (ADD, ADD),
                BinOpKind::Add | BinOpKind::Sub => (ADD, MUL),
                BinOpKind::Div => (MUL, APP),
            };
            write_expr(l, lmin, out);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            write_expr(r, rmin, out);
        }
        Expr::If(c, t, f) => {
            out.push_str("if ");
            write_expr(c, TOP, out);
            out.push_str(" then ");
            write_expr(t, TOP, out);
            out.push_str(" else ");
            write_expr(f, TOP, out);
        }
        Expr::Pair(a, b) => {
            out.push('(');
            write_expr(a, TOP, out);
            out.push_str(", ");
            write_expr(b, TOP, out);
            out.push(')');
        }
        Expr::Proj(k, subject) => {
            write_expr(subject, ATOM, out);
            out.push('.');
            out.push_str(&k.number().to_string());
        }
    }
    if parens {
        out.push(')');
    }
}

const ARROW_TY: u8 = 0;
const PROD_TY: u8 = 1;
const ATOM_TY: u8 = 2;

pub fn pretty_type(ty: &Type) -> String {
    let mut out = String::new();
    write_type(ty, ARROW_TY, &mut out);
    out
}

fn write_type(ty: &Type, min: u8, out: &mut String) {
    let level = match ty {
        Type::Arr(..) => ARROW_TY,
        Type::Prod(..) => PROD_TY,
        _ => ATOM_TY,
    };
    if level < min {
        out.push('(');
    }
    match ty {
        Type::Int => out.push_str("int"),
        Type::Rat => out.push_str("rat"),
        Type::Bool => out.push_str("bool"),
        Type::Arr(a, b) => {
            write_type(a, PROD_TY, out);
            out.push_str(" -> ");
            write_type(b, ARROW_TY, out);
        }
        Type::Prod(a, b) => {
            write_type(a, PROD_TY, out);
            out.push_str(" * ");
            write_type(b, ATOM_TY, out);
        }
    }
    if level < min {
        out.push(')');
    }
}
