use std::collections::BTreeSet;

use super::{Expr, Ident};

/// Variables occurring free in `e`.
pub fn free_vars(e: &Expr) -> BTreeSet<Ident> {
    let mut free = BTreeSet::new();
    collect_free(e, &mut Vec::new(), &mut free);
    free
}

fn collect_free<'a>(e: &'a Expr, bound: &mut Vec<&'a Ident>, free: &mut BTreeSet<Ident>) {
    match e {
        Expr::Var(x) => {
            if !bound.contains(&x) {
                free.insert(x.clone());
            }
        }
        Expr::Lam(x, body) => {
            bound.push(x);
            collect_free(body, bound, free);
            bound.pop();
        }
        _ => {
            for (_, child) in e.children() {
                collect_free(child, bound, free);
            }
        }
    }
}

/// Every identifier in `e`, free or bound (binders included).
pub fn all_idents(e: &Expr) -> BTreeSet<Ident> {
    fn go(e: &Expr, out: &mut BTreeSet<Ident>) {
        match e {
            Expr::Var(x) => {
                out.insert(x.clone());
            }
            Expr::Lam(x, body) => {
                out.insert(x.clone());
                go(body, out);
            }
            _ => e.children().into_iter().for_each(|(_, c)| go(c, out)),
        }
    }
    let mut out = BTreeSet::new();
    go(e, &mut out);
    out
}

/// Equality up to consistent renaming of bound variables.
pub fn alpha_eq(e1: &Expr, e2: &Expr) -> bool {
    alpha_eq_in(e1, e2, &mut Vec::new(), &mut Vec::new())
}

fn alpha_eq_in<'a>(
    e1: &'a Expr,
    e2: &'a Expr,
    env1: &mut Vec<&'a Ident>,
    env2: &mut Vec<&'a Ident>,
) -> bool {
    match (e1, e2) {
        (Expr::Var(x), Expr::Var(y)) => {
            match (env1.iter().rposition(|b| *b == x), env2.iter().rposition(|b| *b == y)) {
                (Some(i), Some(j)) => i == j,
                (None, None) => x == y,
                _ => false,
            }
        }
        (Expr::Lam(x, b1), Expr::Lam(y, b2)) => {
            env1.push(x);
            env2.push(y);
            let eq = alpha_eq_in(b1, b2, env1, env2);
            env1.pop();
            env2.pop();
            eq
        }
        (Expr::App(f1, a1), Expr::App(f2, a2))
        | (Expr::Pair(f1, a1), Expr::Pair(f2, a2)) => {
            alpha_eq_in(f1, f2, env1, env2) && alpha_eq_in(a1, a2, env1, env2)
        }
        (Expr::Anno(s1, t1), Expr::Anno(s2, t2)) => t1 == t2 && alpha_eq_in(s1, s2, env1, env2),
        (Expr::IntLit(n), Expr::IntLit(m)) => n == m,
        (Expr::BoolLit(a), Expr::BoolLit(b)) => a == b,
        (Expr::BinOp(o1, l1, r1), Expr::BinOp(o2, l2, r2)) => {
            o1 == o2 && alpha_eq_in(l1, l2, env1, env2) && alpha_eq_in(r1, r2, env1, env2)
        }
        (Expr::If(c1, t1, f1), Expr::If(c2, t2, f2)) => {
            alpha_eq_in(c1, c2, env1, env2)
                && alpha_eq_in(t1, t2, env1, env2)
                && alpha_eq_in(f1, f2, env1, env2)
        }
        (Expr::Proj(k1, s1), Expr::Proj(k2, s2)) => k1 == k2 && alpha_eq_in(s1, s2, env1, env2),
        _ => false,
    }
}

/// `_eta_<n>` for the smallest `n` such that the name is not in `avoid`.
pub fn fresh_var(avoid: &BTreeSet<Ident>) -> Ident {
    (0..)
        .map(Ident::generated)
        .find(|x| !avoid.contains(x))
        .expect("unbounded range")
}

/// Monotone source of fresh names: each name handed out joins the avoid set.
#[derive(Clone, Debug, Default)]
pub struct NameSupply {
    avoid: BTreeSet<Ident>,
    next: usize,
}

impl NameSupply {
    pub fn new(avoid: BTreeSet<Ident>) -> NameSupply {
        NameSupply { avoid, next: 0 }
    }

    pub fn avoid(&mut self, names: impl IntoIterator<Item = Ident>) {
        self.avoid.extend(names);
    }

    pub fn fresh(&mut self) -> Ident {
        loop {
            let x = Ident::generated(self.next);
            self.next += 1;
            if self.avoid.insert(x.clone()) {
                return x;
            }
        }
    }
}
