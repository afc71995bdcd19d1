//! Seeded random generators for programs, types and intersection types.

use etaflat::bcd::BcdType;
use etaflat::syntax::{BinOpKind, Ident, ProjIndex};
use etaflat::{deep_sub, Expr, Type};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Gen {
    pub rng: ChaCha8Rng,
    next_name: usize,
}

type Scope = Vec<(Ident, Type)>;

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed), next_name: 0 }
    }

    fn fresh(&mut self) -> Ident {
        self.next_name += 1;
        Ident::new(format!("x{}", self.next_name)).unwrap()
    }

    pub fn atom(&mut self) -> Type {
        [Type::Int, Type::Rat, Type::Bool].choose(&mut self.rng).unwrap().clone()
    }

    /// A type of height at most `depth`.
    pub fn ty(&mut self, depth: usize) -> Type {
        if depth == 0 || self.rng.gen_bool(0.35) {
            return self.atom();
        }
        let (a, b) = (self.ty(depth - 1), self.ty(depth - 1));
        if self.rng.gen_bool(0.6) {
            Type::arr(a, b)
        } else {
            Type::prod(a, b)
        }
    }

    /// A random `A` with `A :< b`.
    pub fn subtype_of(&mut self, b: &Type) -> Type {
        match b {
            Type::Rat if self.rng.gen_bool(0.6) => Type::Int,
            Type::Arr(d, c) => Type::arr(self.supertype_of(d), self.subtype_of(c)),
            Type::Prod(l, r) => Type::prod(self.subtype_of(l), self.subtype_of(r)),
            _ => b.clone(),
        }
    }

    /// A random `B` with `a :< B`.
    pub fn supertype_of(&mut self, a: &Type) -> Type {
        match a {
            Type::Int if self.rng.gen_bool(0.6) => Type::Rat,
            Type::Arr(d, c) => Type::arr(self.subtype_of(d), self.supertype_of(c)),
            Type::Prod(l, r) => Type::prod(self.supertype_of(l), self.supertype_of(r)),
            _ => a.clone(),
        }
    }

    /// A closed program that checks against `ty` under deep subtyping,
    /// fresh binder names throughout.
    pub fn program(&mut self, ty: &Type, fuel: usize) -> Expr {
        self.next_name = 0;
        self.check(&Vec::new(), ty, fuel)
    }

    fn literal(&mut self) -> Expr {
        Expr::IntLit(self.rng.gen_range(-9..=40))
    }

    fn check(&mut self, scope: &Scope, b: &Type, fuel: usize) -> Expr {
        if fuel == 0 {
            return self.leaf(scope, b);
        }
        // annotations at non-atomic types are where deep subsumption happens
        let anno_weight = if matches!(b, Type::Arr(..) | Type::Prod(..)) { 5 } else { 2 };
        let weights = [4, anno_weight, 1, 2, 2, 2];
        let choice = weighted(&mut self.rng, &weights);
        let half = fuel / 2;
        match choice {
            0 => self.intro(scope, b, fuel),
            1 => {
                let a = self.subtype_of(b);
                Expr::anno(self.check(scope, &a, fuel - 1), a)
            }
            2 => Expr::if_(self.check(scope, &Type::Bool, half), self.check(scope, b, half), self.check(scope, b, half)),
            3 => {
                let dom = self.ty(1);
                let cod = self.subtype_of(b);
                let fun = self.synth_at(scope, &Type::arr(dom.clone(), cod), half);
                Expr::app(fun, self.check(scope, &dom, half))
            }
            4 => {
                let want = self.subtype_of(b);
                let other = self.ty(1);
                if self.rng.gen_bool(0.5) {
                    Expr::proj(ProjIndex::First, self.synth_at(scope, &Type::prod(want, other), fuel - 1))
                } else {
                    Expr::proj(ProjIndex::Second, self.synth_at(scope, &Type::prod(other, want), fuel - 1))
                }
            }
            _ => self.leaf(scope, b),
        }
    }

    /// A term synthesizing exactly `a`: a variable of that type, or an
    /// annotation.
    fn synth_at(&mut self, scope: &Scope, a: &Type, fuel: usize) -> Expr {
        let vars: Vec<&Ident> = scope.iter().filter(|(_, t)| t == a).map(|(x, _)| x).collect();
        if !vars.is_empty() && self.rng.gen_bool(0.5) {
            return Expr::var(vars.choose(&mut self.rng).unwrap());
        }
        Expr::anno(self.check(scope, a, fuel.saturating_sub(1)), a.clone())
    }

    fn intro(&mut self, scope: &Scope, b: &Type, fuel: usize) -> Expr {
        let half = fuel / 2;
        match b {
            Type::Arr(d, c) => {
                let x = self.fresh();
                let mut inner = scope.clone();
                inner.push((x.clone(), (**d).clone()));
                Expr::lam(x, self.check(&inner, c, fuel.saturating_sub(1)))
            }
            Type::Prod(l, r) => Expr::pair(self.check(scope, l, half), self.check(scope, r, half)),
            Type::Int => {
                let op = *[BinOpKind::Add, BinOpKind::Sub].choose(&mut self.rng).unwrap();
                Expr::binop(op, self.check(scope, &Type::Int, half), self.check(scope, &Type::Int, half))
            }
            Type::Rat => {
                let op = *[BinOpKind::Add, BinOpKind::Sub, BinOpKind::Div].choose(&mut self.rng).unwrap();
                Expr::binop(op, self.check(scope, &Type::Rat, half), self.check(scope, &Type::Rat, half))
            }
            Type::Bool => {
                Expr::binop(BinOpKind::Lt, self.check(scope, &Type::Rat, half), self.check(scope, &Type::Rat, half))
            }
        }
    }

    fn leaf(&mut self, scope: &Scope, b: &Type) -> Expr {
        let vars: Vec<&Ident> =
            scope.iter().filter(|(_, t)| deep_sub(t, b).is_some()).map(|(x, _)| x).collect();
        if !vars.is_empty() && self.rng.gen_bool(0.6) {
            return Expr::var(vars.choose(&mut self.rng).unwrap());
        }
        match b {
            Type::Int | Type::Rat => self.literal(),
            Type::Bool => Expr::BoolLit(self.rng.gen_bool(0.5)),
            Type::Arr(..) | Type::Prod(..) => self.intro(scope, b, 0),
        }
    }

    /// An arbitrary, not necessarily well-typed, term.
    pub fn raw_expr(&mut self, size: usize) -> Expr {
        const NAMES: [&str; 6] = ["x", "y", "f", "acc", "z1", "x_"];
        let name = |g: &mut Gen| Ident::new(*NAMES.choose(&mut g.rng).unwrap()).unwrap();
        if size <= 1 {
            return match self.rng.gen_range(0..3) {
                0 => Expr::var(&name(self)),
                1 => Expr::IntLit(self.rng.gen_range(-30..=30)),
                _ => Expr::BoolLit(self.rng.gen_bool(0.5)),
            };
        }
        let n = size - 1;
        let split = self.rng.gen_range(0..=n);
        match self.rng.gen_range(0..7) {
            0 => Expr::lam(name(self), self.raw_expr(n)),
            1 => Expr::app(self.raw_expr(split), self.raw_expr(n - split)),
            2 => {
                let ty = self.ty(2);
                Expr::anno(self.raw_expr(n), ty)
            }
            3 => {
                let op = *[BinOpKind::Add, BinOpKind::Sub, BinOpKind::Lt, BinOpKind::Div].choose(&mut self.rng).unwrap();
                Expr::binop(op, self.raw_expr(split), self.raw_expr(n - split))
            }
            4 => Expr::if_(self.raw_expr(n / 3), self.raw_expr(n / 3), self.raw_expr(n - 2 * (n / 3))),
            5 => Expr::pair(self.raw_expr(split), self.raw_expr(n - split)),
            _ => {
                let k = if self.rng.gen_bool(0.5) { ProjIndex::First } else { ProjIndex::Second };
                Expr::proj(k, self.raw_expr(n))
            }
        }
    }

    /// An intersection type of height at most `depth` over the atoms `a`, `b`.
    pub fn bcd_type(&mut self, depth: usize) -> BcdType {
        if depth == 0 || self.rng.gen_bool(0.4) {
            return match self.rng.gen_range(0..5) {
                0 | 1 => BcdType::atom("a"),
                2 | 3 => BcdType::atom("b"),
                _ => BcdType::Top,
            };
        }
        let (l, r) = (self.bcd_type(depth - 1), self.bcd_type(depth - 1));
        if self.rng.gen_bool(0.5) {
            BcdType::arr(l, r)
        } else {
            BcdType::sect(l, r)
        }
    }
}

fn weighted(rng: &mut ChaCha8Rng, weights: &[u32]) -> usize {
    let total: u32 = weights.iter().sum();
    let mut pick = rng.gen_range(0..total);
    for (i, &w) in weights.iter().enumerate() {
        if pick < w {
            return i;
        }
        pick -= w;
    }
    unreachable!()
}

/// Every type of height at most `depth` over `int`, `rat`, `bool`.
pub fn all_types(depth: usize) -> Vec<Type> {
    let mut level = vec![Type::Int, Type::Rat, Type::Bool];
    for _ in 0..depth {
        let mut next = vec![Type::Int, Type::Rat, Type::Bool];
        for a in &level {
            for b in &level {
                next.push(Type::arr(a.clone(), b.clone()));
                next.push(Type::prod(a.clone(), b.clone()));
            }
        }
        level = next;
    }
    level
}
