//! Intersection-type subtyping derivations: checking and bounded search.

use std::collections::{BTreeSet, HashMap};

use super::BcdType;

/// A subtyping derivation. Axioms carry the types that instantiate them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BcdSubDeriv {
    /// `σ ≤ σ`
    Refl(BcdType),
    /// `σ ≤ top`
    TopR(BcdType),
    /// `top ≤ top -> top`
    TopArr,
    /// `σ ≤ σ ∩ σ`
    SectR(BcdType),
    /// `σ ∩ τ ≤ σ`
    SectL1(BcdType, BcdType),
    /// `σ ∩ τ ≤ τ`
    SectL2(BcdType, BcdType),
    /// `(σ -> τ1) ∩ (σ -> τ2) ≤ σ -> (τ1 ∩ τ2)`. Stored as the two arrows so
    /// that an instance with mismatched domains can be written down and
    /// rejected.
    Dist { left: BcdType, right: BcdType },
    Trans(Box<BcdSubDeriv>, Box<BcdSubDeriv>),
    SectCong(Box<BcdSubDeriv>, Box<BcdSubDeriv>),
    /// The first premise is contravariant: from `τ1 ≤ σ1` and `σ2 ≤ τ2`,
    /// concludes `σ1 -> σ2 ≤ τ1 -> τ2`.
    Arr(Box<BcdSubDeriv>, Box<BcdSubDeriv>),
}

impl BcdSubDeriv {
    pub fn dist(dom: BcdType, cod1: BcdType, cod2: BcdType) -> BcdSubDeriv {
        BcdSubDeriv::Dist { left: BcdType::arr(dom.clone(), cod1), right: BcdType::arr(dom, cod2) }
    }

    pub fn trans(d1: BcdSubDeriv, d2: BcdSubDeriv) -> BcdSubDeriv {
        BcdSubDeriv::Trans(Box::new(d1), Box::new(d2))
    }

    pub fn sect_cong(d1: BcdSubDeriv, d2: BcdSubDeriv) -> BcdSubDeriv {
        BcdSubDeriv::SectCong(Box::new(d1), Box::new(d2))
    }

    pub fn arr(d1: BcdSubDeriv, d2: BcdSubDeriv) -> BcdSubDeriv {
        BcdSubDeriv::Arr(Box::new(d1), Box::new(d2))
    }

    pub fn rule_name(&self) -> &'static str {
        match self {
            BcdSubDeriv::Refl(_) => "refl",
            BcdSubDeriv::TopR(_) => "top-r",
            BcdSubDeriv::TopArr => "top-arr",
            BcdSubDeriv::SectR(_) => "sect-r",
            BcdSubDeriv::SectL1(..) => "sect-l1",
            BcdSubDeriv::SectL2(..) => "sect-l2",
            BcdSubDeriv::Dist { .. } => "dist",
            BcdSubDeriv::Trans(..) => "trans",
            BcdSubDeriv::SectCong(..) => "sect-cong",
            BcdSubDeriv::Arr(..) => "arr",
        }
    }

    /// Axioms have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            BcdSubDeriv::Trans(a, b) | BcdSubDeriv::SectCong(a, b) | BcdSubDeriv::Arr(a, b) => {
                1 + a.depth().max(b.depth())
            }
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("at subtyping node {path}: {message}")]
pub struct BcdSubError {
    /// Premise indices from the root, `/`-joined; `.` for the root.
    pub path: String,
    pub message: String,
}

/// Validates every node and returns the conclusion `(σ, τ)` of `σ ≤ τ`.
pub fn check_bcd_sub(d: &BcdSubDeriv) -> Result<(BcdType, BcdType), BcdSubError> {
    check_at(d, &mut Vec::new())
}

fn check_at(d: &BcdSubDeriv, path: &mut Vec<usize>) -> Result<(BcdType, BcdType), BcdSubError> {
    fn fail(path: &[usize], message: String) -> BcdSubError {
        BcdSubError {
            path: if path.is_empty() {
                ".".into()
            } else {
                path.iter().map(usize::to_string).collect::<Vec<_>>().join("/")
            },
            message,
        }
    }
    fn premise(i: usize, p: &BcdSubDeriv, path: &mut Vec<usize>) -> Result<(BcdType, BcdType), BcdSubError> {
        path.push(i);
        let r = check_at(p, path);
        path.pop();
        r
    }
    Ok(match d {
        BcdSubDeriv::Refl(s) => (s.clone(), s.clone()),
        BcdSubDeriv::TopR(s) => (s.clone(), BcdType::Top),
        BcdSubDeriv::TopArr => (BcdType::Top, BcdType::top_arr()),
        BcdSubDeriv::SectR(s) => (s.clone(), BcdType::sect(s.clone(), s.clone())),
        BcdSubDeriv::SectL1(s, t) => (BcdType::sect(s.clone(), t.clone()), s.clone()),
        BcdSubDeriv::SectL2(s, t) => (BcdType::sect(s.clone(), t.clone()), t.clone()),
        BcdSubDeriv::Dist { left, right } => match (left, right) {
            (BcdType::Arr(s1, t1), BcdType::Arr(s2, t2)) if s1 == s2 => (
                BcdType::sect(left.clone(), right.clone()),
                BcdType::arr((**s1).clone(), BcdType::sect((**t1).clone(), (**t2).clone())),
            ),
            (BcdType::Arr(s1, _), BcdType::Arr(s2, _)) => {
                return Err(fail(path, format!("distributivity needs equal domains, found {s1} and {s2}")))
            }
            _ => return Err(fail(path, "distributivity needs two arrow types".into())),
        },
        BcdSubDeriv::Trans(d1, d2) => {
            let (a, m1) = premise(0, d1, path)?;
            let (m2, b) = premise(1, d2, path)?;
            if m1 != m2 {
                return Err(fail(path, format!("transitivity middle types differ: {m1} and {m2}")));
            }
            (a, b)
        }
        BcdSubDeriv::SectCong(d1, d2) => {
            let (a1, b1) = premise(0, d1, path)?;
            let (a2, b2) = premise(1, d2, path)?;
            (BcdType::sect(a1, a2), BcdType::sect(b1, b2))
        }
        BcdSubDeriv::Arr(d1, d2) => {
            let (t1, s1) = premise(0, d1, path)?;
            let (s2, t2) = premise(1, d2, path)?;
            (BcdType::arr(s1, s2), BcdType::arr(t1, t2))
        }
    })
}

/// Iterative-deepening search for a derivation of `σ ≤ τ` of depth at most
/// `max_depth` (axioms have depth 1). `None` only means that no derivation
/// exists within the bound.
///
/// Middle types for transitivity are drawn from a finite universe: subterms
/// of `σ` and `τ` together with `top` and `top -> top`, closed once under
/// `∩` and `->`.
pub fn bcd_sub_search(sigma: &BcdType, tau: &BcdType, max_depth: usize) -> Option<BcdSubDeriv> {
    let mut base = BTreeSet::new();
    sigma.subterms(&mut base);
    tau.subterms(&mut base);
    BcdType::top_arr().subterms(&mut base);

    let mut search = Search::default();
    let base: Vec<usize> = base.into_iter().map(|t| search.intern(&t)).collect();
    for &u in &base {
        for &v in &base {
            search.intern_node(Shape::Sect(u, v));
            search.intern_node(Shape::Arr(u, v));
        }
    }
    search.universe = (0..search.types.len()).collect();

    let (s, t) = (search.intern(sigma), search.intern(tau));
    (1..=max_depth).find_map(|depth| search.find(s, t, depth))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Shape {
    Atom(usize),
    Top,
    Arr(usize, usize),
    Sect(usize, usize),
}

// Types are interned so that every comparison is an index comparison.
#[derive(Default)]
struct Search {
    types: Vec<(Shape, BcdType)>,
    ids: HashMap<Shape, usize>,
    atoms: HashMap<crate::syntax::Ident, usize>,
    universe: Vec<usize>,
    // deepest bound at which a goal is known to have no derivation
    failed: HashMap<(usize, usize), usize>,
}

impl Search {
    fn intern(&mut self, t: &BcdType) -> usize {
        let shape = match t {
            BcdType::Atom(a) => {
                let next = self.atoms.len();
                Shape::Atom(*self.atoms.entry(a.clone()).or_insert(next))
            }
            BcdType::Top => Shape::Top,
            BcdType::Arr(a, b) => Shape::Arr(self.intern(a), self.intern(b)),
            BcdType::Sect(a, b) => Shape::Sect(self.intern(a), self.intern(b)),
        };
        if let Some(&id) = self.ids.get(&shape) {
            return id;
        }
        self.types.push((shape, t.clone()));
        self.ids.insert(shape, self.types.len() - 1);
        self.types.len() - 1
    }

    fn intern_node(&mut self, shape: Shape) -> usize {
        if let Some(&id) = self.ids.get(&shape) {
            return id;
        }
        let ty = match shape {
            Shape::Arr(a, b) => BcdType::arr(self.ty(a).clone(), self.ty(b).clone()),
            Shape::Sect(a, b) => BcdType::sect(self.ty(a).clone(), self.ty(b).clone()),
            _ => unreachable!("atoms and top are interned from types"),
        };
        self.intern(&ty)
    }

    fn shape(&self, id: usize) -> Shape {
        self.types[id].0
    }

    fn ty(&self, id: usize) -> &BcdType {
        &self.types[id].1
    }

    fn axiom(&self, a: usize, b: usize) -> Option<BcdSubDeriv> {
        let ty = |id| self.ty(id).clone();
        if a == b {
            return Some(BcdSubDeriv::Refl(ty(a)));
        }
        if self.shape(b) == Shape::Top {
            return Some(BcdSubDeriv::TopR(ty(a)));
        }
        match (self.shape(a), self.shape(b)) {
            (Shape::Top, Shape::Arr(x, y)) if self.shape(x) == Shape::Top && self.shape(y) == Shape::Top => {
                return Some(BcdSubDeriv::TopArr)
            }
            (_, Shape::Sect(x, y)) if x == a && y == a => return Some(BcdSubDeriv::SectR(ty(a))),
            (Shape::Sect(x, y), _) if x == b => return Some(BcdSubDeriv::SectL1(ty(x), ty(y))),
            (Shape::Sect(x, y), _) if y == b => return Some(BcdSubDeriv::SectL2(ty(x), ty(y))),
            _ => {}
        }
        if let (Shape::Sect(l, r), Shape::Arr(s, c)) = (self.shape(a), self.shape(b)) {
            if let (Shape::Arr(s1, t1), Shape::Arr(s2, t2), Shape::Sect(c1, c2)) =
                (self.shape(l), self.shape(r), self.shape(c))
            {
                if s1 == s && s2 == s && c1 == t1 && c2 == t2 {
                    return Some(BcdSubDeriv::Dist { left: ty(l), right: ty(r) });
                }
            }
        }
        None
    }

    fn find(&mut self, a: usize, b: usize, depth: usize) -> Option<BcdSubDeriv> {
        if depth == 0 || self.failed.get(&(a, b)).is_some_and(|&d| d >= depth) {
            return None;
        }
        let found = self.find_uncached(a, b, depth);
        if found.is_none() {
            self.failed.insert((a, b), depth);
        }
        found
    }

    fn find_uncached(&mut self, a: usize, b: usize, depth: usize) -> Option<BcdSubDeriv> {
        if let Some(d) = self.axiom(a, b) {
            return Some(d);
        }
        if depth == 1 {
            return None;
        }
        match (self.shape(a), self.shape(b)) {
            (Shape::Arr(s1, s2), Shape::Arr(t1, t2)) => {
                if let Some(d1) = self.find(t1, s1, depth - 1) {
                    if let Some(d2) = self.find(s2, t2, depth - 1) {
                        return Some(BcdSubDeriv::arr(d1, d2));
                    }
                }
            }
            (Shape::Sect(s1, s2), Shape::Sect(t1, t2)) => {
                if let Some(d1) = self.find(s1, t1, depth - 1) {
                    if let Some(d2) = self.find(s2, t2, depth - 1) {
                        return Some(BcdSubDeriv::sect_cong(d1, d2));
                    }
                }
            }
            _ => {}
        }
        for i in 0..self.universe.len() {
            let m = self.universe[i];
            if m == a || m == b {
                continue;
            }
            if let Some(d1) = self.find(a, m, depth - 1) {
                if let Some(d2) = self.find(m, b, depth - 1) {
                    return Some(BcdSubDeriv::trans(d1, d2));
                }
            }
        }
        None
    }
}
