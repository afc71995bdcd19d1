//! Acceptance suite. Runs without the libtest harness so that each criterion
//! prints exactly one PASS or FAIL line; the process fails if any criterion
//! does.

mod common;

use std::collections::{BTreeSet, HashSet};
use std::panic;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{all_types, Gen};
use etaflat::bcd::{
    bcd_sub_search, check_bcd_sub, check_bcd_typing, lemma42, BcdDeriv, BcdNode, BcdRule, BcdSubDeriv, BcdTerm,
    BcdType, System,
};
use etaflat::syntax::{parse_expr, pretty_expr, Ident};
use etaflat::typing::{typecheck, Rule, SubWitness};
use etaflat::{
    check_sub_deriv, deep_sub, expand_subtype, flatten, reduce_search, shallow_sub, verify_trace, Ctx,
    ElabOptions, EtaRule, Expr, Flavor, Mode, SubDeriv, SubRule, Type, TypingDeriv,
};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("1 flatten round-trip on random programs", criterion_round_trip),
        ("2 exhaustive subtyping properties", criterion_subtyping),
        ("3 expansion-count law", criterion_expansion_count),
        ("4 minimized flatten soundness", criterion_minimize),
        ("5 intersection subsumption elimination, rule coverage", criterion_bcd_coverage),
        ("6 intersection subtyping search agrees with checker", criterion_bcd_search),
        ("7 golden outputs and parse/pretty round-trip", criterion_golden),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(run).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} ({secs:.2}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} ({secs:.2}s)");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn within(start: Instant, budget: Duration, what: &str) -> Result<(), String> {
    if start.elapsed() > budget {
        Err(format!("{what} took {:.1}s, over the {}s budget", start.elapsed().as_secs_f64(), budget.as_secs()))
    } else {
        Ok(())
    }
}

/// A deep-well-typed program together with how to typecheck it.
struct Sample {
    program: Expr,
    mode: Mode,
    ty: Type,
}

fn samples(seed: u64, count: usize) -> Vec<Sample> {
    let mut g = Gen::new(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let depth = g.rng.gen_range(1..=3);
        let ty = g.ty(depth);
        let fuel = g.rng.gen_range(2..=7);
        let body = g.program(&ty, fuel);
        let (program, mode) =
            if g.rng.gen_bool(0.3) { (Expr::anno(body, ty.clone()), Mode::Synth) } else { (body, Mode::Check) };
        if program.node_count() > 30 || max_type_depth(&program).max(ty.depth()) > 3 {
            continue;
        }
        out.push(Sample { program, mode, ty });
    }
    out
}

fn max_type_depth(e: &Expr) -> usize {
    let own = if let Expr::Anno(_, t) = e { t.depth() } else { 0 };
    e.children().into_iter().map(|(_, c)| max_type_depth(c)).fold(own, usize::max)
}

fn sub_witnesses(d: &TypingDeriv, out: &mut Vec<SubDeriv>) {
    if let Rule::Sub(SubWitness::Deep(w)) = &d.rule {
        out.push(w.clone());
    }
    for p in &d.premises {
        sub_witnesses(p, out);
    }
}

/// Shared body of the round-trip criteria; returns a summary.
fn round_trip(options: ElabOptions) -> Outcome {
    let start = Instant::now();
    let all = samples(0x5eed, 1000);
    let (mut failures, mut expanded, mut refl_only, mut nonatomic) = (Vec::new(), 0, 0, 0);
    for (i, s) in all.iter().enumerate() {
        let against = (s.mode == Mode::Check).then_some(&s.ty);
        let deep = match typecheck(Flavor::Deep, &Ctx::empty(), &s.program, s.mode, against) {
            Ok(d) => d,
            Err(e) => {
                failures.push(format!("#{i} generator produced an ill-typed program: {e}"));
                continue;
            }
        };
        let mut witnesses = Vec::new();
        sub_witnesses(&deep, &mut witnesses);
        if witnesses.iter().any(|w| !w.is_leaf()) {
            nonatomic += 1;
        }
        let r = match flatten(&Ctx::empty(), &s.program, s.mode, against, options) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("#{i} flatten failed: {e}"));
                continue;
            }
        };
        let text = pretty_expr(&s.program);
        if r.ty != s.ty {
            failures.push(format!("#{i} `{text}`: flatten reports {} instead of {}", r.ty, s.ty));
        }
        if let Err(e) = typecheck(Flavor::Shallow, &Ctx::empty(), &r.output, Mode::Check, Some(&r.ty)) {
            failures.push(format!("#{i} `{text}`: output does not shallow-check: {e}"));
        }
        if !verify_trace(&r.output, &r.trace, &s.program) {
            failures.push(format!("#{i} `{text}`: emitted trace does not verify"));
        }
        match reduce_search(&r.output, &s.program, r.trace.len()) {
            Some(t) if verify_trace(&r.output, &t, &s.program) => {}
            _ => failures.push(format!("#{i} `{text}`: search found no trace within {} steps", r.trace.len())),
        }
        if !r.trace.is_empty() {
            expanded += 1;
        }
        if options.minimize && witnesses.iter().all(|w| !w.uses_int_rat()) {
            refl_only += 1;
            if pretty_expr(&r.output) != text {
                failures.push(format!("#{i} `{text}`: reflexive-only program changed"));
            }
        }
    }
    within(start, Duration::from_secs(30), "the suite")?;
    if !failures.is_empty() {
        return Err(format!("{} failures, first: {}", failures.len(), failures[0]));
    }
    if nonatomic < all.len() / 4 {
        return Err(format!("only {nonatomic} programs exercise non-atomic subsumption"));
    }
    let mut detail = format!(
        "{} programs, {nonatomic} with non-atomic subsumption, {expanded} with non-empty traces",
        all.len()
    );
    if options.minimize {
        detail.push_str(&format!(", {refl_only} reflexive-only programs unchanged"));
    }
    Ok(detail)
}

fn criterion_round_trip() -> Outcome {
    round_trip(ElabOptions { minimize: false })
}

fn criterion_minimize() -> Outcome {
    round_trip(ElabOptions { minimize: true })
}

/// Structural subtyping, written independently of the library.
fn oracle_sub(a: &Type, b: &Type) -> bool {
    match (a, b) {
        (Type::Int, Type::Int | Type::Rat) | (Type::Rat, Type::Rat) | (Type::Bool, Type::Bool) => true,
        (Type::Arr(a1, a2), Type::Arr(b1, b2)) => oracle_sub(b1, a1) && oracle_sub(a2, b2),
        (Type::Prod(a1, a2), Type::Prod(b1, b2)) => oracle_sub(a1, b1) && oracle_sub(a2, b2),
        _ => false,
    }
}

fn criterion_subtyping() -> Outcome {
    let start = Instant::now();
    let types = all_types(2);
    let mut expected = 3usize;
    for _ in 0..2 {
        expected = 3 + 2 * expected * expected;
    }
    let distinct: HashSet<&Type> = types.iter().collect();
    if types.len() != expected || distinct.len() != expected {
        return Err(format!("enumerated {} types ({} distinct), expected {expected}", types.len(), distinct.len()));
    }
    for a in &types {
        match deep_sub(a, a) {
            Some(d) if check_sub_deriv(&d) == Ok((a.clone(), a.clone())) => {}
            _ => return Err(format!("no valid reflexivity derivation for {a}")),
        }
    }
    let (mut related, mut shallow) = (0usize, 0usize);
    for a in &types {
        for b in &types {
            let deep = deep_sub(a, b);
            if deep.is_some() != oracle_sub(a, b) {
                return Err(format!("deep_sub disagrees with the structural oracle on {a} :< {b}"));
            }
            if let Some(d) = &deep {
                related += 1;
                if check_sub_deriv(d) != Ok((a.clone(), b.clone())) {
                    return Err(format!("derivation for {a} :< {b} does not check"));
                }
            }
            if shallow_sub(a, b) {
                shallow += 1;
                if deep.is_none() {
                    return Err(format!("{a} <: {b} shallowly but not deeply"));
                }
            }
        }
    }
    let mut g = Gen::new(7);
    for _ in 0..100_000 {
        let c = g.ty(3);
        let b = g.subtype_of(&c);
        let a = g.subtype_of(&b);
        if deep_sub(&a, &b).is_none() || deep_sub(&b, &c).is_none() {
            return Err(format!("generated triple {a}, {b}, {c} is not in the relation"));
        }
        match deep_sub(&a, &c) {
            Some(d) if check_sub_deriv(&d) == Ok((a.clone(), c.clone())) => {}
            _ => return Err(format!("transitivity fails for {a} :< {b} :< {c}")),
        }
    }
    within(start, Duration::from_secs(60), "the suite")?;
    Ok(format!(
        "{} types, {} pairs ({related} related, {shallow} shallow), 100000 transitive triples",
        types.len(),
        types.len() * types.len()
    ))
}

fn all_sub_derivs(levels: usize) -> Vec<SubDeriv> {
    let leaves = || vec![SubDeriv::refl_int(), SubDeriv::refl_bool(), SubDeriv::refl_rat(), SubDeriv::int_rat()];
    let mut level = leaves();
    for _ in 1..levels {
        let mut next = leaves();
        for a in &level {
            for b in &level {
                next.push(SubDeriv::arr(a.clone(), b.clone()));
                next.push(SubDeriv::prod(a.clone(), b.clone()));
            }
        }
        level = next;
    }
    level
}

/// Counts (arrow nodes, product nodes) by walking the rule tree directly.
fn node_counts(d: &SubDeriv) -> (usize, usize) {
    match &d.rule {
        SubRule::Arr(x, y) | SubRule::Prod(x, y) => {
            let ((a1, p1), (a2, p2)) = (node_counts(x), node_counts(y));
            let own = matches!(d.rule, SubRule::Arr(..));
            (a1 + a2 + own as usize, p1 + p2 + !own as usize)
        }
        _ => (0, 0),
    }
}

fn criterion_expansion_count() -> Outcome {
    let derivs = all_sub_derivs(3);
    if derivs.len() != 2596 {
        return Err(format!("enumerated {} derivations, expected 2596", derivs.len()));
    }
    let f = Ident::new("f").unwrap();
    let avoid: BTreeSet<Ident> = [f.clone()].into();
    for d in &derivs {
        let (out, trace) = expand_subtype(&Expr::var(&f), d, &avoid);
        let (arrs, prods) = node_counts(d);
        if trace.count(EtaRule::ArrEta) != arrs || trace.count(EtaRule::ProdEta) != prods {
            return Err(format!(
                "{}: trace has {} arr and {} prod steps, derivation has {arrs} and {prods} nodes",
                d.to_sexp(),
                trace.count(EtaRule::ArrEta),
                trace.count(EtaRule::ProdEta)
            ));
        }
        if !verify_trace(&out, &trace, &Expr::var(&f)) {
            return Err(format!("{}: trace does not verify", d.to_sexp()));
        }
        let ctx = Ctx::empty().extend(f.clone(), d.lhs.clone());
        if typecheck(Flavor::Shallow, &ctx, &out, Mode::Check, Some(&d.rhs)).is_err() {
            return Err(format!("{}: expansion does not shallow-check", d.to_sexp()));
        }
    }
    Ok(format!("{} derivations, zero deviations", derivs.len()))
}

fn bcd_case(name: &str, sigma: BcdType, d: BcdSubDeriv) -> (String, BcdDeriv) {
    let x = Ident::new("x").unwrap();
    let basis = vec![(x.clone(), sigma.clone())];
    let (_, tau) = check_bcd_sub(&d).expect("instance is valid");
    let var = BcdNode::new(BcdRule::Var, &basis, BcdTerm::var(&x), sigma, vec![]);
    let root = BcdNode::new(BcdRule::Sub(d), &basis, BcdTerm::var(&x), tau, vec![var]);
    (name.to_string(), BcdDeriv { system: System::Extended, root })
}

fn criterion_bcd_coverage() -> Outcome {
    let (a, b, c) = (BcdType::atom("a"), BcdType::atom("b"), BcdType::atom("c"));
    let ab = BcdType::sect(a.clone(), b.clone());
    let dist_lhs = BcdType::sect(BcdType::arr(a.clone(), b.clone()), BcdType::arr(a.clone(), c.clone()));
    let cases = [
        bcd_case("refl", a.clone(), BcdSubDeriv::Refl(a.clone())),
        bcd_case("top-r", a.clone(), BcdSubDeriv::TopR(a.clone())),
        bcd_case("top-arr", BcdType::Top, BcdSubDeriv::TopArr),
        bcd_case("sect-r", a.clone(), BcdSubDeriv::SectR(a.clone())),
        bcd_case("sect-l1", ab.clone(), BcdSubDeriv::SectL1(a.clone(), b.clone())),
        bcd_case("sect-l2", ab.clone(), BcdSubDeriv::SectL2(a.clone(), b.clone())),
        bcd_case("dist", dist_lhs, BcdSubDeriv::dist(a.clone(), b.clone(), c.clone())),
        bcd_case(
            "trans",
            ab.clone(),
            BcdSubDeriv::trans(BcdSubDeriv::SectL1(a.clone(), b.clone()), BcdSubDeriv::TopR(a.clone())),
        ),
        bcd_case(
            "sect-cong",
            ab.clone(),
            BcdSubDeriv::sect_cong(BcdSubDeriv::Refl(a.clone()), BcdSubDeriv::TopR(b.clone())),
        ),
        bcd_case(
            "arr",
            BcdType::arr(a.clone(), ab.clone()),
            BcdSubDeriv::arr(BcdSubDeriv::Refl(a.clone()), BcdSubDeriv::SectL2(a.clone(), b.clone())),
        ),
    ];
    let mut passed = Vec::new();
    for (name, d) in &cases {
        let before = check_bcd_typing(d).map_err(|e| format!("{name}: input does not check: {e}"))?;
        let out = lemma42(d).map_err(|e| format!("{name}: translation failed: {e}"))?;
        let after = check_bcd_typing(&out).map_err(|e| format!("{name}: output does not check: {e}"))?;
        if out.system != System::Modified {
            return Err(format!("{name}: output is not in the modified system"));
        }
        if !after.subject.alpha_eq(&before.subject) || after.ty != before.ty || after.basis != before.basis {
            return Err(format!("{name}: conclusion changed to {} : {}", after.subject, after.ty));
        }
        for n in out.root.nodes() {
            match &n.rule {
                BcdRule::Sub(_) => return Err(format!("{name}: output still uses subsumption")),
                BcdRule::BetaEta(t) if t.beta_count() > 0 => return Err(format!("{name}: output uses a β step")),
                _ => {}
            }
        }
        passed.push(name.as_str());
    }
    Ok(format!("{}/10 rules: {}", passed.len(), passed.join(", ")))
}

fn criterion_bcd_search() -> Outcome {
    let mut g = Gen::new(42);
    let mut found = 0;
    for _ in 0..200 {
        let sigma = g.bcd_type(3);
        let tau = g.bcd_type(3);
        if let Some(d) = bcd_sub_search(&sigma, &tau, 3) {
            found += 1;
            if check_bcd_sub(&d) != Ok((sigma.clone(), tau.clone())) {
                return Err(format!("search result for {sigma} <= {tau} does not check as that pair"));
            }
        }
    }
    let mut spots = 0;
    for _ in 0..30 {
        let (s, t) = (g.bcd_type(2), g.bcd_type(2));
        let u = g.bcd_type(1);
        let pairs = [
            (s.clone(), BcdType::Top),
            (BcdType::sect(s.clone(), t.clone()), s.clone()),
            (
                BcdType::sect(BcdType::arr(s.clone(), t.clone()), BcdType::arr(s.clone(), u.clone())),
                BcdType::arr(s.clone(), BcdType::sect(t.clone(), u.clone())),
            ),
        ];
        for (l, r) in pairs {
            match bcd_sub_search(&l, &r, 2) {
                Some(d) if check_bcd_sub(&d) == Ok((l.clone(), r.clone())) => spots += 1,
                Some(_) => return Err(format!("spot pair {l} <= {r}: result does not check")),
                None => return Err(format!("spot pair {l} <= {r} not found at depth 2")),
            }
        }
    }
    Ok(format!("200 random pairs ({found} derivable), {spots} spot pairs, zero inconsistencies"))
}

fn criterion_golden() -> Outcome {
    let id = |s: &str| Ident::new(s).unwrap();
    let expansions = [
        ("f", SubDeriv::arr(SubDeriv::refl_int(), SubDeriv::int_rat()), "\\_eta_0. f _eta_0", 1),
        ("p", SubDeriv::prod(SubDeriv::refl_int(), SubDeriv::int_rat()), "(p.1, p.2)", 1),
        (
            "h",
            SubDeriv::arr(SubDeriv::arr(SubDeriv::int_rat(), SubDeriv::int_rat()), SubDeriv::refl_int()),
            "\\_eta_0. h (\\_eta_1. _eta_0 _eta_1)",
            2,
        ),
    ];
    for (name, d, want, steps) in expansions {
        let x = id(name);
        let (out, trace) = expand_subtype(&Expr::var(&x), &d, &[x.clone()].into());
        let got = pretty_expr(&out);
        if got != want || trace.len() != steps {
            return Err(format!("expanding `{name}` gave `{got}` with {} steps", trace.len()));
        }
        let ctx = Ctx::empty().extend(x.clone(), d.lhs.clone());
        if typecheck(Flavor::Shallow, &ctx, &out, Mode::Check, Some(&d.rhs)).is_err()
            || reduce_search(&out, &Expr::var(&x), 4).is_none()
        {
            return Err(format!("expansion of `{name}` fails its oracles"));
        }
    }
    // `None`: the output is the input term itself
    let programs = [
        ("1 + 2", None, "int", 0),
        (
            "((\\x. x) : int -> int) : int -> rat",
            Some("(\\_eta_0. ((\\x. x) : int -> int) _eta_0) : int -> rat"),
            "int -> rat",
            1,
        ),
        ("1 / (((\\x. x) : int -> int) 3)", None, "rat", 0),
    ];
    for (input, want, ty, steps) in programs {
        let e = parse_expr(input).map_err(|e| format!("`{input}`: {e}"))?;
        let r = flatten(&Ctx::empty(), &e, Mode::Synth, None, ElabOptions::default())
            .map_err(|err| format!("`{input}`: {err}"))?;
        let got = pretty_expr(&r.output);
        let output_ok = match want {
            Some(want) => got == want,
            None => r.output == e,
        };
        if !output_ok || r.ty.to_string() != ty || r.trace.len() != steps {
            return Err(format!("`{input}` gave `{got}` : {} with {} steps", r.ty, r.trace.len()));
        }
        match typecheck(Flavor::Shallow, &Ctx::empty(), &r.output, Mode::Synth, None) {
            Ok(d) if d.ty == r.ty => {}
            _ => return Err(format!("`{got}` does not shallow-synthesize {ty}")),
        }
        if reduce_search(&r.output, &e, steps).is_none() {
            return Err(format!("no reduction from `{got}` to `{input}`"));
        }
    }
    let mut g = Gen::new(99);
    for i in 0..1000 {
        let size = g.rng.gen_range(1..=25);
        let e = g.raw_expr(size);
        let text = pretty_expr(&e);
        match parse_expr(&text) {
            Ok(back) if back == e => {}
            Ok(back) => return Err(format!("term #{i} `{text}` reparses as `{}`", pretty_expr(&back))),
            Err(err) => return Err(format!("term #{i} `{text}` does not reparse: {err}")),
        }
    }
    Ok("3 expansions, 3 flatten examples, 1000 random terms".into())
}
