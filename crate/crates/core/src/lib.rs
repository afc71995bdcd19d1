//! Deep subtyping, elaborated away.
//!
//! This crate typechecks a small functional language (simply typed lambda
//! calculus with integers, rationals, booleans and pairs) under *deep*
//! subtyping, and rewrites accepted programs by η-expansion into programs
//! that typecheck using only *shallow* subtyping (reflexivity plus
//! `int <: rat`). Every rewrite comes with an explicit η-reduction trace from
//! the output back to the input, so the result can be checked independently.
//!
//! The [`bcd`] module is a small proof kernel for intersection types with a
//! top type: it checks subtyping and typing derivations, and translates
//! derivations that use subsumption into ones that instead η-reduce the
//! subject.
//!
//! Module map:
//! - [`syntax`]: AST, parser, pretty-printer, α-equivalence, fresh names
//! - [`subtype`]: deep and shallow subtyping, derivation checking
//! - [`typing`]: bidirectional checker producing rule-tagged derivations
//! - [`eta`]: η-reduction steps, traces, and bounded trace search
//! - [`elaborate`]: coercion expansion and whole-program flattening
//! - [`bcd`]: intersection-type proof kernel
//! - [`sexp`]: the s-expression file format shared by derivations

pub mod bcd;
pub mod elaborate;
pub mod eta;
pub mod sexp;
pub mod subtype;
pub mod syntax;
pub mod typing;

pub use elaborate::{expand_subtype, flatten, minimize, ElabOptions, ElabResult};
pub use eta::{apply_trace, reduce_search, step_at, verify_trace, EtaRule, EtaStep, EtaTrace};
pub use subtype::{check_sub_deriv, deep_sub, shallow_sub, SubDeriv, SubRule};
pub use syntax::{Ctx, Expr, Ident, Path, Selector, Type};
pub use typing::{check, check_typing_deriv, erase_to_declarative, synth, Flavor, Mode, TypingDeriv};
