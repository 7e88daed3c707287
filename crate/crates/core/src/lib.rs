//! Type-checking kernel for a dependently typed lambda calculus with
//! explicit substitutions for ordinary variables and explicit
//! meta-substitutions for first-class meta-variables.
//!
//! The pieces:
//!
//! * [`syntax`] — expressions with two de Bruijn index families, the two
//!   substitution classes, contexts and signatures;
//! * [`frontend`] — concrete syntax, name resolution, printing;
//! * [`eval`] — lazy single-pass weak head evaluation over environments;
//! * [`equality`] — untyped algorithmic βη-equality;
//! * [`check`] — bidirectional type checking of normal forms;
//! * [`oracle`] — eager reference semantics used for differential
//!   testing and the CLI's `--oracle` mode.

pub mod check;
pub mod equality;
pub mod eval;
pub mod frontend;
pub mod intern;
pub mod oracle;
pub mod print;
pub mod syntax;

pub use check::{
    check_signature, CheckContext, CheckedMetaContext, CheckError, CheckErrorKind, Checker,
    Declaration,
};
pub use eval::{whnf, readback, Closure, Env, EvalError, Fuel, MetaEnv, Neutral, Whnf, DEFAULT_FUEL};
pub use intern::Name;
pub use syntax::{Context, Expr, ExprKind, MetaEntry, MetaSubst, Signature, Sort, Subst};
