//! Concrete syntax: lexing, parsing, name resolution and printing.
//!
//! The surface language is Twelf-flavoured, UTF-8, with `%` comments to
//! end of line:
//!
//! ```text
//! nat : type.                       % constant declaration
//! s : nat -> nat.                   % arrow sugar for Pi
//! plus : nat -> nat -> nat -> type.
//! plus/z : {n : nat} plus z n n.    % dependent Pi
//! id : nat -> nat = ...             % (no definitions; kernel checks only)
//! mvar F : (x : nat |- nat).        % meta-variable declaration (Ψ ⊢ A)
//! #nf ([x] s x) z.                  % normalize directive
//! #eq ([x] s x) s.                  % equality directive (two atoms)
//! ```
//!
//! A bare meta-variable name elaborates to `[ν]X` with the eta-expanded
//! identity substitution for its declared context; `X[t1, ..., tk]`
//! supplies entries explicitly (outermost declared variable first), with
//! an optional leading `^n` base shift, defaulting to the current binder
//! depth.

mod lexer;
mod parser;
mod resolve;

pub use lexer::Pos;
pub use parser::{parse_signature, parse_term, DirectiveKind, ParseError, SurfaceDecl, SurfaceExpr};
pub use resolve::{
    meta_name_set, resolve_decls, resolve_expr, Item, NameEnv, ResolveError, ResolvedDirective,
};
