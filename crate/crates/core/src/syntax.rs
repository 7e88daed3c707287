//! Abstract syntax: expressions, substitutions, meta-substitutions,
//! contexts and signatures.
//!
//! A single syntactic category of expressions covers terms, types and
//! kinds. There are two distinct de Bruijn index families: `Var` for
//! ordinary bound variables and `MetaVar` for meta-variables, both
//! 1-based (`Var(1)` is the nearest binder). Two closure forms suspend
//! the two substitution classes.
//!
//! All values here are immutable after construction and freely shared
//! via `Arc`; cloning never copies a tree.

use std::fmt;
use std::sync::Arc;

use crate::intern::Name;

pub mod instrument {
    //! Thread-local count of `Expr` node constructions.
    //!
    //! Off by default; when enabled every expression constructor bumps a
    //! per-thread counter. `Arc` clones are not constructions and are
    //! never counted.

    use std::cell::Cell;

    thread_local! {
        static ENABLED: Cell<bool> = const { Cell::new(false) };
        static COUNT: Cell<u64> = const { Cell::new(0) };
    }

    pub(super) fn record() {
        if ENABLED.with(|e| e.get()) {
            COUNT.with(|c| c.set(c.get() + 1));
        }
    }

    /// Run `f` with allocation counting enabled, returning its result and
    /// the number of expression nodes constructed on this thread.
    pub fn counting<T>(f: impl FnOnce() -> T) -> (T, u64) {
        let prev_enabled = ENABLED.with(|e| e.replace(true));
        let start = COUNT.with(|c| c.get());
        let out = f();
        let end = COUNT.with(|c| c.get());
        ENABLED.with(|e| e.set(prev_enabled));
        (out, end - start)
    }
}

/// The two sorts. `Kind` classifies kinds; nothing classifies `Kind`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sort {
    Type,
    Kind,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Type => f.write_str("type"),
            Sort::Kind => f.write_str("kind"),
        }
    }
}

/// A shared, immutable expression.
#[derive(Clone, Eq)]
pub struct Expr(Arc<ExprKind>);

/// Expression constructors. `Clo(E, σ)` is the closure `[σ]E`,
/// `MetaClo(E, θ)` the closure `⟦θ⟧E`.
#[derive(PartialEq, Eq, Debug)]
pub enum ExprKind {
    Sort(Sort),
    Const(Name),
    /// `Π A. B`, binding one ordinary variable in the codomain.
    Pi(Expr, Expr),
    /// Ordinary variable `x_n`, `n >= 1`.
    Var(usize),
    /// Meta-variable `X_n`, `n >= 1`.
    MetaVar(usize),
    /// `λ M`, no domain annotation.
    Lam(Expr),
    App(Expr, Expr),
    /// `[σ]E`.
    Clo(Expr, Subst),
    /// `⟦θ⟧E`.
    MetaClo(Expr, MetaSubst),
}

impl Expr {
    fn node(kind: ExprKind) -> Expr {
        instrument::record();
        Expr(Arc::new(kind))
    }

    pub fn sort(s: Sort) -> Expr {
        Expr::node(ExprKind::Sort(s))
    }

    pub fn constant(name: Name) -> Expr {
        Expr::node(ExprKind::Const(name))
    }

    pub fn pi(domain: Expr, codomain: Expr) -> Expr {
        Expr::node(ExprKind::Pi(domain, codomain))
    }

    pub fn var(index: usize) -> Expr {
        debug_assert!(index >= 1);
        Expr::node(ExprKind::Var(index))
    }

    pub fn meta_var(index: usize) -> Expr {
        debug_assert!(index >= 1);
        Expr::node(ExprKind::MetaVar(index))
    }

    pub fn lam(body: Expr) -> Expr {
        Expr::node(ExprKind::Lam(body))
    }

    pub fn app(head: Expr, arg: Expr) -> Expr {
        Expr::node(ExprKind::App(head, arg))
    }

    pub fn clo(body: Expr, subst: Subst) -> Expr {
        Expr::node(ExprKind::Clo(body, subst))
    }

    pub fn meta_clo(body: Expr, msubst: MetaSubst) -> Expr {
        Expr::node(ExprKind::MetaClo(body, msubst))
    }

    pub fn kind(&self) -> &ExprKind {
        &self.0
    }
}

impl PartialEq for Expr {
    fn eq(&self, other: &Expr) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A shared ordinary substitution.
#[derive(Clone, Eq)]
pub struct Subst(Arc<SubstKind>);

/// Substitution constructors. In the closure forms the second field is
/// the substitution being applied: `Comp(τ, σ)` is `[σ]τ` and
/// `MetaClo(σ, θ)` is `⟦θ⟧σ`. There is no form `[σ]θ`.
#[derive(PartialEq, Eq, Debug)]
pub enum SubstKind {
    /// `↑ⁿ`, `n >= 0`; `↑⁰` is the identity.
    Shift(usize),
    /// `(σ, M)`.
    Cons(Subst, Expr),
    /// `[outer]inner`.
    Comp(Subst, Subst),
    /// `⟦θ⟧σ`.
    MetaClo(Subst, MetaSubst),
}

impl Subst {
    pub fn shift(n: usize) -> Subst {
        Subst(Arc::new(SubstKind::Shift(n)))
    }

    pub fn cons(tail: Subst, head: Expr) -> Subst {
        Subst(Arc::new(SubstKind::Cons(tail, head)))
    }

    pub fn comp(inner: Subst, outer: Subst) -> Subst {
        Subst(Arc::new(SubstKind::Comp(inner, outer)))
    }

    pub fn meta_clo(inner: Subst, msubst: MetaSubst) -> Subst {
        Subst(Arc::new(SubstKind::MetaClo(inner, msubst)))
    }

    pub fn kind(&self) -> &SubstKind {
        &self.0
    }
}

impl PartialEq for Subst {
    fn eq(&self, other: &Subst) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl fmt::Debug for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A shared meta-substitution.
#[derive(Clone, Eq)]
pub struct MetaSubst(Arc<MetaSubstKind>);

/// Meta-substitution constructors; `Comp(θ', θ)` is `⟦θ⟧θ'`.
#[derive(PartialEq, Eq, Debug)]
pub enum MetaSubstKind {
    /// `⇑ⁿ`, `n >= 0`.
    Shift(usize),
    /// `(θ, M)`.
    Cons(MetaSubst, Expr),
    /// `⟦outer⟧inner`.
    Comp(MetaSubst, MetaSubst),
}

impl MetaSubst {
    pub fn shift(n: usize) -> MetaSubst {
        MetaSubst(Arc::new(MetaSubstKind::Shift(n)))
    }

    pub fn cons(tail: MetaSubst, head: Expr) -> MetaSubst {
        MetaSubst(Arc::new(MetaSubstKind::Cons(tail, head)))
    }

    pub fn comp(inner: MetaSubst, outer: MetaSubst) -> MetaSubst {
        MetaSubst(Arc::new(MetaSubstKind::Comp(inner, outer)))
    }

    pub fn kind(&self) -> &MetaSubstKind {
        &self.0
    }
}

impl PartialEq for MetaSubst {
    fn eq(&self, other: &MetaSubst) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl fmt::Debug for MetaSubst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// An ordinary context `Ψ`: a list of types, innermost binding last.
pub type Context = Vec<Expr>;

/// One meta-context entry `(Ψ ⊢ A)`: the type of a meta-variable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MetaEntry {
    pub name: Name,
    pub context: Context,
    pub ty: Expr,
}

/// A meta-context `Δ`, oldest entry first; `X_1` refers to the last entry.
pub type MetaContext = Vec<MetaEntry>;

/// The global signature: constants and their types or kinds, in
/// declaration order, no duplicates.
#[derive(Clone, Default, Debug)]
pub struct Signature {
    entries: Vec<(Name, Expr)>,
    index: std::collections::HashMap<Name, usize>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn insert(&mut self, name: Name, classifier: Expr) -> Result<(), Name> {
        if self.index.contains_key(&name) {
            return Err(name);
        }
        self.index.insert(name, self.entries.len());
        self.entries.push((name, classifier));
        Ok(())
    }

    pub fn lookup(&self, name: Name) -> Option<&Expr> {
        self.index.get(&name).map(|&i| &self.entries[i].1)
    }

    pub fn contains(&self, name: Name) -> bool {
        self.index.contains_key(&name)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Name, Expr)> {
        self.entries.iter()
    }
}

/// Number of expression constructors in `e`.
pub fn node_count(e: &Expr) -> usize {
    match e.kind() {
        ExprKind::Sort(_) | ExprKind::Const(_) | ExprKind::Var(_) | ExprKind::MetaVar(_) => 1,
        ExprKind::Pi(a, b) | ExprKind::App(a, b) => 1 + node_count(a) + node_count(b),
        ExprKind::Lam(m) => 1 + node_count(m),
        ExprKind::Clo(m, s) => 1 + node_count(m) + subst_node_count(s),
        ExprKind::MetaClo(m, t) => 1 + node_count(m) + msubst_node_count(t),
    }
}

fn subst_node_count(s: &Subst) -> usize {
    match s.kind() {
        SubstKind::Shift(_) => 0,
        SubstKind::Cons(t, m) => subst_node_count(t) + node_count(m),
        SubstKind::Comp(a, b) => subst_node_count(a) + subst_node_count(b),
        SubstKind::MetaClo(a, t) => subst_node_count(a) + msubst_node_count(t),
    }
}

fn msubst_node_count(t: &MetaSubst) -> usize {
    match t.kind() {
        MetaSubstKind::Shift(_) => 0,
        MetaSubstKind::Cons(tl, m) => msubst_node_count(tl) + node_count(m),
        MetaSubstKind::Comp(a, b) => msubst_node_count(a) + msubst_node_count(b),
    }
}

/// Is `e` a normal expression `V ::= s | Π V V' | λ V | U`?
pub fn is_normal(e: &Expr) -> bool {
    match e.kind() {
        ExprKind::Sort(_) => true,
        ExprKind::Pi(a, b) => is_normal(a) && is_normal(b),
        ExprKind::Lam(m) => is_normal(m),
        _ => is_neutral(e),
    }
}

/// Is `e` a neutral expression `U ::= a | x_n | [ν]X_n | U V`?
pub fn is_neutral(e: &Expr) -> bool {
    match e.kind() {
        ExprKind::Const(_) | ExprKind::Var(_) => true,
        ExprKind::Clo(body, s) => {
            matches!(body.kind(), ExprKind::MetaVar(_)) && is_normal_subst(s)
        }
        ExprKind::App(u, v) => is_neutral(u) && is_normal(v),
        _ => false,
    }
}

/// Is `s` a normal substitution `ν ::= ↑ⁿ | (ν, V)`?
pub fn is_normal_subst(s: &Subst) -> bool {
    match s.kind() {
        SubstKind::Shift(_) => true,
        SubstKind::Cons(tail, head) => is_normal_subst(tail) && is_normal(head),
        _ => false,
    }
}
