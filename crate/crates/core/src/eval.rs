//! Lazy weak head evaluation.
//!
//! Ordinary substitutions and meta-substitutions are both walked in a
//! single pass. Substitutions in weak head normal form are represented
//! as environments `ρ ::= ↑ⁿ | (ρ, L) | [↑ⁿ]ρ` and meta-environments
//! `η ::= ⇑ⁿ | (η, M)`; suspended expressions are closures `[ρ]⟦η⟧E`.
//! Variables also count as closures: they are the generic values placed
//! under binders by equality and type checking.
//!
//! `eval_sub`, `eval_msub`, `lookup` and `mlookup` are total; `whnf`,
//! `apply` and `readback` run on a fuel budget because termination is
//! guaranteed only for well-typed inputs.

use thiserror::Error;

use crate::syntax::{Expr, ExprKind, MetaSubst, MetaSubstKind, Sort, Subst, SubstKind};

pub const DEFAULT_FUEL: u64 = 1_000_000;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Error)]
pub enum EvalError {
    #[error("evaluation fuel exhausted after {budget} steps")]
    FuelExhausted { budget: u64 },
    #[error("applied a non-function weak head normal form")]
    ApplyNonFunction,
}

/// Decrementing step budget shared by `whnf`, `apply` and `readback`.
#[derive(Clone, Copy, Debug)]
pub struct Fuel {
    budget: u64,
    remaining: u64,
}

impl Fuel {
    pub fn new(budget: u64) -> Fuel {
        Fuel {
            budget,
            remaining: budget,
        }
    }

    pub fn tick(&mut self) -> Result<(), EvalError> {
        if self.remaining == 0 {
            Err(EvalError::FuelExhausted {
                budget: self.budget,
            })
        } else {
            self.remaining -= 1;
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.budget - self.remaining
    }
}

impl Default for Fuel {
    fn default() -> Fuel {
        Fuel::new(DEFAULT_FUEL)
    }
}

/// An environment `ρ`.
#[derive(Clone, Eq)]
pub struct Env(std::sync::Arc<EnvKind>);

#[derive(PartialEq, Eq, Debug)]
pub enum EnvKind {
    /// `↑ⁿ`.
    Shift(usize),
    /// `(ρ, L)`.
    Cons(Env, Closure),
    /// `[↑ⁿ]ρ`, the explicit shift that avoids renumbering when lifting
    /// an environment under a binder.
    Shifted(usize, Env),
}

impl Env {
    pub fn shift(n: usize) -> Env {
        Env(std::sync::Arc::new(EnvKind::Shift(n)))
    }

    pub fn cons(tail: Env, head: Closure) -> Env {
        Env(std::sync::Arc::new(EnvKind::Cons(tail, head)))
    }

    /// `[↑ⁿ]ρ`, normalizing `[↑⁰]ρ = ρ` and merging nested shifts.
    pub fn shifted(n: usize, inner: Env) -> Env {
        if n == 0 {
            return inner;
        }
        match inner.kind() {
            EnvKind::Shift(m) => Env::shift(n + m),
            EnvKind::Shifted(m, deeper) => {
                Env(std::sync::Arc::new(EnvKind::Shifted(n + m, deeper.clone())))
            }
            _ => Env(std::sync::Arc::new(EnvKind::Shifted(n, inner))),
        }
    }

    pub fn kind(&self) -> &EnvKind {
        &self.0
    }

    /// The lifting `(⁠[↑¹]ρ, x₁)` used when stepping under a binder.
    pub fn lift(&self) -> Env {
        Env::cons(Env::shifted(1, self.clone()), Closure::Var(1))
    }
}

impl PartialEq for Env {
    fn eq(&self, other: &Env) -> bool {
        std::sync::Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl std::fmt::Debug for Env {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// A meta-environment `η`. There is no shifted wrapper form.
#[derive(Clone, Eq)]
pub struct MetaEnv(std::sync::Arc<MetaEnvKind>);

#[derive(PartialEq, Eq, Debug)]
pub enum MetaEnvKind {
    /// `⇑ⁿ`.
    Shift(usize),
    /// `(η, M)`.
    Cons(MetaEnv, Expr),
}

impl MetaEnv {
    pub fn shift(n: usize) -> MetaEnv {
        MetaEnv(std::sync::Arc::new(MetaEnvKind::Shift(n)))
    }

    pub fn cons(tail: MetaEnv, head: Expr) -> MetaEnv {
        MetaEnv(std::sync::Arc::new(MetaEnvKind::Cons(tail, head)))
    }

    /// The identity meta-environment `⇑⁰`.
    pub fn id() -> MetaEnv {
        MetaEnv::shift(0)
    }

    pub fn is_id(&self) -> bool {
        matches!(self.kind(), MetaEnvKind::Shift(0))
    }

    pub fn kind(&self) -> &MetaEnvKind {
        &self.0
    }

    /// Embed back into meta-substitution syntax.
    pub fn to_msubst(&self) -> MetaSubst {
        match self.kind() {
            MetaEnvKind::Shift(n) => MetaSubst::shift(*n),
            MetaEnvKind::Cons(tail, head) => MetaSubst::cons(tail.to_msubst(), head.clone()),
        }
    }
}

impl PartialEq for MetaEnv {
    fn eq(&self, other: &MetaEnv) -> bool {
        std::sync::Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl std::fmt::Debug for MetaEnv {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// A closure `L ::= x_n | [ρ]⟦η⟧E`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Closure {
    Var(usize),
    Clo(Expr, Env, MetaEnv),
}

impl Closure {
    /// `[↑⁰]⟦⇑⁰⟧e`.
    pub fn under_id(e: Expr) -> Closure {
        Closure::Clo(e, Env::shift(0), MetaEnv::id())
    }
}

/// A weak head normal form `W`. `Pi` and `Lam` keep their environments
/// suspended.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Whnf {
    Sort(Sort),
    Pi(Expr, Expr, Env, MetaEnv),
    Lam(Expr, Env, MetaEnv),
    Neutral(Neutral),
}

/// A neutral weak head normal form `H ::= a | x_n | [ρ]X_n | H L`.
/// In `Meta` the meta-environment has already been consumed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Neutral {
    Const(crate::intern::Name),
    Var(usize),
    Meta(usize, Env),
    App(Box<Neutral>, Closure),
}

/// `Env η θ`: the meta-environment form of `⟦η⟧θ`.
///
/// The pending `⟦η⟧M` of a cons is stored as a suspended `MetaClo` over
/// the embedding of `η`, keeping the walk single-pass.
pub fn eval_msub(eta: &MetaEnv, theta: &MetaSubst) -> MetaEnv {
    match theta.kind() {
        MetaSubstKind::Shift(0) => eta.clone(),
        MetaSubstKind::Shift(n) => match eta.kind() {
            MetaEnvKind::Shift(m) => MetaEnv::shift(m + n),
            MetaEnvKind::Cons(tail, _) => eval_msub(tail, &MetaSubst::shift(n - 1)),
        },
        MetaSubstKind::Cons(tail, head) => MetaEnv::cons(
            eval_msub(eta, tail),
            Expr::meta_clo(head.clone(), eta.to_msubst()),
        ),
        MetaSubstKind::Comp(inner, outer) => eval_msub(&eval_msub(eta, outer), inner),
    }
}

/// `env ρ η σ`: the environment form of `[ρ]⟦η⟧σ`.
pub fn eval_sub(rho: &Env, eta: &MetaEnv, sigma: &Subst) -> Env {
    if let EnvKind::Shifted(k, inner) = rho.kind() {
        return Env::shifted(*k, eval_sub(inner, eta, sigma));
    }
    match sigma.kind() {
        SubstKind::Shift(0) => rho.clone(),
        SubstKind::Shift(n) => match rho.kind() {
            EnvKind::Shift(k) => Env::shift(k + n),
            EnvKind::Cons(tail, _) => eval_sub(tail, eta, &Subst::shift(n - 1)),
            EnvKind::Shifted(..) => unreachable!("peeled above"),
        },
        SubstKind::Cons(tail, head) => Env::cons(
            eval_sub(rho, eta, tail),
            Closure::Clo(head.clone(), rho.clone(), eta.clone()),
        ),
        SubstKind::Comp(inner, outer) => eval_sub(&eval_sub(rho, eta, outer), eta, inner),
        SubstKind::MetaClo(inner, theta) => eval_sub(rho, &eval_msub(eta, theta), inner),
    }
}

/// `lookup η m`: the binding of `X_m` in `η`.
pub fn mlookup(eta: &MetaEnv, m: usize) -> Expr {
    debug_assert!(m >= 1);
    match eta.kind() {
        MetaEnvKind::Shift(n) => Expr::meta_var(n + m),
        MetaEnvKind::Cons(_, head) if m == 1 => head.clone(),
        MetaEnvKind::Cons(tail, _) => mlookup(tail, m - 1),
    }
}

/// `lookup ρ m`: the closure form of `[ρ]x_m`.
pub fn lookup(rho: &Env, m: usize) -> Closure {
    debug_assert!(m >= 1);
    match rho.kind() {
        EnvKind::Shift(n) => Closure::Var(n + m),
        EnvKind::Cons(_, head) if m == 1 => head.clone(),
        EnvKind::Cons(tail, _) => lookup(tail, m - 1),
        EnvKind::Shifted(n, inner) => shift_closure(*n, &lookup(inner, m)),
    }
}

/// `↑ⁿL`: shifting a closure, without traversing the suspended body.
pub fn shift_closure(n: usize, l: &Closure) -> Closure {
    match l {
        Closure::Var(m) => Closure::Var(n + m),
        Closure::Clo(e, rho, eta) => {
            Closure::Clo(e.clone(), Env::shifted(n, rho.clone()), eta.clone())
        }
    }
}

/// `↑ⁿH`: shifting a neutral weak head normal form.
pub fn shift_neutral(n: usize, h: &Neutral) -> Neutral {
    match h {
        Neutral::Const(a) => Neutral::Const(*a),
        Neutral::Var(m) => Neutral::Var(n + m),
        Neutral::Meta(m, rho) => Neutral::Meta(*m, Env::shifted(n, rho.clone())),
        Neutral::App(head, arg) => Neutral::App(
            Box::new(shift_neutral(n, head)),
            shift_closure(n, arg),
        ),
    }
}

/// `whnf L`: the weak head normal form of a closure.
pub fn whnf(l: &Closure, fuel: &mut Fuel) -> Result<Whnf, EvalError> {
    let (mut body, mut rho, mut eta) = match l {
        Closure::Var(m) => return Ok(Whnf::Neutral(Neutral::Var(*m))),
        Closure::Clo(e, r, h) => (e.clone(), r.clone(), h.clone()),
    };
    loop {
        fuel.tick()?;
        match body.kind() {
            ExprKind::Sort(s) => return Ok(Whnf::Sort(*s)),
            ExprKind::Const(a) => return Ok(Whnf::Neutral(Neutral::Const(*a))),
            ExprKind::Var(m) => match lookup(&rho, *m) {
                Closure::Var(k) => return Ok(Whnf::Neutral(Neutral::Var(k))),
                Closure::Clo(e, r, h) => {
                    body = e;
                    rho = r;
                    eta = h;
                }
            },
            ExprKind::MetaVar(m) => {
                // The identity case comes first: the paper's two equations
                // overlap at η = ⇑⁰ and only this order is productive.
                if eta.is_id() {
                    return Ok(Whnf::Neutral(Neutral::Meta(*m, rho)));
                }
                body = mlookup(&eta, *m);
                eta = MetaEnv::id();
            }
            ExprKind::Pi(a, b) => return Ok(Whnf::Pi(a.clone(), b.clone(), rho, eta)),
            ExprKind::Lam(m) => return Ok(Whnf::Lam(m.clone(), rho, eta)),
            ExprKind::App(f, n) => {
                let head = whnf(&Closure::Clo(f.clone(), rho.clone(), eta.clone()), fuel)?;
                let arg = Closure::Clo(n.clone(), rho, eta);
                return apply(head, arg, fuel);
            }
            ExprKind::Clo(e, sigma) => {
                rho = eval_sub(&rho, &eta, sigma);
                body = e.clone();
            }
            ExprKind::MetaClo(e, theta) => {
                eta = eval_msub(&eta, theta);
                body = e.clone();
            }
        }
    }
}

/// `W @ L`: the weak head normal form of an application.
pub fn apply(w: Whnf, arg: Closure, fuel: &mut Fuel) -> Result<Whnf, EvalError> {
    match w {
        Whnf::Lam(m, rho, eta) => {
            fuel.tick()?;
            whnf(&Closure::Clo(m, Env::cons(rho, arg), eta), fuel)
        }
        Whnf::Neutral(h) => Ok(Whnf::Neutral(Neutral::App(Box::new(h), arg))),
        Whnf::Sort(_) | Whnf::Pi(..) => Err(EvalError::ApplyNonFunction),
    }
}

/// Read a weak head normal form back to a normal expression, recursively
/// forcing suspended bodies under lifted environments.
pub fn readback(w: &Whnf, fuel: &mut Fuel) -> Result<Expr, EvalError> {
    fuel.tick()?;
    match w {
        Whnf::Sort(s) => Ok(Expr::sort(*s)),
        Whnf::Pi(a, b, rho, eta) => {
            let dom = readback(
                &whnf(&Closure::Clo(a.clone(), rho.clone(), eta.clone()), fuel)?,
                fuel,
            )?;
            let cod = readback(
                &whnf(&Closure::Clo(b.clone(), rho.lift(), eta.clone()), fuel)?,
                fuel,
            )?;
            Ok(Expr::pi(dom, cod))
        }
        Whnf::Lam(m, rho, eta) => {
            let body = readback(
                &whnf(&Closure::Clo(m.clone(), rho.lift(), eta.clone()), fuel)?,
                fuel,
            )?;
            Ok(Expr::lam(body))
        }
        Whnf::Neutral(h) => readback_neutral(h, fuel),
    }
}

pub fn readback_neutral(h: &Neutral, fuel: &mut Fuel) -> Result<Expr, EvalError> {
    match h {
        Neutral::Const(a) => Ok(Expr::constant(*a)),
        Neutral::Var(n) => Ok(Expr::var(*n)),
        Neutral::Meta(m, rho) => Ok(Expr::clo(Expr::meta_var(*m), readback_env(rho, fuel)?)),
        Neutral::App(head, arg) => {
            let head = readback_neutral(head, fuel)?;
            let arg = readback(&whnf(arg, fuel)?, fuel)?;
            Ok(Expr::app(head, arg))
        }
    }
}

/// Read an environment back to a normal substitution, pushing pending
/// shifts into the entries.
pub fn readback_env(rho: &Env, fuel: &mut Fuel) -> Result<Subst, EvalError> {
    fn go(k: usize, rho: &Env, fuel: &mut Fuel) -> Result<Subst, EvalError> {
        match rho.kind() {
            EnvKind::Shift(n) => Ok(Subst::shift(k + n)),
            EnvKind::Cons(tail, head) => {
                let tail = go(k, tail, fuel)?;
                let head = readback(&whnf(&shift_closure(k, head), fuel)?, fuel)?;
                Ok(Subst::cons(tail, head))
            }
            EnvKind::Shifted(n, inner) => go(k + n, inner, fuel),
        }
    }
    go(0, rho, fuel)
}
