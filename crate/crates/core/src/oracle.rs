//! Eager reference semantics.
//!
//! Substitutions and meta-substitutions are applied as left-to-right
//! rewriting on the computational laws, with full traversals and no
//! sharing tricks; `beta_normalize` drives them to β-normal form and
//! `declarative_check` implements the declarative typing rules
//! directly. Everything here is deliberately slow and simple: it exists
//! to cross-check the lazy engine and the bidirectional checker.

use crate::eval::{EvalError, Fuel};
use crate::syntax::{
    Context, Expr, ExprKind, MetaEntry, MetaSubst, MetaSubstKind, Signature, Sort, Subst,
    SubstKind,
};

/// `[σ]E`, pushed eagerly through every constructor.
///
/// Only closures over meta-variables (and over pending meta-closures)
/// remain suspended: an ordinary substitution cannot be pushed past a
/// meta-substitution.
pub fn apply_sub_eager(sigma: &Subst, e: &Expr) -> Expr {
    match e.kind() {
        ExprKind::Sort(_) | ExprKind::Const(_) => e.clone(),
        ExprKind::Var(n) => lookup_eager(sigma, *n),
        ExprKind::MetaVar(_) => Expr::clo(e.clone(), resolve_subst(sigma)),
        ExprKind::Pi(a, b) => Expr::pi(
            apply_sub_eager(sigma, a),
            apply_sub_eager(&lift_eager(sigma), b),
        ),
        ExprKind::Lam(m) => Expr::lam(apply_sub_eager(&lift_eager(sigma), m)),
        ExprKind::App(f, n) => Expr::app(apply_sub_eager(sigma, f), apply_sub_eager(sigma, n)),
        ExprKind::Clo(inner, tau) => match inner.kind() {
            // [σ]([τ]X) = [[σ]τ]X and [σ]([τ]⟦θ⟧E) = [[σ]τ]⟦θ⟧E stay suspended.
            ExprKind::MetaVar(_) | ExprKind::MetaClo(..) => {
                Expr::clo(inner.clone(), compose_sub_eager(sigma, tau))
            }
            _ => apply_sub_eager(sigma, &apply_sub_eager(tau, inner)),
        },
        ExprKind::MetaClo(..) => Expr::clo(e.clone(), resolve_subst(sigma)),
    }
}

/// `([↑¹]σ, x₁)`: lifting under a binder.
fn lift_eager(sigma: &Subst) -> Subst {
    Subst::cons(compose_sub_eager(&Subst::shift(1), sigma), Expr::var(1))
}

/// `[σ]x_n`.
fn lookup_eager(sigma: &Subst, n: usize) -> Expr {
    match sigma.kind() {
        SubstKind::Shift(k) => Expr::var(n + k),
        SubstKind::Cons(_, head) if n == 1 => head.clone(),
        SubstKind::Cons(tail, _) => lookup_eager(tail, n - 1),
        // [[outer]inner]x_n = [outer]([inner]x_n)
        SubstKind::Comp(inner, outer) => apply_sub_eager(outer, &lookup_eager(inner, n)),
        // [⟦θ⟧σ]x_n = ⟦θ⟧([σ]x_n)
        SubstKind::MetaClo(inner, theta) => apply_msub_eager(theta, &lookup_eager(inner, n)),
    }
}

/// `⟦θ⟧E`. Total: propagation under binders needs no shift, and every
/// meta-closure is eliminated.
pub fn apply_msub_eager(theta: &MetaSubst, e: &Expr) -> Expr {
    match e.kind() {
        ExprKind::Sort(_) | ExprKind::Const(_) | ExprKind::Var(_) => e.clone(),
        ExprKind::MetaVar(m) => mlookup_eager(theta, *m),
        ExprKind::Pi(a, b) => Expr::pi(apply_msub_eager(theta, a), apply_msub_eager(theta, b)),
        ExprKind::Lam(m) => Expr::lam(apply_msub_eager(theta, m)),
        ExprKind::App(f, n) => Expr::app(apply_msub_eager(theta, f), apply_msub_eager(theta, n)),
        // ⟦θ⟧[σ]E = [⟦θ⟧σ]⟦θ⟧E
        ExprKind::Clo(inner, sigma) => Expr::clo(
            apply_msub_eager(theta, inner),
            apply_msub_subst_eager(theta, sigma),
        ),
        // ⟦θ⟧⟦θ'⟧E = ⟦⟦θ⟧θ'⟧E
        ExprKind::MetaClo(inner, theta2) => {
            apply_msub_eager(&compose_msub_eager(theta, theta2), inner)
        }
    }
}

/// `⟦θ⟧X_m`.
fn mlookup_eager(theta: &MetaSubst, m: usize) -> Expr {
    match theta.kind() {
        MetaSubstKind::Shift(n) => Expr::meta_var(n + m),
        MetaSubstKind::Cons(_, head) if m == 1 => head.clone(),
        MetaSubstKind::Cons(tail, _) => mlookup_eager(tail, m - 1),
        MetaSubstKind::Comp(inner, outer) => {
            apply_msub_eager(outer, &mlookup_eager(inner, m))
        }
    }
}

/// `⟦θ⟧σ` on substitutions; `⟦θ⟧↑ⁿ = ↑ⁿ`.
pub fn apply_msub_subst_eager(theta: &MetaSubst, sigma: &Subst) -> Subst {
    match sigma.kind() {
        SubstKind::Shift(_) => sigma.clone(),
        SubstKind::Cons(tail, head) => Subst::cons(
            apply_msub_subst_eager(theta, tail),
            apply_msub_eager(theta, head),
        ),
        SubstKind::Comp(inner, outer) => compose_sub_eager(
            &apply_msub_subst_eager(theta, outer),
            &apply_msub_subst_eager(theta, inner),
        ),
        SubstKind::MetaClo(inner, theta2) => {
            apply_msub_subst_eager(&compose_msub_eager(theta, theta2), inner)
        }
    }
}

/// Eliminate `Comp` and `MetaClo` structure, leaving shift/cons form.
/// Entries are not otherwise normalized.
pub fn resolve_subst(sigma: &Subst) -> Subst {
    match sigma.kind() {
        SubstKind::Shift(_) => sigma.clone(),
        SubstKind::Cons(tail, head) => Subst::cons(resolve_subst(tail), head.clone()),
        SubstKind::Comp(inner, outer) => compose_sub_eager(outer, inner),
        SubstKind::MetaClo(inner, theta) => {
            resolve_subst(&apply_msub_subst_eager(theta, inner))
        }
    }
}

/// `[outer]inner` in closed form, agreeing with the pairing and shifting
/// laws.
pub fn compose_sub_eager(outer: &Subst, inner: &Subst) -> Subst {
    fn go(outer: &Subst, inner: &Subst) -> Subst {
        match inner.kind() {
            SubstKind::Shift(0) => outer.clone(),
            SubstKind::Shift(n) => match outer.kind() {
                SubstKind::Shift(m) => Subst::shift(m + n),
                SubstKind::Cons(tail, _) => go(tail, &Subst::shift(n - 1)),
                _ => unreachable!("inputs are resolved"),
            },
            SubstKind::Cons(tail, head) => {
                Subst::cons(go(outer, tail), apply_sub_eager(outer, head))
            }
            _ => unreachable!("inputs are resolved"),
        }
    }
    go(&resolve_subst(outer), &resolve_subst(inner))
}

fn resolve_msubst(theta: &MetaSubst) -> MetaSubst {
    match theta.kind() {
        MetaSubstKind::Shift(_) => theta.clone(),
        MetaSubstKind::Cons(tail, head) => MetaSubst::cons(resolve_msubst(tail), head.clone()),
        MetaSubstKind::Comp(inner, outer) => compose_msub_eager(outer, inner),
    }
}

/// `⟦outer⟧inner` in closed form.
pub fn compose_msub_eager(outer: &MetaSubst, inner: &MetaSubst) -> MetaSubst {
    fn go(outer: &MetaSubst, inner: &MetaSubst) -> MetaSubst {
        match inner.kind() {
            MetaSubstKind::Shift(0) => outer.clone(),
            MetaSubstKind::Shift(n) => match outer.kind() {
                MetaSubstKind::Shift(m) => MetaSubst::shift(m + n),
                MetaSubstKind::Cons(tail, _) => go(tail, &MetaSubst::shift(n - 1)),
                _ => unreachable!("inputs are resolved"),
            },
            MetaSubstKind::Cons(tail, head) => {
                MetaSubst::cons(go(outer, tail), apply_msub_eager(outer, head))
            }
            _ => unreachable!("inputs are resolved"),
        }
    }
    go(&resolve_msubst(outer), &resolve_msubst(inner))
}

/// Full β-normalization, normal-order. The result satisfies `is_normal`;
/// all closures are eliminated except `[ν]X`, whose substitution is
/// normalized entrywise. A bare meta-variable normalizes to `[↑⁰]X`.
pub fn beta_normalize(e: &Expr, fuel: &mut Fuel) -> Result<Expr, EvalError> {
    fuel.tick()?;
    match e.kind() {
        ExprKind::Sort(_) | ExprKind::Const(_) | ExprKind::Var(_) => Ok(e.clone()),
        ExprKind::MetaVar(_) => Ok(Expr::clo(e.clone(), Subst::shift(0))),
        ExprKind::Pi(a, b) => Ok(Expr::pi(
            beta_normalize(a, fuel)?,
            beta_normalize(b, fuel)?,
        )),
        ExprKind::Lam(m) => Ok(Expr::lam(beta_normalize(m, fuel)?)),
        ExprKind::App(f, n) => {
            let head = beta_normalize(f, fuel)?;
            if let ExprKind::Lam(body) = head.kind() {
                // (λM) N = [↑⁰, N]M
                let single = Subst::cons(Subst::shift(0), n.clone());
                beta_normalize(&apply_sub_eager(&single, body), fuel)
            } else {
                Ok(Expr::app(head, beta_normalize(n, fuel)?))
            }
        }
        ExprKind::Clo(inner, sigma) => match inner.kind() {
            ExprKind::MetaVar(_) => Ok(Expr::clo(
                inner.clone(),
                normalize_subst(sigma, fuel)?,
            )),
            ExprKind::MetaClo(e2, theta) => beta_normalize(
                &apply_sub_eager(sigma, &apply_msub_eager(theta, e2)),
                fuel,
            ),
            _ => beta_normalize(&apply_sub_eager(sigma, inner), fuel),
        },
        ExprKind::MetaClo(inner, theta) => beta_normalize(&apply_msub_eager(theta, inner), fuel),
    }
}

fn normalize_subst(sigma: &Subst, fuel: &mut Fuel) -> Result<Subst, EvalError> {
    let resolved = resolve_subst(sigma);
    fn go(s: &Subst, fuel: &mut Fuel) -> Result<Subst, EvalError> {
        match s.kind() {
            SubstKind::Shift(_) => Ok(s.clone()),
            SubstKind::Cons(tail, head) => Ok(Subst::cons(
                go(tail, fuel)?,
                beta_normalize(head, fuel)?,
            )),
            _ => unreachable!("resolved"),
        }
    }
    go(&resolved, fuel)
}

/// βη-equality: syntactic comparison of β-normal forms with η-expansion
/// of neutrals against lambdas and the substitution law
/// `↑ⁿ ≡ (↑ⁿ⁺¹, xₙ₊₁)` applied on the fly.
pub fn equal_beta_eta(e1: &Expr, e2: &Expr, fuel: &mut Fuel) -> Result<bool, EvalError> {
    let n1 = beta_normalize(e1, fuel)?;
    let n2 = beta_normalize(e2, fuel)?;
    eq_nf(&n1, &n2, fuel)
}

fn eq_nf(a: &Expr, b: &Expr, fuel: &mut Fuel) -> Result<bool, EvalError> {
    fuel.tick()?;
    match (a.kind(), b.kind()) {
        (ExprKind::Lam(m), ExprKind::Lam(n)) => eq_nf(m, n, fuel),
        (ExprKind::Lam(m), _) => {
            let expansion = eta_body(b, fuel)?;
            eq_nf(m, &expansion, fuel)
        }
        (_, ExprKind::Lam(n)) => {
            let expansion = eta_body(a, fuel)?;
            eq_nf(&expansion, n, fuel)
        }
        (ExprKind::Sort(s1), ExprKind::Sort(s2)) => Ok(s1 == s2),
        (ExprKind::Const(a1), ExprKind::Const(a2)) => Ok(a1 == a2),
        (ExprKind::Var(n1), ExprKind::Var(n2)) => Ok(n1 == n2),
        (ExprKind::Pi(a1, b1), ExprKind::Pi(a2, b2)) => {
            Ok(eq_nf(a1, a2, fuel)? && eq_nf(b1, b2, fuel)?)
        }
        (ExprKind::App(f1, n1), ExprKind::App(f2, n2)) => {
            Ok(eq_nf(f1, f2, fuel)? && eq_nf(n1, n2, fuel)?)
        }
        (ExprKind::Clo(i1, s1), ExprKind::Clo(i2, s2)) => match (i1.kind(), i2.kind()) {
            (ExprKind::MetaVar(m1), ExprKind::MetaVar(m2)) => {
                Ok(m1 == m2 && eq_nf_subst(s1, s2, fuel)?)
            }
            _ => Ok(false),
        },
        _ => Ok(false),
    }
}

/// `(↑¹ U) x₁` normalized, for comparing a neutral against a lambda body.
fn eta_body(u: &Expr, fuel: &mut Fuel) -> Result<Expr, EvalError> {
    let shifted = apply_sub_eager(&Subst::shift(1), u);
    beta_normalize(&Expr::app(shifted, Expr::var(1)), fuel)
}

fn eq_nf_subst(a: &Subst, b: &Subst, fuel: &mut Fuel) -> Result<bool, EvalError> {
    fuel.tick()?;
    match (a.kind(), b.kind()) {
        (SubstKind::Shift(n1), SubstKind::Shift(n2)) => Ok(n1 == n2),
        (SubstKind::Cons(t1, v1), SubstKind::Cons(t2, v2)) => {
            Ok(eq_nf_subst(t1, t2, fuel)? && eq_nf(v1, v2, fuel)?)
        }
        // ↑ⁿ ≡ (↑ⁿ⁺¹, xₙ₊₁)
        (SubstKind::Cons(t1, v1), SubstKind::Shift(n)) => Ok(eq_nf_subst(
            t1,
            &Subst::shift(n + 1),
            fuel,
        )? && eq_nf(v1, &Expr::var(n + 1), fuel)?),
        (SubstKind::Shift(n), SubstKind::Cons(t2, v2)) => Ok(eq_nf_subst(
            &Subst::shift(n + 1),
            t2,
            fuel,
        )? && eq_nf(&Expr::var(n + 1), v2, fuel)?),
        _ => Ok(false),
    }
}

/// Why the declarative checker rejected a judgment.
#[derive(Debug)]
struct Reject(String);

type Decl<T> = Result<Result<T, Reject>, EvalError>;

macro_rules! reject {
    ($($arg:tt)*) => { return Ok(Err(Reject(format!($($arg)*)))) };
}

/// Declarative type check `Δ; Γ ⊢ E : F` against the typing rules, with
/// conversion (via `equal_beta_eta` on normalized types) at each premise.
pub fn declarative_check(
    sig: &Signature,
    delta: &[MetaEntry],
    gamma: &[Expr],
    e: &Expr,
    f: &Expr,
    fuel: &mut Fuel,
) -> Result<bool, EvalError> {
    Ok(declarative_check_trace(sig, delta, gamma, e, f, fuel)?.is_ok())
}

/// Like [`declarative_check`] but reporting the failing judgment.
pub fn declarative_check_trace(
    sig: &Signature,
    delta: &[MetaEntry],
    gamma: &[Expr],
    e: &Expr,
    f: &Expr,
    fuel: &mut Fuel,
) -> Result<Result<(), String>, EvalError> {
    let expected = beta_normalize(f, fuel)?;
    Ok(check(sig, delta, gamma, e, &expected, fuel)?.map_err(|Reject(m)| m))
}

/// Check `e` against an already-normalized expected type.
fn check(
    sig: &Signature,
    delta: &[MetaEntry],
    gamma: &[Expr],
    e: &Expr,
    expected: &Expr,
    fuel: &mut Fuel,
) -> Decl<()> {
    fuel.tick()?;
    if let ExprKind::Lam(m) = e.kind() {
        let (dom, cod) = match expected.kind() {
            ExprKind::Pi(a, b) => (a.clone(), b.clone()),
            _ => reject!("lambda checked against non-function type"),
        };
        let mut inner = gamma.to_vec();
        inner.push(dom);
        return check(sig, delta, &inner, m, &cod, fuel);
    }
    let inferred = match infer(sig, delta, gamma, e, fuel)? {
        Ok(t) => t,
        Err(r) => return Ok(Err(r)),
    };
    if equal_beta_eta(&inferred, expected, fuel)? {
        Ok(Ok(()))
    } else {
        reject!("type mismatch: inferred {inferred:?}, expected {expected:?}")
    }
}

/// Infer a normalized type for `e`. Lambdas are not inferable; closures
/// other than `[σ]X` are normalized first and re-inferred.
fn infer(
    sig: &Signature,
    delta: &[MetaEntry],
    gamma: &[Expr],
    e: &Expr,
    fuel: &mut Fuel,
) -> Decl<Expr> {
    fuel.tick()?;
    match e.kind() {
        ExprKind::Sort(Sort::Type) => Ok(Ok(Expr::sort(Sort::Kind))),
        ExprKind::Sort(Sort::Kind) => reject!("kind has no classifier"),
        ExprKind::Const(a) => match sig.lookup(*a) {
            Some(t) => Ok(Ok(beta_normalize(t, fuel)?)),
            None => reject!("unbound constant {a}"),
        },
        ExprKind::Var(n) => {
            if *n < 1 || *n > gamma.len() {
                reject!("variable x_{n} out of range for context of length {}", gamma.len());
            }
            let entry = &gamma[gamma.len() - n];
            Ok(Ok(beta_normalize(
                &apply_sub_eager(&Subst::shift(*n), entry),
                fuel,
            )?))
        }
        ExprKind::MetaVar(m) => {
            let (psi, a) = match meta_entry(delta, *m) {
                Some(x) => x,
                None => reject!("meta-variable X_{m} out of range"),
            };
            // Γ must be ⟦⇑ᵐ⟧Ψ for a bare meta-variable occurrence.
            let shifted: Vec<Expr> = psi
                .iter()
                .map(|t| apply_msub_eager(&MetaSubst::shift(*m), t))
                .collect();
            if gamma.len() != shifted.len() {
                reject!("bare X_{m} used outside its declared context");
            }
            for (g, p) in gamma.iter().zip(shifted.iter()) {
                if !equal_beta_eta(g, p, fuel)? {
                    reject!("bare X_{m} used outside its declared context");
                }
            }
            Ok(Ok(beta_normalize(
                &apply_msub_eager(&MetaSubst::shift(*m), &a),
                fuel,
            )?))
        }
        ExprKind::Pi(a, dom_body) => {
            if let Err(r) = check(sig, delta, gamma, a, &Expr::sort(Sort::Type), fuel)? {
                return Ok(Err(r));
            }
            let mut inner = gamma.to_vec();
            inner.push(a.clone());
            let s = match infer(sig, delta, &inner, dom_body, fuel)? {
                Ok(t) => t,
                Err(r) => return Ok(Err(r)),
            };
            match s.kind() {
                ExprKind::Sort(_) => Ok(Ok(s)),
                _ => reject!("Pi codomain is not classified by a sort"),
            }
        }
        ExprKind::Lam(_) => reject!("lambda is not inferable"),
        ExprKind::App(f, n) => {
            let head_ty = match infer(sig, delta, gamma, f, fuel)? {
                Ok(t) => t,
                Err(r) => return Ok(Err(r)),
            };
            let (dom, cod) = match head_ty.kind() {
                ExprKind::Pi(a, b) => (a.clone(), b.clone()),
                _ => reject!("application head is not a function"),
            };
            if let Err(r) = check(sig, delta, gamma, n, &dom, fuel)? {
                return Ok(Err(r));
            }
            let single = Subst::cons(Subst::shift(0), n.clone());
            Ok(Ok(beta_normalize(&apply_sub_eager(&single, &cod), fuel)?))
        }
        ExprKind::Clo(inner, sigma) => {
            if let ExprKind::MetaVar(m) = inner.kind() {
                let (psi, a) = match meta_entry(delta, *m) {
                    Some(x) => x,
                    None => reject!("meta-variable X_{m} out of range"),
                };
                let shifted: Vec<Expr> = psi
                    .iter()
                    .map(|t| apply_msub_eager(&MetaSubst::shift(*m), t))
                    .collect();
                if let Err(r) = check_subst(sig, delta, gamma, sigma, &shifted, fuel)? {
                    return Ok(Err(r));
                }
                let a_shifted = apply_msub_eager(&MetaSubst::shift(*m), &a);
                Ok(Ok(beta_normalize(
                    &apply_sub_eager(sigma, &a_shifted),
                    fuel,
                )?))
            } else {
                let normalized = beta_normalize(e, fuel)?;
                if &normalized == e {
                    reject!("closure is not inferable");
                }
                infer(sig, delta, gamma, &normalized, fuel)
            }
        }
        ExprKind::MetaClo(..) => {
            let normalized = beta_normalize(e, fuel)?;
            if &normalized == e {
                reject!("meta-closure is not inferable");
            }
            infer(sig, delta, gamma, &normalized, fuel)
        }
    }
}

/// `Δ; Γ ⊢ σ : Ψ` with a known domain `Ψ` (innermost entry last).
fn check_subst(
    sig: &Signature,
    delta: &[MetaEntry],
    gamma: &[Expr],
    sigma: &Subst,
    psi: &[Expr],
    fuel: &mut Fuel,
) -> Decl<()> {
    fuel.tick()?;
    match sigma.kind() {
        SubstKind::Shift(n) => {
            // Δ; Ψ,Γ' ⊢ ↑ⁿ : Ψ with |Γ'| = n: Ψ must be the outer prefix.
            if gamma.len() != psi.len() + n {
                reject!(
                    "shift ↑{n} does not map a context of length {} onto a domain of length {}",
                    gamma.len(),
                    psi.len()
                );
            }
            for (g, p) in gamma.iter().zip(psi.iter()) {
                if !equal_beta_eta(g, p, fuel)? {
                    reject!("shift domain is not a prefix of the range context");
                }
            }
            Ok(Ok(()))
        }
        SubstKind::Cons(tail, head) => {
            let (prefix, a) = match psi.split_last() {
                Some((a, prefix)) => (prefix, a),
                None => reject!("substitution provides an entry for an empty domain"),
            };
            if let Err(r) = check_subst(sig, delta, gamma, tail, prefix, fuel)? {
                return Ok(Err(r));
            }
            let entry_ty = beta_normalize(&apply_sub_eager(tail, a), fuel)?;
            check(sig, delta, gamma, head, &entry_ty, fuel)
        }
        _ => check_subst(sig, delta, gamma, &resolve_subst(sigma), psi, fuel),
    }
}

/// `Δ ⊢ θ : Δ'` with a known domain.
pub fn check_msubst_decl(
    sig: &Signature,
    delta: &[MetaEntry],
    theta: &MetaSubst,
    domain: &[MetaEntry],
    fuel: &mut Fuel,
) -> Result<bool, EvalError> {
    Ok(check_msubst(sig, delta, theta, domain, fuel)?.is_ok())
}

fn check_msubst(
    sig: &Signature,
    delta: &[MetaEntry],
    theta: &MetaSubst,
    domain: &[MetaEntry],
    fuel: &mut Fuel,
) -> Decl<()> {
    fuel.tick()?;
    match theta.kind() {
        MetaSubstKind::Shift(n) => {
            if delta.len() != domain.len() + n {
                reject!("meta-shift ⇑{n} does not fit the meta-contexts");
            }
            for (d, o) in delta.iter().zip(domain.iter()) {
                if d.context.len() != o.context.len() {
                    reject!("meta-shift domain is not a prefix of the range meta-context");
                }
                for (a, b) in d.context.iter().zip(o.context.iter()) {
                    if !equal_beta_eta(a, b, fuel)? {
                        reject!("meta-shift domain is not a prefix of the range meta-context");
                    }
                }
                if !equal_beta_eta(&d.ty, &o.ty, fuel)? {
                    reject!("meta-shift domain is not a prefix of the range meta-context");
                }
            }
            Ok(Ok(()))
        }
        MetaSubstKind::Cons(tail, head) => {
            let (entry, prefix) = match domain.split_last() {
                Some(x) => x,
                None => reject!("meta-substitution provides an entry for an empty domain"),
            };
            if let Err(r) = check_msubst(sig, delta, tail, prefix, fuel)? {
                return Ok(Err(r));
            }
            // Δ; ⟦θ⟧Γ ⊢ M : ⟦θ⟧A
            let ctx: Vec<Expr> = entry
                .context
                .iter()
                .map(|t| apply_msub_eager(tail, t))
                .collect();
            let ty = beta_normalize(&apply_msub_eager(tail, &entry.ty), fuel)?;
            check(sig, delta, &ctx, head, &ty, fuel)
        }
        MetaSubstKind::Comp(..) => {
            check_msubst(sig, delta, &resolve_msubst(theta), domain, fuel)
        }
    }
}

fn meta_entry(delta: &[MetaEntry], m: usize) -> Option<(Context, Expr)> {
    if m < 1 || m > delta.len() {
        return None;
    }
    let entry = &delta[delta.len() - m];
    Some((entry.context.clone(), entry.ty.clone()))
}

/// Convenience: `Δ; Γ ⊢ σ : Ψ` as a boolean, used by differential tests.
pub fn check_subst_decl(
    sig: &Signature,
    delta: &[MetaEntry],
    gamma: &[Expr],
    sigma: &Subst,
    psi: &[Expr],
    fuel: &mut Fuel,
) -> Result<bool, EvalError> {
    Ok(check_subst(sig, delta, gamma, sigma, psi, fuel)?.is_ok())
}
