//! Cross-module properties: engine/oracle agreement, equality symmetry,
//! composition coherence, and print/parse round trips.

use proptest::prelude::*;

use cmtt_core::equality::{eq_closure, eq_env, eq_whnf};
use cmtt_core::eval::{
    eval_sub, lookup, readback, readback_env, shift_closure, whnf, Closure, Env, EvalError, Fuel,
    MetaEnv,
};
use cmtt_core::frontend::{parse_term, resolve_expr, NameEnv};
use cmtt_core::oracle::beta_normalize;
use cmtt_core::print::Printer;
use cmtt_core::syntax::{Expr, MetaSubst, Subst};
use cmtt_core::Name;

fn c(s: &str) -> Expr {
    Expr::constant(Name::intern(s))
}

fn fuel() -> Fuel {
    Fuel::new(200_000)
}

/// Closed, strongly-normalizing-ish expressions: constants, bounded
/// lambdas and applications, explicit closures. `depth` tracks how many
/// binders enclose the hole so variables stay in scope.
fn arb_expr(depth: usize) -> impl Strategy<Value = Expr> {
    let leaf = if depth == 0 {
        prop_oneof![Just(c("a")), Just(c("b")), Just(c("g"))].boxed()
    } else {
        prop_oneof![
            Just(c("a")),
            Just(c("b")),
            (1..=depth).prop_map(Expr::var),
        ]
        .boxed()
    };
    leaf.prop_recursive(3, 20, 2, move |inner| {
        let lam = {
            let deeper = arb_expr_boxed(depth + 1);
            deeper.prop_map(Expr::lam)
        };
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(f, a)| Expr::app(f, a)),
            lam,
            (inner.clone(), 0usize..3).prop_map(|(e, n)| Expr::clo(e, Subst::shift(n))),
            (inner.clone(), inner).prop_map(|(e, t)| Expr::clo(
                e,
                Subst::cons(Subst::shift(0), t)
            )),
        ]
    })
}

fn arb_expr_boxed(depth: usize) -> BoxedStrategy<Expr> {
    // Bounded separately to keep recursion finite.
    let leaf = if depth == 0 {
        prop_oneof![Just(c("a")), Just(c("b"))].boxed()
    } else {
        prop_oneof![Just(c("a")), (1..=depth).prop_map(Expr::var)].boxed()
    };
    leaf.prop_recursive(2, 10, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(f, a)| Expr::app(f, a)),
            inner.prop_map(Expr::lam),
        ]
    })
    .boxed()
}

fn arb_closure() -> impl Strategy<Value = Closure> {
    prop_oneof![
        (1usize..5).prop_map(Closure::Var),
        (arb_expr(0), arb_env()).prop_map(|(e, rho)| Closure::Clo(e, rho, MetaEnv::id())),
    ]
}

fn arb_env() -> BoxedStrategy<Env> {
    let leaf = (0usize..4).prop_map(Env::shift).boxed();
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), (1usize..5)).prop_map(|(rho, v)| Env::cons(rho, Closure::Var(v))),
            (inner.clone(), arb_expr(0), 0usize..3).prop_map(|(rho, e, n)| Env::cons(
                rho,
                Closure::Clo(e, Env::shift(n), MetaEnv::id())
            )),
            (1usize..3, inner).prop_map(|(n, rho)| Env::shifted(n, rho)),
        ]
    })
    .boxed()
}

fn arb_nu() -> BoxedStrategy<Subst> {
    let leaf = (0usize..4).prop_map(Subst::shift).boxed();
    leaf.prop_recursive(3, 12, 2, |inner| {
        (inner, arb_expr(0)).prop_map(|(s, e)| Subst::cons(s, e)).boxed()
    })
    .boxed()
}

/// Treat fuel exhaustion as a discarded case.
fn ok_or_discard<T>(r: Result<T, EvalError>) -> Result<Option<T>, TestCaseError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(EvalError::FuelExhausted { .. }) => Ok(None),
        Err(e) => Err(TestCaseError::fail(format!("unexpected error: {e}"))),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn engine_and_oracle_normalize_alike(e in arb_expr(0)) {
        let mut f1 = fuel();
        let lazy = whnf(&Closure::under_id(e.clone()), &mut f1)
            .and_then(|w| readback(&w, &mut f1));
        let lazy = ok_or_discard(lazy)?;
        let eager = ok_or_discard(beta_normalize(&e, &mut fuel()))?;
        if let (Some(l), Some(r)) = (lazy, eager) {
            prop_assert_eq!(l, r);
        }
    }

    #[test]
    fn eq_closure_is_symmetric(l1 in arb_closure(), l2 in arb_closure()) {
        let a = ok_or_discard(eq_closure(&l1, &l2, &mut fuel()))?;
        let b = ok_or_discard(eq_closure(&l2, &l1, &mut fuel()))?;
        if let (Some(a), Some(b)) = (a, b) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn eq_whnf_is_reflexive(l in arb_closure()) {
        if let Some(w) = ok_or_discard(whnf(&l, &mut fuel()))? {
            if let Some(r) = ok_or_discard(eq_whnf(&w, &w, &mut fuel()))? {
                prop_assert!(r);
            }
        }
    }

    #[test]
    fn eq_env_is_symmetric(
        k1 in 0usize..3,
        k2 in 0usize..3,
        r1 in arb_env(),
        r2 in arb_env(),
    ) {
        let a = ok_or_discard(eq_env(k1, k2, &r1, &r2, &mut fuel()))?;
        let b = ok_or_discard(eq_env(k2, k1, &r2, &r1, &mut fuel()))?;
        if let (Some(a), Some(b)) = (a, b) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn eq_env_shift_absorption(
        k1 in 0usize..3,
        k2 in 0usize..3,
        d in 1usize..3,
        r1 in arb_env(),
        r2 in arb_env(),
    ) {
        let a = ok_or_discard(eq_env(k1, k2, &Env::shifted(d, r1.clone()), &r2, &mut fuel()))?;
        let b = ok_or_discard(eq_env(k1 + d, k2, &r1, &r2, &mut fuel()))?;
        if let (Some(a), Some(b)) = (a, b) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn lookup_commutes_with_shift(n in 0usize..3, m in 1usize..5, rho in arb_env()) {
        prop_assert_eq!(
            lookup(&Env::shifted(n, rho.clone()), m),
            shift_closure(n, &lookup(&rho, m))
        );
    }

    #[test]
    fn composition_evaluates_coherently(rho in arb_env(), sigma in arb_nu(), tau in arb_nu()) {
        // [ρ]⟦η⟧([σ]τ) evaluates like evaluating σ first, then τ.
        let eta = MetaEnv::id();
        let composed = eval_sub(&rho, &eta, &Subst::comp(tau.clone(), sigma.clone()));
        let staged = eval_sub(&eval_sub(&rho, &eta, &sigma), &eta, &tau);
        let a = ok_or_discard(readback_env(&composed, &mut fuel()))?;
        let b = ok_or_discard(readback_env(&staged, &mut fuel()))?;
        if let (Some(a), Some(b)) = (a, b) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn derived_variable_rule_holds(
        rho in arb_env(),
        l in arb_closure(),
        n in 1usize..4,
    ) {
        let eta = MetaEnv::id();
        let extended = Env::cons(rho.clone(), l);
        let lhs = whnf(&Closure::Clo(Expr::var(n + 1), extended, eta.clone()), &mut fuel())
            .and_then(|w| readback(&w, &mut fuel()));
        let rhs = whnf(&Closure::Clo(Expr::var(n), rho, eta), &mut fuel())
            .and_then(|w| readback(&w, &mut fuel()));
        if let (Some(a), Some(b)) = (ok_or_discard(lhs)?, ok_or_discard(rhs)?) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn derived_meta_variable_rule_holds(
        head in arb_expr(0),
        shift in 0usize..3,
        n in 1usize..4,
    ) {
        // ⟦θ, M⟧X_{n+1} ≡ ⟦θ⟧X_n with θ = ⇑ᵏ.
        let theta = MetaSubst::shift(shift);
        let lhs_expr = Expr::meta_clo(Expr::meta_var(n + 1), MetaSubst::cons(theta.clone(), head));
        let rhs_expr = Expr::meta_clo(Expr::meta_var(n), theta);
        let lhs = whnf(&Closure::under_id(lhs_expr), &mut fuel())
            .and_then(|w| readback(&w, &mut fuel()));
        let rhs = whnf(&Closure::under_id(rhs_expr), &mut fuel())
            .and_then(|w| readback(&w, &mut fuel()));
        if let (Some(a), Some(b)) = (ok_or_discard(lhs)?, ok_or_discard(rhs)?) {
            prop_assert_eq!(a, b);
        }
    }
}

/// Well-scoped closure-free expressions for the print round trip.
fn arb_printable(depth: usize) -> BoxedStrategy<Expr> {
    let leaf = if depth == 0 {
        prop_oneof![Just(c("a")), Just(c("b")), Just(c("nat"))].boxed()
    } else {
        prop_oneof![
            Just(c("a")),
            Just(c("nat")),
            (1..=depth).prop_map(Expr::var),
        ]
        .boxed()
    };
    if depth >= 3 {
        return leaf;
    }
    let deeper = move || arb_printable(depth + 1);
    leaf.prop_recursive(3, 16, 2, move |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(f, a)| Expr::app(f, a)),
            deeper().prop_map(Expr::lam),
            (inner.clone(), deeper()).prop_map(|(a, b)| Expr::pi(a, b)),
        ]
    })
    .boxed()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_resolve_round_trip(e in arb_printable(0)) {
        let printer = Printer::new();
        let text = printer.print(&e);
        let surface = parse_term(&text, &Default::default())
            .map_err(|err| TestCaseError::fail(format!("reparse of `{text}`: {err}")))?;
        let resolved = resolve_expr(&surface, &mut NameEnv::new())
            .map_err(|err| TestCaseError::fail(format!("re-resolve of `{text}`: {err}")))?;
        prop_assert_eq!(resolved, e);
    }

    #[test]
    fn meta_occurrence_round_trip(shift in 0usize..4, entries in proptest::collection::vec(arb_printable(0), 0..3)) {
        // [ν]X prints as X[^n, ...] and resolves back to itself.
        let mut nu = Subst::shift(shift);
        for t in &entries {
            nu = Subst::cons(nu, t.clone());
        }
        let e = Expr::clo(Expr::meta_var(1), nu);
        let printer = Printer::with_meta_names(vec!["X".to_owned()], Default::default());
        let text = printer.print(&e);
        let metas = std::collections::HashSet::from(["X".to_owned()]);
        let surface = parse_term(&text, &metas)
            .map_err(|err| TestCaseError::fail(format!("reparse of `{text}`: {err}")))?;
        let mut env = NameEnv::new();
        env.push_meta("X".to_owned(), entries.len());
        let resolved = resolve_expr(&surface, &mut env)
            .map_err(|err| TestCaseError::fail(format!("re-resolve of `{text}`: {err}")))?;
        prop_assert_eq!(resolved, e);
    }
}
