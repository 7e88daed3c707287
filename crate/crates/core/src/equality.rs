//! Untyped algorithmic βη-equality.
//!
//! Three mutually recursive judgments: equality of weak head normal
//! forms, of neutral forms, and of environments under running shift
//! offsets. Comparison alternates with weak head evaluation; η-equality
//! is handled on the fly, both for terms (comparing a lambda closure
//! against a neutral via its expansion) and for substitutions
//! (`↑ⁿ ≡ (↑ⁿ⁺¹, xₙ₊₁)`).

use crate::eval::{
    shift_closure, shift_neutral, whnf, Closure, Env, EnvKind, EvalError, Fuel, Neutral, Whnf,
};

/// Closures are equal iff their weak head normal forms are related.
pub fn eq_closure(l1: &Closure, l2: &Closure, fuel: &mut Fuel) -> Result<bool, EvalError> {
    let w1 = whnf(l1, fuel)?;
    let w2 = whnf(l2, fuel)?;
    eq_whnf(&w1, &w2, fuel)
}

/// `W ~w W'`.
pub fn eq_whnf(w1: &Whnf, w2: &Whnf, fuel: &mut Fuel) -> Result<bool, EvalError> {
    fuel.tick()?;
    match (w1, w2) {
        (Whnf::Sort(s1), Whnf::Sort(s2)) => Ok(s1 == s2),
        (Whnf::Pi(a1, b1, rho1, eta1), Whnf::Pi(a2, b2, rho2, eta2)) => {
            let doms = eq_closure(
                &Closure::Clo(a1.clone(), rho1.clone(), eta1.clone()),
                &Closure::Clo(a2.clone(), rho2.clone(), eta2.clone()),
                fuel,
            )?;
            if !doms {
                return Ok(false);
            }
            eq_closure(
                &Closure::Clo(b1.clone(), rho1.lift(), eta1.clone()),
                &Closure::Clo(b2.clone(), rho2.lift(), eta2.clone()),
                fuel,
            )
        }
        (Whnf::Neutral(h1), Whnf::Neutral(h2)) => eq_neutral(h1, h2, fuel),
        (Whnf::Lam(m1, rho1, eta1), Whnf::Lam(m2, rho2, eta2)) => eq_closure(
            &Closure::Clo(m1.clone(), rho1.lift(), eta1.clone()),
            &Closure::Clo(m2.clone(), rho2.lift(), eta2.clone()),
            fuel,
        ),
        // η: [ρ]⟦η⟧(λM) ~w H iff whnf (lift ρ) η M ~w (↑¹H) x₁
        (Whnf::Lam(m, rho, eta), Whnf::Neutral(h)) | (Whnf::Neutral(h), Whnf::Lam(m, rho, eta)) => {
            let body = whnf(&Closure::Clo(m.clone(), rho.lift(), eta.clone()), fuel)?;
            let expansion = Whnf::Neutral(Neutral::App(
                Box::new(shift_neutral(1, h)),
                Closure::Var(1),
            ));
            eq_whnf(&body, &expansion, fuel)
        }
        _ => Ok(false),
    }
}

/// `H ~n H'`.
pub fn eq_neutral(h1: &Neutral, h2: &Neutral, fuel: &mut Fuel) -> Result<bool, EvalError> {
    match (h1, h2) {
        (Neutral::Const(a1), Neutral::Const(a2)) => Ok(a1 == a2),
        (Neutral::Var(n1), Neutral::Var(n2)) => Ok(n1 == n2),
        (Neutral::Meta(m1, rho1), Neutral::Meta(m2, rho2)) => {
            if m1 != m2 {
                return Ok(false);
            }
            eq_env(0, 0, rho1, rho2, fuel)
        }
        (Neutral::App(g1, arg1), Neutral::App(g2, arg2)) => {
            if !eq_neutral(g1, g2, fuel)? {
                return Ok(false);
            }
            eq_closure(arg1, arg2, fuel)
        }
        _ => Ok(false),
    }
}

/// `k ⊢ ρ ~ ρ' ⊣ k'`: environment equality under shift offsets.
pub fn eq_env(
    k1: usize,
    k2: usize,
    rho1: &Env,
    rho2: &Env,
    fuel: &mut Fuel,
) -> Result<bool, EvalError> {
    fuel.tick()?;
    match (rho1.kind(), rho2.kind()) {
        // Explicit shifts are absorbed into the offsets.
        (EnvKind::Shifted(n, inner), _) => eq_env(k1 + n, k2, inner, rho2, fuel),
        (_, EnvKind::Shifted(n, inner)) => eq_env(k1, k2 + n, rho1, inner, fuel),
        (EnvKind::Shift(n1), EnvKind::Shift(n2)) => Ok(k1 + n1 == k2 + n2),
        (EnvKind::Cons(t1, l1), EnvKind::Cons(t2, l2)) => {
            if !eq_env(k1, k2, t1, t2, fuel)? {
                return Ok(false);
            }
            let w1 = whnf(&shift_closure(k1, l1), fuel)?;
            let w2 = whnf(&shift_closure(k2, l2), fuel)?;
            eq_whnf(&w1, &w2, fuel)
        }
        // η: (ρ, L) against ↑ⁿ via the expansion (↑ⁿ⁺¹, xₙ₊₁).
        (EnvKind::Cons(t1, l1), EnvKind::Shift(n2)) => {
            if !eq_env(k1, k2, t1, &Env::shift(n2 + 1), fuel)? {
                return Ok(false);
            }
            let w1 = whnf(&shift_closure(k1, l1), fuel)?;
            eq_whnf(&w1, &Whnf::Neutral(Neutral::Var(k2 + n2 + 1)), fuel)
        }
        (EnvKind::Shift(n1), EnvKind::Cons(t2, l2)) => {
            if !eq_env(k1, k2, &Env::shift(n1 + 1), t2, fuel)? {
                return Ok(false);
            }
            let w2 = whnf(&shift_closure(k2, l2), fuel)?;
            eq_whnf(&Whnf::Neutral(Neutral::Var(k1 + n1 + 1)), &w2, fuel)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intern::Name;
    use crate::syntax::{Expr, Sort, Subst};
    use crate::eval::MetaEnv;

    fn c(s: &str) -> Expr {
        Expr::constant(Name::intern(s))
    }

    fn fuel() -> Fuel {
        Fuel::new(100_000)
    }

    fn id_clo(e: Expr) -> Closure {
        Closure::under_id(e)
    }

    #[test]
    fn closure_equality() {
        assert!(eq_closure(&Closure::Var(3), &Closure::Var(3), &mut fuel()).unwrap());
        assert!(!eq_closure(&Closure::Var(1), &Closure::Var(2), &mut fuel()).unwrap());
        // (λx.x) a ~ a
        let redex = Expr::app(Expr::lam(Expr::var(1)), c("a"));
        assert!(eq_closure(&id_clo(redex), &id_clo(c("a")), &mut fuel()).unwrap());
    }

    #[test]
    fn whnf_sorts() {
        assert!(eq_whnf(&Whnf::Sort(Sort::Type), &Whnf::Sort(Sort::Type), &mut fuel()).unwrap());
        assert!(!eq_whnf(&Whnf::Sort(Sort::Type), &Whnf::Sort(Sort::Kind), &mut fuel()).unwrap());
    }

    #[test]
    fn eta_lam_against_neutral() {
        // λ. ([↑¹]c) x₁ ~w c
        let body = Expr::app(Expr::clo(c("c"), Subst::shift(1)), Expr::var(1));
        let lam = Whnf::Lam(body, Env::shift(0), MetaEnv::id());
        let neutral = Whnf::Neutral(Neutral::Const(Name::intern("c")));
        assert!(eq_whnf(&lam, &neutral, &mut fuel()).unwrap());
        assert!(eq_whnf(&neutral, &lam, &mut fuel()).unwrap());
    }

    #[test]
    fn eta_rejects_non_expansion() {
        // x₁ is not the η-expansion of itself: (↑¹x₁) x₁ = x₂ x₁ ≠ x₁.
        let lam = Whnf::Lam(Expr::var(1), Env::shift(0), MetaEnv::id());
        let neutral = Whnf::Neutral(Neutral::Var(1));
        assert!(!eq_whnf(&neutral, &lam, &mut fuel()).unwrap());
        assert!(!eq_whnf(&lam, &neutral, &mut fuel()).unwrap());
    }

    #[test]
    fn neutral_rules() {
        let a = Neutral::Const(Name::intern("a"));
        assert!(eq_neutral(&a, &a, &mut fuel()).unwrap());
        let rho = Env::shift(0);
        assert!(!eq_neutral(
            &Neutral::Meta(2, rho.clone()),
            &Neutral::Meta(3, rho),
            &mut fuel()
        )
        .unwrap());
        let app = Neutral::App(Box::new(Neutral::Var(1)), Closure::Var(2));
        assert!(eq_neutral(&app, &app.clone(), &mut fuel()).unwrap());
    }

    #[test]
    fn env_shift_offsets() {
        assert!(eq_env(0, 0, &Env::shift(2), &Env::shift(2), &mut fuel()).unwrap());
        assert!(eq_env(1, 0, &Env::shift(2), &Env::shift(3), &mut fuel()).unwrap());
        assert!(!eq_env(0, 0, &Env::shift(2), &Env::shift(3), &mut fuel()).unwrap());
    }

    #[test]
    fn env_substitution_eta() {
        // (↑¹, x₁) ~ ↑⁰
        let expanded = Env::cons(Env::shift(1), Closure::Var(1));
        assert!(eq_env(0, 0, &expanded, &Env::shift(0), &mut fuel()).unwrap());
        assert!(eq_env(0, 0, &Env::shift(0), &expanded, &mut fuel()).unwrap());
    }

    #[test]
    fn env_shifted_absorption() {
        // k ⊢ [↑ᵈ]ρ ~ ρ' ⊣ k' = k+d ⊢ ρ ~ ρ' ⊣ k'
        let rho = Env::cons(Env::shift(1), Closure::Var(2));
        let lhs = eq_env(0, 3, &Env::shifted(3, rho.clone()), &rho, &mut fuel()).unwrap();
        let rhs = eq_env(3, 3, &rho, &rho, &mut fuel()).unwrap();
        assert_eq!(lhs, rhs);
        assert!(lhs);
    }
}
