//! Type-directed random term generation over a fixed test signature,
//! used by the acceptance suite.
//!
//! Generated terms are well-typed by construction: every redex chooses
//! the binder's type first and generates the argument at that type, and
//! every explicit substitution or meta-substitution is built against the
//! context it maps. Types are first-order over `nat`; an "arity" of `k`
//! means `nat -> ... -> nat` with `k` arrows.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use cmtt_core::check::{check_signature, CheckedMetaContext, Declaration};
use cmtt_core::syntax::{node_count, Expr, MetaSubst, Signature, Sort, Subst};
use cmtt_core::Name;

pub const META_N: usize = 3;
pub const META_F: usize = 2;
pub const META_G: usize = 1;

pub struct TestSig {
    pub sig: Signature,
    pub delta: CheckedMetaContext,
}

pub fn c(s: &str) -> Expr {
    Expr::constant(Name::intern(s))
}

pub fn nat() -> Expr {
    c("nat")
}

/// nat, z, s, f2 plus three meta-variables N : (⊢ nat), F : (nat ⊢ nat),
/// G : (nat, nat ⊢ nat). Built through the checker so the fixture itself
/// is validated.
pub fn test_sig() -> TestSig {
    let decls = vec![
        Declaration::Const {
            name: Name::intern("nat"),
            classifier: Expr::sort(Sort::Type),
        },
        Declaration::Const {
            name: Name::intern("z"),
            classifier: nat(),
        },
        Declaration::Const {
            name: Name::intern("s"),
            classifier: Expr::pi(nat(), nat()),
        },
        Declaration::Const {
            name: Name::intern("f2"),
            classifier: Expr::pi(nat(), Expr::pi(nat(), nat())),
        },
        Declaration::Meta {
            name: Name::intern("N"),
            context: vec![],
            ty: nat(),
        },
        Declaration::Meta {
            name: Name::intern("F"),
            context: vec![nat()],
            ty: nat(),
        },
        Declaration::Meta {
            name: Name::intern("G"),
            context: vec![nat(), nat()],
            ty: nat(),
        },
    ];
    let (sig, delta) = check_signature(&decls, 1_000_000).expect("test signature checks");
    TestSig { sig, delta }
}

pub struct TermGen {
    pub rng: StdRng,
}

impl TermGen {
    pub fn new(seed: u64) -> TermGen {
        TermGen {
            rng: StdRng::seed_from_u64(seed),
        }
    }

    /// A term of type `nat` in a context whose entries have the given
    /// arities (innermost last).
    pub fn nat_term(&mut self, ctx: &mut Vec<usize>, budget: &mut usize) -> Expr {
        if *budget <= 1 {
            return self.nat_leaf(ctx);
        }
        *budget -= 1;
        match self.rng.gen_range(0u32..14) {
            0 | 1 => self.nat_leaf(ctx),
            2 | 3 => Expr::app(c("s"), self.nat_term(ctx, budget)),
            4 => {
                let a = self.nat_term(ctx, budget);
                let b = self.nat_term(ctx, budget);
                Expr::app(Expr::app(c("f2"), a), b)
            }
            5 => {
                // Apply a function-typed variable if one is in scope.
                let funs: Vec<(usize, usize)> = ctx
                    .iter()
                    .rev()
                    .enumerate()
                    .filter(|(_, a)| **a > 0)
                    .map(|(i, a)| (i + 1, *a))
                    .collect();
                match funs.get(self.rng.gen_range(0..funs.len().max(1))) {
                    Some(&(index, arity)) => {
                        let mut e = Expr::var(index);
                        for _ in 0..arity {
                            e = Expr::app(e, self.nat_term(ctx, budget));
                        }
                        e
                    }
                    None => self.nat_leaf(ctx),
                }
            }
            6 => {
                // F[t]
                let t = self.nat_term(ctx, budget);
                Expr::clo(
                    Expr::meta_var(META_F),
                    Subst::cons(Subst::shift(ctx.len()), t),
                )
            }
            7 => {
                // G[t, u]
                let t = self.nat_term(ctx, budget);
                let u = self.nat_term(ctx, budget);
                Expr::clo(
                    Expr::meta_var(META_G),
                    Subst::cons(Subst::cons(Subst::shift(ctx.len()), t), u),
                )
            }
            8 | 9 => {
                // β-redex with a chosen binder type.
                let arity = self.rng.gen_range(0usize..2);
                ctx.push(arity);
                let body = self.nat_term(ctx, budget);
                ctx.pop();
                let arg = self.fun_term(ctx, arity, budget);
                Expr::app(Expr::lam(body), arg)
            }
            10 | 11 => {
                // Explicit closure [σ]M with σ : Ψ' ← Γ, Ψ' fresh nats.
                let j = self.rng.gen_range(1usize..3);
                let mut sigma = Subst::shift(ctx.len());
                for _ in 0..j {
                    let t = self.nat_term(ctx, budget);
                    sigma = Subst::cons(sigma, t);
                }
                let mut inner_ctx = vec![0; j];
                let m = self.nat_term(&mut inner_ctx, budget);
                Expr::clo(m, sigma)
            }
            12 => {
                // Meta-closure replacing the newest meta-variable G.
                let mut g_ctx = vec![0, 0];
                let t = self.nat_term(&mut g_ctx, budget);
                let m = self.nat_term(ctx, budget);
                Expr::meta_clo(m, MetaSubst::cons(MetaSubst::shift(1), t))
            }
            _ => {
                // Identity meta-closure.
                let m = self.nat_term(ctx, budget);
                Expr::meta_clo(m, MetaSubst::shift(0))
            }
        }
    }

    fn nat_leaf(&mut self, ctx: &[usize]) -> Expr {
        let nat_vars: Vec<usize> = ctx
            .iter()
            .rev()
            .enumerate()
            .filter(|(_, a)| **a == 0)
            .map(|(i, _)| i + 1)
            .collect();
        match self.rng.gen_range(0u32..4) {
            0 if !nat_vars.is_empty() => {
                Expr::var(nat_vars[self.rng.gen_range(0..nat_vars.len())])
            }
            1 => Expr::clo(Expr::meta_var(META_N), Subst::shift(ctx.len())),
            _ => c("z"),
        }
    }

    /// A term of the k-ary function type `nat -> ... -> nat`.
    pub fn fun_term(&mut self, ctx: &mut Vec<usize>, arity: usize, budget: &mut usize) -> Expr {
        if arity == 0 {
            return self.nat_term(ctx, budget);
        }
        if *budget > 1 {
            *budget -= 1;
        }
        match (arity, self.rng.gen_range(0u32..4)) {
            (1, 0) => c("s"),
            (1, 1) => Expr::app(c("f2"), self.nat_term(ctx, budget)),
            (2, 0) => c("f2"),
            (k, 2) => {
                let vars: Vec<usize> = ctx
                    .iter()
                    .rev()
                    .enumerate()
                    .filter(|(_, a)| **a == k)
                    .map(|(i, _)| i + 1)
                    .collect();
                if vars.is_empty() {
                    self.lam_fun(ctx, k, budget)
                } else {
                    Expr::var(vars[self.rng.gen_range(0..vars.len())])
                }
            }
            (k, _) => self.lam_fun(ctx, k, budget),
        }
    }

    fn lam_fun(&mut self, ctx: &mut Vec<usize>, arity: usize, budget: &mut usize) -> Expr {
        ctx.push(0);
        let body = self.fun_term(ctx, arity - 1, budget);
        ctx.pop();
        Expr::lam(body)
    }

    /// A closed-in-`d`-nats term of type nat, capped at `max_nodes`.
    pub fn sized_nat_term(&mut self, ctx_len: usize, max_nodes: usize) -> Expr {
        loop {
            let mut ctx = vec![0; ctx_len];
            let mut budget = max_nodes / 2;
            let t = self.nat_term(&mut ctx, &mut budget);
            if node_count(&t) <= max_nodes {
                return t;
            }
        }
    }

    /// Rewrite `e` with a randomly chosen equality-preserving law.
    pub fn law_rewrite(&mut self, e: &Expr, ctx_len: usize) -> Expr {
        match self.rng.gen_range(0u32..6) {
            // [↑⁰]E ≡ E
            0 => Expr::clo(e.clone(), Subst::shift(0)),
            // ⟦⇑⁰⟧E ≡ E
            1 => Expr::meta_clo(e.clone(), MetaSubst::shift(0)),
            // [↑⁰, E]x₁ ≡ E
            2 => Expr::clo(
                Expr::var(1),
                Subst::cons(Subst::shift(0), e.clone()),
            ),
            // ⟦⇑⁰, E⟧X₁ ≡ E
            3 => Expr::meta_clo(
                Expr::meta_var(1),
                MetaSubst::cons(MetaSubst::shift(0), e.clone()),
            ),
            // β-expansion: E ≡ (λ [↑¹]E) N
            4 => {
                let mut ctx = vec![0; ctx_len];
                let mut budget = 4;
                let n = self.nat_term(&mut ctx, &mut budget);
                Expr::app(Expr::lam(Expr::clo(e.clone(), Subst::shift(1))), n)
            }
            // [σ][τ]E ≡ [[σ]τ]E on an identity pair
            _ => Expr::clo(
                e.clone(),
                Subst::comp(Subst::shift(0), Subst::shift(0)),
            ),
        }
    }

    /// A pair equal by the term-level η law: `(M, λ ([↑¹]M) x₁)` at a
    /// function type.
    pub fn eta_term_pair(&mut self, ctx_len: usize) -> (Expr, Expr) {
        let mut ctx = vec![0; ctx_len];
        let mut budget = 8;
        let f = self.fun_term(&mut ctx, 1, &mut budget);
        let expansion = Expr::lam(Expr::app(
            Expr::clo(f.clone(), Subst::shift(1)),
            Expr::var(1),
        ));
        (f, expansion)
    }

    /// A pair equal by the substitution η law `↑ⁿ ≡ (↑ⁿ⁺¹, xₙ₊₁)`, as the
    /// base of a meta-variable substitution. Both sides are typed in a
    /// context of `d` nats.
    pub fn eta_subst_pair(&mut self, d: usize) -> (Expr, Expr) {
        // Choose F (arity 1) or G (arity 2) and how many entries to cons
        // explicitly; the remainder is covered by the base shift.
        let (meta, arity) = if self.rng.gen_bool(0.5) {
            (META_F, 1)
        } else {
            (META_G, 2)
        };
        let consed = self.rng.gen_range(0..arity);
        let uncovered = arity - consed; // >= 1
        debug_assert!(d >= uncovered + 1, "context too small for the expansion");
        let n = d - uncovered;
        let base_plain = Subst::shift(n);
        let base_expanded = Subst::cons(Subst::shift(n + 1), Expr::var(n + 1));
        let mut lhs = base_plain;
        let mut rhs = base_expanded;
        for _ in 0..consed {
            let mut ctx = vec![0; d];
            let mut budget = 4;
            let t = self.nat_term(&mut ctx, &mut budget);
            lhs = Subst::cons(lhs, t.clone());
            rhs = Subst::cons(rhs, t);
        }
        (
            Expr::clo(Expr::meta_var(meta), lhs),
            Expr::clo(Expr::meta_var(meta), rhs),
        )
    }
}

/// `k`-fold nested identity-substitution closure over `x₁`.
pub fn identity_tower(k: usize) -> Expr {
    let mut e = Expr::var(1);
    for _ in 0..k {
        e = Expr::clo(e, Subst::shift(0));
    }
    e
}
