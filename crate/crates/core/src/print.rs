//! Pretty-printing back to concrete syntax.
//!
//! Binders get fresh names `x1, x2, ...` avoiding a caller-supplied set;
//! out-of-scope variables print in the explicit index form `#n`.
//! Meta-variables print by name when a name list is available, otherwise
//! as `X{index}`. For closure-free expressions and `[ν]X` occurrences the
//! output re-parses and re-resolves to the same expression.

use std::collections::HashSet;

use crate::eval::{readback, Fuel, Whnf};
use crate::syntax::{Expr, ExprKind, MetaSubst, MetaSubstKind, Sort, Subst, SubstKind};

#[derive(Default, Clone)]
pub struct Printer {
    /// Meta-variable names, oldest declaration first; `X_1` is the last.
    pub meta_names: Vec<String>,
    /// Names that fresh binders must not collide with.
    pub avoid: HashSet<String>,
}

impl Printer {
    pub fn new() -> Printer {
        Printer::default()
    }

    pub fn with_meta_names(meta_names: Vec<String>, avoid: HashSet<String>) -> Printer {
        Printer { meta_names, avoid }
    }

    pub fn print(&self, e: &Expr) -> String {
        let mut stack = Vec::new();
        self.expr(e, 0, &mut stack)
    }

    /// Print an open term under the given binder names (innermost last).
    pub fn print_open(&self, e: &Expr, binders: &[String]) -> String {
        let mut stack = binders.to_vec();
        self.expr(e, 0, &mut stack)
    }

    /// Best-effort display of a weak head normal form, via readback.
    pub fn print_whnf(&self, w: &Whnf) -> String {
        let mut fuel = Fuel::new(100_000);
        match readback(w, &mut fuel) {
            Ok(e) => self.print(&e),
            Err(_) => "<unprintable weak head normal form>".to_owned(),
        }
    }

    fn fresh(&self, stack: &[String]) -> String {
        let mut i = stack.len() + 1;
        loop {
            let cand = format!("x{i}");
            if !self.avoid.contains(&cand) && !stack.contains(&cand) {
                return cand;
            }
            i += 1;
        }
    }

    fn meta_name(&self, m: usize) -> String {
        if m >= 1 && m <= self.meta_names.len() {
            self.meta_names[self.meta_names.len() - m].clone()
        } else {
            format!("X{m}")
        }
    }

    // Precedence: 0 = binders and arrows, 1 = application, 2 = atoms.
    fn expr(&self, e: &Expr, prec: u8, stack: &mut Vec<String>) -> String {
        match e.kind() {
            ExprKind::Sort(Sort::Type) => "type".to_owned(),
            ExprKind::Sort(Sort::Kind) => "kind".to_owned(),
            ExprKind::Const(a) => a.as_str().to_owned(),
            ExprKind::Var(n) => {
                if *n >= 1 && *n <= stack.len() {
                    stack[stack.len() - n].clone()
                } else {
                    format!("#{n}")
                }
            }
            ExprKind::MetaVar(m) => self.meta_name(*m),
            ExprKind::Lam(body) => {
                let name = self.fresh(stack);
                stack.push(name.clone());
                let body = self.expr(body, 0, stack);
                stack.pop();
                parens_if(prec > 0, format!("[{name}] {body}"))
            }
            ExprKind::Pi(dom, cod) => {
                if occurs_var(cod, 1) {
                    let dom = self.expr(dom, 0, stack);
                    let name = self.fresh(stack);
                    stack.push(name.clone());
                    let cod = self.expr(cod, 0, stack);
                    stack.pop();
                    parens_if(prec > 0, format!("{{{name} : {dom}}} {cod}"))
                } else {
                    let dom = self.expr(dom, 1, stack);
                    // The binder still counts for indices in the codomain,
                    // it just has no visible name.
                    stack.push(String::new());
                    let cod = self.expr(cod, 0, stack);
                    stack.pop();
                    parens_if(prec > 0, format!("{dom} -> {cod}"))
                }
            }
            ExprKind::App(f, a) => {
                let f = self.expr(f, 1, stack);
                let a = self.expr(a, 2, stack);
                parens_if(prec > 1, format!("{f} {a}"))
            }
            ExprKind::Clo(body, s) => {
                if let ExprKind::MetaVar(m) = body.kind() {
                    format!("{}[{}]", self.meta_name(*m), self.subst(s, stack))
                } else {
                    let body = self.expr(body, 2, stack);
                    format!("{body}[{}]", self.subst(s, stack))
                }
            }
            ExprKind::MetaClo(body, t) => {
                let body = self.expr(body, 2, stack);
                format!("{body}[[{}]]", self.msubst(t, stack))
            }
        }
    }

    fn subst(&self, s: &Subst, stack: &mut Vec<String>) -> String {
        let mut entries = Vec::new();
        let mut cur = s.clone();
        loop {
            match cur.kind() {
                SubstKind::Shift(n) => {
                    entries.push(format!("^{n}"));
                    break;
                }
                SubstKind::Cons(tail, head) => {
                    entries.push(self.expr(head, 0, stack));
                    cur = tail.clone();
                }
                SubstKind::Comp(inner, outer) => {
                    let inner = self.subst(inner, stack);
                    let outer = self.subst(outer, stack);
                    entries.push(format!("comp({inner}; {outer})"));
                    break;
                }
                SubstKind::MetaClo(inner, theta) => {
                    let inner = self.subst(inner, stack);
                    let theta = self.msubst(theta, stack);
                    entries.push(format!("mclo({inner}; {theta})"));
                    break;
                }
            }
        }
        entries.reverse();
        entries.join(", ")
    }

    fn msubst(&self, t: &MetaSubst, stack: &mut Vec<String>) -> String {
        let mut entries = Vec::new();
        let mut cur = t.clone();
        loop {
            match cur.kind() {
                MetaSubstKind::Shift(n) => {
                    entries.push(format!("^{n}"));
                    break;
                }
                MetaSubstKind::Cons(tail, head) => {
                    entries.push(self.expr(head, 0, stack));
                    cur = tail.clone();
                }
                MetaSubstKind::Comp(inner, outer) => {
                    let inner = self.msubst(inner, stack);
                    let outer = self.msubst(outer, stack);
                    entries.push(format!("comp({inner}; {outer})"));
                    break;
                }
            }
        }
        entries.reverse();
        entries.join(", ")
    }
}

fn parens_if(cond: bool, s: String) -> String {
    if cond {
        format!("({s})")
    } else {
        s
    }
}

/// Does `x_target` occur free in `e`? Conservative over suspended
/// substitutions whose domain arity is unknown.
pub fn occurs_var(e: &Expr, target: usize) -> bool {
    match e.kind() {
        ExprKind::Var(n) => *n == target,
        ExprKind::Sort(_) | ExprKind::Const(_) | ExprKind::MetaVar(_) => false,
        ExprKind::Pi(a, b) => occurs_var(a, target) || occurs_var(b, target + 1),
        ExprKind::Lam(m) => occurs_var(m, target + 1),
        ExprKind::App(f, a) => occurs_var(f, target) || occurs_var(a, target),
        ExprKind::Clo(_, s) => occurs_var_subst(s, target),
        ExprKind::MetaClo(m, t) => occurs_var(m, target) || occurs_var_msubst(t, target),
    }
}

fn occurs_var_subst(s: &Subst, target: usize) -> bool {
    match s.kind() {
        // A base shift ↑ⁿ can reach any variable above n.
        SubstKind::Shift(n) => target > *n,
        SubstKind::Cons(tail, head) => {
            occurs_var_subst(tail, target) || occurs_var(head, target)
        }
        SubstKind::Comp(..) | SubstKind::MetaClo(..) => true,
    }
}

fn occurs_var_msubst(t: &MetaSubst, target: usize) -> bool {
    match t.kind() {
        MetaSubstKind::Shift(_) => false,
        MetaSubstKind::Cons(tail, head) => {
            occurs_var_msubst(tail, target) || occurs_var(head, target)
        }
        MetaSubstKind::Comp(..) => true,
    }
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&Printer::new().print(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intern::Name;

    fn c(s: &str) -> Expr {
        Expr::constant(Name::intern(s))
    }

    #[test]
    fn print_examples() {
        let p = Printer::new();
        assert_eq!(p.print(&Expr::lam(Expr::var(1))), "[x1] x1");
        assert_eq!(p.print(&Expr::pi(c("nat"), c("nat"))), "nat -> nat");
        let dependent = Expr::pi(c("nat"), Expr::app(c("vec"), Expr::var(1)));
        assert_eq!(p.print(&dependent), "{x1 : nat} vec x1");
        assert_eq!(p.print(&Expr::var(2)), "#2");
    }

    #[test]
    fn print_application_parens() {
        let p = Printer::new();
        let e = Expr::app(c("s"), Expr::app(c("s"), c("z")));
        assert_eq!(p.print(&e), "s (s z)");
        let e = Expr::app(Expr::app(c("f"), c("a")), c("b"));
        assert_eq!(p.print(&e), "f a b");
    }

    #[test]
    fn print_meta_substitution() {
        let p = Printer::with_meta_names(vec!["F".into()], Default::default());
        let e = Expr::clo(
            Expr::meta_var(1),
            Subst::cons(Subst::shift(0), c("z")),
        );
        assert_eq!(p.print(&e), "F[^0, z]");
    }
}
