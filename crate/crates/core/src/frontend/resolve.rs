use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use super::lexer::Pos;
use super::parser::{DirectiveKind, SurfaceDecl, SurfaceExpr};
use crate::check::Declaration;
use crate::intern::Name;
use crate::syntax::{Expr, Subst};

/// Resolution failure; displays as `line:col: message`.
#[derive(Debug, Error)]
pub struct ResolveError {
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for ResolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

/// Scoped names: ordinary binders (innermost last) and the meta-variables
/// declared so far (oldest first, with their context arity). The two
/// namespaces never produce the same index class.
#[derive(Clone, Default, Debug)]
pub struct NameEnv {
    binders: Vec<String>,
    metas: Vec<(String, usize)>,
}

impl NameEnv {
    pub fn new() -> NameEnv {
        NameEnv::default()
    }

    pub fn push_meta(&mut self, name: String, arity: usize) {
        self.metas.push((name, arity));
    }

    pub fn meta_names(&self) -> Vec<String> {
        self.metas.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn depth(&self) -> usize {
        self.binders.len()
    }

    fn lookup_binder(&self, name: &str) -> Option<usize> {
        self.binders
            .iter()
            .rev()
            .position(|b| b == name)
            .map(|i| i + 1)
    }

    /// De Bruijn index and declared arity of a meta-variable.
    fn lookup_meta(&self, name: &str) -> Option<(usize, usize)> {
        self.metas
            .iter()
            .rev()
            .position(|(n, _)| n == name)
            .map(|i| (i + 1, self.metas[self.metas.len() - 1 - i].1))
    }
}

/// The eta-expanded identity substitution for a declared context of
/// arity `k` at binder depth `d`: `(↑ᵈ, x_d, ..., x_{d-k+1})`.
fn expanded_identity(depth: usize, arity: usize) -> Subst {
    (0..arity).fold(Subst::shift(depth), |acc, i| {
        Subst::cons(acc, Expr::var(depth - i))
    })
}

pub fn resolve_expr(e: &SurfaceExpr, env: &mut NameEnv) -> Result<Expr, ResolveError> {
    match e {
        SurfaceExpr::SortType(_) => Ok(Expr::sort(crate::syntax::Sort::Type)),
        SurfaceExpr::Ident(name, pos) => {
            if let Some(i) = env.lookup_binder(name) {
                return Ok(Expr::var(i));
            }
            if let Some((index, arity)) = env.lookup_meta(name) {
                let depth = env.depth();
                if depth < arity {
                    return Err(ResolveError {
                        pos: *pos,
                        message: format!(
                            "meta-variable {name} needs {arity} bound variables in scope, found {depth}"
                        ),
                    });
                }
                let nu = expanded_identity(depth, arity);
                return Ok(Expr::clo(Expr::meta_var(index), nu));
            }
            // Unknown names resolve as constants; the type checker reports
            // the unbound ones.
            Ok(Expr::constant(Name::intern(name)))
        }
        SurfaceExpr::Pi(x, dom, cod, _) => {
            let dom = resolve_expr(dom, env)?;
            env.binders.push(x.clone());
            let cod = resolve_expr(cod, env);
            env.binders.pop();
            Ok(Expr::pi(dom, cod?))
        }
        SurfaceExpr::Arrow(dom, cod, _) => {
            let dom = resolve_expr(dom, env)?;
            // The codomain is weakened past an anonymous binder.
            env.binders.push(String::new());
            let cod = resolve_expr(cod, env);
            env.binders.pop();
            Ok(Expr::pi(dom, cod?))
        }
        SurfaceExpr::Lam(x, body, _) => {
            env.binders.push(x.clone());
            let body = resolve_expr(body, env);
            env.binders.pop();
            Ok(Expr::lam(body?))
        }
        SurfaceExpr::App(f, a, _) => {
            let f = resolve_expr(f, env)?;
            let a = resolve_expr(a, env)?;
            Ok(Expr::app(f, a))
        }
        SurfaceExpr::MetaApp {
            name,
            shift,
            entries,
            pos,
        } => {
            if env.lookup_binder(name).is_some() {
                return Err(ResolveError {
                    pos: *pos,
                    message: format!(
                        "`{name}[...]` is meta-variable syntax but {name} is an ordinary bound variable here"
                    ),
                });
            }
            let (index, _) = env.lookup_meta(name).ok_or_else(|| ResolveError {
                pos: *pos,
                message: format!("unknown meta-variable {name}"),
            })?;
            let base = shift.unwrap_or(env.depth());
            let mut nu = Subst::shift(base);
            // Surface entries list the outermost declared variable first.
            for entry in entries {
                let t = resolve_expr(entry, env)?;
                nu = Subst::cons(nu, t);
            }
            Ok(Expr::clo(Expr::meta_var(index), nu))
        }
    }
}

/// A resolved directive, to be run by a driver.
#[derive(Clone, Debug)]
pub struct ResolvedDirective {
    pub kind: DirectiveKind,
    pub args: Vec<Expr>,
    pub pos: Pos,
}

/// A resolved top-level item in file order.
#[derive(Clone, Debug)]
pub enum Item {
    Decl(Declaration, Pos),
    Directive(ResolvedDirective),
}

/// Resolve a parsed file, threading the name environment through in file
/// order. Returns the items and the final environment.
pub fn resolve_decls(decls: &[SurfaceDecl]) -> Result<(Vec<Item>, NameEnv), ResolveError> {
    let mut env = NameEnv::new();
    let mut items = Vec::new();
    for decl in decls {
        match decl {
            SurfaceDecl::Const {
                name,
                classifier,
                pos,
            } => {
                let classifier = resolve_expr(classifier, &mut env)?;
                items.push(Item::Decl(
                    Declaration::Const {
                        name: Name::intern(name),
                        classifier,
                    },
                    *pos,
                ));
            }
            SurfaceDecl::Meta {
                name,
                context,
                ty,
                pos,
            } => {
                let mut resolved_ctx = Vec::with_capacity(context.len());
                for (x, a) in context {
                    let a = resolve_expr(a, &mut env)?;
                    resolved_ctx.push(a);
                    env.binders.push(x.clone());
                }
                let ty = resolve_expr(ty, &mut env);
                for _ in context {
                    env.binders.pop();
                }
                let ty = ty?;
                env.push_meta(name.clone(), context.len());
                items.push(Item::Decl(
                    Declaration::Meta {
                        name: Name::intern(name),
                        context: resolved_ctx,
                        ty,
                    },
                    *pos,
                ));
            }
            SurfaceDecl::Directive { kind, args, pos } => {
                let mut resolved = Vec::with_capacity(args.len());
                for a in args {
                    resolved.push(resolve_expr(a, &mut env)?);
                }
                items.push(Item::Directive(ResolvedDirective {
                    kind: *kind,
                    args: resolved,
                    pos: *pos,
                }));
            }
        }
    }
    Ok((items, env))
}

/// The meta names of an environment as a set, for `parse_term`.
pub fn meta_name_set(env: &NameEnv) -> HashSet<String> {
    env.metas.iter().map(|(n, _)| n.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parser::{parse_signature, parse_term};
    use crate::syntax::ExprKind;

    fn resolve_closed(text: &str) -> Expr {
        let e = parse_term(text, &Default::default()).unwrap();
        resolve_expr(&e, &mut NameEnv::new()).unwrap()
    }

    #[test]
    fn resolves_lambdas() {
        assert_eq!(resolve_closed("[x] x"), Expr::lam(Expr::var(1)));
        assert_eq!(
            resolve_closed("[x] [y] x"),
            Expr::lam(Expr::lam(Expr::var(2)))
        );
    }

    #[test]
    fn arrow_weakens_codomain() {
        let decls = parse_signature("id : {A : type} A -> A.").unwrap();
        let (items, _) = resolve_decls(&decls).unwrap();
        match &items[0] {
            Item::Decl(Declaration::Const { classifier, .. }, _) => {
                let expected = Expr::pi(
                    Expr::sort(crate::syntax::Sort::Type),
                    Expr::pi(Expr::var(1), Expr::var(2)),
                );
                assert_eq!(classifier, &expected);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bare_meta_expands_to_identity() {
        let decls = parse_signature(
            "nat : type. mvar X : (x : nat |- nat). #nf [y] X.",
        )
        .unwrap();
        let (items, _) = resolve_decls(&decls).unwrap();
        match &items[2] {
            Item::Directive(d) => {
                // [y] X resolves to λ. [(↑¹, x₁)]X₁
                let expected = Expr::lam(Expr::clo(
                    Expr::meta_var(1),
                    Subst::cons(Subst::shift(1), Expr::var(1)),
                ));
                assert_eq!(d.args[0], expected);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bare_meta_requires_enough_depth() {
        let decls = parse_signature(
            "nat : type. mvar X : (x : nat |- nat). #nf X.",
        )
        .unwrap();
        let err = resolve_decls(&decls).unwrap_err();
        assert!(err.message.contains("needs 1 bound variables"));
    }

    #[test]
    fn unknown_names_become_constants() {
        let e = resolve_closed("foo bar");
        match e.kind() {
            ExprKind::App(f, a) => {
                assert!(matches!(f.kind(), ExprKind::Const(_)));
                assert!(matches!(a.kind(), ExprKind::Const(_)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn meta_indices_count_from_most_recent() {
        let decls = parse_signature(
            "nat : type. mvar A : (|- nat). mvar B : (|- nat). #eq A B.",
        )
        .unwrap();
        let (items, _) = resolve_decls(&decls).unwrap();
        match &items[3] {
            Item::Directive(d) => {
                assert_eq!(
                    d.args[0],
                    Expr::clo(Expr::meta_var(2), Subst::shift(0))
                );
                assert_eq!(
                    d.args[1],
                    Expr::clo(Expr::meta_var(1), Subst::shift(0))
                );
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
