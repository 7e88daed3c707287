use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use super::lexer::{lex, Lexed, Pos, Token};

/// Parse failure at a position; displays as `line:col: message` so a
/// driver can prefix the file name.
#[derive(Debug, Error)]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

impl ParseError {
    pub fn new(pos: Pos, message: String) -> ParseError {
        ParseError { pos, message }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

#[derive(Clone, Debug)]
pub enum SurfaceExpr {
    Ident(String, Pos),
    SortType(Pos),
    /// `{x : A} B`
    Pi(String, Box<SurfaceExpr>, Box<SurfaceExpr>, Pos),
    /// `A -> B`
    Arrow(Box<SurfaceExpr>, Box<SurfaceExpr>, Pos),
    /// `[x] M`
    Lam(String, Box<SurfaceExpr>, Pos),
    App(Box<SurfaceExpr>, Box<SurfaceExpr>, Pos),
    /// `X[^n, t1, ..., tk]`; without `^n` the base shift defaults to the
    /// binder depth at the occurrence.
    MetaApp {
        name: String,
        shift: Option<usize>,
        entries: Vec<SurfaceExpr>,
        pos: Pos,
    },
}

impl SurfaceExpr {
    pub fn pos(&self) -> Pos {
        match self {
            SurfaceExpr::Ident(_, p)
            | SurfaceExpr::SortType(p)
            | SurfaceExpr::Pi(_, _, _, p)
            | SurfaceExpr::Arrow(_, _, p)
            | SurfaceExpr::Lam(_, _, p)
            | SurfaceExpr::App(_, _, p)
            | SurfaceExpr::MetaApp { pos: p, .. } => *p,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DirectiveKind {
    /// `#eq M N.`
    CheckEq,
    /// `#nf M.`
    Normalize,
}

#[derive(Clone, Debug)]
pub enum SurfaceDecl {
    Const {
        name: String,
        classifier: SurfaceExpr,
        pos: Pos,
    },
    /// `mvar X : (x1 : A1, ..., xk : Ak |- A).`
    Meta {
        name: String,
        context: Vec<(String, SurfaceExpr)>,
        ty: SurfaceExpr,
        pos: Pos,
    },
    Directive {
        kind: DirectiveKind,
        args: Vec<SurfaceExpr>,
        pos: Pos,
    },
}

struct Parser {
    toks: Vec<Lexed>,
    at: usize,
    /// Meta-variable names declared so far; `X[...]` attaches the bracket
    /// only for known meta names, other `ident [...]` sequences are left
    /// for the expression that follows.
    metas: HashSet<String>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.at].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].pos
    }

    fn next(&mut self) -> Lexed {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: &Token) -> Result<Pos, ParseError> {
        if self.peek() == want {
            Ok(self.next().pos)
        } else {
            Err(ParseError::new(
                self.pos(),
                format!("expected {}, found {}", want, self.peek()),
            ))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), ParseError> {
        match self.peek().clone() {
            Token::Ident(s) => {
                let pos = self.next().pos;
                Ok((s, pos))
            }
            other => Err(ParseError::new(
                self.pos(),
                format!("expected identifier, found {other}"),
            )),
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Token::Ident(_) | Token::KwType | Token::LParen
        )
    }

    fn expr(&mut self) -> Result<SurfaceExpr, ParseError> {
        match self.peek() {
            Token::LBrace => {
                let pos = self.next().pos;
                let (name, _) = self.ident()?;
                self.expect(&Token::Colon)?;
                let dom = self.expr()?;
                self.expect(&Token::RBrace)?;
                let cod = self.expr()?;
                Ok(SurfaceExpr::Pi(name, Box::new(dom), Box::new(cod), pos))
            }
            Token::LBracket => {
                let pos = self.next().pos;
                let (name, _) = self.ident()?;
                self.expect(&Token::RBracket)?;
                let body = self.expr()?;
                Ok(SurfaceExpr::Lam(name, Box::new(body), pos))
            }
            _ => {
                let lhs = self.app_expr()?;
                if self.peek() == &Token::Arrow {
                    let pos = self.next().pos;
                    let rhs = self.expr()?;
                    Ok(SurfaceExpr::Arrow(Box::new(lhs), Box::new(rhs), pos))
                } else {
                    Ok(lhs)
                }
            }
        }
    }

    fn app_expr(&mut self) -> Result<SurfaceExpr, ParseError> {
        let mut e = self.atom()?;
        while self.starts_atom() {
            let pos = self.pos();
            let arg = self.atom()?;
            e = SurfaceExpr::App(Box::new(e), Box::new(arg), pos);
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<SurfaceExpr, ParseError> {
        match self.peek().clone() {
            Token::KwType => {
                let pos = self.next().pos;
                Ok(SurfaceExpr::SortType(pos))
            }
            Token::Ident(name) => {
                let pos = self.next().pos;
                if self.metas.contains(&name) && self.peek() == &Token::LBracket {
                    self.next();
                    let (shift, entries) = self.subst_body()?;
                    self.expect(&Token::RBracket)?;
                    Ok(SurfaceExpr::MetaApp {
                        name,
                        shift,
                        entries,
                        pos,
                    })
                } else {
                    Ok(SurfaceExpr::Ident(name, pos))
                }
            }
            Token::LParen => {
                self.next();
                let e = self.expr()?;
                self.expect(&Token::RParen)?;
                Ok(e)
            }
            other => Err(ParseError::new(
                self.pos(),
                format!("expected expression, found {other}"),
            )),
        }
    }

    fn subst_body(&mut self) -> Result<(Option<usize>, Vec<SurfaceExpr>), ParseError> {
        let mut entries = Vec::new();
        if self.peek() == &Token::RBracket {
            return Ok((None, entries));
        }
        let shift = if self.peek() == &Token::Caret {
            self.next();
            match self.peek().clone() {
                Token::Nat(n) => {
                    self.next();
                    Some(n)
                }
                other => {
                    return Err(ParseError::new(
                        self.pos(),
                        format!("expected shift amount after `^`, found {other}"),
                    ));
                }
            }
        } else {
            entries.push(self.expr()?);
            None
        };
        while self.peek() == &Token::Comma {
            self.next();
            entries.push(self.expr()?);
        }
        Ok((shift, entries))
    }

    fn decl(&mut self) -> Result<SurfaceDecl, ParseError> {
        match self.peek().clone() {
            Token::Hash(name) => {
                let pos = self.next().pos;
                let (kind, arity) = match name.as_str() {
                    "eq" => (DirectiveKind::CheckEq, 2),
                    "nf" => (DirectiveKind::Normalize, 1),
                    other => {
                        return Err(ParseError::new(
                            pos,
                            format!("unknown directive `#{other}`"),
                        ));
                    }
                };
                let mut args = Vec::new();
                if kind == DirectiveKind::Normalize {
                    args.push(self.expr()?);
                } else {
                    // Two terms: each a single atom, parenthesize anything
                    // bigger.
                    for _ in 0..arity {
                        args.push(self.atom()?);
                    }
                }
                self.expect(&Token::Dot)?;
                Ok(SurfaceDecl::Directive { kind, args, pos })
            }
            Token::KwMvar => {
                let pos = self.next().pos;
                let (name, _) = self.ident()?;
                self.expect(&Token::Colon)?;
                self.expect(&Token::LParen)?;
                let mut context = Vec::new();
                if self.peek() != &Token::Turnstile {
                    loop {
                        let (x, _) = self.ident()?;
                        self.expect(&Token::Colon)?;
                        let a = self.expr()?;
                        context.push((x, a));
                        if self.peek() == &Token::Comma {
                            self.next();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(&Token::Turnstile)?;
                let ty = self.expr()?;
                self.expect(&Token::RParen)?;
                self.expect(&Token::Dot)?;
                self.metas.insert(name.clone());
                Ok(SurfaceDecl::Meta {
                    name,
                    context,
                    ty,
                    pos,
                })
            }
            Token::Ident(_) => {
                let (name, pos) = self.ident()?;
                self.expect(&Token::Colon)?;
                let classifier = self.expr()?;
                self.expect(&Token::Dot)?;
                Ok(SurfaceDecl::Const {
                    name,
                    classifier,
                    pos,
                })
            }
            other => Err(ParseError::new(
                self.pos(),
                format!("expected a declaration or directive, found {other}"),
            )),
        }
    }
}

/// Parse a whole signature file into declarations in file order.
pub fn parse_signature(text: &str) -> Result<Vec<SurfaceDecl>, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        metas: HashSet::new(),
    };
    let mut decls = Vec::new();
    while p.peek() != &Token::Eof {
        decls.push(p.decl()?);
    }
    Ok(decls)
}

/// Parse a standalone term, given the meta-variable names in scope.
pub fn parse_term(text: &str, metas: &HashSet<String>) -> Result<SurfaceExpr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        metas: metas.clone(),
    };
    let e = p.expr()?;
    if p.peek() != &Token::Eof {
        return Err(ParseError::new(
            p.pos(),
            format!("expected end of term, found {}", p.peek()),
        ));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_constants() {
        let decls = parse_signature("nat : type. z : nat.").unwrap();
        assert_eq!(decls.len(), 2);
        match &decls[0] {
            SurfaceDecl::Const { name, classifier, .. } => {
                assert_eq!(name, "nat");
                assert!(matches!(classifier, SurfaceExpr::SortType(_)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parses_pi_and_arrow() {
        let decls = parse_signature("id : {A : type} A -> A.").unwrap();
        match &decls[0] {
            SurfaceDecl::Const { classifier, .. } => match classifier {
                SurfaceExpr::Pi(x, dom, cod, _) => {
                    assert_eq!(x, "A");
                    assert!(matches!(**dom, SurfaceExpr::SortType(_)));
                    assert!(matches!(**cod, SurfaceExpr::Arrow(..)));
                }
                other => panic!("unexpected {other:?}"),
            },
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reports_position_of_error() {
        let err = parse_signature("x : .").unwrap_err();
        assert_eq!(err.pos, Pos { line: 1, col: 5 });
    }

    #[test]
    fn meta_brackets_require_known_meta() {
        // `c [x] x` applies c to a lambda only with parens; brackets after
        // a non-meta identifier are not substitution syntax.
        let decls = parse_signature("mvar F : (x : nat |- nat). d : c (F[z]).").unwrap();
        assert_eq!(decls.len(), 2);
        match &decls[1] {
            SurfaceDecl::Const { classifier, .. } => match classifier {
                SurfaceExpr::App(_, arg, _) => {
                    assert!(matches!(**arg, SurfaceExpr::MetaApp { .. }));
                }
                other => panic!("unexpected {other:?}"),
            },
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parses_directives() {
        let decls =
            parse_signature("#nf ([x] x) z. #eq ([x] s x) s.").unwrap();
        assert_eq!(decls.len(), 2);
        match &decls[0] {
            SurfaceDecl::Directive { kind, args, .. } => {
                assert_eq!(*kind, DirectiveKind::Normalize);
                assert_eq!(args.len(), 1);
                assert!(matches!(args[0], SurfaceExpr::App(..)));
            }
            other => panic!("unexpected {other:?}"),
        }
        match &decls[1] {
            SurfaceDecl::Directive { kind, args, .. } => {
                assert_eq!(*kind, DirectiveKind::CheckEq);
                assert_eq!(args.len(), 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parses_meta_substitution_with_shift() {
        let metas: HashSet<String> = ["F".to_owned()].into_iter().collect();
        let e = parse_term("F[^2, s z]", &metas).unwrap();
        match e {
            SurfaceExpr::MetaApp { shift, entries, .. } => {
                assert_eq!(shift, Some(2));
                assert_eq!(entries.len(), 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
