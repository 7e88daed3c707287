//! Bidirectional type checking of normal forms against type closures.
//!
//! Neutral forms infer (`U ⇒ L`), normal forms check (`V ⇐ L`), types
//! and kinds check against sorts, and normal substitutions check against
//! a context, producing the environment form used to close later entry
//! types. Expected types are always closures; the evaluator does all the
//! work of pushing substitutions lazily while checking.

use thiserror::Error;

use crate::equality::eq_whnf;
use crate::eval::{whnf, shift_closure, Closure, Env, EvalError, Fuel, MetaEnv, Whnf};
use crate::intern::Name;
use crate::print::Printer;
use crate::syntax::{
    is_neutral, is_normal, Context, Expr, ExprKind, MetaEntry, Signature, Sort, Subst, SubstKind,
};

/// The checking context Γ: a list of type closures, innermost last.
/// An entry's closure is relative to the context below it; lookup
/// transports it with a shift.
#[derive(Clone, Default, Debug)]
pub struct CheckContext {
    entries: Vec<Closure>,
}

impl CheckContext {
    pub fn new() -> CheckContext {
        CheckContext::default()
    }

    pub fn from_closures(entries: Vec<Closure>) -> CheckContext {
        CheckContext { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, l: Closure) {
        self.entries.push(l);
    }

    pub fn pop(&mut self) {
        self.entries.pop();
    }

    /// The entry bound by `x_n`, if in range.
    fn get(&self, n: usize) -> Option<&Closure> {
        if n >= 1 && n <= self.entries.len() {
            Some(&self.entries[self.entries.len() - n])
        } else {
            None
        }
    }
}

/// A meta-context whose entries have been checked for well-formedness.
#[derive(Clone, Default, Debug)]
pub struct CheckedMetaContext {
    entries: Vec<MetaEntry>,
}

impl CheckedMetaContext {
    pub fn new() -> CheckedMetaContext {
        CheckedMetaContext::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The entry of `X_m`, if in range.
    pub fn get(&self, m: usize) -> Option<&MetaEntry> {
        if m >= 1 && m <= self.entries.len() {
            Some(&self.entries[self.entries.len() - m])
        } else {
            None
        }
    }

    pub fn entries(&self) -> &[MetaEntry] {
        &self.entries
    }

    pub fn meta_names(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.name.as_str().to_owned()).collect()
    }
}

#[derive(Debug, Error)]
pub enum CheckErrorKind {
    #[error("unbound constant {0}")]
    UnboundConstant(Name),
    #[error("duplicate declaration of {0}")]
    DuplicateName(Name),
    #[error("variable x_{index} out of range in context of length {depth}")]
    VarOutOfRange { index: usize, depth: usize },
    #[error("meta-variable index {index} out of range in meta-context of length {depth}")]
    MetaVarOutOfRange { index: usize, depth: usize },
    #[error("head has non-function type {found}")]
    NotAFunction { found: String },
    #[error("lambda checked against non-function type {found}")]
    ExpectedFunctionType { found: String },
    #[error("type mismatch: expected {expected}, found {found}")]
    TypeMismatch { expected: String, found: String },
    #[error("sort mismatch: expected {expected}, found {found}")]
    SortMismatch { expected: Sort, found: String },
    #[error("not a type: classifier is {found}")]
    NotAType { found: String },
    #[error("expression is not in normal form")]
    NotNormal,
    #[error("expression is not neutral")]
    NotNeutral,
    #[error("shift ^{shift} does not match context length {context_len}")]
    ShiftLengthMismatch { shift: usize, context_len: usize },
    #[error("substitution ends in a shift but the domain context is not empty")]
    DomainTooLong,
    #[error("substitution has more entries than the domain context")]
    DomainTooShort,
    #[error("declaration classifier is neither a type nor a kind")]
    InvalidClassifier,
    #[error("term expected, found a type or sort")]
    TermExpected,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl CheckErrorKind {
    /// Stable machine-readable class name.
    pub fn code(&self) -> &'static str {
        match self {
            CheckErrorKind::UnboundConstant(_) => "unbound-constant",
            CheckErrorKind::DuplicateName(_) => "duplicate-name",
            CheckErrorKind::VarOutOfRange { .. } => "var-out-of-range",
            CheckErrorKind::MetaVarOutOfRange { .. } => "meta-var-out-of-range",
            CheckErrorKind::NotAFunction { .. } => "not-a-function",
            CheckErrorKind::ExpectedFunctionType { .. } => "expected-function-type",
            CheckErrorKind::TypeMismatch { .. } => "type-mismatch",
            CheckErrorKind::SortMismatch { .. } => "sort-mismatch",
            CheckErrorKind::NotAType { .. } => "not-a-type",
            CheckErrorKind::NotNormal => "not-normal",
            CheckErrorKind::NotNeutral => "not-neutral",
            CheckErrorKind::ShiftLengthMismatch { .. } => "shift-length-mismatch",
            CheckErrorKind::DomainTooLong => "domain-too-long",
            CheckErrorKind::DomainTooShort => "domain-too-short",
            CheckErrorKind::InvalidClassifier => "invalid-classifier",
            CheckErrorKind::TermExpected => "term-expected",
            CheckErrorKind::Eval(EvalError::FuelExhausted { .. }) => "fuel-exhausted",
            CheckErrorKind::Eval(EvalError::ApplyNonFunction) => "apply-non-function",
        }
    }
}

/// A check failure with the judgment trace that led to it, innermost
/// judgment first.
#[derive(Debug, Error)]
#[error("{kind}")]
pub struct CheckError {
    pub kind: CheckErrorKind,
    pub trace: Vec<String>,
}

impl CheckError {
    pub fn new(kind: CheckErrorKind) -> CheckError {
        CheckError {
            kind,
            trace: Vec::new(),
        }
    }

    fn frame(mut self, f: impl FnOnce() -> String) -> CheckError {
        self.trace.push(f());
        self
    }
}

impl From<EvalError> for CheckError {
    fn from(e: EvalError) -> CheckError {
        CheckError::new(CheckErrorKind::Eval(e))
    }
}

impl From<CheckErrorKind> for CheckError {
    fn from(kind: CheckErrorKind) -> CheckError {
        CheckError::new(kind)
    }
}

/// A resolved top-level declaration.
#[derive(Clone, Debug)]
pub enum Declaration {
    Const { name: Name, classifier: Expr },
    Meta { name: Name, context: Context, ty: Expr },
}

/// Checking failed at a specific declaration.
#[derive(Debug, Error)]
#[error("in declaration {name}: {error}")]
pub struct SignatureError {
    pub name: Name,
    pub error: CheckError,
}

pub struct Checker<'a> {
    pub sig: &'a Signature,
    pub delta: &'a CheckedMetaContext,
    printer: Printer,
}

impl<'a> Checker<'a> {
    pub fn new(sig: &'a Signature, delta: &'a CheckedMetaContext) -> Checker<'a> {
        let avoid = sig
            .iter()
            .map(|(n, _)| n.as_str().to_owned())
            .chain(delta.entries().iter().map(|e| e.name.as_str().to_owned()))
            .collect();
        Checker {
            sig,
            delta,
            printer: Printer::with_meta_names(delta.meta_names(), avoid),
        }
    }

    fn show(&self, w: &Whnf) -> String {
        self.printer.print_whnf(w)
    }

    fn show_expr(&self, e: &Expr) -> String {
        self.printer.print(e)
    }

    /// `Δ; Γ ⊢ U ⇒ L`: infer the type of a neutral normal form.
    pub fn infer_neutral(
        &self,
        gamma: &mut CheckContext,
        u: &Expr,
        fuel: &mut Fuel,
    ) -> Result<Closure, CheckError> {
        match u.kind() {
            ExprKind::Const(a) => match self.sig.lookup(*a) {
                Some(classifier) => Ok(Closure::under_id(classifier.clone())),
                None => Err(CheckErrorKind::UnboundConstant(*a).into()),
            },
            ExprKind::Var(n) => match gamma.get(*n) {
                Some(entry) => Ok(shift_closure(*n, entry)),
                None => Err(CheckErrorKind::VarOutOfRange {
                    index: *n,
                    depth: gamma.len(),
                }
                .into()),
            },
            ExprKind::Clo(body, nu) => {
                let m = match body.kind() {
                    ExprKind::MetaVar(m) => *m,
                    _ => return Err(CheckErrorKind::NotNeutral.into()),
                };
                let entry = self.delta.get(m).ok_or(CheckErrorKind::MetaVarOutOfRange {
                    index: m,
                    depth: self.delta.len(),
                })?;
                // [ν]X_m ⇒ [ν]⟦⇑ᵐ⟧A, with ν checked against Ψ under ⇑ᵐ.
                let eta = MetaEnv::shift(m);
                let rho = self
                    .check_subst(gamma, nu, &entry.context, &eta, fuel)
                    .map_err(|e| {
                        e.frame(|| format!("checking substitution of {}", self.show_expr(u)))
                    })?;
                Ok(Closure::Clo(entry.ty.clone(), rho, eta))
            }
            ExprKind::App(f, v) => {
                let head_ty = self.infer_neutral(gamma, f, fuel)?;
                let w = whnf(&head_ty, fuel)?;
                match w {
                    Whnf::Pi(a, b, rho, eta) => {
                        self.check_normal(
                            gamma,
                            v,
                            &Closure::Clo(a, rho.clone(), eta.clone()),
                            fuel,
                        )
                        .map_err(|e| {
                            e.frame(|| format!("checking argument {}", self.show_expr(v)))
                        })?;
                        let arg = Closure::under_id(v.clone());
                        Ok(Closure::Clo(b, Env::cons(rho, arg), eta))
                    }
                    other => Err(CheckError::new(CheckErrorKind::NotAFunction {
                        found: self.show(&other),
                    })
                    .frame(|| format!("inferring {}", self.show_expr(u)))),
                }
            }
            _ => Err(CheckErrorKind::NotNeutral.into()),
        }
    }

    /// `Δ; Γ ⊢ V ⇐ L`: check a normal form against a type closure.
    pub fn check_normal(
        &self,
        gamma: &mut CheckContext,
        v: &Expr,
        expected: &Closure,
        fuel: &mut Fuel,
    ) -> Result<(), CheckError> {
        match v.kind() {
            ExprKind::Lam(m) => {
                let w = whnf(expected, fuel)?;
                match w {
                    Whnf::Pi(a, b, rho, eta) => {
                        gamma.push(Closure::Clo(a, rho.clone(), eta.clone()));
                        // Body checks against [([↑¹]ρ, x₁)]⟦η⟧B.
                        let body_ty = Closure::Clo(b, rho.lift(), eta);
                        let out = self
                            .check_normal(gamma, m, &body_ty, fuel)
                            .map_err(|e| e.frame(|| format!("checking {}", self.show_expr(v))));
                        gamma.pop();
                        out
                    }
                    other => Err(CheckError::new(CheckErrorKind::ExpectedFunctionType {
                        found: self.show(&other),
                    })
                    .frame(|| format!("checking {}", self.show_expr(v)))),
                }
            }
            ExprKind::Sort(_) | ExprKind::Pi(..) => Err(CheckErrorKind::TermExpected.into()),
            _ => {
                let inferred = self.infer_neutral(gamma, v, fuel)?;
                let wi = whnf(&inferred, fuel)?;
                let we = whnf(expected, fuel)?;
                if eq_whnf(&wi, &we, fuel)? {
                    Ok(())
                } else {
                    Err(CheckError::new(CheckErrorKind::TypeMismatch {
                        expected: self.show(&we),
                        found: self.show(&wi),
                    })
                    .frame(|| format!("checking {}", self.show_expr(v))))
                }
            }
        }
    }

    /// `Δ; Γ ⊢ V ⇐ s`: check well-formedness of a type or kind.
    pub fn check_sort(
        &self,
        gamma: &mut CheckContext,
        v: &Expr,
        s: Sort,
        fuel: &mut Fuel,
    ) -> Result<(), CheckError> {
        match v.kind() {
            ExprKind::Sort(Sort::Type) if s == Sort::Kind => Ok(()),
            ExprKind::Sort(found) => Err(CheckErrorKind::SortMismatch {
                expected: s,
                found: found.to_string(),
            }
            .into()),
            ExprKind::Pi(a, b) => {
                self.check_sort(gamma, a, Sort::Type, fuel)
                    .map_err(|e| e.frame(|| format!("checking domain {}", self.show_expr(a))))?;
                gamma.push(Closure::under_id(a.clone()));
                let out = self
                    .check_sort(gamma, b, s, fuel)
                    .map_err(|e| e.frame(|| format!("checking codomain of {}", self.show_expr(v))));
                gamma.pop();
                out
            }
            ExprKind::Lam(_) => Err(CheckErrorKind::NotAType {
                found: self.show_expr(v),
            }
            .into()),
            _ => {
                if s == Sort::Kind {
                    return Err(CheckError::new(CheckErrorKind::SortMismatch {
                        expected: Sort::Kind,
                        found: self.show_expr(v),
                    }));
                }
                let inferred = self.infer_neutral(gamma, v, fuel)?;
                match whnf(&inferred, fuel)? {
                    Whnf::Sort(Sort::Type) => Ok(()),
                    other => Err(CheckError::new(CheckErrorKind::NotAType {
                        found: self.show(&other),
                    })
                    .frame(|| format!("checking {} <= type", self.show_expr(v)))),
                }
            }
        }
    }

    /// `Δ; Γ ⊢ ν ⇐ Ψ`: check a normal substitution against a context,
    /// returning its environment form.
    ///
    /// Each entry type of Ψ is closed with the environment form of the
    /// already-checked prefix of ν together with the given `η`.
    pub fn check_subst(
        &self,
        gamma: &mut CheckContext,
        nu: &Subst,
        psi: &[Expr],
        eta: &MetaEnv,
        fuel: &mut Fuel,
    ) -> Result<Env, CheckError> {
        match nu.kind() {
            SubstKind::Shift(n) => {
                if !psi.is_empty() {
                    // ↑ⁿ only checks against the empty domain; use the
                    // eta-expanded form for a nonempty one.
                    return Err(CheckErrorKind::DomainTooLong.into());
                }
                if gamma.len() != *n {
                    return Err(CheckErrorKind::ShiftLengthMismatch {
                        shift: *n,
                        context_len: gamma.len(),
                    }
                    .into());
                }
                Ok(Env::shift(*n))
            }
            SubstKind::Cons(tail, head) => {
                let (a, prefix) = match psi.split_last() {
                    Some(x) => x,
                    None => return Err(CheckErrorKind::DomainTooShort.into()),
                };
                let rho_prefix = self.check_subst(gamma, tail, prefix, eta, fuel)?;
                self.check_normal(
                    gamma,
                    head,
                    &Closure::Clo(a.clone(), rho_prefix.clone(), eta.clone()),
                    fuel,
                )
                .map_err(|e| {
                    e.frame(|| format!("checking substitution entry {}", self.show_expr(head)))
                })?;
                Ok(Env::cons(rho_prefix, Closure::under_id(head.clone())))
            }
            _ => Err(CheckErrorKind::NotNormal.into()),
        }
    }
}

/// The sort a constant declaration's classifier must check against:
/// kinds are Pi-telescopes ending in `type`, types end in a neutral.
pub fn classifier_sort(e: &Expr) -> Result<Sort, CheckError> {
    match e.kind() {
        ExprKind::Sort(Sort::Type) => Ok(Sort::Kind),
        ExprKind::Pi(_, b) => classifier_sort(b),
        _ if is_neutral(e) => Ok(Sort::Type),
        _ => Err(CheckErrorKind::InvalidClassifier.into()),
    }
}

/// Check one constant declaration against the signature so far.
/// Constants are classified under empty contexts.
pub fn check_const_decl(
    sig: &Signature,
    name: Name,
    classifier: &Expr,
    fuel: &mut Fuel,
) -> Result<(), CheckError> {
    if sig.contains(name) {
        return Err(CheckErrorKind::DuplicateName(name).into());
    }
    if !is_normal(classifier) {
        return Err(CheckErrorKind::NotNormal.into());
    }
    let s = classifier_sort(classifier)?;
    let empty = CheckedMetaContext::new();
    let checker = Checker::new(sig, &empty);
    checker
        .check_sort(&mut CheckContext::new(), classifier, s, fuel)
        .map_err(|e| e.frame(|| format!("declaring {name}")))
}

/// Check one meta-variable declaration `(Ψ ⊢ A)` against the signature
/// and meta-context so far.
pub fn check_meta_decl(
    sig: &Signature,
    delta: &CheckedMetaContext,
    context: &[Expr],
    ty: &Expr,
    fuel: &mut Fuel,
) -> Result<(), CheckError> {
    let checker = Checker::new(sig, delta);
    let mut gamma = CheckContext::new();
    for a in context {
        if !is_normal(a) {
            return Err(CheckErrorKind::NotNormal.into());
        }
        checker.check_sort(&mut gamma, a, Sort::Type, fuel)?;
        gamma.push(Closure::under_id(a.clone()));
    }
    if !is_normal(ty) {
        return Err(CheckErrorKind::NotNormal.into());
    }
    checker.check_sort(&mut gamma, ty, Sort::Type, fuel)
}

/// Check a whole list of resolved declarations in order; later
/// declarations see earlier ones.
pub fn check_signature(
    decls: &[Declaration],
    fuel_budget: u64,
) -> Result<(Signature, CheckedMetaContext), SignatureError> {
    let mut sig = Signature::new();
    let mut delta = CheckedMetaContext::new();
    for decl in decls {
        let mut fuel = Fuel::new(fuel_budget);
        match decl {
            Declaration::Const { name, classifier } => {
                check_const_decl(&sig, *name, classifier, &mut fuel).map_err(|error| {
                    SignatureError {
                        name: *name,
                        error,
                    }
                })?;
                sig.insert(*name, classifier.clone()).expect("checked for duplicates");
            }
            Declaration::Meta { name, context, ty } => {
                if delta.entries.iter().any(|e| e.name == *name) {
                    return Err(SignatureError {
                        name: *name,
                        error: CheckErrorKind::DuplicateName(*name).into(),
                    });
                }
                check_meta_decl(&sig, &delta, context, ty, &mut fuel).map_err(|error| {
                    SignatureError {
                        name: *name,
                        error,
                    }
                })?;
                delta.entries.push(MetaEntry {
                    name: *name,
                    context: context.to_vec(),
                    ty: ty.clone(),
                });
            }
        }
    }
    Ok((sig, delta))
}

/// Push an already-checked meta entry; used when driving declarations
/// one at a time.
pub fn push_meta_entry(delta: &mut CheckedMetaContext, entry: MetaEntry) {
    delta.entries.push(entry);
}
