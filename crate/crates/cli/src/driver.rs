//! Pipelines behind the `check`, `nf` and `eq` commands.

use std::io::Write;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde_json::json;

use cmtt_core::check::{
    check_const_decl, check_meta_decl, push_meta_entry, CheckError, CheckErrorKind,
    CheckedMetaContext, Checker, Declaration,
};
use cmtt_core::equality::eq_closure;
use cmtt_core::eval::{readback, whnf, Closure, EvalError, Fuel};
use cmtt_core::frontend::{
    meta_name_set, parse_signature, parse_term, resolve_decls, resolve_expr, DirectiveKind, Item,
    NameEnv, Pos, ResolvedDirective,
};
use cmtt_core::oracle::{beta_normalize, equal_beta_eta};
use cmtt_core::print::Printer;
use cmtt_core::syntax::{instrument, is_normal, Expr, ExprKind, MetaEntry, MetaSubstKind, Signature, Sort, SubstKind};
use cmtt_core::CheckContext;

use crate::{EXIT_DIVERGENCE, EXIT_FUEL, EXIT_IO, EXIT_OK, EXIT_PARSE, EXIT_SEMANTIC};

pub struct CheckOpts {
    pub fuel: u64,
    pub json: bool,
    pub trace: bool,
    pub stats: bool,
    pub oracle: bool,
    pub jobs: usize,
}

pub struct NfOpts {
    pub fuel: u64,
    pub oracle: bool,
    pub diff: bool,
    pub stats: bool,
    pub json: bool,
    pub trace: bool,
}

pub struct EqOpts {
    pub fuel: u64,
    pub oracle: bool,
    pub json: bool,
    pub trace: bool,
}

/// A failure with its process exit code and optional judgment trace.
struct Failure {
    exit: i32,
    message: String,
    trace: Vec<String>,
}

impl Failure {
    fn new(exit: i32, message: String) -> Failure {
        Failure {
            exit,
            message,
            trace: Vec::new(),
        }
    }

    fn from_check_error(prefix: String, e: CheckError) -> Failure {
        let exit = match e.kind {
            CheckErrorKind::Eval(EvalError::FuelExhausted { .. }) => EXIT_FUEL,
            _ => EXIT_SEMANTIC,
        };
        Failure {
            exit,
            message: format!("{prefix}{} [{}]", e.kind, e.kind.code()),
            trace: e.trace,
        }
    }

    fn from_eval_error(prefix: String, e: EvalError) -> Failure {
        let exit = match e {
            EvalError::FuelExhausted { .. } => EXIT_FUEL,
            EvalError::ApplyNonFunction => EXIT_SEMANTIC,
        };
        Failure::new(exit, format!("{prefix}{e}"))
    }
}

fn emit_failure(
    f: &Failure,
    command: &str,
    json: bool,
    trace: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    if json {
        let obj = json!({
            "command": command,
            "status": "error",
            "exit": f.exit,
            "message": f.message,
            "trace": f.trace,
        });
        let _ = writeln!(out, "{obj}");
    } else {
        let _ = writeln!(err, "{}", f.message);
        if trace {
            for frame in &f.trace {
                let _ = writeln!(err, "  while {frame}");
            }
        }
    }
    f.exit
}

/// One resolved item together with the signature and meta-context prefix
/// it must be checked against.
struct Task {
    item: Item,
    sig: Signature,
    delta: CheckedMetaContext,
    pre_error: Option<CheckErrorKind>,
}

struct Prepared {
    tasks: Vec<Task>,
    sig: Signature,
    delta: CheckedMetaContext,
    env: NameEnv,
    decl_count: usize,
}

struct ItemReport {
    lines: Vec<String>,
    json: Vec<serde_json::Value>,
    allocs: u64,
    failure: Option<Failure>,
}

fn read_and_resolve(path: &Path) -> Result<(Vec<Item>, NameEnv), Failure> {
    let display = path.display();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_IO, format!("{display}: {e}")))?;
    let decls = parse_signature(&text)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{display}:{e}")))?;
    let (items, env) =
        resolve_decls(&decls).map_err(|e| Failure::new(EXIT_PARSE, format!("{display}:{e}")))?;
    Ok((items, env))
}

fn prepare(path: &Path) -> Result<Prepared, Failure> {
    let (items, env) = read_and_resolve(path)?;
    let mut sig = Signature::new();
    let mut delta = CheckedMetaContext::new();
    let mut tasks = Vec::with_capacity(items.len());
    let mut decl_count = 0;
    for item in items {
        let snap_sig = sig.clone();
        let snap_delta = delta.clone();
        let mut pre_error = None;
        match &item {
            Item::Decl(Declaration::Const { name, classifier }, _) => {
                decl_count += 1;
                if sig.insert(*name, classifier.clone()).is_err() {
                    pre_error = Some(CheckErrorKind::DuplicateName(*name));
                }
            }
            Item::Decl(Declaration::Meta { name, context, ty }, _) => {
                decl_count += 1;
                if delta.entries().iter().any(|e| e.name == *name) {
                    pre_error = Some(CheckErrorKind::DuplicateName(*name));
                } else {
                    push_meta_entry(
                        &mut delta,
                        MetaEntry {
                            name: *name,
                            context: context.clone(),
                            ty: ty.clone(),
                        },
                    );
                }
            }
            Item::Directive(_) => {}
        }
        tasks.push(Task {
            item,
            sig: snap_sig,
            delta: snap_delta,
            pre_error,
        });
    }
    Ok(Prepared {
        tasks,
        sig,
        delta,
        env,
        decl_count,
    })
}

/// Scan a resolved term for unknown constants or out-of-range
/// meta-variables; evaluation of directives is untyped, so this is the
/// only sanity gate they get.
fn validate_term(sig: &Signature, delta_len: usize, e: &Expr) -> Result<(), String> {
    match e.kind() {
        ExprKind::Sort(_) | ExprKind::Var(_) => Ok(()),
        ExprKind::Const(a) => {
            if sig.contains(*a) {
                Ok(())
            } else {
                Err(format!("unbound constant {a}"))
            }
        }
        ExprKind::MetaVar(m) => {
            if *m >= 1 && *m <= delta_len {
                Ok(())
            } else {
                Err(format!("meta-variable index {m} out of range"))
            }
        }
        ExprKind::Pi(a, b) | ExprKind::App(a, b) => {
            validate_term(sig, delta_len, a)?;
            validate_term(sig, delta_len, b)
        }
        ExprKind::Lam(m) => validate_term(sig, delta_len, m),
        ExprKind::Clo(body, s) => {
            validate_term(sig, delta_len, body)?;
            validate_subst(sig, delta_len, s)
        }
        ExprKind::MetaClo(body, t) => {
            validate_term(sig, delta_len, body)?;
            validate_msubst(sig, delta_len, t)
        }
    }
}

fn validate_subst(
    sig: &Signature,
    delta_len: usize,
    s: &cmtt_core::Subst,
) -> Result<(), String> {
    match s.kind() {
        SubstKind::Shift(_) => Ok(()),
        SubstKind::Cons(tail, head) => {
            validate_subst(sig, delta_len, tail)?;
            validate_term(sig, delta_len, head)
        }
        SubstKind::Comp(a, b) => {
            validate_subst(sig, delta_len, a)?;
            validate_subst(sig, delta_len, b)
        }
        SubstKind::MetaClo(a, t) => {
            validate_subst(sig, delta_len, a)?;
            validate_msubst(sig, delta_len, t)
        }
    }
}

fn validate_msubst(
    sig: &Signature,
    delta_len: usize,
    t: &cmtt_core::MetaSubst,
) -> Result<(), String> {
    match t.kind() {
        MetaSubstKind::Shift(_) => Ok(()),
        MetaSubstKind::Cons(tail, head) => {
            validate_msubst(sig, delta_len, tail)?;
            validate_term(sig, delta_len, head)
        }
        MetaSubstKind::Comp(a, b) => {
            validate_msubst(sig, delta_len, a)?;
            validate_msubst(sig, delta_len, b)
        }
    }
}

fn printer_for(sig: &Signature, delta: &CheckedMetaContext) -> Printer {
    let avoid = sig
        .iter()
        .map(|(n, _)| n.as_str().to_owned())
        .chain(delta.entries().iter().map(|e| e.name.as_str().to_owned()))
        .collect();
    Printer::with_meta_names(delta.meta_names(), avoid)
}

/// First structural difference between two normal forms, as a locus hint.
fn diff_locus(a: &Expr, b: &Expr, printer: &Printer) -> String {
    fn go(a: &Expr, b: &Expr, path: &mut Vec<&'static str>) -> Option<(Expr, Expr)> {
        if a == b {
            return None;
        }
        match (a.kind(), b.kind()) {
            (ExprKind::Pi(a1, b1), ExprKind::Pi(a2, b2)) => {
                if a1 != a2 {
                    path.push("Pi domain");
                    go(a1, a2, path)
                } else {
                    path.push("Pi codomain");
                    go(b1, b2, path)
                }
            }
            (ExprKind::Lam(m1), ExprKind::Lam(m2)) => {
                path.push("lambda body");
                go(m1, m2, path)
            }
            (ExprKind::App(f1, n1), ExprKind::App(f2, n2)) => {
                if f1 != f2 {
                    path.push("head");
                    go(f1, f2, path)
                } else {
                    path.push("argument");
                    go(n1, n2, path)
                }
            }
            _ => Some((a.clone(), b.clone())),
        }
    }
    let mut path = Vec::new();
    match go(a, b, &mut path) {
        Some((l, r)) => {
            let at = if path.is_empty() {
                "at top level".to_owned()
            } else {
                format!("at {}", path.join(" > "))
            };
            format!("{at}: {} vs {}", printer.print(&l), printer.print(&r))
        }
        None => "terms print identically".to_owned(),
    }
}

fn position_prefix(path: &str, pos: Pos) -> String {
    format!("{path}:{pos}: ")
}

fn run_directive(
    path: &str,
    sig: &Signature,
    delta: &CheckedMetaContext,
    d: &ResolvedDirective,
    fuel_budget: u64,
    oracle: bool,
) -> ItemReport {
    let printer = printer_for(sig, delta);
    let prefix = position_prefix(path, d.pos);
    let mut report = ItemReport {
        lines: Vec::new(),
        json: Vec::new(),
        allocs: 0,
        failure: None,
    };
    for arg in &d.args {
        if let Err(msg) = validate_term(sig, delta.len(), arg) {
            report.failure = Some(Failure::new(EXIT_SEMANTIC, format!("{prefix}{msg}")));
            return report;
        }
    }
    match d.kind {
        DirectiveKind::Normalize => {
            let mut fuel = Fuel::new(fuel_budget);
            let result = whnf(&Closure::under_id(d.args[0].clone()), &mut fuel)
                .and_then(|w| readback(&w, &mut fuel));
            match result {
                Ok(nf) => {
                    let text = printer.print(&nf);
                    report.lines.push(format!("{prefix}#nf {text}"));
                    report
                        .json
                        .push(json!({"directive": "nf", "result": text}));
                }
                Err(e) => {
                    report.failure = Some(Failure::from_eval_error(prefix, e));
                }
            }
        }
        DirectiveKind::CheckEq => {
            let mut fuel = Fuel::new(fuel_budget);
            let l1 = Closure::under_id(d.args[0].clone());
            let l2 = Closure::under_id(d.args[1].clone());
            let lazy = match eq_closure(&l1, &l2, &mut fuel) {
                Ok(v) => v,
                Err(e) => {
                    report.failure = Some(Failure::from_eval_error(prefix, e));
                    return report;
                }
            };
            if oracle {
                let mut ofuel = Fuel::new(fuel_budget);
                match equal_beta_eta(&d.args[0], &d.args[1], &mut ofuel) {
                    Ok(eager) if eager != lazy => {
                        report.failure = Some(Failure::new(
                            EXIT_DIVERGENCE,
                            format!(
                                "{prefix}engine divergence: algorithmic equality says {lazy}, oracle says {eager}"
                            ),
                        ));
                        return report;
                    }
                    Ok(_) => {}
                    Err(e) => {
                        report.failure = Some(Failure::from_eval_error(prefix, e));
                        return report;
                    }
                }
            }
            if lazy {
                report.lines.push(format!("{prefix}#eq ok"));
                report
                    .json
                    .push(json!({"directive": "eq", "result": "equal"}));
            } else {
                let locus = locus_of_pair(&d.args[0], &d.args[1], fuel_budget, &printer);
                report.failure = Some(Failure::new(
                    EXIT_SEMANTIC,
                    format!("{prefix}terms are not equal; {locus}"),
                ));
            }
        }
    }
    report
}

fn locus_of_pair(a: &Expr, b: &Expr, fuel_budget: u64, printer: &Printer) -> String {
    let mut fuel = Fuel::new(fuel_budget);
    let na = whnf(&Closure::under_id(a.clone()), &mut fuel).and_then(|w| readback(&w, &mut fuel));
    let nb = whnf(&Closure::under_id(b.clone()), &mut fuel).and_then(|w| readback(&w, &mut fuel));
    match (na, nb) {
        (Ok(na), Ok(nb)) => diff_locus(&na, &nb, printer),
        _ => "normal forms unavailable".to_owned(),
    }
}

fn run_task(path: &str, task: &Task, fuel_budget: u64, oracle: bool) -> ItemReport {
    let (mut report, allocs) = instrument::counting(|| match &task.item {
        Item::Decl(decl, pos) => {
            let prefix = position_prefix(path, *pos);
            let mut report = ItemReport {
                lines: Vec::new(),
                json: Vec::new(),
                allocs: 0,
                failure: None,
            };
            if let Some(kind) = &task.pre_error {
                report.failure = Some(Failure::new(
                    EXIT_SEMANTIC,
                    format!("{prefix}{kind} [{}]", kind.code()),
                ));
                return report;
            }
            let mut fuel = Fuel::new(fuel_budget);
            let outcome = match decl {
                Declaration::Const { name, classifier } => {
                    check_const_decl(&task.sig, *name, classifier, &mut fuel)
                        .map_err(|e| (format!("{prefix}in declaration {name}: "), e))
                }
                Declaration::Meta { name, context, ty } => {
                    check_meta_decl(&task.sig, &task.delta, context, ty, &mut fuel)
                        .map_err(|e| (format!("{prefix}in declaration {name}: "), e))
                }
            };
            if let Err((prefix, e)) = outcome {
                report.failure = Some(Failure::from_check_error(prefix, e));
            }
            report
        }
        Item::Directive(d) => run_directive(path, &task.sig, &task.delta, d, fuel_budget, oracle),
    });
    report.allocs = allocs;
    report
}

fn run_tasks(
    path: &str,
    tasks: &[Task],
    jobs: usize,
    fuel_budget: u64,
    oracle: bool,
) -> Vec<ItemReport> {
    if jobs <= 1 || tasks.len() <= 1 {
        return tasks
            .iter()
            .map(|t| run_task(path, t, fuel_budget, oracle))
            .collect();
    }
    let reports: Vec<Mutex<Option<ItemReport>>> =
        tasks.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(tasks.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= tasks.len() {
                    break;
                }
                let report = run_task(path, &tasks[i], fuel_budget, oracle);
                *reports[i].lock().unwrap() = Some(report);
            });
        }
    });
    reports
        .into_iter()
        .map(|m| m.into_inner().unwrap().expect("every task ran"))
        .collect()
}

pub fn cmd_check(
    path: &Path,
    opts: &CheckOpts,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let display = path.display().to_string();
    let prepared = match prepare(path) {
        Ok(p) => p,
        Err(f) => return emit_failure(&f, "check", opts.json, opts.trace, out, err),
    };
    let reports = run_tasks(&display, &prepared.tasks, opts.jobs, opts.fuel, opts.oracle);

    let mut directive_json = Vec::new();
    let mut lines = Vec::new();
    let mut allocs: u64 = 0;
    for report in &reports {
        allocs += report.allocs;
        if let Some(f) = &report.failure {
            for line in &lines {
                let _ = writeln!(out, "{line}");
            }
            return emit_failure(f, "check", opts.json, opts.trace, out, err);
        }
        lines.extend(report.lines.iter().cloned());
        directive_json.extend(report.json.iter().cloned());
    }

    if opts.json {
        let mut obj = json!({
            "command": "check",
            "status": "ok",
            "file": display,
            "declarations": prepared.decl_count,
            "directives": directive_json,
        });
        if opts.stats {
            obj["allocations"] = json!(allocs);
        }
        let _ = writeln!(out, "{obj}");
    } else {
        for line in &lines {
            let _ = writeln!(out, "{line}");
        }
        let _ = writeln!(out, "{} declarations OK", prepared.decl_count);
        if opts.stats {
            let _ = writeln!(out, "allocations: {allocs}");
        }
    }
    EXIT_OK
}

/// Load a file for `nf`/`eq`: everything must check, but directive output
/// is suppressed.
fn load_checked(
    path: &Path,
    fuel_budget: u64,
) -> Result<(Signature, CheckedMetaContext, NameEnv), Failure> {
    let display = path.display().to_string();
    let prepared = prepare(path)?;
    let reports = run_tasks(&display, &prepared.tasks, 1, fuel_budget, false);
    for report in reports {
        if let Some(f) = report.failure {
            return Err(f);
        }
    }
    Ok((prepared.sig, prepared.delta, prepared.env))
}

fn parse_cli_term(
    label: &str,
    text: &str,
    env: &NameEnv,
) -> Result<Expr, Failure> {
    let metas = meta_name_set(env);
    let surface = parse_term(text, &metas)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{label}: {e}")))?;
    let mut env = env.clone();
    resolve_expr(&surface, &mut env)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{label}: {e}")))
}

pub fn cmd_nf(
    path: &Path,
    term: &str,
    opts: &NfOpts,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let loaded = load_checked(path, opts.fuel);
    let (sig, delta, env) = match loaded {
        Ok(x) => x,
        Err(f) => return emit_failure(&f, "nf", opts.json, opts.trace, out, err),
    };
    let resolved = match parse_cli_term("term", term, &env) {
        Ok(e) => e,
        Err(f) => return emit_failure(&f, "nf", opts.json, opts.trace, out, err),
    };
    if let Err(msg) = validate_term(&sig, delta.len(), &resolved) {
        let f = Failure::new(EXIT_SEMANTIC, format!("term: {msg}"));
        return emit_failure(&f, "nf", opts.json, opts.trace, out, err);
    }
    let printer = printer_for(&sig, &delta);

    let lazy_nf = |fuel_budget: u64| -> (Result<Expr, EvalError>, u64) {
        let (r, allocs) = instrument::counting(|| {
            let mut fuel = Fuel::new(fuel_budget);
            whnf(&Closure::under_id(resolved.clone()), &mut fuel)
                .and_then(|w| readback(&w, &mut fuel))
        });
        (r, allocs)
    };
    let eager_nf = |fuel_budget: u64| -> (Result<Expr, EvalError>, u64) {
        let (r, allocs) = instrument::counting(|| {
            let mut fuel = Fuel::new(fuel_budget);
            beta_normalize(&resolved, &mut fuel)
        });
        (r, allocs)
    };

    if opts.diff {
        let (lazy, lazy_allocs) = lazy_nf(opts.fuel);
        let (eager, eager_allocs) = eager_nf(opts.fuel);
        let (lazy, eager) = match (lazy, eager) {
            (Ok(l), Ok(e)) => (l, e),
            (Err(e), _) | (_, Err(e)) => {
                let f = Failure::from_eval_error("".into(), e);
                return emit_failure(&f, "nf", opts.json, opts.trace, out, err);
            }
        };
        let matches = lazy == eager;
        let lazy_text = printer.print(&lazy);
        let eager_text = printer.print(&eager);
        if opts.json {
            let mut obj = json!({
                "command": "nf",
                "status": if matches { "ok" } else { "mismatch" },
                "lazy": lazy_text,
                "oracle": eager_text,
            });
            if opts.stats {
                obj["allocations"] = json!({"lazy": lazy_allocs, "oracle": eager_allocs});
            }
            let _ = writeln!(out, "{obj}");
        } else {
            let _ = writeln!(out, "lazy:   {lazy_text}");
            let _ = writeln!(out, "oracle: {eager_text}");
            if opts.stats {
                let _ = writeln!(out, "allocations: lazy {lazy_allocs}, oracle {eager_allocs}");
            }
            if !matches {
                let _ = writeln!(err, "normal forms differ; {}", diff_locus(&lazy, &eager, &printer));
            }
        }
        return if matches { EXIT_OK } else { EXIT_SEMANTIC };
    }

    let (result, allocs) = if opts.oracle {
        eager_nf(opts.fuel)
    } else {
        lazy_nf(opts.fuel)
    };
    match result {
        Ok(nf) => {
            let text = printer.print(&nf);
            if opts.json {
                let mut obj = json!({"command": "nf", "status": "ok", "result": text});
                if opts.stats {
                    obj["allocations"] = json!(allocs);
                }
                let _ = writeln!(out, "{obj}");
            } else {
                let _ = writeln!(out, "{text}");
                if opts.stats {
                    let _ = writeln!(out, "allocations: {allocs}");
                }
            }
            EXIT_OK
        }
        Err(e) => {
            let f = Failure::from_eval_error("".into(), e);
            emit_failure(&f, "nf", opts.json, opts.trace, out, err)
        }
    }
}

pub fn cmd_eq(
    path: &Path,
    term1: &str,
    term2: &str,
    at: &str,
    opts: &EqOpts,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let loaded = load_checked(path, opts.fuel);
    let (sig, delta, env) = match loaded {
        Ok(x) => x,
        Err(f) => return emit_failure(&f, "eq", opts.json, opts.trace, out, err),
    };

    let resolve_one = |label: &str, text: &str| -> Result<Expr, Failure> {
        let e = parse_cli_term(label, text, &env)?;
        validate_term(&sig, delta.len(), &e)
            .map_err(|msg| Failure::new(EXIT_SEMANTIC, format!("{label}: {msg}")))?;
        if !is_normal(&e) {
            return Err(Failure::new(
                EXIT_SEMANTIC,
                format!("{label}: not a normal form; only normal forms can be type checked"),
            ));
        }
        Ok(e)
    };

    let ty = match resolve_one("type", at) {
        Ok(e) => e,
        Err(f) => return emit_failure(&f, "eq", opts.json, opts.trace, out, err),
    };
    let lhs = match resolve_one("term 1", term1) {
        Ok(e) => e,
        Err(f) => return emit_failure(&f, "eq", opts.json, opts.trace, out, err),
    };
    let rhs = match resolve_one("term 2", term2) {
        Ok(e) => e,
        Err(f) => return emit_failure(&f, "eq", opts.json, opts.trace, out, err),
    };

    let checker = Checker::new(&sig, &delta);
    let mut fuel = Fuel::new(opts.fuel);
    if let Err(e) = checker.check_sort(&mut CheckContext::new(), &ty, Sort::Type, &mut fuel) {
        let f = Failure::from_check_error("type: ".into(), e);
        return emit_failure(&f, "eq", opts.json, opts.trace, out, err);
    }
    let expected = Closure::under_id(ty.clone());
    for (label, term) in [("term 1", &lhs), ("term 2", &rhs)] {
        let mut fuel = Fuel::new(opts.fuel);
        if let Err(e) = checker.check_normal(&mut CheckContext::new(), term, &expected, &mut fuel)
        {
            let f = Failure::from_check_error(format!("{label}: "), e);
            return emit_failure(&f, "eq", opts.json, opts.trace, out, err);
        }
    }

    let mut fuel = Fuel::new(opts.fuel);
    let lazy = match eq_closure(
        &Closure::under_id(lhs.clone()),
        &Closure::under_id(rhs.clone()),
        &mut fuel,
    ) {
        Ok(v) => v,
        Err(e) => {
            let f = Failure::from_eval_error("".into(), e);
            return emit_failure(&f, "eq", opts.json, opts.trace, out, err);
        }
    };
    if opts.oracle {
        let mut ofuel = Fuel::new(opts.fuel);
        match equal_beta_eta(&lhs, &rhs, &mut ofuel) {
            Ok(eager) if eager != lazy => {
                let f = Failure::new(
                    EXIT_DIVERGENCE,
                    format!(
                        "engine divergence: algorithmic equality says {lazy}, oracle says {eager}"
                    ),
                );
                return emit_failure(&f, "eq", opts.json, opts.trace, out, err);
            }
            Ok(_) => {}
            Err(e) => {
                let f = Failure::from_eval_error("oracle: ".into(), e);
                return emit_failure(&f, "eq", opts.json, opts.trace, out, err);
            }
        }
    }

    let printer = printer_for(&sig, &delta);
    if opts.json {
        let obj = json!({"command": "eq", "status": "ok", "equal": lazy});
        let _ = writeln!(out, "{obj}");
    } else if lazy {
        let _ = writeln!(out, "equal");
    } else {
        let _ = writeln!(out, "not equal");
        let _ = writeln!(out, "{}", locus_of_pair(&lhs, &rhs, opts.fuel, &printer));
    }
    if lazy {
        EXIT_OK
    } else {
        EXIT_SEMANTIC
    }
}

/// The printer the driver itself uses, for tests that want identical
/// rendering.
pub fn display_printer(sig: &Signature, delta: &CheckedMetaContext) -> Printer {
    printer_for(sig, delta)
}
