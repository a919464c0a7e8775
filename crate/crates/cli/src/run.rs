//! Task execution and reports.

use std::panic::{self, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use graded_poisson::graded_algebra::guard::with_degree_limit;
use graded_poisson::graded_algebra::{Chart, Coordinate, Derivation, GradedPolynomial};
use graded_poisson::homotopy_poisson::{check_master_equation, HomotopyPoissonStructure, PoissonError};
use graded_poisson::lie_structures::{
    courant_to_dgla, matched_pair_to_bialgebra, CourantAlgebraData, GradedLieAlgebra, HomotopyLieBialgebra,
    LieError, MatchedPairData,
};
use graded_poisson::reduction::{
    reduce, verify_quotient_theorem, InfinitesimalAction, MomentMap, ReducedStructure, ReductionError,
    ReductionProblem, SymplecticQStructure,
};
use graded_poisson::report::CheckReport;
use graded_poisson::shifted_cotangent::CotangentChart;

use crate::document::*;

/// Random trials per bracket property when `--seed` is given.
pub const SAMPLE_TRIALS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TaskResult {
    pub task: String,
    pub verdict: Verdict,
    pub residual: String,
    pub details: Vec<String>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub seed: Option<u64>,
    pub max_degree: Option<u32>,
    /// Keep tasks whose label, target or kind equals this.
    pub task: Option<String>,
}

/// Verdict, residual and details of one task.
struct Outcome {
    verdict: Verdict,
    residual: String,
    details: Vec<String>,
}

impl Outcome {
    fn pass(details: Vec<String>) -> Self {
        Outcome {
            verdict: Verdict::Pass,
            residual: "0".into(),
            details,
        }
    }

    fn fail(residual: impl Into<String>, details: Vec<String>) -> Self {
        Outcome {
            verdict: Verdict::Fail,
            residual: residual.into(),
            details,
        }
    }

    fn from_report(report: &CheckReport, mut details: Vec<String>) -> Self {
        details.extend(report_lines(report));
        match report.failures().next() {
            None => Outcome::pass(details),
            Some(e) => Outcome::fail(e.residual.clone(), details),
        }
    }
}

fn report_lines(report: &CheckReport) -> Vec<String> {
    report.to_string().lines().map(str::to_string).collect()
}

/// A task that could not be carried out (as opposed to one whose check
/// failed).
struct TaskError(String);

impl<E: std::fmt::Display> From<E> for TaskError {
    fn from(e: E) -> Self {
        TaskError(e.to_string())
    }
}

type TResult = Result<Outcome, TaskError>;

/// Selected tasks in document order, or `Err` when `--task` matches none.
pub fn select<'a>(doc: &'a Document, opts: &Options) -> Result<Vec<&'a Task>, String> {
    let tasks: Vec<&Task> = doc
        .tasks()
        .filter(|t| match &opts.task {
            None => true,
            Some(n) => t.label() == *n || t.target == *n || t.kind.keyword() == n,
        })
        .collect();
    match &opts.task {
        Some(n) if tasks.is_empty() => Err(format!("no task matches `{n}`")),
        _ => Ok(tasks),
    }
}

pub fn run_document(doc: &Document, opts: &Options) -> Result<Vec<TaskResult>, String> {
    let tasks = select(doc, opts)?;
    Ok(tasks.par_iter().map(|t| run_task(doc, t, opts)).collect())
}

pub fn run_task(doc: &Document, task: &Task, opts: &Options) -> TaskResult {
    let start = Instant::now();
    let body = || execute(doc, task, opts);
    let outcome = panic::catch_unwind(AssertUnwindSafe(|| match opts.max_degree {
        None => Ok(body()),
        Some(k) => with_degree_limit(k, body),
    }));
    let outcome = match outcome {
        Ok(Ok(Ok(o))) => o,
        Ok(Ok(Err(TaskError(message)))) => Outcome {
            verdict: Verdict::Error,
            residual: String::new(),
            details: vec![message],
        },
        Ok(Err(limit)) => Outcome {
            verdict: Verdict::Error,
            residual: String::new(),
            details: vec![format!("degree limit exceeded: {limit}")],
        },
        Err(_) => Outcome {
            verdict: Verdict::Error,
            residual: String::new(),
            details: vec!["internal error while running the task".into()],
        },
    };
    TaskResult {
        task: task.label(),
        verdict: outcome.verdict,
        residual: outcome.residual,
        details: outcome.details,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

/// 0 when every task passed, 1 otherwise.
pub fn exit_code(results: &[TaskResult]) -> i32 {
    if results.iter().all(|r| r.verdict == Verdict::Pass) {
        0
    } else {
        1
    }
}

/// Deterministic human-readable report; no timing.
pub fn human_report(results: &[TaskResult]) -> String {
    let mut out = String::new();
    for r in results {
        let tag = match r.verdict {
            Verdict::Pass => "PASS ",
            Verdict::Fail => "FAIL ",
            Verdict::Error => "ERROR",
        };
        out.push_str(&format!("{tag} {}\n", r.task));
        if r.verdict == Verdict::Fail {
            out.push_str(&format!("      residual: {}\n", r.residual));
        }
        for d in &r.details {
            out.push_str(&format!("      {d}\n"));
        }
    }
    let count = |v| results.iter().filter(|r| r.verdict == v).count();
    out.push_str(&format!(
        "{} tasks: {} passed, {} failed, {} errors\n",
        results.len(),
        count(Verdict::Pass),
        count(Verdict::Fail),
        count(Verdict::Error)
    ));
    out
}

pub fn json_report(results: &[TaskResult]) -> String {
    serde_json::to_string_pretty(results).expect("task results serialize")
}

// ---- building runtime objects from declarations ----

fn decl<'a, T>(doc: &'a Document, name: &str, pick: impl Fn(&'a Item) -> Option<&'a T>) -> Result<&'a T, TaskError> {
    doc.find(name)
        .and_then(pick)
        .ok_or_else(|| TaskError(format!("`{name}` is not declared with the expected kind")))
}

fn chart(doc: &Document, name: &str) -> Result<Arc<Chart>, TaskError> {
    let d = decl(doc, name, |i| match i {
        Item::Chart(d) => Some(d),
        _ => None,
    })?;
    Ok(Chart::new(d.coords.iter().map(|(n, k)| Coordinate::new(n.clone(), *k)).collect())?)
}

fn cotangent(doc: &Document, name: &str) -> Result<CotangentChart, TaskError> {
    let d = decl(doc, name, |i| match i {
        Item::Cotangent(d) => Some(d),
        _ => None,
    })?;
    Ok(CotangentChart::build(&chart(doc, &d.base)?, d.shift)?)
}

/// Chart of a chart or cotangent declaration.
fn space(doc: &Document, name: &str) -> Result<Arc<Chart>, TaskError> {
    match doc.find(name) {
        Some(Item::Cotangent(_)) => Ok(cotangent(doc, name)?.chart().clone()),
        _ => chart(doc, name),
    }
}

fn lie(doc: &Document, name: &str) -> Result<GradedLieAlgebra, TaskError> {
    let d = decl(doc, name, |i| match i {
        Item::LieAlgebra(d) => Some(d),
        _ => None,
    })?;
    Ok(GradedLieAlgebra::new(d.basis.clone(), d.brackets.clone())?)
}

fn bialgebra(doc: &Document, name: &str) -> Result<HomotopyLieBialgebra, TaskError> {
    let d = decl(doc, name, |i| match i {
        Item::Bialgebra(d) => Some(d),
        _ => None,
    })?;
    Ok(HomotopyLieBialgebra::from_images(
        lie(doc, &d.algebra)?,
        d.shift,
        d.differential.clone(),
    )?)
}

fn poly<'a>(doc: &'a Document, name: &str) -> Result<&'a PolyDecl, TaskError> {
    decl(doc, name, |i| match i {
        Item::Poly(d) => Some(d),
        _ => None,
    })
}

fn structure(doc: &Document, name: &str) -> Result<(CotangentChart, GradedPolynomial), TaskError> {
    let d = decl(doc, name, |i| match i {
        Item::HomotopyPoisson(d) => Some(d),
        _ => None,
    })?;
    let cc = cotangent(doc, &d.space)?;
    let pi = d.pi.transfer(cc.chart())?;
    Ok((cc, pi))
}

fn action(doc: &Document, name: &str) -> Result<Result<InfinitesimalAction, ReductionError>, TaskError> {
    let d = decl(doc, name, |i| match i {
        Item::Action(d) => Some(d),
        _ => None,
    })?;
    let b = bialgebra(doc, &d.bialgebra)?;
    let chart = space(doc, &d.space)?;
    let g = b.algebra().clone();
    let mut fields = Vec::with_capacity(g.dim());
    for (v, row) in d.fields.iter().enumerate() {
        let images = row.iter().map(|p| p.transfer(&chart)).collect::<Result<Vec<_>, _>>()?;
        fields.push(Derivation::new(&chart, g.degree(v), images)?);
    }
    Ok(InfinitesimalAction::new(b, &chart, fields))
}

// ---- tasks ----

fn execute(doc: &Document, task: &Task, opts: &Options) -> TResult {
    match task.kind {
        TaskKind::CheckHp => check_hp(doc, &task.target, opts),
        TaskKind::Bracket => bracket(doc, &task.target, &task.args[0]),
        TaskKind::Derived => derived(doc, &task.target, &task.args[1..]),
        TaskKind::CheckBialg => {
            let b = bialgebra(doc, &task.target)?;
            Ok(Outcome::from_report(&b.check(), Vec::new()))
        }
        TaskKind::Courant2Dgla => courant(doc, &task.target),
        TaskKind::Matched2Bialg => matched(doc, &task.target),
        TaskKind::Reduce => reduction(doc, &task.target),
        TaskKind::VerifyQuotient => quotient_theorem(doc, &task.target),
    }
}

fn check_hp(doc: &Document, name: &str, opts: &Options) -> TResult {
    let (cc, pi) = structure(doc, name)?;
    let me = match check_master_equation(&cc, &pi) {
        Ok(me) => me,
        Err(e @ (PoissonError::Inhomogeneous | PoissonError::WrongDegree { .. })) => {
            return Ok(Outcome::fail(e.to_string(), vec![e.to_string()]))
        }
        Err(e) => return Err(e.into()),
    };
    if !me.holds {
        return Ok(Outcome::fail(
            me.residual.to_string(),
            vec![format!("{{pi, pi}} = {}", me.residual)],
        ));
    }
    let hp = HomotopyPoissonStructure::new(&cc, pi)?;
    let lengths: Vec<String> = hp.components().iter().map(|(l, _)| l.to_string()).collect();
    let mut details = vec![
        format!("classification: {}", hp.classify()),
        format!("component lengths: [{}]", lengths.join(", ")),
    ];
    if let Some(seed) = opts.seed {
        let report = hp.sample_bracket_properties(seed, SAMPLE_TRIALS)?;
        return Ok(Outcome::from_report(&report, details));
    }
    details.push("master equation holds".into());
    Ok(Outcome::pass(details))
}

fn bracket(doc: &Document, a: &str, b: &str) -> TResult {
    let (pa, pb) = (poly(doc, a)?, poly(doc, b)?);
    let cc = doc
        .items
        .iter()
        .filter_map(|i| match i {
            Item::Cotangent(d) => Some(&d.name),
            _ => None,
        })
        .map(|n| cotangent(doc, n))
        .find(|cc| matches!(cc, Ok(cc) if **cc.chart() == **pa.value.chart()))
        .unwrap_or_else(|| Err(TaskError(format!("`{a}` does not live on a cotangent"))))?;
    let value = cc.bracket(&pa.value, &pb.value)?;
    Ok(Outcome::pass(vec![format!("{{{a}, {b}}} = {value}")]))
}

fn derived(doc: &Document, name: &str, args: &[String]) -> TResult {
    let (cc, pi) = structure(doc, name)?;
    let hp = match HomotopyPoissonStructure::new(&cc, pi) {
        Ok(hp) => hp,
        Err(e) => return Ok(Outcome::fail(e.to_string(), vec![e.to_string()])),
    };
    let fs = args
        .iter()
        .map(|f| Ok(poly(doc, f)?.value.transfer(cc.base())?))
        .collect::<Result<Vec<_>, TaskError>>()?;
    let value = hp.derived_bracket(&fs)?;
    Ok(Outcome::pass(vec![format!(
        "beta_{}({}) = {value}",
        args.len(),
        args.join(", ")
    )]))
}

fn lie_rejection(e: &LieError) -> bool {
    matches!(
        e,
        LieError::CourantAxiom(_)
            | LieError::NotLeftCentral(..)
            | LieError::NotSurjective { .. }
            | LieError::NotAnAction(..)
    )
}

fn courant(doc: &Document, name: &str) -> TResult {
    let d = decl(doc, name, |i| match i {
        Item::Courant(d) => Some(d),
        _ => None,
    })?;
    let data = CourantAlgebraData::new(
        lie(doc, &d.algebra)?,
        d.basis.clone(),
        d.brackets.clone(),
        d.projection.clone(),
    )?;
    let built = match courant_to_dgla(&data) {
        Ok(b) => b,
        Err(e) if lie_rejection(&e) => return Ok(Outcome::fail(e.to_string(), vec![format!("rejected: {e}")])),
        Err(e) => return Err(e.into()),
    };
    let alg = built.dgla.algebra();
    let basis: Vec<String> = (0..alg.dim())
        .map(|i| format!("{}:{}", alg.name(i), alg.degree(i)))
        .collect();
    let details = vec![
        format!("kernel dimension: {}", built.kernel.len()),
        format!("basis: {}", basis.join(" ")),
    ];
    Ok(Outcome::from_report(&built.dgla.check(), details))
}

fn matched(doc: &Document, name: &str) -> TResult {
    let d = decl(doc, name, |i| match i {
        Item::MatchedPair(d) => Some(d),
        _ => None,
    })?;
    let data = MatchedPairData::new(lie(doc, &d.algebra)?, lie(doc, &d.dual)?, d.act.clone(), d.coact.clone())?;
    match matched_pair_to_bialgebra(&data) {
        Ok((b, report)) => {
            let images: Vec<String> = (0..b.dual().chart().len())
                .map(|i| format!("d {} = {}", b.dual().chart().name(i), b.dhat().image(i)))
                .collect();
            Ok(Outcome::from_report(&report, images))
        }
        Err(e) if lie_rejection(&e) => Ok(Outcome::fail(e.to_string(), vec![format!("rejected: {e}")])),
        Err(e) => Err(e.into()),
    }
}

/// Failures of the reduction hypotheses are verdicts; malformed input is an
/// error.
fn reduction_rejection(e: &ReductionError) -> bool {
    match e {
        ReductionError::NotHomological(_)
        | ReductionError::NotAnAction(..)
        | ReductionError::NonFlat(_)
        | ReductionError::Regularity { .. }
        | ReductionError::NotCoisotropic(..)
        | ReductionError::NotInvariant { .. }
        | ReductionError::NotInNormalizer { .. }
        | ReductionError::QuotientChart(..)
        | ReductionError::NotExpressible { .. } => true,
        ReductionError::Poisson(PoissonError::MasterEquation(_)) => true,
        ReductionError::Lie(e) => lie_rejection(e),
        _ => false,
    }
}

fn reduction_outcome<T>(r: Result<T, ReductionError>) -> Result<Result<T, Outcome>, TaskError> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e) if reduction_rejection(&e) => Ok(Err(Outcome::fail(e.to_string(), vec![format!("rejected: {e}")]))),
        Err(e) => Err(e.into()),
    }
}

fn reduced_details(r: &ReducedStructure) -> Vec<String> {
    let mut details = Vec::new();
    for (c, nf) in &r.eliminated {
        details.push(format!("eliminated {c} = {nf}"));
    }
    match r.hamiltonian() {
        Some(h) => details.push(format!("reduced hamiltonian: {h}")),
        None => details.push("reduced hamiltonian: none".into()),
    }
    details
}

fn reduction(doc: &Document, name: &str) -> TResult {
    let d = decl(doc, name, |i| match i {
        Item::Reduction(d) => Some(d),
        _ => None,
    })?;
    let cc = cotangent(doc, &d.space)?;
    let m = decl(doc, &d.moment, |i| match i {
        Item::MomentMap(d) => Some(d),
        _ => None,
    })?;
    let b = bialgebra(doc, &m.bialgebra)?;
    let quotient = cotangent(doc, &d.quotient)?;
    let images: Vec<GradedPolynomial> = d.images.iter().map(|(_, p)| p.clone()).collect();
    let built = (|| {
        let s = SymplecticQStructure::new(&cc, d.hamiltonian.transfer(cc.chart())?)?;
        let mm = MomentMap::new(&cc, &b, m.images.clone())?;
        match &d.action {
            Some(a) => {
                let rho = action(doc, a).map_err(|TaskError(e)| ReductionError::ChartMismatch(e))??;
                ReductionProblem::new(s, rho, mm, quotient, images)
            }
            None => ReductionProblem::with_hamiltonian_action(s, mm, &b, quotient, images),
        }
    })();
    let problem = match reduction_outcome(built)? {
        Ok(p) => p,
        Err(o) => return Ok(o),
    };
    let reduced = match reduction_outcome(reduce(&problem))? {
        Ok(r) => r,
        Err(o) => return Ok(o),
    };
    let outcome = Outcome::from_report(&reduced.report, reduced_details(&reduced));
    if outcome.verdict == Verdict::Pass && reduced.structure.is_none() {
        return Ok(Outcome::fail("no reduced hamiltonian", outcome.details));
    }
    Ok(outcome)
}

fn quotient_theorem(doc: &Document, name: &str) -> TResult {
    let d = decl(doc, name, |i| match i {
        Item::QuotientTheorem(d) => Some(d),
        _ => None,
    })?;
    let (cc, pi) = structure(doc, &d.structure)?;
    let hp = match HomotopyPoissonStructure::new(&cc, pi) {
        Ok(hp) => hp,
        Err(e) => return Ok(Outcome::fail(e.to_string(), vec![e.to_string()])),
    };
    let rho = match reduction_outcome(action(doc, &d.action)?)? {
        Ok(r) => r,
        Err(o) => return Ok(o),
    };
    let quotient = cotangent(doc, &d.quotient)?;
    let images: Vec<GradedPolynomial> = d.images.iter().map(|(_, p)| p.clone()).collect();
    let momenta: Option<Vec<GradedPolynomial>> = d.momenta.as_ref().map(|m| m.iter().map(|(_, p)| p.clone()).collect());
    let comparison = match reduction_outcome(verify_quotient_theorem(
        &hp,
        &rho,
        &quotient,
        &images,
        momenta.as_deref(),
    ))? {
        Ok(c) => c,
        Err(o) => return Ok(o),
    };
    let mut details = reduced_details(&comparison.reduced);
    details.push(format!("pushed structure: {}", comparison.pushed));
    Ok(Outcome::from_report(&comparison.report, details))
}
