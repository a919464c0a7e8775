//! Zero-level reduction with a declared quotient, and the comparison with
//! the quotient homotopy Poisson structure obtained from derived brackets.

use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::elimination::{evaluate, Elimination, EliminationFailure, Expressor};
use super::{
    check_action_morphism, check_q_morphism_moment, cotangent_lift, hamiltonian_of_degree,
    require_degree, InfinitesimalAction, MomentMap, ReductionError, SymplecticQStructure,
};
use crate::graded_algebra::{
    parity, rational, AlgebraMorphism, Chart, Derivation, GradedPolynomial, Rational,
};
use crate::homotopy_poisson::{from_differential, HomotopyPoissonStructure, PoissonError};
use crate::linalg;
use crate::report::CheckReport;
use crate::shifted_cotangent::CotangentChart;

/// Seed of the evaluation points used by the freeness proxy.
const FREENESS_SEED: u64 = 0x5eed;
const FREENESS_POINTS: usize = 4;

/// A symplectic Q-structure with an action, a moment map and a declared
/// quotient: `images[c]` is the invariant function on `S` representing the
/// quotient coordinate `c`.
#[derive(Clone, Debug)]
pub struct ReductionProblem {
    structure: SymplecticQStructure,
    action: InfinitesimalAction,
    moment: MomentMap,
    quotient: CotangentChart,
    images: Vec<GradedPolynomial>,
}

impl ReductionProblem {
    pub fn new(
        structure: SymplecticQStructure,
        action: InfinitesimalAction,
        moment: MomentMap,
        quotient: CotangentChart,
        images: Vec<GradedPolynomial>,
    ) -> Result<Self, ReductionError> {
        let chart = structure.chart().clone();
        if **action.chart() != *chart {
            return Err(ReductionError::ChartMismatch("action".into()));
        }
        if moment.cotangent() != structure.cotangent() {
            return Err(ReductionError::ChartMismatch("moment map".into()));
        }
        if action.algebra().names() != moment.names() {
            return Err(ReductionError::ChartMismatch("moment map basis".into()));
        }
        if quotient.shift() != structure.shift() {
            return Err(ReductionError::ShiftMismatch {
                bialgebra: quotient.shift(),
                symplectic: structure.shift(),
            });
        }
        let q = quotient.chart();
        if images.len() != q.len() {
            return Err(ReductionError::Count {
                what: "quotient images",
                expected: q.len(),
                found: images.len(),
            });
        }
        let mut moved = Vec::with_capacity(images.len());
        for (c, img) in images.iter().enumerate() {
            let img = img
                .transfer(&chart)
                .map_err(|_| ReductionError::ChartMismatch(format!("image of {}", q.name(c))))?;
            require_degree(format!("image of {}", q.name(c)), &img, q.degree(c))?;
            moved.push(img);
        }
        Ok(ReductionProblem {
            structure,
            action,
            moment,
            quotient,
            images: moved,
        })
    }

    /// The problem with the Hamiltonian action `ρ̃(v) = {μ*v, ·}`.
    pub fn with_hamiltonian_action(
        structure: SymplecticQStructure,
        moment: MomentMap,
        b: &crate::lie_structures::HomotopyLieBialgebra,
        quotient: CotangentChart,
        images: Vec<GradedPolynomial>,
    ) -> Result<Self, ReductionError> {
        let cc = structure.cotangent();
        let fields = (0..b.algebra().dim())
            .map(|v| hamiltonian_of_degree(cc, moment.image(v), b.algebra().degree(v)))
            .collect::<Result<Vec<_>, _>>()?;
        let action = InfinitesimalAction::new(b.clone(), cc.chart(), fields)?;
        ReductionProblem::new(structure, action, moment, quotient, images)
    }

    pub fn structure(&self) -> &SymplecticQStructure {
        &self.structure
    }

    pub fn action(&self) -> &InfinitesimalAction {
        &self.action
    }

    pub fn moment(&self) -> &MomentMap {
        &self.moment
    }

    pub fn quotient(&self) -> &CotangentChart {
        &self.quotient
    }

    pub fn images(&self) -> &[GradedPolynomial] {
        &self.images
    }
}

/// Outcome of [`reduce`].
#[derive(Clone, Debug)]
pub struct ReducedStructure {
    pub quotient: CotangentChart,
    /// `μ*v` in basis order.
    pub generators: Vec<GradedPolynomial>,
    /// Solved coordinates and their normal forms.
    pub eliminated: Vec<(String, GradedPolynomial)>,
    /// The descended derivation on the quotient chart.
    pub q_red: Derivation,
    /// `{H_red, ·} = Q_red`, when `Q_red` is homological and Hamiltonian.
    pub structure: Option<SymplecticQStructure>,
    pub report: CheckReport,
}

impl ReducedStructure {
    pub fn passed(&self) -> bool {
        self.report.passed() && self.structure.is_some()
    }

    pub fn hamiltonian(&self) -> Option<&GradedPolynomial> {
        self.structure.as_ref().map(SymplecticQStructure::hamiltonian)
    }
}

/// Rank of the matrix `ρ(v)(y_j)` at seeded random points; the maximum over
/// the points is a lower bound for the generic rank.
fn generic_rank(chart: &Arc<Chart>, fields: &[Derivation]) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(FREENESS_SEED);
    let mut best = 0;
    for _ in 0..FREENESS_POINTS {
        let point: Vec<Rational> = (0..chart.len())
            .map(|_| rational(rng.gen_range(-7i64..=7)))
            .collect();
        let m: linalg::Matrix = fields
            .iter()
            .map(|f| f.images().iter().map(|p| evaluate(p, &point)).collect())
            .collect();
        best = best.max(linalg::rank(&m));
    }
    best
}

fn first_nonzero(
    e: &Elimination,
    items: impl IntoIterator<Item = (String, GradedPolynomial)>,
) -> Result<Option<(String, GradedPolynomial)>, ReductionError> {
    for (label, f) in items {
        let nf = e.normal_form(&f)?;
        if !nf.is_zero() {
            return Ok(Some((label, nf)));
        }
    }
    Ok(None)
}

/// `D({u, v}) = {D u, v} + (-1)^{|u| - n} {u, D v}` on coordinate pairs; the
/// first failing pair and residual.
fn bracket_derivation_failure(
    cc: &CotangentChart,
    d: &Derivation,
) -> Result<Option<(String, String, GradedPolynomial)>, ReductionError> {
    let chart = cc.chart();
    let n = cc.shift();
    for u in 0..chart.len() {
        for v in 0..chart.len() {
            let (cu, cv) = (cc.coordinate(u), cc.coordinate(v));
            let lhs = d.apply(&cc.bracket(&cu, &cv)?)?;
            let first = cc.bracket(d.image(u), &cv)?;
            let second = cc.bracket(&cu, d.image(v))?;
            let sign = if parity(chart.degree(u) - n) { rational(-1) } else { rational(1) };
            let r = &lhs - &(&first + &second.scale(&sign));
            if !r.is_zero() {
                return Ok(Some((chart.name(u).to_string(), chart.name(v).to_string(), r)));
            }
        }
    }
    Ok(None)
}

/// Reduces at the zero level of the moment map. Checks run in order:
/// flatness, regularity, freeness, coisotropy, invariance of the ideal under
/// `Q_S`, invariance and normalizer membership of the declared images, and
/// finally the descended `Q_red` with its Hamiltonian.
pub fn reduce(problem: &ReductionProblem) -> Result<ReducedStructure, ReductionError> {
    let s = &problem.structure;
    let cc = s.cotangent();
    let chart = cc.chart();
    let action = &problem.action;
    let b = action.bialgebra();
    let g = b.algebra();
    let mm = &problem.moment;
    let quotient = &problem.quotient;
    let qchart = quotient.chart();
    let mut report = CheckReport::new();

    if let Some(v) = (0..g.dim()).find(|&v| !b.dhat().image(v).constant_term().is_zero()) {
        return Err(ReductionError::NonFlat(g.name(v).to_string()));
    }
    report.pass("flat", "");
    report.extend(mm.check_equivariance(g)?);

    let generators: Vec<GradedPolynomial> = mm.images().to_vec();
    let ideal = Elimination::new(chart, &generators, |_| true).map_err(|(v, failure)| {
        ReductionError::Regularity {
            generator: g.name(v).to_string(),
            reason: match failure {
                EliminationFailure::Redundant => "dependent on the other generators".into(),
                EliminationFailure::NoPivot(r) => format!("{r} cannot be solved for a coordinate"),
                EliminationFailure::Algebra(e) => e.to_string(),
            },
        }
    })?;
    report.pass(
        "regular",
        ideal
            .rules()
            .iter()
            .map(|(k, _)| chart.name(*k))
            .collect::<Vec<_>>()
            .join(", "),
    );

    let rank = generic_rank(chart, action.rhos());
    if rank == g.dim() {
        report.pass("free-action", format!("rank {rank}"));
    } else {
        report.fail("free-action", format!("rank {rank}"), format!("expected rank {}", g.dim()));
    }

    // (i) coisotropy
    for v in 0..g.dim() {
        for w in v..g.dim() {
            let nf = ideal.normal_form(&cc.bracket(&generators[v], &generators[w])?)?;
            if !nf.is_zero() {
                return Err(ReductionError::NotCoisotropic(
                    g.name(v).to_string(),
                    g.name(w).to_string(),
                    nf.to_string(),
                ));
            }
        }
    }
    report.pass("coisotropic", "");

    // (ii) Q-invariance of the ideal
    let moved = (0..g.dim())
        .map(|v| Ok((g.name(v).to_string(), s.q().apply(&generators[v])?)))
        .collect::<Result<Vec<_>, ReductionError>>()?;
    match first_nonzero(&ideal, moved)? {
        None => report.pass("q-invariant-ideal", ""),
        Some((v, nf)) => report.fail("q-invariant-ideal", nf.to_string(), format!("Q_S(μ*{v})")),
    }

    // (iii) declared images: invariance and normalizer membership
    for (c, img) in problem.images.iter().enumerate() {
        for v in 0..g.dim() {
            let nf = ideal.normal_form(&action.rho(v).apply(img)?)?;
            if !nf.is_zero() {
                return Err(ReductionError::NotInvariant {
                    function: qchart.name(c).to_string(),
                    v: g.name(v).to_string(),
                    residual: nf.to_string(),
                });
            }
            let nf = ideal.normal_form(&cc.bracket(img, &generators[v])?)?;
            if !nf.is_zero() {
                return Err(ReductionError::NotInNormalizer {
                    function: qchart.name(c).to_string(),
                    v: g.name(v).to_string(),
                    residual: nf.to_string(),
                });
            }
        }
    }
    report.pass("invariant-images", "");
    report.pass("normalizer", "");
    let hamiltonian_action = (0..g.dim()).find_map(|v| {
        let expected = hamiltonian_of_degree(cc, &generators[v], g.degree(v)).ok()?;
        (0..chart.len()).find_map(|i| {
            let diff = action.rho(v).image(i) - expected.image(i);
            match ideal.normal_form(&diff) {
                Ok(nf) if nf.is_zero() => None,
                Ok(nf) => Some((g.name(v).to_string(), nf)),
                Err(_) => Some((g.name(v).to_string(), diff)),
            }
        })
    });
    match hamiltonian_action {
        None => report.pass("hamiltonian-action", ""),
        Some((v, r)) => report.fail("hamiltonian-action", r.to_string(), format!("ρ̃({v}) - {{μ*{v}, ·}}")),
    }

    // (iv) the descended structure
    let representatives = problem
        .images
        .iter()
        .map(|f| ideal.normal_form(f))
        .collect::<Result<Vec<_>, _>>()?;
    let expressor = Expressor::new(chart, qchart, &representatives, |k| ideal.is_solved(k))
        .map_err(|(c, failure)| {
            ReductionError::QuotientChart(
                qchart.name(c).to_string(),
                match failure {
                    EliminationFailure::Redundant => "image depends on the other images".into(),
                    EliminationFailure::NoPivot(r) => format!("relation {r} cannot be solved"),
                    EliminationFailure::Algebra(e) => e.to_string(),
                },
            )
        })?;
    let express = |what: String, f: &GradedPolynomial| -> Result<GradedPolynomial, ReductionError> {
        let nf = ideal.normal_form(f)?;
        expressor
            .express(&nf)
            .map_err(|residual| ReductionError::NotExpressible { what, residual })
    };

    let mut poisson_failure = None;
    'pairs: for c in 0..qchart.len() {
        for d in c..qchart.len() {
            let upstairs = cc.bracket(&problem.images[c], &problem.images[d])?;
            let got = express(format!("{{{}, {}}}", qchart.name(c), qchart.name(d)), &upstairs)?;
            let want = quotient.bracket(&quotient.coordinate(c), &quotient.coordinate(d))?;
            if got != want {
                poisson_failure = Some((qchart.name(c).to_string(), qchart.name(d).to_string(), &got - &want));
                break 'pairs;
            }
        }
    }
    match poisson_failure {
        None => report.pass("quotient-poisson", ""),
        Some((c, d, r)) => report.fail("quotient-poisson", r.to_string(), format!("({c}, {d})")),
    }

    let q_images = problem
        .images
        .iter()
        .enumerate()
        .map(|(c, f)| express(format!("Q_S applied to the image of {}", qchart.name(c)), &s.q().apply(f)?))
        .collect::<Result<Vec<_>, _>>()?;
    let q_red = Derivation::new(qchart, 1, q_images)?;

    let pull = AlgebraMorphism::new(qchart, chart, representatives.clone())?;
    let mut consistency = None;
    for (c, f) in problem.images.iter().enumerate() {
        let lhs = ideal.normal_form(&pull.apply(q_red.image(c))?)?;
        let rhs = ideal.normal_form(&s.q().apply(f)?)?;
        if lhs != rhs {
            consistency = Some((qchart.name(c).to_string(), &lhs - &rhs));
            break;
        }
    }
    match consistency {
        None => report.pass("representatives", ""),
        Some((c, r)) => report.fail("representatives", r.to_string(), format!("coordinate {c}")),
    }

    let square = q_red.commutator(&q_red)?;
    match (0..qchart.len()).find(|&i| !square.image(i).is_zero()) {
        None => report.pass("reduced-square-zero", ""),
        Some(i) => report.fail("reduced-square-zero", square.image(i).to_string(), qchart.name(i)),
    }
    match bracket_derivation_failure(quotient, &q_red)? {
        None => report.pass("reduced-bracket-derivation", ""),
        Some((u, v, r)) => report.fail("reduced-bracket-derivation", r.to_string(), format!("({u}, {v})")),
    }
    let structure = match from_differential(quotient, &q_red) {
        Ok(hp) => {
            let h = hp.pi().clone();
            report.pass("reduced-hamiltonian", format!("H_red = {h}"));
            Some(SymplecticQStructure::new(quotient, h)?)
        }
        Err(e) => {
            report.fail("reduced-hamiltonian", e.to_string(), "");
            None
        }
    };

    Ok(ReducedStructure {
        quotient: quotient.clone(),
        generators,
        eliminated: ideal
            .rules()
            .iter()
            .map(|(k, r)| (chart.name(*k).to_string(), r.clone()))
            .collect(),
        q_red,
        structure,
        report,
    })
}

/// Both routes to the quotient of a homotopy Poisson structure.
#[derive(Clone, Debug)]
pub struct QuotientComparison {
    /// Cotangent lift followed by [`reduce`].
    pub reduced: ReducedStructure,
    /// The structure assembled from derived brackets of the declared
    /// invariants.
    pub pushed: GradedPolynomial,
    pub report: CheckReport,
}

impl QuotientComparison {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }
}

/// All multisets of size `len` from `0..dim`, as sorted index lists.
fn multisets(dim: usize, len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for shorter in multisets(dim, len - 1) {
        let start = shorter.last().copied().unwrap_or(0);
        for i in start..dim {
            let mut next = shorter.clone();
            next.push(i);
            out.push(next);
        }
    }
    out
}

/// Runs the cotangent lift and [`reduce`] on `T*[n]M`, and separately
/// assembles the quotient structure from the derived brackets of the
/// declared invariants `base_images` (functions on `M`, one per base
/// coordinate of the quotient). Quotient momenta map to the matching
/// momenta when the base image is a bare coordinate; otherwise their images
/// on `T*[n]M` must be supplied in `momentum_images`.
pub fn verify_quotient_theorem(
    hp: &HomotopyPoissonStructure,
    rho: &InfinitesimalAction,
    quotient: &CotangentChart,
    base_images: &[GradedPolynomial],
    momentum_images: Option<&[GradedPolynomial]>,
) -> Result<QuotientComparison, ReductionError> {
    let cc = hp.cotangent();
    let base = cc.base();
    let qbase = quotient.base();
    let g = rho.algebra();
    let mut report = CheckReport::new();
    if base_images.len() != qbase.len() {
        return Err(ReductionError::Count {
            what: "base images",
            expected: qbase.len(),
            found: base_images.len(),
        });
    }
    let base_images = base_images
        .iter()
        .map(|f| f.transfer(base))
        .collect::<Result<Vec<_>, _>>()?;

    report.extend(check_action_morphism(rho, hp)?);

    // first route: lift and reduce
    let (lift, mm) = cotangent_lift(rho)?;
    let s = SymplecticQStructure::from_homotopy_poisson(hp);
    report.extend(check_q_morphism_moment(&mm, &s, rho.bialgebra())?);
    let mut images: Vec<GradedPolynomial> = base_images
        .iter()
        .map(|f| cc.lift(f))
        .collect::<Result<_, _>>()?;
    for (c, f) in base_images.iter().enumerate() {
        let img = match momentum_images {
            Some(list) => list
                .get(c)
                .cloned()
                .ok_or_else(|| ReductionError::MissingMomentumImage(quotient.chart().name(qbase.len() + c).to_string()))?,
            None => {
                let bare = (0..base.len()).find(|&i| *f == GradedPolynomial::coordinate(base, i));
                match bare {
                    Some(i) => cc.momentum(i),
                    None => {
                        return Err(ReductionError::MissingMomentumImage(
                            quotient.chart().name(qbase.len() + c).to_string(),
                        ))
                    }
                }
            }
        };
        images.push(img);
    }
    let problem = ReductionProblem::new(s, lift, mm, quotient.clone(), images)?;
    let reduced = reduce(&problem)?;
    report.extend(reduced.report.clone());

    // second route: derived brackets of invariants, rewritten on M/G
    for (c, f) in base_images.iter().enumerate() {
        for v in 0..g.dim() {
            let moved = rho.rho(v).apply(f)?;
            if !moved.is_zero() {
                return Err(ReductionError::NotInvariant {
                    function: qbase.name(c).to_string(),
                    v: g.name(v).to_string(),
                    residual: moved.to_string(),
                });
            }
        }
    }
    let expressor = Expressor::new(base, qbase, &base_images, |_| false).map_err(|(c, failure)| {
        ReductionError::QuotientChart(
            qbase.name(c).to_string(),
            match failure {
                EliminationFailure::NoPivot(r) => format!("relation {r} cannot be solved"),
                EliminationFailure::Redundant => "image depends on the other images".into(),
                EliminationFailure::Algebra(e) => e.to_string(),
            },
        )
    })?;
    let top = hp.finite_type_bound().unwrap_or(0);
    let mut pushed = GradedPolynomial::zero(quotient.chart());
    let mut lemma_failure = None;
    let mut coefficient_failure = None;
    for len in 0..=top as usize {
        for args in multisets(qbase.len(), len) {
            let invariants: Vec<GradedPolynomial> = args.iter().map(|&a| base_images[a].clone()).collect();
            let value = hp.derived_bracket(&invariants).map_err(|e| match e {
                PoissonError::Algebra(a) => ReductionError::Algebra(a),
                other => ReductionError::Poisson(other),
            })?;
            if lemma_failure.is_none() {
                for v in 0..g.dim() {
                    let moved = rho.rho(v).apply(&value)?;
                    if !moved.is_zero() {
                        let names: Vec<&str> = args.iter().map(|&a| qbase.name(a)).collect();
                        lemma_failure = Some((g.name(v).to_string(), names.join(", "), moved));
                        break;
                    }
                }
            }
            let names: Vec<&str> = args.iter().map(|&a| qbase.name(a)).collect();
            let what = format!("bracket of ({})", names.join(", "));
            let coefficient = expressor
                .express(&value)
                .map_err(|residual| ReductionError::NotExpressible { what, residual })?;
            // the same derived bracket applied to the bare momentum word
            let mut word = GradedPolynomial::one(quotient.chart());
            for &a in &args {
                word = &word * &quotient.momentum(a);
            }
            let mut probe = word.clone();
            for &a in &args {
                probe = quotient.bracket(&probe, &quotient.coordinate(a))?;
            }
            let k = probe.constant_term();
            if k.is_zero() {
                if !coefficient.is_zero() && coefficient_failure.is_none() {
                    coefficient_failure = Some((names.join(", "), coefficient));
                }
                continue;
            }
            pushed += &(&quotient.lift(&coefficient)? * &word).scale(&(Rational::from_integer(1.into()) / k));
        }
    }
    match lemma_failure {
        None => report.pass("invariant-brackets", ""),
        Some((v, args, r)) => report.fail("invariant-brackets", r.to_string(), format!("{v} on ({args})")),
    }
    match coefficient_failure {
        None => report.pass("pushed-brackets", ""),
        Some((args, r)) => report.fail("pushed-brackets", r.to_string(), format!("({args}) on a vanishing word")),
    }
    match crate::homotopy_poisson::check_master_equation(quotient, &pushed) {
        Ok(me) if me.holds => report.pass("pushed-master-equation", ""),
        Ok(me) => report.fail("pushed-master-equation", me.residual.to_string(), ""),
        Err(e) => report.fail("pushed-master-equation", e.to_string(), ""),
    }

    match reduced.hamiltonian() {
        Some(h) => {
            let ours = quotient.decompose(h);
            let theirs = quotient.decompose(&pushed);
            let lengths: std::collections::BTreeSet<u32> =
                ours.iter().chain(&theirs).map(|(l, _)| *l).collect();
            let differing = lengths.into_iter().find(|&l| quotient.component(h, l) != quotient.component(&pushed, l));
            match differing {
                None => report.pass("paths-agree", format!("π_red = {h}")),
                Some(l) => report.fail(
                    "paths-agree",
                    (&quotient.component(h, l) - &quotient.component(&pushed, l)).to_string(),
                    format!("component of length {l}"),
                ),
            }
        }
        None => report.fail("paths-agree", "no reduced Hamiltonian", ""),
    }

    Ok(QuotientComparison {
        reduced,
        pushed,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_structures::{GradedLieAlgebra, HomotopyLieBialgebra};

    fn translation(m: &Arc<Chart>, name: &str) -> InfinitesimalAction {
        let b = HomotopyLieBialgebra::zero(GradedLieAlgebra::abelian(vec![("v".into(), 0)]), 1).unwrap();
        InfinitesimalAction::new(b, m, vec![Derivation::partial(m, m.index_of(name).unwrap())]).unwrap()
    }

    fn structure(cc: &CotangentChart, pi: &str) -> HomotopyPoissonStructure {
        let v = |n: &str| cc.var(n).unwrap();
        let pi = match pi {
            "x px py" => &(&v("x") * &v("p_x")) * &v("p_y"),
            _ => unreachable!(),
        };
        HomotopyPoissonStructure::new(cc, pi).unwrap()
    }

    #[test]
    fn multisets_count() {
        assert_eq!(multisets(3, 2).len(), 6);
        assert_eq!(multisets(2, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn three_space_by_z_translation() {
        let m = Chart::from_pairs(&[("x", 0), ("y", 0), ("z", 0)]).unwrap();
        let cc = CotangentChart::build(&m, 1).unwrap();
        let hp = structure(&cc, "x px py");
        let qm = Chart::from_pairs(&[("x", 0), ("y", 0)]).unwrap();
        let qc = CotangentChart::build(&qm, 1).unwrap();
        let images = vec![GradedPolynomial::var(&m, "x").unwrap(), GradedPolynomial::var(&m, "y").unwrap()];
        let out = verify_quotient_theorem(&hp, &translation(&m, "z"), &qc, &images, None).unwrap();
        assert!(out.passed(), "{}", out.report);
        let expected = &(&qc.var("x").unwrap() * &qc.var("p_x").unwrap()) * &qc.var("p_y").unwrap();
        assert_eq!(out.reduced.hamiltonian(), Some(&expected));
        assert_eq!(out.reduced.q_red, qc.hamiltonian_vf(&expected).unwrap());
        assert_eq!(out.reduced.eliminated[0].0, "p_z");
    }

    #[test]
    fn plane_by_y_translation_kills_everything() {
        let m = Chart::from_pairs(&[("x", 0), ("y", 0)]).unwrap();
        let cc = CotangentChart::build(&m, 1).unwrap();
        let hp = structure(&cc, "x px py");
        let qm = Chart::from_pairs(&[("x", 0)]).unwrap();
        let qc = CotangentChart::build(&qm, 1).unwrap();
        let images = vec![GradedPolynomial::var(&m, "x").unwrap()];
        let out = verify_quotient_theorem(&hp, &translation(&m, "y"), &qc, &images, None).unwrap();
        assert!(out.passed(), "{}", out.report);
        assert!(out.reduced.q_red.is_zero());
        assert!(out.pushed.is_zero());
    }

    #[test]
    fn trivial_group_reproduces_the_structure() {
        let m = Chart::from_pairs(&[("x", 0), ("y", 0)]).unwrap();
        let cc = CotangentChart::build(&m, 1).unwrap();
        let hp = structure(&cc, "x px py");
        let b = HomotopyLieBialgebra::zero(GradedLieAlgebra::abelian(vec![]), 1).unwrap();
        let rho = InfinitesimalAction::new(b, &m, vec![]).unwrap();
        let images = vec![GradedPolynomial::var(&m, "x").unwrap(), GradedPolynomial::var(&m, "y").unwrap()];
        let out = verify_quotient_theorem(&hp, &rho, &cc, &images, None).unwrap();
        assert!(out.passed(), "{}", out.report);
        assert_eq!(out.reduced.hamiltonian(), Some(hp.pi()));
        assert_eq!(&out.reduced.q_red, &hp.differential());
    }

    #[test]
    fn non_invariant_image_is_named() {
        let m = Chart::from_pairs(&[("x", 0), ("y", 0)]).unwrap();
        let cc = CotangentChart::build(&m, 1).unwrap();
        let hp = structure(&cc, "x px py");
        let qm = Chart::from_pairs(&[("y", 0)]).unwrap();
        let qc = CotangentChart::build(&qm, 1).unwrap();
        let images = vec![GradedPolynomial::var(&m, "y").unwrap()];
        match verify_quotient_theorem(&hp, &translation(&m, "y"), &qc, &images, None) {
            Err(ReductionError::NotInvariant { function, v, .. }) => {
                assert_eq!((function.as_str(), v.as_str()), ("y", "v"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn nonlinear_generator_is_not_regular() {
        let m = Chart::from_pairs(&[("x", 0), ("y", 0)]).unwrap();
        let cc = CotangentChart::build(&m, 1).unwrap();
        let b = HomotopyLieBialgebra::zero(GradedLieAlgebra::abelian(vec![("v".into(), 0)]), 1).unwrap();
        let y = GradedPolynomial::var(&m, "y").unwrap();
        let rho = InfinitesimalAction::new(b.clone(), &m, vec![Derivation::new(&m, 0, vec![GradedPolynomial::zero(&m), y]).unwrap()])
            .unwrap();
        let (lift, mm) = cotangent_lift(&rho).unwrap();
        let s = SymplecticQStructure::new(&cc, GradedPolynomial::zero(cc.chart())).unwrap();
        let problem = ReductionProblem::new(s, lift, mm, cc.clone(), (0..4).map(|i| cc.coordinate(i)).collect()).unwrap();
        assert!(matches!(reduce(&problem), Err(ReductionError::Regularity { .. })));
    }
}
