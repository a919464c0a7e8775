//! Moment-map reduction of symplectic Q-structures on shifted cotangent
//! charts at the zero level, and the cotangent-lift pipeline for homotopy
//! Poisson quotients.
//!
//! Ideals are handled by substitution: every moment generator must be
//! solvable for one coordinate, and membership is decided by the resulting
//! normal form. Quotients are declared by the caller and verified here.

mod elimination;
mod quotient;

use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::graded_algebra::{
    AlgebraError, AlgebraMorphism, Chart, Derivation, GradedPolynomial, Homogeneity,
};
use crate::homotopy_poisson::{HomotopyPoissonStructure, PoissonError};
use crate::lie_structures::{GradedLieAlgebra, HomotopyLieBialgebra, LieError};
use crate::report::CheckReport;
use crate::shifted_cotangent::{CotangentChart, CotangentError};

pub use elimination::{evaluate, Elimination, EliminationFailure, Expressor};
pub use quotient::{
    reduce, verify_quotient_theorem, QuotientComparison, ReducedStructure, ReductionProblem,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("expected {expected} {what}, got {found}")]
    Count {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{what} has degree {found}, expected {expected}")]
    Degree {
        what: String,
        expected: i64,
        found: String,
    },
    #[error("bialgebra has shift {bialgebra}, the symplectic chart has shift {symplectic}")]
    ShiftMismatch { bialgebra: i64, symplectic: i64 },
    #[error("{0} lives on the wrong chart")]
    ChartMismatch(String),
    #[error("Hamiltonian does not square to zero: {{H, H}} = {0}")]
    NotHomological(String),
    #[error("ρ is not an action on ({0}, {1}): residual {2}")]
    NotAnAction(String, String, String),
    #[error("bialgebra is not flat: d̂ has a constant term on `{0}`")]
    NonFlat(String),
    #[error("moment generator for `{generator}` is not regular: {reason}")]
    Regularity { generator: String, reason: String },
    #[error("ideal is not coisotropic: {{μ*{0}, μ*{1}}} reduces to {2}")]
    NotCoisotropic(String, String, String),
    #[error("quotient image of `{function}` is not invariant under `{v}`: {residual}")]
    NotInvariant {
        function: String,
        v: String,
        residual: String,
    },
    #[error("quotient image of `{function}` is not in the normalizer: {{f, μ*{v}}} reduces to {residual}")]
    NotInNormalizer {
        function: String,
        v: String,
        residual: String,
    },
    #[error("quotient coordinate `{0}` cannot be inverted: {1}")]
    QuotientChart(String, String),
    #[error("{what} is not expressible in quotient coordinates, left with {residual}")]
    NotExpressible { what: String, residual: String },
    #[error("no image declared for quotient momentum `{0}`")]
    MissingMomentumImage(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Cotangent(#[from] CotangentError),
    #[error(transparent)]
    Poisson(#[from] PoissonError),
    #[error(transparent)]
    Lie(#[from] LieError),
}

fn describe(p: &GradedPolynomial) -> String {
    match p.homogeneity() {
        Homogeneity::Zero => "zero".into(),
        Homogeneity::Degree(d) => d.to_string(),
        Homogeneity::Mixed => "mixed".into(),
    }
}

fn require_degree(what: impl Into<String>, p: &GradedPolynomial, expected: i64) -> Result<(), ReductionError> {
    if p.is_homogeneous_of(expected) {
        Ok(())
    } else {
        Err(ReductionError::Degree {
            what: what.into(),
            expected,
            found: describe(p),
        })
    }
}

/// `f ↦ {h, f}` as a derivation of the given degree, also when `h = 0`.
fn hamiltonian_of_degree(
    cc: &CotangentChart,
    h: &GradedPolynomial,
    degree: i64,
) -> Result<Derivation, AlgebraError> {
    if h.is_zero() {
        Ok(Derivation::zero(cc.chart(), degree))
    } else {
        cc.hamiltonian_vf(h)
    }
}

/// A degree-`n` symplectic chart with `Q = {H, ·}` for `H` of degree `n + 1`
/// and `{H, H} = 0`.
#[derive(Clone, Debug)]
pub struct SymplecticQStructure {
    cc: CotangentChart,
    hamiltonian: GradedPolynomial,
    q: Derivation,
}

impl PartialEq for SymplecticQStructure {
    fn eq(&self, other: &Self) -> bool {
        self.cc == other.cc && self.hamiltonian == other.hamiltonian
    }
}

impl SymplecticQStructure {
    pub fn new(cc: &CotangentChart, hamiltonian: GradedPolynomial) -> Result<Self, ReductionError> {
        if **hamiltonian.chart() != **cc.chart() {
            return Err(ReductionError::ChartMismatch("Hamiltonian".into()));
        }
        if !hamiltonian.is_zero() {
            require_degree("Hamiltonian", &hamiltonian, cc.shift() + 1)?;
        }
        let square = cc.bracket(&hamiltonian, &hamiltonian)?;
        if !square.is_zero() {
            return Err(ReductionError::NotHomological(square.to_string()));
        }
        let q = hamiltonian_of_degree(cc, &hamiltonian, 1)?;
        Ok(SymplecticQStructure {
            cc: cc.clone(),
            hamiltonian,
            q,
        })
    }

    /// `T*[n]M` with `Q = d_π`.
    pub fn from_homotopy_poisson(hp: &HomotopyPoissonStructure) -> Self {
        SymplecticQStructure {
            cc: hp.cotangent().clone(),
            hamiltonian: hp.pi().clone(),
            q: hp.differential(),
        }
    }

    pub fn cotangent(&self) -> &CotangentChart {
        &self.cc
    }

    pub fn chart(&self) -> &Arc<Chart> {
        self.cc.chart()
    }

    pub fn shift(&self) -> i64 {
        self.cc.shift()
    }

    pub fn hamiltonian(&self) -> &GradedPolynomial {
        &self.hamiltonian
    }

    pub fn q(&self) -> &Derivation {
        &self.q
    }
}

/// `ρ(v)` for each basis element of the Lie algebra of `b`, as derivations
/// of degree `|v|` on `chart`.
#[derive(Clone, Debug)]
pub struct InfinitesimalAction {
    b: HomotopyLieBialgebra,
    chart: Arc<Chart>,
    rho: Vec<Derivation>,
}

impl InfinitesimalAction {
    /// Validates degrees and `ρ([v, w]) = [ρ(v), ρ(w)]` on basis pairs.
    pub fn new(
        b: HomotopyLieBialgebra,
        chart: &Arc<Chart>,
        rho: Vec<Derivation>,
    ) -> Result<Self, ReductionError> {
        let g = b.algebra();
        if rho.len() != g.dim() {
            return Err(ReductionError::Count {
                what: "action images",
                expected: g.dim(),
                found: rho.len(),
            });
        }
        for (v, r) in rho.iter().enumerate() {
            if **r.chart() != **chart {
                return Err(ReductionError::ChartMismatch(format!("ρ({})", g.name(v))));
            }
            if r.degree() != g.degree(v) {
                return Err(ReductionError::Degree {
                    what: format!("ρ({})", g.name(v)),
                    expected: g.degree(v),
                    found: r.degree().to_string(),
                });
            }
        }
        let rho: Vec<Derivation> = rho
            .into_iter()
            .map(|r| Derivation::new(chart, r.degree(), r.images().to_vec()))
            .collect::<Result<_, _>>()?;
        for v in 0..g.dim() {
            for w in v..g.dim() {
                let lhs = combination(g, chart, &rho, g.bracket_basis(v, w), g.degree(v) + g.degree(w))?;
                let rhs = rho[v].commutator(&rho[w])?;
                let diff = lhs.add(&rhs.scale(&crate::graded_algebra::rational(-1)))?;
                if let Some(i) = (0..chart.len()).find(|&i| !diff.image(i).is_zero()) {
                    return Err(ReductionError::NotAnAction(
                        g.name(v).to_string(),
                        g.name(w).to_string(),
                        format!("{} on {}", diff.image(i), chart.name(i)),
                    ));
                }
            }
        }
        Ok(InfinitesimalAction {
            b,
            chart: chart.clone(),
            rho,
        })
    }

    pub fn zero(b: HomotopyLieBialgebra, chart: &Arc<Chart>) -> Self {
        let rho = b
            .algebra()
            .degrees()
            .iter()
            .map(|&d| Derivation::zero(chart, d))
            .collect();
        InfinitesimalAction {
            b,
            chart: chart.clone(),
            rho,
        }
    }

    pub fn bialgebra(&self) -> &HomotopyLieBialgebra {
        &self.b
    }

    pub fn algebra(&self) -> &GradedLieAlgebra {
        self.b.algebra()
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn rho(&self, v: usize) -> &Derivation {
        &self.rho[v]
    }

    pub fn rhos(&self) -> &[Derivation] {
        &self.rho
    }
}

/// `Σ_k c_k ρ(v_k)` as a derivation of the given degree.
fn combination(
    g: &GradedLieAlgebra,
    chart: &Arc<Chart>,
    rho: &[Derivation],
    coefficients: &[crate::graded_algebra::Rational],
    degree: i64,
) -> Result<Derivation, AlgebraError> {
    let mut out = Derivation::zero(chart, degree);
    for (k, c) in coefficients.iter().enumerate() {
        if !c.is_zero() {
            debug_assert_eq!(g.degree(k), degree);
            out = out.add(&rho[k].scale(c))?;
        }
    }
    Ok(out)
}

/// `v ↦ μ*(v)`, extended multiplicatively to functions on `g*[n]`.
#[derive(Clone, Debug)]
pub struct MomentMap {
    cc: CotangentChart,
    names: Vec<String>,
    pullback: AlgebraMorphism,
}

impl MomentMap {
    pub fn new(
        cc: &CotangentChart,
        b: &HomotopyLieBialgebra,
        images: Vec<GradedPolynomial>,
    ) -> Result<Self, ReductionError> {
        if b.shift() != cc.shift() {
            return Err(ReductionError::ShiftMismatch {
                bialgebra: b.shift(),
                symplectic: cc.shift(),
            });
        }
        let g = b.algebra();
        if images.len() != g.dim() {
            return Err(ReductionError::Count {
                what: "moment images",
                expected: g.dim(),
                found: images.len(),
            });
        }
        for (v, img) in images.iter().enumerate() {
            if **img.chart() != **cc.chart() {
                return Err(ReductionError::ChartMismatch(format!("μ*{}", g.name(v))));
            }
            if !img.is_zero() {
                require_degree(format!("μ*{}", g.name(v)), img, g.degree(v) + cc.shift())?;
            }
        }
        let images = images
            .iter()
            .map(|p| p.transfer(cc.chart()))
            .collect::<Result<Vec<_>, _>>()?;
        let pullback = AlgebraMorphism::new(b.dual().chart(), cc.chart(), images)?;
        Ok(MomentMap {
            cc: cc.clone(),
            names: g.names().to_vec(),
            pullback,
        })
    }

    pub fn cotangent(&self) -> &CotangentChart {
        &self.cc
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn images(&self) -> &[GradedPolynomial] {
        self.pullback.images()
    }

    pub fn image(&self, v: usize) -> &GradedPolynomial {
        self.pullback.image(v)
    }

    /// `μ*` applied to a function on `g*[n]`.
    pub fn pull_back(&self, f: &GradedPolynomial) -> Result<GradedPolynomial, AlgebraError> {
        self.pullback.apply(f)
    }

    /// `{μ*v, μ*w} = μ*[v, w]` on all basis pairs, one entry per pair.
    pub fn check_equivariance(&self, g: &GradedLieAlgebra) -> Result<CheckReport, ReductionError> {
        let mut report = CheckReport::new();
        for v in 0..g.dim() {
            for w in v..g.dim() {
                let lhs = self.cc.bracket(self.image(v), self.image(w))?;
                let mut rhs = GradedPolynomial::zero(self.cc.chart());
                for (k, c) in g.bracket_basis(v, w).iter().enumerate() {
                    if !c.is_zero() {
                        rhs += &self.image(k).scale(c);
                    }
                }
                report.residual(
                    format!("equivariance:{},{}", g.name(v), g.name(w)),
                    &lhs - &rhs,
                    "",
                );
            }
        }
        Ok(report)
    }
}

/// The fiber-linear symbol `Σ_i ρ(x_i) p_i` of a vector field on the base.
pub fn symbol(cc: &CotangentChart, field: &Derivation) -> Result<GradedPolynomial, ReductionError> {
    if **field.chart() != **cc.base() {
        return Err(ReductionError::ChartMismatch("vector field".into()));
    }
    let mut out = GradedPolynomial::zero(cc.chart());
    for i in 0..cc.base_dim() {
        let coefficient = field.image(i);
        if !coefficient.is_zero() {
            out += &(&cc.lift(coefficient)? * &cc.momentum(i));
        }
    }
    Ok(out)
}

/// Lifts an action on the base to `T*[n]M` (`n` the shift of the
/// bialgebra): `μ*(v)` is the symbol of `ρ(v)` and `ρ̃(v) = {μ*v, ·}`.
pub fn cotangent_lift(rho: &InfinitesimalAction) -> Result<(InfinitesimalAction, MomentMap), ReductionError> {
    let b = rho.bialgebra();
    let cc = CotangentChart::build(rho.chart(), b.shift())?;
    let g = b.algebra();
    let mut images = Vec::with_capacity(g.dim());
    let mut lifted = Vec::with_capacity(g.dim());
    for v in 0..g.dim() {
        let mu = symbol(&cc, rho.rho(v))?;
        let field = hamiltonian_of_degree(&cc, &mu, g.degree(v))?;
        debug_assert!((0..cc.base_dim())
            .all(|i| *field.image(i) == cc.lift(rho.rho(v).image(i)).unwrap()));
        images.push(mu);
        lifted.push(field);
    }
    let action = InfinitesimalAction::new(b.clone(), cc.chart(), lifted)?;
    let mm = MomentMap::new(&cc, b, images)?;
    Ok((action, mm))
}

/// `Q_S(μ*v) = μ*(d̂ ê_v)` for every basis element, one entry `q-morphism:v`
/// each.
pub fn check_q_morphism_moment(
    mm: &MomentMap,
    s: &SymplecticQStructure,
    b: &HomotopyLieBialgebra,
) -> Result<CheckReport, ReductionError> {
    if mm.cotangent() != s.cotangent() {
        return Err(ReductionError::ChartMismatch("moment map".into()));
    }
    let mut report = CheckReport::new();
    for v in 0..b.algebra().dim() {
        let lhs = s.q().apply(mm.image(v))?;
        let rhs = mm.pull_back(b.dhat().image(v))?;
        report.residual(format!("q-morphism:{}", b.algebra().name(v)), &lhs - &rhs, "");
    }
    Ok(report)
}

/// `ρ̂(d̂ ê_v) = [π, ρ̂(ê_v)]` on basis elements, where `ρ̂` sends `ê_v` to
/// the symbol of `ρ(v)`; one entry `action-morphism:v` each.
pub fn check_action_morphism(
    rho: &InfinitesimalAction,
    hp: &HomotopyPoissonStructure,
) -> Result<CheckReport, ReductionError> {
    let cc = hp.cotangent();
    if **rho.chart() != **cc.base() {
        return Err(ReductionError::ChartMismatch("action".into()));
    }
    let b = rho.bialgebra();
    if b.shift() != cc.shift() {
        return Err(ReductionError::ShiftMismatch {
            bialgebra: b.shift(),
            symplectic: cc.shift(),
        });
    }
    let g = b.algebra();
    let symbols = (0..g.dim())
        .map(|v| symbol(cc, rho.rho(v)))
        .collect::<Result<Vec<_>, _>>()?;
    let rho_hat = AlgebraMorphism::new(b.dual().chart(), cc.chart(), symbols)?;
    let mut report = CheckReport::new();
    for v in 0..g.dim() {
        let lhs = rho_hat.apply(b.dhat().image(v))?;
        let rhs = cc.bracket(hp.pi(), rho_hat.image(v))?;
        report.residual(format!("action-morphism:{}", g.name(v)), &lhs - &rhs, "");
    }
    Ok(report)
}
