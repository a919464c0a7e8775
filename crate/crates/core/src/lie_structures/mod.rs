//! Finite-dimensional graded Lie algebras given by structure constants,
//! homotopy Lie bialgebras of degree `n`, differential graded Lie algebras,
//! and two sources of examples: left-central Courant algebras and matched
//! pairs.

mod courant;
mod matched_pair;

pub use courant::{courant_to_dgla, courant_to_dgla_with_lifts, CourantAlgebraData, CourantDgla};
pub use matched_pair::{is_matched_pair, matched_pair_to_bialgebra, MatchedPairData};

use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::graded_algebra::{
    format_rational, parity, rational, AlgebraError, Chart, Coordinate, Derivation,
    GradedPolynomial, PoissonBracket, Rational,
};
use crate::report::CheckReport;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("unknown basis element `{0}`")]
    UnknownBasis(String),
    #[error("bracket [{0}, {1}] has a component along `{2}` of the wrong degree")]
    DegreeIncompatible(String, String, String),
    #[error("brackets [{0}, {1}] and [{1}, {0}] are not graded antisymmetric")]
    NotAntisymmetric(String, String),
    #[error("vector has length {found}, expected {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("expected an ordinary Lie algebra, `{0}` has degree {1}")]
    NotOrdinary(String, i64),
    #[error("Courant axiom fails: {0}")]
    CourantAxiom(String),
    #[error("not left-central: [[{0}, {1}]] = {2}")]
    NotLeftCentral(String, String, String),
    #[error("projection is not surjective (rank {rank}, dimension {dim})")]
    NotSurjective { rank: usize, dim: usize },
    #[error("lift of `{0}` does not project to it")]
    BadLift(String),
    #[error("not an action: graded Jacobi fails on ({0}, {1}, {2})")]
    NotAnAction(String, String, String),
    #[error("differential image of `{0}` has the wrong degree")]
    DifferentialDegree(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Structure constants `c[i][j][k]` of `[e_i, e_j] = Σ_k c[i][j][k] e_k`.
pub type StructureConstants = Vec<Vec<Vec<Rational>>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedLieAlgebra {
    names: Vec<String>,
    degrees: Vec<i64>,
    constants: StructureConstants,
}

/// Outcome of the exhaustive Jacobi check, with the first failing triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiCheck {
    pub holds: bool,
    pub witness: Option<(usize, usize, usize)>,
    pub residual: Vec<Rational>,
}

impl GradedLieAlgebra {
    /// Builds from brackets of basis pairs. A pair given in one order fixes the
    /// other by graded antisymmetry; pairs never mentioned bracket to zero.
    pub fn new(
        basis: Vec<(String, i64)>,
        brackets: Vec<(usize, usize, Vec<Rational>)>,
    ) -> Result<Self, LieError> {
        let dim = basis.len();
        let (names, degrees): (Vec<String>, Vec<i64>) = basis.into_iter().unzip();
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(AlgebraError::DuplicateCoordinate(name.clone()).into());
            }
        }
        let mut given: Vec<Vec<Option<Vec<Rational>>>> = vec![vec![None; dim]; dim];
        for (i, j, v) in brackets {
            if v.len() != dim {
                return Err(LieError::Dimension {
                    expected: dim,
                    found: v.len(),
                });
            }
            for (k, c) in v.iter().enumerate() {
                if !c.is_zero() && degrees[k] != degrees[i] + degrees[j] {
                    return Err(LieError::DegreeIncompatible(
                        names[i].clone(),
                        names[j].clone(),
                        names[k].clone(),
                    ));
                }
            }
            let sign = antisymmetry_sign(degrees[i], degrees[j]);
            let mirror: Vec<Rational> = v.iter().map(|c| c * &sign).collect();
            for (a, b, val) in [(i, j, v), (j, i, mirror)] {
                match &given[a][b] {
                    Some(existing) if *existing != val => {
                        return Err(LieError::NotAntisymmetric(names[i].clone(), names[j].clone()))
                    }
                    _ => given[a][b] = Some(val),
                }
            }
        }
        let constants = given
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|v| v.unwrap_or_else(|| vec![Rational::zero(); dim]))
                    .collect()
            })
            .collect();
        Ok(GradedLieAlgebra {
            names,
            degrees,
            constants,
        })
    }

    pub fn abelian(basis: Vec<(String, i64)>) -> Self {
        GradedLieAlgebra::new(basis, Vec::new()).expect("no brackets to validate")
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn constants(&self) -> &StructureConstants {
        &self.constants
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &[Rational] {
        &self.constants[i][j]
    }

    pub fn bracket(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let dim = self.dim();
        let mut out = vec![Rational::zero(); dim];
        for i in (0..dim).filter(|&i| !a[i].is_zero()) {
            for j in (0..dim).filter(|&j| !b[j].is_zero()) {
                let ab = &a[i] * &b[j];
                for (k, c) in self.constants[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &ab * c;
                    }
                }
            }
        }
        out
    }

    pub fn unit(&self, i: usize) -> Vec<Rational> {
        unit_vector(self.dim(), i)
    }

    /// `[a, [b, c]] = [[a, b], c] + (-1)^{|a||b|} [b, [a, c]]` on all basis
    /// triples.
    pub fn check_graded_jacobi(&self) -> JacobiCheck {
        let dim = self.dim();
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    let r = self.jacobiator(a, b, c);
                    if r.iter().any(|x| !x.is_zero()) {
                        return JacobiCheck {
                            holds: false,
                            witness: Some((a, b, c)),
                            residual: r,
                        };
                    }
                }
            }
        }
        JacobiCheck {
            holds: true,
            witness: None,
            residual: vec![Rational::zero(); dim],
        }
    }

    fn jacobiator(&self, a: usize, b: usize, c: usize) -> Vec<Rational> {
        let (ea, eb, ec) = (self.unit(a), self.unit(b), self.unit(c));
        let lhs = self.bracket(&ea, &self.bracket(&eb, &ec));
        let r1 = self.bracket(&self.bracket(&ea, &eb), &ec);
        let r2 = self.bracket(&eb, &self.bracket(&ea, &ec));
        let s = if parity(self.degrees[a] * self.degrees[b]) { rational(-1) } else { rational(1) };
        (0..self.dim())
            .map(|k| &lhs[k] - &r1[k] - &s * &r2[k])
            .collect()
    }

    /// Renders `Σ v_k e_k` with basis names, `0` for the zero vector.
    pub fn render_vector(&self, v: &[Rational]) -> String {
        render_combination(&self.names, v)
    }

    /// Functions on `g*[n]`: one coordinate `ê_i` of degree `|e_i| + n` per
    /// basis element, with the degree `-n` bracket `{ê_i, ê_j} = Σ c^k_ij ê_k`.
    pub fn realize_shifted_dual(&self, n: i64) -> Result<ShiftedDual, LieError> {
        let coords = self
            .names
            .iter()
            .zip(&self.degrees)
            .map(|(name, d)| Coordinate::new(name.clone(), d + n))
            .collect();
        let chart = Chart::new(coords)?;
        let mut entries = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let v = &self.constants[i][j];
                if v.iter().all(Zero::is_zero) {
                    continue;
                }
                entries.push((i, j, linear_polynomial(&chart, v)));
            }
        }
        let bracket = PoissonBracket::from_generators(&chart, n, entries)?;
        Ok(ShiftedDual { chart, bracket })
    }
}

/// `-(-1)^{|a||b|}`, the factor relating `[b, a]` to `[a, b]`.
fn antisymmetry_sign(a: i64, b: i64) -> Rational {
    if parity(a * b) {
        rational(1)
    } else {
        rational(-1)
    }
}

pub(crate) fn unit_vector(dim: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); dim];
    v[i] = rational(1);
    v
}

pub(crate) fn render_combination(names: &[String], v: &[Rational]) -> String {
    let mut out = String::new();
    for (name, c) in names.iter().zip(v) {
        if c.is_zero() {
            continue;
        }
        let negative = *c < Rational::zero();
        let abs = if negative { -c } else { c.clone() };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if abs != rational(1) {
            out.push_str(&format_rational(&abs));
            out.push('*');
        }
        out.push_str(name);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// `Σ v_k x_k` on a chart.
pub(crate) fn linear_polynomial(chart: &Arc<Chart>, v: &[Rational]) -> GradedPolynomial {
    let mut p = GradedPolynomial::zero(chart);
    for (k, c) in v.iter().enumerate() {
        if !c.is_zero() {
            p += &GradedPolynomial::coordinate(chart, k).scale(c);
        }
    }
    p
}

/// The chart of `g*[n]` with its bracket.
#[derive(Clone, Debug)]
pub struct ShiftedDual {
    chart: Arc<Chart>,
    bracket: PoissonBracket,
}

impl ShiftedDual {
    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn poisson_bracket(&self) -> &PoissonBracket {
        &self.bracket
    }

    pub fn shift(&self) -> i64 {
        self.bracket.shift()
    }

    pub fn bracket(
        &self,
        a: &GradedPolynomial,
        b: &GradedPolynomial,
    ) -> Result<GradedPolynomial, AlgebraError> {
        self.bracket.bracket(a, b)
    }

    pub fn coordinate(&self, i: usize) -> GradedPolynomial {
        GradedPolynomial::coordinate(&self.chart, i)
    }
}

/// A graded Lie algebra `g` with a differential `d̂` on `S(g[-n])`.
#[derive(Clone, Debug)]
pub struct HomotopyLieBialgebra {
    g: GradedLieAlgebra,
    dual: ShiftedDual,
    dhat: Derivation,
}

impl HomotopyLieBialgebra {
    /// Pairs `g` with a derivation on the chart of `g*[n]`; nothing beyond
    /// the chart is validated here, see [`HomotopyLieBialgebra::check`].
    pub fn new(g: GradedLieAlgebra, n: i64, dhat: Derivation) -> Result<Self, LieError> {
        let dual = g.realize_shifted_dual(n)?;
        if **dhat.chart() != **dual.chart() {
            return Err(AlgebraError::ChartMismatch.into());
        }
        let dhat = Derivation::new(dual.chart(), dhat.degree(), dhat.images().to_vec())?;
        Ok(HomotopyLieBialgebra { g, dual, dhat })
    }

    /// Builds `d̂` from images of the coordinates `ê_i`, given on the chart of
    /// `g*[n]` and keyed by basis name.
    pub fn from_images(
        g: GradedLieAlgebra,
        n: i64,
        images: Vec<GradedPolynomial>,
    ) -> Result<Self, LieError> {
        let dual = g.realize_shifted_dual(n)?;
        let images = images
            .iter()
            .map(|p| p.transfer(dual.chart()))
            .collect::<Result<Vec<_>, _>>()?;
        let dhat = Derivation::new(dual.chart(), 1, images)?;
        Ok(HomotopyLieBialgebra { g, dual, dhat })
    }

    pub fn zero(g: GradedLieAlgebra, n: i64) -> Result<Self, LieError> {
        let dual = g.realize_shifted_dual(n)?;
        let dhat = Derivation::zero(dual.chart(), 1);
        Ok(HomotopyLieBialgebra { g, dual, dhat })
    }

    /// The linear `d̂` encoding a differential `d` of `g`.
    pub fn from_dgla(dgla: &Dgla, n: i64) -> Result<Self, LieError> {
        let g = dgla.algebra().clone();
        let dual = g.realize_shifted_dual(n)?;
        let images = (0..g.dim())
            .map(|i| linear_polynomial(dual.chart(), &dgla.differential()[i]))
            .collect();
        let dhat = Derivation::new(dual.chart(), 1, images)?;
        Ok(HomotopyLieBialgebra { g, dual, dhat })
    }

    pub fn algebra(&self) -> &GradedLieAlgebra {
        &self.g
    }

    pub fn shift(&self) -> i64 {
        self.dual.shift()
    }

    pub fn dual(&self) -> &ShiftedDual {
        &self.dual
    }

    pub fn dhat(&self) -> &Derivation {
        &self.dhat
    }

    /// No constant terms in `d̂ ê_i`.
    pub fn is_flat(&self) -> bool {
        self.dhat.images().iter().all(|p| p.constant_term().is_zero())
    }

    /// Degree, square-zero and bracket-derivation checks, each reported.
    pub fn check(&self) -> CheckReport {
        let mut report = CheckReport::new();
        let jacobi = self.g.check_graded_jacobi();
        match jacobi.witness {
            None => report.pass("lie-jacobi", ""),
            Some((a, b, c)) => report.fail(
                "lie-jacobi",
                self.g.render_vector(&jacobi.residual),
                format!("({}, {}, {})", self.g.name(a), self.g.name(b), self.g.name(c)),
            ),
        }
        if self.dhat.degree() == 1 {
            report.pass("degree", "");
        } else {
            report.fail("degree", self.dhat.degree().to_string(), "expected 1");
        }
        let chart = self.dual.chart();
        match self.dhat.commutator(&self.dhat) {
            Ok(sq) => match (0..chart.len()).find(|&i| !sq.image(i).is_zero()) {
                None => report.pass("square-zero", ""),
                Some(i) => report.fail("square-zero", sq.image(i).to_string(), chart.name(i)),
            },
            Err(e) => report.fail("square-zero", e.to_string(), ""),
        }
        let n = self.shift();
        let mut failure = None;
        'pairs: for i in 0..chart.len() {
            for j in 0..chart.len() {
                match self.derivation_residual(i, j, n) {
                    Ok(r) if r.is_zero() => {}
                    Ok(r) => {
                        failure = Some((i, j, r.to_string()));
                        break 'pairs;
                    }
                    Err(e) => {
                        failure = Some((i, j, e.to_string()));
                        break 'pairs;
                    }
                }
            }
        }
        match failure {
            None => report.pass("bracket-derivation", ""),
            Some((i, j, r)) => report.fail(
                "bracket-derivation",
                r,
                format!("({}, {})", chart.name(i), chart.name(j)),
            ),
        }
        report
    }

    /// `d̂{ê_i, ê_j} - {d̂ ê_i, ê_j} - (-1)^{|ê_i|-n} {ê_i, d̂ ê_j}`.
    fn derivation_residual(&self, i: usize, j: usize, n: i64) -> Result<GradedPolynomial, AlgebraError> {
        let (ei, ej) = (self.dual.coordinate(i), self.dual.coordinate(j));
        let lhs = self.dhat.apply(&self.dual.bracket(&ei, &ej)?)?;
        let first = self.dual.bracket(self.dhat.image(i), &ej)?;
        let second = self.dual.bracket(&ei, self.dhat.image(j))?;
        let sign = if parity(self.dual.chart().degree(i) - n) { rational(-1) } else { rational(1) };
        Ok(&(&lhs - &first) - &second.scale(&sign))
    }
}

pub fn check_bialgebra(b: &HomotopyLieBialgebra) -> CheckReport {
    b.check()
}

/// A graded Lie algebra with a linear differential: `d[i]` is `d e_i` in the
/// basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dgla {
    algebra: GradedLieAlgebra,
    d: Vec<Vec<Rational>>,
}

impl Dgla {
    /// Requires `d e_i` to lie in degree `|e_i| + 1`.
    pub fn new(algebra: GradedLieAlgebra, d: Vec<Vec<Rational>>) -> Result<Self, LieError> {
        let dim = algebra.dim();
        if d.len() != dim {
            return Err(LieError::Dimension {
                expected: dim,
                found: d.len(),
            });
        }
        for (i, v) in d.iter().enumerate() {
            if v.len() != dim {
                return Err(LieError::Dimension {
                    expected: dim,
                    found: v.len(),
                });
            }
            if v
                .iter()
                .enumerate()
                .any(|(k, c)| !c.is_zero() && algebra.degree(k) != algebra.degree(i) + 1)
            {
                return Err(LieError::DifferentialDegree(algebra.name(i).to_string()));
            }
        }
        Ok(Dgla { algebra, d })
    }

    pub fn algebra(&self) -> &GradedLieAlgebra {
        &self.algebra
    }

    pub fn differential(&self) -> &[Vec<Rational>] {
        &self.d
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        let dim = self.algebra.dim();
        let mut out = vec![Rational::zero(); dim];
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for k in 0..dim {
                out[k] += c * &self.d[i][k];
            }
        }
        out
    }

    /// Graded Jacobi, `d² = 0` and `d[a, b] = [da, b] + (-1)^{|a|} [a, db]`
    /// on basis elements.
    pub fn check(&self) -> CheckReport {
        let g = &self.algebra;
        let mut report = CheckReport::new();
        let jacobi = g.check_graded_jacobi();
        match jacobi.witness {
            None => report.pass("lie-jacobi", ""),
            Some((a, b, c)) => report.fail(
                "lie-jacobi",
                g.render_vector(&jacobi.residual),
                format!("({}, {}, {})", g.name(a), g.name(b), g.name(c)),
            ),
        }
        match (0..g.dim()).find(|&i| self.apply(&self.d[i]).iter().any(|c| !c.is_zero())) {
            None => report.pass("square-zero", ""),
            Some(i) => report.fail(
                "square-zero",
                g.render_vector(&self.apply(&self.d[i])),
                g.name(i).to_string(),
            ),
        }
        let mut failure = None;
        'pairs: for a in 0..g.dim() {
            for b in 0..g.dim() {
                let (ea, eb) = (g.unit(a), g.unit(b));
                let lhs = self.apply(&g.bracket(&ea, &eb));
                let r1 = g.bracket(&self.d[a], &eb);
                let r2 = g.bracket(&ea, &self.d[b]);
                let s = if parity(g.degree(a)) { rational(-1) } else { rational(1) };
                let r: Vec<Rational> = (0..g.dim()).map(|k| &lhs[k] - &r1[k] - &s * &r2[k]).collect();
                if r.iter().any(|c| !c.is_zero()) {
                    failure = Some((a, b, r));
                    break 'pairs;
                }
            }
        }
        match failure {
            None => report.pass("bracket-derivation", ""),
            Some((a, b, r)) => report.fail(
                "bracket-derivation",
                g.render_vector(&r),
                format!("({}, {})", g.name(a), g.name(b)),
            ),
        }
        report
    }
}
