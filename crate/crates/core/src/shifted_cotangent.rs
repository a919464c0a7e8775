//! Shifted cotangent charts `T*[n]M` and their canonical degree `-n` bracket.
//!
//! The total chart lists the base coordinates first and then one momentum
//! `p_<name>` per base coordinate, of degree `n - |x|`. The bracket is fixed by
//! `{p_i, x_j} = δ_ij` together with graded antisymmetry and the Leibniz
//! rules; for `n = 1` it is the Schouten bracket of multivector fields.

use std::sync::Arc;

use thiserror::Error;

use crate::graded_algebra::{
    parity, rational, AlgebraError, Chart, Coordinate, Derivation, GradedPolynomial, Monomial,
    PoissonBracket,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CotangentError {
    #[error("shift degree must be at least 1, got {0}")]
    InvalidShift(i64),
    #[error("momentum name `{0}` collides with a base coordinate")]
    NameCollision(String),
    #[error("the Schouten bracket needs shift 1, chart has shift {0}")]
    WrongShift(i64),
    #[error("expected a base function, found momenta in `{0}`")]
    ContainsMomenta(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Name given to the momentum conjugate to a base coordinate.
pub fn momentum_name(base: &str) -> String {
    format!("p_{base}")
}

/// Polynomials on `T*[n]M` viewed as multivector fields.
pub type MultiVector = GradedPolynomial;

#[derive(Clone, Debug)]
pub struct CotangentChart {
    base: Arc<Chart>,
    total: Arc<Chart>,
    shift: i64,
    bracket: PoissonBracket,
}

impl PartialEq for CotangentChart {
    fn eq(&self, other: &Self) -> bool {
        self.shift == other.shift && self.base == other.base
    }
}

impl CotangentChart {
    pub fn build(base: &Arc<Chart>, n: i64) -> Result<Self, CotangentError> {
        if n < 1 {
            return Err(CotangentError::InvalidShift(n));
        }
        let mut coords: Vec<Coordinate> = base.coordinates().to_vec();
        for c in base.coordinates() {
            let name = momentum_name(c.name());
            if base.index_of(&name).is_some() {
                return Err(CotangentError::NameCollision(name));
            }
            coords.push(Coordinate::new(name, n - c.degree()));
        }
        let total = Chart::new(coords)?;
        let dim = base.len();
        let mut entries = Vec::with_capacity(dim);
        for i in 0..dim {
            entries.push((dim + i, i, GradedPolynomial::one(&total)));
        }
        let bracket = PoissonBracket::from_generators(&total, n, entries)?;
        Ok(CotangentChart {
            base: base.clone(),
            total,
            shift: n,
            bracket,
        })
    }

    pub fn base(&self) -> &Arc<Chart> {
        &self.base
    }

    /// The total chart: base coordinates followed by momenta.
    pub fn chart(&self) -> &Arc<Chart> {
        &self.total
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn base_dim(&self) -> usize {
        self.base.len()
    }

    pub fn momentum_index(&self, base_index: usize) -> usize {
        self.base.len() + base_index
    }

    pub fn is_momentum(&self, index: usize) -> bool {
        index >= self.base.len()
    }

    pub fn poisson_bracket(&self) -> &PoissonBracket {
        &self.bracket
    }

    /// Number of momentum factors in a monomial, with multiplicity.
    pub fn momentum_length(&self, m: &Monomial) -> u32 {
        m.exponents()[self.base.len()..].iter().sum()
    }

    pub fn coordinate(&self, i: usize) -> GradedPolynomial {
        GradedPolynomial::coordinate(&self.total, i)
    }

    pub fn var(&self, name: &str) -> Result<GradedPolynomial, AlgebraError> {
        GradedPolynomial::var(&self.total, name)
    }

    pub fn momentum(&self, base_index: usize) -> GradedPolynomial {
        self.coordinate(self.momentum_index(base_index))
    }

    /// Embeds a base function into the total chart. Polynomials already on
    /// the total chart are returned unchanged.
    pub fn lift(&self, f: &GradedPolynomial) -> Result<GradedPolynomial, AlgebraError> {
        if **f.chart() == *self.total {
            return Ok(f.clone());
        }
        if **f.chart() != *self.base {
            return Err(AlgebraError::ChartMismatch);
        }
        let extra = self.base.len();
        Ok(GradedPolynomial::from_terms(
            &self.total,
            f.terms().map(|(m, c)| {
                let mut e = m.exponents().to_vec();
                e.resize(e.len() + extra, 0);
                (e, c.clone())
            }),
        ))
    }

    /// Restricts a momentum-free polynomial on the total chart to the base.
    pub fn restrict(&self, f: &GradedPolynomial) -> Result<GradedPolynomial, CotangentError> {
        if **f.chart() == *self.base {
            return Ok(f.clone());
        }
        if **f.chart() != *self.total {
            return Err(AlgebraError::ChartMismatch.into());
        }
        if f.terms().any(|(m, _)| self.momentum_length(m) > 0) {
            return Err(CotangentError::ContainsMomenta(f.to_string()));
        }
        let dim = self.base.len();
        Ok(GradedPolynomial::from_terms(
            &self.base,
            f.terms()
                .map(|(m, c)| (m.exponents()[..dim].to_vec(), c.clone())),
        ))
    }

    /// Lifts a base function and checks it has no momenta if it was given
    /// on the total chart.
    pub fn base_function(&self, f: &GradedPolynomial) -> Result<GradedPolynomial, CotangentError> {
        let lifted = self.lift(f)?;
        if lifted.terms().any(|(m, _)| self.momentum_length(m) > 0) {
            return Err(CotangentError::ContainsMomenta(f.to_string()));
        }
        Ok(lifted)
    }

    /// The canonical degree `-n` bracket.
    pub fn bracket(
        &self,
        a: &GradedPolynomial,
        b: &GradedPolynomial,
    ) -> Result<GradedPolynomial, AlgebraError> {
        self.bracket.bracket(a, b)
    }

    /// The Schouten bracket; only defined on `T*[1]M`.
    pub fn schouten(
        &self,
        a: &MultiVector,
        b: &MultiVector,
    ) -> Result<MultiVector, CotangentError> {
        if self.shift != 1 {
            return Err(CotangentError::WrongShift(self.shift));
        }
        Ok(self.bracket(a, b)?)
    }

    /// `f ↦ {h, f}`, of degree `|h| - n`.
    pub fn hamiltonian_vf(&self, h: &GradedPolynomial) -> Result<Derivation, AlgebraError> {
        self.bracket.hamiltonian(h)
    }

    /// Splits `v` by momentum word length; the pieces sum to `v`.
    pub fn decompose(&self, v: &MultiVector) -> Vec<(u32, MultiVector)> {
        v.split_by(|m| self.momentum_length(m))
            .into_iter()
            .collect()
    }

    pub fn component(&self, v: &MultiVector, length: u32) -> MultiVector {
        v.filter_terms(|m| self.momentum_length(m) == length)
    }

    /// The Euler vector field of the base as a fiber-linear function
    /// `Σ |x_i| x_i p_i`, so that `{ε, f} = |f| f` on base functions.
    pub fn euler_multivector(&self) -> MultiVector {
        let mut out = GradedPolynomial::zero(&self.total);
        for i in 0..self.base.len() {
            let d = self.base.degree(i);
            if d != 0 {
                out += &(&self.coordinate(i) * &self.momentum(i)).scale(&rational(d));
            }
        }
        out
    }

    /// The value `{x_i, p_i}` forced by antisymmetry from `{p_i, x_i} = 1`.
    pub fn coordinate_momentum_sign(&self, i: usize) -> i64 {
        if parity(self.base.degree(i) * (self.shift + 1)) {
            1
        } else {
            -1
        }
    }
}

pub fn build_cotangent(base: &Arc<Chart>, n: i64) -> Result<CotangentChart, CotangentError> {
    CotangentChart::build(base, n)
}

pub fn canonical_bracket(
    a: &GradedPolynomial,
    b: &GradedPolynomial,
    cc: &CotangentChart,
) -> Result<GradedPolynomial, AlgebraError> {
    cc.bracket(a, b)
}

pub fn schouten(
    a: &MultiVector,
    b: &MultiVector,
    cc: &CotangentChart,
) -> Result<MultiVector, CotangentError> {
    cc.schouten(a, b)
}

pub fn hamiltonian_vf(h: &GradedPolynomial, cc: &CotangentChart) -> Result<Derivation, AlgebraError> {
    cc.hamiltonian_vf(h)
}

pub fn decompose(v: &MultiVector, cc: &CotangentChart) -> Vec<(u32, MultiVector)> {
    cc.decompose(v)
}

/// The degree-0 Euler derivation `x_i ↦ |x_i| x_i`.
pub fn euler_field(chart: &Arc<Chart>) -> Derivation {
    let images = (0..chart.len())
        .map(|i| GradedPolynomial::coordinate(chart, i).scale(&rational(chart.degree(i))))
        .collect();
    Derivation::new(chart, 0, images).expect("Euler images have the coordinate degrees")
}
