//! Exact-arithmetic kernel for Z-graded commutative polynomial algebras.
//!
//! A [`Chart`] is an ordered list of named coordinates with integer degrees.
//! Polynomials on a chart are kept in a unique normal form: every monomial
//! lists its factors in chart order, the Koszul sign picked up while sorting
//! is folded into the coefficient, and odd coordinates appear at most once.
//! Equality of polynomials is therefore equality of term maps.

mod bracket;
mod derivation;
pub mod guard;
mod morphism;

pub use bracket::PoissonBracket;
pub use derivation::Derivation;
pub use morphism::{pullback, AlgebraMorphism};

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational coefficients.
pub type Rational = BigRational;

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("duplicate coordinate name `{0}`")]
    DuplicateCoordinate(String),
    #[error("invalid coordinate name `{0}`")]
    InvalidName(String),
    #[error("operands live on different charts")]
    ChartMismatch,
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),
    #[error("missing image for coordinate `{0}`")]
    MissingImage(String),
    #[error("image of `{coordinate}` has degree {found}, expected {expected}")]
    DegreeMismatch {
        coordinate: String,
        expected: i64,
        found: String,
    },
    #[error("expected {expected} images, got {found}")]
    ImageCount { expected: usize, found: usize },
    #[error("polynomial is not homogeneous")]
    Inhomogeneous,
    #[error("inconsistent generator bracket on ({0}, {1})")]
    InconsistentBracket(String, String),
}

/// A named coordinate carrying an integer degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coordinate {
    name: String,
    degree: i64,
}

impl Coordinate {
    pub fn new(name: impl Into<String>, degree: i64) -> Self {
        Coordinate {
            name: name.into(),
            degree,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_odd(&self) -> bool {
        parity(self.degree)
    }
}

/// `true` for odd degrees. Negative degrees follow `rem_euclid`, so -2 is even.
pub fn parity(degree: i64) -> bool {
    degree.rem_euclid(2) == 1
}

/// An ordered set of graded coordinates.
#[derive(Debug)]
pub struct Chart {
    coords: Vec<Coordinate>,
    lookup: HashMap<String, usize>,
    odd: Vec<bool>,
}

impl PartialEq for Chart {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl Eq for Chart {}

impl Chart {
    pub fn new(coords: Vec<Coordinate>) -> Result<Arc<Chart>, AlgebraError> {
        let mut lookup = HashMap::with_capacity(coords.len());
        for (i, c) in coords.iter().enumerate() {
            if c.name.is_empty() {
                return Err(AlgebraError::InvalidName(c.name.clone()));
            }
            if lookup.insert(c.name.clone(), i).is_some() {
                return Err(AlgebraError::DuplicateCoordinate(c.name.clone()));
            }
        }
        let odd = coords.iter().map(Coordinate::is_odd).collect();
        Ok(Arc::new(Chart {
            coords,
            lookup,
            odd,
        }))
    }

    pub fn from_pairs(pairs: &[(&str, i64)]) -> Result<Arc<Chart>, AlgebraError> {
        Chart::new(
            pairs
                .iter()
                .map(|(n, d)| Coordinate::new(*n, *d))
                .collect(),
        )
    }

    pub fn empty() -> Arc<Chart> {
        Chart::new(Vec::new()).expect("empty chart")
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coordinates(&self) -> &[Coordinate] {
        &self.coords
    }

    pub fn coordinate(&self, i: usize) -> &Coordinate {
        &self.coords[i]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.coords[i].name
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.coords[i].degree
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.odd[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.lookup.get(name).copied()
    }
}

pub(crate) fn same_chart(a: &Arc<Chart>, b: &Arc<Chart>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Exponent vector of a monomial, one entry per chart coordinate.
///
/// The ordering puts higher word length first and then sorts exponent
/// vectors in descending lexicographic order, which is the order polynomials
/// are rendered in.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn one(len: usize) -> Self {
        Monomial(vec![0; len].into_boxed_slice())
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps.into_boxed_slice())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// Number of coordinate factors, counted with multiplicity.
    pub fn word_length(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self, chart: &Chart) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &e)| e as i64 * chart.degree(i))
            .sum()
    }

    /// Degree of the factors strictly before coordinate `i`.
    fn prefix_degree(&self, chart: &Chart, i: usize) -> i64 {
        (0..i).map(|k| self.0[k] as i64 * chart.degree(k)).sum()
    }

    fn suffix_degree(&self, chart: &Chart, i: usize) -> i64 {
        (i + 1..self.0.len())
            .map(|k| self.0[k] as i64 * chart.degree(k))
            .sum()
    }

    fn with_exponent(&self, i: usize, e: u32) -> Self {
        let mut v = self.0.clone();
        v[i] = e;
        Monomial(v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other
            .word_length()
            .cmp(&self.word_length())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sign and validity of the normal-form product `u * v`.
///
/// Returns `None` when an odd coordinate occurs in both factors, otherwise
/// `Some(true)` when sorting the concatenated factors into chart order takes
/// an odd number of odd/odd transpositions.
pub(crate) fn koszul_product_sign(chart: &Chart, u: &[u32], v: &[u32]) -> Option<bool> {
    let mut odd_after = 0u32;
    let mut negative = false;
    // Walk right to left so `odd_after` counts odd factors of `u` with a
    // larger index than the current position.
    for i in (0..u.len()).rev() {
        if chart.is_odd(i) {
            if u[i] > 0 && v[i] > 0 {
                return None;
            }
            if v[i] > 0 && odd_after % 2 == 1 {
                negative = !negative;
            }
            if u[i] > 0 {
                odd_after += 1;
            }
        }
    }
    Some(negative)
}

/// Whether a polynomial has one degree, none (the zero polynomial), or several.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Degree(i64),
    Mixed,
}

impl Homogeneity {
    /// The degree if homogeneous; the zero polynomial reports `fallback`.
    pub fn or_zero(self, fallback: i64) -> Option<i64> {
        match self {
            Homogeneity::Zero => Some(fallback),
            Homogeneity::Degree(d) => Some(d),
            Homogeneity::Mixed => None,
        }
    }
}

/// A polynomial in normal form on a chart.
#[derive(Clone, Debug)]
pub struct GradedPolynomial {
    chart: Arc<Chart>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for GradedPolynomial {
    fn eq(&self, other: &Self) -> bool {
        same_chart(&self.chart, &other.chart) && self.terms == other.terms
    }
}

impl Eq for GradedPolynomial {}

impl GradedPolynomial {
    pub fn zero(chart: &Arc<Chart>) -> Self {
        GradedPolynomial {
            chart: chart.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(chart: &Arc<Chart>, c: Rational) -> Self {
        let mut p = GradedPolynomial::zero(chart);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(chart.len()), c);
        }
        p
    }

    pub fn one(chart: &Arc<Chart>) -> Self {
        GradedPolynomial::constant(chart, Rational::one())
    }

    pub fn coordinate(chart: &Arc<Chart>, i: usize) -> Self {
        let mut exps = vec![0; chart.len()];
        exps[i] = 1;
        let mut p = GradedPolynomial::zero(chart);
        p.terms.insert(Monomial::from_exponents(exps), Rational::one());
        p
    }

    pub fn var(chart: &Arc<Chart>, name: &str) -> Result<Self, AlgebraError> {
        chart
            .index_of(name)
            .map(|i| GradedPolynomial::coordinate(chart, i))
            .ok_or_else(|| AlgebraError::UnknownCoordinate(name.to_string()))
    }

    /// Builds a polynomial from raw exponent vectors. Terms with an odd
    /// coordinate raised to a power above one vanish.
    pub fn from_terms<I>(chart: &Arc<Chart>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = GradedPolynomial::zero(chart);
        for (exps, c) in terms {
            assert_eq!(exps.len(), chart.len(), "exponent vector length");
            if exps
                .iter()
                .enumerate()
                .any(|(i, &e)| chart.is_odd(i) && e > 1)
            {
                continue;
            }
            p.add_term(Monomial::from_exponents(exps), c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.chart.len()))
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let mut found = None;
        for m in self.terms.keys() {
            let d = m.degree(&self.chart);
            match found {
                None => found = Some(d),
                Some(e) if e != d => return Homogeneity::Mixed,
                _ => {}
            }
        }
        match found {
            None => Homogeneity::Zero,
            Some(d) => Homogeneity::Degree(d),
        }
    }

    /// Homogeneous degree, or `None` for mixed or zero polynomials.
    pub fn degree(&self) -> Option<i64> {
        match self.homogeneity() {
            Homogeneity::Degree(d) => Some(d),
            _ => None,
        }
    }

    pub fn is_homogeneous_of(&self, degree: i64) -> bool {
        match self.homogeneity() {
            Homogeneity::Zero => true,
            Homogeneity::Degree(d) => d == degree,
            Homogeneity::Mixed => false,
        }
    }

    /// Largest word length among the terms (0 for the zero polynomial).
    pub fn word_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::word_length)
            .max()
            .unwrap_or(0)
    }

    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.exponent(i) > 0)
    }

    /// Keeps only the terms selected by `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Self {
        GradedPolynomial {
            chart: self.chart.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Splits the polynomial by a per-monomial key; the parts sum back to `self`.
    pub fn split_by<K: Ord>(&self, mut key: impl FnMut(&Monomial) -> K) -> BTreeMap<K, Self> {
        let mut out: BTreeMap<K, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(key(m))
                .or_insert_with(|| GradedPolynomial::zero(&self.chart))
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return GradedPolynomial::zero(&self.chart);
        }
        GradedPolynomial {
            chart: self.chart.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.ensure_same_chart(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Graded commutative product in normal form.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.ensure_same_chart(other)?;
        let mut out = GradedPolynomial::zero(&self.chart);
        for (mu, cu) in &self.terms {
            for (mv, cv) in &other.terms {
                if let Some((m, negative)) = multiply_monomials(&self.chart, mu, mv) {
                    let c = cu * cv;
                    out.add_term(m, if negative { -c } else { c });
                }
            }
        }
        guard::check(out.word_degree());
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = GradedPolynomial::one(&self.chart);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    fn ensure_same_chart(&self, other: &Self) -> Result<(), AlgebraError> {
        if same_chart(&self.chart, &other.chart) {
            Ok(())
        } else {
            Err(AlgebraError::ChartMismatch)
        }
    }

    /// Left partial derivative: writes each monomial as `x_i * rest` and keeps `rest`.
    pub fn left_partial(&self, i: usize) -> Self {
        let chart = &self.chart;
        let mut out = GradedPolynomial::zero(chart);
        for (m, c) in &self.terms {
            let e = m.exponent(i);
            if e == 0 {
                continue;
            }
            let negative = chart.is_odd(i) && parity(m.prefix_degree(chart, i));
            let k = c * rational(e as i64);
            out.add_term(m.with_exponent(i, e - 1), if negative { -k } else { k });
        }
        out
    }

    /// Right partial derivative: writes each monomial as `rest * x_i` and keeps `rest`.
    pub fn right_partial(&self, i: usize) -> Self {
        let chart = &self.chart;
        let mut out = GradedPolynomial::zero(chart);
        for (m, c) in &self.terms {
            let e = m.exponent(i);
            if e == 0 {
                continue;
            }
            let negative = chart.is_odd(i) && parity(m.suffix_degree(chart, i));
            let k = c * rational(e as i64);
            out.add_term(m.with_exponent(i, e - 1), if negative { -k } else { k });
        }
        out
    }

    /// Moves the polynomial to another chart by coordinate name. Fails if a
    /// coordinate that occurs in `self` is missing or has another degree.
    pub fn transfer(&self, target: &Arc<Chart>) -> Result<Self, AlgebraError> {
        let mut map = Vec::with_capacity(self.chart.len());
        for c in self.chart.coordinates() {
            let j = target.index_of(c.name());
            match j {
                Some(j) if target.degree(j) == c.degree() => map.push(Some(j)),
                _ => map.push(None),
            }
        }
        let mut out = GradedPolynomial::zero(target);
        for (m, c) in &self.terms {
            // Factors are multiplied in source order so any reordering sign is picked up.
            let mut term = GradedPolynomial::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let j = map[i].ok_or_else(|| {
                    AlgebraError::UnknownCoordinate(self.chart.name(i).to_string())
                })?;
                term = &term * &GradedPolynomial::coordinate(target, j).pow(e);
            }
            out = &out + &term;
        }
        Ok(out)
    }
}

pub(crate) fn multiply_monomials(
    chart: &Chart,
    u: &Monomial,
    v: &Monomial,
) -> Option<(Monomial, bool)> {
    let negative = koszul_product_sign(chart, u.exponents(), v.exponents())?;
    let exps: Vec<u32> = u
        .exponents()
        .iter()
        .zip(v.exponents())
        .map(|(a, b)| a + b)
        .collect();
    Some((Monomial::from_exponents(exps), negative))
}

/// Graded commutative product; fails on chart mismatch.
pub fn mul(a: &GradedPolynomial, b: &GradedPolynomial) -> Result<GradedPolynomial, AlgebraError> {
    a.checked_mul(b)
}

impl Add for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn add(self, rhs: &GradedPolynomial) -> GradedPolynomial {
        self.checked_add(rhs).expect("chart mismatch in addition")
    }
}

impl Sub for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn sub(self, rhs: &GradedPolynomial) -> GradedPolynomial {
        self.checked_add(&-rhs).expect("chart mismatch in subtraction")
    }
}

impl Mul for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn mul(self, rhs: &GradedPolynomial) -> GradedPolynomial {
        self.checked_mul(rhs).expect("chart mismatch in multiplication")
    }
}

impl Neg for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn neg(self) -> GradedPolynomial {
        GradedPolynomial {
            chart: self.chart.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for GradedPolynomial {
    type Output = GradedPolynomial;
    fn neg(self) -> GradedPolynomial {
        -&self
    }
}

impl AddAssign<&GradedPolynomial> for GradedPolynomial {
    fn add_assign(&mut self, rhs: &GradedPolynomial) {
        assert!(same_chart(&self.chart, &rhs.chart), "chart mismatch in addition");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&GradedPolynomial> for GradedPolynomial {
    fn sub_assign(&mut self, rhs: &GradedPolynomial) {
        assert!(same_chart(&self.chart, &rhs.chart), "chart mismatch in subtraction");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

/// Renders a rational the way the document format reads it back: `3`, `-3/2`.
pub fn format_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for GradedPolynomial {
    /// Canonical text: terms in monomial order, explicit signs, `*` between
    /// factors, `^` for powers above one, `0` for the zero polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors = Vec::new();
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.chart.name(i).to_string()),
                    _ => factors.push(format!("{}^{}", self.chart.name(i), e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart() -> Arc<Chart> {
        Chart::from_pairs(&[("x", 0), ("y", 0), ("theta", 1), ("eta", 1), ("w", -2)]).unwrap()
    }

    fn v(c: &Arc<Chart>, n: &str) -> GradedPolynomial {
        GradedPolynomial::var(c, n).unwrap()
    }

    #[test]
    fn odd_square_vanishes() {
        let c = chart();
        let t = v(&c, "theta");
        assert!((&t * &t).is_zero());
    }

    #[test]
    fn odd_coordinates_anticommute() {
        let c = chart();
        let (t, e) = (v(&c, "theta"), v(&c, "eta"));
        assert_eq!(&e * &t, -(&t * &e));
    }

    #[test]
    fn cross_terms_cancel_between_even_and_odd() {
        let c = chart();
        let (x, t) = (v(&c, "x"), v(&c, "theta"));
        let p = &(&x + &t) * &(&x - &t);
        assert_eq!(p, &x * &x);
    }

    #[test]
    fn negative_even_degree_is_even() {
        let c = chart();
        let w = v(&c, "w");
        assert_eq!((&w * &w).degree(), Some(-4));
        assert!(!c.is_odd(4));
    }

    #[test]
    fn duplicate_names_rejected() {
        assert_eq!(
            Chart::from_pairs(&[("x", 0), ("x", 1)]).unwrap_err(),
            AlgebraError::DuplicateCoordinate("x".into())
        );
    }

    #[test]
    fn chart_mismatch_is_an_error() {
        let a = chart();
        let b = Chart::from_pairs(&[("x", 0)]).unwrap();
        let err = mul(&v(&a, "x"), &v(&b, "x")).unwrap_err();
        assert_eq!(err, AlgebraError::ChartMismatch);
    }

    #[test]
    fn zero_is_homogeneous_of_every_degree() {
        let c = chart();
        let z = GradedPolynomial::zero(&c);
        assert!(z.is_homogeneous_of(7) && z.is_homogeneous_of(-3));
        assert_eq!(z.homogeneity(), Homogeneity::Zero);
    }

    #[test]
    fn left_and_right_partials_of_odd_pair() {
        let c = chart();
        let (t, e) = (v(&c, "theta"), v(&c, "eta"));
        let te = &t * &e;
        // theta*eta = theta * (eta): left partial in theta is eta
        assert_eq!(te.left_partial(2), e);
        // theta*eta = -(eta*theta): left partial in eta is -theta
        assert_eq!(te.left_partial(3), -&t);
        assert_eq!(te.right_partial(3), t);
        assert_eq!(te.right_partial(2), -&e);
    }

    #[test]
    fn display_is_canonical() {
        let c = chart();
        let x = v(&c, "x");
        let p = &x.pow(2) + &x.scale(&ratio(3, 2));
        assert_eq!(p.to_string(), "x^2 + 3/2*x");
        assert_eq!(GradedPolynomial::zero(&c).to_string(), "0");
        let q = -(&v(&c, "eta") * &v(&c, "theta"));
        assert_eq!(q.to_string(), "theta*eta");
    }
}
