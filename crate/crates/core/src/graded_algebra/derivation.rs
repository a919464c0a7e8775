use std::sync::Arc;

use super::{
    parity, rational, same_chart, AlgebraError, Chart, GradedPolynomial, Homogeneity, Monomial,
};

/// A graded derivation, stored by its values on the chart coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    chart: Arc<Chart>,
    degree: i64,
    images: Vec<GradedPolynomial>,
}

impl Derivation {
    /// Checks that every image lives on `chart` and has degree
    /// `degree(coordinate) + degree`.
    pub fn new(
        chart: &Arc<Chart>,
        degree: i64,
        images: Vec<GradedPolynomial>,
    ) -> Result<Self, AlgebraError> {
        if images.len() != chart.len() {
            return Err(AlgebraError::ImageCount {
                expected: chart.len(),
                found: images.len(),
            });
        }
        for (i, img) in images.iter().enumerate() {
            if !same_chart(img.chart(), chart) {
                return Err(AlgebraError::ChartMismatch);
            }
            let expected = chart.degree(i) + degree;
            if !img.is_homogeneous_of(expected) {
                return Err(AlgebraError::DegreeMismatch {
                    coordinate: chart.name(i).to_string(),
                    expected,
                    found: describe(img.homogeneity()),
                });
            }
        }
        Ok(Derivation {
            chart: chart.clone(),
            degree,
            images,
        })
    }

    pub fn zero(chart: &Arc<Chart>, degree: i64) -> Self {
        Derivation {
            chart: chart.clone(),
            degree,
            images: vec![GradedPolynomial::zero(chart); chart.len()],
        }
    }

    /// The coordinate vector field `∂/∂x_i` (acting from the left), of degree `-|x_i|`.
    pub fn partial(chart: &Arc<Chart>, i: usize) -> Self {
        let mut d = Derivation::zero(chart, -chart.degree(i));
        d.images[i] = GradedPolynomial::one(chart);
        d
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn images(&self) -> &[GradedPolynomial] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &GradedPolynomial {
        &self.images[i]
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(GradedPolynomial::is_zero)
    }

    /// Applies the derivation, extending the coordinate images by the graded
    /// Leibniz rule `D(uv) = D(u) v + (-1)^{|D||u|} u D(v)`.
    pub fn apply(&self, f: &GradedPolynomial) -> Result<GradedPolynomial, AlgebraError> {
        if !same_chart(f.chart(), &self.chart) {
            return Err(AlgebraError::ChartMismatch);
        }
        let chart = &self.chart;
        let odd_derivation = parity(self.degree);
        let mut out = GradedPolynomial::zero(chart);
        for (m, c) in f.terms() {
            for i in 0..chart.len() {
                let e = m.exponent(i);
                if e == 0 || self.images[i].is_zero() {
                    continue;
                }
                // m = prefix * x_i^e * suffix; an even x_i contributes e copies
                // of prefix * D(x_i) * x_i^(e-1) * suffix.
                let exps = m.exponents();
                let mut prefix = vec![0; chart.len()];
                prefix[..i].copy_from_slice(&exps[..i]);
                let mut rest = exps.to_vec();
                rest[..i].iter_mut().for_each(|x| *x = 0);
                rest[i] = e - 1;
                let prefix = Monomial::from_exponents(prefix);
                let negative = odd_derivation && parity(prefix.degree(chart));
                let mut k = c * rational(e as i64);
                if negative {
                    k = -k;
                }
                let left = GradedPolynomial::from_monomial(chart, prefix, k);
                let right =
                    GradedPolynomial::from_monomial(chart, Monomial::from_exponents(rest), rational(1));
                out += &(&(&left * &self.images[i]) * &right);
            }
        }
        Ok(out)
    }

    /// Graded commutator `[D1, D2] = D1∘D2 - (-1)^{|D1||D2|} D2∘D1`.
    pub fn commutator(&self, other: &Derivation) -> Result<Derivation, AlgebraError> {
        if !same_chart(&self.chart, &other.chart) {
            return Err(AlgebraError::ChartMismatch);
        }
        let sign_negative = parity(self.degree) && parity(other.degree);
        let mut images = Vec::with_capacity(self.chart.len());
        for i in 0..self.chart.len() {
            let a = self.apply(&other.images[i])?;
            let b = other.apply(&self.images[i])?;
            images.push(if sign_negative { &a + &b } else { &a - &b });
        }
        Ok(Derivation {
            chart: self.chart.clone(),
            degree: self.degree + other.degree,
            images,
        })
    }

    pub fn scale(&self, c: &super::Rational) -> Derivation {
        Derivation {
            chart: self.chart.clone(),
            degree: self.degree,
            images: self.images.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Sum of two derivations of the same degree.
    pub fn add(&self, other: &Derivation) -> Result<Derivation, AlgebraError> {
        if !same_chart(&self.chart, &other.chart) {
            return Err(AlgebraError::ChartMismatch);
        }
        if self.degree != other.degree {
            return Err(AlgebraError::DegreeMismatch {
                coordinate: "<derivation>".into(),
                expected: self.degree,
                found: other.degree.to_string(),
            });
        }
        Ok(Derivation {
            chart: self.chart.clone(),
            degree: self.degree,
            images: self
                .images
                .iter()
                .zip(&other.images)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}

pub(crate) fn describe(h: Homogeneity) -> String {
    match h {
        Homogeneity::Zero => "zero".into(),
        Homogeneity::Degree(d) => d.to_string(),
        Homogeneity::Mixed => "mixed".into(),
    }
}

impl GradedPolynomial {
    pub(crate) fn from_monomial(chart: &Arc<Chart>, m: Monomial, c: super::Rational) -> Self {
        let mut p = GradedPolynomial::zero(chart);
        p.add_term(m, c);
        p
    }
}
