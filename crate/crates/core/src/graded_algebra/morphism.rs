use std::collections::HashMap;
use std::sync::Arc;

use super::derivation::describe;
use super::{same_chart, AlgebraError, Chart, GradedPolynomial};

/// A degree-0 algebra morphism `C[source] -> C[target]` given by the images
/// of the source coordinates (a pullback `ψ*`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraMorphism {
    source: Arc<Chart>,
    target: Arc<Chart>,
    images: Vec<GradedPolynomial>,
}

impl AlgebraMorphism {
    pub fn new(
        source: &Arc<Chart>,
        target: &Arc<Chart>,
        images: Vec<GradedPolynomial>,
    ) -> Result<Self, AlgebraError> {
        if images.len() != source.len() {
            return Err(AlgebraError::ImageCount {
                expected: source.len(),
                found: images.len(),
            });
        }
        for (i, img) in images.iter().enumerate() {
            if !same_chart(img.chart(), target) {
                return Err(AlgebraError::ChartMismatch);
            }
            if !img.is_homogeneous_of(source.degree(i)) {
                return Err(AlgebraError::DegreeMismatch {
                    coordinate: source.name(i).to_string(),
                    expected: source.degree(i),
                    found: describe(img.homogeneity()),
                });
            }
        }
        Ok(AlgebraMorphism {
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    /// Builds the morphism from images keyed by source coordinate name.
    pub fn from_map(
        source: &Arc<Chart>,
        target: &Arc<Chart>,
        images: &HashMap<String, GradedPolynomial>,
    ) -> Result<Self, AlgebraError> {
        let mut list = Vec::with_capacity(source.len());
        for c in source.coordinates() {
            list.push(
                images
                    .get(c.name())
                    .cloned()
                    .ok_or_else(|| AlgebraError::MissingImage(c.name().to_string()))?,
            );
        }
        AlgebraMorphism::new(source, target, list)
    }

    pub fn identity(chart: &Arc<Chart>) -> Self {
        AlgebraMorphism {
            source: chart.clone(),
            target: chart.clone(),
            images: (0..chart.len())
                .map(|i| GradedPolynomial::coordinate(chart, i))
                .collect(),
        }
    }

    pub fn source(&self) -> &Arc<Chart> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Chart> {
        &self.target
    }

    pub fn images(&self) -> &[GradedPolynomial] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &GradedPolynomial {
        &self.images[i]
    }

    /// Pulls `f` back along the morphism.
    pub fn apply(&self, f: &GradedPolynomial) -> Result<GradedPolynomial, AlgebraError> {
        if !same_chart(f.chart(), &self.source) {
            return Err(AlgebraError::ChartMismatch);
        }
        let mut out = GradedPolynomial::zero(&self.target);
        for (m, c) in f.terms() {
            let mut term = GradedPolynomial::constant(&self.target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    term = &term * &self.images[i].pow(e);
                }
                if term.is_zero() {
                    break;
                }
            }
            out += &term;
        }
        Ok(out)
    }

    /// `self ∘ other`: first pull back along `self`, then along `other`.
    pub fn then(&self, other: &AlgebraMorphism) -> Result<AlgebraMorphism, AlgebraError> {
        if !same_chart(&self.target, &other.source) {
            return Err(AlgebraError::ChartMismatch);
        }
        let images = self
            .images
            .iter()
            .map(|img| other.apply(img))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AlgebraMorphism {
            source: self.source.clone(),
            target: other.target.clone(),
            images,
        })
    }
}

/// Applies the pullback determined by `images` (keyed by coordinate name of
/// `f`'s chart) to `f`.
pub fn pullback(
    images: &HashMap<String, GradedPolynomial>,
    target: &Arc<Chart>,
    f: &GradedPolynomial,
) -> Result<GradedPolynomial, AlgebraError> {
    AlgebraMorphism::from_map(f.chart(), target, images)?.apply(f)
}
