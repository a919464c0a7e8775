use std::sync::Arc;

use super::derivation::describe;
use super::{parity, same_chart, AlgebraError, Chart, Derivation, GradedPolynomial};

/// A biderivation bracket of degree `-shift`, determined by its values on
/// pairs of coordinates.
///
/// The bracket satisfies
/// `{a, b} = -(-1)^{(|a|-n)(|b|-n)} {b, a}`,
/// `{a, bc} = {a, b} c + (-1)^{(|a|-n)|b|} b {a, c}` and the mirror rule in
/// the left slot. With those rules every bracket reduces to
/// `{A, B} = Σ (A ∂⃖_y) {y, z} (∂⃗_z B)` over coordinate pairs `(y, z)`.
#[derive(Clone, Debug)]
pub struct PoissonBracket {
    chart: Arc<Chart>,
    shift: i64,
    table: Vec<(usize, usize, GradedPolynomial)>,
}

impl PoissonBracket {
    /// Builds the bracket from `{y, z}` values. Mirror entries `{z, y}` are
    /// filled in by antisymmetry; a supplied mirror that disagrees is an error.
    pub fn from_generators(
        chart: &Arc<Chart>,
        shift: i64,
        entries: Vec<(usize, usize, GradedPolynomial)>,
    ) -> Result<Self, AlgebraError> {
        let n = chart.len();
        let mut dense: Vec<Option<GradedPolynomial>> = vec![None; n * n];
        for (y, z, value) in entries {
            if !same_chart(value.chart(), chart) {
                return Err(AlgebraError::ChartMismatch);
            }
            let expected = chart.degree(y) + chart.degree(z) - shift;
            if !value.is_homogeneous_of(expected) {
                return Err(AlgebraError::DegreeMismatch {
                    coordinate: format!("{{{}, {}}}", chart.name(y), chart.name(z)),
                    expected,
                    found: describe(value.homogeneity()),
                });
            }
            let mirror = mirror_value(chart, shift, y, z, &value);
            for (slot, v) in [(y * n + z, value), (z * n + y, mirror)] {
                match &dense[slot] {
                    Some(existing) if *existing != v => {
                        return Err(AlgebraError::InconsistentBracket(
                            chart.name(y).to_string(),
                            chart.name(z).to_string(),
                        ))
                    }
                    _ => dense[slot] = Some(v),
                }
            }
        }
        let table = dense
            .into_iter()
            .enumerate()
            .filter_map(|(k, v)| v.filter(|p| !p.is_zero()).map(|p| (k / n, k % n, p)))
            .collect();
        Ok(PoissonBracket {
            chart: chart.clone(),
            shift,
            table,
        })
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Value of the bracket on a pair of coordinates.
    pub fn generator(&self, y: usize, z: usize) -> GradedPolynomial {
        self.table
            .iter()
            .find(|(a, b, _)| *a == y && *b == z)
            .map(|(_, _, p)| p.clone())
            .unwrap_or_else(|| GradedPolynomial::zero(&self.chart))
    }

    pub fn bracket(
        &self,
        a: &GradedPolynomial,
        b: &GradedPolynomial,
    ) -> Result<GradedPolynomial, AlgebraError> {
        if !same_chart(a.chart(), &self.chart) || !same_chart(b.chart(), &self.chart) {
            return Err(AlgebraError::ChartMismatch);
        }
        let n = self.chart.len();
        let mut right: Vec<Option<GradedPolynomial>> = vec![None; n];
        let mut left: Vec<Option<GradedPolynomial>> = vec![None; n];
        let mut out = GradedPolynomial::zero(&self.chart);
        for (y, z, value) in &self.table {
            let ay = right[*y].get_or_insert_with(|| a.right_partial(*y)).clone();
            if ay.is_zero() {
                continue;
            }
            let bz = left[*z].get_or_insert_with(|| b.left_partial(*z)).clone();
            if bz.is_zero() {
                continue;
            }
            out += &(&(&ay * value) * &bz);
        }
        Ok(out)
    }

    /// The derivation `f ↦ {h, f}` of degree `|h| - shift`.
    pub fn hamiltonian(&self, h: &GradedPolynomial) -> Result<Derivation, AlgebraError> {
        if !same_chart(h.chart(), &self.chart) {
            return Err(AlgebraError::ChartMismatch);
        }
        let degree = match h.homogeneity() {
            super::Homogeneity::Degree(d) => d,
            super::Homogeneity::Zero => self.shift,
            super::Homogeneity::Mixed => return Err(AlgebraError::Inhomogeneous),
        };
        let images = (0..self.chart.len())
            .map(|i| self.bracket(h, &GradedPolynomial::coordinate(&self.chart, i)))
            .collect::<Result<Vec<_>, _>>()?;
        Derivation::new(&self.chart, degree - self.shift, images)
    }
}

fn mirror_value(
    chart: &Chart,
    shift: i64,
    y: usize,
    z: usize,
    value: &GradedPolynomial,
) -> GradedPolynomial {
    let flip = parity(chart.degree(y) - shift) && parity(chart.degree(z) - shift);
    if flip {
        value.clone()
    } else {
        -value
    }
}
