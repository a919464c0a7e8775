#![allow(dead_code)]

use std::sync::Arc;

use graded_poisson::graded_algebra::{Chart, Coordinate, GradedPolynomial};
use graded_poisson_oracles::Poly;
use rand::Rng;

pub fn degrees(chart: &Chart) -> Vec<i64> {
    chart.coordinates().iter().map(Coordinate::degree).collect()
}

pub fn to_oracle(p: &GradedPolynomial) -> Poly {
    let terms: Vec<_> = p
        .terms()
        .map(|(m, c)| (m.exponents().to_vec(), c.clone()))
        .collect();
    Poly::from_exponent_terms(&degrees(p.chart()), &terms)
}

pub fn from_oracle(chart: &Arc<Chart>, p: &Poly) -> GradedPolynomial {
    GradedPolynomial::from_terms(chart, p.exponent_terms())
}

/// A chart of `1..=max` coordinates named `c0, c1, …` with degrees in `lo..=hi`.
pub fn random_chart<R: Rng>(rng: &mut R, max: usize, lo: i64, hi: i64) -> Arc<Chart> {
    let len = rng.gen_range(1..=max);
    let coords = (0..len)
        .map(|i| Coordinate::new(format!("c{i}"), rng.gen_range(lo..=hi)))
        .collect();
    Chart::new(coords).unwrap()
}
