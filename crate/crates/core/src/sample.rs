//! Seeded random polynomials for randomized property checks.

use std::sync::Arc;

use rand::Rng;

use crate::graded_algebra::{rational, Chart, GradedPolynomial, Rational};
use crate::shifted_cotangent::CotangentChart;

/// Random exponent vector with at most `max_len` factors.
fn random_exponents<R: Rng>(chart: &Chart, rng: &mut R, max_len: u32) -> Vec<u32> {
    let mut e = vec![0u32; chart.len()];
    if chart.is_empty() {
        return e;
    }
    let len = rng.gen_range(0..=max_len);
    for _ in 0..len {
        let i = rng.gen_range(0..chart.len());
        if chart.is_odd(i) && e[i] == 1 {
            continue;
        }
        e[i] += 1;
    }
    e
}

fn random_coefficient<R: Rng>(rng: &mut R) -> Rational {
    let n = rng.gen_range(-3i64..=3);
    let d = rng.gen_range(1i64..=2);
    Rational::new(n.into(), d.into())
}

/// A random polynomial homogeneous of `degree`, found by rejection sampling;
/// may be zero when few monomials have that degree.
pub fn random_of_degree<R: Rng>(
    chart: &Arc<Chart>,
    degree: i64,
    rng: &mut R,
    max_len: u32,
    max_terms: usize,
) -> GradedPolynomial {
    let mut out = GradedPolynomial::zero(chart);
    let terms = rng.gen_range(1..=max_terms.max(1));
    let mut found = 0;
    for _ in 0..terms * 40 {
        if found == terms {
            break;
        }
        let e = random_exponents(chart, rng, max_len);
        let m = crate::graded_algebra::Monomial::from_exponents(e.clone());
        if m.degree(chart) != degree {
            continue;
        }
        found += 1;
        out += &GradedPolynomial::from_terms(chart, [(e, random_coefficient(rng))]);
    }
    out
}

/// A random nonzero homogeneous polynomial of whatever degree its first
/// monomial has.
pub fn random_homogeneous<R: Rng>(
    chart: &Arc<Chart>,
    rng: &mut R,
    max_len: u32,
    max_terms: usize,
) -> GradedPolynomial {
    let e = random_exponents(chart, rng, max_len);
    let degree = crate::graded_algebra::Monomial::from_exponents(e.clone()).degree(chart);
    let mut c = random_coefficient(rng);
    if c == rational(0) {
        c = rational(1);
    }
    let mut out = GradedPolynomial::from_terms(chart, [(e, c)]);
    out += &random_of_degree(chart, degree, rng, max_len, max_terms.saturating_sub(1));
    if out.is_zero() {
        GradedPolynomial::one(chart)
    } else {
        out
    }
}

/// Random word on the allowed coordinates, as an exponent vector, or `None`
/// when it repeats an odd coordinate.
fn random_word<R: Rng>(chart: &Chart, allowed: &[usize], rng: &mut R, max_len: u32) -> Option<Vec<u32>> {
    let mut e = vec![0u32; chart.len()];
    if allowed.is_empty() {
        return Some(e);
    }
    for _ in 0..rng.gen_range(0..=max_len) {
        let i = allowed[rng.gen_range(0..allowed.len())];
        if chart.is_odd(i) && e[i] == 1 {
            return None;
        }
        e[i] += 1;
    }
    Some(e)
}

fn random_on<R: Rng>(
    chart: &Arc<Chart>,
    allowed: &[usize],
    degree: i64,
    rng: &mut R,
    max_len: u32,
    accept: impl Fn(&[u32]) -> bool,
    terms: usize,
) -> GradedPolynomial {
    let mut out = GradedPolynomial::zero(chart);
    let mut found = 0;
    for _ in 0..terms * 60 {
        if found == terms {
            break;
        }
        let Some(e) = random_word(chart, allowed, rng, max_len) else {
            continue;
        };
        let m = crate::graded_algebra::Monomial::from_exponents(e.clone());
        if m.degree(chart) != degree || !accept(&e) {
            continue;
        }
        found += 1;
        out += &GradedPolynomial::from_terms(chart, [(e, random_coefficient(rng))]);
    }
    out
}

/// A random solution of `{π, π} = 0` of degree `n + 1` with momentum length
/// at most `max_len`.
///
/// The base coordinates are split in two sets `A` and `B`; any function of
/// the `x_a` and the `p_b` squares to zero. The result is then moved by
/// `exp(ad_h)` for `h = Σ_b g_b(x_0, …, x_{b-1}) p_b`, which preserves the
/// bracket and terminates on polynomials because `h` is triangular.
pub fn random_master_solution<R: Rng>(
    cc: &CotangentChart,
    rng: &mut R,
    max_len: u32,
    max_terms: usize,
) -> GradedPolynomial {
    let chart = cc.chart();
    let m = cc.base_dim();
    let mut allowed = Vec::new();
    for i in 0..m {
        if rng.gen_bool(0.5) {
            allowed.push(i);
        } else {
            allowed.push(cc.momentum_index(i));
        }
    }
    let terms = rng.gen_range(1..=max_terms.max(1));
    let raw = random_on(
        chart,
        &allowed,
        cc.shift() + 1,
        rng,
        max_len + 2,
        |e| e[m..].iter().sum::<u32>() <= max_len,
        terms,
    );
    let mut h = GradedPolynomial::zero(chart);
    for b in 0..m {
        if rng.gen_bool(0.5) {
            continue;
        }
        let lower: Vec<usize> = (0..b).collect();
        let g = random_on(chart, &lower, cc.base().degree(b), rng, 2, |_| true, 1);
        h += &(&g * &cc.momentum(b));
    }
    scramble(cc, &raw, &h).unwrap_or(raw)
}

/// `exp(ad_h) f`, or `None` if the series has not stopped after a fixed
/// number of terms.
fn scramble(cc: &CotangentChart, f: &GradedPolynomial, h: &GradedPolynomial) -> Option<GradedPolynomial> {
    let mut out = f.clone();
    let mut term = f.clone();
    for k in 1..=40i64 {
        term = cc.bracket(h, &term).ok()?.scale(&Rational::new(1.into(), k.into()));
        if term.is_zero() {
            return Some(out);
        }
        out += &term;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn master_solutions_square_to_zero() {
        let base = Chart::from_pairs(&[("x", 0), ("y", 0), ("t", 1), ("w", 2)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=2 {
            let cc = CotangentChart::build(&base, n).unwrap();
            for _ in 0..30 {
                let pi = random_master_solution(&cc, &mut rng, 3, 4);
                assert!(pi.is_zero() || pi.is_homogeneous_of(n + 1));
                assert!(cc.bracket(&pi, &pi).unwrap().is_zero(), "{pi}");
            }
        }
    }
}
