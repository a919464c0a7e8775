//! Substitution normal forms for ideals whose generators can be solved for
//! coordinates one at a time, and the inversion of declared quotient maps.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::graded_algebra::{
    AlgebraError, AlgebraMorphism, Chart, Coordinate, GradedPolynomial, Monomial, Rational,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EliminationFailure {
    /// The generator already reduces to zero modulo the earlier ones.
    Redundant,
    /// No admissible coordinate occurs only linearly with constant
    /// coefficient; carries the reduced generator.
    NoPivot(String),
    Algebra(AlgebraError),
}

/// Rewrite rules `x_k ≡ r_k` obtained from generators `c·x_k + (terms free
/// of x_k)`, back-substituted so no right side mentions a solved coordinate.
#[derive(Clone, Debug)]
pub struct Elimination {
    chart: Arc<Chart>,
    rules: Vec<(usize, GradedPolynomial)>,
    substitution: AlgebraMorphism,
}

fn substitution(chart: &Arc<Chart>, rules: &[(usize, GradedPolynomial)]) -> Result<AlgebraMorphism, AlgebraError> {
    let mut images: Vec<GradedPolynomial> =
        (0..chart.len()).map(|i| GradedPolynomial::coordinate(chart, i)).collect();
    for (k, r) in rules {
        images[*k] = r.clone();
    }
    AlgebraMorphism::new(chart, chart, images)
}

/// A coordinate that occurs in `r` only as the bare linear term `c·x_k`.
fn find_pivot(r: &GradedPolynomial, allowed: &dyn Fn(usize) -> bool) -> Option<(usize, Rational)> {
    let chart = r.chart();
    'coords: for k in 0..chart.len() {
        if !allowed(k) || !r.involves(k) {
            continue;
        }
        let mut coefficient = None;
        for (m, c) in r.terms() {
            if m.exponent(k) == 0 {
                continue;
            }
            if m.word_length() != 1 {
                continue 'coords;
            }
            coefficient = Some(c.clone());
        }
        if let Some(c) = coefficient {
            return Some((k, c));
        }
    }
    None
}

impl Elimination {
    /// Solves the generators in order. The error carries the index of the
    /// offending generator.
    pub fn new(
        chart: &Arc<Chart>,
        generators: &[GradedPolynomial],
        allowed: impl Fn(usize) -> bool,
    ) -> Result<Self, (usize, EliminationFailure)> {
        let mut rules: Vec<(usize, GradedPolynomial)> = Vec::new();
        let mut current = AlgebraMorphism::identity(chart);
        for (g, generator) in generators.iter().enumerate() {
            let fail = |e| (g, e);
            let r = current
                .apply(generator)
                .map_err(|e| fail(EliminationFailure::Algebra(e)))?;
            if r.is_zero() {
                return Err(fail(EliminationFailure::Redundant));
            }
            let solved = |k: usize| rules.iter().any(|(j, _)| *j == k);
            let (k, c) = find_pivot(&r, &|k| allowed(k) && !solved(k))
                .ok_or_else(|| fail(EliminationFailure::NoPivot(r.to_string())))?;
            let mut unit = vec![0u32; chart.len()];
            unit[k] = 1;
            let unit = Monomial::from_exponents(unit);
            let rest = r.filter_terms(|m| *m != unit);
            let expr = rest.scale(&(-Rational::one() / c));
            let step = substitution(chart, &[(k, expr.clone())])
                .map_err(|e| fail(EliminationFailure::Algebra(e)))?;
            for (_, earlier) in rules.iter_mut() {
                *earlier = step
                    .apply(earlier)
                    .map_err(|e| fail(EliminationFailure::Algebra(e)))?;
            }
            rules.push((k, expr));
            current = substitution(chart, &rules).map_err(|e| fail(EliminationFailure::Algebra(e)))?;
        }
        Ok(Elimination {
            chart: chart.clone(),
            rules,
            substitution: current,
        })
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    /// `(solved coordinate, its normal form)` in solving order.
    pub fn rules(&self) -> &[(usize, GradedPolynomial)] {
        &self.rules
    }

    pub fn is_solved(&self, k: usize) -> bool {
        self.rules.iter().any(|(j, _)| *j == k)
    }

    pub fn normal_form(&self, f: &GradedPolynomial) -> Result<GradedPolynomial, AlgebraError> {
        self.substitution.apply(f)
    }

    /// Ideal membership: the normal form vanishes.
    pub fn contains(&self, f: &GradedPolynomial) -> Result<bool, AlgebraError> {
        Ok(self.normal_form(f)?.is_zero())
    }
}

/// Inverts a declared map `target coordinate c ↦ images[c]` (functions on
/// `source`) on an extended chart, so that functions built from the images
/// can be rewritten in target coordinates.
#[derive(Clone, Debug)]
pub struct Expressor {
    extended: Arc<Chart>,
    target: Arc<Chart>,
    offset: usize,
    elimination: Elimination,
}

fn fresh_name(source: &Chart, base: &str) -> String {
    let mut name = format!("<{base}>");
    while source.index_of(&name).is_some() {
        name.push('\'');
    }
    name
}

impl Expressor {
    /// `frozen` marks source coordinates that may not be solved for. The
    /// error carries the index of the target coordinate whose relation fails.
    pub fn new(
        source: &Arc<Chart>,
        target: &Arc<Chart>,
        images: &[GradedPolynomial],
        frozen: impl Fn(usize) -> bool,
    ) -> Result<Self, (usize, EliminationFailure)> {
        let mut coords: Vec<Coordinate> = source.coordinates().to_vec();
        for c in target.coordinates() {
            coords.push(Coordinate::new(fresh_name(source, c.name()), c.degree()));
        }
        let extended = Chart::new(coords).map_err(|e| (0, EliminationFailure::Algebra(e)))?;
        let offset = source.len();
        let mut relations = Vec::with_capacity(images.len());
        for (c, img) in images.iter().enumerate() {
            let lifted = img
                .transfer(&extended)
                .map_err(|e| (c, EliminationFailure::Algebra(e)))?;
            relations.push(&GradedPolynomial::coordinate(&extended, offset + c) - &lifted);
        }
        let elimination = Elimination::new(&extended, &relations, |k| k < offset && !frozen(k))?;
        Ok(Expressor {
            extended,
            target: target.clone(),
            offset,
            elimination,
        })
    }

    /// Rewrites `f` in target coordinates; `Err` carries the leftover
    /// expression when source coordinates survive the rewriting.
    pub fn express(&self, f: &GradedPolynomial) -> Result<GradedPolynomial, String> {
        let lifted = f.transfer(&self.extended).map_err(|e| e.to_string())?;
        let nf = self.elimination.normal_form(&lifted).map_err(|e| e.to_string())?;
        let stuck = nf
            .terms()
            .any(|(m, _)| m.exponents()[..self.offset].iter().any(|&e| e > 0));
        if stuck {
            return Err(nf.to_string());
        }
        Ok(GradedPolynomial::from_terms(
            &self.target,
            nf.terms()
                .map(|(m, c)| (m.exponents()[self.offset..].to_vec(), c.clone())),
        ))
    }
}

/// Evaluates `f` with every coordinate replaced by the given value, treating
/// coordinates as commuting indeterminates.
pub fn evaluate(f: &GradedPolynomial, point: &[Rational]) -> Rational {
    let mut total = Rational::zero();
    for (m, c) in f.terms() {
        let mut term = c.clone();
        for (i, &e) in m.exponents().iter().enumerate() {
            for _ in 0..e {
                term *= &point[i];
            }
        }
        total += term;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_algebra::rational;

    #[test]
    fn solves_and_back_substitutes() {
        let chart = Chart::from_pairs(&[("a", 0), ("b", 0), ("c", 0)]).unwrap();
        let v = |n| GradedPolynomial::var(&chart, n).unwrap();
        // a + b*c, then b - c
        let g1 = &v("a") + &(&v("b") * &v("c"));
        let g2 = &v("b") - &v("c");
        let e = Elimination::new(&chart, &[g1.clone(), g2], |_| true).unwrap();
        assert!(e.contains(&g1).unwrap());
        let nf = e.normal_form(&v("a")).unwrap();
        assert_eq!(nf, (&v("c") * &v("c")).scale(&rational(-1)));
    }

    #[test]
    fn redundant_and_nonlinear_generators_fail() {
        let chart = Chart::from_pairs(&[("a", 0), ("b", 0)]).unwrap();
        let v = |n| GradedPolynomial::var(&chart, n).unwrap();
        let e = Elimination::new(&chart, &[v("a"), v("a").scale(&rational(2))], |_| true);
        assert_eq!(e.unwrap_err(), (1, EliminationFailure::Redundant));
        let e = Elimination::new(&chart, &[&v("a") * &v("b")], |_| true);
        assert!(matches!(e.unwrap_err(), (0, EliminationFailure::NoPivot(_))));
    }

    #[test]
    fn expresses_invariants_in_new_coordinates() {
        let source = Chart::from_pairs(&[("x", 0), ("y", 0), ("z", 0)]).unwrap();
        let target = Chart::from_pairs(&[("u", 0), ("w", 0)]).unwrap();
        let v = |n| GradedPolynomial::var(&source, n).unwrap();
        let images = vec![&v("x") + &v("y"), v("y")];
        let ex = Expressor::new(&source, &target, &images, |_| false).unwrap();
        let got = ex.express(&(&v("x") * &v("y"))).unwrap();
        let t = |n| GradedPolynomial::var(&target, n).unwrap();
        assert_eq!(got, &(&t("u") * &t("w")) - &(&t("w") * &t("w")));
        assert!(ex.express(&v("z")).is_err());
    }

    #[test]
    fn evaluation_at_a_point() {
        let chart = Chart::from_pairs(&[("x", 0), ("y", 0)]).unwrap();
        let f = GradedPolynomial::from_terms(&chart, [(vec![2, 1], rational(3)), (vec![0, 0], rational(1))]);
        assert_eq!(evaluate(&f, &[rational(2), rational(-1)]), rational(-11));
    }
}
