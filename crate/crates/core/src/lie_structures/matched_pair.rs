//! Matched pairs of Lie algebras as quadratic degree 2 homotopy Lie
//! bialgebras on `h[1] ⊕ g`.

use num_traits::Zero;

use super::{GradedLieAlgebra, HomotopyLieBialgebra, LieError};
use crate::graded_algebra::{ratio, rational, GradedPolynomial, Rational};
use crate::report::CheckReport;

/// `g` acting on `h`, a Lie bracket on `h*`, and `h*` acting on `g*`.
///
/// The basis of `h` is dual to the basis of `h*`, and shares its names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchedPairData {
    g: GradedLieAlgebra,
    dual: GradedLieAlgebra,
    act: Vec<Vec<Vec<Rational>>>,
    coact: Vec<Vec<Vec<Rational>>>,
}

impl MatchedPairData {
    /// `act[a][i]` is `x_a · h_i` in the basis of `h`; `coact[i][a]` is
    /// `ξ_i · ε_a` in the basis of `g*` dual to `g`.
    pub fn new(
        g: GradedLieAlgebra,
        dual: GradedLieAlgebra,
        act: Vec<Vec<Vec<Rational>>>,
        coact: Vec<Vec<Vec<Rational>>>,
    ) -> Result<Self, LieError> {
        for alg in [&g, &dual] {
            if let Some(i) = (0..alg.dim()).find(|&i| alg.degree(i) != 0) {
                return Err(LieError::NotOrdinary(alg.name(i).to_string(), alg.degree(i)));
            }
        }
        let (dg, dk) = (g.dim(), dual.dim());
        let shape_ok = act.len() == dg
            && act.iter().all(|r| r.len() == dk && r.iter().all(|v| v.len() == dk))
            && coact.len() == dk
            && coact.iter().all(|r| r.len() == dg && r.iter().all(|v| v.len() == dg));
        if !shape_ok {
            return Err(LieError::Dimension {
                expected: dg * dk,
                found: act.iter().map(Vec::len).sum::<usize>() + coact.iter().map(Vec::len).sum::<usize>(),
            });
        }
        Ok(MatchedPairData {
            g,
            dual,
            act,
            coact,
        })
    }

    pub fn algebra(&self) -> &GradedLieAlgebra {
        &self.g
    }

    pub fn dual(&self) -> &GradedLieAlgebra {
        &self.dual
    }

    pub fn act(&self) -> &[Vec<Vec<Rational>>] {
        &self.act
    }

    pub fn coact(&self) -> &[Vec<Vec<Rational>>] {
        &self.coact
    }

    /// The graded Lie algebra `h[1] ⊕ g`: `h` in degree -1 first, then `g`.
    pub fn total_algebra(&self) -> Result<GradedLieAlgebra, LieError> {
        let (dg, dk) = (self.g.dim(), self.dual.dim());
        let mut basis: Vec<(String, i64)> =
            self.dual.names().iter().map(|n| (n.clone(), -1)).collect();
        basis.extend(self.g.names().iter().map(|n| (n.clone(), 0)));
        let total = dk + dg;
        let mut brackets = Vec::new();
        for a in 0..dg {
            for b in 0..dg {
                let mut v = vec![Rational::zero(); dk];
                v.extend(self.g.bracket_basis(a, b).iter().cloned());
                brackets.push((dk + a, dk + b, v));
            }
            for i in 0..dk {
                let mut v = self.act[a][i].clone();
                v.resize(total, Rational::zero());
                brackets.push((dk + a, i, v));
            }
        }
        let alg = GradedLieAlgebra::new(basis, brackets)?;
        let jacobi = alg.check_graded_jacobi();
        if let Some((x, y, z)) = jacobi.witness {
            return Err(LieError::NotAnAction(
                alg.name(x).to_string(),
                alg.name(y).to_string(),
                alg.name(z).to_string(),
            ));
        }
        Ok(alg)
    }
}

/// The quadratic differential on functions on `h* ⊕ g*[1]`: the
/// Chevalley–Eilenberg differential of the bracket on `h*` and of the
/// `h*`-action on `g*`. Returns the candidate and its check report.
pub fn matched_pair_to_bialgebra(
    data: &MatchedPairData,
) -> Result<(HomotopyLieBialgebra, CheckReport), LieError> {
    let total = data.total_algebra()?;
    let (dg, dk) = (data.g.dim(), data.dual.dim());
    let dual = total.realize_shifted_dual(2)?;
    let chart = dual.chart();
    let h = |i: usize| GradedPolynomial::coordinate(chart, i);
    let x = |a: usize| GradedPolynomial::coordinate(chart, dk + a);
    let mut images = Vec::with_capacity(dk + dg);
    for k in 0..dk {
        let mut img = GradedPolynomial::zero(chart);
        for i in 0..dk {
            for j in 0..dk {
                let c = &data.dual.bracket_basis(i, j)[k];
                if !c.is_zero() {
                    img += &(&h(i) * &h(j)).scale(&(c * ratio(-1, 2)));
                }
            }
        }
        images.push(img);
    }
    for b in 0..dg {
        let mut img = GradedPolynomial::zero(chart);
        for i in 0..dk {
            for a in 0..dg {
                let c = &data.coact[i][a][b];
                if !c.is_zero() {
                    img += &(&h(i) * &x(a)).scale(&(c * rational(-1)));
                }
            }
        }
        images.push(img);
    }
    let b = HomotopyLieBialgebra::from_images(total, 2, images)?;
    let report = b.check();
    Ok((b, report))
}

pub fn is_matched_pair(data: &MatchedPairData) -> Result<bool, LieError> {
    Ok(matched_pair_to_bialgebra(data)?.1.passed())
}
