//! Left-central Courant algebras and the DGLA `h[2] ⊕ a[1] ⊕ g` they
//! determine, with `h = ker p`.

use num_traits::Zero;

use super::{render_combination, unit_vector, Dgla, GradedLieAlgebra, LieError, StructureConstants};
use crate::graded_algebra::Rational;
use crate::linalg;

/// A space `a` with a bilinear bracket and a linear map `p: a -> g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CourantAlgebraData {
    g: GradedLieAlgebra,
    names: Vec<String>,
    bracket: StructureConstants,
    p: Vec<Vec<Rational>>,
}

/// The DGLA built from a Courant algebra, together with the kernel basis
/// (in `a` coordinates) and the lifts used.
#[derive(Clone, Debug)]
pub struct CourantDgla {
    pub dgla: Dgla,
    pub kernel: Vec<Vec<Rational>>,
    pub lifts: Vec<Vec<Rational>>,
}

impl CourantAlgebraData {
    /// `brackets` lists `[[a_i, a_j]]` for ordered pairs (unlisted pairs are
    /// zero); `p[i]` is `p(a_i)` in the basis of `g`.
    pub fn new(
        g: GradedLieAlgebra,
        names: Vec<String>,
        brackets: Vec<(usize, usize, Vec<Rational>)>,
        p: Vec<Vec<Rational>>,
    ) -> Result<Self, LieError> {
        if let Some(i) = (0..g.dim()).find(|&i| g.degree(i) != 0) {
            return Err(LieError::NotOrdinary(g.name(i).to_string(), g.degree(i)));
        }
        let dim = names.len();
        let mut bracket = vec![vec![vec![Rational::zero(); dim]; dim]; dim];
        for (i, j, v) in brackets {
            if v.len() != dim {
                return Err(LieError::Dimension {
                    expected: dim,
                    found: v.len(),
                });
            }
            bracket[i][j] = v;
        }
        if p.len() != dim {
            return Err(LieError::Dimension {
                expected: dim,
                found: p.len(),
            });
        }
        if let Some(row) = p.iter().find(|r| r.len() != g.dim()) {
            return Err(LieError::Dimension {
                expected: g.dim(),
                found: row.len(),
            });
        }
        Ok(CourantAlgebraData {
            g,
            names,
            bracket,
            p,
        })
    }

    pub fn algebra(&self) -> &GradedLieAlgebra {
        &self.g
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &[Rational] {
        &self.bracket[i][j]
    }

    pub fn projection(&self) -> &[Vec<Rational>] {
        &self.p
    }

    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let dim = self.dim();
        let mut out = vec![Rational::zero(); dim];
        for i in (0..dim).filter(|&i| !u[i].is_zero()) {
            for j in (0..dim).filter(|&j| !v[j].is_zero()) {
                let c = &u[i] * &v[j];
                for k in 0..dim {
                    out[k] += &c * &self.bracket[i][j][k];
                }
            }
        }
        out
    }

    pub fn project(&self, u: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.g.dim()];
        for (i, c) in u.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for k in 0..self.g.dim() {
                out[k] += c * &self.p[i][k];
            }
        }
        out
    }

    /// The matrix of `p` with one row per basis element of `g`.
    fn projection_matrix(&self) -> linalg::Matrix {
        (0..self.g.dim())
            .map(|k| (0..self.dim()).map(|i| self.p[i][k].clone()).collect())
            .collect()
    }

    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        linalg::kernel(&self.projection_matrix(), self.dim())
    }

    /// Lifts of the basis of `g` supported on the pivot columns of `p`.
    pub fn canonical_lifts(&self) -> Result<Vec<Vec<Rational>>, LieError> {
        let mut m = self.projection_matrix();
        let pivots = linalg::row_reduce(&mut m);
        if pivots.len() < self.g.dim() {
            return Err(LieError::NotSurjective {
                rank: pivots.len(),
                dim: self.g.dim(),
            });
        }
        let restricted: linalg::Matrix = self
            .projection_matrix()
            .iter()
            .map(|row| pivots.iter().map(|&c| row[c].clone()).collect())
            .collect();
        (0..self.g.dim())
            .map(|k| {
                let x = linalg::solve(&restricted, &unit_vector(self.g.dim(), k))
                    .ok_or(LieError::NotSurjective {
                        rank: pivots.len(),
                        dim: self.g.dim(),
                    })?;
                let mut b = vec![Rational::zero(); self.dim()];
                for (&c, v) in pivots.iter().zip(x) {
                    b[c] = v;
                }
                Ok(b)
            })
            .collect()
    }

    /// The Leibniz identity `[[a1,[[a2,a3]]]] = [[[[a1,a2]],a3]] + [[a2,[[a1,a3]]]]`
    /// and `p[[a1,a2]] = [p a1, p a2]` on basis elements.
    pub fn check_axioms(&self) -> Result<(), LieError> {
        let dim = self.dim();
        let e = |i| unit_vector(dim, i);
        for i in 0..dim {
            for j in 0..dim {
                let pij = self.project(&self.bracket(&e(i), &e(j)));
                let gij = self.g.bracket(&self.project(&e(i)), &self.project(&e(j)));
                if pij != gij {
                    return Err(LieError::CourantAxiom(format!(
                        "p is not a homomorphism on ({}, {})",
                        self.names[i], self.names[j]
                    )));
                }
                for k in 0..dim {
                    let lhs = self.bracket(&e(i), &self.bracket(&e(j), &e(k)));
                    let r1 = self.bracket(&self.bracket(&e(i), &e(j)), &e(k));
                    let r2 = self.bracket(&e(j), &self.bracket(&e(i), &e(k)));
                    if (0..dim).any(|t| lhs[t] != &r1[t] + &r2[t]) {
                        return Err(LieError::CourantAxiom(format!(
                            "Leibniz identity fails on ({}, {}, {})",
                            self.names[i], self.names[j], self.names[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn render(&self, v: &[Rational]) -> String {
        render_combination(&self.names, v)
    }
}

/// Builds the DGLA with the canonical lifts.
pub fn courant_to_dgla(data: &CourantAlgebraData) -> Result<CourantDgla, LieError> {
    data.check_axioms()?;
    let lifts = data.canonical_lifts()?;
    courant_to_dgla_with_lifts(data, &lifts)
}

/// Builds the DGLA using the given lifts `b_k` with `p(b_k) = g_k`.
pub fn courant_to_dgla_with_lifts(
    data: &CourantAlgebraData,
    lifts: &[Vec<Rational>],
) -> Result<CourantDgla, LieError> {
    data.check_axioms()?;
    let g = data.algebra();
    let rank = linalg::rank(&data.projection_matrix());
    if rank < g.dim() {
        return Err(LieError::NotSurjective { rank, dim: g.dim() });
    }
    for (k, b) in lifts.iter().enumerate() {
        if data.project(b) != unit_vector(g.dim(), k) {
            return Err(LieError::BadLift(g.name(k).to_string()));
        }
    }
    let kernel = data.kernel();
    for h in &kernel {
        for j in 0..data.dim() {
            let v = data.bracket(h, &unit_vector(data.dim(), j));
            if v.iter().any(|c| !c.is_zero()) {
                return Err(LieError::NotLeftCentral(
                    data.render(h),
                    data.names[j].clone(),
                    data.render(&v),
                ));
            }
        }
    }

    let (kd, ad, gd) = (kernel.len(), data.dim(), g.dim());
    let mut basis: Vec<(String, i64)> = (1..=kd).map(|i| (format!("ker{i}"), -2)).collect();
    basis.extend(data.names.iter().map(|n| (n.clone(), -1)));
    basis.extend(g.names().iter().map(|n| (n.clone(), 0)));

    // coordinates of a kernel element in the kernel basis
    let kernel_matrix: linalg::Matrix = (0..ad)
        .map(|t| kernel.iter().map(|h| h[t].clone()).collect())
        .collect();
    let to_kernel = |v: &[Rational]| -> Result<Vec<Rational>, LieError> {
        if kd == 0 {
            return if v.iter().all(Zero::is_zero) {
                Ok(Vec::new())
            } else {
                Err(LieError::CourantAxiom(format!(
                    "{} should lie in ker p",
                    data.render(v)
                )))
            };
        }
        linalg::solve(&kernel_matrix, v).ok_or_else(|| {
            LieError::CourantAxiom(format!("{} should lie in ker p", data.render(v)))
        })
    };
    let lift = |gv: &[Rational]| -> Vec<Rational> {
        let mut out = vec![Rational::zero(); ad];
        for (k, c) in gv.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for t in 0..ad {
                out[t] += c * &lifts[k][t];
            }
        }
        out
    };
    let split = |v: &[Rational]| -> (Vec<Rational>, Vec<Rational>, Vec<Rational>) {
        let hv: Vec<Rational> = {
            // kernel part expressed back in `a` coordinates
            let mut out = vec![Rational::zero(); ad];
            for (i, c) in v[..kd].iter().enumerate() {
                for t in 0..ad {
                    out[t] += c * &kernel[i][t];
                }
            }
            out
        };
        (hv, v[kd..kd + ad].to_vec(), v[kd + ad..].to_vec())
    };

    // the bracket of (h1, a1, g1) with (h2, a2, g2), component by component
    let mut brackets = Vec::new();
    let total = kd + ad + gd;
    for i in 0..total {
        for j in 0..total {
            let (h1, a1, g1) = split(&unit_vector(total, i));
            let (h2, a2, g2) = split(&unit_vector(total, j));
            let (b1, b2) = (lift(&g1), lift(&g2));
            let mut hpart = data.bracket(&b1, &h2);
            let terms = [
                data.bracket(&a1, &a2),
                data.bracket(&a2, &a1),
            ];
            for t in &terms {
                hpart = hpart.iter().zip(t).map(|(x, y)| x + y).collect();
            }
            let last = data.bracket(&b2, &h1);
            hpart = hpart.iter().zip(&last).map(|(x, y)| x - y).collect();
            let apart: Vec<Rational> = data
                .bracket(&b1, &a2)
                .iter()
                .zip(&data.bracket(&b2, &a1))
                .map(|(x, y)| x - y)
                .collect();
            let gpart = g.bracket(&g1, &g2);
            let mut v = to_kernel(&hpart)?;
            v.extend(apart);
            v.extend(gpart);
            if v.iter().any(|c| !c.is_zero()) {
                brackets.push((i, j, v));
            }
        }
    }
    let algebra = GradedLieAlgebra::new(basis, brackets)?;

    // the exact sequence h -> a -> g as a degree 1 map
    let mut d = vec![vec![Rational::zero(); total]; total];
    for (i, h) in kernel.iter().enumerate() {
        for t in 0..ad {
            d[i][kd + t] = h[t].clone();
        }
    }
    for j in 0..ad {
        for k in 0..gd {
            d[kd + j][kd + ad + k] = data.p[j][k].clone();
        }
    }
    let dgla = Dgla::new(algebra, d)?;
    Ok(CourantDgla {
        dgla,
        kernel,
        lifts: lifts.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_algebra::rational;

    fn r(n: i64) -> Rational {
        rational(n)
    }

    #[test]
    fn abelian_split_sequence() {
        // a = g ⊕ h, all brackets zero, p the projection onto g
        let g = GradedLieAlgebra::abelian(vec![("g1".into(), 0)]);
        let data = CourantAlgebraData::new(
            g,
            vec!["s".into(), "t".into()],
            vec![],
            vec![vec![r(1)], vec![r(0)]],
        )
        .unwrap();
        let out = courant_to_dgla(&data).unwrap();
        assert_eq!(out.kernel, vec![vec![r(0), r(1)]]);
        assert!(out.dgla.check().passed());
        let alg = out.dgla.algebra();
        assert_eq!(alg.names(), &["ker1", "s", "t", "g1"]);
        assert!(alg.constants().iter().flatten().flatten().all(Zero::is_zero));
    }

    #[test]
    fn non_surjective_projection_rejected() {
        let g = GradedLieAlgebra::abelian(vec![("g1".into(), 0), ("g2".into(), 0)]);
        let data =
            CourantAlgebraData::new(g, vec!["s".into()], vec![], vec![vec![r(1), r(0)]]).unwrap();
        assert!(matches!(
            courant_to_dgla(&data),
            Err(LieError::NotSurjective { rank: 1, dim: 2 })
        ));
    }
}
