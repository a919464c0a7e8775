//! Brute-force reference implementations used only by tests.
//!
//! Nothing here shares code with `graded-poisson`. Polynomials are kept as
//! words of variable indices and normalized by bubble sort, brackets are
//! expanded with the Leibniz rules one factor at a time, and the Lie-theoretic
//! identities are evaluated directly on structure constants.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn odd(d: i64) -> bool {
    d.rem_euclid(2) == 1
}

/// Polynomial in variables `0..degrees.len()`, stored as sorted words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    degrees: Vec<i64>,
    terms: BTreeMap<Vec<usize>, Q>,
}

impl Poly {
    pub fn zero(degrees: &[i64]) -> Self {
        Poly {
            degrees: degrees.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(degrees: &[i64], c: Q) -> Self {
        Poly::word(degrees, &[], c)
    }

    pub fn var(degrees: &[i64], i: usize) -> Self {
        Poly::word(degrees, &[i], Q::one())
    }

    /// `c` times the product of the variables in `word`, in the given order.
    pub fn word(degrees: &[i64], word: &[usize], c: Q) -> Self {
        let mut p = Poly::zero(degrees);
        p.push(word.to_vec(), c);
        p
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn push(&mut self, mut word: Vec<usize>, mut c: Q) {
        if c.is_zero() {
            return;
        }
        // bubble sort, one sign per transposition of two odd factors
        let len = word.len();
        for pass in 0..len {
            for j in 0..len.saturating_sub(pass + 1) {
                if word[j] > word[j + 1] {
                    if odd(self.degrees[word[j]]) && odd(self.degrees[word[j + 1]]) {
                        c = -c;
                    }
                    word.swap(j, j + 1);
                }
            }
        }
        if word
            .windows(2)
            .any(|w| w[0] == w[1] && odd(self.degrees[w[0]]))
        {
            return;
        }
        let entry = self.terms.entry(word.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&word);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.push(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, k: &Q) -> Poly {
        let mut out = Poly::zero(&self.degrees);
        for (w, c) in &self.terms {
            out.push(w.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(&self.degrees);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.push(w, c1 * c2);
            }
        }
        out
    }

    pub fn word_degree(&self, w: &[usize]) -> i64 {
        w.iter().map(|&i| self.degrees[i]).sum()
    }

    /// Degree of a homogeneous nonzero polynomial.
    pub fn degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|w| self.word_degree(w));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Terms as (exponent vector, coefficient), in no particular order.
    pub fn exponent_terms(&self) -> Vec<(Vec<u32>, Q)> {
        self.terms
            .iter()
            .map(|(w, c)| {
                let mut e = vec![0u32; self.degrees.len()];
                for &i in w {
                    e[i] += 1;
                }
                (e, c.clone())
            })
            .collect()
    }

    /// Builds from (exponent vector, coefficient) pairs, each read as the
    /// ordered product `x_0^e0 x_1^e1 ...`.
    pub fn from_exponent_terms(degrees: &[i64], terms: &[(Vec<u32>, Q)]) -> Poly {
        let mut p = Poly::zero(degrees);
        for (e, c) in terms {
            let word: Vec<usize> = e
                .iter()
                .enumerate()
                .flat_map(|(i, &k)| std::iter::repeat(i).take(k as usize))
                .collect();
            p.push(word, c.clone());
        }
        p
    }

    /// Sets the listed variables to zero.
    pub fn kill(&self, vars: &[usize]) -> Poly {
        let mut out = Poly::zero(&self.degrees);
        for (w, c) in &self.terms {
            if !w.iter().any(|i| vars.contains(i)) {
                out.push(w.clone(), c.clone());
            }
        }
        out
    }

    /// Moves to a smaller variable set through `map` (old index to new);
    /// terms containing an unmapped variable must already be absent.
    pub fn reindex(&self, new_degrees: &[i64], map: &[Option<usize>]) -> Poly {
        let mut out = Poly::zero(new_degrees);
        for (w, c) in &self.terms {
            let nw: Vec<usize> = w
                .iter()
                .map(|&i| map[i].expect("term uses a dropped variable"))
                .collect();
            out.push(nw, c.clone());
        }
        out
    }
}

/// `T*[n]M` in the oracle's own terms: base variables `0..m`, momentum of
/// base variable `i` at `m + i`.
#[derive(Clone, Debug)]
pub struct Cotangent {
    pub base: Vec<i64>,
    pub n: i64,
}

impl Cotangent {
    pub fn new(base: &[i64], n: i64) -> Self {
        Cotangent {
            base: base.to_vec(),
            n,
        }
    }

    pub fn degrees(&self) -> Vec<i64> {
        let mut d = self.base.clone();
        d.extend(self.base.iter().map(|b| self.n - b));
        d
    }

    fn generator(&self, y: usize, z: usize) -> Q {
        let m = self.base.len();
        if y >= m && z == y - m {
            q(1)
        } else if y < m && z == y + m {
            // antisymmetry applied to {p, x} = 1
            let degs = self.degrees();
            if odd(degs[y] - self.n) && odd(degs[z] - self.n) {
                q(1)
            } else {
                q(-1)
            }
        } else {
            Q::zero()
        }
    }

    /// The canonical bracket, expanded by the right Leibniz rule on the
    /// second argument and the left Leibniz rule on the first.
    pub fn bracket(&self, a: &Poly, b: &Poly) -> Poly {
        let degs = self.degrees();
        let mut out = Poly::zero(&degs);
        for (wa, ca) in &a.terms {
            for (wb, cb) in &b.terms {
                let t = self.bracket_words(&degs, wa, wb);
                out = out.add(&t.scale(&(ca * cb)));
            }
        }
        out
    }

    fn bracket_words(&self, degs: &[i64], a: &[usize], b: &[usize]) -> Poly {
        let n = self.n;
        if a.is_empty() || b.is_empty() {
            return Poly::zero(degs);
        }
        let deg = |w: &[usize]| -> i64 { w.iter().map(|&i| degs[i]).sum() };
        if b.len() > 1 {
            // {A, w W} = {A, w} W + (-1)^{(|A|-n)|w|} w {A, W}
            let (w, rest) = (&b[..1], &b[1..]);
            let first = self
                .bracket_words(degs, a, w)
                .mul(&Poly::word(degs, rest, q(1)));
            let sign = if odd((deg(a) - n) * deg(w)) { q(-1) } else { q(1) };
            let second = Poly::word(degs, w, sign).mul(&self.bracket_words(degs, a, rest));
            return first.add(&second);
        }
        if a.len() > 1 {
            // {u U, z} = u {U, z} + (-1)^{|U|(|z|-n)} {u, z} U
            let (u, rest) = (&a[..1], &a[1..]);
            let first = Poly::word(degs, u, q(1)).mul(&self.bracket_words(degs, rest, b));
            let sign = if odd(deg(rest) * (deg(b) - n)) { q(-1) } else { q(1) };
            let second = self
                .bracket_words(degs, u, b)
                .mul(&Poly::word(degs, rest, sign));
            return first.add(&second);
        }
        Poly::constant(degs, self.generator(a[0], b[0]))
    }
}

/// Applies the derivation of degree `d` with the given variable images,
/// factor by factor.
pub fn apply_derivation(d: i64, images: &[Poly], f: &Poly) -> Poly {
    let degs = f.degrees.clone();
    let mut out = Poly::zero(&degs);
    for (w, c) in &f.terms {
        let mut prefix_degree = 0;
        for (k, &i) in w.iter().enumerate() {
            let sign = if odd(d * prefix_degree) { -c.clone() } else { c.clone() };
            let left = Poly::word(&degs, &w[..k], sign);
            let right = Poly::word(&degs, &w[k + 1..], q(1));
            out = out.add(&left.mul(&images[i]).mul(&right));
            prefix_degree += degs[i];
        }
    }
    out
}

/// Affine bivector field on an ordinary manifold:
/// `π^{ij}(x) = constant[i][j] + Σ_m linear[i][j][m] x_m`.
#[derive(Clone, Debug)]
pub struct AffineBivector {
    pub constant: Vec<Vec<Q>>,
    pub linear: Vec<Vec<Vec<Q>>>,
}

impl AffineBivector {
    pub fn dim(&self) -> usize {
        self.constant.len()
    }

    /// Components of the classical Jacobiator
    /// `Σ_l π^{il} ∂_l π^{jk} + cyclic(i, j, k)` as (constant, linear) parts.
    pub fn jacobiator(&self, i: usize, j: usize, k: usize) -> (Q, Vec<Q>) {
        let dim = self.dim();
        let mut constant = Q::zero();
        let mut linear = vec![Q::zero(); dim];
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            for l in 0..dim {
                let d = &self.linear[b][c][l];
                if d.is_zero() {
                    continue;
                }
                constant += &self.constant[a][l] * d;
                for m in 0..dim {
                    linear[m] += &self.linear[a][l][m] * d;
                }
            }
        }
        (constant, linear)
    }

    pub fn is_poisson(&self) -> bool {
        let dim = self.dim();
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let (c, l) = self.jacobiator(i, j, k);
                    if !c.is_zero() || l.iter().any(|x| !x.is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Structure constants `c[i][j][k]` of `[e_i, e_j] = Σ_k c[i][j][k] e_k`.
pub type Constants = Vec<Vec<Vec<Q>>>;

fn lie_bracket(c: &Constants, a: &[Q], b: &[Q]) -> Vec<Q> {
    let dim = a.len();
    let mut out = vec![Q::zero(); dim];
    for i in 0..dim {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..dim {
            if b[j].is_zero() {
                continue;
            }
            for k in 0..dim {
                out[k] += &a[i] * &b[j] * &c[i][j][k];
            }
        }
    }
    out
}

fn unit(dim: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); dim];
    v[i] = q(1);
    v
}

/// First basis triple violating
/// `[a,[b,c]] = [[a,b],c] + (-1)^{|a||b|} [b,[a,c]]`.
pub fn graded_jacobi_failure(degrees: &[i64], c: &Constants) -> Option<(usize, usize, usize)> {
    let dim = degrees.len();
    for a in 0..dim {
        for b in 0..dim {
            for cc in 0..dim {
                let (ea, eb, ec) = (unit(dim, a), unit(dim, b), unit(dim, cc));
                let lhs = lie_bracket(c, &ea, &lie_bracket(c, &eb, &ec));
                let r1 = lie_bracket(c, &lie_bracket(c, &ea, &eb), &ec);
                let mut r2 = lie_bracket(c, &eb, &lie_bracket(c, &ea, &ec));
                if odd(degrees[a] * degrees[b]) {
                    r2.iter_mut().for_each(|x| *x = -x.clone());
                }
                if (0..dim).any(|k| lhs[k] != &r1[k] + &r2[k]) {
                    return Some((a, b, cc));
                }
            }
        }
    }
    None
}

/// A pair of ordinary Lie algebras `g`, `k` acting on each other:
/// `rho[x][ξ]` is `x ▷ ξ ∈ k` and `sigma[ξ][x]` is `ξ ▷ x ∈ g`, all on basis
/// elements.
#[derive(Clone, Debug)]
pub struct MatchedPair {
    pub g: Constants,
    pub k: Constants,
    pub rho: Vec<Vec<Vec<Q>>>,
    pub sigma: Vec<Vec<Vec<Q>>>,
}

fn apply_linear(m: &[Vec<Q>], v: &[Q], out_dim: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); out_dim];
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        for r in 0..out_dim {
            out[r] += vi * &m[i][r];
        }
    }
    out
}

fn add(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

impl MatchedPair {
    /// Builds the classical data from actions given on `h` and `g*`:
    /// `act[a][i]` is `x_a · h_i ∈ h`, `coact[i][a]` is `ξ^i · ε^a ∈ g*`
    /// (with `ξ` dual to `h`, `ε` dual to `g`). The dual of an action `R` is `-R^T`.
    pub fn from_dual_data(
        g: Constants,
        k: Constants,
        act: &[Vec<Vec<Q>>],
        coact: &[Vec<Vec<Q>>],
    ) -> Self {
        let dg = g.len();
        let dk = k.len();
        let rho = (0..dg)
            .map(|a| {
                (0..dk)
                    .map(|m| (0..dk).map(|i| -act[a][i][m].clone()).collect())
                    .collect()
            })
            .collect();
        let sigma = (0..dk)
            .map(|i| {
                (0..dg)
                    .map(|b| (0..dg).map(|a| -coact[i][a][b].clone()).collect())
                    .collect()
            })
            .collect();
        MatchedPair { g, k, rho, sigma }
    }

    fn rho_v(&self, x: &[Q], xi: &[Q]) -> Vec<Q> {
        let dk = self.k.len();
        let mut out = vec![Q::zero(); dk];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            let img = apply_linear(&self.rho[a], xi, dk);
            for r in 0..dk {
                out[r] += xa * &img[r];
            }
        }
        out
    }

    fn sigma_v(&self, xi: &[Q], x: &[Q]) -> Vec<Q> {
        let dg = self.g.len();
        let mut out = vec![Q::zero(); dg];
        for (i, xii) in xi.iter().enumerate() {
            if xii.is_zero() {
                continue;
            }
            let img = apply_linear(&self.sigma[i], x, dg);
            for r in 0..dg {
                out[r] += xii * &img[r];
            }
        }
        out
    }

    /// `rho` is a representation of `g`.
    pub fn rho_is_action(&self) -> bool {
        let (dg, dk) = (self.g.len(), self.k.len());
        for a in 0..dg {
            for b in 0..dg {
                for m in 0..dk {
                    let (x, y, xi) = (unit(dg, a), unit(dg, b), unit(dk, m));
                    let lhs = self.rho_v(&lie_bracket(&self.g, &x, &y), &xi);
                    let rhs = sub(
                        &self.rho_v(&x, &self.rho_v(&y, &xi)),
                        &self.rho_v(&y, &self.rho_v(&x, &xi)),
                    );
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Both algebras are Lie, both maps are actions, and
    /// `x▷[ξ,η] = [x▷ξ,η] + [ξ,x▷η] + (η▷x)▷ξ - (ξ▷x)▷η`,
    /// `ξ▷[x,y] = [ξ▷x,y] + [x,ξ▷y] + (y▷ξ)▷x - (x▷ξ)▷y`.
    pub fn holds(&self) -> bool {
        let (dg, dk) = (self.g.len(), self.k.len());
        if graded_jacobi_failure(&vec![0; dg], &self.g).is_some()
            || graded_jacobi_failure(&vec![0; dk], &self.k).is_some()
            || !self.rho_is_action()
        {
            return false;
        }
        for i in 0..dk {
            for j in 0..dk {
                for a in 0..dg {
                    let (xi, eta, x) = (unit(dk, i), unit(dk, j), unit(dg, a));
                    // σ is an action of k
                    let lhs = self.sigma_v(&lie_bracket(&self.k, &xi, &eta), &x);
                    let rhs = sub(
                        &self.sigma_v(&xi, &self.sigma_v(&eta, &x)),
                        &self.sigma_v(&eta, &self.sigma_v(&xi, &x)),
                    );
                    if lhs != rhs {
                        return false;
                    }
                    let lhs = self.rho_v(&x, &lie_bracket(&self.k, &xi, &eta));
                    let rhs = sub(
                        &add(
                            &add(
                                &lie_bracket(&self.k, &self.rho_v(&x, &xi), &eta),
                                &lie_bracket(&self.k, &xi, &self.rho_v(&x, &eta)),
                            ),
                            &self.rho_v(&self.sigma_v(&eta, &x), &xi),
                        ),
                        &self.rho_v(&self.sigma_v(&xi, &x), &eta),
                    );
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        for i in 0..dk {
            for a in 0..dg {
                for b in 0..dg {
                    let (xi, x, y) = (unit(dk, i), unit(dg, a), unit(dg, b));
                    let lhs = self.sigma_v(&xi, &lie_bracket(&self.g, &x, &y));
                    let rhs = sub(
                        &add(
                            &add(
                                &lie_bracket(&self.g, &self.sigma_v(&xi, &x), &y),
                                &lie_bracket(&self.g, &x, &self.sigma_v(&xi, &y)),
                            ),
                            &self.sigma_v(&self.rho_v(&y, &xi), &x),
                        ),
                        &self.sigma_v(&self.rho_v(&x, &xi), &y),
                    );
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Brackets of a Courant-type space: `bracket[i][j]` is `[[a_i, a_j]]` in the
/// basis of `a`. Checks the left Leibniz identity on basis triples.
pub fn loday_failure(bracket: &Constants) -> Option<(usize, usize, usize)> {
    let dim = bracket.len();
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                let (a, b, c) = (unit(dim, i), unit(dim, j), unit(dim, k));
                let lhs = lie_bracket(bracket, &a, &lie_bracket(bracket, &b, &c));
                let rhs = add(
                    &lie_bracket(bracket, &lie_bracket(bracket, &a, &b), &c),
                    &lie_bracket(bracket, &b, &lie_bracket(bracket, &a, &c)),
                );
                if lhs != rhs {
                    return Some((i, j, k));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_variables_anticommute() {
        let d = [1, 1];
        let ab = Poly::word(&d, &[0, 1], q(1));
        let ba = Poly::word(&d, &[1, 0], q(1));
        assert_eq!(ab.add(&ba), Poly::zero(&d));
        assert!(Poly::word(&d, &[0, 0], q(1)).is_zero());
    }

    #[test]
    fn defining_relation() {
        let t = Cotangent::new(&[0], 1);
        let d = t.degrees();
        let p = Poly::var(&d, 1);
        let x = Poly::var(&d, 0);
        assert_eq!(t.bracket(&p, &x), Poly::constant(&d, q(1)));
        assert_eq!(t.bracket(&x, &p), Poly::constant(&d, q(-1)));
    }

    #[test]
    fn so3_is_poisson_and_perturbation_is_not() {
        let mut lin = vec![vec![vec![q(0); 3]; 3]; 3];
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            lin[i][j][k] = q(1);
            lin[j][i][k] = q(-1);
        }
        let pi = AffineBivector {
            constant: vec![vec![q(0); 3]; 3],
            linear: lin.clone(),
        };
        assert!(pi.is_poisson());
        lin[0][1][0] = q(1);
        lin[1][0][0] = q(-1);
        let bad = AffineBivector {
            constant: vec![vec![q(0); 3]; 3],
            linear: lin,
        };
        assert!(!bad.is_poisson());
    }

    #[test]
    fn one_dimensional_pairs_always_match() {
        let zero1 = vec![vec![vec![q(0)]]];
        let mp = MatchedPair {
            g: zero1.clone(),
            k: zero1,
            rho: vec![vec![vec![q(-1)]]],
            sigma: vec![vec![vec![q(1)]]],
        };
        assert!(mp.holds());
    }
}
