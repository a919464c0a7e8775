//! Homotopy Poisson structures: degree `n + 1` elements `π` of `T*[n]M`
//! with `{π, π} = 0`, their derived brackets and the correspondence with
//! degree-1 differentials.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graded_algebra::{
    parity, ratio, rational, AlgebraError, AlgebraMorphism, Derivation, GradedPolynomial,
    Homogeneity,
};
use crate::report::CheckReport;
use crate::shifted_cotangent::{CotangentChart, CotangentError, MultiVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PoissonError {
    #[error("structure element is not homogeneous")]
    Inhomogeneous,
    #[error("structure element has degree {found}, expected {expected}")]
    WrongDegree { expected: i64, found: i64 },
    #[error("master equation fails: {{π, π}} = {0}")]
    MasterEquation(String),
    #[error("argument `{0}` is not a base function")]
    ContainsMomenta(String),
    #[error("differential has degree {0}, expected 1")]
    DifferentialDegree(i64),
    #[error("differential does not square to zero on `{coordinate}`: {residual}")]
    NotSquareZero { coordinate: String, residual: String },
    #[error("differential is not a derivation of the bracket on ({0}, {1}): {2}")]
    NotBracketDerivation(String, String, String),
    #[error("differential is not Hamiltonian; recovered element gives {0}")]
    NotHamiltonian(String),
    #[error("component of momentum length {0} present; only lengths 0, 1, 2 allowed")]
    HigherComponents(u32),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Cotangent(#[from] CotangentError),
}

/// Result of evaluating `{π, π}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MasterEquation {
    pub holds: bool,
    pub residual: MultiVector,
}

fn require_degree(cc: &CotangentChart, pi: &MultiVector) -> Result<(), PoissonError> {
    if **pi.chart() != **cc.chart() {
        return Err(AlgebraError::ChartMismatch.into());
    }
    match pi.homogeneity() {
        Homogeneity::Zero => Ok(()),
        Homogeneity::Mixed => Err(PoissonError::Inhomogeneous),
        Homogeneity::Degree(d) if d == cc.shift() + 1 => Ok(()),
        Homogeneity::Degree(d) => Err(PoissonError::WrongDegree {
            expected: cc.shift() + 1,
            found: d,
        }),
    }
}

pub fn check_master_equation(
    cc: &CotangentChart,
    pi: &MultiVector,
) -> Result<MasterEquation, PoissonError> {
    require_degree(cc, pi)?;
    let pi = cc.lift(pi)?;
    let residual = cc.bracket(&pi, &pi)?;
    Ok(MasterEquation {
        holds: residual.is_zero(),
        residual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Zero,
    Q,
    Poisson,
    QP,
    FlatGeneral,
    CurvedGeneral,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Zero => "zero",
            Classification::Q => "Q",
            Classification::Poisson => "Poisson",
            Classification::QP => "QP",
            Classification::FlatGeneral => "flat-general",
            Classification::CurvedGeneral => "curved-general",
        })
    }
}

/// A homotopy Poisson structure of degree `n` on the base of `cc`.
#[derive(Clone, Debug)]
pub struct HomotopyPoissonStructure {
    cc: CotangentChart,
    pi: MultiVector,
}

impl PartialEq for HomotopyPoissonStructure {
    fn eq(&self, other: &Self) -> bool {
        self.cc == other.cc && self.pi == other.pi
    }
}

impl HomotopyPoissonStructure {
    /// Validates degree and the master equation.
    pub fn new(cc: &CotangentChart, pi: MultiVector) -> Result<Self, PoissonError> {
        let me = check_master_equation(cc, &pi)?;
        if !me.holds {
            return Err(PoissonError::MasterEquation(me.residual.to_string()));
        }
        Ok(HomotopyPoissonStructure {
            cc: cc.clone(),
            pi,
        })
    }

    pub fn zero(cc: &CotangentChart) -> Self {
        HomotopyPoissonStructure {
            cc: cc.clone(),
            pi: GradedPolynomial::zero(cc.chart()),
        }
    }

    pub fn cotangent(&self) -> &CotangentChart {
        &self.cc
    }

    pub fn pi(&self) -> &MultiVector {
        &self.pi
    }

    pub fn shift(&self) -> i64 {
        self.cc.shift()
    }

    pub fn components(&self) -> Vec<(u32, MultiVector)> {
        self.cc.decompose(&self.pi)
    }

    pub fn component(&self, length: u32) -> MultiVector {
        self.cc.component(&self.pi, length)
    }

    /// Largest momentum length with a nonzero component.
    pub fn finite_type_bound(&self) -> Option<u32> {
        self.components().last().map(|(l, _)| *l)
    }

    /// `β_ℓ(f_1, …, f_ℓ) = {…{{π_ℓ, f_1}, f_2}, …, f_ℓ}` with `ℓ = args.len()`,
    /// returned as a function on the base chart.
    pub fn derived_bracket(&self, args: &[GradedPolynomial]) -> Result<GradedPolynomial, PoissonError> {
        let lifted = args
            .iter()
            .map(|f| {
                self.cc.base_function(f).map_err(|e| match e {
                    CotangentError::ContainsMomenta(s) => PoissonError::ContainsMomenta(s),
                    other => other.into(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut acc = self.component(args.len() as u32);
        for f in &lifted {
            if acc.is_zero() {
                break;
            }
            acc = self.cc.bracket(&acc, f)?;
        }
        Ok(self.cc.restrict(&acc)?)
    }

    /// `d_π = {π, ·}`.
    pub fn differential(&self) -> Derivation {
        if self.pi.is_zero() {
            return Derivation::zero(self.cc.chart(), 1);
        }
        self.cc
            .hamiltonian_vf(&self.pi)
            .expect("π is homogeneous on its own chart")
    }

    pub fn classify(&self) -> Classification {
        let lengths: Vec<u32> = self.components().into_iter().map(|(l, _)| l).collect();
        match lengths.as_slice() {
            [] => Classification::Zero,
            [0, ..] => Classification::CurvedGeneral,
            [1] => Classification::Q,
            [2] => Classification::Poisson,
            [1, 2] => Classification::QP,
            _ => Classification::FlatGeneral,
        }
    }

    /// Randomized checks of graded symmetry and the Leibniz rule of every
    /// nonzero `β_ℓ` with `ℓ ≥ 1`, on seeded random base functions.
    pub fn sample_bracket_properties(&self, seed: u64, trials: usize) -> Result<CheckReport, PoissonError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = self.cc.base().clone();
        let n = self.shift();
        let mut report = CheckReport::new();
        for (l, _) in self.components() {
            if l == 0 {
                continue;
            }
            let l = l as usize;
            let mut symmetry_residual = None;
            let mut leibniz_residual = None;
            for _ in 0..trials {
                let mut args: Vec<GradedPolynomial> = (0..l)
                    .map(|_| crate::sample::random_homogeneous(&base, &mut rng, 2, 2))
                    .collect();
                let deg = |f: &GradedPolynomial| f.degree().unwrap_or(0);
                let value = self.derived_bracket(&args)?;
                if l >= 2 {
                    let i = trial_index(&mut rng, l - 1);
                    let (a, b) = (deg(&args[i]), deg(&args[i + 1]));
                    args.swap(i, i + 1);
                    let swapped = self.derived_bracket(&args)?;
                    args.swap(i, i + 1);
                    let sign = if parity((a + n) * (b + n)) { rational(-1) } else { rational(1) };
                    let r = &value - &swapped.scale(&sign);
                    if !r.is_zero() && symmetry_residual.is_none() {
                        symmetry_residual = Some(r);
                    }
                }
                let g = crate::sample::random_homogeneous(&base, &mut rng, 2, 2);
                let h = crate::sample::random_homogeneous(&base, &mut rng, 2, 2);
                let head = &args[..l - 1];
                let x_degree = n + 1 + head.iter().map(deg).sum::<i64>() - (l as i64 - 1) * n;
                let with = |last: GradedPolynomial| {
                    let mut v = head.to_vec();
                    v.push(last);
                    self.derived_bracket(&v)
                };
                let lhs = with(&g * &h)?;
                let sign = if parity((x_degree - n) * deg(&g)) { rational(-1) } else { rational(1) };
                let rhs = &(&with(g.clone())? * &h) + &(&g * &with(h.clone())?).scale(&sign);
                let r = &lhs - &rhs;
                if !r.is_zero() && leibniz_residual.is_none() {
                    leibniz_residual = Some(r);
                }
            }
            if l >= 2 {
                let name = format!("bracket-{l}-symmetry");
                match symmetry_residual {
                    Some(r) => report.fail(name, r.to_string(), format!("{trials} random trials")),
                    None => report.pass(name, format!("{trials} random trials")),
                }
            }
            let name = format!("bracket-{l}-leibniz");
            match leibniz_residual {
                Some(r) => report.fail(name, r.to_string(), format!("{trials} random trials")),
                None => report.pass(name, format!("{trials} random trials")),
            }
        }
        Ok(report)
    }
}

fn trial_index(rng: &mut ChaCha8Rng, bound: usize) -> usize {
    use rand::Rng;
    rng.gen_range(0..bound)
}

/// Recovers `π` from a degree-1 differential `δ` of the canonical bracket
/// with `δ² = 0`, so that `{π, ·} = δ`.
pub fn from_differential(
    cc: &CotangentChart,
    delta: &Derivation,
) -> Result<HomotopyPoissonStructure, PoissonError> {
    if **delta.chart() != **cc.chart() {
        return Err(AlgebraError::ChartMismatch.into());
    }
    if delta.degree() != 1 {
        return Err(PoissonError::DifferentialDegree(delta.degree()));
    }
    let square = delta.commutator(delta)?;
    if let Some(i) = (0..cc.chart().len()).find(|&i| !square.image(i).is_zero()) {
        return Err(PoissonError::NotSquareZero {
            coordinate: cc.chart().name(i).to_string(),
            residual: square.image(i).to_string(),
        });
    }
    let chart = cc.chart();
    let n = cc.shift();
    for u in 0..chart.len() {
        for v in 0..chart.len() {
            let (cu, cv) = (cc.coordinate(u), cc.coordinate(v));
            let lhs = delta.apply(&cc.bracket(&cu, &cv)?)?;
            let first = cc.bracket(delta.image(u), &cv)?;
            let second = cc.bracket(&cu, delta.image(v))?;
            let sign = if parity(chart.degree(u) - n) { rational(-1) } else { rational(1) };
            let r = &lhs - &(&first + &second.scale(&sign));
            if !r.is_zero() {
                return Err(PoissonError::NotBracketDerivation(
                    chart.name(u).to_string(),
                    chart.name(v).to_string(),
                    r.to_string(),
                ));
            }
        }
    }

    // The length-ℓ component satisfies {π_ℓ, x_i} = δ_ℓ(x_i), the length ℓ-1
    // part of δ(x_i); since {g, x_i} is the right derivative of g along p_i,
    // the Euler identity Σ_i {g, x_i} p_i = ℓ g recovers π_ℓ from these values.
    let mut pi = GradedPolynomial::zero(chart);
    for i in 0..cc.base_dim() {
        for (len, part) in cc.decompose(delta.image(i)) {
            let l = len + 1;
            pi += &(&part * &cc.momentum(i)).scale(&ratio(1, l as i64));
        }
    }
    // δ_0 lowers momentum length by one; on the Euler element it gives
    // {π_0, ε} = -(n + 1) π_0.
    let euler_image = delta.apply(&cc.euler_multivector())?;
    let lowered = cc.component(&euler_image, 0);
    pi += &lowered.scale(&ratio(-1, n + 1));

    let recovered = cc.hamiltonian_vf(&pi)?;
    if recovered.images() != delta.images() {
        let diff = (0..chart.len())
            .find(|&i| recovered.image(i) != delta.image(i))
            .map(|i| (recovered.image(i) - delta.image(i)).to_string())
            .unwrap_or_default();
        return Err(PoissonError::NotHamiltonian(diff));
    }
    HomotopyPoissonStructure::new(cc, pi)
}

/// Outcome of a relatedness check, with the first failing coordinate tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relatedness {
    pub related: bool,
    pub witness: Option<(usize, Vec<String>)>,
}

/// Decides whether `psi` (a pullback from the base of `target` to the base
/// of `source`) intertwines the bracket families:
/// `ψ*(β'_ℓ(g_1, …, g_ℓ)) = β_ℓ(ψ*g_1, …, ψ*g_ℓ)` on coordinate tuples.
pub fn is_related(
    psi: &AlgebraMorphism,
    source: &HomotopyPoissonStructure,
    target: &HomotopyPoissonStructure,
) -> Result<Relatedness, PoissonError> {
    let m_source = source.cc.base();
    let m_target = target.cc.base();
    if **psi.target() != **m_source || **psi.source() != **m_target {
        return Err(AlgebraError::ChartMismatch.into());
    }
    let bound = source
        .finite_type_bound()
        .into_iter()
        .chain(target.finite_type_bound())
        .max();
    let Some(bound) = bound else {
        return Ok(Relatedness {
            related: true,
            witness: None,
        });
    };
    let dim = m_target.len();
    for l in 0..=bound as usize {
        let mut tuple = vec![0usize; l];
        loop {
            let gs: Vec<GradedPolynomial> = tuple
                .iter()
                .map(|&i| GradedPolynomial::coordinate(m_target, i))
                .collect();
            let pulled: Vec<GradedPolynomial> =
                tuple.iter().map(|&i| psi.image(i).clone()).collect();
            let lhs = psi.apply(&target.derived_bracket(&gs)?)?;
            let rhs = source.derived_bracket(&pulled)?;
            if lhs != rhs {
                return Ok(Relatedness {
                    related: false,
                    witness: Some((
                        l,
                        tuple.iter().map(|&i| m_target.name(i).to_string()).collect(),
                    )),
                });
            }
            if !next_multiset(&mut tuple, dim) {
                break;
            }
        }
    }
    Ok(Relatedness {
        related: true,
        witness: None,
    })
}

/// Advances a non-decreasing index tuple; false when exhausted.
fn next_multiset(tuple: &mut [usize], dim: usize) -> bool {
    if dim == 0 {
        return false;
    }
    for k in (0..tuple.len()).rev() {
        if tuple[k] + 1 < dim {
            let v = tuple[k] + 1;
            for t in tuple[k..].iter_mut() {
                *t = v;
            }
            return true;
        }
    }
    false
}

/// Residuals of the four identities contained in the master equation for
/// `π = π_0 + π_1 + π_2`, one per momentum length of `{π, π}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentIdentities {
    /// `{π_2, π_2}`: `π_2` is a Poisson bivector.
    pub bivector: MultiVector,
    /// `2{π_1, π_2}`: `π_1` preserves `π_2`.
    pub vector_field: MultiVector,
    /// `{π_1, π_1} + 2{π_0, π_2}`: the square of `π_1` is Hamiltonian for `π_0`.
    pub square: MultiVector,
    /// `2{π_0, π_1}`: `π_0` is `π_1`-invariant.
    pub function: MultiVector,
}

impl ComponentIdentities {
    pub fn all_hold(&self) -> bool {
        [&self.bivector, &self.vector_field, &self.square, &self.function]
            .iter()
            .all(|r| r.is_zero())
    }

    /// Residuals keyed by the momentum length they occupy in `{π, π}`.
    pub fn by_length(&self) -> [(u32, &MultiVector); 4] {
        [
            (3, &self.bivector),
            (2, &self.vector_field),
            (1, &self.square),
            (0, &self.function),
        ]
    }

    pub fn report(&self) -> CheckReport {
        let mut r = CheckReport::new();
        r.residual("bivector-is-poisson", &self.bivector, "{π2, π2}");
        r.residual("vector-field-preserves-bivector", &self.vector_field, "2{π1, π2}");
        r.residual("vector-field-square", &self.square, "{π1, π1} + 2{π0, π2}");
        r.residual("function-is-invariant", &self.function, "2{π0, π1}");
        r
    }
}

/// Splits the master equation for `π` with components of length at most 2.
/// Validity of `π` is not assumed.
pub fn check_component_identities(
    cc: &CotangentChart,
    pi: &MultiVector,
) -> Result<ComponentIdentities, PoissonError> {
    require_degree(cc, pi)?;
    if let Some((l, _)) = cc.decompose(pi).into_iter().find(|(l, _)| *l > 2) {
        return Err(PoissonError::HigherComponents(l));
    }
    let p0 = cc.component(pi, 0);
    let p1 = cc.component(pi, 1);
    let p2 = cc.component(pi, 2);
    let two = rational(2);
    Ok(ComponentIdentities {
        bivector: cc.bracket(&p2, &p2)?,
        vector_field: cc.bracket(&p1, &p2)?.scale(&two),
        square: &cc.bracket(&p1, &p1)? + &cc.bracket(&p0, &p2)?.scale(&two),
        function: cc.bracket(&p0, &p1)?.scale(&two),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_algebra::Chart;
    use crate::shifted_cotangent::build_cotangent;

    fn plane() -> CotangentChart {
        build_cotangent(&Chart::from_pairs(&[("x", 0), ("y", 0)]).unwrap(), 1).unwrap()
    }

    fn v(cc: &CotangentChart, name: &str) -> GradedPolynomial {
        cc.var(name).unwrap()
    }

    #[test]
    fn zero_structure() {
        let cc = plane();
        let z = GradedPolynomial::zero(cc.chart());
        assert!(check_master_equation(&cc, &z).unwrap().holds);
        let hp = HomotopyPoissonStructure::new(&cc, z).unwrap();
        assert_eq!(hp.classify(), Classification::Zero);
        assert!(hp.differential().is_zero());
        let back = from_differential(&cc, &hp.differential()).unwrap();
        assert_eq!(back, hp);
    }

    #[test]
    fn wrong_degree_rejected() {
        let cc = plane();
        let e = check_master_equation(&cc, &v(&cc, "p_x")).unwrap_err();
        assert_eq!(e, PoissonError::WrongDegree { expected: 2, found: 1 });
        let mixed = &(&v(&cc, "p_x") * &v(&cc, "p_y")) + &v(&cc, "p_x");
        assert_eq!(check_master_equation(&cc, &mixed).unwrap_err(), PoissonError::Inhomogeneous);
    }

    #[test]
    fn bivector_bracket_of_coordinates() {
        let cc = plane();
        let pi = &(&v(&cc, "x") * &v(&cc, "p_x")) * &v(&cc, "p_y");
        let hp = HomotopyPoissonStructure::new(&cc, pi).unwrap();
        assert_eq!(hp.classify(), Classification::Poisson);
        let base = cc.base().clone();
        let x = GradedPolynomial::var(&base, "x").unwrap();
        let y = GradedPolynomial::var(&base, "y").unwrap();
        // x p_x p_y = -x p_y p_x: the right derivative along p_x carries the sign
        assert_eq!(hp.derived_bracket(&[x.clone(), y.clone()]).unwrap(), -&x);
        assert_eq!(hp.derived_bracket(&[y, x.clone()]).unwrap(), x);
        let one = GradedPolynomial::one(&base);
        assert!(hp.derived_bracket(&[one, x]).unwrap().is_zero());
    }

    #[test]
    fn momenta_in_arguments_rejected() {
        let cc = plane();
        let hp = HomotopyPoissonStructure::zero(&cc);
        assert!(matches!(
            hp.derived_bracket(&[v(&cc, "p_x")]),
            Err(PoissonError::ContainsMomenta(_))
        ));
    }

    #[test]
    fn vector_field_only_is_q() {
        let base = Chart::from_pairs(&[("x", 0), ("theta", 1)]).unwrap();
        let cc = build_cotangent(&base, 1).unwrap();
        let pi = &v(&cc, "theta") * &v(&cc, "p_x");
        let hp = HomotopyPoissonStructure::new(&cc, pi).unwrap();
        assert_eq!(hp.classify(), Classification::Q);
        let y = GradedPolynomial::var(cc.base(), "x").unwrap();
        let expected = cc.restrict(&hp.differential().apply(&cc.lift(&y).unwrap()).unwrap()).unwrap();
        assert_eq!(hp.derived_bracket(&[y]).unwrap(), expected);
    }

    #[test]
    fn curved_structure_round_trip() {
        // base with a degree 2 coordinate so that π_0 can be nonzero for n = 1
        let base = Chart::from_pairs(&[("x", 0), ("w", 2)]).unwrap();
        let cc = build_cotangent(&base, 1).unwrap();
        let pi = &v(&cc, "w") * &v(&cc, "x");
        let hp = HomotopyPoissonStructure::new(&cc, pi.clone()).unwrap();
        assert_eq!(hp.classify(), Classification::CurvedGeneral);
        let back = from_differential(&cc, &hp.differential()).unwrap();
        assert_eq!(back.pi(), &pi);
        // by hand: δ_0(ε) = {π_0, 2 w p_w} = -2 x w
        let eps = cc.euler_multivector();
        assert_eq!(
            hp.differential().apply(&eps).unwrap(),
            (&v(&cc, "x") * &v(&cc, "w")).scale(&rational(-2))
        );
    }

    #[test]
    fn differential_preconditions() {
        let cc = plane();
        let d = Derivation::partial(cc.chart(), 0);
        assert_eq!(
            from_differential(&cc, &d).unwrap_err(),
            PoissonError::DifferentialDegree(0)
        );
    }

    #[test]
    fn component_identities_for_poisson_bivector() {
        let cc = plane();
        let pi = &(&v(&cc, "x") * &v(&cc, "p_x")) * &v(&cc, "p_y");
        let ci = check_component_identities(&cc, &pi).unwrap();
        assert!(ci.all_hold());
        assert!(ci.report().passed());
    }

    #[test]
    fn identity_is_related() {
        let cc = plane();
        let pi = &(&v(&cc, "x") * &v(&cc, "p_x")) * &v(&cc, "p_y");
        let hp = HomotopyPoissonStructure::new(&cc, pi).unwrap();
        let id = AlgebraMorphism::identity(cc.base());
        assert!(is_related(&id, &hp, &hp).unwrap().related);
    }

    #[test]
    fn multisets_enumerated() {
        let mut t = vec![0, 0];
        let mut seen = vec![t.clone()];
        while next_multiset(&mut t, 3) {
            seen.push(t.clone());
        }
        assert_eq!(seen.len(), 6);
    }
}
