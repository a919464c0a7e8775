mod common;

use std::sync::Arc;

use common::{degrees, from_oracle, to_oracle};
use graded_poisson::graded_algebra::{rational, Chart, Derivation, GradedPolynomial};
use graded_poisson::homotopy_poisson::HomotopyPoissonStructure;
use graded_poisson::lie_structures::{GradedLieAlgebra, HomotopyLieBialgebra};
use graded_poisson::reduction::{
    check_action_morphism, check_q_morphism_moment, cotangent_lift, reduce, verify_quotient_theorem,
    InfinitesimalAction, QuotientComparison, ReductionProblem, SymplecticQStructure,
};
use graded_poisson::shifted_cotangent::CotangentChart;
use graded_poisson_oracles::Cotangent;

struct Fixture {
    hp: HomotopyPoissonStructure,
    rho: InfinitesimalAction,
    quotient: CotangentChart,
    images: Vec<GradedPolynomial>,
}

fn chart(pairs: &[(&str, i64)]) -> Arc<Chart> {
    Chart::from_pairs(pairs).unwrap()
}

fn line_algebra() -> HomotopyLieBialgebra {
    HomotopyLieBialgebra::zero(GradedLieAlgebra::abelian(vec![("v".into(), 0)]), 1).unwrap()
}

/// A translation along `along`, quotient coordinates = the other base
/// coordinates.
fn translation_fixture(base: &[(&str, i64)], along: &str, pi: impl Fn(&CotangentChart) -> GradedPolynomial) -> Fixture {
    let m = chart(base);
    let cc = CotangentChart::build(&m, 1).unwrap();
    let hp = HomotopyPoissonStructure::new(&cc, pi(&cc)).unwrap();
    let k = m.index_of(along).unwrap();
    let rho = InfinitesimalAction::new(line_algebra(), &m, vec![Derivation::partial(&m, k)]).unwrap();
    let rest: Vec<(&str, i64)> = base.iter().copied().filter(|(n, _)| *n != along).collect();
    let quotient = CotangentChart::build(&chart(&rest), 1).unwrap();
    let images = rest.iter().map(|(n, _)| GradedPolynomial::var(&m, n).unwrap()).collect();
    Fixture {
        hp,
        rho,
        quotient,
        images,
    }
}

fn word(cc: &CotangentChart, names: &[&str]) -> GradedPolynomial {
    names
        .iter()
        .fold(GradedPolynomial::one(cc.chart()), |acc, n| &acc * &cc.var(n).unwrap())
}

fn three_space() -> Fixture {
    translation_fixture(&[("x", 0), ("y", 0), ("z", 0)], "z", |cc| word(cc, &["x", "p_x", "p_y"]))
}

fn plane() -> Fixture {
    translation_fixture(&[("x", 0), ("y", 0)], "y", |cc| word(cc, &["x", "p_x", "p_y"]))
}

fn mixed_qp() -> Fixture {
    translation_fixture(&[("x", 0), ("w", 0), ("y", 0), ("t", 1)], "y", |cc| {
        &word(cc, &["t", "p_w"]) + &word(cc, &["x", "p_x", "p_w"])
    })
}

fn vector_field_only() -> Fixture {
    translation_fixture(&[("x", 0), ("y", 0), ("t", 1)], "y", |cc| word(cc, &["x", "t", "p_x"]))
}

/// ax+b acting freely on {x, y, s, t}: e1 ↦ x∂x + ∂s, e2 ↦ ∂x.
fn affine() -> Fixture {
    let m = chart(&[("x", 0), ("y", 0), ("s", 0), ("t", 1)]);
    let cc = CotangentChart::build(&m, 1).unwrap();
    let hp = HomotopyPoissonStructure::new(&cc, word(&cc, &["t", "p_y"])).unwrap();
    let g = GradedLieAlgebra::new(
        vec![("e1".into(), 0), ("e2".into(), 0)],
        vec![(0, 1, vec![rational(0), rational(-1)])],
    )
    .unwrap();
    let b = HomotopyLieBialgebra::zero(g, 1).unwrap();
    let var = |n| GradedPolynomial::var(&m, n).unwrap();
    let zero = GradedPolynomial::zero(&m);
    let one = GradedPolynomial::one(&m);
    let e1 = Derivation::new(&m, 0, vec![var("x"), zero.clone(), one, zero.clone()]).unwrap();
    let e2 = Derivation::partial(&m, 0);
    let rho = InfinitesimalAction::new(b, &m, vec![e1, e2]).unwrap();
    let quotient = CotangentChart::build(&chart(&[("y", 0), ("t", 1)]), 1).unwrap();
    Fixture {
        hp,
        rho,
        quotient,
        images: vec![var("y"), var("t")],
    }
}

fn run(f: &Fixture) -> QuotientComparison {
    verify_quotient_theorem(&f.hp, &f.rho, &f.quotient, &f.images, None).unwrap()
}

/// Sets the translated coordinate and its momentum to zero, drops them and
/// compares `{π, c}` on the surviving coordinates, rendered as text.
fn restriction_oracle(f: &Fixture, along: usize) -> Vec<String> {
    let cc = f.hp.cotangent();
    let m = cc.base_dim();
    let oracle = Cotangent::new(&degrees(cc.base()), 1);
    let pi = to_oracle(f.hp.pi());
    let killed = [along, m + along];
    let map: Vec<Option<usize>> = (0..2 * m)
        .map(|i| {
            if killed.contains(&i) {
                None
            } else {
                let base_i = i % m;
                let shifted = if base_i > along { base_i - 1 } else { base_i };
                Some(if i < m { shifted } else { (m - 1) + shifted })
            }
        })
        .collect();
    let qdeg = degrees(f.quotient.chart());
    (0..2 * m)
        .filter(|i| !killed.contains(i))
        .map(|i| {
            let image = oracle.bracket(&pi, &graded_poisson_oracles::Poly::var(&oracle.degrees(), i));
            from_oracle(f.quotient.chart(), &image.kill(&killed).reindex(&qdeg, &map)).to_string()
        })
        .collect()
}

fn rendered(q: &Derivation) -> Vec<String> {
    q.images().iter().map(ToString::to_string).collect()
}

#[test]
fn three_space_reduces_to_x_px_py() {
    let f = three_space();
    let out = run(&f);
    assert!(out.passed(), "{}", out.report);
    let expected = word(&f.quotient, &["x", "p_x", "p_y"]);
    assert_eq!(out.reduced.q_red, f.quotient.hamiltonian_vf(&expected).unwrap());
    assert_eq!(rendered(&out.reduced.q_red), restriction_oracle(&f, 2));
}

#[test]
fn plane_reduces_to_zero() {
    let f = plane();
    let out = run(&f);
    assert!(out.passed(), "{}", out.report);
    assert!(out.reduced.q_red.is_zero());
    assert_eq!(rendered(&out.reduced.q_red), restriction_oracle(&f, 1));
}

#[test]
fn both_paths_agree_on_all_fixtures() {
    for (name, f, along) in [
        ("three-space", three_space(), Some(2)),
        ("plane", plane(), Some(1)),
        ("mixed", mixed_qp(), Some(2)),
        ("vector-field", vector_field_only(), Some(1)),
        ("affine", affine(), None),
    ] {
        let out = run(&f);
        assert!(out.passed(), "{name}: {}", out.report);
        assert_eq!(out.reduced.hamiltonian(), Some(&out.pushed), "{name}");
        if let Some(k) = along {
            assert_eq!(rendered(&out.reduced.q_red), restriction_oracle(&f, k), "{name}");
        }
        let report = &out.reduced.report;
        // equivariance implies coisotropy; flat + Q-morphism implies an invariant ideal
        assert!(report.failures().all(|e| !e.name.starts_with("equivariance")));
        assert!(report.entry("coisotropic").unwrap().passed);
        assert!(out.report.failures().all(|e| !e.name.starts_with("q-morphism")));
        assert!(report.entry("q-invariant-ideal").unwrap().passed);
        assert!(report.entry("reduced-square-zero").unwrap().passed);
        assert!(report.entry("reduced-bracket-derivation").unwrap().passed);
    }
}

#[test]
fn mixed_fixture_keeps_both_components() {
    let f = mixed_qp();
    let out = run(&f);
    let expected = &word(&f.quotient, &["t", "p_w"]) + &word(&f.quotient, &["x", "p_x", "p_w"]);
    assert_eq!(out.reduced.hamiltonian(), Some(&expected));
}

#[test]
fn affine_quotient_keeps_the_vector_field() {
    let f = affine();
    let out = run(&f);
    assert_eq!(out.reduced.hamiltonian(), Some(&word(&f.quotient, &["t", "p_y"])));
    let names: Vec<&str> = out.reduced.eliminated.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["p_s", "p_x"]);
}

#[test]
fn non_invariant_structure_names_the_generator() {
    let f = translation_fixture(&[("x", 0), ("y", 0)], "x", |cc| word(cc, &["x", "p_x", "p_y"]));
    let (_, mm) = cotangent_lift(&f.rho).unwrap();
    let s = SymplecticQStructure::from_homotopy_poisson(&f.hp);
    let report = check_q_morphism_moment(&mm, &s, f.rho.bialgebra()).unwrap();
    let failing: Vec<&str> = report.failures().map(|e| e.name.as_str()).collect();
    assert_eq!(failing, ["q-morphism:v"]);
    assert!(!check_action_morphism(&f.rho, &f.hp).unwrap().passed());
}

#[test]
fn action_morphism_with_a_cobracket() {
    // g abelian 2-dim with d̂ ê1 = ê1 ê2 on S(g[-1]); ρ(e1) = ∂x, ρ(e2) = ∂y
    // and π = 0: ρ̂(d̂ ê1) = p_x p_y differs from {0, p_x} = 0.
    let m = chart(&[("x", 0), ("y", 0)]);
    let g = GradedLieAlgebra::abelian(vec![("e1".into(), 0), ("e2".into(), 0)]);
    let dual = g.realize_shifted_dual(1).unwrap();
    let e = |i| dual.coordinate(i);
    let b = HomotopyLieBialgebra::from_images(g, 1, vec![&e(0) * &e(1), GradedPolynomial::zero(dual.chart())]).unwrap();
    assert!(b.check().passed());
    let rho = InfinitesimalAction::new(b, &m, vec![Derivation::partial(&m, 0), Derivation::partial(&m, 1)]).unwrap();
    let cc = CotangentChart::build(&m, 1).unwrap();
    let report = check_action_morphism(&rho, &HomotopyPoissonStructure::zero(&cc)).unwrap();
    let failing: Vec<&str> = report.failures().map(|e| e.name.as_str()).collect();
    assert_eq!(failing, ["action-morphism:e1"]);
}

#[test]
fn trivial_group_gives_back_the_structure() {
    let f = three_space();
    let cc = f.hp.cotangent();
    let b = HomotopyLieBialgebra::zero(GradedLieAlgebra::abelian(vec![]), 1).unwrap();
    let rho = InfinitesimalAction::new(b, cc.base(), vec![]).unwrap();
    let (lift, mm) = cotangent_lift(&rho).unwrap();
    let s = SymplecticQStructure::from_homotopy_poisson(&f.hp);
    let images = (0..cc.chart().len()).map(|i| cc.coordinate(i)).collect();
    let problem = ReductionProblem::new(s.clone(), lift, mm, cc.clone(), images).unwrap();
    let out = reduce(&problem).unwrap();
    assert!(out.passed(), "{}", out.report);
    assert_eq!(&out.q_red, s.q());
    assert_eq!(out.structure.as_ref(), Some(&s));
}
