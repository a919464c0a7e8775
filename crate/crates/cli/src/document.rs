//! Parsed documents. Every name is resolved and every expression normalized
//! at parse time, so a document is self-contained and compares by value.

use graded_poisson::graded_algebra::{GradedPolynomial, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub items: Vec<Item>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Chart(ChartDecl),
    Cotangent(CotangentDecl),
    Poly(PolyDecl),
    HomotopyPoisson(HomotopyPoissonDecl),
    LieAlgebra(LieAlgebraDecl),
    Bialgebra(BialgebraDecl),
    Courant(CourantDecl),
    MatchedPair(MatchedPairDecl),
    Action(ActionDecl),
    MomentMap(MomentMapDecl),
    Reduction(ReductionDecl),
    QuotientTheorem(QuotientTheoremDecl),
    Task(Task),
}

impl Item {
    /// Declared name; `None` for tasks.
    pub fn name(&self) -> Option<&str> {
        Some(match self {
            Item::Chart(d) => &d.name,
            Item::Cotangent(d) => &d.name,
            Item::Poly(d) => &d.name,
            Item::HomotopyPoisson(d) => &d.name,
            Item::LieAlgebra(d) => &d.name,
            Item::Bialgebra(d) => &d.name,
            Item::Courant(d) => &d.name,
            Item::MatchedPair(d) => &d.name,
            Item::Action(d) => &d.name,
            Item::MomentMap(d) => &d.name,
            Item::Reduction(d) => &d.name,
            Item::QuotientTheorem(d) => &d.name,
            Item::Task(_) => return None,
        })
    }

    /// The keyword that introduces the declaration.
    pub fn keyword(&self) -> &'static str {
        match self {
            Item::Chart(_) => "chart",
            Item::Cotangent(_) => "cotangent",
            Item::Poly(_) => "poly",
            Item::HomotopyPoisson(_) => "homotopy-poisson",
            Item::LieAlgebra(_) => "lie-algebra",
            Item::Bialgebra(_) => "bialgebra",
            Item::Courant(_) => "courant",
            Item::MatchedPair(_) => "matched-pair",
            Item::Action(_) => "action",
            Item::MomentMap(_) => "moment-map",
            Item::Reduction(_) => "reduction",
            Item::QuotientTheorem(_) => "quotient-theorem",
            Item::Task(_) => "task",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartDecl {
    pub name: String,
    pub coords: Vec<(String, i64)>,
}

/// `cotangent NAME = T*[shift] BASE;`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CotangentDecl {
    pub name: String,
    pub shift: i64,
    pub base: String,
}

/// `poly NAME on SPACE = expr;` where SPACE is a chart or a cotangent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyDecl {
    pub name: String,
    pub space: String,
    pub value: GradedPolynomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyPoissonDecl {
    pub name: String,
    pub space: String,
    pub pi: GradedPolynomial,
}

/// Brackets are kept in the order given, as dense coefficient vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraDecl {
    pub name: String,
    pub basis: Vec<(String, i64)>,
    pub brackets: Vec<(usize, usize, Vec<Rational>)>,
}

/// `d̂` by images of the dual coordinates, which carry the basis names; one
/// entry per basis element, zero when not declared.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BialgebraDecl {
    pub name: String,
    pub algebra: String,
    pub shift: i64,
    pub differential: Vec<GradedPolynomial>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CourantDecl {
    pub name: String,
    pub algebra: String,
    pub basis: Vec<String>,
    pub brackets: Vec<(usize, usize, Vec<Rational>)>,
    /// `projection[i]` is `p(a_i)` in the basis of the algebra.
    pub projection: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchedPairDecl {
    pub name: String,
    pub algebra: String,
    pub dual: String,
    /// `act[a][i]`: `x_a · h_i` in the basis of `h` (named by the dual).
    pub act: Vec<Vec<Vec<Rational>>>,
    /// `coact[i][a]`: `ξ_i · ε_a` in the basis of `g*` (named by the algebra).
    pub coact: Vec<Vec<Vec<Rational>>>,
}

/// `ρ(v)` by coordinate images on `space` (a chart, or the total chart of a
/// cotangent).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionDecl {
    pub name: String,
    pub bialgebra: String,
    pub space: String,
    pub fields: Vec<Vec<GradedPolynomial>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentMapDecl {
    pub name: String,
    pub bialgebra: String,
    pub space: String,
    pub images: Vec<GradedPolynomial>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionDecl {
    pub name: String,
    pub space: String,
    pub hamiltonian: GradedPolynomial,
    pub moment: String,
    /// Explicit action on the total chart; the Hamiltonian action otherwise.
    pub action: Option<String>,
    pub quotient: String,
    /// One per coordinate of the quotient's total chart, in chart order.
    pub images: Vec<(String, GradedPolynomial)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientTheoremDecl {
    pub name: String,
    pub structure: String,
    pub action: String,
    pub quotient: String,
    /// One per base coordinate of the quotient, on the base of the structure.
    pub images: Vec<(String, GradedPolynomial)>,
    /// One per quotient momentum, on the total chart; all or none.
    pub momenta: Option<Vec<(String, GradedPolynomial)>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TaskKind {
    CheckHp,
    Bracket,
    Derived,
    CheckBialg,
    Courant2Dgla,
    Matched2Bialg,
    Reduce,
    VerifyQuotient,
}

impl TaskKind {
    pub const ALL: [TaskKind; 8] = [
        TaskKind::CheckHp,
        TaskKind::Bracket,
        TaskKind::Derived,
        TaskKind::CheckBialg,
        TaskKind::Courant2Dgla,
        TaskKind::Matched2Bialg,
        TaskKind::Reduce,
        TaskKind::VerifyQuotient,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            TaskKind::CheckHp => "CHECK-HP",
            TaskKind::Bracket => "BRACKET",
            TaskKind::Derived => "DERIVED",
            TaskKind::CheckBialg => "CHECK-BIALG",
            TaskKind::Courant2Dgla => "COURANT2DGLA",
            TaskKind::Matched2Bialg => "MATCHED2BIALG",
            TaskKind::Reduce => "REDUCE",
            TaskKind::VerifyQuotient => "VERIFY-QUOTIENT",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        TaskKind::ALL.into_iter().find(|k| k.keyword() == s)
    }
}

/// `task KIND target args…;` For `DERIVED` the first argument is the arity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Task {
    pub kind: TaskKind,
    pub target: String,
    pub args: Vec<String>,
}

impl Task {
    /// `KIND target args…`, used in reports and for `--task` selection.
    pub fn label(&self) -> String {
        let mut parts = vec![self.kind.keyword().to_string(), self.target.clone()];
        parts.extend(self.args.iter().cloned());
        parts.join(" ")
    }
}

impl Document {
    pub fn find(&self, name: &str) -> Option<&Item> {
        self.items.iter().find(|i| i.name() == Some(name))
    }

    pub fn tasks(&self) -> impl Iterator<Item = &Task> {
        self.items.iter().filter_map(|i| match i {
            Item::Task(t) => Some(t),
            _ => None,
        })
    }
}
