//! Recursive-descent parser for documents.
//!
//! Names are resolved against earlier declarations as they are read, so a
//! successful parse guarantees every reference points backwards at a
//! declaration of the right kind. Mathematical validity (Jacobi, master
//! equation, …) is left to the tasks.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use graded_poisson::graded_algebra::{Chart, Coordinate, GradedPolynomial, Rational};
use graded_poisson::shifted_cotangent::CotangentChart;
use num_traits::Zero;

use crate::document::*;
use crate::lexer::{tokenize, Pos, Tok, Token};

/// Nesting depth of parentheses and unary signs.
pub const MAX_NESTING: usize = 64;
/// Largest exponent after `^`, and largest word length of any expression.
pub const MAX_DEGREE: u32 = 64;
/// Largest absolute coordinate degree or shift.
pub const MAX_GRADING: i64 = 64;
/// Bound on `terms(a) * terms(b)` for a single product while parsing.
const MAX_PRODUCT_WORK: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Lexical,
    Syntax,
    Reference,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ErrorKind,
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ErrorKind::Lexical => "lexical",
            ErrorKind::Syntax => "syntax",
            ErrorKind::Reference => "reference",
        };
        write!(f, "{}: {kind} error: {}", self.pos, self.message)
    }
}

impl std::error::Error for ParseError {}

type PResult<T> = Result<T, ParseError>;

/// What a declared name resolves to while parsing.
#[derive(Clone, Debug)]
enum Entry {
    Chart(Arc<Chart>),
    Cotangent { base: String, cc: CotangentChart },
    Poly { chart: Arc<Chart> },
    HomotopyPoisson { space: String },
    Lie { basis: Vec<(String, i64)> },
    Bialgebra { algebra: String, dual: Arc<Chart> },
    Courant,
    MatchedPair,
    Action { bialgebra: String, space: String },
    MomentMap { bialgebra: String, space: String },
    Reduction,
    QuotientTheorem,
}

fn entry_kind(e: &Entry) -> &'static str {
    match e {
        Entry::Chart(_) => "chart",
        Entry::Cotangent { .. } => "cotangent",
        Entry::Poly { .. } => "poly",
        Entry::HomotopyPoisson { .. } => "homotopy-poisson",
        Entry::Lie { .. } => "lie-algebra",
        Entry::Bialgebra { .. } => "bialgebra",
        Entry::Courant => "courant",
        Entry::MatchedPair => "matched-pair",
        Entry::Action { .. } => "action",
        Entry::MomentMap { .. } => "moment-map",
        Entry::Reduction => "reduction",
        Entry::QuotientTheorem => "quotient-theorem",
    }
}

pub fn parse(text: &str) -> Result<Document, ParseError> {
    let tokens = tokenize(text).map_err(|(pos, message)| ParseError {
        kind: ErrorKind::Lexical,
        pos,
        message,
    })?;
    let mut p = Parser {
        tokens,
        at: 0,
        scope: HashMap::new(),
        polys: HashMap::new(),
        depth: 0,
    };
    let mut items = Vec::new();
    while p.peek() != &Tok::Eof {
        items.push(p.item()?);
    }
    Ok(Document { items })
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    scope: HashMap<String, Entry>,
    polys: HashMap<String, GradedPolynomial>,
    depth: usize,
}

fn syntax<T>(pos: Pos, message: impl Into<String>) -> PResult<T> {
    Err(ParseError {
        kind: ErrorKind::Syntax,
        pos,
        message: message.into(),
    })
}

fn reference<T>(pos: Pos, message: impl Into<String>) -> PResult<T> {
    Err(ParseError {
        kind: ErrorKind::Reference,
        pos,
        message: message.into(),
    })
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if t.tok != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> PResult<Pos> {
        let t = self.bump();
        if t.tok == tok {
            Ok(t.pos)
        } else {
            syntax(t.pos, format!("expected {tok}, found {}", t.tok))
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> PResult<(String, Pos)> {
        let t = self.bump();
        match t.tok {
            Tok::Ident(s) => Ok((s, t.pos)),
            other => syntax(t.pos, format!("expected a name, found {other}")),
        }
    }

    fn keyword(&mut self, word: &str) -> PResult<Pos> {
        let t = self.bump();
        match &t.tok {
            Tok::Ident(s) if s == word => Ok(t.pos),
            other => syntax(t.pos, format!("expected `{word}`, found {other}")),
        }
    }

    fn at_keyword(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word)
    }

    /// `keyword NAME ;`
    fn header(&mut self, word: &str) -> PResult<(String, Pos)> {
        self.keyword(word)?;
        let r = self.ident()?;
        self.expect(Tok::Semi)?;
        Ok(r)
    }

    fn signed_int(&mut self) -> PResult<i64> {
        let negative = self.eat(&Tok::Minus);
        let t = self.bump();
        let Tok::Int(digits) = t.tok else {
            return syntax(t.pos, format!("expected an integer, found {}", t.tok));
        };
        match digits.parse::<i64>() {
            Ok(v) if v <= MAX_GRADING => Ok(if negative { -v } else { v }),
            _ => syntax(t.pos, format!("integer out of range (at most {MAX_GRADING} in absolute value)")),
        }
    }

    fn fresh_name(&mut self) -> PResult<(String, Pos)> {
        let (name, pos) = self.ident()?;
        if self.scope.contains_key(&name) {
            return reference(pos, format!("`{name}` is already declared"));
        }
        Ok((name, pos))
    }

    fn lookup(&self, name: &str, pos: Pos) -> PResult<&Entry> {
        match self.scope.get(name) {
            Some(e) => Ok(e),
            None => reference(pos, format!("`{name}` is not declared")),
        }
    }

    fn wrong_kind<T>(&self, name: &str, pos: Pos, wanted: &str) -> PResult<T> {
        let found = self.scope.get(name).map(entry_kind).unwrap_or("nothing");
        reference(pos, format!("`{name}` is a {found}, expected a {wanted}"))
    }

    /// A chart or the total chart of a cotangent.
    fn space_chart(&self, name: &str, pos: Pos) -> PResult<Arc<Chart>> {
        match self.lookup(name, pos)? {
            Entry::Chart(c) => Ok(c.clone()),
            Entry::Cotangent { cc, .. } => Ok(cc.chart().clone()),
            _ => self.wrong_kind(name, pos, "chart or cotangent"),
        }
    }

    fn cotangent(&self, name: &str, pos: Pos) -> PResult<(String, CotangentChart)> {
        match self.lookup(name, pos)? {
            Entry::Cotangent { base, cc } => Ok((base.clone(), cc.clone())),
            _ => self.wrong_kind(name, pos, "cotangent"),
        }
    }

    fn lie_basis(&self, name: &str, pos: Pos) -> PResult<Vec<(String, i64)>> {
        match self.lookup(name, pos)? {
            Entry::Lie { basis } => Ok(basis.clone()),
            _ => self.wrong_kind(name, pos, "lie-algebra"),
        }
    }

    fn bialgebra(&self, name: &str, pos: Pos) -> PResult<(String, Arc<Chart>)> {
        match self.lookup(name, pos)? {
            Entry::Bialgebra { algebra, dual } => Ok((algebra.clone(), dual.clone())),
            _ => self.wrong_kind(name, pos, "bialgebra"),
        }
    }

    fn item(&mut self) -> PResult<Item> {
        let (word, pos) = self.ident()?;
        match word.as_str() {
            "chart" => self.chart(),
            "cotangent" => self.cotangent_decl(),
            "poly" => self.poly(),
            "homotopy-poisson" => self.homotopy_poisson(),
            "lie-algebra" => self.lie_algebra(),
            "bialgebra" => self.bialgebra_decl(),
            "courant" => self.courant(),
            "matched-pair" => self.matched_pair(),
            "action" => self.action(),
            "moment-map" => self.moment_map(),
            "reduction" => self.reduction(),
            "quotient-theorem" => self.quotient_theorem(),
            "task" => self.task(),
            other => syntax(pos, format!("unknown declaration `{other}`")),
        }
    }

    fn chart(&mut self) -> PResult<Item> {
        let (name, pos) = self.fresh_name()?;
        self.expect(Tok::LBrace)?;
        let mut coords: Vec<(String, i64)> = Vec::new();
        while !self.eat(&Tok::RBrace) {
            self.keyword("coord")?;
            let (c, cpos) = self.ident()?;
            if coords.iter().any(|(n, _)| *n == c) {
                return reference(cpos, format!("coordinate `{c}` declared twice"));
            }
            self.expect(Tok::Colon)?;
            let d = self.signed_int()?;
            self.expect(Tok::Semi)?;
            coords.push((c, d));
        }
        let chart = Chart::new(coords.iter().map(|(n, d)| Coordinate::new(n.clone(), *d)).collect())
            .map_err(|e| ParseError {
                kind: ErrorKind::Reference,
                pos,
                message: e.to_string(),
            })?;
        self.scope.insert(name.clone(), Entry::Chart(chart));
        Ok(Item::Chart(ChartDecl { name, coords }))
    }

    fn cotangent_decl(&mut self) -> PResult<Item> {
        let (name, _) = self.fresh_name()?;
        self.expect(Tok::Eq)?;
        let t = self.keyword("T")?;
        self.expect(Tok::Star)?;
        self.expect(Tok::LBracket)?;
        let shift = self.signed_int()?;
        self.expect(Tok::RBracket)?;
        let (base, bpos) = self.ident()?;
        self.expect(Tok::Semi)?;
        let chart = match self.lookup(&base, bpos)? {
            Entry::Chart(c) => c.clone(),
            _ => return self.wrong_kind(&base, bpos, "chart"),
        };
        let cc = CotangentChart::build(&chart, shift).map_err(|e| ParseError {
            kind: ErrorKind::Reference,
            pos: t,
            message: e.to_string(),
        })?;
        self.scope.insert(
            name.clone(),
            Entry::Cotangent {
                base: base.clone(),
                cc,
            },
        );
        Ok(Item::Cotangent(CotangentDecl { name, shift, base }))
    }

    fn poly(&mut self) -> PResult<Item> {
        let (name, pos) = self.fresh_name()?;
        self.keyword("on")?;
        let (space, spos) = self.ident()?;
        let chart = self.space_chart(&space, spos)?;
        if chart.index_of(&name).is_some() {
            return reference(pos, format!("`{name}` shadows a coordinate of `{space}`"));
        }
        self.expect(Tok::Eq)?;
        let value = self.expr(&chart)?;
        self.expect(Tok::Semi)?;
        self.scope.insert(name.clone(), Entry::Poly { chart });
        self.polys.insert(name.clone(), value.clone());
        Ok(Item::Poly(PolyDecl { name, space, value }))
    }

    fn homotopy_poisson(&mut self) -> PResult<Item> {
        let (name, _) = self.fresh_name()?;
        self.keyword("on")?;
        let (space, spos) = self.ident()?;
        let (_, cc) = self.cotangent(&space, spos)?;
        self.expect(Tok::Eq)?;
        let pi = self.expr(cc.chart())?;
        self.expect(Tok::Semi)?;
        self.scope.insert(name.clone(), Entry::HomotopyPoisson { space: space.clone() });
        Ok(Item::HomotopyPoisson(HomotopyPoissonDecl { name, space, pi }))
    }

    fn lie_algebra(&mut self) -> PResult<Item> {
        let (name, _) = self.fresh_name()?;
        self.expect(Tok::LBrace)?;
        let mut basis: Vec<(String, i64)> = Vec::new();
        while self.at_keyword("basis") {
            self.bump();
            let (b, bpos) = self.ident()?;
            if basis.iter().any(|(n, _)| *n == b) {
                return reference(bpos, format!("basis element `{b}` declared twice"));
            }
            self.expect(Tok::Colon)?;
            let d = self.signed_int()?;
            self.expect(Tok::Semi)?;
            basis.push((b, d));
        }
        let names: Vec<String> = basis.iter().map(|(n, _)| n.clone()).collect();
        let mut brackets = Vec::new();
        while !self.eat(&Tok::RBrace) {
            self.keyword("bracket")?;
            let i = self.index_in(&names, "basis element")?;
            let j = self.index_in(&names, "basis element")?;
            self.expect(Tok::Eq)?;
            let v = self.lincomb(&names)?;
            self.expect(Tok::Semi)?;
            brackets.push((i, j, v));
        }
        self.scope.insert(name.clone(), Entry::Lie { basis: basis.clone() });
        Ok(Item::LieAlgebra(LieAlgebraDecl { name, basis, brackets }))
    }

    fn bialgebra_decl(&mut self) -> PResult<Item> {
        let (name, _) = self.fresh_name()?;
        self.expect(Tok::LBrace)?;
        let (algebra, apos) = self.header("algebra")?;
        let basis = self.lie_basis(&algebra, apos)?;
        let spos = self.keyword("shift")?;
        let shift = self.signed_int()?;
        self.expect(Tok::Semi)?;
        let dual = Chart::new(basis.iter().map(|(n, d)| Coordinate::new(n.clone(), d + shift)).collect())
            .map_err(|e| ParseError {
                kind: ErrorKind::Reference,
                pos: spos,
                message: e.to_string(),
            })?;
        let names: Vec<String> = basis.iter().map(|(n, _)| n.clone()).collect();
        let mut differential: Vec<Option<GradedPolynomial>> = vec![None; names.len()];
        while !self.eat(&Tok::RBrace) {
            self.keyword("d")?;
            let pos = self.pos();
            let i = self.index_in(&names, "basis element")?;
            if differential[i].is_some() {
                return syntax(pos, format!("`d {}` given twice", names[i]));
            }
            self.expect(Tok::Eq)?;
            differential[i] = Some(self.expr(&dual)?);
            self.expect(Tok::Semi)?;
        }
        let differential = differential
            .into_iter()
            .map(|d| d.unwrap_or_else(|| GradedPolynomial::zero(&dual)))
            .collect();
        self.scope.insert(
            name.clone(),
            Entry::Bialgebra {
                algebra: algebra.clone(),
                dual,
            },
        );
        Ok(Item::Bialgebra(BialgebraDecl {
            name,
            algebra,
            shift,
            differential,
        }))
    }

    fn courant(&mut self) -> PResult<Item> {
        let (name, _) = self.fresh_name()?;
        self.expect(Tok::LBrace)?;
        let (algebra, apos) = self.header("algebra")?;
        let gnames: Vec<String> = self.lie_basis(&algebra, apos)?.into_iter().map(|(n, _)| n).collect();
        self.keyword("basis")?;
        let mut basis: Vec<String> = Vec::new();
        loop {
            let (b, bpos) = self.ident()?;
            if basis.contains(&b) {
                return reference(bpos, format!("basis element `{b}` declared twice"));
            }
            basis.push(b);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::Semi)?;
        let mut brackets = Vec::new();
        let mut projection: Vec<Option<Vec<Rational>>> = vec![None; basis.len()];
        while !self.eat(&Tok::RBrace) {
            let (word, wpos) = self.ident()?;
            match word.as_str() {
                "bracket" => {
                    let i = self.index_in(&basis, "basis element")?;
                    let j = self.index_in(&basis, "basis element")?;
                    self.expect(Tok::Eq)?;
                    let v = self.lincomb(&basis)?;
                    brackets.push((i, j, v));
                }
                "project" => {
                    let pos = self.pos();
                    let i = self.index_in(&basis, "basis element")?;
                    if projection[i].is_some() {
                        return syntax(pos, format!("`project {}` given twice", basis[i]));
                    }
                    self.expect(Tok::Eq)?;
                    projection[i] = Some(self.lincomb(&gnames)?);
                }
                other => return syntax(wpos, format!("expected `bracket` or `project`, found `{other}`")),
            }
            self.expect(Tok::Semi)?;
        }
        let projection = projection
            .into_iter()
            .map(|p| p.unwrap_or_else(|| vec![Rational::zero(); gnames.len()]))
            .collect();
        self.scope.insert(name.clone(), Entry::Courant);
        Ok(Item::Courant(CourantDecl {
            name,
            algebra,
            basis,
            brackets,
            projection,
        }))
    }

    fn matched_pair(&mut self) -> PResult<Item> {
        let (name, _) = self.fresh_name()?;
        self.expect(Tok::LBrace)?;
        let (algebra, apos) = self.header("algebra")?;
        let gnames: Vec<String> = self.lie_basis(&algebra, apos)?.into_iter().map(|(n, _)| n).collect();
        let (dual, dpos) = self.header("dual")?;
        let knames: Vec<String> = self.lie_basis(&dual, dpos)?.into_iter().map(|(n, _)| n).collect();
        let (dg, dk) = (gnames.len(), knames.len());
        let mut act: Vec<Vec<Option<Vec<Rational>>>> = vec![vec![None; dk]; dg];
        let mut coact: Vec<Vec<Option<Vec<Rational>>>> = vec![vec![None; dg]; dk];
        while !self.eat(&Tok::RBrace) {
            let (word, wpos) = self.ident()?;
            let pos = self.pos();
            match word.as_str() {
                "act" => {
                    let a = self.index_in(&gnames, "element of the algebra")?;
                    let i = self.index_in(&knames, "element of the dual")?;
                    if act[a][i].is_some() {
                        return syntax(pos, format!("`act {} {}` given twice", gnames[a], knames[i]));
                    }
                    self.expect(Tok::Eq)?;
                    act[a][i] = Some(self.lincomb(&knames)?);
                }
                "coact" => {
                    let i = self.index_in(&knames, "element of the dual")?;
                    let a = self.index_in(&gnames, "element of the algebra")?;
                    if coact[i][a].is_some() {
                        return syntax(pos, format!("`coact {} {}` given twice", knames[i], gnames[a]));
                    }
                    self.expect(Tok::Eq)?;
                    coact[i][a] = Some(self.lincomb(&gnames)?);
                }
                other => return syntax(wpos, format!("expected `act` or `coact`, found `{other}`")),
            }
            self.expect(Tok::Semi)?;
        }
        let fill = |m: Vec<Vec<Option<Vec<Rational>>>>, len: usize| -> Vec<Vec<Vec<Rational>>> {
            m.into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|v| v.unwrap_or_else(|| vec![Rational::zero(); len]))
                        .collect()
                })
                .collect()
        };
        self.scope.insert(name.clone(), Entry::MatchedPair);
        Ok(Item::MatchedPair(MatchedPairDecl {
            name,
            algebra,
            dual,
            act: fill(act, dk),
            coact: fill(coact, dg),
        }))
    }

    fn action(&mut self) -> PResult<Item> {
        let (name, _) = self.fresh_name()?;
        self.expect(Tok::LBrace)?;
        let (bialgebra, bpos) = self.header("bialgebra")?;
        let (algebra, _) = self.bialgebra(&bialgebra, bpos)?;
        let gnames: Vec<String> = self
            .lie_basis(&algebra, bpos)?
            .into_iter()
            .map(|(n, _)| n)
            .collect();
        let (space, spos) = self.header("on")?;
        let chart = self.space_chart(&space, spos)?;
        let coords: Vec<String> = chart.coordinates().iter().map(|c| c.name().to_string()).collect();
        let mut fields: Vec<Option<Vec<GradedPolynomial>>> = vec![None; gnames.len()];
        while !self.eat(&Tok::RBrace) {
            self.keyword("rho")?;
            let pos = self.pos();
            let v = self.index_in(&gnames, "basis element")?;
            if fields[v].is_some() {
                return syntax(pos, format!("`rho {}` given twice", gnames[v]));
            }
            self.expect(Tok::Eq)?;
            self.expect(Tok::LBracket)?;
            let mut row: Vec<Option<GradedPolynomial>> = vec![None; coords.len()];
            if !self.eat(&Tok::RBracket) {
                loop {
                    let cpos = self.pos();
                    let c = self.index_in(&coords, "coordinate")?;
                    if row[c].is_some() {
                        return syntax(cpos, format!("image of `{}` given twice", coords[c]));
                    }
                    self.expect(Tok::Arrow)?;
                    row[c] = Some(self.expr(&chart)?);
                    if self.eat(&Tok::RBracket) {
                        break;
                    }
                    self.expect(Tok::Comma)?;
                }
            }
            self.expect(Tok::Semi)?;
            fields[v] = Some(
                row.into_iter()
                    .map(|p| p.unwrap_or_else(|| GradedPolynomial::zero(&chart)))
                    .collect(),
            );
        }
        let fields = fields
            .into_iter()
            .map(|f| f.unwrap_or_else(|| vec![GradedPolynomial::zero(&chart); coords.len()]))
            .collect();
        self.scope.insert(
            name.clone(),
            Entry::Action {
                bialgebra: bialgebra.clone(),
                space: space.clone(),
            },
        );
        Ok(Item::Action(ActionDecl {
            name,
            bialgebra,
            space,
            fields,
        }))
    }

    fn moment_map(&mut self) -> PResult<Item> {
        let (name, _) = self.fresh_name()?;
        self.expect(Tok::LBrace)?;
        let (bialgebra, bpos) = self.header("bialgebra")?;
        let (algebra, _) = self.bialgebra(&bialgebra, bpos)?;
        let gnames: Vec<String> = self
            .lie_basis(&algebra, bpos)?
            .into_iter()
            .map(|(n, _)| n)
            .collect();
        let (space, spos) = self.header("space")?;
        let (_, cc) = self.cotangent(&space, spos)?;
        let chart = cc.chart().clone();
        let mut images: Vec<Option<GradedPolynomial>> = vec![None; gnames.len()];
        while !self.eat(&Tok::RBrace) {
            self.keyword("moment")?;
            let pos = self.pos();
            let v = self.index_in(&gnames, "basis element")?;
            if images[v].is_some() {
                return syntax(pos, format!("`moment {}` given twice", gnames[v]));
            }
            self.expect(Tok::Eq)?;
            images[v] = Some(self.expr(&chart)?);
            self.expect(Tok::Semi)?;
        }
        let images = images
            .into_iter()
            .map(|p| p.unwrap_or_else(|| GradedPolynomial::zero(&chart)))
            .collect();
        self.scope.insert(
            name.clone(),
            Entry::MomentMap {
                bialgebra: bialgebra.clone(),
                space: space.clone(),
            },
        );
        Ok(Item::MomentMap(MomentMapDecl {
            name,
            bialgebra,
            space,
            images,
        }))
    }

    /// `image NAME = expr ;` entries keyed by `keys`, all required.
    fn keyed_images(
        &mut self,
        word: &str,
        keys: &[String],
        chart: &Arc<Chart>,
    ) -> PResult<Vec<Option<GradedPolynomial>>> {
        let mut images: Vec<Option<GradedPolynomial>> = vec![None; keys.len()];
        while self.at_keyword(word) {
            self.bump();
            let pos = self.pos();
            let c = self.index_in(keys, "quotient coordinate")?;
            if images[c].is_some() {
                return syntax(pos, format!("`{word} {}` given twice", keys[c]));
            }
            self.expect(Tok::Eq)?;
            images[c] = Some(self.expr(chart)?);
            self.expect(Tok::Semi)?;
        }
        Ok(images)
    }

    fn reduction(&mut self) -> PResult<Item> {
        let (name, _) = self.fresh_name()?;
        self.expect(Tok::LBrace)?;
        let (space, spos) = self.header("space")?;
        let (_, cc) = self.cotangent(&space, spos)?;
        let chart = cc.chart().clone();
        self.keyword("hamiltonian")?;
        self.expect(Tok::Eq)?;
        let hamiltonian = self.expr(&chart)?;
        self.expect(Tok::Semi)?;
        let (moment, mpos) = self.header("moment")?;
        let mb = match self.lookup(&moment, mpos)? {
            Entry::MomentMap { bialgebra, space: s } if *s == space => bialgebra.clone(),
            Entry::MomentMap { space: s, .. } => {
                return reference(mpos, format!("moment map `{moment}` lives on `{s}`, not `{space}`"))
            }
            _ => return self.wrong_kind(&moment, mpos, "moment-map"),
        };
        let action = if self.at_keyword("action") {
            let (a, apos) = self.header("action")?;
            match self.lookup(&a, apos)? {
                Entry::Action { bialgebra, space: s } if *s == space && *bialgebra == mb => {}
                Entry::Action { .. } => {
                    return reference(
                        apos,
                        format!("action `{a}` must act on `{space}` through bialgebra `{mb}`"),
                    )
                }
                _ => return self.wrong_kind(&a, apos, "action"),
            }
            Some(a)
        } else {
            None
        };
        let (quotient, qpos) = self.header("quotient")?;
        let (_, qcc) = self.cotangent(&quotient, qpos)?;
        let keys: Vec<String> = qcc.chart().coordinates().iter().map(|c| c.name().to_string()).collect();
        let images = self.keyed_images("image", &keys, &chart)?;
        let end = self.expect(Tok::RBrace)?;
        let images = require_all(images, &keys, end, "image")?;
        self.scope.insert(name.clone(), Entry::Reduction);
        Ok(Item::Reduction(ReductionDecl {
            name,
            space,
            hamiltonian,
            moment,
            action,
            quotient,
            images,
        }))
    }

    fn quotient_theorem(&mut self) -> PResult<Item> {
        let (name, _) = self.fresh_name()?;
        self.expect(Tok::LBrace)?;
        let (structure, spos) = self.header("structure")?;
        let space = match self.lookup(&structure, spos)? {
            Entry::HomotopyPoisson { space } => space.clone(),
            _ => return self.wrong_kind(&structure, spos, "homotopy-poisson"),
        };
        let (base, cc) = self.cotangent(&space, spos)?;
        let (action, apos) = self.header("action")?;
        match self.lookup(&action, apos)? {
            Entry::Action { space: s, .. } if *s == base => {}
            Entry::Action { space: s, .. } => {
                return reference(apos, format!("action `{action}` acts on `{s}`, expected `{base}`"))
            }
            _ => return self.wrong_kind(&action, apos, "action"),
        }
        let (quotient, qpos) = self.header("quotient")?;
        let (_, qcc) = self.cotangent(&quotient, qpos)?;
        let qchart = qcc.chart();
        let nb = qcc.base_dim();
        let base_keys: Vec<String> = (0..nb).map(|i| qchart.name(i).to_string()).collect();
        let momentum_keys: Vec<String> = (nb..qchart.len()).map(|i| qchart.name(i).to_string()).collect();
        let images = self.keyed_images("image", &base_keys, cc.base())?;
        let momenta = self.keyed_images("momentum", &momentum_keys, cc.chart())?;
        let end = self.expect(Tok::RBrace)?;
        let images = require_all(images, &base_keys, end, "image")?;
        let momenta = if momenta.iter().all(Option::is_none) {
            None
        } else {
            Some(require_all(momenta, &momentum_keys, end, "momentum")?)
        };
        self.scope.insert(name.clone(), Entry::QuotientTheorem);
        Ok(Item::QuotientTheorem(QuotientTheoremDecl {
            name,
            structure,
            action,
            quotient,
            images,
            momenta,
        }))
    }

    fn task(&mut self) -> PResult<Item> {
        let (word, wpos) = self.ident()?;
        let Some(kind) = TaskKind::from_keyword(&word) else {
            return syntax(wpos, format!("unknown task `{word}`"));
        };
        let (target, tpos) = self.ident()?;
        let wanted = match kind {
            TaskKind::CheckHp | TaskKind::Derived => "homotopy-poisson",
            TaskKind::Bracket => "poly",
            TaskKind::CheckBialg => "bialgebra",
            TaskKind::Courant2Dgla => "courant",
            TaskKind::Matched2Bialg => "matched-pair",
            TaskKind::Reduce => "reduction",
            TaskKind::VerifyQuotient => "quotient-theorem",
        };
        let entry = self.lookup(&target, tpos)?.clone();
        if entry_kind(&entry) != wanted {
            return self.wrong_kind(&target, tpos, wanted);
        }
        let mut args = Vec::new();
        match kind {
            TaskKind::Bracket => {
                let (other, opos) = self.ident()?;
                let Entry::Poly { chart } = entry else { unreachable!() };
                match self.lookup(&other, opos)? {
                    Entry::Poly { chart: c } if *c == chart => {}
                    Entry::Poly { .. } => {
                        return reference(opos, format!("`{other}` and `{target}` live on different spaces"))
                    }
                    _ => return self.wrong_kind(&other, opos, "poly"),
                }
                let cotangent = self
                    .scope
                    .values()
                    .any(|e| matches!(e, Entry::Cotangent { cc, .. } if **cc.chart() == *chart));
                if !cotangent {
                    return reference(tpos, format!("`{target}` does not live on a cotangent"));
                }
                args.push(other);
            }
            TaskKind::Derived => {
                let t = self.bump();
                let arity = match &t.tok {
                    Tok::Int(d) => match d.parse::<usize>() {
                        Ok(l) if l <= MAX_DEGREE as usize => l,
                        _ => return syntax(t.pos, "arity out of range"),
                    },
                    other => return syntax(t.pos, format!("expected the arity, found {other}")),
                };
                args.push(arity.to_string());
                let Entry::HomotopyPoisson { space } = entry else { unreachable!() };
                let (_, cc) = self.cotangent(&space, tpos)?;
                for _ in 0..arity {
                    let (f, fpos) = self.ident()?;
                    match self.lookup(&f, fpos)? {
                        Entry::Poly { chart } if **chart == **cc.base() => {}
                        Entry::Poly { .. } => {
                            return reference(fpos, format!("`{f}` is not a function on the base of `{space}`"))
                        }
                        _ => return self.wrong_kind(&f, fpos, "poly"),
                    }
                    args.push(f);
                }
            }
            _ => {}
        }
        self.expect(Tok::Semi)?;
        Ok(Item::Task(Task { kind, target, args }))
    }

    fn index_in(&mut self, names: &[String], what: &str) -> PResult<usize> {
        let (n, pos) = self.ident()?;
        match names.iter().position(|m| *m == n) {
            Some(i) => Ok(i),
            None => reference(pos, format!("`{n}` is not a {what} here")),
        }
    }

    /// A linear combination of `names`, returned as a dense vector.
    fn lincomb(&mut self, names: &[String]) -> PResult<Vec<Rational>> {
        let pos = self.pos();
        let chart = Chart::new(names.iter().map(|n| Coordinate::new(n.clone(), 0)).collect()).map_err(|e| {
            ParseError {
                kind: ErrorKind::Reference,
                pos,
                message: e.to_string(),
            }
        })?;
        let p = self.expr_with(&chart, false)?;
        let mut v = vec![Rational::zero(); names.len()];
        for (m, c) in p.terms() {
            if m.word_length() != 1 {
                return syntax(pos, format!("expected a linear combination of basis elements, found {p}"));
            }
            let k = m.exponents().iter().position(|&e| e == 1).expect("word of length one");
            v[k] = c.clone();
        }
        Ok(v)
    }

    fn expr(&mut self, chart: &Arc<Chart>) -> PResult<GradedPolynomial> {
        self.expr_with(chart, true)
    }

    /// `sum := term (('+' | '-') term)*` with named polynomials allowed when
    /// `named` holds.
    fn expr_with(&mut self, chart: &Arc<Chart>, named: bool) -> PResult<GradedPolynomial> {
        let mut acc = self.term(chart, named)?;
        loop {
            if self.eat(&Tok::Plus) {
                acc += &self.term(chart, named)?;
            } else if self.eat(&Tok::Minus) {
                acc -= &self.term(chart, named)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self, chart: &Arc<Chart>, named: bool) -> PResult<GradedPolynomial> {
        let pos = self.pos();
        let mut acc = self.factor(chart, named)?;
        while self.eat(&Tok::Star) {
            let rhs = self.factor(chart, named)?;
            acc = product(&acc, &rhs, pos)?;
        }
        Ok(acc)
    }

    fn nest(&mut self, pos: Pos) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return syntax(pos, format!("expression nested deeper than {MAX_NESTING}"));
        }
        Ok(())
    }

    /// `factor := ('-' | '+') factor | atom ('^' INT)?`
    fn factor(&mut self, chart: &Arc<Chart>, named: bool) -> PResult<GradedPolynomial> {
        let pos = self.pos();
        if matches!(self.peek(), Tok::Minus | Tok::Plus) {
            let negative = self.bump().tok == Tok::Minus;
            self.nest(pos)?;
            let inner = self.factor(chart, named);
            self.depth -= 1;
            let inner = inner?;
            return Ok(if negative { -inner } else { inner });
        }
        let base = self.atom(chart, named)?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let t = self.bump();
        let k = match &t.tok {
            Tok::Int(d) => match d.parse::<u32>() {
                Ok(k) if k <= MAX_DEGREE => k,
                _ => return syntax(t.pos, format!("exponent above {MAX_DEGREE}")),
            },
            other => return syntax(t.pos, format!("expected an exponent, found {other}")),
        };
        let mut acc = GradedPolynomial::one(chart);
        for _ in 0..k {
            acc = product(&acc, &base, pos)?;
        }
        Ok(acc)
    }

    /// `atom := INT ('/' INT)? | NAME | '(' sum ')'`
    fn atom(&mut self, chart: &Arc<Chart>, named: bool) -> PResult<GradedPolynomial> {
        let t = self.bump();
        match t.tok {
            Tok::Int(n) => {
                let mut value: Rational = n.parse().expect("digits parse as a rational");
                if self.eat(&Tok::Slash) {
                    let d = self.bump();
                    let Tok::Int(den) = d.tok else {
                        return syntax(d.pos, format!("expected a denominator, found {}", d.tok));
                    };
                    let den: Rational = den.parse().expect("digits parse as a rational");
                    if den.is_zero() {
                        return syntax(d.pos, "zero denominator");
                    }
                    value /= den;
                }
                Ok(GradedPolynomial::constant(chart, value))
            }
            Tok::Ident(name) => {
                if let Some(i) = chart.index_of(&name) {
                    return Ok(GradedPolynomial::coordinate(chart, i));
                }
                if named {
                    if let (Some(Entry::Poly { chart: c }), Some(p)) = (self.scope.get(&name), self.polys.get(&name)) {
                        if **c == **chart {
                            return Ok(p.clone());
                        }
                        return reference(t.pos, format!("`{name}` lives on a different space"));
                    }
                }
                reference(t.pos, format!("`{name}` is not a coordinate here"))
            }
            Tok::LParen => {
                self.nest(t.pos)?;
                let inner = self.expr_with(chart, named);
                self.depth -= 1;
                let inner = inner?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            other => syntax(t.pos, format!("expected an expression, found {other}")),
        }
    }
}

fn product(a: &GradedPolynomial, b: &GradedPolynomial, pos: Pos) -> PResult<GradedPolynomial> {
    if a.word_degree() + b.word_degree() > MAX_DEGREE {
        return syntax(pos, format!("expression degree exceeds {MAX_DEGREE}"));
    }
    if a.num_terms().saturating_mul(b.num_terms()) > MAX_PRODUCT_WORK {
        return syntax(pos, "expression too large to expand");
    }
    Ok(a * b)
}

fn require_all(
    images: Vec<Option<GradedPolynomial>>,
    keys: &[String],
    pos: Pos,
    word: &str,
) -> PResult<Vec<(String, GradedPolynomial)>> {
    images
        .into_iter()
        .zip(keys)
        .map(|(p, k)| match p {
            Some(p) => Ok((k.clone(), p)),
            None => reference(pos, format!("missing `{word} {k}`")),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use graded_poisson::graded_algebra::rational;

    #[test]
    fn named_polynomials_are_inlined() {
        let doc = parse("chart M { coord x : 0; }\npoly f on M = x + 1;\npoly g on M = f^2 - 1;").unwrap();
        let Item::Poly(g) = &doc.items[2] else { panic!() };
        assert_eq!(g.value.to_string(), "x^2 + 2*x");
    }

    #[test]
    fn tables_are_stored_dense() {
        let doc = parse(
            "lie-algebra g { basis a : 0; basis b : 0; bracket a b = b; }\n\
             bialgebra B { algebra g; shift 1; d b = a*b; }",
        )
        .unwrap();
        let Item::LieAlgebra(g) = &doc.items[0] else { panic!() };
        assert_eq!(g.brackets, vec![(0, 1, vec![rational(0), rational(1)])]);
        let Item::Bialgebra(b) = &doc.items[1] else { panic!() };
        assert!(b.differential[0].is_zero());
        assert_eq!(b.differential[1].to_string(), "a*b");
    }

    #[test]
    fn declarations_must_come_first() {
        let e = parse("task CHECK-HP s;").unwrap_err();
        assert_eq!((e.kind, e.pos), (ErrorKind::Reference, Pos { line: 1, col: 15 }));
        let e = parse("chart M { coord x : 0; }\nchart M { coord y : 0; }").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Reference);
    }

    #[test]
    fn quotient_images_are_all_required() {
        let text = "chart M { coord x : 0; }\ncotangent T = T*[1] M;\n\
                    lie-algebra g { basis v : 0; }\nbialgebra B { algebra g; shift 1; }\n\
                    moment-map mu { bialgebra B; space T; moment v = p_x; }\n\
                    reduction R { space T; hamiltonian = 0; moment mu; quotient T; image x = x; }";
        let e = parse(text).unwrap_err();
        assert_eq!(e.kind, ErrorKind::Reference);
        assert!(e.message.contains("missing `image p_x`"), "{e}");
    }
}
