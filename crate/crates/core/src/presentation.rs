//! Weighted nilpotent (polycyclic) presentations.
//!
//! Generators `g_0 < g_1 < ... < g_{n-1}` carry a weight and optionally a
//! relative order `e_i ≥ 2` with power relation `g_i^{e_i} = w_i`, where `w_i`
//! only involves generators after `g_i`. Commutator relations are stored as
//! `[g_j, g_i] = w_{ji}` for `j > i`, with `w_{ji}` involving only generators
//! after `g_j`; an absent relation means the two generators commute.
//!
//! Text grammar:
//!
//! ```text
//! group <name>
//! gen <g> [order <e>] [weight <w>]
//! rel [<g>,<h>] = <word>
//! rel <g>^<e> = <word>
//! ```
//!
//! `#` starts a comment. A commutator relation may be written in either
//! order; `[a,b] = w` with `a` before `b` is stored as `[b,a] = w^-1`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A freely reduced word: `(generator index, nonzero exponent)` syllables
/// with no two adjacent syllables on the same generator.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<(usize, BigInt)>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn generator(g: usize) -> Self {
        Word(vec![(g, BigInt::one())])
    }

    pub fn power(g: usize, e: impl Into<BigInt>) -> Self {
        Word::new([(g, e.into())])
    }

    pub fn new<I: IntoIterator<Item = (usize, BigInt)>>(syllables: I) -> Self {
        let mut out: Vec<(usize, BigInt)> = Vec::new();
        for (g, e) in syllables {
            if e.is_zero() {
                continue;
            }
            match out.last_mut() {
                Some((h, f)) if *h == g => {
                    *f += e;
                    if f.is_zero() {
                        out.pop();
                    }
                }
                _ => out.push((g, e)),
            }
        }
        Word(out)
    }

    pub fn syllables(&self) -> &[(usize, BigInt)] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|(g, e)| (*g, -e)).collect())
    }

    pub fn concat(&self, other: &Word) -> Self {
        Word::new(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn min_generator(&self) -> Option<usize> {
        self.0.iter().map(|(g, _)| *g).min()
    }

    pub fn generators(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|(g, _)| *g)
    }

    /// Renders with generator names, e.g. `x^1*y^-2`; the identity is `1`.
    pub fn render(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|(g, e)| format!("{}^{}", names[*g], e))
            .collect::<Vec<_>>()
            .join("*")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub weight: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    name: String,
    generators: Vec<Generator>,
    orders: Vec<Option<BigInt>>,
    powers: Vec<Word>,
    commutators: BTreeMap<(usize, usize), Word>,
}

impl Presentation {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn weight(&self, g: usize) -> u32 {
        self.generators[g].weight
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Relative order of `g`, `None` for infinite.
    pub fn order(&self, g: usize) -> Option<&BigInt> {
        self.orders[g].as_ref()
    }

    pub fn power_rhs(&self, g: usize) -> &Word {
        &self.powers[g]
    }

    /// Right-hand side of `[g_j, g_i]` for `j > i` (identity when absent).
    pub fn commutator_rhs(&self, j: usize, i: usize) -> Option<&Word> {
        self.commutators.get(&(j, i))
    }

    pub fn nontrivial_commutators(&self) -> impl Iterator<Item = (&(usize, usize), &Word)> {
        self.commutators.iter()
    }

    pub fn is_torsion_generator(&self, g: usize) -> bool {
        self.orders[g].is_some()
    }

    pub fn has_torsion_generators(&self) -> bool {
        self.orders.iter().any(Option::is_some)
    }

    /// Parses a word such as `x^2*y^-1*z` over this presentation's names.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        parse_word_with(text, &|name| self.index_of(name))
    }

    /// Canonical text: generators in declaration order, then power relations
    /// by generator, then commutator relations by `(j, i)`.
    pub fn render(&self) -> String {
        let names = self.names();
        let defaults = default_weights(self.len(), &self.commutators);
        let mut out = String::new();
        let _ = writeln!(out, "group {}", self.name);
        for (i, g) in self.generators.iter().enumerate() {
            let _ = write!(out, "gen {}", g.name);
            if let Some(e) = &self.orders[i] {
                let _ = write!(out, " order {e}");
            }
            if g.weight != defaults[i] {
                let _ = write!(out, " weight {}", g.weight);
            }
            out.push('\n');
        }
        for (i, e) in self.orders.iter().enumerate() {
            if let Some(e) = e {
                if !self.powers[i].is_identity() {
                    let _ = writeln!(out, "rel {}^{} = {}", names[i], e, self.powers[i].render(&names));
                }
            }
        }
        for ((j, i), w) in &self.commutators {
            let _ = writeln!(out, "rel [{},{}] = {}", names[*j], names[*i], w.render(&names));
        }
        out
    }

    pub fn builder(name: impl Into<String>) -> PresentationBuilder {
        PresentationBuilder {
            name: name.into(),
            ..Default::default()
        }
    }

    /// Direct product `self × other`, generators of `self` first. Names of
    /// `other` get `suffix` appended.
    pub fn direct_product(&self, other: &Presentation, suffix: &str) -> Presentation {
        let n = self.len();
        let shift = |w: &Word| Word::new(w.syllables().iter().map(|(g, e)| (g + n, e.clone())));
        let mut generators = self.generators.clone();
        generators.extend(other.generators.iter().map(|g| Generator {
            name: format!("{}{}", g.name, suffix),
            weight: g.weight,
        }));
        let mut orders = self.orders.clone();
        orders.extend(other.orders.iter().cloned());
        let mut powers = self.powers.clone();
        powers.extend(other.powers.iter().map(shift));
        let mut commutators = self.commutators.clone();
        for ((j, i), w) in &other.commutators {
            commutators.insert((j + n, i + n), shift(w));
        }
        Presentation {
            name: format!("{}x{}", self.name, other.name),
            generators,
            orders,
            powers,
            commutators,
        }
    }

    /// The presentation of `G/⟨g_k, ..., g_n⟩`: the first `k` generators
    /// with later generators erased from every relation.
    pub fn truncate(&self, k: usize) -> Result<Presentation> {
        if k > self.len() {
            return Err(Error::InvalidArgument(format!("cannot keep {k} of {} generators", self.len())));
        }
        let cut = |w: &Word| Word::new(w.syllables().iter().filter(|(g, _)| *g < k).cloned());
        Ok(Presentation {
            name: format!("{}_mod_{}", self.name, k),
            generators: self.generators[..k].to_vec(),
            orders: self.orders[..k].to_vec(),
            powers: self.powers[..k].iter().map(cut).collect(),
            commutators: self
                .commutators
                .iter()
                .filter(|((j, _), _)| *j < k)
                .map(|(key, w)| (*key, cut(w)))
                .filter(|(_, w)| !w.is_identity())
                .collect(),
        })
    }

    /// Builds a presentation from already-validated parts (relations in
    /// normal-form order, indices in range).
    pub(crate) fn from_parts(
        name: String,
        generators: Vec<Generator>,
        orders: Vec<Option<BigInt>>,
        powers: Vec<Word>,
        commutators: BTreeMap<(usize, usize), Word>,
    ) -> Presentation {
        Presentation {
            name,
            generators,
            orders,
            powers,
            commutators,
        }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn default_weights(n: usize, commutators: &BTreeMap<(usize, usize), Word>) -> Vec<u32> {
    let mut w = vec![1u32; n];
    // every generator in a relation's value comes after both sides, so one
    // pass in index order settles all weights
    let mut by_target: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for ((j, i), word) in commutators {
        for g in word.generators() {
            by_target[g].push((*j, *i));
        }
    }
    for k in 0..n {
        for &(j, i) in &by_target[k] {
            w[k] = w[k].max(w[j] + w[i]);
        }
    }
    w
}

#[derive(Default, Debug, Clone)]
pub struct PresentationBuilder {
    name: String,
    names: Vec<String>,
    orders: Vec<Option<BigInt>>,
    weights: Vec<Option<u32>>,
    powers: BTreeMap<usize, (BigInt, Word)>,
    commutators: BTreeMap<(usize, usize), Word>,
    pending: Vec<PendingRel>,
}

#[derive(Debug, Clone)]
enum PendingRel {
    Commutator(String, String, String),
    Power(String, BigInt, String),
}

impl PresentationBuilder {
    pub fn generator(mut self, name: &str) -> Self {
        self.names.push(name.into());
        self.orders.push(None);
        self.weights.push(None);
        self
    }

    pub fn torsion_generator(mut self, name: &str, order: impl Into<BigInt>) -> Self {
        self.names.push(name.into());
        self.orders.push(Some(order.into()));
        self.weights.push(None);
        self
    }

    pub fn weight(mut self, name: &str, weight: u32) -> Self {
        if let Some(i) = self.names.iter().position(|n| n == name) {
            self.weights[i] = Some(weight);
        }
        self
    }

    /// `[a, b] = rhs`, either argument order.
    pub fn commutator(mut self, a: &str, b: &str, rhs: &str) -> Self {
        self.pending.push(PendingRel::Commutator(a.into(), b.into(), rhs.into()));
        self
    }

    /// `g^e = rhs`.
    pub fn power(mut self, g: &str, e: impl Into<BigInt>, rhs: &str) -> Self {
        self.pending.push(PendingRel::Power(g.into(), e.into(), rhs.into()));
        self
    }

    pub fn build(mut self) -> Result<Presentation> {
        let pending = std::mem::take(&mut self.pending);
        for rel in pending {
            match rel {
                PendingRel::Commutator(a, b, rhs) => {
                    let (ia, ib) = (self.lookup(&a)?, self.lookup(&b)?);
                    let w = self.word(&rhs)?;
                    self.add_commutator(ia, ib, w)?;
                }
                PendingRel::Power(g, e, rhs) => {
                    let ig = self.lookup(&g)?;
                    let w = self.word(&rhs)?;
                    self.add_power(ig, e, w)?;
                }
            }
        }
        self.finish()
    }

    fn lookup(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::InvalidWord(format!("unknown generator {name:?}")))
    }

    fn word(&self, text: &str) -> Result<Word> {
        parse_word_with(text, &|n| self.names.iter().position(|m| m == n))
    }

    fn add_commutator(&mut self, a: usize, b: usize, w: Word) -> Result<()> {
        if a == b {
            return Err(Error::InvalidArgument(format!(
                "commutator of {} with itself",
                self.names[a]
            )));
        }
        let (j, i, w) = if a > b { (a, b, w) } else { (b, a, w.inverse()) };
        if let Some(bad) = w.generators().find(|&g| g <= j) {
            return Err(Error::OrderingViolation(format!(
                "[{},{}] may only involve generators after {}, but {} occurs",
                self.names[j], self.names[i], self.names[j], self.names[bad]
            )));
        }
        if self.commutators.contains_key(&(j, i)) {
            return Err(Error::InvalidArgument(format!(
                "duplicate relation for [{},{}]",
                self.names[j], self.names[i]
            )));
        }
        if !w.is_identity() {
            self.commutators.insert((j, i), w);
        }
        Ok(())
    }

    fn add_power(&mut self, g: usize, e: BigInt, w: Word) -> Result<()> {
        if e < BigInt::from(2) {
            return Err(Error::InvalidArgument(format!(
                "relative order of {} must be at least 2",
                self.names[g]
            )));
        }
        if let Some(bad) = w.generators().find(|&h| h <= g) {
            return Err(Error::OrderingViolation(format!(
                "{}^{} may only involve later generators, but {} occurs",
                self.names[g], e, self.names[bad]
            )));
        }
        match &self.orders[g] {
            Some(o) if *o != e => {
                return Err(Error::InvalidArgument(format!(
                    "{} declared with order {} but relation uses exponent {}",
                    self.names[g], o, e
                )))
            }
            _ => self.orders[g] = Some(e.clone()),
        }
        if self.powers.insert(g, (e, w)).is_some() {
            return Err(Error::InvalidArgument(format!(
                "duplicate power relation for {}",
                self.names[g]
            )));
        }
        Ok(())
    }

    fn finish(self) -> Result<Presentation> {
        let n = self.names.len();
        for (i, name) in self.names.iter().enumerate() {
            if !is_identifier(name) {
                return Err(Error::InvalidArgument(format!("bad generator name {name:?}")));
            }
            if self.names[..i].contains(name) {
                return Err(Error::InvalidArgument(format!("duplicate generator {name:?}")));
            }
            if let Some(e) = &self.orders[i] {
                if *e < BigInt::from(2) {
                    return Err(Error::InvalidArgument(format!(
                        "relative order of {name} must be at least 2"
                    )));
                }
            }
        }
        let defaults = default_weights(n, &self.commutators);
        let weights: Vec<u32> = (0..n).map(|i| self.weights[i].unwrap_or(defaults[i])).collect();
        if weights.iter().any(|&w| w == 0) {
            return Err(Error::InvalidArgument("weights must be positive".into()));
        }
        for ((j, i), w) in &self.commutators {
            for g in w.generators() {
                if weights[g] < weights[*i] + weights[*j] {
                    return Err(Error::InvalidArgument(format!(
                        "weight of {} is below weight({}) + weight({})",
                        self.names[g], self.names[*j], self.names[*i]
                    )));
                }
            }
        }
        let generators = self
            .names
            .into_iter()
            .zip(&weights)
            .map(|(name, &weight)| Generator { name, weight })
            .collect();
        let mut powers = vec![Word::identity(); n];
        for (g, (_, w)) in self.powers {
            powers[g] = w;
        }
        Ok(Presentation {
            name: self.name,
            generators,
            orders: self.orders,
            powers,
            commutators: self.commutators,
        })
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Scanner shared by the word and presentation parsers. Tracks 1-based
/// columns for error messages.
pub(crate) struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str, line: usize) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            line,
            _src: src,
        }
    }

    pub(crate) fn err(&self, msg: impl Into<String>) -> Error {
        Error::syntax(self.line, self.pos + 1, msg)
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    pub(crate) fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub(crate) fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        match self.chars.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() || *c == '_' => self.pos += 1,
            _ => return Err(self.err("expected a generator name")),
        }
        while let Some(c) = self.chars.get(self.pos) {
            if c.is_ascii_alphanumeric() || *c == '_' || *c == '\'' {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    pub(crate) fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.chars.get(self.pos), Some('-') | Some('+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while matches!(self.chars.get(self.pos), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return Err(self.err("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("bad integer"))
    }

    pub(crate) fn rest(&self) -> String {
        self.chars[self.pos..].iter().collect()
    }

    pub(crate) fn column(&self) -> usize {
        self.pos + 1
    }
}

/// Exponent after `^`: `n`, `-n` or `(n)`.
fn exponent(cur: &mut Cursor<'_>) -> Result<BigInt> {
    if cur.eat('(') {
        let e = cur.integer()?;
        cur.expect(')')?;
        Ok(e)
    } else {
        cur.integer()
    }
}

pub(crate) fn parse_word_cursor(cur: &mut Cursor<'_>, lookup: &dyn Fn(&str) -> Option<usize>) -> Result<Word> {
    if cur.peek() == Some('1') {
        cur.integer()?;
        return Ok(Word::identity());
    }
    let mut syllables = Vec::new();
    loop {
        let col = cur.column();
        let name = cur.ident()?;
        let g = lookup(&name).ok_or_else(|| Error::InvalidWord(format!("unknown generator {name:?} at column {col}")))?;
        let e = if cur.eat('^') { exponent(cur)? } else { BigInt::one() };
        syllables.push((g, e));
        if !cur.eat('*') {
            break;
        }
    }
    Ok(Word::new(syllables))
}

pub(crate) fn parse_word_with(text: &str, lookup: &dyn Fn(&str) -> Option<usize>) -> Result<Word> {
    let mut cur = Cursor::new(text, 1);
    let w = parse_word_cursor(&mut cur, lookup)?;
    if !cur.at_end() {
        return Err(cur.err(format!("unexpected trailing input {:?}", cur.rest())));
    }
    Ok(w)
}

/// Parses the presentation text grammar.
pub fn parse_presentation(text: &str) -> Result<Presentation> {
    let mut builder: Option<PresentationBuilder> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor::new(content, line);
        let keyword = cur.ident()?;
        match keyword.as_str() {
            "group" => {
                if builder.is_some() {
                    return Err(Error::syntax(line, 1, "duplicate group line"));
                }
                let name = cur.ident()?;
                builder = Some(Presentation::builder(name));
            }
            "gen" => {
                let b = builder.as_mut().ok_or_else(|| Error::syntax(line, 1, "missing group line"))?;
                let name = cur.ident()?;
                if b.names.contains(&name) {
                    return Err(cur.err(format!("duplicate generator {name:?}")));
                }
                let mut order = None;
                let mut weight = None;
                while !cur.at_end() {
                    let kw = cur.ident()?;
                    match kw.as_str() {
                        "order" => order = Some(cur.integer()?),
                        "weight" => {
                            let w = cur.integer()?;
                            weight = Some(w.to_u32().filter(|&w| w > 0).ok_or_else(|| cur.err("weight must be a positive integer"))?);
                        }
                        other => return Err(cur.err(format!("unexpected {other:?}"))),
                    }
                }
                if let Some(e) = &order {
                    if *e < BigInt::from(2) {
                        return Err(cur.err("order must be at least 2"));
                    }
                }
                b.names.push(name);
                b.orders.push(order);
                b.weights.push(weight);
            }
            "rel" => {
                let b = builder.as_mut().ok_or_else(|| Error::syntax(line, 1, "missing group line"))?;
                let lookup = |n: &str| b.names.iter().position(|m| m == n);
                if cur.eat('[') {
                    let a = cur.ident()?;
                    cur.expect(',')?;
                    let c = cur.ident()?;
                    cur.expect(']')?;
                    cur.expect('=')?;
                    let w = parse_word_cursor(&mut cur, &lookup)?;
                    if !cur.at_end() {
                        return Err(cur.err("unexpected trailing input"));
                    }
                    let ia = lookup(&a).ok_or_else(|| Error::InvalidWord(format!("unknown generator {a:?} on line {line}")))?;
                    let ic = lookup(&c).ok_or_else(|| Error::InvalidWord(format!("unknown generator {c:?} on line {line}")))?;
                    b.add_commutator(ia, ic, w)?;
                } else {
                    let g = cur.ident()?;
                    cur.expect('^')?;
                    let e = exponent(&mut cur)?;
                    cur.expect('=')?;
                    let w = parse_word_cursor(&mut cur, &lookup)?;
                    if !cur.at_end() {
                        return Err(cur.err("unexpected trailing input"));
                    }
                    let ig = lookup(&g).ok_or_else(|| Error::InvalidWord(format!("unknown generator {g:?} on line {line}")))?;
                    b.add_power(ig, e, w)?;
                }
            }
            other => return Err(Error::syntax(line, 1, format!("unknown keyword {other:?}"))),
        }
    }
    builder.ok_or_else(|| Error::syntax(1, 1, "empty presentation"))?.finish()
}

pub const HEISENBERG_SOURCE: &str = "\
group heisenberg
gen x
gen y
gen z
rel [x,y] = z
";

pub const EXAMPLE2_SOURCE: &str = "\
group example2
gen a
gen b
gen c order 4
rel [a,b] = c^2
";

/// The named groups shipped with the kit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builtin {
    Heisenberg,
    Example2,
    FreeNilpotent { class: u32, rank: u32 },
    Abelian(Vec<u64>),
}

impl std::str::FromStr for Builtin {
    type Err = Error;

    /// `heisenberg`, `example2`, `free_nilpotent:CLASS,RANK` or
    /// `abelian:N1,N2,...` (0 for Z), case-insensitive.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let (head, args) = lower.split_once(':').unwrap_or((&lower, ""));
        let nums = || -> Result<Vec<u64>> {
            args.split(',')
                .filter(|a| !a.trim().is_empty())
                .map(|a| {
                    a.trim()
                        .parse()
                        .map_err(|_| Error::InvalidArgument(format!("bad builtin parameter {a:?}")))
                })
                .collect()
        };
        match head {
            "heisenberg" => Ok(Builtin::Heisenberg),
            "example2" => Ok(Builtin::Example2),
            "free_nilpotent" => match nums()?.as_slice() {
                &[class, rank] => Ok(Builtin::FreeNilpotent {
                    class: class as u32,
                    rank: rank as u32,
                }),
                _ => Err(Error::InvalidArgument("free_nilpotent takes CLASS,RANK".into())),
            },
            "abelian" => Ok(Builtin::Abelian(nums()?)),
            _ => Err(Error::InvalidArgument(format!("unknown builtin {s:?}"))),
        }
    }
}

pub fn builtin(which: &Builtin) -> Result<Presentation> {
    match which {
        Builtin::Heisenberg => parse_presentation(HEISENBERG_SOURCE),
        Builtin::Example2 => parse_presentation(EXAMPLE2_SOURCE),
        Builtin::FreeNilpotent { class, rank } => free_nilpotent(*class, *rank),
        Builtin::Abelian(factors) => abelian(factors),
    }
}

/// `Z^s × Z/e_1 × ...` from a list where `0` stands for an infinite cyclic
/// factor; factors equal to 1 are dropped.
pub fn abelian(factors: &[u64]) -> Result<Presentation> {
    let mut b = Presentation::builder(format!(
        "abelian_{}",
        factors.iter().map(u64::to_string).collect::<Vec<_>>().join("_")
    ));
    let mut k = 0;
    for &f in factors {
        if f == 1 {
            continue;
        }
        k += 1;
        let name = format!("a{k}");
        b = if f == 0 { b.generator(&name) } else { b.torsion_generator(&name, f) };
    }
    b.build()
}

/// Free nilpotent group of class `class ≤ 3` on `rank` generators, on its
/// basic-commutator basis: `x1..xr`, then `cji = [xj,xi]` (`j > i`), then
/// `cjik = [cji,xk]` (`k ≥ i`).
pub fn free_nilpotent(class: u32, rank: u32) -> Result<Presentation> {
    if class == 0 || rank == 0 {
        return Err(Error::InvalidArgument("class and rank must be positive".into()));
    }
    if class > 3 {
        return Err(Error::Unsupported(format!("free nilpotent groups of class {class} (at most 3)")));
    }
    if rank > 9 {
        return Err(Error::Unsupported(format!("rank {rank} (at most 9)")));
    }
    let r = rank as usize;
    let x = |i: usize| format!("x{i}");
    let c2 = |j: usize, i: usize| format!("c{j}{i}");
    let c3 = |j: usize, i: usize, k: usize| format!("c{j}{i}{k}");
    let mut b = Presentation::builder(format!("free_nilpotent_{class}_{rank}"));
    for i in 1..=r {
        b = b.generator(&x(i));
    }
    if class >= 2 {
        for i in 1..=r {
            for j in i + 1..=r {
                b = b.generator(&c2(j, i));
            }
        }
        // basic commutators are listed with i outermost so weight-2 order
        // matches (2,1),(3,1),(3,2),...
    }
    let pairs: Vec<(usize, usize)> = (1..=r).flat_map(|j| (1..j).map(move |i| (j, i))).collect();
    if class >= 3 {
        for &(j, i) in &pairs {
            for k in i..=r {
                b = b.generator(&c3(j, i, k));
            }
        }
    }
    if class >= 2 {
        for &(j, i) in &pairs {
            b = b.commutator(&x(j), &x(i), &c2(j, i));
        }
    }
    if class >= 3 {
        for &(j, i) in &pairs {
            for k in 1..=r {
                let rhs = if k >= i {
                    c3(j, i, k)
                } else {
                    // [[xj,xi],xk] = [[xj,xk],xi] · [[xi,xk],xj]^-1 for k < i < j
                    format!("{}*{}^-1", c3(j, k, i), c3(i, k, j))
                };
                b = b.commutator(&c2(j, i), &x(k), &rhs);
            }
        }
    }
    b.build()
}
