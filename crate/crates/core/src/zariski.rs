//! Solution sets and closures `T″` of word systems over finite groups,
//! by enumerating `Hom(F_r, G)`.

use std::cell::RefCell;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::max_enum;
use crate::presentation::{parse_word_with, Word};

/// A group given by its Cayley table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    pub name: String,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates closure, identity, inverses and associativity.
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidTable("table must be n×n with entries below n".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidTable("no identity".into()))?;
        let inverse = (0..n)
            .map(|x| {
                (0..n)
                    .find(|&y| table[x][y] == identity && table[y][x] == identity)
                    .ok_or_else(|| Error::InvalidTable(format!("element {x} has no inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        let g = FiniteGroup {
            name: name.into(),
            table,
            identity,
            inverse,
        };
        // Light's test: associativity need only hold with a generator in the middle
        for s in g.generating_set() {
            for x in 0..n {
                for y in 0..n {
                    if g.mul(g.mul(x, s), y) != g.mul(x, g.mul(s, y)) {
                        return Err(Error::InvalidTable(format!("not associative at ({x}, {s}, {y})")));
                    }
                }
            }
        }
        Ok(g)
    }

    /// Parses `n` followed by `n` rows of `n` indices.
    pub fn parse_table(name: impl Into<String>, text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let n: usize = lines
            .next()
            .and_then(|l| l.parse().ok())
            .ok_or_else(|| Error::InvalidTable("first line must be the order".into()))?;
        let table = lines
            .map(|l| {
                l.split_whitespace()
                    .map(|t| t.parse::<usize>().map_err(|_| Error::InvalidTable(format!("bad entry {t:?}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if table.len() != n {
            return Err(Error::InvalidTable(format!("expected {n} rows, got {}", table.len())));
        }
        FiniteGroup::from_table(name, table)
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("cyclic group of order 0".into()));
        }
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(format!("Z/{n}"), table)
    }

    /// Dihedral group of order `2n`: element `(r, s)` is `ρ^r σ^s`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidArgument("dihedral group needs n ≥ 1".into()));
        }
        let idx = |r: usize, s: usize| 2 * r + s;
        let mut table = vec![vec![0; 2 * n]; 2 * n];
        for r1 in 0..n {
            for s1 in 0..2 {
                for r2 in 0..n {
                    for s2 in 0..2 {
                        // σ ρ = ρ^{-1} σ
                        let r = if s1 == 0 { (r1 + r2) % n } else { (r1 + n - r2) % n };
                        table[idx(r1, s1)][idx(r2, s2)] = idx(r, (s1 + s2) % 2);
                    }
                }
            }
        }
        FiniteGroup::from_table(format!("D{}", 2 * n), table)
    }

    /// Quaternion group as `±1, ±i, ±j, ±k`.
    pub fn quaternion() -> Result<Self> {
        // unit q ∈ {1,i,j,k} with sign; index = 2·q + (sign < 0)
        let units = |a: usize, b: usize| -> (usize, bool) {
            match (a, b) {
                (0, x) | (x, 0) => (x, false),
                (x, y) if x == y => (0, true),
                (1, 2) => (3, false),
                (2, 1) => (3, true),
                (2, 3) => (1, false),
                (3, 2) => (1, true),
                (3, 1) => (2, false),
                (1, 3) => (2, true),
                _ => unreachable!(),
            }
        };
        let mut table = vec![vec![0; 8]; 8];
        for a in 0..8 {
            for b in 0..8 {
                let (q, neg) = units(a / 2, b / 2);
                let sign = (a % 2 == 1) ^ (b % 2 == 1) ^ neg;
                table[a][b] = 2 * q + usize::from(sign);
            }
        }
        FiniteGroup::from_table("Q8", table)
    }

    pub fn direct_product(&self, other: &FiniteGroup) -> Result<Self> {
        let (n, m) = (self.order(), other.order());
        let table = (0..n * m)
            .map(|a| (0..n * m).map(|b| self.mul(a / m, b / m) * m + other.mul(a % m, b % m)).collect())
            .collect();
        FiniteGroup::from_table(format!("{}x{}", self.name, other.name), table)
    }

    /// `Z/n`, `S3`, `D2n`, `Q8`, `1` and products joined by `x` or `×`.
    pub fn builtin(name: &str) -> Result<Self> {
        let name = name.trim();
        let factors: Vec<&str> = name.split(['x', 'X', '×']).map(str::trim).collect();
        if factors.len() > 1 {
            let mut acc = FiniteGroup::builtin(factors[0])?;
            for f in &factors[1..] {
                acc = acc.direct_product(&FiniteGroup::builtin(f)?)?;
            }
            return Ok(acc);
        }
        let lower = name.to_ascii_lowercase();
        let unknown = || Error::InvalidArgument(format!("unknown finite group {name:?}"));
        if lower == "1" || lower == "trivial" {
            return FiniteGroup::cyclic(1);
        }
        if let Some(n) = lower.strip_prefix("z/") {
            return FiniteGroup::cyclic(n.parse().map_err(|_| unknown())?);
        }
        if lower == "s3" {
            let mut g = FiniteGroup::dihedral(3)?;
            g.name = "S3".into();
            return Ok(g);
        }
        if lower == "q8" {
            return FiniteGroup::quaternion();
        }
        if let Some(n) = lower.strip_prefix('d') {
            let order: usize = n.parse().map_err(|_| unknown())?;
            if order % 2 == 1 || !(2..=8).contains(&order) {
                return Err(unknown());
            }
            return FiniteGroup::dihedral(order / 2);
        }
        Err(unknown())
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn pow(&self, a: usize, e: &BigInt) -> usize {
        let o = BigInt::from(self.element_order(a));
        let mut k = e.mod_floor(&o).to_usize().expect("below the order");
        let mut acc = self.identity;
        let mut base = a;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn exponent(&self) -> usize {
        (0..self.order()).fold(1, |acc, a| acc.lcm(&self.element_order(a)))
    }

    fn generating_set(&self) -> Vec<usize> {
        let n = self.order();
        let mut inside = vec![false; n];
        inside[self.identity] = true;
        let mut gens = Vec::new();
        while let Some(s) = (0..n).find(|&x| !inside[x]) {
            gens.push(s);
            // closure of the span under right multiplication by generators
            let mut stack: Vec<usize> = (0..n).filter(|&x| inside[x]).collect();
            while let Some(x) = stack.pop() {
                for &g in &gens {
                    let y = self.mul(x, g);
                    if !inside[y] {
                        inside[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        gens
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.name, self.order())
    }
}

/// A freely reduced word in `x_1..x_r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeWord(pub Word);

impl FreeWord {
    /// Number of free generators the word mentions.
    pub fn rank(&self) -> usize {
        self.0.generators().max().map_or(0, |g| g + 1)
    }

    pub fn evaluate(&self, g: &FiniteGroup, images: &[usize]) -> usize {
        self.0
            .syllables()
            .iter()
            .fold(g.identity(), |acc, (x, e)| g.mul(acc, g.pow(images[*x], e)))
    }
}

/// Free generators named in order of first appearance.
#[derive(Clone, Debug, Default)]
pub struct Alphabet {
    names: RefCell<Vec<String>>,
}

impl Alphabet {
    pub fn new() -> Self {
        Alphabet::default()
    }

    pub fn names(&self) -> Vec<String> {
        self.names.borrow().clone()
    }

    pub fn parse(&self, text: &str) -> Result<FreeWord> {
        let lookup = |name: &str| {
            let mut names = self.names.borrow_mut();
            Some(names.iter().position(|n| n == name).unwrap_or_else(|| {
                names.push(name.to_string());
                names.len() - 1
            }))
        };
        parse_word_with(text, &lookup).map(FreeWord)
    }

    pub fn render(&self, w: &FreeWord) -> String {
        w.0.render(&self.names())
    }
}

/// All `|G|^r` generator assignments, each extending uniquely to `F_r → G`.
pub fn enumerate_homs(rank: usize, g: &FiniteGroup) -> Result<Vec<Vec<usize>>> {
    let total = (g.order() as u128).checked_pow(rank as u32);
    if total.map_or(true, |t| t > max_enum() as u128) {
        return Err(Error::TooLarge(format!(
            "{}^{} homomorphisms exceed the enumeration cap {}",
            g.order(),
            rank,
            max_enum()
        )));
    }
    let mut out = Vec::with_capacity(total.unwrap_or(0) as usize);
    let mut v = vec![0; rank];
    loop {
        out.push(v.clone());
        let mut k = 0;
        while k < rank && v[k] + 1 == g.order() {
            v[k] = 0;
            k += 1;
        }
        if k == rank {
            return Ok(out);
        }
        v[k] += 1;
    }
}

fn rank_of(system: &[FreeWord], w: &FreeWord) -> usize {
    system.iter().chain(std::iter::once(w)).map(FreeWord::rank).max().unwrap_or(0)
}

/// `w ∈ T″_G`: every homomorphism killing `T` kills `w`.
pub fn closure_membership(system: &[FreeWord], w: &FreeWord, g: &FiniteGroup) -> Result<bool> {
    let homs = enumerate_homs(rank_of(system, w), g)?;
    Ok(homs
        .iter()
        .filter(|h| system.iter().all(|t| t.evaluate(g, h) == g.identity()))
        .all(|h| w.evaluate(g, h) == g.identity()))
}

/// `(w ∈ T″_{G1}, w ∈ T″_{G2})`; a disagreement shows the two groups are
/// not geometrically equivalent.
pub fn equivalence_probe(system: &[FreeWord], w: &FreeWord, g1: &FiniteGroup, g2: &FiniteGroup) -> Result<(bool, bool)> {
    Ok((closure_membership(system, w, g1)?, closure_membership(system, w, g2)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(a: &Alphabet, ws: &[&str]) -> Vec<FreeWord> {
        ws.iter().map(|w| a.parse(w).unwrap()).collect()
    }

    #[test]
    fn hom_counts() {
        let z2 = FiniteGroup::builtin("Z/2").unwrap();
        assert_eq!(enumerate_homs(1, &z2).unwrap().len(), 2);
        assert_eq!(enumerate_homs(2, &z2).unwrap().len(), 4);
        let s3 = FiniteGroup::builtin("S3").unwrap();
        assert_eq!(enumerate_homs(2, &s3).unwrap().len(), 36);
        assert!(matches!(enumerate_homs(8, &s3), Err(Error::TooLarge(_))));
    }

    #[test]
    fn closure_examples() {
        let z2 = FiniteGroup::builtin("Z/2").unwrap();
        let a = Alphabet::new();
        let t = words(&a, &["x^2"]);
        assert!(!closure_membership(&t, &a.parse("x").unwrap(), &z2).unwrap());
        assert!(closure_membership(&t, &a.parse("x^4").unwrap(), &z2).unwrap());
        let b = Alphabet::new();
        let t = words(&b, &["t"]);
        assert!(closure_membership(&t, &t[0], &FiniteGroup::builtin("S3").unwrap()).unwrap());
    }

    #[test]
    fn probe_examples() {
        let z2 = FiniteGroup::builtin("Z/2").unwrap();
        let v4 = FiniteGroup::builtin("Z/2xZ/2").unwrap();
        let z3 = FiniteGroup::builtin("Z/3").unwrap();
        let a = Alphabet::new();
        let t = words(&a, &["x^2"]);
        let x = a.parse("x").unwrap();
        assert_eq!(equivalence_probe(&t, &x, &z2, &v4).unwrap(), (false, false));
        assert_eq!(equivalence_probe(&t, &x, &z2, &z3).unwrap(), (false, true));
        let one = a.parse("1").unwrap();
        assert_eq!(equivalence_probe(&[one.clone()], &one, &z2, &z3).unwrap(), (true, true));
    }

    #[test]
    fn builtin_tables() {
        for (name, order, exponent) in [("Z/4", 4, 4), ("D8", 8, 4), ("Q8", 8, 4), ("S3", 6, 6), ("Z/2xZ/2", 4, 2), ("1", 1, 1)] {
            let g = FiniteGroup::builtin(name).unwrap();
            assert_eq!((g.order(), g.exponent()), (order, exponent), "{name}");
        }
        let q8 = FiniteGroup::builtin("Q8").unwrap();
        assert_eq!((0..8).filter(|&x| q8.element_order(x) == 2).count(), 1);
        let d8 = FiniteGroup::builtin("d8").unwrap();
        assert_eq!((0..8).filter(|&x| d8.element_order(x) == 2).count(), 5);
        assert!(FiniteGroup::parse_table("bad", "2\n0 1\n1 1\n").is_err());
        let z3 = FiniteGroup::parse_table("z3", "3\n0 1 2\n1 2 0\n2 0 1\n").unwrap();
        assert_eq!(z3.exponent(), 3);
    }
}
