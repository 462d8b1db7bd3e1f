//! Subgroups by induced (echelon) generating sequences.
//!
//! A subgroup keeps at most one element per depth `k`, with positive leading
//! exponent `b_k` (dividing `e_k` at torsion levels). Sequences are closed
//! under commutators and relative powers, so membership is decided by
//! successive division and the index is `∏ b_k`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{is_pi_number, PrimeSet};
use crate::error::{Error, Result};
use crate::max_enum;
use crate::pcgroup::{first_nonzero, Element, Exps, PcGroup};
use crate::presentation::{Generator, Presentation, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    group: u64,
    rows: Vec<Option<Exps>>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Index {
    Finite(BigInt),
    Infinite,
}

impl Index {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            Index::Finite(n) => Some(n),
            Index::Infinite => None,
        }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(n) => write!(f, "{n}"),
            Index::Infinite => f.write_str("infinite"),
        }
    }
}

/// `x = h_{k_1}^{q_1} ⋯ h_{k_r}^{q_r}` over the sequence elements, as
/// `(position in sequence, exponent)` pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness(pub Vec<(usize, BigInt)>);

impl Subgroup {
    pub fn trivial(g: &PcGroup) -> Subgroup {
        Subgroup {
            group: g.id(),
            rows: vec![None; g.len()],
        }
    }

    pub fn whole(g: &PcGroup) -> Subgroup {
        Subgroup {
            group: g.id(),
            rows: (0..g.len()).map(|i| Some(g.unit(i))).collect(),
        }
    }

    pub fn group_id(&self) -> u64 {
        self.group
    }

    /// Sequence elements in depth order.
    pub fn sequence(&self, g: &PcGroup) -> Vec<Element> {
        self.rows.iter().flatten().map(|r| g.wrap(r.clone())).collect()
    }

    pub(crate) fn rows(&self) -> impl Iterator<Item = &Exps> {
        self.rows.iter().flatten()
    }

    pub(crate) fn row(&self, k: usize) -> Option<&Exps> {
        self.rows[k].as_ref()
    }

    /// Leading exponent at depth `k`, if the sequence has an element there.
    pub fn pivot(&self, k: usize) -> Option<&BigInt> {
        self.rows[k].as_ref().map(|r| &r[k])
    }

    pub fn len(&self) -> usize {
        self.rows.iter().flatten().count()
    }

    pub fn is_trivial(&self) -> bool {
        self.rows.iter().all(Option::is_none)
    }

    pub fn render(&self, g: &PcGroup) -> String {
        let parts: Vec<String> = self.rows().map(|r| g.render_exps(r)).collect();
        format!("<{}>", parts.join(", "))
    }

    fn check(&self, g: &PcGroup) -> Result<()> {
        if self.group == g.id() {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn contains(&self, g: &PcGroup, x: &Element) -> Result<bool> {
        Ok(membership(g, x, self)?.is_some())
    }

    pub fn contains_subgroup(&self, g: &PcGroup, other: &Subgroup) -> Result<bool> {
        self.check(g)?;
        other.check(g)?;
        Ok(other.rows().all(|r| self.sift(g, r).is_some()))
    }

    pub fn is_normal(&self, g: &PcGroup) -> Result<bool> {
        self.check(g)?;
        for r in self.rows() {
            for i in 0..g.len() {
                if self.sift(g, &g.comm(r, &g.unit(i))).is_none() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Left division `x = h^q · x'` level by level.
    fn sift(&self, g: &PcGroup, x: &[BigInt]) -> Option<Vec<(usize, BigInt)>> {
        let mut x = x.to_vec();
        let mut steps = Vec::new();
        while let Some(k) = first_nonzero(&x) {
            let h = self.rows[k].as_ref()?;
            let (q, r) = x[k].div_mod_floor(&h[k]);
            if !r.is_zero() {
                return None;
            }
            x = g.mul(&g.pow(h, &-&q), &x);
            steps.push((k, q));
        }
        Some(steps)
    }

    /// Canonical coset representative of `xH` under right division, with
    /// exponents in `[0, b_k)` at every level carrying a sequence element.
    pub(crate) fn canonical(&self, g: &PcGroup, x: &[BigInt]) -> Exps {
        let mut x = x.to_vec();
        for k in 0..x.len() {
            if let Some(h) = &self.rows[k] {
                let q = x[k].div_floor(&h[k]);
                if !q.is_zero() {
                    x = g.mul(&x, &g.pow(h, &-q));
                }
            }
        }
        x
    }
}

/// Worklist echelonization.
struct Echelon<'a> {
    g: &'a PcGroup,
    rows: Vec<Option<Exps>>,
    normal: bool,
    queue: Vec<Exps>,
}

impl<'a> Echelon<'a> {
    fn new(g: &'a PcGroup, normal: bool) -> Self {
        Echelon {
            g,
            rows: vec![None; g.len()],
            normal,
            queue: Vec::new(),
        }
    }

    fn from(g: &'a PcGroup, h: &Subgroup, normal: bool) -> Self {
        Echelon {
            g,
            rows: h.rows.clone(),
            normal,
            queue: Vec::new(),
        }
    }

    fn push(&mut self, x: Exps) {
        if first_nonzero(&x).is_some() {
            self.queue.push(x);
        }
    }

    /// Installs `x` as the row at its depth and schedules what closure
    /// requires of it.
    fn install(&mut self, k: usize, mut x: Exps) {
        let g = self.g;
        if x[k].is_negative() {
            x = g.inv(&x);
        }
        if let Some(o) = g.relative_order(k) {
            let o = o.clone();
            let d = x[k].gcd(&o);
            if d != x[k] {
                // x^s has leading exponent s·a ≡ gcd(a, e_k)
                let ext = x[k].extended_gcd(&o);
                x = g.pow(&x, &ext.x);
            }
            let rel = &o / &x[k];
            let p = g.pow(&x, &rel);
            self.push(p);
        }
        for r in self.rows.iter().flatten() {
            self.queue.push(g.comm(&x, r));
        }
        if self.normal {
            for i in 0..g.len() {
                self.queue.push(g.comm(&x, &g.unit(i)));
            }
        }
        self.rows[k] = Some(x);
    }

    fn run(mut self) -> Vec<Option<Exps>> {
        let g = self.g;
        while let Some(mut x) = self.queue.pop() {
            while let Some(k) = first_nonzero(&x) {
                let Some(h) = self.rows[k].clone() else {
                    self.install(k, x);
                    break;
                };
                let (a, b) = (x[k].clone(), h[k].clone());
                if a.is_multiple_of(&b) {
                    x = g.mul(&g.pow(&h, &-(&a / &b)), &x);
                    continue;
                }
                // replace the row by one with leading exponent gcd(a, b), then
                // re-sift both old elements against it
                let ext = a.extended_gcd(&b);
                let y = g.mul(&g.pow(&x, &ext.x), &g.pow(&h, &ext.y));
                self.rows[k] = None;
                self.queue.push(h);
                self.queue.push(x);
                self.install(k, y);
                break;
            }
        }
        reduce(g, &mut self.rows);
        self.rows
    }
}

/// Hermite reduction: entries above later pivots brought into `[0, b_j)`.
fn reduce(g: &PcGroup, rows: &mut [Option<Exps>]) {
    let n = rows.len();
    for k in 0..n {
        let Some(mut r) = rows[k].clone() else { continue };
        for j in k + 1..n {
            if let Some(h) = &rows[j] {
                let q = r[j].div_floor(&h[j]);
                if !q.is_zero() {
                    r = g.mul(&r, &g.pow(h, &-q));
                }
            }
        }
        rows[k] = Some(r);
    }
}

fn check_all(g: &PcGroup, gens: &[Element]) -> Result<()> {
    if gens.iter().any(|x| x.group_id() != g.id()) {
        return Err(Error::GroupMismatch);
    }
    Ok(())
}

/// The subgroup generated by `gens`.
pub fn induced_sequence(g: &PcGroup, gens: &[Element]) -> Result<Subgroup> {
    check_all(g, gens)?;
    let mut e = Echelon::new(g, false);
    for x in gens {
        e.push(x.exponents().to_vec());
    }
    Ok(Subgroup {
        group: g.id(),
        rows: e.run(),
    })
}

/// The normal closure of `gens` in `g`.
pub fn normal_closure(g: &PcGroup, gens: &[Element]) -> Result<Subgroup> {
    check_all(g, gens)?;
    let mut e = Echelon::new(g, true);
    for x in gens {
        e.push(x.exponents().to_vec());
    }
    Ok(Subgroup {
        group: g.id(),
        rows: e.run(),
    })
}

/// `⟨H, extra⟩`, normally closed when `normal`.
pub fn extend(g: &PcGroup, h: &Subgroup, extra: &[Element], normal: bool) -> Result<Subgroup> {
    h.check(g)?;
    check_all(g, extra)?;
    let mut e = Echelon::from(g, h, normal);
    for x in extra {
        e.push(x.exponents().to_vec());
    }
    if normal {
        for r in h.rows() {
            for i in 0..g.len() {
                e.push(g.comm(r, &g.unit(i)));
            }
        }
    }
    Ok(Subgroup {
        group: g.id(),
        rows: e.run(),
    })
}

/// `Some(witness)` iff `x ∈ H`; the witness indexes `H.sequence(g)`.
pub fn membership(g: &PcGroup, x: &Element, h: &Subgroup) -> Result<Option<Witness>> {
    h.check(g)?;
    if x.group_id() != g.id() {
        return Err(Error::GroupMismatch);
    }
    let positions: Vec<usize> = h
        .rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.is_some())
        .map(|(k, _)| k)
        .collect();
    Ok(h.sift(g, x.exponents()).map(|steps| {
        Witness(
            steps
                .into_iter()
                .map(|(k, q)| (positions.iter().position(|&p| p == k).expect("row"), q))
                .collect(),
        )
    }))
}

/// Evaluates a witness over the sequence of `h`.
pub fn evaluate_witness(g: &PcGroup, h: &Subgroup, w: &Witness) -> Element {
    let seq: Vec<&Exps> = h.rows().collect();
    let mut acc = g.zero();
    for (i, q) in &w.0 {
        acc = g.mul(&acc, &g.pow(seq[*i], q));
    }
    g.wrap(acc)
}

/// `|G : H|` as the product of per-level relative indices.
pub fn index(g: &PcGroup, h: &Subgroup) -> Result<Index> {
    h.check(g)?;
    let mut total = BigInt::one();
    for k in 0..g.len() {
        match (&h.rows[k], g.relative_order(k)) {
            (Some(r), _) => total *= &r[k],
            (None, Some(o)) => total *= o,
            (None, None) => return Ok(Index::Infinite),
        }
    }
    Ok(Index::Finite(total))
}

/// Relative index `|H : K|` for `K ≤ H`, level by level.
pub fn relative_index(g: &PcGroup, h: &Subgroup, k: &Subgroup) -> Result<Index> {
    h.check(g)?;
    k.check(g)?;
    if !h.contains_subgroup(g, k)? {
        return Err(Error::InvalidArgument("second subgroup is not contained in the first".into()));
    }
    let mut total = BigInt::one();
    for l in 0..g.len() {
        match (&h.rows[l], &k.rows[l]) {
            (Some(a), Some(b)) => total *= &b[l] / &a[l],
            (Some(a), None) => match g.relative_order(l) {
                Some(o) => total *= o / &a[l],
                None => return Ok(Index::Infinite),
            },
            (None, _) => {}
        }
    }
    Ok(Index::Finite(total))
}

/// `γ_1 = G ≥ γ_2 ≥ ... ≥ 1`, ending with the trivial subgroup.
pub fn lower_central_series(g: &PcGroup) -> Vec<Subgroup> {
    let mut series = vec![Subgroup::whole(g)];
    loop {
        let last = series.last().expect("nonempty");
        if last.is_trivial() {
            break;
        }
        let mut e = Echelon::new(g, true);
        for r in last.rows() {
            for i in 0..g.len() {
                e.push(g.comm(r, &g.unit(i)));
            }
        }
        let next = Subgroup {
            group: g.id(),
            rows: e.run(),
        };
        if &next == last || series.len() > g.len() + 1 {
            // cannot happen in a consistent nilpotent presentation
            break;
        }
        series.push(next);
    }
    series
}

pub fn nilpotency_class(g: &PcGroup) -> usize {
    lower_central_series(g).len() - 1
}

/// `G' = [G, G]`.
pub fn derived_subgroup(g: &PcGroup) -> Subgroup {
    lower_central_series(g)
        .into_iter()
        .nth(1)
        .unwrap_or_else(|| Subgroup::trivial(g))
}

/// Every canonical coset representative of a finite-index subgroup.
pub(crate) fn transversal(g: &PcGroup, h: &Subgroup) -> Result<Vec<Exps>> {
    let mut ranges: Vec<BigInt> = Vec::new();
    let mut size = BigInt::one();
    for k in 0..g.len() {
        let b = match (&h.rows[k], g.relative_order(k)) {
            (Some(r), _) => r[k].clone(),
            (None, Some(o)) => o.clone(),
            (None, None) => return Err(Error::Internal("transversal of an infinite-index subgroup".into())),
        };
        size *= &b;
        ranges.push(b);
    }
    let limit = max_enum();
    if size > BigInt::from(limit) {
        return Err(Error::TooLarge(format!("{size} cosets exceed the enumeration limit {limit}")));
    }
    let size = size.to_u64().expect("bounded");
    let ranges: Vec<u64> = ranges.iter().map(|b| b.to_u64().expect("bounded")).collect();
    let mut out = Vec::with_capacity(size as usize);
    let mut digits = vec![0u64; ranges.len()];
    for _ in 0..size {
        out.push(digits.iter().map(|&d| BigInt::from(d)).collect());
        for (d, r) in digits.iter_mut().zip(&ranges).rev() {
            *d += 1;
            if *d < *r {
                break;
            }
            *d = 0;
        }
    }
    Ok(out)
}

/// The verbal subgroup `G^m` generated by all `m`-th powers.
pub fn power_subgroup(g: &PcGroup, m: &BigInt) -> Result<Subgroup> {
    if !m.is_positive() {
        return Err(Error::InvalidArgument(format!("m must be positive, got {m}")));
    }
    let gens: Vec<Element> = (0..g.len()).map(|i| g.wrap(g.pow(&g.unit(i), m))).collect();
    let n = normal_closure(g, &gens)?;
    if matches!(index(g, &n)?, Index::Infinite) {
        return Err(Error::Internal("G/N is infinite".into()));
    }
    // N is generated by m-th powers, so G^m is N together with the m-th
    // powers of a transversal
    let powers: Vec<Element> = transversal(g, &n)?
        .iter()
        .map(|t| g.wrap(g.pow(t, m)))
        .filter(|p| n.sift(g, p.exponents()).is_none())
        .collect();
    extend(g, &n, &powers, true)
}

/// Smallest `r > 0` with `x^r ∈ H`, up to `bound`.
pub(crate) fn power_into(g: &PcGroup, x: &[BigInt], h: &Subgroup, bound: &BigInt) -> Option<BigInt> {
    let mut p = x.to_vec();
    let mut r = BigInt::one();
    while &r <= bound {
        if h.sift(g, &p).is_some() {
            return Some(r);
        }
        p = g.mul(&p, x);
        r += 1;
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RobReport {
    pub index: BigInt,
    pub index_is_pi_number: bool,
    /// Least positive `r_i` with `g_i^{r_i} ∈ H`, per ambient generator.
    pub generator_powers: Vec<BigInt>,
    /// Sampled elements with their least positive power landing in `H`.
    pub samples: Vec<(Element, BigInt)>,
}

/// Checks that a subgroup containing a π-power of every generator has
/// finite π-number index, and exhibits π-powers for sample elements.
pub fn lemma_rob_check(g: &PcGroup, h: &Subgroup, pi: &PrimeSet, samples: &[Element]) -> Result<RobReport> {
    h.check(g)?;
    check_all(g, samples)?;
    let names = g.names();
    let idx = match index(g, h)? {
        Index::Finite(i) => i,
        Index::Infinite => {
            return Err(Error::PreconditionFailed(
                "subgroup has infinite index, so some generator has no power in it".into(),
            ))
        }
    };
    let mut generator_powers = Vec::new();
    for i in 0..g.len() {
        let r = power_into(g, &g.unit(i), h, &idx)
            .ok_or_else(|| Error::Internal(format!("no power of {} within the index bound", names[i])))?;
        if !is_pi_number(r.clone(), pi)? {
            return Err(Error::PreconditionFailed(format!(
                "{} has no π-power in the subgroup: least power is {}, not a π-number for π = {}",
                names[i], r, pi
            )));
        }
        generator_powers.push(r);
    }
    let mut out = Vec::new();
    for x in samples {
        let r = power_into(g, x.exponents(), h, &idx)
            .ok_or_else(|| Error::Internal("sample has no power within the index bound".into()))?;
        out.push((x.clone(), r));
    }
    Ok(RobReport {
        index_is_pi_number: is_pi_number(idx.clone(), pi)?,
        index: idx,
        generator_powers,
        samples: out,
    })
}

/// `G/H` for normal `H`, with the projection `G → G/H`.
#[derive(Debug)]
pub struct Quotient {
    pub group: PcGroup,
    /// Ambient level of each quotient generator.
    pub levels: Vec<usize>,
    kernel: Subgroup,
}

impl Quotient {
    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    pub(crate) fn project_exps(&self, g: &PcGroup, x: &[BigInt]) -> Exps {
        let c = self.kernel.canonical(g, x);
        self.levels.iter().map(|&k| c[k].clone()).collect()
    }

    pub fn project(&self, g: &PcGroup, x: &Element) -> Result<Element> {
        if x.group_id() != g.id() || self.kernel.group != g.id() {
            return Err(Error::GroupMismatch);
        }
        Ok(self.group.wrap(self.project_exps(g, x.exponents())))
    }

    /// Preimage exponents of a quotient normal form (the canonical lift).
    pub(crate) fn lift_exps(&self, g: &PcGroup, y: &[BigInt]) -> Exps {
        let mut v = g.zero();
        for (i, &k) in self.levels.iter().enumerate() {
            v[k] = y[i].clone();
        }
        v
    }

    /// Full preimage of a subgroup of the quotient.
    pub fn preimage(&self, g: &PcGroup, k: &Subgroup) -> Result<Subgroup> {
        k.check(&self.group)?;
        let lifts: Vec<Element> = k.rows().map(|r| g.wrap(self.lift_exps(g, r))).collect();
        extend(g, &self.kernel, &lifts, false)
    }
}

pub fn quotient(g: &PcGroup, h: &Subgroup) -> Result<Quotient> {
    h.check(g)?;
    if !h.is_normal(g)? {
        return Err(Error::InvalidArgument("quotient by a non-normal subgroup".into()));
    }
    let pres = g.presentation();
    let mut levels = Vec::new();
    let mut orders = Vec::new();
    for k in 0..g.len() {
        match &h.rows[k] {
            Some(r) if r[k].is_one() => {}
            Some(r) => {
                levels.push(k);
                orders.push(Some(r[k].clone()));
            }
            None => {
                levels.push(k);
                orders.push(g.relative_order(k).cloned());
            }
        }
    }
    let to_word = |v: &Exps| {
        let c = h.canonical(g, v);
        Word::new(
            levels
                .iter()
                .enumerate()
                .map(|(i, &k)| (i, c[k].clone())),
        )
    };
    let mut powers = Vec::new();
    for (i, &k) in levels.iter().enumerate() {
        match &orders[i] {
            Some(o) => powers.push(to_word(&g.pow(&g.unit(k), o))),
            None => powers.push(Word::identity()),
        }
    }
    let mut commutators = std::collections::BTreeMap::new();
    for (jj, &j) in levels.iter().enumerate() {
        for (ii, &i) in levels.iter().enumerate().take(jj) {
            let w = to_word(&g.comm(&g.unit(j), &g.unit(i)));
            if !w.is_identity() {
                commutators.insert((jj, ii), w);
            }
        }
    }
    let mut generators: Vec<Generator> = levels.iter().map(|&k| pres.generators()[k].clone()).collect();
    raise_weights(&mut generators, &commutators);
    let p = Presentation::from_parts(
        format!("{}_quotient", pres.name()),
        generators,
        orders,
        powers,
        commutators,
    );
    Ok(Quotient {
        group: PcGroup::new_unchecked(p),
        levels,
        kernel: h.clone(),
    })
}

/// Raises weights just enough to be compatible with the commutator
/// relations.
fn raise_weights(gens: &mut [Generator], comms: &std::collections::BTreeMap<(usize, usize), Word>) {
    for k in 0..gens.len() {
        for ((j, i), w) in comms {
            if w.generators().any(|g| g == k) {
                let need = gens[*j].weight + gens[*i].weight;
                if gens[k].weight < need {
                    gens[k].weight = need;
                }
            }
        }
    }
}
