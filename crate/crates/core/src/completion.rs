//! Roots in torsion-free nilpotent groups and the class-2 π-completion.
//!
//! In class 2 with generators split as `P = (g_1..g_m)` followed by a central
//! block `C` containing every commutator, the group law in coordinates is
//!
//! ```text
//! (a·b)_P = a_P + b_P
//! (a·b)_C = a_C + b_C + Σ_{i<j} a_j b_i v_{ji}        v_{ji} = [g_j, g_i]
//! (a^q)_C = q a_C + C(q,2) Σ_{i<j} a_i a_j v_{ji}
//! ```
//!
//! which makes sense for exponents in `Q_π` and gives `Ĝ^π`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::arith::{is_pi_number, pi_numbers_up_to, PiRational, PrimeSet};
use crate::error::{Error, Result};
use crate::isolator::torsion_subgroup;
use crate::lattice::{hnf_with_transform, is_zero_row, sublattice_index, Matrix};
use crate::pcgroup::{first_nonzero, Element, Exps, PcGroup};
use crate::presentation::Cursor;
use crate::subgroups::nilpotency_class;

fn ensure_torsion_free(g: &PcGroup) -> Result<()> {
    if g.presentation().has_torsion_generators() && !torsion_subgroup(g)?.is_trivial() {
        return Err(Error::UnsupportedGroup("root extraction needs a torsion-free group".into()));
    }
    Ok(())
}

/// The `x` with `x^n = h`, if it exists.
pub fn nth_root(g: &PcGroup, h: &Element, n: &BigInt) -> Result<Option<Element>> {
    if !n.is_positive() {
        return Err(Error::InvalidArgument(format!("root degree must be positive, got {n}")));
    }
    if h.group_id() != g.id() {
        return Err(Error::GroupMismatch);
    }
    ensure_torsion_free(g)?;
    let mut x = g.zero();
    Ok(descend(g, h.exponents(), n, 0, &mut x).then(|| g.wrap(x)))
}

/// Fixes `x_k` from the level-`k` exponent of `x^n`, which is
/// `n·x_k + (prefix^n)_k` because `g_k` is central modulo `G_{k+1}`.
fn descend(g: &PcGroup, target: &[BigInt], n: &BigInt, k: usize, x: &mut Exps) -> bool {
    if k == g.len() {
        return g.pow(x, n) == target;
    }
    x[k] = BigInt::zero();
    let pn = g.pow(x, n);
    let d = &target[k] - &pn[k];
    match g.relative_order(k).cloned() {
        None => {
            if !d.is_multiple_of(n) {
                return false;
            }
            x[k] = &d / n;
            descend(g, target, n, k + 1, x)
        }
        Some(e) => {
            let gcd = n.gcd(&e);
            if !d.is_multiple_of(&gcd) {
                return false;
            }
            let m = &e / &gcd;
            let inv = (n / &gcd).extended_gcd(&m).x.mod_floor(&m);
            let t0 = ((&d / &gcd) * inv).mod_floor(&m);
            let mut t = t0;
            while t < e {
                x[k] = t.clone();
                if descend(g, target, n, k + 1, x) {
                    return true;
                }
                t += &m;
            }
            false
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MalReport {
    pub trials: usize,
    pub roots_found: usize,
    /// Elements of `G^{n^k}` without an `n`-th root; always empty unless the
    /// implementation is unsound.
    pub failures: Vec<Element>,
}

/// Samples products of `n^k`-th powers and extracts their `n`-th roots.
pub fn mal_lemma_check(g: &PcGroup, n: &BigInt, k: u32, trials: usize, seed: u64) -> Result<MalReport> {
    let class = nilpotency_class(g);
    if (k as usize) < class {
        return Err(Error::PreconditionFailed(format!(
            "k = {k} is below the nilpotency class {class}"
        )));
    }
    let e = n.pow(k);
    let mut rng = StdRng::seed_from_u64(seed);
    let mut found = 0;
    let mut failures = Vec::new();
    for _ in 0..trials {
        let mut h = g.zero();
        for _ in 0..rng.gen_range(1..=3) {
            let y: Vec<i64> = (0..g.len()).map(|_| rng.gen_range(-3..=3)).collect();
            let y = g.element_from_exponents(&y)?;
            h = g.mul(&h, &g.pow(y.exponents(), &e));
        }
        let h = g.wrap(h);
        match nth_root(g, &h, n)? {
            Some(x) if g.power(&x, n.clone())? == h => found += 1,
            _ => failures.push(h),
        }
    }
    Ok(MalReport {
        trials,
        roots_found: found,
        failures,
    })
}

/// An element of `Ĝ^π` in Mal'tsev coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalElement {
    group: u64,
    coords: Vec<PiRational>,
}

impl RationalElement {
    pub fn coords(&self) -> &[PiRational] {
        &self.coords
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(PiRational::is_integer)
    }
}

/// Coordinate arithmetic of the π-completion of a torsion-free group of
/// class at most 2.
#[derive(Clone, Debug)]
pub struct Completion {
    group: u64,
    pi: PrimeSet,
    names: Vec<String>,
    split: usize,
    // C-coordinates of [g_j, g_i] for j > i in P
    v: BTreeMap<(usize, usize), Vec<BigInt>>,
}

impl Completion {
    pub fn new(g: &PcGroup, pi: PrimeSet) -> Result<Self> {
        if g.presentation().has_torsion_generators() {
            return Err(Error::Unsupported("completions of presentations with torsion generators".into()));
        }
        let n = g.len();
        let central = |k: usize| (0..n).all(|i| PcGroup::is_trivial(&g.comm(&g.unit(k), &g.unit(i))));
        let mut split = n;
        while split > 0 && central(split - 1) {
            split -= 1;
        }
        let mut v = BTreeMap::new();
        for j in 0..split {
            for i in 0..j {
                let c = g.comm(&g.unit(j), &g.unit(i));
                if first_nonzero(&c).is_some_and(|d| d < split) {
                    return Err(Error::Unsupported(
                        "class above 2, or commutators outside the central generators".into(),
                    ));
                }
                if !PcGroup::is_trivial(&c) {
                    v.insert((j, i), c[split..].to_vec());
                }
            }
        }
        Ok(Completion {
            group: g.id(),
            pi,
            names: g.names(),
            split,
            v,
        })
    }

    pub fn pi(&self) -> &PrimeSet {
        &self.pi
    }

    pub fn dimension(&self) -> usize {
        self.names.len()
    }

    /// Number of leading non-central coordinates.
    pub fn split(&self) -> usize {
        self.split
    }

    fn in_ring(&self, x: &PiRational) -> Result<()> {
        if is_pi_number(x.denom().clone(), &self.pi)? {
            Ok(())
        } else {
            Err(Error::NotInRing(format!("{x} has a denominator outside π = {}", self.pi)))
        }
    }

    fn check(&self, a: &RationalElement) -> Result<()> {
        if a.group == self.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn element(&self, coords: Vec<PiRational>) -> Result<RationalElement> {
        if coords.len() != self.dimension() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coordinates, got {}",
                self.dimension(),
                coords.len()
            )));
        }
        for c in &coords {
            self.in_ring(c)?;
        }
        Ok(RationalElement {
            group: self.group,
            coords,
        })
    }

    pub fn identity(&self) -> RationalElement {
        RationalElement {
            group: self.group,
            coords: vec![PiRational::zero(); self.dimension()],
        }
    }

    pub fn generator(&self, i: usize) -> RationalElement {
        let mut e = self.identity();
        e.coords[i] = PiRational::one();
        e
    }

    pub fn embed(&self, x: &Element) -> Result<RationalElement> {
        if x.group_id() != self.group {
            return Err(Error::GroupMismatch);
        }
        Ok(RationalElement {
            group: self.group,
            coords: x.exponents().iter().cloned().map(PiRational::from).collect(),
        })
    }

    /// The group element when every coordinate is an integer.
    pub fn to_element(&self, g: &PcGroup, a: &RationalElement) -> Result<Option<Element>> {
        self.check(a)?;
        if g.id() != self.group {
            return Err(Error::GroupMismatch);
        }
        Ok(a
            .coords
            .iter()
            .map(PiRational::to_integer)
            .collect::<Option<Vec<_>>>()
            .map(|v| g.wrap(v)))
    }

    fn bilinear(&self, a: &[PiRational], b: &[PiRational]) -> Vec<PiRational> {
        let mut out = vec![PiRational::zero(); self.dimension() - self.split];
        for ((j, i), w) in &self.v {
            let coef = &a[*j] * &b[*i];
            if coef.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(w) {
                if !x.is_zero() {
                    *o = &*o + &(&coef * &PiRational::from(x.clone()));
                }
            }
        }
        out
    }

    pub fn rmul(&self, a: &RationalElement, b: &RationalElement) -> Result<RationalElement> {
        self.check(a)?;
        self.check(b)?;
        let corr = self.bilinear(&a.coords, &b.coords);
        let coords = (0..self.dimension())
            .map(|i| {
                let s = &a.coords[i] + &b.coords[i];
                if i >= self.split {
                    s + &corr[i - self.split]
                } else {
                    s
                }
            })
            .collect();
        Ok(RationalElement {
            group: self.group,
            coords,
        })
    }

    pub fn rpow(&self, a: &RationalElement, e: &PiRational) -> Result<RationalElement> {
        self.check(a)?;
        self.in_ring(e)?;
        let s = self.bilinear(&a.coords, &a.coords);
        let c2 = e.choose2();
        let coords = (0..self.dimension())
            .map(|i| {
                let base = e * &a.coords[i];
                if i >= self.split {
                    base + &c2 * &s[i - self.split]
                } else {
                    base
                }
            })
            .collect();
        Ok(RationalElement {
            group: self.group,
            coords,
        })
    }

    pub fn rinv(&self, a: &RationalElement) -> Result<RationalElement> {
        self.rpow(a, &PiRational::from(-1))
    }

    /// `[a, b] = a⁻¹b⁻¹ab`, central.
    pub fn rcomm(&self, a: &RationalElement, b: &RationalElement) -> Result<RationalElement> {
        self.check(a)?;
        self.check(b)?;
        let ab = self.bilinear(&a.coords, &b.coords);
        let ba = self.bilinear(&b.coords, &a.coords);
        let mut coords = vec![PiRational::zero(); self.dimension()];
        for i in self.split..self.dimension() {
            coords[i] = &ab[i - self.split] - &ba[i - self.split];
        }
        Ok(RationalElement {
            group: self.group,
            coords,
        })
    }

    /// Renders as `x^(1/2)*y^1`; the identity is `1`.
    pub fn render(&self, a: &RationalElement) -> String {
        let parts: Vec<String> = a
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                if c.is_integer() {
                    format!("{}^{}", self.names[i], c)
                } else {
                    format!("{}^({})", self.names[i], c)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Parses products of rational generator powers, e.g. `x^(1/2)*y^(-1/3)*z`.
    pub fn parse(&self, text: &str) -> Result<RationalElement> {
        let mut cur = Cursor::new(text, 1);
        let mut acc = self.identity();
        if cur.peek() == Some('1') {
            cur.integer()?;
            if !cur.at_end() {
                return Err(cur.err("unexpected trailing input"));
            }
            return Ok(acc);
        }
        loop {
            let name = cur.ident()?;
            let g = self
                .names
                .iter()
                .position(|n| *n == name)
                .ok_or_else(|| Error::InvalidWord(format!("unknown generator {name:?}")))?;
            let e = if cur.eat('^') {
                if cur.eat('(') {
                    let num = cur.integer()?;
                    let den = if cur.eat('/') { cur.integer()? } else { BigInt::one() };
                    cur.expect(')')?;
                    if den.is_zero() {
                        return Err(cur.err("zero denominator"));
                    }
                    PiRational::from_rational(BigRational::new(num, den), &self.pi)
                        .map_err(|_| Error::NotInRing(format!("exponent of {name} has a denominator outside π")))?
                } else {
                    PiRational::from(cur.integer()?)
                }
            } else {
                PiRational::one()
            };
            let term = self.rpow(&self.generator(g), &e)?;
            acc = self.rmul(&acc, &term)?;
            if !cur.eat('*') {
                break;
            }
        }
        if !cur.at_end() {
            return Err(cur.err(format!("unexpected trailing input {:?}", cur.rest())));
        }
        Ok(acc)
    }

    /// Integer power of a product of integer powers of `gens`.
    fn word(&self, gens: &[RationalElement], coeffs: &[BigInt]) -> Result<RationalElement> {
        let mut acc = self.identity();
        for (h, c) in gens.iter().zip(coeffs) {
            if !c.is_zero() {
                acc = self.rmul(&acc, &self.rpow(h, &PiRational::from(c.clone()))?)?;
            }
        }
        Ok(acc)
    }
}

/// A lattice in `Q^d` with lifts of its basis vectors.
struct RationalLattice {
    basis: Vec<Vec<BigRational>>,
    /// Integer combinations of the input vectors giving each basis vector.
    combos: Vec<Vec<BigInt>>,
    /// Integer combinations of the input vectors that vanish.
    relations: Vec<Vec<BigInt>>,
}

fn common_denominator<'a>(vs: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    vs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

fn scale(vs: &[Vec<BigRational>], d: &BigInt) -> Matrix {
    vs.iter()
        .map(|v| v.iter().map(|x| (x * BigRational::from(d.clone())).to_integer()).collect())
        .collect()
}

fn rational_lattice(vs: &[Vec<BigRational>], dim: usize) -> RationalLattice {
    let d = common_denominator(vs.iter().flatten());
    let (h, u) = hnf_with_transform(&scale(vs, &d), dim);
    let mut out = RationalLattice {
        basis: Vec::new(),
        combos: Vec::new(),
        relations: Vec::new(),
    };
    for (row, urow) in h.into_iter().zip(u) {
        if is_zero_row(&row) {
            out.relations.push(urow);
        } else {
            out.basis
                .push(row.into_iter().map(|x| BigRational::new(x, d.clone())).collect());
            out.combos.push(urow);
        }
    }
    out
}

/// `[outer : inner]` for rational lattices with `inner ⊆ outer`.
fn rational_index(outer: &[Vec<BigRational>], inner: &[Vec<BigRational>], dim: usize) -> Option<BigInt> {
    if outer.is_empty() && inner.is_empty() {
        return Some(BigInt::one());
    }
    let d = common_denominator(outer.iter().chain(inner).flatten());
    sublattice_index(&scale(outer, &d), &scale(inner, &d), dim)
}

/// The pieces of `H = ⟨gens⟩` the exact power test needs: a basis of the
/// projection `L_P(H)` with lifts into `H`, and a basis of `M = H ∩ C`.
struct Structure {
    lp: Vec<Vec<BigRational>>,
    lifts: Vec<RationalElement>,
    m: Vec<Vec<BigRational>>,
}

fn structure(c: &Completion, gens: &[RationalElement]) -> Result<Structure> {
    let p = c.split;
    let ps: Vec<Vec<BigRational>> = gens
        .iter()
        .map(|h| h.coords[..p].iter().map(|x| x.as_rational().clone()).collect())
        .collect();
    let lat = rational_lattice(&ps, p);
    let lifts = lat
        .combos
        .iter()
        .map(|u| c.word(gens, u))
        .collect::<Result<Vec<_>>>()?;
    let mut central: Vec<Vec<BigRational>> = Vec::new();
    let cpart = |x: &RationalElement| x.coords[p..].iter().map(|y| y.as_rational().clone()).collect::<Vec<_>>();
    for rel in &lat.relations {
        central.push(cpart(&c.word(gens, rel)?));
    }
    for (a, ha) in gens.iter().enumerate() {
        for hb in &gens[a + 1..] {
            central.push(cpart(&c.rcomm(ha, hb)?));
        }
    }
    let m = rational_lattice(&central, c.dimension() - p).basis;
    Ok(Structure { lp: lat.basis, lifts, m })
}

/// Why `r` fails, or `None` when `h^r` is integral for every `h ∈ H`.
fn power_obstruction(c: &Completion, s: &Structure, r: &BigInt) -> Result<Option<String>> {
    let rq = BigRational::from(r.clone());
    for (v, what) in s.lp.iter().map(|v| (v, "projection")).chain(s.m.iter().map(|v| (v, "central part"))) {
        if let Some(x) = v.iter().find(|x| !(*x * &rq).is_integer()) {
            return Ok(Some(format!("{what} basis vector has coordinate {x}; times {r} is not integral")));
        }
    }
    // h ↦ (h^r)_C is quadratic in the lattice coordinates of h, so it is
    // integer-valued once it is integral at e_j, 2e_j and e_i + e_j
    let rp = PiRational::from(r.clone());
    let mut points: Vec<RationalElement> = Vec::new();
    for (j, b) in s.lifts.iter().enumerate() {
        points.push(b.clone());
        points.push(c.rmul(b, b)?);
        for b2 in &s.lifts[j + 1..] {
            points.push(c.rmul(b, b2)?);
        }
    }
    for x in points {
        let y = c.rpow(&x, &rp)?;
        if let Some(bad) = y.coords.iter().find(|v| !v.is_integer()) {
            return Ok(Some(format!(
                "({})^{} = {} has coordinate {}",
                c.render(&x),
                r,
                c.render(&y),
                bad
            )));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiBound {
    /// Least π-number `r` with `H^r ≤ G`.
    pub r: BigInt,
    /// Smaller π-numbers with the reason each fails.
    pub rejected: Vec<(BigInt, String)>,
    /// Least π-numbers `r_i` with `h_i^{r_i} ∈ G`.
    pub generator_powers: Vec<BigInt>,
    /// `|H : D|` for `D = ⟨h_i^{r_i}⟩`, the bound the subnormal-chain argument
    /// yields.
    pub proof_bound: BigInt,
}

fn search(c: &Completion, s: &Structure, ceiling: &BigInt) -> Result<(BigInt, Vec<(BigInt, String)>)> {
    let top = ceiling
        .to_u64()
        .ok_or_else(|| Error::TooLarge(format!("search bound {ceiling} does not fit")))?;
    let mut rejected = Vec::new();
    for r in pi_numbers_up_to(top, &c.pi) {
        let r = BigInt::from(r);
        match power_obstruction(c, s, &r)? {
            None => return Ok((r, rejected)),
            Some(why) => rejected.push((r, why)),
        }
    }
    Err(Error::Internal(format!("no π-number up to {ceiling} clears the denominators")))
}

/// A π-number that always works: `D²` for odd `D`, `2D²` otherwise, where `D`
/// clears every denominator in sight.
fn ceiling(s: &Structure, gens: &[RationalElement]) -> BigInt {
    let d = common_denominator(
        s.lp.iter()
            .flatten()
            .chain(s.m.iter().flatten())
            .chain(s.lifts.iter().chain(gens).flat_map(|x| x.coords.iter().map(PiRational::as_rational))),
    );
    let d2 = &d * &d;
    if d.is_even() {
        d2 * 2
    } else {
        d2
    }
}

/// Least π-number `r` such that `h^r ∈ G` for every `h ∈ ⟨gens⟩ ≤ Ĝ^π`.
pub fn lemma_li_bound(c: &Completion, gens: &[RationalElement]) -> Result<LiBound> {
    for h in gens {
        c.check(h)?;
    }
    let s = structure(c, gens)?;
    let (r, rejected) = search(c, &s, &ceiling(&s, gens))?;
    let mut generator_powers = Vec::new();
    let mut d_gens = Vec::new();
    for h in gens {
        let single = structure(c, std::slice::from_ref(h))?;
        let (ri, _) = search(c, &single, &ceiling(&single, std::slice::from_ref(h)))?;
        d_gens.push(c.rpow(h, &PiRational::from(ri.clone()))?);
        generator_powers.push(ri);
    }
    let sd = structure(c, &d_gens)?;
    let lp_index = rational_index(&s.lp, &sd.lp, c.split)
        .ok_or_else(|| Error::Internal("D has smaller rank than H".into()))?;
    let m_index = rational_index(&s.m, &sd.m, c.dimension() - c.split)
        .ok_or_else(|| Error::Internal("D has smaller central rank than H".into()))?;
    Ok(LiBound {
        r,
        rejected,
        generator_powers,
        proof_bound: lp_index * m_index,
    })
}

/// Coordinates of `h^r` for an arbitrary element of the lattice spanned by
/// `gens`, used to spot-check a bound.
pub fn random_lattice_element(c: &Completion, gens: &[RationalElement], rng: &mut StdRng) -> Result<RationalElement> {
    let mut acc = c.identity();
    for _ in 0..rng.gen_range(1..=6) {
        let h = &gens[rng.gen_range(0..gens.len())];
        let e: i64 = rng.gen_range(-4..=4);
        acc = c.rmul(&acc, &c.rpow(h, &PiRational::from(e))?)?;
    }
    Ok(acc)
}

impl fmt::Display for LiBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r = {} (proof bound {})", self.r, self.proof_bound)
    }
}
