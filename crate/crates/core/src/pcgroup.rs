//! Normal-form arithmetic by collection from the left.
//!
//! Elements are exponent vectors `(a_1, ..., a_n)` standing for
//! `g_1^{a_1} ⋯ g_n^{a_n}`. Multiplying a normal form `u` by `g_k^e` rewrites
//!
//! ```text
//! u · g_k^e = (g_1^{u_1} ⋯ g_k^{u_k}) · g_k^e · t^{g_k^e},   t = g_{k+1}^{u_{k+1}} ⋯
//! ```
//!
//! and recurses into the normal subgroup `G_{k+1} = ⟨g_{k+1}, ..., g_n⟩`.
//! Conjugation by `g_k^e` on an abelian `G_{k+1}` is `(I + N)^e`, expanded
//! with binomial coefficients since `N` is nilpotent; otherwise it is
//! assembled from cached images under `g_k^{±2^j}`.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::presentation::{builtin, parse_presentation, Builtin, Presentation, Word};

static NEXT_GROUP_ID: AtomicU64 = AtomicU64::new(1);

pub(crate) type Exps = Vec<BigInt>;

/// A group element in normal form, tagged with the group it belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    group: u64,
    exps: Exps,
}

impl Element {
    pub fn exponents(&self) -> &[BigInt] {
        &self.exps
    }

    pub fn into_exponents(self) -> Vec<BigInt> {
        self.exps
    }

    pub fn group_id(&self) -> u64 {
        self.group
    }

    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero exponent.
    pub fn depth(&self) -> Option<usize> {
        first_nonzero(&self.exps)
    }
}

/// Outcome of the overlap tests.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Consistency {
    Consistent,
    /// Generators `(a, b, c)` of an overlap whose two collections differ.
    Counterexample {
        generators: (usize, usize, usize),
        overlap: String,
        left: Vec<BigInt>,
        right: Vec<BigInt>,
    },
}

impl Consistency {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Consistency::Consistent)
    }
}

type Table = Arc<Vec<Exps>>;

/// A group given by a nilpotent presentation, with its collector.
pub struct PcGroup {
    id: u64,
    pres: Presentation,
    n: usize,
    orders: Vec<Option<BigInt>>,
    power_rhs: Vec<Exps>,
    // comm_rhs[j][i] = normal form of [g_j, g_i] for j > i, None when trivial
    comm_rhs: Vec<Vec<Option<Exps>>>,
    abelian_from: Vec<bool>,
    tables: Mutex<HashMap<(usize, u32, bool), Table>>,
}

impl fmt::Debug for PcGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PcGroup")
            .field("id", &self.id)
            .field("name", &self.pres.name())
            .field("generators", &self.pres.names())
            .finish()
    }
}

pub(crate) fn first_nonzero(v: &[BigInt]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

/// `e(e-1)⋯(e-i+1)/i!` for any integer `e`.
fn binomial(e: &BigInt, i: usize) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for t in 0..i {
        num *= e - BigInt::from(t);
        den *= BigInt::from(t + 1);
    }
    num / den
}

impl PcGroup {
    /// Builds the collector and rejects inconsistent presentations.
    pub fn new(pres: Presentation) -> Result<Self> {
        let g = Self::new_unchecked(pres);
        match g.check_consistency() {
            Consistency::Consistent => Ok(g),
            Consistency::Counterexample { generators: (a, b, c), overlap, .. } => {
                let names = g.pres.names();
                Err(Error::Inconsistent(format!(
                    "overlap {} on ({}, {}, {}) collects two ways",
                    overlap, names[a], names[b], names[c]
                )))
            }
        }
    }

    /// Builds the collector without running the overlap tests.
    pub fn new_unchecked(pres: Presentation) -> Self {
        let n = pres.len();
        let orders: Vec<Option<BigInt>> = (0..n).map(|i| pres.order(i).cloned()).collect();
        let mut abelian_from = vec![true; n + 1];
        for ((_, i), _) in pres.nontrivial_commutators() {
            for flag in abelian_from.iter_mut().take(*i + 1) {
                *flag = false;
            }
        }
        let mut g = PcGroup {
            id: NEXT_GROUP_ID.fetch_add(1, Ordering::Relaxed),
            n,
            orders,
            power_rhs: vec![vec![BigInt::zero(); n]; n],
            comm_rhs: vec![Vec::new(); n],
            abelian_from,
            tables: Mutex::new(HashMap::new()),
            pres,
        };
        for j in 0..n {
            g.comm_rhs[j] = vec![None; j];
        }
        // right-hand sides at level k only involve data from levels above k
        for k in (0..n).rev() {
            let w = g.pres.power_rhs(k).clone();
            g.power_rhs[k] = g.collect_exps(&w);
            for j in k + 1..n {
                if let Some(w) = g.pres.commutator_rhs(j, k).cloned() {
                    let v = g.collect_exps(&w);
                    if first_nonzero(&v).is_some() {
                        g.comm_rhs[j][k] = Some(v);
                    }
                }
            }
        }
        g
    }

    pub fn from_text(text: &str) -> Result<Self> {
        Self::new(parse_presentation(text)?)
    }

    pub fn builtin(which: &Builtin) -> Result<Self> {
        Self::new(builtin(which)?)
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn names(&self) -> Vec<String> {
        self.pres.names()
    }

    pub fn relative_order(&self, i: usize) -> Option<&BigInt> {
        self.orders[i].as_ref()
    }

    pub fn is_finite(&self) -> bool {
        self.orders.iter().all(Option::is_some)
    }

    /// Group order when finite.
    pub fn order(&self) -> Option<BigInt> {
        self.orders
            .iter()
            .try_fold(BigInt::one(), |acc, o| o.as_ref().map(|o| acc * o))
    }

    pub fn identity(&self) -> Element {
        self.wrap(self.zero())
    }

    pub fn generator(&self, i: usize) -> Element {
        self.wrap(self.unit(i))
    }

    pub fn generators(&self) -> Vec<Element> {
        (0..self.n).map(|i| self.generator(i)).collect()
    }

    /// Wraps an exponent vector that must already be a normal form.
    pub fn element(&self, exps: Vec<BigInt>) -> Result<Element> {
        if exps.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "expected {} exponents, got {}",
                self.n,
                exps.len()
            )));
        }
        for (i, e) in exps.iter().enumerate() {
            if let Some(o) = &self.orders[i] {
                if e.is_negative() || e >= o {
                    return Err(Error::InvalidArgument(format!(
                        "exponent {} of {} is outside [0, {})",
                        e,
                        self.pres.generators()[i].name,
                        o
                    )));
                }
            }
        }
        Ok(self.wrap(exps))
    }

    /// Normal form of `g_1^{a_1} ⋯ g_n^{a_n}` for arbitrary integers `a_i`.
    pub fn element_from_exponents<T: Into<BigInt> + Clone>(&self, exps: &[T]) -> Result<Element> {
        if exps.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "expected {} exponents, got {}",
                self.n,
                exps.len()
            )));
        }
        let w = Word::new(exps.iter().enumerate().map(|(i, e)| (i, e.clone().into())));
        Ok(self.wrap(self.collect_exps(&w)))
    }

    pub fn collect(&self, w: &Word) -> Result<Element> {
        if let Some(bad) = w.generators().find(|&g| g >= self.n) {
            return Err(Error::InvalidWord(format!("generator index {bad} out of range")));
        }
        Ok(self.wrap(self.collect_exps(w)))
    }

    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let w = self.pres.parse_word(text)?;
        self.collect(&w)
    }

    fn check(&self, a: &Element) -> Result<()> {
        if a.group == self.id {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.mul(&a.exps, &b.exps)))
    }

    pub fn power(&self, a: &Element, k: impl Into<BigInt>) -> Result<Element> {
        self.check(a)?;
        Ok(self.wrap(self.pow(&a.exps, &k.into())))
    }

    pub fn inverse(&self, a: &Element) -> Result<Element> {
        self.check(a)?;
        Ok(self.wrap(self.inv(&a.exps)))
    }

    /// `[a, b] = a⁻¹b⁻¹ab`.
    pub fn commutator(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.comm(&a.exps, &b.exps)))
    }

    /// `b⁻¹ab`.
    pub fn conjugate(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.conj(&a.exps, &b.exps)))
    }

    /// Renders as `x^1*y^-2`, skipping zero exponents; the identity is `1`.
    pub fn render(&self, a: &Element) -> String {
        self.render_exps(&a.exps)
    }

    pub(crate) fn render_exps(&self, v: &[BigInt]) -> String {
        let gens = self.pres.generators();
        let parts: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(|(i, e)| format!("{}^{}", gens[i].name, e))
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Order of an element, `None` when infinite.
    pub fn element_order(&self, a: &Element) -> Result<Option<BigInt>> {
        self.check(a)?;
        Ok(self.order_of(&a.exps))
    }

    pub(crate) fn order_of(&self, v: &[BigInt]) -> Option<BigInt> {
        let mut x = v.to_vec();
        let mut ord = BigInt::one();
        // the leading exponent's order in the factor G_k/G_{k+1} divides the
        // element order; strip it and continue
        while let Some(k) = first_nonzero(&x) {
            let o = self.orders[k].as_ref()?;
            let m = o / x[k].gcd(o);
            x = self.pow(&x, &m);
            ord *= m;
        }
        Some(ord)
    }

    // ---- exponent-vector layer -------------------------------------------

    pub(crate) fn wrap(&self, exps: Exps) -> Element {
        Element { group: self.id, exps }
    }

    pub(crate) fn zero(&self) -> Exps {
        vec![BigInt::zero(); self.n]
    }

    pub(crate) fn unit(&self, i: usize) -> Exps {
        let mut v = self.zero();
        v[i] = BigInt::one();
        v
    }

    pub(crate) fn collect_exps(&self, w: &Word) -> Exps {
        let mut u = self.zero();
        for (g, e) in w.syllables() {
            self.mul_gen_pow(&mut u, *g, e);
        }
        u
    }

    pub(crate) fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Exps {
        let mut u = a.to_vec();
        self.mul_into(&mut u, b);
        u
    }

    pub(crate) fn mul_into(&self, u: &mut Exps, b: &[BigInt]) {
        let Some(fb) = first_nonzero(b) else { return };
        let start = first_nonzero(u).map_or(fb, |fa| fa.min(fb));
        if self.abelian_from[start] {
            for (x, y) in u.iter_mut().zip(b).skip(fb) {
                *x += y;
            }
            self.normalize_from(u, start);
            return;
        }
        for (l, e) in b.iter().enumerate().skip(fb) {
            if !e.is_zero() {
                self.mul_gen_pow(u, l, e);
            }
        }
    }

    pub(crate) fn inv(&self, a: &[BigInt]) -> Exps {
        let Some(f) = first_nonzero(a) else { return self.zero() };
        if self.abelian_from[f] {
            let mut u: Exps = a.iter().map(|x| -x).collect();
            self.normalize_from(&mut u, f);
            return u;
        }
        let mut u = self.zero();
        for l in (f..self.n).rev() {
            if !a[l].is_zero() {
                self.mul_gen_pow(&mut u, l, &-&a[l]);
            }
        }
        u
    }

    pub(crate) fn pow(&self, a: &[BigInt], m: &BigInt) -> Exps {
        let Some(f) = first_nonzero(a) else { return self.zero() };
        if m.is_zero() {
            return self.zero();
        }
        if self.abelian_from[f] {
            let mut u: Exps = a.iter().map(|x| x * m).collect();
            self.normalize_from(&mut u, f);
            return u;
        }
        if a[f + 1..].iter().all(Zero::is_zero) {
            let mut u = self.zero();
            self.mul_gen_pow(&mut u, f, &(&a[f] * m));
            return u;
        }
        let (mut base, mut e) = if m.is_negative() {
            (self.inv(a), -m)
        } else {
            (a.to_vec(), m.clone())
        };
        let mut acc = self.zero();
        let two = BigInt::from(2);
        loop {
            if e.is_odd() {
                self.mul_into(&mut acc, &base);
            }
            e /= &two;
            if e.is_zero() {
                break;
            }
            base = self.mul(&base, &base);
        }
        acc
    }

    pub(crate) fn comm(&self, a: &[BigInt], b: &[BigInt]) -> Exps {
        let ba = self.mul(b, a);
        let ab = self.mul(a, b);
        self.mul(&self.inv(&ba), &ab)
    }

    pub(crate) fn conj(&self, a: &[BigInt], b: &[BigInt]) -> Exps {
        let ab = self.mul(a, b);
        self.mul(&self.inv(b), &ab)
    }

    pub(crate) fn is_trivial(v: &[BigInt]) -> bool {
        v.iter().all(Zero::is_zero)
    }

    /// Carries torsion exponents into `[0, e_l)` for `l ≥ k`, assuming
    /// `G_k` abelian.
    fn normalize_from(&self, u: &mut Exps, k: usize) {
        for l in k..self.n {
            if let Some(o) = &self.orders[l] {
                if u[l].is_negative() || u[l] >= *o {
                    let (q, r) = u[l].div_mod_floor(o);
                    u[l] = r;
                    for m in l + 1..self.n {
                        if !self.power_rhs[l][m].is_zero() {
                            u[m] += &q * &self.power_rhs[l][m];
                        }
                    }
                }
            }
        }
    }

    /// `u ← u · g_k^e` for a normal form `u`.
    fn mul_gen_pow(&self, u: &mut Exps, k: usize, e: &BigInt) {
        if e.is_zero() {
            return;
        }
        if self.abelian_from[k] {
            u[k] += e;
            self.normalize_from(u, k);
            return;
        }
        let mut tail = self.zero();
        let mut has_tail = false;
        for l in k + 1..self.n {
            if !u[l].is_zero() {
                has_tail = true;
                tail[l] = std::mem::take(&mut u[l]);
            }
        }
        if has_tail {
            tail = self.conjugate_tail(k, tail, e);
        }
        let s = &u[k] + e;
        match &self.orders[k] {
            Some(o) if s.is_negative() || s >= *o => {
                let (q, r) = s.div_mod_floor(o);
                u[k] = r;
                let wq = self.pow(&self.power_rhs[k], &q);
                tail = self.mul(&wq, &tail);
            }
            _ => u[k] = s,
        }
        for l in k + 1..self.n {
            u[l] = std::mem::take(&mut tail[l]);
        }
    }

    /// `g_k^{-e} · t · g_k^e` for `t ∈ G_{k+1}`.
    fn conjugate_tail(&self, k: usize, t: Exps, e: &BigInt) -> Exps {
        if self.abelian_from[k + 1] {
            let mut acc = t.clone();
            let mut y = t;
            let mut i = 1;
            loop {
                y = self.nilpotent_part(k, &y);
                if Self::is_trivial(&y) {
                    break;
                }
                let c = binomial(e, i);
                if !c.is_zero() {
                    for (a, b) in acc.iter_mut().zip(&y) {
                        if !b.is_zero() {
                            *a += &c * b;
                        }
                    }
                }
                i += 1;
            }
            self.normalize_from(&mut acc, k + 1);
            return acc;
        }
        let neg = e.is_negative();
        let mut m = e.abs();
        let mut t = t;
        let mut j = 0u32;
        let two = BigInt::from(2);
        while !m.is_zero() {
            if m.is_odd() {
                let table = self.table(k, j, neg);
                t = self.apply(&table, k, &t);
            }
            m /= &two;
            j += 1;
        }
        t
    }

    /// `N(y)_m = Σ_l y_l · [g_l, g_k]_m`, the linear part of conjugation by
    /// `g_k` on an abelian `G_{k+1}`.
    fn nilpotent_part(&self, k: usize, y: &[BigInt]) -> Exps {
        let mut out = self.zero();
        for l in k + 1..self.n {
            if y[l].is_zero() {
                continue;
            }
            if let Some(w) = &self.comm_rhs[l][k] {
                for m in l + 1..self.n {
                    if !w[m].is_zero() {
                        out[m] += &y[l] * &w[m];
                    }
                }
            }
        }
        out
    }

    /// `∏_{l>k} images[l]^{t_l}`.
    fn apply(&self, images: &[Exps], k: usize, t: &[BigInt]) -> Exps {
        let mut acc = self.zero();
        for l in k + 1..self.n {
            if !t[l].is_zero() {
                let p = self.pow(&images[l], &t[l]);
                self.mul_into(&mut acc, &p);
            }
        }
        acc
    }

    /// Images of `g_l` (`l > k`) under conjugation by `g_k^{±2^j}`.
    fn table(&self, k: usize, j: u32, neg: bool) -> Table {
        if let Some(t) = self.tables.lock().expect("table cache").get(&(k, j, neg)) {
            return t.clone();
        }
        let images: Vec<Exps> = if j > 0 {
            let prev = self.table(k, j - 1, neg);
            (0..self.n)
                .map(|l| if l > k { self.apply(&prev, k, &prev[l]) } else { self.zero() })
                .collect()
        } else if !neg {
            (0..self.n)
                .map(|l| {
                    let mut v = self.unit(l);
                    if l > k {
                        if let Some(w) = &self.comm_rhs[l][k] {
                            for m in l + 1..self.n {
                                v[m] = w[m].clone();
                            }
                        }
                    }
                    v
                })
                .collect()
        } else {
            // g_k g_l g_k^-1 = g_l · φ^-1([g_l,g_k]^-1), whose second factor
            // only needs images of later generators
            let mut images = vec![self.zero(); self.n];
            for l in (k + 1..self.n).rev() {
                let mut v = self.unit(l);
                if let Some(w) = &self.comm_rhs[l][k] {
                    let winv = self.inv(w);
                    let img = self.apply(&images, k, &winv);
                    for m in l + 1..self.n {
                        v[m] = img[m].clone();
                    }
                }
                images[l] = v;
            }
            images
        };
        let t = Arc::new(images);
        self.tables
            .lock()
            .expect("table cache")
            .insert((k, j, neg), t.clone());
        t
    }

    // ---- consistency -----------------------------------------------------

    /// Runs the standard overlap tests for polycyclic presentations.
    pub fn check_consistency(&self) -> Consistency {
        let n = self.n;
        let u = |i: usize| self.unit(i);
        let neg = |i: usize| {
            let mut v = self.zero();
            v[i] = BigInt::from(-1);
            v
        };
        let scaled = |i: usize, e: BigInt| {
            let mut v = self.zero();
            v[i] = e;
            v
        };
        let fail = |gens, overlap: &str, left: Exps, right: Exps| {
            if left == right {
                None
            } else {
                Some(Consistency::Counterexample {
                    generators: gens,
                    overlap: overlap.into(),
                    left,
                    right,
                })
            }
        };
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let left = self.mul(&self.mul(&u(k), &u(j)), &u(i));
                    let right = self.mul(&u(k), &self.mul(&u(j), &u(i)));
                    if let Some(c) = fail((k, j, i), "(c*b)*a = c*(b*a)", left, right) {
                        return c;
                    }
                }
            }
        }
        for j in 0..n {
            for i in 0..j {
                if let Some(e) = &self.orders[j] {
                    let left = self.mul(&self.power_rhs[j], &u(i));
                    let right = self.mul(&scaled(j, e - 1), &self.mul(&u(j), &u(i)));
                    if let Some(c) = fail((j, j, i), "b^e*a = b^(e-1)*(b*a)", left, right) {
                        return c;
                    }
                }
                if let Some(e) = &self.orders[i] {
                    let left = self.mul(&u(j), &self.power_rhs[i]);
                    let right = self.mul(&self.mul(&u(j), &u(i)), &scaled(i, e - 1));
                    if let Some(c) = fail((j, i, i), "b*a^e = (b*a)*a^(e-1)", left, right) {
                        return c;
                    }
                } else {
                    let left = self.mul(&self.mul(&u(j), &neg(i)), &u(i));
                    if let Some(c) = fail((j, i, i), "(b*a^-1)*a = b", left, u(j)) {
                        return c;
                    }
                }
                if self.orders[j].is_none() {
                    let left = self.mul(&neg(j), &self.mul(&u(j), &u(i)));
                    if let Some(c) = fail((j, j, i), "b^-1*(b*a) = a", left, u(i)) {
                        return c;
                    }
                    if self.orders[i].is_none() {
                        let left = self.mul(&self.mul(&neg(j), &neg(i)), &u(i));
                        if let Some(c) = fail((j, i, i), "(b^-1*a^-1)*a = b^-1", left, neg(j)) {
                            return c;
                        }
                    }
                }
            }
            if self.orders[j].is_some() {
                let left = self.mul(&u(j), &self.power_rhs[j]);
                let right = self.mul(&self.power_rhs[j], &u(j));
                if let Some(c) = fail((j, j, j), "a*a^e = a^e*a", left, right) {
                    return c;
                }
            }
        }
        Consistency::Consistent
    }

    /// The quotient by `G_k = ⟨g_k, ..., g_n⟩`, keeping the first `k`
    /// generators.
    pub fn truncate(&self, k: usize) -> Result<PcGroup> {
        Ok(PcGroup::new_unchecked(self.pres.truncate(k)?))
    }

    pub fn direct_product(&self, other: &PcGroup) -> PcGroup {
        PcGroup::new_unchecked(self.pres.direct_product(&other.pres, "'"))
    }
}

/// Overlap tests on a presentation without keeping the collector.
pub fn check_consistency(p: &Presentation) -> Consistency {
    PcGroup::new_unchecked(p.clone()).check_consistency()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::HEISENBERG_SOURCE;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn heisenberg_examples() {
        let g = PcGroup::from_text(HEISENBERG_SOURCE).unwrap();
        let yx = g.parse_element("y*x").unwrap();
        assert_eq!(yx.exponents(), big(&[1, 1, -1]).as_slice());
        assert_eq!(g.render(&yx), "x^1*y^1*z^-1");
        let xy = g.parse_element("x*y").unwrap();
        assert_eq!(xy.exponents(), big(&[1, 1, 0]).as_slice());
        assert_eq!(g.power(&xy, 2).unwrap().exponents(), big(&[2, 2, -1]).as_slice());
        let (x, y) = (g.generator(0), g.generator(1));
        assert_eq!(g.commutator(&x, &y).unwrap(), g.generator(2));
        // x^a y^b z^c is the unitriangular matrix M(a, b, c + ab), so
        // xyz = M(1,1,2) and its inverse M(-1,-1,-1) has normal form (-1,-1,-2)
        let xyz = g.parse_element("x*y*z").unwrap();
        assert_eq!(g.power(&xyz, -1).unwrap().exponents(), big(&[-1, -1, -2]).as_slice());
        assert_eq!(g.power(&xy, -1).unwrap().exponents(), big(&[-1, -1, -1]).as_slice());
        assert_eq!(g.render(&g.identity()), "1");
    }

    #[test]
    fn example2_power_relation() {
        let g = PcGroup::builtin(&Builtin::Example2).unwrap();
        let c5 = g.parse_element("c^5").unwrap();
        assert_eq!(c5.exponents(), big(&[0, 0, 1]).as_slice());
        let ab = g.commutator(&g.generator(0), &g.generator(1)).unwrap();
        assert_eq!(ab.exponents(), big(&[0, 0, 2]).as_slice());
        assert_eq!(g.element_order(&g.generator(2)).unwrap(), Some(BigInt::from(4)));
        assert_eq!(g.element_order(&g.generator(0)).unwrap(), None);
    }

    #[test]
    fn builtins_are_consistent() {
        for b in [
            Builtin::Heisenberg,
            Builtin::Example2,
            Builtin::FreeNilpotent { class: 1, rank: 3 },
            Builtin::FreeNilpotent { class: 2, rank: 2 },
            Builtin::FreeNilpotent { class: 2, rank: 3 },
            Builtin::FreeNilpotent { class: 3, rank: 2 },
            Builtin::FreeNilpotent { class: 3, rank: 3 },
            Builtin::Abelian(vec![0, 0, 5]),
        ] {
            let p = builtin(&b).unwrap();
            assert!(check_consistency(&p).is_consistent(), "{b:?}");
        }
    }

    #[test]
    fn inconsistent_overlap_is_reported() {
        let text = "group bad\ngen x order 2\ngen y\ngen z\nrel [y,x] = z\n";
        let p = parse_presentation(text).unwrap();
        match check_consistency(&p) {
            Consistency::Counterexample { generators, .. } => assert_eq!(generators, (1, 0, 0)),
            c => panic!("{c:?}"),
        }
        assert!(matches!(PcGroup::new(p), Err(Error::Inconsistent(_))));
        // the same group with z of order 2 is consistent
        let text = "group ok\ngen x order 2\ngen y\ngen z order 2\nrel [y,x] = z\n";
        assert!(PcGroup::from_text(text).is_ok());
    }

    #[test]
    fn mixed_groups_are_rejected() {
        let g = PcGroup::from_text(HEISENBERG_SOURCE).unwrap();
        let h = PcGroup::from_text(HEISENBERG_SOURCE).unwrap();
        assert_eq!(g.multiply(&g.generator(0), &h.generator(0)), Err(Error::GroupMismatch));
    }

    #[test]
    fn huge_exponents_do_not_overflow() {
        let g = PcGroup::builtin(&Builtin::FreeNilpotent { class: 3, rank: 2 }).unwrap();
        let e: BigInt = BigInt::from(10).pow(30);
        let x = g.generator(0);
        let y = g.generator(1);
        let xy = g.multiply(&x, &y).unwrap();
        let p = g.power(&xy, e.clone()).unwrap();
        let back = g.power(&p, -1).unwrap();
        assert_eq!(g.multiply(&p, &back).unwrap(), g.identity());
        // leading exponents are exact
        assert_eq!(p.exponents()[0], e);
    }

    #[test]
    fn truncation_drops_later_generators() {
        let g = PcGroup::builtin(&Builtin::FreeNilpotent { class: 3, rank: 2 }).unwrap();
        let q = g.truncate(3).unwrap();
        assert!(q.check_consistency().is_consistent());
        assert_eq!(q.names(), vec!["x1", "x2", "c21"]);
    }
}
