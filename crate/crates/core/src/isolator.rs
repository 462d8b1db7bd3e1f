//! Torsion subgroups and π-isolators.
//!
//! The torsion subgroup is built along the truncations `G/G_{k+1}`: the last
//! generator of each truncation is central, so passing from `T(G/G_k)` to
//! `T(G/G_{k+1})` is a central extension by a cyclic group.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{is_pi_number, pi_decompose, PrimeSet};
use crate::error::{Error, Result};
use crate::max_enum;
use crate::pcgroup::{Element, Exps, PcGroup};
use crate::subgroups::{index, induced_sequence, power_into, quotient, Index, Subgroup};

#[derive(Clone, Debug)]
pub struct TorsionReport {
    pub torsion_subgroup: Subgroup,
    pub order: BigInt,
    /// Every element of the torsion subgroup with its order.
    pub element_orders: Vec<(Element, BigInt)>,
    pub pi_part: Subgroup,
}

/// Enumerates a finite subgroup from its sequence.
pub(crate) fn enumerate_finite(g: &PcGroup, h: &Subgroup) -> Result<Vec<Exps>> {
    let mut rel: Vec<(Exps, u64)> = Vec::new();
    let mut size: u64 = 1;
    let limit = max_enum();
    for (k, row) in (0..g.len()).filter_map(|k| h.row(k).map(|r| (k, r))) {
        let o = g
            .relative_order(k)
            .ok_or_else(|| Error::Internal("finite subgroup with an element at an infinite level".into()))?;
        let m = (o / &row[k]).to_u64().filter(|&m| m <= limit).ok_or_else(|| {
            Error::TooLarge(format!("finite subgroup exceeds the enumeration limit {limit}"))
        })?;
        size = size
            .checked_mul(m)
            .filter(|&s| s <= limit)
            .ok_or_else(|| Error::TooLarge(format!("finite subgroup exceeds the enumeration limit {limit}")))?;
        rel.push((row.clone(), m));
    }
    let mut out = vec![g.zero()];
    for (row, m) in rel.iter().rev() {
        let mut next = Vec::with_capacity(out.len() * *m as usize);
        let mut p = g.zero();
        for _ in 0..*m {
            for t in &out {
                next.push(g.mul(&p, t));
            }
            p = g.mul(&p, row);
        }
        out = next;
    }
    Ok(out)
}

fn lift_prefix(x: &[BigInt], n: usize) -> Exps {
    let mut v = x.to_vec();
    v.resize(n, BigInt::zero());
    v
}

/// The torsion subgroup `T(G)` (finite and normal).
pub fn torsion_subgroup(g: &PcGroup) -> Result<Subgroup> {
    let n = g.len();
    if !g.presentation().has_torsion_generators() {
        return Ok(Subgroup::trivial(g));
    }
    // prev holds T(G/G_k) inside the truncation to k generators
    let mut prev: Option<(PcGroup, Subgroup)> = None;
    for k in 1..=n {
        let gk = if k == n { None } else { Some(g.truncate(k)?) };
        let cur: &PcGroup = gk.as_ref().unwrap_or(g);
        let last = k - 1;
        let lifts: Vec<Element> = match &prev {
            None => vec![],
            Some((q, t)) => enumerate_finite(q, t)?
                .iter()
                .map(|x| cur.wrap(lift_prefix(x, k)))
                .collect(),
        };
        let t = match cur.relative_order(last) {
            Some(_) => {
                // the preimage of a finite group under a finite central
                // extension is finite
                let mut gens = lifts;
                gens.push(cur.generator(last));
                induced_sequence(cur, &gens)?
            }
            None => {
                let mut gens = Vec::new();
                for x in &lifts {
                    let (o, s) = order_over_centre(cur, x.exponents(), last)?;
                    if s.is_multiple_of(&o) {
                        let mut c = cur.zero();
                        c[last] = -(&s / &o);
                        gens.push(cur.wrap(cur.mul(x.exponents(), &c)));
                    }
                }
                induced_sequence(cur, &gens)?
            }
        };
        match gk {
            Some(q) => prev = Some((q, t)),
            None => return Ok(t),
        }
    }
    unreachable!("the last truncation is g itself")
}

/// For `x` whose image modulo the central `⟨g_last⟩` has finite order `o`,
/// returns `(o, s)` with `x^o = g_last^s`.
fn order_over_centre(g: &PcGroup, x: &[BigInt], last: usize) -> Result<(BigInt, BigInt)> {
    let limit = BigInt::from(max_enum());
    let mut o = BigInt::one();
    let mut p = x.to_vec();
    while p[..last].iter().any(|e| !e.is_zero()) {
        p = g.mul(&p, x);
        o += 1;
        if o > limit {
            return Err(Error::TooLarge("element order exceeds the enumeration limit".into()));
        }
    }
    Ok((o, p[last].clone()))
}

/// The π-part of a finite nilpotent subgroup: generated by the π-parts of
/// its sequence elements.
fn pi_part(g: &PcGroup, t: &Subgroup, pi: &PrimeSet) -> Result<Subgroup> {
    let mut gens = Vec::new();
    for r in t.rows() {
        let o = g.order_of(r).ok_or_else(|| Error::Internal("torsion element of infinite order".into()))?;
        let (_, rest) = pi_decompose(o, pi)?;
        gens.push(g.wrap(g.pow(r, &BigInt::from(rest))));
    }
    induced_sequence(g, &gens)
}

pub fn torsion_report(g: &PcGroup, pi: &PrimeSet) -> Result<TorsionReport> {
    let t = torsion_subgroup(g)?;
    let elements = enumerate_finite(g, &t)?;
    let element_orders = elements
        .into_iter()
        .map(|x| {
            let o = g.order_of(&x).expect("finite");
            (g.wrap(x), o)
        })
        .collect();
    let order = finite_order(g, &t).expect("torsion subgroup is finite");
    Ok(TorsionReport {
        pi_part: pi_part(g, &t, pi)?,
        torsion_subgroup: t,
        order,
        element_orders,
    })
}

/// Order of a finite subgroup.
pub fn finite_order(g: &PcGroup, h: &Subgroup) -> Option<BigInt> {
    let mut total = BigInt::one();
    for k in 0..g.len() {
        if let Some(r) = h.row(k) {
            total *= g.relative_order(k)? / &r[k];
        }
    }
    Some(total)
}

pub fn pi_torsion_subgroup(g: &PcGroup, pi: &PrimeSet) -> Result<Subgroup> {
    let t = torsion_subgroup(g)?;
    pi_part(g, &t, pi)
}

pub fn is_pi_torsion_free(g: &PcGroup, pi: &PrimeSet) -> Result<bool> {
    Ok(pi_torsion_subgroup(g, pi)?.is_trivial())
}

#[derive(Clone, Debug)]
pub struct IsolatorReport {
    pub isolator: Subgroup,
    /// For each sequence element `x` of the isolator, a π-number `n` with
    /// `x^n ∈ H`, checked by membership.
    pub witnesses: Vec<(Element, BigInt)>,
    /// The isolator for all primes, when it differs from the π-isolator.
    pub full_isolator: Option<Subgroup>,
}

fn isolator_raw(g: &PcGroup, h: &Subgroup, pi: &PrimeSet) -> Result<Subgroup> {
    if !h.is_normal(g)? {
        return Err(Error::Unsupported("π-isolators of non-normal subgroups".into()));
    }
    let q = quotient(g, h)?;
    let t = pi_torsion_subgroup(&q.group, pi)?;
    q.preimage(g, &t)
}

/// `I_π(H) = {g : g^n ∈ H for some π-number n}` for normal `H`.
pub fn pi_isolator(g: &PcGroup, h: &Subgroup, pi: &PrimeSet) -> Result<Subgroup> {
    isolator_raw(g, h, pi)
}

/// [`pi_isolator`] with per-generator witnesses and the all-primes value for
/// comparison.
pub fn pi_isolator_report(g: &PcGroup, h: &Subgroup, pi: &PrimeSet) -> Result<IsolatorReport> {
    let iso = isolator_raw(g, h, pi)?;
    let bound = match index(g, h)? {
        Index::Finite(i) => i,
        Index::Infinite => {
            let q = quotient(g, h)?;
            let t = torsion_subgroup(&q.group)?;
            finite_order(&q.group, &t).unwrap_or_else(BigInt::one)
        }
    };
    let mut witnesses = Vec::new();
    for x in iso.sequence(g) {
        let n = power_into(g, x.exponents(), h, &bound)
            .ok_or_else(|| Error::Internal("isolator element without a power in H".into()))?;
        if !is_pi_number(n.clone(), pi)? {
            return Err(Error::Internal(format!("isolator witness {n} is not a π-number")));
        }
        witnesses.push((x, n));
    }
    let full = if pi.is_all() {
        None
    } else {
        let f = isolator_raw(g, h, &PrimeSet::all())?;
        (f != iso).then_some(f)
    };
    Ok(IsolatorReport {
        isolator: iso,
        witnesses,
        full_isolator: full,
    })
}
