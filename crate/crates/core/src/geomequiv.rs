//! Verifiers for geometric equivalence: embeddings `G → G^m` built from
//! power maps, abelian completion descriptors and finite π-completeness.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{is_pi_number, pi_decompose, PrimeSet};
use crate::error::{Error, Result};
use crate::isolator::{is_pi_torsion_free, pi_isolator, torsion_subgroup};
use crate::lattice::{abelian_invariants, Matrix};
use crate::liering::{component, graded_ring, induced_endomorphism, is_scalar_power_action, Component};
use crate::morphism::{DickReport, Homomorphism};
use crate::pcgroup::{Element, PcGroup};
use crate::subgroups::{derived_subgroup, nilpotency_class, power_subgroup, quotient, Subgroup};
use crate::zariski::FiniteGroup;

pub use crate::morphism::dick_check;

/// An embedding `φ: G → G` with image in `G^m`, with its evidence.
#[derive(Clone, Debug)]
pub struct EmbeddingWitness {
    pub source: String,
    pub target: String,
    pub m: BigInt,
    /// Image of each pc generator.
    pub images: Vec<Element>,
    pub checks: Vec<String>,
    pub injective: bool,
    pub image_in: Subgroup,
    /// Every check in `checks` passed.
    pub verified: bool,
}

impl EmbeddingWitness {
    pub fn render(&self, g: &PcGroup) -> String {
        let mut out = String::new();
        let names = g.names();
        for (n, im) in names.iter().zip(&self.images) {
            out.push_str(&format!("φ({n}) = {}\n", g.render(im)));
        }
        for c in &self.checks {
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&format!(
            "injective: {}\nimage in G^{} = {}\nverified: {}\n",
            self.injective,
            self.m,
            self.image_in.render(g),
            self.verified
        ));
        out
    }
}

fn require_pi_number(m: &BigInt, pi: &PrimeSet) -> Result<()> {
    if m.is_zero() || !is_pi_number(m.clone(), pi)? {
        return Err(Error::InvalidArgument(format!("{m} is not a π-number for π = {pi}")));
    }
    Ok(())
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

fn dick_lines(report: &DickReport, out: &mut Vec<String>) {
    for c in &report.transcript {
        out.push(format!("{}: {} = {} {}", c.relation, c.lhs, c.rhs, ok(c.holds)));
    }
}

/// Membership of every image in `G^m`, appended to `checks`.
fn containment(g: &PcGroup, m: &BigInt, images: &[Element], checks: &mut Vec<String>) -> Result<(Subgroup, bool)> {
    let gm = power_subgroup(g, m)?;
    let mut all = true;
    for (n, im) in g.names().iter().zip(images) {
        let inside = gm.contains(g, im)?;
        all &= inside;
        checks.push(format!("φ({n}) = {} ∈ G^{m} {}", g.render(im), ok(inside)));
    }
    Ok((gm, all))
}

/// `φ(x_i) = x_i^m` on the weight-1 generators of a relatively free group.
pub fn power_endo_verify(g: &PcGroup, m: &BigInt, pi: &PrimeSet) -> Result<EmbeddingWitness> {
    require_pi_number(m, pi)?;
    let p = g.presentation();
    let text: Vec<String> = p
        .generators()
        .iter()
        .filter(|gen| gen.weight == 1)
        .map(|gen| format!("{0}->{0}^{1}", gen.name, m))
        .collect();
    let phi = Homomorphism::parse(g, g, &text.join(",")).map_err(|e| Error::HypothesisFailed {
        message: format!("the power map does not extend to an endomorphism: {e}"),
        witness: None,
    })?;
    let images = phi.images(g);
    let mut checks = Vec::new();
    let report = dick_check(g, g, &images)?;
    dick_lines(&report, &mut checks);
    let ring = graded_ring(g, pi)?;
    let maps = induced_endomorphism(g, &ring, &phi)?;
    let scalar = is_scalar_power_action(&maps, m, pi)?;
    for (i, mat) in maps.matrices.iter().enumerate() {
        let rows: Vec<String> = mat
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        checks.push(format!(
            "degree {}: [{}] = {}^{}·I {}",
            i + 1,
            rows.join("; "),
            m,
            i + 1,
            ok(scalar)
        ));
    }
    let torsion_free = ring.components.iter().all(|c| c.torsion.is_empty());
    let injective = maps.kernel_trivial && scalar && torsion_free;
    checks.push(format!("kernel trivial on every section {}", ok(injective)));
    let (image_in, inside) = containment(g, m, &images, &mut checks)?;
    Ok(EmbeddingWitness {
        source: p.name().to_string(),
        target: p.name().to_string(),
        m: m.clone(),
        images,
        checks,
        injective,
        image_in,
        verified: report.holds && injective && inside,
    })
}

fn label(g: &PcGroup, x: &Element) -> String {
    let e = x.exponents();
    match e.iter().position(|v| !v.is_zero()) {
        Some(k) if e[k].is_one() && e[k + 1..].iter().all(Zero::is_zero) => g.names()[k].clone(),
        _ => format!("({})", g.render(x)),
    }
}

/// Product `∏ xs[l]^{k_l}`.
fn combine(g: &PcGroup, xs: &[Element], k: &[BigInt]) -> Result<Element> {
    let mut acc = g.identity();
    for (x, e) in xs.iter().zip(k) {
        acc = g.multiply(&acc, &g.power(x, e.clone())?)?;
    }
    Ok(acc)
}

fn formal(names: &[String], k: &[BigInt], scale: &BigInt) -> String {
    let parts: Vec<String> = names
        .iter()
        .zip(k)
        .filter(|(_, e)| !e.is_zero())
        .map(|(n, e)| format!("{n}^{}", e * scale))
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn formal_phi(names: &[String], k: &[BigInt]) -> String {
    let parts: Vec<String> = names
        .iter()
        .zip(k)
        .filter(|(_, e)| !e.is_zero())
        .map(|(n, e)| if e.is_one() { format!("φ({n})") } else { format!("φ({n})^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn section_is_scalar(g: &PcGroup, c: &Component, images: &[Element], s: &BigInt) -> Result<bool> {
    for (k, im) in images.iter().enumerate() {
        let row = c.coordinates(g, im)?;
        for (t, v) in row.iter().enumerate() {
            let want = if t == k { s.clone() } else { BigInt::zero() };
            let d = if t < c.rank { BigInt::zero() } else { c.torsion[t - c.rank].clone() };
            let diff = v - want;
            if if d.is_zero() { !diff.is_zero() } else { !diff.is_multiple_of(&d) } {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `φ(g_i) = g_i^m`, `φ(c_l) = c_l^{m²}` for a basis `ḡ` of `G/central` and
/// `c` of `central`, in a group of class at most 2.
pub fn a2_verify(g: &PcGroup, pi: &PrimeSet, m: &BigInt, central: &Subgroup) -> Result<EmbeddingWitness> {
    require_pi_number(m, pi)?;
    if nilpotency_class(g) > 2 {
        return Err(Error::UnsupportedShape("class above 2".into()));
    }
    if !is_pi_torsion_free(g, pi)? {
        return Err(Error::PreconditionFailed(format!("group has π-torsion for π = {pi}")));
    }
    let hypothesis = |message: String, witness: Option<String>| Error::HypothesisFailed { message, witness };
    for c in central.sequence(g) {
        for x in g.generators() {
            if !g.commutator(&c, &x)?.is_identity() {
                return Err(hypothesis(format!("{} is not central", g.render(&c)), Some(g.render(&c))));
            }
        }
    }
    if !central.contains_subgroup(g, &derived_subgroup(g))? {
        return Err(hypothesis("central subgroup does not contain G'".into(), None));
    }
    if pi_isolator(g, central, pi)? != *central {
        return Err(hypothesis("central subgroup is not π-isolated".into(), None));
    }
    let quot = quotient(g, central)?;
    let t = torsion_subgroup(&quot.group)?;
    if let Some(x) = t.sequence(&quot.group).first() {
        let lift = g.wrap(quot.lift_exps(g, x.exponents()));
        let order = quot.group.element_order(x)?.expect("torsion element");
        return Err(hypothesis(
            format!("G/central has torsion: {} has order {order} modulo central", g.render(&lift)),
            Some(g.render(&lift)),
        ));
    }

    let top = component(g, 1, &Subgroup::whole(g), central)?;
    let bottom = component(g, 2, central, &Subgroup::trivial(g))?;
    let m2 = m * m;
    let gbar = &top.basis;
    let cs = &bottom.basis;
    let gbar_im: Vec<Element> = gbar.iter().map(|x| g.power(x, m.clone())).collect::<Result<_>>()?;
    let c_im: Vec<Element> = cs.iter().map(|x| g.power(x, m2.clone())).collect::<Result<_>>()?;
    let gl: Vec<String> = gbar.iter().map(|x| label(g, x)).collect();
    let cl: Vec<String> = cs.iter().map(|x| label(g, x)).collect();

    let mut checks = vec![format!(
        "basis of G/central: {}; basis of central: {}",
        gl.join(", "),
        if cl.is_empty() { "-".to_string() } else { cl.join(", ") }
    )];
    let mut all = true;
    for i in 0..gbar.len() {
        for j in i + 1..gbar.len() {
            let k = bottom.coordinates(g, &g.commutator(&gbar[i], &gbar[j])?)?;
            let lhs = g.commutator(&gbar_im[i], &gbar_im[j])?;
            let holds = lhs == combine(g, &c_im, &k)?;
            all &= holds;
            checks.push(format!(
                "[{0}^{m},{1}^{m}] = {2} = {3} {4}",
                gl[i],
                gl[j],
                formal(&cl, &k, &m2),
                formal_phi(&cl, &k),
                ok(holds)
            ));
        }
    }
    for (l, c) in c_im.iter().enumerate() {
        if l >= bottom.rank {
            let d = &bottom.torsion[l - bottom.rank];
            let holds = g.power(c, d.clone())?.is_identity();
            all &= holds;
            checks.push(format!("φ({0})^{d} = {0}^{1} = 1 {2}", cl[l], &m2 * d, ok(holds)));
        }
        for (i, x) in gbar_im.iter().enumerate() {
            let holds = g.commutator(c, x)?.is_identity();
            all &= holds;
            checks.push(format!("[{}^{},{}^{m}] = 1 {}", cl[l], m2, gl[i], ok(holds)));
        }
    }

    // φ on the pc generators, through the chosen bases
    let mut images = Vec::new();
    for a in g.generators() {
        let u = top.coordinates(g, &a)?;
        let prefix = combine(g, gbar, &u)?;
        let rest = g.multiply(&g.inverse(&prefix)?, &a)?;
        let v = bottom.coordinates(g, &rest)?;
        images.push(g.multiply(&combine(g, &gbar_im, &u)?, &combine(g, &c_im, &v)?)?);
    }
    checks.push("defining relations under φ:".into());
    let report = dick_check(g, g, &images)?;
    dick_lines(&report, &mut checks);
    all &= report.holds;

    let top_scalar = section_is_scalar(g, &top, &gbar_im, m)?;
    let bottom_scalar = section_is_scalar(g, &bottom, &c_im, &m2)?;
    let coprime = bottom.torsion.iter().all(|d| d.gcd(m).is_one());
    checks.push(format!("G/central: φ acts as {m}·I {}", ok(top_scalar)));
    checks.push(format!(
        "central: φ acts as {m2}·I {}, invertible on torsion {}",
        ok(bottom_scalar),
        ok(coprime)
    ));
    let injective = top_scalar && bottom_scalar && coprime;
    let (image_in, inside) = containment(g, m, &images, &mut checks)?;
    let name = g.presentation().name().to_string();
    Ok(EmbeddingWitness {
        source: name.clone(),
        target: name,
        m: m.clone(),
        images,
        checks,
        injective,
        image_in,
        verified: all && injective && inside,
    })
}

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub statement: String,
    /// `(m, verifier, witness)` per requested `m`.
    pub witnesses: Vec<(BigInt, &'static str, EmbeddingWitness)>,
}

impl CriterionReport {
    pub fn verified(&self) -> bool {
        self.witnesses.iter().all(|(_, _, w)| w.verified)
    }
}

/// One witness `G ⪯ G^m` per requested π-number `m`.
pub fn criterion_run(g: &PcGroup, pi: &PrimeSet, ms: &[BigInt]) -> Result<CriterionReport> {
    for m in ms {
        require_pi_number(m, pi)?;
    }
    if !is_pi_torsion_free(g, pi)? {
        return Err(Error::PreconditionFailed(format!("group has π-torsion for π = {pi}")));
    }
    let class2 = nilpotency_class(g) <= 2;
    let central = if class2 {
        Some(pi_isolator(g, &derived_subgroup(g), &PrimeSet::all())?)
    } else {
        None
    };
    let mut witnesses = Vec::new();
    for m in ms {
        let w = match &central {
            Some(c) => (m.clone(), "a2", a2_verify(g, pi, m, c)?),
            None => match power_endo_verify(g, m, pi) {
                Ok(w) => (m.clone(), "relfr", w),
                Err(Error::HypothesisFailed { .. }) => {
                    return Err(Error::UnsupportedShape(
                        "class above 2 and the power map is not an endomorphism".into(),
                    ))
                }
                Err(e) => return Err(e),
            },
        };
        witnesses.push(w);
    }
    Ok(CriterionReport {
        statement: format!(
            "a π-torsion-free nilpotent group is geometrically equivalent to its π-completion \
             iff it is geometrically equivalent to G^m for every π-number m (π = {pi}); \
             witnesses cover the listed m only"
        ),
        witnesses,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianStructure {
    pub rank: usize,
    pub factors: Vec<BigInt>,
    /// No invariant factor is divisible by a prime of π.
    pub pi_valid: bool,
    /// Shape of the π-completion, e.g. `(Q_π⁺)¹ × Z/5`.
    pub completion: String,
}

fn superscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}

/// Structure of `Z^cols / rowspace(relations)`.
pub fn abelian_structure(relations: &Matrix, cols: usize, pi: &PrimeSet) -> Result<AbelianStructure> {
    let (rank, factors) = abelian_invariants(relations, cols);
    let mut pi_valid = true;
    for d in &factors {
        if !pi_decompose(d.clone(), pi)?.0.value().is_one() {
            pi_valid = false;
        }
    }
    let mut parts = Vec::new();
    if rank > 0 {
        parts.push(format!("(Q_π⁺){}", superscript(rank)));
    }
    parts.extend(factors.iter().map(|d| format!("Z/{d}")));
    let completion = if parts.is_empty() { "1".into() } else { parts.join(" × ") };
    Ok(AbelianStructure {
        rank,
        factors,
        pi_valid,
        completion,
    })
}

/// Relation matrix of an abelian pc group over its generators.
pub fn abelian_relations(g: &PcGroup) -> Result<Matrix> {
    if nilpotency_class(g) > 1 {
        return Err(Error::InvalidArgument(format!(
            "{} is not abelian",
            g.presentation().name()
        )));
    }
    let n = g.len();
    let mut rows = Vec::new();
    for i in 0..n {
        if let Some(e) = g.relative_order(i) {
            let rhs = g.collect(g.presentation().power_rhs(i))?;
            let mut row: Vec<BigInt> = rhs.exponents().iter().map(|x| -x).collect();
            row[i] += e;
            rows.push(row);
        }
    }
    Ok(rows)
}

impl fmt::Display for AbelianStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors: Vec<String> = self.factors.iter().map(ToString::to_string).collect();
        write!(
            f,
            "rank {}; invariant factors [{}]; pi-valid {}; completion {}",
            self.rank,
            factors.join(", "),
            self.pi_valid,
            self.completion
        )
    }
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// π-torsion-free and π-divisible, by brute force over the table.
pub fn is_pi_complete_finite(g: &FiniteGroup, pi: &PrimeSet) -> Result<bool> {
    if g.order() > 4096 {
        return Err(Error::TooLarge(format!("group of order {} exceeds 4096", g.order())));
    }
    for x in 0..g.order() {
        if x != g.identity() && is_pi_number(BigInt::from(g.element_order(x)), pi)? {
            return Ok(false);
        }
    }
    // x ↦ x^p for a prime p above |G| is always bijective
    for p in (2..=g.order()).filter(|&p| is_prime(p) && pi.contains(p as u64)) {
        let mut hit = vec![false; g.order()];
        for x in 0..g.order() {
            hit[g.pow(x, &BigInt::from(p))] = true;
        }
        if hit.contains(&false) {
            return Ok(false);
        }
    }
    Ok(true)
}
