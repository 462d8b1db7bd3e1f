//! The graded Lie ring of the isolator filtration `G_i = I_π(γ_i(G))`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{is_pi_number, PrimeSet};
use crate::error::{Error, Result};
use crate::isolator::pi_isolator;
use crate::lattice::{rank, smith, vec_mul, Matrix};
use crate::morphism::Homomorphism;
use crate::pcgroup::{Element, PcGroup};
use crate::subgroups::{induced_sequence, lower_central_series, membership, quotient, Quotient, Subgroup};

/// Terms `I_π(γ_1) ≥ I_π(γ_2) ≥ …`, stopping once the chain is constant.
/// The last term is the π-torsion subgroup, trivial iff `G` is π-torsion-free.
pub fn isolator_filtration(g: &PcGroup, pi: &PrimeSet) -> Result<Vec<Subgroup>> {
    let mut out: Vec<Subgroup> = Vec::new();
    for gamma in lower_central_series(g) {
        let term = pi_isolator(g, &gamma, pi)?;
        if let Some(prev) = out.last() {
            if !prev.contains_subgroup(g, &term)? {
                return Err(Error::Internal("isolator filtration is not descending".into()));
            }
            if *prev == term {
                break;
            }
        }
        out.push(term);
    }
    Ok(out)
}

/// Term `k` (1-based) of a filtration extended by its last term.
fn term(filtration: &[Subgroup], k: usize) -> &Subgroup {
    &filtration[(k - 1).min(filtration.len() - 1)]
}

/// Checks `[G_i, G_j] ≤ G_{i+j}` on generators; with normal terms this is the
/// whole condition.
pub fn check_central_filtration(g: &PcGroup, filtration: &[Subgroup]) -> Result<bool> {
    Ok(central_violation(g, filtration)?.is_none())
}

fn central_violation(g: &PcGroup, filtration: &[Subgroup]) -> Result<Option<String>> {
    if filtration.is_empty() {
        return Ok(None);
    }
    for t in filtration {
        if !t.is_normal(g)? {
            return Ok(Some(format!("{} is not normal", t.render(g))));
        }
    }
    let s = filtration.len();
    for i in 1..=s {
        for j in i..=s {
            let target = term(filtration, i + j);
            for a in term(filtration, i).sequence(g) {
                for b in term(filtration, j).sequence(g) {
                    let c = g.commutator(&a, &b)?;
                    if !target.contains(g, &c)? {
                        return Ok(Some(format!(
                            "[{}, {}] = {} is not in G_{}",
                            g.render(&a),
                            g.render(&b),
                            g.render(&c),
                            i + j
                        )));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// The section `G_i / G_{i+1}` as `Z^rank × ⊕ Z/torsion`.
#[derive(Clone, Debug)]
pub struct Component {
    pub degree: usize,
    pub rank: usize,
    pub torsion: Vec<BigInt>,
    /// Coset representatives: `rank` free generators, then one per
    /// torsion factor.
    pub basis: Vec<Element>,
    quotient: std::sync::Arc<Quotient>,
    image: Subgroup,
    // coordinate change from the image's pc sequence to the Smith basis
    v: Matrix,
    keep: Vec<usize>,
    moduli: Vec<BigInt>,
}

impl Component {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `x ∈ G_i` modulo `G_{i+1}`.
    pub fn coordinates(&self, g: &PcGroup, x: &Element) -> Result<Vec<BigInt>> {
        let q = &self.quotient.group;
        let y = self.quotient.project(g, x)?;
        let w = membership(q, &y, &self.image)?
            .ok_or_else(|| Error::InvalidArgument(format!("{} is not in G_{}", g.render(x), self.degree)))?;
        let mut raw = vec![BigInt::zero(); self.v.len()];
        for (pos, e) in w.0 {
            raw[pos] += e;
        }
        let full = vec_mul(&raw, &self.v);
        Ok(self
            .keep
            .iter()
            .zip(&self.moduli)
            .map(|(&t, d)| if d.is_zero() { full[t].clone() } else { full[t].mod_floor(d) })
            .collect())
    }

    fn reduce(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        for (x, d) in v.iter_mut().zip(&self.moduli) {
            if !d.is_zero() {
                *x = x.mod_floor(d);
            }
        }
        v
    }

    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        if self.rank > 0 || self.torsion.is_empty() {
            parts.push(format!("Z^{}", self.rank));
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        parts.join(" x ")
    }
}

pub(crate) fn component(g: &PcGroup, degree: usize, upper: &Subgroup, lower: &Subgroup) -> Result<Component> {
    let quot = quotient(g, lower)?;
    let q = &quot.group;
    let gens: Vec<Element> = upper
        .sequence(g)
        .iter()
        .map(|x| quot.project(g, x))
        .collect::<Result<_>>()?;
    let image = induced_sequence(q, &gens)?;
    let seq = image.sequence(q);
    let r = seq.len();
    // relations of the abelian pc sequence: s^{e/a} sifted through the rest
    let mut rels: Matrix = Vec::new();
    for (s, x) in seq.iter().enumerate() {
        let level = x.depth().expect("nontrivial row");
        if let Some(e) = q.relative_order(level) {
            let k = e / image.pivot(level).expect("pivot");
            let p = q.power(x, k.clone())?;
            let w = membership(q, &p, &image)?.expect("power stays in the subgroup");
            let mut row = vec![BigInt::zero(); r];
            for (pos, c) in w.0 {
                row[pos] -= c;
            }
            row[s] += k;
            rels.push(row);
        }
    }
    let sm = smith(&rels, r);
    let d = |t: usize| sm.diagonal.get(t).cloned().unwrap_or_else(BigInt::zero);
    let mut keep: Vec<usize> = (0..r).filter(|&t| d(t).is_zero()).collect();
    let rank = keep.len();
    keep.extend((0..r).filter(|&t| !d(t).is_zero() && !d(t).is_one()));
    let moduli: Vec<BigInt> = keep.iter().map(|&t| d(t)).collect();
    let basis = keep
        .iter()
        .map(|&t| {
            let mut acc = q.identity();
            for (x, c) in seq.iter().zip(&sm.v_inv[t]) {
                acc = q.multiply(&acc, &q.power(x, c.clone())?)?;
            }
            Ok(g.wrap(quot.lift_exps(g, acc.exponents())))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Component {
        degree,
        rank,
        torsion: moduli[rank..].to_vec(),
        basis,
        quotient: std::sync::Arc::new(quot),
        image,
        v: sm.v,
        keep,
        moduli,
    })
}

/// `[ā, b̄]` for basis elements `a` of degree `left.0` and `b` of degree
/// `right.0`, in the basis of degree `left.0 + right.0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bracket {
    pub left: (usize, usize),
    pub right: (usize, usize),
    pub value: Vec<BigInt>,
}

#[derive(Clone, Debug)]
pub struct GradedLieRing {
    group: u64,
    pub pi: PrimeSet,
    pub filtration: Vec<Subgroup>,
    /// `components[i - 1]` is the degree-`i` section.
    pub components: Vec<Component>,
    /// Nonzero structure constants.
    pub brackets: Vec<Bracket>,
    /// Sections with π-torsion, which the theory rules out for π-torsion-free
    /// groups.
    pub warnings: Vec<String>,
}

impl GradedLieRing {
    pub fn component(&self, degree: usize) -> Option<&Component> {
        degree.checked_sub(1).and_then(|i| self.components.get(i))
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket(&self, (i, a): (usize, &[BigInt]), (j, b): (usize, &[BigInt])) -> Option<Vec<BigInt>> {
        let target = self.component(i + j)?;
        let mut out = vec![BigInt::zero(); target.dimension()];
        for br in &self.brackets {
            if br.left.0 != i || br.right.0 != j {
                continue;
            }
            let coef = &a[br.left.1] * &b[br.right.1];
            if coef.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(&br.value) {
                *o += &coef * v;
            }
        }
        Some(target.reduce(out))
    }
}

pub fn graded_ring(g: &PcGroup, pi: &PrimeSet) -> Result<GradedLieRing> {
    let filtration = isolator_filtration(g, pi)?;
    if let Some(why) = central_violation(g, &filtration)? {
        return Err(Error::NotCentral(why));
    }
    let mut components = Vec::new();
    for i in 1..filtration.len() {
        components.push(component(g, i, &filtration[i - 1], &filtration[i])?);
    }
    let mut warnings = Vec::new();
    for c in &components {
        for d in &c.torsion {
            let bad = crate::arith::pi_decompose(d.clone(), pi)?.0;
            if !bad.value().is_one() {
                warnings.push(format!("degree {} has π-torsion Z/{}", c.degree, d));
            }
        }
    }
    let mut brackets = Vec::new();
    for (ci, a) in components.iter().enumerate() {
        for (cj, b) in components.iter().enumerate() {
            let Some(target) = components.get(ci + cj + 1) else { continue };
            for (x, ea) in a.basis.iter().enumerate() {
                for (y, eb) in b.basis.iter().enumerate() {
                    let c = g.commutator(ea, eb)?;
                    let value = target.coordinates(g, &c)?;
                    if value.iter().any(|v| !v.is_zero()) {
                        brackets.push(Bracket {
                            left: (ci + 1, x),
                            right: (cj + 1, y),
                            value,
                        });
                    }
                }
            }
        }
    }
    Ok(GradedLieRing {
        group: g.id(),
        pi: pi.clone(),
        filtration,
        components,
        brackets,
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedMaps {
    /// Row `k` of `matrices[i - 1]` is the image of basis element `k` of
    /// degree `i`.
    pub matrices: Vec<Matrix>,
    /// Every degree is injective modulo torsion.
    pub kernel_trivial: bool,
}

/// The maps `G_i/G_{i+1} → G_i/G_{i+1}` induced by an endomorphism.
pub fn induced_endomorphism(g: &PcGroup, ring: &GradedLieRing, phi: &Homomorphism) -> Result<InducedMaps> {
    if ring.group != g.id() {
        return Err(Error::GroupMismatch);
    }
    for (i, t) in ring.filtration.iter().enumerate() {
        for x in t.sequence(g) {
            let y = phi.apply(g, g, &x)?;
            if !t.contains(g, &y)? {
                return Err(Error::InvalidEndomorphism(format!(
                    "{} ∈ G_{} maps to {} outside it",
                    g.render(&x),
                    i + 1,
                    g.render(&y)
                )));
            }
        }
    }
    let mut matrices = Vec::new();
    let mut kernel_trivial = true;
    for c in &ring.components {
        let m: Matrix = c
            .basis
            .iter()
            .map(|b| c.coordinates(g, &phi.apply(g, g, b)?))
            .collect::<Result<_>>()?;
        let free: Matrix = m[..c.rank].iter().map(|row| row[..c.rank].to_vec()).collect();
        if rank(&free, c.rank) < c.rank {
            kernel_trivial = false;
        }
        matrices.push(m);
    }
    Ok(InducedMaps {
        matrices,
        kernel_trivial,
    })
}

/// `true` when `m` is a π-number and every degree-`i` matrix is `m^i·I`.
pub fn is_scalar_power_action(maps: &InducedMaps, m: &BigInt, pi: &PrimeSet) -> Result<bool> {
    if !is_pi_number(m.clone(), pi)? {
        return Ok(false);
    }
    Ok(maps.matrices.iter().enumerate().all(|(i, mat)| {
        let s = m.pow(i as u32 + 1);
        mat.iter()
            .enumerate()
            .all(|(r, row)| row.iter().enumerate().all(|(c, x)| *x == if r == c { s.clone() } else { BigInt::zero() }))
    }))
}

impl fmt::Display for GradedLieRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.components {
            writeln!(f, "degree {}: {}", c.degree, c.describe())?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Builtin;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn filtration_examples() {
        let all = PrimeSet::all();
        let h = PcGroup::builtin(&Builtin::Heisenberg).unwrap();
        let f = isolator_filtration(&h, &all).unwrap();
        let r: Vec<String> = f.iter().map(|s| s.render(&h)).collect();
        assert_eq!(r, ["<x^1, y^1, z^1>", "<z^1>", "<>"]);
        assert!(check_central_filtration(&h, &f).unwrap());

        let e = PcGroup::builtin(&Builtin::Example2).unwrap();
        let f = isolator_filtration(&e, &all).unwrap();
        let r: Vec<String> = f.iter().map(|s| s.render(&e)).collect();
        assert_eq!(r, ["<a^1, b^1, c^1>", "<c^1>"]);
        assert!(check_central_filtration(&e, &f).unwrap());

        let a = PcGroup::builtin(&Builtin::Abelian(vec![0, 0])).unwrap();
        assert_eq!(isolator_filtration(&a, &all).unwrap().len(), 2);

        let fr = PcGroup::builtin(&Builtin::FreeNilpotent { class: 3, rank: 2 }).unwrap();
        let f = isolator_filtration(&fr, &all).unwrap();
        assert_eq!(f.len(), 4);
        assert!(check_central_filtration(&fr, &f).unwrap());
    }

    #[test]
    fn heisenberg_ring() {
        let h = PcGroup::builtin(&Builtin::Heisenberg).unwrap();
        let l = graded_ring(&h, &PrimeSet::all()).unwrap();
        assert_eq!(l.to_string(), "degree 1: Z^2\ndegree 2: Z^1\n");
        let names: Vec<String> = l.components[0].basis.iter().map(|x| h.render(x)).collect();
        assert_eq!(names, ["x^1", "y^1"]);
        assert_eq!(h.render(&l.components[1].basis[0]), "z^1");
        let xy = l.brackets.iter().find(|br| br.left == (1, 0) && br.right == (1, 1)).unwrap();
        assert_eq!(xy.value, vec![b(1)]);
        assert_eq!(l.brackets.len(), 2);
    }

    #[test]
    fn example2_ring_away_from_two() {
        let e = PcGroup::builtin(&Builtin::Example2).unwrap();
        let pi: PrimeSet = "all\\{2}".parse().unwrap();
        let l = graded_ring(&e, &pi).unwrap();
        assert_eq!(l.to_string(), "degree 1: Z^2 x Z/2\ndegree 2: Z/2\n");
        assert!(l.warnings.is_empty());
        let l = graded_ring(&e, &PrimeSet::all()).unwrap();
        assert_eq!(l.to_string(), "degree 1: Z^2\n");
    }

    #[test]
    fn abelian_ring() {
        let a = PcGroup::builtin(&Builtin::Abelian(vec![0, 0])).unwrap();
        let l = graded_ring(&a, &PrimeSet::all()).unwrap();
        assert_eq!(l.to_string(), "degree 1: Z^2\n");
        assert!(l.brackets.is_empty());
    }

    #[test]
    fn power_maps() {
        let h = PcGroup::builtin(&Builtin::Heisenberg).unwrap();
        let l = graded_ring(&h, &PrimeSet::all()).unwrap();
        for m in [2, 3] {
            let phi = Homomorphism::parse(&h, &h, &format!("x->x^{m},y->y^{m}")).unwrap();
            let maps = induced_endomorphism(&h, &l, &phi).unwrap();
            assert_eq!(maps.matrices[0], vec![vec![b(m), b(0)], vec![b(0), b(m)]]);
            assert_eq!(maps.matrices[1], vec![vec![b(m * m)]]);
            assert!(maps.kernel_trivial);
            assert!(is_scalar_power_action(&maps, &b(m), &PrimeSet::all()).unwrap());
        }
        let phi = Homomorphism::parse(&h, &h, "x->1,y->y").unwrap();
        let maps = induced_endomorphism(&h, &l, &phi).unwrap();
        assert!(!maps.kernel_trivial);
        let t = PcGroup::builtin(&Builtin::Abelian(vec![0, 0])).unwrap();
        let lt = graded_ring(&t, &PrimeSet::all()).unwrap();
        let phi = Homomorphism::parse(&t, &t, "a1->a2,a2->a1").unwrap();
        assert!(induced_endomorphism(&t, &lt, &phi).unwrap().kernel_trivial);
    }

    #[test]
    fn non_preserving_endomorphism_is_rejected() {
        let a = PcGroup::builtin(&Builtin::Abelian(vec![0, 0])).unwrap();
        let fake = GradedLieRing {
            filtration: vec![Subgroup::whole(&a), induced_sequence(&a, &[a.generator(1)]).unwrap()],
            ..graded_ring(&a, &PrimeSet::all()).unwrap()
        };
        let phi = Homomorphism::parse(&a, &a, "a1->a2,a2->a1").unwrap();
        assert!(matches!(
            induced_endomorphism(&a, &fake, &phi),
            Err(Error::InvalidEndomorphism(_))
        ));
    }
}
