//! Homomorphisms between pc groups given by generator images.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::pcgroup::{Element, Exps, PcGroup};
use crate::presentation::Word;

/// One defining relation evaluated under the substitution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    /// The relation as presented, e.g. `[b,a] = c^2`.
    pub relation: String,
    /// Normal form of the substituted left side.
    pub lhs: String,
    /// Normal form of the substituted right side.
    pub rhs: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DickReport {
    pub holds: bool,
    pub transcript: Vec<RelationCheck>,
}

fn eval(dst: &PcGroup, images: &[Exps], w: &Word) -> Exps {
    let mut acc = dst.zero();
    for (g, e) in w.syllables() {
        acc = dst.mul(&acc, &dst.pow(&images[*g], e));
    }
    acc
}

fn check_images(src: &PcGroup, dst: &PcGroup, images: &[Element]) -> Result<Vec<Exps>> {
    if images.len() != src.len() {
        return Err(Error::InvalidArgument(format!(
            "{} images for {} generators",
            images.len(),
            src.len()
        )));
    }
    images
        .iter()
        .map(|x| {
            if x.group_id() == dst.id() {
                Ok(x.exponents().to_vec())
            } else {
                Err(Error::GroupMismatch)
            }
        })
        .collect()
}

/// Evaluates every defining relation of `src` under `g_i ↦ images[i]`; the
/// assignment extends to a homomorphism iff all of them hold.
pub fn dick_check(src: &PcGroup, dst: &PcGroup, images: &[Element]) -> Result<DickReport> {
    let im = check_images(src, dst, images)?;
    let p = src.presentation();
    let names = p.names();
    let mut transcript = Vec::new();
    let mut push = |relation: String, l: Exps, r: Exps| {
        transcript.push(RelationCheck {
            relation,
            lhs: dst.render_exps(&l),
            rhs: dst.render_exps(&r),
            holds: l == r,
        });
    };
    for i in 0..src.len() {
        if let Some(e) = p.order(i) {
            let rhs = p.power_rhs(i);
            push(
                format!("{}^{} = {}", names[i], e, rhs.render(&names)),
                dst.pow(&im[i], e),
                eval(dst, &im, rhs),
            );
        }
    }
    for j in 0..src.len() {
        for i in 0..j {
            let id = Word::identity();
            let rhs = p.commutator_rhs(j, i).unwrap_or(&id);
            push(
                format!("[{},{}] = {}", names[j], names[i], rhs.render(&names)),
                dst.comm(&im[j], &im[i]),
                eval(dst, &im, rhs),
            );
        }
    }
    Ok(DickReport {
        holds: transcript.iter().all(|c| c.holds),
        transcript,
    })
}

/// A homomorphism `src → dst`, built only after its relations check out.
#[derive(Clone, Debug)]
pub struct Homomorphism {
    src: u64,
    dst: u64,
    images: Vec<Exps>,
}

impl Homomorphism {
    pub fn new(src: &PcGroup, dst: &PcGroup, images: &[Element]) -> Result<Self> {
        let report = dick_check(src, dst, images)?;
        if let Some(bad) = report.transcript.iter().find(|c| !c.holds) {
            return Err(Error::InvalidArgument(format!(
                "images violate {}: {} vs {}",
                bad.relation, bad.lhs, bad.rhs
            )));
        }
        Ok(Homomorphism {
            src: src.id(),
            dst: dst.id(),
            images: check_images(src, dst, images)?,
        })
    }

    /// Parses `x->x^2,y->y^2`. An unlisted generator defined by a relation
    /// `[g_j,g_i] = g_k^{±1}` maps to the matching commutator of images;
    /// otherwise it maps to the same-named generator of `dst`, or to 1.
    pub fn parse(src: &PcGroup, dst: &PcGroup, text: &str) -> Result<Self> {
        let mut images: Vec<Option<Exps>> = vec![None; src.len()];
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, img) = part
                .split_once("->")
                .ok_or_else(|| Error::InvalidArgument(format!("expected g->word, got {part:?}")))?;
            let i = src
                .presentation()
                .index_of(name.trim())
                .ok_or_else(|| Error::InvalidWord(format!("unknown generator {:?}", name.trim())))?;
            images[i] = Some(dst.parse_element(img.trim())?.into_exponents());
        }
        let p = src.presentation();
        let dst_names = dst.names();
        let mut done: Vec<Exps> = Vec::with_capacity(src.len());
        for (k, name) in src.names().into_iter().enumerate() {
            let im = match images[k].take() {
                Some(v) => v,
                None => {
                    let definition = p.nontrivial_commutators().find_map(|(&(j, i), w)| match w.syllables() {
                        [(g, e)] if *g == k && (e.is_one() || (-e).is_one()) => Some((j, i, e.clone())),
                        _ => None,
                    });
                    match definition {
                        Some((j, i, e)) => dst.pow(&dst.comm(&done[j], &done[i]), &e),
                        None => match dst_names.iter().position(|n| *n == name) {
                            Some(d) => dst.unit(d),
                            None => dst.zero(),
                        },
                    }
                }
            };
            done.push(im);
        }
        let images: Vec<Element> = done.into_iter().map(|v| dst.wrap(v)).collect();
        Homomorphism::new(src, dst, &images)
    }

    pub fn images(&self, dst: &PcGroup) -> Vec<Element> {
        self.images.iter().map(|v| dst.wrap(v.clone())).collect()
    }

    pub(crate) fn apply_exps(&self, dst: &PcGroup, x: &[BigInt]) -> Exps {
        let mut acc = dst.zero();
        for (i, e) in x.iter().enumerate() {
            if e.sign() != num_bigint::Sign::NoSign {
                acc = dst.mul(&acc, &dst.pow(&self.images[i], e));
            }
        }
        acc
    }

    pub fn apply(&self, src: &PcGroup, dst: &PcGroup, x: &Element) -> Result<Element> {
        if src.id() != self.src || dst.id() != self.dst || x.group_id() != self.src {
            return Err(Error::GroupMismatch);
        }
        Ok(dst.wrap(self.apply_exps(dst, x.exponents())))
    }

    /// Non-identity elements with every coordinate in `[-bound, bound]`
    /// mapped to the identity.
    pub fn kernel_search(&self, src: &PcGroup, dst: &PcGroup, bound: i64) -> Vec<Element> {
        let n = src.len();
        let mut out = Vec::new();
        let mut v = vec![-bound; n];
        loop {
            let x = src.element_from_exponents(&v);
            if let Ok(x) = x {
                // coordinates beyond a relative order are skipped, not wrapped
                if x.exponents().iter().zip(&v).all(|(a, b)| *a == BigInt::from(*b))
                    && !x.is_identity()
                    && PcGroup::is_trivial(&self.apply_exps(dst, x.exponents()))
                {
                    out.push(x);
                }
            }
            let mut k = 0;
            while k < n && v[k] == bound {
                v[k] = -bound;
                k += 1;
            }
            if k == n {
                break;
            }
            v[k] += 1;
        }
        out
    }
}
