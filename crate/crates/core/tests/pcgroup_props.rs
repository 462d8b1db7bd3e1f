use nilkit::pcgroup::{Element, PcGroup};
use nilkit::presentation::Builtin;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Upper unitriangular 3×3 integer matrix stored as its (1,2), (2,3), (1,3) entries.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Uni(i64, i64, i64);

impl Uni {
    fn mul(self, o: Uni) -> Uni {
        Uni(self.0 + o.0, self.1 + o.1, self.2 + o.2 + self.0 * o.1)
    }
}

fn heisenberg() -> PcGroup {
    PcGroup::builtin(&Builtin::Heisenberg).unwrap()
}

fn exps(e: &Element) -> Vec<i64> {
    e.exponents().iter().map(|x| i64::try_from(x).unwrap()).collect()
}

#[test]
fn heisenberg_matches_matrix_oracle() {
    let g = heisenberg();
    let mats = [Uni(1, 0, 0), Uni(0, 1, 0), Uni(0, 0, 1)];
    let inv = |m: Uni| Uni(-m.0, -m.1, -m.2 + m.0 * m.1);
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..1000 {
        let len = rng.gen_range(0..=20);
        let mut m = Uni(0, 0, 0);
        let mut e = g.identity();
        for _ in 0..len {
            let k = rng.gen_range(0..3);
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            let gm = if sign == 1 { mats[k] } else { inv(mats[k]) };
            m = m.mul(gm);
            let ge = g.power(&g.generator(k), sign).unwrap();
            e = g.multiply(&e, &ge).unwrap();
        }
        // x^a y^b z^c = M(a, b, c + ab)
        let v = exps(&e);
        assert_eq!((v[0], v[1], v[2] + v[0] * v[1]), (m.0, m.1, m.2));
    }
}

fn random_element(g: &PcGroup, rng: &mut StdRng, bound: i64) -> Element {
    let v: Vec<i64> = (0..g.len()).map(|_| rng.gen_range(-bound..=bound)).collect();
    g.element_from_exponents(&v).unwrap()
}

fn all_builtins() -> Vec<PcGroup> {
    [
        Builtin::Heisenberg,
        Builtin::Example2,
        Builtin::FreeNilpotent { class: 2, rank: 2 },
        Builtin::FreeNilpotent { class: 2, rank: 3 },
        Builtin::FreeNilpotent { class: 3, rank: 2 },
        Builtin::FreeNilpotent { class: 3, rank: 3 },
        Builtin::Abelian(vec![0, 0, 5]),
    ]
    .iter()
    .map(|b| PcGroup::builtin(b).unwrap())
    .collect()
}

#[test]
fn associativity_sampling() {
    let mut rng = StdRng::seed_from_u64(11);
    for g in all_builtins() {
        for _ in 0..1000 {
            let a = random_element(&g, &mut rng, 6);
            let b = random_element(&g, &mut rng, 6);
            let c = random_element(&g, &mut rng, 6);
            let left = g.multiply(&g.multiply(&a, &b).unwrap(), &c).unwrap();
            let right = g.multiply(&a, &g.multiply(&b, &c).unwrap()).unwrap();
            assert_eq!(left, right, "{}", g.presentation().name());
        }
    }
}

#[test]
fn class_two_power_law() {
    let mut rng = StdRng::seed_from_u64(3);
    for b in [
        Builtin::Heisenberg,
        Builtin::Example2,
        Builtin::FreeNilpotent { class: 2, rank: 3 },
    ] {
        let g = PcGroup::builtin(&b).unwrap();
        for _ in 0..200 {
            let x = random_element(&g, &mut rng, 9);
            let y = random_element(&g, &mut rng, 9);
            let c = g.commutator(&y, &x).unwrap();
            for m in 1..=20i64 {
                let lhs = g.power(&g.multiply(&x, &y).unwrap(), m).unwrap();
                let rhs = g.multiply(
                    &g.multiply(&g.power(&x, m).unwrap(), &g.power(&y, m).unwrap()).unwrap(),
                    &g.power(&c, m * (m - 1) / 2).unwrap(),
                )
                .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn commuting_powers_force_commuting_elements() {
    for b in [
        Builtin::Heisenberg,
        Builtin::FreeNilpotent { class: 2, rank: 3 },
        Builtin::FreeNilpotent { class: 3, rank: 2 },
    ] {
        let g = PcGroup::builtin(&b).unwrap();
        let n = g.len();
        let small: Vec<Element> = (0..3i64.pow(n.min(5) as u32))
            .map(|mut code| {
                let v: Vec<i64> = (0..n)
                    .map(|i| {
                        if i >= 5 {
                            return 0;
                        }
                        let d = code % 3 - 1;
                        code /= 3;
                        d
                    })
                    .collect();
                g.element_from_exponents(&v).unwrap()
            })
            .collect();
        let mut hits = 0;
        for a in &small {
            for b in &small {
                let commute = g.commutator(a, b).unwrap().is_identity();
                for n_ in 1..=3i64 {
                    for m_ in 1..=3i64 {
                        let an = g.power(a, n_).unwrap();
                        let bm = g.power(b, m_).unwrap();
                        if g.commutator(&an, &bm).unwrap().is_identity() {
                            hits += 1;
                            assert!(commute, "{} {}", g.render(a), g.render(b));
                        }
                    }
                }
            }
        }
        assert!(hits > 0);
    }
}

#[test]
fn inverse_and_identity() {
    let mut rng = StdRng::seed_from_u64(5);
    for g in all_builtins() {
        for _ in 0..200 {
            let a = random_element(&g, &mut rng, 20);
            assert!(g.multiply(&a, &g.inverse(&a).unwrap()).unwrap().is_identity());
            assert_eq!(g.power(&a, -1).unwrap(), g.inverse(&a).unwrap());
            assert_eq!(g.multiply(&a, &g.identity()).unwrap(), a);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn power_is_additive(v in prop::collection::vec(-30i64..30, 5), m in -40i64..40, k in -40i64..40) {
        let g = PcGroup::builtin(&Builtin::FreeNilpotent { class: 3, rank: 2 }).unwrap();
        let a = g.element_from_exponents(&v).unwrap();
        let lhs = g.power(&a, m + k).unwrap();
        let rhs = g.multiply(&g.power(&a, m).unwrap(), &g.power(&a, k).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn collect_is_idempotent(v in prop::collection::vec(-30i64..30, 3)) {
        let g = PcGroup::builtin(&Builtin::Example2).unwrap();
        let a = g.element_from_exponents(&v).unwrap();
        let b = g.element_from_exponents(a.exponents()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn commutator_definition(u in prop::collection::vec(-9i64..9, 5), w in prop::collection::vec(-9i64..9, 5)) {
        let g = PcGroup::builtin(&Builtin::FreeNilpotent { class: 3, rank: 2 }).unwrap();
        let a = g.element_from_exponents(&u).unwrap();
        let b = g.element_from_exponents(&w).unwrap();
        let ai = g.inverse(&a).unwrap();
        let bi = g.inverse(&b).unwrap();
        let direct = [ai, bi, a.clone(), b.clone()]
            .iter()
            .fold(g.identity(), |acc, x| g.multiply(&acc, x).unwrap());
        prop_assert_eq!(g.commutator(&a, &b).unwrap(), direct);
    }
}
