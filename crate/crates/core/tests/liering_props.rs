use nilkit::arith::PrimeSet;
use nilkit::liering::{graded_ring, induced_endomorphism, is_scalar_power_action, GradedLieRing};
use nilkit::morphism::Homomorphism;
use nilkit::pcgroup::PcGroup;
use nilkit::presentation::Builtin;
use num_bigint::BigInt;
use num_traits::Zero;

fn unit(l: &GradedLieRing, deg: usize, k: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); l.component(deg).unwrap().dimension()];
    v[k] = 1.into();
    v
}

fn add(a: Option<Vec<BigInt>>, b: Option<Vec<BigInt>>) -> Option<Vec<BigInt>> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.iter().zip(&b).map(|(x, y)| x + y).collect()),
        (a, None) => a,
        (None, b) => b,
    }
}

fn rings() -> Vec<(PcGroup, GradedLieRing)> {
    [
        Builtin::Heisenberg,
        Builtin::FreeNilpotent { class: 2, rank: 3 },
        Builtin::FreeNilpotent { class: 3, rank: 2 },
        Builtin::FreeNilpotent { class: 3, rank: 3 },
    ]
    .iter()
    .map(|b| {
        let g = PcGroup::builtin(b).unwrap();
        let l = graded_ring(&g, &PrimeSet::all()).unwrap();
        (g, l)
    })
    .collect()
}

#[test]
fn antisymmetry_and_jacobi() {
    for (_, l) in rings() {
        let basis: Vec<(usize, usize)> = l
            .components
            .iter()
            .flat_map(|c| (0..c.dimension()).map(move |k| (c.degree, k)))
            .collect();
        for &(i, a) in &basis {
            for &(j, b) in &basis {
                let ab = l.bracket((i, &unit(&l, i, a)), (j, &unit(&l, j, b)));
                let ba = l.bracket((j, &unit(&l, j, b)), (i, &unit(&l, i, a)));
                if let (Some(ab), Some(ba)) = (&ab, &ba) {
                    assert!(ab.iter().zip(ba).all(|(x, y)| (x + y).is_zero()));
                }
                for &(k, c) in &basis {
                    let br = |(d1, x1): (usize, usize), (d2, x2): (usize, usize), (d3, x3): (usize, usize)| {
                        let inner = l.bracket((d1, &unit(&l, d1, x1)), (d2, &unit(&l, d2, x2)))?;
                        l.bracket((d1 + d2, &inner), (d3, &unit(&l, d3, x3)))
                    };
                    let s = add(
                        add(br((i, a), (j, b), (k, c)), br((j, b), (k, c), (i, a))),
                        br((k, c), (i, a), (j, b)),
                    );
                    if let Some(s) = s {
                        assert!(s.iter().all(Zero::is_zero), "Jacobi fails at {:?}", (i, a, j, b, k, c));
                    }
                }
            }
        }
    }
}

#[test]
fn power_maps_act_by_scalars() {
    for (g, l) in rings() {
        let gens: Vec<String> = g
            .names()
            .into_iter()
            .zip(g.presentation().generators())
            .filter(|(_, gen)| gen.weight == 1)
            .map(|(n, _)| n)
            .collect();
        for m in [2, 3, 5] {
            let text: Vec<String> = gens.iter().map(|n| format!("{n}->{n}^{m}")).collect();
            let phi = Homomorphism::parse(&g, &g, &text.join(",")).unwrap();
            let maps = induced_endomorphism(&g, &l, &phi).unwrap();
            assert!(is_scalar_power_action(&maps, &BigInt::from(m), &PrimeSet::all()).unwrap());
            assert!(maps.kernel_trivial);
            if g.len() <= 6 {
                assert!(phi.kernel_search(&g, &g, 2).is_empty());
            }
        }
    }
}
