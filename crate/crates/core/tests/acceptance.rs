//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::time::{Duration, Instant};

use nilkit::arith::{is_pi_number, PiRational, PrimeSet};
use nilkit::completion::{lemma_li_bound, nth_root, random_lattice_element, Completion};
use nilkit::geomequiv::{a2_verify, abelian_structure, is_pi_complete_finite};
use nilkit::isolator::{pi_isolator, pi_isolator_report, pi_torsion_subgroup};
use nilkit::liering::{graded_ring, induced_endomorphism};
use nilkit::morphism::Homomorphism;
use nilkit::pcgroup::{Element, PcGroup};
use nilkit::presentation::{Builtin, Word};
use nilkit::subgroups::{derived_subgroup, index, induced_sequence, lemma_rob_check, membership, power_subgroup, Index, Subgroup};
use nilkit::zariski::{closure_membership, enumerate_homs, FiniteGroup, FreeWord};
use nilkit::Error;
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| format!("{e:?}"))
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn small(x: &BigInt) -> i64 {
    i64::try_from(x).expect("exponent fits in i64")
}

fn heisenberg() -> PcGroup {
    PcGroup::builtin(&Builtin::Heisenberg).unwrap()
}

fn elem(g: &PcGroup, text: &str) -> Element {
    g.parse_element(text).unwrap()
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure!(t < limit, "took {t:?}, limit {limit:?}");
    Ok(t)
}

// Unitriangular 3x3 integer matrices as (p, q, r) = [[1,p,r],[0,1,q],[0,0,1]].
type Mat = (i64, i64, i64);

fn mat_mul(a: Mat, b: Mat) -> Mat {
    (a.0 + b.0, a.1 + b.1, a.2 + b.2 + a.0 * b.1)
}

fn mat_inv(a: Mat) -> Mat {
    (-a.0, -a.1, a.0 * a.1 - a.2)
}

fn mat_pow(a: Mat, n: i64) -> Mat {
    let base = if n < 0 { mat_inv(a) } else { a };
    (0..n.abs()).fold((0, 0, 0), |acc, _| mat_mul(acc, base))
}

/// Normal form exponents read off a matrix: x^a y^b z^c = (a, b, c + ab).
fn mat_to_nf(m: Mat) -> [i64; 3] {
    [m.0, m.1, m.2 - m.0 * m.1]
}

fn nf_to_mat(e: &[BigInt]) -> Mat {
    let (a, b, c) = (small(&e[0]), small(&e[1]), small(&e[2]));
    (a, b, c + a * b)
}

fn criterion_1() -> Outcome {
    let g = heisenberg();
    let gens = [(1, 0, 0), (0, 1, 0), (0, 0, 1)];
    let mut rng = StdRng::seed_from_u64(1);
    let words: Vec<Vec<(usize, i64)>> = (0..1000)
        .map(|_| {
            let len = rng.gen_range(0..=20);
            (0..len)
                .map(|_| (rng.gen_range(0..3), [-3, -2, -1, 1, 2, 3][rng.gen_range(0..6)]))
                .collect()
        })
        .collect();
    let start = Instant::now();
    for w in &words {
        let word = Word::new(w.iter().map(|&(i, e)| (i, big(e))));
        let nf = ok(g.collect(&word))?;
        let m = w.iter().fold((0, 0, 0), |acc, &(i, e)| mat_mul(acc, mat_pow(gens[i], e)));
        let got: Vec<i64> = nf.exponents().iter().map(small).collect();
        ensure!(got == mat_to_nf(m), "word {:?}: collected {:?}, matrix {:?}", w, got, mat_to_nf(m));
    }
    let t = within(start, Duration::from_secs(1))?;
    Ok(format!("1000 words agree with the matrix oracle in {t:.2?}"))
}

fn random_element(g: &PcGroup, rng: &mut StdRng, bound: i64) -> Element {
    let v: Vec<i64> = (0..g.len()).map(|_| rng.gen_range(-bound..=bound)).collect();
    g.element_from_exponents(&v).unwrap()
}

fn criterion_2() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2);
    let mut cases = 0;
    for rank in [2, 3] {
        let g = PcGroup::builtin(&Builtin::FreeNilpotent { class: 2, rank }).unwrap();
        for _ in 0..500 {
            let a = random_element(&g, &mut rng, 9);
            let b = random_element(&g, &mut rng, 9);
            let m: i64 = rng.gen_range(0..=20);
            let lhs = ok(g.power(&ok(g.multiply(&a, &b))?, m))?;
            let rhs = [
                ok(g.power(&a, m))?,
                ok(g.power(&b, m))?,
                ok(g.power(&ok(g.commutator(&b, &a))?, m * (m - 1) / 2))?,
            ]
            .iter()
            .try_fold(g.identity(), |acc, x| g.multiply(&acc, x));
            let rhs = ok(rhs)?;
            ensure!(lhs == rhs, "rank {rank}, m={m}: {} vs {}", g.render(&lhs), g.render(&rhs));
            cases += 1;
        }
    }
    Ok(format!("{cases} cases of (ab)^m = a^m b^m [b,a]^(m(m-1)/2)"))
}

/// The unique solution of X^n = h over unitriangular integer matrices, if any:
/// X = (p, q, r) has X^n = (np, nq, nr + n(n-1)/2 pq).
fn matrix_root(h: Mat, n: i64) -> Option<Mat> {
    if h.0 % n != 0 || h.1 % n != 0 {
        return None;
    }
    let (p, q) = (h.0 / n, h.1 / n);
    let rest = h.2 - n * (n - 1) / 2 * p * q;
    (rest % n == 0).then_some((p, q, rest / n))
}

fn criterion_3() -> Outcome {
    let g = heisenberg();
    let mut rng = StdRng::seed_from_u64(3);
    let start = Instant::now();
    let mut roots = 0;
    for n in [2i64, 3, 4] {
        let nk = n * n;
        for _ in 0..200 {
            let factors = rng.gen_range(1..=3);
            let mut h = g.identity();
            for _ in 0..factors {
                let y = random_element(&g, &mut rng, 4);
                h = ok(g.multiply(&h, &ok(g.power(&y, nk))?))?;
            }
            let root = ok(nth_root(&g, &h, &big(n)))?.ok_or_else(|| format!("no {n}-th root of {}", g.render(&h)))?;
            ensure!(ok(g.power(&root, n))? == h, "root^{n} != h for {}", g.render(&h));
            let unique = matrix_root(nf_to_mat(h.exponents()), n).ok_or("matrix oracle finds no root")?;
            ensure!(
                nf_to_mat(root.exponents()) == unique,
                "root {} differs from the unique matrix root {:?}",
                g.render(&root),
                unique
            );
            roots += 1;
        }
    }
    let z = elem(&g, "z");
    ensure!(ok(nth_root(&g, &z, &big(2)))?.is_none(), "z reported a square root");
    ensure!(matrix_root((0, 0, 1), 2).is_none(), "matrix oracle disagrees on z");
    let t = within(start, Duration::from_secs(5))?;
    Ok(format!("{roots} roots exist and match the unique matrix solution; z has no square root; {t:.2?}"))
}

/// `|H/H^m|` and whether z lies in `H^m`, computed in the finite quotient
/// by ⟨x^N, y^N, z^N⟩ with N = m², which lies inside H^m. That quotient is
/// the Heisenberg group over Z/N.
fn heisenberg_power_quotient(m: i64) -> (u64, bool) {
    let n = m * m;
    let mul = |a: Mat, b: Mat| -> Mat { ((a.0 + b.0) % n, (a.1 + b.1) % n, (a.2 + b.2 + a.0 * b.1) % n) };
    let all: Vec<Mat> = (0..n).flat_map(|p| (0..n).flat_map(move |q| (0..n).map(move |r| (p, q, r)))).collect();
    let powers: HashSet<Mat> = all
        .iter()
        .map(|&x| (0..m).fold((0, 0, 0), |acc, _| mul(acc, x)))
        .collect();
    let mut seen: HashSet<Mat> = HashSet::from([(0, 0, 0)]);
    let mut queue = VecDeque::from([(0, 0, 0)]);
    while let Some(x) = queue.pop_front() {
        for &p in &powers {
            let y = mul(x, p);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    ((all.len() / seen.len()) as u64, seen.contains(&(0, 0, 1)))
}

fn criterion_4() -> Outcome {
    let g = heisenberg();
    let z = elem(&g, "z");
    let mut out = Vec::new();
    for (m, expected, z_in) in [(2, 4u64, true), (3, 27, false)] {
        let hm = ok(power_subgroup(&g, &big(m)))?;
        let idx = ok(index(&g, &hm))?;
        let (oracle_idx, oracle_z) = heisenberg_power_quotient(m);
        ensure!(idx == Index::Finite(BigInt::from(expected)), "|H:H^{m}| = {idx:?}, expected {expected}");
        ensure!(oracle_idx == expected, "oracle index {oracle_idx} for m={m}");
        let member = ok(membership(&g, &z, &hm))?.is_some();
        ensure!(member == z_in && oracle_z == z_in, "z in H^{m}: library {member}, oracle {oracle_z}");
        out.push(format!("|H:H^{m}| = {expected}, z {} H^{m}", if z_in { "∈" } else { "∉" }));
    }
    Ok(out.join("; ") + " (matches the finite-quotient oracle)")
}

fn criterion_5() -> Outcome {
    let g = heisenberg();
    let mut rng = StdRng::seed_from_u64(5);
    let mut out = Vec::new();
    for (m, pi) in [(2i64, "{2}"), (3, "{3}"), (6, "{2,3}")] {
        let pi: PrimeSet = pi.parse().unwrap();
        let gens: Vec<Element> = ["x", "y", "z"].iter().map(|s| ok(g.power(&elem(&g, s), m))).collect::<Result<_, _>>()?;
        let h = ok(induced_sequence(&g, &gens))?;
        let samples: Vec<Element> = (0..50).map(|_| random_element(&g, &mut rng, 20)).collect();
        let report = ok(lemma_rob_check(&g, &h, &pi, &samples))?;
        // H = {x^{ma} y^{mb} z^{mc}} since [x^m, y^m] = z^{m²}
        ensure!(report.index == big(m * m * m), "index {} for m={m}", report.index);
        ensure!(report.index_is_pi_number, "index {} not a π-number", report.index);
        for (x, r) in &report.samples {
            ensure!(ok(is_pi_number(r.clone(), &pi))?, "power {r} is not a π-number");
            let xr = ok(g.power(x, r.clone()))?;
            ensure!(ok(h.contains(&g, &xr))?, "{}^{r} not in H", g.render(x));
        }
        out.push(format!("m={m}: index {}", report.index));
    }
    Ok(out.join(", ") + "; 150 sampled π-powers land in H")
}

fn criterion_6() -> Outcome {
    let g = heisenberg();
    let all = PrimeSet::all();
    let iso = ok(pi_isolator(&g, &derived_subgroup(&g), &all))?;
    ensure!(iso == ok(induced_sequence(&g, &[elem(&g, "z")]))?, "I(γ₂) = {}", iso.render(&g));

    let e = PcGroup::builtin(&Builtin::Example2).unwrap();
    let odd = PrimeSet::all_except([2]).unwrap();
    let t = ok(pi_torsion_subgroup(&e, &odd))?;
    ensure!(t.is_trivial(), "π-torsion of Example-2 is {}", t.render(&e));
    let c = elem(&e, "c");
    let c2: Subgroup = ok(induced_sequence(&e, &[ok(e.power(&c, 2))?]))?;
    let cc = ok(induced_sequence(&e, &[c]))?;
    let report = ok(pi_isolator_report(&e, &c2, &odd))?;
    ensure!(report.isolator == c2, "I_π(⟨c²⟩) = {}", report.isolator.render(&e));
    ensure!(ok(pi_isolator(&e, &c2, &all))? == cc, "all-primes isolator of ⟨c²⟩ is not ⟨c⟩");
    let full = report.full_isolator.as_ref().ok_or("no all-primes comparison in the report")?;
    ensure!(*full == cc, "reported all-primes isolator {}", full.render(&e));
    println!(
        "    note: I_π(G′) = {} for π = all\\{{2}}, while the claimed value ⟨c⟩ = {} only arises for π = all",
        report.isolator.render(&e),
        full.render(&e)
    );
    Ok("I(γ₂) = ⟨z⟩; Example-2 π-torsion trivial; I_π(⟨c²⟩) = ⟨c²⟩, all primes give ⟨c⟩".into())
}

fn criterion_7() -> Outcome {
    let mut out = Vec::new();
    for (rank, bound) in [(2u32, 3i64), (3, 2)] {
        let g = PcGroup::builtin(&Builtin::FreeNilpotent { class: 2, rank }).unwrap();
        let ring = ok(graded_ring(&g, &PrimeSet::all()))?;
        for m in [2i64, 3, 5] {
            let spec: Vec<String> = (1..=rank).map(|i| format!("x{i}->x{i}^{m}")).collect();
            let phi = ok(Homomorphism::parse(&g, &g, &spec.join(",")))?;
            let maps = ok(induced_endomorphism(&g, &ring, &phi))?;
            for (d, mat) in maps.matrices.iter().enumerate() {
                let s = big(m).pow(d as u32 + 1);
                for (i, row) in mat.iter().enumerate() {
                    for (j, v) in row.iter().enumerate() {
                        let want = if i == j { s.clone() } else { big(0) };
                        ensure!(*v == want, "rank {rank}, m={m}, degree {}: entry ({i},{j}) = {v}", d + 1);
                    }
                }
            }
            ensure!(maps.kernel_trivial, "rank {rank}, m={m}: kernel not trivial");
            let kernel = phi.kernel_search(&g, &g, bound);
            ensure!(kernel.is_empty(), "rank {rank}, m={m}: {} in the kernel", g.render(&kernel[0]));
        }
        out.push(format!("FN(2,{rank}) box ±{bound}"));
    }
    Ok(format!("degree-i maps are m^i·I, injective; kernel search over {}", out.join(", ")))
}

fn criterion_8() -> Outcome {
    let g = PcGroup::builtin(&Builtin::Example2).unwrap();
    let pi = PrimeSet::all_except([2]).unwrap();
    let c = elem(&g, "c");
    let central = ok(induced_sequence(&g, &[c.clone()]))?;
    let w = ok(a2_verify(&g, &pi, &big(3), &central))?;
    for line in ["[a^3,b^3] = c^18 = φ(c)^2 ok", "φ(c)^4 = c^36 = 1 ok"] {
        ensure!(w.checks.iter().any(|l| l == line), "missing check {line:?} in {:?}", w.checks);
    }
    ensure!(w.verified && w.injective, "witness verified={}, injective={}", w.verified, w.injective);
    let c18 = ok(g.power(&c, 18))?;
    let phi_c = &w.images[2];
    ensure!(ok(g.commutator(&w.images[1], &w.images[0]))? == ok(g.power(&c, -18))?, "[φb,φa] != c^-18");
    ensure!(ok(g.power(phi_c, 2))? == c18, "φ(c)^2 != c^18");
    ensure!(ok(g.power(&c, 36))?.is_identity(), "c^36 != 1");

    let c2 = ok(induced_sequence(&g, &[ok(g.power(&c, 2))?]))?;
    match a2_verify(&g, &pi, &big(3), &c2) {
        Err(Error::HypothesisFailed { message, witness }) => {
            ensure!(message.contains("torsion"), "unexpected failure message {message:?}");
            let wit = witness.ok_or("no torsion witness")?;
            Ok(format!("c^18 = φ(c)^2, c^36 = 1, injective; ⟨c²⟩ rejected: {message} (witness {wit})"))
        }
        other => Err(format!("⟨c²⟩ was not rejected with a torsion certificate: {other:?}")),
    }
}

fn criterion_9() -> Outcome {
    let g = heisenberg();
    let central = ok(induced_sequence(&g, &[elem(&g, "z")]))?;
    let mut out = Vec::new();
    for m in [2i64, 3] {
        let w = ok(a2_verify(&g, &PrimeSet::all(), &big(m), &central))?;
        ensure!(w.verified && w.injective, "m={m}: verified={}, injective={}", w.verified, w.injective);
        ok(Homomorphism::new(&g, &g, &w.images))?;
        let gm = ok(power_subgroup(&g, &big(m)))?;
        for im in &w.images {
            ensure!(ok(gm.contains(&g, im))?, "m={m}: image {} outside G^m", g.render(im));
        }
        let imgs: Vec<String> = w.images.iter().map(|x| g.render(x)).collect();
        out.push(format!("m={m}: φ = ({})", imgs.join(", ")));
    }
    Ok(out.join("; "))
}

// Independent oracle for the Zariski closure: groups as explicit elements,
// words as signed letters.

struct OracleGroup {
    name: &'static str,
    elems: Vec<Vec<u8>>,
    mul: fn(&[u8], &[u8]) -> Vec<u8>,
}

impl OracleGroup {
    fn cyclic(name: &'static str, n: u8) -> Self {
        let mul: fn(&[u8], &[u8]) -> Vec<u8> = match n {
            2 => |a, b| vec![(a[0] + b[0]) % 2],
            3 => |a, b| vec![(a[0] + b[0]) % 3],
            4 => |a, b| vec![(a[0] + b[0]) % 4],
            _ => unreachable!(),
        };
        OracleGroup {
            name,
            elems: (0..n).map(|i| vec![i]).collect(),
            mul,
        }
    }

    fn klein() -> Self {
        OracleGroup {
            name: "Z/2xZ/2",
            elems: vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]],
            mul: |a, b| vec![a[0] ^ b[0], a[1] ^ b[1]],
        }
    }

    fn s3() -> Self {
        let mut elems = Vec::new();
        for a in 0..3u8 {
            for b in 0..3u8 {
                for c in 0..3u8 {
                    if a != b && b != c && a != c {
                        elems.push(vec![a, b, c]);
                    }
                }
            }
        }
        OracleGroup {
            name: "S3",
            elems,
            // (ab)(i) = b(a(i)): apply a first
            mul: |a, b| (0..3).map(|i| b[a[i] as usize]).collect(),
        }
    }

    fn table(&self) -> (Vec<Vec<usize>>, Vec<usize>, usize) {
        let pos = |v: &[u8]| self.elems.iter().position(|e| e == v).unwrap();
        let t: Vec<Vec<usize>> = self
            .elems
            .iter()
            .map(|a| self.elems.iter().map(|b| pos(&(self.mul)(a, b))).collect())
            .collect();
        let e = (0..t.len()).find(|&i| (0..t.len()).all(|j| t[i][j] == j)).unwrap();
        let inv = (0..t.len()).map(|i| (0..t.len()).find(|&j| t[i][j] == e).unwrap()).collect();
        (t, inv, e)
    }
}

/// Reduced words of length ≤ `max` in x = ±1, y = ±2.
fn reduced_words(max: usize) -> Vec<Vec<i8>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..max {
        let mut next = Vec::new();
        for w in &frontier {
            for l in [1i8, -1, 2, -2] {
                if w.last() != Some(&-l) {
                    let mut v: Vec<i8> = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn to_free(w: &[i8]) -> FreeWord {
    FreeWord(Word::new(w.iter().map(|&l| ((l.unsigned_abs() - 1) as usize, big(l.signum() as i64)))))
}

/// An isomorphism from the oracle's table to `lib`, by backtracking.
fn isomorphism(t: &[Vec<usize>], lib: &FiniteGroup) -> Option<Vec<usize>> {
    fn go(t: &[Vec<usize>], lib: &FiniteGroup, f: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let k = f.len();
        if k == t.len() {
            return true;
        }
        for c in 0..t.len() {
            if used[c] {
                continue;
            }
            f.push(c);
            let fine = (0..=k).all(|i| {
                [(i, k), (k, i)].iter().all(|&(a, b)| {
                    let p = t[a][b];
                    p > k || lib.mul(f[a], f[b]) == f[p]
                })
            });
            used[c] = true;
            if fine && go(t, lib, f, used) {
                return true;
            }
            used[c] = false;
            f.pop();
        }
        false
    }
    let mut f = Vec::new();
    go(t, lib, &mut f, &mut vec![false; t.len()]).then_some(f)
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let words = reduced_words(6);
    let frees: Vec<FreeWord> = words.iter().map(|w| to_free(w)).collect();
    let groups = [
        (OracleGroup::cyclic("Z/2", 2), "Z/2"),
        (OracleGroup::cyclic("Z/3", 3), "Z/3"),
        (OracleGroup::cyclic("Z/4", 4), "Z/4"),
        (OracleGroup::klein(), "Z/2xZ/2"),
        (OracleGroup::s3(), "S3"),
    ];
    let mut rng = StdRng::seed_from_u64(10);
    let mut summary = Vec::new();
    let (mut evaluations, mut class_calls, mut literal_calls) = (0u64, 0u64, 0u64);
    for (og, lib_name) in &groups {
        let lib = ok(FiniteGroup::builtin(lib_name))?;
        let (t, inv, e) = og.table();
        let n = t.len();
        let f = isomorphism(&t, &lib).ok_or_else(|| format!("{} is not isomorphic to {lib_name}", og.name))?;
        let homs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
        ensure!(ok(enumerate_homs(2, &lib))?.len() == homs.len(), "{}: hom counts differ", og.name);
        let eval = |w: &[i8], h: (usize, usize)| -> usize {
            w.iter().fold(e, |acc, &l| {
                let g = if l.abs() == 1 { h.0 } else { h.1 };
                t[acc][if l > 0 { g } else { inv[g] }]
            })
        };
        // kernel masks, and library evaluation checked against the oracle
        let mut masks = Vec::with_capacity(words.len());
        for (w, fw) in words.iter().zip(&frees) {
            let mut mask = 0u64;
            for (k, &h) in homs.iter().enumerate() {
                let v = eval(w, h);
                ensure!(fw.evaluate(&lib, &[f[h.0], f[h.1]]) == f[v], "{}: evaluation of {w:?} differs", og.name);
                evaluations += 1;
                if v == e {
                    mask |= 1 << k;
                }
            }
            masks.push(mask);
        }
        let full = if homs.len() == 64 { u64::MAX } else { (1u64 << homs.len()) - 1 };
        let answer = |sys: u64, w: u64| sys & !w == 0;

        // One library call per class of (system, word); membership depends
        // only on the kernel masks, and evaluation was checked above.
        let mut rep: BTreeMap<u64, usize> = BTreeMap::new();
        for (i, &m) in masks.iter().enumerate() {
            rep.entry(m).or_insert(i);
        }
        let mut systems: HashMap<u64, Vec<usize>> = HashMap::from([(full, vec![])]);
        for (&m, &i) in &rep {
            systems.entry(m).or_insert_with(|| vec![i]);
        }
        for (&a, &i) in &rep {
            for (&b, &j) in &rep {
                systems.entry(a & b).or_insert_with(|| vec![i, j]);
            }
        }
        for (&sys, ts) in &systems {
            let system: Vec<FreeWord> = ts.iter().map(|&i| frees[i].clone()).collect();
            for (&wm, &wi) in &rep {
                let got = ok(closure_membership(&system, &frees[wi], &lib))?;
                ensure!(got == answer(sys, wm), "{}: T={ts:?}, w={:?}: library {got}", og.name, words[wi]);
                class_calls += 1;
            }
        }
        // and a spread of literal tuples straight from the full domain
        for _ in 0..40_000 {
            let size = rng.gen_range(0..=2);
            let ts: Vec<usize> = (0..size).map(|_| rng.gen_range(0..words.len())).collect();
            let wi = rng.gen_range(0..words.len());
            let system: Vec<FreeWord> = ts.iter().map(|&i| frees[i].clone()).collect();
            let sys = ts.iter().fold(full, |acc, &i| acc & masks[i]);
            let got = ok(closure_membership(&system, &frees[wi], &lib))?;
            ensure!(got == answer(sys, masks[wi]), "{}: T={ts:?}, w={:?}: library {got}", og.name, words[wi]);
            literal_calls += 1;
        }
        summary.push(format!("{} ({} classes)", og.name, rep.len()));
    }
    let t = within(start, Duration::from_secs(30))?;
    Ok(format!(
        "{} words; {evaluations} evaluations, {class_calls} class calls, {literal_calls} literal calls agree over {}; {t:.2?}",
        words.len(),
        summary.join(", ")
    ))
}

fn criterion_11() -> Outcome {
    let pi: PrimeSet = "{2,3}".parse().unwrap();
    let g = heisenberg();
    let c = ok(Completion::new(&g, pi.clone()))?;
    let mut rng = StdRng::seed_from_u64(11);
    let dens = [1i64, 2, 3, 4, 6, 8, 9, 12];
    let rat = |rng: &mut StdRng, span: i64| PiRational::new(rng.gen_range(-span..=span), dens[rng.gen_range(0..dens.len())], &pi).unwrap();
    for _ in 0..500 {
        let coords: Vec<PiRational> = (0..3).map(|_| rat(&mut rng, 20)).collect();
        let a = ok(c.element(coords))?;
        let (r, s) = (rat(&mut rng, 9), rat(&mut rng, 9));
        let lhs = ok(c.rpow(&ok(c.rpow(&a, &r))?, &s))?;
        ensure!(lhs == ok(c.rpow(&a, &(&r * &s)))?, "(a^r)^s != a^(rs) for a = {}", c.render(&a));
        // integer exponents against repeated multiplication
        let k: i64 = rng.gen_range(-6..=6);
        let base = if k < 0 { ok(c.rinv(&a))? } else { a.clone() };
        let mut prod = c.identity();
        for _ in 0..k.abs() {
            prod = ok(c.rmul(&prod, &base))?;
        }
        ensure!(ok(c.rpow(&a, &PiRational::from(k)))? == prod, "a^{k} differs from the product");
    }

    let gens = vec![ok(c.parse("x^(1/2)"))?, ok(c.parse("y^(1/3)"))?];
    let li = ok(lemma_li_bound(&c, &gens))?;
    ensure!(li.r == big(12), "li bound {}", li.r);
    let rejected: Vec<i64> = li.rejected.iter().map(|(r, _)| small(r)).collect();
    ensure!(rejected == [1, 2, 3, 4, 6, 8, 9], "rejected {rejected:?}");
    let h = ok(c.rmul(&gens[0], &gens[1]))?;
    let h6 = ok(c.rpow(&h, &PiRational::from(6)))?;
    ensure!(!h6.is_integral(), "(x^(1/2) y^(1/3))^6 = {} is integral", c.render(&h6));
    for _ in 0..200 {
        let x = ok(random_lattice_element(&c, &gens, &mut rng))?;
        let x12 = ok(c.rpow(&x, &PiRational::from(12)))?;
        ensure!(x12.is_integral(), "{}^12 = {} not in G", c.render(&x), c.render(&x12));
    }
    Ok(format!(
        "1000 exponent-law checks; r = 12, rejected {rejected:?}, (x^(1/2) y^(1/3))^6 = {}",
        c.render(&h6)
    ))
}

fn criterion_12() -> Outcome {
    let pi: PrimeSet = "{2,3}".parse().unwrap();
    let s = ok(abelian_structure(&vec![vec![big(0), big(5)]], 2, &pi))?;
    ensure!(s.rank == 1 && s.factors == [big(5)], "structure {s}");
    ensure!(s.completion == "(Q_π⁺)¹ × Z/5", "descriptor {}", s.completion);
    ensure!(s.pi_valid, "Z/5 flagged as π-torsion");
    let z5 = ok(is_pi_complete_finite(&ok(FiniteGroup::cyclic(5))?, &pi))?;
    let z3 = ok(is_pi_complete_finite(&ok(FiniteGroup::cyclic(3))?, &"{3}".parse().unwrap()))?;
    ensure!(z5 && !z3, "Z/5 complete: {z5}, Z/3 complete: {z3}");
    Ok(format!("{}; Z/5 π-complete, Z/3 not {{3}}-complete", s.completion))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("collection vs matrix oracle", criterion_1),
        ("class-2 power law", criterion_2),
        ("root extraction", criterion_3),
        ("verbal subgroup indices", criterion_4),
        ("π-power index", criterion_5),
        ("isolators", criterion_6),
        ("power endomorphisms on the Lie ring", criterion_7),
        ("embedding for Example-2", criterion_8),
        ("embedding for Heisenberg", criterion_9),
        ("Zariski closure oracle", criterion_10),
        ("completion laws and Li bound", criterion_11),
        ("abelian structure", criterion_12),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
