use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use nilkit::arith::PrimeSet;
use nilkit::completion::{lemma_li_bound, nth_root, Completion};
use nilkit::geomequiv::{
    a2_verify, abelian_relations, abelian_structure, criterion_run, is_pi_complete_finite, power_endo_verify,
    EmbeddingWitness,
};
use nilkit::isolator::{pi_isolator_report, torsion_report};
use nilkit::lattice::Matrix;
use nilkit::liering::{graded_ring, induced_endomorphism};
use nilkit::morphism::Homomorphism;
use nilkit::pcgroup::{Element, PcGroup};
use nilkit::presentation::Builtin;
use nilkit::subgroups::{
    derived_subgroup, index, induced_sequence, lower_central_series, membership, power_subgroup, Subgroup,
};
use nilkit::zariski::{closure_membership, equivalence_probe, Alphabet, FiniteGroup};
use nilkit::Error;

#[derive(Parser)]
#[command(name = "nilkit", version, about = "Exact computation in f.g. nilpotent groups")]
struct Cli {
    /// Emit one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GroupArg {
    /// Presentation file, or heisenberg | example2 | free_nilpotent:C,R | abelian:N,...
    #[arg(long)]
    group: String,
}

#[derive(Args)]
struct PiArg {
    /// Prime set: all, all\{2}, {2,3}.
    #[arg(long, default_value = "all")]
    pi: String,
}

#[derive(Args)]
struct FiniteArg {
    /// Builtin finite group: Z/n, S3, D8, Q8 and products like Z/2xZ/2.
    #[arg(long, conflicts_with = "table")]
    finite: Option<String>,
    /// Cayley table file.
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Normal form of a word.
    Nf {
        #[command(flatten)]
        g: GroupArg,
        word: String,
    },
    Mul {
        #[command(flatten)]
        g: GroupArg,
        a: String,
        b: String,
    },
    Pow {
        #[command(flatten)]
        g: GroupArg,
        a: String,
        #[arg(allow_hyphen_values = true)]
        k: String,
    },
    /// Commutator [a,b] = a^-1 b^-1 a b.
    Comm {
        #[command(flatten)]
        g: GroupArg,
        a: String,
        b: String,
    },
    /// Lower central series.
    Lcs {
        #[command(flatten)]
        g: GroupArg,
    },
    /// Membership with a witness word.
    Member {
        #[command(flatten)]
        g: GroupArg,
        /// Comma-separated generators, or `derived`.
        #[arg(long)]
        subgroup: String,
        word: String,
    },
    Index {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        subgroup: String,
    },
    /// The verbal subgroup G^m.
    PowerSubgroup {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        m: String,
    },
    /// π-isolator of a normal subgroup.
    Isolator {
        #[command(flatten)]
        g: GroupArg,
        #[command(flatten)]
        pi: PiArg,
        #[arg(long)]
        subgroup: String,
        /// Expected isolator generators; a mismatch exits with 1.
        #[arg(long)]
        expect: Option<String>,
    },
    Torsion {
        #[command(flatten)]
        g: GroupArg,
        #[command(flatten)]
        pi: PiArg,
    },
    /// n-th root of an element.
    Root {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long)]
        n: String,
        word: String,
    },
    /// Least π-number r with H^r ≤ G for H in the π-completion.
    LiBound {
        #[command(flatten)]
        g: GroupArg,
        #[command(flatten)]
        pi: PiArg,
        /// Comma-separated rational words such as x^(1/2),y^(1/3).
        #[arg(long)]
        gens: String,
    },
    /// Graded Lie ring of the isolator filtration.
    Liering {
        #[command(flatten)]
        g: GroupArg,
        #[command(flatten)]
        pi: PiArg,
        /// Endomorphism such as x->x^2,y->y^2.
        #[arg(long)]
        endo: Option<String>,
    },
    #[command(subcommand)]
    Verify(Verify),
    /// Membership of a word in the closure T'' over a finite group.
    ClosureMember {
        #[command(flatten)]
        f: FiniteArg,
        /// Semicolon- or comma-separated system of words.
        #[arg(long)]
        system: String,
        #[arg(long)]
        word: String,
        /// Second finite group to compare against.
        #[arg(long)]
        against: Option<String>,
    },
    /// Structure of an abelian group and its π-completion.
    Structure {
        /// Relation rows such as "0 5; 2 0".
        #[arg(long, conflicts_with = "group")]
        matrix: Option<String>,
        /// Number of generators for --matrix (defaults to the row length).
        #[arg(long)]
        cols: Option<usize>,
        #[arg(long)]
        group: Option<String>,
        #[command(flatten)]
        pi: PiArg,
    },
    /// π-completeness of a finite group.
    PiComplete {
        #[command(flatten)]
        f: FiniteArg,
        #[command(flatten)]
        pi: PiArg,
    },
}

#[derive(Subcommand)]
enum Verify {
    /// Power endomorphism of a relatively free group.
    Relfr {
        #[command(flatten)]
        g: GroupArg,
        #[command(flatten)]
        pi: PiArg,
        #[arg(long)]
        m: String,
    },
    /// Class-2 embedding into G^m through a central subgroup.
    A2 {
        #[command(flatten)]
        g: GroupArg,
        #[command(flatten)]
        pi: PiArg,
        #[arg(long)]
        m: String,
        /// Generators of the central subgroup.
        #[arg(long)]
        central: String,
    },
    /// Witnesses G ⪯ G^m for several m.
    Criterion {
        #[command(flatten)]
        g: GroupArg,
        #[command(flatten)]
        pi: PiArg,
        /// Comma-separated π-numbers.
        #[arg(long)]
        ms: String,
    },
}

/// What a subcommand produced: text, a JSON result and whether it succeeded.
struct Outcome {
    text: String,
    result: Value,
    ok: bool,
}

impl Outcome {
    fn ok(text: impl Into<String>, result: Value) -> Self {
        Outcome {
            text: text.into(),
            result,
            ok: true,
        }
    }

    fn fail(text: impl Into<String>, result: Value) -> Self {
        Outcome {
            text: text.into(),
            result,
            ok: false,
        }
    }
}

type Res<T> = Result<T, Error>;

fn load_group(spec: &str) -> Res<PcGroup> {
    match spec.parse::<Builtin>() {
        Ok(b) => PcGroup::builtin(&b),
        Err(_) => {
            let text = fs::read_to_string(spec)
                .map_err(|e| Error::InvalidArgument(format!("cannot read group {spec:?}: {e}")))?;
            PcGroup::from_text(&text)
        }
    }
}

fn load_finite(f: &FiniteArg) -> Res<FiniteGroup> {
    match (&f.finite, &f.table) {
        (Some(name), _) => FiniteGroup::builtin(name),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::InvalidArgument(format!("cannot read table {}: {e}", path.display())))?;
            FiniteGroup::parse_table(path.display().to_string(), &text)
        }
        (None, None) => Err(Error::InvalidArgument("give --finite or --table".into())),
    }
}

fn pi(p: &PiArg) -> Res<PrimeSet> {
    p.pi.parse()
}

fn int(s: &str) -> Res<BigInt> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("expected an integer, got {s:?}")))
}

fn ints(s: &str) -> Res<Vec<BigInt>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(int).collect()
}

fn subgroup(g: &PcGroup, spec: &str) -> Res<Subgroup> {
    if spec.trim().eq_ignore_ascii_case("derived") {
        return Ok(derived_subgroup(g));
    }
    let gens = spec
        .split(',')
        .filter(|w| !w.trim().is_empty())
        .map(|w| g.parse_element(w.trim()))
        .collect::<Res<Vec<_>>>()?;
    induced_sequence(g, &gens)
}

fn render(g: &PcGroup, x: &Element) -> String {
    g.render(x)
}

fn witness_json(g: &PcGroup, w: &EmbeddingWitness) -> Value {
    json!({
        "m": w.m.to_string(),
        "images": w.images.iter().map(|x| render(g, x)).collect::<Vec<_>>(),
        "checks": w.checks,
        "injective": w.injective,
        "image_in": w.image_in.render(g),
        "verified": w.verified,
    })
}

fn witness_outcome(g: &PcGroup, w: &EmbeddingWitness) -> Outcome {
    let out = Outcome::ok(w.render(g).trim_end().to_string(), witness_json(g, w));
    if w.verified {
        out
    } else {
        Outcome { ok: false, ..out }
    }
}

fn run(cmd: &Command) -> Res<(Outcome, Value)> {
    let inputs;
    let out = match cmd {
        Command::Nf { g, word } => {
            inputs = json!({"group": g.group, "word": word});
            let grp = load_group(&g.group)?;
            let x = grp.parse_element(word)?;
            let nf = render(&grp, &x);
            Outcome::ok(nf.clone(), json!({"normal_form": nf, "exponents": exps(&x)}))
        }
        Command::Mul { g, a, b } => {
            inputs = json!({"group": g.group, "a": a, "b": b});
            let grp = load_group(&g.group)?;
            let x = grp.multiply(&grp.parse_element(a)?, &grp.parse_element(b)?)?;
            element_outcome(&grp, &x)
        }
        Command::Pow { g, a, k } => {
            inputs = json!({"group": g.group, "a": a, "k": k});
            let grp = load_group(&g.group)?;
            let x = grp.power(&grp.parse_element(a)?, int(k)?)?;
            element_outcome(&grp, &x)
        }
        Command::Comm { g, a, b } => {
            inputs = json!({"group": g.group, "a": a, "b": b});
            let grp = load_group(&g.group)?;
            let x = grp.commutator(&grp.parse_element(a)?, &grp.parse_element(b)?)?;
            element_outcome(&grp, &x)
        }
        Command::Lcs { g } => {
            inputs = json!({"group": g.group});
            let grp = load_group(&g.group)?;
            let terms: Vec<String> = lower_central_series(&grp).iter().map(|s| s.render(&grp)).collect();
            let text = terms
                .iter()
                .enumerate()
                .map(|(i, t)| format!("gamma_{} = {t}", i + 1))
                .collect::<Vec<_>>()
                .join("\n");
            Outcome::ok(text, json!({"terms": terms, "class": terms.len().saturating_sub(1)}))
        }
        Command::Member { g, subgroup: h, word } => {
            inputs = json!({"group": g.group, "subgroup": h, "word": word});
            let grp = load_group(&g.group)?;
            let sub = subgroup(&grp, h)?;
            let x = grp.parse_element(word)?;
            match membership(&grp, &x, &sub)? {
                Some(w) => {
                    let seq = sub.sequence(&grp);
                    let factors: Vec<String> = w
                        .0
                        .iter()
                        .map(|(i, q)| format!("({})^{q}", render(&grp, &seq[*i])))
                        .collect();
                    let wit = if factors.is_empty() { "1".to_string() } else { factors.join("*") };
                    Outcome::ok(
                        format!("member: {} = {wit}", render(&grp, &x)),
                        json!({"member": true, "witness": wit}),
                    )
                }
                None => Outcome::fail("not a member", json!({"member": false})),
            }
        }
        Command::Index { g, subgroup: h } => {
            inputs = json!({"group": g.group, "subgroup": h});
            let grp = load_group(&g.group)?;
            let sub = subgroup(&grp, h)?;
            let i = index(&grp, &sub)?;
            Outcome::ok(i.to_string(), json!({"subgroup": sub.render(&grp), "index": i.to_string()}))
        }
        Command::PowerSubgroup { g, m } => {
            inputs = json!({"group": g.group, "m": m});
            let grp = load_group(&g.group)?;
            let gm = power_subgroup(&grp, &int(m)?)?;
            let i = index(&grp, &gm)?;
            Outcome::ok(
                format!("G^{m} = {}\nindex {i}", gm.render(&grp)),
                json!({"subgroup": gm.render(&grp), "index": i.to_string()}),
            )
        }
        Command::Isolator {
            g,
            pi: p,
            subgroup: h,
            expect,
        } => {
            inputs = json!({"group": g.group, "pi": p.pi, "subgroup": h, "expect": expect});
            let grp = load_group(&g.group)?;
            let set = pi(p)?;
            let sub = subgroup(&grp, h)?;
            let rep = pi_isolator_report(&grp, &sub, &set)?;
            let mut text = vec![format!("I_pi({}) = {}", sub.render(&grp), rep.isolator.render(&grp))];
            for (x, n) in &rep.witnesses {
                text.push(format!("  ({})^{n} ∈ H", render(&grp, x)));
            }
            let mut note = None;
            if let Some(full) = &rep.full_isolator {
                let n = format!(
                    "note: the isolator over all primes is {}, larger than the π-isolator {} for π = {}; \
                     elements whose only powers in H have non-π order are excluded",
                    full.render(&grp),
                    rep.isolator.render(&grp),
                    set
                );
                text.push(n.clone());
                note = Some(n);
            }
            let mut ok = true;
            if let Some(e) = expect {
                let want = subgroup(&grp, e)?;
                if want != rep.isolator {
                    ok = false;
                    text.push(format!(
                        "expected {}, computed {}",
                        want.render(&grp),
                        rep.isolator.render(&grp)
                    ));
                }
            }
            let result = json!({
                "isolator": rep.isolator.render(&grp),
                "witnesses": rep.witnesses.iter().map(|(x, n)| json!([render(&grp, x), n.to_string()])).collect::<Vec<_>>(),
                "full_isolator": rep.full_isolator.as_ref().map(|f| f.render(&grp)),
                "note": note,
            });
            Outcome {
                text: text.join("\n"),
                result,
                ok,
            }
        }
        Command::Torsion { g, pi: p } => {
            inputs = json!({"group": g.group, "pi": p.pi});
            let grp = load_group(&g.group)?;
            let rep = torsion_report(&grp, &pi(p)?)?;
            Outcome::ok(
                format!(
                    "torsion subgroup {} of order {}\npi-part {}",
                    rep.torsion_subgroup.render(&grp),
                    rep.order,
                    rep.pi_part.render(&grp)
                ),
                json!({
                    "torsion_subgroup": rep.torsion_subgroup.render(&grp),
                    "order": rep.order.to_string(),
                    "pi_part": rep.pi_part.render(&grp),
                }),
            )
        }
        Command::Root { g, n, word } => {
            inputs = json!({"group": g.group, "n": n, "word": word});
            let grp = load_group(&g.group)?;
            match nth_root(&grp, &grp.parse_element(word)?, &int(n)?)? {
                Some(x) => Outcome::ok(render(&grp, &x), json!({"root": render(&grp, &x)})),
                None => Outcome::fail("no root", json!({"root": null})),
            }
        }
        Command::LiBound { g, pi: p, gens } => {
            inputs = json!({"group": g.group, "pi": p.pi, "gens": gens});
            let grp = load_group(&g.group)?;
            let c = Completion::new(&grp, pi(p)?)?;
            let hs = gens
                .split(',')
                .filter(|w| !w.trim().is_empty())
                .map(|w| c.parse(w.trim()))
                .collect::<Res<Vec<_>>>()?;
            let b = lemma_li_bound(&c, &hs)?;
            let mut text = vec![format!("r = {}", b.r)];
            for (r, why) in &b.rejected {
                text.push(format!("  r = {r} fails: {why}"));
            }
            let powers: Vec<String> = b.generator_powers.iter().map(ToString::to_string).collect();
            text.push(format!("generator powers {}", powers.join(", ")));
            text.push(format!("proof bound {}", b.proof_bound));
            Outcome::ok(
                text.join("\n"),
                json!({
                    "r": b.r.to_string(),
                    "rejected": b.rejected.iter().map(|(r, w)| json!([r.to_string(), w])).collect::<Vec<_>>(),
                    "generator_powers": powers,
                    "proof_bound": b.proof_bound.to_string(),
                }),
            )
        }
        Command::Liering { g, pi: p, endo } => {
            inputs = json!({"group": g.group, "pi": p.pi, "endo": endo});
            let grp = load_group(&g.group)?;
            let ring = graded_ring(&grp, &pi(p)?)?;
            let mut text = Vec::new();
            let mut comps = Vec::new();
            for c in &ring.components {
                let basis: Vec<String> = c.basis.iter().map(|x| render(&grp, x)).collect();
                text.push(format!("degree {}: {} basis {}", c.degree, c.describe(), basis.join(", ")));
                comps.push(json!({
                    "degree": c.degree,
                    "rank": c.rank,
                    "torsion": c.torsion.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "basis": basis,
                }));
            }
            let name = |d: usize, k: usize| render(&grp, &ring.components[d - 1].basis[k]);
            let mut brackets = Vec::new();
            for br in &ring.brackets {
                if br.left < br.right {
                    let v: Vec<String> = br.value.iter().map(ToString::to_string).collect();
                    text.push(format!(
                        "[{}, {}] = ({}) in degree {}",
                        name(br.left.0, br.left.1),
                        name(br.right.0, br.right.1),
                        v.join(", "),
                        br.left.0 + br.right.0
                    ));
                    brackets.push(json!({
                        "left": name(br.left.0, br.left.1),
                        "right": name(br.right.0, br.right.1),
                        "value": v,
                    }));
                }
            }
            for w in &ring.warnings {
                text.push(format!("warning: {w}"));
            }
            let mut result = json!({"components": comps, "brackets": brackets, "warnings": ring.warnings});
            if let Some(e) = endo {
                let phi = Homomorphism::parse(&grp, &grp, e)?;
                let maps = induced_endomorphism(&grp, &ring, &phi)?;
                let mats: Vec<Vec<Vec<String>>> = maps
                    .matrices
                    .iter()
                    .map(|m| m.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect())
                    .collect();
                for (i, m) in mats.iter().enumerate() {
                    let rows: Vec<String> = m.iter().map(|r| r.join(" ")).collect();
                    text.push(format!("phi on degree {}: [{}]", i + 1, rows.join("; ")));
                }
                text.push(format!("kernel trivial: {}", maps.kernel_trivial));
                result["matrices"] = json!(mats);
                result["kernel_trivial"] = json!(maps.kernel_trivial);
            }
            Outcome::ok(text.join("\n"), result)
        }
        Command::Verify(v) => return run_verify(v),
        Command::ClosureMember {
            f,
            system,
            word,
            against,
        } => {
            inputs = json!({"finite": f.finite, "table": f.table, "system": system, "word": word, "against": against});
            let grp = load_finite(f)?;
            let alpha = Alphabet::new();
            let t = system
                .split([';', ','])
                .filter(|w| !w.trim().is_empty())
                .map(|w| alpha.parse(w.trim()))
                .collect::<Res<Vec<_>>>()?;
            let w = alpha.parse(word)?;
            match against {
                None => {
                    let m = closure_membership(&t, &w, &grp)?;
                    let text = format!("{} {} T'' over {}", word, if m { "∈" } else { "∉" }, grp.name);
                    if m {
                        Outcome::ok(text, json!({"member": true}))
                    } else {
                        Outcome::fail(text, json!({"member": false}))
                    }
                }
                Some(other) => {
                    let g2 = FiniteGroup::builtin(other)?;
                    let (a, b) = equivalence_probe(&t, &w, &grp, &g2)?;
                    let text = format!(
                        "{}: {a}\n{}: {b}{}",
                        grp.name,
                        g2.name,
                        if a == b { "" } else { "\nthe groups are not geometrically equivalent" }
                    );
                    Outcome::ok(text, json!({"first": a, "second": b, "distinguished": a != b}))
                }
            }
        }
        Command::Structure {
            matrix,
            cols,
            group,
            pi: p,
        } => {
            inputs = json!({"matrix": matrix, "cols": cols, "group": group, "pi": p.pi});
            let (rel, n) = match (matrix, group) {
                (Some(m), _) => {
                    let rows: Matrix = m
                        .split(';')
                        .filter(|r| !r.trim().is_empty())
                        .map(|r| r.split_whitespace().map(int).collect::<Res<Vec<_>>>())
                        .collect::<Res<_>>()?;
                    let n = cols.or_else(|| rows.first().map(Vec::len)).unwrap_or(0);
                    if rows.iter().any(|r| r.len() != n) {
                        return Err(Error::InvalidArgument(format!("every row needs {n} entries")));
                    }
                    (rows, n)
                }
                (None, Some(g)) => {
                    let grp = load_group(g)?;
                    (abelian_relations(&grp)?, grp.len())
                }
                (None, None) => return Err(Error::InvalidArgument("give --matrix or --group".into())),
            };
            let s = abelian_structure(&rel, n, &pi(p)?)?;
            Outcome::ok(
                s.to_string(),
                json!({
                    "rank": s.rank,
                    "factors": s.factors.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "pi_valid": s.pi_valid,
                    "completion": s.completion,
                }),
            )
        }
        Command::PiComplete { f, pi: p } => {
            inputs = json!({"finite": f.finite, "table": f.table, "pi": p.pi});
            let grp = load_finite(f)?;
            let set = pi(p)?;
            let c = is_pi_complete_finite(&grp, &set)?;
            let text = format!("{} is {}π-complete for π = {set}", grp.name, if c { "" } else { "not " });
            if c {
                Outcome::ok(text, json!({"pi_complete": true}))
            } else {
                Outcome::fail(text, json!({"pi_complete": false}))
            }
        }
    };
    Ok((out, inputs))
}

fn run_verify(v: &Verify) -> Res<(Outcome, Value)> {
    match v {
        Verify::Relfr { g, pi: p, m } => {
            let inputs = json!({"group": g.group, "pi": p.pi, "m": m});
            let grp = load_group(&g.group)?;
            let w = power_endo_verify(&grp, &int(m)?, &pi(p)?)?;
            Ok((witness_outcome(&grp, &w), inputs))
        }
        Verify::A2 { g, pi: p, m, central } => {
            let inputs = json!({"group": g.group, "pi": p.pi, "m": m, "central": central});
            let grp = load_group(&g.group)?;
            let c = subgroup(&grp, central)?;
            let w = a2_verify(&grp, &pi(p)?, &int(m)?, &c)?;
            Ok((witness_outcome(&grp, &w), inputs))
        }
        Verify::Criterion { g, pi: p, ms } => {
            let inputs = json!({"group": g.group, "pi": p.pi, "ms": ms});
            let grp = load_group(&g.group)?;
            let r = criterion_run(&grp, &pi(p)?, &ints(ms)?)?;
            let mut text = vec![r.statement.clone()];
            let mut ws = Vec::new();
            for (m, method, w) in &r.witnesses {
                text.push(format!(
                    "m = {m} via {method}: injective {}, verified {}",
                    w.injective, w.verified
                ));
                let mut j = witness_json(&grp, w);
                j["method"] = json!(method);
                ws.push(j);
            }
            let result = json!({"statement": r.statement, "witnesses": ws, "verified": r.verified()});
            let out = if r.verified() {
                Outcome::ok(text.join("\n"), result)
            } else {
                Outcome::fail(text.join("\n"), result)
            };
            Ok((out, inputs))
        }
    }
}

fn element_outcome(g: &PcGroup, x: &Element) -> Outcome {
    let nf = render(g, x);
    Outcome::ok(nf.clone(), json!({"normal_form": nf, "exponents": exps(x)}))
}

fn exps(x: &Element) -> Vec<String> {
    x.exponents().iter().map(ToString::to_string).collect()
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Nf { .. } => "nf",
        Command::Mul { .. } => "mul",
        Command::Pow { .. } => "pow",
        Command::Comm { .. } => "comm",
        Command::Lcs { .. } => "lcs",
        Command::Member { .. } => "member",
        Command::Index { .. } => "index",
        Command::PowerSubgroup { .. } => "power-subgroup",
        Command::Isolator { .. } => "isolator",
        Command::Torsion { .. } => "torsion",
        Command::Root { .. } => "root",
        Command::LiBound { .. } => "li-bound",
        Command::Liering { .. } => "liering",
        Command::Verify(Verify::Relfr { .. }) => "verify relfr",
        Command::Verify(Verify::A2 { .. }) => "verify a2",
        Command::Verify(Verify::Criterion { .. }) => "verify criterion",
        Command::ClosureMember { .. } => "closure-member",
        Command::Structure { .. } => "structure",
        Command::PiComplete { .. } => "pi-complete",
    }
}

/// Failed hypotheses and checks are verification failures (1); anything
/// else is a problem with the invocation (2).
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::HypothesisFailed { .. }
        | Error::PreconditionFailed(_)
        | Error::NotCentral(_)
        | Error::InvalidEndomorphism(_)
        | Error::Internal(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    match run(&cli.command) {
        Ok((out, inputs)) => {
            if cli.json {
                println!("{}", json!({"command": name, "inputs": inputs, "result": out.result}));
            } else {
                println!("{}", out.text);
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            if cli.json {
                let mut err = json!({"error": e.to_string()});
                if let Error::HypothesisFailed { witness: Some(w), .. } = &e {
                    err["witness"] = json!(w);
                }
                println!("{}", json!({"command": name, "inputs": null, "result": err}));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
