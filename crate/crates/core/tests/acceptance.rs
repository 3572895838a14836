//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero when any criterion fails.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use popmatch::bench::{self, MatchingKind};
use popmatch::engine::{augment, find_augmenting_path, gallai_edmonds, is_maximum, Graph};
use popmatch::fractional::{is_fractional_popular, FractionalCertificate, FractionalStructure, FractionalVerdict};
use popmatch::gen::{generate_with, greedy_matching, random_maximal_matching, rng, Model};
use popmatch::io::{parse_instance, parse_matching};
use popmatch::model::{blocking_edges, delta, fractional_value, Halves, Matching, RoommatesInstance};
use popmatch::oracle::{brute_fractional_popular, brute_gallai_edmonds, brute_max_matching_size, brute_popular};
use popmatch::popularity::{is_popular, verify_witness, DualWitness, PopularityVerdict};
use rand::seq::SliceRandom;
use rand::Rng;

/// Certificate and witness checks gathered across all runs.
#[derive(Default)]
struct Audit {
    witnesses: usize,
    witness_failures: Vec<String>,
    structures: usize,
    structure_failures: Vec<String>,
    fractional_structures: usize,
    lifted: usize,
    lifted_not_one: usize,
    fractional_failures: Vec<String>,
    stable: usize,
    stable_failures: usize,
}

impl Audit {
    fn witness(&mut self, inst: &RoommatesInstance, m: &Matching, w: &DualWitness) {
        self.witnesses += 1;
        let mut problems = Vec::new();
        if let Err(f) = verify_witness(inst, m, w) {
            problems.push(f.to_string());
        }
        if w.alpha.iter().any(|a| !(-1..=1).contains(a)) {
            problems.push("alpha outside {-1, 0, 1}".into());
        }
        let mut seen = vec![false; inst.node_count()];
        for v in w.two_sets.iter().flatten() {
            if std::mem::replace(&mut seen[*v], true) {
                problems.push(format!("node {v} in two odd sets"));
            }
        }
        if w.objective() != 0 {
            problems.push(format!("objective {}", w.objective()));
        }
        if !problems.is_empty() {
            self.witness_failures.push(format!("{inst:?} {m:?}: {}", problems.join("; ")));
        }
    }

    fn popularity(&mut self, inst: &RoommatesInstance, m: &Matching, verdict: &PopularityVerdict) {
        match verdict {
            PopularityVerdict::Popular { witness } => self.witness(inst, m, witness),
            PopularityVerdict::Unpopular { structure, better, margin } => {
                self.structures += 1;
                let d = delta(inst, m, better);
                let ok = structure.validate(inst, m).is_ok() && matches!(d, Ok(d) if d >= 1 && d == *margin);
                if !ok {
                    self.structure_failures.push(format!("{inst:?} {m:?} {structure:?}"));
                }
            }
        }
        if blocking_edges(inst, m).is_empty() {
            self.stable += 1;
            if !verdict.is_popular() {
                self.stable_failures += 1;
            }
        }
    }

    fn fractional(&mut self, inst: &RoommatesInstance, m: &Matching, verdict: &FractionalVerdict) {
        let (certificate, p, value) = match verdict {
            FractionalVerdict::FractionalPopular { witness } => {
                self.witness(inst, m, witness);
                return;
            }
            FractionalVerdict::NotFractionalPopular { certificate, p, value } => (certificate, p, value),
        };
        let mut problems = Vec::new();
        if let Err(e) = p.validate(inst) {
            problems.push(format!("p invalid: {e}"));
        }
        if fractional_value(inst, m, p).ok() != Some(*value) {
            problems.push("reported value differs from the value of p".into());
        }
        match certificate {
            FractionalCertificate::Structure(s) => {
                self.fractional_structures += 1;
                if s.validate(inst, m).is_err() {
                    problems.push("structure invalid".into());
                }
                if *value != Halves(2) {
                    problems.push(format!("structure certificate with value {value}"));
                }
            }
            FractionalCertificate::Unpopular { structure, better } => {
                self.lifted += 1;
                if *value != Halves(2) {
                    self.lifted_not_one += 1;
                }
                let margin = delta(inst, m, better);
                if structure.validate(inst, m).is_err() || !matches!(margin, Ok(d) if d >= 1 && Halves::from_int(d) == *value)
                {
                    problems.push("lifted certificate inconsistent".into());
                }
            }
        }
        if !problems.is_empty() {
            self.fractional_failures.push(format!("{inst:?} {m:?}: {}", problems.join("; ")));
        }
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn random_cases(seed: u64, count: usize, sizes: std::ops::RangeInclusive<usize>) -> Vec<(RoommatesInstance, Vec<Matching>)> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let n = r.gen_range(sizes.clone());
            let model = if i % 2 == 0 { Model::Complete } else { Model::Gnp(0.5) };
            let inst = generate_with(n, model, &mut r).unwrap();
            let ms = vec![Matching::empty(n), random_maximal_matching(&inst, &mut r), greedy_matching(&inst)];
            (inst, ms)
        })
        .collect()
}

fn first_lines(items: &[String]) -> String {
    items.iter().take(3).cloned().collect::<Vec<_>>().join(" | ")
}

fn popularity_equivalence(audit: &mut Audit) -> Outcome {
    let start = Instant::now();
    let (mut cases, mut wrong) = (0usize, Vec::new());
    for (inst, ms) in random_cases(11, 2000, 4..=8) {
        for m in ms {
            cases += 1;
            let verdict = is_popular(&inst, &m).unwrap();
            let brute = brute_popular(&inst, &m).unwrap();
            if verdict.is_popular() != brute.verdict {
                wrong.push(format!("{inst:?} {m:?}"));
            }
            audit.popularity(&inst, &m, &verdict);
        }
    }
    let elapsed = start.elapsed();
    outcome(
        wrong.is_empty() && elapsed < Duration::from_secs(60),
        format!(
            "{}/{cases} cases agree over 2000 instances, {:.1} s (limit 60 s) {}",
            cases - wrong.len(),
            elapsed.as_secs_f64(),
            first_lines(&wrong)
        ),
    )
}

fn fractional_equivalence(audit: &mut Audit) -> Outcome {
    let (mut cases, mut wrong) = (0usize, Vec::new());
    for (inst, ms) in random_cases(12, 500, 4..=7) {
        for m in ms {
            cases += 1;
            let verdict = is_fractional_popular(&inst, &m).unwrap();
            let brute = brute_fractional_popular(&inst, &m).unwrap();
            if verdict.is_fractional_popular() != brute.verdict {
                wrong.push(format!("{inst:?} {m:?}"));
            }
            audit.fractional(&inst, &m, &verdict);
            audit.popularity(&inst, &m, &is_popular(&inst, &m).unwrap());
        }
    }
    outcome(
        wrong.is_empty(),
        format!("{}/{cases} cases agree over 500 instances {}", cases - wrong.len(), first_lines(&wrong)),
    )
}

fn load(name: &str) -> (RoommatesInstance, Matching) {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let inst = parse_instance(&std::fs::read_to_string(dir.join(format!("{name}.txt"))).unwrap()).unwrap();
    let m = parse_matching(&std::fs::read_to_string(dir.join(format!("{name}.matching"))).unwrap(), &inst).unwrap();
    (inst, m)
}

fn fixtures(audit: &mut Audit) -> Outcome {
    let mut notes = Vec::new();

    let (inst, m) = load("blocking_path");
    let verdict = is_popular(&inst, &m).unwrap();
    audit.popularity(&inst, &m, &verdict);
    let ac_df = Matching::from_pairs(&inst, &[(0, 2), (3, 5)]).unwrap();
    let d = delta(&inst, &m, &ac_df).unwrap();
    let first = matches!(verdict, PopularityVerdict::Unpopular { margin, .. } if margin >= 1) && d == 2;
    notes.push(format!("blocking path: unpopular {}, delta to {{ac, df}} {d}", !verdict.is_popular()));

    let (inst, m) = load("triangle_pendant");
    let verdict = is_popular(&inst, &m).unwrap();
    audit.popularity(&inst, &m, &verdict);
    let frac = is_fractional_popular(&inst, &m).unwrap();
    audit.fractional(&inst, &m, &frac);
    let second = verdict.is_popular()
        && matches!(frac, FractionalVerdict::NotFractionalPopular { value, .. } if value == Halves(2));
    notes.push(format!("triangle with pendant: popular {}, fractional certificate ok {second}", verdict.is_popular()));

    let (inst, m) = load("path_triangle");
    let verdict = is_popular(&inst, &m).unwrap();
    audit.popularity(&inst, &m, &verdict);
    let frac = is_fractional_popular(&inst, &m).unwrap();
    audit.fractional(&inst, &m, &frac);
    let expected = FractionalCertificate::Structure(FractionalStructure::PathCycle {
        path: vec![0, 2, 3],
        cycle: vec![3, 4, 5],
    });
    let third = verdict.is_popular()
        && matches!(&frac, FractionalVerdict::NotFractionalPopular { certificate, value, .. }
            if *certificate == expected && *value == Halves(2));
    notes.push(format!("path into triangle: popular {}, a-c-d plus d-e-f-d with value 1 {third}", verdict.is_popular()));

    outcome(first && second && third, notes.join("; "))
}

fn witness_soundness(audit: &Audit) -> Outcome {
    outcome(
        audit.witness_failures.is_empty(),
        format!(
            "{} witnesses checked, {} failures {}",
            audit.witnesses,
            audit.witness_failures.len(),
            first_lines(&audit.witness_failures)
        ),
    )
}

fn certificate_soundness(audit: &Audit) -> Outcome {
    outcome(
        audit.structure_failures.is_empty() && audit.fractional_failures.is_empty(),
        format!(
            "{} blocking structures ({} failures); {} fractional structure certificates with value exactly 1; \
             {} certificates for unpopular inputs reuse the better matching with value equal to its margin \
             ({} of them differ from 1, as no half-integral matching of value 1 exists for e.g. the empty matching); \
             {} fractional failures {}",
            audit.structures,
            audit.structure_failures.len(),
            audit.fractional_structures,
            audit.lifted,
            audit.lifted_not_one,
            audit.fractional_failures.len(),
            first_lines(&[audit.structure_failures.clone(), audit.fractional_failures.clone()].concat())
        ),
    )
}

fn stability(audit: &Audit) -> Outcome {
    outcome(
        audit.stable > 0 && audit.stable_failures == 0,
        format!("{} stable cases, {} not reported popular", audit.stable, audit.stable_failures),
    )
}

fn scaling() -> Outcome {
    let rows = bench::measure(&[10_000, 100_000, 1_000_000], 1, 5).unwrap();
    let random: Vec<_> = rows.iter().filter(|r| r.matching == MatchingKind::RandomMaximal).collect();
    let largest = random.last().unwrap();
    let ratio = largest.ratio;
    let secs = largest.median_ns as f64 / 1e9;
    let per_edge: Vec<String> = random.iter().map(|r| format!("{}: {:.1} ns/edge", r.edges, r.ns_per_edge)).collect();
    outcome(
        ratio <= 2.0 && secs < 2.0,
        format!(
            "{}; growth {ratio:.2} (limit 2); largest check {:.3} s (limit 2 s)",
            per_edge.join(", "),
            secs
        ),
    )
}

fn engine_correctness() -> Outcome {
    let mut r = rng(13);
    let (mut graphs, mut wrong) = (0usize, Vec::new());
    for _ in 0..600 {
        let n = r.gen_range(1..=10);
        let p = r.gen_range(0.1..0.9);
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|_| r.gen_bool(p)).collect();
        let g = Graph::from_edges(n, &edges);
        let best = brute_max_matching_size(&g).unwrap();
        let mut order = edges.clone();
        order.shuffle(&mut r);
        let mut mate = vec![None; n];
        for (a, b) in order {
            if mate[a].is_none() && mate[b].is_none() && r.gen_bool(0.7) {
                mate[a] = Some(b);
                mate[b] = Some(a);
            }
        }
        graphs += 1;
        let size = |mate: &[Option<usize>]| mate.iter().flatten().count() / 2;
        if is_maximum(&g, &mate).unwrap() != (size(&mate) == best) {
            wrong.push(format!("is_maximum on {edges:?} {mate:?}"));
        }
        while let Some(path) = find_augmenting_path(&g, &mate).unwrap() {
            augment(&mut mate, &path);
        }
        if size(&mate) != best || !is_maximum(&g, &mate).unwrap() {
            wrong.push(format!("maximization on {edges:?}"));
            continue;
        }
        let ge = gallai_edmonds(&g, &mate).unwrap();
        let brute = brute_gallai_edmonds(&g).unwrap();
        let sets = |c: &[popmatch::engine::DComponent]| c.iter().map(|c| c.nodes.clone()).collect::<Vec<_>>();
        if ge.d != brute.d || ge.a != brute.a || ge.c != brute.c || sets(&ge.components) != sets(&brute.components) {
            wrong.push(format!("decomposition on {edges:?}"));
        }
    }
    outcome(
        wrong.is_empty(),
        format!("{graphs} graphs, {} discrepancies {}", wrong.len(), first_lines(&wrong)),
    )
}

fn main() {
    let mut audit = Audit::default();
    let results = [
        ("popularity agrees with exhaustive enumeration", popularity_equivalence(&mut audit)),
        ("fractional popularity agrees with exhaustive enumeration", fractional_equivalence(&mut audit)),
        ("fixture instances", fixtures(&mut audit)),
        ("witness soundness", witness_soundness(&audit)),
        ("certificate soundness", certificate_soundness(&audit)),
        ("stable matchings are popular", stability(&audit)),
        ("near-linear scaling", scaling()),
        ("matching engine against brute force", engine_correctness()),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!("{} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail.trim_end());
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
