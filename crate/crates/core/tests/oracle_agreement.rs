use popmatch::fractional::{is_fractional_popular, FractionalCertificate, FractionalVerdict};
use popmatch::gen::{generate_with, greedy_matching, random_matching, random_maximal_matching, rng, Model};
use popmatch::model::{blocking_edges, delta, fractional_value, Halves, Matching, RoommatesInstance};
use popmatch::oracle::{brute_fractional_popular, brute_popular};
use popmatch::popularity::{is_popular, verify_witness, PopularityVerdict};
use rand::Rng;

fn cases(seed: u64, count: usize, sizes: std::ops::RangeInclusive<usize>) -> Vec<(RoommatesInstance, Matching)> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    for i in 0..count {
        let n = r.gen_range(sizes.clone());
        let model = if i % 2 == 0 { Model::Complete } else { Model::Gnp(0.5) };
        let inst = generate_with(n, model, &mut r).unwrap();
        let ms = [
            Matching::empty(n),
            random_maximal_matching(&inst, &mut r),
            greedy_matching(&inst),
            random_matching(&inst, &mut r),
        ];
        for m in ms {
            out.push((inst.clone(), m));
        }
    }
    out
}

fn check_popularity(inst: &RoommatesInstance, m: &Matching) {
    let verdict = is_popular(inst, m).unwrap();
    let report = brute_popular(inst, m).unwrap();
    assert_eq!(verdict.is_popular(), report.verdict, "{inst:?} {m:?} {verdict:?}");
    match verdict {
        PopularityVerdict::Popular { witness } => {
            verify_witness(inst, m, &witness).unwrap();
        }
        PopularityVerdict::Unpopular {
            structure,
            better,
            margin,
        } => {
            structure.validate(inst, m).unwrap();
            assert!(margin >= 1);
            assert_eq!(delta(inst, m, &better).unwrap(), margin);
        }
    }
    if blocking_edges(inst, m).is_empty() {
        assert!(report.verdict);
    }
}

#[test]
fn popularity_matches_enumeration() {
    for (inst, m) in cases(1, 600, 2..=8) {
        check_popularity(&inst, &m);
    }
}

#[test]
fn sparse_popularity_matches_enumeration() {
    let mut r = rng(2);
    for _ in 0..600 {
        let n = r.gen_range(3..=9);
        let p = r.gen_range(0.15..0.6);
        let inst = generate_with(n, Model::Gnp(p), &mut r).unwrap();
        for m in [random_maximal_matching(&inst, &mut r), random_matching(&inst, &mut r)] {
            check_popularity(&inst, &m);
        }
    }
}

#[test]
fn fractional_matches_enumeration() {
    for (inst, m) in cases(3, 400, 2..=7) {
        let verdict = is_fractional_popular(&inst, &m).unwrap();
        let report = brute_fractional_popular(&inst, &m).unwrap();
        assert_eq!(verdict.is_fractional_popular(), report.verdict, "{inst:?} {m:?} {verdict:?}");
        let integral = brute_popular(&inst, &m).unwrap();
        assert!(integral.best_value <= report.best_value);
        if let FractionalVerdict::NotFractionalPopular { certificate, p, value } = verdict {
            p.validate(&inst).unwrap();
            assert_eq!(fractional_value(&inst, &m, &p).unwrap(), value);
            if let FractionalCertificate::Structure(s) = certificate {
                s.validate(&inst, &m).unwrap();
                assert_eq!(value, Halves(2));
            }
        }
    }
}

fn all_matchings(inst: &RoommatesInstance) -> Vec<Matching> {
    fn go(inst: &RoommatesInstance, v: usize, mate: &mut Vec<Option<usize>>, done: &mut Vec<bool>, out: &mut Vec<Matching>) {
        let n = mate.len();
        let Some(v) = (v..n).find(|&x| !done[x]) else {
            out.push(Matching::from_mates(inst, mate.clone()).unwrap());
            return;
        };
        done[v] = true;
        go(inst, v + 1, mate, done, out);
        for &w in inst.preferences(v) {
            if !done[w] {
                done[w] = true;
                mate[v] = Some(w);
                mate[w] = Some(v);
                go(inst, v + 1, mate, done, out);
                mate[v] = None;
                mate[w] = None;
                done[w] = false;
            }
        }
        done[v] = false;
    }
    let n = inst.node_count();
    let mut out = Vec::new();
    go(inst, 0, &mut vec![None; n], &mut vec![false; n], &mut out);
    out
}

#[test]
fn every_matching_of_small_instances() {
    let mut r = rng(4);
    let (mut popular, mut structures) = (0usize, 0usize);
    for i in 0..300 {
        let n = r.gen_range(3..=7);
        let model = if i % 3 == 0 { Model::Complete } else { Model::Gnp(r.gen_range(0.3..0.9)) };
        let inst = generate_with(n, model, &mut r).unwrap();
        for m in all_matchings(&inst) {
            check_popularity(&inst, &m);
            let verdict = is_fractional_popular(&inst, &m).unwrap();
            let report = brute_fractional_popular(&inst, &m).unwrap();
            assert_eq!(verdict.is_fractional_popular(), report.verdict, "{inst:?} {m:?} {verdict:?}");
            if is_popular(&inst, &m).unwrap().is_popular() {
                popular += 1;
                if let FractionalVerdict::NotFractionalPopular { value, .. } = verdict {
                    assert_eq!(value, Halves(2));
                    structures += 1;
                }
            }
        }
    }
    assert!(popular > 100 && structures > 10, "popular {popular}, structures {structures}");
}
