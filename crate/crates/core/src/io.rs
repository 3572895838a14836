//! Text formats for instances and matchings, and the JSON certificate
//! document.
//!
//! Instance files start with the node count; line `i` after it lists node
//! `i`'s neighbors, most preferred first. Lines starting with `#` are
//! comments, and `# name <i> <label>` attaches a display label to node `i`.
//! Matching files hold one `i j` pair per line.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fractional::{structure_to_fractional_matching, FractionalCertificate, FractionalStructure, FractionalVerdict};
use crate::model::{delta, fractional_value, HalfIntegralMatching, Halves, Matching, RoommatesInstance};
use crate::popularity::{verify_witness, BlockingStructure, DualWitness, PopularityVerdict, StructureKind};

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rest = line;
    let mut offset = 0;
    std::iter::from_fn(move || {
        let start = rest.find(|c: char| !c.is_whitespace())?;
        let len = rest[start..].find(char::is_whitespace).unwrap_or(rest.len() - start);
        let token = &rest[start..start + len];
        let column = offset + start + 1;
        offset += start + len;
        rest = &rest[start + len..];
        Some((column, token))
    })
}

fn number(line: usize, column: usize, token: &str) -> Result<usize> {
    token
        .parse()
        .map_err(|_| parse_error(line, column, format!("expected a non-negative integer, found `{token}`")))
}

pub fn parse_instance(text: &str) -> Result<RoommatesInstance> {
    let mut n: Option<usize> = None;
    let mut lists: Vec<Vec<usize>> = Vec::new();
    let mut labels = BTreeMap::new();
    let mut seen: Vec<usize> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = raw.trim_start();
        if let Some(comment) = trimmed.strip_prefix('#') {
            let mut parts = comment.split_whitespace();
            if parts.next() == Some("name") {
                if let (Some(id), Some(label)) = (parts.next(), parts.next()) {
                    if let Ok(id) = id.parse::<usize>() {
                        labels.insert(id, label.to_string());
                    }
                }
            }
            continue;
        }
        let Some(count) = n else {
            if trimmed.is_empty() {
                continue;
            }
            let mut toks = tokens(raw);
            let (col, tok) = toks.next().expect("non-empty line");
            if let Some((col, _)) = toks.next() {
                return Err(parse_error(line_no, col, "node count line must hold a single integer"));
            }
            let count = number(line_no, col, tok)?;
            n = Some(count);
            seen = vec![usize::MAX; count];
            continue;
        };
        if lists.len() == count {
            if trimmed.is_empty() {
                continue;
            }
            return Err(parse_error(line_no, 1, format!("more than {count} preference lines")));
        }
        let v = lists.len();
        let mut list = Vec::new();
        for (col, tok) in tokens(raw) {
            let w = number(line_no, col, tok)?;
            if w >= count {
                return Err(parse_error(line_no, col, format!("node {w} is out of range 0..{count}")));
            }
            if w == v {
                return Err(parse_error(line_no, col, format!("node {v} lists itself")));
            }
            if seen[w] == v {
                return Err(parse_error(line_no, col, format!("node {v} lists {w} twice")));
            }
            seen[w] = v;
            list.push(w);
        }
        lists.push(list);
    }
    let count = n.ok_or_else(|| parse_error(1, 1, "missing node count"))?;
    if lists.len() != count {
        return Err(parse_error(
            text.lines().count() + 1,
            1,
            format!("expected {count} preference lines, found {}", lists.len()),
        ));
    }
    if let Some(&id) = labels.keys().find(|&&id| id >= count) {
        return Err(invalid(format!("label given for node {id}, which is out of range")));
    }
    Ok(RoommatesInstance::new(lists)?.with_labels(labels))
}

pub fn write_instance(inst: &RoommatesInstance) -> String {
    let mut out = String::with_capacity(inst.edge_count() * 14 + 16);
    let _ = writeln!(out, "{}", inst.node_count());
    for (id, label) in inst.labels() {
        let _ = writeln!(out, "# name {id} {label}");
    }
    for v in 0..inst.node_count() {
        let mut first = true;
        for &w in inst.preferences(v) {
            if !first {
                out.push(' ');
            }
            first = false;
            let _ = write!(out, "{w}");
        }
        out.push('\n');
    }
    out
}

pub fn parse_matching(text: &str, inst: &RoommatesInstance) -> Result<Matching> {
    let n = inst.node_count();
    let mut mate = vec![None; n];
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let toks: Vec<(usize, &str)> = tokens(raw).collect();
        if toks.len() != 2 {
            return Err(parse_error(line_no, toks.get(2).map_or(1, |t| t.0), "expected a pair `i j`"));
        }
        let mut pair = [0usize; 2];
        for (k, &(col, tok)) in toks.iter().enumerate() {
            let v = number(line_no, col, tok)?;
            if v >= n {
                return Err(parse_error(line_no, col, format!("node {v} is out of range 0..{n}")));
            }
            if mate[v].is_some() {
                return Err(parse_error(line_no, col, format!("node {v} is already matched")));
            }
            pair[k] = v;
        }
        let [a, b] = pair;
        if !inst.is_edge(a, b) {
            return Err(parse_error(line_no, toks[0].0, format!("{a} {b} is not an edge of the instance")));
        }
        mate[a] = Some(b);
        mate[b] = Some(a);
    }
    Matching::from_mates(inst, mate)
}

pub fn write_matching(m: &Matching) -> String {
    let mut out = String::new();
    for (a, b) in m.pairs() {
        let _ = writeln!(out, "{a} {b}");
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictTag {
    Popular,
    Unpopular,
    FractionalPopular,
    NotFractionalPopular,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDoc {
    /// Node id (as a string key) to value.
    pub alpha: BTreeMap<String, i8>,
    pub two_sets: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureDoc {
    pub kind: String,
    pub nodes: Vec<usize>,
    pub blocking_edges: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionalStructureDoc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<Vec<usize>>,
    pub cycle: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PDoc {
    pub ones: Vec<[usize; 2]>,
    pub loop_ones: Vec<usize>,
    pub half_cycles: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub verdict: VerdictTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocking_structure: Option<StructureDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub better_matching: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fractional_structure: Option<FractionalStructureDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<PDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value_times_two: Option<i64>,
}

fn pairs_doc(pairs: &[(usize, usize)]) -> Vec<[usize; 2]> {
    pairs.iter().map(|&(a, b)| [a, b]).collect()
}

fn witness_doc(w: &DualWitness) -> WitnessDoc {
    WitnessDoc {
        alpha: w.alpha.iter().enumerate().map(|(v, &a)| (v.to_string(), a)).collect(),
        two_sets: w.two_sets.clone(),
    }
}

fn structure_doc(s: &BlockingStructure) -> StructureDoc {
    StructureDoc {
        kind: s.kind.as_str().to_string(),
        nodes: s.nodes.clone(),
        blocking_edges: pairs_doc(&s.blocking_edges()),
    }
}

fn p_doc(p: &HalfIntegralMatching) -> PDoc {
    PDoc {
        ones: pairs_doc(&p.ones),
        loop_ones: p.loop_ones.clone(),
        half_cycles: p.half_cycles.clone(),
    }
}

impl CertificateDocument {
    fn empty(verdict: VerdictTag) -> Self {
        CertificateDocument {
            verdict,
            witness: None,
            blocking_structure: None,
            better_matching: None,
            margin: None,
            fractional_structure: None,
            p: None,
            value_times_two: None,
        }
    }

    pub fn from_popularity(v: &PopularityVerdict) -> Self {
        match v {
            PopularityVerdict::Popular { witness } => CertificateDocument {
                witness: Some(witness_doc(witness)),
                ..Self::empty(VerdictTag::Popular)
            },
            PopularityVerdict::Unpopular {
                structure,
                better,
                margin,
            } => CertificateDocument {
                blocking_structure: Some(structure_doc(structure)),
                better_matching: Some(pairs_doc(&better.pairs())),
                margin: Some(*margin),
                ..Self::empty(VerdictTag::Unpopular)
            },
        }
    }

    pub fn from_fractional(v: &FractionalVerdict) -> Self {
        match v {
            FractionalVerdict::FractionalPopular { witness } => CertificateDocument {
                witness: Some(witness_doc(witness)),
                ..Self::empty(VerdictTag::FractionalPopular)
            },
            FractionalVerdict::NotFractionalPopular { certificate, p, value } => {
                let mut doc = CertificateDocument {
                    p: Some(p_doc(p)),
                    value_times_two: Some(value.times_two()),
                    ..Self::empty(VerdictTag::NotFractionalPopular)
                };
                match certificate {
                    FractionalCertificate::Structure(FractionalStructure::StarCycle { cycle }) => {
                        doc.fractional_structure = Some(FractionalStructureDoc {
                            kind: "star-cycle".into(),
                            path: None,
                            cycle: cycle.clone(),
                        });
                    }
                    FractionalCertificate::Structure(FractionalStructure::PathCycle { path, cycle }) => {
                        doc.fractional_structure = Some(FractionalStructureDoc {
                            kind: "path-cycle".into(),
                            path: Some(path.clone()),
                            cycle: cycle.clone(),
                        });
                    }
                    FractionalCertificate::Unpopular { structure, better } => {
                        let margin = value.times_two() / 2;
                        doc.blocking_structure = Some(structure_doc(structure));
                        doc.better_matching = Some(pairs_doc(&better.pairs()));
                        doc.margin = Some(margin);
                    }
                }
                doc
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| parse_error(e.line(), e.column(), e.to_string()))
    }

    /// Re-checks every certificate the document carries against `inst` and
    /// `m`, and that the verdict has the certificates it needs.
    pub fn verify(&self, inst: &RoommatesInstance, m: &Matching) -> Result<()> {
        m.validate(inst)?;
        let fail = |msg: String| Err(invalid(format!("certificate check failed: {msg}")));
        let n = inst.node_count();

        if let Some(w) = &self.witness {
            let mut alpha = vec![0i8; n];
            for (key, &value) in &w.alpha {
                match key.parse::<usize>() {
                    Ok(v) if v < n => alpha[v] = value,
                    _ => return fail(format!("alpha key `{key}` is not a node")),
                }
            }
            let witness = DualWitness {
                alpha,
                two_sets: w.two_sets.clone(),
            };
            if let Err(f) = verify_witness(inst, m, &witness) {
                return fail(f.to_string());
            }
        }
        if let Some(s) = &self.blocking_structure {
            let kind = match StructureKind::parse(&s.kind) {
                Some(k) => k,
                None => return fail(format!("unknown structure kind `{}`", s.kind)),
            };
            let structure = BlockingStructure::new(kind, s.nodes.clone());
            structure.validate(inst, m)?;
            if pairs_doc(&structure.blocking_edges()) != s.blocking_edges {
                return fail("listed blocking edges do not match the structure".into());
            }
        }
        if let Some(pairs) = &self.better_matching {
            let pairs: Vec<(usize, usize)> = pairs.iter().map(|p| (p[0], p[1])).collect();
            let better = Matching::from_pairs(inst, &pairs)?;
            let d = delta(inst, m, &better)?;
            if d < 1 || Some(d) != self.margin {
                return fail(format!("better matching has margin {d}"));
            }
        }
        let mut structure_p = None;
        if let Some(f) = &self.fractional_structure {
            let s = match (f.kind.as_str(), &f.path) {
                ("star-cycle", None) => FractionalStructure::StarCycle { cycle: f.cycle.clone() },
                ("path-cycle", Some(path)) => FractionalStructure::PathCycle {
                    path: path.clone(),
                    cycle: f.cycle.clone(),
                },
                _ => return fail(format!("malformed fractional structure `{}`", f.kind)),
            };
            structure_p = Some(structure_to_fractional_matching(inst, m, &s)?);
        }
        if let Some(p) = &self.p {
            let p = HalfIntegralMatching {
                ones: p.ones.iter().map(|e| (e[0], e[1])).collect(),
                loop_ones: p.loop_ones.clone(),
                half_cycles: p.half_cycles.clone(),
            };
            let value = fractional_value(inst, m, &p)?;
            if Some(value.times_two()) != self.value_times_two || value <= Halves(0) {
                return fail(format!("p has value {value}"));
            }
            if structure_p.as_ref().is_some_and(|q| *q != p) {
                return fail("p does not match the fractional structure".into());
            }
        }

        let has = |x: bool, what: &str| if x { Ok(()) } else { fail(format!("missing {what}")) };
        match self.verdict {
            VerdictTag::Popular => has(self.witness.is_some(), "witness"),
            VerdictTag::FractionalPopular => {
                has(self.witness.as_ref().is_some_and(|w| w.two_sets.is_empty()), "witness without odd sets")
            }
            VerdictTag::Unpopular => has(
                self.blocking_structure.is_some() && self.better_matching.is_some(),
                "blocking structure and better matching",
            ),
            VerdictTag::NotFractionalPopular => {
                has(self.p.is_some(), "fractional matching")?;
                has(
                    self.fractional_structure.is_some() || self.better_matching.is_some(),
                    "fractional structure or better matching",
                )?;
                if self.fractional_structure.is_some() && self.value_times_two != Some(2) {
                    return fail("structure certificate must have value 1".into());
                }
                Ok(())
            }
        }
    }
}
