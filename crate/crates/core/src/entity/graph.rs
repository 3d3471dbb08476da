use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::similarity::{normalize_name, similarity_normalized};
use crate::ingest::DwpiAssignee;
use crate::stats;

/// Similarity graph over the distinct names filed under one assignee code.
#[derive(Debug, Clone)]
pub struct NameGraph {
    pub code: String,
    pub names: Vec<String>,
    /// `(i, j, weight)` for every pair `i < j`.
    pub edges: Vec<(u32, u32, f64)>,
}

impl NameGraph {
    pub fn new(code: &str, names: impl IntoIterator<Item = String>) -> Self {
        let names: Vec<String> = names
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let norm: Vec<String> = names.iter().map(|n| normalize_name(n)).collect();
        let edges = (0..names.len())
            .into_par_iter()
            .flat_map_iter(|i| {
                let norm = &norm;
                (i + 1..norm.len()).map(move |j| {
                    (
                        i as u32,
                        j as u32,
                        similarity_normalized(&norm[i], &norm[j]),
                    )
                })
            })
            .collect();
        Self {
            code: code.to_string(),
            names,
            edges,
        }
    }

    /// Connected components after removing edges lighter than `threshold`,
    /// largest first, ties by smallest member name. Ids are `code#k`.
    pub fn components(&self, threshold: f64) -> Vec<Component> {
        let mut uf = UnionFind::new(self.names.len());
        for &(i, j, w) in &self.edges {
            if w >= threshold {
                uf.union(i as usize, j as usize);
            }
        }
        let mut groups: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for (i, name) in self.names.iter().enumerate() {
            groups.entry(uf.find(i)).or_default().push(name.clone());
        }
        let mut parts: Vec<Vec<String>> = groups.into_values().collect();
        parts.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a[0].cmp(&b[0])));
        parts
            .into_iter()
            .enumerate()
            .map(|(k, names)| Component {
                entity_id: format!("{}#{k}", self.code),
                code: self.code.clone(),
                names,
            })
            .collect()
    }
}

/// A group of names taken to denote one entity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub entity_id: String,
    pub code: String,
    /// Sorted member names.
    pub names: Vec<String>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller root wins so component roots are stable
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// One graph per assignee code, in code order.
pub fn build_name_graphs(pairs: &[DwpiAssignee]) -> Vec<NameGraph> {
    let mut by_code: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for p in pairs {
        by_code
            .entry(p.code.as_str())
            .or_default()
            .insert(p.name.as_str());
    }
    by_code
        .into_iter()
        .map(|(code, names)| NameGraph::new(code, names.into_iter().map(str::to_string)))
        .collect()
}

/// `p0`-th percentile of all edge weights across every code. With no edges
/// at all nothing can be pruned and the result is 0.
pub fn edge_threshold(graphs: &[NameGraph], p0: f64) -> f64 {
    let weights: Vec<f64> = graphs
        .iter()
        .flat_map(|g| g.edges.iter().map(|e| e.2))
        .collect();
    if weights.is_empty() {
        0.0
    } else {
        stats::percentile(&weights, p0)
    }
}

/// Components of every graph at one threshold, in code order.
pub fn components_at(graphs: &[NameGraph], threshold: f64) -> Vec<Component> {
    graphs
        .iter()
        .flat_map(|g| g.components(threshold))
        .collect()
}

/// Splits a single code using only that code's edge distribution.
pub fn split_code(code: &str, names: &[String], p0: f64) -> Vec<Component> {
    let g = NameGraph::new(code, names.iter().cloned());
    let t = edge_threshold(std::slice::from_ref(&g), p0);
    g.components(t)
}

/// Preference order of the code form: standard (`C`), non-standard (`N`),
/// anything else.
fn code_form_rank(code: &str) -> u8 {
    let tail = code.rsplit(['|', '-']).next().unwrap_or("");
    match tail.chars().next() {
        Some('C') if tail.len() < code.len() => 0,
        Some('N') if tail.len() < code.len() => 1,
        _ => 2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct CandidateScore {
    max: f64,
    mean: f64,
}

fn score_against(name: &str, comp: &Component) -> CandidateScore {
    let norm = normalize_name(name);
    let sims: Vec<f64> = comp
        .names
        .iter()
        .filter(|n| n.as_str() != name)
        .map(|n| similarity_normalized(&norm, &normalize_name(n)))
        .collect();
    CandidateScore {
        max: sims.iter().copied().fold(0.0, f64::max),
        mean: stats::mean(&sims).unwrap_or(0.0),
    }
}

/// Picks the component a name belongs to among several candidates:
/// highest maximum similarity to the other members, then highest mean
/// similarity, then code form `C` over `N` over others, then smallest id.
pub fn resolve_name<'a>(name: &str, candidates: &[&'a Component]) -> Option<&'a Component> {
    if candidates.len() <= 1 {
        return candidates.first().copied();
    }
    let scored: Vec<(CandidateScore, &Component)> = candidates
        .iter()
        .map(|&c| (score_against(name, c), c))
        .collect();
    scored
        .into_iter()
        .max_by(|(sa, ca), (sb, cb)| {
            sa.max
                .total_cmp(&sb.max)
                .then(sa.mean.total_cmp(&sb.mean))
                .then(code_form_rank(&cb.code).cmp(&code_form_rank(&ca.code)))
                .then_with(|| cb.entity_id.cmp(&ca.entity_id))
        })
        .map(|(_, c)| c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(id: &str, code: &str, names: &[&str]) -> Component {
        Component {
            entity_id: id.into(),
            code: code.into(),
            names: names.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn single_name_is_one_component() {
        let c = split_code("ABCD|C", &["ABCD CORP".into()], 99.0);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].entity_id, "ABCD|C#0");
    }

    #[test]
    fn identical_pair_and_outsider() {
        let g = NameGraph::new(
            "XX|N",
            [
                "ZORVAK CO".to_string(),
                "ZORVAK CO".into(),
                "MELTRIX INDUSTRIES".into(),
            ],
        );
        // duplicate names collapse into one node
        assert_eq!(g.names.len(), 2);
        let g = NameGraph::new(
            "XX|N",
            [
                "ZORVAK CO LTD".to_string(),
                "ZORVAK CO".into(),
                "MELTRIX INDUSTRIES".into(),
            ],
        );
        let parts = g.components(99.0);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].names, vec!["ZORVAK CO", "ZORVAK CO LTD"]);
        assert_eq!(parts[1].entity_id, "XX|N#1");
    }

    #[test]
    fn shared_code_splits_distinct_universities() {
        // a global edge distribution dominated by near-duplicate names
        let mut pairs = vec![
            DwpiAssignee {
                name: "UNIV HEIBEI NORMAL".into(),
                code: "UYHE|N".into(),
            },
            DwpiAssignee {
                name: "UNIV HERIOT-WATT".into(),
                code: "UYHE|N".into(),
            },
        ];
        for (k, base) in ["SAMSUNG SDI", "TOKYO ELECTRIC POWER", "NOKIA TECHNOLOGIES"]
            .iter()
            .enumerate()
        {
            for suffix in ["", " CO", " CO LTD", " INC"] {
                pairs.push(DwpiAssignee {
                    name: format!("{base}{suffix}"),
                    code: format!("C{k}|C"),
                });
            }
        }
        let graphs = build_name_graphs(&pairs);
        let t = edge_threshold(&graphs, 99.0);
        let uyhe = graphs.iter().find(|g| g.code == "UYHE|N").unwrap();
        assert_eq!(uyhe.components(t).len(), 2);
    }

    #[test]
    fn resolve_cascade() {
        let only = comp("A|C#0", "A|C", &["FOO CO", "FOO"]);
        assert_eq!(resolve_name("FOO", &[&only]).unwrap().entity_id, "A|C#0");

        // rule 1: the better maximum wins
        let cands = [
            comp("A|N#0", "A|N", &["ACME ROBOTICS", "ACME ROBOTIKS INC"]),
            comp("B|C#0", "B|C", &["ACME ROBOTICS", "ACME ROBOTICS CO"]),
        ];
        assert_eq!(
            resolve_name("ACME ROBOTICS", &[&cands[0], &cands[1]])
                .unwrap()
                .entity_id,
            "B|C#0"
        );

        // rules 1 and 2 tie: standard form beats non-standard
        let cands = [
            comp("A|N#0", "A|N", &["ACME", "ACME CO"]),
            comp("B|C#0", "B|C", &["ACME", "ACME CO"]),
        ];
        assert_eq!(
            resolve_name("ACME", &[&cands[0], &cands[1]])
                .unwrap()
                .entity_id,
            "B|C#0"
        );

        // everything ties: smallest id
        let cands = [
            comp("Z|C#0", "Z|C", &["ACME", "ACME CO"]),
            comp("B|C#1", "B|C", &["ACME", "ACME CO"]),
        ];
        assert_eq!(
            resolve_name("ACME", &[&cands[0], &cands[1]])
                .unwrap()
                .entity_id,
            "B|C#1"
        );
    }

    #[test]
    fn code_forms() {
        assert_eq!(code_form_rank("TOEP|C0"), 0);
        assert_eq!(code_form_rank("UYHE|N"), 1);
        assert_eq!(code_form_rank("SMSU-C"), 0);
        assert_eq!(code_form_rank("INDIVIDUAL"), 2);
    }
}
