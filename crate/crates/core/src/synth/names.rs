use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::words::pseudo_word;
use crate::entity::Category;
use crate::ingest::DwpiAssignee;
use crate::{Error, Result};

const CORP_SUFFIXES: &[&str] = &[
    "", "CO", "CO LTD", "LTD", "INC", "CORP", "LLC", "GMBH", "AG", "PLC",
];
const CORP_WORDS: &[&str] = &[
    "INDUSTRIES",
    "TECHNOLOGY",
    "MATERIALS",
    "ELECTRONICS",
    "CHEMICAL",
    "ENERGY",
    "SYSTEMS",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NameFamilySpec {
    pub identities: usize,
    pub min_variants: usize,
    pub max_variants: usize,
    /// Share of identities whose code is also used by another identity.
    pub shared_code_rate: f64,
    /// Share of identities with one name also filed under a second code.
    pub cross_listed_rate: f64,
    pub university_share: f64,
    /// Per-variant probability of a typo variant (1–2 character edits).
    pub edit_rate: f64,
    /// Codes holding many unrelated one-name assignees.
    pub crowded_codes: usize,
    pub names_per_crowded_code: usize,
    pub seed: u64,
}

impl Default for NameFamilySpec {
    fn default() -> Self {
        Self {
            identities: 500,
            min_variants: 3,
            max_variants: 6,
            shared_code_rate: 0.1,
            cross_listed_rate: 0.05,
            university_share: 0.3,
            edit_rate: 0.25,
            crowded_codes: 5,
            names_per_crowded_code: 360,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedIdentity {
    pub id: usize,
    pub category: Category,
    pub code: String,
    /// The first name is the canonical form.
    pub names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedNames {
    pub identities: Vec<PlantedIdentity>,
    /// Every DWPI (name, code) pair, sorted.
    pub pairs: Vec<DwpiAssignee>,
    /// Names of planted identities; crowded-code filler names are absent.
    pub identity_of: BTreeMap<String, usize>,
}

fn core_tokens<R: Rng>(rng: &mut R, university: bool) -> Vec<String> {
    let n = rng.gen_range(1..=2);
    let mut t: Vec<String> = (0..n).map(|_| pseudo_word(rng, 3, 4)).collect();
    if university {
        t.insert(0, "UNIV".to_string());
    } else if t.len() == 1 || rng.gen_bool(0.5) {
        t.push(CORP_WORDS.choose(rng).unwrap().to_string());
    }
    t
}

fn edit<R: Rng>(rng: &mut R, word: &str) -> String {
    let mut chars: Vec<char> = word.chars().collect();
    for _ in 0..rng.gen_range(1..=2) {
        let i = rng.gen_range(0..chars.len());
        if rng.gen_bool(0.5) && chars.len() > 4 {
            chars.remove(i);
        } else {
            let c = (b'A' + rng.gen_range(0..26)) as char;
            chars[i] = c;
        }
    }
    chars.into_iter().collect()
}

fn variants<R: Rng>(
    rng: &mut R,
    spec: &NameFamilySpec,
    university: bool,
    taken: &BTreeSet<String>,
) -> Vec<String> {
    let core = core_tokens(rng, university);
    let suffix = |rng: &mut R| {
        if university {
            String::new()
        } else {
            CORP_SUFFIXES.choose(rng).unwrap().to_string()
        }
    };
    let join = |tokens: &[String], sfx: &str| {
        let mut s = tokens.join(" ");
        if !sfx.is_empty() {
            s.push(' ');
            s.push_str(sfx);
        }
        s
    };
    let base_suffix = suffix(rng);
    let base = join(&core, &base_suffix);
    let want = rng.gen_range(spec.min_variants..=spec.max_variants);
    let mut out = vec![base];
    let mut tries = 0;
    while out.len() < want && tries < 200 {
        tries += 1;
        let v = if rng.gen_bool(spec.edit_rate) {
            let mut t = core.clone();
            let candidates: Vec<usize> = (0..t.len())
                .filter(|&i| t[i] != "UNIV" && t[i].len() >= 6)
                .collect();
            let Some(&i) = candidates.choose(rng) else {
                continue;
            };
            t[i] = edit(rng, &t[i]);
            join(&t, &base_suffix)
        } else if core.len() > 1 && rng.gen_bool(0.4) {
            let mut t = core.clone();
            t.rotate_left(rng.gen_range(1..core.len()));
            join(&t, &base_suffix)
        } else if university {
            continue;
        } else {
            join(&core, &suffix(rng))
        };
        if !out.contains(&v) && !taken.contains(&v) {
            out.push(v);
        }
    }
    out
}

fn code_for(name: &str, standard: bool, k: usize) -> String {
    let letters: String = name
        .split(' ')
        .find(|w| *w != "UNIV")
        .unwrap_or(name)
        .chars()
        .filter(char::is_ascii_alphabetic)
        .take(4)
        .collect();
    format!("{letters:X<4}{k}|{}", if standard { 'C' } else { 'N' })
}

/// Identities with 3–6 name variants each (suffix changes, token
/// reordering, typos), plus crowded codes of unrelated filler names.
pub fn planted_name_families(spec: &NameFamilySpec) -> Result<PlantedNames> {
    if spec.min_variants == 0 || spec.min_variants > spec.max_variants {
        return Err(Error::invalid("variant range must satisfy 1 <= min <= max"));
    }
    for (what, p) in [
        ("shared_code_rate", spec.shared_code_rate),
        ("cross_listed_rate", spec.cross_listed_rate),
        ("university_share", spec.university_share),
        ("edit_rate", spec.edit_rate),
    ] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(format!("{what} must lie in [0, 1]")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut taken: BTreeSet<String> = BTreeSet::new();
    let mut identities = Vec::with_capacity(spec.identities);
    for id in 0..spec.identities {
        let university = rng.gen_bool(spec.university_share);
        let names = variants(&mut rng, spec, university, &taken);
        taken.extend(names.iter().cloned());
        let code = code_for(&names[0], !university && rng.gen_bool(0.7), id);
        let category = if university {
            Category::University
        } else {
            Category::Corporation
        };
        identities.push(PlantedIdentity {
            id,
            category,
            code,
            names,
        });
    }
    // some identities move under another identity's code
    for id in 0..identities.len() {
        if identities.len() > 1 && rng.gen_bool(spec.shared_code_rate) {
            let other = (id + rng.gen_range(1..identities.len())) % identities.len();
            identities[id].code = identities[other].code.clone();
        }
    }
    let mut pairs: BTreeSet<DwpiAssignee> = BTreeSet::new();
    let mut identity_of = BTreeMap::new();
    for ident in &identities {
        for n in &ident.names {
            pairs.insert(DwpiAssignee {
                name: n.clone(),
                code: ident.code.clone(),
            });
            identity_of.insert(n.clone(), ident.id);
        }
        if identities.len() > 1 && rng.gen_bool(spec.cross_listed_rate) {
            let other = &identities[rng.gen_range(0..identities.len())];
            let n = ident.names.choose(&mut rng).unwrap();
            pairs.insert(DwpiAssignee {
                name: n.clone(),
                code: other.code.clone(),
            });
        }
    }
    for k in 0..spec.crowded_codes {
        let code = format!("ZZ{k:02}|N");
        let mut added = 0;
        while added < spec.names_per_crowded_code {
            let n = format!(
                "{} {}",
                pseudo_word(&mut rng, 2, 2),
                pseudo_word(&mut rng, 2, 3)
            );
            if taken.insert(n.clone()) {
                pairs.insert(DwpiAssignee {
                    name: n,
                    code: code.clone(),
                });
                added += 1;
            }
        }
    }
    Ok(PlantedNames {
        identities,
        pairs: pairs.into_iter().collect(),
        identity_of,
    })
}

/// Share of planted names resolved to their identity's entity.
///
/// Each identity is represented by the entity holding most of its names;
/// when several identities land on the same entity, only the one with the
/// most names there keeps it.
pub fn resolution_accuracy(
    truth: &BTreeMap<String, usize>,
    resolved: &BTreeMap<String, String>,
) -> f64 {
    let mut hits: BTreeMap<usize, BTreeMap<&str, usize>> = BTreeMap::new();
    for (name, &id) in truth {
        if let Some(e) = resolved.get(name) {
            *hits.entry(id).or_default().entry(e.as_str()).or_default() += 1;
        }
    }
    let mut claim: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    let mut home: BTreeMap<usize, &str> = BTreeMap::new();
    for (&id, by_entity) in &hits {
        let (&e, &n) = by_entity
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .expect("identity has names");
        home.insert(id, e);
        let c = claim.entry(e).or_insert((id, n));
        if n > c.1 {
            *c = (id, n);
        }
    }
    let correct = home
        .iter()
        .filter(|(id, e)| claim[*e].0 == **id)
        .map(|(id, e)| hits[id][e])
        .sum::<usize>();
    correct as f64 / truth.len().max(1) as f64
}
