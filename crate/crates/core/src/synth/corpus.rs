use std::collections::{BTreeMap, BTreeSet};

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::names::{planted_name_families, NameFamilySpec, PlantedIdentity};
use super::words::{ipc_codes, pseudo_word};
use crate::ingest::{DwpiAssignee, OriginalAssignee, RawRecord, MAX_EXPECTED_SUBCLASSES};
use crate::transactions::{format_reassignment_field, ReassignmentEntry};
use crate::{Error, Result};

/// Area vocabularies for the first seven blocks; later blocks get
/// pseudo-words.
pub(crate) const AREA_WORDS: &[&[&str]] = &[
    &["composite", "polymer", "resin", "fiber"],
    &["battery", "lithium", "electrolyte", "anode"],
    &["transistor", "semiconductor", "substrate", "channel"],
    &["sensor", "detection", "biosensor", "probe"],
    &["ink", "conductive", "printing", "paste"],
    &["membrane", "filtration", "water", "desalination"],
    &["catalyst", "oxygen", "reduction", "hydrogen"],
];

const FILLER: &[&str] = &[
    "the",
    "and",
    "for",
    "with",
    "which",
    "comprising",
    "method",
    "thereof",
    "wherein",
];

pub const LICENSEES: &[&str] = &[
    "US DEPARTMENT OF ENERGY",
    "NATIONAL SCIENCE FOUNDATION",
    "NATIONAL INSTITUTES OF HEALTH",
    "NAVY",
    "AIR FORCE",
    "NASA",
];

const CITIES: &[&str] = &["NORTH PARK", "RIVERSIDE", "HILLTOP", "LAKEVIEW", "OLD TOWN"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub n_patents: usize,
    pub g: usize,
    /// Size of the subclass universe, split into `g` contiguous blocks.
    pub n_codes: usize,
    /// Per-code inclusion probability inside the patent's block.
    pub p_in: f64,
    /// Per-code inclusion probability outside it.
    pub p_out: f64,
    pub year_start: i32,
    pub year_end: i32,
    /// Region code and relative weight for assignee headquarters.
    pub regions: Vec<(String, f64)>,
    pub names: NameFamilySpec,
    /// Popularity of identity `r` is proportional to `(r + 1)^-zipf`.
    pub zipf: f64,
    pub coassign_rate: f64,
    pub us_share: f64,
    pub reassign_rate: f64,
    pub license_rate: f64,
    /// Chance of each additional publication of an application.
    pub duplicate_rate: f64,
    pub background_vocab: usize,
    pub words_per_doc: usize,
    /// Chance that a document carries each signature word of its block.
    pub signature_rate: f64,
    pub seed: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        Self {
            n_patents: 2000,
            g: 7,
            n_codes: 70,
            p_in: 0.3,
            p_out: 0.01,
            year_start: 2004,
            year_end: 2017,
            regions: [
                ("CN", 0.4),
                ("US", 0.25),
                ("KR", 0.15),
                ("JP", 0.1),
                ("DE", 0.06),
                ("GB", 0.04),
            ]
            .iter()
            .map(|(r, w)| (r.to_string(), *w))
            .collect(),
            names: NameFamilySpec {
                identities: 150,
                crowded_codes: 0,
                ..NameFamilySpec::default()
            },
            zipf: 1.0,
            coassign_rate: 0.1,
            us_share: 0.3,
            reassign_rate: 0.18,
            license_rate: 0.05,
            duplicate_rate: 0.25,
            background_vocab: 400,
            words_per_doc: 40,
            signature_rate: 0.6,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TransactionTruth {
    pub reassigned_patents: usize,
    pub reassignment_events: usize,
    pub licensed_patents: usize,
    pub license_events: usize,
}

/// Planted answers for a generated corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub seed: u64,
    pub g: usize,
    pub publications: usize,
    pub applications: usize,
    /// Block of every application.
    pub labels: BTreeMap<String, usize>,
    /// Block of every subclass in the universe.
    pub code_blocks: BTreeMap<String, usize>,
    pub identities: Vec<PlantedIdentity>,
    pub identity_regions: Vec<String>,
    /// Planted first assignees (identity ids) of every application.
    pub first_assignees: BTreeMap<String, Vec<usize>>,
    pub signature_words: Vec<Vec<String>>,
    pub transactions: TransactionTruth,
}

impl GroundTruth {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub records: Vec<RawRecord>,
    pub truth: GroundTruth,
}

fn check_unit(what: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{what} = {p} outside [0, 1]")))
    }
}

impl CorpusSpec {
    pub fn validate(&self) -> Result<()> {
        if self.g == 0 || self.n_codes < self.g || self.n_patents < self.g {
            return Err(Error::invalid(
                "need g >= 1, n_codes >= g and n_patents >= g",
            ));
        }
        if self.year_start > self.year_end {
            return Err(Error::invalid("year_start after year_end"));
        }
        if self.regions.is_empty()
            || self
                .regions
                .iter()
                .any(|(r, w)| r.len() != 2 || !(*w > 0.0))
        {
            return Err(Error::invalid(
                "regions need two-letter codes with positive weights",
            ));
        }
        if self.names.identities == 0 {
            return Err(Error::invalid("at least one identity is required"));
        }
        if self.background_vocab == 0 {
            return Err(Error::invalid("background vocabulary is empty"));
        }
        for (what, p) in [
            ("p_in", self.p_in),
            ("p_out", self.p_out),
            ("coassign_rate", self.coassign_rate),
            ("us_share", self.us_share),
            ("reassign_rate", self.reassign_rate),
            ("license_rate", self.license_rate),
            ("signature_rate", self.signature_rate),
        ] {
            check_unit(what, p)?;
        }
        if !(0.0..1.0).contains(&self.duplicate_rate) {
            return Err(Error::invalid("duplicate_rate must lie in [0, 1)"));
        }
        Ok(())
    }
}

fn signature_words<R: Rng>(rng: &mut R, g: usize) -> Vec<Vec<String>> {
    (0..g)
        .map(|b| match AREA_WORDS.get(b) {
            Some(ws) => ws.iter().map(|w| w.to_string()).collect(),
            None => (0..4)
                .map(|_| pseudo_word(rng, 3, 4).to_lowercase())
                .collect(),
        })
        .collect()
}

fn text<R: Rng>(rng: &mut R, n: usize, own: &[String], rate: f64, background: &[String]) -> String {
    let mut words: Vec<&str> = Vec::with_capacity(n + own.len());
    for _ in 0..n {
        if rng.gen_bool(0.2) {
            words.push(FILLER.choose(rng).unwrap());
        } else {
            words.push(background.choose(rng).unwrap());
        }
    }
    for w in own {
        if rng.gen_bool(rate) {
            let at = rng.gen_range(0..=words.len());
            words.insert(at, w);
        }
    }
    words.join(" ")
}

fn entry(
    assignee: &str,
    assignor: &str,
    year: i32,
    reasons: &str,
    doc: usize,
) -> ReassignmentEntry {
    ReassignmentEntry {
        assignee: assignee.to_string(),
        assignor: assignor.to_string(),
        assignee_date: format!("{year}0115"),
        assignee_year: year,
        document_number: format!("{doc:07}"),
        document_date: format!("{year}0201"),
        document_year: year.to_string(),
        reasons: reasons.to_string(),
        legal_agent: String::new(),
    }
}

/// Generates raw publication records with planted block structure,
/// assignee identities, regions, signature words and US transactions.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<SyntheticCorpus> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let names = planted_name_families(&NameFamilySpec {
        seed: spec.seed,
        ..spec.names.clone()
    })?;
    let identities = names.identities;
    let region_pick =
        WeightedIndex::new(spec.regions.iter().map(|r| r.1)).expect("weights checked");
    let identity_regions: Vec<String> = identities
        .iter()
        .map(|_| spec.regions[region_pick.sample(&mut rng)].0.clone())
        .collect();
    let popularity =
        WeightedIndex::new((0..identities.len()).map(|r| ((r + 1) as f64).powf(-spec.zipf)))
            .map_err(|e| Error::invalid(format!("identity weights: {e}")))?;

    let codes = ipc_codes(spec.n_codes);
    let code_block = super::block_labels(spec.n_codes, spec.g);
    let block_codes: Vec<Vec<usize>> = (0..spec.g)
        .map(|b| (0..spec.n_codes).filter(|&j| code_block[j] == b).collect())
        .collect();
    let signatures = signature_words(&mut rng, spec.g);
    let background: Vec<String> = {
        let mut seen = BTreeSet::new();
        while seen.len() < spec.background_vocab {
            seen.insert(pseudo_word(&mut rng, 2, 4).to_lowercase());
        }
        seen.into_iter().collect()
    };
    let years: Vec<i32> = (spec.year_start..=spec.year_end).collect();
    let year_pick = WeightedIndex::new(
        years
            .iter()
            .map(|y| ((y - spec.year_start + 1) as f64).powf(1.5)),
    )
    .expect("years");

    struct Draft {
        block: usize,
        year: i32,
        codes: BTreeSet<usize>,
        owners: Vec<usize>,
    }
    let mut drafts: Vec<Draft> = Vec::with_capacity(spec.n_patents);
    let patent_block = super::block_labels(spec.n_patents, spec.g);
    for &block in &patent_block {
        let mut set = BTreeSet::new();
        for j in 0..spec.n_codes {
            let p = if code_block[j] == block {
                spec.p_in
            } else {
                spec.p_out
            };
            if rng.gen_bool(p) {
                set.insert(j);
            }
        }
        if set.is_empty() {
            set.insert(*block_codes[block].choose(&mut rng).unwrap());
        }
        while set.len() > MAX_EXPECTED_SUBCLASSES {
            let drop = *set.iter().nth(rng.gen_range(0..set.len())).unwrap();
            set.remove(&drop);
        }
        let mut owners = vec![popularity.sample(&mut rng)];
        if rng.gen_bool(spec.coassign_rate) {
            let other = popularity.sample(&mut rng);
            if other != owners[0] {
                owners.push(other);
            }
        }
        drafts.push(Draft {
            block,
            year: years[year_pick.sample(&mut rng)],
            codes: set,
            owners,
        });
    }
    // every code in the universe is used at least once
    let mut used = vec![false; spec.n_codes];
    for d in &drafts {
        for &j in &d.codes {
            used[j] = true;
        }
    }
    for j in (0..spec.n_codes).filter(|&j| !used[j]) {
        let b = code_block[j];
        let start = rng.gen_range(0..drafts.len());
        let pos = (0..drafts.len())
            .map(|k| (start + k) % drafts.len())
            .find(|&i| drafts[i].block == b && drafts[i].codes.len() < MAX_EXPECTED_SUBCLASSES)
            .or_else(|| {
                (0..drafts.len()).find(|&i| drafts[i].codes.len() < MAX_EXPECTED_SUBCLASSES)
            })
            .ok_or_else(|| Error::invalid("not enough room to place every subclass"))?;
        drafts[pos].codes.insert(j);
    }

    let mut records = Vec::new();
    let mut labels = BTreeMap::new();
    let mut first_assignees = BTreeMap::new();
    let mut tx = TransactionTruth::default();
    let mut doc_no = 0usize;
    for (i, d) in drafts.iter().enumerate() {
        let lead_region = &identity_regions[d.owners[0]];
        let us = rng.gen_bool(spec.us_share);
        let prefix = if us { "US" } else { lead_region.as_str() };
        let app_id = format!("{prefix}{}{i:06}A", d.year);
        labels.insert(app_id.clone(), d.block);
        first_assignees.insert(app_id.clone(), d.owners.clone());

        let original: Vec<OriginalAssignee> = d
            .owners
            .iter()
            .map(|&o| OriginalAssignee {
                name: identities[o].names.choose(&mut rng).unwrap().clone(),
                address: format!(
                    "{} {}, {}, {}",
                    rng.gen_range(1..400),
                    "MAIN ST",
                    CITIES.choose(&mut rng).unwrap(),
                    identity_regions[o]
                ),
            })
            .collect();
        let title_len = rng.gen_range(4..=8);
        let title = text(
            &mut rng,
            title_len,
            &signatures[d.block][..1],
            spec.signature_rate,
            &background,
        );
        let abstract_text = text(
            &mut rng,
            spec.words_per_doc,
            &signatures[d.block],
            spec.signature_rate,
            &background,
        );

        let reassignment = if us {
            let mut events = Vec::new();
            let mut owner = original[0].name.clone();
            if rng.gen_bool(spec.reassign_rate) {
                tx.reassigned_patents += 1;
                for k in 0..rng.gen_range(1..=2) {
                    let to = &identities[popularity.sample(&mut rng)];
                    let to_name = to.names.choose(&mut rng).unwrap().clone();
                    doc_no += 1;
                    events.push(entry(
                        &to_name,
                        &owner,
                        d.year + 1 + k,
                        "ASSIGNMENT OF ASSIGNORS INTEREST",
                        doc_no,
                    ));
                    tx.reassignment_events += 1;
                    owner = to_name;
                }
            }
            if rng.gen_bool(spec.license_rate) {
                tx.licensed_patents += 1;
                for _ in 0..rng.gen_range(1..=2) {
                    doc_no += 1;
                    let reason = if rng.gen_bool(0.5) {
                        "LICENSE"
                    } else {
                        "CONFIRMATORY LICENSE"
                    };
                    events.push(entry(
                        LICENSEES.choose(&mut rng).unwrap(),
                        &owner,
                        d.year + 2,
                        reason,
                        doc_no,
                    ));
                    tx.license_events += 1;
                }
            }
            (!events.is_empty()).then(|| format_reassignment_field(&events))
        } else {
            None
        };

        let n_pubs = 1 + {
            let mut extra = 0;
            while rng.gen_bool(spec.duplicate_rate) {
                extra += 1;
            }
            extra
        };
        let ipc: Vec<String> = d.codes.iter().map(|&j| codes[j].clone()).collect();
        for k in 0..n_pubs {
            // each publication lists one variant name per owner
            let dwpi: Vec<DwpiAssignee> = d
                .owners
                .iter()
                .map(|&o| DwpiAssignee {
                    name: identities[o].names.choose(&mut rng).unwrap().clone(),
                    code: identities[o].code.clone(),
                })
                .collect();
            let kind = if k == 0 {
                "A1".to_string()
            } else {
                format!("B{k}")
            };
            records.push(RawRecord {
                publication_id: format!("{prefix}{}{i:06}{kind}", d.year + k as i32),
                application_id: app_id.clone(),
                application_year: d.year,
                title: title.clone(),
                abstract_text: abstract_text.clone(),
                ipc_subclasses: ipc.clone(),
                dwpi_assignees: dwpi,
                original_assignees: original.clone(),
                us_reassignment_field: reassignment.clone(),
            });
        }
    }
    records.shuffle(&mut rng);

    let truth = GroundTruth {
        seed: spec.seed,
        g: spec.g,
        publications: records.len(),
        applications: drafts.len(),
        labels,
        code_blocks: codes
            .iter()
            .cloned()
            .zip(code_block.iter().copied())
            .collect(),
        identities,
        identity_regions,
        first_assignees,
        signature_words: signatures,
        transactions: tx,
    };
    Ok(SyntheticCorpus { records, truth })
}

/// Minimal records where `publications` rows collapse to exactly
/// `applications` distinct application ids.
pub fn duplicate_publications(
    applications: usize,
    publications: usize,
    seed: u64,
) -> Result<Vec<RawRecord>> {
    if applications == 0 || publications < applications {
        return Err(Error::invalid("need publications >= applications >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![1usize; applications];
    for _ in applications..publications {
        counts[rng.gen_range(0..applications)] += 1;
    }
    let codes = ipc_codes(20);
    let mut out = Vec::with_capacity(publications);
    for (i, &c) in counts.iter().enumerate() {
        let year = 2004 + (i % 14) as i32;
        for k in 0..c {
            out.push(RawRecord {
                publication_id: format!("US{i:07}P{k}"),
                application_id: format!("US{year}{i:07}A"),
                application_year: year,
                title: String::new(),
                abstract_text: String::new(),
                ipc_subclasses: vec![codes[i % codes.len()].clone()],
                dwpi_assignees: vec![],
                original_assignees: vec![],
                us_reassignment_field: None,
            });
        }
    }
    out.shuffle(&mut rng);
    Ok(out)
}
