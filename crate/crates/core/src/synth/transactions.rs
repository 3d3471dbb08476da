use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::words::pseudo_word;
use crate::entity::{
    normalize_name, Category, EntityInfo, IdentityRegistry, PatentEntities, REGISTRY_VERSION,
};
use crate::ingest::{DwpiAssignee, OriginalAssignee, PatentRecord};
use crate::transactions::{format_reassignment_field, AliasMap, ReassignmentEntry};

/// Licensees with their (corporate-origin, university-origin) instance counts.
pub const REFERENCE_LICENSEES: &[(&str, Category, usize, usize)] = &[
    ("US DEPARTMENT OF ENERGY", Category::Others, 281, 130),
    ("NATIONAL SCIENCE FOUNDATION", Category::Others, 24, 367),
    ("NATIONAL INSTITUTES OF HEALTH", Category::Others, 8, 91),
    (
        "ADVANCED GREEN TECHNOLOGIES LLC",
        Category::Corporation,
        94,
        0,
    ),
    ("NAVY", Category::Others, 10, 72),
    ("NASA", Category::Others, 3, 64),
    ("AIR FORCE", Category::Others, 25, 15),
    ("BLACK DIAMOND STRUCTURES LLC", Category::Corporation, 23, 0),
    ("ARMY", Category::Others, 4, 15),
    ("DARPA", Category::Others, 2, 6),
    ("MANOMECH INC", Category::Corporation, 2, 1),
    (
        "UNITED STATES PATENT AND TRADEMARK OFFICE",
        Category::Others,
        1,
        1,
    ),
    ("UNIV PENNSYLVANIA", Category::University, 0, 2),
    ("LOCKHEED MARTIN CORPORATION", Category::Corporation, 1, 0),
    (
        "SUNEDISON SEMICONDUCTOR TECHNOLOGY PTE LTD",
        Category::Corporation,
        1,
        0,
    ),
    ("INTELLECTUAL DISCOVERY CO LTD", Category::Corporation, 0, 1),
];

/// Top licensors of corporate patents and the number of licensed patents
/// each solely owns.
pub const REFERENCE_CORPORATE_LICENSORS: &[(&str, f64)] = &[
    ("MCALISTER TECHNOLOGIES LLC", 93.0),
    ("UCHICAGO ARGONNE LLC", 63.0),
    ("UT-BATTELLE LLC", 52.0),
    ("LAWRENCE LIVERMORE NAT LAB", 30.0),
    ("INT BUSINESS MACHINES CORP", 27.0),
    ("BROOKHAVEN SCI ASSOC", 18.0),
    ("NANOTEK INSTR INC", 15.0),
    ("SANDIA CORP", 15.0),
    ("GEORGIA TECH RES CORP", 14.0),
    ("LOS ALAMOS NAT SECURITY LLC", 13.0),
];

/// Top university licensors with their licensed-patent credit; the
/// half credit comes from one patent shared with another university.
pub const REFERENCE_UNIVERSITY_LICENSORS: &[(&str, f64)] = &[
    ("MASSACHUSETTS INST TECHNOLOGY", 60.0),
    ("UNIV RICE WILLIAM MARSH", 59.0),
    ("UNIV NORTHWESTERN", 55.5),
    ("UNIV HENGYANG NORMAL", 43.0),
    ("BATTELLE MEMORIAL INST", 37.0),
    ("CALIFORNIA INST OF TECHNOLOGY", 27.0),
    ("HARVARD COLLEGE", 26.0),
    ("UNIV PRINCETON", 25.0),
    ("UNIV FLORIDA RES FOUND INC", 20.0),
    ("UNIV PENNSYLVANIA", 20.0),
];

/// Per-origin plan of the transaction fixture.
#[derive(Debug, Clone, PartialEq)]
pub struct OriginPlan {
    pub category: Category,
    pub patents: usize,
    pub changed: usize,
    /// Reassignment count by destination category.
    pub to_corporation: usize,
    pub to_university: usize,
    pub to_others: usize,
    /// Times licensed → number of patents.
    pub license_histogram: Vec<(usize, usize)>,
}

impl OriginPlan {
    pub fn transactions(&self) -> usize {
        self.to_corporation + self.to_university + self.to_others
    }
}

pub fn reference_plans() -> [OriginPlan; 3] {
    [
        OriginPlan {
            category: Category::Corporation,
            patents: 15_650,
            changed: 2_865,
            to_corporation: 3_119,
            to_university: 518,
            to_others: 171,
            license_histogram: vec![(1, 430), (2, 20), (3, 3)],
        },
        OriginPlan {
            category: Category::University,
            patents: 3_807,
            changed: 663,
            to_corporation: 361,
            to_university: 288,
            to_others: 144,
            license_histogram: vec![(1, 512), (2, 78), (3, 21), (4, 7), (6, 1)],
        },
        OriginPlan {
            category: Category::Others,
            patents: 400,
            changed: 50,
            to_corporation: 30,
            to_university: 10,
            to_others: 10,
            license_histogram: vec![],
        },
    ]
}

/// Corporate-to-corporate transfers planted between members of one alias
/// family; they count as internal.
pub const INTERNAL_TRANSFERS: usize = 79;
pub const INTERNAL_FAMILY: &str = "KESTREL GROUP";
const FAMILY_SIZE: usize = 6;

#[derive(Debug, Clone)]
pub struct TransactionFixture {
    pub records: Vec<PatentRecord>,
    pub registry: IdentityRegistry,
    pub aliases: AliasMap,
    pub plans: [OriginPlan; 3],
}

struct Builder {
    registry: IdentityRegistry,
    taken: BTreeSet<String>,
}

impl Builder {
    fn add(&mut self, name: &str, category: Category) -> String {
        if let Some(e) = self.registry.names.get(name) {
            return e.clone();
        }
        let code = format!("FX{:04}|C", self.registry.entities.len());
        let id = format!("{code}#0");
        self.registry.entities.insert(
            id.clone(),
            EntityInfo {
                code,
                names: vec![name.to_string()],
                category,
                region: "US".into(),
            },
        );
        self.registry.names.insert(name.to_string(), id.clone());
        self.taken.insert(normalize_name(name));
        id
    }

    /// Entity with a made-up name that neither contains nor is contained in
    /// any name already present.
    fn fresh<R: Rng>(&mut self, rng: &mut R, category: Category) -> String {
        loop {
            let core = format!("{} {}", pseudo_word(rng, 3, 4), pseudo_word(rng, 3, 4));
            let name = match category {
                Category::Corporation => format!(
                    "{core} {}",
                    ["CORP", "INC", "LLC", "CO LTD"].choose(rng).unwrap()
                ),
                Category::University => format!("UNIV {core}"),
                Category::Others => format!("{core} INSTITUTE"),
            };
            let norm = normalize_name(&name);
            let mut sorted: Vec<&str> = norm.split(' ').collect();
            sorted.sort_unstable();
            let sorted = sorted.join(" ");
            let clash = self.taken.iter().any(|t| {
                norm.contains(t.as_str()) || t.contains(&norm) || sorted.contains(t.as_str())
            });
            if !clash {
                return self.add(&name, category);
            }
        }
    }

    fn name(&self, entity: &str) -> &str {
        &self.registry.entities[entity].names[0]
    }
}

fn event(assignee: &str, assignor: &str, year: i32, reasons: &str) -> ReassignmentEntry {
    ReassignmentEntry {
        assignee: assignee.to_string(),
        assignor: assignor.to_string(),
        assignee_date: format!("{year}0301"),
        assignee_year: year,
        document_number: String::new(),
        document_date: format!("{year}0315"),
        document_year: year.to_string(),
        reasons: reasons.to_string(),
        legal_agent: String::new(),
    }
}

/// US patents, an explicit-category registry and raw reassignment fields
/// whose statistics come out as the planted per-origin counts.
///
/// Corporate and university origins follow the reference plans;
/// a small others-origin group with no licenses rounds out the scope.
pub fn reference_transaction_fixture(seed: u64) -> TransactionFixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = Builder {
        registry: IdentityRegistry {
            version: REGISTRY_VERSION,
            p0: 0.0,
            edge_threshold: 0.0,
            match_threshold: Some(90.0),
            names: BTreeMap::new(),
            entities: BTreeMap::new(),
            patents: BTreeMap::new(),
        },
        taken: BTreeSet::new(),
    };
    let licensees: Vec<(String, usize, usize)> = REFERENCE_LICENSEES
        .iter()
        .map(|&(n, c, corp, univ)| (b.add(n, c), corp, univ))
        .collect();
    let corp_licensors: Vec<(String, f64)> = REFERENCE_CORPORATE_LICENSORS
        .iter()
        .map(|&(n, c)| (b.add(n, Category::Corporation), c))
        .collect();
    let univ_licensors: Vec<(String, f64)> = REFERENCE_UNIVERSITY_LICENSORS
        .iter()
        .map(|&(n, c)| (b.add(n, Category::University), c))
        .collect();
    let mut family = Vec::new();
    for _ in 0..FAMILY_SIZE {
        family.push(b.fresh(&mut rng, Category::Corporation));
    }
    let pools: BTreeMap<Category, Vec<String>> = [
        (Category::Corporation, 80),
        (Category::University, 40),
        (Category::Others, 12),
    ]
    .into_iter()
    .map(|(c, n)| (c, (0..n).map(|_| b.fresh(&mut rng, c)).collect()))
    .collect();
    let northwestern_partner = pools[&Category::University][0].clone();

    let plans = reference_plans();
    let mut records = Vec::new();
    let mut serial = 0usize;
    for plan in &plans {
        let pool = &pools[&plan.category];
        // owners of the licensed patents, in slot order
        let mut licensed_owners: Vec<Vec<String>> = Vec::new();
        let top: &[(String, f64)] = match plan.category {
            Category::Corporation => &corp_licensors,
            Category::University => &univ_licensors,
            Category::Others => &[],
        };
        for (e, credit) in top {
            for _ in 0..credit.floor() as usize {
                licensed_owners.push(vec![e.clone()]);
            }
            if credit.fract() > 0.0 {
                licensed_owners.push(vec![e.clone(), northwestern_partner.clone()]);
            }
        }
        let licensed_total: usize = plan.license_histogram.iter().map(|h| h.1).sum();
        let mut k = 1;
        while licensed_owners.len() < licensed_total {
            licensed_owners.push(vec![pool[k % pool.len()].clone()]);
            k += 1;
        }

        let mut times: Vec<usize> = plan
            .license_histogram
            .iter()
            .flat_map(|&(t, n)| std::iter::repeat(t).take(n))
            .collect();
        times.shuffle(&mut rng);
        // licensees per instance; licensees that are also owners come first so
        // they land on patents of the first licensor instead of their own
        let col = |l: &(String, usize, usize)| match plan.category {
            Category::Corporation => l.1,
            Category::University => l.2,
            Category::Others => 0,
        };
        let mut instance_licensees: Vec<&str> = Vec::new();
        let owning: BTreeSet<&str> = licensed_owners
            .iter()
            .flatten()
            .map(String::as_str)
            .collect();
        for l in licensees.iter().filter(|l| owning.contains(l.0.as_str())) {
            instance_licensees.extend(std::iter::repeat(l.0.as_str()).take(col(l)));
        }
        let mut rest: Vec<&str> = Vec::new();
        for l in licensees.iter().filter(|l| !owning.contains(l.0.as_str())) {
            rest.extend(std::iter::repeat(l.0.as_str()).take(col(l)));
        }
        rest.shuffle(&mut rng);
        instance_licensees.extend(rest);
        assert_eq!(
            instance_licensees.len(),
            times.iter().sum::<usize>(),
            "licensee table disagrees with histogram"
        );

        // reassignment chains: `changed` patents, the surplus transactions
        // become second events on the first patents
        let internal = if plan.category == Category::Corporation {
            INTERNAL_TRANSFERS
        } else {
            0
        };
        let mut targets: Vec<Category> = std::iter::repeat(Category::Corporation)
            .take(plan.to_corporation - internal)
            .chain(std::iter::repeat(Category::University).take(plan.to_university))
            .chain(std::iter::repeat(Category::Others).take(plan.to_others))
            .collect();
        targets.shuffle(&mut rng);
        let external_changed = plan.changed - internal;
        let doubles = plan.transactions() - plan.changed;

        let mut next_target: BTreeMap<Category, usize> = BTreeMap::new();
        let mut target_iter = targets.into_iter();
        let mut license_slot = 0usize;
        let mut instance = 0usize;
        for i in 0..plan.patents {
            let year = 2005 + (i % 12) as i32;
            let mut entries = Vec::new();
            let owners: Vec<String> = if i < licensed_owners.len() {
                licensed_owners[i].clone()
            } else if i >= plan.patents - internal {
                vec![family[i % FAMILY_SIZE].clone()]
            } else {
                vec![pool[i % pool.len()].clone()]
            };
            if i < licensed_owners.len() {
                for _ in 0..times[license_slot] {
                    let l = instance_licensees[instance];
                    entries.push(event(b.name(l), b.name(&owners[0]), year + 1, "LICENSE"));
                    instance += 1;
                }
                license_slot += 1;
            }
            let changed_slot = i
                .checked_sub(licensed_owners.len())
                .filter(|&s| s < external_changed);
            if let Some(s) = changed_slot {
                let hops = if s < doubles { 2 } else { 1 };
                let mut holder = owners[0].clone();
                for h in 0..hops {
                    let cat = target_iter.next().expect("enough planned transactions");
                    let cands = &pools[&cat];
                    let slot = next_target.entry(cat).or_default();
                    let mut to = cands[*slot % cands.len()].clone();
                    *slot += 1;
                    if to == holder {
                        to = cands[*slot % cands.len()].clone();
                        *slot += 1;
                    }
                    entries.push(event(
                        b.name(&to),
                        b.name(&holder),
                        year + 2 + h,
                        "ASSIGNMENT OF ASSIGNORS INTEREST",
                    ));
                    holder = to;
                }
            }
            if i >= plan.patents - internal {
                let to = &family[(i + 1) % FAMILY_SIZE];
                entries.push(event(
                    b.name(to),
                    b.name(&owners[0]),
                    year + 2,
                    "ASSIGNMENT OF ASSIGNORS INTEREST",
                ));
            }

            serial += 1;
            let app_id = format!("US{year}{serial:07}A");
            let pool_names: Vec<DwpiAssignee> = owners
                .iter()
                .map(|e| DwpiAssignee {
                    name: b.name(e).to_string(),
                    code: b.registry.entities[e].code.clone(),
                })
                .collect();
            records.push(PatentRecord {
                application_id: app_id.clone(),
                year,
                ipc_subclasses: vec!["C01B".into()],
                merged_publication_ids: vec![format!("US{year}{serial:07}A1")],
                title: String::new(),
                abstract_text: String::new(),
                original_assignees: pool_names
                    .iter()
                    .map(|d| OriginalAssignee {
                        name: d.name.clone(),
                        address: "WASHINGTON, DC, US".into(),
                    })
                    .collect(),
                assignee_name_pool: pool_names,
                us_reassignment_field: (!entries.is_empty())
                    .then(|| format_reassignment_field(&entries)),
            });
            b.registry.patents.insert(
                app_id,
                PatentEntities {
                    entities: owners,
                    region: "US".into(),
                    year,
                },
            );
        }
        assert!(
            target_iter.next().is_none(),
            "every planned transaction is used"
        );
        assert_eq!(instance, instance_licensees.len());
    }

    let family_names: Vec<&str> = family.iter().map(|e| b.name(e)).collect();
    let aliases = AliasMap::parse(&format!("{INTERNAL_FAMILY} = {}", family_names.join("; ")))
        .expect("alias line");
    TransactionFixture {
        records,
        registry: b.registry,
        aliases,
        plans,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entity::Lexicon;
    use crate::transactions::{patent_origins, resolve_events, transaction_stats};

    #[test]
    fn fixture_reproduces_plan() {
        let fx = reference_transaction_fixture(11);
        let mut reg = fx.registry.clone();
        let n_entities = reg.entities.len();
        let events = resolve_events(
            &fx.records,
            &mut reg,
            90.0,
            &Lexicon::default(),
            &fx.aliases,
        )
        .unwrap();
        assert_eq!(
            reg.entities.len(),
            n_entities,
            "every party resolves to a planted entity"
        );
        let origins = patent_origins(&reg, &fx.records);
        let stats = transaction_stats(&events, &origins, &reg, 10);
        for plan in &fx.plans {
            let r = stats.all.reassignment.origin(plan.category);
            assert_eq!(
                (r.total, r.changed, r.transactions),
                (plan.patents, plan.changed, plan.transactions())
            );
        }
        let corp = stats
            .external_only
            .reassignment
            .origin(Category::Corporation);
        assert_eq!(corp.transactions, 3_808 - INTERNAL_TRANSFERS);
        assert_eq!(stats.all.licensing.total_instances, 1_244);
    }
}
