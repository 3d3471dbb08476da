//! Resolves assignee name variants into entities, then credits patents to
//! them and tallies credit by region.

use patlas::entity::{build_registry, categorize_name, similarity, CreditLedger, Lexicon};
use patlas::ingest::merge_applications;
use patlas::report::resolve;
use patlas::synth::{
    generate_corpus, planted_name_families, resolution_accuracy, CorpusSpec, NameFamilySpec,
};

fn main() -> patlas::Result<()> {
    for (a, b) in [
        ("KESTREL ELECTRONICS CO LTD", "KESTREL ELECTRONICS CORP"),
        ("UNIV TSINGHUA", "TSINGHUA UNIVERSITY"),
        ("KESTREL ELECTRONICS", "FALCON CHEMICAL"),
    ] {
        println!("{a:?} vs {b:?}: {:.1}", similarity(a, b)?.value());
    }
    println!("{:?}", categorize_name("UNIV TSINGHUA"));

    let lex = Lexicon::default();
    // crowded codes of unrelated names anchor the edge percentile
    let planted = planted_name_families(&NameFamilySpec {
        seed: 2,
        ..NameFamilySpec::default()
    })?;
    for p0 in [99.0, 90.0] {
        let reg = build_registry(&planted.pairs, p0, &lex)?;
        println!(
            "p0 {p0}: edge threshold {:.1}, {} entities, accuracy {:.3}",
            reg.edge_threshold,
            reg.entities.len(),
            resolution_accuracy(&planted.identity_of, &reg.names)
        );
    }

    let apps = merge_applications(&generate_corpus(&CorpusSpec::default())?.records);
    let (reg, res) = resolve(&apps, 99.0, None, &lex)?;
    println!(
        "corpus: {} entities, match threshold {:.1} ({}), {:?}",
        res.entities, res.match_threshold, res.threshold_source, res.summary
    );

    let ledger = CreditLedger::from_registry(&reg)?;
    let mut regions: Vec<(String, f64)> = ledger.region_totals().into_iter().collect();
    regions.sort_by(|a, b| b.1.total_cmp(&a.1));
    println!("{} credited patents", ledger.credited_patents());
    for (r, c) in regions.iter().take(6) {
        println!("  {r}: {c:.1}");
    }
    Ok(())
}
