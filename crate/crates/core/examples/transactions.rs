//! Parses US reassignment fields, resolves both parties of every event and
//! tabulates ownership changes and licensing by origin category.

use patlas::entity::{Category, Lexicon};
use patlas::report::transactions;
use patlas::synth::reference_transaction_fixture;
use patlas::transactions::parse_reassignment_field;

fn main() -> patlas::Result<()> {
    let field = "FALCON CORP | KESTREL UNIV | 2012-03-01 | 2012 | 028114 | 2012-03-05 | 2012 | \
                 ASSIGNMENT OF ASSIGNORS INTEREST | SMITH LLP;;\
                 HERON INC | FALCON CORP | 2015-06-30 | 2015 | 036001 | 2015-07-02 | 2015 | \
                 LICENSE | DOE LLP";
    for e in parse_reassignment_field(field)? {
        println!(
            "{} -> {} in {}, license: {}",
            e.assignor,
            e.assignee,
            e.assignee_year,
            e.is_license()
        );
    }

    let mut fx = reference_transaction_fixture(1);
    let (events, stats) = transactions(
        &fx.records,
        &mut fx.registry,
        &Lexicon::default(),
        &fx.aliases,
        5,
    )?;
    println!("{} events over {} records", events.len(), fx.records.len());
    for (label, block) in [("all", &stats.all), ("external only", &stats.external_only)] {
        println!("{label}:");
        for c in [Category::Corporation, Category::University] {
            let o = block.reassignment.origin(c);
            let pairs: Vec<String> = o
                .pairs
                .iter()
                .map(|p| format!("{} {:.1}%", p.to.as_str(), p.pct))
                .collect();
            println!(
                "  {}: {} of {} changed hands ({:.1}%), {}",
                c.as_str(),
                o.changed,
                o.total,
                o.changed_pct,
                pairs.join(", ")
            );
        }
        println!("  {} license instances", block.licensing.total_instances);
    }
    Ok(())
}
