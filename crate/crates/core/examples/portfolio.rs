//! Portfolio statistics on a synthetic entity population: area shares,
//! region rankings, entropy trajectories, quartile groups and the
//! vector field of their year-over-year movement.

use patlas::portfolio::{
    entropy, heatmap, log_entropy, proportions_timeseries, quartile_groups, region_rankings,
    trajectories, vector_field, GroupBy, QuartileGroup, XAxis, YAxis,
};
use patlas::synth::{entity_population, PopulationSpec};

fn main() -> patlas::Result<()> {
    println!(
        "entropy of an even split over 7 areas: {:.3}",
        entropy(&[1.0 / 7.0; 7])
    );
    println!("entropy of a single area: {:.3}", entropy(&[1.0, 0.0, 0.0]));

    let data = entity_population(&PopulationSpec::default());
    for row in proportions_timeseries(&data, GroupBy::Category)
        .iter()
        .filter(|r| r.year == 2017)
    {
        println!("{row:?}");
    }
    for r in region_rankings(&data, None, 3).iter().rev().take(3) {
        println!("{} #{} {} ({})", r.year, r.rank, r.region, r.count);
    }

    let trajs = trajectories(&data);
    let groups = quartile_groups(&trajs, 2017)?;
    for group in [
        QuartileGroup::Lower,
        QuartileGroup::Inter,
        QuartileGroup::Upper,
    ] {
        let members: Vec<_> = trajs
            .iter()
            .filter(|t| groups.get(&t.entity) == Some(&group))
            .collect();
        let field = vector_field(
            members.iter().copied(),
            XAxis::RelativeYear,
            YAxis::Entropy,
            10,
            2004,
        );
        let dy: f64 = field
            .cells
            .iter()
            .map(|c| c.dy * c.count as f64)
            .sum::<f64>()
            / field.total_vectors.max(1) as f64;
        println!(
            "{}: {} entities, mean entropy step {dy:+.4}",
            group.as_str(),
            members.len()
        );
    }

    let points: Vec<(f64, f64)> = trajs
        .iter()
        .flat_map(|t| {
            t.points
                .iter()
                .map(|p| (p.credit.log10(), log_entropy(p.entropy, 1e-3)))
        })
        .collect();
    let h = heatmap(&points, 20, 1e-3)?;
    println!("heat map over {} trajectory points", h.total());
    Ok(())
}
