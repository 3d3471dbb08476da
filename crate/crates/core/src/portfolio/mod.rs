//! Technology-area portfolios and how they change.
//!
//! An entity's portfolio is the share of its credit in each area; its
//! diversity is the Shannon entropy (natural log) of those shares, from 0
//! for a single area up to `ln g`.

mod aggregate;
mod dynamics;
mod entropy;

pub use aggregate::{
    join_credits, proportions_timeseries, region_rankings, region_totals, CreditedPatent, GroupBy,
    PortfolioData, ProportionRow, RankingRow,
};
pub use dynamics::{
    avg_log_entropy_curves, density_classes, entity_categories, heatmap, log_entropy,
    quartile_groups, quartile_groups_of, trajectories, vector_field, DensityClass, Heatmap2D,
    PortfolioTrajectory, QuartileGroup, TrajectoryPoint, VectorCell, VectorField, XAxis, YAxis,
    BASE_YEAR, ENTROPY_EPS,
};
pub use entropy::{entropy, PortfolioVector};
