//! Diagnostics on assignments: efficiency, rank, envy, egalitarianism,
//! lottery decomposition and manipulability.

mod bvn;
mod efficiency;
mod egalitarian;
mod envy;
mod manipulation;
mod rank;

pub use bvn::{
    bvn_decompose, bvn_term_bound, corollary_check, ex_post_efficient, support_max_rank, BvnDecomposition,
    CorollaryReport,
};
pub use efficiency::{improving_cycle, sd_efficient, sd_gain_lp, EfficiencyReport, Exchange};
pub use egalitarian::{egalitarian_check, egalitarian_relaxed, EgalitarianReport};
pub use envy::{envy_report, EnvyReport};
pub use manipulation::{
    best_support_rank, obvious_manipulability_probe, support_ranks_under, swap_axiom_check,
    swap_axiom_check_with, swap_probe, worst_support_rank, ManipulationReport, MisreportRecord,
    ProfileWitness, SwapProbeSummary, SwapVerdict, PROBE_HARD_LIMIT,
};
pub use rank::{rank_distribution, rank_dominates, rank_efficient, rank_efficient_brute_force, RankDistribution};
