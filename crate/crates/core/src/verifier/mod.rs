//! Claim checkers producing self-certifying reports, corpus sweeps and
//! scaling tables.

mod checks;
mod corpus;
mod report;
mod scaling;

pub use checks::{
    check_abelian_diameter, check_bt, check_bt_hypothesis, check_conjugacy_bound, check_lemma_nilp2,
    check_normal_set, check_schreier, check_schreier_all, check_theorem_b, check_theorem_b_all, gens_label,
    is_abelian, is_conjugation_closed, BtParams,
};
pub use corpus::{
    builtin_base, builtin_corpus, fixtures_dir, run_corpus, sample_generating_sets, small_products, summarize,
    Summary, SweepConfig, SweepLimits, DEFAULT_CLAIMS, EXHAUSTIVE_LIMIT, FIXTURE_TABLES, MAX_SAMPLED_SIZE,
    SAMPLE_LIMIT,
};
pub use report::{recheck, ClaimId, ClaimReport, ReportError, Witness};
pub use scaling::{scaling_experiment, scaling_report, ScalingFamily, ScalingRow, ScalingTable};
