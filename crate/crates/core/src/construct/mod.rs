//! Builders for the log-m and log-infinity trajectories.

mod dense;
mod log_m;
mod schedule;
mod wind;

pub use dense::{
    build_eps_chain, build_log_infty, dense_index, dyadic, min_chain_len, minimal_dense_schedule, DenseBlockRecord,
    DenseBlockSchedule, DenseManifest, DenseSchedule, DenseSegment, Dyadic, GlueRecord, SegmentRecord,
};
pub use log_m::{build_log_m, BlockRecord, LogMManifest, PieceRecord, Segment, WindRecord};
pub use schedule::{
    inner_gap_ends, least_dominating, minimal_schedule, outer_gap_ends, piece_count, s_function, BlockSchedule,
    GrowthSchedule,
};
pub use wind::{plan_wind, WindPlan};
