//! Word equality, the end-to-end Van Kampen comparison and its cross-check
//! through the coproduct of the cover pieces.

mod battery;
mod pipeline;
mod random;
pub mod rewriting;

pub use battery::{decide_equal, Battery, BatteryConfig, EqualReason, Separation, UnknownReport, Verdict};
pub use pipeline::{
    crosscheck, pullback_cover, run_vk, ColumnReport, CrosscheckReport, Tally, VertexComparison, VkOptions, VkReport,
    VkRun,
};
pub use random::{random_instance, Bounds, Instance};
