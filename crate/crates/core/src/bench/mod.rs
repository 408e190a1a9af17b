//! Seeded simulation studies over cases, noise families, sample sizes and
//! assumed latent counts.

mod emit;
mod plan;
mod run;

pub use emit::{emit_report, ReportFormat};
pub use plan::{BenchPlan, MIN_SAMPLE_SIZE};
pub use run::{run_assumed_grid, run_benchmark, BenchReport, CellResult, MIXED_FAMILIES};
