//! Experiment drivers around the core library: build matrix groups over
//! the two ring families, compare their degree multisets, and emit
//! deterministic reports.

pub mod cache;
pub mod report;
pub mod runs;
