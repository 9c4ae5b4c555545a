//! Harness around `topk-core`: dataset generation, cross-checking the
//! backends against the brute-force oracle, and counter benchmarks.

pub mod backend;
pub mod bench;
pub mod verify;

pub use backend::{Backend, Candidate};
pub use bench::{bench, BenchRow};
pub use verify::{query_plan, verify, Failure, VerifyReport};
