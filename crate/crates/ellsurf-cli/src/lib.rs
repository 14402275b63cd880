//! IO companion of the elliptic-surface toolkit: surface spec files, the
//! stage pipeline, the persistent trace cache, report emission and the
//! command-line interface.

pub mod cache;
pub mod expr;
pub mod pipeline;
pub mod report;
pub mod spec;
pub mod triples;
