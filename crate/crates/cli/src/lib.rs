//! On-disk formats and the known-results registry behind the `sicd`
//! binary, split out so integration tests can drive them directly.

pub mod format;
pub mod registry;
