//! Test-only crate; see tests/acceptance.rs.
