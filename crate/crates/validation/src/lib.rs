//! Nothing to export: the acceptance checks are in `tests/acceptance.rs`.
