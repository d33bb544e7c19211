//! Placeholder library; the crate exists for its `benches/` targets.
