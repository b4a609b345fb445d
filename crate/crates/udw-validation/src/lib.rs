//! Holds the `acceptance` integration test; the crate itself exports nothing.
