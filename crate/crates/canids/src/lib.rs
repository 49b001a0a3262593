//! CAN bus DoS intrusion detection from emulated hardware performance counters.
//!
//! The pipeline runs in batch stages: synthesize (or parse) CAN traffic,
//! inject an identifier-zero DoS flood, resolve the transmitted order through
//! priority arbitration, feed the arbitrated stream to an instrumented ECU
//! model that encrypts every payload with AES-128 while counting
//! architectural events, then standardize and prune the per-window counter
//! vectors and train a one-class SVM on attack-free windows only. The `eval`
//! module sweeps the training-set fraction and reports detection quality.
//!
//! Real gem5 statistics dumps can replace the ECU model via `stats`, which
//! emits the same counter-sample rows.

pub mod aes;
pub mod cache;
pub mod can;
pub mod config;
pub mod counters;
pub mod ecu;
pub mod eval;
pub mod features;
pub mod ocsvm;
pub mod rng;
pub mod stats;
pub mod traffic;
