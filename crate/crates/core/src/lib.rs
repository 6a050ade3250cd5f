//! Building blocks for Yorùbá diacritic-restoration datasets and evaluation.
//!
//! The crate covers the whole desk-scale pipeline:
//!
//! - [`orthography`] — NFC normalization, grapheme segmentation, and the two
//!   diacritic strip operations;
//! - [`corruption`] — deterministic source-side corruption under exact
//!   quotas, with a replayable manifest;
//! - [`corpus`] — line/TSV loading, stratified halving, seeded sampling;
//! - [`metrics`] — corpus BLEU and chrF over intl-tokenized text;
//! - [`diacritizer`] — a count-based lexicon + bigram Viterbi restorer.
//!
//! Everything randomized is keyed by an explicit `u64` seed and derived
//! substreams, so outputs are byte-identical across runs, platforms, and
//! thread counts. With the default `parallel` feature the per-line work runs
//! on rayon; the `*_seq` twins always produce identical results.

pub mod corpus;
pub mod corruption;
pub mod diacritizer;
pub mod metrics;
pub mod orthography;
mod rng;

pub use corpus::{LabeledSentence, SplitResult};
pub use corruption::{CorruptionPlan, CorruptionRecord, Heuristic, ParallelExample, Proportions};
pub use diacritizer::{DecoderConfig, RestorationModel};
pub use metrics::{BleuScore, ChrfScore, EvalReport};
pub use orthography::{normalize, strip_all, strip_tone, NormalizedText};
