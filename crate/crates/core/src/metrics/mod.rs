//! From-scratch corpus evaluation: BLEU and chrF over line-aligned files.
//!
//! Both metrics reduce per-sentence integer statistics by addition, so the
//! corpus pass parallelizes without changing a single bit of the result.

mod bleu;
mod chrf;
mod tokenize;

use std::path::Path;

use serde::Serialize;
use thiserror::Error;

pub use bleu::{BleuScore, BLEU_MAX_ORDER};
pub use chrf::{ChrfScore, CHRF_BETA, CHRF_CHAR_ORDER};
pub use tokenize::intl_tokenize;

use crate::corpus::{load_lines, BlankLines, CorpusError};
use crate::orthography::NormalizedText;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("hypothesis and reference corpora differ in length: {hyps} vs {refs} lines")]
    LengthMismatch { hyps: usize, refs: usize },
    #[error("cannot score an empty corpus")]
    EmptyCorpus,
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

fn check_lengths(hyps: &[NormalizedText], refs: &[NormalizedText]) -> Result<(), MetricsError> {
    if hyps.len() != refs.len() {
        return Err(MetricsError::LengthMismatch {
            hyps: hyps.len(),
            refs: refs.len(),
        });
    }
    if hyps.is_empty() {
        return Err(MetricsError::EmptyCorpus);
    }
    Ok(())
}

/// Corpus BLEU over intl-tokenized text, one reference per hypothesis.
#[cfg(feature = "parallel")]
pub fn corpus_bleu(
    hyps: &[NormalizedText],
    refs: &[NormalizedText],
) -> Result<BleuScore, MetricsError> {
    use rayon::prelude::*;
    check_lengths(hyps, refs)?;
    let stats = hyps
        .par_iter()
        .zip(refs.par_iter())
        .map(|(h, r)| bleu::pair_stats(h, r))
        .reduce(Default::default, |a, b| a.merge(b));
    Ok(bleu::score_from_stats(stats))
}

/// Corpus BLEU over intl-tokenized text, one reference per hypothesis.
#[cfg(not(feature = "parallel"))]
pub fn corpus_bleu(
    hyps: &[NormalizedText],
    refs: &[NormalizedText],
) -> Result<BleuScore, MetricsError> {
    corpus_bleu_seq(hyps, refs)
}

/// Sequential twin of [`corpus_bleu`]; identical output.
pub fn corpus_bleu_seq(
    hyps: &[NormalizedText],
    refs: &[NormalizedText],
) -> Result<BleuScore, MetricsError> {
    check_lengths(hyps, refs)?;
    let stats = hyps
        .iter()
        .zip(refs.iter())
        .map(|(h, r)| bleu::pair_stats(h, r))
        .fold(Default::default(), |a: bleu::BleuStats, b| a.merge(b));
    Ok(bleu::score_from_stats(stats))
}

/// Corpus chrF (character 6-grams, beta = 2, whitespace ignored).
#[cfg(feature = "parallel")]
pub fn corpus_chrf(
    hyps: &[NormalizedText],
    refs: &[NormalizedText],
) -> Result<ChrfScore, MetricsError> {
    use rayon::prelude::*;
    check_lengths(hyps, refs)?;
    let stats = hyps
        .par_iter()
        .zip(refs.par_iter())
        .map(|(h, r)| chrf::pair_stats(h, r))
        .reduce(Default::default, |a, b| a.merge(b));
    Ok(chrf::score_from_stats(stats))
}

/// Corpus chrF (character 6-grams, beta = 2, whitespace ignored).
#[cfg(not(feature = "parallel"))]
pub fn corpus_chrf(
    hyps: &[NormalizedText],
    refs: &[NormalizedText],
) -> Result<ChrfScore, MetricsError> {
    corpus_chrf_seq(hyps, refs)
}

/// Sequential twin of [`corpus_chrf`]; identical output.
pub fn corpus_chrf_seq(
    hyps: &[NormalizedText],
    refs: &[NormalizedText],
) -> Result<ChrfScore, MetricsError> {
    check_lengths(hyps, refs)?;
    let stats = hyps
        .iter()
        .zip(refs.iter())
        .map(|(h, r)| chrf::pair_stats(h, r))
        .fold(Default::default(), |a: chrf::ChrfStats, b| a.merge(b));
    Ok(chrf::score_from_stats(stats))
}

/// Configuration echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalConfig {
    pub tokenizer: &'static str,
    pub bleu_max_order: usize,
    pub chrf_beta: f64,
    pub chrf_char_order: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            tokenizer: "intl",
            bleu_max_order: BLEU_MAX_ORDER,
            chrf_beta: CHRF_BETA,
            chrf_char_order: CHRF_CHAR_ORDER,
        }
    }
}

/// Both corpus metrics plus the configuration that produced them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub bleu: BleuScore,
    pub chrf: ChrfScore,
    pub n_sentences: usize,
    pub config: EvalConfig,
}

fn round1(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}

impl EvalReport {
    /// Copy with the two headline scores rounded to one decimal place, the
    /// precision tables report at.
    pub fn rounded(&self) -> EvalReport {
        let mut out = self.clone();
        out.bleu.score = round1(out.bleu.score);
        out.chrf.score = round1(out.chrf.score);
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

/// Score two in-memory corpora.
pub fn evaluate_corpora(
    hyps: &[NormalizedText],
    refs: &[NormalizedText],
) -> Result<EvalReport, MetricsError> {
    Ok(EvalReport {
        bleu: corpus_bleu(hyps, refs)?,
        chrf: corpus_chrf(hyps, refs)?,
        n_sentences: hyps.len(),
        config: EvalConfig::default(),
    })
}

/// Score two line-aligned files. Blank lines count as empty sentences so
/// alignment is preserved.
pub fn evaluate(hyp_path: &Path, ref_path: &Path) -> Result<EvalReport, MetricsError> {
    let hyps = load_lines(hyp_path, BlankLines::Keep)?;
    let refs = load_lines(ref_path, BlankLines::Keep)?;
    evaluate_corpora(&hyps, &refs)
}
