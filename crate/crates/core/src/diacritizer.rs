//! A lightweight, trainable diacritic restorer.
//!
//! Training tallies a restoration lexicon (diacritic-stripped word →
//! observed diacritized forms with counts) plus unigram and bigram form
//! counts. Restoration builds a per-token candidate lattice and picks the
//! exact Viterbi path under an interpolated bigram/unigram score with add-α
//! smoothing. Tokens never seen in training copy through unchanged, so the
//! restorer conserves token count and order by construction: it restores
//! marks, it does not rewrite sentences.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::orthography::{normalize, strip_all, strip_tone, NormalizedText};

/// Model file schema version written by [`save`].
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DiacritizerError {
    #[error("training corpus is empty")]
    EmptyCorpus,
    #[error("lambda must lie in [0, 1], got {0}")]
    BadLambda(f64),
    #[error("alpha must be positive, got {0}")]
    BadAlpha(f64),
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed model file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported model version {found} (this build reads version {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("lexicon key {key:?} holds form {form:?}, which strips to {actual:?}")]
    KeyMismatch {
        key: String,
        form: String,
        actual: String,
    },
    #[error("bigram references form {form:?} absent from the unigram table")]
    UnknownBigramForm { form: String },
    #[error("hypothesis and reference corpora differ in length: {hyps} vs {refs} lines")]
    LengthMismatch { hyps: usize, refs: usize },
}

/// Counts learned from a fully diacritized corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestorationModel {
    /// stripped key → (diacritized form, count), sorted by count then form.
    pub lexicon: BTreeMap<String, Vec<(String, u64)>>,
    pub bigram_counts: BTreeMap<(String, String), u64>,
    pub unigram_counts: BTreeMap<String, u64>,
    pub total_tokens: u64,
}

/// Decoder knobs for [`restore`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoderConfig {
    /// Interpolation weight of the bigram term (0 = pure unigram).
    pub lambda: f64,
    /// Add-α smoothing constant over the observed form vocabulary.
    pub alpha: f64,
}

impl DecoderConfig {
    pub fn new(lambda: f64, alpha: f64) -> Result<Self, DiacritizerError> {
        if !(0.0..=1.0).contains(&lambda) || lambda.is_nan() {
            return Err(DiacritizerError::BadLambda(lambda));
        }
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(DiacritizerError::BadAlpha(alpha));
        }
        Ok(DecoderConfig { lambda, alpha })
    }
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig {
            lambda: 0.7,
            alpha: 0.1,
        }
    }
}

fn sort_candidates(candidates: &mut Vec<(String, u64)>) {
    // Highest count first, then lexicographic form order: the stable
    // presentation every lookup and tie-break relies on.
    candidates.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
}

/// Tally lexicon, unigram, and bigram counts over whitespace tokens.
pub fn train(targets: &[NormalizedText]) -> Result<RestorationModel, DiacritizerError> {
    let mut lexicon: BTreeMap<String, BTreeMap<String, u64>> = BTreeMap::new();
    let mut bigram_counts: BTreeMap<(String, String), u64> = BTreeMap::new();
    let mut unigram_counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut total_tokens = 0u64;

    for sentence in targets {
        let tokens: Vec<&str> = sentence.as_str().split_whitespace().collect();
        for pair in tokens.windows(2) {
            *bigram_counts
                .entry((pair[0].to_string(), pair[1].to_string()))
                .or_default() += 1;
        }
        for token in tokens {
            let key = strip_all(&normalize(token)).into_string();
            *lexicon
                .entry(key)
                .or_default()
                .entry(token.to_string())
                .or_default() += 1;
            *unigram_counts.entry(token.to_string()).or_default() += 1;
            total_tokens += 1;
        }
    }
    if total_tokens == 0 {
        return Err(DiacritizerError::EmptyCorpus);
    }

    let lexicon = lexicon
        .into_iter()
        .map(|(key, forms)| {
            let mut candidates: Vec<(String, u64)> = forms.into_iter().collect();
            sort_candidates(&mut candidates);
            (key, candidates)
        })
        .collect();

    Ok(RestorationModel {
        lexicon,
        bigram_counts,
        unigram_counts,
        total_tokens,
    })
}

/// Diacritized forms a token could restore to, best count first.
///
/// The lookup key is the fully stripped token. When the token already
/// carries some marks (a partially diacritized source), candidates whose
/// tone-stripped form equals the token are preferred, so existing under-dots
/// are respected; if none agree, the full candidate list is returned.
pub fn candidates(word: &str, model: &RestorationModel) -> Vec<(String, u64)> {
    let w = normalize(word);
    let key = strip_all(&w);
    let Some(all) = model.lexicon.get(key.as_str()) else {
        return Vec::new();
    };
    if w.as_str() != key.as_str() {
        let compatible: Vec<(String, u64)> = all
            .iter()
            .filter(|(form, _)| strip_tone(&normalize(form)).as_str() == w.as_str())
            .cloned()
            .collect();
        if !compatible.is_empty() {
            return compatible;
        }
    }
    all.clone()
}

struct Lattice {
    /// Per column: (form, unigram count, known to the model?).
    columns: Vec<Vec<(String, u64)>>,
}

fn build_lattice(tokens: &[&str], model: &RestorationModel) -> Lattice {
    let columns = tokens
        .iter()
        .map(|token| {
            let cands = candidates(token, model);
            if cands.is_empty() {
                // copy_through: the token itself is the only candidate.
                vec![(token.to_string(), 0)]
            } else {
                cands
            }
        })
        .collect();
    Lattice { columns }
}

/// Restore diacritics on one sentence via exact Viterbi decoding.
///
/// Path score is `Σ log[(1-λ)·P_uni(f_i) + λ·P_bi(f_i | f_{i-1})]`, with the
/// first token scored by `log P_uni(f_0)` alone. Both probabilities use
/// add-α smoothing over the observed form vocabulary. Ties break toward the
/// higher unigram count, then the lexicographically smaller form.
pub fn restore(
    sentence: &NormalizedText,
    model: &RestorationModel,
    config: &DecoderConfig,
) -> NormalizedText {
    let tokens: Vec<&str> = sentence.as_str().split_whitespace().collect();
    if tokens.is_empty() {
        return normalize("");
    }
    let lattice = build_lattice(&tokens, model);

    let vocab = model.unigram_counts.len() as f64;
    let alpha = config.alpha;
    let lambda = config.lambda;
    let total = model.total_tokens as f64;
    let p_uni = |count: u64| (count as f64 + alpha) / (total + alpha * vocab);
    let p_bi = |prev: &str, form: &str| {
        let pair = (prev.to_string(), form.to_string());
        let joint = model.bigram_counts.get(&pair).copied().unwrap_or(0) as f64;
        let context = model.unigram_counts.get(prev).copied().unwrap_or(0) as f64;
        (joint + alpha) / (context + alpha * vocab)
    };

    // (cumulative score, backpointer) per candidate per column.
    let mut scores: Vec<Vec<(f64, usize)>> = Vec::with_capacity(lattice.columns.len());
    scores.push(
        lattice.columns[0]
            .iter()
            .map(|(_, uni)| (p_uni(*uni).ln(), 0))
            .collect(),
    );
    for i in 1..lattice.columns.len() {
        let prev_col = &lattice.columns[i - 1];
        let prev_scores = &scores[i - 1];
        let col = lattice.columns[i]
            .iter()
            .map(|(form, uni)| {
                let mut best: Option<(f64, usize)> = None;
                for (j, (prev_form, _)) in prev_col.iter().enumerate() {
                    let mix = (1.0 - lambda) * p_uni(*uni) + lambda * p_bi(prev_form, form);
                    let score = prev_scores[j].0 + mix.ln();
                    let better = match best {
                        None => true,
                        Some((s, k)) => {
                            score > s
                                || (score == s
                                    && preferred(&prev_col[j], &prev_col[k]))
                        }
                    };
                    if better {
                        best = Some((score, j));
                    }
                }
                best.unwrap()
            })
            .collect();
        scores.push(col);
    }

    // Best final candidate, with the documented tie-break.
    let last = scores.len() - 1;
    let mut best_k = 0usize;
    for k in 1..scores[last].len() {
        let (s_k, s_best) = (scores[last][k].0, scores[last][best_k].0);
        if s_k > s_best
            || (s_k == s_best && preferred(&lattice.columns[last][k], &lattice.columns[last][best_k]))
        {
            best_k = k;
        }
    }

    // Walk backpointers.
    let mut path = vec![0usize; lattice.columns.len()];
    path[last] = best_k;
    for i in (1..=last).rev() {
        path[i - 1] = scores[i][path[i]].1;
    }

    let restored: Vec<&str> = path
        .iter()
        .enumerate()
        .map(|(i, &k)| lattice.columns[i][k].0.as_str())
        .collect();
    normalize(&restored.join(" "))
}

fn preferred(a: &(String, u64), b: &(String, u64)) -> bool {
    a.1 > b.1 || (a.1 == b.1 && a.0 < b.0)
}

/// Restore a batch of sentences against a shared model.
#[cfg(feature = "parallel")]
pub fn restore_corpus(
    sentences: &[NormalizedText],
    model: &RestorationModel,
    config: &DecoderConfig,
) -> Vec<NormalizedText> {
    use rayon::prelude::*;
    sentences
        .par_iter()
        .map(|s| restore(s, model, config))
        .collect()
}

/// Restore a batch of sentences against a shared model.
#[cfg(not(feature = "parallel"))]
pub fn restore_corpus(
    sentences: &[NormalizedText],
    model: &RestorationModel,
    config: &DecoderConfig,
) -> Vec<NormalizedText> {
    restore_corpus_seq(sentences, model, config)
}

/// Sequential twin of [`restore_corpus`]; identical output.
pub fn restore_corpus_seq(
    sentences: &[NormalizedText],
    model: &RestorationModel,
    config: &DecoderConfig,
) -> Vec<NormalizedText> {
    sentences.iter().map(|s| restore(s, model, config)).collect()
}

/// Positional token match counts for one sentence pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SentenceMatches {
    pub matches: usize,
    pub hyp_tokens: usize,
    pub ref_tokens: usize,
}

impl SentenceMatches {
    pub fn length_mismatch(&self) -> bool {
        self.hyp_tokens != self.ref_tokens
    }
}

/// Exact word match diagnostic over aligned corpora.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WordAccuracy {
    /// matched / aligned, where aligned sums `min(hyp, ref)` token counts.
    pub exact_word_match_rate: f64,
    pub matched: usize,
    pub aligned: usize,
    /// Sentences whose token counts differ (scored over the shorter length).
    pub flagged: usize,
    pub per_sentence: Vec<SentenceMatches>,
}

/// Fraction of aligned whitespace tokens matching exactly, by position.
pub fn word_accuracy(
    hyps: &[NormalizedText],
    refs: &[NormalizedText],
) -> Result<WordAccuracy, DiacritizerError> {
    if hyps.len() != refs.len() {
        return Err(DiacritizerError::LengthMismatch {
            hyps: hyps.len(),
            refs: refs.len(),
        });
    }
    let mut per_sentence = Vec::with_capacity(hyps.len());
    let (mut matched, mut aligned, mut flagged) = (0usize, 0usize, 0usize);
    for (hyp, reference) in hyps.iter().zip(refs.iter()) {
        let h: Vec<&str> = hyp.as_str().split_whitespace().collect();
        let r: Vec<&str> = reference.as_str().split_whitespace().collect();
        let m = h.iter().zip(r.iter()).filter(|(a, b)| a == b).count();
        let s = SentenceMatches {
            matches: m,
            hyp_tokens: h.len(),
            ref_tokens: r.len(),
        };
        matched += m;
        aligned += h.len().min(r.len());
        flagged += usize::from(s.length_mismatch());
        per_sentence.push(s);
    }
    let rate = if aligned == 0 {
        0.0
    } else {
        matched as f64 / aligned as f64
    };
    Ok(WordAccuracy {
        exact_word_match_rate: rate,
        matched,
        aligned,
        flagged,
        per_sentence,
    })
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    version: u32,
    unigrams: BTreeMap<String, u64>,
    bigrams: Vec<(String, String, u64)>,
    lexicon: BTreeMap<String, Vec<(String, u64)>>,
}

/// Write the model as versioned JSON.
pub fn save(model: &RestorationModel, path: &Path) -> Result<(), DiacritizerError> {
    let file = ModelFile {
        version: MODEL_VERSION,
        unigrams: model.unigram_counts.clone(),
        bigrams: model
            .bigram_counts
            .iter()
            .map(|((a, b), c)| (a.clone(), b.clone(), *c))
            .collect(),
        lexicon: model.lexicon.clone(),
    };
    let json = serde_json::to_string_pretty(&file).expect("model serialization");
    std::fs::write(path, json + "\n").map_err(|source| DiacritizerError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Read a model back, checking the version tag and the count invariants.
pub fn load(path: &Path) -> Result<RestorationModel, DiacritizerError> {
    let json = std::fs::read_to_string(path).map_err(|source| DiacritizerError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let file: ModelFile = serde_json::from_str(&json)?;
    if file.version != MODEL_VERSION {
        return Err(DiacritizerError::VersionMismatch {
            found: file.version,
            expected: MODEL_VERSION,
        });
    }

    let mut lexicon = BTreeMap::new();
    for (key, mut candidates) in file.lexicon {
        for (form, _) in &candidates {
            let actual = strip_all(&normalize(form)).into_string();
            if actual != key {
                return Err(DiacritizerError::KeyMismatch {
                    key,
                    form: form.clone(),
                    actual,
                });
            }
        }
        sort_candidates(&mut candidates);
        lexicon.insert(key, candidates);
    }

    let unigram_counts = file.unigrams;
    let mut bigram_counts = BTreeMap::new();
    for (a, b, count) in file.bigrams {
        for form in [&a, &b] {
            if !unigram_counts.contains_key(form) {
                return Err(DiacritizerError::UnknownBigramForm { form: form.clone() });
            }
        }
        bigram_counts.insert((a, b), count);
    }
    let total_tokens = unigram_counts.values().sum();

    Ok(RestorationModel {
        lexicon,
        bigram_counts,
        unigram_counts,
        total_tokens,
    })
}
