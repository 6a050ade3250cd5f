//! Corpus-level BLEU with exponential smoothing.

use std::collections::HashMap;

use serde::Serialize;

use crate::metrics::tokenize::intl_tokenize;
use crate::orthography::NormalizedText;

/// Highest n-gram order entering the geometric mean.
pub const BLEU_MAX_ORDER: usize = 4;


/// Corpus BLEU with all intermediate statistics.
///
/// `precisions` are the per-order modified n-gram precisions as percentages;
/// `score = brevity_penalty * geometric_mean(precisions)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BleuScore {
    pub score: f64,
    pub precisions: [f64; BLEU_MAX_ORDER],
    #[serde(rename = "bp")]
    pub brevity_penalty: f64,
    pub hyp_len: u64,
    pub ref_len: u64,
}

/// Raw n-gram counts; merging is element-wise addition, so corpus stats can
/// be reduced in any order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct BleuStats {
    correct: [u64; BLEU_MAX_ORDER],
    total: [u64; BLEU_MAX_ORDER],
    hyp_len: u64,
    ref_len: u64,
}

impl BleuStats {
    pub(crate) fn merge(mut self, other: BleuStats) -> BleuStats {
        for n in 0..BLEU_MAX_ORDER {
            self.correct[n] += other.correct[n];
            self.total[n] += other.total[n];
        }
        self.hyp_len += other.hyp_len;
        self.ref_len += other.ref_len;
        self
    }
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], u64> {
    let mut counts: HashMap<&[String], u64> = HashMap::new();
    for w in tokens.windows(n) {
        *counts.entry(w).or_default() += 1;
    }
    counts
}

/// Clipped n-gram statistics for one hypothesis/reference pair.
pub(crate) fn pair_stats(hyp: &NormalizedText, reference: &NormalizedText) -> BleuStats {
    let h = intl_tokenize(hyp);
    let r = intl_tokenize(reference);
    let mut stats = BleuStats {
        hyp_len: h.len() as u64,
        ref_len: r.len() as u64,
        ..BleuStats::default()
    };
    for n in 1..=BLEU_MAX_ORDER {
        if h.len() < n {
            break;
        }
        stats.total[n - 1] = (h.len() - n + 1) as u64;
        let ref_counts = ngram_counts(&r, n);
        for (gram, count) in ngram_counts(&h, n) {
            let clip = ref_counts.get(gram).copied().unwrap_or(0);
            stats.correct[n - 1] += count.min(clip);
        }
    }
    stats
}

/// Score accumulated corpus statistics.
///
/// A zero numerator at order k is smoothed to `1 / (2^i * total_k)` where i
/// counts the zeros seen so far; a zero denominator (hypotheses shorter than
/// k) leaves the precision at 0 and the score collapses to 0 through
/// `LOG_ZERO`. The brevity penalty is `exp(1 - ref_len/hyp_len)` for short
/// hypotheses, 1 otherwise.
pub(crate) fn score_from_stats(stats: BleuStats) -> BleuScore {
    let mut precisions = [0f64; BLEU_MAX_ORDER];
    let mut smooth = 1.0;
    for n in 0..BLEU_MAX_ORDER {
        if stats.total[n] == 0 {
            break;
        }
        if stats.correct[n] == 0 {
            smooth *= 2.0;
            precisions[n] = 100.0 / (smooth * stats.total[n] as f64);
        } else {
            precisions[n] = 100.0 * stats.correct[n] as f64 / stats.total[n] as f64;
        }
    }

    let brevity_penalty = if stats.hyp_len < stats.ref_len {
        if stats.hyp_len > 0 {
            (1.0 - stats.ref_len as f64 / stats.hyp_len as f64).exp()
        } else {
            0.0
        }
    } else {
        1.0
    };

    // Geometric mean as a product of ratios: exact 1.0 on identical corpora
    // (no exp/ln round-trip), exact 0.0 when any precision is 0.
    let ratio_product: f64 = precisions.iter().map(|&p| p / 100.0).product();
    let score =
        brevity_penalty * 100.0 * ratio_product.powf(1.0 / BLEU_MAX_ORDER as f64);

    BleuScore {
        score,
        precisions,
        brevity_penalty,
        hyp_len: stats.hyp_len,
        ref_len: stats.ref_len,
    }
}
