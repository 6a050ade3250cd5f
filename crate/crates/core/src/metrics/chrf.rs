//! Corpus-level chrF (character n-gram F-score).

use std::collections::HashMap;

use serde::Serialize;

use crate::orthography::NormalizedText;

/// Highest character n-gram order.
pub const CHRF_CHAR_ORDER: usize = 6;
/// Recall weight; recall counts four times as much as precision.
pub const CHRF_BETA: f64 = 2.0;

/// Corpus chrF with the aggregated precision/recall behind it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChrfScore {
    pub score: f64,
    pub beta: f64,
    #[serde(rename = "order")]
    pub max_order: usize,
    #[serde(skip)]
    pub precision: f64,
    #[serde(skip)]
    pub recall: f64,
}

/// Per-order [hyp, ref, match] n-gram counts; merged by addition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct ChrfStats {
    per_order: [[u64; 3]; CHRF_CHAR_ORDER],
}

impl ChrfStats {
    pub(crate) fn merge(mut self, other: ChrfStats) -> ChrfStats {
        for n in 0..CHRF_CHAR_ORDER {
            for k in 0..3 {
                self.per_order[n][k] += other.per_order[n][k];
            }
        }
        self
    }
}

fn squeezed_chars(text: &NormalizedText) -> Vec<char> {
    // chrF n-grams run over the text with all whitespace removed.
    text.as_str()
        .split_whitespace()
        .flat_map(str::chars)
        .collect()
}

fn ngram_counts(chars: &[char], n: usize) -> HashMap<&[char], u64> {
    let mut counts: HashMap<&[char], u64> = HashMap::new();
    for w in chars.windows(n) {
        *counts.entry(w).or_default() += 1;
    }
    counts
}

pub(crate) fn pair_stats(hyp: &NormalizedText, reference: &NormalizedText) -> ChrfStats {
    let h = squeezed_chars(hyp);
    let r = squeezed_chars(reference);
    let mut stats = ChrfStats::default();
    for n in 1..=CHRF_CHAR_ORDER {
        let hyp_total = (h.len() + 1).saturating_sub(n) as u64;
        let ref_total = (r.len() + 1).saturating_sub(n) as u64;
        let mut matched = 0u64;
        if hyp_total > 0 && ref_total > 0 {
            let ref_counts = ngram_counts(&r, n);
            for (gram, count) in ngram_counts(&h, n) {
                matched += count.min(ref_counts.get(gram).copied().unwrap_or(0));
            }
        }
        stats.per_order[n - 1] = [hyp_total, ref_total, matched];
    }
    stats
}

/// Score accumulated corpus statistics.
///
/// Precision and recall are averaged over the orders that actually occur on
/// both sides (orders missing from either side contribute nothing and do not
/// count toward the divisor); the F-score weights recall by beta^2 and is 0
/// when precision + recall is 0.
pub(crate) fn score_from_stats(stats: ChrfStats) -> ChrfScore {
    let mut effective_order = 0u32;
    let mut prec_sum = 0.0;
    let mut rec_sum = 0.0;
    for [n_hyp, n_ref, n_match] in stats.per_order {
        if n_hyp > 0 && n_ref > 0 {
            effective_order += 1;
        }
        if n_hyp > 0 {
            prec_sum += n_match as f64 / n_hyp as f64;
        }
        if n_ref > 0 {
            rec_sum += n_match as f64 / n_ref as f64;
        }
    }
    let (precision, recall) = if effective_order == 0 {
        (0.0, 0.0)
    } else {
        (
            prec_sum / effective_order as f64,
            rec_sum / effective_order as f64,
        )
    };
    let factor = CHRF_BETA * CHRF_BETA;
    let score = if precision + recall > 0.0 {
        100.0 * (1.0 + factor) * precision * recall / (factor * precision + recall)
    } else {
        0.0
    };
    ChrfScore {
        score,
        beta: CHRF_BETA,
        max_order: CHRF_CHAR_ORDER,
        precision,
        recall,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthography::normalize;

    fn chrf_of(pairs: &[(&str, &str)]) -> ChrfScore {
        let stats = pairs
            .iter()
            .map(|(h, r)| pair_stats(&normalize(h), &normalize(r)))
            .fold(ChrfStats::default(), ChrfStats::merge);
        score_from_stats(stats)
    }

    #[test]
    fn identity_scores_100() {
        let s = chrf_of(&[("ọjọ́ dára púpọ̀", "ọjọ́ dára púpọ̀"), ("Mama", "Mama")]);
        assert_eq!(s.score, 100.0);
        assert_eq!(s.precision, 1.0);
        assert_eq!(s.recall, 1.0);
    }

    #[test]
    fn disjoint_scores_0() {
        let s = chrf_of(&[("ab", "cd")]);
        assert_eq!(s.score, 0.0);
    }

    #[test]
    fn whitespace_is_invisible() {
        let a = chrf_of(&[("ọjọ́dára", "ọjọ́ dára")]);
        assert_eq!(a.score, 100.0);
    }

    #[test]
    fn empty_both_sides_is_zero() {
        assert_eq!(chrf_of(&[("", "")]).score, 0.0);
    }

    #[test]
    fn orders_longer_than_text_are_ignored() {
        // 2 chars each: only orders 1 and 2 exist; identical → still 100.
        let s = chrf_of(&[("ab", "ab")]);
        assert_eq!(s.score, 100.0);
    }
}
