//! Deterministic source-side corruption.
//!
//! Given fully diacritized target sentences, this module manufactures the
//! source side of a restoration dataset with four heuristics applied in
//! fixed proportions (by default 60/20/10/10):
//!
//! 1. `strip_all` — remove every diacritic;
//! 2. `strip_tone` — remove tone marks only;
//! 3. `drop_word` — strip tones, then delete one random word;
//! 4. `swap_words` — strip tones, then exchange two distinct words
//!    (only for sentences of more than two words).
//!
//! Quotas are exact (largest-remainder apportionment, not i.i.d. coin
//! flips), every random choice comes from a per-line substream keyed by
//! `(seed, line)`, and the emitted [`CorruptionPlan`] replays byte-for-byte
//! without any RNG.

use num_rational::Ratio;
use rand_core::RngCore;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::orthography::{normalize, strip_all, strip_tone, NormalizedText};
use crate::rng::{bounded, shuffle, substream, STREAM_HEURISTIC_SHUFFLE, STREAM_LINE};

/// Manifest schema version written by [`CorruptionPlan::to_json`].
pub const MANIFEST_VERSION: u32 = 1;

/// Exact rational weight of one heuristic.
pub type Weight = Ratio<u64>;

#[derive(Debug, Error)]
pub enum CorruptionError {
    #[error("proportions must sum to 1, got {sum}")]
    BadProportions { sum: String },
    #[error("cannot parse weight {input:?}: {reason}")]
    BadWeight { input: String, reason: String },
    #[error("sentence is empty after trimming")]
    EmptySentence,
    #[error("line {line}: sentence is empty after trimming")]
    EmptyLine { line: usize },
    #[error("plan has {plan} records but corpus has {corpus} lines")]
    LengthMismatch { plan: usize, corpus: usize },
    #[error("line {line}: {reason}")]
    Integrity { line: usize, reason: String },
    #[error("unsupported manifest version {found} (this build reads version {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("malformed manifest: {0}")]
    Json(#[from] serde_json::Error),
}

/// The four source-side corruption heuristics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Heuristic {
    #[serde(rename = "strip_all")]
    StripAll,
    #[serde(rename = "strip_tone")]
    StripTone,
    #[serde(rename = "drop_word")]
    StripToneDropWord,
    #[serde(rename = "swap_words")]
    StripToneSwapWords,
}

impl Heuristic {
    /// All heuristics in declaration order (quota tie-break order).
    pub const ALL: [Heuristic; 4] = [
        Heuristic::StripAll,
        Heuristic::StripTone,
        Heuristic::StripToneDropWord,
        Heuristic::StripToneSwapWords,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Heuristic::StripAll => "strip_all",
            Heuristic::StripTone => "strip_tone",
            Heuristic::StripToneDropWord => "drop_word",
            Heuristic::StripToneSwapWords => "swap_words",
        }
    }

    fn index(self) -> usize {
        Heuristic::ALL.iter().position(|h| *h == self).unwrap()
    }
}

impl std::fmt::Display for Heuristic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-heuristic weights; must sum to exactly 1.
///
/// Fields are private so every value in circulation went through the sum
/// check in [`Proportions::new`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proportions {
    strip_all: Weight,
    strip_tone: Weight,
    drop_word: Weight,
    swap_words: Weight,
}

impl Proportions {
    pub fn new(
        strip_all: Weight,
        strip_tone: Weight,
        drop_word: Weight,
        swap_words: Weight,
    ) -> Result<Self, CorruptionError> {
        let p = Proportions {
            strip_all,
            strip_tone,
            drop_word,
            swap_words,
        };
        let sum: Weight = p.weights().into_iter().sum();
        if sum != Weight::from_integer(1) {
            return Err(CorruptionError::BadProportions {
                sum: sum.to_string(),
            });
        }
        Ok(p)
    }

    /// Weights in heuristic declaration order.
    pub fn weights(&self) -> [Weight; 4] {
        [self.strip_all, self.strip_tone, self.drop_word, self.swap_words]
    }
}

impl Default for Proportions {
    fn default() -> Self {
        Proportions {
            strip_all: Ratio::new(3, 5),
            strip_tone: Ratio::new(1, 5),
            drop_word: Ratio::new(1, 10),
            swap_words: Ratio::new(1, 10),
        }
    }
}

/// Parse one weight, either as a fraction ("3/5") or a decimal ("0.6").
pub fn parse_weight(input: &str) -> Result<Weight, CorruptionError> {
    let bad = |reason: &str| CorruptionError::BadWeight {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    let s = input.trim();
    if let Some((n, d)) = s.split_once('/') {
        let numer: u64 = n.trim().parse().map_err(|_| bad("bad numerator"))?;
        let denom: u64 = d.trim().parse().map_err(|_| bad("bad denominator"))?;
        if denom == 0 {
            return Err(bad("zero denominator"));
        }
        return Ok(Ratio::new(numer, denom));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let int_part: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad("bad integer part"))?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("bad fractional part"));
        }
        if frac.len() > 18 {
            return Err(bad("too many decimal digits"));
        }
        let denom = 10u64.pow(frac.len() as u32);
        let frac_part: u64 = frac.parse().map_err(|_| bad("bad fractional part"))?;
        let numer = int_part
            .checked_mul(denom)
            .and_then(|v| v.checked_add(frac_part))
            .ok_or_else(|| bad("weight too large"))?;
        return Ok(Ratio::new(numer, denom));
    }
    let numer: u64 = s.parse().map_err(|_| bad("not a number"))?;
    Ok(Ratio::from_integer(numer))
}

impl std::str::FromStr for Proportions {
    type Err = CorruptionError;

    /// Parse "a,b,c,d" in heuristic declaration order.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 4 {
            return Err(CorruptionError::BadWeight {
                input: s.to_string(),
                reason: format!("expected 4 comma-separated weights, got {}", parts.len()),
            });
        }
        let w: Vec<Weight> = parts
            .iter()
            .map(|p| parse_weight(p))
            .collect::<Result<_, _>>()?;
        Proportions::new(w[0], w[1], w[2], w[3])
    }
}

impl std::fmt::Display for Proportions {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let w = self.weights();
        write!(f, "{},{},{},{}", w[0], w[1], w[2], w[3])
    }
}

// Manifests carry weights as reduced fraction strings, keyed by heuristic
// name, so they round-trip exactly (JSON floats would not).
impl Serialize for Proportions {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(4))?;
        for (h, w) in Heuristic::ALL.iter().zip(self.weights()) {
            map.serialize_entry(h.name(), &w.to_string())?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Proportions {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw: std::collections::BTreeMap<String, String> =
            Deserialize::deserialize(deserializer)?;
        let mut weights = [Weight::from_integer(0); 4];
        for (i, h) in Heuristic::ALL.iter().enumerate() {
            let s = raw
                .get(h.name())
                .ok_or_else(|| D::Error::custom(format!("missing proportion {:?}", h.name())))?;
            weights[i] = parse_weight(s).map_err(D::Error::custom)?;
        }
        Proportions::new(weights[0], weights[1], weights[2], weights[3])
            .map_err(D::Error::custom)
    }
}

/// How one line was corrupted; enough to replay it without an RNG.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorruptionRecord {
    #[serde(rename = "line")]
    pub line_index: usize,
    pub heuristic: Heuristic,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dropped_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub swap: Option<(usize, usize)>,
    #[serde(default)]
    pub fallback: bool,
}

impl CorruptionRecord {
    /// Check the structural invariants that tie fields to the heuristic.
    fn check(&self) -> Result<(), String> {
        let want_drop = self.heuristic == Heuristic::StripToneDropWord && !self.fallback;
        if self.dropped_index.is_some() != want_drop {
            return Err("dropped_index is only valid for non-fallback drop_word".into());
        }
        let want_swap = self.heuristic == Heuristic::StripToneSwapWords && !self.fallback;
        if self.swap.is_some() != want_swap {
            return Err("swap is only valid for non-fallback swap_words".into());
        }
        if let Some((i, j)) = self.swap {
            if i == j {
                return Err("swap positions must be distinct".into());
            }
        }
        if self.fallback
            && matches!(self.heuristic, Heuristic::StripAll | Heuristic::StripTone)
        {
            return Err("fallback applies only to drop_word/swap_words".into());
        }
        Ok(())
    }
}

/// Reproducibility manifest for one corrupted corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorruptionPlan {
    pub version: u32,
    pub seed: u64,
    pub proportions: Proportions,
    pub records: Vec<CorruptionRecord>,
}

impl CorruptionPlan {
    pub fn to_json(&self) -> String {
        // Plans are written by us, so serialization cannot fail.
        serde_json::to_string_pretty(self).expect("plan serialization")
    }

    pub fn from_json(json: &str) -> Result<Self, CorruptionError> {
        let plan: CorruptionPlan = serde_json::from_str(json)?;
        if plan.version != MANIFEST_VERSION {
            return Err(CorruptionError::VersionMismatch {
                found: plan.version,
                expected: MANIFEST_VERSION,
            });
        }
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<(), CorruptionError> {
        for (i, rec) in self.records.iter().enumerate() {
            if rec.line_index != i {
                return Err(CorruptionError::Integrity {
                    line: i,
                    reason: format!("record claims line {}", rec.line_index),
                });
            }
            rec.check()
                .map_err(|reason| CorruptionError::Integrity { line: i, reason })?;
        }
        Ok(())
    }

    /// Records per heuristic, in declaration order.
    pub fn heuristic_counts(&self) -> [usize; 4] {
        let mut counts = [0usize; 4];
        for rec in &self.records {
            counts[rec.heuristic.index()] += 1;
        }
        counts
    }
}

/// One dataset row: corrupted source, untouched target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelExample {
    pub source: NormalizedText,
    pub target: NormalizedText,
}

/// Exact largest-remainder quotas, then a seeded shuffle.
///
/// Quota for each heuristic is `floor(n * p)`; the leftover goes to the
/// largest fractional remainders, ties broken in declaration order. The
/// resulting multiset is permuted by the `(seed, shuffle)` substream, so the
/// same `(n, proportions, seed)` always yields the identical list.
pub fn assign_heuristics(n: usize, proportions: &Proportions, seed: u64) -> Vec<Heuristic> {
    let n_exact = Weight::from_integer(n as u64);
    let mut quotas = [0usize; 4];
    let mut remainders = [Weight::from_integer(0); 4];
    for (i, w) in proportions.weights().into_iter().enumerate() {
        let share = n_exact * w;
        let floor = share.floor();
        quotas[i] = floor.to_integer() as usize;
        remainders[i] = share - floor;
    }
    let assigned: usize = quotas.iter().sum();
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&a, &b| remainders[b].cmp(&remainders[a]).then(a.cmp(&b)));
    for &i in order.iter().take(n - assigned) {
        quotas[i] += 1;
    }

    let mut list: Vec<Heuristic> = Vec::with_capacity(n);
    for (h, &q) in Heuristic::ALL.iter().zip(quotas.iter()) {
        list.extend(std::iter::repeat(*h).take(q));
    }
    let mut rng = substream(seed, STREAM_HEURISTIC_SHUFFLE, 0);
    shuffle(&mut list, &mut rng);
    list
}

/// The per-line generator used by [`corrupt_corpus`] for line `line_index`.
pub fn line_substream(seed: u64, line_index: usize) -> impl RngCore {
    substream(seed, STREAM_LINE, line_index as u64)
}

/// What [`apply_heuristic`] decided for one sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorruptionOutcome {
    pub source: NormalizedText,
    pub dropped_index: Option<usize>,
    pub swap: Option<(usize, usize)>,
    pub fallback: bool,
}

fn join_tokens(tokens: &[&str]) -> NormalizedText {
    normalize(&tokens.join(" "))
}

/// Corrupt a single sentence.
///
/// `drop_word` needs at least two tokens and `swap_words` more than two
/// tokens plus a pair of differing tokens; otherwise the sentence falls back
/// to `strip_tone` and the outcome is flagged.
pub fn apply_heuristic(
    sentence: &NormalizedText,
    heuristic: Heuristic,
    rng: &mut impl RngCore,
) -> Result<CorruptionOutcome, CorruptionError> {
    if sentence.as_str().trim().is_empty() {
        return Err(CorruptionError::EmptySentence);
    }
    let plain = |source: NormalizedText| CorruptionOutcome {
        source,
        dropped_index: None,
        swap: None,
        fallback: false,
    };
    let fallback = |source: NormalizedText| CorruptionOutcome {
        fallback: true,
        ..plain(source)
    };

    match heuristic {
        Heuristic::StripAll => Ok(plain(strip_all(sentence))),
        Heuristic::StripTone => Ok(plain(strip_tone(sentence))),
        Heuristic::StripToneDropWord => {
            let base = strip_tone(sentence);
            let tokens: Vec<&str> = base.as_str().split_whitespace().collect();
            if tokens.len() < 2 {
                return Ok(fallback(base));
            }
            let k = bounded(rng, tokens.len() as u64) as usize;
            let mut kept = tokens;
            kept.remove(k);
            Ok(CorruptionOutcome {
                source: join_tokens(&kept),
                dropped_index: Some(k),
                swap: None,
                fallback: false,
            })
        }
        Heuristic::StripToneSwapWords => {
            let base = strip_tone(sentence);
            let tokens: Vec<&str> = base.as_str().split_whitespace().collect();
            if tokens.len() <= 2 {
                return Ok(fallback(base));
            }
            // Uniform over unordered position pairs with differing tokens.
            let mut pairs: Vec<(usize, usize)> = Vec::new();
            for i in 0..tokens.len() {
                for j in i + 1..tokens.len() {
                    if tokens[i] != tokens[j] {
                        pairs.push((i, j));
                    }
                }
            }
            if pairs.is_empty() {
                return Ok(fallback(base));
            }
            let (i, j) = pairs[bounded(rng, pairs.len() as u64) as usize];
            let mut swapped = tokens;
            swapped.swap(i, j);
            Ok(CorruptionOutcome {
                source: join_tokens(&swapped),
                dropped_index: None,
                swap: Some((i, j)),
                fallback: false,
            })
        }
    }
}

fn corrupt_line(
    line_index: usize,
    sentence: &NormalizedText,
    heuristic: Heuristic,
    seed: u64,
) -> Result<(ParallelExample, CorruptionRecord), CorruptionError> {
    let mut rng = substream(seed, STREAM_LINE, line_index as u64);
    let outcome = apply_heuristic(sentence, heuristic, &mut rng).map_err(|e| match e {
        CorruptionError::EmptySentence => CorruptionError::EmptyLine { line: line_index },
        other => other,
    })?;
    let example = ParallelExample {
        source: outcome.source,
        target: sentence.clone(),
    };
    let record = CorruptionRecord {
        line_index,
        heuristic,
        dropped_index: outcome.dropped_index,
        swap: outcome.swap,
        fallback: outcome.fallback,
    };
    Ok((example, record))
}

fn finish_corpus(
    results: Vec<Result<(ParallelExample, CorruptionRecord), CorruptionError>>,
    proportions: &Proportions,
    seed: u64,
) -> Result<(Vec<ParallelExample>, CorruptionPlan), CorruptionError> {
    let mut examples = Vec::with_capacity(results.len());
    let mut records = Vec::with_capacity(results.len());
    for result in results {
        let (example, record) = result?;
        examples.push(example);
        records.push(record);
    }
    let plan = CorruptionPlan {
        version: MANIFEST_VERSION,
        seed,
        proportions: proportions.clone(),
        records,
    };
    Ok((examples, plan))
}

/// Corrupt a whole corpus; line order is preserved and the result depends
/// only on `(corpus, proportions, seed)`.
#[cfg(feature = "parallel")]
pub fn corrupt_corpus(
    corpus: &[NormalizedText],
    proportions: &Proportions,
    seed: u64,
) -> Result<(Vec<ParallelExample>, CorruptionPlan), CorruptionError> {
    use rayon::prelude::*;
    let assignments = assign_heuristics(corpus.len(), proportions, seed);
    let results: Vec<_> = corpus
        .par_iter()
        .zip(assignments.par_iter())
        .enumerate()
        .map(|(i, (line, &h))| corrupt_line(i, line, h, seed))
        .collect();
    finish_corpus(results, proportions, seed)
}

/// Corrupt a whole corpus; line order is preserved and the result depends
/// only on `(corpus, proportions, seed)`.
#[cfg(not(feature = "parallel"))]
pub fn corrupt_corpus(
    corpus: &[NormalizedText],
    proportions: &Proportions,
    seed: u64,
) -> Result<(Vec<ParallelExample>, CorruptionPlan), CorruptionError> {
    corrupt_corpus_seq(corpus, proportions, seed)
}

/// Sequential twin of [`corrupt_corpus`]; always produces identical output.
pub fn corrupt_corpus_seq(
    corpus: &[NormalizedText],
    proportions: &Proportions,
    seed: u64,
) -> Result<(Vec<ParallelExample>, CorruptionPlan), CorruptionError> {
    let assignments = assign_heuristics(corpus.len(), proportions, seed);
    let results: Vec<_> = corpus
        .iter()
        .zip(assignments.iter())
        .enumerate()
        .map(|(i, (line, &h))| corrupt_line(i, line, h, seed))
        .collect();
    finish_corpus(results, proportions, seed)
}

/// Apply one record literally, with integrity checks.
pub fn apply_record(
    sentence: &NormalizedText,
    record: &CorruptionRecord,
) -> Result<NormalizedText, CorruptionError> {
    let line = record.line_index;
    let integrity = |reason: String| CorruptionError::Integrity { line, reason };
    record.check().map_err(integrity)?;

    match record.heuristic {
        Heuristic::StripAll => Ok(strip_all(sentence)),
        Heuristic::StripTone => Ok(strip_tone(sentence)),
        Heuristic::StripToneDropWord => {
            let base = strip_tone(sentence);
            if record.fallback {
                return Ok(base);
            }
            let tokens: Vec<&str> = base.as_str().split_whitespace().collect();
            let k = record.dropped_index.unwrap();
            if tokens.len() < 2 {
                return Err(integrity("drop_word on a sentence of fewer than 2 words".into()));
            }
            if k >= tokens.len() {
                return Err(integrity(format!(
                    "dropped_index {} out of range for {} tokens",
                    k,
                    tokens.len()
                )));
            }
            let mut kept = tokens;
            kept.remove(k);
            Ok(join_tokens(&kept))
        }
        Heuristic::StripToneSwapWords => {
            let base = strip_tone(sentence);
            if record.fallback {
                return Ok(base);
            }
            let tokens: Vec<&str> = base.as_str().split_whitespace().collect();
            let (i, j) = record.swap.unwrap();
            if tokens.len() <= 2 {
                return Err(integrity("swap_words on a sentence of 2 or fewer words".into()));
            }
            if i >= tokens.len() || j >= tokens.len() {
                return Err(integrity(format!(
                    "swap positions ({}, {}) out of range for {} tokens",
                    i,
                    j,
                    tokens.len()
                )));
            }
            if tokens[i] == tokens[j] {
                return Err(integrity(format!(
                    "swap positions ({}, {}) hold identical tokens",
                    i, j
                )));
            }
            let mut swapped = tokens;
            swapped.swap(i, j);
            Ok(join_tokens(&swapped))
        }
    }
}

/// Re-derive a corrupted corpus from its manifest, without any RNG.
pub fn replay(
    corpus: &[NormalizedText],
    plan: &CorruptionPlan,
) -> Result<Vec<ParallelExample>, CorruptionError> {
    if corpus.len() != plan.records.len() {
        return Err(CorruptionError::LengthMismatch {
            plan: plan.records.len(),
            corpus: corpus.len(),
        });
    }
    plan.validate()?;
    corpus
        .iter()
        .zip(plan.records.iter())
        .map(|(sentence, record)| {
            Ok(ParallelExample {
                source: apply_record(sentence, record)?,
                target: sentence.clone(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthography::normalize;

    fn counts_of(list: &[Heuristic]) -> [usize; 4] {
        let mut counts = [0usize; 4];
        for h in list {
            counts[h.index()] += 1;
        }
        counts
    }

    #[test]
    fn quotas_at_default_proportions() {
        let p = Proportions::default();
        assert_eq!(counts_of(&assign_heuristics(10, &p, 1)), [6, 2, 1, 1]);
        // Largest remainder with the declaration-order tie break: the single
        // leftover goes to drop_word, not swap_words.
        assert_eq!(counts_of(&assign_heuristics(5, &p, 1)), [3, 1, 1, 0]);
        assert_eq!(assign_heuristics(0, &p, 1), vec![]);
        assert_eq!(
            counts_of(&assign_heuristics(1000, &p, 42)),
            [600, 200, 100, 100]
        );
    }

    #[test]
    fn assignment_is_deterministic_and_seed_sensitive() {
        let p = Proportions::default();
        let a = assign_heuristics(100, &p, 7);
        let b = assign_heuristics(100, &p, 7);
        let c = assign_heuristics(100, &p, 8);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(counts_of(&a), counts_of(&c));
    }

    #[test]
    fn proportions_must_sum_to_one() {
        let err = Proportions::new(
            Ratio::new(1, 2),
            Ratio::new(1, 4),
            Ratio::new(1, 8),
            Ratio::new(1, 16),
        )
        .unwrap_err();
        assert!(matches!(err, CorruptionError::BadProportions { .. }));
    }

    #[test]
    fn proportions_parse_decimals_and_fractions() {
        let p: Proportions = "0.6,0.2,0.1,0.1".parse().unwrap();
        assert_eq!(p, Proportions::default());
        let q: Proportions = "3/5,1/5,1/10,1/10".parse().unwrap();
        assert_eq!(q, Proportions::default());
        assert!("0.5,0.2,0.1,0.1".parse::<Proportions>().is_err());
        assert!("0.6,0.2,0.2".parse::<Proportions>().is_err());
    }

    #[test]
    fn drop_word_at_recorded_position() {
        let target = normalize("Màmá ò gbàgbọ́");
        let record = CorruptionRecord {
            line_index: 0,
            heuristic: Heuristic::StripToneDropWord,
            dropped_index: Some(1),
            swap: None,
            fallback: false,
        };
        assert_eq!(apply_record(&target, &record).unwrap().as_str(), "Mama gbagbọ");
    }

    #[test]
    fn swap_reproduces_known_source() {
        let target = normalize("Ṣùgbọ́n síbẹ̀síbẹ̀, Màmá ò gbàgbọ́.");
        let record = CorruptionRecord {
            line_index: 0,
            heuristic: Heuristic::StripToneSwapWords,
            dropped_index: None,
            swap: Some((0, 1)),
            fallback: false,
        };
        assert_eq!(
            apply_record(&target, &record).unwrap().as_str(),
            "sib\u{1EB9}sib\u{1EB9}, \u{1E62}ugb\u{1ECD}n Mama o gbagb\u{1ECD}."
        );
    }

    #[test]
    fn short_sentence_falls_back() {
        let mut rng = substream(1, STREAM_LINE, 0);
        let out =
            apply_heuristic(&normalize("Mama"), Heuristic::StripToneSwapWords, &mut rng).unwrap();
        assert!(out.fallback);
        assert_eq!(out.source.as_str(), "Mama");
        assert_eq!(out.swap, None);

        let out =
            apply_heuristic(&normalize("Màmá"), Heuristic::StripToneDropWord, &mut rng).unwrap();
        assert!(out.fallback);
        assert_eq!(out.source.as_str(), "Mama");
    }

    #[test]
    fn swap_needs_a_differing_pair() {
        let mut rng = substream(1, STREAM_LINE, 0);
        let out = apply_heuristic(
            &normalize("oko oko oko"),
            Heuristic::StripToneSwapWords,
            &mut rng,
        )
        .unwrap();
        assert!(out.fallback);
    }

    #[test]
    fn empty_sentence_is_an_error() {
        let mut rng = substream(1, STREAM_LINE, 0);
        let err = apply_heuristic(&normalize("   "), Heuristic::StripAll, &mut rng).unwrap_err();
        assert!(matches!(err, CorruptionError::EmptySentence));
    }

    #[test]
    fn corrupt_twice_is_identical() {
        let corpus: Vec<_> = ["Ṣùgbọ́n síbẹ̀síbẹ̀, Màmá ò gbàgbọ́.", "ọjọ́ dára púpọ̀", "Màmá ò wá"]
            .iter()
            .cycle()
            .take(30)
            .map(|s| normalize(s))
            .collect();
        let p = Proportions::default();
        let (ex1, plan1) = corrupt_corpus(&corpus, &p, 42).unwrap();
        let (ex2, plan2) = corrupt_corpus(&corpus, &p, 42).unwrap();
        assert_eq!(ex1, ex2);
        assert_eq!(plan1, plan2);
        // Targets are untouched inputs.
        for (ex, line) in ex1.iter().zip(corpus.iter()) {
            assert_eq!(&ex.target, line);
        }
    }

    #[test]
    fn replay_matches_corrupt() {
        let corpus: Vec<_> = ["Ṣùgbọ́n síbẹ̀síbẹ̀, Màmá ò gbàgbọ́.", "ọjọ́ dára púpọ̀ lónìí rárá"]
            .iter()
            .cycle()
            .take(24)
            .map(|s| normalize(s))
            .collect();
        let p = Proportions::default();
        let (examples, plan) = corrupt_corpus(&corpus, &p, 7).unwrap();
        let replayed = replay(&corpus, &plan).unwrap();
        assert_eq!(examples, replayed);
    }

    #[test]
    fn replay_rejects_bad_records() {
        let corpus = vec![normalize("Màmá ò gbàgbọ́")];
        let plan = CorruptionPlan {
            version: MANIFEST_VERSION,
            seed: 0,
            proportions: Proportions::default(),
            records: vec![CorruptionRecord {
                line_index: 0,
                heuristic: Heuristic::StripToneDropWord,
                dropped_index: Some(99),
                swap: None,
                fallback: false,
            }],
        };
        let err = replay(&corpus, &plan).unwrap_err();
        assert!(matches!(err, CorruptionError::Integrity { line: 0, .. }));

        let err = replay(&[], &plan).unwrap_err();
        assert!(matches!(err, CorruptionError::LengthMismatch { .. }));
    }

    #[test]
    fn manifest_round_trips() {
        let corpus: Vec<_> = (0..10)
            .map(|i| normalize(&format!("ọjọ́ dára púpọ̀ number{i} ni")))
            .collect();
        let (_, plan) = corrupt_corpus(&corpus, &Proportions::default(), 3).unwrap();
        let json = plan.to_json();
        let back = CorruptionPlan::from_json(&json).unwrap();
        assert_eq!(plan, back);
        // Heuristic names on the wire are the documented strings.
        for name in ["strip_all", "strip_tone", "drop_word", "swap_words"] {
            assert!(json.contains(name), "missing {name} in manifest");
        }
    }

    #[test]
    fn manifest_version_is_checked() {
        let json = r#"{"version":99,"seed":1,"proportions":{"strip_all":"3/5","strip_tone":"1/5","drop_word":"1/10","swap_words":"1/10"},"records":[]}"#;
        let err = CorruptionPlan::from_json(json).unwrap_err();
        assert!(matches!(err, CorruptionError::VersionMismatch { found: 99, .. }));
    }
}
