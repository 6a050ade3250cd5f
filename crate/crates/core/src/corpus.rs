//! Corpus ingestion and deterministic splitting.
//!
//! Text arrives one sentence per line (optionally `text<TAB>domain` for
//! labeled corpora). The two partition operations — halving a corpus with
//! equal per-domain representation, and carving out a fixed fraction as a
//! test set — are driven entirely by `(input, seed)`.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use thiserror::Error;

use crate::orthography::{normalize_bytes, NormalizedText, OrthographyError};
use crate::rng::{shuffle, substream, STREAM_SAMPLE, STREAM_SPLIT};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {source}")]
    Decode {
        line: usize,
        #[source]
        source: OrthographyError,
    },
    #[error("line {line} is blank")]
    BlankLine { line: usize },
    #[error("line {line}: expected \"text<TAB>domain\"")]
    MissingLabel { line: usize },
    #[error("sentence {index} has an empty domain label")]
    UnlabeledSentence { index: usize },
    #[error("fraction must be strictly between 0 and 1, got {fraction}")]
    FractionOutOfRange { fraction: String },
}

/// What to do with blank lines when loading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BlankLines {
    #[default]
    Skip,
    Reject,
    /// Keep blanks as empty sentences (needed for line-aligned scoring).
    Keep,
}

/// A sentence with its domain label and original position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledSentence {
    pub text: NormalizedText,
    pub domain: String,
    pub line_index: usize,
}

/// Outcome of [`stratified_halve`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitResult {
    pub dev: Vec<LabeledSentence>,
    pub test: Vec<LabeledSentence>,
    /// domain → (dev count, test count)
    pub per_domain_counts: BTreeMap<String, (usize, usize)>,
}

fn read_lines_raw(path: &Path) -> Result<Vec<Vec<u8>>, CorpusError> {
    let io_err = |source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    };
    let file = std::fs::File::open(path).map_err(io_err)?;
    let mut reader = BufReader::new(file);
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes).map_err(io_err)?;
    let mut lines: Vec<Vec<u8>> = Vec::new();
    let mut buf = &bytes[..];
    let mut line = Vec::new();
    while buf.read_until(b'\n', &mut line).unwrap_or(0) > 0 {
        if line.last() == Some(&b'\n') {
            line.pop();
        }
        if line.last() == Some(&b'\r') {
            line.pop();
        }
        lines.push(std::mem::take(&mut line));
    }
    Ok(lines)
}

/// Load one NFC-normalized sentence per line. Handles LF and CRLF endings;
/// blank lines are skipped or rejected according to `blanks`.
pub fn load_lines(path: &Path, blanks: BlankLines) -> Result<Vec<NormalizedText>, CorpusError> {
    let mut out = Vec::new();
    for (i, raw) in read_lines_raw(path)?.into_iter().enumerate() {
        let line_no = i + 1;
        let text = normalize_bytes(&raw).map_err(|source| CorpusError::Decode {
            line: line_no,
            source,
        })?;
        if text.as_str().trim().is_empty() {
            match blanks {
                BlankLines::Skip => continue,
                BlankLines::Reject => return Err(CorpusError::BlankLine { line: line_no }),
                BlankLines::Keep => {}
            }
        }
        out.push(text);
    }
    Ok(out)
}

/// Load a labeled corpus from `text<TAB>domain` lines.
pub fn load_labeled(path: &Path, blanks: BlankLines) -> Result<Vec<LabeledSentence>, CorpusError> {
    let mut out = Vec::new();
    for (i, raw) in read_lines_raw(path)?.into_iter().enumerate() {
        let line_no = i + 1;
        let decoded = normalize_bytes(&raw).map_err(|source| CorpusError::Decode {
            line: line_no,
            source,
        })?;
        if decoded.as_str().trim().is_empty() {
            match blanks {
                BlankLines::Skip => continue,
                BlankLines::Reject | BlankLines::Keep => {
                    return Err(CorpusError::BlankLine { line: line_no })
                }
            }
        }
        let s = decoded.as_str();
        let (text, domain) = s
            .split_once('\t')
            .ok_or(CorpusError::MissingLabel { line: line_no })?;
        out.push(LabeledSentence {
            text: crate::orthography::normalize(text),
            domain: domain.trim().to_string(),
            line_index: out.len(),
        });
    }
    Ok(out)
}

/// Split a labeled corpus into two halves with equal per-domain
/// representation.
///
/// Within each domain the sentences are shuffled by the seeded generator and
/// the first `floor(n/2)` go to dev, the rest to test; per-domain imbalance
/// is therefore at most 1, with the smaller half on the dev side. Both
/// halves come back in original line order.
pub fn stratified_halve(
    corpus: &[LabeledSentence],
    seed: u64,
) -> Result<SplitResult, CorpusError> {
    let mut by_domain: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (index, sentence) in corpus.iter().enumerate() {
        if sentence.domain.is_empty() {
            return Err(CorpusError::UnlabeledSentence { index });
        }
        by_domain.entry(&sentence.domain).or_default().push(index);
    }

    let mut rng = substream(seed, STREAM_SPLIT, 0);
    let mut dev_idx: Vec<usize> = Vec::new();
    let mut test_idx: Vec<usize> = Vec::new();
    let mut per_domain_counts = BTreeMap::new();
    for (domain, mut indices) in by_domain {
        shuffle(&mut indices, &mut rng);
        let dev_n = indices.len() / 2;
        dev_idx.extend(&indices[..dev_n]);
        test_idx.extend(&indices[dev_n..]);
        per_domain_counts.insert(domain.to_string(), (dev_n, indices.len() - dev_n));
    }
    dev_idx.sort_unstable();
    test_idx.sort_unstable();

    Ok(SplitResult {
        dev: dev_idx.iter().map(|&i| corpus[i].clone()).collect(),
        test: test_idx.iter().map(|&i| corpus[i].clone()).collect(),
        per_domain_counts,
    })
}

/// Carve out `ceil(fraction * n)` sentences as a seeded sample.
///
/// Membership comes from a seeded shuffle of the indices; both the sample
/// and the remainder preserve the corpus's original relative order.
pub fn sample_fraction(
    corpus: &[NormalizedText],
    fraction: num_rational::Ratio<u64>,
    seed: u64,
) -> Result<(Vec<NormalizedText>, Vec<NormalizedText>), CorpusError> {
    use num_rational::Ratio;
    if fraction <= Ratio::from_integer(0) || fraction >= Ratio::from_integer(1) {
        return Err(CorpusError::FractionOutOfRange {
            fraction: fraction.to_string(),
        });
    }
    let n = corpus.len();
    let take = (Ratio::from_integer(n as u64) * fraction).ceil().to_integer() as usize;

    let mut indices: Vec<usize> = (0..n).collect();
    let mut rng = substream(seed, STREAM_SAMPLE, 0);
    shuffle(&mut indices, &mut rng);
    let mut chosen = vec![false; n];
    for &i in indices.iter().take(take) {
        chosen[i] = true;
    }

    let mut sampled = Vec::with_capacity(take);
    let mut remainder = Vec::with_capacity(n - take);
    for (i, line) in corpus.iter().enumerate() {
        if chosen[i] {
            sampled.push(line.clone());
        } else {
            remainder.push(line.clone());
        }
    }
    Ok((sampled, remainder))
}
