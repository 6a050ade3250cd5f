//! International tokenization for metric computation.
//!
//! Implements the language-agnostic tokenization the mteval-v14
//! international mode defined and sacrebleu's `intl` tokenizer reproduces:
//! punctuation is split from adjacent non-digits (so "3.5" and "12,000" stay
//! whole while "gbagbọ." splits), and symbols are always split out. Scoring
//! text arrives untokenized and passes through here.

use once_cell::sync::Lazy;
use regex::Regex;

use crate::orthography::NormalizedText;

static PUNCT_AFTER_NON_DIGIT: Lazy<Regex> =
    Lazy::new(|| Regex::new(r"(\P{N})(\p{P})").unwrap());
static PUNCT_BEFORE_NON_DIGIT: Lazy<Regex> =
    Lazy::new(|| Regex::new(r"(\p{P})(\P{N})").unwrap());
static SYMBOL: Lazy<Regex> = Lazy::new(|| Regex::new(r"(\p{S})").unwrap());

/// Tokenize one segment: pad punctuation/symbols per the rules above, then
/// split on whitespace.
pub fn intl_tokenize(text: &NormalizedText) -> Vec<String> {
    let line = PUNCT_AFTER_NON_DIGIT.replace_all(text.as_str(), "$1 $2 ");
    let line = PUNCT_BEFORE_NON_DIGIT.replace_all(&line, " $1 $2");
    let line = SYMBOL.replace_all(&line, " $1 ");
    line.split_whitespace().map(str::to_string).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthography::normalize;

    fn toks(s: &str) -> Vec<String> {
        intl_tokenize(&normalize(s))
    }

    #[test]
    fn splits_sentence_final_punctuation() {
        assert_eq!(toks("Mama o gbagbọ."), vec!["Mama", "o", "gbagbọ", "."]);
    }

    #[test]
    fn splits_comma_after_letters() {
        assert_eq!(toks("sibẹsibẹ, Ṣugbọn"), vec!["sibẹsibẹ", ",", "Ṣugbọn"]);
    }

    #[test]
    fn keeps_digit_flanked_separators() {
        assert_eq!(toks("3.5"), vec!["3.5"]);
        assert_eq!(toks("12,000"), vec!["12,000"]);
        assert_eq!(toks("owó 3.5 ni"), vec!["owó", "3.5", "ni"]);
    }

    #[test]
    fn splits_punctuation_between_letters() {
        assert_eq!(toks("a.b"), vec!["a", ".", "b"]);
        assert_eq!(toks("fifty-five"), vec!["fifty", "-", "five"]);
    }

    #[test]
    fn hyphen_between_digits_survives() {
        assert_eq!(toks("5-6"), vec!["5-6"]);
        // A non-digit on either side still cuts.
        assert_eq!(toks("5-x"), vec!["5", "-", "x"]);
        assert_eq!(toks("x-5"), vec!["x", "-", "5"]);
    }

    #[test]
    fn trailing_period_after_digit_stays_attached() {
        // Nothing follows the '.', so neither padding rule fires.
        assert_eq!(toks("ní 5."), vec!["ní", "5."]);
    }

    #[test]
    fn symbols_always_split() {
        assert_eq!(toks("50% báyìí"), vec!["50", "%", "báyìí"]);
        assert_eq!(toks("a+b"), vec!["a", "+", "b"]);
        assert_eq!(toks("$5"), vec!["$", "5"]);
    }

    #[test]
    fn empty_and_whitespace() {
        assert!(toks("").is_empty());
        assert!(toks("   ").is_empty());
    }

    #[test]
    fn plain_punctuation_is_isolated() {
        // Without digits around, every punctuation char is its own token.
        let out = toks("ní ọjọ́ kan, ó sọ: \"bẹ́ẹ̀ni!\"");
        for t in &out {
            let only_punct = t.chars().count() == 1
                && PUNCT_AFTER_NON_DIGIT.is_match(&format!("a{t}"));
            if only_punct {
                assert_eq!(t.chars().count(), 1);
            }
        }
        assert!(out.contains(&",".to_string()));
        assert!(out.contains(&":".to_string()));
        assert!(out.contains(&"!".to_string()));
    }
}
