//! Unicode-correct handling of Yorùbá diacritics.
//!
//! Yorùbá marks tone with combining accents (grave = low, acute = high, and
//! an optional macron = mid) and vowel quality with a combining dot below.
//! This module fixes the mark inventory, normalizes text to NFC at every
//! boundary, segments text into graphemes, and implements the two strip
//! operations every corrupted source side is built from: removing all
//! diacritics, or removing tone marks while keeping under-dots.

use std::fmt;

use thiserror::Error;
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

/// Combining grave accent, the low-tone mark.
pub const COMBINING_GRAVE: char = '\u{0300}';
/// Combining acute accent, the high-tone mark.
pub const COMBINING_ACUTE: char = '\u{0301}';
/// Combining macron, the (optional) mid-tone mark.
pub const COMBINING_MACRON: char = '\u{0304}';
/// Combining dot below, marking open vowels and the sound written "ṣ".
pub const COMBINING_UNDERDOT: char = '\u{0323}';

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrthographyError {
    #[error("invalid UTF-8 byte sequence at byte offset {offset}")]
    InvalidUtf8 { offset: usize },
    #[error("combining mark U+{mark:04X} at character {position} has no preceding base")]
    DanglingMark { position: usize, mark: u32 },
}

/// Tone carried by a single grapheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ToneMark {
    Low,
    Mid,
    High,
    #[default]
    None,
}

impl ToneMark {
    /// The combining scalar this tone serializes to, if any.
    pub fn combining_char(self) -> Option<char> {
        match self {
            ToneMark::Low => Some(COMBINING_GRAVE),
            ToneMark::Mid => Some(COMBINING_MACRON),
            ToneMark::High => Some(COMBINING_ACUTE),
            ToneMark::None => None,
        }
    }

    /// Classify a combining scalar as a tone mark.
    pub fn from_char(c: char) -> Option<ToneMark> {
        match c {
            COMBINING_GRAVE => Some(ToneMark::Low),
            COMBINING_MACRON => Some(ToneMark::Mid),
            COMBINING_ACUTE => Some(ToneMark::High),
            _ => None,
        }
    }
}

/// One base scalar plus the marks attached to it.
///
/// The first tone mark in canonical order lands in `tone`; an under-dot on a
/// letter lands in `underdot`; every other combining scalar (including a
/// second tone mark in noisy input, or an under-dot on a non-letter) is kept
/// verbatim in `other_marks` so serialization loses nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grapheme {
    pub base: char,
    pub tone: ToneMark,
    pub underdot: bool,
    pub other_marks: Vec<char>,
}

impl Grapheme {
    pub fn bare(base: char) -> Self {
        Grapheme {
            base,
            tone: ToneMark::None,
            underdot: false,
            other_marks: Vec::new(),
        }
    }

    /// Recompose this grapheme into NFC text.
    pub fn serialized(&self) -> String {
        let mut s = String::with_capacity(8);
        s.push(self.base);
        if self.underdot {
            s.push(COMBINING_UNDERDOT);
        }
        if let Some(t) = self.tone.combining_char() {
            s.push(t);
        }
        s.extend(self.other_marks.iter());
        s.nfc().collect()
    }
}

/// UTF-8 text guaranteed to be in Unicode canonical composed form (NFC).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalizedText(String);

impl NormalizedText {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Wrap a string that is already known to be NFC (output of `.nfc()`).
    fn from_nfc(s: String) -> Self {
        NormalizedText(s)
    }
}

impl fmt::Display for NormalizedText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Canonically compose `text` (NFC). Idempotent.
pub fn normalize(text: &str) -> NormalizedText {
    NormalizedText::from_nfc(text.nfc().collect())
}

/// Decode and normalize raw bytes, reporting the offset of any bad byte.
pub fn normalize_bytes(bytes: &[u8]) -> Result<NormalizedText, OrthographyError> {
    match std::str::from_utf8(bytes) {
        Ok(s) => Ok(normalize(s)),
        Err(e) => Err(OrthographyError::InvalidUtf8 {
            offset: e.valid_up_to(),
        }),
    }
}

/// Split normalized text into graphemes.
///
/// Works over the canonical decomposition, attaching each combining mark to
/// the preceding base. Concatenating `serialized()` over the result
/// reproduces the input byte for byte.
pub fn segment(text: &NormalizedText) -> Result<Vec<Grapheme>, OrthographyError> {
    let mut graphemes: Vec<Grapheme> = Vec::new();
    for (position, c) in text.as_str().nfd().enumerate() {
        if is_combining_mark(c) {
            let Some(current) = graphemes.last_mut() else {
                return Err(OrthographyError::DanglingMark {
                    position,
                    mark: c as u32,
                });
            };
            attach_mark(current, c);
        } else {
            graphemes.push(Grapheme::bare(c));
        }
    }
    Ok(graphemes)
}

fn attach_mark(g: &mut Grapheme, c: char) {
    if let Some(tone) = ToneMark::from_char(c) {
        if g.tone == ToneMark::None {
            g.tone = tone;
            return;
        }
    } else if c == COMBINING_UNDERDOT && !g.underdot && g.base.is_alphabetic() {
        g.underdot = true;
        return;
    }
    g.other_marks.push(c);
}

fn strip_marks(text: &NormalizedText, keep_underdot: bool) -> NormalizedText {
    let filtered: String = text
        .as_str()
        .nfd()
        .filter(|&c| match c {
            COMBINING_GRAVE | COMBINING_ACUTE | COMBINING_MACRON => false,
            COMBINING_UNDERDOT => keep_underdot,
            _ => true,
        })
        .collect();
    NormalizedText::from_nfc(filtered.nfc().collect())
}

/// Remove every tone mark and every under-dot: "Ṣùgbọ́n" → "Sugbon".
///
/// Case and all other characters (including unrelated combining marks) are
/// preserved; marks are removed even when attached to non-letters.
pub fn strip_all(text: &NormalizedText) -> NormalizedText {
    strip_marks(text, false)
}

/// Remove tone marks but keep under-dots: "Ṣùgbọ́n" → "Ṣugbọn".
pub fn strip_tone(text: &NormalizedText) -> NormalizedText {
    strip_marks(text, true)
}

/// Per-category mark counts for a text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DiacriticProfile {
    pub low: usize,
    pub mid: usize,
    pub high: usize,
    pub underdot: usize,
}

impl DiacriticProfile {
    pub fn total(&self) -> usize {
        self.low + self.mid + self.high + self.underdot
    }
}

/// Count tone marks and under-dots, looking through composed characters.
pub fn diacritic_profile(text: &NormalizedText) -> DiacriticProfile {
    let mut p = DiacriticProfile::default();
    for c in text.as_str().nfd() {
        match c {
            COMBINING_GRAVE => p.low += 1,
            COMBINING_MACRON => p.mid += 1,
            COMBINING_ACUTE => p.high += 1,
            COMBINING_UNDERDOT => p.underdot += 1,
            _ => {}
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_composes_decomposed_input() {
        // "e" + dot below + acute composes to U+1EB9 + U+0301.
        let n = normalize("e\u{0323}\u{0301}");
        assert_eq!(n.as_str(), "\u{1EB9}\u{0301}");
    }

    #[test]
    fn normalize_is_identity_on_ascii() {
        assert_eq!(normalize("Mama").as_str(), "Mama");
    }

    #[test]
    fn normalize_is_idempotent_on_nfc() {
        let long: String = "Ṣùgbọ́n síbẹ̀síbẹ̀, Màmá ò gbàgbọ́ ".repeat(4);
        let once = normalize(&long);
        let twice = normalize(once.as_str());
        assert_eq!(once.as_str().as_bytes(), twice.as_str().as_bytes());
    }

    #[test]
    fn normalize_bytes_reports_offset() {
        let err = normalize_bytes(&[b'o', b'k', 0xFF, b'o']).unwrap_err();
        assert_eq!(err, OrthographyError::InvalidUtf8 { offset: 2 });
    }

    #[test]
    fn segment_composed_vowel() {
        let gs = segment(&normalize("ọ́")).unwrap();
        assert_eq!(gs.len(), 1);
        assert_eq!(gs[0].base, 'o');
        assert_eq!(gs[0].tone, ToneMark::High);
        assert!(gs[0].underdot);
        assert!(gs[0].other_marks.is_empty());
    }

    #[test]
    fn segment_digraph_is_two_graphemes() {
        let gs = segment(&normalize("gb")).unwrap();
        assert_eq!(gs.len(), 2);
        assert_eq!((gs[0].base, gs[1].base), ('g', 'b'));
    }

    #[test]
    fn segment_keeps_punctuation_bare() {
        let gs = segment(&normalize("à,")).unwrap();
        assert_eq!(gs.len(), 2);
        assert_eq!(gs[0].base, 'a');
        assert_eq!(gs[0].tone, ToneMark::Low);
        assert_eq!(gs[1].base, ',');
        assert_eq!(gs[1].tone, ToneMark::None);
    }

    #[test]
    fn segment_rejects_leading_mark() {
        let text = NormalizedText("\u{0301}a".to_string());
        let err = segment(&text).unwrap_err();
        assert_eq!(
            err,
            OrthographyError::DanglingMark {
                position: 0,
                mark: 0x0301
            }
        );
    }

    #[test]
    fn segment_round_trips() {
        for s in ["Ṣùgbọ́n síbẹ̀síbẹ̀, Màmá ò gbàgbọ́.", "ọjọ́ 123 dára!", "", "gbàgbọ́"] {
            let n = normalize(s);
            let gs = segment(&n).unwrap();
            let rebuilt: String = gs.iter().map(|g| g.serialized()).collect();
            assert_eq!(rebuilt, n.as_str());
            assert_eq!(segment(&normalize(&rebuilt)).unwrap(), gs);
        }
    }

    #[test]
    fn underdot_on_non_letter_goes_to_other_marks() {
        let gs = segment(&normalize("1\u{0323}")).unwrap();
        assert_eq!(gs.len(), 1);
        assert!(!gs[0].underdot);
        assert_eq!(gs[0].other_marks, vec![COMBINING_UNDERDOT]);
        // Round trip still exact.
        assert_eq!(gs[0].serialized(), normalize("1\u{0323}").as_str());
    }

    #[test]
    fn strip_all_removes_every_mark() {
        assert_eq!(strip_all(&normalize("Ṣùgbọ́n")).as_str(), "Sugbon");
        assert_eq!(strip_all(&normalize("síbẹ̀síbẹ̀,")).as_str(), "sibesibe,");
        assert_eq!(
            strip_all(&normalize("Mama o gbagbo.")).as_str(),
            "Mama o gbagbo."
        );
    }

    #[test]
    fn strip_tone_keeps_underdots() {
        assert_eq!(strip_tone(&normalize("Ṣùgbọ́n")).as_str(), "Ṣugbọn");
        assert_eq!(strip_tone(&normalize("Màmá")).as_str(), "Mama");
        assert_eq!(strip_tone(&normalize("gbàgbọ́.")).as_str(), "gbagbọ.");
    }

    #[test]
    fn strip_removes_marks_from_non_letters() {
        // Noisy corpora sometimes carry marks on digits or punctuation.
        assert_eq!(strip_all(&normalize("1\u{0323},\u{0301}")).as_str(), "1,");
        assert_eq!(strip_tone(&normalize(",\u{0301}")).as_str(), ",");
    }

    #[test]
    fn strip_passes_foreign_marks_through() {
        // U+0308 (diaeresis) is not in the mark inventory.
        let n = normalize("a\u{0308}\u{0301}");
        assert_eq!(strip_all(&n).as_str(), "ä");
        assert_eq!(strip_tone(&n).as_str(), "ä");
    }

    #[test]
    fn profile_counts_by_category() {
        let p = diacritic_profile(&normalize("Ṣùgbọ́n"));
        assert_eq!(
            p,
            DiacriticProfile {
                low: 1,
                mid: 0,
                high: 1,
                underdot: 2
            }
        );
        assert_eq!(diacritic_profile(&normalize("")), DiacriticProfile::default());
    }

    #[test]
    fn profile_is_zero_after_strip_all() {
        let n = normalize("Ṣùgbọ́n síbẹ̀síbẹ̀, Màmá ò gbàgbọ́ ā");
        assert_eq!(diacritic_profile(&strip_all(&n)).total(), 0);
    }

    #[test]
    fn strip_handles_macron() {
        assert_eq!(strip_tone(&normalize("ā")).as_str(), "a");
        let p = diacritic_profile(&normalize("ā"));
        assert_eq!(p.mid, 1);
    }
}
