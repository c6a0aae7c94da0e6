use std::collections::BTreeMap;

use super::VerseRef;

/// One translation of the corpus: verse-keyed UTF-8 text.
///
/// Empty verse texts are legal; they mark verses the source captured but
/// left blank (for example disputed passages).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Translation {
    pub translation_id: String,
    pub language_code: String,
    pub variant: Option<String>,
    pub verses: BTreeMap<VerseRef, String>,
}

impl Translation {
    pub fn new(translation_id: &str, language_code: &str, variant: Option<&str>) -> Self {
        Translation {
            translation_id: translation_id.to_string(),
            language_code: language_code.to_string(),
            variant: variant.filter(|v| !v.is_empty()).map(str::to_string),
            verses: BTreeMap::new(),
        }
    }

    /// Storage key for the language: `por`, or `por_pt` for a variant.
    /// Variants are distinct languages for every downstream purpose.
    pub fn language_key(&self) -> String {
        language_key(&self.language_code, self.variant.as_deref())
    }

    pub fn text(&self, verse: &VerseRef) -> Option<&str> {
        self.verses.get(verse).map(String::as_str)
    }

    /// Verses that count as captured. Empty-text verses are included only
    /// when `count_empty` is set.
    pub fn captured_verses(&self, count_empty: bool) -> impl Iterator<Item = (&VerseRef, &str)> {
        self.verses
            .iter()
            .filter(move |(_, t)| count_empty || !t.is_empty())
            .map(|(r, t)| (r, t.as_str()))
    }
}

pub fn language_key(code: &str, variant: Option<&str>) -> String {
    match variant {
        Some(v) if !v.is_empty() => format!("{code}_{v}"),
        _ => code.to_string(),
    }
}
