use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Canonical New Testament book order. Codes outside this table are still
/// valid and sort after every listed book, by code.
pub const NEW_TESTAMENT: [&str; 27] = [
    "MAT", "MRK", "LUK", "JHN", "ACT", "ROM", "1CO", "2CO", "GAL", "EPH", "PHP", "COL", "1TH",
    "2TH", "1TI", "2TI", "TIT", "PHM", "HEB", "JAS", "1PE", "2PE", "1JN", "2JN", "3JN", "JUD",
    "REV",
];

/// The four books the lemma inventory is drawn from.
pub const GOSPELS: [&str; 4] = ["MAT", "MRK", "LUK", "JHN"];

/// Three-character uppercase book code such as `JHN`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Book([u8; 3]);

impl Book {
    pub fn new(code: &str) -> Option<Book> {
        let bytes = code.as_bytes();
        if bytes.len() != 3
            || !bytes
                .iter()
                .all(|b| b.is_ascii_uppercase() || b.is_ascii_digit())
        {
            return None;
        }
        Some(Book([bytes[0], bytes[1], bytes[2]]))
    }

    pub fn as_str(&self) -> &str {
        // only ASCII bytes are admitted by `new`
        std::str::from_utf8(&self.0).expect("book code is ASCII")
    }

    /// Position in the canonical order, `None` for books outside the table.
    pub fn canonical_index(&self) -> Option<usize> {
        NEW_TESTAMENT.iter().position(|b| *b == self.as_str())
    }
}

impl Ord for Book {
    fn cmp(&self, other: &Self) -> Ordering {
        let rank = |b: &Book| b.canonical_index().unwrap_or(NEW_TESTAMENT.len());
        rank(self)
            .cmp(&rank(other))
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Book {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Book {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for Book {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Book({})", self.as_str())
    }
}

impl FromStr for Book {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Book::new(s).ok_or_else(|| format!("bad book code {s:?} (expected [A-Z0-9]{{3}})"))
    }
}

impl Serialize for Book {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Book {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A verse address. Ordered by canonical book order, then chapter, then verse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VerseRef {
    pub book: Book,
    pub chapter: u32,
    pub verse: u32,
}

impl VerseRef {
    pub fn new(book: &str, chapter: u32, verse: u32) -> Result<VerseRef, String> {
        let book = book.parse()?;
        if chapter == 0 {
            return Err("chapter must be >= 1".into());
        }
        if verse == 0 {
            return Err("verse must be >= 1".into());
        }
        Ok(VerseRef {
            book,
            chapter,
            verse,
        })
    }

    /// Builds a reference from the three raw fields of a TSV row.
    pub fn parse_fields(book: &str, chapter: &str, verse: &str) -> Result<VerseRef, String> {
        let chapter: u32 = chapter
            .parse()
            .map_err(|_| format!("bad chapter {chapter:?}"))?;
        let verse: u32 = verse.parse().map_err(|_| format!("bad verse {verse:?}"))?;
        VerseRef::new(book, chapter, verse)
    }
}

impl fmt::Display for VerseRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}:{}", self.book, self.chapter, self.verse)
    }
}
