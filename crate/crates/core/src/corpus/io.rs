//! File formats for corpora and annotations.
//!
//! Corpus TSV: UTF-8, no header, one verse per line with seven tab-separated
//! columns `translation_id, language_code, variant, book, chapter, verse,
//! text`. The JSONL form carries the same seven keys per line.
//!
//! Annotation TSV: `book, chapter, verse, position, surface, lemma, pos,
//! gender, number, case`, with the last three empty when not applicable.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use super::{AnnotatedToken, Translation, VerseRef};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Tsv,
    Jsonl,
}

impl Format {
    /// `.jsonl`/`.json` files are JSONL, anything else TSV.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("json") => Format::Jsonl,
            _ => Format::Tsv,
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "tsv" => Ok(Format::Tsv),
            "jsonl" => Ok(Format::Jsonl),
            _ => Err(format!("unknown format {s:?} (expected tsv or jsonl)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Tsv => "tsv",
            Format::Jsonl => "jsonl",
        })
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct LoadOptions {
    /// Apply Unicode NFC to verse text, surfaces and lemmas.
    pub nfc: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CorpusRow {
    translation_id: String,
    language_code: String,
    #[serde(default)]
    variant: Option<String>,
    book: String,
    chapter: u32,
    verse: u32,
    text: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnnotationRow {
    book: String,
    chapter: u32,
    verse: u32,
    position: u32,
    surface: String,
    lemma: String,
    pos: String,
    #[serde(default)]
    gender: Option<String>,
    #[serde(default)]
    number: Option<String>,
    #[serde(default)]
    case: Option<String>,
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

/// Iterates non-blank lines with 1-based line numbers, `\r\n` folded to `\n`.
fn lines<'a, R: Read + 'a>(
    reader: R,
    path: &'a Path,
) -> impl Iterator<Item = Result<(usize, String)>> + 'a {
    BufReader::new(reader)
        .lines()
        .enumerate()
        .filter_map(move |(i, line)| match line {
            Err(e) => Some(Err(Error::io(path, e))),
            Ok(mut l) => {
                if l.ends_with('\r') {
                    l.pop();
                }
                if l.is_empty() {
                    None
                } else {
                    Some(Ok((i + 1, l)))
                }
            }
        })
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn normalize(s: String, opts: LoadOptions) -> String {
    let s = if s.contains('\r') {
        s.replace("\r\n", "\n").replace('\r', "\n")
    } else {
        s
    };
    if opts.nfc {
        s.nfc().collect()
    } else {
        s
    }
}

pub fn load_corpus(path: &Path, format: Format) -> Result<Vec<Translation>> {
    load_corpus_with(path, format, LoadOptions::default())
}

pub fn load_corpus_with(
    path: &Path,
    format: Format,
    opts: LoadOptions,
) -> Result<Vec<Translation>> {
    read_corpus(open(path)?, path, format, opts)
}

/// Parses a corpus from any reader. `path` is only used in diagnostics.
pub fn read_corpus<R: Read>(
    reader: R,
    path: &Path,
    format: Format,
    opts: LoadOptions,
) -> Result<Vec<Translation>> {
    let mut translations: Vec<Translation> = Vec::new();
    let mut by_id: HashMap<String, usize> = HashMap::new();

    for line in lines(reader, path) {
        let (lineno, line) = line?;
        let row = match format {
            Format::Tsv => {
                let cols: Vec<&str> = line.split('\t').collect();
                if cols.len() != 7 {
                    return Err(parse_err(
                        path,
                        lineno,
                        format!("expected 7 tab-separated columns, found {}", cols.len()),
                    ));
                }
                let chapter = cols[4]
                    .parse()
                    .map_err(|_| parse_err(path, lineno, format!("bad chapter {:?}", cols[4])))?;
                let verse = cols[5]
                    .parse()
                    .map_err(|_| parse_err(path, lineno, format!("bad verse {:?}", cols[5])))?;
                CorpusRow {
                    translation_id: cols[0].to_string(),
                    language_code: cols[1].to_string(),
                    variant: Some(cols[2].to_string()),
                    book: cols[3].to_string(),
                    chapter,
                    verse,
                    text: cols[6].to_string(),
                }
            }
            Format::Jsonl => serde_json::from_str(&line)
                .map_err(|e| parse_err(path, lineno, format!("bad JSON object: {e}")))?,
        };

        if row.translation_id.is_empty() {
            return Err(parse_err(path, lineno, "empty translation_id"));
        }
        if row.language_code.is_empty() {
            return Err(parse_err(path, lineno, "empty language_code"));
        }
        let verse = VerseRef::new(&row.book, row.chapter, row.verse)
            .map_err(|m| parse_err(path, lineno, m))?;
        let variant = row.variant.filter(|v| !v.is_empty());

        let idx = *by_id.entry(row.translation_id.clone()).or_insert_with(|| {
            translations.push(Translation::new(
                &row.translation_id,
                &row.language_code,
                variant.as_deref(),
            ));
            translations.len() - 1
        });
        let t = &mut translations[idx];
        if t.language_code != row.language_code || t.variant != variant {
            return Err(Error::Validation {
                path: path.to_path_buf(),
                line: lineno,
                message: format!(
                    "translation {} declared with conflicting language {}",
                    row.translation_id,
                    super::language_key(&row.language_code, variant.as_deref())
                ),
            });
        }
        if t.verses.contains_key(&verse) {
            return Err(Error::DuplicateKey {
                path: path.to_path_buf(),
                line: lineno,
                key: format!("({}, {})", row.translation_id, verse),
            });
        }
        t.verses.insert(verse, normalize(row.text, opts));
    }
    Ok(translations)
}

pub fn write_corpus(path: &Path, translations: &[Translation], format: Format) -> Result<()> {
    let mut out = create(path)?;
    write_corpus_to(&mut out, translations, format)?;
    out.flush().map_err(|e| Error::io(path, e))
}

/// Serializes translations in the given format. TSV cannot carry tabs or
/// line breaks inside fields; such translations must be written as JSONL.
pub fn write_corpus_to<W: Write>(
    out: &mut W,
    translations: &[Translation],
    format: Format,
) -> Result<()> {
    let io_err = |e| Error::io(PathBuf::from("<output>"), e);
    for t in translations {
        for (verse, text) in &t.verses {
            match format {
                Format::Tsv => {
                    for field in [
                        t.translation_id.as_str(),
                        &t.language_code,
                        t.variant.as_deref().unwrap_or(""),
                        text,
                    ] {
                        if field.contains(['\t', '\n', '\r']) {
                            return Err(Error::Unwritable {
                                what: format!("{} {} as TSV", t.translation_id, verse),
                                reason: "field contains a tab or line break".into(),
                            });
                        }
                    }
                    writeln!(
                        out,
                        "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                        t.translation_id,
                        t.language_code,
                        t.variant.as_deref().unwrap_or(""),
                        verse.book,
                        verse.chapter,
                        verse.verse,
                        text
                    )
                    .map_err(io_err)?;
                }
                Format::Jsonl => {
                    let row = CorpusRow {
                        translation_id: t.translation_id.clone(),
                        language_code: t.language_code.clone(),
                        variant: t.variant.clone(),
                        book: verse.book.to_string(),
                        chapter: verse.chapter,
                        verse: verse.verse,
                        text: text.clone(),
                    };
                    let line = serde_json::to_string(&row).expect("corpus row serializes");
                    writeln!(out, "{line}").map_err(io_err)?;
                }
            }
        }
    }
    Ok(())
}

pub fn load_annotations(path: &Path, format: Format) -> Result<Vec<AnnotatedToken>> {
    load_annotations_with(path, format, LoadOptions::default())
}

pub fn load_annotations_with(
    path: &Path,
    format: Format,
    opts: LoadOptions,
) -> Result<Vec<AnnotatedToken>> {
    read_annotations(open(path)?, path, format, opts)
}

fn optional<T: FromStr<Err = String>>(
    field: Option<&str>,
    path: &Path,
    line: usize,
) -> Result<Option<T>> {
    match field {
        None | Some("") => Ok(None),
        Some(s) => s.parse().map(Some).map_err(|m| parse_err(path, line, m)),
    }
}

/// Parses annotations and returns them in (verse, position) order.
pub fn read_annotations<R: Read>(
    reader: R,
    path: &Path,
    format: Format,
    opts: LoadOptions,
) -> Result<Vec<AnnotatedToken>> {
    let mut tokens = Vec::new();
    let mut seen: HashSet<(VerseRef, u32)> = HashSet::new();

    for line in lines(reader, path) {
        let (lineno, line) = line?;
        let row = match format {
            Format::Tsv => {
                let cols: Vec<&str> = line.split('\t').collect();
                if cols.len() != 10 {
                    return Err(parse_err(
                        path,
                        lineno,
                        format!("expected 10 tab-separated columns, found {}", cols.len()),
                    ));
                }
                let num = |i: usize, what: &str| -> Result<u32> {
                    cols[i]
                        .parse()
                        .map_err(|_| parse_err(path, lineno, format!("bad {what} {:?}", cols[i])))
                };
                AnnotationRow {
                    book: cols[0].to_string(),
                    chapter: num(1, "chapter")?,
                    verse: num(2, "verse")?,
                    position: num(3, "position")?,
                    surface: cols[4].to_string(),
                    lemma: cols[5].to_string(),
                    pos: cols[6].to_string(),
                    gender: Some(cols[7].to_string()),
                    number: Some(cols[8].to_string()),
                    case: Some(cols[9].to_string()),
                }
            }
            Format::Jsonl => serde_json::from_str(&line)
                .map_err(|e| parse_err(path, lineno, format!("bad JSON object: {e}")))?,
        };

        let verse = VerseRef::new(&row.book, row.chapter, row.verse)
            .map_err(|m| parse_err(path, lineno, m))?;
        let token = AnnotatedToken {
            verse,
            position: row.position,
            surface: normalize(row.surface, opts),
            lemma: normalize(row.lemma, opts),
            gender: optional(row.gender.as_deref(), path, lineno)?,
            number: optional(row.number.as_deref(), path, lineno)?,
            case: optional(row.case.as_deref(), path, lineno)?,
            pos: row.pos,
        };
        if token.lemma.is_empty() {
            return Err(parse_err(path, lineno, "empty lemma"));
        }
        if token.is_noun() && token.lemma_form().is_none() {
            return Err(Error::Validation {
                path: path.to_path_buf(),
                line: lineno,
                message: format!("noun {:?} lacks gender, number or case", token.lemma),
            });
        }
        if !seen.insert((verse, token.position)) {
            return Err(Error::DuplicateKey {
                path: path.to_path_buf(),
                line: lineno,
                key: format!("({}, position {})", verse, token.position),
            });
        }
        tokens.push(token);
    }
    tokens.sort_by_key(|t| (t.verse, t.position));
    Ok(tokens)
}

pub fn write_annotations(path: &Path, tokens: &[AnnotatedToken]) -> Result<()> {
    let mut out = create(path)?;
    write_annotations_to(&mut out, tokens)?;
    out.flush().map_err(|e| Error::io(path, e))
}

/// Writes annotation TSV.
pub fn write_annotations_to<W: Write>(out: &mut W, tokens: &[AnnotatedToken]) -> Result<()> {
    let opt = |s: Option<&'static str>| s.unwrap_or("");
    for t in tokens {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            t.verse.book,
            t.verse.chapter,
            t.verse.verse,
            t.position,
            t.surface,
            t.lemma,
            t.pos,
            opt(t.gender.map(|g| g.as_str())),
            opt(t.number.map(|n| n.as_str())),
            opt(t.case.map(|c| c.as_str())),
        )
        .map_err(|e| Error::io(PathBuf::from("<output>"), e))?;
    }
    Ok(())
}
