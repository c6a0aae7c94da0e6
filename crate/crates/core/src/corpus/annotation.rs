use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::VerseRef;

macro_rules! morph_enum {
    ($name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(rename_all = "lowercase")]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(&self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err(format!(
                        "invalid {} {:?} (expected one of: {})",
                        stringify!($name).to_lowercase(),
                        s,
                        [$($text),+].join(", ")
                    )),
                }
            }
        }
    };
}

morph_enum!(Gender {
    Masculine => "masculine",
    Feminine => "feminine",
    Neuter => "neuter",
});

morph_enum!(Number {
    Singular => "singular",
    Plural => "plural",
});

morph_enum!(Case {
    Nominative => "nominative",
    Accusative => "accusative",
    Dative => "dative",
    Genitive => "genitive",
});

/// Part-of-speech tag used for nouns in annotation files.
pub const NOUN: &str = "noun";

/// One word of the annotated source text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotatedToken {
    pub verse: VerseRef,
    pub position: u32,
    pub surface: String,
    pub lemma: String,
    pub pos: String,
    pub gender: Option<Gender>,
    pub number: Option<Number>,
    pub case: Option<Case>,
}

impl AnnotatedToken {
    pub fn is_noun(&self) -> bool {
        self.pos == NOUN
    }

    /// The lemma form this token instantiates, if its morphology is complete.
    pub fn lemma_form(&self) -> Option<LemmaForm> {
        Some(LemmaForm {
            lemma: self.lemma.clone(),
            number: self.number?,
            case: self.case?,
            gender: self.gender?,
        })
    }
}

/// A lemma fixed to one gender, number and case. Equality covers all four
/// fields; ordering is by lemma, then number, case and gender.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LemmaForm {
    pub lemma: String,
    pub number: Number,
    pub case: Case,
    pub gender: Gender,
}

impl LemmaForm {
    pub fn new(lemma: &str, gender: Gender, number: Number, case: Case) -> Self {
        LemmaForm {
            lemma: lemma.to_string(),
            number,
            case,
            gender,
        }
    }
}

impl fmt::Display for LemmaForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({} {} {})",
            self.lemma, self.case, self.gender, self.number
        )
    }
}
