use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::similarity::normalize_name;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Corporation,
    University,
    Others,
}

impl Category {
    pub const ALL: [Category; 3] = [
        Category::Corporation,
        Category::University,
        Category::Others,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Corporation => "corporation",
            Category::University => "university",
            Category::Others => "others",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "corporation" => Ok(Category::Corporation),
            "university" => Ok(Category::University),
            "others" => Ok(Category::Others),
            _ => Err(Error::invalid(format!("unknown category `{s}`"))),
        }
    }
}

/// Keyword lists deciding a name's category. Each keyword is a token
/// sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lexicon {
    pub university: Vec<Vec<String>>,
    pub corporation: Vec<Vec<String>>,
}

const DEFAULT_LEXICON: &str = include_str!("lexicon_default.txt");

impl Default for Lexicon {
    fn default() -> Self {
        Self::parse(DEFAULT_LEXICON).expect("embedded lexicon parses")
    }
}

impl Lexicon {
    /// Reads the `[university]` / `[corporation]` sectioned keyword format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lex = Lexicon {
            university: vec![],
            corporation: vec![],
        };
        let mut section: Option<Category> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = Some(match name {
                    "university" => Category::University,
                    "corporation" => Category::Corporation,
                    other => {
                        return Err(Error::Parse {
                            line: idx + 1,
                            message: format!("unknown section `{other}`"),
                        })
                    }
                });
                continue;
            }
            let tokens: Vec<String> = normalize_name(line)
                .split(' ')
                .map(str::to_string)
                .collect();
            match section {
                Some(Category::University) => lex.university.push(tokens),
                Some(Category::Corporation) => lex.corporation.push(tokens),
                _ => {
                    return Err(Error::Parse {
                        line: idx + 1,
                        message: "keyword outside a section".into(),
                    })
                }
            }
        }
        Ok(lex)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// University beats corporation beats others.
    pub fn categorize_name(&self, name: &str) -> Category {
        let norm = normalize_name(name);
        let tokens: Vec<&str> = norm.split(' ').filter(|t| !t.is_empty()).collect();
        let hit = |keywords: &[Vec<String>]| {
            keywords.iter().any(|kw| {
                !kw.is_empty()
                    && tokens
                        .windows(kw.len())
                        .any(|w| w.iter().zip(kw).all(|(a, b)| *a == b))
            })
        };
        if hit(&self.university) {
            Category::University
        } else if hit(&self.corporation) {
            Category::Corporation
        } else {
            Category::Others
        }
    }
}

/// Categorizes with the built-in keyword lists.
pub fn categorize_name(name: &str) -> Category {
    thread_local! {
        static LEX: Lexicon = Lexicon::default();
    }
    LEX.with(|l| l.categorize_name(name))
}

/// Most common category; any tie for first place yields `Others`.
pub fn majority_category(categories: impl IntoIterator<Item = Category>) -> Option<Category> {
    let mut counts = [0usize; 3];
    let mut any = false;
    for c in categories {
        any = true;
        counts[c as usize] += 1;
    }
    if !any {
        return None;
    }
    let top = *counts.iter().max().unwrap();
    let winners: Vec<usize> = (0..3).filter(|&i| counts[i] == top).collect();
    Some(if winners.len() == 1 {
        Category::ALL[winners[0]]
    } else {
        Category::Others
    })
}
