//! Alphabets and words over `x0, x1, ..., xm`.
//!
//! `x0` is the drift letter. Words are ordered length-lexicographically with
//! `x0 < x1 < ... < xm`; every table this crate prints follows that order.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// The alphabet `{x0, ..., xm}`; `m` counts the non-drift letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet {
    m: usize,
}

impl Alphabet {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptyAlphabet(m));
        }
        Ok(Alphabet { m })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of letters, `m + 1`.
    pub fn size(&self) -> usize {
        self.m + 1
    }

    pub fn check_letter(&self, index: usize) -> Result<()> {
        if index > self.m {
            Err(Error::LetterOutOfRange { index, m: self.m })
        } else {
            Ok(())
        }
    }

    pub fn check_word(&self, word: &Word) -> Result<()> {
        word.letters()
            .iter()
            .try_for_each(|&l| self.check_letter(l as usize))
    }

    pub(crate) fn ensure_same(&self, other: &Alphabet) -> Result<()> {
        if self.m != other.m {
            Err(Error::AlphabetMismatch {
                left: self.m,
                right: other.m,
            })
        } else {
            Ok(())
        }
    }

    /// All words of length at most `max_len`, in canonical order.
    pub fn words(&self, max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(layer.len() * self.size());
            for w in &layer {
                for l in 0..=self.m {
                    next.push(w.push_back(l as u8));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

/// Enumerates every word of length `<= max_len` in length-lexicographic order.
pub fn enumerate_words(alphabet: Alphabet, max_len: usize) -> Vec<Word> {
    alphabet.words(max_len)
}

/// A finite sequence of letter indices. The empty sequence is the empty word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: impl IntoIterator<Item = u8>) -> Self {
        Word(letters.into_iter().collect())
    }

    pub fn letter(index: u8) -> Self {
        Word(vec![index])
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<u8> {
        self.0.first().copied()
    }

    /// Drops the leading letter.
    pub fn tail(&self) -> Word {
        Word(self.0.get(1..).unwrap_or_default().to_vec())
    }

    pub fn push_front(&self, letter: u8) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(letter);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    pub fn push_back(&self, letter: u8) -> Word {
        let mut v = self.0.clone();
        v.push(letter);
        Word(v)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// If `prefix` is a prefix of `self`, the remaining suffix.
    pub fn strip_prefix(&self, prefix: &Word) -> Option<Word> {
        self.0
            .strip_prefix(prefix.0.as_slice())
            .map(|s| Word(s.to_vec()))
    }

    /// True when every letter lies in `allowed`.
    pub fn uses_only(&self, allowed: &[u8]) -> bool {
        self.0.iter().all(|l| allowed.contains(l))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    /// Space-separated tokens; the empty word prints as `∅`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("∅");
        }
        f.write_str(&self.to_tokens())
    }
}

impl Word {
    /// The text form accepted by [`parse_word`]; empty for the empty word.
    pub fn to_tokens(&self) -> String {
        self.0
            .iter()
            .map(|l| format!("x{l}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Parses `"x0 x1 x1"` style text. The empty string is the empty word.
pub fn parse_word(text: &str, alphabet: Alphabet) -> Result<Word> {
    let mut letters = Vec::new();
    for token in text.split_whitespace() {
        let index = token
            .strip_prefix('x')
            .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|d| d.parse::<usize>().ok())
            .ok_or_else(|| Error::UnknownToken(token.to_string()))?;
        if index > alphabet.m() {
            return Err(Error::UnknownToken(token.to_string()));
        }
        letters.push(index as u8);
    }
    Ok(Word(letters))
}
