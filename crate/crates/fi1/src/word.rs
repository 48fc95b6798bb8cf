//! Words over the generator `x` and its formal inverse.
//!
//! The text syntax accepts `x` for the generator and `X`, `x^-1` or `x⁻¹`
//! for its inverse; whitespace is ignored.

use std::fmt;

use crate::error::{Error, Result};

/// One letter of a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// The generator `x`.
    X,
    /// The formal inverse `x^-1`.
    XInv,
}

impl Letter {
    /// Step contributed to the walk: `+1` for `x`, `-1` for `x^-1`.
    pub fn step(self) -> i64 {
        match self {
            Letter::X => 1,
            Letter::XInv => -1,
        }
    }

    pub fn inverse(self) -> Letter {
        match self {
            Letter::X => Letter::XInv,
            Letter::XInv => Letter::X,
        }
    }
}

/// A nonempty word over `{x, x^-1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Word> {
        if letters.is_empty() {
            return Err(Error::domain("a word must contain at least one letter"));
        }
        Ok(Word { letters })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Concatenation `self ++ other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// `k` copies of `letter`; `k` must be positive.
    pub fn repeated(letter: Letter, k: usize) -> Result<Word> {
        Word::new(vec![letter; k])
    }

    /// Parses the whitespace-insensitive text form.
    pub fn parse(input: &str) -> Result<Word> {
        let mut letters = Vec::new();
        let mut chars = input.chars().peekable();
        while let Some(c) = chars.next() {
            match c {
                c if c.is_whitespace() => continue,
                'X' => letters.push(Letter::XInv),
                'x' => {
                    // Look for an explicit `^-1` or `⁻¹` exponent.
                    let mut probe = chars.clone();
                    let inverse = match probe.peek() {
                        Some('^') => {
                            probe.next();
                            probe.next() == Some('-') && probe.next() == Some('1')
                        }
                        Some('⁻') => {
                            probe.next();
                            probe.next() == Some('¹')
                        }
                        _ => false,
                    };
                    if inverse {
                        chars = probe;
                        letters.push(Letter::XInv);
                    } else {
                        letters.push(Letter::X);
                    }
                }
                other => {
                    return Err(Error::parse(format!(
                        "unexpected character {other:?} in word"
                    )));
                }
            }
        }
        Word::new(letters).map_err(|_| Error::parse("empty word".to_string()))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, letter) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match letter {
                Letter::X => f.write_str("x")?,
                Letter::XInv => f.write_str("x^-1")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_plain_letters() {
        let w = Word::parse("x X x").unwrap();
        assert_eq!(w.letters(), &[Letter::X, Letter::XInv, Letter::X]);
    }

    #[test]
    fn parse_caret_inverse() {
        let w = Word::parse("x x^-1x").unwrap();
        assert_eq!(w.letters(), &[Letter::X, Letter::XInv, Letter::X]);
    }

    #[test]
    fn parse_unicode_inverse() {
        let w = Word::parse("x⁻¹ x").unwrap();
        assert_eq!(w.letters(), &[Letter::XInv, Letter::X]);
    }

    #[test]
    fn parse_is_whitespace_insensitive() {
        assert_eq!(Word::parse("xX").unwrap(), Word::parse(" x  X ").unwrap());
    }

    #[test]
    fn empty_word_rejected() {
        assert!(Word::parse("   ").is_err());
        assert!(Word::new(vec![]).is_err());
    }

    #[test]
    fn bad_character_rejected() {
        assert!(Word::parse("x y").is_err());
    }

    #[test]
    fn display_round_trips() {
        let w = Word::parse("x x^-1 x x").unwrap();
        assert_eq!(Word::parse(&w.to_string()).unwrap(), w);
    }
}
