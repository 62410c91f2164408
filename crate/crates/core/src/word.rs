//! Words over the two-letter alphabet `{a, b}`.

use crate::error::{Error, Result};
use serde::{Serialize, Serializer};
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub fn other(self) -> Letter {
        match self {
            Letter::A => Letter::B,
            Letter::B => Letter::A,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
        }
    }

    pub fn index(self) -> usize {
        match self {
            Letter::A => 0,
            Letter::B => 1,
        }
    }

    pub fn from_index(i: usize) -> Letter {
        if i == 0 {
            Letter::A
        } else {
            Letter::B
        }
    }
}

/// A finite word over `{a, b}`. The empty word is valid.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    /// Parse a word from text; only `a` and `b` are accepted.
    pub fn parse(text: &str) -> Result<Self> {
        let mut letters = Vec::with_capacity(text.len());
        for (position, ch) in text.chars().enumerate() {
            match ch {
                'a' => letters.push(Letter::A),
                'b' => letters.push(Letter::B),
                found => return Err(Error::BadLetter { found, position }),
            }
        }
        Ok(Word { letters })
    }

    /// The `code`-th word of the given length, bits read LSB-first
    /// (bit 0 = first letter, 0 = a).
    pub fn from_code(len: usize, code: u32) -> Self {
        let letters = (0..len)
            .map(|i| if code >> i & 1 == 0 { Letter::A } else { Letter::B })
            .collect();
        Word { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Letter-swapped word.
    pub fn dual(&self) -> Word {
        Word { letters: self.letters.iter().map(|l| l.other()).collect() }
    }

    pub fn push(&mut self, l: Letter) {
        self.letters.push(l);
    }

    /// True iff `factor` occurs contiguously in `self` (the empty word is
    /// a factor of everything).
    pub fn contains_factor(&self, factor: &Word) -> bool {
        if factor.is_empty() {
            return true;
        }
        if factor.len() > self.len() {
            return false;
        }
        self.letters
            .windows(factor.len())
            .any(|w| w == factor.letters.as_slice())
    }

    /// True iff all `2^k` words of length `k` occur as factors.
    pub fn is_k_full(&self, k: usize) -> bool {
        if k == 0 {
            return true;
        }
        if self.len() < k {
            return false;
        }
        let mut seen = vec![false; 1usize << k];
        let mut count = 0usize;
        for window in self.letters.windows(k) {
            let mut code = 0usize;
            for (i, l) in window.iter().enumerate() {
                code |= l.index() << i;
            }
            if !seen[code] {
                seen[code] = true;
                count += 1;
            }
        }
        count == 1usize << k
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}
