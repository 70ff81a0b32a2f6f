use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite block of digits.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<u32>);

impl Word {
    pub fn new(digits: Vec<u32>) -> Self {
        Word(digits)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn digits(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, d: u32) {
        self.0.push(d);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word(self.0[from..to].to_vec())
    }

    /// Checks every digit against the alphabet `{0, …, max_digit}`.
    pub fn check_digits(&self, max_digit: u32) -> Result<()> {
        match self.0.iter().find(|&&d| d > max_digit) {
            Some(&d) => Err(Error::DigitOutOfRange { digit: d, bound: max_digit }),
            None => Ok(()),
        }
    }

    /// Parses a digit string. Digits are concatenated when every digit is a
    /// single decimal character and comma separated otherwise.
    pub fn parse(text: &str) -> Result<Word> {
        let t = text.trim();
        let bad = || Error::InvalidConfig(format!("bad digit string `{t}`"));
        if t.is_empty() {
            return Ok(Word::empty());
        }
        if t.contains(',') {
            t.split(',')
                .map(|p| p.trim().parse::<u32>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()
                .map(Word)
        } else {
            t.chars()
                .map(|c| c.to_digit(10).ok_or_else(bad))
                .collect::<Result<Vec<_>>>()
                .map(Word)
        }
    }

    /// Text form for an alphabet with largest digit `max_digit`.
    pub fn render(&self, max_digit: u32) -> String {
        if max_digit.max(self.0.iter().copied().max().unwrap_or(0)) <= 9 {
            self.0.iter().map(|d| char::from_digit(*d, 10).unwrap_or('?')).collect()
        } else {
            self.0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let max = self.0.iter().copied().max().unwrap_or(0);
        f.write_str(&self.render(max))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl From<&str> for Word {
    /// Panics on malformed input; meant for literals.
    fn from(s: &str) -> Word {
        Word::parse(s).expect("valid digit literal")
    }
}

/// Number of possibly overlapping occurrences of `d` in the first `n`
/// letters of `w`.
pub fn count_occurrences(w: &[u32], d: &[u32], n: usize) -> usize {
    let n = n.min(w.len());
    if d.is_empty() || d.len() > n {
        return 0;
    }
    w[..n].windows(d.len()).filter(|win| *win == d).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_render() {
        assert_eq!(Word::parse("0101").unwrap().digits(), &[0, 1, 0, 1]);
        assert_eq!(Word::parse("10,3,0").unwrap().digits(), &[10, 3, 0]);
        assert_eq!(Word::new(vec![10, 3]).render(10), "10,3");
        assert_eq!(Word::new(vec![1, 0]).render(1), "10");
        assert!(Word::from("12").check_digits(1).is_err());
    }

    #[test]
    fn occurrences() {
        assert_eq!(count_occurrences(&Word::from("0101").0, &[0, 1], 4), 2);
        assert_eq!(count_occurrences(&Word::from("1111").0, &[1, 1], 4), 3);
        assert_eq!(count_occurrences(&Word::from("10010").0, &[0, 0], 5), 1);
    }
}
