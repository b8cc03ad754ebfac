//! Finite, non-cyclic 0/1 words.
//!
//! Words parse from plain 01-text or from run-length text such as
//! `0^4 10^2 1110^2` (also `0^{11}` and superscript digits `0⁴1`). An exponent
//! binds to the single symbol before it.

use std::fmt;
use std::str::FromStr;

use super::bitstring::BitString;
use crate::error::{Error, Result};

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    bits: Vec<bool>,
}

impl Word {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            bits: vec![false; len],
        }
    }

    /// `K_{m,g} = 0^{m−1} 1 0^{g−m}`, with `m` 1-based.
    pub fn constituent(m: usize, g: usize) -> Result<Self> {
        if m == 0 || m > g {
            return Err(Error::InvalidParameter(format!(
                "constituent K_{{{m},{g}}} needs 1 <= m <= g"
            )));
        }
        let mut w = Self::zeros(g);
        w.bits[m - 1] = true;
        Ok(w)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn push(&mut self, b: bool) {
        self.bits.push(b);
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        Self { bits }
    }

    pub fn append(&mut self, other: &Self) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&b| !b)
    }

    pub fn ones_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::SizeMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(Self {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a ^ b)
                .collect(),
        })
    }

    pub fn slice(&self, start: usize, end: usize) -> Self {
        Self {
            bits: self.bits[start..end].to_vec(),
        }
    }

    /// Length of the shortest `p` with `self` a power of its length-`p` prefix.
    /// The empty word has minimal period 0.
    pub fn minimal_cyclic_period(&self) -> usize {
        let n = self.len();
        (1..=n)
            .filter(|p| n.is_multiple_of(*p))
            .find(|&p| (p..n).all(|i| self.bits[i] == self.bits[i - p]))
            .unwrap_or(0)
    }

    /// Repeats the word cyclically to fill a cylinder of size `n`.
    pub fn tile(&self, n: usize) -> BitString {
        assert!(!self.is_empty(), "cannot tile the empty word");
        let positions = (0..n).filter(|i| self.bits[i % self.len()]);
        BitString::from_positions(n, positions).expect("positions in range")
    }

    /// Run-length text, e.g. `0^4 1 0^2 1^3`.
    pub fn to_run_length(&self) -> String {
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.bits.len() {
            let b = self.bits[i];
            let mut j = i;
            while j < self.bits.len() && self.bits[j] == b {
                j += 1;
            }
            let c = if b { '1' } else { '0' };
            parts.push(if j - i == 1 {
                c.to_string()
            } else {
                format!("{c}^{}", j - i)
            });
            i = j;
        }
        parts.join(" ")
    }
}

/// Parity of the number of ones.
pub fn parity(w: &Word) -> bool {
    w.ones_count() % 2 == 1
}

impl From<Vec<bool>> for Word {
    fn from(bits: Vec<bool>) -> Self {
        Self { bits }
    }
}

impl From<&BitString> for Word {
    fn from(s: &BitString) -> Self {
        Self {
            bits: (0..s.len()).map(|j| s.get(j)).collect(),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.bits
            .iter()
            .try_for_each(|&b| f.write_str(if b { "1" } else { "0" }))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

fn superscript_digit(c: char) -> Option<u32> {
    match c {
        '⁰' => Some(0),
        '¹' => Some(1),
        '²' => Some(2),
        '³' => Some(3),
        '⁴' => Some(4),
        '⁵' => Some(5),
        '⁶' => Some(6),
        '⁷' => Some(7),
        '⁸' => Some(8),
        '⁹' => Some(9),
        _ => None,
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().collect();
        let mut bits = Vec::new();
        let mut i = 0;
        let bad = |msg: &str| Error::Parse(format!("{msg} in word {s:?}"));
        while i < chars.len() {
            let c = chars[i];
            let bit = match c {
                '0' => false,
                '1' => true,
                c if c.is_whitespace() || c == '.' || c == '·' => {
                    i += 1;
                    continue;
                }
                _ => return Err(bad(&format!("unexpected character {c:?}"))),
            };
            i += 1;
            let mut count: Option<usize> = None;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let braced = i < chars.len() && chars[i] == '{';
                if braced {
                    i += 1;
                }
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if start == i {
                    return Err(bad("missing exponent"));
                }
                let digits: String = chars[start..i].iter().collect();
                count = Some(digits.parse().map_err(|_| bad("bad exponent"))?);
                if braced {
                    if i >= chars.len() || chars[i] != '}' {
                        return Err(bad("unclosed brace"));
                    }
                    i += 1;
                }
            } else {
                let mut k: Option<usize> = None;
                while let Some(d) = chars.get(i).and_then(|&c| superscript_digit(c)) {
                    k = Some(k.unwrap_or(0) * 10 + d as usize);
                    i += 1;
                }
                count = count.or(k);
            }
            bits.extend(std::iter::repeat_n(bit, count.unwrap_or(1)));
        }
        Ok(Self { bits })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_examples() {
        assert!(!parity(&Word::new()));
        assert!(parity(&"1110".parse().unwrap()));
        for g in 1..8 {
            for m in 1..=g {
                assert!(parity(&Word::constituent(m, g).unwrap()));
            }
        }
    }

    #[test]
    fn constituent_layout() {
        assert_eq!(Word::constituent(1, 3).unwrap().to_string(), "100");
        assert_eq!(Word::constituent(5, 7).unwrap().to_string(), "0000100");
        assert!(Word::constituent(0, 3).is_err());
        assert!(Word::constituent(4, 3).is_err());
    }

    #[test]
    fn run_length_parsing() {
        let w: Word = "0^4 10^2 1110^2 110^5 10^2".parse().unwrap();
        assert_eq!(w.to_string(), "0000100111001100000100");
        let sup: Word = "0⁴10²1110²110⁵10²".parse().unwrap();
        assert_eq!(sup, w);
        let braced: Word = "01^{3}0^{11}".parse().unwrap();
        assert_eq!(braced.len(), 15);
        assert_eq!(braced.to_string(), "011100000000000");
        assert_eq!(w.to_run_length().parse::<Word>().unwrap(), w);
        assert!("0^".parse::<Word>().is_err());
        assert!("0^{3".parse::<Word>().is_err());
        assert!("012".parse::<Word>().is_err());
    }

    #[test]
    fn concat_identity_and_associativity() {
        let a: Word = "01".parse().unwrap();
        let b: Word = "1".parse().unwrap();
        let c: Word = "001".parse().unwrap();
        assert_eq!(a.concat(&Word::new()), a);
        assert_eq!(Word::new().concat(&a), a);
        assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
    }

    #[test]
    fn minimal_period() {
        assert_eq!("011011".parse::<Word>().unwrap().minimal_cyclic_period(), 3);
        assert_eq!("0111".parse::<Word>().unwrap().minimal_cyclic_period(), 4);
        assert_eq!("0".parse::<Word>().unwrap().minimal_cyclic_period(), 1);
    }
}
