//! Basis letters a_1, b_1, ..., a_g, b_g of H and the intersection form.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A basis letter. `a_i` is stored as `2(i-1)` and `b_i` as `2(i-1)+1`, so the
/// derived order is a_1 < b_1 < a_2 < b_2 < ...
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub u8);

pub type Word = Vec<Letter>;

impl Letter {
    pub fn a(i: usize) -> Letter {
        assert!(i >= 1, "letter indices start at 1");
        Letter((2 * (i - 1)) as u8)
    }

    pub fn b(i: usize) -> Letter {
        assert!(i >= 1, "letter indices start at 1");
        Letter((2 * (i - 1) + 1) as u8)
    }

    /// The index i of the symplectic pair containing this letter.
    pub fn pair(self) -> usize {
        self.0 as usize / 2 + 1
    }

    pub fn is_a(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// The partner letter: a_i <-> b_i.
    pub fn bar(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// All 2g letters in order.
    pub fn all(g: usize) -> impl Iterator<Item = Letter> {
        (0..2 * g).map(|i| Letter(i as u8))
    }

    pub fn in_genus(self, g: usize) -> bool {
        self.pair() <= g
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.is_a() { 'a' } else { 'b' }, self.pair())
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Letter> {
        let s = s.trim();
        let mut chars = s.chars();
        let kind = chars.next().ok_or_else(|| Error::Parse("empty letter".into()))?;
        let idx: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::Parse(format!("bad letter `{s}`")))?;
        if idx == 0 || idx > 127 {
            return Err(Error::Parse(format!("bad letter index in `{s}`")));
        }
        match kind {
            'a' | 'A' => Ok(Letter::a(idx)),
            'b' | 'B' => Ok(Letter::b(idx)),
            _ => Err(Error::Parse(format!("bad letter `{s}`"))),
        }
    }
}

/// The intersection form: omega(a_i, b_i) = 1 = -omega(b_i, a_i), zero otherwise.
pub fn omega(x: Letter, y: Letter) -> i32 {
    if x.pair() != y.pair() || x == y {
        0
    } else if x.is_a() {
        1
    } else {
        -1
    }
}

/// The covector omega(x, -) written in the coordinate dual basis:
/// a_i maps to b_i^*, b_i maps to -a_i^*.
pub fn omega_dual(x: Letter) -> (i32, Letter) {
    if x.is_a() {
        (1, x.bar())
    } else {
        (-1, x.bar())
    }
}

pub fn word_to_string(w: &[Letter]) -> String {
    w.iter().map(|l| l.to_string()).collect()
}

/// Parses a word such as `a2a1a1` or `a2 a1 a1`.
pub fn parse_word(s: &str) -> Result<Word> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut i = 0;
    while i < cs.len() {
        let start = i;
        i += 1;
        while i < cs.len() && cs[i].is_ascii_digit() {
            i += 1;
        }
        let tok: String = cs[start..i].iter().collect();
        out.push(tok.parse()?);
    }
    Ok(out)
}

/// A signed permutation of the basis preserving the intersection form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPerm {
    g: usize,
    images: Vec<(i32, Letter)>,
}

impl SignedPerm {
    pub fn identity(g: usize) -> SignedPerm {
        SignedPerm { g, images: Letter::all(g).map(|x| (1, x)).collect() }
    }

    /// Exchanges the pairs (a_i, b_i) and (a_j, b_j).
    pub fn swap_pairs(g: usize, i: usize, j: usize) -> SignedPerm {
        let mut p = SignedPerm::identity(g);
        p.images[Letter::a(i).index()] = (1, Letter::a(j));
        p.images[Letter::b(i).index()] = (1, Letter::b(j));
        p.images[Letter::a(j).index()] = (1, Letter::a(i));
        p.images[Letter::b(j).index()] = (1, Letter::b(i));
        p
    }

    /// a_i -> b_i, b_i -> -a_i.
    pub fn rotate_pair(g: usize, i: usize) -> SignedPerm {
        let mut p = SignedPerm::identity(g);
        p.images[Letter::a(i).index()] = (1, Letter::b(i));
        p.images[Letter::b(i).index()] = (-1, Letter::a(i));
        p
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn apply(&self, x: Letter) -> (i32, Letter) {
        self.images[x.index()]
    }

    /// Image of a word together with the product of the signs.
    pub fn apply_word(&self, w: &[Letter]) -> (i32, Word) {
        let mut sign = 1;
        let img = w
            .iter()
            .map(|&x| {
                let (s, y) = self.apply(x);
                sign *= s;
                y
            })
            .collect();
        (sign, img)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encoding_and_order() {
        assert!(Letter::a(1) < Letter::b(1));
        assert!(Letter::b(1) < Letter::a(2));
        assert_eq!(Letter::a(3).bar(), Letter::b(3));
        assert_eq!("b12".parse::<Letter>().unwrap(), Letter::b(12));
        assert!("c1".parse::<Letter>().is_err());
        assert_eq!(parse_word("a2a1 b1").unwrap(), vec![Letter::a(2), Letter::a(1), Letter::b(1)]);
    }

    #[test]
    fn omega_signs() {
        assert_eq!(omega(Letter::a(1), Letter::b(1)), 1);
        assert_eq!(omega(Letter::b(1), Letter::a(1)), -1);
        assert_eq!(omega(Letter::a(1), Letter::b(2)), 0);
        assert_eq!(omega_dual(Letter::b(2)), (-1, Letter::a(2)));
    }

    #[test]
    fn relabelings_preserve_omega() {
        for p in [SignedPerm::swap_pairs(3, 1, 3), SignedPerm::rotate_pair(3, 2)] {
            for x in Letter::all(3) {
                for y in Letter::all(3) {
                    let (s, u) = p.apply(x);
                    let (t, v) = p.apply(y);
                    assert_eq!(s * t * omega(u, v), omega(x, y));
                }
            }
        }
    }
}
