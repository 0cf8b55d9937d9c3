//! Words in the surface group, K-type automorphisms, the Magnus map and
//! lower central series classes.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::freelie::{LieElement, TensorElement, Q};
use crate::letters::{Letter, Word};

/// A freely reduced word in the generators alpha_i, beta_i. Generator alpha_i
/// shares the encoding of the letter a_i, beta_i that of b_i.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupWord {
    g: usize,
    letters: Vec<(Letter, i8)>,
}

impl GroupWord {
    pub fn identity(g: usize) -> GroupWord {
        GroupWord { g, letters: Vec::new() }
    }

    pub fn generator(g: usize, x: Letter) -> GroupWord {
        GroupWord::from_letters(g, [(x, 1)])
    }

    pub fn from_letters(g: usize, letters: impl IntoIterator<Item = (Letter, i8)>) -> GroupWord {
        let mut w = GroupWord::identity(g);
        for (x, e) in letters {
            assert!(e == 1 || e == -1, "exponents are +1 or -1");
            assert!(x.in_genus(g), "generator outside genus");
            w.push(x, e);
        }
        w
    }

    fn push(&mut self, x: Letter, e: i8) {
        if self.letters.last() == Some(&(x, -e)) {
            self.letters.pop();
        } else {
            self.letters.push((x, e));
        }
    }

    /// Parses whitespace-separated tokens such as `a1 b2^-1`.
    pub fn parse(g: usize, s: &str) -> Result<GroupWord> {
        let mut w = GroupWord::identity(g);
        for tok in s.split_whitespace() {
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => (n, e.parse::<i64>().map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?),
                None => (tok, 1),
            };
            let x: Letter = name.parse()?;
            if !x.in_genus(g) {
                return Err(Error::Parse(format!("generator `{name}` outside genus {g}")));
            }
            let e = if exp < 0 { -1 } else { 1 };
            for _ in 0..exp.unsigned_abs() {
                w.push(x, e);
            }
        }
        Ok(w)
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn letters(&self) -> &[(Letter, i8)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, other: &GroupWord) -> GroupWord {
        assert_eq!(self.g, other.g, "genus mismatch");
        let mut out = self.clone();
        for &(x, e) in &other.letters {
            out.push(x, e);
        }
        out
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord { g: self.g, letters: self.letters.iter().rev().map(|&(x, e)| (x, -e)).collect() }
    }

    /// [u, v] = u v u^{-1} v^{-1}
    pub fn commutator(&self, other: &GroupWord) -> GroupWord {
        self.mul(other).mul(&self.inverse()).mul(&other.inverse())
    }

    pub fn pow(&self, n: i64) -> GroupWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = GroupWord::identity(self.g);
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self
            .letters
            .iter()
            .map(|&(x, e)| if e == 1 { x.to_string() } else { format!("{x}^-1") })
            .collect();
        write!(f, "{}", toks.join(" "))
    }
}

impl fmt::Debug for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupWord({self})")
    }
}

/// zeta^{-1} = prod_i [beta_i^{-1}, alpha_i].
pub fn boundary_word_inverse(g: usize) -> GroupWord {
    let mut w = GroupWord::identity(g);
    for i in 1..=g {
        let a = GroupWord::generator(g, Letter::a(i));
        let b = GroupWord::generator(g, Letter::b(i));
        w = w.mul(&b.inverse().commutator(&a));
    }
    w
}

pub fn boundary_word(g: usize) -> GroupWord {
    boundary_word_inverse(g).inverse()
}

/// An automorphism of the free group with explicit images of the generators
/// and of its inverse. Composition is `(f * h)(x) = f(h(x))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeAutomorphism {
    g: usize,
    forward: Vec<GroupWord>,
    backward: Vec<GroupWord>,
}

fn substitute(images: &[GroupWord], w: &GroupWord) -> GroupWord {
    let mut out = GroupWord::identity(w.g);
    for &(x, e) in &w.letters {
        let img = &images[x.index()];
        if e == 1 {
            out = out.mul(img);
        } else {
            out = out.mul(&img.inverse());
        }
    }
    out
}

impl FreeAutomorphism {
    /// Checks that the two image lists are mutually inverse on every generator.
    pub fn new(g: usize, forward: Vec<GroupWord>, backward: Vec<GroupWord>) -> Result<FreeAutomorphism> {
        if forward.len() != 2 * g || backward.len() != 2 * g {
            return Err(Error::InvalidAutomorphism("wrong number of generator images".into()));
        }
        if forward.iter().chain(&backward).any(|w| w.g != g) {
            return Err(Error::GenusMismatch(g, g));
        }
        for x in Letter::all(g) {
            let gx = GroupWord::generator(g, x);
            if substitute(&forward, &backward[x.index()]) != gx || substitute(&backward, &forward[x.index()]) != gx {
                return Err(Error::InvalidAutomorphism(format!("inverse images do not invert at {x}")));
            }
        }
        Ok(FreeAutomorphism { g, forward, backward })
    }

    pub fn identity(g: usize) -> FreeAutomorphism {
        let ids: Vec<GroupWord> = Letter::all(g).map(|x| GroupWord::generator(g, x)).collect();
        FreeAutomorphism { g, forward: ids.clone(), backward: ids }
    }

    fn one_generator(g: usize, x: Letter, fwd: GroupWord, bwd: GroupWord) -> Result<FreeAutomorphism> {
        let mut f = FreeAutomorphism::identity(g);
        f.forward[x.index()] = fwd;
        f.backward[x.index()] = bwd;
        FreeAutomorphism::new(g, f.forward, f.backward)
    }

    /// K_{xy}: x -> y^{-1} x y, other generators fixed.
    pub fn k_conj(g: usize, x: Letter, y: Letter) -> Result<FreeAutomorphism> {
        if x == y || !x.in_genus(g) || !y.in_genus(g) {
            return Err(Error::InvalidAutomorphism(format!("K {x} {y}")));
        }
        let (gx, gy) = (GroupWord::generator(g, x), GroupWord::generator(g, y));
        let fwd = gy.inverse().mul(&gx).mul(&gy);
        let bwd = gy.mul(&gx).mul(&gy.inverse());
        FreeAutomorphism::one_generator(g, x, fwd, bwd)
    }

    /// K_{xyz}: x -> x [y, z], other generators fixed.
    pub fn k_comm(g: usize, x: Letter, y: Letter, z: Letter) -> Result<FreeAutomorphism> {
        if x == y || x == z || ![x, y, z].iter().all(|l| l.in_genus(g)) {
            return Err(Error::InvalidAutomorphism(format!("K3 {x} {y} {z}")));
        }
        let (gx, gy, gz) = (GroupWord::generator(g, x), GroupWord::generator(g, y), GroupWord::generator(g, z));
        let fwd = gx.mul(&gy.commutator(&gz));
        let bwd = gx.mul(&gz.commutator(&gy));
        FreeAutomorphism::one_generator(g, x, fwd, bwd)
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn image(&self, x: Letter) -> &GroupWord {
        &self.forward[x.index()]
    }

    pub fn apply(&self, w: &GroupWord) -> GroupWord {
        assert_eq!(self.g, w.g, "genus mismatch");
        substitute(&self.forward, w)
    }

    pub fn apply_inverse(&self, w: &GroupWord) -> GroupWord {
        assert_eq!(self.g, w.g, "genus mismatch");
        substitute(&self.backward, w)
    }

    pub fn inverse(&self) -> FreeAutomorphism {
        FreeAutomorphism { g: self.g, forward: self.backward.clone(), backward: self.forward.clone() }
    }

    /// `self * other`, i.e. x -> self(other(x)).
    pub fn compose(&self, other: &FreeAutomorphism) -> FreeAutomorphism {
        assert_eq!(self.g, other.g, "genus mismatch");
        FreeAutomorphism {
            g: self.g,
            forward: other.forward.iter().map(|w| self.apply(w)).collect(),
            backward: self.backward.iter().map(|w| other.apply_inverse(w)).collect(),
        }
    }

    /// [f, h] = f h f^{-1} h^{-1}
    pub fn commutator(&self, other: &FreeAutomorphism) -> FreeAutomorphism {
        self.compose(other).compose(&self.inverse()).compose(&other.inverse())
    }
}

pub fn apply_aut(f: &FreeAutomorphism, w: &GroupWord) -> GroupWord {
    f.apply(w)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    K,
    K3,
    Inv,
    Open,
    Close,
    LBrack,
    RBrack,
    Comma,
    Star,
    Gen(Letter),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        match c {
            _ if c.is_whitespace() => i += 1,
            '(' => {
                out.push(Tok::Open);
                i += 1
            }
            ')' => {
                out.push(Tok::Close);
                i += 1
            }
            '[' => {
                out.push(Tok::LBrack);
                i += 1
            }
            ']' => {
                out.push(Tok::RBrack);
                i += 1
            }
            ',' => {
                out.push(Tok::Comma);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            'K' => {
                if cs.get(i + 1) == Some(&'3') {
                    out.push(Tok::K3);
                    i += 2;
                } else {
                    out.push(Tok::K);
                    i += 1;
                }
            }
            'i' if cs[i..].starts_with(&['i', 'n', 'v']) => {
                out.push(Tok::Inv);
                i += 3;
            }
            'a' | 'b' => {
                let start = i;
                i += 1;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                let name: String = cs[start..i].iter().collect();
                out.push(Tok::Gen(name.parse()?));
            }
            _ => return Err(Error::Parse(format!("unexpected character `{c}` at {i}"))),
        }
    }
    Ok(out)
}

struct AutParser {
    toks: Vec<Tok>,
    pos: usize,
    g: usize,
}

impl AutParser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!("expected {t:?} at token {}", self.pos)))
        }
    }

    fn gen(&mut self) -> Result<Letter> {
        match self.peek() {
            Some(Tok::Gen(x)) => {
                let x = *x;
                if !x.in_genus(self.g) {
                    return Err(Error::Parse(format!("generator {x} outside genus {}", self.g)));
                }
                self.pos += 1;
                Ok(x)
            }
            _ => Err(Error::Parse(format!("expected a generator at token {}", self.pos))),
        }
    }

    fn product(&mut self) -> Result<FreeAutomorphism> {
        let mut f = self.atom()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            f = f.compose(&self.atom()?);
        }
        Ok(f)
    }

    fn atom(&mut self) -> Result<FreeAutomorphism> {
        let invalid = |e: Error| match e {
            Error::InvalidAutomorphism(m) => Error::Parse(m),
            e => e,
        };
        match self.peek().cloned() {
            Some(Tok::K) => {
                self.pos += 1;
                let (x, y) = (self.gen()?, self.gen()?);
                FreeAutomorphism::k_conj(self.g, x, y).map_err(invalid)
            }
            Some(Tok::K3) => {
                self.pos += 1;
                let (x, y, z) = (self.gen()?, self.gen()?, self.gen()?);
                FreeAutomorphism::k_comm(self.g, x, y, z).map_err(invalid)
            }
            Some(Tok::LBrack) => {
                self.pos += 1;
                let f = self.product()?;
                self.expect(Tok::Comma)?;
                let h = self.product()?;
                self.expect(Tok::RBrack)?;
                Ok(f.commutator(&h))
            }
            Some(Tok::Inv) => {
                self.pos += 1;
                self.expect(Tok::Open)?;
                let f = self.product()?;
                self.expect(Tok::Close)?;
                Ok(f.inverse())
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let f = self.product()?;
                self.expect(Tok::Close)?;
                Ok(f)
            }
            _ => Err(Error::Parse(format!("unexpected token at {}", self.pos))),
        }
    }
}

/// Parses the automorphism grammar
/// `aut := 'K' gen gen | 'K3' gen gen gen | '[' aut ',' aut ']' | aut '*' aut | 'inv(' aut ')'`.
pub fn parse_aut(g: usize, s: &str) -> Result<FreeAutomorphism> {
    let mut p = AutParser { toks: tokenize(s)?, pos: 0, g };
    let f = p.product()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(f)
}

/// Truncated Magnus expansion: alpha -> 1 + a, alpha^{-1} -> 1 - a + a^2 - ...
pub fn magnus(w: &GroupWord, max_deg: usize) -> TensorElement {
    assert!(max_deg >= 1, "max_deg must be positive");
    let mut acc: HashMap<Word, BigInt> = HashMap::new();
    acc.insert(Vec::new(), BigInt::one());
    for &(x, e) in &w.letters {
        let mut next: HashMap<Word, BigInt> = HashMap::with_capacity(acc.len() * 2);
        for (u, c) in &acc {
            *next.entry(u.clone()).or_default() += c;
            let mut v = u.clone();
            let mut sign = BigInt::from(e);
            while v.len() < max_deg {
                v.push(x);
                *next.entry(v.clone()).or_default() += &sign * c;
                if e == 1 {
                    break;
                }
                sign = -sign;
            }
        }
        next.retain(|_, c| !c.is_zero());
        acc = next;
    }
    TensorElement::from_terms(w.g, acc.into_iter().map(|(u, c)| (u, Q::from_integer(c))))
}

/// Smallest m in 1..=cap with a nonzero degree-m Magnus term, if any.
pub fn gamma_depth(w: &GroupWord, cap: usize) -> Option<usize> {
    magnus(w, cap).terms().keys().map(|u| u.len()).filter(|&d| d >= 1).min()
}

/// The class of `w` in Gamma_m / Gamma_{m+1}, as a Lie element of degree m.
pub fn leading_lie_class(w: &GroupWord, m: usize) -> Result<LieElement> {
    let t = magnus(w, m);
    if t.terms().keys().any(|u| !u.is_empty() && u.len() < m) {
        return Err(Error::NotInGamma(m));
    }
    LieElement::from_tensor(&t.degree_part(m)).map_err(|_| Error::NotPrimitive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelie::{lie_bracket, q};

    fn gw(g: usize, s: &str) -> GroupWord {
        GroupWord::parse(g, s).unwrap()
    }

    #[test]
    fn word_basics() {
        let a = gw(1, "a1");
        assert!(a.mul(&a.inverse()).is_empty());
        assert!(a.commutator(&a).is_empty());
        let b = gw(1, "b1");
        assert_eq!(a.commutator(&b).inverse(), b.commutator(&a));
        assert_eq!(gw(2, "a1^2 a1^-1"), gw(2, "a1"));
    }

    #[test]
    fn boundary_word_shape() {
        assert_eq!(boundary_word_inverse(2), gw(2, "b1^-1 a1 b1 a1^-1 b2^-1 a2 b2 a2^-1"));
        let w = leading_lie_class(&boundary_word_inverse(2), 2).unwrap();
        let om = &lie_bracket(&LieElement::letter(2, Letter::a(1)), &LieElement::letter(2, Letter::b(1)))
            + &lie_bracket(&LieElement::letter(2, Letter::a(2)), &LieElement::letter(2, Letter::b(2)));
        assert_eq!(w, om);
    }

    #[test]
    fn magnus_small() {
        let a = Letter::a(1);
        assert_eq!(magnus(&gw(1, "a1"), 3), TensorElement::from_terms(1, [(vec![], q(1)), (vec![a], q(1))]));
        assert_eq!(
            magnus(&gw(1, "a1^-1"), 2),
            TensorElement::from_terms(1, [(vec![], q(1)), (vec![a], q(-1)), (vec![a, a], q(1))])
        );
        let b = Letter::b(1);
        let c = magnus(&gw(1, "a1 b1 a1^-1 b1^-1"), 2);
        assert_eq!(c, TensorElement::from_terms(1, [(vec![], q(1)), (vec![a, b], q(1)), (vec![b, a], q(-1))]));
    }

    #[test]
    fn k_generators() {
        let (a1, a2, b1) = (Letter::a(1), Letter::a(2), Letter::b(1));
        let k = FreeAutomorphism::k_conj(2, a1, a2).unwrap();
        assert_eq!(k.apply(&gw(2, "a1")), gw(2, "a2^-1 a1 a2"));
        let k3 = FreeAutomorphism::k_comm(2, b1, a1, a2).unwrap();
        assert_eq!(k3.apply(&gw(2, "b1")), gw(2, "b1 a1 a2 a1^-1 a2^-1"));
        let f = parse_aut(2, "[K a1 a2, K3 b1 a1 a2] * inv(K a2 a1)").unwrap();
        let w = gw(2, "a1 b2 a2^-1 b1");
        assert_eq!(f.apply_inverse(&f.apply(&w)), w);
        assert!(parse_aut(2, "K a1 a1").is_err());
        assert!(parse_aut(2, "K a1 a3").is_err());
        assert!(parse_aut(2, "[K a1 a2").is_err());
    }
}
