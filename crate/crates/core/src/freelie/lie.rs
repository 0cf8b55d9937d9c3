use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::lyndon::{is_lyndon, lyndon_tensor, standard_factorization};
use super::{TensorElement, Q};
use crate::error::{Error, Result};
use crate::letters::{Letter, Word};

/// An element of the free Lie ring, stored in the Lyndon basis. The degree of a
/// basis element is the length of its Lyndon word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieElement {
    g: usize,
    terms: BTreeMap<Word, Q>,
}

impl LieElement {
    pub fn zero(g: usize) -> LieElement {
        LieElement { g, terms: BTreeMap::new() }
    }

    pub fn letter(g: usize, x: Letter) -> LieElement {
        LieElement::basis(g, vec![x])
    }

    /// The standard bracketing of a Lyndon word.
    pub fn basis(g: usize, w: Word) -> LieElement {
        assert!(is_lyndon(&w), "not a Lyndon word");
        let mut out = LieElement::zero(g);
        out.terms.insert(w, Q::one());
        out
    }

    pub fn from_lyndon_terms(g: usize, terms: impl IntoIterator<Item = (Word, Q)>) -> LieElement {
        let mut out = LieElement::zero(g);
        for (w, c) in terms {
            assert!(is_lyndon(&w), "not a Lyndon word");
            out.add_term(w, c);
        }
        out
    }

    fn add_term(&mut self, w: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn terms(&self) -> &BTreeMap<Word, Q> {
        &self.terms
    }

    pub fn coeff(&self, w: &[Letter]) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|w| w.len());
        let k = it.next()?;
        it.all(|d| d == k).then_some(k)
    }

    pub fn degree_part(&self, k: usize) -> LieElement {
        LieElement {
            g: self.g,
            terms: self.terms.iter().filter(|(w, _)| w.len() == k).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> LieElement {
        if c.is_zero() {
            return LieElement::zero(self.g);
        }
        LieElement { g: self.g, terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect() }
    }

    pub fn to_tensor(&self) -> TensorElement {
        let mut acc: BTreeMap<Word, Q> = BTreeMap::new();
        for (w, c) in &self.terms {
            for (u, m) in lyndon_tensor(w).iter() {
                let e = acc.entry(u.clone()).or_insert_with(Q::zero);
                *e += c * Q::from_integer(BigInt::from(*m));
            }
        }
        TensorElement::from_terms(self.g, acc)
    }

    /// Inverse of the embedding, by triangularity: the standard bracketing of a
    /// Lyndon word w expands as w plus lexicographically larger words.
    pub fn from_tensor(t: &TensorElement) -> Result<LieElement> {
        let mut rest: BTreeMap<Word, Q> = t.terms().clone();
        let mut out = LieElement::zero(t.genus());
        while let Some((w, c)) = rest.pop_first() {
            if !is_lyndon(&w) {
                return Err(Error::NotLie);
            }
            for (u, m) in lyndon_tensor(&w).iter().skip(1) {
                let e = rest.entry(u.clone()).or_insert_with(Q::zero);
                *e -= &c * Q::from_integer(BigInt::from(*m));
                if e.is_zero() {
                    rest.remove(u);
                }
            }
            out.terms.insert(w, c);
        }
        Ok(out)
    }

    pub fn bracket(&self, other: &LieElement) -> LieElement {
        lie_bracket(self, other)
    }

    /// Applies a signed relabeling of letters.
    pub fn relabel(&self, f: impl Fn(Letter) -> (i32, Letter)) -> LieElement {
        let t = self.to_tensor();
        let mut out = TensorElement::zero(self.g);
        for (w, c) in t.terms() {
            let mut sign = 1;
            let img: Word = w
                .iter()
                .map(|&x| {
                    let (s, y) = f(x);
                    sign *= s;
                    y
                })
                .collect();
            out.add_term(img, c * Q::from_integer(BigInt::from(sign)));
        }
        LieElement::from_tensor(&out).expect("relabeling preserves Lie elements")
    }
}

pub fn lie_bracket(x: &LieElement, y: &LieElement) -> LieElement {
    assert_eq!(x.g, y.g, "genus mismatch");
    if x.is_zero() || y.is_zero() {
        return LieElement::zero(x.g);
    }
    let (tx, ty) = (x.to_tensor(), y.to_tensor());
    LieElement::from_tensor(&tx.commutator(&ty)).expect("bracket of Lie elements is Lie")
}

impl Add for &LieElement {
    type Output = LieElement;
    fn add(self, rhs: &LieElement) -> LieElement {
        assert_eq!(self.g, rhs.g, "genus mismatch");
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LieElement {
    type Output = LieElement;
    fn sub(self, rhs: &LieElement) -> LieElement {
        assert_eq!(self.g, rhs.g, "genus mismatch");
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &LieElement {
    type Output = LieElement;
    fn neg(self) -> LieElement {
        LieElement { g: self.g, terms: self.terms.iter().map(|(w, c)| (w.clone(), -c.clone())).collect() }
    }
}

/// The left-normed bracket [[...[x_1, x_2], ...], x_m].
pub fn left_normed_lie(g: usize, seq: &[Letter]) -> LieElement {
    assert!(!seq.is_empty());
    let mut acc = LieElement::letter(g, seq[0]);
    for &x in &seq[1..] {
        acc = lie_bracket(&acc, &LieElement::letter(g, x));
    }
    acc
}

type Combination = BTreeMap<Word, i64>;

fn add_into(acc: &mut Combination, w: Word, c: i64) {
    if c == 0 || (w.len() >= 2 && w[0] == w[1]) {
        return;
    }
    let e = acc.entry(w.clone()).or_default();
    *e += c;
    if *e == 0 {
        acc.remove(&w);
    }
}

/// [A, Y] for left-normed A and Y, rewritten with
/// [A, [Y', y]] = [[A, Y'], y] - [[A, y], Y'].
fn bracket_left_normed(a: &[Letter], ys: &[Letter]) -> Combination {
    let mut out = Combination::new();
    if ys.len() == 1 {
        let mut w = a.to_vec();
        w.push(ys[0]);
        add_into(&mut out, w, 1);
        return out;
    }
    let (init, y) = (&ys[..ys.len() - 1], ys[ys.len() - 1]);
    for (mut w, c) in bracket_left_normed(a, init) {
        w.push(y);
        add_into(&mut out, w, c);
    }
    let mut ay = a.to_vec();
    ay.push(y);
    for (w, c) in bracket_left_normed(&ay, init) {
        add_into(&mut out, w, -c);
    }
    out
}

fn ln_cache() -> &'static RwLock<HashMap<Word, Arc<Combination>>> {
    static CACHE: OnceLock<RwLock<HashMap<Word, Arc<Combination>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

fn left_normed_of_lyndon(w: &[Letter]) -> Arc<Combination> {
    if let Some(c) = ln_cache().read().expect("cache poisoned").get(w) {
        return c.clone();
    }
    let mut out = Combination::new();
    if w.len() == 1 {
        out.insert(w.to_vec(), 1);
    } else {
        let (u, v) = standard_factorization(w);
        let (lu, lv) = (left_normed_of_lyndon(&u), left_normed_of_lyndon(&v));
        for (a, ca) in lu.iter() {
            for (y, cy) in lv.iter() {
                for (z, cz) in bracket_left_normed(a, y) {
                    add_into(&mut out, z, ca * cy * cz);
                }
            }
        }
    }
    let out = Arc::new(out);
    ln_cache().write().expect("cache poisoned").insert(w.to_vec(), out.clone());
    out
}

/// Writes an integral homogeneous Lie element as an integer combination of
/// left-normed brackets of letters.
pub fn left_normed_decompose(x: &LieElement) -> Result<Vec<(BigInt, Word)>> {
    if !x.is_integral() {
        return Err(Error::NonIntegral);
    }
    if !x.is_zero() && x.homogeneous_degree().is_none() {
        return Err(Error::NonHomogeneous);
    }
    let mut acc: BTreeMap<Word, BigInt> = BTreeMap::new();
    for (w, c) in &x.terms {
        let c = c.to_integer();
        for (seq, m) in left_normed_of_lyndon(w).iter() {
            let e = acc.entry(seq.clone()).or_default();
            *e += &c * BigInt::from(*m);
        }
    }
    Ok(acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(w, c)| (c, w)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelie::q;

    fn l(g: usize, s: &str) -> LieElement {
        LieElement::letter(g, s.parse().unwrap())
    }

    #[test]
    fn brackets_basic() {
        let (a1, b1) = (l(1, "a1"), l(1, "b1"));
        assert!(lie_bracket(&a1, &a1).is_zero());
        let ab = lie_bracket(&a1, &b1);
        assert_eq!(ab, LieElement::basis(1, vec![Letter::a(1), Letter::b(1)]));
        assert!(lie_bracket(&ab, &ab).is_zero());
    }

    #[test]
    fn embedding_three_letters() {
        let (a, b, c) = (l(2, "a1"), l(2, "b1"), l(2, "a2"));
        let x = lie_bracket(&a, &lie_bracket(&b, &c));
        let t = x.to_tensor();
        let w = |s: &str| crate::letters::parse_word(s).unwrap();
        let expect = TensorElement::from_terms(
            2,
            [(w("a1b1a2"), q(1)), (w("a1a2b1"), q(-1)), (w("b1a2a1"), q(-1)), (w("a2b1a1"), q(1))],
        );
        assert_eq!(t, expect);
        assert_eq!(LieElement::from_tensor(&t).unwrap(), x);
        let bad = TensorElement::word(2, w("a1a2"));
        assert_eq!(LieElement::from_tensor(&bad), Err(Error::NotLie));
    }

    #[test]
    fn left_normed_example() {
        let (a, b, c) = (l(2, "a1"), l(2, "b1"), l(2, "a2"));
        let x = lie_bracket(&a, &lie_bracket(&b, &c));
        let d = left_normed_decompose(&x).unwrap();
        let mut re = LieElement::zero(2);
        for (k, seq) in &d {
            re = &re + &left_normed_lie(2, seq).scale(&Q::from_integer(k.clone()));
        }
        assert_eq!(re, x);
        let expect = &lie_bracket(&lie_bracket(&a, &b), &c) - &lie_bracket(&lie_bracket(&a, &c), &b);
        assert_eq!(expect, x);
    }
}
