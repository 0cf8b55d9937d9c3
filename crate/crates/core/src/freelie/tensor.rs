use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::Q;
use crate::letters::{Letter, Word};

/// A noncommutative polynomial over the letters of genus `g`, exact rational
/// coefficients, zero coefficients never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    g: usize,
    terms: BTreeMap<Word, Q>,
}

impl TensorElement {
    pub fn zero(g: usize) -> TensorElement {
        TensorElement { g, terms: BTreeMap::new() }
    }

    pub fn one(g: usize) -> TensorElement {
        TensorElement::word(g, Vec::new())
    }

    pub fn letter(g: usize, x: Letter) -> TensorElement {
        TensorElement::word(g, vec![x])
    }

    pub fn word(g: usize, w: Word) -> TensorElement {
        let mut t = TensorElement::zero(g);
        t.add_term(w, Q::one());
        t
    }

    pub fn from_terms(g: usize, terms: impl IntoIterator<Item = (Word, Q)>) -> TensorElement {
        let mut t = TensorElement::zero(g);
        for (w, c) in terms {
            t.add_term(w, c);
        }
        t
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn terms(&self) -> &BTreeMap<Word, Q> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Word, Q> {
        self.terms
    }

    pub fn coeff(&self, w: &[Letter]) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: Q) {
        debug_assert!(w.iter().all(|l| l.in_genus(self.g)), "letter outside genus");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Q) -> TensorElement {
        if c.is_zero() {
            return TensorElement::zero(self.g);
        }
        TensorElement { g: self.g, terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect() }
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&[])
    }

    pub fn degree_part(&self, k: usize) -> TensorElement {
        TensorElement {
            g: self.g,
            terms: self.terms.iter().filter(|(w, _)| w.len() == k).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }

    pub fn truncate(&self, max_deg: usize) -> TensorElement {
        TensorElement {
            g: self.g,
            terms: self.terms.iter().filter(|(w, _)| w.len() <= max_deg).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).max()
    }

    /// `Some(k)` if every term has length k; `None` for mixed degrees or zero.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let k = self.min_degree()?;
        (self.max_degree() == Some(k)).then_some(k)
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Concatenation product, dropping words longer than `max_deg`.
    pub fn mul_truncated(&self, other: &TensorElement, max_deg: usize) -> TensorElement {
        assert_eq!(self.g, other.g, "genus mismatch");
        let mut out = TensorElement::zero(self.g);
        for (u, x) in &self.terms {
            for (v, y) in &other.terms {
                if u.len() + v.len() > max_deg {
                    continue;
                }
                let mut w = Vec::with_capacity(u.len() + v.len());
                w.extend_from_slice(u);
                w.extend_from_slice(v);
                out.add_term(w, x * y);
            }
        }
        out
    }

    pub fn commutator(&self, other: &TensorElement) -> TensorElement {
        &(self * other) - &(other * self)
    }

    /// Applies a letter-wise linear substitution `x -> images(x)` as an algebra map.
    pub fn substitute(&self, image: impl Fn(Letter) -> TensorElement, max_deg: usize) -> TensorElement {
        let mut out = TensorElement::zero(self.g);
        for (w, c) in &self.terms {
            let mut acc = TensorElement::one(self.g);
            for &x in w {
                acc = acc.mul_truncated(&image(x), max_deg);
            }
            out = &out + &acc.scale(c);
        }
        out
    }
}

impl Add for &TensorElement {
    type Output = TensorElement;
    fn add(self, rhs: &TensorElement) -> TensorElement {
        assert_eq!(self.g, rhs.g, "genus mismatch");
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &TensorElement {
    type Output = TensorElement;
    fn sub(self, rhs: &TensorElement) -> TensorElement {
        assert_eq!(self.g, rhs.g, "genus mismatch");
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &TensorElement {
    type Output = TensorElement;
    fn neg(self) -> TensorElement {
        TensorElement { g: self.g, terms: self.terms.iter().map(|(w, c)| (w.clone(), -c.clone())).collect() }
    }
}

impl Mul for &TensorElement {
    type Output = TensorElement;
    fn mul(self, rhs: &TensorElement) -> TensorElement {
        self.mul_truncated(rhs, usize::MAX)
    }
}
