//! Cyclic tensors C(H), the mirror quotient B_k(H), and necklace counting.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freelie::{TensorElement, Q};
use crate::letters::{Letter, SignedPerm, Word};

/// Lexicographically least rotation.
pub fn canonical_rotation(w: &[Letter]) -> Word {
    let n = w.len();
    if n == 0 {
        return Vec::new();
    }
    let mut best = 0;
    for i in 1..n {
        for j in 0..n {
            let (x, y) = (w[(i + j) % n], w[(best + j) % n]);
            if x != y {
                if x < y {
                    best = i;
                }
                break;
            }
        }
    }
    (0..n).map(|j| w[(best + j) % n]).collect()
}

pub fn is_necklace(w: &[Letter]) -> bool {
    canonical_rotation(w) == w
}

/// The mirror image w-bar: the word read backwards.
pub fn mirror(w: &[Letter]) -> Word {
    w.iter().rev().copied().collect()
}

/// A necklace is chiral when it equals its mirror up to rotation.
pub fn is_chiral(w: &[Letter]) -> bool {
    canonical_rotation(&mirror(w)) == canonical_rotation(w)
}

/// Canonical bracelet key and the necklace it came from: `(key, from_mirror)`.
pub fn bracelet_key(w: &[Letter]) -> (Word, bool) {
    let c = canonical_rotation(w);
    let m = canonical_rotation(&mirror(w));
    if m < c {
        (m, true)
    } else {
        (c, false)
    }
}

/// All necklaces of length k over n letters in lexicographic order.
pub fn necklaces(n: usize, k: usize) -> Vec<Word> {
    assert!(n >= 1 && k >= 1);
    let top = (n - 1) as u8;
    let mut out = Vec::new();
    let mut w: Vec<u8> = vec![0];
    loop {
        let m = w.len();
        while w.len() < k {
            w.push(w[w.len() - m]);
        }
        if k.is_multiple_of(m) {
            out.push(w.iter().map(|&x| Letter(x)).collect());
        }
        while w.last() == Some(&top) {
            w.pop();
        }
        match w.last_mut() {
            Some(x) => *x += 1,
            None => break,
        }
    }
    out
}

/// An element of C_k(H) keyed by canonical rotations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicClass {
    g: usize,
    k: usize,
    terms: BTreeMap<Word, Q>,
}

impl CyclicClass {
    pub fn zero(g: usize, k: usize) -> CyclicClass {
        CyclicClass { g, k, terms: BTreeMap::new() }
    }

    pub fn from_words(g: usize, k: usize, terms: impl IntoIterator<Item = (Word, Q)>) -> CyclicClass {
        let mut c = CyclicClass::zero(g, k);
        for (w, x) in terms {
            c.add_word(&w, x);
        }
        c
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> &BTreeMap<Word, Q> {
        &self.terms
    }

    pub fn coeff(&self, w: &[Letter]) -> Q {
        self.terms.get(&canonical_rotation(w)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn add_word(&mut self, w: &[Letter], c: Q) {
        assert_eq!(w.len(), self.k, "cyclic word of wrong degree");
        if c.is_zero() {
            return;
        }
        let key = canonical_rotation(w);
        let e = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn scale(&self, c: &Q) -> CyclicClass {
        if c.is_zero() {
            return CyclicClass::zero(self.g, self.k);
        }
        CyclicClass { g: self.g, k: self.k, terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect() }
    }

    pub fn relabel(&self, p: &SignedPerm) -> CyclicClass {
        let mut out = CyclicClass::zero(self.g, self.k);
        for (w, c) in &self.terms {
            let (s, img) = p.apply_word(w);
            out.add_word(&img, c * Q::from_integer(BigInt::from(s)));
        }
        out
    }

    /// Integer coordinates against a list of canonical necklaces.
    pub fn coordinates(&self, index: &BTreeMap<Word, usize>) -> Result<BTreeMap<usize, BigInt>> {
        if !self.is_integral() {
            return Err(Error::NonIntegral);
        }
        let mut out = BTreeMap::new();
        for (w, c) in &self.terms {
            let i = *index.get(w).ok_or(Error::DimensionMismatch { expected: index.len(), got: index.len() + 1 })?;
            out.insert(i, c.to_integer());
        }
        Ok(out)
    }
}

impl Add for &CyclicClass {
    type Output = CyclicClass;
    fn add(self, rhs: &CyclicClass) -> CyclicClass {
        assert_eq!(self.g, rhs.g, "genus mismatch");
        let k = if self.is_zero() { rhs.k } else { self.k };
        let mut out = CyclicClass { g: self.g, k, terms: self.terms.clone() };
        for (w, c) in &rhs.terms {
            out.add_word(w, c.clone());
        }
        out
    }
}

impl Sub for &CyclicClass {
    type Output = CyclicClass;
    fn sub(self, rhs: &CyclicClass) -> CyclicClass {
        self + &(-rhs)
    }
}

impl Neg for &CyclicClass {
    type Output = CyclicClass;
    fn neg(self) -> CyclicClass {
        self.scale(&(-Q::one()))
    }
}

/// Projection T_k(H) -> C_k(H).
pub fn cyclic_project(t: &TensorElement) -> Result<CyclicClass> {
    if t.is_zero() {
        return Ok(CyclicClass::zero(t.genus(), 0));
    }
    let k = t.homogeneous_degree().ok_or(Error::NonHomogeneous)?;
    Ok(project_in_degree(t, k))
}

pub(crate) fn project_in_degree(t: &TensorElement, k: usize) -> CyclicClass {
    let mut out = CyclicClass::zero(t.genus(), k);
    for (w, c) in t.terms() {
        out.add_word(w, c.clone());
    }
    out
}

/// An element of B_k(H) = C_k(H)/Mir_k(H), split into its free part (keyed by
/// canonical bracelets) and its 2-torsion part (chiral necklaces, odd k only).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BClass {
    pub g: usize,
    pub k: usize,
    pub free: BTreeMap<Word, BigInt>,
    pub torsion: BTreeSet<Word>,
}

impl BClass {
    pub fn is_zero(&self) -> bool {
        self.free.is_empty() && self.torsion.is_empty()
    }

    pub fn torsion_contains(&self, w: &[Letter]) -> bool {
        self.torsion.contains(&canonical_rotation(w))
    }

    pub fn add(&self, other: &BClass) -> BClass {
        let mut out = self.clone();
        for (w, c) in &other.free {
            let e = out.free.entry(w.clone()).or_default();
            *e += c;
            if e.is_zero() {
                out.free.remove(w);
            }
        }
        for w in &other.torsion {
            if !out.torsion.remove(w) {
                out.torsion.insert(w.clone());
            }
        }
        out
    }
}

/// Reduction C_k -> B_k, identifying w with (-1)^k w-bar.
pub fn mirror_reduce(c: &CyclicClass) -> Result<BClass> {
    if !c.is_integral() {
        return Err(Error::NonIntegral);
    }
    let k = c.k;
    let mut out = BClass { g: c.g, k, free: BTreeMap::new(), torsion: BTreeSet::new() };
    for (w, x) in &c.terms {
        let x = x.to_integer();
        let (key, from_mirror) = bracelet_key(w);
        if k % 2 == 1 && is_chiral(w) {
            if x.is_odd() && !out.torsion.remove(&key) {
                out.torsion.insert(key);
            }
            continue;
        }
        let signed = if from_mirror && k % 2 == 1 { -x } else { x };
        let e = out.free.entry(key.clone()).or_default();
        *e += signed;
        if e.is_zero() {
            out.free.remove(&key);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub necklaces: u128,
    pub bracelets: u128,
    pub chiral: u128,
    pub b_free_rank: u128,
    pub b_torsion_rank: u128,
}

fn euler_phi(mut n: u128) -> u128 {
    let mut res = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            res -= res / p;
        }
        p += 1;
    }
    if n > 1 {
        res -= res / n;
    }
    res
}

fn pow(n: usize, e: usize) -> u128 {
    (n as u128).checked_pow(e as u32).expect("count overflows u128")
}

/// Closed formulas (Burnside counting) for necklaces, bracelets, chiral
/// necklaces and the ranks of B_k.
pub fn counts(k: usize, n: usize) -> Counts {
    assert!(k >= 1 && n >= 1);
    let s: u128 = (1..=k).filter(|d| k.is_multiple_of(*d)).map(|d| euler_phi(d as u128) * pow(n, k / d)).sum();
    let necklaces = s / k as u128;
    let chiral = if k.is_multiple_of(2) { (n as u128 + 1) * pow(n, k / 2) / 2 } else { pow(n, k.div_ceil(2)) };
    let bracelets = (necklaces + chiral) / 2;
    let (b_free_rank, b_torsion_rank) = if k.is_multiple_of(2) { (bracelets, 0) } else { (bracelets - chiral, chiral) };
    Counts { necklaces, bracelets, chiral, b_free_rank, b_torsion_rank }
}

/// Counts by explicit enumeration of all n^k words.
pub fn counts_brute(k: usize, n: usize) -> Counts {
    assert!(k >= 1 && n >= 1);
    let total = pow(n, k);
    let mut necks = BTreeSet::new();
    let mut w = vec![Letter(0); k];
    for mut idx in 0..total {
        for slot in w.iter_mut() {
            *slot = Letter((idx % n as u128) as u8);
            idx /= n as u128;
        }
        necks.insert(canonical_rotation(&w));
    }
    let chiral = necks.iter().filter(|w| is_chiral(w)).count() as u128;
    let bracelets = necks.iter().map(|w| bracelet_key(w).0).collect::<BTreeSet<_>>().len() as u128;
    let necklaces = necks.len() as u128;
    let (b_free_rank, b_torsion_rank) = if k.is_multiple_of(2) { (bracelets, 0) } else { (bracelets - chiral, chiral) };
    Counts { necklaces, bracelets, chiral, b_free_rank, b_torsion_rank }
}
