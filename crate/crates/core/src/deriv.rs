//! Derivations of the free Lie ring, the Satoh trace, evaluation at omega and
//! the lattice C-bar_k = Tr(D_k).

use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cyclic::{necklaces, project_in_degree, CyclicClass};
use crate::error::{Error, Result};
use crate::freelie::{left_normed_decompose, left_normed_lie, lie_bracket, lyndon_basis, LieElement, TensorElement, Q};
use crate::intlinalg::{hnf_of, kernel_lattice, IntMatrix, LatticeBasis, SparseVec};
use crate::letters::{Letter, SignedPerm, Word};

/// A degree-k derivation, given by the images of the basis letters: the
/// term `x -> P` stands for x^* (x) P with x^* the coordinate dual of x.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    g: usize,
    k: usize,
    terms: BTreeMap<Letter, LieElement>,
}

impl Derivation {
    pub fn zero(g: usize, k: usize) -> Derivation {
        Derivation { g, k, terms: BTreeMap::new() }
    }

    /// x^* (x) value; the degree is one less than that of `value`.
    pub fn single(x: Letter, value: LieElement) -> Derivation {
        let g = value.genus();
        let k = value.homogeneous_degree().expect("value must be homogeneous and nonzero") - 1;
        let mut d = Derivation::zero(g, k);
        d.add_term(x, &value);
        d
    }

    pub fn add_term(&mut self, x: Letter, value: &LieElement) {
        assert!(x.in_genus(self.g), "covector outside genus");
        if value.is_zero() {
            return;
        }
        assert_eq!(value.homogeneous_degree(), Some(self.k + 1), "term of wrong degree");
        let e = self.terms.entry(x).or_insert_with(|| LieElement::zero(self.g));
        *e = &*e + value;
        if e.is_zero() {
            self.terms.remove(&x);
        }
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> &BTreeMap<Letter, LieElement> {
        &self.terms
    }

    pub fn value(&self, x: Letter) -> LieElement {
        self.terms.get(&x).cloned().unwrap_or_else(|| LieElement::zero(self.g))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|v| v.is_integral())
    }

    pub fn scale(&self, c: &Q) -> Derivation {
        let mut out = Derivation::zero(self.g, self.k);
        for (&x, v) in &self.terms {
            out.add_term(x, &v.scale(c));
        }
        out
    }

    /// Conjugation by a signed relabeling phi: the derivation phi d phi^{-1}.
    pub fn relabel(&self, p: &SignedPerm) -> Derivation {
        let mut out = Derivation::zero(self.g, self.k);
        for (&x, v) in &self.terms {
            let (s, y) = p.apply(x);
            let img = v.relabel(|l| p.apply(l));
            out.add_term(y, &img.scale(&Q::from_integer(BigInt::from(s))));
        }
        out
    }

    /// Extension to the tensor algebra as a derivation.
    pub fn act_on_tensor(&self, t: &TensorElement) -> TensorElement {
        let images: HashMap<Letter, TensorElement> = self.terms.iter().map(|(&x, v)| (x, v.to_tensor())).collect();
        let mut out = TensorElement::zero(self.g);
        for (w, c) in t.terms() {
            for (j, x) in w.iter().enumerate() {
                let Some(img) = images.get(x) else { continue };
                for (u, m) in img.terms() {
                    let mut nw = Vec::with_capacity(w.len() + u.len());
                    nw.extend_from_slice(&w[..j]);
                    nw.extend_from_slice(u);
                    nw.extend_from_slice(&w[j + 1..]);
                    out.add_term(nw, c * m);
                }
            }
        }
        out
    }

    pub fn eval(&self, x: &LieElement) -> LieElement {
        LieElement::from_tensor(&self.act_on_tensor(&x.to_tensor())).expect("derivations preserve Lie elements")
    }
}

impl Add for &Derivation {
    type Output = Derivation;
    fn add(self, rhs: &Derivation) -> Derivation {
        assert_eq!(self.g, rhs.g, "genus mismatch");
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        assert_eq!(self.k, rhs.k, "degree mismatch");
        let mut out = self.clone();
        for (&x, v) in &rhs.terms {
            out.add_term(x, v);
        }
        out
    }
}

impl Sub for &Derivation {
    type Output = Derivation;
    fn sub(self, rhs: &Derivation) -> Derivation {
        self + &(-rhs)
    }
}

impl Neg for &Derivation {
    type Output = Derivation;
    fn neg(self) -> Derivation {
        self.scale(&(-Q::one()))
    }
}

pub fn eval(d: &Derivation, x: &LieElement) -> LieElement {
    d.eval(x)
}

/// omega = sum_i [a_i, b_i]
pub fn omega_element(g: usize) -> LieElement {
    let mut w = LieElement::zero(g);
    for i in 1..=g {
        w = &w + &LieElement::basis(g, vec![Letter::a(i), Letter::b(i)]);
    }
    w
}

/// ev_omega(d) = sum_i [d(a_i), b_i] + [a_i, d(b_i)]
pub fn eval_omega(d: &Derivation) -> LieElement {
    let g = d.g;
    let mut out = LieElement::zero(g);
    for (&x, v) in &d.terms {
        let partner = LieElement::letter(g, x.bar());
        let t = if x.is_a() { lie_bracket(v, &partner) } else { lie_bracket(&partner, v) };
        out = &out + &t;
    }
    out
}

pub fn is_symplectic(d: &Derivation) -> bool {
    eval_omega(d).is_zero()
}

/// Integral section of ev_omega: [a_i, u] lifts to b_i^* (x) u and [b_i, v] to
/// -a_i^* (x) v, after rewriting into left-normed brackets.
pub fn omega_lift(l: &LieElement) -> Result<Derivation> {
    if !l.is_integral() {
        return Err(Error::NonIntegral);
    }
    let g = l.genus();
    if l.is_zero() {
        return Ok(Derivation::zero(g, 1));
    }
    let m = l.homogeneous_degree().ok_or(Error::NonHomogeneous)?;
    if m < 3 {
        return Err(Error::WrongDegree { expected: 3, got: m });
    }
    let mut d = Derivation::zero(g, m - 2);
    for (c, seq) in left_normed_decompose(l)? {
        // c [Y, x] = -c [x, Y]
        let x = seq[seq.len() - 1];
        let y = left_normed_lie(g, &seq[..seq.len() - 1]);
        let c = Q::from_integer(c);
        if x.is_a() {
            d.add_term(x.bar(), &y.scale(&-c));
        } else {
            d.add_term(x.bar(), &y.scale(&c));
        }
    }
    Ok(d)
}

/// Contracts each covector x^* against the first tensor factor of its value.
pub fn satoh_trace(d: &Derivation) -> CyclicClass {
    let mut t = TensorElement::zero(d.g);
    for (&x, v) in &d.terms {
        for (w, c) in v.to_tensor().terms() {
            if w[0] == x {
                t.add_term(w[1..].to_vec(), c.clone());
            }
        }
    }
    project_in_degree(&t, d.k)
}

/// [d1, d2] = d1 d2 - d2 d1
pub fn deriv_bracket(d1: &Derivation, d2: &Derivation) -> Derivation {
    assert_eq!(d1.g, d2.g, "genus mismatch");
    let mut out = Derivation::zero(d1.g, d1.k + d2.k);
    for x in Letter::all(d1.g) {
        let v = &d1.eval(&d2.value(x)) - &d2.eval(&d1.value(x));
        out.add_term(x, &v);
    }
    out
}

/// The action of a derivation on cyclic tensors.
pub fn act_on_cyclic(d: &Derivation, c: &CyclicClass) -> CyclicClass {
    assert_eq!(d.g, c.genus(), "genus mismatch");
    let t = TensorElement::from_terms(c.genus(), c.terms().iter().map(|(w, x)| (w.clone(), x.clone())));
    project_in_degree(&d.act_on_tensor(&t), c.degree() + d.k)
}

/// Basis x^* (x) P_w of Der_k, with w running over Lyndon words of length k+1.
pub fn der_basis(k: usize, g: usize) -> Vec<Derivation> {
    let lw = lyndon_basis(2 * g, k + 1);
    let mut out = Vec::with_capacity(2 * g * lw.len());
    for x in Letter::all(g) {
        for w in &lw {
            out.push(Derivation::single(x, LieElement::basis(g, w.clone())));
        }
    }
    out
}

/// Matrix of ev_omega: Der_k -> L_{k+2} in the Lyndon bases.
pub fn ev_omega_matrix(k: usize, g: usize) -> IntMatrix {
    let target: BTreeMap<Word, usize> = lyndon_basis(2 * g, k + 2).into_iter().enumerate().map(|(i, w)| (w, i)).collect();
    let basis = der_basis(k, g);
    let mut m = IntMatrix::zeros(basis.len(), target.len());
    for (r, e) in basis.iter().enumerate() {
        for (w, c) in eval_omega(e).terms() {
            m.set(r, target[w], c.to_integer());
        }
    }
    m
}

/// Configured limits for exact C-bar computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeBudget {
    pub max_degree: usize,
    pub max_genus: usize,
}

impl Default for LatticeBudget {
    fn default() -> Self {
        LatticeBudget { max_degree: 4, max_genus: 3 }
    }
}

impl LatticeBudget {
    pub fn allows(&self, k: usize, g: usize) -> bool {
        k <= self.max_degree && g <= self.max_genus
    }

    pub fn unlimited() -> LatticeBudget {
        LatticeBudget { max_degree: usize::MAX, max_genus: usize::MAX }
    }
}

/// How the generators of D_k are produced before taking traces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CbarRoute {
    /// Saturated integral kernel of the ev_omega matrix.
    Kernel,
    /// Images of the basis of Der_k under d -> d - omega_lift(ev_omega(d)),
    /// an integral retraction of Der_k onto D_k.
    Retraction,
}

/// C-bar_k inside the necklace coordinates of C_k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CbarLattice {
    pub k: usize,
    pub g: usize,
    pub coords: Vec<Word>,
    pub index: BTreeMap<Word, usize>,
    pub basis: LatticeBasis,
}

impl CbarLattice {
    pub fn contains(&self, c: &CyclicClass) -> Result<bool> {
        if c.is_zero() {
            return Ok(true);
        }
        if c.degree() != self.k {
            return Err(Error::WrongDegree { expected: self.k, got: c.degree() });
        }
        let v = c.coordinates(&self.index)?;
        Ok(self.basis.contains_sparse(&v))
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }
}

fn trace_vector(d: &Derivation, index: &BTreeMap<Word, usize>) -> SparseVec {
    satoh_trace(d).coordinates(index).expect("traces of integral derivations are integral")
}

/// Kernel route when Der_k is small enough for dense-ish elimination.
const KERNEL_ROUTE_LIMIT: usize = 2000;

pub fn cbar_lattice_via(k: usize, g: usize, route: CbarRoute) -> CbarLattice {
    assert!(k >= 1 && g >= 1);
    let coords = necklaces(2 * g, k);
    let index: BTreeMap<Word, usize> = coords.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let basis = der_basis(k, g);
    let vectors: Vec<SparseVec> = match route {
        CbarRoute::Kernel => {
            let traces: Vec<SparseVec> = basis.iter().map(|e| trace_vector(e, &index)).collect();
            let ker = kernel_lattice(&ev_omega_matrix(k, g));
            ker.rows()
                .iter()
                .map(|row| {
                    let mut acc = SparseVec::new();
                    for (&i, x) in row {
                        for (&j, t) in &traces[i] {
                            let e = acc.entry(j).or_default();
                            *e += x * t;
                        }
                    }
                    acc.retain(|_, v| !v.is_zero());
                    acc
                })
                .collect()
        }
        CbarRoute::Retraction => basis
            .iter()
            .map(|e| {
                let ev = eval_omega(e);
                let corr = if ev.is_zero() { Derivation::zero(g, k) } else { omega_lift(&ev).expect("integral") };
                trace_vector(&(e - &corr), &index)
            })
            .collect(),
    };
    let basis = hnf_of(coords.len(), vectors);
    CbarLattice { k, g, coords, index, basis }
}

fn cbar_cache() -> &'static RwLock<HashMap<(usize, usize), Arc<CbarLattice>>> {
    type Cache = RwLock<HashMap<(usize, usize), Arc<CbarLattice>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// C-bar_k(H) at genus g, memoized. Fails outside the budget.
pub fn cbar_lattice(k: usize, g: usize, budget: &LatticeBudget) -> Result<Arc<CbarLattice>> {
    if !budget.allows(k, g) {
        return Err(Error::Budget { degree: k, genus: g });
    }
    if let Some(l) = cbar_cache().read().expect("cache poisoned").get(&(k, g)) {
        return Ok(l.clone());
    }
    let route = if 2 * g * lyndon_basis(2 * g, k + 1).len() <= KERNEL_ROUTE_LIMIT {
        CbarRoute::Kernel
    } else {
        CbarRoute::Retraction
    };
    let l = Arc::new(cbar_lattice_via(k, g, route));
    cbar_cache().write().expect("cache poisoned").insert((k, g), l.clone());
    Ok(l)
}

/// psi(l) = Tr(omega_lift(l)) together with its C-bar membership when the
/// lattice is within budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiValue {
    pub representative: CyclicClass,
    pub in_cbar: Option<bool>,
}

pub fn psi(l: &LieElement, budget: &LatticeBudget) -> Result<PsiValue> {
    let d = omega_lift(l)?;
    let representative = satoh_trace(&d);
    let k = d.degree();
    let in_cbar = if budget.allows(k, l.genus()) {
        Some(cbar_lattice(k, l.genus(), budget)?.contains(&representative)?)
    } else {
        None
    };
    Ok(PsiValue { representative, in_cbar })
}
