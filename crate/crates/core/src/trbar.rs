//! Secondary obstructions on Ker(Tr) in the symplectic derivations: Tr-bar by
//! the closed tree formula and by the boundary word of a lift, its mirror and
//! wedge reductions, and the torsion witnesses.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use rand::Rng;
use serde::Serialize;

use crate::cyclic::{canonical_rotation, mirror_reduce, necklaces, BClass, CyclicClass};
use crate::deriv::{cbar_lattice, eval_omega, omega_lift, satoh_trace, Derivation, LatticeBudget};
use crate::error::{Error, Result};
use crate::freegroup::{boundary_word, leading_lie_class, magnus, FreeAutomorphism, GroupWord};
use crate::freelie::{lie_bracket, star_commutator, LieElement, Q};
use crate::intlinalg::{kernel_lattice, IntMatrix, SparseVec};
use crate::letters::{omega, Letter, Word};
use crate::trees::{
    cherries, delta, double_rational, eta, eta_rational, eta_term, five_tree, lie_of_rooted, leaf_branches, tree_bracket, tripod,
    Tree, TreeSum, TreeTerm,
};

/// Which quotient decides whether an obstruction vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReduceMode {
    /// Exact representative only.
    None,
    /// Modulo the lattice C-bar.
    Cbar,
    /// Modulo Mir, in B.
    Mir,
}

impl ReduceMode {
    /// cbar when the output degree is within the lattice budget, mir otherwise.
    pub fn default_for(degree: usize, g: usize, budget: &LatticeBudget) -> ReduceMode {
        if budget.allows(degree, g) {
            ReduceMode::Cbar
        } else {
            ReduceMode::Mir
        }
    }
}

impl std::str::FromStr for ReduceMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<ReduceMode> {
        match s {
            "none" => Ok(ReduceMode::None),
            "cbar" => Ok(ReduceMode::Cbar),
            "mir" => Ok(ReduceMode::Mir),
            _ => Err(Error::Parse(format!("unknown reduction '{s}'"))),
        }
    }
}

/// A value in C_{k+1} together with the verdict of the chosen reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionValue {
    pub degree: usize,
    pub representative: CyclicClass,
    pub mode: ReduceMode,
    /// Under `None` this only says whether the representative is exactly zero.
    pub zero: bool,
    /// The mirror reduction, filled in under `Mir`.
    pub mir: Option<BClass>,
}

impl ObstructionValue {
    fn reduce(representative: CyclicClass, mode: ReduceMode, budget: &LatticeBudget) -> Result<ObstructionValue> {
        let degree = representative.degree();
        let g = representative.genus();
        let (zero, mir) = match mode {
            ReduceMode::None => (representative.is_zero(), None),
            ReduceMode::Cbar => (cbar_lattice(degree, g, budget)?.contains(&representative)?, None),
            ReduceMode::Mir => {
                let b = mirror_reduce(&representative)?;
                (b.is_zero(), Some(b))
            }
        };
        Ok(ObstructionValue { degree, representative, mode, zero, mir })
    }
}

fn trace_single(x: Letter, v: LieElement, degree: usize) -> CyclicClass {
    if v.is_zero() {
        return CyclicClass::zero(v.genus(), degree);
    }
    satoh_trace(&Derivation::single(x, v))
}

/// The three pieces (first, second, third) of the closed formula for one
/// term, weighted by its coefficient; Tr-bar adds up first + second - third.
pub fn formula_pieces(g: usize, t: &TreeTerm) -> (CyclicClass, CyclicClass, CyclicClass) {
    let k = t.degree();
    let lambda = t.lambda();
    let half = Q::new(BigInt::from(1), BigInt::from(2));
    let mut first = CyclicClass::zero(g, k + 1);
    let mut second = CyclicClass::zero(g, k + 1);
    for (x, branch) in leaf_branches(&t.tree) {
        let lie = lie_of_rooted(g, &branch);
        let lx = LieElement::letter(g, x);
        let both = &lx + &LieElement::letter(g, x.bar());
        first = &first + &trace_single(x, lie_bracket(&lx, &lie), k + 1);
        second = &second + &trace_single(x.bar(), lie_bracket(&both, &lie), k + 1);
    }
    // the doubled trees are traced with the opposite reading; only the
    // representative changes since Tr(eta(D(T))) lies in C-bar
    let third = satoh_trace(&eta_rational(g, k + 1, &double_rational(t)));
    (first.scale(&lambda), second.scale(&(&lambda * &half)), third.scale(&-half))
}

/// Checks the preconditions shared by the tree-sum operations and returns the degree.
fn check_kernel(d: &TreeSum) -> Result<usize> {
    let k = d.degree().ok_or(Error::NonHomogeneous)?;
    let g = d.genus();
    if 2 * g < k + 2 {
        return Err(Error::GenusTooSmall { degree: k, genus: g });
    }
    let e = eta(d);
    if !e.is_integral() {
        return Err(Error::NonIntegral);
    }
    if !eval_omega(&e).is_zero() {
        return Err(Error::NotSymplectic);
    }
    if !satoh_trace(&e).is_zero() {
        return Err(Error::NotTraceFree);
    }
    Ok(k)
}

/// Tr-bar of an element of Ker(Tr) given as an integral tree sum:
/// first + second - third, where per term and per leaf t with branch T_t
/// first = Tr(t^* (x) [t, T_t]), second = 1/2 Tr(tbar^* (x) [t + tbar, T_t])
/// and third = -1/2 Tr(eta(D(T))).
pub fn trbar_formula_exact(d: &TreeSum) -> Result<CyclicClass> {
    let k = check_kernel(d)?;
    let g = d.genus();
    let mut total = CyclicClass::zero(g, k + 1);
    for t in d.terms() {
        let (first, second, third) = formula_pieces(g, t);
        total = &(&(&total + &first) + &second) - &third;
    }
    if !total.is_integral() {
        return Err(Error::NonIntegralResult);
    }
    Ok(total)
}

pub fn trbar_formula(d: &TreeSum, mode: ReduceMode, budget: &LatticeBudget) -> Result<ObstructionValue> {
    ObstructionValue::reduce(trbar_formula_exact(d)?, mode, budget)
}

/// Checks f(x) x^{-1} in Gamma_{k+1} for every generator x.
pub fn check_in_filtration(f: &FreeAutomorphism, k: usize, max_degree: usize) -> Result<()> {
    if k + 1 > max_degree {
        return Err(Error::DegreeCap { cap: max_degree, need: k + 1 });
    }
    let g = f.genus();
    for x in Letter::all(g) {
        let gx = GroupWord::generator(g, x);
        let u = f.apply(&gx).mul(&gx.inverse());
        if magnus(&u, k).terms().keys().any(|w| !w.is_empty()) {
            return Err(Error::NotInFiltration(k));
        }
    }
    Ok(())
}

/// The leading class of f(zeta) zeta^{-1} in degree k+3, after checking f is
/// in A_k and the induced derivation is symplectic.
pub fn boundary_class(f: &FreeAutomorphism, k: usize, max_degree: usize) -> Result<LieElement> {
    check_in_filtration(f, k, max_degree)?;
    if k + 3 > max_degree {
        return Err(Error::DegreeCap { cap: max_degree, need: k + 3 });
    }
    let z = boundary_word(f.genus());
    let w = f.apply(&z).mul(&z.inverse());
    leading_lie_class(&w, k + 3).map_err(|e| match e {
        Error::NotInGamma(_) => Error::NotSymplectic,
        e => e,
    })
}

/// Tr-bar of the degree-k derivation induced by f, read off the boundary word:
/// psi applied to minus the leading class of f(zeta) zeta^{-1}.
pub fn trbar_direct(
    f: &FreeAutomorphism,
    k: usize,
    mode: ReduceMode,
    budget: &LatticeBudget,
    max_degree: usize,
) -> Result<ObstructionValue> {
    let lead = boundary_class(f, k, max_degree)?;
    let rep = if lead.is_zero() {
        CyclicClass::zero(f.genus(), k + 1)
    } else {
        satoh_trace(&omega_lift(&lead.scale(&Q::from_integer(BigInt::from(-1))))?)
    };
    ObstructionValue::reduce(rep, mode, budget)
}

/// Tr-bar followed by the mirror reduction.
pub fn tr_mir(d: &TreeSum) -> Result<BClass> {
    mirror_reduce(&trbar_formula_exact(d)?)
}

pub fn tr_mir_direct(f: &FreeAutomorphism, k: usize, max_degree: usize) -> Result<BClass> {
    let v = trbar_direct(f, k, ReduceMode::Mir, &LatticeBudget::default(), max_degree)?;
    Ok(v.mir.expect("mir mode fills the reduction"))
}

/// An element of Lambda^2(H) (x) Z/2: the set of pairs x < y with bit 1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WedgeClass {
    pub pairs: BTreeSet<(Letter, Letter)>,
}

impl WedgeClass {
    pub fn zero() -> WedgeClass {
        WedgeClass::default()
    }

    /// Adds c * (x ^ y) mod 2. Diagonal pairs vanish.
    pub fn add(&mut self, x: Letter, y: Letter, c: &BigInt) {
        if x == y || c.is_even() {
            return;
        }
        let key = if x < y { (x, y) } else { (y, x) };
        if !self.pairs.remove(&key) {
            self.pairs.insert(key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.pairs.is_empty()
    }
}

fn om(x: Letter, y: Letter) -> BigInt {
    BigInt::from(omega(x, y))
}

/// Tr^as on degree-2 tree sums: [h,i]-[j,k] goes to
/// w(h,j) i^k + w(h,k) i^j + w(i,j) h^k + w(i,k) h^j, and a half term
/// 1/2 [h,k]-[h,k] goes to (1 + w(h,k)) h^k, all mod 2.
pub fn tr_as(d: &TreeSum) -> Result<WedgeClass> {
    let mut out = WedgeClass::zero();
    for t in d.terms() {
        if t.degree() != 2 {
            return Err(Error::WrongDegree { expected: 2, got: t.degree() });
        }
        let ([h, i], [j, k]) = cherries(&t.tree).expect("four-leaf diagram");
        if t.half {
            out.add(h, i, &(&t.coeff * (BigInt::from(1) + om(h, i))));
            continue;
        }
        let c = &t.coeff;
        out.add(i, k, &(c * om(h, j)));
        out.add(i, j, &(c * om(h, k)));
        out.add(h, k, &(c * om(i, j)));
        out.add(h, j, &(c * om(i, k)));
    }
    Ok(out)
}

/// iota(x ^ y) = xxy + yyx in the 2-torsion of B_3.
pub fn iota(g: usize, w: &WedgeClass) -> BClass {
    let mut out = BClass { g, k: 3, free: Default::default(), torsion: BTreeSet::new() };
    for &(x, y) in &w.pairs {
        for word in [vec![x, x, y], vec![y, y, x]] {
            let key = canonical_rotation(&word);
            if !out.torsion.remove(&key) {
                out.torsion.insert(key);
            }
        }
    }
    out
}

/// 1/2 X - X with X the left-normed bracket [..[a_1, a_2], .., a_{k+1}].
pub fn witness(k: usize, g: usize) -> Result<TreeSum> {
    if g < k + 2 {
        return Err(Error::GenusTooSmall { degree: 2 * k, genus: g });
    }
    let letters: Vec<Letter> = (1..=k + 1).map(Letter::a).collect();
    let x = Tree::left_normed(&letters);
    TreeSum::half(g, Tree::node(x.clone(), x))
}

/// m a_1 mbar for m = a_{k+1} ... a_2.
pub fn witness_word(k: usize) -> Word {
    let mut w: Word = (2..=k + 1).rev().map(Letter::a).collect();
    w.push(Letter::a(1));
    w.extend((2..=k + 1).map(Letter::a));
    w
}

/// Result of checking one torsion witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub k: usize,
    pub g: usize,
    pub trace_free: bool,
    pub symplectic: bool,
    pub tr_mir_nonzero: bool,
    pub torsion_coordinate: bool,
    /// Only for k = 3: the displayed bracket decomposition of 2 d_a.
    pub bracket_decomposition: Option<bool>,
    /// Only for k = 3: the nested tripod form of the first factor.
    pub nested_decomposition: Option<bool>,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.trace_free
            && self.symplectic
            && self.tr_mir_nonzero
            && self.torsion_coordinate
            && self.bracket_decomposition != Some(false)
            && self.nested_decomposition != Some(false)
    }
}

/// The two five-leaf trees whose bracket gives 2 d_a for k = 3 and the nested
/// tripod form of the first one.
pub fn bracket_decomposition_k3(g: usize) -> Result<(bool, bool)> {
    if g < 5 {
        return Err(Error::GenusTooSmall { degree: 6, genus: g });
    }
    let a = Letter::a;
    let t1 = TreeSum::single(g, five_tree([a(2), a(1), a(5), a(4), a(3)]));
    let t2 = TreeSum::single(g, five_tree([a(4), Letter::b(5), a(1), a(2), a(3)]));
    let two_da = eta(&witness(3, g)?).scale(&Q::from_integer(BigInt::from(2)));
    // with [d1, d2] = d1 d2 - d2 d1 the displayed pair enters in reverse order
    let outer = eta(&tree_bracket(&t2, &t1)?) == two_da;
    let tri = |p, q, r| TreeSum::single(g, tripod(p, q, r));
    let inner = tree_bracket(&tri(a(3), a(1), Letter::b(1)), &tri(a(4), a(1), a(5)))?;
    let nested = tree_bracket(&tri(a(2), a(1), Letter::b(1)), &inner)?;
    Ok((outer, eta(&nested) == eta(&t1)))
}

pub fn witness_check(k: usize, g: usize) -> Result<WitnessReport> {
    let d = witness(k, g)?;
    let e = eta(&d);
    let trace_free = satoh_trace(&e).is_zero();
    let symplectic = eval_omega(&e).is_zero();
    let (tr_mir_nonzero, torsion_coordinate) = match tr_mir(&d) {
        Ok(b) => (!b.is_zero(), b.torsion_contains(&witness_word(k))),
        Err(_) => (false, false),
    };
    let (bracket_decomposition, nested_decomposition) = if k == 3 {
        let (o, n) = bracket_decomposition_k3(g)?;
        (Some(o), Some(n))
    } else {
        (None, None)
    };
    Ok(WitnessReport { k, g, trace_free, symplectic, tr_mir_nonzero, torsion_coordinate, bracket_decomposition, nested_decomposition })
}

/// The degree-1 derivation a_i -> -1/2 [a_i, b_i], b_i -> -1/2 [a_i, b_i]
/// carrying the quadratic part of the symplectic expansion.
pub fn quadratic_correction(g: usize) -> Derivation {
    let mut d = Derivation::zero(g, 1);
    let minus_half = Q::new(BigInt::from(-1), BigInt::from(2));
    for i in 1..=g {
        let w = LieElement::basis(g, vec![Letter::a(i), Letter::b(i)]).scale(&minus_half);
        d.add_term(Letter::a(i), &w);
        d.add_term(Letter::b(i), &w);
    }
    d
}

fn log_of_bracketed(g: usize, t: &Tree, max_deg: usize) -> Result<LieElement> {
    match t {
        Tree::Leaf(x) => {
            let i = x.pair();
            let w = LieElement::basis(g, vec![Letter::a(i), Letter::b(i)]).scale(&Q::new(BigInt::from(-1), BigInt::from(2)));
            Ok(&LieElement::letter(g, *x) + &w)
        }
        Tree::Node(l, r) => star_commutator(&log_of_bracketed(g, l, max_deg)?, &log_of_bracketed(g, r, max_deg)?, max_deg),
    }
}

/// Degree k+1 part of log theta(gamma) for the group commutator gamma built
/// along the bracketing `t` of length k, with theta known through degree 2.
pub fn expansion_next_term(g: usize, t: &Tree) -> Result<LieElement> {
    let k = t.num_leaves();
    Ok(log_of_bracketed(g, t, k + 1)?.degree_part(k + 1))
}

/// Compares the degree k+1 term of the expansion of a bracketed word with
/// d_2(w) + 1/2 delta(w), d_2 being the quadratic correction.
pub fn delta_lemma_holds(g: usize, t: &Tree) -> Result<bool> {
    let lhs = expansion_next_term(g, t)?;
    let w = lie_of_rooted(g, t);
    let rhs = &quadratic_correction(g).eval(&w) + &delta(g, t)?.scale(&Q::new(BigInt::from(1), BigInt::from(2)));
    Ok(lhs == rhs)
}

/// The iterated group commutator along a bracketing.
pub fn bracketed_group_word(g: usize, t: &Tree) -> GroupWord {
    match t {
        Tree::Leaf(x) => GroupWord::generator(g, *x),
        Tree::Node(l, r) => bracketed_group_word(g, l).commutator(&bracketed_group_word(g, r)),
    }
}

fn random_rooted<R: Rng>(rng: &mut R, letters: &[Letter], leaves: usize) -> Tree {
    if leaves == 1 {
        return Tree::leaf(letters[rng.gen_range(0..letters.len())]);
    }
    let left = rng.gen_range(1..leaves);
    Tree::node(random_rooted(rng, letters, left), random_rooted(rng, letters, leaves - left))
}

/// A random diagram of degree k over the letters of genus g.
pub fn random_tree<R: Rng>(rng: &mut R, g: usize, k: usize) -> Tree {
    let letters: Vec<Letter> = Letter::all(g).collect();
    let n = k + 2;
    let left = rng.gen_range(1..n);
    Tree::node(random_rooted(rng, &letters, left), random_rooted(rng, &letters, n - left))
}

/// Random integral elements of Ker(Tr) in D_k: the kernel lattice of the trace
/// on `pool` random trees (and, in even degree, some half-symmetric terms).
pub fn sample_trace_free<R: Rng>(rng: &mut R, g: usize, k: usize, pool: usize) -> Vec<TreeSum> {
    let mut terms: Vec<TreeTerm> = Vec::with_capacity(pool);
    while terms.len() < pool {
        if k.is_multiple_of(2) && rng.gen_bool(0.25) {
            let letters: Vec<Letter> = Letter::all(g).collect();
            let u = random_rooted(rng, &letters, k / 2 + 1);
            terms.push(TreeTerm::half(1, Tree::node(u.clone(), u)).expect("symmetric"));
        } else {
            terms.push(TreeTerm::new(1, random_tree(rng, g, k)));
        }
    }
    let coords = necklaces(2 * g, k);
    let index: BTreeMap<Word, usize> = coords.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let rows: Vec<SparseVec> = terms
        .iter()
        .map(|t| satoh_trace(&eta_term(g, t)).coordinates(&index).expect("integral trace"))
        .collect();
    let ker = kernel_lattice(&IntMatrix::from_sparse_rows(coords.len(), rows));
    ker.rows()
        .iter()
        .filter_map(|row| {
            let ts: Vec<TreeTerm> =
                row.iter().map(|(&i, c)| TreeTerm { coeff: c * &terms[i].coeff, ..terms[i].clone() }).collect();
            let s = TreeSum::from_terms(g, ts).ok()?;
            (!eta(&s).is_zero()).then_some(s)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::parse_aut;
    use crate::freelie::q;
    use crate::trees::h_tree;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn a(i: usize) -> Letter {
        Letter::a(i)
    }

    fn b(i: usize) -> Letter {
        Letter::b(i)
    }

    fn class(g: usize, terms: &[(&[Letter], i64)]) -> CyclicClass {
        CyclicClass::from_words(g, terms[0].0.len(), terms.iter().map(|(w, c)| (w.to_vec(), q(*c))))
    }

    #[test]
    fn worked_examples() {
        let d = TreeSum::half(2, h_tree(a(1), b(1), a(1), b(1))).unwrap();
        assert!(trbar_formula_exact(&d).unwrap().is_zero());

        let d = TreeSum::half(2, h_tree(a(1), a(2), a(1), a(2))).unwrap();
        let v = trbar_formula(&d, ReduceMode::Cbar, &LatticeBudget::default()).unwrap();
        assert_eq!(v.representative, class(2, &[(&[a(2), a(2), a(1)], 1), (&[a(1), a(1), a(2)], 1)]));
        assert!(!v.zero);

        let d = TreeSum::single(3, h_tree(a(1), a(3), a(2), b(1)));
        let rep = trbar_formula_exact(&d).unwrap();
        assert_eq!(rep, class(3, &[(&[a(3), a(2), a(2)], -1), (&[a(2), a(3), a(3)], -1)]));
    }

    #[test]
    fn preconditions() {
        let d = TreeSum::single(3, five_tree([a(1), b(1), a(1), a(2), a(1)]));
        assert!(!satoh_trace(&eta(&d)).is_zero());
        assert_eq!(trbar_formula_exact(&d), Err(Error::NotTraceFree));
        let d = TreeSum::half(1, h_tree(a(1), b(1), a(1), b(1))).unwrap();
        assert!(matches!(trbar_formula_exact(&d), Err(Error::GenusTooSmall { .. })));
    }

    #[test]
    fn direct_route_on_identity_and_square() {
        let budget = LatticeBudget::default();
        let v = trbar_direct(&FreeAutomorphism::identity(2), 2, ReduceMode::Cbar, &budget, 8).unwrap();
        assert!(v.representative.is_zero() && v.zero);
        let f = parse_aut(2, "[K a1 a2, K3 b1 a1 a2] * [K a2 a1, K3 b2 a2 a1]").unwrap();
        let v = trbar_direct(&f, 2, ReduceMode::Cbar, &budget, 8).unwrap();
        assert!(!v.zero);
        let v2 = trbar_direct(&f.compose(&f), 2, ReduceMode::Cbar, &budget, 8).unwrap();
        assert!(v2.zero);
        assert_eq!(trbar_direct(&f, 3, ReduceMode::None, &budget, 8), Err(Error::NotInFiltration(3)));
        assert!(matches!(trbar_direct(&f, 2, ReduceMode::None, &budget, 4), Err(Error::DegreeCap { .. })));
    }

    #[test]
    fn wedge_and_iota() {
        let d = TreeSum::half(2, h_tree(a(1), a(2), a(1), a(2))).unwrap();
        let w = tr_as(&d).unwrap();
        assert_eq!(w.pairs.iter().copied().collect::<Vec<_>>(), vec![(a(1), a(2))]);
        assert!(tr_as(&TreeSum::half(2, h_tree(a(1), b(1), a(1), b(1))).unwrap()).unwrap().is_zero());
        let i = iota(2, &w);
        assert!(i.torsion_contains(&[a(1), a(1), a(2)]) && i.torsion_contains(&[a(2), a(2), a(1)]));
        assert_eq!(i, tr_mir(&d).unwrap());
        let t = TreeSum::single(2, tripod(a(1), a(2), b(1)));
        assert!(tr_as(&t).is_err());
    }

    #[test]
    fn witnesses() {
        assert_eq!(witness_word(2), vec![a(3), a(2), a(1), a(2), a(3)]);
        assert!(witness(1, 2).is_err());
        assert!(witness_check(1, 3).unwrap().passed());
        assert_eq!(bracket_decomposition_k3(5).unwrap(), (true, true));
    }

    #[test]
    fn delta_lemma_small() {
        let t = Tree::node(Tree::leaf(a(1)), Tree::node(Tree::leaf(b(1)), Tree::leaf(a(2))));
        assert!(delta_lemma_holds(2, &t).unwrap());
        assert!(delta_lemma_holds(2, &Tree::node(Tree::leaf(a(1)), Tree::leaf(b(1)))).unwrap());
    }

    #[test]
    fn sampled_kernel_elements_are_trace_free() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = sample_trace_free(&mut rng, 2, 2, 30);
        assert!(!s.is_empty());
        for d in &s {
            assert!(satoh_trace(&eta(d)).is_zero());
        }
    }
}
