//! Tree diagrams with labeled leaves: the expansion eta into symplectic
//! derivations, doubling, the delta operation and the tree bracket.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::cyclic::{project_in_degree, CyclicClass};
use crate::deriv::Derivation;
use crate::error::{Error, Result};
use crate::freelie::{LieElement, TensorElement, Q};
use crate::letters::{omega, omega_dual, Letter, SignedPerm};

/// A planar binary tree. Read as rooted, `Node(l, r)` is the bracket [l, r].
/// Read as a diagram, `Node(x, y)` is the unrooted tree obtained by joining
/// the roots of x and y with an edge.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tree {
    Leaf(Letter),
    Node(Box<Tree>, Box<Tree>),
}

impl Tree {
    pub fn leaf(x: Letter) -> Tree {
        Tree::Leaf(x)
    }

    pub fn node(l: Tree, r: Tree) -> Tree {
        Tree::Node(Box::new(l), Box::new(r))
    }

    /// Left-normed [[...[x_1, x_2], ...], x_m].
    pub fn left_normed(xs: &[Letter]) -> Tree {
        assert!(!xs.is_empty());
        xs[1..].iter().fold(Tree::leaf(xs[0]), |acc, &x| Tree::node(acc, Tree::leaf(x)))
    }

    pub fn leaves(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<Letter>) {
        match self {
            Tree::Leaf(x) => out.push(*x),
            Tree::Node(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    pub fn num_leaves(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node(l, r) => l.num_leaves() + r.num_leaves(),
        }
    }

    pub fn relabel(&self, p: &SignedPerm) -> (i32, Tree) {
        match self {
            Tree::Leaf(x) => {
                let (s, y) = p.apply(*x);
                (s, Tree::Leaf(y))
            }
            Tree::Node(l, r) => {
                let (sl, l) = l.relabel(p);
                let (sr, r) = r.relabel(p);
                (sl * sr, Tree::node(l, r))
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Tree::Leaf(x) => Value::String(x.to_string()),
            Tree::Node(l, r) => json!([l.to_json(), r.to_json()]),
        }
    }

    pub fn from_json(v: &Value) -> Result<Tree> {
        match v {
            Value::String(s) => Ok(Tree::Leaf(s.parse()?)),
            Value::Array(a) if a.len() == 2 => Ok(Tree::node(Tree::from_json(&a[0])?, Tree::from_json(&a[1])?)),
            _ => Err(Error::Parse(format!("bad tree node `{v}`"))),
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf(x) => write!(f, "{x}"),
            Tree::Node(l, r) => write!(f, "[{l},{r}]"),
        }
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// [[p1, p2], p3] read as a diagram: the tripod with boundary (p1, p2, p3).
pub fn tripod(p1: Letter, p2: Letter, p3: Letter) -> Tree {
    Tree::node(Tree::node(Tree::leaf(p1), Tree::leaf(p2)), Tree::leaf(p3))
}

/// [w, x] joined to [y, z].
pub fn h_tree(w: Letter, x: Letter, y: Letter, z: Letter) -> Tree {
    Tree::node(Tree::node(Tree::leaf(w), Tree::leaf(x)), Tree::node(Tree::leaf(y), Tree::leaf(z)))
}

/// [p1, p2] joined to [[p3, p4], p5].
pub fn five_tree(p: [Letter; 5]) -> Tree {
    Tree::node(
        Tree::node(Tree::leaf(p[0]), Tree::leaf(p[1])),
        Tree::node(Tree::node(Tree::leaf(p[2]), Tree::leaf(p[3])), Tree::leaf(p[4])),
    )
}

fn rooted_tensor(g: usize, t: &Tree) -> TensorElement {
    match t {
        Tree::Leaf(x) => TensorElement::letter(g, *x),
        Tree::Node(l, r) => rooted_tensor(g, l).commutator(&rooted_tensor(g, r)),
    }
}

/// The Lie element of a rooted tree: leaves are letters, nodes are brackets.
pub fn lie_of_rooted(g: usize, t: &Tree) -> LieElement {
    LieElement::from_tensor(&rooted_tensor(g, t)).expect("bracket trees are Lie")
}

/// Unrooted trivalent tree with a cyclic order of neighbours at each internal vertex.
#[derive(Clone, Debug)]
struct Graph {
    labels: Vec<Option<Letter>>,
    adj: Vec<Vec<usize>>,
}

const UNSET: usize = usize::MAX;

impl Graph {
    fn from_diagram(t: &Tree) -> Graph {
        let mut gr = Graph { labels: Vec::new(), adj: Vec::new() };
        match t {
            Tree::Leaf(_) => panic!("a diagram needs at least two leaves"),
            Tree::Node(x, y) => {
                let xr = gr.add(x, UNSET);
                let yr = gr.add(y, xr);
                for n in gr.adj[xr].iter_mut() {
                    if *n == UNSET {
                        *n = yr;
                    }
                }
            }
        }
        gr
    }

    fn add(&mut self, t: &Tree, parent: usize) -> usize {
        let id = self.labels.len();
        match t {
            Tree::Leaf(x) => {
                self.labels.push(Some(*x));
                self.adj.push(vec![parent]);
            }
            Tree::Node(l, r) => {
                self.labels.push(None);
                self.adj.push(vec![parent, UNSET, UNSET]);
                let li = self.add(l, id);
                let ri = self.add(r, id);
                self.adj[id][1] = li;
                self.adj[id][2] = ri;
            }
        }
        id
    }

    fn leaves(&self) -> Vec<usize> {
        (0..self.labels.len()).filter(|&i| self.labels[i].is_some()).collect()
    }

    /// Neighbours of `at` in cyclic order starting from `from`.
    fn rotated(&self, at: usize, from: usize) -> [usize; 3] {
        let a = &self.adj[at];
        let i = a.iter().position(|&n| n == from).expect("not adjacent");
        [a[i], a[(i + 1) % 3], a[(i + 2) % 3]]
    }

    /// The rooted tree at `at`, seen from its neighbour `from`.
    fn rooted(&self, from: usize, at: usize) -> Tree {
        match self.labels[at] {
            Some(x) => Tree::Leaf(x),
            None => {
                let [_, c1, c2] = self.rotated(at, from);
                Tree::node(self.rooted(at, c1), self.rooted(at, c2))
            }
        }
    }

    /// The rooted tree hanging from a leaf, with the leaf removed.
    fn hanging(&self, leaf: usize) -> Tree {
        self.rooted(leaf, self.adj[leaf][0])
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, ns) in self.adj.iter().enumerate() {
            for &v in ns {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    fn diagram_at_edge(&self, u: usize, v: usize) -> Tree {
        Tree::node(self.rooted(v, u), self.rooted(u, v))
    }
}

/// AS-normal form of a rooted tree: children sorted, sign of the flips.
/// `None` when two sibling subtrees coincide, which forces the tree to vanish.
fn canonical_rooted(t: &Tree) -> Option<(i32, Tree)> {
    match t {
        Tree::Leaf(_) => Some((1, t.clone())),
        Tree::Node(l, r) => {
            let (sl, l) = canonical_rooted(l)?;
            let (sr, r) = canonical_rooted(r)?;
            match l.cmp(&r) {
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Less => Some((sl * sr, Tree::node(l, r))),
                std::cmp::Ordering::Greater => Some((-sl * sr, Tree::node(r, l))),
            }
        }
    }
}

/// Canonical form of a diagram up to AS: the least edge presentation over all
/// edges. `None` if the diagram vanishes rationally.
fn canonical_diagram(t: &Tree) -> Option<(i32, Tree)> {
    let gr = Graph::from_diagram(t);
    let mut best: Option<(Tree, i32)> = None;
    let mut conflict = false;
    for (u, v) in gr.edges() {
        let (sx, x) = canonical_rooted(&gr.rooted(v, u))?;
        let (sy, y) = canonical_rooted(&gr.rooted(u, v))?;
        let key = if x <= y { Tree::node(x, y) } else { Tree::node(y, x) };
        let s = sx * sy;
        match &best {
            Some((b, bs)) if *b == key => {
                if *bs != s {
                    conflict = true;
                }
            }
            Some((b, _)) if *b < key => {}
            _ => {
                best = Some((key, s));
                conflict = false;
            }
        }
    }
    if conflict {
        return None;
    }
    best.map(|(k, s)| (s, k))
}

/// If the diagram is of the form s * (u - u), returns (s, u).
fn symmetric_half(t: &Tree) -> Option<(i32, Tree)> {
    let gr = Graph::from_diagram(t);
    for (u, v) in gr.edges() {
        if gr.labels[u].is_some() || gr.labels[v].is_some() {
            continue;
        }
        let (sx, x) = canonical_rooted(&gr.rooted(v, u))?;
        let (sy, y) = canonical_rooted(&gr.rooted(u, v))?;
        if x == y {
            return Some((sx * sy, x));
        }
    }
    None
}

/// One term of a tree sum. With `half` set it stands for coeff/2 * (u - u).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TreeTerm {
    pub coeff: BigInt,
    pub half: bool,
    pub tree: Tree,
}

impl TreeTerm {
    pub fn new(coeff: impl Into<BigInt>, tree: Tree) -> TreeTerm {
        TreeTerm { coeff: coeff.into(), half: false, tree }
    }

    /// coeff/2 * (u - u); the tree must be `Node(u, u)`.
    pub fn half(coeff: impl Into<BigInt>, tree: Tree) -> Result<TreeTerm> {
        match &tree {
            Tree::Node(l, r) if l == r => Ok(TreeTerm { coeff: coeff.into(), half: true, tree }),
            _ => Err(Error::NotSymmetric),
        }
    }

    /// The rational coefficient in front of the tree.
    pub fn lambda(&self) -> Q {
        let c = Q::from_integer(self.coeff.clone());
        if self.half {
            c / Q::from_integer(BigInt::from(2))
        } else {
            c
        }
    }

    pub fn degree(&self) -> usize {
        self.tree.num_leaves() - 2
    }

    pub fn to_json(&self) -> Value {
        json!({"coeff": self.coeff.to_i64().map(Value::from).unwrap_or_else(|| Value::String(self.coeff.to_string())),
               "half": self.half, "tree": self.tree.to_json()})
    }

    pub fn from_json(v: &Value) -> Result<TreeTerm> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("tree term must be an object".into()))?;
        let coeff: BigInt = match obj.get("coeff") {
            None => BigInt::one(),
            Some(Value::Number(n)) => {
                BigInt::from(n.as_i64().ok_or_else(|| Error::Parse("coefficient must be an integer".into()))?)
            }
            Some(Value::String(s)) => s.parse().map_err(|_| Error::Parse(format!("bad coefficient `{s}`")))?,
            Some(other) => return Err(Error::Parse(format!("bad coefficient `{other}`"))),
        };
        let half = match obj.get("half") {
            None => false,
            Some(Value::Bool(b)) => *b,
            Some(other) => return Err(Error::Parse(format!("bad half flag `{other}`"))),
        };
        let tree = Tree::from_json(obj.get("tree").ok_or_else(|| Error::Parse("missing `tree`".into()))?)?;
        if tree.num_leaves() < 2 {
            return Err(Error::Parse("a diagram needs at least two leaves".into()));
        }
        if half {
            TreeTerm::half(coeff, tree)
        } else {
            Ok(TreeTerm::new(coeff, tree))
        }
    }
}

/// An integral combination of tree diagrams.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TreeSum {
    g: usize,
    terms: Vec<TreeTerm>,
}

impl TreeSum {
    pub fn zero(g: usize) -> TreeSum {
        TreeSum { g, terms: Vec::new() }
    }

    pub fn from_terms(g: usize, terms: Vec<TreeTerm>) -> Result<TreeSum> {
        for t in &terms {
            if t.tree.leaves().iter().any(|x| !x.in_genus(g)) {
                return Err(Error::Parse(format!("leaf label outside genus {g}")));
            }
            if t.tree.num_leaves() < 2 {
                return Err(Error::Parse("a diagram needs at least two leaves".into()));
            }
            if t.half && !matches!(&t.tree, Tree::Node(l, r) if l == r) {
                return Err(Error::NotSymmetric);
            }
        }
        Ok(TreeSum { g, terms })
    }

    pub fn single(g: usize, tree: Tree) -> TreeSum {
        TreeSum::from_terms(g, vec![TreeTerm::new(1, tree)]).expect("valid tree")
    }

    pub fn half(g: usize, tree: Tree) -> Result<TreeSum> {
        TreeSum::from_terms(g, vec![TreeTerm::half(1, tree)?])
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn terms(&self) -> &[TreeTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common degree of all terms, if homogeneous.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.iter().map(|t| t.degree());
        let k = it.next()?;
        it.all(|d| d == k).then_some(k)
    }

    pub fn add(&self, other: &TreeSum) -> TreeSum {
        assert_eq!(self.g, other.g, "genus mismatch");
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        TreeSum { g: self.g, terms }
    }

    pub fn scale(&self, c: &BigInt) -> TreeSum {
        if c.is_zero() {
            return TreeSum::zero(self.g);
        }
        TreeSum {
            g: self.g,
            terms: self.terms.iter().map(|t| TreeTerm { coeff: &t.coeff * c, ..t.clone() }).collect(),
        }
    }

    pub fn relabel(&self, p: &SignedPerm) -> TreeSum {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let (s, tree) = t.tree.relabel(p);
                TreeTerm { coeff: &t.coeff * s, half: t.half, tree }
            })
            .collect();
        TreeSum { g: self.g, terms }
    }

    /// Rational coefficients on canonical diagrams.
    fn rational_terms(&self) -> BTreeMap<Tree, Q> {
        let mut acc: BTreeMap<Tree, Q> = BTreeMap::new();
        for t in &self.terms {
            if let Some((s, key)) = canonical_diagram(&t.tree) {
                let e = acc.entry(key.clone()).or_insert_with(Q::zero);
                *e += t.lambda() * Q::from_integer(BigInt::from(s));
                if e.is_zero() {
                    acc.remove(&key);
                }
            }
        }
        acc
    }

    /// Collects like terms in canonical form. A half-integral coefficient is
    /// only allowed on a diagram of the form u - u, where it becomes a half term.
    pub fn normalize(&self) -> Result<TreeSum> {
        from_rational(self.g, self.rational_terms())
    }
}

fn from_rational(g: usize, acc: BTreeMap<Tree, Q>) -> Result<TreeSum> {
    let mut terms = Vec::new();
    for (tree, q) in acc {
        if q.is_integer() {
            terms.push(TreeTerm::new(q.to_integer(), tree));
            continue;
        }
        let two_q = &q * Q::from_integer(BigInt::from(2));
        let (s, half) = symmetric_half(&tree).ok_or(Error::NonIntegral)?;
        if !two_q.is_integer() {
            return Err(Error::NonIntegral);
        }
        let c = two_q.to_integer() * s;
        debug_assert!(c.is_odd());
        terms.push(TreeTerm { coeff: c, half: true, tree: Tree::node(half.clone(), half) });
    }
    Ok(TreeSum { g, terms })
}

fn eta_tree(g: usize, tree: &Tree, lambda: &Q, out: &mut Derivation) {
    let gr = Graph::from_diagram(tree);
    for v in gr.leaves() {
        let label = gr.labels[v].expect("leaf");
        let (s, x) = omega_dual(label);
        let lie = lie_of_rooted(g, &gr.hanging(v));
        out.add_term(x, &lie.scale(&(lambda * Q::from_integer(BigInt::from(s)))));
    }
}

/// eta(T) = sum over leaves v of omega(v, -) (x) lie(T_v).
pub fn eta(ts: &TreeSum) -> Derivation {
    let k = ts.degree().unwrap_or(0);
    let mut out = Derivation::zero(ts.g, k);
    for t in &ts.terms {
        assert_eq!(t.degree(), k, "eta needs a homogeneous tree sum");
        eta_tree(ts.g, &t.tree, &t.lambda(), &mut out);
    }
    out
}

pub fn eta_term(g: usize, t: &TreeTerm) -> Derivation {
    let mut out = Derivation::zero(g, t.degree());
    eta_tree(g, &t.tree, &t.lambda(), &mut out);
    out
}

/// The trace read off the diagram: for every ordered pair of leaves (v, u)
/// with omega(v, u) != 0, walk from u towards v and read the sibling subtrees.
pub fn diagrammatic_trace(ts: &TreeSum) -> CyclicClass {
    let k = ts.degree().unwrap_or(0);
    let g = ts.g;
    let mut total = TensorElement::zero(g);
    for t in &ts.terms {
        let gr = Graph::from_diagram(&t.tree);
        for v in gr.leaves() {
            let root = gr.adj[v][0];
            for u in gr.leaves() {
                if u == v {
                    continue;
                }
                let w = omega(gr.labels[v].expect("leaf"), gr.labels[u].expect("leaf"));
                if w == 0 {
                    continue;
                }
                let path = path_to(&gr, v, root, u, &mut Vec::new()).expect("tree is connected");
                let mut word = TensorElement::one(g);
                let mut sign = w;
                for i in (1..path.len()).rev() {
                    let (child, node) = (path[i], path[i - 1]);
                    let parent = if i >= 2 { path[i - 2] } else { v };
                    let [_, l, r] = gr.rotated(node, parent);
                    let sibling = if child == l { r } else { l };
                    if child == r {
                        sign = -sign;
                    }
                    word = word.mul_truncated(&rooted_tensor(g, &gr.rooted(node, sibling)), usize::MAX);
                }
                total = &total + &word.scale(&(t.lambda() * Q::from_integer(BigInt::from(sign))));
            }
        }
    }
    project_in_degree(&total, k)
}

/// Vertices from `at` (entered from `from`) down to `target`, inclusive.
fn path_to(gr: &Graph, from: usize, at: usize, target: usize, acc: &mut Vec<usize>) -> Option<Vec<usize>> {
    acc.push(at);
    if at == target {
        return Some(acc.clone());
    }
    for &n in &gr.adj[at] {
        if n != from {
            if let Some(p) = path_to(gr, at, n, target, acc) {
                return Some(p);
            }
        }
    }
    acc.pop();
    None
}

/// Doubling of external edges with rational coefficients on canonical
/// diagrams, before any half-term bookkeeping.
pub(crate) fn double_rational(term: &TreeTerm) -> BTreeMap<Tree, Q> {
    let gr = Graph::from_diagram(&term.tree);
    let lambda = term.lambda();
    let mut acc: BTreeMap<Tree, Q> = BTreeMap::new();
    for leaf in gr.leaves() {
        let v = gr.adj[leaf][0];
        let [_, a, b] = gr.rotated(v, leaf);
        let mut ng = gr.clone();
        let w = ng.labels.len();
        let leaf2 = w + 1;
        ng.labels.push(None);
        ng.adj.push(vec![v, b, leaf2]);
        ng.labels.push(gr.labels[leaf]);
        ng.adj.push(vec![w]);
        ng.adj[v] = vec![leaf, a, w];
        for n in ng.adj[b].iter_mut() {
            if *n == v {
                *n = w;
            }
        }
        let diagram = ng.diagram_at_edge(v, w);
        if let Some((s, key)) = canonical_diagram(&diagram) {
            let e = acc.entry(key).or_insert_with(Q::zero);
            *e += &lambda * Q::from_integer(BigInt::from(s));
        }
    }
    acc.retain(|_, q| !q.is_zero());
    acc
}

/// Doubling of external edges: at a vertex with cyclic order (x, A, B) the
/// leaf x is doubled next to B, so the boundary reads (x, A, B, x).
pub fn tree_double(g: usize, term: &TreeTerm) -> Result<TreeSum> {
    if term.degree() < 1 {
        return Err(Error::WrongDegree { expected: 1, got: term.degree() });
    }
    from_rational(g, double_rational(term))
}

/// eta on rationally weighted diagrams of degree k.
pub(crate) fn eta_rational(g: usize, k: usize, acc: &BTreeMap<Tree, Q>) -> Derivation {
    let mut out = Derivation::zero(g, k);
    for (tree, q) in acc {
        eta_tree(g, tree, q, &mut out);
    }
    out
}

/// For every leaf of a diagram, its label and the rooted tree hanging from it.
pub fn leaf_branches(t: &Tree) -> Vec<(Letter, Tree)> {
    let gr = Graph::from_diagram(t);
    gr.leaves().into_iter().map(|v| (gr.labels[v].expect("leaf"), gr.hanging(v))).collect()
}

/// The two cherries {h, i} and {j, k} of a four-leaf diagram.
pub fn cherries(t: &Tree) -> Option<([Letter; 2], [Letter; 2])> {
    if t.num_leaves() != 4 {
        return None;
    }
    let gr = Graph::from_diagram(t);
    let (u, v) = gr.edges().into_iter().find(|&(u, v)| gr.labels[u].is_none() && gr.labels[v].is_none())?;
    let pair = |x: &Tree| match x {
        Tree::Node(l, r) => match (&**l, &**r) {
            (Tree::Leaf(p), Tree::Leaf(q)) => Some([*p, *q]),
            _ => None,
        },
        _ => None,
    };
    Some((pair(&gr.rooted(v, u))?, pair(&gr.rooted(u, v))?))
}

/// D applied termwise.
pub fn tree_double_sum(ts: &TreeSum) -> Result<TreeSum> {
    let mut out = TreeSum::zero(ts.g);
    for t in &ts.terms {
        out = out.add(&tree_double(ts.g, t)?);
    }
    out.normalize()
}

fn delta_terms(t: &Tree) -> Vec<(i32, Tree)> {
    let Tree::Node(l, r) = t else { return Vec::new() };
    let mut out = Vec::new();
    match &**l {
        Tree::Leaf(x) => out.push((1, Tree::node(Tree::leaf(*x), Tree::node(Tree::leaf(*x), (**r).clone())))),
        _ => out.extend(delta_terms(l).into_iter().map(|(s, l2)| (s, Tree::node(l2, (**r).clone())))),
    }
    match &**r {
        Tree::Leaf(x) => out.push((-1, Tree::node(Tree::node((**l).clone(), Tree::leaf(*x)), Tree::leaf(*x)))),
        _ => out.extend(delta_terms(r).into_iter().map(|(s, r2)| (s, Tree::node((**l).clone(), r2)))),
    }
    out
}

/// delta on a bracketed word: every leaf is doubled, [x, R] -> [x, [x, R]]
/// and [L, x] -> -[[L, x], x].
pub fn delta(g: usize, w: &Tree) -> Result<LieElement> {
    if w.num_leaves() < 2 {
        return Err(Error::WrongDegree { expected: 2, got: w.num_leaves() });
    }
    let mut t = TensorElement::zero(g);
    for (s, tree) in delta_terms(w) {
        t = &t + &rooted_tensor(g, &tree).scale(&Q::from_integer(BigInt::from(s)));
    }
    LieElement::from_tensor(&t)
}

/// Sum over omega-connections of a leaf of S with a leaf of T; eta carries it to
/// the bracket of derivations.
pub fn tree_bracket(s: &TreeSum, t: &TreeSum) -> Result<TreeSum> {
    if s.g != t.g {
        return Err(Error::GenusMismatch(s.g, t.g));
    }
    let mut acc: BTreeMap<Tree, Q> = BTreeMap::new();
    for ts in &s.terms {
        let gs = Graph::from_diagram(&ts.tree);
        for tt in &t.terms {
            let gt = Graph::from_diagram(&tt.tree);
            let lambda = ts.lambda() * tt.lambda();
            for u in gs.leaves() {
                for v in gt.leaves() {
                    let w = omega(gs.labels[u].expect("leaf"), gt.labels[v].expect("leaf"));
                    if w == 0 {
                        continue;
                    }
                    let diagram = Tree::node(gs.hanging(u), gt.hanging(v));
                    if let Some((sign, key)) = canonical_diagram(&diagram) {
                        let e = acc.entry(key).or_insert_with(Q::zero);
                        *e += &lambda * Q::from_integer(BigInt::from(w * sign));
                    }
                }
            }
        }
    }
    acc.retain(|_, q| !q.is_zero());
    from_rational(s.g, acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(i: usize) -> Letter {
        Letter::a(i)
    }

    #[test]
    fn rooted_lie() {
        let t = Tree::node(Tree::leaf(a(1)), Tree::node(Tree::node(Tree::leaf(a(2)), Tree::leaf(a(3))), Tree::leaf(a(4))));
        let l = |x| LieElement::letter(4, x);
        let expect = l(a(1)).bracket(&l(a(2)).bracket(&l(a(3))).bracket(&l(a(4))));
        assert_eq!(lie_of_rooted(4, &t), expect);
    }

    #[test]
    fn canonical_identifies_edge_presentations() {
        // the same tripod presented at each of its three edges
        let t1 = tripod(a(1), a(2), a(3));
        let t2 = tripod(a(2), a(3), a(1));
        let t3 = tripod(a(3), a(1), a(2));
        let c = canonical_diagram(&t1).unwrap();
        assert_eq!(canonical_diagram(&t2).unwrap(), c);
        assert_eq!(canonical_diagram(&t3).unwrap(), c);
        let flipped = tripod(a(2), a(1), a(3));
        let (s, k) = canonical_diagram(&flipped).unwrap();
        assert_eq!((s, k), (-c.0, c.1));
    }

    #[test]
    fn half_requires_symmetry() {
        assert!(TreeTerm::half(1, h_tree(a(1), a(2), a(2), a(1))).is_err());
        assert!(TreeTerm::half(1, h_tree(a(1), a(2), a(1), a(2))).is_ok());
    }

    #[test]
    fn delta_examples() {
        let (u, v, w) = (a(1), a(2), a(3));
        let l = |x| LieElement::letter(3, x);
        let uv = Tree::node(Tree::leaf(u), Tree::leaf(v));
        let expect = &l(u).bracket(&l(u).bracket(&l(v))) - &l(u).bracket(&l(v)).bracket(&l(v));
        assert_eq!(delta(3, &uv).unwrap(), expect);
        let uvw = Tree::node(Tree::leaf(u), Tree::node(Tree::leaf(v), Tree::leaf(w)));
        let vw = l(v).bracket(&l(w));
        let expect = &(&l(u).bracket(&l(u).bracket(&vw)) + &l(u).bracket(&l(v).bracket(&vw))) - &l(u).bracket(&vw.bracket(&l(w)));
        assert_eq!(delta(3, &uvw).unwrap(), expect);
    }
}
