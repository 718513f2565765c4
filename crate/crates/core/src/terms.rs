//! Bracketing shapes, multilinear monomials and exact polynomials over them.
//!
//! A monomial is always stored as a pair `(shape, σ)`; leaf `k` of the shape
//! carries the variable `x_{kσ}`. The word form `(x_2 x_1) x_3` is only a
//! display convention.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;

use rand::Rng;

use crate::combinatorics::Permutation;
use crate::error::{input_err, Result};
use crate::scalar::Scalar;

/// Node label of a bracketing tree.
pub trait Label: Clone + Ord + Eq + Hash + fmt::Debug + Send + Sync + 'static {
    /// Infix symbol used when printing.
    fn symbol(&self) -> &'static str;
}

impl Label for () {
    fn symbol(&self) -> &'static str {
        "*"
    }
}

/// The two dialgebra products.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum DiOp {
    /// `⊢`, printed `|-`.
    Right,
    /// `⊣`, printed `-|`.
    Left,
}

impl Label for DiOp {
    fn symbol(&self) -> &'static str {
        match self {
            DiOp::Right => "|-",
            DiOp::Left => "-|",
        }
    }
}

/// Full binary tree with labelled internal nodes.
///
/// The derived order compares preorder encodings (leaf before node, then
/// label, left subtree, right subtree), which is a total order on trees of
/// equal arity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Tree<L> {
    Leaf,
    Node(L, Box<Tree<L>>, Box<Tree<L>>),
}

/// Unlabelled bracketing.
pub type Shape = Tree<()>;
/// Bracketing with `⊢`/`⊣` on every internal node.
pub type DiShape = Tree<DiOp>;

impl<L: Label> Tree<L> {
    pub fn node(label: L, left: Tree<L>, right: Tree<L>) -> Self {
        Tree::Node(label, Box::new(left), Box::new(right))
    }

    pub fn leaves(&self) -> usize {
        match self {
            Tree::Leaf => 1,
            Tree::Node(_, l, r) => l.leaves() + r.leaves(),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Leaf)
    }

    /// Same bracketing with labels replaced.
    pub fn map_labels<M: Label>(&self, f: &impl Fn(&L) -> M) -> Tree<M> {
        match self {
            Tree::Leaf => Tree::Leaf,
            Tree::Node(op, l, r) => Tree::node(f(op), l.map_labels(f), r.map_labels(f)),
        }
    }

    pub fn erase(&self) -> Shape {
        self.map_labels(&|_| ())
    }

    /// Replaces the leaves, left to right, by `subtrees`.
    pub fn graft(&self, subtrees: &[Tree<L>]) -> Tree<L> {
        fn go<L: Label>(t: &Tree<L>, subs: &[Tree<L>], next: &mut usize) -> Tree<L> {
            match t {
                Tree::Leaf => {
                    *next += 1;
                    subs[*next - 1].clone()
                }
                Tree::Node(op, l, r) => {
                    let l = go(l, subs, next);
                    let r = go(r, subs, next);
                    Tree::node(op.clone(), l, r)
                }
            }
        }
        assert_eq!(subtrees.len(), self.leaves(), "graft arity mismatch");
        go(self, subtrees, &mut 0)
    }

    /// Internal labels in preorder.
    pub fn labels(&self) -> Vec<L> {
        let mut out = Vec::new();
        fn go<L: Label>(t: &Tree<L>, out: &mut Vec<L>) {
            if let Tree::Node(op, l, r) = t {
                out.push(op.clone());
                go(l, out);
                go(r, out);
            }
        }
        go(self, &mut out);
        out
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, vars: &[usize], next: &mut usize, top: bool) -> fmt::Result {
        match self {
            Tree::Leaf => {
                let v = vars[*next];
                *next += 1;
                write!(f, "x{}", v + 1)
            }
            Tree::Node(op, l, r) => {
                if !top {
                    write!(f, "(")?;
                }
                l.fmt_with(f, vars, next, false)?;
                write!(f, "{}", op.symbol())?;
                r.fmt_with(f, vars, next, false)?;
                if !top {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl Shape {
    /// All bracketings with `n` leaves, sorted.
    pub fn all(n: usize) -> Vec<Shape> {
        let mut out = Vec::new();
        if n == 1 {
            out.push(Tree::Leaf);
        } else {
            for k in 1..n {
                let lefts = Shape::all(k);
                let rights = Shape::all(n - k);
                for l in &lefts {
                    for r in &rights {
                        out.push(Tree::node((), l.clone(), r.clone()));
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// `((x1 x2) x3) …` with `n` leaves.
    pub fn left_comb(n: usize) -> Shape {
        let mut t = Tree::Leaf;
        for _ in 1..n {
            t = Tree::node((), t, Tree::Leaf);
        }
        t
    }

    /// `x1 (x2 (x3 …))` with `n` leaves.
    pub fn right_comb(n: usize) -> Shape {
        let mut t = Tree::Leaf;
        for _ in 1..n {
            t = Tree::node((), Tree::Leaf, t);
        }
        t
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Shape {
        if n == 1 {
            return Tree::Leaf;
        }
        let k = rng.random_range(1..n);
        Tree::node((), Shape::random(k, rng), Shape::random(n - k, rng))
    }

    /// Every labelling of the internal nodes by `⊢`/`⊣`.
    pub fn all_labelings(&self) -> Vec<DiShape> {
        match self {
            Tree::Leaf => vec![Tree::Leaf],
            Tree::Node(_, l, r) => {
                let ls = l.all_labelings();
                let rs = r.all_labelings();
                let mut out = Vec::new();
                for op in [DiOp::Right, DiOp::Left] {
                    for a in &ls {
                        for b in &rs {
                            out.push(Tree::node(op, a.clone(), b.clone()));
                        }
                    }
                }
                out
            }
        }
    }

    pub fn random_labeling<R: Rng + ?Sized>(&self, rng: &mut R) -> DiShape {
        match self {
            Tree::Leaf => Tree::Leaf,
            Tree::Node(_, l, r) => {
                let op = if rng.random_bool(0.5) { DiOp::Right } else { DiOp::Left };
                Tree::node(op, l.random_labeling(rng), r.random_labeling(rng))
            }
        }
    }
}

/// Anything polynomials can be built from: fixed arity, right `S_n` action,
/// total order.
pub trait Term: Clone + Ord + Eq + Hash + fmt::Debug + Send + Sync + 'static {
    fn arity(&self) -> usize;
    /// Right action of `σ ∈ S_n`.
    fn act(&self, sigma: &Permutation) -> Self;
}

/// `(shape, σ)`: the word in which leaf `k` carries `x_{kσ}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial<L> {
    pub shape: Tree<L>,
    pub perm: Permutation,
}

impl<L: Label> Monomial<L> {
    pub fn new(shape: Tree<L>, perm: Permutation) -> Result<Self> {
        if shape.leaves() != perm.degree() {
            return Err(input_err!(
                "shape with {} leaves paired with a permutation of degree {}",
                shape.leaves(),
                perm.degree()
            ));
        }
        Ok(Self { shape, perm })
    }

    /// The monomial `(shape, id)`.
    pub fn plain(shape: Tree<L>) -> Self {
        let n = shape.leaves();
        Self { shape, perm: Permutation::identity(n) }
    }

    /// Builds the monomial whose leaves carry the given 0-based variables.
    pub fn from_word(shape: Tree<L>, vars: Vec<usize>) -> Result<Self> {
        let perm = Permutation::new(vars)?;
        Self::new(shape, perm)
    }

    /// Variables on the leaves, left to right (0-based).
    pub fn word(&self) -> &[usize] {
        self.perm.images()
    }
}

impl<L: Label> Term for Monomial<L> {
    fn arity(&self) -> usize {
        self.perm.degree()
    }
    fn act(&self, sigma: &Permutation) -> Self {
        Self { shape: self.shape.clone(), perm: self.perm.then(sigma).expect("degree checked by caller") }
    }
}

impl<L: Label> fmt::Display for Monomial<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.shape.fmt_with(f, self.perm.images(), &mut 0, true)
    }
}

/// `(shape, σ) ⊗ e_c`, an element of the basis of `Alg_S(n) ⊗ E(n)`.
/// `center` is a 0-based variable index.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TensorMonomial {
    pub word: Monomial<()>,
    pub center: usize,
}

impl TensorMonomial {
    pub fn new(word: Monomial<()>, center: usize) -> Result<Self> {
        if center >= word.arity() {
            return Err(input_err!("center {} out of range for arity {}", center + 1, word.arity()));
        }
        Ok(Self { word, center })
    }
}

impl Term for TensorMonomial {
    fn arity(&self) -> usize {
        self.word.arity()
    }
    fn act(&self, sigma: &Permutation) -> Self {
        Self { word: self.word.act(sigma), center: sigma.apply(self.center) }
    }
}

impl fmt::Display for TensorMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] e{}", self.word, self.center + 1)
    }
}

/// Finite linear combination of monomials of a common arity, with no zero
/// coefficients. The map is ordered, so equal elements have identical
/// representations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly<M, K> {
    arity: usize,
    terms: BTreeMap<M, K>,
}

/// Element of `Alg_S(n)`.
pub type MultilinearPoly<K> = Poly<Monomial<()>, K>;
/// Element of `Dialg_S(n)`.
pub type DiPoly<K> = Poly<Monomial<DiOp>, K>;
/// Element of `Alg_S(n) ⊗ E(n)`.
pub type TensorPoly<K> = Poly<TensorMonomial, K>;

impl<M: Term, K: Scalar> Poly<M, K> {
    pub fn zero(arity: usize) -> Self {
        Self { arity, terms: BTreeMap::new() }
    }

    pub fn monomial(m: M) -> Self {
        Self::term(K::one(), m)
    }

    pub fn term(c: K, m: M) -> Self {
        let mut p = Self::zero(m.arity());
        p.add_term(c, m);
        p
    }

    /// Canonical form of a list of terms: like monomials merged, zeros dropped.
    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (K, M)>) -> Result<Self> {
        let mut p = Self::zero(arity);
        for (c, m) in terms {
            if m.arity() != arity {
                return Err(input_err!("monomial {m:?} has arity {} in a polynomial of arity {arity}", m.arity()));
            }
            p.add_term(c, m);
        }
        Ok(p)
    }

    /// Wraps a coefficient map, dropping zero entries.
    pub fn from_map(arity: usize, terms: BTreeMap<M, K>) -> Result<Self> {
        Self::from_terms(arity, terms.into_iter().map(|(m, c)| (c, m)))
    }

    pub fn into_map(self) -> BTreeMap<M, K> {
        self.terms
    }

    pub fn arity(&self) -> usize {
        self.arity
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

    pub fn iter(&self) -> impl Iterator<Item = (&M, &K)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &M> {
        self.terms.keys()
    }

    pub fn coeff(&self, m: &M) -> K {
        self.terms.get(m).cloned().unwrap_or_else(K::zero)
    }

    pub fn terms(&self) -> &BTreeMap<M, K> {
        &self.terms
    }

    /// Leading (smallest) monomial.
    pub fn leading(&self) -> Option<(&M, &K)> {
        self.terms.iter().next()
    }

    /// `self += c·m`. Panics on an arity mismatch.
    pub fn add_term(&mut self, c: K, m: M) {
        assert_eq!(m.arity(), self.arity, "arity mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// `self += c·other`.
    pub fn add_scaled(&mut self, c: &K, other: &Self) -> Result<()> {
        if other.arity != self.arity {
            return Err(input_err!("adding polynomials of arities {} and {}", self.arity, other.arity));
        }
        for (m, v) in &other.terms {
            self.add_term(c.clone() * v.clone(), m.clone());
        }
        Ok(())
    }

    pub fn scale(&self, c: &K) -> Self {
        let mut p = Self::zero(self.arity);
        for (m, v) in &self.terms {
            p.add_term(c.clone() * v.clone(), m.clone());
        }
        p
    }

    pub fn neg(&self) -> Self {
        self.scale(&-K::one())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let mut p = self.clone();
        p.add_scaled(&K::one(), other)?;
        Ok(p)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        let mut p = self.clone();
        p.add_scaled(&-K::one(), other)?;
        Ok(p)
    }

    /// Right action of `σ ∈ S_n` on every monomial.
    pub fn act(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.degree() != self.arity {
            return Err(input_err!(
                "permutation of degree {} acting on arity {}",
                sigma.degree(),
                self.arity
            ));
        }
        let mut p = Self::zero(self.arity);
        for (m, v) in &self.terms {
            p.add_term(v.clone(), m.act(sigma));
        }
        Ok(p)
    }

    /// Applies a linear map defined on monomials.
    pub fn map_linear<N: Term>(&self, arity: usize, f: impl Fn(&M) -> Poly<N, K>) -> Poly<N, K> {
        let mut p = Poly::zero(arity);
        for (m, v) in &self.terms {
            p.add_scaled(v, &f(m)).expect("map_linear arity");
        }
        p
    }
}

impl<M: Term + fmt::Display, K: Scalar> fmt::Display for Poly<M, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let raw = c.to_string();
            let (neg, mag) = match raw.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, raw),
            };
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mag != "1" {
                write!(f, "{mag} ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Every monomial `(shape, σ)` of arity `n`, in canonical order.
pub fn all_monomials(n: usize) -> Vec<Monomial<()>> {
    let perms = Permutation::all(n);
    let mut out = Vec::new();
    for s in Shape::all(n) {
        for p in &perms {
            out.push(Monomial { shape: s.clone(), perm: p.clone() });
        }
    }
    out
}

/// Dimension of `Alg_S(n)`: `Catalan(n-1) · n!`.
pub fn alg_dimension(n: usize) -> usize {
    let mut catalan: usize = 1;
    for k in 0..n.saturating_sub(1) {
        catalan = catalan * 2 * (2 * k + 1) / (k + 2);
    }
    catalan * (1..=n).product::<usize>()
}
