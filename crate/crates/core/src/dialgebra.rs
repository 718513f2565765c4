//! Finite-dimensional algebras and dialgebras given by structure constants,
//! and evaluation of (di)algebra identities on them.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{input_err, Error, Result};
use crate::operads::IdentitySet;
use crate::scalar::Scalar;
use crate::terms::{DiOp, DiPoly, Label, Monomial, MultilinearPoly, Poly, Tree};
use crate::translate::derive_variety;

/// Largest number of argument tuples an identity check will enumerate.
pub const MAX_TUPLES: usize = 1 << 20;

/// `d × d` table of structure constants: `table[i][j]` is the product of the
/// basis vectors `i` and `j`.
pub type Table<K> = Vec<Vec<Vec<K>>>;

pub fn vzero<K: Scalar>(d: usize) -> Vec<K> {
    vec![K::zero(); d]
}

pub fn unit<K: Scalar>(d: usize, i: usize) -> Vec<K> {
    let mut v = vzero(d);
    v[i] = K::one();
    v
}

pub fn vadd<K: Scalar>(a: &[K], b: &[K]) -> Vec<K> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn vsub<K: Scalar>(a: &[K], b: &[K]) -> Vec<K> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn vscale<K: Scalar>(c: &K, a: &[K]) -> Vec<K> {
    a.iter().map(|x| c.clone() * x.clone()).collect()
}

pub fn is_zero_vec<K: Scalar>(a: &[K]) -> bool {
    a.iter().all(|x| x.is_zero())
}

fn bilinear<K: Scalar>(table: &Table<K>, a: &[K], b: &[K]) -> Vec<K> {
    let d = a.len();
    let mut out: Vec<K> = vzero(d);
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let c = x.clone() * y.clone();
            for (o, t) in out.iter_mut().zip(&table[i][j]) {
                if !t.is_zero() {
                    *o = o.clone() + c.clone() * t.clone();
                }
            }
        }
    }
    out
}

fn check_table<K: Scalar>(dim: usize, table: &Table<K>, what: &str) -> Result<()> {
    if table.len() != dim || table.iter().any(|r| r.len() != dim || r.iter().any(|v| v.len() != dim)) {
        return Err(input_err!("{what} table must be {dim}×{dim} with vectors of length {dim}"));
    }
    Ok(())
}

fn zero_table<K: Scalar>(d: usize) -> Table<K> {
    vec![vec![vzero(d); d]; d]
}

/// Linear space with two bilinear products.
pub trait Dialgebra<K: Scalar> {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, c: &K, a: &Self::Elem) -> Self::Elem;
    /// `a ⊢ b`.
    fn right(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `a ⊣ b`.
    fn left(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn apply(&self, op: DiOp, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        match op {
            DiOp::Right => self.right(a, b),
            DiOp::Left => self.left(a, b),
        }
    }
}

/// Linear space with one bilinear product.
pub trait Algebra<K: Scalar> {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, c: &K, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
}

fn eval_tree<L: Label, E: Clone>(t: &Tree<L>, args: &mut impl Iterator<Item = E>, op: &impl Fn(&L, &E, &E) -> E) -> E {
    match t {
        Tree::Leaf => args.next().expect("one argument per leaf"),
        Tree::Node(l, a, b) => {
            let x = eval_tree(a, args, op);
            let y = eval_tree(b, args, op);
            op(l, &x, &y)
        }
    }
}

/// Value of the monomial `(shape, σ)` at `args`: leaf `k` receives `args[kσ]`.
pub fn eval_dimonomial<K: Scalar, D: Dialgebra<K>>(d: &D, m: &Monomial<DiOp>, args: &[D::Elem]) -> D::Elem {
    let mut it = m.word().iter().map(|&i| args[i].clone());
    eval_tree(&m.shape, &mut it, &|op, a, b| d.apply(*op, a, b))
}

pub fn eval_dipoly<K: Scalar, D: Dialgebra<K>>(d: &D, p: &DiPoly<K>, args: &[D::Elem]) -> D::Elem {
    let mut acc = d.zero();
    for (m, c) in p.iter() {
        acc = d.add(&acc, &d.scale(c, &eval_dimonomial(d, m, args)));
    }
    acc
}

pub fn eval_monomial<K: Scalar, A: Algebra<K>>(a: &A, m: &Monomial<()>, args: &[A::Elem]) -> A::Elem {
    let mut it = m.word().iter().map(|&i| args[i].clone());
    eval_tree(&m.shape, &mut it, &|_, x, y| a.mul(x, y))
}

pub fn eval_poly<K: Scalar, A: Algebra<K>>(a: &A, p: &MultilinearPoly<K>, args: &[A::Elem]) -> A::Elem {
    let mut acc = a.zero();
    for (m, c) in p.iter() {
        acc = a.add(&acc, &a.scale(c, &eval_monomial(a, m, args)));
    }
    acc
}

/// A failing evaluation.
#[derive(Clone, PartialEq, Debug)]
pub struct Witness<E> {
    /// Which identity failed (position in the checked list).
    pub identity: usize,
    /// Indices of the generators substituted for `x1, …, xn`.
    pub tuple: Vec<usize>,
    /// The nonzero value.
    pub defect: E,
}

fn tuples(base: usize, n: usize) -> Result<impl Iterator<Item = Vec<usize>>> {
    let total = (base as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > MAX_TUPLES as u128 {
        return Err(Error::Resource(format!("{base}^{n} argument tuples exceed the bound {MAX_TUPLES}")));
    }
    let total = total as usize;
    Ok((0..total).map(move |mut k| {
        let mut t = vec![0; n];
        for slot in t.iter_mut().rev() {
            *slot = k % base;
            k /= base;
        }
        t
    }))
}

/// Evaluates `p` on every tuple of generators, in lexicographic order, and
/// returns the first nonzero value.
pub fn check_dipoly_on<K: Scalar, D: Dialgebra<K>>(
    d: &D,
    p: &DiPoly<K>,
    gens: &[D::Elem],
) -> Result<Option<Witness<D::Elem>>> {
    if p.is_zero() {
        return Ok(None);
    }
    for t in tuples(gens.len(), p.arity())? {
        let args: Vec<D::Elem> = t.iter().map(|&i| gens[i].clone()).collect();
        let v = eval_dipoly(d, p, &args);
        if !d.is_zero(&v) {
            return Ok(Some(Witness { identity: 0, tuple: t, defect: v }));
        }
    }
    Ok(None)
}

/// [`check_dipoly_on`] for a list of identities; the witness records the index.
pub fn check_all_on<K: Scalar, D: Dialgebra<K>>(
    d: &D,
    ps: &[DiPoly<K>],
    gens: &[D::Elem],
) -> Result<Option<Witness<D::Elem>>> {
    for (i, p) in ps.iter().enumerate() {
        if let Some(mut w) = check_dipoly_on(d, p, gens)? {
            w.identity = i;
            return Ok(Some(w));
        }
    }
    Ok(None)
}

pub fn check_poly_on<K: Scalar, A: Algebra<K>>(
    a: &A,
    p: &MultilinearPoly<K>,
    gens: &[A::Elem],
) -> Result<Option<Witness<A::Elem>>> {
    if p.is_zero() {
        return Ok(None);
    }
    for t in tuples(gens.len(), p.arity())? {
        let args: Vec<A::Elem> = t.iter().map(|&i| gens[i].clone()).collect();
        let v = eval_poly(a, p, &args);
        if !a.is_zero(&v) {
            return Ok(Some(Witness { identity: 0, tuple: t, defect: v }));
        }
    }
    Ok(None)
}

/// Algebra with one product table.
#[derive(Clone, PartialEq, Debug)]
pub struct FDAlgebra<K> {
    pub dim: usize,
    pub table: Table<K>,
}

impl<K: Scalar> FDAlgebra<K> {
    pub fn new(dim: usize, table: Table<K>) -> Result<Self> {
        if dim == 0 {
            return Err(input_err!("dimension must be at least 1"));
        }
        check_table(dim, &table, "product")?;
        Ok(Self { dim, table })
    }

    /// Builds the table from `(i, j, vector)` entries, everything else zero.
    pub fn from_entries(dim: usize, entries: &[(usize, usize, Vec<K>)]) -> Result<Self> {
        let mut table = zero_table(dim);
        for (i, j, v) in entries {
            if *i >= dim || *j >= dim || v.len() != dim {
                return Err(input_err!("entry ({}, {}) out of range for dimension {dim}", i + 1, j + 1));
            }
            table[*i][*j] = v.clone();
        }
        Self::new(dim, table)
    }

    pub fn basis(&self) -> Vec<Vec<K>> {
        (0..self.dim).map(|i| unit(self.dim, i)).collect()
    }

    pub fn product(&self, a: &[K], b: &[K]) -> Vec<K> {
        bilinear(&self.table, a, b)
    }

    /// Evaluates a single-operation identity on all basis tuples.
    pub fn eval_identity(&self, p: &MultilinearPoly<K>) -> Result<Option<Witness<Vec<K>>>> {
        check_poly_on(self, p, &self.basis())
    }

    /// First basis triple violating `x(yz) = (xy)z + y(xz)`.
    pub fn left_leibniz_witness(&self) -> Option<Witness<Vec<K>>> {
        let b = self.basis();
        for x in 0..self.dim {
            for y in 0..self.dim {
                for z in 0..self.dim {
                    let (ex, ey, ez) = (&b[x], &b[y], &b[z]);
                    let lhs = self.product(ex, &self.product(ey, ez));
                    let rhs = vadd(&self.product(&self.product(ex, ey), ez), &self.product(ey, &self.product(ex, ez)));
                    let defect = vsub(&lhs, &rhs);
                    if !is_zero_vec(&defect) {
                        return Some(Witness { identity: 0, tuple: vec![x, y, z], defect });
                    }
                }
            }
        }
        None
    }
}

impl<K: Scalar> Algebra<K> for FDAlgebra<K> {
    type Elem = Vec<K>;
    fn zero(&self) -> Vec<K> {
        vzero(self.dim)
    }
    fn is_zero(&self, a: &Vec<K>) -> bool {
        is_zero_vec(a)
    }
    fn add(&self, a: &Vec<K>, b: &Vec<K>) -> Vec<K> {
        vadd(a, b)
    }
    fn scale(&self, c: &K, a: &Vec<K>) -> Vec<K> {
        vscale(c, a)
    }
    fn mul(&self, a: &Vec<K>, b: &Vec<K>) -> Vec<K> {
        self.product(a, b)
    }
}

/// Dialgebra with tables for `⊣` (`left`) and `⊢` (`right`).
#[derive(Clone, PartialEq, Debug)]
pub struct FDDialgebra<K> {
    pub dim: usize,
    pub left: Table<K>,
    pub right: Table<K>,
    pub labels: Vec<String>,
}

impl<K: Scalar> FDDialgebra<K> {
    pub fn new(dim: usize, left: Table<K>, right: Table<K>) -> Result<Self> {
        if dim == 0 {
            return Err(input_err!("dimension must be at least 1"));
        }
        check_table(dim, &left, "-|")?;
        check_table(dim, &right, "|-")?;
        Ok(Self { dim, left, right, labels: (1..=dim).map(|i| format!("e{i}")).collect() })
    }

    /// `a⊣b = a⊢b = ab`.
    pub fn diagonal(a: &FDAlgebra<K>) -> Self {
        Self::new(a.dim, a.table.clone(), a.table.clone()).expect("tables have the algebra's shape")
    }

    pub fn basis(&self) -> Vec<Vec<K>> {
        (0..self.dim).map(|i| unit(self.dim, i)).collect()
    }

    pub fn dashv(&self, a: &[K], b: &[K]) -> Vec<K> {
        bilinear(&self.left, a, b)
    }

    pub fn vdash(&self, a: &[K], b: &[K]) -> Vec<K> {
        bilinear(&self.right, a, b)
    }

    /// `⟨a, b⟩ = a⊢b − a⊣b`.
    pub fn bracket_defect(&self, a: &[K], b: &[K]) -> Vec<K> {
        vsub(&self.vdash(a, b), &self.dashv(a, b))
    }

    /// The algebra `(A, ⊢)`.
    pub fn right_algebra(&self) -> FDAlgebra<K> {
        FDAlgebra { dim: self.dim, table: self.right.clone() }
    }

    /// Evaluates `p` on every basis tuple.
    pub fn eval_identity(&self, p: &DiPoly<K>) -> Result<Option<Witness<Vec<K>>>> {
        check_dipoly_on(self, p, &self.basis())
    }

    /// Both 0-dialgebra identities on all basis triples.
    pub fn is_zero_dialgebra(&self) -> Option<Witness<Vec<K>>> {
        check_all_on(self, &crate::translate::zero_axioms(), &self.basis()).expect("d^3 tuples within bound")
    }

    /// 0-axioms and every identity derived from `Σ`. The witness index refers
    /// to the list returned by `derive_variety(Σ).identities`.
    pub fn is_var_dialgebra(&self, sigma: &IdentitySet<K>) -> Result<Option<Witness<Vec<K>>>> {
        let dv = derive_variety(sigma)?;
        check_all_on(self, &dv.identities, &self.basis())
    }
}

impl<K: Scalar> Dialgebra<K> for FDDialgebra<K> {
    type Elem = Vec<K>;
    fn zero(&self) -> Vec<K> {
        vzero(self.dim)
    }
    fn is_zero(&self, a: &Vec<K>) -> bool {
        is_zero_vec(a)
    }
    fn add(&self, a: &Vec<K>, b: &Vec<K>) -> Vec<K> {
        vadd(a, b)
    }
    fn scale(&self, c: &K, a: &Vec<K>) -> Vec<K> {
        vscale(c, a)
    }
    fn right(&self, a: &Vec<K>, b: &Vec<K>) -> Vec<K> {
        self.vdash(a, b)
    }
    fn left(&self, a: &Vec<K>, b: &Vec<K>) -> Vec<K> {
        self.dashv(a, b)
    }
}

/// The Lie dialgebra of a left Leibniz algebra: `a⊢b = [ab]`, `a⊣b = −[ba]`.
pub fn leibniz_to_dialgebra<K: Scalar>(l: &FDAlgebra<K>) -> Result<FDDialgebra<K>> {
    if let Some(w) = l.left_leibniz_witness() {
        let t: Vec<String> = w.tuple.iter().map(|i| format!("e{}", i + 1)).collect();
        return Err(input_err!("left Leibniz identity fails at ({}), defect {:?}", t.join(", "), w.defect));
    }
    let d = l.dim;
    let mut left = zero_table(d);
    for i in 0..d {
        for j in 0..d {
            left[i][j] = vscale(&-K::one(), &l.table[j][i]);
        }
    }
    FDDialgebra::new(d, left, l.table.clone())
}

/// Small examples used by tests and the command line tool.
pub mod examples {
    use super::*;

    fn v<K: Scalar>(xs: &[i64]) -> Vec<K> {
        xs.iter().map(|&x| K::from_int(x)).collect()
    }

    /// `[e1, e1] = e2`, all other brackets zero.
    pub fn leibniz2<K: Scalar>() -> FDAlgebra<K> {
        FDAlgebra::from_entries(2, &[(0, 0, v(&[0, 1]))]).expect("valid table")
    }

    /// `[e2, e1] = e1`, all other brackets zero. Left Leibniz, not right Leibniz.
    pub fn left_only_leibniz<K: Scalar>() -> FDAlgebra<K> {
        FDAlgebra::from_entries(2, &[(1, 0, v(&[1, 0]))]).expect("valid table")
    }

    /// `sl2` in the basis `(e, f, h)`.
    pub fn sl2<K: Scalar>() -> FDAlgebra<K> {
        FDAlgebra::from_entries(
            3,
            &[
                (0, 1, v(&[0, 0, 1])),
                (1, 0, v(&[0, 0, -1])),
                (2, 0, v(&[2, 0, 0])),
                (0, 2, v(&[-2, 0, 0])),
                (2, 1, v(&[0, -2, 0])),
                (1, 2, v(&[0, 2, 0])),
            ],
        )
        .expect("valid table")
    }

    /// Upper triangular 2×2 matrices in the basis `(E11, E12, E22)`.
    pub fn upper_triangular<K: Scalar>() -> FDAlgebra<K> {
        FDAlgebra::from_entries(
            3,
            &[
                (0, 0, v(&[1, 0, 0])),
                (0, 1, v(&[0, 1, 0])),
                (1, 2, v(&[0, 1, 0])),
                (2, 2, v(&[0, 0, 1])),
            ],
        )
        .expect("valid table")
    }

    /// Full 2×2 matrices in the basis `(E11, E12, E21, E22)`.
    pub fn matrices2<K: Scalar>() -> FDAlgebra<K> {
        let idx = |i: usize, j: usize| 2 * i + j;
        let mut entries = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                for l in 0..2 {
                    let mut out = vec![0; 4];
                    out[idx(i, l)] = 1;
                    entries.push((idx(i, j), idx(j, l), v(&out)));
                }
            }
        }
        FDAlgebra::from_entries(4, &entries).expect("valid table")
    }

    /// A random 0-dialgebra: `⊢` arbitrary except that `e_d` is a left
    /// annihilator and `x⊢e_d ∈ k e_d`; `⊣ = ⊢ − δ` with `δ` valued in
    /// `k e_d` and `δ(x, e_d) = x⊢e_d`.
    pub fn random_zero_dialgebra<K: Scalar>(d: usize, seed: u64) -> FDDialgebra<K> {
        assert!(d >= 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let last = d - 1;
        let mut right = zero_table(d);
        let mut left = zero_table(d);
        let coef = |rng: &mut ChaCha8Rng| K::from_int(rng.random_range(-2..=2));
        for i in 0..d {
            for j in 0..d {
                if i == last {
                    continue;
                }
                let mut r: Vec<K> = vzero(d);
                if j == last {
                    r[last] = coef(&mut rng);
                } else {
                    for x in r.iter_mut() {
                        *x = coef(&mut rng);
                    }
                }
                right[i][j] = r;
            }
        }
        for i in 0..d {
            for j in 0..d {
                let mut delta: Vec<K> = vzero(d);
                if j == last {
                    delta = right[i][j].clone();
                } else {
                    delta[last] = coef(&mut rng);
                }
                left[i][j] = vsub(&right[i][j], &delta);
            }
        }
        FDDialgebra::new(d, left, right).expect("valid tables")
    }

    /// Unconstrained random tables with small integer entries.
    pub fn random_tables<K: Scalar>(d: usize, seed: u64) -> FDDialgebra<K> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut table = || -> Table<K> {
            (0..d)
                .map(|_| (0..d).map(|_| (0..d).map(|_| K::from_int(rng.random_range(-2..=2))).collect()).collect())
                .collect()
        };
        let left = table();
        let right = table();
        FDDialgebra::new(d, left, right).expect("valid tables")
    }
}

/// Arity of the longest identity in a list.
pub fn max_arity<K: Scalar>(ps: &[DiPoly<K>]) -> usize {
    ps.iter().map(Poly::arity).max().unwrap_or(0)
}
