//! The envelope `C(A) = (H⊗A) ⊕ (A⊗A)/U` of a 0-dialgebra and its quotient `C_Var(A)`.
//!
//! `⟨a,b⟩ = a⊢b − a⊣b`, `U = Span{⟨a,b⟩⊗⟨c,d⟩}`, `T(a⊗b) = ⟨a,b⟩`, and
//!
//! ```text
//! a*b         = 1⊗1 ⊗_H a⊢b − T⊗1 ⊗_H a⊗b
//! a*(b⊗c)     = 1⊗1 ⊗_H a⊗⟨b,c⟩
//! (a⊗b)*c     = −1⊗1 ⊗_H ⟨a,b⟩⊗c
//! (a⊗b)*(c⊗d) = 0
//! ```

use super::{eval_term, PseudoAlgebra, Spread};
use crate::dialgebra::{eval_dimonomial, is_zero_vec, unit, vadd, vscale, vsub, vzero, FDDialgebra};
use crate::error::{input_err, Error, Result};
use crate::linalg::{dense_from_sparse, sparse_from_dense, Quotient, SparseEchelon};
use crate::operads::IdentitySet;
use crate::scalar::{binomial, Scalar};
use crate::terms::{all_monomials, Monomial, MultilinearPoly, Poly, Shape, TensorMonomial, Term, Tree};
use crate::translate::psi_section_monomial;

/// `Σ_k T^k ⊗ c0[k] + c1` with `c1` in quotient coordinates.
#[derive(Clone, PartialEq, Debug)]
pub struct CElem<K> {
    pub c0: Vec<Vec<K>>,
    pub c1: Vec<K>,
}

impl<K: Scalar> CElem<K> {
    fn trimmed(mut self) -> Self {
        while self.c0.last().is_some_and(|v| is_zero_vec(v)) {
            self.c0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_empty() && is_zero_vec(&self.c1)
    }

    /// Largest power of `T` in the `H⊗A` part.
    pub fn t_degree(&self) -> Option<usize> {
        self.c0.len().checked_sub(1)
    }
}

/// `C(A)` or one of its quotients by a subspace of `A⊗A` containing `U`.
#[derive(Clone, Debug)]
pub struct Envelope<K> {
    pub algebra: FDDialgebra<K>,
    rel: Quotient<K>,
    t_map: Vec<Vec<K>>,
    u_rank: usize,
}

impl<K: Scalar> Envelope<K> {
    /// `C(A)`; fails unless `A` is a 0-dialgebra.
    pub fn new(algebra: &FDDialgebra<K>) -> Result<Self> {
        if let Some(w) = algebra.is_zero_dialgebra() {
            let t: Vec<String> = w.tuple.iter().map(|i| format!("e{}", i + 1)).collect();
            return Err(input_err!("not a 0-dialgebra: 0-axiom {} fails at ({})", w.identity + 1, t.join(", ")));
        }
        let d = algebra.dim;
        let mut defects = SparseEchelon::new();
        for i in 0..d {
            for j in 0..d {
                defects.insert(&sparse_from_dense(&algebra.bracket_defect(&unit(d, i), &unit(d, j))));
            }
        }
        let rows: Vec<Vec<K>> = defects.rows().map(|(_, r)| dense_from_sparse(r, d)).collect();
        let mut u = SparseEchelon::new();
        for a in &rows {
            for b in &rows {
                if !is_zero_vec(&algebra.bracket_defect(a, b)) {
                    return Err(Error::Precondition("T does not vanish on U".into()));
                }
                u.insert(&sparse_from_dense(&kron(a, b)));
            }
        }
        let u_rank = u.rank();
        Ok(Self::with_relations(algebra.clone(), u, u_rank))
    }

    fn with_relations(algebra: FDDialgebra<K>, sub: SparseEchelon<usize, K>, u_rank: usize) -> Self {
        let d = algebra.dim;
        let rel = Quotient::new(d * d, sub);
        let t_map = rel
            .representatives()
            .iter()
            .map(|&idx| algebra.bracket_defect(&unit(d, idx / d), &unit(d, idx % d)))
            .collect();
        Self { algebra, rel, t_map, u_rank }
    }

    pub fn dim_a(&self) -> usize {
        self.algebra.dim
    }

    /// Dimension of the `A⊗A` part modulo the relations.
    pub fn dim_c1(&self) -> usize {
        self.rel.dim()
    }

    pub fn dim_u(&self) -> usize {
        self.u_rank
    }

    /// Rank of the relations beyond `U`.
    pub fn dim_extra(&self) -> usize {
        self.rel.sub.rank() - self.u_rank
    }

    /// Basis pairs `(i, j)` whose classes `e_i⊗e_j` form a basis of the `A⊗A` part.
    pub fn c1_basis_pairs(&self) -> Vec<(usize, usize)> {
        let d = self.dim_a();
        self.rel.representatives().iter().map(|&idx| (idx / d, idx % d)).collect()
    }

    /// Relation subspace of `A⊗A` (indices `i·d + j`).
    pub fn relations(&self) -> &SparseEchelon<usize, K> {
        &self.rel.sub
    }

    pub fn a(&self, v: &[K]) -> CElem<K> {
        CElem { c0: vec![v.to_vec()], c1: vzero(self.dim_c1()) }.trimmed()
    }

    pub fn basis_a(&self, i: usize) -> CElem<K> {
        self.a(&unit(self.dim_a(), i))
    }

    /// The class of an element of `A⊗A` given in ambient coordinates.
    pub fn class(&self, ambient: &[K]) -> CElem<K> {
        CElem { c0: vec![], c1: self.rel.project(ambient) }
    }

    /// The class of `a⊗b`.
    pub fn pair(&self, a: &[K], b: &[K]) -> CElem<K> {
        self.class(&kron(a, b))
    }

    /// `T` on the `A⊗A` part.
    pub fn t_c1(&self, c1: &[K]) -> Vec<K> {
        let mut out = vzero(self.dim_a());
        for (c, v) in c1.iter().zip(&self.t_map) {
            if !c.is_zero() {
                out = vadd(&out, &vscale(c, v));
            }
        }
        out
    }

    fn from_c1(&self, c1: Vec<K>) -> CElem<K> {
        CElem { c0: vec![], c1 }
    }

    /// Evaluation of `t ⊗ e_c` in `A` through its directed preimage.
    fn a_eval(&self, word: &Monomial<()>, center: usize, args: &[Vec<K>]) -> Vec<K> {
        let tm = TensorMonomial { word: word.clone(), center };
        eval_dimonomial(&self.algebra, &psi_section_monomial(&tm), args)
    }

    /// Quotient of `self` by the span of `extra ⊆ A⊗A` (ambient coordinates).
    fn quotient_by(&self, extra: &[Vec<K>]) -> Result<Self> {
        let mut sub = self.rel.sub.clone();
        for v in extra {
            if !is_zero_vec(&self.t_ambient(v)) {
                return Err(Error::Precondition("relation with nonzero T-image in the A⊗A part".into()));
            }
            sub.insert(&sparse_from_dense(v));
        }
        Ok(Self::with_relations(self.algebra.clone(), sub, self.u_rank))
    }

    fn t_ambient(&self, v: &[K]) -> Vec<K> {
        let d = self.dim_a();
        let mut out = vzero(d);
        for (idx, c) in v.iter().enumerate() {
            if !c.is_zero() {
                out = vadd(&out, &vscale(c, &self.algebra.bracket_defect(&unit(d, idx / d), &unit(d, idx % d))));
            }
        }
        out
    }

    /// Adds `c·T^r w` at `z[s]`.
    fn push(&self, z: &mut Vec<CElem<K>>, s: usize, c: &K, w: &CElem<K>, r: u32) {
        while z.len() <= s {
            z.push(self.zero());
        }
        let shifted = self.translate_pow(w, r);
        z[s] = self.add(&z[s], &self.scale(c, &shifted));
    }

    /// `T_1^a T_2^l ⊗ w` pushed into normalized slots via `T_2 = T_z − T_1`.
    fn push_t2(&self, z: &mut Vec<CElem<K>>, a: usize, l: u32, w: &CElem<K>) {
        for r in 0..=l {
            let sign = if (l - r).is_multiple_of(2) { K::one() } else { -K::one() };
            let c = sign * binomial::<K>(l, r);
            self.push(z, a + (l - r) as usize, &c, w, r);
        }
    }
}

fn kron<K: Scalar>(a: &[K], b: &[K]) -> Vec<K> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x.clone() * y.clone());
        }
    }
    out
}

impl<K: Scalar> PseudoAlgebra<K> for Envelope<K> {
    type Elem = CElem<K>;

    fn zero(&self) -> CElem<K> {
        CElem { c0: vec![], c1: vzero(self.dim_c1()) }
    }

    fn is_zero(&self, x: &CElem<K>) -> bool {
        x.is_zero()
    }

    fn add(&self, x: &CElem<K>, y: &CElem<K>) -> CElem<K> {
        let n = x.c0.len().max(y.c0.len());
        let d = self.dim_a();
        let c0 = (0..n)
            .map(|k| {
                let a = x.c0.get(k).cloned().unwrap_or_else(|| vzero(d));
                let b = y.c0.get(k).cloned().unwrap_or_else(|| vzero(d));
                vadd(&a, &b)
            })
            .collect();
        CElem { c0, c1: vadd(&x.c1, &y.c1) }.trimmed()
    }

    fn scale(&self, c: &K, x: &CElem<K>) -> CElem<K> {
        CElem { c0: x.c0.iter().map(|v| vscale(c, v)).collect(), c1: vscale(c, &x.c1) }.trimmed()
    }

    fn translate(&self, x: &CElem<K>) -> CElem<K> {
        let mut c0 = vec![self.t_c1(&x.c1)];
        c0.extend(x.c0.iter().cloned());
        CElem { c0, c1: vzero(self.dim_c1()) }.trimmed()
    }

    fn product(&self, x: &CElem<K>, y: &CElem<K>) -> Vec<CElem<K>> {
        let mut z: Vec<CElem<K>> = Vec::new();
        let one = K::one();
        let ty = (!is_zero_vec(&y.c1)).then(|| self.t_c1(&y.c1));
        let tx = (!is_zero_vec(&x.c1)).then(|| self.t_c1(&x.c1));
        for (k, a) in x.c0.iter().enumerate() {
            if is_zero_vec(a) {
                continue;
            }
            for (l, b) in y.c0.iter().enumerate() {
                if is_zero_vec(b) {
                    continue;
                }
                let w0 = self.a(&self.algebra.vdash(a, b));
                let w1 = self.scale(&-K::one(), &self.pair(a, b));
                self.push_t2(&mut z, k, l as u32, &w0);
                self.push_t2(&mut z, k + 1, l as u32, &w1);
            }
            if let Some(t) = &ty {
                self.push(&mut z, k, &one, &self.pair(a, t), 0);
            }
        }
        if let Some(t) = &tx {
            for (l, b) in y.c0.iter().enumerate() {
                let w = self.scale(&-K::one(), &self.pair(t, b));
                self.push_t2(&mut z, 0, l as u32, &w);
            }
        }
        while z.last().is_some_and(|e| e.is_zero()) {
            z.pop();
        }
        z
    }

    fn generators(&self) -> Vec<CElem<K>> {
        let mut g: Vec<CElem<K>> = (0..self.dim_a()).map(|i| self.basis_a(i)).collect();
        let q = self.dim_c1();
        g.extend((0..q).map(|r| self.from_c1(unit(q, r))));
        g
    }
}

fn plain_children(shape: &Shape) -> Option<(Monomial<()>, Monomial<()>)> {
    match shape {
        Tree::Leaf => None,
        Tree::Node(_, l, r) => Some((Monomial::plain((**l).clone()), Monomial::plain((**r).clone()))),
    }
}

/// `u` with leaf `pos` replaced by `x_pos x_{pos+1}`.
fn split_leaf(u: &Monomial<()>, pos: usize) -> Monomial<()> {
    let subs: Vec<Shape> = (0..u.arity())
        .map(|i| if i == pos { Tree::node((), Tree::Leaf, Tree::Leaf) } else { Tree::Leaf })
        .collect();
    Monomial::plain(u.shape.graft(&subs))
}

enum ArgKind<K> {
    A(Vec<K>),
    C1(Vec<K>),
}

impl<K: Scalar> Envelope<K> {
    /// `y_0 ∈ A` and `y_1, …, y_{n−1} ∈ A⊗A` with `C_n(u)(b) = T_0⊗y_0 − Σ T_j⊗y_j`
    /// for a plain word `u` on arguments from `A`.
    fn plain_all_a(&self, u: &Monomial<()>, b: &[Vec<K>]) -> (Vec<K>, Vec<Vec<K>>) {
        let n = u.arity();
        let y0 = self.a_eval(u, n - 1, b);
        let Some((l, r)) = plain_children(&u.shape) else {
            return (y0, vec![]);
        };
        let m = l.arity();
        let nr = r.arity();
        let right_last = self.a_eval(&r, nr - 1, &b[m..]);
        let ys = (1..n)
            .map(|j| {
                if j <= m {
                    kron(&self.a_eval(&l, j - 1, &b[..m]), &right_last)
                } else {
                    let left_last = self.a_eval(&l, m - 1, &b[..m]);
                    kron(&left_last, &vsub(&right_last, &self.a_eval(&r, j - m - 1, &b[m..])))
                }
            })
            .collect();
        (y0, ys)
    }

    /// Twisted monomial on arguments in `A`: `(x_0, [x_1, …, x_{n−1}])` in `A` and `A⊗A`.
    fn twisted_all_a(&self, t: &Monomial<()>, a: &[Vec<K>]) -> (Vec<K>, Vec<Vec<K>>) {
        let n = t.arity();
        let b: Vec<Vec<K>> = t.word().iter().map(|&i| a[i].clone()).collect();
        let (_, ys) = self.plain_all_a(&Monomial::plain(t.shape.clone()), &b);
        let x0 = self.a_eval(t, n - 1, a);
        let inv = t.perm.inverse();
        let y = |p: usize| if p < n - 1 { ys[p].clone() } else { vzero(self.dim_a() * self.dim_a()) };
        let last = y(inv.apply(n - 1));
        let xs = (0..n - 1).map(|s| vsub(&y(inv.apply(s)), &last)).collect();
        (x0, xs)
    }

    /// `X ∈ A⊗A` with `C_n(u)(…, a⊗b, …) = T_0⊗X`, the pair sitting at leaf `pos`.
    fn plain_one_c1(&self, u: &Monomial<()>, b: &[Vec<K>], pos: usize, pa: &[K], pb: &[K]) -> Vec<K> {
        let Some((l, r)) = plain_children(&u.shape) else {
            return kron(pa, pb);
        };
        let m = l.arity();
        let spliced = |word: &Monomial<()>, args: &[Vec<K>], p: usize| {
            let f = split_leaf(word, p);
            let mut full: Vec<Vec<K>> = args[..p].to_vec();
            full.push(pa.to_vec());
            full.push(pb.to_vec());
            full.extend(args[p + 1..].iter().cloned());
            vsub(&self.a_eval(&f, p + 1, &full), &self.a_eval(&f, p, &full))
        };
        if pos < m {
            let right_last = self.a_eval(&r, r.arity() - 1, &b[m..]);
            vscale(&-K::one(), &kron(&spliced(&l, &b[..m], pos), &right_last))
        } else {
            let left_last = self.a_eval(&l, m - 1, &b[..m]);
            kron(&left_last, &spliced(&r, &b[m..], pos - m))
        }
    }

    fn twisted_one_c1(&self, t: &Monomial<()>, a: &[Vec<K>], var: usize, pa: &[K], pb: &[K]) -> Vec<K> {
        let b: Vec<Vec<K>> = t.word().iter().map(|&i| a[i].clone()).collect();
        let pos = t.perm.inverse().apply(var);
        self.plain_one_c1(&Monomial::plain(t.shape.clone()), &b, pos, pa, pb)
    }

    fn classify(&self, x: &CElem<K>) -> Option<ArgKind<K>> {
        if is_zero_vec(&x.c1) && x.c0.len() <= 1 {
            return Some(ArgKind::A(x.c0.first().cloned().unwrap_or_else(|| vzero(self.dim_a()))));
        }
        if x.c0.is_empty() {
            return Some(ArgKind::C1(x.c1.clone()));
        }
        None
    }

    /// `C_n(t)` from the explicit formulas, for arguments in `A` with at most
    /// one argument in the `A⊗A` part.
    pub fn closed_form_eval(&self, t: &MultilinearPoly<K>, args: &[CElem<K>]) -> Result<Spread<CElem<K>>> {
        let n = t.arity();
        if args.len() != n {
            return Err(input_err!("{} arguments for a term of arity {n}", args.len()));
        }
        let mut plain: Vec<Vec<K>> = Vec::with_capacity(n);
        let mut c1_arg: Option<(usize, Vec<K>)> = None;
        for (i, x) in args.iter().enumerate() {
            match self.classify(x) {
                Some(ArgKind::A(v)) => plain.push(v),
                Some(ArgKind::C1(v)) if c1_arg.is_none() => {
                    c1_arg = Some((i, v));
                    plain.push(vzero(self.dim_a()));
                }
                _ => {
                    return Err(Error::Precondition(
                        "closed forms need arguments in A with at most one in the A⊗A part".into(),
                    ))
                }
            }
        }
        let mut out = Spread::zero(n);
        let zero_exps = vec![0u32; n - 1];
        for (m, c) in t.iter() {
            match &c1_arg {
                None => {
                    let (x0, xs) = self.twisted_all_a(m, &plain);
                    out.add_term(self, zero_exps.clone(), self.scale(c, &self.a(&x0)));
                    for (s, x) in xs.iter().enumerate() {
                        let mut e = zero_exps.clone();
                        e[s] = 1;
                        out.add_term(self, e, self.scale(&-c.clone(), &self.class(x)));
                    }
                }
                Some((var, coords)) => {
                    let d = self.dim_a();
                    let mut acc = vzero(d * d);
                    for (w, &(p, q)) in coords.iter().zip(&self.c1_basis_pairs()) {
                        if w.is_zero() {
                            continue;
                        }
                        let x = self.twisted_one_c1(m, &plain, *var, &unit(d, p), &unit(d, q));
                        acc = vadd(&acc, &vscale(w, &x));
                    }
                    out.add_term(self, zero_exps.clone(), self.scale(c, &self.class(&acc)));
                }
            }
        }
        Ok(out)
    }
}

/// `C_Var(A)` together with the generators of its defining ideal.
#[derive(Clone, Debug)]
pub struct VarEnvelope<K> {
    pub raw: Envelope<K>,
    pub envelope: Envelope<K>,
    /// Spanning vectors of `I` in `A⊗A` (before reduction modulo `U`).
    pub ideal: Vec<Vec<K>>,
}

impl<K: Scalar> VarEnvelope<K> {
    pub fn dim_ideal(&self) -> usize {
        self.envelope.dim_extra()
    }
}

fn basis_tuples(d: usize, n: usize) -> Result<Vec<Vec<usize>>> {
    let total = (d as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > crate::dialgebra::MAX_TUPLES as u128 {
        return Err(Error::Resource(format!("{d}^{n} basis tuples exceed the bound")));
    }
    Ok((0..total as usize)
        .map(|mut k| {
            let mut t = vec![0; n];
            for s in t.iter_mut().rev() {
                *s = k % d;
                k /= d;
            }
            t
        })
        .collect())
}

/// Builds `C_Var(A) = C(A)/I`, `I` spanned by the `A⊗A` coefficients of `t*`
/// over arguments in `A` and over arguments with one factor in `A⊗A`.
pub fn var_envelope<K: Scalar>(algebra: &FDDialgebra<K>, sigma: &IdentitySet<K>) -> Result<VarEnvelope<K>> {
    let raw = Envelope::new(algebra)?;
    if let Some(w) = algebra.is_var_dialgebra(sigma)? {
        let t: Vec<String> = w.tuple.iter().map(|i| format!("e{}", i + 1)).collect();
        return Err(input_err!(
            "not a {}-dialgebra: derived identity {} fails at ({})",
            sigma.name,
            w.identity + 1,
            t.join(", ")
        ));
    }
    let d = algebra.dim;
    let basis: Vec<Vec<K>> = algebra.basis();
    let mut ideal = Vec::new();
    for t in &sigma.identities {
        let n = t.arity();
        for tuple in basis_tuples(d, n)? {
            let args: Vec<Vec<K>> = tuple.iter().map(|&i| basis[i].clone()).collect();
            let mut x0 = vzero(d);
            let mut xs = vec![vzero(d * d); n - 1];
            for (m, c) in t.iter() {
                let (a0, a_s) = raw.twisted_all_a(m, &args);
                x0 = vadd(&x0, &vscale(c, &a0));
                for (acc, x) in xs.iter_mut().zip(&a_s) {
                    *acc = vadd(acc, &vscale(c, x));
                }
            }
            if !is_zero_vec(&x0) {
                return Err(Error::Precondition("the T_0-coefficient of an identity does not vanish".into()));
            }
            ideal.extend(xs.into_iter().filter(|x| !is_zero_vec(x)));
        }
        for var in 0..n {
            for tuple in basis_tuples(d, n - 1)? {
                let mut args: Vec<Vec<K>> = tuple.iter().map(|&i| basis[i].clone()).collect();
                args.insert(var, vzero(d));
                for p in 0..d {
                    for q in 0..d {
                        let mut acc = vzero(d * d);
                        for (m, c) in t.iter() {
                            acc = vadd(&acc, &vscale(c, &raw.twisted_one_c1(m, &args, var, &basis[p], &basis[q])));
                        }
                        if !is_zero_vec(&acc) {
                            ideal.push(acc);
                        }
                    }
                }
            }
        }
    }
    let envelope = raw.quotient_by(&ideal)?;
    Ok(VarEnvelope { raw, envelope, ideal })
}

/// `ψ: C(A)/R → P` extending `φ: A → P`: `ψ(h⊗a) = h(T)φ(a)`, `ψ(a⊗b) = −φ(a)⊙₁φ(b)`.
#[derive(Clone, Debug)]
pub struct ExtendedHom<E> {
    pub on_a: Vec<E>,
    pub on_c1: Vec<E>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> ExtendedHom<E> {
    pub fn apply<K: Scalar, P: PseudoAlgebra<K, Elem = E>>(&self, p: &P, x: &CElem<K>) -> E {
        let mut acc = p.zero();
        for (k, v) in x.c0.iter().enumerate() {
            let mut img = p.zero();
            for (c, e) in v.iter().zip(&self.on_a) {
                if !c.is_zero() {
                    img = p.add(&img, &p.scale(c, e));
                }
            }
            acc = p.add(&acc, &p.translate_pow(&img, k as u32));
        }
        for (c, e) in x.c1.iter().zip(&self.on_c1) {
            if !c.is_zero() {
                acc = p.add(&acc, &p.scale(c, e));
            }
        }
        acc
    }
}

fn trim<E, K: Scalar, P: PseudoAlgebra<K, Elem = E>>(p: &P, mut v: Vec<E>) -> Vec<E> {
    while v.last().is_some_and(|e| p.is_zero(e)) {
        v.pop();
    }
    v
}

/// Extends a dialgebra map `φ: A → P^{(0)}` (images of the basis of `A`) to a
/// pseudo-algebra map on `env`, checking every condition on generators.
pub fn extend_hom<K: Scalar, P: PseudoAlgebra<K>>(
    env: &Envelope<K>,
    p: &P,
    phi: Vec<P::Elem>,
) -> Result<ExtendedHom<P::Elem>> {
    let d = env.dim_a();
    if phi.len() != d {
        return Err(input_err!("{} images for a basis of size {d}", phi.len()));
    }
    let comb = |v: &[K]| {
        let mut acc = p.zero();
        for (c, e) in v.iter().zip(&phi) {
            if !c.is_zero() {
                acc = p.add(&acc, &p.scale(c, e));
            }
        }
        acc
    };
    let coeff = super::CoefficientDialgebra(p);
    use crate::dialgebra::Dialgebra;
    let mut one_products = vec![vec![p.zero(); d]; d];
    for i in 0..d {
        for j in 0..d {
            let z = trim(p, p.product(&phi[i], &phi[j]));
            if z.len() > 2 {
                return Err(input_err!("φ(e{})*φ(e{}) has T-degree {} > 1", i + 1, j + 1, z.len() - 1));
            }
            let (ei, ej) = (unit(d, i), unit(d, j));
            if coeff.right(&phi[i], &phi[j]) != comb(&env.algebra.vdash(&ei, &ej)) {
                return Err(input_err!("φ(e{0}⊢e{1}) ≠ φ(e{0})⊢φ(e{1})", i + 1, j + 1));
            }
            if coeff.left(&phi[i], &phi[j]) != comb(&env.algebra.dashv(&ei, &ej)) {
                return Err(input_err!("φ(e{0}⊣e{1}) ≠ φ(e{0})⊣φ(e{1})", i + 1, j + 1));
            }
            one_products[i][j] = p.scale(&-K::one(), &z.get(1).cloned().unwrap_or_else(|| p.zero()));
        }
    }
    let on_ambient = |v: &[K]| {
        let mut acc = p.zero();
        for (idx, c) in v.iter().enumerate() {
            if !c.is_zero() {
                acc = p.add(&acc, &p.scale(c, &one_products[idx / d][idx % d]));
            }
        }
        acc
    };
    for (_, row) in env.relations().rows() {
        if !p.is_zero(&on_ambient(&dense_from_sparse(row, d * d))) {
            return Err(input_err!("ψ does not vanish on the relations of the A⊗A part"));
        }
    }
    let on_c1: Vec<P::Elem> = env.c1_basis_pairs().iter().map(|&(i, j)| one_products[i][j].clone()).collect();
    let hom = ExtendedHom { on_a: phi.clone(), on_c1 };
    for x in env.generators() {
        if hom.apply(p, &env.translate(&x)) != p.translate(&hom.apply(p, &x)) {
            return Err(input_err!("ψ is not H-linear on a generator"));
        }
    }
    let gens = env.generators();
    for x in &gens {
        for y in &gens {
            let lhs: Vec<P::Elem> = env.product(x, y).iter().map(|z| hom.apply(p, z)).collect();
            let rhs = p.product(&hom.apply(p, x), &hom.apply(p, y));
            if trim(p, lhs) != trim(p, rhs) {
                return Err(input_err!("ψ does not preserve the pseudo-product on generators"));
            }
        }
    }
    Ok(hom)
}

/// Outcome of comparing [`Envelope::closed_form_eval`] with the recursive evaluator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    /// Evaluations with all arguments in `A`.
    pub plain_cases: usize,
    /// Evaluations with one argument in the `A⊗A` part.
    pub c1_cases: usize,
    pub failure: Option<String>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Runs both evaluators on every word of degree at most `max_degree` (all
/// shapes, all permutations) over all basis tuples of `A`, and with one basis
/// element of the `A⊗A` part in any slot for words of degree at most
/// `c1_max_degree`. Stops at the first disagreement.
pub fn oracle_check<K: Scalar>(env: &Envelope<K>, max_degree: usize, c1_max_degree: usize) -> Result<OracleReport> {
    let d = env.dim_a();
    let c1 = env.dim_c1();
    let mut report = OracleReport { plain_cases: 0, c1_cases: 0, failure: None };
    for n in 1..=max_degree {
        let plain = basis_tuples(d, n)?;
        let rest = basis_tuples(d, n - 1)?;
        for w in all_monomials(n) {
            let t: MultilinearPoly<K> = Poly::monomial(w.clone());
            for tup in &plain {
                let args: Vec<CElem<K>> = tup.iter().map(|&i| env.basis_a(i)).collect();
                report.plain_cases += 1;
                if eval_term(env, &t, &args)? != env.closed_form_eval(&t, &args)? {
                    report.failure = Some(format!("{w} at basis tuple {tup:?}"));
                    return Ok(report);
                }
            }
            if n > c1_max_degree {
                continue;
            }
            for slot in 0..n {
                for tup in &rest {
                    for r in 0..c1 {
                        let mut args: Vec<CElem<K>> = tup.iter().map(|&i| env.basis_a(i)).collect();
                        args.insert(slot, CElem { c0: Vec::new(), c1: unit(c1, r) });
                        report.c1_cases += 1;
                        if eval_term(env, &t, &args)? != env.closed_form_eval(&t, &args)? {
                            report.failure =
                                Some(format!("{w} with A⊗A basis element {r} in slot {} at {tup:?}", slot + 1));
                            return Ok(report);
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}
