//! Pseudo-algebras over `H = k[T]`.
//!
//! An element of `H^{⊗n} ⊗_H C` is stored in normalized form: a polynomial in
//! `T_1, …, T_{n-1}` with coefficients in `C`, the last tensor factor being
//! moved onto the coefficient through `(T_1 + … + T_n) ⊗_H c = 1 ⊗_H Tc`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use crate::combinatorics::Permutation;
use crate::dialgebra::{check_all_on, Dialgebra, Witness};
use crate::error::{input_err, Error, Result};
use crate::operads::IdentitySet;
use crate::scalar::{binomial, Scalar};
use crate::terms::{DiPoly, Monomial, MultilinearPoly, TensorPoly, Term, Tree};

pub mod current;
pub mod envelope;

pub use current::{Commutator, Current, MatrixAlgebra};
pub use envelope::{oracle_check, CElem, Envelope, ExtendedHom, OracleReport, VarEnvelope};

/// Default bound on the total `T`-degree of spread elements.
pub const DEFAULT_MAX_DEGREE: u32 = 16;

/// Total `T`-degree bound, overridable through `DIVARIA_MAX_DEGREE`.
pub fn max_degree() -> u32 {
    static CAP: OnceLock<u32> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("DIVARIA_MAX_DEGREE").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_MAX_DEGREE)
    })
}

/// `k[T]` with `Δ(T) = T⊗1 + 1⊗T`, `ε(T) = 0`, `S(T) = −T`, on the basis `T^k`.
pub struct HopfKT;

impl HopfKT {
    /// `Δ(T^k) = Σ binom(k, i) T^i ⊗ T^{k-i}`.
    pub fn coproduct<K: Scalar>(k: u32) -> Vec<(u32, u32, K)> {
        (0..=k).map(|i| (i, k - i, binomial(k, i))).collect()
    }

    pub fn counit<K: Scalar>(k: u32) -> K {
        if k == 0 { K::one() } else { K::zero() }
    }

    /// `S(T^k) = (−1)^k T^k`.
    pub fn antipode<K: Scalar>(k: u32) -> K {
        if k.is_multiple_of(2) { K::one() } else { -K::one() }
    }
}

/// A pseudo-algebra over `k[T]` with a chosen element representation.
pub trait PseudoAlgebra<K: Scalar> {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn scale(&self, c: &K, x: &Self::Elem) -> Self::Elem;
    /// `T·x`.
    fn translate(&self, x: &Self::Elem) -> Self::Elem;
    /// `x*y = Σ_s T_1^s ⊗_H z_s`, returned as `[z_0, z_1, …]`.
    fn product(&self, x: &Self::Elem, y: &Self::Elem) -> Vec<Self::Elem>;
    /// Generators as an `H`-module.
    fn generators(&self) -> Vec<Self::Elem>;

    fn translate_pow(&self, x: &Self::Elem, k: u32) -> Self::Elem {
        let mut y = x.clone();
        for _ in 0..k {
            y = self.translate(&y);
        }
        y
    }

    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.add(x, &self.scale(&-K::one(), y))
    }
}

/// Normalized element of `H^{⊗n} ⊗_H C`: exponent vectors of length `n−1`
/// mapped to nonzero coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct Spread<E> {
    pub arity: usize,
    pub terms: BTreeMap<Vec<u32>, E>,
}

impl<E: Clone + PartialEq + fmt::Debug> Spread<E> {
    pub fn zero(arity: usize) -> Self {
        Self { arity, terms: BTreeMap::new() }
    }

    /// `1 ⊗_H x` in arity one.
    pub fn single<K: Scalar, P: PseudoAlgebra<K, Elem = E>>(p: &P, x: &E) -> Self {
        let mut s = Self::zero(1);
        s.add_term(p, vec![], x.clone());
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum::<u32>()).max().unwrap_or(0)
    }

    /// Coefficient of `T^exps`.
    pub fn coeff<K: Scalar, P: PseudoAlgebra<K, Elem = E>>(&self, p: &P, exps: &[u32]) -> E {
        self.terms.get(exps).cloned().unwrap_or_else(|| p.zero())
    }

    pub fn add_term<K: Scalar, P: PseudoAlgebra<K, Elem = E>>(&mut self, p: &P, exps: Vec<u32>, x: E) {
        debug_assert_eq!(exps.len() + 1, self.arity.max(1));
        if p.is_zero(&x) {
            return;
        }
        let merged = match self.terms.get(&exps) {
            Some(old) => p.add(old, &x),
            None => x,
        };
        if p.is_zero(&merged) {
            self.terms.remove(&exps);
        } else {
            self.terms.insert(exps, merged);
        }
    }

    pub fn add_scaled<K: Scalar, P: PseudoAlgebra<K, Elem = E>>(&mut self, p: &P, c: &K, other: &Self) {
        assert_eq!(self.arity, other.arity, "spread arity mismatch");
        for (e, x) in &other.terms {
            self.add_term(p, e.clone(), p.scale(c, x));
        }
    }

    /// Applies an `H`-linear map to every coefficient.
    pub fn map<F: Clone + PartialEq + fmt::Debug, K: Scalar, Q: PseudoAlgebra<K, Elem = F>>(
        &self,
        q: &Q,
        f: impl Fn(&E) -> F,
    ) -> Spread<F> {
        let mut out = Spread::zero(self.arity);
        for (e, x) in &self.terms {
            out.add_term(q, e.clone(), f(x));
        }
        out
    }
}

/// Polynomials in `T_1, …, T_r` with scalar coefficients.
type TPoly<K> = BTreeMap<Vec<u32>, K>;

fn tpoly_mul<K: Scalar>(a: &TPoly<K>, b: &TPoly<K>) -> TPoly<K> {
    let mut out: TPoly<K> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let c = ca.clone() * cb.clone();
            let entry = out.entry(e).or_insert_with(K::zero);
            *entry = entry.clone() + c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `(T_1 + … + T_k)^s` as a polynomial in `r ≥ k` variables.
fn power_of_sum<K: Scalar>(k: usize, s: u32, r: usize) -> TPoly<K> {
    let mut sum: TPoly<K> = BTreeMap::new();
    for i in 0..k {
        let mut e = vec![0; r];
        e[i] = 1;
        sum.insert(e, K::one());
    }
    let mut out: TPoly<K> = BTreeMap::from([(vec![0; r], K::one())]);
    for _ in 0..s {
        out = tpoly_mul(&out, &sum);
    }
    out
}

fn check_degree(exps: &[u32]) -> Result<()> {
    let d: u32 = exps.iter().sum();
    if d > max_degree() {
        return Err(Error::Resource(format!("T-degree {d} exceeds the cap {}", max_degree())));
    }
    Ok(())
}

/// `i_n`: rewrites `T^β ⊗_H c` with `β` of length `n` into normalized form.
pub fn normalize<K: Scalar, P: PseudoAlgebra<K>>(
    p: &P,
    n: usize,
    terms: impl IntoIterator<Item = (Vec<u32>, P::Elem)>,
) -> Result<Spread<P::Elem>> {
    let mut out = Spread::zero(n);
    for (beta, c) in terms {
        if beta.len() != n {
            return Err(input_err!("exponent vector of length {} in arity {n}", beta.len()));
        }
        check_degree(&beta)?;
        let k = beta[n - 1];
        let head: Vec<u32> = beta[..n - 1].to_vec();
        if k == 0 {
            out.add_term(p, head, c);
            continue;
        }
        // T_n^k = Σ_r binom(k, r) (−(T_1+…+T_{n-1}))^{k−r} T_z^r
        for r in 0..=k {
            let sign = if (k - r) % 2 == 0 { K::one() } else { -K::one() };
            let coef = sign * binomial::<K>(k, r);
            let moved = p.translate_pow(&c, r);
            for (e, m) in power_of_sum::<K>(n - 1, k - r, n - 1) {
                let exps: Vec<u32> = e.iter().zip(&head).map(|(x, y)| x + y).collect();
                out.add_term(p, exps, p.scale(&(coef.clone() * m), &moved));
            }
        }
    }
    Ok(out)
}

/// Pseudo-product of spread elements: `F*G` of arity `k+m`.
pub fn spread_product<K: Scalar, P: PseudoAlgebra<K>>(
    p: &P,
    f: &Spread<P::Elem>,
    g: &Spread<P::Elem>,
) -> Result<Spread<P::Elem>> {
    let (k, m) = (f.arity, g.arity);
    let r = k + m - 1;
    let mut out = Spread::zero(k + m);
    let mut powers: Vec<TPoly<K>> = Vec::new();
    for (ea, c) in &f.terms {
        for (eb, d) in &g.terms {
            let zs = p.product(c, d);
            for (s, z) in zs.iter().enumerate() {
                if p.is_zero(z) {
                    continue;
                }
                while powers.len() <= s {
                    powers.push(power_of_sum(k, powers.len() as u32, r));
                }
                for (e, coef) in &powers[s] {
                    let mut exps = e.clone();
                    for (i, x) in ea.iter().enumerate() {
                        exps[i] += x;
                    }
                    for (j, y) in eb.iter().enumerate() {
                        exps[k + j] += y;
                    }
                    check_degree(&exps)?;
                    out.add_term(p, exps, p.scale(coef, z));
                }
            }
        }
    }
    Ok(out)
}

/// `(σ ⊗_H id)`: `T_i ↦ T_{iσ}`, then renormalized.
pub fn spread_act<K: Scalar, P: PseudoAlgebra<K>>(
    p: &P,
    s: &Spread<P::Elem>,
    sigma: &Permutation,
) -> Result<Spread<P::Elem>> {
    let n = s.arity;
    if sigma.degree() != n {
        return Err(input_err!("permutation of degree {} acting on arity {n}", sigma.degree()));
    }
    if sigma.is_identity() {
        return Ok(s.clone());
    }
    let terms = s.terms.iter().map(|(e, c)| {
        let mut beta = vec![0; n];
        for (i, x) in e.iter().enumerate() {
            beta[sigma.apply(i)] = *x;
        }
        (beta, c.clone())
    });
    normalize(p, n, terms.collect::<Vec<_>>())
}

fn eval_shape<K: Scalar, P: PseudoAlgebra<K>>(
    p: &P,
    t: &Tree<()>,
    args: &mut impl Iterator<Item = P::Elem>,
) -> Result<Spread<P::Elem>> {
    match t {
        Tree::Leaf => Ok(Spread::single(p, &args.next().expect("one argument per leaf"))),
        Tree::Node(_, l, r) => {
            let a = eval_shape(p, l, args)?;
            let b = eval_shape(p, r, args)?;
            spread_product(p, &a, &b)
        }
    }
}

/// `C_n(u⊗σ)(a_1, …, a_n) = (σ ⊗_H id) C_n(u)(a_{1σ}, …, a_{nσ})`.
pub fn eval_monomial<K: Scalar, P: PseudoAlgebra<K>>(
    p: &P,
    m: &Monomial<()>,
    args: &[P::Elem],
) -> Result<Spread<P::Elem>> {
    if args.len() != m.arity() {
        return Err(input_err!("{} arguments for a term of arity {}", args.len(), m.arity()));
    }
    let mut it = m.word().iter().map(|&i| args[i].clone());
    let raw = eval_shape(p, &m.shape, &mut it)?;
    spread_act(p, &raw, &m.perm)
}

/// Value of a multilinear term at `args`, via recursive pseudo-products.
pub fn eval_term<K: Scalar, P: PseudoAlgebra<K>>(
    p: &P,
    t: &MultilinearPoly<K>,
    args: &[P::Elem],
) -> Result<Spread<P::Elem>> {
    if args.len() != t.arity() {
        return Err(input_err!("{} arguments for a term of arity {}", args.len(), t.arity()));
    }
    let mut out = Spread::zero(t.arity());
    for (m, c) in t.iter() {
        out.add_scaled(p, c, &eval_monomial(p, m, args)?);
    }
    Ok(out)
}

/// `x ⊙_n y`: the coefficient of `T_1^n` in `x*y`.
pub fn n_product<K: Scalar, P: PseudoAlgebra<K>>(p: &P, x: &P::Elem, y: &P::Elem, n: usize) -> P::Elem {
    p.product(x, y).into_iter().nth(n).unwrap_or_else(|| p.zero())
}

/// `C^{(0)}`: `a⊢b = (ε⊗id) i_2(a*b)`, `a⊣b = (ε⊗id) i_2((12)⊗_H id)(a*b)`.
pub struct CoefficientDialgebra<'a, P>(pub &'a P);

impl<K: Scalar, P: PseudoAlgebra<K>> Dialgebra<K> for CoefficientDialgebra<'_, P> {
    type Elem = P::Elem;
    fn zero(&self) -> P::Elem {
        self.0.zero()
    }
    fn is_zero(&self, a: &P::Elem) -> bool {
        self.0.is_zero(a)
    }
    fn add(&self, a: &P::Elem, b: &P::Elem) -> P::Elem {
        self.0.add(a, b)
    }
    fn scale(&self, c: &K, a: &P::Elem) -> P::Elem {
        self.0.scale(c, a)
    }
    fn right(&self, a: &P::Elem, b: &P::Elem) -> P::Elem {
        n_product(self.0, a, b, 0)
    }
    fn left(&self, a: &P::Elem, b: &P::Elem) -> P::Elem {
        let mut acc = self.0.zero();
        for (s, z) in self.0.product(a, b).iter().enumerate() {
            acc = self.0.add(&acc, &self.0.translate_pow(z, s as u32));
        }
        acc
    }
}

/// `C^{(ε)}(f₀ ⊗ e_i)(a)`: counit on every slot except `i`.
pub fn epsilon_eval<K: Scalar, P: PseudoAlgebra<K>>(p: &P, f: &TensorPoly<K>, args: &[P::Elem]) -> Result<P::Elem> {
    let n = f.arity();
    let mut acc = p.zero();
    for (tm, c) in f.iter() {
        let s = eval_monomial(p, &tm.word, args)?;
        let i = tm.center;
        for (e, x) in &s.terms {
            let survives = e.iter().enumerate().all(|(j, &k)| k == 0 || j == i);
            if !survives {
                continue;
            }
            let k = if i < n - 1 { e[i] } else { 0 };
            acc = p.add(&acc, &p.scale(c, &p.translate_pow(x, k)));
        }
    }
    Ok(acc)
}

fn tuples(base: usize, n: usize) -> Result<Vec<Vec<usize>>> {
    let total = (base as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > crate::dialgebra::MAX_TUPLES as u128 {
        return Err(Error::Resource(format!("{base}^{n} generator tuples exceed the bound")));
    }
    Ok((0..total as usize)
        .map(|mut k| {
            let mut t = vec![0; n];
            for slot in t.iter_mut().rev() {
                *slot = k % base;
                k /= base;
            }
            t
        })
        .collect())
}

/// A nonzero value of `t*` on generators.
#[derive(Clone, Debug)]
pub struct PseudoWitness<E> {
    pub identity: usize,
    pub tuple: Vec<usize>,
    pub value: Spread<E>,
}

/// Evaluates `t*` for every `t ∈ Σ` on all generator tuples.
pub fn check_var_pseudo<K: Scalar, P: PseudoAlgebra<K>>(
    p: &P,
    sigma: &IdentitySet<K>,
) -> Result<Option<PseudoWitness<P::Elem>>> {
    let gens = p.generators();
    for (idx, t) in sigma.identities.iter().enumerate() {
        for tuple in tuples(gens.len(), t.arity())? {
            let args: Vec<P::Elem> = tuple.iter().map(|&i| gens[i].clone()).collect();
            let v = eval_term(p, t, &args)?;
            if !v.is_zero() {
                return Ok(Some(PseudoWitness { identity: idx, tuple, value: v }));
            }
        }
    }
    Ok(None)
}

/// Checks the derived identities on `C^{(0)}` over generators and their `T`-translates.
pub fn check_coefficient_identities<K: Scalar, P: PseudoAlgebra<K>>(
    p: &P,
    identities: &[DiPoly<K>],
) -> Result<Option<Witness<P::Elem>>> {
    let mut gens = p.generators();
    let shifted: Vec<P::Elem> = gens.iter().map(|g| p.translate(g)).filter(|g| !p.is_zero(g)).collect();
    gens.extend(shifted);
    check_all_on(&CoefficientDialgebra(p), identities, &gens)
}

/// Both relations `Tx⊙ₙy = x⊙_{n−1}y` and `x⊙ₙTy = T(x⊙ₙy) − x⊙_{n−1}y`
/// for `0 ≤ n ≤ max_n`; returns the first failure.
pub fn check_new_c<K: Scalar, P: PseudoAlgebra<K>>(p: &P, x: &P::Elem, y: &P::Elem, max_n: usize) -> Option<String> {
    let tx = p.translate(x);
    let ty = p.translate(y);
    for n in 0..=max_n {
        let prev = if n == 0 { p.zero() } else { n_product(p, x, y, n - 1) };
        if n_product(p, &tx, y, n) != prev {
            return Some(format!("(Tx)⊙{n}y ≠ x⊙{}y", n as i64 - 1));
        }
        let rhs = p.sub(&p.translate(&n_product(p, x, y, n)), &prev);
        if n_product(p, x, &ty, n) != rhs {
            return Some(format!("x⊙{n}(Ty) ≠ T(x⊙{n}y) − x⊙{}y", n as i64 - 1));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type Q = Rational;

    #[test]
    fn hopf_axioms() {
        for k in 0..8u32 {
            // m(S ⊗ id)Δ = ηε
            let mut acc = Q::from_int(0);
            for (i, _j, c) in HopfKT::coproduct::<Q>(k) {
                acc = acc + c * HopfKT::antipode::<Q>(i);
            }
            assert_eq!(acc, HopfKT::counit::<Q>(k));
            // (ε ⊗ id)Δ = id
            let back: Q = HopfKT::coproduct::<Q>(k)
                .into_iter()
                .filter(|(i, _, _)| *i == 0)
                .map(|(_, _, c)| c * HopfKT::counit::<Q>(0))
                .sum();
            assert_eq!(back, Q::from_int(1));
            // cocommutative
            let d = HopfKT::coproduct::<Q>(k);
            for (i, j, c) in &d {
                assert!(d.iter().any(|(a, b, e)| a == j && b == i && e == c));
            }
        }
        // coassociativity: (Δ⊗id)Δ(T^k) and (id⊗Δ)Δ(T^k) have the same coefficient at T^a⊗T^b⊗T^c
        for k in 0..6u32 {
            for a in 0..=k {
                for b in 0..=k - a {
                    let lhs = binomial::<Q>(k, a + b) * binomial::<Q>(a + b, a);
                    let rhs = binomial::<Q>(k, a) * binomial::<Q>(k - a, b);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn power_of_sum_is_multinomial() {
        let p = power_of_sum::<Q>(2, 3, 3);
        assert_eq!(p[&vec![1, 2, 0]], Q::from_int(3));
        assert_eq!(p.len(), 4);
    }
}
