//! Current pseudo-algebras `Cur B = H ⊗ B` and the commutator of a pseudo-product.

use super::PseudoAlgebra;
use crate::dialgebra::{is_zero_vec, unit, vadd, vscale, vzero, Algebra};
use crate::scalar::{binomial, Scalar};

/// `n×n` matrices, row-major.
#[derive(Clone, Debug)]
pub struct MatrixAlgebra {
    pub n: usize,
}

impl MatrixAlgebra {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    /// Matrix unit `E_{ij}` (0-based).
    pub fn unit<K: Scalar>(&self, i: usize, j: usize) -> Vec<K> {
        unit(self.n * self.n, i * self.n + j)
    }

    pub fn basis<K: Scalar>(&self) -> Vec<Vec<K>> {
        (0..self.n * self.n).map(|k| unit(self.n * self.n, k)).collect()
    }

    pub fn identity<K: Scalar>(&self) -> Vec<K> {
        let mut out = vzero(self.n * self.n);
        for i in 0..self.n {
            out[i * self.n + i] = K::one();
        }
        out
    }
}

impl<K: Scalar> Algebra<K> for MatrixAlgebra {
    type Elem = Vec<K>;
    fn zero(&self) -> Vec<K> {
        vzero(self.n * self.n)
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
        let n = self.n;
        let mut out: Vec<K> = vzero(n * n);
        for i in 0..n {
            for k in 0..n {
                let x = &a[i * n + k];
                if x.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let y = &b[k * n + j];
                    if !y.is_zero() {
                        out[i * n + j] = out[i * n + j].clone() + x.clone() * y.clone();
                    }
                }
            }
        }
        out
    }
}

/// `Cur B`: `(T^i⊗a) * (T^j⊗b) = T_1^i T_2^j ⊗_H ab`.
#[derive(Clone, Debug)]
pub struct Current<B: Algebra<K>, K: Scalar> {
    pub base: B,
    pub gens: Vec<B::Elem>,
}

impl<B: Algebra<K>, K: Scalar> Current<B, K> {
    pub fn new(base: B, gens: Vec<B::Elem>) -> Self {
        Self { base, gens }
    }

    /// `1 ⊗ a`.
    pub fn constant(&self, a: &B::Elem) -> Vec<B::Elem> {
        self.trim(vec![a.clone()])
    }

    fn trim(&self, mut v: Vec<B::Elem>) -> Vec<B::Elem> {
        while v.last().is_some_and(|a| self.base.is_zero(a)) {
            v.pop();
        }
        v
    }
}

/// Adds `c·T^r w` at slot `s`, extending `z` as needed.
fn push_shifted<K: Scalar, P: PseudoAlgebra<K>>(p: &P, z: &mut Vec<P::Elem>, s: usize, c: &K, w: &P::Elem, r: u32) {
    while z.len() <= s {
        z.push(p.zero());
    }
    z[s] = p.add(&z[s], &p.scale(c, &p.translate_pow(w, r)));
}

/// `T_1^a T_2^l ⊗ w` rewritten with `T_2 = T_z − T_1`.
fn push_t2<K: Scalar, P: PseudoAlgebra<K>>(p: &P, z: &mut Vec<P::Elem>, a: usize, l: u32, w: &P::Elem) {
    for r in 0..=l {
        let sign = if (l - r).is_multiple_of(2) { K::one() } else { -K::one() };
        push_shifted(p, z, a + (l - r) as usize, &(sign * binomial::<K>(l, r)), w, r);
    }
}

impl<B: Algebra<K>, K: Scalar> PseudoAlgebra<K> for Current<B, K> {
    type Elem = Vec<B::Elem>;

    fn zero(&self) -> Vec<B::Elem> {
        Vec::new()
    }
    fn is_zero(&self, x: &Vec<B::Elem>) -> bool {
        x.iter().all(|a| self.base.is_zero(a))
    }
    fn add(&self, x: &Vec<B::Elem>, y: &Vec<B::Elem>) -> Vec<B::Elem> {
        let n = x.len().max(y.len());
        let z = self.base.zero();
        self.trim((0..n).map(|k| self.base.add(x.get(k).unwrap_or(&z), y.get(k).unwrap_or(&z))).collect())
    }
    fn scale(&self, c: &K, x: &Vec<B::Elem>) -> Vec<B::Elem> {
        self.trim(x.iter().map(|a| self.base.scale(c, a)).collect())
    }
    fn translate(&self, x: &Vec<B::Elem>) -> Vec<B::Elem> {
        if self.is_zero(x) {
            return Vec::new();
        }
        let mut out = vec![self.base.zero()];
        out.extend(x.iter().cloned());
        out
    }
    fn product(&self, x: &Vec<B::Elem>, y: &Vec<B::Elem>) -> Vec<Vec<B::Elem>> {
        let mut z = Vec::new();
        for (i, a) in x.iter().enumerate() {
            for (j, b) in y.iter().enumerate() {
                let ab = self.base.mul(a, b);
                if !self.base.is_zero(&ab) {
                    push_t2(self, &mut z, i, j as u32, &self.constant(&ab));
                }
            }
        }
        while z.last().is_some_and(|e| self.is_zero(e)) {
            z.pop();
        }
        z
    }
    fn generators(&self) -> Vec<Vec<B::Elem>> {
        self.gens.iter().map(|g| self.constant(g)).collect()
    }
}

/// `[x*y] = x*y − ((12)⊗_H id)(y*x)`.
#[derive(Clone, Debug)]
pub struct Commutator<P>(pub P);

impl<K: Scalar, P: PseudoAlgebra<K>> PseudoAlgebra<K> for Commutator<P> {
    type Elem = P::Elem;

    fn zero(&self) -> P::Elem {
        self.0.zero()
    }
    fn is_zero(&self, x: &P::Elem) -> bool {
        self.0.is_zero(x)
    }
    fn add(&self, x: &P::Elem, y: &P::Elem) -> P::Elem {
        self.0.add(x, y)
    }
    fn scale(&self, c: &K, x: &P::Elem) -> P::Elem {
        self.0.scale(c, x)
    }
    fn translate(&self, x: &P::Elem) -> P::Elem {
        self.0.translate(x)
    }
    fn product(&self, x: &P::Elem, y: &P::Elem) -> Vec<P::Elem> {
        let mut z = self.0.product(x, y);
        for (s, w) in self.0.product(y, x).iter().enumerate() {
            let mut swapped = Vec::new();
            push_t2(&self.0, &mut swapped, 0, s as u32, w);
            for (k, v) in swapped.iter().enumerate() {
                push_shifted(&self.0, &mut z, k, &-K::one(), v, 0);
            }
        }
        while z.last().is_some_and(|e| self.0.is_zero(e)) {
            z.pop();
        }
        z
    }
    fn generators(&self) -> Vec<P::Elem> {
        self.0.generators()
    }
}
