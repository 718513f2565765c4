//! Ordered partitions, permutations and the symmetric-group operad.
//!
//! Permutations act on the right: `i ↦ iσ`. They are stored as 0-based
//! one-line arrays, and the product `στ` is `i ↦ (iσ)τ`. Public
//! constructors that mirror the usual mathematical notation
//! ([`Permutation::from_one_line`], [`Permutation::from_cycles`],
//! [`Partition::pair_to_index`]) are 1-based.

use std::fmt;

use rand::Rng;

use crate::error::{input_err, Result};

/// A bijection of `{0, …, n-1}` acting on the right.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from 0-based images.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(input_err!("permutation of degree 0"));
        }
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(input_err!("{images:?} is not a bijection of 0..{n}"));
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    /// Builds a permutation from its 1-based one-line notation.
    pub fn from_one_line(one_line: &[usize]) -> Result<Self> {
        if one_line.contains(&0) {
            return Err(input_err!("one-line notation is 1-based, got {one_line:?}"));
        }
        Self::new(one_line.iter().map(|i| i - 1).collect())
    }

    /// Builds a permutation of degree `n` from disjoint 1-based cycles;
    /// `[1, 2, 3]` is the cycle `1 → 2 → 3 → 1`.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (pos, &i) in cycle.iter().enumerate() {
                if i == 0 || i > n {
                    return Err(input_err!("cycle entry {i} out of range 1..={n}"));
                }
                if touched[i - 1] {
                    return Err(input_err!("cycles are not disjoint"));
                }
                touched[i - 1] = true;
                let next = cycle[(pos + 1) % cycle.len()];
                if next == 0 || next > n {
                    return Err(input_err!("cycle entry {next} out of range 1..={n}"));
                }
                images[i - 1] = next - 1;
            }
        }
        Self::new(images)
    }

    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    /// The transposition of two 0-based points.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(a, b);
        p
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// `iσ` for a 0-based point `i`.
    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// 0-based images.
    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// 1-based one-line notation.
    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|i| i + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Self { images: inv }
    }

    /// The product `self · other`: first `self`, then `other`.
    pub fn then(&self, other: &Permutation) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(input_err!(
                "cannot multiply permutations of degrees {} and {}",
                self.degree(),
                other.degree()
            ));
        }
        Ok(Self { images: self.images.iter().map(|&i| other.images[i]).collect() })
    }

    /// All permutations of degree `n` in lexicographic order of one-line notation.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        loop {
            out.push(Self { images: current.clone() });
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
            current.swap(i, j);
            current[i + 1..].reverse();
        }
        out
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.random_range(0..=i);
            images.swap(i, j);
        }
        Self { images }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.one_line())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_line().iter().map(|i| i.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// An ordered tuple of positive integers `(m_1, …, m_n)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Partition {
    parts: Vec<usize>,
    offsets: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(input_err!("a partition needs at least one part"));
        }
        if parts.contains(&0) {
            return Err(input_err!("partition parts must be positive, got {parts:?}"));
        }
        let mut offsets = Vec::with_capacity(parts.len());
        let mut acc = 0;
        for &m in &parts {
            offsets.push(acc);
            acc += m;
        }
        Ok(Self { parts, offsets })
    }

    /// `(1, …, 1)` with `n` parts.
    pub fn ones(n: usize) -> Self {
        Self::new(vec![1; n]).expect("n >= 1")
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of parts `n`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Sum of the parts `m`.
    pub fn total(&self) -> usize {
        self.offsets.last().unwrap() + self.parts.last().unwrap()
    }

    pub fn part(&self, i: usize) -> usize {
        self.parts[i]
    }

    /// `m_1 + … + m_i` for a 0-based block `i`.
    #[inline]
    pub fn offset(&self, i: usize) -> usize {
        self.offsets[i]
    }

    /// `(i, j)^π = m_1 + … + m_{i-1} + j`, all 1-based.
    pub fn pair_to_index(&self, i: usize, j: usize) -> Result<usize> {
        if i == 0 || i > self.len() || j == 0 || j > self.parts[i - 1] {
            return Err(input_err!("pair ({i},{j}) out of range for {:?}", self.parts));
        }
        Ok(self.offsets[i - 1] + j)
    }

    /// Inverse of [`Partition::pair_to_index`], 1-based.
    pub fn index_to_pair(&self, k: usize) -> Result<(usize, usize)> {
        if k == 0 || k > self.total() {
            return Err(input_err!("index {k} out of range for {:?}", self.parts));
        }
        let (i, j) = self.locate(k - 1);
        Ok((i + 1, j + 1))
    }

    /// 0-based block and offset of a 0-based position.
    pub fn locate(&self, k: usize) -> (usize, usize) {
        let i = match self.offsets.binary_search(&k) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        (i, k - self.offsets[i])
    }

    /// `πσ = (m_{1σ⁻¹}, …, m_{nσ⁻¹})`.
    pub fn act(&self, sigma: &Permutation) -> Result<Partition> {
        if sigma.degree() != self.len() {
            return Err(input_err!(
                "permutation of degree {} acting on a partition with {} parts",
                sigma.degree(),
                self.len()
            ));
        }
        let mut parts = vec![0; self.len()];
        for (i, &m) in self.parts.iter().enumerate() {
            parts[sigma.apply(i)] = m;
        }
        Partition::new(parts)
    }

    /// `τπ` together with the subpartitions `τπ_i`, for `τ ∈ Π(p, m)` and
    /// `self = π ∈ Π(m, n)`.
    pub fn compose(tau: &Partition, pi: &Partition) -> Result<(Partition, Vec<Partition>)> {
        if tau.len() != pi.total() {
            return Err(input_err!(
                "partition {:?} has {} parts but {:?} sums to {}",
                tau.parts,
                tau.len(),
                pi.parts,
                pi.total()
            ));
        }
        let mut grouped = Vec::with_capacity(pi.len());
        let mut subs = Vec::with_capacity(pi.len());
        for i in 0..pi.len() {
            let block = &tau.parts[pi.offset(i)..pi.offset(i) + pi.part(i)];
            grouped.push(block.iter().sum());
            subs.push(Partition::new(block.to_vec())?);
        }
        Ok((Partition::new(grouped)?, subs))
    }

    /// All ordered partitions of `m` into `n` positive parts.
    pub fn all(m: usize, n: usize) -> Vec<Partition> {
        fn rec(m: usize, n: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if n == 1 {
                if m >= 1 {
                    prefix.push(m);
                    out.push(Partition::new(prefix.clone()).unwrap());
                    prefix.pop();
                }
                return;
            }
            for first in 1..=m.saturating_sub(n - 1) {
                prefix.push(first);
                rec(m - first, n - 1, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n >= 1 && m >= n {
            rec(m, n, &mut Vec::new(), &mut out);
        }
        out
    }

    /// A uniformly random composition of `m` into `n` parts.
    pub fn random<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Partition {
        assert!(n >= 1 && m >= n);
        // choose n-1 distinct cut points among 1..m
        let mut cuts: Vec<usize> = (1..m).collect();
        for i in 0..n - 1 {
            let j = rng.random_range(i..cuts.len());
            cuts.swap(i, j);
        }
        let mut chosen: Vec<usize> = cuts[..n - 1].to_vec();
        chosen.sort_unstable();
        let mut parts = Vec::with_capacity(n);
        let mut last = 0;
        for c in chosen.into_iter().chain(std::iter::once(m)) {
            parts.push(c - last);
            last = c;
        }
        Partition::new(parts).unwrap()
    }
}

/// Operad composition in `Sym`: `kΣ = (iσ, jτ_i)^{πσ}` for `k = (i, j)^π`.
pub fn sym_compose(sigma: &Permutation, pi: &Partition, taus: &[Permutation]) -> Result<Permutation> {
    if sigma.degree() != pi.len() || taus.len() != pi.len() {
        return Err(input_err!(
            "Sym composition arity mismatch: σ of degree {}, {} parts, {} inner permutations",
            sigma.degree(),
            pi.len(),
            taus.len()
        ));
    }
    for (i, tau) in taus.iter().enumerate() {
        if tau.degree() != pi.part(i) {
            return Err(input_err!(
                "inner permutation {i} has degree {} but block has size {}",
                tau.degree(),
                pi.part(i)
            ));
        }
    }
    let target = pi.act(sigma)?;
    let mut images = Vec::with_capacity(pi.total());
    for (i, tau) in taus.iter().enumerate() {
        for j in 0..pi.part(i) {
            images.push(target.offset(sigma.apply(i)) + tau.apply(j));
        }
    }
    Permutation::new(images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn cyc(n: usize, c: &[usize]) -> Permutation {
        Permutation::from_cycles(n, &[c.to_vec()]).unwrap()
    }

    #[test]
    fn pair_index_examples() {
        let pi = p(&[3, 2, 4]);
        assert_eq!(pi.pair_to_index(1, 3).unwrap(), 3);
        assert_eq!(pi.pair_to_index(2, 2).unwrap(), 5);
        assert_eq!(pi.pair_to_index(3, 4).unwrap(), 9);
        assert!(pi.pair_to_index(2, 3).is_err());
        assert!(pi.pair_to_index(0, 1).is_err());
        assert!(pi.pair_to_index(4, 1).is_err());
        for k in 1..=9 {
            let (i, j) = pi.index_to_pair(k).unwrap();
            assert_eq!(pi.pair_to_index(i, j).unwrap(), k);
        }
        assert!(pi.index_to_pair(10).is_err());
    }

    #[test]
    fn partition_composition_examples() {
        let (tp, subs) = Partition::compose(&p(&[1, 2, 1, 1, 2]), &p(&[2, 3])).unwrap();
        assert_eq!(tp, p(&[3, 4]));
        assert_eq!(subs, vec![p(&[1, 2]), p(&[1, 1, 2])]);

        let (tp, subs) = Partition::compose(&p(&[2, 3, 4]), &p(&[1, 1, 1])).unwrap();
        assert_eq!(tp, p(&[2, 3, 4]));
        assert_eq!(subs, vec![p(&[2]), p(&[3]), p(&[4])]);

        let (tp, subs) = Partition::compose(&p(&[1, 1, 1, 1]), &p(&[4])).unwrap();
        assert_eq!(tp, p(&[4]));
        assert_eq!(subs, vec![p(&[1, 1, 1, 1])]);

        assert!(Partition::compose(&p(&[1, 1]), &p(&[3])).is_err());
    }

    #[test]
    fn partition_action_examples() {
        let pi = p(&[3, 2, 4]);
        assert_eq!(pi.act(&cyc(3, &[1, 2, 3])).unwrap(), p(&[4, 3, 2]));
        assert_eq!(pi.act(&Permutation::identity(3)).unwrap(), pi);
        assert_eq!(pi.act(&cyc(3, &[1, 2])).unwrap(), p(&[2, 3, 4]));
        assert!(pi.act(&Permutation::identity(2)).is_err());
    }

    #[test]
    fn sym_compose_worked_example() {
        let sigma = cyc(3, &[1, 2, 3]);
        let taus = [cyc(3, &[1, 3, 2]), cyc(2, &[1, 2]), cyc(4, &[2, 3, 4])];
        let out = sym_compose(&sigma, &p(&[3, 2, 4]), &taus).unwrap();
        assert_eq!(out.one_line(), vec![7, 5, 6, 9, 8, 1, 3, 4, 2]);
    }

    #[test]
    fn sym_compose_small_cases() {
        let sigma = Permutation::from_one_line(&[3, 1, 2]).unwrap();
        let ids = vec![Permutation::identity(1); 3];
        assert_eq!(sym_compose(&sigma, &Partition::ones(3), &ids).unwrap(), sigma);

        let out = sym_compose(
            &cyc(2, &[1, 2]),
            &p(&[2, 1]),
            &[Permutation::identity(2), Permutation::identity(1)],
        )
        .unwrap();
        assert_eq!(out.one_line(), vec![2, 3, 1]);

        assert!(sym_compose(&sigma, &p(&[1, 1]), &ids[..2]).is_err());
        assert!(sym_compose(&cyc(2, &[1, 2]), &p(&[2, 1]), &ids[..2]).is_err());
    }

    #[test]
    fn permutation_basics() {
        assert!(Permutation::from_one_line(&[1, 1]).is_err());
        assert!(Permutation::new(vec![]).is_err());
        let s = Permutation::from_one_line(&[2, 3, 1]).unwrap();
        assert!(s.then(&s.inverse()).unwrap().is_identity());
        assert_eq!(Permutation::all(4).len(), 24);
        assert_eq!(Permutation::all(1).len(), 1);
        let all3 = Permutation::all(3);
        let mut sorted = all3.clone();
        sorted.sort();
        assert_eq!(all3, sorted);
        assert_eq!(Partition::all(5, 3).len(), 6);
        assert_eq!(format!("{s}"), "[2,3,1]");
    }

    #[test]
    fn random_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.random_range(1..=6);
            let m = rng.random_range(n..=9);
            let pi = Partition::random(m, n, &mut rng);
            assert_eq!(pi.total(), m);
            assert_eq!(pi.len(), n);
            for k in 0..m {
                let (i, j) = pi.locate(k);
                assert_eq!(pi.offset(i) + j, k);
            }
            let s = Permutation::random(n, &mut rng);
            let r = Permutation::random(n, &mut rng);
            // (πσ)ρ = π(σρ)
            assert_eq!(
                pi.act(&s).unwrap().act(&r).unwrap(),
                pi.act(&s.then(&r).unwrap()).unwrap()
            );
        }
    }
}
