//! The functor `Ψ: Dialg_S → Alg_S ⊗ E`, its section, and the identities of
//! Var-dialgebras.

use crate::combinatorics::{sym_compose, Partition, Permutation};
use crate::error::{input_err, Error, Result};
use crate::operads::{sym_to_e, IdentitySet};
use crate::scalar::Scalar;
use crate::terms::{DiOp, DiPoly, DiShape, Monomial, MultilinearPoly, Poly, Shape, TensorMonomial, TensorPoly, Tree};

/// Image of a dialgebra monomial under `α`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlphaCenter {
    /// The monomial with labels erased.
    pub word: Monomial<()>,
    /// Permutation produced by the recursion on the shape.
    pub tau: Permutation,
    /// 0-based index of the center variable.
    pub center: usize,
}

/// `α(x) = x ⊗ id`, `α(u1⊢u2) = v1v2 ⊗ Comp(id, τ1, τ2)`,
/// `α(u1⊣u2) = v1v2 ⊗ Comp((12), τ1, τ2)` on the shape.
fn alpha_shape(shape: &DiShape) -> Permutation {
    match shape {
        Tree::Leaf => Permutation::identity(1),
        Tree::Node(op, l, r) => {
            let t1 = alpha_shape(l);
            let t2 = alpha_shape(r);
            let pi = Partition::new(vec![t1.degree(), t2.degree()]).expect("nonempty subtrees");
            let outer = match op {
                DiOp::Right => Permutation::identity(2),
                DiOp::Left => Permutation::transposition(2, 0, 1),
            };
            sym_compose(&outer, &pi, &[t1, t2]).expect("degrees match")
        }
    }
}

/// Leaf reached from the root by going right at `⊢` and left at `⊣`.
pub fn center_leaf(shape: &DiShape) -> usize {
    let mut t = shape;
    let mut offset = 0;
    loop {
        match t {
            Tree::Leaf => return offset,
            Tree::Node(DiOp::Right, l, r) => {
                offset += l.leaves();
                t = r;
            }
            Tree::Node(DiOp::Left, l, _) => t = l,
        }
    }
}

/// The center computed by the `α` recursion: leaf `nτ⁻¹`, variable `(nτ⁻¹)σ`.
pub fn alpha_center(m: &Monomial<DiOp>) -> AlphaCenter {
    let tau = alpha_shape(&m.shape);
    let leaf = sym_to_e(&tau).index;
    AlphaCenter { word: Monomial { shape: m.shape.erase(), perm: m.perm.clone() }, tau, center: m.perm.apply(leaf) }
}

pub fn psi_monomial(m: &Monomial<DiOp>) -> TensorMonomial {
    let word = Monomial { shape: m.shape.erase(), perm: m.perm.clone() };
    TensorMonomial { word, center: m.perm.apply(center_leaf(&m.shape)) }
}

pub fn psi<K: Scalar>(p: &DiPoly<K>) -> TensorPoly<K> {
    let mut out = Poly::zero(p.arity());
    for (m, c) in p.iter() {
        out.add_term(c.clone(), psi_monomial(m));
    }
    out
}

/// Labels a shape so that every dash points at leaf `center`.
pub fn direct_to(shape: &Shape, center: usize) -> DiShape {
    fn go(t: &Shape, start: usize, center: usize) -> DiShape {
        match t {
            Tree::Leaf => Tree::Leaf,
            Tree::Node(_, l, r) => {
                let split = start + l.leaves();
                let op = if center < split { DiOp::Left } else { DiOp::Right };
                Tree::node(op, go(l, start, center), go(r, split, center))
            }
        }
    }
    go(shape, 0, center)
}

/// Preimage of a basis tensor: the word with all dashes directed to the
/// leaf carrying the center variable.
pub fn psi_section_monomial(t: &TensorMonomial) -> Monomial<DiOp> {
    let leaf = t.word.perm.inverse().apply(t.center);
    Monomial { shape: direct_to(&t.word.shape, leaf), perm: t.word.perm.clone() }
}

pub fn psi_section<K: Scalar>(q: &TensorPoly<K>) -> DiPoly<K> {
    let mut out = Poly::zero(q.arity());
    for (m, c) in q.iter() {
        out.add_term(c.clone(), psi_section_monomial(m));
    }
    out
}

/// `t ⊗ e_i`.
pub fn tensor_with<K: Scalar>(t: &MultilinearPoly<K>, center: usize) -> Result<TensorPoly<K>> {
    if center >= t.arity() {
        return Err(input_err!("e_{} does not exist in arity {}", center + 1, t.arity()));
    }
    Poly::from_terms(t.arity(), t.iter().map(|(m, c)| (c.clone(), TensorMonomial { word: m.clone(), center })))
}

fn di(op: DiOp, l: DiShape, r: DiShape) -> DiShape {
    Tree::node(op, l, r)
}

/// `(x1⊣x2)⊢x3 − (x1⊢x2)⊢x3` and `x1⊣(x2⊢x3) − x1⊣(x2⊣x3)`.
pub fn zero_axioms<K: Scalar>() -> [DiPoly<K>; 2] {
    use DiOp::{Left, Right};
    let leaf = || Tree::Leaf;
    let m = |s: DiShape| Monomial::plain(s);
    let a = Poly::from_terms(
        3,
        [
            (K::one(), m(di(Right, di(Left, leaf(), leaf()), leaf()))),
            (-K::one(), m(di(Right, di(Right, leaf(), leaf()), leaf()))),
        ],
    )
    .expect("arity 3");
    let b = Poly::from_terms(
        3,
        [
            (K::one(), m(di(Left, leaf(), di(Right, leaf(), leaf())))),
            (-K::one(), m(di(Left, leaf(), di(Left, leaf(), leaf())))),
        ],
    )
    .expect("arity 3");
    [a, b]
}

/// Identities of Var-dialgebras derived from `Σ`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedVariety<K> {
    pub source: IdentitySet<K>,
    /// The two 0-dialgebra axioms followed by the preimages of `t ⊗ e_i`,
    /// in the order `t`, then `i`.
    pub identities: Vec<DiPoly<K>>,
}

impl<K: Scalar> DerivedVariety<K> {
    /// The identities that come from `Σ` (without the 0-axioms), with their sources.
    pub fn derived(&self) -> impl Iterator<Item = (&DiPoly<K>, usize, usize)> {
        let mut tags = Vec::new();
        for (ti, t) in self.source.identities.iter().enumerate() {
            for i in 0..t.arity() {
                tags.push((ti, i));
            }
        }
        self.identities[2..].iter().zip(tags).map(|(p, (t, i))| (p, t, i))
    }
}

pub fn derive_variety<K: Scalar>(sigma: &IdentitySet<K>) -> Result<DerivedVariety<K>> {
    let mut identities: Vec<DiPoly<K>> = zero_axioms().into();
    for t in &sigma.identities {
        for i in 0..t.arity() {
            identities.push(psi_section(&tensor_with(t, i)?));
        }
    }
    Ok(DerivedVariety { source: sigma.clone(), identities })
}

/// Reads off `x1⊣x2 = c·x2⊢x1` (up to renaming) from an arity-2 identity.
fn commutation_sign<K: Scalar>(p: &DiPoly<K>) -> Option<K> {
    if p.arity() != 2 || p.len() != 2 {
        return None;
    }
    let leaves = || (Tree::Leaf, Tree::Leaf);
    for flip in [Permutation::identity(2), Permutation::transposition(2, 0, 1)] {
        let (l1, r1) = leaves();
        let (l2, r2) = leaves();
        let left = Monomial { shape: di(DiOp::Left, l1, r1), perm: flip.clone() };
        let right = Monomial { shape: di(DiOp::Right, l2, r2), perm: flip.then(&Permutation::transposition(2, 0, 1)).ok()? };
        let a = p.coeff(&left);
        let b = p.coeff(&right);
        if !a.is_zero() && !b.is_zero() {
            let c = -(b / a);
            if c == K::one() || c == -K::one() {
                return Some(c);
            }
        }
    }
    None
}

/// Replaces `a⊢b` by `ab` and `a⊣b` by `c·ba`.
pub fn single_op_image<K: Scalar>(p: &DiPoly<K>, c: &K) -> MultilinearPoly<K> {
    fn go<K: Scalar>(t: &DiShape, vars: &[usize], c: &K) -> (Shape, Vec<usize>, K) {
        match t {
            Tree::Leaf => (Tree::Leaf, vars.to_vec(), K::one()),
            Tree::Node(op, l, r) => {
                let split = l.leaves();
                let (ls, lv, lc) = go(l, &vars[..split], c);
                let (rs, rv, rc) = go(r, &vars[split..], c);
                let coeff = lc * rc;
                match op {
                    DiOp::Right => (Tree::node((), ls, rs), [lv, rv].concat(), coeff),
                    DiOp::Left => (Tree::node((), rs, ls), [rv, lv].concat(), coeff * c.clone()),
                }
            }
        }
    }
    let mut out = Poly::zero(p.arity());
    for (m, k) in p.iter() {
        let (shape, vars, sign) = go(&m.shape, m.word(), c);
        let mono = Monomial::from_word(shape, vars).expect("variables are preserved");
        out.add_term(k.clone() * sign, mono);
    }
    out
}

/// Single-operation form of a derived variety that contains
/// `x1⊣x2 = ±x2⊢x1`.
pub fn rewrite_single_op<K: Scalar>(dv: &DerivedVariety<K>) -> Result<Vec<MultilinearPoly<K>>> {
    let c = dv.identities.iter().find_map(commutation_sign).ok_or_else(|| {
        Error::Precondition("no identity of the form x1-|x2 = ±x2|-x1 among the derived identities".into())
    })?;
    let mut out: Vec<MultilinearPoly<K>> = Vec::new();
    for p in &dv.identities {
        let q = single_op_image(p, &c);
        if !q.is_zero() && !out.contains(&q) {
            out.push(q);
        }
    }
    Ok(out)
}

/// Checks `Ψ(psi_section(q)) = q`; used by property tests and the CLI.
pub fn section_round_trip<K: Scalar>(q: &TensorPoly<K>) -> bool {
    psi(&psi_section(q)) == *q
}

/// `Ψ` on every derived identity reproduces its source `t ⊗ e_i`, and the
/// 0-axioms map to zero.
pub fn verify_derived<K: Scalar>(dv: &DerivedVariety<K>) -> Result<()> {
    for (k, ax) in dv.identities[..2].iter().enumerate() {
        if !psi(ax).is_zero() {
            return Err(Error::Precondition(format!("0-axiom {} does not map to zero", k + 1)));
        }
    }
    for (p, t, i) in dv.derived() {
        if psi(p) != tensor_with(&dv.source.identities[t], i)? {
            return Err(Error::Precondition(format!("identity {} ⊗ e{} does not round trip", t + 1, i + 1)));
        }
    }
    Ok(())
}

impl TensorMonomial {
    /// Arity-`n` tensor basis in canonical order.
    pub fn all(n: usize) -> Vec<TensorMonomial> {
        let mut out = Vec::new();
        for w in crate::terms::all_monomials(n) {
            for c in 0..n {
                out.push(TensorMonomial { word: w.clone(), center: c });
            }
        }
        out
    }
}

impl<K: Scalar> DerivedVariety<K> {
    pub fn arity_bound(&self) -> usize {
        self.identities.iter().map(|p| p.arity()).max().unwrap_or(0)
    }
}

/// Monomials of `Dialg_S(n)` all of whose dashes point to one leaf.
pub fn is_directed(m: &Monomial<DiOp>) -> bool {
    direct_to(&m.shape.erase(), center_leaf(&m.shape)) == m.shape
}

/// `Ψ` commutes with the right `S_n` action.
pub fn psi_equivariant<K: Scalar>(p: &DiPoly<K>, sigma: &Permutation) -> Result<bool> {
    Ok(psi(&p.act(sigma)?) == psi(p).act(sigma)?)
}

/// Counts and first failure of [`psi_suite`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiSuiteReport {
    pub samples: usize,
    pub failure: Option<String>,
}

impl PsiSuiteReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

fn random_dimonomial<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Monomial<DiOp> {
    Monomial { shape: Shape::random(n, rng).random_labeling(rng), perm: Permutation::random(n, rng) }
}

/// On `samples` random monomials of arity at most `max_arity`: `Ψ` commutes
/// with composition and with the `S_n` action, `Ψ(section(Ψ(u))) = Ψ(u)`,
/// the section is directed, and the center rule agrees with the `α` recursion.
pub fn psi_suite(samples: usize, max_arity: usize, seed: u64) -> PsiSuiteReport {
    use crate::operads::{compose_monomial, compose_tensor};
    use crate::terms::Term;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let top = max_arity.max(1);
    let fail = |k: usize, msg: String| PsiSuiteReport { samples: k, failure: Some(msg) };
    for k in 0..samples {
        let m = rng.random_range(1..=top);
        let n = rng.random_range(1..=m);
        let pi = Partition::random(m, n, &mut rng);
        let f = random_dimonomial(n, &mut rng);
        let gs: Vec<Monomial<DiOp>> = (0..n).map(|i| random_dimonomial(pi.part(i), &mut rng)).collect();
        let u = compose_monomial(&f, &pi, &gs).expect("arities match");
        let images: Vec<TensorMonomial> = gs.iter().map(psi_monomial).collect();
        let lhs = psi_monomial(&u);
        let rhs = compose_tensor(&psi_monomial(&f), &pi, &images).expect("arities match");
        if lhs != rhs {
            return fail(k, format!("composition: Ψ({u}) = {lhs:?}, composite of images = {rhs:?}"));
        }
        let s = Permutation::random(m, &mut rng);
        let acted = psi_monomial(&Term::act(&u, &s));
        if acted != Term::act(&lhs, &s) {
            return fail(k, format!("equivariance: {u} under {s}"));
        }
        let pre = psi_section_monomial(&lhs);
        if psi_monomial(&pre) != lhs || !is_directed(&pre) {
            return fail(k, format!("section: {u} lifts to {pre}"));
        }
        if alpha_center(&u).center != lhs.center {
            return fail(k, format!("center: rule and recursion differ on {u}"));
        }
    }
    PsiSuiteReport { samples, failure: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operads::{compose_monomial, compose_tensor, multilinear_consequences};
    use crate::terms::Term;
    use crate::Rational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type Q = Rational;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    fn leaf<L>() -> Tree<L> {
        Tree::Leaf
    }

    fn perm(one_line: &[usize]) -> Permutation {
        Permutation::from_one_line(one_line).unwrap()
    }

    fn random_dimonomial(n: usize, rng: &mut ChaCha8Rng) -> Monomial<DiOp> {
        Monomial { shape: Shape::random(n, rng).random_labeling(rng), perm: Permutation::random(n, rng) }
    }

    fn word(shape: Shape, one_line: &[usize]) -> Monomial<()> {
        Monomial::new(shape, perm(one_line)).unwrap()
    }

    fn l3() -> Shape {
        Shape::left_comb(3)
    }

    fn r3() -> Shape {
        Shape::right_comb(3)
    }

    fn assoc_t() -> MultilinearPoly<Q> {
        Poly::from_terms(3, [(q(1), word(l3(), &[1, 2, 3])), (q(-1), word(r3(), &[1, 2, 3]))]).unwrap()
    }

    fn comm_t() -> MultilinearPoly<Q> {
        let s = Shape::left_comb(2);
        Poly::from_terms(2, [(q(1), word(s.clone(), &[1, 2])), (q(-1), word(s, &[2, 1]))]).unwrap()
    }

    fn lie() -> IdentitySet<Q> {
        let s = Shape::left_comb(2);
        let anti = Poly::from_terms(2, [(q(1), word(s.clone(), &[1, 2])), (q(1), word(s, &[2, 1]))]).unwrap();
        let t = Poly::from_terms(
            3,
            [(q(1), word(r3(), &[1, 2, 3])), (q(-1), word(l3(), &[1, 2, 3])), (q(-1), word(r3(), &[2, 1, 3]))],
        )
        .unwrap();
        IdentitySet::new("lie", vec![t, anti]).unwrap()
    }

    fn show(p: &DiPoly<Q>) -> String {
        p.to_string()
    }

    #[test]
    fn alpha_examples() {
        let m = Monomial::plain(di(DiOp::Left, leaf(), leaf()));
        let a = alpha_center(&m);
        assert_eq!(a.tau, perm(&[2, 1]));
        assert_eq!(a.center, 0);
        let m = Monomial::plain(di(DiOp::Left, di(DiOp::Right, leaf(), leaf()), leaf()));
        let a = alpha_center(&m);
        assert_eq!(a.tau, perm(&[2, 3, 1]));
        assert_eq!(a.center, 1);
        assert_eq!(a.word.shape, l3());
        let m = Monomial::plain(di(DiOp::Right, di(DiOp::Right, leaf(), leaf()), leaf()));
        let a = alpha_center(&m);
        assert!(a.tau.is_identity());
        assert_eq!(a.center, 2);
    }

    #[test]
    fn psi_examples() {
        let m = Monomial::plain(di(DiOp::Left, di(DiOp::Right, leaf(), leaf()), leaf()));
        assert_eq!(psi_monomial(&m), TensorMonomial::new(Monomial::plain(l3()), 1).unwrap());
        let m = Monomial::plain(di(DiOp::Left, leaf(), leaf()));
        assert_eq!(psi_monomial(&m).center, 0);
        let m = Monomial::new(di(DiOp::Right, leaf(), leaf()), perm(&[2, 1])).unwrap();
        let t = psi_monomial(&m);
        assert_eq!(t.word, word(Shape::left_comb(2), &[2, 1]));
        assert_eq!(t.center, 0);
    }

    #[test]
    fn section_examples() {
        let assoc = assoc_t();
        let e1 = psi_section(&tensor_with(&assoc, 0).unwrap());
        assert_eq!(show(&e1), "-x1-|(x2-|x3) + (x1-|x2)-|x3");
        let e2 = psi_section(&tensor_with(&assoc, 1).unwrap());
        assert_eq!(show(&e2), "-x1|-(x2-|x3) + (x1|-x2)-|x3");
        let e3 = psi_section(&tensor_with(&assoc, 2).unwrap());
        assert_eq!(show(&e3), "-x1|-(x2|-x3) + (x1|-x2)|-x3");

        let t = TensorMonomial::new(word(Shape::left_comb(2), &[2, 1]), 0).unwrap();
        assert_eq!(psi_section_monomial(&t).to_string(), "x2|-x1");
    }

    #[test]
    fn derived_associative_and_commutative() {
        let dv = derive_variety(&IdentitySet::new("assoc", vec![assoc_t()]).unwrap()).unwrap();
        assert_eq!(dv.identities.len(), 5);
        verify_derived(&dv).unwrap();
        let dc = derive_variety(&IdentitySet::new("comm", vec![assoc_t(), comm_t()]).unwrap()).unwrap();
        let shown: Vec<String> = dc.identities.iter().map(|p| p.to_string()).collect();
        // x1|-x2 - x2-|x1, written in canonical order
        assert!(shown.contains(&"x1|-x2 - x2-|x1".to_string()), "{shown:?}");
    }

    #[test]
    fn derived_lie() {
        let dv = derive_variety(&lie()).unwrap();
        verify_derived(&dv).unwrap();
        let target = "x1-|x2 + x2|-x1";
        let alt = "x2|-x1 + x1-|x2";
        assert!(dv.identities.iter().any(|p| p.to_string() == target || p.to_string() == alt));
    }

    #[test]
    fn single_op_lie_gives_leibniz() {
        let dv = derive_variety(&lie()).unwrap();
        let out = rewrite_single_op(&dv).unwrap();
        // x1(x2x3) - (x1x2)x3 - x2(x1x3)
        let leibniz: MultilinearPoly<Q> = Poly::from_terms(
            3,
            [(q(1), word(r3(), &[1, 2, 3])), (q(-1), word(l3(), &[1, 2, 3])), (q(-1), word(r3(), &[2, 1, 3]))],
        )
        .unwrap();
        assert!(out.contains(&leibniz), "{out:?}");
    }

    #[test]
    fn single_op_commutative_span() {
        let dv = derive_variety(&IdentitySet::new("comm", vec![assoc_t(), comm_t()]).unwrap()).unwrap();
        let out = rewrite_single_op(&dv).unwrap();
        let got = IdentitySet::new("rewritten", out).unwrap();
        // [x1,x2]x3
        let bracket: MultilinearPoly<Q> =
            Poly::from_terms(3, [(q(1), word(l3(), &[1, 2, 3])), (q(-1), word(l3(), &[2, 1, 3]))]).unwrap();
        let expected = IdentitySet::new("perm", vec![assoc_t(), bracket]).unwrap();
        for n in 3..=4 {
            assert!(multilinear_consequences(&got, n).unwrap().same_span(&multilinear_consequences(&expected, n).unwrap()));
        }
    }

    #[test]
    fn rewrite_needs_commutation() {
        let dv = derive_variety(&IdentitySet::new("assoc", vec![assoc_t()]).unwrap()).unwrap();
        assert!(matches!(rewrite_single_op(&dv), Err(Error::Precondition(_))));
    }

    #[test]
    fn suite_passes() {
        let r = psi_suite(300, 7, 11);
        assert!(r.passed(), "{:?}", r.failure);
    }

    #[test]
    fn functorial() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let m = rng.random_range(1..=7);
            let n = rng.random_range(1..=m);
            let pi = Partition::random(m, n, &mut rng);
            let f = random_dimonomial(n, &mut rng);
            let gs: Vec<Monomial<DiOp>> = (0..n).map(|i| random_dimonomial(pi.part(i), &mut rng)).collect();
            let lhs = psi_monomial(&compose_monomial(&f, &pi, &gs).unwrap());
            let images: Vec<TensorMonomial> = gs.iter().map(psi_monomial).collect();
            let rhs = compose_tensor(&psi_monomial(&f), &pi, &images).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn recursion_agrees_with_descent() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..500 {
            let n = rng.random_range(1..=8);
            let m = random_dimonomial(n, &mut rng);
            assert_eq!(alpha_center(&m).center, psi_monomial(&m).center);
            let s = Permutation::random(n, &mut rng);
            assert_eq!(psi_monomial(&m.act(&s)), psi_monomial(&m).act(&s));
        }
    }

    #[test]
    fn section_is_full() {
        for n in 1..=5 {
            for t in TensorMonomial::all(n) {
                let pre = psi_section_monomial(&t);
                assert_eq!(psi_monomial(&pre), t);
                assert!(is_directed(&pre));
            }
        }
    }

    #[test]
    fn kernel_of_psi_contains_axioms() {
        for ax in zero_axioms::<Q>() {
            assert!(psi(&ax).is_zero());
        }
    }

    #[test]
    fn rejects_out_of_range_center() {
        assert!(tensor_with(&assoc_t(), 3).is_err());
    }
}
