//! The operads `Sym`, `E`, `Alg_S`, `Dialg_S` and their tensor products.
//!
//! Composition follows the partition convention: for `f ∈ P(n)`,
//! `π = (m_1, …, m_n)` and `g_i ∈ P(m_i)`, `Comp^π(f, g_1, …, g_n) ∈ P(m)`
//! with `m = m_1 + … + m_n`. Symmetric groups act on the right.

use std::fmt;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{sym_compose, Partition, Permutation};
use crate::error::{input_err, Error, Result};
use crate::linalg::SparseEchelon;
use crate::scalar::Scalar;
use crate::terms::{DiOp, Label, Monomial, MultilinearPoly, Poly, Shape, TensorMonomial, Term, Tree};
use crate::{Rational, RationalDiPoly, RationalPoly};

/// Basis vector `e_i^{(n)}` of `E(n) = k^n` (0-based `index`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct EBasis {
    pub arity: usize,
    pub index: usize,
}

impl EBasis {
    pub fn new(arity: usize, index: usize) -> Result<Self> {
        if index >= arity {
            return Err(input_err!("e_{} does not exist in E({arity})", index + 1));
        }
        Ok(Self { arity, index })
    }

    /// `Comp^π(e_i, e_{j_1}, …, e_{j_n}) = e_{m_1+…+m_{i-1}+j_i}`.
    pub fn compose(&self, pi: &Partition, gs: &[EBasis]) -> Result<EBasis> {
        check_parts(self.arity, pi, gs.iter().map(|g| g.arity))?;
        Ok(EBasis { arity: pi.total(), index: pi.offset(self.index) + gs[self.index].index })
    }

    /// `e_i^σ = e_{iσ}`.
    pub fn act(&self, sigma: &Permutation) -> Result<EBasis> {
        if sigma.degree() != self.arity {
            return Err(input_err!("permutation of degree {} acting on E({})", sigma.degree(), self.arity));
        }
        Ok(EBasis { arity: self.arity, index: sigma.apply(self.index) })
    }
}

impl fmt::Display for EBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}^({})", self.index + 1, self.arity)
    }
}

/// The morphism `Sym → E`, `σ ↦ e_{nσ⁻¹}`.
pub fn sym_to_e(sigma: &Permutation) -> EBasis {
    let n = sigma.degree();
    EBasis { arity: n, index: sigma.inverse().apply(n - 1) }
}

fn check_parts(n: usize, pi: &Partition, arities: impl ExactSizeIterator<Item = usize>) -> Result<()> {
    if pi.len() != n || arities.len() != n {
        return Err(input_err!(
            "composition of an arity {n} element with partition {:?} and {} inputs",
            pi.parts(),
            arities.len()
        ));
    }
    for (i, a) in arities.enumerate() {
        if a != pi.part(i) {
            return Err(input_err!("input {} has arity {a} but the partition asks for {}", i + 1, pi.part(i)));
        }
    }
    Ok(())
}

/// Composition of monomials in `Alg_S` (or `Dialg_S`):
/// `Comp^π(u⊗σ, v_i⊗τ_i) = Comp^{πσ⁻¹}(u, v_{1σ}, …) ⊗ Comp^{πσ⁻¹}(σ, τ_{1σ}, …)`.
pub fn compose_monomial<L: Label>(f: &Monomial<L>, pi: &Partition, gs: &[Monomial<L>]) -> Result<Monomial<L>> {
    check_parts(f.arity(), pi, gs.iter().map(|g| g.arity()))?;
    let sigma = &f.perm;
    let shifted = pi.act(&sigma.inverse())?;
    let order: Vec<&Monomial<L>> = (0..f.arity()).map(|k| &gs[sigma.apply(k)]).collect();
    let shapes: Vec<Tree<L>> = order.iter().map(|g| g.shape.clone()).collect();
    let taus: Vec<Permutation> = order.iter().map(|g| g.perm.clone()).collect();
    let perm = sym_compose(sigma, &shifted, &taus)?;
    Ok(Monomial { shape: f.shape.graft(&shapes), perm })
}

/// Multilinear extension of [`compose_monomial`].
pub fn compose_poly<L: Label, K: Scalar>(
    f: &Poly<Monomial<L>, K>,
    pi: &Partition,
    gs: &[Poly<Monomial<L>, K>],
) -> Result<Poly<Monomial<L>, K>> {
    check_parts(f.arity(), pi, gs.iter().map(|g| g.arity()))?;
    let mut out = Poly::zero(pi.total());
    // iterate over all choices of one term per input
    let lists: Vec<Vec<(&Monomial<L>, &K)>> = gs.iter().map(|g| g.iter().collect()).collect();
    if lists.iter().any(|l| l.is_empty()) {
        return Ok(out);
    }
    for (fm, fc) in f.iter() {
        let mut idx = vec![0usize; lists.len()];
        loop {
            let mut c = fc.clone();
            let mut ms = Vec::with_capacity(lists.len());
            for (l, &i) in lists.iter().zip(&idx) {
                c = c * l[i].1.clone();
                ms.push(l[i].0.clone());
            }
            out.add_term(c, compose_monomial(fm, pi, &ms)?);
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < lists[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == idx.len() {
                break;
            }
        }
    }
    Ok(out)
}

/// Composition in `Alg_S ⊗ E` on basis tensors.
pub fn compose_tensor(f: &TensorMonomial, pi: &Partition, gs: &[TensorMonomial]) -> Result<TensorMonomial> {
    let words: Vec<Monomial<()>> = gs.iter().map(|g| g.word.clone()).collect();
    let word = compose_monomial(&f.word, pi, &words)?;
    let center = pi.offset(f.center) + gs[f.center].center;
    Ok(TensorMonomial { word, center })
}

/// A symmetric operad with a chosen element representation.
pub trait Operad {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn name(&self) -> String;
    fn arity(&self, f: &Self::Elem) -> usize;
    fn unit(&self) -> Self::Elem;
    fn compose(&self, f: &Self::Elem, pi: &Partition, gs: &[Self::Elem]) -> Result<Self::Elem>;
    fn act(&self, f: &Self::Elem, sigma: &Permutation) -> Result<Self::Elem>;
    /// A random element of arity `n`.
    fn sample(&self, n: usize, rng: &mut dyn RngCore) -> Self::Elem;
}

/// `Sym(n) = S_n`. The action is `φ^σ = σ⁻¹φ` in the left-to-right product,
/// the right action compatible with `kΣ = (iσ, jτ_i)^{πσ}`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SymOperad;

impl Operad for SymOperad {
    type Elem = Permutation;
    fn name(&self) -> String {
        "Sym".into()
    }
    fn arity(&self, f: &Permutation) -> usize {
        f.degree()
    }
    fn unit(&self) -> Permutation {
        Permutation::identity(1)
    }
    fn compose(&self, f: &Permutation, pi: &Partition, gs: &[Permutation]) -> Result<Permutation> {
        sym_compose(f, pi, gs)
    }
    fn act(&self, f: &Permutation, sigma: &Permutation) -> Result<Permutation> {
        sigma.inverse().then(f)
    }
    fn sample(&self, n: usize, rng: &mut dyn RngCore) -> Permutation {
        Permutation::random(n, rng)
    }
}

/// `Sym` with a composition that ignores unit inputs incorrectly: whenever
/// every input is the unit the outer permutation is reversed. Used to make
/// sure the law checker detects faults.
#[derive(Clone, Copy, Debug, Default)]
pub struct MutatedSym;

impl Operad for MutatedSym {
    type Elem = Permutation;
    fn name(&self) -> String {
        "Sym (broken unit)".into()
    }
    fn arity(&self, f: &Permutation) -> usize {
        f.degree()
    }
    fn unit(&self) -> Permutation {
        Permutation::identity(1)
    }
    fn compose(&self, f: &Permutation, pi: &Partition, gs: &[Permutation]) -> Result<Permutation> {
        if gs.iter().all(|g| g.degree() == 1) {
            let n = f.degree();
            let rev = Permutation::new((0..n).rev().collect())?;
            return f.then(&rev);
        }
        sym_compose(f, pi, gs)
    }
    fn act(&self, f: &Permutation, sigma: &Permutation) -> Result<Permutation> {
        sigma.inverse().then(f)
    }
    fn sample(&self, n: usize, rng: &mut dyn RngCore) -> Permutation {
        Permutation::random(n, rng)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EOperad;

impl Operad for EOperad {
    type Elem = EBasis;
    fn name(&self) -> String {
        "E".into()
    }
    fn arity(&self, f: &EBasis) -> usize {
        f.arity
    }
    fn unit(&self) -> EBasis {
        EBasis { arity: 1, index: 0 }
    }
    fn compose(&self, f: &EBasis, pi: &Partition, gs: &[EBasis]) -> Result<EBasis> {
        f.compose(pi, gs)
    }
    fn act(&self, f: &EBasis, sigma: &Permutation) -> Result<EBasis> {
        f.act(sigma)
    }
    fn sample(&self, n: usize, rng: &mut dyn RngCore) -> EBasis {
        EBasis { arity: n, index: rng.random_range(0..n) }
    }
}

/// `Alg_S` (labels `()`) or `Dialg_S` (labels [`DiOp`]) with coefficients in `K`.
#[derive(Clone, Copy, Debug, Default)]
pub struct WordOperad<L, K> {
    _marker: std::marker::PhantomData<(L, K)>,
}

pub type AlgS<K> = WordOperad<(), K>;
pub type DialgS<K> = WordOperad<DiOp, K>;

impl<L, K> WordOperad<L, K> {
    pub fn new() -> Self {
        Self { _marker: std::marker::PhantomData }
    }
}

/// Trees with random labels; implemented for both label types.
pub trait RandomLabel: Label {
    fn label_tree(shape: &Shape, rng: &mut dyn RngCore) -> Tree<Self>;
    fn operad_name() -> &'static str;
}

impl RandomLabel for () {
    fn label_tree(shape: &Shape, _rng: &mut dyn RngCore) -> Shape {
        shape.clone()
    }
    fn operad_name() -> &'static str {
        "Alg_S"
    }
}

impl RandomLabel for DiOp {
    fn label_tree(shape: &Shape, rng: &mut dyn RngCore) -> Tree<DiOp> {
        shape.random_labeling(rng)
    }
    fn operad_name() -> &'static str {
        "Dialg_S"
    }
}

impl<L: RandomLabel, K: Scalar> Operad for WordOperad<L, K> {
    type Elem = Poly<Monomial<L>, K>;
    fn name(&self) -> String {
        L::operad_name().into()
    }
    fn arity(&self, f: &Self::Elem) -> usize {
        f.arity()
    }
    fn unit(&self) -> Self::Elem {
        Poly::monomial(Monomial::plain(Tree::Leaf))
    }
    fn compose(&self, f: &Self::Elem, pi: &Partition, gs: &[Self::Elem]) -> Result<Self::Elem> {
        compose_poly(f, pi, gs)
    }
    fn act(&self, f: &Self::Elem, sigma: &Permutation) -> Result<Self::Elem> {
        f.act(sigma)
    }
    fn sample(&self, n: usize, rng: &mut dyn RngCore) -> Self::Elem {
        let terms = rng.random_range(1..=3);
        let mut p = Poly::zero(n);
        for _ in 0..terms {
            let shape = Shape::random(n, rng);
            let m = Monomial { shape: L::label_tree(&shape, rng), perm: Permutation::random(n, rng) };
            p.add_term(K::from_int(rng.random_range(-3..=3)), m);
        }
        if p.is_zero() {
            p.add_term(K::one(), Monomial::plain(L::label_tree(&Shape::random(n, rng), rng)));
        }
        p
    }
}

/// Names of the operads available at run time.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OperadId {
    Sym,
    E,
    AlgS,
    DialgS,
    Tensor(Vec<OperadId>),
}

/// Element of the operad named by an [`OperadId`]; `Alg_S`/`Dialg_S` use
/// rational coefficients, tensor elements are pure tensors.
#[derive(Clone, PartialEq, Debug)]
pub enum OperadElement {
    Sym(Permutation),
    E(EBasis),
    AlgS(RationalPoly),
    DialgS(RationalDiPoly),
    Tensor(Vec<OperadElement>),
}

impl OperadId {
    pub fn tensor(factors: Vec<OperadId>) -> Result<Self> {
        if factors.len() < 2 {
            return Err(input_err!("a tensor product needs at least two factors"));
        }
        Ok(OperadId::Tensor(factors))
    }

    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(['⊗', '*']).map(str::trim).collect();
        if parts.len() > 1 {
            return OperadId::tensor(parts.into_iter().map(OperadId::parse).collect::<Result<_>>()?);
        }
        match s.trim().to_ascii_lowercase().as_str() {
            "sym" => Ok(OperadId::Sym),
            "e" => Ok(OperadId::E),
            "algs" | "alg_s" | "alg" => Ok(OperadId::AlgS),
            "dialgs" | "dialg_s" | "dialg" => Ok(OperadId::DialgS),
            other => Err(input_err!("unknown operad `{other}`")),
        }
    }
}

impl fmt::Display for OperadId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperadId::Sym => write!(f, "Sym"),
            OperadId::E => write!(f, "E"),
            OperadId::AlgS => write!(f, "Alg_S"),
            OperadId::DialgS => write!(f, "Dialg_S"),
            OperadId::Tensor(fs) => {
                let names: Vec<String> = fs.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", names.join(" ⊗ "))
            }
        }
    }
}

fn wrong_kind(op: &OperadId) -> Error {
    input_err!("element does not belong to operad {op}")
}

impl Operad for OperadId {
    type Elem = OperadElement;

    fn name(&self) -> String {
        self.to_string()
    }

    fn arity(&self, f: &OperadElement) -> usize {
        match f {
            OperadElement::Sym(p) => p.degree(),
            OperadElement::E(e) => e.arity,
            OperadElement::AlgS(p) => p.arity(),
            OperadElement::DialgS(p) => p.arity(),
            OperadElement::Tensor(xs) => match (self, xs.first()) {
                (OperadId::Tensor(ids), Some(x)) => ids[0].arity(x),
                _ => 0,
            },
        }
    }

    fn unit(&self) -> OperadElement {
        match self {
            OperadId::Sym => OperadElement::Sym(SymOperad.unit()),
            OperadId::E => OperadElement::E(EOperad.unit()),
            OperadId::AlgS => OperadElement::AlgS(AlgS::<Rational>::new().unit()),
            OperadId::DialgS => OperadElement::DialgS(DialgS::<Rational>::new().unit()),
            OperadId::Tensor(ids) => OperadElement::Tensor(ids.iter().map(|i| i.unit()).collect()),
        }
    }

    fn compose(&self, f: &OperadElement, pi: &Partition, gs: &[OperadElement]) -> Result<OperadElement> {
        macro_rules! unpack {
            ($variant:ident) => {{
                gs.iter()
                    .map(|g| match g {
                        OperadElement::$variant(x) => Ok(x.clone()),
                        _ => Err(wrong_kind(self)),
                    })
                    .collect::<Result<Vec<_>>>()?
            }};
        }
        match (self, f) {
            (OperadId::Sym, OperadElement::Sym(x)) => Ok(OperadElement::Sym(SymOperad.compose(x, pi, &unpack!(Sym))?)),
            (OperadId::E, OperadElement::E(x)) => Ok(OperadElement::E(EOperad.compose(x, pi, &unpack!(E))?)),
            (OperadId::AlgS, OperadElement::AlgS(x)) => Ok(OperadElement::AlgS(compose_poly(x, pi, &unpack!(AlgS))?)),
            (OperadId::DialgS, OperadElement::DialgS(x)) => {
                Ok(OperadElement::DialgS(compose_poly(x, pi, &unpack!(DialgS))?))
            }
            (OperadId::Tensor(ids), OperadElement::Tensor(xs)) => {
                let inner = unpack!(Tensor);
                if xs.len() != ids.len() || inner.iter().any(|g| g.len() != ids.len()) {
                    return Err(wrong_kind(self));
                }
                let mut out = Vec::with_capacity(ids.len());
                for (c, id) in ids.iter().enumerate() {
                    let comps: Vec<OperadElement> = inner.iter().map(|g| g[c].clone()).collect();
                    out.push(id.compose(&xs[c], pi, &comps)?);
                }
                Ok(OperadElement::Tensor(out))
            }
            _ => Err(wrong_kind(self)),
        }
    }

    fn act(&self, f: &OperadElement, sigma: &Permutation) -> Result<OperadElement> {
        match (self, f) {
            (OperadId::Sym, OperadElement::Sym(x)) => Ok(OperadElement::Sym(SymOperad.act(x, sigma)?)),
            (OperadId::E, OperadElement::E(x)) => Ok(OperadElement::E(EOperad.act(x, sigma)?)),
            (OperadId::AlgS, OperadElement::AlgS(x)) => Ok(OperadElement::AlgS(x.act(sigma)?)),
            (OperadId::DialgS, OperadElement::DialgS(x)) => Ok(OperadElement::DialgS(x.act(sigma)?)),
            (OperadId::Tensor(ids), OperadElement::Tensor(xs)) if xs.len() == ids.len() => Ok(OperadElement::Tensor(
                ids.iter().zip(xs).map(|(id, x)| id.act(x, sigma)).collect::<Result<_>>()?,
            )),
            _ => Err(wrong_kind(self)),
        }
    }

    fn sample(&self, n: usize, rng: &mut dyn RngCore) -> OperadElement {
        match self {
            OperadId::Sym => OperadElement::Sym(SymOperad.sample(n, rng)),
            OperadId::E => OperadElement::E(EOperad.sample(n, rng)),
            OperadId::AlgS => OperadElement::AlgS(AlgS::<Rational>::new().sample(n, rng)),
            OperadId::DialgS => OperadElement::DialgS(DialgS::<Rational>::new().sample(n, rng)),
            OperadId::Tensor(ids) => OperadElement::Tensor(ids.iter().map(|i| i.sample(n, rng)).collect()),
        }
    }
}

/// The operad laws checked by [`check_axioms`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Law {
    Associativity,
    LeftUnit,
    RightUnit,
    Equivariance,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Law::Associativity => "associativity",
            Law::LeftUnit => "left unit",
            Law::RightUnit => "right unit",
            Law::Equivariance => "equivariance",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug)]
pub struct AxiomFailure {
    pub law: Law,
    /// Full description of the inputs and both sides.
    pub witness: String,
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub operad: String,
    pub trials: usize,
    pub checks: usize,
    pub failures: Vec<AxiomFailure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

const MAX_REPORTED_FAILURES: usize = 5;

/// Randomized check of associativity, both unit laws and equivariance on
/// instances of total arity at most `max_arity`.
pub fn check_axioms<O: Operad>(op: &O, max_arity: usize, trials: usize, seed: u64) -> AxiomReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = AxiomReport { operad: op.name(), trials, checks: 0, failures: Vec::new() };
    let top = max_arity.max(1);
    for _ in 0..trials {
        let p = rng.random_range(1..=top);
        let m = rng.random_range(1..=p);
        let n = rng.random_range(1..=m);
        let pi = Partition::random(m, n, &mut rng);
        let tau = Partition::random(p, m, &mut rng);
        let f = op.sample(n, &mut rng);
        let gs: Vec<O::Elem> = (0..n).map(|i| op.sample(pi.part(i), &mut rng)).collect();
        let hs: Vec<O::Elem> = (0..m).map(|i| op.sample(tau.part(i), &mut rng)).collect();

        let mut record = |law: Law, ok: Result<bool>, witness: &dyn Fn() -> String| {
            report.checks += 1;
            let good = matches!(ok, Ok(true));
            if !good && report.failures.len() < MAX_REPORTED_FAILURES {
                let err = match ok {
                    Err(e) => format!(" (error: {e})"),
                    _ => String::new(),
                };
                report.failures.push(AxiomFailure { law, witness: format!("{}{err}", witness()) });
            }
        };

        // associativity
        let assoc = (|| -> Result<(O::Elem, O::Elem)> {
            let lhs = op.compose(&op.compose(&f, &pi, &gs)?, &tau, &hs)?;
            let (tp, subs) = Partition::compose(&tau, &pi)?;
            let inner: Vec<O::Elem> = (0..n)
                .map(|i| op.compose(&gs[i], &subs[i], &hs[pi.offset(i)..pi.offset(i) + pi.part(i)]))
                .collect::<Result<_>>()?;
            let rhs = op.compose(&f, &tp, &inner)?;
            Ok((lhs, rhs))
        })();
        let witness = || format!("f={f:?}, π={:?}, g={gs:?}, τ={:?}, h={hs:?}, sides={assoc:?}", pi.parts(), tau.parts());
        record(Law::Associativity, assoc.as_ref().map(|(l, r)| l == r).map_err(Clone::clone), &witness);

        // units
        let units: Vec<O::Elem> = (0..n).map(|_| op.unit()).collect();
        let right = op.compose(&f, &Partition::ones(n), &units);
        record(Law::RightUnit, right.as_ref().map(|x| *x == f).map_err(Clone::clone), &|| {
            format!("f={f:?}, Comp(f, 1, …, 1)={right:?}")
        });
        let left = Partition::new(vec![n]).and_then(|whole| op.compose(&op.unit(), &whole, std::slice::from_ref(&f)));
        record(Law::LeftUnit, left.as_ref().map(|x| *x == f).map_err(Clone::clone), &|| {
            format!("f={f:?}, Comp(1, f)={left:?}")
        });

        // equivariance: Comp^π(f^σ, g_i^{τ_i}) = Comp^{πσ⁻¹}(f, g_{1σ}, …)^{Comp(σ, τ_{1σ}, …)}
        let sigma = Permutation::random(n, &mut rng);
        let taus: Vec<Permutation> = (0..n).map(|i| Permutation::random(pi.part(i), &mut rng)).collect();
        let eq = (|| -> Result<(O::Elem, O::Elem)> {
            let moved: Vec<O::Elem> = gs.iter().zip(&taus).map(|(g, t)| op.act(g, t)).collect::<Result<_>>()?;
            let lhs = op.compose(&op.act(&f, &sigma)?, &pi, &moved)?;
            let shifted = pi.act(&sigma.inverse())?;
            let order: Vec<O::Elem> = (0..n).map(|k| gs[sigma.apply(k)].clone()).collect();
            let order_t: Vec<Permutation> = (0..n).map(|k| taus[sigma.apply(k)].clone()).collect();
            let block = sym_compose(&sigma, &shifted, &order_t)?;
            let rhs = op.act(&op.compose(&f, &shifted, &order)?, &block)?;
            Ok((lhs, rhs))
        })();
        let witness = || format!("f={f:?}, σ={sigma}, π={:?}, g={gs:?}, τ={taus:?}, sides={eq:?}", pi.parts());
        record(Law::Equivariance, eq.as_ref().map(|(l, r)| l == r).map_err(Clone::clone), &witness);
    }
    report
}

/// [`check_axioms`] on an operad named at run time.
pub fn axiom_check(op: &OperadId, max_arity: usize, trials: usize, seed: u64) -> AxiomReport {
    check_axioms(op, max_arity, trials, seed)
}

/// Randomized check that `σ ↦ e_{nσ⁻¹}` preserves composition. Returns the
/// first counterexample.
pub fn check_sym_to_e(max_arity: usize, trials: usize, seed: u64) -> Option<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let m = rng.random_range(1..=max_arity.max(1));
        let n = rng.random_range(1..=m);
        let pi = Partition::random(m, n, &mut rng);
        let sigma = Permutation::random(n, &mut rng);
        let taus: Vec<Permutation> = (0..n).map(|i| Permutation::random(pi.part(i), &mut rng)).collect();
        let lhs = sym_to_e(&sym_compose(&sigma, &pi, &taus).expect("valid composition"));
        let es: Vec<EBasis> = taus.iter().map(sym_to_e).collect();
        let rhs = sym_to_e(&sigma).compose(&pi, &es).expect("valid composition");
        if lhs != rhs {
            return Some(format!("σ={sigma}, π={:?}, τ={taus:?}: {lhs} vs {rhs}", pi.parts()));
        }
    }
    None
}

/// A named family of multilinear identities.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentitySet<K> {
    pub name: String,
    pub identities: Vec<MultilinearPoly<K>>,
}

impl<K: Scalar> IdentitySet<K> {
    pub fn new(name: impl Into<String>, identities: Vec<MultilinearPoly<K>>) -> Result<Self> {
        for (i, t) in identities.iter().enumerate() {
            if t.is_zero() {
                return Err(input_err!("identity {} is zero", i + 1));
            }
            if t.arity() < 2 {
                return Err(input_err!("identity {} has arity {} (need at least 2)", i + 1, t.arity()));
            }
        }
        Ok(Self { name: name.into(), identities })
    }

    pub fn max_arity(&self) -> usize {
        self.identities.iter().map(|t| t.arity()).max().unwrap_or(0)
    }
}

/// Largest arity for which consequences are enumerated.
pub const MAX_CONSEQUENCE_ARITY: usize = 5;

/// `Alg_S(n) ∩ I_Var` as a reduced row echelon basis.
#[derive(Clone, Debug)]
pub struct ConsequenceSpace<K> {
    pub arity: usize,
    echelon: SparseEchelon<Monomial<()>, K>,
}

impl<K: Scalar> ConsequenceSpace<K> {
    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn basis(&self) -> Vec<MultilinearPoly<K>> {
        self.echelon
            .rows()
            .map(|(_, r)| Poly::from_map(self.arity, r.clone()).expect("rows have the space arity"))
            .collect()
    }

    /// Normal form modulo the space.
    pub fn reduce(&self, p: &MultilinearPoly<K>) -> Result<MultilinearPoly<K>> {
        if p.arity() != self.arity {
            return Err(input_err!("reducing an arity {} polynomial modulo arity {}", p.arity(), self.arity));
        }
        Poly::from_map(self.arity, self.echelon.reduce(p.terms()))
    }

    pub fn contains(&self, p: &MultilinearPoly<K>) -> bool {
        p.arity() == self.arity && self.echelon.contains(p.terms())
    }

    pub fn same_span(&self, other: &Self) -> bool {
        self.arity == other.arity && self.echelon.same_span(&other.echelon)
    }
}

fn check_consequence_arity(n: usize) -> Result<()> {
    if n < 2 {
        return Err(input_err!("consequences are defined for arity at least 2"));
    }
    if n > MAX_CONSEQUENCE_ARITY {
        return Err(Error::Resource(format!(
            "arity {n} exceeds the consequence bound {MAX_CONSEQUENCE_ARITY} (Alg_S({n}) has dimension {})",
            crate::terms::alg_dimension(n)
        )));
    }
    Ok(())
}

/// Every arity-`m` element `Comp^q(t, s_1, …, s_k)` with plain inner shapes.
fn instances<K: Scalar>(t: &MultilinearPoly<K>, m: usize) -> Vec<MultilinearPoly<K>> {
    let k = t.arity();
    let mut out = Vec::new();
    for q in Partition::all(m, k) {
        let shape_lists: Vec<Vec<Shape>> = q.parts().iter().map(|&p| Shape::all(p)).collect();
        let mut idx = vec![0usize; k];
        loop {
            let gs: Vec<MultilinearPoly<K>> =
                (0..k).map(|i| Poly::monomial(Monomial::plain(shape_lists[i][idx[i]].clone()))).collect();
            out.push(compose_poly(t, &q, &gs).expect("partition matches"));
            let mut pos = 0;
            while pos < k {
                idx[pos] += 1;
                if idx[pos] < shape_lists[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == k {
                break;
            }
        }
    }
    out
}

/// Row-reduced basis of the degree `n` part of the T-ideal generated by `Σ`.
pub fn multilinear_consequences<K: Scalar>(sigma: &IdentitySet<K>, n: usize) -> Result<ConsequenceSpace<K>> {
    check_consequence_arity(n)?;
    let perms = Permutation::all(n);
    let mut echelon = SparseEchelon::new();
    let leaf: MultilinearPoly<K> = Poly::monomial(Monomial::plain(Tree::Leaf));
    for t in &sigma.identities {
        let k = t.arity();
        for d in k..=n {
            let inner = instances(t, d);
            let r = n - d + 1;
            for outer in Shape::all(r) {
                let w: MultilinearPoly<K> = Poly::monomial(Monomial::plain(outer));
                for pos in 0..r {
                    let mut parts = vec![1; r];
                    parts[pos] = d;
                    let pi = Partition::new(parts)?;
                    for x in &inner {
                        let mut gs = vec![leaf.clone(); r];
                        gs[pos] = x.clone();
                        let y = compose_poly(&w, &pi, &gs)?;
                        for s in &perms {
                            echelon.insert(y.act(s)?.terms());
                        }
                    }
                }
            }
        }
    }
    Ok(ConsequenceSpace { arity: n, echelon })
}

/// Normal form of `p` in `VarAlg(n)`.
pub fn varalg_reduce<K: Scalar>(p: &MultilinearPoly<K>, sigma: &IdentitySet<K>) -> Result<MultilinearPoly<K>> {
    multilinear_consequences(sigma, p.arity())?.reduce(p)
}
