//! Faithful conformal representations of finite-dimensional Leibniz algebras.
//!
//! For a Leibniz algebra `g` with bracket `[ab] = a⊣b`, `l = g/Span{[xx]}` and an
//! `l`-module `V`, set `M₀ = V ⊕ (g⊗V)` and `ρ(x) = ρ₀(x) − Tρ₁(x)` in
//! `Cur End M₀`, where `ρ₀(x) = x̄ ⊕ (id⊗x̄ − [·x]⊗id)` and `ρ₁(x): u ↦ x⊗u`,
//! `g⊗V ↦ 0`.

use crate::dialgebra::{check_all_on, is_zero_vec, leibniz_to_dialgebra, unit, vsub, vzero, Algebra, Dialgebra, FDAlgebra, FDDialgebra};
use crate::error::{input_err, Error, Result};
use crate::linalg::{dense_from_sparse, rank, sparse_from_dense, Quotient, SparseEchelon};
use crate::pseudo::{CoefficientDialgebra, Commutator, Current, MatrixAlgebra, PseudoAlgebra};
use crate::scalar::Scalar;
use crate::translate::zero_axioms;

/// Which `l`-module to use for `V`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuleChoice {
    Trivial,
    Adjoint,
}

impl std::str::FromStr for ModuleChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trivial" => Ok(Self::Trivial),
            "adjoint" => Ok(Self::Adjoint),
            other => Err(input_err!("unknown module '{other}' (expected trivial or adjoint)")),
        }
    }
}

/// `g` with its Lie dialgebra and the Lie algebra `l = g/Span{[xx]}`.
#[derive(Clone, Debug)]
pub struct LeibnizData<K> {
    /// Left Leibniz table `[ab]`, the `⊢` of the dialgebra.
    pub g: FDAlgebra<K>,
    pub dialgebra: FDDialgebra<K>,
    squares: Quotient<K>,
    /// Bracket of `l` in the basis of quotient representatives.
    pub l: FDAlgebra<K>,
}

impl<K: Scalar> LeibnizData<K> {
    pub fn new(g: &FDAlgebra<K>) -> Result<Self> {
        let dialgebra = leibniz_to_dialgebra(g)?;
        let d = g.dim;
        let mut sq = SparseEchelon::new();
        for i in 0..d {
            for j in 0..d {
                let (a, b) = (unit(d, i), unit(d, j));
                let s = crate::dialgebra::vadd(&dialgebra.dashv(&a, &b), &dialgebra.dashv(&b, &a));
                sq.insert(&sparse_from_dense(&s));
            }
        }
        let squares = Quotient::new(d, sq);
        let reps = squares.representatives().to_vec();
        let ld = reps.len();
        let mut table = vec![vec![vec![K::zero(); ld]; ld]; ld];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                table[i][j] = squares.project(&dialgebra.dashv(&unit(d, a), &unit(d, b)));
            }
        }
        let l = if ld == 0 { FDAlgebra { dim: 0, table } } else { FDAlgebra::new(ld, table)? };
        let data = Self { g: g.clone(), dialgebra, squares, l };
        data.check_lie()?;
        Ok(data)
    }

    pub fn dim(&self) -> usize {
        self.g.dim
    }

    /// `x̄` in the basis of `l`.
    pub fn bar(&self, x: &[K]) -> Vec<K> {
        self.squares.project(x)
    }

    /// `[ab] = a⊣b`.
    pub fn bracket(&self, a: &[K], b: &[K]) -> Vec<K> {
        self.dialgebra.dashv(a, b)
    }

    fn check_lie(&self) -> Result<()> {
        let n = self.l.dim;
        let basis: Vec<Vec<K>> = (0..n).map(|i| unit(n, i)).collect();
        for a in &basis {
            if !is_zero_vec(&self.l.product(a, a)) {
                return Err(Error::Precondition("induced bracket on l is not alternating".into()));
            }
            for b in &basis {
                for c in &basis {
                    let p = &self.l;
                    let j = crate::dialgebra::vadd(
                        &crate::dialgebra::vadd(&p.product(&p.product(a, b), c), &p.product(&p.product(b, c), a)),
                        &p.product(&p.product(c, a), b),
                    );
                    if !is_zero_vec(&j) {
                        return Err(Error::Precondition("induced bracket on l fails Jacobi".into()));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `ρ₀`, `ρ₁` as matrices on `M₀` (row-major, columns are inputs).
#[derive(Clone, Debug)]
pub struct ConformalRep<K> {
    pub data: LeibnizData<K>,
    pub module: ModuleChoice,
    pub v_dim: usize,
    pub m0_dim: usize,
    pub rho0: Vec<Vec<K>>,
    pub rho1: Vec<Vec<K>>,
    pub labels: Vec<String>,
}

impl<K: Scalar> ConformalRep<K> {
    pub fn build(g: &FDAlgebra<K>, module: ModuleChoice) -> Result<Self> {
        let data = LeibnizData::new(g)?;
        let d = data.dim();
        // action of l on V: act[x][u] = x̄u
        let (v_dim, act): (usize, Vec<Vec<Vec<K>>>) = match module {
            ModuleChoice::Trivial => (1, vec![vec![vzero(1)]; d]),
            ModuleChoice::Adjoint => {
                let n = data.l.dim;
                let act = (0..d)
                    .map(|x| {
                        let xb = data.bar(&unit(d, x));
                        (0..n).map(|u| data.l.product(&xb, &unit(n, u))).collect()
                    })
                    .collect();
                (n, act)
            }
        };
        if v_dim == 0 {
            return Err(input_err!("the module V is zero (l = 0 has no nonzero adjoint module)"));
        }
        let m = v_dim * (1 + d);
        let pair = |a: usize, u: usize| v_dim + a * v_dim + u;
        let mut rho0 = Vec::with_capacity(d);
        let mut rho1 = Vec::with_capacity(d);
        for x in 0..d {
            let mut r0: Vec<K> = vzero(m * m);
            let mut r1: Vec<K> = vzero(m * m);
            for u in 0..v_dim {
                for (w, c) in act[x][u].iter().enumerate() {
                    r0[w * m + u] = c.clone();
                }
                r1[pair(x, u) * m + u] = K::one();
                for a in 0..d {
                    let col = pair(a, u);
                    for (w, c) in act[x][u].iter().enumerate() {
                        let row = pair(a, w);
                        r0[row * m + col] = r0[row * m + col].clone() + c.clone();
                    }
                    let br = data.bracket(&unit(d, a), &unit(d, x));
                    for (b, c) in br.iter().enumerate() {
                        let row = pair(b, u);
                        r0[row * m + col] = r0[row * m + col].clone() - c.clone();
                    }
                }
            }
            rho0.push(r0);
            rho1.push(r1);
        }
        let mut labels: Vec<String> = (1..=v_dim).map(|u| format!("v{u}")).collect();
        for a in 1..=d {
            for u in 1..=v_dim {
                labels.push(format!("e{a}⊗v{u}"));
            }
        }
        let rep = Self { data, module, v_dim, m0_dim: m, rho0, rho1, labels };
        rep.check_module(&act)?;
        Ok(rep)
    }

    fn check_module(&self, act: &[Vec<Vec<K>>]) -> Result<()> {
        let d = self.data.dim();
        let mat = MatrixAlgebra::new(self.v_dim);
        let as_matrix = |x: &[K]| {
            let mut out: Vec<K> = vzero(self.v_dim * self.v_dim);
            for (i, c) in x.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for u in 0..self.v_dim {
                    for (w, e) in act[i][u].iter().enumerate() {
                        out[w * self.v_dim + u] = out[w * self.v_dim + u].clone() + c.clone() * e.clone();
                    }
                }
            }
            out
        };
        for a in 0..d {
            for b in 0..d {
                let (ma, mb) = (as_matrix(&unit(d, a)), as_matrix(&unit(d, b)));
                let comm = vsub(&mat.mul(&ma, &mb), &mat.mul(&mb, &ma));
                let br = as_matrix(&self.data.bracket(&unit(d, a), &unit(d, b)));
                if comm != br {
                    return Err(Error::Precondition(format!("V is not an l-module at (e{}, e{})", a + 1, b + 1)));
                }
            }
        }
        Ok(())
    }

    pub fn matrices(&self) -> MatrixAlgebra {
        MatrixAlgebra::new(self.m0_dim)
    }

    /// `Cur End M₀` generated by the images of `ρ`.
    pub fn current(&self) -> Current<MatrixAlgebra, K> {
        let gens = (0..self.data.dim()).map(|x| self.rho(x)).flat_map(|r| r.into_iter()).collect();
        Current::new(self.matrices(), gens)
    }

    /// `(Cur End M₀)^{(−)}`.
    pub fn lie_current(&self) -> Commutator<Current<MatrixAlgebra, K>> {
        Commutator(self.current())
    }

    /// `ρ(e_x) = ρ₀(e_x) − Tρ₁(e_x)`.
    pub fn rho(&self, x: usize) -> Vec<Vec<K>> {
        let mut out = vec![self.rho0[x].clone(), crate::dialgebra::vscale(&-K::one(), &self.rho1[x])];
        while out.last().is_some_and(|m| is_zero_vec(m)) {
            out.pop();
        }
        out
    }

    pub fn rho_of(&self, x: &[K]) -> Vec<Vec<K>> {
        let cur = self.current();
        let mut acc = cur.zero();
        for (i, c) in x.iter().enumerate() {
            if !c.is_zero() {
                acc = cur.add(&acc, &cur.scale(c, &self.rho(i)));
            }
        }
        acc
    }

    pub fn images(&self) -> Vec<Vec<Vec<K>>> {
        (0..self.data.dim()).map(|x| self.rho(x)).collect()
    }
}

/// Outcome of the four checks; `None` means passed.
#[derive(Clone, Debug, Default)]
pub struct RepReport {
    pub rho1_square: Option<String>,
    pub bracket0: Option<String>,
    pub bracket1: Option<String>,
    pub dialgebra_hom: Option<String>,
    pub faithful: Option<String>,
    pub rho1_rank: usize,
}

impl RepReport {
    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn failures(&self) -> Vec<(&'static str, &str)> {
        [
            ("rho1 rho1 = 0", &self.rho1_square),
            ("[rho0(a), rho0(b)] = rho0([ab])", &self.bracket0),
            ("[rho1(a), rho0(b)] = rho1([ab])", &self.bracket1),
            ("dialgebra homomorphism", &self.dialgebra_hom),
            ("faithful", &self.faithful),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_deref().map(|m| (k, m)))
        .collect()
    }
}

fn combine<K: Scalar>(ms: &[Vec<K>], x: &[K]) -> Vec<K> {
    let mut out = vzero(ms[0].len());
    for (c, m) in x.iter().zip(ms) {
        if !c.is_zero() {
            out = crate::dialgebra::vadd(&out, &crate::dialgebra::vscale(c, m));
        }
    }
    out
}

pub fn verify_representation<K: Scalar>(rep: &ConformalRep<K>) -> RepReport {
    let d = rep.data.dim();
    let mat = rep.matrices();
    let comm = |a: &Vec<K>, b: &Vec<K>| vsub(&mat.mul(a, b), &mat.mul(b, a));
    let mut report = RepReport::default();
    let lie = rep.lie_current();
    let coeff = CoefficientDialgebra(&lie);
    for a in 0..d {
        for b in 0..d {
            let tag = format!("(e{}, e{})", a + 1, b + 1);
            if report.rho1_square.is_none() && !is_zero_vec(&mat.mul(&rep.rho1[a], &rep.rho1[b])) {
                report.rho1_square = Some(tag.clone());
            }
            let br = rep.data.bracket(&unit(d, a), &unit(d, b));
            if report.bracket0.is_none() && comm(&rep.rho0[a], &rep.rho0[b]) != combine(&rep.rho0, &br) {
                report.bracket0 = Some(tag.clone());
            }
            if report.bracket1.is_none() && comm(&rep.rho1[a], &rep.rho0[b]) != combine(&rep.rho1, &br) {
                report.bracket1 = Some(tag.clone());
            }
            if report.dialgebra_hom.is_none() {
                let (ra, rb) = (rep.rho(a), rep.rho(b));
                let (ea, eb) = (unit(d, a), unit(d, b));
                if coeff.right(&ra, &rb) != rep.rho_of(&rep.data.dialgebra.vdash(&ea, &eb)) {
                    report.dialgebra_hom = Some(format!("⊢ at {tag}"));
                } else if coeff.left(&ra, &rb) != rep.rho_of(&rep.data.dialgebra.dashv(&ea, &eb)) {
                    report.dialgebra_hom = Some(format!("⊣ at {tag}"));
                }
            }
        }
    }
    report.rho1_rank = rank(&rep.rho1);
    if report.rho1_rank < d {
        report.faithful = Some(format!("rank of rho1 is {} < dim g = {d}", report.rho1_rank));
    }
    report
}

/// Outcome of the associative dialgebra check on `ρ(g)`.
#[derive(Clone, Debug)]
pub struct EmbedReport {
    pub generated_dim: usize,
    pub truncation: usize,
    pub max_degree_seen: usize,
    /// Failed identities, by name.
    pub failures: Vec<String>,
}

impl EmbedReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Words of degree ≤ 3 in `ρ(g)` under the coefficient operations of `Cur End M₀`,
/// truncated at `T`-degree `truncation`; checks the 0-axioms, the three
/// associative dialgebra identities and `ρ(a)⊣ρ(b) − ρ(b)⊢ρ(a) = ρ([ab])`.
pub fn embed_associative<K: Scalar>(rep: &ConformalRep<K>, truncation: usize) -> Result<EmbedReport> {
    let cur = rep.current();
    let coeff = CoefficientDialgebra(&cur);
    let n2 = rep.m0_dim * rep.m0_dim;
    let width = (truncation + 1) * n2;
    let flatten = |x: &Vec<Vec<K>>| -> Option<Vec<K>> {
        if x.len() > truncation + 1 {
            return None;
        }
        let mut v = vzero(width);
        for (k, m) in x.iter().enumerate() {
            v[k * n2..(k + 1) * n2].clone_from_slice(m);
        }
        Some(v)
    };
    let mut failures = Vec::new();
    let mut max_seen = 0;
    let mut span = SparseEchelon::new();
    let mut layers: Vec<Vec<Vec<Vec<K>>>> = vec![rep.images()];
    for deg in 2..=3 {
        let mut next = Vec::new();
        for k in 1..deg {
            let (ls, rs) = (&layers[k - 1], &layers[deg - k - 1]);
            for x in ls {
                for y in rs {
                    for z in [coeff.right(x, y), coeff.left(x, y)] {
                        if !cur.is_zero(&z) {
                            next.push(z);
                        }
                    }
                }
            }
        }
        layers.push(next);
    }
    for layer in &layers {
        for x in layer {
            max_seen = max_seen.max(x.len().saturating_sub(1));
            match flatten(x) {
                Some(v) => {
                    span.insert(&sparse_from_dense(&v));
                }
                None => {
                    failures.push(format!("a word leaves the T-degree ≤ {truncation} truncation"));
                }
            }
        }
    }
    let unflatten = |v: &[K]| -> Vec<Vec<K>> {
        let mut out: Vec<Vec<K>> = v.chunks(n2).map(|c| c.to_vec()).collect();
        while out.last().is_some_and(|m| is_zero_vec(m)) {
            out.pop();
        }
        out
    };
    let basis: Vec<Vec<Vec<K>>> = span.rows().map(|(_, r)| unflatten(&dense_from_sparse(r, width))).collect();
    let mut identities: Vec<(String, crate::terms::DiPoly<K>)> = Vec::new();
    for (i, z) in zero_axioms::<K>().into_iter().enumerate() {
        identities.push((format!("0-axiom {}", i + 1), z));
    }
    for (name, text) in [
        ("(x,y,z)_-|", "(x1-|x2)-|x3 - x1-|(x2-|x3)"),
        ("(x,y,z)_x", "(x1|-x2)-|x3 - x1|-(x2-|x3)"),
        ("(x,y,z)_|-", "(x1|-x2)|-x3 - x1|-(x2|-x3)"),
    ] {
        identities.push((name.to_string(), crate::dsl::parse_expr(text)?));
    }
    let polys: Vec<crate::terms::DiPoly<K>> = identities.iter().map(|(_, p)| p.clone()).collect();
    if let Some(w) = check_all_on(&coeff, &polys, &basis)? {
        failures.push(format!("{} fails on the generated subspace", identities[w.identity].0));
    }
    let d = rep.data.dim();
    for a in 0..d {
        for b in 0..d {
            let (ra, rb) = (rep.rho(a), rep.rho(b));
            let lhs = cur.sub(&coeff.left(&ra, &rb), &coeff.right(&rb, &ra));
            if lhs != rep.rho_of(&rep.data.bracket(&unit(d, a), &unit(d, b))) {
                failures.push(format!("rho(e{0})-|rho(e{1}) - rho(e{1})|-rho(e{0}) != rho([e{0}e{1}])", a + 1, b + 1));
            }
        }
    }
    Ok(EmbedReport { generated_dim: basis.len(), truncation, max_degree_seen: max_seen, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dialgebra::examples;
    use crate::Rational;

    type Q = Rational;

    #[test]
    fn leibniz2_trivial_module() {
        let rep = ConformalRep::<Q>::build(&examples::leibniz2(), ModuleChoice::Trivial).unwrap();
        assert_eq!(rep.m0_dim, 3);
        assert_eq!(rep.data.l.dim, 1);
        let cur = rep.current();
        let u = cur.constant(&unit(9, 0));
        // columns are inputs; ρ(e1)*u has constant part x̄u = 0 and T_1-part −(e1⊗u)
        let r = rep.rho(0);
        let m = rep.matrices();
        let applied: Vec<Vec<Q>> = r.iter().map(|x| m.mul(x, &u[0])).collect();
        assert!(is_zero_vec(&applied[0]));
        assert_eq!(applied[1][3], Q::from_int(-1));
        let report = verify_representation(&rep);
        assert!(report.passed(), "{:?}", report.failures());
    }

    #[test]
    fn dimension_formula() {
        for (g, module) in [
            (examples::leibniz2::<Q>(), ModuleChoice::Trivial),
            (examples::sl2::<Q>(), ModuleChoice::Adjoint),
            (examples::left_only_leibniz::<Q>(), ModuleChoice::Trivial),
        ] {
            let rep = ConformalRep::build(&g, module).unwrap();
            assert_eq!(rep.m0_dim, rep.v_dim * (1 + g.dim));
        }
    }

    #[test]
    fn module_choice_parses() {
        assert_eq!("trivial".parse::<ModuleChoice>().unwrap(), ModuleChoice::Trivial);
        assert_eq!("adjoint".parse::<ModuleChoice>().unwrap(), ModuleChoice::Adjoint);
        assert!("regular".parse::<ModuleChoice>().is_err());
    }
}
