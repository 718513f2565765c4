//! End-to-end acceptance run. Prints one line per criterion and exits
//! nonzero if any criterion fails.

use std::time::Instant;

use divaria_cli::{run, Report};
use divaria_core::combinatorics::{sym_compose, Partition};
use divaria_core::conformal::{embed_associative, verify_representation, ConformalRep, ModuleChoice};
use divaria_core::dialgebra::{check_all_on, examples, leibniz_to_dialgebra, unit, Dialgebra, FDDialgebra};
use divaria_core::dsl::{parse_expr, parse_variety};
use divaria_core::operads::{axiom_check, multilinear_consequences, IdentitySet, OperadId};
use divaria_core::pseudo::envelope::{extend_hom, var_envelope};
use divaria_core::pseudo::{
    check_coefficient_identities, check_var_pseudo, oracle_check, CoefficientDialgebra, Current, Envelope,
    MatrixAlgebra, PseudoAlgebra,
};
use divaria_core::translate::{derive_variety, psi_suite};
use divaria_core::{DiOp, DiPoly, MultilinearPoly, Permutation, Rational};

type Q = Rational;

fn di(s: &str) -> DiPoly<Q> {
    parse_expr::<Q, DiOp>(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn alg(s: &str) -> MultilinearPoly<Q> {
    parse_expr::<Q, ()>(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn cli(args: &[&str]) -> Result<Report, String> {
    let out = run(args);
    match out.report {
        Some(r) if out.code == 0 => Ok(r),
        Some(r) => Err(format!("exit {} ({:?})", out.code, r.error)),
        None => Err(format!("exit {}: {}", out.code, out.stderr)),
    }
}

/// Identities listed in a report section, read back through the DSL.
fn section_polys(r: &Report, title: &str) -> Vec<String> {
    r.section(title)
        .map(|s| s.lines.iter().map(|l| l.split_once(": ").map_or(l.clone(), |(_, p)| p.to_string())).collect())
        .unwrap_or_default()
}

fn derived(r: &Report) -> Vec<DiPoly<Q>> {
    section_polys(r, "derived identities").iter().map(|s| di(s)).collect()
}

fn zero_ids() -> Vec<DiPoly<Q>> {
    vec![di("(x1-|x2)|-x3 - (x1|-x2)|-x3"), di("x1-|(x2|-x3) - x1-|(x2-|x3)")]
}

fn all_perms_of(ps: &[DiPoly<Q>], q: &DiPoly<Q>) -> bool {
    Permutation::all(q.arity()).iter().any(|s| ps.iter().any(|p| p.arity() == q.arity() && p.act(s).unwrap() == *q))
}

type Outcome = Result<String, String>;
type Counts = Result<(usize, usize), String>;

fn criterion_1() -> Outcome {
    let r = cli(&["derive", "--variety", "associative.var"])?;
    let zeros: Vec<DiPoly<Q>> = section_polys(&r, "0-identities").iter().map(|s| di(s)).collect();
    let diass = vec![
        di("(x1-|x2)-|x3 - x1-|(x2-|x3)"),
        di("(x1|-x2)-|x3 - x1|-(x2-|x3)"),
        di("(x1|-x2)|-x3 - x1|-(x2|-x3)"),
    ];
    if zeros != zero_ids() {
        return Err(format!("0-identities differ: {zeros:?}"));
    }
    let got = derived(&r);
    if got != diass {
        return Err(format!("derived identities differ: {}", got.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("; ")));
    }
    Ok("0-identities and the three associator identities, in order".into())
}

/// Mutual membership of the `S_n`-orbit spans of two sets of arity-`n` identities.
fn orbit_equivalent(a: &[MultilinearPoly<Q>], b: &[MultilinearPoly<Q>], n: usize) -> bool {
    use divaria_core::linalg::SparseEchelon;
    let span = |ps: &[MultilinearPoly<Q>]| {
        let mut e = SparseEchelon::new();
        for p in ps.iter().filter(|p| p.arity() == n) {
            for s in Permutation::all(n) {
                e.insert(p.act(&s).unwrap().terms());
            }
        }
        e
    };
    span(a).same_span(&span(b))
}

fn criterion_2() -> Outcome {
    let r = cli(&["derive", "--variety", "commutative.var"])?;
    let dicomm = di("x1|-x2 - x2-|x1");
    if !derived(&r).contains(&dicomm) {
        return Err("x1|-x2 - x2-|x1 not among the derived identities".into());
    }
    let r = cli(&["derive", "--variety", "commutative.var", "--single-op"])?;
    let single: Vec<MultilinearPoly<Q>> = section_polys(&r, "single-operation identities").iter().map(|s| alg(s)).collect();
    let expected = [alg("(x1*x2)*x3 - x1*(x2*x3)"), alg("(x1*x2)*x3 - (x2*x1)*x3")];
    if single.iter().any(|p| p.arity() != 3) {
        return Err("single-operation output has identities outside degree 3".into());
    }
    if !orbit_equivalent(&single, &expected, 3) {
        return Err("S3-spans differ".into());
    }
    Ok(format!("dicommutativity derived; {} single-operation identities span the same S3-space", single.len()))
}

fn criterion_3() -> Outcome {
    let r = cli(&["derive", "--variety", "alternative.var"])?;
    let got = derived(&r);
    let a = |x: &str, y: &str, z: &str, o1: &str, o2: &str| format!("({x}{o1}{y}){o2}{z} - {x}{o1}({y}{o2}{z})");
    let (l, rt) = ("-|", "|-");
    // (x,y,z)_⊣ = (x⊣y)⊣z − x⊣(y⊣z), (x,y,z)_× = (x⊢y)⊣z − x⊢(y⊣z), (x,y,z)_⊢ = (x⊢y)⊢z − x⊢(y⊢z)
    let dl = |x, y, z| a(x, y, z, l, l);
    let dx = |x: &str, y: &str, z: &str| format!("({x}|-{y})-|{z} - {x}|-({y}-|{z})");
    let dr = |x, y, z| a(x, y, z, rt, rt);
    let dialt = [
        di(&format!("{} + {}", dl("x1", "x2", "x3"), dx("x2", "x1", "x3"))),
        di(&format!("{} + {}", dr("x1", "x2", "x3"), dr("x2", "x1", "x3"))),
        di(&format!("{} + {}", dl("x1", "x2", "x3"), dl("x1", "x3", "x2"))),
        di(&format!("{} + {}", dx("x1", "x2", "x3"), dr("x1", "x3", "x2"))),
    ];
    for (k, d) in dialt.iter().enumerate() {
        if !got.contains(d) {
            return Err(format!("identity {} of the alternative list ({d}) not derived", k + 1));
        }
    }
    let extra: Vec<&DiPoly<Q>> = got.iter().filter(|p| !dialt.contains(p)).collect();
    if extra.iter().any(|p| !all_perms_of(&dialt, p)) {
        return Err("a derived identity is not a renaming of the four".into());
    }
    Ok(format!("all four derived exactly; the other {} are renamings of them", extra.len()))
}

fn criterion_4() -> Outcome {
    let r = cli(&["derive", "--variety", "lie.var"])?;
    if !derived(&r).contains(&di("x1-|x2 + x2|-x1")) {
        return Err("x1-|x2 + x2|-x1 not derived".into());
    }
    let r = cli(&["derive", "--variety", "lie.var", "--single-op"])?;
    let single: Vec<MultilinearPoly<Q>> = section_polys(&r, "single-operation identities").iter().map(|s| alg(s)).collect();
    // x(yz) = (xy)z + y(xz)
    let leibniz = alg("x1*(x2*x3) - (x1*x2)*x3 - x2*(x1*x3)");
    if !single.contains(&leibniz) {
        return Err(format!("left Leibniz identity missing from {single:?}"));
    }
    Ok("x1-|x2 + x2|-x1 derived; single operation gives x1(x2x3) = (x1x2)x3 + x2(x1x3)".into())
}

fn criterion_5() -> Outcome {
    let r = cli(&["derive", "--variety", "jordan.var"])?;
    let got = derived(&r);
    let displayed = [
        "x1-|(x2-|(x3-|x4)) + (x2|-(x1-|x3))-|x4 + x3|-(x2|-(x1-|x4)) \
         - (x1-|x2)-|(x3-|x4) - (x1-|x3)-|(x2-|x4) - (x3|-x2)|-(x1-|x4)",
        "x1|-(x2-|(x3-|x4)) + (x2-|(x1-|x3))-|x4 + x3|-(x2-|(x1-|x4)) \
         - (x1|-x2)-|(x3-|x4) - (x1|-x3)|-(x2-|x4) - (x3|-x2)-|(x1-|x4)",
        "x1|-(x2|-(x3-|x4)) + (x2|-(x1|-x3))-|x4 + x3-|(x2-|(x1-|x4)) \
         - (x1|-x2)|-(x3-|x4) - (x1|-x3)-|(x2-|x4) - (x3-|x2)-|(x1-|x4)",
        "x1|-(x2|-(x3|-x4)) + (x2|-(x1|-x3))|-x4 + x3|-(x2|-(x1|-x4)) \
         - (x1|-x2)|-(x3|-x4) - (x1|-x3)|-(x2|-x4) - (x3|-x2)|-(x1|-x4)",
    ];
    for (k, d) in displayed.iter().enumerate() {
        if !got.contains(&di(d)) {
            return Err(format!("displayed identity {} not derived", k + 1));
        }
    }
    if !got.contains(&di("x1-|x2 - x2|-x1")) {
        return Err("x1-|x2 = x2|-x1 not derived".into());
    }
    let r = cli(&["derive", "--variety", "jordan.var", "--single-op"])?;
    let single: Vec<MultilinearPoly<Q>> = section_polys(&r, "single-operation identities").iter().map(|s| alg(s)).collect();
    let jl = vec![
        alg("(x1*x2)*x3 - (x2*x1)*x3"),
        alg("((x4*x3)*x2)*x1 + x4*(x2*(x3*x1)) + x3*(x2*(x4*x1)) - (x4*x3)*(x2*x1) - (x4*x2)*(x3*x1) - (x3*x2)*(x4*x1)"),
        alg("x1*((x4*x3)*x2) + x4*((x3*x1)*x2) + x3*((x4*x1)*x2) - (x4*x3)*(x1*x2) - (x1*x3)*(x4*x2) - (x4*x1)*(x3*x2)"),
    ];
    let a = IdentitySet::new("single", single.clone()).map_err(|e| e.to_string())?;
    let b = IdentitySet::new("jl", jl).map_err(|e| e.to_string())?;
    let mut ranks = Vec::new();
    for n in 3..=4 {
        let (ca, cb) = (multilinear_consequences(&a, n).unwrap(), multilinear_consequences(&b, n).unwrap());
        if !ca.same_span(&cb) {
            return Err(format!("consequence spaces differ in degree {n} (ranks {} and {})", ca.rank(), cb.rank()));
        }
        ranks.push(ca.rank());
    }
    Ok(format!(
        "four displayed identities derived; {} single-operation identities generate the same multilinear spaces (ranks {} and {} in degrees 3 and 4)",
        single.len(),
        ranks[0],
        ranks[1]
    ))
}

fn criterion_6() -> Outcome {
    let ops = [
        OperadId::Sym,
        OperadId::E,
        OperadId::AlgS,
        OperadId::DialgS,
        OperadId::tensor(vec![OperadId::AlgS, OperadId::E]).unwrap(),
    ];
    let mut checks = 0;
    for op in &ops {
        let r = axiom_check(op, 8, 1000, 0);
        if !r.passed() || r.trials < 1000 {
            return Err(format!("{}: {:?}", r.operad, r.failures.first()));
        }
        checks += r.checks;
    }
    let c = |n, cyc: &[usize]| Permutation::from_cycles(n, &[cyc.to_vec()]).unwrap();
    let got = sym_compose(&c(3, &[1, 2, 3]), &Partition::new(vec![3, 2, 4]).unwrap(), &[c(3, &[1, 3, 2]), c(2, &[1, 2]), c(4, &[2, 3, 4])])
        .unwrap()
        .one_line();
    if got != vec![7, 5, 6, 9, 8, 1, 3, 4, 2] {
        return Err(format!("Sym example gave {got:?}"));
    }
    Ok(format!("5 operads × 1000 instances ({checks} law checks, arity ≤ 8); Sym example = [7,5,6,9,8,1,3,4,2]"))
}

fn criterion_7() -> Outcome {
    let r = psi_suite(1000, 7, 0);
    match r.failure {
        None => Ok(format!("{} random dialgebra monomials of arity ≤ 7", r.samples)),
        Some(f) => Err(f),
    }
}

fn zero_dialgebra_corpus() -> Vec<(String, FDDialgebra<Q>)> {
    let mut out = vec![
        ("leibniz2".to_string(), leibniz_to_dialgebra(&examples::leibniz2()).unwrap()),
        ("sl2".to_string(), leibniz_to_dialgebra(&examples::sl2()).unwrap()),
        ("left-only".to_string(), leibniz_to_dialgebra(&examples::left_only_leibniz()).unwrap()),
        ("upper-triangular".to_string(), FDDialgebra::diagonal(&examples::upper_triangular())),
    ];
    for seed in 0..3 {
        out.push((format!("random-{seed}"), examples::random_zero_dialgebra(3, seed)));
    }
    out
}

fn criterion_8() -> Outcome {
    let corpus = zero_dialgebra_corpus();
    let results: Vec<(String, Counts)> = std::thread::scope(|s| {
        let handles: Vec<_> = corpus
            .iter()
            .map(|(name, a)| {
                s.spawn(move || {
                    let res = (|| {
                        if a.dim > 3 || a.is_zero_dialgebra().is_some() {
                            return Err("not a 0-dialgebra of dimension ≤ 3".to_string());
                        }
                        let env = Envelope::new(a).map_err(|e| e.to_string())?;
                        let r = oracle_check(&env, 4, 4).map_err(|e| e.to_string())?;
                        match r.failure {
                            None => Ok((r.plain_cases, r.c1_cases)),
                            Some(f) => Err(f),
                        }
                    })();
                    (name.clone(), res)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker")).collect()
    });
    let (mut plain, mut c1) = (0, 0);
    for (name, r) in results {
        let (p, c) = r.map_err(|e| format!("{name}: {e}"))?;
        plain += p;
        c1 += c;
    }
    Ok(format!("{} algebras, words of degree ≤ 4: {plain} plain and {c1} one-pair evaluations agree", corpus.len()))
}

fn lie() -> IdentitySet<Q> {
    parse_variety(&divaria_cli::input::read_source("lie.var").unwrap()).unwrap()
}

fn criterion_9() -> Outcome {
    let a = leibniz_to_dialgebra(&examples::leibniz2::<Q>()).unwrap();
    let sigma = lie();
    let var = var_envelope(&a, &sigma).map_err(|e| e.to_string())?;
    let env = &var.envelope;
    let coeff = CoefficientDialgebra(env);
    let d = a.dim;
    for i in 0..d {
        for j in 0..d {
            let (x, y) = (env.basis_a(i), env.basis_a(j));
            let (ei, ej) = (unit(d, i), unit(d, j));
            if coeff.left(&x, &y) != env.a(&a.dashv(&ei, &ej)) || coeff.right(&x, &y) != env.a(&a.vdash(&ei, &ej)) {
                return Err(format!("A does not embed: products of e{} and e{}", i + 1, j + 1));
            }
        }
    }
    if check_var_pseudo(&var.raw, &sigma).unwrap().is_none() {
        return Err("the raw envelope already satisfies t*, so the quotient is not exercised".into());
    }
    if let Some(w) = check_var_pseudo(env, &sigma).unwrap() {
        return Err(format!("t{}* nonzero on C_Lie(A) at {:?}", w.identity + 1, w.tuple));
    }
    let dv = derive_variety(&sigma).unwrap();
    if let Some(w) = check_coefficient_identities(env, &dv.identities).unwrap() {
        return Err(format!("derived identity {} fails on C_Lie(A)^(0)", w.identity + 1));
    }
    Ok(format!(
        "dim I = {} with I ∩ C0 = 0; A embeds; t* vanishes; {} derived identities hold on C_Lie(A)^(0)",
        var.dim_ideal(),
        dv.identities.len()
    ))
}

fn criterion_10() -> Outcome {
    let m = MatrixAlgebra::new(2);
    let cur = Current::new(m.clone(), m.basis::<Q>());
    let mut gens = Vec::new();
    for k in 0..=2u32 {
        for g in cur.generators() {
            gens.push(cur.translate_pow(&g, k));
        }
    }
    let assoc = IdentitySet::new("associative", vec![alg("(x1*x2)*x3 - x1*(x2*x3)")]).unwrap();
    let ids = derive_variety(&assoc).unwrap().identities;
    match check_all_on(&CoefficientDialgebra(&cur), &ids, &gens).map_err(|e| e.to_string())? {
        None => Ok(format!("0-identities and 3 associator identities on all triples of {} elements T^k E_ij, k ≤ 2", gens.len())),
        Some(w) => Err(format!("identity {} fails at {:?}", w.identity + 1, w.tuple)),
    }
}

fn criterion_11() -> Outcome {
    let rep = ConformalRep::<Q>::build(&examples::leibniz2(), ModuleChoice::Trivial).map_err(|e| e.to_string())?;
    let r = verify_representation(&rep);
    if !r.passed() {
        return Err(format!("{:?}", r.failures()));
    }
    let e = embed_associative(&rep, 2).map_err(|e| e.to_string())?;
    if !e.passed() {
        return Err(format!("{:?}", e.failures));
    }
    Ok(format!(
        "ρ1ρ1 = 0, both bracket relations, dialgebra homomorphism, faithful (rank {}); associative identities on a {}-dim generated subspace",
        r.rho1_rank, e.generated_dim
    ))
}

fn criterion_12() -> Outcome {
    let g = examples::leibniz2::<Q>();
    let rep = ConformalRep::build(&g, ModuleChoice::Trivial).map_err(|e| e.to_string())?;
    let var = var_envelope(&leibniz_to_dialgebra(&g).unwrap(), &lie()).map_err(|e| e.to_string())?;
    let target = rep.lie_current();
    let hom = extend_hom(&var.envelope, &target, rep.images()).map_err(|e| e.to_string())?;
    let env = &var.envelope;
    for i in 0..g.dim {
        if hom.apply(&target, &env.basis_a(i)) != rep.rho(i) {
            return Err(format!("extension differs from ρ on e{}", i + 1));
        }
    }
    // independent recheck of H-linearity and products on all generator pairs
    let gens = env.generators();
    let trim = |mut v: Vec<Vec<Vec<Q>>>| {
        while v.last().is_some_and(|x| target.is_zero(x)) {
            v.pop();
        }
        v
    };
    for x in &gens {
        if hom.apply(&target, &env.translate(x)) != target.translate(&hom.apply(&target, x)) {
            return Err("not H-linear".into());
        }
        for y in &gens {
            let lhs: Vec<_> = env.product(x, y).iter().map(|z| hom.apply(&target, z)).collect();
            if trim(lhs) != trim(target.product(&hom.apply(&target, x), &hom.apply(&target, y))) {
                return Err("pseudo-product not preserved".into());
            }
        }
    }
    Ok(format!("extension exists, agrees with ρ, preserves products on all {} generator pairs", gens.len() * gens.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("derive on associative", criterion_1),
        ("derive on commutative", criterion_2),
        ("derive on alternative", criterion_3),
        ("derive on Lie", criterion_4),
        ("derive on Jordan", criterion_5),
        ("operad self-test", criterion_6),
        ("Ψ suite", criterion_7),
        ("envelope closed forms", criterion_8),
        ("C_Lie of the 2-dim Leibniz algebra", criterion_9),
        ("current pseudo-algebra of 2×2 matrices", criterion_10),
        ("conformal representation", criterion_11),
        ("extension through ρ", criterion_12),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("criterion {:>2}: PASS  {name}: {detail} [{secs:.2} s]", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {why} [{secs:.2} s]", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
