use divaria_core::dialgebra::examples;
use divaria_core::dialgebra::{eval_dipoly, leibniz_to_dialgebra, unit, FDDialgebra};
use divaria_core::dsl::{parse_expr, parse_variety};
use divaria_core::operads::IdentitySet;
use divaria_core::pseudo::envelope::{extend_hom, var_envelope};
use divaria_core::pseudo::{
    check_coefficient_identities, check_new_c, check_var_pseudo, epsilon_eval, eval_term, n_product, normalize,
    spread_act, CElem, CoefficientDialgebra, Commutator, Current, Envelope, MatrixAlgebra, PseudoAlgebra, Spread,
};
use divaria_core::terms::{all_monomials, DiOp, Monomial, Poly, Shape, Term, Tree};
use divaria_core::translate::{derive_variety, psi};
use divaria_core::{Permutation, Rational, RationalDiPoly, RationalPoly, Scalar};

type Q = Rational;

fn q(n: i64) -> Q {
    Q::from_int(n)
}

fn lie() -> IdentitySet<Q> {
    parse_variety(
        "variety lie\nidentity x1*(x2*x3) - (x1*x2)*x3 - x2*(x1*x3)\nidentity x1*x2 + x2*x1\n",
    )
    .unwrap()
}

fn leibniz2() -> FDDialgebra<Q> {
    leibniz_to_dialgebra(&examples::leibniz2()).unwrap()
}

fn corpus() -> Vec<(String, FDDialgebra<Q>)> {
    let mut out = vec![
        ("leibniz2".to_string(), leibniz2()),
        ("sl2".to_string(), leibniz_to_dialgebra(&examples::sl2()).unwrap()),
        ("left-only".to_string(), leibniz_to_dialgebra(&examples::left_only_leibniz()).unwrap()),
        ("upper-triangular".to_string(), FDDialgebra::diagonal(&examples::upper_triangular())),
    ];
    for seed in 0..3 {
        out.push((format!("random-{seed}"), examples::random_zero_dialgebra(3, seed)));
    }
    out
}

fn tuples(d: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..d).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// All monomials of arity ≤ 3, and a sample of arity 4.
fn words() -> Vec<Monomial<()>> {
    let mut out = Vec::new();
    for n in 1..=3 {
        out.extend(all_monomials(n));
    }
    out.extend(all_monomials(4).into_iter().step_by(7));
    out
}

#[test]
fn leibniz2_envelope_dimensions() {
    let env = Envelope::new(&leibniz2()).unwrap();
    assert_eq!(env.dim_u(), 1);
    assert_eq!(env.dim_c1(), 3);
    assert!(!env.c1_basis_pairs().contains(&(1, 1)));
}

#[test]
fn abelian_and_diagonal_envelopes() {
    let zero = FDDialgebra::<Q>::new(2, vec![vec![vec![q(0); 2]; 2]; 2], vec![vec![vec![q(0); 2]; 2]; 2]).unwrap();
    let env = Envelope::new(&zero).unwrap();
    assert_eq!(env.dim_u(), 0);
    assert_eq!(env.dim_c1(), 4);
    let diag = Envelope::new(&FDDialgebra::diagonal(&examples::upper_triangular::<Q>())).unwrap();
    assert_eq!(diag.dim_u(), 0);
    for g in diag.generators().iter().skip(3) {
        assert!(diag.translate(g).is_zero());
    }
}

#[test]
fn rejects_non_zero_dialgebra() {
    let bad = examples::random_tables::<Q>(2, 1);
    assert!(bad.is_zero_dialgebra().is_some());
    assert!(Envelope::new(&bad).is_err());
}

#[test]
fn normalize_examples() {
    let env = Envelope::new(&leibniz2()).unwrap();
    let a = env.basis_a(0);
    // i_2(T ⊗ 1 ⊗_H a) = T_1 a
    let s = normalize(&env, 2, vec![(vec![1, 0], a.clone())]).unwrap();
    assert_eq!(s.terms.len(), 1);
    assert_eq!(s.terms[&vec![1]], a);
    // i_2(1 ⊗ T ⊗_H a) = −T_1 a + 1 ⊗ Ta
    let s = normalize(&env, 2, vec![(vec![0, 1], a.clone())]).unwrap();
    assert_eq!(s.terms[&vec![1]], env.scale(&q(-1), &a));
    assert_eq!(s.terms[&vec![0]], env.translate(&a));
    // i_1(T^2 ⊗_H a) = T^2 a
    let s = normalize(&env, 1, vec![(vec![2], a.clone())]).unwrap();
    assert_eq!(s.terms[&vec![]], env.translate_pow(&a, 2));
}

#[test]
fn base_products() {
    let alg = leibniz2();
    let env = Envelope::new(&alg).unwrap();
    let d = alg.dim;
    for i in 0..d {
        for j in 0..d {
            let (a, b) = (unit::<Q>(d, i), unit::<Q>(d, j));
            let z = env.product(&env.a(&a), &env.a(&b));
            assert_eq!(n_product(&env, &env.a(&a), &env.a(&b), 0), env.a(&alg.vdash(&a, &b)));
            assert_eq!(n_product(&env, &env.a(&a), &env.a(&b), 1), env.scale(&q(-1), &env.pair(&a, &b)));
            assert!(z.len() <= 2);
            for k in 0..d {
                let c = unit::<Q>(d, k);
                // a*(b⊗c) = a⊗⟨b,c⟩, (a⊗b)*c = −⟨a,b⟩⊗c, (a⊗b)*(c⊗e) = 0
                let p2 = env.product(&env.a(&a), &env.pair(&b, &c));
                assert!(p2.len() <= 1);
                assert_eq!(p2.first().cloned().unwrap_or_else(|| env.zero()), env.pair(&a, &alg.bracket_defect(&b, &c)));
                let p3 = env.product(&env.pair(&a, &b), &env.a(&c));
                let want = env.scale(&q(-1), &env.pair(&alg.bracket_defect(&a, &b), &c));
                assert_eq!(p3.first().cloned().unwrap_or_else(|| env.zero()), want);
                for l in 0..d {
                    let e = unit::<Q>(d, l);
                    assert!(env.product(&env.pair(&a, &b), &env.pair(&c, &e)).is_empty());
                }
            }
        }
    }
}

#[test]
fn closed_form_example_left_comb() {
    let alg = leibniz2();
    let env = Envelope::new(&alg).unwrap();
    let t: RationalPoly = parse_expr("(x1*x2)*x3").unwrap();
    let d = alg.dim;
    for tup in tuples(d, 3) {
        let e: Vec<Vec<Q>> = tup.iter().map(|&i| unit(d, i)).collect();
        let args: Vec<CElem<Q>> = e.iter().map(|v| env.a(v)).collect();
        let s = env.closed_form_eval(&t, &args).unwrap();
        let (a, b, c) = (&e[0], &e[1], &e[2]);
        let rr = alg.vdash(&alg.vdash(a, b), c);
        assert_eq!(s.coeff(&env, &[0, 0]), env.a(&rr));
        let tx1 = divaria_core::dialgebra::vsub(&rr, &alg.dashv(&alg.dashv(a, b), c));
        let tx2 = divaria_core::dialgebra::vsub(&rr, &alg.dashv(&alg.vdash(a, b), c));
        let x1 = env.scale(&q(-1), &s.coeff(&env, &[1, 0]));
        let x2 = env.scale(&q(-1), &s.coeff(&env, &[0, 1]));
        assert_eq!(env.translate(&x1), env.a(&tx1));
        assert_eq!(env.translate(&x2), env.a(&tx2));
        assert_eq!(s, eval_term(&env, &t, &args).unwrap());
    }
}

#[test]
fn closed_form_pair_example() {
    let alg = leibniz2();
    let env = Envelope::new(&alg).unwrap();
    let t: RationalPoly = parse_expr("x1*x2").unwrap();
    let d = alg.dim;
    for tup in tuples(d, 3) {
        let (a, b, c) = (unit::<Q>(d, tup[0]), unit::<Q>(d, tup[1]), unit::<Q>(d, tup[2]));
        let s = env.closed_form_eval(&t, &[env.pair(&a, &b), env.a(&c)]).unwrap();
        let want = env.scale(&q(-1), &env.pair(&alg.bracket_defect(&a, &b), &c));
        assert_eq!(s.coeff(&env, &[0]), want);
        assert_eq!(s.terms.len(), usize::from(!want.is_zero()));
    }
}

fn oracle_equal_on(name: &str, alg: &FDDialgebra<Q>, ws: &[Monomial<()>]) {
    let env = Envelope::new(alg).unwrap();
    let d = alg.dim;
    let pairs = env.c1_basis_pairs();
    for w in ws {
        let t: RationalPoly = Poly::monomial(w.clone());
        let n = w.arity();
        for tup in tuples(d, n) {
            let args: Vec<CElem<Q>> = tup.iter().map(|&i| env.basis_a(i)).collect();
            let rec = eval_term(&env, &t, &args).unwrap();
            let closed = env.closed_form_eval(&t, &args).unwrap();
            assert_eq!(rec, closed, "{name}: {w} at {tup:?}");
        }
        if n > 3 {
            continue;
        }
        for var in 0..n {
            for tup in tuples(d, n - 1) {
                for r in 0..pairs.len() {
                    let mut args: Vec<CElem<Q>> = tup.iter().map(|&i| env.basis_a(i)).collect();
                    let mut c1 = vec![q(0); pairs.len()];
                    c1[r] = q(1);
                    args.insert(var, CElem { c0: vec![], c1 });
                    let rec = eval_term(&env, &t, &args).unwrap();
                    let closed = env.closed_form_eval(&t, &args).unwrap();
                    assert_eq!(rec, closed, "{name}: {w} with pair {r} at slot {var}, {tup:?}");
                }
            }
        }
    }
}

#[test]
fn recursive_evaluation_matches_closed_forms() {
    let ws = words();
    for (name, alg) in corpus().iter().take(4) {
        oracle_equal_on(name, alg, &ws);
    }
}

#[test]
fn closed_forms_reject_mixed_arguments() {
    let env = Envelope::new(&leibniz2()).unwrap();
    let t: RationalPoly = parse_expr("x1*x2").unwrap();
    let p = env.pair(&unit(2, 0), &unit(2, 0));
    assert!(env.closed_form_eval(&t, &[p.clone(), p]).is_err());
    let shifted = env.translate(&env.basis_a(0));
    assert!(env.closed_form_eval(&t, &[shifted, env.basis_a(1)]).is_err());
}

#[test]
fn twisted_product_is_swapped() {
    let env = Envelope::new(&leibniz2()).unwrap();
    let t: RationalPoly = Poly::monomial(Monomial::from_word(Shape::left_comb(2), vec![1, 0]).unwrap());
    for i in 0..2 {
        for j in 0..2 {
            let (a, b) = (env.basis_a(i), env.basis_a(j));
            let s = eval_term(&env, &t, &[a.clone(), b.clone()]).unwrap();
            let mut ba = Spread::zero(2);
            for (k, z) in env.product(&b, &a).into_iter().enumerate() {
                ba.add_term(&env, vec![k as u32], z);
            }
            assert_eq!(s, spread_act(&env, &ba, &Permutation::transposition(2, 0, 1)).unwrap());
        }
    }
}

#[test]
fn evaluation_is_equivariant() {
    let env = Envelope::new(&leibniz2()).unwrap();
    let gens = env.generators();
    for m in all_monomials(3) {
        let t: RationalPoly = Poly::monomial(m.clone());
        for rho in Permutation::all(3) {
            let tr = t.act(&rho).unwrap();
            for tup in tuples(gens.len(), 3).into_iter().step_by(5) {
                let args: Vec<CElem<Q>> = tup.iter().map(|&i| gens[i].clone()).collect();
                let permuted: Vec<CElem<Q>> = (0..3).map(|i| args[rho.apply(i)].clone()).collect();
                let lhs = eval_term(&env, &tr, &args).unwrap();
                let rhs = spread_act(&env, &eval_term(&env, &t, &permuted).unwrap(), &rho).unwrap();
                assert_eq!(lhs, rhs, "{m} by {rho}");
            }
        }
    }
}

#[test]
fn new_c_relations() {
    for (_, alg) in corpus().iter().take(3) {
        let env = Envelope::new(alg).unwrap();
        let mut elems = env.generators();
        elems.push(env.add(&env.translate(&env.basis_a(0)), &elems[elems.len() - 1]));
        for x in &elems {
            for y in &elems {
                assert_eq!(check_new_c(&env, x, y, 3), None);
            }
        }
    }
    let mat = MatrixAlgebra::new(2);
    let cur = Current::new(mat.clone(), mat.basis::<Q>());
    let gens = cur.generators();
    for x in &gens {
        for y in &gens {
            assert_eq!(check_new_c(&cur, x, y, 3), None);
            assert_eq!(check_new_c(&cur, &cur.translate(x), y, 3), None);
        }
    }
}

#[test]
fn coefficient_dialgebra_recovers_a() {
    let alg = leibniz2();
    let env = Envelope::new(&alg).unwrap();
    let c0 = CoefficientDialgebra(&env);
    use divaria_core::dialgebra::Dialgebra;
    for i in 0..2 {
        for j in 0..2 {
            let (a, b) = (unit::<Q>(2, i), unit::<Q>(2, j));
            assert_eq!(c0.right(&env.a(&a), &env.a(&b)), env.a(&alg.vdash(&a, &b)));
            assert_eq!(c0.left(&env.a(&a), &env.a(&b)), env.a(&alg.dashv(&a, &b)));
            for k in 0..2 {
                let c = unit::<Q>(2, k);
                let want = env.scale(&q(-1), &env.pair(&alg.bracket_defect(&a, &b), &c));
                assert_eq!(c0.right(&env.pair(&a, &b), &env.a(&c)), want);
                assert_eq!(c0.right(&env.a(&a), &env.pair(&b, &c)), env.pair(&a, &alg.bracket_defect(&b, &c)));
            }
        }
    }
    let zero = divaria_core::translate::zero_axioms::<Q>();
    assert!(check_coefficient_identities(&env, &zero).unwrap().is_none());
}

#[test]
fn epsilon_functor_examples() {
    let alg = leibniz2();
    let env = Envelope::new(&alg).unwrap();
    let w: Monomial<()> = Monomial::plain(Shape::left_comb(2));
    let at = |c: usize| {
        Poly::monomial(divaria_core::TensorMonomial { word: w.clone(), center: c })
    };
    let id = Poly::monomial(divaria_core::TensorMonomial { word: Monomial::plain(Tree::Leaf), center: 0 });
    for i in 0..2 {
        let a = env.basis_a(i);
        assert_eq!(epsilon_eval(&env, &id, std::slice::from_ref(&a)).unwrap(), a);
        for j in 0..2 {
            let b = env.basis_a(j);
            let (ea, eb) = (unit::<Q>(2, i), unit::<Q>(2, j));
            assert_eq!(epsilon_eval(&env, &at(1), &[a.clone(), b.clone()]).unwrap(), env.a(&alg.vdash(&ea, &eb)));
            assert_eq!(epsilon_eval(&env, &at(0), &[a.clone(), b.clone()]).unwrap(), env.a(&alg.dashv(&ea, &eb)));
        }
    }
}

#[test]
fn epsilon_after_psi_is_coefficient_evaluation() {
    let env = Envelope::new(&leibniz2()).unwrap();
    let c0 = CoefficientDialgebra(&env);
    let gens = env.generators();
    for n in 1..=3 {
        for shape in Shape::all(n) {
            for labels in shape.all_labelings() {
                for perm in Permutation::all(n).into_iter().step_by(2) {
                    let m = Monomial::<DiOp>::new(labels.clone(), perm).unwrap();
                    let f: RationalDiPoly = Poly::monomial(m);
                    let image = psi(&f);
                    for tup in tuples(gens.len(), n).into_iter().step_by(3) {
                        let args: Vec<CElem<Q>> = tup.iter().map(|&i| gens[i].clone()).collect();
                        assert_eq!(eval_dipoly(&c0, &f, &args), epsilon_eval(&env, &image, &args).unwrap(), "{f}");
                    }
                }
            }
        }
    }
}

#[test]
fn lie_envelope_of_leibniz2() {
    let alg = leibniz2();
    let sigma = lie();
    let raw = Envelope::new(&alg).unwrap();
    let w = check_var_pseudo(&raw, &sigma).unwrap().expect("raw envelope is not Lie");
    assert!(w.value.terms.values().any(|c| c.c0.is_empty()));
    let var = var_envelope(&alg, &sigma).unwrap();
    assert!(var.dim_ideal() > 0);
    let env = &var.envelope;
    assert!(check_var_pseudo(env, &sigma).unwrap().is_none());
    let dv = derive_variety(&sigma).unwrap();
    assert!(check_coefficient_identities(env, &dv.identities).unwrap().is_none());
    // the closed form coefficients vanish after the quotient
    for t in &sigma.identities {
        for tup in tuples(2, t.arity()) {
            let args: Vec<CElem<Q>> = tup.iter().map(|&i| env.basis_a(i)).collect();
            assert!(env.closed_form_eval(t, &args).unwrap().is_zero());
        }
    }
}

#[test]
fn empty_sigma_gives_raw_envelope() {
    let alg = leibniz2();
    let sigma = IdentitySet::<Q>::new("free", vec![]).unwrap();
    let var = var_envelope(&alg, &sigma).unwrap();
    assert_eq!(var.dim_ideal(), 0);
    assert_eq!(var.envelope.dim_c1(), var.raw.dim_c1());
}

#[test]
fn var_envelope_requires_var_dialgebra() {
    let sl2 = leibniz_to_dialgebra(&examples::sl2::<Q>()).unwrap();
    let assoc = parse_variety::<Q>("variety associative\nidentity (x1*x2)*x3 - x1*(x2*x3)\n").unwrap();
    assert!(var_envelope(&sl2, &assoc).is_err());
}

#[test]
fn current_matrix_algebra_is_associative() {
    let mat = MatrixAlgebra::new(2);
    let cur = Current::new(mat.clone(), mat.basis::<Q>());
    let assoc = parse_variety::<Q>("variety associative\nidentity (x1*x2)*x3 - x1*(x2*x3)\n").unwrap();
    assert!(check_var_pseudo(&cur, &assoc).unwrap().is_none());
    let lie_cur = Commutator(cur);
    assert!(check_var_pseudo(&lie_cur, &lie()).unwrap().is_none());
}

#[test]
fn inclusion_extends_to_identity() {
    let alg = leibniz2();
    let var = var_envelope(&alg, &lie()).unwrap();
    let env = &var.envelope;
    let phi: Vec<CElem<Q>> = (0..2).map(|i| env.basis_a(i)).collect();
    let hom = extend_hom(env, env, phi).unwrap();
    for g in env.generators() {
        assert_eq!(hom.apply(env, &g), g);
    }
}

#[test]
fn extension_rejects_high_degree() {
    let alg = leibniz2();
    let env = Envelope::new(&alg).unwrap();
    // φ(e1) = T e1 has φ(e1)*φ(e1) of slot-1 degree 2
    let phi = vec![env.translate(&env.basis_a(0)), env.basis_a(1)];
    let e = extend_hom(&env, &env, phi).unwrap_err().to_string();
    assert!(e.contains("T-degree"), "{e}");
}
