use divaria_core::combinatorics::{sym_compose, Partition};
use divaria_core::conformal::{embed_associative, verify_representation, ConformalRep};
use divaria_core::dialgebra::{leibniz_to_dialgebra, unit, Dialgebra, FDDialgebra, Witness};
use divaria_core::operads::{axiom_check, check_sym_to_e, IdentitySet, OperadId};
use divaria_core::pseudo::envelope::{extend_hom, var_envelope};
use divaria_core::pseudo::{
    check_coefficient_identities, check_new_c, check_var_pseudo, oracle_check, CoefficientDialgebra, Envelope,
    PseudoAlgebra,
};
use divaria_core::translate::{derive_variety, psi_suite, rewrite_single_op, verify_derived};
use divaria_core::{DiPoly, Error, Rational, Result, Scalar};

use crate::input::{load_dialgebra, load_leibniz, load_variety, parse_cycles};
use crate::{Cli, Command, Report, Section, Source};

type Q = Rational;

pub(crate) fn execute(cli: &Cli, echo: String) -> Report {
    let mut report = Report::new(echo, cli.seed);
    let result = match &cli.command {
        Command::Derive { variety, single_op } => derive(&mut report, variety, *single_op),
        Command::Check { source, variety } => check(&mut report, source, variety.as_deref()),
        Command::Envelope { source, variety, verify, max_arity } => {
            let degree = max_arity.unwrap_or(if *verify { 4 } else { 3 });
            envelope(&mut report, source, variety.as_deref(), *verify, degree)
        }
        Command::Represent { leibniz, module, truncation } => represent(&mut report, leibniz, *module, *truncation),
        Command::OperadSelftest { max_arity, trials } => selftest(&mut report, *max_arity, *trials, cli.seed),
    };
    match result {
        Ok(()) => {}
        Err(Error::Precondition(m)) => report.push(Section::check("precondition", false, vec![m])),
        Err(e) => report.fail_with_error(e.to_string()),
    }
    report
}

/// `c1 e1 + c2 e2 + …` with zero terms dropped.
pub(crate) fn fmt_vec(v: &[Q], labels: &[String]) -> String {
    let (zero, one) = (Q::from_int(0), Q::from_int(1));
    let mut out = String::new();
    for (c, l) in v.iter().zip(labels) {
        if *c == zero {
            continue;
        }
        let neg = *c < zero;
        let abs = if neg { -c.clone() } else { c.clone() };
        let coeff = if abs == one { String::new() } else { format!("{abs} ") };
        match (out.is_empty(), neg) {
            (true, false) => {}
            (true, true) => out.push('-'),
            (false, false) => out.push_str(" + "),
            (false, true) => out.push_str(" - "),
        }
        out.push_str(&coeff);
        out.push_str(l);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn fmt_tuple(t: &[usize], labels: &[String]) -> String {
    let names: Vec<&str> = t.iter().map(|&i| labels.get(i).map_or("?", String::as_str)).collect();
    format!("({})", names.join(", "))
}

fn fmt_matrix<K: Scalar>(m: &[K], n: usize) -> String {
    let rows: Vec<String> = m
        .chunks(n)
        .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

/// Names of the identities returned by `derive_variety`, in order.
fn derived_names(sigma: &IdentitySet<Q>) -> Vec<String> {
    let mut names = vec!["z1".to_string(), "z2".to_string()];
    for (t, p) in sigma.identities.iter().enumerate() {
        for i in 0..p.arity() {
            names.push(format!("t{}⊗e{}", t + 1, i + 1));
        }
    }
    names
}

fn derive(report: &mut Report, variety: &str, single_op: bool) -> Result<()> {
    let sigma = load_variety(variety)?;
    let lines = sigma.identities.iter().enumerate().map(|(k, t)| format!("t{}: {t}", k + 1)).collect();
    report.push(Section::info(format!("variety {}", sigma.name), lines));
    let dv = derive_variety(&sigma)?;
    let names = derived_names(&sigma);
    let show = |range: std::ops::Range<usize>| -> Vec<String> {
        range.map(|k| format!("{}: {}", names[k], dv.identities[k])).collect()
    };
    report.push(Section::info("0-identities", show(0..2)));
    report.push(Section::info("derived identities", show(2..dv.identities.len())));
    let rt = verify_derived(&dv);
    report.push(Section::check("Ψ maps each identity back to its source", rt.is_ok(), rt.err().map(|e| e.to_string()).into_iter().collect()));
    if single_op {
        match rewrite_single_op(&dv) {
            Ok(ps) => {
                let lines = ps.iter().enumerate().map(|(k, p)| format!("s{}: {p}", k + 1)).collect();
                report.push(Section::info("single-operation identities", lines));
            }
            Err(Error::Precondition(m)) => report.push(Section::check("single-operation form", false, vec![m])),
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

fn load_source(source: &Source) -> Result<(String, FDDialgebra<Q>)> {
    match (&source.dialgebra, &source.leibniz) {
        (Some(f), _) => Ok((f.clone(), load_dialgebra(f)?)),
        (None, Some(f)) => {
            let (g, labels) = load_leibniz(f)?;
            let mut d = leibniz_to_dialgebra(&g)?;
            d.labels = labels;
            Ok((f.clone(), d))
        }
        (None, None) => Err(Error::Input("give --dialgebra or --leibniz".into())),
    }
}

fn witness_lines(w: &Witness<Vec<Q>>, names: &[String], ids: &[DiPoly<Q>], labels: &[String]) -> Vec<String> {
    vec![
        format!("{}: {}", names[w.identity], ids[w.identity]),
        format!("at {}: value {}", fmt_tuple(&w.tuple, labels), fmt_vec(&w.defect, labels)),
    ]
}

/// Pushes the 0-axiom check; returns whether it passed.
fn zero_axioms(report: &mut Report, a: &FDDialgebra<Q>) -> bool {
    let ids = divaria_core::translate::zero_axioms::<Q>();
    let names = ["z1".to_string(), "z2".to_string()];
    let w = a.is_zero_dialgebra();
    let lines = w.as_ref().map(|w| witness_lines(w, &names, &ids, &a.labels)).unwrap_or_default();
    report.push(Section::check("0-dialgebra axioms", w.is_none(), lines));
    w.is_none()
}

fn var_identities(report: &mut Report, a: &FDDialgebra<Q>, sigma: &IdentitySet<Q>) -> Result<bool> {
    let dv = derive_variety(sigma)?;
    let w = a.is_var_dialgebra(sigma)?;
    let lines = match &w {
        Some(w) => witness_lines(w, &derived_names(sigma), &dv.identities, &a.labels),
        None => vec![format!("{} identities on all basis tuples", dv.identities.len())],
    };
    report.push(Section::check(format!("identities of {}-dialgebras", sigma.name), w.is_none(), lines));
    Ok(w.is_none())
}

fn describe(name: &str, a: &FDDialgebra<Q>) -> Section {
    Section::info("dialgebra", vec![format!("source: {name}"), format!("dim: {}", a.dim), format!("basis: {}", a.labels.join(" "))])
}

fn check(report: &mut Report, source: &Source, variety: Option<&str>) -> Result<()> {
    let (name, a) = load_source(source)?;
    let sigma = variety.map(load_variety).transpose()?;
    report.push(describe(&name, &a));
    zero_axioms(report, &a);
    if let Some(sigma) = sigma {
        var_identities(report, &a, &sigma)?;
    }
    Ok(())
}

/// `a(e_i)⊣a(e_j) = a(e_i⊣e_j)` and the same for `⊢` in `C^{(0)}`.
fn restriction_check(env: &Envelope<Q>) -> Option<String> {
    let coeff = CoefficientDialgebra(env);
    let d = env.dim_a();
    for i in 0..d {
        for j in 0..d {
            let (x, y) = (env.basis_a(i), env.basis_a(j));
            let (ei, ej) = (unit(d, i), unit(d, j));
            if coeff.left(&x, &y) != env.a(&env.algebra.dashv(&ei, &ej)) {
                return Some(format!("-| at (e{}, e{})", i + 1, j + 1));
            }
            if coeff.right(&x, &y) != env.a(&env.algebra.vdash(&ei, &ej)) {
                return Some(format!("|- at (e{}, e{})", i + 1, j + 1));
            }
        }
    }
    None
}

fn oracle_section(report: &mut Report, title: &str, env: &Envelope<Q>, degree: usize) -> Result<()> {
    let r = oracle_check(env, degree, degree)?;
    let mut lines = vec![
        format!("words of degree ≤ {degree}, all shapes and orderings"),
        format!("{} evaluations on basis tuples of A", r.plain_cases),
        format!("{} evaluations with one argument in the A⊗A part", r.c1_cases),
    ];
    lines.extend(r.failure.clone().map(|f| format!("mismatch: {f}")));
    report.push(Section::check(title, r.passed(), lines));
    Ok(())
}

fn new_c_check<P: PseudoAlgebra<Q>>(p: &P) -> Option<String> {
    let gens = p.generators();
    for (i, x) in gens.iter().enumerate() {
        for (j, y) in gens.iter().enumerate() {
            if let Some(m) = check_new_c(p, x, y, 2) {
                return Some(format!("generators {} and {}: {m}", i + 1, j + 1));
            }
        }
    }
    None
}

fn opt_check(report: &mut Report, title: &str, failure: Option<String>, ok: Vec<String>) {
    match failure {
        None => report.push(Section::check(title, true, ok)),
        Some(f) => report.push(Section::check(title, false, vec![f])),
    }
}

fn envelope(report: &mut Report, source: &Source, variety: Option<&str>, verify: bool, degree: usize) -> Result<()> {
    let (name, a) = load_source(source)?;
    let sigma = variety.map(load_variety).transpose()?;
    report.push(describe(&name, &a));
    if !zero_axioms(report, &a) {
        return Ok(());
    }
    let env = Envelope::new(&a)?;
    let d = a.dim;
    report.push(Section::info(
        "envelope C(A)",
        vec![
            format!("dim A = {d}"),
            format!("dim A⊗A = {}", d * d),
            format!("dim U = {}", env.dim_u()),
            format!("dim (A⊗A)/U = {}", env.dim_c1()),
        ],
    ));
    oracle_section(report, "closed forms agree with the recursive evaluator on C(A)", &env, degree)?;
    opt_check(report, "A is a subdialgebra of C(A)^(0)", restriction_check(&env), vec![]);
    opt_check(report, "translation relations of n-products on C(A)", new_c_check(&env), vec!["0 ≤ n ≤ 2 on all generator pairs".into()]);
    let Some(sigma) = sigma else {
        if verify {
            let ext = extend_hom(&env, &env, (0..d).map(|i| env.basis_a(i)).collect());
            opt_check(report, "the inclusion A → C(A)^(0) extends to C(A)", ext.err().map(|e| e.to_string()), vec![]);
        }
        return Ok(());
    };
    if !var_identities(report, &a, &sigma)? {
        return Ok(());
    }
    let raw = check_var_pseudo(&env, &sigma)?;
    report.push(Section::info(
        format!("{} identities on C(A)", sigma.name),
        vec![match &raw {
            None => "t* vanishes on all generator tuples".into(),
            Some(w) => format!("t{}* is nonzero at generators {:?}", w.identity + 1, w.tuple.iter().map(|i| i + 1).collect::<Vec<_>>()),
        }],
    ));
    let var = var_envelope(&a, &sigma)?;
    let venv = &var.envelope;
    report.push(Section::info(
        format!("C_{}(A) = C(A)/I", sigma.name),
        vec![
            format!("dim of the image of I in (A⊗A)/U = {}", var.dim_ideal()),
            "I meets H⊗A trivially".into(),
            format!("dim of the A⊗A part of the quotient = {}", venv.dim_c1()),
        ],
    ));
    let w = check_var_pseudo(venv, &sigma)?;
    opt_check(
        report,
        &format!("t* vanishes on C_{}(A)", sigma.name),
        w.map(|w| format!("t{}* is nonzero at generators {:?}", w.identity + 1, w.tuple)),
        vec![format!("{} identities on all generator tuples", sigma.identities.len())],
    );
    let dv = derive_variety(&sigma)?;
    let w = check_coefficient_identities(venv, &dv.identities)?;
    let names = derived_names(&sigma);
    opt_check(
        report,
        &format!("C_{}(A)^(0) satisfies the derived identities", sigma.name),
        w.map(|w| format!("{} fails at generators {:?}", names[w.identity], w.tuple)),
        vec!["on generators and their translates".into()],
    );
    opt_check(report, &format!("A is a subdialgebra of C_{}(A)^(0)", sigma.name), restriction_check(venv), vec![]);
    if verify {
        oracle_section(report, &format!("closed forms agree with the recursive evaluator on C_{}(A)", sigma.name), venv, degree)?;
        let ext = extend_hom(venv, venv, (0..d).map(|i| venv.basis_a(i)).collect());
        opt_check(report, &format!("the inclusion A → C_{}(A)^(0) extends", sigma.name), ext.err().map(|e| e.to_string()), vec![]);
    }
    Ok(())
}

fn represent(report: &mut Report, leibniz: &str, module: divaria_core::conformal::ModuleChoice, truncation: usize) -> Result<()> {
    let (g, labels) = load_leibniz(leibniz)?;
    let rep = ConformalRep::build(&g, module)?;
    let n = rep.m0_dim;
    let mut lines = vec![
        format!("source: {leibniz}"),
        format!("dim g = {}, dim l = {}, dim V = {} ({}), dim M0 = {n}", g.dim, rep.data.l.dim, rep.v_dim, format!("{module:?}").to_lowercase()),
    ];
    for (x, l) in labels.iter().enumerate() {
        lines.push(format!("rho0({l}) = {}", fmt_matrix(&rep.rho0[x], n)));
        lines.push(format!("rho1({l}) = {}", fmt_matrix(&rep.rho1[x], n)));
    }
    report.push(Section::info("representation ρ(x) = ρ0(x) − T·ρ1(x)", lines));
    let r = verify_representation(&rep);
    let checks = [
        ("ρ1(a)ρ1(b) = 0", &r.rho1_square),
        ("[ρ0(a), ρ0(b)] = ρ0(a-|b)", &r.bracket0),
        ("[ρ1(a), ρ0(b)] = ρ1(a-|b)", &r.bracket1),
        ("ρ is a dialgebra homomorphism into the coefficient dialgebra", &r.dialgebra_hom),
    ];
    for (title, f) in checks {
        opt_check(report, title, f.clone().map(|m| format!("fails at {m}")), vec![]);
    }
    opt_check(report, "faithful", r.faithful.clone(), vec![format!("rank of ρ1 = {}", r.rho1_rank)]);
    let e = embed_associative(&rep, truncation)?;
    let mut lines = vec![
        format!("dim of the generated subspace = {}", e.generated_dim),
        format!("T-degree truncation {}, largest degree reached {}", e.truncation, e.max_degree_seen),
    ];
    lines.extend(e.failures.iter().map(|f| format!("fails: {f}")));
    report.push(Section::check("associative dialgebra identities on the generated subspace", e.passed(), lines));

    let lie = crate::input::load_variety("lie.var")?;
    let a = rep.data.dialgebra.clone();
    let var = var_envelope(&a, &lie)?;
    let target = rep.lie_current();
    match extend_hom(&var.envelope, &target, rep.images()) {
        Ok(hom) => {
            let agrees = (0..g.dim).all(|i| hom.apply(&target, &var.envelope.basis_a(i)) == rep.rho(i));
            let lines = vec![
                "H-linear, vanishes on U and I, preserves products of generators".into(),
                format!("agrees with ρ on g: {}", if agrees { "yes" } else { "no" }),
            ];
            report.push(Section::check("ρ extends from C_lie(g) to the Lie current algebra", agrees, lines));
        }
        Err(e) => report.push(Section::check("ρ extends from C_lie(g) to the Lie current algebra", false, vec![e.to_string()])),
    }
    Ok(())
}

fn selftest(report: &mut Report, max_arity: usize, trials: usize, seed: u64) -> Result<()> {
    let ops = [
        OperadId::Sym,
        OperadId::E,
        OperadId::AlgS,
        OperadId::DialgS,
        OperadId::tensor(vec![OperadId::AlgS, OperadId::E])?,
    ];
    for op in &ops {
        let r = axiom_check(op, max_arity, trials, seed);
        let mut lines = vec![format!("{} instances, {} law checks, arity ≤ {max_arity}", r.trials, r.checks)];
        lines.extend(r.failures.iter().map(|f| format!("{}: {}", f.law, f.witness)));
        report.push(Section::check(format!("operad laws for {}", r.operad), r.passed(), lines));
    }
    let outer = parse_cycles(3, "(123)")?;
    let taus = [parse_cycles(3, "(132)")?, parse_cycles(2, "(12)")?, parse_cycles(4, "(234)")?];
    let got = sym_compose(&outer, &Partition::new(vec![3, 2, 4])?, &taus)?.one_line();
    let expected = vec![7, 5, 6, 9, 8, 1, 3, 4, 2];
    report.push(Section::check(
        "Comp^(3,2,4)((123), (132), (12), (234)) in Sym",
        got == expected,
        vec![format!("{got:?}")],
    ));
    opt_check(report, "σ ↦ e_(nσ⁻¹) preserves composition", check_sym_to_e(max_arity, trials, seed), vec![format!("{trials} instances")]);
    let p = psi_suite(trials, max_arity, seed);
    opt_check(
        report,
        "Ψ: composition, equivariance, section, center rule",
        p.failure.clone(),
        vec![format!("{} random dialgebra monomials of arity ≤ {max_arity}", p.samples)],
    );
    Ok(())
}
