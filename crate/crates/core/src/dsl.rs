//! Text format for identities and variety files.
//!
//! ```text
//! # comment
//! variety lie
//! vars x1 x2 x3
//! identity x1*(x2*x3) - (x1*x2)*x3 - x2*(x1*x3)
//! identity x1*x2 + x2*x1
//! ```
//!
//! `expr := term (('+'|'-') term)*`, `term := [rational] factor`,
//! `factor := var | '(' expr ')' | factor op factor` with `op` one of `*`, `|-`, `-|`
//! and chains read left to right.

use std::collections::BTreeSet;

use crate::error::{input_err, Error, Result};
use crate::operads::IdentitySet;
use crate::scalar::Scalar;
use crate::terms::{DiOp, Label, Monomial, Poly, Tree};

/// Labels that have a textual operator.
pub trait ParseLabel: Label {
    fn from_symbol(s: &str) -> Option<Self>;
}

impl ParseLabel for () {
    fn from_symbol(s: &str) -> Option<Self> {
        (s == "*").then_some(())
    }
}

impl ParseLabel for DiOp {
    fn from_symbol(s: &str) -> Option<Self> {
        match s {
            "|-" => Some(DiOp::Right),
            "-|" => Some(DiOp::Left),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Var(usize),
    Num(i64, i64),
    Op(&'static str),
    Plus,
    Minus,
    Open,
    Close,
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |col: usize, msg: &str| input_err!("column {}: {msg}", col + 1);
    while i < b.len() {
        let c = b[i];
        let start = i;
        match c {
            b' ' | b'\t' => {
                i += 1;
                continue;
            }
            b'(' => {
                out.push((Tok::Open, start));
                i += 1;
            }
            b')' => {
                out.push((Tok::Close, start));
                i += 1;
            }
            b'+' => {
                out.push((Tok::Plus, start));
                i += 1;
            }
            b'*' => {
                out.push((Tok::Op("*"), start));
                i += 1;
            }
            b'|' => {
                if b.get(i + 1) != Some(&b'-') {
                    return Err(err(start, "expected '|-'"));
                }
                out.push((Tok::Op("|-"), start));
                i += 2;
            }
            b'-' => {
                if b.get(i + 1) == Some(&b'|') {
                    out.push((Tok::Op("-|"), start));
                    i += 2;
                } else {
                    out.push((Tok::Minus, start));
                    i += 1;
                }
            }
            b'x' => {
                i += 1;
                let d0 = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                let k: usize = s[d0..i].parse().map_err(|_| err(start, "expected variable index after 'x'"))?;
                if k == 0 {
                    return Err(err(start, "variables are numbered from x1"));
                }
                out.push((Tok::Var(k - 1), start));
            }
            b'0'..=b'9' => {
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                let p: i64 = s[start..i].parse().map_err(|_| err(start, "coefficient out of range"))?;
                let mut q = 1;
                if b.get(i) == Some(&b'/') {
                    i += 1;
                    let d0 = i;
                    while i < b.len() && b[i].is_ascii_digit() {
                        i += 1;
                    }
                    q = s[d0..i].parse().map_err(|_| err(d0, "expected denominator"))?;
                    if q == 0 {
                        return Err(err(d0, "zero denominator"));
                    }
                }
                out.push((Tok::Num(p, q), start));
            }
            _ => return Err(err(start, &format!("unexpected character '{}'", s[start..].chars().next().unwrap()))),
        }
    }
    Ok(out)
}

/// Expanded value: coefficient, shape and the variables on its leaves.
type Value<K, L> = Vec<(K, Tree<L>, Vec<usize>)>;

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(_, c)| *c).unwrap_or(self.len) + 1
    }

    fn fail(&self, msg: &str) -> Error {
        input_err!("column {}: {msg}", self.col())
    }

    fn expr<K: Scalar, L: ParseLabel>(&mut self) -> Result<Value<K, L>> {
        let mut sign = K::one();
        match self.peek() {
            Some(Tok::Minus) => {
                sign = -K::one();
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let mut acc: Value<K, L> = Vec::new();
        loop {
            for (c, t, v) in self.term::<K, L>()? {
                acc.push((sign.clone() * c, t, v));
            }
            match self.peek() {
                Some(Tok::Plus) => sign = K::one(),
                Some(Tok::Minus) => sign = -K::one(),
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term<K: Scalar, L: ParseLabel>(&mut self) -> Result<Value<K, L>> {
        let coef = if let Some(Tok::Num(p, q)) = self.peek() {
            let c = K::from_int(*p) / K::from_int(*q);
            self.pos += 1;
            c
        } else {
            K::one()
        };
        let mut acc = self.atom::<K, L>()?;
        while let Some(Tok::Op(sym)) = self.peek() {
            let op = L::from_symbol(sym).ok_or_else(|| self.fail(&format!("operator '{sym}' not allowed here")))?;
            self.pos += 1;
            let rhs = self.atom::<K, L>()?;
            let mut next = Vec::with_capacity(acc.len() * rhs.len());
            for (c1, t1, v1) in &acc {
                for (c2, t2, v2) in &rhs {
                    let mut v = v1.clone();
                    v.extend(v2.iter().copied());
                    next.push((c1.clone() * c2.clone(), Tree::node(op.clone(), t1.clone(), t2.clone()), v));
                }
            }
            acc = next;
        }
        Ok(acc.into_iter().map(|(c, t, v)| (coef.clone() * c, t, v)).collect())
    }

    fn atom<K: Scalar, L: ParseLabel>(&mut self) -> Result<Value<K, L>> {
        match self.peek() {
            Some(Tok::Var(k)) => {
                let k = *k;
                self.pos += 1;
                Ok(vec![(K::one(), Tree::Leaf, vec![k])])
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let v = self.expr::<K, L>()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(self.fail("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(_) => Err(self.fail("expected a variable or '('")),
            None => Err(self.fail("unexpected end of expression")),
        }
    }
}

/// Parses a multilinear polynomial; columns in errors are 1-based.
pub fn parse_expr<K: Scalar, L: ParseLabel>(s: &str) -> Result<Poly<Monomial<L>, K>> {
    let toks = lex(s)?;
    let mut p = Parser { toks: &toks, pos: 0, len: s.len() };
    let value = p.expr::<K, L>()?;
    if p.pos != toks.len() {
        return Err(p.fail("unexpected token"));
    }
    let mut vars: Option<BTreeSet<usize>> = None;
    for (_, _, v) in &value {
        let set: BTreeSet<usize> = v.iter().copied().collect();
        if set.len() != v.len() {
            let mut seen = BTreeSet::new();
            let dup = v.iter().find(|x| !seen.insert(**x)).unwrap();
            return Err(input_err!("not multilinear: x{} repeated in a monomial", dup + 1));
        }
        match &vars {
            None => vars = Some(set),
            Some(s0) if *s0 != set => return Err(input_err!("not multilinear: monomials use different variables")),
            _ => {}
        }
    }
    let vars = vars.ok_or_else(|| input_err!("empty expression"))?;
    let n = vars.len();
    if let Some(&m) = vars.iter().next_back() {
        if m + 1 != n {
            return Err(input_err!("variables must be x1..x{n}, found x{}", m + 1));
        }
    }
    let terms = value
        .into_iter()
        .map(|(c, t, v)| Monomial::from_word(t, v).map(|m| (c, m)))
        .collect::<Result<Vec<_>>>()?;
    Poly::from_terms(n, terms)
}

/// Parses a variety file.
pub fn parse_variety<K: Scalar>(text: &str) -> Result<IdentitySet<K>> {
    let mut name: Option<String> = None;
    let mut declared: Option<BTreeSet<usize>> = None;
    let mut identities = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let trimmed = line.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = line.len() - trimmed.len();
        let (kw, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed.trim_end(), ""));
        let at = |e: Error, offset: usize| match e {
            Error::Input(m) => match m.strip_prefix("column ") {
                Some(tail) => {
                    let (c, msg) = tail.split_once(':').unwrap_or(("1", tail));
                    let c: usize = c.parse().unwrap_or(1);
                    input_err!("line {}, column {}:{msg}", ln + 1, c + offset)
                }
                None => input_err!("line {}: {m}", ln + 1),
            },
            other => other,
        };
        let rest_offset = indent + kw.len() + (trimmed.len() - kw.len() - rest.len());
        match kw {
            "variety" => {
                let n = rest.trim();
                if n.is_empty() || n.contains(char::is_whitespace) {
                    return Err(input_err!("line {}: expected 'variety NAME'", ln + 1));
                }
                if name.is_some() {
                    return Err(input_err!("line {}: duplicate 'variety' header", ln + 1));
                }
                name = Some(n.to_string());
            }
            "vars" => {
                let mut set = BTreeSet::new();
                for v in rest.split_whitespace() {
                    match lex(v).map_err(|e| at(e, rest_offset))?.as_slice() {
                        [(Tok::Var(k), _)] => {
                            set.insert(*k);
                        }
                        _ => return Err(input_err!("line {}: bad variable '{v}'", ln + 1)),
                    }
                }
                declared = Some(set);
            }
            "identity" => {
                if name.is_none() {
                    return Err(input_err!("line {}: 'identity' before the 'variety' header", ln + 1));
                }
                let p: Poly<Monomial<()>, K> = parse_expr(rest).map_err(|e| at(e, rest_offset))?;
                if p.is_zero() {
                    return Err(input_err!("line {}: identity is zero", ln + 1));
                }
                if let Some(d) = &declared {
                    if let Some(k) = (0..p.arity()).find(|k| !d.contains(k)) {
                        return Err(input_err!("line {}: x{} is not declared", ln + 1, k + 1));
                    }
                }
                identities.push(p);
            }
            other => {
                return Err(input_err!("line {}, column {}: unknown keyword '{other}'", ln + 1, indent + 1));
            }
        }
    }
    let name = name.ok_or_else(|| input_err!("missing 'variety NAME' header"))?;
    IdentitySet::new(name, identities)
}

/// Canonical text of an identity set; `parse_variety` reads it back unchanged.
pub fn print_variety<K: Scalar>(sigma: &IdentitySet<K>) -> String {
    let mut out = format!("variety {}\n", sigma.name);
    let n = sigma.max_arity();
    let vars: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    out.push_str(&format!("vars {}\n", vars.join(" ")));
    for t in &sigma.identities {
        out.push_str(&format!("identity {t}\n"));
    }
    out
}
