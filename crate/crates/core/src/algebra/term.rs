use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::FiniteAlgebra;
use crate::error::{Error, Result};

/// A term over named variables and operation symbols.
///
/// A bare atom is a variable unless the algebra it is evaluated in has a
/// nullary operation of that name, in which case it denotes that constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn app(op: &str, args: Vec<Term>) -> Term {
        Term::App(op.to_string(), args)
    }

    /// Atoms of the term in order of first occurrence.
    pub fn atoms(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_atoms(out)),
        }
    }

    /// Variables of the term relative to `alg` (atoms that are not constants).
    pub fn variables(&self, alg: &FiniteAlgebra) -> Vec<String> {
        self.atoms()
            .into_iter()
            .filter(|a| alg.constant(a).is_none())
            .collect()
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(op, args) => {
                write!(f, "({op}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Open,
    Close,
    Eq,
    And,
    Implies,
    Atom(String),
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut atom = String::new();
    let flush = |atom: &mut String, out: &mut Vec<Token>| {
        if !atom.is_empty() {
            out.push(Token::Atom(std::mem::take(atom)));
        }
    };
    while let Some(c) = chars.next() {
        match c {
            '(' | ')' | '&' => {
                flush(&mut atom, &mut out);
                out.push(match c {
                    '(' => Token::Open,
                    ')' => Token::Close,
                    _ => Token::And,
                });
            }
            '=' => {
                flush(&mut atom, &mut out);
                if chars.peek() == Some(&'>') {
                    chars.next();
                    out.push(Token::Implies);
                } else {
                    out.push(Token::Eq);
                }
            }
            c if c.is_whitespace() => flush(&mut atom, &mut out),
            c => atom.push(c),
        }
    }
    flush(&mut atom, &mut out);
    Ok(out)
}

fn parse_term_tokens(tokens: &[Token], pos: &mut usize) -> Result<Term> {
    match tokens.get(*pos) {
        Some(Token::Atom(a)) => {
            *pos += 1;
            Ok(Term::Var(a.clone()))
        }
        Some(Token::Open) => {
            *pos += 1;
            let op = match tokens.get(*pos) {
                Some(Token::Atom(a)) => a.clone(),
                other => {
                    return Err(Error::TermSyntax(format!(
                        "expected operation symbol after `(`, found {other:?}"
                    )))
                }
            };
            *pos += 1;
            let mut args = Vec::new();
            loop {
                match tokens.get(*pos) {
                    Some(Token::Close) => {
                        *pos += 1;
                        return Ok(Term::App(op, args));
                    }
                    Some(_) => args.push(parse_term_tokens(tokens, pos)?),
                    None => return Err(Error::TermSyntax("unclosed `(`".into())),
                }
            }
        }
        other => Err(Error::TermSyntax(format!("expected term, found {other:?}"))),
    }
}

impl FromStr for Term {
    type Err = Error;

    fn from_str(s: &str) -> Result<Term> {
        let tokens = tokenize(s)?;
        let mut pos = 0;
        let t = parse_term_tokens(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(Error::TermSyntax(format!("trailing input in `{s}`")));
        }
        Ok(t)
    }
}

/// An equation `s = t` or a quasi-equation `(s1 = t1 & ..) => s = t`,
/// read with universal closure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sentence {
    Equation(Term, Term),
    Quasi {
        premises: Vec<(Term, Term)>,
        conclusion: (Term, Term),
    },
}

impl Sentence {
    pub fn equation(s: &str, t: &str) -> Result<Sentence> {
        Ok(Sentence::Equation(s.parse()?, t.parse()?))
    }

    fn terms(&self) -> Vec<&Term> {
        match self {
            Sentence::Equation(s, t) => vec![s, t],
            Sentence::Quasi {
                premises,
                conclusion,
            } => premises
                .iter()
                .flat_map(|(s, t)| [s, t])
                .chain([&conclusion.0, &conclusion.1])
                .collect(),
        }
    }

    pub fn variables(&self, alg: &FiniteAlgebra) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for t in self.terms() {
            for v in t.variables(alg) {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }
}

fn parse_equation(tokens: &[Token], pos: &mut usize) -> Result<(Term, Term)> {
    let s = parse_term_tokens(tokens, pos)?;
    if tokens.get(*pos) != Some(&Token::Eq) {
        return Err(Error::TermSyntax("expected `=`".into()));
    }
    *pos += 1;
    let t = parse_term_tokens(tokens, pos)?;
    Ok((s, t))
}

impl FromStr for Sentence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Sentence> {
        let tokens = tokenize(s)?;
        let mut pos = 0;
        let mut eqs = vec![parse_equation(&tokens, &mut pos)?];
        let mut quasi = false;
        while pos < tokens.len() {
            match tokens[pos] {
                Token::And if !quasi => {
                    pos += 1;
                    eqs.push(parse_equation(&tokens, &mut pos)?);
                }
                Token::Implies if !quasi => {
                    pos += 1;
                    quasi = true;
                    eqs.push(parse_equation(&tokens, &mut pos)?);
                }
                _ => return Err(Error::TermSyntax(format!("unexpected token in `{s}`"))),
            }
        }
        if quasi {
            let conclusion = eqs.pop().expect("conclusion parsed");
            Ok(Sentence::Quasi {
                premises: eqs,
                conclusion,
            })
        } else if eqs.len() == 1 {
            let (l, r) = eqs.pop().expect("one equation");
            Ok(Sentence::Equation(l, r))
        } else {
            Err(Error::TermSyntax("conjunction without `=>`".into()))
        }
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sentence::Equation(s, t) => write!(f, "{s} = {t}"),
            Sentence::Quasi {
                premises,
                conclusion,
            } => {
                for (i, (s, t)) in premises.iter().enumerate() {
                    if i > 0 {
                        write!(f, " & ")?;
                    }
                    write!(f, "{s} = {t}")?;
                }
                write!(f, " => {} = {}", conclusion.0, conclusion.1)
            }
        }
    }
}

/// Term with symbols resolved against one algebra.
#[derive(Debug, Clone)]
pub(crate) enum Compiled {
    Var(usize),
    Const(usize),
    App(usize, Vec<Compiled>),
}

impl Compiled {
    pub(crate) fn new(alg: &FiniteAlgebra, t: &Term, vars: &[String]) -> Result<Compiled> {
        match t {
            Term::Var(name) => {
                if let Some(c) = alg.constant(name) {
                    Ok(Compiled::Const(c))
                } else {
                    vars.iter()
                        .position(|v| v == name)
                        .map(Compiled::Var)
                        .ok_or_else(|| Error::UnboundVariable(name.clone()))
                }
            }
            Term::App(op, args) => {
                let i = alg.op_index(op)?;
                if alg.arity(i) != args.len() {
                    return Err(Error::ArityMismatch {
                        name: op.clone(),
                        arity: alg.arity(i),
                        found: args.len(),
                    });
                }
                let args = args
                    .iter()
                    .map(|a| Compiled::new(alg, a, vars))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Compiled::App(i, args))
            }
        }
    }

    pub(crate) fn eval(&self, alg: &FiniteAlgebra, env: &[usize]) -> usize {
        match self {
            Compiled::Var(i) => env[*i],
            Compiled::Const(c) => *c,
            Compiled::App(op, args) => {
                let mut idx = 0;
                for a in args {
                    idx = idx * alg.size() + a.eval(alg, env);
                }
                alg.table(*op)[idx]
            }
        }
    }
}

/// Evaluates `t` in `alg` under `env` by bottom-up table lookup.
pub fn eval_term(alg: &FiniteAlgebra, t: &Term, env: &HashMap<String, usize>) -> Result<usize> {
    let vars: Vec<String> = t.variables(alg);
    let mut values = Vec::with_capacity(vars.len());
    for v in &vars {
        let x = *env.get(v).ok_or_else(|| Error::UnboundVariable(v.clone()))?;
        alg.check_element(x)?;
        values.push(x);
    }
    Ok(Compiled::new(alg, t, &vars)?.eval(alg, &values))
}

/// Returns a falsifying assignment of `s` in `alg`, if any.
pub fn counterexample(
    alg: &FiniteAlgebra,
    s: &Sentence,
    max_evals: u64,
) -> Result<Option<Vec<(String, usize)>>> {
    let vars = s.variables(alg);
    let terms = s.terms();
    let assignments = (alg.size() as u128).checked_pow(vars.len() as u32);
    let needed = assignments.map(|a| a.saturating_mul(terms.len() as u128));
    if needed.is_none_or(|n| n > max_evals as u128) {
        return Err(Error::Budget {
            what: format!("sentence check `{s}` on `{}`", alg.name()),
            needed: needed.unwrap_or(u128::MAX),
            limit: max_evals as u128,
        });
    }
    let compile = |(l, r): &(Term, Term)| -> Result<(Compiled, Compiled)> {
        Ok((Compiled::new(alg, l, &vars)?, Compiled::new(alg, r, &vars)?))
    };
    let (premises, conclusion) = match s {
        Sentence::Equation(l, r) => (Vec::new(), compile(&(l.clone(), r.clone()))?),
        Sentence::Quasi {
            premises,
            conclusion,
        } => (
            premises.iter().map(compile).collect::<Result<Vec<_>>>()?,
            compile(conclusion)?,
        ),
    };
    let mut found = None;
    let mut env = vec![0; vars.len()];
    loop {
        let holds = |(l, r): &(Compiled, Compiled)| l.eval(alg, &env) == r.eval(alg, &env);
        if premises.iter().all(holds) && !holds(&conclusion) {
            found = Some(vars.iter().cloned().zip(env.iter().copied()).collect());
            break;
        }
        if !super::next_tuple(&mut env, alg.size()) {
            break;
        }
    }
    Ok(found)
}

/// True iff `s` holds in `alg` under every assignment.
pub fn satisfies(alg: &FiniteAlgebra, s: &Sentence, max_evals: u64) -> Result<bool> {
    Ok(counterexample(alg, s, max_evals)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn env(pairs: &[(&str, usize)]) -> HashMap<String, usize> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn eval_examples() {
        let z4 = corpus::get("z4");
        let t: Term = "(+ x x)".parse().unwrap();
        assert_eq!(eval_term(&z4, &t, &env(&[("x", 3)])).unwrap(), 2);
        assert_eq!(eval_term(&z4, &Term::var("x"), &env(&[("x", 1)])).unwrap(), 1);
        let c2 = corpus::get("chain2");
        let m: Term = "(meet x y)".parse().unwrap();
        assert_eq!(eval_term(&c2, &m, &env(&[("x", 1), ("y", 0)])).unwrap(), 0);
    }

    #[test]
    fn eval_errors() {
        let z4 = corpus::get("z4");
        let t: Term = "(+ x y)".parse().unwrap();
        assert_eq!(
            eval_term(&z4, &t, &env(&[("x", 1)])),
            Err(Error::UnboundVariable("y".into()))
        );
        let u: Term = "(* x x)".parse().unwrap();
        assert_eq!(
            eval_term(&z4, &u, &env(&[("x", 1)])),
            Err(Error::UnknownOperation("*".into()))
        );
        let w: Term = "(+ x)".parse().unwrap();
        assert!(matches!(
            eval_term(&z4, &w, &env(&[("x", 1)])),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn constants_resolve() {
        let z4 = corpus::get("z4");
        let t: Term = "(+ x 0)".parse().unwrap();
        assert_eq!(t.variables(&z4), vec!["x".to_string()]);
        assert_eq!(eval_term(&z4, &t, &env(&[("x", 3)])).unwrap(), 3);
    }

    #[test]
    fn parse_roundtrip() {
        let t: Term = "(+ x (+ y y))".parse().unwrap();
        assert_eq!(t.to_string(), "(+ x (+ y y))");
        assert!("(+ x".parse::<Term>().is_err());
        assert!("x y".parse::<Term>().is_err());
        let s: Sentence = "(meet x y) = (meet x z) & (join x y) = (join x z) => y = z"
            .parse()
            .unwrap();
        assert!(matches!(s, Sentence::Quasi { ref premises, .. } if premises.len() == 2));
        assert_eq!(s.to_string().parse::<Sentence>().unwrap(), s);
        assert!("x = y & y = z".parse::<Sentence>().is_err());
    }

    #[test]
    fn satisfies_examples() {
        let z4 = corpus::get("z4");
        let comm: Sentence = "(+ x y) = (+ y x)".parse().unwrap();
        assert!(satisfies(&z4, &comm, 1000).unwrap());
        let v4 = corpus::get("v4");
        let exp2: Sentence = "(+ x x) = 0".parse().unwrap();
        assert!(satisfies(&v4, &exp2, 1000).unwrap());
        assert!(!satisfies(&z4, &exp2, 1000).unwrap());
        let c3 = corpus::get("chain3");
        let dist: Sentence = "(join x (meet y z)) = (meet (join x y) (join x z))"
            .parse()
            .unwrap();
        assert!(satisfies(&c3, &dist, 1000).unwrap());
    }

    #[test]
    fn satisfies_budget() {
        let z4 = corpus::get("z4");
        let s: Sentence = "(+ x (+ y z)) = (+ (+ x y) z)".parse().unwrap();
        // 4^3 assignments, two terms each
        assert!(satisfies(&z4, &s, 128).unwrap());
        assert!(matches!(satisfies(&z4, &s, 127), Err(Error::Budget { .. })));
    }

    #[test]
    fn counterexample_reported() {
        let z4 = corpus::get("z4");
        let s: Sentence = "(+ x x) = 0".parse().unwrap();
        let cex = counterexample(&z4, &s, 100).unwrap().unwrap();
        assert_eq!(cex, vec![("x".to_string(), 1)]);
    }
}
