//! Text format for polynomials: sums of products of numbers, variables,
//! parenthesized expressions and nonnegative integer powers. Juxtaposition
//! multiplies (`3xy^2`), and `/` is allowed only by a nonzero constant.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::BigRational;

/// Sparse polynomial over the rationals keyed by exponent vector.
pub type SparsePoly = BTreeMap<Vec<u32>, BigRational>;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Op(char),
}

fn tokenize(s: &str, vars: &[&str]) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[st..i].iter().collect();
            out.push(Tok::Num(text.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[st..i].iter().collect();
            split_word(&word, vars, &mut out)?;
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c == '\u{2212}' {
            out.push(Tok::Op('-'));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

// "xy" -> x, y; longest variable name first so "x12" beats "x1".
fn split_word(word: &str, vars: &[&str], out: &mut Vec<Tok>) -> Result<()> {
    let mut rest = word;
    while !rest.is_empty() {
        let best = vars
            .iter()
            .enumerate()
            .filter(|(_, v)| rest.starts_with(*v))
            .max_by_key(|(_, v)| v.len());
        match best {
            Some((idx, v)) => {
                out.push(Tok::Var(idx));
                rest = &rest[v.len()..];
                let digits = rest.chars().take_while(|c| c.is_ascii_digit()).count();
                if digits > 0 {
                    // "x2" where only x exists reads as x*2
                    out.push(Tok::Num(rest[..digits].parse().expect("digits")));
                    rest = &rest[digits..];
                }
            }
            None => return Err(Error::Parse(format!("unknown variable in {word:?}"))),
        }
    }
    Ok(())
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    nvars: usize,
}

fn constant(n: usize, c: BigRational) -> SparsePoly {
    let mut m = SparsePoly::new();
    if !c.is_zero() {
        m.insert(vec![0; n], c);
    }
    m
}

pub fn sparse_add(a: &SparsePoly, b: &SparsePoly, sign: i32) -> SparsePoly {
    let mut out = a.clone();
    for (e, c) in b {
        let entry = out.entry(e.clone()).or_insert_with(BigRational::zero);
        if sign < 0 {
            *entry -= c;
        } else {
            *entry += c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn sparse_mul(a: &SparsePoly, b: &SparsePoly) -> SparsePoly {
    let mut out = SparsePoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(BigRational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<SparsePoly> {
        let mut acc = SparsePoly::new();
        let mut sign = if self.eat('-') {
            -1
        } else {
            self.eat('+');
            1
        };
        loop {
            let t = self.term()?;
            acc = sparse_add(&acc, &t, sign);
            if self.eat('+') {
                sign = 1;
            } else if self.eat('-') {
                sign = -1;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Var(_)) | Some(Tok::Op('(')))
    }

    fn term(&mut self) -> Result<SparsePoly> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                let f = self.power()?;
                acc = sparse_mul(&acc, &f);
            } else if self.eat('/') {
                let f = self.power()?;
                let c = match f.len() {
                    1 if f.keys().next().unwrap().iter().all(|&e| e == 0) => f.values().next().unwrap().clone(),
                    _ => return Err(Error::Parse("division only by a nonzero constant".into())),
                };
                let inv = constant(self.nvars, c.recip());
                acc = sparse_mul(&acc, &inv);
            } else if self.starts_factor() {
                let f = self.power()?;
                acc = sparse_mul(&acc, &f);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<SparsePoly> {
        if self.eat('-') {
            let p = self.power()?;
            return Ok(sparse_add(&SparsePoly::new(), &p, -1));
        }
        let base = self.atom()?;
        if self.eat('^') {
            let e = match self.toks.get(self.pos) {
                Some(Tok::Num(n)) => u32::try_from(n.clone()).map_err(|_| Error::Parse("exponent too large".into()))?,
                _ => return Err(Error::Parse("expected integer exponent".into())),
            };
            self.pos += 1;
            let mut out = constant(self.nvars, BigRational::one());
            for _ in 0..e {
                out = sparse_mul(&out, &base);
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<SparsePoly> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(constant(self.nvars, BigRational::from_integer(n)))
            }
            Some(Tok::Var(v)) => {
                self.pos += 1;
                let mut e = vec![0; self.nvars];
                e[v] = 1;
                Ok(SparsePoly::from([(e, BigRational::one())]))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(inner)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses `text` as a polynomial in the named variables.
pub fn parse_sparse(text: &str, vars: &[&str]) -> Result<SparsePoly> {
    let toks = tokenize(text, vars)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut p = Parser { toks, pos: 0, nvars: vars.len() };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(out)
}

/// Prints terms in decreasing total degree, then decreasing lex exponent.
pub fn format_sparse(p: &SparsePoly, vars: &[&str]) -> String {
    if p.is_empty() {
        return "0".into();
    }
    let mut terms: Vec<(&Vec<u32>, &BigRational)> = p.iter().collect();
    terms.sort_by(|a, b| {
        let da: u32 = a.0.iter().sum();
        let db: u32 = b.0.iter().sum();
        db.cmp(&da).then_with(|| b.0.cmp(a.0))
    });
    let mut s = String::new();
    for (idx, (e, c)) in terms.into_iter().enumerate() {
        let neg = *c < BigRational::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        if idx == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let mono: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(v, &k)| if k == 1 { vars[v].to_string() } else { format!("{}^{}", vars[v], k) })
            .collect();
        let is_one = mag.is_one();
        if mono.is_empty() {
            s.push_str(&crate::rational::format_rational(&mag));
        } else {
            if !is_one {
                if mag.is_integer() {
                    s.push_str(&mag.to_integer().to_string());
                } else {
                    s.push_str(&format!("({})", crate::rational::format_rational(&mag)));
                }
                s.push('*');
            }
            s.push_str(&mono.join("*"));
        }
    }
    s
}
