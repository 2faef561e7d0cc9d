//! Canonical text and JSON forms of polynomials.
//!
//! Text: terms in descending grevlex order, each written
//! `c * v^e * ...` with the coefficient always present, joined by ` + ` or
//! ` - `. The zero polynomial is `0`. JSON:
//! `{"terms":[{"coeff":"c","monomial":[["x[1,1]",2],...]},...]}`.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{Monomial, Polynomial, Var};
use crate::arith::{parse_rational, rational_to_string, Rational};
use crate::error::{Error, Result};

pub fn to_text(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().iter().enumerate() {
        let shown = if k == 0 {
            rational_to_string(c)
        } else if c.is_negative() {
            out.push_str(" - ");
            rational_to_string(&-c)
        } else {
            out.push_str(" + ");
            rational_to_string(c)
        };
        out.push_str(&shown);
        if !m.is_one() {
            out.push_str(" * ");
            out.push_str(&m.to_string());
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Var(Var),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            toks.push(Tok::Num(chars[start..i].iter().collect()));
        } else if matches!(c, 'x' | 'a' | 'b') {
            let close = chars[i..]
                .iter()
                .position(|&d| d == ']')
                .ok_or_else(|| Error::Parse(format!("unterminated variable at offset {i}")))?;
            let text: String = chars[i..=i + close].iter().collect();
            toks.push(Tok::Var(Var::parse(&text)?));
            i += close + 1;
        } else if matches!(c, '+' | '-' | '*' | '/' | '^') {
            toks.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}` at offset {i}")));
        }
    }
    Ok(toks)
}

/// Parse the text form. Accepts any arrangement of terms, signs and
/// factors, not only the canonical one.
pub fn parse_text(s: &str) -> Result<Polynomial> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut terms = Vec::new();
    let mut i = 0;
    let err = |msg: &str| Error::Parse(format!("{msg} in `{s}`"));
    while i < toks.len() {
        let mut coeff = Rational::one();
        let mut seen_sign = false;
        while let Some(Tok::Op(c @ ('+' | '-'))) = toks.get(i) {
            if *c == '-' {
                coeff = -coeff;
            }
            seen_sign = true;
            i += 1;
        }
        if !seen_sign && !terms.is_empty() {
            return Err(err("missing operator between terms"));
        }
        let mut pairs = Vec::new();
        loop {
            match toks.get(i) {
                Some(Tok::Num(n)) => {
                    let mut text = n.clone();
                    i += 1;
                    if let (Some(Tok::Op('/')), Some(Tok::Num(d))) = (toks.get(i), toks.get(i + 1)) {
                        text = format!("{text}/{d}");
                        i += 2;
                    }
                    coeff *= parse_rational(&text)?;
                }
                Some(Tok::Var(v)) => {
                    i += 1;
                    let mut e = 1u32;
                    if let Some(Tok::Op('^')) = toks.get(i) {
                        match toks.get(i + 1) {
                            Some(Tok::Num(n)) => e = n.parse().map_err(|_| err("bad exponent"))?,
                            _ => return Err(err("missing exponent")),
                        }
                        i += 2;
                    }
                    pairs.push((*v, e));
                }
                _ => return Err(err("expected a factor")),
            }
            if let Some(Tok::Op('*')) = toks.get(i) {
                i += 1;
            } else {
                break;
            }
        }
        terms.push((Monomial::from_pairs(pairs), coeff));
        if let Some(t @ (Tok::Num(_) | Tok::Var(_))) = toks.get(i) {
            return Err(err(&format!("unexpected token {t:?}")));
        }
    }
    Ok(Polynomial::from_terms(terms))
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: String,
    monomial: Vec<(String, u32)>,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    terms: Vec<TermJson>,
}

pub fn to_json(p: &Polynomial) -> String {
    let doc = PolyJson {
        terms: p
            .terms()
            .iter()
            .map(|(m, c)| TermJson {
                coeff: rational_to_string(c),
                monomial: m.factors().iter().map(|&(v, e)| (v.to_string(), e)).collect(),
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("serializable")
}

pub fn from_json(s: &str) -> Result<Polynomial> {
    let doc: PolyJson = serde_json::from_str(s)?;
    let mut terms = Vec::with_capacity(doc.terms.len());
    for t in doc.terms {
        let c = parse_rational(&t.coeff)?;
        let pairs = t.monomial.iter().map(|(v, e)| Ok((Var::parse(v)?, *e))).collect::<Result<Vec<_>>>()?;
        terms.push((Monomial::from_pairs(pairs), c));
    }
    let p = Polynomial::from_terms(terms);
    if p.terms().iter().any(|(_, c)| c.is_zero()) {
        return Err(Error::Internal("zero coefficient survived".into()));
    }
    Ok(p)
}
