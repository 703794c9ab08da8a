//! A deliberately naive query interpreter.
//!
//! It re-reads the query text on every call, walks the document as plain
//! JSON and flattens arrays into the list of values found under a path.
//! Speed is irrelevant here; the point is a second, simple reading of the
//! language to compare the engine against.

use std::str::FromStr;

use regex::Regex;
use rust_decimal::Decimal;
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleError(pub String);

impl std::fmt::Display for OracleError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for OracleError {}

fn fail<T>(msg: impl Into<String>) -> Result<T, OracleError> {
    Err(OracleError(msg.into()))
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    And,
    Or,
    Op(&'static str),
    Bare(String),
    Quoted(String),
    Slashed(String, bool),
}

const OPS: [&str; 7] = ["<=", ">=", "!=", "=", "~", "<", ">"];

fn lex(src: &str) -> Result<Vec<Tok>, OracleError> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    let op_at = |i: usize| {
        OPS.iter().copied().find(|op| {
            op.chars()
                .enumerate()
                .all(|(k, c)| chars.get(i + k) == Some(&c))
        })
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '(' {
            toks.push(Tok::Open);
            i += 1;
        } else if c == ')' {
            toks.push(Tok::Close);
            i += 1;
        } else if c == '&' {
            toks.push(Tok::And);
            i += 1;
        } else if c == '|' {
            toks.push(Tok::Or);
            i += 1;
        } else if c == '"' {
            let mut s = String::new();
            i += 1;
            loop {
                match chars.get(i) {
                    None => return fail("unterminated quote"),
                    Some('"') => break,
                    Some('\\') if matches!(chars.get(i + 1), Some('"') | Some('\\')) => {
                        s.push(chars[i + 1]);
                        i += 2;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                    }
                }
            }
            i += 1;
            toks.push(Tok::Quoted(s));
        } else if c == '/' {
            let mut s = String::new();
            i += 1;
            loop {
                match chars.get(i) {
                    None => return fail("unterminated regex"),
                    Some('/') => break,
                    Some('\\') => {
                        s.push('\\');
                        if let Some(&n) = chars.get(i + 1) {
                            s.push(n);
                        }
                        i += 2;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                    }
                }
            }
            i += 1;
            let mut ci = false;
            while let Some(&f) = chars.get(i) {
                if !f.is_alphanumeric() {
                    break;
                }
                if f != 'i' {
                    return fail("bad flag");
                }
                ci = true;
                i += 1;
            }
            toks.push(Tok::Slashed(s, ci));
        } else if let Some(op) = op_at(i) {
            toks.push(Tok::Op(op));
            i += op.len();
        } else {
            let mut s = String::new();
            while let Some(&ch) = chars.get(i) {
                if ch.is_whitespace() || "()&|\"".contains(ch) || op_at(i).is_some() {
                    break;
                }
                s.push(ch);
                i += 1;
            }
            toks.push(Tok::Bare(s));
        }
    }
    Ok(toks)
}

#[derive(Debug)]
enum Lit {
    Text(String),
    Number(Decimal, String),
    Pattern(Regex),
}

#[derive(Debug)]
enum Expr {
    Any(Vec<Expr>),
    All(Vec<Expr>),
    Test { path: Vec<String>, op: &'static str, lit: Lit },
}

struct Parser {
    toks: Vec<Tok>,
    at: usize,
}

fn is_number(s: &str) -> bool {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    let (int, frac) = match body.split_once('.') {
        Some((a, b)) => (a, Some(b)),
        None => (body, None),
    };
    !int.is_empty()
        && int.bytes().all(|b| b.is_ascii_digit())
        && frac.is_none_or(|f| !f.is_empty() && f.bytes().all(|b| b.is_ascii_digit()))
}

fn text_pattern(text: &str) -> Regex {
    Regex::new(text).unwrap_or_else(|_| Regex::new(&regex::escape(text)).unwrap())
}

impl Parser {
    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at)
    }

    // expr := logic ('|' logic)*
    fn expr(&mut self) -> Result<Expr, OracleError> {
        let mut parts = vec![self.logic()?];
        while self.peek() == Some(&Tok::Or) {
            self.at += 1;
            parts.push(self.logic()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Expr::Any(parts) })
    }

    // logic := primary ('&' primary)*
    fn logic(&mut self) -> Result<Expr, OracleError> {
        let mut parts = vec![self.primary()?];
        while self.peek() == Some(&Tok::And) {
            self.at += 1;
            parts.push(self.primary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Expr::All(parts) })
    }

    fn primary(&mut self) -> Result<Expr, OracleError> {
        match self.next() {
            Some(Tok::Open) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::Close) => Ok(e),
                    _ => fail("missing )"),
                }
            }
            Some(Tok::Bare(path)) => {
                let path: Vec<String> = path.split('.').map(str::to_owned).collect();
                if path.iter().any(String::is_empty) {
                    return fail("bad path");
                }
                let Some(Tok::Op(op)) = self.next() else {
                    return fail("missing operator");
                };
                let lit = match self.next() {
                    Some(Tok::Quoted(s)) if op == "~" => Lit::Pattern(text_pattern(&s)),
                    Some(Tok::Quoted(s)) => Lit::Text(s),
                    Some(Tok::Bare(s)) if is_number(&s) => match Decimal::from_str(&s) {
                        Ok(_) if op == "~" => Lit::Pattern(text_pattern(&s)),
                        Ok(d) => Lit::Number(d, s),
                        Err(_) => return fail("number out of range"),
                    },
                    Some(Tok::Bare(s)) if op == "~" => Lit::Pattern(text_pattern(&s)),
                    Some(Tok::Bare(s)) => Lit::Text(s),
                    Some(Tok::Slashed(p, ci)) if op == "~" => {
                        let src = if ci { format!("(?i){p}") } else { p };
                        match Regex::new(&src) {
                            Ok(re) => Lit::Pattern(re),
                            Err(e) => return fail(format!("bad regex: {e}")),
                        }
                    }
                    _ => return fail("missing operand"),
                };
                Ok(Expr::Test { path, op, lit })
            }
            _ => fail("expected a comparison"),
        }
    }
}

fn parse(src: &str) -> Result<Expr, OracleError> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return fail("trailing input");
    }
    Ok(e)
}

/// All non-array values under `path`, with arrays flattened at every level.
fn values_at<'a>(v: &'a Value, path: &[String], out: &mut Vec<&'a Value>) {
    match v {
        Value::Array(items) => {
            for item in items {
                values_at(item, path, out);
            }
        }
        _ if path.is_empty() => out.push(v),
        Value::Object(map) => {
            if let Some(child) = map.get(&path[0]) {
                values_at(child, &path[1..], out);
            }
        }
        _ => {}
    }
}

fn as_decimal(v: &Value) -> Option<Decimal> {
    let n = v.as_number()?;
    let text = n.to_string();
    Decimal::from_str(&text)
        .or_else(|_| Decimal::from_scientific(&text))
        .ok()
}

fn holds(v: &Value, op: &str, lit: &Lit) -> bool {
    match (op, lit, v) {
        ("=", Lit::Text(l), Value::String(s)) => s == l,
        ("=", Lit::Number(_, lexeme), Value::String(s)) => s == lexeme,
        ("=", Lit::Number(d, _), Value::Number(_)) => as_decimal(v) == Some(*d),
        ("~", Lit::Pattern(re), Value::String(s)) => re.is_match(s),
        (_, Lit::Text(l), Value::String(s)) => match op {
            "<" => s < l,
            "<=" => s <= l,
            ">" => s > l,
            ">=" => s >= l,
            _ => false,
        },
        (_, Lit::Number(d, _), Value::Number(_)) => match as_decimal(v) {
            Some(x) => match op {
                "<" => x < *d,
                "<=" => x <= *d,
                ">" => x > *d,
                ">=" => x >= *d,
                _ => false,
            },
            None => false,
        },
        _ => false,
    }
}

fn eval(e: &Expr, doc: &Value) -> bool {
    match e {
        Expr::Any(parts) => parts.iter().any(|p| eval(p, doc)),
        Expr::All(parts) => parts.iter().all(|p| eval(p, doc)),
        Expr::Test { path, op, lit } => {
            let mut found = Vec::new();
            values_at(doc, path, &mut found);
            if *op == "!=" {
                !found.iter().any(|v| holds(v, "=", lit))
            } else {
                found.iter().any(|v| holds(v, op, lit))
            }
        }
    }
}

/// Whether `doc` satisfies the query text. Errors mean the text is not a
/// valid query.
pub fn oracle_matches(query: &str, doc: &Value) -> Result<bool, OracleError> {
    Ok(eval(&parse(query)?, doc))
}

/// Parses once, then filters a corpus. Returns indices of matching docs.
pub fn oracle_filter(query: &str, docs: &[Value]) -> Result<Vec<usize>, OracleError> {
    let e = parse(query)?;
    Ok(docs
        .iter()
        .enumerate()
        .filter(|(_, d)| eval(&e, d))
        .map(|(i, _)| i)
        .collect())
}
