//! The problem document: syntax tree, parser and serializer.
//!
//! ```text
//! # comments run to the end of the line
//! field { extend: 2  extend: r1 - 1 }
//! algebra { division: quaternion(-1, -1)  m: 1  epsilon0: 1  phi0: [[1]] }
//! form h { gram: [[1, 0], [0, -1]] }
//! form u { diagonal: [[[1]], [[r1]]] }
//! form c { collapsed: true  gram: [[j]] }
//! reference H { h, u }
//! extension { extend: 3 }
//! ```
//!
//! Elements are expressions in rationals `p/q`, field generators `r1..rn`,
//! quaternion units `i, j, k` or the quadratic unit `s`, with `+ - *` and
//! parentheses.

use std::fmt;

use hermsig::numfield::{format_rational, Rational};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(Rational),
    Name(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

pub type ExprMatrix = Vec<Vec<Expr>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DivisionSpec {
    Field,
    Quaternion(Expr, Expr),
    Quadratic(Expr),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub division: DivisionSpec,
    pub m: usize,
    pub epsilon0: i32,
    pub phi0: Option<ExprMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormBody {
    Gram(ExprMatrix),
    /// One `m × m` unit per diagonal slot.
    Diagonal(Vec<ExprMatrix>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormSpec {
    pub name: String,
    pub collapsed: bool,
    pub body: FormBody,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceSpec {
    pub name: String,
    pub forms: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub field: Vec<Expr>,
    pub algebra: AlgebraSpec,
    pub forms: Vec<FormSpec>,
    pub references: Vec<ReferenceSpec>,
    pub extension: Option<Vec<Expr>>,
}

impl Document {
    pub fn form(&self, name: &str) -> Option<&FormSpec> {
        self.forms.iter().find(|f| f.name == name)
    }

    pub fn reference(&self, name: &str) -> Option<&ReferenceSpec> {
        self.references.iter().find(|r| r.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(String),
    Sym(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Number(s) => write!(f, "number {s}"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let tok = if c.is_ascii_digit() {
            let s: String = chars[i..]
                .iter()
                .take_while(|c| c.is_ascii_digit())
                .collect();
            i += s.len();
            col += s.len();
            Tok::Number(s)
        } else if c.is_ascii_alphabetic() || c == '_' {
            let s: String = chars[i..]
                .iter()
                .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                .collect();
            i += s.len();
            col += s.len();
            Tok::Ident(s)
        } else if "{}[](),:+-*/".contains(c) {
            i += 1;
            col += 1;
            Tok::Sym(c)
        } else {
            return Err(ParseError {
                line,
                col,
                message: format!("unexpected character `{c}`"),
            });
        };
        out.push(Token {
            tok,
            line: start.0,
            col: start.1,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.tokens[(self.pos + k).min(self.tokens.len() - 1)].tok
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> Result<T, ParseError> {
        let t = self.peek();
        Err(ParseError {
            line: t.line,
            col: t.col,
            message: format!("expected {expected}, found {}", t.tok),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Sym(c) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.error(&format!("`{c}`"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                self.next();
                Ok(s)
            }
            _ => self.error(what),
        }
    }

    fn is_key(&self) -> bool {
        matches!(self.peek_at(0), Tok::Ident(_)) && self.peek_at(1) == &Tok::Sym(':')
    }

    /// `key:` inside a block; `None` at the closing brace.
    fn key(&mut self) -> Result<Option<(String, usize, usize)>, ParseError> {
        self.eat(',');
        if self.eat('}') {
            return Ok(None);
        }
        if !self.is_key() {
            return self.error("a `key:` entry or `}`");
        }
        let t = self.peek().clone();
        let k = self.ident("a key")?;
        self.expect(':')?;
        Ok(Some((k, t.line, t.col)))
    }

    fn unsigned(&mut self, what: &str) -> Result<usize, ParseError> {
        match &self.peek().tok {
            Tok::Number(s) => {
                let t = self.peek().clone();
                let s = s.clone();
                self.next();
                s.parse().map_err(|_| ParseError {
                    line: t.line,
                    col: t.col,
                    message: format!("{what} is too large"),
                })
            }
            _ => self.error(what),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat('-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        if self.eat('(') {
            let e = self.expr()?;
            self.expect(')')?;
            return Ok(e);
        }
        let t = self.peek().clone();
        match t.tok {
            Tok::Number(p) => {
                self.next();
                let mut text = p;
                if self.eat('/') {
                    match self.next().tok {
                        Tok::Number(q) if q.trim_start_matches('0').is_empty() => {
                            return Err(ParseError {
                                line: t.line,
                                col: t.col,
                                message: "zero denominator".into(),
                            })
                        }
                        Tok::Number(q) => text = format!("{text}/{q}"),
                        _ => {
                            self.pos -= 1;
                            return self.error("a denominator");
                        }
                    }
                }
                let q: Rational = text.parse().expect("digits form a rational");
                Ok(Expr::Num(q))
            }
            Tok::Ident(name) if !self.is_key() => {
                self.next();
                Ok(Expr::Name(name))
            }
            _ => self.error("an element"),
        }
    }

    fn matrix(&mut self) -> Result<ExprMatrix, ParseError> {
        self.expect('[')?;
        let mut rows = Vec::new();
        loop {
            if self.eat(']') {
                break;
            }
            self.expect('[')?;
            let mut row = Vec::new();
            loop {
                if self.eat(']') {
                    break;
                }
                row.push(self.expr()?);
                if !self.eat(',') {
                    self.expect(']')?;
                    break;
                }
            }
            rows.push(row);
            if !self.eat(',') {
                self.expect(']')?;
                break;
            }
        }
        Ok(rows)
    }

    /// A list of matrices, or of plain elements read as `1 × 1` matrices.
    fn unit_list(&mut self) -> Result<Vec<ExprMatrix>, ParseError> {
        self.expect('[')?;
        let mut out = Vec::new();
        loop {
            if self.eat(']') {
                break;
            }
            if self.peek().tok == Tok::Sym('[') {
                out.push(self.matrix()?);
            } else {
                out.push(vec![vec![self.expr()?]]);
            }
            if !self.eat(',') {
                self.expect(']')?;
                break;
            }
        }
        Ok(out)
    }

    fn extend_block(&mut self) -> Result<Vec<Expr>, ParseError> {
        self.expect('{')?;
        let mut out = Vec::new();
        while let Some((k, line, col)) = self.key()? {
            if k != "extend" {
                return Err(unknown_key(&k, line, col));
            }
            out.push(self.expr()?);
        }
        Ok(out)
    }

    fn algebra_block(&mut self) -> Result<AlgebraSpec, ParseError> {
        self.expect('{')?;
        let mut division = None;
        let mut m = None;
        let mut epsilon0 = 1;
        let mut phi0 = None;
        while let Some((k, line, col)) = self.key()? {
            match k.as_str() {
                "division" => {
                    let kind = self.ident("`field`, `quaternion` or `quadratic`")?;
                    division = Some(match kind.as_str() {
                        "field" => DivisionSpec::Field,
                        "quaternion" => {
                            self.expect('(')?;
                            let a = self.expr()?;
                            self.expect(',')?;
                            let b = self.expr()?;
                            self.expect(')')?;
                            DivisionSpec::Quaternion(a, b)
                        }
                        "quadratic" => {
                            self.expect('(')?;
                            let d = self.expr()?;
                            self.expect(')')?;
                            DivisionSpec::Quadratic(d)
                        }
                        other => {
                            return Err(ParseError {
                                line,
                                col,
                                message: format!("unknown division kind `{other}`"),
                            })
                        }
                    });
                }
                "m" => m = Some(self.unsigned("a matrix size")?),
                "epsilon0" => {
                    let negative = self.eat('-');
                    let v = self.unsigned("1 or -1")?;
                    if v != 1 {
                        return Err(ParseError {
                            line,
                            col,
                            message: "epsilon0 must be 1 or -1".into(),
                        });
                    }
                    epsilon0 = if negative { -1 } else { 1 };
                }
                "phi0" => phi0 = Some(self.matrix()?),
                _ => return Err(unknown_key(&k, line, col)),
            }
        }
        let division = match division {
            Some(d) => d,
            None => return self.error_before("a `division:` entry in the algebra block"),
        };
        let m = m.or_else(|| phi0.as_ref().map(|p| p.len())).unwrap_or(1);
        Ok(AlgebraSpec {
            division,
            m,
            epsilon0,
            phi0,
        })
    }

    fn error_before<T>(&self, expected: &str) -> Result<T, ParseError> {
        let t = &self.tokens[self.pos.saturating_sub(1)];
        Err(ParseError {
            line: t.line,
            col: t.col,
            message: format!("missing {expected}"),
        })
    }

    fn form_block(&mut self, name: String) -> Result<FormSpec, ParseError> {
        self.expect('{')?;
        let mut collapsed = false;
        let mut body = None;
        while let Some((k, kline, kcol)) = self.key()? {
            match k.as_str() {
                "gram" => body = Some(FormBody::Gram(self.matrix()?)),
                "diagonal" => body = Some(FormBody::Diagonal(self.unit_list()?)),
                "collapsed" => {
                    let v = self.ident("`true` or `false`")?;
                    collapsed = match v.as_str() {
                        "true" => true,
                        "false" => false,
                        _ => {
                            return Err(ParseError {
                                line: kline,
                                col: kcol,
                                message: "collapsed must be true or false".into(),
                            })
                        }
                    };
                }
                _ => return Err(unknown_key(&k, kline, kcol)),
            }
        }
        match body {
            Some(body) => Ok(FormSpec {
                name,
                collapsed,
                body,
            }),
            None => self.error_before(&format!("a `gram:` or `diagonal:` entry in form {name}")),
        }
    }

    fn reference_block(&mut self, name: String) -> Result<ReferenceSpec, ParseError> {
        self.expect('{')?;
        let mut forms = Vec::new();
        loop {
            self.eat(',');
            if self.eat('}') {
                break;
            }
            forms.push(self.ident("a form name or `}`")?);
        }
        Ok(ReferenceSpec { name, forms })
    }

    fn document(&mut self) -> Result<Document, ParseError> {
        let mut field = None;
        let mut algebra = None;
        let mut forms: Vec<FormSpec> = Vec::new();
        let mut references: Vec<ReferenceSpec> = Vec::new();
        let mut extension = None;
        loop {
            let t = self.peek().clone();
            let word = match &t.tok {
                Tok::Eof => break,
                Tok::Ident(w) => w.clone(),
                _ => return self.error("a block keyword"),
            };
            self.next();
            let dup = |what: &str| ParseError {
                line: t.line,
                col: t.col,
                message: format!("duplicate {what}"),
            };
            match word.as_str() {
                "field" if field.is_some() => return Err(dup("field block")),
                "field" => field = Some(self.extend_block()?),
                "algebra" if algebra.is_some() => return Err(dup("algebra block")),
                "algebra" => algebra = Some(self.algebra_block()?),
                "extension" if extension.is_some() => return Err(dup("extension block")),
                "extension" => extension = Some(self.extend_block()?),
                "form" => {
                    let name = self.ident("a form name")?;
                    if forms.iter().any(|f| f.name == name) {
                        return Err(dup(&format!("form {name}")));
                    }
                    forms.push(self.form_block(name)?);
                }
                "reference" => {
                    let name = match &self.peek().tok {
                        Tok::Ident(_) => self.ident("a reference name")?,
                        _ => "H".to_string(),
                    };
                    if references.iter().any(|r| r.name == name) {
                        return Err(dup(&format!("reference {name}")));
                    }
                    references.push(self.reference_block(name)?);
                }
                _ => {
                    return Err(ParseError {
                        line: t.line,
                        col: t.col,
                        message: format!(
                            "expected `field`, `algebra`, `form`, `reference` or `extension`, found `{word}`"
                        ),
                    })
                }
            }
        }
        let Some(algebra) = algebra else {
            let t = self.peek();
            return Err(ParseError {
                line: t.line,
                col: t.col,
                message: "missing algebra block".into(),
            });
        };
        Ok(Document {
            field: field.unwrap_or_default(),
            algebra,
            forms,
            references,
            extension,
        })
    }
}

fn unknown_key(k: &str, line: usize, col: usize) -> ParseError {
    ParseError {
        line,
        col,
        message: format!("unknown key `{k}`"),
    }
}

pub fn parse_document(text: &str) -> Result<Document, ParseError> {
    let mut p = Parser {
        tokens: lex(text)?,
        pos: 0,
    };
    p.document()
}

/// Parses a single element expression.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        tokens: lex(text)?,
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().tok != Tok::Eof {
        return p.error("end of expression");
    }
    Ok(e)
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 0,
            Expr::Mul(..) => 1,
            Expr::Neg(_) => 2,
            Expr::Num(q) if !q.is_integer() => 2,
            Expr::Num(_) | Expr::Name(_) => 3,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Num(q) => write!(f, "{}", format_rational(q)),
            Expr::Name(n) => write!(f, "{n}"),
            Expr::Neg(x) => {
                write!(f, "-")?;
                x.write_at(f, 2)
            }
            Expr::Add(a, b) => {
                a.write_at(f, 0)?;
                write!(f, " + ")?;
                b.write_at(f, 1)
            }
            Expr::Sub(a, b) => {
                a.write_at(f, 0)?;
                write!(f, " - ")?;
                b.write_at(f, 1)
            }
            Expr::Mul(a, b) => {
                a.write_at(f, 1)?;
                write!(f, "*")?;
                b.write_at(f, 2)
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

pub fn write_matrix(rows: &[Vec<Expr>]) -> String {
    let rows: Vec<String> = rows
        .iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|e| e.to_string()).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

impl fmt::Display for FormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "form {} {{", self.name)?;
        if self.collapsed {
            write!(f, " collapsed: true")?;
        }
        match &self.body {
            FormBody::Gram(g) => write!(f, " gram: {}", write_matrix(g))?,
            FormBody::Diagonal(units) => {
                let units: Vec<String> = units.iter().map(|u| write_matrix(u)).collect();
                write!(f, " diagonal: [{}]", units.join(", "))?;
            }
        }
        write!(f, " }}")
    }
}

impl fmt::Display for ReferenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.forms.is_empty() {
            return write!(f, "reference {} {{ }}", self.name);
        }
        write!(f, "reference {} {{ {} }}", self.name, self.forms.join(", "))
    }
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let extends = |xs: &[Expr]| -> String {
            xs.iter()
                .map(|x| format!(" extend: {x}"))
                .collect::<String>()
        };
        writeln!(f, "field {{{} }}", extends(&self.field))?;
        let a = &self.algebra;
        let division = match &a.division {
            DivisionSpec::Field => "field".to_string(),
            DivisionSpec::Quaternion(x, y) => format!("quaternion({x}, {y})"),
            DivisionSpec::Quadratic(d) => format!("quadratic({d})"),
        };
        write!(
            f,
            "algebra {{ division: {division} m: {} epsilon0: {}",
            a.m, a.epsilon0
        )?;
        if let Some(phi0) = &a.phi0 {
            write!(f, " phi0: {}", write_matrix(phi0))?;
        }
        writeln!(f, " }}")?;
        for form in &self.forms {
            writeln!(f, "{form}")?;
        }
        for r in &self.references {
            writeln!(f, "{r}")?;
        }
        if let Some(ext) = &self.extension {
            writeln!(f, "extension {{{} }}", extends(ext))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expressions_round_trip() {
        for text in [
            "1",
            "-3",
            "1/2*r1",
            "3 + 4*i",
            "(1 + r1)*j",
            "r1 - (1 - r2)",
            "-(r1 + 1)",
            "2*-r1",
            "6/4",
        ] {
            let e = parse_expr(text).unwrap();
            let printed = e.to_string();
            assert_eq!(parse_expr(&printed).unwrap(), e, "{text} -> {printed}");
        }
        assert_eq!(parse_expr("6/4").unwrap().to_string(), "3/2");
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = parse_document("algebra {\n  division: field\n  m: x\n}").unwrap_err();
        assert_eq!((err.line, err.col), (3, 6));
        let err =
            parse_document("algebra { division: field }\nform h { gram: [[1,]] ").unwrap_err();
        assert_eq!(err.line, 2);
        let err = parse_document("field { extend: 2 }").unwrap_err();
        assert!(err.message.contains("missing algebra"));
        let err = parse_document("algebra { division: field } $").unwrap_err();
        assert_eq!((err.line, err.col), (1, 29));
        assert!(parse_expr("1/0").is_err());
    }

    #[test]
    fn plain_diagonal_entries_are_one_by_one() {
        let doc =
            parse_document("algebra { division: quaternion(-1,-1) }\nform h { diagonal: [1, -1] }")
                .unwrap();
        let FormBody::Diagonal(units) = &doc.forms[0].body else {
            panic!("diagonal body");
        };
        assert_eq!(units.len(), 2);
        assert_eq!(units[1], vec![vec![parse_expr("-1").unwrap()]]);
        assert_eq!(doc.algebra.m, 1);
    }
}
