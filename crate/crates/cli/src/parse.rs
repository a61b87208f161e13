//! Expression parser for integrands `P / (1 - x1*...*xn)^N`.
//!
//! Beyond the base grammar it accepts a leading unary minus in any
//! polynomial, negative exponents on single terms (`x1^-1`), and reads
//! `int "/" uint` as one rational literal.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use zetaform_core::exactalg::{MultiLaurent, Rational};
use zetaform_core::forms::ZetaIntegrand;

/// Largest variable index accepted.
pub const MAX_VARS: usize = 64;
/// Largest exponent accepted.
pub const MAX_EXPONENT: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    Syntax { line: usize, column: usize, message: String },
    DenominatorShape { line: usize, column: usize, message: String },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, column, .. } | ParseError::DenominatorShape { line, column, .. } => {
                (*line, *column)
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ParseError::Syntax { .. } => "parse",
            ParseError::DenominatorShape { .. } => "denominator_shape",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            ParseError::Syntax { message, .. } | ParseError::DenominatorShape { message, .. } => message,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (line, column) = self.position();
        match self {
            ParseError::Syntax { message, .. } => write!(f, "parse error at {line}:{column}: {message}"),
            ParseError::DenominatorShape { message, .. } => {
                write!(f, "bad denominator at {line}:{column}: {message}")
            }
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(i) => write!(f, "'{i}'"),
            Tok::Var(i) => write!(f, "'x{i}'"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::Caret => f.write_str("'^'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, column, message: message.into() }
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        let tok = if c.is_ascii_digit() || c == 'x' {
            let is_var = c == 'x';
            if is_var {
                chars.next();
                column += 1;
            }
            let mut digits = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(d);
                chars.next();
                column += 1;
            }
            if is_var {
                if digits.is_empty() {
                    return Err(syntax(l, col, "expected a variable index after 'x'"));
                }
                let i: usize = digits.parse().ok().filter(|&i| (1..=MAX_VARS).contains(&i)).ok_or_else(|| {
                    syntax(l, col, format!("variable index must be between 1 and {MAX_VARS}"))
                })?;
                Tok::Var(i)
            } else {
                Tok::Int(digits.parse().expect("ascii digits"))
            }
        } else {
            chars.next();
            column += 1;
            match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => return Err(syntax(l, col, format!("unexpected character '{c}'"))),
            }
        };
        out.push(Token { tok, line: l, column: col });
    }
    out.push(Token { tok: Tok::End, line, column });
    Ok(out)
}

/// Base, power, and the opening parenthesis for error positions.
type Denominator = (MultiLaurent, u32, Token);

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    n: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        let t = self.peek();
        syntax(t.line, t.column, format!("expected {wanted}, found {}", t.tok))
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<Token, ParseError> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn form(&mut self) -> Result<(MultiLaurent, Option<Denominator>), ParseError> {
        let num = self.poly()?;
        let den = if self.peek().tok == Tok::Slash {
            self.bump();
            let open = self.expect(Tok::LParen, "'(' starting the denominator")?;
            let base = self.poly()?;
            self.expect(Tok::RParen, "')' closing the denominator")?;
            let power = if self.peek().tok == Tok::Caret {
                self.bump();
                let at = self.peek().clone();
                let e = self.uint()?;
                if e > MAX_EXPONENT {
                    return Err(syntax(at.line, at.column, format!("exponent above {MAX_EXPONENT}")));
                }
                e
            } else {
                1
            };
            Some((base, power, open))
        } else {
            None
        };
        if self.peek().tok != Tok::End {
            return Err(self.unexpected("'+', '-', '*', '/' or end of input"));
        }
        Ok((num, den))
    }

    fn poly(&mut self) -> Result<MultiLaurent, ParseError> {
        let negate = self.peek().tok == Tok::Minus;
        if negate {
            self.bump();
        }
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiLaurent, ParseError> {
        let mut acc = self.power()?;
        while self.peek().tok == Tok::Star {
            self.bump();
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<MultiLaurent, ParseError> {
        let start = self.peek().clone();
        let mut base = self.atom()?;
        while self.peek().tok == Tok::Caret {
            self.bump();
            let negative = self.peek().tok == Tok::Minus;
            if negative {
                self.bump();
            }
            let e = self.uint()?;
            if e > MAX_EXPONENT {
                return Err(syntax(start.line, start.column, format!("exponent above {MAX_EXPONENT}")));
            }
            base = if negative { invert_term(&base, &start)?.pow(e) } else { base.pow(e) };
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiLaurent, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Int(p) => {
                self.bump();
                let q = if self.peek().tok == Tok::Slash && matches!(self.peek_at(1), Tok::Int(_)) {
                    self.bump();
                    let d = self.bump();
                    let Tok::Int(d) = d.tok else { unreachable!() };
                    if d.is_zero() {
                        return Err(syntax(t.line, t.column, "zero denominator in rational literal"));
                    }
                    Rational::new(p, d)
                } else {
                    Rational::from_integer(p)
                };
                Ok(MultiLaurent::constant(self.n, q))
            }
            Tok::Var(i) => {
                self.bump();
                Ok(MultiLaurent::var(self.n, i - 1))
            }
            Tok::LParen => {
                self.bump();
                let p = self.poly()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(p)
            }
            _ => Err(self.unexpected("a number, a variable or '('")),
        }
    }

    fn uint(&mut self) -> Result<u32, ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(v) => {
                self.bump();
                u32::try_from(v).map_err(|_| syntax(t.line, t.column, "exponent too large"))
            }
            _ => Err(self.unexpected("a non-negative integer")),
        }
    }
}

fn invert_term(p: &MultiLaurent, at: &Token) -> Result<MultiLaurent, ParseError> {
    let mut terms = p.terms();
    match (terms.next(), terms.next()) {
        (Some((e, c)), None) => {
            let inv: Vec<i32> = e.iter().map(|&x| -x).collect();
            Ok(MultiLaurent::monomial(p.nvars(), inv, c.recip()))
        }
        _ => Err(syntax(at.line, at.column, "negative exponents apply only to a single nonzero term")),
    }
}

/// Parses `text`. The dimension is the largest variable index mentioned, or
/// `n_override` when given (which must be at least that index).
pub fn parse_form(text: &str, n_override: Option<usize>) -> Result<ZetaIntegrand, ParseError> {
    let toks = lex(text)?;
    let max_index = toks.iter().filter_map(|t| if let Tok::Var(i) = t.tok { Some(i) } else { None }).max();
    let end = toks.last().expect("end token");
    let n = match (n_override, max_index) {
        (Some(n), Some(m)) if n < m => {
            return Err(syntax(1, 1, format!("--n {n} is smaller than the largest variable index {m}")));
        }
        (Some(0), _) => return Err(syntax(1, 1, "--n must be positive")),
        (Some(n), _) if n > MAX_VARS => return Err(syntax(1, 1, format!("--n must be at most {MAX_VARS}"))),
        (Some(n), _) => n,
        (None, Some(m)) => m,
        (None, None) => return Err(syntax(end.line, end.column, "no variables mentioned; pass --n")),
    };
    let mut parser = Parser { toks, pos: 0, n };
    let (num, den) = parser.form()?;
    let pole_order = match den {
        None => 0,
        Some((base, power, at)) => {
            let full = &MultiLaurent::one(n) - &MultiLaurent::product_power(n, 1);
            if base != full {
                let prod: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
                return Err(ParseError::DenominatorShape {
                    line: at.line,
                    column: at.column,
                    message: format!("expected (1 - {}) raised to a power, found ({base})", prod.join("*")),
                });
            }
            power
        }
    };
    Ok(ZetaIntegrand::new(num, pole_order))
}
