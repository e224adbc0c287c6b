//! Lexer and expression parser for the polynomial text syntax.
//!
//! The same token stream feeds the session-file parser, so positions are
//! tracked as 1-based line and column numbers.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{Monomial, MonomialOrder, Polynomial, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Int(BigInt),
    Str(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Equals,
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) => write!(f, "identifier `{s}`"),
            TokenKind::Int(n) => write!(f, "integer `{n}`"),
            TokenKind::Str(s) => write!(f, "string \"{s}\""),
            TokenKind::Plus => write!(f, "`+`"),
            TokenKind::Minus => write!(f, "`-`"),
            TokenKind::Star => write!(f, "`*`"),
            TokenKind::Slash => write!(f, "`/`"),
            TokenKind::Caret => write!(f, "`^`"),
            TokenKind::LParen => write!(f, "`(`"),
            TokenKind::RParen => write!(f, "`)`"),
            TokenKind::LBracket => write!(f, "`[`"),
            TokenKind::RBracket => write!(f, "`]`"),
            TokenKind::Comma => write!(f, "`,`"),
            TokenKind::Semi => write!(f, "`;`"),
            TokenKind::Equals => write!(f, "`=`"),
            TokenKind::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("unterminated string literal")]
    UnterminatedString,
    #[error("expected {expected}, found {found}")]
    Expected { expected: String, found: String },
    #[error("undeclared identifier `{0}`")]
    UndeclaredIdentifier(String),
    #[error("exponent `{0}` is out of range")]
    BadExponent(String),
    #[error("division is only allowed by a nonzero constant")]
    BadDivisor,
    #[error("a ring is already declared")]
    DuplicateRing,
    #[error("ideal `{0}` is declared twice")]
    DuplicateIdeal(String),
    #[error("variable `{0}` is declared twice")]
    DuplicateVariable(String),
    #[error("a ring declaration must come first")]
    MissingRing,
    #[error("unknown directive target `{0}`")]
    UnknownTarget(String),
    #[error("invalid option: {0}")]
    BadOption(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn at(tok: &Token, kind: ParseErrorKind) -> Self {
        ParseError { line: tok.line, col: tok.col, kind }
    }
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let simple = match c {
            '+' => Some(TokenKind::Plus),
            '-' => Some(TokenKind::Minus),
            '*' => Some(TokenKind::Star),
            '/' => Some(TokenKind::Slash),
            '^' => Some(TokenKind::Caret),
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            '[' => Some(TokenKind::LBracket),
            ']' => Some(TokenKind::RBracket),
            ',' => Some(TokenKind::Comma),
            ';' => Some(TokenKind::Semi),
            '=' => Some(TokenKind::Equals),
            _ => None,
        };
        if let Some(kind) = simple {
            out.push(Token { kind, line: tl, col: tc });
            i += 1;
            col += 1;
            continue;
        }
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            i += 1;
            col += 1;
        } else if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token { kind: TokenKind::Int(digits.parse().unwrap()), line: tl, col: tc });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            col += i - start;
            out.push(Token { kind: TokenKind::Ident(chars[start..i].iter().collect()), line: tl, col: tc });
        } else if c == '"' {
            let start = i + 1;
            i += 1;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                i += 1;
            }
            if i >= chars.len() || chars[i] != '"' {
                return Err(ParseError { line: tl, col: tc, kind: ParseErrorKind::UnterminatedString });
            }
            let s: String = chars[start..i].iter().collect();
            i += 1;
            col += i - (start - 1);
            out.push(Token { kind: TokenKind::Str(s), line: tl, col: tc });
        } else {
            return Err(ParseError { line: tl, col: tc, kind: ParseErrorKind::UnexpectedChar(c) });
        }
    }
    out.push(Token { kind: TokenKind::Eof, line, col });
    Ok(out)
}

/// Cursor over a token list that always ends with `Eof`.
pub struct TokenStream {
    tokens: Vec<Token>,
    pos: usize,
}

impl TokenStream {
    pub fn new(tokens: Vec<Token>) -> Self {
        debug_assert!(matches!(tokens.last(), Some(Token { kind: TokenKind::Eof, .. })));
        TokenStream { tokens, pos: 0 }
    }

    pub fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    pub fn next_token(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    pub fn at(&self, kind: &TokenKind) -> bool {
        &self.peek().kind == kind
    }

    pub fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.at(kind) {
            self.next_token();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, kind: &TokenKind) -> Result<Token, ParseError> {
        if self.at(kind) {
            Ok(self.next_token())
        } else {
            Err(self.unexpected(&kind.to_string()))
        }
    }

    pub fn unexpected(&self, expected: &str) -> ParseError {
        let tok = self.peek();
        ParseError::at(tok, ParseErrorKind::Expected { expected: expected.to_string(), found: tok.kind.to_string() })
    }
}

/// Parses one polynomial expression from the stream, stopping before the
/// first token that cannot continue it.
pub fn parse_expr(ts: &mut TokenStream, names: &[String], order: MonomialOrder) -> Result<Polynomial, ParseError> {
    let p = ExprParser { names, order };
    p.expr(ts)
}

/// Parses a complete polynomial from text.
pub fn parse_polynomial(text: &str, names: &[String], order: MonomialOrder) -> Result<Polynomial, ParseError> {
    let mut ts = TokenStream::new(tokenize(text)?);
    let p = parse_expr(&mut ts, names, order)?;
    if !ts.at(&TokenKind::Eof) {
        return Err(ts.unexpected("operator or end of input"));
    }
    Ok(p)
}

struct ExprParser<'a> {
    names: &'a [String],
    order: MonomialOrder,
}

impl ExprParser<'_> {
    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn expr(&self, ts: &mut TokenStream) -> Result<Polynomial, ParseError> {
        let mut acc = self.term(ts)?;
        loop {
            if ts.eat(&TokenKind::Plus) {
                acc = &acc + &self.term(ts)?;
            } else if ts.eat(&TokenKind::Minus) {
                acc = &acc - &self.term(ts)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_atom(kind: &TokenKind) -> bool {
        matches!(kind, TokenKind::Int(_) | TokenKind::Ident(_) | TokenKind::LParen)
    }

    fn term(&self, ts: &mut TokenStream) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary(ts)?;
        loop {
            if ts.eat(&TokenKind::Star) {
                acc = &acc * &self.unary(ts)?;
            } else if ts.at(&TokenKind::Slash) {
                let tok = ts.next_token();
                let d = self.unary(ts)?;
                if !d.is_constant() || d.is_zero() {
                    return Err(ParseError::at(&tok, ParseErrorKind::BadDivisor));
                }
                let c = d.leading_coeff().unwrap().recip();
                acc = acc.scale(&c);
            } else if Self::starts_atom(&ts.peek().kind) {
                acc = &acc * &self.power(ts)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&self, ts: &mut TokenStream) -> Result<Polynomial, ParseError> {
        if ts.eat(&TokenKind::Minus) {
            return Ok(-&self.unary(ts)?);
        }
        if ts.eat(&TokenKind::Plus) {
            return self.unary(ts);
        }
        self.power(ts)
    }

    fn power(&self, ts: &mut TokenStream) -> Result<Polynomial, ParseError> {
        let base = self.atom(ts)?;
        if ts.eat(&TokenKind::Caret) {
            let tok = ts.next_token();
            let e = match &tok.kind {
                TokenKind::Int(n) => n.to_u32().filter(|&e| e <= 10_000),
                _ => return Err(ParseError::at(&tok, ParseErrorKind::Expected { expected: "exponent".into(), found: tok.kind.to_string() })),
            };
            let e = e.ok_or_else(|| ParseError::at(&tok, ParseErrorKind::BadExponent(tok.kind.to_string())))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&self, ts: &mut TokenStream) -> Result<Polynomial, ParseError> {
        let tok = ts.peek().clone();
        match &tok.kind {
            TokenKind::Int(n) => {
                ts.next_token();
                Ok(Polynomial::constant(self.nvars(), self.order, Rational::from_integer(n.clone())))
            }
            TokenKind::Ident(name) => {
                ts.next_token();
                match self.names.iter().position(|v| v == name) {
                    Some(i) => Ok(Polynomial::from_monomial(self.order, Rational::from_integer(1.into()), Monomial::var(self.nvars(), i))),
                    None => Err(ParseError::at(&tok, ParseErrorKind::UndeclaredIdentifier(name.clone()))),
                }
            }
            TokenKind::LParen => {
                ts.next_token();
                let inner = self.expr(ts)?;
                ts.expect(&TokenKind::RParen)?;
                Ok(inner)
            }
            _ => Err(ts.unexpected("number, variable or `(`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        ["x", "y", "z"].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_examples() {
        let ord = MonomialOrder::GrevLex;
        let a = parse_polynomial("-x^2 + y^2", &names(), ord).unwrap();
        assert_eq!(a.len(), 2);
        let b = parse_polynomial("2*x*y^3", &names(), ord).unwrap();
        let c = parse_polynomial("2 x y^3", &names(), ord).unwrap();
        assert_eq!(b, c);
        let d = parse_polynomial("(x+y)^2 - 1/2 * x", &names(), ord).unwrap();
        assert_eq!(d.display(&names()).to_string(), "x^2+2*x*y+y^2-1/2*x");
        let e = parse_polynomial("3/4", &names(), ord).unwrap();
        assert_eq!(e.display(&names()).to_string(), "3/4");
    }

    #[test]
    fn reports_positions() {
        let err = parse_polynomial("x +\n  w", &names(), MonomialOrder::GrevLex).unwrap_err();
        assert_eq!((err.line, err.col), (2, 3));
        assert_eq!(err.kind, ParseErrorKind::UndeclaredIdentifier("w".into()));
        let err = parse_polynomial("x / y", &names(), MonomialOrder::GrevLex).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::BadDivisor);
        let err = parse_polynomial("x $", &names(), MonomialOrder::GrevLex).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnexpectedChar('$'));
        let err = parse_polynomial("(x + y", &names(), MonomialOrder::GrevLex).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Expected { .. }));
    }
}
