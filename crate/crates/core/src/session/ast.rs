use std::collections::HashSet;
use std::fmt;

use crate::poly::{parse_expr, tokenize, MonomialOrder, ParseError, ParseErrorKind, Polynomial, Token, TokenKind, TokenStream};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Session {
    pub ring: RingDecl,
    pub ideals: Vec<IdealDecl>,
    pub directives: Vec<Directive>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingDecl {
    pub name: String,
    pub vars: Vec<String>,
    pub presentation: Vec<Polynomial>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealDecl {
    pub name: String,
    pub gens: Vec<Polynomial>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DirectiveKind {
    Report,
    Compute(String),
    Check(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OptionValue {
    Int(u64),
    Ident(String),
    Str(String),
}

#[derive(Debug, Clone)]
pub struct Directive {
    pub kind: DirectiveKind,
    pub options: Vec<(String, OptionValue)>,
    /// Source line, ignored by equality.
    pub line: usize,
}

impl PartialEq for Directive {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.options == other.options
    }
}

impl Eq for Directive {}

/// Targets accepted by `compute`.
pub const COMPUTE_TARGETS: [&str; 13] =
    ["reduction", "sums", "series", "colength", "mingens", "star", "oregular", "depth", "cmtest", "vv", "cz", "witness", "checklist"];

impl Directive {
    pub fn option(&self, key: &str) -> Option<&OptionValue> {
        self.options.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

impl Session {
    pub fn ideal(&self, name: &str) -> Option<&IdealDecl> {
        self.ideals.iter().find(|d| d.name == name)
    }
}

const ORDER: MonomialOrder = MonomialOrder::GrevLex;

/// Parses a session file.
///
/// ```text
/// session   := ringdecl (idealdecl | directive)*
/// ringdecl  := "ring" IDENT "vars" IDENT+ ["mod" "[" polylist "]"] ";"
/// idealdecl := "ideal" IDENT "=" "[" polylist "]" ";"
/// directive := ("report" | "compute" IDENT | "check" (STRING | IDENT)) option* ";"
/// option    := IDENT "=" (INT | IDENT | STRING)
/// ```
///
/// Line comments start with `#`.
pub fn parse_session(text: &str) -> Result<Session, ParseError> {
    let mut ts = TokenStream::new(tokenize(text)?);
    let ring = parse_ring(&mut ts)?;
    let mut ideals: Vec<IdealDecl> = Vec::new();
    let mut directives = Vec::new();
    let mut ident_refs: Vec<(Token, String)> = Vec::new();
    loop {
        let tok = ts.peek().clone();
        match &tok.kind {
            TokenKind::Eof => break,
            TokenKind::Ident(k) if k == "ring" => return Err(ParseError::at(&tok, ParseErrorKind::DuplicateRing)),
            TokenKind::Ident(k) if k == "ideal" => {
                ts.next_token();
                let name_tok = ts.peek().clone();
                let name = expect_ident(&mut ts, "ideal name")?;
                if ideals.iter().any(|d| d.name == name) || ring.vars.contains(&name) {
                    return Err(ParseError::at(&name_tok, ParseErrorKind::DuplicateIdeal(name)));
                }
                ts.expect(&TokenKind::Equals)?;
                let gens = parse_list(&mut ts, &ring.vars)?;
                ts.expect(&TokenKind::Semi)?;
                ideals.push(IdealDecl { name, gens });
            }
            TokenKind::Ident(k) if k == "report" || k == "compute" || k == "check" => {
                ts.next_token();
                let kind = match k.as_str() {
                    "report" => DirectiveKind::Report,
                    "compute" => {
                        let what_tok = ts.peek().clone();
                        let what = expect_ident(&mut ts, "compute target")?;
                        if !COMPUTE_TARGETS.contains(&what.as_str()) {
                            return Err(ParseError::at(&what_tok, ParseErrorKind::UnknownTarget(what)));
                        }
                        DirectiveKind::Compute(what)
                    }
                    _ => {
                        let id_tok = ts.next_token();
                        match id_tok.kind.clone() {
                            TokenKind::Str(s) | TokenKind::Ident(s) => DirectiveKind::Check(s),
                            other => {
                                return Err(ParseError::at(&id_tok, ParseErrorKind::Expected { expected: "statement id".into(), found: other.to_string() }))
                            }
                        }
                    }
                };
                let mut options = Vec::new();
                while !ts.at(&TokenKind::Semi) {
                    let key = expect_ident(&mut ts, "option name or `;`")?;
                    ts.expect(&TokenKind::Equals)?;
                    let vtok = ts.next_token();
                    let value = match vtok.kind.clone() {
                        TokenKind::Int(n) => {
                            let v = u64::try_from(n).map_err(|_| ParseError::at(&vtok, ParseErrorKind::BadOption(format!("`{key}` is out of range"))))?;
                            OptionValue::Int(v)
                        }
                        TokenKind::Ident(s) => {
                            ident_refs.push((vtok.clone(), s.clone()));
                            OptionValue::Ident(s)
                        }
                        TokenKind::Str(s) => OptionValue::Str(s),
                        other => return Err(ParseError::at(&vtok, ParseErrorKind::Expected { expected: "option value".into(), found: other.to_string() })),
                    };
                    options.push((key, value));
                }
                ts.expect(&TokenKind::Semi)?;
                directives.push(Directive { kind, options, line: tok.line });
            }
            _ => return Err(ts.unexpected("`ideal`, `report`, `compute` or `check`")),
        }
    }
    // identifier values name ideals, families or targets
    let known: HashSet<&str> = ["G", "F", "Delta", "LambdaHM", "VV", "FC1", "FC2"].into_iter().collect();
    for (tok, name) in ident_refs {
        if !known.contains(name.as_str()) && !ideals.iter().any(|d| d.name == name) {
            return Err(ParseError::at(&tok, ParseErrorKind::UndeclaredIdentifier(name)));
        }
    }
    Ok(Session { ring, ideals, directives })
}

fn parse_ring(ts: &mut TokenStream) -> Result<RingDecl, ParseError> {
    let tok = ts.peek().clone();
    if tok.kind != TokenKind::Ident("ring".into()) {
        return Err(ParseError::at(&tok, ParseErrorKind::MissingRing));
    }
    ts.next_token();
    let name = expect_ident(ts, "ring name")?;
    let vars_tok = ts.peek().clone();
    if expect_ident(ts, "`vars`")? != "vars" {
        return Err(ParseError::at(&vars_tok, ParseErrorKind::Expected { expected: "`vars`".into(), found: vars_tok.kind.to_string() }));
    }
    let mut vars: Vec<String> = Vec::new();
    while let TokenKind::Ident(v) = &ts.peek().kind {
        if v == "mod" {
            break;
        }
        let v = v.clone();
        let vt = ts.next_token();
        if vars.contains(&v) {
            return Err(ParseError::at(&vt, ParseErrorKind::DuplicateVariable(v)));
        }
        vars.push(v);
    }
    if vars.is_empty() {
        return Err(ts.unexpected("variable name"));
    }
    let mut presentation = Vec::new();
    if ts.at(&TokenKind::Ident("mod".into())) {
        ts.next_token();
        presentation = parse_list(ts, &vars)?;
    }
    ts.expect(&TokenKind::Semi)?;
    Ok(RingDecl { name, vars, presentation })
}

fn parse_list(ts: &mut TokenStream, vars: &[String]) -> Result<Vec<Polynomial>, ParseError> {
    ts.expect(&TokenKind::LBracket)?;
    let mut out = Vec::new();
    if ts.eat(&TokenKind::RBracket) {
        return Ok(out);
    }
    loop {
        out.push(parse_expr(ts, vars, ORDER)?);
        if ts.eat(&TokenKind::Comma) {
            continue;
        }
        if ts.at(&TokenKind::RBracket) {
            ts.next_token();
            return Ok(out);
        }
        return Err(ts.unexpected("`,` or `]`"));
    }
}

fn expect_ident(ts: &mut TokenStream, what: &str) -> Result<String, ParseError> {
    match &ts.peek().kind {
        TokenKind::Ident(s) => {
            let s = s.clone();
            ts.next_token();
            Ok(s)
        }
        _ => Err(ts.unexpected(what)),
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, polys: &[Polynomial], names: &[String]) -> fmt::Result {
    write!(f, "[")?;
    for (i, p) in polys.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{}", p.display(names))?;
    }
    write!(f, "]")
}

impl fmt::Display for OptionValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OptionValue::Int(n) => write!(f, "{n}"),
            OptionValue::Ident(s) => write!(f, "{s}"),
            OptionValue::Str(s) => write!(f, "\"{s}\""),
        }
    }
}

impl fmt::Display for Directive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            DirectiveKind::Report => write!(f, "report")?,
            DirectiveKind::Compute(w) => write!(f, "compute {w}")?,
            DirectiveKind::Check(id) => write!(f, "check \"{id}\"")?,
        }
        for (k, v) in &self.options {
            write!(f, " {k}={v}")?;
        }
        write!(f, ";")
    }
}

/// Canonical text of a session; parsing it gives back the same session up
/// to directive line numbers.
impl fmt::Display for Session {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = &self.ring.vars;
        write!(f, "ring {} vars {}", self.ring.name, names.join(" "))?;
        if !self.ring.presentation.is_empty() {
            write!(f, " mod ")?;
            write_list(f, &self.ring.presentation, names)?;
        }
        writeln!(f, ";")?;
        for d in &self.ideals {
            write!(f, "ideal {} = ", d.name)?;
            write_list(f, &d.gens, names)?;
            writeln!(f, ";")?;
        }
        for d in &self.directives {
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_session() {
        let s = parse_session("ring R vars x y; ideal I=[x,y]; ideal J=[x,y]; report;").unwrap();
        assert_eq!(s.ring.vars, vec!["x", "y"]);
        assert_eq!(s.ideals.len(), 2);
        assert_eq!(s.directives[0].kind, DirectiveKind::Report);
    }

    #[test]
    fn options_and_comments() {
        let text = "# header\nring S vars a b mod [a*b];\nideal I = [a^2, b^2]; # trailing\nideal J = [a^2+b^2];\ncompute star element=\"a^2\" nmax=4 ideal=I;\ncheck \"fc1-one\";\n";
        let s = parse_session(text).unwrap();
        assert_eq!(s.ring.presentation.len(), 1);
        let d = &s.directives[0];
        assert_eq!(d.kind, DirectiveKind::Compute("star".into()));
        assert_eq!(d.option("nmax"), Some(&OptionValue::Int(4)));
        assert_eq!(d.option("ideal"), Some(&OptionValue::Ident("I".into())));
        assert_eq!(d.line, 5);
        assert_eq!(s.directives[1].kind, DirectiveKind::Check("fc1-one".into()));
    }

    #[test]
    fn round_trip() {
        let text = "ring R vars x y z mod [x*y - z^2];\nideal I = [x^2, 1/2*y - 3*z, -x*y*z];\nideal J = [x^2];\nreport cap=10;\ncompute sums family=FC1;\n";
        let s = parse_session(text).unwrap();
        let again = parse_session(&s.to_string()).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn unclosed_bracket() {
        let e = parse_session("ring R vars x y;\nideal I=[x").unwrap_err();
        assert_eq!((e.line, e.col), (2, 11));
        assert!(matches!(e.kind, ParseErrorKind::Expected { .. }));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_session("ring R vars x;\nideal I = [x, w];").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UndeclaredIdentifier("w".into()));
        assert_eq!((e.line, e.col), (2, 15));
        let e = parse_session("ring R vars x; ring S vars y;").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DuplicateRing);
        let e = parse_session("ideal I = [x];").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MissingRing);
        let e = parse_session("ring R vars x; ideal I = [x]; compute nonsense;").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownTarget("nonsense".into()));
        let e = parse_session("ring R vars x; ideal I = [x]; compute colength ideal=K;").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UndeclaredIdentifier("K".into()));
        let e = parse_session("ring R vars x x;").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DuplicateVariable("x".into()));
    }
}
