//! Concrete syntax for theories (`.slt` files) and text rendering of schemata.
//!
//! ```text
//! # line comment
//! forall_ut x,y,z (regrets^u(x,come(y,z)) -> come^i(y,z)).
//! uttered(~regrets(john, come(mary,party))).
//! ```
//!
//! Precedence from loosest to tightest: `->` (right-associative), `|`, `&`,
//! `~`. An unannotated predicate is read at stratum `u`. Inside a quantifier
//! body, identifiers bound by it are variables; every other identifier is a
//! constant or function symbol.

use std::fmt;

use thiserror::Error;

use crate::schema::ModelSchema;
use crate::syntax::{
    check_rule, check_utterance, Atom, Formula, QuantKind, Signature, Stratum, Symbol, SyntaxError, Term, Theory,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error(transparent)]
    Invalid(#[from] SyntaxError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ItemRef {
    Rule(usize),
    Utterance(usize),
}

/// A parsed file together with where each item started.
#[derive(Clone, Debug)]
pub struct SourceTheory {
    pub name: String,
    pub text: String,
    pub theory: Theory,
    pub spans: Vec<(ItemRef, Span)>,
}

impl SourceTheory {
    pub fn span_of(&self, item: ItemRef) -> Option<Span> {
        self.spans.iter().find(|(i, _)| *i == item).map(|(_, s)| *s)
    }
}

/// One top-level item.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Rule(Formula),
    Utterance(Formula),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Caret,
    Tilde,
    Amp,
    Bar,
    Arrow,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::Tilde => write!(f, "`~`"),
            Tok::Amp => write!(f, "`&`"),
            Tok::Bar => write!(f, "`|`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let span = Span { line, col };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        let tok = match c {
            '\n' | ' ' | '\t' | '\r' => {
                bump(&mut chars);
                continue;
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump(&mut chars);
                }
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '^' => Tok::Caret,
            '~' => Tok::Tilde,
            '&' => Tok::Amp,
            '|' => Tok::Bar,
            '-' => {
                bump(&mut chars);
                if chars.peek() != Some(&'>') {
                    return Err(syntax_err(span, "expected `->`"));
                }
                Tok::Arrow
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut ident = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        ident.push(c);
                        bump(&mut chars);
                    } else {
                        break;
                    }
                }
                out.push((Tok::Ident(ident), span));
                continue;
            }
            other => return Err(syntax_err(span, format!("unexpected character `{other}`"))),
        };
        bump(&mut chars);
        out.push((tok, span));
    }
    out.push((Tok::Eof, Span { line, col }));
    Ok(out)
}

fn syntax_err(span: Span, msg: impl Into<String>) -> ParseError {
    ParseError { line: span.line, col: span.col, kind: ParseErrorKind::Syntax(msg.into()) }
}

fn invalid(span: Span, err: SyntaxError) -> ParseError {
    ParseError { line: span.line, col: span.col, kind: ParseErrorKind::Invalid(err) }
}

const KEYWORDS: [&str; 3] = ["forall", "forall_ut", "uttered"];

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    bound: Vec<Vec<Symbol>>,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(text)?, pos: 0, bound: Vec::new() })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        &self.toks[(self.pos + offset).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn next(&mut self) -> Tok {
        let tok = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.next();
            Ok(())
        } else {
            Err(syntax_err(self.span(), format!("expected {want}, found {}", self.peek())))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.next();
                Ok(s)
            }
            other => Err(syntax_err(self.span(), format!("expected {what}, found {other}"))),
        }
    }

    fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    fn item(&mut self) -> Result<Item, ParseError> {
        let item = if *self.peek() == Tok::Ident("uttered".into()) && *self.peek_at(1) == Tok::LParen {
            self.next();
            self.next();
            let f = self.formula()?;
            self.expect(Tok::RParen)?;
            Item::Utterance(f)
        } else {
            Item::Rule(self.formula()?)
        };
        self.expect(Tok::Dot)?;
        Ok(item)
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.next();
            let rhs = self.formula()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.next();
            lhs = lhs.or(self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.next();
            lhs = lhs.and(self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if *self.peek() == Tok::Tilde {
            self.next();
            return Ok(self.unary()?.not());
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.next();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(kw) if kw == "forall" || kw == "forall_ut" => {
                self.next();
                let kind = if kw == "forall" { QuantKind::Forall } else { QuantKind::ForallUt };
                let mut vars = vec![self.ident("variable")?];
                while *self.peek() == Tok::Comma {
                    self.next();
                    vars.push(self.ident("variable")?);
                }
                self.expect(Tok::LParen)?;
                self.bound.push(vars.clone());
                let body = self.formula();
                self.bound.pop();
                let body = body?;
                self.expect(Tok::RParen)?;
                Ok(Formula::Quantified { kind, vars, body: Box::new(body) })
            }
            Tok::Ident(_) => Ok(Formula::Atom(self.atom()?)),
            other => Err(syntax_err(self.span(), format!("expected a formula, found {other}"))),
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let pred = self.ident("predicate")?;
        let mut stratum = Stratum::U;
        if *self.peek() == Tok::Caret {
            self.next();
            let span = self.span();
            let s = self.ident("stratum")?;
            stratum = Stratum::from_letter(&s)
                .ok_or_else(|| syntax_err(span, format!("unknown stratum `{s}`, expected u, i or d")))?;
        }
        let args = if *self.peek() == Tok::LParen { self.arguments()? } else { Vec::new() };
        Ok(Atom { pred, args, stratum })
    }

    fn arguments(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect(Tok::LParen)?;
        let mut args = vec![self.term()?];
        while *self.peek() == Tok::Comma {
            self.next();
            args.push(self.term()?);
        }
        self.expect(Tok::RParen)?;
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let name = self.ident("term")?;
        if *self.peek() == Tok::LParen {
            return Ok(Term::App(name, self.arguments()?));
        }
        if self.bound.iter().any(|scope| scope.contains(&name)) {
            Ok(Term::Var(name))
        } else {
            Ok(Term::Const(name))
        }
    }
}

/// Parses a whole file, keeping the start position of every item.
pub fn parse_source(name: &str, text: &str) -> Result<SourceTheory, ParseError> {
    let mut parser = Parser::new(text)?;
    let mut theory = Theory::default();
    let mut spans = Vec::new();
    while !parser.at_eof() {
        let span = parser.span();
        match parser.item()? {
            Item::Rule(f) => {
                theory.push_rule(f).map_err(|e| invalid(span, e))?;
                spans.push((ItemRef::Rule(theory.rules().len() - 1), span));
            }
            Item::Utterance(f) => {
                theory.push_utterance(f).map_err(|e| invalid(span, e))?;
                spans.push((ItemRef::Utterance(theory.utterances().len() - 1), span));
            }
        }
    }
    Ok(SourceTheory { name: name.to_string(), text: text.to_string(), theory, spans })
}

pub fn parse_theory(text: &str) -> Result<Theory, ParseError> {
    parse_source("<input>", text).map(|s| s.theory)
}

/// Parses a single item such as `uttered(p(a)).`; the trailing dot is
/// optional.
pub fn parse_item(text: &str) -> Result<Item, ParseError> {
    let mut parser = Parser::new(text)?;
    let span = parser.span();
    let item = if *parser.peek() == Tok::Ident("uttered".into()) {
        parser.next();
        parser.expect(Tok::LParen)?;
        let f = parser.formula()?;
        parser.expect(Tok::RParen)?;
        Item::Utterance(f)
    } else {
        Item::Rule(parser.formula()?)
    };
    if *parser.peek() == Tok::Dot {
        parser.next();
    }
    if !parser.at_eof() {
        return Err(syntax_err(parser.span(), format!("unexpected {}", parser.peek())));
    }
    match &item {
        Item::Rule(f) => check_single(f, check_rule(f), span)?,
        Item::Utterance(f) => check_single(f, check_utterance(f), span)?,
    }
    Ok(item)
}

fn check_single(f: &Formula, shape: Result<(), SyntaxError>, span: Span) -> Result<(), ParseError> {
    shape.map_err(|e| invalid(span, e))?;
    Signature::default().check_formula(f).map_err(|e| invalid(span, e))
}

/// Parses one closed formula, without a trailing dot.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut parser = Parser::new(text)?;
    let span = parser.span();
    let f = parser.formula()?;
    if !parser.at_eof() {
        return Err(syntax_err(parser.span(), format!("unexpected {}", parser.peek())));
    }
    check_single(&f, check_rule(&f), span)?;
    Ok(f)
}

const COLUMNS: [(Stratum, &str); 3] =
    [(Stratum::U, "Indefeasible"), (Stratum::I, "Infelicitously defeasible"), (Stratum::D, "Felicitously defeasible")];

/// Renders a schema as a three-column table, one row per ground atom in
/// sorted order, one literal per cell.
pub fn format_schema(schema: &ModelSchema) -> String {
    let mut rows: Vec<[String; 3]> = Vec::new();
    let atoms: Vec<_> = schema.atoms().into_iter().collect();
    for atom in atoms {
        // An atom may hold both polarities at one stratum; each gets a row.
        let mut cells: [Vec<String>; 3] = Default::default();
        for lit in schema.literals().filter(|l| l.atom == atom) {
            let col = COLUMNS.iter().position(|(s, _)| *s == lit.stratum).unwrap_or(0);
            cells[col].push(lit.to_string());
        }
        let height = cells.iter().map(Vec::len).max().unwrap_or(0);
        for r in 0..height {
            rows.push(std::array::from_fn(|c| cells[c].get(r).cloned().unwrap_or_default()));
        }
    }
    let mut widths: [usize; 3] = std::array::from_fn(|c| COLUMNS[c].1.len());
    for row in &rows {
        for c in 0..3 {
            widths[c] = widths[c].max(row[c].chars().count());
        }
    }
    let mut out = String::new();
    let mut push_row = |cells: [&str; 3]| {
        let line: Vec<String> = (0..3).map(|c| format!("{:<w$}", cells[c], w = widths[c])).collect();
        out.push_str(line.join(" | ").trim_end());
        out.push('\n');
    };
    push_row([COLUMNS[0].1, COLUMNS[1].1, COLUMNS[2].1]);
    let rule: [String; 3] = std::array::from_fn(|c| "-".repeat(widths[c]));
    push_row([&rule[0], &rule[1], &rule[2]]);
    for row in &rows {
        push_row([&row[0], &row[1], &row[2]]);
    }
    out
}
