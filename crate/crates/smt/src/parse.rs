// SPDX-License-Identifier: Apache-2.0

//! Reader for the SMT-LIB fragment produced by [`crate::render`].

use std::collections::BTreeMap;

use crate::doc::{Declaration, NamedAssertion, SmtDocument, QF_BV};
use crate::error::{ParseError, ParseErrorKind};
use crate::term::{Op, Sort, Term, MAX_WIDTH};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Atom {
    Symbol(String),
    Numeral(String),
    Binary(String),
    Hex(String),
    Keyword(String),
}

#[derive(Debug, Clone)]
enum Expr {
    Atom(Atom),
    List(Vec<Sexp>),
}

#[derive(Debug, Clone)]
struct Sexp {
    expr: Expr,
    line: usize,
    col: usize,
}

impl Sexp {
    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { line: self.line, col: self.col, kind }
    }

    fn symbol(&self) -> Option<&str> {
        match &self.expr {
            Expr::Atom(Atom::Symbol(s)) => Some(s),
            _ => None,
        }
    }

    fn list(&self) -> Option<&[Sexp]> {
        match &self.expr {
            Expr::List(items) => Some(items),
            Expr::Atom(_) => None,
        }
    }
}

fn syntax(msg: impl Into<String>) -> ParseErrorKind {
    ParseErrorKind::Syntax(msg.into())
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl Reader<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { line: self.line, col: self.col, kind }
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    /// Next s-expression, or `None` at end of input.
    fn sexp(&mut self) -> Result<Option<Sexp>, ParseError> {
        self.skip_trivia();
        let (line, col) = (self.line, self.col);
        let Some(&c) = self.chars.peek() else {
            return Ok(None);
        };
        match c {
            '(' => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => {
                            return Err(ParseError { line, col, kind: syntax("unclosed `(`") });
                        }
                        Some(')') => {
                            self.bump();
                            break;
                        }
                        Some(_) => items.push(self.sexp()?.expect("input remains")),
                    }
                }
                Ok(Some(Sexp { expr: Expr::List(items), line, col }))
            }
            ')' => Err(self.error(syntax("unexpected `)`"))),
            '|' | '"' => Err(self.error(ParseErrorKind::Unsupported("quoted symbols and string literals".to_string()))),
            _ => {
                let mut text = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | ';' | '|' | '"') {
                        break;
                    }
                    text.push(c);
                    self.bump();
                }
                let atom = classify(&text).ok_or_else(|| ParseError {
                    line,
                    col,
                    kind: syntax(format!("malformed token `{text}`")),
                })?;
                Ok(Some(Sexp { expr: Expr::Atom(atom), line, col }))
            }
        }
    }
}

fn classify(text: &str) -> Option<Atom> {
    let first = text.chars().next()?;
    if let Some(bits) = text.strip_prefix("#b") {
        return (!bits.is_empty() && bits.chars().all(|c| c == '0' || c == '1'))
            .then(|| Atom::Binary(bits.to_string()));
    }
    if let Some(digits) = text.strip_prefix("#x") {
        return (!digits.is_empty() && digits.chars().all(|c| c.is_ascii_hexdigit()))
            .then(|| Atom::Hex(digits.to_string()));
    }
    if first.is_ascii_digit() {
        return text.chars().all(|c| c.is_ascii_digit()).then(|| Atom::Numeral(text.to_string()));
    }
    if first == ':' {
        return Some(Atom::Keyword(text.to_string()));
    }
    let simple = |c: char| c.is_ascii_alphanumeric() || "~!@$%^&*_-+=<>.?/".contains(c);
    text.chars().all(simple).then(|| Atom::Symbol(text.to_string()))
}

fn numeral(s: &Sexp) -> Result<u32, ParseError> {
    match &s.expr {
        Expr::Atom(Atom::Numeral(n)) => {
            n.parse().map_err(|_| s.error(ParseErrorKind::Width(format!("index {n} too large"))))
        }
        _ => Err(s.error(syntax("expected a numeral"))),
    }
}

fn parse_sort(s: &Sexp) -> Result<Sort, ParseError> {
    if s.symbol() == Some("Bool") {
        return Ok(Sort::Bool);
    }
    match s.list() {
        Some([u, name, w]) if u.symbol() == Some("_") && name.symbol() == Some("BitVec") => {
            let width = numeral(w)?;
            if width == 0 || width > MAX_WIDTH {
                return Err(w.error(ParseErrorKind::Width(format!("bitvector width {width} outside 1..={MAX_WIDTH}"))));
            }
            Ok(Sort::BitVec(width))
        }
        _ => Err(s.error(ParseErrorKind::Unsupported("sort other than Bool or (_ BitVec n)".to_string()))),
    }
}

fn literal(s: &Sexp, digits: &str, radix: u32, bits_per_digit: u32) -> Result<Term, ParseError> {
    let width = digits.len() as u32 * bits_per_digit;
    if width > MAX_WIDTH {
        return Err(s.error(ParseErrorKind::Width(format!("literal of {width} bits exceeds {MAX_WIDTH}"))));
    }
    let value = u64::from_str_radix(digits, radix).expect("validated digits");
    Term::bv(value, width).map_err(|e| s.error(e.into()))
}

fn parse_term(s: &Sexp, env: &BTreeMap<String, Sort>) -> Result<Term, ParseError> {
    let items = match &s.expr {
        Expr::Atom(Atom::Symbol(name)) => {
            return match name.as_str() {
                "true" => Ok(Term::bool(true)),
                "false" => Ok(Term::bool(false)),
                _ => {
                    let sort = env.get(name).ok_or_else(|| s.error(ParseErrorKind::Undeclared(name.clone())))?;
                    Term::var(name, *sort).map_err(|e| s.error(e.into()))
                }
            };
        }
        Expr::Atom(Atom::Binary(bits)) => return literal(s, bits, 2, 1),
        Expr::Atom(Atom::Hex(digits)) => return literal(s, digits, 16, 4),
        Expr::Atom(Atom::Numeral(_)) => return Err(s.error(ParseErrorKind::Unsupported("integer literal".to_string()))),
        Expr::Atom(Atom::Keyword(k)) => return Err(s.error(syntax(format!("unexpected keyword `{k}`")))),
        Expr::List(items) => items,
    };
    let Some(head) = items.first() else {
        return Err(s.error(syntax("empty application")));
    };
    // (_ bvN W)
    if head.symbol() == Some("_") {
        return match items.as_slice() {
            [_, lit, w] => {
                let width = numeral(w)?;
                let value = lit
                    .symbol()
                    .and_then(|t| t.strip_prefix("bv"))
                    .ok_or_else(|| lit.error(syntax("expected `bvN`")))?;
                let value: u64 = value.parse().map_err(|_| {
                    lit.error(ParseErrorKind::Width(format!("constant bv{value} unreadable or wider than 64 bits")))
                })?;
                Term::bv(value, width).map_err(|e| s.error(e.into()))
            }
            _ => Err(s.error(ParseErrorKind::Unsupported("indexed identifier".to_string()))),
        };
    }
    let op = match head.list() {
        Some([u, name, hi, lo]) if u.symbol() == Some("_") && name.symbol() == Some("extract") => {
            Op::Extract { hi: numeral(hi)?, lo: numeral(lo)? }
        }
        Some(_) => return Err(head.error(ParseErrorKind::Unsupported("indexed operator".to_string()))),
        None => match head.symbol() {
            Some(name) => Op::from_symbol(name)
                .ok_or_else(|| head.error(ParseErrorKind::Unsupported(format!("operator `{name}`"))))?,
            None => return Err(head.error(syntax("expected an operator"))),
        },
    };
    let args = &items[1..];
    let (min, max) = op.arity();
    if args.len() < min || max.is_some_and(|m| args.len() > m) {
        return Err(s.error(ParseErrorKind::Arity {
            op: op.symbol().to_string(),
            expected: op.arity_text(),
            found: args.len(),
        }));
    }
    let args = args.iter().map(|a| parse_term(a, env)).collect::<Result<Vec<_>, _>>()?;
    Term::app(op, args).map_err(|e| s.error(e.into()))
}

/// Parses text in the emitted fragment back into a document.
pub fn parse(text: &str) -> Result<SmtDocument, ParseError> {
    let mut reader = Reader { chars: text.chars().peekable(), line: 1, col: 1 };
    let mut commands = Vec::new();
    while let Some(s) = reader.sexp()? {
        commands.push(s);
    }
    let end = reader.error(syntax("missing (check-sat)"));

    let mut env: BTreeMap<String, Sort> = BTreeMap::new();
    let mut declarations = Vec::new();
    let mut assertions: Vec<NamedAssertion> = Vec::new();
    let mut seen_logic = false;
    let mut seen_check = false;

    for cmd in &commands {
        let items = cmd.list().ok_or_else(|| cmd.error(syntax("expected a command")))?;
        let name = items.first().and_then(Sexp::symbol).ok_or_else(|| cmd.error(syntax("expected a command name")))?;
        if seen_check {
            return Err(cmd.error(syntax("command after (check-sat)")));
        }
        if !seen_logic && name != "set-logic" {
            return Err(cmd.error(syntax("document must begin with (set-logic QF_BV)")));
        }
        match (name, &items[1..]) {
            ("set-logic", [logic]) if !seen_logic => {
                if logic.symbol() != Some(QF_BV) {
                    return Err(logic.error(ParseErrorKind::Unsupported("logic other than QF_BV".to_string())));
                }
                seen_logic = true;
            }
            ("declare-fun", [var, params, sort]) if params.list().is_some_and(<[_]>::is_empty) => {
                declare(var, sort, &mut env, &mut declarations)?;
            }
            ("declare-fun", _) => {
                return Err(cmd.error(ParseErrorKind::Unsupported("declare-fun with parameters".to_string())))
            }
            ("declare-const", [var, sort]) => declare(var, sort, &mut env, &mut declarations)?,
            ("assert", [body]) => {
                let (term, label) = match body.list() {
                    Some([bang, term, key, label])
                        if bang.symbol() == Some("!")
                            && matches!(&key.expr, Expr::Atom(Atom::Keyword(k)) if k == ":named") =>
                    {
                        (term, label)
                    }
                    _ => {
                        return Err(body
                            .error(ParseErrorKind::Unsupported("assertion without (! term :named name)".to_string())))
                    }
                };
                let label_name = label.symbol().ok_or_else(|| label.error(syntax("expected assertion name")))?;
                if assertions.iter().any(|a| a.name == label_name) {
                    return Err(label.error(ParseErrorKind::Document(crate::error::DocError::DuplicateAssertion(
                        label_name.to_string(),
                    ))));
                }
                let term = parse_term(term, &env)?;
                if term.sort() != Sort::Bool {
                    return Err(body.error(ParseErrorKind::Width("assertion is not boolean".to_string())));
                }
                assertions.push(NamedAssertion { name: label_name.to_string(), term });
            }
            ("check-sat", []) => seen_check = true,
            (other, _) => return Err(cmd.error(ParseErrorKind::Unsupported(format!("command `{other}` in this form")))),
        }
    }
    if !seen_check {
        return Err(commands.last().map_or(end.clone(), |c| c.error(end.kind.clone())));
    }
    SmtDocument::new(declarations, assertions).map_err(|e| ParseError {
        line: 1,
        col: 1,
        kind: ParseErrorKind::Document(e),
    })
}

fn declare(
    var: &Sexp,
    sort: &Sexp,
    env: &mut BTreeMap<String, Sort>,
    declarations: &mut Vec<Declaration>,
) -> Result<(), ParseError> {
    let name = var.symbol().ok_or_else(|| var.error(syntax("expected a variable name")))?;
    let sort = parse_sort(sort)?;
    Term::var(name, sort).map_err(|e| var.error(e.into()))?;
    if env.insert(name.to_string(), sort).is_some() {
        return Err(var.error(ParseErrorKind::Document(crate::error::DocError::DuplicateDeclaration(name.to_string()))));
    }
    declarations.push(Declaration { name: name.to_string(), sort });
    Ok(())
}
