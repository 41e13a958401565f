//! Recursive-descent parser for the spec language.
//!
//! Grammar, loosest to tightest binding:
//!
//! ```text
//! formula  := implies
//! implies  := or ("->" implies)?                  right-associative
//! or       := and ("|" and)*
//! and      := temporal ("&" temporal)*
//! temporal := unary (("U"|"W"|"R") unary)*        same-operator chains are
//!                                                 right-associative; mixing
//!                                                 U/W/R needs parentheses
//! unary    := ("!"|"X"|"F"|"G") unary | atom
//! atom     := "true" | "false" | IDENT "=" IDENT
//!           | IDENT "!=" IDENT | "(" formula ")"
//! ```
//!
//! `p != a` is sugar for `! (p = a)`. `#` starts a comment running to the
//! end of the line; whitespace is insignificant.

use std::fmt;

use thiserror::Error;

use super::{Atom, Formula};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        line: usize,
        col: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("{line}:{col}: unknown operator `{text}`")]
    UnknownOperator {
        line: usize,
        col: usize,
        text: String,
    },
}

impl ParseError {
    fn syntax(pos: Pos, expected: &[&str], found: impl Into<String>) -> Self {
        ParseError::Syntax {
            line: pos.line,
            col: pos.col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: found.into(),
        }
    }

    /// Shifts line numbers when a formula was parsed out of a larger file.
    fn at_file_line(self, line: usize) -> Self {
        match self {
            ParseError::Syntax {
                col,
                expected,
                found,
                ..
            } => ParseError::Syntax {
                line,
                col,
                expected,
                found,
            },
            ParseError::UnknownOperator { col, text, .. } => {
                ParseError::UnknownOperator { line, col, text }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Until,
    WeakUntil,
    Release,
    Next,
    Eventually,
    Globally,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Eq,
    Neq,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::True => write!(f, "`true`"),
            Tok::False => write!(f, "`false`"),
            Tok::Until => write!(f, "`U`"),
            Tok::WeakUntil => write!(f, "`W`"),
            Tok::Release => write!(f, "`R`"),
            Tok::Next => write!(f, "`X`"),
            Tok::Eventually => write!(f, "`F`"),
            Tok::Globally => write!(f, "`G`"),
            Tok::Bang => write!(f, "`!`"),
            Tok::Amp => write!(f, "`&`"),
            Tok::Pipe => write!(f, "`|`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Eq => write!(f, "`=`"),
            Tok::Neq => write!(f, "`!=`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '(' => {
                chars.next();
                col += 1;
                out.push((Tok::LParen, pos));
            }
            ')' => {
                chars.next();
                col += 1;
                out.push((Tok::RParen, pos));
            }
            '&' => {
                chars.next();
                col += 1;
                out.push((Tok::Amp, pos));
            }
            '|' => {
                chars.next();
                col += 1;
                out.push((Tok::Pipe, pos));
            }
            '=' => {
                chars.next();
                col += 1;
                out.push((Tok::Eq, pos));
            }
            '!' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'=') {
                    chars.next();
                    col += 1;
                    out.push((Tok::Neq, pos));
                } else {
                    out.push((Tok::Bang, pos));
                }
            }
            '-' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'>') {
                    chars.next();
                    col += 1;
                    out.push((Tok::Arrow, pos));
                } else {
                    return Err(ParseError::UnknownOperator {
                        line: pos.line,
                        col: pos.col,
                        text: "-".into(),
                    });
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut ident = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        ident.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let tok = match ident.as_str() {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "U" => Tok::Until,
                    "W" => Tok::WeakUntil,
                    "R" => Tok::Release,
                    "X" => Tok::Next,
                    "F" => Tok::Eventually,
                    "G" => Tok::Globally,
                    _ => Tok::Ident(ident),
                };
                out.push((tok, pos));
            }
            other => {
                return Err(ParseError::UnknownOperator {
                    line: pos.line,
                    col: pos.col,
                    text: other.to_string(),
                });
            }
        }
    }
    out.push((Tok::End, Pos { line, col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, expected: &[&str]) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(ParseError::syntax(
                self.pos(),
                expected,
                self.peek().to_string(),
            ))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        self.implies()
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implies()?;
            Ok(lhs.implies(rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            lhs = lhs.or(self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.temporal()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            lhs = lhs.and(self.temporal()?);
        }
        Ok(lhs)
    }

    fn temporal(&mut self) -> Result<Formula, ParseError> {
        let first = self.unary()?;
        let op = match self.peek() {
            Tok::Until | Tok::WeakUntil | Tok::Release => self.bump(),
            _ => return Ok(first),
        };
        let mut operands = vec![first, self.unary()?];
        while let t @ (Tok::Until | Tok::WeakUntil | Tok::Release) = self.peek() {
            if *t != op {
                // `a U b R c` has no agreed reading; force parentheses.
                return Err(ParseError::syntax(
                    self.pos(),
                    &[
                        &format!("{op}"),
                        "`&`",
                        "`|`",
                        "`->`",
                        "`)`",
                        "end of input",
                    ],
                    format!("{t} (mixed temporal operators need parentheses)"),
                ));
            }
            self.bump();
            operands.push(self.unary()?);
        }
        // Right-associative fold of the same-operator chain.
        let mut acc = operands.pop().expect("chain has at least two operands");
        while let Some(lhs) = operands.pop() {
            acc = match op {
                Tok::Until => lhs.until(acc),
                Tok::WeakUntil => lhs.weak_until(acc),
                Tok::Release => lhs.release(acc),
                _ => unreachable!(),
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(self.unary()?.not())
            }
            Tok::Next => {
                self.bump();
                Ok(self.unary()?.next())
            }
            Tok::Eventually => {
                self.bump();
                Ok(self.unary()?.eventually())
            }
            Tok::Globally => {
                self.bump();
                Ok(self.unary()?.globally())
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, &["`)`"])?;
                Ok(f)
            }
            Tok::Ident(var) => {
                self.bump();
                let negated = match self.peek() {
                    Tok::Eq => false,
                    Tok::Neq => true,
                    _ => {
                        return Err(ParseError::syntax(
                            self.pos(),
                            &["`=`", "`!=`"],
                            self.peek().to_string(),
                        ))
                    }
                };
                self.bump();
                match self.peek().clone() {
                    Tok::Ident(value) => {
                        self.bump();
                        let atom = Formula::Atom(Atom { var, value });
                        Ok(if negated { atom.not() } else { atom })
                    }
                    other => Err(ParseError::syntax(
                        self.pos(),
                        &["identifier"],
                        other.to_string(),
                    )),
                }
            }
            other => Err(ParseError::syntax(
                self.pos(),
                &[
                    "identifier",
                    "`true`",
                    "`false`",
                    "`(`",
                    "`!`",
                    "`X`",
                    "`F`",
                    "`G`",
                ],
                other.to_string(),
            )),
        }
    }
}

/// Parses a single formula. Trailing input after the formula is an error.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let f = p.formula()?;
    p.expect(Tok::End, &["end of input"])?;
    Ok(f)
}

/// One formula from a spec file, with the optional name taken from a
/// preceding `# name` comment line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecEntry {
    pub name: Option<String>,
    pub source: String,
    pub formula: Formula,
    pub line: usize,
}

/// Parses a spec file: one formula per line, `#` comments, blank lines
/// ignored. A comment line whose content is a single identifier (for example
/// `# phi3`) names the next formula.
pub fn parse_spec_file(text: &str) -> Result<Vec<SpecEntry>, ParseError> {
    let mut entries = Vec::new();
    let mut pending_name: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let (body, comment) = match raw.find('#') {
            Some(i) => (&raw[..i], Some(raw[i + 1..].trim())),
            None => (raw, None),
        };
        if body.trim().is_empty() {
            if let Some(c) = comment {
                if super::is_ident(c) {
                    pending_name = Some(c.to_string());
                }
            }
            continue;
        }
        let formula = parse(body).map_err(|e| e.at_file_line(line_no))?;
        entries.push(SpecEntry {
            name: pending_name.take(),
            source: body.trim().to_string(),
            formula,
            line: line_no,
        });
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(var: &str, val: &str) -> Formula {
        Formula::atom(var, val)
    }

    #[test]
    fn parses_implication_with_eventually() {
        let f = parse("stage = issued -> F (stage = endorsed)").unwrap();
        let expected = a("stage", "issued").implies(a("stage", "endorsed").eventually());
        assert_eq!(f, expected);
    }

    #[test]
    fn parses_true_literal() {
        assert_eq!(parse("true").unwrap(), Formula::True);
    }

    #[test]
    fn until_chain_is_right_associative() {
        let f = parse("p = a U q = b U r = c").unwrap();
        let expected = a("p", "a").until(a("q", "b").until(a("r", "c")));
        assert_eq!(f, expected);
        // Round-trip confirms the shape survives printing.
        assert_eq!(parse(&f.pretty()).unwrap(), f);
    }

    #[test]
    fn mixed_temporal_operators_are_rejected() {
        let err = parse("p = a U q = b R r = c").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { .. }), "got {err:?}");
        assert!(err.to_string().contains("parentheses"), "got {err}");
    }

    #[test]
    fn implies_is_right_associative() {
        let f = parse("p = a -> q = b -> r = c").unwrap();
        let expected = a("p", "a").implies(a("q", "b").implies(a("r", "c")));
        assert_eq!(f, expected);
    }

    #[test]
    fn and_binds_tighter_than_or() {
        let f = parse("p = a | q = b & r = c").unwrap();
        let expected = a("p", "a").or(a("q", "b").and(a("r", "c")));
        assert_eq!(f, expected);
    }

    #[test]
    fn temporal_binds_tighter_than_and() {
        let f = parse("p = a U q = b & r = c").unwrap();
        let expected = a("p", "a").until(a("q", "b")).and(a("r", "c"));
        assert_eq!(f, expected);
    }

    #[test]
    fn unary_binds_tighter_than_until() {
        let f = parse("F p = a U q = b").unwrap();
        let expected = a("p", "a").eventually().until(a("q", "b"));
        assert_eq!(f, expected);
    }

    #[test]
    fn neq_is_negation_sugar() {
        let f = parse("stage != endorsed").unwrap();
        assert_eq!(f, a("stage", "endorsed").not());
    }

    #[test]
    fn syntax_error_reports_location_and_expectations() {
        let err = parse("p = ").unwrap_err();
        match err {
            ParseError::Syntax {
                line,
                col,
                ref expected,
                ..
            } => {
                assert_eq!(line, 1);
                assert_eq!(col, 5);
                assert!(expected.iter().any(|e| e.contains("identifier")));
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn stray_token_is_unknown_operator() {
        let err = parse("p = a + q = b").unwrap_err();
        assert!(
            matches!(err, ParseError::UnknownOperator { .. }),
            "got {err:?}"
        );
    }

    #[test]
    fn trailing_input_is_an_error() {
        assert!(parse("p = a q = b").is_err());
    }

    #[test]
    fn whitespace_is_insignificant() {
        let dense = parse("p=a->F(q=b)").unwrap();
        let airy = parse("  p  =  a  ->  F  (  q  =  b  )  ").unwrap();
        assert_eq!(dense, airy);
    }

    #[test]
    fn spec_file_names_and_autonumbering() {
        let text = "\
# workflow specs
# phi1
p = a -> F (q = b)

q = b   # trailing comment, not a name
# not a name!
r = c
";
        let entries = parse_spec_file(text).unwrap();
        assert_eq!(entries.len(), 3);
        assert_eq!(entries[0].name.as_deref(), Some("phi1"));
        assert_eq!(entries[1].name, None);
        assert_eq!(entries[2].name, None);
        assert_eq!(entries[1].source, "q = b");
    }

    #[test]
    fn spec_file_error_carries_file_line() {
        let text = "p = a\n\nq = !\n";
        let err = parse_spec_file(text).unwrap_err();
        match err {
            ParseError::Syntax { line, .. } => assert_eq!(line, 3),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn empty_spec_file_is_empty() {
        assert_eq!(parse_spec_file("# only comments\n\n").unwrap(), vec![]);
    }
}
