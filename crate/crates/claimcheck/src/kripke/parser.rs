//! Parser for the model description language.
//!
//! ```text
//! model  := decl* initdecl transdecl+
//! decl   := "var" IDENT ":" "{" IDENT ("," IDENT)* "}" ";"
//! init   := "init" conj ";"
//! trans  := "trans" guard "->" update ("," update)* ";"
//! guard  := conj | "true"
//! conj   := lit ("&" lit)*
//! lit    := IDENT ("="|"!=") IDENT
//! update := "next" "(" IDENT ")" ("=" IDENT | "in" "{" IDENT ("," IDENT)* "}")
//! ```
//!
//! `#` comments run to end of line. Guards may only mention declared
//! variables and declared domain values; anything else is rejected.

use std::fmt;

use thiserror::Error;

use super::{Literal, Model, TransRule, Update, VariableDecl};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("{line}:{col}: expected {expected}, found {found}")]
    Syntax {
        line: usize,
        col: usize,
        expected: String,
        found: String,
    },
    #[error("{line}:{col}: {message}")]
    Semantic {
        line: usize,
        col: usize,
        message: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

impl ModelError {
    fn syntax(pos: Pos, expected: &str, found: impl fmt::Display) -> Self {
        ModelError::Syntax {
            line: pos.line,
            col: pos.col,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    fn semantic(pos: Pos, message: impl Into<String>) -> Self {
        ModelError::Semantic {
            line: pos.line,
            col: pos.col,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Colon,
    Comma,
    Semi,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Amp,
    Arrow,
    Eq,
    Neq,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Amp => write!(f, "`&`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Eq => write!(f, "`=`"),
            Tok::Neq => write!(f, "`!=`"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ModelError> {
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
            ':' | ',' | ';' | '{' | '}' | '(' | ')' | '&' | '=' => {
                chars.next();
                col += 1;
                out.push((
                    match c {
                        ':' => Tok::Colon,
                        ',' => Tok::Comma,
                        ';' => Tok::Semi,
                        '{' => Tok::LBrace,
                        '}' => Tok::RBrace,
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        '&' => Tok::Amp,
                        _ => Tok::Eq,
                    },
                    pos,
                ));
            }
            '!' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'=') {
                    chars.next();
                    col += 1;
                    out.push((Tok::Neq, pos));
                } else {
                    return Err(ModelError::syntax(pos, "`!=`", "`!`"));
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
                    return Err(ModelError::syntax(pos, "`->`", "`-`"));
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
                out.push((Tok::Ident(ident), pos));
            }
            other => {
                return Err(ModelError::syntax(pos, "a token", format!("`{other}`")));
            }
        }
    }
    out.push((Tok::End, Pos { line, col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    variables: Vec<VariableDecl>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok, expected: &str) -> Result<Pos, ModelError> {
        if self.peek() == want {
            Ok(self.bump().1)
        } else {
            Err(ModelError::syntax(self.pos(), expected, self.peek()))
        }
    }

    fn ident(&mut self, expected: &str) -> Result<(String, Pos), ModelError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let pos = self.bump().1;
                Ok((s, pos))
            }
            other => Err(ModelError::syntax(self.pos(), expected, other)),
        }
    }

    fn keyword(&mut self, word: &str) -> Result<Pos, ModelError> {
        match self.peek() {
            Tok::Ident(s) if s == word => Ok(self.bump().1),
            other => Err(ModelError::syntax(self.pos(), &format!("`{word}`"), other)),
        }
    }

    fn variable(&self, name: &str, pos: Pos) -> Result<&VariableDecl, ModelError> {
        self.variables
            .iter()
            .find(|v| v.name == name)
            .ok_or_else(|| ModelError::semantic(pos, format!("variable `{name}` is not declared")))
    }

    fn check_value(&self, decl: &VariableDecl, value: &str, pos: Pos) -> Result<(), ModelError> {
        if decl.domain.iter().any(|d| d == value) {
            Ok(())
        } else {
            Err(ModelError::semantic(
                pos,
                format!("value `{value}` is not in the domain of `{}`", decl.name),
            ))
        }
    }

    /// `"{" IDENT ("," IDENT)* "}"`, rejecting duplicates and emptiness.
    fn value_set(&mut self, what: &str) -> Result<Vec<String>, ModelError> {
        let open = self.expect(&Tok::LBrace, "`{`")?;
        if *self.peek() == Tok::RBrace {
            return Err(ModelError::semantic(open, format!("empty {what}")));
        }
        let mut values = Vec::new();
        loop {
            let (value, pos) = self.ident("a value name")?;
            if values.contains(&value) {
                return Err(ModelError::semantic(
                    pos,
                    format!("duplicate value `{value}` in {what}"),
                ));
            }
            values.push(value);
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        self.expect(&Tok::RBrace, "`}` or `,`")?;
        Ok(values)
    }

    fn decl(&mut self) -> Result<(), ModelError> {
        self.keyword("var")?;
        let (name, pos) = self.ident("a variable name")?;
        if self.variables.iter().any(|v| v.name == name) {
            return Err(ModelError::semantic(
                pos,
                format!("duplicate variable `{name}`"),
            ));
        }
        self.expect(&Tok::Colon, "`:`")?;
        let domain = self.value_set("domain")?;
        self.expect(&Tok::Semi, "`;`")?;
        self.variables.push(VariableDecl { name, domain });
        Ok(())
    }

    fn lit(&mut self) -> Result<(Literal, Pos), ModelError> {
        let (var, pos) = self.ident("a variable name")?;
        let positive = match self.peek() {
            Tok::Eq => true,
            Tok::Neq => false,
            other => return Err(ModelError::syntax(self.pos(), "`=` or `!=`", other)),
        };
        self.bump();
        let (value, vpos) = self.ident("a value name")?;
        let decl = self.variable(&var, pos)?;
        self.check_value(decl, &value, vpos)?;
        Ok((
            Literal {
                var,
                value,
                positive,
            },
            pos,
        ))
    }

    fn conj(&mut self) -> Result<Vec<(Literal, Pos)>, ModelError> {
        let mut lits = vec![self.lit()?];
        while *self.peek() == Tok::Amp {
            self.bump();
            lits.push(self.lit()?);
        }
        Ok(lits)
    }

    /// Computes the factored initial-state sets from the `init` conjunction.
    fn init_decl(&mut self) -> Result<Vec<Vec<String>>, ModelError> {
        self.keyword("init")?;
        let lits = self.conj()?;
        self.expect(&Tok::Semi, "`;` or `&`")?;
        let mut allowed: Vec<Vec<String>> =
            self.variables.iter().map(|v| v.domain.clone()).collect();
        for (lit, pos) in &lits {
            let slot = self
                .variables
                .iter()
                .position(|v| v.name == lit.var)
                .expect("lit checked");
            if lit.positive {
                allowed[slot].retain(|v| *v == lit.value);
            } else {
                allowed[slot].retain(|v| *v != lit.value);
            }
            if allowed[slot].is_empty() {
                return Err(ModelError::semantic(
                    *pos,
                    format!(
                        "init denotes the empty set: no value left for `{}`",
                        lit.var
                    ),
                ));
            }
        }
        Ok(allowed)
    }

    fn update(&mut self) -> Result<Update, ModelError> {
        self.keyword("next")?;
        self.expect(&Tok::LParen, "`(`")?;
        let (var, pos) = self.ident("a variable name")?;
        self.expect(&Tok::RParen, "`)`")?;
        let decl = self.variable(&var, pos)?.clone();
        let choices = match self.peek() {
            Tok::Eq => {
                self.bump();
                let (value, vpos) = self.ident("a value name")?;
                self.check_value(&decl, &value, vpos)?;
                vec![value]
            }
            Tok::Ident(s) if s == "in" => {
                self.bump();
                let values = self.value_set("update set")?;
                for v in &values {
                    self.check_value(&decl, v, pos)?;
                }
                values
            }
            other => return Err(ModelError::syntax(self.pos(), "`=` or `in`", other)),
        };
        Ok(Update { var, choices })
    }

    fn trans_decl(&mut self) -> Result<TransRule, ModelError> {
        self.keyword("trans")?;
        let guard = match self.peek() {
            Tok::Ident(s) if s == "true" => {
                self.bump();
                vec![]
            }
            _ => self.conj()?.into_iter().map(|(lit, _)| lit).collect(),
        };
        self.expect(&Tok::Arrow, "`->`")?;
        let mut updates = vec![self.update()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            updates.push(self.update()?);
        }
        for (i, u) in updates.iter().enumerate() {
            if updates[..i].iter().any(|prev| prev.var == u.var) {
                return Err(ModelError::semantic(
                    self.pos(),
                    format!("variable `{}` is updated twice in one rule", u.var),
                ));
            }
        }
        self.expect(&Tok::Semi, "`;` or `,`")?;
        Ok(TransRule { guard, updates })
    }
}

/// Parses a model. The initial set and successor relation of the result are
/// exactly those denoted by the `init` and `trans` sections.
pub fn parse_model(text: &str) -> Result<Model, ModelError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        variables: Vec::new(),
    };
    loop {
        match p.peek() {
            Tok::Ident(s) if s == "var" => p.decl()?,
            _ => break,
        }
    }
    let init_allowed = match p.peek() {
        Tok::Ident(s) if s == "init" => p.init_decl()?,
        other => return Err(ModelError::syntax(p.pos(), "`var` or `init`", other)),
    };
    let mut rules = Vec::new();
    loop {
        match p.peek() {
            Tok::Ident(s) if s == "trans" => rules.push(p.trans_decl()?),
            Tok::End if !rules.is_empty() => break,
            other => {
                let expected = if rules.is_empty() {
                    "`trans`"
                } else {
                    "`trans` or end of input"
                };
                return Err(ModelError::syntax(p.pos(), expected, other));
            }
        }
    }
    Ok(Model::new(
        "model".to_string(),
        p.variables,
        init_allowed,
        rules,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::State;

    #[test]
    fn parses_minimal_model() {
        let m = parse_model(
            "var p : {a, b}; init p = a; trans p = a -> next(p) = b; trans p = b -> next(p) = b;",
        )
        .unwrap();
        assert_eq!(m.variables.len(), 1);
        assert_eq!(m.initial_states(), vec![State::from_pairs(&[("p", "a")])]);
        assert_eq!(
            m.reachable_states(crate::kripke::DEFAULT_STATE_CAP)
                .unwrap()
                .len(),
            2
        );
    }

    #[test]
    fn init_value_outside_domain_is_semantic_error() {
        let err =
            parse_model("var p : {a, b}; init p = c; trans true -> next(p) = a;").unwrap_err();
        assert!(matches!(err, ModelError::Semantic { .. }), "got {err:?}");
        assert!(err.to_string().contains("domain"), "got {err}");
    }

    #[test]
    fn duplicate_variable_is_semantic_error() {
        let err = parse_model("var p : {a}; var p : {b}; init p = a; trans true -> next(p) = a;")
            .unwrap_err();
        assert!(err.to_string().contains("duplicate variable"), "got {err}");
    }

    #[test]
    fn empty_domain_is_semantic_error() {
        let err = parse_model("var p : {}; init p = a; trans true -> next(p) = a;").unwrap_err();
        assert!(err.to_string().contains("empty domain"), "got {err}");
    }

    #[test]
    fn contradictory_init_is_semantic_error() {
        let err = parse_model("var p : {a, b}; init p = a & p = b; trans true -> next(p) = a;")
            .unwrap_err();
        assert!(err.to_string().contains("empty set"), "got {err}");
    }

    #[test]
    fn undeclared_guard_variable_is_semantic_error() {
        let err = parse_model("var p : {a}; init p = a; trans q = a -> next(p) = a;").unwrap_err();
        assert!(err.to_string().contains("not declared"), "got {err}");
    }

    #[test]
    fn update_value_outside_domain_is_semantic_error() {
        let err = parse_model("var p : {a}; init p = a; trans p = a -> next(p) = z;").unwrap_err();
        assert!(err.to_string().contains("domain"), "got {err}");
    }

    #[test]
    fn missing_trans_section_is_syntax_error() {
        let err = parse_model("var p : {a}; init p = a;").unwrap_err();
        assert!(matches!(err, ModelError::Syntax { .. }), "got {err:?}");
    }

    #[test]
    fn negative_init_literal_excludes_values() {
        let m = parse_model("var p : {a, b, c}; init p != b; trans true -> next(p) = a;").unwrap();
        let inits = m.initial_states();
        assert_eq!(
            inits,
            vec![
                State::from_pairs(&[("p", "a")]),
                State::from_pairs(&[("p", "c")])
            ]
        );
    }

    #[test]
    fn syntax_error_reports_location() {
        let err = parse_model("var p : {a}\ninit p = a;").unwrap_err();
        match err {
            ModelError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn comments_are_ignored() {
        let m = parse_model(
            "# a tiny model\nvar p : {a}; # the only variable\ninit p = a;\ntrans true -> next(p) = a;",
        )
        .unwrap();
        assert_eq!(m.variables[0].name, "p");
    }

    #[test]
    fn duplicate_update_in_one_rule_is_rejected() {
        let err =
            parse_model("var p : {a, b}; init p = a; trans p = a -> next(p) = a, next(p) = b;")
                .unwrap_err();
        assert!(err.to_string().contains("updated twice"), "got {err}");
    }
}
