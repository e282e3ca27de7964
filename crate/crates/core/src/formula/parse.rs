//! Recursive-descent parser for the ASCII formula syntax.
//!
//! ```text
//! imp   := or ( "->" imp )?
//! or    := and ( "|" and )*
//! and   := unary ( "&" unary )*
//! unary := "~" unary | "[" n "]" unary | "<" n ">" unary | atom
//! atom  := "false" | "true" | ident | "(" imp ")"
//! ```
//!
//! `⊥ ¬ ∧ ∨ →` are accepted as aliases. Offsets in errors count characters.

use thiserror::Error;

use super::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("negative modal index at offset {offset}")]
    NegativeIndex { offset: usize },
    #[error("modal index at offset {offset} is not a nonnegative integer")]
    BadIndex { offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::NegativeIndex { offset }
            | ParseError::BadIndex { offset } => *offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    LParen,
    RParen,
    LBrack,
    RBrack,
    Lt,
    Gt,
    Not,
    And,
    Or,
    Arrow,
    Minus,
    Dot,
    Bottom,
    Top,
    Num(String),
    Ident(String),
    Eof,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

fn lex(text: &str) -> Result<Lexer, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            '<' => Tok::Lt,
            '>' => Tok::Gt,
            '~' | '¬' => Tok::Not,
            '&' | '∧' => Tok::And,
            '|' | '∨' => Tok::Or,
            '→' => Tok::Arrow,
            '⊥' => Tok::Bottom,
            '.' => Tok::Dot,
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    i += 1;
                    Tok::Arrow
                } else {
                    Tok::Minus
                }
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    s.push(chars[i]);
                    i += 1;
                }
                toks.push((Tok::Num(s), start));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let mut s = String::new();
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    s.push(chars[i]);
                    i += 1;
                }
                let tok = match s.as_str() {
                    "false" => Tok::Bottom,
                    "true" => Tok::Top,
                    _ => Tok::Ident(s),
                };
                toks.push((tok, start));
                continue;
            }
            other => {
                return Err(ParseError::Syntax {
                    offset: start,
                    message: format!("unexpected character {other:?}"),
                })
            }
        };
        toks.push((tok, start));
        i += 1;
    }
    toks.push((Tok::Eof, chars.len()));
    Ok(Lexer { toks })
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn modal_index(&mut self, close: Tok, what: &str) -> Result<usize, ParseError> {
        let at = self.offset();
        let n = match self.bump() {
            Tok::Minus => return Err(ParseError::NegativeIndex { offset: at }),
            Tok::Num(s) => s
                .parse::<usize>()
                .map_err(|_| ParseError::BadIndex { offset: at })?,
            _ => return Err(ParseError::BadIndex { offset: at }),
        };
        if *self.peek() == Tok::Dot {
            return Err(ParseError::BadIndex { offset: at });
        }
        self.expect(close, what)?;
        Ok(n)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LBrack => {
                self.bump();
                let n = self.modal_index(Tok::RBrack, "']'")?;
                Ok(Formula::boxed(n, self.unary()?))
            }
            Tok::Lt => {
                self.bump();
                let n = self.modal_index(Tok::Gt, "'>'")?;
                Ok(Formula::diamond(n, self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Bottom => {
                self.bump();
                Ok(Formula::Bottom)
            }
            Tok::Top => {
                self.bump();
                Ok(Formula::top())
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Var(name))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.implication()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Eof => self.error("unexpected end of input"),
            other => self.error(format!("unexpected token {other:?}")),
        }
    }
}

/// Parses a formula; see the module docs for the grammar.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let Lexer { toks } = lex(text)?;
    let mut parser = Parser { toks, pos: 0 };
    let f = parser.implication()?;
    if *parser.peek() != Tok::Eof {
        return parser.error("trailing input");
    }
    Ok(f)
}
