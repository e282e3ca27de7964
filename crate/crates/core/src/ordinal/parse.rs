//! Text syntax: `0`, `5`, `w`, `w^w`, `w^(w^2)*3 + w*2 + 7`.
//!
//! `+` and `*` are full ordinal sum and product, `^` is only allowed after
//! `w` and associates to the right. `ω` is accepted for `w`.

use super::{Ordinal, OrdinalError};

struct Cursor {
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error<T>(&self, message: &str) -> Result<T, OrdinalError> {
        Err(OrdinalError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        })
    }

    fn sum(&mut self) -> Result<Ordinal, OrdinalError> {
        let mut acc = self.product()?;
        while self.eat('+') {
            acc = acc.add(&self.product()?)?;
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Ordinal, OrdinalError> {
        let mut acc = self.power()?;
        while self.eat('*') {
            acc = acc.mul(&self.power()?)?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Ordinal, OrdinalError> {
        match self.peek() {
            Some('w') | Some('ω') => {
                self.pos += 1;
                if self.eat('^') {
                    let exponent = self.power()?;
                    Ordinal::try_omega_pow(&exponent)
                } else {
                    Ok(Ordinal::omega())
                }
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat(')') {
                    return self.error("expected ')'");
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits: String = self.chars[start..self.pos].iter().collect();
                match digits.parse::<u64>() {
                    Ok(n) => Ok(Ordinal::from(n)),
                    Err(_) => Err(OrdinalError::Syntax {
                        offset: start,
                        message: "natural number out of range".into(),
                    }),
                }
            }
            Some(_) => self.error("expected 'w', a number or '('"),
            None => self.error("unexpected end of input"),
        }
    }
}

pub fn parse(text: &str) -> Result<Ordinal, OrdinalError> {
    let mut cur = Cursor {
        chars: text.chars().collect(),
        pos: 0,
    };
    let value = cur.sum()?;
    if cur.peek().is_some() {
        return cur.error("trailing input");
    }
    Ok(value)
}
