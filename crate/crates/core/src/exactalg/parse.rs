//! A small parser for polynomial expressions such as `2*a2*a4 + a5*c2` or
//! `(3/4)x^2 - y`, used for catalog constraints and command-line input.

use super::{AlgebraError, Rational, Roster, SparsePoly};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(num_bigint::BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, AlgebraError> {
    let bad = || AlgebraError::ParseRational(s.to_string());
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            if i < b.len() && (b[i] == b'.' || b[i] == b'e' || b[i] == b'E') {
                return Err(bad());
            }
            out.push(Tok::Num(s[start..i].parse().map_err(|_| bad())?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push(Tok::Ident(s[start..i].to_string()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(bad());
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    roster: &'a Roster,
    src: &'a str,
}

type P = SparsePoly<Rational>;

impl Parser<'_> {
    fn err(&self) -> AlgebraError {
        AlgebraError::ParseRational(self.src.to_string())
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<P, AlgebraError> {
        let mut neg = false;
        if self.eat('-') {
            neg = true;
        } else {
            self.eat('+');
        }
        let mut acc = self.term()?;
        if neg {
            acc = -&acc;
        }
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<P, AlgebraError> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.power()?;
            } else if self.eat('/') {
                let d = self.power()?;
                if !d.is_constant() || d.is_zero() {
                    return Err(AlgebraError::DivisionByZero);
                }
                acc = acc.scale(&d.constant_term().recip()?);
            } else if matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::Op('('))) {
                // Implicit multiplication: `3x`, `(1/2)x^2`.
                acc = &acc * &self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<P, AlgebraError> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| self.err())?;
                    if e == 0 {
                        return Ok(P::constant(self.roster.clone(), Rational::one()));
                    }
                    Ok(base.pow(e))
                }
                _ => Err(self.err()),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<P, AlgebraError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(P::constant(self.roster.clone(), Rational::from(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let idx = self
                    .roster
                    .iter()
                    .position(|v| *v == name)
                    .ok_or(AlgebraError::UnknownVariable(name))?;
                Ok(P::var(self.roster.clone(), idx))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err());
                }
                Ok(e)
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-&self.atom()?)
            }
            _ => Err(self.err()),
        }
    }
}

/// Parses a polynomial over `roster`. Decimal literals are rejected.
pub fn parse_poly(src: &str, roster: &Roster) -> Result<SparsePoly<Rational>, AlgebraError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(AlgebraError::ParseRational(src.to_string()));
    }
    let mut p = Parser { toks, pos: 0, roster, src };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err());
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::super::roster;
    use super::*;

    #[test]
    fn parses_constraints() {
        let r = roster(&["a2", "a4", "a5", "c2"]);
        let p = parse_poly("2*a2*a4 + a5*c2", &r).unwrap();
        assert_eq!(p.to_string(), "2*a2*a4 + a5*c2");
        let q = parse_poly("(3/4)a2^2 - -a4", &r).unwrap();
        assert_eq!(q.to_string(), "3/4*a2^2 + a4");
        assert!(parse_poly("0.5*a2", &r).is_err());
        assert!(parse_poly("a9", &r).is_err());
        assert!(parse_poly("a2 +", &r).is_err());
    }
}
