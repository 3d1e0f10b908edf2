//! Polynomial literals: variables `s1..sr`, postfix `*` for adjoints,
//! juxtaposition for products, `^k` powers, parentheses, and coefficients
//! written as integers or `c(m; a0,a1,...)`.

use gpsofic_algnum::CycInt;

use crate::{NcPoly, ProbError, Variables};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    vars: &'a Variables,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> ProbError {
        ProbError::Parse {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.src[start..self.pos])
    }

    fn expr(&mut self) -> Result<NcPoly, ProbError> {
        let mut acc = NcPoly::zero();
        let mut negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            let t = self.term()?;
            acc = if negate { acc.sub(&t) } else { acc.add(&t) };
            if self.eat('+') {
                negate = false;
            } else if self.eat('-') {
                negate = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&mut self) -> bool {
        self.skip_ws();
        matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == 's' || c == 'c' || c == '(')
    }

    fn term(&mut self) -> Result<NcPoly, ProbError> {
        if !self.starts_factor() {
            return Err(self.error("expected a factor"));
        }
        let mut acc = self.factor()?;
        while self.starts_factor() {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<NcPoly, ProbError> {
        let mut p = self.atom()?;
        loop {
            if self.eat('*') {
                p = p.adjoint(self.vars);
            } else if self.eat('^') {
                self.skip_ws();
                let e: u32 = self
                    .digits()
                    .ok_or_else(|| self.error("expected an exponent"))?
                    .parse()
                    .map_err(|_| self.error("exponent too large"))?;
                p = p.pow(e);
            } else {
                return Ok(p);
            }
        }
    }

    fn atom(&mut self) -> Result<NcPoly, ProbError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let p = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(p)
            }
            Some('s') => {
                self.pos += 1;
                let idx: usize = self
                    .digits()
                    .ok_or_else(|| self.error("expected a variable index"))?
                    .parse()
                    .map_err(|_| self.error("bad index"))?;
                if idx == 0 || idx > self.vars.len() {
                    return Err(
                        self.error(format!("variable s{idx} outside s1..s{}", self.vars.len()))
                    );
                }
                Ok(NcPoly::var(idx - 1))
            }
            Some('c') => {
                let start = self.pos;
                let close = self.src[start..]
                    .find(')')
                    .ok_or_else(|| self.error("unterminated coefficient"))?;
                self.pos = start + close + 1;
                let c: CycInt =
                    self.src[start..self.pos]
                        .parse()
                        .map_err(|e: gpsofic_algnum::AlgError| ProbError::Parse {
                            position: start,
                            message: e.to_string(),
                        })?;
                Ok(NcPoly::constant(c))
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits().expect("checked digit");
                let a: i64 = d.parse().map_err(|_| self.error("integer too large"))?;
                Ok(NcPoly::constant(CycInt::from_int(a)))
            }
            _ => Err(self.error("expected a variable, coefficient or `(`")),
        }
    }
}

pub(crate) fn parse_poly(text: &str, vars: &Variables) -> Result<NcPoly, ProbError> {
    let mut p = Parser {
        src: text,
        pos: 0,
        vars,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.error("trailing input"));
    }
    out.normalized(vars)
}
