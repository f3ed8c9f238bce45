//! Text grammar for polynomials.
//!
//! ```text
//! expr   := sign? term (sign term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' integer)?
//! atom   := integer ('/' integer)? | 'i' | variable | '(' expr ')'
//! ```
//! Whitespace is ignored. `i` is the imaginary unit and never a variable.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{GradedPoly, PolyError, WeightedRing};
use crate::exactalg::GaussianRational as Q;

pub fn parse_poly(ring: &WeightedRing, text: &str) -> Result<GradedPoly, PolyError> {
    let mut p = Parser { ring, chars: text.char_indices().collect(), pos: 0, text };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a WeightedRing,
    chars: Vec<(usize, char)>,
    pos: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> PolyError {
        let offset = self.chars.get(self.pos).map_or(self.text.len(), |c| c.0);
        PolyError::Parse { offset, message: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.1.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn eat(&mut self, ch: char) -> bool {
        if self.peek() == Some(ch) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<GradedPoly, PolyError> {
        let mut negate = false;
        if self.eat('-') {
            negate = true;
        } else {
            self.eat('+');
        }
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
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

    fn term(&mut self) -> Result<GradedPoly, PolyError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<GradedPoly, PolyError> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.1.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
        Ok(s.parse().expect("digits parse"))
    }

    fn atom(&mut self) -> Result<GradedPoly, PolyError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let den = if self.eat('/') { self.integer()? } else { BigInt::from(1) };
                if den == BigInt::from(0) {
                    return Err(self.error("zero denominator"));
                }
                Ok(GradedPoly::constant(self.ring, Q::from(BigRational::new(num, den))))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|c| c.1.is_ascii_alphanumeric() || c.1 == '_') {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
                if name == "i" {
                    return Ok(GradedPoly::constant(self.ring, Q::i()));
                }
                GradedPoly::var(self.ring, &name).map_err(|_| {
                    self.pos = start;
                    self.error(&format!("unknown variable '{name}'"))
                })
            }
            _ => Err(self.error("expected a number, variable or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips() {
        let r = WeightedRing::new(&[("x1", 1), ("x2", 1), ("u", 2)]).unwrap();
        for s in ["x1^2 + x2^2", "x1 + i*x2", "(1-i)*x1*u - 3/2*x2^3", "-i", "0", "2*u^2 - 1/3"] {
            let p = parse_poly(&r, s).unwrap();
            let q = parse_poly(&r, &p.to_string()).unwrap();
            assert_eq!(p, q, "{s}");
        }
        assert_eq!(parse_poly(&r, " x1 * x1 ").unwrap().to_string(), "x1^2");
        assert_eq!(parse_poly(&r, "(x1+x2)^2 - x1^2 - x2^2").unwrap().to_string(), "2*x1*x2");
    }

    #[test]
    fn errors_carry_offsets() {
        let r = WeightedRing::new(&[("x", 1)]).unwrap();
        match parse_poly(&r, "x + y") {
            Err(PolyError::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_poly(&r, "x +").is_err());
        assert!(parse_poly(&r, "1/0").is_err());
        assert!(parse_poly(&r, "(x").is_err());
    }
}
