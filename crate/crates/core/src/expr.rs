//! Text form of elements.
//!
//! ```text
//! element  := term (('+' | '-') term)*
//! term     := [rational] factor ('v' factor)*
//! factor   := '1' | 'i(' element ')' | 'e' decimal
//! rational := integer ['/' positive-integer]
//! ```
//!
//! Whitespace is insignificant. A leading sign on the first term is accepted.
//! Factors may come in any order; the product is normalized with its
//! exchange sign folded into the coefficient.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::basis::{BasisMonomial, SerialNumber};
use crate::error::{PlexusError, Result};
use crate::grassmann::Element;
use crate::scalar::Rational;

pub fn parse(text: &str) -> Result<Element> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.element()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn sum(a: Element, b: Element) -> Element {
    let stage = a.stage().max(b.stage());
    a.lift(stage).unwrap().add(&b.lift(stage).unwrap()).unwrap()
}

impl Parser<'_> {
    fn error(&self, message: &str) -> PlexusError {
        PlexusError::Parse { position: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn element(&mut self) -> Result<Element> {
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                negate = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.scale(&-Rational::one());
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = sum(acc, t);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?.scale(&-Rational::one());
                    acc = sum(acc, t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn digits(&mut self) -> Option<&[u8]> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.src[start..self.pos])
    }

    fn term(&mut self) -> Result<Element> {
        let start = self.pos;
        let mut coefficient = Rational::one();
        let mut have_factor = false;
        let mut product = Element::unit();

        // A bare integer is either a coefficient or the factor `1`.
        if let Some(d) = self.digits() {
            let n: BigInt = std::str::from_utf8(d).unwrap().parse().unwrap();
            if self.peek() == Some(b'/') {
                self.pos += 1;
                let den: BigInt = match self.digits() {
                    Some(d) => std::str::from_utf8(d).unwrap().parse().unwrap(),
                    None => return Err(self.error("expected denominator")),
                };
                if den.is_zero() {
                    return Err(self.error("zero denominator"));
                }
                coefficient = Rational::new(n, den);
            } else if matches!(self.peek(), Some(b'i') | Some(b'e') | Some(b'0'..=b'9')) {
                coefficient = Rational::from_integer(n);
            } else if n.is_one() {
                have_factor = true;
            } else {
                // A lone integer scales the unit.
                coefficient = Rational::from_integer(n);
                have_factor = true;
            }
        }
        if !have_factor {
            product = self.factor()?;
        }
        while self.peek() == Some(b'v') {
            self.pos += 1;
            let f = self.factor()?;
            product = product.wedge(&f);
        }
        if self.pos == start {
            return Err(self.error("expected a term"));
        }
        Ok(product.scale(&coefficient))
    }

    fn factor(&mut self) -> Result<Element> {
        match self.peek() {
            Some(b'1') => {
                self.pos += 1;
                if self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    return Err(self.error("only `1` may appear as a numeric factor"));
                }
                Ok(Element::unit())
            }
            Some(b'i') => {
                self.pos += 1;
                self.expect(b'(')?;
                let inner = self.element()?;
                self.expect(b')')?;
                Ok(inner.iota())
            }
            Some(b'e') => {
                self.pos += 1;
                let q: BigUint = match self.digits() {
                    Some(d) => std::str::from_utf8(d).unwrap().parse().unwrap(),
                    None => return Err(self.error("expected serial digits after `e`")),
                };
                Ok(Element::monomial(BasisMonomial::from_serial(&SerialNumber(q))))
            }
            _ => Err(self.error("expected `1`, `i(` or `e<serial>`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::RenderFormat;
    use crate::scalar::{int, ratio};

    #[test]
    fn serial_shorthand() {
        let e6 = parse("e6").unwrap();
        assert_eq!(e6, Element::serial(6));
    }

    #[test]
    fn square_of_monadic_vanishes() {
        assert!(parse("i(1) v i(1)").unwrap().is_zero());
    }

    #[test]
    fn reorders_with_sign() {
        assert_eq!(parse("i(1) v i(i(1))").unwrap(), Element::serial(3).scale(&int(-1)));
        assert_eq!(parse("e1 v e2").unwrap(), Element::serial(3).scale(&int(-1)));
    }

    #[test]
    fn coefficients_and_sums() {
        let q = parse("3/2 e5 - 2 e6 + e5").unwrap();
        let expected = Element::serial(5)
            .scale(&ratio(5, 2))
            .add(&Element::serial(6).scale(&int(-2)))
            .unwrap();
        assert_eq!(q, expected);
        assert_eq!(parse("-e1").unwrap(), Element::serial(1).scale(&int(-1)));
        assert_eq!(parse("2").unwrap(), Element::unit().scale(&int(2)));
        assert_eq!(parse("1").unwrap(), Element::unit());
    }

    #[test]
    fn linear_iota_inside() {
        assert_eq!(parse("i(e1 + e2)").unwrap(), parse("e2 + e4").unwrap());
    }

    #[test]
    fn round_trip_render() {
        for q in 0..16u64 {
            let e = Element::serial(q);
            assert_eq!(parse(&e.render(RenderFormat::Expr)).unwrap(), e);
        }
    }

    #[test]
    fn errors_carry_position() {
        match parse("i(1 v") {
            Err(PlexusError::Parse { position, .. }) => assert_eq!(position, 5),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("e"), Err(PlexusError::Parse { position: 1, .. })));
        assert!(matches!(parse("i(1) x"), Err(PlexusError::Parse { .. })));
        assert!(matches!(parse("1/0 e1"), Err(PlexusError::Parse { .. })));
        assert!(matches!(parse(""), Err(PlexusError::Parse { .. })));
    }
}
