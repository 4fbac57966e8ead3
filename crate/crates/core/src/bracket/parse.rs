//! Recursive-descent parser for the bracket-form language.
//!
//! ```text
//! expr   := term (('+'|'-') term)* ;
//! term   := factor ('*' factor)* ;
//! factor := '{' expr '}' | '(' expr ')' | '-' factor | atom ;
//! atom   := symbol | number | 'n' ('^' integer)? ;
//! symbol := 'a' integer ;
//! number := integer ('/' integer)? | decimal ;
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::{BracketForm, MonomialForm, PolynomialForm};
use crate::scalar::{parse_rational, Rational};

const FACTOR_START: &[&str] = &["'{'", "'('", "'-'", "symbol", "number", "'n'"];

/// Syntax error with the byte offset at which parsing stopped.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at byte {}: expected {}, found {}",
            self.offset,
            self.expected.join(" or "),
            self.found
        )
    }
}

/// Parses a bracket form from its textual syntax.
pub fn parse_form(text: &str) -> Result<BracketForm, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let form = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(&["'+'", "'-'", "'*'", "end of input"]));
    }
    Ok(form)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let found = match self.src.get(self.pos) {
            Some(&c) => format!("'{}'", c as char),
            None => "end of input".into(),
        };
        ParseError { offset: self.pos, expected: expected.iter().map(|s| s.to_string()).collect(), found }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            let want = format!("'{}'", c as char);
            Err(self.error(&[want.as_str()]))
        }
    }

    fn expr(&mut self) -> Result<BracketForm, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = BracketForm::sum(acc, rhs);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = BracketForm::sub(acc, rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BracketForm, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = BracketForm::prod(acc, rhs);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<BracketForm, ParseError> {
        match self.peek() {
            Some(b'{') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b'}')?;
                Ok(BracketForm::frac(inner))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(BracketForm::neg(self.factor()?))
            }
            Some(b'a') => {
                self.pos += 1;
                let start = self.pos;
                let idx = self.digits();
                if idx.is_empty() {
                    return Err(self.error(&["symbol index"]));
                }
                match idx.parse::<u32>() {
                    Ok(i) if i >= 1 => Ok(BracketForm::symbol(i, 0)),
                    _ => {
                        self.pos = start;
                        Err(self.error(&["symbol index between 1 and 2^32-1"]))
                    }
                }
            }
            Some(b'n') => {
                self.pos += 1;
                let mut power = 1u32;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.skip_ws();
                    let start = self.pos;
                    let digits = self.digits();
                    power = match digits.parse::<u32>() {
                        Ok(p) => p,
                        Err(_) => {
                            self.pos = start;
                            return Err(self.error(&["integer exponent"]));
                        }
                    };
                }
                Ok(BracketForm::poly(PolynomialForm::monomial(MonomialForm::n_pow(power))))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            _ => Err(self.error(FACTOR_START)),
        }
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn number(&mut self) -> Result<BracketForm, ParseError> {
        let start = self.pos;
        let whole = self.digits();
        let value: Rational = if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            let fraction = self.digits();
            if whole.is_empty() && fraction.is_empty() {
                self.pos = start;
                return Err(self.error(&["number"]));
            }
            parse_rational(&format!("{whole}.{fraction}")).expect("validated decimal")
        } else {
            let numer: BigInt = whole.parse().expect("validated integer");
            let save = self.pos;
            if self.peek() == Some(b'/') {
                self.pos += 1;
                self.skip_ws();
                let denom_text = self.digits();
                if denom_text.is_empty() {
                    return Err(self.error(&["integer denominator"]));
                }
                let denom: BigInt = denom_text.parse().expect("validated integer");
                if denom.is_zero() {
                    self.pos -= denom_text.len();
                    return Err(self.error(&["non-zero denominator"]));
                }
                Rational::new(numer, denom)
            } else {
                self.pos = save;
                Rational::from_integer(numer)
            }
        };
        Ok(BracketForm::constant(value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::Node;

    #[test]
    fn nested_bracket_example() {
        let f = parse_form("{a1*n*{a2*n}}").unwrap();
        assert_eq!(f.degree_bound(), 2);
        assert!(f.is_constant_free());
        let Node::Frac(inner) = f.node() else { panic!("expected Frac") };
        let Node::Prod(l, r) = inner.node() else { panic!("expected Prod") };
        assert_eq!(l.to_string(), "a1*n");
        assert!(matches!(r.node(), Node::Frac(_)));
    }

    #[test]
    fn pure_polynomial_collapses() {
        let f = parse_form("a1*n + a2*n^2 - a1*a2*n^3").unwrap();
        assert!(f.as_poly().is_some());
        assert_eq!(f.degree_bound(), 3);
        assert_eq!(f.to_string(), "a1*n + a2*n^2 - a1*a2*n^3");
    }

    #[test]
    fn unclosed_brace_reports_offset_one() {
        let err = parse_form("{").unwrap_err();
        assert_eq!(err.offset, 1);
        assert!(err.expected.iter().any(|e| e == "symbol"));
    }

    #[test]
    fn other_errors() {
        assert_eq!(parse_form("a0*n").unwrap_err().offset, 1);
        assert_eq!(parse_form("x").unwrap_err().offset, 0);
        assert_eq!(parse_form("n^").unwrap_err().offset, 2);
        assert_eq!(parse_form("1/0").unwrap_err().offset, 2);
        assert_eq!(parse_form("{n} }").unwrap_err().offset, 4);
        assert!(parse_form("(n").is_err());
    }

    #[test]
    fn numbers_and_decimals() {
        let f = parse_form("{3/10*n}").unwrap();
        assert_eq!(f.to_string(), "{3/10*n}");
        let g = parse_form("0.5 + 0.000001*n").unwrap();
        assert_eq!(g.to_string(), "1/2 + 1/1000000*n");
        assert!(!g.is_constant_free());
    }

    #[test]
    fn difference_of_brackets() {
        let f = parse_form("{a1*n} - {a2*n}").unwrap();
        assert_eq!(f.to_string(), "{a1*n} - {a2*n}");
        assert_eq!(parse_form(&f.to_string()).unwrap(), f);
    }
}
