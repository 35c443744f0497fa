//! The term grammar:
//!
//! ```text
//! expr   := ['+' | '-'] product (('+' | '-') product)*
//! product:= factor factor*                      juxtaposition multiplies
//! factor := number ['i'] | 'i' | atom | '(' expr ')'
//! atom   := 'p(' id ')' | 's(' id ')' | 's*(' id ')' | 't(' id ')' | 't*(' id ')'
//! number := digits ['/' digits]
//! ```
//!
//! Scalars may only appear multiplied into generator words; the algebra has
//! no unit to add them to.

use alloc::string::ToString;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::coeff::{imag_unit, Coeff};
use super::context::CkContext;
use super::term::{CkTerm, SymbolicError};

enum Value {
    Scalar(Coeff),
    Term(CkTerm),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    ctx: &'a dyn CkContext,
}

pub fn parse_term(src: &str, ctx: &dyn CkContext) -> Result<CkTerm, SymbolicError> {
    let mut p = Parser { src, pos: 0, ctx };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    match v {
        Value::Term(t) => Ok(t),
        Value::Scalar(c) if c.is_zero() => Ok(CkTerm::zero()),
        Value::Scalar(_) => Err(SymbolicError::Parse {
            pos: 0,
            msg: "a bare scalar is not an element of the algebra".into(),
        }),
    }
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> SymbolicError {
        SymbolicError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Value, SymbolicError> {
        self.skip_ws();
        let mut negate = false;
        if self.eat("-") {
            negate = true;
        } else {
            self.eat("+");
        }
        let mut acc = self.product()?;
        if negate {
            acc = neg(acc);
        }
        loop {
            self.skip_ws();
            let sign = if self.eat("+") {
                false
            } else if self.eat("-") {
                true
            } else {
                return Ok(acc);
            };
            let mut rhs = self.product()?;
            if sign {
                rhs = neg(rhs);
            }
            acc = self.add(acc, rhs)?;
        }
    }

    fn product(&mut self) -> Result<Value, SymbolicError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some('+') | Some('-') | Some(')') => return Ok(acc),
                _ => {
                    let rhs = self.factor()?;
                    acc = self.mul(acc, rhs)?;
                }
            }
        }
    }

    fn factor(&mut self) -> Result<Value, SymbolicError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.skip_ws();
                if !self.eat(")") {
                    return Err(self.err("expected `)`"));
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let q = self.number()?;
                let c = if self.eat("i") {
                    Coeff::new(BigRational::zero(), q)
                } else {
                    Coeff::new(q, BigRational::zero())
                };
                Ok(Value::Scalar(c))
            }
            Some('i') if !self.rest()[1..].starts_with('(') => {
                self.pos += 1;
                Ok(Value::Scalar(imag_unit()))
            }
            Some(_) => {
                let (kind, id) = self.atom()?;
                let ctx = self.ctx;
                let term = match kind {
                    "p" => CkTerm::p(ctx, id),
                    "s" => CkTerm::s(ctx, id),
                    "s*" => CkTerm::s_star(ctx, id),
                    "t" => CkTerm::t(ctx, id),
                    "t*" => CkTerm::t_star(ctx, id),
                    _ => unreachable!(),
                };
                term.map(Value::Term).map_err(|e| match e {
                    SymbolicError::Parse { .. } => e,
                    other => SymbolicError::Parse {
                        pos: start,
                        msg: other.to_string(),
                    },
                })
            }
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn atom(&mut self) -> Result<(&'static str, &'a str), SymbolicError> {
        let kind = ["s*(", "t*(", "p(", "s(", "t("]
            .into_iter()
            .find(|k| self.rest().starts_with(k))
            .ok_or_else(|| {
                self.err("expected p(..), s(..), s*(..), t(..), t*(.. ), a number or `(`")
            })?;
        self.pos += kind.len();
        let close = self
            .rest()
            .find(')')
            .ok_or_else(|| self.err("unterminated generator"))?;
        let id = self.rest()[..close].trim();
        if id.is_empty() {
            return Err(self.err("empty identifier"));
        }
        self.pos += close + 1;
        Ok((&kind[..kind.len() - 1], id))
    }

    fn digits(&mut self) -> Result<BigInt, SymbolicError> {
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.err("expected digits"));
        }
        let n: BigInt = self.rest()[..len].parse().expect("ascii digits");
        self.pos += len;
        Ok(n)
    }

    fn number(&mut self) -> Result<BigRational, SymbolicError> {
        let numer = self.digits()?;
        let denom = if self.eat("/") {
            let d = self.digits()?;
            if d.is_zero() {
                return Err(self.err("zero denominator"));
            }
            d
        } else {
            BigInt::one()
        };
        Ok(BigRational::new(numer, denom))
    }

    fn add(&self, a: Value, b: Value) -> Result<Value, SymbolicError> {
        Ok(match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x + y),
            (Value::Term(x), Value::Term(y)) => Value::Term(&x + &y),
            (Value::Term(t), Value::Scalar(c)) | (Value::Scalar(c), Value::Term(t)) => {
                if !c.is_zero() {
                    return Err(self.err("cannot add a scalar to a generator term"));
                }
                Value::Term(t)
            }
        })
    }

    fn mul(&self, a: Value, b: Value) -> Result<Value, SymbolicError> {
        Ok(match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x * y),
            (Value::Scalar(c), Value::Term(t)) | (Value::Term(t), Value::Scalar(c)) => {
                Value::Term(t.scale(&c))
            }
            (Value::Term(x), Value::Term(y)) => Value::Term(
                x.multiply(&y, self.ctx)
                    .map_err(|e| self.err(&e.to_string()))?,
            ),
        })
    }
}

fn neg(v: Value) -> Value {
    match v {
        Value::Scalar(c) => Value::Scalar(-c),
        Value::Term(t) => Value::Term(-&t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::square;
    use crate::symbolic::coeff::real;

    #[test]
    fn parses_products_and_sums() {
        let g = square();
        let t = parse_term("s(e2) s(e1) s*(e1)", &g).unwrap();
        assert_eq!(t.to_string(), "s(e2)");
        let t = parse_term("2 s(e1) - 1/2 s(e2)", &g).unwrap();
        assert_eq!(t.to_string(), "2 s(e1) - 1/2 s(e2)");
        let t = parse_term("(1/2+3i) (s(e1) + s(e2))", &g).unwrap();
        assert_eq!(t.len(), 2);
        let t = parse_term("s*(e1) s(e1) - p(u1)", &g).unwrap();
        assert!(t.is_zero());
    }

    #[test]
    fn round_trips_display() {
        let g = square();
        let src = "-3/4 s(e2) s(e1) + (1/2-2i) p(u3)";
        let t = parse_term(src, &g).unwrap();
        assert_eq!(parse_term(&t.to_string(), &g).unwrap(), t);
        assert_eq!(t.scale(&real(2, 1)).len(), 2);
    }

    #[test]
    fn reports_errors_with_position() {
        let g = square();
        assert!(matches!(
            parse_term("s(e1) + 3", &g),
            Err(SymbolicError::Parse { .. })
        ));
        match parse_term("s(e1) q(x)", &g) {
            Err(SymbolicError::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_term("s(nope)", &g).is_err());
        assert!(parse_term("s(e1", &g).is_err());
        assert_eq!(parse_term("0", &g).unwrap(), CkTerm::zero());
    }
}
