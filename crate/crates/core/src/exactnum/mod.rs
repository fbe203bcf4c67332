//! Exact rationals and cyclotomic numbers.

mod cyclotomic;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub(crate) use cyclotomic::lcm;
pub use cyclotomic::{Accumulator, Cyclotomic, IntegralCyclotomic, IntegralSum};

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("conductor must be positive, got {0}")]
    BadConductor(i64),
    #[error("value is irrational: {0}")]
    Irrational(String),
}

fn perr(offset: usize, message: impl Into<String>) -> ExactError {
    ExactError::Parse {
        offset,
        message: message.into(),
    }
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `p/q`, or just `p` for integers.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let mut p = Parser::new(s);
    p.skip_ws();
    let neg = p.eat(b'-');
    if !neg {
        p.eat(b'+');
    }
    let q = p.rational()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(perr(p.pos, "trailing input"));
    }
    Ok(if neg { -q } else { q })
}

/// Parses `expr := term (('+'|'-') term)*` with
/// `term := rational | rational? '*'? 'E(' int ')' ('^' int)?`.
pub fn parse_cyclotomic(s: &str) -> Result<Cyclotomic, ExactError> {
    let mut p = Parser::new(s);
    let mut acc = Accumulator::new();
    let mut first = true;
    loop {
        p.skip_ws();
        if p.pos == p.src.len() {
            if first {
                return Err(perr(p.pos, "empty expression"));
            }
            return Err(perr(p.pos, "expected term after sign"));
        }
        let mut sign = Rational::one();
        match p.peek() {
            Some(b'-') => {
                p.pos += 1;
                sign = -sign;
            }
            Some(b'+') => {
                p.pos += 1;
            }
            _ if !first => return Err(perr(p.pos, "expected '+' or '-'")),
            _ => {}
        }
        p.skip_ws();
        let term = p.term()?;
        acc.add_scaled(&term, &sign);
        first = false;
        p.skip_ws();
        if p.pos == p.src.len() {
            return Ok(acc.finish());
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser {
            src: s.as_bytes(),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Result<BigInt, ExactError> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(perr(start, "expected digits"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("digits parse"))
    }

    fn signed_int(&mut self) -> Result<i64, ExactError> {
        self.skip_ws();
        let start = self.pos;
        let neg = self.eat(b'-');
        let v = self.digits()?;
        let v: i64 = i64::try_from(&v).map_err(|_| perr(start, "integer out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn rational(&mut self) -> Result<Rational, ExactError> {
        let n = self.digits()?;
        let save = self.pos;
        if self.eat(b'/') {
            let at = self.pos;
            let d = self.digits()?;
            if d.is_zero() {
                return Err(perr(at, "zero denominator"));
            }
            return Ok(Rational::new(n, d));
        }
        self.pos = save;
        Ok(Rational::from_integer(n))
    }

    fn root(&mut self) -> Result<Cyclotomic, ExactError> {
        self.skip_ws();
        let start = self.pos;
        if !(self.eat(b'E') && self.eat(b'(')) {
            return Err(perr(start, "expected 'E('"));
        }
        self.skip_ws();
        let at = self.pos;
        let n = self.signed_int()?;
        if n <= 0 {
            return Err(ExactError::BadConductor(n));
        }
        let n = u32::try_from(n).map_err(|_| perr(at, "conductor out of range"))?;
        if !self.eat(b')') {
            return Err(perr(self.pos, "expected ')'"));
        }
        let save = self.pos;
        let k = if self.eat(b'^') {
            self.signed_int()?
        } else {
            self.pos = save;
            1
        };
        Cyclotomic::root_of_unity(n, k)
    }

    fn term(&mut self) -> Result<Cyclotomic, ExactError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let q = self.rational()?;
                self.skip_ws();
                let star = self.eat(b'*');
                self.skip_ws();
                if self.peek() == Some(b'E') {
                    Ok(self.root()?.scale(&q))
                } else if star {
                    Err(perr(self.pos, "expected 'E(' after '*'"))
                } else {
                    Ok(Cyclotomic::from_rational(q))
                }
            }
            Some(b'E') => self.root(),
            Some(_) => Err(perr(self.pos, "expected number or 'E('")),
            None => Err(perr(self.pos, "unexpected end of input")),
        }
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let n = self.conductor();
        for (i, (k, c)) in self.terms().iter().enumerate() {
            let piece = if *k == 0 {
                format_rational(c)
            } else {
                let root = if *k == 1 {
                    format!("E({n})")
                } else {
                    format!("E({n})^{k}")
                };
                if c.is_one() {
                    root
                } else if (-c).is_one() {
                    format!("-{root}")
                } else {
                    format!("{}*{root}", format_rational(c))
                }
            };
            if i > 0 && !piece.starts_with('-') {
                f.write_str("+")?;
            }
            f.write_str(&piece)?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Cyclotomic {
    type Err = ExactError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_cyclotomic(s)
    }
}

/// Sign of a rational as -1, 0 or 1.
pub fn signum(q: &Rational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_negative() {
        -1
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prints_canonical_forms() {
        let b7 = parse_cyclotomic("E(7)+E(7)^2+E(7)^4").unwrap();
        assert_eq!(b7.to_string(), "E(7)+E(7)^2+E(7)^4");
        assert_eq!(b7.conjugate().to_string(), "E(7)^3+E(7)^5+E(7)^6");
        assert_eq!(parse_cyclotomic("-1-E(7)^3-E(7)^5-E(7)^6").unwrap(), b7);
        assert_eq!(
            parse_cyclotomic("3/2 * E(7)^2").unwrap().to_string(),
            "3/2*E(7)^2"
        );
        assert_eq!(parse_cyclotomic("-2E(4)").unwrap().to_string(), "-2*E(4)");
        assert_eq!(parse_cyclotomic("E(3)-E(3)").unwrap().to_string(), "0");
        assert_eq!(parse_cyclotomic("  7 / 21 ").unwrap().to_string(), "1/3");
        assert_eq!(parse_cyclotomic("E(9)^3").unwrap().to_string(), "E(3)");
        assert_eq!(parse_cyclotomic("E(7)^-1").unwrap().to_string(), "E(7)^6");
    }

    #[test]
    fn rejects_bad_input_with_offset() {
        assert_eq!(parse_cyclotomic("E(0)"), Err(ExactError::BadConductor(0)));
        assert_eq!(parse_cyclotomic("E(-3)"), Err(ExactError::BadConductor(-3)));
        for (s, off) in [
            ("1+", 2),
            ("E(7", 3),
            ("1/0", 2),
            ("2*", 2),
            ("1 2", 2),
            ("x", 0),
        ] {
            match parse_cyclotomic(s) {
                Err(ExactError::Parse { offset, .. }) => assert_eq!(offset, off, "{s}"),
                other => panic!("{s}: {other:?}"),
            }
        }
    }

    #[test]
    fn rational_formatting() {
        assert_eq!(format_rational(&rational(137, 21)), "137/21");
        assert_eq!(format_rational(&rational(4, 2)), "2");
        assert_eq!(parse_rational("-5/56").unwrap(), rational(-5, 56));
    }

    fn conductors() -> impl Strategy<Value = u32> {
        prop::sample::select(vec![1u32, 3, 4, 5, 7, 8, 9, 12, 15, 20, 21, 24, 28])
    }

    prop_compose! {
        fn cyclotomic()(n in conductors(),
                        raw in prop::collection::vec((0i64..84, -6i64..7, 1i64..4), 0..6))
                        -> Cyclotomic {
            Cyclotomic::from_exponents(n, raw.into_iter().map(|(k, a, b)| (k, rational(a, b)))).unwrap()
        }
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(x in cyclotomic()) {
            prop_assert_eq!(parse_cyclotomic(&x.to_string()).unwrap(), x);
        }

        #[test]
        fn field_axioms(a in cyclotomic(), b in cyclotomic(), c in cyclotomic()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn conjugation_is_an_involutive_automorphism(a in cyclotomic(), b in cyclotomic()) {
            prop_assert_eq!(a.conjugate().conjugate(), a.clone());
            prop_assert_eq!((&a * &b).conjugate(), &a.conjugate() * &b.conjugate());
            prop_assert_eq!((&a + &b).conjugate(), &a.conjugate() + &b.conjugate());
            // the norm-like product a * conj(a) is fixed by conjugation
            let n = &a * &a.conjugate();
            prop_assert_eq!(n.conjugate(), n);
        }

        #[test]
        fn galois_action_is_a_homomorphism(a in cyclotomic(), b in cyclotomic(), m in prop::sample::select(vec![1i64, 11, 13, 17, 19, 23, 29, 31, 37, 41])) {
            // m is coprime to every conductor used above
            prop_assert_eq!((&a * &b).galois(m), &a.galois(m) * &b.galois(m));
            prop_assert_eq!((&a + &b).galois(m), &a.galois(m) + &b.galois(m));
        }

        #[test]
        fn conductor_is_minimal(a in cyclotomic()) {
            use num_integer::Integer;
            let n = a.conductor();
            prop_assert!(n % 4 != 2);
            // a value of Q(E(d)) is fixed by every unit m = 1 mod d
            for d in (1..n).filter(|d| n % d == 0) {
                let fixed = (1..n as i64)
                    .filter(|m| m.gcd(&(n as i64)) == 1 && m.rem_euclid(d as i64) == 1 % d as i64)
                    .all(|m| a.galois(m) == a);
                prop_assert!(!fixed, "{} fixed by Gal(Q(E({}))/Q(E({})))", a, n, d);
            }
        }
    }
}
