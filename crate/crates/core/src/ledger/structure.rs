//! Orders of group structure strings such as `(H x L3(2) x L3(2)):2` or `2^(1+20)_+:L6(2)`.
//!
//! Direct products, semidirect products (`:`) and extensions (`.`) all multiply orders,
//! so the order is the product of the atoms once the string is known to be well formed.

use super::LedgerError;

/// Named groups and their orders.
pub const NAMED_ORDERS: &[(&str, u128)] = &[
    ("E6(2)", 214841575522005575270400),
    ("F4(2)", 3311126603366400),
    ("O10+(2)", 23499295948800),
    ("O8-(2)", 197406720),
    ("3D4(2)", 211341312),
    ("L6(2)", 20158709760),
    ("S6(2)", 1451520),
    ("G2(2)", 12096),
    ("L3(4)", 20160),
    ("L2(8)", 504),
    ("L3(2)", 168),
    ("L2(7)", 168),
    ("L2(2)", 6),
    ("A5", 60),
    ("A4", 12),
    ("S4", 24),
    ("S3", 6),
    ("D8", 8),
    ("Q8", 8),
];

/// `|L_n(q)| = q^(n(n-1)/2) prod_{i=2..n} (q^i - 1) / gcd(n, q-1)`.
pub fn linear_group_order(n: u32, q: u128) -> u128 {
    let mut order = q.pow(n * (n - 1) / 2);
    for i in 2..=n {
        order *= q.pow(i) - 1;
    }
    order / num_integer::gcd(n as u128, q - 1)
}

struct Parser<'a> {
    s: &'a str,
    pos: usize,
    h: Option<u128>,
}

impl Parser<'_> {
    fn err(&self, message: impl Into<String>) -> LedgerError {
        LedgerError::Structure {
            text: self.s.to_string(),
            message: format!("{} at offset {}", message.into(), self.pos),
        }
    }

    fn rest(&self) -> &str {
        &self.s[self.pos..]
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(char::is_whitespace) {
            self.pos += self.rest().chars().next().map_or(0, char::len_utf8);
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Option<u128> {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(self.rest().len());
        if len == 0 {
            return None;
        }
        let v = self.rest()[..len].parse().ok()?;
        self.pos += len;
        Some(v)
    }

    fn expr(&mut self) -> Result<u128, LedgerError> {
        let mut order = self.term()?;
        loop {
            self.skip_ws();
            match self.rest().chars().next() {
                Some('x' | ':' | '.') => {
                    self.pos += 1;
                    let t = self.term()?;
                    order = order
                        .checked_mul(t)
                        .ok_or_else(|| self.err("order overflows"))?;
                }
                _ => return Ok(order),
            }
        }
    }

    fn term(&mut self) -> Result<u128, LedgerError> {
        for (open, close) in [('(', ')'), ('[', ']')] {
            if self.eat(open) {
                let v = self.expr()?;
                if !self.eat(close) {
                    return Err(self.err(format!("expected '{close}'")));
                }
                return Ok(v);
            }
        }
        self.skip_ws();
        if let Some(&(name, order)) = NAMED_ORDERS
            .iter()
            .find(|(n, _)| self.rest().starts_with(n))
        {
            self.pos += name.len();
            return Ok(order);
        }
        if self.rest().starts_with('H') {
            self.pos += 1;
            return self
                .h
                .ok_or_else(|| self.err("H used without a subgroup order"));
        }
        let base = self.number().ok_or_else(|| self.err("expected a group"))?;
        if !self.eat('^') {
            return Ok(base);
        }
        let exp = if self.eat('(') {
            let mut e = 0u32;
            loop {
                let v = self
                    .number()
                    .ok_or_else(|| self.err("expected an exponent"))?;
                e += u32::try_from(v).map_err(|_| self.err("exponent too large"))?;
                if self.eat(')') {
                    break e;
                }
                if !self.eat('+') {
                    return Err(self.err("expected '+' or ')'"));
                }
            }
        } else {
            let v = self
                .number()
                .ok_or_else(|| self.err("expected an exponent"))?;
            u32::try_from(v).map_err(|_| self.err("exponent too large"))?
        };
        // extraspecial sign, as in 2^(1+20)_+
        if self.rest().starts_with("_+") || self.rest().starts_with("_-") {
            self.pos += 2;
        }
        base.checked_pow(exp)
            .ok_or_else(|| self.err("order overflows"))
    }
}

/// Order of a structure string; `H` stands for a subgroup of order `h`.
pub fn structure_order(s: &str, h: Option<u128>) -> Result<u128, LedgerError> {
    let mut p = Parser { s, pos: 0, h };
    let v = p.expr()?;
    p.skip_ws();
    if !p.rest().is_empty() {
        return Err(p.err("unexpected trailing text"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(structure_order("(L3(2) x D8):2", None).unwrap(), 2688);
        assert_eq!(
            structure_order("(H x L3(2) x L3(2)):2", Some(168)).unwrap(),
            9483264
        );
        assert_eq!(
            structure_order("H x (2^2 x 2^2):S3", Some(1344)).unwrap(),
            129024
        );
        assert_eq!(structure_order("2^3.L3(2)", None).unwrap(), 1344);
        assert_eq!(structure_order("3D4(2):3", None).unwrap(), 634023936);
        assert_eq!(
            structure_order("2^(1+20)_+:L6(2)", None).unwrap(),
            (1u128 << 21) * 20158709760
        );
        assert_eq!(
            structure_order("[2^24]:S6(2)", None).unwrap(),
            (1u128 << 24) * 1451520
        );
    }

    #[test]
    fn malformed() {
        assert!(structure_order("(L3(2) x D8:2", None).is_err());
        assert!(structure_order("L3(2) x", None).is_err());
        assert!(structure_order("H x 2", None).is_err());
        assert!(structure_order("Foo", None).is_err());
    }

    #[test]
    fn named_linear_groups() {
        for (name, n, q) in [
            ("L3(2)", 3, 2),
            ("L2(8)", 2, 8),
            ("L6(2)", 6, 2),
            ("L3(4)", 3, 4),
            ("L2(2)", 2, 2),
        ] {
            let order = NAMED_ORDERS.iter().find(|(m, _)| *m == name).unwrap().1;
            assert_eq!(order, linear_group_order(n, q), "{name}");
        }
    }
}
