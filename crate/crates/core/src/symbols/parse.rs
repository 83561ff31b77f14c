//! Text syntax for entries and symbol products.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{symbol, FieldElem, Result, SymbolError, SymbolProduct};

pub(crate) fn rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::from(1)),
    };
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

struct Cursor<'a> {
    s: &'a [u8],
    i: usize,
    src: &'a str,
    p: Option<u64>,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, p: Option<u64>) -> Self {
        Cursor {
            s: src.as_bytes(),
            i: 0,
            src,
            p,
        }
    }

    fn err(&self) -> SymbolError {
        SymbolError::Parse(format!("{} (at byte {})", self.src, self.i))
    }

    fn skip_ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.i).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err())
        }
    }

    fn take_while(&mut self, f: impl Fn(u8) -> bool) -> &'a str {
        let start = self.i;
        while self.i < self.s.len() && f(self.s[self.i]) {
            self.i += 1;
        }
        &self.src[start..self.i]
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let neg = self.eat(b'-');
        let digits = self.take_while(|c| c.is_ascii_digit());
        let v: i64 = digits.parse().map_err(|_| self.err())?;
        Ok(if neg { -v } else { v })
    }

    fn exponent(&mut self) -> Result<i64> {
        if self.eat(b'^') {
            if self.eat(b'(') {
                let k = self.integer()?;
                self.expect(b')')?;
                Ok(k)
            } else {
                self.integer()
            }
        } else {
            Ok(1)
        }
    }

    fn atom(&mut self) -> Result<FieldElem> {
        match self.peek().ok_or_else(|| self.err())? {
            b'(' => {
                self.i += 1;
                let e = self.elem()?;
                self.expect(b')')?;
                Ok(e)
            }
            b'-' => {
                self.i += 1;
                let rest = self.atom()?;
                Ok(FieldElem::int(-1).mul(&rest))
            }
            c if c.is_ascii_digit() => {
                let text = self.take_while(|c| c.is_ascii_digit() || c == b'/');
                let q = rational(text).ok_or_else(|| self.err())?;
                if q.is_zero() {
                    return Err(SymbolError::ZeroEntry);
                }
                Ok(FieldElem::Rational(q))
            }
            c if c.is_ascii_alphabetic() => {
                let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == b'_');
                if let Some(order) = name.strip_prefix("zeta") {
                    let order = order.trim_start_matches('_');
                    if order.is_empty() {
                        let p = self.p.ok_or_else(|| self.err())?;
                        return Ok(FieldElem::zeta(p, 1));
                    }
                    if let Ok(n) = order.parse() {
                        return Ok(FieldElem::zeta(n, 1));
                    }
                }
                Ok(FieldElem::ind(name))
            }
            _ => Err(self.err()),
        }
    }

    fn elem(&mut self) -> Result<FieldElem> {
        let mut parts = Vec::new();
        loop {
            let a = self.atom()?;
            let k = self.exponent()?;
            parts.push((a, k));
            if !self.eat(b'*') {
                break;
            }
        }
        Ok(FieldElem::product(parts))
    }
}

pub(crate) fn field_elem(s: &str, p: Option<u64>) -> Result<FieldElem> {
    let mut c = Cursor::new(s, p);
    let e = c.elem()?;
    if c.peek().is_some() {
        return Err(c.err());
    }
    Ok(e)
}

pub(crate) fn symbol_product(p: u64, s: &str) -> Result<SymbolProduct> {
    let mut c = Cursor::new(s, Some(p));
    let mut out = SymbolProduct::trivial(p);
    while let Some(ch) = c.peek() {
        let item = match ch {
            b'(' => {
                c.i += 1;
                let a = c.elem()?;
                c.expect(b',')?;
                let b = c.elem()?;
                if c.eat(b';') {
                    let z = c.elem()?;
                    if z != FieldElem::zeta(p, 1) && !(p == 2 && z == FieldElem::int(-1)) {
                        return Err(SymbolError::Parse(format!(
                            "{s}: only the fixed root zeta is supported after ';'"
                        )));
                    }
                }
                c.expect(b')')?;
                symbol(a, b, p)?
            }
            b'[' => {
                let name = c.take_while(|ch| ch != b']');
                let name = format!("{name}]");
                c.expect(b']')?;
                SymbolProduct::opaque(&name, p)
            }
            b'1' => {
                c.i += 1;
                SymbolProduct::trivial(p)
            }
            b'*' => {
                c.i += 1;
                continue;
            }
            _ => return Err(c.err()),
        };
        let k = c.exponent()?;
        out = out.mul(&item.pow(k))?;
    }
    Ok(out)
}
