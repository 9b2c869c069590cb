//! The expression language.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor (["*"] factor)*
//! factor := "-" factor | primary "*"*
//! primary:= rational | atom | "(" expr ")" | "adj(" expr ")"
//! atom   := "t@"k | "u^"m"@"k | "e("i","j")@"k | "P("k")@"k | "Pp("k")@"k
//! ```
//!
//! A `*` written directly after a factor, with no space before it, is the
//! postfix adjoint; a `*` with whitespace before it is multiplication, and so
//! is plain juxtaposition. So `t@0*t@0` is `t*t` and `t@0 * t@0*` is `tt*`.
//! Rationals are integers, `p/q`, or finite decimals, all exact. `@k` names
//! a global slot of the signature.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rat;
use crate::tensor::{Signature, Sym, TensorElement};
use crate::toeplitz::{ToeplitzBasis, ToeplitzElement};

const FACTOR_START: &[&str] = &["rational", "t@", "u^", "e(", "P(", "Pp(", "(", "adj(", "-"];

pub fn parse_expr(text: &str, sig: &Signature) -> Result<TensorElement> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0, sig };
    let x = p.expr()?;
    p.ws();
    if p.pos < p.chars.len() {
        return Err(p.err("unexpected trailing input", &["+", "-", "*", "end of input"]));
    }
    Ok(x)
}

/// Parses and prints the canonical form.
pub fn eval_expr(text: &str, sig: &Signature) -> Result<String> {
    parse_expr(text, sig).map(|x| x.to_expr())
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    sig: &'a Signature,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn starts_with(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(i, c)| self.chars.get(self.pos + i) == Some(&c))
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.starts_with(s) {
            self.pos += s.chars().count();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{s}`"), &[s]))
        }
    }

    /// Skips whitespace; reports whether any was skipped.
    fn ws(&mut self) -> bool {
        let start = self.pos;
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
        self.pos > start
    }

    fn err(&self, message: &str, expected: &[&str]) -> Error {
        let before = &self.chars[..self.pos.min(self.chars.len())];
        let line = 1 + before.iter().filter(|&&c| c == '\n').count();
        let column = 1 + before.iter().rev().take_while(|&&c| c != '\n').count();
        Error::Parse {
            line,
            column,
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expr(&mut self) -> Result<TensorElement> {
        let mut acc = self.term()?;
        loop {
            self.ws();
            if self.eat("+") {
                acc = acc.tadd(&self.term()?)?;
            } else if self.eat("-") {
                acc = acc.tsub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn at_factor_start(&self) -> bool {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => true,
            Some('(') => true,
            _ => ["t@", "u^", "e(", "P(", "adj("].iter().any(|s| self.starts_with(s)),
        }
    }

    fn term(&mut self) -> Result<TensorElement> {
        let mut acc = self.factor()?;
        loop {
            let save = self.pos;
            self.ws();
            if self.eat("*") || self.at_factor_start() {
                acc = acc.tmul(&self.factor()?)?;
            } else {
                self.pos = save;
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<TensorElement> {
        self.ws();
        if self.eat("-") {
            return Ok(-&self.factor()?);
        }
        let mut x = self.primary()?;
        // glued stars are adjoints
        while self.peek() == Some('*') {
            self.pos += 1;
            x = x.tadjoint();
        }
        Ok(x)
    }

    fn primary(&mut self) -> Result<TensorElement> {
        if self.eat("adj(") {
            let x = self.expr()?;
            self.ws();
            self.expect(")")?;
            return Ok(x.tadjoint());
        }
        if self.eat("(") {
            let x = self.expr()?;
            self.ws();
            self.expect(")")?;
            return Ok(x);
        }
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let r = self.rational()?;
            return Ok(TensorElement::scalar(self.sig, r));
        }
        if self.eat("t@") {
            let slot = self.slot_index()?;
            return TensorElement::t(self.sig, slot);
        }
        if self.eat("u^") {
            let m = self.signed()?;
            self.expect("@")?;
            let slot = self.slot_index()?;
            return TensorElement::u(self.sig, slot, m);
        }
        if self.eat("e(") {
            let i = self.small()?;
            self.ws();
            self.expect(",")?;
            self.ws();
            let j = self.small()?;
            self.expect(")@")?;
            let slot = self.slot_index()?;
            return TensorElement::embed(self.sig, slot, Sym::T(ToeplitzBasis::Unit(i, j)));
        }
        for (prefix, perp) in [("Pp(", true), ("P(", false)] {
            if self.eat(prefix) {
                let k = self.small()?;
                self.expect(")@")?;
                let slot = self.slot_index()?;
                let x = if perp { ToeplitzElement::proj_pperp(k) } else { ToeplitzElement::proj_p(k) };
                return TensorElement::embed_toeplitz(self.sig, slot, &x);
            }
        }
        Err(self.err("expected a factor", FACTOR_START))
    }

    fn digits(&mut self) -> Result<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected digits", &["digit"]));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn big(&mut self) -> Result<BigInt> {
        let d = self.digits()?;
        Ok(d.parse().expect("ascii digits"))
    }

    fn number<T: std::str::FromStr>(&mut self) -> Result<T> {
        let at = self.pos;
        let d = self.digits()?;
        d.parse().map_err(|_| {
            self.pos = at;
            self.err("integer too large", &["smaller integer"])
        })
    }

    fn small(&mut self) -> Result<u32> {
        self.number()
    }

    fn slot_index(&mut self) -> Result<usize> {
        self.number()
    }

    fn signed(&mut self) -> Result<i64> {
        let neg = self.eat("-");
        let m: i64 = self.number()?;
        Ok(if neg { -m } else { m })
    }

    fn rational(&mut self) -> Result<Rat> {
        let whole = self.big()?;
        if self.eat("/") {
            let den = self.big()?;
            if den.is_zero() {
                return Err(self.err("zero denominator", &["nonzero integer"]));
            }
            return Ok(Rat::new(whole, den));
        }
        if self.peek() == Some('.') && self.chars.get(self.pos + 1).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
            let frac = self.digits()?;
            let scale = num_traits::pow(BigInt::from(10), frac.len());
            let f: BigInt = frac.parse().expect("ascii digits");
            return Ok(Rat::new(whole * &scale + f, scale));
        }
        Ok(Rat::new(whole, BigInt::one()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};
    use crate::sampling::{random_tensor, rng, Bounds};

    fn sig(s: &str) -> Signature {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        let t1 = sig("T");
        let x = parse_expr("t@0 * t@0* ", &t1).unwrap();
        let expected = &TensorElement::one(&t1) - &TensorElement::unit(&t1, 0, 0, 0).unwrap();
        assert_eq!(x, expected);
        assert!(parse_expr("(1 - t@0*t@0)", &t1).unwrap().is_zero());
        let tc = sig("T,C");
        let y = parse_expr("e(0,0)@0 * u^2@1", &tc).unwrap();
        let tuple = vec![Sym::T(ToeplitzBasis::Unit(0, 0)), Sym::C(2)];
        assert_eq!(y, TensorElement::from_terms(&tc, [(tuple, rat(1))]));
    }

    #[test]
    fn rationals_and_projections() {
        let t1 = sig("T");
        let x = parse_expr("1/2 P(2)@0 + 0.25 * Pp(2)@0", &t1).unwrap();
        let p = TensorElement::embed_toeplitz(&t1, 0, &ToeplitzElement::proj_p(2)).unwrap();
        let q = TensorElement::embed_toeplitz(&t1, 0, &ToeplitzElement::proj_pperp(2)).unwrap();
        assert_eq!(x, &p.scale(&ratio(1, 2)) + &q.scale(&ratio(1, 4)));
        assert_eq!(parse_expr("adj(t@0 - 2)", &t1).unwrap(), parse_expr("t@0* - 2", &t1).unwrap());
        assert_eq!(parse_expr("-t@0**", &t1).unwrap(), parse_expr("0 - t@0", &t1).unwrap());
    }

    #[test]
    fn sphere_relation() {
        let s = sig("S2");
        assert!(parse_expr("(1 - t@0 t@0*)(1 - t@1 * t@1*)", &s).unwrap().is_zero());
    }

    #[test]
    fn errors() {
        let t1 = sig("T");
        match parse_expr("t@0 +\n  ) ", &t1) {
            Err(Error::Parse { line, column, expected, .. }) => {
                assert_eq!((line, column), (2, 3));
                assert!(expected.contains(&"t@".to_string()));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expr("u^1@0", &t1), Err(Error::IncompatibleSlot { .. })));
        assert!(matches!(parse_expr("t@3", &t1), Err(Error::SlotOutOfRange { .. })));
        assert!(matches!(parse_expr("1/0", &t1), Err(Error::Parse { .. })));
        assert!(matches!(parse_expr("t@0 )", &t1), Err(Error::Parse { .. })));
    }

    #[test]
    fn print_parse_round_trip() {
        let mut r = rng(4);
        for s in ["T", "T,C", "S2", "T,S2,C"] {
            let sg = sig(s);
            for _ in 0..50 {
                let x = random_tensor(&mut r, &sg, Bounds::default()).scale(&ratio(3, 2));
                assert_eq!(parse_expr(&x.to_expr(), &sg).unwrap(), x, "{}", x.to_expr());
            }
        }
    }
}
