//! Formal polynomials in graph C*-algebra generators.
//!
//! Words are reduced with rules that hold in every graph algebra whose edges
//! are named `(source, range)`: vertex projections are orthogonal idempotents,
//! `S_e = P_{s(e)} S_e = S_e P_{r(e)}`, and `S_e* S_f = δ_{ef} P_{r(e)}`.
//! The reduction is sound but not a complete normal form for the algebra (the
//! Cuntz–Krieger sum relation is not imposed), so formal equality implies
//! equality while formal inequality is inconclusive.
//!
//! An optional circle factor `C(S¹)` is carried as an exponent of `u` per word.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{fmt_rat, is_negative, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    P(usize),
    S(usize, usize),
    /// `S_e*`.
    Sa(usize, usize),
}

impl Letter {
    pub fn adjoint(self) -> Letter {
        match self {
            Letter::P(v) => Letter::P(v),
            Letter::S(i, j) => Letter::Sa(i, j),
            Letter::Sa(i, j) => Letter::S(i, j),
        }
    }

    pub fn degree(self) -> i64 {
        match self {
            Letter::P(_) => 0,
            Letter::S(..) => 1,
            Letter::Sa(..) => -1,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::P(v) => write!(f, "P{v}"),
            Letter::S(i, j) => write!(f, "S{i}{j}"),
            Letter::Sa(i, j) => write!(f, "S{i}{j}*"),
        }
    }
}

enum Combine {
    Zero,
    Keep,
    Replace(Letter),
}

fn combine(a: Letter, b: Letter) -> Combine {
    use Letter::*;
    let keep_if = |c: bool| if c { Combine::Keep } else { Combine::Zero };
    let replace_if = |c: bool, l: Letter| if c { Combine::Replace(l) } else { Combine::Zero };
    match (a, b) {
        (P(v), P(w)) => replace_if(v == w, P(v)),
        (P(v), S(i, j)) => replace_if(v == i, S(i, j)),
        (S(i, j), P(v)) => replace_if(v == j, S(i, j)),
        (P(v), Sa(i, j)) => replace_if(v == j, Sa(i, j)),
        (Sa(i, j), P(v)) => replace_if(v == i, Sa(i, j)),
        (Sa(i, j), S(k, l)) => replace_if((i, j) == (k, l), P(j)),
        (S(_, j), S(k, _)) => keep_if(j == k),
        // (S_kl S_ij)* is nonzero only if l = i
        (Sa(i, _), Sa(_, l)) => keep_if(l == i),
        (S(_, j), Sa(_, l)) => keep_if(j == l),
    }
}

/// Reduces a word; `None` means the word is zero.
fn reduce(word: &[Letter]) -> Option<Vec<Letter>> {
    let mut stack: Vec<Letter> = Vec::with_capacity(word.len());
    for &l in word {
        let mut cur = l;
        loop {
            let Some(&top) = stack.last() else {
                stack.push(cur);
                break;
            };
            match combine(top, cur) {
                Combine::Zero => return None,
                Combine::Keep => {
                    stack.push(cur);
                    break;
                }
                Combine::Replace(r) => {
                    stack.pop();
                    cur = r;
                }
            }
        }
    }
    Some(stack)
}

type Word = (Vec<Letter>, i64);

/// Finite rational combination of reduced words times powers of `u`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalPoly {
    terms: BTreeMap<Word, Rat>,
}

impl FormalPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::word(&[], 0)
    }

    pub fn letter(l: Letter) -> Self {
        Self::word(&[l], 0)
    }

    pub fn circle(m: i64) -> Self {
        Self::word(&[], m)
    }

    pub fn word(w: &[Letter], circle: i64) -> Self {
        let mut out = Self::zero();
        out.add_word(w, circle, Rat::one());
        out
    }

    fn add_word(&mut self, w: &[Letter], circle: i64, c: Rat) {
        if c.is_zero() {
            return;
        }
        let Some(w) = reduce(w) else { return };
        let key = (w, circle);
        let slot = self.terms.entry(key.clone()).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rat)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((w, m), c) in &other.terms {
            out.add_word(w, *m, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = Self::zero();
        for ((w, m), x) in &self.terms {
            out.add_word(w, *m, x * c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((a, ma), ca) in &self.terms {
            for ((b, mb), cb) in &other.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                out.add_word(&w, ma + mb, ca * cb);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for ((w, m), c) in &self.terms {
            let rev: Vec<Letter> = w.iter().rev().map(|l| l.adjoint()).collect();
            out.add_word(&rev, -m, c.clone());
        }
        out
    }

    /// Moves the total letter degree of each word onto the circle exponent,
    /// the graph analogue of the gauging automorphism.
    pub fn gauge_move(&self) -> Self {
        let mut out = Self::zero();
        for ((w, m), c) in &self.terms {
            let d: i64 = w.iter().map(|l| l.degree()).sum();
            out.add_word(w, m + d, c.clone());
        }
        out
    }

    pub fn has_circle_terms(&self) -> bool {
        self.terms.keys().any(|(_, m)| *m != 0)
    }
}

impl fmt::Display for FormalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, ((w, m), c)) in self.terms.iter().enumerate() {
            let neg = is_negative(c);
            let mag = if neg { -c.clone() } else { c.clone() };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() {
                factors.push(fmt_rat(&mag));
            }
            factors.extend(w.iter().map(|l| l.to_string()));
            if *m != 0 {
                factors.push(format!("u^{m}"));
            }
            if factors.is_empty() {
                factors.push("1".into());
            }
            write!(f, "{}", factors.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Letter::*;

    #[test]
    fn reduction_rules() {
        let s = FormalPoly::letter(S(0, 1));
        assert_eq!(s.adjoint().mul(&s), FormalPoly::letter(P(1)));
        assert_eq!(FormalPoly::letter(P(0)).mul(&s), s);
        assert!(FormalPoly::letter(P(1)).mul(&s).is_zero());
        assert!(s.mul(&FormalPoly::letter(S(0, 0))).is_zero());
        assert!(FormalPoly::letter(Sa(0, 0)).mul(&s).is_zero());
        let ss = s.mul(&s.adjoint());
        assert_eq!(ss.mul(&ss), ss);
    }

    #[test]
    fn adjoint_and_circle() {
        let x = FormalPoly::letter(S(0, 0)).mul(&FormalPoly::circle(2));
        assert_eq!(x.adjoint(), FormalPoly::word(&[Sa(0, 0)], -2));
        assert_eq!(FormalPoly::letter(S(1, 2)).gauge_move(), FormalPoly::word(&[S(1, 2)], 1));
        assert_eq!(x.to_string(), "S00 u^2");
    }
}
