//! The dense *-subalgebra of the Toeplitz algebra.
//!
//! Every word in the shift `t` and its adjoint reduces to a finite combination
//! of two kinds of basis symbols: pure shift powers (`Shift(m)` is `t^m` for
//! `m ≥ 0` and `(t*)^{-m}` for `m < 0`) and matrix units `Unit(i, j) = e_ij`.
//! Matrix units are 0-based: `e_00` projects onto the first basis vector of
//! `ℓ²(ℕ)`, and `e_ij = t^i (1 − t t*) (t*)^j`.
//!
//! Reduction is eager: products are always returned in the canonical sparse
//! form, so equality of elements is equality of coefficient maps.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{fmt_rat, Rat};

/// Canonical basis symbol of the polynomial Toeplitz algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ToeplitzBasis {
    Shift(i64),
    Unit(u32, u32),
}

impl ToeplitzBasis {
    pub const ONE: ToeplitzBasis = ToeplitzBasis::Shift(0);

    /// Degree for the U(1)-grading in which `t` has degree one.
    pub fn degree(&self) -> i64 {
        match *self {
            ToeplitzBasis::Shift(m) => m,
            ToeplitzBasis::Unit(i, j) => i as i64 - j as i64,
        }
    }

    pub fn adjoint(&self) -> Self {
        match *self {
            ToeplitzBasis::Shift(m) => ToeplitzBasis::Shift(-m),
            ToeplitzBasis::Unit(i, j) => ToeplitzBasis::Unit(j, i),
        }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, ToeplitzBasis::Unit(..))
    }
}

impl fmt::Display for ToeplitzBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ToeplitzBasis::Shift(0) => write!(f, "1"),
            ToeplitzBasis::Shift(1) => write!(f, "t"),
            ToeplitzBasis::Shift(-1) => write!(f, "t*"),
            ToeplitzBasis::Shift(m) if m > 0 => write!(f, "t^{m}"),
            ToeplitzBasis::Shift(m) => write!(f, "t*^{}", -m),
            ToeplitzBasis::Unit(i, j) => write!(f, "e({i},{j})"),
        }
    }
}

/// Reduction rule used when multiplying basis symbols.
///
/// Only [`Reduction::Exact`] is correct. The other variant exists so the
/// fault catalog can demonstrate that the numeric backend notices a broken
/// rewrite rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Reduction {
    #[default]
    Exact,
    /// Forget the finite-rank correction in `t^a (t*)^b`.
    DropTelescoping,
}

/// Product of two basis symbols as a short list of `(symbol, ±1)` terms.
pub fn basis_mul(a: ToeplitzBasis, b: ToeplitzBasis) -> Vec<(ToeplitzBasis, i64)> {
    basis_mul_with(a, b, Reduction::Exact)
}

pub fn basis_mul_with(a: ToeplitzBasis, b: ToeplitzBasis, rule: Reduction) -> Vec<(ToeplitzBasis, i64)> {
    use ToeplitzBasis::{Shift, Unit};
    match (a, b) {
        (Shift(p), Shift(q)) => {
            if p > 0 && q < 0 {
                // t^p (t*)^r = Shift(p − r) − Σ_{s=1}^{min(p,r)} e_{p−s, r−s}
                let r = -q;
                let mut out = vec![(Shift(p - r), 1)];
                if rule == Reduction::Exact {
                    for s in 1..=p.min(r) {
                        out.push((Unit((p - s) as u32, (r - s) as u32), -1));
                    }
                }
                out
            } else {
                // same sign, or (t*)^p t^q which telescopes exactly since t*t = 1
                vec![(Shift(p + q), 1)]
            }
        }
        (Shift(m), Unit(i, j)) => {
            if m >= 0 {
                vec![(Unit(i + m as u32, j), 1)]
            } else if i as i64 >= -m {
                vec![(Unit((i as i64 + m) as u32, j), 1)]
            } else {
                Vec::new()
            }
        }
        (Unit(i, j), Shift(m)) => {
            if m <= 0 {
                vec![(Unit(i, j + (-m) as u32), 1)]
            } else if j as i64 >= m {
                vec![(Unit(i, (j as i64 - m) as u32), 1)]
            } else {
                Vec::new()
            }
        }
        (Unit(i, j), Unit(k, l)) => {
            if j == k {
                vec![(Unit(i, l), 1)]
            } else {
                Vec::new()
            }
        }
    }
}

/// Finite exact-rational combination of [`ToeplitzBasis`] symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ToeplitzElement {
    terms: BTreeMap<ToeplitzBasis, Rat>,
}

impl ToeplitzElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::basis(ToeplitzBasis::ONE)
    }

    pub fn basis(b: ToeplitzBasis) -> Self {
        Self::from_terms([(b, Rat::one())])
    }

    pub fn shift(m: i64) -> Self {
        Self::basis(ToeplitzBasis::Shift(m))
    }

    pub fn unit(i: u32, j: u32) -> Self {
        Self::basis(ToeplitzBasis::Unit(i, j))
    }

    pub fn from_terms<I: IntoIterator<Item = (ToeplitzBasis, Rat)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (b, c) in terms {
            out.add_term(b, c);
        }
        out
    }

    fn add_term(&mut self, b: ToeplitzBasis, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(b).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ToeplitzBasis, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, b: &ToeplitzBasis) -> Rat {
        self.terms.get(b).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::from_terms(self.terms.iter().map(|(b, x)| (*b, x * c)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_with(other, Reduction::Exact)
    }

    pub fn mul_with(&self, other: &Self, rule: Reduction) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let c = ca * cb;
                for (sym, sign) in basis_mul_with(*a, *b, rule) {
                    out.add_term(sym, if sign > 0 { c.clone() } else { -c.clone() });
                }
            }
        }
        out
    }

    /// Coefficients are real, so the adjoint just reflects every symbol.
    pub fn adjoint(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(b, c)| (b.adjoint(), c.clone())))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// `P_k = Σ_{i<k} e_ii`, the projection onto the first `k` basis vectors.
    pub fn proj_p(k: u32) -> Self {
        Self::from_terms((0..k).map(|i| (ToeplitzBasis::Unit(i, i), Rat::one())))
    }

    /// `P⊥_k = 1 − P_k`.
    pub fn proj_pperp(k: u32) -> Self {
        &Self::one() - &Self::proj_p(k)
    }

    /// Image under the symbol map onto `C(S¹)`: shifts go to powers of `u`,
    /// matrix units vanish.
    pub fn symbol(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms.iter().filter_map(|(b, c)| match b {
            ToeplitzBasis::Shift(m) => Some((*m, c.clone())),
            ToeplitzBasis::Unit(..) => None,
        }))
    }

    pub fn shift_part(&self) -> Self {
        Self::from_terms(self.terms.iter().filter(|(b, _)| !b.is_unit()).map(|(b, c)| (*b, c.clone())))
    }

    pub fn finite_part(&self) -> Self {
        Self::from_terms(self.terms.iter().filter(|(b, _)| b.is_unit()).map(|(b, c)| (*b, c.clone())))
    }

    /// Compact elements of the polynomial algebra are exactly those with no
    /// shift part.
    pub fn is_compact(&self) -> bool {
        self.terms.keys().all(|b| b.is_unit())
    }

    /// Homogeneous components keyed by degree.
    pub fn degree_split(&self) -> BTreeMap<i64, ToeplitzElement> {
        let mut out: BTreeMap<i64, ToeplitzElement> = BTreeMap::new();
        for (b, c) in &self.terms {
            out.entry(b.degree()).or_default().add_term(*b, c.clone());
        }
        out
    }

    pub fn is_projection(&self) -> bool {
        *self == self.adjoint() && *self == self.mul(self)
    }
}

impl Add for &ToeplitzElement {
    type Output = ToeplitzElement;
    fn add(self, rhs: &ToeplitzElement) -> ToeplitzElement {
        let mut out = self.clone();
        for (b, c) in &rhs.terms {
            out.add_term(*b, c.clone());
        }
        out
    }
}

impl Sub for &ToeplitzElement {
    type Output = ToeplitzElement;
    fn sub(self, rhs: &ToeplitzElement) -> ToeplitzElement {
        let mut out = self.clone();
        for (b, c) in &rhs.terms {
            out.add_term(*b, -c.clone());
        }
        out
    }
}

impl Neg for &ToeplitzElement {
    type Output = ToeplitzElement;
    fn neg(self) -> ToeplitzElement {
        ToeplitzElement::from_terms(self.terms.iter().map(|(b, c)| (*b, -c.clone())))
    }
}

impl Mul for &ToeplitzElement {
    type Output = ToeplitzElement;
    fn mul(self, rhs: &ToeplitzElement) -> ToeplitzElement {
        ToeplitzElement::mul(self, rhs)
    }
}

impl fmt::Display for ToeplitzElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (b, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{b}")?;
            } else {
                write!(f, "{}·{b}", fmt_rat(c))?;
            }
        }
        Ok(())
    }
}

/// Laurent polynomial in the unitary generator `u` of `C(S¹)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rat>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    pub fn monomial(m: i64) -> Self {
        Self::from_terms([(m, Rat::one())])
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Rat)>>(terms: I) -> Self {
        let mut out = BTreeMap::new();
        for (e, c) in terms {
            let slot = out.entry(e).or_insert_with(Rat::zero);
            *slot += c;
        }
        out.retain(|_, c: &mut Rat| !c.is_zero());
        LaurentPoly { terms: out }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .flat_map(|(a, ca)| other.terms.iter().map(move |(b, cb)| (a + b, ca * cb))),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(other.terms.iter()).map(|(e, c)| (*e, c.clone())))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| match *e {
                0 => fmt_rat(c),
                _ if c.is_one() => format!("u^{e}"),
                _ => format!("{}·u^{e}", fmt_rat(c)),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use ToeplitzBasis::{Shift, Unit};

    fn el(terms: &[(ToeplitzBasis, i64)]) -> ToeplitzElement {
        ToeplitzElement::from_terms(terms.iter().map(|(b, c)| (*b, rat(*c))))
    }

    #[test]
    fn isometry_relations() {
        let t = ToeplitzElement::shift(1);
        let ts = ToeplitzElement::shift(-1);
        assert_eq!(ts.mul(&t), ToeplitzElement::one());
        assert_eq!(t.mul(&ts), el(&[(Shift(0), 1), (Unit(0, 0), -1)]));
        assert_eq!(
            ToeplitzElement::shift(2).mul(&ts),
            el(&[(Shift(1), 1), (Unit(1, 0), -1)])
        );
    }

    #[test]
    fn unit_actions() {
        let e = ToeplitzElement::unit(2, 3);
        assert_eq!(ToeplitzElement::shift(1).mul(&e), ToeplitzElement::unit(3, 3));
        assert_eq!(ToeplitzElement::shift(-3).mul(&e), ToeplitzElement::zero());
        assert_eq!(e.mul(&ToeplitzElement::shift(-1)), ToeplitzElement::unit(2, 4));
        assert_eq!(ToeplitzElement::unit(0, 0).mul(&ToeplitzElement::shift(1)), ToeplitzElement::zero());
        assert_eq!(e.mul(&ToeplitzElement::unit(3, 1)), ToeplitzElement::unit(2, 1));
        assert_eq!(e.mul(&ToeplitzElement::unit(2, 1)), ToeplitzElement::zero());
    }

    #[test]
    fn matrix_unit_from_words() {
        // e_ij = t^i (1 − t t*) (t*)^j
        let t = ToeplitzElement::shift(1);
        let defect = &ToeplitzElement::one() - &t.mul(&t.adjoint());
        for i in 0..4u32 {
            for j in 0..4u32 {
                let w = t.pow(i).mul(&defect).mul(&t.adjoint().pow(j));
                assert_eq!(w, ToeplitzElement::unit(i, j));
            }
        }
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(ToeplitzElement::shift(3).adjoint(), ToeplitzElement::shift(-3));
        assert_eq!(ToeplitzElement::unit(1, 2).adjoint(), ToeplitzElement::unit(2, 1));
    }

    #[test]
    fn projections() {
        assert!(ToeplitzElement::proj_p(0).is_zero());
        assert_eq!(ToeplitzElement::proj_p(2), el(&[(Unit(0, 0), 1), (Unit(1, 1), 1)]));
        assert_eq!(ToeplitzElement::proj_pperp(0), ToeplitzElement::one());
        for k in 0..=32 {
            assert!(ToeplitzElement::proj_p(k).is_projection());
            assert!(ToeplitzElement::proj_pperp(k).is_projection());
            let split = &ToeplitzElement::proj_pperp(k + 1) + &ToeplitzElement::unit(k, k);
            assert_eq!(ToeplitzElement::proj_pperp(k), split);
        }
    }

    #[test]
    fn symbol_examples() {
        let x = el(&[(Shift(2), 1), (Unit(0, 0), -1)]);
        assert_eq!(x.symbol(), LaurentPoly::monomial(2));
        assert_eq!(ToeplitzElement::proj_pperp(5).symbol(), LaurentPoly::one());
        let tts = ToeplitzElement::shift(1).mul(&ToeplitzElement::shift(-1));
        assert_eq!(tts.symbol(), LaurentPoly::one());
        assert!(ToeplitzElement::proj_p(3).is_compact());
    }

    #[test]
    fn degree_split_examples() {
        let x = el(&[(Shift(1), 1), (Unit(0, 0), 1)]);
        let split = x.degree_split();
        assert_eq!(split.len(), 2);
        assert_eq!(split[&1], ToeplitzElement::shift(1));
        assert_eq!(split[&0], ToeplitzElement::unit(0, 0));
        let split = ToeplitzElement::unit(2, 0).degree_split();
        assert_eq!(split[&2], ToeplitzElement::unit(2, 0));
    }

    #[test]
    fn dropped_telescoping_differs() {
        let a = ToeplitzElement::shift(1);
        let b = ToeplitzElement::shift(-1);
        assert_ne!(a.mul(&b), a.mul_with(&b, Reduction::DropTelescoping));
    }
}
