//! Tensor products of Toeplitz and circle factors and their sphere quotients.
//!
//! A [`Signature`] is an ordered list of blocks. Each block contributes slots:
//! a Toeplitz slot holds a [`ToeplitzBasis`] symbol, a circle slot holds a
//! power of the unitary `u`, and a sphere block of width `m` holds `m`
//! Toeplitz symbols taken modulo the joint compact ideal `𝒦^{⊗m}`.
//!
//! # Quotient model
//!
//! Elements of a sphere block are stored as canonical representatives: every
//! tuple whose slots inside the block are all matrix units is dropped. This is
//! sound because the ideal meets the polynomial algebra exactly in the span of
//! those tuples. One direction is clear. For the other, let `x` be a
//! polynomial element in the ideal and split it as `x = y + z` with `z` the
//! all-unit part and `y` the rest. Every tuple of `y` has some slot `i`
//! holding a shift power. Applying the symbol map in slot `i` only, and
//! ranging over `i`, kills `z` and every compact operator, so it kills `y`;
//! since the symbol map is injective on shift powers and the remaining slots
//! carry linearly independent basis symbols, the coefficients of `y` vanish
//! slot by slot. Hence `x = z`, so quotient classes are determined by their
//! canonical coefficient maps and equality is map equality.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::rational::{fmt_rat, is_negative, Rat};
use crate::report::{Tally, VerificationReport};
use crate::toeplitz::{basis_mul_with, Reduction, ToeplitzBasis, ToeplitzElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    /// `C(S^{2m−1}_H) = 𝒯^{⊗m}/𝒦^{⊗m}`.
    Sphere(usize),
    Toeplitz,
    Circle,
}

impl Block {
    pub fn width(&self) -> usize {
        match *self {
            Block::Sphere(m) => m,
            _ => 1,
        }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Block::Sphere(m) => write!(f, "S{m}"),
            Block::Toeplitz => write!(f, "T"),
            Block::Circle => write!(f, "C"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SlotKind {
    Toeplitz,
    Circle,
}

/// Ordered block layout of a tensor product algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    blocks: Vec<Block>,
    kinds: Vec<SlotKind>,
    spheres: Vec<(usize, usize)>,
}

impl Signature {
    pub fn new(blocks: Vec<Block>) -> Self {
        let mut kinds = Vec::new();
        let mut spheres = Vec::new();
        for b in &blocks {
            match *b {
                Block::Sphere(m) => {
                    spheres.push((kinds.len(), kinds.len() + m));
                    kinds.extend(std::iter::repeat_n(SlotKind::Toeplitz, m));
                }
                Block::Toeplitz => kinds.push(SlotKind::Toeplitz),
                Block::Circle => kinds.push(SlotKind::Circle),
            }
        }
        Signature { blocks, kinds, spheres }
    }

    /// `𝒯^{⊗m}`.
    pub fn toeplitz(m: usize) -> Self {
        Self::new(vec![Block::Toeplitz; m])
    }

    /// `C(S^{2m−1}_H)` as a single block.
    pub fn sphere(m: usize) -> Self {
        Self::new(vec![Block::Sphere(m)])
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    pub fn kind(&self, slot: usize) -> Result<SlotKind> {
        self.kinds
            .get(slot)
            .copied()
            .ok_or(Error::SlotOutOfRange { slot, len: self.len() })
    }

    pub fn kinds(&self) -> &[SlotKind] {
        &self.kinds
    }

    /// Slot ranges `[a, b)` of the sphere blocks.
    pub fn sphere_ranges(&self) -> &[(usize, usize)] {
        &self.spheres
    }

    pub fn has_spheres(&self) -> bool {
        !self.spheres.is_empty()
    }

    /// Concatenation, the signature of the tensor product.
    pub fn concat(&self, other: &Signature) -> Signature {
        let mut blocks = self.blocks.clone();
        blocks.extend_from_slice(&other.blocks);
        Signature::new(blocks)
    }

    /// Same slots with every sphere block opened up into Toeplitz slots.
    pub fn lifted(&self) -> Signature {
        Signature::new(
            self.blocks
                .iter()
                .flat_map(|b| match *b {
                    Block::Sphere(m) => vec![Block::Toeplitz; m],
                    other => vec![other],
                })
                .collect(),
        )
    }

    /// True if the tuple lies in the quotient ideal of some sphere block.
    pub fn is_ideal_tuple(&self, tuple: &[Sym]) -> bool {
        self.spheres
            .iter()
            .any(|&(a, b)| tuple[a..b].iter().all(|s| matches!(s, Sym::T(ToeplitzBasis::Unit(..)))))
    }

    fn identity_tuple(&self) -> Vec<Sym> {
        self.kinds
            .iter()
            .map(|k| match k {
                SlotKind::Toeplitz => Sym::T(ToeplitzBasis::ONE),
                SlotKind::Circle => Sym::C(0),
            })
            .collect()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Parses `"T,C,S2"`-style block lists.
impl FromStr for Signature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let block = match part {
                "T" => Block::Toeplitz,
                "C" => Block::Circle,
                _ => match part.strip_prefix('S').and_then(|m| m.parse::<usize>().ok()) {
                    Some(m) if m > 0 => Block::Sphere(m),
                    _ => return Err(Error::Config(format!("bad signature block `{part}`"))),
                },
            };
            blocks.push(block);
        }
        if blocks.is_empty() {
            return Err(Error::Config("empty signature".into()));
        }
        Ok(Signature::new(blocks))
    }
}

/// One slot entry of a basis tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    T(ToeplitzBasis),
    C(i64),
}

impl Sym {
    pub fn degree(&self) -> i64 {
        match self {
            Sym::T(b) => b.degree(),
            Sym::C(m) => *m,
        }
    }

    pub fn adjoint(&self) -> Sym {
        match self {
            Sym::T(b) => Sym::T(b.adjoint()),
            Sym::C(m) => Sym::C(-m),
        }
    }

    fn is_identity(&self) -> bool {
        matches!(self, Sym::T(ToeplitzBasis::Shift(0)) | Sym::C(0))
    }
}

pub type Tuple = Vec<Sym>;

/// Finite rational combination of basis tuples in a fixed signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    sig: Arc<Signature>,
    terms: BTreeMap<Tuple, Rat>,
}

impl TensorElement {
    pub fn zero(sig: &Signature) -> Self {
        TensorElement { sig: Arc::new(sig.clone()), terms: BTreeMap::new() }
    }

    pub fn one(sig: &Signature) -> Self {
        Self::from_terms(sig, [(sig.identity_tuple(), Rat::one())])
    }

    pub fn scalar(sig: &Signature, c: Rat) -> Self {
        Self::one(sig).scale(&c)
    }

    fn empty_like(&self) -> Self {
        TensorElement { sig: self.sig.clone(), terms: BTreeMap::new() }
    }

    /// Builds an element from tuples, summing duplicates and dropping tuples in
    /// the quotient ideal. Tuples are assumed to fit the signature.
    pub fn from_terms<I: IntoIterator<Item = (Tuple, Rat)>>(sig: &Signature, terms: I) -> Self {
        let mut out = Self::zero(sig);
        for (t, c) in terms {
            out.add_term(t, c);
        }
        out
    }

    /// Checked construction: every symbol must match its slot kind.
    pub fn try_from_terms<I: IntoIterator<Item = (Tuple, Rat)>>(sig: &Signature, terms: I) -> Result<Self> {
        let mut out = Self::zero(sig);
        for (t, c) in terms {
            check_tuple(sig, &t)?;
            out.add_term(t, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, t: Tuple, c: Rat) {
        if c.is_zero() || self.sig.is_ideal_tuple(&t) {
            return;
        }
        match self.terms.entry(t) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Elementary tensor with `sym` in `slot` and the identity elsewhere.
    pub fn embed(sig: &Signature, slot: usize, sym: Sym) -> Result<Self> {
        let mut t = sig.identity_tuple();
        if slot >= t.len() {
            return Err(Error::SlotOutOfRange { slot, len: t.len() });
        }
        t[slot] = sym;
        Self::try_from_terms(sig, [(t, Rat::one())])
    }

    /// Embeds a whole one-slot Toeplitz element.
    pub fn embed_toeplitz(sig: &Signature, slot: usize, x: &ToeplitzElement) -> Result<Self> {
        let mut out = Self::zero(sig);
        for (b, c) in x.terms() {
            out = &out + &Self::embed(sig, slot, Sym::T(*b))?.scale(c);
        }
        if x.is_zero() {
            // still validate the slot
            Self::embed(sig, slot, Sym::T(ToeplitzBasis::ONE))?;
        }
        Ok(out)
    }

    /// `t_slot`.
    pub fn t(sig: &Signature, slot: usize) -> Result<Self> {
        Self::embed(sig, slot, Sym::T(ToeplitzBasis::Shift(1)))
    }

    /// `u^m` in a circle slot.
    pub fn u(sig: &Signature, slot: usize, m: i64) -> Result<Self> {
        Self::embed(sig, slot, Sym::C(m))
    }

    pub fn unit(sig: &Signature, slot: usize, i: u32, j: u32) -> Result<Self> {
        Self::embed(sig, slot, Sym::T(ToeplitzBasis::Unit(i, j)))
    }

    /// Tensor product of elementary slot elements, one per slot, given as
    /// Toeplitz elements for Toeplitz slots. Circle slots get the identity.
    pub fn product_of_slots(sig: &Signature, parts: &[(usize, ToeplitzElement)]) -> Result<Self> {
        let mut out = Self::one(sig);
        for (slot, x) in parts {
            out = out.mul(&Self::embed_toeplitz(sig, *slot, x)?);
        }
        Ok(out)
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Tuple, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, t: &[Sym]) -> Rat {
        self.terms.get(t).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_sig(&self, other: &Self) -> Result<()> {
        if self.sig == other.sig {
            Ok(())
        } else {
            Err(Error::SignatureMismatch { left: self.sig.to_string(), right: other.sig.to_string() })
        }
    }

    pub fn tadd(&self, other: &Self) -> Result<Self> {
        self.same_sig(other)?;
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn tsub(&self, other: &Self) -> Result<Self> {
        self.same_sig(other)?;
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn tscale(&self, c: &Rat) -> Self {
        self.scale(c)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = self.empty_like();
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(t, x)| (t.clone(), x * c)).collect();
        out
    }

    pub fn tmul(&self, other: &Self) -> Result<Self> {
        self.tmul_with(other, Reduction::Exact)
    }

    pub fn tmul_with(&self, other: &Self, rule: Reduction) -> Result<Self> {
        self.same_sig(other)?;
        let mut out = self.empty_like();
        let mut partial: Vec<(Tuple, bool)> = Vec::new();
        let mut next: Vec<(Tuple, bool)> = Vec::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                partial.clear();
                partial.push((Vec::with_capacity(a.len()), false));
                for (x, y) in a.iter().zip(b) {
                    next.clear();
                    match (x, y) {
                        (Sym::C(p), Sym::C(q)) => {
                            for (t, neg) in partial.drain(..) {
                                let mut t = t;
                                t.push(Sym::C(p + q));
                                next.push((t, neg));
                            }
                        }
                        (Sym::T(p), Sym::T(q)) => {
                            let prods = basis_mul_with(*p, *q, rule);
                            for (t, neg) in partial.drain(..) {
                                for (s, sign) in &prods {
                                    let mut t2 = t.clone();
                                    t2.push(Sym::T(*s));
                                    next.push((t2, neg ^ (*sign < 0)));
                                }
                            }
                        }
                        _ => unreachable!("tuples of one signature share slot kinds"),
                    }
                    std::mem::swap(&mut partial, &mut next);
                    if partial.is_empty() {
                        break;
                    }
                }
                if partial.is_empty() {
                    continue;
                }
                let c = ca * cb;
                for (t, neg) in partial.drain(..) {
                    out.add_term(t, if neg { -c.clone() } else { c.clone() });
                }
            }
        }
        Ok(out)
    }

    /// Product, panicking on signature mismatch. Internal callers always
    /// multiply within one algebra.
    pub fn mul(&self, other: &Self) -> Self {
        self.tmul(other).expect("signature mismatch")
    }

    pub fn tadjoint(&self) -> Self {
        let mut out = self.empty_like();
        for (t, c) in &self.terms {
            out.add_term(t.iter().map(Sym::adjoint).collect(), c.clone());
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        self.tadjoint()
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(&self.sig), |acc, _| acc.mul(self))
    }

    pub fn is_projection(&self) -> bool {
        *self == self.adjoint() && *self == self.mul(self)
    }

    /// Total U(1) degree of a tuple.
    pub fn tuple_degree(t: &[Sym]) -> i64 {
        t.iter().map(Sym::degree).sum()
    }

    pub fn degree_split(&self) -> BTreeMap<i64, TensorElement> {
        let mut out: BTreeMap<i64, TensorElement> = BTreeMap::new();
        for (t, c) in &self.terms {
            out.entry(Self::tuple_degree(t))
                .or_insert_with(|| self.empty_like())
                .add_term(t.clone(), c.clone());
        }
        out
    }

    /// Degree-0 component, the part fixed by the diagonal gauge action.
    pub fn invariant_part(&self) -> Self {
        let mut out = self.empty_like();
        for (t, c) in &self.terms {
            if Self::tuple_degree(t) == 0 {
                out.add_term(t.clone(), c.clone());
            }
        }
        out
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree_split().len() <= 1
    }

    /// Gauging automorphism: moves the degree of all other slots onto the
    /// circle slot `slot`.
    pub fn gauge_move(&self, slot: usize) -> Result<Self> {
        self.gauge_shift(slot, 1)
    }

    pub fn gauge_move_inverse(&self, slot: usize) -> Result<Self> {
        self.gauge_shift(slot, -1)
    }

    fn gauge_shift(&self, slot: usize, dir: i64) -> Result<Self> {
        if self.sig.kind(slot)? != SlotKind::Circle {
            return Err(Error::NotACircleSlot(slot));
        }
        let mut out = self.empty_like();
        for (t, c) in &self.terms {
            let others: i64 = t.iter().enumerate().filter(|(i, _)| *i != slot).map(|(_, s)| s.degree()).sum();
            let mut t = t.clone();
            if let Sym::C(m) = t[slot] {
                t[slot] = Sym::C(m + dir * others);
            }
            out.add_term(t, c.clone());
        }
        Ok(out)
    }

    /// Outer tensor product; the signature is the concatenation.
    pub fn tensor(&self, other: &Self) -> Self {
        let sig = self.sig.concat(&other.sig);
        let mut out = Self::zero(&sig);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut t = a.clone();
                t.extend_from_slice(b);
                out.add_term(t, ca * cb);
            }
        }
        out
    }

    /// Reinterprets the same tuples in another signature with the same slot
    /// kinds, canonicalizing there. Casting Toeplitz slots into a sphere block
    /// is the quotient map; casting the other way picks the canonical
    /// representative.
    pub fn cast(&self, sig: &Signature) -> Result<Self> {
        if sig.kinds() != self.sig.kinds() {
            return Err(Error::SignatureMismatch { left: self.sig.to_string(), right: sig.to_string() });
        }
        Ok(Self::from_terms(sig, self.terms.iter().map(|(t, c)| (t.clone(), c.clone()))))
    }

    /// Canonical representative in the lifted signature.
    pub fn lift(&self) -> Self {
        self.cast(&self.sig.lifted()).expect("lifting keeps slot kinds")
    }

    /// Symbol map in one Toeplitz slot, turning it into a circle slot. The
    /// slot must not sit inside a sphere block.
    pub fn symbol_at(&self, slot: usize) -> Result<Self> {
        let mut blocks = Vec::new();
        let mut pos = 0;
        let mut found = false;
        for b in self.sig.blocks() {
            let w = b.width();
            if (pos..pos + w).contains(&slot) {
                match b {
                    Block::Toeplitz => {
                        blocks.push(Block::Circle);
                        found = true;
                    }
                    Block::Sphere(_) => return Err(Error::SphereBlockNotLifted),
                    Block::Circle => {
                        return Err(Error::IncompatibleSlot {
                            slot,
                            kind: "circle".into(),
                            symbol: "symbol map".into(),
                        })
                    }
                }
            } else {
                blocks.push(*b);
            }
            pos += w;
        }
        if !found {
            return Err(Error::SlotOutOfRange { slot, len: self.sig.len() });
        }
        let sig = Signature::new(blocks);
        let mut out = Self::zero(&sig);
        for (t, c) in &self.terms {
            if let Sym::T(ToeplitzBasis::Shift(m)) = t[slot] {
                let mut t = t.clone();
                t[slot] = Sym::C(m);
                out.add_term(t, c.clone());
            }
        }
        Ok(out)
    }

    /// Writes the element using the expression language, so printing and
    /// parsing round-trip.
    pub fn to_expr(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (t, c)) in self.terms.iter().enumerate() {
            let neg = is_negative(c);
            let mag = if neg { -c.clone() } else { c.clone() };
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() {
                factors.push(fmt_rat(&mag));
            }
            for (slot, s) in t.iter().enumerate() {
                if s.is_identity() {
                    continue;
                }
                match s {
                    Sym::C(m) => factors.push(format!("u^{m}@{slot}")),
                    Sym::T(ToeplitzBasis::Shift(m)) => {
                        let atom = if *m > 0 { format!("t@{slot}") } else { format!("t@{slot}*") };
                        for _ in 0..m.unsigned_abs() {
                            factors.push(atom.clone());
                        }
                    }
                    Sym::T(ToeplitzBasis::Unit(i, j)) => factors.push(format!("e({i},{j})@{slot}")),
                }
            }
            if factors.is_empty() {
                factors.push("1".into());
            }
            out.push_str(&factors.join(" * "));
        }
        out
    }
}

fn check_tuple(sig: &Signature, t: &[Sym]) -> Result<()> {
    if t.len() != sig.len() {
        return Err(Error::ShapeMismatch(format!("tuple of length {} in signature {sig}", t.len())));
    }
    for (slot, (s, k)) in t.iter().zip(sig.kinds()).enumerate() {
        let ok = matches!((s, k), (Sym::T(_), SlotKind::Toeplitz) | (Sym::C(_), SlotKind::Circle));
        if !ok {
            return Err(Error::IncompatibleSlot {
                slot,
                kind: match k {
                    SlotKind::Toeplitz => "toeplitz".into(),
                    SlotKind::Circle => "circle".into(),
                },
                symbol: match s {
                    Sym::T(b) => b.to_string(),
                    Sym::C(m) => format!("u^{m}"),
                },
            });
        }
    }
    Ok(())
}

/// True iff every tuple of the raw element `raw` (an element of the lifted
/// signature of `sig`) lies in the quotient ideal of `sig`, i.e. its class
/// in `sig` is zero.
pub fn in_ideal(sig: &Signature, raw: &TensorElement) -> Result<bool> {
    if raw.signature().kinds() != sig.kinds() {
        return Err(Error::SignatureMismatch { left: raw.signature().to_string(), right: sig.to_string() });
    }
    Ok(raw.terms().all(|(t, _)| sig.is_ideal_tuple(t)))
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr())
    }
}

impl std::ops::Add for &TensorElement {
    type Output = TensorElement;
    fn add(self, rhs: &TensorElement) -> TensorElement {
        self.tadd(rhs).expect("signature mismatch")
    }
}

impl std::ops::Sub for &TensorElement {
    type Output = TensorElement;
    fn sub(self, rhs: &TensorElement) -> TensorElement {
        self.tsub(rhs).expect("signature mismatch")
    }
}

impl std::ops::Mul for &TensorElement {
    type Output = TensorElement;
    fn mul(self, rhs: &TensorElement) -> TensorElement {
        TensorElement::mul(self, rhs)
    }
}

impl std::ops::Neg for &TensorElement {
    type Output = TensorElement;
    fn neg(self) -> TensorElement {
        self.scale(&-Rat::one())
    }
}

/// The canonical multipullback of `n+1` copies of `𝒯^{⊗n+1}` with one slot
/// replaced by a circle: `A_i` has its circle at slot `i`, and `π^i_j`
/// applies the symbol map in slot `j`.
pub fn multipullback_algebra(n: usize, i: usize) -> Signature {
    Signature::new((0..=n).map(|k| if k == i { Block::Circle } else { Block::Toeplitz }).collect())
}

/// Checks `π^i_j(a_i) = π^j_i(a_j)` for all `i ≠ j`.
pub fn multipullback_check(elements: &[TensorElement]) -> VerificationReport {
    let n = elements.len().saturating_sub(1);
    let mut tally = Tally::new();
    let mut bad_shape = None;
    for (i, a) in elements.iter().enumerate() {
        if *a.signature() != multipullback_algebra(n, i) {
            bad_shape = Some(i);
        }
    }
    let report = VerificationReport::new("multipullback").param("n", n as i64);
    if let Some(i) = bad_shape {
        tally.record(false, || format!("entry {i} not in A_{i}"), || json!({"i": i}));
        return report.with_tally(tally);
    }
    for i in 0..elements.len() {
        for j in (i + 1)..elements.len() {
            let lhs = elements[i].symbol_at(j).expect("slot j is Toeplitz in A_i");
            let rhs = elements[j].symbol_at(i).expect("slot i is Toeplitz in A_j");
            tally.record(
                lhs == rhs,
                || format!("pi^{i}_{j}(a_{i}) = pi^{j}_{i}(a_{j})"),
                || json!({"i": i, "j": j, "lhs": lhs.to_string(), "rhs": rhs.to_string()}),
            );
        }
    }
    report.with_tally(tally)
}

/// Image of `s_k` in `A_i` under the canonical identification of the sphere
/// with the multipullback: `t_k` off the circle slot, `u` on it.
pub fn multipullback_image(n: usize, i: usize, k: usize) -> TensorElement {
    let sig = multipullback_algebra(n, i);
    if k == i {
        TensorElement::u(&sig, k, 1).expect("circle slot")
    } else {
        TensorElement::t(&sig, k).expect("toeplitz slot")
    }
}

/// Matrix over a tensor algebra, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<TensorElement>,
}

impl AlgMatrix {
    pub fn from_rows(rows: Vec<Vec<TensorElement>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged or empty matrix".into()));
        }
        let entries: Vec<TensorElement> = rows.into_iter().flatten().collect();
        let sig = entries[0].signature().clone();
        if let Some(bad) = entries.iter().find(|e| *e.signature() != sig) {
            return Err(Error::SignatureMismatch { left: sig.to_string(), right: bad.signature().to_string() });
        }
        Ok(AlgMatrix { rows: r, cols: c, entries })
    }

    pub fn zero(sig: &Signature, rows: usize, cols: usize) -> Self {
        AlgMatrix { rows, cols, entries: vec![TensorElement::zero(sig); rows * cols] }
    }

    pub fn identity(sig: &Signature, n: usize) -> Self {
        let mut m = Self::zero(sig, n, n);
        for i in 0..n {
            m.entries[i * n + i] = TensorElement::one(sig);
        }
        m
    }

    /// 1×1 matrix.
    pub fn scalar(x: TensorElement) -> Self {
        AlgMatrix { rows: 1, cols: 1, entries: vec![x] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn signature(&self) -> &Signature {
        self.entries[0].signature()
    }

    pub fn get(&self, r: usize, c: usize) -> &TensorElement {
        &self.entries[r * self.cols + c]
    }

    pub fn entries(&self) -> &[TensorElement] {
        &self.entries
    }

    pub fn map(&self, f: impl Fn(&TensorElement) -> TensorElement) -> Self {
        AlgMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.signature() != other.signature() {
            return Err(Error::SignatureMismatch {
                left: self.signature().to_string(),
                right: other.signature().to_string(),
            });
        }
        let sig = self.signature().clone();
        let mut out = Self::zero(&sig, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = TensorElement::zero(&sig);
                for k in 0..self.cols {
                    let a = self.get(r, k);
                    let b = other.get(k, c);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = &acc + &a.mul(b);
                }
                out.entries[r * other.cols + c] = acc;
            }
        }
        Ok(out)
    }

    pub fn mat_adjoint(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).adjoint());
            }
        }
        AlgMatrix { rows: self.cols, cols: self.rows, entries }
    }

    pub fn mat_add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::ShapeMismatch("addition of different shapes".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.tadd(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(AlgMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn mat_sub(&self, other: &Self) -> Result<Self> {
        self.mat_add(&other.map(|x| -x))
    }

    /// Block-diagonal sum `P ⊞ Q`.
    pub fn boxplus(&self, other: &Self) -> Result<Self> {
        if self.signature() != other.signature() {
            return Err(Error::SignatureMismatch {
                left: self.signature().to_string(),
                right: other.signature().to_string(),
            });
        }
        let sig = self.signature().clone();
        let (r, c) = (self.rows + other.rows, self.cols + other.cols);
        let mut out = Self::zero(&sig, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[i * c + j] = self.get(i, j).clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.entries[(self.rows + i) * c + self.cols + j] = other.get(i, j).clone();
            }
        }
        Ok(out)
    }

    pub fn is_projection(&self) -> bool {
        self.rows == self.cols
            && *self == self.mat_adjoint()
            && self.mat_mul(self).map(|sq| sq == *self).unwrap_or(false)
    }

    pub fn is_selfadjoint_unitary(&self) -> bool {
        self.rows == self.cols
            && *self == self.mat_adjoint()
            && self
                .mat_mul(self)
                .map(|sq| sq == Self::identity(self.signature(), self.rows))
                .unwrap_or(false)
    }

    pub fn is_unitary(&self) -> bool {
        let id = Self::identity(self.signature(), self.rows);
        let adj = self.mat_adjoint();
        self.rows == self.cols
            && self.mat_mul(&adj).map(|x| x == id).unwrap_or(false)
            && adj.mat_mul(self).map(|x| x == id).unwrap_or(false)
    }
}

impl fmt::Display for AlgMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|r| {
                let cells: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use ToeplitzBasis::{Shift, Unit};

    fn s(sig: &Signature, i: usize) -> TensorElement {
        TensorElement::t(sig, i).unwrap()
    }

    fn defect(x: &TensorElement) -> TensorElement {
        let one = TensorElement::one(x.signature());
        &one - &x.mul(&x.adjoint())
    }

    #[test]
    fn embed_examples() {
        let sig = Signature::toeplitz(3);
        let t1 = s(&sig, 1);
        let tuple = vec![Sym::T(Shift(0)), Sym::T(Shift(1)), Sym::T(Shift(0))];
        assert_eq!(t1.coeff(&tuple), rat(1));
        assert_eq!(t1.len(), 1);

        let sph = Signature::sphere(2);
        assert!(!s(&sph, 0).is_zero());

        let mixed: Signature = "T,C".parse().unwrap();
        assert!(matches!(TensorElement::unit(&mixed, 1, 0, 0), Err(Error::IncompatibleSlot { .. })));
        assert!(matches!(TensorElement::u(&mixed, 0, 1), Err(Error::IncompatibleSlot { .. })));
    }

    #[test]
    fn sphere_product_vanishes() {
        for n in 0..=3 {
            let sig = Signature::sphere(n + 1);
            let prod = (0..=n).fold(TensorElement::one(&sig), |acc, i| acc.mul(&defect(&s(&sig, i))));
            assert!(prod.is_zero(), "n = {n}");
            for i in 0..=n {
                let si = s(&sig, i);
                assert_eq!(si.adjoint().mul(&si), TensorElement::one(&sig));
            }
        }
    }

    #[test]
    fn annihilation_in_one_slot() {
        let sig = Signature::toeplitz(2);
        let t0 = s(&sig, 0);
        assert!(defect(&t0).mul(&t0).is_zero());
    }

    #[test]
    fn ideal_membership() {
        let sph = Signature::sphere(3);
        let lifted = sph.lifted();
        let e = TensorElement::from_terms(&lifted, [(vec![Sym::T(Unit(0, 0)); 3], rat(1))]);
        assert!(in_ideal(&sph, &e).unwrap());
        let prod = (0..3).fold(TensorElement::one(&lifted), |acc, i| acc.mul(&defect(&s(&lifted, i))));
        assert!(!prod.is_zero());
        assert!(in_ideal(&sph, &prod).unwrap());

        let sph2 = Signature::sphere(2);
        let mixed = s(&sph2.lifted(), 0).mul(&TensorElement::unit(&sph2.lifted(), 1, 0, 0).unwrap());
        assert!(!in_ideal(&sph2, &mixed).unwrap());
    }

    #[test]
    fn invariant_part_examples() {
        let sig = Signature::sphere(2);
        let x = s(&sig, 0).mul(&s(&sig, 1).adjoint());
        assert_eq!(x.invariant_part(), x);
        assert!(s(&sig, 0).invariant_part().is_zero());
    }

    #[test]
    fn gauge_examples() {
        let sig: Signature = "T,C".parse().unwrap();
        let t = s(&sig, 0);
        let moved = t.gauge_move(1).unwrap();
        assert_eq!(moved, t.mul(&TensorElement::u(&sig, 1, 1).unwrap()));
        let e = TensorElement::unit(&sig, 0, 0, 0).unwrap().mul(&TensorElement::u(&sig, 1, 3).unwrap());
        assert_eq!(e.gauge_move(1).unwrap(), e);
        assert_eq!(moved.gauge_move_inverse(1).unwrap(), t);
        assert!(matches!(t.gauge_move(0), Err(Error::NotACircleSlot(0))));
    }

    #[test]
    fn signature_mismatch() {
        let a = TensorElement::one(&Signature::toeplitz(1));
        let b = TensorElement::one(&Signature::toeplitz(2));
        assert!(matches!(a.tmul(&b), Err(Error::SignatureMismatch { .. })));
        assert!(matches!(a.tadd(&b), Err(Error::SignatureMismatch { .. })));
    }

    #[test]
    fn signature_text() {
        let sig: Signature = "T, C,S2".parse().unwrap();
        assert_eq!(sig.to_string(), "T,C,S2");
        assert_eq!(sig.len(), 4);
        assert!("S0".parse::<Signature>().is_err());
        assert!("X".parse::<Signature>().is_err());
    }

    #[test]
    fn swap_is_selfadjoint_unitary() {
        let sig = Signature::toeplitz(2);
        let o = TensorElement::one(&sig);
        let z = TensorElement::zero(&sig);
        let u0 = AlgMatrix::from_rows(vec![vec![z.clone(), o.clone()], vec![o, z]]).unwrap();
        assert!(u0.is_selfadjoint_unitary());
        assert!(!u0.is_projection());
    }

    #[test]
    fn boxplus_of_projections() {
        let sig = Signature::toeplitz(2);
        let p = AlgMatrix::scalar(TensorElement::unit(&sig, 0, 0, 0).unwrap());
        let q = AlgMatrix::scalar(defect(&s(&sig, 1)).adjoint());
        let pq = p.boxplus(&q).unwrap();
        assert_eq!((pq.rows(), pq.cols()), (2, 2));
        assert!(pq.is_projection());
        let bad = AlgMatrix::zero(&sig, 2, 3);
        assert!(matches!(bad.mat_mul(&bad), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn multipullback_examples() {
        for n in 1..=2 {
            for k in 0..=n {
                let tuple: Vec<_> = (0..=n).map(|i| multipullback_image(n, i, k)).collect();
                assert!(multipullback_check(&tuple).passed());
            }
            let ones: Vec<_> = (0..=n).map(|i| TensorElement::one(&multipullback_algebra(n, i))).collect();
            assert!(multipullback_check(&ones).passed());
        }
        let n = 1;
        let mut tuple: Vec<_> = (0..=n).map(|i| multipullback_image(n, i, 0)).collect();
        let sig = tuple[1].signature().clone();
        tuple[1] = &tuple[1] + &TensorElement::u(&sig, 1, 1).unwrap();
        let r = multipullback_check(&tuple);
        assert!(!r.passed());
        assert_eq!(r.witness.unwrap()["i"], 0);
    }

    #[test]
    fn symbol_at_turns_slot_into_circle() {
        let sig = Signature::toeplitz(2);
        let x = &s(&sig, 0) + &TensorElement::unit(&sig, 0, 1, 1).unwrap();
        let y = x.symbol_at(0).unwrap();
        assert_eq!(y.signature().to_string(), "C,T");
        assert_eq!(y, TensorElement::u(y.signature(), 0, 1).unwrap());
        assert!(matches!(TensorElement::one(&Signature::sphere(2)).symbol_at(0), Err(Error::SphereBlockNotLifted)));
    }

    #[test]
    fn printing() {
        let sig: Signature = "T,C".parse().unwrap();
        let x = &s(&sig, 0).adjoint().pow(2) - &TensorElement::unit(&sig, 0, 1, 0).unwrap().scale(&rat(3));
        assert_eq!(x.to_expr(), "t@0* * t@0* - 3 * e(1,0)@0");
        assert_eq!(TensorElement::one(&sig).to_expr(), "1");
        assert_eq!(TensorElement::zero(&sig).to_expr(), "0");
    }
}
