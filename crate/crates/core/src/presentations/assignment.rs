//! Generator-image tables and their evaluation.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::One;

use super::formal::{FormalPoly, Letter};
use super::graph::Graph;
use crate::error::{Error, Result};
use crate::rational::Rat;
use crate::tensor::{Block, Signature, SlotKind, Sym, TensorElement};
use crate::toeplitz::ToeplitzBasis;

/// Generator of a domain presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    /// The isometry (or unitary, for circle slots) living in a tensor slot.
    Slot(usize),
    Vertex(usize),
    Edge(usize, usize),
    /// The unitary of an extra `C(S¹)` factor next to a graph algebra.
    Circle,
}

impl Generator {
    /// U(1) degree of the generator.
    pub fn degree(&self) -> i64 {
        match self {
            Generator::Vertex(_) => 0,
            _ => 1,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Slot(i) => write!(f, "g{i}"),
            Generator::Vertex(v) => write!(f, "P_v{v}"),
            Generator::Edge(i, j) => write!(f, "S_e{i}{j}"),
            Generator::Circle => write!(f, "u"),
        }
    }
}

/// A domain or target algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Algebra {
    Tensor(Signature),
    /// Graph C*-algebra, optionally tensored with `C(S¹)`.
    Graph { graph: Graph, circle: bool },
}

impl Algebra {
    pub fn graph(graph: Graph) -> Self {
        Algebra::Graph { graph, circle: false }
    }

    pub fn generators(&self) -> Vec<Generator> {
        match self {
            Algebra::Tensor(sig) => (0..sig.len()).map(Generator::Slot).collect(),
            Algebra::Graph { graph, circle } => {
                let mut out: Vec<Generator> = graph.vertices().map(Generator::Vertex).collect();
                out.extend(graph.edges().map(|(i, j)| Generator::Edge(i, j)));
                if *circle {
                    out.push(Generator::Circle);
                }
                out
            }
        }
    }

    /// The generator as an element of this algebra.
    pub fn generator_element(&self, g: Generator) -> Result<Element> {
        match (self, g) {
            (Algebra::Tensor(sig), Generator::Slot(i)) => Ok(Element::Tensor(match sig.kind(i)? {
                SlotKind::Toeplitz => TensorElement::t(sig, i)?,
                SlotKind::Circle => TensorElement::u(sig, i, 1)?,
            })),
            (Algebra::Graph { graph, .. }, Generator::Vertex(v)) if v < graph.vertex_count() => {
                Ok(Element::Formal(FormalPoly::letter(Letter::P(v))))
            }
            (Algebra::Graph { graph, .. }, Generator::Edge(i, j)) if graph.has_edge((i, j)) => {
                Ok(Element::Formal(FormalPoly::letter(Letter::S(i, j))))
            }
            (Algebra::Graph { circle: true, .. }, Generator::Circle) => Ok(Element::Formal(FormalPoly::circle(1))),
            _ => Err(Error::MissingGenerator(format!("{g} in {self}"))),
        }
    }

    pub fn one(&self) -> Element {
        match self {
            Algebra::Tensor(sig) => Element::Tensor(TensorElement::one(sig)),
            Algebra::Graph { .. } => Element::Formal(FormalPoly::one()),
        }
    }

    pub fn zero(&self) -> Element {
        match self {
            Algebra::Tensor(sig) => Element::Tensor(TensorElement::zero(sig)),
            Algebra::Graph { .. } => Element::Formal(FormalPoly::zero()),
        }
    }

    /// `A ⊗ C(S¹)`.
    pub fn with_circle(&self) -> Result<Algebra> {
        match self {
            Algebra::Tensor(sig) => Ok(Algebra::Tensor(sig.concat(&Signature::new(vec![Block::Circle])))),
            Algebra::Graph { graph, circle: false } => Ok(Algebra::Graph { graph: graph.clone(), circle: true }),
            Algebra::Graph { .. } => Err(Error::ShapeMismatch("graph algebra already carries a circle".into())),
        }
    }

    pub fn signature(&self) -> Option<&Signature> {
        match self {
            Algebra::Tensor(sig) => Some(sig),
            Algebra::Graph { .. } => None,
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algebra::Tensor(sig) => write!(f, "[{sig}]"),
            Algebra::Graph { graph, circle: false } => write!(f, "C*({graph})"),
            Algebra::Graph { graph, circle: true } => write!(f, "C*({graph})⊗C(S1)"),
        }
    }
}

/// Element of either kind of algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Element {
    Tensor(TensorElement),
    Formal(FormalPoly),
}

impl Element {
    pub fn add(&self, other: &Element) -> Element {
        match (self, other) {
            (Element::Tensor(a), Element::Tensor(b)) => Element::Tensor(a + b),
            (Element::Formal(a), Element::Formal(b)) => Element::Formal(a.add(b)),
            _ => panic!("mixed element kinds"),
        }
    }

    pub fn sub(&self, other: &Element) -> Element {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn mul(&self, other: &Element) -> Element {
        match (self, other) {
            (Element::Tensor(a), Element::Tensor(b)) => Element::Tensor(a.mul(b)),
            (Element::Formal(a), Element::Formal(b)) => Element::Formal(a.mul(b)),
            _ => panic!("mixed element kinds"),
        }
    }

    pub fn scale(&self, c: &Rat) -> Element {
        match self {
            Element::Tensor(a) => Element::Tensor(a.scale(c)),
            Element::Formal(a) => Element::Formal(a.scale(c)),
        }
    }

    pub fn adjoint(&self) -> Element {
        match self {
            Element::Tensor(a) => Element::Tensor(a.adjoint()),
            Element::Formal(a) => Element::Formal(a.adjoint()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Element::Tensor(a) => a.is_zero(),
            Element::Formal(a) => a.is_zero(),
        }
    }

    pub fn as_tensor(&self) -> Option<&TensorElement> {
        match self {
            Element::Tensor(a) => Some(a),
            Element::Formal(_) => None,
        }
    }

    pub fn is_projection(&self) -> bool {
        *self == self.adjoint() && *self == self.mul(self)
    }

    /// Degrees of the homogeneous components.
    /// Exponents of the appended circle factor, one per distinct value: the
    /// last slot of a tensor element, or the `u`-power of a formal word.
    pub fn circle_degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = match self {
            Element::Tensor(a) => a
                .terms()
                .filter_map(|(t, _)| match t.last() {
                    Some(crate::tensor::Sym::C(m)) => Some(*m),
                    _ => None,
                })
                .collect(),
            Element::Formal(a) => a.terms().map(|((_, m), _)| *m).collect(),
        };
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn degrees(&self) -> Vec<i64> {
        match self {
            Element::Tensor(a) => a.degree_split().keys().copied().collect(),
            Element::Formal(a) => {
                let mut d: Vec<i64> = a
                    .terms()
                    .map(|((w, m), _)| w.iter().map(|l| l.degree()).sum::<i64>() + m)
                    .collect();
                d.sort_unstable();
                d.dedup();
                d
            }
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Tensor(a) => write!(f, "{a}"),
            Element::Formal(a) => write!(f, "{a}"),
        }
    }
}

impl From<TensorElement> for Element {
    fn from(x: TensorElement) -> Self {
        Element::Tensor(x)
    }
}

impl From<FormalPoly> for Element {
    fn from(x: FormalPoly) -> Self {
        Element::Formal(x)
    }
}

/// A *-homomorphism given by the images of domain generators.
#[derive(Clone, Debug, PartialEq)]
pub struct GenAssignment {
    pub name: String,
    pub domain: Algebra,
    pub target: Algebra,
    pub images: BTreeMap<Generator, Element>,
    pub metadata: BTreeMap<String, String>,
}

fn power(g: &Element, m: i64, one: &Element) -> Element {
    let base = if m < 0 { g.adjoint() } else { g.clone() };
    (0..m.unsigned_abs()).fold(one.clone(), |acc, _| acc.mul(&base))
}

impl GenAssignment {
    pub fn new(name: impl Into<String>, domain: Algebra, target: Algebra) -> Self {
        GenAssignment { name: name.into(), domain, target, images: BTreeMap::new(), metadata: BTreeMap::new() }
    }

    pub fn set(&mut self, g: Generator, image: impl Into<Element>) {
        self.images.insert(g, image.into());
    }

    pub fn image(&self, g: Generator) -> Result<&Element> {
        self.images.get(&g).ok_or_else(|| Error::MissingGenerator(format!("{g} under {}", self.name)))
    }

    /// Every domain generator has an image.
    pub fn check_complete(&self) -> Result<()> {
        for g in self.domain.generators() {
            self.image(g)?;
        }
        Ok(())
    }

    /// Image of the slot symbol `sym` placed in slot `slot`.
    fn slot_image(&self, slot: usize, sym: Sym) -> Result<Element> {
        let g = self.image(Generator::Slot(slot))?;
        let one = self.target.one();
        Ok(match sym {
            Sym::T(ToeplitzBasis::Shift(m)) | Sym::C(m) => power(g, m, &one),
            Sym::T(ToeplitzBasis::Unit(i, j)) => {
                let defect = one.sub(&g.mul(&g.adjoint()));
                power(g, i as i64, &one).mul(&defect).mul(&power(g, -(j as i64), &one))
            }
        })
    }

    /// Substitutes generator images into `x` and evaluates in the target.
    pub fn apply(&self, x: &Element) -> Result<Element> {
        match (x, &self.domain) {
            (Element::Tensor(t), Algebra::Tensor(sig)) => {
                if t.signature() != sig {
                    return Err(Error::SignatureMismatch { left: t.signature().to_string(), right: sig.to_string() });
                }
                let mut cache: HashMap<(usize, Sym), Element> = HashMap::new();
                let mut out = self.target.zero();
                for (tuple, c) in t.terms() {
                    let mut acc = self.target.one();
                    for (slot, sym) in tuple.iter().enumerate() {
                        if matches!(sym, Sym::T(ToeplitzBasis::Shift(0)) | Sym::C(0)) {
                            continue;
                        }
                        let img = match cache.entry((slot, *sym)) {
                            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
                            std::collections::hash_map::Entry::Vacant(e) => e.insert(self.slot_image(slot, *sym)?),
                        };
                        acc = acc.mul(img);
                        if acc.is_zero() {
                            break;
                        }
                    }
                    out = out.add(&acc.scale(c));
                }
                Ok(out)
            }
            (Element::Formal(p), Algebra::Graph { .. }) => {
                let one = self.target.one();
                let mut out = self.target.zero();
                for ((word, m), c) in p.terms() {
                    let mut acc = one.clone();
                    for l in word {
                        let img = match *l {
                            Letter::P(v) => self.image(Generator::Vertex(v))?.clone(),
                            Letter::S(i, j) => self.image(Generator::Edge(i, j))?.clone(),
                            Letter::Sa(i, j) => self.image(Generator::Edge(i, j))?.adjoint(),
                        };
                        acc = acc.mul(&img);
                    }
                    if *m != 0 {
                        acc = acc.mul(&power(self.image(Generator::Circle)?, *m, &one));
                    }
                    out = out.add(&acc.scale(c));
                }
                Ok(out)
            }
            _ => Err(Error::ShapeMismatch(format!("element does not live in the domain of {}", self.name))),
        }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GenAssignment) -> Result<GenAssignment> {
        if self.target != next.domain {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose {} (into {}) with {} (from {})",
                self.name, self.target, next.name, next.domain
            )));
        }
        let mut out = GenAssignment::new(format!("{}∘{}", next.name, self.name), self.domain.clone(), next.target.clone());
        for (g, img) in &self.images {
            out.images.insert(*g, next.apply(img)?);
        }
        Ok(out)
    }

    /// `self ⊗ id_{C(S¹)}`.
    pub fn with_circle(&self) -> Result<GenAssignment> {
        let domain = self.domain.with_circle()?;
        let target = self.target.with_circle()?;
        let mut out = GenAssignment::new(format!("{}⊗id", self.name), domain.clone(), target.clone());
        for (g, img) in &self.images {
            out.images.insert(*g, extend_by(img, &target));
        }
        let new_gen = match &domain {
            Algebra::Tensor(sig) => Generator::Slot(sig.len() - 1),
            Algebra::Graph { .. } => Generator::Circle,
        };
        let u = match &target {
            Algebra::Tensor(sig) => Element::Tensor(TensorElement::u(sig, sig.len() - 1, 1)?),
            Algebra::Graph { .. } => Element::Formal(FormalPoly::circle(1)),
        };
        out.images.insert(new_gen, u);
        out.metadata = self.metadata.clone();
        Ok(out)
    }

    /// `self ⊗ 1_B`: the target gains blocks, images are tensored with 1.
    pub fn extend_target(&self, blocks: &[Block]) -> Result<GenAssignment> {
        let Algebra::Tensor(tsig) = &self.target else {
            return Err(Error::ShapeMismatch("only tensor targets can be extended".into()));
        };
        let target = Algebra::Tensor(tsig.concat(&Signature::new(blocks.to_vec())));
        let label: Vec<String> = blocks.iter().map(|b| b.to_string()).collect();
        let mut out = GenAssignment::new(format!("{}⊗1_{}", self.name, label.join("")), self.domain.clone(), target.clone());
        for (g, img) in &self.images {
            out.images.insert(*g, extend_by(img, &target));
        }
        Ok(out)
    }

    /// `self ⊗ id_{𝒯^{⊗k}}`.
    pub fn tensor_with_identity(&self, k: usize) -> Result<GenAssignment> {
        let (Algebra::Tensor(dsig), Algebra::Tensor(tsig)) = (&self.domain, &self.target) else {
            return Err(Error::ShapeMismatch("tensor_with_identity needs tensor algebras".into()));
        };
        let extra = Signature::toeplitz(k);
        let domain = Algebra::Tensor(dsig.concat(&extra));
        let tsig2 = tsig.concat(&extra);
        let target = Algebra::Tensor(tsig2.clone());
        let mut out = GenAssignment::new(format!("{}⊗id_T{k}", self.name), domain, target.clone());
        for (g, img) in &self.images {
            out.images.insert(*g, extend_by(img, &target));
        }
        for i in 0..k {
            out.images.insert(
                Generator::Slot(dsig.len() + i),
                Element::Tensor(TensorElement::t(&tsig2, tsig.len() + i)?),
            );
        }
        Ok(out)
    }
}

/// Tensors an image with the identity of the extra target factors.
fn extend_by(img: &Element, target: &Algebra) -> Element {
    match (img, target) {
        (Element::Tensor(x), Algebra::Tensor(sig)) => {
            let extra = Signature::new(sig.blocks()[x.signature().blocks().len()..].to_vec());
            Element::Tensor(x.tensor(&TensorElement::one(&extra)))
        }
        (Element::Formal(p), _) => Element::Formal(p.clone()),
        _ => unreachable!("image kind follows target kind"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_substitution() {
        // identity map on 𝒯 sends e_ij to itself
        let sig = Signature::toeplitz(1);
        let alg = Algebra::Tensor(sig.clone());
        let mut id = GenAssignment::new("id", alg.clone(), alg.clone());
        id.set(Generator::Slot(0), TensorElement::t(&sig, 0).unwrap());
        let e = Element::Tensor(TensorElement::unit(&sig, 0, 2, 1).unwrap());
        assert_eq!(id.apply(&e).unwrap(), e);
        let x = Element::Tensor(TensorElement::t(&sig, 0).unwrap().adjoint().pow(3));
        assert_eq!(id.apply(&x).unwrap(), x);
    }

    #[test]
    fn missing_generator() {
        let sig = Signature::toeplitz(1);
        let alg = Algebra::Tensor(sig.clone());
        let a = GenAssignment::new("empty", alg.clone(), alg);
        assert!(matches!(a.check_complete(), Err(Error::MissingGenerator(_))));
        let x = Element::Tensor(TensorElement::t(&sig, 0).unwrap());
        assert!(matches!(a.apply(&x), Err(Error::MissingGenerator(_))));
    }
}
