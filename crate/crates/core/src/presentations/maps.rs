//! The named homomorphisms between spheres, balls and Toeplitz algebras.

use super::assignment::{Algebra, Element, GenAssignment, Generator};
use super::formal::{FormalPoly, Letter};
use super::graph::{graph_gamma, graph_sigma};
use crate::error::{Error, Result};
use crate::tensor::{Block, Signature, TensorElement};

pub const MAP_NAMES: &[&str] = &[
    "sigma", "rho", "omega", "del", "r", "p1", "p2", "pi1", "pi2", "delta", "delta_q", "circle", "ss", "ss_literal",
];

fn gen(sig: &Signature, i: usize) -> TensorElement {
    TensorElement::t(sig, i).expect("slot in range")
}

/// `1 − x x*`.
fn defect(x: &TensorElement) -> TensorElement {
    &TensorElement::one(x.signature()) - &x.mul(&x.adjoint())
}

/// `∏_{k<j} (1 − g_k g_k*)` over the first slots of `sig`.
fn defects_below(sig: &Signature, j: usize) -> TensorElement {
    (0..j).fold(TensorElement::one(sig), |acc, k| acc.mul(&defect(&gen(sig, k))))
}

/// Image of `S_{e_ij}` for `j` below the top vertex, shared by `ρ` and `ω`:
/// `g_i g_j g_j* ∏_{k<j}(1 − g_k g_k*)`.
fn edge_image(sig: &Signature, i: usize, j: usize) -> TensorElement {
    let gj = gen(sig, j);
    gen(sig, i).mul(&gj).mul(&gj.adjoint()).mul(&defects_below(sig, j))
}

fn require(name: &str, n: usize, min: usize) -> Result<()> {
    if n < min {
        Err(Error::UnsupportedIndex { name: name.into(), n: n as i64 })
    } else {
        Ok(())
    }
}

/// Builds the generator table of a named map.
///
/// - `sigma(n)`: `𝒯^{⊗n+1} → C(S^{2n+1}_H)`, `t_i ↦ s_i`.
/// - `rho(n)`, `n ≥ 1`: `C*(Γⁿ) → 𝒯^{⊗n}`.
/// - `omega(n)`: `C*(Σⁿ) → C(S^{2n+1}_H)`.
/// - `del(n)`, `r(n)`, `n ≥ 1`: boundary and half-equator restriction between
///   graph algebras (formal targets).
/// - `p1(n)`, `p2(n)`, `pi1(n)`, `pi2(n)`, `n ≥ 1`: the tubular square.
/// - `delta(n)`: the coaction on the sphere; `delta_q(n)` on `C*(Σⁿ)`.
/// - `circle`, `ss`, `ss_literal`: the small isomorphisms onto `C(S¹)` and `𝒯`.
///
/// Vertex images of `rho` and `omega` are not given explicitly by the source
/// formulas; they are derived as `S*S` of an edge ranging at the vertex.
pub fn build_map(name: &str, n: usize) -> Result<GenAssignment> {
    match name {
        "sigma" => Ok(sigma(n)),
        "rho" => {
            require(name, n, 1)?;
            Ok(rho(n))
        }
        "omega" => Ok(omega(n)),
        "del" => {
            require(name, n, 1)?;
            Ok(del(n))
        }
        "r" => {
            require(name, n, 1)?;
            Ok(restrict(n))
        }
        "p1" | "p2" | "pi1" | "pi2" => {
            require(name, n, 1)?;
            Ok(tubular(name, n))
        }
        "delta" => Ok(delta(n)),
        "delta_q" => Ok(delta_q(n)),
        "circle" => Ok(circle()),
        "ss" => Ok(ss(false)),
        "ss_literal" => Ok(ss(true)),
        _ => Err(Error::UnknownMap(name.into())),
    }
}

fn sigma(n: usize) -> GenAssignment {
    let target = Signature::sphere(n + 1);
    let mut a = GenAssignment::new(
        format!("sigma_{n}"),
        Algebra::Tensor(Signature::toeplitz(n + 1)),
        Algebra::Tensor(target.clone()),
    );
    for i in 0..=n {
        a.set(Generator::Slot(i), gen(&target, i));
    }
    a
}

/// Adds vertex images `S_e* S_e` for one chosen edge per vertex, preferring
/// the loop `e_jj` and otherwise `e_0j`.
fn derive_vertices(a: &mut GenAssignment, vertices: usize) {
    for j in 0..vertices {
        let e = if a.images.contains_key(&Generator::Edge(j, j)) { (j, j) } else { (0, j) };
        let s = a.images[&Generator::Edge(e.0, e.1)].clone();
        a.set(Generator::Vertex(j), s.adjoint().mul(&s));
    }
}

fn rho(n: usize) -> GenAssignment {
    let sig = Signature::toeplitz(n);
    let mut a = GenAssignment::new(format!("rho_{n}"), Algebra::graph(graph_gamma(n)), Algebra::Tensor(sig.clone()));
    for (i, j) in graph_gamma(n).edges() {
        let img = if j < n { edge_image(&sig, i, j) } else { gen(&sig, i).mul(&defects_below(&sig, n)) };
        a.set(Generator::Edge(i, j), img);
    }
    derive_vertices(&mut a, n + 1);
    // closed form quoted for the vertex projections
    let agrees = (0..=n).all(|j| {
        let closed = if j < n {
            let gj = gen(&sig, j);
            gj.mul(&gj.adjoint()).mul(&defects_below(&sig, j))
        } else {
            defects_below(&sig, n)
        };
        a.images[&Generator::Vertex(j)] == Element::Tensor(closed)
    });
    a.metadata.insert("vertex_images".into(), "derived as S_e* S_e".into());
    a.metadata.insert("vertex_closed_form_agrees".into(), agrees.to_string());
    a
}

fn omega(n: usize) -> GenAssignment {
    let sig = Signature::sphere(n + 1);
    let mut a = GenAssignment::new(format!("omega_{n}"), Algebra::graph(graph_sigma(n)), Algebra::Tensor(sig.clone()));
    for (i, j) in graph_sigma(n).edges() {
        a.set(Generator::Edge(i, j), edge_image(&sig, i, j));
    }
    derive_vertices(&mut a, n + 1);
    a.metadata.insert("vertex_images".into(), "derived as S_ejj* S_ejj".into());
    a
}

fn del(n: usize) -> GenAssignment {
    let mut a = GenAssignment::new(
        format!("del_{n}"),
        Algebra::graph(graph_gamma(n)),
        Algebra::graph(graph_sigma(n - 1)),
    );
    for v in 0..=n {
        let img = if v < n { FormalPoly::letter(Letter::P(v)) } else { FormalPoly::zero() };
        a.set(Generator::Vertex(v), img);
    }
    for (i, j) in graph_gamma(n).edges() {
        let img = if j < n { FormalPoly::letter(Letter::S(i, j)) } else { FormalPoly::zero() };
        a.set(Generator::Edge(i, j), img);
    }
    a
}

fn restrict(n: usize) -> GenAssignment {
    let mut a = GenAssignment::new(format!("r_{n}"), Algebra::graph(graph_sigma(n)), Algebra::graph(graph_gamma(n)));
    for v in 0..=n {
        a.set(Generator::Vertex(v), FormalPoly::letter(Letter::P(v)));
    }
    for (i, j) in graph_sigma(n).edges() {
        let img = if (i, j) == (n, n) { Letter::P(n) } else { Letter::S(i, j) };
        a.set(Generator::Edge(i, j), FormalPoly::letter(img));
    }
    a
}

/// `[C(S^{2n−1}_H), 𝒯]` and friends: a sphere or Toeplitz head plus one slot.
fn head_and(head: Block, n: usize, last: Block) -> Signature {
    let mut blocks = match head {
        Block::Sphere(_) => vec![Block::Sphere(n)],
        _ => vec![Block::Toeplitz; n],
    };
    blocks.push(last);
    Signature::new(blocks)
}

fn tubular(name: &str, n: usize) -> GenAssignment {
    let (domain, target) = match name {
        "p1" => (Signature::sphere(n + 1), head_and(Block::Sphere(n), n, Block::Toeplitz)),
        "p2" => (Signature::sphere(n + 1), head_and(Block::Toeplitz, n, Block::Circle)),
        "pi1" => (head_and(Block::Sphere(n), n, Block::Toeplitz), head_and(Block::Sphere(n), n, Block::Circle)),
        _ => (head_and(Block::Toeplitz, n, Block::Circle), head_and(Block::Sphere(n), n, Block::Circle)),
    };
    let mut a = GenAssignment::new(format!("{name}_{n}"), Algebra::Tensor(domain), Algebra::Tensor(target.clone()));
    for i in 0..n {
        a.set(Generator::Slot(i), gen(&target, i));
    }
    let last = match name {
        "p1" => gen(&target, n),
        _ => TensorElement::u(&target, n, 1).expect("circle slot"),
    };
    a.set(Generator::Slot(n), last);
    a
}

fn delta(n: usize) -> GenAssignment {
    let domain = Signature::sphere(n + 1);
    let target = domain.concat(&Signature::new(vec![Block::Circle]));
    let mut a = GenAssignment::new(format!("delta_{n}"), Algebra::Tensor(domain), Algebra::Tensor(target.clone()));
    let u = TensorElement::u(&target, n + 1, 1).expect("circle slot");
    for i in 0..=n {
        a.set(Generator::Slot(i), gen(&target, i).mul(&u));
    }
    a
}

fn delta_q(n: usize) -> GenAssignment {
    let g = graph_sigma(n);
    let mut a = GenAssignment::new(
        format!("deltaq_{n}"),
        Algebra::graph(g.clone()),
        Algebra::Graph { graph: g.clone(), circle: true },
    );
    for v in g.vertices() {
        a.set(Generator::Vertex(v), FormalPoly::letter(Letter::P(v)));
    }
    for (i, j) in g.edges() {
        a.set(Generator::Edge(i, j), FormalPoly::word(&[Letter::S(i, j)], 1));
    }
    a
}

fn circle() -> GenAssignment {
    let sig = Signature::new(vec![Block::Circle]);
    let mut a = GenAssignment::new("circle", Algebra::graph(graph_sigma(0)), Algebra::Tensor(sig.clone()));
    a.set(Generator::Edge(0, 0), TensorElement::u(&sig, 0, 1).expect("circle slot"));
    a.set(Generator::Vertex(0), TensorElement::one(&sig));
    a
}

/// `C*(Γ¹) → 𝒯`. The literal table sends `P_{v_1}` to `1 − t*`, which is not
/// a projection; the corrected table uses `1 − t t*`.
fn ss(literal: bool) -> GenAssignment {
    let sig = Signature::toeplitz(1);
    let t = gen(&sig, 0);
    let one = TensorElement::one(&sig);
    let name = if literal { "ss_literal" } else { "ss" };
    let mut a = GenAssignment::new(name, Algebra::graph(graph_gamma(1)), Algebra::Tensor(sig.clone()));
    a.set(Generator::Edge(0, 0), t.mul(&t).mul(&t.adjoint()));
    a.set(Generator::Edge(0, 1), t.mul(&defect(&t)));
    a.set(Generator::Vertex(0), t.mul(&t.adjoint()));
    let p1 = if literal { &one - &t.adjoint() } else { defect(&t) };
    a.set(Generator::Vertex(1), p1);
    if literal {
        a.metadata.insert("note".into(), "literal table: P_v1 -> 1 - t*".into());
    }
    a
}

/// The gauging automorphism on a tensor algebra with a circle slot, as a
/// generator table: every other generator picks up `u` (or `u*` for the
/// inverse).
pub fn gauge_map(sig: &Signature, circle_slot: usize, inverse: bool) -> Result<GenAssignment> {
    let u = TensorElement::u(sig, circle_slot, if inverse { -1 } else { 1 })?;
    let alg = Algebra::Tensor(sig.clone());
    let mut a = GenAssignment::new(if inverse { "phi^-1" } else { "phi" }, alg.clone(), alg);
    for i in 0..sig.len() {
        let g = match sig.kind(i)? {
            crate::tensor::SlotKind::Toeplitz => gen(sig, i).mul(&u),
            crate::tensor::SlotKind::Circle if i == circle_slot => TensorElement::u(sig, i, 1)?,
            crate::tensor::SlotKind::Circle => TensorElement::u(sig, i, 1)?.mul(&u),
        };
        a.set(Generator::Slot(i), g);
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(a: &GenAssignment, g: Generator) -> TensorElement {
        a.image(g).unwrap().as_tensor().unwrap().clone()
    }

    #[test]
    fn p1_table() {
        let a = build_map("p1", 2).unwrap();
        let sig = a.target.signature().unwrap().clone();
        assert_eq!(sig.to_string(), "S2,T");
        assert_eq!(t(&a, Generator::Slot(0)), gen(&sig, 0));
        assert_eq!(t(&a, Generator::Slot(2)), gen(&sig, 2));
    }

    #[test]
    fn rho_edge_to_top() {
        let a = build_map("rho", 2).unwrap();
        let sig = Signature::toeplitz(2);
        let expected = gen(&sig, 0).mul(&defect(&gen(&sig, 0))).mul(&defect(&gen(&sig, 1)));
        assert_eq!(t(&a, Generator::Edge(0, 2)), expected);
        assert!(!expected.is_zero());
        assert_eq!(a.metadata["vertex_closed_form_agrees"], "true");
    }

    #[test]
    fn delta_table() {
        let a = build_map("delta", 1).unwrap();
        let sig = a.target.signature().unwrap().clone();
        let expected = gen(&sig, 1).mul(&TensorElement::u(&sig, 2, 1).unwrap());
        assert_eq!(t(&a, Generator::Slot(1)), expected);
    }

    #[test]
    fn errors() {
        assert!(matches!(build_map("nope", 1), Err(Error::UnknownMap(_))));
        assert!(matches!(build_map("rho", 0), Err(Error::UnsupportedIndex { .. })));
    }

    #[test]
    fn literal_vertex_is_not_projection() {
        let a = build_map("ss_literal", 1).unwrap();
        assert!(!a.image(Generator::Vertex(1)).unwrap().is_projection());
        let b = build_map("ss", 1).unwrap();
        assert!(b.image(Generator::Vertex(1)).unwrap().is_projection());
    }
}
