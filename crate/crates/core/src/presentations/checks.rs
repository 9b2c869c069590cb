//! Relation checks, commuting squares and sampled injectivity.

use rand::Rng;
use serde_json::json;

use super::assignment::{Algebra, Element, GenAssignment, Generator};
use super::formal::{FormalPoly, Letter};
use super::graph::{graph_gamma, Graph};
use super::maps::build_map;
use crate::error::{Error, Result};
use crate::report::{Tally, VerificationReport};
use crate::sampling::{self, nonzero_coeff};
use crate::tensor::{Block, Signature, SlotKind, TensorElement};

/// Which vertices must satisfy the Cuntz–Krieger sum relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SinkRule {
    /// Sinks are exempt, as the definition requires.
    #[default]
    ExemptSinks,
    /// Also impose the sum relation at sinks (an empty sum). Wrong; kept as a
    /// fault to show the checker notices.
    EnforceAtSinks,
}

pub fn ck_check(g: &Graph, a: &GenAssignment) -> Result<VerificationReport> {
    ck_check_with(g, a, SinkRule::ExemptSinks)
}

/// Checks the Cuntz–Krieger relations for the images in `a`: vertex images
/// are mutually orthogonal projections, `S_e* S_e = P_{r(e)}`, and
/// `Σ_{s(e)=v} S_e S_e* = P_v` at every vertex that is not a sink.
pub fn ck_check_with(g: &Graph, a: &GenAssignment, rule: SinkRule) -> Result<VerificationReport> {
    let p = |v: usize| a.image(Generator::Vertex(v)).cloned();
    let s = |e: (usize, usize)| a.image(Generator::Edge(e.0, e.1)).cloned();
    let mut tally = Tally::new();
    for v in g.vertices() {
        let pv = p(v)?;
        let (adj, sq) = (pv.adjoint(), pv.mul(&pv));
        tally.record(
            adj == pv && sq == pv,
            || format!("P_v{v} is a projection (P = P* = P^2)"),
            || json!({"P": pv.to_string(), "P*": adj.to_string(), "P^2": sq.to_string()}),
        );
    }
    for v in g.vertices() {
        let pv = p(v)?;
        for w in (v + 1)..g.vertex_count() {
            let prod = pv.mul(&p(w)?);
            let zero = a.target.zero();
            tally.equal(|| format!("P_v{v} P_v{w} = 0"), &prod, &zero);
        }
    }
    for e in g.edges() {
        let se = s(e)?;
        tally.equal(
            || format!("S_e{}{}* S_e{}{} = P_v{}", e.0, e.1, e.0, e.1, e.1),
            &se.adjoint().mul(&se),
            &p(Graph::range(e))?,
        );
    }
    for v in g.vertices() {
        if g.is_sink(v) && rule == SinkRule::ExemptSinks {
            continue;
        }
        let mut sum = a.target.zero();
        for e in g.out_edges(v) {
            let se = s(e)?;
            sum = sum.add(&se.mul(&se.adjoint()));
        }
        tally.equal(|| format!("sum of S_e S_e* over s(e) = v{v} equals P_v{v}"), &sum, &p(v)?);
    }
    let mut report = VerificationReport::new("ck_check")
        .meta("graph", g.name.clone())
        .meta("map", a.name.clone())
        .with_tally(tally);
    for (k, v) in &a.metadata {
        report = report.meta(k, v.clone());
    }
    Ok(report)
}

/// Sphere-presentation analogue of [`ck_check`] for maps out of a tensor
/// algebra: generator images of Toeplitz slots are isometries, of circle
/// slots unitaries, images of different slots commute and *-commute, and each
/// sphere block satisfies `∏ (1 − g_k g_k*) = 0`.
pub fn presentation_check(a: &GenAssignment) -> Result<VerificationReport> {
    let Algebra::Tensor(dsig) = &a.domain else {
        return Err(Error::ShapeMismatch("presentation_check needs a tensor domain".into()));
    };
    let one = a.target.one();
    let zero = a.target.zero();
    let g = |i: usize| a.image(Generator::Slot(i)).cloned();
    let mut tally = Tally::new();
    for i in 0..dsig.len() {
        let gi = g(i)?;
        tally.equal(|| format!("g{i}* g{i} = 1"), &gi.adjoint().mul(&gi), &one);
        if dsig.kind(i)? == SlotKind::Circle {
            tally.equal(|| format!("g{i} g{i}* = 1"), &gi.mul(&gi.adjoint()), &one);
        }
        for j in (i + 1)..dsig.len() {
            let gj = g(j)?;
            tally.equal(|| format!("[g{i}, g{j}] = 0"), &gi.mul(&gj), &gj.mul(&gi));
            tally.equal(|| format!("[g{i}, g{j}*] = 0"), &gi.mul(&gj.adjoint()), &gj.adjoint().mul(&gi));
        }
    }
    for &(lo, hi) in dsig.sphere_ranges() {
        let mut prod = one.clone();
        for k in lo..hi {
            let gk = g(k)?;
            prod = prod.mul(&one.sub(&gk.mul(&gk.adjoint())));
        }
        tally.equal(|| format!("prod over slots {lo}..{hi} of (1 - g g*) = 0"), &prod, &zero);
    }
    Ok(VerificationReport::new("presentation_check").meta("map", a.name.clone()).with_tally(tally))
}

/// One arrow of a composite path.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Step {
    Map(GenAssignment),
    /// Gauging automorphism onto the circle slot.
    Gauge(usize),
    GaugeInverse(usize),
}

impl Step {
    fn label(&self) -> String {
        match self {
            Step::Map(a) => a.name.clone(),
            Step::Gauge(_) => "phi".into(),
            Step::GaugeInverse(_) => "phi^-1".into(),
        }
    }
}

fn run(path: &[Step], x: Element) -> Result<Element> {
    let mut cur = x;
    for step in path {
        cur = match (step, cur) {
            (Step::Map(a), c) => a.apply(&c)?,
            (Step::Gauge(slot), Element::Tensor(t)) => Element::Tensor(t.gauge_move(*slot)?),
            (Step::GaugeInverse(slot), Element::Tensor(t)) => Element::Tensor(t.gauge_move_inverse(*slot)?),
            (Step::Gauge(_), Element::Formal(p)) => Element::Formal(p.gauge_move()),
            (Step::GaugeInverse(_), Element::Formal(_)) => {
                return Err(Error::ShapeMismatch("inverse gauge on formal elements".into()))
            }
        };
    }
    Ok(cur)
}

fn path_label(path: &[Step]) -> String {
    let names: Vec<String> = path.iter().rev().map(Step::label).collect();
    names.join("∘")
}

/// Checks `bottom ∘ left = right ∘ top` on every generator of `domain`.
///
/// When both sides are formal graph-algebra elements that do not agree
/// formally, they are compared again after applying `fallback`, an injective
/// map into a tensor algebra.
pub fn square_commutes(
    domain: &Algebra,
    top: &[Step],
    right: &[Step],
    left: &[Step],
    bottom: &[Step],
    fallback: Option<&GenAssignment>,
) -> Result<(VerificationReport, Tally)> {
    let mut tally = Tally::new();
    let mut via_fallback = 0usize;
    for g in domain.generators() {
        let x = domain.generator_element(g)?;
        let lhs = run(bottom, run(left, x.clone())?)?;
        let rhs = run(right, run(top, x)?)?;
        let mut ok = lhs == rhs;
        if !ok {
            if let (Element::Formal(_), Some(f)) = (&lhs, fallback) {
                ok = f.apply(&lhs)? == f.apply(&rhs)?;
                via_fallback += 1;
            }
        }
        tally.record(
            ok,
            || format!("generator {g}"),
            || json!({"generator": g.to_string(), "lhs": lhs.to_string(), "rhs": rhs.to_string()}),
        );
    }
    let lhs_path = [left, bottom].concat();
    let rhs_path = [top, right].concat();
    let report = VerificationReport::new("square")
        .meta("domain", domain.to_string())
        .meta("lhs", path_label(&lhs_path))
        .meta("rhs", path_label(&rhs_path))
        .meta("compared_via_fallback", via_fallback as u64);
    Ok((report, tally))
}

fn m(name: &str, n: usize) -> Result<Step> {
    Ok(Step::Map(build_map(name, n)?))
}

fn finish(check: &str, n: usize, (report, tally): (VerificationReport, Tally)) -> VerificationReport {
    let mut r = report.with_tally(tally);
    r.check = check.into();
    r.param("n", n as i64)
}

/// Tubular square: `π₂ p₂ = π₁ p₁` on `C(S^{2n+1}_H)`.
pub fn square_mpull(n: usize) -> Result<VerificationReport> {
    let domain = Algebra::Tensor(Signature::sphere(n + 1));
    let res = square_commutes(&domain, &[m("p1", n)?], &[m("pi1", n)?], &[m("p2", n)?], &[m("pi2", n)?], None)?;
    Ok(finish("square_mpull", n, res))
}

/// The gauged square with `k` extra Toeplitz factors. Also checks that the
/// conjugated `π₂^k` equals `π₂ ⊗ id` on generators.
pub fn square_mpull_gauged(n: usize, k: usize) -> Result<VerificationReport> {
    let p1 = build_map("p1", n)?.tensor_with_identity(k)?;
    let p2 = build_map("p2", n)?.tensor_with_identity(k)?;
    let pi1 = build_map("pi1", n)?.tensor_with_identity(k)?;
    let pi2 = build_map("pi2", n)?.tensor_with_identity(k)?;
    let c = n; // circle slot in both lower algebras
    let domain = p1.domain.clone();
    let (report, mut tally) = square_commutes(
        &domain,
        &[Step::Map(p1)],
        &[Step::Map(pi1), Step::Gauge(c)],
        &[Step::Map(p2), Step::Gauge(c)],
        &[Step::GaugeInverse(c), Step::Map(pi2.clone()), Step::Gauge(c)],
        None,
    )?;
    let conj = [Step::GaugeInverse(c), Step::Map(pi2.clone()), Step::Gauge(c)];
    for g in pi2.domain.generators() {
        let x = pi2.domain.generator_element(g)?;
        let lhs = run(&conj, x.clone())?;
        let rhs = pi2.apply(&x)?;
        tally.equal(|| format!("phi pi2 phi^-1 = pi2 on {g}"), &lhs, &rhs);
    }
    Ok(finish("square_mpull_gauged", n, (report, tally)).param("k", k as i64))
}

/// `σ_{n−1} ρ_n = ω_{n−1} ∂_n` on `C*(Γⁿ)`, with the vanishing of
/// `σ_{n−1} ρ_n(S_{e_in})` recorded separately.
pub fn square_ballpullback(n: usize) -> Result<VerificationReport> {
    let domain = Algebra::graph(graph_gamma(n));
    let rho = build_map("rho", n)?;
    let sigma = build_map("sigma", n - 1)?;
    let (report, mut tally) =
        square_commutes(&domain, &[Step::Map(rho.clone())], &[Step::Map(sigma.clone())], &[m("del", n)?], &[m("omega", n - 1)?], None)?;
    for i in 0..n {
        let img = sigma.apply(rho.image(Generator::Edge(i, n))?)?;
        tally.record(
            img.is_zero(),
            || format!("sigma rho(S_e{i}{n}) = 0"),
            || json!({"value": img.to_string()}),
        );
    }
    Ok(finish("square_ballpullback", n, (report, tally)))
}

/// `δ ∘ ∂r = (∂ ⊗ id)(r ⊗ id) δ` between graph algebras, compared formally
/// and, where needed, through `ω_{n−1} ⊗ id`.
pub fn square_vs_spheres(n: usize) -> Result<VerificationReport> {
    let domain = Algebra::graph(super::graph::graph_sigma(n));
    let fallback = build_map("omega", n - 1)?.with_circle()?;
    let res = square_commutes(
        &domain,
        &[m("r", n)?, m("del", n)?],
        &[m("delta_q", n - 1)?],
        &[m("delta_q", n)?, Step::Map(build_map("r", n)?.with_circle()?)],
        &[Step::Map(build_map("del", n)?.with_circle()?)],
        Some(&fallback),
    )?;
    Ok(finish("square_vs_spheres", n, res))
}

/// The four faces connecting the quantum-sphere diamond to the multipullback
/// diamond.
pub fn face_induction(n: usize, face: usize) -> Result<VerificationReport> {
    let check = format!("face_induction_{face}");
    let res = match face {
        1 => {
            let domain = Algebra::graph(super::graph::graph_sigma(n));
            square_commutes(
                &domain,
                &[m("omega", n)?],
                &[m("p2", n)?, Step::Gauge(n)],
                &[m("delta_q", n)?, Step::Map(build_map("r", n)?.with_circle()?)],
                &[Step::Map(build_map("rho", n)?.with_circle()?)],
                None,
            )?
        }
        2 => {
            let domain = Algebra::graph(super::graph::graph_sigma(n));
            let (report, mut tally) = square_commutes(
                &domain,
                &[m("omega", n)?],
                &[m("p1", n)?],
                &[m("r", n)?, m("del", n)?],
                &[Step::Map(build_map("omega", n - 1)?.extend_target(&[Block::Toeplitz])?)],
                None,
            )?;
            let top = build_map("p1", n)?.apply(build_map("omega", n)?.image(Generator::Edge(0, n))?)?;
            tally.record(top.is_zero(), || format!("p1 omega(S_e0{n}) = 0"), || json!({"value": top.to_string()}));
            (report, tally)
        }
        3 => {
            let domain = Algebra::graph(graph_gamma(n)).with_circle()?;
            square_commutes(
                &domain,
                &[Step::Map(build_map("rho", n)?.with_circle()?)],
                &[Step::Map(build_map("sigma", n - 1)?.with_circle()?)],
                &[Step::Map(build_map("del", n)?.with_circle()?)],
                &[Step::Map(build_map("omega", n - 1)?.with_circle()?)],
                None,
            )?
        }
        4 => {
            let domain = Algebra::graph(super::graph::graph_sigma(n - 1));
            square_commutes(
                &domain,
                &[Step::Map(build_map("omega", n - 1)?.extend_target(&[Block::Toeplitz])?)],
                &[m("pi1", n)?, Step::Gauge(n)],
                &[m("delta_q", n - 1)?],
                &[Step::Map(build_map("omega", n - 1)?.with_circle()?)],
                None,
            )?
        }
        _ => return Err(Error::IndexOutOfRange(format!("face {face}"))),
    };
    Ok(finish(&check, n, res))
}

/// U(1)-equivariance on generators: every image is homogeneous of the
/// generator's degree. `r_n` is reported separately since it is not
/// equivariant; `∂_n r_n` is. The coactions `δ` and `δ_q` instead carry the
/// generator's degree on their circle factor.
pub fn equivariance(n: usize) -> Result<VerificationReport> {
    let mut tally = Tally::new();
    let mut maps = vec![
        build_map("sigma", n)?,
        build_map("rho", n)?,
        build_map("omega", n)?,
        build_map("del", n)?,
        build_map("p1", n)?,
        build_map("p2", n)?,
        build_map("pi1", n)?,
        build_map("pi2", n)?,
    ];
    maps.push(build_map("r", n)?.then(&build_map("del", n)?)?);
    for a in &maps {
        for (g, img) in &a.images {
            let degs = img.degrees();
            let ok = degs.iter().all(|d| *d == g.degree());
            tally.record(
                ok,
                || format!("{} on {g}", a.name),
                || json!({"map": a.name, "generator": g.to_string(), "degrees": degs}),
            );
        }
    }
    for a in [build_map("delta", n)?, build_map("delta_q", n)?] {
        for (g, img) in &a.images {
            let degs = img.circle_degrees();
            let ok = !img.is_zero() && degs.iter().all(|d| *d == g.degree());
            tally.record(
                ok,
                || format!("{} on {g} (circle factor)", a.name),
                || json!({"map": a.name, "generator": g.to_string(), "circle_degrees": degs}),
            );
        }
    }
    let r = build_map("r", n)?;
    let r_equivariant = r.images.iter().all(|(g, img)| img.degrees().iter().all(|d| *d == g.degree()));
    Ok(VerificationReport::new("equivariance")
        .param("n", n as i64)
        .meta("r_n_equivariant", r_equivariant)
        .with_tally(tally))
}

/// Paths `μ` in a graph, as edge lists.
fn random_path_into<R: Rng>(rng: &mut R, g: &Graph, end: usize, len: usize) -> Vec<(usize, usize)> {
    let mut path = Vec::with_capacity(len);
    let mut v = end;
    for _ in 0..len {
        let ins = g.in_edges(v);
        let e = ins[rng.gen_range(0..ins.len())];
        path.push(e);
        v = e.0;
    }
    path.reverse();
    path
}

/// The special edge of a vertex: its last outgoing edge.
fn special_edge(g: &Graph, v: usize) -> Option<(usize, usize)> {
    g.out_edges(v).last().copied()
}

fn word_element(mu: &[(usize, usize)], nu: &[(usize, usize)], end: usize) -> FormalPoly {
    let mut w: Vec<Letter> = mu.iter().map(|&(i, j)| Letter::S(i, j)).collect();
    if mu.is_empty() && nu.is_empty() {
        w.push(Letter::P(end));
    }
    w.extend(nu.iter().rev().map(|&(i, j)| Letter::Sa(i, j)));
    FormalPoly::word(&w, 0)
}

fn admissible(g: &Graph, mu: &[(usize, usize)], nu: &[(usize, usize)]) -> bool {
    match (mu.last(), nu.last()) {
        (Some(a), Some(b)) if a == b => Some(*a) != special_edge(g, a.0),
        _ => true,
    }
}

fn all_paths_into(g: &Graph, end: usize, len: usize) -> Vec<Vec<(usize, usize)>> {
    if len == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for e in g.in_edges(end) {
        for mut p in all_paths_into(g, e.0, len - 1) {
            p.push(e);
            out.push(p);
        }
    }
    out
}

/// Falsification test for injectivity of a map out of a graph algebra.
///
/// Inputs are nonzero combinations of words `S_μ S_ν*` with `r(μ) = r(ν)`,
/// skipping pairs that end in the same special edge (these are dependent via
/// the sum relation). A deterministic prefix covers every word with
/// `|μ| + |ν| ≤ 2` and the pairwise differences of edge generators; then
/// `samples` random combinations of up to four words of total length ≤ 6
/// follow. A nonzero input with zero image refutes injectivity.
pub fn injectivity_sample(a: &GenAssignment, samples: usize, seed: u64) -> Result<VerificationReport> {
    let Algebra::Graph { graph: g, .. } = &a.domain else {
        return Err(Error::ShapeMismatch("injectivity_sample needs a graph domain".into()));
    };
    let mut tally = Tally::new();
    let probe = |x: &FormalPoly, tally: &mut Tally| -> Result<()> {
        if x.is_zero() {
            return Ok(());
        }
        let img = a.apply(&Element::Formal(x.clone()))?;
        tally.record(
            !img.is_zero(),
            || format!("nonzero input {x} has zero image"),
            || json!({"input": x.to_string()}),
        );
        Ok(())
    };
    let mut words = Vec::new();
    for end in g.vertices() {
        for total in 0..=2 {
            for lm in 0..=total {
                for mu in all_paths_into(g, end, lm) {
                    for nu in all_paths_into(g, end, total - lm) {
                        if admissible(g, &mu, &nu) {
                            words.push(word_element(&mu, &nu, end));
                        }
                    }
                }
            }
        }
    }
    for w in &words {
        probe(w, &mut tally)?;
    }
    let edges: Vec<_> = g.edges().collect();
    for (x, e) in edges.iter().enumerate() {
        for f in &edges[x + 1..] {
            let d = FormalPoly::letter(Letter::S(e.0, e.1)).sub(&FormalPoly::letter(Letter::S(f.0, f.1)));
            probe(&d, &mut tally)?;
        }
    }
    let prefix = tally.checked;
    let mut rng = sampling::rng(seed);
    for _ in 0..samples {
        let k = rng.gen_range(1..=4);
        let mut x = FormalPoly::zero();
        for _ in 0..k {
            let end = rng.gen_range(0..g.vertex_count());
            let total = rng.gen_range(0..=6);
            let lm = rng.gen_range(0..=total);
            let mu = random_path_into(&mut rng, g, end, lm);
            let nu = random_path_into(&mut rng, g, end, total - lm);
            if !admissible(g, &mu, &nu) {
                continue;
            }
            x = x.add(&word_element(&mu, &nu, end).scale(&nonzero_coeff(&mut rng)));
        }
        probe(&x, &mut tally)?;
    }
    Ok(VerificationReport::new("injectivity")
        .meta("map", a.name.clone())
        .meta("deterministic_probes", prefix as u64)
        .meta("seed", seed)
        .summary(format!("{} nonzero inputs probed; passing is evidence, not proof", tally.checked))
        .with_tally(tally))
}

/// A deliberately non-injective variant of `ρ_n`: `S_{e_01}` gets the image
/// of `S_{e_00}`.
pub fn collapsed_rho(n: usize) -> Result<GenAssignment> {
    let mut a = build_map("rho", n)?;
    let img = a.image(Generator::Edge(0, 0))?.clone();
    a.set(Generator::Edge(0, 1), img);
    a.name = format!("rho_{n}_collapsed");
    Ok(a)
}

/// Compact operators in the image of `ρ_n`: `Q = ρ_n(P_{v_n})` is nonzero
/// with vanishing symbol in every slot, `x_i = Σ_j ρ_n(S_{e_ij})` equals
/// `t_i ∏_{k<i}(1 − t_k t_k*)`, and every matrix-unit tuple with indices
/// `≤ 2` is found as `x^a Q (x*)^b` by bounded search.
pub fn compacts_in_image(n: usize) -> Result<VerificationReport> {
    let rho = build_map("rho", n)?;
    let sig = Signature::toeplitz(n);
    let tensor = |e: &Element| e.as_tensor().cloned().expect("tensor target");
    let q = tensor(rho.image(Generator::Vertex(n))?);
    let mut tally = Tally::new();
    tally.record(!q.is_zero(), || "Q is nonzero".into(), || json!({}));
    for slot in 0..n {
        let sym = q.symbol_at(slot)?;
        tally.record(sym.is_zero(), || format!("symbol of Q in slot {slot} vanishes"), || json!({"symbol": sym.to_string()}));
    }
    let one = TensorElement::one(&sig);
    let mut xs = Vec::new();
    for i in 0..n {
        let mut x = TensorElement::zero(&sig);
        for j in i..=n {
            x = &x + &tensor(rho.image(Generator::Edge(i, j))?);
        }
        let mut closed = TensorElement::t(&sig, i)?;
        for k in 0..i {
            let tk = TensorElement::t(&sig, k)?;
            closed = closed.mul(&(&one - &tk.mul(&tk.adjoint())));
        }
        tally.equal(|| format!("x_{i} closed form"), &x, &closed);
        xs.push(x);
    }
    // all exponent vectors in {0,1,2}^n
    let vectors: Vec<Vec<u32>> = (0..3usize.pow(n as u32))
        .map(|mut c| {
            (0..n)
                .map(|_| {
                    let d = (c % 3) as u32;
                    c /= 3;
                    d
                })
                .collect()
        })
        .collect();
    let left = |a: &[u32]| xs.iter().zip(a).fold(one.clone(), |acc, (x, &e)| acc.mul(&x.pow(e)));
    let right = |b: &[u32]| xs.iter().zip(b).rev().fold(one.clone(), |acc, (x, &e)| acc.mul(&x.adjoint().pow(e)));
    let target = |a: &[u32], b: &[u32]| {
        TensorElement::product_of_slots(
            &sig,
            &(0..n).map(|k| (k, crate::toeplitz::ToeplitzElement::unit(a[k], b[k]))).collect::<Vec<_>>(),
        )
        .expect("toeplitz slots")
    };
    let zeros = vec![0u32; n];
    let mut found = 0usize;
    for a in &vectors {
        for b in &vectors {
            let goal = target(a, b);
            // search the left factor against the column e_{a,0} and the right
            // factor against the row e_{0,b}
            let la = vectors.iter().find(|c| left(c).mul(&q) == target(a, &zeros));
            let rb = vectors.iter().find(|c| q.mul(&right(c)) == target(&zeros, b));
            let ok = match (la, rb) {
                (Some(c), Some(d)) => left(c).mul(&q).mul(&right(d)) == goal,
                _ => false,
            };
            if ok {
                found += 1;
            }
            tally.record(ok, || format!("e{a:?},{b:?} in the image"), || json!({"a": a, "b": b}));
        }
    }
    Ok(VerificationReport::new("compacts_in_image")
        .param("n", n as i64)
        .meta("matrix_units_found", found as u64)
        .with_tally(tally))
}

/// The amended corner-unitary statement in `C(S^{2n+1}_H)`: with
/// `Q = ∏_{k<n}(1 − s_k s_k*)` and `U = s_n Q`, `U*U = UU* = Q` is a
/// projection, and `W = U + (1 − U*U)` is a unitary equal to `ω_n` of
/// `S_{e_nn} + (1 − S_{e_nn} S_{e_nn}*)`. For `n ≥ 1` the projection `Q` is
/// not `1`, so `U` itself is only a partial isometry.
pub fn corner_unitary(n: usize) -> Result<VerificationReport> {
    let sig = Signature::sphere(n + 1);
    let one = TensorElement::one(&sig);
    let mut q = one.clone();
    for k in 0..n {
        let sk = TensorElement::t(&sig, k)?;
        q = q.mul(&(&one - &sk.mul(&sk.adjoint())));
    }
    let u = TensorElement::t(&sig, n)?.mul(&q);
    let mut tally = Tally::new();
    tally.equal(|| "U*U = Q".into(), &u.adjoint().mul(&u), &q);
    tally.equal(|| "UU* = Q".into(), &u.mul(&u.adjoint()), &q);
    tally.record(q.is_projection(), || "Q is a projection".into(), || json!({"Q": q.to_string()}));
    let w = &u + &(&one - &u.adjoint().mul(&u));
    tally.equal(|| "W*W = 1".into(), &w.adjoint().mul(&w), &one);
    tally.equal(|| "WW* = 1".into(), &w.mul(&w.adjoint()), &one);
    let omega = build_map("omega", n)?;
    let s_nn = omega.image(Generator::Edge(n, n))?.as_tensor().cloned().expect("tensor target");
    tally.equal(|| "omega(S_enn) = U".into(), &s_nn, &u);
    let lifted = &s_nn + &(&one - &s_nn.mul(&s_nn.adjoint()));
    tally.equal(|| "omega(S_enn + 1 - S_enn S_enn*) = W".into(), &lifted, &w);
    let q_is_one = q == one;
    if n >= 1 {
        tally.record(!q_is_one, || "Q differs from 1".into(), || json!({}));
    }
    let note = if q_is_one {
        "Q = 1, so U is unitary"
    } else {
        "U is a partial isometry with U*U = UU* = Q != 1; the unitary generator is W = U + (1 - U*U)"
    };
    Ok(VerificationReport::new("corner_unitary")
        .param("n", n as i64)
        .meta("phrasing_flag", "the source calls U itself unitary")
        .meta("finding", note)
        .with_tally(tally))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::graph::graph_sigma;

    #[test]
    fn corrected_ss_passes_literal_fails() {
        let g = graph_gamma(1);
        assert!(ck_check(&g, &build_map("ss", 1).unwrap()).unwrap().passed());
        let r = ck_check(&g, &build_map("ss_literal", 1).unwrap()).unwrap();
        assert!(!r.passed());
        let w = r.witness.unwrap();
        assert!(w["relation"].as_str().unwrap().contains("P_v1"));
    }

    #[test]
    fn circle_map() {
        assert!(ck_check(&graph_sigma(0), &build_map("circle", 0).unwrap()).unwrap().passed());
    }

    #[test]
    fn rho_and_omega_small() {
        for n in 1..=2 {
            assert!(ck_check(&graph_gamma(n), &build_map("rho", n).unwrap()).unwrap().passed(), "rho {n}");
            assert!(ck_check(&graph_sigma(n), &build_map("omega", n).unwrap()).unwrap().passed(), "omega {n}");
        }
    }

    #[test]
    fn sink_fault_detected() {
        let r = ck_check_with(&graph_gamma(1), &build_map("rho", 1).unwrap(), SinkRule::EnforceAtSinks).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn squares_small() {
        assert!(square_mpull(1).unwrap().passed());
        assert!(square_ballpullback(1).unwrap().passed());
        assert!(square_vs_spheres(1).unwrap().passed());
        for f in 1..=4 {
            let r = face_induction(1, f).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn apply_examples() {
        let omega = build_map("omega", 2).unwrap();
        let s00 = FormalPoly::letter(Letter::S(0, 0));
        let x = omega.apply(&Element::Formal(s00.adjoint().mul(&s00))).unwrap();
        let sig = Signature::sphere(3);
        let s0 = TensorElement::t(&sig, 0).unwrap();
        assert_eq!(x, Element::Tensor(s0.mul(&s0.adjoint())));

        let sigma = build_map("sigma", 2).unwrap();
        let tsig = Signature::toeplitz(3);
        let w = TensorElement::t(&tsig, 0).unwrap().mul(&TensorElement::t(&tsig, 1).unwrap().adjoint());
        let img = sigma.apply(&Element::Tensor(w)).unwrap();
        let s1 = TensorElement::t(&sig, 1).unwrap();
        assert_eq!(img, Element::Tensor(s0.mul(&s1.adjoint())));

        let dr = build_map("r", 2).unwrap().then(&build_map("del", 2).unwrap()).unwrap();
        assert!(dr.image(Generator::Edge(2, 2)).unwrap().is_zero());
    }

    #[test]
    fn injectivity_detects_collapse() {
        assert!(injectivity_sample(&build_map("rho", 1).unwrap(), 20, 7).unwrap().passed());
        assert!(!injectivity_sample(&collapsed_rho(1).unwrap(), 5, 7).unwrap().passed());
    }

    #[test]
    fn corner_unitary_small() {
        for n in 0..=2 {
            assert!(corner_unitary(n).unwrap().passed());
        }
    }
}
