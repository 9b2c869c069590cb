//! Truncated matrix shadows of symbolic elements.
//!
//! Each Toeplitz slot is compressed to `ℂ^N`; circle slots are evaluated at
//! sample points on the unit circle. The compressed shift is only an isometry
//! away from the last index, so comparisons are made on an interior window:
//! every row and column coordinate must be `< N − D`, where `D` bounds the
//! total shift a product can move an index by. Inside that window truncation
//! cannot change an entry.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde_json::json;

use crate::error::{Error, Result};
use crate::rational::{ratio, to_f64};
use crate::report::{Tally, VerificationReport};
use crate::tensor::{Signature, SlotKind, Sym, TensorElement};
use crate::toeplitz::{Reduction, ToeplitzBasis};

#[derive(Clone, Debug)]
pub struct TruncationSpec {
    /// Truncation size per Toeplitz slot.
    pub n: usize,
    pub circle_points: Vec<Complex64>,
    /// Lower bound on the window margin; the effective margin is the larger
    /// of this and the shift bound of the expression.
    pub margin: usize,
}

impl TruncationSpec {
    pub fn new(n: usize, circle_points: Vec<Complex64>, margin: usize) -> Result<Self> {
        if n < 2 * margin + 2 {
            return Err(Error::Config(format!("truncation N = {n} is below 2*margin + 2 = {}", 2 * margin + 2)));
        }
        if circle_points.is_empty() {
            return Err(Error::Config("at least one circle sample point is required".into()));
        }
        if let Some(z) = circle_points.iter().find(|z| (z.norm() - 1.0).abs() > 1e-14) {
            return Err(Error::Config(format!("circle sample {z} is not of modulus one")));
        }
        Ok(TruncationSpec { n, circle_points, margin })
    }

    /// `N` with four seeded circle points and no minimum margin.
    pub fn seeded(n: usize, seed: u64) -> Result<Self> {
        let points = crate::sampling::unit_circle_points(&mut crate::sampling::rng(seed), 4);
        Self::new(n, points, 0)
    }

    /// Circle values used for sample `p`: circle slot `c` takes point
    /// `(p + c) mod len`, so distinct slots see distinct values.
    fn sample(&self, p: usize, circle_slots: usize) -> Vec<Complex64> {
        (0..circle_slots).map(|c| self.circle_points[(p + c) % self.circle_points.len()]).collect()
    }
}

/// Coordinate-list matrix on `(ℂ^N)^{⊗T}` where `T` is the number of Toeplitz
/// slots, for one choice of circle values.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseRep {
    pub n: usize,
    pub toeplitz_slots: usize,
    pub sample: Vec<Complex64>,
    pub entries: BTreeMap<(usize, usize), Complex64>,
    /// Equal to its conjugate transpose up to `1e-14`.
    pub hermitian: bool,
}

impl SparseRep {
    pub fn dim(&self) -> usize {
        self.n.pow(self.toeplitz_slots as u32)
    }

    fn from_entries(n: usize, toeplitz_slots: usize, sample: Vec<Complex64>, mut entries: BTreeMap<(usize, usize), Complex64>) -> Self {
        entries.retain(|_, v| *v != Complex64::new(0.0, 0.0));
        let hermitian = entries.iter().all(|(&(r, c), v)| {
            let w = entries.get(&(c, r)).copied().unwrap_or_default();
            (v - w.conj()).norm() <= 1e-14
        });
        SparseRep { n, toeplitz_slots, sample, entries, hermitian }
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries.get(&(r, c)).copied().unwrap_or_default()
    }

    pub fn mul(&self, other: &SparseRep) -> SparseRep {
        let mut by_row: BTreeMap<usize, Vec<(usize, Complex64)>> = BTreeMap::new();
        for (&(r, c), v) in &other.entries {
            by_row.entry(r).or_default().push((c, *v));
        }
        let mut out: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
        for (&(r, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for (c, b) in row {
                    *out.entry((r, *c)).or_default() += a * b;
                }
            }
        }
        Self::from_entries(self.n, self.toeplitz_slots, self.sample.clone(), out)
    }

    pub fn add(&self, other: &SparseRep) -> SparseRep {
        let mut out = self.entries.clone();
        for (k, v) in &other.entries {
            *out.entry(*k).or_default() += v;
        }
        Self::from_entries(self.n, self.toeplitz_slots, self.sample.clone(), out)
    }

    pub fn conj_transpose(&self) -> SparseRep {
        let entries = self.entries.iter().map(|(&(r, c), v)| ((c, r), v.conj())).collect();
        Self::from_entries(self.n, self.toeplitz_slots, self.sample.clone(), entries)
    }

    /// Splits a flat index into per-slot coordinates, slot 0 most significant.
    fn coords(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.toeplitz_slots];
        for slot in (0..self.toeplitz_slots).rev() {
            out[slot] = idx % self.n;
            idx /= self.n;
        }
        out
    }

    fn in_window(&self, idx: usize, bound: usize) -> bool {
        self.coords(idx).iter().all(|&c| c < bound)
    }

    /// Largest entry difference with both indices inside the window of
    /// margin `d`, with its location.
    pub fn window_diff(&self, other: &SparseRep, d: usize) -> (f64, Option<(usize, usize)>) {
        let bound = self.n.saturating_sub(d);
        let mut worst = (0.0, None);
        let keys: std::collections::BTreeSet<_> = self.entries.keys().chain(other.entries.keys()).copied().collect();
        for (r, c) in keys {
            if !self.in_window(r, bound) || !self.in_window(c, bound) {
                continue;
            }
            let diff = (self.get(r, c) - other.get(r, c)).norm();
            if diff > worst.0 {
                worst = (diff, Some((r, c)));
            }
        }
        worst
    }

    /// One `row col re im` line per stored entry, in index order.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (&(r, c), v) in &self.entries {
            writeln!(s, "{r} {c} {} {}", v.re, v.im).expect("write to string");
        }
        s
    }
}

fn slot_entries(b: ToeplitzBasis, n: usize) -> Vec<(usize, usize)> {
    match b {
        ToeplitzBasis::Shift(m) if m >= 0 => {
            let m = m as usize;
            (0..n.saturating_sub(m)).map(|i| (i + m, i)).collect()
        }
        ToeplitzBasis::Shift(m) => {
            let m = m.unsigned_abs() as usize;
            (0..n.saturating_sub(m)).map(|i| (i, i + m)).collect()
        }
        ToeplitzBasis::Unit(i, j) if (i as usize) < n && (j as usize) < n => vec![(i as usize, j as usize)],
        ToeplitzBasis::Unit(..) => vec![],
    }
}

/// `z^m` computed from the angle so that `conj(z^m) = z^{−m}` holds exactly.
fn circle_power(z: Complex64, m: i64) -> Complex64 {
    Complex64::from_polar(1.0, m as f64 * z.arg())
}

fn tuple_matrix(tuple: &[Sym], kinds: &[SlotKind], n: usize, sample: &[Complex64]) -> Vec<((usize, usize), Complex64)> {
    let mut acc: Vec<((usize, usize), Complex64)> = vec![((0, 0), Complex64::new(1.0, 0.0))];
    let mut circle = 0;
    for (sym, kind) in tuple.iter().zip(kinds) {
        match (sym, kind) {
            (Sym::T(b), SlotKind::Toeplitz) => {
                let local = slot_entries(*b, n);
                let mut next = Vec::with_capacity(acc.len() * local.len());
                for &((r, c), v) in &acc {
                    for &(i, j) in &local {
                        next.push(((r * n + i, c * n + j), v));
                    }
                }
                acc = next;
            }
            (Sym::C(m), SlotKind::Circle) => {
                let f = circle_power(sample[circle], *m);
                circle += 1;
                for e in &mut acc {
                    e.1 *= f;
                }
            }
            _ => unreachable!("tuple checked against signature"),
        }
    }
    acc
}

/// Matrix shadows of `x`, one per circle sample (just one if there are no
/// circle slots).
pub fn to_matrix(x: &TensorElement, spec: &TruncationSpec) -> Result<Vec<SparseRep>> {
    let sig = x.signature();
    if sig.has_spheres() {
        return Err(Error::SphereBlockNotLifted);
    }
    let toeplitz_slots = sig.kinds().iter().filter(|k| **k == SlotKind::Toeplitz).count();
    let circle_slots = sig.len() - toeplitz_slots;
    let samples = if circle_slots == 0 { 1 } else { spec.circle_points.len() };
    let mut out = Vec::with_capacity(samples);
    for p in 0..samples {
        let sample = spec.sample(p, circle_slots);
        let mut entries: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
        for (t, c) in x.terms() {
            let coeff = to_f64(c);
            for (k, v) in tuple_matrix(t, sig.kinds(), spec.n, &sample) {
                *entries.entry(k).or_default() += v * coeff;
            }
        }
        out.push(SparseRep::from_entries(spec.n, toeplitz_slots, sample, entries));
    }
    Ok(out)
}

/// Largest absolute Toeplitz-slot degree occurring in `x`.
pub fn max_shift(x: &TensorElement) -> usize {
    x.terms()
        .flat_map(|(t, _)| t.iter())
        .filter_map(|s| match s {
            Sym::T(b) => Some(b.degree().unsigned_abs() as usize),
            Sym::C(_) => None,
        })
        .max()
        .unwrap_or(0)
}

fn compare(
    check: &str,
    lhs: &[SparseRep],
    rhs: &[SparseRep],
    d: usize,
    tol: f64,
    spec: &TruncationSpec,
) -> VerificationReport {
    let mut tally = Tally::new();
    let mut max_diff: f64 = 0.0;
    for (p, (a, b)) in lhs.iter().zip(rhs).enumerate() {
        let (diff, at) = a.window_diff(b, d);
        max_diff = max_diff.max(diff);
        tally.record(
            diff <= tol,
            || format!("window entries agree at sample {p}"),
            || json!({"sample": p, "max_diff": diff, "at": at, "lhs": at.map(|(r, c)| a.get(r, c).to_string()), "rhs": at.map(|(r, c)| b.get(r, c).to_string())}),
        );
    }
    VerificationReport::new(check)
        .meta("N", spec.n as u64)
        .meta("D", d as u64)
        .meta("window", format!("all coordinates < {}", spec.n.saturating_sub(d)))
        .meta("max_diff", max_diff)
        .meta("tolerance", tol)
        .with_tally(tally)
}

fn window_margin(spec: &TruncationSpec, d: usize) -> Result<usize> {
    let d = d.max(spec.margin);
    if d >= spec.n {
        return Err(Error::Config(format!("window margin {d} leaves no interior at N = {}", spec.n)));
    }
    Ok(d)
}

/// Compares the symbolic product `a·b` with the product of the truncated
/// matrices on the interior window, `D = max_shift(a) + max_shift(b)`.
pub fn cross_validate_mul(a: &TensorElement, b: &TensorElement, spec: &TruncationSpec, tol: f64) -> Result<VerificationReport> {
    cross_validate_mul_with(a, b, spec, tol, Reduction::Exact)
}

pub fn cross_validate_mul_with(
    a: &TensorElement,
    b: &TensorElement,
    spec: &TruncationSpec,
    tol: f64,
    rule: Reduction,
) -> Result<VerificationReport> {
    let d = window_margin(spec, max_shift(a) + max_shift(b))?;
    let symbolic = to_matrix(&a.tmul_with(b, rule)?, spec)?;
    let ma = to_matrix(a, spec)?;
    let mb = to_matrix(b, spec)?;
    let numeric: Vec<SparseRep> = ma.iter().zip(&mb).map(|(x, y)| x.mul(y)).collect();
    Ok(compare("cross_validate_mul", &symbolic, &numeric, d, tol, spec))
}

/// Entrywise window agreement of two elements.
pub fn cross_validate_identity(lhs: &TensorElement, rhs: &TensorElement, spec: &TruncationSpec, tol: f64) -> Result<VerificationReport> {
    let d = window_margin(spec, max_shift(lhs).max(max_shift(rhs)))?;
    Ok(compare("cross_validate_identity", &to_matrix(lhs, spec)?, &to_matrix(rhs, spec)?, d, tol, spec))
}

/// Compares `Σ_i ∏_j factors[i][j]`, multiplied out as matrices, with the
/// matrix of `rhs`. Used to shadow relations whose symbolic sides were
/// reduced by the engine.
pub fn cross_validate_products(
    terms: &[Vec<TensorElement>],
    rhs: &TensorElement,
    spec: &TruncationSpec,
    tol: f64,
) -> Result<VerificationReport> {
    let d = terms.iter().map(|fs| fs.iter().map(max_shift).sum::<usize>()).max().unwrap_or(0);
    let d = window_margin(spec, d.max(max_shift(rhs)))?;
    let target = to_matrix(rhs, spec)?;
    let mut total: Option<Vec<SparseRep>> = None;
    for factors in terms {
        let mut prod: Option<Vec<SparseRep>> = None;
        for f in factors {
            let m = to_matrix(f, spec)?;
            prod = Some(match prod {
                None => m,
                Some(p) => p.iter().zip(&m).map(|(x, y)| x.mul(y)).collect(),
            });
        }
        let prod = prod.ok_or_else(|| Error::ShapeMismatch("empty product".into()))?;
        total = Some(match total {
            None => prod,
            Some(t) => t.iter().zip(&prod).map(|(x, y)| x.add(y)).collect(),
        });
    }
    let total = total.unwrap_or_else(|| to_matrix(&TensorElement::zero(rhs.signature()), spec).expect("lifted"));
    Ok(compare("cross_validate_products", &total, &target, d, tol, spec))
}

/// `x + 1e-6·(e₀₀ ⊗ I)`: a perturbation the numeric comparison must catch.
pub fn perturbed(x: &TensorElement) -> Result<TensorElement> {
    let sig: &Signature = x.signature();
    let slot = sig
        .kinds()
        .iter()
        .position(|k| *k == SlotKind::Toeplitz)
        .ok_or_else(|| Error::ShapeMismatch("no Toeplitz slot to perturb".into()))?;
    let e = TensorElement::unit(sig, slot, 0, 0)?;
    Ok(x + &e.scale(&ratio(1, 1_000_000)))
}
