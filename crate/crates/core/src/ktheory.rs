//! K₀ bookkeeping for the multipullback quantum projective spaces.
//!
//! Classes are recorded as integer vectors in the fixed basis
//! `[E₀⁰], …, [E₀ⁿ]`; the freeness of that basis is an input, not something
//! computed here. What is computed exactly is everything on top of it: the
//! projections `E_k^j`, the unitary witnesses behind the recursion
//! `[E_{k+1}^j] = [E_k^j] − [E_k^{j+1}]`, the expansions of the line bundle
//! classes `[L_k]`, and the two Atiyah–Todd identities.
//!
//! Matrix units are 0-based: `P_k = Σ_{i<k} e_ii = 1 − t^k t*^k`, so
//! `P₁ = e₀₀` and `P⊥_k = P⊥_{k+1} + e_kk`.
//!
//! Coordinates `[E₀^m]` with `m > n` are dropped. For `m = n+1` this is the
//! convention `E^{n+1} = 0`; beyond that it is only a convention.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::rational::{binomial, factorial, Rat};
use crate::report::{Tally, VerificationReport};
use crate::tensor::{AlgMatrix, Signature, TensorElement};
use crate::toeplitz::ToeplitzElement;

/// Integer coordinates in the basis `[E₀⁰], …, [E₀ⁿ]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KVector {
    pub n: usize,
    pub coords: Vec<i64>,
}

impl KVector {
    pub fn zero(n: usize) -> Self {
        KVector { n, coords: vec![0; n + 1] }
    }

    /// `[E₀^j]`; zero when `j > n`.
    pub fn unit(n: usize, j: usize) -> Self {
        let mut v = Self::zero(n);
        if j <= n {
            v.coords[j] = 1;
        }
        v
    }

    pub fn ones(n: usize) -> Self {
        KVector { n, coords: vec![1; n + 1] }
    }

    pub fn scale(&self, c: i64) -> Self {
        KVector { n: self.n, coords: self.coords.iter().map(|x| x * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }
}

impl std::ops::Add for &KVector {
    type Output = KVector;
    fn add(self, rhs: &KVector) -> KVector {
        assert_eq!(self.n, rhs.n, "KVector dimension mismatch");
        KVector { n: self.n, coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect() }
    }
}

impl std::ops::Sub for &KVector {
    type Output = KVector;
    fn sub(self, rhs: &KVector) -> KVector {
        self + &rhs.scale(-1)
    }
}

impl fmt::Display for KVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn binom_i64(n: usize, k: usize) -> i64 {
    binomial(n as u64, k as u64).to_i64().expect("binomial fits in i64")
}

fn alt(i: usize) -> i64 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn tensor_of(sig: &Signature, parts: &[ToeplitzElement]) -> TensorElement {
    let indexed: Vec<(usize, ToeplitzElement)> = parts.iter().cloned().enumerate().collect();
    TensorElement::product_of_slots(sig, &indexed).expect("toeplitz slots")
}

fn p1() -> ToeplitzElement {
    ToeplitzElement::unit(0, 0)
}

/// `(⊗^j P₁) ⊗ x ⊗ (⊗^{rest} I)` as slot list of length `n+1`.
fn e_slots(n: usize, j: usize, x: ToeplitzElement) -> Vec<ToeplitzElement> {
    let mut parts = vec![p1(); j];
    if j <= n {
        parts.push(x);
    }
    parts.resize(n + 1, ToeplitzElement::one());
    parts
}

fn check_j(n: usize, j: usize, max: usize) -> Result<()> {
    if j > max {
        return Err(Error::IndexOutOfRange(format!("j = {j} exceeds {max} for n = {n}")));
    }
    Ok(())
}

/// `E_k^j` in the quotient `C(S^{2n+1}_H)`, for `0 ≤ j ≤ n+1`.
pub fn proj_e(n: usize, j: usize, k: u32) -> Result<TensorElement> {
    check_j(n, j, n + 1)?;
    Ok(tensor_of(&Signature::sphere(n + 1), &e_slots(n, j, ToeplitzElement::proj_pperp(k))))
}

/// The representative of `E_k^j` in `𝒯^{⊗(n+1)}` before the quotient.
pub fn proj_e_ambient(n: usize, j: usize, k: u32) -> Result<TensorElement> {
    check_j(n, j, n + 1)?;
    Ok(tensor_of(&Signature::toeplitz(n + 1), &e_slots(n, j, ToeplitzElement::proj_pperp(k))))
}

/// Entries of `u_k` as pairs of one-slot factors.
fn witness_parts(k: u32) -> [[(ToeplitzElement, ToeplitzElement); 2]; 2] {
    let pk = ToeplitzElement::proj_p(k);
    let s = ToeplitzElement::shift(k as i64);
    let sa = ToeplitzElement::shift(-(k as i64));
    let one = ToeplitzElement::one();
    [[(pk.clone(), one.clone()), (s.clone(), sa.clone())], [(sa, s), (one, pk)]]
}

/// `u_k = [[P_k⊗I, S^k⊗S*^k], [S*^k⊗S^k, I⊗P_k]]` over `𝒯^{⊗2}`.
pub fn witness_u(k: u32) -> AlgMatrix {
    let sig = Signature::toeplitz(2);
    let rows = witness_parts(k)
        .iter()
        .map(|row| row.iter().map(|(a, b)| tensor_of(&sig, &[a.clone(), b.clone()])).collect())
        .collect();
    AlgMatrix::from_rows(rows).expect("2x2")
}

fn zero_box(x: &TensorElement, first: bool) -> AlgMatrix {
    let z = AlgMatrix::scalar(TensorElement::zero(x.signature()));
    let p = AlgMatrix::scalar(x.clone());
    if first {
        p.boxplus(&z).expect("same signature")
    } else {
        z.boxplus(&p).expect("same signature")
    }
}

fn conjugate(u: &AlgMatrix, p: &AlgMatrix) -> Result<AlgMatrix> {
    u.mat_mul(p)?.mat_mul(&u.mat_adjoint())
}

/// Checks that `u_k` is a self-adjoint unitary conjugating `(e_kk⊗I) ⊞ 0` to
/// `0 ⊞ (e₀₀⊗P⊥_k)`.
pub fn verify_ekk(k: u32) -> Result<VerificationReport> {
    let sig = Signature::toeplitz(2);
    let u = witness_u(k);
    let mut tally = Tally::new();
    tally.equal(|| "u = u*".into(), &u, &u.mat_adjoint());
    tally.equal(|| "u^2 = 1".into(), &u.mat_mul(&u)?, &AlgMatrix::identity(&sig, 2));
    let ekk = tensor_of(&sig, &[ToeplitzElement::unit(k, k), ToeplitzElement::one()]);
    let target = tensor_of(&sig, &[p1(), ToeplitzElement::proj_pperp(k)]);
    tally.equal(|| "u ((e_kk x I) + 0) u = 0 + (e_00 x Pperp_k)".into(), &conjugate(&u, &zero_box(&ekk, true))?, &zero_box(&target, false));
    let invariant = u.entries().iter().all(|e| e.degree_split().keys().all(|d| *d == 0));
    tally.record(invariant, || "entries are gauge invariant".into(), || json!({"u": u.to_string()}));
    Ok(VerificationReport::new("witness_u").param("k", k as i64).with_tally(tally))
}

/// The lifted conjugator for the recursion step, completed to a unitary:
/// `W = (⊗^j P₁ ⊗ u_k ⊗ I) + (1 − ⊗^j P₁ ⊗ I)·1₂`. The uncompleted matrix
/// only satisfies `V*V = Π ⊗ 1₂` when `j > 0`.
pub fn recursion_conjugator(n: usize, j: usize, k: u32, sig: &Signature) -> Result<AlgMatrix> {
    if j >= n {
        return Err(Error::IndexOutOfRange(format!("conjugator needs j < n, got j = {j}, n = {n}")));
    }
    let one = TensorElement::one(sig);
    let mut pi_parts = vec![p1(); j];
    pi_parts.resize(n + 1, ToeplitzElement::one());
    let pi = tensor_of(sig, &pi_parts);
    let complement = &one - &pi;
    let parts = witness_parts(k);
    let mut rows = Vec::new();
    for (r, row) in parts.iter().enumerate() {
        let mut cells = Vec::new();
        for (c, (a, b)) in row.iter().enumerate() {
            let mut slots = vec![p1(); j];
            slots.push(a.clone());
            slots.push(b.clone());
            slots.resize(n + 1, ToeplitzElement::one());
            let mut x = tensor_of(sig, &slots);
            if r == c {
                x = &x + &complement;
            }
            cells.push(x);
        }
        rows.push(cells);
    }
    AlgMatrix::from_rows(rows)
}

/// One step of the recursion `[E_{k+1}^j] = [E_k^j] − [E_k^{j+1}]`, checked
/// exactly: the orthogonal splitting `E_k^j = E_{k+1}^j + M` in the
/// quotient, and the conjugation of `M ⊞ 0` to `0 ⊞ E_k^{j+1}` by a
/// self-adjoint unitary with gauge-invariant entries, both before and after
/// the quotient. For `j = n` it checks `E_k^n = E_{k+1}^n` and `M = 0`.
pub fn verify_recursion(n: usize, j: usize, k: u32) -> Result<VerificationReport> {
    check_j(n, j, n)?;
    let quotient = Signature::sphere(n + 1);
    let ambient = Signature::toeplitz(n + 1);
    let mut tally = Tally::new();
    let m_of = |sig: &Signature| tensor_of(sig, &e_slots(n, j, ToeplitzElement::unit(k, k)));
    let ek = proj_e(n, j, k)?;
    let ek1 = proj_e(n, j, k + 1)?;
    let m = m_of(&quotient);
    tally.equal(|| "E_k^j = E_{k+1}^j + M".into(), &ek, &(&ek1 + &m));
    tally.record(ek1.mul(&m).is_zero(), || "E_{k+1}^j M = 0".into(), || json!({"product": ek1.mul(&m).to_string()}));
    tally.record(m.is_projection(), || "M is a projection".into(), || json!({"M": m.to_string()}));
    if j == n {
        tally.equal(|| "E_k^n = E_{k+1}^n".into(), &ek, &ek1);
        tally.record(m.is_zero(), || "M = 0 for j = n".into(), || json!({"M": m.to_string()}));
    } else {
        for sig in [&ambient, &quotient] {
            let label = if sig.has_spheres() { "quotient" } else { "ambient" };
            let w = recursion_conjugator(n, j, k, sig)?;
            tally.record(
                w.is_selfadjoint_unitary(),
                || format!("conjugator is a self-adjoint unitary ({label})"),
                || json!({"W": w.to_string()}),
            );
            let invariant = w.entries().iter().all(|e| e.degree_split().keys().all(|d| *d == 0));
            tally.record(invariant, || format!("conjugator entries are invariant ({label})"), || json!({}));
            let lhs = conjugate(&w, &zero_box(&m_of(sig), true))?;
            let e_next = tensor_of(sig, &e_slots(n, j + 1, ToeplitzElement::proj_pperp(k)));
            tally.equal(|| format!("W (M + 0) W = 0 + E_k^(j+1) ({label})"), &lhs, &zero_box(&e_next, false));
        }
    }
    let lhs = kvec_e(n, j, k as usize + 1)?;
    let rhs = &kvec_e(n, j, k as usize)? - &kvec_e(n, j + 1, k as usize)?;
    tally.equal(|| "kvec_E(n,j,k+1) = kvec_E(n,j,k) - kvec_E(n,j+1,k)".into(), &lhs, &rhs);
    Ok(VerificationReport::new("recursion")
        .param("n", n as i64)
        .param("j", j as i64)
        .param("k", k as i64)
        .with_tally(tally))
}

/// `[E_k^j] = Σ_i (−1)^i C(k,i) [E₀^{j+i}]`, coordinates beyond `n` dropped.
pub fn kvec_e(n: usize, j: usize, k: usize) -> Result<KVector> {
    check_j(n, j, n + 1)?;
    let mut v = KVector::zero(n);
    for i in 0..=k {
        if j + i <= n {
            v.coords[j + i] += alt(i) * binom_i64(k, i);
        }
    }
    Ok(v)
}

/// `[E_k^j]` obtained by running the recursion down to `k = 0`, as an
/// independent check on the closed form.
pub fn kvec_e_by_recursion(n: usize, j: usize, k: usize) -> KVector {
    // row[j] holds [E_k^j] for the current k, j = 0..=n+1
    let mut row: Vec<KVector> = (0..=n + 1).map(|j| KVector::unit(n, j)).collect();
    for _ in 0..k {
        let next = (0..=n + 1)
            .map(|j| if j == n + 1 { KVector::zero(n) } else { &row[j] - &row[j + 1] })
            .collect();
        row = next;
    }
    row[j].clone()
}

/// `[L_k]` for `−1 ≤ k ≤ n+1`.
pub fn kvec_l(n: usize, k: i64) -> Result<KVector> {
    match k {
        -1 => Ok(KVector::ones(n)),
        k if (0..=n as i64 + 1).contains(&k) => kvec_e(n, 0, k as usize),
        _ => Err(Error::IndexOutOfRange(format!("L_{k} is outside [-1, {}]", n + 1))),
    }
}

/// Recursion consistency for all `j ≤ n+1`, `k ≤ k_max`.
pub fn kvec_recursion(n: usize, k_max: usize) -> Result<VerificationReport> {
    let mut tally = Tally::new();
    for j in 0..=n + 1 {
        for k in 0..=k_max {
            let closed = kvec_e(n, j, k)?;
            tally.equal(|| format!("closed form = recursion at j={j}, k={k}"), &closed, &kvec_e_by_recursion(n, j, k));
            if j <= n {
                let step = &kvec_e(n, j, k)? - &kvec_e(n, j + 1, k)?;
                tally.equal(|| format!("recursion step at j={j}, k={k}"), &kvec_e(n, j, k + 1)?, &step);
            }
        }
    }
    Ok(VerificationReport::new("kvec_recursion").param("n", n as i64).with_tally(tally))
}

/// `[L_k] = Σ_{j≤l} (−1)^j C(l,j) [E_{k−l}^j]` for all `0 ≤ l ≤ k ≤ n`.
pub fn l_expansion(n: usize) -> Result<VerificationReport> {
    let mut tally = Tally::new();
    for k in 0..=n {
        let lk = kvec_l(n, k as i64)?;
        for l in 0..=k {
            let mut sum = KVector::zero(n);
            for j in 0..=l {
                sum = &sum + &kvec_e(n, j, k - l)?.scale(alt(j) * binom_i64(l, j));
            }
            tally.equal(|| format!("[L_{k}] at l={l}"), &lk, &sum);
        }
    }
    Ok(VerificationReport::new("l_expansion").param("n", n as i64).with_tally(tally))
}

/// `[L_{n+1}] = Σ_{k≤n} (−1)^{n−k} C(n+1,k) [L_k]`, together with the
/// vanishing form `Σ_{k≤n+1} (−1)^{n+1−k} C(n+1,k) [L_k] = 0`.
pub fn at_first(n: usize) -> Result<VerificationReport> {
    let mut tally = Tally::new();
    let lhs = kvec_l(n, n as i64 + 1)?;
    let mut rhs = KVector::zero(n);
    for k in 0..=n {
        rhs = &rhs + &kvec_l(n, k as i64)?.scale(alt(n - k) * binom_i64(n + 1, k));
    }
    tally.equal(|| "[L_(n+1)] expansion".into(), &lhs, &rhs);
    let mut vanish = KVector::zero(n);
    for k in 0..=n + 1 {
        vanish = &vanish + &kvec_l(n, k as i64)?.scale(alt(n + 1 - k) * binom_i64(n + 1, k));
    }
    tally.record(vanish.is_zero(), || "vanishing form".into(), || json!({"value": vanish.coords}));
    Ok(VerificationReport::new("atiyah_todd")
        .param("n", n as i64)
        .param("identity", 1)
        .meta("lhs", lhs.coords)
        .meta("rhs", rhs.coords)
        .with_tally(tally))
}

/// `[L_{−1}] = Σ_{k≤n} (−1)^k C(n+1,k+1) [L_k]`, with `[L_{−1}]` represented
/// by `⊞_j E₀^j`.
pub fn at_second(n: usize) -> Result<VerificationReport> {
    let mut tally = Tally::new();
    let lhs = kvec_l(n, -1)?;
    let mut rhs = KVector::zero(n);
    for k in 0..=n {
        rhs = &rhs + &kvec_l(n, k as i64)?.scale(alt(k) * binom_i64(n + 1, k + 1));
    }
    tally.equal(|| "[L_(-1)] expansion".into(), &lhs, &rhs);
    Ok(VerificationReport::new("atiyah_todd")
        .param("n", n as i64)
        .param("identity", 2)
        .meta("lhs", lhs.coords)
        .meta("rhs", rhs.coords)
        .with_tally(tally))
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn bareiss_det(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    let mut a: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}

/// Rows `[L_0], …, [L_n]`: lower triangular with `|det| = 1`.
pub fn basis_change_unimodular(n: usize) -> Result<VerificationReport> {
    let rows: Vec<Vec<i64>> = (0..=n).map(|k| kvec_l(n, k as i64).map(|v| v.coords)).collect::<Result<_>>()?;
    let mut tally = Tally::new();
    let upper: Vec<(usize, usize)> =
        (0..=n).flat_map(|r| (r + 1..=n).map(move |c| (r, c))).filter(|&(r, c)| rows[r][c] != 0).collect();
    tally.record(upper.is_empty(), || "lower triangular".into(), || json!({"nonzero_above_diagonal": upper}));
    let det = bareiss_det(&rows);
    tally.record(det.abs().is_one(), || "|det| = 1".into(), || json!({"det": det.to_string()}));
    let diagonal: Vec<i64> = (0..=n).map(|i| rows[i][i]).collect();
    Ok(VerificationReport::new("unimodular")
        .param("n", n as i64)
        .meta("det", det.to_i64().map_or_else(|| json!(det.to_string()), |d| json!(d)))
        .meta("diagonal", diagonal)
        .with_tally(tally))
}

/// `[L_{−1}]` is the all-ones vector and matches the direct sum of the
/// `E₀^j` coordinate by coordinate.
pub fn l_minus_one(n: usize) -> Result<VerificationReport> {
    let mut tally = Tally::new();
    let mut sum = KVector::zero(n);
    for j in 0..=n {
        sum = &sum + &kvec_e(n, j, 0)?;
    }
    tally.equal(|| "[L_(-1)] = sum of [E_0^j]".into(), &kvec_l(n, -1)?, &sum);
    tally.equal(|| "all ones".into(), &sum, &KVector::ones(n));
    Ok(VerificationReport::new("l_minus_one").param("n", n as i64).with_tally(tally))
}

/// `f_j(1) = Σ_{k≤n−j} (−1)^k C(n−j,k) / (k+j+1)` by direct summation.
pub fn comb_fj(n: usize, j: usize) -> Result<Rat> {
    if j > n {
        return Err(Error::IndexOutOfRange(format!("j = {j} > n = {n}")));
    }
    let mut sum = Rat::zero();
    for k in 0..=(n - j) {
        let term = Rat::new(binomial((n - j) as u64, k as u64), BigInt::from(k + j + 1));
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(sum)
}

/// `j!(n−j)!/(n+1)!`.
pub fn comb_closed(n: usize, j: usize) -> Rat {
    Rat::new(factorial(j as u64) * factorial((n - j) as u64), factorial(n as u64 + 1))
}

/// Second oracle: expand `(−1)^{n−j} x^j (x−1)^{n−j}` by repeated polynomial
/// multiplication, integrate term by term and evaluate on `[0, 1]`.
pub fn comb_fj_antiderivative(n: usize, j: usize) -> Rat {
    let mut poly: Vec<BigInt> = vec![BigInt::one()];
    for _ in 0..(n - j) {
        // multiply by (x − 1)
        let mut next = vec![BigInt::zero(); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c;
        }
        poly = next;
    }
    let sign = if (n - j).is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let mut value = Rat::zero();
    for (i, c) in poly.iter().enumerate() {
        // coefficient of x^{i+j}; its antiderivative at 1 is c / (i+j+1)
        value += Rat::new(c * &sign, BigInt::from(i + j + 1));
    }
    value
}

/// Both oracles against the closed form, plus the prefactor identity.
pub fn comb_fj_check(n: usize) -> Result<VerificationReport> {
    let mut tally = Tally::new();
    for j in 0..=n {
        let direct = comb_fj(n, j)?;
        let closed = comb_closed(n, j);
        tally.equal(|| format!("f_{j}(1) = closed form"), &direct, &closed);
        tally.equal(|| format!("antiderivative oracle at j={j}"), &comb_fj_antiderivative(n, j), &direct);
        let pref = Rat::new(factorial(n as u64 + 1), factorial(j as u64) * factorial((n - j) as u64));
        tally.equal(|| format!("prefactor times f_{j}(1) = 1"), &(pref * &direct), &Rat::one());
    }
    Ok(VerificationReport::new("comb_fj").param("n", n as i64).with_tally(tally))
}

/// `Σ_{k≤m} (−1)^k C(m,k) = 0` for `m ≥ 1`.
pub fn alt_binom_vanish(m: usize) -> VerificationReport {
    let mut sum = BigInt::zero();
    for k in 0..=m {
        let c = binomial(m as u64, k as u64);
        if k % 2 == 0 {
            sum += c;
        } else {
            sum -= c;
        }
    }
    let mut tally = Tally::new();
    tally.record(sum.is_zero(), || "alternating sum vanishes".into(), || json!({"sum": sum.to_string()}));
    VerificationReport::new("alt_binom").param("m", m as i64).with_tally(tally)
}

/// Every `E_k^j` is a gauge-invariant projection; `E^{n+1}` vanishes and
/// `E_k^n` does not depend on `k`.
pub fn proj_e_check(n: usize, k_max: u32) -> Result<VerificationReport> {
    let mut tally = Tally::new();
    for j in 0..=n + 1 {
        for k in 0..=k_max {
            let e = proj_e(n, j, k)?;
            tally.record(e.is_projection(), || format!("E_{k}^{j} is a projection"), || json!({"E": e.to_string()}));
            let inv = e.degree_split().keys().all(|d| *d == 0);
            tally.record(inv, || format!("E_{k}^{j} is invariant"), || json!({"E": e.to_string()}));
            if j == n + 1 {
                tally.record(e.is_zero(), || format!("E_{k}^(n+1) = 0"), || json!({"E": e.to_string()}));
            }
            if j == n {
                tally.equal(|| format!("E_{k}^n = E_0^n"), &e, &proj_e(n, n, 0)?);
            }
        }
    }
    Ok(VerificationReport::new("proj_E").param("n", n as i64).with_tally(tally))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::rng;
    use crate::tensor::Sym;
    use crate::toeplitz::ToeplitzBasis::{Shift, Unit};
    use rand::Rng;

    #[test]
    fn e_examples() {
        let e = proj_e(1, 0, 1).unwrap();
        let sig = Signature::sphere(2);
        let one = TensorElement::one(&sig);
        let e00 = TensorElement::unit(&sig, 0, 0, 0).unwrap();
        assert_eq!(e, &one - &e00);
        assert!(e.is_projection());
        assert!(proj_e(2, 3, 0).unwrap().is_zero());
        assert!(proj_e(2, 4, 0).is_err());
        assert_eq!(proj_e(3, 3, 0).unwrap(), proj_e(3, 3, 5).unwrap());
    }

    #[test]
    fn u0_is_swap() {
        let sig = Signature::toeplitz(2);
        let one = TensorElement::one(&sig);
        let zero = TensorElement::zero(&sig);
        let swap = AlgMatrix::from_rows(vec![vec![zero.clone(), one.clone()], vec![one, zero]]).unwrap();
        assert_eq!(witness_u(0), swap);
    }

    #[test]
    fn witnesses() {
        for k in 0..=4 {
            assert!(verify_ekk(k).unwrap().passed(), "k = {k}");
        }
    }

    #[test]
    fn recursion_examples() {
        for (n, j, k) in [(1, 0, 0), (2, 1, 2), (2, 2, 1), (1, 1, 0)] {
            let r = verify_recursion(n, j, k).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn uncompleted_conjugator_is_not_unitary() {
        // with j > 0 the P1 prefix makes the plain lift a partial isometry
        let sig = Signature::toeplitz(3);
        let w = recursion_conjugator(2, 1, 1, &sig).unwrap();
        let one = TensorElement::one(&sig);
        let pi = TensorElement::unit(&sig, 0, 0, 0).unwrap();
        let v = w.map(|x| x.clone());
        let c = &one - &pi;
        let mut rows = vec![];
        for r in 0..2 {
            let mut row = vec![];
            for col in 0..2 {
                let x = v.get(r, col);
                row.push(if r == col { x - &c } else { x.clone() });
            }
            rows.push(row);
        }
        let plain = AlgMatrix::from_rows(rows).unwrap();
        assert!(!plain.is_unitary());
        assert!(w.is_unitary());
    }

    #[test]
    fn kvec_examples() {
        assert_eq!(kvec_e(2, 0, 0).unwrap().coords, vec![1, 0, 0]);
        assert_eq!(kvec_e(2, 0, 1).unwrap().coords, vec![1, -1, 0]);
        assert_eq!(kvec_e(2, 1, 2).unwrap().coords, vec![0, 1, -2]);
        assert_eq!(kvec_l(2, 2).unwrap().coords, vec![1, -2, 1]);
        assert_eq!(kvec_l(4, 0).unwrap().coords, vec![1, 0, 0, 0, 0]);
        assert_eq!(kvec_l(1, -1).unwrap().coords, vec![1, 1]);
        assert!(kvec_l(2, -2).is_err());
        assert!(kvec_l(2, 4).is_err());
        assert!(kvec_e(2, 4, 0).is_err());
    }

    #[test]
    fn atiyah_todd_small() {
        assert_eq!(kvec_l(1, 2).unwrap().coords, vec![1, -2]);
        let r = at_first(1).unwrap();
        assert_eq!(r.metadata["rhs"], json!([1, -2]));
        assert!(r.passed());
        let r = at_second(1).unwrap();
        assert_eq!(r.metadata["rhs"], json!([1, 1]));
        assert!(at_first(0).unwrap().passed());
        assert_eq!(kvec_l(0, 1).unwrap(), kvec_l(0, 0).unwrap());
    }

    #[test]
    fn unimodular_examples() {
        let r = basis_change_unimodular(2).unwrap();
        assert_eq!(r.metadata["diagonal"], json!([1, -1, 1]));
        // the diagonal product is -1 here, not 1
        assert_eq!(r.metadata["det"], json!(-1));
        assert!(r.passed());
        assert_eq!(basis_change_unimodular(0).unwrap().metadata["det"], json!(1));
    }

    #[test]
    fn bareiss_matches_permutation_expansion() {
        fn leibniz(m: &[Vec<i64>]) -> i64 {
            let n = m.len();
            if n == 1 {
                return m[0][0];
            }
            (0..n)
                .map(|c| {
                    let minor: Vec<Vec<i64>> =
                        m[1..].iter().map(|r| r.iter().enumerate().filter(|&(i, _)| i != c).map(|(_, x)| *x).collect()).collect();
                    alt(c) * m[0][c] * leibniz(&minor)
                })
                .sum()
        }
        let mut r = rng(11);
        for _ in 0..50 {
            let n = r.gen_range(1..=5);
            let m: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| r.gen_range(-4..=4)).collect()).collect();
            assert_eq!(bareiss_det(&m), BigInt::from(leibniz(&m)), "{m:?}");
        }
    }

    #[test]
    fn comb_examples() {
        assert_eq!(comb_fj(3, 1).unwrap(), Rat::new(1.into(), 12.into()));
        for n in 0..=8 {
            assert_eq!(comb_fj(n, n).unwrap(), Rat::new(1.into(), BigInt::from(n + 1)));
        }
        assert!(comb_fj_check(25).unwrap().passed());
        assert!(comb_fj(2, 3).is_err());
    }

    #[test]
    fn alt_binom() {
        for m in [1, 4, 30] {
            assert!(alt_binom_vanish(m).passed());
        }
    }

    #[test]
    fn e_tuples_have_degree_zero() {
        let e = proj_e(2, 1, 2).unwrap();
        for (t, _) in e.terms() {
            assert_eq!(TensorElement::tuple_degree(t), 0);
            assert!(t.iter().all(|s| matches!(s, Sym::T(Shift(0)) | Sym::T(Unit(_, _)))));
        }
    }
}
