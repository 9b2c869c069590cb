//! Independent oracles: dense integer matrices for the Toeplitz product
//! rules, truncated power series for the K-vectors, and numerical
//! quadrature for the rational sums.

use ktoeplitz::ktheory::{comb_fj, kvec_e, kvec_l};
use ktoeplitz::rational::to_f64;
use ktoeplitz::{ToeplitzBasis, ToeplitzElement};

const M: usize = 40;
const WINDOW: usize = 20;

type Dense = Vec<Vec<i64>>;

fn identity() -> Dense {
    (0..M).map(|i| (0..M).map(|j| i64::from(i == j)).collect()).collect()
}

fn shift() -> Dense {
    (0..M).map(|i| (0..M).map(|j| i64::from(i == j + 1)).collect()).collect()
}

fn transpose(a: &Dense) -> Dense {
    (0..M).map(|i| (0..M).map(|j| a[j][i]).collect()).collect()
}

fn mul(a: &Dense, b: &Dense) -> Dense {
    let mut out = vec![vec![0; M]; M];
    for i in 0..M {
        for k in 0..M {
            if a[i][k] != 0 {
                for j in 0..M {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    out
}

fn power(a: &Dense, e: usize) -> Dense {
    (0..e).fold(identity(), |acc, _| mul(&acc, a))
}

fn sub(a: &Dense, b: &Dense) -> Dense {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

/// Builds a basis symbol from words in `t` and `t*` only.
fn dense_basis(b: ToeplitzBasis) -> Dense {
    let t = shift();
    let ts = transpose(&t);
    match b {
        ToeplitzBasis::Shift(m) if m >= 0 => power(&t, m as usize),
        ToeplitzBasis::Shift(m) => power(&ts, m.unsigned_abs() as usize),
        ToeplitzBasis::Unit(i, j) => {
            let defect = sub(&identity(), &mul(&t, &ts));
            mul(&mul(&power(&t, i as usize), &defect), &power(&ts, j as usize))
        }
    }
}

fn dense(x: &ToeplitzElement) -> Dense {
    let mut out = vec![vec![0; M]; M];
    for (b, c) in x.terms() {
        assert!(c.is_integer());
        let c: i64 = c.to_integer().try_into().unwrap();
        let m = dense_basis(*b);
        for i in 0..M {
            for j in 0..M {
                out[i][j] += c * m[i][j];
            }
        }
    }
    out
}

fn window(a: &Dense) -> Dense {
    a[..WINDOW].iter().map(|r| r[..WINDOW].to_vec()).collect()
}

fn basis_symbols() -> Vec<ToeplitzBasis> {
    let mut v: Vec<ToeplitzBasis> = (-4..=4).map(ToeplitzBasis::Shift).collect();
    for i in 0..4 {
        for j in 0..4 {
            v.push(ToeplitzBasis::Unit(i, j));
        }
    }
    v
}

#[test]
fn product_rule_matches_dense_matrices() {
    for a in basis_symbols() {
        for b in basis_symbols() {
            let (x, y) = (ToeplitzElement::basis(a), ToeplitzElement::basis(b));
            let symbolic = dense(&x.mul(&y));
            let matrices = mul(&dense(&x), &dense(&y));
            assert_eq!(window(&symbolic), window(&matrices), "{a} * {b}");
        }
    }
}

#[test]
fn adjoint_is_transpose() {
    for a in basis_symbols() {
        let x = ToeplitzElement::basis(a);
        assert_eq!(window(&dense(&x.adjoint())), window(&transpose(&dense(&x))), "{a}");
    }
}

#[test]
fn projections_match_dense() {
    for k in 0..8u32 {
        let mut p = vec![vec![0; M]; M];
        for (i, row) in p.iter_mut().enumerate().take(k as usize) {
            row[i] = 1;
        }
        assert_eq!(window(&dense(&ToeplitzElement::proj_p(k))), window(&p));
        assert_eq!(window(&dense(&ToeplitzElement::proj_pperp(k))), window(&sub(&identity(), &p)));
    }
}

/// `y^j (1 − y)^k` truncated after `y^n`, by repeated multiplication.
fn series(n: usize, j: usize, k: usize) -> Vec<i64> {
    let mut c = vec![0i64; n + 1];
    if j <= n {
        c[j] = 1;
    }
    for _ in 0..k {
        for i in (1..=n).rev() {
            c[i] -= c[i - 1];
        }
    }
    c
}

#[test]
fn kvectors_match_power_series() {
    for n in 0..=10 {
        for k in 0..=n + 1 {
            assert_eq!(kvec_l(n, k as i64).unwrap().coords, series(n, 0, k));
        }
        for j in 0..=n + 1 {
            for k in 0..=10 {
                assert_eq!(kvec_e(n, j, k).unwrap().coords, series(n, j, k));
            }
        }
        // 1/(1 − y) = 1 + y + y^2 + … and (1 − y)^{n+1} vanishes mod y^{n+1}
        assert_eq!(kvec_l(n, -1).unwrap().coords, vec![1; n + 1]);
        assert!(series(n, 1, n).iter().all(|&c| c.abs() <= 1 << 20));
    }
}

fn simpson(f: impl Fn(f64) -> f64, steps: usize) -> f64 {
    let h = 1.0 / steps as f64;
    let mut s = f(0.0) + f(1.0);
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(i as f64 * h);
    }
    s * h / 3.0
}

#[test]
fn fj_matches_quadrature() {
    // f_j(1) = ∫_0^1 x^j (1 − x)^{n−j} dx
    for n in 0..=25 {
        for j in 0..=n {
            let exact = to_f64(&comb_fj(n, j).unwrap());
            let quad = simpson(|x| x.powi(j as i32) * (1.0 - x).powi((n - j) as i32), 2000);
            assert!((exact - quad).abs() <= 1e-7 * exact.abs(), "n={n} j={j}: {exact} vs {quad}");
        }
    }
}
