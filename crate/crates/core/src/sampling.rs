//! Seeded random elements for sampled checks.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::{rat, Rat};
use crate::tensor::{Signature, SlotKind, Sym, TensorElement};
use crate::toeplitz::{ToeplitzBasis, ToeplitzElement};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform in `{−3, …, 3} \ {0}`.
pub fn nonzero_coeff<R: Rng>(rng: &mut R) -> Rat {
    let c = *[-3i64, -2, -1, 1, 2, 3].choose(rng).expect("nonempty");
    rat(c)
}

/// Bounds for random basis symbols.
#[derive(Clone, Copy, Debug)]
pub struct Bounds {
    pub max_terms: usize,
    pub max_shift: i64,
    pub max_index: u32,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_terms: 3, max_shift: 2, max_index: 2 }
    }
}

pub fn random_basis<R: Rng>(rng: &mut R, b: Bounds) -> ToeplitzBasis {
    if rng.gen_bool(0.5) {
        ToeplitzBasis::Shift(rng.gen_range(-b.max_shift..=b.max_shift))
    } else {
        ToeplitzBasis::Unit(rng.gen_range(0..=b.max_index), rng.gen_range(0..=b.max_index))
    }
}

pub fn random_toeplitz<R: Rng>(rng: &mut R, b: Bounds) -> ToeplitzElement {
    let n = rng.gen_range(1..=b.max_terms);
    ToeplitzElement::from_terms((0..n).map(|_| (random_basis(rng, b), nonzero_coeff(rng))))
}

pub fn random_tuple<R: Rng>(rng: &mut R, sig: &Signature, b: Bounds) -> Vec<Sym> {
    sig.kinds()
        .iter()
        .map(|k| match k {
            SlotKind::Toeplitz => Sym::T(random_basis(rng, b)),
            SlotKind::Circle => Sym::C(rng.gen_range(-b.max_shift..=b.max_shift)),
        })
        .collect()
}

pub fn random_tensor<R: Rng>(rng: &mut R, sig: &Signature, b: Bounds) -> TensorElement {
    let n = rng.gen_range(1..=b.max_terms);
    TensorElement::from_terms(sig, (0..n).map(|_| (random_tuple(rng, sig, b), nonzero_coeff(rng))))
}

/// Homogeneous random element of the given degree.
pub fn random_homogeneous<R: Rng>(rng: &mut R, sig: &Signature, b: Bounds, degree: i64) -> TensorElement {
    let mut terms = Vec::new();
    while terms.len() < b.max_terms {
        let t = random_tuple(rng, sig, b);
        if TensorElement::tuple_degree(&t) == degree {
            terms.push((t, nonzero_coeff(rng)));
        }
        if !terms.is_empty() && rng.gen_bool(0.4) {
            break;
        }
    }
    TensorElement::from_terms(sig, terms)
}

/// Points on the unit circle, normalized so `|z| = 1` to rounding.
pub fn unit_circle_points<R: Rng>(rng: &mut R, count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_streams_repeat() {
        let b = Bounds::default();
        let a = random_toeplitz(&mut rng(5), b);
        let c = random_toeplitz(&mut rng(5), b);
        assert_eq!(a, c);
        for z in unit_circle_points(&mut rng(1), 4) {
            assert!((z.norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn homogeneous_has_one_degree() {
        let sig = Signature::toeplitz(2);
        let mut r = rng(3);
        for d in -2..=2 {
            let x = random_homogeneous(&mut r, &sig, Bounds::default(), d);
            assert!(x.degree_split().keys().all(|k| *k == d));
        }
    }
}
