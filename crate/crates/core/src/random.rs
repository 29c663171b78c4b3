//! Seeded generators for randomized checks.
//!
//! K elements are fractions of θ-polynomials of degree at most 2 with a
//! nonzero denominator; Drinfeld ranks are drawn from 2..=5. Every trial
//! gets its own ChaCha stream, so a failure is reproduced from (seed, trial)
//! alone.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::field::{Fq, FqElement, FqPoly, KElement};
use crate::skew::{SkewMatrix, SkewPoly};
use crate::tmodule::DrinfeldModule;

pub const MAX_THETA_DEGREE: usize = 2;

/// The generator for one trial of a seeded run.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn fq_element<R: Rng>(rng: &mut R, fq: &Fq) -> FqElement {
    FqElement(rng.gen_range(0..fq.q() as u32))
}

pub fn nonzero_fq<R: Rng>(rng: &mut R, fq: &Fq) -> FqElement {
    FqElement(rng.gen_range(1..fq.q() as u32))
}

/// A polynomial in F_q[θ] of degree at most `max_deg`.
pub fn fq_poly<R: Rng>(rng: &mut R, fq: &Fq, max_deg: usize) -> FqPoly {
    FqPoly::from_coeffs((0..=max_deg).map(|_| fq_element(rng, fq)).collect())
}

pub fn k_element<R: Rng>(rng: &mut R, fq: &Fq) -> KElement {
    let num = fq_poly(rng, fq, MAX_THETA_DEGREE);
    let den = loop {
        let d = fq_poly(rng, fq, MAX_THETA_DEGREE);
        if !d.is_zero() {
            break d;
        }
    };
    KElement::normalize(fq, num, den).expect("nonzero denominator")
}

pub fn nonzero_k<R: Rng>(rng: &mut R, fq: &Fq) -> KElement {
    loop {
        let x = k_element(rng, fq);
        if !x.is_zero() {
            return x;
        }
    }
}

/// A twisted polynomial of τ-degree at most `max_deg`.
pub fn skew_poly<R: Rng>(rng: &mut R, fq: &Fq, max_deg: usize) -> SkewPoly {
    SkewPoly::from_coeffs(fq, (0..=max_deg).map(|_| k_element(rng, fq)).collect())
}

/// Like [`skew_poly`] but with zero constant term.
pub fn skew_poly_no_constant<R: Rng>(rng: &mut R, fq: &Fq, max_deg: usize) -> SkewPoly {
    let mut coeffs: Vec<KElement> = (0..=max_deg).map(|_| k_element(rng, fq)).collect();
    coeffs[0] = KElement::zero(fq);
    SkewPoly::from_coeffs(fq, coeffs)
}

pub fn skew_matrix<R: Rng>(rng: &mut R, fq: &Fq, rows: usize, cols: usize, max_deg: usize) -> SkewMatrix {
    let entries = (0..rows).map(|_| (0..cols).map(|_| skew_poly(rng, fq, max_deg)).collect()).collect();
    SkewMatrix::from_rows(fq, entries).expect("rectangular")
}

pub fn rank<R: Rng>(rng: &mut R) -> usize {
    rng.gen_range(2..=5)
}

/// A Drinfeld module of the given rank with random `a_1, ..., a_r`, `a_r ≠ 0`.
pub fn drinfeld<R: Rng>(rng: &mut R, fq: &Fq, rank: usize) -> DrinfeldModule {
    let mut coeffs: Vec<KElement> = (1..rank).map(|_| k_element(rng, fq)).collect();
    coeffs.push(nonzero_k(rng, fq));
    DrinfeldModule::new(coeffs).expect("nonzero leading coefficient")
}

/// As [`drinfeld`] with `a_r = 1`.
pub fn monic_drinfeld<R: Rng>(rng: &mut R, fq: &Fq, rank: usize) -> DrinfeldModule {
    let mut coeffs: Vec<KElement> = (1..rank).map(|_| k_element(rng, fq)).collect();
    coeffs.push(KElement::one(fq));
    DrinfeldModule::new(coeffs).expect("monic")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let fq = Fq::prime(3).unwrap();
        let a = k_element(&mut trial_rng(7, 3), &fq);
        let b = k_element(&mut trial_rng(7, 3), &fq);
        assert_eq!(a, b);
        let xs: Vec<KElement> = (0..8).map(|t| k_element(&mut trial_rng(7, t), &fq)).collect();
        assert!(xs.iter().any(|x| x != &xs[0]));
    }

    #[test]
    fn shapes_and_degrees() {
        let fq = Fq::of_order(4).unwrap();
        let mut rng = trial_rng(1, 0);
        for _ in 0..50 {
            let x = k_element(&mut rng, &fq);
            assert!(x.numerator().degree().unwrap_or(0) <= MAX_THETA_DEGREE);
            assert!(x.denominator().degree().unwrap() <= MAX_THETA_DEGREE);
            let r = rank(&mut rng);
            assert!((2..=5).contains(&r));
            let e = drinfeld(&mut rng, &fq, r);
            assert_eq!(e.rank(), r);
            assert!(monic_drinfeld(&mut rng, &fq, r).a(r).is_one());
            assert!(skew_poly_no_constant(&mut rng, &fq, 3).coeff(0).is_zero());
        }
    }
}
