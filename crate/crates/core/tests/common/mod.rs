#![allow(dead_code)]

use kolchin_core::lattice::ExponentVector;
use kolchin_core::poly::Poly;
use kolchin_core::{DiffOperator, RatFun};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Polynomial in `m` variables of total degree `<= deg`, small integer coefficients.
pub fn random_poly<R: Rng>(rng: &mut R, m: usize, deg: u32) -> Poly {
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let mut exps = vec![0u32; m];
        let mut budget = rng.gen_range(0..=deg);
        for e in exps.iter_mut() {
            let k = rng.gen_range(0..=budget);
            *e = k;
            budget -= k;
        }
        terms.push((exps, rational(rng.gen_range(-3..=3))));
    }
    Poly::from_terms(m, terms)
}

pub fn random_coefficient<R: Rng>(rng: &mut R, m: usize, deg: u32) -> RatFun {
    RatFun::from_poly(random_poly(rng, m, deg))
}

/// Rational function with a nonzero denominator of degree `<= 1`.
pub fn random_ratfun<R: Rng>(rng: &mut R, m: usize) -> RatFun {
    loop {
        let den = random_poly(rng, m, 1);
        if !den.is_zero() {
            return RatFun::new(random_poly(rng, m, 2), den).expect("nonzero denominator");
        }
    }
}

/// Operator of order `<= order` with polynomial coefficients of degree `<= deg`.
pub fn random_operator<R: Rng>(rng: &mut R, m: usize, order: u32, deg: u32) -> DiffOperator {
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(1..=4) {
        let mut exps = vec![0u32; m];
        let mut budget = rng.gen_range(0..=order);
        for e in exps.iter_mut() {
            let k = rng.gen_range(0..=budget);
            *e = k;
            budget -= k;
        }
        terms.push((ExponentVector::new(exps), random_coefficient(rng, m, deg)));
    }
    DiffOperator::from_terms(m, terms).expect("same m")
}
