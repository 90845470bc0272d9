//! Seeded generators for small random instances.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use probscheme::rational::{int, ratio};
use probscheme::{Bundle, Label, Partition, RandomFunction, RandomVariable, Rational, Scheme};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Positive weights `1..=6`, normalized: denominators stay small.
pub fn masses(rng: &mut impl Rng, n: usize) -> Vec<Rational> {
    let weights: Vec<i64> = (0..n).map(|_| rng.random_range(1..=6)).collect();
    let total: i64 = weights.iter().sum();
    weights.into_iter().map(|w| ratio(w, total)).collect()
}

pub fn labels(prefix: &str, n: usize) -> Vec<Label> {
    (0..n).map(|i| Label::atom(format!("{prefix}{i}"))).collect()
}

pub fn scheme_on(rng: &mut impl Rng, outcomes: Vec<Label>) -> Scheme {
    let m = masses(rng, outcomes.len());
    Scheme::new(outcomes, m).unwrap()
}

/// A scheme with `1..=max` outcomes labeled `w0, w1, …`.
pub fn scheme(rng: &mut impl Rng, max: usize) -> Scheme {
    let n = rng.random_range(1..=max);
    scheme_on(rng, labels("w", n))
}

pub fn small_rational(rng: &mut impl Rng) -> Rational {
    ratio(rng.random_range(-6..=6), rng.random_range(1..=3))
}

pub fn variable(rng: &mut impl Rng, s: &Scheme) -> RandomVariable {
    let values = (0..s.len()).map(|_| small_rational(rng)).collect();
    RandomVariable::new(s, values).unwrap()
}

/// A variable that is not constant, on a scheme with at least two outcomes.
pub fn nonconstant_variable(rng: &mut impl Rng, s: &Scheme) -> RandomVariable {
    assert!(s.len() >= 2);
    loop {
        let x = variable(rng, s);
        if !x.is_constant() {
            return x;
        }
    }
}

/// A random function into `{v0, …, v(k-1)}`.
pub fn function(rng: &mut impl Rng, s: &Scheme, k: usize) -> RandomFunction {
    RandomFunction::from_fn(s, |_| Label::atom(format!("v{}", rng.random_range(0..k))))
}

pub fn partition(rng: &mut impl Rng, s: &Scheme) -> Partition {
    let k = rng.random_range(1..=s.len());
    Partition::from_functions(s, &[function(rng, s, k)]).unwrap()
}

/// Merges blocks of `fine` at random into a coarser partition.
pub fn coarsening(rng: &mut impl Rng, fine: &Partition) -> Partition {
    let k = rng.random_range(1..=fine.len());
    let merged: Vec<usize> = (0..fine.len()).map(|_| rng.random_range(0..k)).collect();
    let s = fine.domain();
    let f = RandomFunction::from_fn(s, |l| {
        let i = s.index_of(l).unwrap();
        Label::from(merged[fine.block_of(i)] as i64)
    });
    Partition::from_functions(s, &[f]).unwrap()
}

/// A random surjection out of a random scheme; the base is induced.
pub fn bundle(rng: &mut impl Rng, max: usize) -> Bundle {
    let total = scheme(rng, max);
    let k = rng.random_range(1..=total.len());
    Bundle::induced(&total, |_| Label::atom(format!("b{}", rng.random_range(0..k))))
}

/// A bundle over the given base: each base outcome splits into
/// `1..=max_fiber` points carrying random shares of its mass.
pub fn bundle_over(rng: &mut impl Rng, base: &Scheme, max_fiber: usize, prefix: &str) -> Bundle {
    let mut pairs = Vec::new();
    let mut map = BTreeMap::new();
    for (j, (b, m)) in base.iter().enumerate() {
        let k = rng.random_range(1..=max_fiber);
        for (i, share) in masses(rng, k).into_iter().enumerate() {
            let label = Label::atom(format!("{prefix}{j}_{i}"));
            pairs.push((label.clone(), m * share));
            map.insert(label, b.clone());
        }
    }
    let total = Scheme::from_pairs(pairs).unwrap();
    Bundle::new(&total, base, &map).unwrap()
}

/// Like [`bundle_over`] but keeps the total at most `max_total` outcomes.
pub fn small_bundle_over(rng: &mut impl Rng, base: &Scheme, max_total: usize, prefix: &str) -> Bundle {
    loop {
        let b = bundle_over(rng, base, 2, prefix);
        if b.total().len() <= max_total {
            return b;
        }
    }
}

pub fn from_i64(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn die() -> Scheme {
    Scheme::uniform_n(6)
}

pub fn face(l: &Label) -> i64 {
    l.to_string().parse().unwrap()
}

pub fn die_power(k: u32) -> RandomVariable {
    RandomVariable::from_fn(&die(), |l| int(face(l).pow(k)))
}
