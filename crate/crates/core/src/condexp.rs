//! Conditional expectation relative to a partition (equivalently, the
//! algebra of variables constant on its blocks) and the total laws built on
//! it.
//!
//! `E_P` is always computed as the composite `π♯ ∘ π♭` for the quotient
//! bundle `π` of `P`, never by ad hoc block averaging.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::Partition;
use crate::error::{Error, Result};
use crate::rational::{one, Rational};
use crate::variable::{distribution_scheme, expectation, Event, RandomFunction, RandomVariable};

/// `E_P X`: constant on each block, equal there to the mean of `X` on the
/// block.
pub fn cond_expectation(x: &RandomVariable, partition: &Partition) -> Result<RandomVariable> {
    if x.domain() != partition.domain() {
        return Err(Error::DomainMismatch);
    }
    let quotient = partition.to_bundle();
    quotient.pullback(&quotient.fiber_average(x)?)
}

/// `Pr(B | A) = Pr(B ∩ A) / Pr(A)`.
pub fn cond_probability(b: &Event, a: &Event) -> Result<Rational> {
    let both = b.intersection(a)?;
    if a.is_empty() {
        return Err(Error::EmptyConditioningEvent);
    }
    Ok(both.probability() / a.probability())
}

/// `cov_P(X, Y) = E_P((X − E_P X)(Y − E_P Y))`.
pub fn cond_covariance(
    x: &RandomVariable,
    y: &RandomVariable,
    partition: &Partition,
) -> Result<RandomVariable> {
    let dx = x.sub(&cond_expectation(x, partition)?)?;
    let dy = y.sub(&cond_expectation(y, partition)?)?;
    cond_expectation(&dx.mul(&dy)?, partition)
}

pub fn cond_variance(x: &RandomVariable, partition: &Partition) -> Result<RandomVariable> {
    cond_covariance(x, x, partition)
}

/// `E′_P E_P X`: the expectation, on the base of the quotient bundle, of the
/// projection transported there by `π♭`.
pub fn base_expectation(x: &RandomVariable, partition: &Partition) -> Result<Rational> {
    let quotient = partition.to_bundle();
    let projected = cond_expectation(x, partition)?;
    Ok(expectation(&quotient.fiber_average(&projected)?))
}

/// Both sides of `E Y = Σ_x E(Y | X = x) Pr(X = x)`.
pub fn total_expectation_sides(
    y: &RandomVariable,
    x: &RandomFunction,
) -> Result<(Rational, Rational)> {
    if y.domain() != x.domain() {
        return Err(Error::DomainMismatch);
    }
    let (base, bundle) = distribution_scheme(x);
    let conditional_means = bundle.fiber_average(y)?;
    let rhs = conditional_means
        .values()
        .iter()
        .zip(base.masses())
        .fold(Rational::zero(), |acc, (mean, mass)| acc + mean * mass);
    Ok((expectation(y), rhs))
}

/// Law of total expectation for `Y` conditioned on `X`.
pub fn check_total_expectation(y: &RandomVariable, x: &RandomFunction) -> Result<bool> {
    let (lhs, rhs) = total_expectation_sides(y, x)?;
    Ok(lhs == rhs)
}

/// Both sides of `Pr(B) = Σ_i Pr(B | A_i) Pr(A_i)` over the blocks of
/// `partition`.
pub fn total_probability_sides(b: &Event, partition: &Partition) -> Result<(Rational, Rational)> {
    if b.domain() != partition.domain() {
        return Err(Error::DomainMismatch);
    }
    let domain = partition.domain();
    let mut rhs = Rational::zero();
    for block in partition.blocks() {
        let a = Event::new(domain, block)?;
        rhs += cond_probability(b, &a)? * a.probability();
    }
    Ok((b.probability(), rhs))
}

/// `Σ f(x) Pr(X = x)` with `f` given as a table over the range of `X`.
pub fn lotus(table: &BTreeMap<Rational, Rational>, x: &RandomVariable) -> Result<Rational> {
    let (base, _) = distribution_scheme(&x.to_function());
    let mut total = Rational::zero();
    for (label, mass) in base.iter() {
        let value: Rational = label.to_string().parse().expect("labels print rationals");
        let fx = table
            .get(&value)
            .ok_or_else(|| Error::IncompleteTable(value.clone()))?;
        total += fx * mass;
    }
    Ok(total)
}

/// Both sides of
/// `cov_coarse(X, Y) = E_coarse cov_fine(X, Y) + cov_coarse(E_fine X, E_fine Y)`.
pub fn total_covariance_decomposition(
    x: &RandomVariable,
    y: &RandomVariable,
    fine: &Partition,
    coarse: &Partition,
) -> Result<(RandomVariable, RandomVariable)> {
    if x.domain() != fine.domain() || y.domain() != fine.domain() {
        return Err(Error::DomainMismatch);
    }
    if !fine.refines(coarse)? {
        return Err(Error::NotARefinement);
    }
    let lhs = cond_covariance(x, y, coarse)?;
    let within = cond_expectation(&cond_covariance(x, y, fine)?, coarse)?;
    let between = cond_covariance(
        &cond_expectation(x, fine)?,
        &cond_expectation(y, fine)?,
        coarse,
    )?;
    Ok((lhs, within.add(&between)?))
}

/// Total, within-group and between-group sums of squares for a uniform
/// scheme split into groups of equal size `n`:
/// `Σ(X − E X)² = Σ(X − E(X|A_ω))² + n Σ_A (E(X|A) − E X)²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarianceComponents {
    pub tss: Rational,
    pub wss: Rational,
    pub bss: Rational,
}

pub fn variance_components(x: &RandomVariable, partition: &Partition) -> Result<VarianceComponents> {
    let domain = partition.domain();
    if x.domain() != domain {
        return Err(Error::DomainMismatch);
    }
    if !domain.is_uniform() {
        return Err(Error::NonUniformScheme);
    }
    let group_size = partition.block_indices()[0].len();
    if partition.block_indices().iter().any(|b| b.len() != group_size) {
        return Err(Error::UnequalBlockSizes);
    }
    let mean = expectation(x);
    let projected = cond_expectation(x, partition)?;
    let square = |v: Rational| &v * &v;
    let tss = x.values().iter().map(|v| square(v - &mean)).sum();
    let wss = x
        .values()
        .iter()
        .zip(projected.values())
        .map(|(v, p)| square(v - p))
        .sum();
    let between: Rational = partition
        .block_indices()
        .iter()
        .map(|b| square(projected.value_at(b[0]) - &mean))
        .sum();
    let bss = between * Rational::from_integer(group_size.into());
    Ok(VarianceComponents { tss, wss, bss })
}

/// `var X = E(var_P X) + var(E_P X)` as a pair of sides.
pub fn total_variance_sides(x: &RandomVariable, partition: &Partition) -> Result<(Rational, Rational)> {
    let within = expectation(&cond_variance(x, partition)?);
    let between = cond_expectation(x, partition)?.variance();
    Ok((x.variance(), within + between))
}

/// Whether `X − E_P X` is orthogonal to every atom indicator of
/// `partition` and to the constants.
pub fn residual_is_orthogonal(x: &RandomVariable, partition: &Partition) -> Result<bool> {
    let residual = x.sub(&cond_expectation(x, partition)?)?;
    for atom in partition.atom_indicators() {
        if !residual.inner_product(&atom)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(residual.inner_product(&RandomVariable::constant(x.domain(), one()))?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::Label;
    use crate::rational::{int, ratio};
    use crate::scheme::Scheme;

    fn die() -> Scheme {
        Scheme::uniform_n(6)
    }

    fn labels(faces: &[i64]) -> Vec<Label> {
        faces.iter().map(|&f| Label::from(f)).collect()
    }

    fn face(l: &Label) -> i64 {
        l.to_string().parse().unwrap()
    }

    fn power(k: u32) -> RandomVariable {
        RandomVariable::from_fn(&die(), |l| int(face(l).pow(k)))
    }

    fn halves() -> Partition {
        Partition::new(&die(), &[labels(&[1, 2, 3]), labels(&[4, 5, 6])]).unwrap()
    }

    #[test]
    fn conditional_means_of_squares() {
        let e = cond_expectation(&power(2), &halves()).unwrap();
        assert_eq!(e.value(&Label::from(1)), Some(&ratio(14, 3)));
        assert_eq!(e.value(&Label::from(6)), Some(&ratio(77, 3)));
        assert!(halves().contains(&e).unwrap());
        let d = die();
        assert_eq!(cond_expectation(&power(2), &Partition::discrete(&d)).unwrap(), power(2));
        assert_eq!(
            cond_expectation(&power(2), &Partition::single_block(&d)).unwrap(),
            RandomVariable::constant(&d, ratio(91, 6))
        );
    }

    #[test]
    fn conditional_probabilities() {
        let d = die();
        let a = Event::new(&d, &labels(&[1, 2, 3])).unwrap();
        let b = Event::new(&d, &labels(&[1, 3, 5])).unwrap();
        let c = Event::new(&d, &labels(&[4, 5, 6])).unwrap();
        assert_eq!(cond_probability(&a, &a).unwrap(), int(1));
        assert_eq!(cond_probability(&c, &a).unwrap(), int(0));
        assert_eq!(cond_probability(&b, &a).unwrap(), ratio(2, 3));
        assert_eq!(
            cond_probability(&b, &Event::empty(&d)),
            Err(Error::EmptyConditioningEvent)
        );
    }

    #[test]
    fn conditional_variances() {
        let d = die();
        let omega = power(1);
        let v = cond_variance(&omega, &halves()).unwrap();
        assert!(v.values().iter().all(|x| *x >= int(0)));
        assert!(cond_variance(&omega, &Partition::discrete(&d)).unwrap().is_zero());
        let odd = Event::new(&d, &labels(&[1, 3, 5])).unwrap().indicator();
        assert_eq!(
            cond_covariance(&odd, &odd, &Partition::single_block(&d)).unwrap(),
            RandomVariable::constant(&d, ratio(1, 4))
        );
        assert!(cond_variance(&RandomVariable::constant(&d, int(5)), &halves())
            .unwrap()
            .is_zero());
        assert_eq!(
            cond_variance(&omega, &Partition::single_block(&d)).unwrap().values()[0],
            ratio(35, 12)
        );
        let v2 = cond_variance(&power(2), &halves()).unwrap();
        assert_eq!(v2.value(&Label::from(2)), Some(&ratio(98, 9)));
        assert_eq!(v2.value(&Label::from(5)), Some(&ratio(602, 9)));
    }

    #[test]
    fn total_expectation() {
        let d = die();
        let constant = RandomFunction::constant(&d, Label::atom("c"));
        assert!(check_total_expectation(&power(2), &constant).unwrap());
        let parity = RandomFunction::from_fn(&d, |l| Label::from(face(l) % 2));
        let (lhs, rhs) = total_expectation_sides(&power(2), &parity).unwrap();
        assert_eq!(lhs, ratio(91, 6));
        assert_eq!(rhs, ratio(91, 6));
        let b = Event::new(&d, &labels(&[1, 3, 5])).unwrap();
        let (p, q) = total_probability_sides(&b, &halves()).unwrap();
        assert_eq!(p, ratio(1, 2));
        assert_eq!(q, ratio(2, 3) * ratio(1, 2) + ratio(1, 3) * ratio(1, 2));
    }

    #[test]
    fn lotus_tables() {
        let x = power(1);
        let identity: BTreeMap<Rational, Rational> = (1..=6).map(|v| (int(v), int(v))).collect();
        assert_eq!(lotus(&identity, &x).unwrap(), ratio(7, 2));
        let square: BTreeMap<Rational, Rational> = (1..=6).map(|v| (int(v), int(v * v))).collect();
        assert_eq!(lotus(&square, &x).unwrap(), ratio(91, 6));
        let constant: BTreeMap<Rational, Rational> = (1..=6).map(|v| (int(v), int(9))).collect();
        assert_eq!(lotus(&constant, &x).unwrap(), int(9));
        let partial: BTreeMap<Rational, Rational> = (1..=5).map(|v| (int(v), int(v))).collect();
        assert_eq!(lotus(&partial, &x), Err(Error::IncompleteTable(int(6))));
    }

    #[test]
    fn covariance_decomposition() {
        let d = die();
        let omega = power(1);
        let h = halves();
        let (lhs, rhs) = total_covariance_decomposition(&omega, &power(2), &h, &h).unwrap();
        assert_eq!(lhs, rhs);
        let single = Partition::single_block(&d);
        let (lhs, rhs) = total_covariance_decomposition(&omega, &omega, &h, &single).unwrap();
        assert_eq!(lhs, RandomVariable::constant(&d, ratio(35, 12)));
        assert_eq!(lhs, rhs);
        let c = RandomVariable::constant(&d, int(2));
        let (lhs, rhs) = total_covariance_decomposition(&c, &c, &h, &single).unwrap();
        assert!(lhs.is_zero() && rhs.is_zero());
        assert_eq!(
            total_covariance_decomposition(&omega, &omega, &single, &h),
            Err(Error::NotARefinement)
        );
    }

    #[test]
    fn sums_of_squares() {
        let d = die();
        let c = variance_components(&power(1), &halves()).unwrap();
        assert_eq!(c.tss, ratio(35, 2));
        assert_eq!(c.wss, int(4));
        assert_eq!(c.bss, ratio(27, 2));
        let zero = variance_components(&RandomVariable::constant(&d, int(1)), &halves()).unwrap();
        assert!(zero.tss.is_zero() && zero.wss.is_zero() && zero.bss.is_zero());
        let singles = variance_components(&power(2), &Partition::discrete(&d)).unwrap();
        assert!(singles.wss.is_zero());
        assert_eq!(singles.tss, singles.bss);
        let uneven = Partition::new(&d, &[labels(&[1]), labels(&[2, 3, 4, 5, 6])]).unwrap();
        assert_eq!(variance_components(&power(1), &uneven), Err(Error::UnequalBlockSizes));
        let skewed = Scheme::new(labels(&[1, 2]), vec![ratio(1, 3), ratio(2, 3)]).unwrap();
        let x = RandomVariable::constant(&skewed, int(1));
        assert_eq!(
            variance_components(&x, &Partition::discrete(&skewed)),
            Err(Error::NonUniformScheme)
        );
    }
}
