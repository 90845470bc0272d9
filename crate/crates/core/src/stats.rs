//! Simple linear regression, Chebyshev's inequality and the weak law of
//! large numbers, all evaluated exactly by enumerating outcomes.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{one, Rational};
use crate::variable::{Event, RandomVariable};

/// Orthogonal projection `Ŷ = aX + b` of `Y` onto `span{1, X}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegressionResult {
    pub slope: Rational,
    pub intercept: Rational,
    pub fitted: RandomVariable,
    pub residual: RandomVariable,
    pub var_fitted: Rational,
    pub var_residual: Rational,
    /// `None` when `var Y = 0`, where the ratio is undefined.
    pub r_squared: Option<Rational>,
}

pub fn linear_regression(x: &RandomVariable, y: &RandomVariable) -> Result<RegressionResult> {
    let cov = x.covariance(y)?;
    let var_x = x.variance();
    if var_x.is_zero() {
        return Err(Error::DegenerateRegressor);
    }
    let slope = cov / &var_x;
    let intercept = y.expectation() - &slope * x.expectation();
    let fitted = x.scale(&slope).shift(&intercept);
    let residual = y.sub(&fitted)?;
    let var_fitted = fitted.variance();
    let var_residual = residual.variance();
    let var_y = y.variance();
    let r_squared = (!var_y.is_zero()).then(|| &var_fitted / &var_y);
    Ok(RegressionResult {
        slope,
        intercept,
        fitted,
        residual,
        var_fitted,
        var_residual,
        r_squared,
    })
}

/// `Pr(|X − E X| ≥ ε)`, by enumeration.
pub fn deviation_probability(x: &RandomVariable, epsilon: &Rational) -> Rational {
    let mean = x.expectation();
    let values = x.values();
    Event::from_predicate(x.domain(), |l| {
        let i = x.domain().index_of(l).expect("own outcome");
        (&values[i] - &mean).abs() >= *epsilon
    })
    .probability()
}

/// Returns `(Pr(|X − E X| ≥ ε), var X / ε²)`; the first never exceeds the
/// second.
pub fn chebyshev_check(x: &RandomVariable, epsilon: &Rational) -> Result<(Rational, Rational)> {
    if !epsilon.is_positive() {
        return Err(Error::NonPositiveEpsilon(epsilon.clone()));
    }
    let bound = x.variance() / (epsilon * epsilon);
    Ok((deviation_probability(x, epsilon), bound))
}

/// Quantities behind the weak law of large numbers for pairwise
/// uncorrelated `X₁, …, Xₙ` with `var Xᵢ ≤ K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WllnCertificate {
    /// `var(X̄ₙ)` computed directly from the sample mean.
    pub var_mean: Rational,
    /// `(1/n²) Σ var Xᵢ`.
    pub var_sum_scaled: Rational,
    /// `K / (n ε²)`.
    pub bound: Rational,
    /// `Pr(|X̄ₙ − μ̄ₙ| ≥ ε)`.
    pub deviation_probability: Rational,
}

/// `K / (n ε²)`.
pub fn wlln_bound(variance_bound: &Rational, n: usize, epsilon: &Rational) -> Rational {
    variance_bound / (Rational::from_integer(n.into()) * epsilon * epsilon)
}

pub fn wlln_certificate(
    xs: &[RandomVariable],
    variance_bound: &Rational,
    epsilon: &Rational,
) -> Result<WllnCertificate> {
    if !epsilon.is_positive() {
        return Err(Error::NonPositiveEpsilon(epsilon.clone()));
    }
    let (first, rest) = xs.split_first().ok_or(Error::EmptySequence)?;
    if rest.iter().any(|x| x.domain() != first.domain()) {
        return Err(Error::DomainMismatch);
    }
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if !xs[i].covariance(&xs[j])?.is_zero() {
                return Err(Error::CorrelatedInputs(i, j));
            }
        }
    }
    let variances: Vec<Rational> = xs.iter().map(RandomVariable::variance).collect();
    if let Some((index, variance)) = variances
        .iter()
        .enumerate()
        .find(|(_, v)| *v > variance_bound)
    {
        return Err(Error::VarianceBoundViolated {
            index,
            variance: Box::new(variance.clone()),
            bound: Box::new(variance_bound.clone()),
        });
    }
    let n = Rational::from_integer(xs.len().into());
    let mut sum = RandomVariable::zero(first.domain());
    for x in xs {
        sum = sum.add(x)?;
    }
    let mean = sum.scale(&(one() / &n));
    let total_variance: Rational = variances.iter().sum();
    Ok(WllnCertificate {
        var_mean: mean.variance(),
        var_sum_scaled: total_variance / (&n * &n),
        bound: wlln_bound(variance_bound, xs.len(), epsilon),
        deviation_probability: deviation_probability(&mean, epsilon),
    })
}
