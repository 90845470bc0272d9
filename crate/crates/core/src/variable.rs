//! Random variables, random functions and events on a scheme.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::bundle::Bundle;
use crate::error::{Error, Result};
use crate::label::Label;
use crate::rational::Rational;
use crate::scheme::Scheme;

/// A rational-valued function on the outcomes of a scheme.
///
/// Values are stored in the scheme's outcome order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RandomVariable {
    domain: Scheme,
    values: Vec<Rational>,
}

/// A label-valued function on the outcomes of a scheme.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RandomFunction {
    domain: Scheme,
    values: Vec<Label>,
}

/// A subset of the outcomes of a scheme.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Event {
    domain: Scheme,
    members: Vec<bool>,
}

fn aligned<T: Clone>(domain: &Scheme, map: &BTreeMap<Label, T>) -> Result<Vec<T>> {
    if let Some(extra) = map.keys().find(|l| !domain.contains(l)) {
        return Err(Error::UnknownLabel(extra.clone()));
    }
    domain
        .outcomes()
        .iter()
        .map(|l| map.get(l).cloned().ok_or_else(|| Error::MissingValue(l.clone())))
        .collect()
}

fn check_len(domain: &Scheme, found: usize) -> Result<()> {
    if domain.len() != found {
        return Err(Error::LengthMismatch {
            expected: domain.len(),
            found,
        });
    }
    Ok(())
}

impl RandomVariable {
    /// Values listed in the domain's outcome order.
    pub fn new(domain: &Scheme, values: Vec<Rational>) -> Result<Self> {
        check_len(domain, values.len())?;
        Ok(Self {
            domain: domain.clone(),
            values,
        })
    }

    pub fn from_map(domain: &Scheme, map: &BTreeMap<Label, Rational>) -> Result<Self> {
        Ok(Self {
            domain: domain.clone(),
            values: aligned(domain, map)?,
        })
    }

    pub fn from_fn(domain: &Scheme, f: impl FnMut(&Label) -> Rational) -> Self {
        Self {
            domain: domain.clone(),
            values: domain.outcomes().iter().map(f).collect(),
        }
    }

    pub fn constant(domain: &Scheme, c: Rational) -> Self {
        Self {
            domain: domain.clone(),
            values: vec![c; domain.len()],
        }
    }

    pub fn zero(domain: &Scheme) -> Self {
        Self::constant(domain, Rational::zero())
    }

    /// The mass function viewed as a random variable.
    pub fn mass_function(domain: &Scheme) -> Self {
        Self {
            domain: domain.clone(),
            values: domain.masses().to_vec(),
        }
    }

    pub fn domain(&self) -> &Scheme {
        &self.domain
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value_at(&self, index: usize) -> &Rational {
        &self.values[index]
    }

    pub fn value(&self, label: &Label) -> Option<&Rational> {
        self.domain.index_of(label).map(|i| &self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Label, &Rational)> {
        self.domain.outcomes().iter().zip(&self.values)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    pub fn map(&self, mut f: impl FnMut(&Rational) -> Rational) -> Self {
        Self {
            domain: self.domain.clone(),
            values: self.values.iter().map(&mut f).collect(),
        }
    }

    pub fn zip_with(
        &self,
        other: &RandomVariable,
        mut f: impl FnMut(&Rational, &Rational) -> Rational,
    ) -> Result<Self> {
        self.same_domain(&other.domain)?;
        Ok(Self {
            domain: self.domain.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &RandomVariable) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &RandomVariable) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &RandomVariable) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|v| v * c)
    }

    /// Adds the constant `c`.
    pub fn shift(&self, c: &Rational) -> Self {
        self.map(|v| v + c)
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: &Rational, other: &RandomVariable, b: &Rational) -> Result<Self> {
        self.zip_with(other, |x, y| a * x + b * y)
    }

    pub fn expectation(&self) -> Rational {
        expectation(self)
    }

    pub fn inner_product(&self, other: &RandomVariable) -> Result<Rational> {
        inner_product(self, other)
    }

    /// `E(X − E X)²`.
    pub fn variance(&self) -> Rational {
        let mean = self.expectation();
        self.values
            .iter()
            .zip(self.domain.masses())
            .map(|(v, m)| (v - &mean) * (v - &mean) * m)
            .sum()
    }

    /// `E(X − E X)(Y − E Y)`.
    pub fn covariance(&self, other: &RandomVariable) -> Result<Rational> {
        self.same_domain(&other.domain)?;
        let (mx, my) = (self.expectation(), other.expectation());
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .zip(self.domain.masses())
            .map(|((x, y), m)| (x - &mx) * (y - &my) * m)
            .sum())
    }

    /// The same function with each value turned into an atomic label.
    /// Level sets are preserved since rationals print in reduced form.
    pub fn to_function(&self) -> RandomFunction {
        RandomFunction {
            domain: self.domain.clone(),
            values: self
                .values
                .iter()
                .map(|v| Label::Atom(v.to_string()))
                .collect(),
        }
    }

    fn same_domain(&self, other: &Scheme) -> Result<()> {
        if &self.domain != other {
            return Err(Error::DomainMismatch);
        }
        Ok(())
    }
}

impl fmt::Debug for RandomVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.iter().map(|(l, v)| (l.to_string(), v.to_string())))
            .finish()
    }
}

impl RandomFunction {
    pub fn new(domain: &Scheme, values: Vec<Label>) -> Result<Self> {
        check_len(domain, values.len())?;
        Ok(Self {
            domain: domain.clone(),
            values,
        })
    }

    pub fn from_map(domain: &Scheme, map: &BTreeMap<Label, Label>) -> Result<Self> {
        Ok(Self {
            domain: domain.clone(),
            values: aligned(domain, map)?,
        })
    }

    pub fn from_fn(domain: &Scheme, f: impl FnMut(&Label) -> Label) -> Self {
        Self {
            domain: domain.clone(),
            values: domain.outcomes().iter().map(f).collect(),
        }
    }

    pub fn identity(domain: &Scheme) -> Self {
        Self {
            domain: domain.clone(),
            values: domain.outcomes().to_vec(),
        }
    }

    pub fn constant(domain: &Scheme, value: Label) -> Self {
        Self {
            domain: domain.clone(),
            values: vec![value; domain.len()],
        }
    }

    pub fn domain(&self) -> &Scheme {
        &self.domain
    }

    pub fn values(&self) -> &[Label] {
        &self.values
    }

    pub fn value_at(&self, index: usize) -> &Label {
        &self.values[index]
    }

    pub fn value(&self, label: &Label) -> Option<&Label> {
        self.domain.index_of(label).map(|i| &self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Label, &Label)> {
        self.domain.outcomes().iter().zip(&self.values)
    }

    /// Post-composes with `f`.
    pub fn map(&self, f: impl FnMut(&Label) -> Label) -> Self {
        Self {
            domain: self.domain.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    /// Post-composes with a real-valued `f`.
    pub fn to_variable(&self, f: impl FnMut(&Label) -> Rational) -> RandomVariable {
        RandomVariable {
            domain: self.domain.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    /// The distribution scheme `[X]` together with the bundle `Ω → [X]`.
    pub fn distribution(&self) -> (Scheme, Bundle) {
        distribution_scheme(self)
    }
}

impl fmt::Debug for RandomFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.iter().map(|(l, v)| (l.to_string(), v.to_string())))
            .finish()
    }
}

impl Event {
    pub fn new<'a>(domain: &Scheme, members: impl IntoIterator<Item = &'a Label>) -> Result<Self> {
        let mut mask = vec![false; domain.len()];
        for label in members {
            mask[domain.require_index(label)?] = true;
        }
        Ok(Self {
            domain: domain.clone(),
            members: mask,
        })
    }

    pub fn from_predicate(domain: &Scheme, mut f: impl FnMut(&Label) -> bool) -> Self {
        Self {
            domain: domain.clone(),
            members: domain.outcomes().iter().map(&mut f).collect(),
        }
    }

    pub fn full(domain: &Scheme) -> Self {
        Self::from_predicate(domain, |_| true)
    }

    pub fn empty(domain: &Scheme) -> Self {
        Self::from_predicate(domain, |_| false)
    }

    pub fn domain(&self) -> &Scheme {
        &self.domain
    }

    pub fn contains(&self, label: &Label) -> bool {
        self.domain
            .index_of(label)
            .is_some_and(|i| self.members[i])
    }

    pub fn contains_index(&self, index: usize) -> bool {
        self.members[index]
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&m| m)
    }

    pub fn members(&self) -> impl Iterator<Item = &Label> {
        self.domain
            .outcomes()
            .iter()
            .zip(&self.members)
            .filter_map(|(l, &m)| m.then_some(l))
    }

    pub fn intersection(&self, other: &Event) -> Result<Event> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch);
        }
        Ok(Event {
            domain: self.domain.clone(),
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(a, b)| *a && *b)
                .collect(),
        })
    }

    pub fn indicator(&self) -> RandomVariable {
        indicator(self)
    }

    pub fn probability(&self) -> Rational {
        probability(self)
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.members().map(|l| l.to_string()))
            .finish()
    }
}

/// `Σ X(ω) pr(ω)`.
pub fn expectation(x: &RandomVariable) -> Rational {
    x.values
        .iter()
        .zip(x.domain.masses())
        .fold(Rational::zero(), |acc, (v, m)| acc + v * m)
}

/// `⟨X, Y⟩ = E(XY)`.
pub fn inner_product(x: &RandomVariable, y: &RandomVariable) -> Result<Rational> {
    Ok(expectation(&x.mul(y)?))
}

pub fn indicator(event: &Event) -> RandomVariable {
    RandomVariable {
        domain: event.domain.clone(),
        values: event
            .members
            .iter()
            .map(|&m| if m { Rational::one() } else { Rational::zero() })
            .collect(),
    }
}

pub fn probability(event: &Event) -> Rational {
    expectation(&indicator(event))
}

/// The scheme `[X]` on the range of `X` with masses `Pr(X = x)`, plus the
/// bundle from the domain onto it given by `X`.
pub fn distribution_scheme(x: &RandomFunction) -> (Scheme, Bundle) {
    let bundle = Bundle::induced_from_images(&x.domain, x.values.clone());
    (bundle.base().clone(), bundle)
}

/// The tuple-valued function `ω ↦ ⟨X₁(ω), …, Xₙ(ω)⟩`. A single function is
/// returned unchanged.
pub fn joint(fns: &[RandomFunction]) -> Result<RandomFunction> {
    let (first, rest) = fns.split_first().ok_or(Error::EmptySequence)?;
    if rest.iter().any(|f| f.domain != first.domain) {
        return Err(Error::DomainMismatch);
    }
    if rest.is_empty() {
        return Ok(first.clone());
    }
    let values = (0..first.domain.len())
        .map(|i| Label::Tuple(fns.iter().map(|f| f.values[i].clone()).collect()))
        .collect();
    Ok(RandomFunction {
        domain: first.domain.clone(),
        values,
    })
}
