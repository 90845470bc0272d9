//! Finite probability schemes.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::label::Label;
use crate::rational::Rational;

/// Label of the single outcome of the one-point scheme.
pub const POINT_LABEL: &str = "*";

/// A finite set of outcomes with strictly positive masses summing to 1.
///
/// Outcomes are kept sorted by the label order, so two schemes are equal
/// exactly when they carry the same labels with the same masses. Cloning is
/// cheap; the data is shared and never mutated.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scheme {
    data: Arc<SchemeData>,
}

#[derive(PartialEq, Eq, Hash)]
struct SchemeData {
    outcomes: Vec<Label>,
    masses: Vec<Rational>,
}

impl Scheme {
    /// Validates and canonicalizes `outcomes` with their `masses`.
    pub fn new(outcomes: Vec<Label>, masses: Vec<Rational>) -> Result<Self> {
        if outcomes.len() != masses.len() {
            return Err(Error::LengthMismatch {
                expected: outcomes.len(),
                found: masses.len(),
            });
        }
        Self::from_pairs(outcomes.into_iter().zip(masses))
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Label, Rational)>) -> Result<Self> {
        let mut pairs: Vec<(Label, Rational)> = pairs.into_iter().collect();
        if pairs.is_empty() {
            return Err(Error::EmptySupport);
        }
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateLabel(w[0].0.clone()));
        }
        if let Some((label, mass)) = pairs.iter().find(|(_, m)| !m.is_positive()) {
            return Err(Error::NonPositiveMass {
                label: label.clone(),
                mass: mass.clone(),
            });
        }
        let total: Rational = pairs.iter().map(|(_, m)| m).sum();
        if !total.is_one() {
            return Err(Error::MassNotNormalized(total));
        }
        let (outcomes, masses) = pairs.into_iter().unzip();
        Ok(Scheme {
            data: Arc::new(SchemeData { outcomes, masses }),
        })
    }

    /// The uniform scheme on `labels`.
    pub fn uniform(labels: impl IntoIterator<Item = Label>) -> Result<Self> {
        let labels: Vec<Label> = labels.into_iter().collect();
        if labels.is_empty() {
            return Err(Error::EmptySupport);
        }
        let mass = Rational::new(1.into(), num_bigint::BigInt::from(labels.len()));
        Self::from_pairs(labels.into_iter().map(|l| (l, mass.clone())))
    }

    /// The uniform scheme on `1..=n`. Panics when `n == 0`.
    pub fn uniform_n(n: usize) -> Self {
        Self::uniform((1..=n as i64).map(Label::from)).expect("n must be positive")
    }

    /// The terminal one-point scheme.
    pub fn point() -> Self {
        Self::from_pairs([(Label::atom(POINT_LABEL), Rational::one())]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.data.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn outcomes(&self) -> &[Label] {
        &self.data.outcomes
    }

    pub fn masses(&self) -> &[Rational] {
        &self.data.masses
    }

    pub fn outcome(&self, index: usize) -> &Label {
        &self.data.outcomes[index]
    }

    pub fn mass_at(&self, index: usize) -> &Rational {
        &self.data.masses[index]
    }

    pub fn index_of(&self, label: &Label) -> Option<usize> {
        self.data.outcomes.binary_search(label).ok()
    }

    pub fn mass(&self, label: &Label) -> Option<&Rational> {
        self.index_of(label).map(|i| &self.data.masses[i])
    }

    pub fn contains(&self, label: &Label) -> bool {
        self.index_of(label).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Label, &Rational)> {
        self.data.outcomes.iter().zip(&self.data.masses)
    }

    pub fn is_uniform(&self) -> bool {
        self.data.masses.windows(2).all(|w| w[0] == w[1])
    }

    pub(crate) fn require_index(&self, label: &Label) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::UnknownLabel(label.clone()))
    }

    /// Sorted masses, for comparing schemes up to relabeling.
    pub fn mass_multiset(&self) -> Vec<Rational> {
        let mut masses = self.data.masses.clone();
        masses.sort();
        masses
    }

    pub fn label_set(&self) -> BTreeSet<&Label> {
        self.data.outcomes.iter().collect()
    }

    /// The independent product of two schemes on pair labels.
    pub fn product(&self, other: &Scheme) -> Scheme {
        let pairs = self.iter().flat_map(|(a, pa)| {
            other
                .iter()
                .map(move |(b, pb)| (Label::pair(a.clone(), b.clone()), pa * pb))
        });
        Scheme::from_pairs(pairs).expect("product of schemes is a scheme")
    }
}

impl fmt::Debug for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.iter().map(|(l, m)| (l.to_string(), m.to_string())))
            .finish()
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (l, m)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}: {m}")?;
        }
        f.write_str("}")
    }
}
