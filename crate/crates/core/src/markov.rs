//! Finite Markov chains as iterated fiber products of adjacent-pair schemes.

use crate::bundle::Bundle;
use crate::error::{Error, Result};
use crate::fiberprod::{canonical_injection, check_scheme_iso, fiber_product};
use crate::label::Label;
use crate::scheme::Scheme;
use crate::variable::{joint, RandomFunction};

/// Checks, for each `2 ≤ i ≤ n`, that
/// `[⟨X₁,…,Xᵢ⟩] ≅ [⟨X₁,…,Xᵢ₋₁⟩] ×_{[Xᵢ₋₁]} [⟨Xᵢ₋₁,Xᵢ⟩]` via the canonical map.
/// Returns the least failing `i` (1-based) when the sequence is not Markov.
pub fn markov_verify(xs: &[RandomFunction]) -> Result<(bool, Option<usize>)> {
    if xs.len() < 2 {
        return Err(Error::TooShort(xs.len()));
    }
    if xs.iter().any(|x| x.domain() != xs[0].domain()) {
        return Err(Error::DomainMismatch);
    }
    for i in 2..=xs.len() {
        let whole = joint(&xs[..i])?;
        let history = joint(&xs[..i - 1])?;
        let step = joint(&xs[i - 2..i])?;
        let iso = canonical_injection(&whole, &history, &step, &xs[i - 2])?;
        if check_scheme_iso(&iso).is_err() {
            return Ok((false, Some(i)));
        }
    }
    Ok((true, None))
}

/// Glues adjacent-pair schemes `[⟨Xᵢ,Xᵢ₊₁⟩]` into the path scheme on tuples
/// `⟨s₁,…,sₙ⟩`. A single pair scheme is returned unchanged.
///
/// Consecutive schemes must agree exactly on the shared marginal; the
/// `MarginalMismatch` index is 1-based.
pub fn markov_build(pair_schemes: &[Scheme]) -> Result<Scheme> {
    let (first, rest) = pair_schemes.split_first().ok_or(Error::EmptySequence)?;
    for scheme in pair_schemes {
        if let Some(l) = scheme.outcomes().iter().find(|l| l.as_pair().is_none()) {
            return Err(Error::NotAPairScheme(l.clone()));
        }
    }
    let mut paths = first.clone();
    for (i, pairs) in rest.iter().enumerate() {
        let last = Bundle::induced(&paths, |l| {
            l.as_tuple().and_then(|t| t.last()).expect("path label").clone()
        });
        let start = Bundle::induced(pairs, |l| l.as_pair().expect("pair label").0.clone());
        if last.base() != start.base() {
            return Err(Error::MarginalMismatch(i + 1));
        }
        let glued = fiber_product(&last, &start)?;
        paths = Scheme::from_pairs(glued.product().iter().map(|(l, m)| {
            let (path, step) = l.as_pair().expect("pair label");
            let mut states = path.as_tuple().expect("path label").to_vec();
            states.push(step.as_pair().expect("pair label").1.clone());
            (Label::Tuple(states), m.clone())
        }))?;
    }
    Ok(paths)
}

/// The coordinate projections of a scheme whose outcomes are all tuples of
/// one arity.
pub fn coordinate_functions(scheme: &Scheme) -> Result<Vec<RandomFunction>> {
    let arity = scheme.outcome(0).as_tuple().map_or(0, <[Label]>::len);
    if arity == 0
        || scheme
            .outcomes()
            .iter()
            .any(|l| l.as_tuple().map(<[Label]>::len) != Some(arity))
    {
        return Err(Error::ShapeMismatch);
    }
    Ok((0..arity)
        .map(|k| RandomFunction::from_fn(scheme, |l| l.as_tuple().expect("tuple")[k].clone()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn bit(b: u8) -> Label {
        Label::atom(if b == 0 { "0" } else { "1" })
    }

    fn sticky() -> Scheme {
        Scheme::from_pairs([
            (Label::pair(bit(0), bit(0)), ratio(3, 8)),
            (Label::pair(bit(0), bit(1)), ratio(1, 8)),
            (Label::pair(bit(1), bit(0)), ratio(1, 8)),
            (Label::pair(bit(1), bit(1)), ratio(3, 8)),
        ])
        .unwrap()
    }

    fn coins() -> Scheme {
        let bits = Scheme::uniform([bit(0), bit(1)]).unwrap();
        bits.product(&bits)
    }

    #[test]
    fn sticky_chain() {
        let chain = markov_build(&[sticky(), sticky()]).unwrap();
        assert_eq!(chain.len(), 8);
        let path = Label::tuple(vec![bit(0), bit(0), bit(0)]).unwrap();
        assert_eq!(chain.mass(&path), Some(&ratio(9, 32)));
        let xs = coordinate_functions(&chain).unwrap();
        assert_eq!(markov_verify(&xs).unwrap(), (true, None));
        let reversed: Vec<_> = xs.into_iter().rev().collect();
        assert_eq!(markov_verify(&reversed).unwrap(), (true, None));
    }

    #[test]
    fn single_pair_scheme() {
        assert_eq!(markov_build(&[sticky()]).unwrap(), sticky());
    }

    #[test]
    fn pairs_are_always_markov() {
        let xs = coordinate_functions(&sticky()).unwrap();
        assert_eq!(markov_verify(&xs).unwrap(), (true, None));
        assert_eq!(markov_verify(&xs[..1]), Err(Error::TooShort(1)));
    }

    #[test]
    fn returning_to_the_start_is_not_markov() {
        let xs = coordinate_functions(&coins()).unwrap();
        let seq = [xs[0].clone(), xs[1].clone(), xs[0].clone()];
        assert_eq!(markov_verify(&seq).unwrap(), (false, Some(3)));
    }

    #[test]
    fn marginals_must_agree() {
        let skewed = Scheme::from_pairs([
            (Label::pair(bit(0), bit(0)), ratio(1, 4)),
            (Label::pair(bit(1), bit(1)), ratio(3, 4)),
        ])
        .unwrap();
        assert_eq!(markov_build(&[sticky(), skewed]), Err(Error::MarginalMismatch(1)));
        let atoms = Scheme::uniform_n(2);
        assert!(matches!(markov_build(&[atoms]), Err(Error::NotAPairScheme(_))));
    }
}
