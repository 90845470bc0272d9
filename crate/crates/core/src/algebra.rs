//! Partitions of a scheme, the canonical representation of a (unital)
//! subalgebra of random variables.
//!
//! A subalgebra, the bundle it corresponds to, and the partition of the total
//! scheme into fibers carry the same information. Blocks are the atoms of
//! the algebra; a random variable belongs to the algebra iff it is constant
//! on every block.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::bundle::Bundle;
use crate::error::{Error, Result};
use crate::label::Label;
use crate::scheme::Scheme;
use crate::variable::{joint, RandomFunction, RandomVariable};

/// Blocks are stored as sorted index lists into the domain's outcomes,
/// ordered by least element.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    domain: Scheme,
    blocks: Arc<[Vec<usize>]>,
    block_of: Arc<[usize]>,
}

impl Partition {
    /// Validates that `blocks` cover the domain without overlap.
    pub fn new(domain: &Scheme, blocks: &[Vec<Label>]) -> Result<Self> {
        let mut block_of: Vec<Option<usize>> = vec![None; domain.len()];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for label in block {
                let i = domain.require_index(label)?;
                if block_of[i].replace(b).is_some() {
                    return Err(Error::InvalidPartition(format!(
                        "outcome {label} appears twice"
                    )));
                }
            }
        }
        let keys = block_of
            .iter()
            .zip(domain.outcomes())
            .map(|(b, l)| b.ok_or_else(|| Error::InvalidPartition(format!("outcome {l} is not covered"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_keys(domain, &keys))
    }

    /// Groups outcomes by equal keys; `keys` is in outcome order.
    pub(crate) fn from_keys<K: Ord>(domain: &Scheme, keys: &[K]) -> Self {
        let mut ids: BTreeMap<&K, usize> = BTreeMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut block_of = Vec::with_capacity(keys.len());
        for (i, key) in keys.iter().enumerate() {
            let id = *ids.entry(key).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[id].push(i);
            block_of.push(id);
        }
        Self {
            domain: domain.clone(),
            blocks: blocks.into(),
            block_of: block_of.into(),
        }
    }

    /// Every outcome in its own block: the algebra of all random variables.
    pub fn discrete(domain: &Scheme) -> Self {
        let keys: Vec<usize> = (0..domain.len()).collect();
        Self::from_keys(domain, &keys)
    }

    /// One block: the algebra of constants.
    pub fn single_block(domain: &Scheme) -> Self {
        Self::from_keys(domain, &vec![(); domain.len()])
    }

    /// Joint level sets of `fns`, i.e. the atoms of the algebra they
    /// generate. No functions gives the constants.
    pub fn from_functions(domain: &Scheme, fns: &[RandomFunction]) -> Result<Self> {
        if fns.iter().any(|f| f.domain() != domain) {
            return Err(Error::DomainMismatch);
        }
        if fns.is_empty() {
            return Ok(Self::single_block(domain));
        }
        Ok(Self::from_keys(domain, joint(fns)?.values()))
    }

    pub fn from_variables(domain: &Scheme, vars: &[RandomVariable]) -> Result<Self> {
        let fns: Vec<RandomFunction> = vars.iter().map(RandomVariable::to_function).collect();
        Self::from_functions(domain, &fns)
    }

    /// The fibers of `bundle`.
    pub fn from_bundle(bundle: &Bundle) -> Self {
        let keys: Vec<usize> = (0..bundle.total().len())
            .map(|i| bundle.image_index(i))
            .collect();
        Self::from_keys(bundle.total(), &keys)
    }

    /// The quotient bundle; each block maps to the label of its least
    /// outcome.
    pub fn to_bundle(&self) -> Bundle {
        let images = self
            .block_of
            .iter()
            .map(|&b| self.domain.outcome(self.blocks[b][0]).clone())
            .collect();
        Bundle::induced_from_images(&self.domain, images)
    }

    pub fn domain(&self) -> &Scheme {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_indices(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Index of the block containing outcome `index`.
    pub fn block_of(&self, index: usize) -> usize {
        self.block_of[index]
    }

    pub fn blocks(&self) -> Vec<Vec<&Label>> {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|&i| self.domain.outcome(i)).collect())
            .collect()
    }

    /// Whether `x` is constant on every block.
    pub fn contains(&self, x: &RandomVariable) -> Result<bool> {
        self.check_domain(x.domain())?;
        Ok(self
            .blocks
            .iter()
            .all(|b| b.iter().all(|&i| x.value_at(i) == x.value_at(b[0]))))
    }

    /// The indicator of `block`, given as its outcome labels in any order.
    pub fn atom_indicator(&self, block: &[Label]) -> Result<RandomVariable> {
        let mut indices = block
            .iter()
            .map(|l| self.domain.index_of(l).ok_or(Error::UnknownBlock))
            .collect::<Result<Vec<_>>>()?;
        indices.sort_unstable();
        let first = *indices.first().ok_or(Error::UnknownBlock)?;
        let b = self.block_of[first];
        if self.blocks[b] != indices {
            return Err(Error::UnknownBlock);
        }
        Ok(self.indicator_of_block(b))
    }

    pub fn indicator_of_block(&self, b: usize) -> RandomVariable {
        RandomVariable::from_fn(&self.domain, |l| {
            let i = self.domain.index_of(l).unwrap();
            if self.block_of[i] == b { crate::rational::one() } else { crate::rational::zero() }
        })
    }

    pub fn atom_indicators(&self) -> Vec<RandomVariable> {
        (0..self.len()).map(|b| self.indicator_of_block(b)).collect()
    }

    /// Whether every block of `self` lies inside a block of `coarse`.
    pub fn refines(&self, coarse: &Partition) -> Result<bool> {
        self.check_domain(&coarse.domain)?;
        Ok(self
            .blocks
            .iter()
            .all(|b| b.iter().all(|&i| coarse.block_of[i] == coarse.block_of[b[0]])))
    }

    /// When `self` refines `coarse`, the bundle `σ` with
    /// `coarse.to_bundle() = σ ∘ self.to_bundle()`.
    pub fn factorization(&self, coarse: &Partition) -> Result<Option<Bundle>> {
        if !self.refines(coarse)? {
            return Ok(None);
        }
        let fine = self.to_bundle();
        let target = coarse.to_bundle();
        let sigma = Bundle::from_fn(fine.base(), target.base(), |rep| {
            let i = self.domain.index_of(rep).expect("representative is an outcome");
            self.domain
                .outcome(coarse.blocks[coarse.block_of[i]][0])
                .clone()
        })?;
        Ok(Some(sigma))
    }

    /// Non-empty intersections of blocks of `self` and `other`.
    pub fn common_refinement(&self, other: &Partition) -> Result<Partition> {
        self.check_domain(&other.domain)?;
        let keys: Vec<(usize, usize)> = self
            .block_of
            .iter()
            .zip(other.block_of.iter())
            .map(|(&a, &b)| (a, b))
            .collect();
        Ok(Self::from_keys(&self.domain, &keys))
    }

    fn check_domain(&self, other: &Scheme) -> Result<()> {
        if &self.domain != other {
            return Err(Error::DomainMismatch);
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<Vec<String>> = self
            .blocks()
            .into_iter()
            .map(|b| b.into_iter().map(|l| l.to_string()).collect())
            .collect();
        f.debug_tuple("Partition").field(&blocks).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::compose;
    use crate::rational::{int, ratio};
    use crate::variable::Event;

    fn die() -> Scheme {
        Scheme::uniform_n(6)
    }

    fn labels(faces: &[i64]) -> Vec<Label> {
        faces.iter().map(|&f| Label::from(f)).collect()
    }

    fn halves() -> Partition {
        Partition::new(&die(), &[labels(&[1, 2, 3]), labels(&[4, 5, 6])]).unwrap()
    }

    fn omega() -> RandomVariable {
        RandomVariable::from_fn(&die(), |l| l.to_string().parse::<i64>().map(int).unwrap())
    }

    #[test]
    fn from_functions() {
        let d = die();
        let z = RandomFunction::identity(&d);
        assert_eq!(Partition::from_functions(&d, &[z]).unwrap(), Partition::discrete(&d));
        assert_eq!(Partition::from_functions(&d, &[]).unwrap().len(), 1);
        let a = Event::new(&d, &labels(&[1, 2, 3])).unwrap().indicator();
        assert_eq!(Partition::from_variables(&d, &[a]).unwrap(), halves());
        let other = RandomFunction::identity(&Scheme::uniform_n(2));
        assert_eq!(
            Partition::from_functions(&d, &[other]),
            Err(Error::DomainMismatch)
        );
    }

    #[test]
    fn validation() {
        let d = die();
        assert!(matches!(
            Partition::new(&d, &[labels(&[1, 2, 3]), labels(&[3, 4, 5, 6])]),
            Err(Error::InvalidPartition(_))
        ));
        assert!(matches!(
            Partition::new(&d, &[labels(&[1, 2, 3]), labels(&[4, 5])]),
            Err(Error::InvalidPartition(_))
        ));
        assert!(matches!(
            Partition::new(&d, &[labels(&[1, 2, 3, 4, 5, 6]), vec![]]),
            Err(Error::InvalidPartition(_))
        ));
        assert!(matches!(
            Partition::new(&d, &[labels(&[1, 2, 3, 4, 5, 6, 7])]),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn canonical_block_order() {
        let p = Partition::new(&die(), &[labels(&[6, 4, 2]), labels(&[5, 3, 1])]).unwrap();
        let blocks = p.blocks();
        assert_eq!(blocks[0], labels(&[1, 3, 5]).iter().collect::<Vec<_>>());
        assert_eq!(blocks[1], labels(&[2, 4, 6]).iter().collect::<Vec<_>>());
    }

    #[test]
    fn bundle_round_trip() {
        let d = die();
        let disc = Partition::discrete(&d).to_bundle();
        assert_eq!(disc, Bundle::identity(&d));
        let single = Partition::single_block(&d).to_bundle();
        assert_eq!(single.base().len(), 1);
        let h = halves().to_bundle();
        assert_eq!(h.base().masses(), &[ratio(1, 2), ratio(1, 2)]);
        assert_eq!(h.base().outcomes(), &labels(&[1, 4])[..]);
        assert_eq!(Partition::from_bundle(&h), halves());
        assert_eq!(Partition::from_bundle(&Bundle::terminal(&d)).len(), 1);
        assert_eq!(Partition::from_bundle(&Bundle::identity(&d)), Partition::discrete(&d));
        let parity = Bundle::induced(&d, |l| {
            Label::atom(if omega().value(l).unwrap() % int(2) == int(1) { "odd" } else { "even" })
        });
        assert_eq!(
            Partition::from_bundle(&parity),
            Partition::new(&d, &[labels(&[1, 3, 5]), labels(&[2, 4, 6])]).unwrap()
        );
    }

    #[test]
    fn membership() {
        let d = die();
        let h = halves();
        assert!(h.contains(&RandomVariable::constant(&d, int(3))).unwrap());
        assert!(h.contains(&h.indicator_of_block(1)).unwrap());
        assert!(!h.contains(&omega()).unwrap());
        assert!(Partition::discrete(&d).contains(&omega()).unwrap());
    }

    #[test]
    fn atom_indicators() {
        let d = die();
        let single = Partition::single_block(&d);
        assert_eq!(
            single.atom_indicator(d.outcomes()).unwrap(),
            RandomVariable::constant(&d, int(1))
        );
        let disc = Partition::discrete(&d);
        let three = disc.atom_indicator(&labels(&[3])).unwrap();
        assert_eq!(three, Event::new(&d, &labels(&[3])).unwrap().indicator());
        let low = halves().atom_indicator(&labels(&[3, 1, 2])).unwrap();
        assert_eq!(low, Event::new(&d, &labels(&[1, 2, 3])).unwrap().indicator());
        assert!(halves().contains(&low).unwrap());
        assert_eq!(halves().atom_indicator(&labels(&[1, 2])), Err(Error::UnknownBlock));
        assert_eq!(halves().atom_indicator(&[]), Err(Error::UnknownBlock));
    }

    #[test]
    fn refinement_order() {
        let d = die();
        let disc = Partition::discrete(&d);
        let single = Partition::single_block(&d);
        assert!(disc.refines(&halves()).unwrap());
        assert!(halves().refines(&single).unwrap());
        let finer = Partition::new(&d, &[labels(&[1]), labels(&[2, 3]), labels(&[4, 5, 6])]).unwrap();
        assert!(finer.refines(&halves()).unwrap());
        assert!(!halves().refines(&finer).unwrap());

        let sigma = finer.factorization(&halves()).unwrap().unwrap();
        assert_eq!(
            compose(&sigma, &finer.to_bundle()).unwrap(),
            halves().to_bundle()
        );
        assert!(halves().factorization(&finer).unwrap().is_none());
    }

    #[test]
    fn common_refinements() {
        let d = die();
        let h = halves();
        let parity = Partition::new(&d, &[labels(&[1, 3, 5]), labels(&[2, 4, 6])]).unwrap();
        let disc = Partition::discrete(&d);
        assert_eq!(h.common_refinement(&disc).unwrap(), disc);
        assert_eq!(h.common_refinement(&Partition::single_block(&d)).unwrap(), h);
        let expected = Partition::new(
            &d,
            &[labels(&[1, 3]), labels(&[2]), labels(&[5]), labels(&[4, 6])],
        )
        .unwrap();
        assert_eq!(h.common_refinement(&parity).unwrap(), expected);
        assert!(expected.refines(&h).unwrap() && expected.refines(&parity).unwrap());
    }
}
