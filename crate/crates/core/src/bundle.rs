//! Bundles: probability-preserving maps between schemes, and the three
//! linear maps they induce on random variables.
//!
//! For a bundle `π: Ω → Ω′`:
//!
//! * [`Bundle::pullback`] precomposes a base variable with `π`;
//! * [`Bundle::fiber_sum`] sums a total variable over each fiber;
//! * [`Bundle::fiber_average`] is `m_{1/pr′} ∘ fiber_sum ∘ m_pr`, the
//!   expectation of a total variable on each fiber scheme.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::label::Label;
use crate::rational::Rational;
use crate::scheme::Scheme;
use crate::variable::{RandomFunction, RandomVariable};

/// A surjective map from `total` onto `base` whose fiber masses equal the
/// base masses.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bundle {
    total: Scheme,
    base: Scheme,
    /// For each total outcome, the index of its image in `base`.
    map: Arc<[usize]>,
    /// For each base outcome, the indices of its fiber in `total`.
    fibers: Arc<[Vec<usize>]>,
}

fn fibers_of(map: &[usize], base_len: usize) -> Vec<Vec<usize>> {
    let mut fibers = vec![Vec::new(); base_len];
    for (i, &j) in map.iter().enumerate() {
        fibers[j].push(i);
    }
    fibers
}

impl Bundle {
    /// Verifies that `map` is a bundle from `total` onto `base`.
    pub fn new(total: &Scheme, base: &Scheme, map: &BTreeMap<Label, Label>) -> Result<Self> {
        let images = RandomFunction::from_map(total, map)?;
        Self::from_images(total, base, images.values().to_vec())
    }

    pub fn from_fn(total: &Scheme, base: &Scheme, f: impl FnMut(&Label) -> Label) -> Result<Self> {
        Self::from_images(total, base, total.outcomes().iter().map(f).collect())
    }

    /// Images listed in `total`'s outcome order.
    pub fn from_images(total: &Scheme, base: &Scheme, images: Vec<Label>) -> Result<Self> {
        if images.len() != total.len() {
            return Err(Error::LengthMismatch {
                expected: total.len(),
                found: images.len(),
            });
        }
        let map: Vec<usize> = images
            .iter()
            .map(|l| base.require_index(l))
            .collect::<Result<_>>()?;
        let fibers = fibers_of(&map, base.len());
        if let Some(j) = fibers.iter().position(Vec::is_empty) {
            return Err(Error::NotSurjective(base.outcome(j).clone()));
        }
        for (j, fiber) in fibers.iter().enumerate() {
            let fiber_mass: Rational = fiber.iter().map(|&i| total.mass_at(i)).sum();
            if &fiber_mass != base.mass_at(j) {
                return Err(Error::NotMeasurePreserving {
                    label: base.outcome(j).clone(),
                    fiber_mass: Box::new(fiber_mass),
                    base_mass: Box::new(base.mass_at(j).clone()),
                });
            }
        }
        Ok(Self {
            total: total.clone(),
            base: base.clone(),
            map: map.into(),
            fibers: fibers.into(),
        })
    }

    /// The bundle induced by a surjection onto its range: each image label
    /// gets the mass of its preimage.
    pub fn induced(total: &Scheme, f: impl FnMut(&Label) -> Label) -> Self {
        Self::induced_from_images(total, total.outcomes().iter().map(f).collect())
    }

    pub fn induced_from_images(total: &Scheme, images: Vec<Label>) -> Self {
        assert_eq!(images.len(), total.len(), "one image per outcome");
        let mut masses: BTreeMap<&Label, Rational> = BTreeMap::new();
        for (image, mass) in images.iter().zip(total.masses()) {
            *masses.entry(image).or_insert_with(Rational::zero) += mass;
        }
        let base = Scheme::from_pairs(masses.into_iter().map(|(l, m)| (l.clone(), m)))
            .expect("induced masses form a scheme");
        let map: Vec<usize> = images
            .iter()
            .map(|l| base.index_of(l).expect("image is in range"))
            .collect();
        let fibers = fibers_of(&map, base.len());
        Self {
            total: total.clone(),
            base,
            map: map.into(),
            fibers: fibers.into(),
        }
    }

    pub fn identity(scheme: &Scheme) -> Self {
        let map: Vec<usize> = (0..scheme.len()).collect();
        let fibers = fibers_of(&map, scheme.len());
        Self {
            total: scheme.clone(),
            base: scheme.clone(),
            map: map.into(),
            fibers: fibers.into(),
        }
    }

    /// The unique bundle onto the one-point scheme.
    pub fn terminal(scheme: &Scheme) -> Self {
        let map = vec![0; scheme.len()];
        let fibers = fibers_of(&map, 1);
        Self {
            total: scheme.clone(),
            base: Scheme::point(),
            map: map.into(),
            fibers: fibers.into(),
        }
    }

    pub fn total(&self) -> &Scheme {
        &self.total
    }

    pub fn base(&self) -> &Scheme {
        &self.base
    }

    /// Index in `base` of the image of total outcome `index`.
    pub fn image_index(&self, index: usize) -> usize {
        self.map[index]
    }

    pub fn image(&self, label: &Label) -> Option<&Label> {
        self.total
            .index_of(label)
            .map(|i| self.base.outcome(self.map[i]))
    }

    /// Fibers as index lists into `total`, one per base outcome.
    pub fn fiber_indices(&self) -> &[Vec<usize>] {
        &self.fibers
    }

    pub fn fiber(&self, base_label: &Label) -> Result<Vec<&Label>> {
        let j = self.base.require_index(base_label)?;
        Ok(self.fibers[j].iter().map(|&i| self.total.outcome(i)).collect())
    }

    /// The map as a random function on the total scheme.
    pub fn as_function(&self) -> RandomFunction {
        let values = self.map.iter().map(|&j| self.base.outcome(j).clone()).collect();
        RandomFunction::new(&self.total, values).expect("one image per outcome")
    }

    /// The fiber over `base_label` with masses rescaled by `1/pr′(ω′)`.
    pub fn fiber_scheme(&self, base_label: &Label) -> Result<Scheme> {
        let j = self.base.require_index(base_label)?;
        let scale = self.base.mass_at(j);
        Scheme::from_pairs(self.fibers[j].iter().map(|&i| {
            (
                self.total.outcome(i).clone(),
                self.total.mass_at(i) / scale,
            )
        }))
    }

    /// `π♯Y = Y ∘ π`.
    pub fn pullback(&self, y: &RandomVariable) -> Result<RandomVariable> {
        if y.domain() != &self.base {
            return Err(Error::DomainMismatch);
        }
        let values = self.map.iter().map(|&j| y.value_at(j).clone()).collect();
        RandomVariable::new(&self.total, values)
    }

    /// `π♯` on label-valued functions.
    pub fn pullback_function(&self, y: &RandomFunction) -> Result<RandomFunction> {
        if y.domain() != &self.base {
            return Err(Error::DomainMismatch);
        }
        let values = self.map.iter().map(|&j| y.value_at(j).clone()).collect();
        RandomFunction::new(&self.total, values)
    }

    /// `(π_*X)(ω′) = Σ_{ω ∈ π⁻¹(ω′)} X(ω)`.
    pub fn fiber_sum(&self, x: &RandomVariable) -> Result<RandomVariable> {
        if x.domain() != &self.total {
            return Err(Error::DomainMismatch);
        }
        let values = self
            .fibers
            .iter()
            .map(|fiber| fiber.iter().map(|&i| x.value_at(i)).sum())
            .collect();
        RandomVariable::new(&self.base, values)
    }

    /// `π♭X = π_*(X·pr) / pr′`.
    pub fn fiber_average(&self, x: &RandomVariable) -> Result<RandomVariable> {
        let weighted = x.mul(&RandomVariable::mass_function(&self.total))?;
        let summed = self.fiber_sum(&weighted)?;
        let base_mass = RandomVariable::mass_function(&self.base);
        summed.zip_with(&base_mass, |s, m| s / m)
    }
}

impl std::fmt::Debug for Bundle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Bundle")
            .field("total", &self.total)
            .field("base", &self.base)
            .field("map", &self.as_function())
            .finish()
    }
}

/// `outer ∘ inner`; requires `inner.base == outer.total`.
pub fn compose(outer: &Bundle, inner: &Bundle) -> Result<Bundle> {
    if inner.base != outer.total {
        return Err(Error::SchemeMismatch);
    }
    let map: Vec<usize> = inner.map.iter().map(|&j| outer.map[j]).collect();
    let fibers = fibers_of(&map, outer.base.len());
    Ok(Bundle {
        total: inner.total.clone(),
        base: outer.base.clone(),
        map: map.into(),
        fibers: fibers.into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn die() -> Scheme {
        Scheme::uniform_n(6)
    }

    fn face(l: &Label) -> i64 {
        match l {
            Label::Atom(s) => s.parse().unwrap(),
            Label::Tuple(_) => unreachable!(),
        }
    }

    fn parity_label(l: &Label) -> Label {
        Label::atom(if face(l) % 2 == 1 { "odd" } else { "even" })
    }

    fn parity() -> Bundle {
        let base = Scheme::uniform([Label::atom("odd"), Label::atom("even")]).unwrap();
        Bundle::from_fn(&die(), &base, parity_label).unwrap()
    }

    fn omega(s: &Scheme) -> RandomVariable {
        RandomVariable::from_fn(s, |l| int(face(l)))
    }

    #[test]
    fn parity_bundle_is_valid() {
        let p = parity();
        assert_eq!(p.fiber(&Label::atom("odd")).unwrap().len(), 3);
    }

    #[test]
    fn terminal_bundles() {
        let t = Bundle::terminal(&die());
        assert_eq!(t.base(), &Scheme::point());
        let map: BTreeMap<Label, Label> = die()
            .outcomes()
            .iter()
            .map(|l| (l.clone(), Label::atom("*")))
            .collect();
        assert_eq!(Bundle::new(&die(), &Scheme::point(), &map).unwrap(), t);
    }

    #[test]
    fn rejects_non_preserving_maps() {
        let bits = Scheme::uniform([Label::atom("0"), Label::atom("1")]).unwrap();
        let err = Bundle::from_fn(&die(), &bits, |l| {
            Label::atom(if face(l) == 1 { "0" } else { "1" })
        })
        .unwrap_err();
        assert_eq!(
            err,
            Error::NotMeasurePreserving {
                label: Label::atom("0"),
                fiber_mass: Box::new(ratio(1, 6)),
                base_mass: Box::new(ratio(1, 2)),
            }
        );
        let err = Bundle::from_fn(&die(), &bits, |_| Label::atom("0")).unwrap_err();
        assert_eq!(err, Error::NotSurjective(Label::atom("1")));
        let err = Bundle::from_fn(&die(), &bits, |_| Label::atom("2")).unwrap_err();
        assert_eq!(err, Error::UnknownLabel(Label::atom("2")));
    }

    #[test]
    fn induced_bundles() {
        let d = die();
        let id = Bundle::induced(&d, |l| l.clone());
        assert_eq!(id, Bundle::identity(&d));
        let t = Bundle::induced(&d, |_| Label::atom("*"));
        assert_eq!(t, Bundle::terminal(&d));
        let p = Bundle::induced(&d, parity_label);
        assert_eq!(p, parity());
    }

    #[test]
    fn composition() {
        let d = die();
        let p = parity();
        let t = compose(&Bundle::terminal(p.base()), &p).unwrap();
        assert_eq!(t, Bundle::terminal(&d));
        assert_eq!(compose(&Bundle::identity(p.base()), &p).unwrap(), p);
        assert_eq!(compose(&p, &Bundle::identity(&d)).unwrap(), p);
        assert_eq!(compose(&p, &p), Err(Error::SchemeMismatch));

        let twelve = Scheme::uniform_n(12);
        let fold = Bundle::from_fn(&twelve, &d, |l| Label::from((face(l) - 1) % 6 + 1)).unwrap();
        let composed = compose(&p, &fold).unwrap();
        let direct = Bundle::from_fn(&twelve, p.base(), |l| {
            parity_label(&Label::from((face(l) - 1) % 6 + 1))
        })
        .unwrap();
        assert_eq!(composed, direct);
    }

    #[test]
    fn fiber_schemes() {
        let p = parity();
        let odd = p.fiber_scheme(&Label::atom("odd")).unwrap();
        assert_eq!(odd, Scheme::uniform([1, 3, 5].map(Label::from)).unwrap());
        let t = Bundle::terminal(&die());
        assert_eq!(t.fiber_scheme(&Label::atom("*")).unwrap(), die());
        let id = Bundle::identity(&die());
        assert_eq!(id.fiber_scheme(&Label::from(4)).unwrap().len(), 1);
        assert!(matches!(
            p.fiber_scheme(&Label::atom("none")),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn pullbacks() {
        let p = parity();
        let c = RandomVariable::constant(p.base(), ratio(2, 7));
        assert_eq!(p.pullback(&c).unwrap(), RandomVariable::constant(&die(), ratio(2, 7)));
        let y = RandomVariable::from_fn(p.base(), |l| int((l == &Label::atom("odd")) as i64));
        let pulled = p.pullback(&y).unwrap();
        assert_eq!(pulled, RandomVariable::from_fn(&die(), |l| int(face(l) % 2)));
        assert_eq!(p.pullback(&omega(&die())), Err(Error::DomainMismatch));
    }

    #[test]
    fn fiber_sums() {
        let p = parity();
        let pr = RandomVariable::mass_function(&die());
        assert_eq!(
            p.fiber_sum(&pr).unwrap(),
            RandomVariable::mass_function(p.base())
        );
        let s = p.fiber_sum(&omega(&die())).unwrap();
        assert_eq!(s.value(&Label::atom("odd")), Some(&int(9)));
        assert_eq!(s.value(&Label::atom("even")), Some(&int(12)));
        let t = Bundle::terminal(&die()).fiber_sum(&omega(&die())).unwrap();
        assert_eq!(t.values(), &[int(21)]);
    }

    #[test]
    fn fiber_averages() {
        let p = parity();
        let a = p.fiber_average(&omega(&die())).unwrap();
        assert_eq!(a.value(&Label::atom("odd")), Some(&int(3)));
        assert_eq!(a.value(&Label::atom("even")), Some(&int(4)));
        let t = Bundle::terminal(&die()).fiber_average(&omega(&die())).unwrap();
        assert_eq!(t.values(), &[ratio(7, 2)]);
        let y = RandomVariable::from_fn(p.base(), |l| int(l.to_string().len() as i64));
        assert_eq!(p.fiber_average(&p.pullback(&y).unwrap()).unwrap(), y);
    }
}
