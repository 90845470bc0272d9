//! Fiber products of bundles over a common base, scheme isomorphisms, and
//! the constructions built from them: conditional independence, the zip-up
//! of two towers, and associativity.
//!
//! A fiber product `Ω₁ ×_{Ω₀} Ω₂` lives on the pairs `⟨ω₁, ω₂⟩` that agree
//! over `Ω₀`, with mass `pr₁(ω₁) pr₂(ω₂) / pr₀(ω₀)`: over each base point it
//! is the independent product of the two fiber schemes.

use std::collections::BTreeMap;
use std::fmt;

use crate::bundle::{compose, Bundle};
use crate::error::{Error, Result};
use crate::label::Label;
use crate::rational::Rational;
use crate::scheme::Scheme;
use crate::variable::{distribution_scheme, joint, RandomFunction, RandomVariable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberProduct {
    product: Scheme,
    theta1: Bundle,
    theta2: Bundle,
    down: Bundle,
}

impl FiberProduct {
    /// The scheme on pairs `⟨ω₁, ω₂⟩`.
    pub fn product(&self) -> &Scheme {
        &self.product
    }

    /// Coordinate projection onto `Ω₁`.
    pub fn theta1(&self) -> &Bundle {
        &self.theta1
    }

    /// Coordinate projection onto `Ω₂`.
    pub fn theta2(&self) -> &Bundle {
        &self.theta2
    }

    /// The composite down to the common base.
    pub fn down(&self) -> &Bundle {
        &self.down
    }
}

pub fn fiber_product(pi1: &Bundle, pi2: &Bundle) -> Result<FiberProduct> {
    if pi1.base() != pi2.base() {
        return Err(Error::BaseMismatch);
    }
    let (total1, total2, base) = (pi1.total(), pi2.total(), pi1.base());
    let mut points = Vec::new();
    for (j, (fiber1, fiber2)) in pi1
        .fiber_indices()
        .iter()
        .zip(pi2.fiber_indices())
        .enumerate()
    {
        let base_mass = base.mass_at(j);
        for &i1 in fiber1 {
            for &i2 in fiber2 {
                let label = Label::pair(total1.outcome(i1).clone(), total2.outcome(i2).clone());
                let mass = total1.mass_at(i1) * total2.mass_at(i2) / base_mass;
                points.push((label, mass));
            }
        }
    }
    let product = Scheme::from_pairs(points)?;
    let first = |l: &Label| l.as_pair().expect("pair label").0.clone();
    let second = |l: &Label| l.as_pair().expect("pair label").1.clone();
    let theta1 = Bundle::from_fn(&product, total1, first)?;
    let theta2 = Bundle::from_fn(&product, total2, second)?;
    let down = compose(pi1, &theta1)?;
    Ok(FiberProduct {
        product,
        theta1,
        theta2,
        down,
    })
}

/// Both sides of the base-change identity `θ₁_* θ₂♯ a₂ = π₁♯ π₂_* a₂`.
pub fn base_change_check(
    pi1: &Bundle,
    pi2: &Bundle,
    a2: &RandomVariable,
) -> Result<(RandomVariable, RandomVariable)> {
    let fp = fiber_product(pi1, pi2)?;
    let lhs = fp.theta1.fiber_sum(&fp.theta2.pullback(a2)?)?;
    let rhs = pi1.pullback(&pi2.fiber_sum(a2)?)?;
    Ok((lhs, rhs))
}

/// A candidate isomorphism of schemes given by a label map. Nothing is
/// checked at construction; see [`check_scheme_iso`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeIso {
    pub source: Scheme,
    pub target: Scheme,
    pub map: BTreeMap<Label, Label>,
}

impl SchemeIso {
    pub fn new(source: &Scheme, target: &Scheme, map: BTreeMap<Label, Label>) -> Self {
        Self {
            source: source.clone(),
            target: target.clone(),
            map,
        }
    }

    pub fn identity(scheme: &Scheme) -> Self {
        let map = scheme.outcomes().iter().map(|l| (l.clone(), l.clone())).collect();
        Self::new(scheme, scheme, map)
    }

    pub fn is_valid(&self) -> bool {
        check_scheme_iso(self).is_ok()
    }
}

/// First reason a candidate map is not an isomorphism of schemes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoFailure {
    /// A source outcome has no image.
    Undefined(Label),
    /// The map mentions a label outside the source.
    UnknownSource(Label),
    /// An image lies outside the target.
    UnknownTarget(Label),
    /// Two source outcomes share an image.
    NotInjective { first: Label, second: Label },
    /// A target outcome is never hit.
    Unattained { target: Label, mass: Rational },
    MassMismatch {
        source: Label,
        target: Label,
        source_mass: Box<Rational>,
        target_mass: Box<Rational>,
    },
}

impl fmt::Display for IsoFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsoFailure::Undefined(l) => write!(f, "no image for {l}"),
            IsoFailure::UnknownSource(l) => write!(f, "{l} is not a source outcome"),
            IsoFailure::UnknownTarget(l) => write!(f, "{l} is not a target outcome"),
            IsoFailure::NotInjective { first, second } => {
                write!(f, "{first} and {second} have the same image")
            }
            IsoFailure::Unattained { target, mass } => {
                write!(f, "target {target} (mass {mass}) is not attained")
            }
            IsoFailure::MassMismatch {
                source,
                target,
                source_mass,
                target_mass,
            } => write!(
                f,
                "{source} has mass {source_mass} but its image {target} has mass {target_mass}"
            ),
        }
    }
}

/// Succeeds iff `iso.map` is a mass-preserving bijection.
pub fn check_scheme_iso(iso: &SchemeIso) -> Result<(), IsoFailure> {
    if let Some(extra) = iso.map.keys().find(|l| !iso.source.contains(l)) {
        return Err(IsoFailure::UnknownSource(extra.clone()));
    }
    let mut preimages: BTreeMap<&Label, &Label> = BTreeMap::new();
    for source in iso.source.outcomes() {
        let target = iso
            .map
            .get(source)
            .ok_or_else(|| IsoFailure::Undefined(source.clone()))?;
        if !iso.target.contains(target) {
            return Err(IsoFailure::UnknownTarget(target.clone()));
        }
        if let Some(first) = preimages.insert(target, source) {
            return Err(IsoFailure::NotInjective {
                first: first.clone(),
                second: source.clone(),
            });
        }
    }
    if let Some((target, mass)) = iso.target.iter().find(|(l, _)| !preimages.contains_key(l)) {
        return Err(IsoFailure::Unattained {
            target: target.clone(),
            mass: mass.clone(),
        });
    }
    for (source, source_mass) in iso.source.iter() {
        let target = &iso.map[source];
        let target_mass = iso.target.mass(target).expect("checked above");
        if source_mass != target_mass {
            return Err(IsoFailure::MassMismatch {
                source: source.clone(),
                target: target.clone(),
                source_mass: Box::new(source_mass.clone()),
                target_mass: Box::new(target_mass.clone()),
            });
        }
    }
    Ok(())
}

/// Whether two schemes carry the same masses up to relabeling. A necessary
/// condition for any isomorphism between them.
pub fn same_mass_multiset(a: &Scheme, b: &Scheme) -> bool {
    a.mass_multiset() == b.mass_multiset()
}

/// The bundle `[F] → [G]` for a `G` that is a function of `F`, mapping
/// `F(ω) ↦ G(ω)`.
pub(crate) fn factor_bundle(f: &RandomFunction, g: &RandomFunction) -> Result<Bundle> {
    let (source, _) = distribution_scheme(f);
    let (target, _) = distribution_scheme(g);
    let mut map = BTreeMap::new();
    for (x, y) in f.values().iter().zip(g.values()) {
        if let Some(prev) = map.insert(x.clone(), y.clone()) {
            if &prev != y {
                return Err(Error::ShapeMismatch);
            }
        }
    }
    Bundle::new(&source, &target, &map)
}

/// The canonical map `ω ↦ ⟨left(ω), right(ω)⟩` from `[whole]` into
/// `[left] ×_{[shared]} [right]`, where `left` and `right` both determine
/// `shared` and `whole` determines both.
pub(crate) fn canonical_injection(
    whole: &RandomFunction,
    left: &RandomFunction,
    right: &RandomFunction,
    shared: &RandomFunction,
) -> Result<SchemeIso> {
    let fp = fiber_product(&factor_bundle(left, shared)?, &factor_bundle(right, shared)?)?;
    let (source, _) = distribution_scheme(whole);
    let mut map = BTreeMap::new();
    for ((w, l), r) in whole.values().iter().zip(left.values()).zip(right.values()) {
        map.insert(w.clone(), Label::pair(l.clone(), r.clone()));
    }
    Ok(SchemeIso::new(&source, fp.product(), map))
}

/// Tests whether `X` and `Y` are conditionally independent given `Z` by
/// checking that `[⟨X,Y,Z⟩] → [⟨X,Z⟩] ×_{[Z]} [⟨Y,Z⟩]`,
/// `⟨x,y,z⟩ ↦ ⟨⟨x,z⟩,⟨y,z⟩⟩`, is an isomorphism of schemes. On failure the
/// witness is an unattained product point or a point whose masses differ.
pub fn cond_independent(
    x: &RandomFunction,
    y: &RandomFunction,
    z: &RandomFunction,
) -> Result<(bool, Option<IsoFailure>)> {
    let xyz = joint(&[x.clone(), y.clone(), z.clone()])?;
    let xz = joint(&[x.clone(), z.clone()])?;
    let yz = joint(&[y.clone(), z.clone()])?;
    let iso = canonical_injection(&xyz, &xz, &yz, z)?;
    Ok(match check_scheme_iso(&iso) {
        Ok(()) => (true, None),
        Err(witness) => (false, Some(witness)),
    })
}

/// A tower `Ω₂ → Ω₁ → Ω₀`.
#[derive(Debug, Clone)]
pub struct Tower {
    pub upper: Bundle,
    pub lower: Bundle,
}

impl Tower {
    pub fn new(upper: Bundle, lower: Bundle) -> Self {
        Self { upper, lower }
    }
}

/// The zip-up of two towers over a common base together with its
/// identification with a fiber product over `Ξ = Ω₁ ×_{Ω₀} Ω′₁`.
#[derive(Debug, Clone)]
pub struct ZipUp {
    /// `Ω₂ ×_{Ω₀} Ω′₂ → Ξ`, `⟨ω₂, ω′₂⟩ ↦ ⟨π₁₂ω₂, π′₁₂ω′₂⟩`.
    pub bundle: Bundle,
    /// `(Ω₂ ×_{Ω₁} Ξ) ×_Ξ (Ξ ×_{Ω′₁} Ω′₂)`.
    pub fiber_product: FiberProduct,
    /// `⟨ω₂, ω′₂⟩ ↦ ⟨⟨ω₂, ξ⟩, ⟨ξ, ω′₂⟩⟩` from the zip-up total scheme onto
    /// `fiber_product`.
    pub iso: SchemeIso,
}

pub fn zip_up(left: &Tower, right: &Tower) -> Result<ZipUp> {
    if left.upper.base() != left.lower.total() || right.upper.base() != right.lower.total() {
        return Err(Error::CompositionMismatch);
    }
    if left.lower.base() != right.lower.base() {
        return Err(Error::BaseMismatch);
    }
    let top = fiber_product(
        &compose(&left.lower, &left.upper)?,
        &compose(&right.lower, &right.upper)?,
    )?;
    let xi = fiber_product(&left.lower, &right.lower)?;
    let bundle = Bundle::from_fn(top.product(), xi.product(), |l| {
        let (w2, w2p) = l.as_pair().expect("pair label");
        Label::pair(
            left.upper.image(w2).expect("in total").clone(),
            right.upper.image(w2p).expect("in total").clone(),
        )
    })?;
    let over_left = fiber_product(&left.upper, xi.theta1())?;
    let over_right = fiber_product(xi.theta2(), &right.upper)?;
    let glued = fiber_product(over_left.theta2(), over_right.theta1())?;
    let map = top
        .product()
        .outcomes()
        .iter()
        .map(|l| {
            let (w2, w2p) = l.as_pair().expect("pair label");
            let point = bundle.image(l).expect("in total").clone();
            let image = Label::pair(
                Label::pair(w2.clone(), point.clone()),
                Label::pair(point, w2p.clone()),
            );
            (l.clone(), image)
        })
        .collect();
    let iso = SchemeIso::new(top.product(), glued.product(), map);
    Ok(ZipUp {
        bundle,
        fiber_product: glued,
        iso,
    })
}

/// The rebracketing `⟨ω₁,⟨ω₂,ω₃⟩⟩ ↦ ⟨⟨ω₁,ω₂⟩,ω₃⟩` from
/// `Ω₁ ×_{Γ₀} (Ω₂ ×_{Γ₁} Ω₃)` to `(Ω₁ ×_{Γ₀} Ω₂) ×_{Γ₁} Ω₃` for bundles
/// `Ω₁ →α₁ Γ₀ ←α₂ Ω₂ →β₂ Γ₁ ←β₃ Ω₃`.
pub fn assoc_rebracket(
    alpha1: &Bundle,
    alpha2: &Bundle,
    beta2: &Bundle,
    beta3: &Bundle,
) -> Result<SchemeIso> {
    if alpha1.base() != alpha2.base()
        || beta2.base() != beta3.base()
        || alpha2.total() != beta2.total()
    {
        return Err(Error::ShapeMismatch);
    }
    let right_inner = fiber_product(beta2, beta3)?;
    let right_nested = fiber_product(alpha1, &compose(alpha2, right_inner.theta1())?)?;
    let left_inner = fiber_product(alpha1, alpha2)?;
    let left_nested = fiber_product(&compose(beta2, left_inner.theta2())?, beta3)?;
    let map = right_nested
        .product()
        .outcomes()
        .iter()
        .map(|l| {
            let (w1, rest) = l.as_pair().expect("pair label");
            let (w2, w3) = rest.as_pair().expect("pair label");
            let image = Label::pair(Label::pair(w1.clone(), w2.clone()), w3.clone());
            (l.clone(), image)
        })
        .collect();
    Ok(SchemeIso::new(right_nested.product(), left_nested.product(), map))
}
