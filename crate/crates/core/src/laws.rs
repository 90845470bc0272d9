//! Runs the library's exact identities against user-supplied inputs and
//! reports, per law, whether it held and a witness when it did not.
//!
//! Linear identities are checked on indicator bases, which is enough to
//! establish them for every random variable on the schemes involved.

use num_traits::{One, Signed, Zero};

use crate::algebra::Partition;
use crate::bundle::Bundle;
use crate::condexp::{
    check_total_expectation, cond_expectation, residual_is_orthogonal,
    total_covariance_decomposition, total_probability_sides, total_variance_sides,
};
use crate::error::Result;
use crate::fiberprod::{base_change_check, cond_independent, fiber_product};
use crate::format::Document;
use crate::markov::{coordinate_functions, markov_build, markov_verify};
use crate::rational::{ratio, Rational};
use crate::scheme::Scheme;
use crate::stats::{chebyshev_check, linear_regression};
use crate::variable::{Event, RandomFunction, RandomVariable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawOutcome {
    /// Which input(s) the law was checked on, e.g. `"bundle#2"`.
    pub subject: String,
    pub law: &'static str,
    /// `None` when the law held.
    pub witness: Option<String>,
}

impl LawOutcome {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Collects outcomes for one subject, keeping only the first witness per law.
struct Report<'a> {
    subject: String,
    out: &'a mut Vec<LawOutcome>,
}

impl Report<'_> {
    fn law(&mut self, law: &'static str, checks: impl IntoIterator<Item = Option<String>>) {
        let witness = checks.into_iter().flatten().next();
        self.out.push(LawOutcome {
            subject: self.subject.clone(),
            law,
            witness,
        });
    }
}

fn equal<T: PartialEq + std::fmt::Display>(what: impl Fn() -> String, lhs: &T, rhs: &T) -> Option<String> {
    (lhs != rhs).then(|| format!("{}: {lhs} != {rhs}", what()))
}

fn show(x: &RandomVariable) -> String {
    let parts: Vec<String> = x.iter().map(|(l, v)| format!("{l}={v}")).collect();
    format!("[{}]", parts.join(" "))
}

fn equal_rv(what: impl Fn() -> String, lhs: &RandomVariable, rhs: &RandomVariable) -> Option<String> {
    (lhs != rhs).then(|| format!("{}: {} != {}", what(), show(lhs), show(rhs)))
}

fn basis(scheme: &Scheme) -> Vec<RandomVariable> {
    (0..scheme.len())
        .map(|i| {
            let values = (0..scheme.len())
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect();
            RandomVariable::new(scheme, values).expect("one value per outcome")
        })
        .collect()
}

/// `π♭π♯ = id`, preservation of expectation by `π♯` and `π♭`, the module
/// identity `π♭(π♯Z · X) = Z · π♭X`, and the projection formula
/// `π_*(π♯Z · X) = Z · π_*X`.
pub fn bundle_laws(subject: &str, pi: &Bundle) -> Result<Vec<LawOutcome>> {
    let mut out = Vec::new();
    let mut r = Report {
        subject: subject.to_string(),
        out: &mut out,
    };
    let (total, base) = (basis(pi.total()), basis(pi.base()));
    let base_label = |j: usize| pi.base().outcome(j).to_string();
    let total_label = |i: usize| pi.total().outcome(i).to_string();

    let mut checks = Vec::new();
    for (j, z) in base.iter().enumerate() {
        checks.push(equal_rv(|| format!("at 1_{}", base_label(j)), &pi.fiber_average(&pi.pullback(z)?)?, z));
    }
    r.law("flat-after-sharp-is-identity", checks);

    let mut checks = Vec::new();
    for (j, z) in base.iter().enumerate() {
        checks.push(equal(|| format!("at 1_{}", base_label(j)), &pi.pullback(z)?.expectation(), &z.expectation()));
    }
    r.law("sharp-preserves-expectation", checks);

    let mut checks = Vec::new();
    for (i, x) in total.iter().enumerate() {
        checks.push(equal(|| format!("at 1_{}", total_label(i)), &pi.fiber_average(x)?.expectation(), &x.expectation()));
    }
    r.law("flat-preserves-expectation", checks);

    let (mut module, mut projection) = (Vec::new(), Vec::new());
    for (j, z) in base.iter().enumerate() {
        let lifted = pi.pullback(z)?;
        for (i, x) in total.iter().enumerate() {
            let what = || format!("Z=1_{}, X=1_{}", base_label(j), total_label(i));
            let product = lifted.mul(x)?;
            module.push(equal_rv(what, &pi.fiber_average(&product)?, &z.mul(&pi.fiber_average(x)?)?));
            projection.push(equal_rv(what, &pi.fiber_sum(&product)?, &z.mul(&pi.fiber_sum(x)?)?));
        }
    }
    r.law("flat-module-identity", module);
    r.law("projection-formula", projection);

    r.law(
        "measure-preserving",
        [equal_rv(
            || "pushforward of mass".into(),
            &pi.fiber_sum(&RandomVariable::mass_function(pi.total()))?,
            &RandomVariable::mass_function(pi.base()),
        )],
    );
    Ok(out)
}

/// Projection and total-law identities for `E_P`. The test variables are
/// `xs` together with the outcome indicators of the scheme.
pub fn partition_laws(subject: &str, p: &Partition, xs: &[RandomVariable]) -> Result<Vec<LawOutcome>> {
    let mut out = Vec::new();
    let mut r = Report {
        subject: subject.to_string(),
        out: &mut out,
    };
    let domain = p.domain();
    let mut vars: Vec<RandomVariable> = xs.to_vec();
    vars.extend(basis(domain));
    let atoms = p.atom_indicators();
    let projected: Vec<RandomVariable> = vars
        .iter()
        .map(|x| cond_expectation(x, p))
        .collect::<Result<_>>()?;
    let name = |k: usize| match k.checked_sub(xs.len()) {
        None => format!("X{}", k + 1),
        Some(i) => format!("1_{}", domain.outcome(i)),
    };

    let mut checks = Vec::new();
    for (k, e) in projected.iter().enumerate() {
        checks.push(equal_rv(|| format!("at {}", name(k)), &cond_expectation(e, p)?, e));
    }
    r.law("idempotent", checks);

    let mut checks = Vec::new();
    for (k, (x, ex)) in vars.iter().zip(&projected).enumerate() {
        for (l, (y, ey)) in vars.iter().zip(&projected).enumerate().skip(k + 1) {
            let what = || format!("at {}, {}", name(k), name(l));
            checks.push(equal(what, &ex.inner_product(y)?, &x.inner_product(ey)?));
        }
    }
    r.law("self-adjoint", checks);

    let mut checks = Vec::new();
    for (b, a) in atoms.iter().enumerate() {
        checks.push(equal_rv(|| format!("at block {}", b + 1), &cond_expectation(a, p)?, a));
    }
    r.law("identity-on-algebra", checks);

    let mut checks = Vec::new();
    for (b, a) in atoms.iter().enumerate() {
        for (k, (x, ex)) in vars.iter().zip(&projected).enumerate() {
            let what = || format!("block {}, {}", b + 1, name(k));
            checks.push(equal_rv(what, &cond_expectation(&a.mul(x)?, p)?, &a.mul(ex)?));
        }
    }
    r.law("algebra-linear", checks);

    let mut checks = Vec::new();
    for (k, (x, ex)) in vars.iter().zip(&projected).enumerate() {
        checks.push(equal(|| format!("at {}", name(k)), &ex.expectation(), &x.expectation()));
    }
    r.law("total-expectation", checks);

    let mut checks = Vec::new();
    for w in domain.outcomes() {
        let b = Event::from_predicate(domain, |l| l == w);
        let (lhs, rhs) = total_probability_sides(&b, p)?;
        checks.push(equal(|| format!("at {{{w}}}"), &lhs, &rhs));
    }
    r.law("total-probability", checks);

    let mut checks = Vec::new();
    for (k, x) in vars.iter().enumerate() {
        let (lhs, rhs) = total_variance_sides(x, p)?;
        checks.push(equal(|| format!("at {}", name(k)), &lhs, &rhs));
    }
    r.law("total-variance", checks);

    let coarse = Partition::single_block(domain);
    let mut checks = Vec::new();
    for (k, x) in vars.iter().enumerate() {
        for (l, y) in vars.iter().enumerate().skip(k) {
            let (lhs, rhs) = total_covariance_decomposition(x, y, p, &coarse)?;
            checks.push(equal_rv(|| format!("at {}, {}", name(k), name(l)), &lhs, &rhs));
        }
    }
    r.law("total-covariance", checks);

    let mut checks = Vec::new();
    for (k, x) in vars.iter().enumerate() {
        checks.push((!residual_is_orthogonal(x, p)?).then(|| format!("at {}", name(k))));
    }
    r.law("residual-orthogonal", checks);
    Ok(out)
}

/// Regression of `y` on `x`: residual orthogonal to `1` and `X`,
/// `var Y = var Ŷ + var(Y − Ŷ)`, and `0 ≤ r² ≤ 1`.
pub fn regression_laws(subject: &str, x: &RandomVariable, y: &RandomVariable) -> Result<Vec<LawOutcome>> {
    let fit = linear_regression(x, y)?;
    let mut out = Vec::new();
    let mut r = Report {
        subject: subject.to_string(),
        out: &mut out,
    };
    let ones = RandomVariable::constant(x.domain(), Rational::one());
    r.law(
        "residual-orthogonal",
        [
            equal(|| "against 1".into(), &fit.residual.inner_product(&ones)?, &Rational::zero()),
            equal(|| "against X".into(), &fit.residual.inner_product(x)?, &Rational::zero()),
        ],
    );
    r.law(
        "pythagoras",
        [equal(|| "var Y".into(), &y.variance(), &(&fit.var_fitted + &fit.var_residual))],
    );
    let r2 = fit.r_squared.clone();
    r.law(
        "r-squared-in-unit-interval",
        [r2.filter(|v| v.is_negative() || *v > Rational::one())
            .map(|v| format!("r² = {v}"))],
    );
    Ok(out)
}

/// Chebyshev's inequality at `ε ∈ {1/4, 1/2, 1}`.
pub fn chebyshev_laws(subject: &str, x: &RandomVariable) -> Result<Vec<LawOutcome>> {
    let mut out = Vec::new();
    let mut r = Report {
        subject: subject.to_string(),
        out: &mut out,
    };
    let mut checks = Vec::new();
    for eps in [ratio(1, 4), ratio(1, 2), ratio(1, 1)] {
        let (p, bound) = chebyshev_check(x, &eps)?;
        checks.push((p > bound).then(|| format!("ε={eps}: {p} > {bound}")));
    }
    r.law("chebyshev", checks);
    Ok(out)
}

/// Marginal laws, fiberwise independence, base change and conditional
/// independence of the coordinates for `Ω₁ ×_{Ω₀} Ω₂`.
pub fn fiber_product_laws(subject: &str, pi1: &Bundle, pi2: &Bundle) -> Result<Vec<LawOutcome>> {
    let fp = fiber_product(pi1, pi2)?;
    let mut out = Vec::new();
    let mut r = Report {
        subject: subject.to_string(),
        out: &mut out,
    };
    let mass = RandomVariable::mass_function(fp.product());
    r.law(
        "marginal-laws",
        [
            equal_rv(|| "first".into(), &fp.theta1().fiber_sum(&mass)?, &RandomVariable::mass_function(pi1.total())),
            equal_rv(|| "second".into(), &fp.theta2().fiber_sum(&mass)?, &RandomVariable::mass_function(pi2.total())),
        ],
    );
    let mut checks = Vec::new();
    for w0 in pi1.base().outcomes() {
        let lhs = fp.down().fiber_scheme(w0)?;
        let rhs = pi1.fiber_scheme(w0)?.product(&pi2.fiber_scheme(w0)?);
        checks.push(equal(|| format!("over {w0}"), &lhs, &rhs));
    }
    r.law("fiberwise-independence", checks);
    let mut checks = Vec::new();
    for (i, a2) in basis(pi2.total()).iter().enumerate() {
        let (lhs, rhs) = base_change_check(pi1, pi2, a2)?;
        checks.push(equal_rv(|| format!("at 1_{}", pi2.total().outcome(i)), &lhs, &rhs));
    }
    r.law("base-change", checks);
    let (independent, witness) = cond_independent(
        &fp.theta1().as_function(),
        &fp.theta2().as_function(),
        &fp.down().as_function(),
    )?;
    r.law(
        "coordinates-conditionally-independent",
        [(!independent).then(|| witness.map_or_else(String::new, |w| w.to_string()))],
    );
    Ok(out)
}

/// The glued chain is Markov, forwards and backwards.
pub fn markov_laws(subject: &str, pairs: &[Scheme]) -> Result<Vec<LawOutcome>> {
    let chain = markov_build(pairs)?;
    let mut out = Vec::new();
    let mut r = Report {
        subject: subject.to_string(),
        out: &mut out,
    };
    let xs = coordinate_functions(&chain)?;
    let verdict = |xs: &[RandomFunction]| -> Result<Option<String>> {
        Ok(markov_verify(xs)?.1.map(|i| format!("fails at step {i}")))
    };
    r.law("built-chain-is-markov", [verdict(&xs)?]);
    let reversed: Vec<RandomFunction> = xs.into_iter().rev().collect();
    r.law("reversal-is-markov", [verdict(&reversed)?]);
    Ok(out)
}

/// Runs every applicable law on `docs`. Inputs are numbered from 1 in the
/// order given; random variables and functions are paired with partitions,
/// each other and random functions on the same scheme.
pub fn check_documents(docs: &[Document]) -> Result<Vec<LawOutcome>> {
    let mut out = Vec::new();
    let name = |k: usize| format!("{}#{}", docs[k].kind(), k + 1);
    let rvs: Vec<(usize, &RandomVariable)> = docs
        .iter()
        .enumerate()
        .filter_map(|(k, d)| match d {
            Document::Rv(x) => Some((k, x)),
            _ => None,
        })
        .collect();
    for (k, doc) in docs.iter().enumerate() {
        match doc {
            Document::Scheme(s) => out.extend(bundle_laws(&name(k), &Bundle::terminal(s))?),
            Document::Bundle(b) => {
                out.extend(bundle_laws(&name(k), b)?);
                for (l, other) in docs.iter().enumerate().skip(k + 1) {
                    if let Document::Bundle(c) = other {
                        if c.base() == b.base() {
                            let subject = format!("{} x {}", name(k), name(l));
                            out.extend(fiber_product_laws(&subject, b, c)?);
                        }
                    }
                }
            }
            Document::Partition(p) => {
                let xs: Vec<RandomVariable> = rvs
                    .iter()
                    .filter(|(_, x)| x.domain() == p.domain())
                    .map(|(_, x)| (*x).clone())
                    .collect();
                out.extend(partition_laws(&name(k), p, &xs)?);
            }
            Document::Rv(x) => {
                out.extend(chebyshev_laws(&name(k), x)?);
                for (l, y) in rvs.iter().filter(|(l, y)| *l > k && y.domain() == x.domain()) {
                    if !x.variance().is_zero() {
                        let subject = format!("{} ~ {}", name(*l), name(k));
                        out.extend(regression_laws(&subject, x, y)?);
                    }
                }
            }
            Document::Rf(f) => {
                let mut checks = Vec::new();
                for (l, y) in rvs.iter().filter(|(_, y)| y.domain() == f.domain()) {
                    checks.push((!check_total_expectation(y, f)?).then(|| format!("for {}", name(*l))));
                }
                let (dist, bundle) = f.distribution();
                checks.push(equal(|| "distribution scheme".into(), bundle.base(), &dist));
                Report {
                    subject: name(k),
                    out: &mut out,
                }
                .law("total-expectation", checks);
            }
            Document::Pairs(pairs) => out.extend(markov_laws(&name(k), pairs)?),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::Label;
    use crate::rational::int;

    fn die() -> Scheme {
        Scheme::uniform_n(6)
    }

    fn parity() -> Bundle {
        Bundle::induced(&die(), |l| {
            let v: i64 = l.to_string().parse().unwrap();
            Label::atom(if v % 2 == 1 { "odd" } else { "even" })
        })
    }

    fn all_pass(outcomes: &[LawOutcome]) -> bool {
        outcomes.iter().all(LawOutcome::passed)
    }

    #[test]
    fn laws_hold_on_examples() {
        let p = parity();
        assert!(all_pass(&bundle_laws("b", &p).unwrap()));
        assert!(all_pass(&fiber_product_laws("fp", &p, &p).unwrap()));
        let square = RandomVariable::from_fn(&die(), |l| {
            let v: i64 = l.to_string().parse().unwrap();
            int(v * v)
        });
        let part = Partition::from_bundle(&p);
        assert!(all_pass(&partition_laws("p", &part, std::slice::from_ref(&square)).unwrap()));
        let x = RandomVariable::from_fn(&die(), |l| int(l.to_string().parse().unwrap()));
        assert!(all_pass(&regression_laws("r", &x, &square).unwrap()));
    }

    #[test]
    fn documents_dispatch() {
        let p = parity();
        let docs = [
            Document::Bundle(p.clone()),
            Document::Bundle(p.clone()),
            Document::Partition(Partition::from_bundle(&p)),
            Document::Rf(p.as_function()),
        ];
        let outcomes = check_documents(&docs).unwrap();
        assert!(all_pass(&outcomes));
        assert!(outcomes.iter().any(|o| o.subject == "bundle#1 x bundle#2"));
    }
}
