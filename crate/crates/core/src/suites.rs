//! Extensional checks of the structural properties of GL provability.
//!
//! Each property is an implication between provability facts, for instance
//! cut: if `Γ, A` and `Γ, ~A` are provable then so is `Γ`. Instances are
//! assembled from a formula corpus with a seeded generator, and each one is
//! decided with the circular prover. An instance is non-vacuous when all of
//! its premises are provable, and a violation when additionally one of its
//! conclusions is not.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::formula::Formula;
use crate::prover::{Prover, ProverError};
use crate::sequent::Sequent;

/// Instances per property used by the self-test and the acceptance suite.
pub const DEFAULT_INSTANCES: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    /// `Γ, A` and `Γ, ~A` give `Γ`.
    Cut,
    /// `Γ, <>Γ, <>~A, A` gives `Γ, <>Γ, A`.
    LobRule,
    /// `Γ, A & B` gives `Γ, A` and `Γ, B`.
    InversionAnd,
    /// `Γ, A | B` gives `Γ, A, B`.
    InversionOr,
    /// `Γ, F` gives `Γ`.
    InversionBottom,
    /// `Γ` gives `Γ, A`.
    Weakening,
    /// `Γ, A, A` gives `Γ, A`.
    Contraction,
}

impl Property {
    pub const ALL: [Property; 7] = [
        Property::Cut,
        Property::LobRule,
        Property::InversionAnd,
        Property::InversionOr,
        Property::InversionBottom,
        Property::Weakening,
        Property::Contraction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Cut => "cut",
            Property::LobRule => "lob-rule",
            Property::InversionAnd => "inversion-and",
            Property::InversionOr => "inversion-or",
            Property::InversionBottom => "inversion-bottom",
            Property::Weakening => "weakening",
            Property::Contraction => "contraction",
        }
    }

    fn index(self) -> u64 {
        Property::ALL.iter().position(|p| *p == self).unwrap() as u64
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One instance: all `conclusions` must be provable whenever all `premises` are.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub property: Property,
    pub premises: Vec<Sequent>,
    pub conclusions: Vec<Sequent>,
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ss: &[Sequent]| {
            ss.iter()
                .map(|s| format!("[{s}]"))
                .collect::<Vec<_>>()
                .join(" ; ")
        };
        write!(
            f,
            "{}: {} => {}",
            self.property,
            join(&self.premises),
            join(&self.conclusions)
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Some premise is not provable.
    Vacuous,
    Holds,
    Violated,
}

impl Instance {
    pub fn evaluate(&self, prover: &Prover) -> Result<Outcome, ProverError> {
        for p in &self.premises {
            if !prover.provable(p)? {
                return Ok(Outcome::Vacuous);
            }
        }
        for c in &self.conclusions {
            if !prover.provable(c)? {
                return Ok(Outcome::Violated);
            }
        }
        Ok(Outcome::Holds)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub property: Property,
    pub instances: usize,
    pub non_vacuous: usize,
    pub violations: usize,
    /// The violated instances, rendered.
    pub counterexamples: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Assembles `count` instances of `property` from `corpus`.
pub fn assemble(property: Property, corpus: &[Formula], count: usize, seed: u64) -> Vec<Instance> {
    assert!(
        !corpus.is_empty(),
        "cannot assemble instances from an empty corpus"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(31).wrapping_add(property.index()));
    let len = corpus.len() as u32;
    let draw = |rng: &mut ChaCha8Rng| corpus[rng.gen_range(0..len) as usize].clone();
    (0..count)
        .map(|_| {
            // Contexts hold one or two corpus formulas.
            let mut gamma = Sequent::new([draw(&mut rng)]);
            if rng.gen_range(0..2u32) == 1 {
                gamma.insert(draw(&mut rng));
            }
            let a = draw(&mut rng);
            let (premises, conclusions) = match property {
                Property::Cut => (
                    vec![gamma.with(a.clone()), gamma.with(a.negate())],
                    vec![gamma],
                ),
                Property::LobRule => {
                    let boxed_ctx =
                        gamma.union(&gamma.iter().cloned().map(Formula::diamond).collect());
                    (
                        vec![boxed_ctx.with(Formula::diamond(a.negate())).with(a.clone())],
                        vec![boxed_ctx.with(a)],
                    )
                }
                Property::InversionAnd => {
                    let b = draw(&mut rng);
                    (
                        vec![gamma.with(Formula::and(a.clone(), b.clone()))],
                        vec![gamma.with(a), gamma.with(b)],
                    )
                }
                Property::InversionOr => {
                    let b = draw(&mut rng);
                    (
                        vec![gamma.with(Formula::or(a.clone(), b.clone()))],
                        vec![gamma.with(a).with(b)],
                    )
                }
                Property::InversionBottom => (vec![gamma.with(Formula::Bottom)], vec![gamma]),
                Property::Weakening => (vec![gamma.clone()], vec![gamma.with(a)]),
                Property::Contraction => (
                    vec![gamma.with(a.clone()).with(a.clone())],
                    vec![gamma.with(a)],
                ),
            };
            Instance {
                property,
                premises,
                conclusions,
            }
        })
        .collect()
}

/// Decides every instance of one property. Instances are evaluated in
/// parallel; the report does not depend on scheduling.
pub fn run_suite(
    prover: &Prover,
    property: Property,
    corpus: &[Formula],
    count: usize,
    seed: u64,
) -> Result<SuiteReport, ProverError> {
    let instances = assemble(property, corpus, count, seed);
    let outcomes = instances
        .par_iter()
        .map(|i| i.evaluate(prover))
        .collect::<Result<Vec<_>, _>>()?;
    let counterexamples: Vec<String> = instances
        .iter()
        .zip(&outcomes)
        .filter(|(_, o)| **o == Outcome::Violated)
        .map(|(i, _)| i.to_string())
        .collect();
    Ok(SuiteReport {
        property,
        instances: instances.len(),
        non_vacuous: outcomes.iter().filter(|o| **o != Outcome::Vacuous).count(),
        violations: counterexamples.len(),
        counterexamples,
    })
}

pub fn run_all(
    prover: &Prover,
    corpus: &[Formula],
    count: usize,
    seed: u64,
) -> Result<Vec<SuiteReport>, ProverError> {
    Property::ALL
        .iter()
        .map(|p| run_suite(prover, *p, corpus, count, seed))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{generate_corpus, CorpusSpec};
    use crate::formula::parse;

    #[test]
    fn assembly_is_deterministic() {
        let corpus = generate_corpus(&CorpusSpec::default());
        for p in Property::ALL {
            assert_eq!(assemble(p, &corpus, 20, 5), assemble(p, &corpus, 20, 5));
        }
        assert_ne!(
            assemble(Property::Cut, &corpus, 20, 5),
            assemble(Property::Cut, &corpus, 20, 6)
        );
    }

    #[test]
    fn instance_shapes() {
        let corpus = vec![parse("p").unwrap()];
        let i = &assemble(Property::LobRule, &corpus, 1, 0)[0];
        let lob_premise = &i.premises[0];
        assert!(lob_premise.contains(&parse("<>~p").unwrap()));
        assert_eq!(
            lob_premise.without(&parse("<>~p").unwrap()).as_ref(),
            Some(&i.conclusions[0])
        );
        assert_eq!(
            lob_premise.count(&parse("p").unwrap()),
            lob_premise.count(&parse("<>p").unwrap()) + 1
        );
        let i = &assemble(Property::Contraction, &corpus, 1, 0)[0];
        assert_eq!(i.premises[0].len(), i.conclusions[0].len() + 1);
        assert!(i.premises[0].is_submultiset(&i.conclusions[0].with(parse("p").unwrap())));
    }

    #[test]
    fn small_suites_pass() {
        let corpus = generate_corpus(&CorpusSpec::default());
        let reports = run_all(&Prover::default(), &corpus, 40, 1).unwrap();
        assert_eq!(reports.len(), Property::ALL.len());
        for r in &reports {
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.instances, 40);
        }
    }

    #[test]
    fn violation_is_reported() {
        // A false "property" instance: p does not follow from nothing.
        let i = Instance {
            property: Property::Weakening,
            premises: vec![Sequent::new([parse("p | ~p").unwrap()])],
            conclusions: vec![Sequent::new([parse("p").unwrap()])],
        };
        assert_eq!(i.evaluate(&Prover::default()).unwrap(), Outcome::Violated);
    }
}
