//! Lyndon interpolation from split circular proofs.
//!
//! An interpolant for a provable `A -> B` is read off a circular proof of
//! `~A, B`: the root is split as `~A | B`, the splitting is propagated up the
//! proof, and interpolants are assigned bottom-up. A leaf linked back to `t`
//! receives the unknown `X_t` (all such leaves share the split sequent of
//! `t`), and `X_t` is eliminated at `t` by a fixed point.

mod fixpoint;
mod split;

use std::collections::{HashMap, HashSet};

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::formula::{Formula, VocabularySet};
use crate::proofs::{self, Certificate, ProofNode, Rejection, Rule, Side};
use crate::prover::{Prover, ProverError};
use crate::sequent::{Sequent, SplitSequent};

pub use fixpoint::{fixpoint, fixpoint_vocab_bound, fixpoint_with, FixpointError};
pub use split::{split_propagate, split_propagate_bounded};

/// Unknowns are named outside the identifier grammar so they can never clash
/// with a user atom.
const UNKNOWN_PREFIX: &str = "#X";

#[derive(Debug, Error)]
pub enum InterpolationError {
    #[error("`{0}` is not provable")]
    NotProvable(Formula),
    #[error(transparent)]
    Prover(#[from] ProverError),
    #[error("input proof rejected: {0}")]
    InvalidProof(Rejection),
    #[error("split proof rejected: {0}")]
    InvalidSplitProof(Rejection),
    #[error("split `{split}` does not match root sequent `{root}`")]
    RootSplitMismatch { split: String, root: String },
    #[error("unknown {unknown} at node {node} is not guarded in `{formula}`")]
    Unguarded {
        node: String,
        unknown: String,
        formula: Formula,
    },
    #[error("split proof exceeded {limit} nodes")]
    Aborted { limit: u64 },
    #[error(transparent)]
    Fixpoint(#[from] FixpointError),
    #[error("interpolant `{0}` still contains unknowns")]
    Residual(Formula),
    #[error("candidate `{candidate}` failed the interpolant check: {check:?}")]
    CheckFailed {
        candidate: Formula,
        check: InterpolantCheck,
    },
}

fn unknown_name(target: &str) -> String {
    format!("{UNKNOWN_PREFIX}{target}")
}

fn has_unknowns(f: &Formula) -> bool {
    f.atoms().iter().any(|a| a.starts_with(UNKNOWN_PREFIX))
}

/// Reads an interpolant off a split circular proof.
///
/// The returned formula `C` satisfies `GL |- L# v C` and `GL |- ~C v R#` for
/// the root split `L | R`.
pub fn extract_interpolant(split_proof: &Certificate) -> Result<Formula, InterpolationError> {
    extract_interpolant_with(&Prover::default(), split_proof)
}

pub fn extract_interpolant_with(
    prover: &Prover,
    split_proof: &Certificate,
) -> Result<Formula, InterpolationError> {
    if let proofs::Verdict::Reject(r) = proofs::check_split_circular(split_proof) {
        return Err(InterpolationError::InvalidSplitProof(r));
    }
    let by_id: HashMap<&str, &ProofNode> = split_proof
        .nodes
        .iter()
        .map(|n| (n.id.as_str(), n))
        .collect();
    let ex = Extractor {
        prover,
        by_id,
        targets: split_proof
            .backlinks
            .iter()
            .map(|(leaf, target)| (leaf.as_str(), target.as_str()))
            .collect(),
        linked: split_proof.backlinks.values().map(String::as_str).collect(),
    };
    let c = ex.interpolant(&split_proof.root)?;
    if has_unknowns(&c) {
        return Err(InterpolationError::Residual(c));
    }
    Ok(c)
}

struct Extractor<'a> {
    prover: &'a Prover,
    by_id: HashMap<&'a str, &'a ProofNode>,
    /// Back-link target of each linked leaf.
    targets: HashMap<&'a str, &'a str>,
    linked: HashSet<&'a str>,
}

impl Extractor<'_> {
    fn interpolant(&self, id: &str) -> Result<Formula, InterpolationError> {
        let node = self.by_id[id];
        let side = node.principal.side.unwrap_or(Side::Left);
        let sub = |i: usize| self.interpolant(&node.premises[i]);
        let mut c = match node.rule {
            Rule::Leaf => Formula::atom(&unknown_name(self.targets[id])),
            Rule::AxTop => match side {
                Side::Right => Formula::Top,
                _ => Formula::Bottom,
            },
            Rule::AxClash => match side {
                Side::Left => Formula::Bottom,
                Side::Right => Formula::Top,
                Side::Cross => cross_literal(node).negate(),
            },
            Rule::And => match side {
                Side::Right => Formula::and(sub(0)?, sub(1)?),
                _ => Formula::or(sub(0)?, sub(1)?),
            },
            Rule::Or => sub(0)?,
            Rule::BoxK4 => match side {
                Side::Right => Formula::boxed(sub(0)?),
                _ => Formula::diamond(sub(0)?),
            },
            Rule::BoxGl => unreachable!("excluded by the split checker"),
        }
        .compact();

        let x = unknown_name(id);
        if self.linked.contains(id) && c.mentions(&x) {
            if c.vocab().u.iter().any(|l| *l.name == *x) || contains_complemented(&c, &x) {
                return Err(InterpolationError::Unguarded {
                    node: id.to_string(),
                    unknown: x,
                    formula: c,
                });
            }
            let h = fixpoint_with(self.prover, &x, &c)?;
            c = c.substitute(&x, &h).compact();
        }
        Ok(c)
    }
}

fn contains_complemented(f: &Formula, name: &str) -> bool {
    match f {
        Formula::NegAtom(n) => &**n == name,
        _ => f
            .children()
            .into_iter()
            .any(|c| contains_complemented(c, name)),
    }
}

/// The left member of a cross clash.
fn cross_literal(node: &ProofNode) -> Formula {
    if let Some(f) = &node.principal.formula {
        return f.clone();
    }
    let split = node.split.as_ref().expect("checked split node");
    split
        .left
        .iter()
        .find(|a| split.right.contains(&a.negate()))
        .cloned()
        .expect("checked cross clash")
}

/// Outcome of checking a candidate interpolant `C` for `A -> B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InterpolantCheck {
    /// `GL |- A -> C`.
    pub left_implication: bool,
    /// `GL |- C -> B`.
    pub right_implication: bool,
    /// Literals of `w(C)` missing from `w(A) ∩ w(B)`.
    pub vocab_extra: VocabularySet,
}

impl InterpolantCheck {
    pub fn is_accept(&self) -> bool {
        self.left_implication && self.right_implication && self.vocab_extra.is_empty()
    }

    /// The first failing condition, if any, as a short code.
    pub fn failure(&self) -> Option<&'static str> {
        if !self.vocab_extra.is_empty() {
            Some("vocabulary")
        } else if !self.left_implication {
            Some("left-implication")
        } else if !self.right_implication {
            Some("right-implication")
        } else {
            None
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self.failure() {
            None => json!({ "verdict": "accept" }),
            Some(reason) => json!({
                "verdict": "reject",
                "reason": reason,
                "left_implication": self.left_implication,
                "right_implication": self.right_implication,
                "vocab_extra": self.vocab_extra,
            }),
        }
    }
}

/// Checks `GL |- A -> C`, `GL |- C -> B` and `w(C) ⊆ w(A) ∩ w(B)`.
pub fn check_interpolant(
    a: &Formula,
    b: &Formula,
    c: &Formula,
) -> Result<InterpolantCheck, ProverError> {
    check_interpolant_with(&Prover::default(), a, b, c)
}

pub fn check_interpolant_with(
    prover: &Prover,
    a: &Formula,
    b: &Formula,
    c: &Formula,
) -> Result<InterpolantCheck, ProverError> {
    Ok(checked(prover, a, b, c)?.0)
}

fn checked(
    prover: &Prover,
    a: &Formula,
    b: &Formula,
    c: &Formula,
) -> Result<(InterpolantCheck, Option<Certificate>, Option<Certificate>), ProverError> {
    let left = prover.prove_circ(&Sequent::new([Formula::or(a.negate(), c.clone())]))?;
    let right = prover.prove_circ(&Sequent::new([Formula::or(c.negate(), b.clone())]))?;
    let common = a.w().intersection(&b.w());
    let check = InterpolantCheck {
        left_implication: left.is_provable(),
        right_implication: right.is_provable(),
        vocab_extra: c.w().difference(&common),
    };
    Ok((check, left.certificate, right.certificate))
}

#[derive(Clone, Debug, Serialize)]
pub struct VocabReport {
    pub a: VocabularySet,
    pub b: VocabularySet,
    pub c: VocabularySet,
}

/// An interpolant together with circular proofs of both implications.
#[derive(Clone, Debug)]
pub struct InterpolantResult {
    pub interpolant: Formula,
    /// Proof of `~A v C`.
    pub left_proof: Certificate,
    /// Proof of `~C v B`.
    pub right_proof: Certificate,
    pub vocab: VocabReport,
    pub check: InterpolantCheck,
}

impl InterpolantResult {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "interpolant": self.interpolant,
            "left_proof": self.left_proof,
            "right_proof": self.right_proof,
            "vocab": self.vocab,
            "verdict": if self.check.is_accept() { "accept" } else { "reject" },
        })
    }
}

/// Computes a Lyndon interpolant for `A -> B` with the default prover.
pub fn interpolate(a: &Formula, b: &Formula) -> Result<InterpolantResult, InterpolationError> {
    interpolate_with(&Prover::default(), a, b)
}

pub fn interpolate_with(
    prover: &Prover,
    a: &Formula,
    b: &Formula,
) -> Result<InterpolantResult, InterpolationError> {
    let na = a.negate();
    let goal = Sequent::new([na.clone(), b.clone()]);
    let proved = prover.prove_circ(&goal)?;
    if !proved.is_provable() {
        return Err(InterpolationError::NotProvable(Formula::implies(
            a,
            b.clone(),
        )));
    }
    let split = SplitSequent::new(Sequent::new([na]), Sequent::new([b.clone()]));
    let certificate = proved
        .certificate
        .expect("provable results carry a certificate");
    let split_proof = split_propagate_bounded(&certificate, &split, prover.budget)?;
    let c = extract_interpolant_with(prover, &split_proof)?;

    let (check, left_proof, right_proof) = checked(prover, a, b, &c)?;
    let (Some(left_proof), Some(right_proof)) = (left_proof, right_proof) else {
        return Err(InterpolationError::CheckFailed {
            candidate: c,
            check,
        });
    };
    if !check.is_accept() {
        return Err(InterpolationError::CheckFailed {
            candidate: c,
            check,
        });
    }
    Ok(InterpolantResult {
        vocab: VocabReport {
            a: a.w(),
            b: b.w(),
            c: c.w(),
        },
        interpolant: c,
        left_proof,
        right_proof,
        check,
    })
}
