//! Backward proof search for GL_circ and GL_Seq.
//!
//! Both searches apply the invertible `and`/`or` rules eagerly and only try
//! modal rules at saturated sequents, taking every distinct `<>`-member of
//! the conclusion into the premise. Every certificate is re-checked before it
//! is returned.

mod circ;
mod seq;

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::formula::Formula;
use crate::proofs::{
    self, Calculus, Certificate, Principal, ProofNode, Rejection, Rule, Verdict as CheckVerdict,
};
use crate::sequent::Sequent;

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "GLC_BUDGET";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProverError {
    #[error("search aborted after expanding {expanded} nodes (budget {budget})")]
    Aborted { budget: u64, expanded: u64 },
    #[error("internal error: emitted certificate was rejected: {0}")]
    UnsoundCertificate(Rejection),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Provable,
    NotProvable,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub nodes_expanded: u64,
    pub backlinks: u64,
    pub memo_hits: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProveResult {
    pub verdict: Verdict,
    pub certificate: Option<Certificate>,
    pub stats: Stats,
}

impl ProveResult {
    pub fn is_provable(&self) -> bool {
        self.verdict == Verdict::Provable
    }
}

/// Search configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Prover {
    /// Maximum number of search nodes expanded before giving up.
    pub budget: u64,
}

impl Default for Prover {
    fn default() -> Self {
        Prover {
            budget: DEFAULT_BUDGET,
        }
    }
}

impl Prover {
    pub fn with_budget(budget: u64) -> Self {
        Prover { budget }
    }

    /// Default configuration, with the budget taken from `GLC_BUDGET` when
    /// that variable holds a positive integer.
    pub fn from_env() -> Self {
        let budget = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
            .filter(|b| *b > 0)
            .unwrap_or(DEFAULT_BUDGET);
        Prover { budget }
    }

    /// Circular proof search.
    pub fn prove_circ(&self, goal: &Sequent) -> Result<ProveResult, ProverError> {
        let (deriv, mut stats) = circ::search(goal, self.budget)?;
        finish(deriv, &mut stats, Calculus::GlCirc, proofs::check_circular)
    }

    /// Proof search in GL_Seq.
    pub fn prove_glseq(&self, goal: &Sequent) -> Result<ProveResult, ProverError> {
        let (deriv, mut stats) = seq::search(goal, self.budget)?;
        finish(deriv, &mut stats, Calculus::GlSeq, proofs::check_glseq)
    }

    /// Whether GL proves `f`, decided by circular proof search on `[f]`.
    pub fn provable_formula(&self, f: &Formula) -> Result<bool, ProverError> {
        Ok(self.prove_circ(&Sequent::new([f.clone()]))?.is_provable())
    }

    pub fn provable(&self, goal: &Sequent) -> Result<bool, ProverError> {
        Ok(self.prove_circ(goal)?.is_provable())
    }
}

pub fn prove_circ(goal: &Sequent) -> Result<ProveResult, ProverError> {
    Prover::default().prove_circ(goal)
}

pub fn prove_glseq(goal: &Sequent) -> Result<ProveResult, ProverError> {
    Prover::default().prove_glseq(goal)
}

pub fn provable_formula(f: &Formula) -> Result<bool, ProverError> {
    Prover::default().provable_formula(f)
}

fn finish(
    deriv: Option<Arc<Deriv>>,
    stats: &mut Stats,
    calculus: Calculus,
    checker: fn(&Certificate) -> CheckVerdict,
) -> Result<ProveResult, ProverError> {
    let Some(deriv) = deriv else {
        return Ok(ProveResult {
            verdict: Verdict::NotProvable,
            certificate: None,
            stats: *stats,
        });
    };
    let cert = deriv.to_certificate(calculus);
    stats.backlinks = cert.backlinks.len() as u64;
    if let CheckVerdict::Reject(r) = checker(&cert) {
        return Err(ProverError::UnsoundCertificate(r));
    }
    Ok(ProveResult {
        verdict: Verdict::Provable,
        certificate: Some(cert),
        stats: *stats,
    })
}

/// A derivation found by search. Back-links are stored as a number of steps
/// towards the root, so closed subderivations can be reused anywhere.
#[derive(Debug)]
pub(crate) struct Deriv {
    pub sequent: Sequent,
    pub rule: Rule,
    pub principal: Principal,
    pub premises: Vec<Arc<Deriv>>,
    pub backlink_up: Option<usize>,
}

impl Deriv {
    pub fn axiom(sequent: Sequent, witness: Formula) -> Arc<Deriv> {
        let (rule, principal) = if witness == Formula::Top {
            (Rule::AxTop, Principal::default())
        } else {
            (Rule::AxClash, Principal::formula(witness))
        };
        Arc::new(Deriv {
            sequent,
            rule,
            principal,
            premises: Vec::new(),
            backlink_up: None,
        })
    }

    pub fn to_certificate(&self, calculus: Calculus) -> Certificate {
        let mut nodes = Vec::new();
        let mut backlinks = std::collections::BTreeMap::new();
        let mut ancestors = Vec::new();
        emit(self, &mut nodes, &mut backlinks, &mut ancestors);
        Certificate {
            calculus,
            root: "n0".into(),
            nodes,
            backlinks,
        }
    }
}

fn emit(
    d: &Deriv,
    nodes: &mut Vec<ProofNode>,
    backlinks: &mut std::collections::BTreeMap<String, String>,
    ancestors: &mut Vec<String>,
) -> String {
    let id = format!("n{}", nodes.len());
    let slot = nodes.len();
    nodes.push(ProofNode {
        id: id.clone(),
        sequent: d.sequent.clone(),
        split: None,
        rule: d.rule,
        premises: Vec::new(),
        principal: d.principal.clone(),
    });
    if let Some(up) = d.backlink_up {
        let target = ancestors[ancestors.len() - up].clone();
        backlinks.insert(id.clone(), target);
    }
    ancestors.push(id.clone());
    let premises: Vec<String> = d
        .premises
        .iter()
        .map(|p| emit(p, nodes, backlinks, ancestors))
        .collect();
    ancestors.pop();
    nodes[slot].premises = premises;
    id
}

/// The first `or` formula, else the first `and` formula.
pub(crate) fn pick_logical(s: &Sequent) -> Option<&Formula> {
    s.iter()
        .find(|f| matches!(f, Formula::Or(..)))
        .or_else(|| s.iter().find(|f| matches!(f, Formula::And(..))))
}

/// Premises of the logical rule for `f` in `s`.
pub(crate) fn logical_premises(s: &Sequent, f: &Formula) -> (Rule, Vec<Sequent>) {
    let ctx = s.without(f).expect("principal is a member");
    match f {
        Formula::Or(a, b) => (Rule::Or, vec![ctx.with((**a).clone()).with((**b).clone())]),
        Formula::And(a, b) => (
            Rule::And,
            vec![ctx.with((**a).clone()), ctx.with((**b).clone())],
        ),
        _ => unreachable!("not a logical formula"),
    }
}

/// The modal context `<>Γ` (distinct diamond members) and `Γ, <>Γ`.
pub(crate) fn modal_context(s: &Sequent) -> (Sequent, Sequent) {
    let diamonds = s.diamond_members().underlying_set();
    let gamma: Sequent = diamonds
        .iter()
        .map(|d| match d {
            Formula::Diamond(b) => (**b).clone(),
            _ => unreachable!(),
        })
        .collect();
    let base = gamma.union(&diamonds);
    (diamonds, base)
}

/// Distinct `[]A` members in canonical order.
pub(crate) fn box_members(s: &Sequent) -> Vec<Formula> {
    let mut out: Vec<Formula> = s
        .iter()
        .filter(|f| matches!(f, Formula::Box(_)))
        .cloned()
        .collect();
    out.dedup();
    out
}

pub(crate) fn box_principal(s: &Sequent, boxed: &Formula, diamonds: &Sequent) -> Principal {
    let rest = s
        .without(boxed)
        .and_then(|r| r.difference(diamonds))
        .expect("modal context is a sub-multiset");
    Principal {
        formula: Some(boxed.clone()),
        diamonds: Some(diamonds.clone()),
        rest: Some(rest),
        ..Default::default()
    }
}
