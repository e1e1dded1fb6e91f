//! Proof certificates for GL_Seq, circular and split circular proofs.
//!
//! A certificate is a finite tree of nodes addressed by string ids, plus a
//! back-link map from leaves to ancestors. Every rule instance records its
//! principal decomposition explicitly so checking never has to search.

mod check;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::formula::Formula;
use crate::sequent::{Sequent, SplitSequent};

pub use check::{
    check, check_circular, check_glseq, check_split_circular, RejectReason, Rejection, Verdict,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Calculus {
    #[serde(rename = "glseq")]
    GlSeq,
    #[serde(rename = "glcirc")]
    GlCirc,
    #[serde(rename = "glcirc-split")]
    GlCircSplit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// `Γ, A, Ā`
    AxClash,
    /// `Γ, T`
    AxTop,
    And,
    Or,
    /// The GL_Seq modal rule, whose premise carries the diagonal `<>Ā`.
    BoxGl,
    /// The K4 modal rule used by circular proofs.
    BoxK4,
    /// A non-axiomatic leaf; must be closed by a back-link.
    Leaf,
}

impl Rule {
    pub fn arity(self) -> usize {
        match self {
            Rule::And => 2,
            Rule::Or | Rule::BoxGl | Rule::BoxK4 => 1,
            Rule::AxClash | Rule::AxTop | Rule::Leaf => 0,
        }
    }

    pub fn is_axiom(self) -> bool {
        matches!(self, Rule::AxClash | Rule::AxTop)
    }
}

/// Which part of a split sequent a rule instance acts on. `Cross` is only
/// meaningful for the clash axiom with `A` on the left and `Ā` on the right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Left,
    Right,
    Cross,
}

/// The principal part of a rule instance.
///
/// For `and`/`or` it is the principal formula occurrence; for the modal rules
/// the principal `[]A`, the multiset `<>Γ` carried into the premise and the
/// weakened remainder `Δ`. In split certificates `diamonds`/`rest` describe
/// the left component and the `_right` fields the right one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Principal {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<Formula>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<Side>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diamonds: Option<Sequent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rest: Option<Sequent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diamonds_right: Option<Sequent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rest_right: Option<Sequent>,
}

impl Principal {
    pub fn is_empty(&self) -> bool {
        *self == Principal::default()
    }

    pub fn formula(f: Formula) -> Self {
        Principal {
            formula: Some(f),
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofNode {
    pub id: String,
    pub sequent: Sequent,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitSequent>,
    pub rule: Rule,
    #[serde(default)]
    pub premises: Vec<String>,
    #[serde(default, skip_serializing_if = "Principal::is_empty")]
    pub principal: Principal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub calculus: Calculus,
    pub root: String,
    pub nodes: Vec<ProofNode>,
    #[serde(default)]
    pub backlinks: BTreeMap<String, String>,
}

impl Certificate {
    pub fn from_json(text: &str) -> serde_json::Result<Certificate> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates always serialize")
    }

    pub fn node(&self, id: &str) -> Option<&ProofNode> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn root_node(&self) -> Option<&ProofNode> {
        self.node(&self.root)
    }

    pub fn count_rule(&self, rule: Rule) -> usize {
        self.nodes.iter().filter(|n| n.rule == rule).count()
    }

    /// Erases the splitting of a split certificate, producing a plain
    /// circular certificate with the same tree and back-links.
    pub fn flatten(&self) -> Certificate {
        let nodes = self
            .nodes
            .iter()
            .map(|n| {
                let p = &n.principal;
                let merge = |a: &Option<Sequent>, b: &Option<Sequent>| match (a, b) {
                    (None, None) => None,
                    (a, b) => Some(
                        a.clone()
                            .unwrap_or_default()
                            .union(&b.clone().unwrap_or_default()),
                    ),
                };
                ProofNode {
                    id: n.id.clone(),
                    sequent: n
                        .split
                        .as_ref()
                        .map_or_else(|| n.sequent.clone(), SplitSequent::flatten),
                    split: None,
                    rule: n.rule,
                    premises: n.premises.clone(),
                    principal: Principal {
                        formula: p.formula.clone(),
                        side: None,
                        diamonds: merge(&p.diamonds, &p.diamonds_right),
                        rest: merge(&p.rest, &p.rest_right),
                        diamonds_right: None,
                        rest_right: None,
                    },
                }
            })
            .collect();
        Certificate {
            calculus: Calculus::GlCirc,
            root: self.root.clone(),
            nodes,
            backlinks: self.backlinks.clone(),
        }
    }
}
