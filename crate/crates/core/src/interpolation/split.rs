//! Propagating a root splitting upwards through a circular proof.

use std::collections::{BTreeMap, HashMap};

use super::InterpolationError;
use crate::formula::Formula;
use crate::proofs::{self, Calculus, Certificate, Principal, ProofNode, Rule, Side};
use crate::prover::DEFAULT_BUDGET;
use crate::sequent::{Sequent, SplitSequent};

/// Splits every sequent of the circular proof `proof` so that each formula
/// occurrence stays on the side of its ancestor occurrence, starting from
/// `root_split`.
///
/// A node is closed by a back-link whenever its split sequent already occurs
/// on the branch below it with a modal rule in between. A back-linked leaf of
/// `proof` with no such split ancestor is unfolded by re-expanding its link
/// target. At most [`DEFAULT_BUDGET`] nodes are produced.
pub fn split_propagate(
    proof: &Certificate,
    root_split: &SplitSequent,
) -> Result<Certificate, InterpolationError> {
    split_propagate_bounded(proof, root_split, DEFAULT_BUDGET)
}

pub fn split_propagate_bounded(
    proof: &Certificate,
    root_split: &SplitSequent,
    max_nodes: u64,
) -> Result<Certificate, InterpolationError> {
    if let proofs::Verdict::Reject(r) = proofs::check_circular(proof) {
        return Err(InterpolationError::InvalidProof(r));
    }
    let by_id: HashMap<&str, &ProofNode> = proof.nodes.iter().map(|n| (n.id.as_str(), n)).collect();
    let root = by_id[proof.root.as_str()];
    if root_split.flatten() != root.sequent {
        return Err(InterpolationError::RootSplitMismatch {
            split: root_split.to_string(),
            root: root.sequent.to_string(),
        });
    }
    let mut b = Builder {
        source: proof,
        by_id,
        max_nodes,
        nodes: Vec::new(),
        backlinks: BTreeMap::new(),
        path: Vec::new(),
    };
    let root_id = b.build(root, root_split.clone())?;
    Ok(Certificate {
        calculus: Calculus::GlCircSplit,
        root: root_id,
        nodes: b.nodes,
        backlinks: b.backlinks,
    })
}

struct Builder<'a> {
    source: &'a Certificate,
    by_id: HashMap<&'a str, &'a ProofNode>,
    max_nodes: u64,
    nodes: Vec<ProofNode>,
    backlinks: BTreeMap<String, String>,
    /// Split nodes on the current branch, and whether each applies a modal rule.
    path: Vec<(String, SplitSequent, bool)>,
}

impl<'a> Builder<'a> {
    /// The nearest split ancestor equal to `split` with a modal rule between.
    fn cycle_target(&self, split: &SplitSequent) -> Option<String> {
        let mut crossed_box = false;
        for (id, s, is_box) in self.path.iter().rev() {
            crossed_box |= is_box;
            if crossed_box && s == split {
                return Some(id.clone());
            }
        }
        None
    }

    fn build(
        &mut self,
        mut orig: &'a ProofNode,
        split: SplitSequent,
    ) -> Result<String, InterpolationError> {
        if self.nodes.len() as u64 >= self.max_nodes {
            return Err(InterpolationError::Aborted {
                limit: self.max_nodes,
            });
        }
        let id = format!("s{}", self.nodes.len());
        let slot = self.nodes.len();
        if let Some(target) = self.cycle_target(&split) {
            self.backlinks.insert(id.clone(), target);
            self.nodes.push(ProofNode {
                id: id.clone(),
                sequent: split.flatten(),
                split: Some(split),
                rule: Rule::Leaf,
                premises: Vec::new(),
                principal: Principal::default(),
            });
            return Ok(id);
        }
        if orig.rule == Rule::Leaf {
            // Unfold: continue as the link target, which carries the same sequent.
            let target = &self.source.backlinks[&orig.id];
            orig = self.by_id[target.as_str()];
        }
        let (principal, premise_splits) = split_instance(orig, &split);
        self.nodes.push(ProofNode {
            id: id.clone(),
            sequent: split.flatten(),
            split: Some(split.clone()),
            rule: orig.rule,
            premises: Vec::new(),
            principal,
        });
        self.path
            .push((id.clone(), split, orig.rule == Rule::BoxK4));
        let mut premises = Vec::with_capacity(orig.premises.len());
        for (p, s) in orig.premises.iter().zip(premise_splits) {
            let child = self.by_id[p.as_str()];
            match self.build(child, s) {
                Ok(c) => premises.push(c),
                Err(e) => {
                    self.path.pop();
                    return Err(e);
                }
            }
        }
        self.path.pop();
        self.nodes[slot].premises = premises;
        Ok(id)
    }
}

fn with_side(
    split: &SplitSequent,
    side: Side,
    f: impl FnOnce(&Sequent) -> Sequent,
) -> SplitSequent {
    match side {
        Side::Right => SplitSequent::new(split.left.clone(), f(&split.right)),
        _ => SplitSequent::new(f(&split.left), split.right.clone()),
    }
}

fn side_of(split: &SplitSequent, f: &Formula) -> Side {
    if split.left.contains(f) {
        Side::Left
    } else {
        Side::Right
    }
}

/// Side annotation and premise splittings for one rule instance of a checked
/// circular proof.
fn split_instance(node: &ProofNode, split: &SplitSequent) -> (Principal, Vec<SplitSequent>) {
    let p = &node.principal;
    match node.rule {
        Rule::AxTop => {
            let side = if split.right.contains(&Formula::Top) {
                Side::Right
            } else {
                Side::Left
            };
            (
                Principal {
                    side: Some(side),
                    ..Default::default()
                },
                Vec::new(),
            )
        }
        Rule::AxClash => {
            let (formula, side) = clash_side(split, p.formula.as_ref());
            (
                Principal {
                    formula: Some(formula),
                    side: Some(side),
                    ..Default::default()
                },
                Vec::new(),
            )
        }
        Rule::And | Rule::Or => {
            let f = p.formula.clone().expect("checked certificate");
            let side = side_of(split, &f);
            let ctx = |s: &Sequent| s.without(&f).expect("principal on its side");
            let premises = match &f {
                Formula::And(a, b) => vec![
                    with_side(split, side, |s| ctx(s).with((**a).clone())),
                    with_side(split, side, |s| ctx(s).with((**b).clone())),
                ],
                Formula::Or(a, b) => vec![with_side(split, side, |s| {
                    ctx(s).with((**a).clone()).with((**b).clone())
                })],
                _ => unreachable!("checked certificate"),
            };
            (
                Principal {
                    formula: Some(f),
                    side: Some(side),
                    ..Default::default()
                },
                premises,
            )
        }
        Rule::BoxK4 => {
            let f = p.formula.clone().expect("checked certificate");
            let Formula::Box(body) = &f else {
                unreachable!("checked certificate")
            };
            let side = side_of(split, &f);
            let mut left = split.left.clone();
            let mut right = split.right.clone();
            match side {
                Side::Right => right.remove_one(&f),
                _ => left.remove_one(&f),
            };
            let mut d_left = Sequent::empty();
            let mut d_right = Sequent::empty();
            for d in p.diamonds.clone().unwrap_or_default().iter() {
                if left.remove_one(d) {
                    d_left.insert(d.clone());
                } else {
                    right.remove_one(d);
                    d_right.insert(d.clone());
                }
            }
            let strip = |ds: &Sequent| -> Sequent {
                ds.iter()
                    .map(|d| match d {
                        Formula::Diamond(b) => (**b).clone(),
                        _ => unreachable!("checked certificate"),
                    })
                    .collect()
            };
            let mut prem_left = strip(&d_left).union(&d_left);
            let mut prem_right = strip(&d_right).union(&d_right);
            match side {
                Side::Right => prem_right.insert((**body).clone()),
                _ => prem_left.insert((**body).clone()),
            }
            (
                Principal {
                    formula: Some(f.clone()),
                    side: Some(side),
                    diamonds: Some(d_left),
                    rest: Some(left),
                    diamonds_right: Some(d_right),
                    rest_right: Some(right),
                },
                vec![SplitSequent::new(prem_left, prem_right)],
            )
        }
        Rule::Leaf | Rule::BoxGl => unreachable!("handled by the caller / excluded by the checker"),
    }
}

/// Chooses the split form of a clash axiom: one-sided forms first, then the
/// cross form with the left member recorded as the principal formula.
fn clash_side(split: &SplitSequent, formula: Option<&Formula>) -> (Formula, Side) {
    let candidates: Vec<Formula> = match formula {
        Some(a) => vec![a.clone(), a.negate()],
        None => split
            .flatten()
            .iter()
            .filter(|a| split.flatten().contains(&a.negate()))
            .cloned()
            .collect(),
    };
    for a in &candidates {
        let na = a.negate();
        if split.right.contains(a) && split.right.contains(&na) {
            return (a.clone(), Side::Right);
        }
        if split.left.contains(a) && split.left.contains(&na) {
            return (a.clone(), Side::Left);
        }
    }
    for a in &candidates {
        if split.left.contains(a) && split.right.contains(&a.negate()) {
            return (a.clone(), Side::Cross);
        }
    }
    unreachable!("checked clash axiom has a complementary pair")
}
