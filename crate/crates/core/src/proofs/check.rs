//! Independent certificate checkers.
//!
//! Every check is deterministic matching against the decomposition recorded
//! in the certificate. Nodes are visited in pre-order from the root and the
//! first violation is reported.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use super::{Calculus, Certificate, Principal, ProofNode, Rule, Side};
use crate::formula::Formula;
use crate::sequent::{Sequent, SplitSequent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RejectReason {
    /// Not a tree: unknown ids, duplicate ids, shared or unreachable nodes.
    Malformed,
    WrongCalculus,
    WrongArity,
    RuleNotAllowed,
    BadAxiom,
    BadDecomposition,
    PremiseMismatch,
    BadSide,
    SplitMismatch,
    DanglingLeaf,
    BacklinkFromNonLeaf,
    BacklinkNotAncestor,
    BacklinkSequentMismatch,
    BacklinkSplitMismatch,
    BacklinkNoBox,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub node: Option<String>,
    pub reason: RejectReason,
    pub detail: String,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let reason = serde_json::to_value(self.reason).unwrap_or_default();
        let reason = reason.as_str().unwrap_or("?");
        match &self.node {
            Some(n) => write!(f, "{reason} at node {n}: {}", self.detail),
            None => write!(f, "{reason}: {}", self.detail),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(Rejection),
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }

    pub fn rejection(&self) -> Option<&Rejection> {
        match self {
            Verdict::Accept => None,
            Verdict::Reject(r) => Some(r),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Verdict::Accept => serde_json::json!({ "verdict": "accept" }),
            Verdict::Reject(r) => serde_json::json!({
                "verdict": "reject",
                "node": r.node,
                "reason": r.reason,
                "detail": r.detail,
            }),
        }
    }
}

type Failure = (RejectReason, String);

fn fail<T>(reason: RejectReason, detail: impl Into<String>) -> Result<T, Failure> {
    Err((reason, detail.into()))
}

/// Checks a GL_Seq proof tree.
pub fn check_glseq(cert: &Certificate) -> Verdict {
    check_as(cert, Calculus::GlSeq)
}

/// Checks a circular GL_circ proof.
pub fn check_circular(cert: &Certificate) -> Verdict {
    check_as(cert, Calculus::GlCirc)
}

/// Checks a split circular proof.
pub fn check_split_circular(cert: &Certificate) -> Verdict {
    check_as(cert, Calculus::GlCircSplit)
}

/// Dispatches on the certificate's declared calculus.
pub fn check(cert: &Certificate) -> Verdict {
    check_as(cert, cert.calculus)
}

fn check_as(cert: &Certificate, calculus: Calculus) -> Verdict {
    match run(cert, calculus) {
        Ok(()) => Verdict::Accept,
        Err(r) => Verdict::Reject(r),
    }
}

struct Tree<'a> {
    by_id: HashMap<&'a str, &'a ProofNode>,
    parent: HashMap<&'a str, &'a str>,
    preorder: Vec<&'a ProofNode>,
}

fn reject(node: Option<&str>, reason: RejectReason, detail: impl Into<String>) -> Rejection {
    Rejection {
        node: node.map(str::to_string),
        reason,
        detail: detail.into(),
    }
}

fn build_tree(cert: &Certificate) -> Result<Tree<'_>, Rejection> {
    use RejectReason::Malformed;
    let mut by_id = HashMap::new();
    for n in &cert.nodes {
        if by_id.insert(n.id.as_str(), n).is_some() {
            return Err(reject(Some(&n.id), Malformed, "duplicate node id"));
        }
    }
    let Some(root) = by_id.get(cert.root.as_str()).copied() else {
        return Err(reject(
            None,
            Malformed,
            format!("root `{}` is not a node", cert.root),
        ));
    };
    let mut parent = HashMap::new();
    for n in &cert.nodes {
        for p in &n.premises {
            if !by_id.contains_key(p.as_str()) {
                return Err(reject(
                    Some(&n.id),
                    Malformed,
                    format!("unknown premise `{p}`"),
                ));
            }
            if p == &cert.root {
                return Err(reject(
                    Some(&n.id),
                    Malformed,
                    "the root cannot be a premise",
                ));
            }
            if parent.insert(p.as_str(), n.id.as_str()).is_some() {
                return Err(reject(
                    Some(p),
                    Malformed,
                    "node is a premise of more than one node",
                ));
            }
        }
    }
    let mut preorder = Vec::with_capacity(cert.nodes.len());
    let mut stack = vec![root];
    while let Some(n) = stack.pop() {
        preorder.push(n);
        for p in n.premises.iter().rev() {
            stack.push(by_id[p.as_str()]);
        }
    }
    if preorder.len() != cert.nodes.len() {
        let seen: HashSet<&str> = preorder.iter().map(|n| n.id.as_str()).collect();
        let stray = cert
            .nodes
            .iter()
            .find(|n| !seen.contains(n.id.as_str()))
            .map(|n| n.id.as_str());
        return Err(reject(
            stray,
            Malformed,
            "node is not reachable from the root",
        ));
    }
    for (from, to) in &cert.backlinks {
        if !by_id.contains_key(from.as_str()) {
            return Err(reject(Some(from), Malformed, "back-link from unknown node"));
        }
        if !by_id.contains_key(to.as_str()) {
            return Err(reject(
                Some(from),
                Malformed,
                format!("back-link to unknown node `{to}`"),
            ));
        }
    }
    Ok(Tree {
        by_id,
        parent,
        preorder,
    })
}

fn run(cert: &Certificate, calculus: Calculus) -> Result<(), Rejection> {
    if cert.calculus != calculus {
        return Err(reject(
            None,
            RejectReason::WrongCalculus,
            format!(
                "expected {calculus:?}, certificate declares {:?}",
                cert.calculus
            ),
        ));
    }
    let tree = build_tree(cert)?;
    if calculus == Calculus::GlSeq && !cert.backlinks.is_empty() {
        return Err(reject(
            None,
            RejectReason::RuleNotAllowed,
            "GL_Seq proofs have no back-links",
        ));
    }
    for node in &tree.preorder {
        let premises: Vec<&ProofNode> = node
            .premises
            .iter()
            .map(|p| tree.by_id[p.as_str()])
            .collect();
        let linked = cert.backlinks.get(&node.id);
        let result =
            check_node(node, &premises, calculus, linked.is_some()).and_then(|()| match linked {
                Some(target) => check_backlink(&tree, node, target, calculus),
                None => Ok(()),
            });
        if let Err((reason, detail)) = result {
            return Err(reject(Some(&node.id), reason, detail));
        }
    }
    Ok(())
}

fn check_backlink(
    tree: &Tree<'_>,
    leaf: &ProofNode,
    target: &str,
    calculus: Calculus,
) -> Result<(), Failure> {
    use RejectReason::*;
    if leaf.rule != Rule::Leaf {
        return fail(
            BacklinkFromNonLeaf,
            format!("back-link source is tagged {:?}", leaf.rule),
        );
    }
    // Walk towards the root looking for the target, noting modal steps.
    let mut crossed_box = false;
    let mut cur = leaf.id.as_str();
    let mut found = false;
    while let Some(&up) = tree.parent.get(cur) {
        if tree.by_id[up].rule == Rule::BoxK4 {
            crossed_box = true;
        }
        if up == target {
            found = true;
            break;
        }
        cur = up;
    }
    if !found {
        return fail(
            BacklinkNotAncestor,
            format!("target `{target}` is not a strict ancestor"),
        );
    }
    if !crossed_box {
        return fail(
            BacklinkNoBox,
            format!("no modal rule between `{target}` and the leaf"),
        );
    }
    let target_node = tree.by_id[target];
    if target_node.sequent != leaf.sequent {
        return fail(
            BacklinkSequentMismatch,
            format!(
                "leaf has [{}], target has [{}]",
                leaf.sequent, target_node.sequent
            ),
        );
    }
    if calculus == Calculus::GlCircSplit && target_node.split != leaf.split {
        return fail(
            BacklinkSplitMismatch,
            format!("leaf and target `{target}` carry different splittings"),
        );
    }
    Ok(())
}

fn check_node(
    node: &ProofNode,
    premises: &[&ProofNode],
    calculus: Calculus,
    linked: bool,
) -> Result<(), Failure> {
    use RejectReason::*;
    if premises.len() != node.rule.arity() {
        return fail(
            WrongArity,
            format!(
                "{:?} takes {} premises, found {}",
                node.rule,
                node.rule.arity(),
                premises.len()
            ),
        );
    }
    let allowed = match node.rule {
        Rule::BoxGl => calculus == Calculus::GlSeq,
        Rule::BoxK4 | Rule::Leaf => calculus != Calculus::GlSeq,
        _ => true,
    };
    if !allowed {
        return fail(
            RuleNotAllowed,
            format!("{:?} is not a rule of {calculus:?}", node.rule),
        );
    }
    if node.rule == Rule::Leaf && !linked {
        return fail(DanglingLeaf, "non-axiomatic leaf without a back-link");
    }
    match calculus {
        Calculus::GlCircSplit => check_split_instance(node, premises),
        _ => check_flat_instance(node, premises),
    }
}

fn principal_formula(p: &Principal) -> Result<&Formula, Failure> {
    p.formula.as_ref().ok_or((
        RejectReason::BadDecomposition,
        "missing principal formula".into(),
    ))
}

fn expect_premise(found: &Sequent, expected: &Sequent, which: usize) -> Result<(), Failure> {
    if found != expected {
        return fail(
            RejectReason::PremiseMismatch,
            format!("premise {which} is [{found}], rule requires [{expected}]"),
        );
    }
    Ok(())
}

/// Strips the outer `<>` of every member, failing if some member is not a
/// diamond formula.
fn strip_diamonds(ds: &Sequent) -> Result<Sequent, Failure> {
    ds.iter()
        .map(|d| match d {
            Formula::Diamond(b) => Ok((**b).clone()),
            other => fail(
                RejectReason::BadDecomposition,
                format!("`{other}` listed among the diamond context is not a <>-formula"),
            ),
        })
        .collect()
}

fn check_clash(part: &Sequent, other: &Sequent, formula: Option<&Formula>) -> Result<(), Failure> {
    match formula {
        Some(a) if part.contains(a) && other.contains(&a.negate()) => Ok(()),
        Some(a) => fail(
            RejectReason::BadAxiom,
            format!("`{a}` and its negation are not both present"),
        ),
        None if part.iter().any(|a| other.contains(&a.negate())) => Ok(()),
        None => fail(RejectReason::BadAxiom, "no complementary pair"),
    }
}

fn check_flat_instance(node: &ProofNode, premises: &[&ProofNode]) -> Result<(), Failure> {
    use RejectReason::*;
    let s = &node.sequent;
    let p = &node.principal;
    match node.rule {
        Rule::Leaf => Ok(()),
        Rule::AxTop if s.contains(&Formula::Top) => Ok(()),
        Rule::AxTop => fail(BadAxiom, "sequent does not contain T"),
        Rule::AxClash => check_clash(s, s, p.formula.as_ref()),
        Rule::And | Rule::Or => {
            let f = principal_formula(p)?;
            let ctx = s.without(f).ok_or((
                BadDecomposition,
                format!("principal `{f}` not in conclusion"),
            ))?;
            match (node.rule, f) {
                (Rule::And, Formula::And(a, b)) => {
                    expect_premise(&premises[0].sequent, &ctx.with((**a).clone()), 0)?;
                    expect_premise(&premises[1].sequent, &ctx.with((**b).clone()), 1)
                }
                (Rule::Or, Formula::Or(a, b)) => expect_premise(
                    &premises[0].sequent,
                    &ctx.with((**a).clone()).with((**b).clone()),
                    0,
                ),
                _ => fail(
                    BadDecomposition,
                    format!("`{f}` does not match rule {:?}", node.rule),
                ),
            }
        }
        Rule::BoxGl | Rule::BoxK4 => {
            let f = principal_formula(p)?;
            let Formula::Box(body) = f else {
                return fail(
                    BadDecomposition,
                    format!("principal `{f}` is not a []-formula"),
                );
            };
            let diamonds = p
                .diamonds
                .clone()
                .ok_or((BadDecomposition, "missing diamond context".to_string()))?;
            let gamma = strip_diamonds(&diamonds)?;
            let rest = s.without(f).and_then(|r| r.difference(&diamonds)).ok_or((
                BadDecomposition,
                format!("conclusion does not contain <>Γ, {f}"),
            ))?;
            if let Some(given) = &p.rest {
                if *given != rest {
                    return fail(
                        BadDecomposition,
                        format!("declared remainder [{given}] is not [{rest}]"),
                    );
                }
            }
            let mut expected = gamma.union(&diamonds).with((**body).clone());
            if node.rule == Rule::BoxGl {
                expected.insert(Formula::diamond(body.negate()));
            }
            expect_premise(&premises[0].sequent, &expected, 0)
        }
    }
}

fn part(split: &SplitSequent, side: Side) -> &Sequent {
    match side {
        Side::Right => &split.right,
        _ => &split.left,
    }
}

fn replace_part(split: &SplitSequent, side: Side, with: Sequent) -> SplitSequent {
    match side {
        Side::Right => SplitSequent::new(split.left.clone(), with),
        _ => SplitSequent::new(with, split.right.clone()),
    }
}

fn expect_split(
    found: &Option<SplitSequent>,
    expected: &SplitSequent,
    which: usize,
) -> Result<(), Failure> {
    if found.as_ref() != Some(expected) {
        let shown = found.as_ref().map_or("none".to_string(), |s| s.to_string());
        return fail(
            RejectReason::PremiseMismatch,
            format!("premise {which} is split as [{shown}], rule requires [{expected}]"),
        );
    }
    Ok(())
}

fn check_split_instance(node: &ProofNode, premises: &[&ProofNode]) -> Result<(), Failure> {
    use RejectReason::*;
    let Some(split) = &node.split else {
        return fail(SplitMismatch, "node carries no splitting");
    };
    if split.flatten() != node.sequent {
        return fail(
            SplitMismatch,
            format!("splitting [{split}] does not flatten to [{}]", node.sequent),
        );
    }
    if node.rule == Rule::Leaf {
        return Ok(());
    }
    let p = &node.principal;
    let Some(side) = p.side else {
        return fail(BadSide, "split rule instance without a side");
    };
    if side == Side::Cross && node.rule != Rule::AxClash {
        return fail(BadSide, format!("{:?} has no cross form", node.rule));
    }
    match node.rule {
        Rule::Leaf => Ok(()),
        Rule::AxTop if part(split, side).contains(&Formula::Top) => Ok(()),
        Rule::AxTop => fail(BadAxiom, format!("{side:?} side does not contain T")),
        Rule::AxClash => match side {
            Side::Cross => check_clash(&split.left, &split.right, p.formula.as_ref()),
            s => check_clash(part(split, s), part(split, s), p.formula.as_ref()),
        },
        Rule::And | Rule::Or => {
            let f = principal_formula(p)?;
            let ctx = part(split, side).without(f).ok_or((
                BadDecomposition,
                format!("principal `{f}` not on the {side:?} side"),
            ))?;
            match (node.rule, f) {
                (Rule::And, Formula::And(a, b)) => {
                    expect_split(
                        &premises[0].split,
                        &replace_part(split, side, ctx.with((**a).clone())),
                        0,
                    )?;
                    expect_split(
                        &premises[1].split,
                        &replace_part(split, side, ctx.with((**b).clone())),
                        1,
                    )
                }
                (Rule::Or, Formula::Or(a, b)) => expect_split(
                    &premises[0].split,
                    &replace_part(split, side, ctx.with((**a).clone()).with((**b).clone())),
                    0,
                ),
                _ => fail(
                    BadDecomposition,
                    format!("`{f}` does not match rule {:?}", node.rule),
                ),
            }
        }
        Rule::BoxK4 => {
            let f = principal_formula(p)?;
            let Formula::Box(body) = f else {
                return fail(
                    BadDecomposition,
                    format!("principal `{f}` is not a []-formula"),
                );
            };
            let d_left = p.diamonds.clone().unwrap_or_default();
            let d_right = p.diamonds_right.clone().unwrap_or_default();
            let g_left = strip_diamonds(&d_left)?;
            let g_right = strip_diamonds(&d_right)?;
            let (mut left_rest, mut right_rest) =
                (Some(split.left.clone()), Some(split.right.clone()));
            match side {
                Side::Right => right_rest = right_rest.and_then(|r| r.without(f)),
                _ => left_rest = left_rest.and_then(|r| r.without(f)),
            }
            let left_rest = left_rest.and_then(|r| r.difference(&d_left));
            let right_rest = right_rest.and_then(|r| r.difference(&d_right));
            let (Some(left_rest), Some(right_rest)) = (left_rest, right_rest) else {
                return fail(BadDecomposition, "conclusion does not decompose as <>Γ1, Δ1 | <>Γ2, Δ2 with the principal on its side");
            };
            for (given, actual) in [(&p.rest, &left_rest), (&p.rest_right, &right_rest)] {
                if let Some(given) = given {
                    if given != actual {
                        return fail(
                            BadDecomposition,
                            format!("declared remainder [{given}] is not [{actual}]"),
                        );
                    }
                }
            }
            let mut left = g_left.union(&d_left);
            let mut right = g_right.union(&d_right);
            match side {
                Side::Right => right.insert((**body).clone()),
                _ => left.insert((**body).clone()),
            }
            expect_split(&premises[0].split, &SplitSequent::new(left, right), 0)
        }
        Rule::BoxGl => fail(RuleNotAllowed, "BoxGl in a split proof"),
    }
}
