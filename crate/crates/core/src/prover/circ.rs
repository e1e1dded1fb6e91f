use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::{
    box_members, box_principal, logical_premises, modal_context, pick_logical, Deriv, ProverError,
    Stats,
};
use crate::formula::Formula;
use crate::proofs::{Principal, Rule};
use crate::sequent::Sequent;

/// No back-link in the subderivation points above this depth.
const CLOSED: usize = usize::MAX;

struct Search {
    budget: u64,
    stats: Stats,
    /// Sequents on the current branch, and whether a modal rule was applied there.
    path: Vec<(Sequent, bool)>,
    /// Saturated sequents with no circular proof. Branch ancestors only ever
    /// act as extra hypotheses, so a failure is independent of the branch.
    failed: HashSet<Sequent>,
    /// Derivations whose back-links all point inside themselves.
    closed: HashMap<Sequent, Arc<Deriv>>,
}

type Found = Option<(Arc<Deriv>, usize)>;

pub(super) fn search(
    goal: &Sequent,
    budget: u64,
) -> Result<(Option<Arc<Deriv>>, Stats), ProverError> {
    let mut s = Search {
        budget,
        stats: Stats::default(),
        path: Vec::new(),
        failed: HashSet::new(),
        closed: HashMap::new(),
    };
    let found = s.prove(goal.clone())?;
    Ok((found.map(|(d, _)| d), s.stats))
}

impl Search {
    fn prove(&mut self, s: Sequent) -> Result<Found, ProverError> {
        self.stats.nodes_expanded += 1;
        if self.stats.nodes_expanded > self.budget {
            return Err(ProverError::Aborted {
                budget: self.budget,
                expanded: self.stats.nodes_expanded,
            });
        }
        let depth = self.path.len();
        if let Some(w) = s.initial_witness() {
            return Ok(Some((Deriv::axiom(s, w), CLOSED)));
        }
        if let Some(target) = self.backlink_target(&s) {
            let leaf = Deriv {
                sequent: s,
                rule: Rule::Leaf,
                principal: Principal::default(),
                premises: Vec::new(),
                backlink_up: Some(depth - target),
            };
            return Ok(Some((Arc::new(leaf), target)));
        }
        if let Some(d) = self.closed.get(&s) {
            self.stats.memo_hits += 1;
            return Ok(Some((d.clone(), CLOSED)));
        }
        let found = match pick_logical(&s).cloned() {
            Some(f) => self.logical(&s, &f)?,
            None => self.modal(&s)?,
        };
        if let Some((d, reach)) = &found {
            if *reach >= depth {
                self.closed.insert(s, d.clone());
            }
        }
        Ok(found)
    }

    /// The nearest ancestor carrying `s`, provided a modal rule lies between.
    fn backlink_target(&self, s: &Sequent) -> Option<usize> {
        let mut crossed_box = false;
        for i in (0..self.path.len()).rev() {
            crossed_box |= self.path[i].1;
            if crossed_box && self.path[i].0 == *s {
                return Some(i);
            }
        }
        None
    }

    fn logical(&mut self, s: &Sequent, f: &Formula) -> Result<Found, ProverError> {
        let (rule, premises) = logical_premises(s, f);
        self.path.push((s.clone(), false));
        let mut derived = Vec::with_capacity(premises.len());
        let mut reach = CLOSED;
        for p in premises {
            match self.prove(p) {
                Ok(Some((d, r))) => {
                    derived.push(d);
                    reach = reach.min(r);
                }
                Ok(None) => {
                    self.path.pop();
                    return Ok(None);
                }
                Err(e) => {
                    self.path.pop();
                    return Err(e);
                }
            }
        }
        self.path.pop();
        let d = Deriv {
            sequent: s.clone(),
            rule,
            principal: Principal::formula(f.clone()),
            premises: derived,
            backlink_up: None,
        };
        Ok(Some((Arc::new(d), reach)))
    }

    fn modal(&mut self, s: &Sequent) -> Result<Found, ProverError> {
        if self.failed.contains(s) {
            self.stats.memo_hits += 1;
            return Ok(None);
        }
        let (diamonds, base) = modal_context(s);
        for boxed in box_members(s) {
            let Formula::Box(body) = &boxed else {
                unreachable!()
            };
            let premise = base.with((**body).clone());
            self.path.push((s.clone(), true));
            let r = self.prove(premise);
            self.path.pop();
            if let Some((d, reach)) = r? {
                let node = Deriv {
                    sequent: s.clone(),
                    rule: Rule::BoxK4,
                    principal: box_principal(s, &boxed, &diamonds),
                    premises: vec![d],
                    backlink_up: None,
                };
                return Ok(Some((Arc::new(node), reach)));
            }
        }
        self.failed.insert(s.clone());
        Ok(None)
    }
}
