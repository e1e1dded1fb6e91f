use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::{
    box_members, box_principal, logical_premises, modal_context, pick_logical, Deriv, ProverError,
    Stats,
};
use crate::formula::Formula;
use crate::proofs::{Principal, Rule};
use crate::sequent::Sequent;

enum Outcome {
    Proved(Arc<Deriv>),
    /// `pruned` records whether the failure depended on the branch history.
    Failed {
        pruned: bool,
    },
}

struct Search {
    budget: u64,
    stats: Stats,
    /// (saturated sequent, principal) pairs already being expanded on this branch.
    history: HashSet<(Sequent, Formula)>,
    proved: HashMap<Sequent, Arc<Deriv>>,
    failed: HashSet<Sequent>,
}

pub(super) fn search(
    goal: &Sequent,
    budget: u64,
) -> Result<(Option<Arc<Deriv>>, Stats), ProverError> {
    let mut s = Search {
        budget,
        stats: Stats::default(),
        history: HashSet::new(),
        proved: HashMap::new(),
        failed: HashSet::new(),
    };
    let found = match s.prove(goal.clone())? {
        Outcome::Proved(d) => Some(d),
        Outcome::Failed { .. } => None,
    };
    Ok((found, s.stats))
}

impl Search {
    fn prove(&mut self, s: Sequent) -> Result<Outcome, ProverError> {
        self.stats.nodes_expanded += 1;
        if self.stats.nodes_expanded > self.budget {
            return Err(ProverError::Aborted {
                budget: self.budget,
                expanded: self.stats.nodes_expanded,
            });
        }
        if let Some(w) = s.initial_witness() {
            return Ok(Outcome::Proved(Deriv::axiom(s, w)));
        }
        if let Some(d) = self.proved.get(&s) {
            self.stats.memo_hits += 1;
            return Ok(Outcome::Proved(d.clone()));
        }
        let out = match pick_logical(&s).cloned() {
            Some(f) => self.logical(&s, &f)?,
            None => self.modal(&s)?,
        };
        if let Outcome::Proved(d) = &out {
            self.proved.insert(s, d.clone());
        }
        Ok(out)
    }

    fn logical(&mut self, s: &Sequent, f: &Formula) -> Result<Outcome, ProverError> {
        let (rule, premises) = logical_premises(s, f);
        let mut derived = Vec::with_capacity(premises.len());
        for p in premises {
            match self.prove(p)? {
                Outcome::Proved(d) => derived.push(d),
                failed => return Ok(failed),
            }
        }
        Ok(Outcome::Proved(Arc::new(Deriv {
            sequent: s.clone(),
            rule,
            principal: Principal::formula(f.clone()),
            premises: derived,
            backlink_up: None,
        })))
    }

    fn modal(&mut self, s: &Sequent) -> Result<Outcome, ProverError> {
        if self.failed.contains(s) {
            self.stats.memo_hits += 1;
            return Ok(Outcome::Failed { pruned: false });
        }
        let (diamonds, base) = modal_context(s);
        let mut pruned = false;
        for boxed in box_members(s) {
            let Formula::Box(body) = &boxed else {
                unreachable!()
            };
            let key = (s.clone(), boxed.clone());
            if self.history.contains(&key) {
                pruned = true;
                continue;
            }
            let premise = base
                .with((**body).clone())
                .with(Formula::diamond(body.negate()));
            self.history.insert(key.clone());
            let r = self.prove(premise);
            self.history.remove(&key);
            match r? {
                Outcome::Proved(d) => {
                    return Ok(Outcome::Proved(Arc::new(Deriv {
                        sequent: s.clone(),
                        rule: Rule::BoxGl,
                        principal: box_principal(s, &boxed, &diamonds),
                        premises: vec![d],
                        backlink_up: None,
                    })))
                }
                Outcome::Failed { pruned: p } => pruned |= p,
            }
        }
        if !pruned {
            self.failed.insert(s.clone());
        }
        Ok(Outcome::Failed { pruned })
    }
}
