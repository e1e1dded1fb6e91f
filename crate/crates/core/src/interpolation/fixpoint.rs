//! Explicit fixed points of modalized formulas.
//!
//! For `A(x)` in which `x` occurs only under modal operators, the fixed point
//! is built recursively over the maximal modal subformulas `M_1..M_n` of `A`
//! that contain `x`: each `A_i` is `A` with `M_i` replaced by a constant
//! (`T` for a box, `F` for a diamond), `H_i` is the fixed point of `A_i`, and
//! the result is `A` with every `M_i` replaced by `M_i[x := H_i]`. The `A_i`
//! have fewer such subformulas, so the recursion is well founded.
//!
//! Every result is certified with the prover before it is returned.

use std::collections::HashMap;

use thiserror::Error;

use crate::formula::{Formula, MarkedLiteral, VocabularySet};
use crate::prover::{Prover, ProverError};

#[derive(Debug, Error)]
pub enum FixpointError {
    #[error("atom `{atom}` occurs outside modal scope in `{formula}`")]
    NotModalized { atom: String, formula: Formula },
    #[error("candidate `{candidate}` is not a fixed point of `{formula}` in `{atom}`")]
    Uncertified {
        atom: String,
        formula: Formula,
        candidate: Formula,
    },
    #[error("fixed point `{candidate}` uses {extra} outside the permitted vocabulary")]
    Vocabulary {
        candidate: Formula,
        extra: VocabularySet,
    },
    #[error(transparent)]
    Prover(#[from] ProverError),
}

/// The vocabulary a fixed point of `a` in `atom` may use: `w*(a)` without
/// `atom°` when `a` has no complemented occurrence of `atom`, and
/// `w*(a) ∪ w*(~a)` without `atom°, ~atom°` otherwise.
pub fn fixpoint_vocab_bound(atom: &str, a: &Formula) -> VocabularySet {
    let x_marked = MarkedLiteral::new(atom, false, true);
    let has_negative = contains_literal(a, atom, true);
    let mut allowed = a.vocab_star();
    let mut removed: VocabularySet = [x_marked.clone()].into_iter().collect();
    if has_negative {
        allowed = allowed.union(&a.negate().vocab_star());
        removed.insert(x_marked.complement());
    }
    allowed.difference(&removed)
}

fn contains_literal(f: &Formula, atom: &str, complemented: bool) -> bool {
    match f {
        Formula::Atom(n) => !complemented && &**n == atom,
        Formula::NegAtom(n) => complemented && &**n == atom,
        _ => f
            .children()
            .into_iter()
            .any(|c| contains_literal(c, atom, complemented)),
    }
}

/// Computes and certifies a fixed point of `a` in `atom` with the default prover.
pub fn fixpoint(atom: &str, a: &Formula) -> Result<Formula, FixpointError> {
    fixpoint_with(&Prover::default(), atom, a)
}

pub fn fixpoint_with(prover: &Prover, atom: &str, a: &Formula) -> Result<Formula, FixpointError> {
    if a.vocab().u.iter().any(|l| &*l.name == atom) {
        return Err(FixpointError::NotModalized {
            atom: atom.to_string(),
            formula: a.clone(),
        });
    }
    let mut memo = HashMap::new();
    let candidate = construct(atom, &a.compact(), &mut memo).compact();

    let x = Formula::atom(atom);
    let claim = Formula::iff(
        &Formula::boxdot(Formula::iff(&x, a)),
        &Formula::boxdot(Formula::iff(&x, &candidate)),
    );
    if candidate.mentions(atom) || !prover.provable_formula(&claim)? {
        return Err(FixpointError::Uncertified {
            atom: atom.to_string(),
            formula: a.clone(),
            candidate,
        });
    }

    let extra = candidate.w().difference(&fixpoint_vocab_bound(atom, a));
    if !extra.is_empty() {
        return Err(FixpointError::Vocabulary { candidate, extra });
    }
    Ok(candidate)
}

fn construct(atom: &str, a: &Formula, memo: &mut HashMap<Formula, Formula>) -> Formula {
    if let Some(h) = memo.get(a) {
        return h.clone();
    }
    let mut components = Vec::new();
    modal_components(a, atom, &mut components);
    components.sort();
    components.dedup();

    let result = if components.is_empty() {
        a.clone()
    } else {
        let mut replaced = HashMap::new();
        for m in &components {
            let constant = match m {
                Formula::Box(_) => Formula::Top,
                _ => Formula::Bottom,
            };
            let reduced = replace_components(a, &|f| (f == m).then(|| constant.clone())).compact();
            let h = construct(atom, &reduced, memo);
            replaced.insert(m.clone(), m.substitute(atom, &h));
        }
        replace_components(a, &|f| replaced.get(f).cloned())
    };
    memo.insert(a.clone(), result.clone());
    result
}

/// Maximal modal subformulas of `f` that mention `atom`.
fn modal_components(f: &Formula, atom: &str, out: &mut Vec<Formula>) {
    match f {
        Formula::Box(_) | Formula::Diamond(_) => {
            if f.mentions(atom) {
                out.push(f.clone());
            }
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            modal_components(a, atom, out);
            modal_components(b, atom, out);
        }
        _ => {}
    }
}

/// Rewrites maximal modal subformulas of `f` through `g`, leaving them alone
/// where `g` returns `None`.
fn replace_components(f: &Formula, g: &dyn Fn(&Formula) -> Option<Formula>) -> Formula {
    match f {
        Formula::Box(_) | Formula::Diamond(_) => g(f).unwrap_or_else(|| f.clone()),
        Formula::And(a, b) => Formula::and(replace_components(a, g), replace_components(b, g)),
        Formula::Or(a, b) => Formula::or(replace_components(a, g), replace_components(b, g)),
        _ => f.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::prover::provable_formula;

    fn equivalent(a: &Formula, b: &Formula) -> bool {
        provable_formula(&Formula::iff(a, b)).unwrap()
    }

    fn check(atom: &str, a: &str, expected: &str) {
        let a = parse(a).unwrap();
        let h = fixpoint(atom, &a).unwrap();
        assert!(!h.mentions(atom));
        assert!(
            equivalent(&h, &parse(expected).unwrap()),
            "fixpoint of {a} is {h}, expected {expected}"
        );
    }

    #[test]
    fn known_fixpoints() {
        check("p", "[]p", "T");
        check("p", "[]~p", "[]F");
        check("p", "<>~p", "<>T");
        check("p", "[](p & q)", "[]q");
        check("p", "<>p", "F");
        check("p", "~[]p", "<>[]F");
    }

    #[test]
    fn closed_formula_is_its_own_fixpoint() {
        check("p", "[]q | r", "[]q | r");
    }

    #[test]
    fn nested_components_agree_with_models() {
        // Fixed-point equation checked semantically, independently of the prover.
        for text in [
            "[](p -> q) & <>(r & []p)",
            "<>(p & []~p) | [](q -> <>p)",
            "[][]p & <>~p",
        ] {
            let a = parse(text).unwrap();
            let h = fixpoint("p", &a).unwrap();
            let p = Formula::atom("p");
            let claim =
                Formula::implies(&Formula::boxdot(Formula::iff(&p, &a)), Formula::iff(&p, &h));
            assert!(
                crate::oracle::find_countermodel(&claim, 4).is_none(),
                "{text} -> {h}"
            );
        }
    }

    #[test]
    fn rejects_unguarded() {
        let err = fixpoint("p", &parse("p | []p").unwrap()).unwrap_err();
        assert!(matches!(err, FixpointError::NotModalized { .. }));
    }

    #[test]
    fn vocabulary_bound() {
        let a = parse("[](p & q)").unwrap();
        let bound = fixpoint_vocab_bound("p", &a);
        assert!(!bound.contains(&MarkedLiteral::new("p", false, true)));
        assert!(bound.contains(&MarkedLiteral::new("q", false, true)));
        let b = parse("[]~p").unwrap();
        let bound = fixpoint_vocab_bound("p", &b);
        assert!(!bound.contains(&MarkedLiteral::new("p", true, true)));
    }
}
