use std::collections::BTreeSet;

use proptest::prelude::*;

use glc_core::formula::{closure, parse_sequent};
use glc_core::interpolation::{self, split_propagate};
use glc_core::oracle::find_countermodel;
use glc_core::proofs::{self, Certificate, Principal, Rule};
use glc_core::prover::{provable_formula, prove_circ, prove_glseq};
use glc_core::{parse, render, Formula, Sequent, SplitSequent};

fn literal(names: &'static [&'static str]) -> impl Strategy<Value = Formula> {
    (prop::sample::select(names), any::<bool>()).prop_map(|(n, pos)| {
        if pos {
            Formula::atom(n)
        } else {
            Formula::neg_atom(n)
        }
    })
}

fn formula_over(names: &'static [&'static str], depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        6 => literal(names),
        1 => Just(Formula::Top),
        1 => Just(Formula::Bottom),
    ];
    leaf.prop_recursive(depth, 32, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            inner.clone().prop_map(Formula::boxed),
            inner.prop_map(Formula::diamond),
        ]
    })
}

fn formula() -> impl Strategy<Value = Formula> {
    formula_over(&["p", "q", "r"], 4)
}

/// Small formulas over two atoms, cheap enough for the Kripke oracle.
fn small_formula() -> impl Strategy<Value = Formula> {
    formula_over(&["p", "q"], 3)
}

fn lob_certificate() -> Certificate {
    let goal = Sequent::new(parse_sequent("<>([]p & ~p) | []p").unwrap());
    prove_circ(&goal).unwrap().certificate.unwrap()
}

#[derive(Clone, Debug)]
enum Mutation {
    DropNode(usize),
    SetRule(usize, usize),
    SetSequent(usize, Formula),
    DropPremise(usize),
    DuplicatePremise(usize),
    SetPrincipal(usize, Formula),
    AddBacklink(usize, usize),
    DropBacklinks,
    SetRoot(usize),
    SwapSequents(usize, usize),
}

const RULES: [Rule; 7] = [
    Rule::AxClash,
    Rule::AxTop,
    Rule::And,
    Rule::Or,
    Rule::BoxGl,
    Rule::BoxK4,
    Rule::Leaf,
];

fn mutation() -> impl Strategy<Value = Mutation> {
    let ix = 0usize..64;
    prop_oneof![
        ix.clone().prop_map(Mutation::DropNode),
        (ix.clone(), 0usize..RULES.len()).prop_map(|(i, r)| Mutation::SetRule(i, r)),
        (ix.clone(), small_formula()).prop_map(|(i, f)| Mutation::SetSequent(i, f)),
        ix.clone().prop_map(Mutation::DropPremise),
        ix.clone().prop_map(Mutation::DuplicatePremise),
        (ix.clone(), small_formula()).prop_map(|(i, f)| Mutation::SetPrincipal(i, f)),
        (ix.clone(), ix.clone()).prop_map(|(i, j)| Mutation::AddBacklink(i, j)),
        Just(Mutation::DropBacklinks),
        ix.clone().prop_map(Mutation::SetRoot),
        (ix.clone(), ix).prop_map(|(i, j)| Mutation::SwapSequents(i, j)),
    ]
}

fn apply(cert: &mut Certificate, m: &Mutation) {
    let n = cert.nodes.len();
    if n == 0 {
        return;
    }
    match m {
        Mutation::DropNode(i) => {
            cert.nodes.remove(i % n);
        }
        Mutation::SetRule(i, r) => cert.nodes[i % n].rule = RULES[*r],
        Mutation::SetSequent(i, f) => cert.nodes[i % n].sequent = Sequent::new([f.clone()]),
        Mutation::DropPremise(i) => {
            cert.nodes[i % n].premises.pop();
        }
        Mutation::DuplicatePremise(i) => {
            let node = &mut cert.nodes[i % n];
            if let Some(p) = node.premises.first().cloned() {
                node.premises.push(p);
            }
        }
        Mutation::SetPrincipal(i, f) => cert.nodes[i % n].principal = Principal::formula(f.clone()),
        Mutation::AddBacklink(i, j) => {
            let (a, b) = (cert.nodes[i % n].id.clone(), cert.nodes[j % n].id.clone());
            cert.backlinks.insert(a, b);
        }
        Mutation::DropBacklinks => cert.backlinks.clear(),
        Mutation::SetRoot(i) => cert.root = cert.nodes[i % n].id.clone(),
        Mutation::SwapSequents(i, j) => {
            let s = cert.nodes[i % n].sequent.clone();
            cert.nodes[i % n].sequent = cert.nodes[j % n].sequent.clone();
            cert.nodes[j % n].sequent = s;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn negation_is_an_involution(f in formula()) {
        prop_assert_eq!(f.negate().negate(), f);
    }

    #[test]
    fn render_then_parse_is_identity(f in formula()) {
        prop_assert_eq!(parse(&render(&f)).unwrap(), f);
    }

    #[test]
    fn vocabulary_dualises_under_negation(f in formula()) {
        prop_assert_eq!(f.negate().w(), f.w().complemented());
        prop_assert_eq!(f.negate().vocab().u, f.vocab().u.complemented());
    }

    #[test]
    fn closure_is_monotone_and_idempotent(fs in prop::collection::vec(formula(), 1..4), extra in formula()) {
        let small: BTreeSet<Formula> = closure(fs.iter());
        for f in &fs {
            prop_assert!(small.contains(f));
        }
        prop_assert_eq!(closure(small.iter()), small.clone());
        let mut more = fs.clone();
        more.push(extra);
        let big = closure(more.iter());
        prop_assert!(small.is_subset(&big));
    }

    #[test]
    fn compaction_preserves_meaning_and_vocabulary(f in small_formula()) {
        let c = f.compact();
        prop_assert!(c.w().is_subset(&f.w()));
        prop_assert!(c.size() <= f.size());
        prop_assert!(provable_formula(&Formula::iff(&f, &c)).unwrap());
        prop_assert!(provable_formula(&Formula::iff(&f, &f.simplify())).unwrap());
    }

    #[test]
    fn checker_is_total_on_mutated_certificates(ms in prop::collection::vec(mutation(), 1..4)) {
        let mut cert = lob_certificate();
        for m in &ms {
            apply(&mut cert, m);
        }
        // Must return a verdict for every calculus, never panic.
        let _ = proofs::check_circular(&cert);
        let _ = proofs::check_glseq(&cert);
        let _ = proofs::check_split_circular(&cert);
        let _ = proofs::check(&cert).to_json();
    }

    #[test]
    fn mutations_that_keep_acceptance_keep_validity(ms in prop::collection::vec(mutation(), 1..3)) {
        // Whatever survives the checker must still be a sound proof: its root
        // sequent has no small countermodel.
        let mut cert = lob_certificate();
        for m in &ms {
            apply(&mut cert, m);
        }
        if proofs::check_circular(&cert).is_accept() {
            let root = cert.root_node().unwrap();
            prop_assert!(find_countermodel(&root.sequent.sharp(), 3).is_none());
        }
    }

    #[test]
    fn provers_agree(f in formula()) {
        let goal = Sequent::new([f]);
        let circ = prove_circ(&goal).unwrap();
        let seq = prove_glseq(&goal).unwrap();
        prop_assert_eq!(circ.verdict, seq.verdict);
        if let Some(c) = &circ.certificate {
            prop_assert!(proofs::check_circular(c).is_accept());
        }
        if let Some(c) = &seq.certificate {
            prop_assert!(proofs::check_glseq(c).is_accept());
        }
    }

    #[test]
    fn refutations_are_sound(f in small_formula()) {
        let provable = provable_formula(&f).unwrap();
        let countermodel = find_countermodel(&f, 3);
        if let Some(cm) = &countermodel {
            prop_assert!(!provable, "countermodel {:?} for provable {}", cm, f);
            prop_assert!(!cm.model.forces(cm.fail_world, &f));
        }
    }

    #[test]
    fn split_acceptance_implies_flat_acceptance(fs in prop::collection::vec(small_formula(), 1..4), mask in any::<u8>()) {
        let goal = Sequent::new(fs.iter().cloned().chain([Formula::or(fs[0].clone(), fs[0].negate())]));
        let proof = prove_circ(&goal).unwrap().certificate.unwrap();
        let (mut left, mut right) = (Sequent::empty(), Sequent::empty());
        for (i, f) in goal.iter().enumerate() {
            if mask & (1 << (i % 8)) != 0 {
                left.insert(f.clone());
            } else {
                right.insert(f.clone());
            }
        }
        let split = split_propagate(&proof, &SplitSequent::new(left, right)).unwrap();
        prop_assert!(proofs::check_split_circular(&split).is_accept());
        prop_assert!(proofs::check_circular(&split.flatten()).is_accept());
    }

    #[test]
    fn mutated_split_proofs_respect_flattening(m in mutation()) {
        let goal = Sequent::new(parse_sequent("<>([]p & ~p), []p").unwrap());
        let proof = prove_circ(&goal).unwrap().certificate.unwrap();
        let split = SplitSequent::new(
            Sequent::new([parse("<>([]p & ~p)").unwrap()]),
            Sequent::new([parse("[]p").unwrap()]),
        );
        let mut sp = split_propagate(&proof, &split).unwrap();
        apply(&mut sp, &m);
        if proofs::check_split_circular(&sp).is_accept() {
            prop_assert!(proofs::check_circular(&sp.flatten()).is_accept());
        }
    }

    #[test]
    fn interpolants_exist_for_provable_implications(a in small_formula(), b in small_formula()) {
        let imp = Formula::implies(&a, b.clone());
        if provable_formula(&imp).unwrap() {
            let r = interpolation::interpolate(&a, &b).unwrap();
            prop_assert!(r.check.is_accept());
            let common = a.w().intersection(&b.w());
            prop_assert!(r.interpolant.w().is_subset(&common));
        } else {
            let is_not_provable = matches!(
                interpolation::interpolate(&a, &b),
                Err(interpolation::InterpolationError::NotProvable(_))
            );
            prop_assert!(is_not_provable);
        }
    }

    #[test]
    fn fixpoints_satisfy_their_equation(body in small_formula(), boxed in any::<bool>()) {
        // Guard every occurrence of p by a modal operator.
        let a = if boxed { Formula::boxed(body) } else { Formula::diamond(body) };
        let h = interpolation::fixpoint("p", &a).unwrap();
        prop_assert!(!h.mentions("p"));
        let p = Formula::atom("p");
        let claim = Formula::implies(&Formula::boxdot(Formula::iff(&p, &a)), Formula::iff(&p, &h));
        prop_assert!(find_countermodel(&claim, 3).is_none());
    }
}
