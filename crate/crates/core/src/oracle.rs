//! Kripke semantics for GL over finite strict partial orders, and brute-force
//! countermodel search.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::formula::{Formula, Name};

/// World sets are bitmasks, so models have at most this many worlds.
pub const MAX_WORLDS: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("a model needs between 1 and {MAX_WORLDS} worlds, got {0}")]
    WorldCount(usize),
    #[error("world {0} is out of range")]
    WorldOutOfRange(usize),
    #[error("relation is not irreflexive at world {0}")]
    Reflexive(usize),
    #[error("relation is not transitive: {0}->{1}->{2} but not {0}->{2}")]
    NotTransitive(usize, usize, usize),
}

/// A finite model with a transitive, irreflexive accessibility relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    worlds: usize,
    succ: Vec<u32>,
    valuation: BTreeMap<Name, u32>,
}

impl KripkeModel {
    /// Builds a model, validating the frame conditions. Atoms missing from
    /// `valuation` are false everywhere.
    pub fn new(
        worlds: usize,
        relation: &[(usize, usize)],
        valuation: &BTreeMap<String, Vec<usize>>,
    ) -> Result<Self, ModelError> {
        if worlds == 0 || worlds > MAX_WORLDS {
            return Err(ModelError::WorldCount(worlds));
        }
        let mut succ = vec![0u32; worlds];
        for &(a, b) in relation {
            for w in [a, b] {
                if w >= worlds {
                    return Err(ModelError::WorldOutOfRange(w));
                }
            }
            succ[a] |= 1 << b;
        }
        let mut val = BTreeMap::new();
        for (atom, ws) in valuation {
            let mut mask = 0u32;
            for &w in ws {
                if w >= worlds {
                    return Err(ModelError::WorldOutOfRange(w));
                }
                mask |= 1 << w;
            }
            val.insert(Name::from(atom.as_str()), mask);
        }
        Self::from_masks(worlds, succ, val)
    }

    fn from_masks(
        worlds: usize,
        succ: Vec<u32>,
        valuation: BTreeMap<Name, u32>,
    ) -> Result<Self, ModelError> {
        for a in 0..worlds {
            if succ[a] & (1 << a) != 0 {
                return Err(ModelError::Reflexive(a));
            }
            for b in bits(succ[a]) {
                for c in bits(succ[b]) {
                    if succ[a] & (1 << c) == 0 {
                        return Err(ModelError::NotTransitive(a, b, c));
                    }
                }
            }
        }
        Ok(KripkeModel {
            worlds,
            succ,
            valuation,
        })
    }

    pub fn worlds(&self) -> usize {
        self.worlds
    }

    pub fn relation(&self) -> Vec<(usize, usize)> {
        (0..self.worlds)
            .flat_map(|a| bits(self.succ[a]).map(move |b| (a, b)))
            .collect()
    }

    pub fn successors(&self, w: usize) -> Vec<usize> {
        bits(self.succ[w]).collect()
    }

    pub fn holds(&self, atom: &str, w: usize) -> bool {
        self.valuation.get(atom).is_some_and(|m| m & (1 << w) != 0)
    }

    fn all(&self) -> u32 {
        if self.worlds == 32 {
            u32::MAX
        } else {
            (1u32 << self.worlds) - 1
        }
    }

    /// The set of worlds where `f` holds.
    pub fn extension(&self, f: &Formula) -> u32 {
        let all = self.all();
        match f {
            Formula::Top => all,
            Formula::Bottom => 0,
            Formula::Atom(n) => self.valuation.get(n).copied().unwrap_or(0),
            Formula::NegAtom(n) => all & !self.valuation.get(n).copied().unwrap_or(0),
            Formula::And(a, b) => self.extension(a) & self.extension(b),
            Formula::Or(a, b) => self.extension(a) | self.extension(b),
            Formula::Box(a) => {
                let ext = self.extension(a);
                (0..self.worlds)
                    .filter(|&w| self.succ[w] & !ext == 0)
                    .fold(0, |m, w| m | (1 << w))
            }
            Formula::Diamond(a) => {
                let ext = self.extension(a);
                (0..self.worlds)
                    .filter(|&w| self.succ[w] & ext != 0)
                    .fold(0, |m, w| m | (1 << w))
            }
        }
    }

    pub fn forces(&self, w: usize, f: &Formula) -> bool {
        assert!(w < self.worlds, "world {w} out of range");
        self.extension(f) & (1 << w) != 0
    }
}

fn bits(mut m: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(i)
    })
}

pub fn forces(m: &KripkeModel, w: usize, f: &Formula) -> bool {
    m.forces(w, f)
}

/// A model together with a world refuting the formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Countermodel {
    pub model: KripkeModel,
    pub fail_world: usize,
}

#[derive(Serialize)]
struct CountermodelJson {
    worlds: usize,
    relation: Vec<[usize; 2]>,
    valuation: BTreeMap<String, Vec<usize>>,
    #[serde(rename = "failWorld")]
    fail_world: usize,
}

impl Serialize for Countermodel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let m = &self.model;
        CountermodelJson {
            worlds: m.worlds,
            relation: m.relation().into_iter().map(|(a, b)| [a, b]).collect(),
            valuation: m
                .valuation
                .iter()
                .map(|(k, v)| (k.to_string(), bits(*v).collect()))
                .collect(),
            fail_world: self.fail_world,
        }
        .serialize(serializer)
    }
}

/// All strict partial orders on `n` worlds compatible with the natural order
/// `0 < 1 < ... < n-1` (every finite strict order has such a labelling), as
/// successor bitmasks. Each is the transitive closure of a DAG edge set,
/// listed once, in order of first generation.
pub fn strict_partial_orders(n: usize) -> Vec<Vec<u32>> {
    assert!((1..=MAX_WORLDS).contains(&n));
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    assert!(pairs.len() < 64, "too many worlds to enumerate");
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let mut succ = vec![0u32; n];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            if mask & (1 << i) != 0 {
                succ[a] |= 1 << b;
            }
        }
        // Edges only go upwards, so closing from the top down suffices.
        for a in (0..n).rev() {
            let mut closed = succ[a];
            for b in bits(succ[a]) {
                closed |= succ[b];
            }
            succ[a] = closed;
        }
        if seen.insert(succ.clone()) {
            out.push(succ);
        }
    }
    out
}

/// Exhaustive search for a countermodel with at most `max_worlds` worlds.
///
/// Enumeration order: number of worlds, then frame, then valuation, then the
/// lowest refuting world; the first hit is returned.
pub fn find_countermodel(f: &Formula, max_worlds: usize) -> Option<Countermodel> {
    assert!(max_worlds >= 1, "max_worlds must be at least 1");
    let atoms: Vec<Name> = f.atoms().into_iter().collect();
    for n in 1..=max_worlds.min(MAX_WORLDS) {
        let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        let bits_needed = n * atoms.len();
        assert!(bits_needed < 64, "valuation space too large");
        for succ in strict_partial_orders(n) {
            for v in 0u64..(1u64 << bits_needed) {
                let valuation: BTreeMap<Name, u32> = atoms
                    .iter()
                    .enumerate()
                    .map(|(i, a)| (a.clone(), ((v >> (i * n)) as u32) & all))
                    .collect();
                let model = KripkeModel {
                    worlds: n,
                    succ: succ.clone(),
                    valuation,
                };
                let ext = model.extension(f);
                if ext != all {
                    let fail_world = (!ext & all).trailing_zeros() as usize;
                    return Some(Countermodel { model, fail_world });
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn chain2(p_true_at: &[usize]) -> KripkeModel {
        let val = BTreeMap::from([("p".to_string(), p_true_at.to_vec())]);
        KripkeModel::new(2, &[(0, 1)], &val).unwrap()
    }

    /// Independent evaluator: explicit relation pairs, per-world recursion.
    fn naive(m: &KripkeModel, w: usize, g: &Formula) -> bool {
        let rel = m.relation();
        match g {
            Formula::Top => true,
            Formula::Bottom => false,
            Formula::Atom(n) => m.holds(n, w),
            Formula::NegAtom(n) => !m.holds(n, w),
            Formula::And(a, b) => naive(m, w, a) && naive(m, w, b),
            Formula::Or(a, b) => naive(m, w, a) || naive(m, w, b),
            Formula::Box(a) => rel
                .iter()
                .filter(|(x, _)| *x == w)
                .all(|(_, y)| naive(m, *y, a)),
            Formula::Diamond(a) => rel
                .iter()
                .filter(|(x, _)| *x == w)
                .any(|(_, y)| naive(m, *y, a)),
        }
    }

    #[test]
    fn dead_end_forces_every_box() {
        let m = chain2(&[]);
        assert!(m.forces(1, &f("[]F")));
        assert!(m.forces(1, &f("[](p & ~p)")));
        assert!(!m.forces(0, &f("[]F")));
    }

    #[test]
    fn diamond_top_iff_successor() {
        let m = chain2(&[]);
        assert!(m.forces(0, &f("<>T")));
        assert!(!m.forces(1, &f("<>T")));
    }

    #[test]
    fn lob_on_two_chain() {
        let m = chain2(&[1]);
        assert!(m.forces(0, &f("<>([]p & ~p) | []p")));
    }

    #[test]
    fn frame_conditions_validated() {
        let none = BTreeMap::new();
        assert_eq!(
            KripkeModel::new(1, &[(0, 0)], &none),
            Err(ModelError::Reflexive(0))
        );
        assert_eq!(
            KripkeModel::new(3, &[(0, 1), (1, 2)], &none),
            Err(ModelError::NotTransitive(0, 1, 2))
        );
        assert_eq!(
            KripkeModel::new(0, &[], &none),
            Err(ModelError::WorldCount(0))
        );
        assert!(KripkeModel::new(2, &[(0, 2)], &none).is_err());
    }

    #[test]
    fn reflexivity_refuted_in_one_world() {
        let c = find_countermodel(&f("<>~p | p"), 1).unwrap();
        assert_eq!(c.model.worlds(), 1);
        assert!(!c.model.holds("p", 0));
        let json = serde_json::to_value(&c).unwrap();
        assert_eq!(json["failWorld"], 0);
        assert_eq!(json["valuation"]["p"], serde_json::json!([]));
    }

    #[test]
    fn lob_has_no_small_countermodel() {
        assert!(find_countermodel(&f("<>([]p & ~p) | []p"), 4).is_none());
        assert!(find_countermodel(&Formula::Top, 3).is_none());
    }

    #[test]
    fn counts_of_naturally_labelled_posets() {
        // OEIS A006455
        let counts: Vec<usize> = (1..=5).map(|n| strict_partial_orders(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 7, 40, 357]);
    }

    #[test]
    fn countermodel_bound_is_monotone() {
        let g = f("[]~p | []p");
        let first = (1..=4)
            .find(|&n| find_countermodel(&g, n).is_some())
            .unwrap();
        for n in first..=4 {
            assert!(find_countermodel(&g, n).is_some());
        }
    }

    #[test]
    fn agrees_with_naive_evaluator() {
        use crate::corpus::{generate_corpus, CorpusSpec};
        let corpus = generate_corpus(&CorpusSpec {
            seed: 7,
            count: 60,
            ..CorpusSpec::default()
        });
        for n in 1..=3 {
            for succ in strict_partial_orders(n) {
                for v in 0u32..(1 << (2 * n)) {
                    let mask = (1u32 << n) - 1;
                    let valuation = BTreeMap::from([
                        (Name::from("p"), v & mask),
                        (Name::from("q"), (v >> n) & mask),
                    ]);
                    let m = KripkeModel::from_masks(n, succ.clone(), valuation).unwrap();
                    for g in &corpus {
                        for w in 0..n {
                            assert_eq!(m.forces(w, g), naive(&m, w, g), "{g} at {w}");
                        }
                    }
                }
            }
        }
    }
}
