//! One-sided sequents (finite multisets of formulas) and split sequents.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::formula::Formula;

/// A finite multiset of formulas, stored sorted in canonical formula order.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequent {
    items: Vec<Formula>,
}

impl Sequent {
    pub fn new(items: impl IntoIterator<Item = Formula>) -> Self {
        let mut items: Vec<Formula> = items.into_iter().collect();
        items.sort();
        Sequent { items }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn items(&self) -> &[Formula] {
        &self.items
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Formula> {
        self.items.iter()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.items.binary_search(f).is_ok()
    }

    pub fn count(&self, f: &Formula) -> usize {
        self.items.iter().filter(|g| *g == f).count()
    }

    pub fn insert(&mut self, f: Formula) {
        let at = self.items.partition_point(|g| g <= &f);
        self.items.insert(at, f);
    }

    /// Removes one occurrence of `f`; returns whether one was present.
    pub fn remove_one(&mut self, f: &Formula) -> bool {
        match self.items.binary_search(f) {
            Ok(i) => {
                self.items.remove(i);
                true
            }
            Err(_) => false,
        }
    }

    pub fn with(&self, f: Formula) -> Sequent {
        let mut s = self.clone();
        s.insert(f);
        s
    }

    pub fn without(&self, f: &Formula) -> Option<Sequent> {
        let mut s = self.clone();
        s.remove_one(f).then_some(s)
    }

    /// Multiset union.
    pub fn union(&self, other: &Sequent) -> Sequent {
        Sequent::new(self.items.iter().chain(other.items.iter()).cloned())
    }

    /// Multiset difference `self - other`, or `None` if `other` is not a
    /// sub-multiset of `self`.
    pub fn difference(&self, other: &Sequent) -> Option<Sequent> {
        let mut s = self.clone();
        for f in other.iter() {
            if !s.remove_one(f) {
                return None;
            }
        }
        Some(s)
    }

    pub fn is_submultiset(&self, other: &Sequent) -> bool {
        other.difference(self).is_some()
    }

    /// `Γ^♯`: `F` for the empty sequent, otherwise the left-associated
    /// disjunction of the members in canonical order.
    pub fn sharp(&self) -> Formula {
        let mut it = self.items.iter().cloned();
        match it.next() {
            None => Formula::Bottom,
            Some(first) => it.fold(first, Formula::or),
        }
    }

    /// `◇Γ`.
    pub fn diamonds(&self) -> Sequent {
        Sequent::new(self.items.iter().cloned().map(Formula::diamond))
    }

    /// Each distinct member exactly once.
    pub fn underlying_set(&self) -> Sequent {
        let mut items = self.items.clone();
        items.dedup();
        Sequent { items }
    }

    /// Members of the form `<>A`.
    pub fn diamond_members(&self) -> Sequent {
        Sequent {
            items: self
                .items
                .iter()
                .filter(|f| f.is_diamond())
                .cloned()
                .collect(),
        }
    }

    /// Negation of every member.
    pub fn negated(&self) -> Sequent {
        Sequent::new(self.items.iter().map(Formula::negate))
    }

    /// Whether the sequent is an initial sequent: it contains `T`, or some
    /// formula together with its negation. Returns the witness.
    pub fn initial_witness(&self) -> Option<Formula> {
        if self.contains(&Formula::Top) {
            return Some(Formula::Top);
        }
        self.items
            .iter()
            .find(|f| self.contains(&f.negate()))
            .cloned()
    }
}

impl FromIterator<Formula> for Sequent {
    fn from_iter<I: IntoIterator<Item = Formula>>(iter: I) -> Self {
        Sequent::new(iter)
    }
}

impl<'a> IntoIterator for &'a Sequent {
    type Item = &'a Formula;
    type IntoIter = std::slice::Iter<'a, Formula>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, item) in self.items.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{item}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl Serialize for Sequent {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.items.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Sequent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(Sequent::new(Vec::<Formula>::deserialize(deserializer)?))
    }
}

/// A sequent with a designated two-way partition `left | right`.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitSequent {
    pub left: Sequent,
    pub right: Sequent,
}

impl SplitSequent {
    pub fn new(left: Sequent, right: Sequent) -> Self {
        SplitSequent { left, right }
    }

    pub fn flatten(&self) -> Sequent {
        self.left.union(&self.right)
    }
}

impl fmt::Display for SplitSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {}", self.left, self.right)
    }
}

impl fmt::Debug for SplitSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, vocab_of};

    fn seq(items: &[&str]) -> Sequent {
        items.iter().map(|s| parse(s).unwrap()).collect()
    }

    #[test]
    fn sharp_of_empty_is_bottom() {
        assert_eq!(Sequent::empty().sharp(), Formula::Bottom);
        assert_eq!(seq(&["p"]).sharp(), Formula::atom("p"));
    }

    #[test]
    fn sharp_keeps_multiplicity() {
        let s = seq(&["p", "q", "p"]);
        assert_eq!(s.sharp().to_string(), "p | p | q");
    }

    #[test]
    fn diamonds_wraps_each_member() {
        assert_eq!(seq(&["p", "[]q"]).diamonds(), seq(&["<>p", "<>[]q"]));
        assert_eq!(Sequent::empty().diamonds(), Sequent::empty());
    }

    #[test]
    fn underlying_set_drops_duplicates() {
        let s = seq(&["p", "p", "[]q"]);
        let u = s.underlying_set();
        assert_eq!(u, seq(&["p", "[]q"]));
        assert_eq!(s.difference(&u), Some(seq(&["p"])));
        assert_eq!(u.underlying_set(), u);
    }

    #[test]
    fn equality_is_multiset_equality() {
        assert_eq!(seq(&["p", "q"]), seq(&["q", "p"]));
        assert_ne!(seq(&["p", "q"]), seq(&["p", "q", "q"]));
    }

    #[test]
    fn sharp_vocabulary_matches_members() {
        let s = seq(&["p & []q", "<>~r", "p"]);
        assert_eq!(s.sharp().w(), vocab_of(s.iter()));
    }

    #[test]
    fn initial_detection() {
        assert!(seq(&["p", "~p", "q"]).initial_witness().is_some());
        assert!(seq(&["[]p", "<>~p"]).initial_witness().is_some());
        assert!(seq(&["T"]).initial_witness().is_some());
        assert!(seq(&["p", "q"]).initial_witness().is_none());
    }

    #[test]
    fn split_flattens() {
        let s = SplitSequent::new(seq(&["p"]), seq(&["~p", "q"]));
        assert_eq!(s.flatten(), seq(&["q", "p", "~p"]));
    }
}
