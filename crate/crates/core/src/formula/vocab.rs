//! Literal vocabularies with modal marking.
//!
//! A literal occurring outside every modal operator is recorded as is; a
//! literal occurring inside some `[]`/`<>` is recorded in its marked form,
//! written `p°`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use super::{Formula, Name};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MarkedLiteral {
    pub name: Name,
    pub complemented: bool,
    pub marked: bool,
}

impl MarkedLiteral {
    pub fn new(name: &str, complemented: bool, marked: bool) -> Self {
        MarkedLiteral {
            name: name.into(),
            complemented,
            marked,
        }
    }

    pub fn complement(&self) -> Self {
        MarkedLiteral {
            complemented: !self.complemented,
            ..self.clone()
        }
    }

    pub fn to_marked(&self) -> Self {
        MarkedLiteral {
            marked: true,
            ..self.clone()
        }
    }
}

impl fmt::Display for MarkedLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.complemented {
            write!(f, "~")?;
        }
        write!(f, "{}", self.name)?;
        if self.marked {
            write!(f, "°")?;
        }
        Ok(())
    }
}

impl fmt::Debug for MarkedLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for MarkedLiteral {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct VocabularySet(BTreeSet<MarkedLiteral>);

impl VocabularySet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, lit: MarkedLiteral) -> bool {
        self.0.insert(lit)
    }

    pub fn contains(&self, lit: &MarkedLiteral) -> bool {
        self.0.contains(lit)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &MarkedLiteral> {
        self.0.iter()
    }

    pub fn is_subset(&self, other: &VocabularySet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &VocabularySet) -> VocabularySet {
        VocabularySet(self.0.union(&other.0).cloned().collect())
    }

    pub fn intersection(&self, other: &VocabularySet) -> VocabularySet {
        VocabularySet(self.0.intersection(&other.0).cloned().collect())
    }

    pub fn difference(&self, other: &VocabularySet) -> VocabularySet {
        VocabularySet(self.0.difference(&other.0).cloned().collect())
    }

    /// `S° = { L° : L ∈ S or L° ∈ S }`.
    pub fn mark_closure(&self) -> VocabularySet {
        VocabularySet(self.0.iter().map(MarkedLiteral::to_marked).collect())
    }

    /// Toggles the complement flag of every entry.
    pub fn complemented(&self) -> VocabularySet {
        VocabularySet(self.0.iter().map(MarkedLiteral::complement).collect())
    }
}

impl FromIterator<MarkedLiteral> for VocabularySet {
    fn from_iter<I: IntoIterator<Item = MarkedLiteral>>(iter: I) -> Self {
        VocabularySet(iter.into_iter().collect())
    }
}

impl fmt::Display for VocabularySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, lit) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{lit}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for VocabularySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

/// The outside (`u`), inside (`v`) and combined (`w`) vocabularies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocabulary {
    pub u: VocabularySet,
    pub v: VocabularySet,
    pub w: VocabularySet,
}

impl Formula {
    pub fn vocab(&self) -> Vocabulary {
        let mut u = VocabularySet::new();
        let mut v = VocabularySet::new();
        collect(self, false, &mut u, &mut v);
        let w = u.union(&v);
        Vocabulary { u, v, w }
    }

    /// `w(f)`.
    pub fn w(&self) -> VocabularySet {
        self.vocab().w
    }

    /// `w*(f) = w(f) ∪ w(f)°`.
    pub fn vocab_star(&self) -> VocabularySet {
        let w = self.w();
        w.union(&w.mark_closure())
    }
}

fn collect(f: &Formula, modal: bool, u: &mut VocabularySet, v: &mut VocabularySet) {
    match f {
        Formula::Atom(n) | Formula::NegAtom(n) => {
            let complemented = matches!(f, Formula::NegAtom(_));
            if modal {
                v.insert(MarkedLiteral {
                    name: n.clone(),
                    complemented,
                    marked: true,
                });
            } else {
                u.insert(MarkedLiteral {
                    name: n.clone(),
                    complemented,
                    marked: false,
                });
            }
        }
        Formula::Top | Formula::Bottom => {}
        Formula::And(a, b) | Formula::Or(a, b) => {
            collect(a, modal, u, v);
            collect(b, modal, u, v);
        }
        Formula::Box(a) | Formula::Diamond(a) => collect(a, true, u, v),
    }
}

/// `w(Γ)`: union of the vocabularies of the members.
pub fn vocab_of<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> VocabularySet {
    fs.into_iter()
        .fold(VocabularySet::new(), |acc, f| acc.union(&f.w()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn lit(name: &str, complemented: bool, marked: bool) -> MarkedLiteral {
        MarkedLiteral::new(name, complemented, marked)
    }

    fn set(items: &[MarkedLiteral]) -> VocabularySet {
        items.iter().cloned().collect()
    }

    #[test]
    fn vocab_conjunction_with_box() {
        let v = parse("p & []q").unwrap().vocab();
        assert_eq!(v.u, set(&[lit("p", false, false)]));
        assert_eq!(v.v, set(&[lit("q", false, true)]));
        assert_eq!(v.w, set(&[lit("p", false, false), lit("q", false, true)]));
    }

    #[test]
    fn vocab_literal_inside_and_outside() {
        let v = parse("<>~p | p").unwrap().vocab();
        assert_eq!(v.u, set(&[lit("p", false, false)]));
        assert_eq!(v.v, set(&[lit("p", true, true)]));
        let v = parse("p & []p").unwrap().vocab();
        assert_eq!(v.w, set(&[lit("p", false, false), lit("p", false, true)]));
    }

    #[test]
    fn vocab_of_constant_is_empty() {
        let v = Formula::Top.vocab();
        assert!(v.u.is_empty() && v.v.is_empty() && v.w.is_empty());
    }

    #[test]
    fn mark_closure_examples() {
        let s = set(&[lit("p", false, false), lit("q", false, true)]);
        assert_eq!(
            s.mark_closure(),
            set(&[lit("p", false, true), lit("q", false, true)])
        );
        assert!(VocabularySet::new().mark_closure().is_empty());
        assert_eq!(s.mark_closure().mark_closure(), s.mark_closure());
    }

    #[test]
    fn vocab_star_examples() {
        assert_eq!(
            parse("[]p").unwrap().vocab_star(),
            set(&[lit("p", false, true)])
        );
        assert_eq!(
            parse("p").unwrap().vocab_star(),
            set(&[lit("p", false, false), lit("p", false, true)])
        );
        assert_eq!(
            parse("p & []q").unwrap().vocab_star(),
            set(&[
                lit("p", false, false),
                lit("p", false, true),
                lit("q", false, true)
            ])
        );
    }

    #[test]
    fn display_forms() {
        assert_eq!(lit("p", true, true).to_string(), "~p°");
        assert_eq!(lit("q", false, false).to_string(), "q");
    }
}
