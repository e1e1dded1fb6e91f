//! Modal formulas in negation normal form.
//!
//! Negation is only ever applied to atoms. Compound negations written in the
//! concrete syntax are pushed inward while parsing (see [`parse`]), and
//! [`Formula::negate`] computes the dual formula directly.
//!
//! Concrete syntax (ASCII):
//!
//! ```text
//! iff     ::= imp ("<->" imp)*          left-associative
//! imp     ::= or ("->" imp)?            right-associative
//! or      ::= and ("|" and)*
//! and     ::= unary ("&" unary)*
//! unary   ::= "~" unary | "[]" unary | "<>" unary | atom
//! atom    ::= "T" | "F" | ident | "(" iff ")"
//! ident   ::= [a-z][a-zA-Z0-9_]*
//! ```

mod parse;
mod vocab;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use parse::{parse, parse_sequent, ParseError};
pub use vocab::{vocab_of, MarkedLiteral, Vocabulary, VocabularySet};

/// Atom names are shared, immutable strings.
pub type Name = Arc<str>;

/// A modal formula in negation normal form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Name),
    NegAtom(Name),
    Top,
    Bottom,
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Box(Arc<Formula>),
    Diamond(Arc<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.into())
    }

    pub fn neg_atom(name: &str) -> Formula {
        Formula::NegAtom(name.into())
    }

    pub fn and(left: Formula, right: Formula) -> Formula {
        Formula::And(Arc::new(left), Arc::new(right))
    }

    pub fn or(left: Formula, right: Formula) -> Formula {
        Formula::Or(Arc::new(left), Arc::new(right))
    }

    pub fn boxed(body: Formula) -> Formula {
        Formula::Box(Arc::new(body))
    }

    pub fn diamond(body: Formula) -> Formula {
        Formula::Diamond(Arc::new(body))
    }

    /// `a -> b`, i.e. `negate(a) | b`.
    pub fn implies(a: &Formula, b: Formula) -> Formula {
        Formula::or(a.negate(), b)
    }

    /// `(a -> b) & (b -> a)`.
    pub fn iff(a: &Formula, b: &Formula) -> Formula {
        Formula::and(
            Formula::implies(a, b.clone()),
            Formula::implies(b, a.clone()),
        )
    }

    /// `a & []a`.
    pub fn boxdot(a: Formula) -> Formula {
        Formula::and(a.clone(), Formula::boxed(a))
    }

    /// The dual formula, obtained by De Morgan and modal duality.
    pub fn negate(&self) -> Formula {
        match self {
            Formula::Atom(n) => Formula::NegAtom(n.clone()),
            Formula::NegAtom(n) => Formula::Atom(n.clone()),
            Formula::Top => Formula::Bottom,
            Formula::Bottom => Formula::Top,
            Formula::And(a, b) => Formula::or(a.negate(), b.negate()),
            Formula::Or(a, b) => Formula::and(a.negate(), b.negate()),
            Formula::Box(a) => Formula::diamond(a.negate()),
            Formula::Diamond(a) => Formula::boxed(a.negate()),
        }
    }

    /// Number of syntax tree nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::NegAtom(_) | Formula::Top | Formula::Bottom => 1,
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.size() + b.size(),
            Formula::Box(a) | Formula::Diamond(a) => 1 + a.size(),
        }
    }

    /// Height of the syntax tree; literals and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::NegAtom(_) | Formula::Top | Formula::Bottom => 0,
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.depth().max(b.depth()),
            Formula::Box(a) | Formula::Diamond(a) => 1 + a.depth(),
        }
    }

    /// Maximal nesting of modal operators.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::NegAtom(_) | Formula::Top | Formula::Bottom => 0,
            Formula::And(a, b) | Formula::Or(a, b) => a.modal_depth().max(b.modal_depth()),
            Formula::Box(a) | Formula::Diamond(a) => 1 + a.modal_depth(),
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Formula::Atom(_) | Formula::NegAtom(_))
    }

    pub fn is_diamond(&self) -> bool {
        matches!(self, Formula::Diamond(_))
    }

    /// Distinct atom names, sorted.
    pub fn atoms(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Name>) {
        match self {
            Formula::Atom(n) | Formula::NegAtom(n) => {
                out.insert(n.clone());
            }
            Formula::Top | Formula::Bottom => {}
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Formula::Box(a) | Formula::Diamond(a) => a.collect_atoms(out),
        }
    }

    /// Whether `name` occurs as an atom or complemented atom.
    pub fn mentions(&self, name: &str) -> bool {
        match self {
            Formula::Atom(n) | Formula::NegAtom(n) => &**n == name,
            Formula::Top | Formula::Bottom => false,
            Formula::And(a, b) | Formula::Or(a, b) => a.mentions(name) || b.mentions(name),
            Formula::Box(a) | Formula::Diamond(a) => a.mentions(name),
        }
    }

    /// Number of occurrences of `name` and its complement.
    pub fn occurrences(&self, name: &str) -> usize {
        match self {
            Formula::Atom(n) | Formula::NegAtom(n) => usize::from(&**n == name),
            Formula::Top | Formula::Bottom => 0,
            Formula::And(a, b) | Formula::Or(a, b) => a.occurrences(name) + b.occurrences(name),
            Formula::Box(a) | Formula::Diamond(a) => a.occurrences(name),
        }
    }

    /// Replaces every occurrence of atom `name` by `with`, and every
    /// occurrence of its complement by `negate(with)`.
    pub fn substitute(&self, name: &str, with: &Formula) -> Formula {
        let neg = with.negate();
        self.substitute_with(name, with, &neg)
    }

    fn substitute_with(&self, name: &str, pos: &Formula, neg: &Formula) -> Formula {
        if !self.mentions(name) {
            return self.clone();
        }
        match self {
            Formula::Atom(_) => pos.clone(),
            Formula::NegAtom(_) => neg.clone(),
            Formula::Top | Formula::Bottom => self.clone(),
            Formula::And(a, b) => Formula::and(
                a.substitute_with(name, pos, neg),
                b.substitute_with(name, pos, neg),
            ),
            Formula::Or(a, b) => Formula::or(
                a.substitute_with(name, pos, neg),
                b.substitute_with(name, pos, neg),
            ),
            Formula::Box(a) => Formula::boxed(a.substitute_with(name, pos, neg)),
            Formula::Diamond(a) => Formula::diamond(a.substitute_with(name, pos, neg)),
        }
    }

    /// Constant folding: absorbs `T` and `F` through the Boolean connectives,
    /// and rewrites `[]T` to `T` and `<>F` to `F`.
    pub fn simplify(&self) -> Formula {
        match self {
            Formula::And(a, b) => match (a.simplify(), b.simplify()) {
                (Formula::Bottom, _) | (_, Formula::Bottom) => Formula::Bottom,
                (Formula::Top, x) | (x, Formula::Top) => x,
                (x, y) => Formula::and(x, y),
            },
            Formula::Or(a, b) => match (a.simplify(), b.simplify()) {
                (Formula::Top, _) | (_, Formula::Top) => Formula::Top,
                (Formula::Bottom, x) | (x, Formula::Bottom) => x,
                (x, y) => Formula::or(x, y),
            },
            Formula::Box(a) => match a.simplify() {
                Formula::Top => Formula::Top,
                x => Formula::boxed(x),
            },
            Formula::Diamond(a) => match a.simplify() {
                Formula::Bottom => Formula::Bottom,
                x => Formula::diamond(x),
            },
            _ => self.clone(),
        }
    }

    /// Constant folding as in [`Formula::simplify`], plus clean-up of
    /// `&`/`|` chains: repeated operands are dropped, and a chain holding
    /// both `A` and `~A` collapses to `F` (for `&`) or `T` (for `|`). Chains
    /// are re-associated to the left keeping first occurrences in order.
    /// The result is equivalent and never uses a literal the input lacks.
    pub fn compact(&self) -> Formula {
        match self {
            Formula::And(..) | Formula::Or(..) => {
                let conj = matches!(self, Formula::And(..));
                let (unit, zero) = if conj {
                    (Formula::Top, Formula::Bottom)
                } else {
                    (Formula::Bottom, Formula::Top)
                };
                let mut raw = Vec::new();
                self.chain_operands(conj, &mut raw);
                let mut ops: Vec<Formula> = Vec::new();
                let mut seen = std::collections::HashSet::new();
                for op in raw {
                    let c = op.compact();
                    let mut parts = Vec::new();
                    c.chain_operands(conj, &mut parts);
                    for part in parts {
                        if *part == zero {
                            return zero;
                        }
                        if *part != unit && seen.insert(part.clone()) {
                            ops.push(part.clone());
                        }
                    }
                }
                if ops.iter().any(|o| seen.contains(&o.negate())) {
                    return zero;
                }
                let mut it = ops.into_iter();
                let Some(first) = it.next() else { return unit };
                it.fold(first, |acc, o| {
                    if conj {
                        Formula::and(acc, o)
                    } else {
                        Formula::or(acc, o)
                    }
                })
            }
            Formula::Box(a) => match a.compact() {
                Formula::Top => Formula::Top,
                x => Formula::boxed(x),
            },
            Formula::Diamond(a) => match a.compact() {
                Formula::Bottom => Formula::Bottom,
                x => Formula::diamond(x),
            },
            _ => self.clone(),
        }
    }

    fn chain_operands<'a>(&'a self, conj: bool, out: &mut Vec<&'a Formula>) {
        match (self, conj) {
            (Formula::And(a, b), true) | (Formula::Or(a, b), false) => {
                a.chain_operands(conj, out);
                b.chain_operands(conj, out);
            }
            _ => out.push(self),
        }
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::And(a, b) | Formula::Or(a, b) => vec![&**a, &**b],
            Formula::Box(a) | Formula::Diamond(a) => vec![&**a],
            _ => Vec::new(),
        }
    }

    fn variant_rank(&self) -> u8 {
        match self {
            Formula::Top => 0,
            Formula::Bottom => 1,
            Formula::Atom(_) => 2,
            Formula::NegAtom(_) => 3,
            Formula::Box(_) => 4,
            Formula::Diamond(_) => 5,
            Formula::And(_, _) => 6,
            Formula::Or(_, _) => 7,
        }
    }

    fn structural_cmp(&self, other: &Formula) -> Ordering {
        match (self, other) {
            (Formula::Atom(a), Formula::Atom(b)) | (Formula::NegAtom(a), Formula::NegAtom(b)) => {
                a.cmp(b)
            }
            (Formula::And(a1, b1), Formula::And(a2, b2))
            | (Formula::Or(a1, b1), Formula::Or(a2, b2)) => a1.cmp(a2).then_with(|| b1.cmp(b2)),
            (Formula::Box(a), Formula::Box(b)) | (Formula::Diamond(a), Formula::Diamond(b)) => {
                a.cmp(b)
            }
            _ => self.variant_rank().cmp(&other.variant_rank()),
        }
    }
}

/// Canonical total order: by size first, then structurally.
impl Ord for Formula {
    fn cmp(&self, other: &Self) -> Ordering {
        if std::ptr::eq(self, other) {
            return Ordering::Equal;
        }
        self.size()
            .cmp(&other.size())
            .then_with(|| self.structural_cmp(other))
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

const PREC_OR: u8 = 1;
const PREC_AND: u8 = 2;
const PREC_UNARY: u8 = 3;

fn write_prec(f: &Formula, out: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
    match f {
        Formula::Atom(n) => write!(out, "{n}"),
        Formula::NegAtom(n) => write!(out, "~{n}"),
        Formula::Top => write!(out, "T"),
        Formula::Bottom => write!(out, "F"),
        Formula::Box(a) => {
            write!(out, "[]")?;
            write_prec(a, out, PREC_UNARY)
        }
        Formula::Diamond(a) => {
            write!(out, "<>")?;
            write_prec(a, out, PREC_UNARY)
        }
        Formula::And(a, b) => write_binary(out, ctx, PREC_AND, " & ", a, b),
        Formula::Or(a, b) => write_binary(out, ctx, PREC_OR, " | ", a, b),
    }
}

fn write_binary(
    out: &mut fmt::Formatter<'_>,
    ctx: u8,
    prec: u8,
    op: &str,
    left: &Formula,
    right: &Formula,
) -> fmt::Result {
    let paren = ctx > prec;
    if paren {
        write!(out, "(")?;
    }
    write_prec(left, out, prec)?;
    write!(out, "{op}")?;
    write_prec(right, out, prec + 1)?;
    if paren {
        write!(out, ")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_prec(self, f, 0)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

/// Canonical ASCII rendering with minimal parentheses.
pub fn render(f: &Formula) -> String {
    f.to_string()
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

/// The smallest subformula-closed superset of `fs`.
pub fn closure<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    let mut stack: Vec<&Formula> = fs.into_iter().collect();
    while let Some(f) = stack.pop() {
        if out.insert(f.clone()) {
            stack.extend(f.children());
        }
    }
    out
}
