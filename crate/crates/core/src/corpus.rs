//! Deterministic pseudo-random NNF formulas.
//!
//! Generation uses ChaCha8 seeded from a 64-bit seed and only draws `u32`
//! ranges, so a given [`CorpusSpec`] yields the same corpus on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::formula::Formula;

const ATOM_NAMES: [&str; 8] = ["p", "q", "r", "s", "t", "u", "v", "w"];

/// Name of the `i`-th corpus atom: `p, q, ..., w, p8, p9, ...`.
pub fn atom_name(i: usize) -> String {
    ATOM_NAMES
        .get(i)
        .map_or_else(|| format!("p{i}"), |s| s.to_string())
}

/// Relative weights of the node kinds drawn by the generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectiveWeights {
    pub literal: u32,
    pub constant: u32,
    pub and: u32,
    pub or: u32,
    pub boxed: u32,
    pub diamond: u32,
}

impl Default for ConnectiveWeights {
    fn default() -> Self {
        ConnectiveWeights {
            literal: 4,
            constant: 1,
            and: 3,
            or: 3,
            boxed: 2,
            diamond: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub seed: u64,
    pub count: usize,
    pub max_atoms: usize,
    pub max_depth: usize,
    pub max_modal_depth: usize,
    #[serde(default)]
    pub weights: ConnectiveWeights,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            seed: 42,
            count: 500,
            max_atoms: 2,
            max_depth: 3,
            max_modal_depth: 2,
            weights: ConnectiveWeights::default(),
        }
    }
}

pub fn generate_corpus(spec: &CorpusSpec) -> Vec<Formula> {
    assert!(spec.max_atoms >= 1, "max_atoms must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut gen = Generator {
        rng: &mut rng,
        spec,
    };
    (0..spec.count)
        .map(|_| gen.formula(spec.max_depth, spec.max_modal_depth))
        .collect()
}

/// `count` index pairs into a corpus of length `len`, drawn with replacement.
pub fn sample_pairs(len: usize, count: usize, seed: u64) -> Vec<(usize, usize)> {
    assert!(len > 0, "cannot sample from an empty corpus");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = len as u32;
    (0..count)
        .map(|_| {
            (
                rng.gen_range(0..len) as usize,
                rng.gen_range(0..len) as usize,
            )
        })
        .collect()
}

struct Generator<'a> {
    rng: &'a mut ChaCha8Rng,
    spec: &'a CorpusSpec,
}

#[derive(Clone, Copy)]
enum Kind {
    Literal,
    Constant,
    And,
    Or,
    Box,
    Diamond,
}

impl Generator<'_> {
    fn pick(&mut self, choices: &[(Kind, u32)]) -> Kind {
        let total: u32 = choices.iter().map(|(_, w)| w).sum();
        if total == 0 {
            return Kind::Literal;
        }
        let mut roll = self.rng.gen_range(0..total);
        for &(k, w) in choices {
            if roll < w {
                return k;
            }
            roll -= w;
        }
        unreachable!()
    }

    fn formula(&mut self, depth: usize, modal: usize) -> Formula {
        let w = &self.spec.weights;
        let mut choices = vec![(Kind::Literal, w.literal), (Kind::Constant, w.constant)];
        if depth > 0 {
            choices.push((Kind::And, w.and));
            choices.push((Kind::Or, w.or));
            if modal > 0 {
                choices.push((Kind::Box, w.boxed));
                choices.push((Kind::Diamond, w.diamond));
            }
        }
        match self.pick(&choices) {
            Kind::Literal => {
                let name = atom_name(self.rng.gen_range(0..self.spec.max_atoms as u32) as usize);
                if self.rng.gen_range(0..2u32) == 0 {
                    Formula::atom(&name)
                } else {
                    Formula::neg_atom(&name)
                }
            }
            Kind::Constant => {
                if self.rng.gen_range(0..2u32) == 0 {
                    Formula::Top
                } else {
                    Formula::Bottom
                }
            }
            Kind::And => {
                let a = self.formula(depth - 1, modal);
                let b = self.formula(depth - 1, modal);
                Formula::and(a, b)
            }
            Kind::Or => {
                let a = self.formula(depth - 1, modal);
                let b = self.formula(depth - 1, modal);
                Formula::or(a, b)
            }
            Kind::Box => Formula::boxed(self.formula(depth - 1, modal - 1)),
            Kind::Diamond => Formula::diamond(self.formula(depth - 1, modal - 1)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, render};

    #[test]
    fn deterministic() {
        let spec = CorpusSpec::default();
        assert_eq!(generate_corpus(&spec), generate_corpus(&spec));
        let other = CorpusSpec {
            seed: 43,
            ..spec.clone()
        };
        assert_ne!(generate_corpus(&spec), generate_corpus(&other));
    }

    #[test]
    fn respects_bounds() {
        let spec = CorpusSpec {
            seed: 3,
            count: 300,
            max_atoms: 3,
            max_depth: 4,
            max_modal_depth: 1,
            ..CorpusSpec::default()
        };
        for f in generate_corpus(&spec) {
            assert!(f.depth() <= 4);
            assert!(f.modal_depth() <= 1);
            assert!(f.atoms().len() <= 3);
            assert!(f.atoms().iter().all(|a| ["p", "q", "r"].contains(&&**a)));
        }
    }

    #[test]
    fn render_parse_round_trip() {
        let spec = CorpusSpec {
            seed: 11,
            count: 500,
            max_atoms: 3,
            max_depth: 5,
            max_modal_depth: 3,
            ..CorpusSpec::default()
        };
        for f in generate_corpus(&spec) {
            assert_eq!(parse(&render(&f)).unwrap(), f);
        }
    }

    #[test]
    fn stable_prefix() {
        // Pins the generator output so accidental changes to the draw order
        // show up as test failures.
        let spec = CorpusSpec {
            seed: 1,
            count: 3,
            ..CorpusSpec::default()
        };
        let rendered: Vec<String> = generate_corpus(&spec).iter().map(render).collect();
        assert_eq!(rendered, ["<>~p & (~q & ~p) | q", "<>(~p & T & p)", "<>p"]);
    }

    #[test]
    fn mixes_valid_and_invalid_formulas() {
        let spec = CorpusSpec {
            seed: 1,
            count: 100,
            ..CorpusSpec::default()
        };
        let refuted = generate_corpus(&spec)
            .iter()
            .filter(|f| crate::oracle::find_countermodel(f, 3).is_some())
            .count();
        assert!(refuted > 0 && refuted < 100, "{refuted} of 100 refuted");
    }
}
