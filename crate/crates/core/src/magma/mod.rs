//! Partial magmas and their embeddability into semigroups.
//!
//! A partial magma `(G, *)` embeds into a semigroup iff distinct elements of
//! `G` stay distinct in the semigroup presented by generators `G` and
//! relations `gh = g*h` for every defined product. Embeddability is only
//! semi-decidable, so [`embeddability`] runs a chain of bounded procedures
//! and answers with a three-valued [`EmbeddabilityVerdict`], each carrying a
//! certificate that [`replay_certificate`] checks without trusting the
//! procedure that produced it.

mod closure;
mod rewriting;
mod search;
mod verdict;

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use closure::{bounded_congruence_closure, ClosureOutcome};
pub use rewriting::{
    complete_rewriting, normal_form, Justification, RewriteOutcome, RewritingSystem, Rule, RuleStep,
};
pub use search::{finite_completion_search, fresh_labels, CayleyTable, SearchOutcome};
pub use verdict::{
    embeddability, replay_certificate, BoundsReached, EmbeddabilityVerdict, EmbeddingCertificate,
    Limits, ReplayError, Stage,
};

/// A word in the free semigroup on the magma's elements, as element indices.
pub type Word = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MagmaError {
    #[error("element label `{0}` appears more than once")]
    DuplicateLabel(String),
    #[error("element index {index} out of range for {size} elements")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("product {left} * {right} is already defined as {existing}")]
    Redefined {
        left: usize,
        right: usize,
        existing: usize,
    },
}

/// A finite set with a partially defined binary operation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartialMagma {
    elements: Vec<String>,
    /// Row-major `size x size`.
    table: Vec<Option<usize>>,
}

impl PartialMagma {
    pub fn new(elements: Vec<String>) -> Result<Self, MagmaError> {
        let mut seen = BTreeSet::new();
        for e in &elements {
            if !seen.insert(e.as_str()) {
                return Err(MagmaError::DuplicateLabel(e.clone()));
            }
        }
        let n = elements.len();
        Ok(PartialMagma {
            elements,
            table: vec![None; n * n],
        })
    }

    /// Elements `"0", "1", ...` with the given row-major cells.
    pub fn from_cells(size: usize, cells: &[Option<usize>]) -> Result<Self, MagmaError> {
        assert_eq!(cells.len(), size * size, "cell count");
        let mut m = PartialMagma::new((0..size).map(|i| i.to_string()).collect())?;
        for (idx, c) in cells.iter().enumerate() {
            if let Some(v) = c {
                m.define(idx / size, idx % size, *v)?;
            }
        }
        Ok(m)
    }

    /// Defines `left * right = result`. Redefining with the same value is a no-op.
    pub fn define(&mut self, left: usize, right: usize, result: usize) -> Result<(), MagmaError> {
        let n = self.size();
        for index in [left, right, result] {
            if index >= n {
                return Err(MagmaError::IndexOutOfRange { index, size: n });
            }
        }
        match self.table[left * n + right] {
            Some(existing) if existing != result => Err(MagmaError::Redefined {
                left,
                right,
                existing,
            }),
            _ => {
                self.table[left * n + right] = Some(result);
                Ok(())
            }
        }
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn label(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == label)
    }

    pub fn get(&self, left: usize, right: usize) -> Option<usize> {
        let n = self.size();
        if left >= n || right >= n {
            return None;
        }
        self.table[left * n + right]
    }

    /// Defined entries `(left, right, result)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let n = self.size();
        self.table
            .iter()
            .enumerate()
            .filter_map(move |(idx, c)| c.map(|v| (idx / n, idx % n, v)))
    }

    pub fn is_total(&self) -> bool {
        self.table.iter().all(Option::is_some)
    }

    pub fn format_word(&self, w: &[usize]) -> String {
        w.iter()
            .map(|&i| self.label(i))
            .collect::<Vec<_>>()
            .join("·")
    }
}

/// Shortlex: shorter words first, then lexicographic on element indices.
pub fn shortlex_cmp(a: &[usize], b: &[usize]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// A triple on which both bracketings are defined and differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssociativityDefect {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    /// `(a*b)*c`
    pub left: usize,
    /// `a*(b*c)`
    pub right: usize,
}

/// All defects, exhaustively over `|G|^3` triples in index order.
pub fn associativity_defect(m: &PartialMagma) -> Vec<AssociativityDefect> {
    let n = m.size();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let Some(ab) = m.get(a, b) else { continue };
            for c in 0..n {
                let left = m.get(ab, c);
                let right = m.get(b, c).and_then(|bc| m.get(a, bc));
                if let (Some(left), Some(right)) = (left, right) {
                    if left != right {
                        out.push(AssociativityDefect {
                            a,
                            b,
                            c,
                            left,
                            right,
                        });
                    }
                }
            }
        }
    }
    out
}

/// First pair `(a, b)` with `a*b` and `b*a` both defined and different.
pub fn commutative_compatible(m: &PartialMagma) -> Result<(), (usize, usize)> {
    let n = m.size();
    for a in 0..n {
        for b in a + 1..n {
            if let (Some(x), Some(y)) = (m.get(a, b), m.get(b, a)) {
                if x != y {
                    return Err((a, b));
                }
            }
        }
    }
    Ok(())
}

/// One use of a table entry `left * right = result` inside a word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    /// Word before the step.
    pub word: Word,
    pub position: usize,
    pub entry: (usize, usize, usize),
    pub direction: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `left right -> result` at `position`.
    Contract,
    /// `result -> left right` at `position`.
    Expand,
}

impl TraceStep {
    /// The word after the step, or `None` if the step does not apply.
    pub fn apply(&self) -> Option<Word> {
        let (l, r, res) = self.entry;
        let p = self.position;
        let w = &self.word;
        match self.direction {
            Direction::Contract => {
                if p + 1 >= w.len() || w[p] != l || w[p + 1] != r {
                    return None;
                }
                let mut out = w[..p].to_vec();
                out.push(res);
                out.extend_from_slice(&w[p + 2..]);
                Some(out)
            }
            Direction::Expand => {
                if p >= w.len() || w[p] != res {
                    return None;
                }
                let mut out = w[..p].to_vec();
                out.extend([l, r]);
                out.extend_from_slice(&w[p + 1..]);
                Some(out)
            }
        }
    }
}

/// A chain of single table-entry applications from generator `start` to
/// generator `end`, proving they are equal in every semigroup containing
/// the partial magma.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualityTrace {
    pub start: usize,
    pub end: usize,
    pub steps: Vec<TraceStep>,
}

impl EqualityTrace {
    /// The trace through `a b c` for an associativity defect.
    pub fn from_defect(m: &PartialMagma, d: &AssociativityDefect) -> Self {
        let ab = m.get(d.a, d.b).expect("defect entries defined");
        let bc = m.get(d.b, d.c).expect("defect entries defined");
        let step = |word: Word, position, entry, direction| TraceStep {
            word,
            position,
            entry,
            direction,
        };
        EqualityTrace {
            start: d.left,
            end: d.right,
            steps: vec![
                step(vec![d.left], 0, (ab, d.c, d.left), Direction::Expand),
                step(vec![ab, d.c], 0, (d.a, d.b, ab), Direction::Expand),
                step(vec![d.a, d.b, d.c], 1, (d.b, d.c, bc), Direction::Contract),
                step(vec![d.a, bc], 0, (d.a, bc, d.right), Direction::Contract),
            ],
        }
    }

    /// Every word visited, from `[start]` to `[end]`.
    pub fn words(&self) -> Vec<Word> {
        let mut out: Vec<Word> = self.steps.iter().map(|s| s.word.clone()).collect();
        out.push(vec![self.end]);
        out
    }
}

#[cfg(test)]
pub(crate) mod tests_support {
    use super::*;

    /// The grading set `{0, -1, 1}` with `0*0 = 0`, `0*(±1) = (±1)*0 = ∓1`.
    pub fn example_magma() -> PartialMagma {
        let mut m = PartialMagma::new(vec!["0".into(), "-1".into(), "1".into()]).unwrap();
        m.define(0, 0, 0).unwrap();
        m.define(0, 1, 2).unwrap();
        m.define(1, 0, 2).unwrap();
        m.define(0, 2, 1).unwrap();
        m.define(2, 0, 1).unwrap();
        m
    }

    pub fn cyclic(n: usize) -> PartialMagma {
        let cells: Vec<Option<usize>> = (0..n * n).map(|i| Some((i / n + i % n) % n)).collect();
        PartialMagma::from_cells(n, &cells).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::tests_support::*;
    use super::*;

    #[test]
    fn example_defect() {
        let m = example_magma();
        let defects = associativity_defect(&m);
        let first = defects[0];
        assert_eq!((first.a, first.b, first.c), (0, 0, 1));
        assert_eq!(m.label(first.left), "1");
        assert_eq!(m.label(first.right), "-1");
    }

    #[test]
    fn group_has_no_defect() {
        assert!(associativity_defect(&cyclic(3)).is_empty());
    }

    #[test]
    fn vacuous_defect() {
        let m = PartialMagma::from_cells(2, &[Some(1), None, None, None]).unwrap();
        assert!(associativity_defect(&m).is_empty());
    }

    #[test]
    fn commutativity() {
        assert!(commutative_compatible(&example_magma()).is_ok());
        let m = PartialMagma::from_cells(2, &[None, Some(0), Some(1), None]).unwrap();
        assert_eq!(commutative_compatible(&m), Err((0, 1)));
        assert!(commutative_compatible(&PartialMagma::new(vec!["x".into()]).unwrap()).is_ok());
    }

    #[test]
    fn defect_trace_words() {
        let m = example_magma();
        let d = associativity_defect(&m)[0];
        let t = EqualityTrace::from_defect(&m, &d);
        let words: Vec<String> = t.words().iter().map(|w| m.format_word(w)).collect();
        assert_eq!(words, vec!["1", "0·-1", "0·0·-1", "0·1", "-1"]);
        for s in &t.steps {
            assert!(s.apply().is_some());
        }
    }

    #[test]
    fn define_conflicts() {
        let mut m = PartialMagma::new(vec!["x".into(), "y".into()]).unwrap();
        m.define(0, 0, 1).unwrap();
        m.define(0, 0, 1).unwrap();
        assert!(matches!(
            m.define(0, 0, 0),
            Err(MagmaError::Redefined { .. })
        ));
        assert!(matches!(
            m.define(0, 2, 0),
            Err(MagmaError::IndexOutOfRange { .. })
        ));
        assert!(PartialMagma::new(vec!["x".into(), "x".into()]).is_err());
    }

    #[test]
    fn shortlex() {
        assert_eq!(shortlex_cmp(&[1], &[0, 0]), Ordering::Less);
        assert_eq!(shortlex_cmp(&[0, 1], &[1, 0]), Ordering::Less);
        assert_eq!(shortlex_cmp(&[2, 0], &[2, 0]), Ordering::Equal);
    }
}
