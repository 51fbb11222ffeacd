//! The embeddability pipeline and independent certificate replay.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{
    associativity_defect, bounded_congruence_closure, complete_rewriting, finite_completion_search,
    normal_form, shortlex_cmp, CayleyTable, EqualityTrace, Justification, PartialMagma,
    RewriteOutcome, RewritingSystem, Rule, SearchOutcome, Word,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub max_word_len: usize,
    pub max_rules: usize,
    pub max_extra_elements: usize,
    pub max_search_nodes: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_word_len: 6,
            max_rules: 64,
            max_extra_elements: 4,
            max_search_nodes: 200_000,
        }
    }
}

/// Which backend settled the question.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    AssociativityDefect,
    TotalTable,
    CongruenceClosure,
    Rewriting,
    FiniteSearch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EmbeddingCertificate {
    /// A finite semigroup extending the table.
    Cayley(CayleyTable),
    /// A terminating confluent presentation of the universal semigroup in
    /// which the generators have distinct normal forms.
    Rewriting(RewritingSystem),
}

/// How far each bounded backend got before giving up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReached {
    pub limits: Limits,
    pub closure_words: usize,
    pub rules_created: usize,
    pub longest_lhs: usize,
    pub search_nodes: usize,
    pub search_exhausted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum EmbeddabilityVerdict {
    Embeddable {
        stage: Stage,
        certificate: EmbeddingCertificate,
    },
    NotEmbeddable {
        stage: Stage,
        trace: EqualityTrace,
    },
    Unknown {
        bounds: BoundsReached,
    },
}

impl EmbeddabilityVerdict {
    pub fn status(&self) -> &'static str {
        match self {
            EmbeddabilityVerdict::Embeddable { .. } => "embeddable",
            EmbeddabilityVerdict::NotEmbeddable { .. } => "not_embeddable",
            EmbeddabilityVerdict::Unknown { .. } => "unknown",
        }
    }
}

/// Defect check, then the total-table shortcut, bounded congruence closure,
/// rewriting completion and finite search, stopping at the first backend
/// that decides.
pub fn embeddability(m: &PartialMagma, limits: &Limits) -> EmbeddabilityVerdict {
    if let Some(d) = associativity_defect(m).first() {
        return EmbeddabilityVerdict::NotEmbeddable {
            stage: Stage::AssociativityDefect,
            trace: EqualityTrace::from_defect(m, d),
        };
    }
    if let Some(table) = CayleyTable::from_total(m) {
        return EmbeddabilityVerdict::Embeddable {
            stage: Stage::TotalTable,
            certificate: EmbeddingCertificate::Cayley(table),
        };
    }

    let closure = bounded_congruence_closure(m, limits.max_word_len.max(1));
    if let Some(trace) = closure.identification {
        return EmbeddabilityVerdict::NotEmbeddable {
            stage: Stage::CongruenceClosure,
            trace,
        };
    }

    let (rules_created, longest_lhs) =
        match complete_rewriting(m, limits.max_rules, limits.max_word_len) {
            RewriteOutcome::Confluent(system) => {
                return EmbeddabilityVerdict::Embeddable {
                    stage: Stage::Rewriting,
                    certificate: EmbeddingCertificate::Rewriting(system),
                };
            }
            RewriteOutcome::GeneratorsIdentified {
                trace: Some(trace), ..
            } => {
                return EmbeddabilityVerdict::NotEmbeddable {
                    stage: Stage::Rewriting,
                    trace,
                };
            }
            RewriteOutcome::GeneratorsIdentified { system, .. } => (
                system.rules.len(),
                system.rules.iter().map(|r| r.lhs.len()).max().unwrap_or(0),
            ),
            RewriteOutcome::LimitExceeded {
                rules_created,
                longest_lhs,
            } => (rules_created, longest_lhs),
        };

    let (search_nodes, search_exhausted) =
        match finite_completion_search(m, limits.max_extra_elements, limits.max_search_nodes) {
            SearchOutcome::Found(table) => {
                return EmbeddabilityVerdict::Embeddable {
                    stage: Stage::FiniteSearch,
                    certificate: EmbeddingCertificate::Cayley(table),
                };
            }
            SearchOutcome::Exhausted { nodes } => (nodes, true),
            SearchOutcome::BudgetExceeded { nodes } => (nodes, false),
        };
    EmbeddabilityVerdict::Unknown {
        bounds: BoundsReached {
            limits: *limits,
            closure_words: closure.words_examined,
            rules_created,
            longest_lhs,
            search_nodes,
            search_exhausted,
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("trace joins an element to itself")]
    TrivialTrace,
    #[error("trace step {0} does not continue from the previous word")]
    TraceDiscontinuous(usize),
    #[error("trace step {0} cites a product that is not in the table")]
    TraceEntryMissing(usize),
    #[error("trace step {0} does not apply to its word")]
    TraceStepInapplicable(usize),
    #[error("trace does not end at its claimed endpoint")]
    TraceEndMismatch,
    #[error("element index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("Cayley table has {got} cells, expected {expected}")]
    CayleyShape { expected: usize, got: usize },
    #[error("Cayley table labels do not start with the magma's elements")]
    CayleyLabels,
    #[error("Cayley table is not associative at ({0}, {1}, {2})")]
    CayleyNotAssociative(usize, usize, usize),
    #[error("Cayley table changes the defined product {0} * {1}")]
    CayleyDropsEntry(usize, usize),
    #[error("rule {0} is not justified by the table and earlier rules")]
    RuleUnjustified(usize),
    #[error("active rule {0} is not shortlex decreasing")]
    RuleNotDecreasing(usize),
    #[error("active rule list is not a strictly increasing list of valid ids")]
    BadActiveList,
    #[error("critical pair of rules {0} and {1} does not join")]
    NotLocallyConfluent(usize, usize),
    #[error("defined product {0} * {1} is not a consequence of the rules")]
    EntryNotJoinable(usize, usize),
    #[error("generators {0} and {1} share a normal form")]
    GeneratorsCollide(usize, usize),
}

/// Checks a verdict's certificate against the table alone. Unknown verdicts
/// carry no claim and always pass.
pub fn replay_certificate(m: &PartialMagma, v: &EmbeddabilityVerdict) -> Result<(), ReplayError> {
    match v {
        EmbeddabilityVerdict::NotEmbeddable { trace, .. } => replay_trace(m, trace),
        EmbeddabilityVerdict::Embeddable {
            certificate: EmbeddingCertificate::Cayley(t),
            ..
        } => replay_cayley(m, t),
        EmbeddabilityVerdict::Embeddable {
            certificate: EmbeddingCertificate::Rewriting(sys),
            ..
        } => replay_rewriting(m, sys),
        EmbeddabilityVerdict::Unknown { .. } => Ok(()),
    }
}

fn replay_trace(m: &PartialMagma, trace: &EqualityTrace) -> Result<(), ReplayError> {
    let n = m.size();
    for &e in &[trace.start, trace.end] {
        if e >= n {
            return Err(ReplayError::IndexOutOfRange(e));
        }
    }
    if trace.start == trace.end {
        return Err(ReplayError::TrivialTrace);
    }
    let mut cur: Word = vec![trace.start];
    for (i, step) in trace.steps.iter().enumerate() {
        if step.word != cur {
            return Err(ReplayError::TraceDiscontinuous(i));
        }
        let (l, r, res) = step.entry;
        if l >= n || r >= n || m.get(l, r) != Some(res) {
            return Err(ReplayError::TraceEntryMissing(i));
        }
        cur = step.apply().ok_or(ReplayError::TraceStepInapplicable(i))?;
    }
    if cur != vec![trace.end] {
        return Err(ReplayError::TraceEndMismatch);
    }
    Ok(())
}

fn replay_cayley(m: &PartialMagma, t: &CayleyTable) -> Result<(), ReplayError> {
    let size = t.elements.len();
    if t.table.len() != size * size {
        return Err(ReplayError::CayleyShape {
            expected: size * size,
            got: t.table.len(),
        });
    }
    if size < m.size() || t.elements[..m.size()] != *m.elements() {
        return Err(ReplayError::CayleyLabels);
    }
    if let Some(&bad) = t.table.iter().find(|&&x| x >= size) {
        return Err(ReplayError::IndexOutOfRange(bad));
    }
    let op = |a: usize, b: usize| t.table[a * size + b];
    for a in 0..size {
        for b in 0..size {
            for c in 0..size {
                if op(op(a, b), c) != op(a, op(b, c)) {
                    return Err(ReplayError::CayleyNotAssociative(a, b, c));
                }
            }
        }
    }
    for (l, r, res) in m.entries() {
        if op(l, r) != res {
            return Err(ReplayError::CayleyDropsEntry(l, r));
        }
    }
    Ok(())
}

fn rewrite_at(rule: &Rule, w: &[usize], p: usize) -> Option<Word> {
    let end = p.checked_add(rule.lhs.len())?;
    if end > w.len() || w[p..end] != rule.lhs[..] {
        return None;
    }
    let mut out = w[..p].to_vec();
    out.extend_from_slice(&rule.rhs);
    out.extend_from_slice(&w[end..]);
    Some(out)
}

fn justified(m: &PartialMagma, rules: &[Rule], id: usize) -> bool {
    let rule = &rules[id];
    match &rule.justification {
        Justification::Table {
            left,
            right,
            result,
        } => {
            rule.lhs == [*left, *right]
                && rule.rhs == [*result]
                && m.get(*left, *right) == Some(*result)
        }
        Justification::Derived {
            from,
            left_path,
            right_path,
        } => {
            let run = |path: &[super::RuleStep]| -> Option<Word> {
                let mut cur = from.clone();
                for s in path {
                    if s.rule >= id {
                        return None;
                    }
                    cur = rewrite_at(&rules[s.rule], &cur, s.position)?;
                }
                Some(cur)
            };
            run(left_path).as_ref() == Some(&rule.lhs)
                && run(right_path).as_ref() == Some(&rule.rhs)
        }
    }
}

fn replay_rewriting(m: &PartialMagma, sys: &RewritingSystem) -> Result<(), ReplayError> {
    let n = m.size();
    for (id, rule) in sys.rules.iter().enumerate() {
        if rule.lhs.iter().chain(&rule.rhs).any(|&x| x >= n) {
            return Err(ReplayError::RuleUnjustified(id));
        }
        if !justified(m, &sys.rules, id) {
            return Err(ReplayError::RuleUnjustified(id));
        }
    }
    if sys.active.windows(2).any(|w| w[0] >= w[1])
        || sys.active.iter().any(|&i| i >= sys.rules.len())
    {
        return Err(ReplayError::BadActiveList);
    }
    for &i in &sys.active {
        if shortlex_cmp(&sys.rules[i].lhs, &sys.rules[i].rhs) != Ordering::Greater {
            return Err(ReplayError::RuleNotDecreasing(i));
        }
    }
    let nf = |w: &[usize]| normal_form(&sys.rules, &sys.active, w).0;

    for &i in &sys.active {
        for &j in &sys.active {
            let (l1, l2) = (&sys.rules[i].lhs, &sys.rules[j].lhs);
            let mut words: Vec<(Word, usize)> = Vec::new();
            for k in 1..l1.len().min(l2.len()) {
                if l1[l1.len() - k..] == l2[..k] {
                    let mut w = l1.clone();
                    w.extend_from_slice(&l2[k..]);
                    words.push((w, l1.len() - k));
                }
            }
            if i != j && l2.len() <= l1.len() {
                for p in 0..=l1.len() - l2.len() {
                    if l1[p..p + l2.len()] == l2[..] {
                        words.push((l1.clone(), p));
                    }
                }
            }
            for (w, p) in words {
                let a = rewrite_at(&sys.rules[i], &w, 0).expect("overlap");
                let b = rewrite_at(&sys.rules[j], &w, p).expect("overlap");
                if nf(&a) != nf(&b) {
                    return Err(ReplayError::NotLocallyConfluent(i, j));
                }
            }
        }
    }
    for (l, r, res) in m.entries() {
        if nf(&[l, r]) != nf(&[res]) {
            return Err(ReplayError::EntryNotJoinable(l, r));
        }
    }
    let mut seen: Vec<(Word, usize)> = Vec::new();
    let mut forms = BTreeSet::new();
    for g in 0..n {
        let f = nf(&[g]);
        if !forms.insert(f.clone()) {
            let other = seen
                .iter()
                .find(|(w, _)| *w == f)
                .map(|(_, h)| *h)
                .unwrap_or(g);
            return Err(ReplayError::GeneratorsCollide(other, g));
        }
        seen.push((f, g));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::tests_support::*;
    use super::super::{Direction, TraceStep};
    use super::*;

    #[test]
    fn example_magma_not_embeddable_via_defect() {
        let m = example_magma();
        let v = embeddability(&m, &Limits::default());
        match &v {
            EmbeddabilityVerdict::NotEmbeddable { stage, trace } => {
                assert_eq!(*stage, Stage::AssociativityDefect);
                assert!(trace.words().contains(&vec![0, 0, 1]));
            }
            other => panic!("unexpected {other:?}"),
        }
        replay_certificate(&m, &v).unwrap();
    }

    #[test]
    fn cyclic_three_is_its_own_certificate() {
        let m = cyclic(3);
        let v = embeddability(&m, &Limits::default());
        assert_eq!(
            v,
            EmbeddabilityVerdict::Embeddable {
                stage: Stage::TotalTable,
                certificate: EmbeddingCertificate::Cayley(CayleyTable::from_total(&m).unwrap()),
            }
        );
        replay_certificate(&m, &v).unwrap();
    }

    #[test]
    fn empty_table_uses_free_semigroup() {
        let m = PartialMagma::new(vec!["x".into(), "y".into()]).unwrap();
        let v = embeddability(&m, &Limits::default());
        assert!(matches!(
            v,
            EmbeddabilityVerdict::Embeddable {
                stage: Stage::Rewriting,
                ..
            }
        ));
        replay_certificate(&m, &v).unwrap();
    }

    #[test]
    fn square_only_is_embeddable() {
        let m = PartialMagma::from_cells(2, &[Some(1), None, None, None]).unwrap();
        let v = embeddability(&m, &Limits::default());
        assert_eq!(v.status(), "embeddable");
        replay_certificate(&m, &v).unwrap();
    }

    #[test]
    fn tiny_limits_give_unknown() {
        // x*x = y on three elements: completion needs xy = yx, search must branch
        let mut cells = vec![None; 9];
        cells[0] = Some(1);
        let m = PartialMagma::from_cells(3, &cells).unwrap();
        let limits = Limits {
            max_word_len: 2,
            max_rules: 1,
            max_extra_elements: 0,
            max_search_nodes: 1,
        };
        let v = embeddability(&m, &limits);
        assert_eq!(v.status(), "unknown");
        replay_certificate(&m, &v).unwrap();
    }

    #[test]
    fn broken_cayley_table_rejected() {
        let m = cyclic(2);
        let mut t = CayleyTable::from_total(&m).unwrap();
        t.table[3] = 1;
        let v = EmbeddabilityVerdict::Embeddable {
            stage: Stage::FiniteSearch,
            certificate: EmbeddingCertificate::Cayley(t.clone()),
        };
        assert!(replay_certificate(&m, &v).is_err());
        // a table that is associative but forgets an entry
        let m2 = PartialMagma::from_cells(2, &[Some(1), None, None, None]).unwrap();
        let zero = CayleyTable {
            elements: m2.elements().to_vec(),
            table: vec![0, 0, 0, 0],
        };
        let v = EmbeddabilityVerdict::Embeddable {
            stage: Stage::FiniteSearch,
            certificate: EmbeddingCertificate::Cayley(zero),
        };
        assert_eq!(
            replay_certificate(&m2, &v),
            Err(ReplayError::CayleyDropsEntry(0, 0))
        );
    }

    #[test]
    fn trace_with_missing_entry_rejected() {
        let m = example_magma();
        let trace = EqualityTrace {
            start: 1,
            end: 2,
            steps: vec![TraceStep {
                word: vec![1],
                position: 0,
                entry: (1, 1, 1),
                direction: Direction::Expand,
            }],
        };
        let v = EmbeddabilityVerdict::NotEmbeddable {
            stage: Stage::CongruenceClosure,
            trace,
        };
        assert_eq!(
            replay_certificate(&m, &v),
            Err(ReplayError::TraceEntryMissing(0))
        );
    }

    #[test]
    fn tampered_rewriting_rejected() {
        let m = PartialMagma::new(vec!["x".into(), "y".into()]).unwrap();
        let sys = RewritingSystem {
            rules: vec![Rule {
                lhs: vec![0, 1],
                rhs: vec![0],
                justification: Justification::Table {
                    left: 0,
                    right: 1,
                    result: 0,
                },
            }],
            active: vec![0],
        };
        let v = EmbeddabilityVerdict::Embeddable {
            stage: Stage::Rewriting,
            certificate: EmbeddingCertificate::Rewriting(sys),
        };
        assert_eq!(
            replay_certificate(&m, &v),
            Err(ReplayError::RuleUnjustified(0))
        );
    }
}
