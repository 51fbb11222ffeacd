//! Knuth-Bendix completion of the presentation `<G | gh = g*h>` under the
//! shortlex order.
//!
//! Every rule ever created is kept in a log together with a justification:
//! either it is a table entry, or it was obtained by rewriting one word two
//! ways with earlier rules. Justifications let a replayer confirm each rule
//! is a consequence of the table, and let an identification of two
//! generators be unfolded into a plain [`EqualityTrace`].

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{shortlex_cmp, Direction, EqualityTrace, PartialMagma, TraceStep, Word};

/// Application of rule `rule` (left to right) at `position`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleStep {
    pub rule: usize,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Justification {
    /// The defining relation `left right -> result`.
    Table {
        left: usize,
        right: usize,
        result: usize,
    },
    /// `lhs` and `rhs` are obtained from `from` by the two step sequences,
    /// each step using an earlier rule.
    Derived {
        from: Word,
        left_path: Vec<RuleStep>,
        right_path: Vec<RuleStep>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: Word,
    pub justification: Justification,
}

/// The rule log plus the ids of the rules currently in force.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RewritingSystem {
    pub rules: Vec<Rule>,
    pub active: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RewriteOutcome {
    /// Terminating and confluent; generator normal forms are pairwise
    /// distinct.
    Confluent(RewritingSystem),
    /// A rule `g -> h` between generators appeared; `trace` unfolds it.
    GeneratorsIdentified {
        system: RewritingSystem,
        rule: usize,
        trace: Option<EqualityTrace>,
    },
    LimitExceeded {
        rules_created: usize,
        longest_lhs: usize,
    },
}

/// Applies `step` to `w`, if the rule's left side occurs there.
pub fn apply_rule(rules: &[Rule], w: &[usize], step: RuleStep) -> Option<Word> {
    let rule = rules.get(step.rule)?;
    let end = step.position.checked_add(rule.lhs.len())?;
    if end > w.len() || w[step.position..end] != rule.lhs[..] {
        return None;
    }
    let mut out = w[..step.position].to_vec();
    out.extend_from_slice(&rule.rhs);
    out.extend_from_slice(&w[end..]);
    Some(out)
}

fn occurs_at(haystack: &[usize], needle: &[usize]) -> Option<usize> {
    if needle.len() > haystack.len() {
        return None;
    }
    (0..=haystack.len() - needle.len()).find(|&p| haystack[p..p + needle.len()] == *needle)
}

/// Leftmost-innermost normal form under the rules listed in `active`
/// (leftmost position first, lowest rule id at a position).
pub fn normal_form(rules: &[Rule], active: &[usize], w: &[usize]) -> (Word, Vec<RuleStep>) {
    let mut cur = w.to_vec();
    let mut steps = Vec::new();
    'outer: loop {
        for p in 0..cur.len() {
            for &id in active {
                let step = RuleStep {
                    rule: id,
                    position: p,
                };
                if let Some(next) = apply_rule(rules, &cur, step) {
                    cur = next;
                    steps.push(step);
                    continue 'outer;
                }
            }
        }
        return (cur, steps);
    }
}

struct PendingEquation {
    from: Word,
    left: Word,
    right: Word,
    left_path: Vec<RuleStep>,
    right_path: Vec<RuleStep>,
}

enum Stop {
    Identified(usize),
    Limit,
}

struct Completion {
    rules: Vec<Rule>,
    active: BTreeSet<usize>,
    pairs: VecDeque<(usize, usize)>,
    pending: VecDeque<PendingEquation>,
    max_rules: usize,
    max_word_len: usize,
    longest_lhs: usize,
}

impl Completion {
    fn active_ids(&self) -> Vec<usize> {
        self.active.iter().copied().collect()
    }

    fn push_rule(&mut self, rule: Rule) -> Result<usize, Stop> {
        self.longest_lhs = self.longest_lhs.max(rule.lhs.len());
        if rule.lhs.len() > self.max_word_len || self.rules.len() >= self.max_rules {
            return Err(Stop::Limit);
        }
        let id = self.rules.len();
        let unit = rule.lhs.len() == 1;
        self.rules.push(rule);
        self.active.insert(id);
        for other in self.active_ids() {
            self.pairs.push_back((id, other));
            if other != id {
                self.pairs.push_back((other, id));
            }
        }
        if unit {
            return Err(Stop::Identified(id));
        }
        Ok(id)
    }

    fn critical_pairs(&self, i: usize, j: usize) -> Vec<PendingEquation> {
        let (l1, l2) = (&self.rules[i].lhs, &self.rules[j].lhs);
        let mut out = Vec::new();
        let mut push = |from: Word, a: RuleStep, b: RuleStep| {
            let left = apply_rule(&self.rules, &from, a).expect("overlap matches");
            let right = apply_rule(&self.rules, &from, b).expect("overlap matches");
            out.push(PendingEquation {
                from,
                left,
                right,
                left_path: vec![a],
                right_path: vec![b],
            });
        };
        for k in 1..l1.len().min(l2.len()) {
            if l1[l1.len() - k..] == l2[..k] {
                let mut w = l1.clone();
                w.extend_from_slice(&l2[k..]);
                push(
                    w,
                    RuleStep {
                        rule: i,
                        position: 0,
                    },
                    RuleStep {
                        rule: j,
                        position: l1.len() - k,
                    },
                );
            }
        }
        if i != j {
            if let Some(p) = occurs_at(l1, l2) {
                push(
                    l1.clone(),
                    RuleStep {
                        rule: i,
                        position: 0,
                    },
                    RuleStep {
                        rule: j,
                        position: p,
                    },
                );
            }
        }
        out
    }

    fn process(&mut self, eq: PendingEquation) -> Result<(), Stop> {
        let active = self.active_ids();
        let (s, s_steps) = normal_form(&self.rules, &active, &eq.left);
        let (t, t_steps) = normal_form(&self.rules, &active, &eq.right);
        if s == t {
            return Ok(());
        }
        let mut left_path = eq.left_path;
        left_path.extend(s_steps);
        let mut right_path = eq.right_path;
        right_path.extend(t_steps);
        let rule = match shortlex_cmp(&s, &t) {
            Ordering::Greater => Rule {
                lhs: s,
                rhs: t,
                justification: Justification::Derived {
                    from: eq.from,
                    left_path,
                    right_path,
                },
            },
            _ => Rule {
                lhs: t,
                rhs: s,
                justification: Justification::Derived {
                    from: eq.from,
                    left_path: right_path,
                    right_path: left_path,
                },
            },
        };
        let id = self.push_rule(rule)?;
        self.interreduce(id)
    }

    /// Retires rules whose left side contains the new rule's left side and
    /// renormalizes right sides.
    fn interreduce(&mut self, new_id: usize) -> Result<(), Stop> {
        let new_lhs = self.rules[new_id].lhs.clone();
        for r in self.active_ids() {
            if r == new_id || !self.active.contains(&r) {
                continue;
            }
            let (lhs, rhs) = (self.rules[r].lhs.clone(), self.rules[r].rhs.clone());
            if occurs_at(&lhs, &new_lhs).is_some() {
                self.active.remove(&r);
                self.pending.push_back(PendingEquation {
                    from: lhs.clone(),
                    left: lhs,
                    right: rhs,
                    left_path: vec![],
                    right_path: vec![RuleStep {
                        rule: r,
                        position: 0,
                    }],
                });
                continue;
            }
            let active = self.active_ids();
            let (nf, steps) = normal_form(&self.rules, &active, &rhs);
            if !steps.is_empty() {
                self.active.remove(&r);
                let mut right_path = vec![RuleStep {
                    rule: r,
                    position: 0,
                }];
                right_path.extend(steps);
                self.push_rule(Rule {
                    lhs: lhs.clone(),
                    rhs: nf,
                    justification: Justification::Derived {
                        from: lhs,
                        left_path: vec![],
                        right_path,
                    },
                })?;
            }
        }
        Ok(())
    }

    fn run(&mut self) -> Result<(), Stop> {
        loop {
            while let Some(eq) = self.pending.pop_front() {
                self.process(eq)?;
            }
            if let Some((i, j)) = self.pairs.pop_front() {
                if self.active.contains(&i) && self.active.contains(&j) {
                    self.pending.extend(self.critical_pairs(i, j));
                }
                continue;
            }
            // final sweep: confirm every critical pair of the active system joins
            let active = self.active_ids();
            for &i in &active {
                for &j in &active {
                    for eq in self.critical_pairs(i, j) {
                        let (s, _) = normal_form(&self.rules, &active, &eq.left);
                        let (t, _) = normal_form(&self.rules, &active, &eq.right);
                        if s != t {
                            self.pending.push_back(eq);
                        }
                    }
                }
            }
            if self.pending.is_empty() {
                return Ok(());
            }
        }
    }

    fn system(&self) -> RewritingSystem {
        RewritingSystem {
            rules: self.rules.clone(),
            active: self.active_ids(),
        }
    }
}

/// Cap on the length of an unfolded identification trace.
const MAX_TRACE_STEPS: usize = 100_000;

/// Runs completion from the rules `g h -> g*h`. `max_rules` caps the number
/// of rules ever created, `max_word_len` the length of any left side.
pub fn complete_rewriting(
    m: &PartialMagma,
    max_rules: usize,
    max_word_len: usize,
) -> RewriteOutcome {
    let mut c = Completion {
        rules: Vec::new(),
        active: BTreeSet::new(),
        pairs: VecDeque::new(),
        pending: VecDeque::new(),
        max_rules,
        max_word_len,
        longest_lhs: 0,
    };
    let mut result = Ok(());
    for (l, r, res) in m.entries() {
        let rule = Rule {
            lhs: vec![l, r],
            rhs: vec![res],
            justification: Justification::Table {
                left: l,
                right: r,
                result: res,
            },
        };
        if let Err(stop) = c.push_rule(rule) {
            result = Err(stop);
            break;
        }
    }
    let result = result.and_then(|_| c.run());
    match result {
        Ok(()) => RewriteOutcome::Confluent(c.system()),
        Err(Stop::Identified(rule)) => {
            let system = c.system();
            let trace =
                unfold_rule(&system.rules, rule, MAX_TRACE_STEPS).map(|steps| EqualityTrace {
                    start: system.rules[rule].lhs[0],
                    end: system.rules[rule].rhs[0],
                    steps,
                });
            RewriteOutcome::GeneratorsIdentified {
                system,
                rule,
                trace,
            }
        }
        Err(Stop::Limit) => RewriteOutcome::LimitExceeded {
            rules_created: c.rules.len(),
            longest_lhs: c.longest_lhs,
        },
    }
}

/// Table-level steps turning `rules[id].lhs` into `rules[id].rhs`, or `None`
/// if longer than `cap`.
pub fn unfold_rule(rules: &[Rule], id: usize, cap: usize) -> Option<Vec<TraceStep>> {
    let mut memo = HashMap::new();
    unfold(rules, id, cap, &mut memo)
}

fn unfold(
    rules: &[Rule],
    id: usize,
    cap: usize,
    memo: &mut HashMap<usize, Vec<TraceStep>>,
) -> Option<Vec<TraceStep>> {
    if let Some(p) = memo.get(&id) {
        return Some(p.clone());
    }
    let rule = &rules[id];
    let path = match &rule.justification {
        Justification::Table {
            left,
            right,
            result,
        } => vec![TraceStep {
            word: vec![*left, *right],
            position: 0,
            entry: (*left, *right, *result),
            direction: Direction::Contract,
        }],
        Justification::Derived {
            from,
            left_path,
            right_path,
        } => {
            let to_lhs = unfold_path(rules, from, left_path, cap, memo)?;
            let to_rhs = unfold_path(rules, from, right_path, cap, memo)?;
            let mut path = reverse_path(&to_lhs);
            path.extend(to_rhs);
            path
        }
    };
    if path.len() > cap {
        return None;
    }
    memo.insert(id, path.clone());
    Some(path)
}

fn unfold_path(
    rules: &[Rule],
    from: &[usize],
    steps: &[RuleStep],
    cap: usize,
    memo: &mut HashMap<usize, Vec<TraceStep>>,
) -> Option<Vec<TraceStep>> {
    let mut cur = from.to_vec();
    let mut out = Vec::new();
    for &step in steps {
        let sub = unfold(rules, step.rule, cap, memo)?;
        let lhs_len = rules[step.rule].lhs.len();
        let prefix = &cur[..step.position];
        let suffix = cur[step.position + lhs_len..].to_vec();
        for s in sub {
            let mut word = prefix.to_vec();
            word.extend_from_slice(&s.word);
            word.extend_from_slice(&suffix);
            out.push(TraceStep {
                word,
                position: s.position + prefix.len(),
                entry: s.entry,
                direction: s.direction,
            });
        }
        if out.len() > cap {
            return None;
        }
        cur = apply_rule(rules, &cur, step)?;
    }
    Some(out)
}

fn reverse_path(path: &[TraceStep]) -> Vec<TraceStep> {
    path.iter()
        .rev()
        .map(|s| TraceStep {
            word: s.apply().expect("recorded step applies"),
            position: s.position,
            entry: s.entry,
            direction: match s.direction {
                Direction::Contract => Direction::Expand,
                Direction::Expand => Direction::Contract,
            },
        })
        .collect()
}
