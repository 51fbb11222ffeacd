//! Congruence closure of the defining relations, restricted to short words.

use std::collections::{BTreeMap, HashMap, VecDeque};

use super::{shortlex_cmp, Direction, EqualityTrace, PartialMagma, TraceStep, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureOutcome {
    /// Set when two distinct generators fall into one class.
    pub identification: Option<EqualityTrace>,
    /// The class of each generator among words of length `<= max_word_len`,
    /// shortlex-sorted; generators in the same class share one entry.
    pub classes: Vec<Vec<Word>>,
    pub words_examined: usize,
}

/// Explores, from each generator, every word of length at most
/// `max_word_len` reachable by applying defined products in either
/// direction. Two generators in one component are equal in every semigroup
/// that extends the partial magma.
pub fn bounded_congruence_closure(m: &PartialMagma, max_word_len: usize) -> ClosureOutcome {
    assert!(max_word_len >= 1, "max_word_len must be positive");
    let n = m.size();
    let mut preimages: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (l, r, res) in m.entries() {
        preimages[res].push((l, r));
    }

    // component id per visited word
    let mut component: HashMap<Word, usize> = HashMap::new();
    let mut classes: Vec<Vec<Word>> = Vec::new();
    let mut first_hit: Option<(usize, usize)> = None;

    for g in 0..n {
        if let Some(&c) = component.get(&vec![g]) {
            if first_hit.is_none() {
                first_hit = Some((classes_generator(&classes[c]), g));
            }
            continue;
        }
        let id = classes.len();
        let mut members = Vec::new();
        let mut queue = VecDeque::from([vec![g]]);
        component.insert(vec![g], id);
        while let Some(w) = queue.pop_front() {
            for (next, _) in neighbours(m, &preimages, &w, max_word_len) {
                if !component.contains_key(&next) {
                    component.insert(next.clone(), id);
                    queue.push_back(next);
                }
            }
            members.push(w);
        }
        members.sort_by(|a, b| shortlex_cmp(a, b));
        classes.push(members);
    }

    let identification = first_hit.map(|(a, b)| shortest_trace(m, &preimages, b, a, max_word_len));
    ClosureOutcome {
        identification,
        words_examined: component.len(),
        classes,
    }
}

fn classes_generator(class: &[Word]) -> usize {
    class
        .iter()
        .find(|w| w.len() == 1)
        .expect("class holds its generator")[0]
}

/// Single-step neighbours of `w`: contractions by position, then expansions
/// by position and pair order.
fn neighbours(
    m: &PartialMagma,
    preimages: &[Vec<(usize, usize)>],
    w: &[usize],
    max_len: usize,
) -> Vec<(Word, TraceStep)> {
    let mut out = Vec::new();
    for p in 0..w.len().saturating_sub(1) {
        if let Some(res) = m.get(w[p], w[p + 1]) {
            let step = TraceStep {
                word: w.to_vec(),
                position: p,
                entry: (w[p], w[p + 1], res),
                direction: Direction::Contract,
            };
            out.push((step.apply().unwrap(), step));
        }
    }
    if w.len() < max_len {
        for (p, &x) in w.iter().enumerate() {
            for &(l, r) in &preimages[x] {
                let step = TraceStep {
                    word: w.to_vec(),
                    position: p,
                    entry: (l, r, x),
                    direction: Direction::Expand,
                };
                out.push((step.apply().unwrap(), step));
            }
        }
    }
    out
}

/// BFS from generator `from` to generator `to`.
fn shortest_trace(
    m: &PartialMagma,
    preimages: &[Vec<(usize, usize)>],
    from: usize,
    to: usize,
    max_len: usize,
) -> EqualityTrace {
    let target = vec![to];
    let mut parent: BTreeMap<Word, Option<TraceStep>> = BTreeMap::new();
    parent.insert(vec![from], None);
    let mut queue = VecDeque::from([vec![from]]);
    'bfs: while let Some(w) = queue.pop_front() {
        for (next, step) in neighbours(m, preimages, &w, max_len) {
            if parent.contains_key(&next) {
                continue;
            }
            let done = next == target;
            parent.insert(next.clone(), Some(step));
            if done {
                break 'bfs;
            }
            queue.push_back(next);
        }
    }
    let mut steps = Vec::new();
    let mut cur = target;
    while let Some(Some(step)) = parent.get(&cur) {
        cur = step.word.clone();
        steps.push(step.clone());
    }
    steps.reverse();
    EqualityTrace {
        start: from,
        end: to,
        steps,
    }
}
