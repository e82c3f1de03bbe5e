//! Finite automata over a fixed alphabet, used to decide questions about
//! right-linear grammars exactly.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

/// A non-deterministic automaton with λ-moves.
#[derive(Debug, Clone, Default)]
pub struct Nfa {
    states: usize,
    start: usize,
    accepting: BTreeSet<usize>,
    /// `None` labels a λ-move.
    edges: Vec<(usize, Option<char>, usize)>,
}

impl Nfa {
    pub fn new() -> Nfa {
        Nfa {
            states: 1,
            ..Nfa::default()
        }
    }

    pub fn add_state(&mut self) -> usize {
        self.states += 1;
        self.states - 1
    }

    pub fn set_start(&mut self, s: usize) {
        self.start = s;
    }

    pub fn set_accepting(&mut self, s: usize) {
        self.accepting.insert(s);
    }

    pub fn add_edge(&mut self, from: usize, label: Option<char>, to: usize) {
        self.edges.push((from, label, to));
    }

    fn closure(&self, set: &mut BTreeSet<usize>) {
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(s) = stack.pop() {
            for &(from, label, to) in &self.edges {
                if from == s && label.is_none() && set.insert(to) {
                    stack.push(to);
                }
            }
        }
    }
}

/// A complete deterministic automaton. Symbols outside the alphabet are
/// rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Vec<char>,
    /// `delta[state][symbol index]`
    delta: Vec<Vec<usize>>,
    accepting: Vec<bool>,
    start: usize,
}

impl Dfa {
    /// Subset construction. Every state has a move on every symbol of
    /// `alphabet`; the empty subset becomes the dead state.
    pub fn from_nfa(nfa: &Nfa, alphabet: &BTreeSet<char>) -> Dfa {
        let alphabet: Vec<char> = alphabet.iter().copied().collect();
        let mut start = BTreeSet::from([nfa.start]);
        nfa.closure(&mut start);
        let mut ids: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::from([(start.clone(), 0)]);
        let mut subsets = vec![start];
        let mut delta: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        while i < subsets.len() {
            let mut row = Vec::with_capacity(alphabet.len());
            for &c in &alphabet {
                let mut next: BTreeSet<usize> = nfa
                    .edges
                    .iter()
                    .filter(|(from, label, _)| *label == Some(c) && subsets[i].contains(from))
                    .map(|&(_, _, to)| to)
                    .collect();
                nfa.closure(&mut next);
                let id = *ids.entry(next.clone()).or_insert_with(|| {
                    subsets.push(next);
                    subsets.len() - 1
                });
                row.push(id);
            }
            delta.push(row);
            i += 1;
        }
        let accepting = subsets
            .iter()
            .map(|s| s.iter().any(|q| nfa.accepting.contains(q)))
            .collect();
        Dfa {
            alphabet,
            delta,
            accepting,
            start: 0,
        }
    }

    /// The automaton for `T*·{$}` where `T` is the alphabet without `marker`.
    pub fn marked_strings(alphabet: &BTreeSet<char>, marker: char) -> Dfa {
        let alphabet: Vec<char> = alphabet.iter().copied().collect();
        let row = |state: usize| -> Vec<usize> {
            alphabet
                .iter()
                .map(|&c| match (state, c == marker) {
                    (0, false) => 0,
                    (0, true) => 1,
                    _ => 2,
                })
                .collect()
        };
        Dfa {
            delta: vec![row(0), row(1), row(2)],
            alphabet,
            accepting: vec![false, true, false],
            start: 0,
        }
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn states(&self) -> usize {
        self.delta.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    /// The move on `c`, or `None` for a symbol outside the alphabet.
    pub fn step(&self, q: usize, c: char) -> Option<usize> {
        let i = self.alphabet.iter().position(|&a| a == c)?;
        Some(self.delta[q][i])
    }

    pub fn accepts(&self, input: &str) -> bool {
        let mut q = self.start;
        for c in input.chars() {
            match self.step(q, c) {
                Some(next) => q = next,
                None => return false,
            }
        }
        self.accepting[q]
    }

    pub fn complement(&self) -> Dfa {
        Dfa {
            accepting: self.accepting.iter().map(|a| !a).collect(),
            ..self.clone()
        }
    }

    /// Product automaton; both operands must share an alphabet.
    fn product(&self, other: &Dfa, accept: impl Fn(bool, bool) -> bool) -> Dfa {
        assert_eq!(
            self.alphabet, other.alphabet,
            "product over different alphabets"
        );
        let mut ids = BTreeMap::from([((self.start, other.start), 0)]);
        let mut pairs = vec![(self.start, other.start)];
        let mut delta = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            let row = (0..self.alphabet.len())
                .map(|c| {
                    let next = (self.delta[p][c], other.delta[q][c]);
                    *ids.entry(next).or_insert_with(|| {
                        pairs.push(next);
                        pairs.len() - 1
                    })
                })
                .collect();
            delta.push(row);
            i += 1;
        }
        Dfa {
            alphabet: self.alphabet.clone(),
            delta,
            accepting: pairs
                .iter()
                .map(|&(p, q)| accept(self.accepting[p], other.accepting[q]))
                .collect(),
            start: 0,
        }
    }

    pub fn intersect(&self, other: &Dfa) -> Dfa {
        self.product(other, |a, b| a && b)
    }

    pub fn union(&self, other: &Dfa) -> Dfa {
        self.product(other, |a, b| a || b)
    }

    /// A shortest accepted string, the least in alphabet order among those.
    pub fn shortest_accepted(&self) -> Option<String> {
        let mut parent: Vec<Option<(usize, char)>> = vec![None; self.states()];
        let mut seen = vec![false; self.states()];
        let mut queue = VecDeque::from([self.start]);
        seen[self.start] = true;
        while let Some(q) = queue.pop_front() {
            if self.accepting[q] {
                let mut out = Vec::new();
                let mut cur = q;
                while let Some((prev, c)) = parent[cur] {
                    out.push(c);
                    cur = prev;
                }
                return Some(out.into_iter().rev().collect());
            }
            for (i, &next) in self.delta[q].iter().enumerate() {
                if !seen[next] {
                    seen[next] = true;
                    parent[next] = Some((q, self.alphabet[i]));
                    queue.push_back(next);
                }
            }
        }
        None
    }

    pub fn is_empty(&self) -> bool {
        self.shortest_accepted().is_none()
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.states()];
        let mut stack = vec![self.start];
        seen[self.start] = true;
        while let Some(q) = stack.pop() {
            for &next in &self.delta[q] {
                if !seen[next] {
                    seen[next] = true;
                    stack.push(next);
                }
            }
        }
        seen
    }

    /// States that are reachable and from which an accepting state can be
    /// reached.
    pub fn live_states(&self) -> Vec<bool> {
        let reachable = self.reachable();
        let mut live: Vec<bool> = self.accepting.clone();
        loop {
            let mut changed = false;
            for q in 0..self.states() {
                if !live[q] && self.delta[q].iter().any(|&n| live[n]) {
                    live[q] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        live.iter().zip(reachable).map(|(l, r)| *l && r).collect()
    }

    /// No accepted string is a proper prefix of another accepted string.
    pub fn has_prefix_property(&self) -> bool {
        let live = self.live_states();
        (0..self.states())
            .filter(|&q| live[q] && self.accepting[q])
            .all(|q| self.delta[q].iter().all(|&n| !live[n]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alphabet(s: &str) -> BTreeSet<char> {
        s.chars().collect()
    }

    /// Accepts `a` followed by any number of `b`.
    fn ab_star() -> Dfa {
        let mut nfa = Nfa::new();
        let s = nfa.add_state();
        nfa.add_edge(0, Some('a'), s);
        nfa.add_edge(s, Some('b'), s);
        nfa.set_accepting(s);
        Dfa::from_nfa(&nfa, &alphabet("ab"))
    }

    #[test]
    fn subset_construction() {
        let d = ab_star();
        assert!(d.accepts("a"));
        assert!(d.accepts("abb"));
        assert!(!d.accepts(""));
        assert!(!d.accepts("ba"));
        assert!(!d.accepts("ac"));
        assert_eq!(d.shortest_accepted().as_deref(), Some("a"));
    }

    #[test]
    fn lambda_moves() {
        let mut nfa = Nfa::new();
        let s = nfa.add_state();
        nfa.add_edge(0, None, s);
        nfa.set_accepting(s);
        let d = Dfa::from_nfa(&nfa, &alphabet("a"));
        assert!(d.accepts(""));
        assert!(!d.accepts("a"));
    }

    #[test]
    fn boolean_operations() {
        let d = ab_star();
        let c = d.complement();
        assert!(c.accepts("b") && !c.accepts("ab"));
        assert!(d.intersect(&c).is_empty());
        let all = d.union(&c);
        assert!(all.complement().is_empty());
    }

    #[test]
    fn marked_strings() {
        let d = Dfa::marked_strings(&alphabet("$ab"), '$');
        assert!(d.accepts("$") && d.accepts("ab$"));
        assert!(!d.accepts("a") && !d.accepts("a$$") && !d.accepts("$a"));
    }

    #[test]
    fn prefix_property() {
        assert!(!ab_star().has_prefix_property());
        let mut nfa = Nfa::new();
        let s = nfa.add_state();
        nfa.add_edge(0, Some('a'), s);
        nfa.set_accepting(s);
        assert!(Dfa::from_nfa(&nfa, &alphabet("ab")).has_prefix_property());
    }
}
