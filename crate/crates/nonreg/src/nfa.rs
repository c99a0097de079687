//! Nondeterministic finite automata with optional ε-moves.
//!
//! This is the target representation for every bounded-budget construction in
//! the crate, and the algebra (subset construction, complement, product,
//! emptiness) drives the decision pipelines. States are dense indices;
//! everything iterates in sorted order so constructions are reproducible.

use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    alphabet: BTreeSet<char>,
    n_states: usize,
    /// (state, label) -> successor set; `None` labels ε-moves.
    transitions: BTreeMap<(usize, Option<char>), BTreeSet<usize>>,
    initial: BTreeSet<usize>,
    accepting: BTreeSet<usize>,
}

impl Nfa {
    pub fn new<I: IntoIterator<Item = char>>(alphabet: I) -> Nfa {
        Nfa {
            alphabet: alphabet.into_iter().collect(),
            n_states: 0,
            transitions: BTreeMap::new(),
            initial: BTreeSet::new(),
            accepting: BTreeSet::new(),
        }
    }

    pub fn add_state(&mut self) -> usize {
        self.n_states += 1;
        self.n_states - 1
    }

    pub fn add_transition(&mut self, from: usize, label: Option<char>, to: usize) {
        debug_assert!(from < self.n_states && to < self.n_states);
        debug_assert!(label.map_or(true, |c| self.alphabet.contains(&c)));
        self.transitions.entry((from, label)).or_default().insert(to);
    }

    pub fn set_initial(&mut self, state: usize) {
        self.initial.insert(state);
    }

    pub fn set_accepting(&mut self, state: usize) {
        self.accepting.insert(state);
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn alphabet(&self) -> &BTreeSet<char> {
        &self.alphabet
    }

    pub fn initial_states(&self) -> &BTreeSet<usize> {
        &self.initial
    }

    pub fn accepting_states(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    pub fn successors(&self, state: usize, label: Option<char>) -> Option<&BTreeSet<usize>> {
        self.transitions.get(&(state, label))
    }

    pub fn has_epsilon_moves(&self) -> bool {
        self.transitions.keys().any(|(_, l)| l.is_none())
    }

    pub fn epsilon_closure(&self, set: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut closure = set.clone();
        let mut work: Vec<usize> = set.iter().copied().collect();
        while let Some(s) = work.pop() {
            if let Some(succ) = self.transitions.get(&(s, None)) {
                for &t in succ {
                    if closure.insert(t) {
                        work.push(t);
                    }
                }
            }
        }
        closure
    }

    /// One subset step: ε-closure of the letter-successors of `set`.
    pub fn step(&self, set: &BTreeSet<usize>, letter: char) -> BTreeSet<usize> {
        let mut next = BTreeSet::new();
        for &s in set {
            if let Some(succ) = self.transitions.get(&(s, Some(letter))) {
                next.extend(succ.iter().copied());
            }
        }
        self.epsilon_closure(&next)
    }

    pub fn accepts(&self, word: &str) -> Result<bool> {
        let mut current = self.epsilon_closure(&self.initial);
        for c in word.chars() {
            if !self.alphabet.contains(&c) {
                return Err(Error::AlphabetViolation(c));
            }
            current = self.step(&current, c);
            if current.is_empty() {
                return Ok(false);
            }
        }
        Ok(current.iter().any(|s| self.accepting.contains(s)))
    }

    /// True when the automaton is ε-free with a single initial state and at
    /// most one successor per (state, letter).
    pub fn is_deterministic(&self) -> bool {
        self.initial.len() == 1
            && self
                .transitions
                .iter()
                .all(|((_, l), succ)| l.is_some() && succ.len() <= 1)
    }

    /// Subset construction. The result is deterministic and complete (a sink
    /// subset is materialized), with state 0 the initial subset.
    pub fn determinize(&self) -> Nfa {
        let mut out = Nfa::new(self.alphabet.iter().copied());
        let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::new();
        let start = self.epsilon_closure(&self.initial);
        let s0 = out.add_state();
        index.insert(start.clone(), s0);
        out.set_initial(s0);
        if start.iter().any(|s| self.accepting.contains(s)) {
            out.set_accepting(s0);
        }
        let mut queue = VecDeque::from([start]);
        while let Some(subset) = queue.pop_front() {
            let from = index[&subset];
            for &c in &self.alphabet {
                let next = self.step(&subset, c);
                let to = match index.get(&next) {
                    Some(&i) => i,
                    None => {
                        let i = out.add_state();
                        if next.iter().any(|s| self.accepting.contains(s)) {
                            out.set_accepting(i);
                        }
                        index.insert(next.clone(), i);
                        queue.push_back(next);
                        i
                    }
                };
                out.add_transition(from, Some(c), to);
            }
        }
        out
    }

    /// Complement over this automaton's alphabet: determinize, then flip
    /// acceptance on the (complete) result.
    pub fn complement(&self) -> Nfa {
        let det = self.determinize();
        let mut out = det.clone();
        out.accepting = (0..det.n_states)
            .filter(|s| !det.accepting.contains(s))
            .collect();
        out
    }

    /// Product construction for the intersection. Requires equal alphabets.
    pub fn product_intersect(&self, other: &Nfa) -> Result<Nfa> {
        if self.alphabet != other.alphabet {
            return Err(Error::Invalid("product of NFAs over different alphabets".into()));
        }
        let mut out = Nfa::new(self.alphabet.iter().copied());
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut queue = VecDeque::new();
        let intern = |p: (usize, usize),
                          out: &mut Nfa,
                          queue: &mut VecDeque<(usize, usize)>,
                          index: &mut HashMap<(usize, usize), usize>|
         -> usize {
            match index.get(&p) {
                Some(&i) => i,
                None => {
                    let i = out.add_state();
                    if self.accepting.contains(&p.0) && other.accepting.contains(&p.1) {
                        out.set_accepting(i);
                    }
                    index.insert(p, i);
                    queue.push_back(p);
                    i
                }
            }
        };
        for &a in &self.initial {
            for &b in &other.initial {
                let i = intern((a, b), &mut out, &mut queue, &mut index);
                out.set_initial(i);
            }
        }
        while let Some((a, b)) = queue.pop_front() {
            let from = index[&(a, b)];
            for &c in &self.alphabet {
                if let (Some(sa), Some(sb)) = (
                    self.transitions.get(&(a, Some(c))),
                    other.transitions.get(&(b, Some(c))),
                ) {
                    for &ta in sa {
                        for &tb in sb {
                            let to = intern((ta, tb), &mut out, &mut queue, &mut index);
                            out.add_transition(from, Some(c), to);
                        }
                    }
                }
            }
            // ε-moves advance one side at a time
            if let Some(sa) = self.transitions.get(&(a, None)) {
                for &ta in sa {
                    let to = intern((ta, b), &mut out, &mut queue, &mut index);
                    out.add_transition(from, None, to);
                }
            }
            if let Some(sb) = other.transitions.get(&(b, None)) {
                for &tb in sb {
                    let to = intern((a, tb), &mut out, &mut queue, &mut index);
                    out.add_transition(from, None, to);
                }
            }
        }
        Ok(out)
    }

    /// Union via a fresh initial state with ε-moves into both machines.
    pub fn union(&self, other: &Nfa) -> Result<Nfa> {
        if self.alphabet != other.alphabet {
            return Err(Error::Invalid("union of NFAs over different alphabets".into()));
        }
        let mut out = Nfa::new(self.alphabet.iter().copied());
        let offset_self = 0;
        for _ in 0..self.n_states {
            out.add_state();
        }
        let offset_other = self.n_states;
        for _ in 0..other.n_states {
            out.add_state();
        }
        for ((s, l), succ) in &self.transitions {
            for &t in succ {
                out.add_transition(offset_self + s, *l, offset_self + t);
            }
        }
        for ((s, l), succ) in &other.transitions {
            for &t in succ {
                out.add_transition(offset_other + s, *l, offset_other + t);
            }
        }
        for &s in &self.accepting {
            out.set_accepting(offset_self + s);
        }
        for &s in &other.accepting {
            out.set_accepting(offset_other + s);
        }
        let start = out.add_state();
        out.set_initial(start);
        for &s in &self.initial {
            out.add_transition(start, None, offset_self + s);
        }
        for &s in &other.initial {
            out.add_transition(start, None, offset_other + s);
        }
        Ok(out)
    }

    /// True when no accepting state is reachable from the initial set.
    pub fn is_empty(&self) -> bool {
        self.shortest_word().is_none()
    }

    /// Shortest accepted word, ties broken lexicographically; `None` for the
    /// empty language.
    pub fn shortest_word(&self) -> Option<String> {
        let start = self.epsilon_closure(&self.initial);
        if start.iter().any(|s| self.accepting.contains(s)) {
            return Some(String::new());
        }
        let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::from([start.clone()]);
        let mut queue = VecDeque::from([(start, String::new())]);
        while let Some((subset, word)) = queue.pop_front() {
            for &c in &self.alphabet {
                let next = self.step(&subset, c);
                if next.is_empty() || seen.contains(&next) {
                    continue;
                }
                let mut w = word.clone();
                w.push(c);
                if next.iter().any(|s| self.accepting.contains(s)) {
                    return Some(w);
                }
                seen.insert(next.clone());
                queue.push_back((next, w));
            }
        }
        None
    }

    /// All accepted words of length at most `max_len`, found by walking the
    /// prefix tree with live subsets.
    pub fn words_up_to(&self, max_len: u32) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let start = self.epsilon_closure(&self.initial);
        let mut stack = vec![(start, String::new())];
        while let Some((subset, word)) = stack.pop() {
            if subset.iter().any(|s| self.accepting.contains(s)) {
                out.insert(word.clone());
            }
            if (word.chars().count() as u32) < max_len {
                for &c in &self.alphabet {
                    let next = self.step(&subset, c);
                    if !next.is_empty() {
                        let mut w = word.clone();
                        w.push(c);
                        stack.push((next, w));
                    }
                }
            }
        }
        out
    }

    /// Slice comparison: same accepted words up to `max_len`.
    pub fn equivalent_up_to(&self, other: &Nfa, max_len: u32) -> bool {
        self.words_up_to(max_len) == other.words_up_to(max_len)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// a* over {a, b}
    fn a_star() -> Nfa {
        let mut n = Nfa::new(['a', 'b']);
        let s = n.add_state();
        n.set_initial(s);
        n.set_accepting(s);
        n.add_transition(s, Some('a'), s);
        n
    }

    #[test]
    fn complement_of_a_star_accepts_b() {
        let comp = a_star().complement();
        assert!(comp.accepts("b").unwrap());
        assert!(!comp.accepts("aa").unwrap());
        assert!(!comp.accepts("").unwrap());
    }

    #[test]
    fn double_complement_preserves_language() {
        let n = a_star();
        let nn = n.complement().complement();
        assert!(n.equivalent_up_to(&nn, 10));
    }

    #[test]
    fn product_with_own_complement_is_empty() {
        let n = a_star();
        let prod = n.product_intersect(&n.complement()).unwrap();
        assert!(prod.is_empty());
    }

    #[test]
    fn union_and_de_morgan_on_slices() {
        let a = a_star();
        let mut b = Nfa::new(['a', 'b']);
        let s = b.add_state();
        b.set_initial(s);
        b.set_accepting(s);
        b.add_transition(s, Some('b'), s);
        let union = a.union(&b).unwrap();
        let lhs = union.complement();
        let rhs = a.complement().product_intersect(&b.complement()).unwrap();
        assert!(lhs.equivalent_up_to(&rhs, 8));
    }

    #[test]
    fn enumerate_slice_of_a_star() {
        let words = a_star().words_up_to(3);
        let expect: BTreeSet<String> =
            ["", "a", "aa", "aaa"].iter().map(|s| s.to_string()).collect();
        assert_eq!(words, expect);
    }

    #[test]
    fn epsilon_moves_respected() {
        let mut n = Nfa::new(['a']);
        let s0 = n.add_state();
        let s1 = n.add_state();
        let s2 = n.add_state();
        n.set_initial(s0);
        n.set_accepting(s2);
        n.add_transition(s0, None, s1);
        n.add_transition(s1, Some('a'), s2);
        assert!(n.accepts("a").unwrap());
        assert!(!n.accepts("").unwrap());
        let det = n.determinize();
        assert!(det.is_deterministic());
        assert!(det.accepts("a").unwrap());
    }

    #[test]
    fn shortest_word_is_length_lex_minimal() {
        let mut n = Nfa::new(['a', 'b']);
        let s0 = n.add_state();
        let s1 = n.add_state();
        n.set_initial(s0);
        n.set_accepting(s1);
        n.add_transition(s0, Some('b'), s1);
        n.add_transition(s0, Some('a'), s1);
        assert_eq!(n.shortest_word(), Some("a".to_string()));
    }
}
